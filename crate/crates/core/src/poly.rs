//! Sparse multivariate polynomials with complex coefficients.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{MonolieError, Result};

pub type Exponent = Vec<u32>;

/// Coefficients below this magnitude are dropped by [`Poly::cleanup`].
pub const CLEANUP_THRESHOLD: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponent, Complex64>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Complex64) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The coordinate function `x_i`.
    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, Complex64::new(1.0, 0.0));
        p
    }

    pub fn monomial(exp: Exponent, c: Complex64) -> Self {
        let mut p = Self::zero(exp.len());
        p.add_term(exp, c);
        p
    }

    /// `sum_i coeffs[i] x_i`.
    pub fn linear(coeffs: &[Complex64]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, &c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Complex64> {
        &self.terms
    }

    pub fn add_term(&mut self, exp: Exponent, c: Complex64) {
        assert_eq!(exp.len(), self.nvars, "exponent length");
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        let slot = self.terms.entry(exp).or_insert(Complex64::new(0.0, 0.0));
        *slot += c;
    }

    pub fn coeff(&self, exp: &[u32]) -> Complex64 {
        self.terms
            .get(exp)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.norm() == 0.0)
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .filter(|(_, c)| c.norm() != 0.0)
            .map(|(e, _)| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drops terms whose magnitude is at most `threshold`.
    pub fn cleanup(&mut self, threshold: f64) {
        self.terms.retain(|_, c| c.norm() > threshold);
    }

    pub fn cleaned(mut self) -> Self {
        self.cleanup(CLEANUP_THRESHOLD);
        self
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[i] -= 1;
            out.add_term(d, c * e[i] as f64);
        }
        out
    }

    /// Laplacian over all variables.
    pub fn laplacian(&self) -> Self {
        let mut out = Self::zero(self.nvars);
        for i in 0..self.nvars {
            out = &out + &self.derivative(i).derivative(i);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(self.nvars, Complex64::new(1.0, 0.0));
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn eval(&self, x: &[Complex64]) -> Result<Complex64> {
        if x.len() != self.nvars {
            return Err(MonolieError::DimensionMismatch {
                left: x.len(),
                right: self.nvars,
            });
        }
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut term = *c;
            for (xi, &p) in x.iter().zip(e) {
                if p > 0 {
                    term *= xi.powu(p);
                }
            }
            acc += term;
        }
        acc
    }

    pub fn eval_real(&self, x: &[f64]) -> Result<Complex64> {
        let xc: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.eval(&xc)
    }

    /// Re-embeds into a polynomial ring with `extra` leading variables.
    pub fn shift_vars(&self, extra: usize) -> Self {
        let mut out = Self::zero(self.nvars + extra);
        for (e, c) in &self.terms {
            let mut d = vec![0; extra];
            d.extend_from_slice(e);
            out.add_term(d, *c);
        }
        out
    }

    /// Homogeneous component of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e.iter().sum::<u32>() == d {
                out.add_term(e.clone(), *c);
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self - other).max_abs_coeff()
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), *c);
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -*c);
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count");
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

/// Graded table of all exponents in `nvars` variables up to a total
/// degree, with index maps for multiplication by a single variable.
#[derive(Clone, Debug)]
pub struct MonomialTable {
    nvars: usize,
    max_degree: usize,
    exps: Vec<Exponent>,
    degree_start: Vec<usize>,
    up: Vec<Vec<usize>>,
}

impl MonomialTable {
    pub fn new(nvars: usize, max_degree: usize) -> Self {
        let mut exps: Vec<Exponent> = Vec::new();
        let mut degree_start = Vec::with_capacity(max_degree + 2);
        for d in 0..=max_degree {
            degree_start.push(exps.len());
            let mut current = vec![0u32; nvars];
            enumerate_compositions(d as u32, 0, &mut current, &mut exps);
        }
        degree_start.push(exps.len());
        let index: std::collections::HashMap<&Exponent, usize> =
            exps.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let mut up = vec![vec![usize::MAX; exps.len()]; nvars];
        for (i, e) in exps.iter().enumerate() {
            if e.iter().sum::<u32>() as usize == max_degree {
                continue;
            }
            for (j, row) in up.iter_mut().enumerate() {
                let mut f = e.clone();
                f[j] += 1;
                row[i] = index[&f];
            }
        }
        Self {
            nvars,
            max_degree,
            exps,
            degree_start,
            up,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponent(&self, idx: usize) -> &[u32] {
        &self.exps[idx]
    }

    /// Index range of the exponents of total degree `d`.
    pub fn degree_range(&self, d: usize) -> std::ops::Range<usize> {
        self.degree_start[d]..self.degree_start[d + 1]
    }

    /// Index of `exp + e_j`; only valid below the maximal degree.
    #[inline]
    pub fn up(&self, j: usize, idx: usize) -> usize {
        self.up[j][idx]
    }

    pub fn index_of(&self, exp: &[u32]) -> Option<usize> {
        let d: u32 = exp.iter().sum();
        if d as usize > self.max_degree || exp.len() != self.nvars {
            return None;
        }
        self.degree_range(d as usize)
            .find(|&i| self.exps[i].as_slice() == exp)
    }
}

fn enumerate_compositions(
    remaining: u32,
    pos: usize,
    current: &mut Vec<u32>,
    out: &mut Vec<Exponent>,
) {
    let n = current.len();
    if n == 0 {
        if remaining == 0 {
            out.push(Vec::new());
        }
        return;
    }
    if pos == n - 1 {
        current[pos] = remaining;
        out.push(current.clone());
        current[pos] = 0;
        return;
    }
    for v in (0..=remaining).rev() {
        current[pos] = v;
        enumerate_compositions(remaining - v, pos + 1, current, out);
    }
    current[pos] = 0;
}

pub fn factorial(k: u32) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

/// `alpha! = prod alpha_j!`.
pub fn multi_factorial(alpha: &[u32]) -> f64 {
    alpha.iter().map(|&a| factorial(a)).product()
}
