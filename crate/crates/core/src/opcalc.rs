//! Symmetric functional calculus for tuples of complex matrices: the tuple
//! norm, symmetrized polynomial calculus, the operator Cauchy kernel
//! `G_w(A)` as a Taylor series, and `phi(A)` by sphere quadrature.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::cauchy::sigma_n;
use crate::clifford::{blade_product_sign, Multivector, Paravector};
use crate::error::{MonolieError, Result};
use crate::monogenic::MonogenicFunction;
use crate::poly::{factorial, multi_factorial, MonomialTable, Poly};
use crate::quadrature::{build_sphere_quadrature, Measure};
use crate::sampling::normal_vector;

pub type CMatrix = DMatrix<Complex64>;

/// Largest matrix size accepted.
pub const MAX_MATRIX_DIM: usize = 16;

/// Longest word expanded by [`symmetric_monomial`].
pub const WORD_CAP: usize = 8;

/// `(1 + sqrt 2)`: kernel series are used only for `|w| > (1 + sqrt 2) ||A||`.
pub const SCALE_FACTOR: f64 = 1.0 + std::f64::consts::SQRT_2;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `(A_1, ..., A_n)`, all `d x d`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixTuple {
    d: usize,
    mats: Vec<CMatrix>,
}

impl MatrixTuple {
    pub fn new(mats: Vec<CMatrix>) -> Result<Self> {
        let first = mats
            .first()
            .ok_or_else(|| MonolieError::InvalidArgument("empty matrix tuple".into()))?;
        let d = first.nrows();
        if d == 0 || d > MAX_MATRIX_DIM {
            return Err(MonolieError::UnsupportedDimension(d));
        }
        for m in &mats {
            if m.nrows() != d || m.ncols() != d {
                return Err(MonolieError::DimensionMismatch {
                    left: m.nrows().max(m.ncols()),
                    right: d,
                });
            }
            if m.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
                return Err(MonolieError::InvalidArgument("non-finite matrix entry".into()));
            }
        }
        Ok(Self { d, mats })
    }

    pub fn n(&self) -> usize {
        self.mats.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.mats
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            d: self.d,
            mats: self.mats.iter().map(|m| m * Complex64::new(s, 0.0)).collect(),
        }
    }

    pub fn identity(&self) -> CMatrix {
        CMatrix::identity(self.d, self.d)
    }
}

/// Multivector with `d x d` matrix coefficients, blades in bitmask order.
#[derive(Clone, Debug, PartialEq)]
pub struct CliffordMatrix {
    pub n: usize,
    pub d: usize,
    pub blades: Vec<CMatrix>,
}

impl CliffordMatrix {
    pub fn zero(n: usize, d: usize) -> Self {
        Self {
            n,
            d,
            blades: vec![CMatrix::zeros(d, d); 1 << n],
        }
    }

    pub fn blade(&self, mask: usize) -> &CMatrix {
        &self.blades[mask]
    }

    /// Blade `mask` of `self * u` for a scalar-coefficient multivector.
    pub fn mul_multivector(&self, u: &Multivector) -> Self {
        let mut out = Self::zero(self.n, self.d);
        for (a, m) in self.blades.iter().enumerate() {
            for (b, &c) in u.coeffs().iter().enumerate() {
                if c == ZERO {
                    continue;
                }
                let s = blade_product_sign(a, b);
                out.blades[a ^ b] += m * (c * s);
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.blades
            .iter()
            .zip(&other.blades)
            .map(|(a, b)| (a - b).iter().map(|c| c.norm()).fold(0.0, f64::max))
            .fold(0.0, f64::max)
    }
}

/// Spectral norm: the largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    m.singular_values().iter().copied().fold(0.0, f64::max)
}

/// `||A|| = (||A_1||^2 + ... + ||A_n||^2)^{1/2}` with spectral norms.
pub fn tuple_norm(a: &MatrixTuple) -> f64 {
    a.mats
        .iter()
        .map(|m| spectral_norm(m).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Average over all distinct orderings of the word with `alpha_j` copies
/// of `A_j`.
pub fn symmetric_monomial(a: &MatrixTuple, alpha: &[u32]) -> Result<CMatrix> {
    if alpha.len() != a.n() {
        return Err(MonolieError::DimensionMismatch {
            left: alpha.len(),
            right: a.n(),
        });
    }
    let len: usize = alpha.iter().map(|&v| v as usize).sum();
    if len > WORD_CAP {
        return Err(MonolieError::WordTooLong { len, cap: WORD_CAP });
    }
    let mut remaining = alpha.to_vec();
    let mut prefix = a.identity();
    let mut total = CMatrix::zeros(a.d, a.d);
    let mut count = 0usize;
    distinct_words(a, &mut remaining, len, &mut prefix, &mut total, &mut count);
    Ok(total / Complex64::new(count as f64, 0.0))
}

fn distinct_words(
    a: &MatrixTuple,
    remaining: &mut [u32],
    left: usize,
    prefix: &mut CMatrix,
    total: &mut CMatrix,
    count: &mut usize,
) {
    if left == 0 {
        *total += &*prefix;
        *count += 1;
        return;
    }
    for j in 0..remaining.len() {
        if remaining[j] == 0 {
            continue;
        }
        remaining[j] -= 1;
        let saved = prefix.clone();
        *prefix = &saved * &a.mats[j];
        distinct_words(a, remaining, left - 1, prefix, total, count);
        *prefix = saved;
        remaining[j] += 1;
    }
}

/// `p(A)` for a scalar polynomial `p` in `n` variables, each monomial
/// replaced by its symmetrized word.
pub fn symmetric_poly(a: &MatrixTuple, p: &Poly) -> Result<CMatrix> {
    if p.nvars() != a.n() {
        return Err(MonolieError::DimensionMismatch {
            left: p.nvars(),
            right: a.n(),
        });
    }
    let mut out = CMatrix::zeros(a.d, a.d);
    for (e, &c) in p.terms() {
        out += symmetric_monomial(a, e)? * c;
    }
    Ok(out)
}

/// All symmetrized words `Sym_alpha(A)` up to a total degree, built from
/// the recurrence `M(alpha + e_j) += A_j M(alpha)` over the graded table.
pub struct SymmetricWords {
    table: MonomialTable,
    words: Vec<CMatrix>,
}

impl SymmetricWords {
    pub fn new(a: &MatrixTuple, max_degree: usize) -> Self {
        let n = a.n();
        let table = MonomialTable::new(n, max_degree);
        let mut sums = vec![CMatrix::zeros(a.d, a.d); table.len()];
        sums[0] = a.identity();
        for deg in 0..max_degree {
            for idx in table.degree_range(deg) {
                for j in 0..n {
                    let up = table.up(j, idx);
                    let next = &a.mats[j] * &sums[idx];
                    sums[up] += next;
                }
            }
        }
        let words = sums
            .into_iter()
            .enumerate()
            .map(|(idx, m)| {
                let alpha = table.exponent(idx);
                let k: u32 = alpha.iter().sum();
                m * Complex64::new(multi_factorial(alpha) / factorial(k), 0.0)
            })
            .collect();
        Self { table, words }
    }

    pub fn table(&self) -> &MonomialTable {
        &self.table
    }

    pub fn word(&self, idx: usize) -> &CMatrix {
        &self.words[idx]
    }

    /// `sum_alpha coeffs[alpha] Sym_alpha` over the indices in `range`.
    fn contract(&self, coeffs: &[Complex64], range: std::ops::Range<usize>) -> CMatrix {
        let d = self.words[0].nrows();
        let mut out = CMatrix::zeros(d, d);
        for idx in range {
            let c = coeffs[idx];
            if c != ZERO {
                out += &self.words[idx] * c;
            }
        }
        out
    }
}

/// Taylor coefficients of `x -> E(w - (0, x))` at `x = 0`, by blade, over
/// the monomials of `table` (variables `x_1..x_n`).
///
/// With `F = (|w|^2 - 2<w,x> + |x|^2)^{-(n+1)/2}` the homogeneous parts
/// obey `k |w|^2 F_k = -(k-1+l) L F_{k-1} - (k-2+2l) Q F_{k-2}`, where
/// `l = (n+1)/2`, `L = -2<w,x>` and `Q = |x|^2` (Euler's identity applied
/// to `u F' = -l F u'`). Then `E = conj(w - x) F / sigma_n`.
pub fn kernel_taylor_coefficients(omega: &[f64], table: &MonomialTable) -> Result<Vec<Vec<Complex64>>> {
    let n = table.nvars();
    if omega.len() != n + 1 {
        return Err(MonolieError::DimensionMismatch {
            left: omega.len(),
            right: n + 1,
        });
    }
    let a0: f64 = omega.iter().map(|w| w * w).sum();
    if a0 == 0.0 {
        return Err(MonolieError::Singular("kernel series about the origin"));
    }
    let lambda = (n as f64 + 1.0) / 2.0;
    let kmax = table.max_degree();
    let mut f = vec![0.0f64; table.len()];
    f[0] = a0.powf(-lambda);
    for k in 1..=kmax {
        let kf = k as f64;
        let c1 = -(kf - 1.0 + lambda) / (kf * a0);
        for idx in table.degree_range(k - 1) {
            let v = f[idx];
            if v == 0.0 {
                continue;
            }
            for j in 0..n {
                f[table.up(j, idx)] += c1 * (-2.0 * omega[j + 1]) * v;
            }
        }
        if k >= 2 {
            let c2 = -(kf - 2.0 + 2.0 * lambda) / (kf * a0);
            for idx in table.degree_range(k - 2) {
                let v = f[idx];
                if v == 0.0 {
                    continue;
                }
                for j in 0..n {
                    f[table.up(j, table.up(j, idx))] += c2 * v;
                }
            }
        }
    }
    let inv_sigma = 1.0 / sigma_n(n)?;
    let mut blades = vec![vec![ZERO; table.len()]; 1 << n];
    for (idx, &v) in f.iter().enumerate() {
        blades[0][idx] = Complex64::new(omega[0] * v * inv_sigma, 0.0);
        for j in 0..n {
            blades[1 << j][idx] = Complex64::new(-omega[j + 1] * v * inv_sigma, 0.0);
        }
    }
    // + x_j F on blade e_j
    for deg in 0..kmax {
        for idx in table.degree_range(deg) {
            let v = f[idx] * inv_sigma;
            for j in 0..n {
                blades[1 << j][table.up(j, idx)] += Complex64::new(v, 0.0);
            }
        }
    }
    Ok(blades)
}

/// Truncated `G_w(A)` with the ratio of the last two term norms.
#[derive(Clone, Debug)]
pub struct KernelSeries {
    pub value: CliffordMatrix,
    pub term_norms: Vec<f64>,
    pub tail_ratio: f64,
}

fn check_scale(a: &MatrixTuple, omega: &[f64]) -> Result<f64> {
    let w = omega.iter().map(|v| v * v).sum::<f64>().sqrt();
    let bound = SCALE_FACTOR * tuple_norm(a);
    if w <= bound {
        return Err(MonolieError::Domain(format!(
            "kernel series needs |w| > (1 + sqrt 2) ||A||: {w} <= {bound}"
        )));
    }
    Ok(w)
}

fn ratio_of_last(norms: &[f64]) -> f64 {
    let nz: Vec<f64> = norms.iter().copied().filter(|&v| v > 1e-300).collect();
    match nz.len() {
        0 | 1 => 0.0,
        len => nz[len - 1] / nz[len - 2],
    }
}

/// `G_w(A) = sum_{k <= K} (-1)^k/k! <A, grad>^k E(w)` for a real
/// paravector `w`, with the tuple placed in the vector slots `x_1..x_n`.
pub fn kernel_series_ga(a: &MatrixTuple, omega: &[f64], kmax: usize) -> Result<KernelSeries> {
    let words = SymmetricWords::new(a, kmax);
    kernel_series_with_words(a, &words, omega)
}

fn kernel_series_with_words(a: &MatrixTuple, words: &SymmetricWords, omega: &[f64]) -> Result<KernelSeries> {
    if omega.len() != a.n() + 1 {
        return Err(MonolieError::DimensionMismatch {
            left: omega.len(),
            right: a.n() + 1,
        });
    }
    check_scale(a, omega)?;
    let table = words.table();
    let coeffs = kernel_taylor_coefficients(omega, table)?;
    let n = a.n();
    let mut value = CliffordMatrix::zero(n, a.d);
    let mut term_norms = Vec::with_capacity(table.max_degree() + 1);
    for k in 0..=table.max_degree() {
        let mut sq = 0.0;
        for (mask, blade) in coeffs.iter().enumerate() {
            let term = words.contract(blade, table.degree_range(k));
            sq += term.norm_squared();
            value.blades[mask] += term;
        }
        term_norms.push(sq.sqrt());
    }
    let tail_ratio = ratio_of_last(&term_norms);
    if tail_ratio >= 1.0 {
        return Err(MonolieError::Divergence { ratio: tail_ratio });
    }
    Ok(KernelSeries {
        value,
        term_norms,
        tail_ratio,
    })
}

/// Result of [`phi_of_a`].
#[derive(Clone, Debug)]
pub struct PhiResult {
    /// The `e_0` blade, `f_phi(A)`.
    pub matrix: CMatrix,
    /// Frobenius norms of the remaining blades, by bitmask.
    pub off_blade_norms: BTreeMap<usize, f64>,
    /// Largest tail-ratio estimate over the quadrature nodes.
    pub max_tail_ratio: f64,
    pub nodes: usize,
}

/// `int_{r S^n} G_w(A) n(w) f(w) d mu(w)`, returning the `e_0` blade.
///
/// The integral is linear in the symmetrized words, so the scalar Taylor
/// coefficients are accumulated over all nodes first and contracted with
/// the words once. The tail estimate at each node bounds the degree-`k`
/// term by `sum |coeff| ||Sym_alpha||_F`.
pub fn phi_of_a<F: MonogenicFunction + ?Sized>(
    a: &MatrixTuple,
    f: &F,
    r: f64,
    level: usize,
    kmax: usize,
) -> Result<PhiResult> {
    let n = a.n();
    if f.generators() != n {
        return Err(MonolieError::DimensionMismatch {
            left: f.generators(),
            right: n,
        });
    }
    if SCALE_FACTOR * tuple_norm(a) >= r {
        return Err(MonolieError::Domain(format!(
            "(1 + sqrt 2) ||A|| = {} must be below r = {r}",
            SCALE_FACTOR * tuple_norm(a)
        )));
    }
    let quad = build_sphere_quadrature(n, r, level, Measure::Hypersurface)?;
    let words = SymmetricWords::new(a, kmax);
    let table = words.table();
    let word_norms: Vec<f64> = (0..table.len()).map(|i| words.word(i).norm()).collect();
    let nblades = 1usize << n;

    let per_node: Vec<(Vec<Vec<Complex64>>, f64)> = (0..quad.len())
        .into_par_iter()
        .map(|i| {
            let omega = quad.point(i);
            let g = kernel_taylor_coefficients(&omega, table)?;
            let xc: Vec<Complex64> = omega.iter().map(|&v| Complex64::new(v, 0.0)).collect();
            let normal = Paravector::from_real(&quad.nodes[i])?.to_multivector();
            let u = (&normal * &f.eval(&xc)).scale(Complex64::new(quad.weights[i], 0.0));
            let mut acc = vec![vec![ZERO; table.len()]; nblades];
            for (b, gb) in g.iter().enumerate() {
                for (rr, &ur) in u.coeffs().iter().enumerate() {
                    if ur == ZERO {
                        continue;
                    }
                    let c = ur * blade_product_sign(b, rr);
                    let target = &mut acc[b ^ rr];
                    for (t, &v) in target.iter_mut().zip(gb) {
                        *t += v * c;
                    }
                }
            }
            let bounds: Vec<f64> = (0..=table.max_degree())
                .map(|k| {
                    table
                        .degree_range(k)
                        .map(|idx| g.iter().map(|gb| gb[idx].norm()).sum::<f64>() * word_norms[idx])
                        .sum()
                })
                .collect();
            Ok((acc, ratio_of_last(&bounds)))
        })
        .collect::<Result<_>>()?;

    let mut total = vec![vec![ZERO; table.len()]; nblades];
    let mut max_tail_ratio = 0.0f64;
    for (acc, ratio) in &per_node {
        max_tail_ratio = max_tail_ratio.max(*ratio);
        for (t, a) in total.iter_mut().zip(acc) {
            for (x, y) in t.iter_mut().zip(a) {
                *x += y;
            }
        }
    }
    if max_tail_ratio >= 1.0 {
        return Err(MonolieError::Divergence {
            ratio: max_tail_ratio,
        });
    }
    let full = 0..table.len();
    let matrix = words.contract(&total[0], full.clone());
    let off_blade_norms = (1..nblades)
        .map(|mask| (mask, words.contract(&total[mask], full.clone()).norm()))
        .collect();
    Ok(PhiResult {
        matrix,
        off_blade_norms,
        max_tail_ratio,
        nodes: quad.len(),
    })
}

/// `max ||p(A)|| / ||p||_{L^inf(S^{n-1})}` over `samples` random
/// homogeneous polynomials of the given degree. The sup norm is taken over
/// a dense direction grid (exact for `n = 1`).
pub fn poly_norm_probe<R: Rng>(a: &MatrixTuple, degree: u32, samples: usize, rng: &mut R) -> Result<f64> {
    let n = a.n();
    let table = MonomialTable::new(n, degree as usize);
    let directions: Vec<Vec<f64>> = if n == 1 {
        vec![vec![1.0], vec![-1.0]]
    } else {
        build_sphere_quadrature(n - 1, 1.0, 4 * degree as usize + 8, Measure::Probability)?.nodes
    };
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let range = table.degree_range(degree as usize);
        let coeffs = normal_vector(range.len(), rng);
        let mut p = Poly::zero(n);
        for (idx, c) in range.zip(coeffs) {
            p.add_term(table.exponent(idx).to_vec(), Complex64::new(c, 0.0));
        }
        let sup = directions
            .iter()
            .map(|x| p.eval_real(x).map(|v| v.norm()))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        if sup == 0.0 {
            continue;
        }
        let value = spectral_norm(&symmetric_poly(a, &p)?);
        worst = worst.max(value / sup);
    }
    Ok(worst)
}

/// Diagonal matrix from complex entries.
pub fn diag(entries: &[Complex64]) -> CMatrix {
    CMatrix::from_diagonal(&nalgebra::DVector::from_vec(entries.to_vec()))
}

/// Real-entry convenience constructor, row-major.
pub fn real_matrix(d: usize, rows: &[f64]) -> CMatrix {
    CMatrix::from_row_iterator(d, d, rows.iter().map(|&v| Complex64::new(v, 0.0)))
}
