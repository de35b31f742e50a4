//! Polynomial multivector calculus: the Dirac operator `D`, its conjugate,
//! the Cauchy-Kowalevski extension, and the homogeneous monogenic
//! extensions `W_{k,n+2}(w; z)` of the zonal harmonics.

use std::collections::BTreeMap;
use std::ops::{Add, Sub};

use num_complex::Complex64;

use crate::clifford::{blade_product_sign, Multivector, Paravector};
use crate::error::{MonolieError, Result};
use crate::geometry::bilinear;
use crate::harmonics::{homogenize, zonal_sequence};
use crate::poly::{factorial, Exponent, Poly, CLEANUP_THRESHOLD};

/// Multivector-valued function that can be evaluated at complex points
/// `(z_0, ..., z_n)`; the intended instances are left monogenic.
pub trait MonogenicFunction: Sync {
    fn generators(&self) -> usize;
    fn eval(&self, x: &[Complex64]) -> Multivector;
}

/// Wraps a closure as a [`MonogenicFunction`].
pub struct FnMonogenic<F> {
    n: usize,
    f: F,
}

impl<F> FnMonogenic<F>
where
    F: Fn(&[Complex64]) -> Multivector + Sync,
{
    pub fn new(n: usize, f: F) -> Self {
        Self { n, f }
    }
}

impl<F> MonogenicFunction for FnMonogenic<F>
where
    F: Fn(&[Complex64]) -> Multivector + Sync,
{
    fn generators(&self) -> usize {
        self.n
    }

    fn eval(&self, x: &[Complex64]) -> Multivector {
        (self.f)(x)
    }
}

/// `sum_alpha x^alpha u_alpha` over the variables `x_0..x_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMultivector {
    n: usize,
    terms: BTreeMap<Exponent, Multivector>,
}

impl PolyMultivector {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// `p e_0` for a scalar polynomial in the `n + 1` variables `x_0..x_n`.
    pub fn from_scalar(n: usize, p: &Poly) -> Result<Self> {
        if p.nvars() != n + 1 {
            return Err(MonolieError::DimensionMismatch {
                left: p.nvars(),
                right: n + 1,
            });
        }
        let mut out = Self::zero(n);
        for (e, &c) in p.terms() {
            out.add_term(e.clone(), Multivector::scalar(n, c)?);
        }
        Ok(out)
    }

    /// `p e_0` for a polynomial in `x_1..x_n` only.
    pub fn from_vector_poly(p: &Poly) -> Result<Self> {
        Self::from_scalar(p.nvars(), &p.shift_vars(1))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Multivector> {
        &self.terms
    }

    pub fn add_term(&mut self, exp: Exponent, coeff: Multivector) {
        assert_eq!(exp.len(), self.n + 1, "exponent length");
        assert_eq!(coeff.n(), self.n, "generator count");
        match self.terms.get_mut(&exp) {
            Some(slot) => *slot += &coeff,
            None => {
                self.terms.insert(exp, coeff);
            }
        }
    }

    /// Scalar polynomial carried by blade `mask`.
    pub fn component(&self, mask: usize) -> Poly {
        let mut p = Poly::zero(self.n + 1);
        for (e, u) in &self.terms {
            p.add_term(e.clone(), u.coeff(mask));
        }
        p
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .filter(|(_, u)| !u.is_zero(0.0))
            .map(|(e, _)| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms
            .values()
            .flat_map(|u| u.coeffs().iter().map(|c| c.norm()))
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs_coeff() <= tol
    }

    /// Zeroes coefficients of magnitude at most `threshold` and drops empty terms.
    pub fn cleanup(&mut self, threshold: f64) {
        for u in self.terms.values_mut() {
            for c in u.coeffs_mut() {
                if c.norm() <= threshold {
                    *c = Complex64::new(0.0, 0.0);
                }
            }
        }
        self.terms.retain(|_, u| !u.is_zero(0.0));
    }

    pub fn cleaned(mut self) -> Self {
        self.cleanup(CLEANUP_THRESHOLD);
        self
    }

    pub fn depends_on_x0(&self) -> bool {
        self.terms
            .iter()
            .any(|(e, u)| e[0] > 0 && !u.is_zero(0.0))
    }

    /// Restriction to the hyperplane `x_0 = 0`.
    pub fn restrict_x0_zero(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (e, u) in &self.terms {
            if e[0] == 0 {
                out.add_term(e.clone(), u.clone());
            }
        }
        out
    }

    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (e, u) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[i] -= 1;
            out.add_term(d, u.scale(Complex64::new(e[i] as f64, 0.0)));
        }
        out
    }

    /// `e_S * self` (left) or `self * e_S` (right) for a unit blade.
    pub fn blade_mul(&self, mask: usize, left: bool) -> Self {
        let mut out = Self::zero(self.n);
        for (e, u) in &self.terms {
            let mut coeffs = vec![Complex64::new(0.0, 0.0); u.coeffs().len()];
            for (b, &c) in u.coeffs().iter().enumerate() {
                let sign = if left {
                    blade_product_sign(mask, b)
                } else {
                    blade_product_sign(b, mask)
                };
                coeffs[mask ^ b] += c * sign;
            }
            out.add_term(
                e.clone(),
                Multivector::from_coeffs(self.n, coeffs).expect("same size"),
            );
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Self::zero(self.n);
        for (e, u) in &self.terms {
            out.add_term(e.clone(), u.scale(s));
        }
        out
    }

    /// Product with a scalar polynomial in `x_0..x_n`.
    pub fn mul_scalar_poly(&self, p: &Poly) -> Self {
        assert_eq!(p.nvars(), self.n + 1, "variable count");
        let mut out = Self::zero(self.n);
        for (ea, u) in &self.terms {
            for (eb, &c) in p.terms() {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, u.scale(c));
            }
        }
        out
    }

    /// `sum_j e_j d_j` with the generators acting on the chosen side.
    fn vector_dirac(&self, left: bool) -> Self {
        let mut out = Self::zero(self.n);
        for j in 1..=self.n {
            out = &out + &self.partial(j).blade_mul(1 << (j - 1), left);
        }
        out
    }

    /// `D f = e_0 d_0 f + sum_j e_j d_j f`.
    pub fn dirac_d(&self) -> Self {
        (&self.partial(0) + &self.vector_dirac(true)).cleaned()
    }

    /// `Dbar f = e_0 d_0 f - sum_j e_j d_j f`.
    pub fn dirac_dbar(&self) -> Self {
        (&self.partial(0) - &self.vector_dirac(true)).cleaned()
    }

    /// `f D`, generators multiplied from the right.
    pub fn dirac_d_right(&self) -> Self {
        (&self.partial(0) + &self.vector_dirac(false)).cleaned()
    }

    pub fn dirac_dbar_right(&self) -> Self {
        (&self.partial(0) - &self.vector_dirac(false)).cleaned()
    }

    /// Componentwise Laplacian in `x_0..x_n`.
    pub fn laplacian(&self) -> Self {
        let mut out = Self::zero(self.n);
        for i in 0..=self.n {
            out = &out + &self.partial(i).partial(i);
        }
        out.cleaned()
    }

    pub fn eval(&self, x: &[Complex64]) -> Result<Multivector> {
        if x.len() != self.n + 1 {
            return Err(MonolieError::DimensionMismatch {
                left: x.len(),
                right: self.n + 1,
            });
        }
        Ok(self.eval_unchecked(x))
    }

    fn eval_unchecked(&self, x: &[Complex64]) -> Multivector {
        let mut acc = Multivector::zero(self.n).expect("n already validated");
        for (e, u) in &self.terms {
            let mut m = Complex64::new(1.0, 0.0);
            for (xi, &p) in x.iter().zip(e) {
                if p > 0 {
                    m *= xi.powu(p);
                }
            }
            acc += &u.scale(m);
        }
        acc
    }

    pub fn eval_real(&self, x: &[f64]) -> Result<Multivector> {
        let xc: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.eval(&xc)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self - other).max_abs_coeff()
    }
}

impl MonogenicFunction for PolyMultivector {
    fn generators(&self) -> usize {
        self.n
    }

    fn eval(&self, x: &[Complex64]) -> Multivector {
        assert_eq!(x.len(), self.n + 1, "point dimension");
        self.eval_unchecked(x)
    }
}

impl Add for &PolyMultivector {
    type Output = PolyMultivector;
    fn add(self, rhs: &PolyMultivector) -> PolyMultivector {
        assert_eq!(self.n, rhs.n, "generator count");
        let mut out = self.clone();
        for (e, u) in &rhs.terms {
            out.add_term(e.clone(), u.clone());
        }
        out
    }
}

impl Sub for &PolyMultivector {
    type Output = PolyMultivector;
    fn sub(self, rhs: &PolyMultivector) -> PolyMultivector {
        assert_eq!(self.n, rhs.n, "generator count");
        let mut out = self.clone();
        for (e, u) in &rhs.terms {
            out.add_term(e.clone(), -u);
        }
        out
    }
}

/// Cauchy-Kowalevski extension `sum_m x_0^m/m! (-D_x)^m p` of a polynomial
/// that does not involve `x_0`; the result is left monogenic and equals
/// `p` on `x_0 = 0`.
pub fn ck_extension(p: &PolyMultivector) -> Result<PolyMultivector> {
    if p.depends_on_x0() {
        return Err(MonolieError::InvalidArgument(
            "Cauchy-Kowalevski extension needs data independent of x_0".into(),
        ));
    }
    let n = p.n();
    let mut result = p.clone();
    let mut current = p.clone();
    let mut m = 0u32;
    loop {
        m += 1;
        current = current.vector_dirac(true).scale(Complex64::new(-1.0, 0.0));
        current.cleanup(CLEANUP_THRESHOLD);
        if current.is_zero(0.0) {
            break;
        }
        let mut x0m = vec![0u32; n + 1];
        x0m[0] = m;
        let weight = Poly::monomial(x0m, Complex64::new(1.0 / factorial(m), 0.0));
        result = &result + &current.mul_scalar_poly(&weight);
    }
    Ok(result.cleaned())
}

fn check_direction(n: usize, omega: &[f64]) -> Result<()> {
    if omega.len() != n {
        return Err(MonolieError::DimensionMismatch {
            left: omega.len(),
            right: n,
        });
    }
    let norm = omega.iter().map(|w| w * w).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(MonolieError::Domain(format!(
            "direction must be a unit vector, |w| = {norm}"
        )));
    }
    Ok(())
}

/// Homogenized Gegenbauer polynomials
/// `table[j][m] = |z|_C^m C_m^{lambda_0 + j}(<w, z>/|z|_C)` for
/// `j = 0..=jmax`, `m = 0..=mmax`, evaluated from `s = <w,z>`, `q = z.z`
/// by the recurrence `m C_m = 2(m-1+l) s C_{m-1} - (m+2l-2) q C_{m-2}`.
pub(crate) fn gegenbauer_table(
    lambda0: f64,
    jmax: usize,
    mmax: usize,
    s: Complex64,
    q: Complex64,
) -> Vec<Vec<Complex64>> {
    let zero = Complex64::new(0.0, 0.0);
    (0..=jmax)
        .map(|j| {
            let l = lambda0 + j as f64;
            let mut row = vec![zero; mmax + 1];
            row[0] = Complex64::new(1.0, 0.0);
            if mmax >= 1 {
                row[1] = 2.0 * l * s;
            }
            for m in 2..=mmax {
                let mf = m as f64;
                row[m] = (2.0 * (mf - 1.0 + l) * s * row[m - 1]
                    - (mf + 2.0 * l - 2.0) * q * row[m - 2])
                    / mf;
            }
            row
        })
        .collect()
}

/// Unnormalized monogenic extensions `c_k W_{k,n+2}(w; z)` for
/// `k = 0..=kmax`, where `c_k = (n/(2k+n)) N(k,n+2)`.
///
/// `W_{k,n+2}` is the Cauchy-Kowalevski extension of the zonal polynomial
/// `h_k = Q_{k,n+2}(<w,z_vec>, z_vec.z_vec)`. Writing
/// `u = 1 - 2 r s + r^2 q`, the generating function satisfies
/// `(-Lap)^j u^{-n/2} = (-4 r^2)^j (n/2)_j j! u^{-n/2-j}` and
/// `D u^{-a} = -a u^{-a-1} (-2 r w + 2 r^2 z_vec)`, so every term of the
/// extension series is again a homogenized Gegenbauer polynomial:
///
/// ```text
/// scalar: sum_j   a_j z_0^{2j}   C^{n/2+j}_{k-2j}
/// vector: sum_j   b_j z_0^{2j+1} (-2 w C^{n/2+j+1}_{k-2j-1} + 2 z_vec C^{n/2+j+1}_{k-2j-2})
/// a_0 = 1, a_{j+1} = -a_j (n+2j)/(2j+1), b_j = a_j (n/2+j)/(2j+1)
/// ```
pub(crate) fn w_unnormalized_sequence(
    n: usize,
    kmax: usize,
    z0: Complex64,
    omega: &[f64],
    zv: &[Complex64],
) -> Vec<Paravector> {
    let zero = Complex64::new(0.0, 0.0);
    let w: Vec<Complex64> = omega.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let s: Complex64 = w.iter().zip(zv).map(|(a, b)| a * b).sum();
    let q: Complex64 = zv.iter().map(|c| c * c).sum();
    let half_n = n as f64 / 2.0;
    let jmax = kmax / 2 + 1;
    let table = gegenbauer_table(half_n, jmax, kmax, s, q);

    let mut a = vec![0.0; jmax + 1];
    let mut b = vec![0.0; jmax + 1];
    a[0] = 1.0;
    for j in 0..=jmax {
        let jf = j as f64;
        b[j] = a[j] * (half_n + jf) / (2.0 * jf + 1.0);
        if j < jmax {
            a[j + 1] = -a[j] * (n as f64 + 2.0 * jf) / (2.0 * jf + 1.0);
        }
    }
    let z0sq = z0 * z0;

    (0..=kmax)
        .map(|k| {
            let mut scalar = zero;
            let mut along_w = zero;
            let mut along_z = zero;
            let mut z0pow = Complex64::new(1.0, 0.0);
            let mut j = 0;
            while 2 * j <= k {
                scalar += a[j] * z0pow * table[j][k - 2 * j];
                if 2 * j < k {
                    let odd = z0pow * z0 * b[j];
                    along_w += -2.0 * odd * table[j + 1][k - 2 * j - 1];
                    if 2 * j + 2 <= k {
                        along_z += 2.0 * odd * table[j + 1][k - 2 * j - 2];
                    }
                }
                z0pow *= z0sq;
                j += 1;
            }
            let mut comps = Vec::with_capacity(n + 1);
            comps.push(scalar);
            for (wj, zj) in w.iter().zip(zv) {
                comps.push(along_w * wj + along_z * zj);
            }
            Paravector::new(comps).expect("n validated by caller")
        })
        .collect()
}

/// `c_k = (n/(2k+n)) N(k, n+2) = (n)_k / k!`.
pub fn zonal_series_weight(k: u32, n: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n as f64 + i as f64) / (i as f64 + 1.0))
}

/// `W_{k,n+2}(w; z)`: the homogeneous left monogenic extension to
/// `C^{n+1}` of the zonal polynomial `Q_{k,n+2}(<w,z_vec>, z_vec.z_vec)`.
///
/// For `k <= 1` this is `Q e_0 - z_0 (dQ/ds w + 2 dQ/dq z_vec)`; from
/// `k = 2` on the zonal polynomial is not harmonic in `n` variables and the
/// higher Cauchy-Kowalevski terms are needed.
pub fn w_eval(k: u32, n: usize, omega: &[f64], zeta: &Paravector) -> Result<Paravector> {
    check_direction(n, omega)?;
    if zeta.n() != n {
        return Err(MonolieError::DimensionMismatch {
            left: zeta.n(),
            right: n,
        });
    }
    let seq = w_unnormalized_sequence(n, k as usize, zeta.comps()[0], omega, zeta.vector_part());
    let weight = zonal_series_weight(k, n);
    Ok(seq[k as usize].scale(Complex64::new(1.0 / weight, 0.0)))
}

/// The first-order truncation `Q e_0 - z_0 (dQ/ds w + 2 dQ/dq z_vec)`.
/// It restricts to the zonal polynomial at `z_0 = 0` but is monogenic
/// only for `k <= 1`.
pub fn w_first_order(k: u32, n: usize, omega: &[f64], zeta: &Paravector) -> Result<Paravector> {
    check_direction(n, omega)?;
    if zeta.n() != n {
        return Err(MonolieError::DimensionMismatch {
            left: zeta.n(),
            right: n,
        });
    }
    let w: Vec<Complex64> = omega.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let zv = zeta.vector_part();
    let s = bilinear(&w, zv)?;
    let q = bilinear(zv, zv)?;
    let seq = zonal_sequence(n as u32 + 2, s, q, k);
    let ku = k as usize;
    let z0 = zeta.comps()[0];
    let mut comps = Vec::with_capacity(n + 1);
    comps.push(seq.value[ku]);
    for (wj, zj) in omega.iter().zip(zv) {
        comps.push(-z0 * (seq.ds[ku] * *wj + 2.0 * seq.dq[ku] * zj));
    }
    Paravector::new(comps)
}

/// Zonal polynomial `Q_{k,n+2}(<w,x_vec>, x_vec.x_vec)` in the variables
/// `x_0..x_n` (no `x_0` dependence).
pub fn zonal_polynomial(k: u32, n: usize, omega: &[f64]) -> Result<Poly> {
    check_direction(n, omega)?;
    let h = homogenize(k, n as u32 + 2)?;
    let nv = n + 1;
    let mut s_coeffs = vec![Complex64::new(0.0, 0.0); nv];
    for (j, &w) in omega.iter().enumerate() {
        s_coeffs[j + 1] = Complex64::new(w, 0.0);
    }
    let s = Poly::linear(&s_coeffs);
    let mut q = Poly::zero(nv);
    for j in 1..nv {
        let mut e = vec![0; nv];
        e[j] = 2;
        q.add_term(e, Complex64::new(1.0, 0.0));
    }
    let mut out = Poly::zero(nv);
    for (j, &a) in h.coeffs.iter().enumerate() {
        let sp = k - 2 * j as u32;
        out = &out + &(&s.pow(sp) * &q.pow(j as u32)).scale(Complex64::new(a, 0.0));
    }
    Ok(out)
}

/// `W_{k,n+2}(w; x)` as an exact polynomial: the Cauchy-Kowalevski
/// extension of the zonal polynomial.
pub fn w_polynomial(k: u32, n: usize, omega: &[f64]) -> Result<PolyMultivector> {
    let h = zonal_polynomial(k, n, omega)?;
    ck_extension(&PolyMultivector::from_scalar(n, &h)?)
}

/// `1 + k + 2 k (k+n) / (n+1)`, the sphere bound for `|W_{k,n+2}|`.
pub fn w_sphere_bound(k: u32, n: usize) -> f64 {
    let kf = k as f64;
    let nf = n as f64;
    1.0 + kf + 2.0 * kf * (kf + nf) / (nf + 1.0)
}

/// Empirical `max |W_{k,n+2}(w; x)|` over the supplied points of `S^n`,
/// together with the analytic bound.
pub fn w_bound_check(k: u32, n: usize, omega: &[f64], points: &[Vec<f64>]) -> Result<(f64, f64)> {
    let mut max = 0.0f64;
    for x in points {
        let z = Paravector::from_real(x)?;
        max = max.max(w_eval(k, n, omega, &z)?.norm());
    }
    Ok((max, w_sphere_bound(k, n)))
}

/// Finite-difference residual of the complexified Dirac equation at `zeta`.
///
/// Each real partial is a central difference with step `h`. The result is
/// the larger of `|sum_mu e_mu d f/d zeta_mu|` and
/// `max_mu |d f/d conj(zeta_mu)|`, where
/// `d/d zeta = (d/d xi - i d/d eta)/2`; both vanish for complex regular `f`.
pub fn complex_regular_residual<F>(f: F, zeta: &Paravector, h: f64) -> Result<f64>
where
    F: Fn(&Paravector) -> Result<Multivector>,
{
    let n = zeta.n();
    let i = Complex64::new(0.0, 1.0);
    let mut dirac = Multivector::zero(n)?;
    let mut cr = 0.0f64;
    for mu in 0..=n {
        let shifted = |step: Complex64| -> Result<Multivector> {
            let mut z = zeta.clone();
            z.comps_mut()[mu] += step;
            f(&z)
        };
        let d_xi = (&shifted(Complex64::new(h, 0.0))? - &shifted(Complex64::new(-h, 0.0))?)
            .scale(Complex64::new(0.5 / h, 0.0));
        let d_eta = (&shifted(Complex64::new(0.0, h))? - &shifted(Complex64::new(0.0, -h))?)
            .scale(Complex64::new(0.5 / h, 0.0));
        let holo = (&d_xi - &d_eta.scale(i)).scale(Complex64::new(0.5, 0.0));
        let anti = (&d_xi + &d_eta.scale(i)).scale(Complex64::new(0.5, 0.0));
        cr = cr.max(anti.norm());
        let unit = if mu == 0 {
            Multivector::one(n)?
        } else {
            Multivector::generator(n, mu)?
        };
        dirac += &(&unit * &holo);
    }
    Ok(dirac.norm().max(cr))
}
