//! Legendre polynomials `P_{k,n}` on `S^{n-1}`, the dimensions `N(k,n)` of
//! the spherical harmonic spaces, and the homogenized zonal polynomials
//! `Q_{k,n}(s, q)` with `Q_{k,n}(<w,z>, z.z) = |z|_C^k P_{k,n}(<w, z/|z|_C>)`.
//!
//! `P_{k,n}` is normalized by `P_{k,n}(1) = 1` and generated by
//! `(1 - 2tr + r^2)^{-(n-2)/2} = sum (n-2)/(2k+n-2) N(k,n) P_{k,n}(t) r^k`,
//! with the Chebyshev polynomials `cos(k arccos t)` for `n = 2`. Evaluation
//! uses the three-term recurrence obtained by differentiating the
//! generating function in `r`:
//!
//! ```text
//! (k+n-2) P_{k+1,n}(t) = (2k+n-2) t P_{k,n}(t) - k P_{k-1,n}(t)
//! ```

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;

use crate::error::{MonolieError, Result};
use crate::quadrature::GaussLegendre;

/// Arguments beyond `[-1, 1]` by more than this are rejected.
pub const T_RANGE_SLACK: f64 = 1e-12;

/// `N(k, n) = dim H^k(S^{n-1}) = (2k+n-2)(k+n-3)! / (k! (n-2)!)`.
pub fn dim_harmonics(k: u32, n: u32) -> Result<u64> {
    if n < 2 {
        return Err(MonolieError::InvalidArgument(format!(
            "N(k, n) needs n >= 2, got {n}"
        )));
    }
    if k == 0 {
        return Ok(1);
    }
    if n == 2 {
        return Ok(2);
    }
    // (k+n-3)! / (k! (n-3)!) is a binomial; the extra 1/(n-2) divides exactly
    // once multiplied by (2k+n-2).
    let binom = binomial(k as u128 + n as u128 - 3, k as u128);
    let num = (2 * k as u128 + n as u128 - 2) * binom;
    let value = num / (n as u128 - 2);
    u64::try_from(value)
        .map_err(|_| MonolieError::InvalidArgument(format!("N({k}, {n}) overflows u64")))
}

/// `N(k, n)` in floating point, usable for large `k`.
pub fn dim_harmonics_f64(k: u32, n: u32) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if n == 2 {
        return 2.0;
    }
    let mut binom = 1.0;
    for i in 1..=k {
        binom *= (i + n - 3) as f64 / i as f64;
    }
    (2 * k + n - 2) as f64 * binom / (n - 2) as f64
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn check_n(n: u32) -> Result<()> {
    if n < 2 {
        return Err(MonolieError::InvalidArgument(format!(
            "Legendre polynomials need n >= 2, got {n}"
        )));
    }
    Ok(())
}

fn check_t(t: f64) -> Result<f64> {
    if !t.is_finite() || t.abs() > 1.0 + T_RANGE_SLACK {
        return Err(MonolieError::Domain(format!("t = {t} outside [-1, 1]")));
    }
    Ok(t.clamp(-1.0, 1.0))
}

/// `P_{k,n}(t)`.
pub fn legendre_eval(k: u32, n: u32, t: f64) -> Result<f64> {
    check_n(n)?;
    let t = check_t(t)?;
    if n == 2 {
        return Ok((k as f64 * t.acos()).cos());
    }
    Ok(*legendre_sequence(k, n, t).last().unwrap())
}

/// `[P_{0,n}(t), ..., P_{kmax,n}(t)]` by the recurrence, any real `t`.
pub fn legendre_sequence(kmax: u32, n: u32, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(kmax as usize + 1);
    out.push(1.0);
    if kmax == 0 {
        return out;
    }
    out.push(t);
    for k in 1..kmax {
        let kf = k as f64;
        let nf = n as f64;
        let next = ((2.0 * kf + nf - 2.0) * t * out[k as usize] - kf * out[k as usize - 1])
            / (kf + nf - 2.0);
        out.push(next);
    }
    out
}

/// `(1 - 2tr + r^2)^{-(n-2)/2}`.
pub fn gf_closed_form(t: f64, r: f64, n: u32) -> f64 {
    (1.0 - 2.0 * t * r + r * r).powf(-(n as f64 - 2.0) / 2.0)
}

/// Partial sum of the generating series through degree `kmax`.
pub fn gf_partial_sum(t: f64, r: f64, n: u32, kmax: u32) -> Result<f64> {
    if n < 3 {
        return Err(MonolieError::InvalidArgument(format!(
            "generating series needs n >= 3, got {n}"
        )));
    }
    let t = check_t(t)?;
    if r.abs() > 0.9 {
        return Err(MonolieError::Domain(format!("|r| = {} exceeds 0.9", r.abs())));
    }
    let p = legendre_sequence(kmax, n, t);
    let nf = n as f64;
    let mut sum = 0.0;
    let mut rk = 1.0;
    for (k, pk) in p.iter().enumerate() {
        let kf = k as f64;
        sum += (nf - 2.0) / (2.0 * kf + nf - 2.0) * dim_harmonics_f64(k as u32, n) * pk * rk;
        rk *= r;
    }
    Ok(sum)
}

/// `Q_{k,n}(s, q) = sum_j a_j s^{k-2j} q^j` with `Q_{k,n}(t, 1) = P_{k,n}(t)`.
///
/// The monomial coefficients grow like `2^k`, so evaluating this form in
/// floating point loses about `k/3` digits; use [`legendre_sequence`] or
/// [`zonal_sequence`] for large `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogenizedLegendre {
    pub k: u32,
    pub n: u32,
    /// `a_j`, `j = 0..=k/2`.
    pub coeffs: Vec<f64>,
}

impl HomogenizedLegendre {
    pub fn eval(&self, s: Complex64, q: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &a) in self.coeffs.iter().enumerate() {
            acc += a * s.powu(self.k - 2 * j as u32) * q.powu(j as u32);
        }
        acc
    }

    pub fn eval_real(&self, s: f64, q: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, &a)| a * s.powi((self.k - 2 * j as u32) as i32) * q.powi(j as i32))
            .sum()
    }

    /// `dQ/ds`.
    pub fn ds(&self, s: Complex64, q: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &a) in self.coeffs.iter().enumerate() {
            let p = self.k - 2 * j as u32;
            if p > 0 {
                acc += a * p as f64 * s.powu(p - 1) * q.powu(j as u32);
            }
        }
        acc
    }

    /// `dQ/dq`.
    pub fn dq(&self, s: Complex64, q: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &a) in self.coeffs.iter().enumerate().skip(1) {
            acc += a * j as f64 * s.powu(self.k - 2 * j as u32) * q.powu(j as u32 - 1);
        }
        acc
    }

    /// `P_{k,n}(t)` through the polynomial form.
    pub fn eval_t(&self, t: f64) -> f64 {
        self.eval_real(t, 1.0)
    }

    /// `P'_{k,n}(t)` by exact differentiation of the polynomial form.
    pub fn derivative_t(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, &a)| {
                let p = self.k as i32 - 2 * j as i32;
                if p > 0 {
                    a * p as f64 * t.powi(p - 1)
                } else {
                    0.0
                }
            })
            .sum()
    }
}

type HomogenizedCache = RwLock<HashMap<(u32, u32), Arc<HomogenizedLegendre>>>;

fn cache() -> &'static HomogenizedCache {
    static CACHE: OnceLock<HomogenizedCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Homogenized coefficients of `P_{k,n}`, computed once per `(k, n)`.
pub fn homogenize(k: u32, n: u32) -> Result<Arc<HomogenizedLegendre>> {
    check_n(n)?;
    if let Some(h) = cache().read().expect("cache poisoned").get(&(k, n)) {
        return Ok(Arc::clone(h));
    }
    let mut prev: Vec<f64> = vec![1.0];
    let mut cur: Vec<f64> = vec![1.0];
    let coeffs = if k == 0 {
        prev
    } else {
        for deg in 1..k {
            let d = deg as f64;
            let nf = n as f64;
            let mut next = vec![0.0; (deg as usize).div_ceil(2) + 1];
            for (j, slot) in next.iter_mut().enumerate() {
                let from_s = cur.get(j).copied().unwrap_or(0.0);
                let from_q = if j > 0 {
                    prev.get(j - 1).copied().unwrap_or(0.0)
                } else {
                    0.0
                };
                *slot = ((2.0 * d + nf - 2.0) * from_s - d * from_q) / (d + nf - 2.0);
            }
            prev = std::mem::replace(&mut cur, next);
        }
        cur
    };
    let h = Arc::new(HomogenizedLegendre { k, n, coeffs });
    cache()
        .write()
        .expect("cache poisoned")
        .insert((k, n), Arc::clone(&h));
    Ok(h)
}

/// `Q_{k,n}(s,q)` with both partial derivatives for `k = 0..=kmax`.
#[derive(Clone, Debug)]
pub struct ZonalSequence {
    pub value: Vec<Complex64>,
    pub ds: Vec<Complex64>,
    pub dq: Vec<Complex64>,
}

/// Runs the homogenized recurrence
/// `(k+n-2) Q_{k+1} = (2k+n-2) s Q_k - k q Q_{k-1}` and its `s`, `q`
/// derivatives; no monomial expansion, so no cancellation at high degree.
pub fn zonal_sequence(n: u32, s: Complex64, q: Complex64, kmax: u32) -> ZonalSequence {
    let len = kmax as usize + 1;
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut value = vec![zero; len];
    let mut ds = vec![zero; len];
    let mut dq = vec![zero; len];
    value[0] = one;
    if kmax >= 1 {
        value[1] = s;
        ds[1] = one;
    }
    let nf = n as f64;
    for k in 1..kmax as usize {
        let kf = k as f64;
        let a = 2.0 * kf + nf - 2.0;
        let denom = kf + nf - 2.0;
        value[k + 1] = (a * s * value[k] - kf * q * value[k - 1]) / denom;
        ds[k + 1] = (a * (value[k] + s * ds[k]) - kf * q * ds[k - 1]) / denom;
        dq[k + 1] = (a * s * dq[k] - kf * (value[k - 1] + q * dq[k - 1])) / denom;
    }
    ZonalSequence { value, ds, dq }
}

/// `(P'_{k,n+2}(t), k(k+n)/(n+1) P_{k-1,n+4}(t))`.
pub fn legendre_derivative_check(k: u32, n: u32, t: f64) -> Result<(f64, f64)> {
    if k == 0 {
        return Err(MonolieError::InvalidArgument(
            "derivative identity needs k >= 1".into(),
        ));
    }
    let t = check_t(t)?;
    let lhs = homogenize(k, n + 2)?.derivative_t(t);
    let factor = (k * (k + n)) as f64 / (n + 1) as f64;
    let rhs = factor * legendre_eval(k - 1, n + 4, t)?;
    Ok((lhs, rhs))
}

/// Funk-Hecke multiplier `alpha` with
/// `int_{S^{n-1}} P_{k,n+2}(<w,u>) S(w) dmu(w) = alpha S(u)` for every
/// degree-`kprime` spherical harmonic `S`, probability measure.
///
/// Evaluated in the angle `t = cos(theta)` so the weight
/// `(1 - t^2)^{(n-3)/2}` becomes the smooth factor `sin^{n-2}(theta)`.
pub fn funk_hecke_coeff(k: u32, kprime: u32, n: u32, quad: &GaussLegendre) -> Result<f64> {
    check_n(n)?;
    if kprime > k {
        return Err(MonolieError::InvalidArgument(format!(
            "Funk-Hecke pairing needs k >= k' (k = {k}, k' = {kprime})"
        )));
    }
    if (k - kprime) % 2 == 1 {
        return Ok(0.0);
    }
    let outer = homogenize(k, n + 2)?;
    let inner = homogenize(kprime, n)?;
    let (thetas, weights) = quad.mapped(0.0, std::f64::consts::PI);
    let mut num = 0.0;
    let mut den = 0.0;
    for (&th, &w) in thetas.iter().zip(&weights) {
        let t = th.cos();
        let jac = th.sin().powi(n as i32 - 2);
        num += w * outer.eval_t(t) * inner.eval_t(t) * jac;
        den += w * jac;
    }
    Ok(num / den)
}
