//! Analysis on the Lie sphere `Sigma^n = { e^{i theta} w }`: the mode
//! projections `S_{m,k}`, the expansion of holomorphic functions on the
//! Lie ball, the Cauchy-Hua kernel, its monogenic extension, and the maps
//! `w` (holomorphic on `L_n` to complex regular on `L_{n+1}`) and `u`.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::sync::{OnceLock, RwLock};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::clifford::Paravector;
use crate::error::{MonolieError, Result};
use crate::geometry::{abs_c, complex_square, in_lie_ball, lie_norm, AbsC};
use crate::harmonics::{dim_harmonics, homogenize, zonal_sequence};
use crate::monogenic::{ck_extension, w_unnormalized_sequence, zonal_series_weight, PolyMultivector};
use crate::poly::{factorial, multi_factorial, MonomialTable, Poly};
use crate::quadrature::{sphere_rule_for_degree, Measure, SphereQuadrature};

/// Projections below this size are treated as absent.
pub const PRUNE_TOL: f64 = 1e-12;

/// Calibration constants this close to 1 are taken to be exactly 1.
pub const CALIBRATION_TOL: f64 = 1e-9;

/// The point `e^{i theta} w` of `Sigma^n`, `theta` in `[0, pi)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieSpherePoint {
    pub theta: f64,
    pub omega: Vec<f64>,
}

impl LieSpherePoint {
    pub fn new(theta: f64, omega: Vec<f64>) -> Result<Self> {
        let r = omega.iter().map(|w| w * w).sum::<f64>().sqrt();
        if (r - 1.0).abs() > 1e-12 {
            return Err(MonolieError::Domain(format!(
                "Lie sphere direction must be a unit vector, |w| = {r}"
            )));
        }
        Ok(Self { theta, omega })
    }

    pub fn n(&self) -> usize {
        self.omega.len()
    }

    pub fn point(&self) -> Vec<Complex64> {
        let e = Complex64::from_polar(1.0, self.theta);
        self.omega.iter().map(|&w| e * w).collect()
    }
}

/// `{ S~_{m,k} f }` over `(m, k)` with `k <= m`, `m = k mod 2`; each entry
/// is a harmonic homogeneous polynomial of degree `k` in `z_1..z_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieDecomposition {
    pub n: usize,
    pub max_degree: u32,
    pub entries: BTreeMap<(u32, u32), Poly>,
}

impl LieDecomposition {
    pub fn new(n: usize, max_degree: u32) -> Self {
        Self {
            n,
            max_degree,
            entries: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, m: u32, k: u32, p: Poly) -> Result<()> {
        check_mode(m, k)?;
        if p.nvars() != self.n {
            return Err(MonolieError::DimensionMismatch {
                left: p.nvars(),
                right: self.n,
            });
        }
        self.max_degree = self.max_degree.max(m);
        self.entries.insert((m, k), p);
        Ok(())
    }
}

fn check_mode(m: u32, k: u32) -> Result<()> {
    if k > m || !(m - k).is_multiple_of(2) {
        return Err(MonolieError::Parity { m, k });
    }
    Ok(())
}

/// Trapezoid nodes `pi l / len` on `[0, pi)`, each with weight `1/len`
/// (the measure `pi^{-1} d theta`).
pub fn theta_nodes(len: usize) -> Vec<f64> {
    (0..len).map(|l| PI * l as f64 / len as f64).collect()
}

/// Default theta grid size for traces of degree at most `max_degree`.
pub fn theta_len(max_degree: u32) -> usize {
    2 * max_degree as usize + 2
}

/// Probability rule on `S^{n-1}` exact through `degree`.
pub fn direction_rule(n: usize, degree: usize) -> Result<SphereQuadrature> {
    if n < 2 {
        return Err(MonolieError::UnsupportedDimension(n));
    }
    sphere_rule_for_degree(n - 1, 1.0, degree, Measure::Probability)
}

/// Mode coefficients `c_m(tau) = pi^{-1} int_0^pi e^{-i m phi} f(e^{i phi} tau) d phi`
/// at every direction node, for every `m` in `0..=mmax`.
fn mode_table<F>(f: &F, thetas: &[f64], quad: &SphereQuadrature, mmax: u32) -> Vec<Vec<Complex64>>
where
    F: Fn(&[Complex64]) -> Complex64 + Sync,
{
    let inv_len = 1.0 / thetas.len() as f64;
    quad.nodes
        .par_iter()
        .map(|tau| {
            let samples: Vec<Complex64> = thetas
                .iter()
                .map(|&phi| {
                    let e = Complex64::from_polar(1.0, phi);
                    let z: Vec<Complex64> = tau.iter().map(|&t| e * t).collect();
                    f(&z)
                })
                .collect();
            (0..=mmax)
                .map(|m| {
                    thetas
                        .iter()
                        .zip(&samples)
                        .map(|(&phi, &v)| Complex64::from_polar(1.0, -(m as f64) * phi) * v)
                        .sum::<Complex64>()
                        * inv_len
                })
                .collect()
        })
        .collect()
}

/// Harmonic extension `N(k,n) sum_i w_i c_i Q_{k,n}(<tau_i, z>, z.z)` as a
/// polynomial in `z`.
fn zonal_projection(
    n: usize,
    k: u32,
    quad: &SphereQuadrature,
    node_values: &[Complex64],
) -> Result<Poly> {
    let q = homogenize(k, n as u32)?;
    let nk = dim_harmonics(k, n as u32)? as f64;
    let table = MonomialTable::new(n, k as usize);
    let mut out = Poly::zero(n);
    for (j, &a) in q.coeffs.iter().enumerate() {
        let p = k as usize - 2 * j;
        // sum_i w_i c_i <tau_i, z>^p expanded by the multinomial theorem
        let mut moments = Poly::zero(n);
        for idx in table.degree_range(p) {
            let beta = table.exponent(idx);
            let multinomial = factorial(p as u32) / multi_factorial(beta);
            let mut acc = Complex64::new(0.0, 0.0);
            for ((tau, &w), &c) in quad.nodes.iter().zip(&quad.weights).zip(node_values) {
                let mono: f64 = tau
                    .iter()
                    .zip(beta)
                    .map(|(t, &b)| t.powi(b as i32))
                    .product();
                acc += c * (w * mono);
            }
            moments.add_term(beta.to_vec(), acc * multinomial);
        }
        let mut qpow = Poly::constant(n, Complex64::new(1.0, 0.0));
        let zz = sum_of_squares(n);
        for _ in 0..j {
            qpow = &qpow * &zz;
        }
        out = &out + &(&moments * &qpow).scale(Complex64::new(a * nk, 0.0));
    }
    Ok(out)
}

fn sum_of_squares(n: usize) -> Poly {
    let mut q = Poly::zero(n);
    for j in 0..n {
        let mut e = vec![0; n];
        e[j] = 2;
        q.add_term(e, Complex64::new(1.0, 0.0));
    }
    q
}

/// `S~_{m,k} f` from samples of `f` on the Lie sphere: the theta integral
/// uses `thetas` (trapezoid on `[0, pi)`), the direction integral `quad`
/// (probability measure on `S^{n-1}`).
pub fn project_smk<F>(
    f: &F,
    n: usize,
    m: u32,
    k: u32,
    thetas: &[f64],
    quad: &SphereQuadrature,
) -> Result<Poly>
where
    F: Fn(&[Complex64]) -> Complex64 + Sync,
{
    check_mode(m, k)?;
    check_direction_rule(n, quad)?;
    let modes = mode_table(f, thetas, quad, m);
    let values: Vec<Complex64> = modes.iter().map(|row| row[m as usize]).collect();
    Ok(zonal_projection(n, k, quad, &values)?.cleaned())
}

fn check_direction_rule(n: usize, quad: &SphereQuadrature) -> Result<()> {
    if quad.dim + 1 != n || quad.measure != Measure::Probability {
        return Err(MonolieError::InvalidArgument(format!(
            "direction integrals need a probability rule on S^{}",
            n.saturating_sub(1)
        )));
    }
    Ok(())
}

/// All nonzero `S~_{m,k} f` for `m <= degree_bound`, computed from the
/// trace of the polynomial `f` in `z_1..z_n`.
pub fn decompose(f: &Poly, degree_bound: u32) -> Result<LieDecomposition> {
    let n = f.nvars();
    if f.degree() > degree_bound {
        return Err(MonolieError::InvalidArgument(format!(
            "degree bound {degree_bound} below polynomial degree {}",
            f.degree()
        )));
    }
    let thetas = theta_nodes(theta_len(degree_bound));
    let quad = direction_rule(n, 2 * degree_bound as usize)?;
    let sampler = |z: &[Complex64]| f.eval_unchecked(z);
    let modes = mode_table(&sampler, &thetas, &quad, degree_bound);
    let keys: Vec<(u32, u32)> = (0..=degree_bound)
        .flat_map(|m| (0..=m).rev().step_by(2).map(move |k| (m, k)))
        .collect();
    let projected: Vec<((u32, u32), Poly)> = keys
        .par_iter()
        .map(|&(m, k)| {
            let values: Vec<Complex64> = modes.iter().map(|row| row[m as usize]).collect();
            zonal_projection(n, k, &quad, &values).map(|p| ((m, k), p.cleaned()))
        })
        .collect::<Result<_>>()?;
    let mut dec = LieDecomposition::new(n, degree_bound);
    for ((m, k), mut p) in projected {
        p.cleanup(PRUNE_TOL);
        if !p.is_zero() {
            dec.entries.insert((m, k), p);
        }
    }
    Ok(dec)
}

/// `sum (z.z)^{(m-k)/2} S~_{m,k} f(z)` for `z` in the Lie ball.
pub fn reconstruct(dec: &LieDecomposition, z: &[Complex64]) -> Result<Complex64> {
    if z.len() != dec.n {
        return Err(MonolieError::DimensionMismatch {
            left: z.len(),
            right: dec.n,
        });
    }
    if !in_lie_ball(z) {
        return Err(MonolieError::Domain(format!(
            "point outside the Lie ball (norm {})",
            lie_norm(z)
        )));
    }
    let q = complex_square(z);
    Ok(dec
        .entries
        .iter()
        .map(|(&(m, k), p)| q.powu((m - k) / 2) * p.eval_unchecked(z))
        .sum())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HuaValue {
    Value(Complex64),
    /// `|w - e^{-i theta} z|_C^2` vanishes or lies on the cut.
    Domain,
}

impl HuaValue {
    pub fn value(&self) -> Option<Complex64> {
        match self {
            HuaValue::Value(v) => Some(*v),
            HuaValue::Domain => None,
        }
    }
}

/// Cauchy-Hua kernel `|w - e^{-i theta} z|_C^{-n}`.
pub fn hua_kernel(pt: &LieSpherePoint, z: &[Complex64]) -> Result<HuaValue> {
    let n = pt.n();
    if z.len() != n {
        return Err(MonolieError::DimensionMismatch {
            left: z.len(),
            right: n,
        });
    }
    let e = Complex64::from_polar(1.0, -pt.theta);
    let diff: Vec<Complex64> = pt
        .omega
        .iter()
        .zip(z)
        .map(|(&w, c)| Complex64::new(w, 0.0) - e * c)
        .collect();
    match abs_c(&diff) {
        AbsC::Value(v) if v.norm() > 0.0 => Ok(HuaValue::Value(v.powi(-(n as i32)))),
        _ => Ok(HuaValue::Domain),
    }
}

/// Terms `c_k e^{-ik theta} Q_{k,n+2}(<w,z>, z.z)` for `k = 0..=kmax`, with
/// `c_k = (n/(2k+n)) N(k,n+2)`.
pub fn hua_kernel_terms(pt: &LieSpherePoint, z: &[Complex64], kmax: u32) -> Result<Vec<Complex64>> {
    let n = pt.n();
    if z.len() != n {
        return Err(MonolieError::DimensionMismatch {
            left: z.len(),
            right: n,
        });
    }
    let s: Complex64 = pt.omega.iter().zip(z).map(|(&w, c)| c * w).sum();
    let q = complex_square(z);
    let seq = zonal_sequence(n as u32 + 2, s, q, kmax);
    let e = Complex64::from_polar(1.0, -pt.theta);
    let mut phase = Complex64::new(1.0, 0.0);
    Ok((0..=kmax)
        .map(|k| {
            let t = phase * seq.value[k as usize] * zonal_series_weight(k, n);
            phase *= e;
            t
        })
        .collect())
}

/// Truncated series of a kernel together with the ratio of the last two
/// nonzero term magnitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesValue<T> {
    pub value: T,
    pub tail_ratio: f64,
}

fn tail_ratio(mags: &[f64]) -> f64 {
    let nonzero: Vec<f64> = mags.iter().copied().filter(|&v| v > 1e-300).collect();
    match nonzero.len() {
        0 | 1 => 0.0,
        len => nonzero[len - 1] / nonzero[len - 2],
    }
}

/// `sum_{k <= kmax} c_k e^{-ik theta} Q_{k,n+2}(<w,z>, z.z)`.
pub fn hua_kernel_series(pt: &LieSpherePoint, z: &[Complex64], kmax: u32) -> Result<SeriesValue<Complex64>> {
    let terms = hua_kernel_terms(pt, z, kmax)?;
    let mags: Vec<f64> = terms.iter().map(|t| t.norm()).collect();
    Ok(SeriesValue {
        value: terms.iter().sum(),
        tail_ratio: tail_ratio(&mags),
    })
}

/// `sum_{k <= kmax} c_k e^{-ik theta} W_{k,n+2}(w; zeta)`, the complex
/// regular extension of the Cauchy-Hua kernel to `L_{n+1}`.
pub fn extended_kernel_series(
    pt: &LieSpherePoint,
    zeta: &Paravector,
    kmax: u32,
) -> Result<SeriesValue<Paravector>> {
    let n = pt.n();
    if zeta.n() != n {
        return Err(MonolieError::DimensionMismatch {
            left: zeta.n(),
            right: n,
        });
    }
    // e^{-ik theta} W_k(zeta) = W_k(e^{-i theta} zeta) by homogeneity
    let rotated = zeta.scale(Complex64::from_polar(1.0, -pt.theta));
    let terms = w_unnormalized_sequence(
        n,
        kmax as usize,
        rotated.comps()[0],
        &pt.omega,
        rotated.vector_part(),
    );
    let mags: Vec<f64> = terms.iter().map(|t| t.norm()).collect();
    let mut comps = vec![Complex64::new(0.0, 0.0); n + 1];
    for t in &terms {
        for (a, b) in comps.iter_mut().zip(t.comps()) {
            *a += b;
        }
    }
    Ok(SeriesValue {
        value: Paravector::new(comps)?,
        tail_ratio: tail_ratio(&mags),
    })
}

/// `pi^{-1} int int |w - e^{-i theta} z|_C^{-n} f(e^{i theta} w) d theta d mu(w)`
/// by the given product rule; reproduces holomorphic `f` on the Lie ball.
pub fn cauchy_hua_pairing<F>(
    f: &F,
    z: &[Complex64],
    thetas: &[f64],
    quad: &SphereQuadrature,
) -> Result<Complex64>
where
    F: Fn(&[Complex64]) -> Complex64 + Sync,
{
    let n = z.len();
    check_direction_rule(n, quad)?;
    let inv_len = 1.0 / thetas.len() as f64;
    let partial: Vec<Complex64> = quad
        .nodes
        .par_iter()
        .zip(quad.weights.par_iter())
        .map(|(omega, &w)| {
            let mut acc = Complex64::new(0.0, 0.0);
            for &theta in thetas {
                let pt = LieSpherePoint {
                    theta,
                    omega: omega.clone(),
                };
                let k = hua_kernel(&pt, z)?.value().ok_or_else(|| {
                    MonolieError::Domain("Cauchy-Hua kernel singular on the grid".into())
                })?;
                acc += k * f(&pt.point());
            }
            Ok(acc * (w * inv_len))
        })
        .collect::<Result<_>>()?;
    Ok(partial.iter().sum())
}

/// Quadrature data for evaluating `w(f)` from a decomposition.
struct PairingRule {
    quad: SphereQuadrature,
    /// `S~_{m,k} f(w_i)` for each entry, per node.
    samples: Vec<Vec<Complex64>>,
    keys: Vec<(u32, u32)>,
    calibration: Vec<f64>,
}

impl PairingRule {
    fn new(dec: &LieDecomposition, kmax: u32, calibrated: bool) -> Result<Self> {
        let keys: Vec<(u32, u32)> = dec
            .entries
            .keys()
            .copied()
            .filter(|&(m, _)| m <= kmax)
            .collect();
        let top = keys.iter().map(|&(m, _)| m).max().unwrap_or(0);
        let quad = direction_rule(dec.n, 2 * top as usize)?;
        let samples = quad
            .nodes
            .iter()
            .map(|w| {
                let wc: Vec<Complex64> = w.iter().map(|&v| Complex64::new(v, 0.0)).collect();
                keys.iter()
                    .map(|key| dec.entries[key].eval_unchecked(&wc))
                    .collect()
            })
            .collect();
        let calibration = if calibrated {
            let table = pairing_calibration(dec.n, top)?;
            keys.iter().map(|key| table[key]).collect()
        } else {
            vec![1.0; keys.len()]
        };
        Ok(Self {
            quad,
            samples,
            keys,
            calibration,
        })
    }

    fn eval(&self, n: usize, zeta: &Paravector) -> Result<Paravector> {
        let top = self.keys.iter().map(|&(m, _)| m).max().unwrap_or(0);
        let mut comps = vec![Complex64::new(0.0, 0.0); n + 1];
        for ((omega, &w), samples) in self.quad.nodes.iter().zip(&self.quad.weights).zip(&self.samples) {
            let seq = w_unnormalized_sequence(n, top as usize, zeta.comps()[0], omega, zeta.vector_part());
            for ((&(m, _), &s), &c) in self.keys.iter().zip(samples).zip(&self.calibration) {
                let factor = s * (w * c);
                for (acc, v) in comps.iter_mut().zip(seq[m as usize].comps()) {
                    *acc += v * factor;
                }
            }
        }
        Paravector::new(comps)
    }
}

fn check_lie_point(zeta: &Paravector) -> Result<()> {
    let nrm = lie_norm(zeta.comps());
    if nrm >= 1.0 {
        return Err(MonolieError::Domain(format!(
            "point outside the Lie ball L_(n+1) (norm {nrm})"
        )));
    }
    Ok(())
}

/// The map `w`: the complex regular extension to `L_{n+1}` of the
/// holomorphic function with decomposition `dec`, truncated at mode `kmax`.
pub fn map_w(dec: &LieDecomposition, zeta: &Paravector, kmax: u32) -> Result<Paravector> {
    map_w_many(dec, std::slice::from_ref(zeta), kmax).map(|mut v| v.remove(0))
}

/// [`map_w`] at many points sharing one quadrature setup.
pub fn map_w_many(dec: &LieDecomposition, points: &[Paravector], kmax: u32) -> Result<Vec<Paravector>> {
    for z in points {
        if z.n() != dec.n {
            return Err(MonolieError::DimensionMismatch {
                left: z.n(),
                right: dec.n,
            });
        }
        check_lie_point(z)?;
    }
    let rule = PairingRule::new(dec, kmax, true)?;
    points.par_iter().map(|z| rule.eval(dec.n, z)).collect()
}

/// The map `u = v o w`: [`map_w`] at a real point of the unit ball.
pub fn map_u(dec: &LieDecomposition, x: &[f64], kmax: u32) -> Result<Paravector> {
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if r >= 1.0 {
        return Err(MonolieError::Domain(format!("point outside the unit ball (|x| = {r})")));
    }
    map_w(dec, &Paravector::from_real(x)?, kmax)
}

type CalibrationCache = RwLock<HashMap<(usize, u32), BTreeMap<(u32, u32), f64>>>;

fn calibration_cache() -> &'static CalibrationCache {
    static CACHE: OnceLock<CalibrationCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Real test point used to calibrate the pairing against the
/// Cauchy-Kowalevski extension.
fn calibration_point(n: usize) -> Vec<f64> {
    (0..=n).map(|j| 0.31 - 0.17 * j as f64 + 0.05 * (j * j) as f64).collect()
}

/// Raw constants `c_{m,k}` that make the plain pairing agree with the
/// Cauchy-Kowalevski extension on `(z.z)^{(m-k)/2} Z_k`, with `Z_k` the
/// zonal harmonic of degree `k` about `e_1`.
pub fn pairing_calibration_raw(n: usize, max_degree: u32) -> Result<BTreeMap<(u32, u32), f64>> {
    let x = calibration_point(n);
    let xc: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let zeta = Paravector::from_real(&x)?;
    let mut out = BTreeMap::new();
    for m in 0..=max_degree {
        for k in (0..=m).rev().step_by(2) {
            let mut axis = vec![0.0; n];
            axis[0] = 1.0;
            let zonal = zonal_harmonic(n, k, &axis)?;
            let mut dec = LieDecomposition::new(n, m);
            dec.insert(m, k, zonal.clone())?;
            let raw = PairingRule::new(&dec, m, false)?.eval(n, &zeta)?;
            let mut g = zonal;
            let zz = sum_of_squares(n);
            for _ in 0..(m - k) / 2 {
                g = &g * &zz;
            }
            let ck = ck_extension(&PolyMultivector::from_vector_poly(&g)?)?;
            let oracle = Paravector::from_multivector(&ck.eval(&xc)?);
            let num: Complex64 = raw.comps().iter().zip(oracle.comps()).map(|(a, b)| a.conj() * b).sum();
            let den: f64 = raw.comps().iter().map(|a| a.norm_sqr()).sum();
            if den == 0.0 {
                return Err(MonolieError::Singular("pairing vanishes at the calibration point"));
            }
            out.insert((m, k), (num / den).re);
        }
    }
    Ok(out)
}

/// Calibration constants in use: raw values within [`CALIBRATION_TOL`] of
/// 1 are snapped to 1. Cached per `(n, max_degree)`.
pub fn pairing_calibration(n: usize, max_degree: u32) -> Result<BTreeMap<(u32, u32), f64>> {
    if let Some(hit) = calibration_cache()
        .read()
        .expect("calibration cache poisoned")
        .iter()
        .find(|(&(cn, cd), _)| cn == n && cd >= max_degree)
    {
        return Ok(hit.1.clone());
    }
    let raw = pairing_calibration_raw(n, max_degree)?;
    let snapped: BTreeMap<(u32, u32), f64> = raw
        .into_iter()
        .map(|(key, c)| {
            if (c - 1.0).abs() < CALIBRATION_TOL {
                (key, 1.0)
            } else {
                log::warn!("pairing calibration c{key:?} = {c:.15} differs from 1");
                (key, c)
            }
        })
        .collect();
    calibration_cache()
        .write()
        .expect("calibration cache poisoned")
        .insert((n, max_degree), snapped.clone());
    Ok(snapped)
}

/// Zonal harmonic `Q_{k,n}(<a, z>, z.z)` as a polynomial in `z_1..z_n`.
pub fn zonal_harmonic(n: usize, k: u32, axis: &[f64]) -> Result<Poly> {
    let q = homogenize(k, n as u32)?;
    let s = Poly::linear(&axis.iter().map(|&a| Complex64::new(a, 0.0)).collect::<Vec<_>>());
    let zz = sum_of_squares(n);
    let mut out = Poly::zero(n);
    for (j, &a) in q.coeffs.iter().enumerate() {
        out = &out + &(&s.pow(k - 2 * j as u32) * &zz.pow(j as u32)).scale(Complex64::new(a, 0.0));
    }
    Ok(out.cleaned())
}
