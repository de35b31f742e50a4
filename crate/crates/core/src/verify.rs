//! Deterministic self-check suites behind `monolie verify`.
//!
//! Every suite draws its samples from a seeded generator and reports one
//! row per check with the largest residual seen. Reports carry no timings,
//! so equal seeds give byte-identical output.

use std::fmt::Write as _;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::cauchy::CauchyTransform;
use crate::clifford::{kelvin_inverse, Multivector, Paravector};
use crate::error::{MonolieError, Result};
use crate::geometry::{gamma_max_dist, lie_norm, lie_norm_real_form};
use crate::harmonics::{
    gf_closed_form, gf_partial_sum, legendre_derivative_check, legendre_eval, legendre_sequence,
};
use crate::lie::{decompose, hua_kernel, hua_kernel_series, map_w, reconstruct, HuaValue, LieSpherePoint};
use crate::monogenic::{ck_extension, w_bound_check, w_eval, w_polynomial, FnMonogenic, PolyMultivector};
use crate::opcalc::{kernel_series_ga, phi_of_a, real_matrix, CMatrix, MatrixTuple};
use crate::poly::{Poly, CLEANUP_THRESHOLD};
use crate::quadrature::{build_sphere_quadrature, Measure};
use crate::sampling::{
    ball_point, complex_normal_vector, kappa_point, lie_ball_point, normal_vector, rng_from_seed,
    unit_vector, SampleRng,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Clifford,
    Geometry,
    Harmonics,
    Monogenic,
    Cauchy,
    Lie,
    Opcalc,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Clifford,
        Suite::Geometry,
        Suite::Harmonics,
        Suite::Monogenic,
        Suite::Cauchy,
        Suite::Lie,
        Suite::Opcalc,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Clifford => "clifford",
            Suite::Geometry => "geometry",
            Suite::Harmonics => "harmonics",
            Suite::Monogenic => "monogenic",
            Suite::Cauchy => "cauchy",
            Suite::Lie => "lie",
            Suite::Opcalc => "opcalc",
        }
    }

    // Distinct sub-seeds keep the suites independent of each other's draws.
    fn salt(&self) -> u64 {
        Suite::ALL.iter().position(|s| s == self).unwrap() as u64 * 0x9e37_79b9
    }
}

impl FromStr for Suite {
    type Err = MonolieError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .iter()
            .copied()
            .find(|suite| suite.name() == s || (s == "legendre" && *suite == Suite::Harmonics))
            .ok_or_else(|| MonolieError::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

/// One row of a report.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    /// Set when the check could not be evaluated.
    pub error: Option<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.residual <= self.tol
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed()).count()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "seed {}", self.seed);
        let _ = writeln!(
            out,
            "{:<10} {:<40} {:>12} {:>10}  status",
            "suite", "check", "max_resid", "tol"
        );
        for c in &self.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            let _ = write!(
                out,
                "{:<10} {:<40} {:>12.3e} {:>10.1e}  {status}",
                c.suite, c.name, c.residual, c.tol
            );
            if let Some(e) = &c.error {
                let _ = write!(out, " ({e})");
            }
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "{} checks, {} passed, {} failed",
            self.checks.len(),
            self.checks.len() - self.failures(),
            self.failures()
        );
        out
    }
}

struct Collector {
    suite: &'static str,
    checks: Vec<Check>,
}

impl Collector {
    fn record(&mut self, name: &str, tol: f64, outcome: Result<f64>) {
        let (residual, error) = match outcome {
            Ok(r) if r.is_nan() => (f64::INFINITY, Some("NaN residual".to_string())),
            Ok(r) => (r, None),
            Err(e) => (f64::INFINITY, Some(e.to_string())),
        };
        self.checks.push(Check {
            suite: self.suite,
            name: name.to_string(),
            residual,
            tol,
            error,
        });
    }
}

pub fn run_suite(suite: Suite, seed: u64) -> Vec<Check> {
    let mut rng = rng_from_seed(seed ^ suite.salt());
    let mut col = Collector {
        suite: suite.name(),
        checks: Vec::new(),
    };
    match suite {
        Suite::Clifford => clifford_suite(&mut col, &mut rng),
        Suite::Geometry => geometry_suite(&mut col, &mut rng),
        Suite::Harmonics => harmonics_suite(&mut col),
        Suite::Monogenic => monogenic_suite(&mut col, &mut rng),
        Suite::Cauchy => cauchy_suite(&mut col, &mut rng),
        Suite::Lie => lie_suite(&mut col, &mut rng),
        Suite::Opcalc => opcalc_suite(&mut col, &mut rng),
    }
    col.checks
}

pub fn run(suites: &[Suite], seed: u64) -> Report {
    Report {
        seed,
        checks: suites.iter().flat_map(|&s| run_suite(s, seed)).collect(),
    }
}

pub fn run_all(seed: u64) -> Report {
    run(&Suite::ALL, seed)
}

/// Multivector with independent complex Gaussian coefficients.
pub fn random_multivector<R: Rng>(n: usize, rng: &mut R) -> Multivector {
    Multivector::from_coeffs(n, complex_normal_vector(1 << n, rng)).expect("n within range")
}

/// Polynomial in `x_1..x_n` (no `x_0`) with `terms` random monomials of
/// degree at most `degree` and random multivector coefficients.
pub fn random_poly_multivector<R: Rng>(n: usize, degree: u32, terms: usize, rng: &mut R) -> PolyMultivector {
    let mut p = PolyMultivector::zero(n);
    for _ in 0..terms {
        let mut exp = vec![0u32; n + 1];
        let deg = rng.random_range(0..=degree);
        for _ in 0..deg {
            exp[rng.random_range(1..=n)] += 1;
        }
        p.add_term(exp, random_multivector(n, rng));
    }
    p
}

/// Scalar polynomial in `z_1..z_n` with random complex coefficients.
pub fn random_scalar_poly<R: Rng>(n: usize, degree: u32, terms: usize, rng: &mut R) -> Poly {
    let mut p = Poly::zero(n);
    for _ in 0..terms {
        let mut exp = vec![0u32; n];
        for _ in 0..rng.random_range(0..=degree) {
            exp[rng.random_range(0..n)] += 1;
        }
        let c = complex_normal_vector(1, rng)[0];
        p.add_term(exp, c);
    }
    p
}

fn clifford_suite(col: &mut Collector, rng: &mut SampleRng) {
    let mut assoc = 0.0f64;
    let mut conj = 0.0f64;
    let mut kelvin = 0.0f64;
    let mut squares = 0.0f64;
    for case in 0..400 {
        let n = 1 + case % 4;
        let a = random_multivector(n, rng);
        let b = random_multivector(n, rng);
        let c = random_multivector(n, rng);
        let scale = a.norm() * b.norm() * c.norm();
        assoc = assoc.max((&(&a * &b) * &c).max_abs_diff(&(&a * &(&b * &c))) / scale);
        let lhs = (&a * &b).conjugate();
        let rhs = &b.conjugate() * &a.conjugate();
        conj = conj.max(lhs.max_abs_diff(&rhs) / (a.norm() * b.norm()));
        let x = Paravector::from_real(&normal_vector(n + 1, rng)).unwrap();
        let inv = kelvin_inverse(&x).unwrap();
        let prod = &x.to_multivector() * &inv.to_multivector();
        kelvin = kelvin.max(prod.max_abs_diff(&Multivector::one(n).unwrap()));
        for j in 1..=n {
            let e = Multivector::generator(n, j).unwrap();
            squares = squares.max((&e * &e).max_abs_diff(&Multivector::scalar(n, Complex64::new(-1.0, 0.0)).unwrap()));
        }
    }
    col.record("generators square to -1", 1e-12, Ok(squares));
    col.record("associativity (relative)", 1e-12, Ok(assoc));
    col.record("conjugation reverses products", 1e-12, Ok(conj));
    col.record("Kelvin inverse x x^-1 = 1", 1e-12, Ok(kelvin));
}

fn geometry_suite(col: &mut Collector, rng: &mut SampleRng) {
    let mut formula = 0.0f64;
    let mut sandwich = 0.0f64;
    let mut disagreements = 0usize;
    for case in 0..3000 {
        let n = 1 + case % 3;
        let z = complex_normal_vector(n + 1, rng);
        let z: Vec<Complex64> = z.iter().map(|c| c * 0.7).collect();
        let ln = lie_norm(&z);
        formula = formula.max((ln - lie_norm_real_form(&z)).abs());
        let xi: f64 = z.iter().map(|c| c.re * c.re).sum::<f64>().sqrt();
        let eta: f64 = z.iter().map(|c| c.im * c.im).sum::<f64>().sqrt();
        let abs: f64 = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        sandwich = sandwich.max(abs - ln).max(ln - (xi + eta));
        // gamma_max_dist of the paravector is the Lie norm of L_{n+1}
        let zeta = Paravector::new(z.clone()).unwrap();
        let d = gamma_max_dist(&zeta);
        if (ln - 1.0).abs() > 1e-9 && (d < 1.0) != (ln < 1.0) {
            disagreements += 1;
        }
    }
    col.record("two Lie-norm formulas agree", 1e-10, Ok(formula));
    col.record("norm sandwich violation", 1e-12, Ok(sandwich.max(0.0)));
    col.record("kappa(B_1) vs Lie ball disagreements", 0.0, Ok(disagreements as f64));
}

fn harmonics_suite(col: &mut Collector) {
    let mut gf = 0.0f64;
    let outcome = (|| -> Result<f64> {
        for n in 3..=6 {
            for i in 0..=20 {
                let t = -1.0 + 0.1 * i as f64;
                for r in [-0.5, -0.25, 0.1, 0.3, 0.5] {
                    let s = gf_partial_sum(t, r, n, 60)?;
                    gf = gf.max((s - gf_closed_form(t, r, n)).abs());
                }
            }
        }
        Ok(gf)
    })();
    col.record("generating function K = 60", 1e-10, outcome);

    let mut bound = 0.0f64;
    let mut cheb = 0.0f64;
    for i in 0..=200 {
        let t = -1.0 + 0.01 * i as f64;
        for n in 2..=7 {
            for p in legendre_sequence(30, n, t) {
                bound = bound.max(p.abs() - 1.0);
            }
        }
        let seq = legendre_sequence(30, 2, t);
        for (k, p) in seq.iter().enumerate() {
            cheb = cheb.max((p - (k as f64 * t.acos()).cos()).abs());
        }
    }
    col.record("|P_k,n| <= 1 on [-1, 1]", 1e-12, Ok(bound.max(0.0)));
    col.record("P_k,2 is the Chebyshev polynomial", 1e-12, Ok(cheb));

    let outcome = (|| -> Result<f64> {
        let mut worst = 0.0f64;
        for n in 1..=5 {
            for k in 1..=12 {
                for i in 0..=20 {
                    let (lhs, rhs) = legendre_derivative_check(k, n, -1.0 + 0.1 * i as f64)?;
                    worst = worst.max((lhs - rhs).abs());
                }
            }
        }
        Ok(worst)
    })();
    col.record("derivative identity k <= 12, n <= 5", 1e-9, outcome);
    let unit = (|| -> Result<f64> {
        let mut worst = 0.0f64;
        for n in 2..=8 {
            for k in 0..=20 {
                worst = worst.max((legendre_eval(k, n, 1.0)? - 1.0).abs());
            }
        }
        Ok(worst)
    })();
    col.record("P_k,n(1) = 1", 1e-12, unit);
}

fn monogenic_suite(col: &mut Collector, rng: &mut SampleRng) {
    let outcome = (|| -> Result<f64> {
        let mut worst = 0.0f64;
        for case in 0..12 {
            let n = 1 + case % 3;
            let p = random_poly_multivector(n, 5, 6, rng);
            let f = ck_extension(&p)?;
            let mut d = f.dirac_d();
            d.cleanup(CLEANUP_THRESHOLD);
            worst = worst.max(d.max_abs_coeff());
            worst = worst.max(f.restrict_x0_zero().max_abs_diff(&p));
        }
        Ok(worst)
    })();
    col.record("CK extension monogenic, restricts to data", 1e-12, outcome);

    let outcome = (|| -> Result<f64> {
        let mut worst = 0.0f64;
        for n in 1..=3 {
            let omega = unit_vector(n, rng);
            for k in 0..=6 {
                let poly = w_polynomial(k, n, &omega)?;
                let mut d = poly.dirac_d();
                d.cleanup(CLEANUP_THRESHOLD);
                worst = worst.max(d.max_abs_coeff());
                for _ in 0..3 {
                    let zeta = kappa_point(n, 0.9, rng);
                    let direct = w_eval(k, n, &omega, &zeta)?;
                    let via_poly = Paravector::from_multivector(&poly.eval(zeta.comps())?);
                    worst = worst.max(direct.max_abs_diff(&via_poly));
                    let lam = Complex64::new(0.7, -0.4);
                    let scaled = w_eval(k, n, &omega, &zeta.scale(lam))?;
                    let expect = direct.scale(lam.powu(k));
                    worst = worst.max(scaled.max_abs_diff(&expect));
                }
            }
        }
        Ok(worst)
    })();
    col.record("W monogenic, homogeneous, matches poly", 1e-10, outcome);

    let outcome = (|| -> Result<f64> {
        let mut worst = f64::NEG_INFINITY;
        for n in 1..=3 {
            let omega = unit_vector(n, rng);
            let points: Vec<Vec<f64>> = (0..200).map(|_| unit_vector(n + 1, rng)).collect();
            for k in 0..=10 {
                let (max, bound) = w_bound_check(k, n, &omega, &points)?;
                worst = worst.max(max - bound);
            }
        }
        Ok(worst.max(0.0))
    })();
    col.record("W sphere bound excess", 0.0, outcome);
}

fn cauchy_suite(col: &mut Collector, rng: &mut SampleRng) {
    let n = 2;
    let r = 0.8;
    let outcome = (|| -> Result<f64> {
        let p = random_poly_multivector(n, 3, 5, rng);
        let f = ck_extension(&p)?;
        let quad = build_sphere_quadrature(n, r, 16, Measure::Hypersurface)?;
        let t = CauchyTransform::new(&f, &quad)?;
        let mut worst = 0.0f64;
        for _ in 0..10 {
            let x = ball_point(n + 1, 0.5 * r, rng);
            let got = t.eval(&Paravector::from_real(&x)?)?;
            worst = worst.max(got.max_abs_diff(&f.eval_real(&x)?));
            let dir = unit_vector(n + 1, rng);
            let far: Vec<f64> = dir.iter().map(|v| v * 2.0 * r).collect();
            worst = worst.max(t.eval(&Paravector::from_real(&far)?)?.norm());
            let zeta = kappa_point(n, 0.4, rng);
            worst = worst.max(t.eval(&zeta)?.max_abs_diff(&f.eval(zeta.comps())?));
        }
        Ok(worst / f.max_abs_coeff().max(1.0))
    })();
    col.record("reproduction, vanishing, complex points", 1e-9, outcome);
}

fn lie_suite(col: &mut Collector, rng: &mut SampleRng) {
    let n = 2;
    let outcome = (|| -> Result<f64> {
        let f = random_scalar_poly(n, 4, 6, rng);
        let dec = decompose(&f, 4)?;
        let mut worst = 0.0f64;
        for _ in 0..10 {
            let z = lie_ball_point(n, 0.9, rng);
            worst = worst.max((reconstruct(&dec, &z)? - f.eval(&z)?).norm());
        }
        Ok(worst)
    })();
    col.record("decompose then reconstruct", 1e-10, outcome);

    let outcome = (|| -> Result<f64> {
        let mut worst = 0.0f64;
        for n in 2..=3 {
            for _ in 0..10 {
                let pt = LieSpherePoint::new(rng.random_range(0.0..std::f64::consts::PI), unit_vector(n, rng))?;
                let z = lie_ball_point(n, 0.5, rng);
                let series = hua_kernel_series(&pt, &z, 60)?;
                match hua_kernel(&pt, &z)? {
                    HuaValue::Value(v) => worst = worst.max((series.value - v).norm()),
                    HuaValue::Domain => return Err(MonolieError::Domain("kernel on the cut".into())),
                }
            }
        }
        Ok(worst)
    })();
    col.record("Cauchy-Hua series vs closed form", 1e-9, outcome);

    let outcome = (|| -> Result<f64> {
        let f = random_scalar_poly(n, 3, 4, rng);
        let dec = decompose(&f, 3)?;
        let ck = ck_extension(&PolyMultivector::from_vector_poly(&f)?)?;
        let mut worst = 0.0f64;
        for _ in 0..3 {
            let x = ball_point(n + 1, 0.6, rng);
            let got = map_w(&dec, &Paravector::from_real(&x)?, 40)?;
            let expect = Paravector::from_multivector(&ck.eval_real(&x)?);
            worst = worst.max(got.max_abs_diff(&expect));
        }
        Ok(worst / f.max_abs_coeff().max(1.0))
    })();
    col.record("map w agrees with CK extension", 1e-7, outcome);
}

fn opcalc_suite(col: &mut Collector, rng: &mut SampleRng) {
    let outcome = (|| -> Result<f64> {
        let d = 3;
        let entries: Vec<f64> = normal_vector(d * d, rng).iter().map(|v| 0.05 * v).collect();
        let a1 = real_matrix(d, &entries);
        let a = MatrixTuple::new(vec![a1.clone()])?;
        let omega = [0.6, -0.8];
        let g = kernel_series_ga(&a, &omega, 60)?;
        let (e0, e1) = resolvent_kernel_n1(&a1, &omega)?;
        Ok((g.value.blade(0) - e0).norm().max((g.value.blade(1) - e1).norm()))
    })();
    col.record("n = 1 kernel series vs resolvent", 1e-8, outcome);

    let outcome = (|| -> Result<f64> {
        let d = 2;
        let mats = (0..2)
            .map(|_| real_matrix(d, &normal_vector(d * d, rng).iter().map(|v| 0.03 * v).collect::<Vec<_>>()))
            .collect();
        let a = MatrixTuple::new(mats)?;
        let f = FnMonogenic::new(2, |_: &[Complex64]| Multivector::one(2).expect("n = 2"));
        let res = phi_of_a(&a, &f, 0.9, 12, 16)?;
        let off = res.off_blade_norms.values().fold(0.0f64, |m, &v| m.max(v));
        Ok((res.matrix - CMatrix::identity(d, d)).norm().max(off))
    })();
    col.record("constant function gives the identity", 1e-7, outcome);
}

/// Kernel `G_w(A)` for a single matrix through matrix inversion:
/// `e_0` blade `w_0 R / 2 pi`, `e_1` blade `-(w_1 - A) R / 2 pi` with
/// `R = (w_0^2 + (w_1 - A)^2)^{-1}`.
pub fn resolvent_kernel_n1(a1: &CMatrix, omega: &[f64]) -> Result<(CMatrix, CMatrix)> {
    let d = a1.nrows();
    let id = DMatrix::<Complex64>::identity(d, d);
    let b = &id * Complex64::new(omega[1], 0.0) - a1;
    let sq = &id * Complex64::new(omega[0] * omega[0], 0.0) + &b * &b;
    let r = sq
        .try_inverse()
        .ok_or(MonolieError::Singular("resolvent matrix"))?;
    let s = Complex64::new(1.0 / (2.0 * std::f64::consts::PI), 0.0);
    Ok((&r * (s * omega[0]), -(&b * &r) * s))
}
