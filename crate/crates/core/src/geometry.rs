//! Complexified paravector geometry: the complex modulus `|z|_C`, the
//! bilinear form, the Lie norm and Lie ball, and the real singular set
//! `gamma_C(z)` of the complexified Cauchy kernel.

use num_complex::Complex64;

use crate::clifford::Paravector;
use crate::error::{MonolieError, Result};

pub type ComplexParavector = Paravector;

/// `sum z_j chi_j` without conjugation.
pub fn bilinear(z: &[Complex64], chi: &[Complex64]) -> Result<Complex64> {
    if z.len() != chi.len() {
        return Err(MonolieError::DimensionMismatch {
            left: z.len(),
            right: chi.len(),
        });
    }
    Ok(z.iter().zip(chi).map(|(a, b)| a * b).sum())
}

/// `z_0^2 + ... + z_n^2`.
pub fn complex_square(z: &[Complex64]) -> Complex64 {
    z.iter().map(|c| c * c).sum()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AbsC {
    /// Principal root with positive real part, or exactly zero.
    Value(Complex64),
    /// `z . z` lies on the cut `(-inf, 0)`; carries the root with
    /// nonnegative imaginary part for diagnostics.
    Branch(Complex64),
}

impl AbsC {
    pub fn value(&self) -> Option<Complex64> {
        match self {
            AbsC::Value(v) => Some(*v),
            AbsC::Branch(_) => None,
        }
    }

    pub fn raw(&self) -> Complex64 {
        match self {
            AbsC::Value(v) | AbsC::Branch(v) => *v,
        }
    }

    pub fn is_branch(&self) -> bool {
        matches!(self, AbsC::Branch(_))
    }
}

/// Principal square root of a complex number lying off `(-inf, 0)`.
pub fn principal_sqrt(v: Complex64) -> AbsC {
    if v.im == 0.0 && v.re < 0.0 {
        AbsC::Branch(Complex64::new(0.0, (-v.re).sqrt()))
    } else if v.re == 0.0 && v.im == 0.0 {
        AbsC::Value(Complex64::new(0.0, 0.0))
    } else {
        AbsC::Value(v.sqrt())
    }
}

/// `|z|_C` for a complex vector of any length.
pub fn abs_c(z: &[Complex64]) -> AbsC {
    principal_sqrt(complex_square(z))
}

/// `||z||_{L}` with `|z|^4 - |z.z|^2` written as
/// `4 sum_{i<j} Im(z_i conj(z_j))^2`, which avoids the cancellation of
/// the direct difference for nearly real `z`.
pub fn lie_norm(z: &[Complex64]) -> f64 {
    let herm: f64 = z.iter().map(|c| c.norm_sqr()).sum();
    let mut radicand = 0.0;
    for (i, a) in z.iter().enumerate() {
        for b in &z[i + 1..] {
            radicand += (a * b.conj()).im.powi(2);
        }
    }
    (herm + 2.0 * radicand.sqrt()).sqrt()
}

/// The same norm through the real and imaginary parts:
/// `|xi|^2 + |eta|^2 + 2 |xi ^ eta|`, the wedge norm taken over its
/// components.
pub fn lie_norm_real_form(z: &[Complex64]) -> f64 {
    let xi2: f64 = z.iter().map(|c| c.re * c.re).sum();
    let eta2: f64 = z.iter().map(|c| c.im * c.im).sum();
    let mut wedge = 0.0;
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            wedge += (z[i].re * z[j].im - z[j].re * z[i].im).powi(2);
        }
    }
    (xi2 + eta2 + 2.0 * wedge.sqrt()).sqrt()
}

pub fn in_lie_ball(z: &[Complex64]) -> bool {
    lie_norm(z) < 1.0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GammaKind {
    /// `n` odd: `(n-1)`-sphere in the hyperplane through `xi` normal to `eta`.
    Sphere,
    /// `n` even: the solid ball bounded by that sphere.
    Ball,
    /// `eta = 0`: the single point `xi`.
    Point,
}

impl GammaKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            GammaKind::Sphere => "sphere",
            GammaKind::Ball => "ball",
            GammaKind::Point => "point",
        }
    }
}

/// Real singular set `gamma_C(z)` of the complexified kernel at `z`.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaDescriptor {
    pub center: Vec<f64>,
    pub radius: f64,
    pub normal: Option<Vec<f64>>,
    pub kind: GammaKind,
}

pub fn gamma_c(z: &ComplexParavector) -> GammaDescriptor {
    let xi = z.re();
    let eta = z.im();
    let radius = norm(&eta);
    if radius == 0.0 {
        return GammaDescriptor {
            center: xi,
            radius: 0.0,
            normal: None,
            kind: GammaKind::Point,
        };
    }
    let normal = eta.iter().map(|e| e / radius).collect();
    let kind = if z.n() % 2 == 1 {
        GammaKind::Sphere
    } else {
        GammaKind::Ball
    };
    GammaDescriptor {
        center: xi,
        radius,
        normal: Some(normal),
        kind,
    }
}

/// Largest distance from the origin of a point of `gamma_C(z)`.
pub fn gamma_max_dist(z: &ComplexParavector) -> f64 {
    let xi = z.re();
    let eta = z.im();
    let xi_norm = norm(&xi);
    let eta_norm = norm(&eta);
    if eta_norm == 0.0 {
        return xi_norm;
    }
    // angle(0, eta) = pi/2
    let (cos, sin) = if xi_norm == 0.0 {
        (0.0, 1.0)
    } else {
        let scale = xi_norm * eta_norm;
        let cos = (dot(&xi, &eta) / scale).clamp(-1.0, 1.0);
        // the wedge norm keeps sin accurate when xi is nearly parallel to eta
        let mut wedge = 0.0;
        for i in 0..xi.len() {
            for j in i + 1..xi.len() {
                wedge += (xi[i] * eta[j] - xi[j] * eta[i]).powi(2);
            }
        }
        (cos, (wedge.sqrt() / scale).min(1.0))
    };
    let along = xi_norm * cos;
    let across = xi_norm * sin + eta_norm;
    (along * along + across * across).sqrt()
}

/// `z` lies in `kappa(B_r(0))`: its singular set sits inside the open ball.
pub fn kappa_ball_member(z: &ComplexParavector, r: f64) -> bool {
    gamma_max_dist(z) < r
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
