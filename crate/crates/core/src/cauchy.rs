//! Fundamental solution of `D`, the real and complexified Cauchy kernels,
//! and the Cauchy transform over origin-centred spheres `r S^n`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::clifford::{Multivector, Paravector};
use crate::error::{MonolieError, Result};
use crate::geometry::complex_square;
use crate::monogenic::MonogenicFunction;
use crate::quadrature::{sphere_area, Measure, SphereQuadrature};

/// Relative size below which `|w - z|_C^2` counts as zero or as lying on
/// the cut.
pub const DOMAIN_TOL: f64 = 1e-12;

/// Surface area `sigma_n` of the unit sphere `S^n`.
pub fn sigma_n(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(MonolieError::UnsupportedDimension(0));
    }
    Ok(sphere_area(n))
}

/// `E(x) = conj(x) / (sigma_n |x|^{n+1})` for a nonzero real paravector.
pub fn fundamental_e(x: &Paravector) -> Result<Paravector> {
    if !x.is_real(0.0) {
        return Err(MonolieError::InvalidArgument(
            "fundamental solution takes a real paravector".into(),
        ));
    }
    let r = x.norm();
    if r == 0.0 {
        return Err(MonolieError::Singular("fundamental solution at the origin"));
    }
    let n = x.n();
    let s = 1.0 / (sigma_n(n)? * r.powi(n as i32 + 1));
    Ok(x.clifford_conjugate().scale(Complex64::new(s, 0.0)))
}

#[derive(Clone, Debug, PartialEq)]
pub enum KernelValue {
    Value(Paravector),
    /// `|w - z|_C^2` vanishes, or for even `n` lies on `(-inf, 0]`.
    Domain,
}

impl KernelValue {
    pub fn value(&self) -> Option<&Paravector> {
        match self {
            KernelValue::Value(v) => Some(v),
            KernelValue::Domain => None,
        }
    }

    pub fn is_domain(&self) -> bool {
        matches!(self, KernelValue::Domain)
    }
}

/// Complexified Cauchy kernel
/// `G_w(z) = conj_C(w - z) / (sigma_n |w - z|_C^{n+1})`.
///
/// For odd `n` the power is an integer power of `|w - z|_C^2`; for even `n`
/// it uses the principal square root.
pub fn g_complex(omega: &[f64], zeta: &Paravector) -> Result<KernelValue> {
    let n = zeta.n();
    if omega.len() != n + 1 {
        return Err(MonolieError::DimensionMismatch {
            left: omega.len(),
            right: n + 1,
        });
    }
    let diff: Vec<Complex64> = omega
        .iter()
        .zip(zeta.comps())
        .map(|(&w, z)| Complex64::new(w, 0.0) - z)
        .collect();
    let sq = complex_square(&diff);
    let scale: f64 = diff.iter().map(|c| c.norm_sqr()).sum();
    let tol = DOMAIN_TOL * scale.max(f64::MIN_POSITIVE);
    if sq.norm() <= tol || scale == 0.0 {
        return Ok(KernelValue::Domain);
    }
    let power = if n % 2 == 1 {
        sq.powi((n as i32 + 1) / 2)
    } else {
        if sq.im.abs() <= tol && sq.re < 0.0 {
            return Ok(KernelValue::Domain);
        }
        sq.powi(n as i32 / 2) * sq.sqrt()
    };
    let factor = 1.0 / (sigma_n(n)? * power);
    let mut comps = diff;
    for c in comps.iter_mut().skip(1) {
        *c = -*c;
    }
    Ok(KernelValue::Value(Paravector::new(comps)?.scale(factor)))
}

/// Compensated sum of multivectors in the given order.
pub(crate) fn kahan_sum(n: usize, terms: &[Multivector]) -> Multivector {
    let len = 1usize << n;
    let mut sum = vec![Complex64::new(0.0, 0.0); len];
    let mut comp = vec![Complex64::new(0.0, 0.0); len];
    for t in terms {
        for ((s, c), &x) in sum.iter_mut().zip(comp.iter_mut()).zip(t.coeffs()) {
            let y = x - *c;
            let next = *s + y;
            *c = (next - *s) - y;
            *s = next;
        }
    }
    Multivector::from_coeffs(n, sum).expect("length 2^n")
}

/// Cauchy transform over a fixed sphere with the boundary data
/// `n(w) f(w)` precomputed at every node.
pub struct CauchyTransform {
    n: usize,
    points: Vec<Vec<f64>>,
    weighted_data: Vec<Multivector>,
}

impl CauchyTransform {
    /// `quad` must be a hypersurface-measure rule on `r S^n` with `n` the
    /// generator count of `f`.
    pub fn new<F: MonogenicFunction + ?Sized>(f: &F, quad: &SphereQuadrature) -> Result<Self> {
        let n = f.generators();
        if quad.dim != n {
            return Err(MonolieError::DimensionMismatch {
                left: quad.dim,
                right: n,
            });
        }
        if quad.measure != Measure::Hypersurface {
            return Err(MonolieError::InvalidArgument(
                "Cauchy transform needs the hypersurface measure".into(),
            ));
        }
        let (points, weighted_data): (Vec<_>, Vec<_>) = (0..quad.len())
            .into_par_iter()
            .map(|i| {
                let unit = &quad.nodes[i];
                let point = quad.point(i);
                let xc: Vec<Complex64> = point.iter().map(|&v| Complex64::new(v, 0.0)).collect();
                let normal = Paravector::from_real(unit).expect("n validated").to_multivector();
                let nf = &normal * &f.eval(&xc);
                (point, nf.scale(Complex64::new(quad.weights[i], 0.0)))
            })
            .unzip();
        Ok(Self {
            n,
            points,
            weighted_data,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `sum_i w_i G_{w_i}(z) n(w_i) f(w_i)`.
    pub fn eval(&self, zeta: &Paravector) -> Result<Multivector> {
        if zeta.n() != self.n {
            return Err(MonolieError::DimensionMismatch {
                left: zeta.n(),
                right: self.n,
            });
        }
        let terms: Vec<Multivector> = self
            .points
            .par_iter()
            .zip(self.weighted_data.par_iter())
            .enumerate()
            .map(|(node, (omega, data))| match g_complex(omega, zeta)? {
                KernelValue::Value(g) => Ok(&g.to_multivector() * data),
                KernelValue::Domain => Err(MonolieError::KernelSingular { node }),
            })
            .collect::<Result<_>>()?;
        Ok(kahan_sum(self.n, &terms))
    }
}

/// One-shot Cauchy transform of `f` at `zeta`.
pub fn cauchy_transform<F: MonogenicFunction + ?Sized>(
    f: &F,
    quad: &SphereQuadrature,
    zeta: &Paravector,
) -> Result<Multivector> {
    CauchyTransform::new(f, quad)?.eval(zeta)
}
