//! Product quadrature rules on `S^1`, `S^2`, `S^3` and Gauss rules on
//! `[-1, 1]`.

use std::f64::consts::PI;

use crate::error::{MonolieError, Result};

/// Gauss-Legendre nodes and weights on `[-1, 1]`, exact for polynomials of
/// degree `< 2 * npts`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(npts: usize) -> Self {
        assert!(npts > 0, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; npts];
        let mut weights = vec![0.0; npts];
        let n = npts as f64;
        for i in 0..npts.div_ceil(2) {
            // Tricomi initial guess, then Newton on P_n
            let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(npts, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(npts, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[npts - 1 - i] = x;
            weights[i] = w;
            weights[npts - 1 - i] = w;
        }
        if npts % 2 == 1 {
            nodes[npts / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Rule mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let nodes = self.nodes.iter().map(|t| mid + half * t).collect();
        let weights = self.weights.iter().map(|w| w * half).collect();
        (nodes, weights)
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Measure {
    /// Surface measure of the sphere of radius `r`, total `sigma_d r^d`.
    Hypersurface,
    /// Rotation-invariant probability measure, total 1.
    Probability,
}

/// Nodes and weights on the sphere `r S^dim` in `R^{dim+1}`.
#[derive(Clone, Debug)]
pub struct SphereQuadrature {
    pub dim: usize,
    pub radius: f64,
    /// Unit vectors; the quadrature point is `radius * node`.
    pub nodes: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    pub measure: Measure,
    /// Polynomials up to this total degree are integrated exactly.
    pub exactness: usize,
}

impl SphereQuadrature {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn point(&self, i: usize) -> Vec<f64> {
        self.nodes[i].iter().map(|x| x * self.radius).collect()
    }

    pub fn integrate<F: Fn(&[f64]) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, &w)| w * f(&x.iter().map(|v| v * self.radius).collect::<Vec<_>>()))
            .sum()
    }
}

/// Surface area of the unit sphere `S^d`, `2 pi^{(d+1)/2} / Gamma((d+1)/2)`.
pub fn sphere_area(d: usize) -> f64 {
    // Gamma at integers and half-integers by the functional equation.
    let twice = d + 1;
    let gamma = if twice.is_multiple_of(2) {
        (1..twice / 2).map(|k| k as f64).product::<f64>()
    } else {
        let mut g = PI.sqrt();
        let mut x = 0.5;
        while x < twice as f64 / 2.0 - 0.25 {
            g *= x;
            x += 1.0;
        }
        g
    };
    2.0 * PI.powf(twice as f64 / 2.0) / gamma
}

/// Product rule on `r S^dim` for `dim` in `{1, 2, 3}`.
///
/// * `dim = 1`: `level` equispaced points.
/// * `dim = 2`: `level` Gauss-Legendre nodes in `cos(theta)` times
///   `2 level` equispaced azimuths.
/// * `dim = 3`: `level` Gauss-Chebyshev (second kind) nodes in the first
///   coordinate times the `dim = 2` rule.
pub fn build_sphere_quadrature(
    dim: usize,
    radius: f64,
    level: usize,
    measure: Measure,
) -> Result<SphereQuadrature> {
    if !(1..=3).contains(&dim) {
        return Err(MonolieError::UnsupportedDimension(dim));
    }
    if level == 0 || radius <= 0.0 || !radius.is_finite() {
        return Err(MonolieError::InvalidArgument(format!(
            "sphere quadrature needs level > 0 and radius > 0 (level {level}, radius {radius})"
        )));
    }
    let (nodes, mut weights, exactness) = match dim {
        1 => circle_rule(level),
        2 => s2_rule(level),
        _ => s3_rule(level),
    };
    let total = match measure {
        Measure::Hypersurface => sphere_area(dim) * radius.powi(dim as i32),
        Measure::Probability => 1.0,
    };
    let scale = total / sphere_area(dim);
    for w in &mut weights {
        *w *= scale;
    }
    Ok(SphereQuadrature {
        dim,
        radius,
        nodes,
        weights,
        measure,
        exactness,
    })
}

/// Smallest rule of this family on `r S^dim` that integrates every
/// polynomial of total degree `degree` exactly. The rules are symmetric
/// under `x -> -x`.
pub fn sphere_rule_for_degree(
    dim: usize,
    radius: f64,
    degree: usize,
    measure: Measure,
) -> Result<SphereQuadrature> {
    let level = if dim == 1 {
        (degree + 2).next_multiple_of(2)
    } else {
        degree / 2 + 1
    };
    build_sphere_quadrature(dim, radius, level.max(2), measure)
}

fn circle_rule(level: usize) -> (Vec<Vec<f64>>, Vec<f64>, usize) {
    let h = 2.0 * PI / level as f64;
    let nodes = (0..level)
        .map(|i| {
            let a = h * i as f64;
            vec![a.cos(), a.sin()]
        })
        .collect();
    (nodes, vec![h; level], level - 1)
}

fn s2_rule(level: usize) -> (Vec<Vec<f64>>, Vec<f64>, usize) {
    let gl = GaussLegendre::new(level);
    let naz = 2 * level;
    let h = 2.0 * PI / naz as f64;
    let mut nodes = Vec::with_capacity(level * naz);
    let mut weights = Vec::with_capacity(level * naz);
    for (&t, &w) in gl.nodes.iter().zip(&gl.weights) {
        let s = (1.0 - t * t).max(0.0).sqrt();
        for j in 0..naz {
            let a = h * j as f64;
            nodes.push(vec![t, s * a.cos(), s * a.sin()]);
            weights.push(w * h);
        }
    }
    (nodes, weights, 2 * level - 1)
}

fn s3_rule(level: usize) -> (Vec<Vec<f64>>, Vec<f64>, usize) {
    let (inner_nodes, inner_weights, _) = s2_rule(level);
    let step = PI / (level + 1) as f64;
    let mut nodes = Vec::with_capacity(level * inner_nodes.len());
    let mut weights = Vec::with_capacity(level * inner_nodes.len());
    for j in 1..=level {
        let angle = step * j as f64;
        let t = angle.cos();
        let s = angle.sin();
        let wt = step * s * s;
        for (u, &wu) in inner_nodes.iter().zip(&inner_weights) {
            nodes.push(vec![t, s * u[0], s * u[1], s * u[2]]);
            weights.push(wt * wu);
        }
    }
    (nodes, weights, 2 * level - 1)
}
