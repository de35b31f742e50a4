//! Dense Clifford algebra `F_(n)` with generators `e_1..e_n`, `e_j^2 = -1`.
//!
//! Blades are indexed by bitmask: bit `j-1` set means `e_j` is a factor of
//! `e_S`, index 0 is the unit `e_0`. Coefficients are always complex; a real
//! multivector is one whose imaginary parts vanish.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

use crate::error::{MonolieError, Result};

pub const MAX_GENERATORS: usize = 8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Sign of `e_A e_B = sign * e_{A xor B}`.
///
/// Counts the transpositions needed to bring the concatenated word into
/// canonical order, then contracts every shared generator with `e_j^2 = -1`.
#[inline]
pub fn blade_product_sign(a: usize, b: usize) -> f64 {
    let mut swaps = 0u32;
    let mut shifted = a >> 1;
    while shifted != 0 {
        swaps += (shifted & b).count_ones();
        shifted >>= 1;
    }
    let contractions = (a & b).count_ones();
    if (swaps + contractions).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Sign `s` with `conj(e_S) = s * e_S`, so that `e_S conj(e_S) = e_0`.
#[inline]
pub fn blade_conjugate_sign(mask: usize) -> f64 {
    let grade = mask.count_ones();
    if (grade * (grade + 1) / 2).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

#[derive(Clone, PartialEq)]
pub struct Multivector {
    n: usize,
    coeffs: Vec<Complex64>,
}

impl Multivector {
    pub fn zero(n: usize) -> Result<Self> {
        check_generators(n)?;
        Ok(Self {
            n,
            coeffs: vec![ZERO; 1 << n],
        })
    }

    pub fn from_coeffs(n: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        check_generators(n)?;
        if coeffs.len() != 1 << n {
            return Err(MonolieError::DimensionMismatch {
                left: coeffs.len(),
                right: 1 << n,
            });
        }
        Ok(Self { n, coeffs })
    }

    pub fn scalar(n: usize, value: Complex64) -> Result<Self> {
        let mut out = Self::zero(n)?;
        out.coeffs[0] = value;
        Ok(out)
    }

    pub fn one(n: usize) -> Result<Self> {
        Self::scalar(n, ONE)
    }

    /// Unit blade `e_S` for the subset encoded by `mask`.
    pub fn blade(n: usize, mask: usize) -> Result<Self> {
        let mut out = Self::zero(n)?;
        if mask >= out.coeffs.len() {
            return Err(MonolieError::InvalidArgument(format!(
                "blade mask {mask} out of range for n = {n}"
            )));
        }
        out.coeffs[mask] = ONE;
        Ok(out)
    }

    /// Generator `e_j`, `1 <= j <= n`; `j = 0` gives the unit.
    pub fn generator(n: usize, j: usize) -> Result<Self> {
        if j > n {
            return Err(MonolieError::InvalidArgument(format!(
                "generator e_{j} does not exist for n = {n}"
            )));
        }
        Self::blade(n, if j == 0 { 0 } else { 1 << (j - 1) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn coeff(&self, mask: usize) -> Complex64 {
        self.coeffs[mask]
    }

    pub fn scalar_part(&self) -> Complex64 {
        self.coeffs[0]
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.im.abs() <= tol)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.norm() <= tol)
    }

    /// Clifford product; errors when the generator counts differ.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let mut out = vec![ZERO; self.coeffs.len()];
        for (a, &ca) in self.coeffs.iter().enumerate() {
            if ca == ZERO {
                continue;
            }
            for (b, &cb) in other.coeffs.iter().enumerate() {
                if cb == ZERO {
                    continue;
                }
                out[a ^ b] += ca * cb * blade_product_sign(a, b);
            }
        }
        Self {
            n: self.n,
            coeffs: out,
        }
    }

    /// `conj(u) = sum conj(u_S) conj(e_S)`, complex conjugation included.
    pub fn conjugate(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(mask, c)| c.conj() * blade_conjugate_sign(mask))
            .collect();
        Self { n: self.n, coeffs }
    }

    /// Blade-wise conjugation without touching the complex scalars.
    pub fn clifford_conjugate(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(mask, c)| c * blade_conjugate_sign(mask))
            .collect();
        Self { n: self.n, coeffs }
    }

    /// `(u, v) = [u conj(v)]_0 = sum u_S conj(v_S)`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_same(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a * b.conj())
            .sum())
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(MonolieError::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }
}

fn check_generators(n: usize) -> Result<()> {
    if n > MAX_GENERATORS {
        return Err(MonolieError::UnsupportedDimension(n));
    }
    Ok(())
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector(n={})[", self.n)?;
        let mut first = true;
        for (mask, c) in self.coeffs.iter().enumerate() {
            if *c == ZERO {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}{:+}i)e{}", c.re, c.im, blade_label(mask))?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, "]")
    }
}

/// `e_{1,2}` style label, `0` for the unit.
pub fn blade_label(mask: usize) -> String {
    if mask == 0 {
        return "0".into();
    }
    let idx: Vec<String> = (0..usize::BITS as usize)
        .filter(|b| mask & (1 << b) != 0)
        .map(|b| (b + 1).to_string())
        .collect();
    format!("{{{}}}", idx.join(","))
}

impl Mul for &Multivector {
    type Output = Multivector;

    /// Panics on mismatched generator counts; use [`Multivector::try_mul`]
    /// for a checked product.
    fn mul(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.n, rhs.n, "generator count mismatch");
        self.mul_unchecked(rhs)
    }
}

impl Mul<Complex64> for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Complex64) -> Multivector {
        self.scale(rhs)
    }
}

impl Mul<f64> for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: f64) -> Multivector {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

impl Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl AddAssign<&Multivector> for Multivector {
    fn add_assign(&mut self, rhs: &Multivector) {
        assert_eq!(self.n, rhs.n, "generator count mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&Multivector> for Multivector {
    fn sub_assign(&mut self, rhs: &Multivector) {
        assert_eq!(self.n, rhs.n, "generator count mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

/// Checked product, the algebra's multiplication.
pub fn mv_mul(a: &Multivector, b: &Multivector) -> Result<Multivector> {
    a.try_mul(b)
}

/// Paravector `x_0 e_0 + x_1 e_1 + ... + x_n e_n` with complex components.
#[derive(Clone, Debug, PartialEq)]
pub struct Paravector {
    comps: Vec<Complex64>,
}

impl Paravector {
    pub fn new(comps: Vec<Complex64>) -> Result<Self> {
        if comps.is_empty() {
            return Err(MonolieError::InvalidArgument(
                "paravector needs at least the e_0 component".into(),
            ));
        }
        check_generators(comps.len() - 1)?;
        Ok(Self { comps })
    }

    pub fn from_real(xs: &[f64]) -> Result<Self> {
        Self::new(xs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::new(vec![ZERO; n + 1])
    }

    /// Number of generators; the paravector has `n + 1` components.
    pub fn n(&self) -> usize {
        self.comps.len() - 1
    }

    pub fn comps(&self) -> &[Complex64] {
        &self.comps
    }

    pub fn comps_mut(&mut self) -> &mut [Complex64] {
        &mut self.comps
    }

    pub fn re(&self) -> Vec<f64> {
        self.comps.iter().map(|c| c.re).collect()
    }

    pub fn im(&self) -> Vec<f64> {
        self.comps.iter().map(|c| c.im).collect()
    }

    /// Components `z_1..z_n` of the vector part.
    pub fn vector_part(&self) -> &[Complex64] {
        &self.comps[1..]
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.comps.iter().all(|c| c.im.abs() <= tol)
    }

    /// Euclidean (Hermitian) norm `sqrt(sum |z_j|^2)`.
    pub fn norm(&self) -> f64 {
        self.comps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `x_0 e_0 - x_1 e_1 - ... - x_n e_n` with the scalars left alone.
    pub fn clifford_conjugate(&self) -> Self {
        let mut comps = self.comps.clone();
        for c in comps.iter_mut().skip(1) {
            *c = -*c;
        }
        Self { comps }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            comps: self.comps.iter().map(|c| c * s).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.comps.len() != other.comps.len() {
            return Err(MonolieError::DimensionMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(Self {
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn to_multivector(&self) -> Multivector {
        let n = self.n();
        let mut coeffs = vec![ZERO; 1 << n];
        coeffs[0] = self.comps[0];
        for j in 1..=n {
            coeffs[1 << (j - 1)] = self.comps[j];
        }
        Multivector { n, coeffs }
    }

    /// Reads the `e_0..e_n` blades of `u`; other blades are dropped.
    pub fn from_multivector(u: &Multivector) -> Self {
        let mut comps = vec![u.coeffs[0]];
        comps.extend((1..=u.n).map(|j| u.coeffs[1 << (j - 1)]));
        Self { comps }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Kelvin inverse `conj(x)/|x|^2` of a nonzero real paravector.
pub fn kelvin_inverse(x: &Paravector) -> Result<Paravector> {
    if !x.is_real(0.0) {
        return Err(MonolieError::InvalidArgument(
            "Kelvin inverse needs a real paravector".into(),
        ));
    }
    let norm_sq: f64 = x.comps.iter().map(|c| c.re * c.re).sum();
    if norm_sq == 0.0 {
        return Err(MonolieError::Singular("Kelvin inverse of zero"));
    }
    Ok(x.clifford_conjugate().scale(Complex64::new(1.0 / norm_sq, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn generator_squares_to_minus_one() {
        for n in 1..=4 {
            for j in 1..=n {
                let e = Multivector::generator(n, j).unwrap();
                let sq = mv_mul(&e, &e).unwrap();
                assert_eq!(sq, Multivector::scalar(n, c(-1.0)).unwrap());
            }
        }
    }

    #[test]
    fn generators_anticommute() {
        let e1 = Multivector::generator(3, 1).unwrap();
        let e2 = Multivector::generator(3, 2).unwrap();
        let e12 = Multivector::blade(3, 0b011).unwrap();
        assert_eq!(&e1 * &e2, e12);
        assert_eq!(&e2 * &e1, -&e12);
    }

    #[test]
    fn quaternion_cycle() {
        let i = Multivector::generator(2, 1).unwrap();
        let j = Multivector::generator(2, 2).unwrap();
        let k = Multivector::blade(2, 0b11).unwrap();
        assert_eq!(&i * &j, k);
        assert_eq!(&j * &k, i);
        assert_eq!(&k * &i, j);
        assert_eq!(&k * &k, Multivector::scalar(2, c(-1.0)).unwrap());
    }

    #[test]
    fn n1_is_complex_numbers() {
        let a = Multivector::from_coeffs(1, vec![c(1.5), c(-0.5)]).unwrap();
        let b = Multivector::from_coeffs(1, vec![c(0.25), c(2.0)]).unwrap();
        let za = num_complex::Complex64::new(1.5, -0.5);
        let zb = num_complex::Complex64::new(0.25, 2.0);
        let p = &a * &b;
        let zp = za * zb;
        assert!((p.coeff(0).re - zp.re).abs() < 1e-15);
        assert!((p.coeff(1).re - zp.im).abs() < 1e-15);
    }

    #[test]
    fn conjugation_of_basis() {
        for j in 1..=3 {
            let e = Multivector::generator(3, j).unwrap();
            assert_eq!(e.conjugate(), -&e);
        }
        let e0 = Multivector::one(3).unwrap();
        assert_eq!(e0.conjugate(), e0);
        let e12 = Multivector::blade(3, 0b011).unwrap();
        assert_eq!(e12.conjugate(), -&e12);
        for mask in 0..8 {
            let e = Multivector::blade(3, mask).unwrap();
            assert_eq!(&e * &e.conjugate(), e0);
        }
    }

    #[test]
    fn scalar_part_and_inner() {
        let e0 = Multivector::one(2).unwrap();
        let e1 = Multivector::generator(2, 1).unwrap();
        let e2 = Multivector::generator(2, 2).unwrap();
        assert_eq!(e0.scalar_part(), c(1.0));
        assert_eq!(e1.scalar_part(), c(0.0));
        assert_eq!((&e1 * &e1).scalar_part(), c(-1.0));
        assert_eq!(e1.inner(&e1).unwrap(), c(1.0));
        assert_eq!(e1.inner(&e2).unwrap(), c(0.0));
    }

    #[test]
    fn mismatched_dimensions_error() {
        let a = Multivector::one(2).unwrap();
        let b = Multivector::one(3).unwrap();
        assert!(matches!(
            mv_mul(&a, &b),
            Err(MonolieError::DimensionMismatch { .. })
        ));
        assert!(a.inner(&b).is_err());
        assert!(Multivector::zero(9).is_err());
    }

    #[test]
    fn kelvin_inverse_basics() {
        let e0 = Paravector::from_real(&[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(kelvin_inverse(&e0).unwrap(), e0);
        let e1 = Paravector::from_real(&[0.0, 1.0, 0.0]).unwrap();
        assert_eq!(
            kelvin_inverse(&e1).unwrap(),
            Paravector::from_real(&[0.0, -1.0, 0.0]).unwrap()
        );
        let x = Paravector::from_real(&[0.3, -1.2, 0.7]).unwrap();
        let prod = &x.to_multivector() * &kelvin_inverse(&x).unwrap().to_multivector();
        assert!(prod.max_abs_diff(&Multivector::one(2).unwrap()) < 1e-15);
        assert!(matches!(
            kelvin_inverse(&Paravector::zero(2).unwrap()),
            Err(MonolieError::Singular(_))
        ));
    }

    #[test]
    fn paravector_norm_is_euclidean() {
        let x = Paravector::from_real(&[3.0, 0.0, 4.0]).unwrap();
        let u = x.to_multivector();
        assert!((u.norm() - 5.0).abs() < 1e-15);
        assert!((u.inner(&u).unwrap().re - 25.0).abs() < 1e-12);
        assert!(((&u * &u.conjugate()).scalar_part().re - 25.0).abs() < 1e-12);
    }
}
