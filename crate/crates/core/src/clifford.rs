//! The complexified Clifford algebra `Cl_n(ℂ)` with negative-definite
//! signature `e_i² = −1`.
//!
//! A [`Multivector`] stores all `2^n` coefficients densely, indexed by blade
//! bitmask: bit `i` set means `e_{i+1}` is a factor of the blade. Blades are
//! always kept in increasing index order, so the mask alone fixes the sign
//! convention.
//!
//! ```text
//! e_1 e_2 = e_12,   e_2 e_1 = −e_12,   e_i e_i = −1
//! ```

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 12;

pub type Coeffs = SmallVec<[Complex64; 8]>;

/// Sign of the product of basis blades `e_a e_b` (the result blade is `a ^ b`).
#[inline]
pub fn blade_sign(a: usize, b: usize) -> f64 {
    // Transpositions needed to bring the concatenation into increasing order.
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let i = rest.trailing_zeros();
        swaps += (a >> (i + 1)).count_ones();
        rest &= rest - 1;
    }
    // Each repeated generator contributes e_i e_i = −1.
    swaps += (a & b).count_ones();
    if swaps.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Sign picked up by a grade-`k` blade under Clifford conjugation.
#[inline]
pub fn conjugation_sign(grade: u32) -> f64 {
    // ē_A = (−1)^{k(k+1)/2} e_A
    if (grade * (grade + 1) / 2).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

#[derive(Clone, PartialEq)]
pub struct Multivector {
    n: usize,
    coeffs: Coeffs,
}

impl Multivector {
    pub fn zero(n: usize) -> Self {
        assert!(
            (1..=MAX_DIM).contains(&n),
            "ambient dimension {n} outside 1..={MAX_DIM}"
        );
        Self {
            n,
            coeffs: SmallVec::from_elem(Complex64::new(0.0, 0.0), 1 << n),
        }
    }

    /// Checked constructor for user-supplied dimensions.
    pub fn try_zero(n: usize) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&n) {
            return Err(Error::DimensionOutOfRange(n));
        }
        Ok(Self::zero(n))
    }

    pub fn scalar(n: usize, value: impl Into<Complex64>) -> Self {
        let mut m = Self::zero(n);
        m.coeffs[0] = value.into();
        m
    }

    pub fn one(n: usize) -> Self {
        Self::scalar(n, 1.0)
    }

    /// Basis blade with the given bitmask and unit coefficient.
    pub fn blade(n: usize, mask: usize) -> Self {
        let mut m = Self::zero(n);
        assert!(mask < (1 << n), "blade mask {mask:#b} out of range for n = {n}");
        m.coeffs[mask] = Complex64::new(1.0, 0.0);
        m
    }

    /// The generator `e_i`, 1-based as in the usual notation.
    pub fn e(n: usize, i: usize) -> Self {
        assert!((1..=n).contains(&i), "generator index {i} out of range for n = {n}");
        Self::blade(n, 1 << (i - 1))
    }

    /// Embeds a real vector `x ↦ Σ x_i e_i`.
    pub fn vector(x: &[f64]) -> Self {
        let mut m = Self::zero(x.len());
        for (i, &xi) in x.iter().enumerate() {
            m.coeffs[1 << i] = Complex64::new(xi, 0.0);
        }
        m
    }

    pub fn from_coeffs(n: usize, coeffs: &[Complex64]) -> Result<Self> {
        let mut m = Self::try_zero(n)?;
        if coeffs.len() != 1 << n {
            return Err(Error::Shape(format!(
                "expected {} coefficients for n = {n}, got {}",
                1 << n,
                coeffs.len()
            )));
        }
        m.coeffs.copy_from_slice(coeffs);
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    #[inline]
    pub fn get(&self, mask: usize) -> Complex64 {
        self.coeffs[mask]
    }

    #[inline]
    pub fn set(&mut self, mask: usize, value: impl Into<Complex64>) {
        self.coeffs[mask] = value.into();
    }

    pub fn scalar_part(&self) -> Complex64 {
        self.coeffs[0]
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn geometric_product(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self.mul_unchecked(other))
    }

    /// Blade-by-blade product; callers guarantee equal dimensions.
    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for (a, &ca) in self.coeffs.iter().enumerate() {
            if ca.re == 0.0 && ca.im == 0.0 {
                continue;
            }
            for (b, &cb) in other.coeffs.iter().enumerate() {
                if cb.re == 0.0 && cb.im == 0.0 {
                    continue;
                }
                out.coeffs[a ^ b] += ca * cb * blade_sign(a, b);
            }
        }
        out
    }

    /// `self += s · a · b`, avoiding the temporary product.
    pub(crate) fn add_product_scaled(&mut self, a: &Self, b: &Self, s: Complex64) {
        for (ia, &ca) in a.coeffs.iter().enumerate() {
            if ca.re == 0.0 && ca.im == 0.0 {
                continue;
            }
            let cas = ca * s;
            for (ib, &cb) in b.coeffs.iter().enumerate() {
                if cb.re == 0.0 && cb.im == 0.0 {
                    continue;
                }
                self.coeffs[ia ^ ib] += cas * cb * blade_sign(ia, ib);
            }
        }
    }

    /// Scalar and bivector parts of the product of two grade-1 elements.
    pub fn vector_parts(&self, other: &Self) -> Result<(Complex64, Self)> {
        self.check_dim(other)?;
        if !self.is_pure_grade(1) || !other.is_pure_grade(1) {
            return Err(Error::NotAVector);
        }
        let dot: Complex64 = (0..self.n)
            .map(|i| self.coeffs[1 << i] * other.coeffs[1 << i])
            .sum();
        let prod = self.mul_unchecked(other);
        Ok((-dot, prod.grade_project_unchecked(2)))
    }

    /// Clifford conjugate, complexified: reverses blade order, flips every
    /// generator and complex-conjugates coefficients.
    pub fn conjugate(&self) -> Self {
        let mut out = self.clone();
        for (mask, c) in out.coeffs.iter_mut().enumerate() {
            *c = c.conj() * conjugation_sign(mask.count_ones());
        }
        out
    }

    pub fn grade_project(&self, k: usize) -> Result<Self> {
        if k > self.n {
            return Err(Error::GradeOutOfRange { grade: k, n: self.n });
        }
        Ok(self.grade_project_unchecked(k))
    }

    fn grade_project_unchecked(&self, k: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (mask, &c) in self.coeffs.iter().enumerate() {
            if mask.count_ones() as usize == k {
                out.coeffs[mask] = c;
            }
        }
        out
    }

    /// Largest coefficient modulus among blades of grade `k`.
    pub fn grade_magnitude(&self, k: usize) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(mask, _)| mask.count_ones() as usize == k)
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_pure_grade(&self, k: usize) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(mask, c)| mask.count_ones() as usize == k || c.norm() == 0.0)
    }

    /// `[a ā]_0`. For real vectors this is `Σ x_i²`.
    pub fn clifford_norm_sq(&self) -> Complex64 {
        // Only matching blades contribute to the scalar part, and ē_A e_A = 1
        // for every blade, so the scalar part reduces to a coefficient sum.
        self.coeffs
            .iter()
            .enumerate()
            .map(|(mask, &c)| {
                let sign = conjugation_sign(mask.count_ones())
                    * blade_sign(mask, mask);
                c * c.conj() * sign
            })
            .sum()
    }

    /// Hermitian coefficient norm `sqrt(Σ |x_A|²)`. Equals the Clifford norm
    /// wherever that is real and non-negative.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `x^{-1} = −x / ‖x‖²` for a non-zero real vector.
    pub fn vector_inverse(&self) -> Result<Self> {
        if !self.is_pure_grade(1) || self.coeffs.iter().any(|c| c.im != 0.0) {
            return Err(Error::NotAVector);
        }
        let norm_sq = self.clifford_norm_sq().re;
        if norm_sq <= 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(self.scale(-1.0 / norm_sq))
    }

    pub fn scale(&self, s: impl Into<Complex64>) -> Self {
        let s = s.into();
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= s);
        out
    }

    pub(crate) fn axpy(&mut self, s: Complex64, other: &Self) {
        for (c, &o) in self.coeffs.iter_mut().zip(other.coeffs.iter()) {
            *c += s * o;
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector(n={}; {})", self.n, self)
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (mask, c) in self.coeffs.iter().enumerate() {
            if c.norm() == 0.0 {
                continue;
            }
            if wrote {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            if mask != 0 {
                write!(f, "e")?;
                for i in 0..self.n {
                    if mask >> i & 1 == 1 {
                        write!(f, "{}", i + 1)?;
                    }
                }
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

// Operator impls panic on dimension mismatch; the fallible path is
// `geometric_product`.

impl Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.n, rhs.n, "dimension mismatch in addition");
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Multivector {
    type Output = Multivector;
    fn add(mut self, rhs: Multivector) -> Multivector {
        self += &rhs;
        self
    }
}

impl AddAssign<&Multivector> for Multivector {
    fn add_assign(&mut self, rhs: &Multivector) {
        assert_eq!(self.n, rhs.n, "dimension mismatch in addition");
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a += b;
        }
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

impl Sub for Multivector {
    type Output = Multivector;
    fn sub(mut self, rhs: Multivector) -> Multivector {
        self -= &rhs;
        self
    }
}

impl SubAssign<&Multivector> for Multivector {
    fn sub_assign(&mut self, rhs: &Multivector) {
        assert_eq!(self.n, rhs.n, "dimension mismatch in subtraction");
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a -= b;
        }
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale(-1.0)
    }
}

impl Neg for Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale(-1.0)
    }
}

impl Mul for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.n, rhs.n, "dimension mismatch in geometric product");
        self.mul_unchecked(rhs)
    }
}

impl Mul for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Multivector) -> Multivector {
        &self * &rhs
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
        self.scale(rhs)
    }
}
