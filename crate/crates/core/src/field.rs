//! Multivector-valued fields given in closed form with exact ambient
//! derivatives.

use std::sync::Arc;

use num_complex::Complex64;

use crate::clifford::Multivector;
use crate::error::{Error, Result};
use crate::jet::Jet;

pub trait AnalyticField: Send + Sync {
    fn dim(&self) -> usize;

    /// Highest derivative order [`AnalyticField::jet`] can supply.
    fn max_order(&self) -> usize {
        2
    }

    /// Value and ambient partials at `x` up to `order`.
    fn jet(&self, x: &[f64], order: usize) -> Result<Jet>;

    fn value(&self, x: &[f64]) -> Result<Multivector> {
        Ok(self.jet(x, 0)?.value)
    }

    fn partial(&self, x: &[f64], i: usize) -> Result<Multivector> {
        Ok(self.jet(x, 1)?.grad.swap_remove(i))
    }

    fn second_partial(&self, x: &[f64], i: usize, j: usize) -> Result<Multivector> {
        let jet = self.jet(x, 2)?;
        Ok(jet.hess[i * self.dim() + j].clone())
    }
}

pub type SharedField = Arc<dyn AnalyticField>;

impl<T: AnalyticField + ?Sized> AnalyticField for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn max_order(&self) -> usize {
        (**self).max_order()
    }

    fn jet(&self, x: &[f64], order: usize) -> Result<Jet> {
        (**self).jet(x, order)
    }
}

impl<T: AnalyticField + ?Sized> AnalyticField for Arc<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn max_order(&self) -> usize {
        (**self).max_order()
    }

    fn jet(&self, x: &[f64], order: usize) -> Result<Jet> {
        (**self).jet(x, order)
    }
}

pub(crate) fn check_order(order: usize, max: usize) -> Result<()> {
    if order > max {
        Err(Error::NoDerivative)
    } else {
        Ok(())
    }
}

fn truncated(mut jet: Jet, order: usize) -> Jet {
    if order < 2 {
        jet.hess.clear();
    }
    if order < 1 {
        jet.grad.clear();
    }
    jet
}

#[derive(Debug, Clone)]
pub struct ConstantField(pub Multivector);

impl AnalyticField for ConstantField {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn max_order(&self) -> usize {
        usize::MAX
    }

    fn jet(&self, _x: &[f64], order: usize) -> Result<Jet> {
        Ok(truncated(Jet::constant(self.0.clone()), order))
    }
}

/// `Σ_t c_t x^{p_t}` with multivector coefficients.
#[derive(Debug, Clone)]
pub struct PolynomialField {
    n: usize,
    terms: Vec<(Vec<u32>, Multivector)>,
}

impl PolynomialField {
    pub fn new(n: usize) -> Self {
        Self { n, terms: Vec::new() }
    }

    pub fn with_term(mut self, powers: &[u32], coef: Multivector) -> Self {
        self.add_term(powers, coef);
        self
    }

    pub fn add_term(&mut self, powers: &[u32], coef: Multivector) {
        assert_eq!(powers.len(), self.n, "exponent vector length must equal n");
        assert_eq!(coef.dim(), self.n, "coefficient dimension must equal n");
        self.terms.push((powers.to_vec(), coef));
    }

    /// The degree-1 monogenic `ω_1 e_1 − ω_2 e_2` in `R^3`.
    pub fn degree_one_monogenic() -> Self {
        Self::new(3)
            .with_term(&[1, 0, 0], Multivector::e(3, 1))
            .with_term(&[0, 1, 0], -Multivector::e(3, 2))
    }

    fn monomial(x: &[f64], p: &[u32], dj: Option<usize>, dk: Option<usize>) -> f64 {
        let mut q: Vec<i64> = p.iter().map(|&e| e as i64).collect();
        let mut c = 1.0;
        for d in [dj, dk].into_iter().flatten() {
            c *= q[d] as f64;
            q[d] -= 1;
            if c == 0.0 {
                return 0.0;
            }
        }
        q.iter()
            .zip(x)
            .map(|(&e, &xi)| xi.powi(e as i32))
            .product::<f64>()
            * c
    }
}

impl AnalyticField for PolynomialField {
    fn dim(&self) -> usize {
        self.n
    }

    fn max_order(&self) -> usize {
        usize::MAX
    }

    fn jet(&self, x: &[f64], order: usize) -> Result<Jet> {
        let n = self.n;
        let mut value = Multivector::zero(n);
        let mut grad = vec![Multivector::zero(n); if order >= 1 { n } else { 0 }];
        let mut hess = vec![Multivector::zero(n); if order >= 2 { n * n } else { 0 }];
        for (p, c) in &self.terms {
            value.axpy(Complex64::new(Self::monomial(x, p, None, None), 0.0), c);
            for (j, g) in grad.iter_mut().enumerate() {
                g.axpy(Complex64::new(Self::monomial(x, p, Some(j), None), 0.0), c);
            }
            for (jk, h) in hess.iter_mut().enumerate() {
                let m = Self::monomial(x, p, Some(jk / n), Some(jk % n));
                h.axpy(Complex64::new(m, 0.0), c);
            }
        }
        Ok(Jet { value, grad, hess })
    }
}

/// Smooth bump `exp(1 − 1/(1 − (d/r)²))` of the geodesic distance `d` to a
/// centre, times a constant multivector. The distance is extended off the
/// sphere as a function of `x/|x|`.
#[derive(Debug, Clone)]
pub struct BumpField {
    center: Vec<f64>,
    radius: f64,
    coef: Multivector,
}

impl BumpField {
    pub fn new(center: &[f64], radius: f64, coef: Multivector) -> Result<Self> {
        let r = center.iter().map(|c| c * c).sum::<f64>().sqrt();
        if (r - 1.0).abs() > 1e-10 {
            return Err(Error::NotOnSphere(r));
        }
        if !(radius > 0.0 && radius < std::f64::consts::PI) {
            return Err(Error::Domain(format!("bump radius {radius} outside (0, π)")));
        }
        if coef.dim() != center.len() {
            return Err(Error::DimensionMismatch {
                left: center.len(),
                right: coef.dim(),
            });
        }
        Ok(Self {
            center: center.to_vec(),
            radius,
            coef,
        })
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Scalar profile `B` and its first two derivatives in `s = cos d`.
    fn profile(&self, s: f64) -> (f64, f64, f64) {
        let d = s.clamp(-1.0, 1.0).acos();
        let rb = self.radius;
        let u = d / rb;
        if u >= 1.0 {
            return (0.0, 0.0, 0.0);
        }
        let one_m = 1.0 - u * u;
        let b = (1.0 - 1.0 / one_m).exp();
        // φ = d / sin d and φ'/sin d, with series near d = 0
        let (phi, phi_p_over_sin) = if d < 1e-3 {
            (1.0 + d * d / 6.0, 1.0 / 3.0 + 2.0 * d * d / 15.0)
        } else {
            let (sd, cd) = d.sin_cos();
            (d / sd, (sd - d * cd) / (sd * sd * sd))
        };
        let g = 2.0 * phi / (rb * rb * one_m * one_m);
        let gd_over_sin = 2.0 * phi_p_over_sin / (rb * rb * one_m * one_m)
            + 8.0 * phi * phi / (rb.powi(4) * one_m.powi(3));
        (b, b * g, b * (g * g - gd_over_sin))
    }
}

impl AnalyticField for BumpField {
    fn dim(&self) -> usize {
        self.center.len()
    }

    fn jet(&self, x: &[f64], order: usize) -> Result<Jet> {
        check_order(order, 2)?;
        let n = self.center.len();
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let r = r2.sqrt();
        let p: f64 = x.iter().zip(&self.center).map(|(a, b)| a * b).sum();
        let s = p / r;
        let (b0, b1, b2) = self.profile(s);
        let value = self.coef.scale(b0);
        let mut grad = Vec::new();
        let mut hess = Vec::new();
        if order >= 1 {
            let r3 = r2 * r;
            let ds: Vec<f64> = (0..n)
                .map(|j| self.center[j] / r - p * x[j] / r3)
                .collect();
            grad = ds.iter().map(|&dj| self.coef.scale(b1 * dj)).collect();
            if order >= 2 {
                let r5 = r3 * r2;
                for j in 0..n {
                    for k in 0..n {
                        let delta = if j == k { 1.0 } else { 0.0 };
                        let dds = -self.center[j] * x[k] / r3
                            - (self.center[k] * x[j] + p * delta) / r3
                            + 3.0 * p * x[j] * x[k] / r5;
                        hess.push(self.coef.scale(b2 * ds[j] * ds[k] + b1 * dds));
                    }
                }
            }
        }
        Ok(Jet { value, grad, hess })
    }
}

/// Field defined by a closure producing jets.
pub struct FnField<F> {
    n: usize,
    max_order: usize,
    f: F,
}

impl<F> FnField<F>
where
    F: Fn(&[f64], usize) -> Result<Jet> + Send + Sync,
{
    pub fn new(n: usize, max_order: usize, f: F) -> Self {
        Self { n, max_order, f }
    }
}

impl<F> AnalyticField for FnField<F>
where
    F: Fn(&[f64], usize) -> Result<Jet> + Send + Sync,
{
    fn dim(&self) -> usize {
        self.n
    }

    fn max_order(&self) -> usize {
        self.max_order
    }

    fn jet(&self, x: &[f64], order: usize) -> Result<Jet> {
        check_order(order, self.max_order)?;
        (self.f)(x, order)
    }
}

/// `Σ c_k f_k`.
#[derive(Clone)]
pub struct Combination {
    n: usize,
    parts: Vec<(Complex64, SharedField)>,
}

impl Combination {
    pub fn new(n: usize) -> Self {
        Self { n, parts: Vec::new() }
    }

    pub fn with(mut self, c: impl Into<Complex64>, f: SharedField) -> Self {
        assert_eq!(f.dim(), self.n, "field dimension mismatch");
        self.parts.push((c.into(), f));
        self
    }
}

impl AnalyticField for Combination {
    fn dim(&self) -> usize {
        self.n
    }

    fn max_order(&self) -> usize {
        self.parts.iter().map(|(_, f)| f.max_order()).min().unwrap_or(usize::MAX)
    }

    fn jet(&self, x: &[f64], order: usize) -> Result<Jet> {
        check_order(order, self.max_order())?;
        let mut acc = truncated(Jet::constant(Multivector::zero(self.n)), order);
        for (c, f) in &self.parts {
            acc.axpy(*c, &f.jet(x, order)?);
        }
        Ok(acc)
    }
}

/// `x ↦ conjugate(f(x))`.
#[derive(Clone)]
pub struct ConjugateField(pub SharedField);

impl AnalyticField for ConjugateField {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn max_order(&self) -> usize {
        self.0.max_order()
    }

    fn jet(&self, x: &[f64], order: usize) -> Result<Jet> {
        Ok(self.0.jet(x, order)?.conjugate())
    }
}

/// Pointwise product `f(x) g(x)`.
#[derive(Clone)]
pub struct ProductField(pub SharedField, pub SharedField);

impl AnalyticField for ProductField {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn max_order(&self) -> usize {
        self.0.max_order().min(self.1.max_order())
    }

    fn jet(&self, x: &[f64], order: usize) -> Result<Jet> {
        let a = self.0.jet(x, order)?;
        let b = self.1.jet(x, order)?;
        Ok(a.product(&b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_check(f: &dyn AnalyticField, x: &[f64], tol: f64) {
        let h = 1e-5;
        let jet = f.jet(x, 2).unwrap();
        for j in 0..x.len() {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[j] += h;
            xm[j] -= h;
            let jp = f.jet(&xp, 1).unwrap();
            let jm = f.jet(&xm, 1).unwrap();
            let fd = (&jp.value - &jm.value).scale(0.5 / h);
            assert!(fd.max_abs_diff(&jet.grad[j]) < tol, "grad {j}");
            for k in 0..x.len() {
                let fd2 = (&jp.grad[k] - &jm.grad[k]).scale(0.5 / h);
                assert!(fd2.max_abs_diff(jet.hess_entry(j, k)) < tol, "hess {j}{k}");
                assert!(jet.hess_entry(j, k).max_abs_diff(jet.hess_entry(k, j)) < 1e-10);
            }
        }
    }

    #[test]
    fn bump_basics() {
        let c = [0.0, 0.0, 1.0];
        let b = BumpField::new(&c, 0.5, Multivector::one(3)).unwrap();
        assert!((b.value(&c).unwrap().scalar_part().re - 1.0).abs() < 1e-15);
        let far = [0.6f64.sin(), 0.0, 0.6f64.cos()];
        let jet = b.jet(&far, 1).unwrap();
        assert_eq!(jet.value, Multivector::zero(3));
        assert!(jet.grad.iter().all(|g| g.norm() == 0.0));
    }

    #[test]
    fn bump_derivatives_match_finite_differences() {
        let c = [0.1f64.sin(), 0.0, 0.1f64.cos()];
        let b = BumpField::new(&c, 0.6, Multivector::vector(&[1.0, -2.0, 0.5])).unwrap();
        for (t, p) in [(0.3, 0.4), (0.1, 1.0), (0.55, 2.0), (0.1005, 0.0)] {
            let x = [f64::sin(t) * f64::cos(p), f64::sin(t) * f64::sin(p), f64::cos(t)];
            fd_check(&b, &x, 1e-6);
        }
    }

    #[test]
    fn polynomial_derivatives_match_finite_differences() {
        let f = PolynomialField::new(3)
            .with_term(&[2, 1, 0], Multivector::e(3, 1))
            .with_term(&[0, 0, 3], Multivector::scalar(3, Complex64::new(0.5, 0.2)))
            .with_term(&[1, 1, 1], Multivector::blade(3, 0b110));
        fd_check(&f, &[0.3, -0.5, 0.8], 1e-6);
    }
}
