//! Pointwise spherical Dirac operators acting on analytic fields.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::clifford::Multivector;
use crate::error::{Error, Result};
use crate::field::{check_order, AnalyticField, PolynomialField, SharedField};
use crate::geometry::{SpherePoint, SphericalDomain};
use crate::jet::{DiracOp, Jet};

fn apply(op: DiracOp, f: &dyn AnalyticField, w: &[f64]) -> Result<Multivector> {
    let jet = f.jet(w, 1)?;
    Ok(op.apply(w, &jet))
}

/// `Γ_ω f(w) = −Σ_{i<j} e_ij (w_i ∂_j f − w_j ∂_i f)`.
pub fn gamma_omega(f: &dyn AnalyticField, w: &SpherePoint) -> Result<Multivector> {
    apply(DiracOp::omega(), f, w)
}

/// `Γ_α f = Γ_ω f + α f`.
pub fn gamma_alpha(f: &dyn AnalyticField, w: &SpherePoint, alpha: Complex64) -> Result<Multivector> {
    apply(DiracOp::gamma(alpha), f, w)
}

/// `Γ̄_α f = −Γ_ω f + ᾱ f`.
pub fn gamma_alpha_bar(f: &dyn AnalyticField, w: &SpherePoint, alpha: Complex64) -> Result<Multivector> {
    apply(DiracOp::gamma_bar(alpha), f, w)
}

/// `Γ_β Γ_α f` with `α + β = −n + 1`.
pub fn spherical_laplacian_factored(
    f: &dyn AnalyticField,
    w: &SpherePoint,
    alpha: Complex64,
) -> Result<Multivector> {
    let n = f.dim() as f64;
    let beta = Complex64::new(1.0 - n, 0.0) - alpha;
    let jet = f.jet(w, 2)?;
    let inner = DiracOp::gamma(alpha).apply_jet(w, &jet);
    Ok(DiracOp::gamma(beta).apply(w, &inner))
}

/// Whether `Γ_α f` vanishes on the interior nodes, relative to the size
/// of `f`. Returns the verdict and the relative residual.
pub fn is_monogenic(
    f: &dyn AnalyticField,
    dom: &SphericalDomain,
    alpha: Complex64,
    tol: f64,
) -> Result<(bool, f64)> {
    let op = DiracOp::gamma(alpha);
    let mut res: f64 = 0.0;
    let mut size: f64 = 0.0;
    for nd in dom.interior() {
        let jet = f.jet(&nd.point, 1)?;
        res = res.max(op.apply(&nd.point, &jet).norm());
        size = size.max(jet.value.norm());
    }
    let rel = if size > 0.0 { res / size } else { res };
    Ok((rel <= tol, rel))
}

/// The field `A f` for a first-order operator `A`; one derivative order is
/// consumed.
#[derive(Clone)]
pub struct OperatorField<F = SharedField> {
    op: DiracOp,
    inner: F,
}

impl<F: AnalyticField> OperatorField<F> {
    pub fn new(op: DiracOp, inner: F) -> Self {
        Self { op, inner }
    }

    pub fn gamma(alpha: Complex64, inner: F) -> Self {
        Self::new(DiracOp::gamma(alpha), inner)
    }

    pub fn gamma_bar(alpha: Complex64, inner: F) -> Self {
        Self::new(DiracOp::gamma_bar(alpha), inner)
    }
}

impl<F: AnalyticField> AnalyticField for OperatorField<F> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn max_order(&self) -> usize {
        self.inner.max_order().saturating_sub(1).min(1)
    }

    fn jet(&self, x: &[f64], order: usize) -> Result<Jet> {
        check_order(order, self.max_order())?;
        let inner = self.inner.jet(x, order + 1)?;
        if order == 0 {
            Ok(Jet {
                value: self.op.apply(x, &inner),
                grad: Vec::new(),
                hess: Vec::new(),
            })
        } else {
            Ok(self.op.apply_jet(x, &inner))
        }
    }
}

/// Basis of vector-valued homogeneous quadratics `P` on `R^3` with
/// `Σ_j e_j ∂_j P = 0`, from the null space of the coefficient map.
pub fn degree_two_monogenics() -> Result<Vec<PolynomialField>> {
    let n = 3;
    let exps: Vec<[u32; 3]> = vec![
        [2, 0, 0],
        [0, 2, 0],
        [0, 0, 2],
        [1, 1, 0],
        [1, 0, 1],
        [0, 1, 1],
    ];
    let unknowns: Vec<(usize, [u32; 3])> = (0..n)
        .flat_map(|i| exps.iter().map(move |m| (i, *m)))
        .collect();
    let blades = 1 << n;
    // D P is linear in x, so its value at each e_l fixes it
    let mut a = DMatrix::<f64>::zeros(n * blades, unknowns.len());
    for (col, (i, m)) in unknowns.iter().enumerate() {
        let p = PolynomialField::new(n).with_term(m, Multivector::e(n, i + 1));
        for l in 0..n {
            let mut x = [0.0; 3];
            x[l] = 1.0;
            let jet = p.jet(&x, 1)?;
            let mut dp = Multivector::zero(n);
            for (j, g) in jet.grad.iter().enumerate() {
                dp += &(&Multivector::e(n, j + 1) * g);
            }
            for b in 0..blades {
                a[(l * blades + b, col)] = dp.get(b).re;
            }
        }
    }
    let svd = a.clone().svd(false, true);
    let vt = svd.v_t.ok_or(Error::Singular(0.0))?;
    let smax = svd.singular_values.max();
    let mut fields = Vec::new();
    for r in 0..vt.nrows() {
        if svd.singular_values[r] > 1e-10 * smax {
            continue;
        }
        let mut p = PolynomialField::new(n);
        for (col, (i, m)) in unknowns.iter().enumerate() {
            let c = vt[(r, col)];
            if c.abs() > 1e-14 {
                p.add_term(m, Multivector::e(n, i + 1).scale(c));
            }
        }
        fields.push(p);
    }
    Ok(fields)
}

pub fn shared(f: impl AnalyticField + 'static) -> SharedField {
    Arc::new(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{ConstantField, PolynomialField};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_point(rng: &mut ChaCha8Rng) -> SpherePoint {
        loop {
            let v: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
            if let Ok(p) = SpherePoint::normalized(&v) {
                return p;
            }
        }
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn degree_one_eigenrelation() {
        let f = PolynomialField::degree_one_monogenic();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let w = random_point(&mut rng);
            let g = gamma_omega(&f, &w).unwrap();
            let want = -f.value(&w).unwrap();
            assert!(g.max_abs_diff(&want) < 1e-12);
            assert!(gamma_alpha(&f, &w, c(1.0, 0.0)).unwrap().norm() < 1e-12);
            let bar = gamma_alpha_bar(&f, &w, c(0.4, 0.0)).unwrap();
            assert!(bar.max_abs_diff(&f.value(&w).unwrap().scale(1.4)) < 1e-12);
        }
    }

    #[test]
    fn degree_two_eigenrelation() {
        let basis = degree_two_monogenics().unwrap();
        assert!(basis.len() >= 5);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for p in &basis {
            for _ in 0..10 {
                let w = random_point(&mut rng);
                let g = gamma_omega(p, &w).unwrap();
                let want = p.value(&w).unwrap().scale(-2.0);
                assert!(g.max_abs_diff(&want) < 1e-10);
            }
        }
    }

    #[test]
    fn constants() {
        let w = SpherePoint::from_angles(0.7, 0.2);
        let one = ConstantField(Multivector::one(3));
        let a = c(0.3, -0.8);
        assert_eq!(gamma_omega(&one, &w).unwrap(), Multivector::zero(3));
        assert_eq!(gamma_alpha(&one, &w, a).unwrap(), Multivector::scalar(3, a));
        assert_eq!(gamma_alpha_bar(&one, &w, a).unwrap(), Multivector::scalar(3, a.conj()));
        let beta = c(-2.0, 0.0) - a;
        let lap = spherical_laplacian_factored(&one, &w, a).unwrap();
        assert!(lap.max_abs_diff(&Multivector::scalar(3, a * beta)) < 1e-14);
    }

    #[test]
    fn laplacian_on_eigenfunction_and_commutation() {
        let f = PolynomialField::degree_one_monogenic();
        let a = c(0.37, 0.1);
        let beta = c(-2.0, 0.0) - a;
        let w = SpherePoint::from_angles(1.1, 2.3);
        let lap = spherical_laplacian_factored(&f, &w, a).unwrap();
        let want = f.value(&w).unwrap().scale((a - 1.0) * (beta - 1.0));
        assert!(lap.max_abs_diff(&want) < 1e-12);

        let g = PolynomialField::new(3)
            .with_term(&[2, 1, 0], Multivector::e(3, 1))
            .with_term(&[0, 1, 2], Multivector::blade(3, 0b101))
            .with_term(&[1, 0, 0], Multivector::one(3));
        let ab = spherical_laplacian_factored(&g, &w, a).unwrap();
        let ba = spherical_laplacian_factored(&g, &w, beta).unwrap();
        assert!(ab.max_abs_diff(&ba) < 1e-9);
    }

    #[test]
    fn tangential_projection_does_not_change_gamma() {
        let g = PolynomialField::new(3)
            .with_term(&[1, 2, 0], Multivector::e(3, 3))
            .with_term(&[0, 0, 3], Multivector::blade(3, 0b011));
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let w = random_point(&mut rng);
            let jet = g.jet(&w, 1).unwrap();
            let radial = jet
                .grad
                .iter()
                .zip(w.coords())
                .fold(Multivector::zero(3), |acc, (gj, &wj)| &acc + &gj.scale(wj));
            let tangential: Vec<Multivector> = jet
                .grad
                .iter()
                .zip(w.coords())
                .map(|(gj, &wj)| gj - &radial.scale(wj))
                .collect();
            let a = crate::jet::gamma_omega_from_grad(&w, &jet.grad);
            let b = crate::jet::gamma_omega_from_grad(&w, &tangential);
            assert!(a.max_abs_diff(&b) < 1e-12);
        }
    }

    #[test]
    fn conjugate_operator_on_scalar_fields() {
        let g = PolynomialField::new(3)
            .with_term(&[1, 1, 0], Multivector::one(3))
            .with_term(&[0, 0, 2], Multivector::scalar(3, 2.0));
        let a = c(0.6, 0.0);
        let w = SpherePoint::from_angles(0.4, 1.0);
        let lhs = gamma_alpha(&g, &w, a).unwrap().conjugate();
        let conj = crate::field::ConjugateField(shared(g.clone()));
        let rhs = gamma_alpha_bar(&conj, &w, a).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn monogenicity_test() {
        let dom = crate::geometry::build_cap(1.0, 6, 12).unwrap();
        let f = PolynomialField::degree_one_monogenic();
        assert!(is_monogenic(&f, &dom, c(1.0, 0.0), 1e-12).unwrap().0);
        let one = ConstantField(Multivector::one(3));
        assert!(!is_monogenic(&one, &dom, c(0.5, 0.0), 1e-6).unwrap().0);
        let zero = ConstantField(Multivector::zero(3));
        assert_eq!(is_monogenic(&zero, &dom, c(0.5, 0.0), 1e-6).unwrap(), (true, 0.0));
    }

    #[test]
    fn operator_field_gradient() {
        let g = PolynomialField::new(3)
            .with_term(&[2, 1, 0], Multivector::e(3, 2))
            .with_term(&[0, 1, 1], Multivector::one(3));
        let of = OperatorField::gamma(c(0.5, 0.2), shared(g));
        let x = [0.3, 0.5, 0.7];
        let jet = of.jet(&x, 1).unwrap();
        let h = 1e-6;
        for j in 0..3 {
            let mut xp = x;
            let mut xm = x;
            xp[j] += h;
            xm[j] -= h;
            let fd = (&of.value(&xp).unwrap() - &of.value(&xm).unwrap()).scale(0.5 / h);
            assert!(fd.max_abs_diff(&jet.grad[j]) < 1e-8);
        }
        assert!(of.jet(&x, 2).is_err());
    }
}
