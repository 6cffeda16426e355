//! The π operator `Γ̄_α T_Ω`, its conjugate `Γ_α T̄_Ω` and adjoint
//! `T̄_Ω Γ_α`, the Clifford-valued `L²` inner product and a Galerkin Bergman
//! projection onto numerically generated monogenics.

use num_complex::Complex64;

use crate::clifford::Multivector;
use crate::error::{Error, Result};
use crate::field::AnalyticField;
use crate::geometry::{SampledField, SpherePoint, SphericalDomain};
use crate::jet::DiracOp;
use crate::operators::OperatorField;
use crate::transforms::{generator_angle, CauchyField, Local, TransformConfig, Transforms};

/// `⟨f, g⟩ = ∫ f̄ g`, Clifford-valued.
pub fn inner_product(dom: &SphericalDomain, f: &SampledField, g: &SampledField) -> Result<Multivector> {
    f.check_domain(dom)?;
    g.check_domain(dom)?;
    let mut acc = Multivector::zero(dom.dim());
    for ((nd, a), b) in dom.interior().iter().zip(&f.values).zip(&g.values) {
        acc.add_product_scaled(&a.conjugate(), b, Complex64::new(nd.weight, 0.0));
    }
    Ok(acc)
}

/// `[⟨f, g⟩]_0 = Σ_w w Σ_A conj(f_A) g_A`, the Hermitian form used for
/// orthogonality.
pub fn scalar_inner(dom: &SphericalDomain, f: &[Multivector], g: &[Multivector]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for ((nd, a), b) in dom.interior().iter().zip(f).zip(g) {
        let s: Complex64 = a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| x.conj() * y).sum();
        acc += s * nd.weight;
    }
    acc
}

/// `sqrt([⟨f, f⟩]_0)`.
pub fn l2_norm(dom: &SphericalDomain, f: &SampledField) -> Result<f64> {
    f.check_domain(dom)?;
    let s = inner_product(dom, f, f)?.scalar_part().re;
    if s < -1e-12 {
        return Err(Error::Domain(format!("negative squared norm {s:e}")));
    }
    Ok(s.max(0.0).sqrt())
}

fn node_index(dom: &SphericalDomain, v: &[f64]) -> usize {
    let mut best = 0;
    let mut best_dot = f64::NEG_INFINITY;
    for (i, nd) in dom.interior().iter().enumerate() {
        let d: f64 = nd.point.iter().zip(v).map(|(a, b)| a * b).sum();
        if d > best_dot {
            best_dot = d;
            best = i;
        }
    }
    best
}

fn config(cfg: &TransformConfig, alpha: Complex64) -> TransformConfig {
    let mut c = *cfg;
    c.kernel.alpha = alpha;
    c
}

/// `π f (υ) = Γ̄_α T_Ω f (υ)` for sampled `f`; on the rim of the dropped
/// ball the density is taken from the node nearest `υ`.
pub fn pi_apply(
    dom: &SphericalDomain,
    f: &SampledField,
    alpha: Complex64,
    v: &SpherePoint,
    cfg: &TransformConfig,
) -> Result<Multivector> {
    f.check_domain(dom)?;
    let t = Transforms::new(dom, &config(cfg, alpha))?;
    let local = &f.values[node_index(dom, v)];
    t.volume(v, &f.values, false, &[DiracOp::gamma_bar(alpha)], Some(Local::Frozen(local)))
}

/// `π f (υ)` for an analytic density.
pub fn pi_apply_field(
    dom: &SphericalDomain,
    f: &dyn AnalyticField,
    alpha: Complex64,
    v: &SpherePoint,
    cfg: &TransformConfig,
) -> Result<Multivector> {
    let t = Transforms::new(dom, &config(cfg, alpha))?;
    let vals = t.node_values(f)?;
    t.volume(v, &vals, false, &[DiracOp::gamma_bar(alpha)], Some(Local::Exact(f)))
}

/// `π̄ f (υ) = Γ_α T̄_Ω f (υ)` for sampled `f`.
pub fn pi_bar_apply(
    dom: &SphericalDomain,
    f: &SampledField,
    alpha: Complex64,
    v: &SpherePoint,
    cfg: &TransformConfig,
) -> Result<Multivector> {
    f.check_domain(dom)?;
    let t = Transforms::new(dom, &config(cfg, alpha))?;
    let local = &f.values[node_index(dom, v)];
    t.volume(v, &f.values, true, &[DiracOp::gamma(alpha)], Some(Local::Frozen(local)))
}

/// `π* f (υ) = T̄_Ω Γ_α f (υ)`.
pub fn pi_adjoint_apply(
    dom: &SphericalDomain,
    f: &dyn AnalyticField,
    alpha: Complex64,
    v: &SpherePoint,
    cfg: &TransformConfig,
) -> Result<Multivector> {
    let t = Transforms::new(dom, &config(cfg, alpha))?;
    let vals = t.node_values(&OperatorField::gamma(alpha, f))?;
    t.volume(v, &vals, true, &[], None)
}

/// Orthonormal basis, in the scalar part of the inner product, of the span
/// of monogenic generators `F_∂Ω' (mode(φ) e_A)`.
#[derive(Debug, Clone)]
pub struct BergmanBasis {
    domain_id: u64,
    vectors: Vec<Vec<Multivector>>,
    requested: usize,
}

/// Boundary data modes in generator order: `1, cos φ, sin φ, cos 2φ, …`.
fn mode(k: usize, phi: f64) -> f64 {
    if k == 0 {
        1.0
    } else {
        let m = k.div_ceil(2) as f64;
        if k % 2 == 1 {
            (m * phi).cos()
        } else {
            (m * phi).sin()
        }
    }
}

impl BergmanBasis {
    /// Builds `m` generators (modes times the `2^n` blades) and orthonormalises
    /// them by twice-repeated modified Gram–Schmidt. Numerically dependent
    /// generators are skipped and further modes are drawn; if `4m` candidates
    /// do not give `m` independent ones the basis is smaller, with a warning.
    pub fn new(dom: &SphericalDomain, alpha: Complex64, m: usize, cfg: &TransformConfig) -> Result<Self> {
        if dom.is_global() {
            return Err(Error::Domain("Bergman generators need a boundary".into()));
        }
        let blades = 1usize << dom.dim();
        let max_candidates = 4 * m;
        let kcfg = config(cfg, alpha).kernel;
        let theta1 = generator_angle(dom);
        let mut vectors: Vec<Vec<Multivector>> = Vec::with_capacity(m);
        let mut count = 0;
        let mut k = 0;
        'outer: while vectors.len() < m && count < max_candidates {
            let g = CauchyField::on_cap(kcfg, theta1, 64, |phi| Multivector::scalar(dom.dim(), mode(k, phi)))?;
            let base: Vec<Multivector> = dom
                .interior()
                .iter()
                .map(|nd| g.value(&nd.point))
                .collect::<Result<_>>()?;
            for a in 0..blades {
                if vectors.len() == m || count == max_candidates {
                    break 'outer;
                }
                count += 1;
                let blade = Multivector::blade(dom.dim(), a);
                let mut u: Vec<Multivector> = base.iter().map(|b| b * &blade).collect();
                let start = scalar_inner(dom, &u, &u).re.sqrt();
                for _ in 0..2 {
                    for q in &vectors {
                        let c = scalar_inner(dom, q, &u);
                        for (ui, qi) in u.iter_mut().zip(q) {
                            *ui -= &qi.scale(c);
                        }
                    }
                }
                let norm = scalar_inner(dom, &u, &u).re.sqrt();
                if !(norm > 1e-8 * start) {
                    log::debug!("Bergman generator {} (mode {k}, blade {a}) is dependent", count - 1);
                    continue;
                }
                let inv = 1.0 / norm;
                vectors.push(u.into_iter().map(|x| x.scale(inv)).collect());
            }
            k += 1;
        }
        if vectors.len() < m {
            log::warn!("Bergman basis has rank {} < {m}", vectors.len());
        }
        Ok(Self {
            domain_id: dom.id(),
            vectors,
            requested: m,
        })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn requested(&self) -> usize {
        self.requested
    }

    /// Node values of the `j`-th orthonormal element.
    pub fn element(&self, j: usize) -> &[Multivector] {
        &self.vectors[j]
    }

    /// `(P f, f − P f)`.
    pub fn project(&self, dom: &SphericalDomain, f: &SampledField) -> Result<(SampledField, SampledField)> {
        f.check_domain(dom)?;
        if dom.id() != self.domain_id {
            return Err(Error::Domain("basis was built on a different domain".into()));
        }
        let mut p = vec![Multivector::zero(dom.dim()); f.len()];
        for q in &self.vectors {
            let c = scalar_inner(dom, q, &f.values);
            for (pi, qi) in p.iter_mut().zip(q) {
                pi.axpy(c, qi);
            }
        }
        let pf = SampledField::new(dom, p)?;
        let qf = SampledField::new(dom, f.values.clone())?.sub(&pf);
        Ok((pf, qf))
    }
}

/// `(P f, Q f)` for the projection onto `m` monogenic generators.
pub fn bergman_project(
    dom: &SphericalDomain,
    alpha: Complex64,
    f: &SampledField,
    m: usize,
    cfg: &TransformConfig,
) -> Result<(SampledField, SampledField)> {
    BergmanBasis::new(dom, alpha, m, cfg)?.project(dom, f)
}

/// Residual of a resolution ladder.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub name: String,
    /// Residual at the finest level.
    pub residual: f64,
    /// `(mesh_param, residual)` by decreasing mesh parameter.
    pub ladder: Vec<(f64, f64)>,
    /// Final residual below half the first, or below `1e-8`.
    pub verdict: bool,
    /// The identity is expected to fail the decrease criterion.
    pub negative_control: bool,
    /// Reason the identity could not be evaluated, if any.
    pub error: Option<String>,
}

pub const HARD_FLOOR: f64 = 1e-8;

impl IdentityReport {
    pub fn from_ladder(name: impl Into<String>, mut ladder: Vec<(f64, f64)>, negative_control: bool) -> Self {
        ladder.sort_by(|a, b| b.0.total_cmp(&a.0));
        let first = ladder.first().map_or(f64::NAN, |l| l.1);
        let last = ladder.last().map_or(f64::NAN, |l| l.1);
        let verdict = last.is_finite() && (last < 0.5 * first || last < HARD_FLOOR);
        Self {
            name: name.into(),
            residual: last,
            ladder,
            verdict,
            negative_control,
            error: None,
        }
    }

    pub fn failed(name: impl Into<String>, err: &Error, negative_control: bool) -> Self {
        Self {
            name: name.into(),
            residual: f64::NAN,
            ladder: Vec::new(),
            verdict: false,
            negative_control,
            error: Some(err.to_string()),
        }
    }

    /// The verdict matches the expectation (a negative control must fail).
    pub fn ok(&self) -> bool {
        self.error.is_none() && self.verdict != self.negative_control
    }
}

/// Pythagorean identities for an orthogonal pair:
/// `‖φ+ψ‖^k = (‖φ‖² + ‖ψ‖²)^{k/2}` and `|||φ+ψ|||^k = (|||φ||| + |||ψ|||)^k`
/// with `|||·||| = ‖·‖²`. The residual is the larger relative mismatch.
pub fn pythagoras_check(
    dom: &SphericalDomain,
    phi: &SampledField,
    psi: &SampledField,
    exponent: u32,
) -> Result<IdentityReport> {
    let np = l2_norm(dom, phi)?;
    let ns = l2_norm(dom, psi)?;
    let cross = scalar_inner(dom, &phi.values, &psi.values).norm();
    if cross > 1e-10 * (np * ns).max(1.0) {
        return Err(Error::Domain(format!("pair is not orthogonal: |⟨φ,ψ⟩_0| = {cross:e}")));
    }
    let sum = l2_norm(dom, &phi.add(psi))?;
    let k = exponent as i32;
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1.0);
    let ra = rel(sum.powi(k), (np * np + ns * ns).powf(exponent as f64 / 2.0));
    let rb = rel((sum * sum).powi(k), (np * np + ns * ns).powi(k));
    Ok(IdentityReport::from_ladder(
        format!("pythagoras_n{exponent}"),
        vec![(dom.mesh_param(), ra.max(rb))],
        false,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PolynomialField;
    use crate::geometry::{build_cap, bump_field};
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn test_field(dom: &SphericalDomain) -> SampledField {
        let p = PolynomialField::new(3)
            .with_term(&[0, 0, 0], Multivector::vector(&[0.3, -1.0, 0.2]))
            .with_term(&[1, 1, 0], Multivector::blade(3, 0b110).scale(Complex64::new(0.4, 0.7)))
            .with_term(&[0, 0, 2], Multivector::one(3));
        SampledField::from_analytic(dom, &p).unwrap()
    }

    #[test]
    fn inner_product_properties() {
        let dom = build_cap(1.0, 8, 16).unwrap();
        let f = test_field(&dom);
        let g = SampledField::from_fn(&dom, |p| Multivector::blade(3, 0b011).scale(Complex64::new(p[0], 1.0)));
        let ff = inner_product(&dom, &f, &f).unwrap();
        assert!(ff.scalar_part().re > 0.0);
        let fg = inner_product(&dom, &f, &g).unwrap();
        let gf = inner_product(&dom, &g, &f).unwrap();
        assert!(fg.conjugate().max_abs_diff(&gf) < 1e-12);
        let phi = SampledField::from_fn(&dom, |p| Multivector::scalar(3, 1.0 + p[2]));
        let e1 = phi.map(|m| &Multivector::e(3, 1) * m);
        let e2 = phi.map(|m| &Multivector::e(3, 2) * m);
        assert!(inner_product(&dom, &e1, &e2).unwrap().scalar_part().norm() < 1e-14);
    }

    #[test]
    fn norms() {
        let dom = build_cap(1.0, 8, 16).unwrap();
        let f = test_field(&dom);
        assert_eq!(l2_norm(&dom, &SampledField::zeros(&dom)).unwrap(), 0.0);
        let n = l2_norm(&dom, &f).unwrap();
        let k = Complex64::new(-1.5, 2.0);
        assert!((l2_norm(&dom, &f.scale(k)).unwrap() - 2.5 * n).abs() < 1e-12 * n);
        let direct: f64 = dom
            .interior()
            .iter()
            .zip(&f.values)
            .map(|(nd, v)| nd.weight * v.coeffs().iter().map(|c| c.norm_sqr()).sum::<f64>())
            .sum();
        assert!((n * n - direct).abs() < 1e-12 * direct);
    }

    #[test]
    fn zero_densities() {
        let dom = build_cap(1.0, 6, 12).unwrap();
        let cfg = TransformConfig::default();
        let z = SampledField::zeros(&dom);
        let v = dom.interior()[20].point.clone();
        assert_eq!(pi_apply(&dom, &z, c(0.5), &v, &cfg).unwrap(), Multivector::zero(3));
        assert_eq!(pi_bar_apply(&dom, &z, c(0.5), &v, &cfg).unwrap(), Multivector::zero(3));
        let zf = crate::field::ConstantField(Multivector::zero(3));
        assert_eq!(pi_adjoint_apply(&dom, &zf, c(0.5), &v, &cfg).unwrap(), Multivector::zero(3));
    }

    #[test]
    fn adjoint_of_constant() {
        let dom = build_cap(1.0, 6, 12).unwrap();
        let cfg = TransformConfig::default();
        let a = Complex64::new(0.5, 0.2);
        let cst = Multivector::vector(&[1.0, 2.0, 0.0]);
        let v = SpherePoint::from_angles(0.4, 0.3);
        let got = pi_adjoint_apply(&dom, &crate::field::ConstantField(cst.clone()), a, &v, &cfg).unwrap();
        let dens = SampledField::from_fn(&dom, |_| cst.scale(a));
        let want = crate::transforms::teodorescu_bar(&dom, &dens, a, &v, &cfg).unwrap();
        assert!(got.max_abs_diff(&want) < 1e-13);
    }

    #[test]
    fn frozen_rim_converges_to_exact() {
        let cfg = TransformConfig::default();
        let v = SpherePoint::from_angles(0.35, 0.2);
        let gap = |nt: usize| {
            let dom = build_cap(PI / 3.0, nt, 2 * nt).unwrap();
            let b = bump_field(&dom, &SpherePoint::from_angles(0.3, 0.0), 0.5, Multivector::one(3)).unwrap();
            let s = SampledField::from_analytic(&dom, &b).unwrap();
            let node = dom.interior()[node_index(&dom, &v)].point.clone();
            let exact = pi_apply_field(&dom, &b, c(0.5), &node, &cfg).unwrap();
            let frozen = pi_apply(&dom, &s, c(0.5), &node, &cfg).unwrap();
            exact.max_abs_diff(&frozen)
        };
        let (g1, g2) = (gap(8), gap(16));
        assert!(g2 < 0.7 * g1, "{g1} {g2}");
    }

    #[test]
    fn projection_algebra() {
        let dom = build_cap(PI / 3.0, 8, 16).unwrap();
        let cfg = TransformConfig::default();
        let basis = BergmanBasis::new(&dom, c(0.5), 24, &cfg).unwrap();
        assert_eq!(basis.len(), 24);
        let f = test_field(&dom);
        let (pf, qf) = basis.project(&dom, &f).unwrap();
        let (ppf, pqf) = basis.project(&dom, &pf).unwrap();
        assert!(ppf.sub(&pf).max_norm() < 1e-10);
        assert!(pqf.max_norm() < 1e-10);
        assert!(scalar_inner(&dom, &pf.values, &qf.values).norm() < 1e-10);
        let pf_f = inner_product(&dom, &pf, &f).unwrap().scalar_part();
        let pf_pf = inner_product(&dom, &pf, &pf).unwrap().scalar_part();
        assert!((pf_f - pf_pf).norm() < 1e-10);
        // an element of the span is reproduced
        let inside = SampledField::new(&dom, basis.element(5).to_vec()).unwrap();
        let (p5, q5) = basis.project(&dom, &inside).unwrap();
        assert!(p5.sub(&inside).max_norm() < 1e-10);
        assert!(q5.max_norm() < 1e-10);
        for k in [1, 2, 5] {
            let rep = pythagoras_check(&dom, &pf, &qf, k).unwrap();
            assert!(rep.residual < 1e-9, "{rep:?}");
        }
        let zero = SampledField::zeros(&dom);
        assert!(pythagoras_check(&dom, &pf, &zero, 3).unwrap().residual < 1e-12);
        assert!(pythagoras_check(&dom, &f, &f, 2).is_err());
    }

    #[test]
    fn report_verdicts() {
        let pass = IdentityReport::from_ladder("x", vec![(0.1, 1.0), (0.05, 0.3)], false);
        assert!(pass.verdict && pass.ok());
        let fail = IdentityReport::from_ladder("x", vec![(0.05, 0.6), (0.1, 1.0)], false);
        assert_eq!(fail.ladder[0].0, 0.1);
        assert!(!fail.verdict && !fail.ok());
        let floor = IdentityReport::from_ladder("x", vec![(0.1, 1e-9), (0.05, 5e-9)], false);
        assert!(floor.verdict);
        let control = IdentityReport::from_ladder("x", vec![(0.1, 1.0), (0.05, 0.9)], true);
        assert!(!control.verdict && control.ok());
    }
}
