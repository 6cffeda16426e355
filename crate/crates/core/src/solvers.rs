//! The inhomogeneous boundary value problem `Γ_α f = g`, `f|∂Ω = h` and the
//! spherical Beltrami equation `Γ_α f − q Γ̄_α f = 0`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::clifford::Multivector;
use crate::error::{Error, Result};
use crate::field::{AnalyticField, SharedField};
use crate::geometry::{BoundaryData, SampledField, SpherePoint, SphericalDomain};
use crate::jet::DiracOp;
use crate::operators::{gamma_alpha, gamma_alpha_bar};
use crate::pi_operator::l2_norm;
use crate::transforms::{Local, TransformConfig, Transforms};

fn with_alpha(cfg: &TransformConfig, alpha: Complex64) -> TransformConfig {
    let mut c = *cfg;
    c.kernel.alpha = alpha;
    c
}

/// Interior nodes nearest to `count` spiral points at least `margin` from
/// the boundary.
pub fn sample_nodes(dom: &SphericalDomain, count: usize, margin: f64) -> Vec<usize> {
    let mut out: Vec<usize> = dom
        .sample_points(count, margin)
        .iter()
        .map(|p| {
            dom.interior()
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.point.dot(p).total_cmp(&b.1.point.dot(p)))
                .map_or(0, |(i, _)| i)
        })
        .collect();
    out.dedup();
    out
}

fn default_margin(dom: &SphericalDomain) -> f64 {
    match dom.shape() {
        crate::geometry::DomainShape::Cap { theta0 } => 0.29 * theta0,
        crate::geometry::DomainShape::Global => 0.1,
    }
}

/// Solution of the boundary value problem and its residuals.
#[derive(Debug, Clone)]
pub struct BvpSolution {
    /// `F_∂Ω h + T_Ω g` at the interior nodes.
    pub f: SampledField,
    /// `max ‖Γ_α f − g‖ / (1 + ‖g‖)` at interior samples.
    pub operator_residual: f64,
    /// `max ‖f − h‖ / (1 + ‖h‖)` at the boundary nodes, with `f` extrapolated
    /// linearly from two points inside along the meridian.
    pub trace_residual: f64,
}

/// `f = F_∂Ω h + T_Ω g`.
pub fn solve_bvp(
    dom: &SphericalDomain,
    g: &dyn AnalyticField,
    h: &BoundaryData,
    alpha: Complex64,
    cfg: &TransformConfig,
) -> Result<BvpSolution> {
    if dom.is_global() {
        return Err(Error::Domain("the boundary value problem needs a cap".into()));
    }
    h.check_domain(dom)?;
    let t = Transforms::new(dom, &with_alpha(cfg, alpha))?;
    let gv = t.node_values(g)?;
    let eval = |v: &[f64]| -> Result<Multivector> {
        Ok(&t.boundary(v, &h.values, false, None)? + &t.volume(v, &gv, false, &[], None)?)
    };
    let values: Vec<Multivector> = dom.interior().par_iter().map(|nd| eval(&nd.point)).collect::<Result<_>>()?;
    let f = SampledField::new(dom, values)?;

    let gamma = DiracOp::gamma(alpha);
    let margin = default_margin(dom);
    let op_res: Vec<f64> = dom
        .sample_points(10, margin)
        .par_iter()
        .map(|v| {
            let got = &t.boundary(v, &h.values, false, Some(gamma))?
                + &t.volume(v, &gv, false, &[gamma], Some(Local::Exact(g)))?;
            let want = g.value(v)?;
            Ok((&got - &want).norm() / (1.0 + want.norm()))
        })
        .collect::<Result<_>>()?;

    let theta0 = dom.distance_to_boundary(&[0.0, 0.0, 1.0]);
    let delta = (3.0 * dom.mesh_param()).min(theta0 / 3.0);
    let tr_res: Vec<f64> = dom
        .boundary()
        .par_iter()
        .zip(&h.values)
        .map(|(b, hv)| {
            let (theta, phi) = b.point.angles();
            let p1 = SpherePoint::from_angles(theta - delta, phi);
            let p2 = SpherePoint::from_angles(theta - 2.0 * delta, phi);
            let extrapolated = &eval(&p1)?.scale(2.0) - &eval(&p2)?;
            Ok((&extrapolated - hv).norm() / (1.0 + hv.norm()))
        })
        .collect::<Result<_>>()?;
    Ok(BvpSolution {
        f,
        operator_residual: op_res.into_iter().fold(0.0, f64::max),
        trace_residual: tr_res.into_iter().fold(0.0, f64::max),
    })
}

/// Starting iterate of the Beltrami fixed-point iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitialGuess {
    #[default]
    Zero,
    /// `h_0 = q Γ̄_α φ`.
    QPhiTilde,
}

#[derive(Clone)]
pub struct BeltramiConfig {
    /// Dilatation, with `sup ‖q‖ < 1` over the interior nodes.
    pub q: SharedField,
    /// A monogenic seed, `Γ_α φ = 0`.
    pub phi: SharedField,
    pub alpha: Complex64,
    /// Stop once an increment falls below `fp_tol` times the first.
    pub fp_tol: f64,
    pub max_iter: usize,
    pub transform: TransformConfig,
    pub initial: InitialGuess,
}

impl std::fmt::Debug for BeltramiConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BeltramiConfig")
            .field("alpha", &self.alpha)
            .field("fp_tol", &self.fp_tol)
            .field("max_iter", &self.max_iter)
            .field("initial", &self.initial)
            .finish_non_exhaustive()
    }
}

impl BeltramiConfig {
    /// Checks the dilatation bound on `dom`.
    pub fn new(dom: &SphericalDomain, q: SharedField, phi: SharedField, alpha: Complex64) -> Result<Self> {
        let cfg = Self {
            q,
            phi,
            alpha,
            fp_tol: 1e-10,
            max_iter: 200,
            transform: TransformConfig::with_alpha(alpha),
            initial: InitialGuess::Zero,
        };
        cfg.validate(dom)?;
        Ok(cfg)
    }

    /// `sup ‖q‖` over the interior nodes.
    pub fn q_sup(&self, dom: &SphericalDomain) -> Result<f64> {
        dom.interior()
            .iter()
            .map(|nd| Ok(self.q.value(&nd.point)?.norm()))
            .try_fold(0.0f64, |a, b: Result<f64>| Ok(a.max(b?)))
    }

    pub fn validate(&self, dom: &SphericalDomain) -> Result<()> {
        let sup = self.q_sup(dom)?;
        if !(sup < 1.0) {
            return Err(Error::Config(format!("sup ‖q‖ = {sup} must be below 1")));
        }
        if self.max_iter == 0 {
            return Err(Error::Config("max_iter must be at least 1".into()));
        }
        if !(self.fp_tol > 0.0) {
            return Err(Error::Config("fp_tol must be positive".into()));
        }
        self.transform.validate()
    }
}

/// Record of a Beltrami solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveTrace {
    /// `‖h_{m+1} − h_m‖` in the discrete `L²` norm.
    pub increments: Vec<f64>,
    /// `max ‖Γ_α f − q Γ̄_α f‖ / (1 + ‖Γ̄_α f‖)` at interior samples.
    pub be1_residual: f64,
    pub converged: bool,
    pub iterations: usize,
}

impl SolveTrace {
    /// Successive increment ratios.
    pub fn ratios(&self) -> Vec<f64> {
        self.increments.windows(2).map(|w| w[1] / w[0]).collect()
    }

    /// Geometric mean of the increment ratios from the third iteration on,
    /// or of all ratios if there are fewer.
    pub fn mean_ratio(&self) -> f64 {
        let r = self.ratios();
        let tail: Vec<f64> = if r.len() > 2 { r[2..].to_vec() } else { r };
        let tail: Vec<f64> = tail.into_iter().filter(|x| *x > 0.0 && x.is_finite()).collect();
        if tail.is_empty() {
            return 0.0;
        }
        (tail.iter().map(|x| x.ln()).sum::<f64>() / tail.len() as f64).exp()
    }
}

/// Result of [`solve_beltrami`].
#[derive(Debug, Clone)]
pub struct BeltramiSolution {
    /// `f = T_Ω h + φ` at the interior nodes.
    pub f: SampledField,
    /// The fixed point `h = Γ_α f`.
    pub h: SampledField,
    pub trace: SolveTrace,
}

/// Solves `h = q (π h + Γ̄_α φ)` by fixed-point iteration on the interior
/// nodes, then sets `f = T_Ω h + φ`.
pub fn solve_beltrami(dom: &SphericalDomain, config: &BeltramiConfig) -> Result<BeltramiSolution> {
    config.validate(dom)?;
    let alpha = config.alpha;
    let t = Transforms::new(dom, &with_alpha(&config.transform, alpha))?;
    let nodes = dom.interior();
    let q: Vec<Multivector> = t.node_values(&config.q)?;
    let phi_tilde: Vec<Multivector> = nodes
        .iter()
        .map(|nd| gamma_alpha_bar(&config.phi, &nd.point, alpha))
        .collect::<Result<_>>()?;
    let pi = t.nodal_operator(false, Some(DiracOp::gamma_bar(alpha)))?;

    let step = |h: &[Multivector]| -> Result<Vec<Multivector>> {
        let ph = pi.apply(h)?;
        Ok(q.iter().zip(ph.iter().zip(&phi_tilde)).map(|(qv, (p, s))| qv * &(p + s)).collect())
    };
    let dist = |a: &[Multivector], b: &[Multivector]| -> Result<f64> {
        let d = a.iter().zip(b).map(|(x, y)| x - y).collect();
        l2_norm(dom, &SampledField::new(dom, d)?)
    };

    let mut h: Vec<Multivector> = match config.initial {
        InitialGuess::Zero => vec![Multivector::zero(dom.dim()); nodes.len()],
        InitialGuess::QPhiTilde => q.iter().zip(&phi_tilde).map(|(a, b)| a * b).collect(),
    };
    let mut increments = Vec::new();
    let mut converged = false;
    let mut rising = 0;
    for m in 0..config.max_iter {
        let next = step(&h)?;
        let inc = dist(&next, &h)?;
        h = next;
        if let Some(&prev) = increments.last() {
            let ratio: f64 = inc / prev;
            if ratio > 1.0 {
                rising += 1;
                if rising >= 3 {
                    return Err(Error::FixedPointDivergence { step: m + 1, ratio });
                }
            } else {
                rising = 0;
            }
        }
        increments.push(inc);
        let first = increments[0];
        if inc <= config.fp_tol * first || first == 0.0 || !inc.is_finite() {
            converged = inc.is_finite();
            break;
        }
    }
    let iterations = increments.len();

    let phi_vals = t.node_values(&config.phi)?;
    let th: Vec<Multivector> = nodes
        .par_iter()
        .map(|nd| t.volume(&nd.point, &h, false, &[], None))
        .collect::<Result<_>>()?;
    let f = SampledField::new(dom, th.iter().zip(&phi_vals).map(|(a, b)| a + b).collect())?;

    let gamma = DiracOp::gamma(alpha);
    let gamma_bar = DiracOp::gamma_bar(alpha);
    let samples = sample_nodes(dom, 10, default_margin(dom));
    let be1: Vec<f64> = samples
        .par_iter()
        .map(|&i| {
            let v = &nodes[i].point;
            let local = Local::Frozen(&h[i]);
            let gf = &t.volume(v, &h, false, &[gamma], Some(local))? + &gamma_alpha(&config.phi, v, alpha)?;
            let gbf = &t.volume(v, &h, false, &[gamma_bar], Some(local))? + &phi_tilde[i];
            let qv = &q[i];
            Ok((&gf - &(qv * &gbf)).norm() / (1.0 + gbf.norm()))
        })
        .collect::<Result<_>>()?;
    Ok(BeltramiSolution {
        f,
        h: SampledField::new(dom, h)?,
        trace: SolveTrace {
            increments,
            be1_residual: be1.into_iter().fold(0.0, f64::max),
            converged,
            iterations,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{BumpField, ConstantField};
    use crate::geometry::{build_cap, trace};
    use crate::operators::{shared, OperatorField};
    use crate::transforms::{generator_angle, CauchyField};
    use std::f64::consts::PI;
    use std::sync::Arc;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn generator(dom: &SphericalDomain) -> CauchyField {
        CauchyField::on_cap(
            TransformConfig::with_alpha(c(0.5)).kernel,
            generator_angle(dom),
            48,
            |phi| Multivector::vector(&[1.0, 0.5 * phi.cos(), -0.3]),
        )
        .unwrap()
    }

    #[test]
    fn bvp_zero_data() {
        let dom = build_cap(PI / 3.0, 6, 12).unwrap();
        let z = ConstantField(Multivector::zero(3));
        let sol = solve_bvp(&dom, &z, &BoundaryData::zeros(&dom), c(0.5), &TransformConfig::default()).unwrap();
        assert_eq!(sol.f.max_norm(), 0.0);
        assert_eq!(sol.operator_residual, 0.0);
        assert_eq!(sol.trace_residual, 0.0);
    }

    #[test]
    fn bvp_recovers_monogenic_from_trace() {
        let cfg = TransformConfig::default();
        let z = ConstantField(Multivector::zero(3));
        let err = |nt: usize| {
            let dom = build_cap(PI / 3.0, nt, 2 * nt).unwrap();
            let phi = generator(&dom);
            let h = trace(&phi, &dom).unwrap();
            let sol = solve_bvp(&dom, &z, &h, c(0.5), &cfg).unwrap();
            sample_nodes(&dom, 10, 0.3)
                .iter()
                .map(|&i| (&sol.f.values[i] - &phi.value(&dom.interior()[i].point).unwrap()).norm())
                .fold(0.0, f64::max)
        };
        let (e1, e2) = (err(8), err(16));
        assert!(e2 < 1e-4 && e2 < e1, "{e1} {e2}");
    }

    #[test]
    fn bvp_recovers_bump_from_its_gamma() {
        let cfg = TransformConfig::default();
        let err = |nt: usize| {
            let dom = build_cap(PI / 3.0, nt, 2 * nt).unwrap();
            let bump = BumpField::new(&SpherePoint::from_angles(0.25, 0.5), 0.6, Multivector::one(3)).unwrap();
            let g = OperatorField::gamma(c(0.5), bump.clone());
            let sol = solve_bvp(&dom, &g, &BoundaryData::zeros(&dom), c(0.5), &cfg).unwrap();
            sample_nodes(&dom, 10, 0.3)
                .iter()
                .map(|&i| (&sol.f.values[i] - &bump.value(&dom.interior()[i].point).unwrap()).norm())
                .fold(0.0, f64::max)
        };
        let (e1, e2) = (err(8), err(16));
        assert!(e2 < 0.6 * e1, "{e1} {e2}");
    }

    #[test]
    fn dilatation_bound_is_enforced() {
        let dom = build_cap(PI / 3.0, 6, 12).unwrap();
        let phi = shared(generator(&dom));
        let q = shared(ConstantField(Multivector::scalar(3, 1.2)));
        assert!(matches!(BeltramiConfig::new(&dom, q, phi, c(0.5)), Err(Error::Config(_))));
    }

    #[test]
    fn zero_dilatation_returns_seed() {
        let dom = build_cap(PI / 3.0, 6, 12).unwrap();
        let phi: SharedField = Arc::new(generator(&dom));
        let q = shared(ConstantField(Multivector::zero(3)));
        let cfg = BeltramiConfig::new(&dom, q, phi.clone(), c(0.5)).unwrap();
        let sol = solve_beltrami(&dom, &cfg).unwrap();
        assert!(sol.trace.converged);
        assert!(sol.trace.iterations <= 2);
        assert_eq!(sol.h.max_norm(), 0.0);
        let want = SampledField::from_analytic(&dom, &phi).unwrap();
        assert!(sol.f.sub(&want).max_norm() <= 1e-12);
    }

    #[test]
    fn contraction_and_restart() {
        let dom = build_cap(PI / 3.0, 6, 12).unwrap();
        let phi: SharedField = Arc::new(generator(&dom));
        let q = shared(ConstantField(Multivector::scalar(3, 0.1)));
        let mut cfg = BeltramiConfig::new(&dom, q, phi, c(0.5)).unwrap();
        cfg.fp_tol = 1e-12;
        let a = solve_beltrami(&dom, &cfg).unwrap();
        assert!(a.trace.converged);
        assert!(a.trace.mean_ratio() < 1.0);
        cfg.initial = InitialGuess::QPhiTilde;
        let b = solve_beltrami(&dom, &cfg).unwrap();
        let scale = l2_norm(&dom, &a.h).unwrap();
        let gap = l2_norm(&dom, &a.h.sub(&b.h)).unwrap();
        assert!(gap <= 2.0 * cfg.fp_tol * scale, "{gap} {scale}");
    }

    #[test]
    fn trace_ratios() {
        let t = SolveTrace {
            increments: vec![1.0, 0.5, 0.25, 0.125, 0.0625],
            be1_residual: 0.0,
            converged: true,
            iterations: 5,
        };
        assert_eq!(t.ratios(), vec![0.5; 4]);
        assert!((t.mean_ratio() - 0.5).abs() < 1e-15);
    }
}
