//! Quadrature discretisations of the Teodorescu transform `T_Ω`, the Cauchy
//! transform `F_∂Ω`, their conjugated-kernel versions and the principal
//! value boundary operator.
//!
//! Volume sums drop the nodes inside a geodesic ball `B_ε` around the
//! kernel's singular point. When a first-order operator `A = s·Γ_ω + c` is
//! applied in the evaluation point `υ`, the ball moves with `υ` and the
//! derivative of the truncated integral picks up a flux through its rim:
//!
//! ```text
//! A ∫_{Ω∖B_ε(υ)} K f = ∫_{Ω∖B_ε(υ)} (A K) f + s ∮_{∂B_ε(υ)} (ω n) K f dl
//! ```
//!
//! with `n` the unit tangent pointing away from the centre. For the
//! fundamental solution the first term vanishes and the rim term tends to
//! `f(υ)`. The rim is integrated on its own trapezoidal circle, using either
//! the exact density or its value frozen at the centre.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::clifford::Multivector;
use crate::error::{Error, Result};
use crate::field::{check_order, AnalyticField};
use crate::geometry::{BoundaryData, SampledField, SpherePoint, SphericalDomain};
use crate::jet::{DiracOp, Jet};
use crate::kernel::{dot, vector_product, Kernel, KernelConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformConfig {
    pub kernel: KernelConfig,
    /// Radius of the dropped ball; `None` picks twice the mesh parameter.
    pub exclusion_eps: Option<f64>,
    /// Half-width of the arc dropped by the principal value; `None` picks
    /// half the boundary node spacing, which drops only the node itself.
    pub pv_eps: Option<f64>,
    /// Trapezoidal points on the rim of the dropped ball.
    pub circle_points: usize,
    /// Step for differentiating rim integrals in the evaluation point.
    pub fd_step: f64,
}

impl Default for TransformConfig {
    fn default() -> Self {
        Self {
            kernel: KernelConfig::default(),
            exclusion_eps: None,
            pv_eps: None,
            circle_points: 32,
            fd_step: 1e-4,
        }
    }
}

impl TransformConfig {
    pub fn with_alpha(alpha: Complex64) -> Self {
        Self {
            kernel: KernelConfig::with_alpha(alpha),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.kernel.validate()?;
        for (name, v) in [("exclusion_eps", self.exclusion_eps), ("pv_eps", self.pv_eps)] {
            if let Some(e) = v {
                if !(e > 0.0 && e < PI / 2.0) {
                    return Err(Error::Config(format!("{name} = {e} must lie in (0, π/2)")));
                }
            }
        }
        if self.circle_points < 4 {
            return Err(Error::Config("circle_points must be at least 4".into()));
        }
        if !(self.fd_step > 0.0 && self.fd_step < 1e-2) {
            return Err(Error::Config(format!("fd_step = {} must lie in (0, 1e-2)", self.fd_step)));
        }
        Ok(())
    }
}

/// Density on the rim of the dropped ball.
#[derive(Clone, Copy)]
pub enum Local<'a> {
    Exact(&'a dyn AnalyticField),
    /// The value at the centre, held constant over the rim.
    Frozen(&'a Multivector),
}

impl Local<'_> {
    fn value(&self, p: &[f64]) -> Result<Multivector> {
        match self {
            Local::Exact(f) => f.value(p),
            Local::Frozen(m) => Ok((*m).clone()),
        }
    }
}

/// Transforms over one domain with a fixed kernel and regularisation.
#[derive(Debug, Clone)]
pub struct Transforms<'d> {
    dom: &'d SphericalDomain,
    kernel: Kernel,
    eps: f64,
    cos_eps: f64,
    pv_eps: f64,
    circle_points: usize,
    fd_step: f64,
}

/// Orthonormal tangent frame at `s`, built from a fixed reference axis so
/// that it varies smoothly with `s`.
fn tangent_frame(s: &[f64; 3], r: &[f64; 3]) -> ([f64; 3], [f64; 3]) {
    let rs = dot(r, s);
    let mut a = [r[0] - rs * s[0], r[1] - rs * s[1], r[2] - rs * s[2]];
    let na = dot(&a, &a).sqrt();
    a.iter_mut().for_each(|c| *c /= na);
    let b = [
        s[1] * a[2] - s[2] * a[1],
        s[2] * a[0] - s[0] * a[2],
        s[0] * a[1] - s[1] * a[0],
    ];
    (a, b)
}

fn reference_axis(s: &[f64]) -> [f64; 3] {
    let mut k = 0;
    for i in 1..3 {
        if s[i].abs() < s[k].abs() {
            k = i;
        }
    }
    let mut r = [0.0; 3];
    r[k] = 1.0;
    r
}

fn normalized(v: &[f64]) -> [f64; 3] {
    let r = dot(v, v).sqrt();
    [v[0] / r, v[1] / r, v[2] / r]
}

impl<'d> Transforms<'d> {
    pub fn new(dom: &'d SphericalDomain, cfg: &TransformConfig) -> Result<Self> {
        cfg.validate()?;
        if cfg.kernel.n != dom.dim() {
            return Err(Error::DimensionMismatch {
                left: cfg.kernel.n,
                right: dom.dim(),
            });
        }
        let eps = cfg.exclusion_eps.unwrap_or(2.0 * dom.mesh_param());
        let spacing = dom.boundary().first().map_or(1.0, |b| b.weight);
        Ok(Self {
            dom,
            kernel: Kernel::tabulated(cfg.kernel)?,
            eps,
            cos_eps: eps.cos(),
            pv_eps: cfg.pv_eps.unwrap_or(0.5 * spacing),
            circle_points: cfg.circle_points,
            fd_step: cfg.fd_step,
        })
    }

    pub fn domain(&self) -> &'d SphericalDomain {
        self.dom
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn alpha(&self) -> Complex64 {
        self.kernel.alpha()
    }

    pub fn exclusion_eps(&self) -> f64 {
        self.eps
    }

    pub fn pv_eps(&self) -> f64 {
        self.pv_eps
    }

    fn singular_point(&self, v: &[f64]) -> [f64; 3] {
        let s = self.kernel.singular_sign();
        [s * v[0], s * v[1], s * v[2]]
    }

    fn kernel_jet(&self, omega: &[f64], v: &[f64], order: usize, conj: bool) -> Result<Jet> {
        let j = self.kernel.jet(omega, v, order)?;
        Ok(if conj { j.conjugate() } else { j })
    }

    /// `(ops K)(ω, υ)`, where `ops = [A]` gives `A K` and `ops = [A, B]`
    /// gives `B A K`.
    fn operated_kernel(&self, omega: &[f64], v: &[f64], conj: bool, ops: &[DiracOp]) -> Result<Multivector> {
        let jet = self.kernel_jet(omega, v, ops.len(), conj)?;
        Ok(match ops {
            [] => jet.value,
            [a] => a.apply(v, &jet),
            [a, b] => b.apply(v, &a.apply_jet(v, &jet)),
            _ => return Err(Error::NoDerivative),
        })
    }

    pub fn node_values(&self, f: &dyn AnalyticField) -> Result<Vec<Multivector>> {
        self.dom.interior().iter().map(|nd| f.value(&nd.point)).collect()
    }

    pub fn boundary_values(&self, f: &dyn AnalyticField) -> Result<Vec<Multivector>> {
        self.dom.boundary().iter().map(|nd| f.value(&nd.point)).collect()
    }

    /// Regularised `ops T f (υ)`, with `f` given on the interior nodes and
    /// `local` supplying the density on the rim. `ops` holds at most two
    /// operators, innermost first; two operators need the exact density.
    pub fn volume(
        &self,
        v: &[f64],
        f: &[Multivector],
        conj: bool,
        ops: &[DiracOp],
        local: Option<Local>,
    ) -> Result<Multivector> {
        let nodes = self.dom.interior();
        if f.len() != nodes.len() {
            return Err(Error::Shape(format!("{} values for {} nodes", f.len(), nodes.len())));
        }
        if ops.len() > 2 {
            return Err(Error::NoDerivative);
        }
        let s = self.singular_point(v);
        let mut acc = Multivector::zero(self.dom.dim());
        for (nd, fv) in nodes.iter().zip(f) {
            if dot(&nd.point, &s) > self.cos_eps {
                continue;
            }
            let kv = self.operated_kernel(&nd.point, v, conj, ops)?;
            acc.add_product_scaled(&kv, fv, Complex64::new(nd.weight, 0.0));
        }
        if ops.is_empty() {
            return Ok(acc);
        }
        let local = local.ok_or_else(|| {
            Error::Config("a local density is needed to differentiate the transform".into())
        })?;
        let r = reference_axis(&s);
        match ops {
            [a] => {
                acc.axpy(Complex64::new(a.sign, 0.0), &self.rim(v, &r, conj, None, local)?);
            }
            [a, b] => {
                if matches!(local, Local::Frozen(_)) {
                    return Err(Error::NoDerivative);
                }
                acc.axpy(Complex64::new(b.sign, 0.0), &self.rim(v, &r, conj, Some(*a), local)?);
                let j = self.rim_jet(v, &r, conj, local)?;
                acc.axpy(Complex64::new(a.sign, 0.0), &b.apply(v, &j));
            }
            _ => unreachable!(),
        }
        Ok(acc)
    }

    /// `∮_{∂B_ε} (ω n) (A K)(ω, υ) f(ω) dl` around the singular point of `υ`.
    fn rim(
        &self,
        v: &[f64],
        reference: &[f64; 3],
        conj: bool,
        op: Option<DiracOp>,
        local: Local,
    ) -> Result<Multivector> {
        let s = self.singular_point(v);
        let (a, b) = tangent_frame(&s, reference);
        let m = self.circle_points;
        let (se, ce) = self.eps.sin_cos();
        let dl = Complex64::new(se * 2.0 * PI / m as f64, 0.0);
        let ops: Vec<DiracOp> = op.into_iter().collect();
        let mut acc = Multivector::zero(self.dom.dim());
        for k in 0..m {
            let (sp, cp) = ((k as f64 + 0.5) * 2.0 * PI / m as f64).sin_cos();
            let d = [cp * a[0] + sp * b[0], cp * a[1] + sp * b[1], cp * a[2] + sp * b[2]];
            let p = [ce * s[0] + se * d[0], ce * s[1] + se * d[1], ce * s[2] + se * d[2]];
            let nout = [-se * s[0] + ce * d[0], -se * s[1] + ce * d[1], -se * s[2] + ce * d[2]];
            let kv = self.operated_kernel(&p, v, conj, &ops)?;
            let fv = local.value(&p)?;
            let t = &(&vector_product(&p, &nout) * &kv) * &fv;
            acc.axpy(dl, &t);
        }
        Ok(acc)
    }

    /// Rim integral and its ambient gradient in `υ` by central differences
    /// along `υ ± h e_j`, projected back to the sphere.
    fn rim_jet(&self, v: &[f64], reference: &[f64; 3], conj: bool, local: Local) -> Result<Jet> {
        let h = self.fd_step;
        let value = self.rim(v, reference, conj, None, local)?;
        let mut grad = Vec::with_capacity(3);
        for j in 0..3 {
            let mut vp = [v[0], v[1], v[2]];
            let mut vm = vp;
            vp[j] += h;
            vm[j] -= h;
            let jp = self.rim(&normalized(&vp), reference, conj, None, local)?;
            let jm = self.rim(&normalized(&vm), reference, conj, None, local)?;
            grad.push((&jp - &jm).scale(0.5 / h));
        }
        Ok(Jet {
            value,
            grad,
            hess: Vec::new(),
        })
    }

    /// `Σ_b ∂^k K(ω_b, υ) (ω_b n_b) h_b w_b` for derivative orders up to
    /// `order`.
    pub fn boundary_jet(&self, v: &[f64], h: &[Multivector], conj: bool, order: usize) -> Result<Jet> {
        let nodes = self.dom.boundary();
        if h.len() != nodes.len() {
            return Err(Error::Shape(format!("{} values for {} boundary nodes", h.len(), nodes.len())));
        }
        let n = self.dom.dim();
        let mut acc = Jet {
            value: Multivector::zero(n),
            grad: vec![Multivector::zero(n); if order >= 1 { n } else { 0 }],
            hess: vec![Multivector::zero(n); if order >= 2 { n * n } else { 0 }],
        };
        for (nd, hv) in nodes.iter().zip(h) {
            let right = (&vector_product(&nd.point, &nd.conormal) * hv).scale(nd.weight);
            let kj = self.kernel_jet(&nd.point, v, order, conj)?;
            acc.axpy(Complex64::new(1.0, 0.0), &kj.right_mul(&right));
        }
        Ok(acc)
    }

    /// `A F h (υ)`, or `F h (υ)` when `op` is `None`.
    pub fn boundary(&self, v: &[f64], h: &[Multivector], conj: bool, op: Option<DiracOp>) -> Result<Multivector> {
        let jet = self.boundary_jet(v, h, conj, op.is_some() as usize)?;
        Ok(match op {
            Some(a) => a.apply(v, &jet),
            None => jet.value,
        })
    }

    /// Principal value `2 Σ K(ω_b, υ)(ω_b n_b) h_b w_b` over boundary nodes
    /// outside the arc of half-width `pv_eps` around boundary node `idx`.
    pub fn singular_boundary(&self, idx: usize, h: &[Multivector], conj: bool) -> Result<Multivector> {
        let nodes = self.dom.boundary();
        if idx >= nodes.len() {
            return Err(Error::Domain(format!("boundary node {idx} out of range")));
        }
        if h.len() != nodes.len() {
            return Err(Error::Shape(format!("{} values for {} boundary nodes", h.len(), nodes.len())));
        }
        let m = nodes.len();
        let v = &nodes[idx].point;
        let mut acc = Multivector::zero(self.dom.dim());
        for (k, (nd, hv)) in nodes.iter().zip(h).enumerate() {
            let steps = (k as isize - idx as isize).unsigned_abs();
            let arc = steps.min(m - steps) as f64 * nd.weight;
            if arc <= self.pv_eps {
                continue;
            }
            let kv = self.kernel_jet(&nd.point, v, 0, conj)?.value;
            let right = &vector_product(&nd.point, &nd.conormal) * hv;
            acc.add_product_scaled(&kv, &right, Complex64::new(2.0 * nd.weight, 0.0));
        }
        Ok(acc)
    }

    /// Dense matrix of `f ↦ A T f` (or `T f`) restricted to the interior
    /// nodes, with the rim term frozen at each target node.
    pub fn nodal_operator(&self, conj: bool, op: Option<DiracOp>) -> Result<NodalOperator> {
        let nodes = self.dom.interior();
        let size = nodes.len();
        let ops: Vec<DiracOp> = op.into_iter().collect();
        let one = Multivector::one(self.dom.dim());
        let rows: Vec<(Vec<Multivector>, Multivector)> = nodes
            .par_iter()
            .map(|target| {
                let v = target.point.coords();
                let s = self.singular_point(v);
                let mut row = Vec::with_capacity(size);
                for nd in nodes {
                    if dot(&nd.point, &s) > self.cos_eps {
                        row.push(Multivector::zero(self.dom.dim()));
                    } else {
                        row.push(self.operated_kernel(&nd.point, v, conj, &ops)?.scale(nd.weight));
                    }
                }
                let local = match op {
                    Some(a) => self
                        .rim(v, &reference_axis(&s), conj, None, Local::Frozen(&one))?
                        .scale(a.sign),
                    None => Multivector::zero(self.dom.dim()),
                };
                Ok((row, local))
            })
            .collect::<Result<_>>()?;
        let mut entries = Vec::with_capacity(size * size);
        let mut local = Vec::with_capacity(size);
        for (row, l) in rows {
            entries.extend(row);
            local.push(l);
        }
        Ok(NodalOperator { size, entries, local })
    }
}

/// `(M h)_i = Σ_j E_ij h_j + L_i h_i` on interior-node values.
#[derive(Debug, Clone)]
pub struct NodalOperator {
    size: usize,
    entries: Vec<Multivector>,
    local: Vec<Multivector>,
}

impl NodalOperator {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn apply(&self, h: &[Multivector]) -> Result<Vec<Multivector>> {
        if h.len() != self.size {
            return Err(Error::Shape(format!("{} values for a {}-node operator", h.len(), self.size)));
        }
        let n = h.first().map_or(3, Multivector::dim);
        Ok((0..self.size)
            .into_par_iter()
            .map(|i| {
                let row = &self.entries[i * self.size..(i + 1) * self.size];
                let mut acc = &self.local[i] * &h[i];
                let one = Complex64::new(1.0, 0.0);
                for (e, hv) in row.iter().zip(h) {
                    acc.add_product_scaled(e, hv, one);
                }
                debug_assert_eq!(acc.dim(), n);
                acc
            })
            .collect())
    }
}

/// `F_∂Ω' h` on a fixed generating domain `Ω'`, as an analytic field with
/// exact derivatives. Monogenic everywhere off `∂Ω'`.
#[derive(Debug, Clone)]
pub struct CauchyField {
    kernel: Kernel,
    conj: bool,
    nodes: Vec<([f64; 3], Multivector)>,
}

impl CauchyField {
    pub fn new(kernel_cfg: KernelConfig, dom: &SphericalDomain, h: &BoundaryData, conj: bool) -> Result<Self> {
        h.check_domain(dom)?;
        let nodes = dom
            .boundary()
            .iter()
            .zip(&h.values)
            .map(|(nd, hv)| {
                let p = [nd.point[0], nd.point[1], nd.point[2]];
                (p, (&vector_product(&p, &nd.conormal) * hv).scale(nd.weight))
            })
            .collect();
        Ok(Self {
            kernel: Kernel::tabulated(kernel_cfg)?,
            conj,
            nodes,
        })
    }

    /// Generator on the cap of angle `theta1` with `n_phi` boundary nodes and
    /// boundary data `data(φ)`.
    pub fn on_cap(
        kernel_cfg: KernelConfig,
        theta1: f64,
        n_phi: usize,
        data: impl Fn(f64) -> Multivector,
    ) -> Result<Self> {
        let gen = SphericalDomain::cap(theta1, 2, n_phi)?;
        let h = BoundaryData::from_fn(&gen, |nd| {
            let phi = nd.point[1].atan2(nd.point[0]);
            data(phi)
        });
        Self::new(kernel_cfg, &gen, &h, false)
    }
}

impl AnalyticField for CauchyField {
    fn dim(&self) -> usize {
        self.kernel.dim()
    }

    fn jet(&self, x: &[f64], order: usize) -> Result<Jet> {
        check_order(order, 2)?;
        let n = self.dim();
        let mut acc = Jet {
            value: Multivector::zero(n),
            grad: vec![Multivector::zero(n); if order >= 1 { n } else { 0 }],
            hess: vec![Multivector::zero(n); if order >= 2 { n * n } else { 0 }],
        };
        for (p, right) in &self.nodes {
            let kj = self.kernel.jet(p, x, order)?;
            let kj = if self.conj { kj.conjugate() } else { kj };
            acc.axpy(Complex64::new(1.0, 0.0), &kj.right_mul(right));
        }
        Ok(acc)
    }
}

/// Cap angle for monogenic generators of a domain: a cap strictly larger
/// than the domain so that generated fields are smooth up to `∂Ω`.
pub fn generator_angle(dom: &SphericalDomain) -> f64 {
    match dom.shape() {
        crate::geometry::DomainShape::Cap { theta0 } => theta0 + (0.35f64).min(0.5 * (PI - theta0)),
        crate::geometry::DomainShape::Global => PI / 2.0,
    }
}

fn with_alpha(cfg: &TransformConfig, alpha: Complex64) -> TransformConfig {
    let mut c = *cfg;
    c.kernel.alpha = alpha;
    c
}

fn sampled_local(dom: &SphericalDomain, f: &SampledField, v: &[f64]) -> usize {
    let mut best = 0;
    let mut best_dot = f64::NEG_INFINITY;
    for (i, nd) in dom.interior().iter().enumerate() {
        let d = dot(&nd.point, v);
        if d > best_dot {
            best_dot = d;
            best = i;
        }
    }
    debug_assert!(best < f.len());
    best
}

/// `T_Ω f (υ)`.
pub fn teodorescu(
    dom: &SphericalDomain,
    f: &SampledField,
    alpha: Complex64,
    v: &SpherePoint,
    cfg: &TransformConfig,
) -> Result<Multivector> {
    f.check_domain(dom)?;
    Transforms::new(dom, &with_alpha(cfg, alpha))?.volume(v, &f.values, false, &[], None)
}

/// `T̄_Ω f (υ)`, with the conjugated kernel.
pub fn teodorescu_bar(
    dom: &SphericalDomain,
    f: &SampledField,
    alpha: Complex64,
    v: &SpherePoint,
    cfg: &TransformConfig,
) -> Result<Multivector> {
    f.check_domain(dom)?;
    Transforms::new(dom, &with_alpha(cfg, alpha))?.volume(v, &f.values, true, &[], None)
}

/// `Γ_α T_Ω f (υ)` for an analytic density.
pub fn gamma_teodorescu(
    dom: &SphericalDomain,
    f: &dyn AnalyticField,
    alpha: Complex64,
    v: &SpherePoint,
    cfg: &TransformConfig,
) -> Result<Multivector> {
    let t = Transforms::new(dom, &with_alpha(cfg, alpha))?;
    let vals = t.node_values(f)?;
    t.volume(v, &vals, false, &[DiracOp::gamma(alpha)], Some(Local::Exact(f)))
}

/// `Γ_α T_Ω f (υ)` for a sampled density, frozen at the node nearest `υ`
/// on the rim of the dropped ball.
pub fn gamma_teodorescu_sampled(
    dom: &SphericalDomain,
    f: &SampledField,
    alpha: Complex64,
    v: &SpherePoint,
    cfg: &TransformConfig,
) -> Result<Multivector> {
    f.check_domain(dom)?;
    let t = Transforms::new(dom, &with_alpha(cfg, alpha))?;
    let local = &f.values[sampled_local(dom, f, v)];
    t.volume(v, &f.values, false, &[DiracOp::gamma(alpha)], Some(Local::Frozen(local)))
}

fn check_off_boundary(dom: &SphericalDomain, v: &[f64], eps: f64) -> Result<()> {
    let d = dom.distance_to_boundary(v);
    if d < eps {
        return Err(Error::Domain(format!(
            "evaluation point is {d:.3e} from the boundary (< {eps:.3e})"
        )));
    }
    Ok(())
}

/// `F_∂Ω h (υ)` for `υ` at least `exclusion_eps` away from `∂Ω`.
pub fn cauchy_boundary(
    dom: &SphericalDomain,
    h: &BoundaryData,
    alpha: Complex64,
    v: &SpherePoint,
    cfg: &TransformConfig,
) -> Result<Multivector> {
    h.check_domain(dom)?;
    let t = Transforms::new(dom, &with_alpha(cfg, alpha))?;
    check_off_boundary(dom, v, t.exclusion_eps())?;
    t.boundary(v, &h.values, false, None)
}

/// `F̄_∂Ω h (υ)`, with the conjugated kernel.
pub fn cauchy_boundary_bar(
    dom: &SphericalDomain,
    h: &BoundaryData,
    alpha: Complex64,
    v: &SpherePoint,
    cfg: &TransformConfig,
) -> Result<Multivector> {
    h.check_domain(dom)?;
    let t = Transforms::new(dom, &with_alpha(cfg, alpha))?;
    check_off_boundary(dom, v, t.exclusion_eps())?;
    t.boundary(v, &h.values, true, None)
}

/// `F̃_∂Ω h (υ)` for `υ` a boundary node.
pub fn singular_cauchy_boundary(
    dom: &SphericalDomain,
    h: &BoundaryData,
    alpha: Complex64,
    v: &SpherePoint,
    cfg: &TransformConfig,
) -> Result<Multivector> {
    h.check_domain(dom)?;
    let idx = dom
        .boundary()
        .iter()
        .position(|b| b.point.geodesic_distance(v) < 1e-12)
        .ok_or_else(|| Error::Domain("evaluation point is not a boundary node".into()))?;
    Transforms::new(dom, &with_alpha(cfg, alpha))?.singular_boundary(idx, &h.values, false)
}

/// `max_v ‖f(v) − F_∂Ω f(v) − T_Ω Γ_α f(v)‖ / (1 + ‖f(v)‖)`.
pub fn borel_pompeiu_residual(
    dom: &SphericalDomain,
    f: &dyn AnalyticField,
    alpha: Complex64,
    samples: &[SpherePoint],
    cfg: &TransformConfig,
) -> Result<f64> {
    let t = Transforms::new(dom, &with_alpha(cfg, alpha))?;
    let gf = crate::operators::OperatorField::gamma(alpha, f);
    let dens = t.node_values(&gf)?;
    let trace = t.boundary_values(f)?;
    let res: Vec<f64> = samples
        .par_iter()
        .map(|v| {
            let fv = f.value(v)?;
            let tv = t.volume(v, &dens, false, &[], None)?;
            let bv = t.boundary(v, &trace, false, None)?;
            Ok((&(&fv - &tv) - &bv).norm() / (1.0 + fv.norm()))
        })
        .collect::<Result<_>>()?;
    Ok(res.into_iter().fold(0.0, f64::max))
}

/// Builds `g = F h` from boundary data `h` (carried to a slightly larger
/// cap so that `g` is smooth on `∂Ω`), then measures
/// `max_v ‖g(v) − F_∂Ω(trace g)(v)‖ / (1 + ‖g(v)‖)`.
pub fn cif_residual(
    dom: &SphericalDomain,
    h: &BoundaryData,
    alpha: Complex64,
    samples: &[SpherePoint],
    cfg: &TransformConfig,
) -> Result<f64> {
    h.check_domain(dom)?;
    if dom.is_global() {
        return Ok(0.0);
    }
    let cfg = with_alpha(cfg, alpha);
    let gen_dom = SphericalDomain::cap(generator_angle(dom), 2, dom.boundary().len())?;
    let gen_h = BoundaryData::new(&gen_dom, h.values.clone())?;
    let g = CauchyField::new(cfg.kernel, &gen_dom, &gen_h, false)?;
    let t = Transforms::new(dom, &cfg)?;
    let trace = t.boundary_values(&g)?;
    let res: Vec<f64> = samples
        .par_iter()
        .map(|v| {
            let gv = g.value(v)?;
            let fv = t.boundary(v, &trace, false, None)?;
            Ok((&gv - &fv).norm() / (1.0 + gv.norm()))
        })
        .collect::<Result<_>>()?;
    Ok(res.into_iter().fold(0.0, f64::max))
}
