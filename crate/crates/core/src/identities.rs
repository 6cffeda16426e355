//! Refinement-ladder verification of the transform and π identities.
//!
//! Every identity is evaluated pointwise at interior nodes (kept a margin
//! away from the boundary) at each resolution of a ladder, and judged by the
//! decrease criterion of [`IdentityReport`].

use std::sync::OnceLock;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::clifford::Multivector;
use crate::error::{Error, Result};
use crate::field::{AnalyticField, BumpField, PolynomialField};
use crate::geometry::{BoundaryData, DomainShape, SampledField, SpherePoint, SphericalDomain};
use crate::jet::DiracOp;
use crate::operators::{gamma_alpha_bar, OperatorField};
use crate::pi_operator::{inner_product, l2_norm, scalar_inner, BergmanBasis, IdentityReport};
use crate::transforms::{
    borel_pompeiu_residual, cif_residual, generator_angle, CauchyField, Local, TransformConfig, Transforms,
};

/// Fields the suite is run on.
#[derive(Debug, Clone)]
pub struct TestFields {
    /// Compactly supported inside the cap.
    pub bump: BumpField,
    /// A second bump, for adjoint pairings.
    pub bump2: BumpField,
    /// Smooth with non-zero trace.
    pub smooth: PolynomialField,
    /// Boundary data `a + b cos φ + c sin φ` for generated monogenics.
    pub boundary_modes: [Multivector; 3],
}

impl TestFields {
    /// Standard bumps scaled to the cap and a random quadratic polynomial
    /// drawn from `seed`.
    pub fn standard(shape: DomainShape, seed: u64) -> Result<Self> {
        let theta0 = match shape {
            DomainShape::Cap { theta0 } => theta0,
            DomainShape::Global => PI / 3.0,
        };
        let scale = theta0 / (PI / 3.0);
        let bump = BumpField::new(
            &SpherePoint::from_angles(0.24 * scale, 0.5),
            0.57 * scale,
            Multivector::vector(&[1.0, 0.5, -0.3]),
        )?;
        let mut coef2 = Multivector::scalar(3, 0.5);
        coef2.set(0b011, Complex64::new(1.0, 0.0));
        coef2.set(0b100, Complex64::new(0.0, -0.4));
        let bump2 = BumpField::new(&SpherePoint::from_angles(0.3 * scale, 2.6), 0.5 * scale, coef2)?;

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut smooth = PolynomialField::new(3);
        for p in [
            [0, 0, 0],
            [1, 0, 0],
            [0, 1, 0],
            [0, 0, 1],
            [2, 0, 0],
            [1, 1, 0],
            [0, 1, 1],
            [1, 0, 1],
            [0, 0, 2],
        ] {
            let deg: u32 = p.iter().sum();
            let mut m = Multivector::zero(3);
            for c in m.coeffs_mut() {
                let s = 1.0 / (1.0 + deg as f64);
                *c = Complex64::new(rng.random_range(-s..s), rng.random_range(-0.5 * s..0.5 * s));
            }
            smooth.add_term(&p, m);
        }
        Ok(Self {
            bump,
            bump2,
            smooth,
            boundary_modes: [
                Multivector::vector(&[1.0, 0.5, -0.3]),
                Multivector::scalar(3, 0.7),
                Multivector::blade(3, 0b101).scale(0.4),
            ],
        })
    }

    /// All fields identically zero.
    pub fn zero(shape: DomainShape) -> Result<Self> {
        let mut f = Self::standard(shape, 0)?;
        let z = Multivector::zero(3);
        f.bump = BumpField::new(f.bump.center(), f.bump.radius(), z.clone())?;
        f.bump2 = BumpField::new(f.bump2.center(), f.bump2.radius(), z.clone())?;
        f.smooth = PolynomialField::new(3);
        f.boundary_modes = [z.clone(), z.clone(), z];
        Ok(f)
    }

    fn boundary_data(&self, phi: f64) -> Multivector {
        let [a, b, c] = &self.boundary_modes;
        &(a + &b.scale(phi.cos())) + &c.scale(phi.sin())
    }
}

/// Settings for one suite run.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub alpha: Complex64,
    /// Cap angle in radians; the global identities always use the whole
    /// sphere.
    pub cap_angle: f64,
    pub ladder: Vec<(usize, usize)>,
    pub transform: TransformConfig,
    /// Number of interior evaluation nodes per level.
    pub samples: usize,
    /// Distance of evaluation nodes from the boundary, as a fraction of the
    /// cap angle.
    pub margin_fraction: f64,
    /// Size of the Bergman basis.
    pub bergman_size: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            alpha: Complex64::new(0.5, 0.0),
            cap_angle: PI / 3.0,
            ladder: vec![(8, 16), (12, 24), (16, 32)],
            transform: TransformConfig::default(),
            samples: 10,
            margin_fraction: 0.29,
            bergman_size: 24,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.ladder.len() < 3 {
            return Err(Error::Config(format!(
                "a ladder needs at least 3 resolutions, got {}",
                self.ladder.len()
            )));
        }
        if !(self.cap_angle > 0.0 && self.cap_angle < PI) {
            return Err(Error::Config(format!("cap angle {} must lie in (0, π)", self.cap_angle)));
        }
        if self.samples == 0 {
            return Err(Error::Config("at least one sample point is needed".into()));
        }
        if !(self.margin_fraction > 0.0 && self.margin_fraction < 1.0) {
            return Err(Error::Config("margin fraction must lie in (0, 1)".into()));
        }
        self.transform.validate()
    }
}

/// Which identities to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Group {
    Transforms,
    Pi,
    Hilbert,
}

type Eval = fn(&Level, &TestFields) -> Result<f64>;

struct Identity {
    name: &'static str,
    group: Group,
    global: bool,
    negative_control: bool,
    eval: Eval,
}

const fn id(name: &'static str, group: Group, eval: Eval) -> Identity {
    Identity {
        name,
        group,
        global: false,
        negative_control: false,
        eval,
    }
}

fn identities() -> Vec<Identity> {
    use Group::*;
    vec![
        id("right_inverse_bump", Transforms, |l, f| l.right_inverse(&f.bump)),
        id("right_inverse_smooth", Transforms, |l, f| l.right_inverse(&f.smooth)),
        id("borel_pompeiu_bump", Transforms, |l, f| l.borel_pompeiu(&f.bump)),
        id("borel_pompeiu_smooth", Transforms, |l, f| l.borel_pompeiu(&f.smooth)),
        id("compact_representation_bump", Transforms, |l, f| l.compact_representation(&f.bump)),
        Identity {
            global: true,
            ..id("global_representation", Transforms, |l, f| l.borel_pompeiu(&f.smooth))
        },
        id("cauchy_integral_formula", Transforms, |l, f| l.cauchy_integral_formula(f)),
        id("gamma_pi_smooth", Pi, |l, f| l.gamma_pi(&f.smooth)),
        id("pi_gamma_smooth", Pi, |l, f| l.pi_gamma(&f.smooth, true)),
        Identity {
            negative_control: true,
            ..id("pi_gamma_without_cauchy_smooth", Pi, |l, f| l.pi_gamma(&f.smooth, false))
        },
        id("cauchy_of_pi_smooth", Pi, |l, f| l.cauchy_of_pi(&f.smooth)),
        id("gamma_pi_minus_pi_smooth", Pi, |l, f| l.gamma_pi_minus_pi(&f.smooth)),
        id("pi_gamma_compact_bump", Pi, |l, f| l.pi_gamma(&f.bump, false)),
        id("gamma_pi_equals_pi_bump", Pi, |l, f| l.gamma_pi_equals_pi(&f.bump)),
        id("pi_bar_pi_with_boundary_smooth", Pi, |l, f| l.pi_bar_pi(&f.smooth, l.pi_smooth(&f.smooth)?)),
        id("pi_bar_pi_with_boundary_bump", Pi, |l, f| l.pi_bar_pi(&f.bump, l.pi_bump(&f.bump)?)),
        id("pi_pi_bar_with_boundary_smooth", Pi, |l, f| l.pi_pi_bar(&f.smooth)),
        id("left_inverse_gamma_bump", Pi, |l, f| l.left_inverse(&f.bump)),
        Identity {
            global: true,
            ..id("commutation_global", Pi, |l, f| l.commutation(&f.smooth))
        },
        id("monogenicity_preservation", Pi, |l, f| l.monogenicity_preservation(f)),
        id("adjoint_bump", Pi, |l, f| l.adjoint(&f.bump, &f.bump2)),
        id("adjoint_composition_bump", Pi, |l, f| l.adjoint_composition(&f.bump)),
        id("isometry_bump", Pi, |l, f| l.isometry(&f.bump)),
        id("fixed_point", Pi, |l, _| l.fixed_point()),
        id("bergman_idempotence", Hilbert, |l, f| l.bergman(&f.smooth, BergmanCheck::Idempotence)),
        id("bergman_orthogonality", Hilbert, |l, f| l.bergman(&f.smooth, BergmanCheck::Orthogonality)),
        id("bergman_reproduction", Hilbert, |l, f| l.bergman(&f.smooth, BergmanCheck::Reproduction)),
        id("pythagoras_n1", Hilbert, |l, f| l.bergman(&f.smooth, BergmanCheck::Pythagoras(1))),
        id("pythagoras_n2", Hilbert, |l, f| l.bergman(&f.smooth, BergmanCheck::Pythagoras(2))),
        id("pythagoras_n5", Hilbert, |l, f| l.bergman(&f.smooth, BergmanCheck::Pythagoras(5))),
    ]
}

/// Names of every identity in suite order, with its group and whether it
/// is a negative control.
pub fn identity_names() -> Vec<(&'static str, Group, bool)> {
    identities()
        .into_iter()
        .map(|i| (i.name, i.group, i.negative_control))
        .collect()
}

#[derive(Clone, Copy)]
enum BergmanCheck {
    Idempotence,
    Orthogonality,
    Reproduction,
    Pythagoras(u32),
}

/// One resolution of the ladder: a domain, its transforms, evaluation nodes
/// and cached node-wide quantities shared between identities.
struct Level<'d> {
    t: Transforms<'d>,
    cfg: TransformConfig,
    samples: Vec<usize>,
    bergman_size: usize,
    pi_smooth: OnceLock<Result<Vec<Multivector>>>,
    pi_bump: OnceLock<Result<Vec<Multivector>>>,
    bergman: OnceLock<Result<BergmanBasis>>,
}

fn rel(a: &Multivector, b: &Multivector) -> f64 {
    (a - b).norm() / (1.0 + b.norm())
}

fn max_of(v: Vec<f64>) -> f64 {
    v.into_iter().fold(0.0, |a, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) })
}

fn cached<T: Clone>(cell: &OnceLock<Result<T>>, make: impl FnOnce() -> Result<T>) -> Result<&T> {
    cell.get_or_init(make).as_ref().map_err(Clone::clone)
}

impl<'d> Level<'d> {
    fn new(dom: &'d SphericalDomain, cfg: &SuiteConfig) -> Result<Self> {
        let mut tcfg = cfg.transform;
        tcfg.kernel.alpha = cfg.alpha;
        let t = Transforms::new(dom, &tcfg)?;
        let margin = match dom.shape() {
            DomainShape::Cap { theta0 } => cfg.margin_fraction * theta0,
            DomainShape::Global => 0.1,
        };
        let mut samples: Vec<usize> = dom
            .sample_points(cfg.samples, margin)
            .iter()
            .map(|p| nearest_node(dom, p))
            .collect();
        samples.dedup();
        Ok(Self {
            t,
            cfg: tcfg,
            samples,
            bergman_size: cfg.bergman_size,
            pi_smooth: OnceLock::new(),
            pi_bump: OnceLock::new(),
            bergman: OnceLock::new(),
        })
    }

    fn dom(&self) -> &'d SphericalDomain {
        self.t.domain()
    }

    fn alpha(&self) -> Complex64 {
        self.cfg.kernel.alpha
    }

    fn gamma(&self) -> DiracOp {
        DiracOp::gamma(self.alpha())
    }

    fn gamma_bar(&self) -> DiracOp {
        DiracOp::gamma_bar(self.alpha())
    }

    fn sample_points(&self) -> Vec<SpherePoint> {
        self.samples.iter().map(|&i| self.dom().interior()[i].point.clone()).collect()
    }

    /// `max_i r(i, v_i)` over the evaluation nodes.
    fn over_samples(&self, r: impl Fn(usize, &SpherePoint) -> Result<f64> + Sync) -> Result<f64> {
        let nodes = self.dom().interior();
        let v: Vec<f64> = self
            .samples
            .par_iter()
            .map(|&i| r(i, &nodes[i].point))
            .collect::<Result<_>>()?;
        Ok(max_of(v))
    }

    fn at_nodes(&self, r: impl Fn(&SpherePoint) -> Result<Multivector> + Sync) -> Result<Vec<Multivector>> {
        self.dom().interior().par_iter().map(|nd| r(&nd.point)).collect()
    }

    fn at_boundary(&self, r: impl Fn(&SpherePoint) -> Result<Multivector> + Sync) -> Result<Vec<Multivector>> {
        self.dom().boundary().par_iter().map(|nd| r(&nd.point)).collect()
    }

    /// `π f` at every interior node.
    fn pi_nodes(&self, f: &dyn AnalyticField) -> Result<Vec<Multivector>> {
        let vals = self.t.node_values(f)?;
        let op = [self.gamma_bar()];
        self.at_nodes(|v| self.t.volume(v, &vals, false, &op, Some(Local::Exact(f))))
    }

    fn pi_smooth(&self, f: &PolynomialField) -> Result<&Vec<Multivector>> {
        cached(&self.pi_smooth, || self.pi_nodes(f))
    }

    fn pi_bump(&self, f: &BumpField) -> Result<&Vec<Multivector>> {
        cached(&self.pi_bump, || self.pi_nodes(f))
    }

    fn right_inverse(&self, f: &dyn AnalyticField) -> Result<f64> {
        let vals = self.t.node_values(f)?;
        let op = [self.gamma()];
        self.over_samples(|_, v| {
            let got = self.t.volume(v, &vals, false, &op, Some(Local::Exact(f)))?;
            Ok(rel(&got, &f.value(v)?))
        })
    }

    fn borel_pompeiu(&self, f: &dyn AnalyticField) -> Result<f64> {
        borel_pompeiu_residual(self.dom(), f, self.alpha(), &self.sample_points(), &self.cfg)
    }

    fn compact_representation(&self, f: &dyn AnalyticField) -> Result<f64> {
        let dens = self.t.node_values(&OperatorField::gamma(self.alpha(), f))?;
        self.over_samples(|_, v| {
            let fv = f.value(v)?;
            let tv = self.t.volume(v, &dens, false, &[], None)?;
            Ok((&fv - &tv).norm() / (1.0 + fv.norm()))
        })
    }

    fn cauchy_integral_formula(&self, fields: &TestFields) -> Result<f64> {
        let h = BoundaryData::from_fn(self.dom(), |nd| fields.boundary_data(nd.point[1].atan2(nd.point[0])));
        cif_residual(self.dom(), &h, self.alpha(), &self.sample_points(), &self.cfg)
    }

    /// `Γ_α π f = Γ̄_α f`.
    fn gamma_pi(&self, f: &dyn AnalyticField) -> Result<f64> {
        let vals = self.t.node_values(f)?;
        let ops = [self.gamma_bar(), self.gamma()];
        self.over_samples(|_, v| {
            let got = self.t.volume(v, &vals, false, &ops, Some(Local::Exact(f)))?;
            Ok(rel(&got, &gamma_alpha_bar(f, v, self.alpha())?))
        })
    }

    /// `π Γ_α f = Γ̄_α (f − F_∂Ω f)`, or `π Γ_α f = Γ̄_α f` without the
    /// boundary term.
    fn pi_gamma(&self, f: &dyn AnalyticField, with_cauchy: bool) -> Result<f64> {
        let g = OperatorField::gamma(self.alpha(), f);
        let vals = self.t.node_values(&g)?;
        let trace = self.t.boundary_values(f)?;
        let op = [self.gamma_bar()];
        self.over_samples(|_, v| {
            let got = self.t.volume(v, &vals, false, &op, Some(Local::Exact(&g)))?;
            let mut want = gamma_alpha_bar(f, v, self.alpha())?;
            if with_cauchy {
                want -= &self.t.boundary(v, &trace, false, Some(self.gamma_bar()))?;
            }
            Ok(rel(&got, &want))
        })
    }

    /// `F_∂Ω (π f) = π f − T_Ω Γ̄_α f`.
    fn cauchy_of_pi(&self, f: &dyn AnalyticField) -> Result<f64> {
        let vals = self.t.node_values(f)?;
        let op = [self.gamma_bar()];
        let pi_trace = self.at_boundary(|b| self.t.volume(b, &vals, false, &op, Some(Local::Exact(f))))?;
        let gbar = self.t.node_values(&OperatorField::gamma_bar(self.alpha(), f))?;
        self.over_samples(|_, v| {
            let got = self.t.boundary(v, &pi_trace, false, None)?;
            let pf = self.t.volume(v, &vals, false, &op, Some(Local::Exact(f)))?;
            let want = &pf - &self.t.volume(v, &gbar, false, &[], None)?;
            Ok(rel(&got, &want))
        })
    }

    /// `Γ_α π f − π f = Γ̄_α F_∂Ω f`.
    fn gamma_pi_minus_pi(&self, f: &dyn AnalyticField) -> Result<f64> {
        let vals = self.t.node_values(f)?;
        let trace = self.t.boundary_values(f)?;
        let one = [self.gamma_bar()];
        let two = [self.gamma_bar(), self.gamma()];
        self.over_samples(|_, v| {
            let gpf = self.t.volume(v, &vals, false, &two, Some(Local::Exact(f)))?;
            let pf = self.t.volume(v, &vals, false, &one, Some(Local::Exact(f)))?;
            let want = self.t.boundary(v, &trace, false, Some(self.gamma_bar()))?;
            Ok(rel(&(&gpf - &pf), &want))
        })
    }

    /// `Γ_α π g = π g`.
    fn gamma_pi_equals_pi(&self, f: &dyn AnalyticField) -> Result<f64> {
        let vals = self.t.node_values(f)?;
        let one = [self.gamma_bar()];
        let two = [self.gamma_bar(), self.gamma()];
        self.over_samples(|_, v| {
            let gpf = self.t.volume(v, &vals, false, &two, Some(Local::Exact(f)))?;
            let pf = self.t.volume(v, &vals, false, &one, Some(Local::Exact(f)))?;
            Ok(rel(&gpf, &pf))
        })
    }

    /// `π̄ p (v)` for node values `p`, frozen at the evaluation node.
    fn pi_bar_sampled(&self, p: &[Multivector], i: usize, v: &SpherePoint) -> Result<Multivector> {
        self.t.volume(v, p, true, &[self.gamma()], Some(Local::Frozen(&p[i])))
    }

    /// `π p (v)` for node values `p`, frozen at the evaluation node.
    fn pi_sampled(&self, p: &[Multivector], i: usize, v: &SpherePoint) -> Result<Multivector> {
        self.t.volume(v, p, false, &[self.gamma_bar()], Some(Local::Frozen(&p[i])))
    }

    /// `π̄ π f + Γ_α F̄_∂Ω (T_Ω f) = f`.
    fn pi_bar_pi(&self, f: &dyn AnalyticField, p: &[Multivector]) -> Result<f64> {
        let vals = self.t.node_values(f)?;
        let tf = self.at_boundary(|b| self.t.volume(b, &vals, false, &[], None))?;
        self.over_samples(|i, v| {
            let got = &self.pi_bar_sampled(p, i, v)? + &self.t.boundary(v, &tf, true, Some(self.gamma()))?;
            Ok(rel(&got, &f.value(v)?))
        })
    }

    /// `π π̄ f + Γ̄_α F_∂Ω (T̄_Ω f) = f`.
    fn pi_pi_bar(&self, f: &dyn AnalyticField) -> Result<f64> {
        let vals = self.t.node_values(f)?;
        let op = [self.gamma()];
        let q = self.at_nodes(|v| self.t.volume(v, &vals, true, &op, Some(Local::Exact(f))))?;
        let tf = self.at_boundary(|b| self.t.volume(b, &vals, true, &[], None))?;
        self.over_samples(|i, v| {
            let got = &self.pi_sampled(&q, i, v)? + &self.t.boundary(v, &tf, false, Some(self.gamma_bar()))?;
            Ok(rel(&got, &f.value(v)?))
        })
    }

    /// `π̄ π (Γ_α g) = Γ_α g`.
    fn left_inverse(&self, g: &dyn AnalyticField) -> Result<f64> {
        let f = OperatorField::gamma(self.alpha(), g);
        let p = self.pi_nodes(&f)?;
        self.over_samples(|i, v| Ok(rel(&self.pi_bar_sampled(&p, i, v)?, &f.value(v)?)))
    }

    /// `π̄ π f = π π̄ f` on the whole sphere.
    fn commutation(&self, f: &PolynomialField) -> Result<f64> {
        let p = self.pi_smooth(f)?;
        let vals = self.t.node_values(f)?;
        let op = [self.gamma()];
        let q = self.at_nodes(|v| self.t.volume(v, &vals, true, &op, Some(Local::Exact(f))))?;
        self.over_samples(|i, v| Ok(rel(&self.pi_bar_sampled(p, i, v)?, &self.pi_sampled(&q, i, v)?)))
    }

    /// `Γ_α π f = 0` for `f ∈ ker Γ̄_α`, generated as a Cauchy field of
    /// order `−ᾱ` since `Γ̄_α = −Γ_{−ᾱ}`.
    fn monogenicity_preservation(&self, fields: &TestFields) -> Result<f64> {
        let mut kcfg = self.cfg.kernel;
        kcfg.alpha = -self.alpha().conj();
        let n_phi = self.dom().resolution().1.max(32);
        let f = CauchyField::on_cap(kcfg, generator_angle(self.dom()), n_phi, |phi| fields.boundary_data(phi))?;
        let vals = self.t.node_values(&f)?;
        let ops = [self.gamma_bar(), self.gamma()];
        self.over_samples(|_, v| {
            let got = self.t.volume(v, &vals, false, &ops, Some(Local::Exact(&f)))?;
            Ok(got.norm() / (1.0 + f.value(v)?.norm()))
        })
    }

    /// `|[⟨π f, g⟩ − ⟨f, π* g⟩]_0| / (‖f‖ ‖g‖)`.
    fn adjoint(&self, f: &BumpField, g: &BumpField) -> Result<f64> {
        let dom = self.dom();
        let pf = SampledField::new(dom, self.pi_bump(f)?.clone())?;
        let gamma_g = self.t.node_values(&OperatorField::gamma(self.alpha(), g))?;
        let pstar = SampledField::new(dom, self.at_nodes(|v| self.t.volume(v, &gamma_g, true, &[], None))?)?;
        let fs = SampledField::from_analytic(dom, f)?;
        let gs = SampledField::from_analytic(dom, g)?;
        let (nf, ng) = (l2_norm(dom, &fs)?, l2_norm(dom, &gs)?);
        if nf == 0.0 || ng == 0.0 {
            return Ok(0.0);
        }
        let lhs = inner_product(dom, &pf, &gs)?.scalar_part();
        let rhs = inner_product(dom, &fs, &pstar)?.scalar_part();
        Ok((lhs - rhs).norm() / (nf * ng))
    }

    /// `π* π f = T̄_Ω Γ_α (π f) = f`.
    fn adjoint_composition(&self, f: &dyn AnalyticField) -> Result<f64> {
        let vals = self.t.node_values(f)?;
        let ops = [self.gamma_bar(), self.gamma()];
        let gpf = self.at_nodes(|v| self.t.volume(v, &vals, false, &ops, Some(Local::Exact(f))))?;
        self.over_samples(|_, v| Ok(rel(&self.t.volume(v, &gpf, true, &[], None)?, &f.value(v)?)))
    }

    /// `|‖π f‖ − ‖f‖| / ‖f‖`; not finite if `π f` is not.
    fn isometry(&self, f: &BumpField) -> Result<f64> {
        let dom = self.dom();
        let pf = SampledField::new(dom, self.pi_bump(f)?.clone())?;
        let nf = l2_norm(dom, &SampledField::from_analytic(dom, f)?)?;
        let np = l2_norm(dom, &pf)?;
        if !np.is_finite() {
            return Ok(f64::INFINITY);
        }
        if nf == 0.0 {
            return Ok(np);
        }
        Ok((np - nf).abs() / nf)
    }

    /// Least-squares fixed point of `π` over `{1, x, y, z} · e_A`, then the
    /// defect of `Γ̄_α T_Ω f = f` at the evaluation nodes relative to
    /// `max ‖f‖`.
    fn fixed_point(&self) -> Result<f64> {
        let dom = self.dom();
        let nodes = dom.interior();
        let blades = 1usize << dom.dim();
        let powers: [[u32; 3]; 4] = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]];
        let scalars: Vec<PolynomialField> = powers
            .iter()
            .map(|p| PolynomialField::new(3).with_term(p, Multivector::one(3)))
            .collect();
        let images: Vec<Vec<Multivector>> = scalars.iter().map(|s| self.pi_nodes(s)).collect::<Result<_>>()?;
        let rows = nodes.len() * blades;
        let cols = scalars.len() * blades;
        let mut basis = DMatrix::<Complex64>::zeros(rows, cols);
        let mut defect = DMatrix::<Complex64>::zeros(rows, cols);
        for (k, s) in scalars.iter().enumerate() {
            for a in 0..blades {
                let blade = Multivector::blade(3, a);
                let col = k * blades + a;
                for (i, nd) in nodes.iter().enumerate() {
                    let w = nd.weight.sqrt();
                    let sv = s.value(&nd.point)?;
                    let b = &sv * &blade;
                    let d = &(&images[k][i] * &blade) - &b;
                    for c in 0..blades {
                        basis[(i * blades + c, col)] = b.coeffs()[c] * w;
                        defect[(i * blades + c, col)] = d.coeffs()[c] * w;
                    }
                }
            }
        }
        let qr = basis.qr();
        let r = qr.r();
        let r_inv = r
            .try_inverse()
            .ok_or_else(|| Error::Domain("fixed-point candidate basis is rank deficient".into()))?;
        let svd = (defect * &r_inv).svd(false, true);
        let v_t = svd.v_t.ok_or_else(|| Error::Domain("SVD failed".into()))?;
        let smallest = svd
            .singular_values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let c_tilde = v_t.row(smallest).adjoint();
        let c = r_inv * c_tilde;
        let mut fstar = PolynomialField::new(3);
        for (k, p) in powers.iter().enumerate() {
            let mut coef = Multivector::zero(3);
            for a in 0..blades {
                coef.set(a, c[k * blades + a]);
            }
            fstar.add_term(p, coef);
        }
        let vals = self.t.node_values(&fstar)?;
        let scale = vals.iter().map(Multivector::norm).fold(0.0, f64::max);
        if scale == 0.0 {
            return Err(Error::Domain("fixed-point candidate vanishes".into()));
        }
        let op = [self.gamma_bar()];
        self.over_samples(|_, v| {
            let pf = self.t.volume(v, &vals, false, &op, Some(Local::Exact(&fstar)))?;
            Ok((&pf - &fstar.value(v)?).norm() / scale)
        })
    }

    fn bergman(&self, f: &PolynomialField, check: BergmanCheck) -> Result<f64> {
        let dom = self.dom();
        let basis = cached(&self.bergman, || {
            BergmanBasis::new(dom, self.alpha(), self.bergman_size, &self.cfg)
        })?;
        let fs = SampledField::from_analytic(dom, f)?;
        let (pf, qf) = basis.project(dom, &fs)?;
        let size = fs.max_norm().max(1.0);
        Ok(match check {
            BergmanCheck::Idempotence => basis.project(dom, &pf)?.0.sub(&pf).max_norm() / size,
            BergmanCheck::Orthogonality => scalar_inner(dom, &pf.values, &qf.values).norm() / (size * size),
            BergmanCheck::Reproduction => {
                let a = inner_product(dom, &pf, &fs)?.scalar_part();
                let b = inner_product(dom, &pf, &pf)?.scalar_part();
                (a - b).norm() / (size * size)
            }
            BergmanCheck::Pythagoras(k) => crate::pi_operator::pythagoras_check(dom, &pf, &qf, k)?.residual,
        })
    }
}

fn nearest_node(dom: &SphericalDomain, p: &SpherePoint) -> usize {
    dom.interior()
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.point.dot(p).total_cmp(&b.1.point.dot(p)))
        .map_or(0, |(i, _)| i)
}

/// Runs the identities of the given groups over the ladder. Errors in one
/// identity only mark that identity's report as failed.
pub fn run_suite(cfg: &SuiteConfig, fields: &TestFields, groups: &[Group]) -> Result<Vec<IdentityReport>> {
    run_selected(cfg, fields, |i| groups.contains(&i.group))
}

fn run_selected(cfg: &SuiteConfig, fields: &TestFields, keep: impl Fn(&Identity) -> bool) -> Result<Vec<IdentityReport>> {
    cfg.validate()?;
    let selected: Vec<Identity> = identities().into_iter().filter(|i| keep(i)).collect();
    let mut ladders: Vec<Vec<(f64, f64)>> = vec![Vec::new(); selected.len()];
    let mut errors: Vec<Option<Error>> = vec![None; selected.len()];
    let need_global = selected.iter().any(|i| i.global);
    for &(nt, np) in &cfg.ladder {
        let cap = SphericalDomain::cap(cfg.cap_angle, nt, np)?;
        let global = if need_global {
            Some(SphericalDomain::global(nt, np)?)
        } else {
            None
        };
        let cap_level = Level::new(&cap, cfg)?;
        let global_level = global.as_ref().map(|g| Level::new(g, cfg)).transpose()?;
        for (k, ident) in selected.iter().enumerate() {
            if errors[k].is_some() {
                continue;
            }
            let level = if ident.global {
                global_level.as_ref().expect("global level")
            } else {
                &cap_level
            };
            match (ident.eval)(level, fields) {
                Ok(r) => {
                    log::info!("{} {nt}:{np} residual {r:.3e}", ident.name);
                    ladders[k].push((level.dom().mesh_param(), r));
                }
                Err(e) => {
                    log::warn!("{} {nt}:{np} failed: {e}", ident.name);
                    errors[k] = Some(e);
                }
            }
        }
    }
    Ok(selected
        .iter()
        .zip(ladders)
        .zip(errors)
        .map(|((ident, ladder), err)| match err {
            Some(e) => IdentityReport::failed(ident.name, &e, ident.negative_control),
            None => IdentityReport::from_ladder(ident.name, ladder, ident.negative_control),
        })
        .collect())
}

/// Runs the named identities in suite order, sharing each level between
/// them. Unknown names are an error.
pub fn run_named(cfg: &SuiteConfig, fields: &TestFields, names: &[&str]) -> Result<Vec<IdentityReport>> {
    let known = identity_names();
    if let Some(bad) = names.iter().find(|n| !known.iter().any(|k| k.0 == **n)) {
        return Err(Error::Config(format!("unknown identity {bad}")));
    }
    run_selected(cfg, fields, |i| names.contains(&i.name))
}

/// Runs a single identity by name.
pub fn run_identity(cfg: &SuiteConfig, fields: &TestFields, name: &str) -> Result<IdentityReport> {
    run_selected(cfg, fields, |i| i.name == name)?
        .pop()
        .ok_or_else(|| Error::Config(format!("unknown identity {name}")))
}

/// The π and Hilbert-space identities.
pub fn verify_pi_identities(cfg: &SuiteConfig, fields: &TestFields) -> Result<Vec<IdentityReport>> {
    run_suite(cfg, fields, &[Group::Pi, Group::Hilbert])
}

/// Right inverse, Borel–Pompeiu, representation and Cauchy integral formula.
pub fn verify_transform_identities(cfg: &SuiteConfig, fields: &TestFields) -> Result<Vec<IdentityReport>> {
    run_suite(cfg, fields, &[Group::Transforms])
}
