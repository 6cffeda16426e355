//! Spherical caps and the full sphere `S²` with product quadrature rules:
//! Gauss–Legendre in colatitude times the midpoint rule in longitude.

use std::f64::consts::PI;
use std::num::NonZeroUsize;
use std::sync::atomic::{AtomicU64, Ordering};

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use smallvec::SmallVec;

use crate::clifford::Multivector;
use crate::error::{Error, Result};
use crate::field::{AnalyticField, BumpField};

#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint {
    coords: SmallVec<[f64; 4]>,
}

impl SpherePoint {
    pub fn new(coords: &[f64]) -> Result<Self> {
        let r = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        if (r - 1.0).abs() > 1e-12 {
            return Err(Error::NotOnSphere(r));
        }
        Ok(Self {
            coords: SmallVec::from_slice(coords),
        })
    }

    /// Projects a non-zero vector onto the sphere.
    pub fn normalized(coords: &[f64]) -> Result<Self> {
        let r = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(Self {
            coords: coords.iter().map(|c| c / r).collect(),
        })
    }

    /// `(sin θ cos φ, sin θ sin φ, cos θ)`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self {
            coords: SmallVec::from_slice(&[st * cp, st * sp, ct]),
        }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn dot(&self, other: &SpherePoint) -> f64 {
        self.coords.iter().zip(&other.coords).map(|(a, b)| a * b).sum()
    }

    pub fn geodesic_distance(&self, other: &SpherePoint) -> f64 {
        geodesic(&self.coords, &other.coords)
    }

    pub fn antipode(&self) -> SpherePoint {
        Self {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn to_multivector(&self) -> Multivector {
        Multivector::vector(&self.coords)
    }

    /// Colatitude and longitude of a point of `S²`.
    pub fn angles(&self) -> (f64, f64) {
        let c = &self.coords;
        (c[2].clamp(-1.0, 1.0).acos(), c[1].atan2(c[0]))
    }
}

impl std::ops::Deref for SpherePoint {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.coords
    }
}

/// Great-circle distance, accurate also for nearly coincident points.
pub fn geodesic(a: &[f64], b: &[f64]) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let cross2 = if a.len() == 3 {
        let c = [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ];
        c.iter().map(|v| v * v).sum::<f64>()
    } else {
        (1.0 - d * d).max(0.0)
    };
    cross2.sqrt().atan2(d)
}

#[derive(Debug, Clone, PartialEq)]
pub struct InteriorNode {
    pub point: SpherePoint,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryNode {
    pub point: SpherePoint,
    pub weight: f64,
    /// Outward unit co-normal, tangent to the sphere.
    pub conormal: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainShape {
    Cap { theta0: f64 },
    Global,
}

static NEXT_DOMAIN_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Debug, Clone)]
pub struct SphericalDomain {
    id: u64,
    shape: DomainShape,
    n_theta: usize,
    n_phi: usize,
    interior: Vec<InteriorNode>,
    boundary: Vec<BoundaryNode>,
    mesh_param: f64,
}

fn gauss_legendre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let nz = NonZeroUsize::new(n).ok_or_else(|| Error::Config("quadrature order must be positive".into()))?;
    let rule = GaussLegendre::new(nz);
    Ok((rule.nodes().copied().collect(), rule.weights().copied().collect()))
}

fn check_sizes(n_theta: usize, n_phi: usize) -> Result<()> {
    if n_theta < 2 || n_phi < 4 {
        return Err(Error::Config(format!(
            "resolution {n_theta}:{n_phi} too small (need N_theta >= 2, N_phi >= 4)"
        )));
    }
    if n_theta * n_phi > 200_000 {
        return Err(Error::Config(format!(
            "resolution {n_theta}:{n_phi} exceeds the node budget"
        )));
    }
    Ok(())
}

fn product_rule(theta_max: f64, n_theta: usize, n_phi: usize) -> Result<Vec<InteriorNode>> {
    let (x, w) = gauss_legendre(n_theta)?;
    let mut order: Vec<usize> = (0..n_theta).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let dphi = 2.0 * PI / n_phi as f64;
    let mut nodes = Vec::with_capacity(n_theta * n_phi);
    for &i in &order {
        let theta = 0.5 * theta_max * (x[i] + 1.0);
        let wt = 0.5 * theta_max * w[i] * theta.sin() * dphi;
        for k in 0..n_phi {
            let phi = (k as f64 + 0.5) * dphi;
            nodes.push(InteriorNode {
                point: SpherePoint::from_angles(theta, phi),
                weight: wt,
            });
        }
    }
    Ok(nodes)
}

impl SphericalDomain {
    /// The cap `{θ < θ0}` around the north pole of `S²`.
    pub fn cap(theta0: f64, n_theta: usize, n_phi: usize) -> Result<Self> {
        if !(theta0 > 0.0 && theta0 < PI) {
            return Err(Error::Domain(format!("cap angle {theta0} outside (0, π)")));
        }
        check_sizes(n_theta, n_phi)?;
        let interior = product_rule(theta0, n_theta, n_phi)?;
        let dphi = 2.0 * PI / n_phi as f64;
        let (st, ct) = theta0.sin_cos();
        let boundary = (0..n_phi)
            .map(|k| {
                let phi = (k as f64 + 0.5) * dphi;
                let (sp, cp) = phi.sin_cos();
                BoundaryNode {
                    point: SpherePoint::from_angles(theta0, phi),
                    weight: st * dphi,
                    conormal: [ct * cp, ct * sp, -st],
                }
            })
            .collect();
        Ok(Self {
            id: NEXT_DOMAIN_ID.fetch_add(1, Ordering::Relaxed),
            shape: DomainShape::Cap { theta0 },
            n_theta,
            n_phi,
            interior,
            boundary,
            mesh_param: theta0 / n_theta as f64,
        })
    }

    pub fn global(n_theta: usize, n_phi: usize) -> Result<Self> {
        check_sizes(n_theta, n_phi)?;
        Ok(Self {
            id: NEXT_DOMAIN_ID.fetch_add(1, Ordering::Relaxed),
            shape: DomainShape::Global,
            n_theta,
            n_phi,
            interior: product_rule(PI, n_theta, n_phi)?,
            boundary: Vec::new(),
            mesh_param: PI / n_theta as f64,
        })
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn dim(&self) -> usize {
        3
    }

    pub fn shape(&self) -> DomainShape {
        self.shape
    }

    pub fn resolution(&self) -> (usize, usize) {
        (self.n_theta, self.n_phi)
    }

    pub fn interior(&self) -> &[InteriorNode] {
        &self.interior
    }

    pub fn boundary(&self) -> &[BoundaryNode] {
        &self.boundary
    }

    pub fn is_global(&self) -> bool {
        matches!(self.shape, DomainShape::Global)
    }

    /// Characteristic node spacing `h` (colatitude extent / `N_theta`).
    pub fn mesh_param(&self) -> f64 {
        self.mesh_param
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        match self.shape {
            DomainShape::Global => true,
            DomainShape::Cap { theta0 } => p[2].clamp(-1.0, 1.0).acos() < theta0,
        }
    }

    /// Geodesic distance from `p` to `∂Ω`; infinite for the global domain.
    pub fn distance_to_boundary(&self, p: &[f64]) -> f64 {
        match self.shape {
            DomainShape::Global => f64::INFINITY,
            DomainShape::Cap { theta0 } => (theta0 - p[2].clamp(-1.0, 1.0).acos()).abs(),
        }
    }

    pub fn area(&self) -> f64 {
        self.interior.iter().map(|n| n.weight).sum()
    }

    /// Points inside the domain at least `margin` away from the boundary,
    /// on a deterministic spiral.
    pub fn sample_points(&self, count: usize, margin: f64) -> Vec<SpherePoint> {
        let theta_max = match self.shape {
            DomainShape::Global => PI - margin,
            DomainShape::Cap { theta0 } => theta0 - margin,
        };
        let golden = PI * (3.0 - 5f64.sqrt());
        (0..count)
            .map(|i| {
                let t = (i as f64 + 0.5) / count as f64;
                let theta = match self.shape {
                    DomainShape::Global => margin + (theta_max - margin) * t,
                    DomainShape::Cap { .. } => theta_max * t.sqrt(),
                };
                SpherePoint::from_angles(theta, 0.3 + golden * i as f64)
            })
            .collect()
    }
}

pub fn build_cap(theta0: f64, n_theta: usize, n_phi: usize) -> Result<SphericalDomain> {
    SphericalDomain::cap(theta0, n_theta, n_phi)
}

pub fn build_global(n_theta: usize, n_phi: usize) -> Result<SphericalDomain> {
    SphericalDomain::global(n_theta, n_phi)
}

/// Multivector values on the interior nodes of a domain, optionally with
/// values on the boundary nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    domain_id: u64,
    pub values: Vec<Multivector>,
    pub boundary_values: Option<Vec<Multivector>>,
}

impl SampledField {
    pub fn new(dom: &SphericalDomain, values: Vec<Multivector>) -> Result<Self> {
        if values.len() != dom.interior.len() {
            return Err(Error::Shape(format!(
                "{} values for {} interior nodes",
                values.len(),
                dom.interior.len()
            )));
        }
        if values.iter().any(|v| v.dim() != dom.dim()) {
            return Err(Error::Shape("sample dimension differs from domain".into()));
        }
        Ok(Self {
            domain_id: dom.id,
            values,
            boundary_values: None,
        })
    }

    pub fn zeros(dom: &SphericalDomain) -> Self {
        Self {
            domain_id: dom.id,
            values: vec![Multivector::zero(dom.dim()); dom.interior.len()],
            boundary_values: None,
        }
    }

    pub fn from_fn(dom: &SphericalDomain, f: impl Fn(&SpherePoint) -> Multivector) -> Self {
        Self {
            domain_id: dom.id,
            values: dom.interior.iter().map(|nd| f(&nd.point)).collect(),
            boundary_values: None,
        }
    }

    /// Samples an analytic field on interior and boundary nodes.
    pub fn from_analytic(dom: &SphericalDomain, f: &dyn AnalyticField) -> Result<Self> {
        let values = dom
            .interior
            .iter()
            .map(|nd| f.value(&nd.point))
            .collect::<Result<Vec<_>>>()?;
        let boundary = dom
            .boundary
            .iter()
            .map(|nd| f.value(&nd.point))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            domain_id: dom.id,
            values,
            boundary_values: Some(boundary),
        })
    }

    pub fn domain_id(&self) -> u64 {
        self.domain_id
    }

    pub fn check_domain(&self, dom: &SphericalDomain) -> Result<()> {
        if self.domain_id != dom.id || self.values.len() != dom.interior.len() {
            return Err(Error::Domain("field was sampled on a different domain".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map(&self, f: impl Fn(&Multivector) -> Multivector) -> Self {
        Self {
            domain_id: self.domain_id,
            values: self.values.iter().map(&f).collect(),
            boundary_values: self.boundary_values.as_ref().map(|b| b.iter().map(&f).collect()),
        }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(&Multivector, &Multivector) -> Multivector) -> Self {
        assert_eq!(self.domain_id, other.domain_id, "fields live on different domains");
        let boundary = match (&self.boundary_values, &other.boundary_values) {
            (Some(a), Some(b)) => Some(a.iter().zip(b).map(|(x, y)| f(x, y)).collect()),
            _ => None,
        };
        Self {
            domain_id: self.domain_id,
            values: self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect(),
            boundary_values: boundary,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> Self {
        let c = c.into();
        self.map(|v| v.scale(c))
    }

    pub fn conjugate(&self) -> Self {
        self.map(Multivector::conjugate)
    }

    /// Largest coefficient norm over interior nodes.
    pub fn max_norm(&self) -> f64 {
        self.values.iter().map(Multivector::norm).fold(0.0, f64::max)
    }
}

/// Values on the boundary nodes of a domain.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData {
    domain_id: u64,
    pub values: Vec<Multivector>,
}

impl BoundaryData {
    pub fn new(dom: &SphericalDomain, values: Vec<Multivector>) -> Result<Self> {
        if values.len() != dom.boundary.len() {
            return Err(Error::Shape(format!(
                "{} values for {} boundary nodes",
                values.len(),
                dom.boundary.len()
            )));
        }
        Ok(Self {
            domain_id: dom.id,
            values,
        })
    }

    pub fn zeros(dom: &SphericalDomain) -> Self {
        Self {
            domain_id: dom.id,
            values: vec![Multivector::zero(dom.dim()); dom.boundary.len()],
        }
    }

    pub fn from_fn(dom: &SphericalDomain, f: impl Fn(&BoundaryNode) -> Multivector) -> Self {
        Self {
            domain_id: dom.id,
            values: dom.boundary.iter().map(f).collect(),
        }
    }

    pub fn check_domain(&self, dom: &SphericalDomain) -> Result<()> {
        if self.domain_id != dom.id || self.values.len() != dom.boundary.len() {
            return Err(Error::Domain("boundary data belongs to a different domain".into()));
        }
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_norm(&self) -> f64 {
        self.values.iter().map(Multivector::norm).fold(0.0, f64::max)
    }
}

/// `Σ_w f(ω_w) weight_w`, summed in node order.
pub fn integrate(dom: &SphericalDomain, f: &SampledField) -> Result<Multivector> {
    f.check_domain(dom)?;
    let mut acc = Multivector::zero(dom.dim());
    for (nd, v) in dom.interior.iter().zip(&f.values) {
        acc.axpy(Complex64::new(nd.weight, 0.0), v);
    }
    Ok(acc)
}

/// Restriction of an analytic field to the boundary nodes. Empty on the
/// global sphere.
pub fn trace(f: &dyn AnalyticField, dom: &SphericalDomain) -> Result<BoundaryData> {
    let values = dom
        .boundary
        .iter()
        .map(|nd| f.value(&nd.point))
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundaryData {
        domain_id: dom.id,
        values,
    })
}

/// Smooth bump supported in the geodesic ball `B(center, radius)`, which
/// must lie inside the domain.
pub fn bump_field(
    dom: &SphericalDomain,
    center: &SpherePoint,
    radius: f64,
    coef: Multivector,
) -> Result<BumpField> {
    if dom.distance_to_boundary(center) <= radius || !dom.contains(center) {
        return Err(Error::Domain(format!(
            "bump of radius {radius} is not contained in the domain"
        )));
    }
    BumpField::new(center, radius, coef)
}
