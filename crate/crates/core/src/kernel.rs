//! The two-point Cauchy kernel built from a pair of Gegenbauer functions.
//!
//! Both kernels share the shape
//!
//! ```text
//! K(ω, υ) = π / (σ_{n−1} sin πα) · [ C_α^λ(z) − P(ω, υ) C_{α−1}^λ(z) ]
//! ```
//!
//! and differ in the order `λ`, the argument `z` and the bivector factor `P`:
//!
//! | form         | λ         | z      | P   | singular at |
//! |--------------|-----------|--------|-----|-------------|
//! | `Antipodal`  | (n+1)/2   | ω·υ    | ωυ  | υ = −ω      |
//! | `Coincident` | n/2       | −ω·υ   | υω  | υ = ω       |
//!
//! `Antipodal` is the expression as usually printed; it is not annihilated by
//! `Γ_α` in `υ`. `Coincident` is the fundamental solution: `Γ_α^{(υ)} K = 0`
//! away from `υ = ω` and `α ∫_S K = 1`, so it is the default for transforms.
//!
//! In both forms the singular point corresponds to `z = −1`, i.e. the
//! hypergeometric argument `d = (1 − z)/2 = 1`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::clifford::Multivector;
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::special::{gegenbauer, gegenbauer_series, sphere_area, SeriesControl};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KernelForm {
    #[default]
    Coincident,
    Antipodal,
}

impl KernelForm {
    pub fn name(self) -> &'static str {
        match self {
            KernelForm::Coincident => "coincident",
            KernelForm::Antipodal => "antipodal",
        }
    }
}

impl std::str::FromStr for KernelForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "coincident" => Ok(KernelForm::Coincident),
            "antipodal" => Ok(KernelForm::Antipodal),
            other => Err(Error::Config(format!("unknown kernel form {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelConfig {
    pub alpha: Complex64,
    pub n: usize,
    pub max_terms: usize,
    pub series_tol: f64,
    /// Smallest admissible `1 + z`, the distance of the series argument
    /// from the singular endpoint.
    pub singular_guard: f64,
    pub form: KernelForm,
}

impl Default for KernelConfig {
    fn default() -> Self {
        Self {
            alpha: Complex64::new(0.5, 0.0),
            n: 3,
            max_terms: 500,
            series_tol: 1e-16,
            singular_guard: 1e-12,
            form: KernelForm::Coincident,
        }
    }
}

impl KernelConfig {
    pub fn with_alpha(alpha: Complex64) -> Self {
        Self {
            alpha,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || self.n > crate::clifford::MAX_DIM {
            return Err(Error::DimensionOutOfRange(self.n));
        }
        if self.max_terms == 0 {
            return Err(Error::Config("max_terms must be at least 1".into()));
        }
        if !(self.series_tol > 0.0) {
            return Err(Error::Config("series_tol must be positive".into()));
        }
        if !(self.singular_guard > 0.0) {
            return Err(Error::Config("singular_guard must be positive".into()));
        }
        let a = self.alpha;
        if (a.re - a.re.round()).abs() < 1e-9 && a.im.abs() < 1e-9 {
            return Err(Error::IntegerAlpha(format!("{a}")));
        }
        Ok(())
    }

    pub fn series(&self) -> SeriesControl {
        SeriesControl {
            max_terms: self.max_terms,
            tol: self.series_tol,
        }
    }

    pub fn lambda(&self) -> f64 {
        match self.form {
            KernelForm::Coincident => self.n as f64 / 2.0,
            KernelForm::Antipodal => (self.n as f64 + 1.0) / 2.0,
        }
    }

    /// `π / (σ_{n−1} sin πα)`.
    pub fn prefactor(&self) -> Result<Complex64> {
        Ok(PI / (sphere_area(self.n)? * (self.alpha * PI).sin()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelValue {
    pub value: Multivector,
    pub terms_used: usize,
    pub converged: bool,
}

/// `C_α^λ` and `C_{α−1}^λ` with their first two `z`-derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Profile {
    pub a: [Complex64; 3],
    pub b: [Complex64; 3],
}

#[derive(Debug, Clone, Copy)]
struct ProfileMeta {
    terms: usize,
    converged: bool,
    diverged: bool,
}

const TABLE_DEGREE: usize = 22;
const TABLE_PANELS: usize = 16;

/// Piecewise Chebyshev interpolant of the profile in `d = (1 − z)/2`.
/// Panels halve their width towards the singular end `d = 1`, which keeps
/// the singularity a fixed number of half-widths away from every panel.
#[derive(Debug, Clone)]
struct ProfileTable {
    /// `coeffs[panel][fn][k]`, fn ordered as a0 a1 a2 b0 b1 b2.
    coeffs: Vec<[[Complex64; TABLE_DEGREE + 1]; 6]>,
    d_max: f64,
}

impl ProfileTable {
    fn panel_bounds(p: usize) -> (f64, f64) {
        if p == 0 {
            (0.0, 0.5)
        } else {
            (1.0 - 0.5f64.powi(p as i32), 1.0 - 0.5f64.powi(p as i32 + 1))
        }
    }

    fn build(exact: impl Fn(f64) -> Result<Profile>) -> Result<Self> {
        let m = TABLE_DEGREE + 1;
        let mut coeffs = Vec::with_capacity(TABLE_PANELS);
        for p in 0..TABLE_PANELS {
            let (lo, hi) = Self::panel_bounds(p);
            let mut samples = vec![[Complex64::new(0.0, 0.0); 6]; m];
            for (j, s) in samples.iter_mut().enumerate() {
                let t = (PI * (j as f64 + 0.5) / m as f64).cos();
                let d = 0.5 * (lo + hi) + 0.5 * (hi - lo) * t;
                let pr = exact(d)?;
                *s = [pr.a[0], pr.a[1], pr.a[2], pr.b[0], pr.b[1], pr.b[2]];
            }
            let mut panel = [[Complex64::new(0.0, 0.0); TABLE_DEGREE + 1]; 6];
            for (f, row) in panel.iter_mut().enumerate() {
                for (k, ck) in row.iter_mut().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (j, s) in samples.iter().enumerate() {
                        acc += s[f] * (PI * k as f64 * (j as f64 + 0.5) / m as f64).cos();
                    }
                    *ck = acc * (if k == 0 { 1.0 } else { 2.0 } / m as f64);
                }
            }
            coeffs.push(panel);
        }
        Ok(Self {
            coeffs,
            d_max: Self::panel_bounds(TABLE_PANELS - 1).1,
        })
    }

    fn covers(&self, d: f64) -> bool {
        (0.0..self.d_max).contains(&d)
    }

    fn eval(&self, d: f64, order: usize) -> Profile {
        let p = if d < 0.5 {
            0
        } else {
            ((-(1.0 - d).log2()).floor() as usize).min(TABLE_PANELS - 1)
        };
        let (lo, hi) = Self::panel_bounds(p);
        let t = (2.0 * d - lo - hi) / (hi - lo);
        let panel = &self.coeffs[p];
        let mut out = [Complex64::new(0.0, 0.0); 6];
        for (f, o) in out.iter_mut().enumerate() {
            if f % 3 > order {
                continue;
            }
            // Clenshaw recurrence.
            let c = &panel[f];
            let (mut b1, mut b2) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
            for k in (1..=TABLE_DEGREE).rev() {
                let b0 = c[k] + 2.0 * t * b1 - b2;
                b2 = b1;
                b1 = b0;
            }
            *o = c[0] + t * b1 - b2;
        }
        Profile {
            a: [out[0], out[1], out[2]],
            b: [out[3], out[4], out[5]],
        }
    }
}

/// A validated kernel with precomputed constants and, optionally, a
/// tabulated profile for fast repeated evaluation.
#[derive(Debug, Clone)]
pub struct Kernel {
    cfg: KernelConfig,
    lambda: Complex64,
    /// `z = sign · ω·υ`.
    arg_sign: f64,
    prefactor: Complex64,
    table: Option<ProfileTable>,
}

impl Kernel {
    pub fn new(cfg: KernelConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            lambda: Complex64::new(cfg.lambda(), 0.0),
            arg_sign: match cfg.form {
                KernelForm::Coincident => -1.0,
                KernelForm::Antipodal => 1.0,
            },
            prefactor: cfg.prefactor()?,
            cfg,
            table: None,
        })
    }

    /// Same kernel with the profile tabulated. Tabulated values agree with
    /// the series to roughly machine precision and cost a few hundred flops.
    pub fn tabulated(cfg: KernelConfig) -> Result<Self> {
        let mut k = Self::new(cfg)?;
        let exact = |d: f64| k.profile_exact(1.0 - 2.0 * d, 2).map(|(p, _)| p);
        let table = ProfileTable::build(exact)?;
        k.table = Some(table);
        Ok(k)
    }

    pub fn config(&self) -> &KernelConfig {
        &self.cfg
    }

    pub fn alpha(&self) -> Complex64 {
        self.cfg.alpha
    }

    pub fn dim(&self) -> usize {
        self.cfg.n
    }

    pub fn prefactor(&self) -> Complex64 {
        self.prefactor
    }

    /// `+1` when the kernel is singular at `ω = υ`, `−1` when at `ω = −υ`.
    pub fn singular_sign(&self) -> f64 {
        -self.arg_sign
    }

    pub fn argument(&self, omega: &[f64], x: &[f64]) -> f64 {
        self.arg_sign * dot(omega, x)
    }

    fn profile_exact(&self, z: f64, order: usize) -> Result<(Profile, ProfileMeta)> {
        let ctl = self.cfg.series();
        let zc = Complex64::new(z, 0.0);
        let alpha = self.cfg.alpha;
        let mut p = Profile {
            a: [Complex64::new(0.0, 0.0); 3],
            b: [Complex64::new(0.0, 0.0); 3],
        };
        let mut meta = ProfileMeta {
            terms: 0,
            converged: true,
            diverged: false,
        };
        for k in 0..=order {
            let scale = crate::special::pochhammer(self.lambda, k) * 2f64.powi(k as i32);
            for (nu, slot) in [(alpha, 0usize), (alpha - 1.0, 1usize)] {
                let r = gegenbauer(nu - k as f64, self.lambda + k as f64, zc, ctl)?;
                let v = r.value * scale;
                if slot == 0 {
                    p.a[k] = v;
                } else {
                    p.b[k] = v;
                }
                meta.terms += r.terms;
                meta.converged &= r.converged;
                meta.diverged |= r.diverged;
            }
        }
        Ok((p, meta))
    }

    fn check_guard(&self, z: f64) -> Result<()> {
        if 1.0 + z <= self.cfg.singular_guard {
            return Err(Error::Singular(1.0 + z));
        }
        Ok(())
    }

    /// Profile at argument `z`, from the table when one is available and
    /// covers `z`.
    pub fn profile(&self, z: f64, order: usize) -> Result<Profile> {
        self.check_guard(z)?;
        let d = 0.5 * (1.0 - z);
        if let Some(t) = &self.table {
            if t.covers(d) {
                return Ok(t.eval(d, order));
            }
        }
        let (p, meta) = self.profile_exact(z, order)?;
        if meta.diverged || !p.a.iter().chain(p.b.iter()).all(|c| c.is_finite()) {
            return Err(Error::Divergence {
                terms: meta.terms,
                last: f64::NAN,
            });
        }
        Ok(p)
    }

    /// Bivector factor `P(ω, x)`: `xω` for the coincident form, `ωx` for the
    /// antipodal form.
    fn factor(&self, omega: &[f64], x: &[f64]) -> Multivector {
        match self.cfg.form {
            KernelForm::Coincident => vector_product(x, omega),
            KernelForm::Antipodal => vector_product(omega, x),
        }
    }

    fn factor_basis(&self, omega: &[f64], j: usize) -> Multivector {
        let mut e = vec![0.0; omega.len()];
        e[j] = 1.0;
        self.factor(omega, &e)
    }

    /// Kernel value with series metadata, summing the Gegenbauer series
    /// directly (no tabulation).
    pub fn evaluate(&self, omega: &[f64], upsilon: &[f64]) -> Result<KernelValue> {
        self.check_points(omega, upsilon)?;
        let z = self.argument(omega, upsilon);
        self.check_guard(z)?;
        let (p, meta) = self.profile_exact(z, 0)?;
        if meta.diverged || !p.a[0].is_finite() || !p.b[0].is_finite() {
            return Err(Error::Divergence {
                terms: meta.terms,
                last: f64::NAN,
            });
        }
        Ok(KernelValue {
            value: self.assemble_value(omega, upsilon, &p),
            terms_used: meta.terms,
            converged: meta.converged,
        })
    }

    /// Kernel value from the plain product series only, as tabulated by the
    /// command-line `kernel` sweep. Near the singular end the series grows
    /// and the result is flagged as not converged.
    pub fn evaluate_series(&self, omega: &[f64], upsilon: &[f64]) -> Result<KernelValue> {
        self.check_points(omega, upsilon)?;
        let z = self.argument(omega, upsilon);
        self.check_guard(z)?;
        let ctl = self.cfg.series();
        let zc = Complex64::new(z, 0.0);
        let ra = gegenbauer_series(self.cfg.alpha, self.lambda, zc, ctl)?;
        let rb = gegenbauer_series(self.cfg.alpha - 1.0, self.lambda, zc, ctl)?;
        let p = Profile {
            a: [ra.value, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)],
            b: [rb.value, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)],
        };
        Ok(KernelValue {
            value: self.assemble_value(omega, upsilon, &p),
            terms_used: ra.terms + rb.terms,
            converged: ra.converged && rb.converged,
        })
    }

    fn check_points(&self, omega: &[f64], upsilon: &[f64]) -> Result<()> {
        let n = self.cfg.n;
        for p in [omega, upsilon] {
            if p.len() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: p.len(),
                });
            }
            let r = dot(p, p).sqrt();
            if (r - 1.0).abs() > 1e-10 {
                return Err(Error::NotOnSphere(r));
            }
        }
        Ok(())
    }

    fn assemble_value(&self, omega: &[f64], x: &[f64], p: &Profile) -> Multivector {
        let mut v = self.factor(omega, x).scale(-p.b[0]);
        v.set(0, v.get(0) + p.a[0]);
        v.scale(self.prefactor)
    }

    /// Value and ambient `x`-derivatives of `x ↦ K(ω, x)` up to `order`
    /// (at most 2), using the raw polynomial extension of `x` off the sphere.
    pub fn jet(&self, omega: &[f64], x: &[f64], order: usize) -> Result<Jet> {
        let z = self.argument(omega, x);
        let p = self.profile(z, order)?;
        Ok(self.assemble_jet(omega, x, &p, order))
    }

    /// Same as [`Kernel::jet`] but always summing the series.
    pub fn jet_exact(&self, omega: &[f64], x: &[f64], order: usize) -> Result<Jet> {
        let z = self.argument(omega, x);
        self.check_guard(z)?;
        let (p, _) = self.profile_exact(z, order)?;
        Ok(self.assemble_jet(omega, x, &p, order))
    }

    fn assemble_jet(&self, omega: &[f64], x: &[f64], p: &Profile, order: usize) -> Jet {
        let n = omega.len();
        let s = self.arg_sign;
        let k = self.prefactor;
        let px = self.factor(omega, x);
        let value = self.assemble_value(omega, x, p);
        let mut grad = Vec::new();
        let mut hess = Vec::new();
        if order >= 1 {
            let pe: Vec<Multivector> = (0..n).map(|j| self.factor_basis(omega, j)).collect();
            for j in 0..n {
                // ∂_j = K[s ω_j A' − P(e_j) B − s ω_j P(x) B']
                let mut g = pe[j].scale(-p.b[0]);
                g.axpy(-s * omega[j] * p.b[1], &px);
                g.set(0, g.get(0) + s * omega[j] * p.a[1]);
                grad.push(g.scale(k));
            }
            if order >= 2 {
                for j in 0..n {
                    for l in 0..n {
                        let wjl = omega[j] * omega[l];
                        let mut h = px.scale(-wjl * p.b[2]);
                        h.axpy(-s * omega[l] * p.b[1], &pe[j]);
                        h.axpy(-s * omega[j] * p.b[1], &pe[l]);
                        h.set(0, h.get(0) + wjl * p.a[2]);
                        hess.push(h.scale(k));
                    }
                }
            }
        }
        Jet { value, grad, hess }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Geometric product of two real vectors, built directly from
/// `uv = −u·v + Σ_{i<j} (u_i v_j − u_j v_i) e_ij`.
pub fn vector_product(u: &[f64], v: &[f64]) -> Multivector {
    let n = u.len();
    let mut m = Multivector::zero(n);
    m.set(0, -dot(u, v));
    for i in 0..n {
        for j in (i + 1)..n {
            let c = u[i] * v[j] - u[j] * v[i];
            if c != 0.0 {
                m.set((1 << i) | (1 << j), c);
            }
        }
    }
    m
}

/// `Ψ(ω, υ)` with series metadata; see [`Kernel::evaluate`].
pub fn cauchy_kernel(omega: &[f64], upsilon: &[f64], cfg: &KernelConfig) -> Result<KernelValue> {
    Kernel::new(*cfg)?.evaluate(omega, upsilon)
}

/// Complexified Clifford conjugate of the kernel value.
pub fn cauchy_kernel_conjugate(
    omega: &[f64],
    upsilon: &[f64],
    cfg: &KernelConfig,
) -> Result<KernelValue> {
    let mut kv = cauchy_kernel(omega, upsilon, cfg)?;
    kv.value = kv.value.conjugate();
    Ok(kv)
}

/// Value, `υ`-gradient and (optionally) Hessian of the kernel.
pub fn cauchy_kernel_dz(
    omega: &[f64],
    upsilon: &[f64],
    cfg: &KernelConfig,
    second_order: bool,
) -> Result<Jet> {
    let k = Kernel::new(*cfg)?;
    k.check_points(omega, upsilon)?;
    k.jet_exact(omega, upsilon, if second_order { 2 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gegenbauer as geg;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unit(v: [f64; 3]) -> [f64; 3] {
        let r = dot(&v, &v).sqrt();
        [v[0] / r, v[1] / r, v[2] / r]
    }

    fn antipodal(alpha: Complex64) -> KernelConfig {
        KernelConfig {
            alpha,
            form: KernelForm::Antipodal,
            ..KernelConfig::default()
        }
    }

    #[test]
    fn integer_alpha_rejected() {
        for a in [c(1.0, 0.0), c(0.0, 0.0), c(-2.0, 0.0)] {
            assert!(matches!(
                Kernel::new(KernelConfig::with_alpha(a)),
                Err(Error::IntegerAlpha(_))
            ));
        }
    }

    #[test]
    fn graded_zero_and_two() {
        let w = unit([0.3, -0.4, 0.8]);
        let u = unit([0.7, 0.1, 0.2]);
        for cfg in [antipodal(c(0.37, 0.2)), KernelConfig::with_alpha(c(0.37, 0.2))] {
            let kv = cauchy_kernel(&w, &u, &cfg).unwrap();
            assert_eq!(kv.value.grade_magnitude(1), 0.0);
            assert_eq!(kv.value.grade_magnitude(3), 0.0);
            assert!(kv.converged);
        }
    }

    #[test]
    fn coincidence_point_of_antipodal_form() {
        let cfg = antipodal(c(0.5, 0.0));
        let w = unit([0.2, 0.5, -0.3]);
        let kv = cauchy_kernel(&w, &w, &cfg).unwrap();
        let ctl = cfg.series();
        let l = c(2.0, 0.0);
        let want = cfg.prefactor().unwrap()
            * (geg(c(0.5, 0.0), l, c(1.0, 0.0), ctl).unwrap().value
                + geg(c(-0.5, 0.0), l, c(1.0, 0.0), ctl).unwrap().value);
        assert!(kv.value.max_abs_diff(&Multivector::scalar(3, want)) < 1e-14);
    }

    #[test]
    fn explicit_product_terms_reproduce_antipodal_kernel() {
        // Series for C_α^{(n+1)/2} and C_{α−1}^{(n+1)/2} with product terms
        // −α(α+n+1) + (i−1)(n+1) + (i−1)² over (n/2 + i).
        let n = 3.0;
        let alpha = c(0.37, 0.0);
        let cfg = antipodal(alpha);
        let w = unit([0.1, 0.2, 0.9]);
        let u = unit([0.5, -0.3, 0.6]);
        let z = dot(&w, &u);
        let d = (1.0 - z) / 2.0;
        let series = |al: Complex64| {
            let mut sum = c(1.0, 0.0);
            let mut t = c(1.0, 0.0);
            for i in 1..400 {
                let im1 = (i - 1) as f64;
                t = t * (-al * (al + n + 1.0) + im1 * (n + 1.0) + im1 * im1) / (n / 2.0 + i as f64) * d
                    / i as f64;
                sum += t;
            }
            let pre = (crate::special::ln_gamma(al + n + 1.0)
                - crate::special::ln_gamma(al + 1.0)
                - crate::special::ln_gamma(c(n + 1.0, 0.0)))
            .exp();
            pre * sum
        };
        let ca = series(alpha);
        let cb = series(alpha - 1.0);
        let mut want = vector_product(&w, &u).scale(-cb);
        want.set(0, want.get(0) + ca);
        let want = want.scale(cfg.prefactor().unwrap());
        let got = cauchy_kernel(&w, &u, &cfg).unwrap().value;
        assert!(got.max_abs_diff(&want) < 1e-13 * want.norm());
    }

    #[test]
    fn antipode_is_guarded() {
        let cfg = antipodal(c(0.5, 0.0));
        let w = [0.0, 0.0, 1.0];
        assert!(matches!(
            cauchy_kernel(&w, &[0.0, 0.0, -1.0], &cfg),
            Err(Error::Singular(_))
        ));
        let co = KernelConfig::default();
        assert!(matches!(cauchy_kernel(&w, &w, &co), Err(Error::Singular(_))));
        assert!(cauchy_kernel(&w, &[0.0, 0.0, -1.0], &co).is_ok());
    }

    #[test]
    fn conjugate_kernel() {
        let cfg = KernelConfig::default();
        let w = unit([0.3, 0.2, 0.9]);
        let u = unit([0.1, -0.5, 0.7]);
        let k = cauchy_kernel(&w, &u, &cfg).unwrap().value;
        let kb = cauchy_kernel_conjugate(&w, &u, &cfg).unwrap().value;
        // real α: the prefactor is real up to rounding in sin(πα)
        assert!((k.scalar_part() - kb.scalar_part()).norm() < 1e-15);
        for mask in [0b011, 0b101, 0b110] {
            assert!((kb.get(mask) + k.get(mask)).norm() < 1e-15);
        }
        assert_eq!(kb.conjugate(), k);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let w = unit([0.3, 0.2, 0.9]);
        let u = unit([-0.4, 0.5, 0.6]);
        for cfg in [KernelConfig::with_alpha(c(0.37, 0.1)), antipodal(c(0.37, 0.1))] {
            let k = Kernel::new(cfg).unwrap();
            let jet = k.jet_exact(&w, &u, 2).unwrap();
            let h = 1e-5;
            for j in 0..3 {
                let mut up = u;
                let mut dn = u;
                up[j] += h;
                dn[j] -= h;
                let fp = k.jet_exact(&w, &up, 1).unwrap();
                let fm = k.jet_exact(&w, &dn, 1).unwrap();
                let fd = (&fp.value - &fm.value).scale(0.5 / h);
                assert!(fd.max_abs_diff(&jet.grad[j]) < 1e-6 * jet.grad[j].norm().max(1.0));
                for l in 0..3 {
                    let fd2 = (&fp.grad[l] - &fm.grad[l]).scale(0.5 / h);
                    let an = jet.hess_entry(j, l);
                    assert!(fd2.max_abs_diff(an) < 1e-6 * an.norm().max(1.0));
                }
            }
        }
    }

    #[test]
    fn table_matches_series() {
        for cfg in [
            KernelConfig::with_alpha(c(0.5, 0.0)),
            KernelConfig::with_alpha(c(0.37, 0.3)),
            antipodal(c(0.25, 0.0)),
        ] {
            let exact = Kernel::new(cfg).unwrap();
            let fast = Kernel::tabulated(cfg).unwrap();
            let mut worst: f64 = 0.0;
            for i in 0..400 {
                let d = 0.999_99 * ((i as f64 + 0.37) / 400.0).powf(0.25);
                let z = 1.0 - 2.0 * d;
                let pe = exact.profile(z, 2).unwrap();
                let pt = fast.profile(z, 2).unwrap();
                for (x, y) in pe.a.iter().chain(pe.b.iter()).zip(pt.a.iter().chain(pt.b.iter())) {
                    worst = worst.max((x - y).norm() / x.norm().max(1.0));
                }
            }
            assert!(worst < 1e-12, "table error {worst:e}");
        }
    }

    #[test]
    fn coincident_form_is_annihilated_off_the_diagonal() {
        for alpha in [c(0.5, 0.0), c(0.37, 0.0), c(1.3, 0.0), c(0.5, 0.3)] {
            let k = Kernel::new(KernelConfig::with_alpha(alpha)).unwrap();
            let w = unit([0.2, 0.1, 0.95]);
            let u = unit([0.6, -0.2, 0.5]);
            let jet = k.jet_exact(&w, &u, 1).unwrap();
            let r = crate::jet::DiracOp::gamma(alpha).apply(&u, &jet);
            assert!(r.norm() < 1e-11 * jet.value.norm(), "α = {alpha}: {}", r.norm());
        }
    }
}
