//! The `sphcl` command-line harness.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::clifford::Multivector;
use crate::error::{Error, Result};
use crate::field::{AnalyticField, BumpField, ConstantField, SharedField};
use crate::geometry::{trace, BoundaryData, DomainShape, SpherePoint, SphericalDomain};
use crate::identities::{identity_names, run_suite, Group, SuiteConfig, TestFields};
use crate::kernel::{Kernel, KernelConfig, KernelForm};
use crate::operators::OperatorField;
use crate::pi_operator::IdentityReport;
use crate::solvers::{sample_nodes, solve_beltrami, solve_bvp, BeltramiConfig};
use crate::transforms::{generator_angle, CauchyField, TransformConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "sphcl", version, about = "Spherical Clifford analysis: kernels, transform identities and solvers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Tabulate the Cauchy kernel along a geodesic towards its singularity.
    Kernel,
    /// Run the identity suite over the resolution ladder.
    Verify,
    /// Solve the boundary value problem for manufactured data on each level.
    Bvp,
    /// Solve the Beltrami equation for a grid of dilatations on each level.
    Beltrami,
    /// Print the configuration, flags and identity list.
    Info,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Kernel => "kernel",
            Command::Verify => "verify",
            Command::Bvp => "bvp",
            Command::Beltrami => "beltrami",
            Command::Info => "info",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Coincident,
    Antipodal,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Kernel order, "a", "a+bi" or "a-bi".
    #[arg(long, global = true, default_value = "0.5", value_parser = parse_alpha)]
    pub alpha: Complex64,
    /// Cap half-angle in degrees.
    #[arg(long, global = true, default_value_t = 60.0, value_parser = parse_cap_angle)]
    pub cap_angle: f64,
    /// Resolution ladder "Nθ:Nφ,Nθ:Nφ,…".
    #[arg(long, global = true, value_parser = parse_ladder)]
    pub res: Option<Ladder>,
    /// Radius of the ball dropped around the kernel singularity.
    #[arg(long, global = true, value_parser = parse_angle_param)]
    pub eps: Option<f64>,
    /// Half-width of the arc dropped by the boundary principal value.
    #[arg(long, global = true, value_parser = parse_angle_param)]
    pub pv_eps: Option<f64>,
    #[arg(long, global = true, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_terms: u64,
    #[arg(long, global = true, default_value_t = 1e-16, value_parser = parse_positive)]
    pub series_tol: f64,
    #[arg(long, global = true, default_value_t = 1e-10, value_parser = parse_positive)]
    pub fp_tol: f64,
    #[arg(long, global = true, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_iter: u64,
    /// Seed of the random smooth test field.
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    /// Single-threaded run without timing lines; output is byte-identical.
    #[arg(long, global = true)]
    pub deterministic: bool,
    /// CSV destination (default: stdout).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Which endpoint of the Gegenbauer argument is singular.
    #[arg(long, global = true, value_enum, default_value_t = FormArg::Coincident)]
    pub kernel_form: FormArg,
    /// Number of rows of the kernel sweep.
    #[arg(long, global = true, default_value_t = 64)]
    pub points: usize,
    /// Dilatation norms for the Beltrami grid, each in [0, 1).
    #[arg(long, global = true, value_delimiter = ',', default_value = "0,0.1,0.3,0.5", value_parser = parse_q)]
    pub q: Vec<f64>,
    /// Evaluation points per level.
    #[arg(long, global = true, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ladder(pub Vec<(usize, usize)>);

impl std::fmt::Display for Ladder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: Vec<String> = self.0.iter().map(|(a, b)| format!("{a}:{b}")).collect();
        f.write_str(&s.join(","))
    }
}

pub fn parse_alpha(s: &str) -> std::result::Result<Complex64, String> {
    let bad = || format!("invalid complex number {s:?}; expected \"a\", \"a+bi\" or \"a-bi\"");
    if s.is_empty() || s.contains(char::is_whitespace) {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return match s.parse::<f64>() {
            Ok(re) if re.is_finite() => Ok(Complex64::new(re, 0.0)),
            _ => Err(bad()),
        };
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        x => x,
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.parse().map_err(|_| bad())?;
    if !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

pub fn format_alpha(a: Complex64) -> String {
    if a.im < 0.0 || (a.im == 0.0 && a.im.is_sign_negative()) {
        format!("{}-{}i", a.re, -a.im)
    } else {
        format!("{}+{}i", a.re, a.im)
    }
}

pub fn parse_ladder(s: &str) -> std::result::Result<Ladder, String> {
    let levels = s
        .split(',')
        .map(|item| {
            let (a, b) = item
                .split_once(':')
                .ok_or_else(|| format!("resolution {item:?} must be Nθ:Nφ"))?;
            let nt: usize = a.parse().map_err(|_| format!("bad Nθ in {item:?}"))?;
            let np: usize = b.parse().map_err(|_| format!("bad Nφ in {item:?}"))?;
            if nt < 2 || np < 4 {
                return Err(format!("resolution {item:?} needs Nθ ≥ 2 and Nφ ≥ 4"));
            }
            Ok((nt, np))
        })
        .collect::<std::result::Result<Vec<_>, String>>()?;
    Ok(Ladder(levels))
}

fn parse_cap_angle(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v < 180.0 {
        Ok(v)
    } else {
        Err(format!("cap angle {v} must lie in (0, 180) degrees"))
    }
}

fn parse_angle_param(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v < PI / 2.0 {
        Ok(v)
    } else {
        Err(format!("{v} must lie in (0, π/2)"))
    }
}

fn parse_positive(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{v} must be positive"))
    }
}

fn parse_q(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("dilatation norm {v} must lie in [0, 1)"))
    }
}

/// Fully parsed run settings.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub opts: Options,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Self {
        Self {
            command: cli.command,
            opts: cli.opts,
        }
    }

    pub fn cap_angle_rad(&self) -> f64 {
        self.opts.cap_angle.to_radians()
    }

    pub fn ladder(&self) -> Ladder {
        self.opts.res.clone().unwrap_or_else(|| {
            Ladder(match self.command {
                Command::Beltrami => vec![(8, 16), (12, 24), (16, 32)],
                _ => vec![(8, 16), (16, 32), (32, 64)],
            })
        })
    }

    pub fn kernel(&self) -> KernelConfig {
        KernelConfig {
            alpha: self.opts.alpha,
            max_terms: self.opts.max_terms as usize,
            series_tol: self.opts.series_tol,
            form: match self.opts.kernel_form {
                FormArg::Coincident => KernelForm::Coincident,
                FormArg::Antipodal => KernelForm::Antipodal,
            },
            ..KernelConfig::default()
        }
    }

    pub fn transform(&self) -> TransformConfig {
        TransformConfig {
            kernel: self.kernel(),
            exclusion_eps: self.opts.eps,
            pv_eps: self.opts.pv_eps,
            ..TransformConfig::default()
        }
    }

    /// Canonical flags reproducing this run.
    pub fn echo(&self) -> String {
        let o = &self.opts;
        let q: Vec<String> = o.q.iter().map(f64::to_string).collect();
        let mut s = format!(
            "--alpha {} --cap-angle {} --res {} --max-terms {} --series-tol {:e} \
             --fp-tol {:e} --max-iter {} --seed {} --kernel-form {} --points {} --q {} --samples {}",
            format_alpha(o.alpha),
            o.cap_angle,
            self.ladder(),
            o.max_terms,
            o.series_tol,
            o.fp_tol,
            o.max_iter,
            o.seed,
            self.kernel().form.name(),
            o.points,
            q.join(","),
            o.samples,
        );
        if let Some(e) = o.eps {
            let _ = write!(s, " --eps {e}");
        }
        if let Some(e) = o.pv_eps {
            let _ = write!(s, " --pv-eps {e}");
        }
        if o.deterministic {
            s.push_str(" --deterministic");
        }
        s
    }
}

/// 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

struct Output {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Output {
    fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn write(&self, cfg: &RunConfig, extra_meta: &[String]) -> std::io::Result<()> {
        let mut buf: Vec<u8> = Vec::new();
        writeln!(buf, "# sphcl {}", env!("CARGO_PKG_VERSION"))?;
        writeln!(buf, "# command: {}", cfg.command.name())?;
        writeln!(buf, "# config: {}", cfg.echo())?;
        for m in extra_meta {
            writeln!(buf, "# {m}")?;
        }
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            w.write_record(&self.header)?;
            for r in &self.rows {
                w.write_record(r)?;
            }
            w.flush()?;
        }
        match &cfg.opts.out {
            Some(p) => std::fs::write(p, &buf),
            None => std::io::stdout().write_all(&buf),
        }
    }
}

fn timing(cfg: &RunConfig, start: std::time::Instant) -> Vec<String> {
    if cfg.opts.deterministic {
        Vec::new()
    } else {
        vec![format!("elapsed_s: {:.3}", start.elapsed().as_secs_f64())]
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    run(&RunConfig::from_cli(cli))
}

pub fn run(cfg: &RunConfig) -> i32 {
    if cfg.opts.deterministic {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(1).build_global();
    }
    let result = match cfg.command {
        Command::Kernel => cmd_kernel(cfg),
        Command::Verify => cmd_verify(cfg),
        Command::Bvp => cmd_bvp(cfg),
        Command::Beltrami => cmd_beltrami(cfg),
        Command::Info => cmd_info(cfg),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("sphcl: {e}");
            match e {
                Error::Config(_) => EXIT_USAGE,
                _ => EXIT_FAILURE,
            }
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Config(format!("cannot write output: {e}"))
}

/// Kernel values for `υ` approaching the singular point from its far side.
pub fn cmd_kernel(cfg: &RunConfig) -> Result<i32> {
    let start = std::time::Instant::now();
    let kernel = Kernel::new(cfg.kernel())?;
    let mut out = Output::new(&[
        "z",
        "re_scalar",
        "im_scalar",
        "re_e12",
        "im_e12",
        "re_e13",
        "im_e13",
        "re_e23",
        "im_e23",
        "terms_used",
        "converged",
    ]);
    let omega = [0.0, 0.0, 1.0];
    let s = kernel.singular_sign();
    let n = cfg.opts.points;
    for k in 0..n {
        // geodesic distance from the singular point, decreasing
        let d = PI * (1.0 - (k as f64 + 0.5) / n as f64);
        let theta = if s > 0.0 { d } else { PI - d };
        let v = SpherePoint::from_angles(theta, 0.0);
        let kv = kernel.evaluate_series(&omega, &v)?;
        let mut row = vec![fmt17(kernel.argument(&omega, &v))];
        for mask in [0b000, 0b011, 0b101, 0b110] {
            let c = kv.value.get(mask);
            row.push(fmt17(c.re));
            row.push(fmt17(c.im));
        }
        row.push(kv.terms_used.to_string());
        row.push(kv.converged.to_string());
        out.push(row);
    }
    out.write(cfg, &timing(cfg, start)).map_err(io)?;
    Ok(EXIT_OK)
}

fn suite_config(cfg: &RunConfig) -> SuiteConfig {
    SuiteConfig {
        alpha: cfg.opts.alpha,
        cap_angle: cfg.cap_angle_rad(),
        ladder: cfg.ladder().0,
        transform: cfg.transform(),
        samples: cfg.opts.samples as usize,
        ..SuiteConfig::default()
    }
}

fn group_name(g: Group) -> &'static str {
    match g {
        Group::Transforms => "transforms",
        Group::Pi => "pi",
        Group::Hilbert => "hilbert",
    }
}

/// Runs the full suite; exit 0 iff every report behaves as expected.
pub fn cmd_verify(cfg: &RunConfig) -> Result<i32> {
    let start = std::time::Instant::now();
    cfg.kernel().validate()?;
    let suite = suite_config(cfg);
    let fields = TestFields::standard(DomainShape::Cap { theta0: suite.cap_angle }, cfg.opts.seed)?;
    let groups = [Group::Transforms, Group::Pi, Group::Hilbert];
    let reports = run_suite(&suite, &fields, &groups)?;
    let names = identity_names();
    let mut out = Output::new(&[
        "identity",
        "group",
        "negative_control",
        "n_theta",
        "n_phi",
        "mesh_param",
        "residual",
        "verdict",
        "error",
    ]);
    for r in &reports {
        let group = names.iter().find(|n| n.0 == r.name).map_or("", |n| group_name(n.1));
        let verdict = if r.ok() { "pass" } else { "fail" };
        let err = r.error.clone().unwrap_or_default();
        if r.ladder.is_empty() {
            out.push(vec![
                r.name.clone(),
                group.into(),
                r.negative_control.to_string(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                verdict.into(),
                err.clone(),
            ]);
        }
        for (&(nt, np), &(h, res)) in suite.ladder.iter().zip(&r.ladder) {
            out.push(vec![
                r.name.clone(),
                group.into(),
                r.negative_control.to_string(),
                nt.to_string(),
                np.to_string(),
                fmt17(h),
                fmt17(res),
                verdict.into(),
                err.clone(),
            ]);
        }
    }
    let failed: Vec<&IdentityReport> = reports.iter().filter(|r| !r.ok()).collect();
    let mut meta = vec![format!(
        "summary: {} of {} identities pass",
        reports.len() - failed.len(),
        reports.len()
    )];
    meta.extend(timing(cfg, start));
    out.write(cfg, &meta).map_err(io)?;
    for r in &reports {
        let ladder: Vec<String> = r.ladder.iter().map(|l| format!("{:.3e}", l.1)).collect();
        eprintln!(
            "{:5} {:34} {}{}",
            if r.ok() { "PASS" } else { "FAIL" },
            r.name,
            ladder.join(" → "),
            r.error.as_ref().map_or(String::new(), |e| format!(" ({e})")),
        );
    }
    eprintln!("{}", meta[0]);
    Ok(if failed.is_empty() { EXIT_OK } else { EXIT_FAILURE })
}

/// A monogenic field generated from smooth boundary data on a cap slightly
/// larger than `dom`.
pub fn seed_monogenic(kernel: KernelConfig, dom: &SphericalDomain) -> Result<CauchyField> {
    CauchyField::on_cap(kernel, generator_angle(dom), 48, |phi| {
        &Multivector::vector(&[1.0, 0.5 * phi.cos(), -0.3]) + &Multivector::blade(3, 0b011).scale(0.4 * phi.sin())
    })
}

type Truth<'a> = Box<dyn Fn(&[f64]) -> Result<Multivector> + 'a>;

/// Manufactured problems with known solutions: a monogenic recovered from its
/// trace, a bump recovered from its `Γ_α` image, and their sum.
pub fn cmd_bvp(cfg: &RunConfig) -> Result<i32> {
    let start = std::time::Instant::now();
    cfg.kernel().validate()?;
    let theta0 = cfg.cap_angle_rad();
    let alpha = cfg.opts.alpha;
    let tcfg = cfg.transform();
    let fields = TestFields::standard(DomainShape::Cap { theta0 }, cfg.opts.seed)?;
    let bump: BumpField = fields.bump.clone();
    let mut out = Output::new(&[
        "case",
        "n_theta",
        "n_phi",
        "mesh_param",
        "interior_error",
        "operator_residual",
        "trace_residual",
    ]);
    let cases = ["monogenic_trace", "bump_source", "combined"];
    let mut errors: Vec<Vec<(f64, f64)>> = vec![Vec::new(); cases.len()];
    for &(nt, np) in &cfg.ladder().0 {
        let dom = SphericalDomain::cap(theta0, nt, np)?;
        let phi = seed_monogenic(tcfg.kernel, &dom)?;
        let zero = ConstantField(Multivector::zero(3));
        let gbump = OperatorField::gamma(alpha, bump.clone());
        for (k, case) in cases.iter().enumerate() {
            let (g, h, truth): (&dyn AnalyticField, BoundaryData, Truth) =
                match k {
                    0 => (&zero, trace(&phi, &dom)?, Box::new(|p| phi.value(p))),
                    1 => (&gbump, BoundaryData::zeros(&dom), Box::new(|p| bump.value(p))),
                    _ => (
                        &gbump,
                        trace(&phi, &dom)?,
                        Box::new(|p| Ok(&phi.value(p)? + &bump.value(p)?)),
                    ),
                };
            let sol = solve_bvp(&dom, g, &h, alpha, &tcfg)?;
            let margin = 0.29 * theta0;
            let mut err: f64 = 0.0;
            for i in sample_nodes(&dom, cfg.opts.samples as usize, margin) {
                let p = &dom.interior()[i].point;
                let t = truth(p)?;
                err = err.max((&sol.f.values[i] - &t).norm() / (1.0 + t.norm()));
            }
            errors[k].push((dom.mesh_param(), err));
            out.push(vec![
                case.to_string(),
                nt.to_string(),
                np.to_string(),
                fmt17(dom.mesh_param()),
                fmt17(err),
                fmt17(sol.operator_residual),
                fmt17(sol.trace_residual),
            ]);
        }
    }
    let reports: Vec<IdentityReport> = cases
        .iter()
        .zip(errors)
        .map(|(c, l)| IdentityReport::from_ladder(format!("bvp_{c}"), l, false))
        .collect();
    let ok = reports.iter().all(IdentityReport::ok);
    out.write(cfg, &timing(cfg, start)).map_err(io)?;
    for r in &reports {
        eprintln!("{:5} {} final interior error {:.3e}", if r.ok() { "PASS" } else { "FAIL" }, r.name, r.residual);
    }
    Ok(if ok { EXIT_OK } else { EXIT_FAILURE })
}

/// Constant scalar dilatations `q` over the ladder, with a generated
/// monogenic seed.
pub fn cmd_beltrami(cfg: &RunConfig) -> Result<i32> {
    let start = std::time::Instant::now();
    cfg.kernel().validate()?;
    let theta0 = cfg.cap_angle_rad();
    let alpha = cfg.opts.alpha;
    let mut out = Output::new(&[
        "n_theta",
        "n_phi",
        "q_norm",
        "iterations",
        "mean_ratio",
        "be1_residual",
        "converged",
    ]);
    let mut diverged = false;
    for &(nt, np) in &cfg.ladder().0 {
        let dom = SphericalDomain::cap(theta0, nt, np)?;
        let phi: SharedField = Arc::new(seed_monogenic(cfg.kernel(), &dom)?);
        for &qn in &cfg.opts.q {
            let q: SharedField = Arc::new(ConstantField(Multivector::scalar(3, qn)));
            let mut bc = BeltramiConfig::new(&dom, q, phi.clone(), alpha)?;
            bc.fp_tol = cfg.opts.fp_tol;
            bc.max_iter = cfg.opts.max_iter as usize;
            bc.transform = cfg.transform();
            match solve_beltrami(&dom, &bc) {
                Ok(sol) => {
                    let t = &sol.trace;
                    eprintln!(
                        "{nt}:{np} q={qn} iterations {} mean ratio {:.4} be1 {:.3e}{}",
                        t.iterations,
                        t.mean_ratio(),
                        t.be1_residual,
                        if t.mean_ratio() > qn + 0.05 { " (ratio above q + 0.05)" } else { "" }
                    );
                    out.push(vec![
                        nt.to_string(),
                        np.to_string(),
                        fmt17(qn),
                        t.iterations.to_string(),
                        fmt17(t.mean_ratio()),
                        fmt17(t.be1_residual),
                        t.converged.to_string(),
                    ]);
                }
                Err(e @ Error::FixedPointDivergence { .. }) => {
                    eprintln!("{nt}:{np} q={qn}: {e}");
                    diverged = true;
                    out.push(vec![
                        nt.to_string(),
                        np.to_string(),
                        fmt17(qn),
                        String::new(),
                        String::new(),
                        String::new(),
                        "false".into(),
                    ]);
                }
                Err(e) => return Err(e),
            }
        }
    }
    out.write(cfg, &timing(cfg, start)).map_err(io)?;
    Ok(if diverged { EXIT_FAILURE } else { EXIT_OK })
}

pub fn cmd_info(cfg: &RunConfig) -> Result<i32> {
    let mut s = String::new();
    let k = cfg.kernel();
    let _ = writeln!(s, "sphcl {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(s, "config: {}", cfg.echo());
    let _ = writeln!(s, "dimension: {}", k.n);
    let _ = writeln!(s, "kernel form: {} (lambda = {})", k.form.name(), k.lambda());
    let _ = writeln!(s, "kernel order valid: {}", k.validate().map_or_else(|e| e.to_string(), |_| "yes".into()));
    let _ = writeln!(s, "commands: kernel verify bvp beltrami info");
    let _ = writeln!(s, "identities:");
    for (name, group, neg) in identity_names() {
        let _ = writeln!(
            s,
            "  {name} [{}]{}",
            group_name(group),
            if neg { " negative control" } else { "" }
        );
    }
    match &cfg.opts.out {
        Some(p) => std::fs::write(p, s).map_err(io)?,
        None => print!("{s}"),
    }
    Ok(EXIT_OK)
}
