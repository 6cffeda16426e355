//! `Γ_α f = g` in a cap with `f = h` on the boundary, for a known solution
//! `f = φ + bump` where `φ` is monogenic.

use std::f64::consts::PI;

use num_complex::Complex64;
use spherical_clifford::cli::seed_monogenic;
use spherical_clifford::field::AnalyticField;
use spherical_clifford::geometry::{trace, BoundaryData, DomainShape, SphericalDomain};
use spherical_clifford::identities::TestFields;
use spherical_clifford::kernel::KernelConfig;
use spherical_clifford::operators::OperatorField;
use spherical_clifford::solvers::{sample_nodes, solve_bvp};
use spherical_clifford::transforms::TransformConfig;

fn main() -> spherical_clifford::Result<()> {
    let alpha = Complex64::new(0.5, 0.0);
    let cfg = TransformConfig::with_alpha(alpha);
    let bump = TestFields::standard(DomainShape::Cap { theta0: PI / 3.0 }, 7)?.bump;
    for (nt, np) in [(8, 16), (16, 32), (32, 64)] {
        let dom = SphericalDomain::cap(PI / 3.0, nt, np)?;
        let phi = seed_monogenic(KernelConfig::with_alpha(alpha), &dom)?;
        let g = OperatorField::gamma(alpha, &bump);
        let h: BoundaryData = trace(&phi, &dom)?;
        let sol = solve_bvp(&dom, &g, &h, alpha, &cfg)?;
        let mut err: f64 = 0.0;
        for i in sample_nodes(&dom, 10, 0.3) {
            let p = &dom.interior()[i].point;
            let want = &phi.value(p.coords())? + &bump.value(p.coords())?;
            err = err.max((&sol.f.values[i] - &want).norm());
        }
        println!(
            "{nt:3}:{np:<3} error {err:.3e}  Γf−g {:.3e}  trace {:.3e}",
            sol.operator_residual, sol.trace_residual
        );
    }
    Ok(())
}
