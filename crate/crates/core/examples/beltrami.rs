//! Fixed-point solution of `Γ_α f = q Γ̄_α f` with `f = φ + T h` for
//! constant dilatations.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use spherical_clifford::cli::seed_monogenic;
use spherical_clifford::field::{ConstantField, SharedField};
use spherical_clifford::geometry::SphericalDomain;
use spherical_clifford::kernel::KernelConfig;
use spherical_clifford::solvers::{solve_beltrami, BeltramiConfig};
use spherical_clifford::Multivector;

fn main() -> spherical_clifford::Result<()> {
    let alpha = Complex64::new(0.5, 0.0);
    let dom = SphericalDomain::cap(PI / 3.0, 12, 24)?;
    let phi: SharedField = Arc::new(seed_monogenic(KernelConfig::with_alpha(alpha), &dom)?);
    for q in [0.0, 0.1, 0.3, 0.5] {
        let dil: SharedField = Arc::new(ConstantField(Multivector::scalar(3, q)));
        let cfg = BeltramiConfig::new(&dom, dil, phi.clone(), alpha)?;
        let sol = solve_beltrami(&dom, &cfg)?;
        let t = &sol.trace;
        println!(
            "q = {q:.1}: {:3} iterations, mean contraction {:.3}, equation residual {:.2e}",
            t.iterations,
            t.mean_ratio(),
            t.be1_residual
        );
    }
    Ok(())
}
