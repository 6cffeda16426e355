//! Borel–Pompeiu residual `f − F(trace f) − T(Γ_α f)` for a smooth field on a
//! 60° cap under mesh refinement.

use std::f64::consts::PI;

use num_complex::Complex64;
use spherical_clifford::field::PolynomialField;
use spherical_clifford::geometry::SphericalDomain;
use spherical_clifford::transforms::{borel_pompeiu_residual, TransformConfig};
use spherical_clifford::Multivector;

fn main() -> spherical_clifford::Result<()> {
    let f = PolynomialField::new(3)
        .with_term(&[0, 0, 0], Multivector::one(3))
        .with_term(&[1, 0, 0], Multivector::e(3, 2))
        .with_term(&[0, 1, 1], Multivector::blade(3, 0b011).scale(0.5));
    let alpha = Complex64::new(0.5, 0.0);
    let cfg = TransformConfig::with_alpha(alpha);
    for (nt, np) in [(8, 16), (16, 32), (32, 64)] {
        let dom = SphericalDomain::cap(PI / 3.0, nt, np)?;
        let samples = dom.sample_points(10, 0.3);
        let r = borel_pompeiu_residual(&dom, &f, alpha, &samples, &cfg)?;
        println!("{nt:3}:{np:<3} h = {:.4}  residual {r:.3e}", dom.mesh_param());
    }
    Ok(())
}
