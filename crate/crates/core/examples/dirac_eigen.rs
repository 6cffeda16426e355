//! Eigenfunctions of the spherical Dirac operator: homogeneous monogenic
//! polynomials of degree k satisfy `Γ_ω P = −k P` on the sphere.

use spherical_clifford::field::{AnalyticField, PolynomialField};
use spherical_clifford::geometry::SpherePoint;
use spherical_clifford::operators::{degree_two_monogenics, gamma_omega};
use spherical_clifford::Multivector;

fn main() -> spherical_clifford::Result<()> {
    let p1 = PolynomialField::new(3)
        .with_term(&[1, 0, 0], Multivector::e(3, 1))
        .with_term(&[0, 1, 0], Multivector::e(3, 2).scale(-1.0));
    let w = SpherePoint::from_angles(1.1, 0.4);
    let lhs = gamma_omega(&p1, &w)?;
    println!("degree 1: Γ_ω P = {lhs}\n          −P    = {}", p1.value(w.coords())?.scale(-1.0));

    let basis = degree_two_monogenics()?;
    println!("{} quadratic vector-valued monogenics", basis.len());
    for (k, p) in basis.iter().enumerate() {
        let v = p.value(w.coords())?;
        let err = gamma_omega(p, &w)?.max_abs_diff(&v.scale(-2.0));
        println!("  P{k}: |Γ_ω P + 2P| = {err:.2e}");
    }
    Ok(())
}
