//! Orthogonal splitting `f = Pf + Qf` onto a discrete Bergman subspace of
//! `ker Γ_α` on a cap.

use std::f64::consts::PI;

use num_complex::Complex64;
use spherical_clifford::geometry::{DomainShape, SampledField, SphericalDomain};
use spherical_clifford::identities::TestFields;
use spherical_clifford::pi_operator::{l2_norm, scalar_inner, BergmanBasis};
use spherical_clifford::transforms::TransformConfig;

fn main() -> spherical_clifford::Result<()> {
    let alpha = Complex64::new(0.5, 0.0);
    let dom = SphericalDomain::cap(PI / 3.0, 16, 32)?;
    let basis = BergmanBasis::new(&dom, alpha, 24, &TransformConfig::with_alpha(alpha))?;
    println!("basis size {} (requested {})", basis.len(), basis.requested());

    let fields = TestFields::standard(DomainShape::Cap { theta0: PI / 3.0 }, 7)?;
    let f = SampledField::from_analytic(&dom, &fields.smooth)?;
    let (pf, qf) = basis.project(&dom, &f)?;
    let (ppf, _) = basis.project(&dom, &pf)?;
    println!("‖f‖ = {:.6}, ‖Pf‖ = {:.6}, ‖Qf‖ = {:.6}", l2_norm(&dom, &f)?, l2_norm(&dom, &pf)?, l2_norm(&dom, &qf)?);
    println!("‖P²f − Pf‖ = {:.2e}", l2_norm(&dom, &ppf.sub(&pf))?);
    println!("[⟨Pf, Qf⟩]_0 = {:.2e}", scalar_inner(&dom, &pf.values, &qf.values).norm());
    Ok(())
}
