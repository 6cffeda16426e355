//! A few π-operator identities over a short refinement ladder, including the
//! negative control that drops the boundary term.

use std::f64::consts::PI;

use spherical_clifford::geometry::DomainShape;
use spherical_clifford::identities::{run_named, SuiteConfig, TestFields};

fn main() -> spherical_clifford::Result<()> {
    let cfg = SuiteConfig {
        ladder: vec![(8, 16), (16, 32), (32, 64)],
        ..SuiteConfig::default()
    };
    let fields = TestFields::standard(DomainShape::Cap { theta0: PI / 3.0 }, 7)?;
    let names = [
        "gamma_pi_smooth",
        "pi_gamma_smooth",
        "pi_gamma_without_cauchy_smooth",
        "cauchy_of_pi_smooth",
        "pi_gamma_compact_bump",
        "monogenicity_preservation",
    ];
    for r in run_named(&cfg, &fields, &names)? {
        let ladder: Vec<String> = r.ladder.iter().map(|(_, x)| format!("{x:.3e}")).collect();
        let tag = if r.negative_control { " (negative control)" } else { "" };
        println!("{:4} {:32} {}{tag}", if r.ok() { "ok" } else { "FAIL" }, r.name, ladder.join("  "));
    }
    Ok(())
}
