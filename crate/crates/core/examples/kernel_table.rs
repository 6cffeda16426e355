//! The Cauchy kernel along a meridian, with the number of series terms it
//! needed, for both kernel forms.

use num_complex::Complex64;
use spherical_clifford::geometry::SpherePoint;
use spherical_clifford::kernel::{Kernel, KernelConfig, KernelForm};

fn main() -> spherical_clifford::Result<()> {
    let omega = [0.0, 0.0, 1.0];
    for form in [KernelForm::Coincident, KernelForm::Antipodal] {
        let kernel = Kernel::new(KernelConfig {
            form,
            ..KernelConfig::with_alpha(Complex64::new(0.5, 0.25))
        })?;
        println!("{} form, singular at {}", form.name(), if kernel.singular_sign() > 0.0 { "ω" } else { "−ω" });
        println!("{:>8} {:>24} {:>24} {:>6}", "theta", "scalar", "e13", "terms");
        for k in 1..=8 {
            let theta = k as f64 * 0.35;
            let v = SpherePoint::from_angles(theta, 0.0);
            let kv = kernel.evaluate_series(&omega, &v)?;
            println!(
                "{theta:8.3} {:>24.6e} {:>24.6e} {:>6}",
                kv.value.get(0),
                kv.value.get(0b101),
                kv.terms_used
            );
        }
    }
    Ok(())
}
