//! Products, conjugation and vector inverses in `Cl_3(ℂ)`.

use num_complex::Complex64;
use spherical_clifford::Multivector;

fn main() -> spherical_clifford::Result<()> {
    let e1 = Multivector::e(3, 1);
    let e2 = Multivector::e(3, 2);
    println!("e1 e1 = {}", &e1 * &e1);
    println!("e1 e2 = {}, e2 e1 = {}", &e1 * &e2, &e2 * &e1);

    let x = Multivector::vector(&[1.0, 2.0, 0.0]);
    let y = Multivector::vector(&[3.0, 0.0, 1.0]);
    let (dot, wedge) = x.vector_parts(&y)?;
    println!("xy = {}  (scalar {}, bivector {wedge})", &x * &y, dot.re);

    let inv = x.vector_inverse()?;
    println!("x x^-1 = {}", &x * &inv);

    let mut a = Multivector::e(3, 3).scale(Complex64::new(0.0, 2.0));
    a.set(0b011, 1.5);
    println!("a = {a}\nconj(a) = {}", a.conjugate());
    println!("[a conj(a)]_0 = {}", a.clifford_norm_sq());
    Ok(())
}
