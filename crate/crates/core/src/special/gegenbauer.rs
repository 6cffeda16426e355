//! Gegenbauer functions of complex degree,
//! `C_ν^λ(z) = Γ(ν+2λ)/(Γ(ν+1)Γ(2λ)) · F(−ν, ν+2λ; λ+½; (1−z)/2)`.

use num_complex::Complex64;

use super::gamma::{ln_gamma, nonpositive_integer};
use super::hypergeometric::{hyp2f1, hyp2f1_product, pochhammer, SeriesControl, SeriesResult};
use crate::error::{Error, Result};

fn prefactor(nu: Complex64, lambda: Complex64) -> Result<Complex64> {
    let two_l = 2.0 * lambda;
    if nonpositive_integer(two_l).is_some() {
        return Err(Error::Domain(format!(
            "Gegenbauer order λ = {lambda} has 2λ at a pole of Γ"
        )));
    }
    let top = nu + two_l;
    if nonpositive_integer(nu + 1.0).is_some() {
        if nonpositive_integer(top).is_some() {
            return Err(Error::Domain(format!(
                "Gegenbauer prefactor is 0/0 at ν = {nu}, λ = {lambda}"
            )));
        }
        return Ok(Complex64::new(0.0, 0.0));
    }
    if nonpositive_integer(top).is_some() {
        return Err(Error::Domain(format!(
            "Gegenbauer prefactor Γ(ν+2λ) is singular at ν = {nu}, λ = {lambda}"
        )));
    }
    Ok((ln_gamma(top) - ln_gamma(nu + 1.0) - ln_gamma(two_l)).exp())
}

fn scaled(pre: Complex64, mut r: SeriesResult) -> SeriesResult {
    r.value *= pre;
    r.tail_bound *= pre.norm();
    r
}

/// `C_ν^λ(z)` with the hypergeometric factor summed by the plain product
/// series. Accurate only while `(1−z)/2` stays away from 1.
pub fn gegenbauer_series(
    nu: Complex64,
    lambda: Complex64,
    z: Complex64,
    ctl: SeriesControl,
) -> Result<SeriesResult> {
    let pre = prefactor(nu, lambda)?;
    let d = (1.0 - z) / 2.0;
    let f = hyp2f1_product(-nu, nu + 2.0 * lambda, lambda + 0.5, d, ctl)?;
    Ok(scaled(pre, f))
}

/// `C_ν^λ(z)` valid up to the singular endpoint `z = −1`.
pub fn gegenbauer(
    nu: Complex64,
    lambda: Complex64,
    z: Complex64,
    ctl: SeriesControl,
) -> Result<SeriesResult> {
    let pre = prefactor(nu, lambda)?;
    if pre.norm() == 0.0 {
        return Ok(SeriesResult {
            value: pre,
            terms: 0,
            converged: true,
            diverged: false,
            tail_bound: 0.0,
        });
    }
    let d = (1.0 - z) / 2.0;
    let f = hyp2f1(-nu, nu + 2.0 * lambda, lambda + 0.5, d, ctl)?;
    Ok(scaled(pre, f))
}

/// `k`-th derivative in `z`: `2^k (λ)_k C_{ν−k}^{λ+k}(z)`.
pub fn gegenbauer_derivative(
    nu: Complex64,
    lambda: Complex64,
    z: Complex64,
    k: usize,
    ctl: SeriesControl,
) -> Result<SeriesResult> {
    let scale = pochhammer(lambda, k) * 2f64.powi(k as i32);
    gegenbauer(nu - k as f64, lambda + k as f64, z, ctl).map(|r| scaled(scale, r))
}
