//! Special functions: gamma family, Gauss hypergeometric series and
//! Gegenbauer functions of complex degree.

pub mod gamma;
pub mod gegenbauer;
pub mod hypergeometric;

pub use gamma::{digamma, gamma, ln_gamma, rgamma, sphere_area};
pub use gegenbauer::{gegenbauer, gegenbauer_derivative, gegenbauer_series};
pub use hypergeometric::{hyp2f1, hyp2f1_product, pochhammer, product_terms, SeriesControl, SeriesResult};
