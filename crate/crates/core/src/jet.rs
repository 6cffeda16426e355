//! Multivector values bundled with their ambient partial derivatives, and
//! the first-order operators `s·Γ_ω + c` acting on them.
//!
//! Fields on the sphere are extended to a neighbourhood in `R^n`; the
//! angular derivatives `L_ij = x_i ∂_j − x_j ∂_i` only see the restriction to
//! the sphere, so any smooth extension gives the same operator values.

use num_complex::Complex64;

use crate::clifford::{blade_sign, Multivector};

#[derive(Clone, Debug)]
pub struct Jet {
    pub value: Multivector,
    /// `∂/∂x_j` for `j = 0..n`.
    pub grad: Vec<Multivector>,
    /// Row-major `∂²/∂x_j∂x_k`; empty when second derivatives were not
    /// requested.
    pub hess: Vec<Multivector>,
}

impl Jet {
    pub fn constant(value: Multivector) -> Self {
        let n = value.dim();
        Self {
            grad: vec![Multivector::zero(n); n],
            hess: vec![Multivector::zero(n); n * n],
            value,
        }
    }

    pub fn dim(&self) -> usize {
        self.value.dim()
    }

    pub fn order(&self) -> usize {
        if !self.hess.is_empty() {
            2
        } else if !self.grad.is_empty() {
            1
        } else {
            0
        }
    }

    pub fn hess_entry(&self, j: usize, k: usize) -> &Multivector {
        &self.hess[j * self.dim() + k]
    }

    pub fn conjugate(&self) -> Self {
        Self {
            value: self.value.conjugate(),
            grad: self.grad.iter().map(Multivector::conjugate).collect(),
            hess: self.hess.iter().map(Multivector::conjugate).collect(),
        }
    }

    /// Left multiplication of every component by a constant.
    pub fn left_mul(&self, c: &Multivector) -> Self {
        Self {
            value: c * &self.value,
            grad: self.grad.iter().map(|g| c * g).collect(),
            hess: self.hess.iter().map(|h| c * h).collect(),
        }
    }

    /// Right multiplication of every component by a constant.
    pub fn right_mul(&self, c: &Multivector) -> Self {
        Self {
            value: &self.value * c,
            grad: self.grad.iter().map(|g| g * c).collect(),
            hess: self.hess.iter().map(|h| h * c).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            value: self.value.scale(s),
            grad: self.grad.iter().map(|g| g.scale(s)).collect(),
            hess: self.hess.iter().map(|h| h.scale(s)).collect(),
        }
    }

    /// `self += s · other`, truncating to the lower of the two orders.
    pub fn axpy(&mut self, s: Complex64, other: &Jet) {
        self.value.axpy(s, &other.value);
        self.grad.truncate(other.grad.len());
        for (g, o) in self.grad.iter_mut().zip(&other.grad) {
            g.axpy(s, o);
        }
        self.hess.truncate(other.hess.len());
        for (h, o) in self.hess.iter_mut().zip(&other.hess) {
            h.axpy(s, o);
        }
    }

    /// Jet of the pointwise product `self · other` (Leibniz rule).
    pub fn product(&self, other: &Jet) -> Jet {
        let n = self.dim();
        let order = self.order().min(other.order());
        let value = &self.value * &other.value;
        let mut grad = Vec::new();
        let mut hess = Vec::new();
        if order >= 1 {
            grad = (0..n)
                .map(|j| &(&self.grad[j] * &other.value) + &(&self.value * &other.grad[j]))
                .collect();
        }
        if order >= 2 {
            for j in 0..n {
                for k in 0..n {
                    let mut h = &self.hess[j * n + k] * &other.value;
                    h += &(&self.grad[j] * &other.grad[k]);
                    h += &(&self.grad[k] * &other.grad[j]);
                    h += &(&self.value * &other.hess[j * n + k]);
                    hess.push(h);
                }
            }
        }
        Jet { value, grad, hess }
    }
}

/// `acc += coef · e_mask · m` for a single basis blade on the left.
#[inline]
pub(crate) fn add_blade_left(acc: &mut Multivector, mask: usize, coef: Complex64, m: &Multivector) {
    let src = m.coeffs();
    let dst = acc.coeffs_mut();
    for (b, &cb) in src.iter().enumerate() {
        if cb.re == 0.0 && cb.im == 0.0 {
            continue;
        }
        dst[mask ^ b] += coef * cb * blade_sign(mask, b);
    }
}

/// `Γ_ω F = −Σ_{i<j} e_ij (x_i ∂_j F − x_j ∂_i F)` from ambient partials.
pub fn gamma_omega_from_grad(x: &[f64], grad: &[Multivector]) -> Multivector {
    let n = x.len();
    let mut out = Multivector::zero(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let mask = (1 << i) | (1 << j);
            add_blade_left(&mut out, mask, Complex64::new(-x[i], 0.0), &grad[j]);
            add_blade_left(&mut out, mask, Complex64::new(x[j], 0.0), &grad[i]);
        }
    }
    out
}

/// A first-order operator `sign·Γ_ω + shift` acting from the left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracOp {
    pub sign: f64,
    pub shift: Complex64,
}

impl DiracOp {
    pub fn omega() -> Self {
        Self {
            sign: 1.0,
            shift: Complex64::new(0.0, 0.0),
        }
    }

    /// `Γ_α = Γ_ω + α`.
    pub fn gamma(alpha: Complex64) -> Self {
        Self {
            sign: 1.0,
            shift: alpha,
        }
    }

    /// `Γ̄_α = −Γ_ω + ᾱ`.
    pub fn gamma_bar(alpha: Complex64) -> Self {
        Self {
            sign: -1.0,
            shift: alpha.conj(),
        }
    }

    pub fn apply(&self, x: &[f64], jet: &Jet) -> Multivector {
        let mut out = gamma_omega_from_grad(x, &jet.grad);
        if self.sign != 1.0 {
            out = out.scale(self.sign);
        }
        out.axpy(self.shift, &jet.value);
        out
    }

    /// Jet of `A F`, one order lower than the input jet.
    pub fn apply_jet(&self, x: &[f64], jet: &Jet) -> Jet {
        let n = x.len();
        let value = self.apply(x, jet);
        let mut grad = Vec::new();
        if jet.order() >= 2 {
            for k in 0..n {
                // ∂_k of −Σ e_ij (x_i ∂_j F − x_j ∂_i F)
                let mut g = Multivector::zero(n);
                let s = Complex64::new(-self.sign, 0.0);
                for i in 0..n {
                    for j in (i + 1)..n {
                        let mask = (1 << i) | (1 << j);
                        let mut inner = jet.hess[k * n + j].scale(x[i]);
                        inner.axpy(Complex64::new(-x[j], 0.0), &jet.hess[k * n + i]);
                        if k == i {
                            inner += &jet.grad[j];
                        }
                        if k == j {
                            inner -= &jet.grad[i];
                        }
                        add_blade_left(&mut g, mask, s, &inner);
                    }
                }
                g.axpy(self.shift, &jet.grad[k]);
                grad.push(g);
            }
        }
        Jet {
            value,
            grad,
            hess: Vec::new(),
        }
    }
}
