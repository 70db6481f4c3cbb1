//! Forward-mode automatic differentiation over a generic scalar.
//!
//! Model log-densities are written once, generically over [`Scalar`], and
//! evaluated either with `f64` (plain value) or with [`Dual`] numbers (value
//! plus one directional derivative). Gradients of a d-dimensional function
//! cost d forward passes; latent dimensions here are tiny (at most three),
//! so this is both simple and fast.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Scalar arithmetic required by generic log-density code.
pub trait Scalar:
    Copy
    + std::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(v: f64) -> Self;
    /// The underlying value (primal part for duals). Branching in generic
    /// code compares values, which fixes a subgradient at kinks.
    fn value(self) -> f64;
    fn ln(self) -> Self;
    fn exp(self) -> Self;
    fn sqrt(self) -> Self;
    fn powi(self, n: i32) -> Self;

    fn max_by_value(self, other: Self) -> Self {
        if self.value() >= other.value() {
            self
        } else {
            other
        }
    }
}

/// Shorthand for lifting a constant into a generic scalar.
#[inline]
pub fn c<S: Scalar>(v: f64) -> S {
    S::from_f64(v)
}

impl Scalar for f64 {
    #[inline]
    fn from_f64(v: f64) -> Self {
        v
    }
    #[inline]
    fn value(self) -> f64 {
        self
    }
    #[inline]
    fn ln(self) -> Self {
        if self > 0.0 {
            f64::ln(self)
        } else {
            f64::NEG_INFINITY
        }
    }
    #[inline]
    fn exp(self) -> Self {
        f64::exp(self)
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
}

/// A dual number: value and one directional derivative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual {
    pub re: f64,
    pub dx: f64,
}

impl Dual {
    pub fn constant(v: f64) -> Self {
        Dual { re: v, dx: 0.0 }
    }

    pub fn variable(v: f64) -> Self {
        Dual { re: v, dx: 1.0 }
    }
}

impl Add for Dual {
    type Output = Dual;
    #[inline]
    fn add(self, rhs: Dual) -> Dual {
        Dual {
            re: self.re + rhs.re,
            dx: self.dx + rhs.dx,
        }
    }
}

impl Sub for Dual {
    type Output = Dual;
    #[inline]
    fn sub(self, rhs: Dual) -> Dual {
        Dual {
            re: self.re - rhs.re,
            dx: self.dx - rhs.dx,
        }
    }
}

impl Mul for Dual {
    type Output = Dual;
    #[inline]
    fn mul(self, rhs: Dual) -> Dual {
        Dual {
            re: self.re * rhs.re,
            dx: self.re * rhs.dx + self.dx * rhs.re,
        }
    }
}

impl Div for Dual {
    type Output = Dual;
    #[inline]
    fn div(self, rhs: Dual) -> Dual {
        Dual {
            re: self.re / rhs.re,
            dx: (self.dx * rhs.re - self.re * rhs.dx) / (rhs.re * rhs.re),
        }
    }
}

impl Neg for Dual {
    type Output = Dual;
    #[inline]
    fn neg(self) -> Dual {
        Dual {
            re: -self.re,
            dx: -self.dx,
        }
    }
}

impl Scalar for Dual {
    #[inline]
    fn from_f64(v: f64) -> Self {
        Dual::constant(v)
    }
    #[inline]
    fn value(self) -> f64 {
        self.re
    }

    #[inline]
    fn ln(self) -> Self {
        // ln of a non-positive value is -inf with the derivative dropped: the
        // consumer treats a non-finite log-density as out of support.
        if self.re > 0.0 {
            Dual {
                re: self.re.ln(),
                dx: self.dx / self.re,
            }
        } else {
            Dual {
                re: f64::NEG_INFINITY,
                dx: 0.0,
            }
        }
    }

    #[inline]
    fn exp(self) -> Self {
        let e = self.re.exp();
        Dual {
            re: e,
            dx: e * self.dx,
        }
    }

    #[inline]
    fn sqrt(self) -> Self {
        let s = self.re.sqrt();
        Dual {
            re: s,
            dx: self.dx / (2.0 * s),
        }
    }

    #[inline]
    fn powi(self, n: i32) -> Self {
        Dual {
            re: self.re.powi(n),
            dx: n as f64 * self.re.powi(n - 1) * self.dx,
        }
    }
}

/// Value and gradient of `f` at `x` via one forward pass per coordinate.
pub fn value_and_grad<F>(f: F, x: &[f64]) -> (f64, Vec<f64>)
where
    F: Fn(&[Dual]) -> Dual,
{
    let mut grad = vec![0.0; x.len()];
    let mut value = if x.is_empty() {
        f(&[]).re
    } else {
        f64::NAN
    };
    let mut args: Vec<Dual> = x.iter().map(|&v| Dual::constant(v)).collect();
    for i in 0..x.len() {
        args[i].dx = 1.0;
        let out = f(&args);
        args[i].dx = 0.0;
        value = out.re;
        grad[i] = out.dx;
    }
    (value, grad)
}

/// Central finite-difference gradient of `f` at `x` with step `h`.
pub fn central_difference_grad<F>(f: F, x: &[f64], h: f64) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let mut point = x.to_vec();
    let mut grad = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        point[i] = x[i] + h;
        let plus = f(&point);
        point[i] = x[i] - h;
        let minus = f(&point);
        point[i] = x[i];
        grad.push((plus - minus) / (2.0 * h));
    }
    grad
}

/// Numerically stable log(exp(a) + exp(b)), generic over the scalar.
pub fn log_sum_exp2<S: Scalar>(a: S, b: S) -> S {
    let (hi, lo) = if a.value() >= b.value() { (a, b) } else { (b, a) };
    if hi.value() == f64::NEG_INFINITY {
        return c(f64::NEG_INFINITY);
    }
    hi + ((lo - hi).exp() + c(1.0)).ln()
}

/// Stable logistic function.
pub fn sigmoid<S: Scalar>(t: S) -> S {
    if t.value() >= 0.0 {
        c::<S>(1.0) / (c::<S>(1.0) + (-t).exp())
    } else {
        let e = t.exp();
        e / (c::<S>(1.0) + e)
    }
}

/// Stable log of the logistic function.
pub fn log_sigmoid<S: Scalar>(t: S) -> S {
    if t.value() >= 0.0 {
        -((-t).exp() + c(1.0)).ln()
    } else {
        t - (t.exp() + c(1.0)).ln()
    }
}
