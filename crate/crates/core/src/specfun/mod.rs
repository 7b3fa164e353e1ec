//! Special functions and adaptive quadrature underlying the analytic laws.
//!
//! Everything here is pure: no caches, no shared state.

mod erf;
mod gamma;
mod quadrature;

pub use erf::{erf, erfc, erfcx};
pub use gamma::{
    ln_gamma, ln_gamma_correction, ln_reg_gamma_lower, ln_reg_gamma_upper, ln_reg_gamma_upper_int,
    log1pmx, reg_gamma_lower, reg_gamma_upper, GammaArgs, ASYMPTOTIC_SHAPE, STIRLING_THRESHOLD,
};
pub use quadrature::{integrate, integrate_with, QuadratureConfig, QuadratureResult, UpperLimit};

use crate::Real;

/// A real number stored as `(ln|v|, sign)`, for factors that overflow in
/// plain double precision.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignedLog<T> {
    pub ln_abs: T,
    pub sign: i8,
}

impl<T: Real> SignedLog<T> {
    pub fn zero() -> Self {
        SignedLog {
            ln_abs: T::neg_infinity(),
            sign: 0,
        }
    }

    pub fn positive(ln_abs: T) -> Self {
        SignedLog { ln_abs, sign: 1 }
    }

    pub fn from_value(v: T) -> Self {
        if v == T::zero() {
            Self::zero()
        } else {
            SignedLog {
                ln_abs: v.abs().ln(),
                sign: if v > T::zero() { 1 } else { -1 },
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn value(&self) -> T {
        match self.sign {
            0 => T::zero(),
            s if s > 0 => self.ln_abs.exp(),
            _ => -self.ln_abs.exp(),
        }
    }

    pub fn mul(self, other: Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        SignedLog {
            ln_abs: self.ln_abs + other.ln_abs,
            sign: self.sign * other.sign,
        }
    }

    pub fn scale_ln(self, ln_factor: T) -> Self {
        if self.is_zero() {
            return self;
        }
        SignedLog {
            ln_abs: self.ln_abs + ln_factor,
            sign: self.sign,
        }
    }

    pub fn mul_value(self, v: T) -> Self {
        self.mul(Self::from_value(v))
    }
}

/// Signed log-sum-exp: `Σ sign_i·exp(ln_i)` as a [`SignedLog`].
pub fn signed_log_sum<T: Real>(terms: &[SignedLog<T>]) -> SignedLog<T> {
    let max = terms
        .iter()
        .filter(|t| !t.is_zero())
        .map(|t| t.ln_abs)
        .fold(T::neg_infinity(), T::max);
    if max == T::neg_infinity() {
        return SignedLog::zero();
    }
    let acc: T = terms
        .iter()
        .filter(|t| !t.is_zero())
        .map(|t| {
            let m = (t.ln_abs - max).exp();
            if t.sign > 0 {
                m
            } else {
                -m
            }
        })
        .sum();
    SignedLog::from_value(acc).scale_ln(max)
}

/// `ln Σ exp(v_i)` for finite or `-inf` entries.
pub fn log_sum_exp<T: Real>(values: &[T]) -> T {
    let max = values.iter().copied().fold(T::neg_infinity(), T::max);
    if max == T::neg_infinity() {
        return max;
    }
    let s: T = values.iter().map(|&v| (v - max).exp()).sum();
    max + s.ln()
}
