//! Exact finite-N laws for complex symmetric Gaussian matrices `J = X + iY`
//! with `X`, `Y` independent GOE of size `N ≥ 2`.
//!
//! With `x = N r²/2` and `y = |vᵀv|² = 1/(1+t)`:
//!
//! ```text
//! g(x,y) = e^{xy/2} / (N(N-1)) · { x^N e^{-x} (N-1-x+xy)
//!          + Γ(N,x) [ (N-1)(N-2x+xy) + (1-y) x² ] }
//!
//! ρ(r) = 2√N/Γ(N+2) · { √(x/2) [k² + (N - x/2) Γ(N,x)]
//!        + 2^{N/2} γ((N+3)/2, x/2) [k + (N-1-x) Γ(N,x) / (2k)] },  k = x^{N/2} e^{-x/2}
//!
//! P₀(t) = (N²-1)/(4(1+t)³) · (t/(1+t))^{(N-3)/2}
//! P_r(t) = N² r / (Γ(N+2) ρ(r)) · g(N r²/2, 1/(1+t)) · P₀(t)
//! ```
//!
//! All factors are combined as `(ln|v|, sign)` pairs; the raw terms overflow
//! `f64` once `N` reaches a few hundred.

use crate::error::{Error, Result};
use crate::specfun::{
    integrate, ln_gamma, ln_reg_gamma_lower, ln_reg_gamma_upper, ln_reg_gamma_upper_int,
    signed_log_sum, GammaArgs, SignedLog, UpperLimit,
};
use crate::Real;

/// Below this radius `P_r(t)` returns the analytic `r → 0` limit `P₀(t)`.
pub const R_MIN: f64 = 1.0e-8;

/// Largest `N` for which `Γ(N,x)` uses the exact finite sum.
pub const FINITE_SUM_MAX_N: u32 = 50;

const QUAD_REL: f64 = 1.0e-11;
const QUAD_ABS: f64 = 1.0e-13;

/// Matrix size and the log-normalizers shared by every exact law.
#[derive(Clone, Copy, Debug)]
pub struct LawContext<T> {
    n: u32,
    /// `ln(2√N / Γ(N+2))`
    ln_norm_density: T,
    /// `ln(N² / Γ(N+2))`
    ln_norm_overlap: T,
    ln_gamma_n: T,
}

/// A point `(r, t)`: radius `r = |z|` and nonorthogonality `t = 1/|vᵀv|² - 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OverlapPoint<T> {
    pub r: T,
    pub t: T,
}

impl<T: Real> OverlapPoint<T> {
    pub fn new(r: T, t: T) -> Result<Self> {
        if !(r >= T::zero()) {
            return Err(Error::domain(format!("radius must be >= 0, got {r}")));
        }
        if !(t >= T::zero()) {
            return Err(Error::domain(format!("nonorthogonality t must be >= 0, got {t}")));
        }
        Ok(OverlapPoint { r, t })
    }

    /// `y = 1/(1+t) = |vᵀv|²`.
    pub fn y(&self) -> T {
        (T::one() + self.t).recip()
    }
}

impl<T: Real> LawContext<T> {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("matrix size must be >= 2, got {n}")));
        }
        let nf = T::from_u32(n).unwrap();
        let ln_gamma_n2 = ln_gamma(nf + T::lit(2.0))?;
        let ctx = LawContext {
            n,
            ln_norm_density: (T::lit(2.0) * nf.sqrt()).ln() - ln_gamma_n2,
            ln_norm_overlap: T::lit(2.0) * nf.ln() - ln_gamma_n2,
            ln_gamma_n: ln_gamma(nf)?,
        };
        debug_assert!(ctx.ln_norm_density.is_finite() && ctx.ln_norm_overlap.is_finite());
        Ok(ctx)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    fn nf(&self) -> T {
        T::from_u32(self.n).unwrap()
    }

    pub fn ln_norm_density(&self) -> T {
        self.ln_norm_density
    }

    pub fn ln_norm_overlap(&self) -> T {
        self.ln_norm_overlap
    }

    /// `x = N r² / 2`.
    pub fn x_of_r(&self, r: T) -> T {
        self.nf() * r * r * T::lit(0.5)
    }

    /// `ln Γ(N, x)`.
    pub fn ln_upper_gamma(&self, x: T) -> Result<T> {
        let ln_q = if self.n <= FINITE_SUM_MAX_N {
            ln_reg_gamma_upper_int(self.n, x)?
        } else {
            ln_reg_gamma_upper(GammaArgs::new(self.nf(), x)?)?
        };
        Ok(ln_q + self.ln_gamma_n)
    }

    /// `ln k(x) = (N/2) ln x - x/2`.
    pub fn ln_k(&self, x: T) -> T {
        T::lit(0.5) * (self.nf() * x.ln() - x)
    }

    /// `g(x, y)` as a signed log; the sign is always `+1`.
    pub fn g_factor(&self, x: T, y: T) -> Result<SignedLog<T>> {
        if !(x >= T::zero()) || !x.is_finite() {
            return Err(Error::domain(format!("g_factor needs x >= 0, got {x}")));
        }
        if !(y >= T::zero() && y <= T::one()) {
            return Err(Error::domain(format!("g_factor needs 0 <= y <= 1, got {y}")));
        }
        let ln_gn = self.ln_upper_gamma(x)?;
        Ok(self.g_with_gamma(x, y, ln_gn))
    }

    fn g_with_gamma(&self, x: T, y: T, ln_upper: T) -> SignedLog<T> {
        let n = self.nf();
        let one = T::one();
        let two = T::lit(2.0);
        let lead = if x == T::zero() {
            SignedLog::zero()
        } else {
            SignedLog::positive(n * x.ln() - x).mul_value(n - one - x + x * y)
        };
        let bracket = (n - one) * (n - two * x + x * y) + (one - y) * x * x;
        let tail = SignedLog::positive(ln_upper).mul_value(bracket);
        let brace = signed_log_sum(&[lead, tail]);
        let out = brace.scale_ln(x * y * T::lit(0.5) - (n * (n - one)).ln());
        assert!(
            out.sign > 0,
            "g(x={x}, y={y}) evaluated non-positive for N={}",
            self.n
        );
        out
    }

    /// `ln ρ(r)`; `-∞` at `r = 0`.
    pub fn ln_radial_density(&self, r: T) -> Result<T> {
        if !(r >= T::zero()) {
            return Err(Error::domain(format!("radius must be >= 0, got {r}")));
        }
        if r == T::zero() {
            return Ok(T::neg_infinity());
        }
        let n = self.nf();
        let half = T::lit(0.5);
        let x = self.x_of_r(r);
        if x.is_infinite() {
            return Ok(T::neg_infinity());
        }
        let ln_k = self.ln_k(x);
        let ln_gn = self.ln_upper_gamma(x)?;
        let a = (n + T::lit(3.0)) * half;
        let ln_lower = ln_reg_gamma_lower(GammaArgs::new(a, x * half)?)? + ln_gamma(a)?;
        let ln_sqrt_x2 = half * (x * half).ln();
        let ln_pow2 = n * half * T::LN_2();

        let terms = [
            SignedLog::positive(ln_sqrt_x2 + T::lit(2.0) * ln_k),
            SignedLog::positive(ln_sqrt_x2 + ln_gn).mul_value(n - x * half),
            SignedLog::positive(ln_pow2 + ln_lower + ln_k),
            SignedLog::positive(ln_pow2 + ln_lower + ln_gn - ln_k - T::LN_2())
                .mul_value(n - T::one() - x),
        ];
        let s = signed_log_sum(&terms);
        if s.sign <= 0 {
            // only reachable once every term has underflowed in the far tail
            return Ok(T::neg_infinity());
        }
        Ok(s.ln_abs + self.ln_norm_density)
    }

    /// Radial density `ρ(r)`, normalized on `[0, ∞)`.
    pub fn radial_density(&self, r: T) -> Result<T> {
        Ok(self.ln_radial_density(r)?.exp())
    }

    /// `F(r) = ∫₀^r ρ`.
    pub fn radial_cdf(&self, r: T) -> Result<T> {
        if !(r >= T::zero()) {
            return Err(Error::domain(format!("radius must be >= 0, got {r}")));
        }
        if r == T::zero() {
            return Ok(T::zero());
        }
        let edge = T::SQRT_2();
        let f = |q: T| self.radial_density(q).unwrap_or(T::nan());
        let rel = T::lit(QUAD_REL);
        let abs = T::lit(QUAD_ABS);
        let total = if r.is_infinite() {
            integrate(f, T::zero(), edge, rel, abs)?.value
                + integrate(f, edge, UpperLimit::Infinite, rel, abs)?.value
        } else if r <= edge {
            integrate(f, T::zero(), r, rel, abs)?.value
        } else {
            integrate(f, T::zero(), edge, rel, abs)?.value + integrate(f, edge, r, rel, abs)?.value
        };
        Ok(total.min(T::one()).max(T::zero()))
    }

    /// `∫₀^∞ ρ(r) dr`; reported rather than forced to one.
    pub fn radial_normalization(&self) -> Result<T> {
        let edge = T::SQRT_2();
        let f = |q: T| self.radial_density(q).unwrap_or(T::nan());
        let rel = T::lit(QUAD_REL);
        let abs = T::lit(QUAD_ABS);
        Ok(integrate(f, T::zero(), edge, rel, abs)?.value
            + integrate(f, edge, UpperLimit::Infinite, rel, abs)?.value)
    }

    /// `F(r_i)` for ascending radii, integrating only between neighbours.
    pub fn radial_cdf_sorted(&self, radii: &[T]) -> Result<Vec<T>> {
        let mut out = Vec::with_capacity(radii.len());
        let mut acc = T::zero();
        let mut prev = T::zero();
        let f = |q: T| self.radial_density(q).unwrap_or(T::nan());
        for &r in radii {
            if !(r >= prev) {
                return Err(Error::domain("radial_cdf_sorted needs ascending, non-negative radii"));
            }
            if r > prev {
                acc = acc + integrate(f, prev, r, T::lit(1e-10), T::lit(1e-14))?.value;
                prev = r;
            }
            out.push(acc.min(T::one()));
        }
        Ok(out)
    }

    /// `ln P₀(t)`.
    pub fn ln_overlap_density_origin(&self, t: T) -> Result<T> {
        if !(t >= T::zero()) {
            return Err(Error::domain(format!("t must be >= 0, got {t}")));
        }
        let n = self.nf();
        let expo = (n - T::lit(3.0)) * T::lit(0.5);
        let ln_ratio = if expo == T::zero() {
            T::zero()
        } else if t == T::zero() {
            if expo > T::zero() {
                T::neg_infinity()
            } else {
                T::infinity()
            }
        } else if t.is_infinite() {
            T::zero()
        } else {
            expo * (t.ln() - t.ln_1p())
        };
        let ln_pref = ((n * n - T::one()) * T::lit(0.25)).ln();
        Ok(ln_pref - T::lit(3.0) * t.ln_1p() + ln_ratio)
    }

    /// `P₀(t)`, the overlap law at the spectral origin.
    pub fn overlap_density_origin(&self, t: T) -> Result<T> {
        Ok(self.ln_overlap_density_origin(t)?.exp())
    }

    /// Overlap law at fixed radius with the `r`-dependent factors cached.
    pub fn overlap_law(&self, r: T) -> Result<OverlapLaw<T>> {
        OverlapLaw::new(*self, r)
    }

    /// `P_r(t)`.
    pub fn overlap_density(&self, p: OverlapPoint<T>) -> Result<T> {
        self.overlap_law(p.r)?.density(p.t)
    }

    /// `∫₀^t P_r(t') dt'`.
    pub fn overlap_cdf(&self, p: OverlapPoint<T>) -> Result<T> {
        self.overlap_law(p.r)?.cdf(p.t)
    }

    /// Mean of `t` under `P_r`. Higher moments diverge (tail `~ t^{-3}`).
    pub fn overlap_mean(&self, r: T) -> Result<T> {
        self.overlap_law(r)?.mean()
    }

    /// `ρ(r) P_r(t) = N² r / Γ(N+2) · g(N r²/2, 1/(1+t)) · P₀(t)`.
    pub fn joint_density(&self, p: OverlapPoint<T>) -> Result<T> {
        if p.r == T::zero() {
            return Ok(T::zero());
        }
        let x = self.x_of_r(p.r);
        let g = self.g_factor(x, p.y())?;
        let ln = self.ln_norm_overlap + p.r.ln() + g.ln_abs + self.ln_overlap_density_origin(p.t)?;
        Ok(ln.exp())
    }
}

/// `P_r(t)` at one radius. Integrals run in `y = 1/(1+t)`, where the
/// density becomes `h(y) = P_r(1/y - 1)/y²` on `(0, 1]` with no heavy tail.
#[derive(Clone, Copy, Debug)]
pub struct OverlapLaw<T> {
    ctx: LawContext<T>,
    r: T,
    x: T,
    ln_upper: T,
    /// `ln(N² r / (Γ(N+2) ρ(r)))`; unused at the origin
    ln_prefactor: T,
    at_origin: bool,
}

impl<T: Real> OverlapLaw<T> {
    pub fn new(ctx: LawContext<T>, r: T) -> Result<Self> {
        if !(r >= T::zero()) || !r.is_finite() {
            return Err(Error::domain(format!("radius must be finite and >= 0, got {r}")));
        }
        if r < T::lit(R_MIN) {
            return Ok(OverlapLaw {
                ctx,
                r,
                x: T::zero(),
                ln_upper: ctx.ln_gamma_n,
                ln_prefactor: T::zero(),
                at_origin: true,
            });
        }
        let x = ctx.x_of_r(r);
        let ln_upper = ctx.ln_upper_gamma(x)?;
        let ln_rho = ctx.ln_radial_density(r)?;
        if !ln_rho.is_finite() {
            return Err(Error::domain(format!(
                "radial density underflows at r={r} for N={}",
                ctx.n
            )));
        }
        Ok(OverlapLaw {
            ctx,
            r,
            x,
            ln_upper,
            ln_prefactor: ctx.ln_norm_overlap + r.ln() - ln_rho,
            at_origin: false,
        })
    }

    pub fn radius(&self) -> T {
        self.r
    }

    /// `ln(P_r(t)/P₀(t))`.
    fn ln_ratio(&self, y: T) -> T {
        if self.at_origin {
            T::zero()
        } else {
            self.ln_prefactor + self.ctx.g_with_gamma(self.x, y, self.ln_upper).ln_abs
        }
    }

    pub fn ln_density(&self, t: T) -> Result<T> {
        let ln_p0 = self.ctx.ln_overlap_density_origin(t)?;
        let y = (T::one() + t).recip();
        Ok(ln_p0 + self.ln_ratio(y))
    }

    pub fn density(&self, t: T) -> Result<T> {
        Ok(self.ln_density(t)?.exp())
    }

    /// `h(y) = P_r(1/y - 1) / y²`.
    pub fn density_in_y(&self, y: T) -> T {
        if y <= T::zero() || y > T::one() {
            return T::zero();
        }
        let n = self.ctx.nf();
        let one_m = T::one() - y;
        let expo = (n - T::lit(3.0)) * T::lit(0.5);
        let ln_tail = if expo == T::zero() {
            T::zero()
        } else if one_m == T::zero() {
            if expo > T::zero() {
                return T::zero();
            } else {
                return T::infinity();
            }
        } else {
            expo * one_m.ln()
        };
        let ln_p0_y = ((n * n - T::one()) * T::lit(0.25)).ln() + y.ln() + ln_tail;
        (ln_p0_y + self.ln_ratio(y)).exp()
    }

    /// `∫₀^t P_r`.
    pub fn cdf(&self, t: T) -> Result<T> {
        if !(t >= T::zero()) {
            return Err(Error::domain(format!("t must be >= 0, got {t}")));
        }
        if t == T::zero() {
            return Ok(T::zero());
        }
        let y0 = (T::one() + t).recip();
        let v = integrate(
            |y| self.density_in_y(y),
            y0,
            T::one(),
            T::lit(1e-10),
            T::lit(1e-13),
        )?
        .value;
        Ok(v.min(T::one()).max(T::zero()))
    }

    /// `F(t_i)` for ascending `t`, integrating between neighbours in `y`.
    pub fn cdf_sorted(&self, ts: &[T]) -> Result<Vec<T>> {
        let mut ys: Vec<T> = Vec::with_capacity(ts.len());
        let mut prev_t = T::zero();
        for &t in ts {
            if !(t >= prev_t) {
                return Err(Error::domain("cdf_sorted needs ascending, non-negative t"));
            }
            prev_t = t;
            ys.push((T::one() + t).recip());
        }
        let mut out = Vec::with_capacity(ts.len());
        let mut acc = T::zero();
        let mut upper = T::one();
        for &y in &ys {
            if y < upper {
                acc = acc
                    + integrate(|u| self.density_in_y(u), y, upper, T::lit(1e-9), T::lit(1e-14))?
                        .value;
                upper = y;
            }
            out.push(acc.min(T::one()));
        }
        Ok(out)
    }

    /// `∫₀^∞ P_r(t) dt`; the law is normalized, this reports the residual.
    pub fn normalization(&self) -> Result<T> {
        Ok(integrate(
            |y| self.density_in_y(y),
            T::zero(),
            T::one(),
            T::lit(1e-11),
            T::lit(1e-14),
        )?
        .value)
    }

    /// `∫ t P_r(t) dt = ∫₀¹ (1-y)/y · h(y) dy`.
    pub fn mean(&self) -> Result<T> {
        let f = |y: T| {
            if y <= T::zero() {
                T::zero()
            } else {
                (T::one() - y) / y * self.density_in_y(y)
            }
        };
        Ok(integrate(f, T::zero(), T::one(), T::lit(1e-10), T::lit(1e-14))?.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: u32) -> LawContext<f64> {
        LawContext::new(n).unwrap()
    }

    #[test]
    fn context_rejects_small_n() {
        assert!(LawContext::<f64>::new(1).is_err());
        assert!(LawContext::<f64>::new(0).is_err());
    }

    #[test]
    fn g_at_origin_is_gamma_n() {
        for n in [2u32, 3, 7, 60, 400] {
            let c = ctx(n);
            for y in [0.0, 0.3, 1.0] {
                let g = c.g_factor(0.0, y).unwrap();
                let want = ln_gamma(n as f64).unwrap();
                assert!((g.ln_abs - want).abs() < 1e-12 * want.abs().max(1.0), "n={n} y={y}");
            }
        }
    }

    #[test]
    fn g_domain_errors() {
        let c = ctx(4);
        assert!(c.g_factor(-1.0, 0.5).is_err());
        assert!(c.g_factor(1.0, 1.5).is_err());
        assert!(c.g_factor(1.0, -0.1).is_err());
    }

    #[test]
    fn radial_density_vanishes_at_origin() {
        assert_eq!(ctx(5).radial_density(0.0).unwrap(), 0.0);
        assert_eq!(ctx(5).radial_cdf(0.0).unwrap(), 0.0);
    }

    #[test]
    fn p0_at_n3() {
        let c = ctx(3);
        assert!((c.overlap_density_origin(0.0).unwrap() - 2.0).abs() < 1e-15);
        assert!((c.overlap_density_origin(1.0).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn p0_n2_singular_at_zero() {
        assert!(ctx(2).overlap_density_origin(0.0).unwrap().is_infinite());
        assert_eq!(ctx(5).overlap_density_origin(0.0).unwrap(), 0.0);
    }

    #[test]
    fn overlap_below_r_min_is_origin_law() {
        let c = ctx(6);
        let p = OverlapPoint::new(1e-9, 2.5).unwrap();
        assert_eq!(
            c.overlap_density(p).unwrap(),
            c.overlap_density_origin(2.5).unwrap()
        );
    }

    #[test]
    fn overlap_point_validation() {
        assert!(OverlapPoint::new(-0.1, 1.0).is_err());
        assert!(OverlapPoint::new(0.1, -1.0).is_err());
        assert!(OverlapPoint::new(0.1_f64, f64::NAN).is_err());
    }

    #[test]
    fn overlap_cdf_endpoints() {
        let c = ctx(10);
        let law = c.overlap_law(1.0).unwrap();
        assert_eq!(law.cdf(0.0).unwrap(), 0.0);
        assert!((law.cdf(f64::INFINITY).unwrap() - 1.0).abs() < 1e-7);
    }

    #[test]
    fn cdf_sorted_agrees_with_pointwise() {
        let law = ctx(7).overlap_law(0.8).unwrap();
        let ts = [0.1, 0.5, 2.0, 9.0, 100.0];
        let batch = law.cdf_sorted(&ts).unwrap();
        for (t, b) in ts.iter().zip(&batch) {
            assert!((law.cdf(*t).unwrap() - b).abs() < 1e-8);
        }
        let c = ctx(7);
        let rs = [0.2, 0.9, 1.3, 2.0];
        let batch = c.radial_cdf_sorted(&rs).unwrap();
        for (r, b) in rs.iter().zip(&batch) {
            assert!((c.radial_cdf(*r).unwrap() - b).abs() < 1e-9);
        }
    }

    #[test]
    fn marginal_over_t_returns_density() {
        let c = ctx(4);
        let r = 1.0;
        let m = integrate(
            |y: f64| {
                let t = 1.0 / y - 1.0;
                c.joint_density(OverlapPoint::new(r, t).unwrap()).unwrap() / (y * y)
            },
            0.0,
            1.0,
            1e-12,
            1e-15,
        )
        .unwrap()
        .value;
        assert!((m - c.radial_density(r).unwrap()).abs() < 1e-8);
    }
}
