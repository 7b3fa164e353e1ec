//! Large-N limit laws: edge profiles, bulk and edge overlap distributions.
//!
//! Edge coordinate `s = √N (r²/2 - 1)`; the spectral edge sits at `r = √2`
//! for every ensemble here. Bulk overlaps scale as `t = Nτ`, edge overlaps
//! as `t = √N σ`.
//!
//! Every `e^{±s²/4}`, `e^{±s²/2}` times `erfc` product is rewritten through
//! `erfcx`, and results are assembled in log space, so nothing overflows
//! for `|s|` up to 50.

use crate::error::{Error, Result};
use crate::specfun::{erfc, erfcx};
use crate::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EnsembleTag {
    /// Complex symmetric matrices, class AI†.
    AiDagger,
    /// Real Ginibre; edge laws refer to the real eigenvalues.
    GinibreReal,
    GinibreComplex,
}

impl EnsembleTag {
    pub const ALL: [EnsembleTag; 3] = [
        EnsembleTag::AiDagger,
        EnsembleTag::GinibreReal,
        EnsembleTag::GinibreComplex,
    ];
}

/// Point at the edge: `s`, plus the overlap scale `σ = t/√N` when present.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeCoordinate<T> {
    pub s: T,
    pub sigma: Option<T>,
}

impl<T: Real> EdgeCoordinate<T> {
    pub fn new(s: T, sigma: Option<T>) -> Result<Self> {
        if let Some(sg) = sigma {
            if !(sg > T::zero()) {
                return Err(Error::domain(format!("sigma must be > 0, got {sg}")));
            }
        }
        Ok(EdgeCoordinate { s, sigma })
    }

    /// `s = √N (r²/2 - 1)`.
    pub fn from_radius(n: u32, r: T) -> Self {
        EdgeCoordinate {
            s: edge_s(n, r),
            sigma: None,
        }
    }
}

/// Optional correction applied to the AI† edge overlap law.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeCorrection {
    None,
    /// Keep the exact `e^{xy/2}` exponent at this `N` instead of its limit.
    Refined { n: u32 },
}

pub fn edge_s<T: Real>(n: u32, r: T) -> T {
    T::from_u32(n).unwrap().sqrt() * (r * r * T::lit(0.5) - T::one())
}

fn sqrt_half_pi<T: Real>() -> T {
    (T::FRAC_PI_2()).sqrt()
}


/// `ln Θ(s)` for the tagged ensemble.
pub fn ln_edge_profile<T: Real>(tag: EnsembleTag, s: T) -> T {
    let half = T::lit(0.5);
    let quarter = T::lit(0.25);
    let u = s * T::FRAC_1_SQRT_2();
    match tag {
        EnsembleTag::AiDagger => {
            let c = T::lit(0.5) * T::FRAC_1_SQRT_2(); // 1/(2√2)
            if s >= T::zero() {
                // Θ = e^{-s²/4} [ ¼ e^{-s²/4} erfcx(u) + c·erfc(-s/2)·(1 - √(π/2)(s/2) erfcx(u)) ]
                let ex = erfcx(u);
                let inner = quarter * (-s * s * quarter).exp() * ex
                    + c * erfc(-s * half) * (T::one() - sqrt_half_pi::<T>() * s * half * ex);
                -s * s * quarter + inner.ln()
            } else {
                // erfc(-s/2) e^{-s²/4} = e^{-s²/2} erfcx(-s/2)
                let v = quarter * erfc(u)
                    + c * erfcx(-s * half)
                        * ((-s * s * half).exp() - sqrt_half_pi::<T>() * s * half * erfc(u));
                v.ln()
            }
        }
        EnsembleTag::GinibreComplex => {
            if s >= T::zero() {
                -s * s * half + (half * erfcx(u)).ln()
            } else {
                (half * erfc(u)).ln()
            }
        }
        EnsembleTag::GinibreReal => {
            // Θ₁ = ½[erfc(s/√2) + (1 + erf(s/2))/√2 · e^{-s²/4}],  1 + erf(s/2) = erfc(-s/2)
            if s >= T::zero() {
                let inner = (-s * s * quarter).exp() * erfcx(u)
                    + erfc(-s * half) * T::FRAC_1_SQRT_2();
                -s * s * quarter + (half * inner).ln()
            } else {
                let v = erfc(u) + erfc(-s * half) * T::FRAC_1_SQRT_2() * (-s * s * quarter).exp();
                (half * v).ln()
            }
        }
    }
}

/// Edge profile `Θ(s)`: 1 deep in the bulk, 0 far outside.
pub fn edge_profile<T: Real>(tag: EnsembleTag, s: T) -> T {
    ln_edge_profile(tag, s).exp()
}

/// `ρ_{N≫1}(r) = r Θ_AI†(√N (r²/2 - 1))`.
pub fn density_large_n<T: Real>(n: u32, r: T) -> Result<T> {
    if n < 2 {
        return Err(Error::domain(format!("matrix size must be >= 2, got {n}")));
    }
    if !(r >= T::zero()) {
        return Err(Error::domain(format!("radius must be >= 0, got {r}")));
    }
    if r == T::zero() {
        return Ok(T::zero());
    }
    Ok(r * edge_profile(EnsembleTag::AiDagger, edge_s(n, r)))
}

/// Triangular limit `r·1[r ≤ √2]`.
pub fn density_triangular<T: Real>(r: T) -> T {
    if r >= T::zero() && r <= T::SQRT_2() {
        r
    } else {
        T::zero()
    }
}

/// `⟨τ⟩ = ½(1 - r²/2)`, the bulk mean of `τ = t/N`.
pub fn mean_tau<T: Real>(r: T) -> Result<T> {
    if !(r >= T::zero()) || r >= T::SQRT_2() {
        return Err(Error::domain(format!(
            "bulk law needs 0 <= r < sqrt(2), got r={r}"
        )));
    }
    Ok(T::lit(0.5) * (T::one() - r * r * T::lit(0.5)))
}

/// Bulk limit `⟨τ⟩²/τ³ e^{-⟨τ⟩/τ}`: inverse gamma, shape 2, scale `⟨τ⟩`.
pub fn bulk_overlap_law<T: Real>(r: T, tau: T) -> Result<T> {
    let m = mean_tau(r)?;
    if !(tau > T::zero()) {
        return Err(Error::domain(format!("tau must be > 0, got {tau}")));
    }
    Ok((T::lit(2.0) * m.ln() - T::lit(3.0) * tau.ln() - m / tau).exp())
}

/// CDF of the bulk law: `(1 + ⟨τ⟩/τ) e^{-⟨τ⟩/τ}`.
pub fn bulk_overlap_cdf<T: Real>(r: T, tau: T) -> Result<T> {
    let m = mean_tau(r)?;
    if tau <= T::zero() {
        return Ok(T::zero());
    }
    if tau.is_infinite() {
        return Ok(T::one());
    }
    let q = m / tau;
    Ok((T::one() + q) * (-q).exp())
}

/// ln of the exact `e^{xy/2}` at `x = N(1 + s/√N)`, `y = 1/(1 + √N σ)`,
/// written as `(1/2σ)(√N + (s - 1/σ)/(1 + 1/(√N σ)))`.
pub fn ln_refined_edge_factor<T: Real>(n: u32, s: T, sigma: T) -> Result<T> {
    if n < 2 {
        return Err(Error::domain(format!("matrix size must be >= 2, got {n}")));
    }
    if !(sigma > T::zero()) {
        return Err(Error::domain(format!("sigma must be > 0, got {sigma}")));
    }
    let sn = T::from_u32(n).unwrap().sqrt();
    let inv = sigma.recip();
    Ok(T::lit(0.5) * inv * (sn + (s - inv) / (T::one() + inv / sn)))
}

/// Limit form of the same exponent: `√N/(2σ) + s/(2σ) - 1/(2σ²)`.
pub fn ln_limit_edge_factor<T: Real>(n: u32, s: T, sigma: T) -> T {
    let sn = T::from_u32(n).unwrap().sqrt();
    let half = T::lit(0.5);
    half * sn / sigma + half * s / sigma - half / (sigma * sigma)
}

/// Edge overlap density in `σ` at edge position `s`, normalized in `σ`.
pub fn edge_overlap_law<T: Real>(tag: EnsembleTag, s: T, sigma: T) -> Result<T> {
    edge_overlap_law_with(tag, s, sigma, EdgeCorrection::None)
}

pub fn edge_overlap_law_with<T: Real>(
    tag: EnsembleTag,
    s: T,
    sigma: T,
    correction: EdgeCorrection,
) -> Result<T> {
    if !(sigma > T::zero()) {
        return Err(Error::domain(format!("sigma must be > 0, got {sigma}")));
    }
    if sigma.is_infinite() {
        return Ok(T::zero());
    }
    let half = T::lit(0.5);
    let quarter = T::lit(0.25);
    let inv = sigma.recip();
    let u = s * T::FRAC_1_SQRT_2();
    let sqrt_2_over_pi = (T::lit(2.0) / T::PI()).sqrt();
    let inv_sqrt_2pi = T::one() / T::TAU().sqrt();
    let ln_theta = ln_edge_profile(tag, s);

    // bracket = e^{-scale} · scaled, with scale chosen so scaled is O(1)
    let (ln_out, scaled) = match tag {
        EnsembleTag::AiDagger => {
            let (scale, ec) = if s >= T::zero() {
                (s * s * half, erfcx(u))
            } else {
                (T::zero(), erfc(u))
            };
            let gauss = if s >= T::zero() {
                T::one()
            } else {
                (-s * s * half).exp()
            };
            let scaled =
                sqrt_2_over_pi * (inv - s) * gauss + (T::one() - s * inv + s * s) * ec;
            let mut ln_pref = -quarter * inv * inv + half * s * inv
                - (T::lit(8.0) * sigma.powi(3)).ln()
                - ln_theta
                - scale;
            if let EdgeCorrection::Refined { n } = correction {
                ln_pref = ln_pref + ln_refined_edge_factor(n, s, sigma)?
                    - ln_limit_edge_factor(n, s, sigma);
            }
            (ln_pref, scaled)
        }
        EnsembleTag::GinibreReal => {
            let (scale, ec, gauss) = if s >= T::zero() {
                (s * s * half, erfcx(u), T::one())
            } else {
                (T::zero(), erfc(u), (-s * s * half).exp())
            };
            let scaled = gauss * inv_sqrt_2pi + (T::one() - s * sigma) * half * inv * ec;
            let ln_pref = -quarter * inv * inv + half * s * inv
                - (T::lit(2.0) * sigma * sigma).ln()
                - ln_theta
                - scale;
            (ln_pref, scaled)
        }
        EnsembleTag::GinibreComplex => {
            // bracket = e^{-s²}[ a/π - b/√(2π)·E + c/2·E² ] with E = e^{s²/2} erfc(s/√2)
            let (scale, big_e) = if s >= T::zero() {
                (s * s, erfcx(u))
            } else {
                (T::zero(), erfc(u))
            };
            let (g1, g2) = if s >= T::zero() {
                (T::one(), T::one())
            } else {
                ((-s * s).exp(), (-s * s * half).exp())
            };
            let a = T::lit(2.0) + s * inv - inv * inv;
            let b = T::lit(3.0) * s - (T::one() - s * s) * inv - s * inv * inv;
            let d = s - inv;
            let c = d * d - T::one();
            let scaled =
                a * g1 / T::PI() - b * g2 * inv_sqrt_2pi * big_e + half * c * big_e * big_e;
            let ln_pref = -half * inv * inv + s * inv
                - (T::lit(2.0) * sigma.powi(3)).ln()
                - ln_theta
                - scale;
            (ln_pref, scaled)
        }
    };
    if tag != EnsembleTag::AiDagger && correction != EdgeCorrection::None {
        return Err(Error::domain("refined edge correction exists only for AI†"));
    }
    if scaled <= T::zero() {
        // positive analytically; rounding at tiny σ can leave a signed zero
        return Ok(T::zero());
    }
    Ok((ln_out + scaled.ln()).exp())
}

/// Asymptotic forms of the ingredients of `ρ(r)` and `P_r(t)`, with their
/// exact counterparts. Used only to cross-check the special functions.
pub mod verification {
    use super::*;
    use crate::specfun::{ln_gamma, ln_reg_gamma_lower, ln_reg_gamma_upper, GammaArgs};

    #[derive(Clone, Copy, Debug, PartialEq, Eq)]
    pub enum PieceKind {
        /// `k(Np)/N^{N/2}`
        K,
        /// `γ((N+3)/2, Np/2)` over its power normalizer
        GammaLower,
        /// `Γ(N, Np)/Γ(N)`
        GammaUpper,
        /// `P₀(t)` at `t = Nτ` or `t = √N σ`
        P0,
        /// `e^{xy/2}` at `x = Np`, `y = 1/(1+t)`
        ExpFactor,
    }

    #[derive(Clone, Copy, Debug, PartialEq, Eq)]
    pub enum Regime {
        /// `p ∈ [0,1)` fixed, `t = Nτ`
        Bulk,
        /// `p = 1 + s/√N`, `t = √N σ`
        Edge,
    }

    /// Arguments: `position` is `p` (bulk) or `s` (edge); `scale` is `τ` or
    /// `σ` and is required by `P0` and `ExpFactor`.
    #[derive(Clone, Copy, Debug)]
    pub struct PieceArgs<T> {
        pub kind: PieceKind,
        pub regime: Regime,
        pub n: u32,
        pub position: T,
        pub scale: Option<T>,
    }

    struct Resolved<T> {
        nf: T,
        p: T,
        t: Option<T>,
    }

    fn resolve<T: Real>(a: &PieceArgs<T>) -> Result<Resolved<T>> {
        if a.n < 2 {
            return Err(Error::domain(format!("matrix size must be >= 2, got {}", a.n)));
        }
        let nf = T::from_u32(a.n).unwrap();
        let p = match a.regime {
            Regime::Bulk => {
                if !(a.position >= T::zero() && a.position < T::one()) {
                    return Err(Error::domain(format!(
                        "bulk position p must lie in [0,1), got {}",
                        a.position
                    )));
                }
                a.position
            }
            Regime::Edge => T::one() + a.position / nf.sqrt(),
        };
        let needs_scale = matches!(a.kind, PieceKind::P0 | PieceKind::ExpFactor);
        let t = match (needs_scale, a.scale) {
            (false, _) => None,
            (true, None) => {
                return Err(Error::domain("P0 and ExpFactor pieces need a scale (tau or sigma)"))
            }
            (true, Some(sc)) => {
                if !(sc > T::zero()) {
                    return Err(Error::domain(format!("scale must be > 0, got {sc}")));
                }
                Some(match a.regime {
                    Regime::Bulk => nf * sc,
                    Regime::Edge => nf.sqrt() * sc,
                })
            }
        };
        Ok(Resolved { nf, p, t })
    }

    fn lower_normalizer_power<T: Real>(regime: Regime, nf: T) -> T {
        match regime {
            Regime::Bulk => (nf + T::one()) * T::lit(0.5),
            Regime::Edge => (nf + T::lit(2.0)) * T::lit(0.5),
        }
    }

    /// ln of the leading-order asymptotic form.
    pub fn asymptotic_piece<T: Real>(a: PieceArgs<T>) -> Result<T> {
        let Resolved { nf, p, .. } = resolve(&a)?;
        let half = T::lit(0.5);
        let quarter = T::lit(0.25);
        let s = a.position;
        Ok(match (a.kind, a.regime) {
            (PieceKind::K, Regime::Bulk) => nf * half * p.ln() - nf * p * half,
            (PieceKind::K, Regime::Edge) => -nf * half - s * s * quarter,
            (PieceKind::GammaLower, Regime::Bulk) => {
                (nf + T::lit(3.0)) * half * p.ln() - nf * p * half - (T::one() - p).ln()
            }
            (PieceKind::GammaLower, Regime::Edge) => {
                -nf * half + (sqrt_half_pi::<T>() * erfc(-s * half)).ln()
            }
            (PieceKind::GammaUpper, Regime::Bulk) => T::zero(),
            (PieceKind::GammaUpper, Regime::Edge) => ln_edge_profile(EnsembleTag::GinibreComplex, s),
            (PieceKind::P0, Regime::Bulk) => {
                let tau = a.scale.unwrap();
                -(T::lit(4.0) * nf * tau.powi(3)).ln() - half / tau
            }
            (PieceKind::P0, Regime::Edge) => {
                let sg = a.scale.unwrap();
                half * nf.ln() - (T::lit(4.0) * sg.powi(3)).ln() - nf.sqrt() * half / sg
                    + quarter / (sg * sg)
            }
            (PieceKind::ExpFactor, Regime::Bulk) => p * half / a.scale.unwrap(),
            (PieceKind::ExpFactor, Regime::Edge) => ln_limit_edge_factor(a.n, s, a.scale.unwrap()),
        })
    }

    /// ln of the exact quantity the asymptotic form approximates.
    pub fn exact_piece<T: Real>(a: PieceArgs<T>) -> Result<T> {
        let Resolved { nf, p, t } = resolve(&a)?;
        let half = T::lit(0.5);
        Ok(match a.kind {
            PieceKind::K => nf * half * p.ln() - nf * p * half,
            PieceKind::GammaLower => {
                let shape = (nf + T::lit(3.0)) * half;
                let ln_lower = ln_reg_gamma_lower(GammaArgs::new(shape, nf * p * half)?)?
                    + ln_gamma(shape)?;
                ln_lower - lower_normalizer_power(a.regime, nf) * (nf * half).ln()
            }
            PieceKind::GammaUpper => ln_reg_gamma_upper(GammaArgs::new(nf, nf * p)?)?,
            PieceKind::P0 => {
                let ctx = crate::laws::exact::LawContext::<T>::new(a.n)?;
                ctx.ln_overlap_density_origin(t.unwrap())?
            }
            PieceKind::ExpFactor => nf * p * half / (T::one() + t.unwrap()),
        })
    }

    /// `ln(exact) - ln(asymptotic)`.
    pub fn log_ratio<T: Real>(a: PieceArgs<T>) -> Result<T> {
        Ok(exact_piece(a)? - asymptotic_piece(a)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ginibre_complex_profile_at_zero() {
        assert!((edge_profile(EnsembleTag::GinibreComplex, 0.0_f64) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn profiles_stay_finite_far_out() {
        for tag in EnsembleTag::ALL {
            for s in [-50.0_f64, -20.0, 20.0, 50.0] {
                let v = edge_profile(tag, s);
                assert!(v.is_finite() && v >= 0.0, "{tag:?} s={s}: {v}");
                assert!(ln_edge_profile(tag, s).is_finite());
            }
        }
    }

    #[test]
    fn bulk_law_domain() {
        assert!(bulk_overlap_law(1.5_f64, 1.0).is_err());
        assert!(bulk_overlap_law(std::f64::consts::SQRT_2, 1.0).is_err());
        assert!(bulk_overlap_law(0.0_f64, 0.0).is_err());
        assert!(bulk_overlap_law(0.0_f64, 0.5).unwrap() > 0.0);
    }

    #[test]
    fn edge_law_domain() {
        assert!(edge_overlap_law(EnsembleTag::AiDagger, 0.0_f64, 0.0).is_err());
        assert!(edge_overlap_law(EnsembleTag::GinibreReal, 0.0_f64, -1.0).is_err());
        assert!(ln_refined_edge_factor(100, 0.0_f64, 0.0).is_err());
        assert!(edge_overlap_law_with(
            EnsembleTag::GinibreComplex,
            0.0_f64,
            1.0,
            EdgeCorrection::Refined { n: 100 }
        )
        .is_err());
    }

    #[test]
    fn refined_factor_finite_for_small_sigma() {
        let v = ln_refined_edge_factor(100, 0.0_f64, 1e-3).unwrap();
        assert!(v.is_finite());
    }

    #[test]
    fn large_n_density_at_zero() {
        assert_eq!(density_large_n(50, 0.0_f64).unwrap(), 0.0);
        assert!(density_large_n(1, 1.0_f64).is_err());
        assert_eq!(density_triangular(1.5_f64), 0.0);
        assert_eq!(density_triangular(1.0_f64), 1.0);
    }
}
