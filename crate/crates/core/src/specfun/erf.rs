//! Error function family.
//!
//! `|x| < SERIES_LIMIT` uses the positive-term series
//! `erf(x) = 2x/√π · e^{-x²} Σ (2x²)^n / (2n+1)!!`; above it `erfcx` comes
//! from the Laplace continued fraction, which converges in under 100 terms
//! there and stays finite up to `x ~ 1e150`.

use crate::Real;

const SERIES_LIMIT: f64 = 1.5;

fn erf_series<T: Real>(x: T) -> T {
    let two_x2 = T::lit(2.0) * x * x;
    let mut term = T::one();
    let mut sum = T::one();
    let mut n = 0usize;
    loop {
        n += 1;
        term = term * two_x2 / T::from_usize_lossy(2 * n + 1);
        sum = sum + term;
        if term < sum * T::epsilon() * T::lit(0.25) || n > 200 {
            break;
        }
    }
    T::FRAC_2_SQRT_PI() * x * (-x * x).exp() * sum
}

/// `erfcx(x)` for `x ≥ SERIES_LIMIT` by modified Lentz on
/// `√π erfcx(x) = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))`.
fn erfcx_fraction<T: Real>(x: T) -> T {
    let tiny = T::min_positive_value() / T::epsilon();
    let mut f = x;
    let mut c = x;
    let mut d = T::zero();
    for n in 1..1000usize {
        let a = T::from_usize_lossy(n) * T::lit(0.5);
        d = x + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        d = d.recip();
        c = x + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        let delta = c * d;
        f = f * delta;
        if (delta - T::one()).abs() <= T::epsilon() {
            break;
        }
    }
    (T::FRAC_2_SQRT_PI() * T::lit(0.5)) / f
}

/// `e^{-x²}` with the square split so the exponent carries no rounding
/// error from forming `x²`.
fn exp_neg_square<T: Real>(x: T) -> T {
    let sixteen = T::lit(16.0);
    let hi = (x * sixteen).trunc() / sixteen;
    let lo = x - hi;
    (-hi * hi).exp() * (-lo * (x + hi)).exp()
}

fn exp_square<T: Real>(x: T) -> T {
    let sixteen = T::lit(16.0);
    let hi = (x * sixteen).trunc() / sixteen;
    let lo = x - hi;
    (hi * hi).exp() * (lo * (x + hi)).exp()
}

/// Error function.
pub fn erf<T: Real>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    if x.abs() < T::lit(SERIES_LIMIT) {
        erf_series(x)
    } else if x > T::zero() {
        T::one() - erfc(x)
    } else {
        erfc(-x) - T::one()
    }
}

/// Complementary error function `1 - erf(x)`.
pub fn erfc<T: Real>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    if x < T::zero() {
        return T::lit(2.0) - erfc(-x);
    }
    if x < T::lit(SERIES_LIMIT) {
        T::one() - erf_series(x)
    } else if x > T::lit(30.0) {
        // below the smallest subnormal in f64
        let v = exp_neg_square(x);
        if v == T::zero() {
            T::zero()
        } else {
            v * erfcx_fraction(x)
        }
    } else {
        exp_neg_square(x) * erfcx_fraction(x)
    }
}

/// Scaled complementary error function `e^{x²} erfc(x)`.
pub fn erfcx<T: Real>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    if x < T::zero() {
        let e = exp_square(x);
        return T::lit(2.0) * e - erfcx(-x);
    }
    if x < T::lit(SERIES_LIMIT) {
        exp_square(x) * (T::one() - erf_series(x))
    } else if x > T::lit(1.0e8) {
        // two-term asymptotic series, the fraction is exact to rounding here
        let inv2 = (x * x).recip();
        (T::FRAC_2_SQRT_PI() * T::lit(0.5)) / x * (T::one() - T::lit(0.5) * inv2)
    } else {
        erfcx_fraction(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn trivial_values() {
        assert_eq!(erfc(0.0_f64), 1.0);
        assert!((erfc(-1.3_f64) - (2.0 - erfc(1.3_f64))).abs() < 1e-15);
        assert_eq!(erfcx(0.0_f64), 1.0);
        assert!(erf(0.0_f64).abs() < 1e-300);
    }

    #[test]
    fn erfc_reference_values() {
        let cases = [
            (0.3, 0.671_373_240_540_872_572_4),
            (1.2, 0.089_686_021_770_364_619_76),
            (1.49, 0.035_102_135_156_795_787_9),
            (1.51, 0.032_723_251_871_288_364_09),
            (2.5, 4.069_520_174_449_589_396e-4),
            (5.0, 1.537_459_794_428_034_850e-12),
            (12.0, 1.356_261_169_205_904_213e-64),
            (26.5, 2.210_907_664_263_734_276e-307),
            (-2.0, 1.995_322_265_018_952_734),
            (-0.7, 1.677_801_193_837_418_473),
        ];
        for (x, want) in cases {
            let got = erfc(x);
            assert!(rel(got, want) < 1e-13, "erfc({x}) = {got:e}, want {want:e}");
        }
        assert!(rel(erf(0.2_f64), 0.222_702_589_210_478_454_1) < 1e-14);
    }

    #[test]
    fn erfcx_reference_values() {
        let cases = [
            (0.7, 0.525_930_337_349_440_941_1),
            (1.4, 0.338_743_540_679_734_632_6),
            (3.0, 0.179_001_151_181_389_950_4),
            (25.0, 0.022_549_572_432_641_358_94),
            (1.0e4, 5.641_895_807_268_084_115e-5),
            (1.0e8, 5.641_895_835_477_562_587e-9),
            (-1.5, 18.653_886_256_262_733_94),
        ];
        for (x, want) in cases {
            let got = erfcx(x);
            assert!(rel(got, want) < 1e-13, "erfcx({x}) = {got:e}, want {want:e}");
        }
    }

    #[test]
    fn erfcx_leading_asymptotics() {
        // next-order term: erfcx(x) x √π = 1 - 1/(2x²) + ...
        let x = 1.0e4_f64;
        let lead = erfcx(x) * x * std::f64::consts::PI.sqrt();
        assert!((lead - 1.0).abs() < 1e-7);
        assert!((lead - (1.0 - 0.5 / (x * x))).abs() < 1e-13);
        assert!(erfcx(1.0e12_f64).is_finite());
    }

    #[test]
    fn erfcx_matches_definition() {
        for i in 0..=250 {
            let x = i as f64 * 0.1;
            let direct = (x * x).exp() * erfc(x);
            assert!(rel(erfcx(x), direct) < 1e-12, "x={x}");
        }
    }

    #[test]
    fn continuity_at_branch_point() {
        let lo = erfc(SERIES_LIMIT - 1e-12);
        let hi = erfc(SERIES_LIMIT);
        assert!(rel(lo, hi) < 1e-10);
    }

    #[test]
    fn f32_smoke() {
        assert!((erfc(1.0_f32) - 0.157_299_2).abs() < 1e-6);
        assert!((erfcx(30.0_f32) * 30.0 * std::f32::consts::PI.sqrt() - 1.0).abs() < 1e-3);
    }
}
