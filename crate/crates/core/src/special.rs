//! Normal and Student-t primitives used by the distribution catalog.

use libm::{erfc, lgamma};
use statrs::function::beta::beta_reg;

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

pub fn std_normal_pdf(x: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * x * x).exp()
}

pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

pub fn std_normal_sf(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Inverse of the standard normal CDF (Wichura's AS 241, PPND16).
///
/// Relative accuracy is about 1e-16 over (0, 1); `p` outside (0, 1) maps to
/// the corresponding infinity or NaN.
pub fn std_normal_inv(p: f64) -> f64 {
    if p.is_nan() || !(0.0..=1.0).contains(&p) {
        return f64::NAN;
    }
    if p == 0.0 {
        return f64::NEG_INFINITY;
    }
    if p == 1.0 {
        return f64::INFINITY;
    }
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        let num = ((((((2_509.080_928_730_122_7 * r + 33_430.575_583_588_13) * r
            + 67_265.770_927_008_7)
            * r
            + 45_921.953_931_549_87)
            * r
            + 13_731.693_765_509_46)
            * r
            + 1_971.590_950_306_551_4)
            * r
            + 133.141_667_891_784_38)
            * r
            + 3.387_132_872_796_366_5;
        let den = ((((((5_226.495_278_852_546 * r + 28_729.085_735_721_943) * r
            + 39_307.895_800_092_71)
            * r
            + 21_213.794_301_586_597)
            * r
            + 5_394.196_021_424_751)
            * r
            + 687.187_007_492_057_9)
            * r
            + 42.313_330_701_600_91)
            * r
            + 1.0;
        return q * num / den;
    }
    let tail = if q < 0.0 { p } else { 1.0 - p };
    let mut r = (-tail.ln()).sqrt();
    let val = if r <= 5.0 {
        r -= 1.6;
        let num = ((((((7.745_450_142_783_414e-4 * r + 0.022_723_844_989_269_184) * r
            + 0.241_780_725_177_450_6)
            * r
            + 1.270_458_252_452_368_4)
            * r
            + 3.647_848_324_763_204_5)
            * r
            + 5.769_497_221_460_691)
            * r
            + 4.630_337_846_156_545)
            * r
            + 1.423_437_110_749_683_5;
        let den = ((((((1.050_750_071_644_416_9e-9 * r + 5.475_938_084_995_345e-4) * r
            + 0.015_198_666_563_616_457)
            * r
            + 0.148_103_976_427_480_08)
            * r
            + 0.689_767_334_985_1)
            * r
            + 1.676_384_830_183_803_8)
            * r
            + 2.053_191_626_637_759)
            * r
            + 1.0;
        num / den
    } else {
        r -= 5.0;
        let num = ((((((2.010_334_399_292_288_1e-7 * r + 2.711_555_568_743_487_6e-5) * r
            + 0.001_242_660_947_388_078_4)
            * r
            + 0.026_532_189_526_576_124)
            * r
            + 0.296_560_571_828_504_9)
            * r
            + 1.784_826_539_917_291_3)
            * r
            + 5.463_784_911_164_114)
            * r
            + 6.657_904_643_501_103;
        let den = ((((((2.044_263_103_389_939_7e-15 * r + 1.421_511_758_316_446e-7) * r
            + 1.846_318_317_510_054_8e-5)
            * r
            + 7.868_691_311_456_133e-4)
            * r
            + 0.014_875_361_290_850_615)
            * r
            + 0.136_929_880_922_735_8)
            * r
            + 0.599_832_206_555_888)
            * r
            + 1.0;
        num / den
    };
    if q < 0.0 {
        -val
    } else {
        val
    }
}

/// Upper-tail probability P(T > t) of Student's t with `nu` degrees of freedom.
pub fn student_t_sf(nu: f64, t: f64) -> f64 {
    if t.is_infinite() {
        return if t > 0.0 { 0.0 } else { 1.0 };
    }
    let x = nu / (nu + t * t);
    let half_tail = 0.5 * beta_reg(0.5 * nu, 0.5, x);
    if t > 0.0 {
        half_tail
    } else {
        1.0 - half_tail
    }
}

pub fn student_t_cdf(nu: f64, t: f64) -> f64 {
    student_t_sf(nu, -t)
}

pub fn student_t_pdf(nu: f64, t: f64) -> f64 {
    let log_norm =
        lgamma(0.5 * (nu + 1.0)) - lgamma(0.5 * nu) - 0.5 * (nu * std::f64::consts::PI).ln();
    (log_norm - 0.5 * (nu + 1.0) * (t * t / nu).ln_1p()).exp()
}

/// Solves `student_t_sf(nu, t) = w` for `t`, with `w` in (0, 1).
///
/// Bracketing bisection with Newton steps on `ln sf`, to an absolute/relative
/// tolerance of 1e-13 in `t`.
pub fn student_t_upper_quantile(nu: f64, w: f64) -> f64 {
    if w <= 0.0 {
        return f64::INFINITY;
    }
    if w >= 1.0 {
        return f64::NEG_INFINITY;
    }
    if w > 0.5 {
        return -student_t_upper_quantile(nu, 1.0 - w);
    }
    if w == 0.5 {
        return 0.0;
    }
    let target = w.ln();
    // sf is decreasing; bracket the root in [lo, hi].
    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    while student_t_sf(nu, hi) > w {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return f64::INFINITY;
        }
    }
    let mut t = 0.5 * (lo + hi);
    for _ in 0..200 {
        let sf = student_t_sf(nu, t);
        if sf > w {
            lo = t;
        } else {
            hi = t;
        }
        let g = sf.ln() - target;
        let dg = -student_t_pdf(nu, t) / sf;
        let mut next = t - g / dg;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        let step = (next - t).abs();
        t = next;
        if step <= 1e-13 * t.abs().max(1.0) || hi - lo <= 1e-13 * hi.max(1.0) {
            break;
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn normal_inverse_reference_points() {
        // scipy.stats.norm.ppf
        assert_relative_eq!(
            std_normal_inv(0.9),
            1.2815515655446004,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            std_normal_inv(0.975),
            1.959963984540054,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            std_normal_inv(1e-10),
            -6.361340902404056,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            std_normal_inv(1e-300),
            -37.0470962993612,
            max_relative = 1e-14
        );
        assert_eq!(std_normal_inv(0.5), 0.0);
    }

    #[test]
    fn normal_round_trip() {
        for i in 1..1000 {
            let p = i as f64 / 1_000.0;
            assert!((std_normal_cdf(std_normal_inv(p)) - p).abs() < 1e-15);
        }
    }

    #[test]
    fn student_t_reference_points() {
        // scipy.stats.t(5); the incomplete beta limits agreement to ~1e-11.
        assert_relative_eq!(
            student_t_cdf(5.0, 1.0),
            0.8183912661754387,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            student_t_pdf(5.0, 1.0),
            0.2196797973509805,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            student_t_upper_quantile(5.0, 0.1),
            1.4758840488558214,
            max_relative = 1e-10
        );
        assert_relative_eq!(
            student_t_upper_quantile(5.0, 0.99),
            -3.3649299989072747,
            max_relative = 1e-10
        );
    }

    #[test]
    fn student_t_extreme_tail() {
        let t = student_t_upper_quantile(5.0, 1e-40);
        assert!(t.is_finite() && t > 1e7);
        assert_relative_eq!(student_t_sf(5.0, t), 1e-40, max_relative = 1e-9);
    }
}
