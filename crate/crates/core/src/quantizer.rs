//! Exact quantization of objective values.
//!
//! A [`QuantConfig`] fixes a grid of spacing `1 / Q_p` with
//! `Q_p = b^(eta_pow + h_exp)`. Because `eta` is always a pure power of the
//! base, every grid is a power-of-`b` refinement of every other grid with the
//! same `eta_pow`, so levels from different resolutions can be compared with
//! integer arithmetic only.

use std::cmp::Ordering;

use crate::error::{Error, Result};

/// `2^53`: above this, `f64` can no longer hold every integer and the floor
/// in [`quantize`] stops being exact.
pub const EXACT_LIMIT: f64 = 9_007_199_254_740_992.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuantConfig {
    base: u32,
    h_exp: u32,
    eta_pow: i32,
}

impl QuantConfig {
    pub fn new(base: u32, h_exp: u32, eta_pow: i32) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidArgument(format!("base must be >= 2, got {base}")));
        }
        let cfg = Self {
            base,
            h_exp,
            eta_pow,
        };
        let cap = exponent_cap(base);
        if cfg.exponent().unsigned_abs() as i64 > cap as i64 {
            return Err(Error::InvalidArgument(format!(
                "|eta_pow + h_exp| = {} exceeds the exponent cap {cap} for base {base}",
                cfg.exponent().unsigned_abs()
            )));
        }
        Ok(cfg)
    }

    /// Config with `eta` chosen from the initial objective value and `h_exp = 0`.
    pub fn for_initial_value(f0: f64, base: u32) -> Result<Self> {
        Self::new(base, 0, init_eta(f0, base)?)
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn h_exp(&self) -> u32 {
        self.h_exp
    }

    pub fn eta_pow(&self) -> i32 {
        self.eta_pow
    }

    /// Exponent of `Q_p` in base `b`.
    pub fn exponent(&self) -> i64 {
        self.eta_pow as i64 + self.h_exp as i64
    }

    /// `Q_p` as a float. Exact when the exponent is non-negative or the base
    /// is a power of two.
    pub fn qp(&self) -> f64 {
        let e = self.exponent();
        let p = exact_pow(self.base, e.unsigned_abs() as u32);
        if e >= 0 {
            p
        } else {
            1.0 / p
        }
    }

    /// Same base and `eta`, different resolution.
    pub fn with_h_exp(&self, h_exp: u32) -> Result<Self> {
        Self::new(self.base, h_exp, self.eta_pow)
    }

    /// Largest `h_exp` for which `Q_p * (f_max + 1) <= 2^53`, i.e. the
    /// resolution beyond which quantized levels of values up to `f_max`
    /// would alias.
    pub fn max_h_exp(&self, f_max: f64) -> u32 {
        let cap = exponent_cap(self.base) as i64;
        let bound = f_max.max(0.0) + 1.0;
        let mut best = 0u32;
        let mut h = 0u32;
        loop {
            let e = self.eta_pow as i64 + h as i64;
            if e > cap {
                break;
            }
            if e >= -cap {
                let cfg = Self {
                    h_exp: h,
                    ..*self
                };
                if cfg.scale(bound) > EXACT_LIMIT {
                    break;
                }
                best = h;
            }
            h += 1;
        }
        best
    }

    /// `Q_p * f`, computed by an exact multiplication or a single correctly
    /// rounded division so that negative exponents of non-binary bases do not
    /// go through an inexact reciprocal.
    pub fn scale(&self, f: f64) -> f64 {
        let e = self.exponent();
        let p = exact_pow(self.base, e.unsigned_abs() as u32);
        if e >= 0 {
            f * p
        } else {
            f / p
        }
    }

    /// Real value of an integer level on this grid.
    pub fn level_value(&self, level: i64) -> f64 {
        let e = self.exponent();
        let p = exact_pow(self.base, e.unsigned_abs() as u32);
        if e >= 0 {
            level as f64 / p
        } else {
            level as f64 * p
        }
    }
}

/// Largest `k` with `base^k <= 2^53`, so that `base^k` is an exact `f64`.
pub fn exponent_cap(base: u32) -> u32 {
    let mut k = 0;
    let mut p = 1.0f64;
    while p * base as f64 <= EXACT_LIMIT {
        p *= base as f64;
        k += 1;
    }
    k
}

fn exact_pow(base: u32, k: u32) -> f64 {
    let mut p = 1.0f64;
    for _ in 0..k {
        p *= base as f64;
    }
    p
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuantizedValue {
    level: i64,
    config: QuantConfig,
}

impl QuantizedValue {
    pub fn level(&self) -> i64 {
        self.level
    }

    pub fn config(&self) -> QuantConfig {
        self.config
    }

    /// `f^Q = level / Q_p`.
    pub fn value(&self) -> f64 {
        self.config.level_value(self.level)
    }

    /// Quantization error in grid units, `level - Q_p * f`, for the `f` that
    /// produced this value. Lies in `(-0.5, 0.5]`.
    pub fn error_for(&self, f: f64) -> f64 {
        let x = self.config.scale(f);
        let fl = x.floor();
        // level - x == (level - fl) - (x - fl), both terms exact
        (self.level as f64 - fl) - (x - fl)
    }

    pub fn compare(&self, other: &QuantizedValue) -> Result<Ordering> {
        compare(self, other)
    }
}

/// Round-half-up quantization `floor(Q_p * f + 0.5)`.
pub fn quantize(f: f64, cfg: &QuantConfig) -> Result<QuantizedValue> {
    if f.is_nan() {
        return Err(Error::InvalidArgument("cannot quantize NaN".into()));
    }
    if f < 0.0 {
        return Err(Error::NegativeObjective(f));
    }
    let x = cfg.scale(f);
    if !(x + 0.5 <= EXACT_LIMIT) {
        return Err(Error::PrecisionOverflow { scaled: x });
    }
    // floor(x + 0.5) without the rounding of the addition: x - floor(x) is
    // exact below 2^52.
    let fl = x.floor();
    let level = if x - fl >= 0.5 { fl + 1.0 } else { fl };
    Ok(QuantizedValue {
        level: level as i64,
        config: *cfg,
    })
}

/// `eta_pow = -floor(log_b(f0 + 1))`, computed by integer search rather than
/// a floating-point logarithm.
pub fn init_eta(f0: f64, base: u32) -> Result<i32> {
    if base < 2 {
        return Err(Error::InvalidArgument(format!("base must be >= 2, got {base}")));
    }
    if f0.is_nan() || f0.is_infinite() {
        return Err(Error::InvalidArgument(format!("initial value must be finite, got {f0}")));
    }
    if f0 < 0.0 {
        return Err(Error::NegativeObjective(f0));
    }
    let arg = f0 + 1.0;
    let b = base as f64;
    let mut k = 0i32;
    let mut p = 1.0f64;
    while p * b <= arg {
        p *= b;
        k += 1;
    }
    Ok(-k)
}

/// Exact ordering of two quantized values that share a base and `eta`,
/// rescaling the coarser level onto the finer grid.
pub fn compare(a: &QuantizedValue, b: &QuantizedValue) -> Result<Ordering> {
    let (ca, cb) = (a.config, b.config);
    if ca.base != cb.base || ca.eta_pow != cb.eta_pow {
        return Err(Error::MismatchedConfig(format!(
            "base/eta_pow {}/{} vs {}/{}",
            ca.base, ca.eta_pow, cb.base, cb.eta_pow
        )));
    }
    let ord = if ca.h_exp >= cb.h_exp {
        cmp_scaled(a.level, b.level, ca.base, ca.h_exp - cb.h_exp).reverse()
    } else {
        cmp_scaled(b.level, a.level, ca.base, cb.h_exp - ca.h_exp)
    };
    Ok(ord)
}

/// Orders `coarse * base^steps` against `fine`.
fn cmp_scaled(fine: i64, coarse: i64, base: u32, steps: u32) -> Ordering {
    let mut scaled = coarse as i128;
    for _ in 0..steps {
        // once |scaled| exceeds any i64 level the order is already decided
        if scaled == 0 || scaled.unsigned_abs() > i64::MAX as u128 {
            break;
        }
        scaled *= base as i128;
    }
    scaled.cmp(&(fine as i128))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg(base: u32, h: u32, eta: i32) -> QuantConfig {
        QuantConfig::new(base, h, eta).unwrap()
    }

    #[test]
    fn quantize_examples() {
        let unit = cfg(10, 0, 0);
        let q = quantize(3.7, &unit).unwrap();
        assert_eq!((q.level(), q.value()), (4, 4.0));
        let q = quantize(5.0, &unit).unwrap();
        assert_eq!((q.level(), q.value()), (5, 5.0));
        let q = quantize(3.74, &cfg(10, 1, 0)).unwrap();
        assert_eq!(q.level(), 37);
        assert!((q.value() - 3.7).abs() < 1e-15);
        for c in [cfg(2, 0, -6), cfg(10, 3, 0), cfg(2, 40, 0)] {
            let q = quantize(0.0, &c).unwrap();
            assert_eq!((q.level(), q.value()), (0, 0.0));
        }
    }

    #[test]
    fn half_rounds_up() {
        let unit = cfg(2, 0, 0);
        assert_eq!(quantize(2.5, &unit).unwrap().level(), 3);
        assert_eq!(quantize(0.49999999999999994, &unit).unwrap().level(), 0);
        assert_eq!(quantize(0.5, &unit).unwrap().error_for(0.5), 0.5);
    }

    #[test]
    fn rejects_bad_inputs() {
        let unit = cfg(2, 0, 0);
        assert!(matches!(quantize(-1.0, &unit), Err(Error::NegativeObjective(_))));
        assert!(quantize(f64::NAN, &unit).is_err());
        assert!(matches!(
            quantize(1e300, &unit),
            Err(Error::PrecisionOverflow { .. })
        ));
        assert!(QuantConfig::new(1, 0, 0).is_err());
        assert!(QuantConfig::new(2, 60, 0).is_err());
    }

    #[test]
    fn init_eta_examples() {
        assert_eq!(init_eta(100.0, 2).unwrap(), -6);
        assert_eq!(init_eta(0.0, 2).unwrap(), 0);
        assert_eq!(init_eta(7.0, 2).unwrap(), -3);
        assert_eq!(init_eta(99.0, 10).unwrap(), -2);
        assert!(init_eta(-0.5, 2).is_err());
    }

    #[test]
    fn compare_examples() {
        let fine = quantize(3.74, &cfg(10, 1, 0)).unwrap();
        let coarse = quantize(3.7, &cfg(10, 0, 0)).unwrap();
        assert_eq!(compare(&fine, &coarse).unwrap(), Ordering::Less);
        assert_eq!(compare(&coarse, &fine).unwrap(), Ordering::Greater);
        assert_eq!(compare(&fine, &fine).unwrap(), Ordering::Equal);
        let c = cfg(2, 0, 0);
        let zero = quantize(0.0, &c).unwrap();
        let one = quantize(1.0, &c).unwrap();
        assert_eq!(compare(&zero, &one).unwrap(), Ordering::Less);
        let other = quantize(1.0, &cfg(2, 0, -1)).unwrap();
        assert!(matches!(compare(&one, &other), Err(Error::MismatchedConfig(_))));
    }

    #[test]
    fn compare_huge_rescale_does_not_overflow() {
        let coarse = quantize(3.0, &cfg(2, 0, -40)).unwrap();
        let fine = quantize(1.0, &cfg(2, 90, -40)).unwrap();
        assert_eq!(coarse.level(), 0);
        assert_eq!(compare(&coarse, &fine).unwrap(), Ordering::Less);
        let coarse = quantize(3e12, &cfg(2, 0, -40)).unwrap();
        assert_eq!(coarse.level(), 3);
        assert_eq!(compare(&coarse, &fine).unwrap(), Ordering::Greater);
    }

    #[test]
    fn max_h_respects_exact_limit() {
        let c = QuantConfig::for_initial_value(2000.0, 2).unwrap();
        assert_eq!(c.eta_pow(), -10);
        let h = c.max_h_exp(30_000.0);
        let at = c.with_h_exp(h).unwrap();
        assert!(at.scale(30_001.0) <= EXACT_LIMIT);
        assert!(c.with_h_exp(h + 1).unwrap().scale(30_001.0) > EXACT_LIMIT);
    }

    proptest! {
        #[test]
        fn rounding_bound(f in 0.0f64..1e6, h in 0u32..30, eta in -20i32..0, base in prop::sample::select(vec![2u32, 10])) {
            let eta = if base == 10 { eta / 4 } else { eta };
            let h = if base == 10 { h / 4 } else { h };
            let c = cfg(base, h, eta);
            let q = quantize(f, &c).unwrap();
            let eps = q.error_for(f);
            prop_assert!(eps > -0.5 && eps <= 0.5);
            prop_assert!((q.value() - f).abs() <= 0.5 / c.qp() * (1.0 + 1e-12));
            let finer = quantize(f, &c.with_h_exp(h + 1).unwrap()).unwrap();
            prop_assert!((finer.value() - f).abs() <= 0.5 / (c.qp() * base as f64) * (1.0 + 1e-12));
        }

        #[test]
        fn monotone(a in 0.0f64..1e5, b in 0.0f64..1e5, h in 0u32..20) {
            let c = cfg(2, h, -8);
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(quantize(lo, &c).unwrap().level() <= quantize(hi, &c).unwrap().level());
        }

        #[test]
        fn compare_agrees_with_values(a in 0.0f64..1e4, b in 0.0f64..1e4, ha in 0u32..24, hb in 0u32..24) {
            let qa = quantize(a, &cfg(2, ha, -8)).unwrap();
            let qb = quantize(b, &cfg(2, hb, -8)).unwrap();
            // binary grids: value() is exact, so float order is the oracle
            let expect = qa.value().partial_cmp(&qb.value()).unwrap();
            prop_assert_eq!(compare(&qa, &qb).unwrap(), expect);
        }

        #[test]
        fn first_candidate_always_accepted(f0 in 1e-9f64..=1e6, frac in 0.0f64..=1.0, base in prop::sample::select(vec![2u32, 10])) {
            let f1 = f0 * frac;
            let c = QuantConfig::for_initial_value(f0, base).unwrap();
            let incumbent = quantize(f0, &c).unwrap();
            let candidate = quantize(f1, &c).unwrap();
            prop_assert_ne!(compare(&candidate, &incumbent).unwrap(), Ordering::Greater);
        }
    }
}
