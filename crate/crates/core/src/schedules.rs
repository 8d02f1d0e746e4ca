//! Policies for the resolution exponent `h_exp(t)`.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleKind {
    /// `h += 1` on every acceptance.
    #[serde(alias = "greedy")]
    GreedyIncrement,
    /// `h = floor(log_b(c1 * ln(t + 2)))`, applied on acceptance.
    #[serde(alias = "log")]
    LogSchedule,
    /// `h` never moves.
    Constant,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScheduleSpec {
    pub kind: ScheduleKind,
    /// Lower-bound prefactor (`eta * sqrt(c_q)`); only reported.
    pub c0: f64,
    /// Upper-bound prefactor of the log schedule.
    pub c1: f64,
    /// Exponent of the lower bound's transient factor; only reported.
    pub beta: f64,
    /// Noise floor constant of `sigma_inf`.
    pub c_o: f64,
    pub c_q: f64,
}

impl Default for ScheduleSpec {
    fn default() -> Self {
        let c_q: f64 = 1.0 / 3.0;
        Self {
            kind: ScheduleKind::GreedyIncrement,
            c0: c_q.sqrt(),
            c1: 4.0,
            beta: 0.0,
            c_o: 1.0,
            c_q,
        }
    }
}

impl ScheduleSpec {
    pub fn greedy() -> Self {
        Self::default()
    }

    pub fn log() -> Self {
        Self {
            kind: ScheduleKind::LogSchedule,
            ..Self::default()
        }
    }

    pub fn constant() -> Self {
        Self {
            kind: ScheduleKind::Constant,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [("c0", self.c0), ("c1", self.c1), ("c_o", self.c_o), ("c_q", self.c_q)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(format!("schedule.{name} must be positive, got {v}"));
            }
        }
        if !(self.beta >= 0.0) {
            return Err(format!("schedule.beta must be >= 0, got {}", self.beta));
        }
        Ok(())
    }

    /// Resolution after iteration `t`, given whether the candidate at `t`
    /// was accepted. Never decreases and never exceeds `cap`.
    pub fn next_h(&self, prev_h: u32, accepted: bool, t: u64, base: u32, cap: u32) -> HStep {
        match self.kind {
            ScheduleKind::GreedyIncrement => h_greedy(prev_h, accepted, cap),
            ScheduleKind::LogSchedule if accepted => {
                let target = h_log(t, base, self).max(prev_h);
                if target > cap {
                    HStep {
                        h: cap.max(prev_h),
                        capped: true,
                    }
                } else {
                    HStep {
                        h: target,
                        capped: false,
                    }
                }
            }
            _ => HStep {
                h: prev_h,
                capped: false,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HStep {
    pub h: u32,
    /// The schedule asked for more resolution than the exactness cap allows.
    pub capped: bool,
}

pub fn h_greedy(prev_h: u32, accepted: bool, cap: u32) -> HStep {
    if !accepted {
        return HStep {
            h: prev_h,
            capped: false,
        };
    }
    if prev_h >= cap {
        HStep {
            h: prev_h,
            capped: true,
        }
    } else {
        HStep {
            h: prev_h + 1,
            capped: false,
        }
    }
}

/// `max(0, floor(log_b(c1 * ln(t + 2))))`.
pub fn h_log(t: u64, base: u32, spec: &ScheduleSpec) -> u32 {
    let v = spec.c1 * ((t as f64) + 2.0).ln();
    floor_log(v, base)
}

/// Largest `k >= 0` with `base^k <= v` (0 when `v < base`).
fn floor_log(v: f64, base: u32) -> u32 {
    let b = base as f64;
    let mut k = 0;
    let mut p = b;
    while p <= v {
        p *= b;
        k += 1;
    }
    k
}

/// Lower bound on `h(t)` implied by an integer schedule with floor
/// `c_o / ln(t + 2)`; `log_b(c0 * b^(-2 beta / (t + 2)) * c_o / ln(t + 2))`.
/// Reported alongside runs, never enforced.
pub fn h_lower_bound(t: u64, base: u32, spec: &ScheduleSpec) -> f64 {
    let b = base as f64;
    let tt = t as f64 + 2.0;
    let arg = spec.c0 * b.powf(-2.0 * spec.beta / tt) * sigma_inf(t, spec.c_o);
    arg.ln() / b.ln()
}

/// Noise floor `c_o / ln(t + 2)`.
pub fn sigma_inf(t: u64, c_o: f64) -> f64 {
    c_o / ((t as f64) + 2.0).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn with_c1(c1: f64) -> ScheduleSpec {
        ScheduleSpec {
            c1,
            ..ScheduleSpec::log()
        }
    }

    #[test]
    fn greedy_examples() {
        assert_eq!(h_greedy(3, true, 50), HStep { h: 4, capped: false });
        assert_eq!(h_greedy(3, false, 50), HStep { h: 3, capped: false });
        assert_eq!(h_greedy(50, true, 50), HStep { h: 50, capped: true });
    }

    #[test]
    fn log_examples() {
        // 4 ln 2 = 2.7726
        assert_eq!(h_log(0, 2, &with_c1(4.0)), 1);
        assert_eq!(h_log(0, 2, &with_c1(1.0 / std::f64::consts::LN_2)), 0);
        // 4 ln(1e6 + 2) = 55.26
        assert_eq!(h_log(1_000_000, 2, &with_c1(4.0)), 5);
        assert_eq!(h_log(0, 2, &with_c1(0.01)), 0);
    }

    #[test]
    fn sigma_examples() {
        assert!((sigma_inf(0, 1.0) - 1.0 / 2f64.ln()).abs() < 1e-15);
        assert!((sigma_inf(0, 1.0) - std::f64::consts::LOG2_E).abs() < 1e-12);
        assert!((sigma_inf(1, 3f64.ln()) - 1.0).abs() < 1e-15);
        assert!(sigma_inf(100, 1.0) < sigma_inf(10, 1.0));
    }

    #[test]
    fn log_is_non_decreasing_and_loses_at_most_one_step() {
        let spec = ScheduleSpec::log();
        let mut prev = 0;
        let mut t = 0u64;
        while t < 50_000_000 {
            let h = h_log(t, 2, &spec);
            assert!(h >= prev, "t={t}");
            let bound = 1.0 / (spec.c1 * (t as f64 + 2.0).ln() * 2.0);
            assert!(2f64.powi(-(h as i32)) >= bound, "t={t}");
            prev = h;
            t = t * 3 / 2 + 1;
        }
    }

    #[test]
    fn next_h_per_kind() {
        let g = ScheduleSpec::greedy();
        assert_eq!(g.next_h(2, true, 10, 2, 40).h, 3);
        let l = ScheduleSpec::log();
        assert_eq!(l.next_h(0, false, 1_000_000, 2, 40).h, 0);
        assert_eq!(l.next_h(0, true, 1_000_000, 2, 40).h, 5);
        assert_eq!(l.next_h(7, true, 0, 2, 40).h, 7);
        assert_eq!(l.next_h(0, true, 1_000_000, 2, 3), HStep { h: 3, capped: true });
        assert_eq!(ScheduleSpec::constant().next_h(4, true, 9, 2, 40).h, 4);
    }

    #[test]
    fn lower_bound_is_below_upper_bound() {
        let spec = ScheduleSpec::log();
        for t in [0u64, 10, 1000, 1_000_000] {
            assert!(h_lower_bound(t, 2, &spec) <= h_log(t, 2, &spec) as f64);
        }
    }

    #[test]
    fn validate_rejects_nonpositive() {
        assert!(ScheduleSpec::default().validate().is_ok());
        let bad = ScheduleSpec {
            c1: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
