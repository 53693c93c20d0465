//! Rehearsal schedules: expand a rehearsal assumption (CR, ER, SQ) with
//! association strength `sigma` into concrete rehearsal windows.
//!
//! A schedule is a sequence of times `t_0 = 0 < t_1 < t_2 < ...`; the window
//! `[t_i, t_{i+1})` must contain at least one rehearsal for the memory to
//! survive. The three schedule kinds differ in how fast windows grow:
//!
//! * `CR` (constant): every window has length `sigma`.
//! * `ER` (expanding): window `i` has length `2^(i*sigma)`.
//! * `SQ` (squared): boundaries at `i^2 * sigma`, so window `i` has length
//!   `(2i+1)*sigma`.
//!
//! The ER lengths convention deserves a note: interval *endpoints* `2^(i*sigma)`
//! and interval *lengths* `2^(i*sigma)` coincide at `sigma = 1` but diverge
//! elsewhere. This crate uses the lengths reading throughout, which is the one
//! that reproduces the reference usability grids (see `README.md`).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Which rehearsal assumption generates the schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScheduleKind {
    /// CR: rehearse every `sigma` days forever.
    Constant,
    /// ER: window lengths double-exponentially, `2^(i*sigma)` days.
    Expanding,
    /// SQ: window boundaries at `i^2 * sigma` days.
    Squared,
}

impl ScheduleKind {
    pub fn label(self) -> &'static str {
        match self {
            ScheduleKind::Constant => "CR",
            ScheduleKind::Expanding => "ER",
            ScheduleKind::Squared => "SQ",
        }
    }
}

impl FromStr for ScheduleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "CR" => Ok(ScheduleKind::Constant),
            "ER" => Ok(ScheduleKind::Expanding),
            "SQ" => Ok(ScheduleKind::Squared),
            other => Err(Error::Parse(format!(
                "unknown schedule kind {other:?} (expected CR, ER or SQ)"
            ))),
        }
    }
}

impl fmt::Display for ScheduleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// How windows are truncated at the horizon `t`.
///
/// `StartsWithinHorizon` keeps every window that *starts* at or before `t`
/// (the final window may extend past the horizon); `CompleteWindowsOnly`
/// keeps only windows that *end* at or before `t`. The first always yields
/// exactly one more window than the second, because `t_0 = 0` and boundaries
/// are strictly increasing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum WindowMode {
    #[default]
    StartsWithinHorizon,
    CompleteWindowsOnly,
}

impl WindowMode {
    pub fn label(self) -> &'static str {
        match self {
            WindowMode::StartsWithinHorizon => "starts-within-horizon",
            WindowMode::CompleteWindowsOnly => "complete-windows-only",
        }
    }
}

impl FromStr for WindowMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "starts" | "starts-within-horizon" => Ok(WindowMode::StartsWithinHorizon),
            "complete" | "complete-windows-only" => Ok(WindowMode::CompleteWindowsOnly),
            other => Err(Error::Parse(format!(
                "unknown window mode {other:?} (expected starts or complete)"
            ))),
        }
    }
}

impl fmt::Display for WindowMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A rehearsal schedule kind plus association strength and truncation mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RehearsalPolicy {
    pub kind: ScheduleKind,
    /// Association strength in days; larger values mean stronger mnemonics
    /// and therefore longer windows. Must be positive and finite.
    pub sigma: f64,
    pub window_mode: WindowMode,
}

impl RehearsalPolicy {
    pub fn new(kind: ScheduleKind, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::InvalidParam(format!(
                "association strength must be positive and finite, got {sigma}"
            )));
        }
        Ok(RehearsalPolicy {
            kind,
            sigma,
            window_mode: WindowMode::default(),
        })
    }

    pub fn with_window_mode(mut self, mode: WindowMode) -> Self {
        self.window_mode = mode;
        self
    }
}

impl FromStr for RehearsalPolicy {
    type Err = Error;

    /// Parses the `kind:sigma` form used in configs, e.g. `ER:1.0` or `CR:31`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, sigma) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("policy {s:?} is not of the form KIND:sigma")))?;
        let sigma: f64 = sigma
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("policy {s:?} has a non-numeric sigma")))?;
        RehearsalPolicy::new(kind.trim().parse()?, sigma)
    }
}

impl fmt::Display for RehearsalPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind, self.sigma)
    }
}

/// One rehearsal requirement: the half-open interval `[start, end)` in days.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RehearsalWindow {
    pub start: f64,
    pub end: f64,
}

impl RehearsalWindow {
    pub fn length(&self) -> f64 {
        self.end - self.start
    }

    pub fn contains(&self, t: f64) -> bool {
        self.start <= t && t < self.end
    }
}

/// Length in days of the `i`-th window (0-indexed) under a schedule kind.
///
/// CR: `sigma`; ER: `2^(i*sigma)`; SQ: `(2i+1)*sigma` (the consecutive
/// difference of boundaries `i^2 * sigma`).
pub fn window_length(kind: ScheduleKind, sigma: f64, index: u32) -> f64 {
    match kind {
        ScheduleKind::Constant => sigma,
        ScheduleKind::Expanding => (index as f64 * sigma).exp2(),
        ScheduleKind::Squared => (2 * index + 1) as f64 * sigma,
    }
}

/// Expands a policy into its rehearsal windows over `[0, horizon]`.
///
/// Boundaries accumulate from `t_0 = 0`, so consecutive windows tile exactly:
/// `windows[i].end == windows[i + 1].start` bit for bit. Truncation follows
/// the policy's [`WindowMode`]. Rejects non-positive horizons.
pub fn windows(policy: &RehearsalPolicy, horizon: f64) -> Result<Vec<RehearsalWindow>> {
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::InvalidParam(format!(
            "horizon must be positive and finite, got {horizon}"
        )));
    }
    let mut out = Vec::new();
    let mut start = 0.0_f64;
    let mut index: u32 = 0;
    loop {
        let end = start + window_length(policy.kind, policy.sigma, index);
        let keep = match policy.window_mode {
            WindowMode::StartsWithinHorizon => start <= horizon,
            WindowMode::CompleteWindowsOnly => end <= horizon,
        };
        if !keep {
            break;
        }
        out.push(RehearsalWindow { start, end });
        if !end.is_finite() {
            break;
        }
        start = end;
        index += 1;
    }
    Ok(out)
}

/// The first `count` windows of a schedule, ignoring any horizon.
///
/// This exists because the reference ER usability grid holds the *number* of
/// rehearsal requirements fixed at the `sigma = 1` horizon count while varying
/// `sigma` in the window lengths; see the table-reproduction commands.
pub fn windows_first(kind: ScheduleKind, sigma: f64, count: usize) -> Vec<RehearsalWindow> {
    let mut out = Vec::with_capacity(count);
    let mut start = 0.0_f64;
    for index in 0..count {
        let end = start + window_length(kind, sigma, index as u32);
        out.push(RehearsalWindow { start, end });
        if !end.is_finite() {
            break;
        }
        start = end;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn policy(kind: ScheduleKind, sigma: f64, mode: WindowMode) -> RehearsalPolicy {
        RehearsalPolicy::new(kind, sigma).unwrap().with_window_mode(mode)
    }

    #[test]
    fn window_lengths_match_schedule_definitions() {
        assert_eq!(window_length(ScheduleKind::Constant, 3.0, 5), 3.0);
        assert_eq!(window_length(ScheduleKind::Expanding, 1.0, 3), 8.0);
        // t_3 - t_2 = 9 - 4 under SQ with sigma = 1
        assert_eq!(window_length(ScheduleKind::Squared, 1.0, 2), 5.0);
    }

    #[test]
    fn cr_window_counts_at_year_horizon() {
        let starts = windows(
            &policy(ScheduleKind::Constant, 1.0, WindowMode::StartsWithinHorizon),
            365.0,
        )
        .unwrap();
        assert_eq!(starts.len(), 366);

        let complete = windows(
            &policy(ScheduleKind::Constant, 1.0, WindowMode::CompleteWindowsOnly),
            365.0,
        )
        .unwrap();
        assert_eq!(complete.len(), 365);

        let monthly = windows(
            &policy(ScheduleKind::Constant, 31.0, WindowMode::StartsWithinHorizon),
            365.0,
        )
        .unwrap();
        assert_eq!(monthly.len(), 12);
    }

    #[test]
    fn er_windows_double_up_to_horizon() {
        let w = windows(
            &policy(ScheduleKind::Expanding, 1.0, WindowMode::StartsWithinHorizon),
            365.0,
        )
        .unwrap();
        assert_eq!(w.len(), 9);
        let lengths: Vec<f64> = w.iter().map(|w| w.length()).collect();
        assert_eq!(lengths, vec![1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0]);
        assert_eq!(w[8].start, 255.0);
    }

    #[test]
    fn windows_first_ignores_horizon() {
        let w = windows_first(ScheduleKind::Expanding, 2.0, 9);
        assert_eq!(w.len(), 9);
        assert_eq!(w[8].length(), 4f64.powi(8));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(RehearsalPolicy::new(ScheduleKind::Constant, 0.0).is_err());
        assert!(RehearsalPolicy::new(ScheduleKind::Constant, -1.0).is_err());
        assert!(RehearsalPolicy::new(ScheduleKind::Constant, f64::NAN).is_err());
        let p = policy(ScheduleKind::Constant, 1.0, WindowMode::StartsWithinHorizon);
        assert!(windows(&p, 0.0).is_err());
        assert!(windows(&p, -3.0).is_err());
    }

    #[test]
    fn policy_string_round_trip() {
        let p: RehearsalPolicy = "ER:1.0".parse().unwrap();
        assert_eq!(p.kind, ScheduleKind::Expanding);
        assert_eq!(p.sigma, 1.0);
        assert_eq!("cr:31".parse::<RehearsalPolicy>().unwrap().kind, ScheduleKind::Constant);
        assert!("ER".parse::<RehearsalPolicy>().is_err());
        assert!("XX:1".parse::<RehearsalPolicy>().is_err());
        assert!("ER:zero".parse::<RehearsalPolicy>().is_err());
    }

    proptest! {
        #[test]
        fn windows_tile_without_gaps(
            kind in prop_oneof![
                Just(ScheduleKind::Constant),
                Just(ScheduleKind::Expanding),
                Just(ScheduleKind::Squared),
            ],
            sigma in 0.05f64..40.0,
            horizon in 1.0f64..2000.0,
        ) {
            let p = policy(kind, sigma, WindowMode::StartsWithinHorizon);
            let w = windows(&p, horizon).unwrap();
            prop_assert!(!w.is_empty());
            prop_assert_eq!(w[0].start, 0.0);
            for pair in w.windows(2) {
                prop_assert_eq!(pair[0].end, pair[1].start);
                prop_assert!(pair[0].length() > 0.0);
            }
            match kind {
                ScheduleKind::Constant => {
                    for win in &w {
                        prop_assert!((win.length() - sigma).abs() < 1e-12 * sigma.max(1.0));
                    }
                }
                ScheduleKind::Expanding => {
                    for pair in w.windows(2) {
                        prop_assert!(pair[1].length() > pair[0].length());
                    }
                }
                ScheduleKind::Squared => {
                    for pair in w.windows(2) {
                        let second_diff = pair[1].length() - pair[0].length();
                        prop_assert!((second_diff - 2.0 * sigma).abs() < 1e-9 * sigma.max(1.0));
                    }
                }
            }
        }

        #[test]
        fn starts_mode_has_exactly_one_extra_window(
            kind in prop_oneof![
                Just(ScheduleKind::Constant),
                Just(ScheduleKind::Expanding),
                Just(ScheduleKind::Squared),
            ],
            sigma in 0.05f64..40.0,
            horizon in 1.0f64..2000.0,
        ) {
            let starts = windows(&policy(kind, sigma, WindowMode::StartsWithinHorizon), horizon).unwrap();
            let complete = windows(&policy(kind, sigma, WindowMode::CompleteWindowsOnly), horizon).unwrap();
            prop_assert_eq!(starts.len(), complete.len() + 1);
        }

        #[test]
        fn doubling_sigma_under_cr_halves_window_count(
            sigma in 0.1f64..50.0,
            horizon in 10.0f64..2000.0,
        ) {
            let one = windows(&policy(ScheduleKind::Constant, sigma, WindowMode::StartsWithinHorizon), horizon).unwrap().len() as i64;
            let two = windows(&policy(ScheduleKind::Constant, 2.0 * sigma, WindowMode::StartsWithinHorizon), horizon).unwrap().len() as i64;
            prop_assert!((2 * two - one).abs() <= 2, "count {} vs doubled-sigma count {}", one, two);
        }
    }
}
