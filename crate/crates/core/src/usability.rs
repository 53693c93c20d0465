//! Expected extra rehearsals: the usability objective.
//!
//! Each account is visited according to an independent Poisson process, so a
//! cue shared by several accounts is naturally rehearsed as a Poisson process
//! whose rate is the sum of the owners' visit rates. The probability that a
//! rehearsal window `[a, b)` passes with no natural rehearsal is
//! `exp(-rate * (b - a))`, and summing those miss probabilities over every
//! window of every cue gives the expected number of extra rehearsals the user
//! must perform. The Monte Carlo simulator here re-derives the same quantity
//! by actually sampling visit times, and exists to cross-check the closed
//! form (and vice versa).

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Exp};
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rehearsal::{windows, RehearsalPolicy, RehearsalWindow};

/// Exponents beyond this produce terms below 1e-300; they are skipped so the
/// accumulation never touches subnormals.
const UNDERFLOW_EXPONENT: f64 = 690.0;

/// Per-account visit rates in visits/day.
#[derive(Debug, Clone, PartialEq)]
pub struct VisitationProfile {
    pub name: Option<String>,
    pub rates: Vec<f64>,
}

impl VisitationProfile {
    pub fn new(rates: Vec<f64>) -> Result<Self> {
        if rates.is_empty() {
            return Err(Error::InvalidParam("profile needs at least one account".into()));
        }
        if rates.iter().any(|r| !r.is_finite() || *r < 0.0) {
            return Err(Error::InvalidParam("visit rates must be finite and >= 0".into()));
        }
        Ok(VisitationProfile { name: None, rates })
    }

    pub fn accounts(&self) -> usize {
        self.rates.len()
    }

    pub fn total_rate(&self) -> f64 {
        self.rates.iter().sum()
    }
}

/// The four reference user types. Every preset has 75 accounts with rates
/// drawn from {1, 1/3, 1/7, 1/31, 1/365} visits/day.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresetProfile {
    VeryActive,
    Typical,
    Occasional,
    Infrequent,
}

impl PresetProfile {
    pub const ALL: [PresetProfile; 4] = [
        PresetProfile::VeryActive,
        PresetProfile::Typical,
        PresetProfile::Occasional,
        PresetProfile::Infrequent,
    ];

    pub fn label(self) -> &'static str {
        match self {
            PresetProfile::VeryActive => "very-active",
            PresetProfile::Typical => "typical",
            PresetProfile::Occasional => "occasional",
            PresetProfile::Infrequent => "infrequent",
        }
    }

    /// Account counts per rate class, highest rate first.
    fn counts(self) -> [usize; 5] {
        match self {
            PresetProfile::VeryActive => [10, 10, 10, 10, 35],
            PresetProfile::Typical => [5, 10, 10, 10, 40],
            PresetProfile::Occasional => [2, 10, 20, 20, 23],
            PresetProfile::Infrequent => [0, 2, 5, 10, 58],
        }
    }
}

impl std::str::FromStr for PresetProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "very-active" | "veryactive" => Ok(PresetProfile::VeryActive),
            "typical" => Ok(PresetProfile::Typical),
            "occasional" => Ok(PresetProfile::Occasional),
            "infrequent" => Ok(PresetProfile::Infrequent),
            other => Err(Error::Parse(format!("unknown profile preset {other:?}"))),
        }
    }
}

/// Expands a preset into explicit per-account rates, highest first.
pub fn preset_profile(preset: PresetProfile) -> VisitationProfile {
    const CLASS_RATES: [f64; 5] = [
        1.0,
        1.0 / 3.0,
        1.0 / 7.0,
        1.0 / 31.0,
        1.0 / 365.0,
    ];
    let mut rates = Vec::with_capacity(75);
    for (count, rate) in preset.counts().into_iter().zip(CLASS_RATES) {
        rates.extend(std::iter::repeat(rate).take(count));
    }
    let mut profile = VisitationProfile::new(rates).expect("presets are valid");
    profile.name = Some(preset.label().to_owned());
    profile
}

/// Per-cue natural rehearsal rates plus the owning-account sets they came
/// from. The owners are kept because session-style counting groups the cues
/// of one password together.
#[derive(Debug, Clone, PartialEq)]
pub struct CueRates {
    /// `rates[c]` is the summed visit rate of every account whose cue set
    /// contains `c`; zero for unused cues.
    pub rates: Vec<f64>,
    /// Sorted account indices owning each cue.
    pub owners: Vec<Vec<usize>>,
}

impl CueRates {
    /// A single free-standing cue, for grid cells and schedule studies.
    pub fn single(rate: f64) -> Result<Self> {
        if !rate.is_finite() || rate < 0.0 {
            return Err(Error::InvalidParam(format!("rate must be finite and >= 0, got {rate}")));
        }
        Ok(CueRates {
            rates: vec![rate],
            owners: vec![vec![0]],
        })
    }

    pub fn cue_count(&self) -> usize {
        self.rates.len()
    }
}

/// Sums account rates into per-cue natural rehearsal rates.
///
/// `assignment[i]` names the cue set used by account `i`; it must be
/// injective and every index must be a valid set. Cues used by no account get
/// rate zero and an empty owner list.
pub fn cue_rates(
    sets: &[Vec<usize>],
    cue_count: usize,
    assignment: &[usize],
    profile: &VisitationProfile,
) -> Result<CueRates> {
    if assignment.len() != profile.accounts() {
        return Err(Error::InvalidParam(format!(
            "assignment covers {} accounts but the profile has {}",
            assignment.len(),
            profile.accounts()
        )));
    }
    let mut used = vec![false; sets.len()];
    for &set_idx in assignment {
        if set_idx >= sets.len() {
            return Err(Error::InvalidParam(format!(
                "assignment references set {set_idx} but the family has {}",
                sets.len()
            )));
        }
        if used[set_idx] {
            return Err(Error::InvalidParam(format!(
                "assignment maps two accounts to set {set_idx}"
            )));
        }
        used[set_idx] = true;
    }
    let mut rates = vec![0.0; cue_count];
    let mut owners = vec![Vec::new(); cue_count];
    for (account, &set_idx) in assignment.iter().enumerate() {
        for &cue in &sets[set_idx] {
            if cue >= cue_count {
                return Err(Error::InvalidParam(format!(
                    "cue {cue} outside universe [0, {cue_count})"
                )));
            }
            rates[cue] += profile.rates[account];
            owners[cue].push(account);
        }
    }
    Ok(CueRates { rates, owners })
}

/// Probability that a cue with natural rate `rate` is *not* rehearsed during
/// the window: `exp(-rate * length)`.
pub fn miss_probability(rate: f64, window: &RehearsalWindow) -> f64 {
    debug_assert!(rate >= 0.0);
    let length = window.length();
    if length.is_infinite() {
        return if rate > 0.0 { 0.0 } else { 1.0 };
    }
    (-rate * length).exp()
}

/// Sum of miss probabilities across a window list for one cue.
pub fn expected_extras_for_windows(rate: f64, windows: &[RehearsalWindow]) -> f64 {
    let mut sum = 0.0;
    for w in windows {
        let length = w.length();
        if length.is_infinite() {
            if rate == 0.0 {
                sum += 1.0;
            }
            continue;
        }
        let exponent = rate * length;
        if exponent <= UNDERFLOW_EXPONENT {
            sum += (-exponent).exp();
        }
    }
    sum
}

/// Expected extra rehearsals for one cue over the policy's windows.
pub fn expected_extras_single(rate: f64, policy: &RehearsalPolicy, horizon: f64) -> Result<f64> {
    if !rate.is_finite() || rate < 0.0 {
        return Err(Error::InvalidParam(format!("rate must be finite and >= 0, got {rate}")));
    }
    Ok(expected_extras_for_windows(rate, &windows(policy, horizon)?))
}

/// How per-cue expectations combine into a scheme total.
///
/// `PerCue` counts every cue's windows separately (the plain linearity-of-
/// expectation total). `PerSession` groups the cues owned by exactly the same
/// accounts — the chunks of one password — and charges each group once,
/// modeling that a single extra rehearsal session refreshes all chunks of
/// that password together. Cues owned by no account stay singleton groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CountingMode {
    #[default]
    PerCue,
    PerSession,
}

impl CountingMode {
    pub fn label(self) -> &'static str {
        match self {
            CountingMode::PerCue => "per-cue",
            CountingMode::PerSession => "per-session",
        }
    }
}

impl std::str::FromStr for CountingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "per-cue" | "percue" => Ok(CountingMode::PerCue),
            "per-session" | "persession" => Ok(CountingMode::PerSession),
            other => Err(Error::Parse(format!("unknown counting mode {other:?}"))),
        }
    }
}

/// Closed-form usability numbers for a cue-rate map under one policy.
#[derive(Debug, Clone, PartialEq)]
pub struct UsabilityReport {
    pub horizon: f64,
    pub policy: RehearsalPolicy,
    pub counting_mode: CountingMode,
    /// Per-cue expected extras (always per-cue semantics).
    pub per_cue: Vec<f64>,
    /// Scheme total under `counting_mode`.
    pub total: f64,
}

/// Evaluates the expected-extra-rehearsals formula for every cue and totals
/// it under the requested counting mode.
pub fn expected_extra_rehearsals(
    rates: &CueRates,
    policy: &RehearsalPolicy,
    horizon: f64,
    mode: CountingMode,
) -> Result<UsabilityReport> {
    if rates.rates.iter().any(|r| !r.is_finite() || *r < 0.0) {
        return Err(Error::InvalidParam("cue rates must be finite and >= 0".into()));
    }
    let w = windows(policy, horizon)?;
    let per_cue: Vec<f64> = rates
        .rates
        .iter()
        .map(|&r| expected_extras_for_windows(r, &w))
        .collect();
    let total = match mode {
        CountingMode::PerCue => per_cue.iter().sum(),
        CountingMode::PerSession => {
            let mut classes: std::collections::BTreeMap<&[usize], f64> =
                std::collections::BTreeMap::new();
            let mut unowned = 0.0;
            for (cue, owners) in rates.owners.iter().enumerate() {
                if owners.is_empty() {
                    unowned += per_cue[cue];
                } else {
                    let entry = classes.entry(owners.as_slice()).or_insert(per_cue[cue]);
                    debug_assert!(
                        (*entry - per_cue[cue]).abs() <= 1e-12 * entry.abs().max(1.0),
                        "cues of one session class must share a rate"
                    );
                }
            }
            classes.values().sum::<f64>() + unowned
        }
    };
    Ok(UsabilityReport {
        horizon,
        policy: *policy,
        counting_mode: mode,
        per_cue,
        total,
    })
}

/// Grid of single-cue expectations: rows follow `sigmas`, columns `lambdas`.
pub fn tabulate(
    kind: crate::rehearsal::ScheduleKind,
    window_mode: crate::rehearsal::WindowMode,
    sigmas: &[f64],
    lambdas: &[f64],
    horizon: f64,
) -> Result<Vec<Vec<f64>>> {
    let mut grid = Vec::with_capacity(sigmas.len());
    for &sigma in sigmas {
        let policy = RehearsalPolicy::new(kind, sigma)?.with_window_mode(window_mode);
        let mut row = Vec::with_capacity(lambdas.len());
        for &lambda in lambdas {
            row.push(expected_extras_single(lambda, &policy, horizon)?);
        }
        grid.push(row);
    }
    Ok(grid)
}

/// Monte Carlo estimate of the same quantity as
/// [`expected_extra_rehearsals`] in `PerCue` mode.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub mean: f64,
    pub std_err: f64,
    /// Per-cue mean missed-window counts.
    pub per_cue: Vec<f64>,
    pub trials: u64,
}

struct SimContext<'a> {
    windows: &'a [RehearsalWindow],
    starts: Vec<f64>,
    account_rates: &'a [f64],
    owners: &'a [Vec<usize>],
    cue_rates: &'a [f64],
    /// Arrivals are sampled through the final window boundary (not just the
    /// nominal horizon) so the estimator targets exactly the truncated sum
    /// the closed form computes.
    sample_horizon: f64,
    mask_words: usize,
}

fn run_trial(ctx: &SimContext<'_>, seed: u64, trial: u64) -> (f64, Vec<u32>) {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(trial + 1);

    let n_windows = ctx.windows.len();
    let mut account_masks = vec![0u64; ctx.account_rates.len() * ctx.mask_words];
    for (account, &rate) in ctx.account_rates.iter().enumerate() {
        if rate <= 0.0 {
            continue;
        }
        let exp = Exp::new(rate).expect("positive rate");
        let mask = &mut account_masks[account * ctx.mask_words..(account + 1) * ctx.mask_words];
        let mut t = 0.0;
        loop {
            t += exp.sample(&mut rng);
            if t >= ctx.sample_horizon {
                break;
            }
            // windows tile [0, sample_horizon), so the index always lands
            let idx = ctx.starts.partition_point(|&s| s <= t) - 1;
            mask[idx / 64] |= 1 << (idx % 64);
        }
    }

    let mut per_cue = vec![0u32; ctx.owners.len()];
    let mut total = 0.0;
    let mut cue_mask = vec![0u64; ctx.mask_words];
    for (cue, owners) in ctx.owners.iter().enumerate() {
        cue_mask.iter_mut().for_each(|w| *w = 0);
        for &account in owners {
            let mask = &account_masks[account * ctx.mask_words..(account + 1) * ctx.mask_words];
            for (dst, src) in cue_mask.iter_mut().zip(mask) {
                *dst |= src;
            }
        }
        let mut missed = 0u32;
        for w in 0..n_windows {
            let satisfied = if ctx.windows[w].end.is_infinite() {
                ctx.cue_rates[cue] > 0.0
            } else {
                cue_mask[w / 64] >> (w % 64) & 1 == 1
            };
            if !satisfied {
                missed += 1;
            }
        }
        per_cue[cue] = missed;
        total += missed as f64;
    }
    (total, per_cue)
}

/// Simulates Poisson visitation and counts rehearsal windows satisfied by no
/// natural visit. Deterministic for a fixed seed: every trial draws from its
/// own RNG substream keyed by `(seed, trial index)` and results aggregate in
/// trial order, so the `parallel` feature cannot change the outcome.
pub fn simulate_extra_rehearsals(
    rates: &CueRates,
    account_rates: &[f64],
    policy: &RehearsalPolicy,
    horizon: f64,
    trials: u64,
    seed: u64,
) -> Result<SimulationReport> {
    simulate_impl(rates, account_rates, policy, horizon, trials, seed, cfg!(feature = "parallel"))
}

/// Sequential reference path for [`simulate_extra_rehearsals`]; bit-identical
/// results.
pub fn simulate_extra_rehearsals_seq(
    rates: &CueRates,
    account_rates: &[f64],
    policy: &RehearsalPolicy,
    horizon: f64,
    trials: u64,
    seed: u64,
) -> Result<SimulationReport> {
    simulate_impl(rates, account_rates, policy, horizon, trials, seed, false)
}

fn simulate_impl(
    rates: &CueRates,
    account_rates: &[f64],
    policy: &RehearsalPolicy,
    horizon: f64,
    trials: u64,
    seed: u64,
    parallel: bool,
) -> Result<SimulationReport> {
    if trials == 0 {
        return Err(Error::InvalidParam("need at least one trial".into()));
    }
    if account_rates.iter().any(|r| !r.is_finite() || *r < 0.0) {
        return Err(Error::InvalidParam("account rates must be finite and >= 0".into()));
    }
    for owners in &rates.owners {
        if owners.iter().any(|&a| a >= account_rates.len()) {
            return Err(Error::InvalidParam("cue owner outside the account list".into()));
        }
    }
    let w = windows(policy, horizon)?;
    let starts: Vec<f64> = w.iter().map(|win| win.start).collect();
    let sample_horizon = w
        .last()
        .map(|win| if win.end.is_finite() { win.end } else { win.start })
        .unwrap_or(0.0);
    let ctx = SimContext {
        windows: &w,
        starts,
        account_rates,
        owners: &rates.owners,
        cue_rates: &rates.rates,
        sample_horizon,
        mask_words: w.len().div_ceil(64).max(1),
    };

    let results: Vec<(f64, Vec<u32>)> = if parallel {
        #[cfg(feature = "parallel")]
        {
            (0..trials)
                .into_par_iter()
                .map(|k| run_trial(&ctx, seed, k))
                .collect()
        }
        #[cfg(not(feature = "parallel"))]
        unreachable!("parallel path requested without the parallel feature")
    } else {
        (0..trials).map(|k| run_trial(&ctx, seed, k)).collect()
    };

    let mut per_cue_sums = vec![0.0f64; rates.cue_count()];
    let mut mean = 0.0;
    for (total, per_cue) in &results {
        mean += total;
        for (sum, missed) in per_cue_sums.iter_mut().zip(per_cue) {
            *sum += *missed as f64;
        }
    }
    mean /= trials as f64;
    let variance = if trials > 1 {
        results
            .iter()
            .map(|(total, _)| (total - mean) * (total - mean))
            .sum::<f64>()
            / (trials - 1) as f64
    } else {
        0.0
    };
    Ok(SimulationReport {
        mean,
        std_err: (variance / trials as f64).sqrt(),
        per_cue: per_cue_sums.iter().map(|s| s / trials as f64).collect(),
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rehearsal::{ScheduleKind, WindowMode};
    use proptest::prelude::*;

    fn er(sigma: f64) -> RehearsalPolicy {
        RehearsalPolicy::new(ScheduleKind::Expanding, sigma).unwrap()
    }

    fn cr(sigma: f64) -> RehearsalPolicy {
        RehearsalPolicy::new(ScheduleKind::Constant, sigma).unwrap()
    }

    #[test]
    fn presets_expand_to_75_accounts() {
        let very_active = preset_profile(PresetProfile::VeryActive);
        assert_eq!(very_active.accounts(), 75);
        assert_eq!(very_active.rates.iter().filter(|&&r| r == 1.0).count(), 10);
        assert_eq!(very_active.rates.iter().filter(|&&r| r == 1.0 / 365.0).count(), 35);

        let infrequent = preset_profile(PresetProfile::Infrequent);
        assert_eq!(infrequent.accounts(), 75);
        assert!(infrequent.rates.iter().all(|&r| r < 1.0));
        assert_eq!(infrequent.rates.iter().filter(|&&r| r == 1.0 / 3.0).count(), 2);

        let typical = preset_profile(PresetProfile::Typical);
        assert!((typical.total_rate() - 10.194074).abs() < 1e-5);
    }

    #[test]
    fn miss_probability_formula() {
        let w = RehearsalWindow { start: 0.0, end: 1.0 };
        assert!((miss_probability(1.0, &w) - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(miss_probability(0.0, &w), 1.0);
        let month = RehearsalWindow { start: 0.0, end: 31.0 };
        assert!((miss_probability(1.0 / 31.0, &month) - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn single_cue_reference_cells() {
        // ER sigma=1, lambda=1 over a year
        let x = expected_extras_single(1.0, &er(1.0), 365.0).unwrap();
        assert!((x - 0.521866).abs() / 0.521866 < 1e-3, "got {x}");
        // ER sigma=2, lambda=1/3
        let x = expected_extras_single(1.0 / 3.0, &er(2.0), 365.0).unwrap();
        assert!((x - 0.984956).abs() / 0.984956 < 1e-3, "got {x}");
        // CR sigma=3, lambda=1
        let x = expected_extras_single(1.0, &cr(3.0), 365.0).unwrap();
        assert!((x - 6.074).abs() / 6.074 < 1e-3, "got {x}");
        // CR sigma=31, lambda=1/31 (the 12-window cell)
        let x = expected_extras_single(1.0 / 31.0, &cr(31.0), 365.0).unwrap();
        assert!((x - 4.4146).abs() / 4.4146 < 1e-3, "got {x}");
    }

    #[test]
    fn cue_rates_sums_owner_rates() {
        let sets = vec![vec![0, 1], vec![1, 2], vec![3]];
        let profile = VisitationProfile::new(vec![1.0, 3.0]).unwrap();
        let rates = cue_rates(&sets, 4, &[0, 1], &profile).unwrap();
        assert_eq!(rates.rates, vec![1.0, 4.0, 3.0, 0.0]);
        assert_eq!(rates.owners[1], vec![0, 1]);
        assert!(rates.owners[3].is_empty());
    }

    #[test]
    fn cue_rates_rejects_non_injective_assignments() {
        let sets = vec![vec![0], vec![1]];
        let profile = VisitationProfile::new(vec![1.0, 1.0]).unwrap();
        assert!(cue_rates(&sets, 2, &[0, 0], &profile).is_err());
        assert!(cue_rates(&sets, 2, &[0, 5], &profile).is_err());
        assert!(cue_rates(&sets, 2, &[0], &profile).is_err());
    }

    #[test]
    fn per_session_groups_chunks_of_one_password() {
        // four cues all owned by account 0: one session class
        let rates = CueRates {
            rates: vec![1.0; 4],
            owners: vec![vec![0]; 4],
        };
        let per_cue = expected_extra_rehearsals(&rates, &er(1.0), 365.0, CountingMode::PerCue)
            .unwrap()
            .total;
        let per_session =
            expected_extra_rehearsals(&rates, &er(1.0), 365.0, CountingMode::PerSession)
                .unwrap()
                .total;
        assert!((per_cue - 4.0 * per_session).abs() < 1e-12);

        // unowned cues stay separate
        let rates = CueRates {
            rates: vec![0.0, 0.0],
            owners: vec![vec![], vec![]],
        };
        let report =
            expected_extra_rehearsals(&rates, &er(1.0), 365.0, CountingMode::PerSession).unwrap();
        assert_eq!(report.total, 18.0); // 9 windows each, all missed
    }

    #[test]
    fn superposition_means_only_the_summed_rate_matters() {
        let merged = CueRates::single(0.75).unwrap();
        let split = CueRates {
            rates: vec![0.75],
            owners: vec![vec![0, 1, 2]],
        };
        let a = expected_extra_rehearsals(&merged, &er(1.0), 365.0, CountingMode::PerCue).unwrap();
        let b = expected_extra_rehearsals(&split, &er(1.0), 365.0, CountingMode::PerCue).unwrap();
        assert_eq!(a.total, b.total);
    }

    #[test]
    fn sharing_strictly_reduces_extras() {
        let alone = expected_extras_single(0.2, &er(1.0), 365.0).unwrap();
        let shared = expected_extras_single(0.2 + 0.5, &er(1.0), 365.0).unwrap();
        assert!(shared < alone);
    }

    #[test]
    fn simulation_with_zero_rate_misses_every_window() {
        let rates = CueRates {
            rates: vec![0.0],
            owners: vec![vec![0]],
        };
        let report =
            simulate_extra_rehearsals(&rates, &[0.0], &er(1.0), 365.0, 64, 1).unwrap();
        assert_eq!(report.mean, 9.0);
        assert_eq!(report.std_err, 0.0);
        assert_eq!(report.per_cue, vec![9.0]);
    }

    #[test]
    fn simulation_matches_closed_form_on_a_small_instance() {
        let rates = CueRates {
            rates: vec![1.0],
            owners: vec![vec![0]],
        };
        for seed in [1, 7, 42] {
            let sim =
                simulate_extra_rehearsals(&rates, &[1.0], &er(1.0), 365.0, 10_000, seed).unwrap();
            let closed = 0.521866;
            assert!(
                (sim.mean - closed).abs() <= 3.0 * sim.std_err,
                "seed {seed}: {} vs {closed} (SE {})",
                sim.mean,
                sim.std_err
            );
        }
    }

    #[test]
    fn two_owners_behave_like_their_summed_rate() {
        let shared = CueRates {
            rates: vec![2.0],
            owners: vec![vec![0, 1]],
        };
        let merged = CueRates {
            rates: vec![2.0],
            owners: vec![vec![0]],
        };
        let a = simulate_extra_rehearsals(&shared, &[1.0, 1.0], &er(1.0), 365.0, 8000, 5).unwrap();
        let b = simulate_extra_rehearsals(&merged, &[2.0], &er(1.0), 365.0, 8000, 6).unwrap();
        let gap = (a.mean - b.mean).abs();
        let se = (a.std_err.powi(2) + b.std_err.powi(2)).sqrt();
        assert!(gap <= 3.0 * se, "gap {gap} vs 3 SE {}", 3.0 * se);
    }

    #[test]
    fn simulation_is_deterministic_and_parallel_agnostic() {
        let rates = CueRates {
            rates: vec![1.0, 1.0 / 7.0],
            owners: vec![vec![0], vec![1]],
        };
        let accounts = [1.0, 1.0 / 7.0];
        let a = simulate_extra_rehearsals(&rates, &accounts, &cr(3.0), 200.0, 500, 99).unwrap();
        let b = simulate_extra_rehearsals(&rates, &accounts, &cr(3.0), 200.0, 500, 99).unwrap();
        assert_eq!(a, b);
        let seq =
            simulate_extra_rehearsals_seq(&rates, &accounts, &cr(3.0), 200.0, 500, 99).unwrap();
        assert_eq!(a, seq);
    }

    #[test]
    fn tabulate_produces_the_grid_shape() {
        let grid = tabulate(
            ScheduleKind::Constant,
            WindowMode::StartsWithinHorizon,
            &[1.0, 3.0],
            &[2.0, 1.0, 1.0 / 3.0],
            365.0,
        )
        .unwrap();
        assert_eq!(grid.len(), 2);
        assert_eq!(grid[0].len(), 3);
        assert!((grid[1][1] - 6.074).abs() / 6.074 < 1e-3);
    }

    #[test]
    fn rejects_invalid_inputs() {
        assert!(CueRates::single(-1.0).is_err());
        assert!(VisitationProfile::new(vec![]).is_err());
        assert!(VisitationProfile::new(vec![-0.5]).is_err());
        let rates = CueRates::single(1.0).unwrap();
        assert!(simulate_extra_rehearsals(&rates, &[1.0], &er(1.0), 365.0, 0, 1).is_err());
        assert!(expected_extra_rehearsals(
            &CueRates { rates: vec![-1.0], owners: vec![vec![0]] },
            &er(1.0),
            365.0,
            CountingMode::PerCue
        )
        .is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn extras_decrease_in_rate_and_increase_in_horizon(
            r1 in 0.0f64..2.0,
            dr in 0.0f64..2.0,
            t1 in 10.0f64..400.0,
            dt in 0.0f64..400.0,
            sigma in 0.2f64..8.0,
        ) {
            let p = er(sigma);
            let base = expected_extras_single(r1, &p, t1).unwrap();
            let more_visits = expected_extras_single(r1 + dr, &p, t1).unwrap();
            prop_assert!(more_visits <= base + 1e-12);
            let longer = expected_extras_single(r1, &p, t1 + dt).unwrap();
            prop_assert!(longer + 1e-12 >= base);
        }

        #[test]
        fn per_session_total_never_exceeds_per_cue_total(
            rates in proptest::collection::vec(0.0f64..3.0, 1..6),
            sigma in 0.5f64..4.0,
        ) {
            // all cues owned by the same single account: one session class
            let cue_rates = CueRates {
                rates: vec![rates.iter().sum::<f64>(); rates.len()],
                owners: vec![vec![0]; rates.len()],
            };
            let p = er(sigma);
            let per_cue = expected_extra_rehearsals(&cue_rates, &p, 365.0, CountingMode::PerCue).unwrap().total;
            let per_session = expected_extra_rehearsals(&cue_rates, &p, 365.0, CountingMode::PerSession).unwrap().total;
            prop_assert!(per_session <= per_cue + 1e-12);
        }
    }
}
