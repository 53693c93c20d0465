//! Guess-limited adversary bounds, the guessing-budget economics, and a
//! toy-scale game oracle that validates the analytic bounds empirically.
//!
//! The game: an adversary who knows the scheme and all public cues picks up
//! to `r` accounts for plaintext leaks, may steal up to `h` password hashes
//! (an offline attack worth `Q` guesses), gets `s` online guesses against
//! every other account, and wins by producing the password of an account it
//! did not leak. For a scheme built on an `(n, l, gamma)`-sharing family with
//! uniform associations, at least `l - gamma*r` of a target's cues stay
//! uncompromised after `r` leaks, so the winning probability is at most
//! `Q / |AS|^(l - gamma*r)` — and at most `s*m / |AS|^(l - gamma*r)` when no
//! hash leaks occur, since the adversary then has only online guesses.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::schemes::{Scheme, SchemeKind};

/// Parameters of the security game.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecurityParams {
    /// Offline guessing budget Q.
    pub guesses: u64,
    /// Association space size per cue.
    pub assoc_space: u64,
    /// Cues per account.
    pub ell: u32,
    /// Pairwise overlap bound of the cue sets.
    pub gamma: u32,
    /// Plaintext password leaks r.
    pub leaks: u32,
    /// Stolen password hashes h.
    pub hash_leaks: u32,
    /// Online strikes per account s.
    pub strikes: u32,
    /// Account count m.
    pub accounts: u32,
}

/// A bound on the adversary's winning probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaBound {
    pub delta: f64,
    /// Set when `l - gamma*r <= 0`: every cue of some account may be
    /// compromised, so the bound degenerates to 1.
    pub vacuous: bool,
}

impl DeltaBound {
    fn certain() -> Self {
        DeltaBound { delta: 1.0, vacuous: true }
    }
}

/// `min(1, numerator / space^exponent)` computed in log space.
fn ratio_bound(numerator: f64, space: u64, exponent: i64) -> DeltaBound {
    if exponent <= 0 {
        return DeltaBound::certain();
    }
    if numerator <= 0.0 {
        return DeltaBound { delta: 0.0, vacuous: false };
    }
    let log_delta = numerator.ln() - exponent as f64 * (space as f64).ln();
    DeltaBound {
        delta: log_delta.exp().min(1.0),
        vacuous: false,
    }
}

fn uncompromised_exponent(p: &SecurityParams) -> i64 {
    p.ell as i64 - p.gamma as i64 * p.leaks as i64
}

fn check_space(p: &SecurityParams) -> Result<()> {
    if p.assoc_space < 2 {
        return Err(Error::InvalidParam(format!(
            "association space must have at least 2 elements, got {}",
            p.assoc_space
        )));
    }
    Ok(())
}

/// Offline bound: `min(1, Q / |AS|^(l - gamma*r))`, vacuous when the
/// exponent is not positive.
pub fn delta_offline_bound(p: &SecurityParams) -> Result<DeltaBound> {
    check_space(p)?;
    Ok(ratio_bound(p.guesses as f64, p.assoc_space, uncompromised_exponent(p)))
}

/// Online refinement for `h = 0`: the adversary has only `s` strikes at each
/// of `m` accounts, so `min(1, s*m / |AS|^(l - gamma*r))`. Rejects `h > 0`,
/// where the refinement does not apply.
pub fn delta_online_bound(p: &SecurityParams) -> Result<DeltaBound> {
    check_space(p)?;
    if p.hash_leaks > 0 {
        return Err(Error::InvalidParam(
            "the online bound applies only when no hashes leak (h = 0)".into(),
        ));
    }
    let numerator = p.strikes as f64 * p.accounts as f64;
    Ok(ratio_bound(numerator, p.assoc_space, uncompromised_exponent(p)))
}

/// Economic model of guessing cost.
#[derive(Debug, Clone, PartialEq)]
pub struct EconModel {
    pub label: String,
    /// Amortized dollars per guess.
    pub cost_per_guess: f64,
}

/// Rental cost in dollars of one 1 GHz processor-hour, from cloud GPU
/// instance pricing.
pub const C_GHZ_PER_HOUR: f64 = 0.06;

/// Measured hash throughputs in guesses per processor-hour.
pub const BCRYPT_GUESSES_PER_HOUR: f64 = 31e3;
pub const MD5_GUESSES_PER_HOUR: f64 = 561e6;
pub const SHA1_GUESSES_PER_HOUR: f64 = 576e6;

impl EconModel {
    /// bcrypt at cost level 12, the hardened baseline: about 1.94e-5 $/guess.
    pub fn bcrypt_l12() -> Self {
        EconModel { label: "bcrypt-l12".into(), cost_per_guess: 1.94e-5 }
    }

    pub fn md5() -> Self {
        EconModel { label: "md5".into(), cost_per_guess: 1.1e-10 }
    }

    pub fn sha1() -> Self {
        EconModel { label: "sha1".into(), cost_per_guess: 1.0e-10 }
    }

    /// Derives the per-guess cost from a hash throughput:
    /// `C_Q = C_GHz / f_H`.
    pub fn from_hash_rate(label: &str, c_ghz_per_hour: f64, guesses_per_hour: f64) -> Result<Self> {
        if !(guesses_per_hour > 0.0) || !(c_ghz_per_hour > 0.0) {
            return Err(Error::InvalidParam("rates must be positive".into()));
        }
        Ok(EconModel {
            label: label.into(),
            cost_per_guess: c_ghz_per_hour / guesses_per_hour,
        })
    }

    pub fn custom(label: &str, cost_per_guess: f64) -> Result<Self> {
        if !(cost_per_guess > 0.0) {
            return Err(Error::InvalidParam(format!(
                "cost per guess must be positive, got {cost_per_guess}"
            )));
        }
        Ok(EconModel { label: label.into(), cost_per_guess })
    }
}

impl std::str::FromStr for EconModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bcrypt" | "bcrypt-l12" => Ok(EconModel::bcrypt_l12()),
            "md5" => Ok(EconModel::md5()),
            "sha1" => Ok(EconModel::sha1()),
            other => Err(Error::Parse(format!(
                "unknown econ preset {other:?} (expected bcrypt, md5 or sha1)"
            ))),
        }
    }
}

/// Guesses a budget of `dollars` buys: `floor(B / C_Q)`.
pub fn guess_budget(dollars: f64, econ: &EconModel) -> Result<u64> {
    if !(econ.cost_per_guess > 0.0) {
        return Err(Error::InvalidParam("cost per guess must be positive".into()));
    }
    if !dollars.is_finite() || dollars < 0.0 {
        return Err(Error::InvalidParam(format!("budget must be finite and >= 0, got {dollars}")));
    }
    let q = (dollars / econ.cost_per_guess).floor();
    if q >= u64::MAX as f64 {
        return Err(Error::InvalidParam("budget overflows the guess counter".into()));
    }
    Ok(q as u64)
}

/// One row of a scheme security report.
#[derive(Debug, Clone, PartialEq)]
pub struct SecurityRow {
    pub leaks: u32,
    /// Bound with no hash leaks (online attacks only).
    pub online: DeltaBound,
    /// Bound once at least one hash leaks (offline attack with Q guesses).
    pub offline: DeltaBound,
    pub note: Option<String>,
}

/// Security report: winning-probability bounds per leak count.
#[derive(Debug, Clone, PartialEq)]
pub struct SecurityReport {
    pub scheme_name: String,
    pub guesses: u64,
    pub strikes: u32,
    pub accounts: u32,
    pub rows: Vec<SecurityRow>,
}

/// Bounds for every leak count `r = 0..=r_max`, with the baseline schemes
/// analyzed by their structure rather than the sharing-family theorem:
///
/// * reused single word: broken by any offline attack and by any leak;
/// * four reused words: strong against guessing, broken by one leak;
/// * words + suffix rule: one leak reduces the space to the rule count, so
///   `(m-1)*s >= rules` already breaks it online;
/// * independent four-word passwords: the bound is leak-independent.
pub fn scheme_security_report(
    scheme: &Scheme,
    guesses: u64,
    strikes: u32,
    accounts: u32,
    r_max: u32,
) -> Result<SecurityReport> {
    let online_budget = strikes as f64 * accounts as f64;
    let dict = scheme.assoc_space_size;
    let mut rows = Vec::new();
    for r in 0..=r_max {
        let row = match scheme.kind {
            SchemeKind::SharedCues => {
                let decl = scheme.sharing.ok_or_else(|| {
                    Error::InvalidParam("shared-cues scheme lacks a sharing declaration".into())
                })?;
                let params = SecurityParams {
                    guesses,
                    assoc_space: scheme.assoc_space_size,
                    ell: decl.set_size as u32,
                    gamma: decl.overlap_bound as u32,
                    leaks: r,
                    hash_leaks: 0,
                    strikes,
                    accounts,
                };
                let online = delta_online_bound(&params)?;
                let offline = delta_offline_bound(&SecurityParams { hash_leaks: 1, ..params })?;
                SecurityRow { leaks: r, online, offline, note: None }
            }
            SchemeKind::Sri => SecurityRow {
                leaks: r,
                online: ratio_bound(online_budget, dict, 4),
                offline: ratio_bound(guesses as f64, dict, 4),
                note: Some("independent passwords: bound does not depend on leaks".into()),
            },
            SchemeKind::ReuseWeak => {
                if r == 0 {
                    SecurityRow {
                        leaks: 0,
                        online: ratio_bound(online_budget, dict, 1),
                        offline: ratio_bound(guesses as f64, dict, 1),
                        note: None,
                    }
                } else {
                    SecurityRow {
                        leaks: r,
                        online: DeltaBound::certain(),
                        offline: DeltaBound::certain(),
                        note: Some("the leaked password is every password".into()),
                    }
                }
            }
            SchemeKind::ReuseStrong => {
                if r == 0 {
                    SecurityRow {
                        leaks: 0,
                        online: ratio_bound(online_budget, dict, 4),
                        offline: ratio_bound(guesses as f64, dict, 4),
                        note: None,
                    }
                } else {
                    SecurityRow {
                        leaks: r,
                        online: DeltaBound::certain(),
                        offline: DeltaBound::certain(),
                        note: Some("the leaked password is every password".into()),
                    }
                }
            }
            SchemeKind::Lifehacker => {
                let rules = scheme.rule_count.unwrap_or(1) as f64;
                if r == 0 {
                    // full space: three words and one rule
                    let words = ratio_bound(1.0, dict, 3).delta;
                    SecurityRow {
                        leaks: 0,
                        online: DeltaBound {
                            delta: (online_budget * words / rules).min(1.0),
                            vacuous: false,
                        },
                        offline: DeltaBound {
                            delta: (guesses as f64 * words / rules).min(1.0),
                            vacuous: false,
                        },
                        note: None,
                    }
                } else {
                    // a leak reveals the base words; only the rule remains
                    let residual_online = ((accounts.saturating_sub(1)) as f64 * strikes as f64
                        / rules)
                        .min(1.0);
                    SecurityRow {
                        leaks: r,
                        online: DeltaBound { delta: residual_online, vacuous: false },
                        offline: DeltaBound {
                            delta: (guesses as f64 / rules).min(1.0),
                            vacuous: false,
                        },
                        note: Some(format!(
                            "after a leak only the {rules} derivation rules remain unknown"
                        )),
                    }
                }
            }
        };
        rows.push(row);
    }
    Ok(SecurityReport {
        scheme_name: scheme.name.clone(),
        guesses,
        strikes,
        accounts,
        rows,
    })
}

/// Adversary strategies the empirical game oracle can play.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdversaryStrategy {
    /// Guess uniformly at random from the full association space of a fixed
    /// target account; ignores any leaks.
    UniformRandom,
    /// Leak the `r` accounts maximizing cue overlap with the best target,
    /// then enumerate the residual space of the target's uncompromised cues.
    LeakThenEnumerate,
}

impl std::str::FromStr for AdversaryStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "uniform" | "uniform-random" | "uniform-random-guessing" => {
                Ok(AdversaryStrategy::UniformRandom)
            }
            "leak" | "leak-then-enumerate" | "leak-then-enumerate-uncompromised" => {
                Ok(AdversaryStrategy::LeakThenEnumerate)
            }
            other => Err(Error::Parse(format!("unknown adversary strategy {other:?}"))),
        }
    }
}

/// Empirical result of playing the security game.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameOutcome {
    pub wins: u64,
    pub trials: u64,
    pub win_rate: f64,
    pub std_err: f64,
}

/// Caps enforced by [`game_oracle`] so one trial stays exhaustively cheap.
pub const ORACLE_MAX_ASSOC_SPACE: u64 = 256;
pub const ORACLE_MAX_SET_SIZE: usize = 4;
pub const ORACLE_MAX_ACCOUNTS: usize = 12;
pub const ORACLE_MAX_GUESSES: u64 = 1_000_000;

struct GamePlan {
    /// Target account index.
    target: usize,
    /// Accounts the adversary leaks.
    leaked: Vec<usize>,
    /// Target cues whose associations leaks do not reveal, ascending.
    residual: Vec<usize>,
}

/// Picks the target and leak set maximizing coverage of the target's cues;
/// ties break toward the lowest indices, so the plan is deterministic.
fn plan_attack(scheme: &Scheme, leaks: u32) -> GamePlan {
    let accounts = scheme.accounts();
    let mut best: Option<(usize, GamePlan)> = None;
    for target in 0..accounts {
        let target_cues = scheme.account_cue_set(target);
        let mut covered = vec![false; target_cues.len()];
        let mut leaked = Vec::new();
        for _ in 0..leaks {
            let mut pick: Option<(usize, usize)> = None; // (gain, account)
            for j in 0..accounts {
                if j == target || leaked.contains(&j) {
                    continue;
                }
                let gain = scheme
                    .account_cue_set(j)
                    .iter()
                    .filter(|c| {
                        target_cues
                            .iter()
                            .position(|t| t == *c)
                            .is_some_and(|idx| !covered[idx])
                    })
                    .count();
                let better = match pick {
                    None => true,
                    Some((best_gain, _)) => gain > best_gain,
                };
                if better {
                    pick = Some((gain, j));
                }
            }
            if let Some((_, j)) = pick {
                leaked.push(j);
                for &c in scheme.account_cue_set(j) {
                    if let Some(idx) = target_cues.iter().position(|t| *t == c) {
                        covered[idx] = true;
                    }
                }
            }
        }
        let residual: Vec<usize> = target_cues
            .iter()
            .enumerate()
            .filter(|(idx, _)| !covered[*idx])
            .map(|(_, &c)| c)
            .collect();
        let coverage = target_cues.len() - residual.len();
        let better = match &best {
            None => true,
            Some((best_coverage, _)) => coverage > *best_coverage,
        };
        if better {
            best = Some((coverage, GamePlan { target, leaked, residual }));
        }
    }
    best.expect("at least one account").1
}

fn game_trial(
    scheme: &Scheme,
    plan: &GamePlan,
    guesses: u64,
    strategy: AdversaryStrategy,
    seed: u64,
    trial: u64,
) -> bool {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(trial + 1);
    let space = scheme.assoc_space_size as u32;

    // fresh uniform associations for this trial
    let truth: Vec<u32> = (0..scheme.cue_count)
        .map(|_| rng.random_range(0..space))
        .collect();
    let target_cues = scheme.account_cue_set(plan.target);
    let target_password: Vec<u32> = target_cues.iter().map(|&c| truth[c]).collect();

    match strategy {
        AdversaryStrategy::UniformRandom => {
            let mut candidate = vec![0u32; target_cues.len()];
            for _ in 0..guesses {
                for slot in candidate.iter_mut() {
                    *slot = rng.random_range(0..space);
                }
                if candidate == target_password {
                    return true;
                }
            }
            false
        }
        AdversaryStrategy::LeakThenEnumerate => {
            // leaks reveal the association of every cue in a leaked set
            let mut known: Vec<Option<u32>> = vec![None; scheme.cue_count];
            for &j in &plan.leaked {
                for &c in scheme.account_cue_set(j) {
                    known[c] = Some(truth[c]);
                }
            }
            let mut candidate: Vec<u32> = target_cues
                .iter()
                .map(|&c| known[c].unwrap_or(0))
                .collect();
            let free_slots: Vec<usize> = target_cues
                .iter()
                .enumerate()
                .filter(|(_, c)| plan.residual.contains(c))
                .map(|(idx, _)| idx)
                .collect();
            // odometer over the residual digits, lexicographic
            let mut budget = guesses;
            loop {
                if budget == 0 {
                    return false;
                }
                budget -= 1;
                if candidate == target_password {
                    return true;
                }
                let mut pos = free_slots.len();
                loop {
                    if pos == 0 {
                        return false; // residual space exhausted
                    }
                    pos -= 1;
                    let slot = free_slots[pos];
                    if candidate[slot] + 1 < space {
                        candidate[slot] += 1;
                        for &later in &free_slots[pos + 1..] {
                            candidate[later] = 0;
                        }
                        break;
                    }
                }
            }
        }
    }
}

/// Plays the security game empirically at toy scale.
///
/// Each trial draws fresh uniform associations, hands the adversary the
/// public cue sets and its chosen plaintext leaks, and lets it spend at most
/// `guesses` attempts. Deterministic per seed with per-trial substreams;
/// trials parallelize under the `parallel` feature with identical results.
pub fn game_oracle(
    scheme: &Scheme,
    leaks: u32,
    guesses: u64,
    strategy: AdversaryStrategy,
    trials: u64,
    seed: u64,
) -> Result<GameOutcome> {
    game_oracle_impl(scheme, leaks, guesses, strategy, trials, seed, cfg!(feature = "parallel"))
}

/// Sequential reference path for [`game_oracle`]; bit-identical results.
pub fn game_oracle_seq(
    scheme: &Scheme,
    leaks: u32,
    guesses: u64,
    strategy: AdversaryStrategy,
    trials: u64,
    seed: u64,
) -> Result<GameOutcome> {
    game_oracle_impl(scheme, leaks, guesses, strategy, trials, seed, false)
}

fn game_oracle_impl(
    scheme: &Scheme,
    leaks: u32,
    guesses: u64,
    strategy: AdversaryStrategy,
    trials: u64,
    seed: u64,
    parallel: bool,
) -> Result<GameOutcome> {
    if trials == 0 {
        return Err(Error::InvalidParam("need at least one trial".into()));
    }
    if scheme.assoc_space_size > ORACLE_MAX_ASSOC_SPACE {
        return Err(Error::Guard(format!(
            "association space {} exceeds the oracle cap {ORACLE_MAX_ASSOC_SPACE}",
            scheme.assoc_space_size
        )));
    }
    let max_set = scheme.cue_sets.iter().map(Vec::len).max().unwrap_or(0);
    if max_set > ORACLE_MAX_SET_SIZE {
        return Err(Error::Guard(format!(
            "cue sets of size {max_set} exceed the oracle cap {ORACLE_MAX_SET_SIZE}"
        )));
    }
    if scheme.accounts() > ORACLE_MAX_ACCOUNTS {
        return Err(Error::Guard(format!(
            "{} accounts exceed the oracle cap {ORACLE_MAX_ACCOUNTS}",
            scheme.accounts()
        )));
    }
    if guesses > ORACLE_MAX_GUESSES {
        return Err(Error::Guard(format!(
            "guess budget {guesses} exceeds the oracle cap {ORACLE_MAX_GUESSES}"
        )));
    }
    if scheme.accounts() == 0 {
        return Err(Error::InvalidParam("scheme has no accounts".into()));
    }

    let plan = plan_attack(scheme, leaks);
    let outcomes: Vec<bool> = if parallel {
        #[cfg(feature = "parallel")]
        {
            (0..trials)
                .into_par_iter()
                .map(|k| game_trial(scheme, &plan, guesses, strategy, seed, k))
                .collect()
        }
        #[cfg(not(feature = "parallel"))]
        unreachable!("parallel path requested without the parallel feature")
    } else {
        (0..trials)
            .map(|k| game_trial(scheme, &plan, guesses, strategy, seed, k))
            .collect()
    };
    let wins = outcomes.iter().filter(|w| **w).count() as u64;
    let p = wins as f64 / trials as f64;
    Ok(GameOutcome {
        wins,
        trials,
        win_rate: p,
        std_err: (p * (1.0 - p) / trials as f64).sqrt(),
    })
}
