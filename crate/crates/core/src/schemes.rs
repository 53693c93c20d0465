//! Password-management scheme generators and the cue-to-account assignment
//! optimizer.
//!
//! Baselines: one reused word, four reused words, three words plus an
//! account-derived suffix rule, and four fresh words per account. The shared
//! cues construction instead draws one person-action-object story per base
//! cue, splits each story across two picture cues, and hands every account
//! the cue subset prescribed by a sharing family, with the account-to-set
//! mapping chosen greedily to minimize expected extra rehearsals.
//!
//! Everything here is an analysis artifact: generated "passwords" are lists
//! of inventory indices, and no secret-handling hardening is attempted.

use std::fmt::Write as _;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::data::{Dictionary, Inventories, DERIVATION_RULE_COUNT};
use crate::designs::{all_subsets_family, crt_family, SharingFamily};
use crate::error::{Error, Result};
use crate::rehearsal::{windows, RehearsalPolicy};
use crate::usability::{cue_rates, expected_extras_for_windows, CueRates, VisitationProfile};

/// Which construction produced a scheme; drives the security analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    ReuseWeak,
    ReuseStrong,
    Lifehacker,
    /// Strong Random and Independent: four fresh words per account.
    Sri,
    SharedCues,
}

impl SchemeKind {
    pub fn label(self) -> &'static str {
        match self {
            SchemeKind::ReuseWeak => "reuse-weak",
            SchemeKind::ReuseStrong => "reuse-strong",
            SchemeKind::Lifehacker => "lifehacker",
            SchemeKind::Sri => "sri",
            SchemeKind::SharedCues => "shared-cues",
        }
    }
}

/// One secret association, indexed into the shipped inventories.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Association {
    Word { word: u32 },
    Rule { rule: u32 },
    Pao { action: u32, object: u32 },
}

/// Whether a cue half asks for the story's action or its object.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PaoRole {
    Act,
    Obj,
}

/// Half of a split story cue: one picture, one person, one role.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CueHalf {
    pub image: u32,
    pub person: u32,
    pub role: PaoRole,
}

/// A public cue pairing the action half of story `i` with the object half of
/// story `i+1`, so that seeing one cue rehearses parts of two stories.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitCue {
    pub first: CueHalf,
    pub second: CueHalf,
}

/// Declared sharing parameters of the family a scheme is built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SharingDecl {
    pub universe: usize,
    pub set_size: usize,
    pub overlap_bound: usize,
}

/// A generated password-management scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct Scheme {
    pub name: String,
    pub kind: SchemeKind,
    /// Number of distinct cue-association pairs the user must maintain.
    pub cue_count: usize,
    /// Candidate public cue sets; accounts use a subset of these.
    pub cue_sets: Vec<Vec<usize>>,
    /// `assignment[i]` is the index into `cue_sets` used by account `i`.
    pub assignment: Vec<usize>,
    /// One association per cue, same indexing as cue ids.
    pub associations: Vec<Association>,
    /// Size of the association space per cue.
    pub assoc_space_size: u64,
    /// Split story cues (shared-cues schemes only).
    pub split_cues: Vec<SplitCue>,
    /// Number of derivation rules (suffix-rule scheme only).
    pub rule_count: Option<u32>,
    pub sharing: Option<SharingDecl>,
    pub profile: VisitationProfile,
}

impl Scheme {
    pub fn accounts(&self) -> usize {
        self.assignment.len()
    }

    pub fn account_cue_set(&self, account: usize) -> &[usize] {
        &self.cue_sets[self.assignment[account]]
    }

    /// The password of an account: its associations in ascending cue order.
    pub fn password(&self, account: usize) -> Vec<(usize, Association)> {
        self.account_cue_set(account)
            .iter()
            .map(|&cue| (cue, self.associations[cue]))
            .collect()
    }

    /// Natural rehearsal rate of every cue under this scheme's profile.
    pub fn cue_rates(&self) -> Result<CueRates> {
        cue_rates(&self.cue_sets, self.cue_count, &self.assignment, &self.profile)
    }

    /// Serializes the scheme in the versioned dump format: a header, one
    /// `account: cue_ids | association_ids` line per account, then the
    /// association inventory (and split-cue inventory for shared cues).
    pub fn dump(&self, inv: &Inventories) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# scheme v1 name={} kind={} n={} m={} as={}",
            self.name,
            self.kind.label(),
            self.cue_count,
            self.accounts(),
            self.assoc_space_size
        );
        for account in 0..self.accounts() {
            let cues = self.account_cue_set(account);
            let ids: Vec<String> = cues.iter().map(|c| c.to_string()).collect();
            let _ = writeln!(out, "{account}: {} | {}", ids.join(","), ids.join(","));
        }
        let _ = writeln!(out, "# associations");
        for (cue, assoc) in self.associations.iter().enumerate() {
            match assoc {
                Association::Word { word } => {
                    let _ = writeln!(out, "{cue}: word={}", inv.dictionary.word(*word as usize));
                }
                Association::Rule { rule } => {
                    let _ = writeln!(out, "{cue}: rule={rule}");
                }
                Association::Pao { action, object } => {
                    let _ = writeln!(
                        out,
                        "{cue}: action={} object={}",
                        inv.actions[*action as usize], inv.objects[*object as usize]
                    );
                }
            }
        }
        if !self.split_cues.is_empty() {
            let _ = writeln!(out, "# cues");
            for (cue, split) in self.split_cues.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{cue}: act=(image:{} person:{}) obj=(image:{} person:{})",
                    inv.images[split.first.image as usize],
                    inv.names[split.first.person as usize],
                    inv.images[split.second.image as usize],
                    inv.names[split.second.person as usize],
                );
            }
        }
        out
    }
}

fn identity_assignment(m: usize) -> Vec<usize> {
    (0..m).collect()
}

fn sample_word(dict: &Dictionary, rng: &mut impl Rng) -> u32 {
    rng.random_range(0..dict.len()) as u32
}

/// One random dictionary word reused everywhere: a single shared cue whose
/// natural rate is the user's total visit rate.
pub fn gen_reuse_weak(
    dict: &Dictionary,
    profile: &VisitationProfile,
    rng: &mut impl Rng,
) -> Result<Scheme> {
    let m = profile.accounts();
    Ok(Scheme {
        name: "reuse-weak".into(),
        kind: SchemeKind::ReuseWeak,
        cue_count: 1,
        cue_sets: vec![vec![0]; m],
        assignment: identity_assignment(m),
        associations: vec![Association::Word { word: sample_word(dict, rng) }],
        assoc_space_size: dict.len() as u64,
        split_cues: Vec::new(),
        rule_count: None,
        sharing: None,
        profile: profile.clone(),
    })
}

/// Four random dictionary words reused everywhere: four shared cues.
pub fn gen_reuse_strong(
    dict: &Dictionary,
    profile: &VisitationProfile,
    rng: &mut impl Rng,
) -> Result<Scheme> {
    let m = profile.accounts();
    let associations = (0..4)
        .map(|_| Association::Word { word: sample_word(dict, rng) })
        .collect();
    Ok(Scheme {
        name: "reuse-strong".into(),
        kind: SchemeKind::ReuseStrong,
        cue_count: 4,
        cue_sets: vec![vec![0, 1, 2, 3]; m],
        assignment: identity_assignment(m),
        associations,
        assoc_space_size: dict.len() as u64,
        split_cues: Vec::new(),
        rule_count: None,
        sharing: None,
        profile: profile.clone(),
    })
}

/// Three shared words plus a per-account derived suffix. The derivation rule
/// is modeled as an opaque identifier: only the number of rules enters any
/// computation. `strict` enforces the canonical 50-rule set.
pub fn gen_lifehacker(
    dict: &Dictionary,
    rule_count: u32,
    profile: &VisitationProfile,
    rng: &mut impl Rng,
    strict: bool,
) -> Result<Scheme> {
    if rule_count == 0 {
        return Err(Error::InvalidParam("need at least one derivation rule".into()));
    }
    if strict && rule_count as usize != DERIVATION_RULE_COUNT {
        return Err(Error::InvalidParam(format!(
            "strict mode requires exactly {DERIVATION_RULE_COUNT} derivation rules, got {rule_count}"
        )));
    }
    let m = profile.accounts();
    let mut associations: Vec<Association> = (0..3)
        .map(|_| Association::Word { word: sample_word(dict, rng) })
        .collect();
    associations.push(Association::Rule { rule: rng.random_range(0..rule_count) });
    Ok(Scheme {
        name: "lifehacker".into(),
        kind: SchemeKind::Lifehacker,
        cue_count: 4,
        cue_sets: vec![vec![0, 1, 2, 3]; m],
        assignment: identity_assignment(m),
        associations,
        assoc_space_size: dict.len() as u64,
        split_cues: Vec::new(),
        rule_count: Some(rule_count),
        sharing: None,
        profile: profile.clone(),
    })
}

/// Strong Random and Independent: four fresh words per account, no sharing.
pub fn gen_sri(
    dict: &Dictionary,
    profile: &VisitationProfile,
    rng: &mut impl Rng,
) -> Result<Scheme> {
    let m = profile.accounts();
    let cue_sets: Vec<Vec<usize>> = (0..m).map(|i| (4 * i..4 * i + 4).collect()).collect();
    let associations = (0..4 * m)
        .map(|_| Association::Word { word: sample_word(dict, rng) })
        .collect();
    Ok(Scheme {
        name: "sri".into(),
        kind: SchemeKind::Sri,
        cue_count: 4 * m,
        cue_sets,
        assignment: identity_assignment(m),
        associations,
        assoc_space_size: dict.len() as u64,
        split_cues: Vec::new(),
        rule_count: None,
        sharing: None,
        profile: profile.clone(),
    })
}

/// Samples `n` person-action-object stories and splits them across cues:
/// cue `i` shows the action half of story `i` and the object half of story
/// `i+1 (mod n)`, so association `i` is `(action_i, object_{i+1 mod n})`.
/// Each association is uniform over the action-object product and independent
/// across cues, because every action and object is drawn exactly once.
pub fn create_pao_stories(
    n: usize,
    action_count: usize,
    object_count: usize,
    images: &[String],
    names: &[String],
    rng: &mut impl Rng,
) -> Result<(Vec<SplitCue>, Vec<Association>)> {
    if n == 0 {
        return Err(Error::InvalidParam("need at least one story".into()));
    }
    if action_count == 0 || object_count == 0 {
        return Err(Error::InvalidParam("action and object lists may not be empty".into()));
    }
    if images.len() != n || names.len() != n {
        return Err(Error::InvalidParam(format!(
            "need exactly {n} images and names, got {} and {}",
            images.len(),
            names.len()
        )));
    }
    let actions: Vec<u32> = (0..n).map(|_| rng.random_range(0..action_count) as u32).collect();
    let objects: Vec<u32> = (0..n).map(|_| rng.random_range(0..object_count) as u32).collect();

    let mut cues = Vec::with_capacity(n);
    let mut associations = Vec::with_capacity(n);
    for i in 0..n {
        let next = (i + 1) % n;
        cues.push(SplitCue {
            first: CueHalf { image: i as u32, person: i as u32, role: PaoRole::Act },
            second: CueHalf { image: next as u32, person: next as u32, role: PaoRole::Obj },
        });
        associations.push(Association::Pao { action: actions[i], object: objects[next] });
    }
    Ok((cues, associations))
}

/// Builds a shared-cues scheme over a verified sharing family: stories for
/// every base cue, then a greedy account-to-set mapping that feeds frequently
/// visited accounts to as many distinct cues as possible.
pub fn shared_cues_generate(
    name: &str,
    family: &SharingFamily,
    profile: &VisitationProfile,
    policy: &RehearsalPolicy,
    horizon: f64,
    rng: &mut impl Rng,
    inv: &Inventories,
) -> Result<Scheme> {
    if family.len() < profile.accounts() {
        return Err(Error::InvalidParam(format!(
            "family has {} sets but the profile has {} accounts",
            family.len(),
            profile.accounts()
        )));
    }
    let verified = family.verify()?;
    if verified.gamma_observed > family.overlap_bound() {
        return Err(Error::InvalidParam(format!(
            "family claims overlap {} but verification observed {}",
            family.overlap_bound(),
            verified.gamma_observed
        )));
    }
    let n = family.universe_size();
    if inv.images.len() < n || inv.names.len() < n {
        return Err(Error::InvalidParam(format!(
            "inventories provide {} images / {} names but the family needs {n}",
            inv.images.len(),
            inv.names.len()
        )));
    }
    let (split_cues, associations) = create_pao_stories(
        n,
        inv.actions.len(),
        inv.objects.len(),
        &inv.images[..n],
        &inv.names[..n],
        rng,
    )?;
    let assignment = greedy_map(&profile.rates, family.sets(), n, policy, horizon)?;
    Ok(Scheme {
        name: name.into(),
        kind: SchemeKind::SharedCues,
        cue_count: n,
        cue_sets: family.sets().to_vec(),
        assignment,
        associations,
        assoc_space_size: (inv.actions.len() * inv.objects.len()) as u64,
        split_cues,
        rule_count: None,
        sharing: Some(SharingDecl {
            universe: n,
            set_size: family.set_size(),
            overlap_bound: family.overlap_bound(),
        }),
        profile: profile.clone(),
    })
}

/// Total expected extra rehearsals of an injective assignment, counted per
/// cue over the whole universe (cues left uncovered miss every window).
pub fn assignment_objective(
    rates: &[f64],
    sets: &[Vec<usize>],
    cue_count: usize,
    assignment: &[usize],
    policy: &RehearsalPolicy,
    horizon: f64,
) -> Result<f64> {
    let w = windows(policy, horizon)?;
    let mut cue_rate = vec![0.0f64; cue_count];
    for (account, &set_idx) in assignment.iter().enumerate() {
        for &cue in &sets[set_idx] {
            cue_rate[cue] += rates[account];
        }
    }
    Ok(cue_rate
        .iter()
        .map(|&r| expected_extras_for_windows(r, &w))
        .sum())
}

/// Greedy account-to-cue-set mapping.
///
/// Accounts are relabeled in descending visit-rate order; each in turn takes
/// the unused set whose adoption most reduces the expected extra rehearsals,
/// i.e. maximizes `sum over cues of [X(current rate) - X(current + rate)]`.
/// Ties break toward the lowest set index, so the result is deterministic.
/// Candidate evaluations run in parallel under the `parallel` feature; the
/// argmax is reduced in index order either way.
pub fn greedy_map(
    rates: &[f64],
    sets: &[Vec<usize>],
    cue_count: usize,
    policy: &RehearsalPolicy,
    horizon: f64,
) -> Result<Vec<usize>> {
    if rates.len() > sets.len() {
        return Err(Error::InvalidParam(format!(
            "more accounts ({}) than cue sets ({})",
            rates.len(),
            sets.len()
        )));
    }
    if rates.iter().any(|r| !r.is_finite() || *r < 0.0) {
        return Err(Error::InvalidParam("rates must be finite and >= 0".into()));
    }
    for set in sets {
        if set.iter().any(|&c| c >= cue_count) {
            return Err(Error::InvalidParam("cue set references a cue outside the universe".into()));
        }
    }
    let w = windows(policy, horizon)?;

    // relabel: process accounts by descending rate, stably
    let mut order: Vec<usize> = (0..rates.len()).collect();
    order.sort_by(|&a, &b| rates[b].partial_cmp(&rates[a]).unwrap().then(a.cmp(&b)));

    let mut cue_rate = vec![0.0f64; cue_count];
    let mut current_extras: Vec<f64> = cue_rate
        .iter()
        .map(|&r| expected_extras_for_windows(r, &w))
        .collect();
    let mut used = vec![false; sets.len()];
    let mut assignment = vec![usize::MAX; rates.len()];

    for &account in &order {
        let rate = rates[account];
        let delta_for = |set: &Vec<usize>| -> f64 {
            set.iter()
                .map(|&cue| {
                    current_extras[cue]
                        - expected_extras_for_windows(cue_rate[cue] + rate, &w)
                })
                .sum()
        };
        let candidates: Vec<(usize, f64)> = {
            #[cfg(feature = "parallel")]
            {
                sets.par_iter()
                    .enumerate()
                    .filter(|(j, _)| !used[*j])
                    .map(|(j, set)| (j, delta_for(set)))
                    .collect()
            }
            #[cfg(not(feature = "parallel"))]
            {
                sets.iter()
                    .enumerate()
                    .filter(|(j, _)| !used[*j])
                    .map(|(j, set)| (j, delta_for(set)))
                    .collect()
            }
        };
        // pick the largest reduction; candidates arrive in index order, so
        // strict improvement keeps the lowest index on ties
        let mut best = candidates[0];
        for &(j, delta) in &candidates[1..] {
            if delta > best.1 {
                best = (j, delta);
            }
        }
        let chosen = best.0;
        used[chosen] = true;
        assignment[account] = chosen;
        for &cue in &sets[chosen] {
            cue_rate[cue] += rate;
            current_extras[cue] = expected_extras_for_windows(cue_rate[cue], &w);
        }
    }
    Ok(assignment)
}

/// Maximum family size accepted by [`exact_min_rehearsal`]; the enumeration
/// is factorial in this number.
pub const EXACT_ASSIGNMENT_LIMIT: usize = 9;

/// Brute-force optimum of the assignment problem: enumerates every injective
/// account-to-set mapping and returns a minimizer with its objective.
/// Guarded to families of at most [`EXACT_ASSIGNMENT_LIMIT`] sets.
pub fn exact_min_rehearsal(
    rates: &[f64],
    sets: &[Vec<usize>],
    cue_count: usize,
    policy: &RehearsalPolicy,
    horizon: f64,
) -> Result<(Vec<usize>, f64)> {
    if sets.len() > EXACT_ASSIGNMENT_LIMIT {
        return Err(Error::Guard(format!(
            "exact enumeration is limited to families of {EXACT_ASSIGNMENT_LIMIT} sets, got {}",
            sets.len()
        )));
    }
    if rates.len() > sets.len() {
        return Err(Error::InvalidParam(format!(
            "more accounts ({}) than cue sets ({})",
            rates.len(),
            sets.len()
        )));
    }
    let w = windows(policy, horizon)?;
    let objective = |assignment: &[usize]| -> f64 {
        let mut cue_rate = vec![0.0f64; cue_count];
        for (account, &set_idx) in assignment.iter().enumerate() {
            for &cue in &sets[set_idx] {
                cue_rate[cue] += rates[account];
            }
        }
        cue_rate
            .iter()
            .map(|&r| expected_extras_for_windows(r, &w))
            .sum()
    };

    let mut best: Option<(Vec<usize>, f64)> = None;
    let mut assignment = vec![usize::MAX; rates.len()];
    let mut used = vec![false; sets.len()];
    fn recurse(
        depth: usize,
        accounts: usize,
        sets_len: usize,
        assignment: &mut Vec<usize>,
        used: &mut Vec<bool>,
        objective: &impl Fn(&[usize]) -> f64,
        best: &mut Option<(Vec<usize>, f64)>,
    ) {
        if depth == accounts {
            let value = objective(assignment);
            let better = match best {
                None => true,
                Some((_, incumbent)) => value < *incumbent,
            };
            if better {
                *best = Some((assignment.clone(), value));
            }
            return;
        }
        for j in 0..sets_len {
            if !used[j] {
                used[j] = true;
                assignment[depth] = j;
                recurse(depth + 1, accounts, sets_len, assignment, used, objective, best);
                used[j] = false;
            }
        }
    }
    recurse(
        0,
        rates.len(),
        sets.len(),
        &mut assignment,
        &mut used,
        &objective,
        &mut best,
    );
    best.ok_or_else(|| Error::InvalidParam("no accounts to assign".into()))
}

/// The named schemes the command line can generate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeId {
    ReuseWeak,
    ReuseStrong,
    Lifehacker,
    Sri,
    /// Shared cues over all 4-subsets of a 9-cue universe (9,4,3)-sharing.
    Sc0,
    /// Shared cues over the residue family (43,4,1)-sharing of size 90.
    Sc1,
    /// Shared cues over the residue family (60,5,1)-sharing of size 90.
    Sc2,
}

impl SchemeId {
    pub const ALL: [SchemeId; 7] = [
        SchemeId::ReuseWeak,
        SchemeId::ReuseStrong,
        SchemeId::Lifehacker,
        SchemeId::Sri,
        SchemeId::Sc0,
        SchemeId::Sc1,
        SchemeId::Sc2,
    ];

    pub fn label(self) -> &'static str {
        match self {
            SchemeId::ReuseWeak => "reuse-weak",
            SchemeId::ReuseStrong => "reuse-strong",
            SchemeId::Lifehacker => "lifehacker",
            SchemeId::Sri => "sri",
            SchemeId::Sc0 => "sc0",
            SchemeId::Sc1 => "sc1",
            SchemeId::Sc2 => "sc2",
        }
    }
}

impl std::str::FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "reuse-weak" => Ok(SchemeId::ReuseWeak),
            "reuse-strong" => Ok(SchemeId::ReuseStrong),
            "lifehacker" => Ok(SchemeId::Lifehacker),
            "sri" => Ok(SchemeId::Sri),
            "sc0" | "sc-0" => Ok(SchemeId::Sc0),
            "sc1" | "sc-1" => Ok(SchemeId::Sc1),
            "sc2" | "sc-2" => Ok(SchemeId::Sc2),
            other => Err(Error::Parse(format!("unknown scheme {other:?}"))),
        }
    }
}

/// The sharing family behind a shared-cues preset.
pub fn preset_family(id: SchemeId) -> Result<Option<SharingFamily>> {
    Ok(match id {
        SchemeId::Sc0 => Some(all_subsets_family(9, 4)?),
        SchemeId::Sc1 => Some(crt_family(90, &[9, 10, 11, 13])?.0),
        SchemeId::Sc2 => Some(crt_family(90, &[9, 10, 11, 13, 17])?.0),
        _ => None,
    })
}

/// Generates any named scheme deterministically from a seed.
pub fn generate_scheme(
    id: SchemeId,
    profile: &VisitationProfile,
    policy: &RehearsalPolicy,
    horizon: f64,
    seed: u64,
    inv: &Inventories,
) -> Result<Scheme> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    match id {
        SchemeId::ReuseWeak => gen_reuse_weak(&inv.dictionary, profile, &mut rng),
        SchemeId::ReuseStrong => gen_reuse_strong(&inv.dictionary, profile, &mut rng),
        SchemeId::Lifehacker => gen_lifehacker(
            &inv.dictionary,
            DERIVATION_RULE_COUNT as u32,
            profile,
            &mut rng,
            true,
        ),
        SchemeId::Sri => gen_sri(&inv.dictionary, profile, &mut rng),
        SchemeId::Sc0 | SchemeId::Sc1 | SchemeId::Sc2 => {
            let family = preset_family(id)?.expect("shared-cues preset");
            let name = match id {
                SchemeId::Sc0 => "SC-0",
                SchemeId::Sc1 => "SC-1",
                _ => "SC-2",
            };
            shared_cues_generate(name, &family, profile, policy, horizon, &mut rng, inv)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rehearsal::ScheduleKind;
    use crate::usability::{
        expected_extra_rehearsals, preset_profile, CountingMode, PresetProfile,
    };

    fn rng(seed: u64) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(seed)
    }

    fn er1() -> RehearsalPolicy {
        RehearsalPolicy::new(ScheduleKind::Expanding, 1.0).unwrap()
    }

    fn small_profile(rates: &[f64]) -> VisitationProfile {
        VisitationProfile::new(rates.to_vec()).unwrap()
    }

    #[test]
    fn reuse_weak_has_one_cue_shared_by_all() {
        let inv = Inventories::builtin();
        let profile = small_profile(&[1.0, 0.5, 0.2]);
        let scheme = gen_reuse_weak(&inv.dictionary, &profile, &mut rng(3)).unwrap();
        assert_eq!(scheme.cue_count, 1);
        assert_eq!(scheme.account_cue_set(0), scheme.account_cue_set(1));
        assert_eq!(scheme.account_cue_set(1), scheme.account_cue_set(2));
        let rates = scheme.cue_rates().unwrap();
        assert!((rates.rates[0] - 1.7).abs() < 1e-12);

        let again = gen_reuse_weak(&inv.dictionary, &profile, &mut rng(3)).unwrap();
        assert_eq!(scheme, again);
    }

    #[test]
    fn reuse_strong_and_lifehacker_have_four_shared_cues() {
        let inv = Inventories::builtin();
        let profile = small_profile(&[1.0, 0.5]);
        let strong = gen_reuse_strong(&inv.dictionary, &profile, &mut rng(1)).unwrap();
        assert_eq!(strong.cue_count, 4);
        let lh = gen_lifehacker(&inv.dictionary, 50, &profile, &mut rng(1), true).unwrap();
        assert_eq!(lh.cue_count, 4);
        assert!(matches!(lh.associations[3], Association::Rule { .. }));
        assert!(gen_lifehacker(&inv.dictionary, 49, &profile, &mut rng(1), true).is_err());
        assert!(gen_lifehacker(&inv.dictionary, 49, &profile, &mut rng(1), false).is_ok());
    }

    #[test]
    fn sri_uses_four_fresh_cues_per_account() {
        let inv = Inventories::builtin();
        let profile = preset_profile(PresetProfile::Typical);
        let scheme = gen_sri(&inv.dictionary, &profile, &mut rng(9)).unwrap();
        assert_eq!(scheme.cue_count, 300);
        assert_eq!(scheme.account_cue_set(2), &[8, 9, 10, 11]);
        let rates = scheme.cue_rates().unwrap();
        for (cue, owners) in rates.owners.iter().enumerate() {
            assert_eq!(owners.len(), 1, "cue {cue} should have exactly one owner");
        }
    }

    #[test]
    fn baseline_usability_identities() {
        let inv = Inventories::builtin();
        let profile = preset_profile(PresetProfile::Occasional);
        let weak = gen_reuse_weak(&inv.dictionary, &profile, &mut rng(2)).unwrap();
        let strong = gen_reuse_strong(&inv.dictionary, &profile, &mut rng(2)).unwrap();
        let lh = gen_lifehacker(&inv.dictionary, 50, &profile, &mut rng(2), true).unwrap();

        let report = |s: &Scheme, mode| {
            expected_extra_rehearsals(&s.cue_rates().unwrap(), &er1(), 365.0, mode)
                .unwrap()
                .total
        };
        // per-session: one reused password is one rehearsal session
        let weak_session = report(&weak, CountingMode::PerSession);
        assert!((report(&strong, CountingMode::PerSession) - weak_session).abs() < 1e-12);
        assert!((report(&lh, CountingMode::PerSession) - weak_session).abs() < 1e-12);
        // per-cue: four identical cues count four times
        assert!((report(&strong, CountingMode::PerCue) - 4.0 * weak_session).abs() < 1e-9);
        assert!((report(&lh, CountingMode::PerCue) - report(&strong, CountingMode::PerCue)).abs() < 1e-12);
    }

    #[test]
    fn pao_wraparound_indexing() {
        let inv = Inventories::toy(4, 4, 3);
        let (cues, assocs) =
            create_pao_stories(3, 4, 4, &inv.images[..3], &inv.names[..3], &mut rng(5)).unwrap();
        assert_eq!(cues.len(), 3);
        assert_eq!(cues[2].second.person, 0, "last cue wraps to story 0");
        // association 2 pairs action 2 with object 0
        let own_actions: Vec<u32> = (0..3)
            .map(|i| match assocs[i] {
                Association::Pao { action, .. } => action,
                _ => unreachable!(),
            })
            .collect();
        let mut redraw = rng(5);
        let expect_actions: Vec<u32> =
            (0..3).map(|_| redraw.random_range(0..4) as u32).collect();
        assert_eq!(own_actions, expect_actions);

        let single_inv = Inventories::toy(4, 4, 1);
        let (cues, assocs) =
            create_pao_stories(1, 4, 4, &single_inv.images[..1], &single_inv.names[..1], &mut rng(5))
                .unwrap();
        assert_eq!(cues[0].first.person, cues[0].second.person);
        assert!(matches!(assocs[0], Association::Pao { .. }));
    }

    #[test]
    fn pao_rejects_mismatched_lists() {
        let inv = Inventories::toy(4, 4, 3);
        assert!(create_pao_stories(2, 4, 4, &inv.images[..3], &inv.names[..2], &mut rng(0)).is_err());
        assert!(create_pao_stories(0, 4, 4, &[], &[], &mut rng(0)).is_err());
    }

    #[test]
    fn pao_associations_are_independent_of_cue_labels() {
        // the sampler never reads images or names, so relabeling them must
        // not change which associations are drawn
        let a = Inventories::toy(5, 7, 4);
        let mut b = Inventories::toy(5, 7, 4);
        b.images.reverse();
        b.names.rotate_left(1);
        let (_, assoc_a) =
            create_pao_stories(4, 5, 7, &a.images[..4], &a.names[..4], &mut rng(11)).unwrap();
        let (_, assoc_b) =
            create_pao_stories(4, 5, 7, &b.images[..4], &b.names[..4], &mut rng(11)).unwrap();
        assert_eq!(assoc_a, assoc_b);
    }

    #[test]
    fn pao_marginals_are_uniform_chi_square() {
        // 25,000 stories of 4 cells each; chi-square over the 16 joint cells
        // against uniform. Critical value for df=15 at alpha=0.01.
        let act = 4;
        let obj = 4;
        let n = 100_000;
        let inv = Inventories::toy(act, obj, n);
        let (_, assocs) =
            create_pao_stories(n, act, obj, &inv.images, &inv.names, &mut rng(123)).unwrap();
        let mut counts = vec![0u64; act * obj];
        for assoc in &assocs {
            if let Association::Pao { action, object } = assoc {
                counts[*action as usize * obj + *object as usize] += 1;
            }
        }
        let expected = n as f64 / (act * obj) as f64;
        let chi2: f64 = counts
            .iter()
            .map(|&c| {
                let d = c as f64 - expected;
                d * d / expected
            })
            .sum();
        assert!(chi2 < 30.578, "chi-square {chi2} rejects uniformity at alpha=0.01");
    }

    #[test]
    fn shared_cues_presets_have_the_documented_shapes() {
        let inv = Inventories::builtin();
        let profile = preset_profile(PresetProfile::VeryActive);
        let sc1 = generate_scheme(SchemeId::Sc1, &profile, &er1(), 365.0, 7, inv).unwrap();
        assert_eq!(sc1.cue_count, 43);
        assert_eq!(sc1.cue_sets.len(), 90);
        assert_eq!(sc1.accounts(), 75);
        assert_eq!(sc1.assoc_space_size, 19_600);
        let decl = sc1.sharing.unwrap();
        assert_eq!((decl.universe, decl.set_size, decl.overlap_bound), (43, 4, 1));
        for account in 0..sc1.accounts() {
            assert_eq!(sc1.password(account).len(), 4);
        }

        let sc0 = generate_scheme(SchemeId::Sc0, &profile, &er1(), 365.0, 7, inv).unwrap();
        assert_eq!((sc0.cue_count, sc0.cue_sets.len()), (9, 126));
        let sc2 = generate_scheme(SchemeId::Sc2, &profile, &er1(), 365.0, 7, inv).unwrap();
        assert_eq!((sc2.cue_count, sc2.cue_sets.len()), (60, 90));
        assert_eq!(sc2.sharing.unwrap().set_size, 5);
    }

    #[test]
    fn shared_cues_assignment_respects_the_overlap_bound() {
        let inv = Inventories::builtin();
        let profile = preset_profile(PresetProfile::Typical);
        let scheme = generate_scheme(SchemeId::Sc1, &profile, &er1(), 365.0, 42, inv).unwrap();
        let gamma = scheme.sharing.unwrap().overlap_bound;
        for a in 0..scheme.accounts() {
            for b in (a + 1)..scheme.accounts() {
                let sa = scheme.account_cue_set(a);
                let sb = scheme.account_cue_set(b);
                let overlap = sa.iter().filter(|c| sb.contains(c)).count();
                assert!(overlap <= gamma);
            }
        }
    }

    #[test]
    fn shared_cues_rejects_small_families() {
        let inv = Inventories::builtin();
        let profile = preset_profile(PresetProfile::Typical); // 75 accounts
        let (family, _) = crt_family(10, &[9, 10, 11, 13]).unwrap();
        assert!(shared_cues_generate("x", &family, &profile, &er1(), 365.0, &mut rng(0), inv).is_err());
    }

    #[test]
    fn greedy_map_breaks_ties_toward_low_indices() {
        let sets = vec![vec![0, 1], vec![0, 1]];
        let pi = greedy_map(&[1.0], &sets, 2, &er1(), 365.0).unwrap();
        assert_eq!(pi, vec![0]);

        // two disjoint sets and two accounts: symmetric objective, so the
        // tie-break must give the faster account the lower set index
        let sets = vec![vec![0, 1], vec![2, 3]];
        let pi = greedy_map(&[1.0, 1.0 / 365.0], &sets, 4, &er1(), 365.0).unwrap();
        assert_eq!(pi, vec![0, 1]);
        let objective_a =
            assignment_objective(&[1.0, 1.0 / 365.0], &sets, 4, &pi, &er1(), 365.0).unwrap();
        let objective_b =
            assignment_objective(&[1.0, 1.0 / 365.0], &sets, 4, &[1, 0], &er1(), 365.0).unwrap();
        assert!((objective_a - objective_b).abs() < 1e-12);
    }

    #[test]
    fn greedy_map_is_a_deterministic_injection() {
        let (family, _) = crt_family(20, &[5, 7, 9]).unwrap();
        let rates = [1.0, 1.0, 0.5, 0.25, 0.1, 0.0, 0.0, 1.0 / 31.0];
        let a = greedy_map(&rates, family.sets(), 21, &er1(), 365.0).unwrap();
        let b = greedy_map(&rates, family.sets(), 21, &er1(), 365.0).unwrap();
        assert_eq!(a, b);
        let mut seen = std::collections::HashSet::new();
        assert!(a.iter().all(|j| seen.insert(*j)), "assignment must be injective");
    }

    #[test]
    fn exact_optimum_never_exceeds_greedy() {
        let policy = er1();
        let sets = vec![vec![0, 1], vec![1, 2], vec![2, 3]];
        let rates = [1.0, 1.0 / 365.0];
        let (optimum, best) = exact_min_rehearsal(&rates, &sets, 4, &policy, 365.0).unwrap();
        let greedy = greedy_map(&rates, &sets, 4, &policy, 365.0).unwrap();
        let greedy_value =
            assignment_objective(&rates, &sets, 4, &greedy, &policy, 365.0).unwrap();
        assert!(best <= greedy_value + 1e-12);
        let check = assignment_objective(&rates, &sets, 4, &optimum, &policy, 365.0).unwrap();
        assert!((check - best).abs() < 1e-12);
    }

    #[test]
    fn exact_enumeration_guard() {
        let sets: Vec<Vec<usize>> = (0..10).map(|i| vec![i]).collect();
        let err = exact_min_rehearsal(&[1.0], &sets, 10, &er1(), 365.0).unwrap_err();
        assert!(err.is_guard());
    }

    #[test]
    fn single_account_exact_equals_greedy() {
        let sets = vec![vec![0, 1], vec![2, 3], vec![0, 2]];
        let (optimum, best) = exact_min_rehearsal(&[2.0], &sets, 4, &er1(), 365.0).unwrap();
        let greedy = greedy_map(&[2.0], &sets, 4, &er1(), 365.0).unwrap();
        let greedy_value = assignment_objective(&[2.0], &sets, 4, &greedy, &er1(), 365.0).unwrap();
        assert_eq!(optimum, greedy);
        assert!((best - greedy_value).abs() < 1e-12);
    }

    #[test]
    fn scheme_dump_has_the_versioned_layout() {
        let inv = Inventories::builtin();
        let profile = small_profile(&[1.0, 0.5]);
        let scheme = gen_reuse_strong(&inv.dictionary, &profile, &mut rng(4)).unwrap();
        let dump = scheme.dump(inv);
        assert!(dump.starts_with("# scheme v1 name=reuse-strong kind=reuse-strong n=4 m=2 as=20000"));
        assert!(dump.contains("0: 0,1,2,3 | 0,1,2,3"));
        assert!(dump.contains("# associations"));
        assert!(dump.lines().any(|l| l.starts_with("0: word=")));
    }
}
