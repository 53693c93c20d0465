//! Construction, verification, composition and size bounds for
//! `(n, l, gamma)`-sharing set families.
//!
//! A family of `m` subsets of `{0, ..., n-1}` is `(n, l, gamma)`-sharing when
//! every set has exactly `l` elements, the union of all sets covers the
//! universe, and any two sets (by index) intersect in at most `gamma`
//! elements. These families drive cue sharing: `l` controls password
//! strength, `gamma` controls how much one leaked password reveals about the
//! others, and small `n` keeps the memorization burden low.

use std::fmt::Write as _;

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Default cap on how many candidate subsets the enumeration-based
/// constructions will scan. A resource guard, not a correctness condition.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 10_000_000;

/// A family of equal-sized cue-index subsets with a claimed overlap bound.
///
/// `overlap_bound` is the *claimed* maximum pairwise intersection; it is
/// certified (or refuted) by [`verify_family`], which reports what actually
/// holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharingFamily {
    universe_size: usize,
    sets: Vec<Vec<usize>>,
    set_size: usize,
    overlap_bound: usize,
}

impl SharingFamily {
    /// Builds a family, normalizing each set to sorted order and checking the
    /// cheap structural invariants: elements in `[0, n)`, all sets the same
    /// size, no repeated element within a set. The pairwise overlap claim is
    /// deliberately *not* checked here; use [`verify_family`].
    pub fn new(universe_size: usize, sets: Vec<Vec<usize>>, overlap_bound: usize) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::InvalidParam(
                "a sharing family needs at least one set (use `empty` for placeholders)".into(),
            ));
        }
        let set_size = sets[0].len();
        if set_size == 0 {
            return Err(Error::InvalidParam("sets must be nonempty".into()));
        }
        let mut sets = sets;
        for s in &mut sets {
            if s.len() != set_size {
                return Err(Error::InvalidParam(format!(
                    "all sets must have the same cardinality (expected {set_size}, got {})",
                    s.len()
                )));
            }
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidParam("sets may not repeat an element".into()));
            }
            if *s.last().unwrap() >= universe_size {
                return Err(Error::InvalidParam(format!(
                    "element {} outside universe [0, {universe_size})",
                    s.last().unwrap()
                )));
            }
        }
        Ok(SharingFamily {
            universe_size,
            sets,
            set_size,
            overlap_bound: overlap_bound.min(set_size),
        })
    }

    /// A family with no sets, used as a neutral block in compositions.
    pub fn empty(universe_size: usize, set_size: usize, overlap_bound: usize) -> Self {
        SharingFamily {
            universe_size,
            sets: Vec::new(),
            set_size,
            overlap_bound,
        }
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn set_size(&self) -> usize {
        self.set_size
    }

    pub fn overlap_bound(&self) -> usize {
        self.overlap_bound
    }

    /// Exhaustively measures this family; see [`verify_family`].
    pub fn verify(&self) -> Result<FamilyProfile> {
        verify_family(&self.sets, self.universe_size)
    }

    /// Serializes to the line-oriented exchange format:
    /// a `# sharing-family v1 n=.. l=.. gamma=..` header, then one
    /// comma-separated ascending set per line.
    pub fn to_exchange_format(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# sharing-family v1 n={} l={} gamma={}",
            self.universe_size, self.set_size, self.overlap_bound
        );
        for set in &self.sets {
            let line: Vec<String> = set.iter().map(|e| e.to_string()).collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        out
    }

    /// Parses the exchange format produced by [`Self::to_exchange_format`].
    pub fn from_exchange_format(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::Parse("empty family file".into()))?;
        let rest = header
            .strip_prefix("# sharing-family v1")
            .ok_or_else(|| Error::Parse("missing `# sharing-family v1` header".into()))?;
        let mut n = None;
        let mut l = None;
        let mut gamma = None;
        for token in rest.split_whitespace() {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad header token {token:?}")))?;
            let value: usize = value
                .parse()
                .map_err(|_| Error::Parse(format!("bad header value in {token:?}")))?;
            match key {
                "n" => n = Some(value),
                "l" => l = Some(value),
                "gamma" => gamma = Some(value),
                other => return Err(Error::Parse(format!("unknown header key {other:?}"))),
            }
        }
        let (n, l, gamma) = match (n, l, gamma) {
            (Some(n), Some(l), Some(g)) => (n, l, g),
            _ => return Err(Error::Parse("header must declare n=, l= and gamma=".into())),
        };
        let mut sets = Vec::new();
        for (lineno, line) in lines {
            let set: Result<Vec<usize>> = line
                .split(',')
                .map(|tok| {
                    tok.trim().parse::<usize>().map_err(|_| {
                        Error::Parse(format!("line {}: bad element {tok:?}", lineno + 1))
                    })
                })
                .collect();
            sets.push(set?);
        }
        let family = SharingFamily::new(n, sets, gamma)?;
        if family.set_size != l {
            return Err(Error::Parse(format!(
                "header declares l={l} but sets have {} elements",
                family.set_size
            )));
        }
        Ok(family)
    }
}

/// What [`verify_family`] measured: exact, exhaustive statistics of a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyProfile {
    /// Size of the union of all sets.
    pub n_effective: usize,
    pub ell_min: usize,
    pub ell_max: usize,
    /// Maximum intersection over all ordered pairs of distinct set indices.
    pub gamma_observed: usize,
    /// Number of sets.
    pub m: usize,
    /// Whether the union covers the full declared universe.
    pub covering: bool,
}

/// Chunked bitmask over the universe, one u64 per 64 elements.
fn to_masks(sets: &[Vec<usize>], universe_size: usize) -> Vec<Vec<u64>> {
    let words = universe_size.div_ceil(64).max(1);
    sets.iter()
        .map(|s| {
            let mut mask = vec![0u64; words];
            for &e in s {
                mask[e / 64] |= 1 << (e % 64);
            }
            mask
        })
        .collect()
}

fn intersection_size(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

fn max_intersection_from(row: &[u64], later: &[Vec<u64>]) -> usize {
    later
        .iter()
        .map(|other| intersection_size(row, other))
        .max()
        .unwrap_or(0)
}

/// Exhaustively computes a [`FamilyProfile`]: union size, cardinality range
/// and the maximum pairwise intersection over all O(m^2) index pairs.
/// Deterministic; the pair scan parallelizes under the `parallel` feature
/// without changing the result.
pub fn verify_family(sets: &[Vec<usize>], universe_size: usize) -> Result<FamilyProfile> {
    verify_family_impl(sets, universe_size, cfg!(feature = "parallel"))
}

/// Sequential reference path for [`verify_family`]; same result always.
pub fn verify_family_seq(sets: &[Vec<usize>], universe_size: usize) -> Result<FamilyProfile> {
    verify_family_impl(sets, universe_size, false)
}

fn verify_family_impl(
    sets: &[Vec<usize>],
    universe_size: usize,
    parallel: bool,
) -> Result<FamilyProfile> {
    if sets.is_empty() {
        return Err(Error::InvalidParam("cannot verify an empty family".into()));
    }
    let mut union = vec![false; universe_size];
    let mut ell_min = usize::MAX;
    let mut ell_max = 0;
    for s in sets {
        let mut seen = std::collections::HashSet::new();
        for &e in s {
            if e >= universe_size {
                return Err(Error::InvalidParam(format!(
                    "element {e} outside universe [0, {universe_size})"
                )));
            }
            if !seen.insert(e) {
                return Err(Error::InvalidParam(format!("set repeats element {e}")));
            }
            union[e] = true;
        }
        ell_min = ell_min.min(s.len());
        ell_max = ell_max.max(s.len());
    }
    let masks = to_masks(sets, universe_size);

    let gamma_observed = if parallel {
        #[cfg(feature = "parallel")]
        {
            masks
                .par_iter()
                .enumerate()
                .map(|(i, row)| max_intersection_from(row, &masks[i + 1..]))
                .max()
                .unwrap_or(0)
        }
        #[cfg(not(feature = "parallel"))]
        unreachable!("parallel path requested without the parallel feature")
    } else {
        masks
            .iter()
            .enumerate()
            .map(|(i, row)| max_intersection_from(row, &masks[i + 1..]))
            .max()
            .unwrap_or(0)
    };

    let n_effective = union.iter().filter(|b| **b).count();
    Ok(FamilyProfile {
        n_effective,
        ell_min,
        ell_max,
        gamma_observed,
        m: sets.len(),
        covering: n_effective == universe_size,
    })
}

/// Non-fatal diagnostics from [`crt_family`]: the construction runs with any
/// moduli, but the sharing guarantee only holds under these conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CrtWarning {
    /// `gcd(moduli[i], moduli[j]) > 1`; the residue-collision argument lapses.
    NotPairwiseCoprime { i: usize, j: usize },
    /// Moduli not strictly increasing as the construction expects.
    NotStrictlyIncreasing,
}

impl std::fmt::Display for CrtWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CrtWarning::NotPairwiseCoprime { i, j } => write!(
                f,
                "moduli at positions {i} and {j} share a factor; the overlap guarantee lapses"
            ),
            CrtWarning::NotStrictlyIncreasing => {
                write!(f, "moduli are not strictly increasing; the overlap guarantee lapses")
            }
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn pairwise_coprime_violation(moduli: &[u64]) -> Option<(usize, usize)> {
    for i in 0..moduli.len() {
        for j in (i + 1)..moduli.len() {
            if gcd(moduli[i], moduli[j]) != 1 {
                return Some((i, j));
            }
        }
    }
    None
}

/// Residue construction: account `i` (running 1..=m, exactly as the
/// construction is stated) receives the set `{ (i mod n_j) + N_j }` where
/// `N_j` is the prefix sum of the earlier moduli. For pairwise co-prime
/// moduli and `m <= n_1 * ... * n_(gamma+1)` the result is a
/// `(sum n_j, l, gamma)`-sharing family: two accounts agreeing in gamma+1
/// residue positions would violate the Chinese Remainder Theorem.
///
/// Runs for arbitrary moduli; conditions that void the guarantee are
/// reported as warnings, not errors.
pub fn crt_family(m: usize, moduli: &[u64]) -> Result<(SharingFamily, Vec<CrtWarning>)> {
    if m == 0 {
        return Err(Error::InvalidParam("need at least one set (m >= 1)".into()));
    }
    if moduli.is_empty() {
        return Err(Error::InvalidParam("need at least one modulus".into()));
    }
    if moduli.iter().any(|&n| n == 0) {
        return Err(Error::InvalidParam("moduli must be positive".into()));
    }

    let mut warnings = Vec::new();
    if !moduli.windows(2).all(|w| w[0] < w[1]) {
        warnings.push(CrtWarning::NotStrictlyIncreasing);
    }
    if let Some((i, j)) = pairwise_coprime_violation(moduli) {
        warnings.push(CrtWarning::NotPairwiseCoprime { i, j });
    }

    let universe: usize = moduli.iter().map(|&n| n as usize).sum();
    let mut sets = Vec::with_capacity(m);
    for i in 1..=m as u64 {
        let mut set = Vec::with_capacity(moduli.len());
        let mut offset = 0usize;
        for &n_j in moduli {
            set.push((i % n_j) as usize + offset);
            offset += n_j as usize;
        }
        sets.push(set);
    }

    let claimed_gamma = if warnings.is_empty() {
        claimed_overlap(m, moduli)
    } else {
        moduli.len()
    };
    let family = SharingFamily::new(universe, sets, claimed_gamma)?;
    Ok((family, warnings))
}

/// Smallest gamma whose product bound admits m sets, per the sharing lemma.
fn claimed_overlap(m: usize, moduli: &[u64]) -> usize {
    let mut product = BigUint::from(1u32);
    for (idx, &n) in moduli.iter().enumerate() {
        product *= n;
        if BigUint::from(m) <= product {
            return idx; // gamma + 1 = idx + 1 moduli used
        }
    }
    moduli.len()
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1; // exact: C(n, i+1) is an integer
    }
    acc
}

/// The counting upper bound on the size of any `(n, l, gamma)`-sharing
/// family: `floor( C(n, gamma+1) / C(l, gamma+1) )`, computed with exact
/// big-integer arithmetic. Each set contains `C(l, gamma+1)` of the
/// `(gamma+1)`-subsets of the universe and no such subset fits in two sets.
pub fn family_size_bound(n: u64, ell: u64, gamma: u64) -> Result<BigUint> {
    if ell == 0 || ell > n {
        return Err(Error::InvalidParam(format!(
            "need 0 < l <= n, got l={ell}, n={n}"
        )));
    }
    if gamma >= ell {
        return Err(Error::InvalidParam(format!(
            "need gamma < l, got gamma={gamma}, l={ell}"
        )));
    }
    Ok(binomial(n, gamma + 1) / binomial(ell, gamma + 1))
}

/// Order in which enumeration-based constructions scan the candidate subsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumerationOrder {
    /// Ascending-tuple lexicographic order: {0,1,2}, {0,1,3}, ..., {1,2,3}, ...
    Lexicographic,
    /// A seeded Fisher-Yates shuffle of the full candidate list.
    SeededRandom(u64),
}

/// Iterates l-subsets of [0, n) in ascending-tuple lexicographic order as
/// bitmasks, calling `f` on each. Requires n <= 64.
fn for_each_combination(n: usize, ell: usize, mut f: impl FnMut(u64)) {
    let mut idx: Vec<usize> = (0..ell).collect();
    loop {
        let mask = idx.iter().fold(0u64, |m, &e| m | (1 << e));
        f(mask);
        // advance to the next combination
        let mut i = ell;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - ell {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in (i + 1)..ell {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn enumeration_guard(n: usize, ell: usize, budget: u64) -> Result<()> {
    if n > 64 {
        return Err(Error::InvalidParam(format!(
            "subset enumeration supports universes up to 64 elements, got n={n}"
        )));
    }
    let count = binomial(n as u64, ell as u64);
    let count_u128: u128 = count
        .try_into()
        .unwrap_or(u128::MAX);
    if count_u128 > budget as u128 {
        return Err(Error::BudgetExceeded {
            needed: count_u128,
            budget,
        });
    }
    Ok(())
}

fn mask_to_set(mask: u64) -> Vec<usize> {
    (0..64).filter(|b| mask >> b & 1 == 1).collect()
}

/// Greedy construction: scan all `C(n, l)` subsets in the given order and
/// admit a subset iff it intersects every previously admitted subset in at
/// most `gamma` elements. Deterministic for lexicographic order and for any
/// fixed seed. Uses [`DEFAULT_ENUMERATION_BUDGET`].
pub fn greedy_family(
    n: usize,
    ell: usize,
    gamma: usize,
    order: EnumerationOrder,
) -> Result<SharingFamily> {
    greedy_family_with_budget(n, ell, gamma, order, DEFAULT_ENUMERATION_BUDGET)
}

/// [`greedy_family`] with an explicit enumeration budget.
pub fn greedy_family_with_budget(
    n: usize,
    ell: usize,
    gamma: usize,
    order: EnumerationOrder,
    budget: u64,
) -> Result<SharingFamily> {
    if ell == 0 || ell > n {
        return Err(Error::InvalidParam(format!(
            "need 0 < l <= n, got l={ell}, n={n}"
        )));
    }
    enumeration_guard(n, ell, budget)?;

    let mut admitted: Vec<u64> = Vec::new();
    let admit = |admitted: &mut Vec<u64>, mask: u64| {
        if admitted
            .iter()
            .all(|&a| (a & mask).count_ones() as usize <= gamma)
        {
            admitted.push(mask);
        }
    };
    match order {
        EnumerationOrder::Lexicographic => {
            for_each_combination(n, ell, |mask| admit(&mut admitted, mask));
        }
        EnumerationOrder::SeededRandom(seed) => {
            let mut all: Vec<u64> = Vec::new();
            for_each_combination(n, ell, |mask| all.push(mask));
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            all.shuffle(&mut rng);
            for mask in all {
                admit(&mut admitted, mask);
            }
        }
    }

    let sets: Vec<Vec<usize>> = admitted.iter().map(|&m| mask_to_set(m)).collect();
    SharingFamily::new(n, sets, gamma)
}

/// All `C(n, l)` subsets of size `l`, which form an `(n, l, l-1)`-sharing
/// family of maximum possible size (distinct equal-sized sets can never
/// intersect in `l` elements).
pub fn all_subsets_family(n: usize, ell: usize) -> Result<SharingFamily> {
    all_subsets_family_with_budget(n, ell, DEFAULT_ENUMERATION_BUDGET)
}

/// [`all_subsets_family`] with an explicit enumeration budget.
pub fn all_subsets_family_with_budget(n: usize, ell: usize, budget: u64) -> Result<SharingFamily> {
    if ell == 0 || ell > n {
        return Err(Error::InvalidParam(format!(
            "need 0 < l <= n, got l={ell}, n={n}"
        )));
    }
    enumeration_guard(n, ell, budget)?;
    let mut sets = Vec::new();
    for_each_combination(n, ell, |mask| sets.push(mask_to_set(mask)));
    SharingFamily::new(n, sets, ell.saturating_sub(1))
}

/// Composition: a base residue family of size `n_1 * ... * n_(gamma+1)` plus,
/// for each block `i`, an `(n_i, l, gamma)`-sharing family translated into
/// that block's offset range. Base sets meet each block in exactly one
/// element, so cross-group intersections stay at 1 <= gamma and the union is
/// `(sum n_i, l, gamma)`-sharing of size `prod + sum m_i`.
///
/// `blocks` must be empty (all blocks empty) or supply one family per
/// modulus; each nonempty block is re-verified before use. Requires strictly
/// increasing, pairwise co-prime moduli and `1 <= gamma < l`.
pub fn composed_family(
    moduli: &[u64],
    gamma: usize,
    blocks: &[SharingFamily],
) -> Result<SharingFamily> {
    let ell = moduli.len();
    if ell < 2 {
        return Err(Error::InvalidParam("composition needs at least two moduli".into()));
    }
    if gamma == 0 || gamma >= ell {
        return Err(Error::InvalidParam(format!(
            "composition needs 1 <= gamma < l, got gamma={gamma}, l={ell}"
        )));
    }
    if !moduli.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidParam("moduli must be strictly increasing".into()));
    }
    if let Some((i, j)) = pairwise_coprime_violation(moduli) {
        return Err(Error::InvalidParam(format!(
            "moduli at positions {i} and {j} are not co-prime"
        )));
    }
    if !blocks.is_empty() && blocks.len() != ell {
        return Err(Error::InvalidParam(format!(
            "expected one block family per modulus ({ell}) or none, got {}",
            blocks.len()
        )));
    }

    let base_m: u64 = moduli[..=gamma].iter().product();
    let (base, warnings) = crt_family(base_m as usize, moduli)?;
    debug_assert!(warnings.is_empty());

    let mut sets = base.sets().to_vec();
    let mut offset = 0usize;
    for (i, &n_i) in moduli.iter().enumerate() {
        if let Some(block) = blocks.get(i) {
            if !block.is_empty() {
                if block.universe_size() != n_i as usize {
                    return Err(Error::InvalidParam(format!(
                        "block {i} spans universe {} but modulus is {n_i}",
                        block.universe_size()
                    )));
                }
                if block.set_size() != ell {
                    return Err(Error::InvalidParam(format!(
                        "block {i} has sets of size {}, expected {ell}",
                        block.set_size()
                    )));
                }
                let profile = block.verify()?;
                if profile.gamma_observed > gamma {
                    return Err(Error::InvalidParam(format!(
                        "block {i} has pairwise overlap {} > gamma={gamma}",
                        profile.gamma_observed
                    )));
                }
                for set in block.sets() {
                    sets.push(set.iter().map(|&e| e + offset).collect());
                }
            }
        }
        offset += n_i as usize;
    }

    let family = SharingFamily::new(offset, sets, gamma)?;
    let profile = family.verify()?;
    if profile.gamma_observed > gamma {
        return Err(Error::InvalidParam(format!(
            "composed family violates its overlap bound: observed {} > gamma={gamma}",
            profile.gamma_observed
        )));
    }
    Ok(family)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn crt_hand_trace_single_account() {
        // i = 1: {1 mod 2 + 0, 1 mod 3 + 2} = {1, 3}
        let (family, warnings) = crt_family(1, &[2, 3]).unwrap();
        assert!(warnings.is_empty());
        assert_eq!(family.sets(), &[vec![1, 3]]);
        assert_eq!(family.universe_size(), 5);
    }

    #[test]
    fn crt_90_is_43_4_1_sharing() {
        let (family, warnings) = crt_family(90, &[9, 10, 11, 13]).unwrap();
        assert!(warnings.is_empty());
        assert_eq!(family.overlap_bound(), 1);
        let profile = family.verify().unwrap();
        assert_eq!(profile.m, 90);
        assert_eq!(profile.n_effective, 43);
        assert_eq!(profile.gamma_observed, 1);
        assert_eq!((profile.ell_min, profile.ell_max), (4, 4));
        assert!(profile.covering);
    }

    #[test]
    fn crt_990_is_43_4_2_sharing() {
        let (family, _) = crt_family(990, &[9, 10, 11, 13]).unwrap();
        assert_eq!(family.overlap_bound(), 2);
        let profile = family.verify().unwrap();
        assert_eq!(profile.gamma_observed, 2);
        assert_eq!(profile.n_effective, 43);
    }

    #[test]
    fn crt_one_past_the_product_bound_overlaps_more() {
        // 91 = 9*10 + 1: the pigeonhole argument no longer protects gamma = 1.
        let (family, _) = crt_family(91, &[9, 10, 11, 13]).unwrap();
        let profile = family.verify().unwrap();
        assert_eq!(profile.gamma_observed, 2);
    }

    #[test]
    fn crt_rejects_degenerate_inputs_and_warns_on_guarantee_gaps() {
        assert!(crt_family(0, &[2, 3]).is_err());
        assert!(crt_family(5, &[]).is_err());
        assert!(crt_family(5, &[2, 0]).is_err());

        let (_, warnings) = crt_family(10, &[4, 6]).unwrap();
        assert!(warnings
            .iter()
            .any(|w| matches!(w, CrtWarning::NotPairwiseCoprime { .. })));
        let (_, warnings) = crt_family(10, &[5, 3]).unwrap();
        assert!(warnings.contains(&CrtWarning::NotStrictlyIncreasing));
    }

    #[test]
    fn verifier_reports_duplicate_sets_as_full_overlap() {
        let profile = verify_family(&[vec![0, 1], vec![0, 1]], 2).unwrap();
        assert_eq!(profile.gamma_observed, 2);
        assert!(profile.covering);
    }

    #[test]
    fn verifier_rejects_out_of_range_elements() {
        assert!(verify_family(&[vec![0, 5]], 3).is_err());
        assert!(verify_family(&[], 3).is_err());
        assert!(verify_family(&[vec![1, 1]], 3).is_err());
    }

    #[test]
    fn size_bound_reference_values() {
        let b = |n, l, g| family_size_bound(n, l, g).unwrap().to_string();
        assert_eq!(b(43, 4, 1), "150");
        assert_eq!(b(9, 4, 3), "126");
        assert_eq!(b(20, 6, 2), "57");
        assert!(family_size_bound(4, 5, 1).is_err());
        assert!(family_size_bound(9, 4, 4).is_err());
        // gamma = l - 1 is allowed
        assert_eq!(b(9, 4, 3), "126");
    }

    #[test]
    fn size_bound_is_exact_for_large_universes() {
        // C(120, 5) / C(8, 5) = 190578024 / 56
        assert_eq!(
            family_size_bound(120, 8, 4).unwrap().to_string(),
            "3403179"
        );
    }

    #[test]
    fn all_subsets_is_maximal_for_gamma_ell_minus_one() {
        let family = all_subsets_family(9, 4).unwrap();
        assert_eq!(family.len(), 126);
        let profile = family.verify().unwrap();
        assert_eq!(profile.gamma_observed, 3);
        assert!(profile.covering);

        let single = all_subsets_family(4, 4).unwrap();
        assert_eq!(single.sets(), &[vec![0, 1, 2, 3]]);

        let singletons = all_subsets_family(5, 1).unwrap();
        assert_eq!(singletons.len(), 5);
        assert_eq!(singletons.verify().unwrap().gamma_observed, 0);
    }

    #[test]
    fn greedy_admits_everything_when_gamma_is_ell_minus_one() {
        let family = greedy_family(9, 4, 3, EnumerationOrder::Lexicographic).unwrap();
        assert_eq!(family.len(), 126);
    }

    #[test]
    fn greedy_disjoint_pairs_form_a_maximum_matching() {
        let family = greedy_family(5, 2, 0, EnumerationOrder::Lexicographic).unwrap();
        assert_eq!(family.sets(), &[vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn greedy_lexicographic_16_4_1() {
        // The reference table reports 16 for these parameters under an
        // unstated order; ascending-tuple lexicographic gives 15.
        let family = greedy_family(16, 4, 1, EnumerationOrder::Lexicographic).unwrap();
        assert_eq!(family.len(), 15);
        assert_eq!(family.verify().unwrap().gamma_observed, 1);
    }

    #[test]
    fn greedy_budget_guard_fires() {
        let err = greedy_family_with_budget(40, 8, 2, EnumerationOrder::Lexicographic, 1000)
            .unwrap_err();
        assert!(err.is_guard());
    }

    #[test]
    fn greedy_output_is_maximal() {
        for (n, l, g) in [(9, 4, 1), (10, 3, 1), (8, 3, 0)] {
            let family = greedy_family(n, l, g, EnumerationOrder::Lexicographic).unwrap();
            let masks: Vec<u64> = family
                .sets()
                .iter()
                .map(|s| s.iter().fold(0u64, |m, &e| m | (1 << e)))
                .collect();
            let mut rejected_could_join = false;
            for_each_combination(n, l, |mask| {
                if masks.contains(&mask) {
                    return;
                }
                if masks
                    .iter()
                    .all(|&a| (a & mask).count_ones() as usize <= g)
                {
                    rejected_could_join = true;
                }
            });
            assert!(!rejected_could_join, "greedy({n},{l},{g}) missed an admissible subset");
        }
    }

    #[test]
    fn seeded_random_order_is_deterministic_and_valid() {
        let a = greedy_family(10, 3, 1, EnumerationOrder::SeededRandom(7)).unwrap();
        let b = greedy_family(10, 3, 1, EnumerationOrder::SeededRandom(7)).unwrap();
        assert_eq!(a, b);
        assert!(a.verify().unwrap().gamma_observed <= 1);
        let c = greedy_family(10, 3, 1, EnumerationOrder::SeededRandom(8)).unwrap();
        assert!(c.verify().unwrap().gamma_observed <= 1);
    }

    #[test]
    fn composed_with_empty_blocks_equals_the_base_family() {
        let composed = composed_family(&[2, 3], 1, &[]).unwrap();
        let (base, _) = crt_family(6, &[2, 3]).unwrap();
        assert_eq!(composed.sets(), base.sets());
    }

    #[test]
    fn composed_43_4_1_with_greedy_blocks_verifies_and_beats_the_base() {
        let moduli = [9u64, 10, 11, 13];
        let blocks: Vec<SharingFamily> = moduli
            .iter()
            .map(|&n| greedy_family(n as usize, 4, 1, EnumerationOrder::Lexicographic).unwrap())
            .collect();
        let composed = composed_family(&moduli, 1, &blocks).unwrap();
        assert!(composed.len() >= 90, "composition should not shrink the base");
        let profile = composed.verify().unwrap();
        assert_eq!(profile.gamma_observed, 1);
        assert_eq!(profile.n_effective, 43);
        assert!(profile.covering);
        assert_eq!(composed.len(), 90 + blocks.iter().map(|b| b.len()).sum::<usize>());
    }

    #[test]
    fn composed_rejects_oversized_blocks_and_bad_moduli() {
        let wide = SharingFamily::new(11, vec![vec![0, 1, 2, 10]], 1).unwrap();
        // block 0 spans 11 elements but modulus is 9
        assert!(composed_family(&[9, 10, 11, 13], 1, &[
            wide,
            SharingFamily::empty(10, 4, 1),
            SharingFamily::empty(11, 4, 1),
            SharingFamily::empty(13, 4, 1),
        ])
        .is_err());
        assert!(composed_family(&[4, 6], 1, &[]).is_err()); // not co-prime
        assert!(composed_family(&[3, 2], 1, &[]).is_err()); // not increasing
        assert!(composed_family(&[2, 3], 0, &[]).is_err()); // gamma 0 unsupported
    }

    #[test]
    fn exchange_format_round_trip() {
        let (family, _) = crt_family(12, &[3, 5, 7]).unwrap();
        let text = family.to_exchange_format();
        assert!(text.starts_with("# sharing-family v1 n=15 l=3 gamma="));
        let parsed = SharingFamily::from_exchange_format(&text).unwrap();
        assert_eq!(parsed, family);

        assert!(SharingFamily::from_exchange_format("").is_err());
        assert!(SharingFamily::from_exchange_format("0,1\n2,3\n").is_err());
        assert!(
            SharingFamily::from_exchange_format("# sharing-family v1 n=4 l=3 gamma=1\n0,1\n")
                .is_err()
        );
    }

    #[test]
    fn parallel_and_sequential_verification_agree() {
        let (family, _) = crt_family(200, &[9, 10, 11, 13]).unwrap();
        let a = verify_family(family.sets(), 43).unwrap();
        let b = verify_family_seq(family.sets(), 43).unwrap();
        assert_eq!(a, b);
    }

    fn coprime_tuples() -> impl Strategy<Value = Vec<u64>> {
        // draw 3-4 moduli from a pool of pairwise co-prime numbers
        let pool = vec![4u64, 5, 7, 9, 11, 13, 17, 19, 23];
        proptest::sample::subsequence(pool, 3..=4)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn crt_respects_the_product_bound(moduli in coprime_tuples(), gamma in 0usize..3, frac in 0.05f64..1.0) {
            let gamma = gamma.min(moduli.len() - 1);
            let cap: u64 = moduli[..=gamma].iter().product();
            let m = ((cap as f64 * frac).ceil() as usize).max(1);
            let (family, warnings) = crt_family(m, &moduli).unwrap();
            prop_assert!(warnings.is_empty());
            let profile = family.verify().unwrap();
            prop_assert!(profile.gamma_observed <= gamma,
                "crt({m}, {moduli:?}) observed {} > gamma {gamma}", profile.gamma_observed);
        }

        #[test]
        fn crt_bound_is_tight_one_past_the_product(moduli in coprime_tuples(), gamma in 0usize..2) {
            let gamma = gamma.min(moduli.len() - 2);
            let cap: u64 = moduli[..=gamma].iter().product();
            let (family, _) = crt_family(cap as usize + 1, &moduli).unwrap();
            let profile = family.verify().unwrap();
            prop_assert!(profile.gamma_observed > gamma,
                "expected an overlap beyond {gamma} at m = {} for {moduli:?}", cap + 1);
        }

        #[test]
        fn observed_size_respects_the_counting_bound(moduli in coprime_tuples(), m in 1usize..200) {
            let (family, _) = crt_family(m, &moduli).unwrap();
            let profile = family.verify().unwrap();
            let bound = family_size_bound(
                profile.n_effective as u64,
                family.set_size() as u64,
                profile.gamma_observed as u64,
            ).unwrap();
            prop_assert!(BigUint::from(profile.m) <= bound);
        }

        #[test]
        fn greedy_family_always_verifies(n in 4usize..12, ell in 2usize..5, gamma in 0usize..3, seed in 0u64..3) {
            prop_assume!(ell <= n && gamma < ell);
            for order in [EnumerationOrder::Lexicographic, EnumerationOrder::SeededRandom(seed)] {
                let family = greedy_family(n, ell, gamma, order).unwrap();
                let profile = family.verify().unwrap();
                prop_assert!(profile.gamma_observed <= gamma);
                let bound = family_size_bound(n as u64, ell as u64, gamma as u64).unwrap();
                prop_assert!(BigUint::from(profile.m) <= bound);
            }
        }
    }
}
