//! Reference-table reproductions with pinned conventions.
//!
//! Every table states its conventions in a footer, and any cell whose
//! published value our pinned conventions do not reproduce carries a
//! side-by-side `paper=` annotation rather than a silent substitution.

use rehearsal_lab::designs::{
    composed_family, family_size_bound, greedy_family_with_budget, EnumerationOrder,
};
use rehearsal_lab::error::{Error, Result};
use rehearsal_lab::rehearsal::{
    windows, windows_first, RehearsalPolicy, ScheduleKind, WindowMode,
};
use rehearsal_lab::schemes::{greedy_map, preset_family, SchemeId};
use rehearsal_lab::security::{
    delta_offline_bound, delta_online_bound, guess_budget, EconModel, SecurityParams,
    BCRYPT_GUESSES_PER_HOUR, C_GHZ_PER_HOUR, MD5_GUESSES_PER_HOUR, SHA1_GUESSES_PER_HOUR,
};
use rehearsal_lab::usability::{
    cue_rates, expected_extra_rehearsals, expected_extras_for_windows, preset_profile, tabulate,
    CountingMode, PresetProfile,
};

use crate::output::{fmt_sig, Cell, Table};

/// A published reference value for annotation purposes.
#[derive(Clone, Copy)]
struct PaperRef {
    text: &'static str,
    value: f64,
    /// The table printed this with a leading "approximately".
    approx: bool,
}

const fn paper(text: &'static str, value: f64) -> PaperRef {
    PaperRef { text, value, approx: false }
}

const fn paper_approx(text: &'static str, value: f64) -> PaperRef {
    PaperRef { text, value, approx: true }
}

/// Half a unit in the last printed digit of a reference value, the natural
/// "does our number round to theirs" tolerance. `2e-15` keeps one
/// significant digit (tolerance 0.5e-15); an all-zero print like `0.0000`
/// falls back to its decimal places.
fn printed_half_ulp(text: &str, value: f64) -> f64 {
    let clean: String = text.chars().filter(|c| !matches!(c, ',' | '~' | '$')).collect();
    let mantissa = clean.split(['e', 'E']).next().unwrap_or("");
    let significant = mantissa
        .chars()
        .filter(char::is_ascii_digit)
        .skip_while(|&c| c == '0')
        .count();
    if significant == 0 || value == 0.0 {
        let decimals = mantissa.split('.').nth(1).map_or(0, str::len) as i32;
        return 0.5 * 10f64.powi(-decimals);
    }
    let magnitude = value.abs().log10().floor() as i32;
    0.5 * 10f64.powi(magnitude - (significant as i32 - 1))
}

/// Annotates the computed value when it does not reproduce the published one
/// at its printed precision; values the table itself marks as approximate get
/// an extra 2% of slack.
fn refcell(computed: f64, r: PaperRef) -> Cell {
    let mut tolerance = printed_half_ulp(r.text, r.value);
    if r.approx {
        tolerance += 0.02 * r.value.abs().max(1.0);
    }
    if (computed - r.value).abs() <= tolerance {
        Cell::value(computed)
    } else {
        Cell::annotated(computed, format!("paper={}", r.text))
    }
}

const PROFILES: [PresetProfile; 4] = PresetProfile::ALL;

fn cr_complete() -> RehearsalPolicy {
    RehearsalPolicy::new(ScheduleKind::Constant, 1.0)
        .unwrap()
        .with_window_mode(WindowMode::CompleteWindowsOnly)
}

fn er_starts() -> RehearsalPolicy {
    RehearsalPolicy::new(ScheduleKind::Expanding, 1.0).unwrap()
}

fn sq_complete() -> RehearsalPolicy {
    RehearsalPolicy::new(ScheduleKind::Squared, 1.0)
        .unwrap()
        .with_window_mode(WindowMode::CompleteWindowsOnly)
}

/// Per-session total for one of the word-reuse baselines without sampling
/// associations: the rate structure alone determines usability.
fn baseline_session_total(
    id: SchemeId,
    profile: PresetProfile,
    policy: &RehearsalPolicy,
) -> Result<f64> {
    let profile = preset_profile(profile);
    let w = windows(policy, 365.0)?;
    Ok(match id {
        // all cues share every account: one session class at the total rate
        SchemeId::ReuseWeak | SchemeId::ReuseStrong | SchemeId::Lifehacker => {
            expected_extras_for_windows(profile.total_rate(), &w)
        }
        // independent passwords: one class per account at its own rate
        SchemeId::Sri => profile
            .rates
            .iter()
            .map(|&r| expected_extras_for_windows(r, &w))
            .sum(),
        _ => return Err(Error::InvalidParam("not a baseline scheme".into())),
    })
}

/// Totals for a shared-cues preset under both counting modes.
fn shared_cues_totals(
    id: SchemeId,
    profile: PresetProfile,
    policy: &RehearsalPolicy,
) -> Result<(f64, f64)> {
    let family = preset_family(id)?.expect("shared-cues preset");
    let profile = preset_profile(profile);
    let assignment = greedy_map(
        &profile.rates,
        family.sets(),
        family.universe_size(),
        policy,
        365.0,
    )?;
    let rates = cue_rates(family.sets(), family.universe_size(), &assignment, &profile)?;
    let per_cue = expected_extra_rehearsals(&rates, policy, 365.0, CountingMode::PerCue)?.total;
    let per_session =
        expected_extra_rehearsals(&rates, policy, 365.0, CountingMode::PerSession)?.total;
    Ok((per_cue, per_session))
}

fn t2() -> Result<Vec<Table>> {
    let paper_cr_bd = [
        paper_approx("~0", 0.0),
        paper(".014", 0.014),
        paper(".05", 0.05),
        paper("56.7", 56.7),
    ];
    let paper_cr_sri = [
        paper("23,396", 23_396.0),
        paper("24,545", 24_545.0),
        paper("24,652", 24_652.0),
        paper("26,751", 26_751.0),
    ];
    let paper_er_bd = [
        paper(".023", 0.023),
        paper(".084", 0.084),
        paper(".12", 0.12),
        paper("1.2", 1.2),
    ];
    let paper_er_sri = [
        paper("420", 420.0),
        paper("456.6", 456.6),
        paper("502.7", 502.7),
        paper("564", 564.0),
    ];

    let mut table = Table::new(
        "T2: extra rehearsals over the first year, baseline schemes",
        "schedule",
        vec![
            "CR B+D".into(),
            "CR SRI".into(),
            "ER B+D".into(),
            "ER SRI".into(),
        ],
    );
    let cr = cr_complete();
    let er = er_starts();
    for (i, profile) in PROFILES.into_iter().enumerate() {
        table.push_row(
            profile.label(),
            vec![
                refcell(
                    baseline_session_total(SchemeId::Lifehacker, profile, &cr)?,
                    paper_cr_bd[i],
                ),
                refcell(
                    baseline_session_total(SchemeId::Sri, profile, &cr)?,
                    paper_cr_sri[i],
                ),
                refcell(
                    baseline_session_total(SchemeId::Lifehacker, profile, &er)?,
                    paper_er_bd[i],
                ),
                refcell(
                    baseline_session_total(SchemeId::Sri, profile, &er)?,
                    paper_er_sri[i],
                ),
            ],
        );
    }
    table.push_footer("B+D = three words + derivation rule; SRI = four fresh words per account; sigma = 1, t = 365 days, per-session counting".to_string());
    table.push_footer(format!(
        "CR column: {} ({} windows); ER column: {} ({} windows)",
        WindowMode::CompleteWindowsOnly.label(),
        windows(&cr, 365.0)?.len(),
        WindowMode::StartsWithinHorizon.label(),
        windows(&er, 365.0)?.len()
    ));
    table.push_footer(
        "the published ER column is not reproducible from the stated conventions (every documented \
         combination gives the annotated values); the CR column reproduces as shown"
            .to_string(),
    );
    Ok(vec![table])
}

fn t3() -> Result<Vec<Table>> {
    let ids = [SchemeId::Sc0, SchemeId::Sc1, SchemeId::Sc2];
    let paper_cr: [[PaperRef; 4]; 3] = [
        [
            paper_approx("~0", 0.0),
            paper_approx("~0.42", 0.42),
            paper_approx("~1.28", 1.28),
            paper_approx("~723", 723.0),
        ],
        [
            paper("1,309", 1_309.0),
            paper("3,225", 3_225.0),
            paper("9,488", 9_488.0),
            paper("13,214", 13_214.0),
        ],
        [
            paper("2,436", 2_436.0),
            paper("5,491", 5_491.0),
            paper("6,734", 6_734.0),
            paper("18,764", 18_764.0),
        ],
    ];
    let paper_er: [[PaperRef; 4]; 3] = [
        [
            paper_approx("~0", 0.0),
            paper_approx("~0", 0.0),
            paper_approx("~0", 0.0),
            paper_approx("~2.44", 2.44),
        ],
        [
            paper("3.93", 3.93),
            paper("10.89", 10.89),
            paper("22.07", 22.07),
            paper("119.77", 119.77),
        ],
        [
            paper("7.54", 7.54),
            paper("19.89", 19.89),
            paper("34.23", 34.23),
            paper("173.92", 173.92),
        ],
    ];

    let columns: Vec<String> = ["CR SC-0", "CR SC-1", "CR SC-2", "ER SC-0", "ER SC-1", "ER SC-2"]
        .into_iter()
        .map(String::from)
        .collect();
    let mut out = Vec::new();
    for (mode_idx, mode_label) in ["per-session", "per-cue"].into_iter().enumerate() {
        let mut table = Table::new(
            format!("T3: extra rehearsals over the first year, shared cues ({mode_label} counting)"),
            "schedule",
            columns.clone(),
        );
        for (p, profile) in PROFILES.into_iter().enumerate() {
            let mut cells = Vec::new();
            for (policy, paper_block) in [(cr_complete(), &paper_cr), (er_starts(), &paper_er)] {
                for (s, id) in ids.into_iter().enumerate() {
                    let (per_cue, per_session) = shared_cues_totals(id, profile, &policy)?;
                    let value = if mode_idx == 0 { per_session } else { per_cue };
                    cells.push(refcell(value, paper_block[s][p]));
                }
            }
            table.push_row(profile.label(), cells);
        }
        table.push_footer(
            "sigma = 1, t = 365 days; CR complete-windows-only, ER starts-within-horizon; \
             greedy account-to-set mapping computed under the column's own schedule"
                .to_string(),
        );
        table.push_footer(
            "the published table does not state its counting mode or greedy internals, so both \
             counting modes are emitted and deviations from the published cells are annotated"
                .to_string(),
        );
        table.push_footer(
            "for these families no two distinct cues are owned by exactly the same accounts, so \
             the two counting modes coincide; note some published cells (e.g. very-active CR SC-1 \
             = 1,309) lie below the convexity lower bound over all possible assignments (3,824) \
             and cannot arise from the stated formula under any mapping"
                .to_string(),
        );
        out.push(table);
    }
    Ok(out)
}

fn t4() -> Result<Vec<Table>> {
    let q = guess_budget(1e6, &EconModel::bcrypt_l12())?;
    let rows: [(&str, u32, u32); 3] =
        [("(n,4,3) e.g. SC-0", 4, 3), ("(n,4,1) e.g. SC-1", 4, 1), ("(n,5,1) e.g. SC-2", 5, 1)];
    let paper_online: [[&str; 3]; 3] = [
        ["2e-15", "0.011", "1"],
        ["2e-15", "4e-11", "8e-7"],
        ["1e-19", "2e-15", "4e-11"],
    ];
    let paper_online_num: [[f64; 3]; 3] = [
        [2e-15, 0.011, 1.0],
        [2e-15, 4e-11, 8e-7],
        [1e-19, 2e-15, 4e-11],
    ];
    let paper_offline: [[&str; 3]; 3] = [
        ["3.5e-7", "1", "1"],
        ["3.5e-7", "0.007", "1"],
        ["1.8e-11", "3.5e-7", "0.007"],
    ];
    let paper_offline_num: [[f64; 3]; 3] = [
        [3.5e-7, 1.0, 1.0],
        [3.5e-7, 0.007, 1.0],
        [1.8e-11, 3.5e-7, 0.007],
    ];

    let mut table = Table::new(
        "T4: adversary success bounds delta vs leaks r and hash exposure h",
        "family",
        vec![
            "h=0 r=0".into(),
            "h=0 r=1".into(),
            "h=0 r=2".into(),
            "h>0 r=0".into(),
            "h>0 r=1".into(),
            "h>0 r=2".into(),
        ],
    );
    for (row_idx, (label, ell, gamma)) in rows.into_iter().enumerate() {
        let mut cells = Vec::new();
        for r in 0..3u32 {
            let params = SecurityParams {
                guesses: q,
                assoc_space: 19_600,
                ell,
                gamma,
                leaks: r,
                hash_leaks: 0,
                strikes: 3,
                accounts: 100,
            };
            let bound = delta_online_bound(&params)?;
            // the one known formula/paper mismatch gets a two-sided note
            if (ell, gamma, r) == (4, 3, 1) {
                cells.push(Cell::annotated(
                    bound.delta,
                    format!("paper=0.011 formula={}", fmt_sig(bound.delta)),
                ));
            } else {
                cells.push(refcell(
                    bound.delta,
                    paper(paper_online[row_idx][r as usize], paper_online_num[row_idx][r as usize]),
                ));
            }
        }
        for r in 0..3u32 {
            let params = SecurityParams {
                guesses: q,
                assoc_space: 19_600,
                ell,
                gamma,
                leaks: r,
                hash_leaks: 1,
                strikes: 3,
                accounts: 100,
            };
            let bound = delta_offline_bound(&params)?;
            cells.push(refcell(
                bound.delta,
                paper(paper_offline[row_idx][r as usize], paper_offline_num[row_idx][r as usize]),
            ));
        }
        table.push_row(label, cells);
    }
    table.push_footer(format!(
        "|AS| = 19600 (140 actions x 140 objects), s = 3 strikes, m <= 100 accounts, Q = {} (bcrypt $1M budget)",
        fmt_sig(q as f64)
    ));
    table.push_footer(
        "h=0 uses the online refinement s*m/|AS|^(l-gamma*r); h>0 uses Q/|AS|^(l-gamma*r); \
         cells at 1 are vacuous (exponent <= 0 or bound above 1)"
            .to_string(),
    );
    Ok(vec![table])
}

const GRID_LAMBDAS: [f64; 5] = [2.0, 1.0, 1.0 / 3.0, 1.0 / 7.0, 1.0 / 31.0];
const GRID_LAMBDA_LABELS: [&str; 5] = ["2", "1", "1/3", "1/7", "1/31"];

fn t5() -> Result<Vec<Table>> {
    let paper_rows: [(f64, [&'static str; 5], [f64; 5]); 4] = [
        (
            0.1,
            ["0.686669", "2.42166", "5.7746", "7.43555", "8.61931"],
            [0.686669, 2.42166, 5.7746, 7.43555, 8.61931],
        ),
        (
            0.5,
            ["0.216598", "0.827594", "2.75627", "4.73269", "7.54973"],
            [0.216598, 0.827594, 2.75627, 4.73269, 7.54973],
        ),
        (
            1.0,
            ["0.153986", "0.521866", "1.56788", "2.61413", "4.65353"],
            [0.153986, 0.521866, 1.56788, 2.61413, 4.65353],
        ),
        (
            2.0,
            ["0.135671", "0.386195", "0.984956", "1.5334", "2.57117"],
            [0.135671, 0.386195, 0.984956, 1.5334, 2.57117],
        ),
    ];
    let count = windows(&er_starts(), 365.0)?.len();
    let mut table = Table::new(
        "T5: expected extras for one cue, expanding rehearsal, t = 365",
        "sigma \\ lambda",
        GRID_LAMBDA_LABELS.iter().map(|s| s.to_string()).collect(),
    );
    for (sigma, texts, nums) in paper_rows {
        let w = windows_first(ScheduleKind::Expanding, sigma, count);
        let cells = GRID_LAMBDAS
            .iter()
            .enumerate()
            .map(|(i, &lambda)| {
                refcell(expected_extras_for_windows(lambda, &w), paper(texts[i], nums[i]))
            })
            .collect();
        table.push_row(format!("{sigma}"), cells);
    }
    table.push_footer(format!(
        "window lengths 2^(i*sigma); the published grid holds the requirement count fixed at the \
         sigma=1 horizon count ({count} windows) for every row rather than truncating per sigma"
    ));
    Ok(vec![table])
}

fn t6() -> Result<Vec<Table>> {
    let paper_rows: [(f64, [&'static str; 5], [f64; 5]); 4] = [
        (
            1.0,
            ["49.5327", "134.644", "262.25", "317.277", "354.382"],
            [49.5327, 134.644, 262.25, 317.277, 354.382],
        ),
        (
            3.0,
            ["0.3024", "6.074", "44.8813", "79.4756", "110.747"],
            [0.3024, 6.074, 44.8813, 79.4756, 110.747],
        ),
        (
            7.0,
            ["0.0000", "0.0483297", "5.13951", "19.4976", "42.2872"],
            [0.0, 0.0483297, 5.13951, 19.4976, 42.2872],
        ),
        (
            31.0,
            ["0.000", "0.0000", "0.0004", "0.1432", "4.4146"],
            [0.0, 0.0, 0.0004, 0.1432, 4.4146],
        ),
    ];
    let mut table = Table::new(
        "T6: expected extras for one cue, constant rehearsal, t = 365",
        "sigma \\ lambda",
        GRID_LAMBDA_LABELS.iter().map(|s| s.to_string()).collect(),
    );
    let sigmas: Vec<f64> = paper_rows.iter().map(|(s, _, _)| *s).collect();
    let grid = tabulate(
        ScheduleKind::Constant,
        WindowMode::StartsWithinHorizon,
        &sigmas,
        &GRID_LAMBDAS,
        365.0,
    )?;
    for ((sigma, texts, nums), computed) in paper_rows.into_iter().zip(grid) {
        let cells = computed
            .into_iter()
            .enumerate()
            .map(|(i, value)| refcell(value, paper(texts[i], nums[i])))
            .collect();
        table.push_row(format!("{sigma}"), cells);
    }
    table.push_footer(
        "starts-within-horizon truncation (floor(365/sigma)+1 windows); the published low-precision \
         cells (0.0000, 0.0004) are reproduced at their printed precision"
            .to_string(),
    );
    Ok(vec![table])
}

fn t7() -> Result<Vec<Table>> {
    let paper_bd = [
        paper_approx("~0", 0.0),
        paper_approx("~0", 0.0),
        paper_approx("~0", 0.0),
        paper(".188", 0.188),
    ];
    let paper_sc: [[PaperRef; 4]; 3] = [
        [
            paper_approx("~0", 0.0),
            paper_approx("~0", 0.0),
            paper_approx("~0", 0.0),
            paper_approx("~2.08", 2.08),
        ],
        [
            paper("2.77", 2.77),
            paper("7.086", 7.086),
            paper("8.86", 8.86),
            paper("71.42", 71.42),
        ],
        [
            paper("5.88", 5.88),
            paper("12.74", 12.74),
            paper("16.03", 16.03),
            paper("125.24", 125.24),
        ],
    ];
    let paper_sri = [
        paper("794.7", 794.7),
        paper("882.8", 882.8),
        paper("719.02", 719.02),
        paper("1176.4", 1176.4),
    ];

    let policy = sq_complete();
    let mut table = Table::new(
        "T7: extra rehearsals over the first year, squared rehearsal assumption",
        "schedule",
        vec!["B+D".into(), "SC-0".into(), "SC-1".into(), "SC-2".into(), "SRI".into()],
    );
    for (p, profile) in PROFILES.into_iter().enumerate() {
        let mut cells = vec![refcell(
            baseline_session_total(SchemeId::Lifehacker, profile, &policy)?,
            paper_bd[p],
        )];
        for (s, id) in [SchemeId::Sc0, SchemeId::Sc1, SchemeId::Sc2].into_iter().enumerate() {
            let (_, per_session) = shared_cues_totals(id, profile, &policy)?;
            cells.push(refcell(per_session, paper_sc[s][p]));
        }
        cells.push(refcell(
            baseline_session_total(SchemeId::Sri, profile, &policy)?,
            paper_sri[p],
        ));
        table.push_row(profile.label(), cells);
    }
    table.push_footer(format!(
        "sigma = 1, t = 365 days, {} ({} windows), per-session counting; this convention \
         reproduces the published SRI column, remaining columns annotated where they deviate",
        WindowMode::CompleteWindowsOnly.label(),
        windows(&policy, 365.0)?.len()
    ));
    Ok(vec![table])
}

fn t8(budget: u64) -> Result<Vec<Table>> {
    // (n, l, gamma, paper achieved, paper bound)
    let rows: [(usize, usize, usize, &str, u64); 9] = [
        (9, 4, 3, "126", 126),
        (16, 4, 1, "16", 20),
        (20, 6, 2, "40", 57),
        (25, 6, 2, "77", 153),
        (18, 6, 3, "88", 204),
        (19, 6, 3, "118", 258),
        (30, 9, 3, "36", 217),
        (40, 8, 2, "52", 176),
        (43, 4, 1, "110", 150),
    ];
    let mut table = Table::new(
        "T8: sharing family constructions, achieved size vs counting bound",
        "(n,l,gamma)",
        vec!["achieved".into(), "bound".into(), "construction".into()],
    );
    for (n, l, g, paper_achieved, paper_bound) in rows {
        let (achieved_cell, construction) = if (n, l, g) == (43, 4, 1) {
            let moduli = [9u64, 10, 11, 13];
            let blocks: std::result::Result<Vec<_>, Error> = moduli
                .iter()
                .map(|&m| {
                    greedy_family_with_budget(
                        m as usize,
                        l,
                        g,
                        EnumerationOrder::Lexicographic,
                        budget,
                    )
                })
                .collect();
            let composed = composed_family(&moduli, g, &blocks?)?;
            (
                refcell(composed.len() as f64, paper(paper_achieved, 110.0)),
                "residue base + greedy blocks",
            )
        } else {
            match greedy_family_with_budget(n, l, g, EnumerationOrder::Lexicographic, budget) {
                Ok(family) => (
                    refcell(family.len() as f64, paper(paper_achieved, paper_achieved.parse().unwrap())),
                    "lexicographic greedy",
                ),
                Err(e) if e.is_guard() => (
                    Cell {
                        text: "skipped".into(),
                        annotation: Some(format!("enumeration budget; paper={paper_achieved}")),
                    },
                    "lexicographic greedy",
                ),
                Err(e) => return Err(e),
            }
        };
        let bound = family_size_bound(n as u64, l as u64, g as u64)?;
        let bound_f: f64 = bound.to_string().parse().unwrap();
        let bound_cell = refcell(bound_f, paper(
            match paper_bound {
                126 => "126",
                20 => "20",
                57 => "57",
                153 => "153",
                204 => "204",
                258 => "258",
                217 => "217",
                176 => "176",
                _ => "150",
            },
            paper_bound as f64,
        ));
        table.push_row(
            format!("({n},{l},{g})"),
            vec![achieved_cell, bound_cell, Cell::text(construction)],
        );
    }
    table.push_footer(format!(
        "achieved = deterministic lexicographic greedy scan (budget {budget} candidate subsets); \
         the published greedy sizes assume an unstated enumeration order"
    ));
    table.push_footer(
        "bound = floor(C(n,gamma+1)/C(l,gamma+1)); the published (25,6,2) bound 153 contradicts \
         the formula (C(25,3)/C(6,3) = 2300/20 = 115) and appears to divide by C(6,2) = 15 instead"
            .to_string(),
    );
    Ok(vec![table])
}

fn t9() -> Result<Vec<Table>> {
    let mut table = Table::new(
        "T9: guessing budgets by hash function",
        "hash",
        vec!["guesses per dollar".into(), "Q at $1M".into()],
    );
    let rows = [
        (EconModel::bcrypt_l12(), paper("5.155e4", 5.155e4), paper("5.2e10", 5.2e10)),
        (EconModel::md5(), paper("9.1e9", 9.1e9), paper("9.1e15", 9.1e15)),
        (EconModel::sha1(), paper("1e10", 1e10), paper("1e16", 1e16)),
    ];
    for (econ, per_dollar_ref, q1m_ref) in rows {
        let per_dollar = 1.0 / econ.cost_per_guess;
        let q = guess_budget(1e6, &econ)? as f64;
        table.push_row(
            econ.label.clone(),
            vec![refcell(per_dollar, per_dollar_ref), refcell(q, q1m_ref)],
        );
    }
    table.push_footer(
        "Q = floor(budget / cost-per-guess); the published $1M bcrypt entry rounds to 5.2e10, \
         the unrounded value is emitted"
            .to_string(),
    );
    Ok(vec![table])
}

fn t10() -> Result<Vec<Table>> {
    let mut table = Table::new(
        "T10: guessing costs",
        "hash",
        vec![
            "guesses per hour".into(),
            "$/guess (authoritative)".into(),
            "$/guess derived C_GHz/f_H".into(),
        ],
    );
    let rows = [
        (EconModel::sha1(), SHA1_GUESSES_PER_HOUR),
        (EconModel::md5(), MD5_GUESSES_PER_HOUR),
        (EconModel::bcrypt_l12(), BCRYPT_GUESSES_PER_HOUR),
    ];
    for (econ, rate) in rows {
        let derived = C_GHZ_PER_HOUR / rate;
        let derived_cell = if (derived - econ.cost_per_guess).abs() > 0.5 * econ.cost_per_guess {
            Cell::annotated(derived, format!("published C_Q={}", fmt_sig(econ.cost_per_guess)))
        } else {
            Cell::value(derived)
        };
        table.push_row(
            econ.label.clone(),
            vec![
                Cell::value(rate),
                Cell::value(econ.cost_per_guess),
                derived_cell,
            ],
        );
    }
    table.push_footer(format!(
        "C_GHz = ${C_GHZ_PER_HOUR}/hour; the published bcrypt throughput and cost disagree by \
         roughly 10x — the cost column is authoritative since the headline budgets derive from it"
    ));
    Ok(vec![table])
}

/// Builds the reproduction for a table id (`T2`..`T10`).
pub fn build(id: &str, budget: u64) -> Result<Vec<Table>> {
    match id.to_ascii_uppercase().as_str() {
        "T2" => t2(),
        "T3" => t3(),
        "T4" => t4(),
        "T5" => t5(),
        "T6" => t6(),
        "T7" => t7(),
        "T8" => t8(budget),
        "T9" => t9(),
        "T10" => t10(),
        other => Err(Error::Parse(format!(
            "unknown table {other:?} (expected T2..T10)"
        ))),
    }
}
