//! Command-line front end: reproduce the reference tables, run experiments
//! from flat config files, generate sharing families and whole schemes.
//!
//! Exit codes: 0 success, 2 configuration or usage error, 3 resource-guard
//! violation (enumeration budgets, toy-scale oracle limits).

mod config;
mod output;
mod tables;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use rehearsal_lab::data::Inventories;
use rehearsal_lab::designs::{
    all_subsets_family, composed_family, crt_family, greedy_family_with_budget,
    EnumerationOrder, FamilyProfile, SharingFamily, DEFAULT_ENUMERATION_BUDGET,
};
use rehearsal_lab::error::Error;
use rehearsal_lab::rehearsal::RehearsalPolicy;
use rehearsal_lab::schemes::{
    assignment_objective, exact_min_rehearsal, greedy_map, EXACT_ASSIGNMENT_LIMIT,
};
use rehearsal_lab::security::{guess_budget, scheme_security_report, EconModel};
use rehearsal_lab::usability::{
    expected_extra_rehearsals, simulate_extra_rehearsals, CountingMode,
};

use config::ExperimentConfig;
use output::{fmt_sig, Cell, Format, Table};

#[derive(Parser)]
#[command(
    name = "rehearsal-lab",
    version,
    about = "Usability and security analysis of password management schemes"
)]
struct Cli {
    /// Output format for tables and reports.
    #[arg(long, global = true, default_value = "markdown")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a sharing set family and write the exchange format.
    GenFamily {
        #[command(subcommand)]
        construction: FamilyCmd,
    },
    /// Verify a family exchange file and print its measured profile.
    VerifyFamily {
        file: PathBuf,
    },
    /// Reproduce a reference table (T2..T10) under pinned conventions.
    Table {
        id: String,
        /// Enumeration budget for construction-based tables.
        #[arg(long, default_value_t = 100_000_000)]
        budget: u64,
    },
    /// Closed-form expected extra rehearsals for a scheme.
    Usability(ExperimentArgs),
    /// Monte Carlo extra rehearsals next to the closed form.
    Simulate(ExperimentArgs),
    /// Adversary success bounds for a scheme.
    Security(ExperimentArgs),
    /// Generate a scheme and emit its dump format.
    GenScheme {
        #[command(flatten)]
        args: ExperimentArgs,
        /// Write the dump here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep random small instances comparing greedy and exact assignment.
    Compare {
        #[arg(long, default_value_t = 100)]
        instances: u64,
        #[arg(long)]
        seed: u64,
        /// Family size per instance (exact enumeration is factorial in this).
        #[arg(long, default_value_t = 8)]
        max_sets: usize,
        #[arg(long, default_value = "ER:1")]
        policy: String,
        #[arg(long, default_value_t = 365.0)]
        t: f64,
    },
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// Residue construction from moduli (co-prime moduli give the guarantee).
    Crt {
        #[arg(long)]
        m: usize,
        /// Comma-separated moduli, e.g. 9,10,11,13.
        #[arg(long)]
        moduli: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Greedy scan over all l-subsets admitting overlap at most gamma.
    Greedy {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        gamma: usize,
        /// lex (deterministic) or random (requires --seed).
        #[arg(long, default_value = "lex")]
        order: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// All l-subsets of an n-element universe: (n, l, l-1)-sharing.
    Subsets {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: usize,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Residue base of size prod(moduli[..gamma+1]) plus per-block greedy
    /// families translated into their blocks.
    Composed {
        #[arg(long)]
        moduli: String,
        #[arg(long)]
        gamma: usize,
        /// greedy (build blocks greedily) or empty (base family only).
        #[arg(long, default_value = "greedy")]
        blocks: String,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Flags shared by the experiment commands; every flag overrides the same
/// key in `--config`.
#[derive(Args, Default)]
struct ExperimentArgs {
    /// Flat key = value config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// reuse-weak | reuse-strong | lifehacker | sri | sc0 | sc1 | sc2 | sc:<family-file>
    #[arg(long)]
    scheme: Option<String>,
    /// Preset name (very-active, typical, occasional, infrequent) or a
    /// comma-separated rate list.
    #[arg(long)]
    profile: Option<String>,
    /// KIND:sigma, e.g. ER:1 or CR:31.
    #[arg(long)]
    policy: Option<String>,
    /// Horizon in days.
    #[arg(long)]
    t: Option<f64>,
    /// starts | complete.
    #[arg(long)]
    window: Option<String>,
    /// per-cue | per-session.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    /// bcrypt | md5 | sha1.
    #[arg(long)]
    econ: Option<String>,
    /// Adversary budget in dollars.
    #[arg(long)]
    budget: Option<f64>,
    /// Plaintext leak count (rows run r = 0..=r).
    #[arg(long)]
    r: Option<u32>,
    /// Online strikes per account.
    #[arg(long)]
    s: Option<u32>,
    /// Account count used in the online bound.
    #[arg(long)]
    m: Option<u32>,
}

impl ExperimentArgs {
    fn resolve(&self) -> Result<ExperimentConfig, Error> {
        let base = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        let overrides = ExperimentConfig {
            scheme: self.scheme.clone(),
            profile: self.profile.clone(),
            policy: self.policy.clone(),
            horizon: self.t,
            window: self.window.clone(),
            mode: self.mode.clone(),
            seed: self.seed,
            trials: self.trials,
            econ: self.econ.clone(),
            budget: self.budget,
            leaks: self.r,
            strikes: self.s,
            accounts_cap: self.m,
        };
        Ok(base.merged(&overrides))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_guard() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn run(cli: &Cli) -> Result<(), Error> {
    match &cli.command {
        Command::GenFamily { construction } => gen_family(construction, cli.format),
        Command::VerifyFamily { file } => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", file.display())))?;
            let family = SharingFamily::from_exchange_format(&text)?;
            let profile = family.verify()?;
            print!(
                "{}",
                profile_table(&file.display().to_string(), &family, &profile).render(cli.format)
            );
            Ok(())
        }
        Command::Table { id, budget } => {
            for table in tables::build(id, *budget)? {
                print!("{}", table.render(cli.format));
                println!();
            }
            Ok(())
        }
        Command::Usability(args) => usability_cmd(&args.resolve()?, cli.format),
        Command::Simulate(args) => simulate_cmd(&args.resolve()?, cli.format),
        Command::Security(args) => security_cmd(&args.resolve()?, cli.format),
        Command::GenScheme { args, out } => gen_scheme_cmd(&args.resolve()?, out.as_deref()),
        Command::Compare { instances, seed, max_sets, policy, t } => {
            compare_cmd(*instances, *seed, *max_sets, policy, *t, cli.format)
        }
    }
}

fn parse_moduli(s: &str) -> Result<Vec<u64>, Error> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad modulus {tok:?}")))
        })
        .collect()
}

fn profile_table(label: &str, family: &SharingFamily, profile: &FamilyProfile) -> Table {
    let mut t = Table::new(
        "family profile",
        "family",
        vec![
            "m".into(),
            "n_effective".into(),
            "ell".into(),
            "gamma_observed".into(),
            "covering".into(),
        ],
    );
    let ell = if profile.ell_min == profile.ell_max {
        profile.ell_min.to_string()
    } else {
        format!("{}..{}", profile.ell_min, profile.ell_max)
    };
    t.push_row(
        label,
        vec![
            Cell::text(profile.m.to_string()),
            Cell::text(profile.n_effective.to_string()),
            Cell::text(ell),
            Cell::text(profile.gamma_observed.to_string()),
            Cell::text(profile.covering.to_string()),
        ],
    );
    t.push_footer(format!(
        "declared: n={} l={} gamma={}",
        family.universe_size(),
        family.set_size(),
        family.overlap_bound()
    ));
    t
}

fn emit_family(
    family: &SharingFamily,
    label: &str,
    out: Option<&std::path::Path>,
    format: Format,
) -> Result<(), Error> {
    let profile = family.verify()?;
    match out {
        Some(path) => {
            std::fs::write(path, family.to_exchange_format())?;
            print!("{}", profile_table(label, family, &profile).render(format));
        }
        None => {
            print!("{}", family.to_exchange_format());
            eprint!("{}", profile_table(label, family, &profile).render(format));
        }
    }
    Ok(())
}

fn gen_family(cmd: &FamilyCmd, format: Format) -> Result<(), Error> {
    match cmd {
        FamilyCmd::Crt { m, moduli, out } => {
            let moduli = parse_moduli(moduli)?;
            let (family, warnings) = crt_family(*m, &moduli)?;
            for w in &warnings {
                eprintln!("warning: {w}");
            }
            emit_family(&family, &format!("crt(m={m}, moduli={moduli:?})"), out.as_deref(), format)
        }
        FamilyCmd::Greedy { n, l, gamma, order, seed, budget, out } => {
            let order = match (order.as_str(), seed) {
                ("lex" | "lexicographic", _) => EnumerationOrder::Lexicographic,
                ("random" | "seeded-random", Some(seed)) => EnumerationOrder::SeededRandom(*seed),
                ("random" | "seeded-random", None) => {
                    return Err(Error::Parse("--order random requires --seed".into()))
                }
                (other, _) => {
                    return Err(Error::Parse(format!(
                        "unknown order {other:?} (expected lex or random)"
                    )))
                }
            };
            let family = greedy_family_with_budget(*n, *l, *gamma, order, *budget)?;
            emit_family(&family, &format!("greedy(n={n}, l={l}, gamma={gamma})"), out.as_deref(), format)
        }
        FamilyCmd::Subsets { n, l, budget, out } => {
            let _ = budget;
            let family = all_subsets_family(*n, *l)?;
            emit_family(&family, &format!("subsets(n={n}, l={l})"), out.as_deref(), format)
        }
        FamilyCmd::Composed { moduli, gamma, blocks, budget, out } => {
            let moduli = parse_moduli(moduli)?;
            let ell = moduli.len();
            let block_families: Vec<SharingFamily> = match blocks.as_str() {
                "greedy" => moduli
                    .iter()
                    .map(|&m| {
                        greedy_family_with_budget(
                            m as usize,
                            ell,
                            *gamma,
                            EnumerationOrder::Lexicographic,
                            *budget,
                        )
                    })
                    .collect::<Result<_, _>>()?,
                "empty" => Vec::new(),
                other => {
                    return Err(Error::Parse(format!(
                        "unknown blocks mode {other:?} (expected greedy or empty)"
                    )))
                }
            };
            let family = composed_family(&moduli, *gamma, &block_families)?;
            emit_family(
                &family,
                &format!("composed(moduli={moduli:?}, gamma={gamma})"),
                out.as_deref(),
                format,
            )
        }
    }
}

fn conventions_footer(table: &mut Table, cfg: &ExperimentConfig) -> Result<(), Error> {
    let policy = cfg.policy()?;
    table.push_footer(format!(
        "scheme={} profile={} policy={} window={} t={} counting={}",
        cfg.scheme.as_deref().unwrap_or("?"),
        cfg.profile.as_deref().unwrap_or("typical"),
        policy,
        policy.window_mode.label(),
        cfg.horizon(),
        cfg.counting_mode()?.label(),
    ));
    Ok(())
}

fn usability_cmd(cfg: &ExperimentConfig, format: Format) -> Result<(), Error> {
    let inv = Inventories::load()?;
    let scheme = cfg.scheme(&inv)?;
    let rates = scheme.cue_rates()?;
    let policy = cfg.policy()?;
    let mode = cfg.counting_mode()?;
    let report = expected_extra_rehearsals(&rates, &policy, cfg.horizon(), mode)?;

    let mut table = Table::new(
        format!("expected extra rehearsals: {}", scheme.name),
        "cue_id",
        vec!["rate".into(), "expected_extras".into()],
    );
    for (cue, (&rate, &extras)) in rates.rates.iter().zip(&report.per_cue).enumerate() {
        table.push_row(cue.to_string(), vec![Cell::value(rate), Cell::value(extras)]);
    }
    table.push_footer(format!("total ({}) = {}", mode.label(), fmt_sig(report.total)));
    let uncovered = rates.rates.iter().filter(|r| **r == 0.0).count();
    if uncovered > 0 {
        table.push_footer(format!("{uncovered} cues have no assigned account (rate 0)"));
    }
    conventions_footer(&mut table, cfg)?;
    print!("{}", table.render(format));
    Ok(())
}

fn simulate_cmd(cfg: &ExperimentConfig, format: Format) -> Result<(), Error> {
    let seed = cfg
        .seed
        .ok_or_else(|| Error::Parse("simulate requires an explicit seed (--seed or config)".into()))?;
    let trials = cfg
        .trials
        .ok_or_else(|| Error::Parse("simulate requires --trials (or config `trials`)".into()))?;
    let inv = Inventories::load()?;
    let scheme = cfg.scheme(&inv)?;
    let rates = scheme.cue_rates()?;
    let policy = cfg.policy()?;
    let report = expected_extra_rehearsals(&rates, &policy, cfg.horizon(), CountingMode::PerCue)?;
    let sim = simulate_extra_rehearsals(
        &rates,
        &scheme.profile.rates,
        &policy,
        cfg.horizon(),
        trials,
        seed,
    )?;

    let mut table = Table::new(
        format!("simulated vs closed-form extra rehearsals: {}", scheme.name),
        "cue_id",
        vec!["rate".into(), "closed_form".into(), "simulated_mean".into()],
    );
    for cue in 0..rates.cue_count() {
        table.push_row(
            cue.to_string(),
            vec![
                Cell::value(rates.rates[cue]),
                Cell::value(report.per_cue[cue]),
                Cell::value(sim.per_cue[cue]),
            ],
        );
    }
    table.push_footer(format!(
        "total: closed-form {} vs simulated {} +/- {} (1 SE, {} trials, seed {})",
        fmt_sig(report.total),
        fmt_sig(sim.mean),
        fmt_sig(sim.std_err),
        trials,
        seed
    ));
    let gap = (sim.mean - report.total).abs();
    table.push_footer(format!(
        "|simulated - closed| = {} ({} standard errors)",
        fmt_sig(gap),
        if sim.std_err > 0.0 { fmt_sig(gap / sim.std_err) } else { "0".into() }
    ));
    conventions_footer(&mut table, cfg)?;
    print!("{}", table.render(format));
    Ok(())
}

fn security_cmd(cfg: &ExperimentConfig, format: Format) -> Result<(), Error> {
    let inv = Inventories::load()?;
    let scheme = cfg.scheme(&inv)?;
    let econ: EconModel = cfg.econ.as_deref().unwrap_or("bcrypt").parse()?;
    let budget = cfg.budget.unwrap_or(1e6);
    let q = guess_budget(budget, &econ)?;
    let strikes = cfg.strikes.unwrap_or(3);
    let accounts = cfg.accounts_cap.unwrap_or(100);
    let r_max = cfg.leaks.unwrap_or(2);
    let report = scheme_security_report(&scheme, q, strikes, accounts, r_max)?;

    let mut table = Table::new(
        format!("adversary success bounds: {}", scheme.name),
        "r",
        vec!["delta (h=0 online)".into(), "delta (h>0 offline)".into(), "note".into()],
    );
    for row in &report.rows {
        let fmt_bound = |b: &rehearsal_lab::security::DeltaBound| {
            if b.vacuous {
                Cell::annotated(b.delta, "vacuous: every cue may be compromised")
            } else {
                Cell::value(b.delta)
            }
        };
        table.push_row(
            row.leaks.to_string(),
            vec![
                fmt_bound(&row.online),
                fmt_bound(&row.offline),
                Cell::text(row.note.clone().unwrap_or_default()),
            ],
        );
    }
    table.push_footer(format!(
        "econ={} budget=${} Q={} strikes={strikes} m={accounts}",
        econ.label,
        fmt_sig(budget),
        fmt_sig(q as f64)
    ));
    if let Some(decl) = scheme.sharing {
        table.push_footer(format!(
            "sharing family: n={} l={} gamma={} |AS|={}",
            decl.universe, decl.set_size, decl.overlap_bound, scheme.assoc_space_size
        ));
    }
    print!("{}", table.render(format));
    Ok(())
}

fn gen_scheme_cmd(cfg: &ExperimentConfig, out: Option<&std::path::Path>) -> Result<(), Error> {
    if cfg.seed.is_none() {
        return Err(Error::Parse(
            "gen-scheme requires an explicit seed (--seed or config)".into(),
        ));
    }
    let inv = Inventories::load()?;
    let scheme = cfg.scheme(&inv)?;
    let dump = scheme.dump(&inv);
    match out {
        Some(path) => {
            std::fs::write(path, &dump)?;
            eprintln!(
                "wrote {} (n={}, m={}, |AS|={})",
                path.display(),
                scheme.cue_count,
                scheme.accounts(),
                scheme.assoc_space_size
            );
        }
        None => print!("{dump}"),
    }
    Ok(())
}

fn compare_cmd(
    instances: u64,
    seed: u64,
    max_sets: usize,
    policy: &str,
    horizon: f64,
    format: Format,
) -> Result<(), Error> {
    if max_sets > EXACT_ASSIGNMENT_LIMIT {
        return Err(Error::Guard(format!(
            "exact enumeration is limited to {EXACT_ASSIGNMENT_LIMIT} sets, got --max-sets {max_sets}"
        )));
    }
    let policy: RehearsalPolicy = policy.parse()?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut worst: (f64, u64) = (1.0, 0);
    let mut table = Table::new(
        "greedy vs exact assignment",
        "instance",
        vec!["sets".into(), "accounts".into(), "exact".into(), "greedy".into(), "ratio".into()],
    );
    for instance in 0..instances {
        let sets_count = rng.random_range(3..=max_sets.max(3));
        let accounts = rng.random_range(1..=sets_count.min(5));
        let cues = rng.random_range(3..=10);
        let sets: Vec<Vec<usize>> = (0..sets_count)
            .map(|_| {
                let size = rng.random_range(2..=3.min(cues));
                let mut set = Vec::new();
                while set.len() < size {
                    let c = rng.random_range(0..cues);
                    if !set.contains(&c) {
                        set.push(c);
                    }
                }
                set.sort_unstable();
                set
            })
            .collect();
        let rates: Vec<f64> = (0..accounts)
            .map(|_| [2.0, 1.0, 1.0 / 3.0, 1.0 / 7.0, 1.0 / 31.0][rng.random_range(0..5)])
            .collect();
        let (_, exact) = exact_min_rehearsal(&rates, &sets, cues, &policy, horizon)?;
        let pi = greedy_map(&rates, &sets, cues, &policy, horizon)?;
        let greedy = assignment_objective(&rates, &sets, cues, &pi, &policy, horizon)?;
        let ratio = greedy / exact;
        if ratio > worst.0 {
            worst = (ratio, instance);
        }
        table.push_row(
            instance.to_string(),
            vec![
                Cell::text(sets_count.to_string()),
                Cell::text(accounts.to_string()),
                Cell::value(exact),
                Cell::value(greedy),
                Cell::value(ratio),
            ],
        );
    }
    table.push_footer(format!(
        "worst greedy/exact ratio {} at instance {} over {instances} instances (policy {policy}, t={horizon}, seed {seed})",
        fmt_sig(worst.0),
        worst.1
    ));
    print!("{}", table.render(format));
    Ok(())
}
