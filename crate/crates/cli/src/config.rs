//! Flat key-value experiment configs with command-line overrides.
//!
//! A config file is lines of `key = value`; `#` starts a comment. Command
//! line flags override file values. Example:
//!
//! ```text
//! scheme  = sc1
//! profile = very-active
//! policy  = ER:1
//! t       = 365
//! window  = starts
//! mode    = per-cue
//! trials  = 2000
//! seed    = 7
//! econ    = bcrypt
//! budget  = 1e6
//! r       = 2
//! ```

use std::path::Path;
use std::str::FromStr;

use rehearsal_lab::data::Inventories;
use rehearsal_lab::designs::SharingFamily;
use rehearsal_lab::error::{Error, Result};
use rehearsal_lab::rehearsal::{RehearsalPolicy, ScheduleKind, WindowMode};
use rehearsal_lab::schemes::{generate_scheme, shared_cues_generate, Scheme, SchemeId};
use rehearsal_lab::usability::{preset_profile, CountingMode, PresetProfile, VisitationProfile};
use rand::SeedableRng;

/// Every knob an experiment command understands; fields stay `None` until a
/// config file or flag sets them.
#[derive(Debug, Clone, Default)]
pub struct ExperimentConfig {
    pub scheme: Option<String>,
    pub profile: Option<String>,
    pub policy: Option<String>,
    pub horizon: Option<f64>,
    pub window: Option<String>,
    pub mode: Option<String>,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub econ: Option<String>,
    pub budget: Option<f64>,
    pub leaks: Option<u32>,
    pub strikes: Option<u32>,
    pub accounts_cap: Option<u32>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        let mut config = ExperimentConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!("{}:{}: expected key = value", path.display(), lineno + 1))
            })?;
            let key = key.trim().to_ascii_lowercase().replace('_', "-");
            let value = value.trim().to_string();
            let bad_number = |field: &str| {
                Error::Parse(format!(
                    "{}:{}: field {field} has a non-numeric value {value:?}",
                    path.display(),
                    lineno + 1
                ))
            };
            match key.as_str() {
                "scheme" => config.scheme = Some(value),
                "profile" => config.profile = Some(value),
                "policy" => config.policy = Some(value),
                "t" | "horizon" => {
                    config.horizon = Some(value.parse().map_err(|_| bad_number("t"))?)
                }
                "window" => config.window = Some(value),
                "mode" | "counting" => config.mode = Some(value),
                "seed" => config.seed = Some(value.parse().map_err(|_| bad_number("seed"))?),
                "trials" => config.trials = Some(value.parse().map_err(|_| bad_number("trials"))?),
                "econ" => config.econ = Some(value),
                "budget" => {
                    config.budget = Some(value.parse().map_err(|_| bad_number("budget"))?)
                }
                "r" | "leaks" => config.leaks = Some(value.parse().map_err(|_| bad_number("r"))?),
                "s" | "strikes" => {
                    config.strikes = Some(value.parse().map_err(|_| bad_number("s"))?)
                }
                "m" | "m-cap" | "accounts" => {
                    config.accounts_cap = Some(value.parse().map_err(|_| bad_number("m"))?)
                }
                other => {
                    return Err(Error::Parse(format!(
                        "{}:{}: unknown config key {other:?}",
                        path.display(),
                        lineno + 1
                    )))
                }
            }
        }
        Ok(config)
    }

    /// Applies `other` on top of `self` (flags override file values).
    pub fn merged(mut self, other: &ExperimentConfig) -> ExperimentConfig {
        macro_rules! take {
            ($field:ident) => {
                if other.$field.is_some() {
                    self.$field = other.$field.clone();
                }
            };
        }
        take!(scheme);
        take!(profile);
        take!(policy);
        take!(horizon);
        take!(window);
        take!(mode);
        take!(seed);
        take!(trials);
        take!(econ);
        take!(budget);
        take!(leaks);
        take!(strikes);
        take!(accounts_cap);
        self
    }

    pub fn policy(&self) -> Result<RehearsalPolicy> {
        let mut policy = match &self.policy {
            Some(s) => RehearsalPolicy::from_str(s)?,
            None => RehearsalPolicy::new(ScheduleKind::Expanding, 1.0)?,
        };
        if let Some(window) = &self.window {
            policy = policy.with_window_mode(WindowMode::from_str(window)?);
        }
        Ok(policy)
    }

    pub fn horizon(&self) -> f64 {
        self.horizon.unwrap_or(365.0)
    }

    pub fn counting_mode(&self) -> Result<CountingMode> {
        match &self.mode {
            Some(s) => CountingMode::from_str(s),
            None => Ok(CountingMode::PerCue),
        }
    }

    pub fn profile(&self) -> Result<VisitationProfile> {
        let spec = self.profile.as_deref().unwrap_or("typical");
        parse_profile(spec)
    }

    /// Builds the configured scheme. `sc:<file>` runs shared cues over a
    /// family exchange file; anything else is a named preset.
    pub fn scheme(&self, inv: &Inventories) -> Result<Scheme> {
        let spec = self
            .scheme
            .as_deref()
            .ok_or_else(|| Error::Parse("missing required field `scheme`".into()))?;
        let profile = self.profile()?;
        let policy = self.policy()?;
        let seed = self.seed.unwrap_or(0);
        if let Some(path) = spec.strip_prefix("sc:") {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read family file {path}: {e}")))?;
            let family = SharingFamily::from_exchange_format(&text)?;
            let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
            return shared_cues_generate(
                &format!("SC({path})"),
                &family,
                &profile,
                &policy,
                self.horizon(),
                &mut rng,
                inv,
            );
        }
        let id = SchemeId::from_str(spec)?;
        generate_scheme(id, &profile, &policy, self.horizon(), seed, inv)
    }
}

/// A preset name or an explicit comma-separated rate list.
pub fn parse_profile(spec: &str) -> Result<VisitationProfile> {
    if let Ok(preset) = PresetProfile::from_str(spec) {
        return Ok(preset_profile(preset));
    }
    if spec.contains(',') || spec.parse::<f64>().is_ok() {
        let rates: Result<Vec<f64>> = spec
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad rate {tok:?} in profile list")))
            })
            .collect();
        return VisitationProfile::new(rates?);
    }
    Err(Error::Parse(format!(
        "unknown profile {spec:?} (expected a preset name or a rate list)"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_merges() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("exp.conf");
        std::fs::write(&path, "scheme = sc1\npolicy = CR:3 # comment\nt = 200\nseed = 9\n").unwrap();
        let file = ExperimentConfig::load(&path).unwrap();
        assert_eq!(file.scheme.as_deref(), Some("sc1"));
        assert_eq!(file.horizon(), 200.0);
        let overrides = ExperimentConfig { horizon: Some(365.0), ..Default::default() };
        let merged = file.merged(&overrides);
        assert_eq!(merged.horizon(), 365.0);
        assert_eq!(merged.seed, Some(9));
        assert_eq!(merged.policy().unwrap().sigma, 3.0);
    }

    #[test]
    fn reports_bad_lines_with_position() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("exp.conf");
        std::fs::write(&path, "scheme = sc1\nbogus-key = 3\n").unwrap();
        let err = ExperimentConfig::load(&path).unwrap_err().to_string();
        assert!(err.contains(":2"), "{err}");
        assert!(err.contains("bogus-key"), "{err}");

        std::fs::write(&path, "t = fast\n").unwrap();
        let err = ExperimentConfig::load(&path).unwrap_err().to_string();
        assert!(err.contains(":1") && err.contains('t'), "{err}");
    }

    #[test]
    fn profiles_parse_presets_and_rate_lists() {
        assert_eq!(parse_profile("very-active").unwrap().accounts(), 75);
        let explicit = parse_profile("1.0, 0.5,0.25").unwrap();
        assert_eq!(explicit.rates, vec![1.0, 0.5, 0.25]);
        assert!(parse_profile("nonsense").is_err());
        assert!(parse_profile("1.0,oops").is_err());
    }
}
