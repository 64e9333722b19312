use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::magic_measures::SyndromeWeighting;
use crate::statevector::SyndromeMode;

/// Number of logical qubits as a function of `N`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum RateMode {
    /// `K = 1`.
    Vanishing,
    /// `K = round(r N)`.
    Constant { r: f64 },
}

impl RateMode {
    pub fn logical_count(&self, n: usize) -> usize {
        match *self {
            RateMode::Vanishing => 1,
            RateMode::Constant { r } => ((r * n as f64).round() as usize).clamp(1, n.saturating_sub(1).max(1)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DepthRule {
    N,
    HalfN,
    TwoN,
    Explicit(usize),
}

impl DepthRule {
    pub fn depth(&self, n: usize) -> usize {
        match *self {
            DepthRule::N => n,
            DepthRule::HalfN => (n / 2).max(1),
            DepthRule::TwoN => 2 * n,
            DepthRule::Explicit(d) => d,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Ssre,
    CondShannon,
    CondRenyi,
    /// Basis-minimized conditional entropy (`K ≤ 2`).
    CondMinimized,
    /// Emits `collision_joint` and `collision_syndrome`.
    Collision,
    /// Typical decoder-breakdown entropy `⟨S_s⟩` in bits.
    Breakdown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SyndromeModeConfig {
    /// Enumerate when `N − K ≤ 14`, else sample 256 syndromes.
    Auto,
    Enumerate,
    Sample(usize),
}

impl SyndromeModeConfig {
    pub fn resolve(&self, n: usize, k: usize, seed: u64) -> SyndromeMode {
        match *self {
            SyndromeModeConfig::Auto if n - k <= 14 => SyndromeMode::Enumerate { max_bits: 14 },
            SyndromeModeConfig::Auto => SyndromeMode::Sample { count: 256, seed },
            SyndromeModeConfig::Enumerate => SyndromeMode::Enumerate { max_bits: 26 },
            SyndromeModeConfig::Sample(count) => SyndromeMode::Sample { count, seed },
        }
    }
}

/// Default circuits per point: 5000/5000/500/50 for `N = 12/16/20/24`.
pub fn ladder_circuits(n: usize) -> usize {
    match n {
        0..=16 => 5000,
        17..=20 => 500,
        _ => 50,
    }
}

fn default_budget() -> f64 {
    1.0
}
fn default_measures() -> Vec<Measure> {
    vec![Measure::CondShannon, Measure::CondRenyi]
}
fn default_syndromes() -> SyndromeModeConfig {
    SyndromeModeConfig::Auto
}
fn default_epsilon() -> f64 {
    0.1
}
fn default_max_resamples() -> usize {
    64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub sizes: Vec<usize>,
    pub rate: RateMode,
    pub depth: DepthRule,
    pub alphas: Vec<f64>,
    /// Circuits per point; the size ladder when absent.
    #[serde(default)]
    pub circuits: Option<usize>,
    /// Multiplies the circuit count (at least one circuit is always run).
    #[serde(default = "default_budget")]
    pub budget: f64,
    pub master_seed: u64,
    #[serde(default = "default_measures")]
    pub measures: Vec<Measure>,
    #[serde(default = "default_syndromes")]
    pub syndrome_mode: SyndromeModeConfig,
    #[serde(default)]
    pub weighting: SyndromeWeighting,
    /// Threshold (bits) for the breakdown flag.
    #[serde(default = "default_epsilon")]
    pub breakdown_epsilon: f64,
    /// Attempts per circuit slot before the slot is declared failed.
    #[serde(default = "default_max_resamples")]
    pub max_resamples: usize,
}

impl SweepConfig {
    pub fn from_toml(s: &str) -> Result<Self> {
        let cfg: SweepConfig = toml::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() || self.alphas.is_empty() {
            return Err(Error::InvalidArgument("sizes and alphas must be nonempty".into()));
        }
        if let Some(&n) = self.sizes.iter().find(|&&n| n < 2 || n % 2 == 1 || n > crate::statevector::DEFAULT_MAX_QUBITS) {
            return Err(Error::InvalidArgument(format!("unsupported size {n}")));
        }
        if let RateMode::Constant { r } = self.rate {
            if !(r > 0.0 && r <= 1.0) {
                return Err(Error::InvalidArgument(format!("rate {r} outside (0, 1]")));
            }
        }
        if let Some(&a) = self
            .alphas
            .iter()
            .find(|&&a| !(0.0..=std::f64::consts::FRAC_PI_2 + 1e-12).contains(&a))
        {
            return Err(Error::InvalidArgument(format!("alpha {a} outside [0, π/2]")));
        }
        if !(self.budget > 0.0) {
            return Err(Error::InvalidArgument("budget must be positive".into()));
        }
        if self.depth.depth(2) == 0 {
            return Err(Error::InvalidArgument("depth must be positive".into()));
        }
        Ok(())
    }

    pub fn circuits_for(&self, n: usize) -> usize {
        let base = self.circuits.unwrap_or_else(|| ladder_circuits(n));
        ((base as f64 * self.budget).round() as usize).max(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip_and_defaults() {
        let text = r#"
            sizes = [8, 12]
            alphas = [0.0, 0.5]
            master_seed = 7
            depth = "n"
            rate = { mode = "constant", r = 0.5 }
        "#;
        let cfg = SweepConfig::from_toml(text).unwrap();
        assert_eq!(cfg.rate.logical_count(12), 6);
        assert_eq!(cfg.circuits_for(12), 5000);
        assert_eq!(cfg.syndrome_mode, SyndromeModeConfig::Auto);
        let back = SweepConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn invalid_values_are_rejected() {
        let bad = r#"
            sizes = [7]
            alphas = [0.1]
            master_seed = 1
            depth = "n"
            rate = { mode = "vanishing" }
        "#;
        assert!(SweepConfig::from_toml(bad).is_err());
        let bad_alpha = bad.replace("[7]", "[8]").replace("[0.1]", "[2.0]");
        assert!(SweepConfig::from_toml(&bad_alpha).is_err());
    }

    #[test]
    fn rounding_of_logical_count() {
        assert_eq!(RateMode::Constant { r: 0.25 }.logical_count(10), 3);
        assert_eq!(RateMode::Constant { r: 0.01 }.logical_count(10), 1);
        assert_eq!(RateMode::Vanishing.logical_count(20), 1);
    }
}
