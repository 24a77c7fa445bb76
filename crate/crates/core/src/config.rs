//! Solver configuration, loadable from TOML through serde.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Dp,
    Brute,
    #[default]
    Auto,
}

impl std::str::FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "dp" => Ok(Backend::Dp),
            "brute" => Ok(Backend::Brute),
            "auto" => Ok(Backend::Auto),
            other => Err(format!("unknown backend '{other}' (expected dp, brute or auto)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReducedSolverConfig {
    pub backend: Backend,
    /// With `Auto`, instances of at most this many vertices go to brute force.
    pub brute_threshold: usize,
    pub max_modulator: usize,
}

impl Default for ReducedSolverConfig {
    fn default() -> Self {
        ReducedSolverConfig {
            backend: Backend::Auto,
            brute_threshold: 24,
            max_modulator: 16,
        }
    }
}

impl ReducedSolverConfig {
    pub fn with_backend(backend: Backend) -> Self {
        ReducedSolverConfig { backend, ..Default::default() }
    }

    pub fn use_brute(&self, n: usize) -> bool {
        match self.backend {
            Backend::Dp => false,
            Backend::Brute => true,
            Backend::Auto => n <= self.brute_threshold,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub reduced_solver: ReducedSolverConfig,
    /// `None` validates only graphs with at most `validate_class_limit` vertices.
    pub validate_class: Option<bool>,
    pub validate_class_limit: usize,
    /// Run the structural audits on every certified candidate.
    pub audit: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            reduced_solver: ReducedSolverConfig::default(),
            validate_class: None,
            validate_class_limit: 40,
            audit: false,
        }
    }
}

impl SolverConfig {
    pub fn from_toml(text: &str) -> std::result::Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn should_validate(&self, n: usize) -> bool {
        self.validate_class.unwrap_or(n <= self.validate_class_limit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip() {
        let cfg = SolverConfig::from_toml("[reduced_solver]\nbackend = \"dp\"\nmax_modulator = 8\n").unwrap();
        assert_eq!(cfg.reduced_solver.backend, Backend::Dp);
        assert_eq!(cfg.reduced_solver.max_modulator, 8);
        assert_eq!(cfg.reduced_solver.brute_threshold, 24);
        assert!(SolverConfig::from_toml("bogus = 1").is_err());
    }

    #[test]
    fn auto_threshold() {
        let cfg = ReducedSolverConfig::default();
        assert!(cfg.use_brute(24));
        assert!(!cfg.use_brute(25));
    }
}
