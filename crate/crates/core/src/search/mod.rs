//! Pole-selection strategies.
//!
//! Every strategy maximizes the captured energy `Σ |⟨f, E_k⟩|²` over pole
//! tuples of a fixed length and is registered by name in a
//! [`SearchRegistry`], so callers pick one at runtime.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hardy::{Cpx, HardyFunction};
use crate::tm::{captured_energy, BlaschkeForm, PoleTuple};

mod greedy;
mod nbest;
mod simplex;

pub use greedy::{greedy_afd, greedy_step, GreedyAfd};
pub use nbest::{nbest_search, NBestSearch};

/// A remainder is treated as identically zero below this fraction of `‖f‖`.
pub const ZERO_REMAINDER_EPS: f64 = 1e-13;
/// `|c_n| < DEGENERACY_EPS·‖f‖` marks a degenerate optimum.
pub const DEGENERACY_EPS: f64 = 1e-8;

fn default_n() -> usize {
    1
}
fn default_grid_radial() -> usize {
    24
}
fn default_grid_angular() -> usize {
    64
}
fn default_r_max() -> f64 {
    0.999
}
fn default_refine_iters() -> usize {
    200
}
fn default_restarts() -> usize {
    8
}
fn default_tol_obj() -> f64 {
    1e-10
}

/// Tuning for the pole searches.
///
/// `refine_iters` bounds both the simplex iterations of one local refinement
/// and the number of coordinate-ascent sweeps of one restart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchConfig {
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_grid_radial")]
    pub grid_radial: usize,
    #[serde(default = "default_grid_angular")]
    pub grid_angular: usize,
    #[serde(default = "default_r_max")]
    pub r_max: f64,
    #[serde(default = "default_refine_iters")]
    pub refine_iters: usize,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default = "default_tol_obj")]
    pub tol_obj: f64,
    #[serde(default)]
    pub rng_seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            n: default_n(),
            grid_radial: default_grid_radial(),
            grid_angular: default_grid_angular(),
            r_max: default_r_max(),
            refine_iters: default_refine_iters(),
            restarts: default_restarts(),
            tol_obj: default_tol_obj(),
            rng_seed: 0,
        }
    }
}

impl SearchConfig {
    pub fn with_n(n: usize) -> Self {
        Self {
            n,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("n", self.n),
            ("grid_radial", self.grid_radial),
            ("grid_angular", self.grid_angular),
            ("refine_iters", self.refine_iters),
            ("restarts", self.restarts),
        ];
        if let Some((name, _)) = counts.iter().find(|(_, v)| *v == 0) {
            return Err(Error::Input(format!("{name} must be positive")));
        }
        if !(self.r_max > 0.0 && self.r_max < 1.0) {
            return Err(Error::Input(format!("r_max = {} must lie in (0, 1)", self.r_max)));
        }
        if !(self.tol_obj >= 0.0 && self.tol_obj.is_finite()) {
            return Err(Error::Input(format!("tol_obj = {} must be finite and nonnegative", self.tol_obj)));
        }
        Ok(())
    }
}

/// One restart of a multi-start search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestartSummary {
    pub index: usize,
    pub start: String,
    pub initial_objective: f64,
    pub objective: f64,
    pub sweeps: usize,
    pub converged: bool,
}

/// Outcome of a pole search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub strategy: String,
    pub form: BlaschkeForm,
    /// Captured energy `Σ |c_k|²`.
    pub objective: f64,
    pub residual_norm: f64,
    /// `(iteration, objective)` pairs.
    pub trace: Vec<(usize, f64)>,
    pub degenerate_flag: bool,
    /// False when an iteration budget ran out before the objective settled.
    pub converged: bool,
    /// Number of poles carrying selected (not padded) entries.
    pub active_poles: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub restarts: Vec<RestartSummary>,
}

/// Captured energy `Σ |⟨f, E_k⟩|²` of `poles`, equivalently
/// `‖f‖² − ‖f − Σ ⟨f, E_k⟩ E_k‖²`.
pub fn objective(f: &HardyFunction, poles: &PoleTuple) -> Result<f64> {
    captured_energy(f, poles)
}

/// A pole-selection strategy.
pub trait PoleSearch: Send + Sync {
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    fn search(&self, f: &HardyFunction, cfg: &SearchConfig) -> Result<SearchResult>;
}

/// Strategies keyed by name.
pub struct SearchRegistry {
    strategies: BTreeMap<&'static str, Box<dyn PoleSearch>>,
}

impl SearchRegistry {
    pub fn empty() -> Self {
        Self {
            strategies: BTreeMap::new(),
        }
    }

    /// Registry holding `greedy` and `nbest`.
    pub fn with_defaults() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(GreedyAfd)).expect("fresh registry");
        r.register(Box::new(NBestSearch)).expect("fresh registry");
        r
    }

    pub fn register(&mut self, strategy: Box<dyn PoleSearch>) -> Result<()> {
        let name = strategy.name();
        if self.strategies.contains_key(name) {
            return Err(Error::Input(format!("search strategy '{name}' is already registered")));
        }
        self.strategies.insert(name, strategy);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&dyn PoleSearch> {
        self.strategies.get(name).map(|s| s.as_ref())
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.strategies.keys().copied()
    }

    pub fn run(&self, name: &str, f: &HardyFunction, cfg: &SearchConfig) -> Result<SearchResult> {
        let strategy = self.get(name).ok_or_else(|| {
            Error::Input(format!(
                "unknown search strategy '{name}' (known: {})",
                self.names().collect::<Vec<_>>().join(", ")
            ))
        })?;
        strategy.search(f, cfg)
    }
}

impl Default for SearchRegistry {
    fn default() -> Self {
        Self::with_defaults()
    }
}

pub(crate) fn zero() -> Cpx {
    Cpx::new(0.0, 0.0)
}
