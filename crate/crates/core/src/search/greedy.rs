use std::f64::consts::PI;

use super::simplex;
use super::{zero, PoleSearch, SearchConfig, SearchResult, DEGENERACY_EPS, ZERO_REMAINDER_EPS};
use crate::error::{Error, Result};
use crate::hardy::{Cpx, DiscPoint, HardyFunction};
use crate::tm::{decompose, remainder_step, BlaschkeForm, PoleTuple, ReducedRemainder};

const SIMPLEX_XTOL: f64 = 1e-12;

/// `(1 − |a|²)·|g(a)|²`, the squared greedy score.
fn score_sqr(g: &HardyFunction, a: Cpx) -> f64 {
    (1.0 - a.norm_sqr()).max(0.0) * g.eval_unchecked(a).norm_sqr()
}

fn project(a: Cpx, r_max: f64) -> Cpx {
    let r = a.norm();
    if r > r_max {
        a * (r_max / r)
    } else {
        a
    }
}

/// Candidate radii, sine-spaced on `(0, r_max]` so they bunch up toward the
/// circle.
pub(crate) fn candidate_radii(cfg: &SearchConfig) -> Vec<f64> {
    let count = cfg.grid_radial;
    (1..=count)
        .map(|i| cfg.r_max * (0.5 * PI * i as f64 / count as f64).sin())
        .collect()
}

/// Best point of `{0} ∪ {r_i e^{2πiq/A}}` (plus `incumbent`, if given) for the
/// score of `g`, refined by a simplex search clamped to `|a| ≤ r_max`.
///
/// Ties keep the first candidate in scan order: the origin, then increasing
/// radius, then increasing angular index, then the incumbent.
pub(crate) fn select_pole(
    state: &ReducedRemainder,
    cfg: &SearchConfig,
    incumbent: Option<DiscPoint>,
) -> Result<DiscPoint> {
    let g = state.function();
    let norm = g.norm();
    if norm == 0.0 || norm <= ZERO_REMAINDER_EPS * state.source_norm() {
        return Err(Error::NothingToSelect { norm });
    }

    let mut best = (zero(), score_sqr(g, zero()));
    for r in candidate_radii(cfg) {
        let weight = 1.0 - r * r;
        for (q, value) in g.eval_on_circle(r, cfg.grid_angular).into_iter().enumerate() {
            let s = weight * value.norm_sqr();
            if s > best.1 {
                let theta = 2.0 * PI * q as f64 / cfg.grid_angular as f64;
                best = (Cpx::from_polar(r, theta), s);
            }
        }
    }
    if let Some(a) = incumbent {
        let s = score_sqr(g, a.value());
        if s > best.1 {
            best = (a.value(), s);
        }
    }

    let step = cfg.r_max / cfg.grid_radial as f64;
    let (x, _) = simplex::minimize(
        |p| -score_sqr(g, project(Cpx::new(p[0], p[1]), cfg.r_max)),
        [best.0.re, best.0.im],
        step,
        cfg.refine_iters,
        SIMPLEX_XTOL,
    );
    DiscPoint::clamped(Cpx::new(x[0], x[1]), cfg.r_max)
}

/// One maximal-selection step: a maximizer of `|√(1−|a|²)·g(a)|`.
pub fn greedy_step(state: &ReducedRemainder, cfg: &SearchConfig) -> Result<DiscPoint> {
    select_pole(state, cfg, None)
}

/// Pads a form with origin poles carrying zero coefficients up to `n` entries.
pub(crate) fn padded_form(form: BlaschkeForm, n: usize) -> Result<BlaschkeForm> {
    let mut poles = form.poles().clone();
    let mut coeffs = form.coeffs().to_vec();
    while poles.len() < n {
        poles.push(DiscPoint::origin());
        coeffs.push(zero());
    }
    BlaschkeForm::new(poles, coeffs, form.grid())
}

/// Chains `n` greedy steps through the reduced-remainder recursion.
pub fn greedy_afd(f: &HardyFunction, cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    let f_norm = f.norm();
    let mut state = ReducedRemainder::new(f);
    let mut poles = PoleTuple::default();
    let mut trace = Vec::with_capacity(cfg.n);
    let mut energy = 0.0;
    let mut stopped_early = false;

    for k in 1..=cfg.n {
        let a = match greedy_step(&state, cfg) {
            Ok(a) => a,
            Err(Error::NothingToSelect { .. }) => {
                stopped_early = true;
                break;
            }
            Err(e) => return Err(e),
        };
        poles.push(a);
        energy += state.coefficient_at(a).norm_sqr();
        trace.push((k, energy));
        if k < cfg.n {
            state = remainder_step(&state, a)?.1;
        }
    }

    let active = poles.len();
    let (form, residual) = decompose(f, &poles)?;
    let objective = form.energy();
    let trailing_small = form
        .coeffs()
        .last()
        .is_none_or(|c| c.norm() < DEGENERACY_EPS * f_norm);
    Ok(SearchResult {
        strategy: "greedy".into(),
        form: padded_form(form, cfg.n)?,
        objective,
        residual_norm: residual.norm(),
        trace,
        degenerate_flag: stopped_early || trailing_small,
        converged: true,
        active_poles: active,
        restarts: Vec::new(),
    })
}

/// Greedy adaptive decomposition: one maximal-selection step per pole.
pub struct GreedyAfd;

impl PoleSearch for GreedyAfd {
    fn name(&self) -> &'static str {
        "greedy"
    }

    fn description(&self) -> &'static str {
        "maximal selection, one pole at a time"
    }

    fn search(&self, f: &HardyFunction, cfg: &SearchConfig) -> Result<SearchResult> {
        greedy_afd(f, cfg)
    }
}
