//! Executable checks for the kernel identities and inequalities behind the
//! construction, and named suites that run them over seeded random cases.
//!
//! Every check reduces its trials to a single worst margin, normalized so that
//! a positive margin means the inequality holds with room to spare.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::corpus;
use crate::error::{Error, Result};
use crate::hardy::{Cpx, DiscPoint, HardyFunction, DEFAULT_GRID_SIZE};
use crate::tm::{blaschke_product, decompose, pseudo_distance, PoleTuple};

/// Central-difference step for derivative checks.
pub const DIFF_STEP: f64 = 1e-5;
pub const LEMMA1_TOL: f64 = 1e-9;
pub const SCHWARZ_TOL: f64 = 1e-12;
pub const SCHWARZ_DERIV_TOL: f64 = 1e-8;
pub const RESIDUAL_ZERO_EPS: f64 = 1e-9;
pub const COEFF_BOUND_TOL: f64 = 1e-9;
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Reduced outcome of a property check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport {
    pub name: String,
    pub trials: usize,
    /// Smallest slack observed; positive means satisfied.
    pub worst_margin: f64,
    pub tolerance: f64,
    /// Inputs that produced `worst_margin`.
    pub witness: Value,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
}

impl PropertyReport {
    fn single(name: &str, margin: f64, tolerance: f64, witness: Value) -> Self {
        Self {
            name: name.to_string(),
            trials: 1,
            worst_margin: margin,
            tolerance,
            witness,
            passed: margin >= -tolerance,
            details: None,
        }
    }

    fn with_details(mut self, details: Option<Value>) -> Self {
        self.details = details;
        self
    }

    /// Reduces several reports of the same property; the first report with the
    /// smallest margin supplies the witness.
    pub fn merge(name: &str, reports: Vec<PropertyReport>) -> Self {
        let trials = reports.iter().map(|r| r.trials).sum();
        let tolerance = reports.iter().map(|r| r.tolerance).fold(f64::INFINITY, f64::min);
        let worst = reports
            .into_iter()
            .reduce(|a, b| if b.worst_margin < a.worst_margin { b } else { a });
        match worst {
            Some(w) => Self {
                name: name.to_string(),
                trials,
                worst_margin: w.worst_margin,
                tolerance,
                passed: w.worst_margin >= -tolerance,
                witness: w.witness,
                details: None,
            },
            None => Self {
                name: name.to_string(),
                trials: 0,
                worst_margin: f64::INFINITY,
                tolerance: 0.0,
                witness: Value::Null,
                passed: true,
                details: None,
            },
        }
    }
}

fn cpx_json(z: Cpx) -> Value {
    json!([z.re, z.im])
}

fn poles_json(poles: &PoleTuple) -> Value {
    Value::Array(poles.values().into_iter().map(cpx_json).collect())
}

fn function_json(f: &HardyFunction) -> Value {
    serde_json::to_value(f).unwrap_or(Value::Null)
}

/// An analytic map of the disc into its closure.
#[derive(Debug, Clone)]
pub enum SelfMap {
    BlaschkeProduct(PoleTuple),
    /// `f / bound`, where `bound` dominates `|f|` on the closed disc.
    ScaledHardy { function: HardyFunction, bound: f64 },
    /// Constant map; the value must lie in the open disc.
    Constant(DiscPoint),
}

impl SelfMap {
    /// `f` scaled by the ℓ¹ norm of its coefficients, a guaranteed sup bound.
    pub fn scaled(function: HardyFunction) -> Self {
        let bound = match function.taylor() {
            Some(t) => t.iter().map(|c| c.norm()).sum::<f64>(),
            None => function.spectrum().iter().map(|c| c.norm()).sum::<f64>(),
        };
        Self::ScaledHardy {
            function,
            bound: if bound > 0.0 { bound } else { 1.0 },
        }
    }

    pub fn eval(&self, z: Cpx) -> Result<Cpx> {
        match self {
            Self::BlaschkeProduct(poles) => blaschke_product(poles.as_slice(), z),
            Self::ScaledHardy { function, bound } => Ok(function.eval_unchecked(z) / *bound),
            Self::Constant(c) => Ok(c.value()),
        }
    }

    fn describe(&self) -> Value {
        match self {
            Self::BlaschkeProduct(p) => json!({"kind": "blaschke_product", "poles": poles_json(p)}),
            Self::ScaledHardy { function, bound } => {
                json!({"kind": "scaled_hardy", "function": function_json(function), "bound": bound})
            }
            Self::Constant(c) => json!({"kind": "constant", "value": cpx_json(c.value())}),
        }
    }
}

/// `sup_grid |f_{a_1..a_k}| ≤ 3^k·sup_grid |f|`.
pub fn check_lemma1(f: &HardyFunction, poles: &PoleTuple) -> Result<PropertyReport> {
    let m = f.grid_sup();
    let (_, residual) = decompose(f, poles)?;
    let sup = residual.grid_sup();
    let bound = 3f64.powi(poles.len() as i32) * m;
    let margin = if bound > 0.0 { 1.0 - sup / bound } else { -sup };
    Ok(PropertyReport::single(
        "lemma1",
        margin,
        LEMMA1_TOL,
        json!({"function": function_json(f), "poles": poles_json(poles), "residual_sup": sup, "bound": bound}),
    ))
}

/// Decay of `max_θ |√(1−r²)·f(re^{iθ})|` as `r → 1`; the value at the largest
/// radius must not exceed `√(1−r²)·sup_grid |f|`.
pub fn check_boundary_vanishing(f: &HardyFunction, radii: &[f64]) -> Result<PropertyReport> {
    if radii.is_empty() {
        return Err(Error::Input("no radii given".into()));
    }
    if radii.iter().any(|&r| !(0.0..1.0).contains(&r)) || radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Input("radii must increase within [0, 1)".into()));
    }
    let sup = f.grid_sup();
    let table: Vec<(f64, f64)> = radii
        .iter()
        .map(|&r| {
            let weight = (1.0 - r * r).sqrt();
            let peak = f
                .eval_on_circle(r, f.grid_size())
                .iter()
                .map(|v| v.norm())
                .fold(0.0, f64::max);
            (r, weight * peak)
        })
        .collect();
    let &(r_last, v_last) = table.last().expect("nonempty");
    let bound = (1.0 - r_last * r_last).sqrt() * sup;
    let margin = if bound > 0.0 { 1.0 - v_last / bound } else { -v_last };
    Ok(PropertyReport::single(
        "boundary",
        margin,
        BOUNDARY_TOL,
        json!({"function": function_json(f), "radius": r_last, "value": v_last, "bound": bound}),
    )
    .with_details(Some(json!({ "table": table }))))
}

/// `ρ(g(z0), g(z)) ≤ ρ(z0, z)` over the given pairs.
pub fn check_schwarz(g: &SelfMap, pairs: &[(DiscPoint, DiscPoint)]) -> Result<PropertyReport> {
    let reports = pairs
        .iter()
        .map(|&(z0, z)| {
            let lhs = pseudo_distance(g.eval(z0.value())?, g.eval(z.value())?)?;
            let rhs = pseudo_distance(z0.value(), z.value())?;
            Ok(PropertyReport::single(
                "schwarz",
                rhs - lhs,
                SCHWARZ_TOL,
                json!({"z0": cpx_json(z0.value()), "z": cpx_json(z.value()), "lhs": lhs, "rhs": rhs}),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut merged = PropertyReport::merge("schwarz", reports);
    merged.witness = json!({"map": g.describe(), "pair": merged.witness});
    Ok(merged)
}

/// `|g′(z)|(1−|z|²) ≤ 1 − |g(z)|²`, with `g′` from central differences along
/// both real directions.
pub fn check_schwarz_derivative(g: &SelfMap, points: &[DiscPoint]) -> Result<PropertyReport> {
    let h = DIFF_STEP;
    let reports = points
        .iter()
        .map(|&p| {
            let z = p.value();
            if z.norm() > 0.99 {
                return Err(Error::Input(format!("point {z} lies outside |z| ≤ 0.99")));
            }
            let dx = (g.eval(z + h)? - g.eval(z - h)?) / (2.0 * h);
            let ih = Cpx::new(0.0, h);
            let dy = (g.eval(z + ih)? - g.eval(z - ih)?) / (2.0 * ih);
            let deriv = 0.5 * (dx + dy);
            let lhs = deriv.norm() * (1.0 - z.norm_sqr());
            let rhs = 1.0 - g.eval(z)?.norm_sqr();
            Ok(PropertyReport::single(
                "schwarz-deriv",
                rhs - lhs,
                SCHWARZ_DERIV_TOL,
                json!({"z": cpx_json(z), "lhs": lhs, "rhs": rhs}),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut merged = PropertyReport::merge("schwarz-deriv", reports);
    merged.witness = json!({"map": g.describe(), "point": merged.witness});
    Ok(merged)
}

/// The residual `f − Σ⟨f,E_k⟩E_k` vanishes at every pole.
pub fn check_residual_zeros(f: &HardyFunction, poles: &PoleTuple) -> Result<PropertyReport> {
    let f_norm = f.norm();
    let (_, residual) = decompose(f, poles)?;
    let worst = poles
        .as_slice()
        .iter()
        .map(|&a| residual.eval_interior(a).norm())
        .fold(0.0, f64::max);
    let relative = if f_norm > 0.0 { worst / f_norm } else { worst };
    Ok(PropertyReport::single(
        "residual-zeros",
        RESIDUAL_ZERO_EPS - relative,
        0.0,
        json!({"function": function_json(f), "poles": poles_json(poles), "max_abs_residual": worst}),
    ))
}

/// `|⟨f, E_{a_1..a_n}⟩| ≤ 3^{n−1}·sup_grid |f|·√(1−|a_n|²)`.
pub fn check_coefficient_bound(f: &HardyFunction, poles: &PoleTuple) -> Result<PropertyReport> {
    let n = poles.len();
    if n < 2 {
        return Err(Error::Precondition("coefficient bound needs at least two poles".into()));
    }
    let (form, _) = decompose(f, poles)?;
    let coeff = form.coeffs()[n - 1].norm();
    let bound = 3f64.powi(n as i32 - 1) * f.grid_sup() * poles[n - 1].weight();
    let margin = if bound > 0.0 { 1.0 - coeff / bound } else { -coeff };
    Ok(PropertyReport::single(
        "coeff-bound",
        margin,
        COEFF_BOUND_TOL,
        json!({"function": function_json(f), "poles": poles_json(poles), "coefficient": coeff, "bound": bound}),
    ))
}

/// Seed, trial budget and grid shared by the suites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteContext {
    pub seed: u64,
    /// Overrides each suite's default trial count.
    pub trials: Option<usize>,
    pub grid_size: usize,
}

impl Default for SuiteContext {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: None,
            grid_size: DEFAULT_GRID_SIZE,
        }
    }
}

impl SuiteContext {
    fn trials_or(&self, default: usize) -> usize {
        self.trials.unwrap_or(default)
    }

    /// Independent generator per (suite, trial), so parallel trials stay
    /// reproducible.
    fn rng(&self, salt: u64, trial: usize) -> ChaCha8Rng {
        let mix = salt
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add((trial as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9));
        ChaCha8Rng::seed_from_u64(self.seed ^ mix)
    }
}

/// A named property suite.
pub trait PropertySuite: Send + Sync {
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    fn run(&self, ctx: &SuiteContext) -> Result<Vec<PropertyReport>>;
}

fn run_trials(
    name: &str,
    ctx: &SuiteContext,
    salt: u64,
    default_trials: usize,
    trial: impl Fn(&mut ChaCha8Rng) -> Result<PropertyReport> + Sync,
) -> Result<PropertyReport> {
    let reports = (0..ctx.trials_or(default_trials))
        .into_par_iter()
        .map(|i| trial(&mut ctx.rng(salt, i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(PropertyReport::merge(name, reports))
}

pub struct Lemma1Suite;

impl PropertySuite for Lemma1Suite {
    fn name(&self) -> &'static str {
        "lemma1"
    }
    fn description(&self) -> &'static str {
        "residual sup bound 3^k·M after k projection steps"
    }
    fn run(&self, ctx: &SuiteContext) -> Result<Vec<PropertyReport>> {
        let report = run_trials("lemma1", ctx, 1, 200, |rng| {
            let degree = rng.gen_range(0..=8);
            let k = rng.gen_range(1..=4);
            let f = corpus::random_polynomial(rng, degree, ctx.grid_size);
            check_lemma1(&f, &corpus::random_poles(rng, k, 0.9))
        })?;
        Ok(vec![report])
    }
}

pub struct BoundarySuite;

/// Radii used by the boundary-vanishing suite.
pub const BOUNDARY_RADII: [f64; 8] = [0.5, 0.9, 0.99, 0.995, 0.999, 0.9995, 0.9999, 0.99999];

impl PropertySuite for BoundarySuite {
    fn name(&self) -> &'static str {
        "boundary"
    }
    fn description(&self) -> &'static str {
        "|⟨f, e_a⟩| → 0 as |a| → 1 over the function corpus"
    }
    fn run(&self, ctx: &SuiteContext) -> Result<Vec<PropertyReport>> {
        let mut rng = ctx.rng(2, 0);
        corpus::standard_corpus(&mut rng, ctx.grid_size)?
            .into_iter()
            .map(|entry| {
                let mut report = check_boundary_vanishing(&entry.function, &BOUNDARY_RADII)?;
                report.name = format!("boundary:{}", entry.name);
                Ok(report)
            })
            .collect()
    }
}

/// Self-maps exercised by the Schwarz suites.
pub fn schwarz_fixtures(grid_size: usize, seed: u64) -> Result<Vec<(String, SelfMap)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5C4A);
    let c = Cpx::new;
    Ok(vec![
        ("identity".into(), SelfMap::BlaschkeProduct(PoleTuple::from_complex(&[c(0.0, 0.0)])?)),
        ("factor:0.5".into(), SelfMap::BlaschkeProduct(PoleTuple::from_complex(&[c(0.5, 0.0)])?)),
        (
            "product:3".into(),
            SelfMap::BlaschkeProduct(PoleTuple::from_complex(&[c(0.3, 0.4), c(-0.6, 0.0), c(0.0, 0.2)])?),
        ),
        ("scaled:random-poly".into(), SelfMap::scaled(corpus::random_polynomial(&mut rng, 5, grid_size))),
        ("scaled:kernel".into(), SelfMap::scaled(corpus::szego_function(DiscPoint::from_re_im(0.5, -0.3)?, grid_size)?)),
        ("constant".into(), SelfMap::Constant(DiscPoint::from_re_im(0.5, 0.0)?)),
    ])
}

pub struct SchwarzSuite;

impl PropertySuite for SchwarzSuite {
    fn name(&self) -> &'static str {
        "schwarz"
    }
    fn description(&self) -> &'static str {
        "Schwarz-Pick contraction of the pseudohyperbolic metric"
    }
    fn run(&self, ctx: &SuiteContext) -> Result<Vec<PropertyReport>> {
        let trials = ctx.trials_or(1000);
        schwarz_fixtures(ctx.grid_size, ctx.seed)?
            .into_iter()
            .enumerate()
            .map(|(i, (name, map))| {
                let mut rng = ctx.rng(3, i);
                let pairs: Vec<_> = (0..trials)
                    .map(|_| {
                        let z0 = corpus::random_disc_point(&mut rng, 0.99);
                        let z = corpus::random_disc_point(&mut rng, 0.99);
                        (z0, z)
                    })
                    .collect();
                let mut report = check_schwarz(&map, &pairs)?;
                report.name = format!("schwarz:{name}");
                Ok(report)
            })
            .collect()
    }
}

pub struct SchwarzDerivativeSuite;

impl PropertySuite for SchwarzDerivativeSuite {
    fn name(&self) -> &'static str {
        "schwarz-deriv"
    }
    fn description(&self) -> &'static str {
        "Schwarz-Pick derivative bound with central differences"
    }
    fn run(&self, ctx: &SuiteContext) -> Result<Vec<PropertyReport>> {
        let trials = ctx.trials_or(1000);
        schwarz_fixtures(ctx.grid_size, ctx.seed)?
            .into_iter()
            .enumerate()
            .map(|(i, (name, map))| {
                let mut rng = ctx.rng(4, i);
                let points: Vec<_> = (0..trials).map(|_| corpus::random_disc_point(&mut rng, 0.99)).collect();
                let mut report = check_schwarz_derivative(&map, &points)?;
                report.name = format!("schwarz-deriv:{name}");
                Ok(report)
            })
            .collect()
    }
}

pub struct ResidualZerosSuite;

impl PropertySuite for ResidualZerosSuite {
    fn name(&self) -> &'static str {
        "residual-zeros"
    }
    fn description(&self) -> &'static str {
        "residual vanishes at every pole used in the projection"
    }
    fn run(&self, ctx: &SuiteContext) -> Result<Vec<PropertyReport>> {
        let report = run_trials("residual-zeros", ctx, 5, 100, |rng| {
            let degree = rng.gen_range(0..=8);
            let n = rng.gen_range(1..=5);
            let f = corpus::random_polynomial(rng, degree, ctx.grid_size);
            check_residual_zeros(&f, &corpus::random_poles(rng, n, 0.9))
        })?;
        Ok(vec![report])
    }
}

pub struct CoefficientBoundSuite;

/// Radii of the tested (last) pole in the coefficient-bound suite.
pub const COEFF_BOUND_RADII: [f64; 3] = [0.9, 0.99, 0.999];

impl PropertySuite for CoefficientBoundSuite {
    fn name(&self) -> &'static str {
        "coeff-bound"
    }
    fn description(&self) -> &'static str {
        "last T-M coefficient bounded by 3^(n-1)·M·√(1−|a_n|²)"
    }
    fn run(&self, ctx: &SuiteContext) -> Result<Vec<PropertyReport>> {
        let report = run_trials("coeff-bound", ctx, 6, 200, |rng| {
            let degree = rng.gen_range(0..=8);
            let n = rng.gen_range(2..=5);
            let f = corpus::random_polynomial(rng, degree, ctx.grid_size);
            let mut poles = corpus::random_poles(rng, n - 1, 0.9);
            let r = COEFF_BOUND_RADII[rng.gen_range(0..COEFF_BOUND_RADII.len())];
            poles.push(DiscPoint::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))?);
            check_coefficient_bound(&f, &poles)
        })?;
        Ok(vec![report])
    }
}

/// Suites keyed by name.
pub struct SuiteRegistry {
    suites: BTreeMap<&'static str, Box<dyn PropertySuite>>,
    order: Vec<&'static str>,
}

impl SuiteRegistry {
    pub fn empty() -> Self {
        Self {
            suites: BTreeMap::new(),
            order: Vec::new(),
        }
    }

    pub fn with_defaults() -> Self {
        let mut r = Self::empty();
        let defaults: Vec<Box<dyn PropertySuite>> = vec![
            Box::new(Lemma1Suite),
            Box::new(BoundarySuite),
            Box::new(SchwarzSuite),
            Box::new(SchwarzDerivativeSuite),
            Box::new(ResidualZerosSuite),
            Box::new(CoefficientBoundSuite),
        ];
        for s in defaults {
            r.register(s).expect("distinct default suite names");
        }
        r
    }

    pub fn register(&mut self, suite: Box<dyn PropertySuite>) -> Result<()> {
        let name = suite.name();
        if name == "all" || self.suites.contains_key(name) {
            return Err(Error::Input(format!("suite name '{name}' is taken")));
        }
        self.order.push(name);
        self.suites.insert(name, suite);
        Ok(())
    }

    /// Suite names in registration order.
    pub fn names(&self) -> &[&'static str] {
        &self.order
    }

    pub fn get(&self, name: &str) -> Option<&dyn PropertySuite> {
        self.suites.get(name).map(|s| s.as_ref())
    }

    /// Runs one suite, or every suite for `"all"`.
    pub fn run(&self, name: &str, ctx: &SuiteContext) -> Result<Vec<PropertyReport>> {
        if name == "all" {
            let mut out = Vec::new();
            for n in &self.order {
                out.extend(self.suites[n].run(ctx)?);
            }
            return Ok(out);
        }
        let suite = self.get(name).ok_or_else(|| {
            Error::Input(format!("unknown suite '{name}' (known: all, {})", self.order.join(", ")))
        })?;
        suite.run(ctx)
    }
}

impl Default for SuiteRegistry {
    fn default() -> Self {
        Self::with_defaults()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tm::normalized_szego;

    fn c(re: f64, im: f64) -> Cpx {
        Cpx::new(re, im)
    }

    fn p(re: f64, im: f64) -> DiscPoint {
        DiscPoint::from_re_im(re, im).unwrap()
    }

    #[test]
    fn lemma1_examples() {
        let one = corpus::constant(c(1.0, 0.0), 1024).unwrap();
        let r = check_lemma1(&one, &PoleTuple::new(vec![p(0.7, -0.2)])).unwrap();
        assert!(r.passed);

        // Oracle: f − ⟨f,e_a⟩e_a evaluated directly on the grid for f(z) = z.
        let z = corpus::monomial(1, 1024).unwrap();
        let a = p(0.9, 0.0);
        let direct = z
            .grid()
            .nodes()
            .map(|node| (node - a.value() * a.weight() * normalized_szego(a, node).unwrap()).norm())
            .fold(0.0, f64::max);
        let r = check_lemma1(&z, &PoleTuple::new(vec![a])).unwrap();
        assert!(r.passed);
        assert!((r.witness["residual_sup"].as_f64().unwrap() - direct).abs() < 1e-12);
        assert!(direct <= 3.0);
    }

    #[test]
    fn boundary_examples() {
        let radii = [0.5, 0.9, 0.99, 0.9999];
        let one = corpus::constant(c(1.0, 0.0), 512).unwrap();
        let r = check_boundary_vanishing(&one, &radii).unwrap();
        let table = r.details.as_ref().unwrap()["table"].as_array().unwrap().clone();
        for (row, rad) in table.iter().zip(radii) {
            assert!((row[1].as_f64().unwrap() - (1.0 - rad * rad).sqrt()).abs() < 1e-15);
        }
        assert!(r.passed);

        let z = corpus::monomial(1, 512).unwrap();
        let r = check_boundary_vanishing(&z, &radii).unwrap();
        for (row, rad) in r.details.as_ref().unwrap()["table"].as_array().unwrap().iter().zip(radii) {
            assert!((row[1].as_f64().unwrap() - rad * (1.0 - rad * rad).sqrt()).abs() < 1e-14);
        }

        assert!(check_boundary_vanishing(&z, &[0.9, 0.5]).is_err());
        assert!(check_boundary_vanishing(&z, &[1.0]).is_err());
    }

    #[test]
    fn schwarz_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let pairs: Vec<_> = (0..1000)
            .map(|_| (corpus::random_disc_point(&mut rng, 0.99), corpus::random_disc_point(&mut rng, 0.99)))
            .collect();
        let identity = SelfMap::BlaschkeProduct(PoleTuple::new(vec![p(0.0, 0.0)]));
        let r = check_schwarz(&identity, &pairs).unwrap();
        assert!(r.passed && r.worst_margin.abs() < 1e-15);
        let factor = SelfMap::BlaschkeProduct(PoleTuple::new(vec![p(0.5, 0.0)]));
        assert!(check_schwarz(&factor, &pairs).unwrap().passed);
        let constant = SelfMap::Constant(p(0.3, 0.0));
        let r = check_schwarz(&constant, &pairs).unwrap();
        assert!(r.passed && r.worst_margin >= 0.0);
    }

    #[test]
    fn schwarz_derivative_examples() {
        let identity = SelfMap::BlaschkeProduct(PoleTuple::new(vec![p(0.0, 0.0)]));
        let r = check_schwarz_derivative(&identity, &[p(0.0, 0.0)]).unwrap();
        assert!(r.passed && r.worst_margin.abs() < 1e-10);

        // At z = a an automorphism attains equality: g′(a) = 1/(1−|a|²).
        let a = p(0.4, -0.3);
        let factor = SelfMap::BlaschkeProduct(PoleTuple::new(vec![a]));
        let r = check_schwarz_derivative(&factor, &[a]).unwrap();
        assert!(r.passed && r.worst_margin.abs() < 1e-8, "{}", r.worst_margin);

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let scaled = SelfMap::scaled(corpus::random_polynomial(&mut rng, 6, 64));
        let points: Vec<_> = (0..500).map(|_| corpus::random_disc_point(&mut rng, 0.99)).collect();
        assert!(check_schwarz_derivative(&scaled, &points).unwrap().passed);
    }

    #[test]
    fn residual_zero_examples() {
        let b = p(0.1, 0.6);
        let f = corpus::szego_function(b, 1024).unwrap();
        assert!(check_residual_zeros(&f, &PoleTuple::new(vec![b])).unwrap().passed);

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = corpus::random_polynomial(&mut rng, 6, 1024);
        assert!(check_residual_zeros(&f, &PoleTuple::new(vec![p(0.0, 0.0)])).unwrap().passed);
        let poles = PoleTuple::new(vec![p(0.2, 0.0), p(-0.4, 0.0), p(0.1, 0.6)]);
        let r = check_residual_zeros(&f, &poles).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn coefficient_bound_examples() {
        let one = corpus::constant(c(1.0, 0.0), 1024).unwrap();
        for r in [0.9, 0.99, 0.999] {
            let poles = PoleTuple::new(vec![p(0.3, 0.0), p(r, 0.0)]);
            let report = check_coefficient_bound(&one, &poles).unwrap();
            assert!(report.passed);
            assert!(report.witness["coefficient"].as_f64().unwrap() <= 3.0 * (1.0 - r * r).sqrt());
        }

        let f = corpus::szego_function(p(0.3, 0.0), 1024).unwrap();
        let r = check_coefficient_bound(&f, &PoleTuple::new(vec![p(0.3, 0.0), p(-0.2, 0.5)])).unwrap();
        assert!(r.witness["coefficient"].as_f64().unwrap() < 1e-12);
        assert!(r.passed);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = corpus::random_polynomial(&mut rng, 7, 4096);
        let mut poles = corpus::random_poles(&mut rng, 4, 0.9);
        poles.push(DiscPoint::from_polar(0.99, 1.0).unwrap());
        assert!(check_coefficient_bound(&f, &poles).unwrap().passed);

        assert!(check_coefficient_bound(&f, &PoleTuple::new(vec![p(0.1, 0.0)])).is_err());
    }

    #[test]
    fn registry_runs_by_name() {
        let reg = SuiteRegistry::with_defaults();
        assert_eq!(
            reg.names(),
            ["lemma1", "boundary", "schwarz", "schwarz-deriv", "residual-zeros", "coeff-bound"]
        );
        let ctx = SuiteContext {
            seed: 7,
            trials: Some(5),
            grid_size: 256,
        };
        let a = reg.run("lemma1", &ctx).unwrap();
        let b = reg.run("lemma1", &ctx).unwrap();
        assert_eq!(a, b);
        assert!(matches!(reg.run("foo", &ctx), Err(Error::Input(_))));
    }
}
