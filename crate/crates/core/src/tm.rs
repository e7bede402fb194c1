//! Szegő kernels, Blaschke products, the Takenaka-Malmquist system and the
//! reduced-remainder recursion that produces T-M coefficients.

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::hardy::{check_finite, BoundaryGrid, Cpx, DiscPoint, HardyFunction};

/// Denominators below this modulus are treated as a hit on the kernel's pole.
pub const SINGULARITY_EPS: f64 = 1e-14;

/// Allowed negative-frequency leakage after a division step, relative to the
/// norm of the remainder being divided (floored at a fraction of the source norm).
pub const ANALYTICITY_TOL: f64 = 1e-8;

/// Remainders below this fraction of the source norm are judged against the
/// floor rather than their own norm.
const LEAK_FLOOR: f64 = 1e-6;

const ONE: Cpx = Cpx { re: 1.0, im: 0.0 };
const ZERO: Cpx = Cpx { re: 0.0, im: 0.0 };

fn kernel_denominator(a: Cpx, z: Cpx) -> Result<Cpx> {
    let d = ONE - a.conj() * z;
    if d.norm() < SINGULARITY_EPS {
        return Err(Error::Singularity(format!("1 - conj({a})·{z} vanishes")));
    }
    Ok(d)
}

/// Szegő kernel `k_a(z) = 1/(1 − āz)`.
pub fn szego(a: DiscPoint, z: Cpx) -> Result<Cpx> {
    Ok(ONE / kernel_denominator(a.value(), z)?)
}

/// Unit-norm Szegő kernel `e_a(z) = √(1−|a|²)/(1 − āz)`.
pub fn normalized_szego(a: DiscPoint, z: Cpx) -> Result<Cpx> {
    Ok(szego(a, z)? * a.weight())
}

/// Blaschke factor `(z − a)/(1 − āz)`.
pub fn blaschke_factor(a: DiscPoint, z: Cpx) -> Result<Cpx> {
    Ok((z - a.value()) / kernel_denominator(a.value(), z)?)
}

/// Product of Blaschke factors over `poles`; `1` for the empty tuple.
pub fn blaschke_product(poles: &[DiscPoint], z: Cpx) -> Result<Cpx> {
    poles
        .iter()
        .try_fold(ONE, |acc, &a| Ok(acc * blaschke_factor(a, z)?))
}

/// The `k`-th (1-based) Takenaka-Malmquist element
/// `E_k(z) = e_{a_k}(z)·B_{a_1..a_{k-1}}(z)`.
pub fn tm_element(poles: &[DiscPoint], k: usize, z: Cpx) -> Result<Cpx> {
    if k == 0 || k > poles.len() {
        return Err(Error::Input(format!(
            "T-M index {k} out of range 1..={}",
            poles.len()
        )));
    }
    Ok(normalized_szego(poles[k - 1], z)? * blaschke_product(&poles[..k - 1], z)?)
}

/// Pseudohyperbolic distance `|(z − z0)/(1 − z̄0 z)|`.
pub fn pseudo_distance(z0: Cpx, z: Cpx) -> Result<f64> {
    check_finite(z0, "z0")?;
    check_finite(z, "z")?;
    let d = ONE - z0.conj() * z;
    if d.norm() < SINGULARITY_EPS {
        return Err(Error::Singularity(format!(
            "pseudohyperbolic denominator vanishes for {z0}, {z}"
        )));
    }
    Ok(((z - z0) / d).norm())
}

/// Samples a closed-form function of `z` on the grid.
pub fn sample_on_grid(
    grid: BoundaryGrid,
    mut f: impl FnMut(Cpx) -> Result<Cpx>,
) -> Result<HardyFunction> {
    let samples = grid.nodes().map(&mut f).collect::<Result<Vec<_>>>()?;
    HardyFunction::from_samples(samples)
}

/// Ordered poles `a_1, …, a_n` in the disc; repeats allowed.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PoleTuple(Vec<DiscPoint>);

impl PoleTuple {
    pub fn new(poles: Vec<DiscPoint>) -> Self {
        Self(poles)
    }

    pub fn from_complex(values: &[Cpx]) -> Result<Self> {
        values
            .iter()
            .map(|&z| DiscPoint::new(z))
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[DiscPoint] {
        &self.0
    }

    pub fn values(&self) -> Vec<Cpx> {
        self.0.iter().map(|p| p.value()).collect()
    }

    pub fn push(&mut self, a: DiscPoint) {
        self.0.push(a);
    }

    /// The tuple with entry `index` moved to the end.
    pub fn rotated_to_end(&self, index: usize) -> Self {
        let mut v = self.0.clone();
        let a = v.remove(index);
        v.push(a);
        Self(v)
    }
}

impl std::ops::Index<usize> for PoleTuple {
    type Output = DiscPoint;
    fn index(&self, i: usize) -> &DiscPoint {
        &self.0[i]
    }
}

impl From<Vec<DiscPoint>> for PoleTuple {
    fn from(v: Vec<DiscPoint>) -> Self {
        Self(v)
    }
}

/// `Σ c_k E_k` over a pole tuple.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlaschkeForm {
    poles: PoleTuple,
    coeffs: Vec<Cpx>,
    #[serde(rename = "grid_size")]
    grid: BoundaryGrid,
}

#[derive(Deserialize)]
struct BlaschkeFormRepr {
    poles: PoleTuple,
    coeffs: Vec<Cpx>,
    grid_size: usize,
}

impl<'de> Deserialize<'de> for BlaschkeForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = BlaschkeFormRepr::deserialize(d)?;
        let grid = BoundaryGrid::new(r.grid_size).map_err(serde::de::Error::custom)?;
        BlaschkeForm::new(r.poles, r.coeffs, grid).map_err(serde::de::Error::custom)
    }
}

impl BlaschkeForm {
    pub fn new(poles: PoleTuple, coeffs: Vec<Cpx>, grid: BoundaryGrid) -> Result<Self> {
        if poles.len() != coeffs.len() {
            return Err(Error::Input(format!(
                "{} poles but {} coefficients",
                poles.len(),
                coeffs.len()
            )));
        }
        for (k, c) in coeffs.iter().enumerate() {
            check_finite(*c, &format!("coefficient {}", k + 1))?;
        }
        Ok(Self {
            poles,
            coeffs,
            grid,
        })
    }

    pub fn poles(&self) -> &PoleTuple {
        &self.poles
    }

    pub fn coeffs(&self) -> &[Cpx] {
        &self.coeffs
    }

    pub fn grid(&self) -> BoundaryGrid {
        self.grid
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True when the last coefficient is nonzero.
    pub fn is_non_degenerate(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.norm() > 0.0)
    }

    /// `Σ |c_k|²`, the energy the form captures.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn eval(&self, z: Cpx) -> Result<Cpx> {
        let mut blaschke = ONE;
        let mut acc = ZERO;
        for (a, c) in self.poles.as_slice().iter().zip(&self.coeffs) {
            acc += c * normalized_szego(*a, z)? * blaschke;
            blaschke *= blaschke_factor(*a, z)?;
        }
        Ok(acc)
    }

    /// The form sampled on its grid (samples-only).
    pub fn to_function(&self) -> Result<HardyFunction> {
        sample_on_grid(self.grid, |z| self.eval(z))
    }
}

/// `f_{a_1..a_k} / B_{a_1..a_k}` carried through the Gram-Schmidt recursion.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedRemainder {
    g: HardyFunction,
    consumed: PoleTuple,
    source_norm: f64,
}

impl ReducedRemainder {
    pub fn new(f: &HardyFunction) -> Self {
        Self {
            g: f.clone(),
            consumed: PoleTuple::default(),
            source_norm: f.norm(),
        }
    }

    pub fn function(&self) -> &HardyFunction {
        &self.g
    }

    pub fn consumed(&self) -> &PoleTuple {
        &self.consumed
    }

    /// Norm of the function the recursion started from.
    pub fn source_norm(&self) -> f64 {
        self.source_norm
    }

    /// `⟨f, E_{a_1..a_k, a}⟩ = √(1−|a|²)·g(a)` for a fresh pole `a`.
    pub fn coefficient_at(&self, a: DiscPoint) -> Cpx {
        self.g.eval_interior(a) * a.weight()
    }
}

/// Synthetic division of `n(z)` by `(z − a)`, lowest degree first. Returns
/// the quotient and the remainder `n(a)`.
fn divide_linear(numerator: &[Cpx], a: Cpx) -> (Vec<Cpx>, Cpx) {
    let d = numerator.len();
    if d == 0 {
        return (Vec::new(), ZERO);
    }
    let mut quotient = vec![ZERO; d - 1];
    let mut carry = ZERO;
    for k in (1..d).rev() {
        carry = numerator[k] + a * carry;
        quotient[k - 1] = carry;
    }
    (quotient, numerator[0] + a * carry)
}

/// One Gram-Schmidt step: returns `⟨f, E_{…,a}⟩` and the next reduced
/// remainder `(g − c·e_a)·(1 − āz)/(z − a)`.
///
/// Polynomial remainders stay polynomial and are divided exactly; sampled
/// remainders are divided node by node on the circle, where `z − a` never
/// vanishes, and must come back analytic to within [`ANALYTICITY_TOL`].
pub fn remainder_step(state: &ReducedRemainder, a: DiscPoint) -> Result<(Cpx, ReducedRemainder)> {
    let coeff = state.coefficient_at(a);
    let av = a.value();
    let scaled = coeff * a.weight();
    let g = &state.g;
    // Roundoff is relative to the source, so tiny remainders get a floor.
    let scale = g.norm().max(LEAK_FLOOR * state.source_norm);

    let next = match g.taylor() {
        Some(t) => {
            // n(z) = g(z)(1 − āz) − c·√(1−|a|²)
            let mut numerator = vec![ZERO; t.len() + 1];
            for (k, c) in t.iter().enumerate() {
                numerator[k] += c;
                numerator[k + 1] -= av.conj() * c;
            }
            numerator[0] -= scaled;
            let (quotient, rem) = divide_linear(&numerator, av);
            if rem.norm() > ANALYTICITY_TOL * scale.max(f64::MIN_POSITIVE) {
                return Err(Error::NumericalDegradation(format!(
                    "division by the factor at {av} left remainder {:.3e}",
                    rem.norm()
                )));
            }
            HardyFunction::from_taylor(&quotient, g.grid_size())?
        }
        None => {
            let samples = g
                .samples()
                .iter()
                .zip(g.grid().nodes())
                .map(|(gz, z)| (gz * (ONE - av.conj() * z) - scaled) / (z - av))
                .collect();
            let next = HardyFunction::from_samples(samples)?;
            let leak = next.negative_band_peak();
            if leak > ANALYTICITY_TOL * scale {
                return Err(Error::NumericalDegradation(format!(
                    "remainder left H² after dividing by the factor at {av}: negative-band peak \
                     {leak:.3e} vs norm {scale:.3e} (grid {} too coarse or pole too close to the circle)",
                    g.grid_size()
                )));
            }
            next
        }
    };

    let mut consumed = state.consumed.clone();
    consumed.push(a);
    Ok((
        coeff,
        ReducedRemainder {
            g: next,
            consumed,
            source_norm: state.source_norm,
        },
    ))
}

/// Runs the recursion over all but the last pole of `poles`, returning the
/// coefficients found so far and the state before the last pole.
pub(crate) fn run_prefix(
    f: &HardyFunction,
    poles: &[DiscPoint],
) -> Result<(Vec<Cpx>, ReducedRemainder)> {
    let mut state = ReducedRemainder::new(f);
    let mut coeffs = Vec::with_capacity(poles.len());
    for &a in poles {
        let (c, next) = remainder_step(&state, a)?;
        coeffs.push(c);
        state = next;
    }
    Ok((coeffs, state))
}

/// Projects `f` onto the T-M system of `poles`.
///
/// The residual is rebuilt on the boundary as
/// `B_{a_1..a_{n-1}}·(g_n − c_n e_{a_n})`, which equals `B_{a_1..a_n}·g_{n+1}`
/// there without a final division.
pub fn decompose(f: &HardyFunction, poles: &PoleTuple) -> Result<(BlaschkeForm, HardyFunction)> {
    let grid = f.grid();
    let Some((&last, head)) = poles.as_slice().split_last() else {
        return Ok((BlaschkeForm::new(PoleTuple::default(), Vec::new(), grid)?, f.clone()));
    };
    let (mut coeffs, state) = run_prefix(f, head)?;
    let c_last = state.coefficient_at(last);
    coeffs.push(c_last);

    let g = state.function();
    let samples = g
        .samples()
        .iter()
        .zip(grid.nodes())
        .map(|(gz, z)| Ok(blaschke_product(head, z)? * (gz - c_last * normalized_szego(last, z)?)))
        .collect::<Result<Vec<_>>>()?;
    let residual = HardyFunction::from_samples(samples)?;
    Ok((BlaschkeForm::new(poles.clone(), coeffs, grid)?, residual))
}

/// Captured energy `Σ |⟨f, E_k⟩|²` without building the residual.
pub fn captured_energy(f: &HardyFunction, poles: &PoleTuple) -> Result<f64> {
    let Some((&last, head)) = poles.as_slice().split_last() else {
        return Ok(0.0);
    };
    let (coeffs, state) = run_prefix(f, head)?;
    Ok(coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>() + state.coefficient_at(last).norm_sqr())
}
