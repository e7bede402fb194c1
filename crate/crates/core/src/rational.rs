//! Polynomial algebra and the correspondence between Blaschke forms with a
//! pole at the origin and admissible rational pairs `(p, q)`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hardy::{check_finite, dft, BoundaryGrid, Cpx, HardyFunction};
use crate::tm::BlaschkeForm;

const ZERO: Cpx = Cpx { re: 0.0, im: 0.0 };
const ONE: Cpx = Cpx { re: 1.0, im: 0.0 };

/// Relative threshold below which leading coefficients are trimmed.
pub const TRIM_EPS: f64 = 1e-12;
/// Required clearance of a denominator root outside the unit circle.
pub const EXTERIOR_MARGIN: f64 = 1e-9;
/// `min |p(r)|` over denominator roots must exceed this times `‖p‖₁`.
pub const COPRIME_EPS: f64 = 1e-9;

/// Polynomial with complex coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<Cpx>")]
pub struct Polynomial(Vec<Cpx>);

impl From<Vec<Cpx>> for Polynomial {
    fn from(v: Vec<Cpx>) -> Self {
        Self::new(v)
    }
}

impl Polynomial {
    /// Builds a polynomial, trimming leading coefficients whose modulus is at
    /// most `1e-12` times the largest one.
    pub fn new(mut coeffs: Vec<Cpx>) -> Self {
        let max = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        while coeffs
            .last()
            .is_some_and(|c| c.norm() <= TRIM_EPS * max || max == 0.0)
        {
            coeffs.pop();
        }
        Self(coeffs)
    }

    pub fn constant(c: Cpx) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[Cpx] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn eval(&self, z: Cpx) -> Cpx {
        self.0.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    pub fn l1_norm(&self) -> f64 {
        self.0.iter().map(|c| c.norm()).sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self(Vec::new());
        }
        let mut out = vec![ZERO; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.0.len().max(other.0.len());
        Self::new(
            (0..len)
                .map(|k| self.0.get(k).copied().unwrap_or(ZERO) + other.0.get(k).copied().unwrap_or(ZERO))
                .collect(),
        )
    }

    pub fn scale(&self, c: Cpx) -> Self {
        Self::new(self.0.iter().map(|x| x * c).collect())
    }

    /// Roots from the eigenvalues of the companion matrix.
    pub fn roots(&self) -> Result<Vec<Cpx>> {
        let d = self.degree();
        if self.is_zero() {
            return Err(Error::Input("the zero polynomial has no finite root set".into()));
        }
        if d == 0 {
            return Ok(Vec::new());
        }
        let lead = self.0[d];
        let mut companion = DMatrix::<Cpx>::zeros(d, d);
        for i in 1..d {
            companion[(i, i - 1)] = ONE;
        }
        for i in 0..d {
            companion[(i, d - 1)] = -self.0[i] / lead;
        }
        let schur = nalgebra::linalg::Schur::try_new(companion, f64::EPSILON, 10_000)
            .ok_or_else(|| Error::Input("companion eigenvalue iteration did not converge".into()))?;
        let eig = schur
            .eigenvalues()
            .ok_or_else(|| Error::Input("companion Schur form is not triangular".into()))?;
        Ok(eig.iter().copied().collect())
    }
}

/// Candidate rational approximant `p/q` of order `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissiblePair {
    pub p: Polynomial,
    pub q: Polynomial,
    pub n: usize,
    /// Roots of `q` when known in closed form.
    #[serde(skip)]
    pub known_roots: Option<Vec<Cpx>>,
}

impl AdmissiblePair {
    pub fn new(p: Polynomial, q: Polynomial, n: usize) -> Self {
        Self {
            p,
            q,
            n,
            known_roots: None,
        }
    }

    pub fn eval(&self, z: Cpx) -> Cpx {
        self.p.eval(z) / self.q.eval(z)
    }
}

/// Outcome of [`admissible_check`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub degree_p: usize,
    pub degree_q: usize,
    /// Smallest modulus among the roots of `q` (`None` when `q` is constant).
    pub min_root_modulus: Option<f64>,
    /// `min |p(r)| / ‖p‖₁` over the roots `r` of `q`.
    pub coprime_margin: Option<f64>,
    pub violations: Vec<String>,
}

/// Puts a form with a pole at the origin over the common denominator
/// `q = Π (1 − ā_k z)`.
pub fn form_to_rational(form: &BlaschkeForm) -> Result<AdmissiblePair> {
    let poles = form.poles().values();
    let coeffs = form.coeffs();
    if poles.is_empty() {
        return Err(Error::Precondition("empty form".into()));
    }
    if !poles.iter().any(|a| a.norm() == 0.0) {
        return Err(Error::Precondition(
            "form has no pole at the origin; subtract the constant term and prepend a zero pole".into(),
        ));
    }
    if !form.is_non_degenerate() {
        return Err(Error::Precondition("form is degenerate (last coefficient is zero)".into()));
    }
    let n = poles.len() - 1;
    let linear = |c0: Cpx, c1: Cpx| Polynomial::new(vec![c0, c1]);

    let mut p = Polynomial::new(Vec::new());
    for (k, (&ak, &ck)) in poles.iter().zip(coeffs).enumerate() {
        let weight = (1.0 - ak.norm_sqr()).sqrt();
        let mut term = Polynomial::constant(ck * weight);
        for &aj in &poles[..k] {
            term = term.mul(&linear(-aj, ONE));
        }
        for &aj in &poles[k + 1..] {
            term = term.mul(&linear(ONE, -aj.conj()));
        }
        p = p.add(&term);
    }
    let q = poles
        .iter()
        .fold(Polynomial::constant(ONE), |acc, &a| acc.mul(&linear(ONE, -a.conj())));
    let known_roots = poles
        .iter()
        .filter(|a| a.norm() > 0.0)
        .map(|a| ONE / a.conj())
        .collect();
    Ok(AdmissiblePair {
        p,
        q,
        n,
        known_roots: Some(known_roots),
    })
}

/// Checks degree bounds, exterior denominator roots and co-primality.
pub fn admissible_check(pair: &AdmissiblePair) -> Result<AdmissibilityReport> {
    if pair.q.is_zero() {
        return Err(Error::Precondition("denominator is the zero polynomial".into()));
    }
    let mut violations = Vec::new();
    let (dp, dq) = (pair.p.degree(), pair.q.degree());
    if dp > pair.n {
        violations.push(format!("degree: deg p = {dp} exceeds n = {}", pair.n));
    }
    if dq > pair.n {
        violations.push(format!("degree: deg q = {dq} exceeds n = {}", pair.n));
    }

    let roots = match &pair.known_roots {
        Some(r) => r.clone(),
        None => pair.q.roots()?,
    };
    let min_root_modulus = roots.iter().map(|r| r.norm()).reduce(f64::min);
    if let Some(m) = min_root_modulus {
        if m <= 1.0 + EXTERIOR_MARGIN {
            violations.push(format!("exterior: denominator root of modulus {m} is not outside the closed disc"));
        }
    }

    let p_scale = pair.p.l1_norm();
    let coprime_margin = roots
        .iter()
        .map(|&r| {
            if p_scale == 0.0 {
                0.0
            } else {
                pair.p.eval(r).norm() / p_scale
            }
        })
        .reduce(f64::min);
    if let Some(m) = coprime_margin {
        if m <= COPRIME_EPS {
            violations.push(format!("coprime: p nearly vanishes at a root of q (relative {m:e})"));
        }
    }

    Ok(AdmissibilityReport {
        admissible: violations.is_empty(),
        degree_p: dp,
        degree_q: dq,
        min_root_modulus,
        coprime_margin,
        violations,
    })
}

/// Splits off the 0-th Fourier coefficient: `f = c0 + g`, `g(0) = 0`.
pub fn constant_shift(f: &HardyFunction) -> Result<(Cpx, HardyFunction)> {
    let c0 = match f.taylor() {
        Some(t) => t.first().copied().unwrap_or(ZERO),
        None => f.spectrum()[0],
    };
    let constant = HardyFunction::from_taylor(&[c0], f.grid_size())?;
    Ok((c0, f.sub(&constant)?))
}

/// Samples `p/q` on the grid and reads its Taylor coefficients off the
/// transform. The returned function keeps the first `M/2` coefficients.
pub fn rational_to_hardy(pair: &AdmissiblePair, grid_size: usize) -> Result<HardyFunction> {
    let grid = BoundaryGrid::new(grid_size)?;
    let roots = match &pair.known_roots {
        Some(r) => r.clone(),
        None => pair.q.roots()?,
    };
    if pair.q.is_zero() {
        return Err(Error::Precondition("denominator is the zero polynomial".into()));
    }
    if let Some(r) = roots.iter().find(|r| r.norm() <= 1.0 + EXTERIOR_MARGIN) {
        return Err(Error::Precondition(format!(
            "denominator vanishes at {r}, inside or on the unit circle"
        )));
    }
    let samples: Vec<Cpx> = grid.nodes().map(|z| pair.eval(z)).collect();
    for s in &samples {
        check_finite(*s, "p/q sample")?;
    }
    let spectrum = dft(&samples)?;
    let scale = (samples.iter().map(|s| s.norm_sqr()).sum::<f64>() / grid_size as f64).sqrt();
    let leak = spectrum[grid_size / 2 + 1..].iter().map(|x| x.norm()).fold(0.0, f64::max);
    if leak > 1e-10 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NumericalDegradation(format!(
            "p/q is not resolved on a grid of {grid_size} (negative-band peak {leak:.3e})"
        )));
    }
    HardyFunction::from_taylor(&spectrum[..grid_size / 2], grid_size)
}
