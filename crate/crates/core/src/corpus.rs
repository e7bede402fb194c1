//! Seeded generators and the built-in function corpus shared by the property
//! suites, the CLI builtins and the tests.

use std::f64::consts::PI;

use rand::Rng;

use crate::error::Result;
use crate::hardy::{BoundaryGrid, Cpx, DiscPoint, HardyFunction};
use crate::tm::{normalized_szego, pseudo_distance, sample_on_grid, BlaschkeForm, PoleTuple};

/// Uniform point in the disc of radius `r`.
pub fn random_point<R: Rng + ?Sized>(rng: &mut R, r: f64) -> Cpx {
    let rho = r * rng.gen::<f64>().sqrt();
    Cpx::from_polar(rho, 2.0 * PI * rng.gen::<f64>())
}

pub fn random_disc_point<R: Rng + ?Sized>(rng: &mut R, r: f64) -> DiscPoint {
    DiscPoint::clamped(random_point(rng, r), r).expect("radius below the disc safety margin")
}

pub fn random_poles<R: Rng + ?Sized>(rng: &mut R, n: usize, r: f64) -> PoleTuple {
    PoleTuple::new((0..n).map(|_| random_disc_point(rng, r)).collect())
}

/// Coefficients with real and imaginary parts uniform in `[-1, 1]`.
pub fn random_coeffs<R: Rng + ?Sized>(rng: &mut R, count: usize) -> Vec<Cpx> {
    (0..count)
        .map(|_| Cpx::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
        .collect()
}

pub fn random_polynomial<R: Rng + ?Sized>(rng: &mut R, degree: usize, grid_size: usize) -> HardyFunction {
    HardyFunction::from_taylor(&random_coeffs(rng, degree + 1), grid_size)
        .expect("grid large enough for the requested degree")
}

/// A non-degenerate form with `n` poles in `|a| ≤ r_max`, pairwise
/// pseudohyperbolic separation at least `min_sep`, and coefficient moduli in
/// `[0.5, 1.5]`.
pub fn planted_form<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    r_max: f64,
    min_sep: f64,
    grid: BoundaryGrid,
) -> Result<BlaschkeForm> {
    let mut poles: Vec<DiscPoint> = Vec::with_capacity(n);
    while poles.len() < n {
        let cand = random_disc_point(rng, r_max);
        let separated = poles
            .iter()
            .all(|q| pseudo_distance(q.value(), cand.value()).is_ok_and(|d| d >= min_sep));
        if separated {
            poles.push(cand);
        }
    }
    let coeffs = (0..n)
        .map(|_| Cpx::from_polar(rng.gen_range(0.5..=1.5), 2.0 * PI * rng.gen::<f64>()))
        .collect();
    BlaschkeForm::new(PoleTuple::new(poles), coeffs, grid)
}

pub fn monomial(k: usize, grid_size: usize) -> Result<HardyFunction> {
    let mut t = vec![Cpx::new(0.0, 0.0); k + 1];
    t[k] = Cpx::new(1.0, 0.0);
    HardyFunction::from_taylor(&t, grid_size)
}

pub fn constant(c: Cpx, grid_size: usize) -> Result<HardyFunction> {
    HardyFunction::from_taylor(&[c], grid_size)
}

/// The unit-norm Szegő kernel `e_b`, sampled.
pub fn szego_function(b: DiscPoint, grid_size: usize) -> Result<HardyFunction> {
    sample_on_grid(BoundaryGrid::new(grid_size)?, |z| normalized_szego(b, z))
}

/// A named corpus member.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub function: HardyFunction,
    /// Constants and monomials: inputs with closed-form decay profiles.
    pub elementary: bool,
}

/// Constants, monomials up to degree 8, seeded random polynomials, planted
/// Blaschke forms and normalized Szegő kernels.
pub fn standard_corpus<R: Rng + ?Sized>(rng: &mut R, grid_size: usize) -> Result<Vec<CorpusEntry>> {
    let grid = BoundaryGrid::new(grid_size)?;
    let mut out = Vec::new();
    let mut push = |name: String, function: HardyFunction, elementary: bool| {
        out.push(CorpusEntry {
            name,
            function,
            elementary,
        })
    };
    push("const:1".into(), constant(Cpx::new(1.0, 0.0), grid_size)?, true);
    push("const:0.5+0.5i".into(), constant(Cpx::new(0.5, 0.5), grid_size)?, true);
    for k in 1..=8 {
        push(format!("mono:z^{k}"), monomial(k, grid_size)?, true);
    }
    for (i, degree) in [3usize, 5, 8].into_iter().enumerate() {
        push(format!("poly:random-{i}-deg{degree}"), random_polynomial(rng, degree, grid_size), false);
    }
    for n in 1..=3 {
        let form = planted_form(rng, n, 0.8, 0.2, grid)?;
        push(format!("form:planted-{n}"), form.to_function()?, false);
    }
    for b in [Cpx::new(0.4, 0.2), Cpx::new(-0.7, 0.0), Cpx::new(0.0, 0.85)] {
        push(format!("szego:{b}"), szego_function(DiscPoint::new(b)?, grid_size)?, false);
    }
    Ok(out)
}
