//! Functions on the unit disc held by their Taylor coefficients and their
//! values on a uniform boundary grid.
//!
//! Transform convention used throughout the crate:
//!
//! ```text
//! dft(x)[k]  = (1/M) Σ_j x_j e^{-2πi jk/M}
//! idft(X)[j] =       Σ_k X_k e^{+2πi jk/M}
//! ```
//!
//! so that the spectrum of the boundary samples of `Σ c_k z^k` (degree < M)
//! is exactly `c_k`, and `idft ∘ dft` is the identity.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Complex scalar.
pub type Cpx = Complex64;

/// Largest admissible modulus for a [`DiscPoint`].
pub const DISC_SAFETY_RADIUS: f64 = 1.0 - 1e-9;

/// Default boundary grid size.
pub const DEFAULT_GRID_SIZE: usize = 4096;

/// Relative tolerance tying the two representations of a [`HardyFunction`].
pub const REPRESENTATION_EPS: f64 = 1e-12;

pub(crate) fn check_finite(z: Cpx, what: &str) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::Input(format!("{what} is not finite: {z}")))
    }
}

/// A point of the open unit disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DiscPoint(Cpx);

impl DiscPoint {
    pub fn new(value: Cpx) -> Result<Self> {
        check_finite(value, "disc point")?;
        if value.norm() > DISC_SAFETY_RADIUS {
            return Err(Error::Input(format!(
                "point {value} is not inside the unit disc (|a| = {} > {DISC_SAFETY_RADIUS})",
                value.norm()
            )));
        }
        Ok(Self(value))
    }

    pub fn from_re_im(re: f64, im: f64) -> Result<Self> {
        Self::new(Cpx::new(re, im))
    }

    pub fn from_polar(r: f64, theta: f64) -> Result<Self> {
        Self::new(Cpx::from_polar(r, theta))
    }

    /// Radially projects `value` onto the closed disc of radius `r_max`.
    pub fn clamped(value: Cpx, r_max: f64) -> Result<Self> {
        check_finite(value, "disc point")?;
        let r = value.norm();
        let limit = r_max.min(DISC_SAFETY_RADIUS);
        if r > limit {
            Self::new(value * (limit / r))
        } else {
            Self::new(value)
        }
    }

    pub fn origin() -> Self {
        Self(Cpx::new(0.0, 0.0))
    }

    #[inline]
    pub fn value(self) -> Cpx {
        self.0
    }

    #[inline]
    pub fn modulus(self) -> f64 {
        self.0.norm()
    }

    /// `√(1 − |a|²)`, the normalizing factor of the Szegő kernel at this point.
    #[inline]
    pub fn weight(self) -> f64 {
        (1.0 - self.0.norm_sqr()).max(0.0).sqrt()
    }
}

impl<'de> Deserialize<'de> for DiscPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let z = Cpx::deserialize(d)?;
        DiscPoint::new(z).map_err(serde::de::Error::custom)
    }
}

/// Uniform grid `z_j = exp(2πi j/M)` on the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BoundaryGrid(usize);

impl BoundaryGrid {
    pub fn new(size: usize) -> Result<Self> {
        if size < 2 || !size.is_power_of_two() {
            return Err(Error::Representation(format!(
                "grid size {size} must be a power of two no smaller than 2"
            )));
        }
        Ok(Self(size))
    }

    #[inline]
    pub fn size(self) -> usize {
        self.0
    }

    #[inline]
    pub fn node(self, j: usize) -> Cpx {
        Cpx::from_polar(1.0, 2.0 * PI * j as f64 / self.0 as f64)
    }

    pub fn nodes(self) -> impl Iterator<Item = Cpx> {
        (0..self.0).map(move |j| self.node(j))
    }
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn transform_in_place(buf: &mut [Cpx], direction: FftDirection) {
    if buf.len() <= 1 {
        return;
    }
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft(buf.len(), direction));
    fft.process(buf);
}

/// Unnormalized inverse transform of arbitrary length (used by the
/// candidate-circle scans, whose angular counts need not be powers of two).
pub(crate) fn synthesize(coeffs: &[Cpx]) -> Vec<Cpx> {
    let mut buf = coeffs.to_vec();
    transform_in_place(&mut buf, FftDirection::Inverse);
    buf
}

fn check_transform_len(n: usize) -> Result<()> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::Input(format!("transform length {n} is not a power of two")));
    }
    Ok(())
}

/// Forward transform, scaled by `1/M`.
pub fn dft(samples: &[Cpx]) -> Result<Vec<Cpx>> {
    check_transform_len(samples.len())?;
    let mut buf = samples.to_vec();
    transform_in_place(&mut buf, FftDirection::Forward);
    let scale = 1.0 / samples.len() as f64;
    buf.iter_mut().for_each(|x| *x *= scale);
    Ok(buf)
}

/// Inverse transform (unscaled), the exact inverse of [`dft`].
pub fn idft(spectrum: &[Cpx]) -> Result<Vec<Cpx>> {
    check_transform_len(spectrum.len())?;
    Ok(synthesize(spectrum))
}

fn horner(coeffs: &[Cpx], z: Cpx) -> Cpx {
    coeffs.iter().rev().fold(Cpx::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// A function in H²(D), held both as Taylor coefficients (when known) and as
/// samples on a [`BoundaryGrid`].
///
/// The discrete spectrum of the samples is kept alongside; interior values are
/// read off it.
#[derive(Debug, Clone, PartialEq)]
pub struct HardyFunction {
    grid: BoundaryGrid,
    taylor: Option<Vec<Cpx>>,
    samples: Vec<Cpx>,
    spectrum: Vec<Cpx>,
}

impl HardyFunction {
    pub fn from_taylor(coeffs: &[Cpx], grid_size: usize) -> Result<Self> {
        let grid = BoundaryGrid::new(grid_size)?;
        if grid_size < 2 * coeffs.len() {
            return Err(Error::Representation(format!(
                "grid size {grid_size} is too small for {} Taylor coefficients (need at least {})",
                coeffs.len(),
                2 * coeffs.len()
            )));
        }
        for (k, c) in coeffs.iter().enumerate() {
            check_finite(*c, &format!("Taylor coefficient {k}"))?;
        }
        let mut spectrum = vec![Cpx::new(0.0, 0.0); grid_size];
        spectrum[..coeffs.len()].copy_from_slice(coeffs);
        let samples = idft(&spectrum)?;
        Ok(Self {
            grid,
            taylor: Some(coeffs.to_vec()),
            samples,
            spectrum,
        })
    }

    /// Builds a samples-only function. The samples are taken as given; use
    /// [`HardyFunction::negative_band_peak`] to judge whether they are analytic.
    pub fn from_samples(samples: Vec<Cpx>) -> Result<Self> {
        let grid = BoundaryGrid::new(samples.len())?;
        for (j, s) in samples.iter().enumerate() {
            check_finite(*s, &format!("sample {j}"))?;
        }
        let spectrum = dft(&samples)?;
        Ok(Self {
            grid,
            taylor: None,
            samples,
            spectrum,
        })
    }

    /// Lifts a real boundary signal into H²: negative-frequency bins are
    /// zeroed, the zero bin is halved, and the Nyquist bin is dropped. The
    /// result `f` satisfies `2·Re f = signal` up to the Nyquist component.
    pub fn from_real_signal(signal: &[f64]) -> Result<Self> {
        let m = signal.len();
        BoundaryGrid::new(m)?;
        let samples: Vec<Cpx> = signal.iter().map(|&x| Cpx::new(x, 0.0)).collect();
        let spectrum = dft(&samples)?;
        let mut taylor = spectrum[..m / 2].to_vec();
        taylor[0] *= 0.5;
        Self::from_taylor(&taylor, m)
    }

    pub fn zero(grid_size: usize) -> Result<Self> {
        Self::from_taylor(&[], grid_size)
    }

    #[inline]
    pub fn grid(&self) -> BoundaryGrid {
        self.grid
    }

    #[inline]
    pub fn grid_size(&self) -> usize {
        self.grid.size()
    }

    pub fn taylor(&self) -> Option<&[Cpx]> {
        self.taylor.as_deref()
    }

    pub fn samples(&self) -> &[Cpx] {
        &self.samples
    }

    pub fn spectrum(&self) -> &[Cpx] {
        &self.spectrum
    }

    /// Taylor coefficients if present, otherwise the non-negative half of the
    /// discrete spectrum.
    pub fn coefficients(&self) -> Vec<Cpx> {
        match &self.taylor {
            Some(t) => t.clone(),
            None => self.spectrum[..self.grid.size() / 2].to_vec(),
        }
    }

    fn same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::Contract(format!(
                "grid mismatch: {} vs {}",
                self.grid.size(),
                other.grid.size()
            )));
        }
        Ok(())
    }

    /// Trapezoid-rule inner product `(1/M) Σ_j f(z_j)·conj(g(z_j))`.
    pub fn inner_product(&self, other: &Self) -> Result<Cpx> {
        self.same_grid(other)?;
        let sum: Cpx = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(f, g)| f * g.conj())
            .sum();
        Ok(sum / self.grid.size() as f64)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_sqr()).sum::<f64>() / self.grid.size() as f64
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Largest boundary modulus over the grid.
    pub fn grid_sup(&self) -> f64 {
        self.samples.iter().map(|s| s.norm()).fold(0.0, f64::max)
    }

    /// Value at an interior point via the discrete Cauchy sum
    /// `(1/M) Σ_j f(z_j)·(1 − (a z̄_j)^M)/(1 − a z̄_j)`, evaluated as a
    /// Horner sum over the spectrum. Exact for polynomials of degree < M.
    pub fn eval_interior(&self, a: DiscPoint) -> Cpx {
        self.eval_unchecked(a.value())
    }

    pub(crate) fn eval_unchecked(&self, z: Cpx) -> Cpx {
        match &self.taylor {
            Some(t) => horner(t, z),
            None => horner(&self.spectrum, z),
        }
    }

    /// Values on the circle of radius `r` at the angles `2πq/count`,
    /// `q = 0..count`, in one folded transform.
    pub(crate) fn eval_on_circle(&self, r: f64, count: usize) -> Vec<Cpx> {
        let coeffs: &[Cpx] = self.taylor.as_deref().unwrap_or(&self.spectrum);
        let mut folded = vec![Cpx::new(0.0, 0.0); count];
        let mut power = 1.0;
        for (m, c) in coeffs.iter().enumerate() {
            folded[m % count] += c * power;
            power *= r;
            if power == 0.0 {
                break;
            }
        }
        synthesize(&folded)
    }

    /// Peak modulus of the spectrum bins strictly above `M/2`, i.e. the
    /// negative frequencies. Zero for an exactly analytic band-limited function.
    pub fn negative_band_peak(&self) -> f64 {
        let m = self.grid.size();
        self.spectrum[m / 2 + 1..]
            .iter()
            .map(|x| x.norm())
            .fold(0.0, f64::max)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_grid(other)?;
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a - b)
            .collect();
        let spectrum = self
            .spectrum
            .iter()
            .zip(&other.spectrum)
            .map(|(a, b)| a - b)
            .collect();
        let taylor = match (&self.taylor, &other.taylor) {
            (Some(a), Some(b)) => {
                let len = a.len().max(b.len());
                let zero = Cpx::new(0.0, 0.0);
                Some(
                    (0..len)
                        .map(|k| a.get(k).copied().unwrap_or(zero) - b.get(k).copied().unwrap_or(zero))
                        .collect(),
                )
            }
            _ => None,
        };
        Ok(Self {
            grid: self.grid,
            taylor,
            samples,
            spectrum,
        })
    }

    pub fn scale(&self, c: Cpx) -> Self {
        Self {
            grid: self.grid,
            taylor: self.taylor.as_ref().map(|t| t.iter().map(|x| x * c).collect()),
            samples: self.samples.iter().map(|x| x * c).collect(),
            spectrum: self.spectrum.iter().map(|x| x * c).collect(),
        }
    }

    /// Drops the Taylor representation, keeping only samples.
    pub fn into_samples_only(mut self) -> Self {
        self.taylor = None;
        self
    }
}

#[derive(Serialize, Deserialize)]
struct HardyFunctionRepr {
    taylor: Vec<Cpx>,
    grid_size: usize,
}

impl Serialize for HardyFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HardyFunctionRepr {
            taylor: self.coefficients(),
            grid_size: self.grid.size(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HardyFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = HardyFunctionRepr::deserialize(d)?;
        HardyFunction::from_taylor(&repr.taylor, repr.grid_size).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Cpx {
        Cpx::new(re, im)
    }

    fn close(a: Cpx, b: Cpx, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn identity_samples_are_roots_of_unity() {
        let f = HardyFunction::from_taylor(&[c(0.0, 0.0), c(1.0, 0.0)], 8).unwrap();
        for (j, s) in f.samples().iter().enumerate() {
            let root = Cpx::from_polar(1.0, 2.0 * PI * j as f64 / 8.0);
            assert!(close(*s, root, 1e-15), "sample {j}: {s} vs {root}");
        }
    }

    #[test]
    fn constant_samples() {
        let f = HardyFunction::from_taylor(&[c(1.0, 0.0)], 8).unwrap();
        assert!(f.samples().iter().all(|s| close(*s, c(1.0, 0.0), 1e-15)));
    }

    #[test]
    fn one_plus_z_at_one() {
        let f = HardyFunction::from_taylor(&[c(1.0, 0.0), c(1.0, 0.0)], 16).unwrap();
        assert!(close(f.samples()[0], c(2.0, 0.0), 1e-15));
    }

    #[test]
    fn from_taylor_rejects_small_or_odd_grids() {
        let coeffs = vec![c(1.0, 0.0); 5];
        assert!(matches!(
            HardyFunction::from_taylor(&coeffs, 8),
            Err(Error::Representation(_))
        ));
        assert!(matches!(
            HardyFunction::from_taylor(&[c(1.0, 0.0)], 12),
            Err(Error::Representation(_))
        ));
        assert!(matches!(
            HardyFunction::from_taylor(&[c(f64::NAN, 0.0)], 8),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn monomial_inner_products() {
        let one = HardyFunction::from_taylor(&[c(1.0, 0.0)], 16).unwrap();
        let z = HardyFunction::from_taylor(&[c(0.0, 0.0), c(1.0, 0.0)], 16).unwrap();
        let one_plus_z = HardyFunction::from_taylor(&[c(1.0, 0.0), c(1.0, 0.0)], 16).unwrap();
        assert!(close(z.inner_product(&z).unwrap(), c(1.0, 0.0), 1e-15));
        assert!(close(one.inner_product(&z).unwrap(), c(0.0, 0.0), 1e-15));
        assert!(close(one_plus_z.inner_product(&one_plus_z).unwrap(), c(2.0, 0.0), 1e-14));
    }

    #[test]
    fn discrete_monomials_are_exactly_orthonormal() {
        let m = 32;
        let mono = |k: usize| {
            let mut t = vec![c(0.0, 0.0); k + 1];
            t[k] = c(1.0, 0.0);
            HardyFunction::from_taylor(&t, m).unwrap()
        };
        for k in 0..m / 2 {
            for l in 0..m / 2 {
                let ip = mono(k).inner_product(&mono(l)).unwrap();
                let expect = if k == l { 1.0 } else { 0.0 };
                assert!(close(ip, c(expect, 0.0), 1e-14), "<z^{k}, z^{l}> = {ip}");
            }
        }
    }

    #[test]
    fn grid_mismatch_is_a_contract_error() {
        let a = HardyFunction::from_taylor(&[c(1.0, 0.0)], 8).unwrap();
        let b = HardyFunction::from_taylor(&[c(1.0, 0.0)], 16).unwrap();
        assert!(matches!(a.inner_product(&b), Err(Error::Contract(_))));
        assert!(matches!(a.sub(&b), Err(Error::Contract(_))));
    }

    #[test]
    fn norms() {
        let z = HardyFunction::from_taylor(&[c(0.0, 0.0), c(1.0, 0.0)], 8).unwrap();
        let one_plus_z = HardyFunction::from_taylor(&[c(1.0, 0.0), c(1.0, 0.0)], 8).unwrap();
        let zero = HardyFunction::zero(8).unwrap();
        assert!((z.norm() - 1.0).abs() < 1e-15);
        assert!((one_plus_z.norm() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(zero.norm(), 0.0);
    }

    #[test]
    fn interior_evaluation() {
        let z = HardyFunction::from_taylor(&[c(0.0, 0.0), c(1.0, 0.0)], 8).unwrap();
        let a = DiscPoint::from_re_im(0.5, 0.0).unwrap();
        assert!(close(z.eval_interior(a), c(0.5, 0.0), 1e-15));

        let one = HardyFunction::from_taylor(&[c(1.0, 0.0)], 8).unwrap();
        let b = DiscPoint::from_re_im(-0.3, 0.77).unwrap();
        assert!(close(one.eval_interior(b), c(1.0, 0.0), 1e-15));

        let f = HardyFunction::from_taylor(&[c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], 16).unwrap();
        let p = DiscPoint::from_re_im(0.0, 0.3).unwrap();
        assert!(close(f.eval_interior(p), c(0.91, 0.0), 1e-15));
    }

    #[test]
    fn samples_only_evaluation_matches_plain_cauchy_sum() {
        // Oracle: the untruncated discrete Cauchy sum, which differs from the
        // spectral evaluation only by a factor 1/(1 − a^M).
        let f = HardyFunction::from_taylor(
            &[c(0.3, 0.1), c(-1.0, 0.5), c(0.25, 0.0), c(0.0, -0.7)],
            64,
        )
        .unwrap();
        let g = f.clone().into_samples_only();
        let a = DiscPoint::from_re_im(0.6, -0.5).unwrap();
        let m = g.grid_size();
        let cauchy: Cpx = g
            .samples()
            .iter()
            .zip(g.grid().nodes())
            .map(|(s, z)| s / (Cpx::new(1.0, 0.0) - a.value() * z.conj()))
            .sum::<Cpx>()
            / m as f64;
        let correction = Cpx::new(1.0, 0.0) - a.value().powu(m as u32);
        assert!(close(g.eval_interior(a), cauchy * correction, 1e-13));
        assert!(close(g.eval_interior(a), f.eval_interior(a), 1e-13));
    }

    #[test]
    fn dft_conventions() {
        let mut impulse = vec![c(0.0, 0.0); 8];
        impulse[0] = c(1.0, 0.0);
        let spec = dft(&impulse).unwrap();
        assert!(spec.iter().all(|x| close(*x, c(1.0 / 8.0, 0.0), 1e-16)));

        let z: Vec<Cpx> = BoundaryGrid::new(8).unwrap().nodes().collect();
        let spec = dft(&z).unwrap();
        for (k, x) in spec.iter().enumerate() {
            let expect = if k == 1 { 1.0 } else { 0.0 };
            assert!(close(*x, c(expect, 0.0), 1e-15), "bin {k}: {x}");
        }

        assert!(matches!(dft(&[c(1.0, 0.0); 6]), Err(Error::Input(_))));
        assert!(matches!(idft(&[]), Err(Error::Input(_))));
    }

    #[test]
    fn sub_and_scale() {
        let f = HardyFunction::from_taylor(&[c(1.0, 0.0), c(1.0, 0.0)], 8).unwrap();
        let one = HardyFunction::from_taylor(&[c(1.0, 0.0)], 8).unwrap();
        assert_eq!(f.sub(&f).unwrap().norm(), 0.0);
        assert_eq!(f.scale(c(0.0, 0.0)).norm(), 0.0);
        let z = f.sub(&one).unwrap();
        assert_eq!(z.taylor().unwrap(), &[c(0.0, 0.0), c(1.0, 0.0)]);
        let g = f.clone().into_samples_only().sub(&one).unwrap();
        assert!(g.taylor().is_none());
        assert!(close(g.coefficients()[1], c(1.0, 0.0), 1e-15));
    }

    #[test]
    fn real_signal_lift() {
        // x(θ) = 1 + 2 cos θ = 2·Re(0.5 + z)
        let m = 16;
        let signal: Vec<f64> = (0..m)
            .map(|j| 1.0 + 2.0 * (2.0 * PI * j as f64 / m as f64).cos())
            .collect();
        let f = HardyFunction::from_real_signal(&signal).unwrap();
        let t = f.taylor().unwrap();
        assert!(close(t[0], c(0.5, 0.0), 1e-14));
        assert!(close(t[1], c(1.0, 0.0), 1e-14));
        assert!(t[2..].iter().all(|x| x.norm() < 1e-14));
        assert_eq!(f.negative_band_peak(), 0.0);
    }

    #[test]
    fn disc_point_margin() {
        assert!(DiscPoint::from_re_im(0.999, 0.0).is_ok());
        assert!(DiscPoint::from_re_im(1.0, 0.0).is_err());
        assert!(DiscPoint::from_re_im(1.0 - 1e-10, 0.0).is_err());
        assert!(DiscPoint::from_re_im(f64::INFINITY, 0.0).is_err());
        let p = DiscPoint::clamped(c(3.0, 4.0), 0.5).unwrap();
        assert!((p.modulus() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn json_schema() {
        let f = HardyFunction::from_taylor(&[c(1.0, 0.0), c(0.0, 2.0)], 8).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"taylor":[[1.0,0.0],[0.0,2.0]],"grid_size":8}"#);
        let back: HardyFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<HardyFunction>(r#"{"taylor":[[1,0]],"grid_size":6}"#).is_err());
    }
}
