//! Two-photon polarization states and analyzer correlations.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Amplitudes on `|HH⟩, |HV⟩, |VH⟩, |VV⟩`, signal polarization first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationState {
    amplitudes: [Complex64; 4],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyzerSetting {
    /// Signal analyzer angle from H, rad.
    pub a: f64,
    /// Idler analyzer angle from H, rad.
    pub b: f64,
}

impl PolarizationState {
    /// Normalizes the given amplitudes.
    pub fn new(amplitudes: [Complex64; 4]) -> Result<Self> {
        let norm = amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidParameter(
                "polarization state has zero norm".into(),
            ));
        }
        Ok(Self {
            amplitudes: amplitudes.map(|c| c / norm),
        })
    }

    /// Product state with each photon linearly polarized at the given angle.
    pub fn product(signal: f64, idler: f64) -> Self {
        let (ss, cs) = signal.sin_cos();
        let (si, ci) = idler.sin_cos();
        let c = |v: f64| Complex64::new(v, 0.0);
        Self {
            amplitudes: [c(cs * ci), c(cs * si), c(ss * ci), c(ss * si)],
        }
    }

    pub fn amplitudes(&self) -> [Complex64; 4] {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// `(|H_i V_s⟩ + e^{iφ}|V_i H_s⟩)/√2`.
pub fn bell_state(phi: f64) -> PolarizationState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let zero = Complex64::new(0.0, 0.0);
    PolarizationState {
        amplitudes: [
            zero,
            Complex64::from_polar(h, phi),
            Complex64::new(h, 0.0),
            zero,
        ],
    }
}

/// Joint probability that both photons pass linear analyzers at `a`
/// (signal) and `b` (idler).
pub fn coincidence_probability(state: &PolarizationState, setting: AnalyzerSetting) -> f64 {
    let (sa, ca) = setting.a.sin_cos();
    let (sb, cb) = setting.b.sin_cos();
    let [hh, hv, vh, vv] = state.amplitudes;
    (hh * (ca * cb) + hv * (ca * sb) + vh * (sa * cb) + vv * (sa * sb)).norm_sqr()
}

/// Correlation `E(a, b)` from the four analyzer/orthogonal-analyzer outcomes.
pub fn correlation(state: &PolarizationState, a: f64, b: f64) -> f64 {
    let p = |a, b| coincidence_probability(state, AnalyzerSetting { a, b });
    let (a_perp, b_perp) = (a + FRAC_PI_2, b + FRAC_PI_2);
    let same = p(a, b) + p(a_perp, b_perp);
    let diff = p(a, b_perp) + p(a_perp, b);
    (same - diff) / (same + diff)
}

/// CHSH combination `|E(a,b) − E(a,b′) + E(a′,b) + E(a′,b′)|`.
pub fn chsh_s(state: &PolarizationState, a: f64, a_prime: f64, b: f64, b_prime: f64) -> f64 {
    let e = |x, y| correlation(state, x, y);
    (e(a, b) - e(a, b_prime) + e(a_prime, b) + e(a_prime, b_prime)).abs()
}

/// Coincidence fringe over idler analyzer angles with the signal analyzer fixed.
pub fn fringe(state: &PolarizationState, a: f64, b_grid: &[f64]) -> Vec<f64> {
    b_grid
        .iter()
        .map(|&b| coincidence_probability(state, AnalyzerSetting { a, b }))
        .collect()
}

/// `(P_max − P_min)/(P_max + P_min)` of a sampled fringe.
pub fn fringe_visibility(samples: &[f64]) -> Result<f64> {
    let max = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = samples.iter().copied().fold(f64::INFINITY, f64::min);
    if samples.is_empty() || (max + min).is_nan() || max + min <= 0.0 {
        return Err(Error::Degenerate("fringe has zero total contrast".into()));
    }
    Ok(((max - min) / (max + min)).clamp(0.0, 1.0))
}

/// Visibility of the fringe over `b_grid`. The grid should span at least
/// one fringe period (π/2 in analyzer angle).
pub fn visibility(state: &PolarizationState, a: f64, b_grid: &[f64]) -> Result<f64> {
    fringe_visibility(&fringe(state, a, b_grid))
}
