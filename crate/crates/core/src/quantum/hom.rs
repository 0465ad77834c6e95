//! Two-photon interference on a balanced beam splitter.

use num_complex::Complex64;

use super::fock::{binomial, PairState};
use crate::error::{Error, Result};

/// Balanced splitter acting on two input ports (stored as the signal and
/// idler modes of a [`PairState`]): `a† → (c† + d†)/√2`, `b† → (c† − d†)/√2`.
///
/// Photon number is conserved, so the output truncation is `2·n_max`.
pub fn balanced_splitter(state: &PairState) -> PairState {
    let n_max = state.n_max();
    let mut out = PairState::zeros(2 * n_max);
    let fact = |n: usize| (1..=n).fold(1.0, |acc, k| acc * k as f64);
    for ((n, m), c) in state.iter() {
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        // (a†)^n (b†)^m |0⟩ / √(n! m!) expanded binomially in c†, d†.
        let pre = c / (fact(n) * fact(m)).sqrt() / 2f64.sqrt().powi((n + m) as i32);
        for j in 0..=n {
            for k in 0..=m {
                let sign = if (m - k) % 2 == 0 { 1.0 } else { -1.0 };
                let coeff = binomial(n, j) * binomial(m, k) * sign;
                let p = j + k;
                let q = (n - j) + (m - k);
                let v = out.amplitude(p, q) + pre * coeff * (fact(p) * fact(q)).sqrt();
                out.set(p, q, v);
            }
        }
    }
    out
}

/// Probability of one photon in each output port.
pub fn coincidence(output: &PairState) -> f64 {
    output
        .iter()
        .filter(|((p, q), _)| *p > 0 && *q > 0)
        .map(|(_, c)| c.norm_sqr())
        .sum()
}

/// Coincidence probability for two single photons with mode overlap `γ`.
///
/// The second photon is split into a component identical to the first
/// (weight `γ²`) and an orthogonal one. The identical part interferes through
/// the splitter as `|1,1⟩`; the orthogonal part leaves as two independent
/// photons, each taking either port with probability ½. The result is
/// `½(1 − γ²)`.
pub fn hom_bunching(overlap: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&overlap) {
        return Err(Error::InvalidParameter(format!(
            "mode overlap must lie in [0, 1], got {overlap}"
        )));
    }
    let pair = PairState::fock(1, 1, 1)?;
    let indistinguishable = coincidence(&balanced_splitter(&pair));

    // Distinguishable photons split independently, each with port
    // probabilities binomial(1, k)/2.
    let port = |k: usize| binomial(1, k) * 0.5;
    let distinguishable = port(1) * port(0) + port(0) * port(1);

    let w = overlap * overlap;
    Ok(w * indistinguishable + (1.0 - w) * distinguishable)
}

/// `P_c(τ) = ½(1 − V·exp(−(τ/σ)²))` on a grid of delays.
pub fn hom_dip_curve(delays: &[f64], coherence_time: f64, visibility: f64) -> Result<Vec<f64>> {
    if !(coherence_time > 0.0 && coherence_time.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "coherence time must be positive, got {coherence_time}"
        )));
    }
    if !(0.0..=1.0).contains(&visibility) {
        return Err(Error::InvalidParameter(format!(
            "visibility must lie in [0, 1], got {visibility}"
        )));
    }
    Ok(delays
        .iter()
        .map(|&tau| 0.5 * (1.0 - visibility * (-(tau / coherence_time).powi(2)).exp()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_bunches() {
        let out = balanced_splitter(&PairState::fock(1, 1, 1).unwrap());
        assert!(out.amplitude(1, 1).norm() < 1e-15);
        let h = 0.5f64.sqrt();
        assert!((out.amplitude(2, 0).norm() - h).abs() < 1e-15);
        assert!((out.amplitude(0, 2).norm() - h).abs() < 1e-15);
    }

    #[test]
    fn overlap_limits() {
        assert!(hom_bunching(1.0).unwrap().abs() < 1e-15);
        assert!((hom_bunching(0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((hom_bunching(0.6).unwrap() - 0.5 * (1.0 - 0.36)).abs() < 1e-15);
        assert!(hom_bunching(1.2).is_err());
        assert!(hom_bunching(-0.1).is_err());
    }

    #[test]
    fn dip_curve_shape() {
        let p = hom_dip_curve(&[-1e-12, 0.0, 1e-12, 1e-9], 1e-12, 1.0).unwrap();
        assert_eq!(p[1], 0.0);
        assert_eq!(p[0], p[2]);
        assert!((p[3] - 0.5).abs() < 1e-15);
        assert!(hom_dip_curve(&[0.0, 1.0], 1.0, 0.0)
            .unwrap()
            .iter()
            .all(|&v| v == 0.5));
        assert!(hom_dip_curve(&[0.0], 0.0, 1.0).is_err());
        assert!(hom_dip_curve(&[0.0], 1.0, 1.5).is_err());
    }
}
