//! Classical three-wave mixing in the undepleted-pump regime.
//!
//! SI units throughout: metres, rad/s, V/m. The effective susceptibility is
//! `χ_eff = 2 d_eff`.

use num_complex::Complex64;

use crate::crystal::{Wavelength, SPEED_OF_LIGHT};
use crate::error::{Error, Result};

/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;

/// `sin x / x`, with a series branch near zero.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// `d_eff = (d11 sin 3φ + d22 cos 3φ) cos 2θ` for type-II interaction in BBO.
pub fn d_eff_bbo_type2(theta: f64, phi: f64, d11: f64, d22: f64) -> f64 {
    (d11 * (3.0 * phi).sin() + d22 * (3.0 * phi).cos()) * (2.0 * theta).cos()
}

/// A classical field envelope `A` of a monochromatic wave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldAmplitude {
    pub a: Complex64,
    pub wavelength: Wavelength,
    pub n: f64,
}

impl FieldAmplitude {
    /// `I = 2 n ε₀ c |A|²`, W/m².
    pub fn intensity(&self) -> f64 {
        intensity(self.n, self.a)
    }

    pub fn omega(&self) -> f64 {
        self.wavelength.angular_frequency()
    }
}

pub fn intensity(n: f64, a: Complex64) -> f64 {
    2.0 * n * EPSILON_0 * SPEED_OF_LIGHT * a.norm_sqr()
}

/// Inputs of the second-harmonic / sum-frequency intensity law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShgParams {
    pub i1: f64,
    pub i2: f64,
    pub omega3: f64,
    pub n1: f64,
    pub n2: f64,
    pub n3: f64,
    pub d_eff: f64,
    pub length_m: f64,
    pub delta_k: f64,
}

impl ShgParams {
    /// Generated intensity at perfect phase matching.
    pub fn peak_intensity(&self) -> f64 {
        let c = SPEED_OF_LIGHT;
        8.0 * self.d_eff.powi(2) * self.omega3.powi(2) * self.i1 * self.i2
            / (self.n1 * self.n2 * self.n3 * EPSILON_0 * c * c * c)
            * self.length_m.powi(2)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.i1 >= 0.0 && self.i2 >= 0.0) {
            return Err(Error::InvalidParameter(
                "intensities must be non-negative".into(),
            ));
        }
        if self.length_m.is_nan() || self.length_m < 0.0 {
            return Err(Error::InvalidParameter(
                "length must be non-negative".into(),
            ));
        }
        let all = [
            self.i1,
            self.i2,
            self.omega3,
            self.n1,
            self.n2,
            self.n3,
            self.d_eff,
            self.length_m,
            self.delta_k,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("SHG inputs must be finite".into()));
        }
        if !(self.n1 > 0.0 && self.n2 > 0.0 && self.n3 > 0.0) {
            return Err(Error::InvalidParameter("indices must be positive".into()));
        }
        Ok(())
    }
}

/// `I3 = I3_max · sinc²(ΔkL/2)`.
pub fn shg_intensity(p: &ShgParams) -> f64 {
    p.peak_intensity() * sinc(0.5 * p.delta_k * p.length_m).powi(2)
}

/// Signal (1) and idler (2) waves coupled through a constant pump (3).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeWaveMixing {
    pub omega1: f64,
    pub omega2: f64,
    pub n1: f64,
    pub n2: f64,
    /// m/V
    pub d_eff: f64,
    /// rad/m
    pub delta_k: f64,
}

impl ThreeWaveMixing {
    pub fn chi_eff(&self) -> f64 {
        2.0 * self.d_eff
    }

    /// Small-signal gain rate `α = χ|A3|/c · √(ω1ω2 / n1n2)`, 1/m.
    pub fn gain_rate(&self, a3: Complex64) -> f64 {
        self.chi_eff().abs() * a3.norm() / SPEED_OF_LIGHT
            * (self.omega1 * self.omega2 / (self.n1 * self.n2)).sqrt()
    }

    fn derivative(
        &self,
        z: f64,
        a3: Complex64,
        a1: Complex64,
        a2: Complex64,
    ) -> (Complex64, Complex64) {
        let c = SPEED_OF_LIGHT;
        let phase = Complex64::from_polar(1.0, self.delta_k * z);
        let drive = Complex64::i() * self.chi_eff() * a3 * phase;
        (
            drive * (self.omega1 / (self.n1 * c)) * a2.conj(),
            drive * (self.omega2 / (self.n2 * c)) * a1.conj(),
        )
    }
}

/// Closed-form parametric amplification at `Δk = 0`:
/// `A1 = A1(0) cosh αz`, `A2 = i √(ω2n1/ω1n2) (A3/|A3|) A1*(0) sinh αz`.
pub fn parametric_gain_analytic(
    mix: &ThreeWaveMixing,
    a1_0: Complex64,
    a3: Complex64,
    z: f64,
) -> Result<(Complex64, Complex64)> {
    if mix.delta_k != 0.0 {
        return Err(Error::InvalidParameter(
            "analytic gain solution requires delta_k = 0".into(),
        ));
    }
    if !(z >= 0.0 && z.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "z must be non-negative, got {z}"
        )));
    }
    let pump = a3.norm();
    if pump == 0.0 {
        if z > 0.0 && mix.chi_eff() != 0.0 {
            return Err(Error::PumpZero);
        }
        return Ok((a1_0, Complex64::new(0.0, 0.0)));
    }
    let gz = mix.gain_rate(a3) * z;
    let ratio = (mix.omega2 * mix.n1 / (mix.omega1 * mix.n2)).sqrt();
    // Sign of χ enters through the pump phase it multiplies.
    let pump_phase = a3 / pump * mix.chi_eff().signum();
    let a1 = a1_0 * gz.cosh();
    let a2 = Complex64::i() * ratio * pump_phase * a1_0.conj() * gz.sinh();
    Ok((a1, a2))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub z: f64,
    pub a1: Complex64,
    pub a2: Complex64,
}

/// Fixed-step RK4 integration of the coupled signal/idler amplitude equations
/// over `[0, z_span]`; the pump amplitude is held constant. Returns
/// `steps + 1` samples including `z = 0`.
pub fn integrate_coupled(
    mix: &ThreeWaveMixing,
    a1: Complex64,
    a2: Complex64,
    a3: Complex64,
    z_span: f64,
    steps: usize,
) -> Result<Vec<TrajectoryPoint>> {
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be at least 1".into()));
    }
    if !(z_span >= 0.0 && z_span.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "z span must be non-negative, got {z_span}"
        )));
    }
    let h = z_span / steps as f64;
    let mut out = Vec::with_capacity(steps + 1);
    let (mut u, mut v) = (a1, a2);
    out.push(TrajectoryPoint {
        z: 0.0,
        a1: u,
        a2: v,
    });
    for k in 0..steps {
        let z = h * k as f64;
        let (k1u, k1v) = mix.derivative(z, a3, u, v);
        let (k2u, k2v) = mix.derivative(z + 0.5 * h, a3, u + k1u * (0.5 * h), v + k1v * (0.5 * h));
        let (k3u, k3v) = mix.derivative(z + 0.5 * h, a3, u + k2u * (0.5 * h), v + k2v * (0.5 * h));
        let (k4u, k4v) = mix.derivative(z + h, a3, u + k3u * h, v + k3v * h);
        u += (k1u + k2u * 2.0 + k3u * 2.0 + k4u) * (h / 6.0);
        v += (k1v + k2v * 2.0 + k3v * 2.0 + k4v) * (h / 6.0);
        out.push(TrajectoryPoint {
            z: h * (k + 1) as f64,
            a1: u,
            a2: v,
        });
    }
    Ok(out)
}

/// Worst drift of the Manley–Rowe invariant `I1/ω1 − I2/ω2` along a
/// trajectory, relative to the initial photon flux `I1/ω1 + I2/ω2`.
/// Falls back to the absolute drift when the initial flux is zero.
pub fn manley_rowe_defect(
    trajectory: &[TrajectoryPoint],
    omega1: f64,
    omega2: f64,
    n1: f64,
    n2: f64,
) -> Result<f64> {
    let first = trajectory
        .first()
        .ok_or_else(|| Error::InvalidParameter("empty trajectory".into()))?;
    let invariant =
        |p: &TrajectoryPoint| intensity(n1, p.a1) / omega1 - intensity(n2, p.a2) / omega2;
    let flux0 = intensity(n1, first.a1) / omega1 + intensity(n2, first.a2) / omega2;
    let base = invariant(first);
    let worst = trajectory
        .iter()
        .map(|p| (invariant(p) - base).abs())
        .fold(0.0, f64::max);
    Ok(if flux0 > 0.0 { worst / flux0 } else { worst })
}

/// Per-sample flux defect, as used for trajectory CSV output.
pub fn flux_defects(
    trajectory: &[TrajectoryPoint],
    omega1: f64,
    omega2: f64,
    n1: f64,
    n2: f64,
) -> Vec<f64> {
    let Some(first) = trajectory.first() else {
        return Vec::new();
    };
    let invariant =
        |p: &TrajectoryPoint| intensity(n1, p.a1) / omega1 - intensity(n2, p.a2) / omega2;
    let flux0 = intensity(n1, first.a1) / omega1 + intensity(n2, first.a2) / omega2;
    let base = invariant(first);
    trajectory
        .iter()
        .map(|p| {
            let d = (invariant(p) - base).abs();
            if flux0 > 0.0 {
                d / flux0
            } else {
                d
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn mix(delta_k: f64) -> ThreeWaveMixing {
        let w1 = Wavelength::from_um(0.8).unwrap().angular_frequency();
        let w2 = Wavelength::from_um(0.8).unwrap().angular_frequency();
        ThreeWaveMixing {
            omega1: w1,
            omega2: w2,
            n1: 1.66,
            n2: 1.55,
            d_eff: 2.0e-12,
            delta_k,
        }
    }

    #[test]
    fn sinc_branches_agree() {
        assert_eq!(sinc(0.0), 1.0);
        for x in [9.99e-5, 1.01e-4] {
            assert!((sinc(x) - x.sin() / x).abs() < 1e-15);
        }
        assert!(sinc(PI).abs() < 1e-16);
    }

    #[test]
    fn d_eff_special_angles() {
        let (d11, d22) = (0.16, 2.2);
        assert!(d_eff_bbo_type2(PI / 4.0, 0.3, d11, d22).abs() < 1e-15);
        assert_eq!(d_eff_bbo_type2(0.0, 0.0, d11, d22), d22);
        assert!((d_eff_bbo_type2(0.0, PI / 6.0, d11, d22) - d11).abs() < 1e-15);
    }

    #[test]
    fn shg_law() {
        let mut p = ShgParams {
            i1: 1e12,
            i2: 1e12,
            omega3: Wavelength::from_um(0.4).unwrap().angular_frequency(),
            n1: 1.66,
            n2: 1.66,
            n3: 1.66,
            d_eff: 2e-12,
            length_m: 1e-3,
            delta_k: 0.0,
        };
        let peak = shg_intensity(&p);
        assert_eq!(peak, p.peak_intensity());
        p.delta_k = PI / p.length_m; // ΔkL/2 = π/2
        let ratio = shg_intensity(&p) / peak;
        assert!((ratio - 4.0 / (PI * PI)).abs() < 1e-12);
        let plus = shg_intensity(&p);
        p.delta_k = -p.delta_k;
        assert_eq!(plus, shg_intensity(&p));
    }

    #[test]
    fn analytic_gain_edge_cases() {
        let m = mix(0.0);
        let a3 = Complex64::new(3e7, 4e7);
        let a1 = Complex64::new(1.0, -0.5);
        assert_eq!(
            parametric_gain_analytic(&m, a1, a3, 0.0).unwrap(),
            (a1, Complex64::new(0.0, 0.0))
        );
        let zero = Complex64::new(0.0, 0.0);
        for z in [0.0, 1e-3, 0.1] {
            assert_eq!(
                parametric_gain_analytic(&m, zero, a3, z).unwrap(),
                (zero, zero)
            );
        }
        let z = 1.0 / m.gain_rate(a3);
        let (out, _) = parametric_gain_analytic(&m, a1, a3, z).unwrap();
        assert!((out.norm() / a1.norm() - 1f64.cosh()).abs() < 1e-12);
        assert_eq!(
            parametric_gain_analytic(&m, a1, zero, 1e-3),
            Err(Error::PumpZero)
        );
        assert!(parametric_gain_analytic(&mix(1.0), a1, a3, 1e-3).is_err());
    }

    #[test]
    fn zero_coupling_keeps_amplitudes() {
        let mut m = mix(50.0);
        m.d_eff = 0.0;
        let (a1, a2) = (Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.1));
        let traj = integrate_coupled(&m, a1, a2, Complex64::new(1e7, 0.0), 1e-2, 100).unwrap();
        assert_eq!(traj.len(), 101);
        assert!(traj.iter().all(|p| p.a1 == a1 && p.a2 == a2));
        assert_eq!(
            manley_rowe_defect(&traj, m.omega1, m.omega2, m.n1, m.n2).unwrap(),
            0.0
        );
    }

    #[test]
    fn integrator_rejects_bad_input() {
        let m = mix(0.0);
        let c = Complex64::new(1.0, 0.0);
        assert!(integrate_coupled(&m, c, c, c, 1.0, 0).is_err());
        assert!(integrate_coupled(&m, c, c, c, -1.0, 10).is_err());
        assert!(manley_rowe_defect(&[], 1.0, 1.0, 1.0, 1.0).is_err());
    }
}
