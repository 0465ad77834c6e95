//! Transverse cuts of the SPDC emission cones.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use super::{
    bisect, snell_external, Direction, Geometry, PairKinematics, PhaseMatchType, Polarization,
};
use crate::classical::sinc;
use crate::crystal::{UniaxialCrystal, Wavelength};
use crate::error::{Error, Result};

/// Points below this sinc² weight are not emitted.
pub const MIN_WEIGHT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhotonRole {
    Signal,
    Idler,
}

/// One photon direction on a ring, projected onto the detection plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingPoint {
    pub lambda_s_um: f64,
    pub role: PhotonRole,
    pub branch: Polarization,
    /// Azimuth of this photon, `[0, 2π)`.
    pub azimuth: f64,
    pub polar_internal: f64,
    pub polar_external: f64,
    pub x_mm: f64,
    pub y_mm: f64,
    /// `sinc²(Δk_z L / 2)` of the pair this photon belongs to.
    pub weight: f64,
}

impl RingPoint {
    pub fn radius_mm(&self) -> f64 {
        self.x_mm.hypot(self.y_mm)
    }

    /// Azimuth on the detection plane, `[0, 2π)`.
    pub fn plane_azimuth(&self) -> f64 {
        self.y_mm.atan2(self.x_mm).rem_euclid(TAU)
    }
}

#[derive(Debug, Clone)]
pub struct ConeRequest {
    pub geometry: Geometry,
    pub kind: PhaseMatchType,
    pub lambda_p: Wavelength,
    pub signal_grid: Vec<Wavelength>,
    pub azimuth_grid: Vec<f64>,
    pub detector_distance_mm: f64,
    /// Upper end of the internal signal-angle search, rad.
    pub max_polar: f64,
    /// Samples of the signal-angle search before root refinement.
    pub polar_steps: usize,
}

impl ConeRequest {
    pub fn new(
        geometry: Geometry,
        kind: PhaseMatchType,
        lambda_p: Wavelength,
        signal_grid: Vec<Wavelength>,
        azimuth_grid: Vec<f64>,
        detector_distance_mm: f64,
    ) -> Self {
        Self {
            geometry,
            kind,
            lambda_p,
            signal_grid,
            azimuth_grid,
            detector_distance_mm,
            max_polar: 12f64.to_radians(),
            polar_steps: 240,
        }
    }

    fn validate(&self, crystal: &UniaxialCrystal) -> Result<()> {
        if self.signal_grid.is_empty() || self.azimuth_grid.is_empty() {
            return Err(Error::InvalidParameter(
                "cone grids must be non-empty".into(),
            ));
        }
        if !(self.detector_distance_mm > 0.0 && self.detector_distance_mm.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "detector distance must be positive, got {} mm",
                self.detector_distance_mm
            )));
        }
        if !(self.max_polar > 0.0 && self.max_polar < PI / 4.0) || self.polar_steps < 2 {
            return Err(Error::InvalidParameter(
                "invalid signal-angle search window".into(),
            ));
        }
        if self.azimuth_grid.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidParameter("azimuths must be finite".into()));
        }
        crystal.check_wavelength(self.lambda_p)?;
        for &ls in &self.signal_grid {
            crystal.check_wavelength(ls)?;
            crystal.check_wavelength(Wavelength::complement(self.lambda_p, ls)?)?;
        }
        Ok(())
    }
}

/// Emission rings on a detection plane normal to the pump.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeSet {
    pub kind: PhaseMatchType,
    pub points: Vec<RingPoint>,
}

/// For every (signal wavelength, azimuth) pair, find the internal signal
/// angles where the longitudinal mismatch vanishes (transverse momentum is
/// balanced by the idler), or the angle of least mismatch if none does.
/// Each pair contributes a signal point and an idler point at the opposite
/// azimuth, weighted by `sinc²(Δk_z L/2)`.
///
/// Output order is wavelength-major, then azimuth, then increasing signal
/// angle, signal before idler. Grid points are evaluated in parallel.
pub fn emission_cones(crystal: &UniaxialCrystal, req: &ConeRequest) -> Result<ConeSet> {
    req.validate(crystal)?;
    let tasks: Vec<(Wavelength, f64)> = req
        .signal_grid
        .iter()
        .flat_map(|&ls| req.azimuth_grid.iter().map(move |&phi| (ls, phi)))
        .collect();
    let chunks: Vec<Vec<RingPoint>> = tasks
        .par_iter()
        .map(|&(ls, phi)| cone_slice(crystal, req, ls, phi.rem_euclid(TAU)))
        .collect::<Result<_>>()?;
    Ok(ConeSet {
        kind: req.kind,
        points: chunks.into_iter().flatten().collect(),
    })
}

fn cone_slice(
    crystal: &UniaxialCrystal,
    req: &ConeRequest,
    lambda_s: Wavelength,
    azimuth: f64,
) -> Result<Vec<RingPoint>> {
    let kin = PairKinematics {
        crystal,
        kind: req.kind,
        lambda_p: req.lambda_p,
        lambda_s,
        lambda_i: Wavelength::complement(req.lambda_p, lambda_s)?,
    };
    let cut = req.geometry.theta_cut;
    let dkz = |polar: f64| -> Option<f64> {
        kin.slice(Direction::new(polar, azimuth), cut)
            .ok()
            .flatten()
            .map(|s| s.delta_kz)
    };

    let step = req.max_polar / req.polar_steps as f64;
    let samples: Vec<(f64, f64)> = (0..=req.polar_steps)
        .filter_map(|k| {
            let polar = step * k as f64;
            dkz(polar).map(|d| (polar, d))
        })
        .collect();

    let mut polars = Vec::new();
    for w in samples.windows(2) {
        let ((a, fa), (b, fb)) = (w[0], w[1]);
        if fa == 0.0 {
            polars.push(a);
        } else if (fa < 0.0) != (fb < 0.0) && fb != 0.0 {
            polars.push(bisect(|t| dkz(t).unwrap_or(f64::NAN), a, b));
        }
    }
    if let Some(&(last, fl)) = samples.last() {
        if fl == 0.0 {
            polars.push(last);
        }
    }
    if polars.is_empty() {
        if let Some(&(best, _)) = samples
            .iter()
            .min_by(|x, y| x.1.abs().total_cmp(&y.1.abs()))
        {
            polars.push(best);
        }
    }

    let length_um = req.geometry.length_m * 1e6;
    let mut out = Vec::with_capacity(2 * polars.len());
    for polar in polars {
        let signal_dir = Direction::new(polar, azimuth);
        let Some(slice) = kin.slice(signal_dir, cut)? else {
            continue;
        };
        let weight = sinc(0.5 * slice.delta_kz * length_um).powi(2);
        if weight < MIN_WEIGHT {
            continue;
        }
        let photons = [
            (
                PhotonRole::Signal,
                req.kind.signal(),
                polar,
                azimuth,
                slice.k_signal * lambda_s.um(),
            ),
            (
                PhotonRole::Idler,
                req.kind.idler(),
                slice.idler_polar,
                (azimuth + PI).rem_euclid(TAU),
                slice.k_idler * kin.lambda_i.um(),
            ),
        ];
        for (role, branch, polar_internal, phi, k_lambda) in photons {
            let n = k_lambda / (2.0 * PI);
            let Ok(polar_external) = snell_external(polar_internal, n) else {
                continue;
            };
            let radius = req.detector_distance_mm * polar_external.tan();
            out.push(RingPoint {
                lambda_s_um: lambda_s.um(),
                role,
                branch,
                azimuth: phi,
                polar_internal,
                polar_external,
                x_mm: radius * phi.cos(),
                y_mm: radius * phi.sin(),
                weight,
            });
        }
    }
    Ok(out)
}

/// Weight above which a ring point counts as phase matched.
const MATCHED: f64 = 0.5;

impl ConeSet {
    /// Matched points of one polarization branch at one signal wavelength,
    /// sorted by detection-plane azimuth.
    pub fn ring(&self, lambda_s_um: f64, branch: Polarization) -> Vec<RingPoint> {
        let mut ring: Vec<RingPoint> = self
            .points
            .iter()
            .filter(|p| p.lambda_s_um == lambda_s_um && p.branch == branch && p.weight >= MATCHED)
            .copied()
            .collect();
        ring.sort_by(|a, b| a.plane_azimuth().total_cmp(&b.plane_azimuth()));
        ring
    }

    /// Mean distance of a ring's points from their centroid, mm.
    pub fn ring_radius(&self, lambda_s_um: f64, branch: Polarization) -> Option<f64> {
        let ring = self.ring(lambda_s_um, branch);
        if ring.is_empty() {
            return None;
        }
        let n = ring.len() as f64;
        let cx = ring.iter().map(|p| p.x_mm).sum::<f64>() / n;
        let cy = ring.iter().map(|p| p.y_mm).sum::<f64>() / n;
        Some(
            ring.iter()
                .map(|p| (p.x_mm - cx).hypot(p.y_mm - cy))
                .sum::<f64>()
                / n,
        )
    }

    /// Crossings of the e ring and the o ring at one signal wavelength.
    ///
    /// Both rings are treated as polar curves `r(ψ)` around the pump axis;
    /// a crossing is a sign change of `r_e − r_o` going once around. Type I
    /// has a single (ordinary) ring and never reports crossings.
    pub fn intersections(&self, lambda_s_um: f64) -> Vec<[f64; 2]> {
        let e_ring = self.ring(lambda_s_um, Polarization::Extraordinary);
        let o_ring = self.ring(lambda_s_um, Polarization::Ordinary);
        if e_ring.len() < 3 || o_ring.len() < 3 {
            return Vec::new();
        }
        let o_curve: Vec<(f64, f64)> = o_ring
            .iter()
            .map(|p| (p.plane_azimuth(), p.radius_mm()))
            .collect();
        let samples: Vec<(f64, f64, f64)> = e_ring
            .iter()
            .map(|p| {
                let psi = p.plane_azimuth();
                let r = p.radius_mm();
                (psi, r, r - interpolate_cyclic(&o_curve, psi))
            })
            .collect();
        let scale = samples.iter().map(|s| s.1).fold(0.0, f64::max).max(1e-300);
        let zero_tol = 1e-9 * scale;

        let signed: Vec<usize> = (0..samples.len())
            .filter(|&k| samples[k].2.abs() > zero_tol)
            .collect();
        if signed.len() < 2 {
            return Vec::new();
        }
        let mut crossings = Vec::new();
        for w in 0..signed.len() {
            let a = signed[w];
            let b = signed[(w + 1) % signed.len()];
            let (da, db) = (samples[a].2, samples[b].2);
            if (da < 0.0) == (db < 0.0) {
                continue;
            }
            // Samples strictly between a and b (cyclically) are on the curve.
            let gap = (b + samples.len() - a) % samples.len();
            let (psi, r) = if gap > 1 {
                let mid = (a + gap / 2) % samples.len();
                (samples[mid].0, samples[mid].1)
            } else {
                let t = da / (da - db);
                let (pa, pb) = (samples[a].0, samples[b].0);
                let span = (pb - pa).rem_euclid(TAU);
                (
                    pa + t * span,
                    samples[a].1 + t * (samples[b].1 - samples[a].1),
                )
            };
            crossings.push([r * psi.cos(), r * psi.sin()]);
        }
        crossings
    }
}

/// Linear interpolation on a curve sorted by azimuth, wrapping at 2π.
fn interpolate_cyclic(curve: &[(f64, f64)], psi: f64) -> f64 {
    let n = curve.len();
    let idx = curve.partition_point(|c| c.0 <= psi);
    let (a, b) = if idx == 0 || idx == n {
        (curve[n - 1], curve[0])
    } else {
        (curve[idx - 1], curve[idx])
    };
    let span = (b.0 - a.0).rem_euclid(TAU);
    if span == 0.0 {
        return a.1;
    }
    let t = (psi - a.0).rem_euclid(TAU) / span;
    a.1 + t * (b.1 - a.1)
}
