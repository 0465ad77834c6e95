//! Birefringent phase matching in a negative uniaxial crystal.
//!
//! Lab frame: the pump travels along `z` inside the crystal and the optic
//! axis lies in the `x–z` plane at `theta_cut` from the pump, tilted toward
//! `−x`. Daughter directions are given by a polar angle from `z` and an
//! azimuth from `x`, so azimuth 0 tilts a wave away from the optic axis and
//! azimuth π tilts it toward the axis.
//! Wave-vector magnitudes are in rad/µm.

mod cones;

pub use cones::{emission_cones, ConeRequest, ConeSet, PhotonRole, RingPoint};

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::str::FromStr;

use crate::crystal::{UniaxialCrystal, Wavelength};
use crate::error::{Error, Result};

/// `|f| < 1e-12 µm⁻¹` on the scalar collinear mismatch `Δk / 2π`.
pub const COLLINEAR_TOLERANCE: f64 = 2.0 * PI * 1e-12;
/// Bound on the longitudinal mismatch of noncollinear solutions, rad/µm.
pub const NONCOLLINEAR_TOLERANCE: f64 = 1e-10;
/// Largest internal signal angle accepted by the noncollinear solver.
pub const MAX_NONCOLLINEAR_POLAR: f64 = 10.0 * PI / 180.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    Ordinary,
    Extraordinary,
}

impl Polarization {
    pub fn label(self) -> &'static str {
        match self {
            Polarization::Ordinary => "o",
            Polarization::Extraordinary => "e",
        }
    }
}

/// Polarization assignment pump → signal + idler. The pump is always
/// extraordinary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhaseMatchType {
    /// e → o + o
    TypeI,
    /// e → e + o
    TypeIIEo,
    /// e → o + e
    TypeIIOe,
}

impl PhaseMatchType {
    pub const ALL: [PhaseMatchType; 3] = [Self::TypeI, Self::TypeIIEo, Self::TypeIIOe];

    pub fn signal(self) -> Polarization {
        match self {
            Self::TypeIIEo => Polarization::Extraordinary,
            _ => Polarization::Ordinary,
        }
    }

    pub fn idler(self) -> Polarization {
        match self {
            Self::TypeIIOe => Polarization::Extraordinary,
            _ => Polarization::Ordinary,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::TypeI => "type1",
            Self::TypeIIEo => "type2-eo",
            Self::TypeIIOe => "type2-oe",
        }
    }
}

impl fmt::Display for PhaseMatchType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PhaseMatchType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "1" | "i" | "type1" | "type-i" | "typei" => Ok(Self::TypeI),
            "2" | "2eo" | "type2" | "type2-eo" | "type-ii-eo" | "eo" => Ok(Self::TypeIIEo),
            "2oe" | "type2-oe" | "type-ii-oe" | "oe" => Ok(Self::TypeIIOe),
            _ => Err(Error::InvalidParameter(format!(
                "unknown phase-matching type `{s}`"
            ))),
        }
    }
}

/// Propagation direction: polar angle from the pump axis and azimuth from
/// the optic-axis meridian, radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    pub polar: f64,
    pub azimuth: f64,
}

impl Direction {
    pub const PUMP_AXIS: Direction = Direction {
        polar: 0.0,
        azimuth: 0.0,
    };

    pub fn new(polar: f64, azimuth: f64) -> Self {
        Self { polar, azimuth }
    }

    pub fn unit(self) -> [f64; 3] {
        let (sp, cp) = self.polar.sin_cos();
        let (sa, ca) = self.azimuth.sin_cos();
        [sp * ca, sp * sa, cp]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveConfig {
    pub wavelength: Wavelength,
    pub polarization: Polarization,
    pub direction: Direction,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    /// Angle between the internal pump direction and the optic axis, rad.
    pub theta_cut: f64,
    /// Crystal length, m.
    pub length_m: f64,
}

impl Geometry {
    pub fn new(theta_cut: f64, length_m: f64) -> Result<Self> {
        if !(theta_cut > 0.0 && theta_cut < FRAC_PI_2) {
            return Err(Error::InvalidParameter(format!(
                "cut angle must lie in (0, 90) deg, got {} deg",
                theta_cut.to_degrees()
            )));
        }
        if !(length_m >= 0.0 && length_m.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "crystal length must be non-negative, got {length_m} m"
            )));
        }
        Ok(Self {
            theta_cut,
            length_m,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KVector {
    /// `2π n / λ`, rad/µm.
    pub magnitude: f64,
    pub direction: [f64; 3],
}

impl KVector {
    pub fn components(&self) -> [f64; 3] {
        self.direction.map(|c| c * self.magnitude)
    }
}

/// Angle between a propagation direction and the optic axis.
pub fn angle_to_optic_axis(direction: Direction, theta_cut: f64) -> f64 {
    let (st, ct) = direction.polar.sin_cos();
    let (sc, cc) = theta_cut.sin_cos();
    let cos_oa = ct * cc - st * direction.azimuth.cos() * sc;
    cos_oa.clamp(-1.0, 1.0).acos()
}

/// Refractive index seen by a wave in the given geometry.
pub fn wave_index(crystal: &UniaxialCrystal, wave: &WaveConfig, theta_cut: f64) -> Result<f64> {
    match wave.polarization {
        Polarization::Ordinary => crystal.index_ordinary(wave.wavelength),
        Polarization::Extraordinary => crystal.index_extraordinary(
            wave.wavelength,
            angle_to_optic_axis(wave.direction, theta_cut),
        ),
    }
}

pub fn wave_vector(
    crystal: &UniaxialCrystal,
    wave: &WaveConfig,
    theta_cut: f64,
) -> Result<KVector> {
    let n = wave_index(crystal, wave, theta_cut)?;
    Ok(KVector {
        magnitude: 2.0 * PI * n / wave.wavelength.um(),
        direction: wave.direction.unit(),
    })
}

/// `Δk = k_p − k_s − k_i`, rad/µm.
pub fn mismatch(pump: &KVector, signal: &KVector, idler: &KVector) -> [f64; 3] {
    let (p, s, i) = (pump.components(), signal.components(), idler.components());
    [p[0] - s[0] - i[0], p[1] - s[1] - i[1], p[2] - s[2] - i[2]]
}

pub fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Exit-face refraction for a face normal to the pump axis.
pub fn snell_external(theta_internal: f64, n: f64) -> Result<f64> {
    let s = n * theta_internal.sin();
    if s.abs() > 1.0 {
        return Err(Error::TotalInternalReflection(s));
    }
    Ok(s.asin())
}

/// A solved phase-matching geometry. Angles in radians, mismatch in rad/µm.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchSolution {
    pub kind: PhaseMatchType,
    pub theta_cut: f64,
    pub signal_polar: f64,
    pub idler_polar: f64,
    pub signal_azimuth: f64,
    pub signal_polar_ext: f64,
    pub idler_polar_ext: f64,
    pub lambda_p: Wavelength,
    pub lambda_s: Wavelength,
    pub lambda_i: Wavelength,
    /// `|Δk|` re-evaluated at the solution.
    pub residual: f64,
    /// Bound the solver guarantees on `residual`.
    pub tolerance: f64,
}

impl MatchSolution {
    pub fn idler_azimuth(&self) -> f64 {
        (self.signal_azimuth + PI).rem_euclid(TAU)
    }

    pub fn waves(&self) -> [WaveConfig; 3] {
        [
            WaveConfig {
                wavelength: self.lambda_p,
                polarization: Polarization::Extraordinary,
                direction: Direction::PUMP_AXIS,
            },
            WaveConfig {
                wavelength: self.lambda_s,
                polarization: self.kind.signal(),
                direction: Direction::new(self.signal_polar, self.signal_azimuth),
            },
            WaveConfig {
                wavelength: self.lambda_i,
                polarization: self.kind.idler(),
                direction: Direction::new(self.idler_polar, self.idler_azimuth()),
            },
        ]
    }

    /// Full mismatch vector at this solution.
    pub fn mismatch_vector(&self, crystal: &UniaxialCrystal) -> Result<[f64; 3]> {
        let [p, s, i] = self.waves();
        Ok(mismatch(
            &wave_vector(crystal, &p, self.theta_cut)?,
            &wave_vector(crystal, &s, self.theta_cut)?,
            &wave_vector(crystal, &i, self.theta_cut)?,
        ))
    }
}

fn check_energy(lp: Wavelength, ls: Wavelength, li: Wavelength) -> Result<()> {
    let lhs = 1.0 / lp.um();
    let rhs = 1.0 / ls.um() + 1.0 / li.um();
    if ((lhs - rhs) / lhs).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "wavelengths violate energy conservation: 1/{} != 1/{} + 1/{}",
            lp.um(),
            ls.um(),
            li.um()
        )));
    }
    Ok(())
}

/// Bisection on `[lo, hi]` where `f(lo)` and `f(hi)` differ in sign.
/// Stops when the bracket no longer shrinks.
pub(crate) fn bisect(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// First sign change of `f` on a uniform grid over `[lo, hi]`.
fn bracket_root(
    f: &mut impl FnMut(f64) -> Result<f64>,
    lo: f64,
    hi: f64,
    intervals: usize,
) -> Result<std::result::Result<(f64, f64), (f64, f64)>> {
    let mut prev_x = lo;
    let mut prev_f = f(lo)?;
    let first = prev_f;
    for k in 1..=intervals {
        let x = lo + (hi - lo) * k as f64 / intervals as f64;
        let fx = f(x)?;
        if prev_f == 0.0 || (fx < 0.0) != (prev_f < 0.0) {
            return Ok(Ok((prev_x, x)));
        }
        prev_x = x;
        prev_f = fx;
    }
    Ok(Err((first, prev_f)))
}

/// Cut angle for collinear phase matching.
///
/// Solves `n_p(θ)/λp − n_s/λs − n_i/λi = 0` by bracketing on a 1° grid over
/// `[0°, 90°]` and bisecting inside the first sign change.
pub fn solve_collinear(
    crystal: &UniaxialCrystal,
    kind: PhaseMatchType,
    lambda_p: Wavelength,
    lambda_s: Wavelength,
) -> Result<MatchSolution> {
    let lambda_i = Wavelength::complement(lambda_p, lambda_s)?;
    solve_collinear_with(crystal, kind, lambda_p, lambda_s, lambda_i, 0.0)
}

fn solve_collinear_with(
    crystal: &UniaxialCrystal,
    kind: PhaseMatchType,
    lambda_p: Wavelength,
    lambda_s: Wavelength,
    lambda_i: Wavelength,
    signal_azimuth: f64,
) -> Result<MatchSolution> {
    for l in [lambda_p, lambda_s, lambda_i] {
        crystal.check_wavelength(l)?;
    }
    check_energy(lambda_p, lambda_s, lambda_i)?;

    let mut scalar = |theta: f64| -> Result<f64> {
        let index = |pol: Polarization, l: Wavelength| -> Result<f64> {
            match pol {
                Polarization::Ordinary => crystal.index_ordinary(l),
                Polarization::Extraordinary => crystal.index_extraordinary(l, theta),
            }
        };
        Ok(
            crystal.index_extraordinary(lambda_p, theta)? / lambda_p.um()
                - index(kind.signal(), lambda_s)? / lambda_s.um()
                - index(kind.idler(), lambda_i)? / lambda_i.um(),
        )
    };

    let (lo, hi) = match bracket_root(&mut scalar, 0.0, FRAC_PI_2, 90)? {
        Ok(b) => b,
        Err((f_lo, f_hi)) => {
            return Err(Error::NoSolution {
                lo_deg: 0.0,
                hi_deg: 90.0,
                f_lo,
                f_hi,
                detail: format!(
                    "collinear {kind} {} -> {} + {}",
                    lambda_p, lambda_s, lambda_i
                ),
            })
        }
    };
    // Indices are valid on the whole bracket, so the unwrap cannot fire.
    let theta = bisect(|t| scalar(t).unwrap(), lo, hi);
    let f = scalar(theta)?;
    if f.abs() >= 1e-12 {
        return Err(Error::NoSolution {
            lo_deg: lo.to_degrees(),
            hi_deg: hi.to_degrees(),
            f_lo: scalar(lo)?,
            f_hi: scalar(hi)?,
            detail: format!("bisection stalled at |f| = {:e}", f.abs()),
        });
    }

    let mut sol = MatchSolution {
        kind,
        theta_cut: theta,
        signal_polar: 0.0,
        idler_polar: 0.0,
        signal_azimuth: signal_azimuth.rem_euclid(TAU),
        signal_polar_ext: 0.0,
        idler_polar_ext: 0.0,
        lambda_p,
        lambda_s,
        lambda_i,
        residual: 0.0,
        tolerance: COLLINEAR_TOLERANCE,
    };
    sol.residual = norm3(sol.mismatch_vector(crystal)?);
    Ok(sol)
}

/// Everything the longitudinal mismatch depends on once the wavelengths and
/// the signal direction are fixed.
pub(crate) struct PairKinematics<'a> {
    pub crystal: &'a UniaxialCrystal,
    pub kind: PhaseMatchType,
    pub lambda_p: Wavelength,
    pub lambda_s: Wavelength,
    pub lambda_i: Wavelength,
}

/// Wave vectors and idler angle satisfying transverse balance.
pub(crate) struct PairSlice {
    pub k_signal: f64,
    pub k_idler: f64,
    pub idler_polar: f64,
    pub delta_kz: f64,
}

impl PairKinematics<'_> {
    fn k(&self, pol: Polarization, l: Wavelength, dir: Direction, theta_cut: f64) -> Result<f64> {
        let wave = WaveConfig {
            wavelength: l,
            polarization: pol,
            direction: dir,
        };
        Ok(wave_vector(self.crystal, &wave, theta_cut)?.magnitude)
    }

    /// Idler polar angle with `k_i sin ϑ_i = k_s sin ϑ_s` in the plane
    /// `φ_i = φ_s + π`.
    fn idler_polar(
        &self,
        transverse: f64,
        idler_azimuth: f64,
        theta_cut: f64,
    ) -> Result<Option<f64>> {
        if transverse == 0.0 {
            return Ok(Some(0.0));
        }
        let pol = self.kind.idler();
        let lambda_i = self.lambda_i;
        let k_at = |polar: f64| {
            self.k(
                pol,
                lambda_i,
                Direction::new(polar, idler_azimuth),
                theta_cut,
            )
        };
        match pol {
            Polarization::Ordinary => {
                let s = transverse / k_at(0.0)?;
                Ok((s <= 1.0).then(|| s.asin()))
            }
            Polarization::Extraordinary => {
                // k_i(ϑ) sin ϑ − T grows monotonically on [0, π/2) for the
                // small angles of interest; bail out if the upper end falls short.
                let hi = 0.5 * FRAC_PI_2;
                if k_at(hi)? * hi.sin() < transverse {
                    return Ok(None);
                }
                let root = bisect(|t| k_at(t).unwrap() * t.sin() - transverse, 0.0, hi);
                Ok(Some(root))
            }
        }
    }

    /// Longitudinal mismatch for a signal at `(polar, azimuth)` and a given cut.
    pub fn slice(&self, signal: Direction, theta_cut: f64) -> Result<Option<PairSlice>> {
        let k_pump = self.k(
            Polarization::Extraordinary,
            self.lambda_p,
            Direction::PUMP_AXIS,
            theta_cut,
        )?;
        let k_signal = self.k(self.kind.signal(), self.lambda_s, signal, theta_cut)?;
        let idler_azimuth = signal.azimuth + PI;
        let transverse = k_signal * signal.polar.sin();
        let Some(idler_polar) = self.idler_polar(transverse, idler_azimuth, theta_cut)? else {
            return Ok(None);
        };
        let k_idler = self.k(
            self.kind.idler(),
            self.lambda_i,
            Direction::new(idler_polar, idler_azimuth),
            theta_cut,
        )?;
        Ok(Some(PairSlice {
            k_signal,
            k_idler,
            idler_polar,
            delta_kz: k_pump - k_signal * signal.polar.cos() - k_idler * idler_polar.cos(),
        }))
    }
}

/// Noncollinear phase matching with the signal at internal polar angle
/// `signal_polar` and azimuth `signal_azimuth`; the idler lies at the
/// opposite azimuth.
///
/// Transverse momentum is balanced by construction through an inner solve
/// for the idler angle; the cut angle is then bisected until the longitudinal
/// mismatch is below [`NONCOLLINEAR_TOLERANCE`]. A zero signal angle is the
/// collinear problem and is delegated to [`solve_collinear`].
pub fn solve_noncollinear(
    crystal: &UniaxialCrystal,
    kind: PhaseMatchType,
    lambda_p: Wavelength,
    lambda_s: Wavelength,
    lambda_i: Wavelength,
    signal_polar: f64,
    signal_azimuth: f64,
) -> Result<MatchSolution> {
    if !(0.0..=MAX_NONCOLLINEAR_POLAR).contains(&signal_polar) {
        return Err(Error::InvalidParameter(format!(
            "internal signal angle must lie in [0, 10] deg, got {} deg",
            signal_polar.to_degrees()
        )));
    }
    if !signal_azimuth.is_finite() {
        return Err(Error::InvalidParameter(
            "signal azimuth must be finite".into(),
        ));
    }
    if signal_polar == 0.0 {
        return solve_collinear_with(crystal, kind, lambda_p, lambda_s, lambda_i, signal_azimuth);
    }
    for l in [lambda_p, lambda_s, lambda_i] {
        crystal.check_wavelength(l)?;
    }
    check_energy(lambda_p, lambda_s, lambda_i)?;

    let kin = PairKinematics {
        crystal,
        kind,
        lambda_p,
        lambda_s,
        lambda_i,
    };
    let signal = Direction::new(signal_polar, signal_azimuth.rem_euclid(TAU));
    let no_idler = || Error::NoSolution {
        lo_deg: 0.0,
        hi_deg: 90.0,
        f_lo: f64::NAN,
        f_hi: f64::NAN,
        detail: "idler cannot balance the signal's transverse momentum".into(),
    };
    let mut dkz = |theta: f64| -> Result<f64> {
        kin.slice(signal, theta)?
            .map(|s| s.delta_kz)
            .ok_or_else(no_idler)
    };

    let (lo, hi) = match bracket_root(&mut dkz, 0.0, FRAC_PI_2, 90)? {
        Ok(b) => b,
        Err((f_lo, f_hi)) => {
            return Err(Error::NoSolution {
                lo_deg: 0.0,
                hi_deg: 90.0,
                f_lo,
                f_hi,
                detail: format!(
                    "noncollinear {kind} {} -> {} + {} at {:.4} deg",
                    lambda_p,
                    lambda_s,
                    lambda_i,
                    signal_polar.to_degrees()
                ),
            })
        }
    };
    let theta_cut = bisect(|t| dkz(t).unwrap(), lo, hi);
    let slice = kin.slice(signal, theta_cut)?.ok_or_else(no_idler)?;
    if slice.delta_kz.abs() >= NONCOLLINEAR_TOLERANCE {
        return Err(Error::NoSolution {
            lo_deg: lo.to_degrees(),
            hi_deg: hi.to_degrees(),
            f_lo: dkz(lo)?,
            f_hi: dkz(hi)?,
            detail: format!("bisection stalled at |dk_z| = {:e}", slice.delta_kz.abs()),
        });
    }

    let n_signal = slice.k_signal * lambda_s.um() / (2.0 * PI);
    let n_idler = slice.k_idler * lambda_i.um() / (2.0 * PI);
    let mut sol = MatchSolution {
        kind,
        theta_cut,
        signal_polar,
        idler_polar: slice.idler_polar,
        signal_azimuth: signal.azimuth,
        signal_polar_ext: snell_external(signal_polar, n_signal)?,
        idler_polar_ext: snell_external(slice.idler_polar, n_idler)?,
        lambda_p,
        lambda_s,
        lambda_i,
        residual: 0.0,
        tolerance: NONCOLLINEAR_TOLERANCE,
    };
    sol.residual = norm3(sol.mismatch_vector(crystal)?);
    Ok(sol)
}

/// Noncollinear solution whose signal leaves the crystal at the external
/// polar angle `signal_polar_ext`.
///
/// The internal angle depends on the signal index, which for an
/// extraordinary signal depends on the cut being solved for; a fixed-point
/// iteration on Snell's law settles it in a few rounds.
pub fn solve_for_external_angle(
    crystal: &UniaxialCrystal,
    kind: PhaseMatchType,
    lambda_p: Wavelength,
    lambda_s: Wavelength,
    lambda_i: Wavelength,
    signal_polar_ext: f64,
    signal_azimuth: f64,
) -> Result<MatchSolution> {
    if !(0.0..FRAC_PI_2).contains(&signal_polar_ext) {
        return Err(Error::InvalidParameter(format!(
            "external signal angle must lie in [0, 90) deg, got {} deg",
            signal_polar_ext.to_degrees()
        )));
    }
    let target = signal_polar_ext.sin();
    let mut n = match kind.signal() {
        Polarization::Ordinary => crystal.index_ordinary(lambda_s)?,
        Polarization::Extraordinary => crystal.index_extraordinary_principal(lambda_s)?,
    };
    let mut sol = None;
    for _ in 0..100 {
        let internal = (target / n).asin();
        let next = solve_noncollinear(
            crystal,
            kind,
            lambda_p,
            lambda_s,
            lambda_i,
            internal,
            signal_azimuth,
        )?;
        let wave = next.waves()[1];
        let n_next = wave_index(crystal, &wave, next.theta_cut)?;
        let done = (n_next - n).abs() <= 1e-15 * n;
        n = n_next;
        sol = Some(next);
        if done {
            break;
        }
    }
    let mut sol = sol.expect("loop runs at least once");
    sol.signal_polar_ext = snell_external(sol.signal_polar, n)?;
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wl(v: f64) -> Wavelength {
        Wavelength::from_um(v).unwrap()
    }

    #[test]
    fn optic_axis_angle_special_cases() {
        let cut = 41f64.to_radians();
        assert_eq!(angle_to_optic_axis(Direction::PUMP_AXIS, cut), cut);
        let d = Direction::new(0.3, 1.2);
        assert!((angle_to_optic_axis(d, 0.0) - 0.3).abs() < 1e-15);
        let away = Direction::new(3f64.to_radians(), 0.0);
        assert!((angle_to_optic_axis(away, cut) - 44f64.to_radians()).abs() < 1e-12);
        let toward = Direction::new(3f64.to_radians(), PI);
        assert!((angle_to_optic_axis(toward, cut) - 38f64.to_radians()).abs() < 1e-12);
    }

    #[test]
    fn ordinary_k_is_isotropic() {
        let bbo = UniaxialCrystal::bbo();
        let cut = 0.6;
        let make = |dir| WaveConfig {
            wavelength: wl(0.8),
            polarization: Polarization::Ordinary,
            direction: dir,
        };
        let a = wave_vector(&bbo, &make(Direction::PUMP_AXIS), cut).unwrap();
        let b = wave_vector(&bbo, &make(Direction::new(0.1, 2.0)), cut).unwrap();
        assert_eq!(a.magnitude, b.magnitude);
        // Azimuth π tilts the wave toward the optic axis; at the cut angle it lies on it.
        let on_axis = WaveConfig {
            wavelength: wl(0.8),
            polarization: Polarization::Extraordinary,
            direction: Direction::new(cut, PI),
        };
        let k = wave_vector(&bbo, &on_axis, cut).unwrap();
        let no = bbo.index_ordinary(wl(0.8)).unwrap();
        assert!((k.magnitude - 2.0 * PI * no / 0.8).abs() < 1e-12);
    }

    #[test]
    fn mismatch_of_halves_is_zero() {
        let p = KVector {
            magnitude: 26.0,
            direction: [0.0, 0.0, 1.0],
        };
        let half = KVector {
            magnitude: 13.0,
            ..p
        };
        assert_eq!(mismatch(&p, &half, &half), [0.0; 3]);
        let s = KVector {
            magnitude: 12.0,
            direction: Direction::new(0.1, 0.3).unit(),
        };
        let i = KVector {
            magnitude: 14.5,
            direction: Direction::new(0.08, 0.3 + PI).unit(),
        };
        assert_eq!(mismatch(&p, &s, &i), mismatch(&p, &i, &s));
    }

    #[test]
    fn snell_cases() {
        assert_eq!(snell_external(0.0, 1.7).unwrap(), 0.0);
        assert_eq!(snell_external(0.4, 1.0).unwrap(), 0.4);
        let ext = snell_external(1.8f64.to_radians(), 1.66)
            .unwrap()
            .to_degrees();
        assert!((ext - 2.9885).abs() < 1e-3, "{ext}");
        assert!(matches!(
            snell_external(0.8, 1.66),
            Err(Error::TotalInternalReflection(_))
        ));
    }

    #[test]
    fn collinear_no_solution_reports_bracket() {
        let bbo = UniaxialCrystal::bbo();
        // Birefringence of BBO cannot compensate dispersion this far apart.
        let err = solve_collinear(&bbo, PhaseMatchType::TypeI, wl(0.2), wl(0.4)).unwrap_err();
        match err {
            Error::NoSolution { f_lo, f_hi, .. } => assert_eq!(f_lo < 0.0, f_hi < 0.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn noncollinear_zero_angle_delegates() {
        let bbo = UniaxialCrystal::bbo();
        let (p, s) = (wl(0.405), wl(0.81));
        let i = Wavelength::complement(p, s).unwrap();
        let col = solve_collinear(&bbo, PhaseMatchType::TypeIIEo, p, s).unwrap();
        let nc = solve_noncollinear(&bbo, PhaseMatchType::TypeIIEo, p, s, i, 0.0, 0.0).unwrap();
        assert_eq!(col.theta_cut, nc.theta_cut);
    }

    #[test]
    fn noncollinear_rejects_bad_input() {
        let bbo = UniaxialCrystal::bbo();
        let (p, s) = (wl(0.405), wl(0.81));
        let i = Wavelength::complement(p, s).unwrap();
        assert!(solve_noncollinear(&bbo, PhaseMatchType::TypeIIEo, p, s, i, 0.3, 0.0).is_err());
        assert!(
            solve_noncollinear(&bbo, PhaseMatchType::TypeIIEo, p, s, wl(0.8), 0.02, 0.0).is_err()
        );
    }

    #[test]
    fn type_parsing() {
        for t in PhaseMatchType::ALL {
            assert_eq!(t.name().parse::<PhaseMatchType>().unwrap(), t);
        }
        assert!("type3".parse::<PhaseMatchType>().is_err());
    }
}
