//! Dispersion and birefringence of uniaxial nonlinear crystals.
//!
//! Principal indices come from a four-term Sellmeier law for `n²`; the
//! extraordinary index at an arbitrary propagation angle follows from the
//! index ellipsoid. Angles are radians, wavelengths are vacuum values in µm.

use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Vacuum wavelength in micrometres.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Wavelength(f64);

impl Wavelength {
    pub fn from_um(value: f64) -> Result<Self> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "wavelength must be positive and finite, got {value}"
            )));
        }
        Ok(Self(value))
    }

    pub fn um(self) -> f64 {
        self.0
    }

    pub fn metres(self) -> f64 {
        self.0 * 1e-6
    }

    /// Angular frequency in rad/s.
    pub fn angular_frequency(self) -> f64 {
        2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / self.metres()
    }

    /// Wavelength completing energy conservation `1/λp = 1/λs + 1/λi`.
    pub fn complement(pump: Wavelength, signal: Wavelength) -> Result<Self> {
        let inv = 1.0 / pump.0 - 1.0 / signal.0;
        if inv <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "signal wavelength {} um must exceed pump wavelength {} um",
                signal.0, pump.0
            )));
        }
        Self::from_um(1.0 / inv)
    }
}

impl fmt::Display for Wavelength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} um", self.0)
    }
}

/// `n² = b0 + c_num/(λ² − c_pole) − e_quad·λ²`, λ in µm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SellmeierModel {
    pub b0: f64,
    pub c_num: f64,
    pub c_pole: f64,
    pub e_quad: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
}

impl SellmeierModel {
    pub fn new(b0: f64, c_num: f64, c_pole: f64, e_quad: f64, range: [f64; 2]) -> Result<Self> {
        let model = Self {
            b0,
            c_num,
            c_pole,
            e_quad,
            lambda_min: range[0],
            lambda_max: range[1],
        };
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<()> {
        let [lo, hi] = [self.lambda_min, self.lambda_max];
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi > lo) {
            return Err(Error::InvalidParameter(format!(
                "invalid wavelength range [{lo}, {hi}]"
            )));
        }
        if lo * lo <= self.c_pole {
            return Err(Error::InvalidParameter(format!(
                "Sellmeier pole {} um² lies inside the range starting at {lo} um",
                self.c_pole
            )));
        }
        for i in 0..=256 {
            let lambda = lo + (hi - lo) * i as f64 / 256.0;
            let n2 = self.n_squared(lambda);
            if n2.is_nan() || n2 <= 1.0 {
                return Err(Error::InvalidParameter(format!(
                    "Sellmeier model gives n² = {n2} <= 1 at {lambda} um"
                )));
            }
        }
        Ok(())
    }

    /// Unchecked evaluation of `n²`.
    pub fn n_squared(&self, lambda_um: f64) -> f64 {
        let l2 = lambda_um * lambda_um;
        self.b0 + self.c_num / (l2 - self.c_pole) - self.e_quad * l2
    }

    pub fn contains(&self, lambda: Wavelength) -> bool {
        (self.lambda_min..=self.lambda_max).contains(&lambda.um())
    }

    pub fn index(&self, lambda: Wavelength) -> Result<f64> {
        if !self.contains(lambda) {
            return Err(Error::WavelengthOutOfRange {
                value: lambda.um(),
                min: self.lambda_min,
                max: self.lambda_max,
            });
        }
        Ok(self.n_squared(lambda.um()).sqrt())
    }
}

/// Negative uniaxial crystal with its nonlinear coefficients (pm/V).
#[derive(Debug, Clone, PartialEq)]
pub struct UniaxialCrystal {
    pub name: String,
    pub sellmeier_o: SellmeierModel,
    pub sellmeier_e: SellmeierModel,
    pub d11: f64,
    pub d22: f64,
}

impl UniaxialCrystal {
    pub fn new(
        name: impl Into<String>,
        sellmeier_o: SellmeierModel,
        sellmeier_e: SellmeierModel,
        d11: f64,
        d22: f64,
    ) -> Result<Self> {
        let crystal = Self {
            name: name.into(),
            sellmeier_o,
            sellmeier_e,
            d11,
            d22,
        };
        let [lo, hi] = crystal.transparency();
        if lo >= hi {
            return Err(Error::InvalidParameter(
                "ordinary and extraordinary ranges do not overlap".into(),
            ));
        }
        for i in 0..=256 {
            let lambda = lo + (hi - lo) * i as f64 / 256.0;
            let no2 = crystal.sellmeier_o.n_squared(lambda);
            let ne2 = crystal.sellmeier_e.n_squared(lambda);
            if ne2 >= no2 {
                return Err(Error::InvalidParameter(format!(
                    "crystal is not negative uniaxial at {lambda} um (n_e >= n_o)"
                )));
            }
        }
        Ok(crystal)
    }

    /// Beta barium borate with its 190 nm – 3300 nm transparency window.
    pub fn bbo() -> Self {
        let range = [0.19, 3.3];
        let o = SellmeierModel {
            b0: 2.7405,
            c_num: 0.0184,
            c_pole: 0.0179,
            e_quad: 0.0155,
            lambda_min: range[0],
            lambda_max: range[1],
        };
        let e = SellmeierModel {
            b0: 2.3730,
            c_num: 0.0128,
            c_pole: 0.0156,
            e_quad: 0.0044,
            lambda_min: range[0],
            lambda_max: range[1],
        };
        Self {
            name: "BBO".into(),
            sellmeier_o: o,
            sellmeier_e: e,
            d11: 0.16,
            d22: 2.2,
        }
    }

    /// Looks up a built-in crystal by (case-insensitive) name.
    pub fn by_name(name: &str) -> Option<Self> {
        match name.to_ascii_uppercase().as_str() {
            "BBO" => Some(Self::bbo()),
            _ => None,
        }
    }

    /// Parses the `key = value` coefficient format. `#` starts a comment.
    pub fn from_kv_str(name: &str, text: &str) -> Result<Self> {
        let mut values = std::collections::BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::CrystalFile(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let key = key.trim();
            if !CRYSTAL_KEYS.contains(&key) {
                return Err(Error::CrystalFile(format!(
                    "line {}: unknown key `{key}`",
                    lineno + 1
                )));
            }
            let value: f64 = value.trim().parse().map_err(|_| {
                Error::CrystalFile(format!(
                    "line {}: `{}` is not a number",
                    lineno + 1,
                    value.trim()
                ))
            })?;
            if !value.is_finite() {
                return Err(Error::CrystalFile(format!(
                    "line {}: non-finite value",
                    lineno + 1
                )));
            }
            values.insert(key, value);
        }
        let get = |key: &str| {
            values
                .get(key)
                .copied()
                .ok_or_else(|| Error::CrystalFile(format!("missing key `{key}`")))
        };
        let range = [get("lambda_min")?, get("lambda_max")?];
        let o = SellmeierModel::new(
            get("b0_o")?,
            get("c_num_o")?,
            get("c_pole_o")?,
            get("e_quad_o")?,
            range,
        )?;
        let e = SellmeierModel::new(
            get("b0_e")?,
            get("c_num_e")?,
            get("c_pole_e")?,
            get("e_quad_e")?,
            range,
        )?;
        Self::new(name, o, e, get("d11")?, get("d22")?)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::CrystalFile(format!("{}: {e}", path.display())))?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "custom".into());
        Self::from_kv_str(&name, &text)
    }

    /// Intersection of the two Sellmeier ranges, µm.
    pub fn transparency(&self) -> [f64; 2] {
        [
            self.sellmeier_o.lambda_min.max(self.sellmeier_e.lambda_min),
            self.sellmeier_o.lambda_max.min(self.sellmeier_e.lambda_max),
        ]
    }

    pub fn check_wavelength(&self, lambda: Wavelength) -> Result<()> {
        let [min, max] = self.transparency();
        if (min..=max).contains(&lambda.um()) {
            Ok(())
        } else {
            Err(Error::WavelengthOutOfRange {
                value: lambda.um(),
                min,
                max,
            })
        }
    }

    pub fn index_ordinary(&self, lambda: Wavelength) -> Result<f64> {
        self.check_wavelength(lambda)?;
        self.sellmeier_o.index(lambda)
    }

    /// Extraordinary index for propagation perpendicular to the optic axis.
    pub fn index_extraordinary_principal(&self, lambda: Wavelength) -> Result<f64> {
        self.check_wavelength(lambda)?;
        self.sellmeier_e.index(lambda)
    }

    /// Extraordinary index for a wave vector at `theta_oa` from the optic axis.
    pub fn index_extraordinary(&self, lambda: Wavelength, theta_oa: f64) -> Result<f64> {
        let no = self.index_ordinary(lambda)?;
        let ne = self.index_extraordinary_principal(lambda)?;
        Ok(ellipsoid_index(no, ne, theta_oa))
    }

    /// Spatial walk-off angle `ρ = −(1/n)·dn/dθ` of the extraordinary wave.
    ///
    /// Uses the closed-form derivative of the index ellipsoid. For a negative
    /// crystal `ρ ≥ 0` on `[0, π/2]`; positive means the Poynting vector is
    /// tilted away from the optic axis relative to the wave vector.
    pub fn walkoff_angle(&self, lambda: Wavelength, theta_oa: f64) -> Result<f64> {
        let no = self.index_ordinary(lambda)?;
        let ne = self.index_extraordinary_principal(lambda)?;
        let (s, c) = theta_oa.sin_cos();
        let denom = ne * ne * c * c + no * no * s * s;
        Ok(s * c * (no * no - ne * ne) / denom)
    }

    /// Arrival-time separation of the e and o waves after `length_m` metres,
    /// `Δt = (L/c)·|n_e(θ) − n_o|`.
    pub fn temporal_walkoff(
        &self,
        lambda: Wavelength,
        theta_oa: f64,
        length_m: f64,
    ) -> Result<f64> {
        if !(length_m >= 0.0 && length_m.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "crystal length must be non-negative, got {length_m}"
            )));
        }
        let no = self.index_ordinary(lambda)?;
        let ne = self.index_extraordinary(lambda, theta_oa)?;
        Ok(length_m / SPEED_OF_LIGHT * (ne - no).abs())
    }
}

const CRYSTAL_KEYS: [&str; 12] = [
    "b0_o",
    "c_num_o",
    "c_pole_o",
    "e_quad_o",
    "b0_e",
    "c_num_e",
    "c_pole_e",
    "e_quad_e",
    "d11",
    "d22",
    "lambda_min",
    "lambda_max",
];

/// Index ellipsoid: `n²(θ) = n_e² n_o² / (n_e² cos²θ + n_o² sin²θ)`.
pub fn ellipsoid_index(no: f64, ne: f64, theta_oa: f64) -> f64 {
    let (s, c) = theta_oa.sin_cos();
    // Exact endpoints: the general expression rounds away from n_o / n_e.
    // The neglected term is below 1e-24 relative.
    if s.abs() < 1e-12 {
        return no;
    }
    if c.abs() < 1e-12 {
        return ne;
    }
    no * ne / (ne * ne * c * c + no * no * s * s).sqrt()
}
