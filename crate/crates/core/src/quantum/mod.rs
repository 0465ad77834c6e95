//! Photon pairs under a classical, undepleted pump.
//!
//! The pump is replaced by its classical amplitude, so the three-mode
//! interaction collapses to a two-mode squeezer with a single interaction
//! parameter `r = κ|E_p|t`. Phase-mismatch factors are set to one here;
//! mismatch lives in [`crate::phasematch`] and [`crate::classical`].

mod fock;
mod hom;
mod polarization;

pub use fock::{
    apply_ladder, heralded_g2, mean_photon_number, pair_statistics, spdc_evolve, LadderAction,
    LadderKind, Mode, PairState, TruncationWarning, TRUNCATION_THRESHOLD,
};
pub use hom::{balanced_splitter, coincidence, hom_bunching, hom_dip_curve};
pub use polarization::{
    bell_state, chsh_s, coincidence_probability, correlation, fringe, fringe_visibility,
    visibility, AnalyzerSetting, PolarizationState,
};

/// Default photon-number truncation per mode.
pub const DEFAULT_N_MAX: usize = 8;
/// Default number of terms in the evolution series.
pub const DEFAULT_SERIES_ORDER: usize = 12;
