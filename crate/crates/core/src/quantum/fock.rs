use num_complex::Complex64;

use crate::error::{Error, Result};

/// Pre-normalization deficit above which [`spdc_evolve`] flags truncation.
pub const TRUNCATION_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Signal,
    Idler,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderKind {
    Create,
    Annihilate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LadderAction {
    pub mode: Mode,
    pub kind: LadderKind,
}

impl LadderAction {
    pub fn create(mode: Mode) -> Self {
        Self {
            mode,
            kind: LadderKind::Create,
        }
    }

    pub fn annihilate(mode: Mode) -> Self {
        Self {
            mode,
            kind: LadderKind::Annihilate,
        }
    }
}

/// Two-mode Fock state with both photon numbers truncated at `n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairState {
    n_max: usize,
    amplitudes: Vec<Complex64>,
    /// Interaction parameter `r = κ|E_p|t` that produced the state, if any.
    pub r: Option<f64>,
    /// `|1 − Σ|c|²|` before renormalization (evolution only).
    pub pre_normalization_deficit: f64,
    /// Squared amplitude pushed past `n_max` by creation operators.
    pub truncated_weight: f64,
}

/// Raised when the truncated evolution lost more norm than
/// [`TRUNCATION_THRESHOLD`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationWarning {
    pub deficit: f64,
    pub n_max: usize,
    pub r: f64,
}

impl std::fmt::Display for TruncationWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "truncation: norm deficit {:.3e} before renormalization (r = {}, n_max = {})",
            self.deficit, self.r, self.n_max
        )
    }
}

impl PairState {
    pub fn zeros(n_max: usize) -> Self {
        Self {
            n_max,
            amplitudes: vec![Complex64::new(0.0, 0.0); (n_max + 1) * (n_max + 1)],
            r: None,
            pre_normalization_deficit: 0.0,
            truncated_weight: 0.0,
        }
    }

    pub fn vacuum(n_max: usize) -> Self {
        Self::fock(0, 0, n_max).expect("vacuum fits every truncation")
    }

    /// Number state `|n_s, n_i⟩`.
    pub fn fock(n_s: usize, n_i: usize, n_max: usize) -> Result<Self> {
        if n_s > n_max || n_i > n_max {
            return Err(Error::InvalidParameter(format!(
                "|{n_s}, {n_i}> exceeds truncation {n_max}"
            )));
        }
        let mut s = Self::zeros(n_max);
        s.set(n_s, n_i, Complex64::new(1.0, 0.0));
        Ok(s)
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    fn idx(&self, n_s: usize, n_i: usize) -> usize {
        n_s * (self.n_max + 1) + n_i
    }

    pub fn amplitude(&self, n_s: usize, n_i: usize) -> Complex64 {
        if n_s > self.n_max || n_i > self.n_max {
            return Complex64::new(0.0, 0.0);
        }
        self.amplitudes[self.idx(n_s, n_i)]
    }

    pub fn set(&mut self, n_s: usize, n_i: usize, value: Complex64) {
        let i = self.idx(n_s, n_i);
        self.amplitudes[i] = value;
    }

    /// `((n_s, n_i), amplitude)` over the whole truncated basis.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), Complex64)> + '_ {
        let dim = self.n_max + 1;
        self.amplitudes
            .iter()
            .enumerate()
            .map(move |(k, &c)| ((k / dim, k % dim), c))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn normalized(mut self) -> Result<Self> {
        let norm = self.norm_sqr().sqrt();
        if norm == 0.0 {
            return Err(Error::Undefined("cannot normalize the zero vector".into()));
        }
        for c in &mut self.amplitudes {
            *c /= norm;
        }
        Ok(self)
    }

    /// Total squared amplitude on `n_s ≠ n_i` entries.
    pub fn off_diagonal_weight(&self) -> f64 {
        self.iter()
            .filter(|((s, i), _)| s != i)
            .map(|(_, c)| c.norm_sqr())
            .sum()
    }

    pub fn truncation_warning(&self) -> Option<TruncationWarning> {
        (self.pre_normalization_deficit > TRUNCATION_THRESHOLD).then(|| TruncationWarning {
            deficit: self.pre_normalization_deficit,
            n_max: self.n_max,
            r: self.r.unwrap_or(f64::NAN),
        })
    }

    fn add_scaled(&mut self, other: &PairState, factor: Complex64) {
        for (a, b) in self.amplitudes.iter_mut().zip(&other.amplitudes) {
            *a += b * factor;
        }
    }
}

/// Ladder operator applied to every basis component. Creation past `n_max`
/// drops the component and adds its weight to `truncated_weight`.
pub fn apply_ladder(state: &PairState, action: LadderAction) -> PairState {
    let mut out = PairState::zeros(state.n_max);
    out.r = state.r;
    out.truncated_weight = state.truncated_weight;
    for ((s, i), c) in state.iter() {
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let n = match action.mode {
            Mode::Signal => s,
            Mode::Idler => i,
        };
        let (target, factor) = match action.kind {
            LadderKind::Create => (n + 1, ((n + 1) as f64).sqrt()),
            LadderKind::Annihilate if n == 0 => continue,
            LadderKind::Annihilate => (n - 1, (n as f64).sqrt()),
        };
        if target > state.n_max {
            out.truncated_weight += (c * factor).norm_sqr();
            continue;
        }
        let (ts, ti) = match action.mode {
            Mode::Signal => (target, i),
            Mode::Idler => (s, target),
        };
        let v = out.amplitude(ts, ti) + c * factor;
        out.set(ts, ti, v);
    }
    out
}

fn apply_sequence(state: &PairState, ops: &[LadderAction]) -> PairState {
    // Operators act right to left, as written in the product.
    ops.iter()
        .rev()
        .fold(state.clone(), |acc, &op| apply_ladder(&acc, op))
}

/// `⟨N⟩` of one mode.
pub fn mean_photon_number(state: &PairState, mode: Mode) -> f64 {
    state
        .iter()
        .map(|((s, i), c)| {
            let n = match mode {
                Mode::Signal => s,
                Mode::Idler => i,
            };
            n as f64 * c.norm_sqr()
        })
        .sum()
}

/// Pair state produced from vacuum by `exp(r(a_s†a_i† − a_s a_i))`, expanded
/// to `series_order` and truncated at `n_max` photons per mode.
///
/// The series is summed in a working space wide enough that no term is
/// clipped, then projected onto `n_max` and renormalized. The norm lost in
/// the projection (plus the series remainder) is kept in
/// `pre_normalization_deficit`.
pub fn spdc_evolve(r: f64, n_max: usize, series_order: usize) -> Result<PairState> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "r must be non-negative, got {r}"
        )));
    }
    if n_max < 1 || series_order < 1 {
        return Err(Error::InvalidParameter(
            "n_max and series order must both be at least 1".into(),
        ));
    }
    let work_max = n_max.max(series_order);
    let create = [
        LadderAction::create(Mode::Signal),
        LadderAction::create(Mode::Idler),
    ];
    let annihilate = [
        LadderAction::annihilate(Mode::Signal),
        LadderAction::annihilate(Mode::Idler),
    ];

    let mut term = PairState::vacuum(work_max);
    let mut sum = term.clone();
    for m in 1..=series_order {
        let up = apply_sequence(&term, &create);
        let down = apply_sequence(&term, &annihilate);
        let mut next = PairState::zeros(work_max);
        next.add_scaled(&up, Complex64::new(r / m as f64, 0.0));
        next.add_scaled(&down, Complex64::new(-r / m as f64, 0.0));
        sum.add_scaled(&next, Complex64::new(1.0, 0.0));
        term = next;
    }

    let mut out = PairState::zeros(n_max);
    for ((s, i), c) in sum.iter() {
        if s <= n_max && i <= n_max {
            out.set(s, i, c);
        }
    }
    let deficit = (1.0 - out.norm_sqr()).abs();
    let mut out = out.normalized()?;
    out.r = Some(r);
    out.pre_normalization_deficit = deficit;
    Ok(out)
}

/// Pair-number distribution `p(n) = |c(n, n)|²` of a diagonal state.
pub fn pair_statistics(state: &PairState) -> Result<Vec<f64>> {
    let off = state.off_diagonal_weight();
    if off > 1e-12 {
        return Err(Error::NonDiagonal(off));
    }
    Ok((0..=state.n_max)
        .map(|n| state.amplitude(n, n).norm_sqr())
        .collect())
}

/// Heralded second-order correlation of the signal arm.
///
/// The idler is detected by an ideal threshold detector (herald on one or
/// more photons). The heralded signal meets a balanced splitter with a
/// unit-efficiency threshold detector on each output. All outcomes are
/// enumerated: `n` photons split binomially into `k` and `n − k`.
pub fn heralded_g2(state: &PairState) -> Result<f64> {
    let p = pair_statistics(state)?;
    let herald: f64 = p.iter().skip(1).sum();
    if herald <= 0.0 {
        return Err(Error::Undefined("herald probability is zero".into()));
    }
    let (mut p1, mut p2, mut p12) = (0.0, 0.0, 0.0);
    for (n, &pn) in p.iter().enumerate().skip(1) {
        let w = pn / herald;
        for k in 0..=n {
            let split = binomial(n, k) * 0.5f64.powi(n as i32);
            let d1 = k > 0;
            let d2 = n - k > 0;
            if d1 {
                p1 += w * split;
            }
            if d2 {
                p2 += w * split;
            }
            if d1 && d2 {
                p12 += w * split;
            }
        }
    }
    Ok(p12 / (p1 * p2))
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_on_number_states() {
        let vac = PairState::vacuum(3);
        let one = apply_ladder(&vac, LadderAction::create(Mode::Signal));
        assert_eq!(one, PairState::fock(1, 0, 3).unwrap());
        let back = apply_ladder(&one, LadderAction::annihilate(Mode::Signal));
        assert_eq!(back.amplitudes, vac.amplitudes);
        let gone = apply_ladder(&vac, LadderAction::annihilate(Mode::Idler));
        assert_eq!(gone.norm_sqr(), 0.0);

        let two = apply_ladder(
            &PairState::fock(0, 1, 3).unwrap(),
            LadderAction::create(Mode::Idler),
        );
        assert!((two.amplitude(0, 2).re - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn creation_past_truncation_is_tracked() {
        let top = PairState::fock(2, 0, 2).unwrap();
        let out = apply_ladder(&top, LadderAction::create(Mode::Signal));
        assert_eq!(out.norm_sqr(), 0.0);
        assert!((out.truncated_weight - 3.0).abs() < 1e-15);
    }

    #[test]
    fn mean_number_of_fock_states() {
        assert_eq!(mean_photon_number(&PairState::vacuum(4), Mode::Signal), 0.0);
        let s = PairState::fock(1, 1, 4).unwrap();
        assert_eq!(mean_photon_number(&s, Mode::Signal), 1.0);
        assert_eq!(mean_photon_number(&s, Mode::Idler), 1.0);
    }

    #[test]
    fn first_order_series_is_two_term() {
        let r = 0.1;
        let s = spdc_evolve(r, 4, 1).unwrap();
        let norm = (1.0 + r * r).sqrt();
        assert!((s.amplitude(0, 0).re - 1.0 / norm).abs() < 1e-15);
        assert!((s.amplitude(1, 1).re - r / norm).abs() < 1e-15);
        let rest: f64 = s
            .iter()
            .filter(|(k, _)| *k != (0, 0) && *k != (1, 1))
            .map(|(_, c)| c.norm_sqr())
            .sum();
        assert_eq!(rest, 0.0);
    }

    #[test]
    fn zero_r_is_vacuum() {
        let s = spdc_evolve(0.0, 5, 8).unwrap();
        assert_eq!(s.amplitudes, PairState::vacuum(5).amplitudes);
        assert_eq!(s.pre_normalization_deficit, 0.0);
    }

    #[test]
    fn large_r_warns() {
        let s = spdc_evolve(1.5, 3, 12).unwrap();
        let w = s.truncation_warning().expect("warning");
        assert!(w.deficit > 1e-2);
        assert!(spdc_evolve(0.2, 8, 12)
            .unwrap()
            .truncation_warning()
            .is_none());
        assert!(spdc_evolve(-0.1, 8, 12).is_err());
        assert!(spdc_evolve(0.1, 0, 12).is_err());
    }

    #[test]
    fn statistics_and_g2_edge_cases() {
        assert_eq!(pair_statistics(&PairState::vacuum(3)).unwrap()[0], 1.0);
        let odd = PairState::fock(1, 0, 3).unwrap();
        assert!(matches!(pair_statistics(&odd), Err(Error::NonDiagonal(_))));
        assert_eq!(
            heralded_g2(&PairState::fock(1, 1, 3).unwrap()).unwrap(),
            0.0
        );
        assert!(matches!(
            heralded_g2(&PairState::vacuum(3)),
            Err(Error::Undefined(_))
        ));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(6, 0), 1.0);
        assert_eq!(binomial(3, 4), 0.0);
    }
}
