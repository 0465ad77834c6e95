//! Reference implementations used as test oracles. They are written from the
//! closed-form physics and share no code with the library under test.

#![allow(dead_code)]

use num_complex::Complex64;

/// BBO coefficients as `(b0, c_num, c_pole, e_quad)` for `n² = b0 + c_num/(λ² − c_pole) − e_quad·λ²`.
pub const BBO_O: [f64; 4] = [2.7405, 0.0184, 0.0179, 0.0155];
pub const BBO_E: [f64; 4] = [2.3730, 0.0128, 0.0156, 0.0044];

pub fn hand_index(c: [f64; 4], lambda_um: f64) -> f64 {
    let l2 = lambda_um * lambda_um;
    (c[0] + c[1] / (l2 - c[2]) - c[3] * l2).sqrt()
}

pub fn hand_no(lambda_um: f64) -> f64 {
    hand_index(BBO_O, lambda_um)
}

pub fn hand_ne(lambda_um: f64) -> f64 {
    hand_index(BBO_E, lambda_um)
}

/// Extraordinary index at `theta` from the optic axis, computed from
/// `1/n² = cos²θ/n_o² + sin²θ/n_e²`.
pub fn hand_ne_theta(lambda_um: f64, theta: f64) -> f64 {
    let (no, ne) = (hand_no(lambda_um), hand_ne(lambda_um));
    let inv = theta.cos().powi(2) / (no * no) + theta.sin().powi(2) / (ne * ne);
    1.0 / inv.sqrt()
}

/// Collinear mismatch `n_p/λp − n_s/λs − n_i/λi` for BBO.
/// `kind`: 0 = e→o+o, 1 = e→e+o, 2 = e→o+e.
pub fn collinear_f(kind: usize, lp: f64, ls: f64, theta: f64) -> f64 {
    let li = 1.0 / (1.0 / lp - 1.0 / ls);
    let np = hand_ne_theta(lp, theta);
    let (ns, ni) = match kind {
        0 => (hand_no(ls), hand_no(li)),
        1 => (hand_ne_theta(ls, theta), hand_no(li)),
        _ => (hand_no(ls), hand_ne_theta(li, theta)),
    };
    np / lp - ns / ls - ni / li
}

/// First sign change of the collinear mismatch on a 0.01° grid over
/// `[0°, 90°]`, refined by linear interpolation. Degrees.
pub fn scan_collinear_deg(kind: usize, lp: f64, ls: f64) -> Option<f64> {
    let f = |deg: f64| collinear_f(kind, lp, ls, deg.to_radians());
    let mut prev_deg = 0.0;
    let mut prev = f(0.0);
    for k in 1..=9000 {
        let deg = k as f64 * 0.01;
        let cur = f(deg);
        if prev == 0.0 {
            return Some(prev_deg);
        }
        if prev.signum() != cur.signum() {
            return Some(prev_deg + 0.01 * prev / (prev - cur));
        }
        prev = cur;
        prev_deg = deg;
    }
    None
}

/// Two-mode squeezed vacuum amplitude `tanhⁿ r / cosh r` on `|n, n⟩`.
pub fn tmsv_amplitude(r: f64, n: usize) -> f64 {
    r.tanh().powi(n as i32) / r.cosh()
}

/// Probability that ideal threshold detectors on both halves of a balanced
/// splitter fire when `n` photons enter one port: `1 − 2^{1−n}` for `n ≥ 1`.
pub fn both_fire_given_n(n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        1.0 - 2f64.powi(1 - n as i32)
    }
}

/// Heralded g² of a two-mode squeezed state, evaluated from the exact
/// photon-number distribution `p(n) = (1 − t) tⁿ`, `t = tanh² r`, truncated
/// at `n_max` and renormalized.
pub fn g2_enumeration(r: f64, n_max: usize) -> f64 {
    let t = r.tanh().powi(2);
    let weights: Vec<f64> = (0..=n_max).map(|n| t.powi(n as i32)).collect();
    let total: f64 = weights.iter().sum();
    let p: Vec<f64> = weights.iter().map(|w| w / total).collect();
    let herald: f64 = p.iter().skip(1).sum();
    let triple: f64 = p
        .iter()
        .enumerate()
        .map(|(n, pn)| pn * both_fire_given_n(n))
        .sum();
    // g² = P(herald ∧ both) · P(herald) / (P(herald ∧ T) · P(herald ∧ R)),
    // with P(herald ∧ T) = P(herald ∧ R) = Σ p(n)(1 − 2^{−n}).
    let single: f64 = p
        .iter()
        .enumerate()
        .map(|(n, pn)| pn * (1.0 - 2f64.powi(-(n as i32))))
        .sum();
    triple * herald / (single * single)
}

/// Balanced splitter built as the unitary `exp(θ(a†b − ab†))`, `θ = −π/4`,
/// summed as a Taylor series in each fixed-photon-number block. The input
/// `b` mode is phase-flipped first so that `a† → (c† + d†)/√2` and
/// `b† → (c† − d†)/√2`. Returns `out[n_c][n_d]`.
pub fn splitter_oracle(
    input: &[((usize, usize), Complex64)],
    n_total: usize,
) -> Vec<Vec<Complex64>> {
    let zero = Complex64::new(0.0, 0.0);
    let mut out = vec![vec![zero; n_total + 1]; n_total + 1];
    let theta = -std::f64::consts::FRAC_PI_4;
    for n in 0..=n_total {
        // Block basis |k, n − k⟩, k = 0..=n.
        let mut v: Vec<Complex64> = (0..=n)
            .map(|k| {
                input
                    .iter()
                    .filter(|((a, b), _)| *a == k && *b == n - k)
                    .map(|((_, b), c)| if b % 2 == 0 { *c } else { -*c })
                    .sum()
            })
            .collect();
        if v.iter().all(|c| *c == zero) {
            continue;
        }
        let apply_g = |x: &[Complex64]| -> Vec<Complex64> {
            let mut y = vec![zero; n + 1];
            for k in 0..=n {
                // a†b |k, n−k⟩ = √((k+1)(n−k)) |k+1, n−k−1⟩
                if k < n {
                    y[k + 1] += x[k] * (((k + 1) * (n - k)) as f64).sqrt();
                }
                // ab† |k, n−k⟩ = √(k(n−k+1)) |k−1, n−k+1⟩
                if k > 0 {
                    y[k - 1] -= x[k] * ((k * (n - k + 1)) as f64).sqrt();
                }
            }
            y
        };
        let mut term = v.clone();
        for m in 1..200 {
            term = apply_g(&term)
                .into_iter()
                .map(|c| c * (theta / m as f64))
                .collect();
            for (acc, t) in v.iter_mut().zip(&term) {
                *acc += t;
            }
            if term.iter().all(|c| c.norm() < 1e-300) {
                break;
            }
        }
        for k in 0..=n {
            out[k][n - k] = v[k];
        }
    }
    out
}

/// Coincidence probability of a splitter-oracle output.
pub fn oracle_coincidence(out: &[Vec<Complex64>]) -> f64 {
    let mut p = 0.0;
    for (c, row) in out.iter().enumerate() {
        for (d, amp) in row.iter().enumerate() {
            if c > 0 && d > 0 {
                p += amp.norm_sqr();
            }
        }
    }
    p
}

/// CHSH value of a product of linear polarizers states `|α⟩|β⟩`, computed
/// with Malus' law on each side independently.
pub fn product_chsh(alpha: f64, beta: f64, a: f64, ap: f64, b: f64, bp: f64) -> f64 {
    let e1 = |x: f64| (2.0 * (x - alpha)).cos();
    let e2 = |y: f64| (2.0 * (y - beta)).cos();
    let e = |x: f64, y: f64| e1(x) * e2(y);
    e(a, b) - e(a, bp) + e(ap, b) + e(ap, bp)
}
