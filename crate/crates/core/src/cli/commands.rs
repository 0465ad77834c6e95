use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::path::Path;

use num_complex::Complex64;

use super::output::{fmt_f64, RunManifest, Table};
use super::{
    CliError, ConesArgs, GainArgs, IndicesArgs, MatchArgs, PairsArgs, PairsMode, Resolver,
    RunOutput, ShgArgs,
};
use crate::classical::{
    flux_defects, integrate_coupled, intensity, manley_rowe_defect, parametric_gain_analytic,
    shg_intensity, ShgParams, ThreeWaveMixing,
};
use crate::crystal::{UniaxialCrystal, Wavelength};
use crate::phasematch::{
    emission_cones, solve_collinear, solve_for_external_angle, solve_noncollinear, ConeRequest,
    Geometry, MatchSolution, PhaseMatchType, Polarization,
};
use crate::quantum::{
    bell_state, chsh_s, fringe, fringe_visibility, heralded_g2, hom_bunching, hom_dip_curve,
    pair_statistics, spdc_evolve, DEFAULT_N_MAX, DEFAULT_SERIES_ORDER,
};

type CmdResult = Result<RunOutput, CliError>;

fn output(table: Table, manifest: RunManifest, summary: Vec<String>) -> RunOutput {
    RunOutput {
        table,
        manifest,
        summary,
    }
}

fn wavelength(key: &str, value: f64) -> Result<Wavelength, CliError> {
    Wavelength::from_um(value).map_err(|e| CliError::invalid(format!("{key}: {e}")))
}

fn positive(key: &str, value: f64) -> Result<f64, CliError> {
    if value > 0.0 {
        Ok(value)
    } else {
        Err(CliError::invalid(format!(
            "{key} must be positive, got {value}"
        )))
    }
}

fn at_least(key: &str, value: usize, min: usize) -> Result<usize, CliError> {
    if value >= min {
        Ok(value)
    } else {
        Err(CliError::invalid(format!(
            "{key} must be at least {min}, got {value}"
        )))
    }
}

fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![0.5 * (lo + hi)];
    }
    (0..points)
        .map(|k| lo + (hi - lo) * k as f64 / (points - 1) as f64)
        .collect()
}

fn parse_kind(text: &str) -> Result<PhaseMatchType, CliError> {
    text.parse().map_err(CliError::from)
}

pub fn resolve_crystal(
    res: &mut Resolver,
    flag: Option<&str>,
) -> Result<UniaxialCrystal, CliError> {
    let name = res.string("crystal", flag, "BBO");
    if let Some(c) = UniaxialCrystal::by_name(&name) {
        return Ok(c);
    }
    let path = Path::new(&name);
    if path.is_file() {
        return Ok(UniaxialCrystal::from_file(path)?);
    }
    Err(CliError::invalid(format!(
        "unknown crystal `{name}` (not built in and not a readable file)"
    )))
}

pub fn indices(res: &mut Resolver, crystal: &UniaxialCrystal, a: &IndicesArgs) -> CmdResult {
    let lambda_p = wavelength("lambda_p", res.f64("lambda_p", a.lambda_p, 0.4)?)?;
    let lo = res.f64("lambda_min", a.lambda_min, 0.3)?;
    let hi = res.f64("lambda_max", a.lambda_max, 1.2)?;
    let points = at_least("points", res.usize("points", a.points, 91)?, 2)?;
    let theta_flag = res.opt_f64("theta", a.theta)?;
    if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
        return Err(CliError::invalid("lambda_min must be below lambda_max"));
    }
    for l in [lo, hi] {
        crystal.check_wavelength(wavelength("lambda", l)?)?;
    }

    let mut manifest = RunManifest::default();
    let mut summary = Vec::new();
    let doubled = wavelength("lambda_p", 2.0 * lambda_p.um())?;
    let crossing = solve_collinear(crystal, PhaseMatchType::TypeI, lambda_p, doubled);
    let theta = match (&crossing, theta_flag) {
        (_, Some(deg)) => {
            if !(0.0..=180.0).contains(&deg) {
                return Err(CliError::invalid("theta must lie in [0, 180] deg"));
            }
            deg.to_radians()
        }
        (Ok(sol), None) => sol.theta_cut,
        (Err(e), None) => return Err(e.clone().into()),
    };
    match &crossing {
        Ok(sol) => {
            let n_cross = crystal.index_ordinary(doubled)?;
            manifest.derive("crossing_theta_deg", sol.theta_cut.to_degrees());
            manifest.derive("crossing_index", n_cross);
            summary.push(format!(
                "n_e(theta*, {} um) = n_o({} um) = {n_cross:.6} at theta* = {:.4} deg",
                lambda_p.um(),
                doubled.um(),
                sol.theta_cut.to_degrees()
            ));
        }
        Err(e) => manifest.warnings.push(format!("no type-I crossing: {e}")),
    }
    manifest.derive("theta_deg", theta.to_degrees());

    let mut grid = linspace(lo, hi, points);
    for extra in [lambda_p.um(), doubled.um()] {
        if (lo..=hi).contains(&extra) {
            grid.retain(|l| (l - extra).abs() > 1e-9);
            grid.push(extra);
        }
    }
    grid.sort_by(f64::total_cmp);

    let mut table = Table::new(&["lambda_um", "n_o", "n_e_principal", "n_e_theta"]);
    for l in grid {
        let w = wavelength("lambda", l)?;
        table.push_f64(&[
            l,
            crystal.index_ordinary(w)?,
            crystal.index_extraordinary_principal(w)?,
            crystal.index_extraordinary(w, theta)?,
        ]);
    }
    Ok(output(table, manifest, summary))
}

const MATCH_HEADER: [&str; 12] = [
    "type",
    "lambda_p_um",
    "lambda_s_um",
    "lambda_i_um",
    "theta_cut_deg",
    "signal_polar_deg",
    "idler_polar_deg",
    "signal_azimuth_deg",
    "signal_polar_ext_deg",
    "idler_polar_ext_deg",
    "residual_rad_per_um",
    "tolerance_rad_per_um",
];

fn solution_row(sol: &MatchSolution) -> Vec<String> {
    let mut row = vec![sol.kind.name().to_string()];
    row.extend(
        [
            sol.lambda_p.um(),
            sol.lambda_s.um(),
            sol.lambda_i.um(),
            sol.theta_cut.to_degrees(),
            sol.signal_polar.to_degrees(),
            sol.idler_polar.to_degrees(),
            sol.signal_azimuth.to_degrees(),
            sol.signal_polar_ext.to_degrees(),
            sol.idler_polar_ext.to_degrees(),
            sol.residual,
            sol.tolerance,
        ]
        .map(fmt_f64),
    );
    row
}

fn solution_summary(sol: &MatchSolution) -> Vec<String> {
    vec![
        format!(
            "{}: {} um -> {} um + {} um",
            sol.kind,
            sol.lambda_p.um(),
            sol.lambda_s.um(),
            sol.lambda_i.um()
        ),
        format!("theta_cut = {:.6} deg", sol.theta_cut.to_degrees()),
        format!(
            "signal: internal {:.6} deg, external {:.6} deg, azimuth {:.3} deg",
            sol.signal_polar.to_degrees(),
            sol.signal_polar_ext.to_degrees(),
            sol.signal_azimuth.to_degrees()
        ),
        format!(
            "idler:  internal {:.6} deg, external {:.6} deg",
            sol.idler_polar.to_degrees(),
            sol.idler_polar_ext.to_degrees()
        ),
        format!(
            "|dk| = {:.3e} rad/um (tolerance {:.1e})",
            sol.residual, sol.tolerance
        ),
    ]
}

pub fn phase_match(res: &mut Resolver, crystal: &UniaxialCrystal, a: &MatchArgs) -> CmdResult {
    let kind = parse_kind(&res.string("type", a.kind.as_deref(), "type1"))?;
    let lp = res.f64("lambda_p", a.lambda_p, 0.4)?;
    let lambda_p = wavelength("lambda_p", lp)?;
    let lambda_s = wavelength("lambda_s", res.f64("lambda_s", a.lambda_s, 2.0 * lp)?)?;
    let internal = res.opt_f64("signal_angle", a.signal_angle)?;
    let external = res.opt_f64("external_angle", a.external_angle)?;
    let azimuth = res.f64("azimuth", a.azimuth, 0.0)?.to_radians();
    let lambda_i = Wavelength::complement(lambda_p, lambda_s)?;
    for l in [lambda_p, lambda_s, lambda_i] {
        crystal.check_wavelength(l)?;
    }

    let sol = match (internal, external) {
        (Some(_), Some(_)) => {
            return Err(CliError::invalid(
                "give either signal_angle or external_angle, not both",
            ))
        }
        (None, Some(ext)) => solve_for_external_angle(
            crystal,
            kind,
            lambda_p,
            lambda_s,
            lambda_i,
            ext.to_radians(),
            azimuth,
        )?,
        (Some(int), None) if int != 0.0 => solve_noncollinear(
            crystal,
            kind,
            lambda_p,
            lambda_s,
            lambda_i,
            int.to_radians(),
            azimuth,
        )?,
        _ => solve_collinear(crystal, kind, lambda_p, lambda_s)?,
    };

    let mut manifest = RunManifest::default();
    manifest.derive("theta_cut_deg", sol.theta_cut.to_degrees());
    manifest.derive("residual_rad_per_um", sol.residual);
    manifest.derive("lambda_i_um", sol.lambda_i.um());
    let mut table = Table::new(&MATCH_HEADER);
    table.push(solution_row(&sol));
    Ok(output(table, manifest, solution_summary(&sol)))
}

pub fn cones(res: &mut Resolver, crystal: &UniaxialCrystal, a: &ConesArgs) -> CmdResult {
    let kind = parse_kind(&res.string("type", a.kind.as_deref(), "type2-eo"))?;
    let lp = res.f64("lambda_p", a.lambda_p, 0.405)?;
    let lambda_p = wavelength("lambda_p", lp)?;
    let ls = res.f64("lambda_s", a.lambda_s, 2.0 * lp)?;
    let span_nm = res.f64("lambda_span", a.lambda_span, 0.0)?;
    let lambda_points = at_least(
        "lambda_points",
        res.usize("lambda_points", a.lambda_points, 1)?,
        1,
    )?;
    let theta_cut = res.opt_f64("theta_cut", a.theta_cut)?;
    let length_mm = res.f64("length", a.length, 1.0)?;
    let distance = positive("distance", res.f64("distance", a.distance, 100.0)?)?;
    let azimuth_points = at_least(
        "azimuth_points",
        res.usize("azimuth_points", a.azimuth_points, 360)?,
        3,
    )?;
    let polar_max = positive("polar_max", res.f64("polar_max", a.polar_max, 12.0)?)?;
    let polar_steps = at_least(
        "polar_steps",
        res.usize("polar_steps", a.polar_steps, 240)?,
        2,
    )?;
    if span_nm < 0.0 {
        return Err(CliError::invalid("lambda_span must be non-negative"));
    }
    if polar_max >= 45.0 {
        return Err(CliError::invalid("polar_max must be below 45 deg"));
    }

    let lambda_s = wavelength("lambda_s", ls)?;
    let lambda_i = Wavelength::complement(lambda_p, lambda_s)?;
    for l in [lambda_p, lambda_s, lambda_i] {
        crystal.check_wavelength(l)?;
    }

    let mut manifest = RunManifest::default();
    let cut = match theta_cut {
        Some(deg) => deg.to_radians(),
        None => {
            let ext = res.f64("external_angle", a.external_angle, 3.0)?;
            let sol = solve_for_external_angle(
                crystal,
                kind,
                lambda_p,
                lambda_s,
                lambda_i,
                ext.to_radians(),
                FRAC_PI_2,
            )?;
            manifest.derive("solved_for_external_angle_deg", ext);
            sol.theta_cut
        }
    };
    let geometry = Geometry::new(cut, length_mm * 1e-3)?;
    manifest.derive("theta_cut_deg", cut.to_degrees());

    let half = 0.5 * span_nm * 1e-3;
    let signal_grid = if lambda_points == 1 || span_nm == 0.0 {
        vec![lambda_s]
    } else {
        linspace(ls - half, ls + half, lambda_points)
            .into_iter()
            .map(|l| wavelength("lambda_s", l))
            .collect::<Result<_, _>>()?
    };
    let azimuths: Vec<f64> = (0..azimuth_points)
        .map(|k| TAU * k as f64 / azimuth_points as f64)
        .collect();
    let mut req = ConeRequest::new(geometry, kind, lambda_p, signal_grid, azimuths, distance);
    req.max_polar = polar_max.to_radians();
    req.polar_steps = polar_steps;
    let set = emission_cones(crystal, &req)?;

    let crossings = set.intersections(ls);
    manifest.derive("intersection_count", crossings.len());
    let mut summary = vec![format!(
        "{kind} cones at theta_cut = {:.6} deg: {} points",
        cut.to_degrees(),
        set.points.len()
    )];
    for (k, p) in crossings.iter().enumerate() {
        manifest.derive(&format!("intersection_{}_x_mm", k + 1), p[0]);
        manifest.derive(&format!("intersection_{}_y_mm", k + 1), p[1]);
        let ext = (p[0].hypot(p[1]) / distance).atan().to_degrees();
        manifest.derive(&format!("intersection_{}_theta_ext_deg", k + 1), ext);
        summary.push(format!(
            "intersection {}: ({:.4}, {:.4}) mm, {:.4} deg from the pump",
            k + 1,
            p[0],
            p[1],
            ext
        ));
    }
    for pol in [Polarization::Extraordinary, Polarization::Ordinary] {
        if let Some(r) = set.ring_radius(ls, pol) {
            manifest.derive(&format!("ring_radius_{}_mm", pol.label()), r);
        }
    }
    if set.points.is_empty() {
        manifest
            .warnings
            .push("no phase-matched emission for this geometry".into());
    }

    let mut table = Table::new(&[
        "lambda_s_um",
        "phi_rad",
        "theta_ext_rad",
        "x_mm",
        "y_mm",
        "weight",
        "branch",
    ]);
    for p in &set.points {
        let mut row: Vec<String> = [
            p.lambda_s_um,
            p.azimuth,
            p.polar_external,
            p.x_mm,
            p.y_mm,
            p.weight,
        ]
        .map(fmt_f64)
        .to_vec();
        row.push(p.branch.label().to_string());
        table.push(row);
    }
    Ok(output(table, manifest, summary))
}

pub fn shg(res: &mut Resolver, crystal: &UniaxialCrystal, a: &ShgArgs) -> CmdResult {
    let l1 = res.f64("lambda1", a.lambda1, 0.8)?;
    let l2 = res.f64("lambda2", a.lambda2, l1)?;
    let lambda1 = wavelength("lambda1", l1)?;
    let lambda2 = wavelength("lambda2", l2)?;
    let lambda3 = wavelength("lambda3", 1.0 / (1.0 / l1 + 1.0 / l2))?;
    for l in [lambda1, lambda2, lambda3] {
        crystal.check_wavelength(l)?;
    }
    let theta = match res.opt_f64("theta", a.theta)? {
        Some(deg) => deg.to_radians(),
        None => solve_collinear(crystal, PhaseMatchType::TypeI, lambda3, lambda1)?.theta_cut,
    };
    let n1 = res.f64("n1", a.n1, crystal.index_ordinary(lambda1)?)?;
    let n2 = res.f64("n2", a.n2, crystal.index_ordinary(lambda2)?)?;
    let n3 = res.f64("n3", a.n3, crystal.index_extraordinary(lambda3, theta)?)?;
    let i1 = res.f64("i1", a.i1, 1e12)?;
    let i2 = res.f64("i2", a.i2, 1e12)?;
    let d_eff = res.f64("d_eff", a.d_eff, 2.0)? * 1e-12;
    let length = positive("length", res.f64("length", a.length, 1.0)?)? * 1e-3;
    let dk_max = res.f64("dk_max", a.dk_max, 6.0 * PI / length)?;
    let points = at_least("points", res.usize("points", a.points, 241)?, 2)?;
    if dk_max <= 0.0 {
        return Err(CliError::invalid("dk_max must be positive"));
    }

    let mut params = ShgParams {
        i1,
        i2,
        omega3: lambda3.angular_frequency(),
        n1,
        n2,
        n3,
        d_eff,
        length_m: length,
        delta_k: 0.0,
    };
    params.validate()?;
    let peak = params.peak_intensity();
    let mut manifest = RunManifest::default();
    manifest.derive("theta_deg", theta.to_degrees());
    manifest.derive("lambda3_um", lambda3.um());
    manifest.derive("i3_max_w_per_m2", peak);

    let mut table = Table::new(&["delta_k_per_m", "half_phase", "I3_w_per_m2", "relative"]);
    for dk in linspace(-dk_max, dk_max, points) {
        params.delta_k = dk;
        let i3 = shg_intensity(&params);
        let rel = if peak > 0.0 { i3 / peak } else { 0.0 };
        table.push_f64(&[dk, 0.5 * dk * length, i3, rel]);
    }
    let summary = vec![format!(
        "I3_max = {peak:.6e} W/m^2 at theta = {:.4} deg",
        theta.to_degrees()
    )];
    Ok(output(table, manifest, summary))
}

pub fn gain(res: &mut Resolver, crystal: &UniaxialCrystal, a: &GainArgs) -> CmdResult {
    let lp = res.f64("lambda_p", a.lambda_p, 0.4)?;
    let lambda_p = wavelength("lambda_p", lp)?;
    let lambda_s = wavelength("lambda_s", res.f64("lambda_s", a.lambda_s, 2.0 * lp)?)?;
    let lambda_i = Wavelength::complement(lambda_p, lambda_s)?;
    for l in [lambda_p, lambda_s, lambda_i] {
        crystal.check_wavelength(l)?;
    }
    let n1 = positive(
        "n1",
        res.f64("n1", a.n1, crystal.index_ordinary(lambda_s)?)?,
    )?;
    let n2 = positive(
        "n2",
        res.f64("n2", a.n2, crystal.index_ordinary(lambda_i)?)?,
    )?;
    let d_eff = res.f64("d_eff", a.d_eff, 2.0)? * 1e-12;
    let pump = res.f64("pump_field", a.pump_field, 5e7)?;
    let a1 = res.f64("a1", a.a1, 1.0)?;
    let a2 = res.f64("a2", a.a2, 0.0)?;
    let dk = res.f64("dk", a.dk, 0.0)?;
    let length = res.f64("length", a.length, 1.0)? * 1e-3;
    let steps = at_least("steps", res.usize("steps", a.steps, 1000)?, 1)?;
    if length < 0.0 {
        return Err(CliError::invalid("length must be non-negative"));
    }

    let mix = ThreeWaveMixing {
        omega1: lambda_s.angular_frequency(),
        omega2: lambda_i.angular_frequency(),
        n1,
        n2,
        d_eff,
        delta_k: dk,
    };
    let a3 = Complex64::new(pump, 0.0);
    let (a1c, a2c) = (Complex64::new(a1, 0.0), Complex64::new(a2, 0.0));
    let traj = integrate_coupled(&mix, a1c, a2c, a3, length, steps)?;
    let defects = flux_defects(&traj, mix.omega1, mix.omega2, n1, n2);
    let max_defect = manley_rowe_defect(&traj, mix.omega1, mix.omega2, n1, n2)?;

    let mut manifest = RunManifest::default();
    let alpha = mix.gain_rate(a3);
    manifest.derive("gain_rate_per_m", alpha);
    manifest.derive("alpha_z", alpha * length);
    manifest.derive("manley_rowe_defect", max_defect);
    if dk == 0.0 && a2 == 0.0 && pump != 0.0 {
        let (e1, _) = parametric_gain_analytic(&mix, a1c, a3, length)?;
        let end = traj.last().expect("trajectory has steps + 1 points");
        if e1.norm() > 0.0 {
            manifest.derive("analytic_rel_error_a1", (end.a1 - e1).norm() / e1.norm());
        }
    }

    let mut table = Table::new(&[
        "z_m",
        "re_a1",
        "im_a1",
        "re_a2",
        "im_a2",
        "I1",
        "I2",
        "flux_defect",
    ]);
    for (p, d) in traj.iter().zip(defects) {
        table.push_f64(&[
            p.z,
            p.a1.re,
            p.a1.im,
            p.a2.re,
            p.a2.im,
            intensity(n1, p.a1),
            intensity(n2, p.a2),
            d,
        ]);
    }
    let summary = vec![format!(
        "alpha = {alpha:.6e} 1/m, alpha*z = {:.6}, Manley-Rowe defect {max_defect:.3e}",
        alpha * length
    )];
    Ok(output(table, manifest, summary))
}

fn pairs_mode(a: &PairsArgs) -> Result<PairsMode, CliError> {
    let mut modes: Vec<PairsMode> = a.mode.into_iter().collect();
    for (flag, mode) in [
        (a.stats, PairsMode::Stats),
        (a.g2, PairsMode::G2),
        (a.hom, PairsMode::Hom),
        (a.chsh, PairsMode::Chsh),
        (a.fringe, PairsMode::Fringe),
    ] {
        if flag && !modes.contains(&mode) {
            modes.push(mode);
        }
    }
    match modes.as_slice() {
        [m] => Ok(*m),
        [] => Err(CliError::invalid(
            "pairs needs one mode: stats, g2, hom, chsh or fringe",
        )),
        _ => Err(CliError::invalid("pairs accepts only one mode per run")),
    }
}

fn parse_r_values(text: &str) -> Result<Vec<f64>, CliError> {
    let values: Vec<f64> = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::invalid(format!("r_values: `{t}` is not a number")))
        })
        .collect::<Result<_, _>>()?;
    if values.is_empty() || values.iter().any(|r| !(*r >= 0.0 && r.is_finite())) {
        return Err(CliError::invalid("r_values must be non-negative numbers"));
    }
    Ok(values)
}

pub fn pairs(res: &mut Resolver, a: &PairsArgs) -> CmdResult {
    let mode = pairs_mode(a)?;
    res.string(
        "mode",
        Some(match mode {
            PairsMode::Stats => "stats",
            PairsMode::G2 => "g2",
            PairsMode::Hom => "hom",
            PairsMode::Chsh => "chsh",
            PairsMode::Fringe => "fringe",
        }),
        "",
    );
    match mode {
        PairsMode::Stats | PairsMode::G2 => pair_sweep(res, a, mode),
        PairsMode::Hom => hom(res, a),
        PairsMode::Chsh => chsh(res, a),
        PairsMode::Fringe => fringe_scan(res, a),
    }
}

fn pair_sweep(res: &mut Resolver, a: &PairsArgs, mode: PairsMode) -> CmdResult {
    let default_r = match mode {
        PairsMode::Stats => "0,0.05,0.1,0.2,0.3,0.5",
        _ => "0.05,0.1,0.2,0.3,0.5",
    };
    let r_values = parse_r_values(&res.string("r_values", a.r_values.as_deref(), default_r))?;
    let n_max = at_least("n_max", res.usize("n_max", a.n_max, DEFAULT_N_MAX)?, 3)?;
    let order = at_least(
        "order",
        res.usize("order", a.order, DEFAULT_SERIES_ORDER)?,
        1,
    )?;

    let mut manifest = RunManifest::default();
    let mut table = Table::new(&["r", "p0", "p1", "p2", "p3", "g2"]);
    let mut g2s = Vec::new();
    for &r in &r_values {
        let state = spdc_evolve(r, n_max, order)?;
        if let Some(w) = state.truncation_warning() {
            manifest.warnings.push(w.to_string());
        }
        let p = pair_statistics(&state)?;
        let g2 = heralded_g2(&state).unwrap_or(f64::NAN);
        if g2.is_finite() {
            g2s.push(g2);
        }
        table.push_f64(&[r, p[0], p[1], p[2], p[3], g2]);
    }
    let monotone = g2s.windows(2).all(|w| w[1] > w[0]);
    manifest.derive("g2_strictly_increasing", monotone);
    let summary = vec![format!(
        "{} r values, n_max = {n_max}, order = {order}",
        r_values.len()
    )];
    Ok(output(table, manifest, summary))
}

fn hom(res: &mut Resolver, a: &PairsArgs) -> CmdResult {
    let sigma = positive(
        "coherence_time",
        res.f64("coherence_time", a.coherence_time, 1e-12)?,
    )?;
    let vis = res.f64("visibility", a.visibility, 1.0)?;
    let tmin = res.f64("tau_min", a.tau_min, -3.0 * sigma)?;
    let tmax = res.f64("tau_max", a.tau_max, 3.0 * sigma)?;
    let points = at_least("points", res.usize("points", a.points, 121)?, 2)?;
    if tmin.partial_cmp(&tmax) != Some(std::cmp::Ordering::Less) {
        return Err(CliError::invalid("tau_min must be below tau_max"));
    }
    let taus = linspace(tmin, tmax, points);
    let curve = hom_dip_curve(&taus, sigma, vis)?;

    let mut manifest = RunManifest::default();
    let (imin, pmin) = curve
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .map(|(i, p)| (i, *p))
        .expect("at least two points");
    manifest.derive("min_tau_s", taus[imin]);
    manifest.derive("min_p_coincidence", pmin);
    manifest.derive("indistinguishable_p_coincidence", hom_bunching(1.0)?);
    manifest.derive("distinguishable_p_coincidence", hom_bunching(0.0)?);

    let mut table = Table::new(&["tau_s", "p_coincidence"]);
    for (t, p) in taus.iter().zip(&curve) {
        table.push_f64(&[*t, *p]);
    }
    let summary = vec![format!("HOM dip minimum {pmin} at tau = {} s", taus[imin])];
    Ok(output(table, manifest, summary))
}

fn chsh(res: &mut Resolver, a: &PairsArgs) -> CmdResult {
    let phi = res.angle_rad("phi", a.phi.as_deref(), PI)?;
    let aa = res.f64("a", a.a, 0.0)?;
    let ap = res.f64("a_prime", a.a_prime, 45.0)?;
    let bb = res.f64("b", a.b, 22.5)?;
    let bp = res.f64("b_prime", a.b_prime, 67.5)?;
    let state = bell_state(phi);
    let s = chsh_s(
        &state,
        aa.to_radians(),
        ap.to_radians(),
        bb.to_radians(),
        bp.to_radians(),
    );
    let mut manifest = RunManifest::default();
    manifest.derive("S", s);
    manifest.derive("violates_local_bound", s > 2.0);
    let mut table = Table::new(&[
        "phi_rad",
        "a_deg",
        "a_prime_deg",
        "b_deg",
        "b_prime_deg",
        "S",
    ]);
    table.push_f64(&[phi, aa, ap, bb, bp, s]);
    Ok(output(table, manifest, vec![format!("S = {s:.9}")]))
}

fn fringe_scan(res: &mut Resolver, a: &PairsArgs) -> CmdResult {
    let phi = res.angle_rad("phi", a.phi.as_deref(), PI)?;
    let aa = res.f64("a", a.a, 0.0)?;
    let bmin = res.f64("b_min", a.b_min, 0.0)?;
    let bmax = res.f64("b_max", a.b_max, 180.0)?;
    let points = at_least("points", res.usize("points", a.points, 181)?, 2)?;
    if bmin.partial_cmp(&bmax) != Some(std::cmp::Ordering::Less) {
        return Err(CliError::invalid("b_min must be below b_max"));
    }
    let mut manifest = RunManifest::default();
    if bmax - bmin < 90.0 {
        manifest
            .warnings
            .push("analyzer scan shorter than one fringe period (90 deg)".into());
    }
    let grid: Vec<f64> = linspace(bmin, bmax, points)
        .into_iter()
        .map(f64::to_radians)
        .collect();
    let state = bell_state(phi);
    let samples = fringe(&state, aa.to_radians(), &grid);
    let v = fringe_visibility(&samples)?;
    manifest.derive("visibility", v);
    let mut table = Table::new(&["b_rad", "p_coincidence"]);
    for (b, p) in grid.iter().zip(&samples) {
        table.push_f64(&[*b, *p]);
    }
    Ok(output(
        table,
        manifest,
        vec![format!("visibility = {v:.9}")],
    ))
}
