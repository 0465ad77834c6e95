use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn spdc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spdc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of an inline CSV (comment lines and header removed).
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn header(text: &str) -> String {
    text.lines()
        .find(|l| !l.starts_with('#'))
        .unwrap()
        .to_string()
}

fn manifest_value(text: &str, key: &str) -> Option<String> {
    text.lines()
        .map(|l| l.trim_start_matches("# "))
        .find_map(|l| l.strip_prefix(&format!("{key} = ")).map(str::to_string))
}

fn dir_entries(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    v.sort();
    v
}

const RUNS: &[&[&str]] = &[
    &["indices"],
    &["match"],
    &[
        "match",
        "--type",
        "type2-eo",
        "--lambda-p",
        "0.405",
        "--external-angle",
        "3",
        "--azimuth",
        "90",
    ],
    &["cones", "--azimuth-points", "90"],
    &["shg", "--points", "41"],
    &["gain", "--steps", "200"],
    &["pairs", "stats"],
    &["pairs", "--g2"],
    &["pairs", "--hom"],
    &["pairs", "--chsh", "--phi", "pi"],
    &["pairs", "fringe"],
];

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for (k, args) in RUNS.iter().enumerate() {
        let a = spdc(args);
        let b = spdc(args);
        assert!(
            a.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&a.stderr)
        );
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.stderr, b.stderr, "{args:?}");

        let out = dir.path().join(format!("run{k}.csv"));
        let out_s = out.to_str().unwrap();
        let mut with_out: Vec<&str> = vec!["--out", out_s];
        with_out.extend_from_slice(args);
        assert!(spdc(&with_out).status.success());
        let first = (
            fs::read(&out).unwrap(),
            fs::read(format!("{out_s}.manifest")).unwrap(),
        );
        assert!(spdc(&with_out).status.success());
        let second = (
            fs::read(&out).unwrap(),
            fs::read(format!("{out_s}.manifest")).unwrap(),
        );
        assert_eq!(first, second, "{args:?}");
    }
}

#[test]
fn file_output_layout() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("idx.csv");
    let o = spdc(&["--out", out.to_str().unwrap(), "indices", "--points", "10"]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let csv = fs::read_to_string(&out).unwrap();
    assert!(
        csv.starts_with("# manifest: idx.csv.manifest\nlambda_um,n_o,n_e_principal,n_e_theta\n")
    );
    let manifest = fs::read_to_string(dir.path().join("idx.csv.manifest")).unwrap();
    assert!(manifest.starts_with("# spdc run manifest\n"));
    assert!(manifest.contains("command = indices\n"));
    assert!(manifest.contains("points = 10\n"));
    assert!(manifest.contains("crystal = BBO\n"));
    assert!(!csv.contains('\r'));
    assert_eq!(dir_entries(dir.path()), vec!["idx.csv", "idx.csv.manifest"]);
}

#[test]
fn invalid_inputs_exit_2_without_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bad.csv");
    let o = out.to_str().unwrap();
    let missing_cfg = dir.path().join("nope.cfg");
    let bad_cfg = dir.path().join("bad.cfg");
    fs::write(&bad_cfg, "lambda_p = banana\n").unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec![
            "--out",
            o,
            "match",
            "--lambda-p",
            "0.4",
            "--lambda-s",
            "0.41",
        ],
        vec!["--out", o, "match", "--lambda-p", "5"],
        vec!["--out", o, "match", "--type", "type3"],
        vec![
            "--out",
            o,
            "match",
            "--signal-angle",
            "2",
            "--external-angle",
            "3",
        ],
        vec!["--out", o, "match", "--signal-angle", "20"],
        vec![
            "--out",
            o,
            "indices",
            "--lambda-min",
            "1.0",
            "--lambda-max",
            "0.5",
        ],
        vec!["--out", o, "indices", "--lambda-min", "0.1"],
        vec!["--out", o, "cones", "--distance", "-1"],
        vec!["--out", o, "cones", "--theta-cut", "95"],
        vec!["--out", o, "shg", "--length", "0"],
        vec!["--out", o, "gain", "--steps", "0"],
        vec!["--out", o, "pairs"],
        vec!["--out", o, "pairs", "hom", "--chsh"],
        vec!["--out", o, "pairs", "stats", "--r-values", "0.1,-2"],
        vec!["--out", o, "pairs", "hom", "--coherence-time", "0"],
        vec!["--out", o, "pairs", "chsh", "--phi", "pie"],
        vec!["--out", o, "--crystal", "unobtainium", "indices"],
        vec![
            "--out",
            o,
            "--config",
            missing_cfg.to_str().unwrap(),
            "indices",
        ],
        vec!["--out", o, "--config", bad_cfg.to_str().unwrap(), "indices"],
        vec!["--out", o, "indices", "--points", "abc"],
        vec!["--out", o, "frobnicate"],
    ];
    for args in cases {
        let r = spdc(&args);
        assert_eq!(
            r.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&r.stderr)
        );
        assert!(!r.stderr.is_empty());
        let left: Vec<String> = dir_entries(dir.path())
            .into_iter()
            .filter(|n| n.starts_with("bad.csv"))
            .collect();
        assert!(left.is_empty(), "{args:?} left {left:?}");
    }
}

#[test]
fn unreachable_match_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let r = spdc(&[
        "--out",
        out.to_str().unwrap(),
        "match",
        "--lambda-p",
        "0.2",
        "--lambda-s",
        "0.4",
    ]);
    assert_eq!(r.status.code(), Some(3));
    assert!(dir_entries(dir.path()).is_empty());
}

#[test]
fn unwritable_output_exits_2() {
    let r = spdc(&["--out", "/nonexistent-dir/x.csv", "indices"]);
    assert_eq!(r.status.code(), Some(2));
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(spdc(&["--help"]).status.code(), Some(0));
    assert_eq!(spdc(&["--version"]).status.code(), Some(0));
}

#[test]
fn indices_columns() {
    let o = spdc(&["indices", "--theta", "90"]);
    for row in rows(&stdout(&o)) {
        assert_eq!(row[2], row[3]);
    }
    let o = spdc(&["indices", "--theta", "0"]);
    let data = rows(&stdout(&o));
    for row in &data {
        assert_eq!(row[1], row[3]);
    }
    let n_o: Vec<(f64, f64)> = data
        .iter()
        .map(|r| (r[0].parse().unwrap(), r[1].parse().unwrap()))
        .filter(|(l, _)| (0.4..=1.0).contains(l))
        .collect();
    assert!(n_o.windows(2).all(|w| w[1].1 < w[0].1));
}

#[test]
fn match_reports_type1_angle() {
    let o = spdc(&["match"]);
    let text = stdout(&o);
    assert!(header(&text).starts_with("type,lambda_p_um"));
    let row = &rows(&text)[0];
    assert_eq!(row[0], "type1");
    let theta: f64 = row[4].parse().unwrap();
    assert!((theta - 29.0).abs() < 0.1);
}

#[test]
fn match_three_degree_type2_residual() {
    let o = spdc(&[
        "match",
        "--type",
        "type2-eo",
        "--lambda-p",
        "0.405",
        "--external-angle",
        "3",
        "--azimuth",
        "90",
    ]);
    assert!(o.status.success());
    let row = &rows(&stdout(&o))[0];
    let residual: f64 = row[10].parse().unwrap();
    assert!(residual < 1e-10);
    let ext: f64 = row[8].parse().unwrap();
    assert!((ext - 3.0).abs() < 1e-9);
}

#[test]
fn cones_report_two_intersections() {
    let o = spdc(&["cones"]);
    let text = stdout(&o);
    assert_eq!(
        manifest_value(&text, "intersection_count").as_deref(),
        Some("2")
    );
    assert_eq!(
        header(&text),
        "lambda_s_um,phi_rad,theta_ext_rad,x_mm,y_mm,weight,branch"
    );
}

#[test]
fn hom_minimum_at_zero_delay() {
    let text = stdout(&spdc(&["pairs", "--hom"]));
    let data: Vec<(f64, f64)> = rows(&text)
        .iter()
        .map(|r| (r[0].parse().unwrap(), r[1].parse().unwrap()))
        .collect();
    let min = data.iter().min_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
    assert_eq!(min.0, 0.0);
}

#[test]
fn chsh_field_value() {
    let text = stdout(&spdc(&["pairs", "--chsh", "--phi", "pi"]));
    let s: f64 = rows(&text)[0][5].parse().unwrap();
    assert!((s - 2.828427).abs() < 1e-6);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(
        &cfg,
        "# pump\nlambda-p = 0.41\npoints = 5\nunused_key = 1\n",
    )
    .unwrap();
    let c = cfg.to_str().unwrap();
    let text = stdout(&spdc(&["--config", c, "indices"]));
    assert_eq!(manifest_value(&text, "lambda_p").as_deref(), Some("0.41"));
    assert!(text.contains("unused_key"));
    let text = stdout(&spdc(&["--config", c, "indices", "--lambda-p", "0.45"]));
    assert_eq!(manifest_value(&text, "lambda_p").as_deref(), Some("0.45"));
}

#[test]
fn floats_round_trip_through_csv() {
    let text = stdout(&spdc(&["gain", "--steps", "50"]));
    for row in rows(&text) {
        for field in row {
            let v: f64 = field.parse().unwrap();
            assert_eq!(format!("{v}").parse::<f64>().unwrap(), v);
        }
    }
}

#[test]
fn custom_crystal_file_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bbo_copy.txt");
    fs::write(
        &path,
        "b0_o = 2.7405\nc_num_o = 0.0184\nc_pole_o = 0.0179\ne_quad_o = 0.0155\n\
         b0_e = 2.3730\nc_num_e = 0.0128\nc_pole_e = 0.0156\ne_quad_e = 0.0044\n\
         d11 = 0.16\nd22 = 2.2\nlambda_min = 0.19\nlambda_max = 3.3\n",
    )
    .unwrap();
    let a = spdc(&["--crystal", path.to_str().unwrap(), "match"]);
    let b = spdc(&["match"]);
    assert!(a.status.success());
    assert_eq!(rows(&stdout(&a)), rows(&stdout(&b)));
}
