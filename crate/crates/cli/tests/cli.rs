use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_fluctua");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("FLUCTUA_PRESET_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_config(dir: &Path, name: &str, json: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, json).unwrap();
    path.to_str().unwrap().to_string()
}

/// Rows of a two-column CSV, skipping the header and comments.
fn rows(csv: &str) -> Vec<(f64, String)> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.to_string())
        })
        .collect()
}

fn log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

const BULK_INFINITE: &str = r#"{"params": {"a0": 1, "Tc": 1, "b": 1, "u0": 0.5, "xi0": 1, "d": 3, "L": "inf"}}"#;

#[test]
fn critical_toy3d_is_below_tc() {
    let json: serde_json::Value = serde_json::from_str(&stdout(&run(&["critical", "--preset", "toy3d"]))).unwrap();
    let t_star = json["T_star"].as_f64().unwrap();
    assert!(t_star < json["Tc"].as_f64().unwrap());
    for key in ["omega_c", "width", "eq30_residual", "nu_d"] {
        assert!(json[key].is_f64(), "{key}");
    }
}

#[test]
fn critical_limits_are_unshifted() {
    let dir = tempfile::tempdir().unwrap();
    let inf = write_config(dir.path(), "inf.json", BULK_INFINITE);
    let free = write_config(
        dir.path(),
        "free.json",
        r#"{"params": {"a0": 1, "Tc": 2, "b": 1, "u0": 0, "xi0": 1, "d": 3, "L": 10}}"#,
    );
    for (cfg, tc) in [(inf, 1.0), (free, 2.0)] {
        let json: serde_json::Value = serde_json::from_str(&stdout(&run(&["critical", "--config", &cfg]))).unwrap();
        assert_eq!(json["T_star"].as_f64().unwrap(), tc);
        assert_eq!(json["width"].as_f64().unwrap(), 0.0);
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["critical", "--preset", "cuprate"],
        vec!["sweep", "--preset", "toy3d", "--observable", "chi", "--grid", "0.9,1.1,41"],
        vec!["sweep", "--preset", "toy3d", "--observable", "psi0", "--grid", "0.9,1.1,41"],
        vec!["film", "--preset", "thinfilm-ferroelectric", "--grid", "1,50,20"],
        vec!["paracond", "--preset", "toy3d", "--dim", "3", "--grid", "1.0,1.5,20"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let mut files = Vec::new();
        for rep in 0..2 {
            let out = dir.path().join(format!("{i}-{rep}.out"));
            let mut full = args.clone();
            let out_str = out.to_str().unwrap().to_string();
            full.extend(["--out", &out_str]);
            stdout(&run(&full));
            files.push(std::fs::read(&out).unwrap());
        }
        assert!(!files[0].is_empty());
        assert_eq!(files[0], files[1], "{args:?}");
    }
}

#[test]
fn exit_codes_follow_the_contract() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| run(args).status.code().unwrap();

    assert_eq!(code(&["sweep", "--preset", "toy3d", "--observable", "chi", "--grid", "2,1,5"]), 2);
    assert_eq!(code(&["sweep", "--preset", "toy3d", "--observable", "nope", "--grid", "1,2,5"]), 2);
    assert_eq!(code(&["critical", "--preset", "no-such-preset"]), 2);
    assert_eq!(code(&["critical"]), 2);
    let unknown = write_config(dir.path(), "unknown.json", r#"{"preset": "toy3d", "colour": 1}"#);
    assert_eq!(code(&["critical", "--config", &unknown]), 2);

    let stiff = write_config(dir.path(), "stiff.json", r#"{"preset": "toy3d", "settings": {"max_iter": 1}}"#);
    let out = run(&["critical", "--config", &stiff]);
    assert_eq!(out.status.code(), Some(3));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["kind"], "solver");

    assert_eq!(code(&["critical", "--config", "/nonexistent/config.json"]), 4);
    assert_eq!(code(&["critical", "--preset", "toy3d", "--out", "/nonexistent/dir/out.json"]), 4);
}

#[test]
fn film_rows_cover_pi_asymptote_and_no_transition() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "film.json",
        &format!(
            r#"{{"preset": "thinfilm-ferroelectric", "l0_values": [2.0, {}, 10.0, 100.0, 1000000.0]}}"#,
            std::f64::consts::PI
        ),
    );
    let text = stdout(&run(&["film", "--config", &cfg]));
    assert!(text.starts_with("l0,T_star_film\n"));
    let r = rows(&text);
    assert_eq!(r[0].1, "NO_TRANSITION");
    assert_eq!(r[1].1.parse::<f64>().unwrap(), 0.0);

    let crit: serde_json::Value =
        serde_json::from_str(&stdout(&run(&["critical", "--preset", "thinfilm-ferroelectric"]))).unwrap();
    let t_star = crit["T_star"].as_f64().unwrap();
    let far: f64 = r[4].1.parse().unwrap();
    assert!(((far - t_star) / t_star).abs() < 1e-7);

    let values: Vec<f64> = r[1..].iter().map(|(_, v)| v.parse().unwrap()).collect();
    assert!(values.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn sweep_omega_at_infinite_volume_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "inf.json", BULK_INFINITE);
    let text = stdout(&run(&["sweep", "--config", &cfg, "--observable", "omega", "--grid", "0.5,1.5,11"]));
    let r = rows(&text);
    assert_eq!(r.len(), 11);
    assert!(r.iter().all(|(_, v)| v.parse::<f64>().unwrap() == 0.0));
}

#[test]
fn empty_cells_get_a_warnings_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "inf.json", BULK_INFINITE);
    let out = dir.path().join("theta.csv");
    let out_str = out.to_str().unwrap();
    stdout(&run(&[
        "sweep", "--config", &cfg, "--observable", "theta", "--grid", "0.5,1.5,3", "--out", out_str,
    ]));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().nth(1).unwrap(), "0.5,");
    let warnings = std::fs::read_to_string(dir.path().join("theta.csv.warnings")).unwrap();
    assert!(warnings.starts_with("T=0.5:"));
}

#[test]
fn chi_sweep_fits_gamma_one() {
    let crit: serde_json::Value =
        serde_json::from_str(&stdout(&run(&["critical", "--preset", "conventional-sc"]))).unwrap();
    let (t_star, tc) = (crit["T_star"].as_f64().unwrap(), crit["Tc"].as_f64().unwrap());
    let grid = format!("{},{},200", t_star + tc * 1e-4, t_star + tc * 1e-2);
    let text = stdout(&run(&[
        "sweep", "--preset", "conventional-sc", "--observable", "chi", "--grid", &grid,
    ]));
    let pts: Vec<(f64, f64)> = rows(&text)
        .into_iter()
        .map(|(t, v)| ((t - t_star) / tc, v.parse().unwrap()))
        .collect();
    let gamma = -log_slope(&pts);
    assert!((gamma - 1.0).abs() < 0.01, "γ = {gamma}");
}

#[test]
fn paracond_d2_product_is_constant_without_fluctuations() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "film.json",
        r#"{"params": {"a0": 1, "Tc": 1, "b": 1, "u0": 1, "xi0": 1, "d": 2, "L": "inf"},
            "geometry": {"kind": "film", "thickness": 2.0}}"#,
    );
    let text = stdout(&run(&["paracond", "--config", &cfg, "--dim", "2", "--grid", "1.01,2,25"]));
    assert!(text.starts_with("# aleph_2 = 0.0625\n"));
    let want = 1.0 / (16.0 * 2.0);
    for (eps, sigma) in rows(&text) {
        let product = eps * sigma.parse::<f64>().unwrap();
        assert!(((product - want) / want).abs() < 1e-12, "{product}");
    }
}

#[test]
fn paracond_slopes_match_dimension() {
    let dir = tempfile::tempdir().unwrap();
    for (dim, slope) in [(3, -0.5), (1, -1.5)] {
        let cfg = write_config(
            dir.path(),
            &format!("d{dim}.json"),
            &format!(r#"{{"params": {{"a0": 1, "Tc": 1, "b": 1, "u0": 1, "xi0": 1, "d": {dim}, "L": "inf"}}}}"#),
        );
        let text = stdout(&run(&["paracond", "--config", &cfg, "--dim", &dim.to_string(), "--grid", "1.0001,1.01,30"]));
        let pts: Vec<(f64, f64)> = rows(&text).into_iter().map(|(e, s)| (e, s.parse().unwrap())).collect();
        let fitted = log_slope(&pts);
        assert!((fitted - slope).abs() < 0.01, "d = {dim}: {fitted}");
    }
}

#[test]
fn paracond_rejects_grid_at_or_below_t_star() {
    let out = run(&["paracond", "--preset", "toy3d", "--dim", "3", "--grid", "0.5,1.5,5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("T*_c"));
}

#[test]
fn oracle_default_passes_and_mutation_fails() {
    let report: serde_json::Value = serde_json::from_str(&stdout(&run(&["oracle"]))).unwrap();
    assert_eq!(report["all_passed"], true);

    let dir = tempfile::tempdir().unwrap();
    let bad = write_config(dir.path(), "bad.json", r#"{"oracle": {"aleph": [null, null, 0.03333333333333333]}}"#);
    let out = run(&["oracle", "--config", &bad]);
    assert_ne!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let failed: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, vec!["paraconductivity_consistency_d3"]);
}

#[test]
fn oracle_without_coupling_reports_exact_decoupling() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "free.json", r#"{"oracle": {"few_mode": {"u0": 0.0}}}"#);
    let report: serde_json::Value = serde_json::from_str(&stdout(&run(&["oracle", "--config", &cfg]))).unwrap();
    let check = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "few_mode_decoupling")
        .unwrap()
        .clone();
    assert!(check["max_rel_error"].as_f64().unwrap() < 1e-8, "{check}");
}

#[test]
fn preset_dir_adds_and_overrides_presets() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("mine.json"),
        r#"{"name": "mine", "params": {"a0": 1, "Tc": 5, "b": 1, "u0": 0, "xi0": 1, "d": 3, "L": 10}, "target_width": 0.5}"#,
    )
    .unwrap();
    let out = Command::new(BIN)
        .args(["presets", "list"])
        .env("FLUCTUA_PRESET_DIR", dir.path())
        .output()
        .unwrap();
    let text = stdout(&out);
    let names: Vec<&str> = text.lines().map(|l| l.split('\t').next().unwrap()).collect();
    assert_eq!(names, vec!["conventional-sc", "cuprate", "mine", "thinfilm-ferroelectric", "toy3d"]);

    let out = Command::new(BIN)
        .args(["critical", "--preset", "mine"])
        .env("FLUCTUA_PRESET_DIR", dir.path())
        .output()
        .unwrap();
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["T_star"].as_f64().unwrap(), 5.0);
}
