use std::path::Path;
use std::process::{Command, Output};

use a2g_los::analytic::McdSearch;
use a2g_los::approx::{FIVE_GCM, THREE_GPP};
use a2g_los::fit::FitDataset;
use a2g_los::rt_sim::Scene;
use a2g_los::{p_los_approx, p_los_baseline, Environment, LinkGeometry, LosModel, Mlp};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_a2g-los"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = bin(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Data rows (non-comment, after the header) split into fields.
fn rows(text: &str) -> (String, Vec<Vec<f64>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().to_string();
    let data = lines
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect();
    (header, data)
}

fn summary<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix("# ")?.strip_prefix(key)?.strip_prefix(','))
        .unwrap_or_else(|| panic!("no '{key}' summary"))
}

#[test]
fn analytic_grid_header_and_mcd() {
    let text = stdout(&[
        "analytic",
        "--scenario",
        "high-rise",
        "--htx",
        "30",
        "--hrx",
        "1.5",
        "--f-ghz",
        "6",
        "--mcd",
        "0.6",
    ]);
    assert!(text.starts_with("# a2g-los "));
    let first = text.lines().next().unwrap();
    for key in [
        "analytic",
        "alpha=0.5",
        "beta=300",
        "gamma=50",
        "f_ghz=6",
        "htx=30",
        "hrx=1.5",
        "mcd=0.6",
    ] {
        assert!(first.contains(key), "{key} missing from {first}");
    }
    let (header, data) = rows(&text);
    assert_eq!(header, "d,p_los");
    assert_eq!(data.len(), 1001);
    let mcd: f64 = summary(&text, "mcd_m").parse().unwrap();
    let env = Environment::new(0.5, 300.0, 50.0).unwrap();
    let spec = a2g_los::FresnelSpec::from_frequency(6e9).unwrap();
    let want = LosModel::new(env, spec)
        .max_comm_distance(30.0, 1.5, 0.6, &McdSearch::default())
        .unwrap();
    assert_eq!(Some(mcd), want);
}

#[test]
fn analytic_reduces_to_baseline() {
    let text = stdout(&[
        "analytic", "--alpha", "0.3", "--beta", "500", "--gamma", "15", "--width", "0", "--f-inf", "--htx", "70",
        "--d", "1:1000:7",
    ]);
    let env = Environment::new(0.3, 500.0, 15.0).unwrap();
    for r in rows(&text).1 {
        let base = p_los_baseline(&LinkGeometry::new(70.0, 1.5, r[0]).unwrap(), &env);
        assert!((r[1] - base).abs() <= 1e-12);
    }
}

#[test]
fn analytic_elevation_mode() {
    let text = stdout(&[
        "analytic",
        "--scenario",
        "urban",
        "--htx",
        "500",
        "--hrx",
        "2",
        "--elevation",
        "5:85:5",
        "--mcd",
        "0.6",
    ]);
    let (header, data) = rows(&text);
    assert_eq!(header, "theta_deg,p_los");
    assert_eq!(data.len(), 17);
    let theta: f64 = summary(&text, "theta_threshold_deg").parse().unwrap();
    assert!((25.0..=40.0).contains(&theta));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["analytic", "--scenario", "atlantis"][..],
        &["analytic", "--d", "0:10"],
        &["analytic", "--d", "10:0:1"],
        &["analytic", "--mcd", "1.0"],
        &[
            "analytic",
            "--scenario",
            "urban",
            "--alpha",
            "0.3",
            "--beta",
            "1",
            "--gamma",
            "1",
        ],
        &["simulate", "--realizations", "0"],
        &["bogus"],
    ] {
        assert_eq!(bin(args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(bin(&["--help"]).status.code(), Some(0));
}

#[test]
fn runtime_error_exit_1_leaves_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sim.csv");
    let o = bin(&[
        "simulate",
        "--d",
        "100:400:100",
        "--extent",
        "500",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceeds half the scene extent"));
    assert!(std::fs::read_dir(dir.path()).unwrap().next().is_none());
}

#[test]
fn custom_scenario_table() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("s.txt");
    std::fs::write(&table, "# mine\nvillage 0.05 100 6\n").unwrap();
    let t = table.to_str().unwrap();
    let text = stdout(&["analytic", "--scenario-file", t, "--scenario", "village", "--d", "500"]);
    assert!(text.lines().next().unwrap().contains("alpha=0.05"));
    assert_eq!(
        bin(&["analytic", "--scenario-file", t, "--scenario", "urban"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn scene_dump_matches_building_count() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("scene.csv");
    let text = stdout(&[
        "simulate",
        "--scenario",
        "urban",
        "--realizations",
        "1",
        "--links-per-ring",
        "8",
        "--seed",
        "1",
        "--d",
        "100:300:100",
        "--dump-scene",
        dump.to_str().unwrap(),
    ]);
    let (header, data) = rows(&text);
    assert_eq!(header, "d,p_sim,ci_halfwidth");
    assert_eq!(data.len(), 3);
    assert!(data.iter().all(|r| (0.0..=1.0).contains(&r[1])));
    let csv = std::fs::read_to_string(&dump).unwrap();
    let scene = Scene::from_csv(&csv).unwrap();
    assert_eq!(
        csv.lines().filter(|l| !l.starts_with('#')).count() - 1,
        scene.buildings().len()
    );
    assert_eq!(scene.extent(), 700.0);
    assert_eq!(scene.triangles().len(), 10 * scene.buildings().len());
}

#[test]
fn scene_command_round_trips() {
    let text = stdout(&["scene", "--scenario", "suburban", "--extent", "1000", "--seed", "4"]);
    assert!(text.starts_with("# extent=1000 seed=4\ncenter_x,center_y,width,height\n"));
    let scene = Scene::from_csv(&text).unwrap();
    assert_eq!(scene.to_csv(), text);
}

#[test]
fn simulate_elevation_columns() {
    let text = stdout(&[
        "simulate",
        "--realizations",
        "1",
        "--links-per-ring",
        "8",
        "--elevation",
        "40:80:20",
    ]);
    let (header, data) = rows(&text);
    assert_eq!(header, "theta_deg,p_sim,ci_halfwidth");
    assert_eq!(data.iter().map(|r| r[0]).collect::<Vec<_>>(), vec![40.0, 60.0, 80.0]);
}

fn fit_into(dir: &Path) -> String {
    stdout(&[
        "fit",
        "--scenario",
        "urban",
        "--f-ghz",
        "6",
        "--dh",
        "20:1000:20",
        "--epochs",
        "3000",
        "--out-dir",
        dir.to_str().unwrap(),
    ])
}

#[test]
fn fit_outputs_and_compare_columns() {
    let dir = tempfile::tempdir().unwrap();
    let summary_line = fit_into(dir.path());
    assert!(summary_line.starts_with("urban: 50 records"));
    let report = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    for key in [
        "d1_train_rmse",
        "d1_validation_rmse",
        "d2_train_rmse",
        "d2_validation_rmse",
        "approx_mse",
        "approx_max_abs",
    ] {
        let v: f64 = summary(&report, key).parse().unwrap();
        assert!(v.is_finite() && v >= 0.0);
    }
    let mse: f64 = summary(&report, "approx_mse").parse().unwrap();
    assert!(mse <= 0.03);
    let (header, data) = rows(&report);
    assert_eq!(header, "delta_h,d1,d2,fit_mse,d1_pred,d2_pred");
    assert_eq!(data.len(), 50);

    let ds = FitDataset::load(dir.path().join("dataset.csv")).unwrap();
    assert_eq!(ds.len(), 50);
    assert_eq!(ds.provenance().unwrap().env.beta(), 500.0);
    let d1 = Mlp::load(dir.path().join("d1.mlp")).unwrap();
    assert_eq!(d1.hidden_neurons(), 4);

    let text = stdout(&[
        "compare",
        "--htx",
        "120",
        "--realizations",
        "1",
        "--links-per-ring",
        "12",
        "--d",
        "10:500:10",
        "--models",
        dir.path().to_str().unwrap(),
    ]);
    let (header, data) = rows(&text);
    assert_eq!(
        header,
        "d,p_sim,ci_halfwidth,p_analytic,p_approx_retrained,p_approx_3gpp,p_approx_5gcm"
    );
    for r in &data {
        assert_eq!(r[5], p_los_approx(r[0], &THREE_GPP));
        assert_eq!(r[6], p_los_approx(r[0], &FIVE_GCM));
    }
    for model in ["analytic", "approx_retrained", "approx_3gpp", "approx_5gcm"] {
        let fields: Vec<&str> = summary(&text, model).split(',').collect();
        assert_eq!(fields.len(), 2);
        assert!(fields[0].parse::<f64>().unwrap() >= 0.0);
    }
    assert_eq!(summary(&text, "approx_3gpp").split(',').nth(1), Some("10"));
}

#[test]
fn fit_is_reproducible() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    fit_into(a.path());
    fit_into(b.path());
    for f in ["d1.mlp", "d2.mlp", "dataset.csv", "report.csv"] {
        assert_eq!(
            std::fs::read(a.path().join(f)).unwrap(),
            std::fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
}
