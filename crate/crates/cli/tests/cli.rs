use std::path::Path;
use std::process::{Command, Output};

use mhom::io::{map_from_csv, map_to_csv, Table};

fn mhom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mhom"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_into(dir: &Path, args: &[&str]) -> Output {
    let mut all = vec!["run"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", dir.to_str().unwrap()]);
    let out = mhom(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    out
}

fn read(path: impl AsRef<Path>) -> String {
    std::fs::read_to_string(path).unwrap()
}

fn stderr_record(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stderr).expect("stderr is a JSON record")
}

#[test]
fn list_names_every_preset_deterministically() {
    let a = mhom(&["list"]);
    let b = mhom(&["list"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    for name in ["fig1b", "fig2a", "fig2f", "fig3", "fig3-conjugate", "fig4-grid", "design", "validate"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
}

#[test]
fn fig1b_csv_has_dip_flat_and_peak() {
    let dir = tempfile::tempdir().unwrap();
    run_into(dir.path(), &["fig1b"]);
    let table = Table::<f64>::from_csv(&read(dir.path().join("fig1b.csv"))).unwrap();
    let k0 = table.grid.nearest(0.0);
    assert!(table.column("phi0").unwrap()[k0] <= 1e-3);
    assert!((table.column("phi_pi2").unwrap()[k0] - 1.0).abs() <= 1e-6);
    let peak = table.column("phi_pi").unwrap().iter().copied().fold(0.0, f64::max);
    assert!((peak - 2.0).abs() <= 1e-3);
    for col in ["phi0", "phi_pi2", "phi_pi"] {
        let side = table.column(col).unwrap()[table.grid.nearest(3.0)];
        assert!((side - 0.5).abs() <= 1e-3, "{col}: {side}");
    }
}

#[test]
fn fig2d_map_vanishes_on_its_zero_lines() {
    let dir = tempfile::tempdir().unwrap();
    run_into(dir.path(), &["fig2d"]);
    let text = read(dir.path().join("fig2d.csv"));
    let map = map_from_csv::<f64>(&text).unwrap();
    assert_eq!((map.grid.rows.count, map.grid.cols.count), (256, 256));
    assert_eq!(map_to_csv(&map), text);
    let tau0 = map.metadata.tau0.unwrap();
    // the zero-delay kernel is bounded by both of its factors
    for r in 0..256 {
        for c in 0..256 {
            let (ws, wi) = (map.grid.rows.at(r), map.grid.cols.at(c));
            let (op, om) = (ws + wi, ws - wi);
            let v = map.get(r, c);
            assert!(v <= 8.0 * (1.0 - (om * tau0).cos()) * (1.0 + 1e-12) + 1e-12);
            assert!(v <= 8.0 * (1.0 - (op * tau0).cos()) * (1.0 + 1e-12) + 1e-12);
        }
    }
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    for format in ["csv", "json"] {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        for preset in ["fig1b", "fig2b", "fig3-conjugate", "design"] {
            let oa = run_into(a.path(), &[preset, "--format", format]);
            let ob = run_into(b.path(), &[preset, "--format", format]);
            assert_eq!(oa.stdout, ob.stdout);
        }
        let mut names: Vec<_> = std::fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
        names.sort();
        assert_eq!(names.len(), 4);
        for name in names {
            assert_eq!(std::fs::read(a.path().join(&name)).unwrap(), std::fs::read(b.path().join(&name)).unwrap());
        }
    }
}

#[test]
fn config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("scan.toml");
    std::fs::write(
        &config,
        "name = \"scan\"\nkind = \"interferogram\"\n[source]\nsigma_plus = 0.5\nsigma_minus = 4.0\n\
         [grid]\ntau = { start = -6.0, end = 6.0, count = 121 }\n",
    )
    .unwrap();
    run_into(dir.path(), &["--config", config.to_str().unwrap(), "--tau0", "2.5", "--phi", "-1.0", "--grid", "241"]);
    let table = Table::<f64>::from_csv(&read(dir.path().join("scan.csv"))).unwrap();
    assert_eq!(table.grid.count, 241);
    let meta: std::collections::HashMap<_, _> = table.metadata.iter().cloned().collect();
    assert_eq!(meta["tau0"].parse::<f64>().unwrap(), 2.5);
    assert_eq!(meta["rate.phi"].parse::<f64>().unwrap(), -1.0);
    let model = mhom::SourceModel::pulsed(0.5, 4.0).unwrap();
    for (k, &v) in table.column("rate").unwrap().iter().enumerate() {
        let want = mhom::interferogram::rate_modified_pulsed(&model, 2.5, -1.0, table.grid.at(k)).unwrap();
        assert!((v - want).abs() <= 1e-15);
    }
}

#[test]
fn bad_config_exits_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    std::fs::write(&config, "name = \"bad\"\nkind = \"interferogram\"\ncolour = \"red\"\n").unwrap();
    let out = mhom(&["run", "--config", config.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_record(&out)["error"], "config");

    let out = mhom(&["run", "fig1b", "--tau0", "-1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let out = mhom(&["run", "no-such-preset"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_record(&out)["message"].as_str().unwrap().contains("no-such-preset"));
}

#[test]
fn coarse_quadrature_exits_with_code_three() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("quad.toml");
    std::fs::write(
        &config,
        "name = \"quad\"\nkind = \"interferogram\"\n[interferometer]\nmethod = \"quadrature\"\n\
         [grid]\ntau = { start = -4.0, end = 4.0, count = 9 }\n",
    )
    .unwrap();
    run_into(dir.path(), &["--config", config.to_str().unwrap()]);
    let out = mhom(&["run", "--config", config.to_str().unwrap(), "--grid", "33", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_record(&out)["error"], "resolution");
}

#[test]
fn show_prints_a_loadable_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let out = mhom(&["show", "fig4-grid"]);
    assert!(out.status.success());
    let config = dir.path().join("fig4.toml");
    std::fs::write(&config, &out.stdout).unwrap();
    let run = run_into(dir.path(), &["--config", config.to_str().unwrap()]);
    let summary = read(dir.path().join("fig4-grid.csv"));
    assert_eq!(summary.lines().filter(|l| !l.starts_with('#')).count(), 1 + 2 * 15);
    assert!(!run.stdout.is_empty());
}
