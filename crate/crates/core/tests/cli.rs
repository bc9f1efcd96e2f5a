use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use holoattr::chain::MapSpec;
use holoattr::grid::{Box4, Grid4};
use holoattr::cli::SUBCOMMANDS;
use holoattr::linalg::{c, Point2};
use holoattr::{AutoChain, Map2};
use serde_json::Value;

fn bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_holoattr"))
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn run(out: &Path, args: &[&str]) -> Output {
    Command::new(bin()).args(args).arg("--out").arg(out).output().unwrap()
}

fn read_json(p: PathBuf) -> Value {
    serde_json::from_slice(&std::fs::read(p).unwrap()).unwrap()
}

#[test]
fn fixed_point_example() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["fixed-point", "--map", &data("henon075.json"), "--seed-point", "1.4,1.4"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 1);
    let v = read_json(dir.path().join("fixed-point.json"));
    assert_eq!(v["classification"], "Saddle");
    for k in ["x", "y"] {
        assert!((v["location"][k][0].as_f64().unwrap() - 1.5).abs() < 1e-12);
    }
    let m = read_json(dir.path().join("fixed-point.manifest.json"));
    assert_eq!(m["subcommand"], "fixed-point");
    assert_eq!(m["artifacts"][0], "fixed-point.json");
    assert_eq!(m["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn sphere_gallery_example() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["gallery", "--example", "sphere", "--z", "0.5", "--m", "3"]);
    assert!(o.status.success());
    assert_eq!(String::from_utf8(o.stdout).unwrap().trim(), "0.2");
}

#[test]
fn density_depth_zero_is_graph_cell_count() {
    let dir = tempfile::tempdir().unwrap();
    let henon = data("henon075.json");
    let o = run(dir.path(), &["density", "--map", &henon, "--seed-point", "1.4,1.4", "--depth", "0"]);
    assert!(o.status.success());
    let d = read_json(dir.path().join("density.json"));
    let o = run(dir.path(), &["stable-graph", "--map", &henon, "--seed-point", "1.4,1.4"]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(dir.path().join("stable-graph.csv")).unwrap();
    let grid = Grid4::uniform(Box4::cube(2.0).unwrap(), 10).unwrap();
    let mut cells = std::collections::BTreeSet::new();
    for line in csv.lines().skip(1) {
        let r: Vec<f64> = line.split(',').map(|t| t.parse().unwrap()).collect();
        if let Some(i) = grid.cell_of(Point2::from_reals([r[0], r[1], r[2], r[3]])) {
            cells.insert(i);
        }
    }
    assert_eq!(d["rows"][0]["occupied"].as_u64().unwrap() as usize, cells.len());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["stable-graph", "--map", &data("contraction.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("NotASaddle"));
    let o = run(dir.path(), &["fixed-point", "--map", "/definitely/missing.json"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(dir.path(), &["fixed-point"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(dir.path(), &["no-such-subcommand"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(dir.path(), &["gallery", "--example", "sphere", "--z", "-0.25", "--m", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("PoleHit"));
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        format!(
            r#"{{"map": "{}", "seed-point": "0.4,0.4", "fixed_point": {{"max_iter": 50}}}}"#,
            data("henon075.json")
        ),
    )
    .unwrap();
    let cfg = cfg.display().to_string();
    let o = run(dir.path(), &["fixed-point", "--config", &cfg]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = read_json(dir.path().join("fixed-point.json"));
    assert!((v["location"]["x"][0].as_f64().unwrap() - 0.5).abs() < 1e-12);
    let m = read_json(dir.path().join("fixed-point.manifest.json"));
    assert_eq!(m["config"]["max_iter"], 50);
    let roles: Vec<&str> = m["inputs"].as_array().unwrap().iter().map(|i| i["role"].as_str().unwrap()).collect();
    assert!(roles.contains(&"config") && roles.contains(&"map"));

    let o = run(dir.path(), &["fixed-point", "--config", &cfg, "--seed-point", "1.4,1.4"]);
    assert!(o.status.success());
    let v = read_json(dir.path().join("fixed-point.json"));
    assert!((v["location"]["x"][0].as_f64().unwrap() - 1.5).abs() < 1e-12);
    let m = read_json(dir.path().join("fixed-point.manifest.json"));
    assert_eq!(m["params"]["seed_point"], "1.4,1.4");
    assert_eq!(m["flags"]["seed_point"], "1.4,1.4");
}

#[test]
fn report_lists_every_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["report", "--list"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    for (name, anchor) in SUBCOMMANDS {
        assert!(text.lines().any(|l| l.starts_with(name) && l.contains(anchor)), "{name}");
    }
    let v = read_json(dir.path().join("report.json"));
    assert_eq!(v["subcommands"].as_array().unwrap().len(), 16);
}

#[test]
fn negative_and_complex_arguments() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["char-dirs", "--c", "-1+2i"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(dir.path(), &["parabolic-graph", "--x", "-0.01"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = read_json(dir.path().join("parabolic-graph.json"));
    assert!(v["points"][0]["sector_residence"].as_u64().unwrap() >= 200);
}

#[test]
fn data_files_match_constructors() {
    let h = MapSpec::from_json_str(&std::fs::read_to_string(data("henon075.json")).unwrap()).unwrap();
    let p = MapSpec::from_json_str(&std::fs::read_to_string(data("parabolic_c0.json")).unwrap()).unwrap();
    let hh = AutoChain::henon(0.75);
    let pp = AutoChain::parabolic_normal_form(c(0.0, 0.0));
    for z in [Point2::real(0.3, -0.2), Point2::new(c(0.1, 0.2), c(-0.4, 0.05))] {
        assert!(h.apply(z).unwrap().dist(hh.apply(z).unwrap()) < 1e-15);
        assert!(p.apply(z).unwrap().dist(pp.apply(z).unwrap()) < 1e-15);
    }
    assert!(matches!(
        MapSpec::from_json_str(&std::fs::read_to_string(data("parabolic_jet_c3.json")).unwrap()).unwrap(),
        MapSpec::Endomorphism(_)
    ));
}
