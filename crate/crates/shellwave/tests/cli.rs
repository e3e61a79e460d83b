//! End-to-end checks of the scenario runner and the command-line
//! interface: bundled scenarios parse, artifacts match the manifest, and
//! the binary behaves on good and bad input.

use std::path::{Path, PathBuf};
use std::process::Command;

use shellwave::output::{read_snapshot_csv, write_snapshot_csv};
use shellwave::postprocess::{nrmse, FieldGeometry, ScalarField2D};
use shellwave::runner::{run_scenario_file, RunOptions};
use shellwave::scenario::parse_scenario;

fn scenarios_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_shellwave"))
}

#[test]
fn bundled_scenarios_parse() {
    for name in [
        "inplane_paper.toml",
        "outplane_paper.toml",
        "compare_thickness.toml",
    ] {
        let s =
            parse_scenario(&scenarios_dir().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(s.numerics.order, 5);
        assert_eq!(s.numerics.courant, 0.9);
    }
}

#[test]
fn zero_ic_produces_all_zero_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("zero.toml");
    std::fs::write(
        &scenario,
        r#"
solver = "shell"
t_end = 0.0002

[material]
E = 210e9
nu = 0.3
rho = 7800.0
h = 0.02

[geometry]
extent_x = 10.0
extent_y = 10.0
nx = 41
ny = 41

[ic]

[outputs]
snapshot_times = [0.0001, 0.0002]
components = ["v_x", "m_x"]
"#,
    )
    .unwrap();
    let out = dir.path().join("out");
    let manifest = run_scenario_file(
        &scenario,
        &RunOptions {
            out_dir: Some(out.clone()),
            ..RunOptions::default()
        },
    )
    .unwrap();
    let snapshots: Vec<_> = manifest
        .files
        .iter()
        .filter(|f| f.ends_with(".csv"))
        .collect();
    assert_eq!(snapshots.len(), 4);
    for f in snapshots {
        let field = read_snapshot_csv(&out.join(f)).unwrap();
        assert!(
            field.values.iter().all(|&v| v == 0.0),
            "{f} has nonzero values"
        );
    }
}

#[test]
fn manifest_lists_every_file_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let manifest = run_scenario_file(
        &scenarios_dir().join("inplane_paper.toml"),
        &RunOptions {
            out_dir: Some(out.clone()),
            threads: Some(2),
            ..RunOptions::default()
        },
    )
    .unwrap();

    let mut on_disk: Vec<String> = std::fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().to_string())
        .collect();
    on_disk.sort();
    let mut listed = manifest.files.clone();
    listed.sort();
    assert_eq!(on_disk, listed);
    assert!(listed.contains(&"manifest.json".to_string()));
}

#[test]
fn heatmaps_and_their_sidecars_are_listed_too() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("heat.toml");
    std::fs::write(
        &scenario,
        r#"
solver = "shell"
t_end = 0.0001

[material]
E = 210e9
nu = 0.3
rho = 7800.0
h = 0.02

[geometry]
extent_x = 10.0
extent_y = 10.0
nx = 31
ny = 31

[ic]
kind = "point_velocity"
component = "v_x"
magnitude = 100.0

[outputs]
snapshot_times = [0.0001]
components = ["v_x"]
heatmaps = true
"#,
    )
    .unwrap();
    let out = dir.path().join("out");
    let manifest = run_scenario_file(
        &scenario,
        &RunOptions {
            out_dir: Some(out.clone()),
            ..RunOptions::default()
        },
    )
    .unwrap();
    let mut on_disk: Vec<String> = std::fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().to_string())
        .collect();
    on_disk.sort();
    let mut listed = manifest.files.clone();
    listed.sort();
    assert_eq!(on_disk, listed);
    assert!(listed.iter().any(|f| f.ends_with(".pgm")));
    assert!(listed.iter().any(|f| f.ends_with(".pgm.txt")));
}

#[test]
fn elastic3d_scenario_emits_slices_and_sensors() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("gradient3d.toml");
    std::fs::write(
        &scenario,
        r#"
solver = "elastic3d"
t_end = 0.0002

[material]
E = 210e9
nu = 0.3
rho = 7800.0
h = 0.5

[geometry]
extent_x = 4.0
extent_y = 4.0
nx = 41
ny = 41
nz = 7

[ic]
kind = "column_gradient"
component = "v_1"
magnitude = 100.0
center = [2.0, 2.0]

[bc]
faces = "traction_free"

[outputs]
snapshot_times = [0.0002]
components = ["v_1", "vmag"]

[[outputs.sensors]]
component = "v_1"
center_offset = [0.5, 0.0]
size = [0.4, 0.4]

[[outputs.slices]]
plane = "xz"
position = "source"
component = "sigma_11"

[[outputs.slices]]
plane = "xy"
position = "top"
component = "v_1"
"#,
    )
    .unwrap();
    let out = dir.path().join("out");
    let manifest = run_scenario_file(
        &scenario,
        &RunOptions {
            out_dir: Some(out.clone()),
            ..RunOptions::default()
        },
    )
    .unwrap();
    for expect in [
        "v_1_xy_mid_t0.000200.csv",
        "vmag_xy_mid_t0.000200.csv",
        "sigma_11_xz_source_t0.000200.csv",
        "v_1_xy_top_t0.000200.csv",
        "sensor_v_1_0.csv",
    ] {
        assert!(
            manifest.files.iter().any(|f| f == expect),
            "missing {expect}: {:?}",
            manifest.files
        );
    }
    // The XZ slice spans the plate thickness with the mid-plane at z = 0.
    let slice = read_snapshot_csv(&out.join("sigma_11_xz_source_t0.000200.csv")).unwrap();
    assert_eq!(slice.geometry.ny, 7);
    assert_eq!(slice.geometry.origin.1, -0.25);
    assert!(slice.max_abs() > 0.0);
    // The gradient source keeps v_1 antisymmetric in z, so the mid-plane
    // stays at rounding level...
    let mid = read_snapshot_csv(&out.join("v_1_xy_mid_t0.000200.csv")).unwrap();
    let top = read_snapshot_csv(&out.join("v_1_xy_top_t0.000200.csv")).unwrap();
    assert!(mid.max_abs() <= 1e-12 * top.max_abs());
    // ...while the faces carry the wave.
    assert!(top.max_abs() > 0.0);
}

#[test]
fn order_and_courant_flags_override_the_scenario() {
    // The overridden run takes different step sizes, so a snapshot at the
    // same time differs from the default run's.
    let dir = tempfile::tempdir().unwrap();
    let scenario = scenarios_dir().join("inplane_paper.toml");
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    let status = binary()
        .args(["run"])
        .arg(&scenario)
        .arg("--out")
        .arg(&out_a)
        .args(["--threads", "2"])
        .status()
        .unwrap();
    assert!(status.success());
    let status = binary()
        .args(["run"])
        .arg(&scenario)
        .arg("--out")
        .arg(&out_b)
        .args(["--threads", "2", "--order", "1", "--courant", "0.5"])
        .status()
        .unwrap();
    assert!(status.success());
    let a = std::fs::read(out_a.join("v_x_t0.000700.csv")).unwrap();
    let b = std::fs::read(out_b.join("v_x_t0.000700.csv")).unwrap();
    assert_ne!(a, b);
}

#[test]
fn compare_subcommand_prints_the_nrmse() {
    let dir = tempfile::tempdir().unwrap();
    let g = FieldGeometry {
        nx: 12,
        ny: 9,
        dx: 0.5,
        dy: 0.5,
        origin: (0.0, 0.0),
    };
    let mut a = ScalarField2D::zeros(g, "v_x", 0.0);
    let mut b = ScalarField2D::zeros(g, "v_x", 0.0);
    for (idx, v) in a.values.iter_mut().enumerate() {
        *v = (idx as f64 * 0.37).sin();
    }
    for (idx, v) in b.values.iter_mut().enumerate() {
        *v = (idx as f64 * 0.23).cos();
    }
    let path_a = dir.path().join("a.csv");
    let path_b = dir.path().join("b.csv");
    write_snapshot_csv(&path_a, &a).unwrap();
    write_snapshot_csv(&path_b, &b).unwrap();

    let output = binary()
        .arg("compare")
        .arg(&path_a)
        .arg(&path_b)
        .output()
        .unwrap();
    assert!(output.status.success());
    let printed: f64 = String::from_utf8_lossy(&output.stdout)
        .trim()
        .parse()
        .unwrap();
    let expected = nrmse(&a, &b).unwrap();
    assert!((printed - expected).abs() <= 1e-12 * expected);
}

#[test]
fn failures_exit_nonzero_with_a_category_line() {
    let dir = tempfile::tempdir().unwrap();

    // Missing file.
    let output = binary()
        .args(["run", "/nonexistent/nope.toml"])
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.starts_with("error: category=scenario"), "{stderr}");

    // Invalid material.
    let bad = dir.path().join("bad.toml");
    std::fs::write(
        &bad,
        r#"
solver = "shell"
t_end = 0.0001

[material]
E = 210e9
nu = 0.6
rho = 7800.0
h = 0.02

[geometry]
extent_x = 10.0
extent_y = 10.0
nx = 11
ny = 11
"#,
    )
    .unwrap();
    let output = binary().args(["run"]).arg(&bad).output().unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(
        stderr.starts_with("error: category=invalid-parameter") && stderr.contains("material.nu"),
        "{stderr}"
    );
}
