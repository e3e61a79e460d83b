//! Scenario execution: runs the requested solver(s), writes every
//! artifact, and records the run manifest.

use std::path::{Path, PathBuf};
use std::time::Instant;

use sha2::{Digest, Sha256};

use crate::elastic3d::{self, Elastic3DSolver, ElasticField3D, Grid3};
use crate::error::{Error, Result};
use crate::kl_system::{component_index, COMPONENT_NAMES};
use crate::output::{
    write_pgm_heatmap, write_profile_csv, write_sensor_csv, write_snapshot_csv, RunManifest,
};
use crate::postprocess::{
    extract_moments, extract_profile, nrmse, rectangle_mean, resample_to, MomentMethod,
    ScalarField2D,
};
use crate::scenario::{
    compare_component_kind, parse_scenario, CompareKind, Scenario, SliceSpec, SolverKind,
};
use crate::shell::{self, record_sensor, ShellField, ShellSolver};

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out_dir: Option<PathBuf>,
    pub threads: Option<usize>,
    pub order: Option<usize>,
    pub courant: Option<f64>,
}

/// Runs one scenario file end to end and returns the manifest that was
/// written alongside the artifacts.
pub fn run_scenario_file(path: &Path, opts: &RunOptions) -> Result<RunManifest> {
    let bytes = std::fs::read(path).map_err(|e| Error::Scenario {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let scenario_hash = hex_digest(&bytes);
    let mut scenario = parse_scenario(path)?;
    if let Some(order) = opts.order {
        scenario.numerics.order = order;
    }
    if let Some(courant) = opts.courant {
        scenario.numerics.courant = courant;
    }

    let out_dir = opts.out_dir.clone().unwrap_or_else(|| {
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().to_string())
            .unwrap_or_else(|| "run".to_string());
        PathBuf::from("out").join(stem)
    });
    std::fs::create_dir_all(&out_dir)?;

    let started = Instant::now();
    let files = match opts.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?;
            pool.install(|| dispatch(&scenario, &out_dir))?
        }
        None => dispatch(&scenario, &out_dir)?,
    };

    let mut manifest = RunManifest {
        scenario_hash,
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        wall_clock_seconds: started.elapsed().as_secs_f64(),
        files,
    };
    manifest.files.push("manifest.json".to_string());
    manifest.files.sort();
    manifest.write(&out_dir)?;
    Ok(manifest)
}

fn hex_digest(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

fn dispatch(scenario: &Scenario, out_dir: &Path) -> Result<Vec<String>> {
    match scenario.solver {
        SolverKind::Shell => run_shell(scenario, out_dir),
        SolverKind::Elastic3d => run_elastic3d(scenario, out_dir),
        SolverKind::Compare => run_compare(scenario, out_dir),
    }
}

fn time_tag(t: f64) -> String {
    format!("{t:.6}")
}

/// Unique, sorted stop times: every snapshot instant plus t_end.
fn event_times(snapshot_times: &[f64], t_end: f64) -> Vec<f64> {
    let mut events: Vec<f64> = snapshot_times
        .iter()
        .cloned()
        .filter(|&t| t > 0.0)
        .collect();
    events.push(t_end);
    events.sort_by(|a, b| a.partial_cmp(b).unwrap());
    events.dedup();
    events
}

fn is_snapshot_time(t: f64, snapshot_times: &[f64]) -> bool {
    snapshot_times
        .iter()
        .any(|&s| (s - t).abs() <= 1e-12 * t.max(1.0))
}

fn run_shell(scenario: &Scenario, out_dir: &Path) -> Result<Vec<String>> {
    let mut files = Vec::new();
    let field = shell::init(
        scenario.grid,
        &scenario.ic_shell,
        &scenario.material,
        &scenario.numerics,
    )?;
    let mut solver = ShellSolver::new(field, scenario.material, scenario.numerics)?;

    let mut sensor_traces: Vec<Vec<(f64, f64)>> = scenario
        .outputs
        .sensors
        .iter()
        .map(|spec| vec![(0.0, record_sensor(&solver.field, spec))])
        .collect();

    if is_snapshot_time(0.0, &scenario.outputs.snapshot_times) {
        emit_shell_snapshots(&solver.field, scenario, out_dir, &mut files)?;
    }

    let events = event_times(&scenario.outputs.snapshot_times, scenario.t_end);
    let dt_stable = solver.stable_dt();
    for &target in &events {
        while solver.field.time < target - 1e-15 * target.max(1.0) {
            let dt = dt_stable.min(target - solver.field.time);
            solver.advance(dt)?;
            for (trace, spec) in sensor_traces.iter_mut().zip(&scenario.outputs.sensors) {
                trace.push((solver.field.time, record_sensor(&solver.field, spec)));
            }
        }
        if is_snapshot_time(target, &scenario.outputs.snapshot_times) {
            emit_shell_snapshots(&solver.field, scenario, out_dir, &mut files)?;
        }
    }

    for (idx, (trace, spec)) in sensor_traces
        .iter()
        .zip(&scenario.outputs.sensors)
        .enumerate()
    {
        let name = format!("sensor_{}_{idx}.csv", COMPONENT_NAMES[spec.component]);
        write_sensor_csv(&out_dir.join(&name), trace)?;
        files.push(name);
    }

    for (idx, p) in scenario.outputs.profiles.iter().enumerate() {
        let field = shell_component_field(&solver.field, &p.component);
        let center = solver.field.grid.center();
        let through = match p.axis {
            crate::gcm::Axis::X => center.1,
            _ => center.0,
        };
        let profile = extract_profile(&field, p.axis, through, p.band_width)?;
        let name = format!("profile_{}_{}_{idx}.csv", p.component, p.axis.as_str());
        write_profile_csv(&out_dir.join(&name), &profile)?;
        files.push(name);
    }

    Ok(files)
}

fn shell_component_field(field: &ShellField, component: &str) -> ScalarField2D {
    if component == "vmag" {
        field.velocity_magnitude_field()
    } else {
        field.component_field(component_index(component).expect("validated component"))
    }
}

fn emit_shell_snapshots(
    field: &ShellField,
    scenario: &Scenario,
    out_dir: &Path,
    files: &mut Vec<String>,
) -> Result<()> {
    for c in &scenario.outputs.components {
        let snap = shell_component_field(field, c);
        let name = format!("{c}_t{}.csv", time_tag(field.time));
        write_snapshot_csv(&out_dir.join(&name), &snap)?;
        files.push(name);
        if scenario.outputs.heatmaps {
            let name = format!("{c}_t{}.pgm", time_tag(field.time));
            write_pgm_heatmap(&out_dir.join(&name), &snap)?;
            files.push(name.clone());
            files.push(format!("{name}.txt"));
        }
    }
    Ok(())
}

fn build_grid3(scenario: &Scenario, thickness: f64, nz: usize) -> Result<Grid3> {
    let (ex, ey) = scenario.grid.extent();
    Grid3::plate(ex, ey, thickness, scenario.grid.nx, scenario.grid.ny, nz)
}

fn run_elastic3d(scenario: &Scenario, out_dir: &Path) -> Result<Vec<String>> {
    let nz = scenario.nz.ok_or_else(|| Error::Scenario {
        path: String::new(),
        message: "geometry.nz required".into(),
    })?;
    let grid = build_grid3(scenario, scenario.thickness3d, nz)?;
    let field = elastic3d::init_3d(grid, &scenario.ic_3d)?;
    let mut solver = Elastic3DSolver::new(
        field,
        scenario.material,
        scenario.numerics.order,
        scenario.numerics.courant,
        scenario.numerics.limiter,
        scenario.face_condition,
    )?;

    let mut files = Vec::new();
    let mut sensor_traces: Vec<Vec<(f64, f64)>> = scenario
        .outputs
        .sensors
        .iter()
        .map(|spec| vec![(0.0, sensor_3d(&solver.field, spec))])
        .collect();

    if is_snapshot_time(0.0, &scenario.outputs.snapshot_times) {
        emit_3d_snapshots(&solver.field, scenario, out_dir, &mut files)?;
    }
    let events = event_times(&scenario.outputs.snapshot_times, scenario.t_end);
    let dt_stable = solver.stable_dt();
    for &target in &events {
        while solver.field.time < target - 1e-15 * target.max(1.0) {
            let dt = dt_stable.min(target - solver.field.time);
            solver.advance(dt)?;
            for (trace, spec) in sensor_traces.iter_mut().zip(&scenario.outputs.sensors) {
                trace.push((solver.field.time, sensor_3d(&solver.field, spec)));
            }
        }
        if is_snapshot_time(target, &scenario.outputs.snapshot_times) {
            emit_3d_snapshots(&solver.field, scenario, out_dir, &mut files)?;
        }
    }

    for (idx, (trace, spec)) in sensor_traces
        .iter()
        .zip(&scenario.outputs.sensors)
        .enumerate()
    {
        let name = format!(
            "sensor_{}_{idx}.csv",
            elastic3d::COMPONENT_NAMES_3D[spec.component]
        );
        write_sensor_csv(&out_dir.join(&name), trace)?;
        files.push(name);
    }
    Ok(files)
}

/// Rectangle mean on the mid-plane layer.
fn sensor_3d(field: &ElasticField3D, spec: &crate::shell::SensorSpec) -> f64 {
    let mid = field.midplane(spec.component);
    let g = &field.grid;
    let center = (
        g.origin.0 + (g.nx - 1) as f64 * g.dx / 2.0 + spec.center_offset.0,
        g.origin.1 + (g.ny - 1) as f64 * g.dy / 2.0 + spec.center_offset.1,
    );
    rectangle_mean(&mid, center, spec.size)
}

fn emit_3d_snapshots(
    field: &ElasticField3D,
    scenario: &Scenario,
    out_dir: &Path,
    files: &mut Vec<String>,
) -> Result<()> {
    for c in &scenario.outputs.components {
        let snap = if c == "vmag" {
            velocity_magnitude_midplane(field)
        } else {
            field.midplane(elastic3d::component_index_3d(c).expect("validated component"))
        };
        let name = format!("{c}_xy_mid_t{}.csv", time_tag(field.time));
        write_snapshot_csv(&out_dir.join(&name), &snap)?;
        files.push(name);
        if scenario.outputs.heatmaps {
            let name = format!("{c}_xy_mid_t{}.pgm", time_tag(field.time));
            write_pgm_heatmap(&out_dir.join(&name), &snap)?;
            files.push(name.clone());
            files.push(format!("{name}.txt"));
        }
    }
    for s in &scenario.outputs.slices {
        let snap = slice_field(field, s);
        let plane = match s.plane {
            elastic3d::SlicePlane::Xy => "xy",
            elastic3d::SlicePlane::Xz => "xz",
            elastic3d::SlicePlane::Yz => "yz",
        };
        let name = format!(
            "{}_{plane}_{}_t{}.csv",
            elastic3d::COMPONENT_NAMES_3D[s.component],
            s.tag,
            time_tag(field.time)
        );
        write_snapshot_csv(&out_dir.join(&name), &snap)?;
        files.push(name);
    }
    Ok(())
}

fn velocity_magnitude_midplane(field: &ElasticField3D) -> ScalarField2D {
    use crate::elastic3d::comp3;
    let vx = field.midplane(comp3::V_1);
    let vy = field.midplane(comp3::V_2);
    let vz = field.midplane(comp3::V_3);
    let mut out = ScalarField2D::zeros(vx.geometry, "vmag", field.time);
    for idx in 0..out.values.len() {
        out.values[idx] =
            (vx.values[idx].powi(2) + vy.values[idx].powi(2) + vz.values[idx].powi(2)).sqrt();
    }
    out
}

fn slice_field(field: &ElasticField3D, spec: &SliceSpec) -> ScalarField2D {
    field.slice(spec.plane, spec.position, spec.component)
}

fn run_compare(scenario: &Scenario, out_dir: &Path) -> Result<Vec<String>> {
    let compare = scenario.compare.as_ref().expect("validated compare block");
    let kind = compare_component_kind(&compare.component).expect("validated compare component");

    let mut times: Vec<f64> = scenario.outputs.snapshot_times.clone();
    if times.is_empty() {
        times.push(scenario.t_end);
    }
    times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    times.dedup();

    // Shell pass: capture the compared component at every time.
    let field = shell::init(
        scenario.grid,
        &scenario.ic_shell,
        &scenario.material,
        &scenario.numerics,
    )?;
    let mut solver = ShellSolver::new(field, scenario.material, scenario.numerics)?;
    let mut shell_snaps: Vec<ScalarField2D> = Vec::new();
    if times.first().is_some_and(|&t| t == 0.0) {
        shell_snaps.push(shell_component_field(&solver.field, &compare.component));
    }
    let dt_stable = solver.stable_dt();
    for &target in times.iter().filter(|&&t| t > 0.0) {
        while solver.field.time < target - 1e-15 * target.max(1.0) {
            let dt = dt_stable.min(target - solver.field.time);
            solver.advance(dt)?;
        }
        shell_snaps.push(shell_component_field(&solver.field, &compare.component));
    }

    let mut files = Vec::new();
    let mut terminal: Vec<(f64, f64)> = Vec::new();

    for (case, (&thickness, &nz)) in compare
        .thicknesses
        .iter()
        .zip(compare.nz.iter())
        .enumerate()
    {
        // A material whose plate thickness matches this 3D case, so the
        // shell-side derived constants stay untouched.
        let grid3 = build_grid3(scenario, thickness, nz)?;
        let field3 = elastic3d::init_3d(grid3, &scenario.ic_3d)?;
        let mut solver3 = Elastic3DSolver::new(
            field3,
            scenario.material,
            scenario.numerics.order,
            scenario.numerics.courant,
            scenario.numerics.limiter,
            scenario.face_condition,
        )?;

        let extract = |f: &ElasticField3D| -> Result<ScalarField2D> {
            match kind {
                CompareKind::MidplaneVelocity(c) => {
                    if f.grid.nz.is_multiple_of(2) {
                        return Err(Error::Scenario {
                            path: String::new(),
                            message: "compare.nz: mid-plane extraction needs odd nz".into(),
                        });
                    }
                    Ok(f.midplane(c))
                }
                CompareKind::Moment(mc) => extract_moments(f, mc, MomentMethod::TwoLayer),
            }
        };

        let mut series: Vec<(f64, f64)> = Vec::new();
        let mut snap_idx = 0usize;
        if times.first().is_some_and(|&t| t == 0.0) {
            let three_d = extract(&solver3.field)?;
            let resampled = resample_to(&three_d, shell_snaps[0].geometry)?;
            series.push((0.0, nrmse(&shell_snaps[snap_idx], &resampled)?));
            snap_idx += 1;
        }
        let dt3 = solver3.stable_dt();
        for &target in times.iter().filter(|&&t| t > 0.0) {
            while solver3.field.time < target - 1e-15 * target.max(1.0) {
                let dt = dt3.min(target - solver3.field.time);
                solver3.advance(dt)?;
            }
            let three_d = extract(&solver3.field)?;
            // The 3D field is the reference of the comparison and is
            // resampled onto the shell grid first.
            let resampled = resample_to(&three_d, shell_snaps[snap_idx].geometry)?;
            series.push((target, nrmse(&shell_snaps[snap_idx], &resampled)?));
            snap_idx += 1;
        }

        let name = format!("nrmse_{}_h{thickness}.csv", compare.component);
        write_series_csv(&out_dir.join(&name), "t,nrmse", &series)?;
        files.push(name);
        let _ = case;
        terminal.push((thickness, series.last().map(|s| s.1).unwrap_or(f64::NAN)));
    }

    let name = format!("nrmse_{}_summary.csv", compare.component);
    write_series_csv(&out_dir.join(&name), "thickness,terminal_nrmse", &terminal)?;
    files.push(name);
    Ok(files)
}

fn write_series_csv(path: &Path, header: &str, rows: &[(f64, f64)]) -> Result<()> {
    use std::io::Write;
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "{header}")?;
    for (a, b) in rows {
        writeln!(w, "{a},{b}")?;
    }
    w.flush()?;
    Ok(())
}
