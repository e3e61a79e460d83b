//! Scenario files: TOML schema, defaults and validation.
//!
//! One file describes one experiment: solver, material, geometry,
//! initial and boundary conditions, numerics and requested outputs.
//! Unknown keys are rejected with the parser's line/column diagnostics;
//! semantic violations name the offending field.

use std::path::Path;

use serde::Deserialize;

use crate::elastic3d::{
    component_index_3d, FaceCondition, InitialCondition3D, SlicePlane, SlicePosition,
};
use crate::error::{Error, Result};
use crate::gcm::{Axis, Limiter};
use crate::kl_system::{comp, component_index};
use crate::material::{Material, ShearConvention};
use crate::shell::{Grid2, InitialCondition, Numerics, SensorSpec, WaveFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    Shell,
    Elastic3d,
    Compare,
}

#[derive(Debug, Clone)]
pub struct ProfileSpec {
    pub component: String,
    pub axis: Axis,
    pub band_width: f64,
}

#[derive(Debug, Clone)]
pub struct SliceSpec {
    pub plane: SlicePlane,
    pub position: SlicePosition,
    pub component: usize,
    /// Filename tag ("mid", "top", "source", ...).
    pub tag: String,
}

#[derive(Debug, Clone)]
pub struct CompareSpec {
    /// Shell component to compare ("v_x", "v_y", "m_x", "m_y", "m_xy").
    pub component: String,
    pub thicknesses: Vec<f64>,
    pub nz: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Outputs {
    pub snapshot_times: Vec<f64>,
    pub components: Vec<String>,
    pub sensors: Vec<SensorSpec>,
    pub profiles: Vec<ProfileSpec>,
    pub slices: Vec<SliceSpec>,
    pub heatmaps: bool,
}

/// A fully validated experiment description.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub solver: SolverKind,
    pub material: Material,
    pub grid: Grid2,
    pub nz: Option<usize>,
    /// Plate thickness of the 3D grid (defaults to material.h).
    pub thickness3d: f64,
    pub ic_shell: InitialCondition,
    pub ic_3d: InitialCondition3D,
    pub face_condition: FaceCondition,
    pub numerics: Numerics,
    pub outputs: Outputs,
    pub t_end: f64,
    pub compare: Option<CompareSpec>,
}

// ---------------------------------------------------------------------
// Raw serde schema
// ---------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    solver: String,
    t_end: f64,
    material: MaterialBlock,
    geometry: GeometryBlock,
    #[serde(default)]
    ic: IcBlock,
    #[serde(default)]
    bc: BcBlock,
    #[serde(default)]
    numerics: NumericsBlock,
    #[serde(default)]
    outputs: OutputsBlock,
    #[serde(default)]
    compare: Option<CompareBlock>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MaterialBlock {
    #[serde(rename = "E")]
    e: f64,
    nu: f64,
    rho: f64,
    h: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeometryBlock {
    extent_x: f64,
    extent_y: f64,
    nx: usize,
    ny: usize,
    #[serde(default)]
    nz: Option<usize>,
    #[serde(default)]
    thickness: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct IcBlock {
    #[serde(default)]
    kind: Option<String>,
    #[serde(default)]
    component: Option<String>,
    #[serde(default)]
    magnitude: Option<f64>,
    #[serde(default)]
    center: Option<[f64; 2]>,
    #[serde(default)]
    radius: Option<f64>,
    #[serde(default)]
    axis: Option<String>,
    #[serde(default)]
    forward: Option<bool>,
    #[serde(default)]
    sigma: Option<f64>,
    #[serde(default)]
    profile_center: Option<f64>,
    #[serde(default)]
    family: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct BcBlock {
    #[serde(default)]
    lateral: Option<String>,
    #[serde(default)]
    faces: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct NumericsBlock {
    #[serde(default)]
    order: Option<usize>,
    #[serde(default)]
    courant: Option<f64>,
    #[serde(default)]
    limiter: Option<String>,
    #[serde(default)]
    shear_convention: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputsBlock {
    #[serde(default)]
    snapshot_times: Vec<f64>,
    #[serde(default)]
    components: Vec<String>,
    #[serde(default)]
    sensors: Vec<SensorBlock>,
    #[serde(default)]
    profiles: Vec<ProfileBlock>,
    #[serde(default)]
    slices: Vec<SliceBlock>,
    #[serde(default)]
    heatmaps: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SensorBlock {
    component: String,
    center_offset: [f64; 2],
    size: [f64; 2],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileBlock {
    component: String,
    axis: String,
    #[serde(default)]
    band_width: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SliceBlock {
    plane: String,
    position: String,
    component: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CompareBlock {
    #[serde(default)]
    component: Option<String>,
    thicknesses: Vec<f64>,
    nz: Vec<usize>,
}

// ---------------------------------------------------------------------
// Parsing and validation
// ---------------------------------------------------------------------

pub fn parse_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Scenario {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_scenario_str(&text, &path.display().to_string())
}

pub fn parse_scenario_str(text: &str, name: &str) -> Result<Scenario> {
    let raw: ScenarioFile = toml::from_str(text).map_err(|e| Error::Scenario {
        path: name.to_string(),
        message: e.to_string(),
    })?;
    validate(raw, name)
}

fn scenario_error(name: &str, message: impl Into<String>) -> Error {
    Error::Scenario {
        path: name.to_string(),
        message: message.into(),
    }
}

fn validate(raw: ScenarioFile, name: &str) -> Result<Scenario> {
    let solver = match raw.solver.as_str() {
        "shell" => SolverKind::Shell,
        "elastic3d" => SolverKind::Elastic3d,
        "compare" => SolverKind::Compare,
        other => {
            return Err(scenario_error(
                name,
                format!("solver: unknown value `{other}` (expected shell, elastic3d or compare)"),
            ))
        }
    };

    let material = Material::new(
        raw.material.e,
        raw.material.nu,
        raw.material.rho,
        raw.material.h,
    )?;
    let grid = Grid2::plate(
        raw.geometry.extent_x,
        raw.geometry.extent_y,
        raw.geometry.nx,
        raw.geometry.ny,
    )?;
    let thickness3d = raw.geometry.thickness.unwrap_or(material.thickness);
    let thickness_valid = thickness3d.is_finite() && thickness3d > 0.0;
    if !thickness_valid {
        return Err(scenario_error(name, "geometry.thickness: must be positive"));
    }

    let t_end_valid = raw.t_end.is_finite() && raw.t_end > 0.0;
    if !t_end_valid {
        return Err(scenario_error(name, "t_end: must be positive"));
    }
    for &t in &raw.outputs.snapshot_times {
        if t < 0.0 || t > raw.t_end + 1e-15 {
            return Err(scenario_error(
                name,
                format!("outputs.snapshot_times: {t} outside [0, t_end]"),
            ));
        }
    }

    let numerics = Numerics {
        order: raw.numerics.order.unwrap_or(5),
        courant: raw.numerics.courant.unwrap_or(0.9),
        limiter: match raw.numerics.limiter.as_deref() {
            None | Some("none") => Limiter::None,
            Some("clamp") => Limiter::StencilClamp,
            Some(other) => {
                return Err(scenario_error(
                    name,
                    format!("numerics.limiter: unknown value `{other}` (expected none or clamp)"),
                ))
            }
        },
        shear_convention: match raw.numerics.shear_convention.as_deref() {
            None | Some("engineering") => ShearConvention::Engineering,
            Some("tensor") => ShearConvention::Tensor,
            Some(other) => {
                return Err(scenario_error(
                    name,
                    format!(
                        "numerics.shear_convention: unknown value `{other}` \
                         (expected engineering or tensor)"
                    ),
                ))
            }
        },
    };
    if !(1..=5).contains(&numerics.order) {
        return Err(scenario_error(name, "numerics.order: must be in 1..=5"));
    }
    let courant_valid = numerics.courant > 0.0 && numerics.courant <= 1.0;
    if !courant_valid {
        return Err(scenario_error(name, "numerics.courant: must lie in (0, 1]"));
    }

    let face_condition =
        match raw.bc.faces.as_deref() {
            None | Some("traction_free") => FaceCondition::TractionFree,
            Some("zero_gradient") => FaceCondition::ZeroGradient,
            Some(other) => return Err(scenario_error(
                name,
                format!(
                    "bc.faces: unknown value `{other}` (expected traction_free or zero_gradient)"
                ),
            )),
        };
    match raw.bc.lateral.as_deref() {
        None | Some("zero_gradient") => {}
        Some(other) => {
            return Err(scenario_error(
                name,
                format!("bc.lateral: unknown value `{other}` (only zero_gradient is supported)"),
            ))
        }
    }

    let center = raw.ic.center.map(|c| (c[0], c[1])).unwrap_or(grid.center());
    let magnitude = raw.ic.magnitude.unwrap_or(0.0);
    let needs_3d = matches!(solver, SolverKind::Elastic3d | SolverKind::Compare);

    let shell_component = |name_str: &Option<String>| -> Result<usize> {
        let text = name_str.as_deref().unwrap_or("v_x");
        component_index(text).ok_or_else(|| {
            scenario_error(
                name,
                format!("ic.component: unknown shell component `{text}`"),
            )
        })
    };
    let volume_component = |name_str: &Option<String>| -> Result<usize> {
        let text = name_str.as_deref().unwrap_or("v_1");
        component_index_3d(text).ok_or_else(|| {
            scenario_error(name, format!("ic.component: unknown 3D component `{text}`"))
        })
    };

    let kind = raw.ic.kind.as_deref().unwrap_or("zero");
    let (ic_shell, ic_3d) = match (solver, kind) {
        (_, "zero") => (InitialCondition::Zero, InitialCondition3D::Zero),
        (SolverKind::Shell, "point_velocity") => (
            InitialCondition::PointVelocity {
                component: shell_component(&raw.ic.component)?,
                magnitude,
                center,
                radius: raw.ic.radius.unwrap_or(0.0),
            },
            InitialCondition3D::Zero,
        ),
        (SolverKind::Shell, "plane_wave") => {
            let family = match raw.ic.family.as_deref().unwrap_or("pressure_in_plane") {
                "pressure_in_plane" => WaveFamily::PressureInPlane,
                "shear_in_plane" => WaveFamily::ShearInPlane,
                "pressure_out_of_plane" => WaveFamily::PressureOutOfPlane,
                "shear_out_of_plane" => WaveFamily::ShearOutOfPlane,
                other => {
                    return Err(scenario_error(
                        name,
                        format!("ic.family: unknown wave family `{other}`"),
                    ))
                }
            };
            (
                InitialCondition::PlaneWave {
                    family,
                    axis: parse_axis(raw.ic.axis.as_deref().unwrap_or("x"), name)?,
                    forward: raw.ic.forward.unwrap_or(true),
                    center: raw.ic.profile_center.unwrap_or(center.0),
                    sigma: raw.ic.sigma.unwrap_or(0.5),
                    amplitude: magnitude,
                },
                InitialCondition3D::Zero,
            )
        }
        (SolverKind::Elastic3d, "midplane_point") | (SolverKind::Compare, "point_velocity") => {
            // A compare run applies the point IC to the shell and its
            // mid-plane counterpart to every 3D case.
            let shell_ic = if solver == SolverKind::Compare {
                InitialCondition::PointVelocity {
                    component: shell_component(&raw.ic.component)?,
                    magnitude,
                    center,
                    radius: raw.ic.radius.unwrap_or(0.0),
                }
            } else {
                InitialCondition::Zero
            };
            let comp3d = if solver == SolverKind::Compare {
                let shell_idx = shell_component(&raw.ic.component)?;
                shell_to_volume_velocity(shell_idx).ok_or_else(|| {
                    scenario_error(
                        name,
                        "ic.component: compare point_velocity needs v_x or v_y",
                    )
                })?
            } else {
                volume_component(&raw.ic.component)?
            };
            (
                shell_ic,
                InitialCondition3D::MidplanePoint {
                    component: comp3d,
                    magnitude,
                    center,
                },
            )
        }
        (SolverKind::Elastic3d, "column_gradient") => (
            InitialCondition::Zero,
            InitialCondition3D::ColumnGradient {
                component: volume_component(&raw.ic.component)?,
                magnitude,
                center,
            },
        ),
        (_, other) => {
            return Err(scenario_error(
                name,
                format!(
                    "ic.kind: `{other}` is not valid for solver `{}`",
                    raw.solver
                ),
            ))
        }
    };

    // Outputs: component names must exist in the active solver's layout.
    let component_ok = |text: &str| -> bool {
        match solver {
            SolverKind::Shell => text == "vmag" || component_index(text).is_some(),
            SolverKind::Elastic3d => text == "vmag" || component_index_3d(text).is_some(),
            SolverKind::Compare => text == "vmag" || component_index(text).is_some(),
        }
    };
    for c in &raw.outputs.components {
        if !component_ok(c) {
            return Err(scenario_error(
                name,
                format!("outputs.components: unknown component `{c}`"),
            ));
        }
    }

    let mut sensors = Vec::new();
    for s in &raw.outputs.sensors {
        let idx = match solver {
            SolverKind::Elastic3d => component_index_3d(&s.component),
            _ => component_index(&s.component),
        }
        .ok_or_else(|| {
            scenario_error(
                name,
                format!(
                    "outputs.sensors.component: unknown component `{}`",
                    s.component
                ),
            )
        })?;
        let spec = SensorSpec {
            component: idx,
            center_offset: (s.center_offset[0], s.center_offset[1]),
            size: (s.size[0], s.size[1]),
        };
        spec.validate(&grid)?;
        sensors.push(spec);
    }

    let mut profiles = Vec::new();
    for p in &raw.outputs.profiles {
        if !component_ok(&p.component) {
            return Err(scenario_error(
                name,
                format!(
                    "outputs.profiles.component: unknown component `{}`",
                    p.component
                ),
            ));
        }
        let band = p.band_width.unwrap_or(1.0);
        let band_valid = band.is_finite() && band > 0.0;
        if !band_valid {
            return Err(scenario_error(
                name,
                "outputs.profiles.band_width: must be positive",
            ));
        }
        profiles.push(ProfileSpec {
            component: p.component.clone(),
            axis: parse_axis(&p.axis, name)?,
            band_width: band,
        });
    }

    let mut slices = Vec::new();
    for s in &raw.outputs.slices {
        if !needs_3d {
            return Err(scenario_error(
                name,
                "outputs.slices: only meaningful for elastic3d or compare solvers",
            ));
        }
        let plane = match s.plane.as_str() {
            "xy" => SlicePlane::Xy,
            "xz" => SlicePlane::Xz,
            "yz" => SlicePlane::Yz,
            other => {
                return Err(scenario_error(
                    name,
                    format!("outputs.slices.plane: unknown plane `{other}`"),
                ))
            }
        };
        let component = component_index_3d(&s.component).ok_or_else(|| {
            scenario_error(
                name,
                format!(
                    "outputs.slices.component: unknown component `{}`",
                    s.component
                ),
            )
        })?;
        let position = match s.position.as_str() {
            "mid" => SlicePosition::Mid,
            "top" => SlicePosition::Top,
            "bottom" => SlicePosition::Bottom,
            "source" => {
                // Through the source: index along the axis normal to the
                // plane, taken at the IC center.
                let (ci, cj) = grid.nearest(center.0, center.1);
                match plane {
                    SlicePlane::Xz => SlicePosition::Index(cj),
                    SlicePlane::Yz => SlicePosition::Index(ci),
                    SlicePlane::Xy => SlicePosition::Mid,
                }
            }
            other => {
                return Err(scenario_error(
                    name,
                    format!("outputs.slices.position: unknown position `{other}`"),
                ))
            }
        };
        slices.push(SliceSpec {
            plane,
            position,
            component,
            tag: s.position.clone(),
        });
    }

    let nz = raw.geometry.nz;
    if needs_3d && raw.compare.is_none() && nz.is_none() {
        return Err(scenario_error(
            name,
            "geometry.nz: required for the elastic3d solver",
        ));
    }

    let compare = match (&raw.compare, solver) {
        (Some(c), SolverKind::Compare) => {
            if c.thicknesses.is_empty() || c.thicknesses.len() != c.nz.len() {
                return Err(scenario_error(
                    name,
                    "compare: thicknesses and nz must be non-empty lists of equal length",
                ));
            }
            for &h in &c.thicknesses {
                let valid = h.is_finite() && h > 0.0;
                if !valid {
                    return Err(scenario_error(
                        name,
                        "compare.thicknesses: must be positive",
                    ));
                }
            }
            for &n in &c.nz {
                if n < 2 {
                    return Err(scenario_error(name, "compare.nz: need at least 2 layers"));
                }
            }
            let component = c.component.clone().unwrap_or_else(|| "v_x".to_string());
            if compare_component_kind(&component).is_none() {
                return Err(scenario_error(
                    name,
                    format!(
                        "compare.component: `{component}` cannot be compared \
                         (expected v_x, v_y, m_x, m_y or m_xy)"
                    ),
                ));
            }
            Some(CompareSpec {
                component,
                thicknesses: c.thicknesses.clone(),
                nz: c.nz.clone(),
            })
        }
        (Some(_), _) => {
            return Err(scenario_error(
                name,
                "compare: block requires solver = \"compare\"",
            ))
        }
        (None, SolverKind::Compare) => {
            return Err(scenario_error(
                name,
                "compare: block required for the compare solver",
            ))
        }
        (None, _) => None,
    };

    Ok(Scenario {
        solver,
        material,
        grid,
        nz,
        thickness3d,
        ic_shell,
        ic_3d,
        face_condition,
        numerics,
        outputs: Outputs {
            snapshot_times: raw.outputs.snapshot_times,
            components: raw.outputs.components,
            sensors,
            profiles,
            slices,
            heatmaps: raw.outputs.heatmaps,
        },
        t_end: raw.t_end,
        compare,
    })
}

fn parse_axis(text: &str, name: &str) -> Result<Axis> {
    match text {
        "x" => Ok(Axis::X),
        "y" => Ok(Axis::Y),
        "z" => Ok(Axis::Z),
        other => Err(scenario_error(
            name,
            format!("axis: unknown value `{other}` (expected x, y or z)"),
        )),
    }
}

/// Maps a shell velocity component to its 3D counterpart.
pub fn shell_to_volume_velocity(shell_component: usize) -> Option<usize> {
    use crate::elastic3d::comp3;
    match shell_component {
        comp::V_X => Some(comp3::V_1),
        comp::V_Y => Some(comp3::V_2),
        _ => None,
    }
}

/// What a compare component means on the 3D side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareKind {
    /// Mid-plane velocity of the given 3D component.
    MidplaneVelocity(usize),
    /// Moment extracted through the thickness.
    Moment(crate::postprocess::MomentComponent),
}

pub fn compare_component_kind(component: &str) -> Option<CompareKind> {
    use crate::elastic3d::comp3;
    use crate::postprocess::MomentComponent;
    match component {
        "v_x" => Some(CompareKind::MidplaneVelocity(comp3::V_1)),
        "v_y" => Some(CompareKind::MidplaneVelocity(comp3::V_2)),
        "m_x" => Some(CompareKind::Moment(MomentComponent::Xx)),
        "m_y" => Some(CompareKind::Moment(MomentComponent::Yy)),
        "m_xy" => Some(CompareKind::Moment(MomentComponent::Xy)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL_SHELL: &str = r#"
solver = "shell"
t_end = 0.0007

[material]
E = 210e9
nu = 0.3
rho = 7800.0
h = 0.02

[geometry]
extent_x = 10.0
extent_y = 10.0
nx = 201
ny = 201

[ic]
kind = "point_velocity"
component = "v_x"
magnitude = 100.0
center = [5.0, 5.0]
"#;

    #[test]
    fn minimal_shell_scenario_parses_with_defaults() {
        let s = parse_scenario_str(MINIMAL_SHELL, "test").unwrap();
        assert_eq!(s.solver, SolverKind::Shell);
        assert_eq!(s.numerics.order, 5);
        assert_eq!(s.numerics.courant, 0.9);
        assert_eq!(s.numerics.limiter, Limiter::None);
        assert_eq!(s.numerics.shear_convention, ShearConvention::Engineering);
        assert_eq!(s.grid.nx, 201);
        match s.ic_shell {
            InitialCondition::PointVelocity {
                component,
                magnitude,
                center,
                radius,
            } => {
                assert_eq!(component, comp::V_X);
                assert_eq!(magnitude, 100.0);
                assert_eq!(center, (5.0, 5.0));
                assert_eq!(radius, 0.0);
            }
            other => panic!("wrong ic: {other:?}"),
        }
    }

    #[test]
    fn empty_ic_block_means_zero() {
        let text = MINIMAL_SHELL.replace(
            "[ic]\nkind = \"point_velocity\"\ncomponent = \"v_x\"\nmagnitude = 100.0\ncenter = [5.0, 5.0]",
            "[ic]",
        );
        let s = parse_scenario_str(&text, "test").unwrap();
        assert_eq!(s.ic_shell, InitialCondition::Zero);
    }

    #[test]
    fn out_of_range_poisson_ratio_names_the_field() {
        let text = MINIMAL_SHELL.replace("nu = 0.3", "nu = 0.6");
        match parse_scenario_str(&text, "test") {
            Err(Error::InvalidParameter { field, value, .. }) => {
                assert_eq!(field, "material.nu");
                assert_eq!(value, 0.6);
            }
            other => panic!("expected material.nu error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_keys_are_rejected_with_location() {
        let text = format!("{MINIMAL_SHELL}\n[numerics]\nordr = 5\n");
        match parse_scenario_str(&text, "test") {
            Err(Error::Scenario { message, .. }) => {
                assert!(message.contains("ordr"), "{message}");
                // toml errors carry line/column context.
                assert!(message.contains("line"), "{message}");
            }
            other => panic!("expected scenario error, got {other:?}"),
        }
    }

    #[test]
    fn snapshot_times_beyond_t_end_are_rejected() {
        let text = format!("{MINIMAL_SHELL}\n[outputs]\nsnapshot_times = [0.001]\n");
        assert!(parse_scenario_str(&text, "test").is_err());
    }

    #[test]
    fn unknown_output_component_is_rejected() {
        let text = format!("{MINIMAL_SHELL}\n[outputs]\ncomponents = [\"sigma_zz\"]\n");
        match parse_scenario_str(&text, "test") {
            Err(Error::Scenario { message, .. }) => {
                assert!(message.contains("sigma_zz"), "{message}");
            }
            other => panic!("expected scenario error, got {other:?}"),
        }
    }

    #[test]
    fn plane_wave_ic_and_limiter_parse() {
        let text = MINIMAL_SHELL
            .replace(
                "kind = \"point_velocity\"\ncomponent = \"v_x\"\nmagnitude = 100.0\ncenter = [5.0, 5.0]",
                "kind = \"plane_wave\"\nfamily = \"shear_out_of_plane\"\naxis = \"y\"\nmagnitude = 2.0\nsigma = 0.4\nprofile_center = 3.0",
            )
            + "\n[numerics]\nlimiter = \"clamp\"\norder = 3\n";
        let s = parse_scenario_str(&text, "test").unwrap();
        assert_eq!(s.numerics.limiter, Limiter::StencilClamp);
        assert_eq!(s.numerics.order, 3);
        match s.ic_shell {
            InitialCondition::PlaneWave {
                family,
                axis,
                forward,
                center,
                sigma,
                amplitude,
            } => {
                assert_eq!(family, WaveFamily::ShearOutOfPlane);
                assert_eq!(axis, Axis::Y);
                assert!(forward);
                assert_eq!(center, 3.0);
                assert_eq!(sigma, 0.4);
                assert_eq!(amplitude, 2.0);
            }
            other => panic!("wrong ic: {other:?}"),
        }
    }

    #[test]
    fn compare_scenario_requires_matching_lists() {
        let text = r#"
solver = "compare"
t_end = 0.0007

[material]
E = 210e9
nu = 0.3
rho = 7800.0
h = 1.0

[geometry]
extent_x = 10.0
extent_y = 10.0
nx = 101
ny = 101

[ic]
kind = "point_velocity"
component = "v_x"
magnitude = 100.0

[compare]
component = "v_x"
thicknesses = [1.0, 0.7, 0.4]
nz = [13, 9]
"#;
        assert!(parse_scenario_str(text, "test").is_err());
        let fixed = text.replace("nz = [13, 9]", "nz = [13, 9, 5]");
        let s = parse_scenario_str(&fixed, "test").unwrap();
        let c = s.compare.unwrap();
        assert_eq!(c.thicknesses, vec![1.0, 0.7, 0.4]);
        assert_eq!(c.nz, vec![13, 9, 5]);
        match s.ic_3d {
            InitialCondition3D::MidplanePoint { component, .. } => {
                assert_eq!(component, crate::elastic3d::comp3::V_1)
            }
            other => panic!("wrong 3D ic: {other:?}"),
        }
    }
}
