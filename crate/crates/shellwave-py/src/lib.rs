//! Python bindings: materials with their derived constants, system
//! eigenvalues, NRMSE, and scenario execution.

use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use shellwave::elastic3d::decompose_3d;
use shellwave::gcm::Axis;
use shellwave::kl_system::{build_matrix, decompose};
use shellwave::postprocess::{self, FieldGeometry, ScalarField2D};
use shellwave::runner::{run_scenario_file, RunOptions};
use shellwave::ShearConvention;

fn to_py_err(e: shellwave::Error) -> PyErr {
    match &e {
        shellwave::Error::Io(_) => PyIOError::new_err(e.to_string()),
        _ => PyValueError::new_err(format!("[{}] {}", e.category(), e)),
    }
}

fn parse_axis(axis: &str) -> PyResult<Axis> {
    match axis {
        "x" => Ok(Axis::X),
        "y" => Ok(Axis::Y),
        "z" => Ok(Axis::Z),
        other => Err(PyValueError::new_err(format!("unknown axis `{other}`"))),
    }
}

fn parse_convention(text: &str) -> PyResult<ShearConvention> {
    match text {
        "engineering" => Ok(ShearConvention::Engineering),
        "tensor" => Ok(ShearConvention::Tensor),
        other => Err(PyValueError::new_err(format!(
            "unknown shear convention `{other}`"
        ))),
    }
}

/// Isotropic elastic material with the plate thickness; exposes every
/// derived constant used by the solvers.
#[pyclass(module = "shellwave_py", from_py_object)]
#[derive(Clone)]
struct Material {
    inner: shellwave::Material,
}

#[pymethods]
impl Material {
    #[new]
    fn new(e: f64, nu: f64, rho: f64, h: f64) -> PyResult<Self> {
        Ok(Self {
            inner: shellwave::Material::new(e, nu, rho, h).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn e(&self) -> f64 {
        self.inner.youngs_modulus
    }

    #[getter]
    fn nu(&self) -> f64 {
        self.inner.poisson_ratio
    }

    #[getter]
    fn rho(&self) -> f64 {
        self.inner.density
    }

    #[getter]
    fn h(&self) -> f64 {
        self.inner.thickness
    }

    #[getter]
    fn lame_lambda(&self) -> f64 {
        self.inner.derive_constants().lambda
    }

    #[getter]
    fn shear_modulus(&self) -> f64 {
        self.inner.derive_constants().mu
    }

    #[getter]
    fn flexural_rigidity(&self) -> f64 {
        self.inner.derive_constants().flexural_rigidity
    }

    #[getter]
    fn areal_inertia(&self) -> f64 {
        self.inner.derive_constants().areal_inertia
    }

    #[getter]
    fn cp_shell(&self) -> f64 {
        self.inner.derive_constants().cp_shell
    }

    #[getter]
    fn cs_shell(&self) -> f64 {
        self.inner.derive_constants().cs_shell
    }

    #[getter]
    fn cp_3d(&self) -> f64 {
        self.inner.derive_constants().cp_3d
    }

    #[getter]
    fn cs_3d(&self) -> f64 {
        self.inner.derive_constants().cs_3d
    }

    fn __repr__(&self) -> String {
        format!(
            "Material(E={}, nu={}, rho={}, h={})",
            self.inner.youngs_modulus,
            self.inner.poisson_ratio,
            self.inner.density,
            self.inner.thickness
        )
    }
}

/// Eigenvalues (m/s, sorted descending) of the 10x10 shell system matrix
/// for the given sweep axis.
#[pyfunction]
#[pyo3(signature = (material, axis = "x", convention = "engineering"))]
fn shell_eigenvalues(material: &Material, axis: &str, convention: &str) -> PyResult<Vec<f64>> {
    let axis = parse_axis(axis)?;
    if axis == Axis::Z {
        return Err(PyValueError::new_err("the shell system has no z direction"));
    }
    let a = build_matrix(&material.inner, axis, parse_convention(convention)?);
    Ok(decompose(&a, &material.inner).eigenvalues.to_vec())
}

/// Eigenvalues (m/s, sorted descending) of the 9x9 elastic system matrix
/// for the given sweep axis.
#[pyfunction]
#[pyo3(signature = (material, axis = "x"))]
fn elastic3d_eigenvalues(material: &Material, axis: &str) -> PyResult<Vec<f64>> {
    Ok(decompose_3d(&material.inner, parse_axis(axis)?)
        .eigenvalues
        .to_vec())
}

fn field_from_rows(rows: Vec<Vec<f64>>, name: &str) -> PyResult<ScalarField2D> {
    let ny = rows.len();
    let nx = rows.first().map(|r| r.len()).unwrap_or(0);
    if ny < 2 || nx < 2 {
        return Err(PyValueError::new_err("need at least a 2x2 field"));
    }
    if rows.iter().any(|r| r.len() != nx) {
        return Err(PyValueError::new_err("ragged rows"));
    }
    let geometry = FieldGeometry {
        nx,
        ny,
        dx: 1.0,
        dy: 1.0,
        origin: (0.0, 0.0),
    };
    let mut f = ScalarField2D::zeros(geometry, name, 0.0);
    for (j, row) in rows.into_iter().enumerate() {
        for (i, v) in row.into_iter().enumerate() {
            f.set(i, j, v);
        }
    }
    Ok(f)
}

/// NRMSE of field `a` against reference `b` (lists of equal-length
/// rows): RMSE divided by the value range of `b`.
#[pyfunction]
fn nrmse(a: Vec<Vec<f64>>, b: Vec<Vec<f64>>) -> PyResult<f64> {
    let fa = field_from_rows(a, "a")?;
    let fb = field_from_rows(b, "b")?;
    postprocess::nrmse(&fa, &fb).map_err(to_py_err)
}

/// Runs a scenario file; returns the manifest as a dict with keys
/// `scenario_hash`, `code_version`, `wall_clock_seconds` and `files`.
#[pyfunction]
#[pyo3(signature = (path, out_dir = None, threads = None, order = None, courant = None))]
fn run_scenario(
    py: Python<'_>,
    path: PathBuf,
    out_dir: Option<PathBuf>,
    threads: Option<usize>,
    order: Option<usize>,
    courant: Option<f64>,
) -> PyResult<Py<PyDict>> {
    let manifest = run_scenario_file(
        &path,
        &RunOptions {
            out_dir,
            threads,
            order,
            courant,
        },
    )
    .map_err(to_py_err)?;
    let dict = PyDict::new(py);
    dict.set_item("scenario_hash", manifest.scenario_hash)?;
    dict.set_item("code_version", manifest.code_version)?;
    dict.set_item("wall_clock_seconds", manifest.wall_clock_seconds)?;
    dict.set_item("files", manifest.files)?;
    Ok(dict.into())
}

#[pymodule]
fn shellwave_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Material>()?;
    m.add_function(wrap_pyfunction!(shell_eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(elastic3d_eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(nrmse, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    Ok(())
}
