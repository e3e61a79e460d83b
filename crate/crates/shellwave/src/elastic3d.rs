//! Reference 3D linear-elasticity solver on a structured cuboid grid.
//!
//! Nine-variable first-order system (three velocities, six stresses)
//! advanced by x/y/z characteristic sweeps. The plate faces (z = +-h/2)
//! support a traction-free condition via mirrored ghosts with sign-flipped
//! tractions; lateral faces are zero-gradient.

use nalgebra::{SMatrix, SVector};
use ndarray::Array3;

use crate::error::{Error, Result};
use crate::gcm::{self, Axis, BoundaryRule, Decomposition, Limiter, SweepPlan};
use crate::material::Material;
use crate::postprocess::{FieldGeometry, ScalarField2D};

pub const STATE_DIM_3D: usize = 9;

pub type ElasticVector = SVector<f64, STATE_DIM_3D>;
pub type ElasticMatrix = SMatrix<f64, STATE_DIM_3D, STATE_DIM_3D>;

/// Indices into the 9-component state (v_1, v_2, v_3, sigma_11,
/// sigma_12, sigma_13, sigma_22, sigma_23, sigma_33).
pub mod comp3 {
    pub const V_1: usize = 0;
    pub const V_2: usize = 1;
    pub const V_3: usize = 2;
    pub const SIGMA_11: usize = 3;
    pub const SIGMA_12: usize = 4;
    pub const SIGMA_13: usize = 5;
    pub const SIGMA_22: usize = 6;
    pub const SIGMA_23: usize = 7;
    pub const SIGMA_33: usize = 8;
}

pub const COMPONENT_NAMES_3D: [&str; STATE_DIM_3D] = [
    "v_1", "v_2", "v_3", "sigma_11", "sigma_12", "sigma_13", "sigma_22", "sigma_23", "sigma_33",
];

pub fn component_index_3d(name: &str) -> Option<usize> {
    COMPONENT_NAMES_3D.iter().position(|&n| n == name)
}

/// Structured cuboid grid; the z origin sits at -h/2 so the mid-plane is
/// z = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid3 {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub dx: f64,
    pub dy: f64,
    pub dz: f64,
    pub origin: (f64, f64, f64),
}

impl Grid3 {
    /// Uniform grid over `extent_x x extent_y x thickness` with the plate
    /// mid-plane at z = 0.
    pub fn plate(
        extent_x: f64,
        extent_y: f64,
        thickness: f64,
        nx: usize,
        ny: usize,
        nz: usize,
    ) -> Result<Self> {
        for (name, n) in [("nx", nx), ("ny", ny), ("nz", nz)] {
            if n < 2 {
                return Err(Error::InvalidParameter {
                    field: format!("geometry.{name}"),
                    value: n as f64,
                    reason: "need at least 2 nodes per axis".into(),
                });
            }
        }
        for (name, v) in [
            ("extent_x", extent_x),
            ("extent_y", extent_y),
            ("thickness", thickness),
        ] {
            let valid = v.is_finite() && v > 0.0;
            if !valid {
                return Err(Error::InvalidParameter {
                    field: format!("geometry.{name}"),
                    value: v,
                    reason: "must be positive".into(),
                });
            }
        }
        Ok(Self {
            nx,
            ny,
            nz,
            dx: extent_x / (nx - 1) as f64,
            dy: extent_y / (ny - 1) as f64,
            dz: thickness / (nz - 1) as f64,
            origin: (0.0, 0.0, -thickness / 2.0),
        })
    }

    pub fn thickness(&self) -> f64 {
        (self.nz - 1) as f64 * self.dz
    }

    pub fn x(&self, i: usize) -> f64 {
        self.origin.0 + i as f64 * self.dx
    }

    pub fn y(&self, j: usize) -> f64 {
        self.origin.1 + j as f64 * self.dy
    }

    /// z coordinate, exact at the faces and (for odd nz) the mid-plane.
    pub fn z(&self, k: usize) -> f64 {
        self.thickness() * (k as f64 / (self.nz - 1) as f64 - 0.5)
    }

    pub fn nearest_xy(&self, x: f64, y: f64) -> (usize, usize) {
        let i = ((x - self.origin.0) / self.dx).round() as isize;
        let j = ((y - self.origin.1) / self.dy).round() as isize;
        (
            i.clamp(0, self.nx as isize - 1) as usize,
            j.clamp(0, self.ny as isize - 1) as usize,
        )
    }
}

/// Nine-component state on a cuboid grid; storage is (z, y, x) so that
/// x-lines are contiguous.
#[derive(Debug, Clone)]
pub struct ElasticField3D {
    pub grid: Grid3,
    pub state: Array3<ElasticVector>,
    pub time: f64,
    pub step: usize,
}

impl ElasticField3D {
    pub fn zeros(grid: Grid3) -> Self {
        Self {
            state: Array3::from_elem((grid.nz, grid.ny, grid.nx), ElasticVector::zeros()),
            grid,
            time: 0.0,
            step: 0,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.state.iter().fold(0.0f64, |m, u| m.max(u.amax()))
    }

    pub fn max_abs_component(&self, component: usize) -> f64 {
        self.state
            .iter()
            .fold(0.0f64, |m, u| m.max(u[component].abs()))
    }

    /// First non-finite entry, if any.
    pub fn find_non_finite(&self) -> Option<(usize, usize, usize, usize)> {
        for ((k, j, i), u) in self.state.indexed_iter() {
            for c in 0..STATE_DIM_3D {
                if !u[c].is_finite() {
                    return Some((i, j, k, c));
                }
            }
        }
        None
    }

    /// Extracts one component on a coordinate plane as a 2D field.
    pub fn slice(
        &self,
        plane: SlicePlane,
        position: SlicePosition,
        component: usize,
    ) -> ScalarField2D {
        let g = &self.grid;
        let name = COMPONENT_NAMES_3D[component];
        match plane {
            SlicePlane::Xy => {
                let k = position.resolve(g.nz);
                let geometry = FieldGeometry {
                    nx: g.nx,
                    ny: g.ny,
                    dx: g.dx,
                    dy: g.dy,
                    origin: (g.origin.0, g.origin.1),
                };
                let mut out = ScalarField2D::zeros(geometry, name, self.time);
                for j in 0..g.ny {
                    for i in 0..g.nx {
                        out.set(i, j, self.state[[k, j, i]][component]);
                    }
                }
                out
            }
            SlicePlane::Xz => {
                let j = position.resolve(g.ny);
                let geometry = FieldGeometry {
                    nx: g.nx,
                    ny: g.nz,
                    dx: g.dx,
                    dy: g.dz,
                    origin: (g.origin.0, g.origin.2),
                };
                let mut out = ScalarField2D::zeros(geometry, name, self.time);
                for k in 0..g.nz {
                    for i in 0..g.nx {
                        out.set(i, k, self.state[[k, j, i]][component]);
                    }
                }
                out
            }
            SlicePlane::Yz => {
                let i = position.resolve(g.nx);
                let geometry = FieldGeometry {
                    nx: g.ny,
                    ny: g.nz,
                    dx: g.dy,
                    dy: g.dz,
                    origin: (g.origin.1, g.origin.2),
                };
                let mut out = ScalarField2D::zeros(geometry, name, self.time);
                for k in 0..g.nz {
                    for j in 0..g.ny {
                        out.set(j, k, self.state[[k, j, i]][component]);
                    }
                }
                out
            }
        }
    }

    pub fn midplane(&self, component: usize) -> ScalarField2D {
        self.slice(SlicePlane::Xy, SlicePosition::Mid, component)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlicePlane {
    Xy,
    Xz,
    Yz,
}

/// Position of a slice along the axis normal to its plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlicePosition {
    Mid,
    Top,
    Bottom,
    Index(usize),
}

impl SlicePosition {
    fn resolve(self, n: usize) -> usize {
        match self {
            SlicePosition::Mid => (n - 1) / 2,
            SlicePosition::Top => n - 1,
            SlicePosition::Bottom => 0,
            SlicePosition::Index(k) => k.min(n - 1),
        }
    }
}

/// The three directional system matrices of the 9-variable formulation.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemMatrix3D {
    /// Indexed by [x, y, z].
    pub matrices: [ElasticMatrix; 3],
}

/// Assembles the constant, material-only matrices from the motion
/// equations and the isotropic rheology.
pub fn build_matrices_3d(m: &Material) -> SystemMatrix3D {
    use comp3::*;
    let d = m.derive_constants();
    let inv_rho = 1.0 / m.density;
    let lam = d.lambda;
    let mu = d.mu;
    let lam2mu = lam + 2.0 * mu;

    let mut ax = ElasticMatrix::zeros();
    ax[(V_1, SIGMA_11)] = inv_rho;
    ax[(V_2, SIGMA_12)] = inv_rho;
    ax[(V_3, SIGMA_13)] = inv_rho;
    ax[(SIGMA_11, V_1)] = lam2mu;
    ax[(SIGMA_12, V_2)] = mu;
    ax[(SIGMA_13, V_3)] = mu;
    ax[(SIGMA_22, V_1)] = lam;
    ax[(SIGMA_33, V_1)] = lam;

    let mut ay = ElasticMatrix::zeros();
    ay[(V_1, SIGMA_12)] = inv_rho;
    ay[(V_2, SIGMA_22)] = inv_rho;
    ay[(V_3, SIGMA_23)] = inv_rho;
    ay[(SIGMA_11, V_2)] = lam;
    ay[(SIGMA_12, V_1)] = mu;
    ay[(SIGMA_22, V_2)] = lam2mu;
    ay[(SIGMA_23, V_3)] = mu;
    ay[(SIGMA_33, V_2)] = lam;

    let mut az = ElasticMatrix::zeros();
    az[(V_1, SIGMA_13)] = inv_rho;
    az[(V_2, SIGMA_23)] = inv_rho;
    az[(V_3, SIGMA_33)] = inv_rho;
    az[(SIGMA_11, V_3)] = lam;
    az[(SIGMA_13, V_1)] = mu;
    az[(SIGMA_22, V_3)] = lam;
    az[(SIGMA_23, V_2)] = mu;
    az[(SIGMA_33, V_3)] = lam2mu;

    SystemMatrix3D {
        matrices: [ax, ay, az],
    }
}

/// Closed-form eigendecomposition of one directional 3D matrix;
/// eigenvalues {+cp, +cs, +cs, 0, 0, 0, -cs, -cs, -cp}.
pub fn decompose_3d(m: &Material, axis: Axis) -> Decomposition<STATE_DIM_3D> {
    use comp3::*;
    let d = m.derive_constants();
    let rho = m.density;
    let cp = d.cp_3d;
    let cs = d.cs_3d;
    // Fraction of the longitudinal stress carried by the slaved normal
    // components; shared with the left rows so L R cancels exactly.
    let slave_ratio = d.lambda / (d.lambda + 2.0 * d.mu);

    // (normal velocity, normal stress, slaved normals, decoupled shear,
    //  shear pairs) per sweep direction.
    let (v_n, s_nn, slaves, s_free, shear_pairs) = match axis {
        Axis::X => (
            V_1,
            SIGMA_11,
            [SIGMA_22, SIGMA_33],
            SIGMA_23,
            [(V_2, SIGMA_12), (V_3, SIGMA_13)],
        ),
        Axis::Y => (
            V_2,
            SIGMA_22,
            [SIGMA_11, SIGMA_33],
            SIGMA_13,
            [(V_1, SIGMA_12), (V_3, SIGMA_23)],
        ),
        Axis::Z => (
            V_3,
            SIGMA_33,
            [SIGMA_11, SIGMA_22],
            SIGMA_12,
            [(V_1, SIGMA_13), (V_2, SIGMA_23)],
        ),
    };

    let mut triples: Vec<(f64, ElasticVector, ElasticVector)> = Vec::with_capacity(STATE_DIM_3D);

    for sign in [1.0f64, -1.0] {
        let lambda = sign * cp;
        let impedance = rho * lambda;
        let mut r = ElasticVector::zeros();
        r[v_n] = 1.0;
        r[s_nn] = impedance;
        for &s in &slaves {
            r[s] = slave_ratio * impedance;
        }
        let mut l = ElasticVector::zeros();
        l[v_n] = 0.5;
        l[s_nn] = 0.5 / impedance;
        triples.push((lambda, r, l));

        for &(v_t, s_nt) in &shear_pairs {
            let lambda = sign * cs;
            let impedance = rho * lambda;
            let mut r = ElasticVector::zeros();
            r[v_t] = 1.0;
            r[s_nt] = impedance;
            let mut l = ElasticVector::zeros();
            l[v_t] = 0.5;
            l[s_nt] = 0.5 / impedance;
            triples.push((lambda, r, l));
        }
    }

    for &s in &slaves {
        let mut r = ElasticVector::zeros();
        r[s] = 1.0;
        let mut l = ElasticVector::zeros();
        l[s] = 1.0;
        l[s_nn] = -slave_ratio;
        triples.push((0.0, r, l));
    }
    let mut r = ElasticVector::zeros();
    r[s_free] = 1.0;
    let mut l = ElasticVector::zeros();
    l[s_free] = 1.0;
    triples.push((0.0, r, l));

    Decomposition::from_triples(triples)
}

/// Boundary condition on the plate faces z = +-h/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FaceCondition {
    /// Free surface: mirrored ghosts with sign-flipped tractions, and the
    /// traction components pinned to zero on the face nodes after every
    /// sweep.
    #[default]
    TractionFree,
    /// Plain zero-gradient, as on the lateral boundaries.
    ZeroGradient,
}

/// Initial states for the plate experiments.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition3D {
    Zero,
    /// One velocity component set at the node of the mid-plane layer
    /// nearest `center`. Requires an odd number of z-layers.
    MidplanePoint {
        component: usize,
        magnitude: f64,
        center: (f64, f64),
    },
    /// Linear through-thickness profile `v(z) = magnitude * 2 z / h` on
    /// the column of nodes nearest `center`: -magnitude at the bottom
    /// face, +magnitude at the top face.
    ColumnGradient {
        component: usize,
        magnitude: f64,
        center: (f64, f64),
    },
}

fn check_center_inside(grid: &Grid3, center: (f64, f64)) -> Result<()> {
    let (ex, ey) = (
        (grid.nx - 1) as f64 * grid.dx,
        (grid.ny - 1) as f64 * grid.dy,
    );
    let (x, y) = (center.0 - grid.origin.0, center.1 - grid.origin.1);
    if x < 0.0 || y < 0.0 || x > ex || y > ey {
        return Err(Error::InvalidParameter {
            field: "ic.center".into(),
            value: center.0,
            reason: "initial condition lies outside the domain".into(),
        });
    }
    Ok(())
}

/// Builds the initial field for a scenario.
pub fn init_3d(grid: Grid3, ic: &InitialCondition3D) -> Result<ElasticField3D> {
    let mut field = ElasticField3D::zeros(grid);
    match ic {
        InitialCondition3D::Zero => {}
        InitialCondition3D::MidplanePoint {
            component,
            magnitude,
            center,
        } => {
            check_center_inside(&grid, *center)?;
            if grid.nz.is_multiple_of(2) {
                return Err(Error::InvalidParameter {
                    field: "geometry.nz".into(),
                    value: grid.nz as f64,
                    reason: "mid-plane point source needs an odd number of z-layers".into(),
                });
            }
            let (i, j) = grid.nearest_xy(center.0, center.1);
            let k = (grid.nz - 1) / 2;
            field.state[[k, j, i]][*component] = *magnitude;
        }
        InitialCondition3D::ColumnGradient {
            component,
            magnitude,
            center,
        } => {
            check_center_inside(&grid, *center)?;
            let (i, j) = grid.nearest_xy(center.0, center.1);
            let h = grid.thickness();
            for k in 0..grid.nz {
                field.state[[k, j, i]][*component] = magnitude * 2.0 * grid.z(k) / h;
            }
        }
    }
    Ok(field)
}

/// Per-axis decompositions plus stepping state for one 3D simulation.
pub struct Elastic3DSolver {
    pub material: Material,
    pub system: SystemMatrix3D,
    decomps: [Decomposition<STATE_DIM_3D>; 3],
    pub face_condition: FaceCondition,
    pub order: usize,
    pub courant: f64,
    pub limiter: Limiter,
    pub field: ElasticField3D,
    buffer: Array3<ElasticVector>,
    traction_signs: ElasticVector,
}

impl Elastic3DSolver {
    pub fn new(
        field: ElasticField3D,
        material: Material,
        order: usize,
        courant: f64,
        limiter: Limiter,
        face_condition: FaceCondition,
    ) -> Result<Self> {
        let courant_valid = courant > 0.0 && courant <= 1.0;
        if !courant_valid {
            return Err(Error::InvalidParameter {
                field: "numerics.courant".into(),
                value: courant,
                reason: "must lie in (0, 1]".into(),
            });
        }
        if !(1..=gcm::MAX_ORDER).contains(&order) {
            return Err(Error::InvalidParameter {
                field: "numerics.order".into(),
                value: order as f64,
                reason: "interpolation order must be in 1..=5".into(),
            });
        }
        let system = build_matrices_3d(&material);
        let decomps = [
            decompose_3d(&material, Axis::X),
            decompose_3d(&material, Axis::Y),
            decompose_3d(&material, Axis::Z),
        ];
        let mut traction_signs = ElasticVector::from_element(1.0);
        traction_signs[comp3::SIGMA_13] = -1.0;
        traction_signs[comp3::SIGMA_23] = -1.0;
        traction_signs[comp3::SIGMA_33] = -1.0;
        let buffer = field.state.clone();
        Ok(Self {
            material,
            system,
            decomps,
            face_condition,
            order,
            courant,
            limiter,
            field,
            buffer,
            traction_signs,
        })
    }

    /// Largest stable step for the current grid and material.
    pub fn stable_dt(&self) -> f64 {
        let g = &self.field.grid;
        let cp = self.material.derive_constants().cp_3d;
        gcm::compute_time_step(&[g.dx, g.dy, g.dz], cp, self.courant)
            .expect("grid and material validated at construction")
    }

    /// One full step: three axis sweeps, order x-y-z on even steps and
    /// z-y-x on odd steps.
    pub fn advance(&mut self, dt: f64) -> Result<()> {
        // (sweep axis, ndarray axis index): state is stored (z, y, x).
        let order_even = [(Axis::X, 2usize), (Axis::Y, 1), (Axis::Z, 0)];
        let order_odd = [(Axis::Z, 0usize), (Axis::Y, 1), (Axis::X, 2)];
        let sweeps = if self.field.step.is_multiple_of(2) {
            order_even
        } else {
            order_odd
        };

        for (axis, nd_axis) in sweeps {
            let g = &self.field.grid;
            let spacing = match axis {
                Axis::X => g.dx,
                Axis::Y => g.dy,
                Axis::Z => g.dz,
            };
            let plan = SweepPlan::new(axis, spacing, dt, self.order, self.limiter)?;
            let decomp = match axis {
                Axis::X => &self.decomps[0],
                Axis::Y => &self.decomps[1],
                Axis::Z => &self.decomps[2],
            };
            let (bc_lo, bc_hi) = if axis == Axis::Z {
                match self.face_condition {
                    FaceCondition::TractionFree => (
                        BoundaryRule::MirrorSignFlip(self.traction_signs),
                        BoundaryRule::MirrorSignFlip(self.traction_signs),
                    ),
                    FaceCondition::ZeroGradient => {
                        (BoundaryRule::ZeroGradient, BoundaryRule::ZeroGradient)
                    }
                }
            } else {
                (BoundaryRule::ZeroGradient, BoundaryRule::ZeroGradient)
            };
            gcm::sweep_axis_3d(
                &self.field.state,
                &mut self.buffer,
                nd_axis,
                decomp,
                &plan,
                &bc_lo,
                &bc_hi,
            )?;
            std::mem::swap(&mut self.field.state, &mut self.buffer);
            if self.face_condition == FaceCondition::TractionFree {
                self.pin_face_tractions();
            }
        }

        self.field.time += dt;
        self.field.step += 1;
        if let Some((i, j, k, c)) = self.field.find_non_finite() {
            return Err(Error::NonFinite {
                step: self.field.step,
                i,
                j,
                k,
                component: c,
            });
        }
        Ok(())
    }

    /// Free-surface condition enforced strongly: the traction components
    /// vanish on the face nodes after every sweep. Tangential sweeps
    /// perturb them at O(dt); the projection restores the exact condition.
    fn pin_face_tractions(&mut self) {
        let nz = self.field.grid.nz;
        for k in [0, nz - 1] {
            for u in self
                .field
                .state
                .index_axis_mut(ndarray::Axis(0), k)
                .iter_mut()
            {
                u[comp3::SIGMA_13] = 0.0;
                u[comp3::SIGMA_23] = 0.0;
                u[comp3::SIGMA_33] = 0.0;
            }
        }
    }

    /// Steps until `t_end`, clipping the last step. `on_step` runs after
    /// every completed step.
    pub fn run_to(&mut self, t_end: f64, mut on_step: impl FnMut(&ElasticField3D)) -> Result<()> {
        let dt_stable = self.stable_dt();
        while self.field.time < t_end - 1e-15 * t_end.max(1.0) {
            let dt = dt_stable.min(t_end - self.field.time);
            self.advance(dt)?;
            on_step(&self.field);
        }
        Ok(())
    }

    /// Largest |traction| on the two faces.
    pub fn face_traction_residual(&self) -> f64 {
        let nz = self.field.grid.nz;
        let mut worst = 0.0f64;
        for k in [0, nz - 1] {
            for u in self.field.state.index_axis(ndarray::Axis(0), k).iter() {
                worst = worst
                    .max(u[comp3::SIGMA_13].abs())
                    .max(u[comp3::SIGMA_23].abs())
                    .max(u[comp3::SIGMA_33].abs());
            }
        }
        worst
    }

    /// Largest |sigma| over all six stress components and all nodes.
    pub fn max_abs_stress(&self) -> f64 {
        use comp3::*;
        let mut worst = 0.0f64;
        for u in self.field.state.iter() {
            for c in [SIGMA_11, SIGMA_12, SIGMA_13, SIGMA_22, SIGMA_23, SIGMA_33] {
                worst = worst.max(u[c].abs());
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn steel(h: f64) -> Material {
        Material::new(210e9, 0.3, 7800.0, h).unwrap()
    }

    fn to_dmatrix(a: &ElasticMatrix) -> DMatrix<f64> {
        DMatrix::from_fn(STATE_DIM_3D, STATE_DIM_3D, |i, j| a[(i, j)])
    }

    #[test]
    fn lame_constants_give_the_p_wave_speed() {
        // Direct closed-form evaluation, cross-checked against the
        // balanced dense eigensolver on the 9x9 matrix below.
        let m = steel(1.0);
        let d = m.derive_constants();
        let lambda = 210e9 * 0.3 / (1.3 * 0.4);
        let mu = 210e9 / 2.6;
        assert!((d.lambda - lambda).abs() < 1e-3);
        assert!((d.mu - mu).abs() < 1e-3);
        let cp = ((lambda + 2.0 * mu) / 7800.0f64).sqrt();
        assert!((d.cp_3d - cp).abs() < 1e-9 * cp);

        let dec = decompose_3d(&m, Axis::X);
        assert!((dec.eigenvalues[0] - cp).abs() < 1e-9 * cp);
        assert_eq!(dec.eigenvalues[1], d.cs_3d);
    }

    #[test]
    fn schur_oracle_on_the_nine_by_nine_matrix() {
        let m = steel(1.0);
        let d = m.derive_constants();
        let a = build_matrices_3d(&m).matrices[0];
        // Balance stresses by rho*cp before the generic eigensolver.
        let scale = m.density * d.cp_3d;
        let balanced = DMatrix::from_fn(STATE_DIM_3D, STATE_DIM_3D, |i, j| {
            let si = if i >= 3 { scale } else { 1.0 };
            let sj = if j >= 3 { scale } else { 1.0 };
            a[(i, j)] * sj / si
        });
        let mut numeric: Vec<f64> = balanced
            .complex_eigenvalues()
            .iter()
            .map(|c| {
                assert!(c.im.abs() < 1e-12 * d.cp_3d);
                c.re
            })
            .collect();
        numeric.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let analytic = decompose_3d(&m, Axis::X).eigenvalues;
        for (n, a) in numeric.iter().zip(analytic.iter()) {
            assert!((n - a).abs() <= 1e-9 * d.cp_3d, "{n} vs {a}");
        }
    }

    #[test]
    fn eigen_multiset_and_reconstruction_per_axis() {
        let m = steel(0.7);
        let d = m.derive_constants();
        let sys = build_matrices_3d(&m);
        for (idx, axis) in [(0, Axis::X), (1, Axis::Y), (2, Axis::Z)] {
            let dec = decompose_3d(&m, axis);
            let expect = [
                d.cp_3d, d.cs_3d, d.cs_3d, 0.0, 0.0, 0.0, -d.cs_3d, -d.cs_3d, -d.cp_3d,
            ];
            for (got, want) in dec.eigenvalues.iter().zip(expect) {
                assert!((got - want).abs() <= 1e-12 * d.cp_3d);
            }
            let recon = dec.reconstruct();
            let rel = to_dmatrix(&(recon - sys.matrices[idx])).norm()
                / to_dmatrix(&sys.matrices[idx]).norm();
            assert!(rel < 1e-12, "axis {axis:?}: {rel}");
            let identity = dec.left * dec.right;
            assert!((identity - ElasticMatrix::identity()).norm() < 1e-12);
        }
    }

    #[test]
    fn transverse_normal_rows_couple_only_to_the_normal_velocity() {
        // Hand derivation: along x, sigma_22 and sigma_33 change only
        // through lambda * dv_1/dx; sigma_23 does not change at all.
        let m = steel(1.0);
        let d = m.derive_constants();
        let ax = build_matrices_3d(&m).matrices[0];
        for row in [comp3::SIGMA_22, comp3::SIGMA_33] {
            for col in 0..STATE_DIM_3D {
                let expect = if col == comp3::V_1 { d.lambda } else { 0.0 };
                assert_eq!(ax[(row, col)], expect, "row {row} col {col}");
            }
        }
        for col in 0..STATE_DIM_3D {
            assert_eq!(ax[(comp3::SIGMA_23, col)], 0.0);
        }
    }

    #[test]
    fn gradient_ic_is_exact_at_faces_and_midplane() {
        let grid = Grid3::plate(10.0, 10.0, 1.0, 11, 11, 13).unwrap();
        let ic = InitialCondition3D::ColumnGradient {
            component: comp3::V_1,
            magnitude: 100.0,
            center: (5.0, 5.0),
        };
        let f = init_3d(grid, &ic).unwrap();
        let (i, j) = grid.nearest_xy(5.0, 5.0);
        assert_eq!(f.state[[0, j, i]][comp3::V_1], -100.0);
        assert_eq!(f.state[[12, j, i]][comp3::V_1], 100.0);
        assert_eq!(f.state[[6, j, i]][comp3::V_1], 0.0);
        // Off-column nodes are untouched.
        assert_eq!(f.state[[6, j, i + 1]][comp3::V_1], 0.0);
    }

    #[test]
    fn midplane_point_ic_sets_exactly_one_node() {
        let grid = Grid3::plate(10.0, 10.0, 0.4, 21, 21, 5).unwrap();
        let ic = InitialCondition3D::MidplanePoint {
            component: comp3::V_1,
            magnitude: 100.0,
            center: (5.0, 5.0),
        };
        let f = init_3d(grid, &ic).unwrap();
        let mut nonzero = 0;
        for u in f.state.iter() {
            if u[comp3::V_1] != 0.0 {
                nonzero += 1;
                assert_eq!(u[comp3::V_1], 100.0);
            }
        }
        assert_eq!(nonzero, 1);

        let even = Grid3::plate(10.0, 10.0, 0.4, 21, 21, 4).unwrap();
        assert!(init_3d(even, &ic).is_err());
    }

    #[test]
    fn zero_ic_stays_zero() {
        let grid = Grid3::plate(2.0, 2.0, 0.4, 11, 11, 5).unwrap();
        let f = init_3d(grid, &InitialCondition3D::Zero).unwrap();
        let m = steel(0.4);
        let mut solver =
            Elastic3DSolver::new(f, m, 5, 0.9, Limiter::None, FaceCondition::TractionFree).unwrap();
        let dt = solver.stable_dt();
        for _ in 0..5 {
            solver.advance(dt).unwrap();
        }
        assert_eq!(solver.field.max_abs(), 0.0);
    }

    #[test]
    fn traction_residual_stays_at_rounding_level() {
        let grid = Grid3::plate(4.0, 4.0, 0.5, 41, 41, 7).unwrap();
        let m = steel(0.5);
        let ic = InitialCondition3D::ColumnGradient {
            component: comp3::V_1,
            magnitude: 100.0,
            center: (2.0, 2.0),
        };
        let f = init_3d(grid, &ic).unwrap();
        let mut solver =
            Elastic3DSolver::new(f, m, 5, 0.9, Limiter::None, FaceCondition::TractionFree).unwrap();
        let dt = solver.stable_dt();
        for _ in 0..20 {
            solver.advance(dt).unwrap();
            let sigma_scale = solver.max_abs_stress();
            if sigma_scale > 0.0 {
                assert!(
                    solver.face_traction_residual() <= 1e-10 * sigma_scale,
                    "step {}: residual {} vs scale {}",
                    solver.field.step,
                    solver.face_traction_residual(),
                    sigma_scale
                );
            }
        }
    }

    #[test]
    fn parity_in_z_is_preserved() {
        // Gradient IC: v_1 antisymmetric in z. Point IC: sigma_11
        // symmetric in z. Both checked after a couple dozen steps on a
        // grid with a mid-plane layer.
        let grid = Grid3::plate(4.0, 4.0, 0.5, 31, 31, 9).unwrap();
        let m = steel(0.5);

        let f = init_3d(
            grid,
            &InitialCondition3D::ColumnGradient {
                component: comp3::V_1,
                magnitude: 100.0,
                center: (2.0, 2.0),
            },
        )
        .unwrap();
        let mut solver =
            Elastic3DSolver::new(f, m, 5, 0.9, Limiter::None, FaceCondition::TractionFree).unwrap();
        let dt = solver.stable_dt();
        for _ in 0..25 {
            solver.advance(dt).unwrap();
        }
        let scale = solver.field.max_abs_component(comp3::V_1);
        let nz = grid.nz;
        for k in 0..nz {
            let mirror = nz - 1 - k;
            for j in 0..grid.ny {
                for i in 0..grid.nx {
                    let a = solver.field.state[[k, j, i]][comp3::V_1];
                    let b = solver.field.state[[mirror, j, i]][comp3::V_1];
                    assert!(
                        (a + b).abs() <= 1e-9 * scale,
                        "v_1 parity broken at k={k} ({a} vs {b})"
                    );
                }
            }
        }

        let f = init_3d(
            grid,
            &InitialCondition3D::MidplanePoint {
                component: comp3::V_1,
                magnitude: 100.0,
                center: (2.0, 2.0),
            },
        )
        .unwrap();
        let mut solver =
            Elastic3DSolver::new(f, m, 5, 0.9, Limiter::None, FaceCondition::TractionFree).unwrap();
        for _ in 0..25 {
            solver.advance(dt).unwrap();
        }
        let scale = solver.field.max_abs_component(comp3::SIGMA_11);
        let v3_scale = solver
            .field
            .max_abs_component(comp3::V_3)
            .max(1e-12 * solver.field.max_abs_component(comp3::V_1));
        for k in 0..nz {
            let mirror = nz - 1 - k;
            for j in 0..grid.ny {
                for i in 0..grid.nx {
                    let a = solver.field.state[[k, j, i]][comp3::SIGMA_11];
                    let b = solver.field.state[[mirror, j, i]][comp3::SIGMA_11];
                    assert!(
                        (a - b).abs() <= 1e-9 * scale,
                        "sigma_11 parity broken at k={k}"
                    );
                    // The transverse velocity of the mid-plane-symmetric
                    // source is odd through the thickness.
                    let a = solver.field.state[[k, j, i]][comp3::V_3];
                    let b = solver.field.state[[mirror, j, i]][comp3::V_3];
                    assert!(
                        (a + b).abs() <= 1e-9 * v3_scale,
                        "v_3 parity broken at k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn amplitude_centroid_lags_the_leading_edge() {
        // The thickness study's qualitative "tail": multiple face
        // reflections displace the bulk of |v_1| behind the front on the
        // mid-plane ray.
        for (h, nz) in [(1.0, 13), (0.4, 5)] {
            let grid = Grid3::plate(8.0, 8.0, h, 81, 81, nz).unwrap();
            let m = steel(h);
            let f = init_3d(
                grid,
                &InitialCondition3D::MidplanePoint {
                    component: comp3::V_1,
                    magnitude: 100.0,
                    center: (4.0, 4.0),
                },
            )
            .unwrap();
            let mut solver =
                Elastic3DSolver::new(f, m, 5, 0.9, Limiter::None, FaceCondition::TractionFree)
                    .unwrap();
            solver.run_to(5e-4, |_| {}).unwrap();

            let mid = solver.field.midplane(comp3::V_1);
            let (ci, cj) = grid.nearest_xy(4.0, 4.0);
            let mut weighted = 0.0;
            let mut total = 0.0;
            let mut peak = 0.0f64;
            for i in ci..grid.nx {
                peak = peak.max(mid.value(i, cj).abs());
            }
            let mut front = 0.0f64;
            for i in ci..grid.nx {
                let r = (i - ci) as f64 * grid.dx;
                let v = mid.value(i, cj).abs();
                weighted += r * v;
                total += v;
                if v >= 0.01 * peak {
                    front = front.max(r);
                }
            }
            let centroid = weighted / total;
            assert!(
                centroid < front,
                "h={h}: centroid {centroid} should lag front {front}"
            );
        }
    }
}
