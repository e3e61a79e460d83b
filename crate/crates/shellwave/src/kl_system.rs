//! The 10-variable hyperbolic Kirchhoff-Love shell system.
//!
//! State vector U = (v_x, v_y, w_x, w_y, sigma_x, sigma_y, sigma_xy,
//! M_x, M_y, M_xy): mid-plane velocities, angular velocities, membrane
//! stresses and bending/twisting moments per unit length. The system
//! splits into two uncoupled blocks: the in-plane waves (velocities and
//! stresses) and the out-of-plane "momentum" waves (angular velocities
//! and moments), which both propagate at the same pair of speeds.

use nalgebra::{SMatrix, SVector};

use crate::gcm::{Axis, Decomposition};
use crate::material::{Material, ShearConvention};

pub const STATE_DIM: usize = 10;

pub type ShellVector = SVector<f64, STATE_DIM>;
pub type ShellMatrix = SMatrix<f64, STATE_DIM, STATE_DIM>;

/// Named indices into the shell state vector. The ordering is fixed and
/// shared by every module.
pub mod comp {
    pub const V_X: usize = 0;
    pub const V_Y: usize = 1;
    pub const W_X: usize = 2;
    pub const W_Y: usize = 3;
    pub const SIGMA_X: usize = 4;
    pub const SIGMA_Y: usize = 5;
    pub const SIGMA_XY: usize = 6;
    pub const M_X: usize = 7;
    pub const M_Y: usize = 8;
    pub const M_XY: usize = 9;
}

/// Component names as used in scenario files and snapshot headers.
pub const COMPONENT_NAMES: [&str; STATE_DIM] = [
    "v_x", "v_y", "w_x", "w_y", "sigma_x", "sigma_y", "sigma_xy", "m_x", "m_y", "m_xy",
];

/// Velocity/stress subsystem indices.
pub const IN_PLANE: [usize; 5] = [
    comp::V_X,
    comp::V_Y,
    comp::SIGMA_X,
    comp::SIGMA_Y,
    comp::SIGMA_XY,
];
/// Angular-velocity/moment subsystem indices.
pub const OUT_OF_PLANE: [usize; 5] = [comp::W_X, comp::W_Y, comp::M_X, comp::M_Y, comp::M_XY];

pub fn component_index(name: &str) -> Option<usize> {
    COMPONENT_NAMES.iter().position(|&n| n == name)
}

/// One directional system matrix A_x or A_y, entering the PDE as
/// `dU/dt + A dU/dx = 0` with the leading sign already folded in.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemMatrix {
    pub matrix: ShellMatrix,
    pub axis: Axis,
    pub convention: ShearConvention,
}

/// Spectral decomposition of a directional shell matrix; eigenvalues are
/// `{+cp, +cp, +cs, +cs, 0, 0, -cs, -cs, -cp, -cp}` under the engineering
/// shear convention.
pub type SpectralDecomposition = Decomposition<STATE_DIM>;

/// Assembles the directional system matrix for a valid material.
pub fn build_matrix(m: &Material, axis: Axis, convention: ShearConvention) -> SystemMatrix {
    use comp::*;
    let d = m.derive_constants();
    let e = m.youngs_modulus;
    let nu = m.poisson_ratio;
    let inv_rho = 1.0 / m.density;
    let inv_inertia = 1.0 / d.areal_inertia;
    let plane = e / (1.0 - nu * nu);
    let shear = convention.inplane_shear_coefficient(e, nu);
    let rigidity = d.flexural_rigidity;
    let twist = 0.5 * rigidity * (1.0 - nu);

    let mut a = ShellMatrix::zeros();
    match axis {
        Axis::X => {
            a[(V_X, SIGMA_X)] = inv_rho;
            a[(V_Y, SIGMA_XY)] = inv_rho;
            a[(W_X, M_X)] = inv_inertia;
            a[(W_Y, M_XY)] = inv_inertia;
            a[(SIGMA_X, V_X)] = plane;
            a[(SIGMA_Y, V_X)] = plane * nu;
            a[(SIGMA_XY, V_Y)] = shear;
            a[(M_X, W_X)] = rigidity;
            a[(M_Y, W_X)] = rigidity * nu;
            a[(M_XY, W_Y)] = twist;
        }
        Axis::Y => {
            a[(V_X, SIGMA_XY)] = inv_rho;
            a[(V_Y, SIGMA_Y)] = inv_rho;
            a[(W_X, M_XY)] = inv_inertia;
            a[(W_Y, M_Y)] = inv_inertia;
            a[(SIGMA_X, V_Y)] = plane * nu;
            a[(SIGMA_Y, V_Y)] = plane;
            a[(SIGMA_XY, V_X)] = shear;
            a[(M_X, W_Y)] = rigidity * nu;
            a[(M_Y, W_Y)] = rigidity;
            a[(M_XY, W_X)] = twist;
        }
        Axis::Z => panic!("the shell system has no z direction"),
    }
    SystemMatrix {
        matrix: a,
        axis,
        convention,
    }
}

/// Closed-form eigendecomposition of a shell system matrix.
///
/// Eigenvectors are normalized so that the velocity-type component (or,
/// for the stationary modes, the single stress/moment component) equals
/// one; ties among equal eigenvalues are ordered in-plane first.
pub fn decompose(a: &SystemMatrix, m: &Material) -> SpectralDecomposition {
    use comp::*;
    let d = m.derive_constants();
    let nu = m.poisson_ratio;
    let rho = m.density;
    let inertia = d.areal_inertia;
    let cp = d.cp_shell;
    let cs_in = (a.convention.inplane_shear_coefficient(m.youngs_modulus, nu) / rho).sqrt();
    let cs_out = d.cs_shell;

    // Component roles depend on the sweep direction: along x the
    // longitudinal family couples (v_x, sigma_x) with sigma_y slaved,
    // along y it couples (v_y, sigma_y) with sigma_x slaved; the shear
    // and moment families permute accordingly.
    let (v_long, s_long, s_slave, v_shear, s_shear) = match a.axis {
        Axis::X => (V_X, SIGMA_X, SIGMA_Y, V_Y, SIGMA_XY),
        Axis::Y => (V_Y, SIGMA_Y, SIGMA_X, V_X, SIGMA_XY),
        Axis::Z => unreachable!(),
    };
    let (w_long, m_long, m_slave, w_shear, m_shear) = match a.axis {
        Axis::X => (W_X, M_X, M_Y, W_Y, M_XY),
        Axis::Y => (W_Y, M_Y, M_X, W_X, M_XY),
        Axis::Z => unreachable!(),
    };

    let mut triples: Vec<(f64, ShellVector, ShellVector)> = Vec::with_capacity(STATE_DIM);

    for sign in [1.0f64, -1.0] {
        // In-plane longitudinal pair: support {v_long, s_long, s_slave}.
        // The slaved entry reuses the rounded impedance product so the
        // stationary left row cancels it exactly in L R = I.
        let lambda = sign * cp;
        let impedance = rho * lambda;
        let mut r = ShellVector::zeros();
        r[v_long] = 1.0;
        r[s_long] = impedance;
        r[s_slave] = nu * impedance;
        let mut l = ShellVector::zeros();
        l[v_long] = 0.5;
        l[s_long] = 0.5 / impedance;
        triples.push((lambda, r, l));

        // Out-of-plane longitudinal pair.
        let impedance = inertia * lambda;
        let mut r = ShellVector::zeros();
        r[w_long] = 1.0;
        r[m_long] = impedance;
        r[m_slave] = nu * impedance;
        let mut l = ShellVector::zeros();
        l[w_long] = 0.5;
        l[m_long] = 0.5 / impedance;
        triples.push((lambda, r, l));

        // In-plane shear pair.
        let lambda = sign * cs_in;
        let mut r = ShellVector::zeros();
        r[v_shear] = 1.0;
        r[s_shear] = rho * lambda;
        let mut l = ShellVector::zeros();
        l[v_shear] = 0.5;
        l[s_shear] = 0.5 / (rho * lambda);
        triples.push((lambda, r, l));

        // Out-of-plane twist pair.
        let lambda = sign * cs_out;
        let mut r = ShellVector::zeros();
        r[w_shear] = 1.0;
        r[m_shear] = inertia * lambda;
        let mut l = ShellVector::zeros();
        l[w_shear] = 0.5;
        l[m_shear] = 0.5 / (inertia * lambda);
        triples.push((lambda, r, l));
    }

    // Stationary modes: the slaved stress and moment components.
    let mut r = ShellVector::zeros();
    r[s_slave] = 1.0;
    let mut l = ShellVector::zeros();
    l[s_slave] = 1.0;
    l[s_long] = -nu;
    triples.push((0.0, r, l));

    let mut r = ShellVector::zeros();
    r[m_slave] = 1.0;
    let mut l = ShellVector::zeros();
    l[m_slave] = 1.0;
    l[m_long] = -nu;
    triples.push((0.0, r, l));

    Decomposition::from_triples(triples)
}
