//! Isotropic material parameters and every constant derived from them.
//!
//! Both solvers share one [`Material`]; all derived moduli and wave speeds
//! live in [`DerivedConstants`] so the closed forms exist in exactly one
//! place.

use crate::error::{Error, Result};

/// Isotropic elastic material plus the plate thickness.
///
/// Invariants are enforced at construction: `E > 0`, `rho > 0`, `h > 0`
/// and `-1 < nu < 0.5` (finite 3D Lame constants, positive-definite
/// strain energy).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material {
    /// Young's modulus E (Pa).
    pub youngs_modulus: f64,
    /// Poisson's ratio (dimensionless).
    pub poisson_ratio: f64,
    /// Density (kg/m^3).
    pub density: f64,
    /// Plate thickness (m).
    pub thickness: f64,
}

/// Convention for the coefficient in front of the in-plane shear-stress
/// rate equation.
///
/// `Engineering` uses G = E/(2(1+nu)), which reproduces the transverse
/// in-plane wave speed sqrt(G/rho). `Tensor` uses E/(4(1+nu)) and yields
/// sqrt(G/(2 rho)) for that wave family instead. The out-of-plane twist
/// coefficient D(1-nu)/2 is the same in both conventions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ShearConvention {
    #[default]
    Engineering,
    Tensor,
}

impl ShearConvention {
    /// Coefficient multiplying the transverse velocity gradient in the
    /// sigma_xy rate equation.
    pub fn inplane_shear_coefficient(self, e: f64, nu: f64) -> f64 {
        match self {
            ShearConvention::Engineering => e / (2.0 * (1.0 + nu)),
            ShearConvention::Tensor => e / (4.0 * (1.0 + nu)),
        }
    }
}

/// All moduli and wave speeds derived from a [`Material`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants {
    /// First Lame parameter (Pa).
    pub lambda: f64,
    /// Shear modulus G (Pa).
    pub mu: f64,
    /// Flexural rigidity D = E h^3 / (12 (1 - nu^2)) (N m).
    pub flexural_rigidity: f64,
    /// Moment of inertia of the unit area, I = rho h^3 / 12 (kg m).
    pub areal_inertia: f64,
    /// In-plane longitudinal speed sqrt(E / (rho (1 - nu^2))) (m/s).
    pub cp_shell: f64,
    /// In-plane shear / out-of-plane twist speed sqrt(G / rho) (m/s).
    pub cs_shell: f64,
    /// 3D P-wave speed sqrt((lambda + 2 mu) / rho) (m/s).
    pub cp_3d: f64,
    /// 3D S-wave speed sqrt(mu / rho) (m/s).
    pub cs_3d: f64,
}

impl Material {
    pub fn new(
        youngs_modulus: f64,
        poisson_ratio: f64,
        density: f64,
        thickness: f64,
    ) -> Result<Self> {
        let positive = |field: &str, value: f64| -> Result<()> {
            let valid = value.is_finite() && value > 0.0;
            if !valid {
                return Err(Error::InvalidParameter {
                    field: format!("material.{field}"),
                    value,
                    reason: "must be positive and finite".into(),
                });
            }
            Ok(())
        };
        positive("E", youngs_modulus)?;
        positive("rho", density)?;
        positive("h", thickness)?;
        let nu_valid = poisson_ratio > -1.0 && poisson_ratio < 0.5;
        if !nu_valid {
            return Err(Error::InvalidParameter {
                field: "material.nu".into(),
                value: poisson_ratio,
                reason: "must lie in (-1, 0.5)".into(),
            });
        }
        Ok(Self {
            youngs_modulus,
            poisson_ratio,
            density,
            thickness,
        })
    }

    /// Computes every derived constant by its closed form. Pure: the same
    /// input always produces bit-identical output.
    pub fn derive_constants(&self) -> DerivedConstants {
        let e = self.youngs_modulus;
        let nu = self.poisson_ratio;
        let rho = self.density;
        let h = self.thickness;

        let lambda = e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
        let mu = e / (2.0 * (1.0 + nu));
        let flexural_rigidity = e * h * h * h / (12.0 * (1.0 - nu * nu));
        let areal_inertia = rho * h * h * h / 12.0;

        DerivedConstants {
            lambda,
            mu,
            flexural_rigidity,
            areal_inertia,
            cp_shell: (e / (rho * (1.0 - nu * nu))).sqrt(),
            cs_shell: (mu / rho).sqrt(),
            cp_3d: ((lambda + 2.0 * mu) / rho).sqrt(),
            cs_3d: (mu / rho).sqrt(),
        }
    }
}
