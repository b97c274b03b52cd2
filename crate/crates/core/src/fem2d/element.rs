//! Plane-strain Q4 element with F-bar and 2×2 Gauss quadrature.
//!
//! Internal force per unit thickness, updated-Lagrangian form:
//!
//! ```text
//! f_a = ∫ σ̂ ∇ₓN_a dv = Σ_gp w det J₀ · J σ̂ ∇ₓN_a
//! ```
//!
//! where `σ̂` is evaluated at the F-bar gradient `F̂`. The stiffness is the
//! directional derivative of `f_a` along every nodal direction, using
//! `δσ̂ = 𝔸 : d̂ + ŵ σ̂ − σ̂ ŵ` for the pathway modulus `𝔸` (see
//! [`crate::rateint::advance`]). For the total pathway this is the exact
//! linearization; for the rate pathways it is the tangent those pathways
//! prescribe.

use crate::error::{Error, Result};
use crate::materials::NeoHookeParams;
use crate::rateint::{advance, GaussPointState, Pathway};
use crate::tensor::{SymTensor2, Tensor2};

const GP: f64 = 0.577_350_269_189_625_8; // 1/√3
const GAUSS: [[f64; 2]; 4] = [[-GP, -GP], [GP, -GP], [GP, GP], [-GP, GP]];
const CORNERS: [[f64; 2]; 4] = [[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]];

/// Reference shape-function gradients and integration weight at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointGeometry {
    pub dn_dx: [[f64; 2]; 4],
    /// Quadrature weight times reference Jacobian determinant (mm²).
    pub weight: f64,
}

/// Precomputed reference geometry of one quadrilateral.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ElementGeometry {
    pub gauss: [PointGeometry; 4],
    pub centroid: PointGeometry,
}

fn point_geometry(
    coords: &[[f64; 2]; 4],
    xi: [f64; 2],
    w: f64,
) -> std::result::Result<PointGeometry, f64> {
    let mut dn_dxi = [[0.0; 2]; 4];
    for (a, c) in CORNERS.iter().enumerate() {
        dn_dxi[a][0] = 0.25 * c[0] * (1.0 + c[1] * xi[1]);
        dn_dxi[a][1] = 0.25 * c[1] * (1.0 + c[0] * xi[0]);
    }
    // j0[i][k] = ∂X_i/∂ξ_k
    let mut j0 = [[0.0; 2]; 2];
    for a in 0..4 {
        for i in 0..2 {
            for k in 0..2 {
                j0[i][k] += coords[a][i] * dn_dxi[a][k];
            }
        }
    }
    let det = j0[0][0] * j0[1][1] - j0[0][1] * j0[1][0];
    if !(det > 0.0) {
        return Err(det);
    }
    let inv = [
        [j0[1][1] / det, -j0[0][1] / det],
        [-j0[1][0] / det, j0[0][0] / det],
    ];
    let mut dn_dx = [[0.0; 2]; 4];
    for a in 0..4 {
        for i in 0..2 {
            dn_dx[a][i] = dn_dxi[a][0] * inv[0][i] + dn_dxi[a][1] * inv[1][i];
        }
    }
    Ok(PointGeometry {
        dn_dx,
        weight: w * det,
    })
}

impl ElementGeometry {
    /// Fails with the offending reference Jacobian determinant.
    pub fn new(coords: &[[f64; 2]; 4]) -> std::result::Result<Self, f64> {
        let mut gauss = [PointGeometry {
            dn_dx: [[0.0; 2]; 4],
            weight: 0.0,
        }; 4];
        for (g, xi) in GAUSS.iter().enumerate() {
            gauss[g] = point_geometry(coords, *xi, 1.0)?;
        }
        let centroid = point_geometry(coords, [0.0, 0.0], 4.0)?;
        Ok(Self { gauss, centroid })
    }

    pub fn area(&self) -> f64 {
        self.centroid.weight
    }
}

/// Plane-strain deformation gradient from nodal displacements.
fn deformation_gradient(pg: &PointGeometry, disp: &[[f64; 2]; 4]) -> Tensor2 {
    let mut f = Tensor2::identity();
    for a in 0..4 {
        for i in 0..2 {
            for k in 0..2 {
                f.0[i][k] += disp[a][i] * pg.dn_dx[a][k];
            }
        }
    }
    f
}

/// Spatial gradients `∇ₓN_a = F⁻ᵀ ∇_X N_a` (in-plane).
fn spatial_gradients(pg: &PointGeometry, f: &Tensor2) -> [[f64; 2]; 4] {
    let det = f.0[0][0] * f.0[1][1] - f.0[0][1] * f.0[1][0];
    let inv = [
        [f.0[1][1] / det, -f.0[0][1] / det],
        [-f.0[1][0] / det, f.0[0][0] / det],
    ];
    let mut g = [[0.0; 2]; 4];
    for a in 0..4 {
        for j in 0..2 {
            g[a][j] = pg.dn_dx[a][0] * inv[0][j] + pg.dn_dx[a][1] * inv[1][j];
        }
    }
    g
}

/// F-bar modification in plane strain: the in-plane block of `F_gp` is scaled
/// by `(J_c / J_gp)^{1/2}` and the out-of-plane stretch stays 1, so that
/// `det F̂ = det F_centroid`.
pub fn fbar_modify(f_gp: &Tensor2, f_centroid: &Tensor2) -> Result<Tensor2> {
    let j_gp = f_gp.det();
    let j_c = f_centroid.det();
    if !(j_gp > 0.0) {
        return Err(Error::NonPositiveJacobian(j_gp));
    }
    if !(j_c > 0.0) {
        return Err(Error::NonPositiveJacobian(j_c));
    }
    let s = (j_c / j_gp).sqrt();
    let mut out = *f_gp;
    for i in 0..2 {
        for k in 0..2 {
            out.0[i][k] *= s;
        }
    }
    Ok(out)
}

/// Gauss-point output of one element evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussResult {
    pub sigma: SymTensor2,
    /// F-bar deformation gradient seen by the material.
    pub f: Tensor2,
    /// Volume ratio seen by the material.
    pub j: f64,
}

impl GaussResult {
    pub fn state(&self) -> GaussPointState {
        GaussPointState {
            sigma: self.sigma,
            f: self.f,
        }
    }
}

/// Element internal force (N/mm), tangent stiffness and Gauss-point data.
#[derive(Clone, Debug, PartialEq)]
pub struct ElementOutput {
    pub force: [f64; 8],
    pub stiffness: [[f64; 8]; 8],
    pub gauss: [GaussResult; 4],
}

/// Evaluates one element.
///
/// `committed` supplies the converged Gauss-point history used by the rate
/// pathways; it is ignored by [`Pathway::Total`].
pub fn element_force_and_stiffness(
    element: usize,
    geom: &ElementGeometry,
    pathway: Pathway,
    material: &NeoHookeParams,
    disp: &[[f64; 2]; 4],
    committed: &[GaussPointState; 4],
) -> Result<ElementOutput> {
    evaluate(element, geom, pathway, material, disp, committed, true)
}

/// Stiffness flavour for the rate pathways.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RateTangent {
    /// Directional derivative built from the pathway modulus, ignoring the
    /// dependence of the discrete increment on the current configuration.
    #[default]
    Continuum,
    /// Central-difference derivative of the element force, consistent with
    /// the discrete update.
    Consistent,
}

impl RateTangent {
    pub fn name(self) -> &'static str {
        match self {
            RateTangent::Continuum => "continuum",
            RateTangent::Consistent => "consistent",
        }
    }
}

impl std::str::FromStr for RateTangent {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "continuum" => Ok(RateTangent::Continuum),
            "consistent" => Ok(RateTangent::Consistent),
            other => Err(Error::Config(format!("unknown rate tangent `{other}`"))),
        }
    }
}

/// Relative nodal perturbation for [`RateTangent::Consistent`].
const FD_REL_STEP: f64 = 1e-6;

/// Like [`element_force_and_stiffness`], with the stiffness replaced by a
/// central difference of the internal force.
pub fn element_force_and_fd_stiffness(
    element: usize,
    geom: &ElementGeometry,
    pathway: Pathway,
    material: &NeoHookeParams,
    disp: &[[f64; 2]; 4],
    committed: &[GaussPointState; 4],
) -> Result<ElementOutput> {
    let mut out = evaluate(element, geom, pathway, material, disp, committed, false)?;
    let h = FD_REL_STEP * geom.area().sqrt();
    for col in 0..8 {
        let (a, i) = (col / 2, col % 2);
        let mut plus = *disp;
        plus[a][i] += h;
        let mut minus = *disp;
        minus[a][i] -= h;
        let fp = evaluate(element, geom, pathway, material, &plus, committed, false)?.force;
        let fm = evaluate(element, geom, pathway, material, &minus, committed, false)?.force;
        for row in 0..8 {
            out.stiffness[row][col] = (fp[row] - fm[row]) / (2.0 * h);
        }
    }
    Ok(out)
}

fn evaluate(
    element: usize,
    geom: &ElementGeometry,
    pathway: Pathway,
    material: &NeoHookeParams,
    disp: &[[f64; 2]; 4],
    committed: &[GaussPointState; 4],
    with_stiffness: bool,
) -> Result<ElementOutput> {
    let f_c = deformation_gradient(&geom.centroid, disp);
    let j_c = f_c.det();
    if !(j_c > 0.0) {
        return Err(Error::ElementInverted {
            element,
            gauss_point: 4,
            det: j_c,
        });
    }
    let g_c = spatial_gradients(&geom.centroid, &f_c);

    let mut force = [0.0; 8];
    let mut stiffness = [[0.0; 8]; 8];
    let mut gauss = [GaussResult {
        sigma: SymTensor2::zero(),
        f: Tensor2::identity(),
        j: 1.0,
    }; 4];

    for (gp, pg) in geom.gauss.iter().enumerate() {
        let f = deformation_gradient(pg, disp);
        let j = f.det();
        if !(j > 0.0) {
            return Err(Error::ElementInverted {
                element,
                gauss_point: gp,
                det: j,
            });
        }
        let f_hat = fbar_modify(&f, &f_c)?;
        let g = spatial_gradients(pg, &f);
        let up = advance(pathway, material, &committed[gp], &f_hat)?;
        let sigma = up.sigma.to_full();
        let dv = pg.weight * j;

        for a in 0..4 {
            for i in 0..2 {
                force[2 * a + i] += dv * (sigma.0[i][0] * g[a][0] + sigma.0[i][1] * g[a][1]);
            }
        }

        for b in (0..4).filter(|_| with_stiffness) {
            for m in 0..2 {
                // l = e_m ⊗ ∇ₓN_b, l_c the same at the centroid
                let mut l = Tensor2::zero();
                l.0[m][0] = g[b][0];
                l.0[m][1] = g[b][1];
                let tr_l = g[b][m];
                let tr_lc = g_c[b][m];
                let mut l_hat = l;
                let shift = 0.5 * (tr_lc - tr_l);
                l_hat.0[0][0] += shift;
                l_hat.0[1][1] += shift;
                let d_hat = l_hat.sym();
                let w_hat = l_hat.skew();
                let d_sigma = up.tangent.contract(&d_hat).to_full() + w_hat * sigma - sigma * w_hat;
                let col = 2 * b + m;
                for a in 0..4 {
                    // lᵀ ∇ₓN_a
                    let lt_g = [
                        l.0[0][0] * g[a][0] + l.0[1][0] * g[a][1],
                        l.0[0][1] * g[a][0] + l.0[1][1] * g[a][1],
                    ];
                    for i in 0..2 {
                        let sg = sigma.0[i][0] * g[a][0] + sigma.0[i][1] * g[a][1];
                        let dsg = d_sigma.0[i][0] * g[a][0] + d_sigma.0[i][1] * g[a][1];
                        let slg = sigma.0[i][0] * lt_g[0] + sigma.0[i][1] * lt_g[1];
                        stiffness[2 * a + i][col] += dv * (tr_l * sg + dsg - slg);
                    }
                }
            }
        }

        gauss[gp] = GaussResult {
            sigma: up.sigma,
            f: f_hat,
            j: f_hat.det(),
        };
    }

    Ok(ElementOutput {
        force,
        stiffness,
        gauss,
    })
}
