//! Compressible neo-Hooke hyperelasticity and its tangent moduli.
//!
//! Energy per reference volume
//!
//! ```text
//! W(F) = c1 (Ī1 − 3) + (1/D1) (J − 1)²,   μ = 2 c1,  κ = 2 / D1
//! ```
//!
//! with Cauchy stress `σ = (μ/J) dev B̄ + κ (J − 1) I` and the spatial
//! tangent `ℂ = (1/J) ∂Δ(Jσ)/∂Δε` taken with respect to the Jaumann rate of
//! the Kirchhoff stress:
//!
//! ```text
//! J ℂ_ijkl = μ { ½(δik B̄jl + B̄ik δjl + δil B̄jk + B̄il δjk)
//!              − ⅔(δij B̄kl + B̄ij δkl) + (2/9) δij δkl B̄mm }
//!          + κ J (2J − 1) δij δkl
//! ```
//!
//! The volumetric block therefore enters `ℂ` itself as `κ (2J − 1) δδ`;
//! [`tangent_fd_jaumann`] confirms this placement numerically.
//!
//! The modified tangent `ℂ_mod = ℂ − σ ⊗ I` is the modulus that maps the
//! stretching onto the Jaumann rate of the *Cauchy* stress.

use crate::error::{Error, Result};
use crate::tensor::{dev, exp_sym, kronecker as d, SymTensor2, Tensor2, Tensor4Sym};

/// Material constants of the compressible neo-Hooke model.
///
/// Only `c1` and `D1` are stored; `μ = 2 c1` and `κ = 2 / D1` are derived on
/// demand.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NeoHookeParams {
    c1: f64,
    d1: f64,
}

impl NeoHookeParams {
    pub fn new(c1: f64, d1: f64) -> Result<Self> {
        if !(c1 > 0.0 && c1.is_finite()) || !(d1 > 0.0 && d1.is_finite()) {
            return Err(Error::Config(format!(
                "neo-Hooke constants must be positive and finite (c1 = {c1}, D1 = {d1})"
            )));
        }
        Ok(Self { c1, d1 })
    }

    /// From shear modulus `μ` and bulk modulus `κ` (MPa).
    pub fn from_moduli(mu: f64, kappa: f64) -> Result<Self> {
        Self::new(0.5 * mu, 2.0 / kappa)
    }

    /// Quasi-incompressible rubber: μ = 1.0 MPa, κ = 2000 MPa.
    pub fn rubber() -> Self {
        Self::from_moduli(1.0, 2000.0).expect("valid constants")
    }

    /// Highly compressible foam: μ = 1.0 MPa, κ = 0.78 MPa.
    pub fn foam() -> Self {
        Self::from_moduli(1.0, 0.78).expect("valid constants")
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn d1(&self) -> f64 {
        self.d1
    }

    pub fn mu(&self) -> f64 {
        2.0 * self.c1
    }

    pub fn kappa(&self) -> f64 {
        2.0 / self.d1
    }
}

/// First and second derivatives of an invariant-based energy `Ŵ(Ī1, Ī2, J)`,
/// together with the energy value itself.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct UhyperDerivs {
    pub w: f64,
    pub dw_di1b: f64,
    pub dw_di2b: f64,
    pub dw_dj: f64,
    pub d2w_di1b2: f64,
    pub d2w_di1b_di2b: f64,
    pub d2w_di2b2: f64,
    pub d2w_di1b_dj: f64,
    pub d2w_di2b_dj: f64,
    pub d2w_dj2: f64,
}

impl UhyperDerivs {
    fn is_finite(&self) -> bool {
        [
            self.w,
            self.dw_di1b,
            self.dw_di2b,
            self.dw_dj,
            self.d2w_di1b2,
            self.d2w_di1b_di2b,
            self.d2w_di2b2,
            self.d2w_di1b_dj,
            self.d2w_di2b_dj,
            self.d2w_dj2,
        ]
        .iter()
        .all(|v| v.is_finite())
    }
}

/// Everything a material point reports for one deformation state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaterialResponse {
    /// Energy per reference volume (MPa).
    pub w: f64,
    pub j: f64,
    pub sigma: SymTensor2,
    pub c: Tensor4Sym,
    pub c_mod: Tensor4Sym,
}

impl MaterialResponse {
    /// Kirchhoff stress `τ = J σ`.
    pub fn kirchhoff(&self) -> SymTensor2 {
        self.sigma * self.j
    }
}

fn jacobian(f: &Tensor2) -> Result<f64> {
    let j = f.det();
    if j > 0.0 && j.is_finite() {
        Ok(j)
    } else {
        Err(Error::NonPositiveJacobian(j))
    }
}

/// Isochoric Finger tensor `B̄ = J^{-2/3} F Fᵀ`.
fn isochoric_finger(f: &Tensor2, j: f64) -> SymTensor2 {
    f.finger() * j.powf(-2.0 / 3.0)
}

/// Stored energy `W(F)`.
pub fn energy_neohooke(p: &NeoHookeParams, f: &Tensor2) -> Result<f64> {
    let j = jacobian(f)?;
    let i1b = isochoric_finger(f, j).trace();
    Ok(p.c1 * (i1b - 3.0) + (j - 1.0).powi(2) / p.d1)
}

/// Cauchy stress `σ = (μ/J) dev B̄ + κ (J − 1) I`.
pub fn cauchy_stress(p: &NeoHookeParams, f: &Tensor2) -> Result<SymTensor2> {
    let j = jacobian(f)?;
    let bbar = isochoric_finger(f, j);
    Ok(dev(&bbar) * (p.mu() / j) + SymTensor2::identity() * (p.kappa() * (j - 1.0)))
}

/// Spatial (Jaumann) tangent modulus `ℂ`.
pub fn tangent_spatial(p: &NeoHookeParams, f: &Tensor2) -> Result<Tensor4Sym> {
    let j = jacobian(f)?;
    let b = isochoric_finger(f, j);
    let bmm = b.trace();
    let mu_j = p.mu() / j;
    let vol = p.kappa() * (2.0 * j - 1.0);
    Ok(Tensor4Sym::from_components(|i, jj, k, l| {
        let iso = 0.5
            * (d(i, k) * b.get(jj, l)
                + b.get(i, k) * d(jj, l)
                + d(i, l) * b.get(jj, k)
                + b.get(i, l) * d(jj, k))
            - 2.0 / 3.0 * (d(i, jj) * b.get(k, l) + b.get(i, jj) * d(k, l))
            + 2.0 / 9.0 * d(i, jj) * d(k, l) * bmm;
        mu_j * iso + vol * d(i, jj) * d(k, l)
    }))
}

/// `ℂ_mod = ℂ − σ ⊗ I`.
pub fn tangent_modified(c: &Tensor4Sym, sigma: &SymTensor2) -> Tensor4Sym {
    *c - Tensor4Sym::dyad(sigma, &SymTensor2::identity())
}

/// Full neo-Hooke response at one state.
pub fn response_neohooke(p: &NeoHookeParams, f: &Tensor2) -> Result<MaterialResponse> {
    let j = jacobian(f)?;
    let sigma = cauchy_stress(p, f)?;
    let c = tangent_spatial(p, f)?;
    Ok(MaterialResponse {
        w: energy_neohooke(p, f)?,
        j,
        sigma,
        c,
        c_mod: tangent_modified(&c, &sigma),
    })
}

/// Invariant-derivative callback reproducing the neo-Hooke energy.
pub fn neohooke_derivs(
    p: NeoHookeParams,
) -> impl Fn(f64, f64, f64) -> std::result::Result<UhyperDerivs, String> + Send + Sync + Copy {
    move |i1b, _i2b, j| {
        Ok(UhyperDerivs {
            w: p.c1 * (i1b - 3.0) + (j - 1.0).powi(2) / p.d1,
            dw_di1b: p.c1,
            dw_dj: 2.0 * (j - 1.0) / p.d1,
            d2w_dj2: 2.0 / p.d1,
            ..Default::default()
        })
    }
}

fn eval_derivs<C>(callback: &C, f: &Tensor2) -> Result<(UhyperDerivs, f64, SymTensor2)>
where
    C: Fn(f64, f64, f64) -> std::result::Result<UhyperDerivs, String>,
{
    let j = jacobian(f)?;
    let bbar = isochoric_finger(f, j);
    let i1b = bbar.trace();
    let i2b = 0.5 * (i1b * i1b - bbar.square().trace());
    let derivs = callback(i1b, i2b, j).map_err(Error::CallbackFailure)?;
    if !derivs.is_finite() {
        return Err(Error::CallbackFailure(format!(
            "non-finite derivatives at (Ī1, Ī2, J) = ({i1b}, {i2b}, {j})"
        )));
    }
    Ok((derivs, j, bbar))
}

/// Cauchy stress from invariant derivatives of `Ŵ(Ī1, Ī2, J)`:
///
/// `σ = (2/J) dev[(Ŵ₁ + Ī1 Ŵ₂) B̄ − Ŵ₂ B̄²] + Ŵ_J I`.
pub fn stress_from_uhyper<C>(callback: &C, f: &Tensor2) -> Result<SymTensor2>
where
    C: Fn(f64, f64, f64) -> std::result::Result<UhyperDerivs, String>,
{
    let (dw, j, bbar) = eval_derivs(callback, f)?;
    let i1b = bbar.trace();
    let iso = dev(&(bbar * (dw.dw_di1b + i1b * dw.dw_di2b) - bbar.square() * dw.dw_di2b));
    Ok(iso * (2.0 / j) + SymTensor2::identity() * dw.dw_dj)
}

/// Material response assembled from an invariant-derivative callback.
///
/// The stress comes from the first derivatives; the tangent is obtained by
/// the Jaumann finite-difference oracle applied to that same stress.
pub fn response_from_uhyper<C>(callback: &C, f: &Tensor2) -> Result<MaterialResponse>
where
    C: Fn(f64, f64, f64) -> std::result::Result<UhyperDerivs, String>,
{
    let (dw, j, _) = eval_derivs(callback, f)?;
    let sigma = stress_from_uhyper(callback, f)?;
    let c = tangent_fd_jaumann_auto(&|g: &Tensor2| stress_from_uhyper(callback, g), f)?;
    Ok(MaterialResponse {
        w: dw.w,
        j,
        sigma,
        c,
        c_mod: tangent_modified(&c, &sigma),
    })
}

/// Central-difference realization of `ℂ = (1/J) ∂Δ(Jσ)/∂Δε`.
///
/// Each Mandel basis direction `E` is applied as a spin-free logarithmic
/// strain increment `F± = exp(±(h/2) E) F`, so the Jaumann and material rates
/// coincide along the perturbation.
pub fn tangent_fd_jaumann<S>(stress_fn: &S, f: &Tensor2, h: f64) -> Result<Tensor4Sym>
where
    S: Fn(&Tensor2) -> Result<SymTensor2>,
{
    let j = jacobian(f)?;
    let mut c = Tensor4Sym::zero();
    for col in 0..6 {
        let mut unit = [0.0; 6];
        unit[col] = 1.0;
        let e = SymTensor2::from_mandel(unit);
        let f_plus = exp_sym(&(e * (0.5 * h))) * *f;
        let f_minus = exp_sym(&(e * (-0.5 * h))) * *f;
        let tau_plus = stress_fn(&f_plus)? * jacobian(&f_plus)?;
        let tau_minus = stress_fn(&f_minus)? * jacobian(&f_minus)?;
        c.set_column(col, &((tau_plus - tau_minus) * (1.0 / (h * j))));
    }
    Ok(c)
}

/// Default perturbation size for [`tangent_fd_jaumann_auto`].
pub const FD_STEP: f64 = 1e-5;

/// [`tangent_fd_jaumann`] with a Richardson-extrapolated estimate from `h`
/// and `h/2` (`h = 1e-5`). Falls back to a single evaluation at `h = 1e-6`
/// when the two estimates disagree by more than `1e-5` relative.
pub fn tangent_fd_jaumann_auto<S>(stress_fn: &S, f: &Tensor2) -> Result<Tensor4Sym>
where
    S: Fn(&Tensor2) -> Result<SymTensor2>,
{
    let coarse = tangent_fd_jaumann(stress_fn, f, FD_STEP)?;
    let fine = tangent_fd_jaumann(stress_fn, f, 0.5 * FD_STEP)?;
    let scale = fine.max_abs().max(f64::MIN_POSITIVE);
    if (coarse - fine).max_abs() <= 1e-5 * scale {
        Ok(fine * (4.0 / 3.0) - coarse * (1.0 / 3.0))
    } else {
        tangent_fd_jaumann(stress_fn, f, 1e-6)
    }
}

/// First Piola-Kirchhoff stress `S₁ = σ · Cof F`.
pub fn piola_from_cauchy(f: &Tensor2, sigma: &SymTensor2) -> Result<Tensor2> {
    jacobian(f)?;
    Ok(*sigma * f.cofactor())
}

/// Largest entry of `|a − b|` relative to the largest entry of `|b|`.
pub fn relative_deviation(a: &Tensor4Sym, b: &Tensor4Sym) -> f64 {
    (*a - *b).max_abs() / b.max_abs().max(f64::MIN_POSITIVE)
}
