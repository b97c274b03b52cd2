//! Incremental objective stress integration.
//!
//! The rate pathways carry the Cauchy stress as a state variable and advance
//! it once per increment:
//!
//! ```text
//! L̄Δt  = 2 (F₁ − F₀)(F₁ + F₀)⁻¹        (midpoint velocity gradient)
//! Δε   = sym L̄Δt,   ΔW = skew L̄Δt
//! ΔR   = (I − ½ΔW)⁻¹ (I + ½ΔW)
//! σ₁   = ΔR σ₀ ΔRᵀ + 𝔸(F̄) : Δε,          F̄ = ½ (F₀ + F₁)
//! ```
//!
//! with `𝔸 = ℂ` for [`Pathway::RateUnmodified`] and `𝔸 = ℂ − σ(F̄) ⊗ I` for
//! [`Pathway::RateModified`]. The stored stress is never reset from the total
//! formula.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::materials::{cauchy_stress, tangent_modified, tangent_spatial, NeoHookeParams};
use crate::tensor::{SymTensor2, Tensor2, Tensor4Sym};

/// Largest admissible strain-increment norm.
pub const MAX_INCREMENT_NORM: f64 = 0.2;

/// Constitutive pathway.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pathway {
    /// Hyperelastic total evaluation.
    Total,
    /// Jaumann update with the Kirchhoff-rate tangent ℂ.
    RateUnmodified,
    /// Jaumann update with ℂ_mod = ℂ − σ ⊗ I.
    RateModified,
}

impl Pathway {
    pub const ALL: [Pathway; 3] = [
        Pathway::Total,
        Pathway::RateUnmodified,
        Pathway::RateModified,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Pathway::Total => "total",
            Pathway::RateUnmodified => "rate_unmodified",
            Pathway::RateModified => "rate_modified",
        }
    }

    pub fn is_rate(self) -> bool {
        !matches!(self, Pathway::Total)
    }
}

impl fmt::Display for Pathway {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Pathway {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "total" | "uhyper" => Ok(Pathway::Total),
            "rate_unmodified" | "umat" => Ok(Pathway::RateUnmodified),
            "rate_modified" | "umat_modified" => Ok(Pathway::RateModified),
            other => Err(Error::Config(format!("unknown pathway `{other}`"))),
        }
    }
}

/// Discrete kinematics of one increment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IncrementKin {
    pub d_eps: SymTensor2,
    pub d_w: Tensor2,
    pub d_r: Tensor2,
}

/// Committed history of a rate-pathway material point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussPointState {
    pub sigma: SymTensor2,
    pub f: Tensor2,
}

impl GaussPointState {
    /// Stress-free reference state.
    pub fn reference() -> Self {
        Self {
            sigma: SymTensor2::zero(),
            f: Tensor2::identity(),
        }
    }
}

impl Default for GaussPointState {
    fn default() -> Self {
        Self::reference()
    }
}

/// Midpoint (Hughes-Winget) kinematics between two deformation gradients.
pub fn increment_kinematics(f_n: &Tensor2, f_np1: &Tensor2) -> Result<IncrementKin> {
    for f in [f_n, f_np1] {
        let j = f.det();
        if !(j > 0.0) {
            return Err(Error::NonPositiveJacobian(j));
        }
    }
    let sum_inv = (*f_n + *f_np1)
        .inverse()
        .map_err(|_| Error::SingularMidpoint)?;
    let l_dt = (*f_np1 - *f_n) * sum_inv * 2.0;
    let d_eps = l_dt.sym();
    let norm = d_eps.norm();
    if norm > MAX_INCREMENT_NORM {
        return Err(Error::TooLargeIncrement(norm));
    }
    let d_w = l_dt.skew();
    let half = d_w * 0.5;
    let d_r = (Tensor2::identity() - half)
        .inverse()
        .map_err(|_| Error::SingularMidpoint)?
        * (Tensor2::identity() + half);
    Ok(IncrementKin { d_eps, d_w, d_r })
}

/// Trial Cauchy stress `ΔR σₙ ΔRᵀ + C : Δε`.
pub fn jaumann_update(state: &GaussPointState, kin: &IncrementKin, c: &Tensor4Sym) -> SymTensor2 {
    state.sigma.rotate(&kin.d_r) + c.contract(&kin.d_eps)
}

/// Tangent the given rate pathway uses at configuration `f`. `Total` returns
/// `ℂ_mod`, which is the Cauchy-stress tangent of the hyperelastic response.
pub fn pathway_tangent(
    pathway: Pathway,
    material: &NeoHookeParams,
    f: &Tensor2,
) -> Result<Tensor4Sym> {
    let c = tangent_spatial(material, f)?;
    Ok(match pathway {
        Pathway::RateUnmodified => c,
        Pathway::Total | Pathway::RateModified => {
            tangent_modified(&c, &cauchy_stress(material, f)?)
        }
    })
}

/// Result of advancing a material point to a new deformation gradient.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointUpdate {
    pub sigma: SymTensor2,
    /// Modulus `𝔸` such that `δσ ≈ 𝔸 : δd + δw σ − σ δw`.
    pub tangent: Tensor4Sym,
}

/// Stress and tangent at `f_new` given the committed `state`.
pub fn advance(
    pathway: Pathway,
    material: &NeoHookeParams,
    state: &GaussPointState,
    f_new: &Tensor2,
) -> Result<PointUpdate> {
    match pathway {
        Pathway::Total => Ok(PointUpdate {
            sigma: cauchy_stress(material, f_new)?,
            tangent: pathway_tangent(pathway, material, f_new)?,
        }),
        Pathway::RateUnmodified | Pathway::RateModified => {
            let kin = increment_kinematics(&state.f, f_new)?;
            let f_mid = (state.f + *f_new) * 0.5;
            let tangent = pathway_tangent(pathway, material, &f_mid)?;
            Ok(PointUpdate {
                sigma: jaumann_update(state, &kin, &tangent),
                tangent,
            })
        }
    }
}

/// Stress history along a deformation schedule starting at `F = I`.
///
/// The returned vector has one entry per schedule state (the first is the
/// stress-free reference).
pub fn integrate_path(
    material: &NeoHookeParams,
    pathway: Pathway,
    schedule: &[Tensor2],
) -> Result<Vec<SymTensor2>> {
    let Some(first) = schedule.first() else {
        return Err(Error::InvalidDimension("empty deformation schedule".into()));
    };
    if (*first - Tensor2::identity()).max_abs() > 1e-14 {
        return Err(Error::InvalidDimension(
            "deformation schedule must start at the identity".into(),
        ));
    }
    let mut out = Vec::with_capacity(schedule.len());
    match pathway {
        Pathway::Total => {
            for (k, f) in schedule.iter().enumerate() {
                out.push(cauchy_stress(material, f).map_err(|e| e.at_step(k))?);
            }
        }
        Pathway::RateUnmodified | Pathway::RateModified => {
            let mut state = GaussPointState::reference();
            out.push(state.sigma);
            for (k, f) in schedule.iter().enumerate().skip(1) {
                let up = advance(pathway, material, &state, f).map_err(|e| e.at_step(k))?;
                state = GaussPointState {
                    sigma: up.sigma,
                    f: *f,
                };
                out.push(up.sigma);
            }
        }
    }
    Ok(out)
}

/// `F_k = (1 + (λ − 1) k/n) I`, k = 0..=n.
pub fn dilation_schedule(stretch: f64, steps: usize) -> Vec<Tensor2> {
    (0..=steps)
        .map(|k| Tensor2::dilation(1.0 + (stretch - 1.0) * k as f64 / steps as f64))
        .collect()
}

/// Simple shear `F_k = I + γ (k/n) e₁ ⊗ e₂`.
pub fn shear_schedule(gamma: f64, steps: usize) -> Vec<Tensor2> {
    (0..=steps)
        .map(|k| Tensor2::simple_shear(gamma * k as f64 / steps as f64, 0, 1))
        .collect()
}

/// Rigid rotation about e₃ up to `angle` radians.
pub fn rotation_schedule(angle: f64, steps: usize) -> Vec<Tensor2> {
    (0..=steps)
        .map(|k| Tensor2::rotation([0.0, 0.0, 1.0], angle * k as f64 / steps as f64))
        .collect()
}

/// Uniaxial stretch `F_k = diag(1 + (λ − 1) k/n, 1, 1)`.
pub fn uniaxial_schedule(stretch: f64, steps: usize) -> Vec<Tensor2> {
    (0..=steps)
        .map(|k| Tensor2::diag(1.0 + (stretch - 1.0) * k as f64 / steps as f64, 1.0, 1.0))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinematics_of_no_increment() {
        let f = Tensor2::from_rows([[1.1, 0.2, 0.0], [0.0, 0.9, 0.1], [0.0, 0.0, 1.0]]);
        let kin = increment_kinematics(&f, &f).unwrap();
        assert_eq!(kin.d_eps.max_abs(), 0.0);
        assert_eq!(kin.d_r, Tensor2::identity());
    }

    #[test]
    fn kinematics_of_uniaxial_stretch() {
        let kin =
            increment_kinematics(&Tensor2::identity(), &Tensor2::diag(1.1, 1.0, 1.0)).unwrap();
        assert!((kin.d_eps.get(0, 0) - 0.2 / 2.1).abs() < 1e-15);
        assert!((kin.d_eps.get(0, 0) - 0.09524).abs() < 1e-5);
        assert_eq!(kin.d_w.max_abs(), 0.0);
        assert!((kin.d_r - Tensor2::identity()).max_abs() < 1e-15);
    }

    #[test]
    fn kinematics_of_small_rotation() {
        let theta = 1e-3;
        let q = Tensor2::rotation([0.0, 0.0, 1.0], theta);
        let kin = increment_kinematics(&Tensor2::identity(), &q).unwrap();
        assert!(kin.d_eps.max_abs() < theta.powi(3));
        // Cayley transform of the midpoint spin reproduces the rotation to O(θ³)
        assert!((kin.d_r - q).max_abs() < theta.powi(3));
        assert!((kin.d_r * kin.d_r.transpose() - Tensor2::identity()).max_abs() < 1e-15);
    }

    #[test]
    fn kinematics_errors() {
        let f = Tensor2::identity();
        let flip = Tensor2::rotation([0.0, 0.0, 1.0], std::f64::consts::PI);
        assert_eq!(
            increment_kinematics(&f, &flip),
            Err(Error::SingularMidpoint)
        );
        assert!(matches!(
            increment_kinematics(&f, &Tensor2::diag(1.5, 1.0, 1.0)),
            Err(Error::TooLargeIncrement(_))
        ));
        assert!(matches!(
            increment_kinematics(&f, &Tensor2::diag(-1.0, 1.0, 1.0)),
            Err(Error::NonPositiveJacobian(_))
        ));
    }

    #[test]
    fn jaumann_update_examples() {
        let c = tangent_spatial(&NeoHookeParams::foam(), &Tensor2::identity()).unwrap();
        let quarter = Tensor2::rotation([0.0, 0.0, 1.0], std::f64::consts::FRAC_PI_2);
        let state = GaussPointState {
            sigma: SymTensor2::diag(1.0, 0.0, 0.0),
            f: Tensor2::identity(),
        };
        let kin = IncrementKin {
            d_eps: SymTensor2::zero(),
            d_w: Tensor2::zero(),
            d_r: quarter,
        };
        let s = jaumann_update(&state, &kin, &c);
        assert!((s - SymTensor2::diag(0.0, 1.0, 0.0)).max_abs() < 1e-15);

        let d_eps = SymTensor2([0.01, -0.002, 0.003, 0.004, 0.0, -0.001]);
        let kin = IncrementKin {
            d_eps,
            d_w: Tensor2::zero(),
            d_r: Tensor2::identity(),
        };
        let s = jaumann_update(&GaussPointState::reference(), &kin, &c);
        assert_eq!(s, c.contract(&d_eps));

        let kin = IncrementKin {
            d_eps: SymTensor2::zero(),
            d_w: Tensor2::zero(),
            d_r: Tensor2::identity(),
        };
        assert_eq!(jaumann_update(&state, &kin, &c), state.sigma);
    }

    #[test]
    fn rotation_only_schedule_is_stress_free() {
        let p = NeoHookeParams::foam();
        let schedule = rotation_schedule(1.2, 50);
        for pathway in Pathway::ALL {
            let out = integrate_path(&p, pathway, &schedule).unwrap();
            for s in out {
                assert!(s.max_abs() < 1e-13, "{pathway}: {s:?}");
            }
        }
    }

    #[test]
    fn schedule_must_start_at_identity() {
        let p = NeoHookeParams::foam();
        assert!(integrate_path(&p, Pathway::Total, &[]).is_err());
        let bad = vec![Tensor2::dilation(1.1)];
        assert!(integrate_path(&p, Pathway::RateModified, &bad).is_err());
    }

    #[test]
    fn pathway_names_round_trip() {
        for p in Pathway::ALL {
            assert_eq!(p.name().parse::<Pathway>().unwrap(), p);
        }
        assert!("bogus".parse::<Pathway>().is_err());
    }
}
