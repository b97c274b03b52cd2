//! Self-checks run by the `check` subcommand.
//!
//! Each check compares an implementation against an independent oracle
//! (finite differences, closed forms, round trips) over a fixed-seed sample
//! and reports the worst error against a pinned tolerance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::fem2d::{
    mesh_rect, run_load_program, BcValue, Constraint, FemModel, LoadProgram, NewtonSettings,
};
use crate::materials::{
    cauchy_stress, energy_neohooke, neohooke_derivs, piola_from_cauchy, relative_deviation,
    response_from_uhyper, stress_from_uhyper, tangent_fd_jaumann_auto, tangent_spatial,
    NeoHookeParams,
};
use crate::rateint::Pathway;
use crate::tensor::{exp_sym, log_spd, polar_decompose, SymTensor2, Tensor2, Tensor4Sym};

/// Sample size of the randomized checks.
pub const SAMPLES: usize = 100;
/// Seed of the randomized checks.
pub const SEED: u64 = 0x5eed_2024;

pub const TANGENT_TOL: f64 = 1e-6;
pub const ENERGY_TOL: f64 = 1e-7;
pub const ROUND_TRIP_TOL: f64 = 1e-12;
pub const ADAPTER_STRESS_TOL: f64 = 1e-12;
pub const ADAPTER_TANGENT_TOL: f64 = 1e-6;
pub const PATCH_TOL: f64 = 1e-10;

pub const CHECK_NAMES: [&str; 10] = [
    "tangent_fd_rubber",
    "tangent_fd_foam",
    "tangent_small_strain",
    "energy_stress",
    "polar_round_trip",
    "log_round_trip",
    "adapter_stress",
    "adapter_tangent",
    "patch_single_element",
    "patch_four_element",
];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CheckOptions {
    /// Runs only checks whose name contains this text.
    pub filter: Option<String>,
    /// Test hook: multiplies `C_1111` of the tangent under test.
    pub tangent_fault: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub error: f64,
    pub tolerance: f64,
}

/// Uniform random rotation-stretch-rotation with `det F` drawn uniformly
/// from `j_range`.
pub fn random_deformation<R: Rng>(rng: &mut R, j_range: (f64, f64)) -> Tensor2 {
    let j = rng.gen_range(j_range.0..=j_range.1);
    let s: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-0.4..0.4f64).exp());
    let k = (j / (s[0] * s[1] * s[2])).cbrt();
    random_rotation(rng) * Tensor2::diag(k * s[0], k * s[1], k * s[2]) * random_rotation(rng)
}

pub fn random_rotation<R: Rng>(rng: &mut R) -> Tensor2 {
    loop {
        let a: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
        if n > 0.1 && n <= 1.0 {
            return Tensor2::rotation(a, rng.gen_range(0.0..std::f64::consts::PI));
        }
    }
}

fn tangent_under_test(p: &NeoHookeParams, f: &Tensor2, fault: Option<f64>) -> Result<Tensor4Sym> {
    let mut c = tangent_spatial(p, f)?;
    if let Some(s) = fault {
        c.0[0][0] *= s;
    }
    Ok(c)
}

/// Worst relative deviation of the analytic tangent from the Jaumann
/// finite-difference oracle over random `F` with `det F ∈ [0.3, 3]`.
pub fn tangent_fd_error(
    p: &NeoHookeParams,
    samples: usize,
    seed: u64,
    fault: Option<f64>,
) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let f = random_deformation(&mut rng, (0.3, 3.0));
        let exact = tangent_under_test(p, &f, fault)?;
        let fd = tangent_fd_jaumann_auto(&|g: &Tensor2| cauchy_stress(p, g), &f)?;
        worst = worst.max(relative_deviation(&exact, &fd));
    }
    Ok(worst)
}

/// Tangent at `F = I` against the isotropic small-strain moduli.
pub fn small_strain_error(p: &NeoHookeParams, fault: Option<f64>) -> Result<f64> {
    let c = tangent_under_test(p, &Tensor2::identity(), fault)?;
    let i = SymTensor2::identity();
    let exact = Tensor4Sym::identity() * (2.0 * p.mu())
        + Tensor4Sym::dyad(&i, &i) * (p.kappa() - 2.0 * p.mu() / 3.0);
    Ok(relative_deviation(&c, &exact))
}

/// Worst `|W′[ΔF] − S₁ : ΔF| / (‖S₁‖ ‖ΔF‖)` over random states, with the
/// directional derivative from Richardson-extrapolated central differences.
pub fn energy_stress_error(p: &NeoHookeParams, samples: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let f = random_deformation(&mut rng, (0.3, 3.0));
        let df = Tensor2(std::array::from_fn(|_| {
            std::array::from_fn(|_| rng.gen_range(-1.0..1.0))
        }));
        let df = df * (1.0 / df.norm());
        let central = |h: f64| -> Result<f64> {
            Ok(
                (energy_neohooke(p, &(f + df * h))? - energy_neohooke(p, &(f - df * h))?)
                    / (2.0 * h),
            )
        };
        let h = 1e-3 * f.norm();
        let d = (4.0 * central(0.5 * h)? - central(h)?) / 3.0;
        let s1 = piola_from_cauchy(&f, &cauchy_stress(p, &f)?)?;
        let an = s1.contract(&df);
        worst = worst.max((d - an).abs() / s1.norm().max(f64::MIN_POSITIVE));
    }
    Ok(worst)
}

/// Worst of `‖V R − F‖/‖F‖` and `‖R Rᵀ − I‖` over random `F`.
pub fn polar_error(samples: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let f = random_deformation(&mut rng, (0.3, 3.0));
        let (v, r) = polar_decompose(&f)?;
        let recon = (v * r - f).norm() / f.norm();
        let orth = (r * r.transpose() - Tensor2::identity()).norm();
        worst = worst.max(recon).max(orth).max((r.det() - 1.0).abs());
    }
    Ok(worst)
}

/// Worst `‖exp(log V) − V‖ / ‖V‖` over random stretches.
pub fn log_error(samples: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let f = random_deformation(&mut rng, (0.3, 3.0));
        let (v, _) = polar_decompose(&f)?;
        let back = exp_sym(&log_spd(&v)?);
        worst = worst.max((back - v).norm() / v.norm());
    }
    Ok(worst)
}

/// Worst stress and tangent deviation of the invariant-derivative adapter
/// from the direct neo-Hooke implementation.
pub fn adapter_errors(p: &NeoHookeParams, samples: usize, seed: u64) -> Result<(f64, f64)> {
    let cb = neohooke_derivs(*p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut ws, mut wt): (f64, f64) = (0.0, 0.0);
    for _ in 0..samples {
        let f = random_deformation(&mut rng, (0.3, 3.0));
        let direct = cauchy_stress(p, &f)?;
        let adapted = stress_from_uhyper(&cb, &f)?;
        ws = ws.max((adapted - direct).max_abs() / direct.max_abs().max(f64::MIN_POSITIVE));
        let resp = response_from_uhyper(&cb, &f)?;
        wt = wt.max(relative_deviation(&resp.c, &tangent_spatial(p, &f)?));
    }
    Ok((ws, wt))
}

/// Affine-displacement patch test on an `n × n` mesh of the unit square
/// (Total pathway). Boundary nodes follow `u = H X`; interior nodes are
/// solved for. Returns the worst Gauss-point stress error relative to the
/// homogeneous point-level stress.
pub fn affine_patch_error(p: &NeoHookeParams, n: usize, h: [[f64; 2]; 2]) -> Result<f64> {
    let mesh = mesh_rect(1.0, 1.0, n, n)?;
    let constraints = [
        Constraint {
            set: "boundary".into(),
            component: 0,
            value: BcValue::Affine(h[0]),
        },
        Constraint {
            set: "boundary".into(),
            component: 1,
            value: BcValue::Affine(h[1]),
        },
    ];
    let model = FemModel::new(mesh, *p, &constraints, &[], 1.0)?;
    let f = Tensor2::from_rows([
        [1.0 + h[0][0], h[0][1], 0.0],
        [h[1][0], 1.0 + h[1][1], 0.0],
        [0.0, 0.0, 1.0],
    ]);
    let exact = cauchy_stress(p, &f)?;
    let mut worst: f64 = 0.0;
    run_load_program(
        &model,
        &LoadProgram::uniform(4)?,
        Pathway::Total,
        &NewtonSettings::default(),
        |snap| {
            if snap.step == 4 {
                for g in snap.gauss.iter().flatten() {
                    worst = worst.max((g.sigma - exact).max_abs() / exact.max_abs());
                }
            }
            Ok(())
        },
    )?;
    Ok(worst)
}

/// Runs the selected checks. `Err` means a check could not be evaluated.
pub fn run_checks(opts: &CheckOptions) -> Result<Vec<CheckOutcome>> {
    let rubber = NeoHookeParams::rubber();
    let foam = NeoHookeParams::foam();
    let fault = opts.tangent_fault;
    let mut out = Vec::new();
    for name in CHECK_NAMES {
        if let Some(f) = &opts.filter {
            if !name.contains(f.as_str()) {
                continue;
            }
        }
        let (error, tolerance) = match name {
            "tangent_fd_rubber" => (
                tangent_fd_error(&rubber, SAMPLES, SEED, fault)?,
                TANGENT_TOL,
            ),
            "tangent_fd_foam" => (
                tangent_fd_error(&foam, SAMPLES, SEED + 1, fault)?,
                TANGENT_TOL,
            ),
            "tangent_small_strain" => (
                small_strain_error(&rubber, fault)?.max(small_strain_error(&foam, fault)?),
                1e-12,
            ),
            "energy_stress" => (
                energy_stress_error(&rubber, SAMPLES, SEED + 2)?.max(energy_stress_error(
                    &foam,
                    SAMPLES,
                    SEED + 3,
                )?),
                ENERGY_TOL,
            ),
            "polar_round_trip" => (polar_error(SAMPLES, SEED + 4)?, ROUND_TRIP_TOL),
            "log_round_trip" => (log_error(SAMPLES, SEED + 5)?, ROUND_TRIP_TOL),
            "adapter_stress" => (
                adapter_errors(&foam, SAMPLES, SEED + 6)?.0,
                ADAPTER_STRESS_TOL,
            ),
            "adapter_tangent" => (
                adapter_errors(&foam, SAMPLES, SEED + 6)?.1,
                ADAPTER_TANGENT_TOL,
            ),
            "patch_single_element" => (
                affine_patch_error(&foam, 1, [[0.15, 0.07], [-0.04, -0.12]])?,
                PATCH_TOL,
            ),
            "patch_four_element" => (
                affine_patch_error(&foam, 2, [[-0.1, 0.2], [0.05, 0.18]])?,
                PATCH_TOL,
            ),
            _ => unreachable!("unlisted check {name}"),
        };
        out.push(CheckOutcome {
            name,
            passed: error <= tolerance,
            error,
            tolerance,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_deformations_respect_the_det_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let f = random_deformation(&mut rng, (0.3, 3.0));
            let j = f.det();
            assert!((0.3 - 1e-12..=3.0 + 1e-12).contains(&j), "{j}");
        }
    }

    #[test]
    fn all_checks_pass() {
        let out = run_checks(&CheckOptions::default()).unwrap();
        assert_eq!(out.len(), CHECK_NAMES.len());
        for o in &out {
            assert!(o.passed, "{o:?}");
        }
    }

    #[test]
    fn fault_injection_trips_tangent_checks_only() {
        let opts = CheckOptions {
            filter: None,
            tangent_fault: Some(1.01),
        };
        let out = run_checks(&opts).unwrap();
        let failed: Vec<&str> = out.iter().filter(|o| !o.passed).map(|o| o.name).collect();
        assert_eq!(
            failed,
            [
                "tangent_fd_rubber",
                "tangent_fd_foam",
                "tangent_small_strain"
            ]
        );
    }

    #[test]
    fn filter_selects_by_name() {
        let opts = CheckOptions {
            filter: Some("tangent".into()),
            tangent_fault: None,
        };
        let names: Vec<&str> = run_checks(&opts).unwrap().iter().map(|o| o.name).collect();
        assert_eq!(
            names,
            [
                "tangent_fd_rubber",
                "tangent_fd_foam",
                "tangent_small_strain",
                "adapter_tangent"
            ]
        );
    }
}
