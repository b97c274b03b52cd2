//! Property tests over random tensors and deformations.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hyperrate::check::{random_deformation, random_rotation};
use hyperrate::materials::{cauchy_stress, tangent_modified, tangent_spatial};
use hyperrate::rateint::{advance, integrate_path, jaumann_update, shear_schedule};
use hyperrate::tensor::{invariants, polar_decompose, sqrt_spd};
use hyperrate::{
    GaussPointState, IncrementKin, NeoHookeParams, Pathway, SymTensor2, Tensor2, Tensor4Sym,
};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn sym() -> impl Strategy<Value = SymTensor2> {
    prop::array::uniform6(-10.0..10.0f64).prop_map(SymTensor2)
}

fn material() -> impl Strategy<Value = NeoHookeParams> {
    prop_oneof![Just(NeoHookeParams::foam()), Just(NeoHookeParams::rubber())]
}

fn full_frobenius(a: &SymTensor2) -> f64 {
    let f = a.to_full();
    f.0.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
}

fn rel(a: &SymTensor2, b: &SymTensor2) -> f64 {
    (*a - *b).max_abs() / b.max_abs().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn mandel_representation_is_an_isometry(a in sym()) {
        let m = a.to_mandel();
        let n = m.iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assert!((n - full_frobenius(&a)).abs() <= 1e-14 * n.max(1.0));
        prop_assert!((SymTensor2::from_mandel(m) - a).max_abs() <= 1e-15 * a.max_abs().max(1.0));
    }

    #[test]
    fn cayley_hamilton_second_invariant(seed in any::<u64>()) {
        let f = random_deformation(&mut rng(seed), (0.3, 3.0));
        let b = f.finger();
        let (i1, i2, _) = invariants(&b);
        let ch = 0.5 * (i1 * i1 - b.square().trace());
        prop_assert!((i2 - ch).abs() <= 1e-12 * ch.abs());
        prop_assert!((b.cofactor().trace() - ch).abs() <= 1e-12 * ch.abs());
    }

    #[test]
    fn spectral_reconstruction_with_near_degenerate_pairs(
        seed in any::<u64>(),
        l1 in -5.0..5.0f64,
        l3 in -5.0..5.0f64,
        gap_exp in prop::sample::select(vec![0.0, -3.0, -9.0, -16.0]),
    ) {
        let q = random_rotation(&mut rng(seed));
        let l2 = l1 * (1.0 + 10f64.powf(gap_exp));
        let a = SymTensor2::from_full(&(q * Tensor2::diag(l1, l2, l3) * q.transpose())).unwrap();
        let s = a.spectral();
        prop_assert!(s.values[0] >= s.values[1] && s.values[1] >= s.values[2]);
        prop_assert!((s.reconstruct() - a).norm() <= 1e-12 * a.norm().max(f64::MIN_POSITIVE));
        let v = s.vectors;
        prop_assert!((v.transpose() * v - Tensor2::identity()).norm() <= 1e-12);
    }

    #[test]
    fn polar_decomposition_is_unique(seed in any::<u64>()) {
        let f = random_deformation(&mut rng(seed), (0.3, 3.0));
        let (v, r) = polar_decompose(&f).unwrap();
        let v2 = sqrt_spd(&f.finger()).unwrap();
        prop_assert!((v - v2).norm() <= 1e-10 * v2.norm());
        prop_assert!((r * r.transpose() - Tensor2::identity()).norm() <= 1e-12);
        prop_assert!((r.det() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn stress_is_objective_and_isotropic(seed in any::<u64>(), p in material()) {
        let mut g = rng(seed);
        let f = random_deformation(&mut g, (0.3, 3.0));
        let q = random_rotation(&mut g);
        let s = cauchy_stress(&p, &f).unwrap();
        prop_assert!(rel(&cauchy_stress(&p, &(q * f)).unwrap(), &s.rotate(&q)) <= 1e-12);
        prop_assert!(rel(&cauchy_stress(&p, &(f * q)).unwrap(), &s) <= 1e-12);
    }

    #[test]
    fn spatial_tangent_has_major_symmetry(seed in any::<u64>(), p in material()) {
        let f = random_deformation(&mut rng(seed), (0.3, 3.0));
        let c = tangent_spatial(&p, &f).unwrap();
        prop_assert!(c.major_asymmetry() <= 1e-12 * c.max_abs());
    }

    #[test]
    fn modified_tangent_asymmetry_is_the_stress_dyad_skew(seed in any::<u64>(), p in material()) {
        let f = random_deformation(&mut rng(seed), (0.3, 3.0));
        let c = tangent_spatial(&p, &f).unwrap();
        let s = cauchy_stress(&p, &f).unwrap();
        let m = tangent_modified(&c, &s);
        let i = SymTensor2::identity();
        let skew = Tensor4Sym::dyad(&s, &i) - Tensor4Sym::dyad(&i, &s);
        let lhs = m - m.transpose();
        prop_assert!((lhs + skew).max_abs() <= 1e-12 * c.max_abs());
    }

    #[test]
    fn modified_correction_is_bounded_by_stress(seed in any::<u64>(), p in material()) {
        let f = random_deformation(&mut rng(seed), (0.3, 3.0));
        let c = tangent_spatial(&p, &f).unwrap();
        let s = cauchy_stress(&p, &f).unwrap();
        let d = (tangent_modified(&c, &s) - c).norm();
        prop_assert!(d <= s.norm() * 3f64.sqrt() * (1.0 + 1e-12));
    }

    #[test]
    fn pure_rotation_increments_preserve_eigenvalues(seed in any::<u64>(), s in sym()) {
        let q = random_rotation(&mut rng(seed));
        let kin = IncrementKin { d_eps: SymTensor2::zero(), d_w: Tensor2::zero(), d_r: q };
        let state = GaussPointState { sigma: s, f: Tensor2::identity() };
        let out = jaumann_update(&state, &kin, &Tensor4Sym::identity()).spectral().values;
        let want = s.spectral().values;
        for k in 0..3 {
            prop_assert!((out[k] - want[k]).abs() <= 1e-12 * s.max_abs().max(1.0));
        }
    }

    #[test]
    fn shear_paths_do_not_distinguish_the_rate_pathways(gamma in 0.05..1.5f64, steps in 50usize..400) {
        let foam = NeoHookeParams::foam();
        let sched = shear_schedule(gamma, steps);
        let u = integrate_path(&foam, Pathway::RateUnmodified, &sched).unwrap();
        let m = integrate_path(&foam, Pathway::RateModified, &sched).unwrap();
        let end = m.last().unwrap();
        prop_assert!((*u.last().unwrap() - *end).norm() <= 1e-12 * end.norm());
    }
}

const AXIS: [f64; 3] = [0.3, -0.2, 0.9];

fn stretch_and_shear(steps: usize) -> Vec<Tensor2> {
    (0..=steps)
        .map(|k| {
            let t = k as f64 / steps as f64;
            Tensor2::from_rows([
                [1.0 + 0.15 * t, 0.3 * t, 0.0],
                [0.0, 1.0 - 0.1 * t, 0.0],
                [0.0, 0.0, 1.0],
            ])
        })
        .collect()
}

/// Endpoint stress of `pathway` along `schedule`, starting stress-free at
/// `schedule[0]`.
fn endpoint(p: Pathway, schedule: &[Tensor2]) -> SymTensor2 {
    let foam = NeoHookeParams::foam();
    let mut state = GaussPointState {
        sigma: SymTensor2::zero(),
        f: schedule[0],
    };
    for f in &schedule[1..] {
        state = GaussPointState {
            sigma: advance(p, &foam, &state, f).unwrap().sigma,
            f: *f,
        };
    }
    state.sigma
}

#[test]
fn rate_update_is_objective_under_a_change_of_observer() {
    let q = Tensor2::rotation(AXIS, 1.2);
    let base = stretch_and_shear(200);
    let seen: Vec<Tensor2> = base.iter().map(|f| q * *f).collect();
    for p in Pathway::ALL {
        let a = endpoint(p, &base);
        let err = (endpoint(p, &seen) - a.rotate(&q)).max_abs() / a.max_abs();
        assert!(err <= 1e-10, "{p}: {err:e}");
    }
}

#[test]
fn rigid_rotation_after_loading_rotates_the_stress() {
    let mut sched = stretch_and_shear(100);
    let f_end = *sched.last().unwrap();
    for k in 1..=100 {
        sched.push(Tensor2::rotation(AXIS, 1.2 * k as f64 / 100.0) * f_end);
    }
    let q = Tensor2::rotation(AXIS, 1.2);
    for p in Pathway::ALL {
        let a = endpoint(p, &sched[..=100]);
        let err = (endpoint(p, &sched) - a.rotate(&q)).max_abs() / a.max_abs();
        assert!(err <= 1e-10, "{p}: {err:e}");
    }
}

/// A rotation superposed while deforming is objective only to first order in
/// the step size: the update adds `A : dEps` without the half-step rotation.
#[test]
fn simultaneous_rotation_error_decays_linearly_with_step_size() {
    let q = Tensor2::rotation(AXIS, 1.2);
    let err = |steps: usize| {
        let base = stretch_and_shear(steps);
        let rotated: Vec<Tensor2> = base
            .iter()
            .enumerate()
            .map(|(k, f)| Tensor2::rotation(AXIS, 1.2 * k as f64 / steps as f64) * *f)
            .collect();
        let a = endpoint(Pathway::RateModified, &base);
        (endpoint(Pathway::RateModified, &rotated) - a.rotate(&q)).max_abs() / a.max_abs()
    };
    let (coarse, fine) = (err(200), err(2000));
    assert!(coarse < 1e-2 && fine < 1e-3, "{coarse:e} {fine:e}");
    let ratio = coarse / fine;
    assert!((9.0..11.0).contains(&ratio), "{ratio}");
}

#[test]
fn isochoric_shear_endpoint_at_ten_thousand_steps() {
    let foam = NeoHookeParams::foam();
    let sched = shear_schedule(1.0, 10_000);
    let u = *integrate_path(&foam, Pathway::RateUnmodified, &sched)
        .unwrap()
        .last()
        .unwrap();
    let m = *integrate_path(&foam, Pathway::RateModified, &sched)
        .unwrap()
        .last()
        .unwrap();
    assert!((u - m).norm() < 1e-3 * m.norm());
}

#[test]
fn incompressible_limit_shrinks_the_correction() {
    let rubber = NeoHookeParams::rubber();
    let f = Tensor2::simple_shear(0.5, 0, 1) * Tensor2::dilation(1.0 + 1e-4);
    let c = tangent_spatial(&rubber, &f).unwrap();
    let s = cauchy_stress(&rubber, &f).unwrap();
    assert!((tangent_modified(&c, &s) - c).norm() / c.norm() < 1e-2);

    let foam = NeoHookeParams::foam();
    let f = Tensor2::dilation(1.2);
    let c = tangent_spatial(&foam, &f).unwrap();
    let s = cauchy_stress(&foam, &f).unwrap();
    assert!((tangent_modified(&c, &s) - c).norm() / c.norm() > 1e-1);
}
