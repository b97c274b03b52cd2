//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export returns a flat `Float64Array`; rows are laid out
//! consecutively with the column count stated per function.

use wasm_bindgen::prelude::*;

use hyperrate::materials::{
    cauchy_stress, relative_deviation, tangent_fd_jaumann_auto, tangent_modified, tangent_spatial,
};
use hyperrate::scenarios::{builtin, run_fem, PathKind, PointSpec, ScenarioKind};
use hyperrate::{rateint, NeoHookeParams, Pathway, Tensor2};

fn material(mu: f64, kappa: f64) -> Result<NeoHookeParams, String> {
    NeoHookeParams::from_moduli(mu, kappa).map_err(|e| e.to_string())
}

/// Rows of `[load, total, rate_unmodified, rate_modified]` along a
/// homogeneous path. `load` is the path parameter (stretch, shear or angle)
/// and the response is σ12 for shear, σ11 otherwise (MPa).
pub fn point_rows(
    kind: &str,
    target: f64,
    steps: usize,
    mu: f64,
    kappa: f64,
) -> Result<Vec<f64>, String> {
    let path: PathKind = kind.parse().map_err(|e: hyperrate::Error| e.to_string())?;
    if steps == 0 || steps > 100_000 {
        return Err(format!("steps must lie in 1..=100000, got {steps}"));
    }
    let spec = PointSpec {
        path,
        target,
        steps,
    };
    let m = material(mu, kappa)?;
    let schedule = spec.schedule();
    let histories = Pathway::ALL
        .iter()
        .map(|&p| rateint::integrate_path(&m, p, &schedule).map_err(|e| format!("{p}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    let start = if matches!(path, PathKind::Dilation | PathKind::Uniaxial) {
        1.0
    } else {
        0.0
    };
    let mut out = Vec::with_capacity(4 * schedule.len());
    for k in 0..schedule.len() {
        out.push(start + (target - start) * k as f64 / steps as f64);
        out.extend(histories.iter().map(|h| spec.response(&h[k])));
    }
    Ok(out)
}

/// Rows of `[punch_mm, total_N, rate_unmodified_N, rate_modified_N]` for the
/// footing on an `n × n` mesh with bulk modulus `kappa`.
pub fn footing_rows(n: usize, steps: usize, kappa: f64) -> Result<Vec<f64>, String> {
    if !(2..=24).contains(&n) || !(10..=200).contains(&steps) {
        return Err("mesh must lie in 2..=24 and steps in 10..=200".into());
    }
    let mut s = builtin("footing").map_err(|e| e.to_string())?;
    s = s
        .with_resolution(Some(n), Some(n))
        .map_err(|e| e.to_string())?;
    s.material = material(s.material.mu(), kappa)?;
    s.solver.line_search = true;
    if let ScenarioKind::Fem(spec) = &mut s.kind {
        spec.steps = steps;
    }
    let runs = Pathway::ALL
        .iter()
        .map(|&p| run_fem(&s, p, |_| Ok(())).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = Vec::with_capacity(4 * steps);
    for k in 0..steps {
        out.push(runs[0].rows[k].displacement.abs());
        out.extend(runs.iter().map(|r| r.rows[k].reaction));
    }
    Ok(out)
}

/// `[fd_deviation, correction_ratio]` at `F = J^{1/3} (I + γ e1⊗e2)`:
/// the relative deviation of the analytic tangent from the finite-difference
/// oracle and `‖ℂ_mod − ℂ‖ / ‖ℂ‖`.
pub fn tangent_row(j: f64, gamma: f64, mu: f64, kappa: f64) -> Result<Vec<f64>, String> {
    if j.is_nan() || j <= 0.0 {
        return Err(format!("J must be positive, got {j}"));
    }
    let m = material(mu, kappa)?;
    let f = Tensor2::dilation(j.cbrt()) * Tensor2::simple_shear(gamma, 0, 1);
    let c = tangent_spatial(&m, &f).map_err(|e| e.to_string())?;
    let fd = tangent_fd_jaumann_auto(&|g: &Tensor2| cauchy_stress(&m, g), &f)
        .map_err(|e| e.to_string())?;
    let s = cauchy_stress(&m, &f).map_err(|e| e.to_string())?;
    Ok(vec![
        relative_deviation(&c, &fd),
        (tangent_modified(&c, &s) - c).norm() / c.norm(),
    ])
}

#[wasm_bindgen]
pub fn point_curves(
    kind: &str,
    target: f64,
    steps: usize,
    mu: f64,
    kappa: f64,
) -> Result<Vec<f64>, JsError> {
    point_rows(kind, target, steps, mu, kappa).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn footing_curves(n: usize, steps: usize, kappa: f64) -> Result<Vec<f64>, JsError> {
    footing_rows(n, steps, kappa).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn tangent_gap(j: f64, gamma: f64, mu: f64, kappa: f64) -> Result<Vec<f64>, JsError> {
    tangent_row(j, gamma, mu, kappa).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dilation_rows_end_at_the_closed_form() {
        let r = point_rows("dilation", 1.2, 100, 1.0, 0.78).unwrap();
        assert_eq!(r.len(), 4 * 101);
        let last = &r[r.len() - 4..];
        assert!((last[0] - 1.2).abs() < 1e-15);
        assert!((last[1] - 0.56784).abs() < 1e-12);
        assert!((last[3] - last[1]).abs() / last[1] < 0.005);
        assert!((last[2] - last[1]).abs() / last[1] > 0.05);
    }

    #[test]
    fn footing_rows_on_a_coarse_mesh() {
        let r = footing_rows(4, 20, 0.78).unwrap();
        assert_eq!(r.len(), 80);
        let last = &r[76..];
        assert!((last[0] - 4.0).abs() < 1e-12);
        assert!(last[1] > 0.0 && (last[3] - last[1]).abs() / last[1] < 0.01);
    }

    #[test]
    fn tangent_gap_is_small_and_the_correction_scales_with_stress() {
        let foam = tangent_row(1.5, 0.3, 1.0, 0.78).unwrap();
        assert!(foam[0] < 1e-6 && foam[1] > 0.1);
        let rubber = tangent_row(1.0, 0.3, 1.0, 2000.0).unwrap();
        assert!(rubber[1] < 1e-2);
    }

    #[test]
    fn bad_input_is_an_error() {
        assert!(point_rows("twist", 1.0, 10, 1.0, 1.0).is_err());
        assert!(footing_rows(1, 20, 0.78).is_err());
        assert!(tangent_row(-1.0, 0.0, 1.0, 1.0).is_err());
    }
}
