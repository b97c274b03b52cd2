use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::materials::NeoHookeParams;
use crate::rateint::{GaussPointState, Pathway};

use super::band::BandMatrix;
use super::element::{
    element_force_and_fd_stiffness, element_force_and_stiffness, ElementGeometry, ElementOutput,
    GaussResult, RateTangent,
};
use super::mesh::Mesh;

/// Prescribed value for one displacement component on a node set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BcValue {
    /// Constant target displacement (mm) at full load.
    Value(f64),
    /// Target `a X + b Y` (mm), evaluated at the reference coordinates.
    Affine([f64; 2]),
}

/// Displacement constraint on one component of every node of a set.
#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub set: String,
    /// 0 = x, 1 = y.
    pub component: usize,
    pub value: BcValue,
}

/// Nominal (dead) traction on an edge set, MPa at full load.
#[derive(Clone, Debug, PartialEq)]
pub struct Traction {
    pub edge_set: String,
    pub component: usize,
    pub value: f64,
}

/// Split of the dofs into free and prescribed, with full-load targets.
#[derive(Clone, Debug, PartialEq)]
pub struct DofMap {
    prescribed: Vec<bool>,
    targets: Vec<f64>,
}

impl DofMap {
    pub fn new(mesh: &Mesh, constraints: &[Constraint]) -> Result<Self> {
        let n = mesh.n_dofs();
        let mut prescribed = vec![false; n];
        let mut targets = vec![0.0; n];
        for c in constraints {
            if c.component > 1 {
                return Err(Error::Config(format!(
                    "invalid component {} on `{}`",
                    c.component, c.set
                )));
            }
            for &node in mesh.node_set(&c.set)? {
                let dof = 2 * node + c.component;
                let x = mesh.nodes[node];
                let t = match c.value {
                    BcValue::Value(v) => v,
                    BcValue::Affine([a, b]) => a * x[0] + b * x[1],
                };
                if prescribed[dof] && (targets[dof] - t).abs() > 1e-12 * (1.0 + t.abs()) {
                    return Err(Error::Config(format!(
                        "conflicting constraints on node {node} component {}",
                        c.component
                    )));
                }
                prescribed[dof] = true;
                targets[dof] = t;
            }
        }
        Ok(Self {
            prescribed,
            targets,
        })
    }

    pub fn n_dofs(&self) -> usize {
        self.prescribed.len()
    }

    pub fn is_prescribed(&self, dof: usize) -> bool {
        self.prescribed[dof]
    }

    pub fn target(&self, dof: usize) -> f64 {
        self.targets[dof]
    }

    pub fn free(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_dofs()).filter(|&d| !self.prescribed[d])
    }

    pub fn prescribed(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_dofs()).filter(|&d| self.prescribed[d])
    }
}

/// Ordered load scale factors.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadProgram {
    scales: Vec<f64>,
}

impl LoadProgram {
    pub fn new(scales: Vec<f64>) -> Result<Self> {
        if scales.is_empty() {
            return Err(Error::Config("load program needs at least one step".into()));
        }
        let mut prev = 0.0;
        for &s in &scales {
            if !(0.0..=1.0).contains(&s) || s < prev {
                return Err(Error::Config(format!(
                    "load scales must be non-decreasing within [0, 1] (got {s} after {prev})"
                )));
            }
            prev = s;
        }
        Ok(Self { scales })
    }

    /// `steps` equal increments up to full load.
    pub fn uniform(steps: usize) -> Result<Self> {
        Self::new((1..=steps).map(|k| k as f64 / steps as f64).collect())
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    pub fn len(&self) -> usize {
        self.scales.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scales.is_empty()
    }
}

/// Newton-Raphson controls.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewtonSettings {
    pub rel_tol: f64,
    /// Absolute residual floor (N/mm).
    pub abs_tol: f64,
    pub max_iter: usize,
    pub line_search: bool,
    /// Worker threads for element evaluation; 1 runs inline.
    pub threads: usize,
    /// Element stiffness used by the rate pathways.
    pub rate_tangent: RateTangent,
}

impl Default for NewtonSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_iter: 25,
            line_search: false,
            threads: 1,
            rate_tangent: RateTangent::Continuum,
        }
    }
}

impl NewtonSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) || self.max_iter == 0 || self.threads == 0
        {
            return Err(Error::Config(format!("invalid Newton settings: {self:?}")));
        }
        Ok(())
    }
}

/// A plane-strain boundary value problem.
#[derive(Clone, Debug)]
pub struct FemModel {
    pub mesh: Mesh,
    pub material: NeoHookeParams,
    pub dofs: DofMap,
    /// Out-of-plane thickness (mm) used to scale reported forces.
    pub thickness: f64,
    /// Nodal external forces (N/mm) at full load.
    external: Vec<f64>,
    geometry: Vec<ElementGeometry>,
    bandwidth: usize,
}

impl FemModel {
    pub fn new(
        mesh: Mesh,
        material: NeoHookeParams,
        constraints: &[Constraint],
        tractions: &[Traction],
        thickness: f64,
    ) -> Result<Self> {
        mesh.validate()?;
        if !(thickness > 0.0) {
            return Err(Error::InvalidDimension(format!(
                "thickness must be positive, got {thickness}"
            )));
        }
        let dofs = DofMap::new(&mesh, constraints)?;
        let mut external = vec![0.0; mesh.n_dofs()];
        for t in tractions {
            if t.component > 1 {
                return Err(Error::Config(format!(
                    "invalid traction component {}",
                    t.component
                )));
            }
            let segs = mesh
                .edge_sets
                .get(&t.edge_set)
                .ok_or_else(|| Error::Config(format!("unknown edge set `{}`", t.edge_set)))?;
            for &[a, b] in segs {
                let (pa, pb) = (mesh.nodes[a], mesh.nodes[b]);
                let len = ((pa[0] - pb[0]).powi(2) + (pa[1] - pb[1]).powi(2)).sqrt();
                external[2 * a + t.component] += 0.5 * len * t.value;
                external[2 * b + t.component] += 0.5 * len * t.value;
            }
        }
        let geometry = (0..mesh.elements.len())
            .map(|e| {
                ElementGeometry::new(&mesh.element_coords(e)).map_err(|det| {
                    Error::InvalidDimension(format!("element {e} has reference Jacobian {det:e}"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let bandwidth = mesh.half_bandwidth();
        Ok(Self {
            mesh,
            material,
            dofs,
            thickness,
            external,
            geometry,
            bandwidth,
        })
    }

    pub fn n_dofs(&self) -> usize {
        self.mesh.n_dofs()
    }

    pub fn external(&self) -> &[f64] {
        &self.external
    }

    fn element_disp(&self, e: usize, u: &[f64]) -> [[f64; 2]; 4] {
        let c = self.mesh.elements[e];
        let mut d = [[0.0; 2]; 4];
        for a in 0..4 {
            d[a] = [u[2 * c[a]], u[2 * c[a] + 1]];
        }
        d
    }

    /// Evaluates all elements; output order matches element order regardless
    /// of the thread count.
    pub fn evaluate(
        &self,
        pathway: Pathway,
        u: &[f64],
        states: &[[GaussPointState; 4]],
        threads: usize,
        rate_tangent: RateTangent,
    ) -> Result<Vec<ElementOutput>> {
        let n = self.mesh.elements.len();
        let kernel = if pathway.is_rate() && rate_tangent == RateTangent::Consistent {
            element_force_and_fd_stiffness
        } else {
            element_force_and_stiffness
        };
        let eval = |e: usize| {
            kernel(
                e,
                &self.geometry[e],
                pathway,
                &self.material,
                &self.element_disp(e, u),
                &states[e],
            )
        };
        if threads <= 1 || n < 2 * threads {
            return (0..n).map(eval).collect();
        }
        let chunk = n.div_ceil(threads);
        let parts: Vec<Result<Vec<ElementOutput>>> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..n)
                .step_by(chunk)
                .map(|start| {
                    let eval = &eval;
                    s.spawn(move || {
                        (start..(start + chunk).min(n))
                            .map(eval)
                            .collect::<Result<Vec<_>>>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("element worker panicked"))
                .collect()
        });
        let mut out = Vec::with_capacity(n);
        for p in parts {
            out.extend(p?);
        }
        Ok(out)
    }

    fn assemble_force(&self, outputs: &[ElementOutput]) -> Vec<f64> {
        let mut f = vec![0.0; self.n_dofs()];
        for (e, out) in outputs.iter().enumerate() {
            let c = self.mesh.elements[e];
            for a in 0..4 {
                for i in 0..2 {
                    f[2 * c[a] + i] += out.force[2 * a + i];
                }
            }
        }
        f
    }

    fn assemble_stiffness(&self, outputs: &[ElementOutput]) -> BandMatrix {
        let mut k = BandMatrix::zeros(self.n_dofs(), self.bandwidth);
        let mut diag_scale: f64 = 0.0;
        for (e, out) in outputs.iter().enumerate() {
            let c = self.mesh.elements[e];
            for a in 0..4 {
                for i in 0..2 {
                    let row = 2 * c[a] + i;
                    if self.dofs.is_prescribed(row) {
                        continue;
                    }
                    for b in 0..4 {
                        for m in 0..2 {
                            let col = 2 * c[b] + m;
                            if self.dofs.is_prescribed(col) {
                                continue;
                            }
                            let v = out.stiffness[2 * a + i][2 * b + m];
                            if row == col {
                                diag_scale = diag_scale.max(v.abs());
                            }
                            k.add(row, col, v);
                        }
                    }
                }
            }
        }
        let one = if diag_scale > 0.0 { diag_scale } else { 1.0 };
        for d in self.dofs.prescribed() {
            k.add(d, d, one);
        }
        k
    }

    /// `K_fp Δu_p` on the free rows, where `du` is nonzero only on
    /// prescribed dofs.
    fn coupling(&self, outputs: &[ElementOutput], du: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n_dofs()];
        for (e, o) in outputs.iter().enumerate() {
            let c = self.mesh.elements[e];
            for b in 0..4 {
                for m in 0..2 {
                    let col = 2 * c[b] + m;
                    if !self.dofs.is_prescribed(col) || du[col] == 0.0 {
                        continue;
                    }
                    for a in 0..4 {
                        for i in 0..2 {
                            let row = 2 * c[a] + i;
                            if !self.dofs.is_prescribed(row) {
                                out[row] += o.stiffness[2 * a + i][2 * b + m] * du[col];
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// Converged results of one load step.
#[derive(Clone, Debug, PartialEq)]
pub struct StepReport {
    pub step: usize,
    pub scale: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Final free-dof residual norm (N/mm).
    pub residual: f64,
    /// Reaction resultants (N, thickness included) per node set that carries
    /// prescribed dofs: `[Rx, Ry]`.
    pub reactions: BTreeMap<String, [f64; 2]>,
    /// `Σ reactions + Σ applied loads` over all dofs (N).
    pub balance: [f64; 2],
    pub min_j: f64,
    pub max_j: f64,
}

/// Per-step history of one pathway run.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub pathway: Pathway,
    pub steps: Vec<StepReport>,
}

/// Converged field snapshot handed to observers after each step.
pub struct StepSnapshot<'a> {
    pub step: usize,
    pub scale: f64,
    pub displacement: &'a [f64],
    pub gauss: Vec<[GaussResult; 4]>,
}

/// Mutable solution state threaded through the load program.
#[derive(Clone, Debug)]
pub struct SolverState {
    pub u: Vec<f64>,
    pub states: Vec<[GaussPointState; 4]>,
}

impl SolverState {
    pub fn new(model: &FemModel) -> Self {
        Self {
            u: vec![0.0; model.n_dofs()],
            states: vec![[GaussPointState::reference(); 4]; model.mesh.elements.len()],
        }
    }
}

fn norm_free(model: &FemModel, r: &[f64]) -> f64 {
    model.dofs.free().map(|d| r[d] * r[d]).sum::<f64>().sqrt()
}

/// Equilibrium iteration for one load step. On success the rate-pathway
/// Gauss-point history is committed into `state`.
pub fn newton_solve_step(
    model: &FemModel,
    pathway: Pathway,
    step: usize,
    scale: f64,
    settings: &NewtonSettings,
    state: &mut SolverState,
) -> Result<(StepReport, Vec<[GaussResult; 4]>)> {
    let n = model.n_dofs();
    let mut u = state.u.clone();
    // Prescribed increments enter through the first linearized solve so the
    // free dofs follow them instead of meeting a sheared boundary layer.
    let mut pending = vec![0.0; n];
    for d in model.dofs.prescribed() {
        pending[d] = scale * model.dofs.target(d) - u[d];
    }
    let mut predictor = pending.iter().any(|&v| v != 0.0);
    let f_ext: Vec<f64> = model.external.iter().map(|v| v * scale).collect();

    let residual_of = |outs: &[ElementOutput]| {
        let f_int = model.assemble_force(outs);
        let r: Vec<f64> = f_int.iter().zip(&f_ext).map(|(a, b)| a - b).collect();
        (f_int, r)
    };

    let mut outputs = model.evaluate(
        pathway,
        &u,
        &state.states,
        settings.threads,
        settings.rate_tangent,
    )?;
    let (mut f_int, mut r) = residual_of(&outputs);
    let mut iterations = 0;
    let mut rnorm;
    loop {
        rnorm = norm_free(model, &r);
        let reference = f_int
            .iter()
            .chain(&f_ext)
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt();
        if !predictor && rnorm <= (settings.rel_tol * reference).max(settings.abs_tol) {
            break;
        }
        if iterations == settings.max_iter {
            return Err(Error::NewtonDiverged {
                iterations,
                residual: rnorm,
            });
        }
        let k = model.assemble_stiffness(&outputs);
        let mut rhs = vec![0.0; n];
        for d in model.dofs.free() {
            rhs[d] = -r[d];
        }
        if predictor {
            let kp = model.coupling(&outputs, &pending);
            for d in model.dofs.free() {
                rhs[d] -= kp[d];
            }
        }
        let mut du = k.solve(&rhs)?;
        iterations += 1;

        if predictor {
            // With line search on, a predictor that leaves the admissible
            // range is shortened and the rest of the increment is carried
            // into the next solve.
            for d in model.dofs.prescribed() {
                du[d] = pending[d];
            }
            let mut alpha = 1.0;
            let mut tries = 0;
            loop {
                let mut trial: Vec<f64> = u.iter().zip(&du).map(|(a, b)| a + alpha * b).collect();
                if alpha == 1.0 {
                    for d in model.dofs.prescribed() {
                        trial[d] = scale * model.dofs.target(d);
                    }
                }
                match model.evaluate(
                    pathway,
                    &trial,
                    &state.states,
                    settings.threads,
                    settings.rate_tangent,
                ) {
                    Ok(outs) => {
                        u = trial;
                        outputs = outs;
                        (f_int, r) = residual_of(&outputs);
                        if alpha == 1.0 {
                            predictor = false;
                        } else {
                            pending.iter_mut().for_each(|p| *p *= 1.0 - alpha);
                        }
                        break;
                    }
                    Err(e) if !settings.line_search || tries >= 6 => return Err(e),
                    Err(_) => {
                        alpha *= 0.5;
                        tries += 1;
                    }
                }
            }
            continue;
        }

        let mut alpha = 1.0;
        let mut tries = 0;
        loop {
            let trial: Vec<f64> = u.iter().zip(&du).map(|(a, b)| a + alpha * b).collect();
            match model.evaluate(
                pathway,
                &trial,
                &state.states,
                settings.threads,
                settings.rate_tangent,
            ) {
                Ok(outs) => {
                    let (fi, ri) = residual_of(&outs);
                    let accept =
                        !settings.line_search || tries >= 6 || norm_free(model, &ri) <= rnorm;
                    if accept {
                        u = trial;
                        outputs = outs;
                        f_int = fi;
                        r = ri;
                        break;
                    }
                }
                Err(e) => {
                    if !settings.line_search || tries >= 6 {
                        return Err(e);
                    }
                }
            }
            alpha *= 0.5;
            tries += 1;
        }
    }

    let t = model.thickness;
    let mut reactions = BTreeMap::new();
    for (name, nodes) in &model.mesh.node_sets {
        let mut sum = [0.0; 2];
        let mut any = false;
        for &node in nodes {
            for c in 0..2 {
                let d = 2 * node + c;
                if model.dofs.is_prescribed(d) {
                    sum[c] += r[d] * t;
                    any = true;
                }
            }
        }
        if any && name != "all" {
            reactions.insert(name.clone(), sum);
        }
    }
    let mut balance = [0.0; 2];
    for d in 0..n {
        let c = d % 2;
        if model.dofs.is_prescribed(d) {
            balance[c] += r[d] * t;
        }
        balance[c] += f_ext[d] * t;
    }

    let gauss: Vec<[GaussResult; 4]> = outputs.iter().map(|o| o.gauss).collect();
    let (min_j, max_j) = gauss
        .iter()
        .flatten()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), g| {
            (a.min(g.j), b.max(g.j))
        });

    state.u = u;
    if pathway.is_rate() {
        for (s, g) in state.states.iter_mut().zip(&gauss) {
            for k in 0..4 {
                s[k] = g[k].state();
            }
        }
    }

    Ok((
        StepReport {
            step,
            scale,
            iterations,
            converged: true,
            residual: rnorm,
            reactions,
            balance,
            min_j,
            max_j,
        },
        gauss,
    ))
}

/// Runs every step of `program`, calling `observer` after each converged step.
pub fn run_load_program(
    model: &FemModel,
    program: &LoadProgram,
    pathway: Pathway,
    settings: &NewtonSettings,
    mut observer: impl FnMut(&StepSnapshot<'_>) -> Result<()>,
) -> Result<SolveReport> {
    settings.validate()?;
    let mut state = SolverState::new(model);
    let mut steps = Vec::with_capacity(program.len());
    for (k, &scale) in program.scales().iter().enumerate() {
        let step = k + 1;
        let (report, gauss) = newton_solve_step(model, pathway, step, scale, settings, &mut state)
            .map_err(|e| e.at_step(step).in_pathway(pathway.name()))?;
        observer(&StepSnapshot {
            step,
            scale,
            displacement: &state.u,
            gauss,
        })?;
        steps.push(report);
    }
    Ok(SolveReport { pathway, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem2d::mesh_rect;
    use crate::materials::{cauchy_stress, piola_from_cauchy};
    use crate::tensor::Tensor2;

    fn bc(set: &str, component: usize, value: BcValue) -> Constraint {
        Constraint {
            set: set.into(),
            component,
            value,
        }
    }

    fn uniaxial_model(stretch: f64) -> FemModel {
        let mesh = mesh_rect(1.0, 1.0, 1, 1).unwrap();
        let cons = [
            bc("left", 0, BcValue::Value(0.0)),
            bc("right", 0, BcValue::Value(stretch - 1.0)),
            bc("bottom", 1, BcValue::Value(0.0)),
        ];
        FemModel::new(mesh, NeoHookeParams::foam(), &cons, &[], 1.0).unwrap()
    }

    #[test]
    fn zero_load_step_needs_no_iterations() {
        let model = uniaxial_model(1.0);
        let mut state = SolverState::new(&model);
        let (rep, _) = newton_solve_step(
            &model,
            Pathway::Total,
            1,
            1.0,
            &NewtonSettings::default(),
            &mut state,
        )
        .unwrap();
        assert_eq!(rep.iterations, 0);
        assert!(state.u.iter().all(|&v| v == 0.0));
        assert!(rep.reactions.values().all(|r| r[0] == 0.0 && r[1] == 0.0));
    }

    #[test]
    fn uniaxial_reaction_matches_piola_traction() {
        let model = uniaxial_model(1.15);
        let program = LoadProgram::uniform(5).unwrap();
        let mut u = Vec::new();
        let rep = run_load_program(
            &model,
            &program,
            Pathway::Total,
            &NewtonSettings::default(),
            |snap| {
                u = snap.displacement.to_vec();
                Ok(())
            },
        )
        .unwrap();
        let last = rep.steps.last().unwrap();
        let top = model.mesh.node_set("top").unwrap()[1];
        let lateral = 1.0 + u[2 * top + 1];
        let f = Tensor2::diag(1.15, lateral, 1.0);
        let p1 = piola_from_cauchy(&f, &cauchy_stress(&model.material, &f).unwrap()).unwrap();
        let rx = last.reactions["right"][0];
        assert!(
            (rx - p1.0[0][0]).abs() <= 1e-9 * p1.0[0][0].abs(),
            "{rx} vs {}",
            p1.0[0][0]
        );
        assert!(last.balance[0].abs() < 1e-12 && last.balance[1].abs() < 1e-12);
    }

    #[test]
    fn load_program_validation() {
        assert!(LoadProgram::new(vec![]).is_err());
        assert!(LoadProgram::new(vec![0.5, 0.4]).is_err());
        assert!(LoadProgram::new(vec![0.5, 1.5]).is_err());
        assert_eq!(
            LoadProgram::uniform(4).unwrap().scales(),
            &[0.25, 0.5, 0.75, 1.0]
        );
    }

    #[test]
    fn conflicting_constraints_are_rejected() {
        let mesh = mesh_rect(1.0, 1.0, 1, 1).unwrap();
        let cons = [
            bc("left", 0, BcValue::Value(0.0)),
            bc("bottom", 0, BcValue::Value(0.1)),
        ];
        assert!(DofMap::new(&mesh, &cons).is_err());
        assert!(DofMap::new(&mesh, &[bc("nowhere", 0, BcValue::Value(0.0))]).is_err());
    }

    #[test]
    fn traction_equilibrium_without_reactions_on_loaded_edge() {
        let mesh = mesh_rect(1.0, 1.0, 2, 2).unwrap();
        let cons = [
            bc("left", 0, BcValue::Value(0.0)),
            bc("bottom", 1, BcValue::Value(0.0)),
        ];
        let tr = [Traction {
            edge_set: "right".into(),
            component: 0,
            value: 0.1,
        }];
        let model = FemModel::new(mesh, NeoHookeParams::foam(), &cons, &tr, 2.0).unwrap();
        let rep = run_load_program(
            &model,
            &LoadProgram::uniform(3).unwrap(),
            Pathway::RateModified,
            &NewtonSettings::default(),
            |_| Ok(()),
        )
        .unwrap();
        let last = rep.steps.last().unwrap();
        // nominal traction 0.1 MPa over 1 mm height and 2 mm thickness
        assert!((last.reactions["left"][0] + 0.2).abs() < 1e-9);
        assert!(last.balance[0].abs() < 1e-9 && last.balance[1].abs() < 1e-9);
    }

    #[test]
    fn threaded_evaluation_is_bitwise_identical() {
        let mut mesh = mesh_rect(4.0, 4.0, 6, 6).unwrap();
        mesh.add_top_centre_set("punch", 0.5).unwrap();
        let cons = [
            bc("bottom", 0, BcValue::Value(0.0)),
            bc("bottom", 1, BcValue::Value(0.0)),
            bc("punch", 1, BcValue::Value(-0.3)),
        ];
        let model = FemModel::new(mesh, NeoHookeParams::foam(), &cons, &[], 1.0).unwrap();
        let program = LoadProgram::uniform(3).unwrap();
        let run = |threads| {
            let settings = NewtonSettings {
                threads,
                ..NewtonSettings::default()
            };
            run_load_program(&model, &program, Pathway::RateUnmodified, &settings, |_| {
                Ok(())
            })
            .unwrap()
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn consistent_rate_tangent_converges_to_the_same_state() {
        let mut mesh = mesh_rect(4.0, 4.0, 4, 4).unwrap();
        mesh.add_top_centre_set("punch", 0.5).unwrap();
        let cons = [
            bc("bottom", 0, BcValue::Value(0.0)),
            bc("bottom", 1, BcValue::Value(0.0)),
            bc("punch", 1, BcValue::Value(-0.4)),
        ];
        let model = FemModel::new(mesh, NeoHookeParams::foam(), &cons, &[], 1.0).unwrap();
        let program = LoadProgram::uniform(4).unwrap();
        let run = |rate_tangent| {
            let settings = NewtonSettings {
                rate_tangent,
                rel_tol: 1e-12,
                ..NewtonSettings::default()
            };
            run_load_program(&model, &program, Pathway::RateUnmodified, &settings, |_| {
                Ok(())
            })
            .unwrap()
        };
        let a = run(RateTangent::Continuum);
        let b = run(RateTangent::Consistent);
        for (x, y) in a.steps.iter().zip(&b.steps) {
            let (rx, ry) = (x.reactions["punch"][1], y.reactions["punch"][1]);
            assert!((rx - ry).abs() < 1e-9 * rx.abs());
            assert!(y.iterations <= x.iterations);
        }
    }

    #[test]
    fn settings_validation() {
        assert!(NewtonSettings::default().validate().is_ok());
        let bad = NewtonSettings {
            rel_tol: 0.0,
            ..NewtonSettings::default()
        };
        assert!(bad.validate().is_err());
    }
}
