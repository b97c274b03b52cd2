//! Named experiments and pathway comparisons.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::config::ConfigDoc;
use crate::error::{Error, Result};
use crate::fem2d::{
    mesh_rect, run_load_program, BcValue, Constraint, FemModel, LoadProgram, NewtonSettings,
    SolveReport, StepSnapshot, Traction,
};
use crate::materials::NeoHookeParams;
use crate::rateint::{
    dilation_schedule, integrate_path, rotation_schedule, shear_schedule, uniaxial_schedule,
    Pathway,
};
use crate::tensor::{SymTensor2, Tensor2};

pub const BUILTIN_NAMES: [&str; 5] = [
    "footing",
    "confined",
    "patch_uniaxial",
    "patch_shear",
    "point_dilation",
];

/// Floor (N or MPa) of the denominator in relative deviations.
pub const DEVIATION_FLOOR: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct MeshSpec {
    pub width: f64,
    pub height: f64,
    pub nx: usize,
    pub ny: usize,
    /// Out-of-plane thickness (mm).
    pub thickness: f64,
    /// Centred fraction of the top edge collected into the `punch` node set.
    pub punch_fraction: Option<f64>,
}

/// Which reaction resultant forms the response curve.
#[derive(Clone, Debug, PartialEq)]
pub struct ReactionSpec {
    pub set: String,
    pub component: usize,
    /// Multiplier applied to the resultant, e.g. −1 to report compression as
    /// a positive force.
    pub sign: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FemSpec {
    pub mesh: MeshSpec,
    pub constraints: Vec<Constraint>,
    pub tractions: Vec<Traction>,
    pub steps: usize,
    pub reaction: ReactionSpec,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathKind {
    /// Target is the stretch λ of `F = λ I`.
    Dilation,
    /// Target is the shear amount γ.
    Shear,
    /// Target is the angle in radians about e₃.
    Rotation,
    /// Target is the stretch of `F = diag(λ, 1, 1)`.
    Uniaxial,
}

impl PathKind {
    pub fn name(self) -> &'static str {
        match self {
            PathKind::Dilation => "dilation",
            PathKind::Shear => "shear",
            PathKind::Rotation => "rotation",
            PathKind::Uniaxial => "uniaxial",
        }
    }
}

impl FromStr for PathKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dilation" => Ok(PathKind::Dilation),
            "shear" => Ok(PathKind::Shear),
            "rotation" => Ok(PathKind::Rotation),
            "uniaxial" => Ok(PathKind::Uniaxial),
            other => Err(Error::Config(format!("unknown path kind `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointSpec {
    pub path: PathKind,
    pub target: f64,
    pub steps: usize,
}

impl PointSpec {
    /// Deformation gradients `F_0 = I, …, F_steps`.
    pub fn schedule(&self) -> Vec<Tensor2> {
        match self.path {
            PathKind::Dilation => dilation_schedule(self.target, self.steps),
            PathKind::Shear => shear_schedule(self.target, self.steps),
            PathKind::Rotation => rotation_schedule(self.target, self.steps),
            PathKind::Uniaxial => uniaxial_schedule(self.target, self.steps),
        }
    }

    /// Stress component used as the scalar response.
    pub fn response(&self, sigma: &SymTensor2) -> f64 {
        match self.path {
            PathKind::Shear => sigma.get(0, 1),
            _ => sigma.get(0, 0),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ScenarioKind {
    Fem(FemSpec),
    Point(PointSpec),
}

/// Pass/fail rule applied to a comparison.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum VerdictRule {
    /// Always holds; the comparison is informational.
    None,
    /// Final-step response of RateUnmodified strictly above Total, and
    /// RateModified within `tol` of Total over the whole curve.
    Ordering { tol: f64 },
    /// Every pairwise deviation below `tol`.
    Coincide { tol: f64 },
    /// RateUnmodified within `tol` of RateModified.
    RatePair { tol: f64 },
    /// Endpoint error of RateModified below `mod_tol` and of RateUnmodified
    /// above `unmod_min`, both relative to Total.
    Repair { mod_tol: f64, unmod_min: f64 },
}

impl VerdictRule {
    pub fn name(&self) -> &'static str {
        match self {
            VerdictRule::None => "none",
            VerdictRule::Ordering { .. } => "ordering",
            VerdictRule::Coincide { .. } => "coincide",
            VerdictRule::RatePair { .. } => "rate_pair",
            VerdictRule::Repair { .. } => "repair",
        }
    }

    fn required_pathways(&self) -> &'static [Pathway] {
        match self {
            VerdictRule::None => &[],
            VerdictRule::RatePair { .. } => &[Pathway::RateUnmodified, Pathway::RateModified],
            _ => &Pathway::ALL,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub material: NeoHookeParams,
    pub pathways: Vec<Pathway>,
    pub kind: ScenarioKind,
    pub verdict: VerdictRule,
    pub solver: NewtonSettings,
}

fn value_bc(set: &str, component: usize, v: f64) -> Constraint {
    Constraint {
        set: set.to_string(),
        component,
        value: BcValue::Value(v),
    }
}

fn affine_bc(set: &str, component: usize, a: f64, b: f64) -> Constraint {
    Constraint {
        set: set.to_string(),
        component,
        value: BcValue::Affine([a, b]),
    }
}

/// Solver settings used by the built-in scenarios. The tight relative
/// tolerance keeps the global force balance below 1e-9 N for the linearly
/// converging rate pathways.
pub fn builtin_solver() -> NewtonSettings {
    NewtonSettings {
        rel_tol: 1e-12,
        ..NewtonSettings::default()
    }
}

/// Built-in scenario by name.
pub fn builtin(name: &str) -> Result<Scenario> {
    let foam = NeoHookeParams::foam();
    let all = Pathway::ALL.to_vec();
    let scenario = match name {
        "footing" => Scenario {
            name: name.into(),
            material: foam,
            pathways: all,
            kind: ScenarioKind::Fem(FemSpec {
                mesh: MeshSpec {
                    width: 20.0,
                    height: 20.0,
                    nx: 16,
                    ny: 16,
                    thickness: 5.0,
                    punch_fraction: Some(0.5),
                },
                constraints: vec![
                    value_bc("bottom", 0, 0.0),
                    value_bc("bottom", 1, 0.0),
                    value_bc("left", 0, 0.0),
                    value_bc("right", 0, 0.0),
                    value_bc("punch", 1, -4.0),
                ],
                tractions: Vec::new(),
                steps: 100,
                reaction: ReactionSpec {
                    set: "punch".into(),
                    component: 1,
                    sign: -1.0,
                },
            }),
            verdict: VerdictRule::Ordering { tol: 0.01 },
            solver: builtin_solver(),
        },
        "confined" => Scenario {
            name: name.into(),
            material: NeoHookeParams::rubber(),
            pathways: all,
            // plane-strain upsetting between sticking platens: left edge on
            // a symmetry roller, right edge free to barrel
            kind: ScenarioKind::Fem(FemSpec {
                mesh: MeshSpec {
                    width: 2.0,
                    height: 2.0,
                    nx: 16,
                    ny: 16,
                    thickness: 1.0,
                    punch_fraction: None,
                },
                constraints: vec![
                    value_bc("bottom", 0, 0.0),
                    value_bc("bottom", 1, 0.0),
                    value_bc("left", 0, 0.0),
                    value_bc("top", 0, 0.0),
                    value_bc("top", 1, -0.25),
                ],
                tractions: Vec::new(),
                steps: 50,
                reaction: ReactionSpec {
                    set: "top".into(),
                    component: 1,
                    sign: -1.0,
                },
            }),
            verdict: VerdictRule::Coincide { tol: 0.005 },
            // round-off in the stiff volumetric response sits near 1e-11
            solver: NewtonSettings {
                rel_tol: 1e-10,
                ..builtin_solver()
            },
        },
        "patch_uniaxial" => Scenario {
            name: name.into(),
            material: foam,
            pathways: all,
            kind: ScenarioKind::Fem(FemSpec {
                mesh: MeshSpec {
                    width: 1.0,
                    height: 1.0,
                    nx: 2,
                    ny: 2,
                    thickness: 1.0,
                    punch_fraction: None,
                },
                constraints: vec![
                    affine_bc("boundary", 0, 0.2, 0.0),
                    value_bc("boundary", 1, 0.0),
                ],
                tractions: Vec::new(),
                steps: 100,
                reaction: ReactionSpec {
                    set: "right".into(),
                    component: 0,
                    sign: 1.0,
                },
            }),
            verdict: VerdictRule::None,
            solver: builtin_solver(),
        },
        "patch_shear" => Scenario {
            name: name.into(),
            material: foam,
            pathways: all,
            kind: ScenarioKind::Fem(FemSpec {
                mesh: MeshSpec {
                    width: 1.0,
                    height: 1.0,
                    nx: 2,
                    ny: 2,
                    thickness: 1.0,
                    punch_fraction: None,
                },
                constraints: vec![
                    affine_bc("boundary", 0, 0.0, 1.0),
                    value_bc("boundary", 1, 0.0),
                ],
                tractions: Vec::new(),
                steps: 100,
                reaction: ReactionSpec {
                    set: "top".into(),
                    component: 0,
                    sign: 1.0,
                },
            }),
            verdict: VerdictRule::RatePair { tol: 0.001 },
            solver: builtin_solver(),
        },
        "point_dilation" => Scenario {
            name: name.into(),
            material: foam,
            pathways: all,
            kind: ScenarioKind::Point(PointSpec {
                path: PathKind::Dilation,
                target: 1.2,
                steps: 1000,
            }),
            verdict: VerdictRule::Repair {
                mod_tol: 0.005,
                unmod_min: 0.05,
            },
            solver: builtin_solver(),
        },
        other => return Err(Error::UnknownScenario(other.to_string())),
    };
    Ok(scenario)
}

/// Builtin name or path to a config file.
pub fn load_scenario(name_or_path: &str) -> Result<Scenario> {
    if BUILTIN_NAMES.contains(&name_or_path) {
        return builtin(name_or_path);
    }
    let path = Path::new(name_or_path);
    if !path.exists() {
        return Err(Error::UnknownScenario(name_or_path.to_string()));
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read `{}`: {e}", path.display())))?;
    Scenario::from_config_text(&text)
}

impl MeshSpec {
    pub fn build(&self) -> Result<crate::fem2d::Mesh> {
        let mut mesh = mesh_rect(self.width, self.height, self.nx, self.ny)?;
        if let Some(fr) = self.punch_fraction {
            mesh.add_top_centre_set("punch", fr)?;
        }
        Ok(mesh)
    }
}

impl FemSpec {
    pub fn build_model(&self, material: NeoHookeParams) -> Result<FemModel> {
        let mesh = self.mesh.build()?;
        FemModel::new(
            mesh,
            material,
            &self.constraints,
            &self.tractions,
            self.mesh.thickness,
        )
    }

    /// Largest full-load prescribed displacement magnitude on the reaction
    /// set's reported component (mm).
    pub fn full_displacement(&self, model: &FemModel) -> Result<f64> {
        let nodes = model.mesh.node_set(&self.reaction.set)?;
        Ok(nodes
            .iter()
            .map(|&n| 2 * n + self.reaction.component)
            .filter(|&d| model.dofs.is_prescribed(d))
            .map(|d| model.dofs.target(d).abs())
            .fold(0.0, f64::max))
    }
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if self.pathways.is_empty() {
            return Err(Error::Config("scenario lists no pathways".into()));
        }
        for (i, p) in self.pathways.iter().enumerate() {
            if self.pathways[..i].contains(p) {
                return Err(Error::Config(format!("pathway `{p}` listed twice")));
            }
        }
        for p in self.verdict.required_pathways() {
            if !self.pathways.contains(p) {
                return Err(Error::Config(format!(
                    "verdict `{}` needs pathway `{p}`",
                    self.verdict.name()
                )));
            }
        }
        self.solver.validate()?;
        match &self.kind {
            ScenarioKind::Fem(spec) => {
                if spec.steps == 0 {
                    return Err(Error::Config("load steps must be at least 1".into()));
                }
                if spec.reaction.component > 1 {
                    return Err(Error::Config("reaction component must be x or y".into()));
                }
                let model = spec.build_model(self.material)?;
                let nodes = model.mesh.node_set(&spec.reaction.set)?;
                if !nodes
                    .iter()
                    .any(|&n| model.dofs.is_prescribed(2 * n + spec.reaction.component))
                {
                    return Err(Error::Config(format!(
                        "reaction set `{}` has no prescribed dofs in that component",
                        spec.reaction.set
                    )));
                }
            }
            ScenarioKind::Point(spec) => {
                if spec.steps == 0 || !spec.target.is_finite() {
                    return Err(Error::Config(
                        "point path needs steps ≥ 1 and a finite target".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Replaces the mesh resolution of a finite element scenario.
    pub fn with_resolution(mut self, nx: Option<usize>, ny: Option<usize>) -> Result<Self> {
        if nx.is_none() && ny.is_none() {
            return Ok(self);
        }
        match &mut self.kind {
            ScenarioKind::Fem(spec) => {
                if let Some(n) = nx {
                    spec.mesh.nx = n;
                }
                if let Some(n) = ny {
                    spec.mesh.ny = n;
                }
                Ok(self)
            }
            ScenarioKind::Point(_) => Err(Error::Config(format!(
                "scenario `{}` has no mesh to refine",
                self.name
            ))),
        }
    }
}

// ---------------------------------------------------------------------------
// config text

fn component_name(c: usize) -> &'static str {
    if c == 0 {
        "x"
    } else {
        "y"
    }
}

fn parse_component(s: &str) -> Result<usize> {
    match s {
        "x" => Ok(0),
        "y" => Ok(1),
        other => Err(Error::Config(format!(
            "component must be x or y, got `{other}`"
        ))),
    }
}

fn split_target(key: &str) -> Result<(String, usize)> {
    let (set, comp) = key
        .rsplit_once('.')
        .ok_or_else(|| Error::Config(format!("expected `<set>.<x|y>`, got `{key}`")))?;
    Ok((set.to_string(), parse_component(comp)?))
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Config(format!("{what}: cannot parse `{s}` as a number")))
}

impl Scenario {
    pub fn to_config_text(&self) -> String {
        use fmt::Write;
        let mut s = String::new();
        let names: Vec<&str> = self.pathways.iter().map(|p| p.name()).collect();
        let kind = match self.kind {
            ScenarioKind::Fem(_) => "fem",
            ScenarioKind::Point(_) => "point",
        };
        let _ = writeln!(
            s,
            "[scenario]\nname = {}\nkind = {kind}\npathways = {}\n",
            self.name,
            names.join(", ")
        );
        let _ = writeln!(
            s,
            "[material]\nc1 = {}\nd1 = {}\n",
            self.material.c1(),
            self.material.d1()
        );
        let n = &self.solver;
        let _ = writeln!(
            s,
            "[solver]\nrel_tol = {}\nabs_tol = {}\nmax_iter = {}\nline_search = {}\nthreads = {}\nrate_tangent = {}\n",
            n.rel_tol,
            n.abs_tol,
            n.max_iter,
            n.line_search,
            n.threads,
            n.rate_tangent.name()
        );
        match &self.kind {
            ScenarioKind::Fem(spec) => {
                let m = &spec.mesh;
                let _ = writeln!(
                    s,
                    "[mesh]\nwidth = {}\nheight = {}\nnx = {}\nny = {}\nthickness = {}",
                    m.width, m.height, m.nx, m.ny, m.thickness
                );
                if let Some(fr) = m.punch_fraction {
                    let _ = writeln!(s, "punch_fraction = {fr}");
                }
                let _ = writeln!(s, "\n[load]\nsteps = {}\n", spec.steps);
                let _ = writeln!(s, "[constraints]");
                for c in &spec.constraints {
                    let v = match c.value {
                        BcValue::Value(v) => format!("{v}"),
                        BcValue::Affine([a, b]) => format!("affine {a} {b}"),
                    };
                    let _ = writeln!(s, "{}.{} = {v}", c.set, component_name(c.component));
                }
                if !spec.tractions.is_empty() {
                    let _ = writeln!(s, "\n[tractions]");
                    for t in &spec.tractions {
                        let _ = writeln!(
                            s,
                            "{}.{} = {}",
                            t.edge_set,
                            component_name(t.component),
                            t.value
                        );
                    }
                }
                let r = &spec.reaction;
                let _ = writeln!(
                    s,
                    "\n[reaction]\nset = {}\ncomponent = {}\nsign = {}\n",
                    r.set,
                    component_name(r.component),
                    r.sign
                );
            }
            ScenarioKind::Point(p) => {
                let _ = writeln!(
                    s,
                    "[path]\nkind = {}\ntarget = {}\nsteps = {}\n",
                    p.path.name(),
                    p.target,
                    p.steps
                );
            }
        }
        let _ = writeln!(s, "[verdict]\nrule = {}", self.verdict.name());
        match self.verdict {
            VerdictRule::None => {}
            VerdictRule::Ordering { tol }
            | VerdictRule::Coincide { tol }
            | VerdictRule::RatePair { tol } => {
                let _ = writeln!(s, "tol = {tol}");
            }
            VerdictRule::Repair { mod_tol, unmod_min } => {
                let _ = writeln!(s, "mod_tol = {mod_tol}\nunmod_min = {unmod_min}");
            }
        }
        s
    }

    pub fn from_config_text(text: &str) -> Result<Self> {
        let doc = ConfigDoc::parse(text)?;
        let scenario = Self::from_doc(&doc)?;
        doc.finish()?;
        scenario.validate()?;
        Ok(scenario)
    }

    fn from_doc(doc: &ConfigDoc) -> Result<Self> {
        let name: String = doc.require("scenario", "name")?;
        let kind: String = doc.require("scenario", "kind")?;
        let pathways = match doc.get("scenario", "pathways") {
            None => Pathway::ALL.to_vec(),
            Some(list) => list
                .split(',')
                .map(|p| p.trim().parse())
                .collect::<Result<Vec<Pathway>>>()?,
        };

        let material = match (
            doc.parse_opt::<f64>("material", "c1")?,
            doc.parse_opt::<f64>("material", "d1")?,
            doc.parse_opt::<f64>("material", "mu")?,
            doc.parse_opt::<f64>("material", "kappa")?,
        ) {
            (Some(c1), Some(d1), None, None) => NeoHookeParams::new(c1, d1)?,
            (None, None, Some(mu), Some(kappa)) => NeoHookeParams::from_moduli(mu, kappa)?,
            _ => {
                return Err(Error::Config(
                    "[material] needs either `c1` and `d1` or `mu` and `kappa`".into(),
                ))
            }
        };

        let mut solver = builtin_solver();
        if let Some(v) = doc.parse_opt("solver", "rel_tol")? {
            solver.rel_tol = v;
        }
        if let Some(v) = doc.parse_opt("solver", "abs_tol")? {
            solver.abs_tol = v;
        }
        if let Some(v) = doc.parse_opt("solver", "max_iter")? {
            solver.max_iter = v;
        }
        if let Some(v) = doc.parse_bool("solver", "line_search")? {
            solver.line_search = v;
        }
        if let Some(v) = doc.parse_opt("solver", "threads")? {
            solver.threads = v;
        }
        if let Some(v) = doc.get("solver", "rate_tangent") {
            solver.rate_tangent = v.parse()?;
        }

        let kind = match kind.as_str() {
            "fem" => {
                let mesh = MeshSpec {
                    width: doc.require("mesh", "width")?,
                    height: doc.require("mesh", "height")?,
                    nx: doc.require("mesh", "nx")?,
                    ny: doc.require("mesh", "ny")?,
                    thickness: doc.parse_opt("mesh", "thickness")?.unwrap_or(1.0),
                    punch_fraction: doc.parse_opt("mesh", "punch_fraction")?,
                };
                let steps = doc.require("load", "steps")?;
                let mut constraints = Vec::new();
                for (key, value) in doc.entries("constraints") {
                    let (set, component) = split_target(&key)?;
                    let words: Vec<&str> = value.split_whitespace().collect();
                    let value = match words.as_slice() {
                        ["affine", a, b] => {
                            BcValue::Affine([parse_f64(a, &key)?, parse_f64(b, &key)?])
                        }
                        [v] => BcValue::Value(parse_f64(v, &key)?),
                        _ => {
                            return Err(Error::Config(format!(
                                "[constraints] {key}: expected a number or `affine a b`"
                            )))
                        }
                    };
                    constraints.push(Constraint {
                        set,
                        component,
                        value,
                    });
                }
                let mut tractions = Vec::new();
                for (key, value) in doc.entries("tractions") {
                    let (edge_set, component) = split_target(&key)?;
                    tractions.push(Traction {
                        edge_set,
                        component,
                        value: parse_f64(&value, &key)?,
                    });
                }
                let reaction = ReactionSpec {
                    set: doc.require("reaction", "set")?,
                    component: parse_component(&doc.require::<String>("reaction", "component")?)?,
                    sign: doc.parse_opt("reaction", "sign")?.unwrap_or(1.0),
                };
                ScenarioKind::Fem(FemSpec {
                    mesh,
                    constraints,
                    tractions,
                    steps,
                    reaction,
                })
            }
            "point" => ScenarioKind::Point(PointSpec {
                path: doc.require::<String>("path", "kind")?.parse()?,
                target: doc.require("path", "target")?,
                steps: doc.require("path", "steps")?,
            }),
            other => {
                return Err(Error::Config(format!(
                    "[scenario] kind must be fem or point, got `{other}`"
                )))
            }
        };

        let rule: String = doc
            .parse_opt("verdict", "rule")?
            .unwrap_or_else(|| "none".into());
        let verdict = match rule.as_str() {
            "none" => VerdictRule::None,
            "ordering" => VerdictRule::Ordering {
                tol: doc.require("verdict", "tol")?,
            },
            "coincide" => VerdictRule::Coincide {
                tol: doc.require("verdict", "tol")?,
            },
            "rate_pair" => VerdictRule::RatePair {
                tol: doc.require("verdict", "tol")?,
            },
            "repair" => VerdictRule::Repair {
                mod_tol: doc.require("verdict", "mod_tol")?,
                unmod_min: doc.require("verdict", "unmod_min")?,
            },
            other => return Err(Error::Config(format!("unknown verdict rule `{other}`"))),
        };

        Ok(Scenario {
            name,
            material,
            pathways,
            kind,
            verdict,
            solver,
        })
    }
}

// ---------------------------------------------------------------------------
// running

/// One row of a per-step finite element history.
#[derive(Clone, Debug, PartialEq)]
pub struct RunRow {
    pub step: usize,
    pub scale: f64,
    /// Applied displacement of the reaction set (mm).
    pub displacement: f64,
    /// Signed reaction resultant (N).
    pub reaction: f64,
    pub iterations: usize,
    pub min_j: f64,
    pub max_j: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FemRun {
    pub report: SolveReport,
    pub rows: Vec<RunRow>,
}

/// Runs one pathway of a finite element scenario.
pub fn run_fem(
    scenario: &Scenario,
    pathway: Pathway,
    observer: impl FnMut(&StepSnapshot<'_>) -> Result<()>,
) -> Result<FemRun> {
    let ScenarioKind::Fem(spec) = &scenario.kind else {
        return Err(Error::Config(format!(
            "scenario `{}` is not a finite element scenario",
            scenario.name
        )));
    };
    let model = spec.build_model(scenario.material)?;
    let program = LoadProgram::uniform(spec.steps)?;
    let full = spec.full_displacement(&model)?;
    let report = run_load_program(&model, &program, pathway, &scenario.solver, observer)?;
    let rows = report
        .steps
        .iter()
        .map(|s| RunRow {
            step: s.step,
            scale: s.scale,
            displacement: s.scale * full,
            reaction: spec.reaction.sign
                * s.reactions
                    .get(&spec.reaction.set)
                    .map_or(0.0, |r| r[spec.reaction.component]),
            iterations: s.iterations,
            min_j: s.min_j,
            max_j: s.max_j,
        })
        .collect();
    Ok(FemRun { report, rows })
}

/// Stress history of one pathway along a point scenario, including the
/// reference state at index 0.
pub fn run_point(scenario: &Scenario, pathway: Pathway) -> Result<Vec<SymTensor2>> {
    let ScenarioKind::Point(spec) = &scenario.kind else {
        return Err(Error::Config(format!(
            "scenario `{}` is not a point scenario",
            scenario.name
        )));
    };
    integrate_path(&scenario.material, pathway, &spec.schedule())
        .map_err(|e| e.in_pathway(pathway.name()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathwayCurve {
    pub pathway: Pathway,
    /// Scalar response per grid point: reaction (N) or stress (MPa).
    pub response: Vec<f64>,
    /// Finite element history, absent for point scenarios.
    pub run: Option<FemRun>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Deviation {
    pub pathway: Pathway,
    pub reference: Pathway,
    /// `max |a − b| / max(|b|, floor)` over the grid.
    pub max_rel: f64,
    /// Same measure at the last grid point.
    pub final_rel: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub rule: VerdictRule,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonResult {
    pub scenario: String,
    /// Applied displacement (mm) for finite element scenarios, J for point
    /// scenarios.
    pub abscissa: Vec<f64>,
    pub curves: Vec<PathwayCurve>,
    pub deviations: Vec<Deviation>,
    pub verdict: Verdict,
}

impl ComparisonResult {
    pub fn curve(&self, p: Pathway) -> Option<&PathwayCurve> {
        self.curves.iter().find(|c| c.pathway == p)
    }

    pub fn deviation(&self, a: Pathway, b: Pathway) -> Option<&Deviation> {
        self.deviations
            .iter()
            .find(|d| d.pathway == a && d.reference == b)
    }
}

fn deviation(a: &[f64], b: &[f64]) -> (f64, f64) {
    let rel = |x: f64, y: f64| (x - y).abs() / y.abs().max(DEVIATION_FLOOR);
    let max = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| rel(x, y))
        .fold(0.0, f64::max);
    let last = match (a.last(), b.last()) {
        (Some(&x), Some(&y)) => rel(x, y),
        _ => 0.0,
    };
    (max, last)
}

fn evaluate_verdict(rule: VerdictRule, curves: &[PathwayCurve], devs: &[Deviation]) -> Verdict {
    let dev = |a, b| {
        devs.iter()
            .find(|d| d.pathway == a && d.reference == b)
            .copied()
    };
    let last = |p| {
        curves
            .iter()
            .find(|c| c.pathway == p)
            .and_then(|c| c.response.last().copied())
    };
    use Pathway::*;
    let (holds, detail) = match rule {
        VerdictRule::None => (true, "no verdict".to_string()),
        VerdictRule::Ordering { tol } => {
            let (u, t) = (
                last(RateUnmodified).unwrap_or(f64::NAN),
                last(Total).unwrap_or(f64::NAN),
            );
            let m = dev(RateModified, Total).map_or(f64::NAN, |d| d.max_rel);
            let stiffer = u > t;
            let repaired = m < tol;
            (
                stiffer && repaired,
                format!(
                    "rate_unmodified stiffer than total at final step: {stiffer} ({u:.6e} vs {t:.6e}); \
                     rate_modified max deviation {m:.3e} < {tol}: {repaired}"
                ),
            )
        }
        VerdictRule::Coincide { tol } => {
            let worst = devs.iter().map(|d| d.max_rel).fold(0.0, f64::max);
            let ok = worst < tol;
            (
                ok,
                format!("max pairwise deviation {worst:.3e} < {tol}: {ok}"),
            )
        }
        VerdictRule::RatePair { tol } => {
            let d = dev(RateUnmodified, RateModified).map_or(f64::NAN, |d| d.max_rel);
            let ok = d < tol;
            (
                ok,
                format!("rate_unmodified vs rate_modified deviation {d:.3e} < {tol}: {ok}"),
            )
        }
        VerdictRule::Repair { mod_tol, unmod_min } => {
            let m = dev(RateModified, Total).map_or(f64::NAN, |d| d.final_rel);
            let u = dev(RateUnmodified, Total).map_or(f64::NAN, |d| d.final_rel);
            let (mod_ok, unmod_ok) = (m < mod_tol, u > unmod_min);
            (
                mod_ok && unmod_ok,
                format!(
                    "endpoint error rate_modified {m:.3e} < {mod_tol}: {mod_ok}; \
                     rate_unmodified {u:.3e} > {unmod_min}: {unmod_ok}"
                ),
            )
        }
    };
    Verdict {
        rule,
        holds,
        detail,
    }
}

/// Runs every pathway of the scenario and compares the response curves.
///
/// Pathways run on separate threads; results are merged in the order of
/// `scenario.pathways`, so the outcome does not depend on scheduling.
pub fn compare_pathways(scenario: &Scenario) -> Result<ComparisonResult> {
    scenario.validate()?;
    let results: Vec<Result<PathwayCurve>> = std::thread::scope(|s| {
        let handles: Vec<_> = scenario
            .pathways
            .iter()
            .map(|&p| s.spawn(move || run_curve(scenario, p)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("pathway worker panicked"))
            .collect()
    });
    let curves = results.into_iter().collect::<Result<Vec<_>>>()?;

    let abscissa = match &scenario.kind {
        ScenarioKind::Fem(_) => curves[0]
            .run
            .as_ref()
            .map(|r| r.rows.iter().map(|row| row.displacement).collect())
            .unwrap_or_default(),
        ScenarioKind::Point(spec) => spec.schedule().iter().map(Tensor2::det).collect(),
    };

    let mut deviations = Vec::new();
    let pairs = [
        (Pathway::RateUnmodified, Pathway::Total),
        (Pathway::RateModified, Pathway::Total),
        (Pathway::RateUnmodified, Pathway::RateModified),
    ];
    for (a, b) in pairs {
        let ca = curves.iter().find(|c| c.pathway == a);
        let cb = curves.iter().find(|c| c.pathway == b);
        if let (Some(ca), Some(cb)) = (ca, cb) {
            let (max_rel, final_rel) = deviation(&ca.response, &cb.response);
            deviations.push(Deviation {
                pathway: a,
                reference: b,
                max_rel,
                final_rel,
            });
        }
    }
    let verdict = evaluate_verdict(scenario.verdict, &curves, &deviations);
    Ok(ComparisonResult {
        scenario: scenario.name.clone(),
        abscissa,
        curves,
        deviations,
        verdict,
    })
}

fn run_curve(scenario: &Scenario, pathway: Pathway) -> Result<PathwayCurve> {
    match &scenario.kind {
        ScenarioKind::Fem(_) => {
            let run = run_fem(scenario, pathway, |_| Ok(()))?;
            Ok(PathwayCurve {
                pathway,
                response: run.rows.iter().map(|r| r.reaction).collect(),
                run: Some(run),
            })
        }
        ScenarioKind::Point(spec) => {
            let history = run_point(scenario, pathway)?;
            Ok(PathwayCurve {
                pathway,
                response: history.iter().map(|s| spec.response(s)).collect(),
                run: None,
            })
        }
    }
}

/// Deformation schedule from text: one `F` per line as nine numbers in
/// row-major order, separated by whitespace or commas. Blank lines and lines
/// starting with `#` are skipped. The identity is prepended when the first
/// state is not the reference.
pub fn parse_schedule(text: &str) -> Result<Vec<Tensor2>> {
    let mut out = vec![Tensor2::identity()];
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let vals = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| parse_f64(t, &format!("schedule line {}", n + 1)))
            .collect::<Result<Vec<f64>>>()?;
        if vals.len() != 9 {
            return Err(Error::Config(format!(
                "schedule line {}: expected 9 components, got {}",
                n + 1,
                vals.len()
            )));
        }
        let f = Tensor2::from_fn(|i, j| vals[3 * i + j]);
        if out.len() == 1 && (f - Tensor2::identity()).max_abs() <= 1e-14 {
            continue;
        }
        out.push(f);
    }
    if out.len() < 2 {
        return Err(Error::Config("schedule holds no deformation states".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_materials() {
        let f = builtin("footing").unwrap();
        assert!((f.material.mu() - 1.0).abs() < 1e-15 && (f.material.kappa() - 0.78).abs() < 1e-15);
        let c = builtin("confined").unwrap();
        assert!(
            (c.material.mu() - 1.0).abs() < 1e-15 && (c.material.kappa() - 2000.0).abs() < 1e-12
        );
        for name in ["patch_uniaxial", "patch_shear", "point_dilation"] {
            assert_eq!(builtin(name).unwrap().material, NeoHookeParams::foam());
        }
        assert!(matches!(builtin("o-ring"), Err(Error::UnknownScenario(_))));
    }

    #[test]
    fn footing_geometry() {
        let ScenarioKind::Fem(spec) = builtin("footing").unwrap().kind else {
            panic!()
        };
        assert_eq!(
            (spec.mesh.width, spec.mesh.height, spec.mesh.thickness),
            (20.0, 20.0, 5.0)
        );
        let model = spec.build_model(NeoHookeParams::foam()).unwrap();
        assert_eq!(spec.full_displacement(&model).unwrap(), 4.0);
    }

    #[test]
    fn patch_uniaxial_grid() {
        let ScenarioKind::Fem(spec) = builtin("patch_uniaxial").unwrap().kind else {
            panic!()
        };
        let program = LoadProgram::uniform(spec.steps).unwrap();
        assert_eq!(program.len(), 100);
        assert_eq!(program.scales()[0], 0.01);
        let model = spec.build_model(NeoHookeParams::foam()).unwrap();
        assert!((spec.full_displacement(&model).unwrap() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn builtins_round_trip_through_config() {
        for name in BUILTIN_NAMES {
            let s = builtin(name).unwrap();
            let text = s.to_config_text();
            let back = Scenario::from_config_text(&text).unwrap();
            assert_eq!(back, s, "{name}:\n{text}");
        }
    }

    #[test]
    fn config_errors() {
        let text = builtin("footing").unwrap().to_config_text();
        let bad = text.replace("[load]\n", "[load]\nwobble = 1\n");
        assert!(Scenario::from_config_text(&bad).unwrap_err().is_config());
        let bad = text.replace("set = punch", "set = nowhere");
        assert!(Scenario::from_config_text(&bad).is_err());
        let bad = text.replace("c1 = 0.5", "mu = 1");
        assert!(Scenario::from_config_text(&bad).is_err());
    }

    #[test]
    fn moduli_accepted_in_config() {
        let text = builtin("point_dilation")
            .unwrap()
            .to_config_text()
            .replace("c1 = 0.5\n", "mu = 1\n")
            .replace(
                &format!("d1 = {}\n", NeoHookeParams::foam().d1()),
                "kappa = 0.78\n",
            );
        let s = Scenario::from_config_text(&text).unwrap();
        assert!((s.material.kappa() - 0.78).abs() < 1e-15);
    }

    #[test]
    fn point_dilation_repair_verdict() {
        let r = compare_pathways(&builtin("point_dilation").unwrap()).unwrap();
        assert!(r.verdict.holds, "{}", r.verdict.detail);
        let total = r
            .curve(Pathway::Total)
            .unwrap()
            .response
            .last()
            .copied()
            .unwrap();
        assert!((total - 0.56784).abs() < 1e-12);
        assert!((r.abscissa.last().unwrap() - 1.728).abs() < 1e-12);
    }

    #[test]
    fn deviation_uses_floor() {
        let (m, l) = deviation(&[0.0, 1e-9], &[0.0, 0.0]);
        assert!((m - 1e-3).abs() < 1e-15 && (l - 1e-3).abs() < 1e-15);
    }

    #[test]
    fn schedule_text_is_parsed_with_the_reference_prepended() {
        let text = "# stretch\n1.1 0 0 0 1 0 0 0 1\n1.2,0,0, 0,1,0, 0,0,1\n";
        let s = parse_schedule(text).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s[0], Tensor2::identity());
        assert_eq!(s[2][(0, 0)], 1.2);
        assert!(parse_schedule("1 0 0\n").is_err());
        assert!(parse_schedule("1 0 0 0 1 0 0 0 1\n").is_err());
    }
}
