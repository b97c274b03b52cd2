use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hyperrate::check::{run_checks, CheckOptions};
use hyperrate::fem2d::{render_vtk, RateTangent};
use hyperrate::output::{compare_csv, compare_summary, point_csv, run_csv};
use hyperrate::scenarios::{
    builtin, compare_pathways, load_scenario, parse_schedule, run_fem, PathKind, PointSpec,
    Scenario, ScenarioKind,
};
use hyperrate::{rateint, Error, Pathway};

const CONFIG_KEYS: &str = "\
CONFIG FILE
  Flat `key = value` lines grouped under [section] headers. Full-line
  comments start with `#` or `;`. Unknown keys and sections are errors.

  [scenario]    name, kind = fem | point, pathways = total, rate_unmodified, rate_modified
  [material]    c1, d1  (or mu, kappa)                              MPa, 1/MPa
  [solver]      rel_tol, abs_tol, max_iter, line_search = true|false,
                threads, rate_tangent = continuum | consistent
  [mesh]        width, height (mm), nx, ny, thickness (mm, default 1), punch_fraction
                (punch_fraction adds the node set `punch`, centred on the top edge)
  [load]        steps
  [constraints] <set>.<x|y> = <mm> | affine <a> <b>   (u = a X + b Y)
                sets: bottom, top, left, right, boundary, all, punch
  [tractions]   <edge>.<x|y> = <MPa>                  edges: bottom, top, left, right
  [reaction]    set, component = x | y, sign = 1 | -1
  [path]        kind = dilation | shear | rotation | uniaxial, target, steps
  [verdict]     rule = none | ordering | coincide | rate_pair | repair,
                tol (ordering, coincide, rate_pair), mod_tol and unmod_min (repair)

BUILTIN SCENARIOS
  footing, confined, patch_uniaxial, patch_shear, point_dilation

EXIT CODES
  0 success, 1 verdict or check failure, 2 config or internal error, 3 solver failure";

#[derive(Parser)]
#[command(name = "hyperrate", version, about = "Compare total and Jaumann-rate neo-Hooke pathways", after_long_help = CONFIG_KEYS)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the built-in verification checks
    #[command(after_long_help = CONFIG_KEYS)]
    Check {
        /// Run only checks whose name contains this text
        #[arg(long)]
        filter: Option<String>,
        /// Test hook: scale C_1111 of the tangent under test by this factor
        #[arg(long, hide = true)]
        tangent_fault: Option<f64>,
    },
    /// Integrate a deformation path at a single material point
    #[command(after_long_help = CONFIG_KEYS)]
    Point {
        #[command(flatten)]
        source: Source,
        /// Path kind, overriding the scenario's [path] section
        #[arg(long, value_parser = parse_path_kind)]
        path: Option<PathKind>,
        /// Path target (stretch, shear or angle in rad)
        #[arg(long)]
        target: Option<f64>,
        /// Number of increments
        #[arg(long)]
        steps: Option<usize>,
        /// File with one deformation gradient per line (9 numbers, row-major)
        #[arg(long, conflicts_with_all = ["path", "target", "steps"])]
        schedule: Option<PathBuf>,
        /// Pathways to integrate (repeatable); defaults to the scenario list
        #[arg(long, value_parser = parse_pathway)]
        pathway: Vec<Pathway>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run one pathway of a finite element scenario
    #[command(after_long_help = CONFIG_KEYS)]
    Run {
        #[command(flatten)]
        source: Source,
        /// Pathway to run
        #[arg(long, value_parser = parse_pathway, default_value = "total")]
        pathway: Pathway,
        #[command(flatten)]
        fem: FemArgs,
        /// Write a VTK file of the deformed mesh after every step (needs --out)
        #[arg(long)]
        vtk: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run every pathway of a scenario and evaluate its verdict
    #[command(after_long_help = CONFIG_KEYS)]
    Compare {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        fem: FemArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args)]
struct Source {
    /// Scenario config file
    #[arg(value_name = "CONFIG", conflicts_with = "scenario")]
    config: Option<PathBuf>,
    /// Builtin scenario name or config file path
    #[arg(long)]
    scenario: Option<String>,
}

#[derive(Args)]
struct FemArgs {
    /// Elements across the width
    #[arg(long)]
    nx: Option<usize>,
    /// Elements across the height
    #[arg(long)]
    ny: Option<usize>,
    /// Worker threads for element evaluation
    #[arg(long)]
    threads: Option<usize>,
    /// Element stiffness of the rate pathways
    #[arg(long, value_parser = parse_rate_tangent)]
    rate_tangent: Option<RateTangent>,
}

#[derive(Args)]
struct OutArgs {
    /// Output directory; without it CSV goes to stdout and summaries to stderr
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_pathway(s: &str) -> Result<Pathway, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_path_kind(s: &str) -> Result<PathKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_rate_tangent(s: &str) -> Result<RateTangent, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Failure with its exit code.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(if e.is_config() { 2 } else { 3 }, e.to_string())
    }
}

type CliResult = Result<u8, Fail>;

fn io_fail(path: &Path, e: std::io::Error) -> Fail {
    Fail(2, format!("cannot write `{}`: {e}", path.display()))
}

fn scenario_from(source: &Source, default: &str) -> Result<Scenario, Fail> {
    let s = match (&source.config, &source.scenario) {
        (Some(path), _) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Fail(2, format!("cannot read `{}`: {e}", path.display())))?;
            Scenario::from_config_text(&text)?
        }
        (None, Some(name)) => load_scenario(name)?,
        (None, None) => builtin(default)?,
    };
    Ok(s)
}

fn apply_fem_args(mut s: Scenario, fem: &FemArgs) -> Result<Scenario, Fail> {
    s = s.with_resolution(fem.nx, fem.ny)?;
    if let Some(t) = fem.threads {
        s.solver.threads = t;
    }
    if let Some(t) = fem.rate_tangent {
        s.solver.rate_tangent = t;
    }
    s.validate()?;
    Ok(s)
}

/// Writes `text` to `dir/name`, or to stdout when no directory is given.
fn emit(out: &OutArgs, name: &str, text: &str) -> Result<(), Fail> {
    match &out.out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| io_fail(dir, e))?;
            let path = dir.join(name);
            fs::write(&path, text).map_err(|e| io_fail(&path, e))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_check(filter: Option<String>, tangent_fault: Option<f64>) -> CliResult {
    let opts = CheckOptions {
        filter,
        tangent_fault,
    };
    let outcomes =
        run_checks(&opts).map_err(|e| Fail(2, format!("check could not be evaluated: {e}")))?;
    if outcomes.is_empty() {
        return Err(Fail(2, "filter matches no check".into()));
    }
    let mut failed = 0;
    for o in &outcomes {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!(
            "{tag} {:<22} max_error={:.3e} tol={:.0e}",
            o.name, o.error, o.tolerance
        );
        failed += usize::from(!o.passed);
    }
    println!(
        "{} of {} checks passed",
        outcomes.len() - failed,
        outcomes.len()
    );
    Ok(u8::from(failed > 0))
}

#[allow(clippy::too_many_arguments)]
fn cmd_point(
    source: &Source,
    path: Option<PathKind>,
    target: Option<f64>,
    steps: Option<usize>,
    schedule_file: Option<&Path>,
    pathways: Vec<Pathway>,
    out: &OutArgs,
) -> CliResult {
    let mut scenario = scenario_from(source, "point_dilation")?;
    let ScenarioKind::Point(spec) = &mut scenario.kind else {
        return Err(Fail(
            2,
            format!("scenario `{}` is not a point scenario", scenario.name),
        ));
    };
    if let Some(k) = path {
        *spec = PointSpec {
            path: k,
            target: target.unwrap_or(spec.target),
            steps: steps.unwrap_or(spec.steps),
        };
    } else {
        spec.target = target.unwrap_or(spec.target);
        spec.steps = steps.unwrap_or(spec.steps);
    }
    scenario.validate()?;
    let ScenarioKind::Point(spec) = &scenario.kind else {
        unreachable!()
    };
    let schedule = match schedule_file {
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| Fail(2, format!("cannot read `{}`: {e}", p.display())))?;
            parse_schedule(&text)?
        }
        None => spec.schedule(),
    };
    let pathways = if pathways.is_empty() {
        scenario.pathways.clone()
    } else {
        pathways
    };
    let histories = pathways
        .iter()
        .map(|&p| {
            rateint::integrate_path(&scenario.material, p, &schedule)
                .map_err(|e| e.in_pathway(p.name()))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    emit(
        out,
        "point.csv",
        &point_csv(&schedule, &pathways, &histories),
    )?;
    Ok(0)
}

fn cmd_run(
    source: &Source,
    pathway: Pathway,
    fem: &FemArgs,
    vtk: bool,
    out: &OutArgs,
) -> CliResult {
    let scenario = apply_fem_args(scenario_from(source, "footing")?, fem)?;
    let ScenarioKind::Fem(spec) = &scenario.kind else {
        return Err(Fail(
            2,
            format!(
                "scenario `{}` is not a finite element scenario",
                scenario.name
            ),
        ));
    };
    let vtk_dir = match (vtk, &out.out) {
        (false, _) => None,
        (true, None) => return Err(Fail(2, "--vtk needs --out".into())),
        (true, Some(d)) => {
            let d = d.join("vtk");
            fs::create_dir_all(&d).map_err(|e| io_fail(&d, e))?;
            Some(d)
        }
    };
    let mesh = spec.mesh.build()?;
    let run = run_fem(&scenario, pathway, |snap| {
        if let Some(dir) = &vtk_dir {
            let path = dir.join(format!(
                "{}_{}_{:04}.vtk",
                scenario.name, pathway, snap.step
            ));
            let title = format!("{} {} step {}", scenario.name, pathway, snap.step);
            fs::write(
                &path,
                render_vtk(&title, &mesh, snap.displacement, &snap.gauss),
            )
            .map_err(|e| Error::Config(format!("cannot write `{}`: {e}", path.display())))?;
        }
        Ok(())
    })?;
    emit(out, &format!("run_{pathway}.csv"), &run_csv(&run.rows))?;
    Ok(0)
}

fn cmd_compare(source: &Source, fem: &FemArgs, out: &OutArgs) -> CliResult {
    let mut scenario = scenario_from(source, "footing")?;
    let is_fem = matches!(scenario.kind, ScenarioKind::Fem(_));
    if is_fem {
        scenario = apply_fem_args(scenario, fem)?;
    } else if fem.nx.is_some() || fem.ny.is_some() {
        return Err(Fail(
            2,
            format!("scenario `{}` has no mesh to refine", scenario.name),
        ));
    }
    let result = compare_pathways(&scenario)?;
    emit(out, "compare.csv", &compare_csv(&result, is_fem))?;
    let summary = compare_summary(&result);
    match &out.out {
        Some(_) => emit(out, "summary.txt", &summary)?,
        None => eprint!("{summary}"),
    }
    Ok(u8::from(!result.verdict.holds))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check {
            filter,
            tangent_fault,
        } => cmd_check(filter, tangent_fault),
        Command::Point {
            source,
            path,
            target,
            steps,
            schedule,
            pathway,
            out,
        } => cmd_point(
            &source,
            path,
            target,
            steps,
            schedule.as_deref(),
            pathway,
            &out,
        ),
        Command::Run {
            source,
            pathway,
            fem,
            vtk,
            out,
        } => cmd_run(&source, pathway, &fem, vtk, &out),
        Command::Compare { source, fem, out } => cmd_compare(&source, &fem, &out),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
