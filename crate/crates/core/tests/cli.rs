//! Command-line contract: outputs, flags and exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperrate"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn last_row(csv: &str) -> Vec<f64> {
    csv.lines()
        .last()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect()
}

#[test]
fn check_passes_on_a_fresh_build() {
    let o = bin(&["check"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("10 of 10 checks passed"));
}

#[test]
fn corrupted_tangent_fails_and_names_the_tangent_check() {
    let o = bin(&["check", "--tangent-fault", "1.01"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(
        out.lines().any(|l| l.starts_with("FAIL tangent_fd_rubber")),
        "{out}"
    );
    assert!(
        out.lines().any(|l| l.starts_with("FAIL tangent_fd_foam")),
        "{out}"
    );
}

#[test]
fn filter_selects_tangent_checks() {
    let o = bin(&["check", "--filter", "tangent"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let names: Vec<&str> = out
        .lines()
        .filter_map(|l| l.split_whitespace().nth(1))
        .collect();
    assert!(
        names
            .iter()
            .filter(|n| n.contains('_'))
            .all(|n| n.contains("tangent")),
        "{out}"
    );
    assert!(!out.contains("patch"));
}

#[test]
fn point_dilation_endpoint() {
    let o = bin(&["point"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    assert_eq!(header.len(), 2 + 18);
    assert_eq!(&header[..3], ["step", "J", "total_s11"]);
    let row = last_row(&csv);
    assert_eq!(row[0], 1000.0);
    assert!((row[1] - 1.728).abs() < 1e-12);
    assert!((row[2] - 0.56784).abs() < 1e-12);
    let data = csv.lines().nth(1).unwrap();
    assert!(data
        .split(',')
        .skip(1)
        .all(|v| v.contains('e') && !v.contains(' ')));
}

#[test]
fn rotation_path_is_stress_free() {
    let o = bin(&[
        "point", "--path", "rotation", "--target", "1.5", "--steps", "20",
    ]);
    assert_eq!(o.status.code(), Some(0));
    for v in &last_row(&stdout(&o))[2..] {
        assert!(v.abs() < 1e-14, "{v}");
    }
}

#[test]
fn shear_path_rate_columns_agree() {
    let o = bin(&[
        "point", "--path", "shear", "--target", "1", "--steps", "2000",
    ]);
    let row = last_row(&stdout(&o));
    let (u, m) = (&row[8..14], &row[14..20]);
    for (a, b) in u.iter().zip(m) {
        assert!((a - b).abs() <= 1e-12, "{a} {b}");
    }
}

#[test]
fn schedule_file_drives_the_point_study() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.txt");
    std::fs::write(&f, "1.05 0 0 0 1.05 0 0 0 1.05\n1.1 0 0 0 1.1 0 0 0 1.1\n").unwrap();
    let o = bin(&[
        "point",
        "--schedule",
        f.to_str().unwrap(),
        "--pathway",
        "total",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let row = last_row(&stdout(&o));
    assert_eq!(row.len(), 8);
    assert!((row[2] - 0.25818).abs() < 1e-14);
}

#[test]
fn run_writes_csv_and_one_vtk_file_per_step() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = bin(&[
        "run",
        "--scenario",
        "footing",
        "--pathway",
        "total",
        "--vtk",
        "--out",
        out,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("run_total.csv")).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "step,scale,punch_displacement_mm,reaction_force_N,newton_iters,min_J,max_J"
    );
    assert_eq!(csv.lines().count(), 101);
    let vtk_dir = dir.path().join("vtk");
    let files: Vec<_> = std::fs::read_dir(&vtk_dir).unwrap().collect();
    assert_eq!(files.len(), 100);
    let last = std::fs::read_to_string(vtk_dir.join("footing_total_0100.vtk")).unwrap();
    assert!(last.starts_with("# vtk DataFile Version 3.0"));
    assert!(last.contains("VECTORS displacement double") && last.contains("SCALARS J double 1"));
}

#[test]
fn compare_confined_coincides() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(&[
        "compare",
        "--scenario",
        "confined",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("compare.csv")).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "step,displacement_mm,reaction_total_N,reaction_rate_unmodified_N,reaction_rate_modified_N"
    );
    assert_eq!(csv.lines().count(), 51);
    let summary = std::fs::read_to_string(dir.path().join("summary.txt")).unwrap();
    assert!(
        summary.contains("verdict.rule=coincide\n") && summary.contains("verdict.holds=true\n")
    );
    assert!(summary.contains("deviation.rate_unmodified_vs_total.max="));
}

#[test]
fn compare_without_out_streams_csv_and_summary() {
    let o = bin(&["compare", "--scenario", "point_dilation"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("step,J,response_total_MPa,"));
    assert!(stderr(&o).contains("verdict.rule=repair"));
}

#[test]
fn config_file_scenario_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("s.cfg");
    std::fs::write(
        &cfg,
        "[scenario]\nname = strip\nkind = fem\npathways = total, rate_modified\n\
         [material]\nmu = 1.0\nkappa = 0.78\n[mesh]\nwidth = 2\nheight = 1\nnx = 4\nny = 2\n\
         [load]\nsteps = 10\n[constraints]\nleft.x = 0\nbottom.y = 0\nright.x = 0.2\n\
         [reaction]\nset = right\ncomponent = x\n[verdict]\nrule = none\n",
    )
    .unwrap();
    let o = bin(&["compare", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(
        stdout(&o).starts_with("step,displacement_mm,reaction_total_N,reaction_rate_modified_N\n")
    );
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.cfg",
        "[scenario]\nname = x\nkind = point\n[material]\nmu = 1\nkappa = 1\n\
         [path]\nkind = dilation\ntarget = 1.1\nsteps = 10\nspeed = 3\n",
    );
    let o = bin(&["point", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("speed"), "{}", stderr(&o));
    assert_eq!(
        bin(&["compare", "--scenario", "nope"]).status.code(),
        Some(2)
    );
    assert_eq!(bin(&["run", "--vtk"]).status.code(), Some(2));
    assert_eq!(
        bin(&["point", "--scenario", "footing"]).status.code(),
        Some(2)
    );
    assert_eq!(
        bin(&["check", "--filter", "nothing_matches"]).status.code(),
        Some(2)
    );
}

#[test]
fn numerical_failure_exits_three_with_step_and_pathway() {
    let o = bin(&[
        "point",
        "--path",
        "dilation",
        "--target",
        "3",
        "--steps",
        "2",
        "--pathway",
        "rate_modified",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let e = stderr(&o);
    assert!(e.contains("rate_modified") && e.contains("step 1"), "{e}");
}

#[test]
fn help_documents_config_keys_and_exit_codes() {
    for sub in ["check", "point", "run", "compare"] {
        let o = bin(&[sub, "--help"]);
        assert_eq!(o.status.code(), Some(0));
        let h = stdout(&o);
        for key in [
            "[constraints]",
            "rate_tangent",
            "punch_fraction",
            "unmod_min",
            "EXIT CODES",
        ] {
            assert!(h.contains(key), "{sub} --help lacks {key}");
        }
    }
}
