//! CSV and summary rendering.
//!
//! Numbers are written with 17 significant digits in scientific notation,
//! independent of locale, so repeated runs produce identical bytes.

use std::fmt::Write;

use crate::rateint::Pathway;
use crate::scenarios::{ComparisonResult, RunRow};
use crate::tensor::{SymTensor2, Tensor2};

const COMPONENTS: [&str; 6] = ["s11", "s22", "s33", "s12", "s13", "s23"];

/// Formats `v` with 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn run_csv(rows: &[RunRow]) -> String {
    let mut s = String::from(
        "step,scale,punch_displacement_mm,reaction_force_N,newton_iters,min_J,max_J\n",
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            r.step,
            num(r.scale),
            num(r.displacement),
            num(r.reaction),
            r.iterations,
            num(r.min_j),
            num(r.max_j)
        );
    }
    s
}

/// One response column per pathway over the shared abscissa.
///
/// Finite element scenarios use `displacement_mm` and `reaction_<pathway>_N`;
/// point scenarios use `J` and `response_<pathway>_MPa`.
pub fn compare_csv(result: &ComparisonResult, fem: bool) -> String {
    let mut s = String::from(if fem {
        "step,displacement_mm"
    } else {
        "step,J"
    });
    for c in &result.curves {
        if fem {
            let _ = write!(s, ",reaction_{}_N", c.pathway);
        } else {
            let _ = write!(s, ",response_{}_MPa", c.pathway);
        }
    }
    s.push('\n');
    // finite element curves start at step 1, point curves at the reference
    let first = if fem { 1 } else { 0 };
    for (k, x) in result.abscissa.iter().enumerate() {
        let _ = write!(s, "{},{}", k + first, num(*x));
        for c in &result.curves {
            let _ = write!(s, ",{}", num(c.response[k]));
        }
        s.push('\n');
    }
    s
}

/// `key=value` lines with deviations and the verdict.
pub fn compare_summary(result: &ComparisonResult) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "scenario={}", result.scenario);
    for c in &result.curves {
        if let Some(v) = c.response.last() {
            let _ = writeln!(s, "final.{}={}", c.pathway, num(*v));
        }
        if let Some(run) = &c.run {
            let iters = run.rows.iter().map(|r| r.iterations).max().unwrap_or(0);
            let min_j = run
                .rows
                .iter()
                .map(|r| r.min_j)
                .fold(f64::INFINITY, f64::min);
            let balance = run
                .report
                .steps
                .iter()
                .map(|st| st.balance[0].abs().max(st.balance[1].abs()))
                .fold(0.0, f64::max);
            let _ = writeln!(s, "max_newton_iters.{}={iters}", c.pathway);
            let _ = writeln!(s, "min_J.{}={}", c.pathway, num(min_j));
            let _ = writeln!(s, "max_force_balance_N.{}={}", c.pathway, num(balance));
        }
    }
    for d in &result.deviations {
        let _ = writeln!(
            s,
            "deviation.{}_vs_{}.max={}",
            d.pathway,
            d.reference,
            num(d.max_rel)
        );
        let _ = writeln!(
            s,
            "deviation.{}_vs_{}.final={}",
            d.pathway,
            d.reference,
            num(d.final_rel)
        );
    }
    let _ = writeln!(s, "verdict.rule={}", result.verdict.rule.name());
    let _ = writeln!(s, "verdict.detail={}", result.verdict.detail);
    let _ = writeln!(s, "verdict.holds={}", result.verdict.holds);
    s
}

/// `step,J` followed by six stress components per pathway.
///
/// `histories[i]` belongs to `pathways[i]` and has one entry per schedule
/// state.
pub fn point_csv(
    schedule: &[Tensor2],
    pathways: &[Pathway],
    histories: &[Vec<SymTensor2>],
) -> String {
    let mut s = String::from("step,J");
    for p in pathways {
        for c in COMPONENTS {
            let _ = write!(s, ",{p}_{c}");
        }
    }
    s.push('\n');
    for (k, f) in schedule.iter().enumerate() {
        let _ = write!(s, "{k},{}", num(f.det()));
        for h in histories {
            for v in h[k].0 {
                let _ = write!(s, ",{}", num(v));
            }
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(-2.0), "-2.0000000000000000e0");
        let back: f64 = num(std::f64::consts::PI).parse().unwrap();
        assert_eq!(back, std::f64::consts::PI);
    }

    #[test]
    fn run_csv_layout() {
        let rows = [RunRow {
            step: 1,
            scale: 0.5,
            displacement: 2.0,
            reaction: 3.25,
            iterations: 4,
            min_j: 0.9,
            max_j: 1.1,
        }];
        let csv = run_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next(),
            Some("step,scale,punch_displacement_mm,reaction_force_N,newton_iters,min_J,max_J")
        );
        let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(fields.len(), 7);
        assert_eq!(fields[4], "4");
        assert_eq!(fields[3].parse::<f64>().unwrap(), 3.25);
    }

    #[test]
    fn point_csv_layout() {
        let schedule = [Tensor2::identity(), Tensor2::dilation(1.1)];
        let h = vec![vec![SymTensor2::zero(), SymTensor2::identity()]];
        let csv = point_csv(&schedule, &[Pathway::Total], &h);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(
            lines[0],
            "step,J,total_s11,total_s22,total_s33,total_s12,total_s13,total_s23"
        );
        assert_eq!(lines.len(), 3);
        assert!(lines[2].starts_with("1,1.3310000000000004e0,1.0000000000000000e0"));
    }
}
