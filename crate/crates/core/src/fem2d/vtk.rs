//! Legacy ASCII VTK output of the deformed configuration.

use std::fmt::Write as _;

use super::element::GaussResult;
use super::mesh::Mesh;

/// Renders an unstructured grid of quads with nodal displacement and
/// element-averaged `J` and Cauchy stress components.
pub fn render_vtk(
    title: &str,
    mesh: &Mesh,
    displacement: &[f64],
    gauss: &[[GaussResult; 4]],
) -> String {
    let mut s = String::new();
    let n = mesh.n_nodes();
    let ne = mesh.elements.len();
    let _ = writeln!(s, "# vtk DataFile Version 3.0");
    let _ = writeln!(s, "{}", title.replace('\n', " "));
    let _ = writeln!(s, "ASCII");
    let _ = writeln!(s, "DATASET UNSTRUCTURED_GRID");
    let _ = writeln!(s, "POINTS {n} double");
    for (k, x) in mesh.nodes.iter().enumerate() {
        let _ = writeln!(
            s,
            "{:.16e} {:.16e} 0",
            x[0] + displacement[2 * k],
            x[1] + displacement[2 * k + 1]
        );
    }
    let _ = writeln!(s, "CELLS {ne} {}", 5 * ne);
    for c in &mesh.elements {
        let _ = writeln!(s, "4 {} {} {} {}", c[0], c[1], c[2], c[3]);
    }
    let _ = writeln!(s, "CELL_TYPES {ne}");
    for _ in 0..ne {
        let _ = writeln!(s, "9");
    }
    let _ = writeln!(s, "POINT_DATA {n}");
    let _ = writeln!(s, "VECTORS displacement double");
    for k in 0..n {
        let _ = writeln!(
            s,
            "{:.16e} {:.16e} 0",
            displacement[2 * k],
            displacement[2 * k + 1]
        );
    }
    let _ = writeln!(s, "CELL_DATA {ne}");
    let _ = writeln!(s, "SCALARS J double 1");
    let _ = writeln!(s, "LOOKUP_TABLE default");
    for g in gauss {
        let j = g.iter().map(|p| p.j).sum::<f64>() / 4.0;
        let _ = writeln!(s, "{j:.16e}");
    }
    for (c, name) in ["s11", "s22", "s33", "s12", "s13", "s23"]
        .iter()
        .enumerate()
    {
        let _ = writeln!(s, "SCALARS {name} double 1");
        let _ = writeln!(s, "LOOKUP_TABLE default");
        for g in gauss {
            let v = g.iter().map(|p| p.sigma.0[c]).sum::<f64>() / 4.0;
            let _ = writeln!(s, "{v:.16e}");
        }
    }
    s
}
