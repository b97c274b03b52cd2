use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Structured or unstructured plane mesh of 4-node quadrilaterals.
///
/// Coordinates are in mm; connectivity is counter-clockwise.
#[derive(Clone, Debug, PartialEq)]
pub struct Mesh {
    pub nodes: Vec<[f64; 2]>,
    pub elements: Vec<[usize; 4]>,
    pub node_sets: BTreeMap<String, Vec<usize>>,
    /// Boundary segments (node pairs) per edge set, used for tractions.
    pub edge_sets: BTreeMap<String, Vec<[usize; 2]>>,
}

/// Rectangle `[0, width] × [0, height]` split into `nx × ny` quads.
///
/// Nodes are numbered row by row from the bottom-left corner, which keeps the
/// stiffness bandwidth at about `2 (nx + 2)`.
pub fn mesh_rect(width: f64, height: f64, nx: usize, ny: usize) -> Result<Mesh> {
    if !(width > 0.0 && width.is_finite()) || !(height > 0.0 && height.is_finite()) {
        return Err(Error::InvalidDimension(format!(
            "rectangle size must be positive (width = {width}, height = {height})"
        )));
    }
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidDimension(format!(
            "element counts must be at least 1 (nx = {nx}, ny = {ny})"
        )));
    }
    let id = |i: usize, j: usize| j * (nx + 1) + i;

    let mut nodes = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            nodes.push([width * i as f64 / nx as f64, height * j as f64 / ny as f64]);
        }
    }
    let mut elements = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            elements.push([id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }

    let bottom: Vec<usize> = (0..=nx).map(|i| id(i, 0)).collect();
    let top: Vec<usize> = (0..=nx).map(|i| id(i, ny)).collect();
    let left: Vec<usize> = (0..=ny).map(|j| id(0, j)).collect();
    let right: Vec<usize> = (0..=ny).map(|j| id(nx, j)).collect();

    let segments = |ids: &[usize]| ids.windows(2).map(|w| [w[0], w[1]]).collect::<Vec<_>>();
    let mut edge_sets = BTreeMap::new();
    edge_sets.insert("bottom".to_string(), segments(&bottom));
    edge_sets.insert("top".to_string(), segments(&top));
    edge_sets.insert("left".to_string(), segments(&left));
    edge_sets.insert("right".to_string(), segments(&right));

    let mut boundary: Vec<usize> = bottom
        .iter()
        .chain(&top)
        .chain(&left)
        .chain(&right)
        .copied()
        .collect();
    boundary.sort_unstable();
    boundary.dedup();

    let mut node_sets = BTreeMap::new();
    node_sets.insert("bottom".to_string(), bottom);
    node_sets.insert("top".to_string(), top);
    node_sets.insert("left".to_string(), left);
    node_sets.insert("right".to_string(), right);
    node_sets.insert("boundary".to_string(), boundary);
    node_sets.insert("all".to_string(), (0..nodes.len()).collect());

    let mesh = Mesh {
        nodes,
        elements,
        node_sets,
        edge_sets,
    };
    mesh.validate()?;
    Ok(mesh)
}

impl Mesh {
    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_dofs(&self) -> usize {
        2 * self.nodes.len()
    }

    pub fn node_set(&self, name: &str) -> Result<&[usize]> {
        self.node_sets
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::Config(format!("unknown node set `{name}`")))
    }

    /// Adds `name` as the top-edge nodes whose x coordinate lies within the
    /// centred fraction `fraction` of the edge span.
    pub fn add_top_centre_set(&mut self, name: &str, fraction: f64) -> Result<()> {
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(Error::InvalidDimension(format!(
                "punch fraction must lie in (0, 1], got {fraction}"
            )));
        }
        let top = self.node_set("top")?.to_vec();
        let (xmin, xmax) = top
            .iter()
            .map(|&n| self.nodes[n][0])
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| {
                (a.min(x), b.max(x))
            });
        let centre = 0.5 * (xmin + xmax);
        let half = 0.5 * fraction * (xmax - xmin) + 1e-9 * (xmax - xmin);
        let set: Vec<usize> = top
            .into_iter()
            .filter(|&n| (self.nodes[n][0] - centre).abs() <= half)
            .collect();
        if set.is_empty() {
            return Err(Error::InvalidDimension(format!(
                "punch fraction {fraction} selects no nodes"
            )));
        }
        self.node_sets.insert(name.to_string(), set);
        Ok(())
    }

    /// Checks positive reference Jacobians at the 2×2 Gauss points and the
    /// absence of duplicate nodes.
    pub fn validate(&self) -> Result<()> {
        for (e, conn) in self.elements.iter().enumerate() {
            if conn.iter().any(|&n| n >= self.nodes.len()) {
                return Err(Error::InvalidDimension(format!(
                    "element {e} references a missing node"
                )));
            }
            let geom = super::element::ElementGeometry::new(&self.element_coords(e));
            if let Err(det) = geom {
                return Err(Error::InvalidDimension(format!(
                    "element {e} has non-positive reference Jacobian {det:e}"
                )));
            }
        }
        let mut sorted: Vec<(usize, [f64; 2])> = self.nodes.iter().copied().enumerate().collect();
        sorted.sort_by(|a, b| a.1[0].total_cmp(&b.1[0]));
        for (i, (ni, pi)) in sorted.iter().enumerate() {
            for (nj, pj) in sorted[i + 1..]
                .iter()
                .take_while(|(_, p)| p[0] - pi[0] < 1e-9)
            {
                if (pj[1] - pi[1]).abs() < 1e-9 {
                    return Err(Error::InvalidDimension(format!(
                        "nodes {ni} and {nj} coincide"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn element_coords(&self, e: usize) -> [[f64; 2]; 4] {
        let c = self.elements[e];
        [
            self.nodes[c[0]],
            self.nodes[c[1]],
            self.nodes[c[2]],
            self.nodes[c[3]],
        ]
    }

    /// Half-bandwidth of the stiffness matrix in dof numbering.
    pub fn half_bandwidth(&self) -> usize {
        self.elements
            .iter()
            .map(|c| {
                let lo = c.iter().min().copied().unwrap_or(0);
                let hi = c.iter().max().copied().unwrap_or(0);
                2 * (hi - lo) + 1
            })
            .max()
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let m = mesh_rect(1.0, 1.0, 1, 1).unwrap();
        assert_eq!((m.n_nodes(), m.elements.len()), (4, 1));
        let m = mesh_rect(20.0, 20.0, 16, 16).unwrap();
        assert_eq!((m.n_nodes(), m.elements.len()), (289, 256));
        assert_eq!(m.node_set("top").unwrap().len(), 17);
        assert_eq!(m.edge_sets["left"].len(), 16);
    }

    #[test]
    fn invalid_sizes() {
        assert!(matches!(
            mesh_rect(0.0, 1.0, 1, 1),
            Err(Error::InvalidDimension(_))
        ));
        assert!(matches!(
            mesh_rect(1.0, -1.0, 1, 1),
            Err(Error::InvalidDimension(_))
        ));
        assert!(matches!(
            mesh_rect(1.0, 1.0, 0, 1),
            Err(Error::InvalidDimension(_))
        ));
    }

    #[test]
    fn punch_set_covers_centre_half() {
        let mut m = mesh_rect(20.0, 20.0, 16, 16).unwrap();
        m.add_top_centre_set("punch", 0.5).unwrap();
        let xs: Vec<f64> = m.node_sets["punch"]
            .iter()
            .map(|&n| m.nodes[n][0])
            .collect();
        assert_eq!(xs.len(), 9);
        assert_eq!(xs.first().copied(), Some(5.0));
        assert_eq!(xs.last().copied(), Some(15.0));
    }

    #[test]
    fn detects_bad_elements_and_duplicates() {
        let mut m = mesh_rect(1.0, 1.0, 1, 1).unwrap();
        m.elements[0] = [0, 3, 2, 1]; // clockwise
        assert!(m.validate().is_err());
        let mut m = mesh_rect(1.0, 1.0, 1, 1).unwrap();
        m.nodes.push([0.0, 0.0]);
        assert!(m.validate().is_err());
    }
}
