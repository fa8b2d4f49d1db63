//! Tessellation axioms: faces are disks, each edge borders two distinct
//! faces, two face closures meet in nothing, a vertex, or an edge; and all
//! vertex and face degrees are at least 3.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::planar_map::{FaceId, Surface};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    /// Faces whose boundary walk repeats a vertex (axiom i).
    pub disk_faces: Vec<FaceId>,
    /// Edges whose two darts lie in the same face (axiom ii).
    pub edge_in_two_faces: Vec<[u64; 2]>,
    /// Face pairs meeting in anything other than one vertex or one edge (axiom iii).
    pub closure_intersection: Vec<[FaceId; 2]>,
    /// Interior vertices of degree below 3.
    pub low_degree_vertices: Vec<u64>,
    /// Faces of degree below 3.
    pub low_degree_faces: Vec<FaceId>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.disk_faces.is_empty()
            && self.edge_in_two_faces.is_empty()
            && self.closure_intersection.is_empty()
            && self.low_degree_vertices.is_empty()
            && self.low_degree_faces.is_empty()
    }

    pub fn disk_faces_ok(&self) -> bool {
        self.disk_faces.is_empty()
    }

    pub fn two_faces_ok(&self) -> bool {
        self.edge_in_two_faces.is_empty()
    }

    pub fn intersection_ok(&self) -> bool {
        self.closure_intersection.is_empty()
    }

    pub fn degrees_ok(&self) -> bool {
        self.low_degree_vertices.is_empty() && self.low_degree_faces.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |ok: bool| if ok { "ok" } else { "FAIL" };
        writeln!(f, "disk-faces: {}", mark(self.disk_faces_ok()))?;
        writeln!(f, "edge-in-two-faces: {}", mark(self.two_faces_ok()))?;
        writeln!(f, "closure-intersection: {}", mark(self.intersection_ok()))?;
        writeln!(f, "min-vertex-degree: {}", mark(self.low_degree_vertices.is_empty()))?;
        write!(f, "min-face-degree: {}", mark(self.low_degree_faces.is_empty()))
    }
}

/// Checks the tessellation axioms.
///
/// On a patch, the vertex degree bound applies to interior vertices only and
/// the closure-intersection axiom is checked among non-boundary faces; the
/// boundary faces stand in for unseen exterior.
pub fn validate_tessellation<S: Surface + ?Sized>(s: &S) -> ValidationReport {
    let m = s.map();
    let mut report = ValidationReport::default();

    for f in 0..m.face_count() {
        if !m.face_is_simple_cycle(f) {
            report.disk_faces.push(f);
        }
        if m.face_degree(f) < 3 {
            report.low_degree_faces.push(f);
        }
    }

    // Shared vertices and shared edges per face pair.
    let mut shared_edges: HashMap<(FaceId, FaceId), usize> = HashMap::new();
    for d in 0..m.dart_count() {
        let r = m.reverse(d);
        if d > r {
            continue;
        }
        let (f, g) = (m.face(d), m.face(r));
        if f == g {
            report
                .edge_in_two_faces
                .push([m.label(m.origin(d)), m.label(m.target(d))]);
        } else {
            *shared_edges.entry((f.min(g), f.max(g))).or_default() += 1;
        }
    }
    let mut shared_vertices: HashMap<(FaceId, FaceId), usize> = HashMap::new();
    for v in 0..m.vertex_count() {
        let mut faces: Vec<FaceId> = m.corner_faces(v).filter(|&f| !s.is_boundary_face(f)).collect();
        faces.sort_unstable();
        faces.dedup();
        for (i, &f) in faces.iter().enumerate() {
            for &g in &faces[i + 1..] {
                *shared_vertices.entry((f, g)).or_default() += 1;
            }
        }
    }
    let mut bad: Vec<[FaceId; 2]> = shared_vertices
        .iter()
        .filter(|(pair, &nv)| {
            let ne = shared_edges.get(pair).copied().unwrap_or(0);
            !matches!((nv, ne), (1, 0) | (2, 1))
        })
        .map(|(&(f, g), _)| [f, g])
        .collect();
    bad.sort_unstable();
    report.closure_intersection = bad;

    for v in 0..m.vertex_count() {
        if s.is_interior(v) && m.degree(v) < 3 {
            report.low_degree_vertices.push(m.label(v));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar_map::{Patch, PlanarMap};

    #[test]
    fn k3_fails_intersection_and_degree() {
        let m = PlanarMap::from_rotation_system([(0, vec![1, 2]), (1, vec![2, 0]), (2, vec![0, 1])])
            .unwrap();
        let r = validate_tessellation(&m);
        assert!(!r.is_valid());
        assert_eq!(r.closure_intersection, vec![[0, 1]]);
        assert_eq!(r.low_degree_vertices, vec![0, 1, 2]);
        assert!(r.disk_faces_ok());
        assert!(r.two_faces_ok());
    }

    #[test]
    fn path_fails_two_faces() {
        // K_{1,3}: a star has one face that uses each edge twice.
        let m = PlanarMap::from_rotation_system([
            (0, vec![1, 2, 3]),
            (1, vec![0]),
            (2, vec![0]),
            (3, vec![0]),
        ])
        .unwrap();
        let r = validate_tessellation(&m);
        assert_eq!(r.edge_in_two_faces.len(), 3);
        assert_eq!(r.disk_faces, vec![0]);
    }

    #[test]
    fn patch_exempts_boundary_vertices() {
        // A lone square: every vertex has degree 2 but all sit on the boundary.
        let m = PlanarMap::from_rotation_system([
            (0, vec![1, 3]),
            (1, vec![2, 0]),
            (2, vec![3, 1]),
            (3, vec![0, 2]),
        ])
        .unwrap();
        assert!(!validate_tessellation(&m).is_valid());
        let p = Patch::from_darts(m, &[(0, 1)]).unwrap();
        assert!(validate_tessellation(&p).is_valid());
    }
}
