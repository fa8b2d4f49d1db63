//! Prism-like detection and the band structure between the two big faces.

use std::collections::{BTreeMap, HashSet};

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::curvature::curvature_at;
use crate::error::{Error, Result};
use crate::planar_map::{FaceId, Surface};
use crate::rational::{self, Rational};

/// Face degree from which a face counts as big.
pub const PRISMLIKE_THRESHOLD: usize = 43;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrismlikeVerdict {
    pub prismlike: bool,
    /// Faces of degree at least the threshold (boundary faces excluded).
    pub witnesses: Vec<FaceId>,
    pub witness_degrees: Vec<usize>,
}

pub fn is_prismlike<S: Surface + ?Sized>(g: &S) -> PrismlikeVerdict {
    is_prismlike_with(g, PRISMLIKE_THRESHOLD)
}

/// Closed maps need two big faces; a patch stands for an infinite graph and
/// needs one.
pub fn is_prismlike_with<S: Surface + ?Sized>(g: &S, threshold: usize) -> PrismlikeVerdict {
    let m = g.map();
    let witnesses: Vec<FaceId> = g.inner_faces().into_iter().filter(|&f| m.face_degree(f) >= threshold).collect();
    let needed = if g.boundary_faces().is_empty() { 2 } else { 1 };
    PrismlikeVerdict {
        prismlike: witnesses.len() >= needed,
        witness_degrees: witnesses.iter().map(|&f| m.face_degree(f)).collect(),
        witnesses,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BandKind {
    Triangle,
    Square,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Band {
    pub kind: BandKind,
    pub faces: Vec<FaceId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BandDecomposition {
    pub sigma1: FaceId,
    pub sigma2: Option<FaceId>,
    pub big_degree: usize,
    /// `bands[i]` holds the faces whose nearest vertex lies at distance `i`
    /// from the boundary of `sigma1`.
    pub bands: Vec<Band>,
}

impl BandDecomposition {
    pub fn band_count(&self) -> usize {
        self.bands.len()
    }
}

fn broken(msg: String) -> Error {
    Error::NotPrismlikeStructure(msg)
}

/// Splits the faces between the big faces into layers by distance from the
/// first one and checks each layer is a ring of triangles or a ring of
/// squares, the big faces are disjoint and equal, and the positively curved
/// vertices are exactly those on the big faces. Hexagons must already be
/// subdivided.
pub fn band_decomposition<S: Surface + ?Sized>(g: &S) -> Result<BandDecomposition> {
    let m = g.map();
    let verdict = is_prismlike(g);
    if !verdict.prismlike {
        return Err(Error::InvalidArgument("graph is not prism-like".into()));
    }
    let closed = g.boundary_faces().is_empty();
    let big = &verdict.witnesses;
    if big.len() > 2 || (!closed && big.len() > 1) {
        return Err(broken(format!("{} faces of degree >= {PRISMLIKE_THRESHOLD}", big.len())));
    }
    let sigma1 = big[0];
    let sigma2 = big.get(1).copied();
    let rim1 = m.face_vertices(sigma1);
    let mut on_rim: HashSet<usize> = rim1.iter().copied().collect();
    if let Some(s2) = sigma2 {
        let (d1, d2) = (m.face_degree(sigma1), m.face_degree(s2));
        if d1 != d2 {
            return Err(broken(format!("big faces have degrees {d1} and {d2}")));
        }
        for v in m.face_vertices(s2) {
            if !on_rim.insert(v) {
                return Err(broken(format!("big faces share vertex {}", m.label(v))));
            }
        }
    }

    let dist = m.distances_from(&rim1);
    let mut layers: BTreeMap<usize, Vec<FaceId>> = BTreeMap::new();
    for f in g.inner_faces() {
        if f == sigma1 || Some(f) == sigma2 {
            continue;
        }
        let deg = m.face_degree(f);
        if deg > 4 {
            return Err(broken(format!("face {f} has degree {deg}")));
        }
        let ds: Vec<usize> = m.face_vertices(f).iter().map(|&v| dist[v].unwrap()).collect();
        let lo = *ds.iter().min().unwrap();
        let hi = *ds.iter().max().unwrap();
        if hi != lo + 1 {
            return Err(broken(format!("face {f} spans distances {lo}..{hi}")));
        }
        layers.entry(lo).or_default().push(f);
    }
    let mut bands = Vec::new();
    for (expected, (layer, faces)) in layers.into_iter().enumerate() {
        if layer != expected {
            return Err(broken(format!("no faces at distance {expected} from the first big face")));
        }
        let kind = match m.face_degree(faces[0]) {
            3 => BandKind::Triangle,
            _ => BandKind::Square,
        };
        if let Some(&f) = faces.iter().find(|&&f| m.face_degree(f) != m.face_degree(faces[0])) {
            return Err(broken(format!("band {} mixes face degrees at face {f}", layer + 1)));
        }
        // A ring of faces is an annulus: V - E + F = 0.
        let mut verts = HashSet::new();
        let mut edges = HashSet::new();
        for &f in &faces {
            for &d in m.face_darts(f) {
                verts.insert(m.origin(d));
                edges.insert(d.min(m.reverse(d)));
            }
        }
        let chi = verts.len() as i64 - edges.len() as i64 + faces.len() as i64;
        if chi != 0 {
            return Err(broken(format!("band {} is not a ring (V - E + F = {chi})", layer + 1)));
        }
        bands.push(Band { kind, faces });
    }

    for v in g.interior_vertices() {
        let phi = curvature_at(g, v)?;
        if phi.is_negative() {
            return Err(Error::NotNonnegativelyCurved { vertex: m.label(v), curvature: phi });
        }
        if phi.is_positive() != on_rim.contains(&v) {
            return Err(broken(format!(
                "vertex {} has curvature {phi} but {} a big face",
                m.label(v),
                if on_rim.contains(&v) { "lies on" } else { "is off" }
            )));
        }
    }
    Ok(BandDecomposition { sigma1, sigma2, big_degree: m.face_degree(sigma1), bands })
}

/// Sum of curvature over the vertices of a big face; at least 1 whenever
/// the face has degree at least the threshold and its vertices are interior
/// and nonnegatively curved.
pub fn large_face_curvature_sum<S: Surface + ?Sized>(g: &S, sigma: FaceId) -> Result<Rational> {
    let m = g.map();
    if sigma >= m.face_count() || g.is_boundary_face(sigma) {
        return Err(Error::InvalidArgument(format!("face {sigma} is not an inner face")));
    }
    let deg = m.face_degree(sigma);
    if deg < PRISMLIKE_THRESHOLD {
        return Err(Error::InvalidArgument(format!("face {sigma} has degree {deg} < {PRISMLIKE_THRESHOLD}")));
    }
    let mut sum = Rational::zero();
    for v in m.face_vertices(sigma) {
        if !g.is_interior(v) {
            return Err(Error::InvalidArgument(format!("vertex {} is on the boundary", m.label(v))));
        }
        let phi = curvature_at(g, v)?;
        if phi.is_negative() {
            return Err(Error::NotNonnegativelyCurved { vertex: m.label(v), curvature: phi });
        }
        sum += phi;
    }
    if sum < rational::int(1) {
        return Err(broken(format!("curvature around face {sigma} sums to {sum} < 1")));
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{antiprism, grid_example, prism};
    use crate::planar_map::PlanarMap;
    use crate::rational::int;

    #[test]
    fn detection() {
        let p = prism(43).unwrap();
        let v = is_prismlike(&p);
        assert!(v.prismlike);
        assert_eq!(v.witness_degrees, vec![43, 43]);
        assert!(!is_prismlike(&grid_example(20, 1).unwrap()).prismlike);
        assert_eq!(is_prismlike(&grid_example(20, 1).unwrap()).witness_degrees, vec![46]);
        assert!(!is_prismlike(&prism(4).unwrap()).prismlike);
        assert!(is_prismlike(&prism(50).unwrap()).prismlike);
        assert!(!is_prismlike(&prism(42).unwrap()).prismlike);
        assert!(is_prismlike_with(&prism(42).unwrap(), 42).prismlike);
    }

    #[test]
    fn single_bands() {
        let d = band_decomposition(&prism(43).unwrap()).unwrap();
        assert_eq!(d.band_count(), 1);
        assert_eq!(d.bands[0].kind, BandKind::Square);
        assert_eq!(d.bands[0].faces.len(), 43);
        let d = band_decomposition(&antiprism(43).unwrap()).unwrap();
        assert_eq!(d.band_count(), 1);
        assert_eq!(d.bands[0].kind, BandKind::Triangle);
        assert_eq!(d.bands[0].faces.len(), 86);
    }

    #[test]
    fn stacked_bands() {
        for rings in [1, 2, 3] {
            let m = crate::glue::stacked_prism(43, rings).unwrap();
            let d = band_decomposition(&m).unwrap();
            assert_eq!(d.band_count(), rings);
            assert!(d.bands.iter().all(|b| b.kind == BandKind::Square && b.faces.len() == 43));
        }
    }

    #[test]
    fn curvature_sums() {
        let p = prism(43).unwrap();
        let big: Vec<_> = (0..p.face_count()).filter(|&f| p.face_degree(f) == 43).collect();
        for f in big {
            assert_eq!(large_face_curvature_sum(&p, f).unwrap(), int(1));
        }
        let a = antiprism(50).unwrap();
        let f = (0..a.face_count()).find(|&f| a.face_degree(f) == 50).unwrap();
        assert_eq!(large_face_curvature_sum(&a, f).unwrap(), int(1));
        let g = grid_example(20, 1).unwrap();
        let f = (0..g.face_count()).find(|&f| g.face_degree(f) == 46).unwrap();
        assert!(large_face_curvature_sum(&g, f).unwrap() >= int(1));
        assert!(large_face_curvature_sum(&p, (0..p.face_count()).find(|&f| p.face_degree(f) == 4).unwrap()).is_err());
    }

    #[test]
    fn touching_big_faces() {
        // C_43: both faces are 43-gons on the same vertices
        let n = 43u64;
        let rot: Vec<(u64, Vec<u64>)> = (0..n).map(|i| (i, vec![(i + 1) % n, (i + n - 1) % n])).collect();
        let c = PlanarMap::from_rotation_system(rot).unwrap();
        let e = band_decomposition(&c).unwrap_err();
        assert!(matches!(e, Error::NotPrismlikeStructure(_)), "{e:?}");
    }
}
