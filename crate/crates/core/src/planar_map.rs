//! Combinatorial maps given by rotation systems.
//!
//! A [`PlanarMap`] stores every undirected edge as two darts. Each vertex
//! owns the cyclic sequence of its outgoing darts; faces are never stored by
//! the caller but traced from the rotations: the face successor of the dart
//! `(u, v)` is `(v, w)` where `w` immediately follows `u` in the rotation at
//! `v`.
//!
//! Vertices carry arbitrary `u64` labels taken from the input. Internally
//! they are numbered `0..n` in ascending label order, which fixes a
//! deterministic dart and face numbering for a given input.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};

pub type DartId = usize;
pub type FaceId = usize;

#[derive(Clone, Debug)]
pub struct PlanarMap {
    labels: Vec<u64>,
    index: HashMap<u64, usize>,
    rotation: Vec<Vec<DartId>>,
    origin: Vec<usize>,
    target: Vec<usize>,
    reverse: Vec<DartId>,
    rot_pos: Vec<usize>,
    faces: Vec<Vec<DartId>>,
    face_of: Vec<FaceId>,
}

impl PlanarMap {
    /// Builds a map from per-vertex cyclic neighbour lists.
    ///
    /// Neighbour lists must be symmetric and free of loops and repeated
    /// neighbours. The traced embedding must be spherical (`V - E + F = 2`),
    /// which also rules out disconnected input.
    pub fn from_rotation_system<I>(rotations: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, Vec<u64>)>,
    {
        let mut lists: Vec<(u64, Vec<u64>)> = rotations.into_iter().collect();
        lists.sort_by_key(|(label, _)| *label);
        for pair in lists.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::MalformedInput(format!(
                    "vertex {} listed twice",
                    pair[0].0
                )));
            }
        }
        let labels: Vec<u64> = lists.iter().map(|(l, _)| *l).collect();
        let index: HashMap<u64, usize> =
            labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();

        let mut rotation = Vec::with_capacity(lists.len());
        let mut origin = Vec::new();
        let mut target = Vec::new();
        let mut rot_pos = Vec::new();
        let mut by_pair: HashMap<(usize, usize), DartId> = HashMap::new();
        for (u, (label, neighbours)) in lists.iter().enumerate() {
            let mut darts = Vec::with_capacity(neighbours.len());
            for (pos, nb) in neighbours.iter().enumerate() {
                let v = *index.get(nb).ok_or_else(|| {
                    Error::MalformedInput(format!("vertex {label} lists unknown neighbour {nb}"))
                })?;
                if v == u {
                    return Err(Error::MalformedInput(format!("self-loop at vertex {label}")));
                }
                let d = origin.len();
                if by_pair.insert((u, v), d).is_some() {
                    return Err(Error::MalformedInput(format!(
                        "vertex {label} lists neighbour {nb} twice"
                    )));
                }
                origin.push(u);
                target.push(v);
                rot_pos.push(pos);
                darts.push(d);
            }
            rotation.push(darts);
        }

        let mut reverse = vec![0; origin.len()];
        for d in 0..origin.len() {
            match by_pair.get(&(target[d], origin[d])) {
                Some(&r) => reverse[d] = r,
                None => {
                    return Err(Error::MalformedInput(format!(
                        "asymmetric adjacency: {} lists {} but not conversely",
                        labels[origin[d]], labels[target[d]]
                    )))
                }
            }
        }

        let mut map = PlanarMap {
            labels,
            index,
            rotation,
            origin,
            target,
            reverse,
            rot_pos,
            faces: Vec::new(),
            face_of: Vec::new(),
        };
        map.trace_faces();
        let chi = map.euler_characteristic();
        if chi != 2 {
            return Err(Error::NonSphericalEmbedding(chi));
        }
        Ok(map)
    }

    fn trace_faces(&mut self) {
        let n = self.origin.len();
        let mut face_of = vec![usize::MAX; n];
        let mut faces = Vec::new();
        for start in 0..n {
            if face_of[start] != usize::MAX {
                continue;
            }
            let id = faces.len();
            let mut walk = Vec::new();
            let mut d = start;
            while face_of[d] == usize::MAX {
                face_of[d] = id;
                walk.push(d);
                d = self.face_next(d);
            }
            debug_assert_eq!(d, start, "face successor must be a permutation");
            faces.push(walk);
        }
        self.faces = faces;
        self.face_of = face_of;
    }

    /// Rotation lists in label form, vertices in ascending label order.
    pub fn to_rotation_system(&self) -> Vec<(u64, Vec<u64>)> {
        (0..self.vertex_count())
            .map(|v| {
                let nbs = self.rotation[v]
                    .iter()
                    .map(|&d| self.labels[self.target[d]])
                    .collect();
                (self.labels[v], nbs)
            })
            .collect()
    }

    /// The same graph with every rotation reversed: the mirror embedding.
    pub fn mirrored(&self) -> PlanarMap {
        let rotations = self.to_rotation_system().into_iter().map(|(l, mut nbs)| {
            nbs.reverse();
            (l, nbs)
        });
        PlanarMap::from_rotation_system(rotations).expect("mirror of a valid map is valid")
    }

    // ----- sizes ---------------------------------------------------------

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.origin.len() / 2
    }

    pub fn dart_count(&self) -> usize {
        self.origin.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64
    }

    // ----- vertices ------------------------------------------------------

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> u64 {
        self.labels[v]
    }

    pub fn max_label(&self) -> u64 {
        self.labels.last().copied().unwrap_or(0)
    }

    /// Internal index of the vertex with the given label.
    pub fn vertex(&self, label: u64) -> Result<usize> {
        self.index
            .get(&label)
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("unknown vertex id {label}")))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    /// Outgoing darts of `v` in rotation order.
    pub fn darts_at(&self, v: usize) -> &[DartId] {
        &self.rotation[v]
    }

    /// Neighbours of `v` in rotation order.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.rotation[v].iter().map(move |&d| self.target[d])
    }

    /// Faces at the corners of `v`, one per outgoing dart, in rotation order.
    pub fn corner_faces(&self, v: usize) -> impl Iterator<Item = FaceId> + '_ {
        self.rotation[v].iter().map(move |&d| self.face_of[d])
    }

    // ----- darts ---------------------------------------------------------

    pub fn origin(&self, d: DartId) -> usize {
        self.origin[d]
    }

    pub fn target(&self, d: DartId) -> usize {
        self.target[d]
    }

    pub fn reverse(&self, d: DartId) -> DartId {
        self.reverse[d]
    }

    /// Next dart counter-clockwise around the origin of `d`.
    pub fn rot_next(&self, d: DartId) -> DartId {
        let rot = &self.rotation[self.origin[d]];
        rot[(self.rot_pos[d] + 1) % rot.len()]
    }

    pub fn rot_prev(&self, d: DartId) -> DartId {
        let rot = &self.rotation[self.origin[d]];
        rot[(self.rot_pos[d] + rot.len() - 1) % rot.len()]
    }

    /// Successor of `d` in its face walk.
    pub fn face_next(&self, d: DartId) -> DartId {
        self.rot_next(self.reverse[d])
    }

    pub fn face(&self, d: DartId) -> FaceId {
        self.face_of[d]
    }

    pub fn dart_between(&self, u: usize, v: usize) -> Option<DartId> {
        self.rotation[u].iter().copied().find(|&d| self.target[d] == v)
    }

    /// Dart between two labelled vertices.
    pub fn dart(&self, u: u64, v: u64) -> Result<DartId> {
        let (a, b) = (self.vertex(u)?, self.vertex(v)?);
        self.dart_between(a, b)
            .ok_or_else(|| Error::InvalidArgument(format!("no edge between {u} and {v}")))
    }

    // ----- faces ---------------------------------------------------------

    pub fn face_darts(&self, f: FaceId) -> &[DartId] {
        &self.faces[f]
    }

    pub fn face_degree(&self, f: FaceId) -> usize {
        self.faces[f].len()
    }

    /// Vertices of `f` in walk order.
    pub fn face_vertices(&self, f: FaceId) -> Vec<usize> {
        self.faces[f].iter().map(|&d| self.origin[d]).collect()
    }

    /// True iff the walk of `f` visits no vertex twice.
    pub fn face_is_simple_cycle(&self, f: FaceId) -> bool {
        let mut seen = HashSet::new();
        self.faces[f].iter().all(|&d| seen.insert(self.origin[d]))
    }

    /// Largest face degree, `D_G`.
    pub fn max_face_degree(&self) -> usize {
        self.faces.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Face walks as label cycles, each rotated to start at its smallest
    /// label (walk direction kept), sorted lexicographically.
    pub fn normalized_faces(&self) -> Vec<Vec<u64>> {
        let mut out: Vec<Vec<u64>> = (0..self.face_count())
            .map(|f| normalize_cycle(self.face_vertices(f).iter().map(|&v| self.labels[v])))
            .collect();
        out.sort();
        out
    }

    /// Unordered pairs of faces sharing at least one edge, each listed once.
    pub fn dual_adjacency(&self) -> Vec<(FaceId, FaceId)> {
        let mut pairs: Vec<(FaceId, FaceId)> = (0..self.dart_count())
            .filter_map(|d| {
                let (f, g) = (self.face_of[d], self.face_of[self.reverse[d]]);
                (f < g).then_some((f, g))
            })
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        pairs
    }

    /// Per-vertex corner face degrees and per-face degrees.
    pub fn face_degrees(&self) -> FaceDegrees {
        FaceDegrees {
            by_vertex: (0..self.vertex_count())
                .map(|v| {
                    let degs = self.corner_faces(v).map(|f| self.face_degree(f)).collect();
                    (self.labels[v], degs)
                })
                .collect(),
            by_face: self.faces.iter().map(Vec::len).collect(),
        }
    }

    // ----- distances -----------------------------------------------------

    /// BFS edge distances from a set of source vertices (`None` if unreachable).
    pub fn distances_from(&self, sources: &[usize]) -> Vec<Option<usize>> {
        self.distances_within(sources, usize::MAX)
    }

    /// BFS distances, exploring no further than `limit` edges.
    pub fn distances_within(&self, sources: &[usize], limit: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            if du >= limit {
                continue;
            }
            for w in self.neighbors(u) {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Shortest-path edge count between two labelled vertices.
    pub fn graph_distance(&self, u: u64, v: u64) -> Result<usize> {
        let (a, b) = (self.vertex(u)?, self.vertex(v)?);
        Ok(self.distances_from(&[a])[b].expect("spherical maps are connected"))
    }
}

/// Output of [`PlanarMap::face_degrees`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceDegrees {
    /// `(vertex label, degrees of the faces at its corners in rotation order)`.
    pub by_vertex: Vec<(u64, Vec<usize>)>,
    pub by_face: Vec<usize>,
}

/// Rotates a cycle so that it starts at its minimum element.
pub fn normalize_cycle(cycle: impl IntoIterator<Item = u64>) -> Vec<u64> {
    let mut c: Vec<u64> = cycle.into_iter().collect();
    if let Some(pos) = c.iter().enumerate().min_by_key(|(_, &x)| x).map(|(i, _)| i) {
        c.rotate_left(pos);
    }
    c
}

/// A map together with its boundary faces, if any.
///
/// Closed maps have no boundary; a [`Patch`] marks one or more faces as
/// stand-ins for the unseen exterior of an infinite tessellation.
pub trait Surface {
    fn map(&self) -> &PlanarMap;

    fn boundary_faces(&self) -> &[FaceId];

    fn is_boundary_face(&self, f: FaceId) -> bool {
        self.boundary_faces().contains(&f)
    }

    /// A vertex is interior when none of its corners lies in a boundary face.
    fn is_interior(&self, v: usize) -> bool {
        !self.map().corner_faces(v).any(|f| self.is_boundary_face(f))
    }

    fn interior_vertices(&self) -> Vec<usize> {
        (0..self.map().vertex_count()).filter(|&v| self.is_interior(v)).collect()
    }

    /// Faces that are not boundary stand-ins.
    fn inner_faces(&self) -> Vec<FaceId> {
        (0..self.map().face_count()).filter(|&f| !self.is_boundary_face(f)).collect()
    }
}

impl Surface for PlanarMap {
    fn map(&self) -> &PlanarMap {
        self
    }

    fn boundary_faces(&self) -> &[FaceId] {
        &[]
    }

    fn is_interior(&self, _v: usize) -> bool {
        true
    }
}

/// A finite piece of a (possibly infinite) tessellation.
#[derive(Clone, Debug)]
pub struct Patch {
    map: PlanarMap,
    boundary: Vec<FaceId>,
    on_boundary: Vec<bool>,
}

impl Patch {
    /// Marks `boundary` faces of `map` as exterior. Each must be a simple
    /// cycle; the list must be non-empty and free of repeats.
    pub fn new(map: PlanarMap, boundary: Vec<FaceId>) -> Result<Self> {
        if boundary.is_empty() {
            return Err(Error::InvalidArgument("a patch needs a boundary face".into()));
        }
        let mut seen = HashSet::new();
        for &f in &boundary {
            if f >= map.face_count() {
                return Err(Error::InvalidArgument(format!("no face {f}")));
            }
            if !seen.insert(f) {
                return Err(Error::InvalidArgument(format!("boundary face {f} repeated")));
            }
            if !map.face_is_simple_cycle(f) {
                return Err(Error::MalformedInput(format!(
                    "boundary face {f} is not a simple cycle"
                )));
            }
        }
        let mut on_boundary = vec![false; map.vertex_count()];
        for &f in &boundary {
            for v in map.face_vertices(f) {
                on_boundary[v] = true;
            }
        }
        Ok(Patch { map, boundary, on_boundary })
    }

    /// Each boundary face is named by one labelled dart `(u, v)` on its walk.
    pub fn from_darts(map: PlanarMap, darts: &[(u64, u64)]) -> Result<Self> {
        let faces = darts
            .iter()
            .map(|&(u, v)| map.dart(u, v).map(|d| map.face(d)))
            .collect::<Result<Vec<_>>>()?;
        Patch::new(map, faces)
    }

    pub fn boundary_vertices(&self) -> Vec<u64> {
        (0..self.map.vertex_count())
            .filter(|&v| self.on_boundary[v])
            .map(|v| self.map.label(v))
            .collect()
    }

    /// One labelled dart per boundary face, as written by the text format.
    pub fn boundary_darts(&self) -> Vec<(u64, u64)> {
        self.boundary
            .iter()
            .map(|&f| {
                let d = self.map.face_darts(f)[0];
                (self.map.label(self.map.origin(d)), self.map.label(self.map.target(d)))
            })
            .collect()
    }

    /// Mirror image; each boundary face keeps its vertices, walked backwards.
    pub fn mirrored(&self) -> Patch {
        let darts: Vec<(u64, u64)> = self.boundary_darts().into_iter().map(|(u, v)| (v, u)).collect();
        Patch::from_darts(self.map.mirrored(), &darts).expect("mirroring keeps boundary faces")
    }

    pub fn into_map(self) -> PlanarMap {
        self.map
    }
}

impl Surface for Patch {
    fn map(&self) -> &PlanarMap {
        &self.map
    }

    fn boundary_faces(&self) -> &[FaceId] {
        &self.boundary
    }

    fn is_interior(&self, v: usize) -> bool {
        !self.on_boundary[v]
    }
}

/// Either a closed map or a patch, as read from a file.
#[derive(Clone, Debug)]
pub enum AnySurface {
    Closed(PlanarMap),
    Patch(Patch),
}

impl AnySurface {
    pub fn from_parts(map: PlanarMap, outer: &[(u64, u64)]) -> Result<Self> {
        if outer.is_empty() {
            Ok(AnySurface::Closed(map))
        } else {
            Patch::from_darts(map, outer).map(AnySurface::Patch)
        }
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, AnySurface::Closed(_))
    }

    pub fn boundary_darts(&self) -> Vec<(u64, u64)> {
        match self {
            AnySurface::Closed(_) => Vec::new(),
            AnySurface::Patch(p) => p.boundary_darts(),
        }
    }
}

impl Surface for AnySurface {
    fn map(&self) -> &PlanarMap {
        match self {
            AnySurface::Closed(m) => m,
            AnySurface::Patch(p) => p.map(),
        }
    }

    fn boundary_faces(&self) -> &[FaceId] {
        match self {
            AnySurface::Closed(_) => &[],
            AnySurface::Patch(p) => p.boundary_faces(),
        }
    }

    fn is_interior(&self, v: usize) -> bool {
        match self {
            AnySurface::Closed(_) => true,
            AnySurface::Patch(p) => p.is_interior(v),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetrahedron() -> PlanarMap {
        PlanarMap::from_rotation_system([
            (0, vec![1, 2, 3]),
            (1, vec![0, 3, 2]),
            (2, vec![0, 1, 3]),
            (3, vec![0, 2, 1]),
        ])
        .unwrap()
    }

    fn cube() -> PlanarMap {
        // Top square 0..4 drawn outside, bottom 4..8 inside, counter-clockwise.
        let mut rot = Vec::new();
        for i in 0..4u64 {
            rot.push((i, vec![(i + 1) % 4, 4 + i, (i + 3) % 4]));
            rot.push((4 + i, vec![i, 4 + (i + 1) % 4, 4 + (i + 3) % 4]));
        }
        PlanarMap::from_rotation_system(rot).unwrap()
    }

    #[test]
    fn tetrahedron_counts() {
        let m = tetrahedron();
        assert_eq!((m.vertex_count(), m.edge_count(), m.face_count()), (4, 6, 4));
        assert_eq!(m.euler_characteristic(), 2);
        assert!((0..4).all(|f| m.face_degree(f) == 3));
    }

    #[test]
    fn cube_faces_are_squares() {
        let m = cube();
        assert_eq!(m.face_count(), 6);
        assert!((0..6).all(|f| m.face_degree(f) == 4));
        let adj = m.dual_adjacency();
        for f in 0..6 {
            assert_eq!(adj.iter().filter(|&&(a, b)| a == f || b == f).count(), 4);
        }
    }

    #[test]
    fn cube_antipodal_distance() {
        let m = cube();
        // 0 is on the outer square, 6 is the inner vertex opposite to it.
        assert_eq!(m.graph_distance(0, 6).unwrap(), 3);
        assert_eq!(m.graph_distance(0, 0).unwrap(), 0);
        assert!(matches!(m.graph_distance(0, 99), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn k3_builds_with_two_faces() {
        let m = PlanarMap::from_rotation_system([(0, vec![1, 2]), (1, vec![2, 0]), (2, vec![0, 1])])
            .unwrap();
        assert_eq!(m.face_count(), 2);
        let faces = m.normalized_faces();
        let mut a = faces[0].clone();
        let mut b = faces[1].clone();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_malformed_input() {
        let asym = PlanarMap::from_rotation_system([(0, vec![1]), (1, vec![])]);
        assert!(matches!(asym, Err(Error::MalformedInput(_))));
        let lp = PlanarMap::from_rotation_system([(0, vec![0])]);
        assert!(matches!(lp, Err(Error::MalformedInput(_))));
        let dup = PlanarMap::from_rotation_system([(0, vec![1, 1]), (1, vec![0])]);
        assert!(matches!(dup, Err(Error::MalformedInput(_))));
        let twice = PlanarMap::from_rotation_system([(0, vec![1]), (0, vec![1]), (1, vec![0])]);
        assert!(matches!(twice, Err(Error::MalformedInput(_))));
        let unknown = PlanarMap::from_rotation_system([(0, vec![7])]);
        assert!(matches!(unknown, Err(Error::MalformedInput(_))));
    }

    #[test]
    fn rejects_toroidal_rotation() {
        // K4 with one rotation flipped embeds on the torus.
        let m = PlanarMap::from_rotation_system([
            (0, vec![1, 2, 3]),
            (1, vec![0, 2, 3]),
            (2, vec![0, 1, 3]),
            (3, vec![0, 2, 1]),
        ]);
        assert!(matches!(m, Err(Error::NonSphericalEmbedding(chi)) if chi != 2));
    }

    #[test]
    fn rejects_disconnected() {
        let tri = |o: u64| {
            vec![(o, vec![o + 1, o + 2]), (o + 1, vec![o + 2, o]), (o + 2, vec![o, o + 1])]
        };
        let mut rot = tri(0);
        rot.extend(tri(10));
        assert!(matches!(
            PlanarMap::from_rotation_system(rot),
            Err(Error::NonSphericalEmbedding(4))
        ));
    }

    #[test]
    fn face_walk_partitions_darts() {
        let m = cube();
        let total: usize = (0..m.face_count()).map(|f| m.face_degree(f)).sum();
        assert_eq!(total, m.dart_count());
        for d in 0..m.dart_count() {
            assert_eq!(m.reverse(m.reverse(d)), d);
            assert_eq!(m.origin(m.reverse(d)), m.target(d));
            assert_eq!(m.face(m.face_next(d)), m.face(d));
        }
    }

    #[test]
    fn mirror_reverses_face_walks() {
        let m = cube();
        let mm = m.mirrored();
        assert_eq!(mm.face_count(), 6);
        let mut rev: Vec<Vec<u64>> = m
            .normalized_faces()
            .into_iter()
            .map(|mut c| {
                c.reverse();
                normalize_cycle(c)
            })
            .collect();
        rev.sort();
        assert_eq!(rev, mm.normalized_faces());
    }

    #[test]
    fn patch_boundary() {
        let m = cube();
        let p = Patch::from_darts(m, &[(0, 1)]).unwrap();
        assert_eq!(p.boundary_faces().len(), 1);
        assert_eq!(p.boundary_vertices().len(), 4);
        assert_eq!(p.interior_vertices().len(), 4);
    }
}
