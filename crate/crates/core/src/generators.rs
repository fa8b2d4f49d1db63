//! Constructors for the named graph families.
//!
//! Labelling is canonical per family and documented on each constructor.
//! Rotations are counter-clockwise in a planar drawing where the first ring
//! of vertices is drawn outside the second.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::planar_map::{FaceId, Patch, PlanarMap, Surface};

fn build(rot: Vec<(u64, Vec<u64>)>) -> PlanarMap {
    PlanarMap::from_rotation_system(rot).expect("generator rotation systems are spherical")
}

fn need(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidArgument(msg()))
    }
}

/// The cycle `C_n`: two `n`-gonal faces sharing every vertex. Only useful as
/// a patch (e.g. the lone big face glued onto a band).
pub fn cycle(n: usize) -> Result<PlanarMap> {
    need(n >= 3, || format!("cycle needs n >= 3, got {n}"))?;
    let n = n as u64;
    Ok(build((0..n).map(|i| (i, vec![(i + 1) % n, (i + n - 1) % n])).collect()))
}

/// Prism over an `n`-gon: vertices `0..n` on one `n`-gon, `n..2n` on the
/// other, `i` joined to `n + i`.
pub fn prism(n: usize) -> Result<PlanarMap> {
    need(n >= 3, || format!("prism needs n >= 3, got {n}"))?;
    let n = n as u64;
    let mut rot = Vec::new();
    for i in 0..n {
        let (next, prev) = ((i + 1) % n, (i + n - 1) % n);
        rot.push((i, vec![next, n + i, prev]));
        rot.push((n + i, vec![i, n + next, n + prev]));
    }
    Ok(build(rot))
}

/// Antiprism over an `n`-gon: vertices `0..n` and `n..2n`, vertex `n + i`
/// sitting between `i` and `i + 1`.
pub fn antiprism(n: usize) -> Result<PlanarMap> {
    need(n >= 3, || format!("antiprism needs n >= 3, got {n}"))?;
    let n = n as u64;
    let mut rot = Vec::new();
    for i in 0..n {
        let (next, prev) = ((i + 1) % n, (i + n - 1) % n);
        rot.push((i, vec![next, n + i, n + prev, prev]));
        rot.push((n + i, vec![next, n + next, n + prev, i]));
    }
    Ok(build(rot))
}

/// Adds a vertex labelled `apex` inside face `f`, joined to every vertex of
/// the face.
pub fn cap_face(m: &PlanarMap, f: FaceId, apex: u64) -> Result<PlanarMap> {
    need(m.vertex(apex).is_err(), || format!("label {apex} already used"))?;
    need(m.face_is_simple_cycle(f), || format!("face {f} is not a simple cycle"))?;
    let mut rot: HashMap<u64, Vec<u64>> = m.to_rotation_system().into_iter().collect();
    let walk: Vec<u64> = m.face_vertices(f).into_iter().map(|v| m.label(v)).collect();
    let k = walk.len();
    for i in 0..k {
        let (prev, x) = (walk[(i + k - 1) % k], walk[i]);
        let list = rot.get_mut(&x).unwrap();
        let pos = list.iter().position(|&y| y == prev).unwrap();
        list.insert(pos + 1, apex);
    }
    rot.insert(apex, walk.iter().rev().copied().collect());
    Ok(build(rot.into_iter().collect()))
}

/// Cuts every vertex off: the vertex for dart `d` is labelled `d`.
pub fn truncate(m: &PlanarMap) -> PlanarMap {
    let rot = (0..m.dart_count())
        .map(|d| {
            (d as u64, vec![m.reverse(d) as u64, m.rot_next(d) as u64, m.rot_prev(d) as u64])
        })
        .collect();
    build(rot)
}

/// Dual map; the vertex for face `f` is labelled `f`.
pub fn dual(m: &PlanarMap) -> PlanarMap {
    let rot = (0..m.face_count())
        .map(|f| {
            let nbs = m.face_darts(f).iter().map(|&d| m.face(m.reverse(d)) as u64).collect();
            (f as u64, nbs)
        })
        .collect();
    build(rot)
}

fn faces_of_degree(m: &PlanarMap, k: usize) -> Vec<FaceId> {
    (0..m.face_count()).filter(|&f| m.face_degree(f) == k).collect()
}

fn icosahedron() -> PlanarMap {
    let base = antiprism(5).unwrap();
    let pent = faces_of_degree(&base, 5);
    let once = cap_face(&base, pent[0], 10).unwrap();
    let pent = faces_of_degree(&once, 5);
    cap_face(&once, pent[0], 11).unwrap()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Platonic {
    Tetrahedron,
    Cube,
    Octahedron,
    Dodecahedron,
    Icosahedron,
}

impl Platonic {
    pub const ALL: [Platonic; 5] = [
        Platonic::Tetrahedron,
        Platonic::Cube,
        Platonic::Octahedron,
        Platonic::Dodecahedron,
        Platonic::Icosahedron,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Platonic::Tetrahedron => "tetrahedron",
            Platonic::Cube => "cube",
            Platonic::Octahedron => "octahedron",
            Platonic::Dodecahedron => "dodecahedron",
            Platonic::Icosahedron => "icosahedron",
        }
    }
}

impl std::str::FromStr for Platonic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Platonic::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown platonic solid {s:?}")))
    }
}

/// The five Platonic solids. The cube is `prism(4)`, the octahedron
/// `antiprism(3)`, the icosahedron an antiprism(5) capped on both pentagons,
/// the dodecahedron its dual.
pub fn platonic(which: Platonic) -> PlanarMap {
    match which {
        Platonic::Tetrahedron => {
            let tri = cycle(3).unwrap();
            cap_face(&tri, 0, 3).unwrap()
        }
        Platonic::Cube => prism(4).unwrap(),
        Platonic::Octahedron => antiprism(3).unwrap(),
        Platonic::Icosahedron => icosahedron(),
        Platonic::Dodecahedron => dual(&icosahedron()),
    }
}

pub fn platonic_by_name(name: &str) -> Result<PlanarMap> {
    Ok(platonic(name.parse()?))
}

/// Buckminsterfullerene, the truncated icosahedron.
pub fn fullerene_c60() -> PlanarMap {
    truncate(&icosahedron())
}

/// Counter-clockwise order of integer direction vectors, starting at the
/// positive x axis.
fn angular_cmp(a: (i64, i64), b: (i64, i64)) -> Ordering {
    let half = |(x, y): (i64, i64)| if y > 0 || (y == 0 && x > 0) { 0 } else { 1 };
    half(a).cmp(&half(b)).then_with(|| 0.cmp(&(a.0 * b.1 - a.1 * b.0)))
}

/// Rotation system of a straight-line drawing with integer coordinates.
fn from_drawing(points: &[(i64, i64)], edges: &[(usize, usize)]) -> PlanarMap {
    let mut nbs: Vec<Vec<usize>> = vec![Vec::new(); points.len()];
    for &(u, v) in edges {
        nbs[u].push(v);
        nbs[v].push(u);
    }
    let rot = nbs
        .into_iter()
        .enumerate()
        .map(|(u, mut list)| {
            let (px, py) = points[u];
            list.sort_by(|&a, &b| {
                angular_cmp((points[a].0 - px, points[a].1 - py), (points[b].0 - px, points[b].1 - py))
            });
            (u as u64, list.into_iter().map(|v| v as u64).collect())
        })
        .collect();
    build(rot)
}

fn grid_drawing(a: usize, b: usize) -> (Vec<(i64, i64)>, Vec<(usize, usize)>) {
    let (a, b) = (a as i64, b as i64);
    let corner = |x: i64, y: i64| (x == -1 || x == a + 1) && (y == -1 || y == b + 1);
    let mut points = Vec::new();
    let mut index = HashMap::new();
    for y in -1..=b + 1 {
        for x in -1..=a + 1 {
            if !corner(x, y) {
                index.insert((x, y), points.len());
                points.push((x, y));
            }
        }
    }
    // every unit-distance pair is an edge; the box corners are missing
    let mut edges = Vec::new();
    for &(x, y) in &points {
        for next in [(x + 1, y), (x, y + 1)] {
            if let Some(&v) = index.get(&next) {
                edges.push((index[&(x, y)], v));
            }
        }
    }
    for (p, q) in [((0, -1), (-1, 0)), ((a, -1), (a + 1, 0)), ((0, b + 1), (-1, b)), ((a, b + 1), (a + 1, b))] {
        edges.push((index[&p], index[&q]));
    }
    (points, edges)
}

/// A finite non-prism-like graph with one big face: an `a × b` grid of
/// squares, a square on each of the `2(a + b)` side cells, a triangle at each
/// corner, and a `2(a + b + 2)`-gon closing it off.
///
/// Vertices are labelled row by row over the bounding box `[-1, a+1] ×
/// [-1, b+1]` (corners of the box omitted), bottom row first.
pub fn grid_example(a: usize, b: usize) -> Result<PlanarMap> {
    need(a >= 1 && b >= 1, || format!("grid needs a, b >= 1, got {a}, {b}"))?;
    let (points, edges) = grid_drawing(a, b);
    Ok(from_drawing(&points, &edges))
}

/// [`grid_example`] with its big face marked as boundary.
pub fn grid_core(a: usize, b: usize) -> Result<Patch> {
    let m = grid_example(a, b)?;
    let big = faces_of_degree(&m, 2 * (a + b + 2));
    Patch::new(m, big)
}

/// A centre `n`-gon (vertices `0..n`) ringed by faces of the given sizes,
/// face `i` sitting on the edge `(i, i + 1)`; the unbounded face is the
/// boundary. Consecutive ring faces share a spoke edge, so a triangle's two
/// centre vertices share their outer neighbour. Outer vertices are labelled
/// from `n` upward in counter-clockwise order.
///
/// The last ring face must not be a triangle.
pub fn ring_patch(sizes: &[usize]) -> Result<Patch> {
    let n = sizes.len();
    need(n >= 3, || "ring needs at least three faces".into())?;
    need(sizes.iter().all(|&s| s >= 3), || "ring faces need degree >= 3".into())?;
    need(sizes[n - 1] >= 4, || "last ring face must not be a triangle".into())?;

    // outer vertex order, and the spoke target of every centre vertex
    let mut outer_count = 0u64;
    let mut spoke = vec![0u64; n];
    let mut extras: Vec<Vec<u64>> = vec![Vec::new(); n];
    spoke[0] = 0;
    outer_count += 1;
    for i in 0..n {
        if sizes[i] == 3 {
            spoke[i + 1] = spoke[i];
            continue;
        }
        for _ in 0..sizes[i] - 4 {
            extras[i].push(outer_count);
            outer_count += 1;
        }
        if i + 1 < n {
            spoke[i + 1] = outer_count;
            outer_count += 1;
        }
    }
    let base = n as u64;
    let ring = outer_count;
    let outer = |j: u64| base + (j % ring);
    let mut inward: Vec<Vec<u64>> = vec![Vec::new(); ring as usize];
    for (i, &s) in spoke.iter().enumerate() {
        inward[s as usize].push(i as u64);
    }
    let mut rot = Vec::new();
    let nn = n as u64;
    for i in 0..nn {
        rot.push((i, vec![outer(spoke[i as usize]), (i + 1) % nn, (i + nn - 1) % nn]));
    }
    for j in 0..ring {
        let mut list = vec![outer(j + 1)];
        list.extend(inward[j as usize].iter().rev());
        list.push(outer(j + ring - 1));
        rot.push((base + j, list));
    }
    let m = build(rot);
    let d = m.dart(base, base + 1 % ring)?;
    let f = m.face(d);
    Patch::new(m, vec![f])
}

/// A band between an inner ring `0..P` and an outer ring `P..P+Q`. Face `i`
/// covers `p_i` inner edges and `q_i` outer edges between two consecutive
/// spokes, so it has degree `p_i + q_i + 2` (spokes sharing an endpoint
/// count once). Both rings are boundary faces, inner first.
///
/// `(1, 1)` repeated gives a square band, `(1, 0), (0, 1)` repeated a
/// triangle band.
pub fn band_annulus(faces: &[(usize, usize)]) -> Result<Patch> {
    let n = faces.len();
    need(n >= 1, || "band needs a face".into())?;
    need(faces.iter().all(|&(p, q)| p + q >= 1), || "band face needs p + q >= 1".into())?;
    let p_total: usize = faces.iter().map(|f| f.0).sum();
    let q_total: usize = faces.iter().map(|f| f.1).sum();
    need(p_total >= 3 && q_total >= 3, || "band rings need length >= 3".into())?;

    // spoke k joins inner alpha[k] to outer beta[k]
    let mut alpha = vec![0usize; n];
    let mut beta = vec![0usize; n];
    for k in 1..n {
        alpha[k] = alpha[k - 1] + faces[k - 1].0;
        beta[k] = beta[k - 1] + faces[k - 1].1;
    }
    let mut inner_spokes: Vec<Vec<usize>> = vec![Vec::new(); p_total];
    let mut outer_spokes: Vec<Vec<usize>> = vec![Vec::new(); q_total];
    for k in 0..n {
        alpha[k] %= p_total;
        beta[k] %= q_total;
        inner_spokes[alpha[k]].push(k);
        outer_spokes[beta[k]].push(k);
    }
    // Spokes at a vertex form a cyclic interval of k; start it after its gap.
    let cyclic_order = |mut ks: Vec<usize>| {
        if let Some(start) = ks.iter().position(|&k| !ks.contains(&((k + n - 1) % n))) {
            ks.rotate_left(start);
        }
        ks
    };
    let (pp, qq) = (p_total as u64, q_total as u64);
    let mut rot = Vec::new();
    for (i, ks) in inner_spokes.into_iter().enumerate() {
        let i = i as u64;
        let mut list = vec![(i + 1) % pp, (i + pp - 1) % pp];
        list.extend(cyclic_order(ks).into_iter().map(|k| pp + beta[k] as u64));
        rot.push((i, list));
    }
    for (j, ks) in outer_spokes.into_iter().enumerate() {
        let j = j as u64;
        let mut list = vec![pp + (j + 1) % qq];
        list.extend(cyclic_order(ks).into_iter().rev().map(|k| alpha[k] as u64));
        list.push(pp + (j + qq - 1) % qq);
        rot.push((pp + j, list));
    }
    let m = PlanarMap::from_rotation_system(rot)
        .map_err(|e| Error::InvalidArgument(format!("band does not embed: {e}")))?;
    let inner = m.face(m.dart(1 % pp, 0)?);
    let outer = m.face(m.dart(pp, pp + 1 % qq)?);
    need(inner != outer, || "band rings coincide".into())?;
    Patch::new(m, vec![inner, outer])
}

/// Half an antiprism: an `n`-gon on `0..n` with a triangle on each edge,
/// apex `n + i` over edge `(i, i + 1)`. The boundary is the zigzag
/// `0, n, 1, n + 1, ...`.
pub fn antiprism_half(n: usize) -> Result<Patch> {
    need(n >= 3, || format!("antiprism half needs n >= 3, got {n}"))?;
    let n = n as u64;
    let mut rot = Vec::new();
    for i in 0..n {
        let (next, prev) = ((i + 1) % n, (i + n - 1) % n);
        rot.push((i, vec![next, prev, n + prev, n + i]));
        rot.push((n + i, vec![i, next]));
    }
    let m = build(rot);
    let f = m.face(m.dart(0, n)?);
    Patch::new(m, vec![f])
}

/// The cycle `C_n` as a patch: the other face becomes a real `n`-gon once
/// glued onto something.
pub fn lone_face(n: usize) -> Result<Patch> {
    let m = cycle(n)?;
    let f = m.face(m.dart(0, 1)?);
    Patch::new(m, vec![f])
}

/// Replaces every hexagonal face (boundary faces excepted) by six triangles
/// around a new centre vertex. Old vertices keep their labels; centres are
/// labelled upward from the largest old label, in face order.
pub fn subdivide_hexagons(m: &PlanarMap) -> PlanarMap {
    subdivide_faces(m, &[])
}

/// [`subdivide_hexagons`] on a patch, leaving boundary faces alone.
pub fn subdivide_patch_hexagons(p: &Patch) -> Patch {
    let darts = p.boundary_darts();
    let m = subdivide_faces(p.map(), p.boundary_faces());
    Patch::from_darts(m, &darts).expect("boundary faces survive subdivision")
}

fn subdivide_faces(m: &PlanarMap, keep: &[FaceId]) -> PlanarMap {
    // Identify hexagons by one dart each; face ids shift as faces are capped.
    let marks: Vec<(u64, u64)> = (0..m.face_count())
        .filter(|&f| m.face_degree(f) == 6 && !keep.contains(&f))
        .map(|f| {
            let d = m.face_darts(f)[0];
            (m.label(m.origin(d)), m.label(m.target(d)))
        })
        .collect();
    let mut out = m.clone();
    let mut next = m.max_label() + 1;
    for (u, v) in marks {
        let f = out.face(out.dart(u, v).unwrap());
        out = cap_face(&out, f, next).unwrap();
        next += 1;
    }
    out
}
