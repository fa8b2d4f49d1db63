//! Cellular automorphisms as dart permutations, found by propagating one
//! flag, and the checks built on the group.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::curvature::curvature_profile;
use crate::error::{Error, Result};
use crate::planar_map::{DartId, FaceId, PlanarMap, Surface};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CellularAutomorphism {
    /// Image of each dart.
    pub darts: Vec<DartId>,
    pub reversing: bool,
}

impl CellularAutomorphism {
    pub fn identity(m: &PlanarMap) -> Self {
        CellularAutomorphism { darts: (0..m.dart_count()).collect(), reversing: false }
    }

    pub fn is_identity(&self) -> bool {
        !self.reversing && self.darts.iter().enumerate().all(|(i, &d)| i == d)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        CellularAutomorphism {
            darts: other.darts.iter().map(|&d| self.darts[d]).collect(),
            reversing: self.reversing != other.reversing,
        }
    }

    pub fn inverse(&self) -> Self {
        let mut darts = vec![0; self.darts.len()];
        for (i, &d) in self.darts.iter().enumerate() {
            darts[d] = i;
        }
        CellularAutomorphism { darts, reversing: self.reversing }
    }

    /// Vertex permutation by internal index.
    pub fn vertex_map(&self, m: &PlanarMap) -> Vec<usize> {
        (0..m.vertex_count()).map(|v| m.origin(self.darts[m.darts_at(v)[0]])).collect()
    }

    /// Face permutation. A reversing map sends the face left of a dart to the
    /// face left of the reversed image.
    pub fn face_map(&self, m: &PlanarMap) -> Vec<FaceId> {
        (0..m.face_count())
            .map(|f| {
                let img = self.darts[m.face_darts(f)[0]];
                if self.reversing {
                    m.face(m.reverse(img))
                } else {
                    m.face(img)
                }
            })
            .collect()
    }

    /// Edge permutation; an edge is named by its smaller dart.
    pub fn edge_map(&self, m: &PlanarMap) -> HashMap<DartId, DartId> {
        (0..m.dart_count())
            .filter(|&d| d < m.reverse(d))
            .map(|d| {
                let img = self.darts[d];
                (d, img.min(m.reverse(img)))
            })
            .collect()
    }
}

/// Extends `d0 -> d1` along rotations and reversals from map `a` to map `b`.
/// `None` when the extension is inconsistent or not a bijection.
fn propagate(a: &PlanarMap, b: &PlanarMap, d0: DartId, d1: DartId, reversing: bool) -> Option<Vec<DartId>> {
    if a.dart_count() != b.dart_count() {
        return None;
    }
    let n = a.dart_count();
    let mut img = vec![usize::MAX; n];
    let mut used = vec![false; n];
    img[d0] = d1;
    used[d1] = true;
    let mut stack = vec![d0];
    while let Some(x) = stack.pop() {
        let y = img[x];
        let step = |bx: DartId| if reversing { b.rot_prev(bx) } else { b.rot_next(bx) };
        for (nx, ny) in [(a.reverse(x), b.reverse(y)), (a.rot_next(x), step(y))] {
            if img[nx] == usize::MAX {
                if used[ny] {
                    return None;
                }
                img[nx] = ny;
                used[ny] = true;
                stack.push(nx);
            } else if img[nx] != ny {
                return None;
            }
        }
    }
    img.iter().all(|&d| d != usize::MAX).then_some(img)
}

fn signature(m: &PlanarMap, d: DartId) -> (usize, usize, usize, usize) {
    let (f, g) = (m.face_degree(m.face(d)), m.face_degree(m.face(m.reverse(d))));
    (m.degree(m.origin(d)), m.degree(m.target(d)), f.min(g), f.max(g))
}

/// A dart whose signature is rarest, to keep the candidate list short.
fn base_dart(m: &PlanarMap) -> DartId {
    let mut counts: HashMap<_, usize> = HashMap::new();
    for d in 0..m.dart_count() {
        *counts.entry(signature(m, d)).or_default() += 1;
    }
    (0..m.dart_count()).min_by_key(|&d| (counts[&signature(m, d)], d)).unwrap()
}

fn matches(a: &PlanarMap, b: &PlanarMap, allow_reversing: bool) -> Vec<CellularAutomorphism> {
    if a.dart_count() == 0 {
        return Vec::new();
    }
    let d0 = base_dart(a);
    let sig = signature(a, d0);
    let orientations: &[bool] = if allow_reversing { &[false, true] } else { &[false] };
    let candidates: Vec<(DartId, bool)> = (0..b.dart_count())
        .filter(|&d| signature(b, d) == sig)
        .flat_map(|d| orientations.iter().map(move |&r| (d, r)))
        .collect();
    candidates
        .into_par_iter()
        .filter_map(|(d, r)| propagate(a, b, d0, d, r).map(|darts| CellularAutomorphism { darts, reversing: r }))
        .collect()
}

#[derive(Clone, Debug)]
pub struct AutGroup {
    pub elements: Vec<CellularAutomorphism>,
}

impl AutGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn preserving_count(&self) -> usize {
        self.elements.iter().filter(|e| !e.reversing).count()
    }

    /// Identity present, closed under composition and inverses.
    pub fn is_group(&self) -> bool {
        let set: HashSet<&CellularAutomorphism> = self.elements.iter().collect();
        if set.len() != self.elements.len() || !self.elements.iter().any(|e| e.is_identity()) {
            return false;
        }
        self.elements.par_iter().all(|a| {
            set.contains(&a.inverse()) && self.elements.iter().all(|b| set.contains(&a.compose(b)))
        })
    }
}

/// Every cellular automorphism, orientation reversing ones included.
pub fn cellular_automorphisms(m: &PlanarMap) -> AutGroup {
    let mut elements = matches(m, m, true);
    elements.sort_by_key(|e| (e.reversing, e.darts.clone()));
    AutGroup { elements }
}

/// An isomorphism of embedded maps (possibly reversing orientation), as a
/// dart bijection from `a` to `b`.
pub fn find_isomorphism(a: &PlanarMap, b: &PlanarMap) -> Option<CellularAutomorphism> {
    if a.vertex_count() != b.vertex_count() || a.face_count() != b.face_count() {
        return None;
    }
    matches(a, b, true).into_iter().min_by_key(|e| e.reversing)
}

/// Isomorphism of surfaces that also matches boundary faces with boundary
/// faces.
pub fn surfaces_isomorphic<S: Surface + ?Sized, T: Surface + ?Sized>(a: &S, b: &T) -> bool {
    let (ma, mb) = (a.map(), b.map());
    if ma.vertex_count() != mb.vertex_count() || a.boundary_faces().len() != b.boundary_faces().len() {
        return false;
    }
    matches(ma, mb, true).into_iter().any(|iso| {
        a.boundary_faces().iter().all(|&f| {
            let img = iso.darts[ma.face_darts(f)[0]];
            let g = if iso.reversing { mb.face(mb.reverse(img)) } else { mb.face(img) };
            b.is_boundary_face(g)
        })
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Restriction {
    pub t_g: Vec<u64>,
    pub image_order: usize,
    pub kernel_order: usize,
    /// Indices into the group's elements.
    #[serde(skip)]
    pub kernel: Vec<usize>,
}

fn t_g_indices(m: &PlanarMap) -> Result<Vec<usize>> {
    let profile = curvature_profile(m);
    profile.require_nonnegative()?;
    if profile.t_g.is_empty() {
        return Err(Error::UndefinedForFlat);
    }
    Ok(profile.vertices.iter().filter(|e| profile.t_g.contains(&e.vertex)).map(|e| e.index).collect())
}

/// The restriction of each automorphism's vertex map to the positively
/// curved vertices: image and kernel sizes.
pub fn restrict_to_tg(m: &PlanarMap, group: &AutGroup) -> Result<Restriction> {
    let tg = t_g_indices(m)?;
    let mut image: HashSet<Vec<usize>> = HashSet::new();
    let mut kernel = Vec::new();
    for (i, h) in group.elements.iter().enumerate() {
        let vm = h.vertex_map(m);
        let r: Vec<usize> = tg.iter().map(|&v| vm[v]).collect();
        if r == tg {
            kernel.push(i);
        }
        image.insert(r);
    }
    assert_eq!(kernel.len() * image.len(), group.order(), "kernel times image must be the group order");
    Ok(Restriction {
        t_g: tg.iter().map(|&v| m.label(v)).collect(),
        image_order: image.len(),
        kernel_order: kernel.len(),
        kernel,
    })
}

/// Kernel elements are told apart by what they do on the closed
/// neighbourhood of any single positively curved vertex.
pub fn kernel_neighbourhood_injective(m: &PlanarMap, group: &AutGroup, restriction: &Restriction) -> bool {
    let Ok(tg) = t_g_indices(m) else { return false };
    let maps: Vec<Vec<usize>> = restriction.kernel.iter().map(|&i| group.elements[i].vertex_map(m)).collect();
    tg.iter().all(|&v| {
        let hood: Vec<usize> = std::iter::once(v).chain(m.neighbors(v)).collect();
        let seen: HashSet<Vec<usize>> = maps.iter().map(|vm| hood.iter().map(|&u| vm[u]).collect()).collect();
        seen.len() == maps.len()
    })
}

/// No non-identity element fixes a face together with two adjacent
/// vertices on it.
pub fn verify_rigidity(m: &PlanarMap, group: &AutGroup) -> bool {
    group.elements.iter().filter(|h| !h.is_identity()).all(|h| {
        let vm = h.vertex_map(m);
        let fm = h.face_map(m);
        (0..m.face_count()).filter(|&f| fm[f] == f).all(|f| {
            let walk = m.face_vertices(f);
            let k = walk.len();
            (0..k).all(|i| !(vm[walk[i]] == walk[i] && vm[walk[(i + 1) % k]] == walk[(i + 1) % k]))
        })
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderBounds {
    pub order: usize,
    /// Number of positively curved vertices.
    pub a: usize,
    /// Largest vertex degree among them.
    pub b: usize,
    pub max_face_degree: usize,
    /// `a!·b!` when the largest face has degree at most 42, else `4·D`.
    pub divisor: String,
    pub divides: bool,
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

pub fn verify_order_bounds(m: &PlanarMap, group: &AutGroup) -> Result<OrderBounds> {
    let tg = t_g_indices(m)?;
    let a = tg.len();
    let b = tg.iter().map(|&v| m.degree(v)).max().unwrap_or(0);
    let dg = m.max_face_degree();
    let divisor = if dg <= 42 { factorial(a) * factorial(b) } else { BigUint::from(4 * dg) };
    let divides = (&divisor % BigUint::from(group.order())).is_zero();
    Ok(OrderBounds { order: group.order(), a, b, max_face_degree: dg, divisor: divisor.to_string(), divides })
}

fn articulation_free(m: &PlanarMap, removed: usize) -> bool {
    let n = m.vertex_count();
    let start = (0..n).find(|&v| v != removed).unwrap();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut timer = 0;
    // iterative Tarjan: (vertex, parent, neighbour cursor)
    let mut stack: Vec<(usize, usize, usize)> = vec![(start, usize::MAX, 0)];
    disc[start] = 0;
    low[start] = 0;
    let mut root_children = 0;
    while let Some(&mut (v, parent, ref mut cursor)) = stack.last_mut() {
        let darts = m.darts_at(v);
        if *cursor < darts.len() {
            let w = m.target(darts[*cursor]);
            *cursor += 1;
            if w == removed || w == parent {
                continue;
            }
            if disc[w] == usize::MAX {
                timer += 1;
                disc[w] = timer;
                low[w] = timer;
                if v == start {
                    root_children += 1;
                }
                stack.push((w, v, 0));
            } else {
                low[v] = low[v].min(disc[w]);
            }
        } else {
            stack.pop();
            if let Some(&(p, _, _)) = stack.last() {
                low[p] = low[p].min(low[v]);
                if p != start && low[v] >= disc[p] {
                    return false;
                }
            }
        }
    }
    let reached = disc.iter().enumerate().filter(|&(v, &d)| v != removed && d != usize::MAX).count();
    reached == n - 1 && root_children <= 1
}

/// Whether the graph stays connected after deleting any two vertices.
pub fn is_three_connected(m: &PlanarMap) -> bool {
    m.vertex_count() >= 4 && (0..m.vertex_count()).all(|v| articulation_free(m, v))
}

/// Distinct vertex permutations induced by the group.
pub fn vertex_permutations(m: &PlanarMap, group: &AutGroup) -> BTreeSet<Vec<usize>> {
    group.elements.iter().map(|h| h.vertex_map(m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{antiprism, fullerene_c60, grid_example, platonic, prism, Platonic};

    #[test]
    fn platonic_orders() {
        for (which, order) in [
            (Platonic::Tetrahedron, 24),
            (Platonic::Cube, 48),
            (Platonic::Octahedron, 48),
            (Platonic::Dodecahedron, 120),
            (Platonic::Icosahedron, 120),
        ] {
            let m = platonic(which);
            let g = cellular_automorphisms(&m);
            assert_eq!(g.order(), order, "{}", which.name());
            assert_eq!(g.preserving_count() * 2, order);
            assert!(g.is_group());
            assert!(verify_rigidity(&m, &g));
            for h in &g.elements {
                let (vm, fm) = (h.vertex_map(&m), h.face_map(&m));
                for f in 0..m.face_count() {
                    let mut moved: Vec<usize> = m.face_vertices(f).iter().map(|&v| vm[v]).collect();
                    let mut target = m.face_vertices(fm[f]);
                    moved.sort();
                    target.sort();
                    assert_eq!(moved, target);
                }
            }
        }
    }

    #[test]
    fn prism_family() {
        let m = prism(43).unwrap();
        let g = cellular_automorphisms(&m);
        assert_eq!(g.order(), 172);
        let r = restrict_to_tg(&m, &g).unwrap();
        assert_eq!((r.kernel_order, r.image_order), (1, 172));
        let b = verify_order_bounds(&m, &g).unwrap();
        assert!(b.divides);
        assert_eq!(b.divisor, "172");
        let a = antiprism(50).unwrap();
        let g = cellular_automorphisms(&a);
        assert_eq!(g.order(), 200);
        assert!(verify_order_bounds(&a, &g).unwrap().divides);
        assert!(verify_rigidity(&prism(10).unwrap(), &cellular_automorphisms(&prism(10).unwrap())));
    }

    #[test]
    fn cube_bounds() {
        let m = prism(4).unwrap();
        let g = cellular_automorphisms(&m);
        let r = restrict_to_tg(&m, &g).unwrap();
        assert_eq!((r.kernel_order, r.image_order), (1, 48));
        assert!(kernel_neighbourhood_injective(&m, &g, &r));
        let b = verify_order_bounds(&m, &g).unwrap();
        assert_eq!((b.a, b.b), (8, 3));
        assert!(b.divides);
    }

    #[test]
    fn c60_and_grids() {
        let m = fullerene_c60();
        let g = cellular_automorphisms(&m);
        assert_eq!(g.order(), 120);
        assert_eq!(restrict_to_tg(&m, &g).unwrap().image_order, 120);
        assert_eq!(cellular_automorphisms(&grid_example(3, 2).unwrap()).order(), 4);
        assert_eq!(cellular_automorphisms(&grid_example(2, 2).unwrap()).order(), 8);
    }

    #[test]
    fn isomorphisms() {
        let cube = prism(4).unwrap();
        assert!(find_isomorphism(&cube, &cube.mirrored()).is_some());
        assert!(find_isomorphism(&cube, &antiprism(3).unwrap()).is_none());
        assert!(find_isomorphism(&platonic(Platonic::Cube), &crate::generators::dual(&platonic(Platonic::Octahedron))).is_some());
    }

    #[test]
    fn connectivity() {
        assert!(is_three_connected(&prism(5).unwrap()));
        assert!(is_three_connected(&platonic(Platonic::Tetrahedron)));
        assert!(!is_three_connected(&crate::generators::cycle(6).unwrap()));
        // a square with one diagonal: {0, 2} separates 1 from 3
        let rot = vec![(0, vec![1, 2, 3]), (1, vec![2, 0]), (2, vec![3, 0, 1]), (3, vec![0, 2])];
        assert!(!is_three_connected(&PlanarMap::from_rotation_system(rot).unwrap()));
    }
}
