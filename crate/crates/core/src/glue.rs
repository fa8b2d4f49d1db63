//! Gluing patches along boundary cycles, cutting maps back apart, and the
//! periodic-extension check for half-infinite patches.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::curvature::{curvature_at, curvature_profile, pattern_at};
use crate::error::{Error, Result};
use crate::io::MapDocument;
use crate::planar_map::{AnySurface, FaceId, Patch, PlanarMap, Surface};
use crate::rational::{self, Rational};

/// Two patches and a vertex correspondence (left label, right label) between
/// one boundary cycle of each.
#[derive(Clone, Debug)]
pub struct GlueSpec {
    pub left: Patch,
    pub right: Patch,
    pub correspondence: Vec<(u64, u64)>,
}

/// Where the right patch's vertices ended up in a glued map.
#[derive(Clone, Debug)]
pub struct Glued {
    pub surface: AnySurface,
    /// Right label to glued label.
    pub right_labels: HashMap<u64, u64>,
    /// Seam vertices in the glued map, in left-walk order.
    pub seam: Vec<u64>,
}

fn incompatible(msg: impl Into<String>) -> Error {
    Error::IncompatibleBoundaries(msg.into())
}

/// The boundary face of `p` carrying the most of `labels`.
fn seam_face(p: &Patch, labels: &[u64], side: &str) -> Result<FaceId> {
    let m = p.map();
    let wanted: HashSet<usize> = labels
        .iter()
        .map(|&l| m.vertex(l))
        .collect::<Result<_>>()
        .map_err(|e| incompatible(format!("{side}: {e}")))?;
    p.boundary_faces()
        .iter()
        .copied()
        .max_by_key(|&f| m.face_vertices(f).iter().filter(|v| wanted.contains(v)).count())
        .filter(|&f| m.face_vertices(f).iter().any(|v| wanted.contains(v)))
        .ok_or_else(|| incompatible(format!("{side}: correspondence misses every boundary face")))
}

fn walk_labels(m: &PlanarMap, f: FaceId) -> Vec<u64> {
    m.face_vertices(f).into_iter().map(|v| m.label(v)).collect()
}

/// Does the correspondence run the right walk backwards (`Some(true)`),
/// forwards (`Some(false)`), or neither?
fn direction(left_walk: &[u64], right_walk: &[u64], corr: &HashMap<u64, u64>) -> Option<bool> {
    let k = left_walk.len();
    let pos: HashMap<u64, usize> = right_walk.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let r: Vec<usize> = left_walk.iter().map(|l| pos[&corr[l]]).collect();
    let step = |i: usize| (r[(i + 1) % k] + k - r[i]) % k;
    if (0..k).all(|i| step(i) == k - 1) {
        Some(true)
    } else if (0..k).all(|i| step(i) == 1) {
        Some(false)
    } else {
        None
    }
}

/// Rotation at `x` read from `from` to `to`, both inclusive.
fn arc(m: &PlanarMap, x: usize, from: usize, to: usize) -> Vec<usize> {
    let start = m.dart_between(x, from).unwrap();
    let mut out = vec![from];
    let mut d = m.rot_next(start);
    while m.target(d) != from {
        out.push(m.target(d));
        if m.target(d) == to {
            break;
        }
        d = m.rot_next(d);
    }
    out
}

/// Identifies a boundary cycle of `left` with one of `right`. Seam
/// rotations are spliced so the two sides sit on opposite sides of the
/// seam; a correspondence running both walks the same way glues the mirror
/// image of `right`. Left labels are kept; right-only vertices are numbered
/// upward from the largest left label.
pub fn glue_patches(spec: &GlueSpec) -> Result<Glued> {
    let corr_list = &spec.correspondence;
    if corr_list.is_empty() {
        return Err(incompatible("empty correspondence"));
    }
    let left_labels: Vec<u64> = corr_list.iter().map(|c| c.0).collect();
    let right_labels: Vec<u64> = corr_list.iter().map(|c| c.1).collect();
    let fl = seam_face(&spec.left, &left_labels, "left")?;
    let fr = seam_face(&spec.right, &right_labels, "right")?;
    let (kl, kr) = (spec.left.map().face_degree(fl), spec.right.map().face_degree(fr));
    if kl != kr {
        return Err(incompatible(format!("boundary cycles have lengths {kl} and {kr}")));
    }
    let left_walk = walk_labels(spec.left.map(), fl);
    let right_walk = walk_labels(spec.right.map(), fr);
    let corr: HashMap<u64, u64> = corr_list.iter().copied().collect();
    let inverse: HashMap<u64, u64> = corr_list.iter().map(|&(a, b)| (b, a)).collect();
    let covers = |walk: &[u64], map: &HashMap<u64, u64>| {
        map.len() == walk.len() && walk.iter().all(|l| map.contains_key(l))
    };
    if corr_list.len() != kl || !covers(&left_walk, &corr) || !covers(&right_walk, &inverse) {
        return Err(incompatible("correspondence is not a bijection between the boundary cycles"));
    }
    let right = match direction(&left_walk, &right_walk, &corr) {
        Some(true) => spec.right.clone(),
        Some(false) => spec.right.mirrored(),
        None => return Err(incompatible("correspondence does not preserve cyclic order")),
    };
    let fr = seam_face(&right, &right_labels, "right")?;
    let (lm, rm) = (spec.left.map(), right.map());

    let mut relabel: HashMap<u64, u64> = inverse.clone();
    let mut next = lm.max_label() + 1;
    let mut fresh: Vec<u64> = rm.labels().iter().copied().filter(|l| !inverse.contains_key(l)).collect();
    fresh.sort_unstable();
    for l in fresh {
        relabel.insert(l, next);
        next += 1;
    }
    let rl = |v: usize| relabel[&rm.label(v)];

    let mut rot: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    let seam_left: HashSet<usize> = lm.face_vertices(fl).into_iter().collect();
    let seam_right: HashSet<usize> = rm.face_vertices(fr).into_iter().collect();
    for (label, list) in lm.to_rotation_system() {
        if !seam_left.contains(&lm.vertex(label)?) {
            rot.insert(label, list);
        }
    }
    for v in 0..rm.vertex_count() {
        if !seam_right.contains(&v) {
            let list = rm.darts_at(v).iter().map(|&d| rl(rm.target(d))).collect();
            rot.insert(rl(v), list);
        }
    }
    // Around each seam vertex the left rotation runs from the seam successor
    // n to the predecessor p; the right one continues from p back to n.
    let lk = left_walk.len();
    let lwalk = lm.face_vertices(fl);
    let rwalk = rm.face_vertices(fr);
    let rk = rwalk.len();
    for i in 0..lk {
        let (p, x, n) = (lwalk[(i + lk - 1) % lk], lwalk[i], lwalk[(i + 1) % lk]);
        let mut list: Vec<u64> = arc(lm, x, n, p).into_iter().map(|v| lm.label(v)).collect();
        let y = rm.vertex(corr[&lm.label(x)])?;
        let j = rwalk.iter().position(|&w| w == y).unwrap();
        let (rp, rn) = (rwalk[(j + rk - 1) % rk], rwalk[(j + 1) % rk]);
        let right_arc = arc(rm, y, rn, rp);
        list.extend(right_arc[1..right_arc.len() - 1].iter().map(|&v| rl(v)));
        let mut seen = HashSet::new();
        if let Some(dup) = list.iter().find(|&&l| !seen.insert(l)) {
            return Err(Error::NonSimpleResult(format!(
                "vertex {} would be joined to {dup} twice",
                lm.label(x)
            )));
        }
        rot.insert(lm.label(x), list);
    }
    let map = PlanarMap::from_rotation_system(rot)?;

    let mut outer: Vec<(u64, u64)> = Vec::new();
    for &f in spec.left.boundary_faces() {
        if f != fl {
            let d = lm.face_darts(f)[0];
            outer.push((lm.label(lm.origin(d)), lm.label(lm.target(d))));
        }
    }
    for &f in right.boundary_faces() {
        if f != fr {
            let d = rm.face_darts(f)[0];
            outer.push((rl(rm.origin(d)), rl(rm.target(d))));
        }
    }
    let surface = AnySurface::from_parts(map, &outer)?;
    Ok(Glued { surface, right_labels: relabel, seam: left_walk })
}

fn open_walk(p: &Patch, face: usize) -> Vec<u64> {
    walk_labels(p.map(), p.boundary_faces()[face])
}

/// Two `n`-gons with `rings` square bands between them, put together with
/// [`glue_patches`].
pub fn stacked_prism(n: usize, rings: usize) -> Result<PlanarMap> {
    if rings == 0 {
        return Err(Error::InvalidArgument("stacked prism needs a band".into()));
    }
    let mut current = crate::generators::lone_face(n)?;
    for _ in 0..rings {
        let band = crate::generators::band_annulus(&vec![(1, 1); n])?;
        let seam = open_walk(&current, 0);
        let inner = open_walk(&band, 0);
        let g = glue_patches(&GlueSpec { left: current, right: band, correspondence: zip_seam(&seam, &inner) })?;
        current = match g.surface {
            AnySurface::Patch(p) => p,
            AnySurface::Closed(_) => unreachable!("the outer ring stays open"),
        };
    }
    let seam = open_walk(&current, 0);
    let cap = crate::generators::lone_face(n)?;
    let ring = open_walk(&cap, 0);
    let g = glue_patches(&GlueSpec { left: current, right: cap, correspondence: zip_seam(&seam, &ring) })?;
    Ok(g.surface.map().clone())
}

/// Cuts a closed map or patch along a simple cycle of labels (consecutive
/// entries adjacent). Returns the parts on the left and on the right of the
/// cycle walked in the given order, each with the cycle as a new boundary
/// face. Vertex labels are kept.
pub fn split_along_cycle<S: Surface + ?Sized>(s: &S, cycle: &[u64]) -> Result<(Patch, Patch)> {
    let m = s.map();
    let k = cycle.len();
    if k < 3 {
        return Err(Error::InvalidArgument("a cutting cycle needs at least three vertices".into()));
    }
    let cyc: Vec<usize> = cycle.iter().map(|&l| m.vertex(l)).collect::<Result<_>>()?;
    let on_cycle: HashSet<usize> = cyc.iter().copied().collect();
    if on_cycle.len() != k {
        return Err(Error::InvalidArgument("cutting cycle repeats a vertex".into()));
    }
    for i in 0..k {
        if m.dart_between(cyc[i], cyc[(i + 1) % k]).is_none() {
            return Err(Error::InvalidArgument(format!(
                "{} and {} are not adjacent",
                cycle[i],
                cycle[(i + 1) % k]
            )));
        }
    }
    // Side 0 lies left of the walk: from x, ccw from the successor n to the
    // predecessor p.
    let mut side: Vec<Option<usize>> = vec![None; m.vertex_count()];
    let mut queue = VecDeque::new();
    let mut arcs: Vec<[Vec<usize>; 2]> = Vec::new();
    for i in 0..k {
        let (p, x, n) = (cyc[(i + k - 1) % k], cyc[i], cyc[(i + 1) % k]);
        let a = arc(m, x, n, p);
        let b = arc(m, x, p, n);
        for (s_idx, list) in [(0, &a), (1, &b)] {
            for &v in &list[1..list.len() - 1] {
                if on_cycle.contains(&v) {
                    continue;
                }
                match side[v] {
                    Some(t) if t != s_idx => {
                        return Err(Error::InvalidArgument("cycle does not separate the map".into()))
                    }
                    Some(_) => {}
                    None => {
                        side[v] = Some(s_idx);
                        queue.push_back(v);
                    }
                }
            }
        }
        arcs.push([a, b]);
    }
    while let Some(v) = queue.pop_front() {
        for w in m.neighbors(v).collect::<Vec<_>>() {
            if on_cycle.contains(&w) {
                continue;
            }
            match side[w] {
                None => {
                    side[w] = side[v];
                    queue.push_back(w);
                }
                Some(t) if Some(t) != side[v] => {
                    return Err(Error::InvalidArgument("cycle does not separate the map".into()))
                }
                _ => {}
            }
        }
    }
    let mut parts = Vec::new();
    for s_idx in 0..2 {
        let mut rot: Vec<(u64, Vec<u64>)> = Vec::new();
        for v in 0..m.vertex_count() {
            if side[v] == Some(s_idx) {
                rot.push((m.label(v), m.neighbors(v).map(|w| m.label(w)).collect()));
            }
        }
        for (i, &x) in cyc.iter().enumerate() {
            let list = arcs[i][s_idx].iter().map(|&w| m.label(w)).collect();
            rot.push((m.label(x), list));
        }
        let part = PlanarMap::from_rotation_system(rot)?;
        // The empty sector at each cycle vertex becomes the new face; on
        // side 0 it runs along the cycle forwards.
        let dart = if s_idx == 0 { (cycle[0], cycle[1]) } else { (cycle[1], cycle[0]) };
        let mut outer = vec![dart];
        for &f in s.boundary_faces() {
            let verts = m.face_vertices(f);
            let mine = if verts.iter().any(|&w| !on_cycle.contains(&w)) {
                verts.iter().any(|&w| side[w] == Some(s_idx))
            } else {
                // a face spanned by cycle vertices alone: look for it intact
                let d = m.face_darts(f)[0];
                part.dart(m.label(m.origin(d)), m.label(m.target(d)))
                    .map(|pd| part.face_degree(part.face(pd)) == verts.len() && part.face(pd) != part.face(part.dart(dart.0, dart.1).unwrap()))
                    .unwrap_or(false)
            };
            if mine {
                let d = m.face_darts(f)[0];
                outer.push((m.label(m.origin(d)), m.label(m.target(d))));
            }
        }
        parts.push(Patch::from_darts(part, &outer)?);
    }
    let right = parts.pop().unwrap();
    let left = parts.pop().unwrap();
    Ok((left, right))
}

/// Half-infinite patch data: a core with one boundary face, an annulus with
/// two, and the correspondences attaching the annulus to the core and to the
/// next copy of itself.
#[derive(Clone, Debug)]
pub struct PeriodicSpec {
    pub core: Patch,
    pub annulus: Patch,
    /// (core label, annulus label) along the annulus' inner boundary.
    pub core_seam: Vec<(u64, u64)>,
    /// (annulus label on the outer boundary, annulus label on the inner
    /// boundary of the next copy).
    pub period_seam: Vec<(u64, u64)>,
}

/// On-disk form of [`PeriodicSpec`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PeriodicBundle {
    pub core: MapDocument,
    pub annulus: MapDocument,
    pub core_seam: Vec<[u64; 2]>,
    pub period_seam: Vec<[u64; 2]>,
}

fn as_patch(doc: &MapDocument, what: &str) -> Result<Patch> {
    match doc.build()? {
        AnySurface::Patch(p) => Ok(p),
        AnySurface::Closed(_) => Err(Error::MalformedInput(format!("{what} has no boundary face"))),
    }
}

impl PeriodicBundle {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::MalformedInput(e.to_string()))
    }

    pub fn to_spec(&self) -> Result<PeriodicSpec> {
        let pairs = |v: &[[u64; 2]]| v.iter().map(|p| (p[0], p[1])).collect();
        Ok(PeriodicSpec {
            core: as_patch(&self.core, "core")?,
            annulus: as_patch(&self.annulus, "annulus")?,
            core_seam: pairs(&self.core_seam),
            period_seam: pairs(&self.period_seam),
        })
    }

    pub fn from_spec(spec: &PeriodicSpec) -> Self {
        let doc = |p: &Patch| MapDocument::from_surface(p, &p.boundary_darts());
        let pairs = |v: &[(u64, u64)]| v.iter().map(|&(a, b)| [a, b]).collect();
        PeriodicBundle {
            core: doc(&spec.core),
            annulus: doc(&spec.annulus),
            core_seam: pairs(&spec.core_seam),
            period_seam: pairs(&spec.period_seam),
        }
    }
}

/// A vertex breaking one of the periodic conditions.
#[derive(Clone, Debug, Serialize)]
pub struct Offender {
    pub vertex: u64,
    pub pattern: String,
    #[serde(with = "rational::serde_str")]
    pub curvature: Rational,
    pub stage: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct PeriodicReport {
    pub core_seam_nonnegative: bool,
    pub period_seam_flat: bool,
    pub annulus_interior_flat: bool,
    pub offenders: Vec<Offender>,
    /// Curvature data of core plus one annulus, interior vertices only. Once
    /// the check passes these are the values for the infinite extension.
    pub interior_t_g: Vec<u64>,
    #[serde(with = "rational::serde_str")]
    pub interior_total: Rational,
    #[serde(skip)]
    pub closure: Option<Patch>,
}

impl PeriodicReport {
    pub fn passed(&self) -> bool {
        self.core_seam_nonnegative && self.period_seam_flat && self.annulus_interior_flat
    }
}

fn offender<S: Surface + ?Sized>(s: &S, v: usize, stage: &'static str) -> Offender {
    Offender {
        vertex: s.map().label(v),
        pattern: pattern_at(s, v).map(|p| p.to_string()).unwrap_or_default(),
        curvature: curvature_at(s, v).unwrap_or_else(|_| Rational::zero()),
        stage,
    }
}

/// Checks that repeating the annulus forever around the core gives a
/// tessellation whose positive curvature all sits in core plus first
/// annulus: the core seam must be nonnegatively curved, and the annulus
/// interior and its self-seam flat.
pub fn periodic_closure_check(spec: &PeriodicSpec) -> Result<PeriodicReport> {
    if spec.core.boundary_faces().len() != 1 {
        return Err(incompatible("core must have exactly one boundary face"));
    }
    if spec.annulus.boundary_faces().len() != 2 {
        return Err(incompatible("annulus must have exactly two boundary faces"));
    }
    let mut offenders = Vec::new();

    let first = glue_patches(&GlueSpec {
        left: spec.core.clone(),
        right: spec.annulus.clone(),
        correspondence: spec.core_seam.clone(),
    })?;
    let closure = match first.surface {
        AnySurface::Patch(p) => p,
        AnySurface::Closed(_) => unreachable!("annulus keeps a boundary"),
    };
    let mut core_ok = true;
    for v in closure.interior_vertices() {
        let phi = curvature_at(&closure, v)?;
        if phi.is_negative() {
            core_ok = false;
            offenders.push(offender(&closure, v, "core seam"));
        }
    }

    let mut annulus_ok = true;
    let a = &spec.annulus;
    for v in a.interior_vertices() {
        if !curvature_at(a, v)?.is_zero() {
            annulus_ok = false;
            offenders.push(offender(a, v, "annulus interior"));
        }
    }

    let second = glue_patches(&GlueSpec {
        left: a.clone(),
        right: a.clone(),
        correspondence: spec.period_seam.clone(),
    })?;
    let twice = &second.surface;
    let mut period_ok = true;
    for &l in &second.seam {
        let v = twice.map().vertex(l)?;
        if !twice.is_interior(v) || !curvature_at(twice, v)?.is_zero() {
            period_ok = false;
            offenders.push(offender(twice, v, "period seam"));
        }
    }

    let profile = curvature_profile(&closure);
    Ok(PeriodicReport {
        core_seam_nonnegative: core_ok,
        period_seam_flat: period_ok,
        annulus_interior_flat: annulus_ok,
        offenders,
        interior_t_g: profile.t_g.clone(),
        interior_total: profile.total,
        closure: Some(closure),
    })
}

/// Seam pairing annulus ring positions: `outer[i]` with `inner[i]`, both
/// lists in the order the caller chooses.
pub fn zip_seam(left: &[u64], right: &[u64]) -> Vec<(u64, u64)> {
    left.iter().copied().zip(right.iter().copied()).collect()
}
