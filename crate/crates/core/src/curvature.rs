//! Combinatorial curvature `Φ(x) = 1 - deg(x)/2 + Σ 1/deg(σ)` over the faces
//! at the corners of `x`, computed exactly.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::planar_map::Surface;
use crate::rational::{self, Rational};

/// Vertices with `Φ ≥ 1/132` are good, `0 < Φ < 1/132` bad.
pub fn good_threshold() -> Rational {
    rational::frac(1, 132)
}

/// Nondecreasing face degrees around a vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pattern(Vec<usize>);

impl Pattern {
    /// Sorts `degrees`; requires at least three entries, each at least 3.
    pub fn new(mut degrees: Vec<usize>) -> Result<Self> {
        if degrees.len() < 3 || degrees.iter().any(|&d| d < 3) {
            return Err(Error::InvalidArgument(format!(
                "pattern {degrees:?} needs length >= 3 and entries >= 3"
            )));
        }
        degrees.sort_unstable();
        Ok(Pattern(degrees))
    }

    pub fn degrees(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn curvature(&self) -> Rational {
        corner_curvature(&self.0)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::MalformedInput(format!("pattern {s:?} needs parentheses")))?;
        let degs = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::MalformedInput(format!("bad degree {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Pattern::new(degs)
    }
}

impl Serialize for Pattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `1 - n/2 + Σ 1/d_i` for corner face degrees `d_1..d_n`.
pub fn corner_curvature(degrees: &[usize]) -> Rational {
    let n = degrees.len() as i64;
    let sum: Rational = degrees.iter().map(|&d| rational::recip(d)).sum();
    rational::frac(2 - n, 2) + sum
}

fn corner_degrees<S: Surface + ?Sized>(s: &S, v: usize) -> Result<Vec<usize>> {
    if !s.is_interior(v) {
        return Err(Error::IncompletePattern(s.map().label(v)));
    }
    let m = s.map();
    Ok(m.corner_faces(v).map(|f| m.face_degree(f)).collect())
}

/// Pattern of the vertex with internal index `v`.
pub fn pattern_at<S: Surface + ?Sized>(s: &S, v: usize) -> Result<Pattern> {
    Pattern::new(corner_degrees(s, v)?)
}

pub fn curvature_at<S: Surface + ?Sized>(s: &S, v: usize) -> Result<Rational> {
    Ok(corner_curvature(&corner_degrees(s, v)?))
}

/// Pattern of the vertex labelled `label`.
pub fn vertex_pattern<S: Surface + ?Sized>(s: &S, label: u64) -> Result<Pattern> {
    pattern_at(s, s.map().vertex(label)?)
}

/// Curvature of the vertex labelled `label`.
pub fn curvature<S: Surface + ?Sized>(s: &S, label: u64) -> Result<Rational> {
    curvature_at(s, s.map().vertex(label)?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VertexCurvature {
    pub vertex: u64,
    #[serde(skip)]
    pub index: usize,
    pub pattern: Pattern,
    #[serde(with = "rational::serde_str")]
    pub curvature: Rational,
}

/// Curvature of every vertex in scope: all vertices of a closed map, the
/// interior vertices of a patch.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureProfile {
    pub vertices: Vec<VertexCurvature>,
    /// Labels of vertices with positive curvature.
    pub t_g: Vec<u64>,
    #[serde(with = "rational::serde_str")]
    pub total: Rational,
}

impl CurvatureProfile {
    pub fn get(&self, label: u64) -> Option<&VertexCurvature> {
        self.vertices
            .binary_search_by_key(&label, |e| e.vertex)
            .ok()
            .map(|i| &self.vertices[i])
    }

    pub fn min_curvature(&self) -> Option<&Rational> {
        self.vertices.iter().map(|e| &e.curvature).min()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.vertices.iter().all(|e| !e.curvature.is_negative())
    }

    /// Fails on the first vertex of negative curvature.
    pub fn require_nonnegative(&self) -> Result<()> {
        match self.vertices.iter().find(|e| e.curvature.is_negative()) {
            Some(e) => Err(Error::NotNonnegativelyCurved {
                vertex: e.vertex,
                curvature: e.curvature.clone(),
            }),
            None => Ok(()),
        }
    }

    /// Rows `vertex,pattern,curvature`.
    pub fn to_csv(&self) -> String {
        self.vertices
            .iter()
            .map(|e| format!("{},{},{}\n", e.vertex, e.pattern, e.curvature))
            .collect()
    }
}

/// Curvature profile of a surface. Vertices whose pattern violates the
/// degree bounds are still reported, with their raw corner degrees.
pub fn curvature_profile<S: Surface + ?Sized>(s: &S) -> CurvatureProfile {
    let m = s.map();
    let mut vertices = Vec::new();
    let mut total = Rational::zero();
    let mut t_g = Vec::new();
    for v in s.interior_vertices() {
        let mut degs: Vec<usize> = m.corner_faces(v).map(|f| m.face_degree(f)).collect();
        let curvature = corner_curvature(&degs);
        degs.sort_unstable();
        if curvature.is_positive() {
            t_g.push(m.label(v));
        }
        total += &curvature;
        vertices.push(VertexCurvature { vertex: m.label(v), index: v, pattern: Pattern(degs), curvature });
    }
    CurvatureProfile { vertices, t_g, total }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexClass {
    Good,
    Bad,
    Zero,
}

impl VertexClass {
    pub fn of(curvature: &Rational, threshold: &Rational) -> Option<VertexClass> {
        if curvature.is_negative() {
            None
        } else if curvature.is_zero() {
            Some(VertexClass::Zero)
        } else if curvature < threshold {
            Some(VertexClass::Bad)
        } else {
            Some(VertexClass::Good)
        }
    }
}

impl fmt::Display for VertexClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VertexClass::Good => "good",
            VertexClass::Bad => "bad",
            VertexClass::Zero => "zero",
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub good: Vec<u64>,
    pub bad: Vec<u64>,
    pub zero: Vec<u64>,
}

/// Splits the vertices in scope into good, bad and zero with respect to
/// `1/132`.
pub fn classify_vertices<S: Surface + ?Sized>(s: &S) -> Result<Classification> {
    classify_profile(&curvature_profile(s), &good_threshold())
}

pub fn classify_profile(profile: &CurvatureProfile, threshold: &Rational) -> Result<Classification> {
    profile.require_nonnegative()?;
    let mut out = Classification::default();
    for e in &profile.vertices {
        match VertexClass::of(&e.curvature, threshold).expect("checked nonnegative") {
            VertexClass::Good => out.good.push(e.vertex),
            VertexClass::Bad => out.bad.push(e.vertex),
            VertexClass::Zero => out.zero.push(e.vertex),
        }
    }
    Ok(out)
}

/// True iff twelve times the total curvature is an integer.
pub fn check_twelfth_integrality(profile: &CurvatureProfile) -> bool {
    rational::is_twelfth_multiple(&profile.total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn phi(p: &str) -> Rational {
        p.parse::<Pattern>().unwrap().curvature()
    }

    #[test]
    fn curvature_of_named_patterns() {
        assert_eq!(phi("(4,4,4)"), frac(1, 4));
        assert_eq!(phi("(3,3,3,3,3,3)"), frac(0, 1));
        assert_eq!(phi("(3,11,13)"), frac(1, 858));
        assert_eq!(phi("(4,5,18)"), frac(1, 180));
        assert_eq!(phi("(3,7,31)"), frac(11, 1302));
        assert_eq!(phi("(5,6,6)"), frac(1, 30));
        assert_eq!(phi("(3,3,3,7)"), frac(1, 7));
    }

    #[test]
    fn classes_are_exact() {
        let t = good_threshold();
        assert_eq!(VertexClass::of(&phi("(4,5,18)"), &t), Some(VertexClass::Bad));
        assert_eq!(VertexClass::of(&phi("(3,7,31)"), &t), Some(VertexClass::Good));
        assert_eq!(VertexClass::of(&phi("(6,6,6)"), &t), Some(VertexClass::Zero));
        assert_eq!(VertexClass::of(&phi("(3,3,4,11)"), &t), Some(VertexClass::Good));
        assert_eq!(VertexClass::of(&phi("(3,7,43)"), &t), None);
    }

    #[test]
    fn bad_pattern_fixture() {
        // Bad patterns that can occur when no face reaches degree 132.
        let mut bad = Vec::new();
        for k in 32..=41 {
            bad.push(vec![3, 7, k]);
        }
        for k in 21..=23 {
            bad.push(vec![3, 8, k]);
        }
        for k in 16..=17 {
            bad.push(vec![3, 9, k]);
        }
        bad.extend([vec![3, 10, 14], vec![3, 11, 13], vec![4, 5, 18], vec![4, 5, 19], vec![4, 7, 9]]);
        let t = good_threshold();
        for p in &bad {
            let c = Pattern::new(p.clone()).unwrap().curvature();
            assert_eq!(VertexClass::of(&c, &t), Some(VertexClass::Bad), "{p:?}");
        }
        // Neighbours of the bad ranges are good or zero.
        for p in [[3, 7, 31], [3, 8, 20], [3, 9, 15], [3, 10, 13], [3, 11, 12], [4, 5, 17], [4, 7, 8]] {
            let c = Pattern::new(p.to_vec()).unwrap().curvature();
            assert_eq!(VertexClass::of(&c, &t), Some(VertexClass::Good), "{p:?}");
        }
    }

    #[test]
    fn pattern_parse_and_display() {
        let p: Pattern = "(11, 3, 4,3)".parse().unwrap();
        assert_eq!(p.to_string(), "(3,3,4,11)");
        assert!("(3,2,4)".parse::<Pattern>().is_err());
        assert!("(3,4)".parse::<Pattern>().is_err());
        assert!("3,4,5".parse::<Pattern>().is_err());
    }
}
