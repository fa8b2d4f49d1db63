//! Regression corpus: named graphs with frozen expectations, run through
//! the whole pipeline.

use std::fmt;
use std::path::{Path, PathBuf};

use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automorphism::{
    cellular_automorphisms, is_three_connected, kernel_neighbourhood_injective, restrict_to_tg, verify_order_bounds,
    verify_rigidity,
};
use crate::curvature::{check_twelfth_integrality, curvature_profile, good_threshold};
use crate::discharging::{bound_from_certificate, find_certificate, verify_certificate, Discharge, DEFAULT_RADIUS};
use crate::error::{Error, Result};
use crate::generators::{self, Platonic};
use crate::glue::{periodic_closure_check, stacked_prism, PeriodicBundle};
use crate::io::read_surface;
use crate::planar_map::{AnySurface, Surface};
use crate::prismlike::{band_decomposition, is_prismlike};
use crate::rational;
use crate::validate::validate_tessellation;

/// A generator invocation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum GeneratorSpec {
    Prism { n: usize },
    Antiprism { n: usize },
    Platonic { name: String },
    C60,
    Grid { a: usize, b: usize },
    StackedPrism { n: usize, rings: usize },
}

impl GeneratorSpec {
    pub fn build(&self) -> Result<AnySurface> {
        let m = match self {
            GeneratorSpec::Prism { n } => generators::prism(*n)?,
            GeneratorSpec::Antiprism { n } => generators::antiprism(*n)?,
            GeneratorSpec::Platonic { name } => generators::platonic(name.parse::<Platonic>()?),
            GeneratorSpec::C60 => generators::fullerene_c60(),
            GeneratorSpec::Grid { a, b } => generators::grid_example(*a, *b)?,
            GeneratorSpec::StackedPrism { n, rings } => stacked_prism(*n, *rings)?,
        };
        Ok(AnySurface::Closed(m))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_g: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prismlike: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aut_order: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorSpec>,
    /// Map document or periodic bundle, relative to the manifest.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub subdivide: bool,
    #[serde(default)]
    pub expected: Expected,
}

pub fn parse_manifest(text: &str) -> Result<Vec<CorpusEntry>> {
    serde_json::from_str(text).map_err(|e| Error::MalformedInput(format!("manifest: {e}")))
}

/// What the pipeline measured on one entry.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Measured {
    pub total: String,
    pub t_g: usize,
    pub prismlike: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aut_order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub three_connected: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discharge_bound: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum EntryStatus {
    Pass,
    Fail { problems: Vec<String> },
    Skipped { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryReport {
    pub name: String,
    #[serde(flatten)]
    pub status: EntryStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measured: Option<Measured>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusReport {
    pub entries: Vec<EntryReport>,
}

impl CorpusReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| !matches!(e.status, EntryStatus::Fail { .. }))
    }

    pub fn skipped(&self) -> impl Iterator<Item = &EntryReport> {
        self.entries.iter().filter(|e| matches!(e.status, EntryStatus::Skipped { .. }))
    }
}

impl fmt::Display for CorpusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            match &e.status {
                EntryStatus::Pass => writeln!(f, "pass  {}", e.name)?,
                EntryStatus::Fail { problems } => writeln!(f, "FAIL  {}: {}", e.name, problems.join("; "))?,
                EntryStatus::Skipped { reason } => writeln!(f, "skip  {}: {reason}", e.name)?,
            }
        }
        Ok(())
    }
}

enum Loaded {
    Surface(AnySurface),
    Missing(PathBuf),
}

fn load(entry: &CorpusEntry, base: &Path) -> Result<Loaded> {
    let surface = match (&entry.generator, &entry.file) {
        (Some(g), None) => g.build()?,
        (None, Some(f)) => {
            let path = base.join(f);
            let Ok(text) = std::fs::read_to_string(&path) else {
                return Ok(Loaded::Missing(path));
            };
            if text.contains("\"annulus\"") {
                let report = periodic_closure_check(&PeriodicBundle::parse(&text)?.to_spec()?)?;
                if !report.passed() {
                    return Err(Error::InvalidArgument(format!("{} fails the periodic check", path.display())));
                }
                AnySurface::Patch(report.closure.expect("closure is kept"))
            } else {
                read_surface(&text)?
            }
        }
        _ => return Err(Error::MalformedInput(format!("entry {} needs exactly one of generator, file", entry.name))),
    };
    Ok(Loaded::Surface(if entry.subdivide { subdivide(surface) } else { surface }))
}

fn subdivide(s: AnySurface) -> AnySurface {
    match s {
        AnySurface::Closed(m) => AnySurface::Closed(generators::subdivide_hexagons(&m)),
        AnySurface::Patch(p) => AnySurface::Patch(generators::subdivide_patch_hexagons(&p)),
    }
}

/// validate -> curvature -> prism-like -> discharge -> automorphisms.
fn measure(s: &AnySurface, problems: &mut Vec<String>) -> Result<Measured> {
    let report = validate_tessellation(s);
    if !report.is_valid() {
        problems.push(format!("invalid tessellation: {}", report.to_string().trim()));
    }
    let profile = curvature_profile(s);
    if let Some(e) = profile.vertices.iter().find(|e| e.curvature.is_negative()) {
        problems.push(format!("vertex {} has curvature {}", e.vertex, e.curvature));
        return Ok(Measured { total: profile.total.to_string(), t_g: profile.t_g.len(), ..Default::default() });
    }
    if !check_twelfth_integrality(&profile) && s.is_closed() {
        problems.push(format!("12 * total = {} is not an integer", &profile.total * rational::int(12)));
    }
    let verdict = is_prismlike(s);
    if verdict.prismlike {
        let subdivided = subdivide(s.clone());
        if let Err(e) = band_decomposition(&subdivided) {
            problems.push(format!("band decomposition: {e}"));
        }
    }
    let mut measured = Measured {
        total: profile.total.to_string(),
        t_g: profile.t_g.len(),
        prismlike: verdict.prismlike,
        ..Default::default()
    };
    if !verdict.prismlike && s.map().max_face_degree() < 132 {
        match find_certificate(s, DEFAULT_RADIUS, &good_threshold())? {
            Discharge::Feasible(cert) => {
                let check = verify_certificate(s, &cert);
                if let Some(v) = check.violations.first() {
                    problems.push(format!("certificate does not verify: {v}"));
                } else {
                    measured.discharge_bound = Some(bound_from_certificate(s, &cert)?.to_string());
                }
            }
            Discharge::Infeasible { unmet, .. } => {
                problems.push(format!("discharging infeasible at {} bad vertices", unmet.len()))
            }
        }
    }
    if let AnySurface::Closed(m) = s {
        let group = cellular_automorphisms(m);
        measured.aut_order = Some(group.order());
        measured.three_connected = Some(is_three_connected(m));
        if !verify_rigidity(m, &group) {
            problems.push("rigidity fails".into());
        }
        if !profile.t_g.is_empty() {
            let r = restrict_to_tg(m, &group)?;
            if !kernel_neighbourhood_injective(m, &group, &r) {
                problems.push("kernel not determined by a neighbourhood".into());
            }
            let bounds = verify_order_bounds(m, &group)?;
            if !bounds.divides {
                problems.push(format!("order {} does not divide {}", bounds.order, bounds.divisor));
            }
        }
    }
    Ok(measured)
}

fn compare(expected: &Expected, got: &Measured, problems: &mut Vec<String>) {
    if let Some(t) = &expected.total {
        match rational::parse(t) {
            Ok(want) if want.to_string() == got.total => {}
            Ok(want) => problems.push(format!("total {} != expected {want}", got.total)),
            Err(e) => problems.push(format!("expected total: {e}")),
        }
    }
    if let Some(t) = expected.t_g {
        if t != got.t_g {
            problems.push(format!("#T_G {} != expected {t}", got.t_g));
        }
    }
    if let Some(p) = expected.prismlike {
        if p != got.prismlike {
            problems.push(format!("prism-like {} != expected {p}", got.prismlike));
        }
    }
    if let Some(q) = expected.aut_order {
        if Some(q) != got.aut_order {
            problems.push(format!("automorphism order {:?} != expected {q}", got.aut_order));
        }
    }
}

pub fn check_entry(entry: &CorpusEntry, base: &Path) -> EntryReport {
    let name = entry.name.clone();
    let mut problems = Vec::new();
    let outcome = load(entry, base).and_then(|loaded| match loaded {
        Loaded::Missing(path) => Ok(Err(path)),
        Loaded::Surface(s) => measure(&s, &mut problems).map(Ok),
    });
    match outcome {
        Ok(Err(path)) => EntryReport {
            name,
            status: EntryStatus::Skipped { reason: format!("{} not found", path.display()) },
            measured: None,
        },
        Ok(Ok(measured)) => {
            compare(&entry.expected, &measured, &mut problems);
            let status = if problems.is_empty() { EntryStatus::Pass } else { EntryStatus::Fail { problems } };
            EntryReport { name, status, measured: Some(measured) }
        }
        Err(e) => EntryReport { name, status: EntryStatus::Fail { problems: vec![e.to_string()] }, measured: None },
    }
}

/// Runs every entry concurrently; the report keeps manifest order. File
/// paths resolve against `base`.
pub fn corpus_check(entries: &[CorpusEntry], base: &Path) -> CorpusReport {
    CorpusReport { entries: entries.par_iter().map(|e| check_entry(e, base)).collect() }
}

/// The manifest with every expectation replaced by what was measured.
pub fn freeze(entries: &[CorpusEntry], base: &Path) -> Vec<CorpusEntry> {
    let report = corpus_check(entries, base);
    entries
        .iter()
        .zip(report.entries)
        .map(|(e, r)| {
            let mut e = e.clone();
            if let Some(m) = r.measured {
                e.expected = Expected {
                    total: Some(m.total),
                    t_g: Some(m.t_g),
                    prismlike: Some(m.prismlike),
                    aut_order: m.aut_order,
                };
            }
            e
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(json: &str) -> CorpusEntry {
        serde_json::from_str(json).unwrap()
    }

    #[test]
    fn manifest_syntax() {
        let e = entry(r#"{"name": "p", "generator": {"family": "prism", "n": 5}, "expected": {"total": "2", "t_g": 10}}"#);
        assert_eq!(e.generator, Some(GeneratorSpec::Prism { n: 5 }));
        let e = entry(r#"{"name": "g", "generator": {"family": "grid", "a": 1, "b": 2}}"#);
        assert_eq!(e.expected, Expected::default());
        assert!(parse_manifest("[{\"name\": 1}]").is_err());
    }

    #[test]
    fn pass_fail_skip() {
        let base = Path::new(".");
        let ok = entry(r#"{"name": "cube", "generator": {"family": "prism", "n": 4}, "expected": {"total": "2", "t_g": 8, "prismlike": false, "aut_order": 48}}"#);
        assert_eq!(check_entry(&ok, base).status, EntryStatus::Pass);
        let wrong = entry(r#"{"name": "cube", "generator": {"family": "prism", "n": 4}, "expected": {"total": "3"}}"#);
        let EntryStatus::Fail { problems } = check_entry(&wrong, base).status else { panic!() };
        assert!(problems[0].contains("total 2 != expected 3"));
        let absent = entry(r#"{"name": "x", "file": "no/such/extremal132.patch"}"#);
        assert!(matches!(check_entry(&absent, base).status, EntryStatus::Skipped { .. }));
    }

    #[test]
    fn freezing_fills_expectations() {
        let entries = vec![entry(r#"{"name": "t", "generator": {"family": "platonic", "name": "tetrahedron"}}"#)];
        let frozen = freeze(&entries, Path::new("."));
        assert_eq!(
            frozen[0].expected,
            Expected { total: Some("2".into()), t_g: Some(4), prismlike: Some(false), aut_order: Some(24) }
        );
        assert!(corpus_check(&frozen, Path::new(".")).passed());
    }
}
