//! Text and JSON encodings of rotation systems.
//!
//! Text, one vertex per line, neighbours in cyclic order:
//!
//! ```text
//! # comment
//! v 0 : 1 2 3
//! v 1 : 0 3 2
//! outer : 0 1
//! ```
//!
//! Each `outer : u v` line marks the face whose walk contains the dart
//! `(u, v)` as a boundary face. JSON carries the same data as
//! `{"rotation": {"0": [1, 2, 3], ...}, "outer": [[0, 1]]}`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::planar_map::{AnySurface, PlanarMap, Surface};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDocument {
    pub rotation: BTreeMap<u64, Vec<u64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub outer: Vec<[u64; 2]>,
}

impl MapDocument {
    pub fn from_surface<S: Surface + ?Sized>(s: &S, outer: &[(u64, u64)]) -> Self {
        MapDocument {
            rotation: s.map().to_rotation_system().into_iter().collect(),
            outer: outer.iter().map(|&(u, v)| [u, v]).collect(),
        }
    }

    pub fn build(&self) -> Result<AnySurface> {
        let map = PlanarMap::from_rotation_system(self.rotation.clone())?;
        let outer: Vec<(u64, u64)> = self.outer.iter().map(|&[u, v]| (u, v)).collect();
        AnySurface::from_parts(map, &outer)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (v, nbs) in &self.rotation {
            let _ = write!(out, "v {v} :");
            for n in nbs {
                let _ = write!(out, " {n}");
            }
            out.push('\n');
        }
        for [u, v] in &self.outer {
            let _ = writeln!(out, "outer : {u} {v}");
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("map documents always serialize")
    }
}

fn parse_ids(s: &str, line_no: usize) -> Result<Vec<u64>> {
    s.split_whitespace()
        .map(|t| {
            t.parse::<u64>().map_err(|_| {
                Error::MalformedInput(format!("line {line_no}: bad vertex id {t:?}"))
            })
        })
        .collect()
}

/// Parses the line-oriented text format.
pub fn parse_text(text: &str) -> Result<MapDocument> {
    let mut doc = MapDocument::default();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (head, tail) = line.split_once(':').ok_or_else(|| {
            Error::MalformedInput(format!("line {line_no}: expected ':' in {line:?}"))
        })?;
        let head: Vec<&str> = head.split_whitespace().collect();
        match head.as_slice() {
            ["v", id] => {
                let id: u64 = id.parse().map_err(|_| {
                    Error::MalformedInput(format!("line {line_no}: bad vertex id {id:?}"))
                })?;
                if doc.rotation.insert(id, parse_ids(tail, line_no)?).is_some() {
                    return Err(Error::MalformedInput(format!(
                        "line {line_no}: vertex {id} listed twice"
                    )));
                }
            }
            ["outer"] => match parse_ids(tail, line_no)?.as_slice() {
                &[u, v] => doc.outer.push([u, v]),
                _ => {
                    return Err(Error::MalformedInput(format!(
                        "line {line_no}: outer needs exactly two vertex ids"
                    )))
                }
            },
            _ => {
                return Err(Error::MalformedInput(format!(
                    "line {line_no}: unrecognised line {line:?}"
                )))
            }
        }
    }
    Ok(doc)
}

pub fn parse_json(text: &str) -> Result<MapDocument> {
    serde_json::from_str(text).map_err(|e| Error::MalformedInput(format!("json: {e}")))
}

/// Parses either encoding, sniffing JSON by a leading `{`.
pub fn parse_document(text: &str) -> Result<MapDocument> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_text(text)
    }
}

pub fn read_surface(text: &str) -> Result<AnySurface> {
    parse_document(text)?.build()
}

/// Text encoding of a surface, boundary faces included.
pub fn write_text(s: &AnySurface) -> String {
    MapDocument::from_surface(s, &s.boundary_darts()).to_text()
}

#[cfg(test)]
mod tests {
    use super::*;

    const TETRA: &str = "\
# tetrahedron
v 0 : 1 2 3
v 1 : 0 3 2
v 2 : 0 1 3
v 3 : 0 2 1
";

    #[test]
    fn text_round_trip() {
        let doc = parse_text(TETRA).unwrap();
        let s = doc.build().unwrap();
        assert!(s.is_closed());
        assert_eq!(parse_text(&write_text(&s)).unwrap(), doc);
    }

    #[test]
    fn json_matches_text() {
        let doc = parse_text(&format!("{TETRA}outer : 0 1\n")).unwrap();
        let json = doc.to_json();
        assert_eq!(parse_document(&json).unwrap(), doc);
        let s = doc.build().unwrap();
        assert!(!s.is_closed());
        assert_eq!(s.boundary_faces().len(), 1);
    }

    #[test]
    fn malformed_lines() {
        assert!(parse_text("v x : 1").is_err());
        assert!(parse_text("v 0 1 2").is_err());
        assert!(parse_text("w 0 : 1").is_err());
        assert!(parse_text("outer : 1 2 3").is_err());
        assert!(parse_text("v 0 : 1\nv 0 : 2").is_err());
        assert!(parse_json("{\"rotation\": 3}").is_err());
    }
}
