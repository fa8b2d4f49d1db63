//! Charge transfer from good to bad vertices, found as an exact max-flow
//! and checked independently.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::curvature::{curvature_profile, good_threshold, CurvatureProfile};
use crate::error::{Error, Result};
use crate::flow::FlowGraph;
use crate::planar_map::Surface;
use crate::rational::{self, Rational};

pub const DEFAULT_RADIUS: usize = 4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transfer {
    pub from: u64,
    pub to: u64,
    #[serde(with = "rational::serde_str")]
    pub amount: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DischargingCertificate {
    pub transfers: Vec<Transfer>,
    pub radius: usize,
    #[serde(with = "rational::serde_str")]
    pub threshold: Rational,
}

impl DischargingCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::MalformedInput(format!("certificate: {e}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Discharge {
    Feasible(DischargingCertificate),
    /// Max-flow fell short of the total deficit of the bad vertices.
    Infeasible {
        shortfall: Rational,
        unmet: Vec<u64>,
    },
}

impl Discharge {
    pub fn certificate(&self) -> Option<&DischargingCertificate> {
        match self {
            Discharge::Feasible(c) => Some(c),
            Discharge::Infeasible { .. } => None,
        }
    }
}

fn nonnegative_profile<S: Surface + ?Sized>(g: &S) -> Result<CurvatureProfile> {
    let profile = curvature_profile(g);
    profile.require_nonnegative()?;
    Ok(profile)
}

/// Source feeds every good vertex its excess over `threshold`, every bad
/// vertex drains its deficit into the sink, and good vertices reach bad ones
/// within `radius` edges at no limit. Capacities are scaled to integers by
/// the common denominator before the flow runs.
pub fn find_certificate<S: Surface + ?Sized>(g: &S, radius: usize, threshold: &Rational) -> Result<Discharge> {
    if !threshold.is_positive() {
        return Err(Error::InvalidArgument(format!("threshold {threshold} must be positive")));
    }
    let profile = nonnegative_profile(g)?;
    let m = g.map();
    let mut good = Vec::new();
    let mut bad = Vec::new();
    for e in &profile.vertices {
        if e.curvature >= *threshold {
            good.push(e);
        } else if e.curvature.is_positive() {
            bad.push(e);
        }
    }
    let supplies: Vec<Rational> = good.iter().map(|e| &e.curvature - threshold).collect();
    let demands: Vec<Rational> = bad.iter().map(|e| threshold - &e.curvature).collect();
    let scale = rational::common_denominator(supplies.iter().chain(&demands));
    let scaled = |r: &Rational| (r * Rational::from_integer(scale.clone())).to_integer();

    let (source, sink) = (0, 1);
    let node_good = |i: usize| 2 + i;
    let node_bad = |j: usize| 2 + good.len() + j;
    let mut net = FlowGraph::new(2 + good.len() + bad.len());
    let unlimited: BigInt = supplies.iter().map(&scaled).sum::<BigInt>() + 1;
    for (i, s) in supplies.iter().enumerate() {
        net.add_arc(source, node_good(i), scaled(s));
    }
    let mut sink_arcs = Vec::new();
    for (j, d) in demands.iter().enumerate() {
        sink_arcs.push(net.add_arc(node_bad(j), sink, scaled(d)));
    }
    let bad_index: HashMap<usize, usize> = bad.iter().enumerate().map(|(j, e)| (e.index, j)).collect();
    let mut pair_arcs = Vec::new();
    for (i, e) in good.iter().enumerate() {
        if bad.is_empty() {
            break;
        }
        let dist = m.distances_within(&[e.index], radius);
        for (v, d) in dist.iter().enumerate() {
            if let (Some(_), Some(&j)) = (d, bad_index.get(&v)) {
                pair_arcs.push((i, j, net.add_arc(node_good(i), node_bad(j), unlimited.clone())));
            }
        }
    }
    let value = net.max_flow(source, sink);
    let needed: BigInt = demands.iter().map(&scaled).sum();
    let to_rational = |n: BigInt| Rational::new(n, scale.clone());
    if value < needed {
        let unmet = sink_arcs
            .iter()
            .enumerate()
            .filter(|&(j, &a)| net.flow(a) < scaled(&demands[j]))
            .map(|(j, _)| bad[j].vertex)
            .collect();
        return Ok(Discharge::Infeasible { shortfall: to_rational(needed - value), unmet });
    }
    let transfers = pair_arcs
        .into_iter()
        .filter_map(|(i, j, a)| {
            let f = net.flow(a);
            f.is_positive().then(|| Transfer { from: good[i].vertex, to: bad[j].vertex, amount: to_rational(f) })
        })
        .collect();
    Ok(Discharge::Feasible(DischargingCertificate { transfers, radius, threshold: threshold.clone() }))
}

/// [`find_certificate`] at the default radius and threshold.
pub fn find_default_certificate<S: Surface + ?Sized>(g: &S) -> Result<Discharge> {
    find_certificate(g, DEFAULT_RADIUS, &good_threshold())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    UnknownVertex { vertex: u64 },
    NonPositiveAmount { from: u64, to: u64 },
    OutOfRadius { from: u64, to: u64, distance: Option<usize> },
    BelowThreshold { vertex: u64, #[serde(with = "rational::serde_str")] charge: Rational },
    NegativeCharge { vertex: u64, #[serde(with = "rational::serde_str")] charge: Rational },
    NotConserved,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownVertex { vertex } => write!(f, "vertex {vertex} is not an interior vertex"),
            Violation::NonPositiveAmount { from, to } => write!(f, "transfer {from} -> {to} is not positive"),
            Violation::OutOfRadius { from, to, distance: Some(d) } => {
                write!(f, "transfer {from} -> {to} spans distance {d}")
            }
            Violation::OutOfRadius { from, to, distance: None } => write!(f, "transfer {from} -> {to} is disconnected"),
            Violation::BelowThreshold { vertex, charge } => write!(f, "vertex {vertex} ends below threshold at {charge}"),
            Violation::NegativeCharge { vertex, charge } => write!(f, "vertex {vertex} ends negative at {charge}"),
            Violation::NotConserved => write!(f, "total charge changed"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateCheck {
    pub violations: Vec<Violation>,
}

impl CertificateCheck {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Final charge of each interior vertex after applying `cert`, keyed by
/// label. Transfers naming unknown vertices are skipped.
pub fn final_charges<S: Surface + ?Sized>(g: &S, cert: &DischargingCertificate) -> HashMap<u64, Rational> {
    let profile = curvature_profile(g);
    let mut charge: HashMap<u64, Rational> = profile.vertices.iter().map(|e| (e.vertex, e.curvature.clone())).collect();
    for t in &cert.transfers {
        if charge.contains_key(&t.from) && charge.contains_key(&t.to) {
            *charge.get_mut(&t.from).unwrap() -= &t.amount;
            *charge.get_mut(&t.to).unwrap() += &t.amount;
        }
    }
    charge
}

/// Checks every certificate invariant from scratch.
pub fn verify_certificate<S: Surface + ?Sized>(g: &S, cert: &DischargingCertificate) -> CertificateCheck {
    let m = g.map();
    let profile = curvature_profile(g);
    let known: HashMap<u64, usize> = profile.vertices.iter().map(|e| (e.vertex, e.index)).collect();
    let mut violations = Vec::new();
    for t in &cert.transfers {
        let mut ok = true;
        for v in [t.from, t.to] {
            if !known.contains_key(&v) {
                violations.push(Violation::UnknownVertex { vertex: v });
                ok = false;
            }
        }
        if !t.amount.is_positive() {
            violations.push(Violation::NonPositiveAmount { from: t.from, to: t.to });
        }
        if ok {
            let d = m.distances_within(&[known[&t.from]], cert.radius)[known[&t.to]];
            if d.is_none() {
                let actual = m.distances_from(&[known[&t.from]])[known[&t.to]];
                violations.push(Violation::OutOfRadius { from: t.from, to: t.to, distance: actual });
            }
        }
    }
    let charge = final_charges(g, cert);
    for e in &profile.vertices {
        let c = &charge[&e.vertex];
        if c.is_negative() {
            violations.push(Violation::NegativeCharge { vertex: e.vertex, charge: c.clone() });
        } else if e.curvature.is_positive() && *c < cert.threshold {
            violations.push(Violation::BelowThreshold { vertex: e.vertex, charge: c.clone() });
        }
    }
    let total: Rational = charge.values().sum();
    if total != profile.total {
        violations.push(Violation::NotConserved);
    }
    CertificateCheck { violations }
}

/// `floor(total / threshold)` for a verified certificate; every vertex of
/// `T_G` ends with at least the threshold, so this bounds `#T_G`.
pub fn bound_from_certificate<S: Surface + ?Sized>(g: &S, cert: &DischargingCertificate) -> Result<BigInt> {
    let check = verify_certificate(g, cert);
    if let Some(v) = check.violations.first() {
        return Err(Error::InvalidArgument(format!("certificate does not verify: {v}")));
    }
    let profile = curvature_profile(g);
    let bound = rational::floor(&(&profile.total / &cert.threshold));
    assert!(
        BigInt::from(profile.t_g.len()) <= bound,
        "{} positively curved vertices exceed the bound {bound}",
        profile.t_g.len()
    );
    Ok(bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{fullerene_c60, grid_example, platonic, ring_patch, Platonic};
    use crate::rational::{frac, int};

    fn ring18() -> crate::planar_map::Patch {
        ring_patch(&[3, 4, 5, 4, 5, 4].repeat(3)).unwrap()
    }

    #[test]
    fn nothing_to_move() {
        let g = grid_example(1, 1).unwrap();
        let d = find_default_certificate(&g).unwrap();
        let cert = d.certificate().unwrap();
        assert!(cert.transfers.is_empty());
        assert!(verify_certificate(&g, cert).is_valid());
        assert_eq!(bound_from_certificate(&g, cert).unwrap(), BigInt::from(264));
    }

    #[test]
    fn bad_vertices_get_topped_up() {
        let p = ring18();
        let prof = curvature_profile(&p);
        assert!(prof.vertices.iter().any(|e| e.curvature == frac(1, 180)));
        assert!(prof.vertices.iter().any(|e| e.curvature == frac(1, 12) + frac(1, 18)));
        let d = find_default_certificate(&p).unwrap();
        let cert = d.certificate().expect("feasible");
        assert!(!cert.transfers.is_empty());
        let check = verify_certificate(&p, cert);
        assert!(check.is_valid(), "{:?}", check.violations);
        let charges = final_charges(&p, cert);
        assert!(prof.t_g.iter().all(|v| charges[v] >= good_threshold()));
        let total: Rational = charges.values().sum();
        assert_eq!(total, prof.total);
    }

    #[test]
    fn demand_beyond_supply() {
        let c = fullerene_c60();
        match find_certificate(&c, 4, &int(1)).unwrap() {
            Discharge::Infeasible { unmet, shortfall } => {
                assert_eq!(unmet.len(), 60);
                assert_eq!(shortfall, int(58));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tampered_certificates() {
        let p = ring18();
        let cert = find_default_certificate(&p).unwrap().certificate().unwrap().clone();

        let mut far = cert.clone();
        far.radius = 0;
        let check = verify_certificate(&p, &far);
        assert!(check.violations.iter().any(|v| matches!(v, Violation::OutOfRadius { .. })));

        let mut greedy = cert.clone();
        let from = greedy.transfers[0].from;
        let left = &final_charges(&p, &cert)[&from];
        greedy.transfers[0].amount += left - frac(1, 264);
        let check = verify_certificate(&p, &greedy);
        assert!(check.violations.contains(&Violation::BelowThreshold { vertex: from, charge: frac(1, 264) }));

        let mut junk = cert;
        junk.transfers.push(Transfer { from: 0, to: 10_000, amount: frac(1, 1000) });
        junk.transfers.push(Transfer { from: 0, to: 1, amount: int(0) });
        let check = verify_certificate(&p, &junk);
        assert!(check.violations.contains(&Violation::UnknownVertex { vertex: 10_000 }));
        assert!(check.violations.contains(&Violation::NonPositiveAmount { from: 0, to: 1 }));
    }

    #[test]
    fn bounds() {
        let t = platonic(Platonic::Tetrahedron);
        let cert = find_certificate(&t, 4, &frac(1, 2)).unwrap().certificate().unwrap().clone();
        assert_eq!(bound_from_certificate(&t, &cert).unwrap(), BigInt::from(4));
    }

    #[test]
    fn json_round_trip() {
        let p = ring18();
        let cert = find_default_certificate(&p).unwrap().certificate().unwrap().clone();
        let back = DischargingCertificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back, cert);
        assert!(cert.to_json().contains("\"threshold\": \"1/132\""));
    }
}
