mod common;

use proptest::prelude::*;

use planar_curvature::automorphism::surfaces_isomorphic;
use planar_curvature::curvature::{curvature_profile, Pattern};
use planar_curvature::discharging::{find_certificate, verify_certificate, Discharge};
use planar_curvature::generators::{antiprism, grid_example, prism, ring_patch};
use planar_curvature::glue::{glue_patches, split_along_cycle, GlueSpec};
use planar_curvature::io::{parse_document, read_surface, write_text, MapDocument};
use planar_curvature::pattern_tables::{family_curvature, match_pattern, table, Sign};
use planar_curvature::planar_map::Surface;
use planar_curvature::rational::{frac, int, Rational};
use planar_curvature::validate::validate_tessellation;

use common::{nonnegative_patterns, pattern_curvature};

fn as_rational((p, q): (i128, i128)) -> Rational {
    frac(p as i64, q as i64)
}

#[test]
fn tables_are_complete_up_to_200() {
    let found = nonnegative_patterns(200, 6);
    assert!(found.contains(&vec![3, 3, 3, 3, 3, 3]));
    for p in &found {
        let want = pattern_curvature(p);
        let sign = if want.0 > 0 { Sign::Positive } else { Sign::Zero };
        let h = match_pattern(&Pattern::new(p.clone()).unwrap()).unwrap_or_else(|| panic!("{p:?} unmatched"));
        assert_eq!(h.sign, sign, "{p:?}");
    }
    // conversely every family member up to 200 is one of the patterns above
    let set: std::collections::HashSet<&Vec<usize>> = found.iter().collect();
    for sign in [Sign::Positive, Sign::Zero] {
        for f in table(sign) {
            for k in f.lo()..=f.hi().unwrap_or(200).min(200) {
                let p = f.instantiate(k).unwrap();
                assert!(set.contains(&p.degrees().to_vec()), "{p} outside the nonnegative set");
            }
        }
    }
}

#[test]
fn family_instantiation_is_consistent() {
    for sign in [Sign::Positive, Sign::Zero] {
        for f in table(sign) {
            for k in f.lo()..=f.hi().unwrap_or(10_000) {
                let p = f.instantiate(k).unwrap();
                let want = as_rational(pattern_curvature(p.degrees()));
                assert_eq!(family_curvature(f, k).unwrap(), want, "{p}");
                assert_eq!(p.curvature(), want, "{p}");
            }
        }
    }
}

#[test]
fn family_lengths_are_bounded() {
    assert!(table(Sign::Positive).iter().all(|f| f.len() <= 5));
    assert!(table(Sign::Zero).iter().all(|f| f.len() <= 6));
}

fn ring18() -> planar_curvature::planar_map::Patch {
    ring_patch(&[3, 4, 5, 4, 5, 4].repeat(3)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_patterns_match_by_sign(mut p in prop::collection::vec(3usize..=200, 3..=6)) {
        p.sort_unstable();
        let (num, _) = pattern_curvature(&p);
        let got = match_pattern(&Pattern::new(p.clone()).unwrap());
        match num.signum() {
            -1 => prop_assert!(got.is_none()),
            0 => prop_assert_eq!(got.map(|h| h.sign), Some(Sign::Zero)),
            _ => prop_assert_eq!(got.map(|h| h.sign), Some(Sign::Positive)),
        }
    }

    #[test]
    fn pattern_curvature_matches_oracle(p in prop::collection::vec(3usize..=500, 3..=8)) {
        let lib = Pattern::new(p.clone()).unwrap().curvature();
        prop_assert_eq!(lib, as_rational(pattern_curvature(&p)));
    }

    #[test]
    fn prism_invariants(n in 3usize..80) {
        let m = prism(n).unwrap();
        prop_assert_eq!((m.vertex_count(), m.edge_count(), m.face_count()), (2 * n, 3 * n, n + 2));
        prop_assert!(validate_tessellation(&m).is_valid());
        let prof = curvature_profile(&m);
        prop_assert_eq!(prof.total, int(2));
        prop_assert!(prof.vertices.iter().all(|e| e.curvature == frac(1, n as i64)));
    }

    #[test]
    fn antiprism_invariants(n in 3usize..80) {
        let m = antiprism(n).unwrap();
        prop_assert_eq!((m.vertex_count(), m.edge_count(), m.face_count()), (2 * n, 4 * n, 2 * n + 2));
        prop_assert!(validate_tessellation(&m).is_valid());
        let prof = curvature_profile(&m);
        prop_assert_eq!(prof.total, int(2));
        prop_assert!(prof.vertices.iter().all(|e| e.curvature == frac(1, n as i64)));
    }

    #[test]
    fn grid_invariants(a in 1usize..12, b in 1usize..12) {
        let g = grid_example(a, b).unwrap();
        let m = 2 * (a + b + 2);
        prop_assert!(validate_tessellation(&g).is_valid());
        let prof = curvature_profile(&g);
        prop_assert_eq!(prof.total, int(2));
        prop_assert_eq!(prof.t_g.len(), m + 4);
        prop_assert_eq!((0..g.face_count()).filter(|&f| g.face_degree(f) == m).count(), 1);
        prop_assert_eq!(g.vertex_count(), (a + 3) * (b + 3) - 4);
    }

    #[test]
    fn io_round_trips(n in 3usize..40, anti in any::<bool>(), json in any::<bool>()) {
        let m = if anti { antiprism(n).unwrap() } else { prism(n).unwrap() };
        let doc = MapDocument::from_surface(&m, &[]);
        let text = if json { doc.to_json() } else { doc.to_text() };
        let back = parse_document(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        let s = back.build().unwrap();
        prop_assert_eq!(s.map().normalized_faces(), m.normalized_faces());
        let again = read_surface(&write_text(&s)).unwrap();
        prop_assert_eq!(again.map().normalized_faces(), m.normalized_faces());
    }

    #[test]
    fn split_then_glue_is_identity(n in 3usize..25, anti in any::<bool>()) {
        let m = if anti { antiprism(n).unwrap() } else { prism(n).unwrap() };
        let cycle: Vec<u64> = (0..n as u64).collect();
        let (a, b) = split_along_cycle(&m, &cycle).unwrap();
        let corr = cycle.iter().map(|&l| (l, l)).collect();
        let glued = glue_patches(&GlueSpec { left: a, right: b, correspondence: corr }).unwrap();
        prop_assert!(glued.surface.is_closed());
        prop_assert!(surfaces_isomorphic(&glued.surface, &m));
    }

    #[test]
    fn split_sides_partition_the_faces(n in 3usize..25, step in 0u64..3) {
        let m = prism(n).unwrap();
        // the rim of 1, 2 or 3 adjacent squares
        let k = step + 1;
        let n64 = n as u64;
        let mut cycle: Vec<u64> = (0..=k.min(n64 - 1)).collect();
        cycle.extend((0..=k.min(n64 - 1)).rev().map(|i| n64 + i));
        if k >= n64 {
            return Ok(());
        }
        let (a, b) = split_along_cycle(&m, &cycle).unwrap();
        prop_assert_eq!(a.boundary_faces().len(), 1);
        prop_assert_eq!(b.boundary_faces().len(), 1);
        prop_assert_eq!(a.inner_faces().len() + b.inner_faces().len(), m.face_count());
        let squares = a.inner_faces().len().min(b.inner_faces().len());
        prop_assert_eq!(squares as u64, k);
    }

    #[test]
    fn discharging_is_monotone(q in 20i64..600) {
        let p = ring18();
        let threshold = frac(1, q);
        let feasible: Vec<bool> = (0..=5)
            .map(|r| matches!(find_certificate(&p, r, &threshold).unwrap(), Discharge::Feasible(_)))
            .collect();
        for w in feasible.windows(2) {
            prop_assert!(!w[0] || w[1], "feasible at a radius but not the next: {feasible:?}");
        }
        // a lower demand never hurts
        if feasible[4] {
            prop_assert!(matches!(find_certificate(&p, 4, &frac(1, q + 1)).unwrap(), Discharge::Feasible(_)));
        }
    }

    #[test]
    fn discharging_conserves_curvature(q in 20i64..600, r in 1usize..=5) {
        let p = ring18();
        if let Discharge::Feasible(cert) = find_certificate(&p, r, &frac(1, q)).unwrap() {
            prop_assert!(verify_certificate(&p, &cert).is_valid());
            let prof = curvature_profile(&p);
            let mut charge: std::collections::HashMap<u64, Rational> =
                prof.vertices.iter().map(|e| (e.vertex, e.curvature.clone())).collect();
            for t in &cert.transfers {
                prop_assert!(t.amount > int(0));
                *charge.get_mut(&t.from).unwrap() -= &t.amount;
                *charge.get_mut(&t.to).unwrap() += &t.amount;
            }
            let total: Rational = charge.values().sum();
            prop_assert_eq!(total, prof.total);
            for v in &prof.t_g {
                prop_assert!(charge[v] >= frac(1, q));
            }
            prop_assert!(charge.values().all(|c| *c >= int(0)));
        }
    }
}
