//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use planar_curvature::planar_map::PlanarMap;

/// Exact `1 - n/2 + sum 1/d` as a reduced `(numerator, denominator)`.
pub fn pattern_curvature(degrees: &[usize]) -> (i128, i128) {
    let den = degrees.iter().fold(2i128, |l, &d| lcm(l, d as i128));
    let num = den - degrees.len() as i128 * den / 2 + degrees.iter().map(|&d| den / d as i128).sum::<i128>();
    let g = gcd(num.abs(), den);
    (num / g, den / g)
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: i128, b: i128) -> i128 {
    a / gcd(a, b) * b
}

/// Every sorted pattern with entries in `3..=max` and length `3..=len` whose
/// curvature is nonnegative.
pub fn nonnegative_patterns(max: usize, len: usize) -> Vec<Vec<usize>> {
    fn walk(prefix: &mut Vec<usize>, max: usize, len: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() >= 3 && pattern_curvature(prefix).0 >= 0 {
            out.push(prefix.clone());
        }
        if prefix.len() == len {
            return;
        }
        let start = prefix.last().copied().unwrap_or(3);
        for d in start..=max {
            // the best completion of any length repeats d; once that is
            // negative, larger d only gets worse
            let reachable = ((prefix.len() + 1).max(3)..=len).any(|n| {
                let mut full = prefix.clone();
                full.resize(n, d);
                pattern_curvature(&full).0 >= 0
            });
            if !reachable {
                break;
            }
            prefix.push(d);
            walk(prefix, max, len, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    walk(&mut Vec::new(), max, len, &mut out);
    out
}

fn adjacency(m: &PlanarMap) -> Vec<HashSet<usize>> {
    (0..m.vertex_count()).map(|v| m.neighbors(v).collect()).collect()
}

fn face_sets(m: &PlanarMap) -> HashSet<BTreeSet<usize>> {
    (0..m.face_count()).map(|f| m.face_vertices(f).into_iter().collect()).collect()
}

/// Vertex bijections preserving adjacency and sending every face's vertex
/// set onto a face's vertex set, by plain backtracking.
pub fn brute_force_automorphisms(m: &PlanarMap) -> BTreeSet<Vec<usize>> {
    let n = m.vertex_count();
    assert!(n <= 16, "brute force is meant for small maps");
    let adj = adjacency(m);
    let faces = face_sets(m);
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut out = BTreeSet::new();

    fn extend(
        v: usize,
        adj: &[HashSet<usize>],
        faces: &HashSet<BTreeSet<usize>>,
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut BTreeSet<Vec<usize>>,
    ) {
        let n = adj.len();
        if v == n {
            if faces.iter().all(|f| faces.contains(&f.iter().map(|&u| image[u]).collect())) {
                out.insert(image.clone());
            }
            return;
        }
        for w in 0..n {
            if used[w] || adj[w].len() != adj[v].len() {
                continue;
            }
            let consistent = (0..v).all(|u| adj[v].contains(&u) == adj[w].contains(&image[u]));
            if !consistent {
                continue;
            }
            image[v] = w;
            used[w] = true;
            extend(v + 1, adj, faces, image, used, out);
            used[w] = false;
            image[v] = usize::MAX;
        }
    }

    extend(0, &adj, &faces, &mut image, &mut used, &mut out);
    out
}
