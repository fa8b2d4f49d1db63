//! Dinic max-flow over arbitrary-precision integer capacities.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug)]
struct Arc {
    to: usize,
    cap: BigInt,
}

#[derive(Clone, Debug, Default)]
pub struct FlowGraph {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
    original: Vec<BigInt>,
}

impl FlowGraph {
    pub fn new(nodes: usize) -> Self {
        FlowGraph { arcs: Vec::new(), out: vec![Vec::new(); nodes], original: Vec::new() }
    }

    pub fn node_count(&self) -> usize {
        self.out.len()
    }

    /// Adds an arc and returns its id.
    pub fn add_arc(&mut self, from: usize, to: usize, cap: BigInt) -> usize {
        assert!(!cap.is_negative(), "capacities are nonnegative");
        let id = self.arcs.len();
        self.arcs.push(Arc { to, cap: cap.clone() });
        self.arcs.push(Arc { to: from, cap: BigInt::zero() });
        self.out[from].push(id);
        self.out[to].push(id + 1);
        self.original.push(cap);
        id
    }

    /// Flow currently carried by arc `id`.
    pub fn flow(&self, id: usize) -> BigInt {
        &self.original[id / 2] - &self.arcs[id].cap
    }

    fn levels(&self, s: usize, t: usize) -> Option<Vec<usize>> {
        let mut level = vec![usize::MAX; self.node_count()];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.out[u] {
                let arc = &self.arcs[a];
                if arc.cap.is_positive() && level[arc.to] == usize::MAX {
                    level[arc.to] = level[u] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        (level[t] != usize::MAX).then_some(level)
    }

    fn push(&mut self, u: usize, t: usize, limit: &BigInt, level: &[usize], next: &mut [usize]) -> BigInt {
        if u == t {
            return limit.clone();
        }
        while next[u] < self.out[u].len() {
            let a = self.out[u][next[u]];
            let (to, cap) = (self.arcs[a].to, self.arcs[a].cap.clone());
            if cap.is_positive() && level[to] == level[u] + 1 {
                let got = self.push(to, t, if &cap < limit { &cap } else { limit }, level, next);
                if got.is_positive() {
                    self.arcs[a].cap -= &got;
                    self.arcs[a ^ 1].cap += &got;
                    return got;
                }
            }
            next[u] += 1;
        }
        BigInt::zero()
    }

    /// Maximum flow value from `s` to `t`; arc flows are left in place.
    pub fn max_flow(&mut self, s: usize, t: usize) -> BigInt {
        let mut total = BigInt::zero();
        let unbounded: BigInt = self.original.iter().sum::<BigInt>() + 1;
        while let Some(level) = self.levels(s, t) {
            let mut next = vec![0; self.node_count()];
            loop {
                let got = self.push(s, t, &unbounded, &level, &mut next);
                if got.is_zero() {
                    break;
                }
                total += got;
            }
        }
        total
    }
}
