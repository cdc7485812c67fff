//! Seeded random generation of valid networks with a prescribed leaf and
//! reticulation count.
//!
//! Construction: grow a random rooted binary tree by attaching each new
//! leaf to a uniformly chosen edge, then add each reticulation by picking
//! two distinct edges, subdividing both, and joining the new vertices by a
//! fresh edge oriented so the graph stays acyclic. Acyclicity is kept
//! through integer vertex ranks that always form a topological order: an
//! orientation is accepted when the receiving edge's head ranks strictly
//! above the donating edge's tail, and for any two distinct edges at least
//! one of the two orientations qualifies.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::network::{PhyloNetwork, RawGraph, ValidationMode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("cannot generate a network with {n} leaves and {r} reticulations")]
    InfeasibleParams { n: usize, r: usize },
    #[error("rejection sampling budget exhausted")]
    RetryExhausted,
}

/// Parameters of one generated network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenParams {
    /// Leaf count, at least 2.
    pub n: usize,
    /// Reticulation count.
    pub r: usize,
    pub seed: u64,
}

/// Gap between consecutive ranks after (re)numbering. Subdividing halves a
/// local gap, so ranks are renumbered once a gap is used up.
const RANK_GAP: u64 = 1 << 32;

struct Builder {
    /// Edges as (tail, head) over dense vertex ids.
    edges: Vec<(usize, usize)>,
    /// Per-vertex rank; strictly increasing along every edge.
    rank: Vec<u64>,
}

impl Builder {
    fn cherry() -> Builder {
        Builder {
            // rho -> t1, rho -> t2
            edges: vec![(0, 1), (0, 2)],
            rank: vec![0, RANK_GAP, 2 * RANK_GAP],
        }
    }

    fn new_vertex(&mut self, rank: u64) -> usize {
        self.rank.push(rank);
        self.rank.len() - 1
    }

    /// Re-spaces all ranks, preserving their relative order.
    fn renumber(&mut self) {
        let mut order: Vec<usize> = (0..self.rank.len()).collect();
        order.sort_by_key(|&v| self.rank[v]);
        for (pos, &v) in order.iter().enumerate() {
            self.rank[v] = (pos as u64 + 1) * RANK_GAP;
        }
    }

    /// Splits edge `index` at a fresh vertex whose rank lies strictly
    /// between the edge's endpoints and, when given, strictly above
    /// `floor`'s rank and strictly below `cap`'s rank. The bounds are
    /// vertices so they stay valid across renumbering. The first half
    /// stays at `index`; the second half is appended.
    fn subdivide_bounded(
        &mut self,
        index: usize,
        floor: Option<usize>,
        cap: Option<usize>,
    ) -> usize {
        loop {
            let (tail, head) = self.edges[index];
            let lo = floor
                .map(|v| self.rank[v])
                .map_or(self.rank[tail], |f| f.max(self.rank[tail]));
            let hi = cap
                .map(|v| self.rank[v])
                .map_or(self.rank[head], |c| c.min(self.rank[head]));
            assert!(lo < hi, "subdivision bounds must be strictly ordered");
            if hi - lo < 2 {
                self.renumber();
                continue;
            }
            let w = self.new_vertex(lo + (hi - lo) / 2);
            self.edges[index] = (tail, w);
            self.edges.push((w, head));
            return w;
        }
    }

    /// Attaches a new leaf to edge `index` through a fresh tree vertex.
    fn attach_leaf(&mut self, index: usize) -> usize {
        let w = self.subdivide_bounded(index, None, None);
        let leaf = self.new_vertex(self.rank[w] + 1);
        self.edges.push((w, leaf));
        leaf
    }

    /// Adds one reticulation between two distinct edges: subdivides both
    /// and joins the new vertices, orienting so the ranks keep increasing
    /// along every edge.
    fn add_reticulation(&mut self, a: usize, b: usize) {
        // A path from the receiver's head back to the donor's tail would
        // close a cycle; ranks rule one out when head outranks tail. For
        // distinct edges at least one orientation satisfies this.
        let (donor, receiver) = if self.rank[self.edges[b].1] > self.rank[self.edges[a].0] {
            (a, b)
        } else {
            (b, a)
        };
        let receiver_head = self.edges[receiver].1;
        debug_assert!(self.rank[receiver_head] > self.rank[self.edges[donor].0]);

        // Keep the donor's new vertex strictly below the receiver's head,
        // then the receiver's new vertex strictly above the donor's; the
        // connector then runs upward in rank.
        let w_out = self.subdivide_bounded(donor, None, Some(receiver_head));
        let w_in = self.subdivide_bounded(receiver, Some(w_out), None);
        self.edges.push((w_out, w_in));
    }
}

/// Deterministically generates a valid strictly binary network with exactly
/// `n` labeled leaves and `r` reticulations. Identical parameters always
/// produce byte-identical networks.
pub fn random_network(params: &GenParams) -> Result<PhyloNetwork, GenError> {
    if params.n < 2 {
        return Err(GenError::InfeasibleParams {
            n: params.n,
            r: params.r,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut b = Builder::cherry();
    let mut leaves = vec![1usize, 2usize];

    for _ in 2..params.n {
        let e = rng.gen_range(0..b.edges.len());
        leaves.push(b.attach_leaf(e));
    }

    let mut budget: u64 = 1000 * (params.r as u64 + 1);
    let mut added = 0usize;
    while added < params.r {
        let a = rng.gen_range(0..b.edges.len());
        let c = rng.gen_range(0..b.edges.len());
        if a == c {
            budget = budget.checked_sub(1).ok_or(GenError::RetryExhausted)?;
            continue;
        }
        b.add_reticulation(a, c);
        added += 1;
    }

    let mut raw = RawGraph::new();
    let name = |v: usize| -> String {
        if v == 0 {
            "rho".to_string()
        } else if let Some(pos) = leaves.iter().position(|&l| l == v) {
            format!("t{}", pos + 1)
        } else {
            format!("v{v}")
        }
    };
    for &(t, h) in &b.edges {
        raw.add_edge(&name(t), &name(h));
    }
    let net = raw
        .validate(ValidationMode::Strict)
        .expect("generated networks satisfy the axioms");
    debug_assert_eq!(net.reticulation_count(), params.r);
    Ok(net)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::write_network;

    #[test]
    fn two_leaves_no_reticulation_is_the_cherry() {
        let net = random_network(&GenParams {
            n: 2,
            r: 0,
            seed: 7,
        })
        .unwrap();
        assert_eq!(net.vertex_count(), 3);
        assert_eq!(net.edge_count(), 2);
        assert_eq!(net.tier().value(), 0);
    }

    #[test]
    fn trees_have_tier_zero() {
        for n in 2..8 {
            let net = random_network(&GenParams { n, r: 0, seed: 11 }).unwrap();
            assert_eq!(net.tier().value(), 0);
            assert_eq!(net.leaf_labels().len(), n);
            assert_eq!(net.edge_count(), 2 * n - 2);
        }
    }

    #[test]
    fn reticulation_and_leaf_counts_are_exact() {
        for (n, r, seed) in [(3, 2, 1u64), (5, 8, 42), (4, 3, 9)] {
            let net = random_network(&GenParams { n, r, seed }).unwrap();
            assert_eq!(net.leaf_labels().len(), n);
            assert_eq!(net.reticulation_count(), r);
            assert_eq!(net.tier().value(), r);
            assert_eq!(net.edge_count(), 2 * n - 2 + 3 * r);
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let p = GenParams {
            n: 5,
            r: 8,
            seed: 1234,
        };
        let a = random_network(&p).unwrap();
        let b = random_network(&p).unwrap();
        assert_eq!(write_network(&a), write_network(&b));
    }

    #[test]
    fn distinct_seeds_usually_differ() {
        let a = random_network(&GenParams {
            n: 6,
            r: 4,
            seed: 1,
        })
        .unwrap();
        let b = random_network(&GenParams {
            n: 6,
            r: 4,
            seed: 2,
        })
        .unwrap();
        assert_ne!(write_network(&a), write_network(&b));
    }

    #[test]
    fn single_leaf_is_infeasible() {
        assert!(matches!(
            random_network(&GenParams {
                n: 1,
                r: 0,
                seed: 0
            }),
            Err(GenError::InfeasibleParams { .. })
        ));
    }

    #[test]
    fn deep_reticulation_stacks_stay_acyclic() {
        // many reticulations on a tiny tree exercises rank renumbering
        let net = random_network(&GenParams {
            n: 2,
            r: 200,
            seed: 3,
        })
        .unwrap();
        assert_eq!(net.reticulation_count(), 200);
    }
}
