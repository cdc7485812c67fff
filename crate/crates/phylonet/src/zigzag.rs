//! Maximal zig-zag trail decomposition.
//!
//! A zig-zag trail is a connected subgraph whose edges can be ordered so
//! that consecutive edges alternately share a head or share a tail. Every
//! network partitions uniquely into maximal zig-zag trails, which come in
//! four shapes: crowns (closed, even length >= 4), N-fences (open, odd
//! length), M-fences (open, even, terminal edges attached through shared
//! tails) and W-fences (open, even, terminal edges attached through shared
//! heads).
//!
//! The decomposition is computed in one linear pass: each edge has at most
//! one "head partner" (the other in-edge at its head) and at most one
//! "tail partner" (the other out-edge at its tail), so the trails are
//! exactly the connected components of the partner relation, which are
//! simple paths or even cycles.

use std::fmt;

use crate::network::PhyloNetwork;

/// The four shapes a maximal zig-zag trail can take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TrailType {
    Crown,
    NFence,
    MFence,
    WFence,
}

impl fmt::Display for TrailType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TrailType::Crown => "crown",
            TrailType::NFence => "n-fence",
            TrailType::MFence => "m-fence",
            TrailType::WFence => "w-fence",
        };
        f.write_str(s)
    }
}

/// How two consecutive trail edges are attached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Link {
    SharedTail,
    SharedHead,
}

impl Link {
    fn flip(self) -> Link {
        match self {
            Link::SharedTail => Link::SharedHead,
            Link::SharedHead => Link::SharedTail,
        }
    }
}

/// One maximal zig-zag trail: an ordered edge-index sequence plus its type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trail {
    edges: Vec<usize>,
    trail_type: TrailType,
    /// Attachment of the first consecutive pair; alternates along the trail.
    first_link: Option<Link>,
}

impl Trail {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Edge indices in canonical trail order.
    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn trail_type(&self) -> TrailType {
        self.trail_type
    }

    pub fn is_closed(&self) -> bool {
        self.trail_type == TrailType::Crown
    }

    /// First and last edge of a fence; `None` for crowns.
    pub fn terminal_edges(&self) -> Option<(usize, usize)> {
        if self.is_closed() {
            None
        } else {
            Some((
                self.edges[0],
                *self.edges.last().expect("trails are nonempty"),
            ))
        }
    }
}

/// Recomputes the type of a trail from its shape: closed trails are crowns,
/// odd open trails N-fences, and even open trails M- or W-fences depending
/// on whether their terminal edges attach through a shared tail or head.
pub fn classify_trail(trail: &Trail) -> TrailType {
    if trail.is_closed() {
        return TrailType::Crown;
    }
    if trail.len() % 2 == 1 {
        return TrailType::NFence;
    }
    match trail.first_link {
        Some(Link::SharedTail) => TrailType::MFence,
        Some(Link::SharedHead) => TrailType::WFence,
        None => unreachable!("even fences have at least one link"),
    }
}

/// The unique partition of a network's edges into maximal zig-zag trails.
#[derive(Debug, Clone)]
pub struct TrailDecomposition {
    trails: Vec<Trail>,
    /// For each canonical edge index: (trail position in `trails`, offset).
    edge_to_trail: Vec<(usize, usize)>,
    edge_visits: usize,
}

impl TrailDecomposition {
    pub fn trails(&self) -> &[Trail] {
        &self.trails
    }

    pub fn trail_count(&self) -> usize {
        self.trails.len()
    }

    /// The trail containing `edge` and the edge's offset within it.
    pub fn trail_of_edge(&self, edge: usize) -> (usize, usize) {
        self.edge_to_trail[edge]
    }

    /// Multiset of (type, size), sorted.
    pub fn signature(&self) -> Vec<(TrailType, usize)> {
        let mut sig: Vec<(TrailType, usize)> = self
            .trails
            .iter()
            .map(|t| (t.trail_type(), t.len()))
            .collect();
        sig.sort();
        sig
    }

    pub fn w_fence_count(&self) -> usize {
        self.trails
            .iter()
            .filter(|t| t.trail_type() == TrailType::WFence)
            .count()
    }

    /// Number of edge touches made while decomposing; linear in the edge
    /// count by construction, exposed for complexity assertions in tests.
    pub fn edge_visits(&self) -> usize {
        self.edge_visits
    }
}

/// Partner edge ids for one edge.
#[derive(Clone, Copy)]
struct Partners {
    at_head: Option<usize>,
    at_tail: Option<usize>,
}

impl Partners {
    fn through(&self, link: Link) -> Option<usize> {
        match link {
            Link::SharedTail => self.at_tail,
            Link::SharedHead => self.at_head,
        }
    }
}

fn partner_of(slot: &[usize], me: usize) -> Option<usize> {
    match slot {
        [a, b] => Some(if *a == me { *b } else { *a }),
        _ => None,
    }
}

/// Computes the maximal zig-zag trail decomposition of `net`.
///
/// Deterministic: trails are ordered by their smallest contained edge index;
/// a fence is read starting from whichever of its terminal edges has the
/// smaller index, and a crown starts at its smallest edge, proceeding first
/// to that edge's shared-tail neighbor.
pub fn decompose(net: &PhyloNetwork) -> TrailDecomposition {
    let m = net.edge_count();
    let mut visits = 0usize;

    let partners: Vec<Partners> = net
        .edges()
        .iter()
        .map(|e| {
            visits += 1;
            Partners {
                at_head: partner_of(net.in_edges(e.head), e.index),
                at_tail: partner_of(net.out_edges(e.tail), e.index),
            }
        })
        .collect();

    let mut claimed = vec![false; m];
    let mut trails: Vec<Trail> = Vec::new();

    for seed in 0..m {
        if claimed[seed] {
            continue;
        }
        // Walk tail-ward from the seed. Either we fall off a free slot (the
        // component is a path and `cur` is a terminal edge) or we return to
        // the seed (the component is a cycle, i.e. a crown).
        let mut cur = seed;
        let mut leave = Link::SharedTail;
        let mut closed = false;
        loop {
            visits += 1;
            match partners[cur].through(leave) {
                None => break,
                Some(e) if e == seed => {
                    closed = true;
                    break;
                }
                Some(e) => {
                    cur = e;
                    leave = leave.flip();
                }
            }
        }

        // Collect the trail. For a crown, start back at the seed (its
        // smallest edge) and move tail-ward; for a fence, start at the
        // terminal edge found above and move through its attached slot.
        let (first, mut out_link) = if closed {
            (seed, Link::SharedTail)
        } else {
            (cur, leave.flip())
        };

        let mut edges = vec![first];
        claimed[first] = true;
        let mut first_link: Option<Link> = None;
        let mut walker = first;
        loop {
            visits += 1;
            let Some(e) = partners[walker].through(out_link) else {
                break;
            };
            if claimed[e] {
                break; // the crown cycle has wrapped around
            }
            first_link.get_or_insert(out_link);
            edges.push(e);
            claimed[e] = true;
            walker = e;
            out_link = out_link.flip();
        }

        // Canonical fence orientation: first edge is the smaller terminal.
        let len = edges.len();
        if !closed && *edges.last().expect("nonempty") < edges[0] {
            edges.reverse();
            if len % 2 == 1 {
                first_link = first_link.map(Link::flip);
            }
        }

        let trail_type = if closed {
            TrailType::Crown
        } else if len % 2 == 1 {
            TrailType::NFence
        } else {
            match first_link {
                Some(Link::SharedTail) => TrailType::MFence,
                Some(Link::SharedHead) => TrailType::WFence,
                None => unreachable!("even fences have at least two edges"),
            }
        };

        trails.push(Trail {
            edges,
            trail_type,
            first_link,
        });
    }

    trails.sort_by_key(|t| *t.edges.iter().min().expect("trails are nonempty"));

    let mut edge_to_trail = vec![(0usize, 0usize); m];
    for (ti, t) in trails.iter().enumerate() {
        for (pos, &e) in t.edges.iter().enumerate() {
            edge_to_trail[e] = (ti, pos);
        }
    }

    TrailDecomposition {
        trails,
        edge_to_trail,
        edge_visits: visits,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{RawGraph, ValidationMode};

    fn net(edges: &[(&str, &str)]) -> PhyloNetwork {
        let mut g = RawGraph::new();
        for &(t, h) in edges {
            g.add_edge(t, h);
        }
        g.validate(ValidationMode::Strict).unwrap()
    }

    fn assert_partition(net: &PhyloNetwork, d: &TrailDecomposition) {
        let mut seen = vec![0usize; net.edge_count()];
        for t in d.trails() {
            for &e in t.edges() {
                seen[e] += 1;
            }
        }
        assert!(seen.iter().all(|&c| c == 1), "trails must partition edges");
    }

    #[test]
    fn single_edge_is_n_fence() {
        let n = net(&[("rho", "a")]);
        let d = decompose(&n);
        assert_eq!(d.trail_count(), 1);
        assert_eq!(d.trails()[0].trail_type(), TrailType::NFence);
        assert_eq!(d.trails()[0].len(), 1);
    }

    #[test]
    fn binary_tree_decomposes_into_cherries() {
        // ((a,b),(c,d)): 3 internal vertices incl. root, each an M-fence of 2
        let n = net(&[
            ("r", "u"),
            ("r", "v"),
            ("u", "a"),
            ("u", "b"),
            ("v", "c"),
            ("v", "d"),
        ]);
        let d = decompose(&n);
        assert_eq!(d.trail_count(), 3);
        for t in d.trails() {
            assert_eq!(t.trail_type(), TrailType::MFence);
            assert_eq!(t.len(), 2);
        }
        assert_partition(&n, &d);
    }

    #[test]
    fn shared_parents_make_a_crown() {
        // two reticulations sharing both parents
        let n = net(&[
            ("r", "t1"),
            ("r", "t2"),
            ("t1", "r1"),
            ("t1", "r2"),
            ("t2", "r1"),
            ("t2", "r2"),
            ("r1", "x1"),
            ("r2", "x2"),
        ]);
        let d = decompose(&n);
        let sig = d.signature();
        assert!(sig.contains(&(TrailType::Crown, 4)));
        assert_eq!(
            sig,
            vec![
                (TrailType::Crown, 4),
                (TrailType::NFence, 1),
                (TrailType::NFence, 1),
                (TrailType::MFence, 2),
            ]
        );
        assert_partition(&n, &d);
        // crown starts at its smallest edge (index 2)
        let crown = d
            .trails()
            .iter()
            .find(|t| t.trail_type() == TrailType::Crown)
            .unwrap();
        assert_eq!(crown.edges()[0], 2);
        assert_eq!(classify_trail(crown), TrailType::Crown);
    }

    #[test]
    fn two_edge_shared_head_is_w_fence() {
        // stacked reticulations: both parents of r2 have out-degree 1
        let n = net(&[
            ("rho", "a"),
            ("rho", "b"),
            ("a", "r1"),
            ("a", "c"),
            ("b", "r1"),
            ("b", "d"),
            ("c", "r0"),
            ("c", "x1"),
            ("d", "r0"),
            ("d", "x2"),
            ("r1", "r2"),
            ("r0", "r2"),
            ("r2", "x3"),
        ]);
        let d = decompose(&n);
        let w: Vec<&Trail> = d
            .trails()
            .iter()
            .filter(|t| t.trail_type() == TrailType::WFence)
            .collect();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].len(), 2);
        assert_eq!(w[0].edges(), &[10, 11]);
        assert_eq!(d.w_fence_count(), 1);
        assert_partition(&n, &d);
    }

    #[test]
    fn two_edge_shared_tail_is_m_fence() {
        let n = net(&[("r", "a"), ("r", "b")]);
        let d = decompose(&n);
        assert_eq!(d.trails()[0].trail_type(), TrailType::MFence);
        assert_eq!(d.trails()[0].terminal_edges(), Some((0, 1)));
    }

    #[test]
    fn parity_constraints_hold() {
        let n = net(&[
            ("rho", "a"),
            ("rho", "b"),
            ("a", "r1"),
            ("a", "c"),
            ("b", "r1"),
            ("b", "d"),
            ("c", "r0"),
            ("c", "x1"),
            ("d", "r0"),
            ("d", "x2"),
            ("r1", "r2"),
            ("r0", "r2"),
            ("r2", "x3"),
        ]);
        for t in decompose(&n).trails() {
            match t.trail_type() {
                TrailType::Crown => assert!(t.len() >= 4 && t.len() % 2 == 0),
                TrailType::NFence => assert_eq!(t.len() % 2, 1),
                TrailType::MFence | TrailType::WFence => assert_eq!(t.len() % 2, 0),
            }
        }
    }

    #[test]
    fn positions_in_edge_lookup_match() {
        let n = net(&[("r", "a"), ("r", "b")]);
        let d = decompose(&n);
        for (ti, t) in d.trails().iter().enumerate() {
            for (pos, &e) in t.edges().iter().enumerate() {
                assert_eq!(d.trail_of_edge(e), (ti, pos));
            }
        }
    }
}
