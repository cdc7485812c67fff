//! Reticulation (tier) and level minimization over support networks.
//!
//! The minimum tier is attained by any Minimum-family selection and equals
//! the number of W-fences in the trail decomposition, so it is found in
//! linear time. Level minimization searches the Minimal family (exact) or
//! the Minimum family (heuristic: fast, but minimizing reticulations does
//! not always minimize the level); both searches are exponential and sit
//! behind an explicit search-space guard.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::families::{
    count_for_decomposition, enumerate_for_decomposition, enumerate_trail_options, FamilyKind,
};
use crate::network::{GraphError, PhyloNetwork, VertexId};
use crate::subgraph::{tier, EdgeSelection, SubgraphView};
use crate::zigzag::{decompose, TrailDecomposition};

#[derive(Debug, Clone, Error)]
pub enum OptimizeError {
    #[error("search space of {family_size} candidates exceeds the limit {limit}")]
    SearchSpaceTooLarge { family_size: BigUint, limit: u64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A maximal cut-edge-free connected subgraph of a view. Bridges form
/// singleton-edge blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<usize>,
}

impl Block {
    /// `|E| - |V| + 1` of the block.
    pub fn reticulation_count(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    pub fn is_bridge(&self) -> bool {
        self.edges.len() == 1
    }
}

/// Partitions the edges of a connected view into blocks, via bridge-finding
/// depth-first search on the underlying undirected graph.
pub fn blocks(view: &SubgraphView<'_>) -> Result<Vec<Block>, GraphError> {
    if !view.is_connected() {
        return Err(GraphError::Disconnected);
    }
    let net = view.network();
    let n = net.vertex_count();

    // Iterative bridge search (Tarjan low-links), tracking the edge used to
    // enter each vertex so the reverse traversal of that edge is skipped.
    let mut disc = vec![0u32; n];
    let mut low = vec![0u32; n];
    let mut visited = vec![false; n];
    let mut is_bridge = vec![false; net.edge_count()];
    let mut timer = 1u32;

    struct Frame {
        vertex: usize,
        entry_edge: Option<usize>,
        iter_pos: usize,
    }

    let incident = |v: usize| -> Vec<usize> {
        let vid = VertexId(v as u32);
        net.out_edges(vid)
            .iter()
            .chain(net.in_edges(vid))
            .copied()
            .filter(|&e| view.contains_edge(e))
            .collect()
    };

    for start in view.vertices() {
        let s = start.index();
        if visited[s] {
            continue;
        }
        visited[s] = true;
        disc[s] = timer;
        low[s] = timer;
        timer += 1;
        let mut stack = vec![Frame {
            vertex: s,
            entry_edge: None,
            iter_pos: 0,
        }];
        while let Some(frame) = stack.last_mut() {
            let v = frame.vertex;
            let edges = incident(v);
            if frame.iter_pos >= edges.len() {
                let entry = frame.entry_edge;
                stack.pop();
                if let Some(e) = entry {
                    let edge = net.edge(e);
                    let parent = if edge.tail.index() == v {
                        edge.head.index()
                    } else {
                        edge.tail.index()
                    };
                    if low[v] < low[parent] {
                        low[parent] = low[v];
                    }
                    if low[v] > disc[parent] {
                        is_bridge[e] = true;
                    }
                }
                continue;
            }
            let e = edges[frame.iter_pos];
            frame.iter_pos += 1;
            if frame.entry_edge == Some(e) {
                continue;
            }
            let edge = net.edge(e);
            let w = if edge.tail.index() == v {
                edge.head.index()
            } else {
                edge.tail.index()
            };
            if visited[w] {
                if disc[w] < low[v] {
                    low[v] = disc[w];
                }
            } else {
                visited[w] = true;
                disc[w] = timer;
                low[w] = timer;
                timer += 1;
                stack.push(Frame {
                    vertex: w,
                    entry_edge: Some(e),
                    iter_pos: 0,
                });
            }
        }
    }

    // Flood over non-bridge edges; each component is one block, each bridge
    // its own.
    let mut edge_block = vec![usize::MAX; net.edge_count()];
    let mut result: Vec<Block> = Vec::new();
    for seed in view.edge_indices() {
        if edge_block[seed] != usize::MAX {
            continue;
        }
        let block_id = result.len();
        let mut block_edges = Vec::new();
        if is_bridge[seed] {
            edge_block[seed] = block_id;
            block_edges.push(seed);
        } else {
            let mut queue = vec![seed];
            edge_block[seed] = block_id;
            while let Some(e) = queue.pop() {
                block_edges.push(e);
                let edge = net.edge(e);
                for v in [edge.tail, edge.head] {
                    for &f in net.out_edges(v).iter().chain(net.in_edges(v)) {
                        if view.contains_edge(f)
                            && !is_bridge[f]
                            && edge_block[f] == usize::MAX
                        {
                            edge_block[f] = block_id;
                            queue.push(f);
                        }
                    }
                }
            }
        }
        block_edges.sort_unstable();
        let mut vertices: Vec<VertexId> = block_edges
            .iter()
            .flat_map(|&e| {
                let edge = net.edge(e);
                [edge.tail, edge.head]
            })
            .collect();
        vertices.sort_unstable();
        vertices.dedup();
        result.push(Block {
            vertices,
            edges: block_edges,
        });
    }
    result.sort_by_key(|b| b.edges[0]);
    Ok(result)
}

/// Maximum block reticulation count of a connected view; 0 for trees.
pub fn level(view: &SubgraphView<'_>) -> Result<usize, GraphError> {
    Ok(blocks(view)?
        .iter()
        .map(Block::reticulation_count)
        .max()
        .unwrap_or(0))
}

/// A level-minimization answer: the chosen selection, its level and block
/// decomposition, and whether the value is proven optimal.
#[derive(Debug, Clone)]
pub struct LevelResult {
    pub selection: EdgeSelection,
    pub level: usize,
    pub blocks: Vec<Block>,
    pub optimal: bool,
}

/// Guard for the exponential level searches.
#[derive(Debug, Clone, Copy)]
pub struct SearchLimit {
    pub max_candidates: u64,
}

impl Default for SearchLimit {
    fn default() -> Self {
        SearchLimit {
            max_candidates: 100_000_000,
        }
    }
}

/// Finds a support network with the fewest reticulations, in linear time.
///
/// Returns the first Minimum-family selection in canonical order together
/// with the minimum tier, which equals the number of W-fences in the
/// decomposition.
pub fn min_tier(net: &PhyloNetwork) -> (EdgeSelection, usize) {
    let decomposition = decompose(net);
    min_tier_for_decomposition(net, &decomposition)
}

/// As [`min_tier`], reusing an existing decomposition.
pub fn min_tier_for_decomposition(
    net: &PhyloNetwork,
    decomposition: &TrailDecomposition,
) -> (EdgeSelection, usize) {
    let mut bits = vec![false; net.edge_count()];
    for trail in decomposition.trails() {
        let cursor = enumerate_trail_options(trail, FamilyKind::Minimum)
            .expect("the Minimum family is nonempty on every trail");
        for (pos, &edge) in trail.edges().iter().enumerate() {
            bits[edge] = cursor.bits()[pos];
        }
    }
    let selection = EdgeSelection::from_bits(bits);
    let expected = decomposition.w_fence_count();
    let view = net
        .induce(&selection)
        .expect("minimum selections are nonempty");
    let report = tier(&view).expect("minimum selections are connected");
    assert_eq!(
        report.value(),
        expected,
        "minimum tier must equal the W-fence count"
    );
    (selection, expected)
}

fn guarded_search(
    net: &PhyloNetwork,
    family: FamilyKind,
    limit: &SearchLimit,
    optimal: bool,
) -> Result<LevelResult, OptimizeError> {
    let decomposition = decompose(net);
    let family_size = count_for_decomposition(&decomposition, family);
    if family_size.to_u64().map_or(true, |s| s > limit.max_candidates) {
        return Err(OptimizeError::SearchSpaceTooLarge {
            family_size,
            limit: limit.max_candidates,
        });
    }
    let stream = enumerate_for_decomposition(net, decomposition, family, None)
        .expect("Minimal and Minimum families are never empty");
    let mut best: Option<(usize, EdgeSelection)> = None;
    for selection in stream {
        let view = net
            .induce(&selection)
            .expect("admissible selections are nonempty");
        let lv = level(&view).expect("admissible selections are connected");
        // Strict improvement keeps the first minimizer in enumeration order.
        if best.as_ref().map_or(true, |(b, _)| lv < *b) {
            best = Some((lv, selection));
        }
    }
    let (level, selection) = best.expect("searched families are nonempty");
    let view = net.induce(&selection)?;
    let blocks = blocks(&view)?;
    Ok(LevelResult {
        selection,
        level,
        blocks,
        optimal,
    })
}

/// Exact level minimization: exhaustive search over the Minimal family,
/// which always contains a support network of minimum level.
pub fn min_level_exact(
    net: &PhyloNetwork,
    limit: &SearchLimit,
) -> Result<LevelResult, OptimizeError> {
    guarded_search(net, FamilyKind::Minimal, limit, true)
}

/// Heuristic level minimization: search over the smaller Minimum family.
/// The answer is an upper bound on the base level and is not always tight.
pub fn min_level_heuristic(
    net: &PhyloNetwork,
    limit: &SearchLimit,
) -> Result<LevelResult, OptimizeError> {
    guarded_search(net, FamilyKind::Minimum, limit, false)
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

    fn tree() -> PhyloNetwork {
        net(&[
            ("r", "u"),
            ("r", "v"),
            ("u", "a"),
            ("u", "b"),
            ("v", "c"),
            ("v", "d"),
        ])
    }

    fn diamond() -> PhyloNetwork {
        net(&[
            ("r", "a"),
            ("r", "b"),
            ("a", "x"),
            ("b", "x"),
            ("x", "l"),
            ("a", "la"),
            ("b", "lb"),
        ])
    }

    /// Two edge-disjoint diamonds joined below a bridge.
    fn two_diamonds() -> PhyloNetwork {
        net(&[
            ("r", "a"),
            ("r", "b"),
            ("a", "x"),
            ("b", "x"),
            ("a", "la"),
            ("b", "lb"),
            ("x", "m"),
            ("m", "c"),
            ("m", "d"),
            ("c", "y"),
            ("d", "y"),
            ("c", "lc"),
            ("d", "ld"),
            ("y", "l"),
        ])
    }

    #[test]
    fn tree_blocks_are_all_bridges() {
        let t = tree();
        let view = t.full_view();
        let bs = blocks(&view).unwrap();
        assert_eq!(bs.len(), t.edge_count());
        assert!(bs.iter().all(|b| b.is_bridge() && b.reticulation_count() == 0));
        assert_eq!(level(&view).unwrap(), 0);
    }

    #[test]
    fn diamond_is_one_block_of_tier_one() {
        let d = diamond();
        let view = d.full_view();
        let bs = blocks(&view).unwrap();
        // the 4-cycle plus the three pendant bridges
        assert_eq!(bs.len(), 4);
        let cycle = bs.iter().find(|b| !b.is_bridge()).unwrap();
        assert_eq!(cycle.edges, vec![0, 1, 2, 3]);
        assert_eq!(cycle.reticulation_count(), 1);
        assert_eq!(level(&view).unwrap(), 1);
    }

    #[test]
    fn bridged_diamonds_have_level_one() {
        let n = two_diamonds();
        let view = n.full_view();
        let bs = blocks(&view).unwrap();
        let cycles: Vec<_> = bs.iter().filter(|b| !b.is_bridge()).collect();
        assert_eq!(cycles.len(), 2);
        assert!(cycles.iter().all(|b| b.reticulation_count() == 1));
        let bridges = bs.iter().filter(|b| b.is_bridge()).count();
        assert_eq!(bridges, 6);
        assert_eq!(level(&view).unwrap(), 1);
        assert_eq!(n.tier().value(), 2);
    }

    #[test]
    fn blocks_partition_the_edges() {
        let n = two_diamonds();
        let view = n.full_view();
        let bs = blocks(&view).unwrap();
        let mut seen = vec![0usize; n.edge_count()];
        for b in &bs {
            for &e in &b.edges {
                seen[e] += 1;
            }
        }
        assert!(seen.iter().all(|&c| c == 1));
    }

    #[test]
    fn blocks_reject_disconnected_views() {
        let d = diamond();
        // (r, a) and (x, l) share no vertex
        let sel = EdgeSelection::from_indices(d.edge_count(), &[0, 4]);
        let view = d.induce(&sel).unwrap();
        assert!(matches!(blocks(&view), Err(GraphError::Disconnected)));
    }

    #[test]
    fn min_tier_of_tree_is_zero_and_keeps_all_edges() {
        let t = tree();
        let (sel, rstar) = min_tier(&t);
        assert_eq!(rstar, 0);
        assert_eq!(sel.count_selected(), t.edge_count());
    }

    #[test]
    fn min_tier_of_diamond_is_zero() {
        // the diamond is tree-based: dropping one reticulation edge gives a tree
        let d = diamond();
        let (sel, rstar) = min_tier(&d);
        assert_eq!(rstar, 0);
        let view = d.induce(&sel).unwrap();
        assert!(view.is_spanning());
    }

    #[test]
    fn exact_level_of_tree_based_network_is_zero() {
        let d = diamond();
        let exact = min_level_exact(&d, &SearchLimit::default()).unwrap();
        assert_eq!(exact.level, 0);
        assert!(exact.optimal);
        let heur = min_level_heuristic(&d, &SearchLimit::default()).unwrap();
        assert_eq!(heur.level, 0);
        assert!(!heur.optimal);
    }

    #[test]
    fn search_guard_fires() {
        let d = diamond();
        let tiny = SearchLimit { max_candidates: 0 };
        assert!(matches!(
            min_level_exact(&d, &tiny),
            Err(OptimizeError::SearchSpaceTooLarge { .. })
        ));
    }
}
