//! Brute-force ground truth for small instances.
//!
//! Everything here works directly from the defining conditions on edge
//! subsets — forced edges and shared-endpoint pairs — and from the
//! definitional support-network test (spanning + smoothing to a valid
//! network shape). It never consults the trail decomposition or the
//! family machinery, so it is an independent implementation path for
//! differential testing.

use thiserror::Error;

use crate::families::FamilyKind;
use crate::network::PhyloNetwork;
use crate::optimize::level;
use crate::subgraph::{smooth, EdgeSelection};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("network has {edges} edges, above the oracle cap of {cap}")]
    TooLarge { edges: usize, cap: usize },
}

/// Size cap for exhaustive subset iteration.
#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    pub max_edges: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { max_edges: 24 }
    }
}

/// The subset constraints, read straight off the network.
struct Constraints {
    /// Edges (u, v) with outdeg(u) = 1 or indeg(v) = 1 must be selected.
    forced: u64,
    /// Each pair of edges sharing a tail or a head needs >= 1 selected.
    pairs: Vec<u64>,
    edge_count: usize,
}

impl Constraints {
    fn of(net: &PhyloNetwork) -> Constraints {
        let mut forced = 0u64;
        for e in net.edges() {
            if net.outdeg(e.tail) == 1 || net.indeg(e.head) == 1 {
                forced |= 1 << e.index;
            }
        }
        let mut pairs = Vec::new();
        for v in net.vertices() {
            for slot in [net.out_edges(v), net.in_edges(v)] {
                if let [a, b] = slot {
                    pairs.push(1 << a | 1 << b);
                }
            }
        }
        Constraints {
            forced,
            pairs,
            edge_count: net.edge_count(),
        }
    }

    fn admits(&self, mask: u64) -> bool {
        mask & self.forced == self.forced && self.pairs.iter().all(|&p| mask & p != 0)
    }

    /// True when no selected edge can be dropped: the constraints are
    /// monotone, so minimality reduces to single-edge removals.
    fn is_minimal(&self, mask: u64) -> bool {
        let removable = mask & !self.forced;
        for i in 0..self.edge_count {
            let bit = 1u64 << i;
            if removable & bit != 0 && self.admits(mask & !bit) {
                return false;
            }
        }
        true
    }
}

fn mask_to_selection(mask: u64, len: usize) -> EdgeSelection {
    EdgeSelection::from_bits((0..len).map(|i| mask >> i & 1 == 1).collect())
}

fn selection_to_mask(sel: &EdgeSelection) -> u64 {
    sel.indices().iter().fold(0u64, |m, &i| m | 1 << i)
}

/// Whether `mask` satisfies the direct admissibility conditions on `net`.
pub fn admissible_direct(net: &PhyloNetwork, sel: &EdgeSelection) -> bool {
    Constraints::of(net).admits(selection_to_mask(sel))
}

/// Iterates subsets in canonical bitstring order: a selected bit sorts
/// before an unselected one, position by position. Only subsets containing
/// all forced edges are visited.
fn each_pruned_subset(cons: &Constraints, mut f: impl FnMut(u64)) {
    let free: Vec<usize> = (0..cons.edge_count)
        .filter(|&i| cons.forced >> i & 1 == 0)
        .collect();
    let k = free.len();
    for rank in 0u64..(1u64 << k) {
        let mut mask = cons.forced;
        for (j, &pos) in free.iter().enumerate() {
            // complemented bit: rank 0 selects everything (1 sorts first)
            if rank >> (k - 1 - j) & 1 == 0 {
                mask |= 1 << pos;
            }
        }
        f(mask);
    }
}

/// Exhaustively enumerates a family from the defining conditions.
///
/// `All` checks the forced-edge and shared-endpoint conditions on every
/// subset; `Minimal` keeps the members with no admissible proper subset;
/// `Minimum` the members of smallest cardinality; `Trees` the members whose
/// induced subgraph has no in-degree-2 vertex.
pub fn brute_force_family(
    net: &PhyloNetwork,
    family: FamilyKind,
    cfg: &OracleConfig,
) -> Result<Vec<EdgeSelection>, OracleError> {
    let m = net.edge_count();
    if m > cfg.max_edges || m > 63 {
        return Err(OracleError::TooLarge {
            edges: m,
            cap: cfg.max_edges.min(63),
        });
    }
    let cons = Constraints::of(net);
    let mut members: Vec<u64> = Vec::new();
    each_pruned_subset(&cons, |mask| {
        if cons.admits(mask) {
            members.push(mask);
        }
    });
    let filtered: Vec<u64> = match family {
        FamilyKind::All => members,
        FamilyKind::Minimal => members
            .into_iter()
            .filter(|&mask| cons.is_minimal(mask))
            .collect(),
        FamilyKind::Minimum => {
            let best = members
                .iter()
                .map(|m| m.count_ones())
                .min()
                .expect("the All family is never empty");
            members
                .into_iter()
                .filter(|m| m.count_ones() == best)
                .collect()
        }
        FamilyKind::Trees => members
            .into_iter()
            .filter(|&mask| {
                let sel = mask_to_selection(mask, m);
                let view = net.induce(&sel).expect("admissible subsets are nonempty");
                let tree_like = view.vertices().all(|v| view.indeg(v) != 2);
                tree_like
            })
            .collect(),
    };
    Ok(filtered
        .into_iter()
        .map(|mask| mask_to_selection(mask, m))
        .collect())
}

/// Exhaustive level minimization over all support networks.
pub fn brute_force_min_level(
    net: &PhyloNetwork,
    cfg: &OracleConfig,
) -> Result<(usize, EdgeSelection), OracleError> {
    let all = brute_force_family(net, FamilyKind::All, cfg)?;
    let mut best: Option<(usize, EdgeSelection)> = None;
    for sel in all {
        let view = net.induce(&sel).expect("admissible subsets are nonempty");
        let lv = level(&view).expect("admissible subsets induce connected views");
        if best.as_ref().map_or(true, |(b, _)| lv < *b) {
            best = Some((lv, sel));
        }
    }
    Ok(best.expect("the All family is never empty"))
}

/// Minimum tier over all support networks: attained at minimum cardinality.
pub fn brute_force_min_tier(
    net: &PhyloNetwork,
    cfg: &OracleConfig,
) -> Result<usize, OracleError> {
    let minimum = brute_force_family(net, FamilyKind::Minimum, cfg)?;
    let fewest = minimum[0].count_selected();
    Ok(fewest + 1 - net.vertex_count())
}

/// Outcome of the definitional support-network test for one subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DefinitionalOutcome {
    pub is_support: bool,
    /// Smoothing produced parallel edges (still counted as a support
    /// network; surfaced so the convention stays visible).
    pub parallel_edges: bool,
}

/// Tests the definition directly: the subset must induce a spanning
/// subgraph whose smoothing is shaped like a rooted binary phylogenetic
/// network on the same leaf set. Parallel edges in the smoothing are
/// tolerated and flagged.
pub fn definitional_support_test(net: &PhyloNetwork, sel: &EdgeSelection) -> DefinitionalOutcome {
    let fail = DefinitionalOutcome {
        is_support: false,
        parallel_edges: false,
    };
    if sel.is_empty() {
        return fail;
    }
    let view = net.induce(sel).expect("nonempty by the guard above");
    if !view.is_spanning() {
        return fail;
    }
    let base = smooth(&view);
    let degrees = base.degrees();
    let mut roots = 0usize;
    for (&v, &(indeg, outdeg)) in &degrees {
        let ok = if indeg == 0 {
            roots += 1;
            v == net.root() && matches!(outdeg, 1 | 2)
        } else if outdeg == 0 {
            net.is_leaf(v) && indeg <= 2
        } else {
            matches!((indeg, outdeg), (1, 2) | (2, 1))
        };
        if !ok {
            return fail;
        }
    }
    if roots != 1 {
        return fail;
    }
    // Every original leaf must survive as a leaf of the base.
    for &leaf in net.leaf_labels().keys() {
        match degrees.get(&leaf) {
            Some(&(_, 0)) => {}
            _ => return fail,
        }
    }
    DefinitionalOutcome {
        is_support: true,
        parallel_edges: base.has_parallel_edges(),
    }
}

/// Result of cross-checking direct admissibility against the definitional
/// support-network test over a full subset scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossCheckReport {
    pub subsets_checked: u64,
    /// Subsets on which the two characterizations disagree.
    pub mismatches: u64,
    /// Support networks whose smoothing produced parallel edges.
    pub parallel_edge_cases: u64,
}

/// Scans all `2^|E|` subsets and compares the two characterizations.
/// Any mismatch is a defect in one of them.
pub fn definitional_crosscheck(
    net: &PhyloNetwork,
    cfg: &OracleConfig,
) -> Result<CrossCheckReport, OracleError> {
    let m = net.edge_count();
    if m > cfg.max_edges || m > 63 {
        return Err(OracleError::TooLarge {
            edges: m,
            cap: cfg.max_edges.min(63),
        });
    }
    let cons = Constraints::of(net);
    let mut report = CrossCheckReport {
        subsets_checked: 0,
        mismatches: 0,
        parallel_edge_cases: 0,
    };
    for mask in 0u64..(1u64 << m) {
        let sel = mask_to_selection(mask, m);
        let by_conditions = cons.admits(mask);
        let by_definition = definitional_support_test(net, &sel);
        report.subsets_checked += 1;
        if by_conditions != by_definition.is_support {
            report.mismatches += 1;
        }
        if by_definition.is_support && by_definition.parallel_edges {
            report.parallel_edge_cases += 1;
        }
    }
    Ok(report)
}

/// Everything the oracle can say about one small network.
#[derive(Debug, Clone)]
pub struct ExhaustiveReport {
    pub all: Vec<EdgeSelection>,
    pub minimal: Vec<EdgeSelection>,
    pub minimum: Vec<EdgeSelection>,
    pub trees: Vec<EdgeSelection>,
    pub min_tier: usize,
    pub min_level: usize,
    pub min_level_witness: EdgeSelection,
}

impl ExhaustiveReport {
    pub fn family(&self, family: FamilyKind) -> &[EdgeSelection] {
        match family {
            FamilyKind::All => &self.all,
            FamilyKind::Minimal => &self.minimal,
            FamilyKind::Minimum => &self.minimum,
            FamilyKind::Trees => &self.trees,
        }
    }
}

/// Runs every exhaustive computation on one network.
pub fn exhaustive_report(
    net: &PhyloNetwork,
    cfg: &OracleConfig,
) -> Result<ExhaustiveReport, OracleError> {
    let all = brute_force_family(net, FamilyKind::All, cfg)?;
    let minimal = brute_force_family(net, FamilyKind::Minimal, cfg)?;
    let minimum = brute_force_family(net, FamilyKind::Minimum, cfg)?;
    let trees = brute_force_family(net, FamilyKind::Trees, cfg)?;
    let min_tier = brute_force_min_tier(net, cfg)?;
    let (min_level, min_level_witness) = brute_force_min_level(net, cfg)?;
    Ok(ExhaustiveReport {
        all,
        minimal,
        minimum,
        trees,
        min_tier,
        min_level,
        min_level_witness,
    })
}
