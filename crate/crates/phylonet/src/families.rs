//! Admissibility, counting, and enumeration of the four support families.
//!
//! Each maximal zig-zag trail contributes an independent set of per-trail
//! options, and a family over the whole network is the direct product of
//! those option sets:
//!
//! * `Trees` — selections inducing support trees: none on a W-fence, the
//!   single alternating string on an N-fence, the two alternating phases on
//!   a crown, and `1(01)^p(10)^q1` on an M-fence.
//! * `All` — all support networks: strings with both terminal bits set and
//!   no `00` factor (cyclically, for crowns). Per-trail counts follow the
//!   Fibonacci numbers on fences and the Lucas numbers on crowns.
//! * `Minimal` — support networks with an inclusion-minimal edge set: the
//!   `All` strings avoiding `111` as well. Counts follow the Padovan
//!   numbers on fences and the Perrin numbers on crowns.
//! * `Minimum` — support networks with the fewest edges: like `Trees` but
//!   W-fences also take the `1(01)^p(10)^q1` patterns.
//!
//! Enumeration is an odometer over per-trail cursors. Each cursor advances
//! by backtracking with a precomputed suffix-feasibility table, so the
//! delay between consecutive whole-network emissions is linear in the edge
//! count even though the families themselves grow exponentially.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::network::PhyloNetwork;
use crate::subgraph::EdgeSelection;
use crate::zigzag::{decompose, Trail, TrailDecomposition, TrailType};

/// Exact, unbounded count of selections in a family.
pub type FamilyCount = BigUint;

/// The four families of edge selections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Trees,
    All,
    Minimal,
    Minimum,
}

impl FamilyKind {
    pub const EACH: [FamilyKind; 4] = [
        FamilyKind::Trees,
        FamilyKind::All,
        FamilyKind::Minimal,
        FamilyKind::Minimum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Trees => "trees",
            FamilyKind::All => "all",
            FamilyKind::Minimal => "minimal",
            FamilyKind::Minimum => "minimum",
        }
    }
}

/// Integer sequences underlying the per-trail counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceKind {
    /// F(1) = F(2) = 1, F(n) = F(n-1) + F(n-2).
    Fibonacci,
    /// L(1) = 1, L(2) = 3, L(n) = L(n-1) + L(n-2).
    Lucas,
    /// P(1) = P(2) = P(3) = 1, P(n) = P(n-2) + P(n-3).
    Padovan,
    /// Q(1) = 0, Q(2) = 2, Q(3) = 3, Q(n) = Q(n-2) + Q(n-3).
    Perrin,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("sequence index must be at least 1")]
    ZeroIndex,
    #[error("bitstring length {got} does not match trail size {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("the requested family is empty for this input")]
    EmptyFamily,
}

/// The `n`-th term of `kind` under 1-based indexing.
pub fn sequence_value(kind: SequenceKind, n: u64) -> Result<FamilyCount, FamilyError> {
    if n == 0 {
        return Err(FamilyError::ZeroIndex);
    }
    let big = |v: u32| BigUint::from(v);
    let seeds: &[BigUint] = match kind {
        SequenceKind::Fibonacci => &[big(1), big(1)],
        SequenceKind::Lucas => &[big(1), big(3)],
        SequenceKind::Padovan => &[big(1), big(1), big(1)],
        SequenceKind::Perrin => &[big(0), big(2), big(3)],
    };
    let idx = (n - 1) as usize;
    if idx < seeds.len() {
        return Ok(seeds[idx].clone());
    }
    let mut window: Vec<BigUint> = seeds.to_vec();
    for _ in seeds.len()..=idx {
        let next = match kind {
            SequenceKind::Fibonacci | SequenceKind::Lucas => &window[1] + &window[0],
            SequenceKind::Padovan | SequenceKind::Perrin => &window[1] + &window[0],
        };
        window.remove(0);
        window.push(next);
    }
    Ok(window.pop().expect("window is nonempty"))
}

fn no_factor_00(bits: &[bool], cyclic: bool) -> bool {
    let m = bits.len();
    for i in 0..m.saturating_sub(1) {
        if !bits[i] && !bits[i + 1] {
            return false;
        }
    }
    if cyclic && m >= 2 && !bits[m - 1] && !bits[0] {
        return false;
    }
    true
}

fn no_factor_111(bits: &[bool], cyclic: bool) -> bool {
    let m = bits.len();
    for i in 0..m.saturating_sub(2) {
        if bits[i] && bits[i + 1] && bits[i + 2] {
            return false;
        }
    }
    if cyclic && m >= 3 {
        if bits[m - 2] && bits[m - 1] && bits[0] {
            return false;
        }
        if bits[m - 1] && bits[0] && bits[1] {
            return false;
        }
    }
    true
}

fn adjacent_ones(bits: &[bool]) -> usize {
    bits.windows(2).filter(|w| w[0] && w[1]).count()
}

fn alternates_cyclically(bits: &[bool]) -> bool {
    let m = bits.len();
    (0..m).all(|i| bits[i] != bits[(i + 1) % m])
}

/// Whether `bits` is an admissible per-trail option for `family`.
///
/// Constraints depend only on the trail's type and size; for crowns the
/// factor conditions are evaluated cyclically.
pub fn is_admissible(trail: &Trail, bits: &[bool], family: FamilyKind) -> Result<bool, FamilyError> {
    let m = trail.len();
    if bits.len() != m {
        return Err(FamilyError::LengthMismatch {
            got: bits.len(),
            expected: m,
        });
    }
    let crown = trail.trail_type() == TrailType::Crown;
    let fence_frame = !crown && bits[0] && bits[m - 1];
    let ok = match family {
        FamilyKind::All => {
            if crown {
                no_factor_00(bits, true)
            } else {
                fence_frame && no_factor_00(bits, false)
            }
        }
        FamilyKind::Minimal => {
            if crown {
                no_factor_00(bits, true) && no_factor_111(bits, true)
            } else {
                fence_frame && no_factor_00(bits, false) && no_factor_111(bits, false)
            }
        }
        FamilyKind::Minimum | FamilyKind::Trees => {
            if family == FamilyKind::Trees && trail.trail_type() == TrailType::WFence {
                false
            } else if crown {
                alternates_cyclically(bits)
            } else {
                // 1(01)^p(10)^q1 for even fences, 1(01)^k for odd ones:
                // exactly one adjacent 11 pair when the size is even, none
                // when it is odd.
                let target = usize::from(m % 2 == 0);
                fence_frame && no_factor_00(bits, false) && adjacent_ones(bits) == target
            }
        }
    };
    Ok(ok)
}

/// Size of the per-trail option set for `family`.
pub fn trail_option_count(trail: &Trail, family: FamilyKind) -> FamilyCount {
    let m = trail.len() as u64;
    let seq = |kind| sequence_value(kind, m).expect("trail sizes are positive");
    match (family, trail.trail_type()) {
        (FamilyKind::All, TrailType::Crown) => seq(SequenceKind::Lucas),
        (FamilyKind::All, _) => seq(SequenceKind::Fibonacci),
        (FamilyKind::Minimal, TrailType::Crown) => seq(SequenceKind::Perrin),
        (FamilyKind::Minimal, _) => seq(SequenceKind::Padovan),
        (FamilyKind::Trees, TrailType::WFence) => BigUint::zero(),
        (FamilyKind::Trees | FamilyKind::Minimum, TrailType::Crown) => BigUint::from(2u32),
        (FamilyKind::Trees | FamilyKind::Minimum, TrailType::NFence) => BigUint::one(),
        (FamilyKind::Trees | FamilyKind::Minimum, _) => BigUint::from(m / 2),
    }
}

/// Family size as the product of per-trail option counts.
pub fn count_for_decomposition(decomp: &TrailDecomposition, family: FamilyKind) -> FamilyCount {
    decomp
        .trails()
        .iter()
        .fold(BigUint::one(), |acc, t| acc * trail_option_count(t, family))
}

/// Exact number of selections in `family`; linear in the edge count.
pub fn count_family(net: &PhyloNetwork, family: FamilyKind) -> FamilyCount {
    count_for_decomposition(&decompose(net), family)
}

/// A network is tree-based exactly when no maximal trail is a W-fence.
pub fn is_tree_based(net: &PhyloNetwork) -> bool {
    decomposition_is_tree_based(&decompose(net))
}

pub fn decomposition_is_tree_based(decomp: &TrailDecomposition) -> bool {
    decomp.w_fence_count() == 0
}

// ---------------------------------------------------------------------------
// Per-trail enumeration
// ---------------------------------------------------------------------------

/// Bit ordering used throughout enumeration: 1 sorts before 0, so the
/// greediest (most-selected) option of each trail comes first.
const BIT_ORDER: [bool; 2] = [true, false];

/// Automaton state while scanning a bitstring left to right. `prev1` and
/// `prev2` are the last and second-to-last bits (2 meaning "none yet");
/// `elevens` counts adjacent 11 pairs, saturating at 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct ScanState {
    prev2: u8,
    prev1: u8,
    elevens: u8,
}

const STATE_COUNT: usize = 27;

impl ScanState {
    const INIT: ScanState = ScanState {
        prev2: 2,
        prev1: 2,
        elevens: 0,
    };

    fn index(self) -> usize {
        (self.prev2 as usize) * 9 + (self.prev1 as usize) * 3 + self.elevens as usize
    }
}

/// Per-trail constraint profile driving transitions and acceptance.
#[derive(Debug, Clone, Copy)]
struct Profile {
    /// Fences must start with 1.
    force_first_one: bool,
    /// `111` is a forbidden factor (Minimal family).
    ban_triple_ones: bool,
    /// Bound on adjacent 11 pairs, enforced exactly (Minimum/Trees).
    elevens_target: Option<u8>,
    crown: bool,
    family: FamilyKind,
}

impl Profile {
    fn new(trail_type: TrailType, m: usize, family: FamilyKind) -> Profile {
        let crown = trail_type == TrailType::Crown;
        let elevens_target = match family {
            FamilyKind::Minimum | FamilyKind::Trees => {
                if crown {
                    Some(0)
                } else {
                    Some(u8::from(m % 2 == 0))
                }
            }
            _ => None,
        };
        Profile {
            force_first_one: !crown,
            ban_triple_ones: family == FamilyKind::Minimal,
            elevens_target,
            crown,
            family,
        }
    }

    fn step(&self, st: ScanState, bit: bool) -> Option<ScanState> {
        if self.force_first_one && st.prev1 == 2 && !bit {
            return None;
        }
        if st.prev1 == 0 && !bit {
            return None; // 00
        }
        if self.ban_triple_ones && st.prev2 == 1 && st.prev1 == 1 && bit {
            return None;
        }
        let mut elevens = st.elevens;
        if st.prev1 == 1 && bit {
            elevens = (elevens + 1).min(2);
            if let Some(target) = self.elevens_target {
                if elevens > target {
                    return None;
                }
            }
        }
        Some(ScanState {
            prev2: st.prev1,
            prev1: u8::from(bit),
            elevens: if self.elevens_target.is_some() {
                elevens
            } else {
                0
            },
        })
    }

    /// Acceptance at the end of the scan. For crowns, `prefix` carries the
    /// fixed first two bits so the wrap-around factors can be checked.
    fn accept(&self, st: ScanState, prefix: (bool, bool)) -> bool {
        if self.crown {
            let b0 = u8::from(prefix.0);
            let b1 = u8::from(prefix.1);
            match self.family {
                FamilyKind::All => !(st.prev1 == 0 && b0 == 0),
                FamilyKind::Minimal => {
                    !(st.prev1 == 0 && b0 == 0)
                        && !(st.prev2 == 1 && st.prev1 == 1 && b0 == 1)
                        && !(st.prev1 == 1 && b0 == 1 && b1 == 1)
                }
                FamilyKind::Minimum | FamilyKind::Trees => st.prev1 != b0,
            }
        } else {
            st.prev1 == 1
                && self
                    .elevens_target
                    .map_or(true, |target| st.elevens == target)
        }
    }
}

/// `feasible[i][s]`: some assignment of the remaining `len - i` free
/// positions starting in state `s` reaches acceptance.
struct FeasibilityTable {
    rows: Vec<[bool; STATE_COUNT]>,
}

impl FeasibilityTable {
    fn build(profile: &Profile, free_len: usize, prefix: (bool, bool)) -> FeasibilityTable {
        let mut rows = vec![[false; STATE_COUNT]; free_len + 1];
        for prev2 in 0..3u8 {
            for prev1 in 0..3u8 {
                for elevens in 0..3u8 {
                    let st = ScanState {
                        prev2,
                        prev1,
                        elevens,
                    };
                    rows[free_len][st.index()] = profile.accept(st, prefix);
                }
            }
        }
        for i in (0..free_len).rev() {
            for prev2 in 0..3u8 {
                for prev1 in 0..3u8 {
                    for elevens in 0..3u8 {
                        let st = ScanState {
                            prev2,
                            prev1,
                            elevens,
                        };
                        let ok = BIT_ORDER.iter().any(|&bit| {
                            profile
                                .step(st, bit)
                                .is_some_and(|ns| rows[i + 1][ns.index()])
                        });
                        rows[i][st.index()] = ok;
                    }
                }
            }
        }
        FeasibilityTable { rows }
    }

    fn ok(&self, i: usize, st: ScanState) -> bool {
        self.rows[i][st.index()]
    }
}

/// Crown prefixes in enumeration order (1 sorts before 0).
const CROWN_PREFIXES: [(bool, bool); 4] = [(true, true), (true, false), (false, true), (false, false)];

/// Streams the option set of one trail in deterministic order with O(m)
/// delay per step and O(m) reset.
///
/// Every emitted bitstring satisfies the family constraints; emissions are
/// distinct and follow the lexicographic order in which a selected bit
/// sorts before an unselected one (crowns additionally iterate their first
/// two fixed bits in that order).
pub struct TrailOptionCursor {
    profile: Profile,
    /// Number of freely enumerated positions (m, or m-2 for crowns).
    free_len: usize,
    bits: Vec<bool>,
    /// states[i] = scan state before choosing free position i.
    states: Vec<ScanState>,
    tables: Vec<Option<FeasibilityTable>>,
    /// Current crown prefix (always 0 for fences).
    phase: usize,
    exhausted: bool,
}

impl TrailOptionCursor {
    fn new(trail: &Trail, family: FamilyKind) -> Result<TrailOptionCursor, FamilyError> {
        if family == FamilyKind::Trees && trail.trail_type() == TrailType::WFence {
            return Err(FamilyError::EmptyFamily);
        }
        let m = trail.len();
        let profile = Profile::new(trail.trail_type(), m, family);
        let free_len = if profile.crown { m - 2 } else { m };
        let phases = if profile.crown {
            CROWN_PREFIXES.len()
        } else {
            1
        };
        let mut cursor = TrailOptionCursor {
            profile,
            free_len,
            bits: vec![false; m],
            states: vec![ScanState::INIT; free_len + 1],
            tables: (0..phases).map(|_| None).collect(),
            phase: 0,
            exhausted: false,
        };
        if !cursor.enter_phase(0) {
            // The only empty per-trail family is Trees on a W-fence,
            // rejected above; anything else is a bug.
            unreachable!("per-trail option sets are nonempty");
        }
        Ok(cursor)
    }

    /// The current option; valid while the cursor is not exhausted.
    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn is_exhausted(&self) -> bool {
        self.exhausted
    }

    /// Restarts from the first option.
    pub fn reset(&mut self) {
        self.exhausted = false;
        let entered = self.enter_phase(0);
        debug_assert!(entered, "cursor was constructible, reset must succeed");
    }

    fn prefix(&self, phase: usize) -> (bool, bool) {
        if self.profile.crown {
            CROWN_PREFIXES[phase]
        } else {
            (false, false) // unused by fence acceptance
        }
    }

    fn table(&mut self, phase: usize) -> &FeasibilityTable {
        let prefix = self.prefix(phase);
        let profile = self.profile;
        let free_len = self.free_len;
        self.tables[phase]
            .get_or_insert_with(|| FeasibilityTable::build(&profile, free_len, prefix))
    }

    /// Enters the given phase (and any later one if it is infeasible),
    /// filling the first option of that phase. Returns false when no phase
    /// from `phase` onward has options.
    fn enter_phase(&mut self, phase: usize) -> bool {
        for p in phase..self.tables.len() {
            let init = if self.profile.crown {
                let (b0, b1) = CROWN_PREFIXES[p];
                let st = self
                    .profile
                    .step(ScanState::INIT, b0)
                    .and_then(|s| self.profile.step(s, b1));
                match st {
                    Some(s) => s,
                    None => continue,
                }
            } else {
                ScanState::INIT
            };
            let feasible = {
                let table = self.table(p);
                table.ok(0, init)
            };
            if !feasible {
                continue;
            }
            self.phase = p;
            if self.profile.crown {
                let (b0, b1) = CROWN_PREFIXES[p];
                self.bits[0] = b0;
                self.bits[1] = b1;
            }
            self.states[0] = init;
            self.fill_greedy(0);
            return true;
        }
        self.exhausted = true;
        false
    }

    /// Greedily assigns free positions `from..` along the feasible table.
    fn fill_greedy(&mut self, from: usize) {
        let offset = if self.profile.crown { 2 } else { 0 };
        for i in from..self.free_len {
            let st = self.states[i];
            let mut advanced = false;
            for &bit in &BIT_ORDER {
                if let Some(ns) = self.profile.step(st, bit) {
                    let ok = {
                        let table = self.table(self.phase);
                        table.ok(i + 1, ns)
                    };
                    if ok {
                        self.bits[offset + i] = bit;
                        self.states[i + 1] = ns;
                        advanced = true;
                        break;
                    }
                }
            }
            debug_assert!(advanced, "feasible states always extend");
        }
    }

    /// Moves to the next option; false when the set is exhausted.
    pub fn advance(&mut self) -> bool {
        if self.exhausted {
            return false;
        }
        let offset = if self.profile.crown { 2 } else { 0 };
        // Backtrack: find the rightmost selected free position that can be
        // flipped to unselected and still complete.
        for i in (0..self.free_len).rev() {
            if !self.bits[offset + i] {
                continue;
            }
            let st = self.states[i];
            if let Some(ns) = self.profile.step(st, false) {
                let ok = {
                    let table = self.table(self.phase);
                    table.ok(i + 1, ns)
                };
                if ok {
                    self.bits[offset + i] = false;
                    self.states[i + 1] = ns;
                    self.fill_greedy(i + 1);
                    return true;
                }
            }
        }
        // This phase is done; crowns move on to the next prefix.
        self.enter_phase(self.phase + 1)
    }
}

/// Builds a cursor over the option set of `trail` for `family`.
///
/// Fails with `EmptyFamily` only for the Trees family on a W-fence.
pub fn enumerate_trail_options(
    trail: &Trail,
    family: FamilyKind,
) -> Result<TrailOptionCursor, FamilyError> {
    TrailOptionCursor::new(trail, family)
}

// ---------------------------------------------------------------------------
// Whole-network enumeration
// ---------------------------------------------------------------------------

/// Lazy stream over a family, in odometer order: the last trail's cursor
/// spins fastest, and a carry resets every cursor to its right.
pub struct FamilyStream<'a> {
    net: &'a PhyloNetwork,
    decomposition: TrailDecomposition,
    cursors: Vec<TrailOptionCursor>,
    current: Vec<bool>,
    remaining: Option<u64>,
    started: bool,
    done: bool,
}

impl<'a> FamilyStream<'a> {
    pub fn network(&self) -> &'a PhyloNetwork {
        self.net
    }

    pub fn decomposition(&self) -> &TrailDecomposition {
        &self.decomposition
    }

    fn write_cursor(&mut self, trail_index: usize) {
        let trail = &self.decomposition.trails()[trail_index];
        let bits = self.cursors[trail_index].bits();
        for (pos, &edge) in trail.edges().iter().enumerate() {
            self.current[edge] = bits[pos];
        }
    }
}

impl Iterator for FamilyStream<'_> {
    type Item = EdgeSelection;

    fn next(&mut self) -> Option<EdgeSelection> {
        if self.done {
            return None;
        }
        if let Some(rem) = self.remaining.as_mut() {
            if *rem == 0 {
                self.done = true;
                return None;
            }
            *rem -= 1;
        }
        if !self.started {
            self.started = true;
            return Some(EdgeSelection::from_bits(self.current.clone()));
        }
        // Odometer advance with carry.
        let d = self.cursors.len();
        let mut moved = None;
        for i in (0..d).rev() {
            if self.cursors[i].advance() {
                moved = Some(i);
                break;
            }
        }
        let Some(i) = moved else {
            self.done = true;
            return None;
        };
        self.write_cursor(i);
        for j in i + 1..d {
            self.cursors[j].reset();
            self.write_cursor(j);
        }
        Some(EdgeSelection::from_bits(self.current.clone()))
    }
}

/// Streams the distinct selections of `family` for `net`.
///
/// Without a `limit` the stream yields exactly `count_family(net, family)`
/// selections; the worst-case delay between consecutive items is linear in
/// the edge count.
pub fn enumerate_family(
    net: &PhyloNetwork,
    family: FamilyKind,
    limit: Option<u64>,
) -> Result<FamilyStream<'_>, FamilyError> {
    let decomposition = decompose(net);
    enumerate_for_decomposition(net, decomposition, family, limit)
}

/// As [`enumerate_family`], reusing an existing decomposition.
pub fn enumerate_for_decomposition(
    net: &PhyloNetwork,
    decomposition: TrailDecomposition,
    family: FamilyKind,
    limit: Option<u64>,
) -> Result<FamilyStream<'_>, FamilyError> {
    let mut cursors = Vec::with_capacity(decomposition.trail_count());
    for trail in decomposition.trails() {
        cursors.push(TrailOptionCursor::new(trail, family)?);
    }
    let mut stream = FamilyStream {
        net,
        decomposition,
        cursors,
        current: vec![false; net.edge_count()],
        remaining: limit,
        started: false,
        done: false,
    };
    for i in 0..stream.cursors.len() {
        stream.write_cursor(i);
    }
    Ok(stream)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{RawGraph, ValidationMode};
    use crate::zigzag::decompose;

    fn net(edges: &[(&str, &str)]) -> PhyloNetwork {
        let mut g = RawGraph::new();
        for &(t, h) in edges {
            g.add_edge(t, h);
        }
        g.validate(ValidationMode::Strict).unwrap()
    }

    fn seq(kind: SequenceKind, n: u64) -> u64 {
        use num_traits::ToPrimitive;
        sequence_value(kind, n).unwrap().to_u64().unwrap()
    }

    #[test]
    fn sequence_seeds_and_small_terms() {
        assert_eq!(seq(SequenceKind::Fibonacci, 6), 8);
        assert_eq!(seq(SequenceKind::Lucas, 4), 7);
        assert_eq!(seq(SequenceKind::Perrin, 6), 5);
        let fib: Vec<u64> = (1..=10).map(|n| seq(SequenceKind::Fibonacci, n)).collect();
        assert_eq!(fib, vec![1, 1, 2, 3, 5, 8, 13, 21, 34, 55]);
        let lucas: Vec<u64> = (1..=8).map(|n| seq(SequenceKind::Lucas, n)).collect();
        assert_eq!(lucas, vec![1, 3, 4, 7, 11, 18, 29, 47]);
        let padovan: Vec<u64> = (1..=10).map(|n| seq(SequenceKind::Padovan, n)).collect();
        assert_eq!(padovan, vec![1, 1, 1, 2, 2, 3, 4, 5, 7, 9]);
        let perrin: Vec<u64> = (1..=8).map(|n| seq(SequenceKind::Perrin, n)).collect();
        assert_eq!(perrin, vec![0, 2, 3, 2, 5, 5, 7, 10]);
    }

    #[test]
    fn zero_index_is_rejected() {
        assert_eq!(
            sequence_value(SequenceKind::Fibonacci, 0),
            Err(FamilyError::ZeroIndex)
        );
    }

    /// All 2^m bitstrings of a trail filtered through `is_admissible`.
    fn brute_options(trail: &Trail, family: FamilyKind) -> Vec<Vec<bool>> {
        let m = trail.len();
        let mut out = Vec::new();
        for mask in 0..(1u32 << m) {
            let bits: Vec<bool> = (0..m).map(|i| mask >> i & 1 == 1).collect();
            if is_admissible(trail, &bits, family).unwrap() {
                out.push(bits);
            }
        }
        out
    }

    fn cursor_options(trail: &Trail, family: FamilyKind) -> Vec<Vec<bool>> {
        let mut cursor = match enumerate_trail_options(trail, family) {
            Ok(c) => c,
            Err(FamilyError::EmptyFamily) => return Vec::new(),
            Err(e) => panic!("unexpected error: {e}"),
        };
        let mut out = vec![cursor.bits().to_vec()];
        while cursor.advance() {
            out.push(cursor.bits().to_vec());
        }
        out
    }

    /// Networks realizing each trail shape, so tests use real decompositions.
    fn trail_with(tt: TrailType, m: usize) -> (PhyloNetwork, usize) {
        let n = match (tt, m) {
            (TrailType::NFence, 1) => net(&[("rho", "a")]),
            (TrailType::MFence, 2) => net(&[("r", "a"), ("r", "b")]),
            (TrailType::MFence, 4) => net(&[
                ("r", "t1"),
                ("r", "t2"),
                ("t1", "h0"),
                ("t1", "h1"),
                ("t2", "h1"),
                ("t2", "h2"),
                ("h1", "x"),
            ]),
            (TrailType::WFence, 2) => net(&[
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
            ]),
            (TrailType::Crown, 4) => net(&[
                ("r", "t1"),
                ("r", "t2"),
                ("t1", "r1"),
                ("t1", "r2"),
                ("t2", "r1"),
                ("t2", "r2"),
                ("r1", "x1"),
                ("r2", "x2"),
            ]),
            _ => panic!("no fixture for {tt} of size {m}"),
        };
        let d = decompose(&n);
        let idx = d
            .trails()
            .iter()
            .position(|t| t.trail_type() == tt && t.len() == m)
            .expect("fixture contains the requested trail");
        (n, idx)
    }

    #[test]
    fn cursor_agrees_with_predicate_and_count() {
        use num_traits::ToPrimitive;
        for (tt, m) in [
            (TrailType::NFence, 1),
            (TrailType::MFence, 2),
            (TrailType::MFence, 4),
            (TrailType::WFence, 2),
            (TrailType::Crown, 4),
        ] {
            let (n, idx) = trail_with(tt, m);
            let d = decompose(&n);
            let trail = &d.trails()[idx];
            for family in FamilyKind::EACH {
                let brute = brute_options(trail, family);
                let streamed = cursor_options(trail, family);
                let mut sorted = streamed.clone();
                sorted.sort();
                sorted.dedup();
                assert_eq!(sorted.len(), streamed.len(), "{family:?} emits duplicates");
                let mut brute_sorted = brute;
                brute_sorted.sort();
                assert_eq!(
                    sorted, brute_sorted,
                    "cursor disagrees with predicate on {tt} size {m} {family:?}"
                );
                assert_eq!(
                    trail_option_count(trail, family).to_usize().unwrap(),
                    streamed.len(),
                    "count mismatch on {tt} size {m} {family:?}"
                );
            }
        }
    }

    #[test]
    fn minimum_options_of_size_four_m_fence() {
        let (n, idx) = trail_with(TrailType::MFence, 4);
        let d = decompose(&n);
        let opts = cursor_options(&d.trails()[idx], FamilyKind::Minimum);
        assert_eq!(
            opts,
            vec![
                vec![true, true, false, true],
                vec![true, false, true, true]
            ]
        );
    }

    #[test]
    fn minimum_options_of_crown_are_the_two_phases() {
        let (n, idx) = trail_with(TrailType::Crown, 4);
        let d = decompose(&n);
        let opts = cursor_options(&d.trails()[idx], FamilyKind::Minimum);
        assert_eq!(
            opts,
            vec![
                vec![true, false, true, false],
                vec![false, true, false, true]
            ]
        );
    }

    #[test]
    fn all_family_crown_of_four_has_seven_options() {
        use num_traits::ToPrimitive;
        let (n, idx) = trail_with(TrailType::Crown, 4);
        let d = decompose(&n);
        let count = trail_option_count(&d.trails()[idx], FamilyKind::All);
        assert_eq!(count.to_u64().unwrap(), 7);
        assert_eq!(cursor_options(&d.trails()[idx], FamilyKind::All).len(), 7);
    }

    #[test]
    fn admissibility_examples() {
        let (n, idx) = trail_with(TrailType::MFence, 4);
        let d = decompose(&n);
        let m4 = &d.trails()[idx];
        // fences under All: terminal bits set, no 00
        assert!(is_admissible(m4, &[true, false, true, true], FamilyKind::All).unwrap());
        assert!(!is_admissible(m4, &[true, false, false, true], FamilyKind::All).unwrap());
        assert!(!is_admissible(m4, &[true, true, true, false], FamilyKind::All).unwrap());
        // Minimal additionally bans 111
        assert!(!is_admissible(m4, &[true, true, true, true], FamilyKind::Minimal).unwrap());
        // length mismatch
        assert!(matches!(
            is_admissible(m4, &[true], FamilyKind::All),
            Err(FamilyError::LengthMismatch { .. })
        ));
        let (n, idx) = trail_with(TrailType::Crown, 4);
        let d = decompose(&n);
        let crown = &d.trails()[idx];
        assert!(is_admissible(crown, &[true, false, true, false], FamilyKind::Minimum).unwrap());
        assert!(!is_admissible(crown, &[true, true, false, true], FamilyKind::Minimum).unwrap());
    }

    #[test]
    fn trees_family_is_empty_on_w_fence() {
        use num_traits::ToPrimitive;
        let (n, idx) = trail_with(TrailType::WFence, 2);
        let d = decompose(&n);
        let w = &d.trails()[idx];
        assert_eq!(
            trail_option_count(w, FamilyKind::Trees).to_u64().unwrap(),
            0
        );
        assert!(matches!(
            enumerate_trail_options(w, FamilyKind::Trees),
            Err(FamilyError::EmptyFamily)
        ));
        assert!(!is_tree_based(&n));
        assert!(matches!(
            enumerate_family(&n, FamilyKind::Trees, None),
            Err(FamilyError::EmptyFamily)
        ));
    }

    #[test]
    fn tree_network_has_one_selection_in_every_family() {
        use num_traits::ToPrimitive;
        let t = net(&[
            ("r", "u"),
            ("r", "v"),
            ("u", "a"),
            ("u", "b"),
            ("v", "c"),
            ("v", "d"),
        ]);
        for family in FamilyKind::EACH {
            assert_eq!(count_family(&t, family).to_u64().unwrap(), 1);
            let items: Vec<_> = enumerate_family(&t, family, None).unwrap().collect();
            assert_eq!(items.len(), 1);
            assert_eq!(items[0].count_selected(), t.edge_count());
        }
        assert!(is_tree_based(&t));
    }

    #[test]
    fn stream_respects_limit_and_matches_count() {
        use num_traits::ToPrimitive;
        let (n, _) = trail_with(TrailType::Crown, 4);
        let total = count_family(&n, FamilyKind::All).to_u64().unwrap();
        let everything: Vec<_> = enumerate_family(&n, FamilyKind::All, None).unwrap().collect();
        assert_eq!(everything.len() as u64, total);
        let two: Vec<_> = enumerate_family(&n, FamilyKind::All, Some(2)).unwrap().collect();
        assert_eq!(two.len(), 2);
        assert_eq!(&everything[..2], &two[..]);
    }
}
