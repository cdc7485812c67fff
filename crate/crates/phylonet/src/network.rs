//! Network data model and axiom validation.
//!
//! A [`PhyloNetwork`] is a validated rooted binary phylogenetic network:
//! a finite simple DAG with a unique root of out-degree 1 or 2, labeled
//! leaves, and every other vertex of in- and out-degree at most 2.
//! Vertices live in an arena and are addressed by dense [`VertexId`]
//! handles; edges carry a canonical index equal to their position in the
//! input order, which all bitstring selections refer to.

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Dense integer handle for a vertex, stable for the lifetime of its network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub(crate) u32);

impl VertexId {
    /// Index into per-vertex arrays; always in `[0, vertex_count)`.
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// A directed edge together with its canonical index in the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DirectedEdge {
    pub tail: VertexId,
    pub head: VertexId,
    /// Position in the network's canonical edge order.
    pub index: usize,
}

/// Vertex classification by (in-degree, out-degree) in the containing graph.
///
/// The kind is a pure function of the degree pair:
/// in-degree 0 is a root, out-degree 0 (with in-degree > 0) a leaf,
/// (1,2) a tree vertex, (2,1) a reticulation, and (1,1) a passthrough.
/// Passthrough vertices are legal in subgraph views and, when almost-binary
/// inputs are accepted, in the network itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexKind {
    Root,
    Leaf,
    TreeVertex,
    Reticulation,
    Passthrough,
}

/// How strictly degree axioms are enforced during validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ValidationMode {
    /// Internal vertices must be tree vertices (1,2) or reticulations (2,1).
    #[default]
    Strict,
    /// Additionally accepts passthrough (1,1) internal vertices.
    AlmostBinary,
}

/// A single violated axiom, with the offending vertices or edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationIssue {
    /// Edge with `tail == head`.
    SelfLoop { edge: usize, vertex: String },
    /// Two edges with the same (tail, head) pair.
    ParallelEdge { first: usize, second: usize },
    /// The graph contains a directed cycle through these vertices.
    Cyclic { vertices: Vec<String> },
    /// Not exactly one vertex of in-degree 0.
    MultipleRoots { roots: Vec<String> },
    /// The root's out-degree is not 1 or 2.
    BadRootDegree { root: String, outdeg: usize },
    /// An out-degree-0 vertex missing from the declared leaf set.
    UnlabeledLeaf { vertex: String },
    /// A declared leaf that is not an out-degree-0 vertex.
    LabelOnNonLeaf { vertex: String },
    /// A declared leaf name that is not a vertex of the graph.
    UnknownLabelTarget { name: String },
    /// A vertex whose degree pair is not allowed by the validation mode.
    DegreeViolation {
        vertex: String,
        indeg: usize,
        outdeg: usize,
    },
    /// The graph has no vertices at all.
    EmptyGraph,
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationIssue::SelfLoop { edge, vertex } => {
                write!(f, "self-loop at edge {edge} on vertex {vertex}")
            }
            ValidationIssue::ParallelEdge { first, second } => {
                write!(f, "parallel edges {first} and {second}")
            }
            ValidationIssue::Cyclic { vertices } => {
                write!(f, "directed cycle through {{{}}}", vertices.join(", "))
            }
            ValidationIssue::MultipleRoots { roots } => {
                write!(
                    f,
                    "expected exactly one in-degree-0 vertex, found {}: {{{}}}",
                    roots.len(),
                    roots.join(", ")
                )
            }
            ValidationIssue::BadRootDegree { root, outdeg } => {
                write!(f, "root {root} has out-degree {outdeg}, expected 1 or 2")
            }
            ValidationIssue::UnlabeledLeaf { vertex } => {
                write!(f, "out-degree-0 vertex {vertex} is not a declared leaf")
            }
            ValidationIssue::LabelOnNonLeaf { vertex } => {
                write!(f, "declared leaf {vertex} has outgoing edges")
            }
            ValidationIssue::UnknownLabelTarget { name } => {
                write!(f, "declared leaf {name} is not a vertex of the graph")
            }
            ValidationIssue::DegreeViolation {
                vertex,
                indeg,
                outdeg,
            } => {
                write!(f, "vertex {vertex} has degree pair ({indeg}, {outdeg})")
            }
            ValidationIssue::EmptyGraph => write!(f, "graph has no vertices"),
        }
    }
}

/// Every axiom violation found in one validation pass.
#[derive(Debug, Clone, Error)]
#[error("invalid network: {}", self.summary())]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    fn summary(&self) -> String {
        self.issues
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// Lookup failures on an otherwise valid network or view.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("selection length {got} does not match edge count {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("selection is empty")]
    EmptySelection,
    #[error("graph is disconnected")]
    Disconnected,
}

/// An unvalidated directed graph under construction, with string vertex names.
///
/// Vertices are registered on first mention; edge order is preserved and
/// becomes the canonical edge order of the validated network.
#[derive(Debug, Clone, Default)]
pub struct RawGraph {
    names: Vec<String>,
    by_name: HashMap<String, u32>,
    edges: Vec<(u32, u32)>,
    declared_leaves: Option<Vec<String>>,
}

impl RawGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers `name` if new and returns its dense id.
    pub fn vertex(&mut self, name: &str) -> VertexId {
        if let Some(&id) = self.by_name.get(name) {
            return VertexId(id);
        }
        let id = self.names.len() as u32;
        self.names.push(name.to_string());
        self.by_name.insert(name.to_string(), id);
        VertexId(id)
    }

    pub fn add_edge(&mut self, tail: &str, head: &str) {
        let t = self.vertex(tail).0;
        let h = self.vertex(head).0;
        self.edges.push((t, h));
    }

    /// Declares the leaf set explicitly; absent a declaration, every
    /// out-degree-0 vertex is taken as a leaf labeled by its own name.
    pub fn declare_leaves<I, S>(&mut self, names: I)
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.declared_leaves = Some(names.into_iter().map(Into::into).collect());
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Checks every axiom and builds the network, or reports all violations.
    pub fn validate(self, mode: ValidationMode) -> Result<PhyloNetwork, ValidationReport> {
        validate_network(self, mode)
    }
}

/// A validated rooted binary phylogenetic network.
///
/// Immutable after construction; all degree queries are O(1).
#[derive(Debug, Clone)]
pub struct PhyloNetwork {
    names: Vec<String>,
    edges: Vec<DirectedEdge>,
    in_edges: Vec<Vec<usize>>,
    out_edges: Vec<Vec<usize>>,
    root: VertexId,
    leaf_labels: BTreeMap<VertexId, String>,
}

impl PhyloNetwork {
    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[DirectedEdge] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> DirectedEdge {
        self.edges[index]
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v.index()]
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| VertexId(i as u32))
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.names.len() as u32).map(VertexId)
    }

    /// Leaf vertices with their labels, ordered by vertex id.
    pub fn leaf_labels(&self) -> &BTreeMap<VertexId, String> {
        &self.leaf_labels
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        self.leaf_labels.contains_key(&v)
    }

    pub fn indeg(&self, v: VertexId) -> usize {
        self.in_edges[v.index()].len()
    }

    pub fn outdeg(&self, v: VertexId) -> usize {
        self.out_edges[v.index()].len()
    }

    /// Canonical indices of edges whose head is `v`.
    pub fn in_edges(&self, v: VertexId) -> &[usize] {
        &self.in_edges[v.index()]
    }

    /// Canonical indices of edges whose tail is `v`.
    pub fn out_edges(&self, v: VertexId) -> &[usize] {
        &self.out_edges[v.index()]
    }

    /// Classifies `v` by its degree pair in this network.
    pub fn classify(&self, v: VertexId) -> Result<VertexKind, GraphError> {
        if v.index() >= self.names.len() {
            return Err(GraphError::UnknownVertex(v.to_string()));
        }
        Ok(classify_degrees(self.indeg(v), self.outdeg(v))
            .expect("validated networks contain only classifiable degree pairs"))
    }

    /// Number of in-degree-2 vertices; equals the tier for validated networks.
    pub fn reticulation_count(&self) -> usize {
        (0..self.names.len())
            .filter(|&i| self.in_edges[i].len() == 2)
            .count()
    }
}

/// Kind for a degree pair, if the pair is one of the five legal shapes.
pub fn classify_degrees(indeg: usize, outdeg: usize) -> Option<VertexKind> {
    match (indeg, outdeg) {
        (0, _) => Some(VertexKind::Root),
        (_, 0) => Some(VertexKind::Leaf),
        (1, 1) => Some(VertexKind::Passthrough),
        (1, 2) => Some(VertexKind::TreeVertex),
        (2, 1) => Some(VertexKind::Reticulation),
        _ => None,
    }
}

/// Validates a raw graph against the network axioms.
///
/// On success the canonical edge indices equal the input order. On failure
/// the report lists every violated axiom, not just the first.
pub fn validate_network(
    raw: RawGraph,
    mode: ValidationMode,
) -> Result<PhyloNetwork, ValidationReport> {
    let mut issues = Vec::new();
    let n = raw.names.len();

    if n == 0 {
        return Err(ValidationReport {
            issues: vec![ValidationIssue::EmptyGraph],
        });
    }

    let mut seen_pairs: HashMap<(u32, u32), usize> = HashMap::new();
    for (i, &(t, h)) in raw.edges.iter().enumerate() {
        if t == h {
            issues.push(ValidationIssue::SelfLoop {
                edge: i,
                vertex: raw.names[t as usize].clone(),
            });
            continue;
        }
        if let Some(&first) = seen_pairs.get(&(t, h)) {
            issues.push(ValidationIssue::ParallelEdge { first, second: i });
        } else {
            seen_pairs.insert((t, h), i);
        }
    }

    let mut in_edges: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, &(t, h)) in raw.edges.iter().enumerate() {
        if t != h {
            out_edges[t as usize].push(i);
            in_edges[h as usize].push(i);
        }
    }

    // P1: unique in-degree-0 vertex with out-degree 1 or 2.
    let roots: Vec<usize> = (0..n).filter(|&v| in_edges[v].is_empty()).collect();
    if roots.len() != 1 {
        issues.push(ValidationIssue::MultipleRoots {
            roots: roots.iter().map(|&v| raw.names[v].clone()).collect(),
        });
    }
    let root = roots.first().copied().unwrap_or(0);
    if roots.len() == 1 && !matches!(out_edges[root].len(), 1 | 2) {
        issues.push(ValidationIssue::BadRootDegree {
            root: raw.names[root].clone(),
            outdeg: out_edges[root].len(),
        });
    }

    // Acyclicity by Kahn's algorithm; leftover vertices lie on cycles.
    {
        let mut indeg: Vec<usize> = in_edges.iter().map(Vec::len).collect();
        let mut queue: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut removed = 0usize;
        while let Some(v) = queue.pop() {
            removed += 1;
            for &e in &out_edges[v] {
                let h = raw.edges[e].1 as usize;
                indeg[h] -= 1;
                if indeg[h] == 0 {
                    queue.push(h);
                }
            }
        }
        if removed < n {
            let cyclic: Vec<String> = (0..n)
                .filter(|&v| indeg[v] > 0)
                .map(|v| raw.names[v].clone())
                .collect();
            issues.push(ValidationIssue::Cyclic { vertices: cyclic });
        }
    }

    // P2: out-degree-0 vertices are exactly the declared leaf set.
    let leaves: Vec<usize> = (0..n).filter(|&v| out_edges[v].is_empty()).collect();
    if let Some(declared) = &raw.declared_leaves {
        let mut declared_ids = Vec::new();
        for name in declared {
            match raw.by_name.get(name) {
                None => issues.push(ValidationIssue::UnknownLabelTarget { name: name.clone() }),
                Some(&id) => {
                    if out_edges[id as usize].is_empty() {
                        declared_ids.push(id as usize);
                    } else {
                        issues.push(ValidationIssue::LabelOnNonLeaf {
                            vertex: name.clone(),
                        });
                    }
                }
            }
        }
        for &v in &leaves {
            if !declared_ids.contains(&v) {
                issues.push(ValidationIssue::UnlabeledLeaf {
                    vertex: raw.names[v].clone(),
                });
            }
        }
    }

    // P3 plus leaf/root bounds: every degree pair must be classifiable,
    // and internal (1,1) vertices require almost-binary mode.
    for v in 0..n {
        let (din, dout) = (in_edges[v].len(), out_edges[v].len());
        let is_root = din == 0;
        let is_leaf = dout == 0 && din > 0;
        let ok = if is_root {
            true // root out-degree reported above
        } else if is_leaf {
            din <= 2
        } else {
            match (din, dout) {
                (1, 2) | (2, 1) => true,
                (1, 1) => mode == ValidationMode::AlmostBinary,
                _ => false,
            }
        };
        if !ok {
            issues.push(ValidationIssue::DegreeViolation {
                vertex: raw.names[v].clone(),
                indeg: din,
                outdeg: dout,
            });
        }
    }

    if !issues.is_empty() {
        return Err(ValidationReport { issues });
    }

    let edges: Vec<DirectedEdge> = raw
        .edges
        .iter()
        .enumerate()
        .map(|(i, &(t, h))| DirectedEdge {
            tail: VertexId(t),
            head: VertexId(h),
            index: i,
        })
        .collect();

    let leaf_labels: BTreeMap<VertexId, String> = leaves
        .iter()
        .map(|&v| (VertexId(v as u32), raw.names[v].clone()))
        .collect();

    Ok(PhyloNetwork {
        names: raw.names,
        edges,
        in_edges,
        out_edges,
        root: VertexId(root as u32),
        leaf_labels,
    })
}
