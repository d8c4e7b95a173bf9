//! Compressed sparse row graphs and the builder that produces them.
//!
//! Every kernel consumes a [`CsrGraph`]. The layout is the same for all of
//! them: 64-bit offsets indexing 32-bit neighbor ids, neighbor lists sorted
//! ascending with duplicates and self-loops removed. Directed graphs also
//! carry their incoming adjacency so pull-style kernels can read `N⁻(v)`.

use std::ops::Range;

use rayon::prelude::*;
use thiserror::Error;

/// Vertex identifier. Benchmark graphs fit comfortably in 32 bits.
pub type NodeId = u32;

/// Integer edge weight (path cost).
pub type Weight = i32;

/// Exclusive upper bound on vertex ids and on the number of vertices.
pub const MAX_NODES: u64 = 1 << 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("vertex id {id} does not fit in 32 bits")]
    IdOverflow { id: u64 },
    #[error("weighted edge list received an unweighted tuple (or vice versa) at edge {index}")]
    WeightMismatch { index: usize },
    #[error("{weights} weights supplied for {edges} edges")]
    WeightCount { edges: usize, weights: usize },
    #[error("declared node count {declared} is smaller than required {required}")]
    TooFewNodes { declared: u64, required: u64 },
    #[error("operation requires an undirected graph")]
    Directed,
    #[error("invalid CSR layout: {0}")]
    InvalidLayout(String),
}

/// Staging container for raw `(src, dst[, weight])` tuples.
///
/// Tuples are kept in insertion order; the builder handles sorting,
/// deduplication and symmetrization.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeList {
    edges: Vec<(NodeId, NodeId)>,
    weights: Option<Vec<Weight>>,
    num_nodes: Option<u64>,
    symmetric: bool,
}

impl EdgeList {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn new_weighted() -> Self {
        Self {
            weights: Some(Vec::new()),
            ..Self::default()
        }
    }

    pub fn from_pairs(edges: Vec<(NodeId, NodeId)>) -> Self {
        Self {
            edges,
            ..Self::default()
        }
    }

    pub fn from_weighted(edges: &[(NodeId, NodeId, Weight)]) -> Self {
        Self {
            edges: edges.iter().map(|&(u, v, _)| (u, v)).collect(),
            weights: Some(edges.iter().map(|&(_, _, w)| w).collect()),
            ..Self::default()
        }
    }

    /// Assembles a list from parallel arrays; `weights` must match `edges` in length.
    pub fn from_parts(
        edges: Vec<(NodeId, NodeId)>,
        weights: Option<Vec<Weight>>,
    ) -> Result<Self, BuildError> {
        if let Some(w) = &weights {
            if w.len() != edges.len() {
                return Err(BuildError::WeightCount {
                    edges: edges.len(),
                    weights: w.len(),
                });
            }
        }
        Ok(Self {
            edges,
            weights,
            ..Self::default()
        })
    }

    /// Appends one tuple, rejecting ids outside the 32-bit range and tuples
    /// whose weightedness disagrees with the list.
    pub fn push(&mut self, src: u64, dst: u64, weight: Option<Weight>) -> Result<(), BuildError> {
        for id in [src, dst] {
            if id >= MAX_NODES {
                return Err(BuildError::IdOverflow { id });
            }
        }
        match (&mut self.weights, weight) {
            (Some(ws), Some(w)) => ws.push(w),
            (None, None) => {}
            _ => {
                return Err(BuildError::WeightMismatch {
                    index: self.edges.len(),
                })
            }
        }
        self.edges.push((src as NodeId, dst as NodeId));
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn weights(&self) -> Option<&[Weight]> {
        self.weights.as_deref()
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, NodeId, Option<Weight>)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .map(move |(i, &(u, v))| (u, v, self.weights.as_ref().map(|w| w[i])))
    }

    /// Explicit vertex count, for formats that declare it in a header.
    pub fn num_nodes(&self) -> Option<u64> {
        self.num_nodes
    }

    pub fn set_num_nodes(&mut self, n: u64) {
        self.num_nodes = Some(n);
    }

    /// True when the source declared the edges symmetric (e.g. a Matrix
    /// Market `symmetric` header). The builder then always symmetrizes.
    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn set_symmetric(&mut self, symmetric: bool) {
        self.symmetric = symmetric;
    }

    pub(crate) fn into_parts(self) -> (Vec<(NodeId, NodeId)>, Option<Vec<Weight>>) {
        (self.edges, self.weights)
    }
}

/// One direction of adjacency in CSR form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjacency {
    offsets: Vec<u64>,
    neighbors: Vec<NodeId>,
    weights: Option<Vec<Weight>>,
}

impl Adjacency {
    pub fn offsets(&self) -> &[u64] {
        &self.offsets
    }

    pub fn neighbors(&self) -> &[NodeId] {
        &self.neighbors
    }

    pub fn weights(&self) -> Option<&[Weight]> {
        self.weights.as_deref()
    }

    #[inline]
    fn range(&self, v: NodeId) -> Range<usize> {
        let v = v as usize;
        self.offsets[v] as usize..self.offsets[v + 1] as usize
    }

    fn validate(&self, n: usize, weighted: bool) -> Result<(), BuildError> {
        let bad = |msg: &str| Err(BuildError::InvalidLayout(msg.to_string()));
        if self.offsets.len() != n + 1 {
            return bad("offsets length must be n + 1");
        }
        if self.offsets[0] != 0 {
            return bad("offsets must start at 0");
        }
        if self.offsets.windows(2).any(|w| w[0] > w[1]) {
            return bad("offsets must be non-decreasing");
        }
        if self.offsets[n] != self.neighbors.len() as u64 {
            return bad("last offset must equal the neighbor count");
        }
        if self.neighbors.par_iter().any(|&v| v as usize >= n) {
            return bad("neighbor id out of range");
        }
        match &self.weights {
            Some(w) if !weighted || w.len() != self.neighbors.len() => {
                bad("weights must align with neighbors")
            }
            None if weighted => bad("missing weights"),
            _ => Ok(()),
        }
    }
}

/// Immutable compressed-sparse-row graph.
///
/// For undirected graphs every edge is stored once per endpoint, so
/// [`CsrGraph::num_edges`] is twice the undirected edge count, and the
/// incoming view aliases the outgoing one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsrGraph {
    directed: bool,
    num_nodes: usize,
    out: Adjacency,
    inc: Option<Adjacency>,
}

impl CsrGraph {
    /// Reassembles a graph from raw arrays, checking the structural
    /// invariants (offset monotonicity, id range, weight alignment).
    pub fn from_parts(
        directed: bool,
        out_offsets: Vec<u64>,
        out_neighbors: Vec<NodeId>,
        out_weights: Option<Vec<Weight>>,
        incoming: Option<(Vec<u64>, Vec<NodeId>, Option<Vec<Weight>>)>,
    ) -> Result<Self, BuildError> {
        if out_offsets.is_empty() {
            return Err(BuildError::InvalidLayout("empty offsets array".into()));
        }
        let n = out_offsets.len() - 1;
        if n as u64 > MAX_NODES {
            return Err(BuildError::IdOverflow { id: n as u64 });
        }
        let weighted = out_weights.is_some();
        let out = Adjacency {
            offsets: out_offsets,
            neighbors: out_neighbors,
            weights: out_weights,
        };
        out.validate(n, weighted)?;
        let inc = match (directed, incoming) {
            (true, Some((offsets, neighbors, weights))) => {
                let inc = Adjacency {
                    offsets,
                    neighbors,
                    weights,
                };
                inc.validate(n, weighted)?;
                if inc.neighbors.len() != out.neighbors.len() {
                    return Err(BuildError::InvalidLayout(
                        "incoming edge count differs from outgoing".into(),
                    ));
                }
                Some(inc)
            }
            (true, None) => Some(transpose(n, &out)),
            (false, None) => None,
            (false, Some(_)) => {
                return Err(BuildError::InvalidLayout(
                    "undirected graphs carry no separate incoming adjacency".into(),
                ))
            }
        };
        Ok(Self {
            directed,
            num_nodes: n,
            out,
            inc,
        })
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn is_weighted(&self) -> bool {
        self.out.weights.is_some()
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    /// Number of stored directed edges `m`.
    pub fn num_edges(&self) -> usize {
        self.out.neighbors.len()
    }

    /// Edge count as a user would state it: `m` for directed graphs, `m / 2`
    /// for undirected ones.
    pub fn num_edges_undirected(&self) -> usize {
        if self.directed {
            self.num_edges()
        } else {
            self.num_edges() / 2
        }
    }

    #[inline]
    pub fn out_degree(&self, v: NodeId) -> usize {
        let v = v as usize;
        (self.out.offsets[v + 1] - self.out.offsets[v]) as usize
    }

    #[inline]
    pub fn in_degree(&self, v: NodeId) -> usize {
        let adj = self.incoming();
        let v = v as usize;
        (adj.offsets[v + 1] - adj.offsets[v]) as usize
    }

    #[inline]
    pub fn out_neigh(&self, v: NodeId) -> &[NodeId] {
        &self.out.neighbors[self.out.range(v)]
    }

    #[inline]
    pub fn in_neigh(&self, v: NodeId) -> &[NodeId] {
        let adj = self.incoming();
        &adj.neighbors[adj.range(v)]
    }

    /// Outgoing neighbors paired with their weights, or `None` if unweighted.
    #[inline]
    pub fn out_weighted(&self, v: NodeId) -> Option<(&[NodeId], &[Weight])> {
        let r = self.out.range(v);
        let w = self.out.weights.as_ref()?;
        Some((&self.out.neighbors[r.clone()], &w[r]))
    }

    /// Positions of `v`'s outgoing edges within the flat neighbor array.
    #[inline]
    pub fn out_edge_range(&self, v: NodeId) -> Range<usize> {
        self.out.range(v)
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.out_neigh(u).binary_search(&v).is_ok()
    }

    pub fn outgoing(&self) -> &Adjacency {
        &self.out
    }

    /// Incoming adjacency; the outgoing arrays for undirected graphs.
    pub fn incoming(&self) -> &Adjacency {
        self.inc.as_ref().unwrap_or(&self.out)
    }

    pub fn vertices(&self) -> Range<NodeId> {
        0..self.num_nodes as NodeId
    }

    /// Flattens back to tuples. Undirected edges are emitted once, as
    /// `(u, v)` with `u < v`. The vertex count is carried along so trailing
    /// isolated vertices survive a rebuild.
    pub fn to_edge_list(&self) -> EdgeList {
        let mut edges = Vec::with_capacity(self.num_edges_undirected());
        let mut weights = self
            .out
            .weights
            .as_ref()
            .map(|_| Vec::with_capacity(self.num_edges_undirected()));
        for u in self.vertices() {
            let r = self.out.range(u);
            for i in r {
                let v = self.out.neighbors[i];
                if self.directed || u < v {
                    edges.push((u, v));
                    if let (Some(ws), Some(src)) = (&mut weights, &self.out.weights) {
                        ws.push(src[i]);
                    }
                }
            }
        }
        EdgeList {
            edges,
            weights,
            num_nodes: Some(self.num_nodes as u64),
            symmetric: !self.directed,
        }
    }

    /// Undirected copy of this graph (the graph itself if already undirected).
    pub fn symmetrized(&self) -> CsrGraph {
        if !self.directed {
            return self.clone();
        }
        build_csr(&self.to_edge_list(), false, true).expect("flattened graph is well formed")
    }
}

/// Splits `data` into consecutive mutable slices delimited by `offsets`.
pub(crate) fn split_by_offsets<'a, T>(mut data: &'a mut [T], offsets: &[u64]) -> Vec<&'a mut [T]> {
    let mut parts = Vec::with_capacity(offsets.len().saturating_sub(1));
    for w in offsets.windows(2) {
        let (head, tail) = data.split_at_mut((w[1] - w[0]) as usize);
        parts.push(head);
        data = tail;
    }
    parts
}

fn prefix_sum(degrees: &[u64]) -> Vec<u64> {
    let mut offsets = Vec::with_capacity(degrees.len() + 1);
    let mut total = 0u64;
    offsets.push(0);
    for &d in degrees {
        total += d;
        offsets.push(total);
    }
    offsets
}

/// Sorts each vertex's entries by neighbor id, drops duplicate neighbors
/// (keeping the first occurrence) and compacts the array in place.
/// Returns the new offsets.
fn sort_dedup<T, K>(entries: &mut Vec<T>, offsets: &[u64], key: K) -> Vec<u64>
where
    T: Copy + Send,
    K: Fn(&T) -> NodeId + Sync,
{
    let lens: Vec<u64> = split_by_offsets(entries, offsets)
        .into_par_iter()
        .map(|list| {
            // stable, so the first tuple for a neighbor wins
            list.sort_by_key(&key);
            let mut kept = 0;
            for i in 0..list.len() {
                if kept == 0 || key(&list[kept - 1]) != key(&list[i]) {
                    list[kept] = list[i];
                    kept += 1;
                }
            }
            kept as u64
        })
        .collect();
    let new_offsets = prefix_sum(&lens);
    for (v, &len) in lens.iter().enumerate() {
        let src = offsets[v] as usize;
        let dst = new_offsets[v] as usize;
        if src != dst {
            entries.copy_within(src..src + len as usize, dst);
        }
    }
    entries.truncate(*new_offsets.last().unwrap() as usize);
    new_offsets
}

fn transpose(n: usize, out: &Adjacency) -> Adjacency {
    let mut degrees = vec![0u64; n];
    for &v in &out.neighbors {
        degrees[v as usize] += 1;
    }
    let offsets = prefix_sum(&degrees);
    let mut cursor: Vec<u64> = offsets[..n].to_vec();
    let mut neighbors = vec![0 as NodeId; out.neighbors.len()];
    let mut weights = out
        .weights
        .as_ref()
        .map(|_| vec![0 as Weight; out.neighbors.len()]);
    for u in 0..n {
        for i in out.range(u as NodeId) {
            let v = out.neighbors[i] as usize;
            let slot = cursor[v] as usize;
            cursor[v] += 1;
            neighbors[slot] = u as NodeId;
            if let (Some(dst), Some(src)) = (&mut weights, &out.weights) {
                dst[slot] = src[i];
            }
        }
    }
    Adjacency {
        offsets,
        neighbors,
        weights,
    }
}

/// Builds a CSR graph from raw tuples.
///
/// The result is undirected when `symmetrize` is set, when `directed` is
/// false, or when the edge list is marked symmetric; undirected graphs store
/// each edge in both endpoint lists. Self-loops are dropped and duplicate
/// pairs collapse to the first tuple in list order (and so to its weight).
pub fn build_csr(
    edges: &EdgeList,
    directed: bool,
    symmetrize: bool,
) -> Result<CsrGraph, BuildError> {
    let undirected = !directed || symmetrize || edges.is_symmetric();
    if let Some(w) = &edges.weights {
        if w.len() != edges.edges.len() {
            return Err(BuildError::WeightCount {
                edges: edges.edges.len(),
                weights: w.len(),
            });
        }
    }

    let max_id = edges
        .edges
        .par_iter()
        .map(|&(u, v)| u.max(v) as u64 + 1)
        .max()
        .unwrap_or(0);
    let n = match edges.num_nodes {
        Some(declared) if declared < max_id => {
            return Err(BuildError::TooFewNodes {
                declared,
                required: max_id,
            })
        }
        Some(declared) if declared > MAX_NODES => {
            return Err(BuildError::IdOverflow { id: declared - 1 })
        }
        Some(declared) => declared as usize,
        None => max_id as usize,
    };

    let mut degrees = vec![0u64; n];
    for &(u, v) in &edges.edges {
        if u != v {
            degrees[u as usize] += 1;
            if undirected {
                degrees[v as usize] += 1;
            }
        }
    }
    let offsets = prefix_sum(&degrees);
    let total = offsets[n] as usize;
    let mut cursor: Vec<u64> = offsets[..n].to_vec();
    let mut place = |u: NodeId| {
        let slot = cursor[u as usize] as usize;
        cursor[u as usize] += 1;
        slot
    };

    let out = match &edges.weights {
        None => {
            let mut entries = vec![0 as NodeId; total];
            for &(u, v) in &edges.edges {
                if u != v {
                    entries[place(u)] = v;
                    if undirected {
                        entries[place(v)] = u;
                    }
                }
            }
            let offsets = sort_dedup(&mut entries, &offsets, |&v| v);
            Adjacency {
                offsets,
                neighbors: entries,
                weights: None,
            }
        }
        Some(ws) => {
            let mut entries = vec![(0 as NodeId, 0 as Weight); total];
            for (&(u, v), &w) in edges.edges.iter().zip(ws) {
                if u != v {
                    entries[place(u)] = (v, w);
                    if undirected {
                        entries[place(v)] = (u, w);
                    }
                }
            }
            let offsets = sort_dedup(&mut entries, &offsets, |e| e.0);
            let (neighbors, weights) = entries.into_iter().unzip();
            Adjacency {
                offsets,
                neighbors,
                weights: Some(weights),
            }
        }
    };

    let inc = (!undirected).then(|| transpose(n, &out));
    Ok(CsrGraph {
        directed: !undirected,
        num_nodes: n,
        out,
        inc,
    })
}

/// A bijection from old vertex ids to new ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    new_id_of: Vec<NodeId>,
}

impl Permutation {
    pub fn new_id(&self, old: NodeId) -> NodeId {
        self.new_id_of[old as usize]
    }

    pub fn as_slice(&self) -> &[NodeId] {
        &self.new_id_of
    }

    pub fn len(&self) -> usize {
        self.new_id_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.new_id_of.is_empty()
    }

    /// `old_id_of[new] = old`.
    pub fn inverse(&self) -> Vec<NodeId> {
        let mut old = vec![0; self.new_id_of.len()];
        for (o, &n) in self.new_id_of.iter().enumerate() {
            old[n as usize] = o as NodeId;
        }
        old
    }
}

/// Renumbers an undirected graph so ids follow non-increasing degree, ties
/// broken by ascending original id.
pub fn relabel_by_degree(g: &CsrGraph) -> Result<(CsrGraph, Permutation), BuildError> {
    if g.is_directed() {
        return Err(BuildError::Directed);
    }
    let n = g.num_nodes();
    let mut order: Vec<NodeId> = g.vertices().collect();
    order.par_sort_unstable_by_key(|&v| (std::cmp::Reverse(g.out_degree(v)), v));

    let mut new_id_of = vec![0 as NodeId; n];
    for (new, &old) in order.iter().enumerate() {
        new_id_of[old as usize] = new as NodeId;
    }
    let degrees: Vec<u64> = order.iter().map(|&old| g.out_degree(old) as u64).collect();
    let offsets = prefix_sum(&degrees);

    let mut neighbors = vec![0 as NodeId; g.num_edges()];
    let mut weights = g.is_weighted().then(|| vec![0 as Weight; g.num_edges()]);
    match &mut weights {
        None => {
            split_by_offsets(&mut neighbors, &offsets)
                .into_par_iter()
                .zip(order.par_iter())
                .for_each(|(dst, &old)| {
                    for (slot, &v) in dst.iter_mut().zip(g.out_neigh(old)) {
                        *slot = new_id_of[v as usize];
                    }
                    dst.sort_unstable();
                });
        }
        Some(wdst) => {
            split_by_offsets(&mut neighbors, &offsets)
                .into_par_iter()
                .zip(split_by_offsets(wdst, &offsets).into_par_iter())
                .zip(order.par_iter())
                .for_each(|((ndst, wdst), &old)| {
                    let (ns, ws) = g.out_weighted(old).expect("weighted");
                    let mut pairs: Vec<(NodeId, Weight)> = ns
                        .iter()
                        .zip(ws)
                        .map(|(&v, &w)| (new_id_of[v as usize], w))
                        .collect();
                    pairs.sort_unstable();
                    for (i, (v, w)) in pairs.into_iter().enumerate() {
                        ndst[i] = v;
                        wdst[i] = w;
                    }
                });
        }
    }

    let graph = CsrGraph {
        directed: false,
        num_nodes: n,
        out: Adjacency {
            offsets,
            neighbors,
            weights,
        },
        inc: None,
    };
    Ok((graph, Permutation { new_id_of }))
}
