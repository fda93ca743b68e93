//! Multidigraph representation and the predicates everything else is built on.
//!
//! A digraph is a vertex list plus a labeled arc list; loops and parallel arcs
//! are allowed. Declaration order is significant: the position of an arc in
//! the input file *is* its index, and enumeration and circuit decomposition
//! are specified in terms of that order.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::bitset::{ArcSubset, VertexSet};

/// One labeled arc. `source`/`target` are vertex indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    pub label: String,
    pub source: usize,
    pub target: usize,
}

/// An immutable directed multigraph.
///
/// Vertices and arcs keep their declaration order; adjacency indexes are
/// built once at construction and shared by all queries. The struct has no
/// interior mutability, so it can be shared freely across threads.
#[derive(Clone)]
pub struct Multidigraph {
    vertex_ids: Vec<String>,
    arcs: Vec<Arc>,
    id_index: HashMap<String, usize>,
    label_index: HashMap<String, usize>,
    /// Arc indices with the given source, ascending.
    out_arcs: Vec<Vec<u32>>,
    /// Arc indices with the given target, ascending.
    in_arcs: Vec<Vec<u32>>,
}

impl PartialEq for Multidigraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_ids == other.vertex_ids && self.arcs == other.arcs
    }
}

impl Eq for Multidigraph {}

impl fmt::Debug for Multidigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Multidigraph({}v, {}a)",
            self.vertex_ids.len(),
            self.arcs.len()
        )
    }
}

/// Error from the line-oriented graph file parser. Every variant carries the
/// 1-based line number it was raised on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    DuplicateVertex { line: usize, id: String },
    DuplicateArcLabel { line: usize, label: String },
    UnknownVertex { line: usize, id: String },
    Malformed { line: usize, reason: String },
    TooManyVertices { line: usize, limit: usize },
    TooManyArcs { line: usize, limit: usize },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::DuplicateVertex { line, id } => {
                write!(f, "line {line}: duplicate vertex id `{id}`")
            }
            ParseError::DuplicateArcLabel { line, label } => {
                write!(f, "line {line}: duplicate arc label `{label}`")
            }
            ParseError::UnknownVertex { line, id } => {
                write!(f, "line {line}: arc references undeclared vertex `{id}`")
            }
            ParseError::Malformed { line, reason } => {
                write!(f, "line {line}: {reason}")
            }
            ParseError::TooManyVertices { line, limit } => {
                write!(
                    f,
                    "line {line}: more than {limit} vertices are not supported"
                )
            }
            ParseError::TooManyArcs { line, limit } => {
                write!(f, "line {line}: more than {limit} arcs are not supported")
            }
        }
    }
}

impl std::error::Error for ParseError {}

/// Error from programmatic construction (no line numbers).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    DuplicateVertex(String),
    DuplicateArcLabel(String),
    VertexIndexOutOfRange { index: usize, count: usize },
    TooManyVertices { limit: usize },
    TooManyArcs { limit: usize },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::DuplicateVertex(id) => write!(f, "duplicate vertex id `{id}`"),
            GraphError::DuplicateArcLabel(l) => write!(f, "duplicate arc label `{l}`"),
            GraphError::VertexIndexOutOfRange { index, count } => {
                write!(
                    f,
                    "vertex index {index} out of range (digraph has {count} vertices)"
                )
            }
            GraphError::TooManyVertices { limit } => {
                write!(f, "more than {limit} vertices are not supported")
            }
            GraphError::TooManyArcs { limit } => {
                write!(f, "more than {limit} arcs are not supported")
            }
        }
    }
}

impl std::error::Error for GraphError {}

/// An ordered bipartition V = P ⊔ Q together with the two crossing arc sets:
/// `a_pq` holds the arcs with source in `p` and target in `q`, `a_qp` the
/// reverse crossings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Partition {
    pub p: VertexSet,
    pub q: VertexSet,
    pub a_pq: ArcSubset,
    pub a_qp: ArcSubset,
}

impl Multidigraph {
    /// Build from parts, validating ids, labels, indices and size limits.
    pub fn new(
        vertex_ids: Vec<String>,
        arcs: Vec<(String, usize, usize)>,
    ) -> Result<Self, GraphError> {
        if vertex_ids.len() > VertexSet::MAX_VERTICES {
            return Err(GraphError::TooManyVertices {
                limit: VertexSet::MAX_VERTICES,
            });
        }
        if arcs.len() > ArcSubset::MAX_ARCS {
            return Err(GraphError::TooManyArcs {
                limit: ArcSubset::MAX_ARCS,
            });
        }
        let mut id_index = HashMap::new();
        for (i, id) in vertex_ids.iter().enumerate() {
            if id_index.insert(id.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(id.clone()));
            }
        }
        let mut label_index = HashMap::new();
        let n = vertex_ids.len();
        let mut arc_list = Vec::with_capacity(arcs.len());
        for (i, (label, source, target)) in arcs.into_iter().enumerate() {
            for &v in &[source, target] {
                if v >= n {
                    return Err(GraphError::VertexIndexOutOfRange { index: v, count: n });
                }
            }
            if label_index.insert(label.clone(), i).is_some() {
                return Err(GraphError::DuplicateArcLabel(label));
            }
            arc_list.push(Arc {
                label,
                source,
                target,
            });
        }
        Ok(Self::assemble(vertex_ids, arc_list, id_index, label_index))
    }

    fn assemble(
        vertex_ids: Vec<String>,
        arcs: Vec<Arc>,
        id_index: HashMap<String, usize>,
        label_index: HashMap<String, usize>,
    ) -> Self {
        let n = vertex_ids.len();
        let mut out_arcs = vec![Vec::new(); n];
        let mut in_arcs = vec![Vec::new(); n];
        for (i, a) in arcs.iter().enumerate() {
            out_arcs[a.source].push(i as u32);
            in_arcs[a.target].push(i as u32);
        }
        Multidigraph {
            vertex_ids,
            arcs,
            id_index,
            label_index,
            out_arcs,
            in_arcs,
        }
    }

    /// Parse the line-oriented graph file format.
    ///
    /// Blank lines and lines starting with `#` are skipped. `v <id>` declares
    /// a vertex, `a <label> <source-id> <target-id>` declares an arc; vertices
    /// must be declared before an arc references them.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut vertex_ids: Vec<String> = Vec::new();
        let mut id_index: HashMap<String, usize> = HashMap::new();
        let mut label_index: HashMap<String, usize> = HashMap::new();
        let mut arcs: Vec<Arc> = Vec::new();

        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = trimmed.split_whitespace().collect();
            match tokens[0] {
                "v" => {
                    if tokens.len() != 2 {
                        return Err(ParseError::Malformed {
                            line,
                            reason: format!("expected `v <id>`, got `{trimmed}`"),
                        });
                    }
                    let id = tokens[1].to_string();
                    if id_index.contains_key(&id) {
                        return Err(ParseError::DuplicateVertex { line, id });
                    }
                    if vertex_ids.len() == VertexSet::MAX_VERTICES {
                        return Err(ParseError::TooManyVertices {
                            line,
                            limit: VertexSet::MAX_VERTICES,
                        });
                    }
                    id_index.insert(id.clone(), vertex_ids.len());
                    vertex_ids.push(id);
                }
                "a" => {
                    if tokens.len() != 4 {
                        return Err(ParseError::Malformed {
                            line,
                            reason: format!(
                                "expected `a <label> <source> <target>`, got `{trimmed}`"
                            ),
                        });
                    }
                    let label = tokens[1].to_string();
                    if label_index.contains_key(&label) {
                        return Err(ParseError::DuplicateArcLabel { line, label });
                    }
                    let source =
                        *id_index
                            .get(tokens[2])
                            .ok_or_else(|| ParseError::UnknownVertex {
                                line,
                                id: tokens[2].to_string(),
                            })?;
                    let target =
                        *id_index
                            .get(tokens[3])
                            .ok_or_else(|| ParseError::UnknownVertex {
                                line,
                                id: tokens[3].to_string(),
                            })?;
                    if arcs.len() == ArcSubset::MAX_ARCS {
                        return Err(ParseError::TooManyArcs {
                            line,
                            limit: ArcSubset::MAX_ARCS,
                        });
                    }
                    label_index.insert(label.clone(), arcs.len());
                    arcs.push(Arc {
                        label,
                        source,
                        target,
                    });
                }
                other => {
                    return Err(ParseError::Malformed {
                        line,
                        reason: format!("unknown directive `{other}`"),
                    });
                }
            }
        }
        Ok(Self::assemble(vertex_ids, arcs, id_index, label_index))
    }

    /// Render back to the file format; `parse(to_text(d)) == d`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for id in &self.vertex_ids {
            out.push_str("v ");
            out.push_str(id);
            out.push('\n');
        }
        for a in &self.arcs {
            out.push_str(&format!(
                "a {} {} {}\n",
                a.label, self.vertex_ids[a.source], self.vertex_ids[a.target]
            ));
        }
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertex_ids
    }

    pub fn vertex_id(&self, index: usize) -> &str {
        &self.vertex_ids[index]
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.id_index.get(id).copied()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, index: usize) -> &Arc {
        &self.arcs[index]
    }

    pub fn arc_index(&self, label: &str) -> Option<usize> {
        self.label_index.get(label).copied()
    }

    pub fn out_arcs(&self, vertex: usize) -> &[u32] {
        &self.out_arcs[vertex]
    }

    pub fn in_arcs(&self, vertex: usize) -> &[u32] {
        &self.in_arcs[vertex]
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.vertex_count())
    }

    pub fn all_arcs(&self) -> ArcSubset {
        ArcSubset::full(self.arc_count())
    }

    /// Subset of the arc set by labels; `None` if some label is unknown.
    pub fn arcs_by_labels<'a, I: IntoIterator<Item = &'a str>>(
        &self,
        labels: I,
    ) -> Option<ArcSubset> {
        let mut s = ArcSubset::empty();
        for l in labels {
            s.insert(self.arc_index(l)?);
        }
        Some(s)
    }

    /// Labels of the arcs in `b`, in arc-index order.
    pub fn labels(&self, b: ArcSubset) -> Vec<&str> {
        b.iter().map(|i| self.arcs[i].label.as_str()).collect()
    }

    /// Per-vertex (outdegree, indegree). A loop contributes 1 to each.
    pub fn degrees(&self) -> Vec<(usize, usize)> {
        (0..self.vertex_count())
            .map(|v| (self.out_arcs[v].len(), self.in_arcs[v].len()))
            .collect()
    }

    /// True iff every vertex has outdegree = indegree.
    pub fn is_balanced(&self) -> bool {
        self.degrees().iter().all(|&(o, i)| o == i)
    }

    /// The attraction basin of `target` under `b`: all vertices from which a
    /// walk to `target` exists in the spanning subdigraph with arc set `b`.
    /// Always contains `target` itself (path of length 0). Computed as a
    /// reverse breadth-first search over the in-arc index.
    pub fn basin(&self, b: ArcSubset, target: usize) -> VertexSet {
        assert!(target < self.vertex_count(), "basin target out of range");
        let mut seen = VertexSet::singleton(target);
        let mut queue = VecDeque::from([target]);
        while let Some(v) = queue.pop_front() {
            for &ai in &self.in_arcs[v] {
                if b.contains(ai as usize) {
                    let u = self.arcs[ai as usize].source;
                    if !seen.contains(u) {
                        seen.insert(u);
                        queue.push_back(u);
                    }
                }
            }
        }
        seen
    }

    /// True iff the spanning subdigraph with arc set `b` has no directed
    /// cycle. A loop is a cycle of length 1. Kahn-style elimination: strip
    /// vertices of in-degree 0 until nothing moves; acyclic iff every arc of
    /// `b` got consumed.
    pub fn is_acyclic(&self, b: ArcSubset) -> bool {
        let n = self.vertex_count();
        let mut indeg = vec![0u32; n];
        for ai in b.iter() {
            indeg[self.arcs[ai].target] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut consumed = 0usize;
        while let Some(v) = stack.pop() {
            for &ai in &self.out_arcs[v] {
                if b.contains(ai as usize) {
                    consumed += 1;
                    let t = self.arcs[ai as usize].target;
                    indeg[t] -= 1;
                    if indeg[t] == 0 {
                        stack.push(t);
                    }
                }
            }
        }
        consumed == b.len()
    }

    /// Vertices with no outgoing arc in `b`. The subdigraph is spanning, so
    /// isolated vertices count as sinks.
    pub fn sinks(&self, b: ArcSubset) -> VertexSet {
        let mut has_out = VertexSet::empty();
        for ai in b.iter() {
            has_out.insert(self.arcs[ai].source);
        }
        has_out.complement(self.vertex_count())
    }

    /// True iff `b` is acyclic and every vertex can `b`-reach `s`.
    ///
    /// This is the to-root definition; [`Multidigraph::is_convergence_unique_sink`]
    /// decides the same predicate through the sink characterization and the
    /// two must agree on every acyclic subset.
    pub fn is_convergence(&self, b: ArcSubset, s: usize) -> bool {
        self.is_acyclic(b) && self.basin(b, s) == self.all_vertices()
    }

    /// True iff `b` is acyclic and `s` is the only sink of the subdigraph.
    /// One degree scan instead of a reachability search.
    pub fn is_convergence_unique_sink(&self, b: ArcSubset, s: usize) -> bool {
        self.is_acyclic(b) && self.sinks(b) == VertexSet::singleton(s)
    }

    /// Split the vertex set into `p` and its complement and collect both
    /// crossing arc sets in one scan.
    pub fn partition(&self, p: VertexSet) -> Partition {
        let q = p.complement(self.vertex_count());
        let mut a_pq = ArcSubset::empty();
        let mut a_qp = ArcSubset::empty();
        for (i, a) in self.arcs.iter().enumerate() {
            let sp = p.contains(a.source);
            let tp = p.contains(a.target);
            if sp && !tp {
                a_pq.insert(i);
            } else if !sp && tp {
                a_qp.insert(i);
            }
        }
        Partition { p, q, a_pq, a_qp }
    }

    /// True iff the underlying undirected graph is connected (vacuously true
    /// for at most one vertex).
    pub fn is_weakly_connected(&self) -> bool {
        let n = self.vertex_count();
        if n <= 1 {
            return true;
        }
        let mut seen = VertexSet::singleton(0);
        let mut stack = vec![0usize];
        while let Some(v) = stack.pop() {
            let neighbors = self.out_arcs[v]
                .iter()
                .map(|&ai| self.arcs[ai as usize].target)
                .chain(
                    self.in_arcs[v]
                        .iter()
                        .map(|&ai| self.arcs[ai as usize].source),
                );
            for w in neighbors {
                if !seen.contains(w) {
                    seen.insert(w);
                    stack.push(w);
                }
            }
        }
        seen == self.all_vertices()
    }
}

/// The 4-vertex, 7-arc balanced fixture used throughout the test suite.
#[cfg(test)]
pub(crate) fn fixture7() -> Multidigraph {
    Multidigraph::parse(
        "v 1\nv 2\nv 3\nv 4\n\
         a a 1 2\na b 2 1\na c 2 3\na d 3 4\na e 4 2\na f 1 4\na g 4 1\n",
    )
    .unwrap()
}
