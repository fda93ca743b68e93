//! Independent oracles: spanning-arborescence counts via an integer
//! determinant, acyclic-orientation counts on bidirected graphs, and a naive
//! power-set enumerator. None of these share search machinery with the pruned
//! enumerator, which is the point.

use std::collections::HashMap;
use std::fmt;

use crate::bitset::ArcSubset;
use crate::digraph::{Multidigraph, ParseError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CrosscheckError {
    /// Input too large for the brute-force path.
    SizeLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    VertexOutOfRange {
        index: usize,
        count: usize,
    },
    /// Exact integer arithmetic left the supported range.
    Overflow,
}

impl fmt::Display for CrosscheckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CrosscheckError::SizeLimit { what, size, limit } => {
                write!(f, "{what} of size {size} exceeds brute-force limit {limit}")
            }
            CrosscheckError::VertexOutOfRange { index, count } => {
                write!(
                    f,
                    "vertex index {index} out of range (graph has {count} vertices)"
                )
            }
            CrosscheckError::Overflow => write!(f, "exact arithmetic overflow"),
        }
    }
}

impl std::error::Error for CrosscheckError {}

/// One labeled undirected edge; loops (u == v) and parallel edges allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub label: String,
    pub u: usize,
    pub v: usize,
}

/// An undirected multigraph, parsed from the same line discipline as the
/// digraph format with `e <label> <u> <v>` edge lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UndirectedMultigraph {
    vertex_ids: Vec<String>,
    edges: Vec<Edge>,
}

impl UndirectedMultigraph {
    pub fn new(vertex_ids: Vec<String>, edges: Vec<(String, usize, usize)>) -> Self {
        let n = vertex_ids.len();
        assert!(n <= 64, "too many vertices");
        assert!(edges.len() <= 64, "too many edges");
        let edges = edges
            .into_iter()
            .map(|(label, u, v)| {
                assert!(u < n && v < n, "edge endpoint out of range");
                Edge { label, u, v }
            })
            .collect();
        UndirectedMultigraph { vertex_ids, edges }
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut vertex_ids: Vec<String> = Vec::new();
        let mut id_index: HashMap<String, usize> = HashMap::new();
        let mut labels: HashMap<String, usize> = HashMap::new();
        let mut edges: Vec<Edge> = Vec::new();
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
                    if vertex_ids.len() == 64 {
                        return Err(ParseError::TooManyVertices { line, limit: 64 });
                    }
                    id_index.insert(id.clone(), vertex_ids.len());
                    vertex_ids.push(id);
                }
                "e" => {
                    if tokens.len() != 4 {
                        return Err(ParseError::Malformed {
                            line,
                            reason: format!("expected `e <label> <u> <v>`, got `{trimmed}`"),
                        });
                    }
                    let label = tokens[1].to_string();
                    if labels.contains_key(&label) {
                        return Err(ParseError::DuplicateArcLabel { line, label });
                    }
                    let u = *id_index
                        .get(tokens[2])
                        .ok_or_else(|| ParseError::UnknownVertex {
                            line,
                            id: tokens[2].to_string(),
                        })?;
                    let v = *id_index
                        .get(tokens[3])
                        .ok_or_else(|| ParseError::UnknownVertex {
                            line,
                            id: tokens[3].to_string(),
                        })?;
                    // 64 edges keep the bidirected digraph inside the 128-arc limit
                    if edges.len() == 64 {
                        return Err(ParseError::TooManyArcs { line, limit: 64 });
                    }
                    labels.insert(label.clone(), edges.len());
                    edges.push(Edge { label, u, v });
                }
                other => {
                    return Err(ParseError::Malformed {
                        line,
                        reason: format!("unknown directive `{other}`"),
                    });
                }
            }
        }
        Ok(UndirectedMultigraph { vertex_ids, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertex_ids
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertex_ids.iter().position(|x| x == id)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Replace each edge with two opposite arcs, labeled `<label>>` (u to v)
    /// and `<label><` (v to u). The result is balanced by construction.
    pub fn bidirect(&self) -> Multidigraph {
        let arcs = self
            .edges
            .iter()
            .flat_map(|e| {
                [
                    (format!("{}>", e.label), e.u, e.v),
                    (format!("{}<", e.label), e.v, e.u),
                ]
            })
            .collect();
        Multidigraph::new(self.vertex_ids.clone(), arcs)
            .expect("bidirected graph stays within limits")
    }
}

/// One direction choice per edge of an undirected multigraph, packed as a
/// mask (bit i set = edge i runs v -> u instead of u -> v).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Orientation {
    mask: u64,
}

impl Orientation {
    pub fn from_mask(mask: u64) -> Self {
        Orientation { mask }
    }

    pub fn mask(self) -> u64 {
        self.mask
    }

    /// The arc the i-th edge becomes under this orientation.
    pub fn arc(self, g: &UndirectedMultigraph, i: usize) -> (usize, usize) {
        let e = &g.edges[i];
        if self.mask & (1 << i) == 0 {
            (e.u, e.v)
        } else {
            (e.v, e.u)
        }
    }

    pub fn arcs(self, g: &UndirectedMultigraph) -> Vec<(usize, usize)> {
        (0..g.edge_count()).map(|i| self.arc(g, i)).collect()
    }
}

const ORIENTATION_EDGE_LIMIT: usize = 24;

/// Count the orientations of `g` that are acyclic with sink set exactly {s}.
///
/// Brute force over all 2^|E| direction masks with a local elimination check;
/// deliberately shares nothing with the subset enumerator.
pub fn count_unique_sink_orientations(
    g: &UndirectedMultigraph,
    s: usize,
) -> Result<u64, CrosscheckError> {
    let n = g.vertex_count();
    let m = g.edge_count();
    if s >= n {
        return Err(CrosscheckError::VertexOutOfRange { index: s, count: n });
    }
    if m > ORIENTATION_EDGE_LIMIT {
        return Err(CrosscheckError::SizeLimit {
            what: "edge set",
            size: m,
            limit: ORIENTATION_EDGE_LIMIT,
        });
    }
    // Any loop makes every orientation cyclic.
    if g.edges.iter().any(|e| e.u == e.v) {
        return Ok(0);
    }
    let mut count = 0u64;
    for mask in 0u64..(1u64 << m) {
        let arcs = Orientation::from_mask(mask).arcs(g);
        if orientation_is_acyclic(n, &arcs) && sink_set(n, &arcs) == 1u64 << s {
            count += 1;
        }
    }
    Ok(count)
}

fn orientation_is_acyclic(n: usize, arcs: &[(usize, usize)]) -> bool {
    let mut indeg = vec![0u32; n];
    for &(_, t) in arcs {
        indeg[t] += 1;
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0usize;
    while let Some(v) = stack.pop() {
        seen += 1;
        for &(u, t) in arcs {
            if u == v {
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    stack.push(t);
                }
            }
        }
    }
    seen == n
}

fn sink_set(n: usize, arcs: &[(usize, usize)]) -> u64 {
    let mut has_out = 0u64;
    for &(u, _) in arcs {
        has_out |= 1 << u;
    }
    !has_out & if n == 64 { u64::MAX } else { (1u64 << n) - 1 }
}

/// Number of spanning arborescences of `d` converging to `root`: the minor of
/// the out-degree Laplacian with row and column `root` removed, evaluated as
/// an exact integer by fraction-free elimination. Loops cancel in the
/// Laplacian and are skipped.
pub fn matrix_tree_to_root(d: &Multidigraph, root: usize) -> Result<u64, CrosscheckError> {
    let n = d.vertex_count();
    if root >= n {
        return Err(CrosscheckError::VertexOutOfRange {
            index: root,
            count: n,
        });
    }
    let mut lap = vec![vec![0i128; n]; n];
    for a in d.arcs() {
        if a.source == a.target {
            continue;
        }
        lap[a.source][a.source] += 1;
        lap[a.source][a.target] -= 1;
    }
    let keep: Vec<usize> = (0..n).filter(|&v| v != root).collect();
    let minor: Vec<Vec<i128>> = keep
        .iter()
        .map(|&i| keep.iter().map(|&j| lap[i][j]).collect())
        .collect();
    let det = bareiss_determinant(minor)?;
    u64::try_from(det).map_err(|_| CrosscheckError::Overflow)
}

/// Fraction-free (Bareiss) determinant over exact integers. Every division is
/// exact; the determinant of an empty matrix is 1.
fn bareiss_determinant(mut m: Vec<Vec<i128>>) -> Result<i128, CrosscheckError> {
    let n = m.len();
    if n == 0 {
        return Ok(1);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let Some(pivot) = (k + 1..n).find(|&r| m[r][k] != 0) else {
                return Ok(0);
            };
            m.swap(k, pivot);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = m[i][j]
                    .checked_mul(m[k][k])
                    .ok_or(CrosscheckError::Overflow)?;
                let b = m[i][k]
                    .checked_mul(m[k][j])
                    .ok_or(CrosscheckError::Overflow)?;
                m[i][j] = a.checked_sub(b).ok_or(CrosscheckError::Overflow)? / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    Ok(sign * m[n - 1][n - 1])
}

const NAIVE_ARC_LIMIT: usize = 20;

/// γ_k(s) by filtering every one of the 2^|A| subsets with the digraph-core
/// predicates (acyclicity by Kahn elimination, to-rootness by reachability).
/// The only code shared with the pruned enumerator is those predicates.
pub fn naive_gamma(d: &Multidigraph, s: usize, k: usize) -> Result<u64, CrosscheckError> {
    let n = d.vertex_count();
    let m = d.arc_count();
    if s >= n {
        return Err(CrosscheckError::VertexOutOfRange { index: s, count: n });
    }
    if m > NAIVE_ARC_LIMIT {
        return Err(CrosscheckError::SizeLimit {
            what: "arc set",
            size: m,
            limit: NAIVE_ARC_LIMIT,
        });
    }
    if k > m {
        return Ok(0);
    }
    let all = d.all_vertices();
    let mut count = 0u64;
    for mask in 0u128..(1u128 << m) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let b = ArcSubset::from_bits(mask);
        if d.is_acyclic(b) && d.basin(b, s) == all {
            count += 1;
        }
    }
    Ok(count)
}
