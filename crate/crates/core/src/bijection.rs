//! The explicit bijections: circuit decomposition of a balanced digraph, the
//! crossing-arc bijection β, the strip/refill maps between the basin buckets
//! and the X families, the combined map φ on U_k, and the involution-principle
//! map ψ from s-convergences to t-convergences.
//!
//! Everything here is a pure function of immutable inputs. Preconditions are
//! checked and reported clause by clause; the postconditions the proofs
//! promise are re-verified at runtime and reported as internal errors if they
//! ever fail.

use std::collections::HashMap;
use std::fmt;

use crate::bitset::{ArcSubset, VertexSet};
use crate::digraph::{Multidigraph, Partition};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BijectionError {
    NotBalanced,
    VertexOutOfRange {
        index: usize,
        count: usize,
    },
    InvalidDecomposition {
        reason: String,
    },
    /// A caller-facing precondition does not hold.
    Precondition {
        operation: &'static str,
        clause: &'static str,
    },
    /// A proved postcondition failed at runtime; this is a bug, not bad input.
    Postcondition {
        operation: &'static str,
        clause: &'static str,
    },
    /// ψ failed to land after |V| applications of φ⁻¹; also a bug.
    IterationOverrun {
        limit: usize,
    },
}

impl fmt::Display for BijectionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BijectionError::NotBalanced => {
                write!(
                    f,
                    "digraph is not balanced; no circuit decomposition exists"
                )
            }
            BijectionError::VertexOutOfRange { index, count } => {
                write!(
                    f,
                    "vertex index {index} out of range (digraph has {count} vertices)"
                )
            }
            BijectionError::InvalidDecomposition { reason } => {
                write!(f, "invalid circuit decomposition: {reason}")
            }
            BijectionError::Precondition { operation, clause } => {
                write!(f, "{operation}: precondition violated: {clause}")
            }
            BijectionError::Postcondition { operation, clause } => {
                write!(
                    f,
                    "{operation}: postcondition failed (internal bug): {clause}"
                )
            }
            BijectionError::IterationOverrun { limit } => {
                write!(f, "involution exceeded {limit} iterations (internal bug)")
            }
        }
    }
}

impl std::error::Error for BijectionError {}

/// Arc-disjoint directed circuits covering the whole arc set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitDecomposition {
    circuits: Vec<Vec<u32>>,
    /// arc index -> (circuit id, position on that circuit)
    slot: Vec<(u32, u32)>,
}

impl CircuitDecomposition {
    pub fn circuits(&self) -> &[Vec<u32>] {
        &self.circuits
    }

    pub fn circuit_of(&self, arc: usize) -> (usize, usize) {
        let (c, p) = self.slot[arc];
        (c as usize, p as usize)
    }

    /// Check arc-disjointness, coverage and closedness against `d`.
    pub fn validate(&self, d: &Multidigraph) -> Result<(), BijectionError> {
        let na = d.arc_count();
        let mut seen = vec![false; na];
        for circuit in &self.circuits {
            if circuit.is_empty() {
                return Err(BijectionError::InvalidDecomposition {
                    reason: "empty circuit".into(),
                });
            }
            for (i, &ai) in circuit.iter().enumerate() {
                let ai = ai as usize;
                if ai >= na || seen[ai] {
                    return Err(BijectionError::InvalidDecomposition {
                        reason: format!("arc index {ai} repeated or out of range"),
                    });
                }
                seen[ai] = true;
                let next = circuit[(i + 1) % circuit.len()] as usize;
                if d.arc(ai).target != d.arc(next).source {
                    return Err(BijectionError::InvalidDecomposition {
                        reason: format!("arcs {ai} and {next} do not chain"),
                    });
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(BijectionError::InvalidDecomposition {
                reason: "not all arcs covered".into(),
            });
        }
        Ok(())
    }
}

/// Canonical circuit decomposition of a balanced digraph.
///
/// Repeatedly: take the lowest-indexed unused arc, walk forward always along
/// the lowest-indexed unused out-arc, and stop as soon as the walk revisits
/// one of its own vertices. The closing cycle becomes the next circuit; tail
/// arcs of a lasso-shaped walk go back to the unused pool. Deterministic
/// given the arc declaration order.
pub fn circuit_decomposition(d: &Multidigraph) -> Result<CircuitDecomposition, BijectionError> {
    if !d.is_balanced() {
        return Err(BijectionError::NotBalanced);
    }
    let na = d.arc_count();
    let mut used = vec![false; na];
    let mut remaining = na;
    let mut circuits: Vec<Vec<u32>> = Vec::new();
    let mut lowest = 0usize;
    while remaining > 0 {
        while used[lowest] {
            lowest += 1;
        }
        let first = lowest;
        let v0 = d.arc(first).source;
        let mut walk: Vec<u32> = vec![first as u32];
        let mut pos: HashMap<usize, usize> = HashMap::new();
        pos.insert(v0, 0);
        let mut cur = d.arc(first).target;
        while !pos.contains_key(&cur) {
            pos.insert(cur, walk.len());
            let next = d
                .out_arcs(cur)
                .iter()
                .copied()
                .find(|&ai| !used[ai as usize])
                .ok_or_else(|| BijectionError::InvalidDecomposition {
                    reason: format!("walk stuck at vertex index {cur}"),
                })?;
            walk.push(next);
            cur = d.arc(next as usize).target;
        }
        // The closing cycle starts where the repeated vertex first appeared;
        // any earlier arcs are the lasso tail and stay unused.
        let circuit = walk.split_off(pos[&cur]);
        for &ai in &circuit {
            used[ai as usize] = true;
        }
        remaining -= circuit.len();
        circuits.push(circuit);
    }
    let mut slot = vec![(0u32, 0u32); na];
    for (ci, circuit) in circuits.iter().enumerate() {
        for (pi, &ai) in circuit.iter().enumerate() {
            slot[ai as usize] = (ci as u32, pi as u32);
        }
    }
    Ok(CircuitDecomposition { circuits, slot })
}

/// The bijection β: A(P,Q) -> A(Q,P) induced by a circuit decomposition:
/// each crossing arc maps to the next opposite crossing on its circuit.
#[derive(Clone, Debug)]
pub struct CrossingBijection {
    pub partition: Partition,
    forward: Vec<Option<u32>>,
    backward: Vec<Option<u32>>,
}

impl CrossingBijection {
    pub fn forward(&self, arc: usize) -> Option<usize> {
        self.forward[arc].map(|a| a as usize)
    }

    pub fn backward(&self, arc: usize) -> Option<usize> {
        self.backward[arc].map(|a| a as usize)
    }

    /// Image of a subset of A(P,Q) under β.
    pub fn map_forward(&self, c: ArcSubset) -> Result<ArcSubset, BijectionError> {
        let mut out = ArcSubset::empty();
        for a in c.iter() {
            out.insert(self.forward(a).ok_or(BijectionError::Precondition {
                operation: "crossing map",
                clause: "argument arcs must lie in A(P,Q)",
            })?);
        }
        Ok(out)
    }

    /// Preimage of a subset of A(Q,P) under β.
    pub fn map_backward(&self, c: ArcSubset) -> Result<ArcSubset, BijectionError> {
        let mut out = ArcSubset::empty();
        for a in c.iter() {
            out.insert(self.backward(a).ok_or(BijectionError::Precondition {
                operation: "crossing map",
                clause: "argument arcs must lie in A(Q,P)",
            })?);
        }
        Ok(out)
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.forward
            .iter()
            .enumerate()
            .filter_map(|(a, img)| img.map(|b| (a, b as usize)))
            .collect()
    }
}

/// Build β for one partition. On every circuit the crossing arcs must
/// alternate between A(P,Q) and A(Q,P) (which also forces |A(P,Q)| =
/// |A(Q,P)|); each A(P,Q) arc is paired with the next A(Q,P) arc in cyclic
/// circuit order.
pub fn crossing_bijection(
    d: &Multidigraph,
    dec: &CircuitDecomposition,
    part: &Partition,
) -> Result<CrossingBijection, BijectionError> {
    if !d.is_balanced() {
        return Err(BijectionError::NotBalanced);
    }
    dec.validate(d)?;
    let na = d.arc_count();
    let mut forward = vec![None; na];
    let mut backward = vec![None; na];
    for circuit in dec.circuits() {
        // crossing arcs in circuit order, true = P->Q
        let crossings: Vec<(u32, bool)> = circuit
            .iter()
            .filter_map(|&ai| {
                if part.a_pq.contains(ai as usize) {
                    Some((ai, true))
                } else if part.a_qp.contains(ai as usize) {
                    Some((ai, false))
                } else {
                    None
                }
            })
            .collect();
        if crossings.is_empty() {
            continue;
        }
        let m = crossings.len();
        for i in 0..m {
            if crossings[i].1 == crossings[(i + 1) % m].1 {
                return Err(BijectionError::Postcondition {
                    operation: "crossing bijection",
                    clause: "crossing arcs alternate along every circuit",
                });
            }
        }
        for i in 0..m {
            let (a, is_pq) = crossings[i];
            if is_pq {
                let (b, _) = crossings[(i + 1) % m];
                forward[a as usize] = Some(b);
                backward[b as usize] = Some(a);
            }
        }
    }
    Ok(CrossingBijection {
        partition: *part,
        forward,
        backward,
    })
}

/// One application of φ⁻¹ as recorded in a ψ trace: the partition it used,
/// the crossing arcs removed and inserted, and the subset it produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub p: VertexSet,
    pub q: VertexSet,
    pub stripped: ArcSubset,
    pub inserted: ArcSubset,
    pub after: ArcSubset,
}

/// Full record of one ψ evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutionTrace {
    pub start: ArcSubset,
    pub steps: Vec<TraceStep>,
    pub result: ArcSubset,
}

/// The strip/refill/φ/ψ machinery for one digraph and one ordered vertex
/// pair (s, t), sharing a single canonical circuit decomposition across all
/// partitions.
pub struct BijectionContext<'a> {
    d: &'a Multidigraph,
    s: usize,
    t: usize,
    dec: CircuitDecomposition,
}

impl<'a> BijectionContext<'a> {
    pub fn new(d: &'a Multidigraph, s: usize, t: usize) -> Result<Self, BijectionError> {
        let n = d.vertex_count();
        for v in [s, t] {
            if v >= n {
                return Err(BijectionError::VertexOutOfRange { index: v, count: n });
            }
        }
        let dec = circuit_decomposition(d)?;
        Ok(BijectionContext { d, s, t, dec })
    }

    pub fn digraph(&self) -> &Multidigraph {
        self.d
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// The decomposition in use; exposed so callers can audit which ψ they
    /// got (different decompositions give different, equally valid maps).
    pub fn decomposition(&self) -> &CircuitDecomposition {
        &self.dec
    }

    fn all(&self) -> VertexSet {
        self.d.all_vertices()
    }

    /// Every vertex reaches s or t under `b`.
    fn covers(&self, b: ArcSubset) -> bool {
        self.d.basin(b, self.s).union(self.d.basin(b, self.t)) == self.all()
    }

    /// strip/refill and their mirrors are defined for proper bipartitions only.
    fn require_proper(&self, part: &Partition, op: &'static str) -> Result<(), BijectionError> {
        if part.p.is_empty() || part.q.is_empty() {
            return Err(BijectionError::Precondition {
                operation: op,
                clause: "P and Q are both nonempty",
            });
        }
        Ok(())
    }

    /// Remove the P->Q crossings from a subset whose S-basin is exactly P.
    /// Returns (E, C) with C = B ∩ A(P,Q) and E = B \ C; E then has S-basin P
    /// and T-basin Q.
    pub fn strip(
        &self,
        b: ArcSubset,
        part: &Partition,
    ) -> Result<(ArcSubset, ArcSubset), BijectionError> {
        const OP: &str = "strip";
        self.require_proper(part, OP)?;
        if !self.d.is_acyclic(b) {
            return Err(BijectionError::Precondition {
                operation: OP,
                clause: "subset is acyclic",
            });
        }
        if !self.covers(b) {
            return Err(BijectionError::Precondition {
                operation: OP,
                clause: "every vertex reaches s or t",
            });
        }
        if self.d.basin(b, self.s) != part.p {
            return Err(BijectionError::Precondition {
                operation: OP,
                clause: "S-basin equals the partition's P",
            });
        }
        let c = b.intersection(part.a_pq);
        let e = b.difference(c);
        if e.len() + c.len() != b.len() {
            return Err(BijectionError::Postcondition {
                operation: OP,
                clause: "|E| = |B| - |C|",
            });
        }
        if self.d.basin(e, self.s) != part.p {
            return Err(BijectionError::Postcondition {
                operation: OP,
                clause: "S(E) = P",
            });
        }
        if self.d.basin(e, self.t) != part.q {
            return Err(BijectionError::Postcondition {
                operation: OP,
                clause: "T(E) = Q",
            });
        }
        Ok((e, c))
    }

    /// Put a set of P->Q crossings back onto a member of X^{P,Q}. Returns
    /// E ∪ C, which is again acyclic with S-basin P and covers V.
    pub fn refill(
        &self,
        e: ArcSubset,
        c: ArcSubset,
        part: &Partition,
    ) -> Result<ArcSubset, BijectionError> {
        const OP: &str = "refill";
        self.require_proper(part, OP)?;
        if !c.is_subset_of(part.a_pq) {
            return Err(BijectionError::Precondition {
                operation: OP,
                clause: "inserted arcs lie in A(P,Q)",
            });
        }
        if !self.d.is_acyclic(e) {
            return Err(BijectionError::Precondition {
                operation: OP,
                clause: "base is acyclic",
            });
        }
        if self.d.basin(e, self.s) != part.p {
            return Err(BijectionError::Precondition {
                operation: OP,
                clause: "S(E) = P",
            });
        }
        if self.d.basin(e, self.t) != part.q {
            return Err(BijectionError::Precondition {
                operation: OP,
                clause: "T(E) = Q",
            });
        }
        if !e.is_disjoint(c) {
            return Err(BijectionError::Postcondition {
                operation: OP,
                clause: "E ∩ C = ∅",
            });
        }
        let b = e.union(c);
        if !self.d.is_acyclic(b) {
            return Err(BijectionError::Postcondition {
                operation: OP,
                clause: "E ∪ C is acyclic",
            });
        }
        if self.d.basin(b, self.s) != part.p {
            return Err(BijectionError::Postcondition {
                operation: OP,
                clause: "S(E ∪ C) = P",
            });
        }
        if b.intersection(part.a_pq) != c {
            return Err(BijectionError::Postcondition {
                operation: OP,
                clause: "(E ∪ C) ∩ A(P,Q) = C",
            });
        }
        if !self.covers(b) {
            return Err(BijectionError::Postcondition {
                operation: OP,
                clause: "E ∪ C covers V",
            });
        }
        Ok(b)
    }

    // The two T-side operations mirror strip/refill with the roles of s and t
    // (hence P and Q, and the two crossing sets) swapped. The precondition
    // set below is that transcription; only the S-side is spelled out above.

    /// Remove the Q->P crossings from a subset whose T-basin is exactly Q.
    pub fn t_strip(
        &self,
        b: ArcSubset,
        part: &Partition,
    ) -> Result<(ArcSubset, ArcSubset), BijectionError> {
        const OP: &str = "t_strip";
        self.require_proper(part, OP)?;
        if !self.d.is_acyclic(b) {
            return Err(BijectionError::Precondition {
                operation: OP,
                clause: "subset is acyclic",
            });
        }
        if !self.covers(b) {
            return Err(BijectionError::Precondition {
                operation: OP,
                clause: "every vertex reaches s or t",
            });
        }
        if self.d.basin(b, self.t) != part.q {
            return Err(BijectionError::Precondition {
                operation: OP,
                clause: "T-basin equals the partition's Q",
            });
        }
        let c = b.intersection(part.a_qp);
        let e = b.difference(c);
        if self.d.basin(e, self.s) != part.p {
            return Err(BijectionError::Postcondition {
                operation: OP,
                clause: "S(E) = P",
            });
        }
        if self.d.basin(e, self.t) != part.q {
            return Err(BijectionError::Postcondition {
                operation: OP,
                clause: "T(E) = Q",
            });
        }
        Ok((e, c))
    }

    /// Put a set of Q->P crossings back onto a member of X^{P,Q}.
    pub fn t_refill(
        &self,
        e: ArcSubset,
        c: ArcSubset,
        part: &Partition,
    ) -> Result<ArcSubset, BijectionError> {
        const OP: &str = "t_refill";
        self.require_proper(part, OP)?;
        if !c.is_subset_of(part.a_qp) {
            return Err(BijectionError::Precondition {
                operation: OP,
                clause: "inserted arcs lie in A(Q,P)",
            });
        }
        if !self.d.is_acyclic(e) {
            return Err(BijectionError::Precondition {
                operation: OP,
                clause: "base is acyclic",
            });
        }
        if self.d.basin(e, self.s) != part.p {
            return Err(BijectionError::Precondition {
                operation: OP,
                clause: "S(E) = P",
            });
        }
        if self.d.basin(e, self.t) != part.q {
            return Err(BijectionError::Precondition {
                operation: OP,
                clause: "T(E) = Q",
            });
        }
        if !e.is_disjoint(c) {
            return Err(BijectionError::Postcondition {
                operation: OP,
                clause: "E ∩ C = ∅",
            });
        }
        let b = e.union(c);
        if !self.d.is_acyclic(b) {
            return Err(BijectionError::Postcondition {
                operation: OP,
                clause: "E ∪ C is acyclic",
            });
        }
        if self.d.basin(b, self.t) != part.q {
            return Err(BijectionError::Postcondition {
                operation: OP,
                clause: "T(E ∪ C) = Q",
            });
        }
        if b.intersection(part.a_qp) != c {
            return Err(BijectionError::Postcondition {
                operation: OP,
                clause: "(E ∪ C) ∩ A(Q,P) = C",
            });
        }
        if !self.covers(b) {
            return Err(BijectionError::Postcondition {
                operation: OP,
                clause: "E ∪ C covers V",
            });
        }
        Ok(b)
    }

    /// φ: members of U_k with S-basin ≠ V map to members with T-basin ≠ V of
    /// the same size: strip the P->Q crossings, push them through β, refill
    /// on the T side. The partition is recomputed from the argument each call.
    pub fn phi(&self, b: ArcSubset) -> Result<ArcSubset, BijectionError> {
        let p = self.d.basin(b, self.s);
        if p == self.all() {
            return Err(BijectionError::Precondition {
                operation: "phi",
                clause: "S-basin must be a proper subset of V",
            });
        }
        let part = self.d.partition(p);
        let (e, c) = self.strip(b, &part)?;
        let beta = crossing_bijection(self.d, &self.dec, &part)?;
        let c_image = beta.map_forward(c)?;
        self.t_refill(e, c_image, &part)
    }

    /// φ⁻¹, with the step record ψ traces keep.
    fn phi_inverse_step(&self, b: ArcSubset) -> Result<TraceStep, BijectionError> {
        let q = self.d.basin(b, self.t);
        if q == self.all() {
            return Err(BijectionError::Precondition {
                operation: "phi_inverse",
                clause: "T-basin must be a proper subset of V",
            });
        }
        let p = q.complement(self.d.vertex_count());
        let part = self.d.partition(p);
        let (e, c_image) = self.t_strip(b, &part)?;
        let beta = crossing_bijection(self.d, &self.dec, &part)?;
        let c = beta.map_backward(c_image)?;
        let after = self.refill(e, c, &part)?;
        Ok(TraceStep {
            p: part.p,
            q: part.q,
            stripped: c_image,
            inserted: c,
            after,
        })
    }

    pub fn phi_inverse(&self, b: ArcSubset) -> Result<ArcSubset, BijectionError> {
        Ok(self.phi_inverse_step(b)?.after)
    }

    /// ψ: map an s-convergence to a t-convergence by applying φ⁻¹ until the
    /// subset is a t-convergence. The T-basin grows strictly with every step,
    /// so at most |V| applications are needed; exceeding that bound is
    /// reported as a bug rather than looping.
    pub fn psi(&self, b: ArcSubset) -> Result<(ArcSubset, InvolutionTrace), BijectionError> {
        if !self.d.is_convergence(b, self.s) {
            return Err(BijectionError::Precondition {
                operation: "psi",
                clause: "input is an s-convergence",
            });
        }
        let limit = self.d.vertex_count();
        let mut steps = Vec::new();
        let mut cur = b;
        let mut t_size = self.d.basin(cur, self.t).len();
        while !self.d.is_convergence(cur, self.t) {
            if steps.len() == limit {
                return Err(BijectionError::IterationOverrun { limit });
            }
            let step = self.phi_inverse_step(cur)?;
            cur = step.after;
            let next_t_size = self.d.basin(cur, self.t).len();
            if next_t_size <= t_size {
                return Err(BijectionError::Postcondition {
                    operation: "psi",
                    clause: "|T-basin| strictly increases per step",
                });
            }
            t_size = next_t_size;
            steps.push(step);
        }
        Ok((
            cur,
            InvolutionTrace {
                start: b,
                steps,
                result: cur,
            },
        ))
    }
}
