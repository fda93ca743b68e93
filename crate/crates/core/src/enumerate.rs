//! Exhaustive enumeration of acyclic arc subsets.
//!
//! The search backtracks over arc indices in declaration order. Acyclicity is
//! hereditary (a subset of an acyclic set is acyclic), so a branch is
//! abandoned the moment an arc insertion would close a cycle; the test is one
//! bit probe against an incrementally maintained reachability closure. Every
//! node of the search tree is itself an acyclic subset and is reported
//! exactly once.
//!
//! The search tree can be split at a fixed prefix depth into independent
//! subtrees. Per-subtree accumulators merge by addition, so the result is
//! identical for any worker count.

use std::collections::BTreeMap;
use std::fmt;

use crate::bitset::{ArcSubset, VertexSet};
use crate::digraph::Multidigraph;

/// Knobs for the enumeration engine.
#[derive(Clone, Copy, Debug)]
pub struct EnumOptions {
    /// Worker threads; 1 means fully sequential.
    pub workers: usize,
    /// Upper bound on the visited-node work estimate before refusing to run.
    pub budget: u64,
    /// Arc-index depth at which the search tree is split into parallel tasks.
    pub prefix_depth: usize,
}

pub const DEFAULT_BUDGET: u64 = 1 << 34;

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            workers: 1,
            budget: DEFAULT_BUDGET,
            prefix_depth: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnumError {
    /// The binomial-sum work estimate exceeds the configured budget.
    BudgetExceeded {
        estimate: u64,
        budget: u64,
    },
    /// A counter left the exact u64 range.
    CountOverflow,
    VertexOutOfRange {
        index: usize,
        count: usize,
    },
    /// No s-convergence of any size exists for this vertex.
    NoConvergence {
        vertex: usize,
    },
}

impl fmt::Display for EnumError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnumError::BudgetExceeded { estimate, budget } => write!(
                f,
                "enumeration refused: work estimate {estimate} nodes exceeds budget {budget}"
            ),
            EnumError::CountOverflow => write!(f, "count does not fit in 64 bits"),
            EnumError::VertexOutOfRange { index, count } => {
                write!(
                    f,
                    "vertex index {index} out of range (digraph has {count} vertices)"
                )
            }
            EnumError::NoConvergence { vertex } => {
                write!(f, "no convergence exists for vertex index {vertex}")
            }
        }
    }
}

impl std::error::Error for EnumError {}

/// Exact binomial coefficient by Pascal additions; every entry for n <= 128
/// fits in u128 without intermediate overflow.
pub fn binomial(n: usize, k: usize) -> u128 {
    assert!(n <= 128);
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for _ in 0..n {
        for j in (1..=k).rev() {
            row[j] += row[j - 1];
        }
    }
    row[k]
}

/// Sum of binomial(n, j) for j <= cap, saturating into u64. This bounds the
/// number of nodes a size-capped subset search can visit.
fn work_estimate(n_arcs: usize, cap: usize) -> u64 {
    let mut total: u128 = 0;
    for j in 0..=cap.min(n_arcs) {
        total = total.saturating_add(binomial(n_arcs, j));
        if total > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    total as u64
}

fn check_budget(n_arcs: usize, cap: usize, budget: u64) -> Result<(), EnumError> {
    let estimate = work_estimate(n_arcs, cap);
    if estimate > budget {
        return Err(EnumError::BudgetExceeded { estimate, budget });
    }
    Ok(())
}

/// Sink of enumeration events. `sinks` is the bitmask of vertices with no
/// outgoing arc in the current subset (maintained by the engine for free).
trait Visit {
    fn visit(&mut self, bits: u128, len: u32, sinks: u64);
}

/// Backtracking state over one digraph. `reach[v]` is the bitmask of vertices
/// reachable from `v` (including `v`) inside the current subset; inserting an
/// arc u->w is legal iff `reach[w]` does not contain `u`.
struct Search {
    ends: Vec<(u32, u32)>,
    nv: usize,
    vmask: u64,
    reach: Vec<u64>,
    /// Snapshot space: one `nv`-row slab per recursion depth.
    scratch: Vec<u64>,
    out_count: Vec<u32>,
    out_mask: u64,
    bits: u128,
    len: u32,
    cap: u32,
    visited: u64,
}

impl Search {
    fn new(d: &Multidigraph, cap: usize) -> Self {
        let nv = d.vertex_count();
        let na = d.arc_count();
        let ends = d
            .arcs()
            .iter()
            .map(|a| (a.source as u32, a.target as u32))
            .collect();
        let reach = (0..nv).map(|v| 1u64 << v).collect();
        Search {
            ends,
            nv,
            vmask: VertexSet::full(nv).bits(),
            reach,
            scratch: vec![0u64; nv * (na + 1)],
            out_count: vec![0; nv],
            out_mask: 0,
            bits: 0,
            len: 0,
            cap: cap as u32,
            visited: 0,
        }
    }

    /// Whether arc `i` can join the current subset without closing a cycle.
    #[inline]
    fn admissible(&self, i: usize) -> bool {
        let (u, w) = self.ends[i];
        self.reach[w as usize] & (1u64 << u) == 0
    }

    /// Insert arc `i`; the caller has checked `admissible(i)`.
    fn apply(&mut self, i: usize) {
        let (u, w) = self.ends[i];
        let add = self.reach[w as usize];
        let ubit = 1u64 << u;
        for x in 0..self.nv {
            if self.reach[x] & ubit != 0 {
                self.reach[x] |= add;
            }
        }
        self.out_count[u as usize] += 1;
        self.out_mask |= ubit;
        self.bits |= 1u128 << i;
        self.len += 1;
    }

    fn unapply(&mut self, i: usize, depth: usize) {
        let (u, _) = self.ends[i];
        self.len -= 1;
        self.bits &= !(1u128 << i);
        self.out_count[u as usize] -= 1;
        if self.out_count[u as usize] == 0 {
            self.out_mask &= !(1u64 << u);
        }
        let nv = self.nv;
        self.reach
            .copy_from_slice(&self.scratch[depth * nv..(depth + 1) * nv]);
    }

    fn run<V: Visit>(&mut self, next: usize, vis: &mut V) {
        self.visited += 1;
        vis.visit(self.bits, self.len, !self.out_mask & self.vmask);
        if self.len == self.cap {
            return;
        }
        let nv = self.nv;
        for i in next..self.ends.len() {
            if !self.admissible(i) {
                continue;
            }
            let depth = self.len as usize;
            self.scratch[depth * nv..(depth + 1) * nv].copy_from_slice(&self.reach);
            self.apply(i);
            self.run(i + 1, vis);
            self.unapply(i, depth);
        }
    }

    /// Re-seed the search with a fixed prefix subset (arcs below the split
    /// depth); the prefix is known acyclic.
    fn seed(&mut self, prefix: u128) {
        for i in ArcSubset::from_bits(prefix).iter() {
            debug_assert!(self.admissible(i));
            self.apply(i);
        }
    }
}

/// Acyclic subsets of the first `depth` arcs, in engine order. These are the
/// roots of the independent subtrees used for parallel runs.
fn prefix_tasks(d: &Multidigraph, depth: usize, cap: usize) -> Vec<u128> {
    struct Collect(Vec<u128>);
    impl Visit for Collect {
        fn visit(&mut self, bits: u128, _len: u32, _sinks: u64) {
            self.0.push(bits);
        }
    }
    let prefix = Multidigraph::new(
        d.vertex_ids().to_vec(),
        d.arcs()
            .iter()
            .take(depth)
            .map(|a| (a.label.clone(), a.source, a.target))
            .collect(),
    )
    .expect("prefix of a valid digraph is valid");
    let mut collect = Collect(Vec::new());
    Search::new(&prefix, cap).run(0, &mut collect);
    collect.0
}

/// Run `make_visitor` over the whole search, possibly split across workers,
/// and hand back every per-worker visitor for merging plus the total number
/// of visited (= acyclic) subsets.
fn run_search<V, F>(
    d: &Multidigraph,
    opts: &EnumOptions,
    cap: usize,
    make_visitor: F,
) -> Result<(u64, Vec<V>), EnumError>
where
    V: Visit + Send,
    F: Fn() -> V + Sync,
{
    check_budget(d.arc_count(), cap, opts.budget)?;
    let workers = opts.workers.max(1);
    let depth = opts.prefix_depth.min(d.arc_count());
    if workers == 1 || d.arc_count() == 0 || depth == 0 {
        let mut vis = make_visitor();
        let mut search = Search::new(d, cap);
        search.run(0, &mut vis);
        return Ok((search.visited, vec![vis]));
    }

    let tasks = prefix_tasks(d, depth, cap);
    let results: Vec<(u64, V)> = std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for wid in 0..workers {
            let tasks = &tasks;
            let make_visitor = &make_visitor;
            handles.push(scope.spawn(move || {
                let mut vis = make_visitor();
                let mut visited = 0u64;
                for chunk in tasks.iter().skip(wid).step_by(workers) {
                    let mut search = Search::new(d, cap);
                    search.seed(*chunk);
                    search.run(depth, &mut vis);
                    visited += search.visited;
                }
                (visited, vis)
            }));
        }
        handles
            .into_iter()
            .map(|h| h.join().expect("enumeration worker panicked"))
            .collect()
    });

    let mut total = 0u64;
    let mut visitors = Vec::with_capacity(results.len());
    for (v, vis) in results {
        total += v;
        visitors.push(vis);
    }
    Ok((total, visitors))
}

/// Exact counts of s-convergences indexed by (vertex, subset size).
///
/// `counts[s][k]` is the number of acyclic k-arc subsets whose unique sink is
/// `s`; columns are flagged uniform when every vertex agrees, which the main
/// equality predicts for balanced digraphs (and the table records rather than
/// assumes).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaTable {
    counts: Vec<Vec<u64>>,
    uniform: Vec<bool>,
    max_k: usize,
}

impl GammaTable {
    fn from_counts(counts: Vec<Vec<u64>>, max_k: usize) -> Self {
        let uniform = (0..=max_k)
            .map(|k| counts.iter().all(|row| row[k] == counts[0][k]))
            .collect();
        GammaTable {
            counts,
            uniform,
            max_k,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.counts.len()
    }

    /// Largest representable subset size (= arc count); columns run 0..=max_k.
    pub fn max_k(&self) -> usize {
        self.max_k
    }

    pub fn count(&self, s: usize, k: usize) -> u64 {
        self.counts[s][k]
    }

    pub fn row(&self, s: usize) -> &[u64] {
        &self.counts[s]
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.counts
    }

    /// Per-k flags: true when column k is constant across vertices.
    pub fn uniform_columns(&self) -> &[bool] {
        &self.uniform
    }

    pub fn all_uniform(&self) -> bool {
        self.uniform.iter().all(|&u| u)
    }

    /// Largest k with a nonzero count for `s`, if any.
    pub fn max_nonzero(&self, s: usize) -> Option<usize> {
        (0..=self.max_k).rev().find(|&k| self.counts[s][k] > 0)
    }
}

struct GammaVisitor {
    counts: Vec<Vec<u64>>,
    overflow: bool,
}

impl Visit for GammaVisitor {
    #[inline]
    fn visit(&mut self, _bits: u128, len: u32, sinks: u64) {
        // Acyclic + unique sink s <=> s-convergence, so one popcount test
        // classifies the subset for every vertex at once.
        if sinks != 0 && sinks & (sinks - 1) == 0 {
            let s = sinks.trailing_zeros() as usize;
            match self.counts[s][len as usize].checked_add(1) {
                Some(v) => self.counts[s][len as usize] = v,
                None => self.overflow = true,
            }
        }
    }
}

/// Compute the full γ table in one enumeration pass.
pub fn gamma_table(d: &Multidigraph, opts: &EnumOptions) -> Result<GammaTable, EnumError> {
    let nv = d.vertex_count();
    let na = d.arc_count();
    let (_, visitors) = run_search(d, opts, na, || GammaVisitor {
        counts: vec![vec![0u64; na + 1]; nv],
        overflow: false,
    })?;
    let mut counts = vec![vec![0u64; na + 1]; nv];
    for vis in visitors {
        if vis.overflow {
            return Err(EnumError::CountOverflow);
        }
        for (row, src) in counts.iter_mut().zip(vis.counts.iter()) {
            for (c, &s) in row.iter_mut().zip(src.iter()) {
                *c = c.checked_add(s).ok_or(EnumError::CountOverflow)?;
            }
        }
    }
    Ok(GammaTable::from_counts(counts, na))
}

/// Visit every acyclic subset exactly once, in a fixed order (each subset
/// appears immediately before its extensions by higher-indexed arcs).
/// Returns how many subsets were visited. Single worker by construction so
/// the callback needs no synchronization.
pub fn enumerate_acyclic<F: FnMut(ArcSubset)>(
    d: &Multidigraph,
    mut f: F,
) -> Result<u64, EnumError> {
    enumerate_acyclic_with(d, DEFAULT_BUDGET, &mut f)
}

pub fn enumerate_acyclic_with<F: FnMut(ArcSubset)>(
    d: &Multidigraph,
    budget: u64,
    f: &mut F,
) -> Result<u64, EnumError> {
    check_budget(d.arc_count(), d.arc_count(), budget)?;
    struct Callback<'f, F>(&'f mut F);
    impl<F: FnMut(ArcSubset)> Visit for Callback<'_, F> {
        fn visit(&mut self, bits: u128, _len: u32, _sinks: u64) {
            (self.0)(ArcSubset::from_bits(bits));
        }
    }
    let mut search = Search::new(d, d.arc_count());
    search.run(0, &mut Callback(f));
    Ok(search.visited)
}

/// Number of acyclic subsets (parallel-capable).
pub fn acyclic_count(d: &Multidigraph, opts: &EnumOptions) -> Result<u64, EnumError> {
    struct Noop;
    impl Visit for Noop {
        fn visit(&mut self, _: u128, _: u32, _: u64) {}
    }
    let (visited, _) = run_search(d, opts, d.arc_count(), || Noop)?;
    Ok(visited)
}

/// All s-convergences of size k, ordered by arc-index bitset value.
///
/// Membership is decided on the to-root definition (reachability), not the
/// sink shortcut the γ table uses; the two routes checking each other is
/// deliberate.
pub fn list_convergences(
    d: &Multidigraph,
    s: usize,
    k: usize,
    opts: &EnumOptions,
) -> Result<Vec<ArcSubset>, EnumError> {
    let nv = d.vertex_count();
    if s >= nv {
        return Err(EnumError::VertexOutOfRange {
            index: s,
            count: nv,
        });
    }
    if k > d.arc_count() {
        return Ok(Vec::new());
    }
    check_budget(d.arc_count(), k, opts.budget)?;
    let all = d.all_vertices();
    let mut out = Vec::new();
    struct Lister<'a, 'o> {
        d: &'a Multidigraph,
        s: usize,
        k: u32,
        all: VertexSet,
        out: &'o mut Vec<ArcSubset>,
    }
    impl Visit for Lister<'_, '_> {
        fn visit(&mut self, bits: u128, len: u32, _sinks: u64) {
            if len == self.k {
                let b = ArcSubset::from_bits(bits);
                if self.d.basin(b, self.s) == self.all {
                    self.out.push(b);
                }
            }
        }
    }
    let mut search = Search::new(d, k);
    search.run(
        0,
        &mut Lister {
            d,
            s,
            k: k as u32,
            all,
            out: &mut out,
        },
    );
    out.sort();
    Ok(out)
}

/// Maximum acyclic subset size and how many subsets attain it. Complements
/// of the maximum-size subsets are the minimum feedback arc sets.
pub fn max_acyclic(d: &Multidigraph, opts: &EnumOptions) -> Result<(usize, u64), EnumError> {
    #[derive(Clone, Copy)]
    struct Max {
        best: u32,
        count: u64,
    }
    impl Visit for Max {
        fn visit(&mut self, _bits: u128, len: u32, _sinks: u64) {
            if len > self.best {
                self.best = len;
                self.count = 1;
            } else if len == self.best {
                self.count += 1;
            }
        }
    }
    let (_, visitors) = run_search(d, opts, d.arc_count(), || Max { best: 0, count: 0 })?;
    let best = visitors.iter().map(|m| m.best).max().unwrap_or(0);
    let count = visitors
        .iter()
        .filter(|m| m.best == best)
        .map(|m| m.count)
        .sum();
    Ok((best as usize, count))
}

/// Largest k with γ_k(s) > 0.
pub fn max_convergence_size(
    d: &Multidigraph,
    s: usize,
    opts: &EnumOptions,
) -> Result<usize, EnumError> {
    let nv = d.vertex_count();
    if s >= nv {
        return Err(EnumError::VertexOutOfRange {
            index: s,
            count: nv,
        });
    }
    let table = gamma_table(d, opts)?;
    table
        .max_nonzero(s)
        .ok_or(EnumError::NoConvergence { vertex: s })
}

/// One occupied cell of a basin classification.
#[derive(Clone, Debug)]
pub struct Cell {
    pub count: u64,
    /// Member subsets, present while the cell stays under the member cap.
    pub members: Option<Vec<ArcSubset>>,
}

/// The acyclic k-subsets for which every vertex reaches `s` or `t`, bucketed
/// by the pair of attraction basins (S(B), T(B)).
///
/// The bucket keyed (P, Q) with V = P ⊔ Q is exactly the family X_k^{P,Q};
/// buckets with overlapping basins also occur and contribute to the marginal
/// counts only.
#[derive(Clone, Debug)]
pub struct BasinClassification {
    pub s: usize,
    pub t: usize,
    pub k: usize,
    cells: BTreeMap<(VertexSet, VertexSet), Cell>,
}

impl BasinClassification {
    pub fn cells(&self) -> impl Iterator<Item = (&(VertexSet, VertexSet), &Cell)> {
        self.cells.iter()
    }

    /// |U_k|.
    pub fn total(&self) -> u64 {
        self.cells.values().map(|c| c.count).sum()
    }

    /// |{B in U_k : S(B) = p}|.
    pub fn count_s_basin(&self, p: VertexSet) -> u64 {
        self.cells
            .iter()
            .filter(|((s, _), _)| *s == p)
            .map(|(_, c)| c.count)
            .sum()
    }

    /// |{B in U_k : T(B) = q}|.
    pub fn count_t_basin(&self, q: VertexSet) -> u64 {
        self.cells
            .iter()
            .filter(|((_, t), _)| *t == q)
            .map(|(_, c)| c.count)
            .sum()
    }

    /// |X_k^{P,Q}| for Q = complement of P.
    pub fn x_count(&self, p: VertexSet, nv: usize) -> u64 {
        let q = p.complement(nv);
        self.cells.get(&(p, q)).map(|c| c.count).unwrap_or(0)
    }

    /// Members with S(B) = p, if every contributing cell kept its list.
    pub fn members_s_basin(&self, p: VertexSet) -> Option<Vec<ArcSubset>> {
        let mut out = Vec::new();
        for ((s, _), cell) in &self.cells {
            if *s == p {
                out.extend(cell.members.as_ref()?.iter().copied());
            }
        }
        out.sort();
        Some(out)
    }

    pub fn members_t_basin(&self, q: VertexSet) -> Option<Vec<ArcSubset>> {
        let mut out = Vec::new();
        for ((_, t), cell) in &self.cells {
            if *t == q {
                out.extend(cell.members.as_ref()?.iter().copied());
            }
        }
        out.sort();
        Some(out)
    }

    /// Every member of U_k in bitset order, when lists are complete.
    pub fn members(&self) -> Option<Vec<ArcSubset>> {
        let mut out = Vec::new();
        for cell in self.cells.values() {
            out.extend(cell.members.as_ref()?.iter().copied());
        }
        out.sort();
        Some(out)
    }

    /// Filtered view Y_k: the members with S(B) = part.p whose P->Q crossing
    /// set is exactly `c`. Stripping `c` puts this family in bijection with
    /// X_{k-|c|}^{P,Q}.
    pub fn y_members(
        &self,
        part: &crate::digraph::Partition,
        c: ArcSubset,
    ) -> Option<Vec<ArcSubset>> {
        let mut out = Vec::new();
        for ((s, _), cell) in &self.cells {
            if *s == part.p {
                for &b in cell.members.as_ref()? {
                    if b.intersection(part.a_pq) == c {
                        out.push(b);
                    }
                }
            }
        }
        out.sort();
        Some(out)
    }
}

pub const DEFAULT_MEMBER_CAP: usize = 1_000_000;

/// Bucket U_k by basin pairs, keeping member lists while cells stay under
/// `member_cap` (counts are always exact).
pub fn classify_uk_with_cap(
    d: &Multidigraph,
    s: usize,
    t: usize,
    k: usize,
    member_cap: usize,
    opts: &EnumOptions,
) -> Result<BasinClassification, EnumError> {
    let nv = d.vertex_count();
    for v in [s, t] {
        if v >= nv {
            return Err(EnumError::VertexOutOfRange {
                index: v,
                count: nv,
            });
        }
    }
    check_budget(d.arc_count(), k.min(d.arc_count()), opts.budget)?;
    let mut cells: BTreeMap<(VertexSet, VertexSet), Cell> = BTreeMap::new();
    if k <= d.arc_count() {
        let all = d.all_vertices();
        struct Classifier<'a, 'c> {
            d: &'a Multidigraph,
            s: usize,
            t: usize,
            k: u32,
            all: VertexSet,
            member_cap: usize,
            cells: &'c mut BTreeMap<(VertexSet, VertexSet), Cell>,
        }
        impl Visit for Classifier<'_, '_> {
            fn visit(&mut self, bits: u128, len: u32, _sinks: u64) {
                if len != self.k {
                    return;
                }
                let b = ArcSubset::from_bits(bits);
                let sb = self.d.basin(b, self.s);
                let tb = self.d.basin(b, self.t);
                if sb.union(tb) != self.all {
                    return;
                }
                let cell = self.cells.entry((sb, tb)).or_insert(Cell {
                    count: 0,
                    members: Some(Vec::new()),
                });
                cell.count += 1;
                if let Some(members) = cell.members.as_mut() {
                    if members.len() < self.member_cap {
                        members.push(b);
                    } else {
                        cell.members = None;
                    }
                }
            }
        }
        let mut search = Search::new(d, k);
        search.run(
            0,
            &mut Classifier {
                d,
                s,
                t,
                k: k as u32,
                all,
                member_cap,
                cells: &mut cells,
            },
        );
    }
    Ok(BasinClassification { s, t, k, cells })
}

pub fn classify_uk(
    d: &Multidigraph,
    s: usize,
    t: usize,
    k: usize,
    opts: &EnumOptions,
) -> Result<BasinClassification, EnumError> {
    classify_uk_with_cap(d, s, t, k, DEFAULT_MEMBER_CAP, opts)
}

/// Count-only classification of U_k for every k at once (one enumeration
/// pass). Index j of the result is the classification at size j.
pub fn classify_all_sizes(
    d: &Multidigraph,
    s: usize,
    t: usize,
    opts: &EnumOptions,
) -> Result<Vec<BasinClassification>, EnumError> {
    let nv = d.vertex_count();
    for v in [s, t] {
        if v >= nv {
            return Err(EnumError::VertexOutOfRange {
                index: v,
                count: nv,
            });
        }
    }
    check_budget(d.arc_count(), d.arc_count(), opts.budget)?;
    let na = d.arc_count();
    let all = d.all_vertices();
    let mut maps: Vec<BTreeMap<(VertexSet, VertexSet), Cell>> = vec![BTreeMap::new(); na + 1];
    struct AllSizes<'a, 'c> {
        d: &'a Multidigraph,
        s: usize,
        t: usize,
        all: VertexSet,
        maps: &'c mut [BTreeMap<(VertexSet, VertexSet), Cell>],
    }
    impl Visit for AllSizes<'_, '_> {
        fn visit(&mut self, bits: u128, len: u32, _sinks: u64) {
            let b = ArcSubset::from_bits(bits);
            let sb = self.d.basin(b, self.s);
            let tb = self.d.basin(b, self.t);
            if sb.union(tb) != self.all {
                return;
            }
            self.maps[len as usize]
                .entry((sb, tb))
                .or_insert(Cell {
                    count: 0,
                    members: None,
                })
                .count += 1;
        }
    }
    let mut search = Search::new(d, na);
    search.run(
        0,
        &mut AllSizes {
            d,
            s,
            t,
            all,
            maps: &mut maps,
        },
    );
    Ok(maps
        .into_iter()
        .enumerate()
        .map(|(k, cells)| BasinClassification { s, t, k, cells })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::fixture7;

    fn arcs(d: &Multidigraph, labels: &[&str]) -> ArcSubset {
        d.arcs_by_labels(labels.iter().copied()).unwrap()
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(7, 3), 35);
        assert_eq!(binomial(7, 0), 1);
        assert_eq!(binomial(7, 8), 0);
        assert!(binomial(128, 64) > u64::MAX as u128);
        assert_eq!(work_estimate(7, 7), 128);
        assert_eq!(work_estimate(7, 2), 1 + 7 + 21);
    }

    #[test]
    fn fixture_acyclic_count_is_59() {
        // frozen from brute force over all 2^7 subsets
        let d = fixture7();
        let mut seen = Vec::new();
        let count = enumerate_acyclic(&d, |b| seen.push(b)).unwrap();
        assert_eq!(count, 59);
        assert_eq!(seen.len(), 59);
        // every visited subset is acyclic and distinct
        let mut sorted = seen.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 59);
        for b in &seen {
            assert!(d.is_acyclic(*b));
        }
        // the ten convergences of the worked example all show up
        for labels in [
            vec!["b", "d", "g"],
            vec!["b", "d", "e"],
            vec!["c", "d", "g"],
            vec!["b", "d", "e", "g"],
            vec!["b", "c", "d", "g"],
            vec!["a", "d", "e"],
            vec!["a", "d", "g"],
            vec!["d", "e", "f"],
            vec!["a", "d", "e", "f"],
            vec!["a", "d", "e", "g"],
        ] {
            let want = arcs(&d, &labels);
            assert!(seen.contains(&want), "missing {labels:?}");
        }
    }

    #[test]
    fn loop_digraph_visits_only_empty() {
        let d = Multidigraph::parse("v u\na l u u\n").unwrap();
        let mut seen = Vec::new();
        let count = enumerate_acyclic(&d, |b| seen.push(b)).unwrap();
        assert_eq!(count, 1);
        assert_eq!(seen, vec![ArcSubset::empty()]);
    }

    #[test]
    fn visit_order_is_reproducible() {
        let d = fixture7();
        let mut first = Vec::new();
        enumerate_acyclic(&d, |b| first.push(b)).unwrap();
        let mut second = Vec::new();
        enumerate_acyclic(&d, |b| second.push(b)).unwrap();
        assert_eq!(first, second);
        // each subset appears directly before its higher-index extensions
        assert_eq!(first[0], ArcSubset::empty());
        assert_eq!(first[1], ArcSubset::from_indices([0]));
    }

    #[test]
    fn gamma_fixture_matches_worked_example() {
        let d = fixture7();
        let t = gamma_table(&d, &EnumOptions::default()).unwrap();
        for s in 0..4 {
            for k in 0..=7 {
                let want = match k {
                    3 => 3,
                    4 => 2,
                    _ => 0,
                };
                assert_eq!(t.count(s, k), want, "gamma[{s}][{k}]");
            }
        }
        assert!(t.all_uniform());
        assert_eq!(t.max_nonzero(0), Some(4));
    }

    #[test]
    fn gamma_single_vertex() {
        let d = Multidigraph::parse("v z\n").unwrap();
        let t = gamma_table(&d, &EnumOptions::default()).unwrap();
        assert_eq!(t.count(0, 0), 1);
        assert_eq!(t.max_k(), 0);
    }

    #[test]
    fn gamma_two_cycle() {
        let d = Multidigraph::parse("v u\nv w\na x u w\na y w u\n").unwrap();
        let t = gamma_table(&d, &EnumOptions::default()).unwrap();
        // brute force over 4 subsets: {x} converges on w, {y} on u
        assert_eq!(t.count(0, 1), 1);
        assert_eq!(t.count(1, 1), 1);
        assert_eq!(t.count(0, 0), 0);
        assert_eq!(t.count(0, 2), 0);
        assert!(t.all_uniform());
    }

    #[test]
    fn gamma_parallel_matches_sequential() {
        let d = fixture7();
        let base = gamma_table(&d, &EnumOptions::default()).unwrap();
        for workers in [2, 3, 8] {
            for prefix_depth in [1, 4, 8, 32] {
                let opts = EnumOptions {
                    workers,
                    prefix_depth,
                    ..Default::default()
                };
                assert_eq!(gamma_table(&d, &opts).unwrap(), base, "workers={workers}");
            }
        }
    }

    #[test]
    fn budget_refusal() {
        let d = fixture7();
        let opts = EnumOptions {
            budget: 100,
            ..Default::default()
        };
        match gamma_table(&d, &opts) {
            Err(EnumError::BudgetExceeded {
                estimate: 128,
                budget: 100,
            }) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn golden_lists() {
        let d = fixture7();
        let opts = EnumOptions::default();
        let got = list_convergences(&d, 0, 3, &opts).unwrap();
        let want: Vec<ArcSubset> = [
            vec!["b", "d", "e"],
            vec!["b", "d", "g"],
            vec!["c", "d", "g"],
        ]
        .iter()
        .map(|l| arcs(&d, l))
        .collect();
        assert_eq!(got, want);

        let got = list_convergences(&d, 1, 4, &opts).unwrap();
        let want: Vec<ArcSubset> = [vec!["a", "d", "e", "f"], vec!["a", "d", "e", "g"]]
            .iter()
            .map(|l| arcs(&d, l))
            .collect();
        assert_eq!(got, want);

        assert!(list_convergences(&d, 0, 9, &opts).unwrap().is_empty());
        assert!(list_convergences(&d, 9, 3, &opts).is_err());
    }

    #[test]
    fn max_acyclic_fixture() {
        // frozen from brute force: nine acyclic subsets of the maximum size 4
        let d = fixture7();
        assert_eq!(max_acyclic(&d, &EnumOptions::default()).unwrap(), (4, 9));
    }

    #[test]
    fn max_acyclic_edge_cases() {
        let d = Multidigraph::parse("v 1\nv 2\na x 1 2\n").unwrap();
        assert_eq!(max_acyclic(&d, &EnumOptions::default()).unwrap(), (1, 1));
        let d = Multidigraph::parse("v 1\na l 1 1\n").unwrap();
        assert_eq!(max_acyclic(&d, &EnumOptions::default()).unwrap(), (0, 1));
    }

    #[test]
    fn max_convergence_size_fixture() {
        let d = fixture7();
        assert_eq!(
            max_convergence_size(&d, 0, &EnumOptions::default()).unwrap(),
            4
        );
        let single = Multidigraph::parse("v z\n").unwrap();
        assert_eq!(
            max_convergence_size(&single, 0, &EnumOptions::default()).unwrap(),
            0
        );
        // vertex 2 cannot be reached from vertex 1: no convergence at all
        let d = Multidigraph::parse("v 1\nv 2\na x 2 1\n").unwrap();
        match max_convergence_size(&d, 1, &EnumOptions::default()) {
            Err(EnumError::NoConvergence { vertex: 1 }) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn classify_fixture_buckets() {
        let d = fixture7();
        let cls = classify_uk(&d, 0, 1, 3, &EnumOptions::default()).unwrap();
        assert_eq!(cls.total(), 7); // |U_3| for s=1, t=2
        assert_eq!(cls.count_s_basin(d.all_vertices()), 3);
        assert_eq!(cls.count_t_basin(d.all_vertices()), 3);
        // sum over buckets = |U_k|, and the bucket sum rule recovers gamma
        let gamma = gamma_table(&d, &EnumOptions::default()).unwrap();
        let proper: u64 = cls
            .cells()
            .filter(|((s, _), _)| *s != d.all_vertices())
            .map(|(_, c)| c.count)
            .sum();
        assert_eq!(cls.total() - proper, gamma.count(0, 3));
    }

    #[test]
    fn classify_two_vertices_k0() {
        let d = Multidigraph::parse("v u\nv w\na x u w\na y w u\n").unwrap();
        let cls = classify_uk(&d, 0, 1, 0, &EnumOptions::default()).unwrap();
        // U_0 = {empty set}: basins {u} and {w} cover V exactly when |V| = 2
        assert_eq!(cls.total(), 1);
        let members = cls.members().unwrap();
        assert_eq!(members, vec![ArcSubset::empty()]);
    }

    #[test]
    fn classify_all_sizes_consistent_with_per_k() {
        let d = fixture7();
        let opts = EnumOptions::default();
        let all = classify_all_sizes(&d, 0, 1, &opts).unwrap();
        for (k, sizes) in all.iter().enumerate() {
            let single = classify_uk(&d, 0, 1, k, &opts).unwrap();
            assert_eq!(sizes.total(), single.total(), "k={k}");
            for (key, cell) in single.cells() {
                assert_eq!(sizes.cells.get(key).map(|c| c.count), Some(cell.count));
            }
        }
    }

    #[test]
    fn y_view_matches_x_counts() {
        // each Y cell is in bijection with X at the stripped size
        let d = fixture7();
        let opts = EnumOptions::default();
        let cls3 = classify_uk(&d, 0, 1, 3, &opts).unwrap();
        let p = VertexSet::from_indices([0, 2, 3]);
        let part = d.partition(p);
        for c_bits in 0u32..(1 << part.a_pq.len()) {
            let c = ArcSubset::from_indices(
                part.a_pq
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| c_bits & (1 << j) != 0)
                    .map(|(_, a)| a),
            );
            let y = cls3.y_members(&part, c).unwrap();
            let x = classify_uk(&d, 0, 1, 3 - c.len(), &opts)
                .unwrap()
                .x_count(p, 4);
            assert_eq!(y.len() as u64, x, "C={c:?}");
        }
        // counts never exceed the binomial bound
        let t = gamma_table(&d, &opts).unwrap();
        for s in 0..4 {
            for k in 0..=7 {
                assert!((t.count(s, k) as u128) <= binomial(7, k));
            }
        }
    }

    #[test]
    fn member_cap_drops_lists_keeps_counts() {
        let d = fixture7();
        let cls = classify_uk_with_cap(&d, 0, 1, 3, 1, &EnumOptions::default()).unwrap();
        assert_eq!(cls.total(), 7);
        assert!(cls.members().is_none());
    }
}
