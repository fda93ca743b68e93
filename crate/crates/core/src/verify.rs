//! The invariant suite behind `verify`: every structural fact the library
//! relies on, re-checked on a concrete digraph with counterexamples on
//! failure. Checks that only make sense on balanced inputs are skipped (not
//! failed) otherwise.

use crate::bijection::{crossing_bijection, BijectionContext};
use crate::bitset::{ArcSubset, VertexSet};
use crate::crosscheck::{matrix_tree_to_root, naive_gamma};
use crate::digraph::Multidigraph;
use crate::enumerate::{
    binomial, classify_all_sizes, classify_uk, enumerate_acyclic_with, gamma_table, EnumError,
    EnumOptions,
};
use crate::generate::SplitMix64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub status: CheckStatus,
    /// Counterexample payload on failure, reason on skip, summary on pass.
    pub detail: String,
}

impl CheckResult {
    fn pass(name: &'static str, detail: impl Into<String>) -> Self {
        CheckResult {
            name,
            status: CheckStatus::Pass,
            detail: detail.into(),
        }
    }

    fn fail(name: &'static str, detail: impl Into<String>) -> Self {
        CheckResult {
            name,
            status: CheckStatus::Fail,
            detail: detail.into(),
        }
    }

    fn skip(name: &'static str, detail: impl Into<String>) -> Self {
        CheckResult {
            name,
            status: CheckStatus::Skipped,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub workers: usize,
    pub budget: u64,
    /// Partition sweeps iterate 2^|V| subsets; skipped above this many vertices.
    pub partition_vertex_limit: usize,
    /// The naive oracle walks 2^|A| subsets; skipped above this many arcs.
    pub oracle_arc_limit: usize,
    /// Test hook: corrupt the crossing bijection before verifying it.
    pub sabotage_crossing: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            workers: 1,
            budget: crate::enumerate::DEFAULT_BUDGET,
            partition_vertex_limit: 12,
            oracle_arc_limit: 14,
            sabotage_crossing: false,
        }
    }
}

fn vset(d: &Multidigraph, p: VertexSet) -> String {
    let ids: Vec<&str> = p.iter().map(|v| d.vertex_id(v)).collect();
    format!("{{{}}}", ids.join(","))
}

fn aset(d: &Multidigraph, b: ArcSubset) -> String {
    format!("{{{}}}", d.labels(b).join(","))
}

fn echo(d: &Multidigraph) -> String {
    format!("digraph: {}", d.to_text().trim_end().replace('\n', " | "))
}

/// Run every check and report one result per check. Budget refusals abort
/// the whole run (nothing was verified).
pub fn run_all(d: &Multidigraph, opts: &VerifyOptions) -> Result<Vec<CheckResult>, EnumError> {
    let eopts = EnumOptions {
        workers: opts.workers,
        budget: opts.budget,
        prefix_depth: 8,
    };
    let table = gamma_table(d, &eopts)?;
    let balanced = d.is_balanced();
    let nv = d.vertex_count();

    let mut out = Vec::new();
    out.push(CheckResult::pass(
        "balance",
        if balanced {
            "balanced".to_string()
        } else {
            "not balanced (balance-only checks are skipped)".to_string()
        },
    ));

    // gamma columns constant across vertices (the main equality)
    if balanced {
        match (0..=table.max_k()).find(|&k| !table.uniform_columns()[k]) {
            None => out.push(CheckResult::pass(
                "column-uniformity",
                format!("{} columns uniform", table.max_k() + 1),
            )),
            Some(k) => {
                let col: Vec<u64> = (0..nv).map(|s| table.count(s, k)).collect();
                out.push(CheckResult::fail(
                    "column-uniformity",
                    format!("column k={k} not constant: {col:?}; {}", echo(d)),
                ));
            }
        }
    } else {
        out.push(CheckResult::skip(
            "column-uniformity",
            "requires a balanced digraph",
        ));
    }

    // gamma_k = 0 below the spanning-arborescence size
    out.push(zero_padding(d, &table));

    if balanced && nv <= opts.partition_vertex_limit {
        out.push(a_symmetry(d));
        out.push(crossing_check(d, opts.sabotage_crossing));
    } else if !balanced {
        out.push(CheckResult::skip(
            "a-symmetry",
            "requires a balanced digraph",
        ));
        out.push(CheckResult::skip(
            "crossing-bijection",
            "requires a balanced digraph",
        ));
    } else {
        let why = format!("skipped above {} vertices", opts.partition_vertex_limit);
        out.push(CheckResult::skip("a-symmetry", why.clone()));
        out.push(CheckResult::skip("crossing-bijection", why));
    }

    out.push(absorption(d));
    out.push(sink_characterization(d, opts.budget)?);
    out.push(counting_identities(
        d,
        &table,
        &eopts,
        opts.partition_vertex_limit,
    )?);

    if balanced {
        out.push(phi_psi(d, &table, &eopts)?);
    } else {
        out.push(CheckResult::skip("phi-psi", "requires a balanced digraph"));
    }

    out.push(matrix_tree(d, &table));
    out.push(oracle_agreement(d, &table, opts.oracle_arc_limit));
    Ok(out)
}

pub fn all_pass(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.status != CheckStatus::Fail)
}

fn zero_padding(d: &Multidigraph, table: &crate::enumerate::GammaTable) -> CheckResult {
    let nv = d.vertex_count();
    if nv == 0 {
        return CheckResult::pass("zero-padding", "no vertices");
    }
    for s in 0..nv {
        for k in 0..(nv - 1).min(table.max_k() + 1) {
            if table.count(s, k) != 0 {
                return CheckResult::fail(
                    "zero-padding",
                    format!(
                        "gamma_{k}({}) = {} but {k} < |V|-1; {}",
                        d.vertex_id(s),
                        table.count(s, k),
                        echo(d)
                    ),
                );
            }
        }
    }
    CheckResult::pass("zero-padding", "gamma_k = 0 for all k < |V|-1")
}

fn a_symmetry(d: &Multidigraph) -> CheckResult {
    let nv = d.vertex_count();
    for bits in 0..(1u64 << nv) {
        let part = d.partition(VertexSet::from_bits(bits));
        if part.a_pq.len() != part.a_qp.len() {
            return CheckResult::fail(
                "a-symmetry",
                format!(
                    "P={}: |A(P,Q)|={} != |A(Q,P)|={}; {}",
                    vset(d, part.p),
                    part.a_pq.len(),
                    part.a_qp.len(),
                    echo(d)
                ),
            );
        }
    }
    CheckResult::pass("a-symmetry", format!("all {} partitions", 1u64 << nv))
}

fn crossing_check(d: &Multidigraph, sabotage: bool) -> CheckResult {
    const NAME: &str = "crossing-bijection";
    let dec = match crate::bijection::circuit_decomposition(d) {
        Ok(dec) => dec,
        Err(e) => return CheckResult::fail(NAME, e.to_string()),
    };
    if let Err(e) = dec.validate(d) {
        return CheckResult::fail(NAME, e.to_string());
    }
    let nv = d.vertex_count();
    for bits in 0..(1u64 << nv) {
        let part = d.partition(VertexSet::from_bits(bits));
        let beta = match crossing_bijection(d, &dec, &part) {
            Ok(b) => b,
            Err(e) => {
                return CheckResult::fail(NAME, format!("P={}: {e}", vset(d, part.p)));
            }
        };
        let mut pairs = beta.pairs();
        if sabotage && pairs.len() >= 2 {
            // deliberately corrupt the map: swap two images
            let last = pairs.len() - 1;
            let tmp = pairs[0].1;
            pairs[0].1 = pairs[last].1;
            pairs[last].1 = tmp;
        }
        // domain = A(P,Q), image = A(Q,P) without repetition, and every image
        // is the next opposite crossing on the argument's own circuit
        let domain = ArcSubset::from_indices(pairs.iter().map(|&(a, _)| a));
        let image = ArcSubset::from_indices(pairs.iter().map(|&(_, b)| b));
        let well_paired = pairs
            .iter()
            .all(|&(a, b)| next_opposite_crossing(&dec, &part, a) == Some(b));
        if domain != part.a_pq || image != part.a_qp || image.len() != pairs.len() || !well_paired {
            return CheckResult::fail(
                NAME,
                format!(
                    "P={}: pairing {:?} is not a bijection sending each crossing to the next opposite crossing on its circuit: A(P,Q)={}, A(Q,P)={}; {}",
                    vset(d, part.p),
                    pairs
                        .iter()
                        .map(|&(a, b)| format!("{}->{}", d.arc(a).label, d.arc(b).label))
                        .collect::<Vec<_>>(),
                    aset(d, part.a_pq),
                    aset(d, part.a_qp),
                    echo(d)
                ),
            );
        }
    }
    CheckResult::pass(NAME, "bijective on every partition")
}

/// Independent recomputation of where β must send `arc`: scan forward along
/// the arc's circuit for the first A(Q,P) member.
fn next_opposite_crossing(
    dec: &crate::bijection::CircuitDecomposition,
    part: &crate::digraph::Partition,
    arc: usize,
) -> Option<usize> {
    let (ci, pos) = dec.circuit_of(arc);
    let circuit = &dec.circuits()[ci];
    for off in 1..=circuit.len() {
        let cand = circuit[(pos + off) % circuit.len()] as usize;
        if part.a_qp.contains(cand) {
            return Some(cand);
        }
    }
    None
}

/// Adding crossing arcs out of a basin never changes the basin.
fn absorption(d: &Multidigraph) -> CheckResult {
    const NAME: &str = "absorption";
    let nv = d.vertex_count();
    let na = d.arc_count();
    if nv == 0 {
        return CheckResult::pass(NAME, "no vertices");
    }
    let mut rng = SplitMix64::new(0xA5A5_5A5A);
    let exhaustive = na <= 12;
    let sample_count: u64 = if exhaustive { 1 << na } else { 2048 };
    let arc_mask: u128 = if na == 128 {
        u128::MAX
    } else {
        (1u128 << na) - 1
    };
    for i in 0..sample_count {
        let e = if exhaustive {
            ArcSubset::from_bits(i as u128)
        } else {
            ArcSubset::from_bits(
                ((rng.next_u64() as u128) << 64 | rng.next_u64() as u128) & arc_mask,
            )
        };
        for s in 0..nv {
            let p = d.basin(e, s);
            let part = d.partition(p);
            // C = all of A(P,Q), plus a few random subsets of it
            let mut cs = vec![part.a_pq];
            for _ in 0..3 {
                let mut c = ArcSubset::empty();
                for a in part.a_pq.iter() {
                    if rng.next_u64() & 1 == 1 {
                        c.insert(a);
                    }
                }
                cs.push(c);
            }
            for c in cs {
                if d.basin(e.union(c), s) != p {
                    return CheckResult::fail(
                        NAME,
                        format!(
                            "E={}, s={}, C={}: basin changed from {}; {}",
                            aset(d, e),
                            d.vertex_id(s),
                            aset(d, c),
                            vset(d, p),
                            echo(d)
                        ),
                    );
                }
            }
        }
    }
    CheckResult::pass(NAME, format!("{sample_count} subsets swept"))
}

/// For acyclic B: to-root(s) holds iff s is the unique sink.
fn sink_characterization(d: &Multidigraph, budget: u64) -> Result<CheckResult, EnumError> {
    const NAME: &str = "sink-characterization";
    let nv = d.vertex_count();
    let all = d.all_vertices();
    let mut bad: Option<(ArcSubset, usize)> = None;
    enumerate_acyclic_with(d, budget, &mut |b: ArcSubset| {
        if bad.is_some() {
            return;
        }
        let sinks = d.sinks(b);
        for s in 0..nv {
            let to_root = d.basin(b, s) == all;
            let unique = sinks == VertexSet::singleton(s);
            if to_root != unique {
                bad = Some((b, s));
                return;
            }
        }
    })?;
    Ok(match bad {
        Some((b, s)) => CheckResult::fail(
            NAME,
            format!(
                "B={}, s={}: to-root and unique-sink disagree; {}",
                aset(d, b),
                d.vertex_id(s),
                echo(d)
            ),
        ),
        None => CheckResult::pass(NAME, "all acyclic subsets, all vertices"),
    })
}

/// The counting identities that drive the main equality, checked numerically
/// for every unordered vertex pair and every size.
fn counting_identities(
    d: &Multidigraph,
    table: &crate::enumerate::GammaTable,
    eopts: &EnumOptions,
    partition_vertex_limit: usize,
) -> Result<CheckResult, EnumError> {
    const NAME: &str = "counting-identities";
    let nv = d.vertex_count();
    let na = d.arc_count();
    if nv < 2 {
        return Ok(CheckResult::pass(NAME, "fewer than two vertices"));
    }
    let all = d.all_vertices();
    let binomial_sweep = nv <= partition_vertex_limit;
    for s in 0..nv {
        for t in s + 1..nv {
            let cls = classify_all_sizes(d, s, t, eopts)?;
            for k in 0..=na {
                // gamma_k(s) = |U_k| - sum over proper nonempty P of |{B: S(B)=P}|,
                // and the analog over T-buckets for gamma_k(t)
                let mut s_proper = 0u64;
                let mut t_proper = 0u64;
                for ((sb, tb), cell) in cls[k].cells() {
                    if *sb != all {
                        s_proper += cell.count;
                    }
                    if *tb != all {
                        t_proper += cell.count;
                    }
                }
                if table.count(s, k) != cls[k].total() - s_proper {
                    return Ok(CheckResult::fail(
                        NAME,
                        format!(
                            "sum rule over S-buckets: gamma_{k}({}) = {} but buckets give {}; {}",
                            d.vertex_id(s),
                            table.count(s, k),
                            cls[k].total() - s_proper,
                            echo(d)
                        ),
                    ));
                }
                if table.count(t, k) != cls[k].total() - t_proper {
                    return Ok(CheckResult::fail(
                        NAME,
                        format!(
                            "sum rule over T-buckets: gamma_{k}({}) = {} but buckets give {}; {}",
                            d.vertex_id(t),
                            table.count(t, k),
                            cls[k].total() - t_proper,
                            echo(d)
                        ),
                    ));
                }
                if !binomial_sweep {
                    continue;
                }
                // binomial transfer between the S-buckets / T-buckets and X
                for pbits in 1..(1u64 << nv) - 1 {
                    let p = VertexSet::from_bits(pbits);
                    let part = d.partition(p);
                    let lhs_s = cls[k].count_s_basin(p) as u128;
                    let mut rhs_s: u128 = 0;
                    let mut rhs_t: u128 = 0;
                    for m in 0..=k {
                        let x = cls[k - m].x_count(p, nv) as u128;
                        rhs_s += binomial(part.a_pq.len(), m) * x;
                        rhs_t += binomial(part.a_qp.len(), m) * x;
                    }
                    if lhs_s != rhs_s {
                        return Ok(CheckResult::fail(
                            NAME,
                            format!(
                                "binomial transfer (S side): k={k}, P={}: {lhs_s} != {rhs_s}; {}",
                                vset(d, p),
                                echo(d)
                            ),
                        ));
                    }
                    let lhs_t = cls[k].count_t_basin(p.complement(nv)) as u128;
                    if lhs_t != rhs_t {
                        return Ok(CheckResult::fail(
                            NAME,
                            format!(
                                "binomial transfer (T side): k={k}, Q={}: {lhs_t} != {rhs_t}; {}",
                                vset(d, p.complement(nv)),
                                echo(d)
                            ),
                        ));
                    }
                }
            }
        }
    }
    Ok(CheckResult::pass(
        NAME,
        "sum rules and binomial transfers hold for all pairs and sizes",
    ))
}

/// φ and ψ are bijections on every (s, t, k) where they are defined.
fn phi_psi(
    d: &Multidigraph,
    table: &crate::enumerate::GammaTable,
    eopts: &EnumOptions,
) -> Result<CheckResult, EnumError> {
    const NAME: &str = "phi-psi";
    let nv = d.vertex_count();
    let na = d.arc_count();
    let all = d.all_vertices();
    for s in 0..nv {
        for t in 0..nv {
            if s == t {
                continue;
            }
            let ctx = match BijectionContext::new(d, s, t) {
                Ok(ctx) => ctx,
                Err(e) => return Ok(CheckResult::fail(NAME, e.to_string())),
            };
            for k in 0..=na {
                if table.count(s, k) == 0 && table.count(t, k) == 0 {
                    continue;
                }
                let cls = classify_uk(d, s, t, k, eopts)?;
                let Some(members) = cls.members() else {
                    continue;
                };
                // phi round-trips between the non-convergence parts of U_k
                let mut image = Vec::new();
                for &b in &members {
                    if d.basin(b, s) == all {
                        continue;
                    }
                    let out = match ctx.phi(b) {
                        Ok(out) => out,
                        Err(e) => {
                            return Ok(CheckResult::fail(
                                NAME,
                                format!("phi({}) failed: {e}; {}", aset(d, b), echo(d)),
                            ))
                        }
                    };
                    match ctx.phi_inverse(out) {
                        Ok(back) if back == b => {}
                        other => {
                            return Ok(CheckResult::fail(
                                NAME,
                                format!(
                                    "phi round trip broke at {}: got {other:?}; {}",
                                    aset(d, b),
                                    echo(d)
                                ),
                            ))
                        }
                    }
                    image.push(out);
                }
                image.sort();
                image.dedup();
                let mut want: Vec<ArcSubset> = members
                    .iter()
                    .copied()
                    .filter(|&b| d.basin(b, t) != all)
                    .collect();
                want.sort();
                if image != want {
                    return Ok(CheckResult::fail(
                        NAME,
                        format!(
                            "phi image mismatch at k={k}, s={}, t={}; {}",
                            d.vertex_id(s),
                            d.vertex_id(t),
                            echo(d)
                        ),
                    ));
                }
                // psi maps the s-convergences bijectively onto the t-convergences
                let gamma_s: Vec<ArcSubset> = members
                    .iter()
                    .copied()
                    .filter(|&b| d.basin(b, s) == all)
                    .collect();
                let mut psi_image = Vec::new();
                for &b in &gamma_s {
                    match ctx.psi(b) {
                        Ok((res, trace)) => {
                            if trace.steps.len() > nv {
                                return Ok(CheckResult::fail(
                                    NAME,
                                    format!("psi trace too long at {}; {}", aset(d, b), echo(d)),
                                ));
                            }
                            psi_image.push(res);
                        }
                        Err(e) => {
                            return Ok(CheckResult::fail(
                                NAME,
                                format!("psi({}) failed: {e}; {}", aset(d, b), echo(d)),
                            ))
                        }
                    }
                }
                psi_image.sort();
                psi_image.dedup();
                let mut want_t: Vec<ArcSubset> = members
                    .iter()
                    .copied()
                    .filter(|&b| d.basin(b, t) == all)
                    .collect();
                want_t.sort();
                if psi_image != want_t {
                    return Ok(CheckResult::fail(
                        NAME,
                        format!(
                            "psi image mismatch at k={k}, s={}, t={}; {}",
                            d.vertex_id(s),
                            d.vertex_id(t),
                            echo(d)
                        ),
                    ));
                }
            }
        }
    }
    Ok(CheckResult::pass(NAME, "bijective for every (s, t, k)"))
}

fn matrix_tree(d: &Multidigraph, table: &crate::enumerate::GammaTable) -> CheckResult {
    const NAME: &str = "matrix-tree";
    let nv = d.vertex_count();
    if nv == 0 {
        return CheckResult::pass(NAME, "no vertices");
    }
    for s in 0..nv {
        let gamma = if nv - 1 <= table.max_k() {
            table.count(s, nv - 1)
        } else {
            0
        };
        match matrix_tree_to_root(d, s) {
            Ok(det) if det == gamma => {}
            Ok(det) => {
                return CheckResult::fail(
                    NAME,
                    format!(
                        "gamma_{}({}) = {gamma} but determinant gives {det}; {}",
                        nv - 1,
                        d.vertex_id(s),
                        echo(d)
                    ),
                )
            }
            Err(e) => return CheckResult::fail(NAME, e.to_string()),
        }
    }
    CheckResult::pass(
        NAME,
        "determinant equals the spanning-arborescence count at every root",
    )
}

fn oracle_agreement(
    d: &Multidigraph,
    table: &crate::enumerate::GammaTable,
    oracle_arc_limit: usize,
) -> CheckResult {
    const NAME: &str = "oracle";
    let na = d.arc_count();
    if na > oracle_arc_limit {
        return CheckResult::skip(NAME, format!("skipped above {oracle_arc_limit} arcs"));
    }
    for s in 0..d.vertex_count() {
        for k in 0..=na {
            match naive_gamma(d, s, k) {
                Ok(n) if n == table.count(s, k) => {}
                Ok(n) => {
                    return CheckResult::fail(
                        NAME,
                        format!(
                        "gamma_{k}({}) = {} from the engine but {n} from the power-set oracle; {}",
                        d.vertex_id(s),
                        table.count(s, k),
                        echo(d)
                    ),
                    )
                }
                Err(e) => return CheckResult::fail(NAME, e.to_string()),
            }
        }
    }
    CheckResult::pass(NAME, "pruned enumeration matches the power-set oracle")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::fixture7;
    use crate::generate::{balanced_digraph, GenParams};

    #[test]
    fn fixture_passes_every_check() {
        let d = fixture7();
        let results = run_all(&d, &VerifyOptions::default()).unwrap();
        for r in &results {
            assert_ne!(r.status, CheckStatus::Fail, "{}: {}", r.name, r.detail);
        }
        assert!(all_pass(&results));
        assert!(results.iter().all(|r| r.status != CheckStatus::Skipped));
    }

    #[test]
    fn unbalanced_input_skips_balance_only_checks() {
        let d = Multidigraph::parse("v 1\nv 2\na x 1 2\n").unwrap();
        let results = run_all(&d, &VerifyOptions::default()).unwrap();
        assert!(all_pass(&results), "{results:?}");
        let skipped: Vec<&str> = results
            .iter()
            .filter(|r| r.status == CheckStatus::Skipped)
            .map(|r| r.name)
            .collect();
        assert_eq!(
            skipped,
            vec![
                "column-uniformity",
                "a-symmetry",
                "crossing-bijection",
                "phi-psi"
            ]
        );
    }

    #[test]
    fn sabotaged_crossing_bijection_is_caught() {
        let d = fixture7();
        let opts = VerifyOptions {
            sabotage_crossing: true,
            ..Default::default()
        };
        let results = run_all(&d, &opts).unwrap();
        let crossing = results
            .iter()
            .find(|r| r.name == "crossing-bijection")
            .unwrap();
        assert_eq!(crossing.status, CheckStatus::Fail);
        assert!(crossing.detail.contains("not a bijection"));
        assert!(!all_pass(&results));
    }

    #[test]
    fn generated_corpus_passes() {
        for seed in [1u64, 42, 77] {
            let d = balanced_digraph(&GenParams {
                vertices: 4,
                circuits: 2,
                max_len: 4,
                seed,
            })
            .unwrap();
            let results = run_all(&d, &VerifyOptions::default()).unwrap();
            assert!(all_pass(&results), "seed {seed}: {results:?}");
        }
    }

    #[test]
    fn budget_propagates() {
        let d = fixture7();
        let opts = VerifyOptions {
            budget: 4,
            ..Default::default()
        };
        match run_all(&d, &opts) {
            Err(EnumError::BudgetExceeded { .. }) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }
}
