//! Cross-module invariants on randomized inputs. The structural facts are
//! exercised on arbitrary digraphs (balance is deliberately not imposed);
//! only the column-uniformity equality itself needs balance, and one test
//! demonstrates it failing without it.

use proptest::prelude::*;

use sconv::digraph::Multidigraph;
use sconv::enumerate::{acyclic_count, gamma_table, EnumOptions};
use sconv::generate::{balanced_digraph, GenParams, SplitMix64};
use sconv::verify::{self, CheckStatus, VerifyOptions};
use sconv::{ArcSubset, VertexSet};

fn arb_digraph(max_vertices: usize, max_arcs: usize) -> impl Strategy<Value = Multidigraph> {
    (1..=max_vertices).prop_flat_map(move |n| {
        proptest::collection::vec((0..n, 0..n), 0..=max_arcs).prop_map(move |ends| {
            let vertices: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
            let arcs = ends
                .into_iter()
                .enumerate()
                .map(|(i, (u, v))| (format!("a{i}"), u, v))
                .collect();
            Multidigraph::new(vertices, arcs).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn text_round_trips(d in arb_digraph(7, 14)) {
        let again = Multidigraph::parse(&d.to_text()).unwrap();
        prop_assert_eq!(d, again);
    }

    #[test]
    fn basin_is_monotone(d in arb_digraph(7, 14), a in any::<u128>(), b in any::<u128>()) {
        let mask = if d.arc_count() == 0 { 0 } else { (1u128 << d.arc_count()) - 1 };
        let big = ArcSubset::from_bits(b & mask);
        let small = ArcSubset::from_bits(a & b & mask);
        for v in 0..d.vertex_count() {
            let inner = d.basin(small, v);
            let outer = d.basin(big, v);
            prop_assert!(inner.is_subset_of(outer));
            prop_assert!(inner.contains(v));
        }
    }

    #[test]
    fn pruned_count_matches_power_set(d in arb_digraph(5, 10)) {
        let mut brute = 0u64;
        for mask in 0..(1u128 << d.arc_count()) {
            if d.is_acyclic(ArcSubset::from_bits(mask)) {
                brute += 1;
            }
        }
        let counted = acyclic_count(&d, &EnumOptions::default()).unwrap();
        prop_assert_eq!(counted, brute);
    }

    #[test]
    fn generator_output_is_balanced(seed in any::<u64>()) {
        let params = GenParams {
            vertices: 1 + (seed % 6) as usize,
            circuits: (seed % 5) as usize,
            max_len: 1 + (seed % 4) as usize,
            seed,
        };
        let d = balanced_digraph(&params).unwrap();
        prop_assert!(d.is_balanced());
    }

    #[test]
    fn balanced_partitions_are_symmetric(seed in any::<u64>(), pbits in any::<u64>()) {
        let d = balanced_digraph(&GenParams {
            vertices: 1 + (seed % 8) as usize,
            circuits: 1 + (seed % 4) as usize,
            max_len: 1 + (seed % 5) as usize,
            seed,
        })
        .unwrap();
        let p = VertexSet::from_bits(pbits & VertexSet::full(d.vertex_count()).bits());
        let part = d.partition(p);
        prop_assert_eq!(part.a_pq.len(), part.a_qp.len());
    }

    #[test]
    fn convergence_paths_agree(d in arb_digraph(6, 10), bits in any::<u128>()) {
        let mask = if d.arc_count() == 0 { 0 } else { (1u128 << d.arc_count()) - 1 };
        let b = ArcSubset::from_bits(bits & mask);
        for s in 0..d.vertex_count() {
            prop_assert_eq!(d.is_convergence(b, s), d.is_convergence_unique_sink(b, s));
        }
    }
}

/// The full check suite holds on unbalanced digraphs too, apart from the
/// balance-only checks it skips.
#[test]
fn verify_suite_on_random_unbalanced_digraphs() {
    let mut rng = SplitMix64::new(99);
    let mut seen_unbalanced = 0;
    while seen_unbalanced < 25 {
        let n = 2 + (rng.next_below(4)) as usize;
        let m = rng.next_below(9) as usize;
        let vertices: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let arcs: Vec<(String, usize, usize)> = (0..m)
            .map(|i| {
                (
                    format!("a{i}"),
                    rng.next_below(n as u64) as usize,
                    rng.next_below(n as u64) as usize,
                )
            })
            .collect();
        let d = Multidigraph::new(vertices, arcs).unwrap();
        if d.is_balanced() {
            continue;
        }
        seen_unbalanced += 1;
        let results = verify::run_all(&d, &VerifyOptions::default()).unwrap();
        for r in &results {
            assert_ne!(
                r.status,
                CheckStatus::Fail,
                "{}: {} on {}",
                r.name,
                r.detail,
                d.to_text()
            );
        }
    }
}

/// Column uniformity genuinely needs balance: the single arc 1 -> 2 has
/// gamma_1(2) = 1 but gamma_1(1) = 0.
#[test]
fn uniformity_fails_without_balance() {
    let d = Multidigraph::parse("v 1\nv 2\na x 1 2\n").unwrap();
    let t = gamma_table(&d, &EnumOptions::default()).unwrap();
    assert_eq!(t.count(1, 1), 1);
    assert_eq!(t.count(0, 1), 0);
    assert!(!t.uniform_columns()[1]);
    assert!(!t.all_uniform());
}

/// Deterministic corpus sweep: the whole verify suite on generated balanced
/// digraphs of assorted shapes.
#[test]
fn verify_suite_on_generated_corpus() {
    for seed in 0..40u64 {
        let d = balanced_digraph(&GenParams {
            vertices: 2 + (seed % 5) as usize,
            circuits: 1 + (seed % 3) as usize,
            max_len: 1 + (seed % 4) as usize,
            seed,
        })
        .unwrap();
        let results = verify::run_all(&d, &VerifyOptions::default()).unwrap();
        for r in &results {
            assert_ne!(
                r.status,
                CheckStatus::Fail,
                "seed {seed}: {}: {} on {}",
                r.name,
                r.detail,
                d.to_text()
            );
        }
    }
}

/// Denser digraphs (up to ~30 arcs) than the quick corpus above: worker-count
/// equality, column uniformity, the sum-rule and binomial-transfer identities
/// for one vertex pair, and psi bijectivity at the busiest size.
#[test]
#[ignore = "longer randomized soak; run with -- --ignored"]
fn dense_corpus_soak() {
    use sconv::enumerate::{binomial, classify_all_sizes, list_convergences};
    use sconv::BijectionContext;

    for seed in 0..40u64 {
        let d = balanced_digraph(&GenParams {
            vertices: 4 + (seed % 4) as usize,
            circuits: 6 + (seed % 3) as usize,
            max_len: 4,
            seed,
        })
        .unwrap();
        let nv = d.vertex_count();
        let na = d.arc_count();
        let table = gamma_table(&d, &EnumOptions::default()).unwrap();
        let parallel = gamma_table(
            &d,
            &EnumOptions {
                workers: 2,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(
            table, parallel,
            "seed {seed}: worker count changed the table"
        );
        assert!(
            table.all_uniform(),
            "seed {seed}: non-uniform column on {}",
            d.to_text()
        );

        // identities for the pair (0, 1)
        let all = d.all_vertices();
        let cls = classify_all_sizes(&d, 0, 1, &EnumOptions::default()).unwrap();
        for k in 0..=na {
            let proper: u64 = cls[k]
                .cells()
                .filter(|((sb, _), _)| *sb != all)
                .map(|(_, c)| c.count)
                .sum();
            assert_eq!(
                table.count(0, k),
                cls[k].total() - proper,
                "seed {seed} k={k}"
            );
            for pbits in 1..(1u64 << nv) - 1 {
                let p = VertexSet::from_bits(pbits);
                let part = d.partition(p);
                let mut rhs: u128 = 0;
                for m in 0..=k {
                    rhs += binomial(part.a_pq.len(), m) * cls[k - m].x_count(p, nv) as u128;
                }
                assert_eq!(
                    cls[k].count_s_basin(p) as u128,
                    rhs,
                    "seed {seed} k={k} P bits {pbits:b}"
                );
            }
        }

        // psi at the size with the most s-convergences, if any exist
        let Some(k) = (0..=na).max_by_key(|&k| table.count(0, k)) else {
            continue;
        };
        if table.count(0, k) == 0 {
            continue;
        }
        let ctx = BijectionContext::new(&d, 0, 1).unwrap();
        let family = list_convergences(&d, 0, k, &EnumOptions::default()).unwrap();
        let mut image: Vec<_> = family
            .iter()
            .map(|&b| {
                let (res, trace) = ctx.psi(b).unwrap();
                assert!(trace.steps.len() <= nv, "seed {seed}");
                res
            })
            .collect();
        image.sort();
        image.dedup();
        assert_eq!(
            image,
            list_convergences(&d, 1, k, &EnumOptions::default()).unwrap(),
            "seed {seed}: psi image mismatch at k={k}"
        );
    }
}
