//! Text renderers. Every format is a pure function of already-computed
//! results, so output bytes cannot depend on worker count or timing.

use sconv::digraph::Multidigraph;
use sconv::enumerate::GammaTable;
use sconv::verify::{CheckResult, CheckStatus};
use sconv::{ArcSubset, BijectionContext, InvolutionTrace, VertexSet};

use crate::json::{status_str, BijectionJson, ChecksJson, GammaJson, MaxAcyclicJson};
use crate::Format;

fn arc_set(d: &Multidigraph, b: ArcSubset) -> String {
    format!("{{{}}}", d.labels(b).join(","))
}

fn vertex_set(d: &Multidigraph, p: VertexSet) -> String {
    let ids: Vec<&str> = p.iter().map(|v| d.vertex_id(v)).collect();
    format!("{{{}}}", ids.join(","))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn gamma(d: &Multidigraph, table: &GammaTable, format: Format) -> String {
    match format {
        Format::Json => to_json(&GammaJson::new(d, table)),
        Format::Csv => {
            let mut out = String::from("vertex");
            for k in 0..=table.max_k() {
                out.push_str(&format!(",k{k}"));
            }
            out.push('\n');
            for s in 0..d.vertex_count() {
                out.push_str(&csv_field(d.vertex_id(s)));
                for k in 0..=table.max_k() {
                    out.push_str(&format!(",{}", table.count(s, k)));
                }
                out.push('\n');
            }
            out
        }
        Format::Table => {
            if d.vertex_count() == 0 {
                return "empty digraph: nothing to count\n".to_string();
            }
            let id_width = d
                .vertex_ids()
                .iter()
                .map(|s| s.len())
                .max()
                .unwrap_or(1)
                .max("vertex".len());
            let col_widths: Vec<usize> = (0..=table.max_k())
                .map(|k| {
                    let head = format!("k={k}").len();
                    let widest = (0..d.vertex_count())
                        .map(|s| table.count(s, k).to_string().len())
                        .max()
                        .unwrap_or(1);
                    head.max(widest).max(3)
                })
                .collect();
            let mut out = format!("{:>id_width$}", "vertex");
            for (k, w) in col_widths.iter().enumerate() {
                out.push_str(&format!("  {:>w$}", format!("k={k}")));
            }
            out.push('\n');
            for s in 0..d.vertex_count() {
                out.push_str(&format!("{:>id_width$}", d.vertex_id(s)));
                for (k, w) in col_widths.iter().enumerate() {
                    out.push_str(&format!("  {:>w$}", table.count(s, k)));
                }
                out.push('\n');
            }
            out.push_str(&format!("{:>id_width$}", "uniform"));
            for (k, w) in col_widths.iter().enumerate() {
                out.push_str(&format!(
                    "  {:>w$}",
                    if table.uniform_columns()[k] {
                        "yes"
                    } else {
                        "NO"
                    }
                ));
            }
            out.push('\n');
            out.push_str(&format!("balanced: {}\n", d.is_balanced()));
            out.push_str(&format!("uniform: {}\n", table.all_uniform()));
            out
        }
    }
}

pub fn bijection(
    ctx: &BijectionContext,
    k: usize,
    pairs: &[(ArcSubset, ArcSubset, InvolutionTrace)],
    with_trace: bool,
    format: Format,
) -> String {
    let d = ctx.digraph();
    match format {
        Format::Json => to_json(&BijectionJson::new(ctx, k, pairs, with_trace)),
        Format::Csv => {
            let mut out = String::from("from,to\n");
            for (from, to, _) in pairs {
                out.push_str(&format!(
                    "{},{}\n",
                    csv_field(&d.labels(*from).join(" ")),
                    csv_field(&d.labels(*to).join(" "))
                ));
            }
            out
        }
        Format::Table => {
            let mut out = format!(
                "s={} t={} k={k}: {} convergence(s)\n",
                d.vertex_id(ctx.s()),
                d.vertex_id(ctx.t()),
                pairs.len()
            );
            for (from, to, trace) in pairs {
                out.push_str(&format!("{} -> {}\n", arc_set(d, *from), arc_set(d, *to)));
                if with_trace {
                    for (i, step) in trace.steps.iter().enumerate() {
                        out.push_str(&format!(
                            "  step {}: P={} Q={} strip {} insert {} -> {}\n",
                            i + 1,
                            vertex_set(d, step.p),
                            vertex_set(d, step.q),
                            arc_set(d, step.stripped),
                            arc_set(d, step.inserted),
                            arc_set(d, step.after),
                        ));
                    }
                }
            }
            out
        }
    }
}

pub fn checks(results: &[CheckResult], format: Format) -> String {
    let pass = sconv::verify::all_pass(results);
    match format {
        Format::Json => to_json(&ChecksJson::new(results)),
        Format::Csv => {
            let mut out = String::from("name,status,detail\n");
            for r in results {
                out.push_str(&format!(
                    "{},{},{}\n",
                    csv_field(r.name),
                    status_str(r.status),
                    csv_field(&r.detail)
                ));
            }
            out
        }
        Format::Table => {
            let mut out = String::new();
            for r in results {
                let tag = match r.status {
                    CheckStatus::Pass => "PASS",
                    CheckStatus::Fail => "FAIL",
                    CheckStatus::Skipped => "SKIP",
                };
                out.push_str(&format!("[{tag}] {}: {}\n", r.name, r.detail));
            }
            out.push_str(&format!("result: {}\n", if pass { "pass" } else { "fail" }));
            out
        }
    }
}

pub fn max_acyclic(arcs: usize, size: usize, count: u64, format: Format) -> String {
    let j = MaxAcyclicJson {
        arcs,
        max_acyclic_size: size,
        count_at_max: count,
        min_feedback_arc_set_size: arcs - size,
        min_feedback_arc_set_count: count,
    };
    match format {
        Format::Json => to_json(&j),
        Format::Csv => format!(
            "arcs,max_acyclic_size,count_at_max,min_feedback_arc_set_size,min_feedback_arc_set_count\n{},{},{},{},{}\n",
            j.arcs, j.max_acyclic_size, j.count_at_max, j.min_feedback_arc_set_size, j.min_feedback_arc_set_count
        ),
        Format::Table => format!(
            "arcs: {}\nmax acyclic size: {}\ncount at max: {}\nmin feedback arc set size: {}\nmin feedback arc set count: {}\n",
            j.arcs, j.max_acyclic_size, j.count_at_max, j.min_feedback_arc_set_size, j.min_feedback_arc_set_count
        ),
    }
}
