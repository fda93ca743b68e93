//! Machine-readable output shapes. The field layouts are part of the tool's
//! contract: stable key order, nothing extra, chosen to diff cleanly.

use serde::{Deserialize, Serialize};

use sconv::digraph::Multidigraph;
use sconv::enumerate::GammaTable;
use sconv::verify::{CheckResult, CheckStatus};
use sconv::{ArcSubset, BijectionContext, GraphError, InvolutionTrace, VertexSet};

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct GammaJson {
    pub vertices: Vec<String>,
    pub max_k: usize,
    pub gamma: Vec<Vec<u64>>,
    pub uniform_columns: Vec<bool>,
}

impl GammaJson {
    pub fn new(d: &Multidigraph, table: &GammaTable) -> Self {
        GammaJson {
            vertices: d.vertex_ids().to_vec(),
            max_k: table.max_k(),
            gamma: table.rows().to_vec(),
            uniform_columns: table.uniform_columns().to_vec(),
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct BijectionJson {
    pub s: String,
    pub t: String,
    pub k: usize,
    pub pairs: Vec<PairJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct PairJson {
    pub from: Vec<String>,
    pub to: Vec<String>,
    pub trace: Vec<TraceStepJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct TraceStepJson {
    pub p: Vec<String>,
    pub q: Vec<String>,
    pub stripped: Vec<String>,
    pub inserted: Vec<String>,
    pub result: Vec<String>,
}

fn labels(d: &Multidigraph, b: ArcSubset) -> Vec<String> {
    d.labels(b).into_iter().map(str::to_string).collect()
}

fn ids(d: &Multidigraph, p: VertexSet) -> Vec<String> {
    p.iter().map(|v| d.vertex_id(v).to_string()).collect()
}

impl BijectionJson {
    pub fn new(
        ctx: &BijectionContext,
        k: usize,
        pairs: &[(ArcSubset, ArcSubset, InvolutionTrace)],
        with_trace: bool,
    ) -> Self {
        let d = ctx.digraph();
        BijectionJson {
            s: d.vertex_id(ctx.s()).to_string(),
            t: d.vertex_id(ctx.t()).to_string(),
            k,
            pairs: pairs
                .iter()
                .map(|(from, to, trace)| PairJson {
                    from: labels(d, *from),
                    to: labels(d, *to),
                    trace: if with_trace {
                        trace
                            .steps
                            .iter()
                            .map(|step| TraceStepJson {
                                p: ids(d, step.p),
                                q: ids(d, step.q),
                                stripped: labels(d, step.stripped),
                                inserted: labels(d, step.inserted),
                                result: labels(d, step.after),
                            })
                            .collect()
                    } else {
                        Vec::new()
                    },
                })
                .collect(),
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct DigraphJson {
    pub vertices: Vec<String>,
    pub arcs: Vec<ArcJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ArcJson {
    pub label: String,
    pub source: String,
    pub target: String,
}

impl From<&Multidigraph> for DigraphJson {
    fn from(d: &Multidigraph) -> Self {
        DigraphJson {
            vertices: d.vertex_ids().to_vec(),
            arcs: d
                .arcs()
                .iter()
                .map(|a| ArcJson {
                    label: a.label.clone(),
                    source: d.vertex_id(a.source).to_string(),
                    target: d.vertex_id(a.target).to_string(),
                })
                .collect(),
        }
    }
}

impl TryFrom<&DigraphJson> for Multidigraph {
    type Error = GraphError;

    fn try_from(j: &DigraphJson) -> Result<Self, GraphError> {
        let index = |id: &str| j.vertices.iter().position(|v| v == id);
        let mut arcs = Vec::with_capacity(j.arcs.len());
        for a in &j.arcs {
            let source = index(&a.source).ok_or(GraphError::VertexIndexOutOfRange {
                index: usize::MAX,
                count: j.vertices.len(),
            })?;
            let target = index(&a.target).ok_or(GraphError::VertexIndexOutOfRange {
                index: usize::MAX,
                count: j.vertices.len(),
            })?;
            arcs.push((a.label.clone(), source, target));
        }
        Multidigraph::new(j.vertices.clone(), arcs)
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ChecksJson {
    pub checks: Vec<CheckJson>,
    pub pass: bool,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct CheckJson {
    pub name: String,
    pub status: String,
    pub detail: String,
}

pub fn status_str(status: CheckStatus) -> &'static str {
    match status {
        CheckStatus::Pass => "pass",
        CheckStatus::Fail => "fail",
        CheckStatus::Skipped => "skip",
    }
}

impl ChecksJson {
    pub fn new(results: &[CheckResult]) -> Self {
        ChecksJson {
            checks: results
                .iter()
                .map(|r| CheckJson {
                    name: r.name.to_string(),
                    status: status_str(r.status).to_string(),
                    detail: r.detail.clone(),
                })
                .collect(),
            pass: sconv::verify::all_pass(results),
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct MaxAcyclicJson {
    pub arcs: usize,
    pub max_acyclic_size: usize,
    pub count_at_max: u64,
    pub min_feedback_arc_set_size: usize,
    pub min_feedback_arc_set_count: u64,
}
