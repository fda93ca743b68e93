//! Seeded generation of balanced digraphs by superposing random closed walks.
//!
//! Every walk contributes one incoming and one outgoing arc at each visit, so
//! the superposition is balanced by construction. The generator runs on
//! SplitMix64 (64-bit state, fixed constants), so a seed produces the same
//! bytes on every platform.

use std::fmt;

use crate::digraph::Multidigraph;

/// SplitMix64: state advances by the golden-gamma constant, output is the
/// finalizer mix of the new state.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish value in 0..n (plain modulo; fine for test corpora).
    pub fn next_below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        self.next_u64() % n
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub vertices: usize,
    pub circuits: usize,
    pub max_len: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenError {
    InvalidParams { reason: &'static str },
}

impl fmt::Display for GenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenError::InvalidParams { reason } => write!(f, "invalid parameters: {reason}"),
        }
    }
}

impl std::error::Error for GenError {}

/// Emit a balanced digraph in the graph file format. Vertices are named
/// 1..=n; arcs are labeled a0, a1, .. in generation order. Each of the
/// `circuits` walks picks a start vertex, takes up to `max_len - 1` random
/// steps, then closes back to its start; a length-1 walk is a loop.
pub fn balanced_digraph_text(params: &GenParams) -> Result<String, GenError> {
    let GenParams {
        vertices: n,
        circuits,
        max_len,
        seed,
    } = *params;
    if n == 0 {
        return Err(GenError::InvalidParams {
            reason: "need at least one vertex",
        });
    }
    if n > 64 {
        return Err(GenError::InvalidParams {
            reason: "at most 64 vertices",
        });
    }
    if max_len == 0 {
        return Err(GenError::InvalidParams {
            reason: "walk length bound must be positive",
        });
    }
    if circuits.saturating_mul(max_len) > 128 {
        return Err(GenError::InvalidParams {
            reason: "circuits * max-len may not exceed the 128-arc limit",
        });
    }
    let mut rng = SplitMix64::new(seed);
    let mut out = String::new();
    out.push_str(&format!(
        "# balanced digraph: vertices={n} circuits={circuits} max-len={max_len} seed={seed}\n"
    ));
    for v in 1..=n {
        out.push_str(&format!("v {v}\n"));
    }
    let mut arc_id = 0usize;
    for _ in 0..circuits {
        let len = 1 + rng.next_below(max_len as u64) as usize;
        let start = rng.next_below(n as u64) as usize + 1;
        let mut prev = start;
        for step in 1..=len {
            let next = if step == len {
                start
            } else {
                rng.next_below(n as u64) as usize + 1
            };
            out.push_str(&format!("a a{arc_id} {prev} {next}\n"));
            arc_id += 1;
            prev = next;
        }
    }
    Ok(out)
}

pub fn balanced_digraph(params: &GenParams) -> Result<Multidigraph, GenError> {
    let text = balanced_digraph_text(params)?;
    Ok(Multidigraph::parse(&text).expect("generated text is well-formed"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_for_fixed_seed() {
        let p = GenParams {
            vertices: 5,
            circuits: 3,
            max_len: 4,
            seed: 42,
        };
        assert_eq!(
            balanced_digraph_text(&p).unwrap(),
            balanced_digraph_text(&p).unwrap()
        );
    }

    #[test]
    fn different_seeds_differ() {
        let a = GenParams {
            vertices: 5,
            circuits: 3,
            max_len: 4,
            seed: 1,
        };
        let b = GenParams {
            vertices: 5,
            circuits: 3,
            max_len: 4,
            seed: 2,
        };
        assert_ne!(
            balanced_digraph_text(&a).unwrap(),
            balanced_digraph_text(&b).unwrap()
        );
    }

    #[test]
    fn zero_circuits_gives_isolated_vertices() {
        let p = GenParams {
            vertices: 4,
            circuits: 0,
            max_len: 3,
            seed: 7,
        };
        let d = balanced_digraph(&p).unwrap();
        assert_eq!(d.vertex_count(), 4);
        assert_eq!(d.arc_count(), 0);
        assert!(d.is_balanced());
    }

    #[test]
    fn always_balanced() {
        for seed in 0..2000 {
            let p = GenParams {
                vertices: 1 + (seed as usize % 6),
                circuits: seed as usize % 4,
                max_len: 1 + (seed as usize % 5),
                seed,
            };
            let d = balanced_digraph(&p).unwrap();
            assert!(d.is_balanced(), "seed {seed}");
            assert!(d.arc_count() <= p.circuits * p.max_len);
        }
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(balanced_digraph_text(&GenParams {
            vertices: 0,
            circuits: 1,
            max_len: 1,
            seed: 0
        })
        .is_err());
        assert!(balanced_digraph_text(&GenParams {
            vertices: 2,
            circuits: 1,
            max_len: 0,
            seed: 0
        })
        .is_err());
        assert!(balanced_digraph_text(&GenParams {
            vertices: 2,
            circuits: 200,
            max_len: 1,
            seed: 0
        })
        .is_err());
    }

    #[test]
    fn splitmix_reference_values() {
        // first outputs for seed 0 (well-known sequence)
        let mut rng = SplitMix64::new(0);
        assert_eq!(rng.next_u64(), 0xE220A8397B1DCDAF);
        assert_eq!(rng.next_u64(), 0x6E789E6AA1B965F4);
        assert_eq!(rng.next_u64(), 0x06C45D188009454F);
    }
}
