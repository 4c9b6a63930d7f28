//! UniqueGA_ff instances, a search-backed oracle, the reduction from GA, and
//! coset-state sampling from promise instances.

use num_complex::Complex64;
use rand::Rng;

use super::label::build_query;
use super::search::automorphisms_bounded;
use super::Graph;
use crate::error::{Error, Result};
use crate::perm::{in_ff_degrees, random_permutation, Permutation};
use crate::qstate::SparseState;
use crate::sample::{Provenance, PureSample};

/// Node limit for oracle calls on query graphs.
pub const ORACLE_NODE_LIMIT: usize = 4096;

/// Checks the UniqueGA_ff promise: node count ≡ 2 (mod 4) and the
/// automorphism group is trivial or `{id, π}` with π fixed-point-free.
/// Returns π if present.
pub fn check_promise(g: &Graph, node_limit: usize) -> Result<Option<Permutation>> {
    let n = g.node_count();
    if !in_ff_degrees(n) {
        return Err(Error::PromiseViolation(format!("node count {n} is not 2 mod 4")));
    }
    let (found, _) = automorphisms_bounded(g, node_limit, 3)?;
    match found.len() {
        1 => Ok(None),
        2 => {
            let pi = found.into_iter().find(|p| !p.is_identity()).expect("non-identity");
            if pi.is_fpf_involution() {
                Ok(Some(pi))
            } else {
                Err(Error::PromiseViolation(format!(
                    "the non-trivial automorphism {} has a fixed point",
                    pi.cycle_notation()
                )))
            }
        }
        _ => Err(Error::PromiseViolation(
            "automorphism group has more than two elements".into(),
        )),
    }
}

/// Decides a UniqueGA_ff instance by search; promise violations are errors.
pub fn unique_ga_ff_oracle(g: &Graph) -> Result<bool> {
    Ok(check_promise(g, ORACLE_NODE_LIMIT)?.is_some())
}

pub trait UniqueGaFfOracle {
    fn query(&mut self, g: &Graph) -> Result<bool>;
}

impl<F: FnMut(&Graph) -> Result<bool>> UniqueGaFfOracle for F {
    fn query(&mut self, g: &Graph) -> Result<bool> {
        self(g)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOracle {
    pub node_limit: usize,
}

impl Default for SearchOracle {
    fn default() -> Self {
        SearchOracle {
            node_limit: ORACLE_NODE_LIMIT,
        }
    }
}

impl UniqueGaFfOracle for SearchOracle {
    fn query(&mut self, g: &Graph) -> Result<bool> {
        Ok(check_promise(g, self.node_limit)?.is_some())
    }
}

/// How the reduction phrases its oracle queries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum QueryScheme {
    /// One query per `(i, j, z)`: copy A labels `i` and `z`, copy B labels
    /// `j` and `i`. Every query satisfies the promise.
    #[default]
    Paired,
    /// One query per `(i, j)`, labelling only `i` in copy A and `j` in copy
    /// B. The pointwise stabiliser of the first `i - 1` nodes can still move
    /// unlabelled nodes, so queries may break the promise.
    Direct,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryRecord {
    pub i: usize,
    pub j: usize,
    pub back: Option<usize>,
    pub nodes: usize,
    pub answer: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoeblerOutcome {
    pub answer: bool,
    /// Whether the queries were built from the complement, which happens
    /// when the input is disconnected.
    pub complemented: bool,
    pub queries: Vec<QueryRecord>,
}

/// Decides whether `g` has a non-trivial automorphism using only
/// UniqueGA_ff queries. Levels `i = n, ..., 1` are scanned from the top and
/// the first YES ends the run.
///
/// Queries are built from a connected graph with the same automorphism
/// group: `g` itself or its complement. With disconnected copies the
/// components of the two copies could be swapped independently.
pub fn koebler_reduce(
    g: &Graph,
    oracle: &mut dyn UniqueGaFfOracle,
    scheme: QueryScheme,
) -> Result<KoeblerOutcome> {
    let complemented = !g.is_connected();
    let complement;
    let g = if complemented {
        complement = g.complement();
        &complement
    } else {
        g
    };
    let n = g.node_count();
    let mut queries = Vec::new();
    for i in (1..=n).rev() {
        let fixed: Vec<usize> = (1..i).collect();
        for j in i + 1..=n {
            let backs: Vec<Option<usize>> = match scheme {
                QueryScheme::Paired => (i + 1..=n).map(Some).collect(),
                QueryScheme::Direct => vec![None],
            };
            for back in backs {
                let q = build_query(g, &fixed, i, j, back)?;
                let answer = oracle.query(&q)?;
                queries.push(QueryRecord {
                    i,
                    j,
                    back,
                    nodes: q.node_count(),
                    answer,
                });
                if answer {
                    return Ok(KoeblerOutcome {
                        answer: true,
                        complemented,
                        queries,
                    });
                }
            }
        }
    }
    Ok(KoeblerOutcome {
        answer: false,
        complemented,
        queries,
    })
}

/// A graph known to satisfy the UniqueGA_ff promise, with its automorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PromiseInstance {
    graph: Graph,
    automorphism: Option<Permutation>,
}

impl PromiseInstance {
    /// Checks the promise by search.
    pub fn verify(graph: Graph, node_limit: usize) -> Result<Self> {
        let automorphism = check_promise(&graph, node_limit)?;
        Ok(PromiseInstance {
            graph,
            automorphism,
        })
    }

    /// A YES instance whose automorphism is supplied by the caller. Only
    /// membership of `pi` is checked, not uniqueness.
    pub fn planted_yes(graph: Graph, pi: Permutation) -> Result<Self> {
        let n = graph.node_count();
        if !in_ff_degrees(n) {
            return Err(Error::PromiseViolation(format!("node count {n} is not 2 mod 4")));
        }
        if !pi.is_fpf_involution() || !graph.is_automorphism(&pi) {
            return Err(Error::PromiseViolation(format!(
                "{} is not a fixed-point-free automorphism",
                pi.cycle_notation()
            )));
        }
        Ok(PromiseInstance {
            graph,
            automorphism: Some(pi),
        })
    }

    /// A NO instance asserted rigid by the caller. Only the size is checked.
    pub fn planted_no(graph: Graph) -> Result<Self> {
        let n = graph.node_count();
        if !in_ff_degrees(n) {
            return Err(Error::PromiseViolation(format!("node count {n} is not 2 mod 4")));
        }
        Ok(PromiseInstance {
            graph,
            automorphism: None,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn automorphism(&self) -> Option<&Permutation> {
        self.automorphism.as_ref()
    }

    pub fn is_yes(&self) -> bool {
        self.automorphism.is_some()
    }

    pub fn degree(&self) -> usize {
        self.graph.node_count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CosetSign {
    Plus,
    Minus,
}

/// One draw of the coset state `|Aut(G)|^{-1/2} Σ_α |σα⟩` for uniform σ.
/// The minus variant negates the amplitude on `σπ`. On a YES instance this is
/// a ρπ± draw; on a NO instance both variants are ι draws.
pub fn coset_sample<R: Rng + ?Sized>(
    inst: &PromiseInstance,
    sign: CosetSign,
    rng: &mut R,
) -> Result<PureSample> {
    let n = inst.degree();
    let sigma = random_permutation(n, rng);
    match &inst.automorphism {
        None => Ok(PureSample::new(
            SparseState::basis_state(0, sigma, 1)?,
            Provenance::Iota,
        )),
        Some(pi) => {
            let amp = std::f64::consts::FRAC_1_SQRT_2;
            let other = if sign == CosetSign::Plus { amp } else { -amp };
            let swapped = sigma.compose(pi)?;
            let state = SparseState::from_entries(
                n,
                1,
                [
                    (0, sigma, Complex64::new(amp, 0.0)),
                    (0, swapped, Complex64::new(other, 0.0)),
                ],
            )?;
            let provenance = match sign {
                CosetSign::Plus => Provenance::Plus(pi.clone()),
                CosetSign::Minus => Provenance::Minus(pi.clone()),
            };
            Ok(PureSample::new(state, provenance))
        }
    }
}
