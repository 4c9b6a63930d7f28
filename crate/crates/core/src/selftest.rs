//! End-to-end checks of every constructive algorithm, run from one seed.
//!
//! Each check derives its own RNG stream from the seed and renders a single
//! deterministic line, so two runs with the same seed produce identical
//! reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::Rng;

use crate::cyc::{decode_state, outcome_probabilities};
use crate::distinguisher::{BasisMeasure, Omniscient};
use crate::error::{Error, Result};
use crate::ff;
use crate::graph::{
    all_graphs, attach_label, build_query, check_promise, fixtures, koebler_reduce, random_graph,
    Graph, QueryScheme, ORACLE_NODE_LIMIT,
};
use crate::perm::{all_permutations, in_ff_degrees, Permutation, SecurityParam};
use crate::pkc::{decrypt, encrypt_cyc, encrypt_ff, issue_key_copy, issue_key_series, keygen};
use crate::reductions::{
    estimate_advantage, ga_attack, hybrid_to_iota, randomize_to_average, AttackParams, Ensemble,
    Source, DEFAULT_DELTA,
};
use crate::sample::{Provenance, SampleTuple};
use crate::seed::{stream_rng, SimRng};
use crate::stats::chi_square_uniform_test;

/// Outcome of one check.
#[derive(Clone, Debug, PartialEq)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {} {}: {} {}",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.detail
        )
    }
}

pub type Check = fn(u64) -> Result<CriterionResult>;

/// Every check with its number and name, in order.
pub const CHECKS: [(u8, &str, Check); 9] = [
    (1, "trapdoor-determinism", trapdoor_determinism),
    (2, "multi-bit-correctness", multi_bit_correctness),
    (3, "ff-cyc-coincidence", ff_cyc_coincidence),
    (4, "worst-to-average-uniformity", worst_to_average_uniformity),
    (5, "reduction-equivalence", reduction_equivalence),
    (6, "label-arithmetic", label_arithmetic),
    (7, "attack-soundness", attack_soundness),
    (8, "hybrid-bound", hybrid_bound),
    (9, "blindness", blindness),
];

fn rng_for(seed: u64, id: u8) -> SimRng {
    stream_rng(seed, u64::from(id))
}

fn result(id: u8, passed: bool, detail: String) -> CriterionResult {
    let name = CHECKS[usize::from(id) - 1].1;
    CriterionResult {
        id,
        name,
        passed,
        detail,
    }
}

/// 1000 bit roundtrips at each of n = 2, 6, 10, with the exact probability
/// of the wrong measurement branch.
pub fn trapdoor_determinism(seed: u64) -> Result<CriterionResult> {
    let mut rng = rng_for(seed, 1);
    let (mut runs, mut errors, mut worst) = (0u32, 0u32, 0f64);
    for n in [2, 6, 10] {
        let params = SecurityParam::ff(n)?;
        for _ in 0..1000 {
            let kp = keygen(params, &mut rng);
            let bit = rng.gen::<bool>();
            let mut copy = issue_key_copy(&kp, None, &mut rng)?;
            let c = encrypt_ff(bit, &mut copy)?;
            let p_yes = ff::yes_probability(c.state(), kp.secret())?;
            worst = worst.max(if bit { p_yes } else { 1.0 - p_yes });
            errors += u32::from(decrypt(&kp, &c, &mut rng)? != u32::from(bit));
            runs += 1;
        }
    }
    Ok(result(
        1,
        errors == 0 && worst < 1e-12,
        format!("runs={runs} errors={errors} max_wrong_branch={worst:.3e}"),
    ))
}

/// 200 symbol roundtrips per symbol at (6,3), (8,4), (12,6).
pub fn multi_bit_correctness(seed: u64) -> Result<CriterionResult> {
    let mut rng = rng_for(seed, 2);
    let (mut runs, mut errors, mut worst) = (0u32, 0u32, 0f64);
    for (n, m) in [(6, 3), (8, 4), (12, 6)] {
        let params = SecurityParam::cyc(n, m)?;
        let kp = keygen(params, &mut rng);
        for s in 0..m as u32 {
            for _ in 0..200 {
                let c = encrypt_cyc(s, issue_key_series(&kp, &mut rng)?)?;
                let probs = outcome_probabilities(c.state(), kp.secret())?;
                let wrong: f64 = probs
                    .iter()
                    .enumerate()
                    .filter(|&(r, _)| r as u32 != s)
                    .map(|(_, p)| p)
                    .sum();
                worst = worst.max(wrong);
                errors += u32::from(decrypt(&kp, &c, &mut rng)? != s);
                runs += 1;
            }
        }
    }
    Ok(result(
        2,
        errors == 0 && worst < 1e-12,
        format!("runs={runs} errors={errors} max_wrong_branch={worst:.3e}"),
    ))
}

/// The modulus-2 decoder and the controlled-π test agree on 1000 samples.
pub fn ff_cyc_coincidence(seed: u64) -> Result<CriterionResult> {
    let mut rng = rng_for(seed, 3);
    let params = SecurityParam::ff(6)?;
    let mut agree = 0u32;
    for _ in 0..1000 {
        let pi = params.sample(&mut rng);
        let sample = ff::gen_plus(&pi, &mut rng)?;
        let sample = if rng.gen::<bool>() { ff::convert(sample) } else { sample };
        let symbol = decode_state(sample.state(), &pi, &mut rng)?;
        let yes = ff::distinguish(sample.state(), &pi, &mut rng)?;
        agree += u32::from((symbol == 0) == yes);
    }
    Ok(result(3, agree == 1000, format!("agree={agree}/1000")))
}

/// Exhaustive conjugation counts at n = 6, then a chi-square test on the
/// hidden key recovered from 15000 randomised tuples.
pub fn worst_to_average_uniformity(seed: u64) -> Result<CriterionResult> {
    let mut rng = rng_for(seed, 4);
    let params = SecurityParam::ff(6)?;
    let pi = params.sample(&mut rng);
    let mut exact: BTreeMap<Permutation, u64> = BTreeMap::new();
    for tau in all_permutations(6) {
        *exact.entry(pi.conjugate(&tau)?).or_insert(0) += 1;
    }
    let exhaustive_ok = exact.len() == 15 && exact.values().all(|&c| c == 48);

    let mut hits: BTreeMap<Permutation, u64> = exact.keys().map(|k| (k.clone(), 0)).collect();
    for _ in 0..15000 {
        let tuple = SampleTuple::new(vec![ff::gen_plus(&pi, &mut rng)?])?;
        let out = randomize_to_average(tuple, &mut rng)?;
        let Provenance::Plus(hidden) = out.samples()[0].provenance() else {
            return Err(Error::InvalidParam("randomisation lost the plus tag".into()));
        };
        *hits
            .get_mut(hidden)
            .ok_or_else(|| Error::NotInClass { class: "K_6".into() })? += 1;
    }
    let counts: Vec<u64> = hits.values().copied().collect();
    let chi = chi_square_uniform_test(&counts, 0.001);
    Ok(result(
        4,
        exhaustive_ok && chi.passes(),
        format!(
            "classes={} exact_min={} exact_max={} sampled_min={} sampled_max={} chi2={:.3} critical={:.3}",
            exact.len(),
            exact.values().min().copied().unwrap_or(0),
            exact.values().max().copied().unwrap_or(0),
            counts.iter().min().copied().unwrap_or(0),
            counts.iter().max().copied().unwrap_or(0),
            chi.statistic,
            chi.critical
        ),
    ))
}

fn ga_by_search(g: &Graph) -> bool {
    all_permutations(g.node_count()).any(|p| !p.is_identity() && g.is_automorphism(&p))
}

/// The GA → UniqueGA_ff reduction against brute force on every graph with at
/// most 4 nodes and 100 random 5-node graphs. Every query must satisfy the
/// promise.
pub fn reduction_equivalence(seed: u64) -> Result<CriterionResult> {
    let mut rng = rng_for(seed, 5);
    let mut graphs: Vec<Graph> = (1..=4).flat_map(all_graphs).collect();
    graphs.extend((0..100).map(|_| random_graph(5, &mut rng)));
    let (mut mismatches, mut violations, mut queries) = (0u32, 0u32, 0usize);
    for g in &graphs {
        let mut oracle = |q: &Graph| Ok(check_promise(q, ORACLE_NODE_LIMIT)?.is_some());
        match koebler_reduce(g, &mut oracle, QueryScheme::Paired) {
            Ok(out) => {
                queries += out.queries.len();
                mismatches += u32::from(out.answer != ga_by_search(g));
            }
            Err(Error::PromiseViolation(_)) => violations += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(result(
        5,
        mismatches == 0 && violations == 0,
        format!(
            "graphs={} queries={queries} mismatches={mismatches} promise_violations={violations}",
            graphs.len()
        ),
    ))
}

fn path(n: usize) -> Graph {
    Graph::from_edges(n, &(1..n).map(|v| (v, v + 1)).collect::<Vec<_>>()).expect("path")
}

/// Label sizes `2n + j + 3` for n, j ≤ 6, and every query graph built on
/// paths with up to 6 nodes lands in N with the expected size.
pub fn label_arithmetic(_seed: u64) -> Result<CriterionResult> {
    let mut label_errors = 0u32;
    for n in 1..=6 {
        for j in 1..=6 {
            let h = attach_label(&path(n), 1, j, 0)?;
            label_errors += u32::from(h.node_count() != n + 2 * n + j + 3);
        }
    }
    let (mut built, mut query_errors) = (0u32, 0u32);
    for n in 2..=6 {
        let g = path(n);
        let s = n + 2;
        for i in 1..=n {
            let fixed: Vec<usize> = (1..i).collect();
            let f = fixed.len();
            for j in i + 1..=n {
                let backs = std::iter::once(None).chain((i + 1..=n).map(Some));
                for back in backs {
                    let labels = f + 1 + usize::from(back.is_some());
                    let branches = f * (f + 1) / 2 + (f + 1) + back.map_or(0, |_| f + 3);
                    let mut copy = n + labels * (2 * s + 3) + branches;
                    copy += usize::from(copy.is_multiple_of(2));
                    let q = build_query(&g, &fixed, i, j, back)?;
                    built += 1;
                    query_errors +=
                        u32::from(q.node_count() != 2 * copy || !in_ff_degrees(q.node_count()));
                }
            }
        }
    }
    Ok(result(
        6,
        label_errors == 0 && query_errors == 0,
        format!("labels=36 label_errors={label_errors} queries={built} query_errors={query_errors}"),
    ))
}

/// The attack with the trapdoor distinguisher on the planted 14-node
/// instances, 20 repetitions each.
pub fn attack_soundness(seed: u64) -> Result<CriterionResult> {
    let mut rng = rng_for(seed, 7);
    let yes = fixtures::planted_yes();
    let no = fixtures::planted_no();
    let dist = Omniscient::new(yes.automorphism().expect("planted").clone());
    let params = AttackParams::new(1, 1, 32, 16)?;
    let (mut accepted, mut rejected) = (0u32, 0u32);
    for _ in 0..20 {
        accepted += u32::from(ga_attack(&yes, &dist, &params, &mut rng)?.answer);
        rejected += u32::from(!ga_attack(&no, &dist, &params, &mut rng)?.answer);
    }
    Ok(result(
        7,
        accepted == 20 && rejected == 20,
        format!("yes_accepted={accepted}/20 no_rejected={rejected}/20"),
    ))
}

/// The hybrid distinguisher against ι, built from the trapdoor test.
pub fn hybrid_bound(seed: u64) -> Result<CriterionResult> {
    let mut rng = rng_for(seed, 8);
    let pi = SecurityParam::ff(6)?.sample(&mut rng);
    let plus = Source::new(Ensemble::Plus(pi.clone()), 1)?;
    let minus = Source::new(Ensemble::Minus(pi.clone()), 1)?;
    let iota = Source::new(Ensemble::Iota(6), 1)?;
    let a = Omniscient::new(pi);
    let eps = estimate_advantage(&a, &plus, &minus, 4000, DEFAULT_DELTA, &mut rng)?;
    let b = hybrid_to_iota(a);
    let r = estimate_advantage(&b, &plus, &iota, 4000, DEFAULT_DELTA, &mut rng)?;
    let bound = eps.advantage / 4.0 - 2.0 * r.ci_halfwidth;
    Ok(result(
        8,
        r.advantage >= bound,
        format!(
            "epsilon={:.6} advantage={:.6} ci={:.6} bound={bound:.6}",
            eps.advantage, r.advantage, r.ci_halfwidth
        ),
    ))
}

/// Measuring one sample in the permutation basis tells nothing.
pub fn blindness(seed: u64) -> Result<CriterionResult> {
    let mut rng = rng_for(seed, 9);
    let pi = SecurityParam::ff(6)?.sample(&mut rng);
    let plus = Source::new(Ensemble::Plus(pi.clone()), 1)?;
    let minus = Source::new(Ensemble::Minus(pi), 1)?;
    let ff = estimate_advantage(&BasisMeasure, &plus, &minus, 4000, DEFAULT_DELTA, &mut rng)?;
    let rho = SecurityParam::cyc(6, 3)?.sample(&mut rng);
    let s0 = Source::new(Ensemble::Cyc { pi: rho.clone(), s: 0 }, 1)?;
    let s1 = Source::new(Ensemble::Cyc { pi: rho, s: 1 }, 1)?;
    let cyc = estimate_advantage(&BasisMeasure, &s0, &s1, 4000, DEFAULT_DELTA, &mut rng)?;
    Ok(result(
        9,
        ff.within_ci_of(0.0) && cyc.within_ci_of(0.0),
        format!(
            "ff_advantage={:.6} cyc_advantage={:.6} ci={:.6}",
            ff.advantage, cyc.advantage, ff.ci_halfwidth
        ),
    ))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelftestReport {
    pub seed: u64,
    pub results: Vec<CriterionResult>,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("seed={}\n", self.seed);
        for r in &self.results {
            writeln!(out, "{}", r.line()).unwrap();
        }
        let passed = self.results.iter().filter(|r| r.passed).count();
        writeln!(out, "summary passed={passed}/{}", self.results.len()).unwrap();
        out
    }
}

pub fn run_all(seed: u64) -> Result<SelftestReport> {
    let results = CHECKS
        .iter()
        .map(|(_, _, check)| check(seed))
        .collect::<Result<_>>()?;
    Ok(SelftestReport { seed, results })
}
