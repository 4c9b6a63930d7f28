//! Executable versions of the security reductions: worst-to-average
//! randomisation, the GA attack built from a distinguisher, the hybrid
//! distinguisher against ι, and an advantage estimator.
//!
//! Every randomised routine draws one root seed from the caller's RNG and
//! derives an independent stream per trial, so results do not depend on the
//! rayon thread count.

use std::fmt::Write as _;

use rand::{Rng, RngCore};
use rayon::prelude::*;

use crate::cyc::gen_cyc;
use crate::distinguisher::Distinguisher;
use crate::error::{Error, Result};
use crate::ff::{self, gen_iota, gen_plus};
use crate::graph::{coset_sample, CosetSign, PromiseInstance};
use crate::perm::{random_permutation, Permutation};
use crate::qstate::Side;
use crate::sample::{Provenance, PureSample, SampleTuple, TupleView};
use crate::seed::{stream_rng, SimRng};
use crate::stats::hoeffding_halfwidth;

/// Default failure probability for the Hoeffding interval.
pub const DEFAULT_DELTA: f64 = 0.01;

/// Right-translates every sample by one fixed `tau`.
pub fn randomize_with(tuple: SampleTuple, tau: &Permutation) -> Result<SampleTuple> {
    let samples = tuple
        .into_samples()
        .into_iter()
        .map(|s| {
            let provenance = match s.provenance() {
                Provenance::Plus(pi) => Provenance::Plus(pi.conjugate(tau)?),
                Provenance::Minus(pi) => Provenance::Minus(pi.conjugate(tau)?),
                Provenance::Iota => Provenance::Iota,
                Provenance::Phi { pi, s } => Provenance::Phi {
                    pi: pi.conjugate(tau)?,
                    s: *s,
                },
            };
            let state = s.state().translate(tau, Side::Right)?;
            Ok(PureSample::new(state, provenance))
        })
        .collect::<Result<Vec<_>>>()?;
    SampleTuple::new(samples)
}

/// Draws one uniform τ and right-translates the whole tuple by it. A tuple
/// hiding π comes out hiding `τ⁻¹πτ`, which is uniform over the key class.
pub fn randomize_to_average<R: Rng + ?Sized>(tuple: SampleTuple, rng: &mut R) -> Result<SampleTuple> {
    let tau = random_permutation(tuple.degree(), rng);
    randomize_with(tuple, &tau)
}

/// Anything that can produce fresh tuples for the estimator.
pub trait TupleSource: Sync {
    fn draw(&self, rng: &mut SimRng) -> Result<SampleTuple>;

    fn name(&self) -> String;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ensemble {
    Plus(Permutation),
    Minus(Permutation),
    Iota(usize),
    Cyc { pi: Permutation, s: u32 },
}

/// `k` independent draws from one ensemble.
#[derive(Clone, Debug)]
pub struct Source {
    ensemble: Ensemble,
    k: usize,
}

impl Source {
    pub fn new(ensemble: Ensemble, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParam("tuples need k >= 1".into()));
        }
        Ok(Source { ensemble, k })
    }

    fn one(&self, rng: &mut SimRng) -> Result<PureSample> {
        match &self.ensemble {
            Ensemble::Plus(pi) => gen_plus(pi, rng),
            Ensemble::Minus(pi) => gen_plus(pi, rng).map(ff::convert),
            Ensemble::Iota(n) => gen_iota(*n, rng),
            Ensemble::Cyc { pi, s } => gen_cyc(pi, *s, rng).map(PureSample::from),
        }
    }
}

impl TupleSource for Source {
    fn draw(&self, rng: &mut SimRng) -> Result<SampleTuple> {
        SampleTuple::new((0..self.k).map(|_| self.one(rng)).collect::<Result<_>>()?)
    }

    fn name(&self) -> String {
        let base = match &self.ensemble {
            Ensemble::Plus(_) => "plus".to_string(),
            Ensemble::Minus(_) => "minus".to_string(),
            Ensemble::Iota(_) => "iota".to_string(),
            Ensemble::Cyc { s, .. } => format!("cyc{s}"),
        };
        format!("{base}^{}", self.k)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistinguisherReport {
    pub trials0: u64,
    pub trials1: u64,
    pub acc0: u64,
    pub acc1: u64,
    pub advantage: f64,
    pub ci_halfwidth: f64,
    pub delta: f64,
    /// Root seed of the per-trial streams.
    pub seed: u64,
}

impl DistinguisherReport {
    pub fn new(trials0: u64, trials1: u64, acc0: u64, acc1: u64, delta: f64, seed: u64) -> Self {
        let advantage = (acc0 as f64 / trials0 as f64 - acc1 as f64 / trials1 as f64).abs();
        DistinguisherReport {
            trials0,
            trials1,
            acc0,
            acc1,
            advantage,
            ci_halfwidth: hoeffding_halfwidth(trials0.min(trials1), delta),
            delta,
            seed,
        }
    }

    /// Whether `value` lies within the confidence half-width of the estimate.
    pub fn within_ci_of(&self, value: f64) -> bool {
        (self.advantage - value).abs() <= self.ci_halfwidth
    }

    /// One `key=value` per line, then a summary line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "trials0={}", self.trials0).unwrap();
        writeln!(out, "trials1={}", self.trials1).unwrap();
        writeln!(out, "acc0={}", self.acc0).unwrap();
        writeln!(out, "acc1={}", self.acc1).unwrap();
        writeln!(out, "advantage={:.6}", self.advantage).unwrap();
        writeln!(out, "ci={:.6}", self.ci_halfwidth).unwrap();
        writeln!(out, "delta={}", self.delta).unwrap();
        writeln!(out, "stream_seed={}", self.seed).unwrap();
        writeln!(out, "{}", self.summary()).unwrap();
        out
    }

    pub fn summary(&self) -> String {
        format!(
            "summary advantage={:.6} ci={:.6} acc={}/{} vs {}/{}",
            self.advantage, self.ci_halfwidth, self.acc0, self.trials0, self.acc1, self.trials1
        )
    }
}

/// Runs `dist` on `trials` fresh tuples from each source.
pub fn estimate_advantage<R: RngCore + ?Sized>(
    dist: &dyn Distinguisher,
    source_a: &dyn TupleSource,
    source_b: &dyn TupleSource,
    trials: u64,
    delta: f64,
    rng: &mut R,
) -> Result<DistinguisherReport> {
    if trials == 0 {
        return Err(Error::InvalidParam("trials must be positive".into()));
    }
    let root = rng.next_u64();
    let count = |source: &dyn TupleSource, offset: u64| -> Result<u64> {
        (0..trials)
            .into_par_iter()
            .map(|t| {
                let mut r = stream_rng(root, 2 * t + offset);
                let tuple = source.draw(&mut r)?;
                Ok(u64::from(dist.decide(tuple.view(), &mut r)?))
            })
            .try_reduce(|| 0, |x, y| Ok(x + y))
    };
    let acc0 = count(source_a, 0)?;
    let acc1 = count(source_b, 1)?;
    Ok(DistinguisherReport::new(trials, trials, acc0, acc1, delta, root))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TupleShape {
    /// All `k` samples come from the side's coset state.
    #[default]
    Uniform,
    /// The first sample comes from the side's coset state and the other
    /// `k - 1` from the plus state, mirroring a challenge ciphertext handed
    /// over together with key copies.
    Challenge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AttackParams {
    pub k: usize,
    /// Nominal value of the polynomial bounding the inverse advantage.
    pub p: u64,
    pub tuples_per_side: u64,
    pub threshold: u64,
    pub shape: TupleShape,
}

impl AttackParams {
    pub fn new(k: usize, p: u64, tuples_per_side: u64, threshold: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParam("tuples need k >= 1".into()));
        }
        if threshold >= tuples_per_side {
            return Err(Error::InvalidParam(format!(
                "threshold {threshold} must be below tuples_per_side {tuples_per_side}"
            )));
        }
        Ok(AttackParams {
            k,
            p,
            tuples_per_side,
            threshold,
            shape: TupleShape::Uniform,
        })
    }

    /// `8p²n` tuples per side and threshold `4pn`.
    pub fn textbook(k: usize, p: u64, n: usize) -> Result<Self> {
        Self::new(k, p, Self::textbook_tuples(p, n), Self::textbook_threshold(p, n))
    }

    pub fn textbook_tuples(p: u64, n: usize) -> u64 {
        8 * p * p * n as u64
    }

    pub fn textbook_threshold(p: u64, n: usize) -> u64 {
        4 * p * n as u64
    }

    pub fn with_shape(mut self, shape: TupleShape) -> Self {
        self.shape = shape;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttackOutcome {
    pub answer: bool,
    pub r_plus: u64,
    pub r_minus: u64,
    pub params: AttackParams,
    pub seed: u64,
}

impl AttackOutcome {
    pub fn to_text(&self, n: usize) -> String {
        let p = &self.params;
        let mut out = String::new();
        writeln!(out, "k={}", p.k).unwrap();
        writeln!(out, "p={}", p.p).unwrap();
        writeln!(out, "tuples_per_side={}", p.tuples_per_side).unwrap();
        writeln!(out, "threshold={}", p.threshold).unwrap();
        writeln!(out, "textbook_tuples={}", AttackParams::textbook_tuples(p.p, n)).unwrap();
        writeln!(out, "textbook_threshold={}", AttackParams::textbook_threshold(p.p, n)).unwrap();
        writeln!(out, "r_plus={}", self.r_plus).unwrap();
        writeln!(out, "r_minus={}", self.r_minus).unwrap();
        writeln!(out, "stream_seed={}", self.seed).unwrap();
        writeln!(out, "{}", if self.answer { "YES" } else { "NO" }).unwrap();
        out
    }
}

/// Decides GA on a promise instance with a distinguisher: count YES answers
/// on tuples built from plus and from minus coset samples and compare the gap
/// with the threshold.
pub fn ga_attack<R: RngCore + ?Sized>(
    inst: &PromiseInstance,
    dist: &dyn Distinguisher,
    params: &AttackParams,
    rng: &mut R,
) -> Result<AttackOutcome> {
    let root = rng.next_u64();
    let count = |side: CosetSign, offset: u64| -> Result<u64> {
        (0..params.tuples_per_side)
            .into_par_iter()
            .map(|t| {
                let mut r = stream_rng(root, 2 * t + offset);
                let samples = (0..params.k)
                    .map(|idx| {
                        let sign = match params.shape {
                            TupleShape::Challenge if idx > 0 => CosetSign::Plus,
                            _ => side,
                        };
                        coset_sample(inst, sign, &mut r)
                    })
                    .collect::<Result<Vec<_>>>()?;
                let tuple = SampleTuple::new(samples)?;
                Ok(u64::from(dist.decide(tuple.view(), &mut r)?))
            })
            .try_reduce(|| 0, |x, y| Ok(x + y))
    };
    let r_plus = count(CosetSign::Plus, 0)?;
    let r_minus = count(CosetSign::Minus, 1)?;
    Ok(AttackOutcome {
        answer: r_plus.abs_diff(r_minus) >= params.threshold,
        r_plus,
        r_minus,
        params: *params,
        seed: root,
    })
}

/// Distinguisher for plus versus ι built from one for plus versus minus.
/// With probability 1/2 it runs the inner distinguisher as is; otherwise it
/// applies the sign conversion to every sample, runs the inner distinguisher
/// and flips the answer.
#[derive(Clone, Debug)]
pub struct Hybrid<D> {
    inner: D,
}

pub fn hybrid_to_iota<D: Distinguisher>(dist: D) -> Hybrid<D> {
    Hybrid { inner: dist }
}

impl<D: Distinguisher> Distinguisher for Hybrid<D> {
    fn decide(&self, tuple: TupleView<'_>, rng: &mut dyn RngCore) -> Result<bool> {
        if rng.gen::<bool>() {
            self.inner.decide(tuple, rng)
        } else {
            let converted: Vec<_> = tuple.states().map(|s| s.phase_by_sign()).collect();
            Ok(!self.inner.decide(TupleView::from_states(&converted), rng)?)
        }
    }

    fn name(&self) -> String {
        format!("hybrid({})", self.inner.name())
    }
}
