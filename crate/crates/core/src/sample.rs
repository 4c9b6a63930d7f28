//! Single draws from the mixed states, and tuples of them.
//!
//! A mixed state such as ρπ+ is never stored as a density matrix. Each draw
//! picks the hidden coset representative σ and holds the corresponding pure
//! state. The [`Provenance`] tag records which ensemble a draw came from; it is
//! visible to orchestration and test code only. Distinguishers see a
//! [`TupleView`], which exposes states and nothing else.

use crate::perm::Permutation;
use crate::qstate::SparseState;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Plus(Permutation),
    Minus(Permutation),
    Iota,
    Phi { pi: Permutation, s: u32 },
}

#[derive(Clone, Debug)]
pub struct PureSample {
    state: SparseState,
    provenance: Provenance,
}

impl PureSample {
    pub(crate) fn new(state: SparseState, provenance: Provenance) -> Self {
        PureSample { state, provenance }
    }

    pub fn state(&self) -> &SparseState {
        &self.state
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn degree(&self) -> usize {
        self.state.degree()
    }

    pub fn into_state(self) -> SparseState {
        self.state
    }
}

/// `k ≥ 1` draws sharing one hidden permutation (or all ι).
#[derive(Clone, Debug)]
pub struct SampleTuple {
    samples: Vec<PureSample>,
}

impl SampleTuple {
    pub fn new(samples: Vec<PureSample>) -> crate::Result<Self> {
        let Some(first) = samples.first() else {
            return Err(crate::Error::InvalidParam("a tuple needs at least one sample".into()));
        };
        let n = first.degree();
        if let Some(bad) = samples.iter().find(|s| s.degree() != n) {
            return Err(crate::Error::DegreeMismatch {
                left: n,
                right: bad.degree(),
            });
        }
        Ok(SampleTuple { samples })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.samples[0].degree()
    }

    pub fn samples(&self) -> &[PureSample] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<PureSample> {
        self.samples
    }

    pub fn view(&self) -> TupleView<'_> {
        TupleView {
            inner: Inner::Samples(&self.samples),
        }
    }
}

/// Provenance-free window onto a tuple.
#[derive(Clone, Copy)]
pub struct TupleView<'a> {
    inner: Inner<'a>,
}

#[derive(Clone, Copy)]
enum Inner<'a> {
    Samples(&'a [PureSample]),
    States(&'a [SparseState]),
}

impl<'a> TupleView<'a> {
    /// A view over bare states, for callers that build tuples themselves.
    pub fn from_states(states: &'a [SparseState]) -> Self {
        TupleView {
            inner: Inner::States(states),
        }
    }

    pub fn len(&self) -> usize {
        match self.inner {
            Inner::Samples(s) => s.len(),
            Inner::States(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn degree(&self) -> usize {
        self.get(0).map_or(0, SparseState::degree)
    }

    pub fn get(&self, i: usize) -> Option<&'a SparseState> {
        match self.inner {
            Inner::Samples(s) => s.get(i).map(|x| &x.state),
            Inner::States(s) => s.get(i),
        }
    }

    pub fn states(&self) -> impl Iterator<Item = &'a SparseState> + 'a {
        let view = *self;
        (0..view.len()).map(move |i| view.get(i).expect("in range"))
    }
}
