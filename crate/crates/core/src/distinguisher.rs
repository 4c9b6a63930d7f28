//! Distinguisher oracles: anything that maps a provenance-free tuple of
//! states to a bit.

use rand::{Rng, RngCore};

use crate::error::Result;
use crate::ff;
use crate::perm::Permutation;
use crate::sample::TupleView;

pub trait Distinguisher: Sync {
    fn decide(&self, tuple: TupleView<'_>, rng: &mut dyn RngCore) -> Result<bool>;

    fn name(&self) -> String;
}

impl<D: Distinguisher + ?Sized> Distinguisher for &D {
    fn decide(&self, tuple: TupleView<'_>, rng: &mut dyn RngCore) -> Result<bool> {
        (**self).decide(tuple, rng)
    }

    fn name(&self) -> String {
        (**self).name()
    }
}

impl<D: Distinguisher + ?Sized> Distinguisher for Box<D> {
    fn decide(&self, tuple: TupleView<'_>, rng: &mut dyn RngCore) -> Result<bool> {
        (**self).decide(tuple, rng)
    }

    fn name(&self) -> String {
        (**self).name()
    }
}

/// Holds the trapdoor π and runs the controlled-π test on the first sample.
#[derive(Clone, Debug)]
pub struct Omniscient {
    pi: Permutation,
}

impl Omniscient {
    pub fn new(pi: Permutation) -> Self {
        Omniscient { pi }
    }
}

impl Distinguisher for Omniscient {
    fn decide(&self, tuple: TupleView<'_>, rng: &mut dyn RngCore) -> Result<bool> {
        let state = tuple
            .get(0)
            .ok_or_else(|| crate::Error::InvalidParam("empty tuple".into()))?;
        ff::distinguish(state, &self.pi, rng)
    }

    fn name(&self) -> String {
        "omniscient".into()
    }
}

/// Fair coin, ignoring its input.
#[derive(Clone, Copy, Debug, Default)]
pub struct Coin;

impl Distinguisher for Coin {
    fn decide(&self, _tuple: TupleView<'_>, rng: &mut dyn RngCore) -> Result<bool> {
        Ok(rng.gen::<bool>())
    }

    fn name(&self) -> String {
        "coin".into()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Constant(pub bool);

impl Distinguisher for Constant {
    fn decide(&self, _tuple: TupleView<'_>, _rng: &mut dyn RngCore) -> Result<bool> {
        Ok(self.0)
    }

    fn name(&self) -> String {
        format!("constant-{}", u8::from(self.0))
    }
}

/// Measures the first sample in the computational basis and accepts on an
/// even permutation.
#[derive(Clone, Copy, Debug, Default)]
pub struct BasisMeasure;

impl Distinguisher for BasisMeasure {
    fn decide(&self, tuple: TupleView<'_>, rng: &mut dyn RngCore) -> Result<bool> {
        let state = tuple
            .get(0)
            .ok_or_else(|| crate::Error::InvalidParam("empty tuple".into()))?;
        let (_, perm) = state.measure_full(rng);
        Ok(perm.sign() == 0)
    }

    fn name(&self) -> String {
        "basis-measure".into()
    }
}
