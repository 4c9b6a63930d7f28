//! Cyclic coset states over K_n^m and the generalised controlled-π decoder.
//!
//! `|Φ^σ_{π,s}⟩ = m^{-1/2} Σ_t ω_m^{st} |σπ^t⟩`. The Fourier map over the
//! cyclic group `⟨π⟩` is evaluated exactly, so decoding is deterministic up
//! to floating-point error.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::perm::{random_permutation, Permutation};
use crate::qstate::{root_of_unity, Direction, Side, SparseState};
use crate::sample::{Provenance, PureSample};

/// Cycle length `m` of `pi` if `pi ∈ K_n^m` for some `m ≥ 2`.
pub fn cycle_modulus(pi: &Permutation) -> Result<u32> {
    let m = pi.cycles()[0].len();
    if m < 2 || !pi.is_uniform_cycle_type(m) {
        return Err(Error::NotInClass {
            class: format!("K_{}^m for any m >= 2", pi.degree()),
        });
    }
    Ok(m as u32)
}

#[derive(Clone, Debug)]
pub struct CyclicSample {
    state: SparseState,
    m: u32,
    pi: Permutation,
    s: u32,
}

impl CyclicSample {
    pub fn state(&self) -> &SparseState {
        &self.state
    }

    pub fn modulus(&self) -> u32 {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.state.degree()
    }

    /// Hidden `(π, s)` tag, for orchestration and tests.
    pub fn provenance(&self) -> (&Permutation, u32) {
        (&self.pi, self.s)
    }

    pub fn into_state(self) -> SparseState {
        self.state
    }
}

impl From<CyclicSample> for PureSample {
    fn from(c: CyclicSample) -> Self {
        PureSample::new(c.state, Provenance::Phi { pi: c.pi, s: c.s })
    }
}

/// `|Φ^σ_{π,s}⟩` for a fixed coset representative `sigma`.
pub fn cyc_state(pi: &Permutation, s: u32, sigma: &Permutation) -> Result<CyclicSample> {
    let m = cycle_modulus(pi)?;
    if s >= m {
        return Err(Error::SymbolOutOfRange { s, m });
    }
    let n = pi.degree();
    let scale = 1.0 / (m as f64).sqrt();
    // F_π|π^s⟩ over the cyclic group {id, π, ..., π^{m-1}}
    let coset = SparseState::from_entries(
        n,
        1,
        (0..m).map(|t| {
            let amp: Complex64 = root_of_unity(m, s as i64 * t as i64) * scale;
            (0, pi.pow(t), amp)
        }),
    )?;
    let state = coset.translate(sigma, Side::Left)?;
    Ok(CyclicSample {
        state,
        m,
        pi: pi.clone(),
        s,
    })
}

/// One draw of ρπ^(s).
pub fn gen_cyc<R: Rng + ?Sized>(pi: &Permutation, s: u32, rng: &mut R) -> Result<CyclicSample> {
    cycle_modulus(pi)?;
    let sigma = random_permutation(pi.degree(), rng);
    cyc_state(pi, s, &sigma)
}

fn decoder_state(state: &SparseState, pi: &Permutation) -> Result<SparseState> {
    let m = cycle_modulus(pi)?;
    if state.degree() != pi.degree() {
        return Err(Error::DegreeMismatch {
            left: state.degree(),
            right: pi.degree(),
        });
    }
    Ok(state
        .attach_control(m)?
        .fourier_control(Direction::Inverse)
        .controlled_power(pi)?
        .fourier_control(Direction::Forward))
}

/// Exact distribution of the decoder's output symbol.
pub fn outcome_probabilities(state: &SparseState, pi: &Permutation) -> Result<Vec<f64>> {
    Ok(decoder_state(state, pi)?.control_probabilities())
}

/// Generalised controlled-π test on a bare state.
pub fn decode_state<R: Rng + ?Sized>(state: &SparseState, pi: &Permutation, rng: &mut R) -> Result<u32> {
    Ok(decoder_state(state, pi)?.measure_control(rng).0)
}

pub fn decode_cyc<R: Rng + ?Sized>(sample: &CyclicSample, pi: &Permutation, rng: &mut R) -> Result<u32> {
    let m = cycle_modulus(pi)?;
    if m != sample.m {
        return Err(Error::ModulusMismatch {
            expected: sample.m,
            found: m,
        });
    }
    decode_state(&sample.state, pi, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff;
    use crate::perm::{sample_cyclic, SecurityParam};
    use crate::qstate::states_equal;
    use crate::seed::rng_from_seed;

    fn key(n: usize, m: usize, seed: u64) -> Permutation {
        sample_cyclic(&SecurityParam::cyc(n, m).unwrap(), &mut rng_from_seed(seed)).unwrap()
    }

    #[test]
    fn symbol_zero_is_the_uniform_coset_superposition() {
        let pi = key(8, 4, 1);
        let sample = gen_cyc(&pi, 0, &mut rng_from_seed(2)).unwrap();
        assert_eq!(sample.state().support_size(), 4);
        for (_, a) in sample.state().entries() {
            assert!((a - Complex64::new(0.5, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn explicit_amplitudes_for_three_cycle() {
        let pi = Permutation::from_cycles(3, &[&[1, 2, 3]]).unwrap();
        let sample = cyc_state(&pi, 1, &Permutation::identity(3)).unwrap();
        let r3 = 3f64.sqrt();
        let w = Complex64::new(-0.5, r3 / 2.0);
        let expected = [
            (Permutation::identity(3), Complex64::new(1.0, 0.0)),
            (pi.clone(), w),
            (Permutation::from_cycles(3, &[&[1, 3, 2]]).unwrap(), w * w),
        ];
        for (perm, amp) in expected {
            assert!((sample.state().amplitude(0, &perm) - amp / r3).norm() < 1e-12);
        }
    }

    #[test]
    fn modulus_two_coincides_with_fully_flipped_states() {
        let pi = Permutation::from_cycles(6, &[&[1, 5], &[2, 3], &[4, 6]]).unwrap();
        let mut rng = rng_from_seed(3);
        for _ in 0..20 {
            let sigma = random_permutation(6, &mut rng);
            let plus = ff::generate_plus(&pi, &sigma).unwrap();
            let minus = ff::convert(plus.clone());
            assert!(states_equal(cyc_state(&pi, 0, &sigma).unwrap().state(), plus.state(), false));
            assert!(states_equal(cyc_state(&pi, 1, &sigma).unwrap().state(), minus.state(), true));
        }
    }

    #[test]
    fn decoder_recovers_symbol_exactly() {
        let mut rng = rng_from_seed(4);
        for (n, m) in [(6, 3), (8, 4), (12, 6), (6, 2), (9, 3)] {
            let pi = key(n, m, n as u64 * 31 + m as u64);
            for s in 0..m as u32 {
                for _ in 0..5 {
                    let sample = gen_cyc(&pi, s, &mut rng).unwrap();
                    let probs = outcome_probabilities(sample.state(), &pi).unwrap();
                    for (r, p) in probs.iter().enumerate() {
                        if r as u32 == s {
                            assert!((1.0 - p).abs() < 1e-12);
                        } else {
                            assert!(*p < 1e-12);
                        }
                    }
                    assert_eq!(decode_cyc(&sample, &pi, &mut rng).unwrap(), s);
                }
            }
        }
    }

    #[test]
    fn distinct_symbols_are_orthogonal() {
        let pi = key(12, 6, 5);
        let sigma = random_permutation(12, &mut rng_from_seed(6));
        for s in 0..6 {
            for t in 0..6 {
                let a = cyc_state(&pi, s, &sigma).unwrap();
                let b = cyc_state(&pi, t, &sigma).unwrap();
                let ov = a.state().inner(b.state()).norm();
                if s == t {
                    assert!((ov - 1.0).abs() < 1e-9);
                } else {
                    assert!(ov < 1e-9);
                }
            }
        }
    }

    #[test]
    fn errors() {
        let pi = key(6, 3, 1);
        let mut rng = rng_from_seed(1);
        assert_eq!(gen_cyc(&pi, 3, &mut rng).unwrap_err(), Error::SymbolOutOfRange { s: 3, m: 3 });
        let mixed = Permutation::from_cycles(5, &[&[1, 2], &[3, 4, 5]]).unwrap();
        assert!(matches!(gen_cyc(&mixed, 0, &mut rng), Err(Error::NotInClass { .. })));
        let sample = gen_cyc(&pi, 1, &mut rng).unwrap();
        let pairs = Permutation::from_cycles(6, &[&[1, 2], &[3, 4], &[5, 6]]).unwrap();
        assert_eq!(
            decode_cyc(&sample, &pairs, &mut rng).unwrap_err(),
            Error::ModulusMismatch { expected: 3, found: 2 }
        );
    }
}
