//! The fully-flipped coset states ρπ+ / ρπ− over K_n, the maximally mixed
//! state ι, the sign-phase conversion, and the trapdoor test.
//!
//! Bit conventions: the test returns `true` (YES) when the control register
//! measures 0, which is the ρπ+ branch.

use rand::Rng;

use crate::error::{Error, Result};
use crate::perm::{random_permutation, Permutation, SecurityParam};
use crate::qstate::{Direction, Side, SparseState};
use crate::sample::{Provenance, PureSample};

fn check_key(pi: &Permutation) -> Result<()> {
    let param = SecurityParam::ff(pi.degree())?;
    if !param.contains(pi) {
        return Err(Error::NotInClass {
            class: format!("K_{}", pi.degree()),
        });
    }
    Ok(())
}

/// Runs the generation circuit for a fixed left coset representative `sigma`:
/// `|0⟩|id⟩`, Hadamard, controlled-π, uncompute the control on `|π⟩`,
/// left-translate by `sigma`, keep the permutation register.
pub fn generate_plus(pi: &Permutation, sigma: &Permutation) -> Result<PureSample> {
    check_key(pi)?;
    let n = pi.degree();
    let state = SparseState::basis_state(0, Permutation::identity(n), 2)?
        .fourier_control(Direction::Forward)
        .controlled_power(pi)?
        .controlled_decrement(pi)?
        .translate(sigma, Side::Left)?
        .discard_control()?;
    Ok(PureSample::new(state, Provenance::Plus(pi.clone())))
}

/// One draw of ρπ+: `(|σ⟩ + |σπ⟩)/√2` with uniform σ.
pub fn gen_plus<R: Rng + ?Sized>(pi: &Permutation, rng: &mut R) -> Result<PureSample> {
    check_key(pi)?;
    let sigma = random_permutation(pi.degree(), rng);
    generate_plus(pi, &sigma)
}

/// One draw of ι: `|σ⟩` with uniform σ.
pub fn gen_iota<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<PureSample> {
    if n == 0 {
        return Err(Error::InvalidParam("degree must be positive".into()));
    }
    let sigma = random_permutation(n, rng);
    Ok(PureSample::new(
        SparseState::basis_state(0, sigma, 1)?,
        Provenance::Iota,
    ))
}

/// Applies `(−1)^{sgn}` to every amplitude. Since every π ∈ K_n is odd for
/// n ≡ 2 (mod 4), this swaps the ρπ+ and ρπ− draws and fixes ι draws up to
/// a global phase.
pub fn convert(sample: PureSample) -> PureSample {
    let provenance = match sample.provenance() {
        Provenance::Plus(pi) => Provenance::Minus(pi.clone()),
        Provenance::Minus(pi) => Provenance::Plus(pi.clone()),
        other => other.clone(),
    };
    PureSample::new(sample.state().phase_by_sign(), provenance)
}

/// State of the test circuit just before the control measurement.
fn controlled_test_state(state: &SparseState, pi: &Permutation) -> Result<SparseState> {
    check_key(pi)?;
    if state.degree() != pi.degree() {
        return Err(Error::DegreeMismatch {
            left: state.degree(),
            right: pi.degree(),
        });
    }
    Ok(state
        .attach_control(2)?
        .fourier_control(Direction::Forward)
        .controlled_power(pi)?
        .fourier_control(Direction::Forward))
}

/// Exact probability that the test answers YES on `state`.
pub fn yes_probability(state: &SparseState, pi: &Permutation) -> Result<f64> {
    Ok(controlled_test_state(state, pi)?.control_probabilities()[0])
}

/// Controlled-π test. `true` means YES (ρπ+), `false` means NO (ρπ−).
pub fn distinguish<R: Rng + ?Sized>(state: &SparseState, pi: &Permutation, rng: &mut R) -> Result<bool> {
    let (outcome, _) = controlled_test_state(state, pi)?.measure_control(rng);
    Ok(outcome == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{all_permutations, sample_fpf_involution};
    use crate::qstate::states_equal;
    use crate::seed::rng_from_seed;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn key(n: usize, seed: u64) -> Permutation {
        sample_fpf_involution(&SecurityParam::ff(n).unwrap(), &mut rng_from_seed(seed)).unwrap()
    }

    #[test]
    fn plus_draw_has_two_point_support() {
        let pi = key(6, 1);
        let mut rng = rng_from_seed(2);
        for _ in 0..50 {
            let s = gen_plus(&pi, &mut rng).unwrap();
            let support = s.state().support_perms();
            assert_eq!(support.len(), 2);
            let sigma = &support[0];
            let other = sigma.compose(&pi).unwrap();
            assert!(support.contains(&other));
            for perm in &support {
                let a = s.state().amplitude(0, perm);
                assert!((a.re - FRAC_1_SQRT_2).abs() < 1e-9 && a.im.abs() < 1e-9);
            }
            assert_eq!(s.provenance(), &Provenance::Plus(pi.clone()));
        }
    }

    #[test]
    fn generation_rejects_bad_keys() {
        let mut rng = rng_from_seed(0);
        let not_fpf = Permutation::from_cycles(6, &[&[1, 2], &[3, 4]]).unwrap();
        assert!(matches!(gen_plus(&not_fpf, &mut rng), Err(Error::NotInClass { .. })));
        let wrong_degree = Permutation::from_cycles(4, &[&[1, 2], &[3, 4]]).unwrap();
        assert!(matches!(gen_plus(&wrong_degree, &mut rng), Err(Error::InvalidParam(_))));
    }

    #[test]
    fn conversion_flips_relative_sign_and_is_an_involution() {
        let pi = key(10, 3);
        let mut rng = rng_from_seed(4);
        let plus = gen_plus(&pi, &mut rng).unwrap();
        let minus = convert(plus.clone());
        let amps: Vec<f64> = minus.state().entries().map(|(_, a)| a.re).collect();
        assert_eq!(amps.len(), 2);
        assert!(amps[0] * amps[1] < 0.0);
        assert_eq!(minus.provenance(), &Provenance::Minus(pi.clone()));
        let back = convert(minus);
        assert!(back.state().entries().eq(plus.state().entries()));

        let iota = gen_iota(10, &mut rng).unwrap();
        assert!(states_equal(convert(iota.clone()).state(), iota.state(), true));
        assert_eq!(convert(iota).provenance(), &Provenance::Iota);
    }

    #[test]
    fn trapdoor_is_exact_for_every_key_and_coset_at_small_degree() {
        // n = 2: every σ, every π; n = 6: every π ∈ K_6, sampled σ
        let mut rng = rng_from_seed(5);
        for (n, sigmas) in [(2usize, None), (6, Some(40usize))] {
            let keys: Vec<Permutation> = all_permutations(n).filter(|p| p.is_fpf_involution()).collect();
            for pi in &keys {
                let cosets: Vec<Permutation> = match sigmas {
                    None => all_permutations(n).collect(),
                    Some(k) => (0..k).map(|_| random_permutation(n, &mut rng)).collect(),
                };
                for sigma in &cosets {
                    let plus = generate_plus(pi, sigma).unwrap();
                    let minus = convert(plus.clone());
                    let p_yes = yes_probability(plus.state(), pi).unwrap();
                    let m_yes = yes_probability(minus.state(), pi).unwrap();
                    assert!(1.0 - p_yes < 1e-12 && m_yes < 1e-12);
                    assert!(distinguish(plus.state(), pi, &mut rng).unwrap());
                    assert!(!distinguish(minus.state(), pi, &mut rng).unwrap());
                }
            }
        }
    }

    #[test]
    fn iota_answers_yes_half_the_time() {
        let pi = key(6, 8);
        let mut rng = rng_from_seed(9);
        let iota = gen_iota(6, &mut rng).unwrap();
        assert_eq!(iota.state().support_size(), 1);
        assert!((yes_probability(iota.state(), &pi).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn distinguish_validates_inputs() {
        let pi = key(6, 1);
        let mut rng = rng_from_seed(1);
        let other = gen_iota(10, &mut rng).unwrap();
        assert!(distinguish(other.state(), &pi, &mut rng).is_err());
        let with_control = gen_iota(6, &mut rng).unwrap().state().attach_control(2).unwrap();
        assert!(distinguish(&with_control, &pi, &mut rng).is_err());
    }
}
