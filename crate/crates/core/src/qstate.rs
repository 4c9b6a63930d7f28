//! Sparse amplitude vectors over a control register `Z_m` and a
//! permutation register `S_n`.
//!
//! A [`SparseState`] stores only the basis vectors `|r⟩|σ⟩` with non-negligible
//! amplitude. All operations are unitary maps that permute or mix a bounded
//! number of basis vectors, so the support never grows beyond
//! `m · (number of permutations touched)`. `m = 1` means there is no control
//! register.
//!
//! States are values: every operation returns a new state.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Amplitude-wise equality tolerance.
pub const EQ_TOL: f64 = 1e-9;
/// Amplitudes below this magnitude are dropped.
pub const PRUNE_TOL: f64 = 1e-12;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BasisVector {
    pub control: u32,
    pub perm: Permutation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `|r⟩ ↦ m^{-1/2} Σ ω^{r r'} |r'⟩`
    Forward,
    /// `|r⟩ ↦ m^{-1/2} Σ ω^{-r r'} |r'⟩`
    Inverse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// `PartialEq` is exact, amplitude for amplitude; use [`SparseState::approx_eq`]
/// for tolerance-based comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseState {
    n: usize,
    m: u32,
    amps: BTreeMap<BasisVector, Complex64>,
}

/// `ω_m^k` with the exponent reduced mod `m` before evaluation.
pub(crate) fn root_of_unity(m: u32, k: i64) -> Complex64 {
    let k = k.rem_euclid(m as i64);
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64)
}

impl SparseState {
    /// `|control⟩|sigma⟩` with modulus `m`.
    pub fn basis_state(control: u32, sigma: Permutation, m: u32) -> Result<Self> {
        if m == 0 || control >= m {
            return Err(Error::ControlOutOfRange { control, m });
        }
        let n = sigma.degree();
        let mut amps = BTreeMap::new();
        amps.insert(BasisVector { control, perm: sigma }, Complex64::new(1.0, 0.0));
        Ok(SparseState { n, m, amps })
    }

    /// Builds a state from explicit amplitudes. Repeated basis vectors are
    /// summed, tiny amplitudes pruned, and the result must have unit norm.
    pub fn from_entries<I>(n: usize, m: u32, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, Permutation, Complex64)>,
    {
        let mut amps: BTreeMap<BasisVector, Complex64> = BTreeMap::new();
        for (control, perm, amp) in entries {
            if control >= m {
                return Err(Error::ControlOutOfRange { control, m });
            }
            if perm.degree() != n {
                return Err(Error::DegreeMismatch {
                    left: n,
                    right: perm.degree(),
                });
            }
            *amps.entry(BasisVector { control, perm }).or_default() += amp;
        }
        let state = SparseState { n, m, amps }.pruned();
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > EQ_TOL {
            return Err(Error::NotNormalised(norm));
        }
        Ok(state)
    }

    fn pruned(mut self) -> Self {
        self.amps.retain(|_, a| a.norm() >= PRUNE_TOL);
        self
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u32 {
        self.m
    }

    pub fn support_size(&self) -> usize {
        self.amps.len()
    }

    /// Basis vectors and amplitudes in ascending `(control, perm)` order.
    pub fn entries(&self) -> impl Iterator<Item = (&BasisVector, &Complex64)> {
        self.amps.iter()
    }

    pub fn amplitude(&self, control: u32, perm: &Permutation) -> Complex64 {
        self.amps
            .get(&BasisVector {
                control,
                perm: perm.clone(),
            })
            .copied()
            .unwrap_or_default()
    }

    /// Distinct permutations in the support, ascending.
    pub fn support_perms(&self) -> Vec<Permutation> {
        let mut v: Vec<Permutation> = self.amps.keys().map(|b| b.perm.clone()).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &SparseState) -> Complex64 {
        self.amps
            .iter()
            .filter_map(|(k, a)| other.amps.get(k).map(|b| a.conj() * b))
            .sum()
    }

    fn check_degree(&self, p: &Permutation) -> Result<()> {
        if p.degree() != self.n {
            return Err(Error::DegreeMismatch {
                left: self.n,
                right: p.degree(),
            });
        }
        Ok(())
    }

    fn map_basis<F>(&self, mut f: F) -> SparseState
    where
        F: FnMut(&BasisVector) -> BasisVector,
    {
        let amps = self.amps.iter().map(|(k, a)| (f(k), *a)).collect::<BTreeMap<_, _>>();
        debug_assert_eq!(amps.len(), self.amps.len(), "basis map must be injective");
        SparseState {
            n: self.n,
            m: self.m,
            amps,
        }
    }

    /// Tensors a fresh control register `|0⟩` of modulus `m` onto a
    /// control-free state.
    pub fn attach_control(&self, m: u32) -> Result<SparseState> {
        if self.m != 1 {
            return Err(Error::ModulusMismatch {
                expected: 1,
                found: self.m,
            });
        }
        if m == 0 {
            return Err(Error::ControlOutOfRange { control: 0, m });
        }
        let mut out = self.map_basis(|b| b.clone());
        out.m = m;
        Ok(out)
    }

    /// Drops the control register, which must be exactly `|0⟩`.
    pub fn discard_control(&self) -> Result<SparseState> {
        if self.amps.keys().any(|b| b.control != 0) {
            return Err(Error::ControlEntangled);
        }
        let mut out = self.clone();
        out.m = 1;
        Ok(out)
    }

    /// Discrete Fourier transform on the control register.
    pub fn fourier_control(&self, direction: Direction) -> SparseState {
        let m = self.m;
        let mut by_perm: BTreeMap<&Permutation, Vec<Complex64>> = BTreeMap::new();
        for (b, a) in &self.amps {
            by_perm
                .entry(&b.perm)
                .or_insert_with(|| vec![Complex64::default(); m as usize])[b.control as usize] += a;
        }
        let sign: i64 = match direction {
            Direction::Forward => 1,
            Direction::Inverse => -1,
        };
        let scale = 1.0 / (m as f64).sqrt();
        let mut amps = BTreeMap::new();
        for (perm, column) in by_perm {
            for out_r in 0..m {
                let mut acc = Complex64::default();
                for (r, a) in column.iter().enumerate() {
                    if *a != Complex64::default() {
                        acc += a * root_of_unity(m, sign * r as i64 * out_r as i64);
                    }
                }
                amps.insert(
                    BasisVector {
                        control: out_r,
                        perm: perm.clone(),
                    },
                    acc * scale,
                );
            }
        }
        SparseState { n: self.n, m, amps }.pruned()
    }

    /// `|r⟩|σ⟩ ↦ |r⟩|σπ^r⟩`.
    pub fn controlled_power(&self, pi: &Permutation) -> Result<SparseState> {
        self.check_degree(pi)?;
        let powers: Vec<Permutation> = (0..self.m).map(|r| pi.pow(r)).collect();
        Ok(self.map_basis(|b| BasisVector {
            control: b.control,
            perm: b.perm.compose(&powers[b.control as usize]).expect("degree checked"),
        }))
    }

    /// `|r⟩|σ⟩ ↦ |r − [σ = target] mod m⟩|σ⟩`.
    pub fn controlled_decrement(&self, target: &Permutation) -> Result<SparseState> {
        self.check_degree(target)?;
        let m = self.m;
        Ok(self.map_basis(|b| BasisVector {
            control: if &b.perm == target {
                (b.control + m - 1) % m
            } else {
                b.control
            },
            perm: b.perm.clone(),
        }))
    }

    /// Multiplies each amplitude by `(−1)^{sgn(σ)}`.
    pub fn phase_by_sign(&self) -> SparseState {
        let mut out = self.clone();
        for (b, a) in out.amps.iter_mut() {
            if b.perm.sign() == 1 {
                *a = -*a;
            }
        }
        out
    }

    /// Left: `σ ↦ τσ`; right: `σ ↦ στ`.
    pub fn translate(&self, tau: &Permutation, side: Side) -> Result<SparseState> {
        self.check_degree(tau)?;
        Ok(self.map_basis(|b| BasisVector {
            control: b.control,
            perm: match side {
                Side::Left => tau.compose(&b.perm),
                Side::Right => b.perm.compose(tau),
            }
            .expect("degree checked"),
        }))
    }

    /// Born probabilities of each control value.
    pub fn control_probabilities(&self) -> Vec<f64> {
        let mut p = vec![0.0; self.m as usize];
        for (b, a) in &self.amps {
            p[b.control as usize] += a.norm_sqr();
        }
        p
    }

    /// Measures the control register and renormalises the post-measurement state.
    pub fn measure_control<R: Rng + ?Sized>(&self, rng: &mut R) -> (u32, SparseState) {
        let probs = self.control_probabilities();
        let outcome = sample_index(&probs, rng) as u32;
        let scale = 1.0 / probs[outcome as usize].sqrt();
        let amps = self
            .amps
            .iter()
            .filter(|(b, _)| b.control == outcome)
            .map(|(b, a)| (b.clone(), a * scale))
            .collect();
        (
            outcome,
            SparseState {
                n: self.n,
                m: self.m,
                amps,
            },
        )
    }

    /// Full computational-basis measurement.
    pub fn measure_full<R: Rng + ?Sized>(&self, rng: &mut R) -> (u32, Permutation) {
        let probs: Vec<f64> = self.amps.values().map(|a| a.norm_sqr()).collect();
        let k = sample_index(&probs, rng);
        let b = self.amps.keys().nth(k).expect("index within support");
        (b.control, b.perm.clone())
    }

    /// Amplitude-wise comparison within [`EQ_TOL`], optionally after the
    /// global phase that best aligns `self` with `other`.
    pub fn approx_eq(&self, other: &SparseState, up_to_global_phase: bool) -> bool {
        if self.n != other.n || self.m != other.m {
            return false;
        }
        let phase = if up_to_global_phase {
            let ov = self.inner(other);
            if ov.norm() < EQ_TOL {
                return false;
            }
            ov / ov.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let close = |k: &BasisVector| {
            let a = self.amps.get(k).copied().unwrap_or_default() * phase;
            let b = other.amps.get(k).copied().unwrap_or_default();
            (a - b).norm() <= EQ_TOL
        };
        self.amps.keys().all(close) && other.amps.keys().all(close)
    }

    /// Text serialisation: a `QSTATE n m entries` header, then one
    /// `control re im n: i1 ... in` line per basis vector.
    pub fn to_text(&self) -> String {
        let mut out = format!("QSTATE {} {} {}\n", self.n, self.m, self.amps.len());
        for (b, a) in &self.amps {
            writeln!(out, "{} {:.16e} {:.16e} {}", b.control, a.re, a.im, b.perm).unwrap();
        }
        out
    }
}

pub fn states_equal(a: &SparseState, b: &SparseState, up_to_global_phase: bool) -> bool {
    a.approx_eq(b, up_to_global_phase)
}

fn sample_index<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    let mut u = rng.gen::<f64>() * total;
    let mut last = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        last = i;
        if u < w {
            return i;
        }
        u -= w;
    }
    last
}

impl FromStr for SparseState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::parse("qstate", "empty input"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let (n, m, count) = match fields.as_slice() {
            ["QSTATE", n, m, c] => {
                let num = |t: &str| {
                    t.parse::<usize>()
                        .map_err(|_| Error::parse("qstate", format!("bad header field {t:?}")))
                };
                (num(n)?, num(m)? as u32, num(c)?)
            }
            _ => return Err(Error::parse("qstate", format!("bad header {header:?}"))),
        };
        if m == 0 {
            return Err(Error::parse("qstate", "modulus must be positive"));
        }
        let mut amps = BTreeMap::new();
        for line in lines.by_ref().take(count) {
            let mut parts = line.splitn(4, ' ');
            let mut next = |name: &str| {
                parts
                    .next()
                    .ok_or_else(|| Error::parse("qstate", format!("missing {name} in {line:?}")))
            };
            let control: u32 = next("control")?
                .parse()
                .map_err(|_| Error::parse("qstate", format!("bad control in {line:?}")))?;
            let re: f64 = next("re")?
                .parse()
                .map_err(|_| Error::parse("qstate", format!("bad real part in {line:?}")))?;
            let im: f64 = next("im")?
                .parse()
                .map_err(|_| Error::parse("qstate", format!("bad imaginary part in {line:?}")))?;
            let perm: Permutation = next("permutation")?.parse()?;
            if control >= m {
                return Err(Error::ControlOutOfRange { control, m });
            }
            if perm.degree() != n {
                return Err(Error::DegreeMismatch {
                    left: n,
                    right: perm.degree(),
                });
            }
            let amp = Complex64::new(re, im);
            if amp.norm() < PRUNE_TOL {
                return Err(Error::parse("qstate", format!("negligible amplitude in {line:?}")));
            }
            if amps.insert(BasisVector { control, perm }, amp).is_some() {
                return Err(Error::parse("qstate", format!("duplicate basis vector in {line:?}")));
            }
        }
        if amps.len() != count {
            return Err(Error::parse(
                "qstate",
                format!("header announces {count} entries, found {}", amps.len()),
            ));
        }
        if lines.next().is_some() {
            return Err(Error::parse("qstate", "trailing content after entries"));
        }
        let state = SparseState { n, m, amps };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > EQ_TOL {
            return Err(Error::NotNormalised(norm));
        }
        Ok(state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::random_permutation;
    use crate::seed::rng_from_seed;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn p(n: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(n, cycles).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn two_point(sigma: &Permutation, pi: &Permutation, sign: f64) -> SparseState {
        SparseState::from_entries(
            sigma.degree(),
            1,
            [
                (0, sigma.clone(), c(FRAC_1_SQRT_2, 0.0)),
                (0, sigma.compose(pi).unwrap(), c(sign * FRAC_1_SQRT_2, 0.0)),
            ],
        )
        .unwrap()
    }

    fn random_state(seed: u64, n: usize, m: u32, support: usize) -> SparseState {
        let mut rng = rng_from_seed(seed);
        let raw: Vec<(u32, Permutation, Complex64)> = (0..support)
            .map(|_| {
                (
                    rng.gen_range(0..m),
                    random_permutation(n, &mut rng),
                    c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
                )
            })
            .collect();
        let norm: f64 = {
            let mut acc: BTreeMap<(u32, Permutation), Complex64> = BTreeMap::new();
            for (r, s, a) in &raw {
                *acc.entry((*r, s.clone())).or_default() += a;
            }
            acc.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
        };
        SparseState::from_entries(n, m, raw.into_iter().map(|(r, s, a)| (r, s, a / norm))).unwrap()
    }

    #[test]
    fn basis_state_is_a_unit_vector() {
        let s = SparseState::basis_state(0, Permutation::identity(4), 2).unwrap();
        assert_eq!(s.support_size(), 1);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
        let mut rng = rng_from_seed(1);
        for _ in 0..20 {
            assert_eq!(s.measure_full(&mut rng), (0, Permutation::identity(4)));
        }
        assert_eq!(
            SparseState::basis_state(2, Permutation::identity(3), 2).unwrap_err(),
            Error::ControlOutOfRange { control: 2, m: 2 }
        );
    }

    #[test]
    fn hadamard_on_zero_control() {
        let id = Permutation::identity(3);
        let s = SparseState::basis_state(0, id.clone(), 2).unwrap();
        let h = s.fourier_control(Direction::Forward);
        assert!((h.amplitude(0, &id) - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-12);
        assert!((h.amplitude(1, &id) - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-12);
        let hi = s.fourier_control(Direction::Inverse);
        assert!(h.approx_eq(&hi, false));
    }

    #[test]
    fn dft_row_for_m3() {
        // F_3|1⟩ = (1, ω, ω²)/√3 with ω = e^{2πi/3} = (-1/2, √3/2)
        let id = Permutation::identity(3);
        let s = SparseState::basis_state(1, id.clone(), 3).unwrap();
        let f = s.fourier_control(Direction::Forward);
        let r3 = 3f64.sqrt();
        let expected = [c(1.0, 0.0), c(-0.5, r3 / 2.0), c(-0.5, -r3 / 2.0)];
        for (k, e) in expected.iter().enumerate() {
            assert!((f.amplitude(k as u32, &id) - e / r3).norm() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn controlled_power_examples() {
        let sigma = p(4, &[&[1, 3]]);
        let pi = p(4, &[&[1, 2], &[3, 4]]);
        let s = SparseState::basis_state(0, sigma.clone(), 2).unwrap();
        assert!(s.controlled_power(&pi).unwrap().approx_eq(&s, false));

        let h = s.fourier_control(Direction::Forward);
        let twice = h.controlled_power(&pi).unwrap().controlled_power(&pi).unwrap();
        assert!(twice.approx_eq(&h, false));

        let c3 = p(3, &[&[1, 2, 3]]);
        let s = SparseState::basis_state(2, Permutation::identity(3), 3).unwrap();
        let out = s.controlled_power(&c3).unwrap();
        assert!((out.amplitude(2, &p(3, &[&[1, 3, 2]])) - c(1.0, 0.0)).norm() < 1e-15);
        assert!(s.controlled_power(&Permutation::identity(4)).is_err());
    }

    #[test]
    fn sign_phase_examples() {
        let id = Permutation::identity(6);
        let s = SparseState::basis_state(0, id.clone(), 1).unwrap();
        assert!(s.phase_by_sign().approx_eq(&s, false));

        let sigma = p(6, &[&[1, 2, 3]]);
        let pi = p(6, &[&[1, 2], &[3, 4], &[5, 6]]);
        let plus = two_point(&sigma, &pi, 1.0);
        let minus = two_point(&sigma, &pi, -1.0);
        assert!(plus.phase_by_sign().approx_eq(&minus, false));
        let back = plus.phase_by_sign().phase_by_sign();
        assert!(back.entries().zip(plus.entries()).all(|(a, b)| a == b));
    }

    #[test]
    fn right_translation_conjugates_the_hidden_permutation() {
        let mut rng = rng_from_seed(4);
        let sigma = random_permutation(6, &mut rng);
        let tau = random_permutation(6, &mut rng);
        let pi = p(6, &[&[1, 4], &[2, 5], &[3, 6]]);
        let state = two_point(&sigma, &pi, 1.0);
        let moved = state.translate(&tau, Side::Right).unwrap();
        let st = sigma.compose(&tau).unwrap();
        let expected = two_point(&st, &pi.conjugate(&tau).unwrap(), 1.0);
        assert!(moved.approx_eq(&expected, false));
        assert!(state.translate(&Permutation::identity(6), Side::Left).unwrap().approx_eq(&state, false));
        let there = state.translate(&tau, Side::Left).unwrap();
        let back = there.translate(&tau.inverse(), Side::Left).unwrap();
        assert!(back.approx_eq(&state, false));
    }

    #[test]
    fn measure_control_is_deterministic_on_eigen_branch() {
        let sigma = p(6, &[&[2, 3]]);
        let pi = p(6, &[&[1, 2], &[3, 4], &[5, 6]]);
        let s = two_point(&sigma, &pi, 1.0).attach_control(2).unwrap();
        let mut rng = rng_from_seed(9);
        for _ in 0..50 {
            let (r, post) = s.measure_control(&mut rng);
            assert_eq!(r, 0);
            assert!(post.approx_eq(&s, false));
        }
    }

    #[test]
    fn measure_control_uniform_qubit_frequency() {
        let s = SparseState::basis_state(0, Permutation::identity(2), 2)
            .unwrap()
            .fourier_control(Direction::Forward);
        let probs = s.control_probabilities();
        assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        let mut rng = rng_from_seed(2);
        let trials = 4000;
        let zeros = (0..trials).filter(|_| s.measure_control(&mut rng).0 == 0).count();
        let freq = zeros as f64 / trials as f64;
        let ci = crate::stats::hoeffding_halfwidth(trials as u64, 0.01);
        assert!((freq - 0.5).abs() <= ci, "freq {freq}");
    }

    #[test]
    fn measure_full_on_two_point_states_ignores_phase() {
        let sigma = p(6, &[&[1, 5]]);
        let pi = p(6, &[&[1, 2], &[3, 4], &[5, 6]]);
        let plus = two_point(&sigma, &pi, 1.0);
        let minus = two_point(&sigma, &pi, -1.0);
        let trials = 4000;
        let ci = crate::stats::hoeffding_halfwidth(trials, 0.01);
        for state in [&plus, &minus] {
            let mut rng = rng_from_seed(77);
            let hits = (0..trials)
                .filter(|_| state.measure_full(&mut rng).1 == sigma)
                .count();
            assert!((hits as f64 / trials as f64 - 0.5).abs() <= ci);
        }
    }

    #[test]
    fn equality_modes() {
        let sigma = p(4, &[&[1, 2, 3]]);
        let pi = p(4, &[&[1, 2], &[3, 4]]);
        let plus = two_point(&sigma, &pi, 1.0);
        let minus = two_point(&sigma, &pi, -1.0);
        assert!(states_equal(&plus, &plus, false));
        let negated = SparseState::from_entries(4, 1, plus.entries().map(|(b, a)| (b.control, b.perm.clone(), -a))).unwrap();
        assert!(!states_equal(&plus, &negated, false));
        assert!(states_equal(&plus, &negated, true));
        assert!(!states_equal(&plus, &minus, false));
        assert!(!states_equal(&plus, &minus, true));
    }

    #[test]
    fn from_entries_validation() {
        let id = Permutation::identity(3);
        assert!(matches!(
            SparseState::from_entries(3, 1, [(0, id.clone(), c(0.5, 0.0))]),
            Err(Error::NotNormalised(_))
        ));
        assert!(SparseState::from_entries(3, 2, [(2, id.clone(), c(1.0, 0.0))]).is_err());
        assert!(SparseState::from_entries(4, 1, [(0, id, c(1.0, 0.0))]).is_err());
    }

    #[test]
    fn attach_and_discard_control() {
        let s = SparseState::basis_state(0, p(3, &[&[1, 2]]), 1).unwrap();
        let with = s.attach_control(3).unwrap();
        assert_eq!(with.modulus(), 3);
        assert!(with.attach_control(2).is_err());
        assert!(with.discard_control().unwrap().approx_eq(&s, false));
        let spread = with.fourier_control(Direction::Forward);
        assert_eq!(spread.discard_control().unwrap_err(), Error::ControlEntangled);
    }

    #[test]
    fn serialisation_roundtrip_is_bit_faithful() {
        let s = random_state(5, 6, 3, 7).fourier_control(Direction::Forward);
        let text = s.to_text();
        let back: SparseState = text.parse().unwrap();
        assert_eq!(back.to_text(), text);
        for ((ka, va), (kb, vb)) in s.entries().zip(back.entries()) {
            assert_eq!(ka, kb);
            assert_eq!(va.re.to_bits(), vb.re.to_bits());
            assert_eq!(va.im.to_bits(), vb.im.to_bits());
        }
        assert!(text.starts_with("QSTATE 6 3 "));
    }

    #[test]
    fn parser_rejects_malformed_input() {
        let good = SparseState::basis_state(1, p(3, &[&[1, 2]]), 2).unwrap().to_text();
        assert!(good.parse::<SparseState>().is_ok());
        assert!(good.replace("QSTATE 3 2 1", "QSTATE 3 2 2").parse::<SparseState>().is_err());
        assert!(good.replace("QSTATE 3 2 1", "QSTATE 3 1 1").parse::<SparseState>().is_err());
        assert!(good.replace("1.0000000000000000e0 ", "5.0000000000000000e-1 ").parse::<SparseState>().is_err());
        assert!("QSTATE 3".parse::<SparseState>().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn every_operation_is_norm_preserving_and_invertible(
                seed in any::<u64>(), m in 1u32..6, support in 1usize..6,
            ) {
                let s = random_state(seed, 5, m, support);
                let mut rng = rng_from_seed(seed ^ 0xabc);
                let pi = random_permutation(5, &mut rng);
                let tau = random_permutation(5, &mut rng);

                let f = s.fourier_control(Direction::Forward);
                prop_assert!((f.norm_sqr() - 1.0).abs() < 1e-9);
                prop_assert!(f.fourier_control(Direction::Inverse).approx_eq(&s, false));
                prop_assert!(f.support_size() <= m as usize * s.support_size());

                let c = s.controlled_power(&pi).unwrap();
                prop_assert!((c.norm_sqr() - 1.0).abs() < 1e-9);
                prop_assert!(c.controlled_power(&pi.inverse()).unwrap().approx_eq(&s, false));

                let d = s.controlled_decrement(&pi).unwrap();
                prop_assert!((d.norm_sqr() - 1.0).abs() < 1e-9);
                let mut back = d.clone();
                for _ in 1..m { back = back.controlled_decrement(&pi).unwrap(); }
                prop_assert!(back.approx_eq(&s, false));

                let ph = s.phase_by_sign();
                prop_assert!((ph.norm_sqr() - 1.0).abs() < 1e-9);
                prop_assert!(ph.phase_by_sign().approx_eq(&s, false));

                for side in [Side::Left, Side::Right] {
                    let t = s.translate(&tau, side).unwrap();
                    prop_assert!((t.norm_sqr() - 1.0).abs() < 1e-9);
                    prop_assert!(t.translate(&tau.inverse(), side).unwrap().approx_eq(&s, false));
                }
            }
        }
    }
}
