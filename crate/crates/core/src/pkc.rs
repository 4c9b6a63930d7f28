//! The single-bit and multi-bit public-key protocols.
//!
//! Bob's secret is a key permutation. The public key is a supply of coset
//! states: plus states for the bit scheme, a full series of cyclic states
//! (one per symbol) for the symbol scheme. A key copy is single-use, since a
//! physical state cannot be cloned.
//!
//! Files: a key file is the mode line (`FF n` or `CYC n m`) followed by the
//! permutation line; a ciphertext file is the mode line followed by a
//! `QSTATE` block.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::cyc::{decode_state, gen_cyc};
use crate::error::{Error, Result};
use crate::ff::{self, gen_plus};
use crate::perm::{KeyClass, Permutation, SecurityParam};
use crate::qstate::SparseState;
use crate::sample::{PureSample, TupleView};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyPair {
    secret: Permutation,
    params: SecurityParam,
}

impl KeyPair {
    pub fn new(secret: Permutation, params: SecurityParam) -> Result<Self> {
        if !params.contains(&secret) {
            return Err(Error::NotInClass {
                class: params.to_string(),
            });
        }
        Ok(KeyPair { secret, params })
    }

    pub fn secret(&self) -> &Permutation {
        &self.secret
    }

    pub fn params(&self) -> SecurityParam {
        self.params
    }

    pub fn to_text(&self) -> String {
        format!("{}\n{}\n", self.params, self.secret)
    }
}

impl FromStr for KeyPair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let params: SecurityParam = lines
            .next()
            .ok_or_else(|| Error::parse("key", "missing mode line"))?
            .parse()?;
        let secret: Permutation = lines
            .next()
            .ok_or_else(|| Error::parse("key", "missing permutation line"))?
            .parse()?;
        if let Some(extra) = lines.next() {
            return Err(Error::parse("key", format!("unexpected line {extra:?}")));
        }
        KeyPair::new(secret, params)
    }
}

pub fn keygen<R: Rng + ?Sized>(params: SecurityParam, rng: &mut R) -> KeyPair {
    KeyPair {
        secret: params.sample(rng),
        params,
    }
}

/// One copy of the public key. Encrypting consumes it.
#[derive(Clone, Debug)]
pub struct KeyCopy {
    mode: SecurityParam,
    symbol: Option<u32>,
    sample: Option<PureSample>,
}

impl KeyCopy {
    pub fn mode(&self) -> SecurityParam {
        self.mode
    }

    /// The symbol this copy encodes, for the multi-bit scheme.
    pub fn symbol(&self) -> Option<u32> {
        self.symbol
    }

    pub fn is_consumed(&self) -> bool {
        self.sample.is_none()
    }

    pub fn state(&self) -> Option<&SparseState> {
        self.sample.as_ref().map(PureSample::state)
    }

    fn take(&mut self) -> Result<PureSample> {
        self.sample.take().ok_or(Error::KeyCopyConsumed)
    }
}

/// A fresh key copy. The bit scheme ignores `symbol`; the symbol scheme
/// requires it.
pub fn issue_key_copy<R: Rng + ?Sized>(kp: &KeyPair, symbol: Option<u32>, rng: &mut R) -> Result<KeyCopy> {
    let (sample, symbol) = match kp.params.kind() {
        KeyClass::Ff => (gen_plus(&kp.secret, rng)?, None),
        KeyClass::Cyc { m } => {
            let s = symbol.ok_or_else(|| Error::InvalidParam("CYC key copies need a symbol".into()))?;
            if s >= m as u32 {
                return Err(Error::SymbolOutOfRange { s, m: m as u32 });
            }
            (gen_cyc(&kp.secret, s, rng)?.into(), Some(s))
        }
    };
    Ok(KeyCopy {
        mode: kp.params,
        symbol,
        sample: Some(sample),
    })
}

/// One copy per symbol, indexed by symbol.
#[derive(Clone, Debug)]
pub struct KeySeries {
    copies: Vec<KeyCopy>,
}

impl KeySeries {
    pub fn len(&self) -> usize {
        self.copies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.copies.is_empty()
    }

    pub fn copies(&self) -> &[KeyCopy] {
        &self.copies
    }
}

pub fn issue_key_series<R: Rng + ?Sized>(kp: &KeyPair, rng: &mut R) -> Result<KeySeries> {
    let KeyClass::Cyc { m } = kp.params.kind() else {
        return Err(Error::ModeMismatch {
            expected: "CYC".into(),
            found: kp.params.to_string(),
        });
    };
    let copies = (0..m as u32)
        .map(|s| issue_key_copy(kp, Some(s), rng))
        .collect::<Result<_>>()?;
    Ok(KeySeries { copies })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ciphertext {
    mode: SecurityParam,
    state: SparseState,
}

impl Ciphertext {
    pub fn mode(&self) -> SecurityParam {
        self.mode
    }

    pub fn state(&self) -> &SparseState {
        &self.state
    }

    pub fn to_text(&self) -> String {
        format!("{}\n{}", self.mode, self.state.to_text())
    }
}

impl FromStr for Ciphertext {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, rest) = s
            .split_once('\n')
            .ok_or_else(|| Error::parse("ciphertext", "missing mode line"))?;
        let mode: SecurityParam = head.trim().parse()?;
        let state: SparseState = rest.parse()?;
        if state.degree() != mode.n() || state.modulus() != 1 {
            return Err(Error::parse(
                "ciphertext",
                format!("state does not match mode {mode}"),
            ));
        }
        Ok(Ciphertext { mode, state })
    }
}

fn mode_name(mode: SecurityParam) -> &'static str {
    match mode.kind() {
        KeyClass::Ff => "FF",
        KeyClass::Cyc { .. } => "CYC",
    }
}

/// Bit 0 sends the key copy as is; bit 1 applies the sign conversion.
pub fn encrypt_ff(bit: bool, copy: &mut KeyCopy) -> Result<Ciphertext> {
    if copy.mode.kind() != KeyClass::Ff {
        return Err(Error::ModeMismatch {
            expected: "FF".into(),
            found: mode_name(copy.mode).into(),
        });
    }
    let sample = copy.take()?;
    let sample = if bit { ff::convert(sample) } else { sample };
    Ok(Ciphertext {
        mode: copy.mode,
        state: sample.into_state(),
    })
}

/// Sends the copy for symbol `s`; the rest of the series is discarded.
pub fn encrypt_cyc(s: u32, series: KeySeries) -> Result<Ciphertext> {
    let m = series.copies.len() as u32;
    if s >= m {
        return Err(Error::SymbolOutOfRange { s, m });
    }
    let mut copy = series.copies.into_iter().nth(s as usize).expect("in range");
    let mode = copy.mode;
    Ok(Ciphertext {
        mode,
        state: copy.take()?.into_state(),
    })
}

/// Recovers the bit (0 on a YES from the controlled-π test) or the symbol.
pub fn decrypt<R: Rng + ?Sized>(kp: &KeyPair, c: &Ciphertext, rng: &mut R) -> Result<u32> {
    if c.mode != kp.params {
        return Err(Error::ModeMismatch {
            expected: kp.params.to_string(),
            found: c.mode.to_string(),
        });
    }
    match kp.params.kind() {
        KeyClass::Ff => Ok(u32::from(!ff::distinguish(&c.state, &kp.secret, rng)?)),
        KeyClass::Cyc { .. } => decode_state(&c.state, &kp.secret, rng),
    }
}

/// What an eavesdropper holds: the ciphertext and `l` fresh key copies. In
/// the symbol scheme each copy is a full series.
#[derive(Clone, Debug)]
pub struct AdversaryView {
    states: Vec<SparseState>,
}

impl AdversaryView {
    pub fn ciphertext(&self) -> &SparseState {
        &self.states[0]
    }

    pub fn key_states(&self) -> &[SparseState] {
        &self.states[1..]
    }

    /// Ciphertext first, then the key states.
    pub fn tuple(&self) -> TupleView<'_> {
        TupleView::from_states(&self.states)
    }
}

pub fn adversary_view<R: Rng + ?Sized>(
    kp: &KeyPair,
    c: &Ciphertext,
    l: usize,
    rng: &mut R,
) -> Result<AdversaryView> {
    let mut states = vec![c.state.clone()];
    for _ in 0..l {
        match kp.params.kind() {
            KeyClass::Ff => states.push(gen_plus(&kp.secret, rng)?.into_state()),
            KeyClass::Cyc { m } => {
                for s in 0..m as u32 {
                    states.push(gen_cyc(&kp.secret, s, rng)?.into_state());
                }
            }
        }
    }
    Ok(AdversaryView { states })
}

impl fmt::Display for AdversaryView {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.states {
            f.write_str(&s.to_text())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distinguisher::{BasisMeasure, Distinguisher, Omniscient};
    use crate::qstate::states_equal;
    use crate::seed::rng_from_seed;

    #[test]
    fn keygen_classes() {
        let mut rng = rng_from_seed(1);
        let kp = keygen(SecurityParam::ff(2).unwrap(), &mut rng);
        assert_eq!(kp.secret(), &Permutation::from_cycles(2, &[&[1, 2]]).unwrap());
        assert!(keygen(SecurityParam::ff(6).unwrap(), &mut rng).secret().is_fpf_involution());
        let cyc = keygen(SecurityParam::cyc(6, 3).unwrap(), &mut rng);
        assert!(cyc.secret().cycles().iter().all(|c| c.len() == 3));
    }

    #[test]
    fn bit_roundtrips() {
        let mut rng = rng_from_seed(2);
        for n in [2, 6, 10] {
            for _ in 0..100 {
                let kp = keygen(SecurityParam::ff(n).unwrap(), &mut rng);
                let bit = rng.gen::<bool>();
                let mut copy = issue_key_copy(&kp, None, &mut rng).unwrap();
                let c = encrypt_ff(bit, &mut copy).unwrap();
                assert_eq!(decrypt(&kp, &c, &mut rng).unwrap(), u32::from(bit));
            }
        }
    }

    #[test]
    fn encryption_is_the_identity_or_one_sign_flip() {
        let mut rng = rng_from_seed(3);
        let kp = keygen(SecurityParam::ff(6).unwrap(), &mut rng);
        let copy = issue_key_copy(&kp, None, &mut rng).unwrap();
        let original = copy.state().unwrap().clone();
        let c0 = encrypt_ff(false, &mut copy.clone()).unwrap();
        assert_eq!(c0.state(), &original);
        let c1 = encrypt_ff(true, &mut copy.clone()).unwrap();
        let flips = original
            .entries()
            .zip(c1.state().entries())
            .filter(|((_, a), (_, b))| (*a + *b).norm() < 1e-12)
            .count();
        assert_eq!(flips, 1);
    }

    #[test]
    fn key_copies_are_single_use() {
        let mut rng = rng_from_seed(4);
        let kp = keygen(SecurityParam::ff(6).unwrap(), &mut rng);
        let mut copy = issue_key_copy(&kp, None, &mut rng).unwrap();
        encrypt_ff(true, &mut copy).unwrap();
        assert!(copy.is_consumed());
        assert_eq!(encrypt_ff(false, &mut copy).unwrap_err(), Error::KeyCopyConsumed);
    }

    #[test]
    fn copies_are_independent_draws() {
        let mut rng = rng_from_seed(5);
        let kp = keygen(SecurityParam::ff(10).unwrap(), &mut rng);
        let a = issue_key_copy(&kp, None, &mut rng).unwrap();
        let b = issue_key_copy(&kp, None, &mut rng).unwrap();
        assert_ne!(a.state().unwrap().support_perms(), b.state().unwrap().support_perms());
    }

    #[test]
    fn symbol_roundtrips_and_selection() {
        let mut rng = rng_from_seed(6);
        for (n, m) in [(6, 3), (8, 4), (12, 6)] {
            let kp = keygen(SecurityParam::cyc(n, m).unwrap(), &mut rng);
            for s in 0..m as u32 {
                let series = issue_key_series(&kp, &mut rng).unwrap();
                let chosen = series.copies()[s as usize].state().unwrap().clone();
                let c = encrypt_cyc(s, series).unwrap();
                assert_eq!(c.state(), &chosen);
                assert_eq!(decrypt(&kp, &c, &mut rng).unwrap(), s);
            }
        }
        let kp = keygen(SecurityParam::cyc(6, 3).unwrap(), &mut rng);
        let series = issue_key_series(&kp, &mut rng).unwrap();
        assert_eq!(encrypt_cyc(3, series).unwrap_err(), Error::SymbolOutOfRange { s: 3, m: 3 });
        assert!(issue_key_copy(&kp, Some(5), &mut rng).is_err());
        assert!(issue_key_copy(&kp, None, &mut rng).is_err());
    }

    #[test]
    fn modulus_two_ciphertexts_match_bit_ciphertexts() {
        let mut rng = rng_from_seed(7);
        let pi = keygen(SecurityParam::ff(6).unwrap(), &mut rng).secret().clone();
        let sigma = crate::perm::random_permutation(6, &mut rng);
        let plus = ff::generate_plus(&pi, &sigma).unwrap();
        for bit in [false, true] {
            let mut copy = KeyCopy {
                mode: SecurityParam::ff(6).unwrap(),
                symbol: None,
                sample: Some(plus.clone()),
            };
            let c = encrypt_ff(bit, &mut copy).unwrap();
            let cyc = crate::cyc::cyc_state(&pi, u32::from(bit), &sigma).unwrap();
            assert!(states_equal(c.state(), cyc.state(), true));
        }
    }

    #[test]
    fn wrong_key_is_not_reliable() {
        let mut rng = rng_from_seed(8);
        let params = SecurityParam::ff(6).unwrap();
        let kp = keygen(params, &mut rng);
        let wrong = loop {
            let other = keygen(params, &mut rng);
            if other.secret() != kp.secret() {
                break other;
            }
        };
        let mut correct = 0;
        for _ in 0..200 {
            let bit = rng.gen::<bool>();
            let mut copy = issue_key_copy(&kp, None, &mut rng).unwrap();
            let c = encrypt_ff(bit, &mut copy).unwrap();
            correct += u32::from(decrypt(&wrong, &c, &mut rng).unwrap() == u32::from(bit));
        }
        assert!(correct < 200);
    }

    #[test]
    fn mode_mismatch_and_files() {
        let mut rng = rng_from_seed(9);
        let ff_kp = keygen(SecurityParam::ff(6).unwrap(), &mut rng);
        let cyc_kp = keygen(SecurityParam::cyc(6, 3).unwrap(), &mut rng);
        let mut copy = issue_key_copy(&ff_kp, None, &mut rng).unwrap();
        let c = encrypt_ff(true, &mut copy).unwrap();
        assert!(matches!(decrypt(&cyc_kp, &c, &mut rng), Err(Error::ModeMismatch { .. })));

        assert_eq!(ff_kp.to_text().parse::<KeyPair>().unwrap(), ff_kp);
        assert_eq!(cyc_kp.to_text().parse::<KeyPair>().unwrap(), cyc_kp);
        let back: Ciphertext = c.to_text().parse().unwrap();
        assert_eq!(back, c);
        assert!("FF 6\n6: 1 2 3 4 5 6\n".parse::<KeyPair>().is_err());
    }

    #[test]
    fn adversary_views() {
        let mut rng = rng_from_seed(10);
        let kp = keygen(SecurityParam::ff(6).unwrap(), &mut rng);
        let mut copy = issue_key_copy(&kp, None, &mut rng).unwrap();
        let c = encrypt_ff(false, &mut copy).unwrap();
        let view = adversary_view(&kp, &c, 0, &mut rng).unwrap();
        assert_eq!(view.tuple().len(), 1);
        let view = adversary_view(&kp, &c, 3, &mut rng).unwrap();
        assert_eq!(view.key_states().len(), 3);
        let omni = Omniscient::new(kp.secret().clone());
        assert!(omni.decide(view.tuple(), &mut rng).unwrap());
        assert!(BasisMeasure.decide(view.tuple(), &mut rng).is_ok());
        let cyc = keygen(SecurityParam::cyc(6, 3).unwrap(), &mut rng);
        let c = encrypt_cyc(1, issue_key_series(&cyc, &mut rng).unwrap()).unwrap();
        assert_eq!(adversary_view(&cyc, &c, 2, &mut rng).unwrap().key_states().len(), 6);
    }
}
