//! Exact arithmetic on the symmetric group S_n.
//!
//! Points are numbered `1..=n` in every external format and in cycle
//! notation; internally a [`Permutation`] stores its 0-based image array.
//! Composition follows `(σ∘τ)(i) = σ(τ(i))`, so right-multiplying `σ` by `π`
//! is `sigma.compose(&pi)`.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    image: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "permutation degree must be positive");
        Permutation {
            image: (0..n as u32).collect(),
        }
    }

    /// Builds a permutation from 0-based images, rejecting non-bijections.
    pub fn from_zero_based(image: Vec<u32>) -> Result<Self> {
        let n = image.len();
        if n == 0 {
            return Err(Error::InvalidPermutation("degree must be positive".into()));
        }
        let mut seen = vec![false; n];
        for &x in &image {
            let x = x as usize;
            if x >= n {
                return Err(Error::InvalidPermutation(format!(
                    "image {} outside 1..={n}",
                    x + 1
                )));
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidPermutation(format!(
                    "image {} repeated",
                    x + 1
                )));
            }
        }
        Ok(Permutation { image })
    }

    /// Builds a permutation from 1-based images: `images[i-1]` is where `i` goes.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let zero = images
            .iter()
            .map(|&x| {
                if x == 0 {
                    Err(Error::InvalidPermutation("points are 1-based".into()))
                } else {
                    Ok((x - 1) as u32)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_zero_based(zero)
    }

    /// Builds a permutation of degree `n` from disjoint 1-based cycles.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPermutation("degree must be positive".into()));
        }
        let mut image: Vec<u32> = (0..n as u32).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (k, &p) in cycle.iter().enumerate() {
                if p == 0 || p > n {
                    return Err(Error::InvalidPermutation(format!(
                        "point {p} outside 1..={n}"
                    )));
                }
                if std::mem::replace(&mut touched[p - 1], true) {
                    return Err(Error::InvalidPermutation(format!(
                        "point {p} appears in two cycles"
                    )));
                }
                let next = cycle[(k + 1) % cycle.len()];
                image[p - 1] = (next - 1) as u32;
            }
        }
        Ok(Permutation { image })
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    /// 0-based image array.
    pub fn as_slice(&self) -> &[u32] {
        &self.image
    }

    /// Image of the 1-based point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.image[i - 1] as usize + 1
    }

    #[inline]
    pub(crate) fn at(&self, i: usize) -> usize {
        self.image[i] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    fn check_degree(&self, other: &Permutation) -> Result<()> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(())
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        self.check_degree(other)?;
        Ok(Permutation {
            image: other.image.iter().map(|&x| self.image[x as usize]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0u32; self.degree()];
        for (i, &x) in self.image.iter().enumerate() {
            image[x as usize] = i as u32;
        }
        Permutation { image }
    }

    /// `self^k` for `k ≥ 0`.
    pub fn pow(&self, k: u32) -> Permutation {
        let mut out = Permutation::identity(self.degree());
        for _ in 0..k {
            out = out.compose(self).expect("same degree");
        }
        out
    }

    /// `tau⁻¹ ∘ self ∘ tau`.
    pub fn conjugate(&self, tau: &Permutation) -> Result<Permutation> {
        tau.inverse().compose(self)?.compose(tau)
    }

    /// Cycles in 1-based notation, each starting at its smallest point,
    /// ordered by that point. Fixed points are included as 1-cycles.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p + 1);
                p = self.at(p);
            }
            out.push(cycle);
        }
        out
    }

    /// Parity bit: 0 for even permutations, 1 for odd ones.
    pub fn sign(&self) -> u8 {
        let cycles = self.cycles().len();
        ((self.degree() - cycles) % 2) as u8
    }

    pub fn has_fixed_point(&self) -> bool {
        self.image.iter().enumerate().any(|(i, &x)| i == x as usize)
    }

    /// Membership in K_n: fixed-point-free involutions.
    pub fn is_fpf_involution(&self) -> bool {
        !self.has_fixed_point() && self.image.iter().enumerate().all(|(i, &x)| self.at(x as usize) == i)
    }

    /// Membership in K_n^m: a product of `n/m` disjoint `m`-cycles.
    pub fn is_uniform_cycle_type(&self, m: usize) -> bool {
        m >= 2 && self.cycles().iter().all(|c| c.len() == m)
    }

    pub fn cycle_notation(&self) -> String {
        let moved: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if moved.is_empty() {
            return "()".to_string();
        }
        moved
            .iter()
            .map(|c| {
                let body: Vec<String> = c.iter().map(|p| p.to_string()).collect();
                format!("({})", body.join(" "))
            })
            .collect()
    }
}

pub fn compose(sigma: &Permutation, tau: &Permutation) -> Result<Permutation> {
    sigma.compose(tau)
}

pub fn inverse(sigma: &Permutation) -> Permutation {
    sigma.inverse()
}

pub fn sign(sigma: &Permutation) -> u8 {
    sigma.sign()
}

pub fn conjugate(pi: &Permutation, tau: &Permutation) -> Result<Permutation> {
    pi.conjugate(tau)
}

/// Text format `n: i1 i2 ... in` with 1-based images.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.degree())?;
        for &x in &self.image {
            write!(f, " {}", x + 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self.cycle_notation())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, body) = s
            .split_once(':')
            .ok_or_else(|| Error::parse("permutation", "missing ':' after degree"))?;
        let n: usize = head
            .trim()
            .parse()
            .map_err(|_| Error::parse("permutation", format!("bad degree {head:?}")))?;
        let images = body
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::parse("permutation", format!("bad image {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if images.len() != n {
            return Err(Error::parse(
                "permutation",
                format!("expected {n} images, found {}", images.len()),
            ));
        }
        Permutation::from_images(&images)
    }
}

/// Which hidden-permutation class a security parameter selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeyClass {
    /// K_n, with `n ≡ 2 (mod 4)`.
    Ff,
    /// K_n^m, with `m ≥ 2` dividing `n`.
    Cyc { m: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SecurityParam {
    n: usize,
    kind: KeyClass,
}

/// Whether `n` lies in `{2(2k+1)} = {2, 6, 10, ...}`.
pub fn in_ff_degrees(n: usize) -> bool {
    n % 4 == 2
}

impl SecurityParam {
    pub fn ff(n: usize) -> Result<Self> {
        if !in_ff_degrees(n) {
            return Err(Error::InvalidParam(format!(
                "degree {n} is not of the form 2(2k+1)"
            )));
        }
        Ok(SecurityParam {
            n,
            kind: KeyClass::Ff,
        })
    }

    pub fn cyc(n: usize, m: usize) -> Result<Self> {
        if m < 2 || n == 0 || !n.is_multiple_of(m) {
            return Err(Error::InvalidParam(format!(
                "cycle length {m} must be at least 2 and divide {n}"
            )));
        }
        Ok(SecurityParam {
            n,
            kind: KeyClass::Cyc { m },
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> KeyClass {
        self.kind
    }

    /// Control modulus used by this class (2 for K_n).
    pub fn modulus(&self) -> usize {
        match self.kind {
            KeyClass::Ff => 2,
            KeyClass::Cyc { m } => m,
        }
    }

    pub fn contains(&self, pi: &Permutation) -> bool {
        pi.degree() == self.n
            && match self.kind {
                KeyClass::Ff => pi.is_fpf_involution(),
                KeyClass::Cyc { m } => pi.is_uniform_cycle_type(m),
            }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        match self.kind {
            KeyClass::Ff => matching(self.n, rng),
            KeyClass::Cyc { m } => cut_shuffle(self.n, m, rng),
        }
    }
}

impl fmt::Display for SecurityParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            KeyClass::Ff => write!(f, "FF {}", self.n),
            KeyClass::Cyc { m } => write!(f, "CYC {} {}", self.n, m),
        }
    }
}

impl FromStr for SecurityParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        let num = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| Error::parse("mode", format!("bad integer {t:?}")))
        };
        match parts.as_slice() {
            ["FF", n] => SecurityParam::ff(num(n)?),
            ["CYC", n, m] => SecurityParam::cyc(num(n)?, num(m)?),
            _ => Err(Error::parse("mode", format!("expected `FF n` or `CYC n m`, got {s:?}"))),
        }
    }
}

/// Uniform element of K_n: match the smallest unmatched point with a
/// uniformly random other unmatched point until none remain.
pub fn sample_fpf_involution<R: Rng + ?Sized>(param: &SecurityParam, rng: &mut R) -> Result<Permutation> {
    match param.kind {
        KeyClass::Ff => Ok(matching(param.n, rng)),
        KeyClass::Cyc { .. } => Err(Error::InvalidParam("expected an FF parameter".into())),
    }
}

/// Uniform element of K_n^m: shuffle the points and cut them into `m`-cycles.
pub fn sample_cyclic<R: Rng + ?Sized>(param: &SecurityParam, rng: &mut R) -> Result<Permutation> {
    match param.kind {
        KeyClass::Cyc { m } => Ok(cut_shuffle(param.n, m, rng)),
        KeyClass::Ff => Err(Error::InvalidParam("expected a CYC parameter".into())),
    }
}

fn matching<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
    debug_assert!(n.is_multiple_of(2));
    let mut unmatched: Vec<u32> = (0..n as u32).collect();
    let mut image = vec![0u32; n];
    while !unmatched.is_empty() {
        let a = unmatched.remove(0);
        let k = rng.gen_range(0..unmatched.len());
        let b = unmatched.remove(k);
        image[a as usize] = b;
        image[b as usize] = a;
    }
    Permutation { image }
}

fn cut_shuffle<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Permutation {
    let mut points: Vec<u32> = (0..n as u32).collect();
    points.shuffle(rng);
    let mut image = vec![0u32; n];
    for block in points.chunks(m) {
        for (k, &p) in block.iter().enumerate() {
            image[p as usize] = block[(k + 1) % m];
        }
    }
    Permutation { image }
}

/// Uniformly random element of S_n.
pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
    let mut image: Vec<u32> = (0..n as u32).collect();
    image.shuffle(rng);
    Permutation { image }
}

/// All `n!` permutations of degree `n` in lexicographic order of image arrays.
pub fn all_permutations(n: usize) -> AllPermutations {
    AllPermutations {
        next: Some((0..n as u32).collect()),
    }
}

pub struct AllPermutations {
    next: Option<Vec<u32>>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        // standard next-permutation step
        if let Some(k) = (0..succ.len().saturating_sub(1)).rev().find(|&k| succ[k] < succ[k + 1]) {
            let l = (k + 1..succ.len()).rev().find(|&l| succ[k] < succ[l]).unwrap();
            succ.swap(k, l);
            succ[k + 1..].reverse();
            self.next = Some(succ);
        }
        Some(Permutation { image: current })
    }
}
