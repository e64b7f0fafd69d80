//! Words and windowed permutations for the affine symmetric group.
//!
//! An element acts on `Z` by the rule `s_i(a) = a + 1` when `a ≡ i`,
//! `s_i(a) = a - 1` when `a ≡ i + 1` and `s_i(a) = a` otherwise (mod `n`).
//! A word `s_{i_1} ... s_{i_k}` is realized as the composition
//! `s_{i_1} ∘ ... ∘ s_{i_k}`, stored by its window `(w(1), ..., w(n))`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A word in the generators `s_0, ..., s_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawWord", into = "RawWord")]
pub struct AffineWord {
    n: usize,
    letters: Vec<usize>,
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWord {
    n: usize,
    letters: Vec<usize>,
}

impl TryFrom<RawWord> for AffineWord {
    type Error = Error;

    fn try_from(raw: RawWord) -> Result<Self> {
        AffineWord::new(raw.n, raw.letters)
    }
}

impl From<AffineWord> for RawWord {
    fn from(w: AffineWord) -> Self {
        RawWord { n: w.n, letters: w.letters }
    }
}

impl AffineWord {
    pub fn new(n: usize, letters: Vec<usize>) -> Result<Self> {
        if n < 3 {
            return Err(Error::RankTooSmall(n));
        }
        if let Some(&letter) = letters.iter().find(|&&l| l >= n) {
            return Err(Error::LetterOutOfRange { letter, n });
        }
        Ok(AffineWord { n, letters })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Concatenation `self · other`.
    pub fn concat(&self, other: &AffineWord) -> Result<AffineWord> {
        if self.n != other.n {
            return Err(Error::RankMismatch(self.n, other.n));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(AffineWord { n: self.n, letters })
    }

    pub fn prefix(&self, len: usize) -> AffineWord {
        AffineWord { n: self.n, letters: self.letters[..len].to_vec() }
    }

    pub fn suffix(&self, start: usize) -> AffineWord {
        AffineWord { n: self.n, letters: self.letters[start..].to_vec() }
    }

    pub fn reversed(&self) -> AffineWord {
        let mut letters = self.letters.clone();
        letters.reverse();
        AffineWord { n: self.n, letters }
    }

    pub(crate) fn from_letters_unchecked(n: usize, letters: Vec<usize>) -> AffineWord {
        AffineWord { n, letters }
    }
}

impl fmt::Display for AffineWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for l in &self.letters {
            write!(f, "s{l}")?;
        }
        Ok(())
    }
}

/// An affine permutation in window notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffinePermutation {
    window: Vec<i64>,
}

impl AffinePermutation {
    pub fn identity(n: usize) -> Self {
        AffinePermutation { window: (1..=n as i64).collect() }
    }

    pub fn from_window(window: Vec<i64>) -> Result<Self> {
        let n = window.len();
        if n < 3 {
            return Err(Error::RankTooSmall(n));
        }
        let ni = n as i64;
        let mut seen = vec![false; n];
        for &v in &window {
            let r = v.rem_euclid(ni) as usize;
            if seen[r] {
                return Err(Error::InvalidWindow(format!("{window:?} repeats a residue")));
            }
            seen[r] = true;
        }
        let sum: i64 = window.iter().sum();
        if sum != ni * (ni + 1) / 2 {
            return Err(Error::InvalidWindow(format!("{window:?} has sum {sum}")));
        }
        Ok(AffinePermutation { window })
    }

    /// The generator `s_i` of rank `n`.
    pub fn generator(i: usize, n: usize) -> Self {
        let window = (1..=n as i64).map(|a| apply_generator(i, n, a)).collect();
        AffinePermutation { window }
    }

    pub fn n(&self) -> usize {
        self.window.len()
    }

    pub fn window(&self) -> &[i64] {
        &self.window
    }

    /// Evaluates the permutation at an arbitrary integer.
    pub fn apply(&self, a: i64) -> i64 {
        let n = self.window.len() as i64;
        let r = (a - 1).rem_euclid(n);
        let k = (a - 1 - r) / n;
        self.window[r as usize] + k * n
    }

    /// Composition `self ∘ other`.
    pub fn compose(&self, other: &AffinePermutation) -> AffinePermutation {
        let window = other.window.iter().map(|&a| self.apply(a)).collect();
        AffinePermutation { window }
    }

    pub fn inverse(&self) -> AffinePermutation {
        let n = self.window.len() as i64;
        let mut inv = vec![0i64; self.window.len()];
        for (j, &v) in self.window.iter().enumerate() {
            let r = (v - 1).rem_euclid(n);
            // w(j) = v  =>  w^{-1}(r + 1) = j + 1 - (v - r - 1)
            inv[r as usize] = (j as i64 + 1) - (v - r - 1);
        }
        AffinePermutation { window: inv }
    }

    /// Conjugate by the diagram rotation: the element represented by
    /// `rho_shift(w, t)` whenever `self` is represented by `w`.
    pub fn rho_conjugate(&self, t: i64) -> AffinePermutation {
        let n = self.window.len() as i64;
        let window = (1..=n).map(|a| self.apply(a - t) + t).collect();
        AffinePermutation { window }
    }

    /// Image under the projection to the finite symmetric group, as a map
    /// `j -> phi(j)` on `{1, ..., n}`.
    pub fn finite_part(&self) -> Vec<usize> {
        let n = self.window.len() as i64;
        self.window.iter().map(|&v| ((v - 1).rem_euclid(n) + 1) as usize).collect()
    }

    pub fn length(&self) -> usize {
        inversion_coords(self).total()
    }
}

fn apply_generator(i: usize, n: usize, a: i64) -> i64 {
    let ni = n as i64;
    let r = a.rem_euclid(ni);
    let i = i as i64;
    if r == i {
        a + 1
    } else if r == (i + 1) % ni {
        a - 1
    } else {
        a
    }
}

pub fn word_to_perm(w: &AffineWord) -> AffinePermutation {
    let n = w.n();
    // w = s_{i_1} ∘ ... ∘ s_{i_k}: evaluate from the right.
    let window = (1..=n as i64)
        .map(|a| w.letters().iter().rev().fold(a, |x, &l| apply_generator(l, n, x)))
        .collect();
    AffinePermutation { window }
}

pub fn coxeter_length(p: &AffinePermutation) -> usize {
    p.length()
}

pub fn is_reduced(w: &AffineWord) -> bool {
    coxeter_length(&word_to_perm(w)) == w.len()
}

pub fn rho_shift(w: &AffineWord, t: i64) -> AffineWord {
    let n = w.n() as i64;
    let letters = w.letters().iter().map(|&l| (l as i64 + t).rem_euclid(n) as usize).collect();
    AffineWord::from_letters_unchecked(w.n(), letters)
}

/// Offset `k` when the element projects to the rotation `j -> j + k`.
pub fn glide_offset(w: &AffineWord) -> Option<usize> {
    perm_glide_offset(&word_to_perm(w))
}

pub fn perm_glide_offset(p: &AffinePermutation) -> Option<usize> {
    let n = p.n();
    let phi = p.finite_part();
    let k = (phi[0] + n - 1) % n;
    phi.iter()
        .enumerate()
        .all(|(j, &image)| image == (j + k) % n + 1)
        .then_some(k)
}

/// A reduced word whose element projects to a cyclic rotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "AffineWord", into = "AffineWord")]
pub struct Glide {
    word: AffineWord,
    offset: usize,
}

impl TryFrom<AffineWord> for Glide {
    type Error = Error;

    fn try_from(word: AffineWord) -> Result<Self> {
        Glide::new(word)
    }
}

impl From<Glide> for AffineWord {
    fn from(g: Glide) -> Self {
        g.word
    }
}

impl Glide {
    pub fn new(word: AffineWord) -> Result<Self> {
        let perm = word_to_perm(&word);
        if perm.length() != word.len() {
            return Err(Error::NotReduced(word.to_string()));
        }
        let offset = perm_glide_offset(&perm).ok_or_else(|| Error::NotGlide(word.to_string()))?;
        Ok(Glide { word, offset })
    }

    pub fn from_letters(n: usize, letters: &[usize]) -> Result<Self> {
        Self::new(AffineWord::new(n, letters.to_vec())?)
    }

    pub fn word(&self) -> &AffineWord {
        &self.word
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn n(&self) -> usize {
        self.word.n()
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// Rotation of the glide by `t`; rotations preserve glides and offsets.
    pub fn rotate(&self, t: i64) -> Glide {
        Glide { word: rho_shift(&self.word, t), offset: self.offset }
    }
}

/// The two words `v·u` and `rho^{k2}(u)·rho^{-k1}(v)` of the commutation
/// identity for glides `u` (offset `k1`) and `v` (offset `k2`).
pub fn product_identity_words(u: &Glide, v: &Glide) -> Result<(AffineWord, AffineWord)> {
    let vu = v.word().concat(u.word())?;
    if !is_reduced(&vu) {
        return Err(Error::NotReduced(vu.to_string()));
    }
    let k1 = u.offset() as i64;
    let k2 = v.offset() as i64;
    let rhs = rho_shift(u.word(), k2).concat(&rho_shift(v.word(), -k1))?;
    debug_assert_eq!(word_to_perm(&vu), word_to_perm(&rhs));
    Ok((vu, rhs))
}

/// Signed inversion counts `m_ij`, one per pair `i < j`.
///
/// For the wiring diagram of a reduced word with wires numbered at its left
/// end, `|m_ij|` counts crossings of wires `i` and `j`, and `m_ij > 0` exactly
/// when wire `j` passes over wire `i` from above.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InversionCoords {
    n: usize,
    m: Vec<i64>,
}

impl InversionCoords {
    fn index(n: usize, i: usize, j: usize) -> usize {
        debug_assert!(1 <= i && i < j && j <= n);
        let (i, j) = (i - 1, j - 1);
        i * (2 * n - i - 1) / 2 + (j - i - 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `m_ij` for `1 <= i < j <= n`.
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.m[Self::index(self.n, i, j)]
    }

    pub fn total(&self) -> usize {
        self.m.iter().map(|v| v.unsigned_abs() as usize).sum()
    }

    /// Pairs `(i, j, m_ij)` in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        let n = self.n;
        (1..=n).flat_map(move |i| (i + 1..=n).map(move |j| (i, j, self.get(i, j))))
    }

    /// Inclusion of the corresponding inversion sets.
    pub fn contained_in(&self, other: &InversionCoords) -> bool {
        self.n == other.n
            && self.m.iter().zip(&other.m).all(|(&a, &b)| {
                a == 0 || (a.signum() == b.signum() && a.abs() <= b.abs())
            })
    }
}

pub fn inversion_coords(p: &AffinePermutation) -> InversionCoords {
    let n = p.n();
    let ni = n as i64;
    let inv = p.inverse();
    let w = inv.window();
    let mut m = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            m.push(-(w[j] - w[i]).div_euclid(ni));
        }
    }
    InversionCoords { n, m }
}

/// Weak order: some reduced word for `w2` starts with a reduced word for `w1`.
pub fn weak_order_leq(w1: &AffinePermutation, w2: &AffinePermutation) -> bool {
    inversion_coords(w1).contained_in(&inversion_coords(w2))
}
