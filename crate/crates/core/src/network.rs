//! Cylindric wiring diagrams, chamber labels and the wire ansatz.
//!
//! Positions run `1..=n` from bottom to top and are extended to all of `Z`
//! on the universal cover. The letter `s_i` crosses the wires in positions
//! `p` and `p + 1` with `p ≡ i (mod n)`; for `s_0` these are `n` and `n + 1`.
//! Wires carry integer labels on the cover, fixed so that at the cut the
//! wire in position `p` is labeled `p`. The wire labeled `x` is wire
//! `((x - 1) mod n) + 1` of the cylinder.
//!
//! At a crossing, the *upper* wire runs from top-left to bottom-right. The
//! chamber between positions `p` and `p + 1` is labeled by the set of wires
//! below it, `S`, and `[S]_c = ceil(max{x in S : x ≡ c} / n)`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::affine::{is_reduced, word_to_perm, AffinePermutation, AffineWord, Glide};
use crate::error::{Error, Result};
use crate::lusztig::Interaction;
use crate::scalar::{max_rel_diff, Scalar};

/// An integer vector `[S]` labeling a chamber of the universal cover.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChamberLabel(pub Vec<i64>);

/// Trajectories are label differences; compare them with [`ChamberLabel::eq_mod_ones`].
pub type Trajectory = ChamberLabel;

impl ChamberLabel {
    pub fn zero(n: usize) -> Self {
        ChamberLabel(vec![0; n])
    }

    /// The unit vector `e_c` for a wire `c` in `1..=n`.
    pub fn unit(n: usize, c: usize) -> Self {
        let mut v = vec![0; n];
        v[c - 1] = 1;
        ChamberLabel(v)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn plus(&self, other: &ChamberLabel) -> ChamberLabel {
        ChamberLabel(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn minus(&self, other: &ChamberLabel) -> ChamberLabel {
        ChamberLabel(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scaled(&self, k: i64) -> ChamberLabel {
        ChamberLabel(self.0.iter().map(|a| a * k).collect())
    }

    /// Adds `k (1, ..., 1)`.
    pub fn shift_ones(&self, k: i64) -> ChamberLabel {
        ChamberLabel(self.0.iter().map(|a| a + k).collect())
    }

    /// Adds `e_c` for wire `c` in `1..=n`.
    pub fn plus_unit(&self, c: usize) -> ChamberLabel {
        let mut v = self.0.clone();
        v[c - 1] += 1;
        ChamberLabel(v)
    }

    pub fn eq_mod_ones(&self, other: &ChamberLabel) -> bool {
        if self.n() != other.n() {
            return false;
        }
        let d = self.minus(other);
        d.0.iter().all(|&x| x == d.0[0])
    }

    /// Representative with last entry zero.
    pub fn normalized(&self) -> ChamberLabel {
        let last = *self.0.last().unwrap_or(&0);
        self.shift_ones(-last)
    }

    pub fn max_abs(&self) -> i64 {
        self.0.iter().map(|a| a.abs()).max().unwrap_or(0)
    }
}

impl fmt::Display for ChamberLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn wire_class(x: i64, n: usize) -> usize {
    (x - 1).rem_euclid(n as i64) as usize + 1
}

/// A subset of `Z` of the form `(Z_{<= a} ∪ added) \ removed`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NiceSet {
    n: usize,
    threshold: i64,
    added: BTreeSet<i64>,
    removed: BTreeSet<i64>,
}

impl NiceSet {
    pub fn new(
        n: usize,
        threshold: i64,
        added: impl IntoIterator<Item = i64>,
        removed: impl IntoIterator<Item = i64>,
    ) -> Result<Self> {
        if n < 3 {
            return Err(Error::RankTooSmall(n));
        }
        let added = added.into_iter().filter(|&b| b > threshold).collect();
        let removed = removed.into_iter().filter(|&b| b <= threshold).collect();
        let set = NiceSet { n, threshold, added, removed };
        set.validate()?;
        Ok(set)
    }

    pub fn lower(n: usize, a: i64) -> Result<Self> {
        Self::new(n, a, [], [])
    }

    pub fn contains(&self, b: i64) -> bool {
        (b <= self.threshold || self.added.contains(&b)) && !self.removed.contains(&b)
    }

    fn validate(&self) -> Result<()> {
        let n = self.n as i64;
        for &b in &self.added {
            if !self.contains(b - n) {
                return Err(Error::NotNice(format!("{b} is present but {} is not", b - n)));
            }
        }
        for &r in &self.removed {
            if self.contains(r + n) {
                return Err(Error::NotNice(format!("{} is present but {r} is not", r + n)));
            }
        }
        Ok(())
    }

    /// The `a` for which the set is `a`-nice.
    pub fn level(&self) -> i64 {
        let above = self.added.iter().filter(|&&b| b > 0).count() as i64
            + if self.threshold > 0 { self.threshold } else { 0 }
            - self.removed.iter().filter(|&&b| b > 0).count() as i64;
        let missing = self.removed.iter().filter(|&&b| b <= 0).count() as i64
            + if self.threshold < 0 { -self.threshold } else { 0 }
            - self.added.iter().filter(|&&b| b <= 0).count() as i64;
        above - missing
    }

    /// Translate every element by `k n`.
    pub fn shifted(&self, k: i64) -> NiceSet {
        let d = k * self.n as i64;
        NiceSet {
            n: self.n,
            threshold: self.threshold + d,
            added: self.added.iter().map(|b| b + d).collect(),
            removed: self.removed.iter().map(|b| b + d).collect(),
        }
    }
}

pub fn chamber_label(s: &NiceSet) -> ChamberLabel {
    let n = s.n as i64;
    let top = s.added.iter().copied().max().unwrap_or(s.threshold).max(s.threshold);
    let mut label = vec![None; s.n];
    let mut b = top;
    while label.iter().any(Option::is_none) {
        if s.contains(b) {
            let c = wire_class(b, s.n);
            if label[c - 1].is_none() {
                label[c - 1] = Some(Integer::div_ceil(&b, &n));
            }
        }
        b -= 1;
    }
    ChamberLabel(label.into_iter().map(Option::unwrap).collect())
}

/// A crossing of two wires in a wiring diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    /// Letter index in the word.
    pub index: usize,
    pub letter: usize,
    /// Lower of the two positions involved, in `1..=n`.
    pub position: usize,
    /// Cover label of the wire entering from below.
    pub lower: i64,
    /// Cover label of the wire entering from above.
    pub upper: i64,
    pub lower_wire: usize,
    pub upper_wire: usize,
    /// Label of the chamber directly below the crossing.
    pub base_label: ChamberLabel,
}

/// Wiring diagram of a reduced word with a cut.
#[derive(Clone, Debug, Serialize)]
pub struct WiringDiagram {
    word: AffineWord,
    cut: usize,
    #[serde(skip)]
    configs: Vec<AffinePermutation>,
    crossings: Vec<Crossing>,
}

pub fn build_diagram(word: &AffineWord, cut: usize) -> Result<WiringDiagram> {
    if !is_reduced(word) {
        return Err(Error::NotReduced(word.to_string()));
    }
    if cut > word.len() {
        return Err(Error::LengthMismatch { expected: word.len(), found: cut });
    }
    let n = word.n();
    let mut prefixes = Vec::with_capacity(word.len() + 1);
    let mut acc = AffinePermutation::identity(n);
    prefixes.push(acc.clone());
    for &l in word.letters() {
        acc = acc.compose(&AffinePermutation::generator(l, n));
        prefixes.push(acc.clone());
    }
    let renumber = prefixes[cut].inverse();
    let configs: Vec<AffinePermutation> = prefixes.iter().map(|p| renumber.compose(p)).collect();
    let crossings = word
        .letters()
        .iter()
        .enumerate()
        .map(|(h, &letter)| {
            let position = if letter == 0 { n } else { letter };
            let cfg = &configs[h];
            let lower = cfg.apply(position as i64);
            let upper = cfg.apply(position as i64 + 1);
            Crossing {
                index: h,
                letter,
                position,
                lower,
                upper,
                lower_wire: wire_class(lower, n),
                upper_wire: wire_class(upper, n),
                base_label: config_label(cfg, position as i64 - 1),
            }
        })
        .collect();
    Ok(WiringDiagram { word: word.clone(), cut, configs, crossings })
}

fn config_label(cfg: &AffinePermutation, level: i64) -> ChamberLabel {
    let n = cfg.n();
    let ni = n as i64;
    let mut label = vec![0; n];
    for r in level - ni + 1..=level {
        let x = cfg.apply(r);
        label[wire_class(x, n) - 1] = Integer::div_ceil(&x, &ni);
    }
    ChamberLabel(label)
}

impl WiringDiagram {
    pub fn n(&self) -> usize {
        self.word.n()
    }

    pub fn word(&self) -> &AffineWord {
        &self.word
    }

    pub fn cut(&self) -> usize {
        self.cut
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    /// Cover label of the wire in `position` at `gap` (`0..=len`).
    pub fn wire_at(&self, gap: usize, position: i64) -> i64 {
        self.configs[gap].apply(position)
    }

    /// Label of the chamber between positions `level` and `level + 1` at `gap`.
    pub fn label(&self, gap: usize, level: i64) -> ChamberLabel {
        config_label(&self.configs[gap], level)
    }

    /// The set of wires below the chamber at (`gap`, `level`).
    pub fn nice_set(&self, gap: usize, level: i64) -> NiceSet {
        let n = self.n();
        let ni = n as i64;
        // The topmost wire of each class below the chamber.
        let mut tops = vec![0i64; n];
        for r in level - ni + 1..=level {
            let x = self.wire_at(gap, r);
            tops[wire_class(x, n) - 1] = x;
        }
        let lo = tops.iter().copied().min().unwrap_or(level).min(level) + 1;
        let hi = tops.iter().copied().max().unwrap_or(level).max(level);
        let inside = |b: i64| b <= tops[wire_class(b, n) - 1];
        let added: Vec<i64> = (level + 1..=hi).filter(|&b| inside(b)).collect();
        let removed: Vec<i64> = (lo..=level).filter(|&b| !inside(b)).collect();
        NiceSet::new(n, level, added, removed).expect("diagram chambers are nice")
    }

    /// Labels of the four chambers around a crossing, as
    /// `(below, left, right, above)`.
    pub fn crossing_labels(&self, h: usize) -> [ChamberLabel; 4] {
        let c = &self.crossings[h];
        let s = c.base_label.clone();
        [
            s.clone(),
            s.plus_unit(c.lower_wire),
            s.plus_unit(c.upper_wire),
            s.plus_unit(c.lower_wire).plus_unit(c.upper_wire),
        ]
    }

    /// Unordered cylinder wire pairs crossing among letters `range`.
    pub fn crossing_pairs(&self, range: std::ops::Range<usize>) -> HashSet<(usize, usize)> {
        self.crossings[range]
            .iter()
            .map(|c| {
                let (a, b) = (c.lower_wire, c.upper_wire);
                (a.min(b), a.max(b))
            })
            .collect()
    }

    /// The wire-ansatz crossing parameters `alpha_upper - alpha_lower`.
    pub fn ansatz_weights<S: Scalar>(&self, alpha: &[S]) -> Result<Vec<S>> {
        if alpha.len() != self.n() {
            return Err(Error::LengthMismatch { expected: self.n(), found: alpha.len() });
        }
        self.crossings
            .iter()
            .map(|c| {
                let a = alpha[c.upper_wire - 1].clone() - alpha[c.lower_wire - 1].clone();
                if a.is_positive_strict() {
                    Ok(a)
                } else {
                    Err(Error::PositivityViolation {
                        lower: c.lower_wire,
                        upper: c.upper_wire,
                        value: a.to_f64(),
                    })
                }
            })
            .collect()
    }
}

/// Labels of all faces, one row per gap and levels `1..=n`; other levels
/// follow by adding multiples of `(1, ..., 1)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FaceLabels {
    n: usize,
    rows: Vec<Vec<ChamberLabel>>,
}

impl FaceLabels {
    pub fn gaps(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, gap: usize, level: i64) -> ChamberLabel {
        let n = self.n as i64;
        let r = (level - 1).rem_euclid(n);
        let k = (level - 1 - r) / n;
        self.rows[gap][r as usize].shift_ones(k)
    }
}

pub fn face_labels(d: &WiringDiagram) -> FaceLabels {
    let n = d.n();
    let rows = (0..=d.word.len())
        .map(|g| (1..=n as i64).map(|level| d.label(g, level)).collect())
        .collect();
    FaceLabels { n, rows }
}

/// `t(u)`: change of the label between wires 1 and 2 across `|u`.
pub fn trajectory(u: &Glide) -> Trajectory {
    let d = build_diagram(u.word(), 0).expect("glides are reduced");
    let n = u.n();
    let left = d.label(0, 1);
    let last = u.len();
    let q = (1..=n as i64)
        .find(|&q| wire_class(d.wire_at(last, q), n) == 1)
        .expect("every wire has a position");
    debug_assert_eq!(wire_class(d.wire_at(last, q + 1), n), 2);
    d.label(last, q).minus(&left)
}

/// The wire-ansatz vacuum and initial carrier for `v|u`, returned as
/// `(w, z)` and checked to be a fixed point of the interaction.
pub fn wire_ansatz<S: Scalar>(u: &Glide, v: &Glide, alpha: &[S]) -> Result<(Vec<S>, Vec<S>)> {
    let word = v.word().concat(u.word())?;
    let d = build_diagram(&word, v.len())?;
    let mut z = d.ansatz_weights(alpha)?;
    let w = z.split_off(v.len());
    let (w2, z2) = Interaction::new(u, v)?.apply(&z, &w)?;
    let ok = if S::is_exact() {
        w2 == w && z2 == z
    } else {
        max_rel_diff(&w2, &w) <= 1e-12 && max_rel_diff(&z2, &z) <= 1e-12
    };
    if !ok {
        return Err(Error::NotSameElement(
            format!("F(z, w) for {}", v.word()),
            format!("(w, z) for {}", u.word()),
        ));
    }
    Ok((w, z))
}

/// Integer wire weights making every crossing of `word` (cut at `cut`)
/// positive, read off from the chamber of the trajectory.
pub fn positive_weights_for(word: &AffineWord, cut: usize) -> Result<Vec<i64>> {
    let glide = Glide::new(word.clone())?;
    let n = word.n();
    let t = trajectory(&glide);
    let mut order: Vec<usize> = (1..=n).collect();
    order.sort_by(|&a, &b| t.0[b - 1].cmp(&t.0[a - 1]).then(a.cmp(&b)));
    let mut alpha_left = vec![0i64; n];
    for (i, &wire) in order.iter().enumerate() {
        alpha_left[wire - 1] = (n - i) as i64;
    }
    let at_cut = word_to_perm(&word.prefix(cut));
    let alpha: Vec<i64> =
        (1..=n as i64).map(|p| alpha_left[wire_class(at_cut.apply(p), n) - 1]).collect();
    let d = build_diagram(word, cut)?;
    d.ansatz_weights(&alpha.iter().map(|&a| a as f64).collect::<Vec<f64>>())?;
    Ok(alpha)
}

/// `i t(u) - m t(rho^{-k2}(v))`.
pub fn label_shift(i: i64, m: i64, u: &Glide, v: &Glide) -> ChamberLabel {
    let v_tilde = v.rotate(-(v.offset() as i64));
    trajectory(u).scaled(i).minus(&trajectory(&v_tilde).scaled(m))
}
