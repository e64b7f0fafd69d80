//! Weighted reduced words and Lusztig's parameter-transforming relations
//!
//! `s_i(a) s_j(b) s_i(c) = s_j(bc/(a+c)) s_i(a+c) s_j(ab/(a+c))` for adjacent
//! indices, and `s_i(a) s_j(b) = s_j(b) s_i(a)` for distant ones.

use std::collections::{HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::affine::{is_reduced, product_identity_words, word_to_perm, AffineWord, Glide};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Lusztig's braid move `(a, b, c) -> (bc/(a+c), a+c, ab/(a+c))`.
pub fn braid_move<S: Scalar>(a: &S, b: &S, c: &S) -> Result<(S, S, S)> {
    let e = a.clone() + c.clone();
    if e.is_zero() {
        return Err(Error::ZeroDenominator("braid move"));
    }
    let d = b.clone() * c.clone() / e.clone();
    let f = a.clone() * b.clone() / e.clone();
    Ok((d, e, f))
}

/// A single elementary move acting at a letter position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Move {
    /// `s_i s_j s_i -> s_j s_i s_j` on positions `p, p+1, p+2`.
    Braid(usize),
    /// `s_i s_j -> s_j s_i` on positions `p, p+1`.
    Commute(usize),
}

pub type MoveSequence = Vec<Move>;

fn adjacent(i: usize, j: usize, n: usize) -> bool {
    let d = (i + n - j) % n;
    d == 1 || d == n - 1
}

fn distant(i: usize, j: usize, n: usize) -> bool {
    i != j && !adjacent(i, j, n)
}

fn is_legal(letters: &[usize], n: usize, mv: Move) -> bool {
    match mv {
        Move::Braid(p) => {
            p + 2 < letters.len()
                && letters[p] == letters[p + 2]
                && adjacent(letters[p], letters[p + 1], n)
        }
        Move::Commute(p) => p + 1 < letters.len() && distant(letters[p], letters[p + 1], n),
    }
}

fn apply_to_letters(letters: &mut [usize], mv: Move) {
    match mv {
        Move::Braid(p) => {
            let (i, j) = (letters[p], letters[p + 1]);
            letters[p] = j;
            letters[p + 1] = i;
            letters[p + 2] = j;
        }
        Move::Commute(p) => letters.swap(p, p + 1),
    }
}

fn legal_moves(letters: &[usize], n: usize) -> Vec<Move> {
    let mut out = Vec::new();
    for p in 0..letters.len() {
        if is_legal(letters, n, Move::Braid(p)) {
            out.push(Move::Braid(p));
        }
        if is_legal(letters, n, Move::Commute(p)) {
            out.push(Move::Commute(p));
        }
    }
    out
}

/// Applies a move sequence to bare letters, checking each step.
pub fn apply_moves_to_word(w: &AffineWord, seq: &[Move]) -> Result<AffineWord> {
    let mut letters = w.letters().to_vec();
    for &mv in seq {
        if !is_legal(&letters, w.n(), mv) {
            return Err(Error::IllegalMove {
                mv,
                word: AffineWord::from_letters_unchecked(w.n(), letters).to_string(),
            });
        }
        apply_to_letters(&mut letters, mv);
    }
    Ok(AffineWord::from_letters_unchecked(w.n(), letters))
}

/// Transforms weights along a sequence already known to be legal.
pub fn apply_moves_to_weights<S: Scalar>(weights: &mut [S], seq: &[Move]) -> Result<()> {
    for &mv in seq {
        match mv {
            Move::Braid(p) => {
                let (d, e, f) = braid_move(&weights[p], &weights[p + 1], &weights[p + 2])?;
                weights[p] = d;
                weights[p + 1] = e;
                weights[p + 2] = f;
            }
            Move::Commute(p) => weights.swap(p, p + 1),
        }
    }
    Ok(())
}

/// Order in which BFS explores the neighbours of a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NeighborOrder {
    Ascending,
    Descending,
    Shuffled(u64),
}

/// Strategy for [`find_move_sequence_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MoveSearch {
    pub bidirectional: bool,
    pub order: NeighborOrder,
}

impl Default for MoveSearch {
    fn default() -> Self {
        MoveSearch { bidirectional: true, order: NeighborOrder::Ascending }
    }
}

/// Finds elementary moves carrying `src` to `dst` (equal reduced words).
pub fn find_move_sequence(src: &AffineWord, dst: &AffineWord) -> Result<MoveSequence> {
    find_move_sequence_with(src, dst, MoveSearch::default())
}

pub fn find_move_sequence_with(
    src: &AffineWord,
    dst: &AffineWord,
    search: MoveSearch,
) -> Result<MoveSequence> {
    if src.n() != dst.n() {
        return Err(Error::RankMismatch(src.n(), dst.n()));
    }
    for w in [src, dst] {
        if !is_reduced(w) {
            return Err(Error::NotReduced(w.to_string()));
        }
    }
    if word_to_perm(src) != word_to_perm(dst) {
        return Err(Error::NotSameElement(src.to_string(), dst.to_string()));
    }
    if src == dst {
        return Ok(Vec::new());
    }
    let mut bfs = Bfs::new(src.n(), search.order);
    let found = if search.bidirectional {
        bfs.bidirectional(src.letters(), dst.letters())
    } else {
        bfs.forward(src.letters(), dst.letters())
    };
    // Tits: reduced words of one element are connected by elementary moves.
    found.ok_or_else(|| Error::NotSameElement(src.to_string(), dst.to_string()))
}

type Parents = HashMap<Vec<usize>, Option<(Vec<usize>, Move)>>;

struct Bfs {
    n: usize,
    order: NeighborOrder,
    rng: Option<ChaCha8Rng>,
}

impl Bfs {
    fn new(n: usize, order: NeighborOrder) -> Self {
        let rng = match order {
            NeighborOrder::Shuffled(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        };
        Bfs { n, order, rng }
    }

    fn neighbors(&mut self, letters: &[usize]) -> Vec<(Vec<usize>, Move)> {
        let mut moves = legal_moves(letters, self.n);
        match self.order {
            NeighborOrder::Ascending => {}
            NeighborOrder::Descending => moves.reverse(),
            NeighborOrder::Shuffled(_) => {
                if let Some(rng) = self.rng.as_mut() {
                    moves.shuffle(rng);
                }
            }
        }
        moves
            .into_iter()
            .map(|mv| {
                let mut next = letters.to_vec();
                apply_to_letters(&mut next, mv);
                (next, mv)
            })
            .collect()
    }

    fn forward(&mut self, src: &[usize], dst: &[usize]) -> Option<MoveSequence> {
        let mut parents: Parents = HashMap::new();
        parents.insert(src.to_vec(), None);
        let mut queue = VecDeque::from([src.to_vec()]);
        while let Some(cur) = queue.pop_front() {
            for (next, mv) in self.neighbors(&cur) {
                if parents.contains_key(&next) {
                    continue;
                }
                parents.insert(next.clone(), Some((cur.clone(), mv)));
                if next == dst {
                    return Some(trace(&parents, dst));
                }
                queue.push_back(next);
            }
        }
        None
    }

    fn bidirectional(&mut self, src: &[usize], dst: &[usize]) -> Option<MoveSequence> {
        let mut fwd: Parents = HashMap::from([(src.to_vec(), None)]);
        let mut bwd: Parents = HashMap::from([(dst.to_vec(), None)]);
        let mut fwd_layer = vec![src.to_vec()];
        let mut bwd_layer = vec![dst.to_vec()];
        while !fwd_layer.is_empty() && !bwd_layer.is_empty() {
            let expand_forward = fwd_layer.len() <= bwd_layer.len();
            let (layer, own, other) = if expand_forward {
                (&mut fwd_layer, &mut fwd, &bwd)
            } else {
                (&mut bwd_layer, &mut bwd, &fwd)
            };
            let mut next_layer = Vec::new();
            let mut meeting = None;
            'layer: for cur in layer.drain(..) {
                for (next, mv) in self.neighbors(&cur) {
                    if own.contains_key(&next) {
                        continue;
                    }
                    own.insert(next.clone(), Some((cur.clone(), mv)));
                    if other.contains_key(&next) {
                        meeting = Some(next);
                        break 'layer;
                    }
                    next_layer.push(next);
                }
            }
            if let Some(mid) = meeting {
                let mut path = trace(&fwd, &mid);
                // Moves are involutions, so the backward path replays as is.
                let mut back = trace(&bwd, &mid);
                back.reverse();
                path.extend(back);
                return Some(path);
            }
            *layer = next_layer;
        }
        None
    }
}

fn trace(parents: &Parents, end: &[usize]) -> MoveSequence {
    let mut path = Vec::new();
    let mut cur = end.to_vec();
    while let Some(Some((prev, mv))) = parents.get(&cur) {
        path.push(*mv);
        cur = prev.clone();
    }
    path.reverse();
    path
}

/// Takes a random walk of legal moves from a reduced word.
pub fn random_move_walk<R: Rng>(w: &AffineWord, steps: usize, rng: &mut R) -> AffineWord {
    let mut letters = w.letters().to_vec();
    for _ in 0..steps {
        let moves = legal_moves(&letters, w.n());
        if let Some(&mv) = moves.choose(rng) {
            apply_to_letters(&mut letters, mv);
        }
    }
    AffineWord::from_letters_unchecked(w.n(), letters)
}

/// A reduced word whose generators carry strictly positive parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedWord<S: Scalar> {
    word: AffineWord,
    weights: Vec<S>,
}

impl<S: Scalar> WeightedWord<S> {
    pub fn new(word: AffineWord, weights: Vec<S>) -> Result<Self> {
        if weights.len() != word.len() {
            return Err(Error::LengthMismatch { expected: word.len(), found: weights.len() });
        }
        check_positive(&weights)?;
        Ok(WeightedWord { word, weights })
    }

    pub fn word(&self) -> &AffineWord {
        &self.word
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    pub fn into_weights(self) -> Vec<S> {
        self.weights
    }
}

pub(crate) fn check_positive<S: Scalar>(weights: &[S]) -> Result<()> {
    match weights.iter().position(|w| !w.is_positive_strict()) {
        Some(i) => Err(Error::NonPositiveWeight(i)),
        None => Ok(()),
    }
}

pub fn apply_moves<S: Scalar>(w: &WeightedWord<S>, seq: &[Move]) -> Result<WeightedWord<S>> {
    let word = apply_moves_to_word(&w.word, seq)?;
    let mut weights = w.weights.clone();
    apply_moves_to_weights(&mut weights, seq)?;
    Ok(WeightedWord { word, weights })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWeightedWord {
    n: usize,
    letters: Vec<usize>,
    weights: Vec<String>,
}

impl<S: Scalar> Serialize for WeightedWord<S> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        RawWeightedWord {
            n: self.word.n(),
            letters: self.word.letters().to_vec(),
            weights: self.weights.iter().map(Scalar::render).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for WeightedWord<S> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawWeightedWord::deserialize(deserializer)?;
        let word = AffineWord::new(raw.n, raw.letters).map_err(D::Error::custom)?;
        let weights = raw
            .weights
            .iter()
            .map(|s| S::parse(s))
            .collect::<Result<Vec<S>>>()
            .map_err(D::Error::custom)?;
        WeightedWord::new(word, weights).map_err(D::Error::custom)
    }
}

/// The carrier/state interaction `F_{v,u}` with its move sequence resolved
/// once, so repeated application is a fixed straight-line computation.
#[derive(Clone, Debug)]
pub struct Interaction {
    u: Glide,
    v: Glide,
    source: AffineWord,
    target: AffineWord,
    moves: MoveSequence,
}

impl Interaction {
    pub fn new(u: &Glide, v: &Glide) -> Result<Self> {
        Self::with_search(u, v, MoveSearch::default())
    }

    pub fn with_search(u: &Glide, v: &Glide, search: MoveSearch) -> Result<Self> {
        let (source, target) = product_identity_words(u, v)?;
        let moves = find_move_sequence_with(&source, &target, search)?;
        Ok(Interaction { u: u.clone(), v: v.clone(), source, target, moves })
    }

    pub fn u(&self) -> &Glide {
        &self.u
    }

    pub fn v(&self) -> &Glide {
        &self.v
    }

    /// The word `v·u`.
    pub fn source(&self) -> &AffineWord {
        &self.source
    }

    /// The word `rho^{k2}(u)·rho^{-k1}(v)`.
    pub fn target(&self) -> &AffineWord {
        &self.target
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    /// `F(z, y) = (y', z')`.
    pub fn apply<S: Scalar>(&self, z: &[S], y: &[S]) -> Result<(Vec<S>, Vec<S>)> {
        let (m, l) = (self.v.len(), self.u.len());
        if z.len() != m {
            return Err(Error::LengthMismatch { expected: m, found: z.len() });
        }
        if y.len() != l {
            return Err(Error::LengthMismatch { expected: l, found: y.len() });
        }
        let mut weights: Vec<S> = z.iter().chain(y).cloned().collect();
        check_positive(&weights)?;
        apply_moves_to_weights(&mut weights, &self.moves)?;
        let z_new = weights.split_off(l);
        Ok((weights, z_new))
    }
}

/// One-shot `F_{v,u}(z, y)`, returning `(y', z')`.
pub fn interaction<S: Scalar>(u: &Glide, v: &Glide, z: &[S], y: &[S]) -> Result<(Vec<S>, Vec<S>)> {
    Interaction::new(u, v)?.apply(z, y)
}
