#![allow(dead_code)]

use affine_dkdv::affine::{is_reduced, AffineWord, Glide};
use affine_dkdv::lusztig::random_move_walk;
use affine_dkdv::scalar::rat;
use affine_dkdv::Rational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn glide(n: usize, letters: &[usize]) -> Glide {
    Glide::from_letters(n, letters).unwrap()
}

pub fn word(n: usize, letters: &[usize]) -> AffineWord {
    AffineWord::new(n, letters.to_vec()).unwrap()
}

pub fn rats(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rat(x, 1)).collect()
}

pub fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(1..60), rng.gen_range(1..25))
}

pub fn random_rationals(rng: &mut ChaCha8Rng, count: usize) -> Vec<Rational> {
    (0..count).map(|_| random_rational(rng)).collect()
}

/// A run `s_k s_{k+1} ... s_{k+n-2}` (or descending); its image is a rotation.
fn run(n: usize, start: usize, up: bool) -> Vec<usize> {
    (0..n - 1)
        .map(|t| if up { (start + t) % n } else { (start + n * n - t) % n })
        .collect()
}

/// A reduced glide of length at most `max_len`, scrambled by random moves.
pub fn random_glide(rng: &mut ChaCha8Rng, n: usize, max_len: usize) -> Glide {
    loop {
        let runs = rng.gen_range(0..=max_len / (n - 1));
        let up = rng.gen_bool(0.5);
        let mut letters = Vec::new();
        for _ in 0..runs {
            letters.extend(run(n, rng.gen_range(0..n), up));
        }
        let w = AffineWord::new(n, letters).unwrap();
        if !is_reduced(&w) {
            continue;
        }
        let w = random_move_walk(&w, 3 * w.len(), rng);
        return Glide::new(w).unwrap();
    }
}

/// Glides `u`, `v` with `v·u` reduced, both nonempty, total length at most `max_len`.
pub fn random_pair(rng: &mut ChaCha8Rng, n: usize, max_len: usize) -> (Glide, Glide) {
    loop {
        let u = random_glide(rng, n, max_len - (n - 1));
        let v = random_glide(rng, n, max_len - u.len());
        if u.is_empty() || v.is_empty() {
            continue;
        }
        if is_reduced(&v.word().concat(u.word()).unwrap()) {
            return (u, v);
        }
    }
}
