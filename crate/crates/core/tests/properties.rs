mod common;

use affine_dkdv::affine::{
    coxeter_length, is_reduced, rho_shift, weak_order_leq, word_to_perm, AffineWord, Glide,
};
use affine_dkdv::dkdv::{evolve_step, make_instance, StateSequence};
use affine_dkdv::lusztig::{apply_moves_to_weights, find_move_sequence, random_move_walk};
use affine_dkdv::network::{
    build_diagram, positive_weights_for, trajectory, wire_ansatz, ChamberLabel,
};
use affine_dkdv::tau::{solve_partner, vertex_weight, Component, SolitonSpec, TauFunction};
use common::{random_glide, random_pair, random_rationals};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_word(rng: &mut ChaCha8Rng, n: usize, len: usize) -> AffineWord {
    AffineWord::new(n, (0..len).map(|_| rng.gen_range(0..n)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prefixes_of_reduced_words_are_reduced(seed in any::<u64>(), n in 3usize..6) {
        let g = random_glide(&mut seeded(seed), n, 12);
        for k in 0..=g.len() {
            prop_assert!(is_reduced(&g.word().prefix(k)));
        }
    }

    #[test]
    fn rotation_conjugates_and_keeps_offset(seed in any::<u64>(), n in 3usize..6, t in -7i64..7) {
        let g = random_glide(&mut seeded(seed), n, 12);
        let p = word_to_perm(g.word());
        prop_assert_eq!(word_to_perm(&rho_shift(g.word(), t)), p.rho_conjugate(t));
        let r = Glide::new(rho_shift(g.word(), t)).unwrap();
        prop_assert_eq!(r.offset(), g.offset());
        prop_assert_eq!(r, g.rotate(t));
    }

    #[test]
    fn length_bounded_by_word_length(seed in any::<u64>(), n in 3usize..6, len in 0usize..12) {
        let w = random_word(&mut seeded(seed), n, len);
        let l = coxeter_length(&word_to_perm(&w));
        prop_assert!(l <= len);
        prop_assert_eq!(l % 2, len % 2);
        prop_assert_eq!(l == len, is_reduced(&w));
    }

    #[test]
    fn weak_order_is_a_partial_order(seed in any::<u64>(), n in 3usize..5) {
        let mut rng = seeded(seed);
        let g = random_glide(&mut rng, n, 10);
        let h = random_glide(&mut rng, n, 10);
        let chain: Vec<_> = (0..=g.len()).map(|k| word_to_perm(&g.word().prefix(k))).collect();
        for (i, a) in chain.iter().enumerate() {
            prop_assert!(weak_order_leq(a, a));
            for b in &chain[i..] {
                prop_assert!(weak_order_leq(a, b));
            }
        }
        let (a, b) = (word_to_perm(g.word()), word_to_perm(h.word()));
        if weak_order_leq(&a, &b) && weak_order_leq(&b, &a) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn moves_preserve_positivity_and_invert(seed in any::<u64>(), n in 3usize..6) {
        let mut rng = seeded(seed);
        let g = random_glide(&mut rng, n, 12);
        let target = random_move_walk(g.word(), 20, &mut rng);
        let forward = find_move_sequence(g.word(), &target).unwrap();
        let back = find_move_sequence(&target, g.word()).unwrap();
        let original = random_rationals(&mut rng, g.len());
        let mut w = original.clone();
        apply_moves_to_weights(&mut w, &forward).unwrap();
        prop_assert!(w.iter().all(|x| *x > num_traits::Zero::zero()));
        apply_moves_to_weights(&mut w, &back).unwrap();
        prop_assert_eq!(w, original);
    }

    #[test]
    fn trajectory_is_invariant_under_moves(seed in any::<u64>(), n in 3usize..6) {
        let mut rng = seeded(seed);
        let g = random_glide(&mut rng, n, 12);
        let other = Glide::new(random_move_walk(g.word(), 25, &mut rng)).unwrap();
        prop_assert!(trajectory(&g).eq_mod_ones(&trajectory(&other)));
    }

    #[test]
    fn crossing_labels_match_the_diagram(seed in any::<u64>(), n in 3usize..6) {
        let mut rng = seeded(seed);
        let g = random_glide(&mut rng, n, 12);
        let cut = rng.gen_range(0..=g.len());
        let d = build_diagram(g.word(), cut).unwrap();
        for (h, c) in d.crossings().iter().enumerate() {
            let p = c.position as i64;
            let [below, left, right, above] = d.crossing_labels(h);
            prop_assert_eq!(below, d.label(h, p - 1));
            prop_assert_eq!(left, d.label(h, p));
            prop_assert_eq!(right, d.label(h + 1, p));
            prop_assert_eq!(&above, &d.label(h, p + 1));
            prop_assert_eq!(&above, &d.label(h + 1, p + 1));
        }
    }

    #[test]
    fn no_wire_pair_crosses_both_ways(seed in any::<u64>(), n in 3usize..6) {
        let (u, v) = random_pair(&mut seeded(seed), n, 14);
        let word = v.word().concat(u.word()).unwrap();
        let d = build_diagram(&word, v.len()).unwrap();
        let oriented: Vec<(usize, usize)> =
            d.crossings().iter().map(|c| (c.lower_wire, c.upper_wire)).collect();
        for &(a, b) in &oriented {
            prop_assert!(a != b);
            prop_assert!(!oriented.contains(&(b, a)));
        }
    }

    #[test]
    fn auto_weights_are_positive(seed in any::<u64>(), n in 3usize..6) {
        let mut rng = seeded(seed);
        let (u, v) = random_pair(&mut rng, n, 14);
        let word = v.word().concat(u.word()).unwrap();
        let alpha = positive_weights_for(&word, v.len()).unwrap();
        let d = build_diagram(&word, v.len()).unwrap();
        let weights = d.ansatz_weights(&alpha.iter().map(|&a| a as f64).collect::<Vec<_>>()).unwrap();
        prop_assert!(weights.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn ansatz_is_fixed_for_perturbed_weights(seed in any::<u64>(), n in 3usize..6) {
        let mut rng = seeded(seed);
        let (u, v) = random_pair(&mut rng, n, 14);
        let word = v.word().concat(u.word()).unwrap();
        let alpha: Vec<f64> = positive_weights_for(&word, v.len())
            .unwrap()
            .iter()
            .map(|&a| a as f64 + rng.gen_range(-0.3..0.3))
            .collect();
        prop_assert!(wire_ansatz(&u, &v, &alpha).is_ok());
    }

    #[test]
    fn sweep_is_causal(seed in any::<u64>(), j in 0usize..12) {
        let mut rng = seeded(seed);
        let inst = make_instance::<f64>(
            &common::glide(3, &[1, 2, 1, 0]),
            &common::glide(3, &[1, 0]),
            None,
        ).unwrap();
        let states: Vec<Vec<f64>> =
            (0..12).map(|_| (0..4).map(|_| rng.gen_range(0.5..4.0)).collect()).collect();
        let s = StateSequence::new(0, states.clone()).unwrap();
        let mut perturbed = states;
        perturbed[j][0] *= 1.5;
        let t = StateSequence::new(0, perturbed).unwrap();
        let (a, _) = evolve_step(&inst, &s).unwrap();
        let (b, _) = evolve_step(&inst, &t).unwrap();
        prop_assert_eq!(&a.states()[..j], &b.states()[..j]);
    }

    #[test]
    fn vertex_weight_ignores_diagonal_shift(seed in any::<u64>(), b in 1.1f64..2.9, k in -5i64..5) {
        let mut rng = seeded(seed);
        let alpha = [1.0, 3.0, 4.0];
        let c = solve_partner(&alpha, b).unwrap();
        let spec = SolitonSpec::new(alpha.to_vec(), vec![Component::new(1.0, b, c)]).unwrap();
        let tf = TauFunction::new(spec);
        let s = ChamberLabel((0..3).map(|_| rng.gen_range(-10..=10)).collect());
        let (upper, lower) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        prop_assume!(upper != lower);
        let x = vertex_weight(&tf, &s, upper, lower).unwrap();
        let y = vertex_weight(&tf, &s.shift_ones(k), upper, lower).unwrap();
        prop_assert!((x - y).abs() <= 1e-10 * x.abs());
    }
}
