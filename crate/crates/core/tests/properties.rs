use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tamewild::autgroup::{random_tame_word, SamplerConfig, TameWord};
use tamewild::commpoly::ring_uv;
use tamewild::fox::fox_derive;
use tamewild::metabelian::straighten;
use tamewild::parse::{parse_comm, parse_nc};
use tamewild::scalar::int;
use tamewild::uenv::universal_derivation;
use tamewild::{CommPoly, NCPoly, TensorPoly, Word};

fn word(letters: &[u8]) -> Word {
    letters
        .iter()
        .fold(Word::empty(), |w, &l| w.concat(&Word::letter(l as usize)))
}

fn nc_poly(max_len: usize) -> impl Strategy<Value = NCPoly> {
    prop::collection::vec(
        (prop::collection::vec(0u8..3, 0..=max_len), -3i64..=3),
        0..5,
    )
    .prop_map(|terms| NCPoly::from_terms(3, terms.into_iter().map(|(w, c)| (word(&w), int(c)))))
}

fn tensor_poly() -> impl Strategy<Value = TensorPoly> {
    prop::collection::vec(
        (
            prop::collection::vec(0u8..3, 0..3),
            prop::collection::vec(0u8..3, 0..3),
            -3i64..=3,
        ),
        0..4,
    )
    .prop_map(|terms| {
        terms
            .into_iter()
            .fold(TensorPoly::zero(3), |acc, (l, r, c)| {
                &acc + &TensorPoly::basis(3, word(&l), word(&r), int(c))
            })
    })
}

fn uv_poly() -> impl Strategy<Value = CommPoly> {
    prop::collection::vec((0u32..3, 0u32..3, -4i64..=4), 0..4).prop_map(|terms| {
        let ring = ring_uv();
        terms
            .into_iter()
            .fold(CommPoly::zero(&ring), |acc, (a, b, c)| {
                acc.checked_add(&CommPoly::monomial(&ring, vec![a, b], int(c)))
                    .unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nc_ring_laws(a in nc_poly(3), b in nc_poly(3), c in nc_poly(3)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &NCPoly::one(3), a.clone());
    }

    #[test]
    fn tensor_product_is_associative(a in tensor_poly(), b in tensor_poly(), c in tensor_poly()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &TensorPoly::one(3), a.clone());
    }

    #[test]
    fn multiplication_kills_the_universal_derivation(f in nc_poly(4)) {
        prop_assert!(universal_derivation(&f).lambda().is_zero());
    }

    #[test]
    fn fox_identity(f in nc_poly(4)) {
        let mut rhs = TensorPoly::zero(3);
        for i in 0..3 {
            rhs = &rhs + &(&universal_derivation(&NCPoly::generator(3, i)) * &fox_derive(&f, i));
        }
        prop_assert_eq!(universal_derivation(&f), rhs);
    }

    #[test]
    fn fox_derivative_of_a_word_counts_occurrences(letters in prop::collection::vec(0u8..3, 0..6)) {
        // Oracle: one tensor term per occurrence of the letter.
        let w = word(&letters);
        let f = NCPoly::monomial(3, w, int(1));
        for i in 0..3u8 {
            let mut expected = TensorPoly::zero(3);
            for (p, &l) in letters.iter().enumerate() {
                if l == i {
                    expected = &expected
                        + &TensorPoly::basis(3, word(&letters[..p]), word(&letters[p + 1..]), int(1));
                }
            }
            prop_assert_eq!(fox_derive(&f, i as usize), expected);
        }
    }

    #[test]
    fn straightening_is_multiplicative(a in nc_poly(3), b in nc_poly(3)) {
        let lhs = straighten(&(&a * &b)).unwrap();
        let rhs = straighten(&a).unwrap().mul(&straighten(&b).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn straightening_respects_lift(a in nc_poly(4)) {
        let m = straighten(&a).unwrap();
        prop_assert_eq!(straighten(&m.lift()).unwrap(), m);
    }

    #[test]
    fn tame_word_times_inverse_is_identity(seed in any::<u64>(), len in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cfg = SamplerConfig { coeff_bound: 3, max_degree: 2, max_terms: 1 };
        let w = random_tame_word(&mut rng, 3, len, &cfg);
        prop_assert!(w.concat(&w.inverse()).evaluate().is_identity());
        prop_assert!(w.inverse().concat(&w).evaluate().is_identity());
    }

    #[test]
    fn tame_word_display_round_trips(seed in any::<u64>(), len in 0usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_tame_word(&mut rng, 3, len, &SamplerConfig::default());
        let back = TameWord::parse(&w.to_string(), 3).unwrap();
        prop_assert_eq!(back.to_string(), w.to_string());
        prop_assert_eq!(back.evaluate(), w.evaluate());
    }

    #[test]
    fn nc_display_round_trips(f in nc_poly(4)) {
        prop_assert_eq!(parse_nc(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn comm_display_round_trips(p in uv_poly()) {
        prop_assert_eq!(parse_comm(&p.to_string(), &ring_uv()).unwrap(), p);
    }

    #[test]
    fn exact_division_recovers_the_factor(a in uv_poly(), b in uv_poly()) {
        prop_assume!(!b.is_zero());
        let prod = a.checked_mul(&b).unwrap();
        prop_assert_eq!(prod.exact_div(&b), Some(a));
    }
}
