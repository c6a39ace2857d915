use leadrel_core::autmap::jacobian_constant;
use leadrel_core::classify3::{classify, normalize, sample_line, Tag};
use leadrel_core::derivation::check_delta_identity;
use leadrel_core::jvdk::{decompose2, Decompose2};
use leadrel_core::poly::{format_poly, WDegree};
use leadrel_core::relations::{check_degree_lemma, relation_report_for_word};
use leadrel_core::sample::{case_rng, random_non_affine_word, random_poly, random_word, WordShape};
use leadrel_core::{parse_poly, AutWord, Polynomial, WeightVector};
use proptest::prelude::*;

fn poly(seed: u64, n: usize) -> Polynomial {
    random_poly(&mut case_rng(seed, 0), n, 4)
}

fn word(seed: u64, shape: &WordShape) -> AutWord {
    random_word(&mut case_rng(seed, 1), shape)
}

fn small_plane() -> WordShape {
    WordShape { nvars: 2, max_gens: 4, max_addend_degree: 3, coeff: 5, max_addend_terms: 2, degree_budget: 9 }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (p, q, r) = (poly(a, 3), poly(b, 3), poly(c, 3));
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn text_round_trip(a in any::<u64>()) {
        let p = poly(a, 3);
        prop_assert_eq!(parse_poly(&format_poly(&p), 3).unwrap(), p);
    }

    #[test]
    fn weighted_degree_is_additive(a in any::<u64>(), b in any::<u64>(), w in prop::collection::vec(1i64..5, 3)) {
        let w = WeightVector::from_integers(&w).unwrap();
        let (p, q) = (poly(a, 3), poly(b, 3));
        let (dp, dq) = (p.wdeg(&w), q.wdeg(&w));
        let (WDegree::Finite(x), WDegree::Finite(y)) = (dp, dq) else { unreachable!("nonzero") };
        prop_assert_eq!((&p * &q).wdeg(&w), WDegree::Finite(x + y));
    }

    #[test]
    fn word_times_inverse_is_identity(s in any::<u64>(), three in any::<bool>()) {
        let shape = if three { WordShape::space() } else { small_plane() };
        let w = word(s, &shape);
        let both = w.then(&w.invert()).unwrap();
        prop_assert!(both.expand().is_identity());
        prop_assert_eq!(jacobian_constant(&w.expand()).unwrap(), w.jacobian());
    }

    #[test]
    fn composition_matches_expansion(s in any::<u64>(), t in any::<u64>()) {
        let (u, v) = (word(s, &small_plane()), word(t, &small_plane()));
        let joint = u.then(&v).unwrap().expand();
        prop_assert_eq!(joint, u.expand().compose(&v.expand()).unwrap());
    }

    #[test]
    fn word_json_round_trip(s in any::<u64>()) {
        let w = word(s, &WordShape::space());
        let text = serde_json::to_string(&w).unwrap();
        prop_assert_eq!(serde_json::from_str::<AutWord>(&text).unwrap(), w);
    }

    #[test]
    fn plane_words_decompose_and_recompose(s in any::<u64>()) {
        let m = word(s, &WordShape::plane()).expand();
        let Decompose2::Tame(dec) = decompose2(&m).unwrap() else {
            return Err(TestCaseError::fail("tame map rejected"));
        };
        prop_assert_eq!(dec.word.expand(), m);
        for pair in dec.steps.windows(2) {
            prop_assert!(pair[1].degree_sum_after < pair[0].degree_sum_after);
        }
    }

    #[test]
    fn scaled_partial_identity(s in any::<u64>(), three in any::<bool>()) {
        let n = if three { 3 } else { 2 };
        let shape = if three { WordShape::space() } else { small_plane() };
        let w = word(s, &shape);
        let p = poly(s, n);
        let (m, inv) = (w.expand(), w.invert().expand());
        for i in 0..n {
            prop_assert!(check_delta_identity(&m, &inv, &p, i).unwrap());
        }
    }

    #[test]
    fn degree_lemma(s in any::<u64>()) {
        let w = random_non_affine_word(&mut case_rng(s, 2), &small_plane());
        let rep = relation_report_for_word(&w, &WeightVector::standard(2)).unwrap();
        let p = poly(s, 2);
        let l = check_degree_lemma(&w.expand(), &rep, &p).unwrap();
        prop_assert!(l.holds(), "{:?}", l);
        let r = rep.relation.clone().unwrap();
        let l = check_degree_lemma(&w.expand(), &rep, &(&r * &p)).unwrap();
        prop_assert!(l.strict && l.holds());
    }

    #[test]
    fn classification_is_sound(s in any::<u64>(), t in 0usize..13) {
        let tag = Tag::NONZERO[t];
        let sample = sample_line(tag, &mut case_rng(s, 3));
        let out = classify(&sample.r, &sample.weights()).unwrap();
        let rt = out.relation_type().unwrap();
        prop_assert_eq!(rt.tag(), tag);
        prop_assert_eq!(rt.reconstruct(), sample.r.clone());
        prop_assert_eq!(classify(&sample.r, &sample.weights()).unwrap(), out.clone());
        let nf = normalize(rt).unwrap();
        prop_assert!(nf.verify(&sample.r).unwrap());
    }
}
