//! Randomized properties over arbitrary and homogeneous expressions.

use proptest::prelude::*;
use rexlen::envelopes::{higher_envelope, lower_envelope};
use rexlen::expr::{parse, ONE};
use rexlen::languages::all_words;
use rexlen::logproduct::{canonical_factorize, decompose};
use rexlen::random::{ExprSampler, RandomOptions};
use rexlen::transforms::{boolean_eval, eliminate_epsilon, permute_language};
use rexlen::{Alphabet, EnumOptions, Expr, Language, Letter};

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        1 => Just(Expr::epsilon()),
        4 => (1..=2u32).prop_map(|i| Expr::letter(Letter::new(i))),
    ];
    leaf.prop_recursive(5, 32, 2, |inner| {
        prop_oneof![
            3 => (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::union(a, b)),
            3 => (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::concat(a, b)),
            1 => inner.prop_map(Expr::star),
        ]
    })
}

fn arb_star_free() -> impl Strategy<Value = Expr> {
    arb_expr().prop_filter("star-free", |e| e.is_star_free())
}

fn homogeneous(seed: u64, max_degree: usize, epsilon: bool) -> Expr {
    let opts = RandomOptions {
        epsilon,
        ..Default::default()
    };
    ExprSampler::new(seed, opts).homogeneous_up_to(max_degree)
}

fn with_len(l: &Language, n: usize) -> Language {
    l.iter().filter(|w| w.len() == n).cloned().collect()
}

fn bounded(e: &Expr, n: usize) -> Language {
    e.language(&EnumOptions::bounded(n)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printing_round_trips(e in arb_expr()) {
        let a = Alphabet::binary();
        for text in [e.to_flat(&a), e.to_canonical(&a)] {
            let back = parse(&text, &a).unwrap();
            prop_assert_eq!(back.rpn(), e.rpn());
            prop_assert_eq!(bounded(&back, 5), bounded(&e, 5));
        }
    }

    #[test]
    fn length_envelopes_pick_extremal_words(e in arb_star_free()) {
        let l = bounded(&e, 64);
        let lo = lower_envelope(&e).unwrap();
        let hi = higher_envelope(&e).unwrap();
        prop_assert!(lo.rpn() <= e.rpn() && hi.rpn() <= e.rpn());
        prop_assert_eq!(bounded(&lo, 64), with_len(&l, l.min_len().unwrap()));
        prop_assert_eq!(bounded(&hi, 64), with_len(&l, l.max_len().unwrap()));
    }

    #[test]
    fn lower_envelope_of_starred_expression(e in arb_expr()) {
        let lo = lower_envelope(&e).unwrap();
        prop_assert!(lo.rpn() <= e.rpn());
        let l = bounded(&e, e.min_len());
        prop_assert_eq!(bounded(&lo, 64), with_len(&l, e.min_len()));
    }

    #[test]
    fn epsilon_elimination_keeps_the_language(seed in any::<u64>()) {
        let e = homogeneous(seed, 6, true);
        prop_assume!(e.degree() != Some(0));
        let s = eliminate_epsilon(&e).unwrap();
        prop_assert!(s.rpn() <= e.rpn());
        prop_assert_eq!(bounded(&s, 8), bounded(&e, 8));
    }

    #[test]
    fn boolean_evaluation_is_membership(seed in any::<u64>()) {
        let e = homogeneous(seed, 8, false);
        let n = e.degree().unwrap();
        let l = bounded(&e, n);
        for w in all_words(2, n) {
            let x: Vec<bool> = w.iter().map(|&a| a == ONE).collect();
            prop_assert_eq!(boolean_eval(&e, &x).unwrap(), l.contains(&w));
        }
    }

    #[test]
    fn decomposition_and_factorization(seed in any::<u64>()) {
        let e = homogeneous(seed, 6, false);
        let parts = decompose(&e).unwrap();
        let mut union = Language::new(2);
        for b in &parts {
            let lb = bounded(b, 6);
            let f = canonical_factorize(b).unwrap();
            prop_assert_eq!(bounded(&f.product(), 6), lb.clone());
            prop_assert_eq!(f.degrees().iter().sum::<usize>(), b.degree().unwrap());
            for w in lb.into_words() {
                union.insert(w);
            }
        }
        prop_assert_eq!(union, bounded(&e, 6));
    }

    #[test]
    fn permutations_compose(seed in any::<u64>(), rot in 0usize..6) {
        let e = homogeneous(seed, 6, false);
        let n = e.degree().unwrap();
        let l = bounded(&e, n);
        let sigma: Vec<usize> = (0..n).map(|i| (i + rot) % n + 1).collect();
        let mut inverse = vec![0; n];
        for (i, &s) in sigma.iter().enumerate() {
            inverse[s - 1] = i + 1;
        }
        let there = permute_language(&l, &sigma).unwrap();
        prop_assert_eq!(there.len(), l.len());
        prop_assert_eq!(permute_language(&there, &inverse).unwrap(), l);
    }
}
