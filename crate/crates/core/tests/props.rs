//! Property tests for the sign-sensitive kernels: the Koszul action, the
//! symmetric product, contraction, and rational serialization.

use num_traits::{One, Zero};
use proptest::prelude::*;

use pbwstar::gvs::{
    action_sign, all_words, apply_perm_word, mul_monomials, sort_word, GradedSpace, Monomial,
};
use pbwstar::scalar::{format_rat, parse_rat, qi, Q};
use pbwstar::symgroup::{all_permutations, Permutation};
use pbwstar::ualg::contract_one;

fn arb_space() -> impl Strategy<Value = GradedSpace> {
    proptest::collection::vec(-2i64..=2, 1..=3).prop_map(|degrees| {
        let names = ["a", "b", "c"];
        let pairs: Vec<(&str, i64)> = degrees
            .iter()
            .enumerate()
            .map(|(i, &d)| (names[i], d))
            .collect();
        GradedSpace::from_names_degrees(&pairs)
    })
}

fn arb_word(dim: usize, len: usize) -> impl Strategy<Value = Vec<u8>> {
    proptest::collection::vec(0..dim as u8, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The signed place action is a group homomorphism.
    #[test]
    fn signed_action_is_homomorphic(
        space in arb_space(),
        word in arb_word(3, 4),
        (gi, hi) in (0usize..24, 0usize..24),
    ) {
        let word: Vec<u8> = word.into_iter().map(|c| c % space.dim() as u8).collect();
        let perms = all_permutations(4);
        let (g, h) = (&perms[gi], &perms[hi]);
        // act by h, then g
        let after_h = apply_perm_word(h, &word);
        let s_h = action_sign(&space, h, &word);
        let s_g = action_sign(&space, g, &after_h);
        let composed = g.compose(h);
        let direct = action_sign(&space, &composed, &word);
        prop_assert_eq!(apply_perm_word(g, &after_h), apply_perm_word(&composed, &word));
        prop_assert_eq!((s_g * s_h) as i64, direct as i64);
    }

    /// m_0 is graded-commutative and associative on monomials.
    #[test]
    fn symmetric_product_laws(
        space in arb_space(),
        w1 in arb_word(3, 2),
        w2 in arb_word(3, 2),
        w3 in arb_word(3, 1),
    ) {
        let fix = |w: Vec<u8>| -> Option<(Monomial, i8)> {
            let w: Vec<u8> = w.into_iter().map(|c| c % space.dim() as u8).collect();
            sort_word(&space, &w)
        };
        let (Some((m1, _)), Some((m2, _)), Some((m3, _))) = (fix(w1), fix(w2), fix(w3)) else {
            return Ok(());
        };
        let parity = |m: &Monomial| -> bool {
            m.0.iter().filter(|&&c| space.odd(c)).count() % 2 == 1
        };
        // commutativity with the Koszul sign
        let ab = mul_monomials(&space, &m1, &m2);
        let ba = mul_monomials(&space, &m2, &m1);
        match (ab.clone(), ba) {
            (None, None) => {}
            (Some((m, s)), Some((m2_, s2))) => {
                prop_assert_eq!(&m, &m2_);
                let expected = if parity(&m1) && parity(&m2) { -1 } else { 1 };
                prop_assert_eq!((s as i64) * expected, s2 as i64);
            }
            other => prop_assert!(false, "one order vanished: {:?}", other),
        }
        // associativity
        let left = ab.and_then(|(m, s)| {
            mul_monomials(&space, &m, &m3).map(|(mm, ss)| (mm, s as i64 * ss as i64))
        });
        let right = mul_monomials(&space, &m2, &m3).and_then(|(m, s)| {
            mul_monomials(&space, &m1, &m).map(|(mm, ss)| (mm, s as i64 * ss as i64))
        });
        prop_assert_eq!(left, right);
    }

    /// Contraction acts as a right derivation:
    /// c_1(mn ⊗ u*) = ±c_1(m ⊗ u*)·n + m·c_1(n ⊗ u*), the sign moving u*
    /// past n.
    #[test]
    fn contraction_is_a_right_derivation(
        space in arb_space(),
        w1 in arb_word(3, 2),
        w2 in arb_word(3, 2),
        dual in 0u8..3,
    ) {
        let dual = dual % space.dim() as u8;
        let fix = |w: Vec<u8>| -> Option<(Monomial, i8)> {
            let w: Vec<u8> = w.into_iter().map(|c| c % space.dim() as u8).collect();
            sort_word(&space, &w)
        };
        let (Some((m, _)), Some((n, _))) = (fix(w1), fix(w2)) else { return Ok(()); };
        let Some((mn, prod_s)) = mul_monomials(&space, &m, &n) else { return Ok(()); };
        let collect = |v: Option<(Monomial, Q)>| -> std::collections::BTreeMap<Monomial, Q> {
            v.into_iter().collect()
        };
        let prod_sign = qi(prod_s as i64);
        let lhs: std::collections::BTreeMap<Monomial, Q> = collect(
            contract_one(&space, &mn, dual).map(|(mm, c)| (mm, c * &prod_sign)),
        );
        let mut rhs: std::collections::BTreeMap<Monomial, Q> = Default::default();
        let n_parity = n.0.iter().filter(|&&c| space.odd(c)).count() % 2 == 1;
        let swap = if space.odd(dual) && n_parity { -Q::one() } else { Q::one() };
        if let Some((mm, c)) = contract_one(&space, &m, dual) {
            if let Some((out, s)) = mul_monomials(&space, &mm, &n) {
                *rhs.entry(out).or_insert_with(Q::zero) += c * &swap * qi(s as i64);
            }
        }
        if let Some((nn, c)) = contract_one(&space, &n, dual) {
            if let Some((out, s)) = mul_monomials(&space, &m, &nn) {
                *rhs.entry(out).or_insert_with(Q::zero) += c * qi(s as i64);
            }
        }
        rhs.retain(|_, c| !c.is_zero());
        prop_assert_eq!(lhs, rhs);
    }

    /// Rational string round trip.
    #[test]
    fn rational_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
        let q = Q::new(n.into(), d.into());
        prop_assert_eq!(parse_rat(&format_rat(&q)).unwrap(), q);
    }

    /// Sorting a permuted word reproduces the original monomial with the
    /// action sign.
    #[test]
    fn sort_inverts_signed_shuffles(
        space in arb_space(),
        w in arb_word(3, 4),
        gi in 0usize..24,
    ) {
        let w: Vec<u8> = w.into_iter().map(|c| c % space.dim() as u8).collect();
        let Some((mono, base_sign)) = sort_word(&space, &w) else { return Ok(()); };
        let g = &all_permutations(4)[gi];
        let shuffled = apply_perm_word(g, &w);
        let s = action_sign(&space, g, &w);
        match sort_word(&space, &shuffled) {
            Some((mono2, sign2)) => {
                prop_assert_eq!(mono, mono2);
                prop_assert_eq!((sign2 * s) as i64, base_sign as i64);
            }
            None => prop_assert!(false, "shuffle of a valid monomial sorts to zero"),
        }
    }
}

/// Non-random sanity companion: words over one odd letter vanish under the
/// symmetrizer in every arity up to 4.
#[test]
fn odd_powers_die_symmetrically() {
    let space = GradedSpace::from_names_degrees(&[("t", 1)]);
    for n in 2..=4 {
        for w in all_words(1, n) {
            assert!(sort_word(&space, &w).is_none());
        }
    }
    let _ = Permutation::identity(2);
}
