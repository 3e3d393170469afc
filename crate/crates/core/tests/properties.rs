//! Randomized invariants of the exact kernel: ring axioms, determinant
//! multilinearity, strategy agreement, substitution as a ring map, rank
//! soundness, parser round-trips, and Buchberger's postcondition.

use hankelfiber_core::groebner::{buchberger, Budget, Ideal};
use hankelfiber_core::hilbert::{count_standard_monomials, hilbert_numerator, weighted_series_value};
use hankelfiber_core::matrix::{DetStrategy, PolyMatrix};
use hankelfiber_core::monomial::Monomial;
use hankelfiber_core::order::TermOrder;
use hankelfiber_core::parse::{format_polynomial, parse_polynomial};
use hankelfiber_core::poly::Polynomial;
use hankelfiber_core::scalar::{self, Scalar};
use hankelfiber_core::vars::VariableRegistry;
use proptest::prelude::*;
use std::collections::BTreeMap;
use std::sync::Arc;

const NVARS: u32 = 4;

fn reg() -> Arc<VariableRegistry> {
    VariableRegistry::x_only(NVARS)
}

fn scalar_strategy() -> impl Strategy<Value = Scalar> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| scalar::from_ratio(n, d))
}

fn monomial_strategy(max_deg: u32) -> impl Strategy<Value = Monomial> {
    proptest::collection::vec((0..NVARS, 0..=max_deg), 0..4)
        .prop_map(|pairs| Monomial::from_pairs(&pairs))
}

fn poly_strategy() -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec((monomial_strategy(3), scalar_strategy()), 0..6)
        .prop_map(|terms| Polynomial::from_terms(&reg(), terms))
}

fn linear_poly_strategy() -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec((0..NVARS, -3i64..=3), 1..4).prop_map(|pairs| {
        Polynomial::from_terms(
            &reg(),
            pairs
                .into_iter()
                .map(|(v, c)| (Monomial::var(v), scalar::from_int(c))),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_axioms(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        let ab_c = (&(&a + &b) + &c).clone();
        let a_bc = (&a + &(&b + &c)).clone();
        prop_assert_eq!(ab_c, a_bc);
        prop_assert_eq!(&a * &b, &b * &a);
        let left = &a * &(&b + &c);
        let right = &(&a * &b) + &(&a * &c);
        prop_assert_eq!(left, right);
        prop_assert!((&a - &a).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn parser_roundtrip(p in poly_strategy()) {
        let printed = format_polynomial(&p);
        let parsed = parse_polynomial(&reg(), &printed).unwrap();
        prop_assert_eq!(parsed, p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn determinant_alternating_on_row_swap(
        rows in proptest::collection::vec(
            proptest::collection::vec(linear_poly_strategy(), 4), 4),
        i in 0usize..4, j in 0usize..4)
    {
        prop_assume!(i != j);
        let r = reg();
        let m = PolyMatrix::from_fn(&r, 4, 4, |a, b| rows[a][b].clone());
        let mut swapped_rows = rows.clone();
        swapped_rows.swap(i, j);
        let s = PolyMatrix::from_fn(&r, 4, 4, |a, b| swapped_rows[a][b].clone());
        let d1 = m.determinant(DetStrategy::CofactorMemo).unwrap();
        let d2 = s.determinant(DetStrategy::CofactorMemo).unwrap();
        prop_assert_eq!(d1.neg(), d2);
    }

    #[test]
    fn substitute_is_ring_map(p in poly_strategy(), q in poly_strategy()) {
        let r = reg();
        let mut asg = BTreeMap::new();
        asg.insert(0u32, parse_polynomial(&r, "x1 + x2").unwrap());
        asg.insert(1u32, parse_polynomial(&r, "x3*x4 - 1").unwrap());
        asg.insert(2u32, parse_polynomial(&r, "2*x2").unwrap());
        let pq = (&p * &q).substitute(&asg, &r).unwrap();
        let p_s = p.substitute(&asg, &r).unwrap();
        let q_s = q.substitute(&asg, &r).unwrap();
        prop_assert_eq!(pq, &p_s * &q_s);
    }

    #[test]
    fn rank_generic_never_exceeds_true_rank(
        u in proptest::collection::vec(linear_poly_strategy(), 3),
        v in proptest::collection::vec(linear_poly_strategy(), 3),
        w in proptest::collection::vec(linear_poly_strategy(), 3),
        z in proptest::collection::vec(linear_poly_strategy(), 3),
        seed in 0u64..1000)
    {
        // rank(u v^T + w z^T) <= 2 by construction
        let r = reg();
        let m = PolyMatrix::from_fn(&r, 3, 3, |i, j| {
            &(&u[i] * &v[j]) + &(&w[i] * &z[j])
        });
        let est = m.rank_generic(seed, true).unwrap();
        prop_assert!(est.rank <= 2);
        if let Some(cert) = est.certificate {
            // the certificate minor is symbolically nonzero
            if let Some(minor) = cert.minor {
                prop_assert!(!minor.is_zero());
            }
            prop_assert!(!num::traits::Zero::is_zero(&cert.witness_value));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bareiss_agrees_with_cofactor(
        size in 2usize..=6,
        seed_rows in proptest::collection::vec(
            proptest::collection::vec(linear_poly_strategy(), 6), 6))
    {
        let r = reg();
        let m = PolyMatrix::from_fn(&r, size, size, |i, j| seed_rows[i][j].clone());
        let a = m.determinant(DetStrategy::CofactorMemo).unwrap();
        let b = m.determinant(DetStrategy::Bareiss).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn buchberger_postcondition(
        gens in proptest::collection::vec(poly_strategy(), 1..4))
    {
        let ideal = Ideal::new(&reg(), gens);
        prop_assume!(!ideal.is_empty());
        let gb = buchberger(&ideal, &TermOrder::grevlex(), &Budget::default());
        prop_assume!(gb.complete);
        prop_assert!(gb.verify().unwrap(), "an S-pair failed to reduce to zero");
    }

    #[test]
    fn hilbert_series_matches_brute_force(
        monos in proptest::collection::vec(monomial_strategy(3), 1..5))
    {
        let gens: Vec<Monomial> = monos.into_iter().filter(|m| !m.is_one()).collect();
        prop_assume!(!gens.is_empty());
        let numerator = hilbert_numerator(&gens).unwrap();
        let weights = vec![1u32; NVARS as usize];
        for d in 0..=5u32 {
            let from_series = weighted_series_value(&numerator, &weights, d);
            let brute = count_standard_monomials(&gens, NVARS, d);
            prop_assert_eq!(from_series, num::bigint::BigInt::from(brute));
        }
    }
}
