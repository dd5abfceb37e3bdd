//! Property tests for the algebraic invariants: reversion round trips,
//! truncation coherence, s-number linearity, lattice canonicity, and
//! printer/parser round trips.

use std::sync::OnceLock;

use proptest::prelude::*;

use cobord::lattice::monomial_basis;
use cobord::ops::{OpBasis, SuOp};
use cobord::parse::{parse_op, parse_poly, parse_series};
use cobord::poly::{rat, GradedPoly};
use cobord::series::{PolyRing, Series};
use cobord::{FglContext, LatticeBasis};

const CAP: u32 = 8;
const ORDER: u32 = 10;

fn ctx() -> &'static FglContext {
    static CTX: OnceLock<FglContext> = OnceLock::new();
    CTX.get_or_init(|| FglContext::build(ORDER, CAP).unwrap())
}

fn ring() -> PolyRing {
    PolyRing { cap: CAP }
}

/// A random homogeneous polynomial of the given weight with small integer
/// coefficients.
fn homogeneous_poly(weight: u32) -> impl Strategy<Value = GradedPoly> {
    let basis = monomial_basis(weight, CAP);
    let len = basis.len();
    proptest::collection::vec(-4i64..=4, len).prop_map(move |coeffs| {
        GradedPoly::from_terms(
            basis.iter().cloned().zip(coeffs.iter().map(|&c| rat(c))),
            CAP,
        )
    })
}

/// A random graded series `u + Σ λi u^{i+1}` with homogeneous λi.
fn graded_series() -> impl Strategy<Value = Series<PolyRing>> {
    let coeffs: Vec<_> = (1..=4u32).map(homogeneous_poly).collect();
    coeffs.prop_map(|cs| {
        let mut s = Series::var(ring(), 0, 1, ORDER);
        for (i, c) in cs.into_iter().enumerate() {
            s.set_coeff1(i as u32 + 2, c);
        }
        s
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reversion_round_trip(s in graded_series()) {
        let inv = s.compositional_inverse().unwrap();
        let u = Series::var(ring(), 0, 1, ORDER);
        prop_assert_eq!(s.substitute(&inv).unwrap(), u.clone());
        prop_assert_eq!(inv.substitute(&s).unwrap(), u);
        prop_assert!(inv.grade_is_consistent());
    }

    #[test]
    fn truncation_coherence(a in graded_series(), b in graded_series()) {
        let prod_then_cut = a.mul(&b).unwrap().truncated(6);
        let cut_then_prod = a.truncated(6).mul(&b.truncated(6)).unwrap();
        prop_assert_eq!(prod_then_cut, cut_then_prod);
    }

    #[test]
    fn s_number_is_linear_and_kills_products(
        p in homogeneous_poly(2),
        q in homogeneous_poly(3),
        c in -5i64..=5,
    ) {
        // vanishing on products of positive-weight elements
        let prod = p.mul(&q).unwrap();
        prop_assert_eq!(prod.s_number(5).unwrap(), rat(0));
        // linearity in weight 3
        let r = q.scale_int(c);
        let sum = q.add(&r).unwrap();
        prop_assert_eq!(
            sum.s_number(3).unwrap(),
            q.s_number(3).unwrap() * rat(1 + c)
        );
    }

    #[test]
    fn reduction_is_an_idempotent_quotient(
        p in homogeneous_poly(3),
        q in homogeneous_poly(2),
    ) {
        let r = p.reduce_mod_decomposables();
        prop_assert_eq!(r.reduce_mod_decomposables(), r);
        // positive-weight products die in the quotient
        prop_assert!(p.mul(&q).unwrap().reduce_mod_decomposables().is_zero());
    }

    #[test]
    fn hnf_is_canonical_under_permutation(
        gens in proptest::collection::vec(homogeneous_poly(3), 1..5),
        rotation in 0usize..4,
    ) {
        let l1 = LatticeBasis::from_generators(3, CAP, &gens).unwrap();
        let mut shuffled = gens.clone();
        let split = rotation % shuffled.len().max(1);
        shuffled.rotate_left(split);
        let l2 = LatticeBasis::from_generators(3, CAP, &shuffled).unwrap();
        prop_assert_eq!(l1, l2);
    }

    #[test]
    fn poly_printer_parser_round_trip(p in homogeneous_poly(4)) {
        let text = p.to_string();
        prop_assert_eq!(parse_poly(&text, CAP).unwrap(), p);
    }

    #[test]
    fn series_printer_parser_round_trip(s in graded_series()) {
        let text = s.to_string();
        prop_assert_eq!(parse_series(&text, CAP, ORDER).unwrap(), s);
    }
}

proptest! {
    // Operation-level properties exercise the full context; keep the case
    // count small since each case does real work.
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn op_series_round_trip(
        mu0 in -3i64..=3,
        mu1 in homogeneous_poly(1),
        mu3 in homogeneous_poly(3),
    ) {
        let c = ctx();
        let op = SuOp::from_coeffs(
            [
                (0, GradedPoly::from_int(mu0, CAP)),
                (1, mu1),
                (3, mu3),
            ],
            CAP,
        );
        let s = op.to_series(c).unwrap();
        prop_assert_eq!(SuOp::from_series(&s, c, OpBasis::UUbarPowers).unwrap(), op.clone());
        prop_assert_eq!(SuOp::from_series(&s, c, OpBasis::UPowers).unwrap(), op);
    }

    #[test]
    fn op_printer_parser_round_trip(
        mu0 in -3i64..=3,
        mu2 in homogeneous_poly(2),
    ) {
        let op = SuOp::from_coeffs(
            [(0, GradedPoly::from_int(mu0, CAP)), (2, mu2)],
            CAP,
        );
        let text = op.to_string();
        prop_assert_eq!(parse_op(&text, CAP).unwrap(), op);
    }

    #[test]
    fn product_rule_is_factorization_independent(
        a in homogeneous_poly(1),
        b in homogeneous_poly(2),
        c in homogeneous_poly(2),
    ) {
        let cx = ctx();
        // apply ∂2 to (ab)c and a(bc): same monomial sums, same answer by
        // construction, but the recursion splits differently
        let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
        let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(ab_c.clone(), a_bc);
        let d2 = SuOp::partial(2, CAP);
        // product rule against the direct evaluation
        let direct = d2.apply(&ab_c, cx).unwrap();
        let mut by_rule = GradedPoly::zero(CAP);
        let ab = a.mul(&b).unwrap();
        for i in 0..=3u32 {
            for j in 0..=2u32 {
                let alpha = cx.alpha_k(2, i, j);
                if alpha.is_zero() {
                    continue;
                }
                let di = SuOp::partial(i, CAP).apply(&ab, cx).unwrap();
                let dj = SuOp::partial(j, CAP).apply(&c, cx).unwrap();
                by_rule = by_rule.add(&alpha.mul(&di).unwrap().mul(&dj).unwrap()).unwrap();
            }
        }
        prop_assert_eq!(direct, by_rule);
    }
}
