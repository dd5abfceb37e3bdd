//! Structural completeness of the integral lattices: ranks match the
//! partition-number predictions, and the kernel lattice is additively
//! spanned by *-monomials in polynomial generators chosen only by their
//! characteristic numbers.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use cobord::lattice::{monomial_basis, LatticeBasis};
use cobord::numtheory::m_k;
use cobord::poly::{GradedPoly, Rational};
use cobord::wtheory::{ker_delta_lattice, w_multiply, MultiplicationSpec};
use cobord::FglContext;

const CAP: u32 = 8;

fn ctx() -> &'static FglContext {
    static CTX: OnceLock<FglContext> = OnceLock::new();
    CTX.get_or_init(|| FglContext::build(10, CAP).unwrap())
}

/// An element of the lattice with the prescribed s-number, by a Bezout
/// combination of basis rows.
fn element_with_s(l: &LatticeBasis, k: u32, target: i64) -> GradedPoly {
    let mut g = BigInt::zero();
    let mut elem = GradedPoly::zero(CAP);
    for row in l.basis_polys() {
        let s = row.s_number(k).unwrap();
        assert!(s.denom().is_one());
        let s = s.numer().clone();
        if s.is_zero() {
            continue;
        }
        if g.is_zero() {
            g = s.abs();
            elem = if s.is_negative() { row.neg() } else { row };
            continue;
        }
        let ext = g.extended_gcd(&s);
        elem = elem
            .scale(&Rational::from_integer(ext.x))
            .add(&row.scale(&Rational::from_integer(ext.y)))
            .unwrap();
        g = ext.gcd;
    }
    let q = BigInt::from(target) / g;
    elem.scale(&Rational::from_integer(q))
}

#[test]
fn lattice_ranks_match_partition_counts() {
    let c = ctx();
    for k in 1..=CAP {
        let p_k = monomial_basis(k, CAP).len();
        let p_k2 = if k >= 2 {
            monomial_basis(k - 2, CAP).len()
        } else {
            0
        };
        assert_eq!(c.mu_lattice(k).unwrap().rank(), p_k, "full rank at {k}");
        // the kernel splits off the image of Δ exactly
        assert_eq!(
            ker_delta_lattice(c, k).unwrap().rank(),
            p_k - p_k2,
            "kernel rank at {k}"
        );
    }
}

#[test]
fn kernel_lattice_is_spanned_by_generator_monomials() {
    let c = ctx();
    let m = MultiplicationSpec::stong(c).unwrap();
    // generators picked only through their s-numbers: x1 = b1, and for
    // j >= 3 any kernel element with s_j = m_j·m_{j-1}
    let mut gens: Vec<Option<GradedPoly>> = vec![None; CAP as usize + 1];
    gens[1] = Some(GradedPoly::generator(1, CAP).unwrap());
    for j in 3..=CAP {
        let target = (m_k(j).value * m_k(j - 1).value) as i64;
        let l = ker_delta_lattice(c, j).unwrap();
        let x = element_with_s(&l, j, target);
        assert_eq!(
            x.s_number(j).unwrap(),
            Rational::from_integer(BigInt::from(target))
        );
        gens[j as usize] = Some(x);
    }
    // star-monomials over partitions of k into parts with a generator
    for k in 1..=CAP {
        let mut monomials: Vec<GradedPoly> = Vec::new();
        let mut stack: Vec<(u32, u32, GradedPoly)> = vec![(k, k, GradedPoly::one(CAP))];
        while let Some((remaining, max_part, acc)) = stack.pop() {
            if remaining == 0 {
                monomials.push(acc);
                continue;
            }
            for part in (1..=remaining.min(max_part)).rev() {
                if let Some(g) = &gens[part as usize] {
                    let next = w_multiply(&acc, g, &m, c).unwrap();
                    stack.push((remaining - part, part, next));
                }
            }
        }
        let spanned = LatticeBasis::from_rational_generators(k, CAP, &monomials).unwrap();
        let kernel = ker_delta_lattice(c, k).unwrap();
        assert_eq!(
            spanned, kernel,
            "generator monomials span the weight-{k} kernel"
        );
    }
}
