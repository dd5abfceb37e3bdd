//! The graded polynomial ring `ℚ[b1, …, bD]` under a weight cap.
//!
//! `bn` has weight `n` (homological degree `2n`); the weight of a monomial is
//! the weighted exponent sum, and every operation discards monomials above
//! the cap, so the ring is really the quotient by the ideal of high-weight
//! monomials. Coefficients are exact `BigRational`s.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Exact scalar type: arbitrary-precision rationals, always reduced, with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand for an integer rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for the fraction `n/d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

// ---------------------------------------------------------------------------
// Monomials
// ---------------------------------------------------------------------------

/// Exponent vector over the generators `b1 … bD`; `exps[k]` is the exponent
/// of `b(k+1)`. The vector length always equals the weight cap.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    /// The empty monomial (the constant 1).
    pub fn one(cap: u32) -> Self {
        Monomial {
            exps: vec![0; cap as usize],
        }
    }

    /// The generator `bn`.
    pub fn generator(n: u32, cap: u32) -> Result<Self> {
        if n == 0 || n > cap {
            return Err(Error::WeightOverCap { index: n, cap });
        }
        let mut m = Self::one(cap);
        m.exps[(n - 1) as usize] = 1;
        Ok(m)
    }

    /// Build from explicit exponents `(generator index, exponent)`.
    pub fn from_pairs(pairs: &[(u32, u32)], cap: u32) -> Result<Self> {
        let mut m = Self::one(cap);
        for &(n, e) in pairs {
            if n == 0 || n > cap {
                return Err(Error::WeightOverCap { index: n, cap });
            }
            m.exps[(n - 1) as usize] += e;
        }
        Ok(m)
    }

    pub fn cap(&self) -> u32 {
        self.exps.len() as u32
    }

    /// Weighted exponent sum `Σ n·e_n`.
    pub fn weight(&self) -> u32 {
        self.exps
            .iter()
            .enumerate()
            .map(|(i, &e)| (i as u32 + 1) * e)
            .sum()
    }

    /// Total exponent (number of generator factors with multiplicity).
    pub fn total_degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    /// Exponent of `bn`.
    pub fn exponent(&self, n: u32) -> u32 {
        self.exps.get((n - 1) as usize).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a + b)
            .collect();
        Monomial { exps }
    }

    /// Split off one generator factor: returns `(bn, rest)` for the highest
    /// generator dividing the monomial, or `None` for the constant monomial.
    pub fn split_factor(&self) -> Option<(u32, Monomial)> {
        let i = self.exps.iter().rposition(|&e| e > 0)?;
        let mut rest = self.clone();
        rest.exps[i] -= 1;
        Some((i as u32 + 1, rest))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "b{}", i + 1)?;
            if e > 1 {
                write!(f, "^{}", e)?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Polynomials
// ---------------------------------------------------------------------------

/// Element of `ℚ[b1 … bD]` truncated at the weight cap.
///
/// Invariants: no zero coefficients are stored, and every stored monomial has
/// weight at most `weight_cap`.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedPoly {
    terms: BTreeMap<Monomial, Rational>,
    weight_cap: u32,
}

impl GradedPoly {
    pub fn zero(cap: u32) -> Self {
        GradedPoly {
            terms: BTreeMap::new(),
            weight_cap: cap,
        }
    }

    pub fn one(cap: u32) -> Self {
        Self::constant(Rational::one(), cap)
    }

    pub fn constant(c: Rational, cap: u32) -> Self {
        let mut p = Self::zero(cap);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(cap), c);
        }
        p
    }

    pub fn from_int(n: i64, cap: u32) -> Self {
        Self::constant(rat(n), cap)
    }

    /// The generator `bn`.
    pub fn generator(n: u32, cap: u32) -> Result<Self> {
        Ok(Self::monomial(
            Monomial::generator(n, cap)?,
            Rational::one(),
        ))
    }

    /// A single term `c·m`.
    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let cap = m.cap();
        let mut p = Self::zero(cap);
        if !c.is_zero() && m.weight() <= cap {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(iter: I, cap: u32) -> Self {
        let mut p = Self::zero(cap);
        for (m, c) in iter {
            p.add_term(&m, &c);
        }
        p
    }

    pub fn weight_cap(&self) -> u32 {
        self.weight_cap
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of a monomial (zero if absent).
    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// The constant coefficient.
    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one(self.weight_cap))
    }

    fn add_term(&mut self, m: &Monomial, c: &Rational) {
        if c.is_zero() || m.weight() > self.weight_cap {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(m);
        }
    }

    fn check_cap(&self, other: &GradedPoly) -> Result<()> {
        if self.weight_cap != other.weight_cap {
            return Err(Error::CapMismatch {
                left: self.weight_cap,
                right: other.weight_cap,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &GradedPoly) -> Result<GradedPoly> {
        self.check_cap(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &GradedPoly) -> Result<GradedPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> GradedPoly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), -c.clone()))
            .collect();
        GradedPoly {
            terms,
            weight_cap: self.weight_cap,
        }
    }

    pub fn mul(&self, other: &GradedPoly) -> Result<GradedPoly> {
        self.check_cap(other)?;
        let mut out = GradedPoly::zero(self.weight_cap);
        for (m1, c1) in &self.terms {
            let w1 = m1.weight();
            for (m2, c2) in &other.terms {
                if w1 + m2.weight() > self.weight_cap {
                    continue;
                }
                out.add_term(&m1.mul(m2), &(c1 * c2));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> GradedPoly {
        if c.is_zero() {
            return GradedPoly::zero(self.weight_cap);
        }
        let terms = self.terms.iter().map(|(m, t)| (m.clone(), t * c)).collect();
        GradedPoly {
            terms,
            weight_cap: self.weight_cap,
        }
    }

    pub fn scale_int(&self, n: i64) -> GradedPoly {
        self.scale(&rat(n))
    }

    /// The weight shared by all monomials, if the polynomial is homogeneous.
    /// The zero polynomial is homogeneous of every weight and reports `None`.
    pub fn homogeneous_weight(&self) -> Option<u32> {
        let mut it = self.terms.keys();
        let w = it.next()?.weight();
        it.all(|m| m.weight() == w).then_some(w)
    }

    /// True if every monomial has weight `w` (vacuously true for zero).
    pub fn is_homogeneous_of(&self, w: u32) -> bool {
        self.terms.keys().all(|m| m.weight() == w)
    }

    /// The weight-`w` part of the polynomial.
    pub fn weight_part(&self, w: u32) -> GradedPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.weight() == w)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        GradedPoly {
            terms,
            weight_cap: self.weight_cap,
        }
    }

    /// True if all coefficients are integers.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.denom().is_one())
    }

    /// The s-number of a homogeneous polynomial of weight `k`: `(k+1)` times
    /// the coefficient of the linear monomial `b_k`. It is linear and kills
    /// every product of positive-weight elements.
    pub fn s_number(&self, k: u32) -> Result<Rational> {
        if k == 0 || k > self.weight_cap {
            return Err(Error::DegreeOutOfReach(k));
        }
        match self.homogeneous_weight() {
            None if self.is_zero() => Ok(Rational::zero()),
            None => Err(Error::NotHomogeneous),
            Some(w) if w != k => Err(Error::WeightMismatch {
                expected: k,
                found: w,
            }),
            Some(_) => {
                let lin = Monomial::generator(k, self.weight_cap)?;
                Ok(self.coeff(&lin) * rat(k as i64 + 1))
            }
        }
    }

    /// Quotient by the ideal of decomposables: keeps the constant and linear
    /// terms, drops every monomial with two or more generator factors.
    pub fn reduce_mod_decomposables(&self) -> GradedPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.total_degree() <= 1)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        GradedPoly {
            terms,
            weight_cap: self.weight_cap,
        }
    }

    /// The weight-0 (constant) part as a plain rational.
    pub fn constant_part(&self) -> Rational {
        self.constant_term()
    }
}

impl fmt::Debug for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Terms ordered by weight, then by descending exponent vector, so
        // e.g. `9*b1^2 - 8*b2`.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(m1, _), (m2, _)| {
            m1.weight()
                .cmp(&m2.weight())
                .then_with(|| m2.exps.cmp(&m1.exps))
        });
        for (idx, (m, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -(*c).clone() } else { (*c).clone() };
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{}", abs)?;
            } else if abs.is_one() {
                write!(f, "{}", m)?;
            } else {
                write!(f, "{}*{}", abs, m)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: u32) -> GradedPoly {
        GradedPoly::generator(n, 8).unwrap()
    }

    #[test]
    fn monomial_product_of_generators() {
        // b1 * b1 = b1^2, homogeneous of weight 2
        let p = b(1).mul(&b(1)).unwrap();
        assert_eq!(p.homogeneous_weight(), Some(2));
        assert_eq!(p.to_string(), "b1^2");
    }

    #[test]
    fn cancellation() {
        // (b1^2 - b2) + b2 = b1^2
        let v = b(1).mul(&b(1)).unwrap().sub(&b(2)).unwrap();
        let p = v.add(&b(2)).unwrap();
        assert_eq!(p, b(1).mul(&b(1)).unwrap());
    }

    #[test]
    fn linear_combination() {
        // 3*b1^2 - 8*b2
        let p = b(1)
            .mul(&b(1))
            .unwrap()
            .scale_int(3)
            .sub(&b(2).scale_int(8))
            .unwrap();
        assert_eq!(p.to_string(), "3*b1^2 - 8*b2");
        assert_eq!(p.coeff(&Monomial::generator(2, 8).unwrap()), rat(-8));
    }

    #[test]
    fn cap_mismatch_is_an_error() {
        let p = GradedPoly::generator(1, 8).unwrap();
        let q = GradedPoly::generator(1, 6).unwrap();
        assert!(matches!(p.add(&q), Err(Error::CapMismatch { .. })));
    }

    #[test]
    fn truncation_at_cap() {
        // b5 * b4 has weight 9 > 8 and vanishes in the quotient
        let p = b(5).mul(&b(4)).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn s_number_values() {
        // s2(b2) = 3, s2(b1^2) = 0, s2(9 b1^2 - 8 b2) = -24
        assert_eq!(b(2).s_number(2).unwrap(), rat(3));
        assert_eq!(b(1).mul(&b(1)).unwrap().s_number(2).unwrap(), rat(0));
        let p = b(1)
            .mul(&b(1))
            .unwrap()
            .scale_int(9)
            .sub(&b(2).scale_int(8))
            .unwrap();
        assert_eq!(p.s_number(2).unwrap(), rat(-24));
    }

    #[test]
    fn s_number_rejects_weight_mismatch() {
        assert!(matches!(
            b(2).s_number(3),
            Err(Error::WeightMismatch { .. })
        ));
        let mixed = b(1).add(&b(2)).unwrap();
        assert!(matches!(mixed.s_number(2), Err(Error::NotHomogeneous)));
    }

    #[test]
    fn reduce_mod_decomposables_examples() {
        let v = b(1).mul(&b(1)).unwrap().sub(&b(2)).unwrap();
        assert_eq!(v.reduce_mod_decomposables(), b(2).neg());
        assert_eq!(b(1).reduce_mod_decomposables(), b(1));
        let c = GradedPoly::from_int(5, 8);
        assert_eq!(c.reduce_mod_decomposables(), c);
    }

    #[test]
    fn reduce_is_idempotent_and_kills_positive_products() {
        let p = b(1)
            .mul(&b(2))
            .unwrap()
            .add(&b(3))
            .unwrap()
            .add(&GradedPoly::from_int(7, 8))
            .unwrap();
        let r = p.reduce_mod_decomposables();
        assert_eq!(r.reduce_mod_decomposables(), r);
        // Product of two positive-weight elements reduces to zero.
        let q = b(2).add(&b(1).mul(&b(1)).unwrap()).unwrap();
        let prod = p.sub(&GradedPoly::from_int(7, 8)).unwrap().mul(&q).unwrap();
        assert!(prod.reduce_mod_decomposables().is_zero());
    }

    #[test]
    fn rationals_stay_reduced_with_positive_denominator() {
        use num_traits::Signed;
        let q = ratio(2, 4);
        assert_eq!(q, ratio(1, 2));
        assert_eq!(*q.denom(), num_bigint::BigInt::from(2));
        let r = ratio(1, -2);
        assert!(r.denom().is_positive());
        assert_eq!(r, ratio(-1, 2));
    }

    #[test]
    fn display_roundtrip_shapes() {
        assert_eq!(GradedPoly::zero(8).to_string(), "0");
        assert_eq!(GradedPoly::from_int(-3, 8).to_string(), "-3");
        let half = GradedPoly::monomial(Monomial::generator(3, 8).unwrap(), ratio(-3, 2));
        assert_eq!(half.to_string(), "-3/2*b3");
    }
}
