//! Truncated formal power series in up to three variables over an arbitrary
//! commutative coefficient ring.
//!
//! The ring is passed as a value implementing [`CoeffRing`] so the same
//! series code runs over the plain polynomial ring, over the quadratic
//! extension `Γ`, and over `W` with a twisted multiplication. Series carry
//! their truncation order; terms above it are discarded by every operation,
//! so all identities hold in the truncated quotient.
//!
//! A series may carry a homogeneity grade. For the cohomological grade 2
//! (`grade_shift == 1`) the coefficient of a total-degree-`d` monomial is
//! homogeneous of weight `d - 1`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed};

use crate::poly::{GradedPoly, Rational};
use crate::{Error, Result};

/// Exponent vector for up to three series variables.
pub type Expo = [u8; 3];

fn expo_total(e: &Expo) -> u32 {
    e.iter().map(|&x| x as u32).sum()
}

// ---------------------------------------------------------------------------
// Coefficient rings
// ---------------------------------------------------------------------------

/// A commutative ring with a rational-module structure and a homogeneity
/// probe, passed by value to the series operations.
pub trait CoeffRing: Clone {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale_rat(&self, a: &Self::Elem, c: &Rational) -> Self::Elem;

    /// Is `a` homogeneous of weight `w`? Negative `w` forces `a == 0`.
    fn is_homogeneous_of(&self, a: &Self::Elem, w: i64) -> bool;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
}

/// The plain graded polynomial ring at a fixed weight cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PolyRing {
    pub cap: u32,
}

impl CoeffRing for PolyRing {
    type Elem = GradedPoly;

    fn zero(&self) -> GradedPoly {
        GradedPoly::zero(self.cap)
    }
    fn one(&self) -> GradedPoly {
        GradedPoly::one(self.cap)
    }
    fn is_zero(&self, a: &GradedPoly) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &GradedPoly, b: &GradedPoly) -> GradedPoly {
        a.add(b).expect("ring elements share the cap")
    }
    fn neg(&self, a: &GradedPoly) -> GradedPoly {
        a.neg()
    }
    fn mul(&self, a: &GradedPoly, b: &GradedPoly) -> GradedPoly {
        a.mul(b).expect("ring elements share the cap")
    }
    fn scale_rat(&self, a: &GradedPoly, c: &Rational) -> GradedPoly {
        a.scale(c)
    }
    fn is_homogeneous_of(&self, a: &GradedPoly, w: i64) -> bool {
        if w < 0 {
            a.is_zero()
        } else {
            a.is_homogeneous_of(w as u32)
        }
    }
}

// ---------------------------------------------------------------------------
// Series
// ---------------------------------------------------------------------------

/// A truncated power series over `R` in `nvars` variables.
#[derive(Clone)]
pub struct Series<R: CoeffRing> {
    ring: R,
    nvars: usize,
    order: u32,
    grade_shift: Option<i64>,
    terms: BTreeMap<Expo, R::Elem>,
}

/// One-variable series.
pub type Series1<R> = Series<R>;
/// Two-variable series.
pub type Series2<R> = Series<R>;

impl<R: CoeffRing> PartialEq for Series<R> {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.order == other.order && self.terms == other.terms
    }
}

impl<R: CoeffRing> fmt::Debug for Series<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series(nvars={}, order={}, ", self.nvars, self.order)?;
        f.debug_map().entries(self.terms.iter()).finish()?;
        write!(f, ")")
    }
}

impl<R: CoeffRing> Series<R> {
    pub fn zero(ring: R, nvars: usize, order: u32) -> Self {
        assert!((1..=3).contains(&nvars));
        Series {
            ring,
            nvars,
            order,
            grade_shift: None,
            terms: BTreeMap::new(),
        }
    }

    /// The variable `x_idx` as a series, graded with shift 1 (grade 2).
    pub fn var(ring: R, idx: usize, nvars: usize, order: u32) -> Self {
        let mut s = Self::zero(ring, nvars, order);
        let one = s.ring.one();
        let mut e: Expo = [0; 3];
        e[idx] = 1;
        s.terms.insert(e, one);
        s.grade_shift = Some(1);
        s
    }

    /// A constant series.
    pub fn constant(ring: R, value: R::Elem, nvars: usize, order: u32) -> Self {
        let mut s = Self::zero(ring, nvars, order);
        s.insert([0; 3], value);
        s
    }

    pub fn with_grade_shift(mut self, shift: Option<i64>) -> Self {
        self.grade_shift = shift;
        self
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn grade_shift(&self) -> Option<i64> {
        self.grade_shift
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Expo, &R::Elem)> {
        self.terms.iter()
    }

    fn insert(&mut self, e: Expo, v: R::Elem) {
        if expo_total(&e) > self.order || self.ring.is_zero(&v) {
            return;
        }
        self.terms.insert(e, v);
    }

    fn accumulate(&mut self, e: Expo, v: &R::Elem) {
        if expo_total(&e) > self.order || self.ring.is_zero(v) {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(cur) => {
                *cur = self.ring.add(cur, v);
                if self.ring.is_zero(cur) {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, v.clone());
            }
        }
    }

    pub fn coeff(&self, e: Expo) -> R::Elem {
        self.terms
            .get(&e)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    /// Coefficient of `u^i` in a 1-variable series.
    pub fn coeff1(&self, i: u32) -> R::Elem {
        self.coeff([i as u8, 0, 0])
    }

    /// Coefficient of `u^i v^j` in a 2-variable series.
    pub fn coeff2(&self, i: u32, j: u32) -> R::Elem {
        self.coeff([i as u8, j as u8, 0])
    }

    pub fn set_coeff1(&mut self, i: u32, v: R::Elem) {
        self.set_coeff([i as u8, 0, 0], v);
    }

    pub fn set_coeff2(&mut self, i: u32, j: u32, v: R::Elem) {
        self.set_coeff([i as u8, j as u8, 0], v);
    }

    pub fn set_coeff(&mut self, e: Expo, v: R::Elem) {
        self.terms.remove(&e);
        self.insert(e, v);
    }

    /// Add `v` into the coefficient at `e`.
    pub fn add_coeff(&mut self, e: Expo, v: &R::Elem) {
        self.accumulate(e, v);
    }

    fn check_compat(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        assert_eq!(self.nvars, other.nvars, "series variable counts differ");
        Ok(())
    }

    fn joined_grade(&self, other: &Self, combine: impl Fn(i64, i64) -> i64) -> Option<i64> {
        match (self.grade_shift, other.grade_shift) {
            (Some(a), Some(b)) => Some(combine(a, b)),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compat(other)?;
        let mut out = self.clone();
        out.grade_shift = if self.is_zero() {
            other.grade_shift
        } else if other.is_zero() || self.grade_shift == other.grade_shift {
            self.grade_shift
        } else {
            None
        };
        for (e, v) in &other.terms {
            out.accumulate(*e, v);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = self.ring.neg(v);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compat(other)?;
        let mut out = Series::zero(self.ring.clone(), self.nvars, self.order);
        out.grade_shift = self.joined_grade(other, |a, b| a + b);
        for (e1, v1) in &self.terms {
            let d1 = expo_total(e1);
            for (e2, v2) in &other.terms {
                if d1 + expo_total(e2) > self.order {
                    continue;
                }
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]];
                out.accumulate(e, &self.ring.mul(v1, v2));
            }
        }
        Ok(out)
    }

    pub fn scale_elem(&self, c: &R::Elem) -> Self {
        let mut out = Series::zero(self.ring.clone(), self.nvars, self.order);
        for (e, v) in &self.terms {
            out.accumulate(*e, &self.ring.mul(v, c));
        }
        out
    }

    pub fn scale_rat(&self, c: &Rational) -> Self {
        let mut out = Series::zero(self.ring.clone(), self.nvars, self.order);
        out.grade_shift = self.grade_shift;
        for (e, v) in &self.terms {
            out.accumulate(*e, &self.ring.scale_rat(v, c));
        }
        out
    }

    /// Truncate to a lower order.
    pub fn truncated(&self, order: u32) -> Self {
        let mut out = self.clone();
        out.order = order.min(self.order);
        out.terms.retain(|e, _| expo_total(e) <= order);
        out
    }

    /// Substitute `inner` (which must have zero constant term) into a
    /// one-variable `self`, by Horner evaluation.
    pub fn substitute(&self, inner: &Self) -> Result<Self> {
        assert_eq!(
            self.nvars, 1,
            "substitution outer series must be 1-variable"
        );
        if self.order != inner.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: inner.order,
            });
        }
        if !self.ring.is_zero(&inner.coeff([0, 0, 0])) {
            return Err(Error::ConstantTerm);
        }
        let const_part = self.coeff([0, 0, 0]);
        // Horner: sum_{i>=1} c_i x^i = x*(c_1 + x*(c_2 + ...)).
        let mut acc = Series::zero(self.ring.clone(), inner.nvars, inner.order);
        for i in (1..=self.order).rev() {
            acc = acc.mul(inner)?;
            let c = self.coeff1(i);
            if !self.ring.is_zero(&c) {
                let cs = Series::constant(self.ring.clone(), c, inner.nvars, inner.order);
                acc = acc.add(&cs)?;
            }
        }
        acc = acc.mul(inner)?;
        if !self.ring.is_zero(&const_part) {
            let cs = Series::constant(self.ring.clone(), const_part, inner.nvars, inner.order);
            acc = acc.add(&cs)?;
        }
        acc.grade_shift = match (self.grade_shift, inner.grade_shift) {
            (Some(s), Some(1)) => Some(s),
            _ => None,
        };
        Ok(acc)
    }

    /// Evaluate a two-variable `self` at the pair `(x, y)`; both arguments
    /// must have zero constant term and live in the same series algebra.
    pub fn eval2(&self, x: &Self, y: &Self) -> Result<Self> {
        assert_eq!(self.nvars, 2, "eval2 outer series must be 2-variable");
        x.check_compat(y)?;
        if !self.ring.is_zero(&x.coeff([0, 0, 0])) || !self.ring.is_zero(&y.coeff([0, 0, 0])) {
            return Err(Error::ConstantTerm);
        }
        let order = x.order;
        let one = Series::constant(self.ring.clone(), self.ring.one(), x.nvars, order);
        let mut xp: Vec<Series<R>> = vec![one.clone()];
        let mut yp: Vec<Series<R>> = vec![one];
        for i in 1..=order as usize {
            xp.push(xp[i - 1].mul(x)?);
            yp.push(yp[i - 1].mul(y)?);
        }
        let mut out = Series::zero(self.ring.clone(), x.nvars, order);
        for (e, c) in &self.terms {
            let (i, j) = (e[0] as usize, e[1] as usize);
            let term = xp[i].mul(&yp[j])?.scale_elem(c);
            out = out.add(&term)?;
        }
        out.grade_shift = match (self.grade_shift, x.grade_shift, y.grade_shift) {
            (Some(s), Some(1), Some(1)) => Some(s),
            _ => None,
        };
        Ok(out)
    }

    /// Compositional inverse of a one-variable series `u + higher`, computed
    /// by a degree-by-degree triangular solve.
    pub fn compositional_inverse(&self) -> Result<Self> {
        assert_eq!(self.nvars, 1);
        if !self.ring.is_zero(&self.coeff1(0)) {
            return Err(Error::ConstantTerm);
        }
        if self.coeff1(1) != self.ring.one() {
            return Err(Error::LeadingCoefficient);
        }
        let mut g = Series::var(self.ring.clone(), 0, 1, self.order);
        g.grade_shift = self.grade_shift;
        for d in 2..=self.order {
            let err = self.substitute(&g)?.coeff1(d);
            if !self.ring.is_zero(&err) {
                let cur = g.coeff1(d);
                g.set_coeff1(d, self.ring.sub(&cur, &err));
            }
        }
        Ok(g)
    }

    /// `self^k` by repeated multiplication (`k = 0` gives the constant 1).
    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut out = Series::constant(self.ring.clone(), self.ring.one(), self.nvars, self.order);
        out.grade_shift = self.grade_shift.map(|_| 0).or(Some(0));
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Reinterpret a one-variable series as a series in variable `idx` of an
    /// `nvars`-variable algebra.
    pub fn lift_to_var(&self, idx: usize, nvars: usize) -> Self {
        assert_eq!(self.nvars, 1);
        assert!(idx < nvars && nvars <= 3);
        let mut out = Series::zero(self.ring.clone(), nvars, self.order);
        out.grade_shift = self.grade_shift;
        for (e, v) in &self.terms {
            let mut ne: Expo = [0; 3];
            ne[idx] = e[0];
            out.terms.insert(ne, v.clone());
        }
        out
    }

    /// Swap the first two variables of a 2-variable series.
    pub fn swap_vars(&self) -> Self {
        assert_eq!(self.nvars, 2);
        let mut out = Series::zero(self.ring.clone(), 2, self.order);
        out.grade_shift = self.grade_shift;
        for (e, v) in &self.terms {
            out.terms.insert([e[1], e[0], e[2]], v.clone());
        }
        out
    }

    /// Map the coefficients into another ring.
    pub fn map_coeffs<S, F>(&self, ring: S, f: F) -> Series<S>
    where
        S: CoeffRing,
        F: Fn(&R::Elem) -> S::Elem,
    {
        let mut out = Series::zero(ring, self.nvars, self.order);
        out.grade_shift = self.grade_shift;
        for (e, v) in &self.terms {
            let w = f(v);
            if !out.ring.is_zero(&w) {
                out.terms.insert(*e, w);
            }
        }
        out
    }

    /// Check the grade contract: the coefficient of each total-degree-`d`
    /// monomial is homogeneous of weight `d - shift`.
    pub fn grade_is_consistent(&self) -> bool {
        let Some(shift) = self.grade_shift else {
            return true;
        };
        self.terms
            .iter()
            .all(|(e, v)| self.ring.is_homogeneous_of(v, expo_total(e) as i64 - shift))
    }
}

// ---------------------------------------------------------------------------
// Display / CSV for polynomial-coefficient series
// ---------------------------------------------------------------------------

const VAR_NAMES: [&str; 3] = ["u", "v", "w"];

impl fmt::Display for Series<PolyRing> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut order: Vec<_> = self.terms.iter().collect();
        order.sort_by_key(|(e, _)| (expo_total(e), **e));
        let mut first = true;
        for (e, c) in order {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = (0..self.nvars)
                .filter(|&i| e[i] > 0)
                .map(|i| {
                    if e[i] == 1 {
                        VAR_NAMES[i].to_string()
                    } else {
                        format!("{}^{}", VAR_NAMES[i], e[i])
                    }
                })
                .collect();
            let is_plain_one = c.num_terms() == 1 && {
                let (m, v) = c.terms().next().unwrap();
                m.is_one() && v.is_one() && v.is_positive()
            };
            if mono.is_empty() {
                write!(f, "({})", c)?;
            } else if is_plain_one {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "({})*{}", c, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Series<PolyRing> {
    /// CSV rows `i[,j],coefficient`, ordered by total degree.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if self.nvars == 1 {
            out.push_str("i,coefficient\n");
        } else {
            out.push_str("i,j,coefficient\n");
        }
        let mut order: Vec<_> = self.terms.iter().collect();
        order.sort_by_key(|(e, _)| (expo_total(e), **e));
        for (e, c) in order {
            if self.nvars == 1 {
                out.push_str(&format!("{},{}\n", e[0], c));
            } else {
                out.push_str(&format!("{},{},{}\n", e[0], e[1], c));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn ring() -> PolyRing {
        PolyRing { cap: 8 }
    }

    fn u(order: u32) -> Series<PolyRing> {
        Series::var(ring(), 0, 1, order)
    }

    fn b(n: u32) -> GradedPoly {
        GradedPoly::generator(n, 8).unwrap()
    }

    #[test]
    fn square_of_u() {
        let s = u(5).mul(&u(5)).unwrap();
        assert_eq!(s.coeff1(2), GradedPoly::one(8));
        assert_eq!(s.coeff1(1), GradedPoly::zero(8));
    }

    #[test]
    fn multiply_with_coefficient() {
        // (u + b1 u^2) * u = u^2 + b1 u^3
        let mut s = u(5);
        s.set_coeff1(2, b(1));
        let p = s.mul(&u(5)).unwrap();
        assert_eq!(p.coeff1(2), GradedPoly::one(8));
        assert_eq!(p.coeff1(3), b(1));
        assert!(p.grade_is_consistent());
    }

    #[test]
    fn additive_inverse() {
        let mut s = u(6);
        s.set_coeff1(3, b(2));
        assert!(s.add(&s.neg()).unwrap().is_zero());
    }

    #[test]
    fn order_mismatch_is_an_error() {
        assert!(matches!(u(5).add(&u(6)), Err(Error::OrderMismatch { .. })));
    }

    #[test]
    fn substitution_binomial() {
        // outer = u^2, inner = u + v -> u^2 + 2uv + v^2
        let mut outer = Series::zero(ring(), 1, 6);
        outer.set_coeff1(2, GradedPoly::one(8));
        let uv = Series::var(ring(), 0, 2, 6)
            .add(&Series::var(ring(), 1, 2, 6))
            .unwrap();
        let s = outer.substitute(&uv).unwrap();
        assert_eq!(s.coeff2(2, 0), GradedPoly::one(8));
        assert_eq!(s.coeff2(1, 1), GradedPoly::from_int(2, 8));
        assert_eq!(s.coeff2(0, 2), GradedPoly::one(8));
    }

    #[test]
    fn substitution_identity() {
        let mut inner = u(6);
        inner.set_coeff1(4, b(3));
        assert_eq!(u(6).substitute(&inner).unwrap(), inner);
        // gamma(u) = u - b1 u^2 composed with u is gamma itself
        let mut gamma = u(6);
        gamma.set_coeff1(2, b(1).neg());
        assert_eq!(gamma.substitute(&u(6)).unwrap(), gamma);
    }

    #[test]
    fn substitution_rejects_constant_term() {
        let one = Series::constant(ring(), GradedPoly::one(8), 1, 6);
        let inner = u(6).add(&one).unwrap();
        assert!(matches!(u(6).substitute(&inner), Err(Error::ConstantTerm)));
    }

    #[test]
    fn inverse_of_identity() {
        assert_eq!(u(8).compositional_inverse().unwrap(), u(8));
    }

    #[test]
    fn inverse_of_quadratic_is_catalan() {
        // g(u + c u^2) = u  =>  g = u - c u^2 + 2c^2 u^3 - 5c^3 u^4 + 14c^4 u^5
        let c = b(1);
        let mut s = u(5);
        s.set_coeff1(2, c.clone());
        let g = s.compositional_inverse().unwrap();
        let c2 = c.mul(&c).unwrap();
        let c3 = c2.mul(&c).unwrap();
        let c4 = c3.mul(&c).unwrap();
        assert_eq!(g.coeff1(2), c.neg());
        assert_eq!(g.coeff1(3), c2.scale_int(2));
        assert_eq!(g.coeff1(4), c3.scale_int(-5));
        assert_eq!(g.coeff1(5), c4.scale_int(14));
        // Both round trips close exactly.
        assert_eq!(s.substitute(&g).unwrap(), u(5));
        assert_eq!(g.substitute(&s).unwrap(), u(5));
    }

    #[test]
    fn inverse_requires_unit_leading_coefficient() {
        let mut s = Series::zero(ring(), 1, 5);
        s.set_coeff1(1, GradedPoly::from_int(2, 8));
        assert!(matches!(
            s.compositional_inverse(),
            Err(Error::LeadingCoefficient)
        ));
    }

    #[test]
    fn truncation_coherence() {
        // computing at order 8 then truncating to 5 = computing at order 5
        let mut s = u(8);
        s.set_coeff1(2, b(1));
        s.set_coeff1(3, b(2));
        let t = s.truncated(5);
        let prod8 = s.mul(&s).unwrap().truncated(5);
        let prod5 = t.mul(&t).unwrap();
        assert_eq!(prod8, prod5);
        let inv8 = s.compositional_inverse().unwrap().truncated(5);
        let inv5 = t.compositional_inverse().unwrap();
        assert_eq!(inv8, inv5);
    }

    #[test]
    fn display_format() {
        let mut s = u(5);
        s.set_coeff1(2, b(1).neg());
        assert_eq!(s.to_string(), "u + (-b1)*u^2");
        assert_eq!(u(5).scale_rat(&rat(3)).to_string(), "(3)*u");
    }
}
