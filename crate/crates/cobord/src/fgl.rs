//! The universal formal group law of complex cobordism.
//!
//! The context is built from the logarithm `log(u) = Σ bn u^{n+1}/(n+1)`
//! (with `b0 = 1`): `exp` is its compositional inverse, the group law is
//! `F(u,v) = exp(log u + log v)`, and the inverse series is
//! `ū = exp(-log u)`. This presentation reproduces the pinned coefficient
//! values `α11 = -b1` and `α12 = b1² - b2`, which are asserted when the
//! context is built, together with the inductive definition of the power
//! series `[k](u)` for small `k`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;

use crate::lattice::LatticeBasis;
use crate::ops::SuOp;
use crate::poly::{rat, GradedPoly, Monomial, Rational};
use crate::series::{PolyRing, Series};
use crate::{Error, Result};

/// Binomial coefficient as a big integer.
pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut num = BigInt::from(1);
    let mut den = BigInt::from(1);
    for i in 0..k {
        num *= n - i;
        den *= i + 1;
    }
    num / den
}

/// Immutable container for the formal group law and every table derived
/// from it. Shareable across threads; the lazy caches are behind mutexes and
/// observably pure.
pub struct FglContext {
    order: u32,
    cap: u32,
    log: Series<PolyRing>,
    exp: Series<PolyRing>,
    fgl: Series<PolyRing>,
    inv: Series<PolyRing>,
    /// `F` at the extended order `2·cap`, used for the composition structure
    /// constants `α^{(k)}_{pq}` whose indices may exceed the series order
    /// while their weight `p+q-k` stays under the cap.
    fgl_ext: Series<PolyRing>,
    /// `F^k` at the extended order, filled on demand.
    alpha_ext: Mutex<Vec<Option<Arc<Series<PolyRing>>>>>,
    /// `([1-m](u))^k u^m` for `k, m = 0..=cap`.
    betas: Vec<Vec<Series<PolyRing>>>,
    /// `∂_k [CP^n]` for `k = 0..=cap`, `n = 1..=cap`.
    partial_gen: Vec<Vec<GradedPoly>>,
    partial_memo: Mutex<HashMap<(u32, Monomial), GradedPoly>>,
    mu_lattice_memo: Mutex<HashMap<u32, LatticeBasis>>,
    ker_delta_memo: Mutex<HashMap<u32, LatticeBasis>>,
    delta_op_memo: Mutex<HashMap<(u32, u32), SuOp>>,
}

impl FglContext {
    /// Build the context at the given truncation order and weight cap.
    /// Requires `order <= cap + 2` so the series layer never needs a
    /// coefficient beyond the cap.
    pub fn build(order: u32, cap: u32) -> Result<FglContext> {
        if !(2..=100).contains(&cap) {
            return Err(Error::CapOutOfRange(cap));
        }
        if order > cap + 2 {
            return Err(Error::OrderBeyondCap { order, cap });
        }
        let ring = PolyRing { cap };
        let ext_order = (2 * cap).max(order);

        let log_at = |n_ord: u32| -> Result<Series<PolyRing>> {
            let mut log = Series::zero(ring, 1, n_ord).with_grade_shift(Some(1));
            for n in 0..n_ord {
                let coeff = if n == 0 {
                    GradedPoly::one(cap)
                } else if n <= cap {
                    GradedPoly::generator(n, cap)?
                } else {
                    GradedPoly::zero(cap)
                };
                log.set_coeff1(
                    n + 1,
                    coeff.scale(&Rational::new(1.into(), (n as i64 + 1).into())),
                );
            }
            Ok(log)
        };

        let log = log_at(order)?;
        let exp = log.compositional_inverse()?;
        let inv = exp.substitute(&log.neg())?;
        let log2 = log.lift_to_var(0, 2).add(&log.lift_to_var(1, 2))?;
        let fgl = exp.substitute(&log2)?;

        let log_ext = log_at(ext_order)?;
        let exp_ext = log_ext.compositional_inverse()?;
        let log2_ext = log_ext.lift_to_var(0, 2).add(&log_ext.lift_to_var(1, 2))?;
        let fgl_ext = exp_ext.substitute(&log2_ext)?;

        let mut alpha_ext: Vec<Option<Arc<Series<PolyRing>>>> = vec![None; ext_order as usize + 1];
        alpha_ext[0] = Some(Arc::new(Series::constant(
            ring,
            GradedPoly::one(cap),
            2,
            ext_order,
        )));
        alpha_ext[1] = Some(Arc::new(fgl_ext.clone()));

        // Power series [j](u) for the beta tables and the generator action.
        let k_pow = |k: i64| -> Result<Series<PolyRing>> {
            let scaled = log.scale_rat(&rat(k));
            exp.substitute(&scaled)
        };

        let mut betas = Vec::with_capacity(cap as usize + 1);
        for k in 0..=cap {
            let mut row = Vec::with_capacity(cap as usize + 1);
            for m in 0..=cap {
                let base = k_pow(1 - m as i64)?;
                let mut s = base.pow(k)?;
                for _ in 0..m {
                    s = s.mul(&Series::var(ring, 0, 1, order))?;
                }
                row.push(s);
            }
            betas.push(row);
        }

        let mut partial_gen: Vec<Vec<GradedPoly>> = Vec::with_capacity(cap as usize + 1);
        for k in 0..=cap {
            let mut row = Vec::with_capacity(cap as usize);
            for n in 1..=cap {
                let powers = k_pow(n as i64 + 1)?.pow(k)?;
                let mut acc = GradedPoly::zero(cap);
                for j in k..=n {
                    let c = powers.coeff1(j);
                    if c.is_zero() {
                        continue;
                    }
                    let rest = if j == n {
                        GradedPoly::one(cap)
                    } else {
                        GradedPoly::generator(n - j, cap)?
                    };
                    acc = acc.add(&c.mul(&rest)?)?;
                }
                row.push(acc);
            }
            partial_gen.push(row);
        }

        let ctx = FglContext {
            order,
            cap,
            log,
            exp,
            fgl,
            inv,
            fgl_ext,
            alpha_ext: Mutex::new(alpha_ext),
            betas,
            partial_gen,
            partial_memo: Mutex::new(HashMap::new()),
            mu_lattice_memo: Mutex::new(HashMap::new()),
            ker_delta_memo: Mutex::new(HashMap::new()),
            delta_op_memo: Mutex::new(HashMap::new()),
        };
        ctx.self_check()?;
        Ok(ctx)
    }

    /// Cheap invariants asserted on every build: the pinned low coefficients
    /// and the inductive definition of the power series.
    fn self_check(&self) -> Result<()> {
        let cap = self.cap;
        let b1 = GradedPoly::generator(1, cap)?;
        assert_eq!(self.alpha(1, 1), b1.neg(), "alpha_11 must equal -b1");
        if cap >= 2 {
            let v = b1.mul(&b1)?.sub(&GradedPoly::generator(2, cap)?)?;
            assert_eq!(self.alpha(1, 2), v, "alpha_12 must equal b1^2 - b2");
        }
        // F(u, 0) = u.
        let u = self.var1();
        let zero = Series::zero(self.ring(), 1, self.order);
        assert_eq!(
            self.fgl.eval2(&u, &zero)?,
            u,
            "the formal group law must be unital"
        );
        // [k](u) against the inductive definition, both directions.
        let mut inductive = Series::zero(self.ring(), 1, self.order);
        for k in 0..=5i64 {
            assert_eq!(self.k_power(k)?, inductive, "[{k}](u) induction");
            inductive = self.fgl.eval2(&inductive, &u)?;
        }
        let mut inductive = Series::zero(self.ring(), 1, self.order);
        for k in 0..=5i64 {
            assert_eq!(self.k_power(-k)?, inductive, "[-{k}](u) induction");
            inductive = self.fgl.eval2(&inductive, &self.inv)?;
            // and [-k](u) is [k] evaluated at the inverse series
            if k > 0 {
                assert_eq!(
                    self.k_power(-k)?,
                    self.k_power(k)?.substitute(&self.inv)?,
                    "[-{k}](u) = [{k}](ubar)"
                );
            }
        }
        // grade bookkeeping: every derived series is grade-2 consistent
        for s in [&self.log, &self.exp, &self.inv, &self.fgl] {
            assert!(s.grade_is_consistent(), "series lost its grading");
        }
        Ok(())
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn weight_cap(&self) -> u32 {
        self.cap
    }

    pub fn ring(&self) -> PolyRing {
        PolyRing { cap: self.cap }
    }

    /// The canonical orientation `u` as a series.
    pub fn var1(&self) -> Series<PolyRing> {
        Series::var(self.ring(), 0, 1, self.order)
    }

    pub fn log(&self) -> &Series<PolyRing> {
        &self.log
    }

    pub fn exp(&self) -> &Series<PolyRing> {
        &self.exp
    }

    /// The formal group law `F(u, v)`.
    pub fn fgl(&self) -> &Series<PolyRing> {
        &self.fgl
    }

    /// The inverse series `ū` with `F(u, ū) = 0`.
    pub fn inverse_series(&self) -> &Series<PolyRing> {
        &self.inv
    }

    /// Coefficient `α_ij` of the formal group law (valid for `i + j` up to
    /// twice the weight cap).
    pub fn alpha(&self, i: u32, j: u32) -> GradedPoly {
        self.fgl_ext.coeff2(i, j)
    }

    /// The `k`-th power series `[k](u) = exp(k·log u)`.
    pub fn k_power(&self, k: i64) -> Result<Series<PolyRing>> {
        let scaled = self.log.scale_rat(&rat(k));
        self.exp.substitute(&scaled)
    }

    /// `F^k` at the extended order, with the correct coefficients
    /// `α^{(k)}_{ij}` for every index pair whose weight fits under the cap.
    pub fn alpha_power_ext(&self, k: u32) -> Result<Arc<Series<PolyRing>>> {
        let mut table = self.alpha_ext.lock().unwrap();
        if k as usize >= table.len() {
            return Err(Error::DegreeOutOfReach(k));
        }
        let mut last_known = k as usize;
        while table[last_known].is_none() {
            last_known -= 1;
        }
        for i in last_known + 1..=k as usize {
            let next = table[i - 1]
                .as_ref()
                .unwrap()
                .mul(&self.fgl_ext)
                .expect("orders agree");
            table[i] = Some(Arc::new(next));
        }
        Ok(table[k as usize].as_ref().unwrap().clone())
    }

    /// `F^k` truncated to the context order, as exposed by the CLI tables.
    pub fn alpha_power(&self, k: u32) -> Result<Series<PolyRing>> {
        if k > self.order {
            return Err(Error::DegreeOutOfReach(k));
        }
        Ok(self.alpha_power_ext(k)?.truncated(self.order))
    }

    /// Structure-constant coefficient `α^{(k)}_ij`.
    pub fn alpha_k(&self, k: u32, i: u32, j: u32) -> GradedPoly {
        self.alpha_power_ext(k)
            .expect("structure constants within table range")
            .coeff2(i, j)
    }

    /// The series `([1-m](u))^k u^m = Σ β^{(k,m)}_i u^i`.
    pub fn beta_series(&self, k: u32, m: u32) -> Result<&Series<PolyRing>> {
        self.betas
            .get(k as usize)
            .and_then(|row| row.get(m as usize))
            .ok_or(Error::DegreeOutOfReach(k.max(m)))
    }

    /// Coefficient `β^{(k,m)}_i`.
    pub fn beta(&self, k: u32, m: u32, i: u32) -> Result<GradedPoly> {
        Ok(self.beta_series(k, m)?.coeff1(i))
    }

    /// `∂_k` evaluated on the generator `[CP^n]`: the coefficients of
    /// `([n+1](x))^k = Σ c_j x^j` pair with the dual cells, giving
    /// `Σ_{j<=n} c_j b_{n-j}`.
    pub fn partial_on_generator(&self, k: u32, n: u32) -> Result<GradedPoly> {
        if n == 0 || n > self.cap {
            return Err(Error::WeightOverCap {
                index: n,
                cap: self.cap,
            });
        }
        if k > self.cap {
            return Ok(GradedPoly::zero(self.cap));
        }
        Ok(self.partial_gen[k as usize][(n - 1) as usize].clone())
    }

    pub(crate) fn partial_memo(&self) -> &Mutex<HashMap<(u32, Monomial), GradedPoly>> {
        &self.partial_memo
    }

    pub(crate) fn delta_op_memo(&self) -> &Mutex<HashMap<(u32, u32), SuOp>> {
        &self.delta_op_memo
    }

    /// The integral lattice `MU_{2w}` inside weight `w`, spanned by all
    /// monomials in the group-law coefficients `α_ij` of total weight `w`.
    pub fn mu_lattice(&self, weight: u32) -> Result<LatticeBasis> {
        if weight > self.cap {
            return Err(Error::DegreeOutOfReach(weight));
        }
        if let Some(l) = self.mu_lattice_memo.lock().unwrap().get(&weight) {
            return Ok(l.clone());
        }
        // Single alpha factors of each weight (α_ij with i+j-1 = w, i <= j).
        let mut factors: Vec<Vec<GradedPoly>> = vec![Vec::new(); self.cap as usize + 1];
        for w in 1..=self.cap {
            for i in 1..=w.div_ceil(2) {
                let j = w + 1 - i;
                factors[w as usize].push(self.alpha(i, j));
            }
        }
        // All products over partitions of `weight`.
        let mut gens: Vec<GradedPoly> = Vec::new();
        fn rec(
            remaining: u32,
            max_part: u32,
            acc: &GradedPoly,
            factors: &[Vec<GradedPoly>],
            gens: &mut Vec<GradedPoly>,
        ) {
            if remaining == 0 {
                gens.push(acc.clone());
                return;
            }
            for part in (1..=remaining.min(max_part)).rev() {
                for f in &factors[part as usize] {
                    let next = acc.mul(f).expect("same cap");
                    rec(remaining - part, part, &next, factors, gens);
                }
            }
        }
        rec(
            weight,
            weight,
            &GradedPoly::one(self.cap),
            &factors,
            &mut gens,
        );
        let lattice = LatticeBasis::from_rational_generators(weight, self.cap, &gens)?;
        self.mu_lattice_memo
            .lock()
            .unwrap()
            .insert(weight, lattice.clone());
        Ok(lattice)
    }

    pub(crate) fn ker_delta_memo(&self) -> &Mutex<HashMap<u32, LatticeBasis>> {
        &self.ker_delta_memo
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::OnceLock;

    fn ctx() -> &'static FglContext {
        static CTX: OnceLock<FglContext> = OnceLock::new();
        CTX.get_or_init(|| FglContext::build(10, 8).unwrap())
    }

    fn b(n: u32) -> GradedPoly {
        GradedPoly::generator(n, 8).unwrap()
    }

    #[test]
    fn pinned_low_coefficients() {
        assert_eq!(ctx().alpha(1, 1), b(1).neg());
        let v = b(1).mul(&b(1)).unwrap().sub(&b(2)).unwrap();
        assert_eq!(ctx().alpha(1, 2), v);
        assert_eq!(ctx().alpha(2, 1), v);
    }

    #[test]
    fn group_law_axioms() {
        let c = ctx();
        let u = c.var1();
        // commutativity
        assert_eq!(*c.fgl(), c.fgl().swap_vars());
        // F(u, ubar) = 0
        assert_eq!(
            c.fgl().eval2(&u, c.inverse_series()).unwrap(),
            Series::zero(c.ring(), 1, 10)
        );
        // associativity over three variables
        let u3 = Series::var(c.ring(), 0, 3, 10);
        let v3 = Series::var(c.ring(), 1, 3, 10);
        let w3 = Series::var(c.ring(), 2, 3, 10);
        let fuv = c.fgl().eval2(&u3, &v3).unwrap();
        let fvw = c.fgl().eval2(&v3, &w3).unwrap();
        let lhs = c.fgl().eval2(&fuv, &w3).unwrap();
        let rhs = c.fgl().eval2(&u3, &fvw).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn alpha_coefficients_are_homogeneous() {
        let c = ctx();
        for i in 1..=9u32 {
            for j in 1..=(9 - i) {
                let a = c.alpha(i, j);
                assert!(a.is_homogeneous_of(i + j - 1));
            }
        }
        // Not every alpha is integral over the b-monomial basis; the
        // integral structure is recovered by the lattices instead.
        assert!(!c.alpha(2, 2).is_integral());
    }

    #[test]
    fn alpha_s_numbers_match_binomials() {
        let c = ctx();
        for k in 1..=8u32 {
            for i in 1..=k {
                let j = k + 1 - i;
                let s = c.alpha(i, j).s_number(k).unwrap();
                let expected = Rational::from_integer(binomial(k + 1, i));
                assert!(
                    s.clone() == expected.clone() || s == -expected.clone(),
                    "s_{k}(alpha_{i}{j}) = {s}, want ±{expected}"
                );
            }
        }
    }

    #[test]
    fn k_power_examples() {
        let c = ctx();
        assert!(c.k_power(0).unwrap().is_zero());
        assert_eq!(c.k_power(1).unwrap(), c.var1());
        // [2](u) = 2u - b1 u^2 + ...
        let two = c.k_power(2).unwrap();
        assert_eq!(two.coeff1(1), GradedPoly::from_int(2, 8));
        assert_eq!(two.coeff1(2), b(1).neg());
        // and equals F(u, u)
        let u = c.var1();
        assert_eq!(two, c.fgl().eval2(&u, &u).unwrap());
        // [-1](u) is the inverse series
        assert_eq!(c.k_power(-1).unwrap(), *c.inverse_series());
    }

    #[test]
    fn alpha_power_edge_cases() {
        let c = ctx();
        // k = 0 gives the constant series 1
        let one = c.alpha_power(0).unwrap();
        assert_eq!(one.coeff2(0, 0), GradedPoly::one(8));
        assert_eq!(one.terms().count(), 1);
        // k = 1 is F itself
        assert_eq!(c.alpha_power(1).unwrap(), *c.fgl());
        // alpha^{(2)}_{11} = 2
        assert_eq!(c.alpha_k(2, 1, 1), GradedPoly::from_int(2, 8));
    }

    #[test]
    fn beta_edge_cases() {
        let c = ctx();
        // beta^{(k,1)} = 0 for k >= 1 since [0](u) = 0
        for k in 1..=8 {
            assert!(c.beta_series(k, 1).unwrap().is_zero());
        }
        // beta^{(0,m)}_i = delta_{im}
        for m in 0..=4u32 {
            let s = c.beta_series(0, m).unwrap();
            for i in 0..=10u32 {
                let expect = if i == m {
                    GradedPoly::one(8)
                } else {
                    GradedPoly::zero(8)
                };
                assert_eq!(s.coeff1(i), expect);
            }
        }
        // beta^{(1,0)}_i = delta_{i1}
        let s = c.beta_series(1, 0).unwrap();
        assert_eq!(s, &c.var1());
    }

    #[test]
    fn inverse_series_low_terms() {
        // ū = -u - b1 u^2 - b1^2 u^3 - ...
        let c = ctx();
        let inv = c.inverse_series();
        assert_eq!(inv.coeff1(1), GradedPoly::from_int(-1, 8));
        assert_eq!(inv.coeff1(2), b(1).neg());
        assert_eq!(inv.coeff1(3), b(1).mul(&b(1)).unwrap().neg());
    }

    #[test]
    fn partial_on_generators() {
        let c = ctx();
        // ∂ b1 = 2 and ∂_i b1 = 0 for i >= 2
        assert_eq!(
            c.partial_on_generator(1, 1).unwrap(),
            GradedPoly::from_int(2, 8)
        );
        for i in 2..=8 {
            assert!(c.partial_on_generator(i, 1).unwrap().is_zero());
        }
        // ∂_2 b2 = 9, ∂_1 b2 = 0
        assert_eq!(
            c.partial_on_generator(2, 2).unwrap(),
            GradedPoly::from_int(9, 8)
        );
        assert!(c.partial_on_generator(1, 2).unwrap().is_zero());
        // ∂_0 is the identity on generators
        assert_eq!(c.partial_on_generator(0, 3).unwrap(), b(3));
    }

    #[test]
    fn mu_lattice_small_weights() {
        let c = ctx();
        let l1 = c.mu_lattice(1).unwrap();
        assert_eq!(l1.rank(), 1);
        assert_eq!(l1.s_gcd(1).unwrap(), rat(2));
        let l2 = c.mu_lattice(2).unwrap();
        assert_eq!(l2.rank(), 2);
        assert_eq!(l2.s_gcd(2).unwrap(), rat(3));
    }

    #[test]
    fn context_is_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<FglContext>();
        assert_send_sync::<GradedPoly>();
        assert_send_sync::<crate::LatticeBasis>();
        assert_send_sync::<crate::SuOp>();
    }

    #[test]
    fn order_beyond_cap_rejected() {
        assert!(matches!(
            FglContext::build(11, 8),
            Err(Error::OrderBeyondCap { .. })
        ));
    }
}
