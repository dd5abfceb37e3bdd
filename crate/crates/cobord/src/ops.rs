//! The algebra of SU-linear operations in the ∂-basis.
//!
//! An operation is a finite sum `Σ μi ∂i` with polynomial coefficients. Its
//! action on the coefficient ring extends the generator values
//! `∂k[CP^n]` by linearity and the product rule
//! `∂k(a·b) = Σ α^{(k)}_{ij} ∂i(a)·∂j(b)`; composition uses the same
//! structure constants together with `∂q∘∂j = Σ β^{(q,j)}_r ∂r`. On
//! cohomology classes of infinite projective space the action goes through
//! the series dictionary `∂i(u) = u·ū^i`, `bar∂i(u) = u^{i+1}`.

use std::collections::BTreeMap;
use std::fmt;

use crate::fgl::FglContext;
use crate::poly::{GradedPoly, Monomial, Rational};
use crate::series::{PolyRing, Series};
use crate::{Error, Result};

/// Which monomial basis a series is read in when converting to an operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpBasis {
    /// Coefficients of `u^{i+1}`, i.e. the `bar∂i` expansion.
    UPowers,
    /// Coefficients of `u·ū^i`, i.e. the ∂-basis directly.
    UUbarPowers,
}

/// An SU-linear operation as a finite coefficient map `i ↦ μi` in the
/// ∂-basis, with support truncated at the weight cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuOp {
    coeffs: BTreeMap<u32, GradedPoly>,
    cap: u32,
}

impl SuOp {
    pub fn zero(cap: u32) -> Self {
        SuOp {
            coeffs: BTreeMap::new(),
            cap,
        }
    }

    /// The identity operation `∂0`.
    pub fn identity(cap: u32) -> Self {
        Self::partial(0, cap)
    }

    /// The basis operation `∂k`.
    pub fn partial(k: u32, cap: u32) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(k, GradedPoly::one(cap));
        SuOp { coeffs, cap }
    }

    /// Build from an explicit coefficient map; zero coefficients and indices
    /// beyond the cap are dropped.
    pub fn from_coeffs<I: IntoIterator<Item = (u32, GradedPoly)>>(iter: I, cap: u32) -> Self {
        let mut coeffs = BTreeMap::new();
        for (i, mu) in iter {
            if i <= cap && !mu.is_zero() {
                coeffs.insert(i, mu);
            }
        }
        SuOp { coeffs, cap }
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: u32) -> GradedPoly {
        self.coeffs
            .get(&i)
            .cloned()
            .unwrap_or_else(|| GradedPoly::zero(self.cap))
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&u32, &GradedPoly)> {
        self.coeffs.iter()
    }

    pub fn support(&self) -> Vec<u32> {
        self.coeffs.keys().copied().collect()
    }

    /// The defect `d` with `weight(μi) = i + d`, when the coefficients are
    /// homogeneous and consistent.
    pub fn defect(&self) -> Option<i64> {
        let mut defect = None;
        for (&i, mu) in &self.coeffs {
            let w = mu.homogeneous_weight()? as i64 - i as i64;
            match defect {
                None => defect = Some(w),
                Some(d) if d == w => {}
                _ => return None,
            }
        }
        defect
    }

    pub fn add(&self, other: &SuOp) -> Result<SuOp> {
        if self.cap != other.cap {
            return Err(Error::CapMismatch {
                left: self.cap,
                right: other.cap,
            });
        }
        let mut out = self.clone();
        for (&i, mu) in &other.coeffs {
            let cur = out.coeff(i).add(mu)?;
            if cur.is_zero() {
                out.coeffs.remove(&i);
            } else {
                out.coeffs.insert(i, cur);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SuOp) -> Result<SuOp> {
        self.add(&other.scale_int(-1))
    }

    pub fn scale_poly(&self, c: &GradedPoly) -> Result<SuOp> {
        let mut coeffs = BTreeMap::new();
        for (&i, mu) in &self.coeffs {
            let scaled = mu.mul(c)?;
            if !scaled.is_zero() {
                coeffs.insert(i, scaled);
            }
        }
        Ok(SuOp {
            coeffs,
            cap: self.cap,
        })
    }

    pub fn scale_int(&self, n: i64) -> SuOp {
        let mut coeffs = BTreeMap::new();
        for (&i, mu) in &self.coeffs {
            coeffs.insert(i, mu.scale_int(n));
        }
        SuOp {
            coeffs,
            cap: self.cap,
        }
    }

    /// Apply the operation to a ring element.
    pub fn apply(&self, p: &GradedPoly, ctx: &FglContext) -> Result<GradedPoly> {
        if p.weight_cap() != self.cap {
            return Err(Error::CapMismatch {
                left: self.cap,
                right: p.weight_cap(),
            });
        }
        let mut acc = GradedPoly::zero(self.cap);
        for (&i, mu) in &self.coeffs {
            let part = apply_partial(ctx, i, p)?;
            if !part.is_zero() {
                acc = acc.add(&mu.mul(&part)?)?;
            }
        }
        Ok(acc)
    }

    /// Compose with another operation: the ∂-basis expansion of `self ∘ g`.
    ///
    /// `∂i ∘ (ν ∂j) = Σ_q (Σ_p α^{(i)}_{pq} ∂p ν) · (∂q ∘ ∂j)` by the product
    /// rule, and `∂q ∘ ∂j = Σ_r β^{(q,j)}_r ∂r`.
    pub fn compose(&self, g: &SuOp, ctx: &FglContext) -> Result<SuOp> {
        if self.cap != g.cap {
            return Err(Error::CapMismatch {
                left: self.cap,
                right: g.cap,
            });
        }
        let cap = self.cap;
        let mut out: BTreeMap<u32, GradedPoly> = BTreeMap::new();
        for (&i, mu) in &self.coeffs {
            for (&j, nu) in &g.coeffs {
                let nu_weight = match nu.homogeneous_weight() {
                    Some(w) => w,
                    None => cap, // inhomogeneous coefficient: use the full range
                };
                let dnu: Vec<GradedPoly> = (0..=nu_weight)
                    .map(|p| apply_partial(ctx, p, nu))
                    .collect::<Result<_>>()?;
                for q in 0..=cap {
                    // c_q = Σ_p α^{(i)}_{pq} ∂p(ν)
                    let mut c_q = GradedPoly::zero(cap);
                    for (p, dp) in dnu.iter().enumerate() {
                        if dp.is_zero() {
                            continue;
                        }
                        let a = ctx.alpha_k(i, p as u32, q);
                        if a.is_zero() {
                            continue;
                        }
                        c_q = c_q.add(&a.mul(dp)?)?;
                    }
                    if c_q.is_zero() {
                        continue;
                    }
                    let mu_cq = mu.mul(&c_q)?;
                    let beta = ctx.beta_series(q, j)?;
                    for r in 0..=cap {
                        let b = beta.coeff1(r);
                        if b.is_zero() {
                            continue;
                        }
                        let term = mu_cq.mul(&b)?;
                        if term.is_zero() {
                            continue;
                        }
                        let cur = out
                            .remove(&r)
                            .unwrap_or_else(|| GradedPoly::zero(cap))
                            .add(&term)?;
                        if !cur.is_zero() {
                            out.insert(r, cur);
                        }
                    }
                }
            }
        }
        Ok(SuOp { coeffs: out, cap })
    }

    /// The series `f(u) = Σ μi·u·ū^i` the operation acts by on the canonical
    /// orientation.
    pub fn to_series(&self, ctx: &FglContext) -> Result<Series<PolyRing>> {
        let u = ctx.var1();
        let ubar = ctx.inverse_series();
        let mut acc = Series::zero(ctx.ring(), 1, ctx.order());
        let mut basis = u.clone(); // u·ū^i, starting at i = 0
        let max = *self.coeffs.keys().max().unwrap_or(&0);
        for i in 0..=max {
            let mu = self.coeff(i);
            if !mu.is_zero() {
                acc = acc.add(&basis.scale_elem(&mu))?;
            }
            if i < max {
                basis = basis.mul(ubar)?;
            }
        }
        Ok(acc)
    }

    /// Convert a series with zero constant term into the operation `f` with
    /// `f(u) = s`, reading the series through the chosen monomial basis.
    /// Both bases produce the same operation; they differ only in the
    /// conversion route (a direct read of `bar∂` coefficients versus a
    /// triangular solve against `u·ū^i`).
    pub fn from_series(s: &Series<PolyRing>, ctx: &FglContext, basis: OpBasis) -> Result<SuOp> {
        if !s.coeff1(0).is_zero() {
            return Err(Error::ConstantTerm);
        }
        let cap = ctx.weight_cap();
        match basis {
            OpBasis::UPowers => {
                // s = Σ λi u^{i+1} corresponds to Σ λi bar∂i; expand each
                // bar∂i in the ∂-basis.
                let mut out = SuOp::zero(cap);
                for i in 0..s.order() {
                    let lambda = s.coeff1(i + 1);
                    if lambda.is_zero() {
                        continue;
                    }
                    let bar = bar_partial(ctx, i)?;
                    out = out.add(&bar.scale_poly(&lambda)?)?;
                }
                Ok(out)
            }
            OpBasis::UUbarPowers => {
                // Triangular solve: u·ū^i = (-1)^i u^{i+1} + higher terms.
                let u = ctx.var1();
                let ubar = ctx.inverse_series();
                let mut rem = s.clone();
                let mut basis_series = u.clone();
                let mut out = SuOp::zero(cap);
                for i in 0..s.order() {
                    let lead = rem.coeff1(i + 1);
                    if !lead.is_zero() {
                        let sign = if i % 2 == 0 { 1 } else { -1 };
                        let mu = lead.scale_int(sign);
                        rem = rem.sub(&basis_series.scale_elem(&mu))?;
                        if i <= cap {
                            out = out.add(&SuOp::from_coeffs([(i, mu)], cap))?;
                        }
                    }
                    basis_series = basis_series.mul(ubar)?;
                }
                Ok(out)
            }
        }
    }

    /// Act on a cohomology class of infinite projective space, given as a
    /// series in the canonical orientation with zero constant term.
    pub fn apply_to_class(
        &self,
        cls: &Series<PolyRing>,
        ctx: &FglContext,
    ) -> Result<Series<PolyRing>> {
        let as_op = SuOp::from_series(cls, ctx, OpBasis::UPowers)?;
        self.compose(&as_op, ctx)?.to_series(ctx)
    }
}

impl fmt::Display for SuOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, mu) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if mu == &GradedPoly::one(self.cap) {
                write!(f, "d{}", i)?;
            } else {
                write!(f, "({})*d{}", mu, i)?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// The ∂-action on ring elements
// ---------------------------------------------------------------------------

/// `∂k` applied to a polynomial, by linearity over its terms.
pub fn apply_partial(ctx: &FglContext, k: u32, p: &GradedPoly) -> Result<GradedPoly> {
    let cap = ctx.weight_cap();
    let mut acc = GradedPoly::zero(cap);
    for (m, c) in p.terms() {
        let part = partial_monomial(ctx, k, m)?;
        if !part.is_zero() {
            acc = acc.add(&part.scale(c))?;
        }
    }
    Ok(acc)
}

/// `∂k` on a single monomial, splitting off one generator at a time and
/// applying the product rule. Memoized in the context.
fn partial_monomial(ctx: &FglContext, k: u32, m: &Monomial) -> Result<GradedPoly> {
    let cap = ctx.weight_cap();
    if k == 0 {
        return Ok(GradedPoly::monomial(
            m.clone(),
            Rational::from_integer(1.into()),
        ));
    }
    if k > m.weight() {
        return Ok(GradedPoly::zero(cap));
    }
    if let Some(hit) = ctx.partial_memo().lock().unwrap().get(&(k, m.clone())) {
        return Ok(hit.clone());
    }
    let (n, rest) = m.split_factor().expect("positive weight monomial");
    let result = if rest.is_one() {
        ctx.partial_on_generator(k, n)?
    } else {
        // ∂k(bn · rest) = Σ_{i,j} α^{(k)}_{ij} ∂i(bn)·∂j(rest)
        let mut acc = GradedPoly::zero(cap);
        let rest_weight = rest.weight();
        for i in 0..=n {
            let di = if i == 0 {
                GradedPoly::generator(n, cap)?
            } else {
                ctx.partial_on_generator(i, n)?
            };
            if di.is_zero() {
                continue;
            }
            for j in 0..=rest_weight {
                let a = ctx.alpha_k(k, i, j);
                if a.is_zero() {
                    continue;
                }
                let dj = partial_monomial(ctx, j, &rest)?;
                if dj.is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(&di)?.mul(&dj)?)?;
            }
        }
        acc
    };
    ctx.partial_memo()
        .lock()
        .unwrap()
        .insert((k, m.clone()), result.clone());
    Ok(result)
}

// ---------------------------------------------------------------------------
// The Δ-family of operations
// ---------------------------------------------------------------------------

/// The operation `Δ_{(k1,k2)}` with `Δ_{(k1,k2)}u = u·ū^{k1}·u^{k2}`,
/// expanded in the ∂-basis. `Δ_{(k,0)} = ∂k`, `Δ_{(0,k)} = bar∂k`, and
/// `Δ = Δ_{(1,1)}`.
pub fn delta_op(ctx: &FglContext, k1: u32, k2: u32) -> Result<SuOp> {
    if let Some(hit) = ctx.delta_op_memo().lock().unwrap().get(&(k1, k2)) {
        return Ok(hit.clone());
    }
    let u = ctx.var1();
    let ubar = ctx.inverse_series();
    let mut s = u.clone();
    for _ in 0..k1 {
        s = s.mul(ubar)?;
    }
    for _ in 0..k2 {
        s = s.mul(&u)?;
    }
    let op = SuOp::from_series(&s, ctx, OpBasis::UUbarPowers)?;
    ctx.delta_op_memo()
        .lock()
        .unwrap()
        .insert((k1, k2), op.clone());
    Ok(op)
}

/// The boundary operation `∂ = ∂1`.
pub fn boundary(ctx: &FglContext) -> SuOp {
    SuOp::partial(1, ctx.weight_cap())
}

/// The operation `Δ = Δ_{(1,1)}` whose kernel on coefficients is `W_*`.
pub fn delta(ctx: &FglContext) -> Result<SuOp> {
    delta_op(ctx, 1, 1)
}

/// `bar∂k = Δ_{(0,k)}` in the ∂-basis.
pub fn bar_partial(ctx: &FglContext, k: u32) -> Result<SuOp> {
    delta_op(ctx, 0, k)
}
