//! Integer lattices inside a fixed-weight component of the polynomial ring.
//!
//! A lattice is stored as an integer matrix over the monomial basis of its
//! weight, together with a positive scale: the lattice is `(1/scale)` times
//! the row span. Rows are kept in Hermite normal form, which is canonical for
//! the row span, so permuting the input generators cannot change the stored
//! basis.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::poly::{GradedPoly, Monomial, Rational};
use crate::{Error, Result};

/// All monomials of the given weight, in the canonical order (descending
/// exponent vectors, so `b1^w` first and `bw` last).
pub fn monomial_basis(weight: u32, cap: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    // Partitions of `weight` into parts ≤ cap, largest part first.
    fn rec(remaining: u32, max_part: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if remaining == 0 {
            out.push(current.clone());
            return;
        }
        let top = remaining.min(max_part);
        for part in (1..=top).rev() {
            current.push(part);
            rec(remaining - part, part, current, out);
            current.pop();
        }
    }
    let mut parts = Vec::new();
    rec(weight, cap, &mut current, &mut parts);
    for partition in parts {
        let pairs: Vec<(u32, u32)> = partition.iter().map(|&p| (p, 1)).collect();
        out.push(Monomial::from_pairs(&pairs, cap).expect("parts bounded by cap"));
    }
    // Descending lexicographic order on exponent vectors.
    out.sort_by(|a, b| b.cmp(a));
    out
}

// ---------------------------------------------------------------------------
// Hermite normal form
// ---------------------------------------------------------------------------

fn row_sub(m: &mut [Vec<BigInt>], i: usize, j: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let rj = m[j].clone();
    for (a, b) in m[i].iter_mut().zip(&rj) {
        *a -= q * b;
    }
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

/// Row-style Hermite normal form restricted to the first `pivot_cols`
/// columns; returns the number of pivot rows. Rows beyond the pivot count
/// have zeros in the first `pivot_cols` columns. Pivots are positive and the
/// entries above each pivot are reduced into `[0, pivot)`.
fn hnf_in_place(m: &mut [Vec<BigInt>], pivot_cols: usize) -> usize {
    let rows = m.len();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows {
            break;
        }
        loop {
            // Smallest nonzero entry in column c at or below row r.
            let mut piv: Option<usize> = None;
            for i in r..rows {
                if !m[i][c].is_zero() {
                    piv = match piv {
                        None => Some(i),
                        Some(j) if m[i][c].abs() < m[j][c].abs() => Some(i),
                        keep => keep,
                    };
                }
            }
            let Some(p) = piv else {
                break;
            };
            m.swap(r, p);
            let mut cleared = true;
            for i in r + 1..rows {
                if m[i][c].is_zero() {
                    continue;
                }
                let q = floor_div(&m[i][c], &m[r][c]);
                row_sub(m, i, r, &q);
                if !m[i][c].is_zero() {
                    cleared = false;
                }
            }
            if cleared {
                if m[r][c].is_negative() {
                    for a in m[r].iter_mut() {
                        *a = -std::mem::take(a);
                    }
                }
                for i in 0..r {
                    let q = floor_div(&m[i][c], &m[r][c]);
                    row_sub(m, i, r, &q);
                }
                r += 1;
                break;
            }
        }
    }
    r
}

// ---------------------------------------------------------------------------
// LatticeBasis
// ---------------------------------------------------------------------------

/// An integer lattice in the weight-`weight` component, spanned by
/// `rows / scale` over the canonical monomial basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    weight: u32,
    cap: u32,
    basis: Vec<Monomial>,
    rows: Vec<Vec<BigInt>>,
    scale: BigInt,
}

impl LatticeBasis {
    /// Lattice spanned by integral generators. Errors on a non-integral
    /// coefficient or a generator of the wrong weight.
    pub fn from_generators(weight: u32, cap: u32, gens: &[GradedPoly]) -> Result<Self> {
        for g in gens {
            if !g.is_integral() {
                return Err(Error::NonIntegralGenerator);
            }
        }
        Self::from_rational_generators(weight, cap, gens)
    }

    /// Lattice spanned by arbitrary rational generators; the common
    /// denominator is absorbed into the scale.
    pub fn from_rational_generators(weight: u32, cap: u32, gens: &[GradedPoly]) -> Result<Self> {
        let basis = monomial_basis(weight, cap);
        let mut scale = BigInt::one();
        let mut vectors = Vec::with_capacity(gens.len());
        for g in gens {
            if !g.is_homogeneous_of(weight) {
                return Err(Error::WeightMismatch {
                    expected: weight,
                    found: g.homogeneous_weight().unwrap_or(0),
                });
            }
            let v: Vec<Rational> = basis.iter().map(|m| g.coeff(m)).collect();
            for c in &v {
                scale = scale.lcm(c.denom());
            }
            vectors.push(v);
        }
        let mut rows: Vec<Vec<BigInt>> = vectors
            .iter()
            .map(|v| {
                v.iter()
                    .map(|c| (c * Rational::from_integer(scale.clone())).to_integer())
                    .collect()
            })
            .collect();
        let rank = hnf_in_place(&mut rows, basis.len());
        rows.truncate(rank);
        let mut lattice = LatticeBasis {
            weight,
            cap,
            basis,
            rows,
            scale,
        };
        lattice.normalize_scale();
        Ok(lattice)
    }

    /// Divide out any common factor between the scale and all entries, so
    /// equal lattices compare equal.
    fn normalize_scale(&mut self) {
        let mut g = self.scale.clone();
        for row in &self.rows {
            for e in row {
                g = g.gcd(e);
                if g.is_one() {
                    return;
                }
            }
        }
        if g.is_one() || g.is_zero() {
            return;
        }
        for row in &mut self.rows {
            for e in row.iter_mut() {
                *e = &*e / &g;
            }
        }
        self.scale = &self.scale / &g;
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn scale(&self) -> &BigInt {
        &self.scale
    }

    /// The `i`-th basis row as a polynomial.
    pub fn row_poly(&self, i: usize) -> GradedPoly {
        let scale = Rational::from_integer(self.scale.clone());
        GradedPoly::from_terms(
            self.rows[i]
                .iter()
                .zip(&self.basis)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, m)| (m.clone(), Rational::from_integer(c.clone()) / &scale)),
            self.cap,
        )
    }

    pub fn basis_polys(&self) -> Vec<GradedPoly> {
        (0..self.rank()).map(|i| self.row_poly(i)).collect()
    }

    /// The lattice element with the given integer coordinates in the basis.
    pub fn element(&self, coords: &[i64]) -> GradedPoly {
        let mut acc = GradedPoly::zero(self.cap);
        for (c, i) in coords.iter().zip(0..self.rank()) {
            acc = acc.add(&self.row_poly(i).scale_int(*c)).expect("same cap");
        }
        acc
    }

    fn vector_of(&self, p: &GradedPoly) -> Result<Vec<Rational>> {
        if !p.is_homogeneous_of(self.weight) {
            return Err(Error::WeightMismatch {
                expected: self.weight,
                found: p.homogeneous_weight().unwrap_or(0),
            });
        }
        Ok(self.basis.iter().map(|m| p.coeff(m)).collect())
    }

    /// Exact membership test.
    pub fn contains(&self, p: &GradedPoly) -> Result<bool> {
        let v = self.vector_of(p)?;
        let scale = Rational::from_integer(self.scale.clone());
        let mut target: Vec<Rational> = v.iter().map(|c| c * &scale).collect();
        if target.iter().any(|c| !c.denom().is_one()) {
            return Ok(false);
        }
        let mut target: Vec<BigInt> = target.drain(..).map(|c| c.to_integer()).collect();
        // Back-substitution over the HNF pivots, left to right.
        for row in &self.rows {
            let c = row
                .iter()
                .position(|e| !e.is_zero())
                .expect("no zero rows in HNF basis");
            if target[c].is_zero() {
                continue;
            }
            let (q, rem) = target[c].div_rem(&row[c]);
            if !rem.is_zero() {
                return Ok(false);
            }
            for (t, e) in target.iter_mut().zip(row) {
                *t -= &q * e;
            }
        }
        Ok(target.iter().all(|c| c.is_zero()))
    }

    /// The nonnegative generator of the subgroup `{ s_k(x) : x in lattice }`
    /// of the rationals. Since `s_k` is linear, the gcd over the basis rows
    /// generates it.
    pub fn s_gcd(&self, k: u32) -> Result<Rational> {
        if k != self.weight {
            return Err(Error::WeightMismatch {
                expected: self.weight,
                found: k,
            });
        }
        let idx = self
            .basis
            .iter()
            .position(|m| m.total_degree() == 1 && m.weight() == k)
            .ok_or(Error::DegreeOutOfReach(k))?;
        let mut g = BigInt::zero();
        for row in &self.rows {
            g = g.gcd(&row[idx]);
        }
        let g = g * BigInt::from(k + 1);
        Ok(Rational::new(g, self.scale.clone()))
    }

    /// The sublattice killed by a linear map, as an HNF basis. The map is
    /// given pointwise on polynomials and must be defined on every basis row.
    pub fn integral_kernel<F>(&self, map: F) -> Result<LatticeBasis>
    where
        F: Fn(&GradedPoly) -> Result<GradedPoly>,
    {
        let images: Vec<GradedPoly> = self.basis_polys().iter().map(map).collect::<Result<_>>()?;
        // Coordinates of the images over the union of their monomials.
        let mut image_monomials: Vec<Monomial> = Vec::new();
        for img in &images {
            for (m, _) in img.terms() {
                if !image_monomials.contains(m) {
                    image_monomials.push(m.clone());
                }
            }
        }
        image_monomials.sort();
        let mut denom = BigInt::one();
        for img in &images {
            for (_, c) in img.terms() {
                denom = denom.lcm(c.denom());
            }
        }
        let cols = image_monomials.len();
        // Augmented matrix [images | identity]; kernel rows emerge as the
        // unimodular combinations whose image part is zero.
        let n = images.len();
        let mut aug: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for (i, img) in images.iter().enumerate() {
            let mut row: Vec<BigInt> = image_monomials
                .iter()
                .map(|m| (img.coeff(m) * Rational::from_integer(denom.clone())).to_integer())
                .collect();
            let mut id = vec![BigInt::zero(); n];
            id[i] = BigInt::one();
            row.extend(id);
            aug.push(row);
        }
        let rank = hnf_in_place(&mut aug, cols);
        let kernel_polys: Vec<GradedPoly> = aug[rank..]
            .iter()
            .map(|row| {
                let mut acc = GradedPoly::zero(self.cap);
                for (c, i) in row[cols..].iter().zip(0..n) {
                    if !c.is_zero() {
                        let term = self.row_poly(i).scale(&Rational::from_integer(c.clone()));
                        acc = acc.add(&term).expect("same cap");
                    }
                }
                acc
            })
            .collect();
        LatticeBasis::from_rational_generators(self.weight, self.cap, &kernel_polys)
    }
}
