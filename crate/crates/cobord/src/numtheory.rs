//! Integer arithmetic lemmas: the binomial gcds `m_k`, the Fermat-type
//! equation `p^s = 2^ℓ + 1`, and the solvability analysis of the linear
//! equation behind the coefficient gcd formula.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Which branch of the closed form produced `m_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MkBranch {
    /// `k + 1` is not a prime power, so `m_k = 1`.
    NonPrimePower,
    /// `k + 1 = p^ℓ`, so `m_k = p`.
    PrimePower { p: u64 },
}

/// `m_k = gcd{ C(k+1, i) : 1 <= i <= k }`, with its closed-form branch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MkValue {
    pub k: u32,
    pub value: u64,
    pub branch: MkBranch,
}

/// Smallest prime factor by trial division.
fn smallest_prime_factor(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 2;
    }
    n
}

/// True if `n = p^e` for the given prime `p`.
fn is_power_of(mut n: u64, p: u64) -> bool {
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// The gcd of the binomial coefficients `C(k+1, i)`, `1 <= i <= k`, computed
/// both by brute force and by the closed form (`p` if `k+1` is a power of
/// the prime `p`, else `1`); the two are asserted equal.
pub fn m_k(k: u32) -> MkValue {
    assert!(k >= 1, "m_k requires k >= 1");
    let mut gcd = BigInt::zero();
    for i in 1..=k {
        gcd = gcd.gcd(&crate::fgl::binomial(k + 1, i));
        if gcd.is_one() {
            break;
        }
    }
    let n = (k + 1) as u64;
    let p = smallest_prime_factor(n);
    let branch = if is_power_of(n, p) {
        MkBranch::PrimePower { p }
    } else {
        MkBranch::NonPrimePower
    };
    let closed = match branch {
        MkBranch::PrimePower { p } => p,
        MkBranch::NonPrimePower => 1,
    };
    assert_eq!(
        gcd,
        BigInt::from(closed),
        "closed form of m_{k} disagrees with the binomial gcd"
    );
    MkValue {
        k,
        value: closed,
        branch,
    }
}

/// Deterministic Miller–Rabin, valid for all `n < 2^64`.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = mod_mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, m);
        }
        base = mod_mul(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Exact integer `s`-th root test: returns `r` with `r^s = n` if one exists.
fn exact_root(n: u64, s: u32) -> Option<u64> {
    if s == 1 {
        return Some(n);
    }
    let mut lo = 1u64;
    let mut hi = 1u64 << (64 / s).min(32);
    while hi.checked_pow(s).is_some_and(|v| v <= n) {
        hi *= 2;
    }
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        match mid.checked_pow(s) {
            Some(v) if v <= n => lo = mid,
            _ => hi = mid - 1,
        }
    }
    (lo.checked_pow(s) == Some(n)).then_some(lo)
}

/// Solutions `(p, s, ℓ)` of `p^s = 2^ℓ + 1` with `p` an odd prime and
/// `1 <= ℓ <= l_max`, by direct enumeration.
pub fn fermat_solutions(l_max: u32) -> Vec<(u64, u32, u32)> {
    assert!((1..=62).contains(&l_max), "l_max must be in 1..=62");
    let mut out = Vec::new();
    for l in 1..=l_max {
        let n = (1u64 << l) + 1;
        let mut s = 1;
        loop {
            let Some(root) = exact_root(n, s) else {
                s += 1;
                if s > 63 {
                    break;
                }
                continue;
            };
            if root < 3 {
                break;
            }
            if root % 2 == 1 && is_prime(root) {
                out.push((root, s, l));
                break;
            }
            s += 1;
            if s > 63 {
                break;
            }
        }
    }
    out
}

/// Outcome of solving `1 + (-1)^k(k+1) + c·m_k·m_{k-1} = m_{k-1}` over the
/// integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CasesOutcome {
    Solvable {
        c: BigInt,
    },
    /// The excluded family `k = 2^ℓ = p^s - 1`: no integer solution.
    Unsolvable {
        p: u64,
        s: u32,
        ell: u32,
    },
}

/// True if `k` is of the excluded form `k = 2^ℓ` with `k + 1 = p^s` for an
/// odd prime `p`; returns the parameters.
pub fn excluded_form(k: u32) -> Option<(u64, u32, u32)> {
    if k < 2 || !k.is_power_of_two() {
        return None;
    }
    let ell = k.trailing_zeros();
    let n = (k + 1) as u64;
    let p = smallest_prime_factor(n);
    if p == 2 || !is_power_of(n, p) {
        return None;
    }
    let mut s = 0;
    let mut m = n;
    while m > 1 {
        m /= p;
        s += 1;
    }
    Some((p, s, ell))
}

/// Solve the gcd-matching equation at level `k`. The equation is solvable
/// exactly when `k` is not of the form `2^ℓ = p^s - 1`.
pub fn cases_solver(k: u32) -> CasesOutcome {
    assert!(k >= 2, "cases_solver requires k >= 2");
    if let Some((p, s, ell)) = excluded_form(k) {
        return CasesOutcome::Unsolvable { p, s, ell };
    }
    let mk = BigInt::from(m_k(k).value);
    let mk1 = BigInt::from(m_k(k - 1).value);
    let sign: i64 = if k.is_multiple_of(2) { 1 } else { -1 };
    // c·m_k·m_{k-1} = m_{k-1} - 1 - (-1)^k (k+1)
    let rhs = &mk1 - BigInt::one() - BigInt::from(sign) * BigInt::from(k as i64 + 1);
    let step = &mk * &mk1;
    let (c, rem) = rhs.div_rem(&step);
    assert!(
        rem.is_zero(),
        "gcd equation at k={k} must be solvable outside the excluded family"
    );
    CasesOutcome::Solvable { c }
}
