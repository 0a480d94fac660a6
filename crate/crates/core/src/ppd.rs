//! Integer-side arithmetic of primitive prime divisors.
//!
//! A primitive prime divisor (ppd) of `b^e - 1` is a prime `r` dividing
//! `b^e - 1` but none of `b^i - 1` for `1 <= i < e`; equivalently the
//! multiplicative order of `b` modulo `r` is exactly `e`.  Such primes
//! satisfy `r ≡ 1 (mod e)`, so `r >= e + 1`.  This module computes the ppd
//! sets themselves, the Zsigmondy existence criterion, and the products
//! `Φ(e,q)`, `Φ_l(e,q)` (large) and `Φ_b(e,q)` (basic) that drive the
//! element classification tests.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// Cap on arguments to [`factorize`] and on `b^e` in [`ppd_list`].
/// Complete factorization beyond this is a non-goal.
pub const FACTOR_CAP: u128 = 1 << 126;

/// Cap, in bits, on `q^e` in [`phi_triple`]; beyond the factorization cap the
/// values are produced by the gcd cascade, which needs no factorization.
pub const PHI_CAP_BITS: u64 = 512;

#[inline]
fn mulmod(a: u128, b: u128, n: u128) -> u128 {
    if n <= u64::MAX as u128 {
        return (a % n) * (b % n) % n;
    }
    // Shift-and-add keeps every intermediate below 2^127 since n < 2^126.
    let a = a % n;
    let mut acc: u128 = 0;
    let mut i = 128 - b.leading_zeros();
    while i > 0 {
        i -= 1;
        acc = (acc << 1) % n;
        if (b >> i) & 1 == 1 {
            acc = (acc + a) % n;
        }
    }
    acc
}

fn powmod(mut base: u128, mut e: u128, n: u128) -> u128 {
    if n == 1 {
        return 0;
    }
    let mut acc: u128 = 1;
    base %= n;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, base, n);
        }
        base = mulmod(base, base, n);
        e >>= 1;
    }
    acc
}

fn miller_rabin(n: u128, witnesses: &[u128]) -> bool {
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'next: for &w in witnesses {
        let w = w % n;
        if w == 0 {
            continue;
        }
        let mut x = powmod(w, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'next;
            }
        }
        return false;
    }
    true
}

/// Deterministic witness set covering all of `u64`.
const WITNESSES_64: [u128; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
/// Fixed witness set used above 2^64 (documented, probabilistic regime).
const WITNESSES_128: [u128; 20] =
    [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71];

pub fn is_prime_u64(n: u64) -> bool {
    is_prime_u128(n as u128)
}

pub fn is_prime_u128(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    if n <= u64::MAX as u128 {
        miller_rabin(n, &WITNESSES_64)
    } else {
        miller_rabin(n, &WITNESSES_128)
    }
}

fn pollard_rho(n: u128, rng_state: &mut u64) -> u128 {
    loop {
        *rng_state = rng_state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let c = (*rng_state as u128 % (n - 1)) + 1;
        let mut x: u128 = (*rng_state >> 32) as u128 % n;
        let mut d: u128 = 1;
        // Brent's cycle detection with batched gcds.
        let mut saved = x;
        let (mut power, mut lam) = (1u64, 1u64);
        let mut q: u128 = 1;
        while d == 1 {
            if power == lam {
                saved = x;
                power <<= 1;
                lam = 0;
            }
            x = (mulmod(x, x, n) + c) % n;
            lam += 1;
            let diff = if x > saved { x - saved } else { saved - x };
            if diff == 0 {
                d = n;
                break;
            }
            q = mulmod(q, diff, n);
            if lam % 64 == 0 {
                d = q.gcd(&n);
                q = 1;
            }
        }
        if d == 1 {
            d = q.gcd(&n);
        }
        if d != 1 && d != n {
            return d;
        }
    }
}

fn factor_into(n: u128, out: &mut BTreeMap<u128, u32>) {
    let mut n = n;
    for p in [2u128, 3, 5] {
        while n % p == 0 {
            *out.entry(p).or_insert(0) += 1;
            n /= p;
        }
    }
    // Wheel over numbers coprime to 30.
    let mut d: u128 = 7;
    const STEPS: [u128; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut step = 0;
    while d <= 100_000 && d * d <= n {
        while n % d == 0 {
            *out.entry(d).or_insert(0) += 1;
            n /= d;
        }
        d += STEPS[step];
        step = (step + 1) % 8;
    }
    if n == 1 {
        return;
    }
    if n < d * d || is_prime_u128(n) {
        *out.entry(n).or_insert(0) += 1;
        return;
    }
    let mut stack = vec![n];
    let mut rng_state: u64 = 0x9E3779B97F4A7C15;
    while let Some(m) = stack.pop() {
        if is_prime_u128(m) {
            *out.entry(m).or_insert(0) += 1;
            continue;
        }
        let f = pollard_rho(m, &mut rng_state);
        stack.push(f);
        stack.push(m / f);
    }
}

/// Complete prime factorization of `n >= 1` under [`FACTOR_CAP`].
pub fn factorize(n: u128) -> Result<BTreeMap<u128, u32>> {
    if n == 0 {
        return Err(Error::Inconsistent("factorize(0) undefined".into()));
    }
    if n > FACTOR_CAP {
        return Err(Error::Overflow(format!("{n} exceeds the factorization cap 2^126")));
    }
    let mut out = BTreeMap::new();
    if n > 1 {
        factor_into(n, &mut out);
    }
    Ok(out)
}

/// Complete prime factorization of a `u64`.
pub fn factorize_u64(n: u64) -> BTreeMap<u64, u32> {
    let mut out = BTreeMap::new();
    if n > 1 {
        let mut wide = BTreeMap::new();
        factor_into(n as u128, &mut wide);
        for (r, v) in wide {
            out.insert(r as u64, v);
        }
    }
    out
}

/// Number of distinct primes dividing `d`.
pub fn mu_distinct_primes(d: u64) -> u32 {
    factorize_u64(d).len() as u32
}

/// `true` iff the multiplicative order of `base` modulo the prime `r` is
/// exactly `e`; divisibility of `base^e - 1` by `r` is checked, not assumed.
pub fn order_is_exactly(base: u128, r: u128, e: u32) -> bool {
    if base % r == 0 {
        return false;
    }
    if powmod(base, e as u128, r) != 1 {
        return false;
    }
    factorize_u64(e as u64)
        .keys()
        .all(|&s| powmod(base, (e / s as u32) as u128, r) != 1)
}

/// The primitive prime divisors of `b^e - 1` with their full multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PpdSet {
    pub b: u64,
    pub e: u32,
    /// prime -> its exact valuation in `b^e - 1`.
    pub primes: BTreeMap<u128, u32>,
}

impl PpdSet {
    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }
}

/// List the primitive prime divisors of `b^e - 1` via the order criterion:
/// a prime `r | b^e - 1` is primitive iff `ord_r(b) = e`.
pub fn ppd_list(b: u64, e: u32) -> Result<PpdSet> {
    if b < 2 || e < 1 {
        return Err(Error::Inconsistent(format!("ppd_list needs b >= 2, e >= 1 (got {b}, {e})")));
    }
    let pow = checked_pow_u128(b as u128, e)
        .filter(|&v| v <= FACTOR_CAP)
        .ok_or_else(|| Error::Overflow(format!("{b}^{e} exceeds the factorization cap 2^126")))?;
    let n = pow - 1;
    let mut primes = BTreeMap::new();
    if n > 1 {
        for (r, v) in factorize(n)? {
            if order_is_exactly(b as u128, r, e) {
                primes.insert(r, v);
            }
        }
    }
    Ok(PpdSet { b, e, primes })
}

fn checked_pow_u128(b: u128, e: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc = acc.checked_mul(b)?;
    }
    Some(acc)
}

/// Zsigmondy's criterion in closed form: `b^e - 1` has a primitive prime
/// divisor unless `(b,e) = (2,6)`, or `e = 2` with `b + 1` a power of 2, or
/// `e = 1` with `b = 2`.
pub fn has_ppd(b: u64, e: u32) -> bool {
    debug_assert!(b >= 2 && e >= 1);
    if e == 1 {
        return b != 2;
    }
    if e == 2 {
        return !(b + 1).is_power_of_two();
    }
    !(b == 2 && e == 6)
}

/// Existence via the explicit list; the caller pays the factorization cost.
/// Provided as the cross-checkable counterpart of the closed form.
pub fn has_ppd_enumerated(b: u64, e: u32) -> Result<bool> {
    Ok(!ppd_list(b, e)?.is_empty())
}

/// One primitive prime divisor of `q^e - 1` together with its classification
/// flags, as recorded inside a [`PhiTriple`] computed by factorization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PpdPrime {
    pub r: u128,
    /// Exact valuation of `r` in `q^e - 1`.
    pub multiplicity: u32,
    /// `r >= 2e+1`, or `r = e+1` with `(e+1)^2 | q^e - 1`.
    pub large: bool,
    /// Primitive over the prime field: `ord_r(p) = a*e`.
    pub basic: bool,
}

/// The three products `Φ(e,q)`, `Φ_l(e,q)`, `Φ_b(e,q)`.
///
/// `phi` multiplies every primitive prime divisor of `q^e - 1` with its full
/// valuation.  `phi_basic` is `Φ(ae, p)` for `q = p^a`, with valuations taken
/// in `p^{ae} - 1 = q^e - 1`.  `phi_large` takes full valuations for primes
/// `r >= 2e+1` but valuation minus one for `r = e+1`, so that the residue
/// test `t^((q^e-1)/Φ_l) != 1` captures exactly the element-level largeness
/// condition (`(e+1)^2` must divide the element order when `r = e+1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiTriple {
    pub e: u32,
    pub q: u64,
    pub phi: BigUint,
    pub phi_large: BigUint,
    pub phi_basic: BigUint,
    /// Per-prime decomposition; present when the factorization route was
    /// taken (below [`FACTOR_CAP`]), absent for the cascade route.
    pub primes: Option<Vec<PpdPrime>>,
}

/// Compute the triple for `q = p^a`.  Below [`FACTOR_CAP`] this factors
/// `q^e - 1` completely; between the caps it switches to the gcd cascade.
pub fn phi_triple(e: u32, q: u64, p: u64, a: u32) -> Result<PhiTriple> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if a < 1 || e < 1 {
        return Err(Error::Inconsistent("phi_triple needs a >= 1 and e >= 1".into()));
    }
    let expected = checked_pow_u128(p as u128, a);
    if expected != Some(q as u128) {
        return Err(Error::Inconsistent(format!("q = {q} is not {p}^{a}")));
    }
    if BigUint::from(q).pow(e).bits() > PHI_CAP_BITS {
        return Err(Error::Overflow(format!("q^e = {q}^{e} exceeds the 2^{PHI_CAP_BITS} cap")));
    }
    if let Some(n) = checked_pow_u128(q as u128, e).filter(|&v| v - 1 <= FACTOR_CAP) {
        phi_by_factorization(e, q, p, a, n - 1)
    } else {
        let phi = phi_cascade(q, e);
        let phi_large = phi_large_from_phi(&phi, e);
        let phi_basic = phi_cascade(p, a * e);
        Ok(PhiTriple { e, q, phi, phi_large, phi_basic, primes: None })
    }
}

/// Convenience wrapper deriving `(p, a)` from the prime power `q`.
pub fn phi_triple_q(e: u32, q: u64) -> Result<PhiTriple> {
    let fs = factorize_u64(q);
    if fs.len() != 1 {
        return Err(Error::Inconsistent(format!("{q} is not a prime power")));
    }
    let (&p, &a) = fs.iter().next().unwrap();
    phi_triple(e, q, p, a)
}

fn phi_by_factorization(e: u32, q: u64, p: u64, a: u32, n: u128) -> Result<PhiTriple> {
    let mut phi = BigUint::one();
    let mut phi_large = BigUint::one();
    let mut phi_basic = BigUint::one();
    let mut primes = Vec::new();
    if n > 1 {
        for (r, v) in factorize(n)? {
            if !order_is_exactly(q as u128, r, e) {
                continue;
            }
            let rb = BigUint::from(r);
            phi *= rb.pow(v);
            let large = r >= 2 * e as u128 + 1 || v >= 2;
            if r >= 2 * e as u128 + 1 {
                phi_large *= rb.pow(v);
            } else if v >= 2 {
                // r = e+1: leave one factor out so the exponent test demands
                // (e+1)^2 | o(g).
                phi_large *= rb.pow(v - 1);
            }
            let basic = order_is_exactly(p as u128, r, a * e);
            if basic {
                phi_basic *= rb.pow(v);
            }
            primes.push(PpdPrime { r, multiplicity: v, large, basic });
        }
    }
    Ok(PhiTriple { e, q, phi, phi_large, phi_basic, primes: Some(primes) })
}

/// Secondary route for `Φ(e,q)`: start from `q^e - 1` and strip, for each
/// prime `c | e`, everything shared with `q^{e/c} - 1`.  Any non-primitive
/// prime divides one of those subvalues; any primitive prime divides none.
/// Needs no factorization of `q^e - 1`, so it scales to large `e`.
pub fn phi_cascade(q: u64, e: u32) -> BigUint {
    let qb = BigUint::from(q);
    let mut phi = qb.pow(e) - 1u32;
    for &c in factorize_u64(e as u64).keys() {
        let sub = qb.pow(e / c as u32) - 1u32;
        loop {
            let g = phi.gcd(&sub);
            if g.is_one() {
                break;
            }
            phi /= g;
        }
    }
    phi
}

/// Derive `Φ_l` from `Φ`: the only primitive prime that can fall below
/// `2e+1` is `e+1` itself (all primitive primes are `≡ 1 mod e`), and the
/// largeness convention removes exactly one factor of it.
pub fn phi_large_from_phi(phi: &BigUint, e: u32) -> BigUint {
    let r = e as u64 + 1;
    if is_prime_u64(r) {
        let rb = BigUint::from(r);
        if (phi % &rb).is_zero() {
            return phi / rb;
        }
    }
    phi.clone()
}
