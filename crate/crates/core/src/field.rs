//! Small Galois fields `GF(p^a)` and polynomial arithmetic over them.
//!
//! Elements are stored as integer encodings `c0 + c1*p + ... + c_{a-1}*p^(a-1)`
//! of their coordinate vectors in the power basis of a canonical modulus.  The
//! canonical modulus for `GF(p^a)` with `a > 1` is the monic irreducible
//! polynomial of degree `a` over `GF(p)` whose coefficient vector, read as the
//! integer `c0 + c1*p + ...`, is least.  Multiplication runs through discrete
//! logarithm tables built once per field, so fields are capped at
//! `q <= 2^20`; everything bigger is rejected with an overflow error.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::Zero;

use crate::ppd::{factorize_u64, is_prime_u64};
use crate::{Error, Result};

/// Largest supported field size.
pub const Q_CAP: u64 = 1 << 20;
/// Largest supported matrix dimension.
pub const D_CAP: usize = 4096;

/// Build full addition tables only for fields at most this large.
const ADD_TABLE_MAX: u64 = 1024;

/// An element of a [`Field`], stored as its integer encoding.
#[repr(transparent)]
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct FieldInner {
    p: u64,
    a: u32,
    q: u64,
    /// Canonical modulus coefficients over GF(p), constant term first,
    /// length `a + 1` and monic.  Empty for prime fields.
    modulus: Vec<u32>,
    /// `exp[i]` is the encoding of `gamma^i` for a fixed generator `gamma`.
    exp: Vec<u32>,
    /// `log[x]` for `x != 0` inverts `exp`; `log[0]` is a sentinel.
    log: Vec<u32>,
    /// Flat `q * q` addition table for small fields, else empty.
    add_table: Vec<u32>,
    /// Negation table, always present (length `q`).
    neg_table: Vec<u32>,
}

/// A handle to a Galois field; cheap to clone and compare.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.a == other.0.a
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0.q)
    }
}

fn field_cache() -> &'static Mutex<HashMap<(u64, u32), Field>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Field>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Field {
    /// Construct (or fetch from the per-process cache) the field `GF(p^a)`.
    pub fn new(p: u64, a: u32) -> Result<Field> {
        if a == 0 {
            return Err(Error::Inconsistent("extension degree a must be >= 1".into()));
        }
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        let mut q: u64 = 1;
        for _ in 0..a {
            q = q.checked_mul(p).ok_or_else(|| Error::Overflow(format!("p^a with p={p}, a={a}")))?;
            if q > Q_CAP {
                return Err(Error::Overflow(format!("q = {p}^{a} exceeds the cap {Q_CAP}")));
            }
        }
        if let Some(f) = field_cache().lock().unwrap().get(&(p, a)) {
            return Ok(f.clone());
        }
        let built = Field(Arc::new(build_field(p, a, q)));
        let mut cache = field_cache().lock().unwrap();
        Ok(cache.entry((p, a)).or_insert(built).clone())
    }

    /// Construct `GF(q)` from a prime power `q`.
    pub fn from_order(q: u64) -> Result<Field> {
        let (p, a) = split_prime_power(q)
            .ok_or_else(|| Error::Inconsistent(format!("{q} is not a prime power")))?;
        Field::new(p, a)
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.0.p
    }
    #[inline]
    pub fn a(&self) -> u32 {
        self.0.a
    }
    #[inline]
    pub fn q(&self) -> u64 {
        self.0.q
    }

    /// The canonical modulus as coefficient encodings (constant first,
    /// length `a + 1`); empty for prime fields.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// A fixed multiplicative generator.
    pub fn generator(&self) -> FieldElement {
        if self.0.q == 2 {
            FieldElement::ONE
        } else {
            FieldElement(self.0.exp[1])
        }
    }

    /// Validate an integer encoding.
    pub fn elem(&self, rep: u64) -> Result<FieldElement> {
        if rep < self.0.q {
            Ok(FieldElement(rep as u32))
        } else {
            Err(Error::Inconsistent(format!("encoding {rep} out of range for GF({})", self.0.q)))
        }
    }

    #[inline]
    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let f = &*self.0;
        if f.p == 2 {
            return FieldElement(x.0 ^ y.0);
        }
        if !f.add_table.is_empty() {
            return FieldElement(f.add_table[x.0 as usize * f.q as usize + y.0 as usize]);
        }
        FieldElement(add_digits(f.p, f.a, x.0, y.0))
    }

    #[inline]
    pub fn neg(&self, x: FieldElement) -> FieldElement {
        FieldElement(self.0.neg_table[x.0 as usize])
    }

    #[inline]
    pub fn sub(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        if x.0 == 0 || y.0 == 0 {
            return FieldElement::ZERO;
        }
        let f = &*self.0;
        let n = f.q - 1;
        let i = (f.log[x.0 as usize] as u64 + f.log[y.0 as usize] as u64) % n;
        FieldElement(f.exp[i as usize])
    }

    /// Multiplicative inverse; zero maps to an error.
    pub fn inv(&self, x: FieldElement) -> Result<FieldElement> {
        if x.0 == 0 {
            return Err(Error::Singular);
        }
        let f = &*self.0;
        let n = f.q - 1;
        let i = (n - f.log[x.0 as usize] as u64) % n;
        Ok(FieldElement(f.exp[i as usize]))
    }

    pub fn div(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// `x^k` with the convention `0^0 = 1`.
    pub fn pow(&self, x: FieldElement, k: u64) -> FieldElement {
        if x.0 == 0 {
            return if k == 0 { FieldElement::ONE } else { FieldElement::ZERO };
        }
        let f = &*self.0;
        let n = f.q - 1;
        let i = (f.log[x.0 as usize] as u64 * (k % n)) % n;
        FieldElement(f.exp[i as usize])
    }

    /// The field automorphism `x -> x^p` applied `k` times.
    pub fn frobenius(&self, x: FieldElement, k: u32) -> FieldElement {
        let mut e: u64 = 1;
        for _ in 0..(k % self.0.a) {
            e *= self.0.p;
        }
        self.pow(x, e)
    }

    /// Encoding digits of `x` in base `p`, constant coordinate first.
    pub fn digits(&self, x: FieldElement) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.0.a as usize);
        let mut r = x.0 as u64;
        for _ in 0..self.0.a {
            out.push((r % self.0.p) as u32);
            r /= self.0.p;
        }
        out
    }

    /// Inverse of [`Field::digits`].
    pub fn from_digits(&self, digits: &[u32]) -> FieldElement {
        let mut rep: u64 = 0;
        for &c in digits.iter().rev() {
            rep = rep * self.0.p + c as u64;
        }
        FieldElement(rep as u32)
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, x: FieldElement) -> Result<u64> {
        if x.0 == 0 {
            return Err(Error::Singular);
        }
        let n = self.0.q - 1;
        let l = self.0.log[x.0 as usize] as u64;
        Ok(n / num_integer::gcd(n, l))
    }
}

#[inline]
fn add_digits(p: u64, a: u32, x: u32, y: u32) -> u32 {
    let mut rep: u64 = 0;
    let mut scale: u64 = 1;
    let (mut xr, mut yr) = (x as u64, y as u64);
    for _ in 0..a {
        let s = (xr % p + yr % p) % p;
        rep += s * scale;
        scale *= p;
        xr /= p;
        yr /= p;
    }
    rep as u32
}

/// Split a prime power into `(p, a)`; `None` if the input is not one.
pub fn split_prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let fs = factorize_u64(q);
    if fs.len() != 1 {
        return None;
    }
    let (&p, &a) = fs.iter().next().unwrap();
    Some((p, a))
}

/// Slow-path polynomial-basis multiplication used while tables are built.
fn slow_mul(p: u64, modulus: &[u32], x: u64, y: u64) -> u64 {
    let a = modulus.len() - 1;
    let to_digits = |mut v: u64| {
        let mut d = vec![0u64; a];
        for slot in d.iter_mut() {
            *slot = v % p;
            v /= p;
        }
        d
    };
    let xd = to_digits(x);
    let yd = to_digits(y);
    let mut prod = vec![0u64; 2 * a - 1];
    for (i, &xi) in xd.iter().enumerate() {
        if xi == 0 {
            continue;
        }
        for (j, &yj) in yd.iter().enumerate() {
            prod[i + j] = (prod[i + j] + xi * yj) % p;
        }
    }
    // Reduce by the monic modulus from the top down.
    for k in (a..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for (i, &m) in modulus.iter().enumerate().take(a) {
            let idx = k - a + i;
            prod[idx] = (prod[idx] + p * p - c * m as u64 % p) % p;
        }
    }
    let mut rep: u64 = 0;
    for &c in prod[..a].iter().rev() {
        rep = rep * p + c;
    }
    rep
}

fn slow_pow(p: u64, modulus: &[u32], mut base: u64, mut e: u64) -> u64 {
    let mut acc: u64 = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = slow_mul(p, modulus, acc, base);
        }
        base = slow_mul(p, modulus, base, base);
        e >>= 1;
    }
    acc
}

fn build_field(p: u64, a: u32, q: u64) -> FieldInner {
    let modulus = if a == 1 { Vec::new() } else { canonical_modulus(p, a) };

    // Find a generator of the multiplicative group, trying encodings in order.
    let n = q - 1;
    let nf: Vec<u64> = factorize_u64(n.max(1)).keys().copied().collect();
    let prime_mul = |x: u64, y: u64| x * y % p;
    let pow = |base: u64, e: u64| -> u64 {
        if a == 1 {
            let mut acc = 1;
            let mut b = base;
            let mut e = e;
            while e > 0 {
                if e & 1 == 1 {
                    acc = prime_mul(acc, b);
                }
                b = prime_mul(b, b);
                e >>= 1;
            }
            acc
        } else {
            slow_pow(p, &modulus, base, e)
        }
    };
    let mut gamma = 1u64;
    if n > 1 {
        gamma = (2..q)
            .find(|&g| nf.iter().all(|&r| pow(g, n / r) != 1))
            .expect("multiplicative group of a finite field is cyclic");
    }

    let mut exp = vec![0u32; n.max(1) as usize];
    let mut log = vec![0u32; q as usize];
    let mut cur = 1u64;
    for (i, slot) in exp.iter_mut().enumerate() {
        *slot = cur as u32;
        log[cur as usize] = i as u32;
        cur = if a == 1 { prime_mul(cur, gamma) } else { slow_mul(p, &modulus, cur, gamma) };
    }

    let mut neg_table = vec![0u32; q as usize];
    for (x, slot) in neg_table.iter_mut().enumerate() {
        let mut rep: u64 = 0;
        let mut scale: u64 = 1;
        let mut r = x as u64;
        for _ in 0..a {
            rep += ((p - r % p) % p) * scale;
            scale *= p;
            r /= p;
        }
        *slot = rep as u32;
    }

    let add_table = if p != 2 && q <= ADD_TABLE_MAX {
        let mut t = vec![0u32; (q * q) as usize];
        for x in 0..q {
            for y in 0..=x {
                let s = add_digits(p, a, x as u32, y as u32);
                t[(x * q + y) as usize] = s;
                t[(y * q + x) as usize] = s;
            }
        }
        t
    } else {
        Vec::new()
    };

    FieldInner { p, a, q, modulus, exp, log, add_table, neg_table }
}

/// The canonical degree-`a` modulus over `GF(p)`: the monic irreducible whose
/// coefficient vector encodes to the least integer.
fn canonical_modulus(p: u64, a: u32) -> Vec<u32> {
    let prime = Field::new(p, 1).expect("prime field");
    let pa = p.pow(a);
    for v in 0..pa {
        let mut coeffs = Vec::with_capacity(a as usize + 1);
        let mut r = v;
        for _ in 0..a {
            coeffs.push((r % p) as u32);
            r /= p;
        }
        coeffs.push(1);
        let f = Poly { c: coeffs.iter().map(|&c| FieldElement(c)).collect() };
        if prime.poly_is_irreducible(&f) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree");
}

/// A polynomial over some field, coefficients constant-term first with no
/// trailing zeros; the zero polynomial has an empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    pub c: Vec<FieldElement>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly { c: vec![FieldElement::ONE] }
    }

    /// The monomial `t`.
    pub fn t() -> Poly {
        Poly { c: vec![FieldElement::ZERO, FieldElement::ONE] }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, with `deg 0 = -1` encoded as `None`.
    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn deg(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    fn trim(mut self) -> Poly {
        while let Some(last) = self.c.last() {
            if last.is_zero() {
                self.c.pop();
            } else {
                break;
            }
        }
        self
    }

    /// Space-separated integer encodings, constant term first.
    pub fn to_text(&self) -> String {
        if self.c.is_empty() {
            return "0".into();
        }
        self.c.iter().map(|e| e.0.to_string()).collect::<Vec<_>>().join(" ")
    }
}

impl Field {
    pub fn poly_from_reps(&self, reps: &[u64]) -> Result<Poly> {
        let mut c = Vec::with_capacity(reps.len());
        for &r in reps {
            c.push(self.elem(r)?);
        }
        Ok(Poly { c }.trim())
    }

    pub fn poly_add(&self, f: &Poly, g: &Poly) -> Poly {
        let n = f.c.len().max(g.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let x = f.c.get(i).copied().unwrap_or_default();
            let y = g.c.get(i).copied().unwrap_or_default();
            c.push(self.add(x, y));
        }
        Poly { c }.trim()
    }

    pub fn poly_sub(&self, f: &Poly, g: &Poly) -> Poly {
        let n = f.c.len().max(g.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let x = f.c.get(i).copied().unwrap_or_default();
            let y = g.c.get(i).copied().unwrap_or_default();
            c.push(self.sub(x, y));
        }
        Poly { c }.trim()
    }

    pub fn poly_scale(&self, f: &Poly, s: FieldElement) -> Poly {
        Poly { c: f.c.iter().map(|&x| self.mul(x, s)).collect() }.trim()
    }

    pub fn poly_mul(&self, f: &Poly, g: &Poly) -> Poly {
        if f.is_zero() || g.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![FieldElement::ZERO; f.c.len() + g.c.len() - 1];
        for (i, &x) in f.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in g.c.iter().enumerate() {
                c[i + j] = self.add(c[i + j], self.mul(x, y));
            }
        }
        Poly { c }.trim()
    }

    /// Quotient and remainder; the divisor must be nonzero.
    pub fn poly_divrem(&self, f: &Poly, g: &Poly) -> Result<(Poly, Poly)> {
        if g.is_zero() {
            return Err(Error::ZeroModulus);
        }
        if f.c.len() < g.c.len() {
            return Ok((Poly::zero(), f.clone()));
        }
        let lead_inv = self.inv(*g.c.last().unwrap())?;
        let mut rem = f.c.clone();
        let dq = f.c.len() - g.c.len();
        let mut quot = vec![FieldElement::ZERO; dq + 1];
        for k in (0..=dq).rev() {
            let coef = self.mul(rem[k + g.c.len() - 1], lead_inv);
            quot[k] = coef;
            if coef.is_zero() {
                continue;
            }
            for (i, &gc) in g.c.iter().enumerate() {
                rem[k + i] = self.sub(rem[k + i], self.mul(coef, gc));
            }
        }
        Ok((Poly { c: quot }.trim(), Poly { c: rem }.trim()))
    }

    pub fn poly_rem(&self, f: &Poly, g: &Poly) -> Result<Poly> {
        Ok(self.poly_divrem(f, g)?.1)
    }

    /// Monic greatest common divisor.
    pub fn poly_gcd(&self, f: &Poly, g: &Poly) -> Result<Poly> {
        let (mut x, mut y) = (f.clone(), g.clone());
        while !y.is_zero() {
            let r = self.poly_rem(&x, &y)?;
            x = y;
            y = r;
        }
        Ok(self.poly_monic(&x))
    }

    pub fn poly_monic(&self, f: &Poly) -> Poly {
        match f.c.last() {
            None => Poly::zero(),
            Some(&l) if l == FieldElement::ONE => f.clone(),
            Some(&l) => self.poly_scale(f, self.inv(l).expect("nonzero leading coefficient")),
        }
    }

    pub fn poly_deriv(&self, f: &Poly) -> Poly {
        if f.c.len() < 2 {
            return Poly::zero();
        }
        let mut c = Vec::with_capacity(f.c.len() - 1);
        for (i, &x) in f.c.iter().enumerate().skip(1) {
            // The scalar i embeds into the prime subfield as encoding i mod p.
            let k = FieldElement((i as u64 % self.p()) as u32);
            c.push(self.mul(k, x));
        }
        Poly { c }.trim()
    }

    pub fn poly_eval(&self, f: &Poly, x: FieldElement) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        for &c in f.c.iter().rev() {
            acc = self.add(self.mul(acc, x), c);
        }
        acc
    }

    /// `base^e mod m` by binary exponentiation; `m` must have degree >= 1.
    pub fn poly_powmod(&self, base: &Poly, e: &BigUint, m: &Poly) -> Result<Poly> {
        if m.deg() == 0 || m.is_zero() {
            return Err(Error::ZeroModulus);
        }
        let mut result = Poly::one();
        let mut b = self.poly_rem(base, m)?;
        if e.is_zero() {
            return Ok(result);
        }
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                result = self.poly_rem(&self.poly_mul(&result, &b), m)?;
            }
            if i + 1 < bits {
                b = self.poly_rem(&self.poly_mul(&b, &b), m)?;
            }
        }
        Ok(result)
    }

    pub fn poly_powmod_u64(&self, base: &Poly, e: u64, m: &Poly) -> Result<Poly> {
        self.poly_powmod(base, &BigUint::from(e), m)
    }

    /// Product of the distinct monic irreducible factors of `f`.
    pub fn poly_radical(&self, f: &Poly) -> Result<Poly> {
        let f = self.poly_monic(f);
        if f.deg() == 0 {
            return Ok(Poly::one());
        }
        let df = self.poly_deriv(&f);
        if df.is_zero() {
            // f = h(t^p); its p-th root has the same radical.
            let root = self.poly_pth_root(&f);
            return self.poly_radical(&root);
        }
        let g = self.poly_gcd(&f, &df)?;
        let v = self.poly_divrem(&f, &g)?.0; // distinct factors with multiplicity not divisible by p
        let mut w = g;
        loop {
            let t = self.poly_gcd(&w, &v)?;
            if t.deg() == 0 {
                break;
            }
            w = self.poly_divrem(&w, &t)?.0;
        }
        // w now collects the factors whose multiplicity is divisible by p.
        if w.deg() == 0 {
            return Ok(self.poly_monic(&v));
        }
        let rest = self.poly_radical(&self.poly_pth_root(&w))?;
        Ok(self.poly_mul(&self.poly_monic(&v), &rest))
    }

    /// p-th root of a polynomial all of whose terms have exponent divisible
    /// by p (the situation `f' = 0`).
    fn poly_pth_root(&self, f: &Poly) -> Poly {
        let p = self.p() as usize;
        let e = self.q() / self.p(); // x -> x^(q/p) inverts x -> x^p
        let mut c = Vec::with_capacity(f.c.len() / p + 1);
        let mut i = 0;
        while i < f.c.len() {
            c.push(self.pow(f.c[i], e));
            i += p;
        }
        Poly { c }.trim()
    }

    /// Square-free part followed by a distinct-degree split.
    ///
    /// Returns `(m, g_m)` pairs in increasing degree `m`, where `g_m` is the
    /// product of the distinct monic irreducible factors of `f` of degree
    /// `m`.  Both steps are deterministic; no equal-degree splitting is done.
    pub fn poly_sfdd(&self, f: &Poly) -> Result<Vec<(u32, Poly)>> {
        if f.deg() == 0 || f.is_zero() {
            return Err(Error::Inconsistent("sfdd needs degree >= 1".into()));
        }
        let mut rem = self.poly_radical(f)?;
        let mut out = Vec::new();
        let mut h = self.poly_rem(&Poly::t(), &rem)?;
        let mut m: u32 = 0;
        while rem.deg() >= 1 {
            m += 1;
            if rem.deg() < 2 * m as usize {
                // The remainder is irreducible: it has no factor of degree
                // below m, and its degree is less than 2m.
                out.push((rem.deg() as u32, self.poly_monic(&rem)));
                break;
            }
            h = self.poly_powmod_u64(&h, self.q(), &rem)?;
            let slot = self.poly_gcd(&self.poly_sub(&h, &Poly::t()), &rem)?;
            if slot.deg() >= 1 {
                out.push((m, slot.clone()));
                rem = self.poly_divrem(&rem, &slot)?.0;
                h = self.poly_rem(&h, &rem)?;
            }
        }
        Ok(out)
    }

    /// Deterministic irreducibility test (Rabin's criterion).
    pub fn poly_is_irreducible(&self, f: &Poly) -> bool {
        let n = f.deg();
        if f.is_zero() || n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        if f.c[0].is_zero() {
            return false; // divisible by t
        }
        let q = BigUint::from(self.q());
        let t = Poly::t();
        // t^(q^n) == t mod f
        let qn = q.pow(n as u32);
        match self.poly_powmod(&t, &qn, f) {
            Ok(r) if r == self.poly_rem(&t, f).unwrap() => {}
            _ => return false,
        }
        for r in factorize_u64(n as u64).keys() {
            let e = q.pow((n / *r as usize) as u32);
            let tr = match self.poly_powmod(&t, &e, f) {
                Ok(x) => x,
                Err(_) => return false,
            };
            let g = match self.poly_gcd(&self.poly_sub(&tr, &t), f) {
                Ok(g) => g,
                Err(_) => return false,
            };
            if g.deg() != 0 {
                return false;
            }
        }
        true
    }
}
