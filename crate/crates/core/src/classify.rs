//! Classification of single matrices as ppd elements.
//!
//! A matrix `g` in GL(d,q) is a ppd element for `e` when its order is
//! divisible by a primitive prime divisor of `q^e - 1`.  Detection works on
//! the characteristic polynomial: a ppd element for `e > d/2` has exactly one
//! irreducible factor of degree `e`, and the order condition becomes a residue
//! test modulo that factor.

use num_bigint::BigUint;

use crate::field::Poly;
use crate::groups::Family;
use crate::matrix::MatrixQ;
use crate::ppd::{has_ppd, phi_triple};
use crate::{Error, Result};

/// Evidence that a matrix is a ppd element for `e`, with the two refinements
/// used by the recognition stages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PpdWitness {
    pub e: u32,
    /// The unique irreducible degree-`e` factor of the characteristic
    /// polynomial.
    pub factor: Poly,
    /// Order divisible by the large part `Φ_l(e,q)`, meaning a primitive
    /// prime `r >= 2e+1` divides it, or `(e+1)^2` does.
    pub is_large: bool,
    /// Order divisible by a prime that is primitive already over the prime
    /// field (a ppd of `p^{ae} - 1` for `q = p^a`).
    pub is_basic: bool,
}

/// Decide whether `g` is a ppd element for some `e > d/2`, and if so for
/// which `e` and with which refinement flags.
///
/// Returns `Ok(None)` for non-ppd elements; singular input is rejected with
/// `SINGULAR_INPUT` (detected on the constant coefficient of the
/// characteristic polynomial, so no inversion is attempted).
pub fn classify_element(g: &MatrixQ) -> Result<Option<PpdWitness>> {
    let f = g.field().clone();
    let d = g.dim();
    let chi = g.charpoly();
    if chi.c[0].is_zero() {
        return Err(Error::SingularInput);
    }
    let slots = f.poly_sfdd(&chi)?;
    let mut candidate: Option<(u32, Poly)> = None;
    for (m, product) in slots {
        if (m as usize) * 2 > d {
            debug_assert_eq!(
                product.deg(),
                m as usize,
                "two factors of degree > d/2 cannot fit in degree d"
            );
            debug_assert!(candidate.is_none());
            candidate = Some((m, product));
        }
    }
    let (e, factor) = match candidate {
        Some(c) => c,
        None => return Ok(None),
    };
    let triple = phi_triple(e, f.q(), f.p(), f.a())?;
    if triple.phi == BigUint::from(1u32) {
        return Ok(None);
    }
    let qe1 = BigUint::from(f.q()).pow(e) - 1u32;
    let t = Poly::t();
    let one = Poly::one();
    let passes = |part: &BigUint| -> Result<bool> {
        if *part <= BigUint::from(1u32) {
            return Ok(false);
        }
        let residue = f.poly_powmod(&t, &(&qe1 / part), &factor)?;
        Ok(residue != one)
    };
    if !passes(&triple.phi)? {
        return Ok(None);
    }
    let is_large = passes(&triple.phi_large)?;
    let is_basic = passes(&triple.phi_basic)?;
    Ok(Some(PpdWitness { e, factor, is_large, is_basic }))
}

/// The ppd degrees `e` in `(d/2, d]` that elements of the Ω-subgroup of the
/// given family can realize: even `e` only for symplectic and orthogonal
/// cases, odd `e` only for unitary ones, `e = d` removed for O⁺, and degrees
/// with `Φ(e,q) = 1` removed everywhere.
pub fn allowed_e(family: Family, d: u32, q: u64) -> Result<Vec<u32>> {
    if d < 2 {
        return Err(Error::InvalidCase(format!("dimension {d} < 2")));
    }
    match family {
        Family::Symplectic | Family::OrthogonalPlus | Family::OrthogonalMinus => {
            if d % 2 != 0 {
                return Err(Error::InvalidCase(format!(
                    "{} requires even dimension, got {d}",
                    family.token()
                )));
            }
        }
        Family::OrthogonalCircle => {
            if d % 2 == 0 {
                return Err(Error::InvalidCase(format!("ocirc requires odd dimension, got {d}")));
            }
            if q % 2 == 0 {
                return Err(Error::InvalidCase("ocirc requires odd q".into()));
            }
        }
        Family::Unitary => match crate::field::split_prime_power(q) {
            Some((_, a)) if a % 2 == 0 => {}
            _ => {
                return Err(Error::InvalidCase(format!("unitary requires a square field, got q = {q}")));
            }
        },
        Family::Linear => {}
    }
    let mut out = Vec::new();
    for e in (d / 2 + 1)..=d {
        let parity_ok = match family {
            Family::Linear => true,
            Family::Unitary => e % 2 == 1,
            _ => e % 2 == 0,
        };
        if !parity_ok {
            continue;
        }
        if family == Family::OrthogonalPlus && e == d {
            continue;
        }
        if !has_ppd(q, e) {
            continue;
        }
        out.push(e);
    }
    Ok(out)
}
