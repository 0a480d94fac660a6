//! Irreducibility testing (Norton-style dual spinning) and centralizer
//! dimension for matrix groups given by generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{FieldElement, Poly};
use crate::matrix::{kernel_basis, MatrixQ, RowSpace};
use crate::{Error, Result};

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum IrreducibilityStatus {
    Irreducible,
    Reducible,
    Inconclusive,
}

/// Outcome of the irreducibility test.  For `Reducible` the witness rows span
/// a proper nonzero invariant subspace, checkable with [`is_invariant`].
#[derive(Clone, Debug)]
pub struct IrreducibilityReport {
    pub status: IrreducibilityStatus,
    pub witness: Option<Vec<Vec<FieldElement>>>,
    pub attempts: u32,
}

/// Span of `v` under the algebra generated by `gens` (as a row space).
pub fn spin(gens: &[MatrixQ], v: &[FieldElement]) -> Result<RowSpace> {
    let field = gens[0].field().clone();
    let d = gens[0].dim();
    let mut space = RowSpace::new(&field, d);
    space.insert(v);
    let mut frontier: Vec<Vec<FieldElement>> = vec![v.to_vec()];
    while let Some(w) = frontier.pop() {
        for g in gens {
            let image = crate::matrix::row_times(&field, &w, g);
            if space.insert(&image) {
                frontier.push(image);
            }
            if space.dim() == d {
                return Ok(space);
            }
        }
    }
    Ok(space)
}

/// Whether every generator maps the row space of `rows` into itself.
pub fn is_invariant(gens: &[MatrixQ], rows: &[Vec<FieldElement>]) -> Result<bool> {
    if gens.is_empty() {
        return Err(Error::Inconsistent("no generators".into()));
    }
    let field = gens[0].field().clone();
    let mut space = RowSpace::new(&field, gens[0].dim());
    for r in rows {
        space.insert(r);
    }
    for g in gens {
        for r in rows {
            let image = crate::matrix::row_times(&field, r, g);
            if !space.contains(&image) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Probabilistic irreducibility test for the natural module of `⟨gens⟩`.
///
/// Each attempt draws a random element θ of the enveloping algebra (a short
/// random linear combination of words in the generators), picks an
/// irreducible factor `h` of its characteristic polynomial that is alone in
/// its degree slot, and spins a kernel vector of `h(θ)`.  A proper spin
/// certifies reducibility.  If the primal spin fills the space, the nullity
/// of `h(θ)` equals `deg h`, and the dual spin (kernel vector of `h(θ)ᵀ`
/// under the transposed generators) also fills, the module is certified
/// irreducible.  Attempts that certify nothing are retried up to
/// `max_attempts` before reporting `Inconclusive`.
pub fn is_irreducible(gens: &[MatrixQ], max_attempts: u32, seed: u64) -> Result<IrreducibilityReport> {
    if gens.is_empty() {
        return Err(Error::Inconsistent("no generators".into()));
    }
    let field = gens[0].field().clone();
    let d = gens[0].dim();
    for g in gens {
        if g.dim() != d || *g.field() != field {
            return Err(Error::DimensionMismatch("mixed generator shapes".into()));
        }
    }
    if d == 1 {
        return Ok(IrreducibilityReport {
            status: IrreducibilityStatus::Irreducible,
            witness: None,
            attempts: 0,
        });
    }
    let transposed: Vec<MatrixQ> = gens.iter().map(|g| g.transpose()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=max_attempts {
        let theta = random_algebra_element(&field, gens, &mut rng)?;
        let chi = theta.charpoly();
        let slots = field.poly_sfdd(&chi)?;
        for (m, product) in slots {
            if product.deg() != m as usize {
                continue;
            }
            let h: Poly = product;
            let h_theta = theta.poly_at(&h)?;
            let kernel = h_theta.nullspace();
            debug_assert!(!kernel.is_empty(), "h divides the characteristic polynomial");
            let Some(v) = kernel.first() else { continue };
            let primal = spin(gens, v)?;
            if primal.dim() < d {
                return Ok(IrreducibilityReport {
                    status: IrreducibilityStatus::Reducible,
                    witness: Some(primal.basis().to_vec()),
                    attempts: attempt,
                });
            }
            if kernel.len() != m as usize {
                continue;
            }
            let dual_kernel = h_theta.transpose().nullspace();
            let Some(w) = dual_kernel.first() else { continue };
            let dual = spin(&transposed, w)?;
            if dual.dim() < d {
                // A proper invariant subspace of the dual module; its
                // annihilator is a proper invariant subspace of the module.
                let perp = kernel_basis(&field, dual.basis(), d);
                return Ok(IrreducibilityReport {
                    status: IrreducibilityStatus::Reducible,
                    witness: Some(perp),
                    attempts: attempt,
                });
            }
            return Ok(IrreducibilityReport {
                status: IrreducibilityStatus::Irreducible,
                witness: None,
                attempts: attempt,
            });
        }
    }
    Ok(IrreducibilityReport {
        status: IrreducibilityStatus::Inconclusive,
        witness: None,
        attempts: max_attempts,
    })
}

fn random_algebra_element(
    field: &crate::field::Field,
    gens: &[MatrixQ],
    rng: &mut ChaCha8Rng,
) -> Result<MatrixQ> {
    let d = gens[0].dim();
    let mut theta = MatrixQ::zero(field, d);
    for _ in 0..3 {
        let len = rng.gen_range(1..=6usize);
        let mut word = gens[rng.gen_range(0..gens.len())].clone();
        for _ in 1..len {
            word = word.mul(&gens[rng.gen_range(0..gens.len())])?;
        }
        let coef = FieldElement(rng.gen_range(1..field.q()) as u32);
        theta = theta.add(&word.scale(coef))?;
    }
    Ok(theta)
}

/// Dimension of the centralizer algebra `{X : Xg = gX for all g}`.
///
/// Solves the joint commutation system by incremental row reduction on the
/// `d²`-dimensional coefficient space; `1` means only scalars centralize.
pub fn centralizer_dim(mats: &[MatrixQ]) -> Result<usize> {
    if mats.is_empty() {
        return Err(Error::Inconsistent("no matrices".into()));
    }
    let field = mats[0].field().clone();
    let d = mats[0].dim();
    let width = d * d;
    let mut constraints = RowSpace::new(&field, width);
    for g in mats {
        if g.dim() != d || *g.field() != field {
            return Err(Error::DimensionMismatch("mixed matrix shapes".into()));
        }
        for i in 0..d {
            for j in 0..d {
                // Entry (i,j) of Xg - gX as a linear form in the entries of X.
                let mut row = vec![FieldElement::ZERO; width];
                for k in 0..d {
                    row[i * d + k] = field.add(row[i * d + k], g.get(k, j));
                    row[k * d + j] = field.sub(row[k * d + j], g.get(i, k));
                }
                constraints.insert(&row);
            }
        }
    }
    Ok(width - constraints.dim())
}
