//! Seeded random element generation by product replacement with an
//! accumulator ("rattle"), the sampler behind every randomized routine.
//!
//! The state keeps `m` slots initialized cyclically from the generators plus
//! a running accumulator.  A step replaces a random slot `i` by
//! `slot_i · slot_j^{±1}` for a random `j ≠ i` and multiplies the accumulator
//! by the new slot; inverse slots are maintained alongside so no Gaussian
//! elimination happens after initialization.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::MatrixQ;
use crate::{Error, Result};

/// Identifier recorded in transcripts for replayability.
pub const SAMPLER_NAME: &str = "rattle-chacha8";

pub const DEFAULT_BURN_IN: u32 = 200;

#[derive(Clone, Debug)]
pub struct SamplerState {
    slots: Vec<MatrixQ>,
    inv_slots: Vec<MatrixQ>,
    accumulator: MatrixQ,
    rng: ChaCha8Rng,
    pub seed: u64,
    pub m: usize,
    pub burn_in: u32,
    steps: u64,
}

/// Initialize a sampler over the group generated by `gens`.
///
/// `m = max(10, |gens| + 2)` slots, burn-in of [`DEFAULT_BURN_IN`] steps,
/// randomness from ChaCha8 keyed by `seed` alone, so a `(gens, seed)` pair
/// fully determines the stream.
pub fn sampler_init(gens: &[MatrixQ], seed: u64) -> Result<SamplerState> {
    if gens.is_empty() {
        return Err(Error::Inconsistent("sampler needs at least one generator".into()));
    }
    let field = gens[0].field().clone();
    let d = gens[0].dim();
    for g in gens {
        if g.dim() != d || *g.field() != field {
            return Err(Error::DimensionMismatch("mixed generator shapes".into()));
        }
    }
    let inverses: Vec<MatrixQ> = gens
        .iter()
        .map(|g| g.inverse())
        .collect::<Result<_>>()
        .map_err(|_| Error::Validation("singular generator".into()))?;
    let m = usize::max(10, gens.len() + 2);
    let mut slots = Vec::with_capacity(m);
    let mut inv_slots = Vec::with_capacity(m);
    for i in 0..m {
        slots.push(gens[i % gens.len()].clone());
        inv_slots.push(inverses[i % gens.len()].clone());
    }
    let mut state = SamplerState {
        slots,
        inv_slots,
        accumulator: MatrixQ::identity(&field, d),
        rng: ChaCha8Rng::seed_from_u64(seed),
        seed,
        m,
        burn_in: DEFAULT_BURN_IN,
        steps: 0,
    };
    for _ in 0..state.burn_in {
        state.step()?;
    }
    Ok(state)
}

impl SamplerState {
    fn step(&mut self) -> Result<()> {
        let i = self.rng.gen_range(0..self.m);
        let j = {
            let r = self.rng.gen_range(0..self.m - 1);
            if r >= i {
                r + 1
            } else {
                r
            }
        };
        let direct: bool = self.rng.gen();
        let (new_slot, new_inv) = if direct {
            (
                self.slots[i].mul(&self.slots[j])?,
                self.inv_slots[j].mul(&self.inv_slots[i])?,
            )
        } else {
            (
                self.slots[i].mul(&self.inv_slots[j])?,
                self.slots[j].mul(&self.inv_slots[i])?,
            )
        };
        self.slots[i] = new_slot;
        self.inv_slots[i] = new_inv;
        self.accumulator = self.accumulator.mul(&self.slots[i])?;
        self.steps += 1;
        Ok(())
    }

    /// Advance one step and return the current accumulator.
    pub fn next_element(&mut self) -> Result<MatrixQ> {
        self.step()?;
        Ok(self.accumulator.clone())
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }
}
