//! Exhaustive enumeration of small matrix groups, the independent oracle
//! behind the proportion and recognition tests.
//!
//! Elements are stored as 256-bit packed keys (row-major entry encodings,
//! `⌈log2 q⌉` bits each), so groups up to [`ENUM_CAP`] elements fit in a few
//! dozen megabytes.  Everything downstream decodes elements on the fly.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive};

use crate::classify::classify_element;
use crate::field::{Field, FieldElement};
use crate::matrix::MatrixQ;
use crate::ppd::phi_triple_q;
use crate::{Error, Result};

/// Hard ceiling on the number of elements enumerated before giving up.
pub const ENUM_CAP: u64 = 2_000_000;

#[derive(Clone, Debug)]
pub struct EnumeratedGroup {
    field: Field,
    d: usize,
    bits_per_entry: u32,
    keys: Vec<[u64; 4]>,
    index: HashSet<[u64; 4]>,
}

impl EnumeratedGroup {
    pub fn order(&self) -> u64 {
        self.keys.len() as u64
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn contains(&self, m: &MatrixQ) -> Result<bool> {
        if m.dim() != self.d || *m.field() != self.field {
            return Err(Error::DimensionMismatch("element shape mismatch".into()));
        }
        Ok(self.index.contains(&pack(m, self.bits_per_entry)))
    }

    /// Iterate the elements in BFS discovery order.
    pub fn iter(&self) -> impl Iterator<Item = MatrixQ> + '_ {
        self.keys
            .iter()
            .map(move |k| unpack(&self.field, self.d, self.bits_per_entry, k))
    }
}

fn entry_bits(q: u64) -> u32 {
    64 - (q - 1).leading_zeros() as u32
}

fn pack(m: &MatrixQ, bits: u32) -> [u64; 4] {
    let mut key = [0u64; 4];
    let mut pos = 0u32;
    for e in m.entries() {
        let (word, off) = ((pos / 64) as usize, pos % 64);
        let v = e.0 as u64;
        key[word] |= v << off;
        if off + bits > 64 {
            key[word + 1] |= v >> (64 - off);
        }
        pos += bits;
    }
    key
}

fn unpack(field: &Field, d: usize, bits: u32, key: &[u64; 4]) -> MatrixQ {
    let mask = if bits == 64 { u64::MAX } else { (1u64 << bits) - 1 };
    let mut entries = Vec::with_capacity(d * d);
    let mut pos = 0u32;
    for _ in 0..d * d {
        let (word, off) = ((pos / 64) as usize, pos % 64);
        let mut v = key[word] >> off;
        if off + bits > 64 {
            v |= key[word + 1] << (64 - off);
        }
        entries.push(FieldElement((v & mask) as u32));
        pos += bits;
    }
    MatrixQ::from_entries_unchecked(field, d, entries)
}

/// Breadth-first closure of the generated group, starting at the identity
/// and right-multiplying by generators.
///
/// Fails with `OVERFLOW` when `d²·⌈log2 q⌉ > 256` bits and with
/// `CAP_EXCEEDED` when the closure grows past [`ENUM_CAP`].
pub fn enumerate_group(gens: &[MatrixQ]) -> Result<EnumeratedGroup> {
    if gens.is_empty() {
        return Err(Error::Inconsistent("no generators".into()));
    }
    let field = gens[0].field().clone();
    let d = gens[0].dim();
    for g in gens {
        if g.dim() != d || *g.field() != field {
            return Err(Error::DimensionMismatch("mixed generator shapes".into()));
        }
        if g.det().is_zero() {
            return Err(Error::Validation("singular generator".into()));
        }
    }
    let bits = entry_bits(field.q());
    if (d * d) as u64 * bits as u64 > 256 {
        return Err(Error::Overflow(format!(
            "packed key needs {} bits, cap is 256",
            (d * d) as u64 * bits as u64
        )));
    }
    let identity = MatrixQ::identity(&field, d);
    let mut keys = Vec::new();
    let mut index = HashSet::new();
    let mut queue = std::collections::VecDeque::new();
    let id_key = pack(&identity, bits);
    index.insert(id_key);
    keys.push(id_key);
    queue.push_back(identity);
    while let Some(cur) = queue.pop_front() {
        for g in gens {
            let next = cur.mul(g)?;
            let key = pack(&next, bits);
            if index.insert(key) {
                if index.len() as u64 > ENUM_CAP {
                    return Err(Error::CapExceeded(ENUM_CAP));
                }
                keys.push(key);
                queue.push_back(next);
            }
        }
    }
    Ok(EnumeratedGroup { field, d, bits_per_entry: bits, keys, index })
}

/// Exact fraction of elements that are ppd elements for `e`, by classifying
/// every element.
pub fn exact_ppd_proportion(group: &EnumeratedGroup, e: u32) -> Result<Ratio<u64>> {
    let mut count = 0u64;
    for g in group.iter() {
        if let Some(w) = classify_element(&g)? {
            if w.e == e {
                count += 1;
            }
        }
    }
    Ok(Ratio::new(count, group.order()))
}

/// Per-degree counts `(all, large, basic)` of ppd elements in the group.
pub fn ppd_counts(group: &EnumeratedGroup) -> Result<BTreeMap<u32, (u64, u64, u64)>> {
    let mut counts: BTreeMap<u32, (u64, u64, u64)> = BTreeMap::new();
    for g in group.iter() {
        if let Some(w) = classify_element(&g)? {
            let slot = counts.entry(w.e).or_default();
            slot.0 += 1;
            if w.is_large {
                slot.1 += 1;
            }
            if w.is_basic {
                slot.2 += 1;
            }
        }
    }
    Ok(counts)
}

/// Check the Singer-cycle counting identity at the full degree `e = d`:
/// the exact proportion of ppd elements for `d` must equal
/// `(1/u)·(1 − 1/Φ(d,q))`.
///
/// Fails with `NO_PPD_AT_D` when `Φ(d,q) = 1`, since the identity is then
/// vacuous.
pub fn verify_singer_formula(group: &EnumeratedGroup, u: u64) -> Result<bool> {
    let d = group.dim() as u32;
    let q = group.field().q();
    let triple = phi_triple_q(d, q)?;
    if triple.phi.is_one() {
        return Err(Error::NoPpdAtD);
    }
    let phi = triple
        .phi
        .to_u64()
        .ok_or_else(|| Error::Overflow("Φ(d,q) exceeds u64 for an enumerable group".into()))?;
    let denom = u
        .checked_mul(phi)
        .ok_or_else(|| Error::Overflow("u·Φ(d,q) exceeds u64".into()))?;
    let expected = Ratio::new(phi - 1, denom);
    let actual = exact_ppd_proportion(group, d)?;
    Ok(actual == expected)
}

/// `q^(d²)` as a quick sanity ceiling for callers that want to pre-check
/// enumerability.
pub fn ambient_size(d: u32, q: u64) -> BigUint {
    BigUint::from(q).pow(d * d)
}
