//! Dense square matrices over a [`Field`], acting on row vectors (`v ↦ v·g`).

use std::fmt;

use crate::field::{Field, FieldElement, Poly, D_CAP};
use crate::{Error, Result};

/// A dense `d × d` matrix over `GF(q)`, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct MatrixQ {
    field: Field,
    d: usize,
    entries: Vec<FieldElement>,
}

impl fmt::Debug for MatrixQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatrixQ {:?} d={}", self.field, self.d)?;
        for i in 0..self.d {
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        Ok(())
    }
}

impl MatrixQ {
    pub fn new(field: Field, d: usize, entries: Vec<FieldElement>) -> Result<MatrixQ> {
        if d == 0 || d > D_CAP {
            return Err(Error::Overflow(format!("dimension {d} outside 1..={D_CAP}")));
        }
        if entries.len() != d * d {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {d}x{d} matrix",
                entries.len()
            )));
        }
        for e in &entries {
            field.elem(e.0 as u64)?;
        }
        Ok(MatrixQ { field, d, entries })
    }

    /// Trusted constructor for decoders that already validated encodings.
    pub(crate) fn from_entries_unchecked(
        field: &Field,
        d: usize,
        entries: Vec<FieldElement>,
    ) -> MatrixQ {
        debug_assert_eq!(entries.len(), d * d);
        MatrixQ { field: field.clone(), d, entries }
    }

    /// Build from integer encodings, one row per inner vector.
    pub fn from_rows(field: &Field, rows: &[Vec<u64>]) -> Result<MatrixQ> {
        let d = rows.len();
        let mut entries = Vec::with_capacity(d * d);
        for row in rows {
            if row.len() != d {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in a {d}x{d} matrix",
                    row.len()
                )));
            }
            for &v in row {
                entries.push(field.elem(v)?);
            }
        }
        MatrixQ::new(field.clone(), d, entries)
    }

    /// Build from a linear action on basis row vectors.
    pub fn from_action(
        field: &Field,
        d: usize,
        mut image_of_basis: impl FnMut(usize) -> Vec<FieldElement>,
    ) -> Result<MatrixQ> {
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            let row = image_of_basis(i);
            if row.len() != d {
                return Err(Error::DimensionMismatch("basis image length".into()));
            }
            entries.extend(row);
        }
        MatrixQ::new(field.clone(), d, entries)
    }

    pub fn identity(field: &Field, d: usize) -> MatrixQ {
        let mut entries = vec![FieldElement::ZERO; d * d];
        for i in 0..d {
            entries[i * d + i] = FieldElement::ONE;
        }
        MatrixQ { field: field.clone(), d, entries }
    }

    pub fn zero(field: &Field, d: usize) -> MatrixQ {
        MatrixQ { field: field.clone(), d, entries: vec![FieldElement::ZERO; d * d] }
    }

    /// Scalar matrix `c·I`.
    pub fn scalar(field: &Field, d: usize, c: FieldElement) -> MatrixQ {
        let mut m = MatrixQ::zero(field, d);
        for i in 0..d {
            m.set(i, i, c);
        }
        m
    }

    /// Companion matrix of a monic polynomial: 1s on the superdiagonal and
    /// the negated coefficients in the last row, so its characteristic
    /// polynomial is the input.
    pub fn companion(field: &Field, f: &Poly) -> Result<MatrixQ> {
        let d = f.deg();
        if f.is_zero() || d == 0 {
            return Err(Error::Inconsistent("companion needs degree >= 1".into()));
        }
        if *f.c.last().unwrap() != FieldElement::ONE {
            return Err(Error::Inconsistent("companion needs a monic polynomial".into()));
        }
        let mut m = MatrixQ::zero(field, d);
        for i in 0..d - 1 {
            m.set(i, i + 1, FieldElement::ONE);
        }
        for j in 0..d {
            m.set(d - 1, j, field.neg(f.c[j]));
        }
        Ok(m)
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }
    #[inline]
    pub fn dim(&self) -> usize {
        self.d
    }
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.entries[i * self.d + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.entries[i * self.d + j] = v;
    }
    #[inline]
    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.entries[i * self.d..(i + 1) * self.d]
    }
    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        *self == MatrixQ::identity(&self.field, self.d)
    }

    fn check_compatible(&self, other: &MatrixQ) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.d != other.d {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.d, other.d)));
        }
        Ok(())
    }

    /// Exact matrix product.
    pub fn mul(&self, other: &MatrixQ) -> Result<MatrixQ> {
        self.check_compatible(other)?;
        let d = self.d;
        let f = &self.field;
        if f.q() == 2 && d >= 16 {
            return Ok(self.mul_gf2(other));
        }
        let mut out = vec![FieldElement::ZERO; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let brow = other.row(k);
                let orow = &mut out[i * d..(i + 1) * d];
                for j in 0..d {
                    orow[j] = f.add(orow[j], f.mul(a, brow[j]));
                }
            }
        }
        Ok(MatrixQ { field: f.clone(), d, entries: out })
    }

    /// Bit-packed product over GF(2): rows of the right factor are packed
    /// into machine words and xor-accumulated.
    fn mul_gf2(&self, other: &MatrixQ) -> MatrixQ {
        let d = self.d;
        let words = d.div_ceil(64);
        let mut packed = vec![0u64; d * words];
        for k in 0..d {
            let row = other.row(k);
            let dst = &mut packed[k * words..(k + 1) * words];
            for (j, e) in row.iter().enumerate() {
                if !e.is_zero() {
                    dst[j / 64] |= 1 << (j % 64);
                }
            }
        }
        let mut out = vec![FieldElement::ZERO; d * d];
        let mut acc = vec![0u64; words];
        for i in 0..d {
            acc.iter_mut().for_each(|w| *w = 0);
            let arow = self.row(i);
            for (k, e) in arow.iter().enumerate() {
                if !e.is_zero() {
                    let src = &packed[k * words..(k + 1) * words];
                    for (w, s) in acc.iter_mut().zip(src) {
                        *w ^= s;
                    }
                }
            }
            let orow = &mut out[i * d..(i + 1) * d];
            for (j, o) in orow.iter_mut().enumerate() {
                if (acc[j / 64] >> (j % 64)) & 1 == 1 {
                    *o = FieldElement::ONE;
                }
            }
        }
        MatrixQ { field: self.field.clone(), d, entries: out }
    }

    pub fn add(&self, other: &MatrixQ) -> Result<MatrixQ> {
        self.check_compatible(other)?;
        let f = &self.field;
        let entries =
            self.entries.iter().zip(&other.entries).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(MatrixQ { field: f.clone(), d: self.d, entries })
    }

    pub fn sub(&self, other: &MatrixQ) -> Result<MatrixQ> {
        self.check_compatible(other)?;
        let f = &self.field;
        let entries =
            self.entries.iter().zip(&other.entries).map(|(&a, &b)| f.sub(a, b)).collect();
        Ok(MatrixQ { field: f.clone(), d: self.d, entries })
    }

    pub fn scale(&self, c: FieldElement) -> MatrixQ {
        let f = &self.field;
        let entries = self.entries.iter().map(|&a| f.mul(a, c)).collect();
        MatrixQ { field: f.clone(), d: self.d, entries }
    }

    pub fn transpose(&self) -> MatrixQ {
        let d = self.d;
        let mut entries = vec![FieldElement::ZERO; d * d];
        for i in 0..d {
            for j in 0..d {
                entries[j * d + i] = self.entries[i * d + j];
            }
        }
        MatrixQ { field: self.field.clone(), d, entries }
    }

    /// Apply the Frobenius `x ↦ x^(p^k)` to every entry.
    pub fn frobenius_entries(&self, k: u32) -> MatrixQ {
        let f = &self.field;
        let entries = self.entries.iter().map(|&a| f.frobenius(a, k)).collect();
        MatrixQ { field: f.clone(), d: self.d, entries }
    }

    /// `self^k` by binary powering.
    pub fn pow(&self, mut k: u64) -> Result<MatrixQ> {
        let mut acc = MatrixQ::identity(&self.field, self.d);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Gaussian elimination inverse.
    pub fn inverse(&self) -> Result<MatrixQ> {
        let d = self.d;
        let f = &self.field;
        let mut a = self.clone();
        let mut inv = MatrixQ::identity(f, d);
        for col in 0..d {
            let pivot = (col..d).find(|&r| !a.get(r, col).is_zero()).ok_or(Error::Singular)?;
            if pivot != col {
                for j in 0..d {
                    let (x, y) = (a.get(pivot, j), a.get(col, j));
                    a.set(pivot, j, y);
                    a.set(col, j, x);
                    let (x, y) = (inv.get(pivot, j), inv.get(col, j));
                    inv.set(pivot, j, y);
                    inv.set(col, j, x);
                }
            }
            let s = f.inv(a.get(col, col))?;
            for j in 0..d {
                a.set(col, j, f.mul(a.get(col, j), s));
                inv.set(col, j, f.mul(inv.get(col, j), s));
            }
            for r in 0..d {
                if r == col {
                    continue;
                }
                let factor = a.get(r, col);
                if factor.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let v = f.sub(a.get(r, j), f.mul(factor, a.get(col, j)));
                    a.set(r, j, v);
                    let v = f.sub(inv.get(r, j), f.mul(factor, inv.get(col, j)));
                    inv.set(r, j, v);
                }
            }
        }
        Ok(inv)
    }

    /// Determinant by Gaussian elimination (independent of the charpoly path).
    pub fn det(&self) -> FieldElement {
        let d = self.d;
        let f = &self.field;
        let mut a = self.clone();
        let mut det = FieldElement::ONE;
        for col in 0..d {
            let Some(pivot) = (col..d).find(|&r| !a.get(r, col).is_zero()) else {
                return FieldElement::ZERO;
            };
            if pivot != col {
                for j in 0..d {
                    let (x, y) = (a.get(pivot, j), a.get(col, j));
                    a.set(pivot, j, y);
                    a.set(col, j, x);
                }
                det = f.neg(det);
            }
            let p = a.get(col, col);
            det = f.mul(det, p);
            let s = f.inv(p).expect("pivot nonzero");
            for r in col + 1..d {
                let factor = f.mul(a.get(r, col), s);
                if factor.is_zero() {
                    continue;
                }
                for j in col..d {
                    let v = f.sub(a.get(r, j), f.mul(factor, a.get(col, j)));
                    a.set(r, j, v);
                }
            }
        }
        det
    }

    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<FieldElement>> = (0..self.d).map(|i| self.row(i).to_vec()).collect();
        rref_in_place(&self.field, &mut rows).len()
    }

    /// Row basis of `{v : v·A = 0}`, in reduced row echelon form.
    pub fn nullspace(&self) -> Vec<Vec<FieldElement>> {
        // v·A = 0 is the kernel of Aᵀ on column vectors; row-reduce Aᵀ.
        let t = self.transpose();
        let rows: Vec<Vec<FieldElement>> = (0..self.d).map(|i| t.row(i).to_vec()).collect();
        kernel_basis(&self.field, &rows, self.d)
    }

    pub fn nullity(&self) -> usize {
        self.d - self.rank()
    }

    /// Characteristic polynomial `det(tI − A)` via Hessenberg reduction.
    pub fn charpoly(&self) -> Poly {
        let d = self.d;
        let f = &self.field;
        let mut h = self.clone();
        // Similarity-reduce to upper Hessenberg form.
        for j in 0..d.saturating_sub(2) {
            let Some(pivot) = (j + 1..d).find(|&r| !h.get(r, j).is_zero()) else {
                continue;
            };
            if pivot != j + 1 {
                for c in 0..d {
                    let (x, y) = (h.get(pivot, c), h.get(j + 1, c));
                    h.set(pivot, c, y);
                    h.set(j + 1, c, x);
                }
                for r in 0..d {
                    let (x, y) = (h.get(r, pivot), h.get(r, j + 1));
                    h.set(r, pivot, y);
                    h.set(r, j + 1, x);
                }
            }
            let inv = f.inv(h.get(j + 1, j)).expect("pivot nonzero");
            for r in j + 2..d {
                let factor = f.mul(h.get(r, j), inv);
                if factor.is_zero() {
                    continue;
                }
                for c in 0..d {
                    let v = f.sub(h.get(r, c), f.mul(factor, h.get(j + 1, c)));
                    h.set(r, c, v);
                }
                for rr in 0..d {
                    let v = f.add(h.get(rr, j + 1), f.mul(factor, h.get(rr, r)));
                    h.set(rr, j + 1, v);
                }
            }
        }
        // Expand det(tI − H) along last columns of leading submatrices.
        let mut c: Vec<Poly> = Vec::with_capacity(d + 1);
        c.push(Poly::one());
        for m in 1..=d {
            let lin = Poly { c: vec![f.neg(h.get(m - 1, m - 1)), FieldElement::ONE] };
            let mut head = f.poly_mul(&lin, &c[m - 1]);
            let mut sub = FieldElement::ONE;
            for i in (0..m.saturating_sub(1)).rev() {
                sub = f.mul(sub, h.get(i + 1, i));
                if sub.is_zero() {
                    break;
                }
                let coef = f.mul(h.get(i, m - 1), sub);
                if coef.is_zero() {
                    continue;
                }
                head = f.poly_sub(&head, &f.poly_scale(&c[i], coef));
            }
            c.push(head);
        }
        c.pop().unwrap()
    }

    /// Evaluate a polynomial at this matrix (Horner).
    pub fn poly_at(&self, p: &Poly) -> Result<MatrixQ> {
        let f = &self.field;
        let mut acc = MatrixQ::zero(f, self.d);
        for &coef in p.c.iter().rev() {
            acc = acc.mul(self)?;
            if !coef.is_zero() {
                for i in 0..self.d {
                    let v = f.add(acc.get(i, i), coef);
                    acc.set(i, i, v);
                }
            }
        }
        Ok(acc)
    }

    /// Block-diagonal assembly; all blocks must share a field.
    pub fn block_diagonal(blocks: &[MatrixQ]) -> Result<MatrixQ> {
        let f = blocks
            .first()
            .ok_or_else(|| Error::Inconsistent("no blocks".into()))?
            .field
            .clone();
        let d: usize = blocks.iter().map(|b| b.d).sum();
        let mut m = MatrixQ::zero(&f, d);
        let mut off = 0;
        for b in blocks {
            if b.field != f {
                return Err(Error::FieldMismatch);
            }
            for i in 0..b.d {
                for j in 0..b.d {
                    m.set(off + i, off + j, b.get(i, j));
                }
            }
            off += b.d;
        }
        Ok(m)
    }

    /// Rewrite a matrix over `GF(p^a)` as a `(d·a) × (d·a)` matrix over the
    /// prime field, replacing each entry by its regular-representation block
    /// in the power basis `1, t, …, t^(a−1)` of the canonical modulus.
    pub fn blow_up(&self, base: &Field) -> Result<MatrixQ> {
        let big = &self.field;
        if base.p() != big.p() || base.a() != 1 {
            return Err(Error::UnsupportedCase(
                "blow-up is supported onto the prime subfield only".into(),
            ));
        }
        let b = big.a() as usize;
        let d = self.d * b;
        let t = big.elem(big.p()).expect("t lies in the field");
        let mut out = MatrixQ::zero(base, d);
        for i in 0..self.d {
            for j in 0..self.d {
                let x = self.get(i, j);
                if x.is_zero() {
                    continue;
                }
                let mut tk = FieldElement::ONE;
                for k in 0..b {
                    let digits = big.digits(big.mul(tk, x));
                    for (l, &c) in digits.iter().enumerate() {
                        out.set(i * b + k, j * b + l, FieldElement(c));
                    }
                    tk = big.mul(tk, t);
                }
            }
        }
        Ok(out)
    }
}

/// The prime-field matrix of the Frobenius `x ↦ x^p` of `GF(p^a)` in the
/// power basis, for building semilinear (field-automorphism) fixtures.
pub fn frobenius_block(big: &Field, base: &Field) -> Result<MatrixQ> {
    if base.p() != big.p() || base.a() != 1 {
        return Err(Error::UnsupportedCase(
            "frobenius block is supported over the prime subfield only".into(),
        ));
    }
    let a = big.a() as usize;
    let t = big.elem(big.p()).expect("t lies in the field");
    let mut out = MatrixQ::zero(base, a);
    let mut tk = FieldElement::ONE;
    for k in 0..a {
        let digits = big.digits(big.frobenius(tk, 1));
        for (l, &c) in digits.iter().enumerate() {
            out.set(k, l, FieldElement(c));
        }
        tk = big.mul(tk, t);
    }
    Ok(out)
}

/// Row vector times matrix.
pub fn row_times(field: &Field, v: &[FieldElement], m: &MatrixQ) -> Vec<FieldElement> {
    let d = m.dim();
    debug_assert_eq!(v.len(), d);
    let mut out = vec![FieldElement::ZERO; d];
    for (i, &vi) in v.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        let row = m.row(i);
        for j in 0..d {
            out[j] = field.add(out[j], field.mul(vi, row[j]));
        }
    }
    out
}

/// Full reduced row echelon form in place; returns pivot column indices in
/// increasing order.  Zero rows are removed.
pub fn rref_in_place(field: &Field, rows: &mut Vec<Vec<FieldElement>>) -> Vec<usize> {
    let width = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..width {
        let Some(pr) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = field.inv(rows[rank][col]).expect("pivot nonzero");
        for x in rows[rank].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank {
                continue;
            }
            let factor = row[col];
            if factor.is_zero() {
                continue;
            }
            for (x, &p) in row.iter_mut().zip(&pivot_row) {
                *x = field.sub(*x, field.mul(factor, p));
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    pivots
}

/// Reduced echelon basis of `{x : c·xᵀ = 0 for every constraint row c}`.
pub fn kernel_basis(
    field: &Field,
    constraints: &[Vec<FieldElement>],
    width: usize,
) -> Vec<Vec<FieldElement>> {
    let mut rows: Vec<Vec<FieldElement>> = constraints.to_vec();
    let pivots = rref_in_place(field, &mut rows);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..width {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![FieldElement::ZERO; width];
        v[free] = FieldElement::ONE;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = field.neg(rows[r][free]);
        }
        basis.push(v);
    }
    rref_in_place(field, &mut basis);
    basis
}

/// An incrementally maintained row space in reduced echelon form.
pub struct RowSpace {
    field: Field,
    width: usize,
    rows: Vec<Vec<FieldElement>>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(field: &Field, width: usize) -> RowSpace {
        RowSpace { field: field.clone(), width, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<FieldElement>] {
        &self.rows
    }

    /// Reduce `v` against the basis; the remainder's leading column, if any.
    fn reduce(&self, v: &mut [FieldElement]) -> Option<usize> {
        let f = &self.field;
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c.is_zero() {
                continue;
            }
            for (x, &r) in v.iter_mut().zip(row) {
                *x = f.sub(*x, f.mul(c, r));
            }
        }
        v.iter().position(|x| !x.is_zero())
    }

    pub fn contains(&self, v: &[FieldElement]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w).is_none()
    }

    /// Insert a vector; returns `true` if the dimension grew.
    pub fn insert(&mut self, v: &[FieldElement]) -> bool {
        debug_assert_eq!(v.len(), self.width);
        let f = self.field.clone();
        let mut w = v.to_vec();
        let Some(lead) = self.reduce(&mut w) else {
            return false;
        };
        let inv = f.inv(w[lead]).expect("leading entry nonzero");
        for x in w.iter_mut() {
            *x = f.mul(*x, inv);
        }
        // Back-substitute into existing rows, then keep pivots sorted.
        for row in self.rows.iter_mut() {
            let c = row[lead];
            if c.is_zero() {
                continue;
            }
            for (x, &wv) in row.iter_mut().zip(&w) {
                *x = f.sub(*x, f.mul(c, wv));
            }
        }
        let at = self.pivots.partition_point(|&p| p < lead);
        self.rows.insert(at, w);
        self.pivots.insert(at, lead);
        true
    }
}
