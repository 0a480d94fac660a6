//! Classical group cases, invariant forms, similitude scalars, standard
//! generators for the test groups, and order formulas.
//!
//! Generator sets are built from explicit matrix rules (transvections, torus
//! elements, Weyl-type permutations and mixing maps in a hyperbolic basis).
//! Correctness is enforced by the enumeration, order-formula, form and
//! irreducibility tests rather than by citation: every shipped case small
//! enough to enumerate is checked against its order formula, and every
//! generator is checked to preserve the canonical form with the expected
//! similitude scalar.

use num_bigint::BigUint;

use crate::field::{Field, FieldElement};
use crate::matrix::MatrixQ;
use crate::{Error, Result};

/// The six classical families.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Hash)]
pub enum Family {
    Linear,
    Symplectic,
    Unitary,
    OrthogonalPlus,
    OrthogonalMinus,
    OrthogonalCircle,
}

impl Family {
    pub fn token(self) -> &'static str {
        match self {
            Family::Linear => "linear",
            Family::Symplectic => "sp",
            Family::Unitary => "su",
            Family::OrthogonalPlus => "oplus",
            Family::OrthogonalMinus => "ominus",
            Family::OrthogonalCircle => "ocirc",
        }
    }

    pub fn from_token(s: &str) -> Option<Family> {
        Some(match s {
            "linear" => Family::Linear,
            "sp" => Family::Symplectic,
            "su" => Family::Unitary,
            "oplus" => Family::OrthogonalPlus,
            "ominus" => Family::OrthogonalMinus,
            "ocirc" => Family::OrthogonalCircle,
            _ => return None,
        })
    }

    pub fn is_orthogonal(self) -> bool {
        matches!(
            self,
            Family::OrthogonalPlus | Family::OrthogonalMinus | Family::OrthogonalCircle
        )
    }
}

/// Which subgroup of the family to generate.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Level {
    /// SL, Sp, SU, Ω^ε.
    Omega,
    /// GL, GSp, GU, and the orthogonal similitude generators.
    Delta,
}

/// A classical group case: family, dimension and defining field.
#[derive(Clone, Debug)]
pub struct GroupCase {
    pub family: Family,
    pub d: usize,
    pub field: Field,
}

impl GroupCase {
    pub fn new(family: Family, d: usize, field: Field) -> Result<GroupCase> {
        if d < 2 {
            return Err(Error::InvalidCase(format!("dimension {d} < 2")));
        }
        let q = field.q();
        match family {
            Family::Linear => {}
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
                    return Err(Error::InvalidCase(format!(
                        "ocirc requires odd dimension, got {d}"
                    )));
                }
            }
            Family::Unitary => {
                if field.a() % 2 != 0 {
                    return Err(Error::InvalidCase(format!(
                        "unitary requires a square field, got q = {q}"
                    )));
                }
            }
        }
        if family.is_orthogonal() && q % 2 == 0 {
            return Err(Error::UnsupportedCase(
                "orthogonal cases are supported for odd q only".into(),
            ));
        }
        Ok(GroupCase { family, d, field })
    }

    pub fn q(&self) -> u64 {
        self.field.q()
    }

    /// For the unitary case, the fixed-field size `q0` with `q = q0^2`.
    pub fn q0(&self) -> Option<u64> {
        if self.family == Family::Unitary {
            Some(self.field.p().pow(self.field.a() / 2))
        } else {
            None
        }
    }
}

/// The invariant form attached to a case.
#[derive(Clone, Debug)]
pub enum FormData {
    None,
    Alternating(MatrixQ),
    Sesquilinear(MatrixQ),
    /// Upper-triangular representative of a quadratic form (odd q).
    Quadratic(MatrixQ),
}

impl FormData {
    pub fn kind_token(&self) -> &'static str {
        match self {
            FormData::None => "none",
            FormData::Alternating(_) => "alternating",
            FormData::Sesquilinear(_) => "sesquilinear",
            FormData::Quadratic(_) => "quadratic",
        }
    }

    pub fn gram(&self) -> Option<&MatrixQ> {
        match self {
            FormData::None => None,
            FormData::Alternating(b) | FormData::Sesquilinear(b) | FormData::Quadratic(b) => {
                Some(b)
            }
        }
    }

    /// Order of the field automorphism twisting the form (2 iff sesquilinear).
    pub fn field_automorphism_order(&self) -> u32 {
        if matches!(self, FormData::Sesquilinear(_)) {
            2
        } else {
            1
        }
    }

    /// Structural validity of the Gram matrix itself.
    pub fn validate(&self) -> Result<()> {
        match self {
            FormData::None => Ok(()),
            FormData::Alternating(b) => {
                let f = b.field().clone();
                let d = b.dim();
                for i in 0..d {
                    if !b.get(i, i).is_zero() {
                        return Err(Error::Validation("alternating form with nonzero diagonal".into()));
                    }
                    for j in 0..d {
                        if b.get(i, j) != f.neg(b.get(j, i)) {
                            return Err(Error::Validation("alternating form not antisymmetric".into()));
                        }
                    }
                }
                if b.det().is_zero() {
                    return Err(Error::Validation("alternating form is degenerate".into()));
                }
                Ok(())
            }
            FormData::Sesquilinear(b) => {
                let f = b.field().clone();
                if f.a() % 2 != 0 {
                    return Err(Error::Validation("sesquilinear form needs a square field".into()));
                }
                let conj = b.frobenius_entries(f.a() / 2).transpose();
                if conj != *b {
                    return Err(Error::Validation("sesquilinear form not conjugate-symmetric".into()));
                }
                if b.det().is_zero() {
                    return Err(Error::Validation("sesquilinear form is degenerate".into()));
                }
                Ok(())
            }
            FormData::Quadratic(u) => {
                let f = u.field().clone();
                if f.q() % 2 == 0 {
                    return Err(Error::Validation("quadratic forms are supported for odd q only".into()));
                }
                let d = u.dim();
                for i in 0..d {
                    for j in 0..i {
                        if !u.get(i, j).is_zero() {
                            return Err(Error::Validation(
                                "quadratic representative must be upper-triangular".into(),
                            ));
                        }
                    }
                }
                let s = u.add(&u.transpose())?;
                if s.det().is_zero() {
                    return Err(Error::Validation("quadratic form has degenerate polar form".into()));
                }
                Ok(())
            }
        }
    }
}

/// The unique scalar `μ(g)` with `κ(ug, vg) = μ(g)·κ(u, v)`.
///
/// For bilinear and sesquilinear forms this solves `g·B·(g^σ)ᵀ = μB` on the
/// whole Gram matrix; for a quadratic form over odd `q` the polar form
/// `S = U + Uᵀ` determines `Q`, so the same full-matrix check on `S` is used.
pub fn similitude_scalar(g: &MatrixQ, form: &FormData) -> Result<FieldElement> {
    let (target, transformed) = match form {
        FormData::None => {
            return Err(Error::Validation("similitude scalar needs a form".into()));
        }
        FormData::Alternating(b) => (b.clone(), g.mul(b)?.mul(&g.transpose())?),
        FormData::Sesquilinear(b) => {
            let f = b.field().clone();
            let conj = g.frobenius_entries(f.a() / 2).transpose();
            (b.clone(), g.mul(b)?.mul(&conj)?)
        }
        FormData::Quadratic(u) => {
            let s = u.add(&u.transpose())?;
            (s.clone(), g.mul(&s)?.mul(&g.transpose())?)
        }
    };
    let f = target.field().clone();
    let d = target.dim();
    let mut lambda = None;
    'outer: for i in 0..d {
        for j in 0..d {
            if !target.get(i, j).is_zero() {
                lambda = Some(f.div(transformed.get(i, j), target.get(i, j))?);
                break 'outer;
            }
        }
    }
    let lambda = lambda.ok_or(Error::NotSimilitude)?;
    if lambda.is_zero() || target.scale(lambda) != transformed {
        return Err(Error::NotSimilitude);
    }
    Ok(lambda)
}

/// A generated matrix group with its case and invariant form.
#[derive(Clone, Debug)]
pub struct GroupInput {
    pub case: GroupCase,
    pub form: FormData,
    pub generators: Vec<MatrixQ>,
}

impl GroupInput {
    pub fn new(case: GroupCase, form: FormData, generators: Vec<MatrixQ>) -> Result<GroupInput> {
        let g = GroupInput { case, form, generators };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.generators.is_empty() {
            return Err(Error::Validation("no generators".into()));
        }
        let kind_ok = match self.case.family {
            Family::Linear => matches!(self.form, FormData::None),
            Family::Symplectic => matches!(self.form, FormData::Alternating(_)),
            Family::Unitary => matches!(self.form, FormData::Sesquilinear(_)),
            _ => matches!(self.form, FormData::Quadratic(_)),
        };
        if !kind_ok {
            return Err(Error::Validation(format!(
                "form kind {} does not match family {}",
                self.form.kind_token(),
                self.case.family.token()
            )));
        }
        self.form.validate()?;
        if let Some(gram) = self.form.gram() {
            if gram.dim() != self.case.d || *gram.field() != self.case.field {
                return Err(Error::Validation("form dimensions do not match the case".into()));
            }
        }
        for (i, g) in self.generators.iter().enumerate() {
            if g.dim() != self.case.d || *g.field() != self.case.field {
                return Err(Error::Validation(format!("generator {i}: wrong dimension or field")));
            }
            if g.det().is_zero() {
                return Err(Error::Validation(format!("generator {i}: singular")));
            }
            if !matches!(self.form, FormData::None) {
                similitude_scalar(g, &self.form)
                    .map_err(|_| Error::Validation(format!("generator {i}: not a similitude")))?;
            }
        }
        Ok(())
    }
}

/// The canonical Gram matrix shipped with each constructed case.
pub fn canonical_form(case: &GroupCase) -> Result<FormData> {
    let f = &case.field;
    let d = case.d;
    match case.family {
        Family::Linear => Ok(FormData::None),
        Family::Symplectic => {
            // Hyperbolic pairs (i, d-1-i): +1 above the antidiagonal middle.
            let mut b = MatrixQ::zero(f, d);
            for i in 0..d / 2 {
                b.set(i, d - 1 - i, FieldElement::ONE);
                b.set(d - 1 - i, i, f.neg(FieldElement::ONE));
            }
            Ok(FormData::Alternating(b))
        }
        Family::Unitary => {
            let mut b = MatrixQ::zero(f, d);
            for i in 0..d {
                b.set(i, d - 1 - i, FieldElement::ONE);
            }
            Ok(FormData::Sesquilinear(b))
        }
        Family::OrthogonalCircle => {
            if d != 3 {
                return Err(Error::UnsupportedCase(format!(
                    "ocirc is constructed for d = 3 only, got {d}"
                )));
            }
            // Q(x, y, z) = xz - y^2/4, the discriminant form of binary quadratics.
            let mut u = MatrixQ::zero(f, 3);
            u.set(0, 2, FieldElement::ONE);
            let four = f.elem(4 % f.p()).unwrap();
            u.set(1, 1, f.neg(f.inv(four)?));
            Ok(FormData::Quadratic(u))
        }
        Family::OrthogonalMinus => {
            if d != 4 {
                return Err(Error::UnsupportedCase(format!(
                    "ominus is constructed for d = 4 only, got {d}"
                )));
            }
            let (ext, t) = ominus_extension(f)?;
            // Q(x, y, u, v) = xy - u^2 + t^2 v^2 on 2x2 hermitian matrices.
            let t2 = ext.mul(t, t);
            debug_assert!((t2.0 as u64) < f.q());
            let mut u = MatrixQ::zero(f, 4);
            u.set(0, 1, FieldElement::ONE);
            u.set(2, 2, f.neg(FieldElement::ONE));
            u.set(3, 3, FieldElement(t2.0));
            Ok(FormData::Quadratic(u))
        }
        Family::OrthogonalPlus => {
            if d != 4 {
                return Err(Error::UnsupportedCase(format!(
                    "oplus is constructed for d = 4 only, got {d}"
                )));
            }
            // Q(X) = det X on 2x2 matrices, coordinates (x00, x01, x10, x11).
            let mut u = MatrixQ::zero(f, 4);
            u.set(0, 3, FieldElement::ONE);
            u.set(1, 2, f.neg(FieldElement::ONE));
            Ok(FormData::Quadratic(u))
        }
    }
}

/// Standard generators for Ω (SL, Sp, SU, Ω^ε) or Δ (GL, GSp, GU, GO^ε-level
/// similitudes) in the canonical basis of [`canonical_form`].
pub fn standard_generators(case: &GroupCase, level: Level) -> Result<Vec<MatrixQ>> {
    match case.family {
        Family::Linear => linear_generators(case, level),
        Family::Symplectic => symplectic_generators(case, level),
        Family::Unitary => unitary_generators(case, level),
        Family::OrthogonalCircle => ocirc_generators(case, level),
        Family::OrthogonalMinus => ominus_generators(case, level),
        Family::OrthogonalPlus => oplus_generators(case, level),
    }
}

/// Assemble a validated [`GroupInput`] for a constructed case.
pub fn standard_group(family: Family, d: usize, q: u64, level: Level) -> Result<GroupInput> {
    let field = Field::from_order(q)?;
    let case = GroupCase::new(family, d, field)?;
    let form = canonical_form(&case)?;
    let generators = standard_generators(&case, level)?;
    GroupInput::new(case, form, generators)
}

fn linear_generators(case: &GroupCase, level: Level) -> Result<Vec<MatrixQ>> {
    let f = &case.field;
    let d = case.d;
    let nu = f.generator();
    let mut t = MatrixQ::identity(f, d);
    t.set(0, 1, FieldElement::ONE);
    let mut z = MatrixQ::zero(f, d);
    for i in 0..d - 1 {
        z.set(i, i + 1, FieldElement::ONE);
    }
    let sign = if d % 2 == 1 { FieldElement::ONE } else { f.neg(FieldElement::ONE) };
    z.set(d - 1, 0, sign);
    let mut gens = vec![t, z];
    match level {
        Level::Omega => {
            if f.q() > 2 {
                let mut dd = MatrixQ::identity(f, d);
                dd.set(0, 0, nu);
                dd.set(1, 1, f.inv(nu)?);
                gens.push(dd);
            }
        }
        Level::Delta => {
            if f.q() > 2 {
                let mut dg = MatrixQ::identity(f, d);
                dg.set(0, 0, nu);
                gens.push(dg);
            }
        }
    }
    Ok(gens)
}

fn symplectic_generators(case: &GroupCase, level: Level) -> Result<Vec<MatrixQ>> {
    let f = &case.field;
    let d = case.d;
    if d == 2 {
        // Sp(2,q) = SL(2,q); the linear generators preserve the form.
        let lin = GroupCase::new(Family::Linear, 2, f.clone())?;
        let mut gens = linear_generators(&lin, Level::Omega)?;
        if level == Level::Delta && f.q() > 2 {
            let mut rho = MatrixQ::identity(f, 2);
            rho.set(0, 0, f.generator());
            gens.push(rho);
        }
        return Ok(gens);
    }
    let m = d / 2;
    let nu = f.generator();
    let neg1 = f.neg(FieldElement::ONE);

    // Symplectic transvections in the outer hyperbolic pair.
    let mut t = MatrixQ::identity(f, d);
    t.set(d - 1, 0, neg1);
    let mut t2 = MatrixQ::identity(f, d);
    t2.set(0, d - 1, FieldElement::ONE);

    // Mixing map e1 -> e1 + e2, f2 -> f2 - f1.
    let mut w = MatrixQ::identity(f, d);
    w.set(0, 1, FieldElement::ONE);
    w.set(d - 2, d - 1, neg1);

    // Swap of the first two hyperbolic pairs.
    let mut u = MatrixQ::identity(f, d);
    u.set(0, 0, FieldElement::ZERO);
    u.set(1, 1, FieldElement::ZERO);
    u.set(d - 1, d - 1, FieldElement::ZERO);
    u.set(d - 2, d - 2, FieldElement::ZERO);
    u.set(0, 1, FieldElement::ONE);
    u.set(1, 0, FieldElement::ONE);
    u.set(d - 1, d - 2, FieldElement::ONE);
    u.set(d - 2, d - 1, FieldElement::ONE);

    let mut gens = vec![t, t2, w, u];

    if m >= 3 {
        // Cycle of the m hyperbolic pairs.
        let mut v = MatrixQ::zero(f, d);
        for k in 0..m {
            let kn = (k + 1) % m;
            v.set(k, kn, FieldElement::ONE);
            v.set(d - 1 - k, d - 1 - kn, FieldElement::ONE);
        }
        gens.push(v);
    }

    if f.q() > 2 {
        let mut delta = MatrixQ::identity(f, d);
        delta.set(0, 0, nu);
        delta.set(d - 1, d - 1, f.inv(nu)?);
        gens.push(delta);
    }

    if level == Level::Delta && f.q() > 2 {
        let mut rho = MatrixQ::identity(f, d);
        for i in 0..m {
            rho.set(i, i, nu);
        }
        gens.push(rho);
    }
    Ok(gens)
}

fn unitary_generators(case: &GroupCase, level: Level) -> Result<Vec<MatrixQ>> {
    let f = &case.field;
    let d = case.d;
    let a = f.a();
    let q0 = f.p().pow(a / 2);
    let nu = f.generator();
    let conj = |x: FieldElement| f.frobenius(x, a / 2);
    let trace = |x: FieldElement| f.add(x, conj(x));
    let norm = |x: FieldElement| f.mul(x, conj(x));

    // lambda0 generates the additive kernel of the trace: lambda0^q0 = -lambda0.
    let lambda0 = if f.p() == 2 { FieldElement::ONE } else { f.pow(nu, (q0 + 1) / 2) };
    debug_assert!(trace(lambda0).is_zero());

    // Unitary transvections along the outer hyperbolic pair.
    let mut t = MatrixQ::identity(f, d);
    t.set(d - 1, 0, lambda0);
    let mut t2 = MatrixQ::identity(f, d);
    t2.set(0, d - 1, lambda0);

    // Twisted swap of the outer pair: e0 -> c·f0, f0 -> -c^{-1}·e0.
    let c0 = if f.p() == 2 { FieldElement::ONE } else { f.pow(nu, (q0 + 1) / 2) };
    let mut sigma = MatrixQ::identity(f, d);
    sigma.set(0, 0, FieldElement::ZERO);
    sigma.set(d - 1, d - 1, FieldElement::ZERO);
    sigma.set(0, d - 1, c0);
    sigma.set(d - 1, 0, f.neg(f.inv(c0)?));

    let mut gens = vec![t, t2, sigma];

    match d {
        2 => {
            // Torus of norm-1 pairs: diag(mu, mu^{-1}) with mu in GF(q0)*.
            let mu = f.pow(nu, q0 + 1);
            if mu != FieldElement::ONE {
                let mut h = MatrixQ::identity(f, 2);
                h.set(0, 0, mu);
                h.set(1, 1, f.inv(mu)?);
                gens.push(h);
            }
        }
        3 => {
            gens.push(su3_unipotent(f, 0, 1, 2, FieldElement::ONE, &trace, &norm)?);
            gens.push(su3_unipotent(f, 0, 1, 2, nu, &trace, &norm)?);
            let mut h = MatrixQ::identity(f, 3);
            h.set(0, 0, nu);
            h.set(1, 1, f.pow(nu, q0 - 1));
            h.set(2, 2, f.inv(f.pow(nu, q0))?);
            gens.push(h);
            let mut w3 = MatrixQ::zero(f, 3);
            w3.set(0, 2, FieldElement::ONE);
            w3.set(1, 1, f.neg(FieldElement::ONE));
            w3.set(2, 0, FieldElement::ONE);
            gens.push(w3);
        }
        _ => {
            // Torus acting on the two outer pairs.
            let mut h = MatrixQ::identity(f, d);
            h.set(0, 0, nu);
            h.set(1, 1, f.inv(nu)?);
            h.set(d - 2, d - 2, f.pow(nu, q0));
            h.set(d - 1, d - 1, f.inv(f.pow(nu, q0))?);
            gens.push(h);

            // Swap of the first two hyperbolic pairs.
            let mut s = MatrixQ::identity(f, d);
            for (i, j) in [(0, 1), (1, 0), (d - 1, d - 2), (d - 2, d - 1)] {
                s.set(i, i, FieldElement::ZERO);
                s.set(i, j, FieldElement::ONE);
            }
            gens.push(s);

            // Mixing map e1 -> e1 + e2, f2 -> f2 - f1.
            let mut w = MatrixQ::identity(f, d);
            w.set(0, 1, FieldElement::ONE);
            w.set(d - 2, d - 1, f.neg(FieldElement::ONE));
            gens.push(w);

            let m = d / 2;
            if m >= 3 {
                let mut v = MatrixQ::zero(f, d);
                for k in 0..m {
                    let kn = (k + 1) % m;
                    v.set(k, kn, FieldElement::ONE);
                    v.set(d - 1 - k, d - 1 - kn, FieldElement::ONE);
                }
                if d % 2 == 1 {
                    v.set(d / 2, d / 2, FieldElement::ONE);
                }
                gens.push(v);
            }

            if d % 2 == 1 {
                // SU(3)-type blocks on (e0, middle, f0) to move the middle vector.
                gens.push(su3_unipotent(f, 0, d / 2, d - 1, FieldElement::ONE, &trace, &norm)?);
                gens.push(su3_unipotent(f, 0, d / 2, d - 1, nu, &trace, &norm)?);
            }
        }
    }

    if level == Level::Delta {
        // diag(nu, 1, ..., 1, nu^{-q0}) extends SU to GU; the scalar nu·I
        // contributes similitude factor N(nu), a generator of GF(q0)*.
        let mut g = MatrixQ::identity(f, d);
        g.set(0, 0, nu);
        g.set(d - 1, d - 1, f.inv(f.pow(nu, q0))?);
        gens.push(g);
        gens.push(MatrixQ::scalar(f, d, nu));
    }
    Ok(gens)
}

/// The unipotent `[[1, α, γ], [0, 1, -α^σ], [0, 0, 1]]` of SU(3) placed on
/// rows/columns `(i, j, k)`, with `Tr(γ) = -N(α)`.
fn su3_unipotent(
    f: &Field,
    i: usize,
    j: usize,
    k: usize,
    alpha: FieldElement,
    trace: &dyn Fn(FieldElement) -> FieldElement,
    norm: &dyn Fn(FieldElement) -> FieldElement,
) -> Result<MatrixQ> {
    let d = k + 1;
    let want = f.neg(norm(alpha));
    let gamma = (0..f.q())
        .map(|v| FieldElement(v as u32))
        .find(|&g| trace(g) == want)
        .ok_or_else(|| Error::Inconsistent("trace is surjective".into()))?;
    let mut u = MatrixQ::identity(f, d);
    u.set(i, j, alpha);
    u.set(i, k, gamma);
    u.set(j, k, f.neg(f.frobenius(alpha, f.a() / 2)));
    Ok(u)
}

fn ocirc_generators(case: &GroupCase, level: Level) -> Result<Vec<MatrixQ>> {
    let f = &case.field;
    if case.d != 3 {
        return Err(Error::UnsupportedCase(format!(
            "ocirc is constructed for d = 3 only, got {}",
            case.d
        )));
    }
    let nu = f.generator();
    let neg1 = f.neg(FieldElement::ONE);
    let two = FieldElement(2);
    let sym2 = |g: [[FieldElement; 2]; 2]| -> Result<MatrixQ> {
        let [[a, b], [c, dd]] = g;
        MatrixQ::from_action(f, 3, |i| match i {
            0 => vec![f.mul(a, a), f.mul(two, f.mul(a, b)), f.mul(b, b)],
            1 => vec![f.mul(a, c), f.add(f.mul(a, dd), f.mul(b, c)), f.mul(b, dd)],
            _ => vec![f.mul(c, c), f.mul(two, f.mul(c, dd)), f.mul(dd, dd)],
        })
    };
    let one = FieldElement::ONE;
    let zero = FieldElement::ZERO;
    let mut gens = vec![
        sym2([[one, one], [zero, one]])?,
        sym2([[zero, one], [neg1, zero]])?,
        sym2([[nu, zero], [zero, f.inv(nu)?]])?,
    ];
    if level == Level::Delta {
        gens.push(sym2([[nu, zero], [zero, one]])?);
        gens.push(MatrixQ::scalar(f, 3, nu));
    }
    Ok(gens)
}

/// The quadratic extension used by the Ω⁻(4,q) model, with an element `t`
/// satisfying `t^q = -t`.
fn ominus_extension(f: &Field) -> Result<(Field, FieldElement)> {
    if f.a() != 1 {
        return Err(Error::UnsupportedCase(
            "ominus is constructed for prime q only".into(),
        ));
    }
    let ext = Field::new(f.p(), 2)?;
    // t = nu^((q+1)/2) satisfies t^q = -t.
    let t = ext.pow(ext.generator(), (f.q() + 1) / 2);
    debug_assert_eq!(ext.frobenius(t, 1), ext.neg(t));
    Ok((ext, t))
}

fn ominus_generators(case: &GroupCase, level: Level) -> Result<Vec<MatrixQ>> {
    let f = &case.field;
    if case.d != 4 {
        return Err(Error::UnsupportedCase(format!(
            "ominus is constructed for d = 4 only, got {}",
            case.d
        )));
    }
    let (ext, t) = ominus_extension(f)?;
    let nu2 = ext.generator();
    let one = FieldElement::ONE;
    let zero = FieldElement::ZERO;

    // Action of g in SL(2, q^2) on 2x2 hermitian matrices: X -> conj(g)^T X g,
    // in coordinates (x, y, u, v) for [[x, u+vt], [u-vt, y]].
    let half = ext.inv(FieldElement(2 % ext.p() as u32))?;
    let half_t_inv = ext.mul(half, ext.inv(t)?);
    let to_coords = |m: [[FieldElement; 2]; 2]| -> Result<Vec<FieldElement>> {
        let beta = m[0][1];
        let beta_bar = ext.frobenius(beta, 1);
        let coords_ext = [
            m[0][0],
            m[1][1],
            ext.mul(ext.add(beta, beta_bar), half),
            ext.mul(ext.sub(beta, beta_bar), half_t_inv),
        ];
        let mut out = Vec::with_capacity(4);
        for c in coords_ext {
            if c.0 as u64 >= f.q() {
                return Err(Error::Inconsistent("hermitian coordinate outside GF(q)".into()));
            }
            out.push(c);
        }
        Ok(out)
    };
    let basis = |i: usize| -> [[FieldElement; 2]; 2] {
        match i {
            0 => [[one, zero], [zero, zero]],
            1 => [[zero, zero], [zero, one]],
            2 => [[zero, one], [one, zero]],
            _ => [[zero, t], [ext.neg(t), zero]],
        }
    };
    let act = |g: [[FieldElement; 2]; 2]| -> Result<MatrixQ> {
        let gbar = [
            [ext.frobenius(g[0][0], 1), ext.frobenius(g[0][1], 1)],
            [ext.frobenius(g[1][0], 1), ext.frobenius(g[1][1], 1)],
        ];
        let mul2 = |x: [[FieldElement; 2]; 2], y: [[FieldElement; 2]; 2]| {
            let mut z = [[zero; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    z[i][j] = ext.add(
                        ext.mul(x[i][0], y[0][j]),
                        ext.mul(x[i][1], y[1][j]),
                    );
                }
            }
            z
        };
        let gbar_t = [[gbar[0][0], gbar[1][0]], [gbar[0][1], gbar[1][1]]];
        MatrixQ::from_action(f, 4, |i| {
            let y = mul2(mul2(gbar_t, basis(i)), g);
            to_coords(y).expect("hermitian image")
        })
    };

    let mut gens = vec![
        act([[one, one], [zero, one]])?,
        act([[zero, one], [ext.neg(one), zero]])?,
        act([[nu2, zero], [zero, ext.inv(nu2)?]])?,
    ];
    if level == Level::Delta {
        gens.push(act([[nu2, zero], [zero, one]])?);
        // Conjugation X -> X^(q) fixes x, y, u and negates v: a reflection
        // outside the image of GL(2, q^2).
        let mut refl = MatrixQ::identity(f, 4);
        refl.set(3, 3, f.neg(one));
        gens.push(refl);
        gens.push(MatrixQ::scalar(f, 4, f.generator()));
    }
    Ok(gens)
}

fn oplus_generators(case: &GroupCase, level: Level) -> Result<Vec<MatrixQ>> {
    let f = &case.field;
    if case.d != 4 {
        return Err(Error::UnsupportedCase(format!(
            "oplus is constructed for d = 4 only, got {}",
            case.d
        )));
    }
    let nu = f.generator();
    let one = FieldElement::ONE;
    let zero = FieldElement::ZERO;
    // Basis E00, E01, E10, E11 of 2x2 matrices; Q = det; SL2 x SL2 acts by
    // X -> A^T X B.
    let left = |a: [[FieldElement; 2]; 2]| -> Result<MatrixQ> {
        MatrixQ::from_action(f, 4, |idx| {
            let (i, j) = (idx / 2, idx % 2);
            // A^T E_ij = column i of A^T times row j = row: entries (k,j) get A[i][k].
            let mut row = vec![zero; 4];
            for k in 0..2 {
                row[2 * k + j] = a[i][k];
            }
            row
        })
    };
    let right = |b: [[FieldElement; 2]; 2]| -> Result<MatrixQ> {
        MatrixQ::from_action(f, 4, |idx| {
            let (i, j) = (idx / 2, idx % 2);
            // E_ij B has row i equal to row j of B.
            let mut row = vec![zero; 4];
            for k in 0..2 {
                row[2 * i + k] = b[j][k];
            }
            row
        })
    };
    let tt = [[one, one], [zero, one]];
    let zz = [[zero, one], [f.neg(one), zero]];
    let dd = [[nu, zero], [zero, f.inv(nu)?]];
    let mut gens = vec![left(tt)?, left(zz)?, left(dd)?, right(tt)?, right(zz)?, right(dd)?];
    if level == Level::Delta {
        let dnu = [[nu, zero], [zero, one]];
        gens.push(left(dnu)?);
        gens.push(right(dnu)?);
        // Transposition X -> X^T swaps the off-diagonal coordinates: the
        // reflection interchanging the two SL(2, q) factors.
        let swap = MatrixQ::from_action(f, 4, |i| {
            let mut row = vec![zero; 4];
            row[match i {
                1 => 2,
                2 => 1,
                other => other,
            }] = one;
            row
        })?;
        gens.push(swap);
        gens.push(MatrixQ::scalar(f, 4, nu));
    }
    Ok(gens)
}

/// `|GL(d,q)| = q^(d(d-1)/2) · ∏_{i=1}^{d} (q^i - 1)`.
pub fn group_order_gl(d: u32, q: u64) -> Result<BigUint> {
    if d == 0 {
        return Err(Error::Inconsistent("GL(0,q) order undefined".into()));
    }
    let qb = BigUint::from(q);
    let mut order = qb.pow(d * (d - 1) / 2);
    for i in 1..=d {
        order *= qb.pow(i) - 1u32;
    }
    Ok(order)
}

/// Order of the Ω-level group constructed for a case; used as the fixture
/// constant the enumeration oracle must reproduce.
pub fn group_order_omega(family: Family, d: u32, q: u64) -> Result<BigUint> {
    let qb = BigUint::from(q);
    match family {
        Family::Linear => Ok(group_order_gl(d, q)? / (qb - 1u32)),
        Family::Symplectic => {
            if d % 2 != 0 {
                return Err(Error::InvalidCase("odd symplectic dimension".into()));
            }
            let m = d / 2;
            let mut order = qb.pow(m * m);
            for i in 1..=m {
                order *= qb.pow(2 * i) - 1u32;
            }
            Ok(order)
        }
        Family::Unitary => {
            // Here q is the matrix field size q0^2.
            let q0 = match crate::field::split_prime_power(q) {
                Some((p, a)) if a % 2 == 0 => p.pow(a / 2),
                _ => return Err(Error::InvalidCase("unitary requires square q".into())),
            };
            let q0b = BigUint::from(q0);
            let mut order = q0b.pow(d * (d - 1) / 2);
            for i in 2..=d {
                let term = q0b.pow(i);
                if i % 2 == 0 {
                    order *= term - 1u32;
                } else {
                    order *= term + 1u32;
                }
            }
            Ok(order)
        }
        Family::OrthogonalCircle => {
            if d != 3 {
                return Err(Error::UnsupportedCase("ocirc order shipped for d = 3".into()));
            }
            // |Ω(3,q)| = |PSL(2,q)| = q(q^2-1)/2 for odd q.
            Ok(&qb * (qb.pow(2) - 1u32) / 2u32)
        }
        Family::OrthogonalMinus => {
            if d != 4 {
                return Err(Error::UnsupportedCase("ominus order shipped for d = 4".into()));
            }
            // |Ω⁻(4,q)| = |PSL(2,q^2)| = q^2(q^4-1)/2 for odd q.
            Ok(qb.pow(2) * (qb.pow(4) - 1u32) / 2u32)
        }
        Family::OrthogonalPlus => {
            if d != 4 {
                return Err(Error::UnsupportedCase("oplus order shipped for d = 4".into()));
            }
            // |Ω⁺(4,q)| = |SL(2,q)|^2 / 2 for odd q.
            let sl2 = &qb * (qb.pow(2) - 1u32);
            Ok(&sl2 * &sl2 / 2u32)
        }
    }
}

/// `|SU(d, q0)|` with the matrix field `GF(q0^2)`:
/// `q0^(d(d-1)/2) · ∏_{i=2}^{d} (q0^i - (-1)^i)`.
pub fn group_order_su(d: u32, q0: u64) -> BigUint {
    let q0b = BigUint::from(q0);
    let mut order = q0b.pow(d * (d - 1) / 2);
    for i in 2..=d {
        let term = q0b.pow(i);
        if i % 2 == 0 {
            order *= term - 1u32;
        } else {
            order *= term + 1u32;
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate_group;
    use crate::meataxe::{is_irreducible, IrreducibilityStatus};

    fn closure_order(family: Family, d: usize, q: u64, level: Level) -> u64 {
        let group = standard_group(family, d, q, level).unwrap();
        enumerate_group(&group.generators).unwrap().order()
    }

    #[test]
    fn omega_orders_match_formulas() {
        let cases: &[(Family, usize, u64, u64)] = &[
            (Family::Linear, 2, 2, 6),
            (Family::Linear, 2, 4, 60),
            (Family::Linear, 2, 5, 120),
            (Family::Linear, 3, 2, 168),
            (Family::Linear, 4, 2, 20160),
            (Family::Symplectic, 4, 2, 720),
            (Family::Symplectic, 4, 3, 51840),
            (Family::Unitary, 3, 4, 216),
            (Family::Unitary, 3, 9, 6048),
            (Family::Unitary, 4, 4, 25920),
            (Family::Unitary, 2, 9, 24),
            (Family::OrthogonalCircle, 3, 3, 12),
            (Family::OrthogonalCircle, 3, 5, 60),
            (Family::OrthogonalMinus, 4, 3, 360),
            (Family::OrthogonalMinus, 4, 5, 7800),
            (Family::OrthogonalPlus, 4, 3, 288),
            (Family::OrthogonalPlus, 4, 5, 7200),
        ];
        for &(family, d, q, expect) in cases {
            let bfs = closure_order(family, d, q, Level::Omega);
            assert_eq!(bfs, expect, "{} d={} q={}", family.token(), d, q);
            let formula = group_order_omega(family, d as u32, q).unwrap();
            assert_eq!(BigUint::from(bfs), formula, "{} d={} q={}", family.token(), d, q);
        }
    }

    #[test]
    fn omega_order_sp6() {
        assert_eq!(closure_order(Family::Symplectic, 6, 2, Level::Omega), 1_451_520);
        assert_eq!(
            group_order_omega(Family::Symplectic, 6, 2).unwrap(),
            BigUint::from(1_451_520u64)
        );
    }

    #[test]
    fn delta_orders_match_formulas() {
        // |ΔL| = |GL|; |ΔSp| = |Sp|(q-1); |ΔU| = |SU|(q-1);
        // |ΔO^ε(4,q)| = 2|SO^ε|(q-1); |ΔO(3,q)| = q(q-1)(q²-1).
        let cases: &[(Family, usize, u64, u64)] = &[
            (Family::Linear, 2, 4, 180),
            (Family::Linear, 3, 2, 168),
            (Family::Symplectic, 4, 3, 103_680),
            (Family::Unitary, 3, 4, 648),
            (Family::Unitary, 3, 9, 48_384),
            (Family::OrthogonalCircle, 3, 3, 48),
            (Family::OrthogonalCircle, 3, 5, 480),
            (Family::OrthogonalMinus, 4, 3, 2880),
            (Family::OrthogonalMinus, 4, 5, 124_800),
            (Family::OrthogonalPlus, 4, 3, 2304),
            (Family::OrthogonalPlus, 4, 5, 115_200),
        ];
        for &(family, d, q, expect) in cases {
            let bfs = closure_order(family, d, q, Level::Delta);
            assert_eq!(bfs, expect, "{} d={} q={} delta", family.token(), d, q);
        }
    }

    #[test]
    fn omega_generators_are_isometries_with_det_one() {
        let cases: &[(Family, usize, u64)] = &[
            (Family::Linear, 4, 3),
            (Family::Symplectic, 6, 5),
            (Family::Unitary, 5, 9),
            (Family::Unitary, 4, 25),
            (Family::OrthogonalCircle, 3, 7),
            (Family::OrthogonalMinus, 4, 7),
            (Family::OrthogonalPlus, 4, 9),
        ];
        for &(family, d, q) in cases {
            let group = standard_group(family, d, q, Level::Omega).unwrap();
            for g in &group.generators {
                assert_eq!(g.det(), FieldElement::ONE, "{} d={} q={}", family.token(), d, q);
                if !matches!(group.form, FormData::None) {
                    let mu = similitude_scalar(g, &group.form).unwrap();
                    assert_eq!(mu, FieldElement::ONE, "{} d={} q={}", family.token(), d, q);
                }
            }
        }
    }

    #[test]
    fn delta_generators_reach_nontrivial_similitude_scalar() {
        let cases: &[(Family, usize, u64)] = &[
            (Family::Symplectic, 4, 3),
            (Family::Symplectic, 6, 5),
            (Family::Unitary, 3, 9),
            (Family::OrthogonalCircle, 3, 5),
            (Family::OrthogonalMinus, 4, 5),
            (Family::OrthogonalPlus, 4, 5),
        ];
        for &(family, d, q) in cases {
            let group = standard_group(family, d, q, Level::Delta).unwrap();
            let mut seen_nontrivial = false;
            for g in &group.generators {
                let mu = similitude_scalar(g, &group.form).unwrap();
                seen_nontrivial |= mu != FieldElement::ONE;
            }
            assert!(seen_nontrivial, "{} d={} q={}", family.token(), d, q);
        }
    }

    #[test]
    fn similitude_scalar_identity_and_scalar() {
        let f = Field::new(5, 1).unwrap();
        let case = GroupCase::new(Family::Symplectic, 4, f.clone()).unwrap();
        let form = canonical_form(&case).unwrap();
        let id = MatrixQ::identity(&f, 4);
        assert_eq!(similitude_scalar(&id, &form).unwrap(), FieldElement::ONE);
        let c = f.elem(3).unwrap();
        let scal = MatrixQ::scalar(&f, 4, c);
        assert_eq!(similitude_scalar(&scal, &form).unwrap(), f.mul(c, c));
    }

    #[test]
    fn similitude_scalar_symplectic_transvection() {
        // v -> v + κ(v, u)·u expands to an alternating-form isometry.
        let f = Field::new(7, 1).unwrap();
        let case = GroupCase::new(Family::Symplectic, 4, f.clone()).unwrap();
        let form = canonical_form(&case).unwrap();
        let gram = form.gram().unwrap().clone();
        let u: Vec<u64> = vec![1, 2, 3, 4];
        let t = MatrixQ::from_action(&f, 4, |i| {
            let mut row: Vec<FieldElement> = (0..4)
                .map(|j| if i == j { FieldElement::ONE } else { FieldElement::ZERO })
                .collect();
            let kappa: FieldElement = (0..4).fold(FieldElement::ZERO, |acc, j| {
                f.add(acc, f.mul(gram.get(i, j), f.elem(u[j]).unwrap()))
            });
            for j in 0..4 {
                row[j] = f.add(row[j], f.mul(kappa, f.elem(u[j]).unwrap()));
            }
            row
        })
        .unwrap();
        assert_eq!(similitude_scalar(&t, &form).unwrap(), FieldElement::ONE);
    }

    #[test]
    fn similitude_scalar_rejects_non_similitude() {
        let f = Field::new(3, 1).unwrap();
        let case = GroupCase::new(Family::Symplectic, 4, f.clone()).unwrap();
        let form = canonical_form(&case).unwrap();
        let g = MatrixQ::from_rows(
            &f,
            &[vec![1, 1, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 1, 1]],
        )
        .unwrap();
        assert!(matches!(similitude_scalar(&g, &form), Err(Error::NotSimilitude)));
    }

    #[test]
    fn invalid_cases_rejected() {
        let f3 = Field::new(3, 1).unwrap();
        let f4 = Field::new(2, 2).unwrap();
        assert!(GroupCase::new(Family::Symplectic, 3, f3.clone()).is_err());
        assert!(GroupCase::new(Family::OrthogonalPlus, 4, f4.clone()).is_err());
        assert!(GroupCase::new(Family::OrthogonalCircle, 3, f4.clone()).is_err());
        assert!(GroupCase::new(Family::OrthogonalCircle, 4, f3.clone()).is_err());
        assert!(GroupCase::new(Family::Unitary, 3, f3.clone()).is_err());
        assert!(GroupCase::new(Family::Linear, 1, f3.clone()).is_err());
        assert!(standard_group(Family::OrthogonalMinus, 4, 9, Level::Omega).is_err());
        assert!(standard_group(Family::OrthogonalCircle, 5, 3, Level::Omega).is_err());
    }

    #[test]
    fn omega_groups_act_irreducibly() {
        let cases: &[(Family, usize, u64)] = &[
            (Family::Linear, 3, 2),
            (Family::Symplectic, 4, 3),
            (Family::Unitary, 3, 4),
            (Family::Unitary, 4, 4),
            (Family::OrthogonalCircle, 3, 5),
            (Family::OrthogonalMinus, 4, 3),
            (Family::OrthogonalPlus, 4, 3),
        ];
        for &(family, d, q) in cases {
            let group = standard_group(family, d, q, Level::Omega).unwrap();
            let report = is_irreducible(&group.generators, 20, 11).unwrap();
            assert_eq!(
                report.status,
                IrreducibilityStatus::Irreducible,
                "{} d={} q={}",
                family.token(),
                d,
                q
            );
        }
    }

    #[test]
    fn canonical_forms_validate() {
        for (family, d, q) in [
            (Family::Symplectic, 6, 9),
            (Family::Unitary, 4, 25),
            (Family::OrthogonalCircle, 3, 7),
            (Family::OrthogonalMinus, 4, 11),
            (Family::OrthogonalPlus, 4, 7),
        ] {
            let f = Field::from_order(q).unwrap();
            let case = GroupCase::new(family, d, f).unwrap();
            let form = canonical_form(&case).unwrap();
            form.validate().unwrap();
        }
    }

    #[test]
    fn group_order_gl_small() {
        assert_eq!(group_order_gl(2, 2).unwrap(), BigUint::from(6u32));
        assert_eq!(group_order_gl(3, 2).unwrap(), BigUint::from(168u32));
        assert_eq!(group_order_gl(1, 7).unwrap(), BigUint::from(6u32));
        assert_eq!(group_order_gl(4, 3).unwrap(), BigUint::from(24_261_120u64));
    }

    #[test]
    fn group_order_su_small() {
        assert_eq!(group_order_su(3, 2), BigUint::from(216u32));
        assert_eq!(group_order_su(3, 3), BigUint::from(6048u32));
        assert_eq!(group_order_su(4, 2), BigUint::from(25_920u32));
        assert_eq!(group_order_su(2, 3), BigUint::from(24u32));
    }
}
