//! The `ppdgrp` group file format: a plain-text, byte-stable encoding of a
//! group input (case, field, form, generators).
//!
//! ```text
//! ppdgrp 1
//! <p> <a> <d> <k> <case>
//! <c0> <c1> ... <ca>        (modulus line, only when a > 1; constant first)
//! form <kind>               (only when the case carries a form)
//! <d Gram rows>
//!
//! mat
//! <d rows of d entry encodings>
//!
//! mat
//! ...
//! ```
//!
//! Tokens are separated by single spaces, lines end with `\n`, one blank line
//! precedes every `mat` block, and the file ends with a newline.  The writer
//! emits exactly this shape and the parser accepts nothing else, so
//! parse-then-write is the identity on valid files.

use crate::field::Field;
use crate::groups::{Family, FormData, GroupCase, GroupInput};
use crate::matrix::MatrixQ;
use crate::{Error, Result};

pub const FORMAT_MAGIC: &str = "ppdgrp 1";

/// Serialize a validated group input to the canonical byte form.
pub fn write_group(g: &GroupInput) -> String {
    let f = &g.case.field;
    let d = g.case.d;
    let mut out = String::new();
    out.push_str(FORMAT_MAGIC);
    out.push('\n');
    out.push_str(&format!(
        "{} {} {} {} {}\n",
        f.p(),
        f.a(),
        d,
        g.generators.len(),
        g.case.family.token()
    ));
    if f.a() > 1 {
        let coeffs: Vec<String> = f.modulus().iter().map(|c| c.to_string()).collect();
        out.push_str(&coeffs.join(" "));
        out.push('\n');
    }
    if let Some(gram) = g.form.gram() {
        out.push_str(&format!("form {}\n", g.form.kind_token()));
        for i in 0..d {
            push_row(&mut out, gram, i);
        }
    }
    for m in &g.generators {
        out.push('\n');
        out.push_str("mat\n");
        for i in 0..d {
            push_row(&mut out, m, i);
        }
    }
    out
}

fn push_row(out: &mut String, m: &MatrixQ, i: usize) {
    let row: Vec<String> = m.row(i).iter().map(|e| e.0.to_string()).collect();
    out.push_str(&row.join(" "));
    out.push('\n');
}

struct Cursor<'a> {
    lines: Vec<&'a str>,
    next: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self) -> Result<(usize, &'a str)> {
        let lineno = self.next + 1;
        let line = self
            .lines
            .get(self.next)
            .copied()
            .ok_or_else(|| Error::Parse { line: lineno, msg: "unexpected end of file".into() })?;
        self.next += 1;
        Ok((lineno, line))
    }

    fn done(&self) -> bool {
        self.next == self.lines.len()
    }
}

fn split_tokens(lineno: usize, line: &str) -> Result<Vec<&str>> {
    if line.is_empty() {
        return Err(Error::Parse { line: lineno, msg: "empty line where tokens expected".into() });
    }
    let tokens: Vec<&str> = line.split(' ').collect();
    if tokens.iter().any(|t| t.is_empty()) {
        return Err(Error::Parse {
            line: lineno,
            msg: "tokens must be separated by single spaces".into(),
        });
    }
    Ok(tokens)
}

fn parse_u64(lineno: usize, token: &str) -> Result<u64> {
    token
        .parse::<u64>()
        .map_err(|_| Error::Parse { line: lineno, msg: format!("bad integer {token:?}") })
}

fn parse_matrix_rows(cur: &mut Cursor, field: &Field, d: usize) -> Result<MatrixQ> {
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(d);
    for _ in 0..d {
        let (lineno, line) = cur.take()?;
        let tokens = split_tokens(lineno, line)?;
        if tokens.len() != d {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected {d} entries, found {}", tokens.len()),
            });
        }
        let mut row = Vec::with_capacity(d);
        for t in tokens {
            let v = parse_u64(lineno, t)?;
            if v >= field.q() {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("entry encoding {v} outside 0..{}", field.q()),
                });
            }
            row.push(v);
        }
        rows.push(row);
    }
    MatrixQ::from_rows(field, &rows)
}

/// Parse and validate a group file.
pub fn parse_group(text: &str) -> Result<GroupInput> {
    let Some(body) = text.strip_suffix('\n') else {
        return Err(Error::Parse { line: text.lines().count().max(1), msg: "file must end with a newline".into() });
    };
    let mut cur = Cursor { lines: body.split('\n').collect(), next: 0 };

    let (lineno, magic) = cur.take()?;
    if magic != FORMAT_MAGIC {
        return Err(Error::Parse { line: lineno, msg: format!("expected {FORMAT_MAGIC:?}") });
    }

    let (lineno, header) = cur.take()?;
    let tokens = split_tokens(lineno, header)?;
    if tokens.len() != 5 {
        return Err(Error::Parse { line: lineno, msg: "header needs p a d k case".into() });
    }
    let p = parse_u64(lineno, tokens[0])?;
    let a = parse_u64(lineno, tokens[1])?;
    let d = parse_u64(lineno, tokens[2])? as usize;
    let k = parse_u64(lineno, tokens[3])? as usize;
    let family = Family::from_token(tokens[4])
        .ok_or_else(|| Error::Parse { line: lineno, msg: format!("unknown case {:?}", tokens[4]) })?;
    if a == 0 || a > u32::MAX as u64 {
        return Err(Error::Parse { line: lineno, msg: format!("bad extension degree {a}") });
    }
    if k == 0 {
        return Err(Error::Parse { line: lineno, msg: "at least one generator required".into() });
    }
    let field = Field::new(p, a as u32)?;

    if a > 1 {
        let (lineno, line) = cur.take()?;
        let tokens = split_tokens(lineno, line)?;
        let canonical = field.modulus();
        if tokens.len() != canonical.len() {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("modulus needs {} coefficients", canonical.len()),
            });
        }
        for (t, &c) in tokens.iter().zip(canonical) {
            if parse_u64(lineno, t)? != c as u64 {
                return Err(Error::Validation(format!(
                    "line {lineno}: modulus is not the canonical one for GF({}^{})",
                    p, a
                )));
            }
        }
    }

    let case = GroupCase::new(family, d, field.clone())?;

    let form = if family == Family::Linear {
        FormData::None
    } else {
        let (lineno, line) = cur.take()?;
        let tokens = split_tokens(lineno, line)?;
        if tokens.len() != 2 || tokens[0] != "form" {
            return Err(Error::Parse { line: lineno, msg: "expected form <kind>".into() });
        }
        let gram = parse_matrix_rows(&mut cur, &field, d)?;
        match tokens[1] {
            "alternating" => FormData::Alternating(gram),
            "sesquilinear" => FormData::Sesquilinear(gram),
            "quadratic" => FormData::Quadratic(gram),
            other => {
                return Err(Error::Parse { line: lineno, msg: format!("unknown form kind {other:?}") });
            }
        }
    };

    let mut generators = Vec::with_capacity(k);
    for _ in 0..k {
        let (lineno, blank) = cur.take()?;
        if !blank.is_empty() {
            return Err(Error::Parse { line: lineno, msg: "expected blank line before mat".into() });
        }
        let (lineno, mat) = cur.take()?;
        if mat != "mat" {
            return Err(Error::Parse { line: lineno, msg: "expected mat".into() });
        }
        generators.push(parse_matrix_rows(&mut cur, &field, d)?);
    }
    if !cur.done() {
        return Err(Error::Parse {
            line: cur.next + 1,
            msg: "trailing content after final generator".into(),
        });
    }
    GroupInput::new(case, form, generators)
}
