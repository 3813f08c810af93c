//! Fox free derivatives.

use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use super::laurent::{LaurentMatrix, LaurentPoly};
use crate::error::Result;
use crate::presentation::Presentation;
use crate::words::{GeneratorId, Word};

/// Element of the integral group ring of a free group.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupRingElement {
    terms: BTreeMap<Word, i64>,
}

impl GroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn word(w: Word) -> Self {
        let mut e = Self::zero();
        e.add_term(w, 1);
        e
    }

    pub fn one() -> Self {
        Self::word(Word::identity())
    }

    pub fn add_term(&mut self, w: Word, c: i64) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(w.clone()).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.terms.remove(&w);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, i64)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sends every generator to `t`.
    pub fn abelianize(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (w, &c) in &self.terms {
            p.add_term(c.into(), w.exponent_sum());
        }
        p
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut out = Self::zero();
        for (w, &c) in &self.terms {
            out.add_term(w.clone(), c * k);
        }
        out
    }
}

impl Add for &GroupRingElement {
    type Output = GroupRingElement;
    fn add(self, rhs: &GroupRingElement) -> GroupRingElement {
        let mut out = self.clone();
        for (w, &c) in &rhs.terms {
            out.add_term(w.clone(), c);
        }
        out
    }
}

impl Mul for &GroupRingElement {
    type Output = GroupRingElement;
    fn mul(self, rhs: &GroupRingElement) -> GroupRingElement {
        let mut out = GroupRingElement::zero();
        for (u, &a) in &self.terms {
            for (v, &b) in &rhs.terms {
                out.add_term(u * v, a * b);
            }
        }
        out
    }
}

/// `∂w/∂g`, accumulated letter by letter: a letter `g` at prefix `p`
/// contributes `p`, a letter `g⁻¹` contributes `−p·g⁻¹`.
pub fn fox_derivative(w: &Word, g: GeneratorId) -> GroupRingElement {
    let mut out = GroupRingElement::zero();
    let mut prefix = Word::identity();
    for l in w.letters() {
        if l.gen == g {
            if l.inverse {
                out.add_term(&prefix * &Word::power(g, -1), -1);
            } else {
                out.add_term(prefix.clone(), 1);
            }
        }
        prefix.push(l.gen, l.sign());
    }
    out
}

/// Abelianized Fox derivative without building the group-ring element.
pub fn fox_derivative_abelian(w: &Word, g: GeneratorId) -> LaurentPoly {
    let mut out = LaurentPoly::zero();
    let mut s = 0i64;
    for l in w.letters() {
        if l.gen == g {
            if l.inverse {
                out.add_term((-1).into(), s - 1);
            } else {
                out.add_term(1.into(), s);
            }
        }
        s += l.sign();
    }
    out
}

/// Row of the Alexander matrix evaluated at `t = −1`.
pub fn fox_row_at_minus_one(w: &Word, gen_count: usize) -> Vec<i64> {
    let mut row = vec![0i64; gen_count];
    let mut s = 0i64;
    for l in w.letters() {
        let e = if l.inverse { s - 1 } else { s };
        let sign = if e.rem_euclid(2) == 0 { 1 } else { -1 };
        row[l.gen.index()] += if l.inverse { -sign } else { sign };
        s += l.sign();
    }
    row
}

/// Relator-by-generator matrix of abelianized Fox derivatives.
pub fn alexander_matrix(p: &Presentation) -> Result<LaurentMatrix> {
    p.require_all_meridian()?;
    let rows = p
        .relators()
        .iter()
        .map(|r| {
            (0..p.gen_count())
                .map(|g| fox_derivative_abelian(r, GeneratorId::from(g)))
                .collect()
        })
        .collect();
    LaurentMatrix::from_rows(rows, p.gen_count())
}

/// `A(−1)` as a small integer matrix.
pub fn alexander_matrix_at_minus_one(p: &Presentation) -> Result<Vec<Vec<i64>>> {
    p.require_all_meridian()?;
    Ok(p.relators()
        .iter()
        .map(|r| fox_row_at_minus_one(r, p.gen_count()))
        .collect())
}
