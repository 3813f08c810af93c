//! Exact arithmetic in `G = (ℤ_p₁ ∗ ℤ_p₂) ⋊ ℤ₂`, where `z` inverts both factors.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::alexander::is_odd_prime;
use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::words::{GeneratorId, Word};

/// Which free factor a letter of the alternating word belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Factor {
    One,
    Two,
}

/// Normal form `c · z^flag` with `c` an alternating word in `a₁`, `a₂`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DihedralProductElement {
    pub word: Vec<(Factor, u32)>,
    pub z: bool,
}

impl DihedralProductElement {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty() && !self.z
    }
}

impl fmt::Display for DihedralProductElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .word
            .iter()
            .map(|&(fac, e)| {
                let n = if fac == Factor::One { 1 } else { 2 };
                if e == 1 {
                    format!("a{n}")
                } else {
                    format!("a{n}^{e}")
                }
            })
            .collect();
        if self.z {
            parts.push("z".into());
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("."))
        }
    }
}

/// The group `G` for a fixed pair of odd primes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DihedralProduct {
    pub p1: u32,
    pub p2: u32,
}

impl DihedralProduct {
    pub fn new(p1: u32, p2: u32) -> Result<Self> {
        for p in [p1, p2] {
            if !is_odd_prime(p as u64) {
                return Err(Error::NotOddPrime(p as u64));
            }
        }
        Ok(DihedralProduct { p1, p2 })
    }

    fn order(&self, f: Factor) -> u32 {
        match f {
            Factor::One => self.p1,
            Factor::Two => self.p2,
        }
    }

    pub fn z(&self) -> DihedralProductElement {
        DihedralProductElement {
            word: vec![],
            z: true,
        }
    }

    /// `a_f^e`, with `e` taken mod the order of the factor.
    pub fn a(&self, f: Factor, e: i64) -> DihedralProductElement {
        let mut c = Vec::new();
        self.push(&mut c, f, e);
        DihedralProductElement { word: c, z: false }
    }

    fn push(&self, c: &mut Vec<(Factor, u32)>, f: Factor, e: i64) {
        let p = self.order(f) as i64;
        let e = e.rem_euclid(p) as u32;
        if e == 0 {
            return;
        }
        match c.last_mut() {
            Some(last) if last.0 == f => {
                last.1 = (last.1 + e) % p as u32;
                if last.1 == 0 {
                    c.pop();
                }
            }
            _ => c.push((f, e)),
        }
    }

    /// Validates a normal form.
    pub fn check(&self, u: &DihedralProductElement) -> Result<()> {
        for (i, &(f, e)) in u.word.iter().enumerate() {
            if e == 0 || e >= self.order(f) {
                return Err(Error::Malformed(format!("exponent {e} in factor {f:?}")));
            }
            if i > 0 && u.word[i - 1].0 == f {
                return Err(Error::Malformed("letters do not alternate".into()));
            }
        }
        Ok(())
    }

    /// `(c₁z^e₁)(c₂z^e₂) = c₁·ψ^e₁(c₂)·z^(e₁+e₂)` where `ψ` inverts every letter.
    pub fn multiply(
        &self,
        u: &DihedralProductElement,
        v: &DihedralProductElement,
    ) -> DihedralProductElement {
        let mut c = u.word.clone();
        for &(f, e) in &v.word {
            let e = if u.z { -(e as i64) } else { e as i64 };
            self.push(&mut c, f, e);
        }
        DihedralProductElement {
            word: c,
            z: u.z ^ v.z,
        }
    }

    pub fn inverse(&self, u: &DihedralProductElement) -> DihedralProductElement {
        // (c z^e)⁻¹ = z^e c⁻¹ = ψ^e(c⁻¹) z^e
        let mut c = Vec::new();
        for &(f, e) in u.word.iter().rev() {
            let e = if u.z { e as i64 } else { -(e as i64) };
            self.push(&mut c, f, e);
        }
        DihedralProductElement { word: c, z: u.z }
    }

    pub fn pow(&self, u: &DihedralProductElement, n: i64) -> DihedralProductElement {
        let base = if n < 0 { self.inverse(u) } else { u.clone() };
        (0..n.unsigned_abs()).fold(DihedralProductElement::identity(), |acc, _| {
            self.multiply(&acc, &base)
        })
    }

    /// Image of a word under a generator assignment.
    pub fn evaluate(
        &self,
        w: &Word,
        assignment: &[DihedralProductElement],
    ) -> Result<DihedralProductElement> {
        let mut acc = DihedralProductElement::identity();
        for s in w.syllables() {
            let img = assignment
                .get(s.gen.index())
                .ok_or(Error::UnmappedGenerator(s.gen.0))?;
            acc = self.multiply(&acc, &self.pow(img, s.exp));
        }
        Ok(acc)
    }

    /// All reduced alternating words with at most `max_len` letters, shortest first.
    pub fn alternating_words(&self, max_len: usize) -> Vec<Vec<(Factor, u32)>> {
        let mut out = vec![vec![]];
        let mut frontier: Vec<Vec<(Factor, u32)>> = vec![vec![]];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for f in [Factor::One, Factor::Two] {
                    if w.last().is_some_and(|l| l.0 == f) {
                        continue;
                    }
                    for e in 1..self.order(f) {
                        let mut v = w.clone();
                        v.push((f, e));
                        next.push(v);
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }
}

pub fn nf_multiply(
    p1: u32,
    p2: u32,
    u: &DihedralProductElement,
    v: &DihedralProductElement,
) -> Result<DihedralProductElement> {
    let g = DihedralProduct::new(p1, p2)?;
    g.check(u)?;
    g.check(v)?;
    Ok(g.multiply(u, v))
}

pub fn evaluate_in_g(
    p1: u32,
    p2: u32,
    w: &Word,
    assignment: &[DihedralProductElement],
) -> Result<DihedralProductElement> {
    DihedralProduct::new(p1, p2)?.evaluate(w, assignment)
}

/// `⟨z, a₁, a₂ | z², a₁^p₁, a₂^p₂, za₁za₁, za₂za₂⟩` with `z` the distinguished meridian.
pub fn dihedral_product_group(p1: u32, p2: u32) -> Result<Presentation> {
    DihedralProduct::new(p1, p2)?;
    let (z, a1, a2) = (GeneratorId(0), GeneratorId(1), GeneratorId(2));
    let rels = [
        Word::power(z, 2),
        Word::power(a1, p1 as i64),
        Word::power(a2, p2 as i64),
        Word::reduce([(z, 1), (a1, 1), (z, 1), (a1, 1)]),
        Word::reduce([(z, 1), (a2, 1), (z, 1), (a2, 1)]),
    ];
    Presentation::new(3, rels, vec![true, false, false], z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_identities() {
        let g = DihedralProduct::new(3, 5).unwrap();
        let z = g.z();
        assert!(g.multiply(&z, &z).is_identity());
        let a1 = g.a(Factor::One, 1);
        let zaz = g.multiply(&g.multiply(&z, &a1), &z);
        assert_eq!(zaz, g.a(Factor::One, 2));
        assert_eq!(g.multiply(&DihedralProductElement::identity(), &a1), a1);
        assert!(DihedralProduct::new(3, 9).is_err());
        assert!(DihedralProduct::new(2, 3).is_err());
    }

    #[test]
    fn relators_map_to_identity() {
        let g = DihedralProduct::new(3, 5).unwrap();
        let p = dihedral_product_group(3, 5).unwrap();
        let assign = [g.z(), g.a(Factor::One, 1), g.a(Factor::Two, 1)];
        for r in p.relators() {
            assert!(g.evaluate(r, &assign).unwrap().is_identity(), "{r}");
        }
    }

    #[test]
    fn inverse_is_two_sided() {
        let g = DihedralProduct::new(3, 3).unwrap();
        for c in g.alternating_words(3) {
            for z in [false, true] {
                let u = DihedralProductElement { word: c.clone(), z };
                assert!(g.multiply(&u, &g.inverse(&u)).is_identity());
                assert!(g.multiply(&g.inverse(&u), &u).is_identity());
            }
        }
    }

    #[test]
    fn alternating_word_counts() {
        // 1 + (2 + 2) + (2·2 + 2·2) for p1 = p2 = 3
        let g = DihedralProduct::new(3, 3).unwrap();
        assert_eq!(g.alternating_words(2).len(), 1 + 4 + 8);
    }
}
