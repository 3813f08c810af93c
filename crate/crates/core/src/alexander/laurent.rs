//! Integer Laurent polynomials in one variable and matrices over them.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// `Σ cₑ tᵉ` with no zero coefficients stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn t() -> Self {
        Self::monomial(1, 1)
    }

    pub fn monomial(c: impl Into<BigInt>, e: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(c.into(), e);
        p
    }

    pub fn add_term(&mut self, c: BigInt, e: i64) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(e).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        self.coeffs.get(&e).cloned().unwrap_or_default()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Multiplication by `tᵏ`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&e, c)| (e + k, c.clone()))
                .collect(),
        }
    }

    pub fn eval_at_minus_one(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|(&e, c)| if e.rem_euclid(2) == 0 { c.clone() } else { -c })
            .sum()
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    /// Exact quotient `self / d`, if it exists in `ℤ[t, t⁻¹]`.
    pub fn exact_div(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        let (dlo, dhi) = (d.min_exp()?, d.max_exp()?);
        if self.is_zero() {
            return Some(Self::zero());
        }
        let lead = d.coeff(dhi);
        let mut rem = self.clone();
        let mut q = LaurentPoly::zero();
        while let Some(hi) = rem.max_exp() {
            let lo = rem.min_exp().expect("nonzero");
            if hi - lo < dhi - dlo {
                return None;
            }
            let (c, r) = rem.coeff(hi).div_rem(&lead);
            if !r.is_zero() {
                return None;
            }
            let e = hi - dhi;
            let term = LaurentPoly::monomial(c, e);
            rem = &rem - &(&term * d);
            q = &q + &term;
        }
        Some(q)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.coeffs {
            out.add_term(c.clone(), e);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&e1, c1) in &self.coeffs {
            for (&e2, c2) in &rhs.coeffs {
                out.add_term(c1 * c2, e1 + e2);
            }
        }
        out
    }
}

/// Ascending exponents, e.g. `-1+t-t^2` or `2t^-1-3+t^3`; zero is `0`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (&e, c)) in self.coeffs.iter().enumerate() {
            let mut term = if e == 0 {
                c.to_string()
            } else if c.is_one() {
                String::new()
            } else if (-c).is_one() {
                "-".to_string()
            } else {
                c.to_string()
            };
            if e != 0 {
                term.push('t');
                if e != 1 {
                    term.push_str(&format!("^{e}"));
                }
            }
            if i > 0 && !term.starts_with('-') {
                f.write_str("+")?;
            }
            f.write_str(&term)?;
        }
        Ok(())
    }
}

impl FromStr for LaurentPoly {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad Laurent polynomial `{text}`"));
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(bad());
        }
        // Split before every sign that does not follow a caret.
        let mut terms = Vec::new();
        let mut cur = String::new();
        for (i, ch) in s.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        let mut p = LaurentPoly::zero();
        for term in terms {
            let (neg, body) = match term.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, term.strip_prefix('+').unwrap_or(&term)),
            };
            let (coef, exp) = match body.split_once('t') {
                None => (body.parse::<BigInt>().map_err(|_| bad())?, 0),
                Some((c, rest)) => {
                    let c = if c.is_empty() {
                        BigInt::one()
                    } else {
                        c.parse().map_err(|_| bad())?
                    };
                    let e = match rest.strip_prefix('^') {
                        Some(e) => e.parse::<i64>().map_err(|_| bad())?,
                        None if rest.is_empty() => 1,
                        None => return Err(bad()),
                    };
                    (c, e)
                }
            };
            p.add_term(if neg { -coef } else { coef }, exp);
        }
        Ok(p)
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Dense row-major matrix of Laurent polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        LaurentMatrix {
            rows,
            cols,
            entries: vec![LaurentPoly::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<LaurentPoly>>, cols: usize) -> Result<Self> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Malformed("ragged matrix".into()));
        }
        let n = rows.len();
        Ok(LaurentMatrix {
            rows: n,
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[LaurentPoly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn eval_at_minus_one(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(LaurentPoly::eval_at_minus_one)
                    .collect()
            })
            .collect()
    }

    /// Determinant of the square submatrix on the given rows and columns,
    /// by fraction-free elimination with exact Laurent division.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> LaurentPoly {
        let k = rows.len();
        assert_eq!(k, cols.len());
        if k == 0 {
            return LaurentPoly::one();
        }
        let mut m: Vec<Vec<LaurentPoly>> = rows
            .iter()
            .map(|&i| cols.iter().map(|&j| self.get(i, j).clone()).collect())
            .collect();
        let mut sign = false;
        let mut prev = LaurentPoly::one();
        for c in 0..k {
            let Some(piv) = (c..k).find(|&r| !m[r][c].is_zero()) else {
                return LaurentPoly::zero();
            };
            if piv != c {
                m.swap(piv, c);
                sign = !sign;
            }
            for r in c + 1..k {
                for j in c + 1..k {
                    let num = &(&m[c][c] * &m[r][j]) - &(&m[r][c] * &m[c][j]);
                    m[r][j] = num
                        .exact_div(&prev)
                        .expect("fraction-free elimination divides exactly");
                }
                m[r][c] = LaurentPoly::zero();
            }
            prev = m[c][c].clone();
        }
        if sign {
            -&m[k - 1][k - 1]
        } else {
            m[k - 1][k - 1].clone()
        }
    }

    /// All `k × k` minors in lexicographic order of (rows, cols).
    pub fn minors(&self, k: usize) -> Vec<LaurentPoly> {
        let rs = combinations(self.rows, k);
        let cs = combinations(self.cols, k);
        rs.iter()
            .flat_map(|r| cs.iter().map(move |c| self.minor(r, c)))
            .collect()
    }
}

/// `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
