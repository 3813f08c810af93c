//! Free-group words in syllable form.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Index of a generator inside a presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GeneratorId(pub u32);

impl GeneratorId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for GeneratorId {
    fn from(i: usize) -> Self {
        GeneratorId(i as u32)
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// A power of a single generator. The exponent is never zero inside a [`Word`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Syllable {
    pub gen: GeneratorId,
    pub exp: i64,
}

/// A single letter `g` or `g^-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: GeneratorId,
    pub inverse: bool,
}

impl Letter {
    /// Ordering key used for lexicographic enumeration: `x0, x0^-1, x1, x1^-1, ...`.
    pub fn key(self) -> u64 {
        2 * self.gen.0 as u64 + self.inverse as u64
    }

    pub fn from_key(k: u64) -> Self {
        Letter {
            gen: GeneratorId((k / 2) as u32),
            inverse: k % 2 == 1,
        }
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// A freely reduced word. Adjacent syllables always carry distinct generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    syllables: Vec<Syllable>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn gen(g: impl Into<GeneratorId>) -> Self {
        Word::power(g, 1)
    }

    pub fn power(g: impl Into<GeneratorId>, exp: i64) -> Self {
        let mut w = Word::identity();
        w.push(g.into(), exp);
        w
    }

    /// Free reduction of an arbitrary list of generator powers.
    pub fn reduce<I, G>(raw: I) -> Self
    where
        I: IntoIterator<Item = (G, i64)>,
        G: Into<GeneratorId>,
    {
        let mut w = Word::identity();
        for (g, e) in raw {
            w.push(g.into(), e);
        }
        w
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        Word::reduce(letters.into_iter().map(|l| (l.gen, l.sign())))
    }

    /// Appends `g^exp`, cancelling against the last syllable.
    ///
    /// Cancellation can never cascade: after popping a syllable the new last
    /// one has a generator different from `g`.
    pub fn push(&mut self, g: GeneratorId, exp: i64) {
        if exp == 0 {
            return;
        }
        match self.syllables.last_mut() {
            Some(last) if last.gen == g => {
                last.exp += exp;
                if last.exp == 0 {
                    self.syllables.pop();
                }
            }
            _ => self.syllables.push(Syllable { gen: g, exp }),
        }
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Number of letters, i.e. the sum of absolute exponents.
    pub fn len(&self) -> usize {
        self.syllables
            .iter()
            .map(|s| s.exp.unsigned_abs() as usize)
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.is_identity()
    }

    pub fn letters(&self) -> impl DoubleEndedIterator<Item = Letter> + '_ {
        self.syllables.iter().flat_map(|s| {
            let l = Letter {
                gen: s.gen,
                inverse: s.exp < 0,
            };
            std::iter::repeat_n(l, s.exp.unsigned_abs() as usize)
        })
    }

    pub fn inverse(&self) -> Word {
        Word {
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable {
                    gen: s.gen,
                    exp: -s.exp,
                })
                .collect(),
        }
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::identity();
        for _ in 0..n.unsigned_abs() {
            w = &w * &base;
        }
        w
    }

    /// `g⁻¹ · self · g`.
    pub fn conjugate(&self, g: &Word) -> Word {
        &(&g.inverse() * self) * g
    }

    /// `[a, b] = a⁻¹b⁻¹ab`.
    pub fn commutator(a: &Word, b: &Word) -> Word {
        let mut w = a.inverse();
        w.extend(&b.inverse());
        w.extend(a);
        w.extend(b);
        w
    }

    pub fn extend(&mut self, other: &Word) {
        for s in &other.syllables {
            self.push(s.gen, s.exp);
        }
    }

    pub fn exponent_sum(&self) -> i64 {
        self.syllables.iter().map(|s| s.exp).sum()
    }

    pub fn exponent_vector(&self, gen_count: usize) -> Result<ExponentVector> {
        let mut v = vec![0i64; gen_count];
        for s in &self.syllables {
            let slot = v.get_mut(s.gen.index()).ok_or(Error::GeneratorOutOfRange {
                gen: s.gen.0,
                gen_count,
            })?;
            *slot += s.exp;
        }
        Ok(ExponentVector(v))
    }

    /// Largest generator index that occurs, if any.
    pub fn max_generator(&self) -> Option<GeneratorId> {
        self.syllables.iter().map(|s| s.gen).max()
    }

    pub fn occurrences(&self, g: GeneratorId) -> u64 {
        self.syllables
            .iter()
            .filter(|s| s.gen == g)
            .map(|s| s.exp.unsigned_abs())
            .sum()
    }

    /// Cyclic reduction; the result is conjugate to `self`.
    pub fn cyclically_reduced(&self) -> Word {
        let mut s = self.syllables.clone();
        while s.len() >= 2 && s[0].gen == s[s.len() - 1].gen {
            let last = s.pop().expect("len >= 2");
            s[0].exp += last.exp;
            if s[0].exp == 0 {
                s.remove(0);
            }
        }
        Word { syllables: s }
    }

    /// Rotation by whole syllables: the word starting at syllable `k`.
    pub fn rotate_syllables(&self, k: usize) -> Word {
        let mut s = self.syllables[k..].to_vec();
        s.extend_from_slice(&self.syllables[..k]);
        Word { syllables: s }
    }

    /// Replaces every generator by its image.
    pub fn substitute(&self, images: &[Word]) -> Result<Word> {
        let mut w = Word::identity();
        for s in &self.syllables {
            let img = images
                .get(s.gen.index())
                .ok_or(Error::UnmappedGenerator(s.gen.0))?;
            w.extend(&img.pow(s.exp));
        }
        Ok(w)
    }

    /// Renames generators through `map`.
    pub fn relabel(&self, map: impl Fn(GeneratorId) -> GeneratorId) -> Word {
        Word::reduce(self.syllables.iter().map(|s| (map(s.gen), s.exp)))
    }

    /// Builds a word directly from syllables, reducing as needed.
    pub fn from_syllables(s: impl IntoIterator<Item = Syllable>) -> Word {
        Word::reduce(s.into_iter().map(|s| (s.gen, s.exp)))
    }
}

impl Mul for &Word {
    type Output = Word;
    fn mul(self, rhs: &Word) -> Word {
        let mut w = self.clone();
        w.extend(rhs);
        w
    }
}

impl Mul for Word {
    type Output = Word;
    fn mul(mut self, rhs: Word) -> Word {
        self.extend(&rhs);
        self
    }
}

/// Shortlex order on letters with key `2·gen + inverse`.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            self.letters()
                .map(Letter::key)
                .cmp(other.letters().map(Letter::key))
        })
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return f.write_str("1");
        }
        for (i, s) in self.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            if s.exp == 1 {
                write!(f, "x{}", s.gen.0)?;
            } else {
                write!(f, "x{}^{}", s.gen.0, s.exp)?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(text: &str) -> Result<Word> {
        let text = text.trim();
        if text == "1" || text.is_empty() {
            return Ok(Word::identity());
        }
        let bad = || Error::Parse(format!("bad word `{text}`"));
        let mut raw = Vec::new();
        for part in text.split('.') {
            let rest = part.trim().strip_prefix('x').ok_or_else(bad)?;
            let (g, e) = match rest.split_once('^') {
                Some((g, e)) => (g, e.parse::<i64>().map_err(|_| bad())?),
                None => (rest, 1),
            };
            let g: u32 = g.parse().map_err(|_| bad())?;
            raw.push((GeneratorId(g), e));
        }
        Ok(Word::reduce(raw))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Word, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Image of a word in the free abelian group on the generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExponentVector(pub Vec<i64>);

impl ExponentVector {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Add for &ExponentVector {
    type Output = ExponentVector;
    fn add(self, rhs: &ExponentVector) -> ExponentVector {
        ExponentVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

/// A homomorphism of free groups given by generator images.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Homomorphism {
    images: Vec<Word>,
    target_gen_count: usize,
}

impl Homomorphism {
    pub fn new(images: Vec<Word>, target_gen_count: usize) -> Result<Self> {
        for w in &images {
            if let Some(g) = w.max_generator() {
                if g.index() >= target_gen_count {
                    return Err(Error::GeneratorOutOfRange {
                        gen: g.0,
                        gen_count: target_gen_count,
                    });
                }
            }
        }
        Ok(Homomorphism {
            images,
            target_gen_count,
        })
    }

    pub fn identity(n: usize) -> Self {
        Homomorphism {
            images: (0..n).map(Word::gen).collect(),
            target_gen_count: n,
        }
    }

    pub fn source_gen_count(&self) -> usize {
        self.images.len()
    }

    pub fn target_gen_count(&self) -> usize {
        self.target_gen_count
    }

    pub fn image(&self, g: GeneratorId) -> Option<&Word> {
        self.images.get(g.index())
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        w.substitute(&self.images)
    }
}

/// Candidate conjugators `w` for relators of the form `[x, w]` or `[x, x^w]`.
///
/// Yields each class under `w ~ x^a·w·x^b` once, represented by a word with
/// zero exponent sum that does not end in a power of the meridian `x`. Words
/// of the same length appear in lexicographic letter order.
pub struct CandidateConjugators {
    gen_count: usize,
    meridian: GeneratorId,
    max_length: usize,
    length: usize,
    batch: std::vec::IntoIter<Word>,
}

impl CandidateConjugators {
    pub fn new(gen_count: usize, meridian: GeneratorId, max_length: usize) -> Self {
        CandidateConjugators {
            gen_count,
            meridian,
            max_length,
            length: 0,
            batch: vec![Word::identity()].into_iter(),
        }
    }

    fn level(&self, len: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut prefix = Vec::with_capacity(len);
        self.fill(len, &mut prefix, 0, &mut out);
        out
    }

    fn fill(&self, len: usize, prefix: &mut Vec<Letter>, sum: i64, out: &mut Vec<Word>) {
        let remaining = len - prefix.len();
        if sum.unsigned_abs() as usize > remaining {
            return;
        }
        if remaining == 0 {
            if sum == 0 && prefix.last().is_some_and(|l| l.gen != self.meridian) {
                out.push(Word::from_letters(prefix.iter().copied()));
            }
            return;
        }
        for k in 0..2 * self.gen_count as u64 {
            let l = Letter::from_key(k);
            if prefix
                .last()
                .is_some_and(|p| p.gen == l.gen && p.inverse != l.inverse)
            {
                continue;
            }
            prefix.push(l);
            self.fill(len, prefix, sum + l.sign(), out);
            prefix.pop();
        }
    }
}

impl Iterator for CandidateConjugators {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        loop {
            if let Some(w) = self.batch.next() {
                return Some(w);
            }
            if self.length >= self.max_length || self.gen_count == 0 {
                return None;
            }
            self.length += 1;
            self.batch = self.level(self.length).into_iter();
        }
    }
}

pub fn enumerate_candidate_conjugators(
    gen_count: usize,
    meridian: GeneratorId,
    max_length: usize,
) -> CandidateConjugators {
    CandidateConjugators::new(gen_count, meridian, max_length)
}
