//! Finite presentations with marked meridians.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::words::{GeneratorId, Word};

/// A finite presentation. Relators are stored cyclically reduced, in a
/// canonical rotation, and without duplicates up to rotation and inversion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPresentation", into = "RawPresentation")]
pub struct Presentation {
    gen_count: usize,
    relators: Vec<Word>,
    meridians: Vec<bool>,
    distinguished: GeneratorId,
}

#[derive(Clone, Serialize, Deserialize)]
struct RawPresentation {
    gen_count: usize,
    relators: Vec<Word>,
    meridians: Vec<bool>,
    distinguished: GeneratorId,
}

impl TryFrom<RawPresentation> for Presentation {
    type Error = Error;
    fn try_from(r: RawPresentation) -> Result<Self> {
        Presentation::new(r.gen_count, r.relators, r.meridians, r.distinguished)
    }
}

impl From<Presentation> for RawPresentation {
    fn from(p: Presentation) -> Self {
        RawPresentation {
            gen_count: p.gen_count,
            relators: p.relators,
            meridians: p.meridians,
            distinguished: p.distinguished,
        }
    }
}

/// Canonical representative of a relator up to cyclic rotation and inversion.
/// Returns `None` for relators that are trivial after cyclic reduction.
pub fn canonical_relator(w: &Word) -> Option<Word> {
    let r = w.cyclically_reduced();
    if r.is_identity() {
        return None;
    }
    if r.syllables().len() == 1 {
        let s = r.syllables()[0];
        return Some(Word::power(s.gen, s.exp.abs()));
    }
    let inv = r.inverse();
    (0..r.syllables().len())
        .flat_map(|k| [r.rotate_syllables(k), inv.rotate_syllables(k)])
        .min()
}

impl Presentation {
    pub fn new(
        gen_count: usize,
        relators: impl IntoIterator<Item = Word>,
        meridians: Vec<bool>,
        distinguished: GeneratorId,
    ) -> Result<Self> {
        if meridians.len() != gen_count {
            return Err(Error::InvalidPresentation(format!(
                "{} meridian flags for {gen_count} generators",
                meridians.len()
            )));
        }
        if distinguished.index() >= gen_count || !meridians[distinguished.index()] {
            return Err(Error::InvalidPresentation(format!(
                "distinguished generator {distinguished} is not a meridian"
            )));
        }
        let mut p = Presentation {
            gen_count,
            relators: Vec::new(),
            meridians,
            distinguished,
        };
        for r in relators {
            p.push_relator(r)?;
        }
        Ok(p)
    }

    /// All generators are meridians, distinguished one is `x0`.
    pub fn all_meridian(
        gen_count: usize,
        relators: impl IntoIterator<Item = Word>,
    ) -> Result<Self> {
        Presentation::new(gen_count, relators, vec![true; gen_count], GeneratorId(0))
    }

    /// `⟨x | ⟩`.
    pub fn unknot() -> Self {
        Presentation::all_meridian(1, []).expect("valid")
    }

    fn push_relator(&mut self, r: Word) -> Result<()> {
        if let Some(g) = r.max_generator() {
            if g.index() >= self.gen_count {
                return Err(Error::GeneratorOutOfRange {
                    gen: g.0,
                    gen_count: self.gen_count,
                });
            }
        }
        if let Some(c) = canonical_relator(&r) {
            if !self.relators.contains(&c) {
                self.relators.push(c);
            }
        }
        Ok(())
    }

    pub fn with_relators(&self, extra: impl IntoIterator<Item = Word>) -> Result<Self> {
        let mut p = self.clone();
        for r in extra {
            p.push_relator(r)?;
        }
        Ok(p)
    }

    pub fn gen_count(&self) -> usize {
        self.gen_count
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn meridian_flags(&self) -> &[bool] {
        &self.meridians
    }

    pub fn is_meridian(&self, g: GeneratorId) -> bool {
        self.meridians.get(g.index()).copied().unwrap_or(false)
    }

    pub fn distinguished(&self) -> GeneratorId {
        self.distinguished
    }

    pub fn meridian_count(&self) -> usize {
        self.meridians.iter().filter(|&&m| m).count()
    }

    pub fn is_all_meridian(&self) -> bool {
        self.meridians.iter().all(|&m| m)
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Word::len).sum()
    }

    /// Checks the representation invariants.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidPresentation(m));
        if self.meridians.len() != self.gen_count {
            return bad("meridian flag count".into());
        }
        if !self.is_meridian(self.distinguished) {
            return bad("distinguished generator is not a meridian".into());
        }
        let mut seen = HashSet::new();
        for r in &self.relators {
            if canonical_relator(r).as_ref() != Some(r) {
                return bad(format!("relator {r} is not canonical"));
            }
            if r.max_generator()
                .is_some_and(|g| g.index() >= self.gen_count)
            {
                return bad(format!("relator {r} uses an unknown generator"));
            }
            if !seen.insert(r) {
                return bad(format!("duplicate relator {r}"));
            }
        }
        Ok(())
    }

    /// Relator-by-generator exponent-sum matrix.
    pub fn exponent_matrix(&self) -> Vec<Vec<i64>> {
        self.relators
            .iter()
            .map(|r| {
                r.exponent_vector(self.gen_count)
                    .expect("checked on insert")
                    .0
            })
            .collect()
    }

    /// Errors unless every generator is a meridian and every relator has zero
    /// exponent sum, so that all generators abelianize to the same class.
    pub fn require_all_meridian(&self) -> Result<()> {
        if !self.is_all_meridian() {
            return Err(Error::MixedAbelianization(
                "some generators are not meridians".into(),
            ));
        }
        if let Some(r) = self.relators.iter().find(|r| r.exponent_sum() != 0) {
            return Err(Error::MixedAbelianization(format!(
                "relator {r} has nonzero exponent sum"
            )));
        }
        Ok(())
    }

    /// Stable text serialization used for hashing; relators are sorted.
    pub fn canonical_string(&self) -> String {
        let mut rels: Vec<String> = self.relators.iter().map(Word::to_string).collect();
        rels.sort();
        let flags: String = self
            .meridians
            .iter()
            .map(|&m| if m { 'm' } else { '.' })
            .collect();
        format!(
            "g{};d{};f{};r{}",
            self.gen_count,
            self.distinguished.0,
            flags,
            rels.join(",")
        )
    }

    /// Hex SHA-256 of [`Presentation::canonical_string`].
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_string().as_bytes()))
    }

    /// Greedy Tietze elimination of generators that occur exactly once in some
    /// relator. Each step picks the elimination that keeps the total relator
    /// length smallest; eliminations that would blow the length past a cap
    /// are skipped. The distinguished meridian is only eliminated when nothing
    /// else is, in which case the first remaining meridian takes its role.
    pub fn simplified(&self) -> Presentation {
        let cap = (4 * self.total_length()).max(400);
        let mut gens: Vec<GeneratorId> = (0..self.gen_count).map(GeneratorId::from).collect();
        let mut rels = self.relators.clone();
        let mut distinguished = self.distinguished;
        loop {
            // (penalty, length, generator, new relators); eliminating
            // the distinguished meridian is a last resort.
            let mut best: Option<(bool, usize, GeneratorId, Vec<Word>)> = None;
            for (ri, r) in rels.iter().enumerate() {
                for &g in &gens {
                    if r.occurrences(g) != 1 {
                        continue;
                    }
                    let penalty = g == distinguished;
                    if penalty && !gens.iter().any(|&h| h != g && self.meridians[h.index()]) {
                        continue;
                    }
                    let image = solve_for(r, g);
                    let new: Vec<Word> = rels
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != ri)
                        .map(|(_, s)| substitute_one(s, g, &image))
                        .collect();
                    let len: usize = new.iter().map(Word::len).sum();
                    if len <= cap && best.as_ref().is_none_or(|b| (penalty, len) < (b.0, b.1)) {
                        best = Some((penalty, len, g, new));
                    }
                }
            }
            let Some((_, _, g, new)) = best else { break };
            gens.retain(|&h| h != g);
            if g == distinguished {
                distinguished = *gens
                    .iter()
                    .find(|h| self.meridians[h.index()])
                    .expect("checked");
            }
            let mut seen = HashSet::new();
            rels = new
                .iter()
                .filter_map(canonical_relator)
                .filter(|r| seen.insert(r.clone()))
                .collect();
        }
        let index_of = |g: GeneratorId| GeneratorId::from(gens.binary_search(&g).expect("kept"));
        let meridians = gens.iter().map(|g| self.meridians[g.index()]).collect();
        Presentation::new(
            gens.len(),
            rels.iter().map(|r| r.relabel(index_of)),
            meridians,
            index_of(distinguished),
        )
        .expect("elimination preserves validity")
    }
}

/// Solves `r = 1` for the generator `g`, which occurs exactly once in `r`.
fn solve_for(r: &Word, g: GeneratorId) -> Word {
    let k = r
        .syllables()
        .iter()
        .position(|s| s.gen == g)
        .expect("occurs once");
    let rot = r.rotate_syllables(k);
    // rot = g^e · u with e = ±1, so g^e = u⁻¹.
    let e = rot.syllables()[0].exp;
    let u = Word::from_syllables(rot.syllables()[1..].iter().copied());
    if e == 1 {
        u.inverse()
    } else {
        u
    }
}

fn substitute_one(w: &Word, g: GeneratorId, image: &Word) -> Word {
    let mut out = Word::identity();
    for s in w.syllables() {
        if s.gen == g {
            out.extend(&image.pow(s.exp));
        } else {
            out.push(s.gen, s.exp);
        }
    }
    out
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = (0..self.gen_count)
            .map(|i| {
                let mut s = format!("x{i}");
                if self.meridians[i] {
                    s.push('*');
                }
                s
            })
            .collect();
        let rels: Vec<String> = self.relators.iter().map(Word::to_string).collect();
        write!(f, "< {} | {} >", gens.join(", "), rels.join(", "))
    }
}
