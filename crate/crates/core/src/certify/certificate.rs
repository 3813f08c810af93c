//! Replayable certificates.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::budget::Deadline;
use super::coset::todd_coxeter_with_deadline;
use super::finite::Perm;
use super::homsearch::PermHom;
use crate::alexander::{abelianization_invariants, is_odd_prime, nakanishi_lower_bound};
use crate::constructors::{
    dihedral_product_group, finger_move_relator, stabilization_relator, DihedralProduct,
    DihedralProductElement, Factor,
};
use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::words::{GeneratorId, Word};
use crate::TOOL_VERSION;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CertificateKind {
    InfiniteCyclic,
    NonTrivialQuotient,
    NonAbelianQuotient,
    BoundWitness,
}

/// The invariants of the chain `m ≤ a ≤ a_st ≤ a_fw ≤ μ−1`, in chain order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Invariant {
    Nakanishi,
    MaQiu,
    #[serde(rename = "a_st")]
    AStab,
    AFw,
    MeridionalRankMinusOne,
}

impl Invariant {
    pub const CHAIN: [Invariant; 5] = [
        Invariant::Nakanishi,
        Invariant::MaQiu,
        Invariant::AStab,
        Invariant::AFw,
        Invariant::MeridionalRankMinusOne,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Invariant::Nakanishi => "m",
            Invariant::MaQiu => "a",
            Invariant::AStab => "a_st",
            Invariant::AFw => "a_fw",
            Invariant::MeridionalRankMinusOne => "mu-1",
        }
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Relator families used for upper bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    MaQiu,
    #[serde(rename = "a_st")]
    AStab,
    AFw,
}

impl BoundKind {
    pub const ALL: [BoundKind; 3] = [BoundKind::MaQiu, BoundKind::AStab, BoundKind::AFw];

    pub fn invariant(self) -> Invariant {
        match self {
            BoundKind::MaQiu => Invariant::MaQiu,
            BoundKind::AStab => Invariant::AStab,
            BoundKind::AFw => Invariant::AFw,
        }
    }

    /// The witness relator for conjugator `w` at meridian `x`.
    pub fn witness(self, x: GeneratorId, w: &Word) -> WitnessRelator {
        match self {
            BoundKind::MaQiu => WitnessRelator::Word { w: w.clone() },
            BoundKind::AStab => WitnessRelator::Stabilization {
                a: x,
                b: x,
                g: w.clone(),
            },
            BoundKind::AFw => WitnessRelator::FingerMove {
                a: x,
                b: x,
                g: w.clone(),
            },
        }
    }
}

impl std::str::FromStr for BoundKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ma_qiu" | "a" => Ok(BoundKind::MaQiu),
            "a_st" => Ok(BoundKind::AStab),
            "a_fw" => Ok(BoundKind::AFw),
            _ => Err(Error::Parse(format!("unknown bound kind `{s}`"))),
        }
    }
}

/// One added relation, recorded by shape so replay can check the shape.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum WitnessRelator {
    /// An arbitrary relator.
    Word { w: Word },
    /// `a^g = b` for meridians `a`, `b`; with `a = b = x` this is `[x, g]`.
    Stabilization {
        a: GeneratorId,
        b: GeneratorId,
        g: Word,
    },
    /// `[a, b^g] = 1` for meridians `a`, `b`; with `a = b = x` this is `[x, x^g]`.
    FingerMove {
        a: GeneratorId,
        b: GeneratorId,
        g: Word,
    },
}

impl WitnessRelator {
    pub fn relator(&self) -> Word {
        match self {
            WitnessRelator::Word { w } => w.clone(),
            WitnessRelator::Stabilization { a, b, g } => stabilization_relator(g, *a, *b),
            WitnessRelator::FingerMove { a, b, g } => finger_move_relator(g, *a, *b),
        }
    }

    fn admissible(&self, kind: BoundKind, p: &Presentation) -> bool {
        let meridians = |a: &GeneratorId, b: &GeneratorId| {
            [a, b]
                .iter()
                .all(|g| g.index() < p.gen_count() && p.is_meridian(**g))
        };
        match (kind, self) {
            (BoundKind::MaQiu, WitnessRelator::Word { .. }) => true,
            (
                BoundKind::MaQiu,
                WitnessRelator::Stabilization { a, b, .. }
                | WitnessRelator::FingerMove { a, b, .. },
            ) => meridians(a, b),
            (BoundKind::AStab, WitnessRelator::Stabilization { a, b, .. }) => meridians(a, b),
            (BoundKind::AFw, WitnessRelator::FingerMove { a, b, .. }) => meridians(a, b),
            _ => false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Lower,
    Upper,
}

/// What a certificate asserts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "claim", rename_all = "snake_case")]
pub enum Payload {
    /// The group is infinite cyclic.
    InfiniteCyclic,
    /// The quotient by the extra relators is nonabelian.
    NonAbelianQuotient {
        extra_relators: Vec<Word>,
        target: String,
        witness: (usize, usize),
    },
    /// `⟨a₁, a₂ | a₁^p₁, a₂^p₂, g²⟩` is nontrivial.
    NonTrivialQuotient {
        p1: u32,
        p2: u32,
        g: Word,
        target: String,
    },
    /// `invariant ≥ value` or `invariant ≤ value`.
    Bound {
        invariant: Invariant,
        direction: Direction,
        value: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        note: Option<String>,
    },
}

/// One cell of a bounded sweep: a homomorphism `G → S_d` killing `[z, z^v]`
/// with `z` and some `aᵢ` not commuting.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepCell {
    pub v: Word,
    pub hom: PermHom,
}

/// Evidence checked on replay.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "evidence", rename_all = "snake_case")]
pub enum Replay {
    /// Abelianization is recomputed; the index-1 coset table is rebuilt by the
    /// deterministic enumerator with the recorded coset limit and scanned.
    CosetIndexOne {
        presentation: Presentation,
        max_cosets: usize,
    },
    /// A homomorphism killing the relators and extras.
    Homomorphism {
        presentation: Presentation,
        extra_relators: Vec<Word>,
        hom: PermHom,
    },
    /// Upper bound: the quotient by the witness relators is infinite cyclic.
    Relators {
        presentation: Presentation,
        kind: BoundKind,
        relators: Vec<WitnessRelator>,
        quotient: Box<Certificate>,
    },
    /// Lower bound on `m` from the rank of `A(−1)` mod `p`.
    ColoringRank {
        presentation: Presentation,
        prime: u64,
    },
    /// Lower bound `a ≥ 1`: the group has a nonabelian quotient.
    NonAbelian { certificate: Box<Certificate> },
    /// Lower bound `a_fw ≥ 2` up to the sweep length: a surjection onto `G`
    /// and a nonabelian quotient of `G / ⟨⟨[z, z^v]⟩⟩` for every reduced
    /// alternating `v` with at most `sweep_length` syllables.
    Sweep {
        presentation: Presentation,
        p1: u32,
        p2: u32,
        surjection: Vec<DihedralProductElement>,
        sweep_length: usize,
        cells: Vec<SweepCell>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub presentation_hash: String,
    pub payload: Payload,
    pub replay_data: Replay,
    pub tool_version: String,
}

fn reject<T>(m: impl Into<String>) -> Result<T> {
    Err(Error::CertificateRejected(m.into()))
}

fn ensure(ok: bool, m: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        reject(m)
    }
}

/// `⟨a₁, a₂ | a₁^p₁, a₂^p₂, g²⟩` on generators `x0`, `x1`.
pub fn freiheitssatz_presentation(p1: u32, p2: u32, g: &Word) -> Result<Presentation> {
    Presentation::new(
        2,
        [
            Word::power(0usize, p1 as i64),
            Word::power(1usize, p2 as i64),
            g.pow(2),
        ],
        vec![true, false],
        GeneratorId(0),
    )
}

/// Checks that `g` alternates between `x0` and `x1` with exponents that are
/// nonzero modulo the respective primes.
pub fn check_alternating(p1: u32, p2: u32, g: &Word) -> Result<()> {
    let s = g.syllables();
    for (i, syl) in s.iter().enumerate() {
        let p = match syl.gen.0 {
            0 => p1,
            1 => p2,
            _ => {
                return Err(Error::Malformed(format!(
                    "{g} uses a generator other than x0, x1"
                )))
            }
        } as i64;
        if syl.exp.rem_euclid(p) == 0 {
            return Err(Error::Malformed(format!(
                "{g} has a syllable trivial mod {p}"
            )));
        }
        if i > 0 && s[i - 1].gen == syl.gen {
            return Err(Error::Malformed(format!("{g} is not alternating")));
        }
    }
    Ok(())
}

/// Alternating `a₁, a₂` word on generators `x1`, `x2` of `G`.
pub fn alternating_word(letters: &[(Factor, u32)]) -> Word {
    Word::reduce(
        letters
            .iter()
            .map(|&(f, e)| (if f == Factor::One { 1usize } else { 2usize }, e as i64)),
    )
}

/// Alternating `a₁, a₂` word on the generators `x0`, `x1` of the free product.
pub fn free_product_word(letters: &[(Factor, u32)]) -> Word {
    Word::reduce(
        letters
            .iter()
            .map(|&(f, e)| (if f == Factor::One { 0usize } else { 1usize }, e as i64)),
    )
}

impl Certificate {
    pub fn new(
        kind: CertificateKind,
        presentation: &Presentation,
        payload: Payload,
        replay_data: Replay,
    ) -> Self {
        Certificate {
            kind,
            presentation_hash: presentation.hash(),
            payload,
            replay_data,
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    /// Content digest of the serialized certificate.
    pub fn digest(&self) -> String {
        let json = serde_json::to_string(self).expect("serializable");
        hex::encode(Sha256::digest(json.as_bytes()))
    }

    /// The bound this certificate asserts, if any.
    pub fn bound(&self) -> Option<(Invariant, Direction, usize)> {
        match &self.payload {
            Payload::Bound {
                invariant,
                direction,
                value,
                ..
            } => Some((*invariant, *direction, *value)),
            _ => None,
        }
    }

    /// Re-verifies from `replay_data` alone.
    pub fn verify(&self) -> Result<()> {
        match (&self.kind, &self.payload, &self.replay_data) {
            (
                CertificateKind::InfiniteCyclic,
                Payload::InfiniteCyclic,
                Replay::CosetIndexOne {
                    presentation,
                    max_cosets,
                },
            ) => {
                self.check_hash(presentation)?;
                ensure(
                    abelianization_invariants(presentation) == [0],
                    "abelianization is not Z",
                )?;
                let x = Word::gen(presentation.distinguished());
                let sub = [x];
                let t =
                    todd_coxeter_with_deadline(presentation, &sub, *max_cosets, &Deadline::never());
                ensure(
                    t.index() == Some(1),
                    "meridian subgroup does not have index 1",
                )?;
                t.verify(presentation, &sub)
            }
            (
                CertificateKind::NonAbelianQuotient,
                Payload::NonAbelianQuotient {
                    extra_relators,
                    witness,
                    ..
                },
                Replay::Homomorphism {
                    presentation,
                    extra_relators: extras,
                    hom,
                },
            ) => {
                self.check_hash(presentation)?;
                ensure(extra_relators == extras, "extra relators differ")?;
                check_hom_shape(hom, presentation.gen_count())?;
                ensure(hom.kills(presentation.relators()), "a relator survives")?;
                ensure(hom.kills(extras), "an extra relator survives")?;
                let (i, j) = *witness;
                ensure(
                    i < hom.images.len() && j < hom.images.len(),
                    "witness out of range",
                )?;
                ensure(
                    !hom.images[i].commutes_with(&hom.images[j]),
                    "witness images commute",
                )
            }
            (
                CertificateKind::NonTrivialQuotient,
                Payload::NonTrivialQuotient { p1, p2, g, .. },
                Replay::Homomorphism {
                    presentation,
                    extra_relators,
                    hom,
                },
            ) => {
                self.check_hash(presentation)?;
                ensure(
                    is_odd_prime(*p1 as u64) && is_odd_prime(*p2 as u64),
                    "not odd primes",
                )?;
                check_alternating(*p1, *p2, g)?;
                ensure(
                    *presentation == freiheitssatz_presentation(*p1, *p2, g)?,
                    "presentation mismatch",
                )?;
                ensure(extra_relators.is_empty(), "unexpected extras")?;
                check_hom_shape(hom, 2)?;
                ensure(hom.kills(presentation.relators()), "a relator survives")?;
                ensure(!hom.is_trivial(), "homomorphism is trivial")
            }
            (
                CertificateKind::BoundWitness,
                Payload::Bound {
                    invariant,
                    direction,
                    value,
                    ..
                },
                replay,
            ) => self.verify_bound(*invariant, *direction, *value, replay),
            _ => reject("kind, payload and evidence do not match"),
        }
    }

    fn check_hash(&self, p: &Presentation) -> Result<()> {
        p.validate()?;
        ensure(
            p.hash() == self.presentation_hash,
            "presentation hash mismatch",
        )
    }

    fn verify_bound(
        &self,
        invariant: Invariant,
        direction: Direction,
        value: usize,
        replay: &Replay,
    ) -> Result<()> {
        match (direction, replay) {
            (
                Direction::Upper,
                Replay::Relators {
                    presentation,
                    kind,
                    relators,
                    quotient,
                },
            ) => {
                self.check_hash(presentation)?;
                ensure(
                    kind.invariant() == invariant,
                    "kind does not match invariant",
                )?;
                ensure(relators.len() == value, "value differs from relator count")?;
                ensure(
                    relators.iter().all(|r| r.admissible(*kind, presentation)),
                    "inadmissible relator shape",
                )?;
                // With abelianization ℤ, a quotient ≅ ℤ has kernel exactly
                // the commutator subgroup.
                ensure(
                    abelianization_invariants(presentation) == [0],
                    "abelianization is not Z",
                )?;
                let q = presentation.with_relators(relators.iter().map(WitnessRelator::relator))?;
                ensure(
                    quotient.kind == CertificateKind::InfiniteCyclic,
                    "quotient certificate is not infinite cyclic",
                )?;
                ensure(
                    quotient.presentation_hash == q.hash(),
                    "quotient certificate is for another presentation",
                )?;
                quotient.verify()
            }
            (
                Direction::Lower,
                Replay::ColoringRank {
                    presentation,
                    prime,
                },
            ) => {
                self.check_hash(presentation)?;
                ensure(invariant == Invariant::Nakanishi, "rank bound is for m")?;
                ensure(
                    nakanishi_lower_bound(presentation, *prime)? == value,
                    "rank mismatch",
                )
            }
            (Direction::Lower, Replay::NonAbelian { certificate }) => {
                ensure(
                    invariant == Invariant::MaQiu && value == 1,
                    "nonabelian quotient gives a >= 1",
                )?;
                ensure(
                    certificate.kind == CertificateKind::NonAbelianQuotient,
                    "nested certificate kind",
                )?;
                ensure(
                    certificate.presentation_hash == self.presentation_hash,
                    "nested certificate hash",
                )?;
                match &certificate.payload {
                    Payload::NonAbelianQuotient { extra_relators, .. }
                        if extra_relators.is_empty() => {}
                    _ => return reject("nested certificate has extra relators"),
                }
                certificate.verify()
            }
            (
                Direction::Lower,
                Replay::Sweep {
                    presentation,
                    p1,
                    p2,
                    surjection,
                    sweep_length,
                    cells,
                },
            ) => {
                self.check_hash(presentation)?;
                ensure(
                    invariant == Invariant::AFw && value == 2,
                    "sweep gives a_fw >= 2",
                )?;
                verify_sweep(presentation, *p1, *p2, surjection, *sweep_length, cells)
            }
            _ => reject("bound evidence does not match"),
        }
    }
}

fn check_hom_shape(hom: &PermHom, gens: usize) -> Result<()> {
    ensure(hom.images.len() == gens, "image count")?;
    ensure(
        hom.images.iter().all(|p| p.degree() == hom.degree),
        "image degree",
    )
}

/// Replays a bounded `a_fw ≥ 2` sweep.
fn verify_sweep(
    p: &Presentation,
    p1: u32,
    p2: u32,
    surjection: &[DihedralProductElement],
    sweep_length: usize,
    cells: &[SweepCell],
) -> Result<()> {
    let g = DihedralProduct::new(p1, p2)?;
    ensure(surjection.len() == p.gen_count(), "surjection arity")?;
    for e in surjection {
        g.check(e)?;
    }
    for r in p.relators() {
        ensure(
            g.evaluate(r, surjection)?.is_identity(),
            "surjection does not kill a relator",
        )?;
    }
    ensure(
        surjection[p.distinguished().index()] == g.z(),
        "distinguished meridian must map to z",
    )?;
    // Every meridian goes to a reflection aᵢ^k·z; a nonzero k in each factor
    // makes the image contain z, a₁ and a₂.
    let hits = |f: Factor| {
        surjection
            .iter()
            .any(|e| e.z && e.word.len() == 1 && e.word[0].0 == f)
    };
    ensure(
        surjection.iter().all(|e| e.z && e.word.len() <= 1),
        "meridians must map to reflections",
    )?;
    ensure(
        hits(Factor::One) && hits(Factor::Two),
        "surjection misses a factor",
    )?;
    let gp = dihedral_product_group(p1, p2)?;
    let expected: BTreeSet<Word> = g
        .alternating_words(sweep_length)
        .iter()
        .map(|w| alternating_word(w))
        .collect();
    let got: BTreeSet<Word> = cells.iter().map(|c| c.v.clone()).collect();
    ensure(
        got == expected && cells.len() == expected.len(),
        "sweep cells do not cover every word exactly once",
    )?;
    let z = Word::gen(0usize);
    for c in cells {
        let rel = Word::commutator(&z, &z.conjugate(&c.v));
        check_hom_shape(&c.hom, 3)?;
        ensure(c.hom.kills(gp.relators()), "cell hom does not respect G")?;
        ensure(c.hom.kills(&[rel]), "cell hom does not kill [z, z^v]")?;
        ensure(
            c.hom.non_commuting_pair().is_some(),
            "cell image is abelian",
        )?;
    }
    Ok(())
}

/// Reflection images on `p` points for a dihedral coloring.
pub fn coloring_hom(colors: &[u64], prime: u64) -> PermHom {
    let images = colors
        .iter()
        .map(|&c| {
            let img: Vec<u8> = (0..prime)
                .map(|v| ((2 * c + prime - v) % prime) as u8)
                .collect();
            Perm::from_images(&img).expect("reflection")
        })
        .collect();
    PermHom {
        target: format!("D{prime}"),
        degree: prime as usize,
        images,
    }
}
