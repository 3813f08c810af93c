//! Builders for knot and 2-knot group presentations and the relator-adding moves.

pub mod catalog;
pub mod diagram;
pub mod dihedral;

pub use catalog::{Catalog, CatalogEntry};
pub use diagram::{wirtinger_from_braid, BraidWord, PlatWord};
pub use dihedral::{
    dihedral_product_group, evaluate_in_g, nf_multiply, DihedralProduct, DihedralProductElement,
    Factor,
};

use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::words::{GeneratorId, Word};

/// The `n`-twist spin: adds `[xⁿ, g]` for every generator `g`. For `n = 0`
/// this is the spin, whose group is the classical group.
pub fn twist_spin(p: &Presentation, n: u32) -> Presentation {
    if n == 0 {
        return p.clone();
    }
    let xn = Word::power(p.distinguished(), n as i64);
    let rels = (0..p.gen_count()).map(|g| Word::commutator(&xn, &Word::gen(g)));
    p.with_relators(rels).expect("generators in range")
}

pub fn spin(p: &Presentation) -> Presentation {
    twist_spin(p, 0)
}

/// Disjoint union joined by `x₁⁻¹x₂` on the distinguished meridians.
pub fn connected_sum(p1: &Presentation, p2: &Presentation) -> Presentation {
    let off = p1.gen_count() as u32;
    let shift = |g: GeneratorId| GeneratorId(g.0 + off);
    let x1 = p1.distinguished();
    let x2 = shift(p2.distinguished());
    let mut rels: Vec<Word> = p1.relators().to_vec();
    rels.extend(p2.relators().iter().map(|r| r.relabel(shift)));
    rels.push(Word::reduce([(x1, -1), (x2, 1)]));
    let mut flags = p1.meridian_flags().to_vec();
    flags.extend_from_slice(p2.meridian_flags());
    Presentation::new(p1.gen_count() + p2.gen_count(), rels, flags, x1).expect("valid inputs")
}

/// Connected sum of a nonempty list, associating to the left.
pub fn connected_sum_all(ps: &[Presentation]) -> Result<Presentation> {
    let (first, rest) = ps.split_first().ok_or(Error::EmptyWitnessList)?;
    Ok(rest
        .iter()
        .fold(first.clone(), |acc, p| connected_sum(&acc, p)))
}

/// Generators `m₁ … m_{n+1}` (indices `0..=n`) with relators `m_j^{g_j} m_{j+1}⁻¹`.
pub fn ribbon_presentation(fusion_count: usize, conjugators: &[Word]) -> Result<Presentation> {
    if conjugators.len() != fusion_count {
        return Err(Error::LengthMismatch {
            expected: fusion_count,
            got: conjugators.len(),
        });
    }
    let n = fusion_count + 1;
    let rels = conjugators
        .iter()
        .enumerate()
        .map(|(j, g)| &Word::gen(j).conjugate(g) * &Word::power(j + 1, -1));
    Presentation::all_meridian(n, rels)
}

fn require_meridians(p: &Presentation, a: GeneratorId, b: GeneratorId) -> Result<()> {
    for g in [a, b] {
        if !p.is_meridian(g) {
            return Err(Error::NotMeridian(g.0));
        }
    }
    Ok(())
}

/// Adds `g⁻¹agb⁻¹`, identifying the meridian `a^g` with `b`.
pub fn add_stabilization_relation(
    p: &Presentation,
    g: &Word,
    a: GeneratorId,
    b: GeneratorId,
) -> Result<Presentation> {
    require_meridians(p, a, b)?;
    p.with_relators([stabilization_relator(g, a, b)])
}

/// Adds `[a, g⁻¹bg]`, making `a` commute with the meridian `b^g`.
pub fn add_finger_move_relation(
    p: &Presentation,
    g: &Word,
    a: GeneratorId,
    b: GeneratorId,
) -> Result<Presentation> {
    require_meridians(p, a, b)?;
    p.with_relators([finger_move_relator(g, a, b)])
}

pub fn stabilization_relator(g: &Word, a: GeneratorId, b: GeneratorId) -> Word {
    &Word::gen(a).conjugate(g) * &Word::power(b, -1)
}

pub fn finger_move_relator(g: &Word, a: GeneratorId, b: GeneratorId) -> Word {
    Word::commutator(&Word::gen(a), &Word::gen(b).conjugate(g))
}
