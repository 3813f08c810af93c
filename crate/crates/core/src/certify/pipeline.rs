//! Multi-step verifications: bounded Freiheitssatz instances, the `a_fw ≥ 2`
//! sweep for connected sums, combined relators for sums of twist spins, and
//! fusion witnesses for ribbon presentations.

use num_integer::Integer;
use rayon::prelude::*;

use super::budget::Budget;
use super::certificate::{
    alternating_word, check_alternating, freiheitssatz_presentation, BoundKind, Certificate,
    CertificateKind, Direction, Payload, Replay, SweepCell, WitnessRelator,
};
use super::finite::{group, FiniteGroupSpec, Perm, EXTENDED_LADDER, LADDER};
use super::homsearch::{find_hom, PermHom, SearchOptions};
use super::search::{certify_relators, combined_witness, search_witnesses};
use crate::alexander::{determinant, dihedral_surjection, is_odd_prime, odd_prime_factors};
use crate::constructors::{
    connected_sum, connected_sum_all, ribbon_presentation, DihedralProduct, DihedralProductElement,
    Factor,
};
use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::words::{GeneratorId, Word};

fn cyclic_hom(q: u8, i: u64, j: u64) -> Result<PermHom> {
    let spec = FiniteGroupSpec::cyclic(q);
    let g = group(&spec)?;
    let rot = |k: u64| {
        Perm::from_images(
            &(0..q)
                .map(|x| ((x as u64 + k) % q as u64) as u8)
                .collect::<Vec<_>>(),
        )
    };
    let images = vec![rot(i)?, rot(j)?];
    debug_assert!(images.iter().all(|p| g.contains(p)));
    Ok(PermHom {
        target: format!("Z{q}"),
        degree: q as usize,
        images,
    })
}

/// A nontrivial quotient of `⟨a₁, a₂ | a₁^p₁, a₂^p₂, g²⟩`: first an abelian
/// projection when one exists, then the finite ladder.
pub fn verify_freiheitssatz_instance(
    p1: u32,
    p2: u32,
    g: &Word,
    budget: &Budget,
) -> Result<Option<Certificate>> {
    for p in [p1, p2] {
        if !is_odd_prime(p as u64) {
            return Err(Error::NotOddPrime(p as u64));
        }
    }
    check_alternating(p1, p2, g)?;
    let h = freiheitssatz_presentation(p1, p2, g)?;
    let e = g.exponent_vector(2)?.0;
    let mut primes = vec![p1, p2];
    primes.dedup();
    let abelian = primes.iter().find_map(|&q| {
        let range = |p: u32| if p == q { q as u64 } else { 1 };
        (0..range(p1))
            .flat_map(|i| (0..range(p2)).map(move |j| (i, j)))
            .filter(|&(i, j)| (i, j) != (0, 0))
            .find(|&(i, j)| (2 * (i as i64 * e[0] + j as i64 * e[1])).rem_euclid(q as i64) == 0)
            .map(|(i, j)| (q, i, j))
    });
    let hom = match abelian {
        Some((q, i, j)) => Some(cyclic_hom(q as u8, i, j)?),
        None => {
            let deadline = budget.deadline();
            let cons = [(GeneratorId(0), p1 as u64), (GeneratorId(1), p2 as u64)];
            let mut found = None;
            for spec in LADDER.iter().chain(EXTENDED_LADDER.iter()) {
                if deadline.expired() {
                    break;
                }
                if let Some(h) =
                    find_hom(&h, spec, &cons, SearchOptions::QUOTIENT, deadline, |h| {
                        !h.is_trivial()
                    })?
                {
                    found = Some(h);
                    break;
                }
            }
            found
        }
    };
    Ok(hom
        .filter(|m| m.kills(h.relators()) && !m.is_trivial())
        .map(|hom| {
            Certificate::new(
                CertificateKind::NonTrivialQuotient,
                &h,
                Payload::NonTrivialQuotient {
                    p1,
                    p2,
                    g: g.clone(),
                    target: hom.target.clone(),
                },
                Replay::Homomorphism {
                    presentation: h.clone(),
                    extra_relators: Vec::new(),
                    hom,
                },
            )
        }))
}

/// `G → T ≀ ℤ₂` from `ρ: ℤ_p₁ ∗ ℤ_p₂ → T`: `z` swaps the blocks and `aᵢ`
/// acts as `(ρ(aᵢ), ρ(aᵢ)⁻¹)`.
fn wreath(rho: &PermHom) -> Result<PermHom> {
    let d = rho.degree;
    let block = |a: &Perm| -> Result<Perm> {
        let inv = a.inverse();
        let img: Vec<u8> = (0..2 * d)
            .map(|i| {
                if i < d {
                    a.apply(i) as u8
                } else {
                    (inv.apply(i - d) + d) as u8
                }
            })
            .collect();
        Perm::from_images(&img)
    };
    let swap: Vec<u8> = (0..2 * d).map(|i| ((i + d) % (2 * d)) as u8).collect();
    Ok(PermHom {
        target: format!("{} wr Z2", rho.target),
        degree: 2 * d,
        images: vec![
            Perm::from_images(&swap)?,
            block(&rho.images[0])?,
            block(&rho.images[1])?,
        ],
    })
}

/// `ψ(v)⁻¹·v` as a word in `x0 = a₁`, `x1 = a₂`, where `ψ` inverts both
/// factors; `[z, z^v] = (ψ(v)⁻¹v)²` in `G`.
fn sweep_relator_root(g: &DihedralProduct, v: &[(Factor, u32)]) -> Word {
    let ve = DihedralProductElement {
        word: v.to_vec(),
        z: false,
    };
    let z = g.z();
    let psi = g.multiply(&g.multiply(&z, &ve), &z);
    let root = g.multiply(&g.inverse(&psi), &ve);
    debug_assert!(!root.z);
    Word::reduce(
        root.word
            .iter()
            .map(|&(f, e)| (if f == Factor::One { 0usize } else { 1usize }, e as i64)),
    )
}

/// Bounded verification of `a_fw(K₁ # K₂) ≥ 2`: a surjection of the sum onto
/// `G = (ℤ_p₁ ∗ ℤ_p₂) ⋊ ℤ₂` built from colorings, and for every reduced
/// alternating `v` of at most `budget.max_word_length` syllables a
/// nonabelian quotient of `G / ⟨⟨[z, z^v]⟩⟩`.
pub fn lower_bound_afw_two(
    p1: &Presentation,
    p2: &Presentation,
    budget: &Budget,
) -> Option<Certificate> {
    let sum = connected_sum(p1, p2);
    let primes = |p: &Presentation| {
        determinant(p)
            .ok()
            .map(odd_prime_factors)
            .unwrap_or_default()
    };
    for q1 in primes(p1) {
        for q2 in primes(p2) {
            if let Some(c) = sweep(p1, p2, &sum, q1 as u32, q2 as u32, budget) {
                return Some(c);
            }
        }
    }
    None
}

fn sweep(
    p1: &Presentation,
    p2: &Presentation,
    sum: &Presentation,
    q1: u32,
    q2: u32,
    budget: &Budget,
) -> Option<Certificate> {
    let g = DihedralProduct::new(q1, q2).ok()?;
    let c1 = dihedral_surjection(p1, q1 as u64).ok()??;
    let c2 = dihedral_surjection(p2, q2 as u64).ok()??;
    let reflect = |f: Factor, c: u64, q: u32| {
        let k = (2 * c % q as u64) as u32;
        DihedralProductElement {
            word: if k == 0 { vec![] } else { vec![(f, k)] },
            z: true,
        }
    };
    let surjection: Vec<DihedralProductElement> = c1
        .colors
        .iter()
        .map(|&c| reflect(Factor::One, c, q1))
        .chain(c2.colors.iter().map(|&c| reflect(Factor::Two, c, q2)))
        .collect();
    let words = g.alternating_words(budget.max_word_length);
    let cells: Option<Vec<SweepCell>> = words
        .par_iter()
        .map(|v| {
            let root = sweep_relator_root(&g, v);
            let cert = verify_freiheitssatz_instance(q1, q2, &root, budget).ok()??;
            let Replay::Homomorphism { hom, .. } = cert.replay_data else {
                return None;
            };
            Some(SweepCell {
                v: alternating_word(v),
                hom: wreath(&hom).ok()?,
            })
        })
        .collect();
    let cells = cells?;
    let length = budget.max_word_length;
    let cert = Certificate::new(
        CertificateKind::BoundWitness,
        sum,
        Payload::Bound {
            invariant: crate::certify::Invariant::AFw,
            direction: Direction::Lower,
            value: 2,
            note: Some(format!(
                "relative to conjugators whose image in G has at most {length} syllables"
            )),
        },
        Replay::Sweep {
            presentation: sum.clone(),
            p1: q1,
            p2: q2,
            surjection,
            sweep_length: length,
            cells,
        },
    );
    cert.verify().ok()?;
    Some(cert)
}

/// Upper bounds for a connected sum of twist spins with pairwise coprime
/// twist indices, from one combined relator per group of witnesses.
#[derive(Clone, Debug)]
pub struct NonAdditivity {
    pub a_st: Option<Certificate>,
    pub a_fw: Option<Certificate>,
}

fn pairwise_coprime(js: &[u64]) -> bool {
    js.iter()
        .enumerate()
        .all(|(i, a)| js[i + 1..].iter().all(|b| a.gcd(b) == 1))
}

/// Certifies `α(K₁ # ⋯ # Kₙ) ≤ c` for `α ∈ {a_st, a_fw}` by combining
/// per-summand witnesses, where every summand has a witness with at most
/// `c_max` relators and the `j`-th power of its meridian is central.
pub fn verify_nonadditivity(
    ps: &[Presentation],
    js: &[u64],
    c_max: usize,
    budget: &Budget,
) -> Result<NonAdditivity> {
    if ps.is_empty() {
        return Err(Error::EmptyWitnessList);
    }
    if js.len() != ps.len() {
        return Err(Error::LengthMismatch {
            expected: ps.len(),
            got: js.len(),
        });
    }
    if !pairwise_coprime(js) {
        return Err(Error::NotCoprime(js.to_vec()));
    }
    let sum = connected_sum_all(ps)?;
    let run = |kind: BoundKind| -> Result<Option<Certificate>> {
        if ps.len() == 1 {
            return Ok(search_witnesses(&ps[0], kind, c_max, 1, budget)
                .into_iter()
                .next());
        }
        for limit in [1usize, 3] {
            let per: Vec<Vec<Vec<Word>>> = ps
                .iter()
                .map(|p| {
                    search_witnesses(p, kind, c_max, limit, budget)
                        .iter()
                        .map(conjugators)
                        .collect()
                })
                .collect();
            if per.iter().any(Vec::is_empty) {
                return Ok(None);
            }
            if let Some(c) = combine_all(&sum, ps, &per, kind, budget)? {
                return Ok(Some(c));
            }
        }
        Ok(None)
    };
    Ok(NonAdditivity {
        a_st: run(BoundKind::AStab)?,
        a_fw: run(BoundKind::AFw)?,
    })
}

fn conjugators(c: &Certificate) -> Vec<Word> {
    match &c.replay_data {
        Replay::Relators { relators, .. } => relators
            .iter()
            .map(|r| match r {
                WitnessRelator::Stabilization { g, .. } | WitnessRelator::FingerMove { g, .. } => {
                    g.clone()
                }
                WitnessRelator::Word { w } => w.clone(),
            })
            .collect(),
        _ => Vec::new(),
    }
}

/// Tries witness choices in lexicographic order of per-summand indices.
fn combine_all(
    sum: &Presentation,
    ps: &[Presentation],
    per: &[Vec<Vec<Word>>],
    kind: BoundKind,
    budget: &Budget,
) -> Result<Option<Certificate>> {
    let offsets: Vec<u32> = ps
        .iter()
        .scan(0u32, |acc, p| {
            let o = *acc;
            *acc += p.gen_count() as u32;
            Some(o)
        })
        .collect();
    let x = sum.distinguished();
    let mut choice = vec![0usize; per.len()];
    loop {
        let picked: Vec<Vec<Word>> = choice
            .iter()
            .zip(per)
            .zip(&offsets)
            .map(|((&k, ws), &off)| {
                ws[k]
                    .iter()
                    .map(|w| w.relabel(|g| GeneratorId(g.0 + off)))
                    .collect()
            })
            .collect();
        let c = picked.iter().map(Vec::len).max().unwrap_or(0);
        // Summands with fewer witnesses repeat their last one.
        let groups: Vec<Vec<Word>> = (0..c)
            .map(|k| {
                picked
                    .iter()
                    .filter(|ws| !ws.is_empty())
                    .map(|ws| ws[k.min(ws.len() - 1)].clone())
                    .collect()
            })
            .collect();
        let relators = groups
            .iter()
            .filter(|g| !g.is_empty())
            .map(|g| combined_witness(x, g, kind))
            .collect::<Result<Vec<_>>>()?;
        let note = Some(format!("combined relators from {} summands", ps.len()));
        if let Some(cert) = certify_relators(sum, kind, relators, note, budget)? {
            return Ok(Some(cert));
        }
        // Advance the mixed-radix counter.
        let mut i = per.len();
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < per[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// `a_st ≤ n` for a ribbon presentation with `n` fusions: identifying the
/// consecutive meridians `m_j = m_{j+1}` leaves `ℤ`.
pub fn verify_fusion_bound(conjugators: &[Word], budget: &Budget) -> Result<Option<Certificate>> {
    let n = conjugators.len();
    let p = ribbon_presentation(n, conjugators)?;
    let relators = (0..n)
        .map(|j| WitnessRelator::Stabilization {
            a: GeneratorId::from(j),
            b: GeneratorId::from(j + 1),
            g: Word::identity(),
        })
        .collect();
    certify_relators(
        &p,
        BoundKind::AStab,
        relators,
        Some(format!("fusion number at most {n}")),
        budget,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{twist_spin, Catalog};

    #[test]
    fn freiheitssatz_small_cases() {
        let b = Budget::default();
        let g: Word = "x0".parse().unwrap();
        let c = verify_freiheitssatz_instance(3, 5, &g, &b)
            .unwrap()
            .unwrap();
        c.verify().unwrap();
        let g: Word = "x0.x1".parse().unwrap();
        verify_freiheitssatz_instance(3, 3, &g, &b)
            .unwrap()
            .unwrap()
            .verify()
            .unwrap();
        let g: Word = "x0.x1.x0^2.x1^3".parse().unwrap();
        verify_freiheitssatz_instance(3, 5, &g, &b)
            .unwrap()
            .unwrap()
            .verify()
            .unwrap();
        assert!(verify_freiheitssatz_instance(3, 5, &"x0.x0".parse().unwrap(), &b).is_ok());
        assert!(verify_freiheitssatz_instance(3, 5, &"x0^3".parse().unwrap(), &b).is_err());
        assert!(verify_freiheitssatz_instance(3, 9, &"x0".parse().unwrap(), &b).is_err());
    }

    #[test]
    fn classical_sum_sweep() {
        let cat = Catalog::builtin();
        let b = Budget::default().with_word_length(3);
        let c = lower_bound_afw_two(
            &cat.presentation("3_1").unwrap(),
            &cat.presentation("T(2,5)").unwrap(),
            &b,
        )
        .unwrap();
        c.verify().unwrap();
        let t3 = twist_spin(&cat.presentation("3_1").unwrap(), 3);
        assert!(lower_bound_afw_two(&t3, &t3, &b).is_none());
    }

    #[test]
    fn coprimality_is_enforced() {
        let p = Presentation::unknot();
        let r = verify_nonadditivity(&[p.clone(), p], &[2, 4], 1, &Budget::default());
        assert!(matches!(r, Err(Error::NotCoprime(_))));
    }

    #[test]
    fn fusion_with_trivial_conjugators() {
        let c = verify_fusion_bound(&[Word::identity(), Word::identity()], &Budget::default())
            .unwrap()
            .unwrap();
        c.verify().unwrap();
        assert_eq!(c.bound().unwrap().2, 2);
    }
}
