//! Certification searches: infinite cyclic quotients, relator bounds and
//! nonabelian quotients.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Duration;

use rayon::prelude::*;

use super::budget::{Budget, Deadline};
use super::certificate::{
    coloring_hom, BoundKind, Certificate, CertificateKind, Direction, Payload, Replay,
    WitnessRelator,
};
use super::coset::{todd_coxeter_with_deadline, CosetStatus};
use super::finite::LADDER;
use super::homsearch::{find_hom, PermHom, SearchOptions};
use crate::alexander::{
    abelianization_invariants, coloring_space, determinant, dihedral_surjection, odd_prime_factors,
};
use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::words::{enumerate_candidate_conjugators, GeneratorId, Word};

/// Coset limits tried in turn; cheap enumerations settle most candidates.
pub fn coset_stages(max: usize) -> Vec<usize> {
    let mut out: Vec<usize> = [2_000, 50_000].into_iter().filter(|&s| s < max).collect();
    out.push(max);
    out
}

enum Attempt {
    Cyclic(usize),
    NotCyclic,
    Unknown,
}

fn attempt(q: &Presentation, max_cosets: usize, deadline: &Deadline) -> Attempt {
    let sub = [Word::gen(q.distinguished())];
    match todd_coxeter_with_deadline(q, &sub, max_cosets, deadline).status {
        CosetStatus::Completed(1) => Attempt::Cyclic(max_cosets),
        CosetStatus::Completed(_) => Attempt::NotCyclic,
        CosetStatus::Exhausted => Attempt::Unknown,
    }
}

fn ic_certificate(q: &Presentation, max_cosets: usize) -> Certificate {
    Certificate::new(
        CertificateKind::InfiniteCyclic,
        q,
        Payload::InfiniteCyclic,
        Replay::CosetIndexOne {
            presentation: q.clone(),
            max_cosets,
        },
    )
}

fn certify_ic_with(
    p: &Presentation,
    max_cosets: usize,
    deadline: &Deadline,
) -> Option<Certificate> {
    if abelianization_invariants(p) != [0] {
        return None;
    }
    for m in coset_stages(max_cosets) {
        match attempt(p, m, deadline) {
            Attempt::Cyclic(m) => return Some(ic_certificate(p, m)),
            Attempt::NotCyclic => return None,
            Attempt::Unknown if deadline.expired() => return None,
            Attempt::Unknown => {}
        }
    }
    None
}

/// Certifies `P ≅ ℤ`: abelianization `ℤ` and the distinguished meridian
/// generating (index 1). `None` is inconclusive.
pub fn certify_infinite_cyclic(p: &Presentation, budget: &Budget) -> Option<Certificate> {
    certify_ic_with(p, budget.max_cosets, &budget.deadline())
}

fn bound_certificate(
    p: &Presentation,
    kind: BoundKind,
    relators: Vec<WitnessRelator>,
    quotient: Certificate,
    note: Option<String>,
) -> Certificate {
    Certificate::new(
        CertificateKind::BoundWitness,
        p,
        Payload::Bound {
            invariant: kind.invariant(),
            direction: Direction::Upper,
            value: relators.len(),
            note,
        },
        Replay::Relators {
            presentation: p.clone(),
            kind,
            relators,
            quotient: Box::new(quotient),
        },
    )
}

/// Certifies `kind ≤ relators.len()` by showing the quotient is `ℤ`.
pub fn certify_relators(
    p: &Presentation,
    kind: BoundKind,
    relators: Vec<WitnessRelator>,
    note: Option<String>,
    budget: &Budget,
) -> Result<Option<Certificate>> {
    let q = p.with_relators(relators.iter().map(WitnessRelator::relator))?;
    if abelianization_invariants(p) != [0] {
        return Ok(None);
    }
    Ok(
        certify_infinite_cyclic(&q, budget)
            .map(|ic| bound_certificate(p, kind, relators, ic, note)),
    )
}

/// Nonabelian homomorphisms used to discard candidates early: a candidate
/// whose relators such a map kills leaves a nonabelian quotient.
pub fn obstruction_pool(p: &Presentation, deadline: &Deadline) -> Vec<PermHom> {
    let mut pool = Vec::new();
    if p.require_all_meridian().is_ok() {
        let det = determinant(p).unwrap_or(0);
        let primes: Vec<u64> = if det == 0 {
            vec![3, 5, 7, 11, 13]
        } else {
            odd_prime_factors(det)
        };
        let x = p.distinguished().index();
        for prime in primes.into_iter().filter(|&q| q <= 31) {
            let Ok(space) = coloring_space(p, prime) else {
                continue;
            };
            let normalize = |v: &[u64]| {
                v.iter()
                    .map(|&c| (c + prime - v[x]) % prime)
                    .collect::<Vec<_>>()
            };
            let mut vectors: Vec<Vec<u64>> = space.basis.iter().map(|v| normalize(v)).collect();
            let n = vectors.len();
            for i in 0..n {
                for j in i + 1..n {
                    let s: Vec<u64> = vectors[i]
                        .iter()
                        .zip(&vectors[j])
                        .map(|(a, b)| (a + b) % prime)
                        .collect();
                    vectors.push(s);
                }
            }
            for v in vectors.into_iter().filter(|v| v.iter().any(|&c| c != 0)) {
                pool.push(coloring_hom(&v, prime));
            }
        }
    }
    let quick = deadline.min(Deadline::within(Duration::from_secs(2)));
    for spec in LADDER.iter().take(3) {
        if let Ok(Some(h)) = find_hom(p, spec, &[], SearchOptions::QUOTIENT, quick, |h| {
            h.non_commuting_pair().is_some()
        }) {
            pool.push(h);
        }
    }
    pool.retain(|h| h.kills(p.relators()));
    pool
}

/// Index tuples `i₁ < … < i_c`, ordered by total word length and then
/// lexicographically, at most `cap` of them.
pub fn candidate_tuples(lengths: &[usize], c: usize, cap: usize) -> Vec<Vec<usize>> {
    fn rec(
        lengths: &[usize],
        start: usize,
        left: usize,
        budget: usize,
        acc: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        cap: usize,
    ) {
        if out.len() >= cap {
            return;
        }
        if left == 0 {
            if budget == 0 {
                out.push(acc.clone());
            }
            return;
        }
        for i in start..lengths.len() {
            // Lengths are nondecreasing, so later indices only get longer.
            if lengths[i] * left > budget {
                break;
            }
            acc.push(i);
            rec(lengths, i + 1, left - 1, budget - lengths[i], acc, out, cap);
            acc.pop();
            if out.len() >= cap {
                return;
            }
        }
    }
    let mut out = Vec::new();
    if c == 0 || lengths.len() < c {
        return out;
    }
    let max_total: usize = lengths.iter().rev().take(c).sum();
    for total in 0..=max_total {
        rec(lengths, 0, c, total, &mut Vec::new(), &mut out, cap);
        if out.len() >= cap {
            break;
        }
    }
    out
}

/// Searches for `c ≤ c_max` relators of the given kind that make the group
/// infinite cyclic. `c = 0` is reported when the group already is.
pub fn search_upper_bound(
    p: &Presentation,
    kind: BoundKind,
    c_max: usize,
    budget: &Budget,
) -> Option<Certificate> {
    search_witnesses(p, kind, c_max, 1, budget)
        .into_iter()
        .next()
}

/// Up to `limit` witnesses at the smallest `c` that has one.
pub fn search_witnesses(
    p: &Presentation,
    kind: BoundKind,
    c_max: usize,
    limit: usize,
    budget: &Budget,
) -> Vec<Certificate> {
    search_witnesses_from(p, kind, 1, c_max, limit, budget)
}

/// As [`search_witnesses`], trying only tuple sizes `c_min..=c_max`.
pub fn search_witnesses_from(
    p: &Presentation,
    kind: BoundKind,
    c_min: usize,
    c_max: usize,
    limit: usize,
    budget: &Budget,
) -> Vec<Certificate> {
    let deadline = budget.deadline();
    if abelianization_invariants(p) != [0] {
        return Vec::new();
    }
    if let Some(ic) = certify_ic_with(p, budget.max_cosets, &deadline) {
        return vec![bound_certificate(p, kind, Vec::new(), ic, None)];
    }
    let x = p.distinguished();
    let cands: Vec<Word> =
        enumerate_candidate_conjugators(p.gen_count(), x, budget.max_word_length)
            .filter(|w| !w.is_identity())
            .take(budget.max_candidates)
            .collect();
    let lengths: Vec<usize> = cands.iter().map(Word::len).collect();
    let pool = obstruction_pool(p, &deadline);
    for c in c_min.max(1)..=c_max {
        let tuples = candidate_tuples(&lengths, c, budget.max_candidates);
        let mut alive: Vec<(Vec<WitnessRelator>, Presentation)> = tuples
            .par_iter()
            .filter_map(|t| {
                let rels: Vec<WitnessRelator> =
                    t.iter().map(|&i| kind.witness(x, &cands[i])).collect();
                let words: Vec<Word> = rels.iter().map(WitnessRelator::relator).collect();
                if pool.iter().any(|h| h.kills(&words)) {
                    return None;
                }
                let q = p.with_relators(words).ok()?;
                Some((rels, q))
            })
            .collect();
        for m in coset_stages(budget.max_cosets) {
            let dead: Vec<AtomicBool> = alive.iter().map(|_| AtomicBool::new(false)).collect();
            let mut found: Vec<Certificate> = Vec::new();
            let mut start = 0;
            // Take witnesses one at a time so the result is the first ones
            // in enumeration order however many workers run.
            while found.len() < limit && start < alive.len() {
                let hit = alive[start..]
                    .par_iter()
                    .enumerate()
                    .find_map_first(|(k, (rels, q))| match attempt(q, m, &deadline) {
                        Attempt::Cyclic(m) => Some((k, rels.clone(), ic_certificate(q, m))),
                        Attempt::NotCyclic => {
                            dead[start + k].store(true, Ordering::Relaxed);
                            None
                        }
                        Attempt::Unknown => None,
                    });
                match hit {
                    Some((k, rels, ic)) => {
                        found.push(bound_certificate(p, kind, rels, ic, None));
                        dead[start + k].store(true, Ordering::Relaxed);
                        start += k + 1;
                    }
                    None => break,
                }
            }
            if !found.is_empty() {
                return found;
            }
            if deadline.expired() {
                return Vec::new();
            }
            let mut k = 0;
            alive.retain(|_| {
                k += 1;
                !dead[k - 1].load(Ordering::Relaxed)
            });
        }
    }
    Vec::new()
}

/// The single relator combining per-summand conjugators: `[x, w₁w₂⋯wₙ]` for
/// `a_st` and `[x, x^{wₙ⋯w₁}]` for `a_fw`.
pub fn combined_relator(x: GeneratorId, ws: &[Word], kind: BoundKind) -> Result<Word> {
    Ok(combined_witness(x, ws, kind)?.relator())
}

pub fn combined_witness(x: GeneratorId, ws: &[Word], kind: BoundKind) -> Result<WitnessRelator> {
    if ws.is_empty() {
        return Err(Error::EmptyWitnessList);
    }
    match kind {
        BoundKind::AStab => {
            let g = ws.iter().fold(Word::identity(), |acc, w| &acc * w);
            Ok(WitnessRelator::Stabilization { a: x, b: x, g })
        }
        BoundKind::AFw => {
            let g = ws.iter().rev().fold(Word::identity(), |acc, w| &acc * w);
            Ok(WitnessRelator::FingerMove { a: x, b: x, g })
        }
        BoundKind::MaQiu => Err(Error::Malformed(
            "combined relators are defined for a_st and a_fw".into(),
        )),
    }
}

/// Certifies that the quotient by `extra_relators` is nonabelian through a
/// homomorphism to a dihedral or ladder group.
pub fn certify_nonabelian_quotient(
    p: &Presentation,
    extra_relators: &[Word],
    budget: &Budget,
) -> Option<Certificate> {
    let q = p.with_relators(extra_relators.iter().cloned()).ok()?;
    let deadline = budget.deadline();
    let hom = dihedral_quotient(&q).or_else(|| {
        LADDER.iter().find_map(|spec| {
            if deadline.expired() {
                return None;
            }
            find_hom(&q, spec, &[], SearchOptions::QUOTIENT, deadline, |h| {
                h.non_commuting_pair().is_some()
            })
            .ok()
            .flatten()
        })
    })?;
    let witness = hom.non_commuting_pair()?;
    Some(Certificate::new(
        CertificateKind::NonAbelianQuotient,
        p,
        Payload::NonAbelianQuotient {
            extra_relators: extra_relators.to_vec(),
            target: hom.target.clone(),
            witness,
        },
        Replay::Homomorphism {
            presentation: p.clone(),
            extra_relators: extra_relators.to_vec(),
            hom,
        },
    ))
}

fn dihedral_quotient(q: &Presentation) -> Option<PermHom> {
    q.require_all_meridian().ok()?;
    let det = determinant(q).ok()?;
    let primes: Vec<u64> = if det == 0 {
        vec![3, 5, 7, 11, 13]
    } else {
        odd_prime_factors(det)
    };
    primes.into_iter().filter(|&p| p <= 31).find_map(|prime| {
        let col = dihedral_surjection(q, prime).ok().flatten()?;
        Some(coloring_hom(&col.colors, prime))
    })
}
