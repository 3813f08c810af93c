//! Invariant reports: certified bounds along `m ≤ a ≤ a_st ≤ a_fw ≤ μ−1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::budget::Budget;
use super::certificate::{
    BoundKind, Certificate, CertificateKind, Direction, Invariant, Payload, Replay, WitnessRelator,
};
use super::pipeline::lower_bound_afw_two;
use super::search::{
    certify_infinite_cyclic, certify_nonabelian_quotient, certify_relators, search_upper_bound,
    search_witnesses_from,
};
use crate::alexander::{determinant, nakanishi_lower_bound, odd_prime_factors};
use crate::constructors::connected_sum_all;
use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::words::GeneratorId;

/// Where a bound comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum BoundSource {
    /// Every invariant in the chain is nonnegative.
    Trivial,
    /// A certificate with this digest.
    Certificate { digest: String },
    /// Meridian generators left after Tietze reduction; a certificate that
    /// the group is infinite cyclic on one meridian gives `μ − 1 ≤ 0` instead.
    MeridianCount { generators: usize },
    /// Implied by a bound on another invariant of the chain.
    Chain { from: Invariant },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bound {
    pub value: usize,
    #[serde(flatten)]
    pub source: BoundSource,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantBounds {
    pub invariant: Invariant,
    pub lower: Bound,
    pub upper: Option<Bound>,
}

impl InvariantBounds {
    pub fn exact(&self) -> Option<usize> {
        self.upper
            .as_ref()
            .filter(|u| u.value == self.lower.value)
            .map(|u| u.value)
    }
}

/// Geometric unknotting numbers, which the report annotates but never certifies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometric {
    #[serde(rename = "u_st")]
    UStab,
    UFw,
}

impl fmt::Display for Geometric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Geometric::UStab => "u_st",
            Geometric::UFw => "u_fw",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Eq => "=",
            Relation::Le => "<=",
            Relation::Ge => ">=",
        })
    }
}

/// A known geometric bound, with the mathematical fact behind it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotation {
    pub quantity: Geometric,
    pub relation: Relation,
    pub value: usize,
    pub reason: String,
}

/// How the input was built; used only for annotations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Construction {
    /// A classical knot group.
    Classical {
        bridge: Option<u32>,
    },
    /// `τⁿk` for a classical `k` of the given bridge number; `n = 0` is the spun knot.
    TwistSpin {
        n: u32,
        bridge: Option<u32>,
    },
    /// A ribbon 2-knot built with this many fusions.
    Ribbon {
        fusions: usize,
    },
    Sum {
        summands: Vec<Construction>,
    },
    Unknown,
}

impl Construction {
    pub fn annotations(&self) -> Vec<Annotation> {
        let note = |quantity, relation, value, reason: &str| Annotation {
            quantity,
            relation,
            value,
            reason: reason.into(),
        };
        match *self {
            Construction::TwistSpin {
                bridge: Some(1), ..
            }
            | Construction::TwistSpin { n: 1, .. } => vec![
                note(
                    Geometric::UStab,
                    Relation::Eq,
                    0,
                    "twist spins of the unknot and 1-twist spins are unknotted",
                ),
                note(
                    Geometric::UFw,
                    Relation::Eq,
                    0,
                    "twist spins of the unknot and 1-twist spins are unknotted",
                ),
            ],
            Construction::TwistSpin {
                bridge: Some(2), ..
            } => vec![
                note(
                    Geometric::UStab,
                    Relation::Eq,
                    1,
                    "nontrivial twist spins of 2-bridge knots have stabilization number one",
                ),
                note(
                    Geometric::UFw,
                    Relation::Eq,
                    1,
                    "nontrivial twist spins of 2-bridge knots have Casson-Whitney number one",
                ),
            ],
            Construction::TwistSpin {
                bridge: Some(b), ..
            } => vec![note(
                Geometric::UStab,
                Relation::Le,
                b as usize - 1,
                "twist spins of b-bridge knots have stabilization number below b",
            )],
            Construction::Ribbon { fusions } => vec![
                note(
                    Geometric::UStab,
                    Relation::Le,
                    fusions,
                    "a ribbon 2-knot's stabilization number is at most its fusion number",
                ),
                note(
                    Geometric::UFw,
                    Relation::Le,
                    fusions,
                    "a ribbon 2-knot's Casson-Whitney number is at most its fusion number",
                ),
            ],
            Construction::Sum { ref summands } => {
                let parts: Vec<Vec<Annotation>> =
                    summands.iter().map(Construction::annotations).collect();
                [Geometric::UStab, Geometric::UFw]
                    .into_iter()
                    .filter_map(|q| {
                        let total = parts.iter().try_fold(0usize, |acc, ann| {
                            ann.iter()
                                .find(|a| a.quantity == q && a.relation != Relation::Ge)
                                .map(|a| acc + a.value)
                        })?;
                        Some(note(
                            q,
                            Relation::Le,
                            total,
                            "unknotting moves on the summands unknot the connected sum",
                        ))
                    })
                    .collect()
            }
            _ => Vec::new(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReportOptions {
    /// Connected-sum decomposition of the input, when known.
    pub summands: Vec<Presentation>,
    /// Largest tuple size tried by the witness searches.
    pub c_max: usize,
    pub construction: Construction,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            summands: Vec::new(),
            c_max: 2,
            construction: Construction::Unknown,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub invariants: Vec<InvariantBounds>,
    pub annotations: Vec<Annotation>,
    pub certificates: Vec<Certificate>,
}

impl InvariantReport {
    pub fn get(&self, inv: Invariant) -> &InvariantBounds {
        self.invariants
            .iter()
            .find(|b| b.invariant == inv)
            .expect("every chain invariant is reported")
    }

    /// Invariants whose lower and upper bounds do not meet.
    pub fn undetermined(&self) -> Vec<Invariant> {
        self.invariants
            .iter()
            .filter(|b| b.exact().is_none())
            .map(|b| b.invariant)
            .collect()
    }
}

/// Direct bounds before chain propagation.
#[derive(Default)]
struct Collected {
    lower: [Option<Bound>; 5],
    upper: [Option<Bound>; 5],
    certificates: Vec<Certificate>,
}

fn slot(inv: Invariant) -> usize {
    Invariant::CHAIN
        .iter()
        .position(|&i| i == inv)
        .expect("chain invariant")
}

impl Collected {
    fn add(&mut self, cert: Certificate) {
        if let Some((inv, dir, value)) = cert.bound() {
            let bound = Bound {
                value,
                source: BoundSource::Certificate {
                    digest: cert.digest(),
                },
            };
            let entry = match dir {
                Direction::Lower => &mut self.lower[slot(inv)],
                Direction::Upper => &mut self.upper[slot(inv)],
            };
            let better = match (&*entry, dir) {
                (None, _) => true,
                (Some(b), Direction::Lower) => value > b.value,
                (Some(b), Direction::Upper) => value < b.value,
            };
            if better {
                *entry = Some(bound);
            }
        }
        self.certificates.push(cert);
    }

    /// Best lower bound on `inv` implied by the chain so far.
    fn chain_lower(&self, inv: Invariant) -> usize {
        self.lower[..=slot(inv)]
            .iter()
            .flatten()
            .map(|b| b.value)
            .max()
            .unwrap_or(0)
    }

    /// Best certified upper bound on `inv` from witness relators, ignoring
    /// the meridian count.
    fn witnessed_upper(&self, inv: Invariant) -> Option<usize> {
        self.upper[slot(inv)..4]
            .iter()
            .flatten()
            .map(|b| b.value)
            .min()
    }

    fn finish(self, annotations: Vec<Annotation>) -> Result<InvariantReport> {
        for (i, lo) in self.lower.iter().enumerate() {
            for (j, up) in self.upper.iter().enumerate().skip(i) {
                if let (Some(lo), Some(up)) = (lo, up) {
                    if lo.value > up.value {
                        return Err(Error::ChainViolation(format!(
                            "{} >= {} but {} <= {}",
                            Invariant::CHAIN[i],
                            lo.value,
                            Invariant::CHAIN[j],
                            up.value
                        )));
                    }
                }
            }
        }
        let invariants = Invariant::CHAIN
            .iter()
            .enumerate()
            .map(|(i, &invariant)| {
                let lower = self.lower[..=i]
                    .iter()
                    .enumerate()
                    .filter_map(|(k, b)| b.as_ref().map(|b| (k, b)))
                    .max_by_key(|(k, b)| (b.value, std::cmp::Reverse(i.abs_diff(*k))))
                    .map(|(k, b)| relabel(b, k, i))
                    .unwrap_or(Bound {
                        value: 0,
                        source: BoundSource::Trivial,
                    });
                let upper = self.upper[i..]
                    .iter()
                    .enumerate()
                    .filter_map(|(k, b)| b.as_ref().map(|b| (k + i, b)))
                    .min_by_key(|(k, b)| (b.value, k.abs_diff(i)))
                    .map(|(k, b)| relabel(b, k, i));
                InvariantBounds {
                    invariant,
                    lower,
                    upper,
                }
            })
            .collect();
        Ok(InvariantReport {
            invariants,
            annotations,
            certificates: self.certificates,
        })
    }
}

fn relabel(b: &Bound, from: usize, to: usize) -> Bound {
    if from == to {
        b.clone()
    } else {
        Bound {
            value: b.value,
            source: BoundSource::Chain {
                from: Invariant::CHAIN[from],
            },
        }
    }
}

fn nakanishi_certificate(p: &Presentation) -> Option<Certificate> {
    let det = determinant(p).ok()?;
    let primes = if det == 0 {
        vec![3, 5, 7, 11, 13]
    } else {
        odd_prime_factors(det)
    };
    let (prime, value) = primes
        .into_iter()
        .filter_map(|q| nakanishi_lower_bound(p, q).ok().map(|m| (q, m)))
        .max_by_key(|&(q, m)| (m, std::cmp::Reverse(q)))?;
    (value > 0).then(|| {
        Certificate::new(
            CertificateKind::BoundWitness,
            p,
            Payload::Bound {
                invariant: Invariant::Nakanishi,
                direction: Direction::Lower,
                value,
                note: None,
            },
            Replay::ColoringRank {
                presentation: p.clone(),
                prime,
            },
        )
    })
}

fn nonabelian_certificate(p: &Presentation, budget: &Budget) -> Option<Certificate> {
    let q = certify_nonabelian_quotient(p, &[], budget)?;
    Some(Certificate::new(
        CertificateKind::BoundWitness,
        p,
        Payload::Bound {
            invariant: Invariant::MaQiu,
            direction: Direction::Lower,
            value: 1,
            note: None,
        },
        Replay::NonAbelian {
            certificate: Box::new(q),
        },
    ))
}

/// Per-summand witnesses relabelled into the sum, certified together.
fn additive_certificate(
    p: &Presentation,
    summands: &[Presentation],
    kind: BoundKind,
    c_max: usize,
    budget: &Budget,
) -> Option<Certificate> {
    let mut offset = 0u32;
    let mut relators = Vec::new();
    for s in summands {
        let cert = search_upper_bound(s, kind, c_max, budget)?;
        let Replay::Relators { relators: rs, .. } = cert.replay_data else {
            return None;
        };
        let shift = |g: GeneratorId| GeneratorId(g.0 + offset);
        relators.extend(rs.into_iter().map(|r| match r {
            WitnessRelator::Word { w } => WitnessRelator::Word {
                w: w.relabel(shift),
            },
            WitnessRelator::Stabilization { a, b, g } => WitnessRelator::Stabilization {
                a: shift(a),
                b: shift(b),
                g: g.relabel(shift),
            },
            WitnessRelator::FingerMove { a, b, g } => WitnessRelator::FingerMove {
                a: shift(a),
                b: shift(b),
                g: g.relabel(shift),
            },
        }));
        offset += s.gen_count() as u32;
    }
    let note = Some(format!(
        "union of witnesses for {} summands",
        summands.len()
    ));
    certify_relators(p, kind, relators, note, budget)
        .ok()
        .flatten()
}

/// Certified lower and upper bounds for every invariant of the chain.
///
/// Lower bounds come from the Alexander module rank, a nonabelian quotient,
/// and the bounded sweep for sums; upper bounds from witness searches and the
/// meridian count of the Tietze-reduced presentation. Any certified lower
/// bound exceeding a certified upper bound later in the chain is an error.
pub fn invariant_report(
    p: &Presentation,
    options: &ReportOptions,
    budget: &Budget,
) -> Result<InvariantReport> {
    budget.validate()?;
    let mut c = Collected::default();
    let reduced = p.simplified();
    if reduced.meridian_count() > 0 {
        c.upper[4] = Some(Bound {
            value: reduced.meridian_count() - 1,
            source: BoundSource::MeridianCount {
                generators: reduced.meridian_count(),
            },
        });
    }
    if let Some(ic) = certify_infinite_cyclic(p, budget) {
        // The whole group is generated by one meridian.
        c.upper[4] = Some(Bound {
            value: 0,
            source: BoundSource::Certificate {
                digest: ic.digest(),
            },
        });
        c.certificates.push(ic);
    }
    if let Some(cert) = nakanishi_certificate(p) {
        c.add(cert);
    }
    if let Some(cert) = nonabelian_certificate(p, budget) {
        c.add(cert);
    }
    let summands = &options.summands;
    if summands.len() >= 2 {
        let (first, last) = summands.split_at(summands.len() - 1);
        let left = connected_sum_all(first)?;
        if let Some(cert) = lower_bound_afw_two(&left, &last[0], budget) {
            c.add(cert);
        }
    }
    let mu = c.upper[4].as_ref().map_or(0, |b| b.value);
    // Search only for witnesses that improve on what is already certified.
    for kind in [BoundKind::AFw, BoundKind::AStab, BoundKind::MaQiu] {
        let inv = kind.invariant();
        let open = |c: &Collected| {
            c.witnessed_upper(inv)
                .is_none_or(|u| u > c.chain_lower(inv))
        };
        if summands.len() >= 2 && kind != BoundKind::MaQiu && open(&c) {
            if let Some(cert) = additive_certificate(p, summands, kind, options.c_max, budget) {
                c.add(cert);
            }
        }
        if open(&c) {
            let hi = c
                .witnessed_upper(inv)
                .map_or(usize::MAX, |u| u - 1)
                .min(options.c_max)
                .min(mu);
            if let Some(cert) = search_witnesses_from(p, kind, c.chain_lower(inv), hi, 1, budget)
                .into_iter()
                .next()
            {
                c.add(cert);
            }
        }
    }
    c.finish(options.construction.annotations())
}
