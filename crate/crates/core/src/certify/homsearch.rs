//! Backtracking search for homomorphisms into finite permutation groups.

use std::collections::HashSet;
use std::ops::ControlFlow;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::budget::{Budget, Deadline};
use super::finite::{group, FiniteGroup, FiniteGroupSpec, Perm};
use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::words::{GeneratorId, Word};

/// A homomorphism from a presentation to a permutation group, given by
/// generator images.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermHom {
    pub target: String,
    pub degree: usize,
    pub images: Vec<Perm>,
}

impl PermHom {
    pub fn apply(&self, w: &Word) -> Result<Perm> {
        Perm::evaluate(w, &self.images, self.degree)
    }

    pub fn kills(&self, rels: &[Word]) -> bool {
        rels.iter()
            .all(|r| self.apply(r).is_ok_and(|p| p.is_identity()))
    }

    /// The first pair of generators with non-commuting images.
    pub fn non_commuting_pair(&self) -> Option<(usize, usize)> {
        let n = self.images.len();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| !self.images[i].commutes_with(&self.images[j]))
    }

    pub fn is_trivial(&self) -> bool {
        self.images.iter().all(Perm::is_identity)
    }
}

/// Knobs for the internal search.
#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    /// Branch the first free generator over class representatives only.
    pub up_to_conjugacy: bool,
    /// Send every meridian into the class of the first meridian's image.
    pub meridian_class: bool,
}

impl SearchOptions {
    pub const EXHAUSTIVE: SearchOptions = SearchOptions {
        up_to_conjugacy: false,
        meridian_class: false,
    };
    pub const QUOTIENT: SearchOptions = SearchOptions {
        up_to_conjugacy: true,
        meridian_class: true,
    };
}

#[derive(Clone, Debug)]
enum Source {
    Branch,
    /// `g = u` or `g = u⁻¹` read off a relator in which `g` occurs once.
    Forced {
        u: Word,
        invert: bool,
    },
}

#[derive(Clone, Debug)]
struct Step {
    gen: usize,
    source: Source,
    checks: Vec<usize>,
}

struct Plan {
    rels: Vec<Word>,
    steps: Vec<Step>,
    orders: Vec<Option<u64>>,
    meridians: Vec<bool>,
}

fn gens_of(w: &Word) -> HashSet<usize> {
    w.syllables().iter().map(|s| s.gen.index()).collect()
}

impl Plan {
    fn new(p: &Presentation, orders: Vec<Option<u64>>, first: usize) -> Plan {
        let n = p.gen_count();
        let rels = p.relators().to_vec();
        let support: Vec<HashSet<usize>> = rels.iter().map(gens_of).collect();
        let mut assigned = vec![false; n];
        let mut done = vec![false; rels.len()];
        let mut steps = Vec::with_capacity(n);
        while steps.len() < n {
            let forced = (0..n).filter(|&g| !assigned[g]).find_map(|g| {
                rels.iter().enumerate().find_map(|(ri, r)| {
                    let others_ready = support[ri].iter().all(|&h| h == g || assigned[h]);
                    (others_ready && r.occurrences(GeneratorId::from(g)) == 1).then_some((g, ri))
                })
            });
            let (gen, source) = match forced {
                Some((g, ri)) => {
                    let r = &rels[ri];
                    let k = r
                        .syllables()
                        .iter()
                        .position(|s| s.gen.index() == g)
                        .expect("occurs");
                    let rot = r.rotate_syllables(k);
                    let e = rot.syllables()[0].exp;
                    let u = Word::from_syllables(rot.syllables()[1..].iter().copied());
                    // g^e·u = 1, so g = u⁻¹ for e = 1 and g = u for e = −1.
                    (g, Source::Forced { u, invert: e == 1 })
                }
                None if steps.is_empty() && !assigned[first] => (first, Source::Branch),
                None => {
                    let score = |g: usize| {
                        let touching = support.iter().filter(|s| s.contains(&g));
                        let closing = touching
                            .clone()
                            .filter(|s| s.iter().all(|&h| h == g || assigned[h]))
                            .count();
                        let linked = touching.filter(|s| s.iter().any(|&h| assigned[h])).count();
                        (closing, linked)
                    };
                    let g = (0..n)
                        .filter(|&g| !assigned[g])
                        .max_by_key(|&g| (score(g), std::cmp::Reverse(g)))
                        .expect("unassigned generator");
                    (g, Source::Branch)
                }
            };
            assigned[gen] = true;
            let checks = (0..rels.len())
                .filter(|&ri| !done[ri] && support[ri].iter().all(|&h| assigned[h]))
                .collect::<Vec<_>>();
            for &ri in &checks {
                done[ri] = true;
            }
            steps.push(Step {
                gen,
                source,
                checks,
            });
        }
        Plan {
            rels,
            steps,
            orders,
            meridians: p.meridian_flags().to_vec(),
        }
    }
}

#[derive(Clone)]
struct Searcher<'a> {
    plan: &'a Plan,
    target: &'a FiniteGroup,
    degree: usize,
    options: SearchOptions,
    deadline: Deadline,
    choices: &'a [Arc<Vec<Perm>>],
    first_meridian: Option<usize>,
    class: Option<Arc<Vec<Perm>>>,
    nodes: u64,
}

impl<'a> Searcher<'a> {
    fn order_ok(&self, g: usize, v: &Perm) -> bool {
        self.plan.orders[g].is_none_or(|k| v.order() == k)
    }

    fn checks_pass(&self, step: &Step, images: &[Perm]) -> bool {
        step.checks.iter().all(|&ri| {
            Perm::evaluate(&self.plan.rels[ri], images, self.degree).is_ok_and(|p| p.is_identity())
        })
    }

    fn restricted(&self, g: usize) -> bool {
        self.options.meridian_class && self.plan.meridians[g] && self.first_meridian != Some(g)
    }

    fn class_ok(&self, g: usize, v: &Perm) -> bool {
        match &self.class {
            Some(c) if self.restricted(g) => c.binary_search(v).is_ok(),
            _ => true,
        }
    }

    /// Assigns `v` to `g`, recording the meridian class when `g` is the
    /// first meridian.
    fn assign(&mut self, g: usize, v: Perm, images: &mut [Perm]) {
        images[g] = v;
        if self.options.meridian_class && self.first_meridian == Some(g) {
            self.class = Some(Arc::new(self.target.class_of(&v)));
        }
    }

    fn dfs(
        &mut self,
        depth: usize,
        images: &mut [Perm],
        visit: &mut dyn FnMut(&[Perm]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) && self.deadline.expired() {
            return ControlFlow::Break(());
        }
        if depth == self.plan.steps.len() {
            return visit(images);
        }
        let step = &self.plan.steps[depth];
        let g = step.gen;
        match &step.source {
            Source::Forced { u, invert } => {
                let v = Perm::evaluate(u, images, self.degree).expect("assigned");
                let v = if *invert { v.inverse() } else { v };
                if !self.order_ok(g, &v) || !self.class_ok(g, &v) {
                    return ControlFlow::Continue(());
                }
                self.assign(g, v, images);
                if self.checks_pass(step, images) {
                    self.dfs(depth + 1, images, visit)?;
                }
            }
            Source::Branch => {
                let choices = match &self.class {
                    Some(c) if self.restricted(g) => c.clone(),
                    _ => self.choices[g].clone(),
                };
                let saved = self.class.clone();
                for &v in choices.iter() {
                    if !self.order_ok(g, &v) {
                        continue;
                    }
                    self.assign(g, v, images);
                    if self.checks_pass(step, images) {
                        self.dfs(depth + 1, images, visit)?;
                    }
                    self.class = saved.clone();
                }
            }
        }
        ControlFlow::Continue(())
    }
}

struct Prepared {
    plan: Plan,
    target: Arc<FiniteGroup>,
    choices: Vec<Arc<Vec<Perm>>>,
    first_meridian: Option<usize>,
}

fn prepare(
    p: &Presentation,
    target: &FiniteGroupSpec,
    constraints: &[(GeneratorId, u64)],
) -> Result<Prepared> {
    let n = p.gen_count();
    let mut orders = vec![None; n];
    for &(g, k) in constraints {
        if g.index() >= n {
            return Err(Error::GeneratorOutOfRange {
                gen: g.0,
                gen_count: n,
            });
        }
        orders[g.index()] = Some(k);
    }
    let first = constraints
        .first()
        .map_or(p.distinguished().index(), |c| c.0.index());
    let target = group(target)?;
    let plan = Plan::new(p, orders, first);
    let all = Arc::new(target.elements().to_vec());
    let choices = (0..n)
        .map(|g| match plan.orders[g] {
            Some(k) => Arc::new(target.elements_of_order(k)),
            None => all.clone(),
        })
        .collect();
    let first_meridian = plan
        .steps
        .iter()
        .map(|s| s.gen)
        .find(|&g| p.is_meridian(GeneratorId::from(g)));
    Ok(Prepared {
        plan,
        target,
        choices,
        first_meridian,
    })
}

/// Runs `per_branch` on each image of the first free generator, in
/// parallel; results come back in enumeration order.
fn run<T: Send>(
    prep: &Prepared,
    options: SearchOptions,
    deadline: Deadline,
    per_branch: impl Fn(&mut Searcher, usize, &mut [Perm]) -> T + Sync,
) -> Vec<T> {
    let degree = prep.target.degree;
    let mut seed = Searcher {
        plan: &prep.plan,
        target: &prep.target,
        degree,
        options,
        deadline,
        choices: &prep.choices,
        first_meridian: prep.first_meridian,
        class: None,
        nodes: 0,
    };
    let mut images = vec![Perm::identity(degree); prep.plan.steps.len()];
    // Forced steps before the first branch depend on nothing.
    let mut depth = 0;
    while let Some(step) = prep.plan.steps.get(depth) {
        let Source::Forced { u, invert } = &step.source else {
            break;
        };
        let v = Perm::evaluate(u, &images, degree).expect("constant");
        let v = if *invert { v.inverse() } else { v };
        if !seed.order_ok(step.gen, &v) {
            return Vec::new();
        }
        seed.assign(step.gen, v, &mut images);
        if !seed.checks_pass(step, &images) {
            return Vec::new();
        }
        depth += 1;
    }
    if depth == prep.plan.steps.len() {
        return vec![per_branch(&mut seed, depth, &mut images)];
    }
    let step = &prep.plan.steps[depth];
    let g = step.gen;
    let firsts: Vec<Perm> = if options.up_to_conjugacy && !seed.restricted(g) {
        prep.target.class_representatives()
    } else {
        match &seed.class {
            Some(c) if seed.restricted(g) => c.to_vec(),
            _ => prep.choices[g].to_vec(),
        }
    };
    firsts
        .par_iter()
        .filter(|v| seed.order_ok(g, v))
        .map(|&v| {
            let mut s = seed.clone();
            let mut images = images.clone();
            s.assign(g, v, &mut images);
            s.checks_pass(step, &images)
                .then(|| per_branch(&mut s, depth + 1, &mut images))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// All homomorphisms `P → target` respecting the order constraints, in
/// deterministic order, at most `budget.max_candidates` of them.
pub fn hom_search(
    p: &Presentation,
    target: &FiniteGroupSpec,
    constraints: &[(GeneratorId, u64)],
    budget: &Budget,
) -> Result<Vec<PermHom>> {
    budget.validate()?;
    let prep = prepare(p, target, constraints)?;
    let cap = budget.max_candidates;
    let name = target.to_string();
    let degree = prep.target.degree;
    let branches = run(
        &prep,
        SearchOptions::EXHAUSTIVE,
        budget.deadline(),
        |s, depth, images| {
            let mut found = Vec::new();
            let _ = s.dfs(depth, images, &mut |im| {
                found.push(im.to_vec());
                if found.len() >= cap {
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            });
            found
        },
    );
    let homs = branches
        .into_iter()
        .flatten()
        .take(cap)
        .map(|images| PermHom {
            target: name.clone(),
            degree,
            images,
        })
        .filter(|h| h.kills(p.relators()))
        .collect();
    Ok(homs)
}

/// The first homomorphism (in enumeration order) accepted by `accept`.
pub fn find_hom(
    p: &Presentation,
    target: &FiniteGroupSpec,
    constraints: &[(GeneratorId, u64)],
    options: SearchOptions,
    deadline: Deadline,
    accept: impl Fn(&PermHom) -> bool + Sync,
) -> Result<Option<PermHom>> {
    let prep = prepare(p, target, constraints)?;
    let name = target.to_string();
    let degree = prep.target.degree;
    let first = run(&prep, options, deadline, |s, depth, images| {
        let mut hit = None;
        let _ = s.dfs(depth, images, &mut |im| {
            let h = PermHom {
                target: name.clone(),
                degree,
                images: im.to_vec(),
            };
            if accept(&h) {
                hit = Some(h);
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        hit
    });
    Ok(first
        .into_iter()
        .flatten()
        .next()
        .filter(|h| h.kills(p.relators())))
}
