//! Todd-Coxeter coset enumeration, HLT style with lookahead.

use serde::{Deserialize, Serialize};

use super::budget::{Budget, Deadline};
use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::words::Word;

const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CosetStatus {
    Completed(usize),
    Exhausted,
}

/// Result of an enumeration. Columns are `2g` for generator `g` and `2g+1`
/// for its inverse. A completed table is compacted, with coset 0 the
/// subgroup itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetTable {
    pub gen_count: usize,
    pub rows: Vec<Vec<u32>>,
    pub status: CosetStatus,
}

impl CosetTable {
    pub fn index(&self) -> Option<usize> {
        match self.status {
            CosetStatus::Completed(k) => Some(k),
            CosetStatus::Exhausted => None,
        }
    }

    fn trace(&self, c: u32, w: &Word) -> Option<u32> {
        w.letters().try_fold(c, |c, l| {
            let col = 2 * l.gen.index() + l.inverse as usize;
            let d = *self.rows.get(c as usize)?.get(col)?;
            (d != NONE).then_some(d)
        })
    }

    /// Exhaustive consistency scan of a completed table: every entry defined
    /// and inverse-consistent, every relator closed at every coset, every
    /// subgroup generator fixing coset 0, and the action transitive.
    pub fn verify(&self, p: &Presentation, subgroup: &[Word]) -> Result<()> {
        let bad = |m: &str| Err(Error::CertificateRejected(format!("coset table: {m}")));
        let Some(k) = self.index() else {
            return bad("not completed");
        };
        if self.rows.len() != k || self.gen_count != p.gen_count() {
            return bad("shape");
        }
        for (c, row) in self.rows.iter().enumerate() {
            if row.len() != 2 * self.gen_count {
                return bad("row width");
            }
            for (col, &d) in row.iter().enumerate() {
                if d == NONE || d as usize >= k || self.rows[d as usize][col ^ 1] != c as u32 {
                    return bad("inconsistent entry");
                }
            }
            for r in p.relators() {
                if self.trace(c as u32, r) != Some(c as u32) {
                    return bad("relator not closed");
                }
            }
        }
        for h in subgroup {
            if self.trace(0, h) != Some(0) {
                return bad("subgroup generator moves coset 0");
            }
        }
        let mut seen = vec![false; k];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(c) = stack.pop() {
            for &d in &self.rows[c] {
                if !seen[d as usize] {
                    seen[d as usize] = true;
                    stack.push(d as usize);
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return bad("not transitive");
        }
        Ok(())
    }
}

struct Full;

struct Enumerator {
    nc: usize,
    rels: Vec<Vec<usize>>,
    table: Vec<u32>,
    parent: Vec<u32>,
    live: usize,
    max: usize,
    queue: Vec<u32>,
}

fn letters(w: &Word) -> Vec<usize> {
    w.letters()
        .map(|l| 2 * l.gen.index() + l.inverse as usize)
        .collect()
}

impl Enumerator {
    fn new(p: &Presentation, max: usize) -> Self {
        let nc = 2 * p.gen_count();
        let mut rels: Vec<Vec<usize>> = p.relators().iter().map(letters).collect();
        rels.sort_by_key(Vec::len);
        let mut e = Enumerator {
            nc,
            rels,
            table: Vec::new(),
            parent: Vec::new(),
            live: 0,
            max,
            queue: Vec::new(),
        };
        e.new_coset();
        e
    }

    fn len(&self) -> usize {
        self.parent.len()
    }

    fn new_coset(&mut self) -> u32 {
        let d = self.len() as u32;
        self.table.extend(std::iter::repeat_n(NONE, self.nc));
        self.parent.push(d);
        self.live += 1;
        d
    }

    #[inline]
    fn get(&self, c: u32, x: usize) -> u32 {
        self.table[c as usize * self.nc + x]
    }

    #[inline]
    fn set(&mut self, c: u32, x: usize, d: u32) {
        self.table[c as usize * self.nc + x] = d;
    }

    fn alive(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn define(&mut self, c: u32, x: usize) -> Result<u32, Full> {
        if self.len() >= self.max {
            return Err(Full);
        }
        let d = self.new_coset();
        self.set(c, x, d);
        self.set(d, x ^ 1, c);
        Ok(d)
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut c = c;
        while self.parent[c as usize] != r {
            let next = self.parent[c as usize];
            self.parent[c as usize] = r;
            c = next;
        }
        r
    }

    fn merge(&mut self, k: u32, l: u32) {
        let (a, b) = (self.rep(k), self.rep(l));
        if a == b {
            return;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.parent[hi as usize] = lo;
        self.live -= 1;
        self.queue.push(hi);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let g = self.queue[i];
            i += 1;
            for x in 0..self.nc {
                let d = self.get(g, x);
                if d == NONE {
                    continue;
                }
                if self.get(d, x ^ 1) == g {
                    self.set(d, x ^ 1, NONE);
                }
                let mu = self.rep(g);
                let nu = self.rep(d);
                let mx = self.get(mu, x);
                if mx != NONE {
                    self.merge(nu, mx);
                } else {
                    let nxi = self.get(nu, x ^ 1);
                    if nxi != NONE {
                        self.merge(mu, nxi);
                    } else {
                        self.set(mu, x, nu);
                        self.set(nu, x ^ 1, mu);
                    }
                }
            }
        }
    }

    /// Traces `w` from `c` in both directions; fills gaps when `fill`.
    fn scan(&mut self, c: u32, w: &[usize], fill: bool) -> Result<(), Full> {
        let (mut f, mut b) = (c, c);
        let mut i = 0isize;
        let mut j = w.len() as isize - 1;
        loop {
            while i <= j {
                let n = self.get(f, w[i as usize]);
                if n == NONE {
                    break;
                }
                f = n;
                i += 1;
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i {
                let n = self.get(b, w[j as usize] ^ 1);
                if n == NONE {
                    break;
                }
                b = n;
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return Ok(());
            }
            if i == j {
                let x = w[i as usize];
                self.set(f, x, b);
                self.set(b, x ^ 1, f);
                return Ok(());
            }
            if !fill {
                return Ok(());
            }
            f = self.define(f, w[i as usize])?;
            i += 1;
        }
    }

    fn lookahead(&mut self) {
        let rels = std::mem::take(&mut self.rels);
        for c in 0..self.len() as u32 {
            for r in &rels {
                if !self.alive(c) {
                    break;
                }
                let _ = self.scan(c, r, false);
            }
        }
        self.rels = rels;
    }

    /// Renumbers live cosets in order; returns the new index of `keep`.
    fn compact(&mut self, keep: u32) -> u32 {
        let n = self.len();
        let mut map = vec![NONE; n];
        let mut next = 0u32;
        for c in 0..n as u32 {
            if self.alive(c) {
                map[c as usize] = next;
                next += 1;
            }
        }
        let mut table = Vec::with_capacity(next as usize * self.nc);
        for c in 0..n as u32 {
            if !self.alive(c) {
                continue;
            }
            for x in 0..self.nc {
                let d = self.get(c, x);
                table.push(if d == NONE { NONE } else { map[d as usize] });
            }
        }
        self.table = table;
        self.parent = (0..next).collect();
        self.live = next as usize;
        let mut k = keep;
        while (k as usize) < n && map[k as usize] == NONE {
            k += 1;
        }
        if (k as usize) >= n {
            next
        } else {
            map[k as usize]
        }
    }

    fn process(&mut self, c: u32) -> Result<(), Full> {
        let rels = std::mem::take(&mut self.rels);
        let mut out = Ok(());
        for r in &rels {
            if !self.alive(c) {
                break;
            }
            if let Err(e) = self.scan(c, r, true) {
                out = Err(e);
                break;
            }
        }
        self.rels = rels;
        out?;
        if self.alive(c) {
            for x in 0..self.nc {
                if self.get(c, x) == NONE {
                    self.define(c, x)?;
                }
            }
        }
        Ok(())
    }

    fn run(&mut self, subgroup: &[Vec<usize>], deadline: &Deadline) -> CosetStatus {
        // Subgroup generators close at coset 0.
        let mut c = 0u32;
        'outer: loop {
            for h in subgroup {
                if self.scan(0, h, true).is_err() {
                    self.lookahead();
                    c = self.compact(c);
                    if self.len() >= self.max {
                        return CosetStatus::Exhausted;
                    }
                    continue 'outer;
                }
            }
            break;
        }
        let mut steps = 0u32;
        while (c as usize) < self.len() {
            steps = steps.wrapping_add(1);
            if steps.is_multiple_of(512) && deadline.expired() {
                return CosetStatus::Exhausted;
            }
            if !self.alive(c) {
                c += 1;
                continue;
            }
            match self.process(c) {
                Ok(()) => c += 1,
                Err(Full) => {
                    self.lookahead();
                    c = self.compact(c);
                    if self.len() + self.nc >= self.max {
                        return CosetStatus::Exhausted;
                    }
                }
            }
        }
        self.compact(0);
        CosetStatus::Completed(self.live)
    }
}

/// Enumerates cosets of the subgroup generated by `subgroup` in the group of `p`.
pub fn todd_coxeter(p: &Presentation, subgroup: &[Word], budget: &Budget) -> CosetTable {
    todd_coxeter_with_deadline(p, subgroup, budget.max_cosets, &budget.deadline())
}

pub fn todd_coxeter_with_deadline(
    p: &Presentation,
    subgroup: &[Word],
    max_cosets: usize,
    deadline: &Deadline,
) -> CosetTable {
    let mut e = Enumerator::new(p, max_cosets.max(1));
    let h: Vec<Vec<usize>> = subgroup.iter().map(letters).collect();
    let status = e.run(&h, deadline);
    let rows = match status {
        CosetStatus::Completed(k) => (0..k)
            .map(|c| e.table[c * e.nc..(c + 1) * e.nc].to_vec())
            .collect(),
        CosetStatus::Exhausted => Vec::new(),
    };
    CosetTable {
        gen_count: p.gen_count(),
        rows,
        status,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::GeneratorId;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn small() -> Budget {
        Budget::default().with_cosets(20_000)
    }

    #[test]
    fn finite_groups_have_the_right_order() {
        // S3 = ⟨a, b | a², b³, (ab)²⟩
        let s3 = Presentation::new(
            2,
            [w("x0^2"), w("x1^3"), w("x0.x1.x0.x1")],
            vec![true, false],
            GeneratorId(0),
        )
        .unwrap();
        let t = todd_coxeter(&s3, &[], &small());
        assert_eq!(t.index(), Some(6));
        t.verify(&s3, &[]).unwrap();
        let t = todd_coxeter(&s3, &[w("x0")], &small());
        assert_eq!(t.index(), Some(3));
        t.verify(&s3, &[w("x0")]).unwrap();
        // A5 as ⟨a, b | a², b³, (ab)⁵⟩
        let a5 = Presentation::new(
            2,
            [w("x0^2"), w("x1^3"), w("x0.x1").pow(5)],
            vec![true, false],
            GeneratorId(0),
        )
        .unwrap();
        assert_eq!(todd_coxeter(&a5, &[], &small()).index(), Some(60));
    }

    #[test]
    fn trefoil_cosets() {
        let t = Presentation::all_meridian(2, [w("x0.x1.x0.x1^-1.x0^-1.x1^-1")]).unwrap();
        assert_eq!(
            todd_coxeter(&t, &[w("x0"), w("x1")], &small()).index(),
            Some(1)
        );
        let tiny = Budget::default().with_cosets(500);
        assert_eq!(
            todd_coxeter(&t, &[w("x0")], &tiny).status,
            CosetStatus::Exhausted
        );
    }

    #[test]
    fn unknot_cosets() {
        let u = Presentation::unknot();
        assert_eq!(todd_coxeter(&u, &[w("x0")], &small()).index(), Some(1));
    }

    #[test]
    fn larger_enumeration() {
        // ⟨a,b | a^8, b^7, (ab)^2, (a^-1 b)^3⟩ has order 10752
        let p = Presentation::new(
            2,
            [
                w("x0^8"),
                w("x1^7"),
                w("x0.x1").pow(2),
                w("x0^-1.x1").pow(3),
            ],
            vec![true, false],
            GeneratorId(0),
        )
        .unwrap();
        let t = todd_coxeter(&p, &[w("x0")], &Budget::default().with_cosets(200_000));
        assert_eq!(t.index(), Some(1344));
        t.verify(&p, &[w("x0")]).unwrap();
    }
}
