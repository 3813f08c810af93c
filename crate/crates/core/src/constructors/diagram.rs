//! Wirtinger presentations of braid closures and plat closures.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::words::{GeneratorId, Word};

/// A braid word: `±i` stands for `σᵢ^{±1}`, which crosses strands `i` and `i+1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidWord {
    letters: Vec<i64>,
    strands: usize,
}

impl BraidWord {
    pub fn new(letters: Vec<i64>, strands: usize) -> Result<Self> {
        if strands == 0 {
            return Err(Error::InvalidBraidLetter { letter: 0, strands });
        }
        if let Some(&l) = letters
            .iter()
            .find(|&&l| l == 0 || l.unsigned_abs() as usize >= strands)
        {
            return Err(Error::InvalidBraidLetter { letter: l, strands });
        }
        Ok(BraidWord { letters, strands })
    }

    pub fn letters(&self) -> &[i64] {
        &self.letters
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    /// Number of components of the braid closure: cycles of the permutation.
    pub fn closure_components(&self) -> usize {
        let mut perm: Vec<usize> = (0..self.strands).collect();
        for &l in &self.letters {
            let a = l.unsigned_abs() as usize - 1;
            perm.swap(a, a + 1);
        }
        let mut seen = vec![false; self.strands];
        let mut cycles = 0;
        for start in 0..self.strands {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = perm[i];
            }
        }
        cycles
    }

    /// Wirtinger presentation of the closure, one generator per arc and one
    /// relator per crossing, before any simplification.
    pub fn wirtinger_raw(&self) -> Result<Presentation> {
        Diagram::new(&self.letters, self.strands, Closure::Braid).wirtinger()
    }

    /// Simplified Wirtinger presentation of the closure.
    pub fn wirtinger(&self) -> Result<Presentation> {
        Ok(self.wirtinger_raw()?.simplified())
    }
}

pub fn wirtinger_from_braid(b: &BraidWord) -> Result<Presentation> {
    b.wirtinger()
}

/// A plat diagram: a braid on an even number of strands capped off by
/// arcs joining positions `2j, 2j+1` at the top and at the bottom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlatWord {
    letters: Vec<i64>,
    strands: usize,
}

impl PlatWord {
    pub fn new(letters: Vec<i64>, strands: usize) -> Result<Self> {
        if strands == 0 || strands % 2 == 1 {
            return Err(Error::InvalidBraidLetter { letter: 0, strands });
        }
        BraidWord::new(letters.clone(), strands)?;
        Ok(PlatWord { letters, strands })
    }

    /// The 4-plat of the continued fraction with the given even twist
    /// parameters `a₁, b₁, …, a_m, b_m`. Twists alternate between the middle
    /// pair and the left pair of strands; an even-length fraction is first
    /// rewritten with a final unit entry so that it ends on the middle pair.
    pub fn two_bridge(params: &[i64]) -> Result<Self> {
        if params.is_empty() || params.iter().any(|&c| c == 0 || c % 2 != 0) {
            return Err(Error::Parse(format!(
                "two-bridge parameters must be nonzero even integers, got {params:?}"
            )));
        }
        let mut cf = params.to_vec();
        if cf.len().is_multiple_of(2) {
            let last = cf.pop().expect("nonempty");
            cf.push(last - 1);
            cf.push(1);
        }
        let mut letters = Vec::new();
        for (i, &c) in cf.iter().enumerate() {
            let (gen, sign) = if i % 2 == 0 { (2, 1) } else { (1, -1) };
            let l = sign * c.signum() * gen;
            letters.extend(std::iter::repeat_n(l, c.unsigned_abs() as usize));
        }
        PlatWord::new(letters, 4)
    }

    pub fn letters(&self) -> &[i64] {
        &self.letters
    }

    pub fn wirtinger_raw(&self) -> Result<Presentation> {
        Diagram::new(&self.letters, self.strands, Closure::Plat).wirtinger()
    }

    pub fn wirtinger(&self) -> Result<Presentation> {
        Ok(self.wirtinger_raw()?.simplified())
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Closure {
    Braid,
    Plat,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Dir {
    Down,
    Up,
}

struct Diagram<'a> {
    letters: &'a [i64],
    strands: usize,
    closure: Closure,
}

/// What the traversal saw at one crossing.
#[derive(Default, Clone)]
struct CrossingVisit {
    over: Option<(i64, i64)>,
    under: Option<(usize, usize, (i64, i64))>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
    }
}

impl<'a> Diagram<'a> {
    fn new(letters: &'a [i64], strands: usize, closure: Closure) -> Self {
        Diagram {
            letters,
            strands,
            closure,
        }
    }

    fn seg(&self, p: usize, k: usize) -> usize {
        k * self.strands + p
    }

    /// Crossing `k` acts on positions `a, a+1`. Strand A runs from `a` above
    /// to `a+1` below, strand B from `a+1` to `a`.
    fn pos(&self, k: usize) -> usize {
        self.letters[k].unsigned_abs() as usize - 1
    }

    /// One step along the knot. Returns the next state, plus the crossing
    /// passed (index, strand is A, travel vector).
    #[allow(clippy::type_complexity)]
    fn step(
        &self,
        p: usize,
        k: usize,
        d: Dir,
    ) -> ((usize, usize, Dir), Option<(usize, bool, (i64, i64))>) {
        let len = self.letters.len();
        match d {
            Dir::Down if k == len => match self.closure {
                Closure::Braid => ((p, 0, Dir::Down), None),
                Closure::Plat => ((p ^ 1, len, Dir::Up), None),
            },
            Dir::Up if k == 0 => match self.closure {
                Closure::Braid => ((p, len, Dir::Up), None),
                Closure::Plat => ((p ^ 1, 0, Dir::Down), None),
            },
            Dir::Down => {
                let a = self.pos(k);
                if p == a {
                    ((a + 1, k + 1, Dir::Down), Some((k, true, (1, 1))))
                } else if p == a + 1 {
                    ((a, k + 1, Dir::Down), Some((k, false, (-1, 1))))
                } else {
                    ((p, k + 1, Dir::Down), None)
                }
            }
            Dir::Up => {
                let a = self.pos(k - 1);
                if p == a + 1 {
                    ((a, k - 1, Dir::Up), Some((k - 1, true, (-1, -1))))
                } else if p == a {
                    ((a + 1, k - 1, Dir::Up), Some((k - 1, false, (1, -1))))
                } else {
                    ((p, k - 1, Dir::Up), None)
                }
            }
        }
    }

    fn wirtinger(&self) -> Result<Presentation> {
        let len = self.letters.len();
        let nseg = self.strands * (len + 1);
        let mut uf = UnionFind((0..nseg).collect());
        let mut visited = vec![false; nseg];
        let mut order = Vec::with_capacity(nseg);
        let mut crossings = vec![CrossingVisit::default(); len];

        let start = (0usize, 0usize, Dir::Down);
        let mut state = start;
        loop {
            let (p, k, d) = state;
            let s = self.seg(p, k);
            if !visited[s] {
                visited[s] = true;
                order.push(s);
            }
            let (next, passed) = self.step(p, k, d);
            let t = self.seg(next.0, next.1);
            match passed {
                Some((c, is_a, v)) => {
                    let over_is_a = self.letters[c] > 0;
                    if is_a == over_is_a {
                        uf.union(s, t);
                        crossings[c].over = Some(v);
                    } else {
                        crossings[c].under = Some((s, t, v));
                    }
                }
                None => uf.union(s, t),
            }
            state = next;
            if state == start {
                break;
            }
        }
        if order.len() != nseg {
            return Err(Error::MultiComponent(self.count_components()));
        }

        let mut gen_of_root = vec![usize::MAX; nseg];
        let mut next_gen = 0;
        for &s in &order {
            let r = uf.find(s);
            if gen_of_root[r] == usize::MAX {
                gen_of_root[r] = next_gen;
                next_gen += 1;
            }
        }
        let mut arc = |s: usize| GeneratorId::from(gen_of_root[uf.find(s)]);

        let mut relators = Vec::with_capacity(len);
        for (k, c) in crossings.iter().enumerate() {
            let (vo, (s_in, s_out, vu)) = (c.over.expect("visited"), c.under.expect("visited"));
            let over_seg = if self.letters[k] > 0 {
                self.seg(self.pos(k), k)
            } else {
                self.seg(self.pos(k) + 1, k)
            };
            let o = Word::gen(arc(over_seg));
            let eps = (vo.0 * vu.1 - vo.1 * vu.0).signum();
            let ue = Word::gen(arc(s_in));
            let uo = Word::gen(arc(s_out));
            let r = &uo.inverse() * &(&(&o.pow(eps) * &ue) * &o.pow(-eps));
            relators.push(r);
        }
        Presentation::all_meridian(next_gen, relators)
    }

    fn count_components(&self) -> usize {
        let len = self.letters.len();
        let nseg = self.strands * (len + 1);
        let mut visited = vec![false; nseg];
        let mut components = 0;
        for s0 in 0..nseg {
            if visited[s0] {
                continue;
            }
            components += 1;
            let start = (s0 % self.strands, s0 / self.strands, Dir::Down);
            let mut state = start;
            loop {
                visited[self.seg(state.0, state.1)] = true;
                state = self.step(state.0, state.1, state.2).0;
                if state == start {
                    break;
                }
            }
        }
        components
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknot_closure() {
        let p = BraidWord::new(vec![], 1).unwrap().wirtinger().unwrap();
        assert_eq!(p.gen_count(), 1);
        assert!(p.relators().is_empty());
    }

    #[test]
    fn components_of_closures() {
        assert_eq!(
            BraidWord::new(vec![1, 1], 2).unwrap().closure_components(),
            2
        );
        assert_eq!(
            BraidWord::new(vec![1, 1, 1], 2)
                .unwrap()
                .closure_components(),
            1
        );
        assert!(matches!(
            BraidWord::new(vec![1, 1], 2).unwrap().wirtinger(),
            Err(Error::MultiComponent(2))
        ));
        assert!(BraidWord::new(vec![2], 2).is_err());
    }

    #[test]
    fn raw_wirtinger_has_one_relator_per_crossing() {
        let p = BraidWord::new(vec![1, -2, 1, -2], 3)
            .unwrap()
            .wirtinger_raw()
            .unwrap();
        assert_eq!(p.gen_count(), 4);
        assert_eq!(p.relators().len(), 4);
        assert!(p.relators().iter().all(|r| r.exponent_sum() == 0));
    }

    #[test]
    fn two_bridge_parameters_must_be_even() {
        assert!(PlatWord::two_bridge(&[2, 3]).is_err());
        assert!(PlatWord::two_bridge(&[]).is_err());
        assert!(PlatWord::two_bridge(&[2, 2]).is_ok());
    }
}
