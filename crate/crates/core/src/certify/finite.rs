//! Finite target groups as permutation groups of small degree.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::alexander::is_odd_prime;
use crate::error::{Error, Result};
use crate::words::Word;

pub const MAX_DEGREE: usize = 64;

/// A permutation of `0..n` for `n ≤ 64`. Products act on the right:
/// `a.then(b)` applies `a` first.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    n: u8,
    img: [u8; MAX_DEGREE],
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_DEGREE, "degree {n} exceeds {MAX_DEGREE}");
        let mut img = [0u8; MAX_DEGREE];
        for (i, v) in img.iter_mut().enumerate() {
            *v = i as u8;
        }
        Perm { n: n as u8, img }
    }

    pub fn from_images(images: &[u8]) -> Result<Self> {
        let n = images.len();
        if n > MAX_DEGREE {
            return Err(Error::UnsupportedTarget(format!(
                "degree {n} exceeds {MAX_DEGREE}"
            )));
        }
        let mut seen = [false; MAX_DEGREE];
        for &v in images {
            if v as usize >= n || std::mem::replace(&mut seen[v as usize], true) {
                return Err(Error::Malformed(format!("{images:?} is not a permutation")));
            }
        }
        let mut p = Perm::identity(n);
        p.img[..n].copy_from_slice(images);
        Ok(p)
    }

    pub fn degree(&self) -> usize {
        self.n as usize
    }

    pub fn images(&self) -> &[u8] {
        &self.img[..self.n as usize]
    }

    pub fn apply(&self, i: usize) -> usize {
        self.img[i] as usize
    }

    pub fn then(&self, other: &Perm) -> Perm {
        let mut out = *self;
        for i in 0..self.n as usize {
            out.img[i] = other.img[self.img[i] as usize];
        }
        out
    }

    pub fn inverse(&self) -> Perm {
        let mut out = *self;
        for i in 0..self.n as usize {
            out.img[self.img[i] as usize] = i as u8;
        }
        out
    }

    pub fn pow(&self, e: i64) -> Perm {
        let base = if e < 0 { self.inverse() } else { *self };
        let mut acc = Perm::identity(self.degree());
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.then(&sq);
            }
            sq = sq.then(&sq);
            k >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.images()
            .iter()
            .enumerate()
            .all(|(i, &v)| i == v as usize)
    }

    pub fn commutes_with(&self, other: &Perm) -> bool {
        self.then(other) == other.then(self)
    }

    /// Sorted cycle lengths, fixed points included.
    pub fn cycle_type(&self) -> Vec<u8> {
        let n = self.degree();
        let mut seen = [false; MAX_DEGREE];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let (mut i, mut len) = (s, 0u8);
            while !seen[i] {
                seen[i] = true;
                i = self.apply(i);
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable();
        out
    }

    pub fn order(&self) -> u64 {
        self.cycle_type()
            .iter()
            .fold(1u64, |acc, &l| num_integer::lcm(acc, l as u64))
    }

    /// Image of a word under generator images.
    pub fn evaluate(w: &Word, images: &[Perm], degree: usize) -> Result<Perm> {
        w.syllables()
            .iter()
            .try_fold(Perm::identity(degree), |acc, s| {
                let g = images
                    .get(s.gen.index())
                    .ok_or(Error::UnmappedGenerator(s.gen.0))?;
                Ok(acc.then(&g.pow(s.exp)))
            })
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images())
    }
}

impl Serialize for Perm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.images().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<u8>::deserialize(d)?;
        Perm::from_images(&v).map_err(serde::de::Error::custom)
    }
}

/// A supported finite target.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiniteGroupSpec {
    /// `S_n`, `n ≤ 8`.
    Symmetric(u8),
    /// `PSL(2, ℓ)`, prime `ℓ ≤ 61`, acting on the projective line.
    Psl2(u8),
    /// Multiplication table `t[i][j] = i·j` with identity 0, at most 64 elements.
    Cayley(Vec<Vec<u8>>),
}

impl fmt::Display for FiniteGroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiniteGroupSpec::Symmetric(n) => write!(f, "S{n}"),
            FiniteGroupSpec::Psl2(l) => write!(f, "PSL(2,{l})"),
            FiniteGroupSpec::Cayley(t) => write!(f, "Cayley({})", t.len()),
        }
    }
}

/// Targets tried in order when searching for quotients.
pub const LADDER: [FiniteGroupSpec; 10] = [
    FiniteGroupSpec::Symmetric(3),
    FiniteGroupSpec::Symmetric(4),
    FiniteGroupSpec::Symmetric(5),
    FiniteGroupSpec::Psl2(5),
    FiniteGroupSpec::Psl2(7),
    FiniteGroupSpec::Symmetric(6),
    FiniteGroupSpec::Symmetric(7),
    FiniteGroupSpec::Symmetric(8),
    FiniteGroupSpec::Psl2(11),
    FiniteGroupSpec::Psl2(13),
];

/// Tried after [`LADDER`] when certifying free-product quotients; their wreath
/// squares still fit in [`MAX_DEGREE`].
pub const EXTENDED_LADDER: [FiniteGroupSpec; 3] = [
    FiniteGroupSpec::Psl2(19),
    FiniteGroupSpec::Psl2(29),
    FiniteGroupSpec::Psl2(31),
];

impl FiniteGroupSpec {
    /// The cyclic group of order `n` as a Cayley table.
    pub fn cyclic(n: u8) -> Self {
        FiniteGroupSpec::Cayley(
            (0..n)
                .map(|i| (0..n).map(|j| (i + j) % n).collect())
                .collect(),
        )
    }

    fn generators(&self) -> Result<(usize, Vec<Perm>)> {
        let unsupported = || Err(Error::UnsupportedTarget(self.to_string()));
        match self {
            FiniteGroupSpec::Symmetric(n) => {
                let n = *n as usize;
                if !(1..=8).contains(&n) {
                    return unsupported();
                }
                if n == 1 {
                    return Ok((1, vec![]));
                }
                let swap: Vec<u8> = [1u8, 0].into_iter().chain(2..n as u8).collect();
                let cycle: Vec<u8> = (0..n as u8).map(|i| (i + 1) % n as u8).collect();
                Ok((
                    n,
                    vec![Perm::from_images(&swap)?, Perm::from_images(&cycle)?],
                ))
            }
            FiniteGroupSpec::Psl2(l) => {
                let l = *l as u64;
                if !(l == 2 || is_odd_prime(l)) || l > 61 {
                    return unsupported();
                }
                // Points 0..l are residues, l is infinity.
                let inf = l;
                let shift: Vec<u8> = (0..=l)
                    .map(|z| if z == inf { inf } else { (z + 1) % l } as u8)
                    .collect();
                let inv = |z: u64| (1..l).find(|y| y * z % l == 1).expect("unit");
                let flip: Vec<u8> = (0..=l)
                    .map(|z| match z {
                        z if z == inf => 0,
                        0 => inf,
                        z => (l - inv(z)) % l,
                    } as u8)
                    .collect();
                Ok((
                    l as usize + 1,
                    vec![Perm::from_images(&shift)?, Perm::from_images(&flip)?],
                ))
            }
            FiniteGroupSpec::Cayley(t) => {
                let n = t.len();
                if n == 0 || n > MAX_DEGREE || t.iter().any(|r| r.len() != n) {
                    return unsupported();
                }
                if t.iter().flatten().any(|&v| v as usize >= n) {
                    return unsupported();
                }
                let id_ok = (0..n).all(|i| t[0][i] as usize == i && t[i][0] as usize == i);
                let assoc = (0..n).all(|a| {
                    (0..n).all(|b| (0..n).all(|c| t[t[a][b] as usize][c] == t[a][t[b][c] as usize]))
                });
                let latin = t
                    .iter()
                    .all(|r| r.iter().collect::<HashSet<_>>().len() == n);
                if !(id_ok && assoc && latin) {
                    return Err(Error::UnsupportedTarget(
                        "Cayley table is not a group table".into(),
                    ));
                }
                // Right regular representation: g sends x to x·g.
                let gens = (0..n)
                    .map(|g| Perm::from_images(&(0..n).map(|x| t[x][g]).collect::<Vec<_>>()))
                    .collect::<Result<Vec<_>>>()?;
                Ok((n, gens))
            }
        }
    }
}

/// An enumerated permutation group.
#[derive(Debug)]
pub struct FiniteGroup {
    pub spec: FiniteGroupSpec,
    pub degree: usize,
    pub generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, u32>,
}

impl FiniteGroup {
    pub fn new(spec: FiniteGroupSpec) -> Result<Self> {
        let (degree, generators) = spec.generators()?;
        let id = Perm::identity(degree);
        let mut seen: HashSet<Perm> = HashSet::from([id]);
        let mut queue = VecDeque::from([id]);
        while let Some(g) = queue.pop_front() {
            for s in &generators {
                let h = g.then(s);
                if seen.insert(h) {
                    queue.push_back(h);
                }
            }
        }
        let mut elements: Vec<Perm> = seen.into_iter().collect();
        elements.sort_unstable();
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, &g)| (g, i as u32))
            .collect();
        Ok(FiniteGroup {
            spec,
            degree,
            generators,
            elements,
            index,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn contains(&self, g: &Perm) -> bool {
        self.index.contains_key(g)
    }

    pub fn elements_of_order(&self, k: u64) -> Vec<Perm> {
        self.elements
            .iter()
            .copied()
            .filter(|g| g.order() == k)
            .collect()
    }

    /// One representative per conjugacy class, the smallest in each class,
    /// in increasing order.
    pub fn class_representatives(&self) -> Vec<Perm> {
        let mut seen = vec![false; self.order()];
        let mut reps = Vec::new();
        for (i, &g) in self.elements.iter().enumerate() {
            if seen[i] {
                continue;
            }
            reps.push(g);
            seen[i] = true;
            let mut queue = VecDeque::from([g]);
            while let Some(h) = queue.pop_front() {
                for s in &self.generators {
                    let c = s.inverse().then(&h).then(s);
                    let j = self.index[&c] as usize;
                    if !seen[j] {
                        seen[j] = true;
                        queue.push_back(c);
                    }
                }
            }
        }
        reps
    }

    /// The conjugacy class of `g`.
    pub fn class_of(&self, g: &Perm) -> Vec<Perm> {
        let mut seen: HashSet<Perm> = HashSet::from([*g]);
        let mut queue = VecDeque::from([*g]);
        while let Some(h) = queue.pop_front() {
            for s in &self.generators {
                let c = s.inverse().then(&h).then(s);
                if seen.insert(c) {
                    queue.push_back(c);
                }
            }
        }
        let mut out: Vec<Perm> = seen.into_iter().collect();
        out.sort_unstable();
        out
    }
}

/// Shared, lazily built target groups.
pub fn group(spec: &FiniteGroupSpec) -> Result<Arc<FiniteGroup>> {
    static CACHE: OnceLock<Mutex<HashMap<FiniteGroupSpec, Arc<FiniteGroup>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(g) = cache.lock().expect("poisoned").get(spec) {
        return Ok(g.clone());
    }
    let g = Arc::new(FiniteGroup::new(spec.clone())?);
    cache
        .lock()
        .expect("poisoned")
        .insert(spec.clone(), g.clone());
    Ok(g)
}
