//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's algebra beyond reading relators as letter lists.
#![allow(dead_code)]

use std::collections::BTreeMap;

use knotgroup::{Presentation, Word};

/// A letter as `(generator, ±1)`.
pub type RawLetter = (u32, i8);

pub fn raw_letters(w: &Word) -> Vec<RawLetter> {
    w.letters()
        .map(|l| (l.gen.0, if l.inverse { -1 } else { 1 }))
        .collect()
}

/// Free reduction with a stack, independent of `Word::reduce`.
pub fn free_reduce(letters: &[RawLetter]) -> Vec<RawLetter> {
    let mut out: Vec<RawLetter> = Vec::with_capacity(letters.len());
    for &l in letters {
        match out.last() {
            Some(&(g, s)) if g == l.0 && s == -l.1 => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    out
}

/// The reflection `v ↦ 2c − v` of `ℤ_p` as a permutation table.
fn reflection(c: u64, p: u64) -> Vec<u64> {
    (0..p).map(|v| (2 * c + p - v) % p).collect()
}

/// Counts Fox `p`-colorings by trying every assignment of colors to
/// generators and composing reflections letter by letter.
pub fn count_colorings(p: &Presentation, prime: u64) -> u64 {
    let n = p.gen_count();
    let rels: Vec<Vec<RawLetter>> = p.relators().iter().map(raw_letters).collect();
    let mut colors = vec![0u64; n];
    let mut count = 0;
    loop {
        let refl: Vec<Vec<u64>> = colors.iter().map(|&c| reflection(c, prime)).collect();
        let ok = rels.iter().all(|r| {
            (0..prime).all(|v| {
                r.iter()
                    .fold(v, |acc, &(g, _)| refl[g as usize][acc as usize])
                    == v
            })
        });
        count += ok as u64;
        let mut i = 0;
        loop {
            if i == n {
                return count;
            }
            colors[i] += 1;
            if colors[i] < prime {
                break;
            }
            colors[i] = 0;
            i += 1;
        }
    }
}

/// Element of `ℤ[F]` keyed by reduced letter lists.
pub type Ring = BTreeMap<Vec<RawLetter>, i64>;

fn ring_add(a: &mut Ring, w: Vec<RawLetter>, c: i64) {
    let e = a.entry(w.clone()).or_insert(0);
    *e += c;
    if *e == 0 {
        a.remove(&w);
    }
}

/// `u · r` for a group element `u`.
fn left_mul(u: &[RawLetter], r: &Ring) -> Ring {
    let mut out = Ring::new();
    for (w, &c) in r {
        let mut cat = u.to_vec();
        cat.extend_from_slice(w);
        ring_add(&mut out, free_reduce(&cat), c);
    }
    out
}

/// `∂w/∂x_g` by recursive splitting: `∂(uv) = ∂u + u·∂v`.
pub fn fox_recursive(w: &[RawLetter], g: u32) -> Ring {
    match w.len() {
        0 => Ring::new(),
        1 => {
            let mut r = Ring::new();
            if w[0].0 == g {
                if w[0].1 > 0 {
                    ring_add(&mut r, Vec::new(), 1);
                } else {
                    ring_add(&mut r, vec![(g, -1)], -1);
                }
            }
            r
        }
        n => {
            let (u, v) = w.split_at(n / 2);
            let mut out = fox_recursive(u, g);
            for (k, c) in left_mul(u, &fox_recursive(v, g)) {
                ring_add(&mut out, k, c);
            }
            out
        }
    }
}

/// Integer matrix `A(−1)`: abelianize each Fox derivative to `t^{exponent sum}`.
pub fn fox_matrix_at_minus_one(p: &Presentation) -> Vec<Vec<i64>> {
    p.relators()
        .iter()
        .map(|r| {
            let letters = raw_letters(r);
            (0..p.gen_count() as u32)
                .map(|g| {
                    fox_recursive(&letters, g)
                        .iter()
                        .map(|(w, &c)| {
                            let s: i64 = w.iter().map(|&(_, e)| e as i64).sum();
                            if s.rem_euclid(2) == 0 {
                                c
                            } else {
                                -c
                            }
                        })
                        .sum()
                })
                .collect()
        })
        .collect()
}

pub fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Determinant by fraction-free (Bareiss) elimination over `i128`.
pub fn bareiss(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Gcd of all `k × k` minors; `0` when there are none or all vanish.
pub fn minors_gcd(m: &[Vec<i64>], cols: usize, k: usize) -> i128 {
    if k == 0 {
        return 1;
    }
    if m.len() < k || cols < k {
        return 0;
    }
    let col_sets = subsets(cols, k);
    subsets(m.len(), k).iter().fold(0, |acc, rows| {
        col_sets.iter().fold(acc, |acc, cs| {
            let sub: Vec<Vec<i128>> = rows
                .iter()
                .map(|&i| cs.iter().map(|&j| m[i][j] as i128).collect())
                .collect();
            gcd(acc, bareiss(sub))
        })
    })
}

/// The 2-knot determinant: gcd of `(n−1)`-minors of the full `A(−1)`.
pub fn determinant_oracle(p: &Presentation) -> u64 {
    let a = fox_matrix_at_minus_one(p);
    minors_gcd(&a, p.gen_count(), p.gen_count().saturating_sub(1)) as u64
}

/// Invariant factors `d_k = g_k / g_{k−1}` from minor gcds, without the 1s,
/// followed by one 0 per free summand.
pub fn invariant_factors_oracle(m: &[Vec<i64>], cols: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut prev = 1i128;
    let mut rank = 0;
    for k in 1..=cols.min(m.len()) {
        let g = minors_gcd(m, cols, k);
        if g == 0 {
            break;
        }
        let d = g / prev;
        if d != 1 {
            out.push(d as u64);
        }
        prev = g;
        rank = k;
    }
    out.extend(std::iter::repeat_n(0, cols - rank));
    out
}

pub fn divides(p: u64, n: u64) -> bool {
    n.is_multiple_of(p)
}

/// Classical catalog names with at most seven crossings.
pub const SMALL_KNOTS: [&str; 10] = [
    "unknot", "3_1", "4_1", "5_1", "5_2", "6_1", "7_1", "T(2,3)", "T(2,5)", "T(2,7)",
];
