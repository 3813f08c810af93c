//! Smith normal form over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Nonzero invariant factors `d₁ | d₂ | …` of an integer matrix, all positive.
pub fn smith_normal_form(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = min_abs_entry(&a, t, t) else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    for j in t..cols {
                        let v = &q * &a[t][j];
                        a[i][j] -= v;
                    }
                    clean &= a[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    for row in a.iter_mut().skip(t) {
                        let v = &q * &row[t];
                        row[j] -= v;
                    }
                    clean &= a[t][j].is_zero();
                }
            }
            if !clean {
                // Move the smallest remainder in row/column t to the pivot.
                let (pi, pj) = pivot_line_min(&a, t);
                a.swap(t, pi);
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
                continue;
            }
            // Enforce divisibility of the remaining block by the pivot.
            let bad =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

pub fn smith_normal_form_i64(m: &[Vec<i64>]) -> Vec<BigInt> {
    let big: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    smith_normal_form(&big)
}

fn min_abs_entry(a: &[Vec<BigInt>], r0: usize, c0: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(r0) {
        for (j, v) in row.iter().enumerate().skip(c0) {
            if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn pivot_line_min(a: &[Vec<BigInt>], t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let better = |v: &BigInt, b: (usize, usize)| {
        !v.is_zero() && (a[b.0][b.1].is_zero() || v.abs() < a[b.0][b.1].abs())
    };
    for i in t..a.len() {
        if better(&a[i][t], best) {
            best = (i, t);
        }
    }
    for j in t..a[t].len() {
        if better(&a[t][j], best) {
            best = (t, j);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snf(m: &[Vec<i64>]) -> Vec<i64> {
        smith_normal_form_i64(m)
            .iter()
            .map(|b| b.try_into().unwrap())
            .collect()
    }

    #[test]
    fn examples() {
        assert_eq!(snf(&[vec![1, 0], vec![0, 1]]), vec![1, 1]);
        assert_eq!(snf(&[vec![0, 0, 0]]), Vec::<i64>::new());
        assert_eq!(snf(&[]), Vec::<i64>::new());
        // diag(2,4) scrambled by unimodular matrices
        assert_eq!(snf(&[vec![2, 4], vec![2, 8]]), vec![2, 4]);
        assert_eq!(snf(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(snf(&[vec![6, 4], vec![4, 6]]), vec![2, 10]);
    }
}
