//! Fox calculus, Alexander matrices, determinants and colorings.

pub mod coloring;
pub mod fox;
pub mod laurent;
pub mod modp;
pub mod smith;

pub use coloring::{
    coloring_space, dihedral_surjection, nakanishi_lower_bound, Affine, ColoringSpace,
    DihedralColoring,
};
pub use fox::{
    alexander_matrix, alexander_matrix_at_minus_one, fox_derivative, fox_derivative_abelian,
    GroupRingElement,
};
pub use laurent::{LaurentMatrix, LaurentPoly};
pub use smith::{smith_normal_form, smith_normal_form_i64};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::presentation::Presentation;

pub fn is_odd_prime(n: u64) -> bool {
    n >= 3
        && n % 2 == 1
        && (3..)
            .step_by(2)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

/// Odd prime divisors in increasing order.
pub fn odd_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while n > 0 && n.is_multiple_of(2) {
        n /= 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 2;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Gcd of the `(n−1)`-minors of the Alexander matrix at `t = −1`.
///
/// The gcd of all `k`-minors of an integer matrix is the product of its first
/// `k` invariant factors, so this reads the value off the Smith form of
/// `A(−1)`. Returns 0 when every such minor vanishes.
pub fn determinant(p: &Presentation) -> Result<u64> {
    let a = alexander_matrix_at_minus_one(p)?;
    let k = p.gen_count() - 1;
    let d = smith_normal_form_i64(&a);
    if d.len() < k {
        return Ok(0);
    }
    let prod: BigInt = d.iter().take(k).product();
    prod.to_u64()
        .ok_or_else(|| Error::Malformed(format!("determinant {prod} overflows")))
}

/// The same quantity computed from Laurent minors; exponential in the
/// matrix size, meant for small presentations and cross-checks.
pub fn determinant_from_minors(p: &Presentation) -> Result<u64> {
    let m = alexander_matrix(p)?;
    let k = p.gen_count() - 1;
    if k == 0 {
        return Ok(1);
    }
    let g = m
        .minors(k)
        .iter()
        .map(LaurentPoly::eval_at_minus_one)
        .fold(BigInt::zero(), |g, v| g.gcd(&v));
    g.abs()
        .to_u64()
        .ok_or_else(|| Error::Malformed("determinant overflows".into()))
}

/// Abelianization as invariant factors: torsion divisors above 1 followed by
/// one 0 per free summand. `ℤ` is `[0]`.
pub fn abelianization_invariants(p: &Presentation) -> Vec<u64> {
    let d = smith_normal_form_i64(&p.exponent_matrix());
    let mut out: Vec<u64> = d
        .iter()
        .filter(|v| !v.is_one())
        .map(|v| v.to_u64().expect("torsion fits"))
        .collect();
    out.extend(std::iter::repeat_n(0, p.gen_count() - d.len()));
    out
}

pub fn is_abelianization_z(p: &Presentation) -> bool {
    abelianization_invariants(p) == [0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert!(is_odd_prime(3) && is_odd_prime(13) && is_odd_prime(31));
        assert!(!is_odd_prime(2) && !is_odd_prime(9) && !is_odd_prime(1) && !is_odd_prime(0));
        assert_eq!(odd_prime_factors(45), vec![3, 5]);
        assert_eq!(odd_prime_factors(1), Vec::<u64>::new());
        assert_eq!(odd_prime_factors(0), Vec::<u64>::new());
    }

    #[test]
    fn unknot_invariants() {
        let u = Presentation::unknot();
        assert_eq!(determinant(&u).unwrap(), 1);
        assert_eq!(determinant_from_minors(&u).unwrap(), 1);
        assert_eq!(abelianization_invariants(&u), vec![0]);
        assert_eq!(alexander_matrix(&u).unwrap().rows(), 0);
    }
}
