mod common;

use common::*;
use knotgroup::alexander::*;
use knotgroup::constructors::*;
use knotgroup::{GeneratorId, Presentation, Word};
use num_bigint::BigInt;
use proptest::prelude::*;

const ODD_PRIMES: [u64; 5] = [3, 5, 7, 11, 13];

fn catalog() -> Vec<(String, Presentation)> {
    let cat = Catalog::builtin();
    cat.names()
        .map(|n| (n.to_string(), cat.presentation(n).unwrap()))
        .collect()
}

fn knot(name: &str) -> Presentation {
    Catalog::builtin().presentation(name).unwrap()
}

fn two_knots() -> Vec<(String, Presentation)> {
    let mut out = Vec::new();
    for (name, p) in catalog() {
        for n in 0..=5 {
            out.push((format!("tspin({name},{n})"), twist_spin(&p, n)));
        }
    }
    out
}

#[test]
fn classical_determinants_match_coloring_counts() {
    assert_eq!(count_colorings(&knot("3_1"), 3), 9);
    assert_eq!(determinant(&knot("3_1")).unwrap(), 3);
    assert_eq!(count_colorings(&knot("T(2,5)"), 5), 25);
    assert_eq!(determinant(&knot("T(2,5)")).unwrap(), 5);
    assert_eq!(count_colorings(&knot("T(2,7)"), 7), 49);
    assert_eq!(determinant(&knot("T(2,7)")).unwrap(), 7);
    assert_eq!(determinant(&Presentation::unknot()).unwrap(), 1);
}

#[test]
fn determinant_agrees_with_minor_oracle() {
    for (name, p) in catalog().into_iter().chain(two_knots()) {
        let d = determinant(&p).unwrap();
        assert_eq!(d, determinant_oracle(&p), "{name}");
        assert_eq!(d, determinant_from_minors(&p).unwrap(), "{name}");
    }
}

#[test]
fn determinant_is_odd_and_positive() {
    for (name, p) in catalog().into_iter().chain(two_knots()) {
        let d = determinant(&p).unwrap();
        assert!(d > 0 && d % 2 == 1, "{name}: {d}");
    }
}

#[test]
fn coloring_dimension_detects_prime_divisors() {
    for (name, p) in catalog().into_iter().chain(two_knots()) {
        let det = determinant(&p).unwrap();
        let small = p.simplified();
        for q in ODD_PRIMES {
            let dim = coloring_space(&p, q).unwrap().dimension;
            assert_eq!(
                count_colorings(&small, q),
                q.pow(dim as u32),
                "{name} at {q}"
            );
            assert_eq!(dim >= 2, divides(q, det), "{name} at {q}");
            assert_eq!(
                dihedral_surjection(&p, q).unwrap().is_some(),
                divides(q, det),
                "{name} at {q}"
            );
        }
    }
}

#[test]
fn surjections_kill_every_relator() {
    for (name, p) in catalog() {
        for q in ODD_PRIMES {
            if let Some(c) = dihedral_surjection(&p, q).unwrap() {
                assert_eq!(c.colors[p.distinguished().index()], 0);
                for r in p.relators() {
                    assert_eq!(c.evaluate(r), Affine::IDENTITY, "{name} at {q}");
                }
            }
        }
    }
}

#[test]
fn determinant_is_multiplicative_under_sums() {
    let names = ["unknot", "3_1", "4_1", "5_1", "5_2", "T(2,7)"];
    for a in names {
        for b in names {
            let (pa, pb) = (knot(a), knot(b));
            let s = connected_sum(&pa, &pb);
            let (da, db) = (determinant(&pa).unwrap(), determinant(&pb).unwrap());
            assert_eq!(determinant(&s).unwrap(), da * db, "{a}#{b}");
            // Colorings of a sum agree on the shared meridian.
            let small = s.simplified();
            for q in odd_prime_factors(da * db) {
                let expect =
                    count_colorings(&pa.simplified(), q) * count_colorings(&pb.simplified(), q) / q;
                assert_eq!(count_colorings(&small, q), expect, "{a}#{b} at {q}");
            }
        }
    }
    let s = connected_sum(&knot("3_1"), &knot("5_1"));
    assert_eq!(determinant(&s).unwrap(), 15);
    assert_eq!(count_colorings(&s.simplified(), 3), 9);
    assert_eq!(count_colorings(&s.simplified(), 5), 25);
}

#[test]
fn nakanishi_rank_matches_coloring_dimension() {
    for (name, p) in catalog().into_iter().chain(two_knots()) {
        for q in ODD_PRIMES {
            let dim = coloring_space(&p, q).unwrap().dimension;
            assert_eq!(
                nakanishi_lower_bound(&p, q).unwrap(),
                dim - 1,
                "{name} at {q}"
            );
        }
    }
}

#[test]
fn fox_derivatives_match_recursive_oracle() {
    for (name, p) in catalog().into_iter().chain(two_knots()) {
        for r in p.relators() {
            let letters = raw_letters(r);
            for g in 0..p.gen_count() {
                let lib: Ring = fox_derivative(r, GeneratorId(g as u32))
                    .terms()
                    .map(|(w, c)| (raw_letters(w), c))
                    .collect();
                assert_eq!(
                    lib,
                    fox_recursive(&letters, g as u32),
                    "{name}: {r} by x{g}"
                );
            }
        }
        assert_eq!(
            alexander_matrix_at_minus_one(&p).unwrap(),
            fox_matrix_at_minus_one(&p),
            "{name}"
        );
    }
}

#[test]
fn hand_computed_derivatives() {
    let w = |s: &str| s.parse::<Word>().unwrap();
    let d = fox_derivative(&w("x0.x1.x0^-1.x1^-1"), GeneratorId(0));
    let mut expect = GroupRingElement::one();
    expect.add_term(w("x0.x1.x0^-1"), -1);
    assert_eq!(d, expect);
}

#[test]
fn fundamental_identity_on_catalog_relators() {
    for (name, p) in catalog().into_iter().chain(two_knots()) {
        for r in p.relators() {
            let mut sum = GroupRingElement::zero();
            for g in 0..p.gen_count() {
                let mut gm1 = GroupRingElement::word(Word::gen(g));
                gm1.add_term(Word::identity(), -1);
                sum = &sum + &(&fox_derivative(r, GeneratorId(g as u32)) * &gm1);
            }
            let mut rm1 = GroupRingElement::word(r.clone());
            rm1.add_term(Word::identity(), -1);
            assert_eq!(sum, rm1, "{name}: {r}");
            assert!(sum.abelianize().is_zero(), "{name}: {r}");
        }
    }
}

#[test]
fn abelianizations_match_invariant_factor_oracle() {
    let mut cases: Vec<(String, Presentation)> = catalog().into_iter().chain(two_knots()).collect();
    cases.push(("D(3,3)".into(), dihedral_product_group(3, 3).unwrap()));
    cases.push(("D(3,5)".into(), dihedral_product_group(3, 5).unwrap()));
    for (name, p) in cases {
        let m = p.exponent_matrix();
        assert_eq!(
            abelianization_invariants(&p),
            invariant_factors_oracle(&m, p.gen_count()),
            "{name}"
        );
    }
    assert_eq!(
        abelianization_invariants(&dihedral_product_group(3, 3).unwrap()),
        vec![2]
    );
    assert_eq!(
        abelianization_invariants(&dihedral_product_group(3, 5).unwrap()),
        vec![2]
    );
}

fn word_strategy(gens: u32, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..gens, prop::bool::ANY), 0..=max_len).prop_map(|ls| {
        Word::reduce(
            ls.into_iter()
                .map(|(g, inv)| (GeneratorId(g), if inv { -1 } else { 1 })),
        )
    })
}

fn snf_i64(m: &[Vec<i64>]) -> Vec<BigInt> {
    smith_normal_form_i64(m)
}

/// Applies `rows[i] += k·rows[j]` style moves to a matrix.
fn scramble(m: &mut [Vec<i64>], ops: &[(bool, usize, usize, i64)]) {
    let rows = m.len();
    let cols = m[0].len();
    for &(on_rows, i, j, k) in ops {
        if on_rows {
            let (i, j) = (i % rows, j % rows);
            if i != j {
                for c in 0..cols {
                    m[i][c] += k * m[j][c];
                }
            }
        } else {
            let (i, j) = (i % cols, j % cols);
            if i != j {
                for r in m.iter_mut() {
                    r[i] += k * r[j];
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn fox_product_rule(u in word_strategy(3, 8), v in word_strategy(3, 8)) {
        for g in 0..3u32 {
            let g = GeneratorId(g);
            let lhs = fox_derivative(&(&u * &v), g);
            let rhs = &fox_derivative(&u, g) + &(&GroupRingElement::word(u.clone()) * &fox_derivative(&v, g));
            prop_assert_eq!(&lhs, &rhs);
            let oracle: Ring = lhs.terms().map(|(w, c)| (raw_letters(w), c)).collect();
            prop_assert_eq!(oracle, fox_recursive(&raw_letters(&(&u * &v)), g.0));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_form_is_unimodular_invariant(
        entries in prop::collection::vec(-6i64..=6, 9),
        ops in prop::collection::vec((prop::bool::ANY, 0usize..3, 0usize..3, -2i64..=2), 0..12),
    ) {
        let m: Vec<Vec<i64>> = entries.chunks(3).map(<[i64]>::to_vec).collect();
        let mut s = m.clone();
        scramble(&mut s, &ops);
        prop_assert_eq!(snf_i64(&m), snf_i64(&s));
        let oracle: Vec<BigInt> = {
            let f = invariant_factors_oracle(&m, 3);
            let nonzero: Vec<u64> = f.into_iter().filter(|&d| d != 0).collect();
            let rank = (1..=3).take_while(|&k| minors_gcd(&m, 3, k) != 0).count();
            let ones = rank - nonzero.len();
            std::iter::repeat_n(BigInt::from(1), ones).chain(nonzero.into_iter().map(BigInt::from)).collect()
        };
        prop_assert_eq!(snf_i64(&m), oracle);
    }

    #[test]
    fn laurent_text_round_trips(coeffs in prop::collection::vec(-5i64..=5, 0..6), shift in -3i64..=3) {
        let mut p = LaurentPoly::zero();
        for (e, &c) in coeffs.iter().enumerate() {
            p.add_term(c.into(), e as i64 + shift);
        }
        let text = p.to_string();
        prop_assert_eq!(text.parse::<LaurentPoly>().unwrap(), p);
    }
}
