mod common;

use common::{count_colorings, invariant_factors_oracle};
use knotgroup::alexander::{abelianization_invariants, determinant};
use knotgroup::certify::{certify_infinite_cyclic, Budget};
use knotgroup::constructors::*;
use knotgroup::{GeneratorId, Presentation, Word};
use proptest::prelude::*;

fn knot(name: &str) -> Presentation {
    Catalog::builtin().presentation(name).unwrap()
}

fn word_strategy(gens: u32, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..gens, prop::bool::ANY), 0..=max_len).prop_map(|ls| {
        Word::reduce(
            ls.into_iter()
                .map(|(g, inv)| (GeneratorId(g), if inv { -1 } else { 1 })),
        )
    })
}

fn assert_knot_group(name: &str, p: &Presentation) {
    p.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
    assert!(p.is_all_meridian(), "{name}");
    assert_eq!(abelianization_invariants(p), vec![0], "{name}");
    assert_eq!(
        invariant_factors_oracle(&p.exponent_matrix(), p.gen_count()),
        vec![0],
        "{name}"
    );
    let s = p.simplified();
    s.validate()
        .unwrap_or_else(|e| panic!("{name} simplified: {e}"));
    assert!(s.is_all_meridian(), "{name}");
    assert_eq!(abelianization_invariants(&s), vec![0], "{name}");
}

#[test]
fn every_constructor_yields_a_valid_knot_group() {
    let cat = Catalog::builtin();
    for (name, entry) in cat.entries() {
        let p = entry.presentation().unwrap();
        assert_knot_group(name, &p);
        assert_knot_group(&format!("spin({name})"), &spin(&p));
        for n in 1..=5 {
            assert_knot_group(&format!("tspin({name},{n})"), &twist_spin(&p, n));
        }
        for other in ["3_1", "4_1"] {
            assert_knot_group(&format!("{name}#{other}"), &connected_sum(&p, &knot(other)));
        }
    }
    let sum = connected_sum_all(&[knot("3_1"), twist_spin(&knot("5_1"), 2), knot("4_1")]).unwrap();
    assert_knot_group("triple sum", &sum);
    assert!(connected_sum_all(&[]).is_err());
}

#[test]
fn braid_closures() {
    let unknot = wirtinger_from_braid(&BraidWord::new(vec![], 1).unwrap()).unwrap();
    assert_eq!(unknot.gen_count(), 1);
    assert!(unknot.relators().is_empty());
    let trefoil = wirtinger_from_braid(&BraidWord::new(vec![1, 1, 1], 2).unwrap()).unwrap();
    assert_eq!(abelianization_invariants(&trefoil), vec![0]);
    assert_eq!(count_colorings(&trefoil, 3), 9);
    assert_eq!(determinant(&trefoil).unwrap(), 3);
    let t25 = wirtinger_from_braid(&BraidWord::new(vec![1; 5], 2).unwrap()).unwrap();
    assert_eq!(count_colorings(&t25, 5), 25);
    assert_eq!(determinant(&t25).unwrap(), 5);
    assert!(BraidWord::new(vec![1, 1], 2)
        .and_then(|b| wirtinger_from_braid(&b))
        .is_err());
    assert!(BraidWord::new(vec![3], 2).is_err());
}

#[test]
fn two_bridge_plats_match_braid_entries() {
    // Even continued fractions [2, 2] and [2, -2] give determinants 5 and 3.
    for (params, det) in [(vec![2i64, 2], 5u64), (vec![2, -2], 3)] {
        let p = PlatWord::two_bridge(&params).unwrap().wirtinger().unwrap();
        assert_knot_group(&format!("{params:?}"), &p);
        assert_eq!(determinant(&p).unwrap(), det, "{params:?}");
        assert_eq!(
            count_colorings(&p.simplified(), det),
            det * det,
            "{params:?}"
        );
    }
    assert!(PlatWord::two_bridge(&[3]).is_err());
}

#[test]
fn connected_sum_with_unknot_is_the_unit() {
    let b = Budget::default();
    for name in ["3_1", "4_1", "5_2"] {
        let p = knot(name);
        let s = connected_sum(&Presentation::unknot(), &p);
        assert_eq!(determinant(&s).unwrap(), determinant(&p).unwrap());
        for q in [3, 5, 7] {
            assert_eq!(
                count_colorings(&s.simplified(), q),
                count_colorings(&p.simplified(), q),
                "{name} at {q}"
            );
        }
        // The unknot's meridian is identified with p's, so p's relators
        // present the sum after eliminating it.
        assert_eq!(
            s.simplified().gen_count(),
            p.simplified().gen_count(),
            "{name}"
        );
    }
    let u = connected_sum(&Presentation::unknot(), &Presentation::unknot());
    assert!(certify_infinite_cyclic(&u, &b).is_some());
    assert_eq!(
        abelianization_invariants(&connected_sum(&knot("3_1"), &knot("3_1"))),
        vec![0]
    );
}

#[test]
fn twist_spin_zero_and_spin() {
    for (name, entry) in Catalog::builtin().entries() {
        let p = entry.presentation().unwrap();
        assert_eq!(twist_spin(&p, 0), p, "{name}");
        assert_eq!(spin(&p), p, "{name}");
        for n in 1..=4 {
            let t = twist_spin(&p, n);
            assert_eq!(twist_spin(&t, 0), t, "{name}");
            // One centrality relator per generator is added before deduplication.
            assert!(
                t.relators().len() <= p.relators().len() + p.gen_count(),
                "{name}"
            );
        }
    }
}

#[test]
fn ribbon_presentations() {
    let b = Budget::default();
    let r0 = ribbon_presentation(0, &[]).unwrap();
    assert_eq!(r0.gen_count(), 1);
    assert!(r0.relators().is_empty());
    assert!(ribbon_presentation(2, &[Word::identity()]).is_err());
    for n in 1..=3 {
        let trivial = ribbon_presentation(n, &vec![Word::identity(); n]).unwrap();
        assert_knot_group("trivial ribbon", &trivial);
        assert!(certify_infinite_cyclic(&trivial, &b).is_some(), "{n}");
    }
}

/// Adding the trivial-arc stabilizations `m_j = m_{j+1}` to any ribbon
/// presentation leaves a group generated by one meridian.
#[test]
fn trivial_stabilizations_unknot_ribbons() {
    let b = Budget::default();
    let conjugators: Vec<Vec<Word>> = vec![
        vec!["x1.x0.x1^-1".parse().unwrap()],
        vec!["x1^-1.x2".parse().unwrap(), "x0.x2^2".parse().unwrap()],
        vec![
            "x2.x0^-1".parse().unwrap(),
            "x1".parse().unwrap(),
            "x3^-1.x0.x1".parse().unwrap(),
        ],
    ];
    for cs in conjugators {
        let n = cs.len();
        let mut p = ribbon_presentation(n, &cs).unwrap();
        assert_knot_group("ribbon", &p);
        for j in 0..n {
            p = add_stabilization_relation(
                &p,
                &Word::identity(),
                GeneratorId(j as u32),
                GeneratorId(j as u32 + 1),
            )
            .unwrap();
        }
        assert!(certify_infinite_cyclic(&p, &b).is_some(), "{cs:?}");
    }
}

#[test]
fn stabilization_and_finger_moves() {
    let b = Budget::default();
    let t = knot("3_1");
    let (x0, x1) = (GeneratorId(0), GeneratorId(1));
    assert_eq!(
        add_stabilization_relation(&t, &Word::identity(), x0, x0).unwrap(),
        t
    );
    assert_eq!(
        add_finger_move_relation(&t, &Word::identity(), x0, x0).unwrap(),
        t
    );
    let q = add_stabilization_relation(&t, &Word::identity(), x0, x1).unwrap();
    assert!(certify_infinite_cyclic(&q, &b).is_some());

    // Unlink of three components, stabilized between the first two, then the
    // third meridian made to commute with them: the quotient is ℤ ⊕ ℤ.
    let unlink = Presentation::all_meridian(3, []).unwrap();
    let s = add_stabilization_relation(&unlink, &Word::identity(), x0, x1).unwrap();
    let s = add_finger_move_relation(&s, &Word::identity(), GeneratorId(2), x0).unwrap();
    let s = add_finger_move_relation(&s, &Word::identity(), GeneratorId(2), x1).unwrap();
    assert_eq!(abelianization_invariants(&s), vec![0, 0]);
    let r = s.simplified();
    assert_eq!(r.gen_count(), 2);
    assert_eq!(r.relators().len(), 1);
    assert_eq!(r.relators()[0].len(), 4);

    let d = dihedral_product_group(3, 5).unwrap();
    assert!(add_stabilization_relation(&d, &Word::identity(), x0, x1).is_err());
}

#[test]
fn dihedral_product_identities() {
    let g = DihedralProduct::new(3, 5).unwrap();
    let e = DihedralProductElement::identity();
    let z = g.z();
    let a1 = g.a(Factor::One, 1);
    assert_eq!(g.multiply(&z, &z), e);
    assert_eq!(g.multiply(&g.multiply(&z, &a1), &z), g.a(Factor::One, 2));
    let p = dihedral_product_group(3, 5).unwrap();
    let assignment = [z.clone(), a1.clone(), g.a(Factor::Two, 1)];
    for r in p.relators() {
        assert!(
            evaluate_in_g(3, 5, r, &assignment).unwrap().is_identity(),
            "{r}"
        );
    }
    assert!(DihedralProduct::new(3, 4).is_err());
    assert!(nf_multiply(3, 3, &g.a(Factor::Two, 4), &e).is_err());
    assert_eq!(abelianization_invariants(&p), vec![2]);
    assert_eq!(
        abelianization_invariants(&dihedral_product_group(3, 3).unwrap()),
        vec![2]
    );
}

#[test]
fn normal_form_multiplication_is_a_monoid_with_inverses() {
    let g = DihedralProduct::new(3, 3).unwrap();
    let elems: Vec<DihedralProductElement> = g
        .alternating_words(2)
        .into_iter()
        .flat_map(|word| {
            [false, true].map(|z| DihedralProductElement {
                word: word.clone(),
                z,
            })
        })
        .collect();
    let e = DihedralProductElement::identity();
    for u in &elems {
        assert_eq!(nf_multiply(3, 3, &e, u).unwrap(), *u);
        assert_eq!(nf_multiply(3, 3, u, &e).unwrap(), *u);
        assert_eq!(g.multiply(u, &g.inverse(u)), e);
        assert_eq!(g.multiply(&g.inverse(u), u), e);
        for v in &elems {
            let uv = nf_multiply(3, 3, u, v).unwrap();
            g.check(&uv).unwrap();
            for w in &elems {
                assert_eq!(
                    nf_multiply(3, 3, &uv, w).unwrap(),
                    nf_multiply(3, 3, u, &nf_multiply(3, 3, v, w).unwrap()).unwrap()
                );
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn finger_move_is_stabilization_by_the_conjugated_meridian(g in word_strategy(2, 6)) {
        let t = knot("3_1");
        let x = GeneratorId(0);
        let xg = Word::gen(x).conjugate(&g);
        prop_assert_eq!(
            add_finger_move_relation(&t, &g, x, x).unwrap(),
            add_stabilization_relation(&t, &xg, x, x).unwrap()
        );
        // [x, x^g] = [x, [x, g]] as reduced words.
        let c = Word::commutator(&Word::gen(x), &g);
        prop_assert_eq!(finger_move_relator(&g, x, x), Word::commutator(&Word::gen(x), &c));
    }

    #[test]
    fn random_ribbons_are_knot_groups(
        cs in (1usize..=3).prop_flat_map(|n| prop::collection::vec(word_strategy(n as u32 + 1, 5), n)),
    ) {
        let p = ribbon_presentation(cs.len(), &cs).unwrap();
        p.validate().unwrap();
        prop_assert_eq!(abelianization_invariants(&p), vec![0]);
        prop_assert_eq!(abelianization_invariants(&p.simplified()), vec![0]);
    }
}
