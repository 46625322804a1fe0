use std::sync::Arc;

use gradedlie::freelie::{FreeLieAlgebra, LieElement};
use gradedlie::graphalg::free_product;
use gradedlie::homology::{ce_complex, homology_table};
use gradedlie::linalg::{intersect, SparseVec, Subspace};
use gradedlie::presented::{parse_presentation, GradedSubalgebra, PresentedLieAlgebra};
use gradedlie::raag::{graphs_up_to_isomorphism, raag_presentation};
use gradedlie::scalars::{FieldSpec, Scalar};
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

fn fp() -> FieldSpec {
    FieldSpec::prime(101).unwrap()
}

fn scalar(field: FieldSpec, (n, d): (i64, i64)) -> Scalar {
    field.from_ratio(&BigInt::from(n), &BigInt::from(d)).unwrap()
}

fn ratio() -> impl Strategy<Value = (i64, i64)> {
    (any::<i64>(), 1i64..i64::MAX)
}

fn normalized(s: &Scalar) -> bool {
    let (n, d) = s.as_ratio();
    d > BigInt::from(0) && n.gcd(&d) == BigInt::from(1) || n == BigInt::from(0) && d == BigInt::from(1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn rational_field_axioms(a in ratio(), b in ratio(), c in ratio()) {
        let q = FieldSpec::Rationals;
        let (a, b, c) = (scalar(q, a), scalar(q, b), scalar(q, c));
        let ab_c = a.try_add(&b).unwrap().try_add(&c).unwrap();
        prop_assert_eq!(&ab_c, &a.try_add(&b.try_add(&c).unwrap()).unwrap());
        prop_assert_eq!(a.try_mul(&b).unwrap().try_mul(&c).unwrap(), a.try_mul(&b.try_mul(&c).unwrap()).unwrap());
        let dist = a.try_mul(&b.try_add(&c).unwrap()).unwrap();
        prop_assert_eq!(&dist, &a.try_mul(&b).unwrap().try_add(&a.try_mul(&c).unwrap()).unwrap());
        for s in [&ab_c, &dist, &a.try_sub(&b).unwrap()] {
            prop_assert!(normalized(s));
        }
        if !a.is_zero() {
            prop_assert!(a.try_mul(&a.inv().unwrap()).unwrap().is_one());
        }
        prop_assert!(a.try_add(&a.neg_ref()).unwrap().is_zero());
    }

    #[test]
    fn prime_field_axioms(a in 0i64..1000, b in 0i64..1000, c in 0i64..1000, p in prop::sample::select(vec![2u64, 3, 7, 101, 65521])) {
        let f = FieldSpec::prime(p).unwrap();
        let (a, b, c) = (f.from_i64(a), f.from_i64(b), f.from_i64(c));
        prop_assert_eq!(a.try_mul(&b.try_add(&c).unwrap()).unwrap(), a.try_mul(&b).unwrap().try_add(&a.try_mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.try_add(&b).unwrap().try_add(&c).unwrap(), a.try_add(&b.try_add(&c).unwrap()).unwrap());
        if !a.is_zero() {
            prop_assert!(a.try_mul(&a.inv().unwrap()).unwrap().is_one());
        }
    }

    #[test]
    fn subspace_dimension_formula(
        a in prop::collection::vec(prop::collection::vec(-2i64..=2, 7), 0..6),
        b in prop::collection::vec(prop::collection::vec(-2i64..=2, 7), 0..6),
        rational in any::<bool>(),
    ) {
        let f = if rational { FieldSpec::Rationals } else { FieldSpec::prime(3).unwrap() };
        let vecs = |rows: &[Vec<i64>]| -> Vec<SparseVec> {
            rows.iter().map(|r| SparseVec::from_entries(r.iter().enumerate().map(|(i, &x)| (i, f.from_i64(x))))).collect()
        };
        let (va, vb) = (vecs(&a), vecs(&b));
        let sa = Subspace::from_vectors(7, f, va.iter());
        let sb = Subspace::from_vectors(7, f, vb.iter());
        let meet = intersect(&sa, &sb).unwrap();
        let join = sa.sum(&sb).unwrap();
        prop_assert_eq!(meet.dim() + join.dim(), sa.dim() + sb.dim());
        prop_assert!(meet.is_subspace_of(&sa) && meet.is_subspace_of(&sb));
        prop_assert_eq!(sa.canonicalize().canonicalize(), sa.canonicalize());
    }
}

/// Random homogeneous element of weight `w` in the free algebra.
fn homogeneous(alg: &Arc<FreeLieAlgebra>, w: u32, coeffs: &[i64]) -> LieElement {
    let f = alg.field();
    LieElement::from_terms(alg, alg.basis(w).into_iter().zip(coeffs.iter().chain(std::iter::repeat(&0))).map(|(m, &c)| (m, f.from_i64(c))))
}

fn relators() -> impl Strategy<Value = Vec<(u32, Vec<i64>)>> {
    prop::collection::vec((2u32..=4, prop::collection::vec(-2i64..=2, 3)), 0..3)
}

fn presentation(names: [&str; 2], rels: &[(u32, Vec<i64>)]) -> Arc<PresentedLieAlgebra> {
    let alg = FreeLieAlgebra::on_names(&names, fp()).unwrap();
    let rels = rels.iter().map(|(w, c)| homogeneous(&alg, *w, c)).filter(|r| !r.is_zero()).collect();
    PresentedLieAlgebra::new(&alg, rels).unwrap()
}

/// All left-normed brackets `[..[g1, g2], .., gk]` of weight `n`.
fn left_normed(alg: &Arc<FreeLieAlgebra>, n: u32) -> Vec<LieElement> {
    let gens: Vec<LieElement> = (0..alg.gens().len()).map(|g| LieElement::generator(alg, g)).collect();
    let mut by_weight: Vec<Vec<LieElement>> = vec![Vec::new(); n as usize + 1];
    for (g, e) in gens.iter().enumerate() {
        let w = alg.gens()[g].weight;
        if w <= n {
            by_weight[w as usize].push(e.clone());
        }
    }
    for w in 1..=n as usize {
        for i in 0..by_weight[w].len() {
            for (g, e) in gens.iter().enumerate() {
                let w2 = w + alg.gens()[g].weight as usize;
                if w2 <= n as usize {
                    let b = by_weight[w][i].bracket(e);
                    by_weight[w2].push(b);
                }
            }
        }
    }
    by_weight.swap_remove(n as usize)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn dims_match_left_normed_span(rels in relators()) {
        let p = presentation(["x", "y"], &rels);
        for n in 1..=6 {
            let images: Vec<SparseVec> = left_normed(p.free(), n).iter().filter(|e| !e.is_zero()).map(|e| p.project_homogeneous(e).unwrap().1).collect();
            prop_assert_eq!(Subspace::from_vectors(p.dim(n), fp(), images.iter()).dim(), p.dim(n));
        }
    }

    #[test]
    fn inferred_presentations_are_minimal(rels in relators(), picks in prop::collection::vec((1u32..=3, prop::collection::vec(-1i64..=1, 2)), 1..4)) {
        let p = presentation(["x", "y"], &rels);
        let gens: Vec<(String, LieElement)> = picks
            .iter()
            .enumerate()
            .map(|(i, (w, c))| (format!("s{i}"), homogeneous(p.free(), *w, c)))
            .filter(|(_, e)| !e.is_zero() && !p.project_homogeneous(e).unwrap().1.is_zero())
            .collect();
        prop_assume!(!gens.is_empty());
        let sub = GradedSubalgebra::new(&p, gens).unwrap();
        let inferred = sub.infer_presentation(6).unwrap();
        let q = &inferred.presentation;
        prop_assert_eq!(q.dim_sequence(6), sub.dim_sequence(6));
        prop_assert_eq!(q.gens().len(), q.h1(6).iter().sum::<usize>());
        let rels6 = q.relator_weights().iter().filter(|&&w| w <= 6).count();
        prop_assert_eq!(rels6, q.h2_hopf(6).iter().sum::<usize>());
    }

    #[test]
    fn second_homology_adds_over_free_products(a in relators(), b in relators()) {
        let (l1, l2) = (presentation(["x", "y"], &a), presentation(["u", "v"], &b));
        let l = free_product(&l1, &l2).unwrap();
        let (h, h1, h2) = (l.h2_hopf(5), l1.h2_hopf(5), l2.h2_hopf(5));
        for n in 0..5 {
            prop_assert_eq!(h[n], h1[n] + h2[n]);
        }
    }

    #[test]
    fn chevalley_eilenberg_complex(rels in relators()) {
        let p = presentation(["x", "y"], &rels);
        let c = ce_complex(&p, 5, 5);
        prop_assert!(c.check_d_squared().is_ok());
        let t = homology_table(&p, 5, 5);
        for n in 1..=5u32 {
            let euler: i64 = (0..=5).map(|i| if i % 2 == 0 { 1 } else { -1 } * t.get(i, n as i64) as i64).sum();
            prop_assert_eq!(c.euler_chain(n), euler);
        }
        prop_assert_eq!(&t.dims[1][1..], &p.h1(5)[..]);
        prop_assert_eq!(&t.dims[2][1..], &p.h2_hopf(5)[..]);
    }
}

#[test]
fn free_presentations_have_no_higher_homology() {
    for names in [&["x", "y"][..], &["a", "b", "c"]] {
        let p = PresentedLieAlgebra::new(&FreeLieAlgebra::on_names(names, fp()).unwrap(), Vec::new()).unwrap();
        assert!(p.h2_hopf(6).iter().all(|&d| d == 0));
        let t = homology_table(&p, 3, 5);
        assert_eq!(t.total(2) + t.total(3), 0);
    }
}

#[test]
fn raag_homology_counts_cliques() {
    for n in 1..=4 {
        for g in graphs_up_to_isomorphism(n) {
            let p = raag_presentation(&g, fp()).unwrap();
            let t = homology_table(&p, 3, 4);
            let cliques = g.cliques();
            for i in 1..=3usize {
                let expected = cliques.get(i).map_or(0, Vec::len);
                assert_eq!(t.get(i, i as i64), expected, "{g} H_{i}");
                assert_eq!(t.total(i), expected, "{g} H_{i} concentrated");
            }
        }
    }
}

#[test]
fn one_relator_second_homology_is_one() {
    for t in gradedlie::corpus::ONE_RELATOR.iter().map(|(_, t)| t).chain(&["gen x weight 2\ngen y weight 3\nrel [x,[x,y]] + [y,y]\n"]) {
        let p = parse_presentation(t, Some(fp())).unwrap();
        let f = p.free();
        if p.relators()[0].terms().keys().any(|&m| f.letters(m).len() == 1) {
            continue;
        }
        let w = p.relator_weights()[0];
        let h2 = p.h2_hopf(w + 2);
        assert_eq!(h2.iter().sum::<usize>(), 1, "{t}");
        assert_eq!(h2[w as usize - 1], 1, "{t}");
    }
}
