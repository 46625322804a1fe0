use std::sync::Arc;

use gradedlie::corpus;
use gradedlie::envelope::{Envelope, HilbertSeries};
use gradedlie::freelie::{FreeLieAlgebra, Generator, LieElement};
use gradedlie::homology::homology_table;
use gradedlie::linalg::{kernel, rank, SparseMatrix};
use gradedlie::presented::{parse_presentation, PresentedLieAlgebra};
use gradedlie::raag::{parse_graph, raag_presentation};
use gradedlie::scalars::FieldSpec;
use proptest::prelude::*;

fn free3() -> Arc<FreeLieAlgebra> {
    FreeLieAlgebra::new(vec![Generator::new("x", 1), Generator::new("y", 1), Generator::new("z", 2)], FieldSpec::Rationals).unwrap()
}

/// Random element with terms of weight at most 4 and small integer coefficients.
fn element(alg: &Arc<FreeLieAlgebra>, terms: &[(u32, usize, i64)]) -> LieElement {
    let f = alg.field();
    LieElement::from_terms(
        alg,
        terms.iter().map(|&(w, i, c)| {
            let basis = alg.basis(w);
            (basis[i % basis.len()], f.from_i64(c))
        }),
    )
}

fn terms() -> impl Strategy<Value = Vec<(u32, usize, i64)>> {
    prop::collection::vec((1u32..=4, 0usize..64, -5i64..=5), 0..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn jacobi_identity(a in terms(), b in terms(), c in terms()) {
        let alg = free3();
        let (x, y, z) = (element(&alg, &a), element(&alg, &b), element(&alg, &c));
        let j = x.bracket(&y.bracket(&z)).add(&y.bracket(&z.bracket(&x))).add(&z.bracket(&x.bracket(&y)));
        prop_assert!(j.is_zero());
    }

    #[test]
    fn antisymmetry(a in terms(), b in terms()) {
        let alg = free3();
        let (x, y) = (element(&alg, &a), element(&alg, &b));
        prop_assert!(x.bracket(&y).add(&y.bracket(&x)).is_zero());
        prop_assert!(x.bracket(&x).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rank_nullity(rows in 1usize..12, cols in 1usize..12, entries in prop::collection::vec((0usize..12, 0usize..12, -3i64..=3), 0..40), p in prop::sample::select(vec![0u64, 2, 5])) {
        let field = if p == 0 { FieldSpec::Rationals } else { FieldSpec::prime(p).unwrap() };
        let mut dense = vec![vec![0i64; cols]; rows];
        for (r, c, v) in entries {
            dense[r % rows][c % cols] = v;
        }
        let m = SparseMatrix::from_dense_i64(field, &dense);
        let k = kernel(&m);
        prop_assert_eq!(rank(&m) + k.dim(), cols);
        for v in k.basis() {
            prop_assert!(m.mul_vec(v).is_zero());
        }
    }
}

fn mobius(n: u32) -> i64 {
    let (mut n, mut k, mut sign) = (n, 2, 1);
    while k * k <= n {
        if n % k == 0 {
            n /= k;
            if n % k == 0 {
                return 0;
            }
            sign = -sign;
        }
        k += 1;
    }
    if n > 1 {
        -sign
    } else {
        sign
    }
}

fn witt(rank: i64, n: u32) -> usize {
    let s: i64 = (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| mobius(n / d) * rank.pow(d)).sum();
    (s / n as i64) as usize
}

#[test]
fn witt_dimensions_to_weight_ten() {
    for r in [2usize, 3] {
        let names: Vec<String> = (0..r).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let alg = FreeLieAlgebra::on_names(&refs, FieldSpec::Rationals).unwrap();
        for n in 1..=10 {
            assert_eq!(alg.dim(n), witt(r as i64, n), "rank {r} weight {n}");
        }
    }
}

#[test]
fn pbw_count_equals_hilbert_product() {
    let texts = [
        "gen x weight 1\ngen y weight 1\n",
        "gen x weight 1\ngen y weight 1\nrel [x,[x,y]]\nrel [y,[y,x]]\n",
        "gen x weight 1\ngen y weight 1\nrel [x,[x,y]]\n",
        "gen x weight 1\ngen y weight 2\nrel [x,[x,y]]\n",
        "gen a weight 1\ngen b weight 1\ngen c weight 1\nrel [a,b]\nrel [b,c]\nrel [a,c]\n",
    ];
    for t in texts {
        let p = parse_presentation(t, Some(FieldSpec::prime(101).unwrap())).unwrap();
        let env = Envelope::new(&p, 10);
        let pbw = HilbertSeries::pbw_product(&p.dim_sequence(10), 10);
        for n in 0..=10 {
            assert_eq!(*pbw.coeff(n), env.dim(n).into(), "{t} weight {n}");
        }
    }
}

fn hopf_equals_ce(p: &Arc<PresentedLieAlgebra>, max: u32) {
    let ce = homology_table(p, 2, max);
    let hopf = p.h2_hopf(max);
    for n in 1..=max {
        assert_eq!(hopf[n as usize - 1], ce.get(2, n as i64), "weight {n}\n{}", p.to_text());
    }
}

#[test]
fn hopf_formula_matches_chevalley_eilenberg() {
    let f = FieldSpec::prime(101).unwrap();
    for (_, t) in corpus::ONE_RELATOR {
        hopf_equals_ce(&parse_presentation(t, Some(f)).unwrap(), 7);
    }
    for (_, t) in corpus::RAAG_GRAPHS {
        hopf_equals_ce(&raag_presentation(&parse_graph(t).unwrap(), f).unwrap(), 5);
    }
    for src in corpus::GRAPHS.iter().chain(corpus::AMALGAM_BASE_CASES).chain(corpus::HNN_BASE_CASES) {
        for v in src.build(f).unwrap().vertices() {
            hopf_equals_ce(&v.algebra, 6);
        }
    }
    hopf_equals_ce(&parse_presentation(gradedlie::subalgebra_example::S_PRESENTATION, Some(f)).unwrap(), 6);
}

#[test]
fn raag_second_homology_counts_edges() {
    for (name, t) in corpus::RAAG_GRAPHS {
        let g = parse_graph(t).unwrap();
        let p = raag_presentation(&g, FieldSpec::Rationals).unwrap();
        assert_eq!(p.h2_hopf(4).iter().sum::<usize>(), g.edges().len(), "{name}");
        assert_eq!(p.h2_hopf(4)[1], g.edges().len(), "{name}");
    }
}

#[test]
fn one_relator_second_homology_at_relator_weight() {
    for (name, t) in corpus::ONE_RELATOR {
        let p = parse_presentation(t, Some(FieldSpec::Rationals)).unwrap();
        let w = p.relator_weights()[0];
        let f = p.free();
        let decomposable = p.relators()[0].terms().keys().all(|&m| f.letters(m).len() > 1);
        let h2 = p.h2_hopf(w + 2);
        for (i, &d) in h2.iter().enumerate() {
            assert_eq!(d, usize::from(decomposable && i as u32 + 1 == w), "{name} weight {}", i + 1);
        }
    }
}
