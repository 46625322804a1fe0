//! The release checks: every verification routine run on the built-in corpus,
//! each with a wall-clock budget.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus;
use crate::envelope::{Envelope, HilbertSeries};
use crate::subalgebra_example;
use crate::freelie::{FreeLieAlgebra, Generator, LieElement};
use crate::graphalg::verify_graph_exactness;
use crate::homology::homology_table;
use crate::linalg::{kernel, rank, SparseMatrix};
use crate::onerelator::{decompose, verify_tower, DEFAULT_CAP};
use crate::presented::{parse_presentation, FreeVerdict, PresentedLieAlgebra};
use crate::raag::{self, all_graphs, find_induced_cycle, is_chordal, raag_presentation, verify_resolution, SimpleGraph};
use crate::scalars::FieldSpec;

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Criterion {
    pub id: &'static str,
    pub description: &'static str,
    pub checks_passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl Criterion {
    pub fn within_budget(&self) -> bool {
        self.elapsed <= self.budget
    }

    pub fn passed(&self) -> bool {
        self.checks_passed && self.within_budget()
    }
}

fn timed(id: &'static str, description: &'static str, budget_secs: u64, f: impl FnOnce() -> (bool, String)) -> Criterion {
    let start = Instant::now();
    let (checks_passed, detail) = f();
    Criterion { id, description, checks_passed, detail, elapsed: start.elapsed(), budget: Duration::from_secs(budget_secs) }
}

fn failed<E: std::fmt::Display>(e: E) -> (bool, String) {
    (false, format!("error: {e}"))
}

pub fn subalgebra_presentation() -> Criterion {
    timed("s-presentation", "H_1(S) = 4, H_2(S) = 2 by Hopf and CE, relator weights {2, 3}, N = 8 over Q", 10, || {
        match subalgebra_example::presentation_claims(8, FieldSpec::Rationals) {
            Ok(claims) => summarize(&claims),
            Err(e) => failed(e),
        }
    })
}

pub fn not_free_product() -> Criterion {
    timed("s-not-free-product", "H_2(M) + H_2(free on z, t) = 1 differs from H_2(S) = 2", 10, || {
        match subalgebra_example::not_free_product_witness(8, FieldSpec::Rationals) {
            Ok(claims) => summarize(&claims),
            Err(e) => failed(e),
        }
    })
}

pub fn quotient_separation() -> Criterion {
    timed("quotient-separation", "fingerprints of E, E~, E^ pairwise distinct over F_2, F_3, F_4", 5, || {
        match subalgebra_example::distinguish_quotients().and_then(|(mut c, _)| {
            c.extend(subalgebra_example::not_raag_witness()?);
            Ok(c)
        }) {
            Ok(claims) => summarize(&claims),
            Err(e) => failed(e),
        }
    })
}

fn summarize(claims: &[subalgebra_example::Claim]) -> (bool, String) {
    let bad: Vec<String> = claims.iter().filter(|c| !c.passed).map(|c| format!("{}: expected {}, got {}", c.id, c.expected, c.computed)).collect();
    if bad.is_empty() {
        (true, format!("{} claims hold", claims.len()))
    } else {
        (false, bad.join("; "))
    }
}

pub fn graph_exactness() -> Criterion {
    timed("graph-exactness", "Euler identity to 12 and explicit exactness to 8 on the graph corpus", 60, || {
        let mut ok = true;
        let mut notes = Vec::new();
        for src in corpus::GRAPHS {
            let res = src.build(FieldSpec::Rationals).and_then(|g| verify_graph_exactness(&g, 12, 8));
            let pass = res.as_ref().is_ok_and(|r| r.passed());
            ok &= pass;
            notes.push(format!("{}={}", src.name, if pass { "ok" } else { "FAIL" }));
        }
        (ok, notes.join(" "))
    })
}

pub fn base_cases() -> Criterion {
    timed("base-cases", "single amalgam and HNN edges give exact sequences through weight 10", 60, || {
        let mut ok = true;
        let mut notes = Vec::new();
        for src in corpus::AMALGAM_BASE_CASES.iter().chain(corpus::HNN_BASE_CASES) {
            let res = src.build(FieldSpec::Rationals).and_then(|g| verify_graph_exactness(&g, 10, 10));
            let pass = res.as_ref().is_ok_and(|r| r.passed());
            ok &= pass;
            notes.push(format!("{}={}", src.name, if pass { "ok" } else { "FAIL" }));
        }
        (ok, notes.join(" "))
    })
}

pub fn raag_resolutions() -> Criterion {
    timed("raag-resolution", "resolution exact through weight 10, clique identity to 12, on the graph corpus", 60, || {
        let mut ok = true;
        let mut notes = Vec::new();
        for (name, text) in corpus::RAAG_GRAPHS {
            let pass = raag::parse_graph(text)
                .map_err(|e| e.to_string())
                .and_then(|g| verify_resolution(&g, 10, 12, 6, FieldSpec::Rationals).map_err(|e| e.to_string()))
                .is_ok_and(|r| r.passed());
            ok &= pass;
            if !pass {
                notes.push(format!("{name} failed"));
            }
        }
        (ok, if ok { format!("{} graphs", corpus::RAAG_GRAPHS.len()) } else { notes.join("; ") })
    })
}

pub fn chordality() -> Criterion {
    timed("chordality", "certified chordality verdicts agree with induced-cycle search on all graphs with at most 5 vertices", 30, || {
        let named = [
            ("C4", SimpleGraph::cycle(4), false),
            ("C5", SimpleGraph::cycle(5), false),
            ("P5", SimpleGraph::path(5), true),
            ("star", SimpleGraph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]), true),
            ("K4-e", SimpleGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]), true),
        ];
        let mut ok = named.iter().all(|(_, g, expect)| {
            let v = is_chordal(g);
            v.chordal == *expect && v.validate(g)
        });
        let mut total = 0usize;
        for n in 1..=5 {
            for g in all_graphs(n) {
                let v = is_chordal(&g);
                ok &= v.validate(&g) && v.chordal == find_induced_cycle(&g).is_none();
                total += 1;
            }
        }
        (ok, format!("{total} labelled graphs and {} named cases", named.len()))
    })
}

pub fn one_relator_towers() -> Criterion {
    timed("one-relator-towers", "towers verify and rebuild the dimensions to 10, free witnesses and minimal exponents", 120, || {
        let mut ok = true;
        let mut notes = Vec::new();
        for (name, text) in corpus::ONE_RELATOR {
            let pass = parse_presentation(text, Some(FieldSpec::Rationals))
                .map_err(|e| e.to_string())
                .and_then(|p| {
                    let t = decompose(&p, 10, DEFAULT_CAP).map_err(|e| e.to_string())?;
                    let r = verify_tower(&t, &p, 10).map_err(|e| e.to_string())?;
                    Ok(r.passed()
                        && r.rebuilt_dims == r.source_dims
                        && r.base_free == FreeVerdict::FreeWitnessed
                        && r.layers.iter().all(|l| l.associated_free && l.minimal && l.leibniz))
                })
                .unwrap_or(false);
            ok &= pass;
            notes.push(format!("{name}={}", if pass { "ok" } else { "FAIL" }));
        }
        (ok, notes.join(" "))
    })
}

/// Witt's necklace formula for the free Lie algebra of the given rank.
pub fn witt_dimension(rank: u64, n: u32) -> u64 {
    let mobius = |mut m: u32| {
        let mut sign = 1i64;
        let mut k = 2;
        while k * k <= m {
            if m.is_multiple_of(k) {
                m /= k;
                if m.is_multiple_of(k) {
                    return 0;
                }
                sign = -sign;
            }
            k += 1;
        }
        if m > 1 {
            -sign
        } else {
            sign
        }
    };
    let s: i64 = (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| mobius(n / d) * (rank as i64).pow(d)).sum();
    (s / n as i64) as u64
}

fn random_element(alg: &Arc<FreeLieAlgebra>, rng: &mut ChaCha8Rng) -> LieElement {
    let f = alg.field();
    let terms: Vec<_> = (0..rng.gen_range(0..5))
        .map(|_| {
            let basis = alg.basis(rng.gen_range(1..=4));
            (basis[rng.gen_range(0..basis.len())], f.from_i64(rng.gen_range(-5..=5)))
        })
        .collect();
    LieElement::from_terms(alg, terms)
}

/// The PBW test algebras.
pub const PBW_ALGEBRAS: &[&str] = &[
    "gen x weight 1\ngen y weight 1\n",
    "gen x weight 1\ngen y weight 1\nrel [x,[x,y]]\nrel [y,[y,x]]\n",
    "gen x weight 1\ngen y weight 1\nrel [x,[x,y]]\n",
    "gen x weight 1\ngen y weight 2\nrel [x,[x,y]]\n",
    "gen a weight 1\ngen b weight 1\ngen c weight 1\nrel [a,b]\nrel [b,c]\nrel [a,c]\n",
];

/// Every algebra of the built-in corpus with a weight bound for the CE comparison.
pub fn corpus_algebras(field: FieldSpec) -> Vec<(String, Arc<PresentedLieAlgebra>, u32)> {
    let mut out = Vec::new();
    for (name, t) in corpus::ONE_RELATOR {
        if let Ok(p) = parse_presentation(t, Some(field)) {
            out.push((name.to_string(), p, 7));
        }
    }
    for (name, t) in corpus::RAAG_GRAPHS {
        if let Ok(p) = raag::parse_graph(t).map_err(|e| e.to_string()).and_then(|g| raag_presentation(&g, field).map_err(|e| e.to_string())) {
            out.push((format!("raag {name}"), p, 5));
        }
    }
    for src in corpus::GRAPHS.iter().chain(corpus::AMALGAM_BASE_CASES).chain(corpus::HNN_BASE_CASES) {
        if let Ok(g) = src.build(field) {
            for v in g.vertices() {
                out.push((format!("{} {}", src.name, v.id), v.algebra.clone(), 6));
            }
        }
    }
    for (name, t) in [("S", subalgebra_example::S_PRESENTATION), ("E", subalgebra_example::E), ("E~", subalgebra_example::E_TILDE), ("E^", subalgebra_example::E_HAT)] {
        if let Ok(p) = parse_presentation(t, Some(field)) {
            out.push((name.to_string(), p, 6));
        }
    }
    out
}

pub fn property_suites(seed: u64) -> Criterion {
    timed("property-suites", "Jacobi and antisymmetry on 500 samples, Witt to 10, PBW to 10, Hopf = CE, rank-nullity on 200 matrices", 120, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut notes = Vec::new();
        let q = FieldSpec::Rationals;
        let alg = FreeLieAlgebra::new(vec![Generator::new("x", 1), Generator::new("y", 1), Generator::new("z", 2)], q).expect("generators");
        let lie = (0..500).all(|_| {
            let (a, b, c) = (random_element(&alg, &mut rng), random_element(&alg, &mut rng), random_element(&alg, &mut rng));
            let jacobi = a.bracket(&b.bracket(&c)).add(&b.bracket(&c.bracket(&a))).add(&c.bracket(&a.bracket(&b)));
            jacobi.is_zero() && a.bracket(&b).add(&b.bracket(&a)).is_zero()
        });
        notes.push(format!("jacobi={lie}"));
        let witt = [2usize, 3].iter().all(|&r| {
            let names: Vec<String> = (0..r).map(|i| format!("x{i}")).collect();
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            let f = FreeLieAlgebra::on_names(&refs, q).expect("generators");
            (1..=10).all(|n| f.dim(n) as u64 == witt_dimension(r as u64, n))
        });
        notes.push(format!("witt={witt}"));
        let fp = FieldSpec::prime(101).expect("prime");
        let pbw = PBW_ALGEBRAS.iter().all(|t| {
            let Ok(p) = parse_presentation(t, Some(fp)) else { return false };
            let env = Envelope::new(&p, 10);
            let series = HilbertSeries::pbw_product(&p.dim_sequence(10), 10);
            (0..=10).all(|n| *series.coeff(n) == env.dim(n).into())
        });
        notes.push(format!("pbw={pbw}"));
        let algebras = corpus_algebras(fp);
        let hopf = algebras.iter().all(|(_, p, max)| {
            let ce = homology_table(p, 2, *max);
            p.h2_hopf(*max).iter().enumerate().all(|(i, &d)| d == ce.get(2, i as i64 + 1))
        });
        notes.push(format!("hopf-ce={hopf} on {}", algebras.len()));
        let rn = (0..200).all(|_| {
            let field = [q, FieldSpec::prime(2).expect("prime"), FieldSpec::prime(5).expect("prime")][rng.gen_range(0..3)];
            let (rows, cols) = (rng.gen_range(1..12), rng.gen_range(1..12));
            let mut dense = vec![vec![0i64; cols]; rows];
            for _ in 0..rng.gen_range(0..40) {
                dense[rng.gen_range(0..rows)][rng.gen_range(0..cols)] = rng.gen_range(-3..=3);
            }
            let m = SparseMatrix::from_dense_i64(field, &dense);
            let k = kernel(&m);
            rank(&m) + k.dim() == cols && k.basis().iter().all(|v| m.mul_vec(v).is_zero())
        });
        notes.push(format!("rank-nullity={rn}"));
        (lie && witt && pbw && hopf && rn, notes.join(" "))
    })
}

/// All criteria in a fixed order.
pub fn run_all(seed: u64) -> Vec<Criterion> {
    vec![
        subalgebra_presentation(),
        not_free_product(),
        quotient_separation(),
        graph_exactness(),
        base_cases(),
        raag_resolutions(),
        chordality(),
        one_relator_towers(),
        property_suites(seed),
    ]
}
