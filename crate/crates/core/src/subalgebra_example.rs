//! The subalgebra `S = <a, b, [x,a], [x,b]>` of `<a, b, x | [a,b]>` and its
//! invariants: minimal presentation, homology, the obstruction to splitting
//! off the abelian factor, and invariants separating the class-2 quotients of
//! `S` and of the two right-angled Artin algebras with the same homology.

use std::collections::HashMap;
use std::sync::Arc;

use crate::freelie::{FreeLieAlgebra, Generator, LieElement};
use crate::homology::homology_table;
use crate::presented::{parse_presentation, GradedSubalgebra, InferredPresentation, PresentedError, PresentedLieAlgebra};
use crate::raag::{graphs_up_to_isomorphism, raag_presentation, SimpleGraph};
use crate::scalars::{FieldSpec, Scalar};

/// `M * N` with `M = ka ⊕ kb` and `N = kx`.
pub const AMBIENT: &str = "gen a weight 1\ngen b weight 1\ngen x weight 1\nrel [a,b]\n";
/// The expected presentation of `S`.
pub const S_PRESENTATION: &str = "gen a weight 1\ngen b weight 1\ngen z weight 2\ngen t weight 2\nrel [a,b]\nrel [z,b] - [t,a]\n";
pub const E: &str = "gen x1 weight 1\ngen x2 weight 1\ngen x3 weight 1\ngen x4 weight 1\nrel [x1,x2]\nrel [x3,x2] + [x1,x4]\n";
pub const E_TILDE: &str = "gen x1 weight 1\ngen x2 weight 1\ngen x3 weight 1\ngen x4 weight 1\nrel [x1,x2]\nrel [x1,x3]\n";
pub const E_HAT: &str = "gen x1 weight 1\ngen x2 weight 1\ngen x3 weight 1\ngen x4 weight 1\nrel [x1,x2]\nrel [x4,x3]\n";

/// `L / γ_{c+1}(L)` for an algebra generated in weight 1, with its structure
/// constants on the quotient bases of weights `1..=c`.
#[derive(Debug)]
pub struct NilpotentQuotient {
    pub source: Arc<PresentedLieAlgebra>,
    pub class: u32,
    pub dims: Vec<usize>,
    structure: HashMap<((u32, usize), (u32, usize)), Vec<(usize, Scalar)>>,
}

impl NilpotentQuotient {
    pub fn new(source: &Arc<PresentedLieAlgebra>, class: u32) -> Result<Self, PresentedError> {
        if source.gens().iter().any(|g| g.weight != 1) {
            return Err(PresentedError::Inconclusive(1));
        }
        let f = source.field();
        let dims = source.dim_sequence(class);
        let mut structure = HashMap::new();
        for wa in 1..=class {
            for wb in wa..=class - wa {
                for i in 0..dims[wa as usize - 1] {
                    for j in 0..dims[wb as usize - 1] {
                        let h = source.bracket(&(wa, crate::linalg::SparseVec::unit(i, f)), &(wb, crate::linalg::SparseVec::unit(j, f)));
                        structure.insert(((wa, i), (wb, j)), h.1.entries().to_vec());
                    }
                }
            }
        }
        Ok(NilpotentQuotient { source: source.clone(), class, dims, structure })
    }

    /// `[e_i, e_j]` for basis elements of weights `a.0, b.0`; zero beyond the class.
    pub fn bracket(&self, a: (u32, usize), b: (u32, usize)) -> Vec<(usize, Scalar)> {
        if a.0 + b.0 > self.class {
            return Vec::new();
        }
        if a.0 <= b.0 {
            self.structure[&(a, b)].clone()
        } else {
            self.structure[&(b, a)].iter().map(|(k, c)| (*k, c.neg_ref())).collect()
        }
    }
}

/// Regrades every generator to weight 1; relators must be homogeneous in length.
pub fn length_graded(p: &Arc<PresentedLieAlgebra>) -> Result<Arc<PresentedLieAlgebra>, PresentedError> {
    let free = FreeLieAlgebra::new(p.gens().iter().map(|g| Generator::new(g.name.clone(), 1)).collect(), p.field())?;
    let rels = p.relators().iter().map(|r| crate::freelie::transport(r, &free)).collect::<Result<Vec<_>, _>>()?;
    PresentedLieAlgebra::new(&free, rels)
}

/// Finite fields of order 2, 3 and 4 with table arithmetic.
#[derive(Debug, Clone)]
pub struct SmallField {
    pub order: u8,
    add: Vec<Vec<u8>>,
    mul: Vec<Vec<u8>>,
}

impl SmallField {
    pub fn new(order: u8) -> Self {
        let q = order as usize;
        let (add, mul) = match order {
            2 | 3 => (
                (0..q).map(|a| (0..q).map(|b| ((a + b) % q) as u8).collect()).collect(),
                (0..q).map(|a| (0..q).map(|b| ((a * b) % q) as u8).collect()).collect(),
            ),
            // 0, 1, w, w + 1 with w^2 = w + 1
            4 => (
                (0..4u8).map(|a| (0..4u8).map(|b| a ^ b).collect()).collect(),
                (0..4u8)
                    .map(|a| {
                        (0..4u8)
                            .map(|b| {
                                let mut r = 0u8;
                                for bit in 0..2 {
                                    if b >> bit & 1 == 1 {
                                        r ^= a << bit;
                                    }
                                }
                                if r & 4 != 0 {
                                    r ^= 0b111;
                                }
                                r
                            })
                            .collect()
                    })
                    .collect(),
            ),
            _ => panic!("unsupported field order {order}"),
        };
        SmallField { order, add, mul }
    }

    /// Characteristic of the field.
    pub fn characteristic(&self) -> u64 {
        if self.order == 4 {
            2
        } else {
            self.order as u64
        }
    }

    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize][b as usize]
    }

    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize][b as usize]
    }

    pub fn neg(&self, a: u8) -> u8 {
        (0..self.order).find(|&b| self.add(a, b) == 0).unwrap()
    }

    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: u8) -> u8 {
        (1..self.order).find(|&b| self.mul(a, b) == 1).expect("nonzero")
    }

    /// Rank of a matrix given by rows.
    pub fn rank(&self, rows: &[Vec<u8>]) -> usize {
        let mut m: Vec<Vec<u8>> = rows.to_vec();
        let cols = m.first().map_or(0, Vec::len);
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
            m.swap(r, p);
            let inv = self.inv(m[r][c]);
            let pivot: Vec<u8> = m[r].iter().map(|&x| self.mul(x, inv)).collect();
            for (i, row) in m.iter_mut().enumerate() {
                if i != r && row[c] != 0 {
                    let f = row[c];
                    for (x, &y) in row.iter_mut().zip(&pivot) {
                        *x = self.sub(*x, self.mul(f, y));
                    }
                }
            }
            m[r] = pivot;
            r += 1;
        }
        r
    }

    /// All vectors of length `n`.
    pub fn vectors(&self, n: usize) -> Vec<Vec<u8>> {
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out.into_iter().flat_map(|v| (0..self.order).map(move |a| [v.clone(), vec![a]].concat())).collect();
        }
        out
    }
}

/// Graded-isomorphism invariants of a class-2 quotient generated in weight 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fingerprint {
    pub degree_two_dim: usize,
    /// `(q, #{(v1, v2) in V x V : [v1, v2] = 0})`.
    pub zero_pairs: Vec<(u8, u64)>,
    /// `(q, counts)` where `counts[r] = #{v in V : rank ad(v)|_V = r}`.
    pub ad_rank_profile: Vec<(u8, Vec<u64>)>,
}

/// The pairing `Λ²V -> E_2` over `F_p` as `table[i][j]`, a vector of residues.
fn pairing_mod(text: &str, p: u64) -> Result<Vec<Vec<Vec<u8>>>, PresentedError> {
    let field = FieldSpec::prime(p).expect("prime");
    let src = length_graded(&parse_presentation(text, Some(field))?)?;
    let nq = NilpotentQuotient::new(&src, 2)?;
    let (n, d2) = (nq.dims[0], nq.dims[1]);
    let mut table = vec![vec![vec![0u8; d2]; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for (k, c) in nq.bracket((1, i), (1, j)) {
                if let Scalar::Fp { v, .. } = c {
                    table[i][j][k] = v as u8;
                }
            }
        }
    }
    Ok(table)
}

/// Fingerprint over the fields of the given orders, by full enumeration.
pub fn fingerprint(text: &str, orders: &[u8]) -> Result<Fingerprint, PresentedError> {
    let rational = length_graded(&parse_presentation(text, Some(FieldSpec::Rationals))?)?;
    let degree_two_dim = rational.dim(2);
    let mut zero_pairs = Vec::new();
    let mut ad_rank_profile = Vec::new();
    for &q in orders {
        let k = SmallField::new(q);
        let table = pairing_mod(text, k.characteristic())?;
        let n = table.len();
        let d2 = table.first().and_then(|r| r.first()).map_or(0, Vec::len);
        let vs = k.vectors(n);
        // ad(v) as the n x d2 matrix of [v, x_j]
        let ad: Vec<Vec<Vec<u8>>> = vs
            .iter()
            .map(|v| {
                (0..n)
                    .map(|j| (0..d2).map(|kk| (0..n).fold(0u8, |s, i| k.add(s, k.mul(v[i], table[i][j][kk])))).collect())
                    .collect()
            })
            .collect();
        let mut zeros = 0u64;
        for a in &ad {
            for w in &vs {
                let zero = (0..d2).all(|kk| (0..n).fold(0u8, |s, j| k.add(s, k.mul(w[j], a[j][kk]))) == 0);
                zeros += zero as u64;
            }
        }
        let mut counts = vec![0u64; n.min(d2) + 1];
        for a in &ad {
            counts[k.rank(a)] += 1;
        }
        zero_pairs.push((q, zeros));
        ad_rank_profile.push((q, counts));
    }
    Ok(Fingerprint { degree_two_dim, zero_pairs, ad_rank_profile })
}

/// One checked statement with the expected and computed values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claim {
    pub id: &'static str,
    pub statement: &'static str,
    pub expected: String,
    pub computed: String,
    pub passed: bool,
}

impl Claim {
    fn new(id: &'static str, statement: &'static str, expected: impl ToString, computed: impl ToString) -> Self {
        let (expected, computed) = (expected.to_string(), computed.to_string());
        let passed = expected == computed;
        Claim { id, statement, expected, computed, passed }
    }

    fn check(id: &'static str, statement: &'static str, computed: impl ToString, passed: bool) -> Self {
        Claim { id, statement, expected: "holds".into(), computed: computed.to_string(), passed }
    }
}

/// `S` as a subalgebra of the ambient algebra together with its inferred presentation.
#[derive(Debug)]
pub struct SubalgebraS {
    pub ambient: Arc<PresentedLieAlgebra>,
    pub subalgebra: GradedSubalgebra,
    pub inferred: InferredPresentation,
}

pub fn build_s(max: u32, field: FieldSpec) -> Result<SubalgebraS, PresentedError> {
    let ambient = parse_presentation(AMBIENT, Some(field))?;
    let f = ambient.free();
    let g = |n: &str| LieElement::named(f, n);
    let (a, b, x) = (g("a")?, g("b")?, g("x")?);
    let gens = vec![("a".to_string(), a.clone()), ("b".to_string(), b.clone()), ("z".to_string(), x.bracket(&a)), ("t".to_string(), x.bracket(&b))];
    let subalgebra = GradedSubalgebra::new(&ambient, gens)?;
    let inferred = subalgebra.infer_presentation(max)?;
    Ok(SubalgebraS { ambient, subalgebra, inferred })
}

/// Both presentations define the same ideal through weight `max`.
fn same_ideal(p: &Arc<PresentedLieAlgebra>, q: &Arc<PresentedLieAlgebra>) -> Result<bool, PresentedError> {
    let kills = |from: &Arc<PresentedLieAlgebra>, into: &Arc<PresentedLieAlgebra>| -> Result<bool, PresentedError> {
        for r in from.relators() {
            let r = crate::freelie::transport(r, into.free())?;
            if !into.project_homogeneous(&r)?.1.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    };
    Ok(kills(p, q)? && kills(q, p)?)
}

fn total(v: &[usize]) -> usize {
    v.iter().sum()
}

#[derive(Debug, Clone)]
pub struct ExampleReport {
    pub max_degree: u32,
    pub claims: Vec<Claim>,
    pub fingerprints: Vec<(String, Fingerprint)>,
}

impl ExampleReport {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.passed)
    }
}

/// Presentation, homology and position of `S` in the ambient free product.
pub fn presentation_claims(max: u32, field: FieldSpec) -> Result<Vec<Claim>, PresentedError> {
    let s = build_s(max, field)?;
    let p = &s.inferred.presentation;
    let mut claims = Vec::new();
    claims.push(Claim::new("generators", "a, b, z, t is a minimal generating set", "a,b,z,t", p.gens().iter().map(|g| g.name.clone()).collect::<Vec<_>>().join(",")));
    let mut weights = p.relator_weights();
    weights.sort_unstable();
    claims.push(Claim::new("relator-weights", "relators of the minimal presentation have weights 2 and 3", "[2, 3]", format!("{weights:?}")));
    let expected = parse_presentation(S_PRESENTATION, Some(field))?;
    claims.push(Claim::check("presentation", "the relators generate the ideal of [a,b], [z,b] - [t,a]", "same ideal", same_ideal(p, &expected)?));
    claims.push(Claim::new("h1-hopf", "dim H_1(S) = 4 from the presentation", 4, total(&p.h1(max))));
    claims.push(Claim::new("h2-hopf", "dim H_2(S) = 2 by the Hopf formula", 2, total(&p.h2_hopf(max))));
    let ce = homology_table(p, 2, max);
    claims.push(Claim::new("h1-ce", "dim H_1(S) = 4 from the Chevalley-Eilenberg complex", 4, ce.total(1)));
    claims.push(Claim::new("h2-ce", "dim H_2(S) = 2 from the Chevalley-Eilenberg complex", 2, ce.total(2)));
    let dims_s = s.subalgebra.dim_sequence(max);
    claims.push(Claim::check(
        "inferred-dims",
        "the inferred presentation has the dimensions of S",
        format!("{dims_s:?}"),
        p.dim_sequence(max) == dims_s,
    ));
    let dims_l = s.ambient.dim_sequence(max);
    claims.push(Claim::check("proper", "S is a proper subalgebra of M * N", format!("S_1 = {}, L_1 = {}", dims_s[0], dims_l[0]), dims_s[0] < dims_l[0]));
    claims.push(Claim::check(
        "not-in-factor",
        "S lies in neither free factor: it contains a and the weight-2 element [x,a]",
        format!("S_2 = {}", dims_s[1]),
        dims_s[0] >= 1 && dims_s[1] >= 1,
    ));
    Ok(claims)
}

/// If `S = M * Q` then `Q = S / (a, b)` is free on `z, t` and `H_2` would be 1.
pub fn not_free_product_witness(max: u32, field: FieldSpec) -> Result<Vec<Claim>, PresentedError> {
    let s = build_s(max, field)?;
    let p = &s.inferred.presentation;
    let h2_s = total(&p.h2_hopf(max));
    let m = PresentedLieAlgebra::from_text(vec![Generator::new("a", 1), Generator::new("b", 1)], field, &["[a,b]"])?;
    let h2_m = total(&m.h2_hopf(max));
    let mut rels: Vec<LieElement> = p.relators().to_vec();
    rels.push(LieElement::named(p.free(), "a")?);
    rels.push(LieElement::named(p.free(), "b")?);
    let (q, _) = PresentedLieAlgebra::new(p.free(), rels)?.simplify()?;
    let q_names: Vec<String> = q.gens().iter().map(|g| g.name.clone()).collect();
    let h2_q = total(&q.h2_hopf(max));
    Ok(vec![
        Claim::new("quotient-generators", "S modulo the ideal of M is generated by z, t", "z,t", q_names.join(",")),
        Claim::new("quotient-free", "S modulo the ideal of M has no relators", 0, q.relators().len()),
        Claim::new("h2-m", "dim H_2(M) = 1", 1, h2_m),
        Claim::new("h2-q", "dim H_2(Q) = 0 for Q free on z, t", 0, h2_q),
        Claim::new("h2-s", "dim H_2(S) = 2", 2, h2_s),
        Claim::check("contradiction", "dim H_2(M) + dim H_2(Q) differs from dim H_2(S)", format!("{} + {} vs {}", h2_m, h2_q, h2_s), h2_m + h2_q != h2_s),
    ])
}

pub const FINGERPRINT_FIELDS: &[u8] = &[2, 3, 4];

/// Fingerprints of `E`, `Ẽ`, `Ê` and the check that they are pairwise distinct.
pub fn distinguish_quotients() -> Result<(Vec<Claim>, Vec<(String, Fingerprint)>), PresentedError> {
    let named = [("E", E), ("E~", E_TILDE), ("E^", E_HAT)];
    let fps: Vec<(String, Fingerprint)> =
        named.iter().map(|(n, t)| Ok((n.to_string(), fingerprint(t, FINGERPRINT_FIELDS)?))).collect::<Result<_, PresentedError>>()?;
    let mut claims = Vec::new();
    claims.push(Claim::new("e-degree-two", "dim E_2 = 6 - 2", 4, fps[0].1.degree_two_dim));
    for (i, j, id) in [(0, 1, "separate-e-etilde"), (0, 2, "separate-e-ehat"), (1, 2, "separate-etilde-ehat")] {
        let distinct = fps[i].1 != fps[j].1;
        let computed = if distinct { "distinct".to_string() } else { "inconclusive; extend fingerprint family".to_string() };
        claims.push(Claim::check(id, "fingerprints differ, so the quotients are not isomorphic", computed, distinct));
    }
    Ok((claims, fps))
}

/// Right-angled Artin algebras with `H_1 = 4` and `H_2 = 2` have 4 vertices and
/// 2 edges; none has the class-2 quotient of `S`.
pub fn not_raag_witness() -> Result<Vec<Claim>, PresentedError> {
    let candidates: Vec<SimpleGraph> = graphs_up_to_isomorphism(4).into_iter().filter(|g| g.edges().len() == 2).collect();
    let e = fingerprint(E, FINGERPRINT_FIELDS)?;
    let mut claims = vec![Claim::new("candidate-count", "graphs with 4 vertices and 2 edges up to isomorphism", 2, candidates.len())];
    for g in &candidates {
        let p = raag_presentation(g, FieldSpec::Rationals)?;
        let fp = fingerprint(&p.to_text(), FINGERPRINT_FIELDS)?;
        let edges = g.edges();
        let shape = if edges[0].0 == edges[1].0 || edges[0].0 == edges[1].1 || edges[0].1 == edges[1].0 || edges[0].1 == edges[1].1 {
            "path-shaped"
        } else {
            "two disjoint edges"
        };
        let matching = if shape == "path-shaped" { E_TILDE } else { E_HAT };
        claims.push(Claim::check("candidate-matches", "candidate quotient has the fingerprint of the corresponding algebra", shape, fingerprint(matching, FINGERPRINT_FIELDS)? == fp));
        claims.push(Claim::check("candidate-differs", "candidate quotient differs from E", format!("{shape}: {g}"), fp != e));
    }
    Ok(claims)
}

/// Every claim, with the presentation computed through weight `max`.
pub fn run(max: u32, field: FieldSpec) -> Result<ExampleReport, PresentedError> {
    let mut claims = presentation_claims(max, field)?;
    claims.extend(not_free_product_witness(max, field)?);
    let (sep, fingerprints) = distinguish_quotients()?;
    claims.extend(sep);
    claims.extend(not_raag_witness()?);
    Ok(ExampleReport { max_degree: max, claims, fingerprints })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_fields() {
        let k = SmallField::new(4);
        for a in 1..4 {
            assert_eq!(k.mul(a, k.inv(a)), 1);
        }
        assert_eq!(k.mul(2, 2), 3);
        assert_eq!(k.rank(&[vec![1, 2], vec![2, 3]]), 1);
    }

    #[test]
    fn nilpotent_quotient_vanishes_beyond_class() {
        let p = parse_presentation(E, Some(FieldSpec::Rationals)).unwrap();
        let nq = NilpotentQuotient::new(&p, 2).unwrap();
        assert_eq!(nq.dims, vec![4, 4]);
        assert!(nq.bracket((1, 0), (2, 0)).is_empty());
        assert!(nq.bracket((1, 0), (1, 1)).is_empty());
    }

    #[test]
    fn length_grading_of_s() {
        let p = parse_presentation(S_PRESENTATION, Some(FieldSpec::Rationals)).unwrap();
        let l = length_graded(&p).unwrap();
        assert_eq!(l.dim(2), 4);
    }
}
