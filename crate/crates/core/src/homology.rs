//! Chevalley–Eilenberg homology with trivial coefficients, bigraded by
//! homological degree and weight, plus long-exact-sequence rank bookkeeping.

use std::collections::HashMap;
use std::sync::Arc;

use crate::linalg::{rank, SparseMatrix, SparseVec};
use crate::presented::PresentedLieAlgebra;
use crate::scalars::{FieldSpec, Scalar};

/// Finite-dimensional blocks `C_{i,n}` with differentials `d_{i,n}: C_{i,n} -> C_{i-1,n}`.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    pub field: FieldSpec,
    pub max_i: usize,
    pub max_n: u32,
    dims: HashMap<(usize, u32), usize>,
    diffs: HashMap<(usize, u32), SparseMatrix>,
}

impl ChainComplex {
    pub fn new(field: FieldSpec, max_i: usize, max_n: u32) -> Self {
        ChainComplex { field, max_i, max_n, dims: HashMap::new(), diffs: HashMap::new() }
    }

    pub fn set_dim(&mut self, i: usize, n: u32, d: usize) {
        self.dims.insert((i, n), d);
    }

    /// Stores `d_{i,n}`; its shape must match the block dimensions.
    pub fn set_differential(&mut self, i: usize, n: u32, m: SparseMatrix) {
        assert_eq!(m.cols(), self.dim(i, n), "source dimension");
        if i > 0 {
            assert_eq!(m.rows(), self.dim(i - 1, n), "target dimension");
        }
        self.diffs.insert((i, n), m);
    }

    pub fn dim(&self, i: usize, n: u32) -> usize {
        self.dims.get(&(i, n)).copied().unwrap_or(0)
    }

    pub fn differential(&self, i: usize, n: u32) -> Option<&SparseMatrix> {
        self.diffs.get(&(i, n))
    }

    pub fn rank(&self, i: usize, n: u32) -> usize {
        self.diffs.get(&(i, n)).map_or(0, rank)
    }

    /// First bidegree where `d_{i-1} d_i` is nonzero.
    pub fn check_d_squared(&self) -> Result<(), (usize, u32)> {
        for (&(i, n), d) in &self.diffs {
            if i == 0 {
                continue;
            }
            if let Some(e) = self.diffs.get(&(i - 1, n)) {
                if e.cols() > 0 && d.cols() > 0 && !e.mul(d).is_zero() {
                    return Err((i, n));
                }
            }
        }
        Ok(())
    }

    /// `dim ker d_{i,n} - rank d_{i+1,n}`.
    pub fn homology_dim(&self, i: usize, n: u32) -> usize {
        self.dim(i, n) - self.rank(i, n) - self.rank(i + 1, n)
    }

    pub fn euler_chain(&self, n: u32) -> i64 {
        (0..=self.max_i).map(|i| sign(i) * self.dim(i, n) as i64).sum()
    }
}

fn sign(i: usize) -> i64 {
    if i.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `dims[i][n] = dim H_i(L,k)_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyTable {
    pub dims: Vec<Vec<usize>>,
}

impl HomologyTable {
    pub fn max_i(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn max_n(&self) -> u32 {
        self.dims[0].len() as u32 - 1
    }

    pub fn get(&self, i: usize, n: i64) -> usize {
        if n < 0 || n > self.max_n() as i64 || i > self.max_i() {
            return 0;
        }
        self.dims[i][n as usize]
    }

    pub fn total(&self, i: usize) -> usize {
        self.dims[i].iter().sum()
    }

    /// Table of the zero algebra.
    pub fn trivial(max_i: usize, max_n: u32) -> Self {
        let mut dims = vec![vec![0; max_n as usize + 1]; max_i + 1];
        dims[0][0] = 1;
        HomologyTable { dims }
    }
}

struct Exterior {
    weights: Vec<u32>,
    local: Vec<usize>,
    offsets: Vec<u32>,
}

impl Exterior {
    fn tuples(&self, i: usize, n: u32) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.rec(i, n, 0, &mut cur, &mut out);
        out
    }

    fn rec(&self, i: usize, n: u32, start: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == 0 {
            if n == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for e in start..self.weights.len() {
            let w = self.weights[e];
            if w > n {
                break;
            }
            cur.push(e as u32);
            self.rec(i - 1, n - w, e + 1, cur, out);
            cur.pop();
        }
    }
}

/// The Chevalley–Eilenberg complex `Λ^i L` in weights `0..=max_n`, degrees `0..=max_i`.
pub fn ce_complex(p: &Arc<PresentedLieAlgebra>, max_i: usize, max_n: u32) -> ChainComplex {
    let field = p.field();
    let dims = p.dim_sequence(max_n);
    let mut ext = Exterior { weights: Vec::new(), local: Vec::new(), offsets: vec![0; max_n as usize + 2] };
    for w in 1..=max_n {
        let d = dims[w as usize - 1];
        ext.offsets[w as usize + 1] = ext.offsets[w as usize] + d as u32;
        for k in 0..d {
            ext.weights.push(w);
            ext.local.push(k);
        }
    }
    let mut cx = ChainComplex::new(field, max_i, max_n);
    let mut brackets: HashMap<(u32, u32), Vec<(u32, Scalar)>> = HashMap::new();
    for n in 0..=max_n {
        let mut bases: Vec<Vec<Vec<u32>>> = Vec::new();
        for i in 0..=max_i {
            bases.push(ext.tuples(i, n));
            cx.set_dim(i, n, bases[i].len());
        }
        for i in 1..=max_i {
            let src = &bases[i];
            let tgt_index: HashMap<&Vec<u32>, usize> = bases[i - 1].iter().enumerate().map(|(k, t)| (t, k)).collect();
            let mut cols = Vec::with_capacity(src.len());
            for x in src {
                let mut acc: HashMap<usize, Scalar> = HashMap::new();
                for a in 0..x.len() {
                    for b in a + 1..x.len() {
                        let br = brackets
                            .entry((x[a], x[b]))
                            .or_insert_with(|| {
                                let (wa, wb) = (ext.weights[x[a] as usize], ext.weights[x[b] as usize]);
                                let h = p.bracket(
                                    &(wa, SparseVec::unit(ext.local[x[a] as usize], field)),
                                    &(wb, SparseVec::unit(ext.local[x[b] as usize], field)),
                                );
                                h.1.iter().map(|(k, c)| (ext.offsets[h.0 as usize] + *k as u32, c.clone())).collect()
                            })
                            .clone();
                        let rest: Vec<u32> = x.iter().enumerate().filter(|(k, _)| *k != a && *k != b).map(|(_, e)| *e).collect();
                        let base_sign = if (a + b) % 2 == 0 { 1 } else { -1 };
                        for (f, c) in br {
                            if rest.contains(&f) {
                                continue;
                            }
                            let pos = rest.partition_point(|&e| e < f);
                            let mut t = rest.clone();
                            t.insert(pos, f);
                            let s = if pos % 2 == 0 { base_sign } else { -base_sign };
                            let coeff = &c * &field.from_i64(s);
                            let k = tgt_index[&t];
                            match acc.get_mut(&k) {
                                Some(v) => *v = &*v + &coeff,
                                None => {
                                    acc.insert(k, coeff);
                                }
                            }
                        }
                    }
                }
                cols.push(SparseVec::from_entries(acc));
            }
            cx.set_differential(i, n, SparseMatrix::from_columns(bases[i - 1].len(), field, &cols));
        }
    }
    cx
}

pub fn homology_table(p: &Arc<PresentedLieAlgebra>, max_i: usize, max_n: u32) -> HomologyTable {
    let cx = ce_complex(p, max_i + 1, max_n);
    let dims = (0..=max_i).map(|i| (0..=max_n).map(|n| cx.homology_dim(i, n)).collect()).collect();
    HomologyTable { dims }
}

/// Truncated evidence that every `H_i` is finite dimensional.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitenessWitness {
    pub max_degree: u32,
    /// Weights at the top of the window that must carry no homology.
    pub margin: u32,
    /// Largest weight with `H_i != 0`, for `i >= 1`.
    pub top_weights: Vec<Option<u32>>,
    pub consistent: bool,
}

impl FinitenessWitness {
    /// Never "proved": the data only covers weights through the truncation.
    pub fn label(&self) -> &'static str {
        if self.consistent {
            "consistent"
        } else {
            "inconclusive"
        }
    }
}

/// Checks that each `H_i`, `1 <= i <= I`, vanishes in the top `margin` weights of the table.
pub fn finiteness_witness(table: &HomologyTable, margin: u32) -> FinitenessWitness {
    let max_n = table.max_n();
    let top_weights: Vec<Option<u32>> = (1..=table.max_i()).map(|i| (1..=max_n).rev().find(|&n| table.get(i, n as i64) > 0)).collect();
    let consistent = margin <= max_n && top_weights.iter().all(|t| t.is_none_or(|w| w + margin <= max_n));
    FinitenessWitness { max_degree: max_n, margin, top_weights, consistent }
}

/// Outcome of the rank bookkeeping for one weight of a long exact sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LesWeight {
    pub weight: u32,
    /// Term dimensions from the `H_0(L)` end leftwards.
    pub terms: Vec<usize>,
    /// Forced ranks of the maps out of each term.
    pub ranks: Vec<i64>,
    pub failure: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MvReport {
    pub weights: Vec<LesWeight>,
    pub exact: bool,
    pub first_failure: Option<(u32, usize)>,
    /// The top homological degree has no left neighbour, so its exactness is unchecked.
    pub inconclusive_tail: bool,
}

/// Checks that the sequence
/// `... -> ⊕_e H_i(L_e)[s_e] -> ⊕_v H_i(L_v) -> H_i(L) -> ⊕_e H_{i-1}(L_e)[s_e] -> ... -> H_0(L) -> 0`
/// admits ranks making it exact, weight by weight.
pub fn mayer_vietoris_check(total: &HomologyTable, vertices: &[&HomologyTable], edges: &[(&HomologyTable, u32)]) -> MvReport {
    let max_i = [total.max_i()]
        .into_iter()
        .chain(vertices.iter().map(|t| t.max_i()))
        .chain(edges.iter().map(|(t, _)| t.max_i()))
        .min()
        .unwrap();
    let max_n = total.max_n();
    let mut weights = Vec::new();
    let mut first_failure = None;
    for n in 0..=max_n {
        let mut terms = Vec::new();
        for i in 0..=max_i {
            terms.push(total.get(i, n as i64));
            terms.push(vertices.iter().map(|t| t.get(i, n as i64)).sum());
            terms.push(edges.iter().map(|(t, s)| t.get(i, n as i64 - *s as i64)).sum());
        }
        let mut ranks = vec![0i64];
        let mut failure = None;
        for (j, &a) in terms.iter().enumerate() {
            let next = a as i64 - ranks[j];
            let bound = terms.get(j + 1).map_or(a as i64, |&b| b.min(a) as i64);
            let last = j + 1 == terms.len();
            if next < 0 || (!last && next > bound) {
                failure = Some(j);
                break;
            }
            ranks.push(next);
        }
        if failure.is_some() && first_failure.is_none() {
            first_failure = failure.map(|j| (n, j));
        }
        weights.push(LesWeight { weight: n, terms, ranks, failure });
    }
    MvReport { exact: first_failure.is_none(), first_failure, weights, inconclusive_tail: true }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freelie::Generator;

    fn ones(names: &[&str]) -> Vec<Generator> {
        names.iter().map(|n| Generator::new(*n, 1)).collect()
    }

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
    }

    #[test]
    fn abelian_is_exterior() {
        let p = PresentedLieAlgebra::from_text(ones(&["x", "y", "z"]), FieldSpec::Rationals, &["[x,y]", "[x,z]", "[y,z]"]).unwrap();
        let cx = ce_complex(&p, 3, 4);
        for i in 1..=3 {
            for n in 0..=4 {
                assert_eq!(cx.rank(i, n), 0);
            }
        }
        let t = homology_table(&p, 3, 4);
        for i in 0..=3 {
            assert_eq!(t.dims[i][i], binom(3, i));
            assert_eq!(t.total(i), binom(3, i));
        }
    }

    #[test]
    fn finiteness_witness_window() {
        let p = PresentedLieAlgebra::from_text(ones(&["x", "y", "z"]), FieldSpec::Rationals, &["[x,y]", "[x,z]", "[y,z]"]).unwrap();
        let t = homology_table(&p, 3, 5);
        let w = finiteness_witness(&t, 2);
        assert_eq!(w.top_weights, vec![Some(1), Some(2), Some(3)]);
        assert_eq!(w.label(), "consistent");
        assert_eq!(finiteness_witness(&t, 3).label(), "inconclusive");
        let mut spread = HomologyTable::trivial(2, 5);
        spread.dims[2][5] = 1;
        assert!(!finiteness_witness(&spread, 1).consistent);
        assert_eq!(finiteness_witness(&spread, 6).label(), "inconclusive");
    }

    #[test]
    fn free_vanishes_above_one() {
        let p = PresentedLieAlgebra::free_algebra(ones(&["x", "y"]), FieldSpec::Rationals).unwrap();
        let cx = ce_complex(&p, 3, 6);
        assert!(cx.check_d_squared().is_ok());
        assert_eq!(cx.dim(1, 3), 2);
        let t = homology_table(&p, 3, 6);
        assert_eq!(t.dims[1], vec![0, 2, 0, 0, 0, 0, 0]);
        assert_eq!(t.total(2) + t.total(3), 0);
    }

    #[test]
    fn matches_hopf() {
        let p = PresentedLieAlgebra::from_text(ones(&["x", "y"]), FieldSpec::Rationals, &["[x,[x,y]]"]).unwrap();
        let t = homology_table(&p, 2, 6);
        assert_eq!(t.dims[2][1..].to_vec(), p.h2_hopf(6));
        assert_eq!(t.dims[1][1..].to_vec(), p.h1(6));
    }

    #[test]
    fn les_for_free_product() {
        let m = PresentedLieAlgebra::from_text(ones(&["a", "b"]), FieldSpec::Rationals, &["[a,b]"]).unwrap();
        let nn = PresentedLieAlgebra::free_algebra(ones(&["x"]), FieldSpec::Rationals).unwrap();
        let l = PresentedLieAlgebra::from_text(ones(&["a", "b", "x"]), FieldSpec::Rationals, &["[a,b]"]).unwrap();
        let (tm, tn, tl) = (homology_table(&m, 3, 5), homology_table(&nn, 3, 5), homology_table(&l, 3, 5));
        let te = HomologyTable::trivial(3, 5);
        let r = mayer_vietoris_check(&tl, &[&tm, &tn], &[(&te, 0)]);
        assert!(r.exact, "{r:?}");
        let bad = HomologyTable { dims: vec![vec![1, 0, 0, 0, 0, 0], vec![0, 5, 0, 0, 0, 0], tl.dims[2].clone(), tl.dims[3].clone()] };
        assert!(!mayer_vietoris_check(&bad, &[&tm, &tn], &[(&te, 0)]).exact);
    }
}
