//! Universal enveloping algebras of presented algebras, truncated at a weight.
//!
//! PBW monomials are nondecreasing sequences of global basis ids, where the
//! basis of `L` is ordered by weight and then by quotient index.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{Echelon, SparseVec, Subspace};
use crate::presented::{GradedSubalgebra, Homog, PresentedLieAlgebra};
use crate::scalars::FieldSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnvelopeError {
    #[error("series constant term {0} is not a unit")]
    NonUnit(BigInt),
    #[error("truncation exceeded: weight {0} > {1}")]
    Truncation(u32, u32),
    #[error("embedding not injective at weight {0}")]
    NotInjective(u32),
    #[error("induced module disagrees with series quotient at weight {0}: {1} != {2}")]
    DimensionMismatch(u32, usize, BigInt),
}

/// A power series truncated at `t^N`, with exact integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertSeries {
    coeffs: Vec<BigInt>,
}

impl HilbertSeries {
    pub fn new(mut coeffs: Vec<BigInt>, max: u32) -> Self {
        coeffs.resize(max as usize + 1, BigInt::zero());
        HilbertSeries { coeffs }
    }

    pub fn from_i64(cs: &[i64], max: u32) -> Self {
        Self::new(cs.iter().map(|&c| BigInt::from(c)).collect(), max)
    }

    pub fn one(max: u32) -> Self {
        Self::from_i64(&[1], max)
    }

    /// `prod_i (1 - t^i)^(-dims[i-1])`.
    pub fn pbw_product(dims: &[usize], max: u32) -> Self {
        let mut s = Self::one(max);
        for (k, &d) in dims.iter().enumerate() {
            let i = k + 1;
            for _ in 0..d {
                // multiply by 1/(1-t^i): c_n += c_{n-i}
                for n in i..s.coeffs.len() {
                    let prev = s.coeffs[n - i].clone();
                    s.coeffs[n] += prev;
                }
            }
        }
        s
    }

    pub fn max(&self) -> u32 {
        self.coeffs.len() as u32 - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, n: u32) -> &BigInt {
        &self.coeffs[n as usize]
    }

    fn trunc(&self, other: &Self) -> usize {
        self.coeffs.len().min(other.coeffs.len())
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.trunc(other);
        HilbertSeries { coeffs: (0..len).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.trunc(other);
        HilbertSeries { coeffs: (0..len).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let len = self.trunc(other);
        let mut out = vec![BigInt::zero(); len];
        for i in 0..len {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..len - i {
                out[i + j] += &self.coeffs[i] * &other.coeffs[j];
            }
        }
        HilbertSeries { coeffs: out }
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: u32) -> Self {
        let len = self.coeffs.len();
        let mut out = vec![BigInt::zero(); len];
        for i in 0..len.saturating_sub(k as usize) {
            out[i + k as usize] = self.coeffs[i].clone();
        }
        HilbertSeries { coeffs: out }
    }

    pub fn inverse(&self) -> Result<Self, EnvelopeError> {
        let c0 = &self.coeffs[0];
        if !(c0.is_one() || (-c0).is_one()) {
            return Err(EnvelopeError::NonUnit(c0.clone()));
        }
        let len = self.coeffs.len();
        let mut out: Vec<BigInt> = vec![BigInt::zero(); len];
        out[0] = c0.clone();
        for n in 1..len {
            let mut acc = BigInt::zero();
            for k in 1..=n {
                acc += &self.coeffs[k] * &out[n - k];
            }
            out[n] = -acc * c0;
        }
        Ok(HilbertSeries { coeffs: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self, EnvelopeError> {
        Ok(self.mul(&other.inverse()?))
    }
}

impl fmt::Display for HilbertSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

pub fn hilbert_series(p: &PresentedLieAlgebra, max: u32) -> HilbertSeries {
    HilbertSeries::pbw_product(&p.dim_sequence(max), max)
}

pub type Monomial = Vec<u32>;

/// `U(L)` in weights `0..=max`, with straightening products.
#[derive(Debug)]
pub struct Envelope {
    alg: Arc<PresentedLieAlgebra>,
    max: u32,
    offsets: Vec<u32>,
    elem_weight: Vec<u32>,
    monos: Vec<Vec<Monomial>>,
    index: Vec<HashMap<Monomial, usize>>,
    memo: RwLock<HashMap<(Monomial, u32), SparseVec>>,
}

impl Envelope {
    pub fn new(alg: &Arc<PresentedLieAlgebra>, max: u32) -> Arc<Self> {
        let dims = alg.dim_sequence(max);
        let mut offsets = vec![0u32; max as usize + 2];
        let mut elem_weight = Vec::new();
        for w in 1..=max {
            offsets[w as usize + 1] = offsets[w as usize] + dims[w as usize - 1] as u32;
            elem_weight.extend(std::iter::repeat_n(w, dims[w as usize - 1]));
        }
        let mut monos: Vec<Vec<Monomial>> = vec![Vec::new(); max as usize + 1];
        let mut cur = Vec::new();
        enumerate_pbw(&elem_weight, 0, max, 0, &mut cur, &mut monos);
        for ms in monos.iter_mut() {
            ms.sort();
        }
        let index = monos.iter().map(|ms| ms.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect()).collect();
        Arc::new(Envelope { alg: alg.clone(), max, offsets, elem_weight, monos, index, memo: RwLock::new(HashMap::new()) })
    }

    pub fn algebra(&self) -> &Arc<PresentedLieAlgebra> {
        &self.alg
    }

    pub fn max(&self) -> u32 {
        self.max
    }

    pub fn field(&self) -> FieldSpec {
        self.alg.field()
    }

    pub fn dim(&self, n: u32) -> usize {
        self.monos[n as usize].len()
    }

    pub fn monomials(&self, n: u32) -> &[Monomial] {
        &self.monos[n as usize]
    }

    pub fn monomial_index(&self, m: &[u32]) -> Option<usize> {
        self.index[self.mono_weight(m) as usize].get(m).copied()
    }

    pub fn mono_weight(&self, m: &[u32]) -> u32 {
        m.iter().map(|&e| self.elem_weight[e as usize]).sum()
    }

    /// Global id of the `i`-th basis element of `L_w`.
    pub fn elem(&self, w: u32, i: usize) -> u32 {
        self.offsets[w as usize] + i as u32
    }

    pub fn elem_weight(&self, e: u32) -> u32 {
        self.elem_weight[e as usize]
    }

    fn elem_local(&self, e: u32) -> usize {
        (e - self.offsets[self.elem_weight(e) as usize]) as usize
    }

    pub fn hilbert_series(&self) -> HilbertSeries {
        HilbertSeries::new((0..=self.max).map(|n| BigInt::from(self.dim(n))).collect(), self.max)
    }

    /// A Lie element as a sum of length-one monomials.
    pub fn embed(&self, h: &Homog) -> SparseVec {
        let idx = &self.index[h.0 as usize];
        SparseVec::from_entries(h.1.iter().map(|(i, c)| (idx[&vec![self.elem(h.0, *i)]], c.clone())))
    }

    /// `m * e` for a PBW monomial and a basis element of `L`.
    pub fn mul_mono_elem(&self, m: &[u32], e: u32) -> Result<SparseVec, EnvelopeError> {
        let n = self.mono_weight(m) + self.elem_weight(e);
        if n > self.max {
            return Err(EnvelopeError::Truncation(n, self.max));
        }
        let key = (m.to_vec(), e);
        if let Some(v) = self.memo.read().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let f = self.field();
        let out = match m.last() {
            None => SparseVec::unit(self.index[n as usize][&vec![e]], f),
            Some(&last) if last <= e => {
                let mut mm = m.to_vec();
                mm.push(e);
                SparseVec::unit(self.index[n as usize][&mm], f)
            }
            Some(&last) => {
                // m' m_k e = (m' e) m_k + m' [m_k, e]
                let head = &m[..m.len() - 1];
                let mut acc = SparseVec::new();
                let first = self.mul_mono_elem(head, e)?;
                let w1 = self.mono_weight(head) + self.elem_weight(e);
                for (i, c) in first.iter() {
                    let prod = self.mul_mono_elem(&self.monos[w1 as usize][*i], last)?;
                    acc = acc.add_scaled(c, &prod);
                }
                let lw = self.elem_weight(last);
                let ew = self.elem_weight(e);
                let br = self.alg.bracket(
                    &(lw, SparseVec::unit(self.elem_local(last), f)),
                    &(ew, SparseVec::unit(self.elem_local(e), f)),
                );
                for (i, c) in br.1.iter() {
                    let prod = self.mul_mono_elem(head, self.elem(br.0, *i))?;
                    acc = acc.add_scaled(c, &prod);
                }
                acc
            }
        };
        self.memo.write().unwrap().insert(key, out.clone());
        Ok(out)
    }

    /// `v * m` where `v` has weight `n`.
    pub fn mul_vec_mono(&self, n: u32, v: &SparseVec, m: &[u32]) -> Result<SparseVec, EnvelopeError> {
        let mut cur = v.clone();
        let mut w = n;
        for &e in m {
            let mut acc = SparseVec::new();
            for (i, c) in cur.iter() {
                acc = acc.add_scaled(c, &self.mul_mono_elem(&self.monos[w as usize][*i], e)?);
            }
            cur = acc;
            w += self.elem_weight(e);
        }
        Ok(cur)
    }

    /// Product of homogeneous elements of weights `a.0` and `b.0`.
    pub fn mul(&self, a: &(u32, SparseVec), b: &(u32, SparseVec)) -> Result<(u32, SparseVec), EnvelopeError> {
        let mut acc = SparseVec::new();
        for (j, c) in b.1.iter() {
            let m = &self.monos[b.0 as usize][*j];
            acc = acc.add_scaled(c, &self.mul_vec_mono(a.0, &a.1, m)?);
        }
        Ok((a.0 + b.0, acc))
    }

    pub fn unit(&self) -> (u32, SparseVec) {
        (0, SparseVec::unit(0, self.field()))
    }
}

fn enumerate_pbw(ws: &[u32], start: usize, max: u32, w: u32, cur: &mut Monomial, out: &mut [Vec<Monomial>]) {
    out[w as usize].push(cur.clone());
    for e in start..ws.len() {
        let nw = w + ws[e];
        if nw > max {
            continue;
        }
        cur.push(e as u32);
        enumerate_pbw(ws, e, max, nw, cur, out);
        cur.pop();
    }
}

#[derive(Debug, Clone)]
struct InducedComponent {
    killed: Subspace,
    basis: Vec<usize>,
    qindex: Vec<Option<usize>>,
}

/// The right module `k ⊗_{U(S)} U(L) = U(L) / S·U(L)` in weights `0..=max`.
#[derive(Debug)]
pub struct InducedModule {
    env: Arc<Envelope>,
    comps: Vec<InducedComponent>,
}

impl InducedModule {
    /// `sub[j-1]` is the subspace `S_j` of `L_j`.
    pub fn new(env: &Arc<Envelope>, sub: &[Subspace]) -> Self {
        let f = env.field();
        let mut comps = Vec::new();
        for n in 0..=env.max {
            let mut ech = Echelon::new(f);
            for j in 1..=n.min(sub.len() as u32) {
                for s in sub[j as usize - 1].basis() {
                    let sv = env.embed(&(j, s.clone()));
                    for m in env.monomials(n - j) {
                        let p = env.mul_vec_mono(j, &sv, m).expect("within truncation");
                        ech.insert(&p);
                    }
                }
            }
            let killed = ech.into_subspace(env.dim(n));
            let pivots: std::collections::HashSet<usize> = killed.pivots().into_iter().collect();
            let mut qindex = vec![None; env.dim(n)];
            let mut basis = Vec::new();
            for j in 0..env.dim(n) {
                if !pivots.contains(&j) {
                    qindex[j] = Some(basis.len());
                    basis.push(j);
                }
            }
            comps.push(InducedComponent { killed, basis, qindex });
        }
        InducedModule { env: env.clone(), comps }
    }

    pub fn from_subalgebra(env: &Arc<Envelope>, s: &GradedSubalgebra) -> Self {
        let spans: Vec<Subspace> = (1..=env.max).map(|n| s.span(n)).collect();
        Self::new(env, &spans)
    }

    pub fn envelope(&self) -> &Arc<Envelope> {
        &self.env
    }

    pub fn dim(&self, n: u32) -> usize {
        self.comps[n as usize].basis.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.env.max).map(|n| self.dim(n)).collect()
    }

    /// PBW monomial indices whose classes form the quotient basis at weight `n`.
    pub fn basis(&self, n: u32) -> &[usize] {
        &self.comps[n as usize].basis
    }

    /// Class of an element of `U_n` in quotient coordinates.
    pub fn reduce(&self, n: u32, u: &SparseVec) -> SparseVec {
        let c = &self.comps[n as usize];
        c.killed.reduce(u).remap(|j| c.qindex[j])
    }

    /// Representative in `U_n` of a quotient vector.
    pub fn lift(&self, n: u32, v: &SparseVec) -> SparseVec {
        let c = &self.comps[n as usize];
        v.remap(|i| Some(c.basis[i]))
    }

    /// Right action of an element of `U_j` on a module element of weight `n`.
    pub fn act(&self, n: u32, v: &SparseVec, u: &(u32, SparseVec)) -> Result<SparseVec, EnvelopeError> {
        let (w, p) = self.env.mul(&(n, self.lift(n, v)), u)?;
        Ok(self.reduce(w, &p))
    }

    /// Checks the quotient dimensions against `Hilb(U(L)) / Hilb(U(S))`.
    pub fn check_series(&self, sub_series: &HilbertSeries) -> Result<(), EnvelopeError> {
        let q = self.env.hilbert_series().div(sub_series)?;
        for n in 0..=self.env.max {
            if BigInt::from(self.dim(n)) != *q.coeff(n) {
                return Err(EnvelopeError::DimensionMismatch(n, self.dim(n), q.coeff(n).clone()));
            }
        }
        Ok(())
    }
}

/// Graded dimensions of `k ⊗_{U(S)} U(L)`, computed explicitly and checked against
/// the series quotient.
pub fn induced_module_dims(s: &GradedSubalgebra, max: u32) -> Result<Vec<usize>, EnvelopeError> {
    let env = Envelope::new(s.ambient(), max);
    let m = InducedModule::from_subalgebra(&env, s);
    let sub = HilbertSeries::pbw_product(&s.dim_sequence(max), max);
    m.check_series(&sub)?;
    Ok(m.dims())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_element;
    use crate::freelie::Generator;

    fn ones(names: &[&str]) -> Vec<Generator> {
        names.iter().map(|n| Generator::new(*n, 1)).collect()
    }

    fn ints(s: &HilbertSeries) -> Vec<i64> {
        s.coeffs().iter().map(|c| i64::try_from(c).unwrap()).collect()
    }

    #[test]
    fn series_arithmetic() {
        let s = HilbertSeries::from_i64(&[1, -3, 1], 6);
        assert_eq!(ints(&s.inverse().unwrap()), vec![1, 3, 8, 21, 55, 144, 377]);
        assert!(HilbertSeries::from_i64(&[2, 1], 3).inverse().is_err());
        let t = HilbertSeries::from_i64(&[1, -1], 4);
        assert_eq!(ints(&t.mul(&t).inverse().unwrap()), vec![1, 2, 3, 4, 5]);
        assert_eq!(ints(&t.shift(2)), vec![0, 0, 1, -1, 0]);
    }

    #[test]
    fn hilbert_examples() {
        let ab = PresentedLieAlgebra::from_text(ones(&["x", "y"]), FieldSpec::Rationals, &["[x,y]"]).unwrap();
        assert_eq!(ints(&hilbert_series(&ab, 4)), vec![1, 2, 3, 4, 5]);
        let l = PresentedLieAlgebra::from_text(ones(&["a", "b", "x"]), FieldSpec::Rationals, &["[a,b]"]).unwrap();
        assert_eq!(ints(&hilbert_series(&l, 4)), vec![1, 3, 8, 21, 55]);
        let free = PresentedLieAlgebra::free_algebra(ones(&["x", "y"]), FieldSpec::Rationals).unwrap();
        let env = Envelope::new(&free, 5);
        assert_eq!(ints(&env.hilbert_series()), vec![1, 2, 4, 8, 16, 32]);
        assert_eq!(env.hilbert_series(), hilbert_series(&free, 5));
    }

    #[test]
    fn straightening_respects_brackets() {
        let free = PresentedLieAlgebra::free_algebra(ones(&["x", "y"]), FieldSpec::Rationals).unwrap();
        let env = Envelope::new(&free, 4);
        let f = env.field();
        let (x, y) = (env.elem(1, 0), env.elem(1, 1));
        let yx = env.mul_mono_elem(&[y], x).unwrap();
        let xy = env.mul_mono_elem(&[x], y).unwrap();
        let comm = xy.sub(&yx);
        let br = free.bracket(&(1, SparseVec::unit(0, f)), &(1, SparseVec::unit(1, f)));
        assert_eq!(comm, env.embed(&br));
        let a = (1, env.embed(&(1, SparseVec::unit(0, f))));
        let b = (1, env.embed(&(1, SparseVec::unit(1, f))));
        let ab = env.mul(&a, &b).unwrap();
        let abab = env.mul(&ab, &ab).unwrap();
        let a_bab = env.mul(&a, &env.mul(&b, &ab).unwrap()).unwrap();
        assert_eq!(abab, a_bab);
    }

    #[test]
    fn induced_examples() {
        let l = PresentedLieAlgebra::from_text(ones(&["a", "b", "x"]), FieldSpec::Rationals, &["[a,b]"]).unwrap();
        let f = l.free().clone();
        let a = parse_element("a", &f).unwrap();
        let s = GradedSubalgebra::new(&l, vec![("a".into(), a)]).unwrap();
        assert_eq!(induced_module_dims(&s, 4).unwrap(), vec![1, 2, 5, 13, 34]);
        let gens: Vec<_> = ["a", "b", "x"].iter().map(|n| (n.to_string(), parse_element(n, &f).unwrap())).collect();
        let all = GradedSubalgebra::new(&l, gens).unwrap();
        assert_eq!(induced_module_dims(&all, 4).unwrap(), vec![1, 0, 0, 0, 0]);
        let none = GradedSubalgebra::new(&l, vec![]).unwrap();
        assert_eq!(induced_module_dims(&none, 3).unwrap(), vec![1, 3, 8, 21]);
    }

    #[test]
    fn right_action() {
        let l = PresentedLieAlgebra::from_text(ones(&["a", "b", "x"]), FieldSpec::Rationals, &["[a,b]"]).unwrap();
        let f = l.free().clone();
        let s = GradedSubalgebra::new(&l, vec![("a".into(), parse_element("a", &f).unwrap())]).unwrap();
        let env = Envelope::new(&l, 3);
        let m = InducedModule::from_subalgebra(&env, &s);
        let fld = env.field();
        let one = SparseVec::unit(0, fld);
        assert_eq!(m.act(0, &one, &env.unit()).unwrap(), one);
        let x = (1, env.embed(&l.generator(2)));
        let cx = m.act(0, &one, &x).unwrap();
        assert_eq!(cx, m.reduce(1, &x.1));
        assert!(!cx.is_zero());
        let a = (1, env.embed(&l.generator(0)));
        assert!(m.act(0, &one, &a).unwrap().is_zero());
        let ax = env.mul(&a, &x).unwrap();
        assert!(m.reduce(2, &ax.1).is_zero());
    }
}
