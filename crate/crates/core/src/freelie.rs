//! Free Lie algebras on weighted generators with a weighted Hall basis.
//!
//! Monomials are interned per algebra. Ids are handed out weight by weight in
//! Hall order, so comparing ids compares monomials. Within one weight the
//! generators come first, then brackets `[a,b]` sorted by `(b, a)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::linalg::SparseVec;
use crate::scalars::{FieldSpec, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreeLieError {
    #[error("empty generator list")]
    NoGenerators,
    #[error("generator {0:?} has weight 0")]
    ZeroWeight(String),
    #[error("duplicate generator {0:?}")]
    DuplicateGenerator(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("monomial {0} is not in the Hall set")]
    NotHall(String),
    #[error("{0}")]
    Parse(#[from] crate::expr::ParseError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub weight: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, weight: u32) -> Self {
        Generator { name: name.into(), weight }
    }
}

pub type MonoId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Node {
    Gen(usize),
    Pair(MonoId, MonoId),
}

#[derive(Debug, Default)]
struct Table {
    nodes: Vec<Node>,
    weights: Vec<u32>,
    pos: Vec<u32>,
    by_weight: Vec<Vec<MonoId>>,
    pairs: HashMap<(MonoId, MonoId), MonoId>,
    gen_mono: HashMap<usize, MonoId>,
    enumerated: u32,
}

type Product = Arc<[(MonoId, i64)]>;

/// The free Lie algebra on a finite set of weighted generators.
#[derive(Debug)]
pub struct FreeLieAlgebra {
    gens: Vec<Generator>,
    field: FieldSpec,
    order: Vec<usize>,
    names: HashMap<String, usize>,
    table: RwLock<Table>,
    memo: RwLock<HashMap<(MonoId, MonoId), Product>>,
}

impl FreeLieAlgebra {
    pub fn new(gens: Vec<Generator>, field: FieldSpec) -> Result<Arc<Self>, FreeLieError> {
        if gens.is_empty() {
            return Err(FreeLieError::NoGenerators);
        }
        let mut names = HashMap::new();
        for (i, g) in gens.iter().enumerate() {
            if g.weight == 0 {
                return Err(FreeLieError::ZeroWeight(g.name.clone()));
            }
            if names.insert(g.name.clone(), i).is_some() {
                return Err(FreeLieError::DuplicateGenerator(g.name.clone()));
            }
        }
        let mut order: Vec<usize> = (0..gens.len()).collect();
        order.sort_by_key(|&i| (gens[i].weight, i));
        let table = Table { by_weight: vec![Vec::new()], ..Default::default() };
        Ok(Arc::new(FreeLieAlgebra {
            gens,
            field,
            order,
            names,
            table: RwLock::new(table),
            memo: RwLock::new(HashMap::new()),
        }))
    }

    /// Convenience constructor: all generators of weight 1.
    pub fn on_names(names: &[&str], field: FieldSpec) -> Result<Arc<Self>, FreeLieError> {
        Self::new(names.iter().map(|n| Generator::new(*n, 1)).collect(), field)
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.names.get(name).copied()
    }

    /// Enumerates the Hall basis through weight `n`.
    pub fn ensure(&self, n: u32) {
        if self.table.read().unwrap().enumerated >= n {
            return;
        }
        let mut t = self.table.write().unwrap();
        while t.enumerated < n {
            let w = t.enumerated + 1;
            self.enumerate_weight(&mut t, w);
            t.enumerated = w;
        }
    }

    fn enumerate_weight(&self, t: &mut Table, n: u32) {
        let mut fresh: Vec<Node> = Vec::new();
        for &g in &self.order {
            if self.gens[g].weight == n {
                fresh.push(Node::Gen(g));
            }
        }
        for wb in n.div_ceil(2)..n {
            let wa = n - wb;
            if wa == 0 || wa > wb {
                continue;
            }
            for &b in &t.by_weight[wb as usize] {
                let floor = match t.nodes[b as usize] {
                    Node::Pair(c, _) => Some(c),
                    Node::Gen(_) => None,
                };
                for &a in &t.by_weight[wa as usize] {
                    if a >= b {
                        break;
                    }
                    if floor.is_none_or(|c| a >= c) {
                        fresh.push(Node::Pair(a, b));
                    }
                }
            }
        }
        let mut ids = Vec::with_capacity(fresh.len());
        for (k, node) in fresh.into_iter().enumerate() {
            let id = t.nodes.len() as MonoId;
            t.nodes.push(node);
            t.weights.push(n);
            t.pos.push(k as u32);
            match node {
                Node::Gen(g) => {
                    t.gen_mono.insert(g, id);
                }
                Node::Pair(a, b) => {
                    t.pairs.insert((a, b), id);
                }
            }
            ids.push(id);
        }
        t.by_weight.push(ids);
    }

    /// Hall monomials of weight `n`, in order.
    pub fn basis(&self, n: u32) -> Vec<MonoId> {
        if n == 0 {
            return Vec::new();
        }
        self.ensure(n);
        self.table.read().unwrap().by_weight[n as usize].clone()
    }

    pub fn dim(&self, n: u32) -> usize {
        if n == 0 {
            return 0;
        }
        self.ensure(n);
        self.table.read().unwrap().by_weight[n as usize].len()
    }

    pub fn node(&self, id: MonoId) -> Node {
        self.table.read().unwrap().nodes[id as usize]
    }

    pub fn weight(&self, id: MonoId) -> u32 {
        self.table.read().unwrap().weights[id as usize]
    }

    /// Index of the monomial among the basis of its weight.
    pub fn position(&self, id: MonoId) -> usize {
        self.table.read().unwrap().pos[id as usize] as usize
    }

    pub fn generator_monomial(&self, g: usize) -> MonoId {
        self.ensure(self.gens[g].weight);
        self.table.read().unwrap().gen_mono[&g]
    }

    /// Interned id of `[a,b]` when it is a Hall monomial.
    pub fn pair_id(&self, a: MonoId, b: MonoId) -> Option<MonoId> {
        self.ensure(self.weight(a) + self.weight(b));
        self.table.read().unwrap().pairs.get(&(a, b)).copied()
    }

    /// Normal form of the bracket of two Hall monomials, with integer coefficients.
    pub fn bracket_monomials(&self, u: MonoId, v: MonoId) -> Product {
        if u == v {
            return Arc::from(Vec::new());
        }
        if let Some(r) = self.memo.read().unwrap().get(&(u, v)) {
            return r.clone();
        }
        let res: Product = if u > v {
            self.bracket_monomials(v, u).iter().map(|&(m, c)| (m, -c)).collect::<Vec<_>>().into()
        } else {
            match self.node(v) {
                Node::Gen(_) => vec![(self.pair_id(u, v).expect("Hall pair"), 1)].into(),
                Node::Pair(c, _) if u >= c => vec![(self.pair_id(u, v).expect("Hall pair"), 1)].into(),
                Node::Pair(c, d) => {
                    // [u,[c,d]] = [[u,c],d] + [c,[u,d]]
                    let mut acc: HashMap<MonoId, i64> = HashMap::new();
                    for &(w, a) in self.bracket_monomials(u, c).iter() {
                        for &(m, b) in self.bracket_monomials(w, d).iter() {
                            accumulate(&mut acc, m, a, b);
                        }
                    }
                    for &(w, a) in self.bracket_monomials(u, d).iter() {
                        for &(m, b) in self.bracket_monomials(c, w).iter() {
                            accumulate(&mut acc, m, a, b);
                        }
                    }
                    let mut out: Vec<(MonoId, i64)> = acc.into_iter().filter(|e| e.1 != 0).collect();
                    out.sort_unstable();
                    out.into()
                }
            }
        };
        self.memo.write().unwrap().insert((u, v), res.clone());
        res
    }

    /// Canonical right-normed decomposition `v = [u_1, ..., u_m, z]`.
    pub fn canonical_decomposition(&self, v: MonoId) -> (Vec<MonoId>, usize) {
        let mut us = Vec::new();
        let mut cur = v;
        loop {
            match self.node(cur) {
                Node::Gen(g) => return (us, g),
                Node::Pair(a, b) => {
                    us.push(a);
                    cur = b;
                }
            }
        }
    }

    pub fn monomial_string(&self, id: MonoId) -> String {
        match self.node(id) {
            Node::Gen(g) => self.gens[g].name.clone(),
            Node::Pair(a, b) => format!("[{},{}]", self.monomial_string(a), self.monomial_string(b)),
        }
    }

    /// Distinct generator indices occurring in a monomial.
    pub fn letters(&self, id: MonoId) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(m) = stack.pop() {
            match self.node(m) {
                Node::Gen(g) => out.push(g),
                Node::Pair(a, b) => {
                    stack.push(a);
                    stack.push(b);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

fn accumulate(acc: &mut HashMap<MonoId, i64>, m: MonoId, a: i64, b: i64) {
    let p = a.checked_mul(b).expect("structure constant overflow");
    let e = acc.entry(m).or_insert(0);
    *e = e.checked_add(p).expect("structure constant overflow");
}

/// A Hall basis enumerated through a truncation weight.
#[derive(Debug, Clone)]
pub struct WeightedHallSet {
    pub algebra: Arc<FreeLieAlgebra>,
    pub max_weight: u32,
    pub by_weight: Vec<Vec<MonoId>>,
}

impl WeightedHallSet {
    pub fn counts(&self) -> Vec<usize> {
        self.by_weight[1..].iter().map(|v| v.len()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = MonoId> + '_ {
        self.by_weight.iter().flatten().copied()
    }

    pub fn contains(&self, id: MonoId) -> bool {
        let w = self.algebra.weight(id);
        w <= self.max_weight && self.by_weight[w as usize].contains(&id)
    }

    /// Canonical decomposition, rejecting monomials outside the enumerated set.
    pub fn canonical_decomposition(&self, v: MonoId) -> Result<(Vec<MonoId>, usize), FreeLieError> {
        if !self.contains(v) {
            return Err(FreeLieError::NotHall(format!("#{v}")));
        }
        Ok(self.algebra.canonical_decomposition(v))
    }
}

pub fn enumerate_hall(gens: Vec<Generator>, max_weight: u32, field: FieldSpec) -> Result<WeightedHallSet, FreeLieError> {
    let algebra = FreeLieAlgebra::new(gens, field)?;
    Ok(hall_set(&algebra, max_weight))
}

pub fn hall_set(algebra: &Arc<FreeLieAlgebra>, max_weight: u32) -> WeightedHallSet {
    let by_weight = (0..=max_weight).map(|n| algebra.basis(n)).collect();
    WeightedHallSet { algebra: algebra.clone(), max_weight, by_weight }
}

/// A finite combination of Hall monomials.
#[derive(Clone)]
pub struct LieElement {
    alg: Arc<FreeLieAlgebra>,
    terms: BTreeMap<MonoId, Scalar>,
}

impl fmt::Debug for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieElement({self})")
    }
}

impl PartialEq for LieElement {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.alg, &other.alg) && self.terms == other.terms
    }
}

impl Eq for LieElement {}

impl LieElement {
    pub fn zero(alg: &Arc<FreeLieAlgebra>) -> Self {
        LieElement { alg: alg.clone(), terms: BTreeMap::new() }
    }

    pub fn monomial(alg: &Arc<FreeLieAlgebra>, id: MonoId) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(id, alg.field().one());
        LieElement { alg: alg.clone(), terms }
    }

    pub fn generator(alg: &Arc<FreeLieAlgebra>, g: usize) -> Self {
        Self::monomial(alg, alg.generator_monomial(g))
    }

    pub fn named(alg: &Arc<FreeLieAlgebra>, name: &str) -> Result<Self, FreeLieError> {
        let g = alg.generator_index(name).ok_or_else(|| FreeLieError::UnknownGenerator(name.to_string()))?;
        Ok(Self::generator(alg, g))
    }

    pub fn from_terms<I: IntoIterator<Item = (MonoId, Scalar)>>(alg: &Arc<FreeLieAlgebra>, it: I) -> Self {
        let mut e = Self::zero(alg);
        for (m, c) in it {
            e.add_term(m, &c);
        }
        e
    }

    /// Element whose coordinates in the weight-`n` Hall basis are `v`.
    pub fn from_coords(alg: &Arc<FreeLieAlgebra>, n: u32, v: &SparseVec) -> Self {
        let basis = alg.basis(n);
        Self::from_terms(alg, v.iter().map(|(i, c)| (basis[*i], c.clone())))
    }

    pub fn algebra(&self) -> &Arc<FreeLieAlgebra> {
        &self.alg
    }

    pub fn terms(&self) -> &BTreeMap<MonoId, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: MonoId, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let s = match self.terms.get(&m) {
            Some(x) => x + c,
            None => c.clone(),
        };
        if s.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, s);
        }
    }

    fn same(&self, other: &LieElement) -> Result<(), FreeLieError> {
        if Arc::ptr_eq(&self.alg, &other.alg) {
            Ok(())
        } else {
            Err(FreeLieError::AlgebraMismatch)
        }
    }

    pub fn try_add(&self, other: &LieElement) -> Result<LieElement, FreeLieError> {
        self.same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &LieElement) -> Result<LieElement, FreeLieError> {
        self.try_add(&other.neg())
    }

    pub fn add(&self, other: &LieElement) -> LieElement {
        self.try_add(other).expect("elements of different algebras")
    }

    pub fn sub(&self, other: &LieElement) -> LieElement {
        self.try_sub(other).expect("elements of different algebras")
    }

    pub fn scale(&self, c: &Scalar) -> LieElement {
        if c.is_zero() {
            return Self::zero(&self.alg);
        }
        LieElement { alg: self.alg.clone(), terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect() }
    }

    pub fn neg(&self) -> LieElement {
        LieElement { alg: self.alg.clone(), terms: self.terms.iter().map(|(m, x)| (*m, -x)).collect() }
    }

    pub fn try_bracket(&self, other: &LieElement) -> Result<LieElement, FreeLieError> {
        self.same(other)?;
        let f = self.alg.field();
        let mut acc: HashMap<MonoId, Scalar> = HashMap::new();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                let ab = a * b;
                for &(m, k) in self.alg.bracket_monomials(*u, *v).iter() {
                    let t = &ab * &f.from_i64(k);
                    match acc.get_mut(&m) {
                        Some(x) => *x = &*x + &t,
                        None => {
                            acc.insert(m, t);
                        }
                    }
                }
            }
        }
        Ok(LieElement { alg: self.alg.clone(), terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() })
    }

    pub fn bracket(&self, other: &LieElement) -> LieElement {
        self.try_bracket(other).expect("elements of different algebras")
    }

    /// Distinct weights of the terms, ascending.
    pub fn weights(&self) -> Vec<u32> {
        let mut w: Vec<u32> = self.terms.keys().map(|m| self.alg.weight(*m)).collect();
        w.sort_unstable();
        w.dedup();
        w
    }

    pub fn is_homogeneous(&self) -> bool {
        self.weights().len() <= 1
    }

    /// The common weight of a nonzero homogeneous element.
    pub fn weight(&self) -> Option<u32> {
        match self.weights().as_slice() {
            [w] => Some(*w),
            _ => None,
        }
    }

    /// Coordinates in the Hall basis of weight `n` (terms of other weights ignored).
    pub fn coords(&self, n: u32) -> SparseVec {
        SparseVec::from_entries(
            self.terms
                .iter()
                .filter(|(m, _)| self.alg.weight(**m) == n)
                .map(|(m, c)| (self.alg.position(*m), c.clone())),
        )
    }

    /// Largest monomial with its coefficient.
    pub fn leading(&self) -> Option<(MonoId, &Scalar)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }
}

impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let mono = self.alg.monomial_string(*m);
            let (neg, abs) = if c.is_negative() { (true, -c) } else { (false, c.clone()) };
            let sep = match (k, neg) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            if abs.is_one() {
                write!(f, "{sep}{mono}")?;
            } else {
                write!(f, "{sep}{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

/// The Lie homomorphism of free Lie algebras determined by generator images.
pub struct Substitution {
    images: Vec<LieElement>,
    target: Arc<FreeLieAlgebra>,
    cache: HashMap<MonoId, LieElement>,
}

impl Substitution {
    pub fn new(target: &Arc<FreeLieAlgebra>, images: Vec<LieElement>) -> Self {
        Substitution { images, target: target.clone(), cache: HashMap::new() }
    }

    pub fn target(&self) -> &Arc<FreeLieAlgebra> {
        &self.target
    }

    pub fn monomial(&mut self, src: &FreeLieAlgebra, m: MonoId) -> LieElement {
        if let Some(e) = self.cache.get(&m) {
            return e.clone();
        }
        let e = match src.node(m) {
            Node::Gen(g) => self.images[g].clone(),
            Node::Pair(a, b) => {
                let (x, y) = (self.monomial(src, a), self.monomial(src, b));
                x.bracket(&y)
            }
        };
        self.cache.insert(m, e.clone());
        e
    }

    pub fn apply(&mut self, e: &LieElement) -> LieElement {
        let src = e.algebra().clone();
        let mut out = LieElement::zero(&self.target);
        for (m, c) in e.terms() {
            out = out.add(&self.monomial(&src, *m).scale(c));
        }
        out
    }
}

/// Re-expresses `e` in `target` by matching generator names.
pub fn transport(e: &LieElement, target: &Arc<FreeLieAlgebra>) -> Result<LieElement, FreeLieError> {
    let images = e
        .algebra()
        .gens()
        .iter()
        .map(|g| LieElement::named(target, &g.name).or_else(|_| Ok(LieElement::zero(target))))
        .collect::<Result<Vec<_>, FreeLieError>>()?;
    for m in e.terms().keys() {
        for g in e.algebra().letters(*m) {
            let name = &e.algebra().gens()[g].name;
            if target.generator_index(name).is_none() {
                return Err(FreeLieError::UnknownGenerator(name.clone()));
            }
        }
    }
    Ok(Substitution::new(target, images).apply(e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Arc<FreeLieAlgebra> {
        FreeLieAlgebra::on_names(&["x", "y"], FieldSpec::Rationals).unwrap()
    }

    #[test]
    fn witt_counts_two_generators() {
        let h = hall_set(&xy(), 5);
        assert_eq!(h.counts(), vec![2, 1, 2, 3, 6]);
        let one = FreeLieAlgebra::on_names(&["x"], FieldSpec::Rationals).unwrap();
        assert_eq!(hall_set(&one, 3).counts(), vec![1, 0, 0]);
    }

    #[test]
    fn weighted_counts() {
        let alg = FreeLieAlgebra::new(vec![Generator::new("a", 1), Generator::new("t", 2)], FieldSpec::Rationals).unwrap();
        assert_eq!(hall_set(&alg, 3).counts(), vec![1, 1, 1]);
    }

    #[test]
    fn antisymmetry_examples() {
        let alg = xy();
        let x = LieElement::named(&alg, "x").unwrap();
        let y = LieElement::named(&alg, "y").unwrap();
        assert!(x.bracket(&x).is_zero());
        assert_eq!(y.bracket(&x), x.bracket(&y).neg());
        let xy = x.bracket(&y);
        assert!(xy.bracket(&xy).is_zero());
        let s = xy.bracket(&x).add(&y.bracket(&x).bracket(&x));
        assert!(s.is_zero());
        assert_eq!(format!("{}", x.bracket(&y)), "[x,y]");
    }

    #[test]
    fn canonical_decompositions() {
        let alg = xy();
        let h = hall_set(&alg, 3);
        let (x, y) = (alg.generator_monomial(0), alg.generator_monomial(1));
        assert_eq!(h.canonical_decomposition(y).unwrap(), (vec![], 1));
        let xy = alg.pair_id(x, y).unwrap();
        assert_eq!(h.canonical_decomposition(xy).unwrap(), (vec![x], 1));
        let xxy = alg.pair_id(x, xy).unwrap();
        assert_eq!(h.canonical_decomposition(xxy).unwrap(), (vec![x, x], 1));
        assert!(alg.pair_id(y, x).is_none());
    }

    #[test]
    fn errors() {
        assert_eq!(FreeLieAlgebra::new(vec![], FieldSpec::Rationals).unwrap_err(), FreeLieError::NoGenerators);
        let dup = vec![Generator::new("x", 1), Generator::new("x", 2)];
        assert!(matches!(FreeLieAlgebra::new(dup, FieldSpec::Rationals), Err(FreeLieError::DuplicateGenerator(_))));
        let a = xy();
        let b = xy();
        let ea = LieElement::named(&a, "x").unwrap();
        let eb = LieElement::named(&b, "y").unwrap();
        assert_eq!(ea.try_bracket(&eb).unwrap_err(), FreeLieError::AlgebraMismatch);
    }
}
