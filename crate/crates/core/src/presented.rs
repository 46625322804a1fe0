//! Finitely presented graded Lie algebras `F(X)/I` with homogeneous relators.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::expr;
use crate::freelie::{FreeLieAlgebra, FreeLieError, Generator, LieElement, MonoId, Node, Substitution};
use crate::linalg::{kernel, Echelon, SparseMatrix, SparseVec, Subspace};
use crate::scalars::{FieldSpec, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentedError {
    #[error("relator {0} is not weight-homogeneous")]
    Inhomogeneous(String),
    #[error("relator {0} is zero")]
    ZeroRelator(usize),
    #[error("element is not weight-homogeneous")]
    InhomogeneousElement,
    #[error("element lives in a different free algebra")]
    AlgebraMismatch,
    #[error("inconclusive at degree {0}: generators beyond the truncation")]
    Inconclusive(u32),
    #[error(transparent)]
    FreeLie(#[from] FreeLieError),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

/// A homogeneous element of a presented algebra: weight plus coordinates in
/// the quotient basis of that weight.
pub type Homog = (u32, SparseVec);

/// One graded component of a presented algebra.
#[derive(Debug, Clone)]
pub struct Component {
    pub weight: u32,
    pub free_dim: usize,
    /// Semi-echelon form of the ideal component `I_n` in Hall coordinates of `F_n`.
    ideal: Echelon,
    /// Independent unreduced vectors spanning `I_n`; sparser than the echelon rows.
    spanning: Vec<SparseVec>,
    pub ideal_dim: usize,
    /// `dim [I,F]_n`.
    pub cons_dim: usize,
    /// Rank of the projection of `I_n` onto the generator coordinates.
    pub gen_rank: usize,
    /// Hall monomials of weight `n` whose classes form a basis of `L_n`.
    pub basis: Vec<MonoId>,
    qindex: Vec<Option<usize>>,
}

impl Component {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreeVerdict {
    FreeWitnessed,
    NotFree { weight: u32 },
    Inconclusive,
}

#[derive(Debug)]
pub struct PresentedLieAlgebra {
    free: Arc<FreeLieAlgebra>,
    relators: Vec<LieElement>,
    comps: RwLock<Vec<Arc<Component>>>,
    products: RwLock<HashMap<(MonoId, MonoId), SparseVec>>,
}

impl PresentedLieAlgebra {
    pub fn new(free: &Arc<FreeLieAlgebra>, relators: Vec<LieElement>) -> Result<Arc<Self>, PresentedError> {
        for (i, r) in relators.iter().enumerate() {
            if !Arc::ptr_eq(r.algebra(), free) {
                return Err(PresentedError::AlgebraMismatch);
            }
            if r.is_zero() {
                return Err(PresentedError::ZeroRelator(i));
            }
            if !r.is_homogeneous() {
                return Err(PresentedError::Inhomogeneous(r.to_string()));
            }
        }
        Ok(Arc::new(PresentedLieAlgebra {
            free: free.clone(),
            relators,
            comps: RwLock::new(Vec::new()),
            products: RwLock::new(HashMap::new()),
        }))
    }

    pub fn free_algebra(gens: Vec<Generator>, field: FieldSpec) -> Result<Arc<Self>, PresentedError> {
        Self::new(&FreeLieAlgebra::new(gens, field)?, Vec::new())
    }

    /// Builds `<gens | rels>` from relator text.
    pub fn from_text(gens: Vec<Generator>, field: FieldSpec, rels: &[&str]) -> Result<Arc<Self>, PresentedError> {
        let free = FreeLieAlgebra::new(gens, field)?;
        let relators = rels.iter().map(|r| expr::parse_element(r, &free)).collect::<Result<Vec<_>, _>>()?;
        Self::new(&free, relators)
    }

    pub fn free(&self) -> &Arc<FreeLieAlgebra> {
        &self.free
    }

    pub fn gens(&self) -> &[Generator] {
        self.free.gens()
    }

    pub fn field(&self) -> FieldSpec {
        self.free.field()
    }

    pub fn relators(&self) -> &[LieElement] {
        &self.relators
    }

    pub fn relator_weights(&self) -> Vec<u32> {
        self.relators.iter().map(|r| r.weight().unwrap()).collect()
    }

    pub fn component(&self, n: u32) -> Arc<Component> {
        assert!(n >= 1, "graded components start at weight 1");
        if let Some(c) = self.comps.read().unwrap().get(n as usize - 1) {
            return c.clone();
        }
        let mut comps = self.comps.write().unwrap();
        while comps.len() < n as usize {
            let w = comps.len() as u32 + 1;
            let c = self.compute_component(&comps, w);
            comps.push(Arc::new(c));
        }
        comps[n as usize - 1].clone()
    }

    fn compute_component(&self, lower: &[Arc<Component>], n: u32) -> Component {
        let f = &self.free;
        let field = f.field();
        let free_dim = f.dim(n);
        let mut ech = Echelon::new(field);
        let mut spanning = Vec::new();
        for (g, gen) in f.gens().iter().enumerate() {
            if gen.weight >= n {
                continue;
            }
            let x = LieElement::generator(f, g);
            let below = &lower[(n - gen.weight) as usize - 1];
            for v in &below.spanning {
                let e = LieElement::from_coords(f, n - gen.weight, v).bracket(&x).coords(n);
                if ech.insert(&e).is_some() {
                    spanning.push(e);
                }
            }
        }
        let cons_dim = ech.rank();
        for r in &self.relators {
            if r.weight() == Some(n) {
                let e = r.coords(n);
                if ech.insert(&e).is_some() {
                    spanning.push(e);
                }
            }
        }
        let ngen = f.gens().iter().filter(|g| g.weight == n).count();
        let pivots: Vec<usize> = ech.pivots().collect();
        let gen_rank = pivots.iter().filter(|&&p| p < ngen).count();
        let monos = f.basis(n);
        let mut qindex = vec![None; free_dim];
        let mut basis = Vec::new();
        let mut pi = 0;
        for (j, m) in monos.iter().enumerate() {
            if pi < pivots.len() && pivots[pi] == j {
                pi += 1;
                continue;
            }
            qindex[j] = Some(basis.len());
            basis.push(*m);
        }
        let ideal_dim = ech.rank();
        Component { weight: n, free_dim, ideal: ech, spanning, ideal_dim, cons_dim, gen_rank, basis, qindex }
    }

    /// `I_n` in canonical form.
    pub fn ideal_component(&self, n: u32) -> Subspace {
        let c = self.component(n);
        Subspace::from_vectors(c.free_dim, self.field(), c.spanning.iter())
    }

    pub fn dim(&self, n: u32) -> usize {
        self.component(n).dim()
    }

    pub fn dim_sequence(&self, max: u32) -> Vec<usize> {
        (1..=max).map(|n| self.dim(n)).collect()
    }

    /// Dimensions of `L/[L,L]` in weights `1..=max`.
    pub fn h1(&self, max: u32) -> Vec<usize> {
        (1..=max)
            .map(|n| {
                let c = self.component(n);
                let ngen = self.gens().iter().filter(|g| g.weight == n).count();
                ngen - c.gen_rank
            })
            .collect()
    }

    /// Dimensions of `H_2` in weights `1..=max` via `(I ∩ [F,F]) / [I,F]`.
    pub fn h2_hopf(&self, max: u32) -> Vec<usize> {
        (1..=max)
            .map(|n| {
                let c = self.component(n);
                c.ideal_dim - c.gen_rank - c.cons_dim
            })
            .collect()
    }

    pub fn is_free_up_to(&self, max: u32) -> FreeVerdict {
        if let Some(k) = self.h2_hopf(max).iter().position(|&d| d > 0) {
            return FreeVerdict::NotFree { weight: k as u32 + 1 };
        }
        if self.relator_weights().iter().all(|&w| w <= max) {
            FreeVerdict::FreeWitnessed
        } else {
            FreeVerdict::Inconclusive
        }
    }

    /// Quotient coordinates of a vector of `F_n`.
    pub fn reduce(&self, n: u32, v: &SparseVec) -> SparseVec {
        let c = self.component(n);
        let r = c.ideal.reduce(v);
        r.remap(|j| c.qindex[j])
    }

    /// Image of a free-algebra element, split by weight.
    pub fn project(&self, e: &LieElement) -> Result<Vec<Homog>, PresentedError> {
        if !Arc::ptr_eq(e.algebra(), &self.free) {
            return Err(PresentedError::AlgebraMismatch);
        }
        Ok(e.weights().into_iter().map(|n| (n, self.reduce(n, &e.coords(n)))).collect())
    }

    pub fn project_homogeneous(&self, e: &LieElement) -> Result<Homog, PresentedError> {
        let mut parts = self.project(e)?;
        match parts.len() {
            0 => Err(PresentedError::InhomogeneousElement),
            1 => Ok(parts.pop().unwrap()),
            _ => Err(PresentedError::InhomogeneousElement),
        }
    }

    /// The free-algebra representative of a quotient vector.
    pub fn lift(&self, n: u32, v: &SparseVec) -> LieElement {
        let c = self.component(n);
        LieElement::from_terms(&self.free, v.iter().map(|(i, s)| (c.basis[*i], s.clone())))
    }

    fn mono_product(&self, u: MonoId, v: MonoId) -> SparseVec {
        if let Some(p) = self.products.read().unwrap().get(&(u, v)) {
            return p.clone();
        }
        let f = &self.free;
        let n = f.weight(u) + f.weight(v);
        let e = LieElement::monomial(f, u).bracket(&LieElement::monomial(f, v));
        let p = self.reduce(n, &e.coords(n));
        self.products.write().unwrap().insert((u, v), p.clone());
        p
    }

    /// Bracket of homogeneous elements.
    pub fn bracket(&self, a: &Homog, b: &Homog) -> Homog {
        let n = a.0 + b.0;
        let (ca, cb) = (self.component(a.0), self.component(b.0));
        let mut acc: HashMap<usize, Scalar> = HashMap::new();
        for (i, x) in a.1.iter() {
            for (j, y) in b.1.iter() {
                let xy = x * y;
                for (k, z) in self.mono_product(ca.basis[*i], cb.basis[*j]).iter() {
                    let t = &xy * z;
                    match acc.get_mut(k) {
                        Some(s) => *s = &*s + &t,
                        None => {
                            acc.insert(*k, t);
                        }
                    }
                }
            }
        }
        (n, SparseVec::from_entries(acc))
    }

    /// Homogeneous image of a generator.
    pub fn generator(&self, g: usize) -> Homog {
        let w = self.gens()[g].weight;
        self.project_homogeneous(&LieElement::generator(&self.free, g)).unwrap_or((w, SparseVec::new()))
    }

    /// Tietze elimination of generators occurring linearly in a relator.
    ///
    /// Returns an isomorphic presentation on the surviving generators and the
    /// images of all original generators in its free algebra.
    pub fn simplify(self: &Arc<Self>) -> Result<(Arc<Self>, Vec<LieElement>), PresentedError> {
        let f = &self.free;
        let ng = f.gens().len();
        let mut images: Vec<Option<LieElement>> = vec![None; ng];
        let mut rels = self.relators.clone();
        loop {
            let kept = images.iter().filter(|i| i.is_none()).count();
            if kept <= 1 {
                break;
            }
            let found = rels.iter().enumerate().find_map(|(ri, r)| {
                (0..ng).rev().filter(|&g| images[g].is_none()).find_map(|g| {
                    let m = f.generator_monomial(g);
                    let c = r.terms().get(&m)?;
                    let linear = r.terms().keys().all(|&k| k == m || !f.letters(k).contains(&g));
                    linear.then(|| (ri, g, c.clone()))
                })
            });
            let Some((ri, g, c)) = found else { break };
            let r = rels.remove(ri);
            let inv = c.inv().expect("nonzero coefficient");
            let img = LieElement::generator(f, g).sub(&r.scale(&inv));
            let subst = (0..ng).map(|h| if h == g { img.clone() } else { LieElement::generator(f, h) }).collect();
            let mut s = Substitution::new(f, subst);
            rels = rels.iter().map(|r| s.apply(r)).filter(|r| !r.is_zero()).collect();
            for im in images.iter_mut().flatten() {
                *im = s.apply(im);
            }
            images[g] = Some(img);
        }
        if images.iter().all(Option::is_none) {
            let ids = (0..ng).map(|g| LieElement::generator(f, g)).collect();
            return Ok((self.clone(), ids));
        }
        let kept: Vec<usize> = (0..ng).filter(|&g| images[g].is_none()).collect();
        let free = FreeLieAlgebra::new(kept.iter().map(|&g| f.gens()[g].clone()).collect(), f.field())?;
        let mut pos = vec![None; ng];
        for (i, &g) in kept.iter().enumerate() {
            pos[g] = Some(i);
        }
        let onto = (0..ng)
            .map(|g| pos[g].map_or_else(|| LieElement::zero(&free), |i| LieElement::generator(&free, i)))
            .collect();
        let mut s = Substitution::new(&free, onto);
        let out: Vec<LieElement> =
            (0..ng).map(|g| images[g].as_ref().map_or_else(|| LieElement::generator(&free, pos[g].unwrap()), |e| s.apply(e))).collect();
        let rels = rels.iter().map(|r| s.apply(r)).collect();
        Ok((Self::new(&free, rels)?, out))
    }

    /// Text form accepted by [`parse_presentation`].
    pub fn to_text(&self) -> String {
        let mut s = format!("field = {}\n", self.field());
        for g in self.gens() {
            let _ = writeln!(s, "gen {} weight {}", g.name, g.weight);
        }
        for r in &self.relators {
            let _ = writeln!(s, "rel {r}");
        }
        s
    }
}

/// Parses the presentation file format, optionally overriding its field.
pub fn parse_presentation(text: &str, field: Option<FieldSpec>) -> Result<Arc<PresentedLieAlgebra>, PresentedError> {
    let mut file_field = None;
    let mut gens = Vec::new();
    let mut rels: Vec<(usize, String)> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |msg: String| PresentedError::Syntax { line: line_no, msg };
        if let Some(rest) = line.strip_prefix("field") {
            let value = rest.trim_start().strip_prefix('=').ok_or_else(|| syntax("expected 'field = ...'".into()))?;
            file_field = Some(value.trim().parse::<FieldSpec>().map_err(|e| syntax(e.to_string()))?);
        } else if let Some(rest) = line.strip_prefix("gen ") {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            match parts.as_slice() {
                [name] => gens.push(Generator::new(*name, 1)),
                [name, "weight", w] => {
                    let w: u32 = w.parse().map_err(|_| syntax(format!("bad weight {w:?}")))?;
                    gens.push(Generator::new(*name, w));
                }
                _ => return Err(syntax("expected 'gen <name> weight <w>'".into())),
            }
        } else if let Some(rest) = line.strip_prefix("rel ") {
            rels.push((line_no, rest.trim().to_string()));
        } else {
            return Err(syntax(format!("unrecognized line {line:?}")));
        }
    }
    let field = field.or(file_field).unwrap_or(FieldSpec::Rationals);
    let free = FreeLieAlgebra::new(gens, field)?;
    let mut relators = Vec::new();
    for (line, r) in rels {
        let e = expr::parse_element(&r, &free).map_err(|e| PresentedError::Syntax { line, msg: e.to_string() })?;
        relators.push(e);
    }
    PresentedLieAlgebra::new(&free, relators)
}

/// The subalgebra of a presented algebra generated by homogeneous elements.
#[derive(Debug)]
pub struct GradedSubalgebra {
    ambient: Arc<PresentedLieAlgebra>,
    names: Vec<String>,
    gens: Vec<Homog>,
    spans: RwLock<Vec<Subspace>>,
}

/// Result of presentation inference: the presentation plus the map to the ambient.
#[derive(Debug, Clone)]
pub struct InferredPresentation {
    pub presentation: Arc<PresentedLieAlgebra>,
    /// Indices of the subalgebra generators kept as presentation generators.
    pub chosen: Vec<usize>,
    pub images: Vec<Homog>,
    pub max_degree: u32,
}

impl GradedSubalgebra {
    pub fn new(ambient: &Arc<PresentedLieAlgebra>, gens: Vec<(String, LieElement)>) -> Result<Self, PresentedError> {
        let mut names = Vec::new();
        let mut hs = Vec::new();
        for (name, e) in gens {
            if e.is_zero() || !e.is_homogeneous() {
                return Err(PresentedError::InhomogeneousElement);
            }
            hs.push(ambient.project_homogeneous(&e)?);
            names.push(name);
        }
        Ok(Self::from_homog(ambient, names, hs))
    }

    pub fn from_homog(ambient: &Arc<PresentedLieAlgebra>, names: Vec<String>, gens: Vec<Homog>) -> Self {
        assert_eq!(names.len(), gens.len());
        GradedSubalgebra { ambient: ambient.clone(), names, gens, spans: RwLock::new(Vec::new()) }
    }

    pub fn ambient(&self) -> &Arc<PresentedLieAlgebra> {
        &self.ambient
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generators(&self) -> &[Homog] {
        &self.gens
    }

    /// `S_n` inside `L_n`.
    pub fn span(&self, n: u32) -> Subspace {
        if let Some(s) = self.spans.read().unwrap().get(n as usize - 1) {
            return s.clone();
        }
        let mut spans = self.spans.write().unwrap();
        while spans.len() < n as usize {
            let w = spans.len() as u32 + 1;
            let s = self.compute_span(&spans, w);
            spans.push(s);
        }
        spans[n as usize - 1].clone()
    }

    fn decomposable(&self, lower: &[Subspace], n: u32) -> Echelon {
        let mut ech = Echelon::new(self.ambient.field());
        for g in &self.gens {
            if g.0 >= n {
                continue;
            }
            for v in lower[(n - g.0) as usize - 1].basis() {
                let b = self.ambient.bracket(g, &(n - g.0, v.clone()));
                ech.insert(&b.1);
            }
        }
        ech
    }

    fn compute_span(&self, lower: &[Subspace], n: u32) -> Subspace {
        let mut ech = self.decomposable(lower, n);
        for g in &self.gens {
            if g.0 == n {
                ech.insert(&g.1);
            }
        }
        ech.into_subspace(self.ambient.dim(n))
    }

    pub fn dim_sequence(&self, max: u32) -> Vec<usize> {
        (1..=max).map(|n| self.span(n).dim()).collect()
    }

    pub fn contains(&self, e: &LieElement) -> Result<bool, PresentedError> {
        if e.is_zero() {
            return Ok(true);
        }
        let (n, v) = self.ambient.project_homogeneous(e)?;
        Ok(self.span(n).contains(&v))
    }

    pub fn contains_homog(&self, h: &Homog) -> bool {
        h.1.is_zero() || self.span(h.0).contains(&h.1)
    }

    /// Minimal graded presentation of the subalgebra, exact through weight `max`.
    pub fn infer_presentation(&self, max: u32) -> Result<InferredPresentation, PresentedError> {
        if self.gens.iter().any(|g| g.0 > max) {
            return Err(PresentedError::Inconclusive(max));
        }
        let field = self.ambient.field();
        let mut chosen = Vec::new();
        for n in 1..=max {
            self.span(n);
            let spans = self.spans.read().unwrap();
            let mut ech = self.decomposable(&spans, n);
            for (i, g) in self.gens.iter().enumerate() {
                if g.0 == n && ech.insert(&g.1).is_some() {
                    chosen.push(i);
                }
            }
        }
        let gens: Vec<Generator> = chosen.iter().map(|&i| Generator::new(self.names[i].clone(), self.gens[i].0)).collect();
        let images: Vec<Homog> = chosen.iter().map(|&i| self.gens[i].clone()).collect();
        let free = FreeLieAlgebra::new(gens, field)?;

        let mut phi: HashMap<MonoId, Homog> = HashMap::new();
        let mut lower: Vec<Subspace> = Vec::new();
        let mut relators = Vec::new();
        for n in 1..=max {
            let monos = free.basis(n);
            let target_dim = self.ambient.dim(n);
            let mut cols = Vec::with_capacity(monos.len());
            for &m in &monos {
                let img = match free.node(m) {
                    Node::Gen(g) => images[g].clone(),
                    Node::Pair(a, b) => self.ambient.bracket(&phi[&a], &phi[&b]),
                };
                cols.push(img.1.clone());
                phi.insert(m, img);
            }
            let ker = kernel(&SparseMatrix::from_columns(target_dim, field, &cols));
            let mut ech = Echelon::new(field);
            for (g, gen) in free.gens().iter().enumerate() {
                if gen.weight >= n {
                    continue;
                }
                let x = LieElement::generator(&free, g);
                for v in lower[(n - gen.weight) as usize - 1].basis() {
                    let e = LieElement::from_coords(&free, n - gen.weight, v).bracket(&x);
                    ech.insert(&e.coords(n));
                }
            }
            for k in ker.basis() {
                let rem = ech.reduce(k);
                if rem.is_zero() {
                    continue;
                }
                ech.insert(k);
                let lead = rem.entries()[0].1.inv().expect("nonzero");
                relators.push(LieElement::from_coords(&free, n, &rem.scale(&lead)));
            }
            lower.push(ech.into_subspace(monos.len()));
        }
        let presentation = PresentedLieAlgebra::new(&free, relators)?;
        Ok(InferredPresentation { presentation, chosen, images, max_degree: max })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ones(names: &[&str]) -> Vec<Generator> {
        names.iter().map(|n| Generator::new(*n, 1)).collect()
    }

    #[test]
    fn ideal_examples() {
        let p = PresentedLieAlgebra::from_text(ones(&["x", "y"]), FieldSpec::Rationals, &["[x,y]"]).unwrap();
        assert_eq!(p.ideal_component(2).dim(), 1);
        assert_eq!(p.ideal_component(3).dim(), 2);
        assert_eq!(p.dim_sequence(4), vec![2, 0, 0, 0]);
        let f = PresentedLieAlgebra::free_algebra(ones(&["x", "y"]), FieldSpec::Rationals).unwrap();
        assert_eq!(f.ideal_component(3).dim(), 0);
        assert_eq!(f.dim_sequence(5), vec![2, 1, 2, 3, 6]);
    }

    #[test]
    fn heisenberg_and_amalgam_dims() {
        let h = PresentedLieAlgebra::from_text(ones(&["a", "b"]), FieldSpec::Rationals, &["[a,[a,b]]", "[b,[a,b]]"]).unwrap();
        assert_eq!(h.dim_sequence(4), vec![2, 1, 0, 0]);
        let l = PresentedLieAlgebra::from_text(ones(&["a", "b", "x"]), FieldSpec::Rationals, &["[a,b]"]).unwrap();
        assert_eq!(l.dim_sequence(3), vec![3, 2, 5]);
    }

    #[test]
    fn homology_via_hopf() {
        let ab = PresentedLieAlgebra::from_text(ones(&["x", "y"]), FieldSpec::Rationals, &["[x,y]"]).unwrap();
        assert_eq!(ab.h1(3), vec![2, 0, 0]);
        assert_eq!(ab.h2_hopf(3), vec![0, 1, 0]);
        assert_eq!(ab.is_free_up_to(3), FreeVerdict::NotFree { weight: 2 });
        let one = PresentedLieAlgebra::from_text(ones(&["x", "y"]), FieldSpec::Rationals, &["[x,[x,y]]"]).unwrap();
        assert_eq!(one.h2_hopf(6), vec![0, 0, 1, 0, 0, 0]);
        let free3 = PresentedLieAlgebra::free_algebra(ones(&["x", "y", "z"]), FieldSpec::Rationals).unwrap();
        assert_eq!(free3.is_free_up_to(4), FreeVerdict::FreeWitnessed);
        assert_eq!(free3.h1(2), vec![3, 0]);
    }

    #[test]
    fn redundant_generator_and_relator() {
        let p = PresentedLieAlgebra::from_text(
            vec![Generator::new("x", 1), Generator::new("y", 1), Generator::new("u", 2)],
            FieldSpec::Rationals,
            &["u - [x,y]"],
        )
        .unwrap();
        assert_eq!(p.h1(3), vec![2, 0, 0]);
        assert_eq!(p.h2_hopf(3), vec![0, 0, 0]);
        assert_eq!(p.dim_sequence(4), vec![2, 1, 2, 3]);
    }

    #[test]
    fn subalgebra_membership_and_inference() {
        let l = PresentedLieAlgebra::from_text(ones(&["a", "b", "x"]), FieldSpec::Rationals, &["[a,b]"]).unwrap();
        let f = l.free().clone();
        let e = |s: &str| expr::parse_element(s, &f).unwrap();
        let s = GradedSubalgebra::new(
            &l,
            vec![("a".into(), e("a")), ("b".into(), e("b")), ("z".into(), e("[x,a]")), ("t".into(), e("[x,b]"))],
        )
        .unwrap();
        assert!(!s.contains(&e("x")).unwrap());
        assert!(s.contains(&e("[x,a]")).unwrap());
        assert!(s.contains(&e("a")).unwrap());
        let inf = s.infer_presentation(6).unwrap();
        let p = &inf.presentation;
        assert_eq!(p.gens().len(), 4);
        let mut w = p.relator_weights();
        w.sort();
        assert_eq!(w, vec![2, 3]);
        assert_eq!(p.dim_sequence(6), s.dim_sequence(6));
        assert_eq!(p.h1(6).iter().sum::<usize>(), 4);
        assert_eq!(p.h2_hopf(6).iter().sum::<usize>(), 2);

        let m = GradedSubalgebra::new(&l, vec![("a".into(), e("a")), ("b".into(), e("b"))]).unwrap();
        let pm = m.infer_presentation(4).unwrap().presentation;
        assert_eq!(pm.relators().len(), 1);
        assert_eq!(pm.relators()[0].to_string(), "[a,b]");
    }

    #[test]
    fn presentation_text_round_trip() {
        let text = "field = Fp:7\ngen x weight 1\ngen y weight 2\nrel [x,[x,y]]\n";
        let p = parse_presentation(text, None).unwrap();
        assert_eq!(p.field(), FieldSpec::prime(7).unwrap());
        let q = parse_presentation(&p.to_text(), None).unwrap();
        assert_eq!(p.dim_sequence(6), q.dim_sequence(6));
        let err = parse_presentation("gen x\nrel [x,q]\n", None).unwrap_err();
        assert!(matches!(err, PresentedError::Syntax { line: 2, .. }));
        let ov = parse_presentation(text, Some(FieldSpec::Rationals)).unwrap();
        assert_eq!(ov.field(), FieldSpec::Rationals);
    }

    #[test]
    fn simplify_eliminates_linear_generators() {
        let gens = vec![Generator::new("a", 1), Generator::new("b", 2), Generator::new("c", 2), Generator::new("d", 1)];
        let p = PresentedLieAlgebra::from_text(gens, FieldSpec::Rationals, &["b - c", "d", "[a,[a,b]]"]).unwrap();
        let (q, images) = p.simplify().unwrap();
        assert_eq!(q.gens().len(), 2);
        assert_eq!(q.dim_sequence(7), p.dim_sequence(7));
        assert_eq!(images[2].to_string(), "b");
        assert!(images[3].is_zero());
        let z = PresentedLieAlgebra::from_text(vec![Generator::new("z", 1)], FieldSpec::Rationals, &["z"]).unwrap();
        assert_eq!(z.simplify().unwrap().0.dim_sequence(3), vec![0, 0, 0]);
    }
}
