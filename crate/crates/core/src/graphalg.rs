//! Graphs of graded Lie algebras, their fundamental algebras, and the exact
//! sequence of induced modules attached to them.
//!
//! Structure maps are given on generators. Homomorphisms are validated by
//! relator images and rank checks, derivations by the Leibniz law on the
//! kernel of the free cover of their domain. All checks are exact over the
//! chosen field and hold up to the stated truncation.

use std::collections::{HashMap, VecDeque};
use std::path::Path;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use thiserror::Error;

use crate::envelope::{Envelope, EnvelopeError, HilbertSeries, InducedModule};
use crate::expr;
use crate::freelie::{FreeLieAlgebra, FreeLieError, Generator, LieElement, MonoId, Node, Substitution};
use crate::homology::{homology_table, mayer_vietoris_check, MvReport};
use crate::linalg::{kernel, Echelon, SparseMatrix, SparseVec, Subspace};
use crate::presented::{parse_presentation, GradedSubalgebra, Homog, PresentedError, PresentedLieAlgebra};
use crate::scalars::FieldSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error(transparent)]
    Presented(#[from] PresentedError),
    #[error(transparent)]
    FreeLie(#[from] FreeLieError),
    #[error(transparent)]
    Envelope(#[from] EnvelopeError),
    #[error("expected {expected} generator images, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("image of generator {0} has the wrong weight")]
    WeightMismatch(String),
    #[error("relator {0} does not map to zero")]
    RelatorNotKilled(String),
    #[error("map is not injective in weight {0}")]
    NotInjective(u32),
    #[error("Leibniz law fails in weight {weight} on {element}")]
    Leibniz { weight: u32, element: String },
    #[error("stable letter weight must be positive")]
    ZeroShift,
    #[error("generator name {0} is used twice")]
    NameClash(String),
    #[error("algebras are defined over different fields")]
    FieldMismatch,
    #[error("{0}")]
    Forest(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("duplicate id {0}")]
    DuplicateId(String),
    #[error("{what} does not embed in the fundamental algebra: weight {weight}")]
    Embedding { what: String, weight: u32 },
    #[error("graph is not connected")]
    NotConnected,
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
}

fn homog_of(p: &PresentedLieAlgebra, e: &LieElement, weight: u32, name: &str) -> Result<Homog, GraphError> {
    if !Arc::ptr_eq(e.algebra(), p.free()) {
        return Err(PresentedError::AlgebraMismatch.into());
    }
    if e.is_zero() {
        return Ok((weight, SparseVec::new()));
    }
    match e.weight() {
        Some(w) if w == weight => Ok(p.project_homogeneous(e)?),
        _ => Err(GraphError::WeightMismatch(name.to_string())),
    }
}

/// Parses a generator image; `0` denotes the zero element.
pub fn parse_value(text: &str, alg: &Arc<FreeLieAlgebra>) -> Result<LieElement, FreeLieError> {
    if text.trim() == "0" {
        return Ok(LieElement::zero(alg));
    }
    expr::parse_element(text, alg)
}

/// The same presentation on new generator names.
pub fn rename(p: &Arc<PresentedLieAlgebra>, names: &[String]) -> Result<Arc<PresentedLieAlgebra>, GraphError> {
    if names.len() != p.gens().len() {
        return Err(GraphError::Arity { expected: p.gens().len(), got: names.len() });
    }
    let gens = p.gens().iter().zip(names).map(|(g, n)| Generator::new(n.clone(), g.weight)).collect();
    let free = FreeLieAlgebra::new(gens, p.field())?;
    let mut s = Substitution::new(&free, (0..names.len()).map(|i| LieElement::generator(&free, i)).collect());
    let rels = p.relators().iter().map(|r| s.apply(r)).collect();
    Ok(PresentedLieAlgebra::new(&free, rels)?)
}

fn generators_by_name(free: &Arc<FreeLieAlgebra>, names: &[String]) -> Result<Vec<LieElement>, GraphError> {
    names.iter().map(|n| Ok(LieElement::named(free, n)?)).collect()
}

/// A weight-preserving homomorphism of presented algebras, given on generators.
#[derive(Debug)]
pub struct LieHomomorphism {
    source: Arc<PresentedLieAlgebra>,
    target: Arc<PresentedLieAlgebra>,
    images: Vec<LieElement>,
    gen_images: Vec<Homog>,
    memo: Mutex<HashMap<MonoId, Homog>>,
}

impl Clone for LieHomomorphism {
    fn clone(&self) -> Self {
        LieHomomorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            images: self.images.clone(),
            gen_images: self.gen_images.clone(),
            memo: Mutex::new(HashMap::new()),
        }
    }
}

impl LieHomomorphism {
    /// `images[g]` lives in the free algebra of `target`.
    pub fn new(
        source: &Arc<PresentedLieAlgebra>,
        target: &Arc<PresentedLieAlgebra>,
        images: Vec<LieElement>,
    ) -> Result<Self, GraphError> {
        if images.len() != source.gens().len() {
            return Err(GraphError::Arity { expected: source.gens().len(), got: images.len() });
        }
        if source.field() != target.field() {
            return Err(GraphError::FieldMismatch);
        }
        let gen_images = source
            .gens()
            .iter()
            .zip(&images)
            .map(|(g, e)| homog_of(target, e, g.weight, &g.name))
            .collect::<Result<_, _>>()?;
        Ok(LieHomomorphism {
            source: source.clone(),
            target: target.clone(),
            images,
            gen_images,
            memo: Mutex::new(HashMap::new()),
        })
    }

    /// Images written as `(generator, expression)` pairs over the target's generators.
    pub fn from_text(
        source: &Arc<PresentedLieAlgebra>,
        target: &Arc<PresentedLieAlgebra>,
        assignments: &[(&str, &str)],
    ) -> Result<Self, GraphError> {
        let mut images = Vec::new();
        for g in source.gens() {
            let text = assignments
                .iter()
                .find(|(n, _)| *n == g.name)
                .map(|(_, t)| *t)
                .ok_or_else(|| FreeLieError::UnknownGenerator(g.name.clone()))?;
            images.push(parse_value(text, target.free())?);
        }
        Self::new(source, target, images)
    }

    pub fn source(&self) -> &Arc<PresentedLieAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<PresentedLieAlgebra> {
        &self.target
    }

    pub fn images(&self) -> &[LieElement] {
        &self.images
    }

    fn mono(&self, m: MonoId) -> Homog {
        if let Some(h) = self.memo.lock().unwrap().get(&m) {
            return h.clone();
        }
        let h = match self.source.free().node(m) {
            Node::Gen(g) => self.gen_images[g].clone(),
            Node::Pair(a, b) => {
                let (x, y) = (self.mono(a), self.mono(b));
                self.target.bracket(&x, &y)
            }
        };
        self.memo.lock().unwrap().insert(m, h.clone());
        h
    }

    /// Image of a homogeneous element of the source free algebra.
    pub fn map_free(&self, e: &LieElement, n: u32) -> Homog {
        let mut acc = SparseVec::new();
        for (m, c) in e.terms() {
            acc = acc.add_scaled(c, &self.mono(*m).1);
        }
        (n, acc)
    }

    pub fn map(&self, h: &Homog) -> Homog {
        let comp = self.source.component(h.0);
        let mut acc = SparseVec::new();
        for (i, c) in h.1.iter() {
            acc = acc.add_scaled(c, &self.mono(comp.basis[*i]).1);
        }
        (h.0, acc)
    }

    pub fn check_relators(&self) -> Result<(), GraphError> {
        for r in self.source.relators() {
            let w = r.weight().expect("relators are homogeneous");
            if !self.map_free(r, w).1.is_zero() {
                return Err(GraphError::RelatorNotKilled(r.to_string()));
            }
        }
        Ok(())
    }

    /// Rank check of the map on each weight up to `max`.
    pub fn check_injective(&self, max: u32) -> Result<(), GraphError> {
        let f = self.source.field();
        for n in 1..=max {
            let d = self.source.dim(n);
            let mut ech = Echelon::new(f);
            for i in 0..d {
                ech.insert(&self.map(&(n, SparseVec::unit(i, f))).1);
            }
            if ech.rank() < d {
                return Err(GraphError::NotInjective(n));
            }
        }
        Ok(())
    }

    pub fn validate(&self, max: u32) -> Result<(), GraphError> {
        self.check_relators()?;
        self.check_injective(max)
    }

    /// The image as a subalgebra of the target.
    pub fn image(&self) -> GradedSubalgebra {
        let (names, gens) = self
            .source
            .gens()
            .iter()
            .zip(&self.gen_images)
            .filter(|(_, h)| !h.1.is_zero())
            .map(|(g, h)| (g.name.clone(), h.clone()))
            .unzip();
        GradedSubalgebra::from_homog(&self.target, names, gens)
    }
}

/// A derivation `d: A -> L` of weight `shift` on a subalgebra `A` of `L`, given
/// on the generators of `A`.
#[derive(Debug)]
pub struct LieDerivation {
    domain: Arc<GradedSubalgebra>,
    values: Vec<Homog>,
    shift: u32,
}

impl LieDerivation {
    /// `values[g]` lives in the free algebra of the ambient algebra.
    pub fn new(domain: Arc<GradedSubalgebra>, values: Vec<LieElement>, shift: u32) -> Result<Self, GraphError> {
        if shift == 0 {
            return Err(GraphError::ZeroShift);
        }
        let gens = domain.generators();
        if values.len() != gens.len() {
            return Err(GraphError::Arity { expected: gens.len(), got: values.len() });
        }
        let amb = domain.ambient().clone();
        let values = values
            .iter()
            .zip(gens.iter().zip(domain.names()))
            .map(|(v, (g, name))| homog_of(&amb, v, g.0 + shift, name))
            .collect::<Result<_, _>>()?;
        Ok(LieDerivation { domain, values, shift })
    }

    /// `b -> [h, b]` restricted to the domain.
    pub fn inner(domain: Arc<GradedSubalgebra>, h: &Homog) -> Self {
        let amb = domain.ambient().clone();
        let values = domain.generators().iter().map(|g| amb.bracket(h, g)).collect();
        LieDerivation { domain, values, shift: h.0 }
    }

    pub fn domain(&self) -> &Arc<GradedSubalgebra> {
        &self.domain
    }

    pub fn ambient(&self) -> &Arc<PresentedLieAlgebra> {
        self.domain.ambient()
    }

    pub fn values(&self) -> &[Homog] {
        &self.values
    }

    pub fn shift(&self) -> u32 {
        self.shift
    }

    /// Verifies that the derivation of the free cover `F(A) -> L` determined by
    /// the generator values kills the kernel of `F(A) -> L` in weights up to `max`.
    pub fn check_leibniz(&self, max: u32) -> Result<(), GraphError> {
        let gens = self.domain.generators();
        if gens.is_empty() {
            return Ok(());
        }
        let amb = self.ambient();
        let field = amb.field();
        let names = self.domain.names();
        let cover = FreeLieAlgebra::new(
            names.iter().zip(gens).map(|(n, g)| Generator::new(n.clone(), g.0)).collect(),
            field,
        )?;
        let mut memo: HashMap<MonoId, (Homog, Homog)> = HashMap::new();
        for n in 1..=max {
            let basis = cover.basis(n);
            if basis.is_empty() {
                continue;
            }
            let mut cols = Vec::new();
            let mut ders = Vec::new();
            for &m in &basis {
                let (p, d) = self.cover_images(&cover, m, &mut memo);
                cols.push(p.1);
                ders.push(d);
            }
            let ker = kernel(&SparseMatrix::from_columns(amb.dim(n), field, &cols));
            for k in ker.basis() {
                let mut acc = SparseVec::new();
                for (i, c) in k.iter() {
                    acc = acc.add_scaled(c, &ders[*i].1);
                }
                if !acc.is_zero() {
                    let element = LieElement::from_coords(&cover, n, k).to_string();
                    return Err(GraphError::Leibniz { weight: n, element });
                }
            }
        }
        Ok(())
    }

    fn cover_images(&self, cover: &FreeLieAlgebra, m: MonoId, memo: &mut HashMap<MonoId, (Homog, Homog)>) -> (Homog, Homog) {
        if let Some(x) = memo.get(&m) {
            return x.clone();
        }
        let amb = self.ambient();
        let out = match cover.node(m) {
            Node::Gen(g) => (self.domain.generators()[g].clone(), self.values[g].clone()),
            Node::Pair(a, b) => {
                let (pa, da) = self.cover_images(cover, a, memo);
                let (pb, db) = self.cover_images(cover, b, memo);
                let p = amb.bracket(&pa, &pb);
                let x = amb.bracket(&pa, &db);
                let y = amb.bracket(&da, &pb);
                (p, (x.0, x.1.add(&y.1)))
            }
        };
        memo.insert(m, out.clone());
        out
    }
}

fn glue(
    l1: &Arc<PresentedLieAlgebra>,
    l2: &Arc<PresentedLieAlgebra>,
    pairs: &[(LieElement, LieElement)],
) -> Result<Arc<PresentedLieAlgebra>, GraphError> {
    if l1.field() != l2.field() {
        return Err(GraphError::FieldMismatch);
    }
    for g in l2.gens() {
        if l1.free().generator_index(&g.name).is_some() {
            return Err(GraphError::NameClash(g.name.clone()));
        }
    }
    let gens = l1.gens().iter().chain(l2.gens()).cloned().collect();
    let free = FreeLieAlgebra::new(gens, l1.field())?;
    let mut rels = Vec::new();
    for r in l1.relators().iter().chain(l2.relators()) {
        rels.push(expr_transport(r, &free)?);
    }
    for (a, b) in pairs {
        let d = expr_transport(a, &free)?.sub(&expr_transport(b, &free)?);
        if !d.is_zero() {
            rels.push(d);
        }
    }
    Ok(PresentedLieAlgebra::new(&free, rels)?)
}

fn expr_transport(e: &LieElement, target: &Arc<FreeLieAlgebra>) -> Result<LieElement, GraphError> {
    Ok(crate::freelie::transport(e, target)?)
}

/// `L1 *_{L0} L2` for `sigma: L0 -> L1` and `tau: L0 -> L2`, after checking both
/// maps up to weight `max`. Generator names of `L1` and `L2` must be disjoint.
pub fn amalgam(sigma: &LieHomomorphism, tau: &LieHomomorphism, max: u32) -> Result<Arc<PresentedLieAlgebra>, GraphError> {
    if !Arc::ptr_eq(sigma.source(), tau.source()) {
        return Err(PresentedError::AlgebraMismatch.into());
    }
    sigma.validate(max)?;
    tau.validate(max)?;
    let pairs: Vec<_> = sigma.images().iter().cloned().zip(tau.images().iter().cloned()).collect();
    glue(sigma.target(), tau.target(), &pairs)
}

pub fn free_product(l1: &Arc<PresentedLieAlgebra>, l2: &Arc<PresentedLieAlgebra>) -> Result<Arc<PresentedLieAlgebra>, GraphError> {
    glue(l1, l2, &[])
}

fn hnn_raw(
    base: &Arc<PresentedLieAlgebra>,
    stable: &str,
    weight: u32,
    pairs: &[(LieElement, LieElement)],
) -> Result<Arc<PresentedLieAlgebra>, GraphError> {
    if base.free().generator_index(stable).is_some() {
        return Err(GraphError::NameClash(stable.to_string()));
    }
    let mut gens = base.gens().to_vec();
    gens.push(Generator::new(stable, weight));
    let free = FreeLieAlgebra::new(gens, base.field())?;
    let t = LieElement::named(&free, stable)?;
    let mut rels = Vec::new();
    for r in base.relators() {
        rels.push(expr_transport(r, &free)?);
    }
    for (a, d) in pairs {
        let r = t.bracket(&expr_transport(a, &free)?).sub(&expr_transport(d, &free)?);
        if !r.is_zero() {
            rels.push(r);
        }
    }
    Ok(PresentedLieAlgebra::new(&free, rels)?)
}

/// `<L, t | [t, a] = d(a), a in A>` with `t` of weight `d.shift()`, after checking
/// the Leibniz law up to weight `max`.
pub fn hnn(der: &LieDerivation, stable: &str, max: u32) -> Result<Arc<PresentedLieAlgebra>, GraphError> {
    der.check_leibniz(max)?;
    let base = der.ambient();
    let pairs: Vec<_> = der
        .domain()
        .generators()
        .iter()
        .zip(der.values())
        .map(|(a, d)| (base.lift(a.0, &a.1), base.lift(d.0, &d.1)))
        .collect();
    hnn_raw(base, stable, der.shift(), &pairs)
}

#[derive(Debug, Clone)]
pub struct GraphVertex {
    pub id: String,
    pub algebra: Arc<PresentedLieAlgebra>,
}

#[derive(Debug, Clone)]
pub enum EdgeKind {
    /// Forest edge with `tau_e: L_e -> L_dst`.
    Forest { tau: LieHomomorphism },
    /// Edge outside the forest: stable letter of weight `weight` and
    /// `d_e: L_e -> L_dst` given on generators of `L_e`.
    Stable { derivation: Vec<LieElement>, weight: u32 },
}

#[derive(Debug, Clone)]
pub struct GraphEdge {
    pub id: String,
    pub src: usize,
    pub dst: usize,
    pub algebra: Arc<PresentedLieAlgebra>,
    pub sigma: LieHomomorphism,
    pub kind: EdgeKind,
}

impl GraphEdge {
    pub fn is_forest(&self) -> bool {
        matches!(self.kind, EdgeKind::Forest { .. })
    }

    pub fn is_loop(&self) -> bool {
        self.src == self.dst
    }

    /// Weight of the stable letter, or 0 for forest edges.
    pub fn shift(&self) -> u32 {
        match self.kind {
            EdgeKind::Forest { .. } => 0,
            EdgeKind::Stable { weight, .. } => weight,
        }
    }
}

/// A finite graph with vertex and edge algebras, edge monomorphisms and a
/// fixed maximal forest.
#[derive(Debug, Clone, Default)]
pub struct GraphOfLieAlgebras {
    vertices: Vec<GraphVertex>,
    edges: Vec<GraphEdge>,
}

impl GraphOfLieAlgebras {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertices(&self) -> &[GraphVertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    fn require_vertex(&self, id: &str) -> Result<usize, GraphError> {
        self.vertex_index(id).ok_or_else(|| GraphError::UnknownVertex(id.to_string()))
    }

    fn check_new_id(&self, id: &str) -> Result<(), GraphError> {
        if self.vertices.iter().any(|v| v.id == id) || self.edges.iter().any(|e| e.id == id) {
            return Err(GraphError::DuplicateId(id.to_string()));
        }
        Ok(())
    }

    pub fn add_vertex(&mut self, id: &str, algebra: Arc<PresentedLieAlgebra>) -> Result<usize, GraphError> {
        self.check_new_id(id)?;
        self.vertices.push(GraphVertex { id: id.to_string(), algebra });
        Ok(self.vertices.len() - 1)
    }

    /// `sigma` and `tau` are generator images in the free algebras of the endpoint algebras.
    pub fn add_forest_edge(
        &mut self,
        id: &str,
        src: &str,
        dst: &str,
        algebra: Arc<PresentedLieAlgebra>,
        sigma: Vec<LieElement>,
        tau: Vec<LieElement>,
    ) -> Result<usize, GraphError> {
        self.check_new_id(id)?;
        let (s, d) = (self.require_vertex(src)?, self.require_vertex(dst)?);
        let sigma = LieHomomorphism::new(&algebra, &self.vertices[s].algebra, sigma)?;
        let tau = LieHomomorphism::new(&algebra, &self.vertices[d].algebra, tau)?;
        self.edges.push(GraphEdge { id: id.to_string(), src: s, dst: d, algebra, sigma, kind: EdgeKind::Forest { tau } });
        Ok(self.edges.len() - 1)
    }

    /// `derivation` gives `d_e` on generators of the edge algebra, valued in the destination algebra.
    pub fn add_stable_edge(
        &mut self,
        id: &str,
        src: &str,
        dst: &str,
        algebra: Arc<PresentedLieAlgebra>,
        sigma: Vec<LieElement>,
        derivation: Vec<LieElement>,
        weight: u32,
    ) -> Result<usize, GraphError> {
        self.check_new_id(id)?;
        if weight == 0 {
            return Err(GraphError::ZeroShift);
        }
        let (s, d) = (self.require_vertex(src)?, self.require_vertex(dst)?);
        let sigma = LieHomomorphism::new(&algebra, &self.vertices[s].algebra, sigma)?;
        if derivation.len() != algebra.gens().len() {
            return Err(GraphError::Arity { expected: algebra.gens().len(), got: derivation.len() });
        }
        let target = &self.vertices[d].algebra;
        for (g, v) in algebra.gens().iter().zip(&derivation) {
            homog_of(target, v, g.weight + weight, &g.name)?;
        }
        self.edges.push(GraphEdge {
            id: id.to_string(),
            src: s,
            dst: d,
            algebra,
            sigma,
            kind: EdgeKind::Stable { derivation, weight },
        });
        Ok(self.edges.len() - 1)
    }

    /// Connected component label of each vertex in the underlying graph.
    pub fn components(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.vertices.len());
        for e in &self.edges {
            uf.union(e.src, e.dst);
        }
        let roots: Vec<usize> = (0..self.vertices.len()).map(|v| uf.find(v)).collect();
        let mut labels = HashMap::new();
        roots.iter().map(|r| { let k = labels.len(); *labels.entry(*r).or_insert(k) }).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().iter().all(|&c| c == 0)
    }

    /// Checks the forest and the field, and validates every edge homomorphism up to `max`.
    pub fn validate(&self, max: u32) -> Result<(), GraphError> {
        let field = self.vertices.first().map(|v| v.algebra.field());
        for alg in self.vertices.iter().map(|v| &v.algebra).chain(self.edges.iter().map(|e| &e.algebra)) {
            if Some(alg.field()) != field {
                return Err(GraphError::FieldMismatch);
            }
        }
        let mut uf = UnionFind::new(self.vertices.len());
        for e in self.edges.iter().filter(|e| e.is_forest()) {
            if e.is_loop() {
                return Err(GraphError::Forest(format!("forest edge {} is a loop", e.id)));
            }
            if !uf.union(e.src, e.dst) {
                return Err(GraphError::Forest(format!("forest edges contain a cycle through {}", e.id)));
            }
        }
        for e in self.edges.iter().filter(|e| !e.is_forest()) {
            if uf.find(e.src) != uf.find(e.dst) {
                return Err(GraphError::Forest(format!("forest is not maximal: {} joins two forest components", e.id)));
            }
        }
        for e in &self.edges {
            e.sigma.validate(max)?;
            if let EdgeKind::Forest { tau } = &e.kind {
                tau.validate(max)?;
            }
        }
        Ok(())
    }

    /// The largest generator or stable-letter weight occurring in the data.
    pub fn max_structure_weight(&self) -> u32 {
        let gens = self.vertices.iter().map(|v| &v.algebra).chain(self.edges.iter().map(|e| &e.algebra));
        let g = gens.flat_map(|a| a.gens().iter().map(|g| g.weight)).max().unwrap_or(0);
        g.max(self.edges.iter().map(|e| e.shift()).max().unwrap_or(0))
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        self.0[x] = r;
        r
    }

    /// False if already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
        ra != rb
    }
}

/// One gluing step of the fundamental algebra construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceStep {
    Root { vertex: usize },
    /// Free product with the first vertex of a further component.
    FreeProduct { vertex: usize },
    /// Amalgam along a forest edge, adding `vertex` to the part containing `attach`.
    Amalgam { edge: usize, attach: usize, vertex: usize },
    Hnn { edge: usize },
}

impl TraceStep {
    pub fn describe(&self, g: &GraphOfLieAlgebras) -> String {
        match *self {
            TraceStep::Root { vertex } => format!("start at {}", g.vertices[vertex].id),
            TraceStep::FreeProduct { vertex } => format!("free product with {}", g.vertices[vertex].id),
            TraceStep::Amalgam { edge, attach, vertex } => {
                format!("amalgam along {} adding {} to {}", g.edges[edge].id, g.vertices[vertex].id, g.vertices[attach].id)
            }
            TraceStep::Hnn { edge } => format!("HNN extension along {}", g.edges[edge].id),
        }
    }
}

/// The fundamental algebra of a graph of Lie algebras.
#[derive(Debug, Clone)]
pub struct FundamentalAlgebra {
    /// The iterated amalgam/HNN presentation.
    pub presentation: Arc<PresentedLieAlgebra>,
    pub trace: Vec<TraceStep>,
    /// Generator names of each vertex algebra inside the presentation.
    pub vertex_names: Vec<Vec<String>>,
    /// Stable letter of each edge outside the forest.
    pub stable_letters: Vec<Option<String>>,
    working: Arc<PresentedLieAlgebra>,
    into_working: Vec<LieElement>,
}

impl FundamentalAlgebra {
    /// An isomorphic presentation with linearly occurring generators eliminated.
    pub fn working(&self) -> &Arc<PresentedLieAlgebra> {
        &self.working
    }

    pub fn to_working(&self, e: &LieElement) -> LieElement {
        Substitution::new(self.working.free(), self.into_working.clone()).apply(e)
    }

    fn named_images(&self, names: &[String]) -> Vec<LieElement> {
        names
            .iter()
            .map(|n| self.into_working[self.presentation.free().generator_index(n).expect("known name")].clone())
            .collect()
    }

    /// Image of an element of the free algebra on the generators of vertex `v`.
    pub fn from_vertex(&self, v: usize, e: &LieElement) -> LieElement {
        Substitution::new(self.working.free(), self.named_images(&self.vertex_names[v])).apply(e)
    }

    pub fn vertex_images(&self, v: usize) -> Vec<LieElement> {
        self.named_images(&self.vertex_names[v])
    }

    pub fn stable_letter(&self, e: usize) -> Option<LieElement> {
        self.stable_letters[e].as_ref().map(|n| self.named_images(std::slice::from_ref(n)).remove(0))
    }

    /// Images of the generators of `L_e` under `sigma_e`.
    pub fn edge_images(&self, g: &GraphOfLieAlgebras, e: usize) -> Vec<LieElement> {
        let edge = &g.edges[e];
        edge.sigma.images().iter().map(|x| self.from_vertex(edge.src, x)).collect()
    }
}

fn global_names(g: &GraphOfLieAlgebras) -> Result<(Vec<Vec<String>>, Vec<Option<String>>), GraphError> {
    let stable: Vec<Option<String>> = g.edges.iter().map(|e| (!e.is_forest()).then(|| e.id.clone())).collect();
    let mut count: HashMap<&str, usize> = HashMap::new();
    for v in &g.vertices {
        for gen in v.algebra.gens() {
            *count.entry(gen.name.as_str()).or_default() += 1;
        }
    }
    for s in stable.iter().flatten() {
        *count.entry(s.as_str()).or_default() += 1;
    }
    let names: Vec<Vec<String>> = g
        .vertices
        .iter()
        .map(|v| {
            v.algebra
                .gens()
                .iter()
                .map(|gen| if count[gen.name.as_str()] == 1 { gen.name.clone() } else { format!("{}.{}", v.id, gen.name) })
                .collect()
        })
        .collect();
    let mut seen = std::collections::HashSet::new();
    for n in names.iter().flatten().chain(stable.iter().flatten()) {
        if !seen.insert(n.clone()) {
            return Err(GraphError::NameClash(n.clone()));
        }
    }
    Ok((names, stable))
}

fn substitute_names(e: &LieElement, images: &[LieElement], target: &Arc<FreeLieAlgebra>) -> LieElement {
    Substitution::new(target, images.to_vec()).apply(e)
}

/// Builds the fundamental algebra by amalgams along forest edges (breadth first
/// from the first vertex of each component) followed by one HNN extension per
/// remaining edge. Structure maps are validated up to weight `max`.
pub fn fundamental_algebra(g: &GraphOfLieAlgebras, max: u32) -> Result<FundamentalAlgebra, GraphError> {
    if g.vertices.is_empty() {
        return Err(GraphError::UnknownVertex("(none)".into()));
    }
    g.validate(max)?;
    let (names, stable) = global_names(g)?;
    let renamed: Vec<Arc<PresentedLieAlgebra>> =
        g.vertices.iter().zip(&names).map(|(v, n)| rename(&v.algebra, n)).collect::<Result<_, _>>()?;
    let mut trace = Vec::new();
    let mut literal: Option<Arc<PresentedLieAlgebra>> = None;
    let mut visited = vec![false; g.vertices.len()];
    for root in 0..g.vertices.len() {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        literal = Some(match literal {
            None => {
                trace.push(TraceStep::Root { vertex: root });
                renamed[root].clone()
            }
            Some(l) => {
                trace.push(TraceStep::FreeProduct { vertex: root });
                free_product(&l, &renamed[root])?
            }
        });
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for (ei, e) in g.edges.iter().enumerate() {
                let EdgeKind::Forest { tau } = &e.kind else { continue };
                let (w, on_u, on_w) = if e.src == u && !visited[e.dst] {
                    (e.dst, e.sigma.images(), tau.images())
                } else if e.dst == u && !visited[e.src] {
                    (e.src, tau.images(), e.sigma.images())
                } else {
                    continue;
                };
                let lit = literal.take().expect("started");
                let (work, imgs) = lit.simplify()?;
                let u_lit = generators_by_name(lit.free(), &names[u])?;
                let u_work: Vec<LieElement> = names[u]
                    .iter()
                    .map(|n| imgs[lit.free().generator_index(n).expect("known name")].clone())
                    .collect();
                let into_work: Vec<LieElement> = on_u.iter().map(|x| substitute_names(x, &u_work, work.free())).collect();
                LieHomomorphism::new(&e.algebra, &work, into_work)?.validate(max)?;
                let w_gens: Vec<LieElement> =
                    (0..names[w].len()).map(|i| LieElement::generator(renamed[w].free(), i)).collect();
                let pairs: Vec<(LieElement, LieElement)> = on_u
                    .iter()
                    .zip(on_w)
                    .map(|(a, b)| (substitute_names(a, &u_lit, lit.free()), substitute_names(b, &w_gens, renamed[w].free())))
                    .collect();
                literal = Some(glue(&lit, &renamed[w], &pairs)?);
                trace.push(TraceStep::Amalgam { edge: ei, attach: u, vertex: w });
                visited[w] = true;
                queue.push_back(w);
            }
        }
    }
    let mut lit = literal.expect("nonempty");
    for (ei, e) in g.edges.iter().enumerate() {
        let EdgeKind::Stable { derivation, weight } = &e.kind else { continue };
        let (work, imgs) = lit.simplify()?;
        let image_in = |v: usize| -> Vec<LieElement> {
            names[v].iter().map(|n| imgs[lit.free().generator_index(n).expect("known name")].clone()).collect()
        };
        let (src_work, dst_work) = (image_in(e.src), image_in(e.dst));
        let a: Vec<LieElement> = e.sigma.images().iter().map(|x| substitute_names(x, &src_work, work.free())).collect();
        let d: Vec<LieElement> = derivation.iter().map(|x| substitute_names(x, &dst_work, work.free())).collect();
        LieHomomorphism::new(&e.algebra, &work, a.clone())?.validate(max)?;
        let keep: Vec<usize> = (0..a.len()).filter(|&i| !a[i].is_zero()).collect();
        let domain = GradedSubalgebra::new(
            &work,
            keep.iter().map(|&i| (e.algebra.gens()[i].name.clone(), a[i].clone())).collect(),
        )?;
        let der = LieDerivation::new(Arc::new(domain), keep.iter().map(|&i| d[i].clone()).collect(), *weight)?;
        der.check_leibniz(max)?;
        let src_lit = generators_by_name(lit.free(), &names[e.src])?;
        let dst_lit = generators_by_name(lit.free(), &names[e.dst])?;
        let pairs: Vec<(LieElement, LieElement)> = e
            .sigma
            .images()
            .iter()
            .zip(derivation)
            .map(|(x, y)| (substitute_names(x, &src_lit, lit.free()), substitute_names(y, &dst_lit, lit.free())))
            .collect();
        lit = hnn_raw(&lit, stable[ei].as_ref().expect("stable edge"), *weight, &pairs)?;
        trace.push(TraceStep::Hnn { edge: ei });
    }
    let (working, into_working) = lit.simplify()?;
    Ok(FundamentalAlgebra { presentation: lit, trace, vertex_names: names, stable_letters: stable, working, into_working })
}

/// Coefficients of both sides of the Euler identity at one weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerTerm {
    pub weight: u32,
    /// `sum_e Hilb(U L)/Hilb(U L_e) t^{s_e} + 1`.
    pub edge_side: BigInt,
    /// `sum_v Hilb(U L)/Hilb(U L_v)`.
    pub vertex_side: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactnessWeight {
    pub weight: u32,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphExactnessReport {
    pub euler: Vec<EulerTerm>,
    pub euler_holds: bool,
    pub exactness: Vec<ExactnessWeight>,
    pub exact: bool,
    /// The explicit bound lies below the largest structure weight.
    pub inconclusive: bool,
}

impl GraphExactnessReport {
    pub fn passed(&self) -> bool {
        self.euler_holds && self.exact && !self.inconclusive
    }
}

fn series(dims: &[usize], max: u32) -> HilbertSeries {
    HilbertSeries::pbw_product(dims, max)
}

/// Checks the Euler identity of the exact sequence of induced modules up to
/// `euler_max` and the explicit degree-wise exactness up to `explicit_max`.
pub fn verify_graph_exactness(g: &GraphOfLieAlgebras, euler_max: u32, explicit_max: u32) -> Result<GraphExactnessReport, GraphError> {
    if !g.is_connected() {
        return Err(GraphError::NotConnected);
    }
    let fa = fundamental_algebra(g, explicit_max)?;
    let euler = euler_terms(g, &fa, euler_max)?;
    let euler_holds = euler.iter().all(|t| t.edge_side == t.vertex_side);
    let checker = ExplicitChecker::new(g, &fa, explicit_max)?;
    let exactness: Vec<ExactnessWeight> =
        (0..=explicit_max).map(|n| ExactnessWeight { weight: n, failure: checker.weight(n) }).collect();
    let exact = exactness.iter().all(|w| w.failure.is_none());
    Ok(GraphExactnessReport { euler, euler_holds, exactness, exact, inconclusive: explicit_max < g.max_structure_weight() })
}

fn euler_terms(g: &GraphOfLieAlgebras, fa: &FundamentalAlgebra, max: u32) -> Result<Vec<EulerTerm>, GraphError> {
    let hu = series(&fa.working.dim_sequence(max), max);
    let mut edge_side = HilbertSeries::one(max);
    for e in &g.edges {
        edge_side = edge_side.add(&hu.div(&series(&e.algebra.dim_sequence(max), max))?.shift(e.shift()));
    }
    let mut vertex_side = HilbertSeries::from_i64(&[], max);
    for v in &g.vertices {
        vertex_side = vertex_side.add(&hu.div(&series(&v.algebra.dim_sequence(max), max))?);
    }
    Ok((0..=max)
        .map(|n| EulerTerm { weight: n, edge_side: edge_side.coeff(n).clone(), vertex_side: vertex_side.coeff(n).clone() })
        .collect())
}

struct ExplicitChecker<'a> {
    g: &'a GraphOfLieAlgebras,
    fa: &'a FundamentalAlgebra,
    env: Arc<Envelope>,
    vertex: Vec<InducedModule>,
    edge: Vec<InducedModule>,
    stage: Vec<InducedModule>,
    stable: Vec<Option<SparseVec>>,
}

fn spans(s: &GradedSubalgebra, max: u32) -> Vec<Subspace> {
    (1..=max).map(|n| s.span(n)).collect()
}

fn subalgebra(w: &Arc<PresentedLieAlgebra>, elems: Vec<(String, LieElement)>) -> Result<GradedSubalgebra, GraphError> {
    Ok(GradedSubalgebra::new(w, elems.into_iter().filter(|(_, e)| !e.is_zero()).collect())?)
}

fn check_embedding(s: &GradedSubalgebra, own: &PresentedLieAlgebra, max: u32, what: &str) -> Result<(), GraphError> {
    for n in 1..=max {
        if s.span(n).dim() != own.dim(n) {
            return Err(GraphError::Embedding { what: what.to_string(), weight: n });
        }
    }
    Ok(())
}

impl<'a> ExplicitChecker<'a> {
    fn new(g: &'a GraphOfLieAlgebras, fa: &'a FundamentalAlgebra, max: u32) -> Result<Self, GraphError> {
        let w = fa.working();
        let env = Envelope::new(w, max);
        let named = |names: &[String], elems: Vec<LieElement>| names.iter().cloned().zip(elems).collect::<Vec<_>>();
        let mut vertex = Vec::new();
        for (v, vert) in g.vertices.iter().enumerate() {
            let s = subalgebra(w, named(&fa.vertex_names[v], fa.vertex_images(v)))?;
            check_embedding(&s, &vert.algebra, max, &format!("vertex {}", vert.id))?;
            vertex.push(InducedModule::new(&env, &spans(&s, max)));
        }
        let mut edge = Vec::new();
        let mut stable = Vec::new();
        for (e, ed) in g.edges.iter().enumerate() {
            let names: Vec<String> = ed.algebra.gens().iter().map(|x| x.name.clone()).collect();
            let s = subalgebra(w, named(&names, fa.edge_images(g, e)))?;
            check_embedding(&s, &ed.algebra, max, &format!("edge {}", ed.id))?;
            edge.push(InducedModule::new(&env, &spans(&s, max)));
            stable.push(fa.stable_letter(e).map(|t| env.embed(&w.project_homogeneous(&t).expect("generator"))));
        }
        let mut stage = Vec::new();
        let mut gens: Vec<(String, LieElement)> = Vec::new();
        for step in &fa.trace {
            match *step {
                TraceStep::Root { vertex } | TraceStep::FreeProduct { vertex } | TraceStep::Amalgam { vertex, .. } => {
                    gens.extend(named(&fa.vertex_names[vertex], fa.vertex_images(vertex)));
                }
                TraceStep::Hnn { edge } => {
                    let t = fa.stable_letter(edge).expect("stable edge");
                    gens.push((fa.stable_letters[edge].clone().unwrap(), t));
                }
            }
            let s = subalgebra(w, gens.clone())?;
            stage.push(InducedModule::new(&env, &spans(&s, max)));
        }
        Ok(ExplicitChecker { g, fa, env, vertex, edge, stage, stable })
    }

    fn field(&self) -> FieldSpec {
        self.env.field()
    }

    /// First failure at weight `n`, if any.
    fn weight(&self, n: u32) -> Option<String> {
        let f = self.field();
        let mut off = vec![0usize];
        for m in &self.vertex {
            off.push(off.last().unwrap() + m.dim(n));
        }
        let place = |v: usize, x: &SparseVec| x.remap(|i| Some(i + off[v]));
        let slice = |v: usize, x: &SparseVec| {
            SparseVec::from_sorted(
                x.iter().filter(|(i, _)| *i >= off[v] && *i < off[v + 1]).map(|(i, c)| (i - off[v], c.clone())).collect(),
            )
        };
        let mut active = vec![false; self.vertex.len()];
        let mut xs: Vec<SparseVec> = Vec::new();
        let mut xech = Echelon::new(f);
        let mut expected = 0usize;
        for (j, step) in self.fa.trace.iter().enumerate() {
            let cur = &self.stage[j];
            match *step {
                TraceStep::Root { vertex } => active[vertex] = true,
                TraceStep::FreeProduct { .. } => return Some("graph is not connected".into()),
                TraceStep::Amalgam { edge, attach, vertex } => {
                    let (me, prev, mw, mu) = (&self.edge[edge], &self.stage[j - 1], &self.vertex[vertex], &self.vertex[attach]);
                    let reps: Vec<SparseVec> = (0..me.dim(n)).map(|b| me.lift(n, &SparseVec::unit(b, f))).collect();
                    let pd = prev.dim(n);
                    let alpha: Vec<SparseVec> =
                        reps.iter().map(|u| prev.reduce(n, u).sub(&mw.reduce(n, u).remap(|i| Some(i + pd)))).collect();
                    let beta = |x: &SparseVec| {
                        let (a, b): (Vec<_>, Vec<_>) = x.iter().cloned().partition(|(i, _)| *i < pd);
                        let b = SparseVec::from_sorted(b.into_iter().map(|(i, c)| (i - pd, c)).collect());
                        cur.reduce(n, &prev.lift(n, &SparseVec::from_sorted(a))).add(&cur.reduce(n, &mw.lift(n, &b)))
                    };
                    if let Some(e) = check_ses(&alpha, beta, pd + mw.dim(n), cur.dim(n), f) {
                        return Some(format!("step {j} (amalgam along {}): {e}", self.g.edges[edge].id));
                    }
                    active[vertex] = true;
                    for u in &reps {
                        let v = place(attach, &mu.reduce(n, u)).sub(&place(vertex, &mw.reduce(n, u)));
                        xech.insert(&v);
                        xs.push(v);
                    }
                    expected += reps.len();
                }
                TraceStep::Hnn { edge } => {
                    let (me, prev) = (&self.edge[edge], &self.stage[j - 1]);
                    let s = self.g.edges[edge].shift();
                    let src = self.g.edges[edge].src;
                    let t = self.stable[edge].clone().expect("stable edge");
                    let mut images = Vec::new();
                    if n >= s {
                        for b in 0..me.dim(n - s) {
                            let u = me.lift(n - s, &SparseVec::unit(b, f));
                            match self.env.mul(&(s, t.clone()), &(n - s, u)) {
                                Ok((_, p)) => images.push(p),
                                Err(e) => return Some(e.to_string()),
                            }
                        }
                    }
                    let alpha: Vec<SparseVec> = images.iter().map(|u| prev.reduce(n, u)).collect();
                    let beta = |x: &SparseVec| cur.reduce(n, &prev.lift(n, x));
                    if let Some(e) = check_ses(&alpha, beta, prev.dim(n), cur.dim(n), f) {
                        return Some(format!("step {j} (HNN along {}): {e}", self.g.edges[edge].id));
                    }
                    for u in &images {
                        let v = place(src, &self.vertex[src].reduce(n, u));
                        xech.insert(&v);
                        xs.push(v);
                    }
                    expected += images.len();
                }
            }
            let eps = |x: &SparseVec| {
                let mut acc = SparseVec::new();
                for (v, m) in self.vertex.iter().enumerate().filter(|(v, _)| active[*v]) {
                    acc = acc.add(&cur.reduce(n, &m.lift(n, &slice(v, x))));
                }
                acc
            };
            if xech.rank() != expected {
                return Some(format!("step {j}: glued edge map is not injective"));
            }
            if xs.iter().any(|x| !eps(x).is_zero()) {
                return Some(format!("step {j}: glued edge image is not in the kernel"));
            }
            let mut sech = Echelon::new(f);
            let mut total = 0;
            for (v, m) in self.vertex.iter().enumerate().filter(|(v, _)| active[*v]) {
                total += m.dim(n);
                for i in 0..m.dim(n) {
                    sech.insert(&eps(&place(v, &SparseVec::unit(i, f))));
                }
            }
            if sech.rank() != cur.dim(n) {
                return Some(format!("step {j}: vertex sum does not surject"));
            }
            if xech.rank() + cur.dim(n) != total {
                return Some(format!("step {j}: glued sequence is not exact in the middle"));
            }
        }
        None
    }
}

/// `0 -> A -> B -> C -> 0` with `A` given by image vectors in `B`.
fn check_ses(alpha: &[SparseVec], beta: impl Fn(&SparseVec) -> SparseVec, mid: usize, right: usize, f: FieldSpec) -> Option<String> {
    let mut a = Echelon::new(f);
    for v in alpha {
        a.insert(v);
    }
    if a.rank() != alpha.len() {
        return Some("edge map is not injective".into());
    }
    if alpha.iter().any(|v| !beta(v).is_zero()) {
        return Some("composite is nonzero".into());
    }
    let mut b = Echelon::new(f);
    for i in 0..mid {
        b.insert(&beta(&SparseVec::unit(i, f)));
    }
    if b.rank() != right {
        return Some("vertex map does not surject".into());
    }
    if alpha.len() + right != mid {
        return Some("not exact in the middle".into());
    }
    None
}

/// Long exact homology sequence of the graph, checked by rank bookkeeping.
pub fn mayer_vietoris(g: &GraphOfLieAlgebras, max_i: usize, max_n: u32) -> Result<MvReport, GraphError> {
    let fa = fundamental_algebra(g, max_n)?;
    let total = homology_table(fa.working(), max_i, max_n);
    let vt: Vec<_> = g.vertices.iter().map(|v| homology_table(&v.algebra, max_i, max_n)).collect();
    let et: Vec<_> = g.edges.iter().map(|e| (homology_table(&e.algebra, max_i, max_n), e.shift())).collect();
    let vrefs: Vec<_> = vt.iter().collect();
    let erefs: Vec<_> = et.iter().map(|(t, s)| (t, *s)).collect();
    Ok(mayer_vietoris_check(&total, &vrefs, &erefs))
}

struct PendingEdge {
    id: String,
    src: String,
    dst: String,
    forest: bool,
    algebra: Arc<PresentedLieAlgebra>,
    sigma: Vec<(String, String, usize)>,
    tau: Vec<(String, String, usize)>,
    der: Vec<(String, String, usize)>,
    weight: Option<(u32, usize)>,
}

/// Parses the graph file format. `load` resolves presentation file names to their text.
pub fn parse_graph<F>(text: &str, mut load: F, field: Option<FieldSpec>) -> Result<GraphOfLieAlgebras, GraphError>
where
    F: FnMut(&str) -> Result<String, String>,
{
    let mut g = GraphOfLieAlgebras::new();
    let mut field = field;
    let mut pending: Vec<PendingEdge> = Vec::new();
    let mut read = |path: &str, line: usize, field: &mut Option<FieldSpec>| -> Result<Arc<PresentedLieAlgebra>, GraphError> {
        let t = load(path).map_err(|msg| GraphError::Io { path: path.to_string(), msg })?;
        let p = parse_presentation(&t, *field).map_err(|e| GraphError::Syntax { line, msg: format!("{path}: {e}") })?;
        field.get_or_insert(p.field());
        if Some(p.field()) != *field {
            return Err(GraphError::FieldMismatch);
        }
        Ok(p)
    };
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap().trim();
        if body.is_empty() {
            continue;
        }
        let syntax = |msg: &str| GraphError::Syntax { line, msg: msg.to_string() };
        let words: Vec<&str> = body.split_whitespace().collect();
        match words[0] {
            "vertex" => {
                let [_, id, path] = words[..] else { return Err(syntax("expected: vertex <id> <file>")) };
                let p = read(path, line, &mut field)?;
                g.add_vertex(id, p)?;
            }
            "edge" => {
                let (id, src, dst, forest, path) = match words[..] {
                    [_, id, s, d, "forest", p] => (id, s, d, true, p),
                    [_, id, s, d, p] => (id, s, d, false, p),
                    _ => return Err(syntax("expected: edge <id> <src> <dst> [forest] <file>")),
                };
                if pending.iter().any(|e| e.id == id) {
                    return Err(GraphError::DuplicateId(id.to_string()));
                }
                let algebra = read(path, line, &mut field)?;
                pending.push(PendingEdge {
                    id: id.into(),
                    src: src.into(),
                    dst: dst.into(),
                    forest,
                    algebra,
                    sigma: Vec::new(),
                    tau: Vec::new(),
                    der: Vec::new(),
                    weight: None,
                });
            }
            "map" | "der" => {
                let (kind, edge, rest) = if words[0] == "map" {
                    if words.len() < 4 {
                        return Err(syntax("expected: map sigma|tau <edge> <gen>-><expr>"));
                    }
                    (words[1], words[2], words[3..].join(" "))
                } else {
                    if words.len() < 3 {
                        return Err(syntax("expected: der <edge> <gen>-><expr> stable-weight <w>"));
                    }
                    ("der", words[1], words[2..].join(" "))
                };
                let e = pending.iter_mut().find(|e| e.id == edge).ok_or_else(|| syntax(&format!("unknown edge {edge}")))?;
                let mut rest = rest.as_str();
                if kind == "der" {
                    let (head, w) = rest.rsplit_once("stable-weight").ok_or_else(|| syntax("missing stable-weight"))?;
                    let w: u32 = w.trim().parse().map_err(|_| syntax("bad stable weight"))?;
                    if matches!(e.weight, Some((old, _)) if old != w) {
                        return Err(syntax("conflicting stable weights"));
                    }
                    e.weight = Some((w, line));
                    rest = head;
                }
                let (gen, value) = rest.split_once("->").ok_or_else(|| syntax("expected <gen>-><expr>"))?;
                let entry = (gen.trim().to_string(), value.trim().to_string(), line);
                match kind {
                    "sigma" => e.sigma.push(entry),
                    "tau" => e.tau.push(entry),
                    "der" => e.der.push(entry),
                    _ => return Err(syntax("expected sigma or tau")),
                }
            }
            other => return Err(syntax(&format!("unknown directive {other}"))),
        }
    }
    for e in pending {
        let s = g.vertex_index(&e.src).ok_or_else(|| GraphError::UnknownVertex(e.src.clone()))?;
        let d = g.vertex_index(&e.dst).ok_or_else(|| GraphError::UnknownVertex(e.dst.clone()))?;
        let sigma = assignment_images(&e.algebra, g.vertices[s].algebra.free(), &e.sigma, false, &e.id)?;
        let dst_free = g.vertices[d].algebra.free().clone();
        if e.forest {
            if !e.der.is_empty() {
                return Err(GraphError::Syntax { line: e.der[0].2, msg: format!("forest edge {} takes no derivation", e.id) });
            }
            let tau = assignment_images(&e.algebra, &dst_free, &e.tau, false, &e.id)?;
            g.add_forest_edge(&e.id, &e.src, &e.dst, e.algebra, sigma, tau)?;
        } else {
            if !e.tau.is_empty() {
                return Err(GraphError::Syntax { line: e.tau[0].2, msg: format!("edge {} is not in the forest", e.id) });
            }
            let (w, _) = e.weight.ok_or_else(|| GraphError::Syntax { line: 0, msg: format!("edge {}: no stable-weight", e.id) })?;
            let der = assignment_images(&e.algebra, &dst_free, &e.der, true, &e.id)?;
            g.add_stable_edge(&e.id, &e.src, &e.dst, e.algebra, sigma, der, w)?;
        }
    }
    Ok(g)
}

fn assignment_images(
    source: &PresentedLieAlgebra,
    target: &Arc<FreeLieAlgebra>,
    entries: &[(String, String, usize)],
    default_zero: bool,
    edge: &str,
) -> Result<Vec<LieElement>, GraphError> {
    let mut out = Vec::new();
    for gen in source.gens() {
        let found: Vec<_> = entries.iter().filter(|(n, _, _)| *n == gen.name).collect();
        match found[..] {
            [] if default_zero => out.push(LieElement::zero(target)),
            [] => return Err(GraphError::Syntax { line: 0, msg: format!("edge {edge}: no image for {}", gen.name) }),
            [(_, text, line)] => {
                let e = parse_value(text, target).map_err(|e| GraphError::Syntax { line: *line, msg: e.to_string() })?;
                out.push(e);
            }
            _ => return Err(GraphError::Syntax { line: found[1].2, msg: format!("second image for {}", gen.name) }),
        }
    }
    for (n, _, line) in entries {
        if source.free().generator_index(n).is_none() {
            return Err(GraphError::Syntax { line: *line, msg: format!("edge {edge} has no generator {n}") });
        }
    }
    Ok(out)
}

/// Reads a graph file; presentation paths are relative to its directory.
pub fn load_graph(path: &Path, field: Option<FieldSpec>) -> Result<GraphOfLieAlgebras, GraphError> {
    let io = |p: &Path, e: std::io::Error| GraphError::Io { path: p.display().to_string(), msg: e.to_string() };
    let text = std::fs::read_to_string(path).map_err(|e| io(path, e))?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_graph(&text, |p| std::fs::read_to_string(dir.join(p)).map_err(|e| e.to_string()), field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn alg(text: &str) -> Arc<PresentedLieAlgebra> {
        parse_presentation(text, Some(q())).unwrap()
    }

    fn el(p: &Arc<PresentedLieAlgebra>, s: &str) -> LieElement {
        parse_value(s, p.free()).unwrap()
    }

    #[test]
    fn corpus_graphs_satisfy_both_checks() {
        for s in corpus::GRAPHS.iter().chain(corpus::AMALGAM_BASE_CASES).chain(corpus::HNN_BASE_CASES) {
            let g = s.build(q()).unwrap();
            let r = verify_graph_exactness(&g, 10, 6).unwrap();
            assert!(r.passed(), "{}: {:?}", s.name, r.exactness.iter().find(|w| w.failure.is_some()));
        }
    }

    #[test]
    fn free_product_of_abelian_and_line() {
        let m = alg("gen a weight 1\ngen b weight 1\nrel [a,b]\n");
        let n = alg("gen x weight 1\n");
        let l = free_product(&m, &n).unwrap();
        assert_eq!(l.relators().len(), 1);
        assert_eq!(l.relators()[0].to_string(), "[a,b]");
        let inv = HilbertSeries::from_i64(&[1, -3, 1], 7).inverse().unwrap();
        assert_eq!(series(&l.dim_sequence(7), 7), inv);
    }

    #[test]
    fn amalgam_over_everything_is_the_edge_algebra() {
        let g = corpus::DIAGONAL_AMALGAM.build(q()).unwrap();
        let fa = fundamental_algebra(&g, 8).unwrap();
        assert_eq!(fa.presentation.dim_sequence(8), g.edges()[0].algebra.dim_sequence(8));
    }

    #[test]
    fn hnn_examples() {
        let l = alg("gen a weight 1\n");
        let empty = Arc::new(GradedSubalgebra::new(&l, vec![]).unwrap());
        let w = hnn(&LieDerivation::new(empty, vec![], 1).unwrap(), "t", 5).unwrap();
        assert_eq!(w.dim_sequence(5), vec![2, 1, 2, 3, 6]);
        let whole = Arc::new(GradedSubalgebra::new(&l, vec![("a".into(), el(&l, "a"))]).unwrap());
        let w = hnn(&LieDerivation::new(whole, vec![LieElement::zero(l.free())], 1).unwrap(), "t", 5).unwrap();
        assert_eq!(w.dim_sequence(5), vec![2, 0, 0, 0, 0]);
        assert_eq!(w.relators()[0].to_string(), "-[a,t]");
    }

    #[test]
    fn ascending_extension_has_derived_algebra_in_base() {
        let g = corpus::HNN_ASCENDING.build(q()).unwrap();
        let fa = fundamental_algebra(&g, 8).unwrap();
        let w = fa.working();
        let names = fa.vertex_names[0].clone();
        let base = GradedSubalgebra::new(w, names.into_iter().zip(fa.vertex_images(0)).collect()).unwrap();
        let f = w.field();
        for n in 2..=8 {
            for p in 1..n {
                for i in 0..w.dim(p) {
                    for j in 0..w.dim(n - p) {
                        let b = w.bracket(&(p, SparseVec::unit(i, f)), &(n - p, SparseVec::unit(j, f)));
                        assert!(base.contains_homog(&b));
                    }
                }
            }
        }
    }

    #[test]
    fn single_vertex_is_its_algebra() {
        let mut g = GraphOfLieAlgebras::new();
        let v = alg("gen a weight 1\ngen b weight 2\nrel [a,[a,b]]\n");
        g.add_vertex("v", v.clone()).unwrap();
        let fa = fundamental_algebra(&g, 6).unwrap();
        assert_eq!(fa.trace, vec![TraceStep::Root { vertex: 0 }]);
        assert_eq!(fa.presentation.dim_sequence(6), v.dim_sequence(6));
        assert!(verify_graph_exactness(&g, 8, 6).unwrap().passed());
    }

    #[test]
    fn forest_must_be_maximal_and_acyclic() {
        let a = || alg("gen a weight 1\n");
        let mut g = GraphOfLieAlgebras::new();
        g.add_vertex("u", a()).unwrap();
        g.add_vertex("w", a()).unwrap();
        let e = a();
        let (su, sw) = (el(&g.vertices()[0].algebra, "a"), el(&g.vertices()[1].algebra, "a"));
        g.add_stable_edge("x", "u", "w", e.clone(), vec![su.clone()], vec![LieElement::zero(sw.algebra())], 1).unwrap();
        assert!(matches!(g.validate(3), Err(GraphError::Forest(_))));
        g.add_forest_edge("f1", "u", "w", e.clone(), vec![su.clone()], vec![sw.clone()]).unwrap();
        g.validate(3).unwrap();
        g.add_forest_edge("f2", "u", "w", e.clone(), vec![su.clone()], vec![sw]).unwrap();
        assert!(matches!(g.validate(3), Err(GraphError::Forest(_))));
        let mut h = GraphOfLieAlgebras::new();
        h.add_vertex("u", a()).unwrap();
        let su = el(&h.vertices()[0].algebra, "a");
        h.add_forest_edge("l", "u", "u", e, vec![su.clone()], vec![su]).unwrap();
        assert!(matches!(h.validate(3), Err(GraphError::Forest(_))));
    }

    #[test]
    fn homomorphism_checks() {
        let src = alg("gen p weight 1\ngen q weight 1\nrel [p,q]\n");
        let tgt = alg("gen a weight 1\ngen b weight 1\n");
        let bad = LieHomomorphism::from_text(&src, &tgt, &[("p", "a"), ("q", "b")]).unwrap();
        assert!(matches!(bad.check_relators(), Err(GraphError::RelatorNotKilled(_))));
        let collapse = LieHomomorphism::from_text(&src, &tgt, &[("p", "a"), ("q", "2*a")]).unwrap();
        collapse.check_relators().unwrap();
        assert_eq!(collapse.check_injective(3), Err(GraphError::NotInjective(1)));
        let wrong = LieHomomorphism::from_text(&src, &tgt, &[("p", "[a,b]"), ("q", "b")]);
        assert!(matches!(wrong, Err(GraphError::WeightMismatch(_))));
    }

    #[test]
    fn leibniz_violation_is_reported() {
        let l = alg("gen a weight 1\ngen b weight 1\ngen c weight 2\nrel [a,b]\n");
        let dom = Arc::new(GradedSubalgebra::new(&l, vec![("a".into(), el(&l, "a")), ("b".into(), el(&l, "b"))]).unwrap());
        let d = LieDerivation::new(dom.clone(), vec![el(&l, "c"), LieElement::zero(l.free())], 1).unwrap();
        assert!(matches!(d.check_leibniz(4), Err(GraphError::Leibniz { weight: 2, .. })));
        let inner = LieDerivation::inner(dom, &l.project_homogeneous(&el(&l, "c")).unwrap());
        inner.check_leibniz(5).unwrap();
    }

    #[test]
    fn forest_order_does_not_change_dimensions() {
        let s = &corpus::SQUARE_WITH_DIAGONAL;
        let mut blocks: Vec<String> = Vec::new();
        for line in s.graph.lines() {
            if line.starts_with("edge") || blocks.is_empty() {
                blocks.push(String::new());
            }
            blocks.last_mut().unwrap().push_str(&format!("{line}\n"));
        }
        blocks.swap(1, 3);
        let text = blocks.concat();
        let files: HashMap<&str, &str> = s.files.iter().copied().collect();
        let g2 = parse_graph(&text, |p| Ok(files[p].to_string()), Some(q())).unwrap();
        let g1 = s.build(q()).unwrap();
        let (a, b) = (fundamental_algebra(&g1, 6).unwrap(), fundamental_algebra(&g2, 6).unwrap());
        assert_ne!(a.trace, b.trace);
        assert_eq!(a.working().dim_sequence(9), b.working().dim_sequence(9));
    }

    #[test]
    fn homology_sequence_of_free_product() {
        let g = corpus::FREE_PRODUCT.build(q()).unwrap();
        let r = mayer_vietoris(&g, 3, 8).unwrap();
        assert!(r.exact);
        let g = corpus::HNN_DERIVATION.build(q()).unwrap();
        assert!(mayer_vietoris(&g, 3, 8).unwrap().exact);
    }

    #[test]
    fn parser_reports_problems() {
        let files: HashMap<&str, &str> = [("a.lie", "gen a weight 1\n"), ("e.lie", "gen e weight 1\n")].into_iter().collect();
        let load = |p: &str| files.get(p).map(|s| s.to_string()).ok_or_else(|| "missing".to_string());
        let err = parse_graph("vertex u a.lie\nedge e u w forest e.lie\n", load, None).unwrap_err();
        assert_eq!(err, GraphError::UnknownVertex("w".into()));
        let err = parse_graph("vertex u a.lie\nvertex w a.lie\nedge e u w forest e.lie\nmap sigma e e->a\n", load, None);
        assert!(matches!(err, Err(GraphError::Syntax { .. })));
        let err = parse_graph("vertex u nothing.lie\n", load, None).unwrap_err();
        assert!(matches!(err, GraphError::Io { .. }));
        let err = parse_graph("vertex u a.lie\nedge l u u e.lie\nmap sigma l e->a\nder l e->[a,a] stable-weight x\n", load, None);
        assert!(matches!(err, Err(GraphError::Syntax { line: 4, .. })));
        let disconnected = parse_graph("vertex u a.lie\nvertex w a.lie\n", load, None).unwrap();
        assert_eq!(verify_graph_exactness(&disconnected, 4, 4).unwrap_err(), GraphError::NotConnected);
        let fa = fundamental_algebra(&disconnected, 4).unwrap();
        assert_eq!(fa.presentation.gens().iter().map(|g| g.name.as_str()).collect::<Vec<_>>(), vec!["u.a", "w.a"]);
    }
}
