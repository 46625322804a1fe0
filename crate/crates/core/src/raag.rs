//! Right-angled Artin Lie algebras of finite simple graphs.
//!
//! The enveloping algebra of `L_Γ` is the partially commutative associative
//! algebra on the vertices, with basis the lexicographically least words of
//! each commutation class. The free resolution of the trivial module is the
//! complex `P_n = ⊕ c_w U` over the cliques `w` of size `n`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use crate::envelope::HilbertSeries;
use crate::freelie::{FreeLieAlgebra, Generator, LieElement};
use crate::homology::ChainComplex;
use crate::linalg::{SparseMatrix, SparseVec};
use crate::presented::{GradedSubalgebra, Homog, PresentedError, PresentedLieAlgebra};
use crate::scalars::FieldSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphInputError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(String),
    #[error("loop at {0}")]
    Loop(String),
    #[error("edge {0} {1} given twice")]
    DoubleEdge(String, String),
}

/// A finite simple graph with ordered vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    names: Vec<String>,
    adj: Vec<Vec<bool>>,
}

impl SimpleGraph {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self, GraphInputError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut seen = HashSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(GraphInputError::DuplicateVertex(n.clone()));
            }
        }
        let k = names.len();
        Ok(SimpleGraph { names, adj: vec![vec![false; k]; k] })
    }

    /// Vertices `v0, v1, ...` with the given edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = SimpleGraph::new((0..n).map(|i| format!("v{i}"))).unwrap();
        for &(a, b) in edges {
            g.add_edge_index(a, b).unwrap();
        }
        g
    }

    pub fn path(n: usize) -> Self {
        Self::from_edges(n, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>())
    }

    pub fn cycle(n: usize) -> Self {
        Self::from_edges(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Self::from_edges(n, &edges)
    }

    pub fn add_edge(&mut self, a: &str, b: &str) -> Result<(), GraphInputError> {
        let i = self.index(a).ok_or_else(|| GraphInputError::UnknownVertex(a.into()))?;
        let j = self.index(b).ok_or_else(|| GraphInputError::UnknownVertex(b.into()))?;
        self.add_edge_index(i, j)
    }

    pub fn add_edge_index(&mut self, i: usize, j: usize) -> Result<(), GraphInputError> {
        if i == j {
            return Err(GraphInputError::Loop(self.names[i].clone()));
        }
        if self.adj[i][j] {
            return Err(GraphInputError::DoubleEdge(self.names[i].clone(), self.names[j].clone()));
        }
        self.adj[i][j] = true;
        self.adj[j][i] = true;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i][j]
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.adj[i][j]).collect()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.len()).flat_map(|i| (i + 1..self.len()).filter(move |&j| self.adj[i][j]).map(move |j| (i, j))).collect()
    }

    pub fn is_clique(&self, vs: &[usize]) -> bool {
        vs.iter().enumerate().all(|(k, &a)| vs[k + 1..].iter().all(|&b| self.adj[a][b]))
    }

    /// The induced subgraph on `vs`, keeping names and the relative order.
    pub fn induced(&self, vs: &[usize]) -> SimpleGraph {
        let mut vs = vs.to_vec();
        vs.sort_unstable();
        SimpleGraph {
            names: vs.iter().map(|&v| self.names[v].clone()).collect(),
            adj: vs.iter().map(|&a| vs.iter().map(|&b| self.adj[a][b]).collect()).collect(),
        }
    }

    /// All vertex subsets spanning complete subgraphs, the empty one included,
    /// grouped by size and sorted.
    pub fn cliques(&self) -> Vec<Vec<Vec<usize>>> {
        let mut by_size: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new()]];
        loop {
            let last = by_size.last().unwrap();
            let next: Vec<Vec<usize>> = last
                .iter()
                .flat_map(|w| {
                    let start = w.last().map_or(0, |&v| v + 1);
                    (start..self.len()).filter(|&v| w.iter().all(|&u| self.adj[u][v])).map(move |v| {
                        let mut c = w.clone();
                        c.push(v);
                        c
                    })
                })
                .collect();
            if next.is_empty() {
                break;
            }
            by_size.push(next);
        }
        by_size
    }

    /// `Σ_w (-t)^{|w|}` over all cliques, as coefficients.
    pub fn clique_polynomial(&self) -> Vec<i64> {
        self.cliques().iter().enumerate().map(|(k, c)| if k % 2 == 0 { c.len() as i64 } else { -(c.len() as i64) }).collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("vertices {}\n", self.names.join(" "));
        for (a, b) in self.edges() {
            out.push_str(&format!("edge {} {}\n", self.names[a], self.names[b]));
        }
        out
    }

    /// Canonical adjacency bit string under vertex relabeling; brute force over permutations.
    pub fn canonical_form(&self) -> Vec<bool> {
        let n = self.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best: Option<Vec<bool>> = None;
        loop {
            let code: Vec<bool> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| self.adj[perm[i]][perm[j]]).collect();
            if best.as_ref().is_none_or(|b| code > *b) {
                best = Some(code);
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        best.unwrap_or_default()
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else { return false };
    let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

impl fmt::Display for SimpleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self.edges().iter().map(|&(a, b)| format!("{}-{}", self.names[a], self.names[b])).collect();
        write!(f, "{{{}}} [{}]", self.names.join(","), edges.join(" "))
    }
}

/// Every labeled graph on `n` vertices.
pub fn all_graphs(n: usize) -> Vec<SimpleGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    (0..1u64 << pairs.len())
        .map(|mask| {
            let edges: Vec<_> = pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e).collect();
            SimpleGraph::from_edges(n, &edges)
        })
        .collect()
}

/// One representative per isomorphism class of graphs on `n` vertices.
pub fn graphs_up_to_isomorphism(n: usize) -> Vec<SimpleGraph> {
    let mut seen = HashSet::new();
    all_graphs(n).into_iter().filter(|g| seen.insert(g.canonical_form())).collect()
}

/// Parses `vertices a b c` and `edge a b` lines; `#` starts a comment.
pub fn parse_graph(text: &str) -> Result<SimpleGraph, GraphInputError> {
    let mut g: Option<SimpleGraph> = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap().trim();
        if body.is_empty() {
            continue;
        }
        let words: Vec<&str> = body.split_whitespace().collect();
        match words[0] {
            "vertices" => {
                if g.is_some() {
                    return Err(GraphInputError::Syntax { line, msg: "vertices declared twice".into() });
                }
                g = Some(SimpleGraph::new(words[1..].iter().copied())?);
            }
            "edge" => {
                let Some(g) = g.as_mut() else {
                    return Err(GraphInputError::Syntax { line, msg: "edge before vertices".into() });
                };
                if words.len() != 3 {
                    return Err(GraphInputError::Syntax { line, msg: "expected `edge <u> <v>`".into() });
                }
                g.add_edge(words[1], words[2]).map_err(|e| GraphInputError::Syntax { line, msg: e.to_string() })?;
            }
            other => return Err(GraphInputError::Syntax { line, msg: format!("unknown directive {other}") }),
        }
    }
    g.ok_or(GraphInputError::Syntax { line: 0, msg: "missing vertices line".into() })
}

/// `<V | [u,v] for every edge>` with all generators of weight 1.
pub fn raag_presentation(g: &SimpleGraph, field: FieldSpec) -> Result<Arc<PresentedLieAlgebra>, PresentedError> {
    let free = FreeLieAlgebra::new(g.names.iter().map(|n| Generator::new(n.clone(), 1)).collect(), field)?;
    let rels = g.edges().iter().map(|&(a, b)| LieElement::generator(&free, a).bracket(&LieElement::generator(&free, b))).collect();
    PresentedLieAlgebra::new(&free, rels)
}

/// Lexicographic breadth-first search; returns the visiting order.
pub fn lex_bfs(g: &SimpleGraph) -> Vec<usize> {
    let n = g.len();
    let mut labels: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for step in 0..n {
        let v = (0..n).filter(|&v| !done[v]).max_by(|&a, &b| labels[a].cmp(&labels[b]).then(b.cmp(&a))).unwrap();
        done[v] = true;
        order.push(v);
        for w in g.neighbors(v) {
            if !done[w] {
                labels[w].push(n - step);
            }
        }
    }
    order
}

/// Whether each vertex's later neighbors in `order` form a clique.
pub fn is_perfect_elimination_ordering(g: &SimpleGraph, order: &[usize]) -> bool {
    let n = g.len();
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..n).collect::<Vec<_>>() {
        return false;
    }
    let mut pos = vec![0; n];
    for (k, &v) in order.iter().enumerate() {
        pos[v] = k;
    }
    order.iter().all(|&v| {
        let later: Vec<usize> = g.neighbors(v).into_iter().filter(|&w| pos[w] > pos[v]).collect();
        g.is_clique(&later)
    })
}

/// Whether `cycle`, read cyclically, is a chordless cycle of length at least 4.
pub fn is_induced_cycle(g: &SimpleGraph, cycle: &[usize]) -> bool {
    let k = cycle.len();
    if k < 4 || cycle.iter().collect::<BTreeSet<_>>().len() != k || cycle.iter().any(|&v| v >= g.len()) {
        return false;
    }
    (0..k).all(|a| {
        (a + 1..k).all(|b| {
            let consecutive = b == a + 1 || (a == 0 && b == k - 1);
            g.has_edge(cycle[a], cycle[b]) == consecutive
        })
    })
}

/// Exhaustive search over vertex subsets for a chordless cycle of length at least 4.
pub fn find_induced_cycle(g: &SimpleGraph) -> Option<Vec<usize>> {
    let n = g.len();
    let mut masks: Vec<u64> = (0..1u64 << n).filter(|m| m.count_ones() >= 4).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    masks.into_iter().find_map(|mask| {
        let vs: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let deg = |v: usize| vs.iter().filter(|&&w| g.has_edge(v, w)).count();
        if vs.iter().any(|&v| deg(v) != 2) {
            return None;
        }
        let mut cycle = vec![vs[0]];
        let mut prev = usize::MAX;
        loop {
            let cur = *cycle.last().unwrap();
            let next = vs.iter().copied().find(|&w| w != prev && g.has_edge(cur, w))?;
            if next == vs[0] {
                break;
            }
            prev = cur;
            cycle.push(next);
        }
        (cycle.len() == vs.len()).then_some(cycle)
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChordalityCertificate {
    PerfectEliminationOrdering(Vec<usize>),
    InducedCycle(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChordalityVerdict {
    pub chordal: bool,
    pub certificate: ChordalityCertificate,
}

impl ChordalityVerdict {
    /// Re-checks the certificate against the graph.
    pub fn validate(&self, g: &SimpleGraph) -> bool {
        match &self.certificate {
            ChordalityCertificate::PerfectEliminationOrdering(o) => self.chordal && is_perfect_elimination_ordering(g, o),
            ChordalityCertificate::InducedCycle(c) => !self.chordal && is_induced_cycle(g, c),
        }
    }
}

/// Chordality with a certificate in either direction.
pub fn is_chordal(g: &SimpleGraph) -> ChordalityVerdict {
    let mut order = lex_bfs(g);
    order.reverse();
    let verdict = if is_perfect_elimination_ordering(g, &order) {
        ChordalityVerdict { chordal: true, certificate: ChordalityCertificate::PerfectEliminationOrdering(order) }
    } else {
        let cycle = find_induced_cycle(g).expect("a graph without perfect elimination ordering has a chordless cycle");
        ChordalityVerdict { chordal: false, certificate: ChordalityCertificate::InducedCycle(cycle) }
    };
    assert!(verdict.validate(g), "certificate failed re-validation");
    verdict
}

/// The partially commutative algebra on the vertices in weights `0..=max`,
/// with basis the lexicographically least word of each commutation class.
#[derive(Debug)]
pub struct TraceAlgebra {
    graph: SimpleGraph,
    words: Vec<Vec<Vec<u8>>>,
    index: Vec<HashMap<Vec<u8>, usize>>,
}

impl TraceAlgebra {
    pub fn new(g: &SimpleGraph, max: u32) -> Self {
        let mut words: Vec<Vec<Vec<u8>>> = vec![vec![Vec::new()]];
        for _ in 1..=max {
            let mut next = Vec::new();
            for w in words.last().unwrap() {
                for v in 0..g.len() as u8 {
                    let mut x = w.clone();
                    x.push(v);
                    if normal_form(g, &x) == x {
                        next.push(x);
                    }
                }
            }
            next.sort();
            words.push(next);
        }
        let index = words.iter().map(|ws| ws.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect()).collect();
        TraceAlgebra { graph: g.clone(), words, index }
    }

    pub fn max(&self) -> u32 {
        self.words.len() as u32 - 1
    }

    pub fn dim(&self, n: u32) -> usize {
        self.words[n as usize].len()
    }

    pub fn words(&self, n: u32) -> &[Vec<u8>] {
        &self.words[n as usize]
    }

    pub fn hilbert_series(&self) -> HilbertSeries {
        HilbertSeries::new((0..=self.max()).map(|n| BigInt::from(self.dim(n))).collect(), self.max())
    }

    /// Index of `v * words(n)[i]` in weight `n + 1`.
    pub fn left_mul(&self, v: usize, n: u32, i: usize) -> usize {
        let mut x = vec![v as u8];
        x.extend_from_slice(&self.words[n as usize][i]);
        self.index[n as usize + 1][&normal_form(&self.graph, &x)]
    }
}

/// Least word in the commutation class of `w`.
pub fn normal_form(g: &SimpleGraph, w: &[u8]) -> Vec<u8> {
    let mut rest = w.to_vec();
    let mut out = Vec::with_capacity(w.len());
    while !rest.is_empty() {
        let mut best: Option<usize> = None;
        for i in 0..rest.len() {
            let x = rest[i];
            let free = rest[..i].iter().all(|&y| y != x && g.has_edge(x as usize, y as usize));
            if free && best.is_none_or(|b| x < rest[b]) {
                best = Some(i);
            }
        }
        out.push(rest.remove(best.unwrap()));
    }
    out
}

/// The augmented complex `... -> P_1 -> P_0 -> k -> 0`, weight by weight.
#[derive(Debug)]
pub struct MinimalResolution {
    pub graph: SimpleGraph,
    pub cells: Vec<Vec<Vec<usize>>>,
    pub envelope: TraceAlgebra,
    /// `C_0 = k`, `C_{n+1} = P_n`.
    pub complex: ChainComplex,
}

impl MinimalResolution {
    /// `P_n` in weight `m`, the free module on the `n`-cliques shifted by `n`.
    pub fn module_dim(&self, n: usize, m: u32) -> usize {
        self.complex.dim(n + 1, m)
    }

    /// `∂_n` in weight `m` as a matrix from `P_n` to `P_{n-1}`; `∂_0` is the augmentation.
    pub fn differential(&self, n: usize, m: u32) -> Option<&SparseMatrix> {
        self.complex.differential(n + 1, m)
    }

    /// Image of `c_w · u` in `P_{n-1}`, as (cell, word) pairs with signs.
    pub fn boundary_terms(&self, cell: &[usize], word: &[u8]) -> Vec<(Vec<usize>, Vec<u8>, i64)> {
        cell.iter()
            .enumerate()
            .map(|(r, &v)| {
                let mut rest = cell.to_vec();
                rest.remove(r);
                let mut x = vec![v as u8];
                x.extend_from_slice(word);
                (rest, normal_form(&self.graph, &x), if r % 2 == 0 { 1 } else { -1 })
            })
            .collect()
    }
}

pub fn minimal_resolution(g: &SimpleGraph, max: u32, field: FieldSpec) -> MinimalResolution {
    let cells = g.cliques();
    let env = TraceAlgebra::new(g, max);
    let top = cells.len() - 1;
    let mut complex = ChainComplex::new(field, top + 1, max);
    complex.set_dim(0, 0, 1);
    for m in 0..=max {
        for (n, cs) in cells.iter().enumerate() {
            if n as u32 <= m {
                complex.set_dim(n + 1, m, cs.len() * env.dim(m - n as u32));
            }
        }
    }
    let one = field.one();
    for m in 0..=max {
        let d0 = env.dim(m);
        let aug: Vec<SparseVec> = (0..d0).map(|_| if m == 0 { SparseVec::unit(0, field) } else { SparseVec::new() }).collect();
        complex.set_differential(1, m, SparseMatrix::from_columns(if m == 0 { 1 } else { 0 }, field, &aug));
        for n in 1..cells.len() {
            if n as u32 > m {
                break;
            }
            let du = env.dim(m - n as u32);
            let lower_du = env.dim(m - n as u32 + 1);
            let lower_index: HashMap<&Vec<usize>, usize> = cells[n - 1].iter().enumerate().map(|(i, c)| (c, i)).collect();
            let mut cols = Vec::with_capacity(cells[n].len() * du);
            for cell in &cells[n] {
                for i in 0..du {
                    let entries = cell.iter().enumerate().map(|(r, &v)| {
                        let mut rest = cell.clone();
                        rest.remove(r);
                        let j = env.left_mul(v, m - n as u32, i);
                        let c = if r % 2 == 0 { one.clone() } else { one.neg_ref() };
                        (lower_index[&rest] * lower_du + j, c)
                    });
                    cols.push(SparseVec::from_entries(entries));
                }
            }
            let rows = cells[n - 1].len() * lower_du;
            complex.set_differential(n + 1, m, SparseMatrix::from_columns(rows, field, &cols));
        }
    }
    MinimalResolution { graph: g.clone(), cells, envelope: env, complex }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionReport {
    pub exact_to: u32,
    pub euler_to: u32,
    pub pbw_to: u32,
    /// `(n, m)` where `P_n` (or `k` for `n = -1`) fails to be exact in weight `m`.
    pub exactness_failures: Vec<(i64, u32)>,
    pub d_squared: bool,
    pub clique_polynomial: Vec<i64>,
    /// Hilbert series of `U(L_Γ)` counted on the word basis.
    pub envelope_series: Vec<BigInt>,
    pub euler_identity: bool,
    /// The word basis has the PBW dimensions computed from `L_Γ` through `pbw_to`.
    pub basis_agrees: bool,
}

impl ResolutionReport {
    pub fn passed(&self) -> bool {
        self.exactness_failures.is_empty() && self.d_squared && self.euler_identity && self.basis_agrees
    }
}

/// Exactness of the resolution through weight `exact_max`, the clique identity
/// `Hilb(U) · Σ_w (-t)^{|w|} = 1` through `euler_max`, and agreement of the
/// word basis with the PBW count from the Lie algebra through `pbw_max`.
pub fn verify_resolution(
    g: &SimpleGraph,
    exact_max: u32,
    euler_max: u32,
    pbw_max: u32,
    field: FieldSpec,
) -> Result<ResolutionReport, PresentedError> {
    let res = minimal_resolution(g, exact_max, field);
    let mut failures = Vec::new();
    for m in 0..=exact_max {
        for i in 0..=res.complex.max_i {
            if res.complex.homology_dim(i, m) != 0 {
                failures.push((i as i64 - 1, m));
            }
        }
    }
    let d_squared = res.complex.check_d_squared().is_ok();
    let hu = TraceAlgebra::new(g, euler_max).hilbert_series();
    let cp = g.clique_polynomial();
    let euler_identity = hu.mul(&HilbertSeries::from_i64(&cp, euler_max)) == HilbertSeries::one(euler_max);
    let p = raag_presentation(g, field)?;
    let pbw = HilbertSeries::pbw_product(&p.dim_sequence(pbw_max), pbw_max);
    let k = pbw_max.min(euler_max) as usize;
    let basis_agrees = hu.coeffs()[..=k] == pbw.coeffs()[..=k];
    Ok(ResolutionReport {
        exact_to: exact_max,
        euler_to: euler_max,
        pbw_to: pbw_max,
        exactness_failures: failures,
        d_squared,
        clique_polynomial: cp,
        envelope_series: hu.coeffs().to_vec(),
        euler_identity,
        basis_agrees,
    })
}

/// `Γ = Γ_1 ∪ Γ_2` with `Γ_1 ∩ Γ_2` complete, down to complete pieces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecompositionTree {
    Complete(Vec<usize>),
    Split { separator: Vec<usize>, left: Box<DecompositionTree>, right: Box<DecompositionTree> },
}

impl DecompositionTree {
    pub fn vertices(&self) -> Vec<usize> {
        match self {
            DecompositionTree::Complete(vs) => vs.clone(),
            DecompositionTree::Split { left, right, .. } => {
                let s: BTreeSet<usize> = left.vertices().into_iter().chain(right.vertices()).collect();
                s.into_iter().collect()
            }
        }
    }

    /// Number of nested splits along the deepest branch.
    pub fn levels(&self) -> usize {
        match self {
            DecompositionTree::Complete(_) => 0,
            DecompositionTree::Split { left, right, .. } => 1 + left.levels().max(right.levels()),
        }
    }

    /// Checks every node: leaves are complete, the parts of a split cover all
    /// vertices and edges of the induced subgraph and meet in the separator,
    /// which is complete.
    pub fn validate(&self, g: &SimpleGraph) -> bool {
        match self {
            DecompositionTree::Complete(vs) => g.is_clique(vs),
            DecompositionTree::Split { separator, left, right } => {
                let (l, r) = (left.vertices(), right.vertices());
                let all = self.vertices();
                let meet: Vec<usize> = l.iter().copied().filter(|v| r.contains(v)).collect();
                let edges_covered = all.iter().enumerate().all(|(k, &a)| {
                    all[k + 1..].iter().all(|&b| !g.has_edge(a, b) || (l.contains(&a) && l.contains(&b)) || (r.contains(&a) && r.contains(&b)))
                });
                meet == *separator
                    && g.is_clique(separator)
                    && l.len() < all.len()
                    && r.len() < all.len()
                    && edges_covered
                    && left.validate(g)
                    && right.validate(g)
            }
        }
    }

    pub fn describe(&self, g: &SimpleGraph) -> String {
        let names = |vs: &[usize]| vs.iter().map(|&v| g.names[v].as_str()).collect::<Vec<_>>().join(",");
        match self {
            DecompositionTree::Complete(vs) => format!("K{{{}}}", names(vs)),
            DecompositionTree::Split { separator, left, right } => {
                format!("({} ∪[{}] {})", left.describe(g), names(separator), right.describe(g))
            }
        }
    }
}

fn decompose_chordal(g: &SimpleGraph, vs: &[usize], order: &[usize]) -> DecompositionTree {
    if g.is_clique(vs) {
        return DecompositionTree::Complete(vs.to_vec());
    }
    // first simplicial vertex of the elimination order whose closed
    // neighbourhood is a proper part
    let local: Vec<usize> = order.iter().copied().filter(|v| vs.contains(v)).collect();
    for &v in &local {
        let nbrs: Vec<usize> = vs.iter().copied().filter(|&w| g.has_edge(v, w)).collect();
        if !g.is_clique(&nbrs) {
            continue;
        }
        let mut closed = nbrs.clone();
        closed.push(v);
        closed.sort_unstable();
        if closed.len() == vs.len() {
            continue;
        }
        let rest: Vec<usize> = vs.iter().copied().filter(|&w| w != v).collect();
        let mut sep = nbrs;
        sep.sort_unstable();
        return DecompositionTree::Split {
            separator: sep,
            left: Box::new(DecompositionTree::Complete(closed)),
            right: Box::new(decompose_chordal(g, &rest, order)),
        };
    }
    unreachable!("chordal graph that is not complete has a simplicial vertex with a proper closed neighbourhood")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoherenceVerdict {
    Coherent { elimination_order: Vec<usize>, tree: DecompositionTree },
    NotCoherent { cycle: Vec<usize> },
}

impl CoherenceVerdict {
    pub fn is_coherent(&self) -> bool {
        matches!(self, CoherenceVerdict::Coherent { .. })
    }

    pub fn label(&self) -> &'static str {
        if self.is_coherent() {
            "coherent"
        } else {
            "not coherent"
        }
    }
}

/// Applies the graph criterion: `U(L_Γ)` is coherent exactly when `Γ` is chordal.
pub fn coherence_verdict(g: &SimpleGraph) -> CoherenceVerdict {
    let v = is_chordal(g);
    match v.certificate {
        ChordalityCertificate::PerfectEliminationOrdering(order) => {
            let all: Vec<usize> = (0..g.len()).collect();
            let tree = decompose_chordal(g, &all, &order);
            CoherenceVerdict::Coherent { elimination_order: order, tree }
        }
        ChordalityCertificate::InducedCycle(cycle) => CoherenceVerdict::NotCoherent { cycle },
    }
}

/// Minimal presentation data of `[L_Γ, L_Γ]` through some weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedWitness {
    pub max_degree: u32,
    pub generator_weights: Vec<u32>,
    pub relator_weights: Vec<u32>,
}

impl DerivedWitness {
    /// No relators through the truncation; the zero algebra counts as free.
    pub fn is_free(&self) -> bool {
        self.relator_weights.is_empty()
    }
}

/// Infers a presentation of `[L_Γ, L_Γ]` through weight `max`.
pub fn derived_subalgebra_witness(g: &SimpleGraph, max: u32, field: FieldSpec) -> Result<DerivedWitness, PresentedError> {
    let p = raag_presentation(g, field)?;
    let mut names = Vec::new();
    let mut gens: Vec<Homog> = Vec::new();
    for n in 2..=max {
        for i in 0..p.dim(n) {
            names.push(format!("d{n}_{i}"));
            gens.push((n, SparseVec::unit(i, field)));
        }
    }
    if gens.is_empty() {
        return Ok(DerivedWitness { max_degree: max, generator_weights: Vec::new(), relator_weights: Vec::new() });
    }
    let inferred = GradedSubalgebra::from_homog(&p, names, gens).infer_presentation(max)?;
    Ok(DerivedWitness {
        max_degree: max,
        generator_weights: inferred.presentation.gens().iter().map(|g| g.weight).collect(),
        relator_weights: inferred.presentation.relator_weights(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn presentations() {
        let p = raag_presentation(&SimpleGraph::path(3), q()).unwrap();
        assert_eq!(p.dim_sequence(4), vec![3, 1, 2, 3]);
        let hu = HilbertSeries::pbw_product(&p.dim_sequence(6), 6);
        assert_eq!(hu, HilbertSeries::from_i64(&[1, 3, 7, 15, 31, 63, 127], 6));
        assert_eq!(raag_presentation(&SimpleGraph::complete(3), q()).unwrap().dim_sequence(3), vec![3, 0, 0]);
        assert_eq!(raag_presentation(&SimpleGraph::from_edges(2, &[]), q()).unwrap().dim_sequence(4), vec![2, 1, 2, 3]);
    }

    #[test]
    fn chordality_examples() {
        let c4 = is_chordal(&SimpleGraph::cycle(4));
        assert!(!c4.chordal);
        assert_eq!(c4.certificate, ChordalityCertificate::InducedCycle(vec![0, 1, 2, 3]));
        assert!(is_chordal(&SimpleGraph::path(5)).chordal);
        let diamond = SimpleGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)]);
        assert!(is_chordal(&diamond).chordal);
        assert!(!is_chordal(&SimpleGraph::cycle(5)).chordal);
    }

    #[test]
    fn five_vertex_classes() {
        let counts: Vec<usize> = (1..=5).map(|n| graphs_up_to_isomorphism(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 11, 34]);
    }

    #[test]
    fn boundary_of_an_edge_cell() {
        let res = minimal_resolution(&SimpleGraph::complete(2), 3, q());
        // ∂_2(c_{a,b}) = c_b a - c_a b
        let terms = res.boundary_terms(&[0, 1], &[]);
        assert_eq!(terms, vec![(vec![1], vec![0], 1), (vec![0], vec![1], -1)]);
        let d = res.differential(2, 2).unwrap();
        assert_eq!(d.cols(), 1);
        // P_1 in weight 2: c_a·{a,b}, c_b·{a,b}
        assert_eq!(d.get(1, 0), q().one().neg_ref());
        assert_eq!(d.get(2, 0), q().one());
    }

    #[test]
    fn resolutions_are_exact() {
        for g in [SimpleGraph::cycle(4), SimpleGraph::complete(2), SimpleGraph::from_edges(2, &[]), SimpleGraph::path(4)] {
            let rep = verify_resolution(&g, 6, 8, 5, q()).unwrap();
            assert!(rep.passed(), "{g}: {rep:?}");
        }
        assert_eq!(SimpleGraph::cycle(4).clique_polynomial(), vec![1, -4, 4]);
    }

    #[test]
    fn verdicts() {
        match coherence_verdict(&SimpleGraph::complete(3)) {
            CoherenceVerdict::Coherent { tree, .. } => assert_eq!(tree.levels(), 0),
            v => panic!("{v:?}"),
        }
        let p4 = SimpleGraph::path(4);
        match coherence_verdict(&p4) {
            CoherenceVerdict::Coherent { tree, .. } => {
                assert_eq!(tree.levels(), 2);
                assert!(tree.validate(&p4));
            }
            v => panic!("{v:?}"),
        }
        assert!(!coherence_verdict(&SimpleGraph::cycle(4)).is_coherent());
    }

    #[test]
    fn derived_subalgebra_freeness() {
        assert!(derived_subalgebra_witness(&SimpleGraph::path(3), 6, q()).unwrap().is_free());
        assert!(derived_subalgebra_witness(&SimpleGraph::complete(2), 6, q()).unwrap().is_free());
        assert!(!derived_subalgebra_witness(&SimpleGraph::cycle(4), 6, q()).unwrap().is_free());
    }

    #[test]
    fn parsing() {
        let g = parse_graph("vertices a b c d\nedge a b\nedge b c # path\n").unwrap();
        assert_eq!(g.edges(), vec![(0, 1), (1, 2)]);
        assert!(matches!(parse_graph("vertices a\nedge a a\n"), Err(GraphInputError::Syntax { line: 2, .. })));
        assert!(parse_graph("edge a b\n").is_err());
        assert_eq!(parse_graph(&g.to_text()).unwrap(), g);
    }
}
