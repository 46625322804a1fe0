//! One-relator graded Lie algebras as iterated HNN extensions.
//!
//! Hall elements `h_1 < h_2 < ...` are eliminated in order. After step `i` the
//! relator is rewritten over a finite family `Y_i` of right-normed brackets
//! `[h_i, ..., h_i, z]`, with the exponent bound `j(i)` chosen minimal. The
//! process stops once the leading Hall monomial of the relator is itself a
//! member of the eliminated generating family; the last `<Y_t | r>` is free.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use thiserror::Error;

use crate::freelie::{transport, FreeLieAlgebra, FreeLieError, Generator, LieElement, MonoId, Substitution};
use crate::graphalg::{hnn, GraphError, LieDerivation};
use crate::linalg::{solve, SparseMatrix};
use crate::presented::{FreeVerdict, GradedSubalgebra, PresentedError, PresentedLieAlgebra};

pub const DEFAULT_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OneRelatorError {
    #[error("expected at most one relator, found {0}")]
    RelatorCount(usize),
    #[error("relator is not weight-homogeneous")]
    Inhomogeneous,
    #[error("relator weight {weight} exceeds the truncation {max}")]
    Truncation { weight: u32, max: u32 },
    #[error("no stage reached within {cap} elimination steps (last step {}, family of {} elements)", .state.step, .state.family.len())]
    CapExceeded { cap: usize, state: Box<DecompositionState> },
    #[error("layer {layer}: {msg}")]
    Malformed { layer: usize, msg: String },
    #[error(transparent)]
    Presented(#[from] PresentedError),
    #[error(transparent)]
    FreeLie(#[from] FreeLieError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A member of a generating family: a right-normed bracket of Hall elements of
/// the original free algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyElement {
    pub name: String,
    pub weight: u32,
    /// Hall monomial of the original free algebra; only tracked up to the relator weight.
    pub monomial: Option<MonoId>,
    pub expression: String,
}

/// Snapshot of the elimination after step `step`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionState {
    pub step: usize,
    pub family: Vec<FamilyElement>,
    pub exponents: Vec<(usize, u32)>,
}

#[derive(Debug, Clone)]
pub struct TowerLayer {
    /// Position `i` of the stable letter in the Hall order.
    pub index: usize,
    pub stable: FamilyElement,
    pub exponent: u32,
    /// `Y_i`, the generators of `B_i = <Y_i | r>`.
    pub family: Vec<FamilyElement>,
    /// `Z_i`, the generators of the associated subalgebra `A_i` of `B_i`.
    pub associated: Vec<FamilyElement>,
    pub base: Arc<PresentedLieAlgebra>,
}

/// `L = (...(B_t *_{h_t}) ...) *_{h_1}` with layers listed innermost first.
#[derive(Debug, Clone)]
pub struct HNNTower {
    pub source: Arc<PresentedLieAlgebra>,
    pub relator: Option<LieElement>,
    pub leading: Option<MonoId>,
    /// The stage `t`.
    pub steps: usize,
    pub base_family: Vec<FamilyElement>,
    pub base: Arc<PresentedLieAlgebra>,
    pub layers: Vec<TowerLayer>,
}

impl HNNTower {
    pub fn depth(&self) -> usize {
        self.layers.len()
    }
}

struct Namer {
    prefix: String,
    next: usize,
}

impl Namer {
    fn new(x: &FreeLieAlgebra) -> Self {
        let mut prefix = "u".to_string();
        while x.gens().iter().any(|g| g.name.starts_with(&prefix)) {
            prefix.push('u');
        }
        Namer { prefix, next: 0 }
    }

    fn fresh(&mut self) -> String {
        self.next += 1;
        format!("{}{}", self.prefix, self.next)
    }
}

struct Context {
    x: Arc<FreeLieAlgebra>,
    relator: LieElement,
    weight: u32,
}

impl Context {
    fn generators(&self) -> Vec<FamilyElement> {
        self.x
            .gens()
            .iter()
            .enumerate()
            .map(|(g, gen)| FamilyElement {
                name: gen.name.clone(),
                weight: gen.weight,
                monomial: (gen.weight <= self.weight).then(|| self.x.generator_monomial(g)),
                expression: gen.name.clone(),
            })
            .collect()
    }

    fn bracket(&self, h: &FamilyElement, z: &FamilyElement, namer: &mut Namer) -> Result<FamilyElement, String> {
        let weight = h.weight + z.weight;
        let monomial = match (h.monomial, z.monomial) {
            (Some(a), Some(b)) if weight <= self.weight => {
                Some(self.x.pair_id(a, b).ok_or_else(|| format!("[{},{}] is not a Hall monomial", h.expression, z.expression))?)
            }
            _ => None,
        };
        Ok(FamilyElement { name: namer.fresh(), weight, monomial, expression: format!("[{},{}]", h.expression, z.expression) })
    }

    /// `{[h^k, z] : z in prev \ {h}, 0 <= k <= j}` and the part with `k < j`.
    fn eliminate(
        &self,
        prev: &[FamilyElement],
        h: &FamilyElement,
        j: u32,
        namer: &mut Namer,
    ) -> Result<(Vec<FamilyElement>, Vec<FamilyElement>), String> {
        let mut family = Vec::new();
        let mut associated = Vec::new();
        for z in prev.iter().filter(|z| z.name != h.name) {
            let mut cur = z.clone();
            for k in 0..=j {
                if k > 0 {
                    cur = self.bracket(h, &cur, namer)?;
                }
                if k < j {
                    associated.push(cur.clone());
                }
                family.push(cur.clone());
            }
        }
        Ok((family, associated))
    }

    /// `r` as an element of the free algebra on `family`, if it lies in the
    /// subalgebra the family generates.
    fn express(&self, family: &[FamilyElement]) -> Result<Option<(Arc<FreeLieAlgebra>, LieElement)>, OneRelatorError> {
        let fy = family_algebra(family, self.x.field())?;
        let images = family
            .iter()
            .map(|y| y.monomial.map_or_else(|| LieElement::zero(&self.x), |m| LieElement::monomial(&self.x, m)))
            .collect();
        let mut s = Substitution::new(&self.x, images);
        let monos = fy.basis(self.weight);
        let cols: Vec<_> = monos.iter().map(|&m| s.monomial(&fy, m).coords(self.weight)).collect();
        let m = SparseMatrix::from_columns(self.x.dim(self.weight), self.x.field(), &cols);
        let Some(x) = solve(&m, &self.relator.coords(self.weight)) else { return Ok(None) };
        let ry = LieElement::from_coords(&fy, self.weight, &x);
        debug_assert_eq!(s.apply(&ry), self.relator);
        Ok(Some((fy, ry)))
    }

    fn base(&self, family: &[FamilyElement]) -> Result<Option<Arc<PresentedLieAlgebra>>, OneRelatorError> {
        Ok(match self.express(family)? {
            Some((fy, ry)) => Some(PresentedLieAlgebra::new(&fy, vec![ry])?),
            None => None,
        })
    }
}

fn family_algebra(family: &[FamilyElement], field: crate::scalars::FieldSpec) -> Result<Arc<FreeLieAlgebra>, FreeLieError> {
    FreeLieAlgebra::new(family.iter().map(|y| Generator::new(y.name.clone(), y.weight)).collect(), field)
}

fn single_relator(p: &PresentedLieAlgebra) -> Result<Option<(LieElement, u32)>, OneRelatorError> {
    match p.relators() {
        [] => Ok(None),
        [r] => Ok(Some((r.clone(), r.weight().ok_or(OneRelatorError::Inhomogeneous)?))),
        rs => Err(OneRelatorError::RelatorCount(rs.len())),
    }
}

/// `X_i` from `X_{i-1}`, truncated at weight `max`.
fn next_generating_family(x: &FreeLieAlgebra, prev: &BTreeSet<MonoId>, h: MonoId, max: u32) -> BTreeSet<MonoId> {
    let mut out = BTreeSet::new();
    for &z in prev.iter().filter(|&&z| z != h) {
        let mut cur = z;
        loop {
            out.insert(cur);
            if x.weight(cur) + x.weight(h) > max {
                break;
            }
            cur = x.pair_id(h, cur).expect("right-normed Hall monomial");
        }
    }
    out
}

/// Decomposes a one-relator algebra into an iterated HNN extension over a free base.
///
/// `cap` bounds the number of Hall elements eliminated.
pub fn decompose(p: &Arc<PresentedLieAlgebra>, max: u32, cap: usize) -> Result<HNNTower, OneRelatorError> {
    let x = p.free().clone();
    let Some((relator, weight)) = single_relator(p)? else {
        return Ok(HNNTower {
            source: p.clone(),
            relator: None,
            leading: None,
            steps: 0,
            base_family: Context { x: x.clone(), relator: LieElement::zero(&x), weight: 0 }.generators(),
            base: p.clone(),
            layers: Vec::new(),
        });
    };
    if weight > max {
        return Err(OneRelatorError::Truncation { weight, max });
    }
    let cx = Context { x: x.clone(), relator: relator.clone(), weight };
    let leading = relator.leading().expect("nonzero relator").0;
    let hall: Vec<MonoId> = (1..=weight).flat_map(|n| x.basis(n)).collect();
    let mut namer = Namer::new(&x);
    let mut family = cx.generators();
    let mut generating: BTreeSet<MonoId> = (0..x.gens().len())
        .filter(|&g| x.gens()[g].weight <= weight)
        .map(|g| x.generator_monomial(g))
        .collect();
    let mut exponents = Vec::new();
    let mut layers = Vec::new();
    let mut step = 0;
    while !generating.contains(&leading) {
        if step >= cap {
            return Err(OneRelatorError::CapExceeded {
                cap,
                state: Box::new(DecompositionState { step, family, exponents }),
            });
        }
        let h = hall[step];
        step += 1;
        generating = next_generating_family(&x, &generating, h, weight);
        let Some(stable) = family.iter().find(|y| y.monomial == Some(h)).cloned() else { continue };
        let mut j = 0;
        let (next, associated) = loop {
            let mut trial = Namer { prefix: namer.prefix.clone(), next: namer.next };
            let (fam, assoc) =
                cx.eliminate(&family, &stable, j, &mut trial).map_err(|msg| OneRelatorError::Malformed { layer: step, msg })?;
            if cx.express(&fam)?.is_some() {
                namer = trial;
                break (fam, assoc);
            }
            j += 1;
        };
        let base = cx.base(&next)?.expect("relator expressed");
        exponents.push((step, j));
        layers.push(TowerLayer { index: step, stable, exponent: j, family: next.clone(), associated, base });
        family = next;
    }
    let base = match layers.last() {
        Some(l) => l.base.clone(),
        None => p.clone(),
    };
    layers.reverse();
    Ok(HNNTower { source: p.clone(), relator: Some(relator), leading: Some(leading), steps: step, base_family: family, base, layers })
}

/// True iff the homogeneous element `r` is not in the subalgebra of the free
/// algebra generated by `z`.
pub fn freiheitssatz_check(r: &LieElement, z: &[LieElement], max: u32) -> Result<bool, OneRelatorError> {
    let w = r.weight().ok_or(OneRelatorError::Inhomogeneous)?;
    if w > max {
        return Err(OneRelatorError::Truncation { weight: w, max });
    }
    let free = PresentedLieAlgebra::new(r.algebra(), Vec::new())?;
    let gens = z.iter().enumerate().map(|(i, e)| (format!("z{i}"), e.clone())).collect();
    let sub = GradedSubalgebra::new(&free, gens)?;
    Ok(!sub.contains(r)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TowerCheck {
    Rebuild,
    Dimensions,
    FreeWitness,
    Leibniz,
}

impl TowerCheck {
    pub fn label(self) -> &'static str {
        match self {
            TowerCheck::Rebuild => "rebuild",
            TowerCheck::Dimensions => "dimensions",
            TowerCheck::FreeWitness => "free-witness",
            TowerCheck::Leibniz => "leibniz",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerFailure {
    pub check: TowerCheck,
    /// Hall position of the layer; `None` for the base or the whole tower.
    pub layer: Option<usize>,
    pub weight: Option<u32>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerReport {
    pub index: usize,
    pub stable: String,
    pub exponent: u32,
    /// Dimensions of the associated subalgebra in weights `1..=max`.
    pub associated_dims: Vec<usize>,
    pub associated_free: bool,
    /// `r` is not in the free subalgebra on `Z_i`; this is what makes
    /// `A_i` free, and for `j(i) > 0` it is the minimality of `j(i)`.
    pub freiheitssatz: bool,
    pub minimal: bool,
    pub leibniz: bool,
    pub rebuilt_dims: Vec<usize>,
    pub expected_dims: Vec<usize>,
}

impl LayerReport {
    pub fn freeness_note(&self) -> &'static str {
        if self.freiheitssatz {
            "free by the Freiheitssatz"
        } else {
            "not guaranteed by Freiheitssatz route"
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerReport {
    pub max_degree: u32,
    pub base_free: FreeVerdict,
    /// Innermost first, as in the tower.
    pub layers: Vec<LayerReport>,
    pub source_dims: Vec<usize>,
    pub rebuilt_dims: Vec<usize>,
    pub failures: Vec<TowerFailure>,
}

impl TowerReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn first_difference(a: &[usize], b: &[usize]) -> Option<u32> {
    a.iter().zip(b).position(|(x, y)| x != y).map(|k| k as u32 + 1)
}

/// The working copy of a rebuilt algebra: a simplified presentation and the
/// images of every named family element in it.
struct Working {
    algebra: Arc<PresentedLieAlgebra>,
    images: HashMap<String, LieElement>,
}

impl Working {
    fn new(literal: &Arc<PresentedLieAlgebra>) -> Result<Self, PresentedError> {
        let (algebra, imgs) = literal.simplify()?;
        let images = literal.gens().iter().map(|g| g.name.clone()).zip(imgs).collect();
        Ok(Working { algebra, images })
    }

    /// Replaces the algebra by an extension `ext` whose generators contain the
    /// current ones plus `stable`.
    fn extend(&self, ext: &Arc<PresentedLieAlgebra>, stable: &str) -> Result<Self, OneRelatorError> {
        let (algebra, imgs) = ext.simplify()?;
        let mut s = Substitution::new(algebra.free(), imgs.clone());
        let mut images = HashMap::new();
        for (name, e) in &self.images {
            images.insert(name.clone(), s.apply(&transport(e, ext.free())?));
        }
        let t = ext.free().generator_index(stable).expect("stable letter");
        images.insert(stable.to_string(), imgs[t].clone());
        Ok(Working { algebra, images })
    }
}

/// Checks a tower against the presentation it claims to decompose, in weights up to `max`.
///
/// Families are recomputed from the stable letters and exponents of the
/// layers, so a tower with altered exponents is checked as stated.
pub fn verify_tower(tower: &HNNTower, p: &Arc<PresentedLieAlgebra>, max: u32) -> Result<TowerReport, OneRelatorError> {
    let source_dims = p.dim_sequence(max);
    let mut report = TowerReport {
        max_degree: max,
        base_free: FreeVerdict::Inconclusive,
        layers: Vec::new(),
        source_dims: source_dims.clone(),
        rebuilt_dims: Vec::new(),
        failures: Vec::new(),
    };
    let x = p.free().clone();
    let relator = single_relator(p)?;
    let Some((relator, weight)) = relator else {
        if !tower.layers.is_empty() {
            return Err(OneRelatorError::Malformed { layer: tower.layers[0].index, msg: "layers over a free algebra".into() });
        }
        report.base_free = tower.base.is_free_up_to(max);
        report.rebuilt_dims = tower.base.dim_sequence(max);
        push_base_checks(&mut report);
        return Ok(report);
    };
    if weight > max {
        return Err(OneRelatorError::Truncation { weight, max });
    }
    let cx = Context { x: x.clone(), relator, weight };
    let mut namer = Namer::new(&x);

    // outermost first: families Y_0 = X, Y_1, ..., Y_t
    let mut families = vec![cx.generators()];
    let mut associated = Vec::new();
    let mut stables = Vec::new();
    for layer in tower.layers.iter().rev() {
        let prev = families.last().unwrap();
        let Some(h) = prev.iter().find(|y| y.expression == layer.stable.expression).cloned() else {
            return Err(OneRelatorError::Malformed {
                layer: layer.index,
                msg: format!("stable letter {} is not in the previous family", layer.stable.expression),
            });
        };
        let (fam, assoc) =
            cx.eliminate(prev, &h, layer.exponent, &mut namer).map_err(|msg| OneRelatorError::Malformed { layer: layer.index, msg })?;
        families.push(fam);
        associated.push(assoc);
        stables.push((layer.index, h, layer.exponent));
    }
    let mut bases = Vec::new();
    for (k, fam) in families.iter().enumerate() {
        match cx.base(fam)? {
            Some(b) => bases.push(b),
            None => {
                report.failures.push(TowerFailure {
                    check: TowerCheck::Dimensions,
                    layer: Some(stables[k - 1].0),
                    weight: Some(weight),
                    message: "relator is not expressible over the layer family".into(),
                });
                return Ok(report);
            }
        }
    }
    let t = stables.len();
    report.base_free = bases[t].is_free_up_to(max);
    let mut work = Working::new(&bases[t])?;
    let mut layer_reports = Vec::new();
    for k in (0..t).rev() {
        let (index, h, exponent) = &stables[k];
        let z = &associated[k];
        let fam = &families[k + 1];
        let images: Vec<(String, LieElement)> = z.iter().map(|e| (e.name.clone(), work.images[&e.name].clone())).collect();
        let zx: Vec<LieElement> =
            z.iter().map(|e| e.monomial.map_or_else(|| LieElement::zero(&x), |m| LieElement::monomial(&x, m))).collect();
        let freiheitssatz = freiheitssatz_check(&cx.relator, &zx, max)?;
        let minimal = *exponent == 0 || cx.express(z)?.is_none();

        let domain = Arc::new(GradedSubalgebra::new(&work.algebra, images)?);
        let associated_dims = domain.dim_sequence(max);
        let witness = FreeLieAlgebra::new(z.iter().map(|e| Generator::new(e.name.clone(), e.weight)).collect(), x.field())?;
        let free_dims: Vec<usize> = (1..=max).map(|n| witness.dim(n)).collect();
        let associated_free = associated_dims == free_dims;
        if !associated_free {
            report.failures.push(TowerFailure {
                check: TowerCheck::FreeWitness,
                layer: Some(*index),
                weight: first_difference(&associated_dims, &free_dims),
                message: format!("associated subalgebra of {} is not free on its generators", h.expression),
            });
        }

        // b -> [h, b] sends [h^k, z] to [h^(k+1), z], the next family element
        let values: Vec<LieElement> = z
            .iter()
            .map(|e| {
                let pos = fam.iter().position(|y| y.name == e.name).expect("associated element in family");
                work.images[&fam[pos + 1].name].clone()
            })
            .collect();
        let der = LieDerivation::new(domain, values, h.weight)?;
        let leibniz = match der.check_leibniz(max) {
            Ok(()) => true,
            Err(GraphError::Leibniz { weight, element }) => {
                report.failures.push(TowerFailure {
                    check: TowerCheck::Leibniz,
                    layer: Some(*index),
                    weight: Some(weight),
                    message: format!("derivation fails on {element}"),
                });
                false
            }
            Err(e) => return Err(e.into()),
        };
        if !leibniz {
            report.layers = layer_reports;
            return Ok(report);
        }
        let ext = hnn(&der, &h.name, max)?;
        work = work.extend(&ext, &h.name)?;
        let rebuilt_dims = work.algebra.dim_sequence(max);
        let expected_dims = if k == 0 { source_dims.clone() } else { Working::new(&bases[k])?.algebra.dim_sequence(max) };
        if let Some(w) = first_difference(&rebuilt_dims, &expected_dims) {
            report.failures.push(TowerFailure {
                check: TowerCheck::Rebuild,
                layer: Some(*index),
                weight: Some(w),
                message: format!("extension by {} differs from the presentation on the previous family", h.expression),
            });
        }
        layer_reports.push(LayerReport {
            index: *index,
            stable: h.expression.clone(),
            exponent: *exponent,
            associated_dims,
            associated_free,
            freiheitssatz,
            minimal,
            leibniz,
            rebuilt_dims,
            expected_dims,
        });
    }
    report.layers = layer_reports;
    report.rebuilt_dims = work.algebra.dim_sequence(max);
    push_base_checks(&mut report);
    Ok(report)
}

fn push_base_checks(report: &mut TowerReport) {
    match report.base_free {
        FreeVerdict::FreeWitnessed => {}
        FreeVerdict::NotFree { weight } => report.failures.push(TowerFailure {
            check: TowerCheck::FreeWitness,
            layer: None,
            weight: Some(weight),
            message: "base has nonzero H_2".into(),
        }),
        FreeVerdict::Inconclusive => report.failures.push(TowerFailure {
            check: TowerCheck::FreeWitness,
            layer: None,
            weight: None,
            message: "base relator lies beyond the truncation".into(),
        }),
    }
    if let Some(w) = first_difference(&report.rebuilt_dims, &report.source_dims) {
        report.failures.push(TowerFailure {
            check: TowerCheck::Dimensions,
            layer: None,
            weight: Some(w),
            message: "rebuilt algebra has different dimensions".into(),
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::FieldSpec;

    fn one_rel(rel: &str) -> Arc<PresentedLieAlgebra> {
        PresentedLieAlgebra::from_text(vec![Generator::new("x", 1), Generator::new("y", 1)], FieldSpec::Rationals, &[rel]).unwrap()
    }

    #[test]
    fn abelian_rank_two() {
        let p = one_rel("[x,y]");
        let t = decompose(&p, 6, DEFAULT_CAP).unwrap();
        assert_eq!(t.depth(), 1);
        assert_eq!(t.layers[0].stable.expression, "x");
        assert_eq!(t.layers[0].exponent, 1);
        let z: Vec<_> = t.layers[0].associated.iter().map(|e| e.expression.as_str()).collect();
        assert_eq!(z, ["y"]);
        let rep = verify_tower(&t, &p, 6).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures);
        assert_eq!(rep.rebuilt_dims, vec![2, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn two_layers() {
        let p = one_rel("[y,[x,y]]");
        let t = decompose(&p, 8, DEFAULT_CAP).unwrap();
        let stables: Vec<_> = t.layers.iter().map(|l| l.stable.expression.as_str()).collect();
        assert_eq!(stables, ["y", "x"]);
        let rep = verify_tower(&t, &p, 8).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures);
        assert!(rep.layers.iter().all(|l| l.minimal && l.freiheitssatz));
    }

    #[test]
    fn lowered_exponent_fails_dimensions() {
        let p = one_rel("[x,[x,y]]");
        let mut t = decompose(&p, 6, DEFAULT_CAP).unwrap();
        assert_eq!(t.layers[0].exponent, 2);
        t.layers[0].exponent = 1;
        let rep = verify_tower(&t, &p, 6).unwrap();
        assert_eq!(rep.failures[0].check, TowerCheck::Dimensions);
    }

    #[test]
    fn free_and_degenerate_towers() {
        let free = PresentedLieAlgebra::free_algebra(vec![Generator::new("x", 1), Generator::new("y", 1)], FieldSpec::Rationals).unwrap();
        let t = decompose(&free, 5, DEFAULT_CAP).unwrap();
        assert_eq!(t.depth(), 0);
        assert!(verify_tower(&t, &free, 5).unwrap().passed());

        let p = PresentedLieAlgebra::from_text(vec![Generator::new("x", 1), Generator::new("y", 2)], FieldSpec::Rationals, &["y"])
            .unwrap();
        let t = decompose(&p, 5, DEFAULT_CAP).unwrap();
        assert_eq!(t.depth(), 0);
        let rep = verify_tower(&t, &p, 5).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.base_free, FreeVerdict::FreeWitnessed);
    }

    #[test]
    fn freiheitssatz_examples() {
        let x = FreeLieAlgebra::on_names(&["x", "y"], FieldSpec::Rationals).unwrap();
        let gx = LieElement::generator(&x, 0);
        let gy = LieElement::generator(&x, 1);
        let r = gx.bracket(&gy);
        assert!(freiheitssatz_check(&r, std::slice::from_ref(&gx), 4).unwrap());
        assert!(!freiheitssatz_check(&r, &[gx, gy], 4).unwrap());
    }

    #[test]
    fn cap_is_reported() {
        let p = one_rel("[y,[x,y]]");
        match decompose(&p, 8, 1) {
            Err(OneRelatorError::CapExceeded { state, .. }) => assert_eq!(state.step, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_two_relators() {
        let p = PresentedLieAlgebra::from_text(
            vec![Generator::new("x", 1), Generator::new("y", 1)],
            FieldSpec::Rationals,
            &["[x,y]", "[x,[x,y]]"],
        )
        .unwrap();
        assert!(matches!(decompose(&p, 5, DEFAULT_CAP), Err(OneRelatorError::RelatorCount(2))));
    }
}
