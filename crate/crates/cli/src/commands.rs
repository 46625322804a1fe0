use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use gradedlie::envelope::hilbert_series;
use gradedlie::subalgebra_example;
use gradedlie::freelie::{hall_set, FreeLieAlgebra, Generator};
use gradedlie::graphalg::{load_graph, parse_value, GraphError};
use gradedlie::homology::{finiteness_witness, homology_table};
use gradedlie::onerelator::{decompose, verify_tower, FamilyElement, OneRelatorError};
use gradedlie::presented::{parse_presentation, FreeVerdict, GradedSubalgebra, PresentedError, PresentedLieAlgebra};
use gradedlie::raag::{
    coherence_verdict, derived_subalgebra_witness, is_chordal, minimal_resolution, parse_graph, raag_presentation, verify_resolution, ChordalityCertificate,
    CoherenceVerdict, SimpleGraph,
};
use gradedlie::selftest;
use serde_json::{json, Map, Value};

use crate::report::{list, strings, CliError, Report};
use crate::Config;

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::input(path, e))
}

fn load_presentation(c: &Config, path: &Path) -> Result<Arc<PresentedLieAlgebra>, CliError> {
    parse_presentation(&read(path)?, c.field).map_err(|e| CliError::input(path, e))
}

fn load_simple_graph(path: &Path) -> Result<SimpleGraph, CliError> {
    parse_graph(&read(path)?).map_err(|e| CliError::input(path, e))
}

fn failed(e: impl std::fmt::Display) -> CliError {
    CliError::Failed(e.to_string())
}

fn free_label(v: FreeVerdict) -> String {
    match v {
        FreeVerdict::FreeWitnessed => "free-witnessed".into(),
        FreeVerdict::NotFree { weight } => format!("not free (relation in weight {weight})"),
        FreeVerdict::Inconclusive => "inconclusive".into(),
    }
}

pub fn hall(c: &Config, gens: &str) -> Result<Report, CliError> {
    let parsed = gens
        .split(',')
        .map(|g| {
            let g = g.trim();
            match g.split_once(':') {
                Some((name, w)) => w.trim().parse::<u32>().map(|w| Generator::new(name.trim(), w)).map_err(|_| format!("bad weight in {g}")),
                None => Ok(Generator::new(g, 1)),
            }
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(CliError::Input)?;
    let n = c.max_degree_or(5);
    let alg = FreeLieAlgebra::new(parsed, c.field_or_default()).map_err(|e| CliError::Input(e.to_string()))?;
    let hs = hall_set(&alg, n);
    let counts = hs.counts();
    let mut monomials = Map::new();
    let mut table = "weight  count  monomials\n".to_string();
    for w in 1..=n {
        let ms: Vec<String> = hs.by_weight[w as usize].iter().map(|&m| alg.monomial_string(m)).collect();
        let _ = writeln!(table, "{w:>6}  {:>5}  {}", ms.len(), ms.join(" "));
        monomials.insert(w.to_string(), json!(ms));
    }
    let gens: Vec<Value> = alg.gens().iter().map(|g| json!({"name": g.name, "weight": g.weight.to_string()})).collect();
    Ok(Report::new("hall", true, json!({"generators": gens, "counts": strings(&counts), "monomials": monomials}), table))
}

pub fn dims(c: &Config, file: &Path) -> Result<Report, CliError> {
    let p = load_presentation(c, file)?;
    let d = p.dim_sequence(c.max_degree_or(10));
    Ok(Report::new("dims", true, json!({"dims": strings(&d)}), format!("dims {}\n", list(&d))))
}

pub fn hilbert(c: &Config, file: &Path) -> Result<Report, CliError> {
    let p = load_presentation(c, file)?;
    let s = hilbert_series(&p, c.max_degree_or(10));
    let coeffs = strings(s.coeffs());
    Ok(Report::new("hilbert", true, json!({"series": coeffs}), format!("hilbert {}\n", list(s.coeffs()))))
}

pub fn homology(c: &Config, file: &Path) -> Result<Report, CliError> {
    let p = load_presentation(c, file)?;
    let n = c.max_degree_or(10);
    let t = homology_table(&p, c.hom_bound as usize, n);
    let mut out = Map::new();
    let mut table = String::new();
    for i in 0..=c.hom_bound as usize {
        let row: Vec<usize> = (0..=n).map(|w| t.get(i, w as i64)).collect();
        let mut m = Map::new();
        for (w, d) in row.iter().enumerate() {
            m.insert(w.to_string(), json!(d.to_string()));
        }
        out.insert(i.to_string(), Value::Object(m));
        let _ = writeln!(table, "H_{i} {}", list(&row));
    }
    Ok(Report::new("homology", true, json!({"homology": out}), table))
}

pub fn hopf(c: &Config, file: &Path) -> Result<Report, CliError> {
    let p = load_presentation(c, file)?;
    let n = c.max_degree_or(10);
    let (h1, h2) = (p.h1(n), p.h2_hopf(n));
    let free = free_label(p.is_free_up_to(n));
    let table = format!("H_1 {}\nH_2 {}\nfree {free}\n", list(&h1), list(&h2));
    Ok(Report::new("hopf", true, json!({"h1": strings(&h1), "h2": strings(&h2), "free": free}), table))
}

pub fn infer(c: &Config, file: &Path, gens: &[String]) -> Result<Report, CliError> {
    let p = load_presentation(c, file)?;
    let n = c.max_degree_or(8);
    let mut elements = Vec::new();
    for g in gens {
        let (name, expr) = g.split_once('=').ok_or_else(|| CliError::Input(format!("expected name=expression, got {g}")))?;
        let e = parse_value(expr.trim(), p.free()).map_err(|e| CliError::Input(format!("{name}: {e}")))?;
        elements.push((name.trim().to_string(), e));
    }
    let sub = GradedSubalgebra::new(&p, elements).map_err(|e| CliError::Input(e.to_string()))?;
    let inferred = sub.infer_presentation(n).map_err(failed)?;
    let q = &inferred.presentation;
    let dims = sub.dim_sequence(n);
    let agrees = q.dim_sequence(n) == dims;
    let chosen: Vec<&str> = inferred.chosen.iter().map(|&i| sub.names()[i].as_str()).collect();
    let rels: Vec<String> = q.relators().iter().map(|r| r.to_string()).collect();
    let table = format!("{}dims {}\n", q.to_text(), list(&dims));
    Ok(Report::new(
        "infer",
        agrees,
        json!({
            "generators": q.gens().iter().map(|g| json!({"name": g.name, "weight": g.weight.to_string()})).collect::<Vec<_>>(),
            "chosen": chosen,
            "relators": rels,
            "relator_weights": strings(q.relator_weights()),
            "dims": strings(&dims),
            "dims_agree": agrees,
            "presentation": q.to_text(),
        }),
        table,
    ))
}

fn graph_input(path: &Path, e: GraphError) -> CliError {
    match e {
        GraphError::Syntax { .. } | GraphError::Io { .. } | GraphError::Presented(PresentedError::Syntax { .. }) => CliError::input(path, e),
        e => failed(e),
    }
}

pub fn graph_verify(c: &Config, file: &Path, euler: Option<u32>) -> Result<Report, CliError> {
    let n = c.max_degree_or(8);
    let g = load_graph(file, c.field).map_err(|e| graph_input(file, e))?;
    let r = gradedlie::graphalg::verify_graph_exactness(&g, euler.unwrap_or(n), n).map_err(failed)?;
    let euler: Vec<Value> = r
        .euler
        .iter()
        .map(|t| json!({"weight": t.weight.to_string(), "edge_side": t.edge_side.to_string(), "vertex_side": t.vertex_side.to_string()}))
        .collect();
    let exactness: Vec<Value> = r.exactness.iter().map(|w| json!({"weight": w.weight.to_string(), "failure": w.failure})).collect();
    let mut table = format!("euler identity {}\nexact {}\n", r.euler_holds, r.exact);
    for w in r.exactness.iter().filter(|w| w.failure.is_some()) {
        let _ = writeln!(table, "  weight {}: {}", w.weight, w.failure.as_deref().unwrap_or(""));
    }
    if r.inconclusive {
        table.push_str("inconclusive: truncation below the structure weights\n");
    }
    Ok(Report::new(
        "graph verify",
        r.passed(),
        json!({"euler": euler, "euler_holds": r.euler_holds, "exactness": exactness, "exact": r.exact, "inconclusive": r.inconclusive}),
        table,
    ))
}

fn family(es: &[FamilyElement]) -> Value {
    json!(es.iter().map(|e| json!({"name": e.name, "weight": e.weight.to_string(), "expression": e.expression})).collect::<Vec<_>>())
}

fn names(es: &[FamilyElement]) -> String {
    es.iter().map(|e| format!("{}={}", e.name, e.expression)).collect::<Vec<_>>().join(", ")
}

pub fn onerelator(c: &Config, file: &Path) -> Result<Report, CliError> {
    let p = load_presentation(c, file)?;
    let n = c.max_degree_or(10);
    let tower = match decompose(&p, n, c.cap) {
        Ok(t) => t,
        Err(e @ (OneRelatorError::RelatorCount(_) | OneRelatorError::Inhomogeneous | OneRelatorError::Truncation { .. })) => {
            return Err(CliError::input(file, e))
        }
        Err(e) => return Err(failed(e)),
    };
    let report = verify_tower(&tower, &p, n).map_err(failed)?;
    let mut table = format!(
        "relator {}\nsteps {}\nbase {} ({})\n",
        tower.relator.as_ref().map_or("none".to_string(), |r| r.to_string()),
        tower.steps,
        names(&tower.base_family),
        free_label(report.base_free)
    );
    let mut layers = Vec::new();
    for (l, lr) in tower.layers.iter().zip(&report.layers) {
        let _ = writeln!(
            table,
            "layer h_{} stable {}={} j={} Z: {} | {} | minimal {} leibniz {}",
            l.index,
            l.stable.name,
            l.stable.expression,
            l.exponent,
            names(&l.associated),
            lr.freeness_note(),
            lr.minimal,
            lr.leibniz
        );
        layers.push(json!({
            "index": l.index.to_string(),
            "stable": {"name": l.stable.name, "weight": l.stable.weight.to_string(), "expression": l.stable.expression},
            "exponent": l.exponent.to_string(),
            "family": family(&l.family),
            "associated": family(&l.associated),
            "associated_dims": strings(&lr.associated_dims),
            "associated_free": lr.associated_free,
            "freiheitssatz": lr.freiheitssatz,
            "freeness_note": lr.freeness_note(),
            "minimal": lr.minimal,
            "leibniz": lr.leibniz,
        }));
    }
    for f in &report.failures {
        let _ = writeln!(table, "FAILED {} layer {:?} weight {:?}: {}", f.check.label(), f.layer, f.weight, f.message);
    }
    let _ = writeln!(table, "dims {}\nrebuilt {}", list(&report.source_dims), list(&report.rebuilt_dims));
    let failures: Vec<Value> = report
        .failures
        .iter()
        .map(|f| json!({"check": f.check.label(), "layer": f.layer.map(|l| l.to_string()), "weight": f.weight.map(|w| w.to_string()), "message": f.message}))
        .collect();
    Ok(Report::new(
        "onerelator decompose",
        report.passed(),
        json!({
            "relator": tower.relator.as_ref().map(|r| r.to_string()),
            "steps": tower.steps.to_string(),
            "depth": tower.depth().to_string(),
            "base": {"family": family(&tower.base_family), "free": free_label(report.base_free), "presentation": tower.base.to_text()},
            "layers": layers,
            "source_dims": strings(&report.source_dims),
            "rebuilt_dims": strings(&report.rebuilt_dims),
            "failures": failures,
        }),
        table,
    ))
}

fn vertex_names(g: &SimpleGraph, vs: &[usize]) -> Vec<String> {
    vs.iter().map(|&v| g.names()[v].clone()).collect()
}

pub fn raag_chordal(_: &Config, file: &Path) -> Result<Report, CliError> {
    let g = load_simple_graph(file)?;
    let v = is_chordal(&g);
    let (kind, vs) = match &v.certificate {
        ChordalityCertificate::PerfectEliminationOrdering(o) => ("perfect-elimination-ordering", o),
        ChordalityCertificate::InducedCycle(c) => ("induced-cycle", c),
    };
    let cert = vertex_names(&g, vs);
    let valid = v.validate(&g);
    let table = format!("chordal {}\n{kind} {}\ncertificate valid {valid}\n", v.chordal, cert.join(" "));
    Ok(Report::new(
        "raag chordal",
        v.chordal && valid,
        json!({"chordal": v.chordal, "certificate": {"kind": kind, "vertices": cert}, "certificate_valid": valid}),
        table,
    ))
}

pub fn raag_resolve(c: &Config, file: &Path, euler: Option<u32>) -> Result<Report, CliError> {
    let g = load_simple_graph(file)?;
    let n = c.max_degree_or(10);
    let field = c.field_or_default();
    let euler = euler.unwrap_or(n);
    let r = verify_resolution(&g, n, euler, n.min(6), field).map_err(failed)?;
    let res = minimal_resolution(&g, n.min(4), field);
    let ranks: Vec<usize> = res.cells.iter().map(Vec::len).collect();
    let failures: Vec<Value> = r.exactness_failures.iter().map(|(i, m)| json!({"position": i.to_string(), "weight": m.to_string()})).collect();
    let table = format!(
        "free ranks {}\nclique polynomial {}\nenvelope series {}\nexact through {} {}\nd^2 = 0 {}\nclique identity through {} {}\nword basis matches PBW through {} {}\n",
        list(&ranks),
        list(&r.clique_polynomial),
        list(&r.envelope_series),
        r.exact_to,
        r.exactness_failures.is_empty(),
        r.d_squared,
        r.euler_to,
        r.euler_identity,
        r.pbw_to,
        r.basis_agrees
    );
    Ok(Report::new(
        "raag resolve",
        r.passed(),
        json!({
            "free_ranks": strings(&ranks),
            "cells": res.cells.iter().map(|k| k.iter().map(|w| vertex_names(&g, w)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "clique_polynomial": strings(&r.clique_polynomial),
            "envelope_series": strings(&r.envelope_series),
            "exact_to": r.exact_to.to_string(),
            "exactness_failures": failures,
            "d_squared": r.d_squared,
            "euler_to": r.euler_to.to_string(),
            "euler_identity": r.euler_identity,
            "pbw_to": r.pbw_to.to_string(),
            "basis_agrees": r.basis_agrees,
        }),
        table,
    ))
}

/// Top weights of the homology window that must be empty for a "consistent" finiteness status.
const FINITENESS_MARGIN: u32 = 2;

pub fn raag_verdict(c: &Config, file: &Path) -> Result<Report, CliError> {
    let g = load_simple_graph(file)?;
    let n = c.max_degree_or(6);
    let v = coherence_verdict(&g);
    let w = derived_subalgebra_witness(&g, n, c.field_or_default()).map_err(failed)?;
    let witness = json!({
        "max_degree": w.max_degree.to_string(),
        "generator_weights": strings(&w.generator_weights),
        "relator_weights": strings(&w.relator_weights),
        "free": w.is_free(),
    });
    let mut derived = format!("derived subalgebra through {}: {} generators, relators in weights {}\n", n, w.generator_weights.len(), list(&w.relator_weights));
    let p = raag_presentation(&g, c.field_or_default()).map_err(failed)?;
    let fw = finiteness_witness(&homology_table(&p, c.hom_bound as usize, n), FINITENESS_MARGIN);
    let tops: Vec<String> = fw.top_weights.iter().map(|t| t.map_or_else(|| "none".to_string(), |w| w.to_string())).collect();
    let _ = writeln!(derived, "homology finiteness of the algebra through {n}: {} (top weights {})", fw.label(), tops.join(","));
    let finiteness = json!({
        "status": fw.label(),
        "max_degree": fw.max_degree.to_string(),
        "margin": fw.margin.to_string(),
        "top_weights": tops,
    });
    let (result, table) = match &v {
        CoherenceVerdict::Coherent { elimination_order, tree } => (
            json!({
                "verdict": v.label(),
                "elimination_order": vertex_names(&g, elimination_order),
                "decomposition": tree.describe(&g),
                "decomposition_levels": tree.levels().to_string(),
                "decomposition_valid": tree.validate(&g),
                "derived_subalgebra": witness,
                "homology_finiteness": finiteness,
            }),
            format!(
                "{}\nelimination order {}\ndecomposition {}\n{derived}",
                v.label(),
                vertex_names(&g, elimination_order).join(" "),
                tree.describe(&g)
            ),
        ),
        CoherenceVerdict::NotCoherent { cycle } => (
            json!({"verdict": v.label(), "induced_cycle": vertex_names(&g, cycle), "derived_subalgebra": witness, "homology_finiteness": finiteness}),
            format!("{}\ninduced cycle {}\n{derived}", v.label(), vertex_names(&g, cycle).join(" ")),
        ),
    };
    Ok(Report::new("raag verdict", v.is_coherent(), result, table))
}

pub fn example_subalgebra(c: &Config) -> Result<Report, CliError> {
    let n = c.max_degree_or(8);
    let r = subalgebra_example::run(n, c.field_or_default()).map_err(failed)?;
    let mut table = String::new();
    for cl in &r.claims {
        let _ = writeln!(table, "{} {:<22} expected {:<8} computed {}  ({})", if cl.passed { "ok  " } else { "FAIL" }, cl.id, cl.expected, cl.computed, cl.statement);
    }
    let mut fps = Map::new();
    for (name, f) in &r.fingerprints {
        let _ = writeln!(table, "fingerprint {name}: dim_2 {} zero pairs {:?} ad ranks {:?}", f.degree_two_dim, f.zero_pairs, f.ad_rank_profile);
        fps.insert(
            name.clone(),
            json!({
                "degree_two_dim": f.degree_two_dim.to_string(),
                "zero_pairs": f.zero_pairs.iter().map(|(q, z)| json!({"q": q.to_string(), "count": z.to_string()})).collect::<Vec<_>>(),
                "ad_rank_profile": f.ad_rank_profile.iter().map(|(q, p)| json!({"q": q.to_string(), "counts": strings(p)})).collect::<Vec<_>>(),
            }),
        );
    }
    let claims: Vec<Value> = r
        .claims
        .iter()
        .map(|cl| json!({"id": cl.id, "statement": cl.statement, "expected": cl.expected, "computed": cl.computed, "passed": cl.passed}))
        .collect();
    Ok(Report::new("example subalgebra", r.passed(), json!({"max_degree": n.to_string(), "claims": claims, "fingerprints": fps}), table))
}

pub fn selftest(c: &Config) -> Result<Report, CliError> {
    let criteria = selftest::run_all(c.seed);
    let mut table = String::new();
    for k in &criteria {
        let _ = writeln!(table, "{} {:<20} {}  [{}]", if k.passed() { "PASS" } else { "FAIL" }, k.id, k.description, k.detail);
    }
    let items: Vec<Value> = criteria
        .iter()
        .map(|k| {
            json!({
                "id": k.id,
                "description": k.description,
                "checks_passed": k.checks_passed,
                "within_budget": k.within_budget(),
                "budget_seconds": k.budget.as_secs().to_string(),
                "detail": k.detail,
            })
        })
        .collect();
    Ok(Report::new("selftest", criteria.iter().all(|k| k.passed()), json!({"criteria": items}), table))
}
