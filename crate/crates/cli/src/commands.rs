use std::sync::Arc;

use orbistring_core::bv::{BvData, BvReport, Delta, WindowAlgebra};
use orbistring_core::cactus::{parse_cactus, Cactus};
use orbistring_core::chord::{compose, parse_diagram, ChordDiagram};
use orbistring_core::cocycle::{is_two_cocycle, phase_table_json, restrict_to_centralizer};
use orbistring_core::gchord::{enumerate_gmd, fiber_report, g_compose, parse_gdiagram_with, GChordDiagram};
use orbistring_core::group::{gset_to_json, group_to_json, parse_gset_with};
use orbistring_core::sector::regular_classes;
use orbistring_core::{
    conjugacy_classes, discrete_torsion, dw_frobenius, morita_compare, orbifold_string_ring, twisted_center, FiniteGroup,
    GSet, SectorRing,
};
use serde_json::{json, Value};

use crate::inputs::{element, group_by_name, load_cocycle, load_group, read_input, resolve_group_value, CliError, Result, RingChoice};
use crate::output::{Output, Table};

fn labels(g: &FiniteGroup, xs: &[usize]) -> Vec<String> {
    xs.iter().map(|&x| g.label(x).to_string()).collect()
}

fn ring_output(name: &str, ring: &SectorRing) -> Output {
    let mut json = ring.to_json();
    json["name"] = json!(name);
    json["dim"] = json!(ring.dim());
    let mut headers = vec!["*".to_string()];
    headers.extend(ring.labels().iter().cloned());
    let mut t = Table::new(format!("{name}: structure constants"), headers);
    for i in 0..ring.dim() {
        let mut row = vec![ring.labels()[i].clone()];
        row.extend((0..ring.dim()).map(|j| ring.format_vector(ring.product_basis(i, j))));
        t.rows.push(row);
    }
    Output::json(json).with(t)
}

pub fn group(arg: &str) -> Result<Output> {
    let g = load_group(arg)?;
    let mut json = group_to_json(&g);
    json["abelian"] = json!(g.is_abelian());
    json["exponent"] = json!(g.exponent());
    let mut headers = vec!["*".to_string()];
    headers.extend(g.labels().iter().cloned());
    let mut t = Table::new(format!("{} (order {})", g.name(), g.order()), headers);
    for a in g.elements() {
        let mut row = vec![g.label(a).to_string()];
        row.extend(g.elements().map(|b| g.label(g.mul(a, b)).to_string()));
        t.rows.push(row);
    }
    Ok(Output::json(json).with(t))
}

pub fn classes(arg: &str) -> Result<Output> {
    let g = load_group(arg)?;
    let cd = conjugacy_classes(&g);
    let mut t = Table::new(
        format!("conjugacy classes of {}", g.name()),
        ["rep", "size", "centralizer", "members"].map(String::from).to_vec(),
    );
    let mut list = Vec::new();
    for i in 0..cd.len() {
        let members = labels(&g, &cd.classes[i]);
        t.rows.push(vec![
            g.label(cd.reps[i]).to_string(),
            cd.classes[i].len().to_string(),
            cd.centralizers[i].len().to_string(),
            members.join(" "),
        ]);
        list.push(json!({
            "rep": g.label(cd.reps[i]),
            "size": cd.classes[i].len(),
            "members": members,
            "centralizer": labels(&g, &cd.centralizers[i]),
        }));
    }
    Ok(Output::json(json!({ "group": g.name(), "count": cd.len(), "classes": list })).with(t))
}

pub fn dw(arg: &str) -> Result<Output> {
    let g = load_group(arg)?;
    Ok(ring_output(&format!("Z(Q[{}])", g.name()), &dw_frobenius(&g)))
}

pub fn torsion(group: &str, cocycle: &str) -> Result<Output> {
    let g = load_group(group)?;
    let alpha = load_cocycle(&g, cocycle)?;
    let tau = discrete_torsion(&alpha);
    let table = tau.table();
    let mut headers = vec!["g \\ h".to_string()];
    headers.extend(g.labels().iter().cloned());
    let mut t = Table::new(format!("tau(g,h) on {} as q with tau = exp(2 pi i q)", g.name()), headers);
    for a in g.elements() {
        let mut row = vec![g.label(a).to_string()];
        row.extend(table[a].iter().map(ToString::to_string));
        t.rows.push(row);
    }
    let characters = g.elements().all(|x| restrict_to_centralizer(&tau, x).is_ok());
    let json = json!({
        "group": g.name(),
        "cocycle": cocycle,
        "tau": phase_table_json(&g, &table),
        "groupoid_law": tau.groupoid_law_failure().is_none(),
        "characters": characters,
        "regular_classes": labels(&g, &regular_classes(&alpha)),
    });
    Ok(Output::json(json).with(t))
}

pub fn twisted(group: &str, cocycle: &str) -> Result<Output> {
    let g = load_group(group)?;
    let alpha = load_cocycle(&g, cocycle)?;
    Ok(ring_output(&format!("Z(Q^alpha[{}])", g.name()), &twisted_center(&alpha)))
}

fn subgroup(g: &FiniteGroup, gens: &[String]) -> Result<Vec<usize>> {
    let gens = gens.iter().map(|l| element(g, l)).collect::<Result<Vec<_>>>()?;
    Ok(g.generated_subgroup(&gens))
}

fn load_gset(arg: &str) -> Result<GSet> {
    Ok(parse_gset_with(&read_input(arg)?, &group_by_name)?)
}

pub fn string_ring(gset: Option<&str>, group: Option<&str>, cosets: &[String]) -> Result<Output> {
    let x = match (gset, group) {
        (Some(path), _) => load_gset(path)?,
        (None, Some(name)) => {
            let g = load_group(name)?;
            if cosets.is_empty() {
                GSet::point(g)
            } else {
                let h = subgroup(&g, cosets)?;
                GSet::cosets(g, &h)?
            }
        }
        (None, None) => return Err(CliError::new("usage", "string-ring needs --gset or --group")),
    };
    let mut out = ring_output(&format!("string ring of a {}-set of size {}", x.group().name(), x.size()), &orbifold_string_ring(&x));
    out.json["gset"] = gset_to_json(&x);
    Ok(out)
}

pub fn morita(group: Option<&str>, gens: &[String], left: Option<&str>, right: Option<&str>) -> Result<Output> {
    let (x, y) = match (left, right, group) {
        (Some(l), Some(r), _) => (load_gset(l)?, load_gset(r)?),
        (None, None, Some(name)) => {
            let g = load_group(name)?;
            let h = subgroup(&g, gens)?;
            let (hg, _) = g.subgroup(format!("H<{}>", g.name()), &h)?;
            (GSet::cosets(g, &h)?, GSet::point(Arc::new(hg)))
        }
        _ => return Err(CliError::new("usage", "morita needs --left and --right, or --group with --gens")),
    };
    let report = morita_compare(&x, &y);
    let mut json = serde_json::to_value(&report)?;
    json["isomorphic"] = json!(report.is_isomorphic());
    json["left"] = gset_to_json(&x);
    json["right"] = gset_to_json(&y);
    Ok(Output::json(json))
}

pub fn validate(kind: &str, input: &str) -> Result<Output> {
    let text = read_input(input)?;
    let summary = match kind {
        "group" => {
            let v: Value = serde_json::from_str(&text)?;
            let g = resolve_group_value(&v)?;
            json!({ "order": g.order(), "abelian": g.is_abelian() })
        }
        "gset" => {
            let x = parse_gset_with(&text, &group_by_name)?;
            json!({ "group": x.group().name(), "size": x.size() })
        }
        "cocycle" => {
            let alpha = orbistring_core::cocycle::parse_cocycle(&text, &group_by_name)?;
            let report = is_two_cocycle(alpha.group(), &alpha.table())?;
            let tau = discrete_torsion(&alpha);
            json!({
                "group": alpha.group().name(),
                "cocycle": report.valid,
                "groupoid_law": tau.groupoid_law_failure().is_none(),
                "characters": alpha.group().elements().all(|g| restrict_to_centralizer(&tau, g).is_ok()),
            })
        }
        "diagram" => {
            let d = parse_diagram(&text)?;
            json!({ "n": d.n(), "chords": d.chords().len(), "canonical": d.canonical().to_json() })
        }
        "cactus" => {
            let c = parse_cactus(&text)?;
            json!({ "n": c.n(), "base_on_point": c.base_on_point(), "base_on_mark": c.base_on_mark() })
        }
        "gdiagram" => {
            let w = parse_gdiagram_with(&text, &resolve_group_value)?;
            let g = w.group();
            json!({ "n": w.n(), "ih": labels(g, &w.incoming_holonomy()), "oh": g.label(w.outgoing_holonomy()) })
        }
        other => {
            return Err(CliError::new(
                "usage",
                format!("unknown kind {other:?}; expected group, gset, cocycle, diagram, cactus or gdiagram"),
            ))
        }
    };
    Ok(Output::json(json!({ "kind": kind, "valid": true, "summary": summary })))
}

fn diagram(arg: &str) -> Result<ChordDiagram> {
    Ok(parse_diagram(&read_input(arg)?)?)
}

fn gdiagram(arg: &str) -> Result<GChordDiagram> {
    Ok(parse_gdiagram_with(&read_input(arg)?, &resolve_group_value)?)
}

pub fn compose_cmd(outer: &str, parts: &[String]) -> Result<Output> {
    let c = diagram(outer)?;
    let parts = parts.iter().map(|p| diagram(p)).collect::<Result<Vec<_>>>()?;
    let r = compose(&c, &parts)?;
    Ok(Output::json(json!({ "result": r.to_json(), "canonical": r.canonical().to_json() })))
}

pub fn cactus(input: &str) -> Result<Output> {
    Ok(Output::json(Cactus::from_diagram(&diagram(input)?).to_json()))
}

pub fn uncactus(input: &str) -> Result<Output> {
    let c = parse_cactus(&read_input(input)?)?;
    let class = c.to_class();
    Ok(Output::json(json!({ "diagram": class.representative().to_json(), "canonical": class.to_json() })))
}

pub fn ih(input: &str) -> Result<Output> {
    let w = gdiagram(input)?;
    let g = w.group();
    let words: Vec<String> = (0..w.n()).map(|i| g.label(w.region_word(i)).to_string()).collect();
    Ok(Output::json(json!({ "group": g.name(), "ih": labels(g, &w.incoming_holonomy()), "region_words": words })))
}

pub fn oh(input: &str) -> Result<Output> {
    let w = gdiagram(input)?;
    Ok(Output::json(json!({ "group": w.group().name(), "oh": w.group().label(w.outgoing_holonomy()) })))
}

pub fn gcompose(base: &str, parts: &[String]) -> Result<Output> {
    let w = gdiagram(base)?;
    let parts = parts.iter().map(|p| gdiagram(p)).collect::<Result<Vec<_>>>()?;
    let r = g_compose(&w, &parts)?;
    let g = r.group();
    Ok(Output::json(json!({
        "result": r.to_json(),
        "ih": labels(g, &r.incoming_holonomy()),
        "oh": g.label(r.outgoing_holonomy()),
    })))
}

pub struct EnumerateArgs<'a> {
    pub diagram: &'a str,
    pub group: &'a str,
    pub outer: &'a str,
    pub inner: &'a [String],
    pub cap: u128,
    pub fiber: bool,
}

pub fn enumerate(a: &EnumerateArgs<'_>) -> Result<Output> {
    let base = diagram(a.diagram)?;
    let g = load_group(a.group)?;
    let outer = element(&g, a.outer)?;
    if a.fiber {
        let r = fiber_report(&base, &g, outer, a.cap)?;
        let by_inner: Vec<Value> =
            r.by_inner.iter().map(|(h, c)| json!({ "ih": labels(&g, h), "classes": c })).collect();
        let json = json!({
            "group": g.name(),
            "outer": a.outer,
            "classes": r.classes,
            "expected": r.expected.to_string(),
            "orbits": r.orbits,
            "expected_orbits": r.expected_orbits.to_string(),
            "free": r.free,
            "over_base": r.over_base,
            "by_inner": by_inner,
        });
        let mut t = Table::new("fiber over the base diagram", vec!["quantity".into(), "value".into(), "expected".into()]);
        t.rows.push(vec!["classes".into(), r.classes.to_string(), r.expected.to_string()]);
        t.rows.push(vec!["lift orbits".into(), r.orbits.to_string(), r.expected_orbits.to_string()]);
        t.rows.push(vec!["free action".into(), r.free.to_string(), "true".into()]);
        return Ok(Output::json(json).with(t));
    }
    let inner = if a.inner.is_empty() {
        None
    } else {
        Some(a.inner.iter().map(|l| element(&g, l)).collect::<Result<Vec<_>>>()?)
    };
    let classes = enumerate_gmd(&base, &g, outer, inner.as_deref(), a.cap)?;
    let list: Vec<Value> = classes
        .iter()
        .map(|c| {
            let w = c.representative(g.clone());
            let mut v = w.to_json();
            v["ih"] = json!(labels(&g, &w.incoming_holonomy()));
            v
        })
        .collect();
    Ok(Output::json(json!({ "group": g.name(), "outer": a.outer, "count": classes.len(), "classes": list })))
}

fn algebra_table(alg: &WindowAlgebra) -> Table {
    let mut headers = vec!["*".to_string()];
    headers.extend(alg.labels().iter().cloned());
    let (lo, hi) = alg.window();
    let mut t = Table::new(format!("{} in degrees [{lo}, {hi}]", alg.name()), headers);
    for i in 0..alg.dim() {
        let mut row = vec![alg.labels()[i].clone()];
        row.extend((0..alg.dim()).map(|j| match alg.product_basis(i, j) {
            Ok(v) => alg.format(v),
            Err(_) => "(outside)".into(),
        }));
        t.rows.push(row);
    }
    t
}

pub fn ring(choice: &RingChoice, window: Option<(i64, i64)>) -> Result<Output> {
    let (p, alg) = choice.algebra(window)?;
    let mut json = alg.to_json();
    if let Some(p) = p {
        json["presentation"] = p.to_json();
    }
    Ok(Output::json(json).with(algebra_table(&alg)))
}

fn bv_table(report: &BvReport) -> Table {
    let mut t = Table::new(
        format!("BV axioms on {} ({} basis elements)", report.algebra, report.dim),
        ["axiom", "checked", "skipped", "result", "witness"].map(String::from).to_vec(),
    );
    for a in &report.axioms {
        t.rows.push(vec![
            a.name.to_string(),
            a.checked.to_string(),
            a.skipped.to_string(),
            if a.passed() { "pass" } else { "FAIL" }.to_string(),
            a.witness.clone().unwrap_or_default(),
        ]);
    }
    t
}

pub fn bvcheck(choice: &RingChoice, window: Option<(i64, i64)>, delta: Option<&str>) -> Result<Output> {
    let (_, alg) = choice.algebra(window)?;
    let delta = match delta {
        None => Delta::zero(alg.dim()),
        Some(arg) => {
            let v: Value = serde_json::from_str(&read_input(arg)?).map_err(|e| CliError::new("bv", format!("invalid JSON: {e}")))?;
            Delta::from_json(&alg, &v)?
        }
    };
    let data = BvData::new(alg, delta)?;
    let report = data.check();
    let mut json = report.to_json();
    json["window"] = json!(data.algebra.window());
    Ok(Output::json(json).with(bv_table(&report)))
}
