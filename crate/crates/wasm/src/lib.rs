//! Browser bindings: analyze an MSC literal, explore one catalog cell, and
//! sweep a two-parameter family over a small field.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use alg2d::automorphisms::{automorphisms_bruteforce, match_description};
use alg2d::catalog::{build, expected_aut, expected_der, FamilyId, ParamVector};
use alg2d::derivations::{derivations, lie_closed, subspace_equal};
use alg2d::{Error, FieldSpec, GL2Element, Msc};

/// Largest field order the page enumerates.
pub const PAGE_CAP: u64 = 13;

fn text(e: Error) -> String {
    e.to_string()
}

fn elements(list: &[GL2Element]) -> Vec<String> {
    list.iter().map(GL2Element::canonical).collect()
}

/// Der and, over a small finite field, Aut of an MSC literal.
pub fn analyze_json(literal: &str) -> Result<Value, Error> {
    let a: Msc = literal.parse()?;
    let der = derivations(&a);
    let aut = if a.spec().is_finite() {
        let elems = automorphisms_bruteforce(&a, PAGE_CAP)?;
        json!({ "order": elems.len(), "elements": elements(&elems) })
    } else {
        Value::Null
    };
    Ok(json!({
        "msc": a.canonical(),
        "der": der.canonical(),
        "der_dim": der.dim(),
        "lie_closed": lie_closed(&der).is_closed(),
        "aut": aut,
    }))
}

/// A catalog cell: its matrix, the stated Aut and Der, and the brute-force
/// comparison when the field is finite.
pub fn explore_json(family: &str, params: &str, field: &str) -> Result<Value, Error> {
    let spec: FieldSpec = field.parse()?;
    let fam = FamilyId::parse(family)?;
    let params = ParamVector::parse(fam, spec, params)?;
    let a = build(fam, &params, spec)?;
    let desc = expected_aut(fam, &params, spec)?;
    let stated_der = expected_der(fam, &params, spec)?;
    let der = derivations(&a);
    let mut out = json!({
        "family": fam.to_string(),
        "params": params.to_string(),
        "msc": a.canonical(),
        "expected_aut": desc.to_string(),
        "expected_der": stated_der.canonical(),
        "der": der.canonical(),
        "der_equal": subspace_equal(&der, &stated_der)?,
    });
    if spec.is_finite() {
        let oracle = automorphisms_bruteforce(&a, PAGE_CAP)?;
        let verdict = match_description(&oracle, &desc)?;
        out["oracle"] = json!({
            "order": oracle.len(),
            "elements": elements(&oracle),
            "expected_points": desc.rational_points()?.len(),
            "verdict": verdict.label(),
        });
    }
    Ok(out)
}

/// `|Aut|` and `dim Der` at every parameter pair of a two-parameter family;
/// the remaining parameters (if any) are fixed to `rest`.
pub fn grid_json(family: &str, field: &str, rest: &str) -> Result<Value, Error> {
    let spec: FieldSpec = field.parse()?;
    let fam = FamilyId::parse(family)?;
    if fam.arity() < 2 {
        return Err(Error::Arity { family: fam.to_string(), expected: 2, got: fam.arity() });
    }
    let fixed: Vec<_> = rest
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| spec.parse_element(t))
        .collect::<Result<_, _>>()?;
    if fixed.len() != fam.arity() - 2 {
        return Err(Error::Arity { family: fam.to_string(), expected: fam.arity() - 2, got: fixed.len() });
    }
    let elems = spec.enumerate()?;
    let names: Vec<&str> = fam.params().iter().map(|p| p.ascii()).collect();
    let mut rows = Vec::new();
    for x in &elems {
        let mut row = Vec::new();
        for y in &elems {
            let mut vals = vec![x.clone(), y.clone()];
            vals.extend(fixed.iter().cloned());
            let params = ParamVector::for_family(fam, vals)?;
            let a = build(fam, &params, spec)?;
            let aut = automorphisms_bruteforce(&a, PAGE_CAP)?.len();
            let der = derivations(&a).dim();
            let stated = expected_der(fam, &params, spec)?.dim();
            row.push(json!({ "aut": aut, "der": der, "stated_der": stated }));
        }
        rows.push(row);
    }
    Ok(json!({
        "family": fam.to_string(),
        "field": spec.to_string(),
        "row_param": names[0],
        "col_param": names[1],
        "labels": elems.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        "rows": rows,
    }))
}

#[wasm_bindgen]
pub fn analyze(literal: &str) -> Result<String, String> {
    analyze_json(literal).map(|v| v.to_string()).map_err(text)
}

#[wasm_bindgen]
pub fn explore(family: &str, params: &str, field: &str) -> Result<String, String> {
    explore_json(family, params, field).map(|v| v.to_string()).map_err(text)
}

#[wasm_bindgen]
pub fn grid(family: &str, field: &str, rest: &str) -> Result<String, String> {
    grid_json(family, field, rest).map(|v| v.to_string()).map_err(text)
}
