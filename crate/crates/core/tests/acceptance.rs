//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the lines always reach stdout; exits non-zero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use alg2d::automorphisms::{automorphisms_bruteforce, enumeration_key};
use alg2d::catalog::{build, param_sampler, CharClass, FamilyId, ParamVector, Sampling};
use alg2d::derivations::derivations;
use alg2d::linalg::gl2_order;
use alg2d::verify::{
    default_fields, verify_aut_tables, verify_der_tables, verify_distinct, verify_genericity, verify_inclusion,
    verify_orbits, verify_twins, Report, Status,
};
use alg2d::{FieldSpec, GL2Element};
use common::*;

const SEED: u64 = 1;
const SAMPLES: usize = 200;
const CAP: u64 = 49;
const PROPERTY_INSTANCES: usize = 100;

const BUDGET_C1: Duration = Duration::from_secs(60);
const BUDGET_C2: Duration = Duration::from_secs(30);
const BUDGET_C3: Duration = Duration::from_secs(30);
const BUDGET_C4: Duration = Duration::from_secs(30);

type Outcome = Result<String, String>;

fn gf(q: u64) -> FieldSpec {
    FieldSpec::gf(q).unwrap()
}

fn auto() -> Sampling {
    Sampling::Auto { n: SAMPLES, seed: SEED }
}

fn fail_lines(r: &Report) -> String {
    let lines: Vec<&str> = r.with_status(Status::Fail).map(|e| e.line.as_str()).take(4).collect();
    let more = r.count(Status::Fail).saturating_sub(lines.len());
    let mut s = lines.join(" | ");
    if more > 0 {
        s += &format!(" | (+{more} more)");
    }
    s
}

fn clean(r: &Report, what: &str) -> Outcome {
    let (pass, fail) = (r.count(Status::Pass), r.count(Status::Fail));
    if fail == 0 && pass > 0 {
        Ok(format!("{what}: {pass} cells pass"))
    } else {
        Err(format!("{what}: {pass} pass, {fail} fail: {}", fail_lines(r)))
    }
}

fn run(n: u32, name: &str, budget: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let mut out = f();
    let took = t.elapsed();
    if let (Some(b), Ok(detail)) = (budget, &out) {
        if took > b {
            out = Err(format!("{detail}; over runtime budget {}s", b.as_secs()));
        }
    }
    let timing = match budget {
        Some(b) => format!("{:.1}s/{}s", took.as_secs_f64(), b.as_secs()),
        None => format!("{:.1}s", took.as_secs_f64()),
    };
    let (tag, detail) = match &out {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    println!("CRITERION {n} {tag} {name} [{timing}] {detail}");
    out.is_ok()
}

fn a11_order(spec: FieldSpec) -> usize {
    let fam = FamilyId::new(11, CharClass::NotTwoThree).unwrap();
    let a = build(fam, &ParamVector::empty(), spec).unwrap();
    automorphisms_bruteforce(&a, CAP).unwrap().len()
}

fn c1() -> Outcome {
    let r = verify_aut_tables(CharClass::NotTwoThree, &[gf(5), gf(7)], auto(), CAP).map_err(|e| e.to_string())?;
    let mut detail = clean(&r, "aut GF(5),GF(7)")?;
    for (q, want) in [(5, 2), (7, 2), (11, 6), (13, 6), (25, 6), (49, 6)] {
        let got = a11_order(gf(q));
        if got != want {
            return Err(format!("|Aut(A11)| over GF({q}) = {got}, want {want}"));
        }
    }
    detail += "; |Aut(A11)| = 2,2,6,6,6,6 over GF(5),GF(7),GF(11),GF(13),GF(25),GF(49)";
    detail += " (note: 3 is a non-square mod 7, so GF(7) gives 2)";
    Ok(detail)
}

fn c2() -> Outcome {
    let r = verify_aut_tables(CharClass::Two, &[gf(2), gf(4)], Sampling::Exhaustive, CAP).map_err(|e| e.to_string())?;
    let detail = clean(&r, "aut GF(2),GF(4)")?;
    let quarantined: Vec<&str> = r.with_status(Status::Quarantined).map(|e| e.line.as_str()).collect();
    for (fam, param) in [("A3@char2", "b2=1"), ("A7@char2", "a1=1")] {
        for field in [gf(2), gf(4)] {
            let field = format!(" {field} ");
            let hit = quarantined
                .iter()
                .any(|l| l.starts_with(&format!("AUT {fam} ")) && l.contains(param) && l.contains(&field));
            if !hit {
                return Err(format!("no quarantine report for {fam} {param} over {field}"));
            }
        }
    }
    if r.notes.iter().filter(|n| n.starts_with("quarantine")).count() == 0 {
        return Err("quarantine notes missing".into());
    }
    let spec = gf(2);
    let fam = FamilyId::new(11, CharClass::Two).unwrap();
    let a = build(fam, &ParamVector::empty(), spec).unwrap();
    let found = automorphisms_bruteforce(&a, CAP).unwrap();
    let m = |a, b, c, d| GL2Element::from_i64(spec, a, b, c, d).unwrap();
    let mut listed = vec![
        GL2Element::identity(spec),
        m(0, 1, 1, 0),
        m(0, 1, 1, 1),
        m(1, 0, 1, 1),
        m(1, 1, 1, 0),
        m(1, 1, 0, 1),
    ];
    listed.sort_by_key(enumeration_key);
    if found != listed {
        return Err(format!("Aut(A11@char2) over GF(2) has {} elements, not the listed six", found.len()));
    }
    Ok(format!("{detail}; {} quarantined cells reported; Aut(A11@char2) = the six listed", quarantined.len()))
}

fn c3() -> Outcome {
    let mut r = verify_aut_tables(CharClass::Three, &[gf(3)], Sampling::Exhaustive, CAP).map_err(|e| e.to_string())?;
    r.merge(
        verify_aut_tables(CharClass::Three, &[gf(9)], Sampling::Random { n: SAMPLES, seed: SEED }, CAP)
            .map_err(|e| e.to_string())?,
    );
    let spec = gf(3);
    let fam = FamilyId::new(11, CharClass::Three).unwrap();
    let a = build(fam, &ParamVector::empty(), spec).unwrap();
    let found = automorphisms_bruteforce(&a, CAP).unwrap();
    let unipotent = found.len() == 3 && found.iter().all(|g| g.a().is_one() && g.b().is_zero() && g.d().is_one());
    let tail = format!("Aut(A11@char3) over GF(3): {} elements, unipotent lower: {unipotent}", found.len());
    match clean(&r, "aut GF(3),GF(9)") {
        Ok(d) if unipotent => Ok(format!("{d}; {tail}")),
        Ok(d) => Err(format!("{d}; {tail}")),
        Err(d) => Err(format!("{d}; {tail}")),
    }
}

fn der_dim(fam: FamilyId, spec: FieldSpec, vals: &[i64]) -> usize {
    let p = ParamVector::from_i64(fam, spec, vals).unwrap();
    derivations(&build(fam, &p, spec).unwrap()).dim()
}

fn c4() -> Outcome {
    let mut r = Report::default();
    for class in CharClass::ALL {
        r.merge(verify_der_tables(class, &default_fields(class), auto()).map_err(|e| e.to_string())?);
    }
    let detail = clean(&r, "der all classes")?;
    let a4 = FamilyId::new(4, CharClass::NotTwoThree).unwrap();
    let a8 = FamilyId::new(8, CharClass::NotTwoThree).unwrap();
    for q in [5i64, 7] {
        let spec = gf(q as u64);
        for a1 in 0..q {
            for b2 in 0..q {
                let on_line = (b2 - (2 * a1 - 1)).rem_euclid(q) == 0;
                let dim = der_dim(a4, spec, &[a1, b2]);
                if dim != if on_line { 2 } else { 1 } {
                    return Err(format!("A4({a1},{b2}) over GF({q}): dim Der = {dim}"));
                }
            }
        }
        let third = spec.ratio(1, 3).unwrap();
        for x in spec.enumerate().unwrap() {
            let p = ParamVector::for_family(a8, vec![x.clone()]).unwrap();
            let dim = derivations(&build(a8, &p, spec).unwrap()).dim();
            if dim != if x == third { 2 } else { 1 } {
                return Err(format!("A8({x}) over GF({q}): dim Der = {dim}"));
            }
        }
    }
    let a8c3 = FamilyId::new(8, CharClass::Three).unwrap();
    for spec in [gf(3), gf(9)] {
        for p in param_sampler(a8c3, spec, Sampling::Exhaustive).unwrap() {
            let dim = derivations(&build(a8c3, &p, spec).unwrap()).dim();
            if dim != 1 {
                return Err(format!("A8@char3{p} over {spec}: dim Der = {dim}"));
            }
        }
    }
    Ok(format!("{detail}; A4 jumps exactly on b2=2a1-1, A8 exactly at a1=1/3, never in char 3"))
}

fn c5() -> Outcome {
    let mut r = Report::default();
    for spec in [FieldSpec::rationals(), FieldSpec::quad_rationals(3).unwrap()] {
        r.merge(verify_inclusion(spec, 20, 20, SEED).map_err(|e| e.to_string())?);
    }
    let detail = clean(&r, "inclusion Q, Q(sqrt 3)")?;
    let prefix = format!("INCL {} ", FamilyId::new(11, CharClass::NotTwoThree).unwrap());
    let a11 = r
        .entries
        .iter()
        .find(|e| e.line.starts_with(&prefix) && e.line.contains("Q(sqrt 3)"))
        .ok_or("no A11 line over Q(sqrt 3)")?;
    if !a11.line.contains("aut_checked=6") {
        return Err(format!("sqrt(3) elements not all checked: {}", a11.line));
    }
    Ok(format!("{detail}; all six A11 elements verified over Q(sqrt 3)"))
}

fn c6() -> Outcome {
    let mut details = Vec::new();
    for (q, gl) in [(2u64, 6u64), (3, 48)] {
        if gl2_order(q) != gl {
            return Err(format!("|GL(2,{q})| = {}", gl2_order(q)));
        }
        let r = verify_orbits(gf(q), Sampling::Exhaustive, CAP).map_err(|e| e.to_string())?;
        details.push(clean(&r, &format!("orbits GF({q}) gl={gl}"))?);
    }
    Ok(details.join("; "))
}

fn c7() -> Outcome {
    let twins = verify_twins(&[gf(5), gf(7), gf(3)], 20, SEED, CAP).map_err(|e| e.to_string())?;
    let mut detail = clean(&twins, "twins GF(5),GF(7),GF(3)")?;
    if twins.count(Status::Pass) != 3 * 2 * 20 {
        return Err(format!("expected 120 twin witnesses, got {}", twins.count(Status::Pass)));
    }
    for spec in [gf(5), gf(2), gf(3)] {
        let r = verify_distinct(spec, 30, SEED, CAP).map_err(|e| e.to_string())?;
        detail += "; ";
        detail += &clean(&r, &format!("distinct {spec}"))?;
    }
    Ok(detail)
}

fn c8() -> Outcome {
    let r7 = verify_genericity(gf(7), Sampling::Random { n: 100, seed: SEED }, 0, SEED, CAP).map_err(|e| e.to_string())?;
    let r2 = verify_genericity(gf(2), Sampling::Exhaustive, 0, SEED, CAP).map_err(|e| e.to_string())?;
    for (r, want, q) in [(&r7, 100, 7), (&r2, 16, 2)] {
        if r.count(Status::Pass) != want || r.count(Status::Fail) != 0 {
            return Err(format!("GF({q}): {} trivial of {want}: {}", r.count(Status::Pass), fail_lines(r)));
        }
    }
    Ok("A1 cells trivial: 100/100 over GF(7), 16/16 over GF(2)".into())
}

fn c9() -> Outcome {
    let mut r = rng(SEED);
    let all = fields();
    let small = small_finite_fields();
    let mut checks = 0usize;
    for i in 0..PROPERTY_INSTANCES {
        let spec = all[i % all.len()];
        let (x, y, z) = (elem(spec, &mut r), elem(spec, &mut r), elem(spec, &mut r));
        field_axioms(&x, &y, &z)?;
        let (a, c) = (mat(spec, 2, 3, &mut r), mat(spec, 3, 2, &mut r));
        let (b, d) = (mat(spec, 2, 2, &mut r), mat(spec, 2, 1, &mut r));
        kron_mixed_product(&a, &b, &c, &d)?;
        kron_index_formula(&a, &b)?;
        let m = degenerate_mat(spec, 1 + i % 6, 1 + (i / 6) % 5, &mut r);
        rref_idempotent(&m)?;
        kernel_correct(&m)?;
        let s = sparse_msc(spec, &mut r);
        der_space_sound(&s)?;
        der_conjugation(&s, &gl2(spec, &mut r))?;

        let fs = small[i % small.len()];
        let t = sparse_msc(fs, &mut r);
        aut_is_group(&t)?;
        aut_conjugation(&t, &gl2(fs, &mut r))?;
        checks += 9;
    }
    Ok(format!("{PROPERTY_INSTANCES} instances per property, {checks} checks exact"))
}

fn main() -> ExitCode {
    let results = [
        run(1, "aut tables char!=2,3 over GF(5),GF(7)", Some(BUDGET_C1), c1),
        run(2, "aut tables char 2 over GF(2),GF(4)", Some(BUDGET_C2), c2),
        run(3, "aut tables char 3 over GF(3),GF(9)", Some(BUDGET_C3), c3),
        run(4, "der tables all classes", Some(BUDGET_C4), c4),
        run(5, "inclusion over Q and Q(sqrt 3)", None, c5),
        run(6, "orbit-stabilizer over GF(2),GF(3)", None, c6),
        run(7, "twin isomorphisms and distinct cells", None, c7),
        run(8, "genericity of A1", None, c8),
        run(9, "property suites", None, c9),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("ACCEPTANCE {passed}/{} criteria pass", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
