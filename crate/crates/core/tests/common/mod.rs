//! Property predicates shared by the proptest suite and the acceptance run.
//! Each returns `Err(description)` on the first violated identity.

#![allow(dead_code)]

use std::collections::HashSet;

use alg2d::automorphisms::{automorphisms_bruteforce, group_sanity};
use alg2d::derivations::{derivations, lie_closed, mat_to_vec4, Subspace};
use alg2d::linalg::{kernel_basis, kron, rref, DEFAULT_ENUM_CAP};
use alg2d::{FieldElement, FieldSpec, GL2Element, Mat, Msc};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = Result<(), String>;

pub fn fields() -> Vec<FieldSpec> {
    let mut out = vec![
        FieldSpec::rationals(),
        FieldSpec::quad_rationals(3).unwrap(),
        FieldSpec::quad_rationals(-1).unwrap(),
    ];
    for q in [2, 3, 4, 5, 7, 9, 11, 13, 25, 49, 101] {
        out.push(FieldSpec::gf(q).unwrap());
    }
    out
}

pub fn small_finite_fields() -> Vec<FieldSpec> {
    [2, 3, 4, 5].map(|q| FieldSpec::gf(q).unwrap()).to_vec()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn elem(spec: FieldSpec, r: &mut ChaCha8Rng) -> FieldElement {
    spec.random_element(r)
}

pub fn mat(spec: FieldSpec, rows: usize, cols: usize, r: &mut ChaCha8Rng) -> Mat {
    let data = (0..rows)
        .map(|_| (0..cols).map(|_| elem(spec, r)).collect())
        .collect();
    Mat::from_rows(spec, data).unwrap()
}

/// Random matrix with rank deficiency more likely than uniform sampling
/// gives, by repeating rows.
pub fn degenerate_mat(spec: FieldSpec, rows: usize, cols: usize, r: &mut ChaCha8Rng) -> Mat {
    let mut data: Vec<Vec<FieldElement>> = Vec::new();
    for i in 0..rows {
        if i > 0 && r.gen_bool(0.4) {
            let src = data[r.gen_range(0..i)].clone();
            let k = elem(spec, r);
            data.push(src.iter().map(|x| x * &k).collect());
        } else {
            data.push((0..cols).map(|_| elem(spec, r)).collect());
        }
    }
    Mat::from_rows(spec, data).unwrap()
}

pub fn msc(spec: FieldSpec, r: &mut ChaCha8Rng) -> Msc {
    Msc::new(mat(spec, 2, 4, r)).unwrap()
}

/// Random MSC with many zero entries, so non-trivial symmetry shows up.
pub fn sparse_msc(spec: FieldSpec, r: &mut ChaCha8Rng) -> Msc {
    let row = |r: &mut ChaCha8Rng| -> Vec<FieldElement> {
        (0..4)
            .map(|_| if r.gen_bool(0.6) { spec.zero() } else { elem(spec, r) })
            .collect()
    };
    let (a, b) = (row(r), row(r));
    Msc::new(Mat::from_rows(spec, vec![a, b]).unwrap()).unwrap()
}

pub fn gl2(spec: FieldSpec, r: &mut ChaCha8Rng) -> GL2Element {
    loop {
        let [a, b, c, d] = [0; 4].map(|_| elem(spec, r));
        if let Ok(g) = GL2Element::new(a, b, c, d) {
            return g;
        }
    }
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

pub fn field_axioms(x: &FieldElement, y: &FieldElement, z: &FieldElement) -> Check {
    let spec = x.spec();
    let (zero, one) = (spec.zero(), spec.one());
    let ctx = || format!("x={x} y={y} z={z} over {spec}");
    ensure(&(x + y) + z == x + &(y + z), || format!("add assoc: {}", ctx()))?;
    ensure(&(x * y) * z == x * &(y * z), || format!("mul assoc: {}", ctx()))?;
    ensure(x + y == y + x, || format!("add comm: {}", ctx()))?;
    ensure(x * y == y * x, || format!("mul comm: {}", ctx()))?;
    ensure(x * &(y + z) == &(x * y) + &(x * z), || format!("distributivity: {}", ctx()))?;
    ensure(x + &zero == *x && x * &one == *x, || format!("identities: {}", ctx()))?;
    ensure((x + &(-x)).is_zero(), || format!("additive inverse: {}", ctx()))?;
    ensure(x - y == x + &(-y), || format!("subtraction: {}", ctx()))?;
    if !x.is_zero() {
        let inv = x.inv().map_err(|e| format!("inverse failed: {e}: {}", ctx()))?;
        ensure((x * &inv).is_one(), || format!("multiplicative inverse: {}", ctx()))?;
        let q = y.checked_div(x).map_err(|e| e.to_string())?;
        ensure(&q * x == *y, || format!("division: {}", ctx()))?;
    } else {
        ensure(x.inv().is_err(), || format!("zero inverted: {}", ctx()))?;
    }
    if let Some(r) = x.sqrt() {
        ensure(&r * &r == *x, || format!("sqrt: {}", ctx()))?;
    }
    let sq = x * x;
    ensure(sq.is_square(), || format!("square not detected: {}", ctx()))?;
    if let Some(q) = spec.order() {
        ensure(x.pow(q) == *x, || format!("frobenius x^q = x: {}", ctx()))?;
    }
    Ok(())
}

/// `(A⊗B)[i·p + k][j·q + l] = A[i][j]·B[k][l]` for `B` of shape `p×q`.
pub fn kron_index_formula(a: &Mat, b: &Mat) -> Check {
    let k = kron(a, b).map_err(|e| e.to_string())?;
    let (p, q) = (b.rows(), b.cols());
    ensure(k.rows() == a.rows() * p && k.cols() == a.cols() * q, || "kron shape".into())?;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            for r in 0..p {
                for c in 0..q {
                    let want = a.get(i, j) * b.get(r, c);
                    if *k.get(i * p + r, j * q + c) != want {
                        return Err(format!("kron entry ({},{}) of {a} ⊗ {b}", i * p + r, j * q + c));
                    }
                }
            }
        }
    }
    Ok(())
}

/// `(A⊗B)(C⊗D) = (AC)⊗(BD)`.
pub fn kron_mixed_product(a: &Mat, b: &Mat, c: &Mat, d: &Mat) -> Check {
    let lhs = kron(a, b).unwrap().mul(&kron(c, d).unwrap()).unwrap();
    let rhs = kron(&a.mul(c).unwrap(), &b.mul(d).unwrap()).unwrap();
    ensure(lhs == rhs, || format!("mixed product fails for A={a} B={b} C={c} D={d}"))
}

pub fn rref_idempotent(m: &Mat) -> Check {
    let once = rref(m);
    let twice = rref(&once.reduced);
    ensure(once.reduced == twice.reduced, || format!("rref not idempotent on {m}"))?;
    ensure(once.rank == twice.rank, || format!("rank changed on {m}"))?;
    ensure(once.rank <= m.rows().min(m.cols()), || format!("rank too large on {m}"))?;
    ensure(once.pivot_cols.len() == once.rank, || format!("pivot count on {m}"))
}

pub fn kernel_correct(m: &Mat) -> Check {
    let spec = m.spec();
    let basis = kernel_basis(m);
    let rank = rref(m).rank;
    ensure(basis.len() + rank == m.cols(), || format!("rank-nullity on {m}"))?;
    for v in &basis {
        let col = Mat::column(spec, v.clone()).unwrap();
        ensure(m.mul(&col).unwrap().is_zero(), || format!("kernel vector not annihilated by {m}"))?;
    }
    if !basis.is_empty() {
        let k = Mat::from_rows(spec, basis.clone()).unwrap();
        ensure(rref(&k).rank == basis.len(), || format!("dependent kernel basis for {m}"))?;
    }
    Ok(())
}

pub fn inverse_roundtrip(g: &GL2Element) -> Check {
    let inv = g.inverse();
    ensure(g.mul(&inv).unwrap().is_identity(), || format!("g·g⁻¹ ≠ I for {g}"))?;
    ensure(inv.mul(g).unwrap().is_identity(), || format!("g⁻¹·g ≠ I for {g}"))?;
    let via_mat = alg2d::linalg::inv2(&g.to_mat()).unwrap();
    ensure(via_mat == inv, || format!("inv2 disagrees for {g}"))
}

/// Basis change is a homomorphism onto the transformed product:
/// `g(u·v) = (gu) ·' (gv)` and `(A^g)^h = A^{hg}`.
pub fn msc_covariance(a: &Msc, g: &GL2Element, h: &GL2Element, u: &[FieldElement; 2], v: &[FieldElement; 2]) -> Check {
    let apply = |g: &GL2Element, w: &[FieldElement; 2]| {
        [&(g.a() * &w[0]) + &(g.b() * &w[1]), &(g.c() * &w[0]) + &(g.d() * &w[1])]
    };
    let b = a.transform(g).unwrap();
    let lhs = apply(g, &a.product(u, v).unwrap());
    let rhs = b.product(&apply(g, u), &apply(g, v)).unwrap();
    ensure(lhs == rhs, || format!("product covariance fails for {a} g={g}"))?;
    let twice = b.transform(h).unwrap();
    let once = a.transform(&h.mul(g).unwrap()).unwrap();
    ensure(twice == once, || format!("action composition fails for {a} g={g} h={h}"))
}

pub fn der_linearity(a: &Msc, d1: &Mat, d2: &Mat, c: &FieldElement) -> Check {
    let r1 = a.der_residual(d1).unwrap();
    let r2 = a.der_residual(d2).unwrap();
    let sum = a.der_residual(&d1.add(d2).unwrap()).unwrap();
    ensure(sum == r1.add(&r2).unwrap(), || format!("der residual not additive for {a}"))?;
    let scaled = a.der_residual(&d1.scale(c)).unwrap();
    ensure(scaled == r1.scale(c), || format!("der residual not homogeneous for {a}"))
}

/// Every computed derivation space is a Lie subalgebra and consists of
/// derivations.
pub fn der_space_sound(a: &Msc) -> Check {
    let der = derivations(a);
    for d in der.basis_matrices() {
        ensure(a.der_residual(&d).unwrap().is_zero(), || format!("basis {d} of Der({a}) fails"))?;
    }
    ensure(lie_closed(&der).is_closed(), || format!("Der({a}) is not Lie-closed"))
}

pub fn aut_is_group(a: &Msc) -> Check {
    let elems = automorphisms_bruteforce(a, DEFAULT_ENUM_CAP).unwrap();
    let sane = group_sanity(&elems);
    ensure(sane.is_ok(), || format!("Aut({a}) fails group axioms: {sane:?}"))?;
    ensure(elems.iter().any(GL2Element::is_identity), || format!("I missing from Aut({a})"))
}

/// `Aut(A^g) = g·Aut(A)·g⁻¹` as sets.
pub fn aut_conjugation(a: &Msc, g: &GL2Element) -> Check {
    let b = a.transform(g).unwrap();
    let ga = automorphisms_bruteforce(a, DEFAULT_ENUM_CAP).unwrap();
    let gb = automorphisms_bruteforce(&b, DEFAULT_ENUM_CAP).unwrap();
    let gi = g.inverse();
    let conj: HashSet<GL2Element> = ga.iter().map(|h| g.mul(h).unwrap().mul(&gi).unwrap()).collect();
    let direct: HashSet<GL2Element> = gb.into_iter().collect();
    ensure(conj == direct, || format!("Aut conjugation fails for {a} g={g}"))
}

/// `Der(A^g) = g·Der(A)·g⁻¹` as subspaces.
pub fn der_conjugation(a: &Msc, g: &GL2Element) -> Check {
    let spec = a.spec();
    let b = a.transform(g).unwrap();
    let (gm, gi) = (g.to_mat(), g.inverse().to_mat());
    let conj: Vec<_> = derivations(a)
        .basis_matrices()
        .iter()
        .map(|d| mat_to_vec4(&gm.mul(d).unwrap().mul(&gi).unwrap()))
        .collect();
    let expected = Subspace::span(spec, &conj).unwrap();
    ensure(derivations(&b) == expected, || format!("Der conjugation fails for {a} g={g}"))
}
