//! Derivation algebras as kernels of `D ↦ A(D⊗I + I⊗D) − DA`.
//!
//! 2×2 matrices are vectorized row-major as `(a, b, c, d)` everywhere in
//! this crate.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::linalg::{kernel_basis, rref, Mat};
use crate::msc::Msc;

/// `(a, b, c, d)` for `[[a, b], [c, d]]`.
pub type Vec4 = [FieldElement; 4];

pub fn vec4_to_mat(spec: FieldSpec, v: &Vec4) -> Mat {
    Mat::from_rows(spec, vec![vec![v[0].clone(), v[1].clone()], vec![v[2].clone(), v[3].clone()]])
        .expect("2x2")
}

pub fn mat_to_vec4(m: &Mat) -> Vec4 {
    [m.get(0, 0).clone(), m.get(0, 1).clone(), m.get(1, 0).clone(), m.get(1, 1).clone()]
}

/// A subspace of 2×2 matrices stored by its reduced row echelon basis, so
/// two subspaces are equal exactly when their bases are identical.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    spec: FieldSpec,
    basis: Vec<Vec4>,
}

impl Subspace {
    pub fn zero(spec: FieldSpec) -> Self {
        Subspace { spec, basis: Vec::new() }
    }

    /// Span of arbitrary (possibly dependent) vectors.
    pub fn span(spec: FieldSpec, vectors: &[Vec4]) -> Result<Self> {
        if vectors.is_empty() {
            return Ok(Self::zero(spec));
        }
        let rows = vectors.iter().map(|v| v.to_vec()).collect();
        let r = rref(&Mat::from_rows(spec, rows)?);
        let basis = (0..r.rank)
            .map(|i| {
                let row = r.reduced.row(i);
                [row[0].clone(), row[1].clone(), row[2].clone(), row[3].clone()]
            })
            .collect();
        Ok(Subspace { spec, basis })
    }

    /// Span of vectors given as small integers.
    pub fn span_i64(spec: FieldSpec, vectors: &[[i64; 4]]) -> Self {
        let vs: Vec<Vec4> = vectors.iter().map(|v| v.map(|x| spec.from_i64(x))).collect();
        Self::span(spec, &vs).expect("same field")
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec4] {
        &self.basis
    }

    pub fn basis_matrices(&self) -> Vec<Mat> {
        self.basis.iter().map(|v| vec4_to_mat(self.spec, v)).collect()
    }

    pub fn contains(&self, v: &Vec4) -> Result<bool> {
        if let Some(e) = v.iter().find(|e| e.spec() != self.spec) {
            return Err(Error::SpecMismatch { left: self.spec, right: e.spec() });
        }
        let mut all = self.basis.clone();
        all.push(v.clone());
        Ok(Subspace::span(self.spec, &all)?.dim() == self.dim())
    }

    /// Canonical text `dim=k; basis=[(..);(..)]`, or `dim=0`.
    pub fn canonical(&self) -> String {
        if self.basis.is_empty() {
            return "dim=0".to_string();
        }
        let vs: Vec<String> = self
            .basis
            .iter()
            .map(|v| format!("({},{},{},{})", v[0], v[1], v[2], v[3]))
            .collect();
        format!("dim={}; basis=[{}]", self.dim(), vs.join(";"))
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The 8×4 matrix of the linear map `(a, b, c, d) ↦ der_residual(A, D)`,
/// assembled column by column from the residuals at E₁₁, E₁₂, E₂₁, E₂₂.
pub fn derivation_system(a: &Msc) -> Mat {
    let spec = a.spec();
    let mut sys = Mat::zeros(spec, 8, 4).expect("8x4");
    for k in 0..4 {
        let mut e = Mat::zeros(spec, 2, 2).expect("2x2");
        e.set(k / 2, k % 2, spec.one());
        let r = a.der_residual(&e).expect("same field");
        for (row, v) in r.entries().iter().enumerate() {
            sys.set(row, k, v.clone());
        }
    }
    sys
}

/// Der(A) as a canonical subspace.
pub fn derivations(a: &Msc) -> Subspace {
    let kernel = kernel_basis(&derivation_system(a));
    let vs: Vec<Vec4> = kernel
        .into_iter()
        .map(|v| [v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()])
        .collect();
    Subspace::span(a.spec(), &vs).expect("same field")
}

/// Outcome of [`lie_closed`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LieClosure {
    Closed,
    /// `[left, right] = bracket` lies outside the span.
    Open { left: Mat, right: Mat, bracket: Mat },
}

impl LieClosure {
    pub fn is_closed(&self) -> bool {
        matches!(self, LieClosure::Closed)
    }
}

/// Checks `[Dᵢ, Dⱼ] ∈ span` for every pair of basis matrices.
pub fn lie_closed(s: &Subspace) -> LieClosure {
    let mats = s.basis_matrices();
    for i in 0..mats.len() {
        for j in (i + 1)..mats.len() {
            let bracket = commutator(&mats[i], &mats[j]);
            if !s.contains(&mat_to_vec4(&bracket)).expect("same field") {
                return LieClosure::Open {
                    left: mats[i].clone(),
                    right: mats[j].clone(),
                    bracket,
                };
            }
        }
    }
    LieClosure::Closed
}

pub fn commutator(x: &Mat, y: &Mat) -> Mat {
    x.mul(y).and_then(|xy| xy.sub(&y.mul(x)?)).expect("2x2 over one field")
}

pub fn subspace_equal(s: &Subspace, t: &Subspace) -> Result<bool> {
    if s.spec != t.spec {
        return Err(Error::SpecMismatch { left: s.spec, right: t.spec });
    }
    Ok(s.basis == t.basis)
}
