//! Two-dimensional algebras as 2×4 matrices of structure constants.
//!
//! With `u ⊗ v = (u₁v₁, u₁v₂, u₂v₁, u₂v₂)ᵀ`, the product is `u·v = A(u ⊗ v)`.
//! A basis change `g` acts by `A ↦ g A (g⁻¹ ⊗ g⁻¹)`; `g` is an automorphism
//! when `gA = A(g ⊗ g)` and `D` is a derivation when `DA = A(D⊗I + I⊗D)`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{parse_spec_at, FieldElement, FieldSpec};
use crate::linalg::{kron, GL2Element, Mat};
use crate::text::Cursor;

/// Structure-constant matrix: rows `(α₁, α₂, α₃, α₄)` and `(β₁, β₂, β₃, β₄)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Msc {
    m: Mat,
}

impl Msc {
    pub fn new(m: Mat) -> Result<Self> {
        if (m.rows(), m.cols()) != (2, 4) {
            return Err(Error::Shape(format!(
                "structure constants must be 2x4, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        Ok(Msc { m })
    }

    pub fn from_i64(spec: FieldSpec, alpha: [i64; 4], beta: [i64; 4]) -> Result<Self> {
        Self::new(Mat::from_i64(spec, &[&alpha, &beta])?)
    }

    pub fn spec(&self) -> FieldSpec {
        self.m.spec()
    }

    pub fn matrix(&self) -> &Mat {
        &self.m
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElement {
        self.m.get(i, j)
    }

    fn check(&self, spec: FieldSpec) -> Result<()> {
        if self.spec() == spec {
            Ok(())
        } else {
            Err(Error::SpecMismatch {
                left: self.spec(),
                right: spec,
            })
        }
    }

    /// `u · v = A (u ⊗ v)`.
    pub fn product(&self, u: &[FieldElement; 2], v: &[FieldElement; 2]) -> Result<[FieldElement; 2]> {
        for e in u.iter().chain(v) {
            self.check(e.spec())?;
        }
        let uv = [&u[0] * &v[0], &u[0] * &v[1], &u[1] * &v[0], &u[1] * &v[1]];
        Ok([0, 1].map(|i| {
            let mut acc = self.spec().zero();
            for (j, t) in uv.iter().enumerate() {
                acc = &acc + &(self.get(i, j) * t);
            }
            acc
        }))
    }

    /// `g A (g⁻¹ ⊗ g⁻¹)`: the structure constants in the basis changed by `g`.
    pub fn transform(&self, g: &GL2Element) -> Result<Msc> {
        self.check(g.spec())?;
        let gi = g.inverse().to_mat();
        let out = g.to_mat().mul(&self.m)?.mul(&kron(&gi, &gi)?)?;
        Msc::new(out)
    }

    /// `gA − A(g ⊗ g)`; `g` may be singular.
    pub fn aut_residual(&self, g: &Mat) -> Result<Mat> {
        self.check(g.spec())?;
        check_square2(g)?;
        g.mul(&self.m)?.sub(&self.m.mul(&kron(g, g)?)?)
    }

    /// `A(D⊗I + I⊗D) − DA`.
    pub fn der_residual(&self, d: &Mat) -> Result<Mat> {
        self.check(d.spec())?;
        check_square2(d)?;
        let i = Mat::identity(self.spec(), 2)?;
        let lifted = kron(d, &i)?.add(&kron(&i, d)?)?;
        self.m.mul(&lifted)?.sub(&d.mul(&self.m)?)
    }

    /// Fast `gA = A(g⊗g)` check for `g = [[a, b], [c, d]]` without building
    /// intermediate matrices; stops at the first non-zero residual entry.
    pub(crate) fn fixes(&self, g: [&FieldElement; 4]) -> bool {
        self.intertwines(self, g)
    }

    /// `g·self = target·(g⊗g)`, i.e. `target = transform(self, g)` for
    /// invertible `g`.
    pub(crate) fn intertwines(&self, target: &Msc, g: [&FieldElement; 4]) -> bool {
        let gm = |i: usize, j: usize| g[2 * i + j];
        for col in 0..4 {
            let (k, l) = (col / 2, col % 2);
            let gkl = [
                gm(0, k) * gm(0, l),
                gm(0, k) * gm(1, l),
                gm(1, k) * gm(0, l),
                gm(1, k) * gm(1, l),
            ];
            for i in 0..2 {
                let lhs = &(gm(i, 0) * self.get(0, col)) + &(gm(i, 1) * self.get(1, col));
                let mut rhs = target.get(i, 0) * &gkl[0];
                for (jm, t) in gkl.iter().enumerate().skip(1) {
                    rhs = &rhs + &(target.get(i, jm) * t);
                }
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// Canonical text `MSC(<field>; [[α1,α2,α3,α4],[β1,β2,β3,β4]])`.
    pub fn canonical(&self) -> String {
        format!("MSC({}; {})", self.spec(), self.m)
    }
}

fn check_square2(m: &Mat) -> Result<()> {
    if (m.rows(), m.cols()) == (2, 2) {
        Ok(())
    } else {
        Err(Error::Shape(format!("expected 2x2, got {}x{}", m.rows(), m.cols())))
    }
}

impl fmt::Display for Msc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

impl Serialize for Msc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for Msc {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut cur = Cursor::new(s);
        cur.expect_word("MSC")?;
        cur.expect('(')?;
        let spec = parse_spec_at(&mut cur)?;
        cur.expect(';')?;
        cur.skip_ws();
        let at = cur.pos();
        let m = Mat::parse_at(spec, &mut cur)?;
        cur.expect(')')?;
        cur.finish()?;
        Msc::new(m).map_err(|e| Error::parse(at, e.to_string()))
    }
}
