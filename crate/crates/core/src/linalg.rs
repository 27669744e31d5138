//! Small dense exact matrices: Kronecker products, reduced row echelon form,
//! kernels, and the 2×2 group GL(2, F).

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::text::Cursor;

/// Largest row or column count accepted by [`Mat`].
pub const MAX_DIM: usize = 16;

/// Default largest field order for GL(2, q) enumeration.
pub const DEFAULT_ENUM_CAP: u64 = 31;

/// Row-major dense matrix over a single field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    spec: FieldSpec,
    data: Vec<FieldElement>,
}

impl Mat {
    pub fn zeros(spec: FieldSpec, rows: usize, cols: usize) -> Result<Self> {
        check_dims(rows, cols)?;
        Ok(Mat {
            rows,
            cols,
            spec,
            data: vec![spec.zero(); rows * cols],
        })
    }

    pub fn identity(spec: FieldSpec, n: usize) -> Result<Self> {
        let mut m = Self::zeros(spec, n, n)?;
        for i in 0..n {
            m.set(i, i, spec.one());
        }
        Ok(m)
    }

    pub fn from_rows(spec: FieldSpec, rows: Vec<Vec<FieldElement>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        check_dims(r, c)?;
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        let data: Vec<FieldElement> = rows.into_iter().flatten().collect();
        if let Some(bad) = data.iter().find(|e| e.spec() != spec) {
            return Err(Error::SpecMismatch {
                left: spec,
                right: bad.spec(),
            });
        }
        Ok(Mat {
            rows: r,
            cols: c,
            spec,
            data,
        })
    }

    /// Builds a matrix from small integers.
    pub fn from_i64(spec: FieldSpec, rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            spec,
            rows.iter()
                .map(|row| row.iter().map(|&v| spec.from_i64(v)).collect())
                .collect(),
        )
    }

    /// Column vector.
    pub fn column(spec: FieldSpec, entries: Vec<FieldElement>) -> Result<Self> {
        Self::from_rows(spec, entries.into_iter().map(|e| vec![e]).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElement {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        assert_eq!(v.spec(), self.spec, "field mismatch");
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldElement::is_zero)
    }

    fn same_field(&self, other: &Mat) -> Result<()> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(Error::SpecMismatch {
                left: self.spec,
                right: other.spec,
            })
        }
    }

    pub fn add(&self, other: &Mat) -> Result<Mat> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Mat) -> Result<Mat> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &Mat, f: impl Fn(&FieldElement, &FieldElement) -> FieldElement) -> Result<Mat> {
        self.same_field(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Mat {
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
            ..self.clone()
        })
    }

    pub fn scale(&self, s: &FieldElement) -> Mat {
        Mat {
            data: self.data.iter().map(|a| a * s).collect(),
            ..self.clone()
        }
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Mat::zeros(self.spec, self.rows, other.cols)?;
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = self.spec.zero();
                for k in 0..self.cols {
                    acc = &acc + &(self.get(i, k) * other.get(k, j));
                }
                out.data[i * other.cols + j] = acc;
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Mat {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Mat {
            rows: self.cols,
            cols: self.rows,
            spec: self.spec,
            data,
        }
    }

    /// Parses `[[e,e,...],[e,e,...]]`.
    pub fn parse(spec: FieldSpec, text: &str) -> Result<Mat> {
        let mut cur = Cursor::new(text);
        let m = Self::parse_at(spec, &mut cur)?;
        cur.finish()?;
        Ok(m)
    }

    pub(crate) fn parse_at(spec: FieldSpec, cur: &mut Cursor<'_>) -> Result<Mat> {
        let start = cur.pos();
        cur.expect('[')?;
        let mut rows = Vec::new();
        loop {
            cur.expect('[')?;
            let mut row = vec![spec.parse_element_at(cur)?];
            while cur.eat(',') {
                row.push(spec.parse_element_at(cur)?);
            }
            cur.expect(']')?;
            rows.push(row);
            if !cur.eat(',') {
                break;
            }
        }
        cur.expect(']')?;
        Mat::from_rows(spec, rows).map_err(|e| Error::parse(start, e.to_string()))
    }
}

fn check_dims(rows: usize, cols: usize) -> Result<()> {
    if (1..=MAX_DIM).contains(&rows) && (1..=MAX_DIM).contains(&cols) {
        Ok(())
    } else {
        Err(Error::Shape(format!(
            "{rows}x{cols} is outside 1..={MAX_DIM}"
        )))
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, e) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Serialize for Mat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Kronecker product: block `(i, j)` of the result is `a_ij · b`.
pub fn kron(a: &Mat, b: &Mat) -> Result<Mat> {
    a.same_field(b)?;
    let mut out = Mat::zeros(a.spec, a.rows * b.rows, a.cols * b.cols)?;
    for i in 0..a.rows {
        for j in 0..a.cols {
            let aij = a.get(i, j);
            for k in 0..b.rows {
                for l in 0..b.cols {
                    out.set(i * b.rows + k, j * b.cols + l, aij * b.get(k, l));
                }
            }
        }
    }
    Ok(out)
}

/// Reduced row echelon form with the pivot scan going leftmost column first,
/// topmost unprocessed row first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: Mat,
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
}

pub fn rref(m: &Mat) -> Rref {
    let mut r = m.clone();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..r.cols {
        if row == r.rows {
            break;
        }
        let Some(piv) = (row..r.rows).find(|&i| !r.get(i, col).is_zero()) else {
            continue;
        };
        if piv != row {
            for j in 0..r.cols {
                r.data.swap(piv * r.cols + j, row * r.cols + j);
            }
        }
        let inv = r.get(row, col).inv().expect("pivot is non-zero");
        for j in 0..r.cols {
            let v = r.get(row, j) * &inv;
            r.data[row * r.cols + j] = v;
        }
        for i in 0..r.rows {
            if i == row || r.get(i, col).is_zero() {
                continue;
            }
            let factor = r.get(i, col).clone();
            for j in 0..r.cols {
                let v = r.get(i, j) - &(&factor * r.get(row, j));
                r.data[i * r.cols + j] = v;
            }
        }
        pivot_cols.push(col);
        row += 1;
    }
    Rref {
        reduced: r,
        rank: pivot_cols.len(),
        pivot_cols,
    }
}

/// Basis of `{v : M v = 0}`, one vector per free column in increasing column
/// order; each vector has a 1 in its own free position.
pub fn kernel_basis(m: &Mat) -> Vec<Vec<FieldElement>> {
    let Rref {
        reduced,
        pivot_cols,
        ..
    } = rref(m);
    let spec = m.spec;
    (0..m.cols)
        .filter(|c| !pivot_cols.contains(c))
        .map(|free| {
            let mut v = vec![spec.zero(); m.cols];
            v[free] = spec.one();
            for (row, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -reduced.get(row, free);
            }
            v
        })
        .collect()
}

/// An invertible 2×2 matrix `[[a, b], [c, d]]` with its determinant cached.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GL2Element {
    a: FieldElement,
    b: FieldElement,
    c: FieldElement,
    d: FieldElement,
    det: FieldElement,
}

/// `ad − bc` of a 2×2 matrix.
pub fn det2(m: &Mat) -> Result<FieldElement> {
    if (m.rows, m.cols) != (2, 2) {
        return Err(Error::Shape(format!("det2 of a {}x{} matrix", m.rows, m.cols)));
    }
    Ok(&(m.get(0, 0) * m.get(1, 1)) - &(m.get(0, 1) * m.get(1, 0)))
}

impl GL2Element {
    pub fn new(a: FieldElement, b: FieldElement, c: FieldElement, d: FieldElement) -> Result<Self> {
        let spec = a.spec();
        for e in [&b, &c, &d] {
            if e.spec() != spec {
                return Err(Error::SpecMismatch {
                    left: spec,
                    right: e.spec(),
                });
            }
        }
        let det = &(&a * &d) - &(&b * &c);
        if det.is_zero() {
            return Err(Error::Singular);
        }
        Ok(GL2Element { a, b, c, d, det })
    }

    pub fn from_i64(spec: FieldSpec, a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(spec.from_i64(a), spec.from_i64(b), spec.from_i64(c), spec.from_i64(d))
    }

    pub fn identity(spec: FieldSpec) -> Self {
        Self::from_i64(spec, 1, 0, 0, 1).expect("identity is invertible")
    }

    pub fn from_mat(m: &Mat) -> Result<Self> {
        if (m.rows, m.cols) != (2, 2) {
            return Err(Error::Shape(format!("expected 2x2, got {}x{}", m.rows, m.cols)));
        }
        Self::new(
            m.get(0, 0).clone(),
            m.get(0, 1).clone(),
            m.get(1, 0).clone(),
            m.get(1, 1).clone(),
        )
    }

    pub fn spec(&self) -> FieldSpec {
        self.a.spec()
    }

    pub fn a(&self) -> &FieldElement {
        &self.a
    }
    pub fn b(&self) -> &FieldElement {
        &self.b
    }
    pub fn c(&self) -> &FieldElement {
        &self.c
    }
    pub fn d(&self) -> &FieldElement {
        &self.d
    }
    pub fn det(&self) -> &FieldElement {
        &self.det
    }

    pub fn to_mat(&self) -> Mat {
        Mat::from_rows(
            self.spec(),
            vec![
                vec![self.a.clone(), self.b.clone()],
                vec![self.c.clone(), self.d.clone()],
            ],
        )
        .expect("2x2")
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_one()
    }

    pub fn mul(&self, o: &GL2Element) -> Result<GL2Element> {
        if self.spec() != o.spec() {
            return Err(Error::SpecMismatch {
                left: self.spec(),
                right: o.spec(),
            });
        }
        Ok(self.mul_same(o))
    }

    pub(crate) fn mul_same(&self, o: &GL2Element) -> GL2Element {
        let a = &(&self.a * &o.a) + &(&self.b * &o.c);
        let b = &(&self.a * &o.b) + &(&self.b * &o.d);
        let c = &(&self.c * &o.a) + &(&self.d * &o.c);
        let d = &(&self.c * &o.b) + &(&self.d * &o.d);
        let det = &self.det * &o.det;
        GL2Element { a, b, c, d, det }
    }

    pub fn inverse(&self) -> GL2Element {
        let s = self.det.inv().expect("cached determinant is non-zero");
        GL2Element {
            a: &self.d * &s,
            b: -(&self.b * &s),
            c: -(&self.c * &s),
            d: &self.a * &s,
            det: s,
        }
    }

    /// Canonical text `[[a,b],[c,d]]`.
    pub fn canonical(&self) -> String {
        format!("[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

/// Inverse of a 2×2 matrix, failing with [`Error::Singular`].
pub fn inv2(m: &Mat) -> Result<GL2Element> {
    Ok(GL2Element::from_mat(m)?.inverse())
}

impl fmt::Display for GL2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

impl Serialize for GL2Element {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `(q² − 1)(q² − q)`.
pub fn gl2_order(q: u64) -> u64 {
    (q * q - 1) * (q * q - q)
}

/// Lazy enumeration of GL(2, q) in lexicographic order of the canonical
/// encodings of `(a, b, c, d)`.
///
/// The underlying index space is `0..q⁴`; [`Gl2Enumeration::at`] decodes a
/// single index so disjoint ranges can be scanned independently.
#[derive(Clone, Debug)]
pub struct Gl2Enumeration {
    elems: Vec<FieldElement>,
}

impl Gl2Enumeration {
    pub fn new(spec: FieldSpec, cap: u64) -> Result<Self> {
        let q = spec.order().ok_or(Error::InfiniteField(spec))?;
        if q > cap {
            return Err(Error::CapExceeded { q, cap });
        }
        Ok(Gl2Enumeration {
            elems: spec.enumerate()?,
        })
    }

    pub fn q(&self) -> u64 {
        self.elems.len() as u64
    }

    /// Size of the raw index space (all 2×2 matrices).
    pub fn index_len(&self) -> u64 {
        self.q().pow(4)
    }

    /// Entries `(a, b, c, d)` at a raw index.
    pub fn entries_at(&self, idx: u64) -> [&FieldElement; 4] {
        let q = self.q();
        let e = |k: u32| &self.elems[((idx / q.pow(3 - k)) % q) as usize];
        [e(0), e(1), e(2), e(3)]
    }

    /// The invertible matrix at a raw index, if it is invertible.
    pub fn at(&self, idx: u64) -> Option<GL2Element> {
        let [a, b, c, d] = self.entries_at(idx);
        GL2Element::new(a.clone(), b.clone(), c.clone(), d.clone()).ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = GL2Element> + '_ {
        (0..self.index_len()).filter_map(move |i| self.at(i))
    }
}

/// All of GL(2, q) in enumeration order.
pub fn gl2_enumerate(spec: FieldSpec, cap: u64) -> Result<Vec<GL2Element>> {
    Ok(Gl2Enumeration::new(spec, cap)?.iter().collect())
}
