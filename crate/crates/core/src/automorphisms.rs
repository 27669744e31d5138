//! Automorphism groups: the exact membership predicate, brute-force search
//! over GL(2, q), group-axiom checks and comparison against closed-form
//! group descriptions.

use std::collections::HashSet;
use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::linalg::{det2, GL2Element, Gl2Enumeration, Mat};
use crate::msc::Msc;

/// Closed-form shapes of the groups that occur in the classification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupShape {
    /// `{I}`
    Trivial,
    /// `{I, diag(1, −1)}`
    OrderTwoDiag,
    /// `{diag(1, d) : d ≠ 0}`
    Torus,
    /// `{diag(a, 1) : a ≠ 0}`
    ScaleFirst,
    /// `{[[1, 0], [c, 1]]}`
    UnipotentLower,
    /// `{[[1, 0], [c, d]] : d ≠ 0}`
    Borel,
    /// `{[[a, 0], [c, a²]] : a ≠ 0}`
    Parabolic,
    FiniteList(Vec<GL2Element>),
}

impl GroupShape {
    pub fn name(&self) -> &'static str {
        match self {
            GroupShape::Trivial => "Trivial",
            GroupShape::OrderTwoDiag => "OrderTwoDiag",
            GroupShape::Torus => "Torus",
            GroupShape::ScaleFirst => "ScaleFirst",
            GroupShape::UnipotentLower => "UnipotentLower",
            GroupShape::Borel => "Borel",
            GroupShape::Parabolic => "Parabolic",
            GroupShape::FiniteList(_) => "FiniteList",
        }
    }
}

/// A symbolic automorphism group over a concrete field, together with notes
/// on elements of the closed-form answer that have no representative in
/// this field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupDescription {
    spec: FieldSpec,
    shape: GroupShape,
    omissions: Vec<String>,
}

impl GroupDescription {
    /// Normalizes degenerate shapes: `diag(1, −1) = I` in characteristic 2
    /// and a list holding only `I` are both [`GroupShape::Trivial`]; list
    /// duplicates are dropped.
    pub fn new(spec: FieldSpec, shape: GroupShape) -> Result<Self> {
        let shape = match shape {
            GroupShape::OrderTwoDiag if spec.characteristic() == 2 => GroupShape::Trivial,
            GroupShape::FiniteList(elems) => {
                let mut seen = HashSet::new();
                let mut kept = Vec::new();
                for g in elems {
                    if g.spec() != spec {
                        return Err(Error::SpecMismatch { left: spec, right: g.spec() });
                    }
                    if seen.insert(g.clone()) {
                        kept.push(g);
                    }
                }
                if kept.len() == 1 && kept[0].is_identity() {
                    GroupShape::Trivial
                } else {
                    GroupShape::FiniteList(kept)
                }
            }
            other => other,
        };
        Ok(GroupDescription { spec, shape, omissions: Vec::new() })
    }

    pub fn with_omission(mut self, note: impl Into<String>) -> Self {
        self.omissions.push(note.into());
        self
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn shape(&self) -> &GroupShape {
        &self.shape
    }

    pub fn omissions(&self) -> &[String] {
        &self.omissions
    }

    pub fn contains(&self, g: &GL2Element) -> bool {
        if g.spec() != self.spec {
            return false;
        }
        let (a, b, c, d) = (g.a(), g.b(), g.c(), g.d());
        match &self.shape {
            GroupShape::Trivial => g.is_identity(),
            GroupShape::OrderTwoDiag => {
                a.is_one() && b.is_zero() && c.is_zero() && (d.is_one() || (-d).is_one())
            }
            GroupShape::Torus => a.is_one() && b.is_zero() && c.is_zero(),
            GroupShape::ScaleFirst => b.is_zero() && c.is_zero() && d.is_one(),
            GroupShape::UnipotentLower => a.is_one() && b.is_zero() && d.is_one(),
            GroupShape::Borel => a.is_one() && b.is_zero(),
            GroupShape::Parabolic => b.is_zero() && *d == a * a,
            GroupShape::FiniteList(elems) => elems.contains(g),
        }
    }

    /// Instantiates the shape at explicit parameters `(x, y)`; the meaning
    /// of the parameters follows the shape (e.g. `(c, d)` for Borel,
    /// `(a, c)` for Parabolic). Singular instantiations return `None`.
    fn instantiate(&self, x: &FieldElement, y: &FieldElement) -> Option<GL2Element> {
        let s = self.spec;
        let (zero, one) = (s.zero(), s.one());
        let g = match &self.shape {
            GroupShape::Trivial => GL2Element::identity(s),
            GroupShape::OrderTwoDiag => GL2Element::identity(s),
            GroupShape::Torus => GL2Element::new(one, zero.clone(), zero, x.clone()).ok()?,
            GroupShape::ScaleFirst => GL2Element::new(x.clone(), zero.clone(), zero, one).ok()?,
            GroupShape::UnipotentLower => GL2Element::new(one.clone(), zero, x.clone(), one).expect("det 1"),
            GroupShape::Borel => GL2Element::new(one, zero, x.clone(), y.clone()).ok()?,
            GroupShape::Parabolic => GL2Element::new(x.clone(), zero, y.clone(), x * x).ok()?,
            GroupShape::FiniteList(_) => return None,
        };
        Some(g)
    }

    /// Every element of the described group that lies in GL(2, F), sorted
    /// in GL(2, q) enumeration order.
    pub fn rational_points(&self) -> Result<Vec<GL2Element>> {
        let elems = self.spec.enumerate()?;
        let s = self.spec;
        let mut out = match &self.shape {
            GroupShape::Trivial => vec![GL2Element::identity(s)],
            GroupShape::OrderTwoDiag => {
                let minus = GL2Element::new(s.one(), s.zero(), s.zero(), -s.one())?;
                vec![GL2Element::identity(s), minus]
            }
            GroupShape::FiniteList(list) => list.clone(),
            GroupShape::Borel | GroupShape::Parabolic => {
                let mut v = Vec::new();
                for x in &elems {
                    for y in &elems {
                        v.extend(self.instantiate(x, y));
                    }
                }
                v
            }
            _ => elems.iter().filter_map(|x| self.instantiate(x, x)).collect(),
        };
        out.sort_by_key(enumeration_key);
        Ok(out)
    }

    /// Random element of the described group, for inclusion checks over
    /// infinite fields.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> GL2Element {
        let s = self.spec;
        match &self.shape {
            GroupShape::OrderTwoDiag => {
                if rng.gen_bool(0.5) {
                    GL2Element::identity(s)
                } else {
                    GL2Element::new(s.one(), s.zero(), s.zero(), -s.one()).expect("invertible")
                }
            }
            GroupShape::FiniteList(list) => list[rng.gen_range(0..list.len())].clone(),
            _ => {
                let x = s.random_nonzero(rng);
                let y = match self.shape {
                    GroupShape::Borel => s.random_nonzero(rng),
                    _ => s.random_element(rng),
                };
                self.instantiate(&x, &y).expect("non-zero parameters")
            }
        }
    }
}

impl fmt::Display for GroupDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.shape {
            GroupShape::FiniteList(list) => {
                let items: Vec<String> = list.iter().map(GL2Element::canonical).collect();
                write!(f, "FiniteList{{{}}}", items.join(", "))?;
            }
            shape => write!(f, "{}", shape.name())?,
        }
        for note in &self.omissions {
            write!(f, " (omitted: {note})")?;
        }
        Ok(())
    }
}

/// Lexicographic key of `(a, b, c, d)` encodings; the GL(2, q) enumeration
/// order.
pub fn enumeration_key(g: &GL2Element) -> [u64; 4] {
    [g.a(), g.b(), g.c(), g.d()].map(|e| e.encoding().unwrap_or(0))
}

/// `det g ≠ 0` and `gA − A(g⊗g) = 0`.
pub fn is_automorphism(a: &Msc, g: &Mat) -> Result<bool> {
    let residual = a.aut_residual(g)?;
    Ok(!det2(g)?.is_zero() && residual.is_zero())
}

fn hits_in(a: &Msc, en: &Gl2Enumeration, idx: u64) -> Option<GL2Element> {
    let [ea, eb, ec, ed] = en.entries_at(idx);
    if (ea * ed) == (eb * ec) || !a.fixes([ea, eb, ec, ed]) {
        return None;
    }
    en.at(idx)
}

/// Every automorphism of `a` over its finite field, in GL(2, q) enumeration
/// order.
pub fn automorphisms_bruteforce(a: &Msc, cap: u64) -> Result<Vec<GL2Element>> {
    let en = Gl2Enumeration::new(a.spec(), cap)?;
    Ok(scan(&en, |idx| hits_in(a, &en, idx)))
}

/// Maps every raw GL(2, q) index through `f`, keeping hits in index order.
/// Ranges are scanned in parallel when the `parallel` feature is on.
pub(crate) fn scan<T: Send>(en: &Gl2Enumeration, f: impl Fn(u64) -> Option<T> + Sync + Send) -> Vec<T> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..en.index_len()).into_par_iter().filter_map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..en.index_len()).filter_map(f).collect()
    }
}

/// Outcome of [`group_sanity`].
#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum GroupSanity {
    Ok,
    MissingIdentity,
    ProductMissing { left: GL2Element, right: GL2Element, product: GL2Element },
    InverseMissing { element: GL2Element, inverse: GL2Element },
}

impl GroupSanity {
    pub fn is_ok(&self) -> bool {
        matches!(self, GroupSanity::Ok)
    }
}

/// Checks that a finite set of matrices contains `I` and is closed under
/// products and inverses.
pub fn group_sanity(elems: &[GL2Element]) -> GroupSanity {
    let set: HashSet<&GL2Element> = elems.iter().collect();
    if !elems.iter().any(GL2Element::is_identity) {
        return GroupSanity::MissingIdentity;
    }
    for g in elems {
        for h in elems {
            let Ok(product) = g.mul(h) else {
                return GroupSanity::ProductMissing {
                    left: g.clone(),
                    right: h.clone(),
                    product: h.clone(),
                };
            };
            if !set.contains(&product) {
                return GroupSanity::ProductMissing { left: g.clone(), right: h.clone(), product };
            }
        }
    }
    for g in elems {
        let inverse = g.inverse();
        if !set.contains(&inverse) {
            return GroupSanity::InverseMissing { element: g.clone(), inverse };
        }
    }
    GroupSanity::Ok
}

/// Set comparison between a brute-force result and a description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum MatchVerdict {
    Equal,
    OracleExtra(Vec<GL2Element>),
    DescriptionExtra(Vec<GL2Element>),
    BothExtra { oracle_extra: Vec<GL2Element>, description_extra: Vec<GL2Element> },
}

impl MatchVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            MatchVerdict::Equal => "Equal",
            MatchVerdict::OracleExtra(_) => "OracleExtra",
            MatchVerdict::DescriptionExtra(_) => "DescriptionExtra",
            MatchVerdict::BothExtra { .. } => "BothExtra",
        }
    }

    pub fn is_equal(&self) -> bool {
        matches!(self, MatchVerdict::Equal)
    }
}

pub fn match_description(elems: &[GL2Element], desc: &GroupDescription) -> Result<MatchVerdict> {
    if !desc.spec().is_finite() {
        return Err(Error::InfiniteField(desc.spec()));
    }
    let points = desc.rational_points()?;
    let oracle: HashSet<&GL2Element> = elems.iter().collect();
    let described: HashSet<&GL2Element> = points.iter().collect();
    let oracle_extra: Vec<GL2Element> =
        elems.iter().filter(|g| !described.contains(g)).cloned().collect();
    let description_extra: Vec<GL2Element> =
        points.iter().filter(|g| !oracle.contains(g)).cloned().collect();
    Ok(match (oracle_extra.is_empty(), description_extra.is_empty()) {
        (true, true) => MatchVerdict::Equal,
        (false, true) => MatchVerdict::OracleExtra(oracle_extra),
        (true, false) => MatchVerdict::DescriptionExtra(description_extra),
        (false, false) => MatchVerdict::BothExtra { oracle_extra, description_extra },
    })
}
