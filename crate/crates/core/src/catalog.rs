//! The canonical families of two-dimensional algebras in each characteristic
//! class, with their expected automorphism groups and derivation algebras.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::automorphisms::{GroupDescription, GroupShape};
use crate::derivations::Subspace;
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::linalg::{GL2Element, Mat};
use crate::msc::Msc;

/// Parameter sweeps with at most this many tuples run exhaustively in
/// [`Sampling::Auto`].
pub const EXHAUSTIVE_LIMIT: u128 = 10_000;

/// Hard ceiling on exhaustive sweeps.
pub const EXHAUSTIVE_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CharClass {
    NotTwoThree,
    Two,
    Three,
}

impl CharClass {
    pub const ALL: [CharClass; 3] = [CharClass::NotTwoThree, CharClass::Two, CharClass::Three];

    pub fn of(spec: FieldSpec) -> CharClass {
        match spec.characteristic() {
            2 => CharClass::Two,
            3 => CharClass::Three,
            _ => CharClass::NotTwoThree,
        }
    }

    pub fn suffix(self) -> &'static str {
        match self {
            CharClass::NotTwoThree => "neq23",
            CharClass::Two => "char2",
            CharClass::Three => "char3",
        }
    }

    pub fn admits(self, spec: FieldSpec) -> bool {
        CharClass::of(spec) == self
    }
}

impl fmt::Display for CharClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.suffix())
    }
}

impl FromStr for CharClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('@');
        CharClass::ALL
            .into_iter()
            .find(|c| c.suffix() == t)
            .ok_or_else(|| Error::parse(0, format!("unknown characteristic class '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilyId {
    pub index: u8,
    pub class: CharClass,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ParamName {
    Alpha1,
    Alpha2,
    Alpha4,
    Beta1,
    Beta2,
}

impl ParamName {
    pub fn ascii(self) -> &'static str {
        match self {
            ParamName::Alpha1 => "a1",
            ParamName::Alpha2 => "a2",
            ParamName::Alpha4 => "a4",
            ParamName::Beta1 => "b1",
            ParamName::Beta2 => "b2",
        }
    }
}

use ParamName::{Alpha1 as A1, Alpha2 as A2, Alpha4 as A4, Beta1 as B1, Beta2 as B2};

impl FamilyId {
    pub fn new(index: u8, class: CharClass) -> Result<Self> {
        if !(1..=12).contains(&index) {
            return Err(Error::parse(1, format!("family index {index} is outside 1..12")));
        }
        Ok(FamilyId { index, class })
    }

    /// All twelve families of a class, in index order.
    pub fn all(class: CharClass) -> Vec<FamilyId> {
        (1..=12).map(|index| FamilyId { index, class }).collect()
    }

    /// Every family of every class.
    pub fn everything() -> Vec<FamilyId> {
        CharClass::ALL.into_iter().flat_map(FamilyId::all).collect()
    }

    /// `A3@char2`; a bare `A3` names the characteristic-not-2-or-3 family.
    pub fn parse(text: &str) -> Result<Self> {
        let (name, class) = match text.split_once('@') {
            Some((n, c)) => (n, c.parse::<CharClass>()?),
            None => (text, CharClass::NotTwoThree),
        };
        let digits = name
            .strip_prefix('A')
            .ok_or_else(|| Error::parse(0, format!("family '{text}' must start with 'A'")))?;
        let index: u8 = digits
            .parse()
            .map_err(|_| Error::parse(1, format!("bad family index in '{text}'")))?;
        FamilyId::new(index, class)
    }

    pub fn params(&self) -> &'static [ParamName] {
        match (self.index, self.class) {
            (1, _) => &[A1, A2, A4, B1],
            (2, _) => &[A1, B1, B2],
            (3, CharClass::Two) => &[A1, B2],
            (3, _) => &[B1, B2],
            (4, _) => &[A1, B2],
            (5, _) => &[A1],
            (6, _) => &[A1, B1],
            (7, CharClass::Two) => &[A1],
            (7, _) => &[B1],
            (8, _) => &[A1],
            _ => &[],
        }
    }

    pub fn arity(&self) -> usize {
        self.params().len()
    }

    /// Symbolic matrix, for listings.
    pub fn template(&self) -> &'static str {
        use CharClass::*;
        match (self.index, self.class) {
            (1, _) => "[[a1,a2,a2+1,a4],[b1,-a1,1-a1,-a2]]",
            (2, _) => "[[a1,0,0,1],[b1,b2,1-a1,0]]",
            (3, Two) => "[[a1,1,1,0],[0,b2,1-a1,1]]",
            (3, _) => "[[0,1,1,0],[b1,b2,1,-1]]",
            (4, _) => "[[a1,0,0,0],[0,b2,1-a1,0]]",
            (5, NotTwoThree) => "[[a1,0,0,0],[1,2a1-1,1-a1,0]]",
            (5, Two) => "[[a1,0,0,0],[1,1,1-a1,0]]",
            (5, Three) => "[[a1,0,0,0],[1,-1-a1,1-a1,0]]",
            (6, _) => "[[a1,0,0,1],[b1,1-a1,-a1,0]]",
            (7, Two) => "[[a1,1,1,0],[0,1-a1,-a1,-1]]",
            (7, _) => "[[0,1,1,0],[b1,1,0,-1]]",
            (8, _) => "[[a1,0,0,0],[0,1-a1,-a1,0]]",
            (9, NotTwoThree) => "[[1/3,0,0,0],[1,2/3,-1/3,0]]",
            (9, Two) => "[[1,0,0,0],[1,0,1,0]]",
            (9, Three) => "[[0,1,1,0],[1,0,0,-1]]",
            (10, _) => "[[0,1,1,0],[0,0,0,-1]]",
            (11, NotTwoThree) => "[[0,1,1,0],[1,0,0,-1]]",
            (11, Two) => "[[1,1,1,0],[0,-1,-1,-1]]",
            (11, Three) => "[[1,0,0,0],[1,-1,-1,0]]",
            _ => "[[0,0,0,0],[1,0,0,0]]",
        }
    }

    fn check(&self, params: &ParamVector, spec: FieldSpec) -> Result<()> {
        if !self.class.admits(spec) {
            return Err(Error::CharMismatch { family: self.to_string(), field: spec });
        }
        if params.names != self.params() {
            return Err(Error::Arity {
                family: self.to_string(),
                expected: self.arity(),
                got: params.len(),
            });
        }
        if let Some(v) = params.values.iter().find(|v| v.spec() != spec) {
            return Err(Error::SpecMismatch { left: spec, right: v.spec() });
        }
        Ok(())
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A{}@{}", self.index, self.class)
    }
}

impl Serialize for FamilyId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Named parameter values, in the family's canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParamVector {
    names: Vec<ParamName>,
    values: Vec<FieldElement>,
}

impl ParamVector {
    pub fn empty() -> Self {
        ParamVector { names: Vec::new(), values: Vec::new() }
    }

    /// Values in the order of [`FamilyId::params`].
    pub fn for_family(fam: FamilyId, values: Vec<FieldElement>) -> Result<Self> {
        if values.len() != fam.arity() {
            return Err(Error::Arity {
                family: fam.to_string(),
                expected: fam.arity(),
                got: values.len(),
            });
        }
        Ok(ParamVector { names: fam.params().to_vec(), values })
    }

    pub fn from_i64(fam: FamilyId, spec: FieldSpec, values: &[i64]) -> Result<Self> {
        Self::for_family(fam, values.iter().map(|&v| spec.from_i64(v)).collect())
    }

    /// Parses comma- or whitespace-separated field elements.
    pub fn parse(fam: FamilyId, spec: FieldSpec, text: &str) -> Result<Self> {
        let mut values = Vec::new();
        let mut offset = 0;
        for tok in text.split(|c: char| c == ',' || c.is_whitespace()) {
            if !tok.is_empty() {
                let v = spec.parse_element(tok).map_err(|e| match e {
                    Error::Parse { offset: o, message } => Error::Parse { offset: offset + o, message },
                    other => other,
                })?;
                values.push(v);
            }
            offset += tok.len() + 1;
        }
        Self::for_family(fam, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[FieldElement] {
        &self.values
    }

    pub fn get(&self, name: ParamName) -> Option<&FieldElement> {
        self.names.iter().position(|&n| n == name).map(|i| &self.values[i])
    }

    fn req(&self, name: ParamName) -> &FieldElement {
        self.get(name).expect("checked arity")
    }

    pub fn with(&self, name: ParamName, value: FieldElement) -> Self {
        let mut out = self.clone();
        if let Some(i) = self.names.iter().position(|&n| n == name) {
            out.values[i] = value;
        }
        out
    }
}

impl fmt::Display for ParamVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self
            .names
            .iter()
            .zip(&self.values)
            .map(|(n, v)| format!("{}={}", n.ascii(), v))
            .collect();
        write!(f, "({})", items.join(","))
    }
}

impl Serialize for ParamVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

struct Ctx {
    spec: FieldSpec,
}

impl Ctx {
    fn c(&self, v: i64) -> FieldElement {
        self.spec.from_i64(v)
    }

    fn third(&self, k: i64) -> Result<FieldElement> {
        self.spec.ratio(k, 3)
    }
}

/// The family's matrix with parameters substituted.
pub fn build(fam: FamilyId, params: &ParamVector, spec: FieldSpec) -> Result<Msc> {
    use CharClass::*;
    fam.check(params, spec)?;
    let x = Ctx { spec };
    let (z, one) = (x.c(0), x.c(1));
    let p = |n| params.req(n).clone();
    let rows: [Vec<FieldElement>; 2] = match (fam.index, fam.class) {
        (1, _) => {
            let (a1, a2) = (p(A1), p(A2));
            [
                vec![a1.clone(), a2.clone(), &a2 + &one, p(A4)],
                vec![p(B1), -&a1, &one - &a1, -&a2],
            ]
        }
        (2, _) => {
            let a1 = p(A1);
            [vec![a1.clone(), z.clone(), z.clone(), one.clone()], vec![p(B1), p(B2), &one - &a1, z]]
        }
        (3, Two) => {
            let a1 = p(A1);
            [
                vec![a1.clone(), one.clone(), one.clone(), z.clone()],
                vec![z, p(B2), &one - &a1, one],
            ]
        }
        (3, _) => [vec![z.clone(), one.clone(), one.clone(), z], vec![p(B1), p(B2), one, x.c(-1)]],
        (4, _) => {
            let a1 = p(A1);
            [
                vec![a1.clone(), z.clone(), z.clone(), z.clone()],
                vec![z.clone(), p(B2), &one - &a1, z],
            ]
        }
        (5, class) => {
            let a1 = p(A1);
            let m = match class {
                NotTwoThree => &(&a1 + &a1) - &one,
                Two => one.clone(),
                Three => &x.c(-1) - &a1,
            };
            [vec![a1.clone(), z.clone(), z.clone(), z.clone()], vec![one.clone(), m, &one - &a1, z]]
        }
        (6, _) => {
            let a1 = p(A1);
            [
                vec![a1.clone(), z.clone(), z.clone(), one.clone()],
                vec![p(B1), &one - &a1, -&a1, z],
            ]
        }
        (7, Two) => {
            let a1 = p(A1);
            [
                vec![a1.clone(), one.clone(), one.clone(), z.clone()],
                vec![z, &one - &a1, -&a1, x.c(-1)],
            ]
        }
        (7, _) => [vec![z.clone(), one.clone(), one.clone(), z.clone()], vec![p(B1), one, z, x.c(-1)]],
        (8, _) => {
            let a1 = p(A1);
            [
                vec![a1.clone(), z.clone(), z.clone(), z.clone()],
                vec![z.clone(), &one - &a1, -&a1, z],
            ]
        }
        (9, NotTwoThree) => [
            vec![x.third(1)?, z.clone(), z.clone(), z.clone()],
            vec![one, x.third(2)?, -&x.third(1)?, z],
        ],
        (9, Two) => [vec![one.clone(), z.clone(), z.clone(), z.clone()], vec![one.clone(), z.clone(), one, z]],
        (9, Three) | (11, NotTwoThree) => {
            [vec![z.clone(), one.clone(), one.clone(), z.clone()], vec![one, z.clone(), z, x.c(-1)]]
        }
        (10, _) => [vec![z.clone(), one.clone(), one, z.clone()], vec![z.clone(), z.clone(), z, x.c(-1)]],
        (11, Two) => [
            vec![one.clone(), one.clone(), one, z.clone()],
            vec![z, x.c(-1), x.c(-1), x.c(-1)],
        ],
        (11, _) => [vec![one.clone(), z.clone(), z.clone(), z.clone()], vec![one, x.c(-1), x.c(-1), z]],
        _ => [vec![z.clone(), z.clone(), z.clone(), z.clone()], vec![one, z.clone(), z.clone(), z]],
    };
    let [r0, r1] = rows;
    Msc::new(Mat::from_rows(spec, vec![r0, r1])?)
}

fn gl(spec: FieldSpec, a: &FieldElement, b: &FieldElement, c: &FieldElement, d: &FieldElement) -> Result<GL2Element> {
    GL2Element::new(a.clone(), b.clone(), c.clone(), d.clone())
        .map_err(|_| Error::Shape(format!("listed automorphism is singular over {spec}")))
}

/// The stated automorphism group of a cell, intersected with GL(2, F).
pub fn expected_aut(fam: FamilyId, params: &ParamVector, spec: FieldSpec) -> Result<GroupDescription> {
    use CharClass::*;
    use GroupShape::*;
    fam.check(params, spec)?;
    let x = Ctx { spec };
    let (z, one) = (x.c(0), x.c(1));
    let p = |n| params.req(n).clone();
    let shape = match (fam.index, fam.class) {
        (1, _) | (3, NotTwoThree | Three) | (7, NotTwoThree | Three) => Trivial,
        (2 | 6, Two) => Trivial,
        (2 | 6, _) => {
            if p(B1).is_zero() {
                OrderTwoDiag
            } else {
                Trivial
            }
        }
        (3, Two) => {
            let g = gl(spec, &one, &z, &(&one + &p(B2)), &one)?;
            FiniteList(vec![GL2Element::identity(spec), g])
        }
        (7, Two) => {
            let g = gl(spec, &one, &z, &(&one + &p(A1)), &one)?;
            FiniteList(vec![GL2Element::identity(spec), g])
        }
        (4, _) => {
            let a1 = p(A1);
            if p(B2) == &(&a1 + &a1) - &one {
                Borel
            } else {
                Torus
            }
        }
        (5 | 9, _) => UnipotentLower,
        (8, NotTwoThree) => {
            if p(A1) == x.third(1)? {
                Borel
            } else {
                Torus
            }
        }
        (8, Two) => {
            if p(A1).is_one() {
                Borel
            } else {
                Torus
            }
        }
        (8, Three) => Torus,
        (10, _) => ScaleFirst,
        (11, NotTwoThree) => return a11_group(spec),
        (11, Two) => {
            let m = |a, b, c, d| GL2Element::from_i64(spec, a, b, c, d);
            FiniteList(vec![
                GL2Element::identity(spec),
                m(0, 1, 1, 0)?,
                m(0, 1, 1, 1)?,
                m(1, 0, 1, 1)?,
                m(1, 1, 1, 0)?,
                m(1, 1, 0, 1)?,
            ])
        }
        (11, Three) => UnipotentLower,
        _ => Parabolic,
    };
    GroupDescription::new(spec, shape)
}

/// `{I, diag(−1, 1)}` plus the four order-3/order-2 elements involving √3.
fn a11_group(spec: FieldSpec) -> Result<GroupDescription> {
    let mut elems = vec![GL2Element::identity(spec), GL2Element::from_i64(spec, -1, 0, 0, 1)?];
    let root = spec.from_i64(3).sqrt();
    if let Some(r) = &root {
        let half = spec.ratio(1, 2)?;
        let s = r * &half;
        let (mh, ms) = (-&half, -&s);
        elems.push(gl(spec, &half, &s, &s, &mh)?);
        elems.push(gl(spec, &half, &ms, &ms, &mh)?);
        elems.push(gl(spec, &mh, &s, &ms, &mh)?);
        elems.push(gl(spec, &mh, &ms, &s, &mh)?);
    }
    let desc = GroupDescription::new(spec, GroupShape::FiniteList(elems))?;
    Ok(match root {
        Some(_) => desc,
        None => desc.with_omission("4 elements need sqrt(3)"),
    })
}

const E11: [i64; 4] = [1, 0, 0, 0];
const E12: [i64; 4] = [0, 1, 0, 0];
const E21: [i64; 4] = [0, 0, 1, 0];
const E22: [i64; 4] = [0, 0, 0, 1];

/// The stated derivation algebra of a cell.
pub fn expected_der(fam: FamilyId, params: &ParamVector, spec: FieldSpec) -> Result<Subspace> {
    use CharClass::*;
    fam.check(params, spec)?;
    let x = Ctx { spec };
    let one = x.c(1);
    let p = |n| params.req(n).clone();
    let when = |cond: bool, yes: &[[i64; 4]], no: &[[i64; 4]]| if cond { yes.to_vec() } else { no.to_vec() };
    let gens: Vec<[i64; 4]> = match (fam.index, fam.class) {
        (1, _) | (11, NotTwoThree | Two) => vec![],
        (2 | 3 | 6 | 7, NotTwoThree | Three) => vec![],
        (2 | 6, Two) => when(p(B1).is_zero(), &[E22], &[]),
        (3, Two) => when(p(B2).is_one(), &[E21], &[]),
        (7, Two) => when(p(A1).is_one(), &[E21], &[]),
        (4, _) => {
            let a1 = p(A1);
            when(p(B2) == &(&a1 + &a1) - &one, &[E21, E22], &[E22])
        }
        (5, _) | (9, NotTwoThree | Two) | (11, Three) => vec![E21],
        (8, NotTwoThree) => when(p(A1) == x.third(1)?, &[E21, E22], &[E22]),
        (8, Two) => when(p(A1).is_one(), &[E21, E22], &[E22]),
        (8, Three) => vec![E22],
        (9, Three) => vec![[0, 2, 1, 0]],
        (10, NotTwoThree) => vec![E11],
        (10, Two) | (12, Two) => vec![E11, E21],
        (10, Three) => vec![E11, E12],
        _ => vec![[1, 0, 0, 2], E21],
    };
    Ok(Subspace::span_i64(spec, &gens))
}

/// A cell whose stated group is reported rather than asserted.
#[derive(Clone, Copy, Debug)]
pub struct Quarantine {
    pub family: FamilyId,
    pub param: ParamName,
    pub value: i64,
    pub justification: &'static str,
}

pub const QUARANTINE: &[Quarantine] = &[
    Quarantine {
        family: FamilyId { index: 3, class: CharClass::Two },
        param: ParamName::Beta2,
        value: 1,
        justification: "listed second automorphism collapses to I while Der is one-dimensional",
    },
    Quarantine {
        family: FamilyId { index: 7, class: CharClass::Two },
        param: ParamName::Alpha1,
        value: 1,
        justification: "listed second automorphism collapses to I while Der is one-dimensional",
    },
];

/// The quarantine entry covering this cell, if any.
pub fn quarantined(fam: FamilyId, params: &ParamVector) -> Option<&'static Quarantine> {
    QUARANTINE.iter().find(|q| {
        q.family == fam
            && params
                .get(q.param)
                .is_some_and(|v| *v == v.spec().from_i64(q.value))
    })
}

/// Parameter change relating a cell to its isomorphic twin (`β₁ ↦ −β₁` in
/// families 2 and 6).
pub fn twin(fam: FamilyId, params: &ParamVector) -> Option<ParamVector> {
    if !matches!(fam.index, 2 | 6) {
        return None;
    }
    let b1 = params.get(ParamName::Beta1)?;
    Some(params.with(ParamName::Beta1, -b1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sampling {
    Exhaustive,
    Random { n: usize, seed: u64 },
    /// Exhaustive when there are at most [`EXHAUSTIVE_LIMIT`] tuples,
    /// otherwise `n` seeded samples.
    Auto { n: usize, seed: u64 },
}

fn tuple_count(q: u64, arity: usize) -> u128 {
    (q as u128).saturating_pow(arity as u32)
}

/// Deterministic parameter tuples for a family over a field.
pub fn param_sampler(fam: FamilyId, spec: FieldSpec, mode: Sampling) -> Result<Vec<ParamVector>> {
    if !fam.class.admits(spec) {
        return Err(Error::CharMismatch { family: fam.to_string(), field: spec });
    }
    let arity = fam.arity();
    let mode = match mode {
        Sampling::Auto { n, seed } => match spec.order() {
            Some(q) if tuple_count(q, arity) <= EXHAUSTIVE_LIMIT => Sampling::Exhaustive,
            _ => Sampling::Random { n, seed },
        },
        m => m,
    };
    match mode {
        Sampling::Exhaustive => {
            let q = spec.order().ok_or(Error::InfiniteField(spec))?;
            let tuples = tuple_count(q, arity);
            if tuples > EXHAUSTIVE_BUDGET as u128 {
                return Err(Error::SamplingBudget { tuples, budget: EXHAUSTIVE_BUDGET });
            }
            let elems = spec.enumerate()?;
            let mut out = Vec::with_capacity(tuples as usize);
            for mut k in 0..tuples as u64 {
                let mut vals = vec![spec.zero(); arity];
                for slot in vals.iter_mut().rev() {
                    *slot = elems[(k % q) as usize].clone();
                    k /= q;
                }
                out.push(ParamVector::for_family(fam, vals)?);
            }
            Ok(out)
        }
        Sampling::Random { .. } if arity == 0 => Ok(vec![ParamVector::empty()]),
        Sampling::Random { n, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n)
                .map(|_| {
                    let vals = (0..arity).map(|_| spec.random_element(&mut rng)).collect();
                    ParamVector::for_family(fam, vals)
                })
                .collect()
        }
        Sampling::Auto { .. } => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u64) -> FieldSpec {
        FieldSpec::gf(q).unwrap()
    }

    fn fam(i: u8, c: CharClass) -> FamilyId {
        FamilyId::new(i, c).unwrap()
    }

    #[test]
    fn build_examples() {
        let n = CharClass::NotTwoThree;
        let a9 = build(fam(9, n), &ParamVector::empty(), gf(5)).unwrap();
        assert_eq!(a9.canonical(), "MSC(GF(5); [[2,0,0,0],[1,4,3,0]])");
        let a12 = build(fam(12, CharClass::Three), &ParamVector::empty(), gf(3)).unwrap();
        assert_eq!(a12.canonical(), "MSC(GF(3); [[0,0,0,0],[1,0,0,0]])");
        assert!(matches!(
            build(fam(9, n), &ParamVector::empty(), gf(3)),
            Err(Error::CharMismatch { .. })
        ));
    }

    #[test]
    fn corrected_a3_char2() {
        let f = gf(4);
        let t = f.root().unwrap();
        let p = ParamVector::for_family(fam(3, CharClass::Two), vec![t.clone(), f.one()]).unwrap();
        let a = build(fam(3, CharClass::Two), &p, f).unwrap();
        let expect = Mat::from_rows(
            f,
            vec![
                vec![t.clone(), f.one(), f.one(), f.zero()],
                vec![f.zero(), f.one(), &f.one() - &t, f.one()],
            ],
        )
        .unwrap();
        assert_eq!(a.matrix(), &expect);
    }

    #[test]
    fn a1_shape_is_shared() {
        for (c, f) in [(CharClass::NotTwoThree, gf(5)), (CharClass::Two, gf(2)), (CharClass::Three, gf(3))] {
            let p = ParamVector::from_i64(fam(1, c), f, &[1, 1, 0, 1]).unwrap();
            let a = build(fam(1, c), &p, f).unwrap();
            let e = Msc::from_i64(f, [1, 1, 2, 0], [1, -1, 0, -1]).unwrap();
            assert_eq!(a, e);
        }
    }

    #[test]
    fn arity_errors() {
        let f = gf(5);
        let a4 = fam(4, CharClass::NotTwoThree);
        assert!(matches!(ParamVector::from_i64(a4, f, &[1]), Err(Error::Arity { expected: 2, got: 1, .. })));
        let wrong = ParamVector::from_i64(fam(8, CharClass::NotTwoThree), f, &[1]).unwrap();
        assert!(matches!(build(a4, &wrong, f), Err(Error::Arity { .. })));
    }

    #[test]
    fn expected_examples() {
        let f = gf(5);
        let n = CharClass::NotTwoThree;
        let p = ParamVector::from_i64(fam(1, n), f, &[0, 0, 0, 0]).unwrap();
        assert_eq!(expected_aut(fam(1, n), &p, f).unwrap().shape(), &GroupShape::Trivial);

        let q3 = FieldSpec::quad_rationals(3).unwrap();
        let d = expected_aut(fam(11, n), &ParamVector::empty(), q3).unwrap();
        let GroupShape::FiniteList(list) = d.shape() else { panic!() };
        assert_eq!(list.len(), 6);
        let half = q3.ratio(1, 2).unwrap();
        let s = &q3.root().unwrap() * &half;
        let g = GL2Element::new(half.clone(), s.clone(), s, -&half).unwrap();
        assert!(list.contains(&g));

        let a5 = expected_aut(fam(11, n), &ParamVector::empty(), f).unwrap();
        assert_eq!(a5.rational_points().unwrap().len(), 2);
        assert_eq!(a5.omissions().len(), 1);

        let d = expected_aut(fam(12, CharClass::Three), &ParamVector::empty(), gf(3)).unwrap();
        assert_eq!(d.shape(), &GroupShape::Parabolic);
        assert_eq!(d.rational_points().unwrap().len(), 6);

        assert_eq!(expected_der(fam(11, n), &ParamVector::empty(), gf(7)).unwrap().dim(), 0);
        let q = FieldSpec::rationals();
        assert_eq!(
            expected_der(fam(12, n), &ParamVector::empty(), q).unwrap(),
            Subspace::span_i64(q, &[[1, 0, 0, 2], [0, 0, 1, 0]])
        );
        assert_eq!(
            expected_der(fam(10, CharClass::Three), &ParamVector::empty(), gf(3)).unwrap(),
            Subspace::span_i64(gf(3), &[E11, E12])
        );
    }

    #[test]
    fn a4_split_at_two_a1_minus_one() {
        let f = gf(7);
        let a4 = fam(4, CharClass::NotTwoThree);
        let on = ParamVector::from_i64(a4, f, &[3, 5]).unwrap();
        let off = ParamVector::from_i64(a4, f, &[3, 4]).unwrap();
        assert_eq!(expected_der(a4, &on, f).unwrap().dim(), 2);
        assert_eq!(expected_der(a4, &off, f).unwrap().dim(), 1);
        assert_eq!(expected_aut(a4, &on, f).unwrap().shape(), &GroupShape::Borel);
    }

    #[test]
    fn sampler_counts() {
        let a8 = fam(8, CharClass::Three);
        assert_eq!(param_sampler(a8, gf(3), Sampling::Exhaustive).unwrap().len(), 3);
        let a1 = fam(1, CharClass::Two);
        assert_eq!(param_sampler(a1, gf(2), Sampling::Exhaustive).unwrap().len(), 16);
        let a12 = fam(12, CharClass::NotTwoThree);
        let one = param_sampler(a12, gf(5), Sampling::Exhaustive).unwrap();
        assert_eq!(one, vec![ParamVector::empty()]);
        let once = param_sampler(a12, gf(25), Sampling::Random { n: 200, seed: 3 }).unwrap();
        assert_eq!(once, vec![ParamVector::empty()]);
        let q = FieldSpec::rationals();
        assert!(matches!(
            param_sampler(fam(4, CharClass::NotTwoThree), q, Sampling::Exhaustive),
            Err(Error::InfiniteField(_))
        ));
        let r1 = param_sampler(a1, gf(2), Sampling::Random { n: 5, seed: 9 }).unwrap();
        let r2 = param_sampler(a1, gf(2), Sampling::Random { n: 5, seed: 9 }).unwrap();
        assert_eq!(r1, r2);
        let auto = Sampling::Auto { n: 200, seed: 1 };
        assert_eq!(param_sampler(fam(1, CharClass::NotTwoThree), gf(11), auto).unwrap().len(), 200);
        assert_eq!(param_sampler(fam(1, CharClass::NotTwoThree), gf(7), auto).unwrap().len(), 2401);
    }

    #[test]
    fn exhaustive_order_is_lexicographic() {
        let a4 = fam(4, CharClass::Two);
        let all = param_sampler(a4, gf(2), Sampling::Exhaustive).unwrap();
        let text: Vec<String> = all.iter().map(|p| p.to_string()).collect();
        assert_eq!(text, ["(a1=0,b2=0)", "(a1=0,b2=1)", "(a1=1,b2=0)", "(a1=1,b2=1)"]);
    }

    #[test]
    fn family_names() {
        assert_eq!(fam(3, CharClass::Two).to_string(), "A3@char2");
        assert_eq!(FamilyId::parse("A3@char2").unwrap(), fam(3, CharClass::Two));
        assert_eq!(FamilyId::parse("A9").unwrap(), fam(9, CharClass::NotTwoThree));
        assert!(FamilyId::parse("A13").is_err());
        assert!(FamilyId::parse("B1").is_err());
        assert!(FamilyId::parse("A1@char5").is_err());
    }

    #[test]
    fn quarantine_lookup() {
        let f = gf(2);
        let a3 = fam(3, CharClass::Two);
        assert!(quarantined(a3, &ParamVector::from_i64(a3, f, &[0, 1]).unwrap()).is_some());
        assert!(quarantined(a3, &ParamVector::from_i64(a3, f, &[0, 0]).unwrap()).is_none());
    }

    #[test]
    fn twins_negate_beta1() {
        let f = gf(5);
        let a2 = fam(2, CharClass::NotTwoThree);
        let p = ParamVector::from_i64(a2, f, &[0, 1, 0]).unwrap();
        assert_eq!(twin(a2, &p).unwrap(), ParamVector::from_i64(a2, f, &[0, -1, 0]).unwrap());
        assert!(twin(fam(4, CharClass::NotTwoThree), &ParamVector::from_i64(fam(4, CharClass::NotTwoThree), f, &[0, 0]).unwrap()).is_none());
    }
}
