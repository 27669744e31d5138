//! Exact scalars over ℚ, ℚ(√d), GF(p) and GF(p²).
//!
//! Rational kinds are backed by arbitrary-precision fractions; finite kinds
//! by 64-bit residues with `p < 2^31`, so every product of two residues fits
//! in a `u64` before reduction.
//!
//! GF(p²) is GF(p)[t]/(t² − n) for a quadratic non-residue `n` when `p` is
//! odd. For `p = 2` there is no such `n`, and GF(4) is GF(2)[t]/(t² + t + 1)
//! instead; that field is written `GF(2^2,1)`.
//!
//! Finite elements have a canonical integer encoding: `a + b·p` for `a + b·t`.
//! Enumeration and square-root tie-breaking both follow that encoding.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::text::Cursor;

const MAX_PRIME: u64 = 1 << 31;

/// The four supported field kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rationals,
    /// ℚ(√d) with `d` squarefree and `d ∉ {0, 1}`.
    QuadRationals { d: i64 },
    PrimeField { p: u64 },
    /// GF(p²) = GF(p)[t]/(t² − n); for `p = 2`, `n = 1` and t² = t + 1.
    QuadExtField { p: u64, n: u64 },
}

/// A validated field description. Construct through [`FieldSpec::prime`],
/// [`FieldSpec::quad_ext`], [`FieldSpec::quad_rationals`] or
/// [`FieldSpec::rationals`]; parse with [`FromStr`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    kind: FieldKind,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

fn is_squarefree(d: i64) -> bool {
    let d = d.unsigned_abs();
    let mut k: u64 = 2;
    while k * k <= d {
        if d.is_multiple_of(k * k) {
            return false;
        }
        k += 1;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Smallest quadratic non-residue modulo an odd prime `p`; `None` for `p = 2`
/// (and for non-primes).
pub fn smallest_nonresidue(p: u64) -> Option<u64> {
    if p == 2 || !is_prime(p) || p >= MAX_PRIME {
        return None;
    }
    (2..p).find(|&n| pow_mod(n, (p - 1) / 2, p) == p - 1)
}

impl FieldSpec {
    pub fn rationals() -> Self {
        FieldSpec {
            kind: FieldKind::Rationals,
        }
    }

    pub fn quad_rationals(d: i64) -> Result<Self> {
        if d == 0 || d == 1 || !is_squarefree(d) {
            return Err(Error::InvalidField(format!(
                "Q(sqrt {d}): d must be squarefree and not 0 or 1"
            )));
        }
        Ok(FieldSpec {
            kind: FieldKind::QuadRationals { d },
        })
    }

    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) || p >= MAX_PRIME {
            return Err(Error::InvalidField(format!(
                "GF({p}): p must be a prime below 2^31"
            )));
        }
        Ok(FieldSpec {
            kind: FieldKind::PrimeField { p },
        })
    }

    pub fn quad_ext(p: u64, n: u64) -> Result<Self> {
        if !is_prime(p) || p >= MAX_PRIME {
            return Err(Error::InvalidField(format!(
                "GF({p}^2,{n}): p must be a prime below 2^31"
            )));
        }
        if p == 2 {
            if n != 1 {
                return Err(Error::InvalidField(
                    "GF(2^2,N): only N = 1 (t^2 = t + 1) is supported".into(),
                ));
            }
            return Ok(FieldSpec {
                kind: FieldKind::QuadExtField { p, n: 1 },
            });
        }
        let n = n % p;
        if n == 0 || pow_mod(n, (p - 1) / 2, p) != p - 1 {
            return Err(Error::InvalidField(format!(
                "GF({p}^2,{n}): {n} is not a quadratic non-residue mod {p}"
            )));
        }
        Ok(FieldSpec {
            kind: FieldKind::QuadExtField { p, n },
        })
    }

    /// GF(q) for a prime or a prime square, using the smallest non-residue
    /// for the extension.
    pub fn gf(q: u64) -> Result<Self> {
        if is_prime(q) {
            return Self::prime(q);
        }
        let p = q.sqrt();
        if p * p == q && is_prime(p) {
            return Self::quad_ext(p, smallest_nonresidue(p).unwrap_or(1));
        }
        Err(Error::InvalidField(format!(
            "GF({q}): only prime and prime-square orders are supported"
        )))
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn characteristic(&self) -> u64 {
        match self.kind {
            FieldKind::Rationals | FieldKind::QuadRationals { .. } => 0,
            FieldKind::PrimeField { p } | FieldKind::QuadExtField { p, .. } => p,
        }
    }

    /// Number of elements, `None` for the infinite kinds.
    pub fn order(&self) -> Option<u64> {
        match self.kind {
            FieldKind::PrimeField { p } => Some(p),
            FieldKind::QuadExtField { p, .. } => Some(p * p),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    pub fn zero(&self) -> FieldElement {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> FieldElement {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(&self, v: &BigInt) -> FieldElement {
        let repr = match self.kind {
            FieldKind::Rationals => Repr::Rat(BigRational::from_integer(v.clone())),
            FieldKind::QuadRationals { .. } => {
                Repr::QuadRat(BigRational::from_integer(v.clone()), BigRational::zero())
            }
            FieldKind::PrimeField { p } => Repr::Res(reduce_bigint(v, p)),
            FieldKind::QuadExtField { p, .. } => Repr::QuadRes(reduce_bigint(v, p), 0),
        };
        FieldElement { spec: *self, repr }
    }

    /// `num / den` evaluated in the field.
    pub fn ratio(&self, num: i64, den: i64) -> Result<FieldElement> {
        self.from_i64(num).checked_div(&self.from_i64(den))
    }

    fn lift_rational(&self, r: &BigRational) -> Result<FieldElement> {
        self.from_bigint(r.numer())
            .checked_div(&self.from_bigint(r.denom()))
    }

    /// The adjoined root `r` (√d or t); `None` for ℚ and GF(p).
    pub fn root(&self) -> Option<FieldElement> {
        let repr = match self.kind {
            FieldKind::QuadRationals { .. } => {
                Repr::QuadRat(BigRational::zero(), BigRational::one())
            }
            FieldKind::QuadExtField { .. } => Repr::QuadRes(0, 1),
            _ => return None,
        };
        Some(FieldElement { spec: *self, repr })
    }

    /// Element with the given canonical encoding (`a + b·p` for `a + b·t`).
    pub fn from_encoding(&self, code: u64) -> Result<FieldElement> {
        let q = self.order().ok_or(Error::InfiniteField(*self))?;
        if code >= q {
            return Err(Error::InvalidField(format!(
                "encoding {code} out of range for {self}"
            )));
        }
        let repr = match self.kind {
            FieldKind::PrimeField { .. } => Repr::Res(code),
            FieldKind::QuadExtField { p, .. } => Repr::QuadRes(code % p, code / p),
            _ => unreachable!(),
        };
        Ok(FieldElement { spec: *self, repr })
    }

    /// All elements in ascending canonical encoding.
    pub fn enumerate(&self) -> Result<Vec<FieldElement>> {
        let q = self.order().ok_or(Error::InfiniteField(*self))?;
        (0..q).map(|code| self.from_encoding(code)).collect()
    }

    /// Uniform element for finite fields; small fractions `n/m` with
    /// `|n| ≤ 9`, `1 ≤ m ≤ 4` (in each component) for the rational kinds.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        if let Some(q) = self.order() {
            return self.from_encoding(rng.gen_range(0..q)).expect("in range");
        }
        let mut frac = || {
            let n = BigInt::from(rng.gen_range(-9i64..=9));
            let d = BigInt::from(rng.gen_range(1i64..=4));
            BigRational::new(n, d)
        };
        let repr = match self.kind {
            FieldKind::Rationals => Repr::Rat(frac()),
            FieldKind::QuadRationals { .. } => {
                let a = frac();
                Repr::QuadRat(a, frac())
            }
            _ => unreachable!(),
        };
        FieldElement { spec: *self, repr }
    }

    /// Uniform non-zero element (finite) or a random non-zero small fraction.
    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        loop {
            let x = self.random_element(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// Parses an element literal: `a`, `a/b`, `a+b*r` (whitespace-insensitive).
    pub fn parse_element(&self, text: &str) -> Result<FieldElement> {
        let mut cur = Cursor::new(text);
        let e = self.parse_element_at(&mut cur)?;
        cur.finish()?;
        Ok(e)
    }

    pub(crate) fn parse_element_at(&self, cur: &mut Cursor<'_>) -> Result<FieldElement> {
        let start = cur.pos();
        let mut acc = self.zero();
        let mut first = true;
        loop {
            let negative = if cur.eat('-') {
                true
            } else if cur.eat('+') || first {
                false
            } else {
                break;
            };
            first = false;
            let term_at = cur.pos();
            let term = if cur.eat('r') {
                self.root()
                    .ok_or_else(|| Error::parse(term_at, format!("{self} has no adjoined root")))?
            } else {
                let num = cur.natural()?;
                let mut value = BigRational::from_integer(num);
                if cur.eat('/') {
                    let den_at = cur.pos();
                    let den = cur.natural()?;
                    if den.is_zero() {
                        return Err(Error::parse(den_at, "zero denominator"));
                    }
                    value /= BigRational::from_integer(den);
                }
                let scalar = self
                    .lift_rational(&value)
                    .map_err(|e| Error::parse(term_at, e.to_string()))?;
                if cur.eat('*') {
                    let root_at = cur.pos();
                    cur.expect('r')?;
                    let r = self.root().ok_or_else(|| {
                        Error::parse(root_at, format!("{self} has no adjoined root"))
                    })?;
                    &scalar * &r
                } else {
                    scalar
                }
            };
            acc = if negative { &acc - &term } else { &acc + &term };
            match cur.peek() {
                Some('+') | Some('-') => continue,
                _ => break,
            }
        }
        if first {
            return Err(Error::parse(start, "expected a field element"));
        }
        Ok(acc)
    }
}

fn reduce_bigint(v: &BigInt, p: u64) -> u64 {
    v.mod_floor(&BigInt::from(p))
        .to_u64()
        .expect("residue below p")
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::QuadRationals { d } => write!(f, "Q(sqrt {d})"),
            FieldKind::PrimeField { p } => write!(f, "GF({p})"),
            FieldKind::QuadExtField { p, n } => write!(f, "GF({p}^2,{n})"),
        }
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut cur = Cursor::new(s);
        let spec = parse_spec_at(&mut cur)?;
        cur.finish()?;
        Ok(spec)
    }
}

/// `Q` | `Q(sqrt D)` | `GF(P)` | `GF(P^2,N)`; `GF(q)` with `q = p²` is also
/// accepted and resolves to the smallest non-residue.
pub(crate) fn parse_spec_at(cur: &mut Cursor<'_>) -> Result<FieldSpec> {
    let start = cur.pos();
    let wrap = |e: Error| match e {
        Error::InvalidField(m) => Error::parse(start, m),
        other => other,
    };
    if cur.eat_word("GF") {
        cur.expect('(')?;
        let at = cur.pos();
        let p = cur.natural()?;
        let p = p
            .to_u64()
            .ok_or_else(|| Error::parse(at, "field order out of range"))?;
        let spec = if cur.eat('^') {
            let exp_at = cur.pos();
            let e = cur.natural()?;
            if e != BigInt::from(2) {
                return Err(Error::parse(exp_at, "only GF(P^2,N) extensions are supported"));
            }
            cur.expect(',')?;
            let n = cur.natural()?;
            let n = n
                .to_u64()
                .ok_or_else(|| Error::parse(at, "non-residue out of range"))?;
            FieldSpec::quad_ext(p, n).map_err(wrap)?
        } else {
            FieldSpec::gf(p).map_err(wrap)?
        };
        cur.expect(')')?;
        Ok(spec)
    } else if cur.eat_word("Q") {
        if cur.eat('(') {
            cur.expect_word("sqrt")?;
            let d = cur.small_integer()?;
            cur.expect(')')?;
            FieldSpec::quad_rationals(d).map_err(wrap)
        } else {
            Ok(FieldSpec::rationals())
        }
    } else {
        Err(cur.error("expected a field: Q, Q(sqrt D), GF(P) or GF(P^2,N)"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Rat(BigRational),
    QuadRat(BigRational, BigRational),
    Res(u64),
    QuadRes(u64, u64),
}

/// Arithmetic operations accepted by [`arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Neg,
}

/// An exact field element tagged with its field. Equality is equality of
/// canonical representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    spec: FieldSpec,
    repr: Repr,
}

/// Checked binary arithmetic; for [`ArithOp::Neg`] `y` is ignored.
pub fn arith(op: ArithOp, x: &FieldElement, y: &FieldElement) -> Result<FieldElement> {
    match op {
        ArithOp::Add => x.checked_add(y),
        ArithOp::Sub => x.checked_sub(y),
        ArithOp::Mul => x.checked_mul(y),
        ArithOp::Neg => Ok(-x),
    }
}

impl FieldElement {
    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Rat(a) => a.is_zero(),
            Repr::QuadRat(a, b) => a.is_zero() && b.is_zero(),
            Repr::Res(a) => *a == 0,
            Repr::QuadRes(a, b) => *a == 0 && *b == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Rat(a) => a.is_one(),
            Repr::QuadRat(a, b) => a.is_one() && b.is_zero(),
            Repr::Res(a) => *a == 1,
            Repr::QuadRes(a, b) => *a == 1 && *b == 0,
        }
    }

    /// Canonical integer encoding for finite fields.
    pub fn encoding(&self) -> Option<u64> {
        match (&self.repr, self.spec.kind) {
            (Repr::Res(a), _) => Some(*a),
            (Repr::QuadRes(a, b), FieldKind::QuadExtField { p, .. }) => Some(a + b * p),
            _ => None,
        }
    }

    fn check(&self, other: &FieldElement) -> Result<()> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(Error::SpecMismatch {
                left: self.spec,
                right: other.spec,
            })
        }
    }

    pub fn checked_add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self.add_unchecked(&other.neg_ref()))
    }

    pub fn checked_mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn checked_div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    fn add_unchecked(&self, other: &FieldElement) -> FieldElement {
        let repr = match (&self.repr, &other.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => Repr::Rat(a + b),
            (Repr::QuadRat(a, b), Repr::QuadRat(c, d)) => Repr::QuadRat(a + c, b + d),
            (Repr::Res(a), Repr::Res(b)) => {
                let p = self.spec.characteristic();
                Repr::Res((a + b) % p)
            }
            (Repr::QuadRes(a, b), Repr::QuadRes(c, d)) => {
                let p = self.spec.characteristic();
                Repr::QuadRes((a + c) % p, (b + d) % p)
            }
            _ => unreachable!("representation follows spec"),
        };
        FieldElement {
            spec: self.spec,
            repr,
        }
    }

    fn mul_unchecked(&self, other: &FieldElement) -> FieldElement {
        let repr = match (&self.repr, &other.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => Repr::Rat(a * b),
            (Repr::QuadRat(a, b), Repr::QuadRat(c, e)) => {
                let FieldKind::QuadRationals { d } = self.spec.kind else {
                    unreachable!()
                };
                let d = BigRational::from_integer(BigInt::from(d));
                Repr::QuadRat(a * c + b * e * d, a * e + b * c)
            }
            (Repr::Res(a), Repr::Res(b)) => {
                let p = self.spec.characteristic();
                Repr::Res(a * b % p)
            }
            (Repr::QuadRes(a, b), Repr::QuadRes(c, d)) => {
                let FieldKind::QuadExtField { p, n } = self.spec.kind else {
                    unreachable!()
                };
                let bd = b * d % p;
                if p == 2 {
                    // t² = t + 1
                    Repr::QuadRes((a * c + bd) % p, (a * d + b * c + bd) % p)
                } else {
                    Repr::QuadRes((a * c + bd * n) % p, (a * d + b * c) % p)
                }
            }
            _ => unreachable!("representation follows spec"),
        };
        FieldElement {
            spec: self.spec,
            repr,
        }
    }

    fn neg_ref(&self) -> FieldElement {
        let neg_res = |a: u64, p: u64| if a == 0 { 0 } else { p - a };
        let repr = match &self.repr {
            Repr::Rat(a) => Repr::Rat(-a),
            Repr::QuadRat(a, b) => Repr::QuadRat(-a, -b),
            Repr::Res(a) => Repr::Res(neg_res(*a, self.spec.characteristic())),
            Repr::QuadRes(a, b) => {
                let p = self.spec.characteristic();
                Repr::QuadRes(neg_res(*a, p), neg_res(*b, p))
            }
        };
        FieldElement {
            spec: self.spec,
            repr,
        }
    }

    pub fn pow(&self, mut exp: u64) -> FieldElement {
        let mut acc = self.spec.one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let repr = match &self.repr {
            Repr::Rat(a) => Repr::Rat(a.recip()),
            Repr::QuadRat(a, b) => {
                let FieldKind::QuadRationals { d } = self.spec.kind else {
                    unreachable!()
                };
                let norm = a * a - b * b * BigRational::from_integer(BigInt::from(d));
                Repr::QuadRat(a / &norm, -(b / &norm))
            }
            Repr::Res(a) => {
                let p = self.spec.characteristic();
                Repr::Res(pow_mod(*a, p - 2, p))
            }
            Repr::QuadRes(..) => {
                let q = self.spec.order().expect("finite");
                return Ok(self.pow(q - 2));
            }
        };
        Ok(FieldElement {
            spec: self.spec,
            repr,
        })
    }

    /// The canonical square root, or `None` when `self` is not a square in
    /// this field. Finite fields return the root with the smaller encoding;
    /// ℚ and ℚ(√d) return the root whose leading non-zero component is
    /// positive.
    pub fn sqrt(&self) -> Option<FieldElement> {
        if self.is_zero() {
            return Some(self.clone());
        }
        match &self.repr {
            Repr::Rat(a) => rat_sqrt(a).map(|r| FieldElement {
                spec: self.spec,
                repr: Repr::Rat(r),
            }),
            Repr::QuadRat(a, b) => {
                let FieldKind::QuadRationals { d } = self.spec.kind else {
                    unreachable!()
                };
                quad_rat_sqrt(a, b, d).map(|(u, v)| FieldElement {
                    spec: self.spec,
                    repr: Repr::QuadRat(u, v),
                })
            }
            Repr::Res(_) | Repr::QuadRes(..) => self.finite_sqrt(),
        }
    }

    /// Euler's criterion in GF(q), q odd: `x^((q−1)/2) = 1`.
    pub fn is_square(&self) -> bool {
        self.sqrt().is_some()
    }

    fn finite_sqrt(&self) -> Option<FieldElement> {
        let q = self.spec.order().expect("finite");
        if q.is_multiple_of(2) {
            // Frobenius is bijective in characteristic 2.
            return Some(self.pow(q / 2));
        }
        let one = self.spec.one();
        if self.pow((q - 1) / 2) != one {
            return None;
        }
        // Tonelli–Shanks on the cyclic group of order q − 1.
        let mut s = 0;
        let mut m = q - 1;
        while m.is_multiple_of(2) {
            m /= 2;
            s += 1;
        }
        let minus_one = -&one;
        let z = (2..q)
            .map(|c| self.spec.from_encoding(c).expect("in range"))
            .find(|z| z.pow((q - 1) / 2) == minus_one)
            .expect("odd finite field has a non-residue");
        let mut c = z.pow(m);
        let mut t = self.pow(m);
        let mut r = self.pow(m.div_ceil(2));
        let mut big_m = s;
        while t != one {
            let mut i = 0;
            let mut t2 = t.clone();
            while t2 != one {
                t2 = &t2 * &t2;
                i += 1;
            }
            let mut b = c.clone();
            for _ in 0..(big_m - i - 1) {
                b = &b * &b;
            }
            big_m = i;
            c = &b * &b;
            t = &t * &c;
            r = &r * &b;
        }
        let other = -&r;
        if other.encoding() < r.encoding() {
            Some(other)
        } else {
            Some(r)
        }
    }
}

fn rat_sqrt(a: &BigRational) -> Option<BigRational> {
    if a.is_negative() {
        return None;
    }
    let n = a.numer().sqrt();
    let d = a.denom().sqrt();
    if &(&n * &n) == a.numer() && &(&d * &d) == a.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

fn quad_rat_sqrt(a: &BigRational, b: &BigRational, d: i64) -> Option<(BigRational, BigRational)> {
    let dd = BigRational::from_integer(BigInt::from(d));
    let two = BigRational::from_integer(BigInt::from(2));
    if b.is_zero() {
        if let Some(u) = rat_sqrt(a) {
            return Some((u, BigRational::zero()));
        }
        return rat_sqrt(&(a / &dd)).map(|v| (BigRational::zero(), v));
    }
    // (u + v√d)² = a + b√d  ⇔  u² + d v² = a, 2uv = b.
    let norm = a * a - b * b * &dd;
    let s = rat_sqrt(&norm)?;
    for u2 in [(a + &s) / &two, (a - &s) / &two] {
        if let Some(u) = rat_sqrt(&u2) {
            if u.is_zero() {
                continue;
            }
            let v = b / (&two * &u);
            if &(&u * &u + &v * &v * &dd) == a {
                return Some((u, v));
            }
        }
    }
    None
}

impl std::ops::Add for &FieldElement {
    type Output = FieldElement;
    /// Panics on mismatched fields; use [`FieldElement::checked_add`] otherwise.
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.checked_add(rhs).expect("field mismatch")
    }
}

impl std::ops::Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.checked_sub(rhs).expect("field mismatch")
    }
}

impl std::ops::Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.checked_mul(rhs).expect("field mismatch")
    }
}

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

impl std::ops::Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fmt_sum(f: &mut fmt::Formatter<'_>, a: String, a_zero: bool, b: String, b_zero: bool) -> fmt::Result {
    match (a_zero, b_zero) {
        (_, true) => write!(f, "{a}"),
        (true, false) => write!(f, "{b}*r"),
        (false, false) => match b.strip_prefix('-') {
            Some(abs) => write!(f, "{a}-{abs}*r"),
            None => write!(f, "{a}+{b}*r"),
        },
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Rat(a) => write!(f, "{}", fmt_rat(a)),
            Repr::QuadRat(a, b) => fmt_sum(f, fmt_rat(a), a.is_zero(), fmt_rat(b), b.is_zero()),
            Repr::Res(a) => write!(f, "{a}"),
            Repr::QuadRes(a, b) => fmt_sum(f, a.to_string(), *a == 0, b.to_string(), *b == 0),
        }
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
