//! Isomorphism search and orbits under `A ↦ gA(g⁻¹ ⊗ g⁻¹)`.

use std::collections::HashSet;

use serde::Serialize;

use crate::automorphisms::{automorphisms_bruteforce, scan};
use crate::error::{Error, Result};
use crate::linalg::{gl2_order, GL2Element, Gl2Enumeration};
use crate::msc::Msc;

/// Default field-order cap for orbit materialization.
pub const ORBIT_CAP: u64 = 7;

/// The first `g` in GL(2, q) enumeration order with `transform(a, g) = b`.
pub fn find_isomorphism(a: &Msc, b: &Msc, cap: u64) -> Result<Option<GL2Element>> {
    if a.spec() != b.spec() {
        return Err(Error::SpecMismatch { left: a.spec(), right: b.spec() });
    }
    let en = Gl2Enumeration::new(a.spec(), cap)?;
    for idx in 0..en.index_len() {
        let [ea, eb, ec, ed] = en.entries_at(idx);
        if (ea * ed) != (eb * ec) && a.intertwines(b, [ea, eb, ec, ed]) {
            return Ok(en.at(idx));
        }
    }
    Ok(None)
}

/// `{transform(a, g) : g ∈ GL(2, q)}` in first-seen order.
pub fn orbit(a: &Msc, cap: u64) -> Result<Vec<Msc>> {
    let en = Gl2Enumeration::new(a.spec(), cap)?;
    let images = scan(&en, |idx| en.at(idx).map(|g| a.transform(&g).expect("same field")));
    let mut seen = HashSet::new();
    Ok(images.into_iter().filter(|m| seen.insert(m.canonical())).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitStabilizer {
    pub orbit: u64,
    pub stabilizer: u64,
    pub group_order: u64,
}

impl OrbitStabilizer {
    pub fn holds(&self) -> bool {
        self.orbit * self.stabilizer == self.group_order
    }
}

/// `|orbit(a)| · |Aut(a)|` against `|GL(2, q)|`.
pub fn orbit_stabilizer_check(a: &Msc, cap: u64) -> Result<OrbitStabilizer> {
    let orbit = orbit(a, cap)?.len() as u64;
    let stabilizer = automorphisms_bruteforce(a, cap)?.len() as u64;
    let q = a.spec().order().ok_or(Error::InfiniteField(a.spec()))?;
    Ok(OrbitStabilizer { orbit, stabilizer, group_order: gl2_order(q) })
}
