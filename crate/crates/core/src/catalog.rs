//! Reference wavelet sets.

use crate::interval::{Interval, IntervalSet};
use crate::scalar::{EpsBinding, Scalar};

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub set: IntervalSet,
    pub note: &'static str,
}

/// `(numerator, denominator)` of a multiple of π.
type Frac = (i64, i64);

fn from_fracs(bounds: &[(Frac, Frac)]) -> IntervalSet {
    let raw = bounds
        .iter()
        .map(|&((a, b), (c, d))| Interval::raw(Scalar::pi_frac(a, b), Scalar::pi_frac(c, d)))
        .collect();
    IntervalSet::normalize(raw, EpsBinding::unbound()).expect("catalog sets are well formed")
}

/// `[−2π, −π) ∪ [π, 2π)`.
pub fn shannon() -> IntervalSet {
    from_fracs(&[((-2, 1), (-1, 1)), ((1, 1), (2, 1))])
}

/// `[−32π/7, −4π) ∪ [−π, −4π/7) ∪ [4π/7, π) ∪ [4π, 32π/7)`.
pub fn journe() -> IntervalSet {
    from_fracs(&[
        ((-32, 7), (-4, 1)),
        ((-1, 1), (-4, 7)),
        ((4, 7), (1, 1)),
        ((4, 1), (32, 7)),
    ])
}

pub fn entries() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "shannon",
            set: shannon(),
            note: "Shannon wavelet set; dimension function identically 1",
        },
        CatalogEntry {
            name: "journe",
            set: journe(),
            note: "Journé wavelet set; dimension function takes the value 2",
        },
    ]
}

pub fn lookup(name: &str) -> Option<CatalogEntry> {
    entries().into_iter().find(|e| e.name == name)
}
