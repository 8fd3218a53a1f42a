//! Points of the extended cross-ratio surface.
//!
//! A regular point is a triple of finite positive values with product
//! exactly one (multiplicatively; the logarithms sum to zero).  Three
//! degenerate points complete the surface and are stored as pinned constant
//! patterns, never produced by arithmetic on infinities:
//!
//! ```text
//!   A = (1, inf, 0)    B = (0, 1, inf)    C = (inf, 0, 1)
//! ```
//!
//! The signed coordinate action permutes the three coordinates by
//! `(sigma . v)_j = v_{sigma(j)}` and inverts each coordinate when the sign
//! is minus.

use std::fmt;

use thiserror::Error;

use crate::symmetry::{Perm3, Sign};
use crate::value::Value;

/// The three degenerate points, named by the repeated-pair slot that forces
/// them: a repeated entry in positions {0,1} or {2,3} forces `A`, in
/// {0,2}/{1,3} forces `B`, in {0,3}/{1,2} forces `C`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Degenerate {
    A,
    B,
    C,
}

impl Degenerate {
    pub fn pattern<V: Value>(self) -> [V; 3] {
        match self {
            Degenerate::A => [V::one(), V::infinity(), V::zero()],
            Degenerate::B => [V::zero(), V::one(), V::infinity()],
            Degenerate::C => [V::infinity(), V::zero(), V::one()],
        }
    }

    pub(crate) fn from_slot(slot: usize) -> Degenerate {
        match slot {
            0 => Degenerate::A,
            1 => Degenerate::B,
            2 => Degenerate::C,
            other => panic!("no degenerate point for slot {other}"),
        }
    }

    pub fn all() -> [Degenerate; 3] {
        [Degenerate::A, Degenerate::B, Degenerate::C]
    }
}

impl fmt::Display for Degenerate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degenerate::A => write!(f, "A"),
            Degenerate::B => write!(f, "B"),
            Degenerate::C => write!(f, "C"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum L4Error {
    #[error("coordinates are neither a finite positive product-one triple nor a degenerate pattern")]
    NotOnSurface,
}

/// A point of the extended surface: either regular or one of the three
/// degenerate patterns.  The constructor validates exactly; no tolerance is
/// involved anywhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct L4Point<V: Value> {
    coords: [V; 3],
}

/// Classifies a raw coordinate triple: `Ok(None)` for a regular point,
/// `Ok(Some(d))` for an exact degenerate pattern, `Err` otherwise.
pub fn classify_triple<V: Value>(coords: &[V; 3]) -> Result<Option<Degenerate>, L4Error> {
    if coords.iter().all(Value::is_finite_positive) {
        let product = coords[0]
            .checked_mul(&coords[1])
            .and_then(|p| p.checked_mul(&coords[2]))
            .expect("finite product");
        if product.is_one() {
            return Ok(None);
        }
        return Err(L4Error::NotOnSurface);
    }
    for d in Degenerate::all() {
        if *coords == d.pattern::<V>() {
            return Ok(Some(d));
        }
    }
    Err(L4Error::NotOnSurface)
}

impl<V: Value> L4Point<V> {
    pub fn new(u: V, v: V, w: V) -> Result<Self, L4Error> {
        let coords = [u, v, w];
        classify_triple(&coords)?;
        Ok(L4Point { coords })
    }

    pub fn from_coords(coords: [V; 3]) -> Result<Self, L4Error> {
        classify_triple(&coords)?;
        Ok(L4Point { coords })
    }

    pub fn degenerate(d: Degenerate) -> Self {
        L4Point {
            coords: d.pattern(),
        }
    }

    pub fn classify(&self) -> Option<Degenerate> {
        classify_triple(&self.coords).expect("constructed point is on the surface")
    }

    pub fn is_regular(&self) -> bool {
        self.classify().is_none()
    }

    pub fn coords(&self) -> &[V; 3] {
        &self.coords
    }

    pub fn into_coords(self) -> [V; 3] {
        self.coords
    }

    pub fn u(&self) -> &V {
        &self.coords[0]
    }

    pub fn v(&self) -> &V {
        &self.coords[1]
    }

    pub fn w(&self) -> &V {
        &self.coords[2]
    }

    pub fn log_f64(&self) -> [f64; 3] {
        [
            self.coords[0].log_f64(),
            self.coords[1].log_f64(),
            self.coords[2].log_f64(),
        ]
    }

    /// Applies the signed coordinate action.  On regular points any
    /// combination of permutation and sign is closed.  The degenerate
    /// patterns are only preserved when the sign equals the permutation's
    /// parity — which is the case for every pair arising from a 4-tuple
    /// permutation — so other combinations on a degenerate point are
    /// rejected as a caller bug.
    pub fn signed_permute(&self, sigma: &Perm3, sign: Sign) -> Self {
        if !self.is_regular() {
            assert_eq!(
                sign,
                sigma.sign(),
                "degenerate points are only preserved by parity-consistent signed permutations"
            );
        }
        L4Point {
            coords: signed_permute_triple(sigma, sign, &self.coords),
        }
    }
}

impl<V: Value> fmt::Display for L4Point<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.classify() {
            Some(d) => write!(f, "{d}"),
            None => write!(
                f,
                "({}, {}, {})",
                self.coords[0], self.coords[1], self.coords[2]
            ),
        }
    }
}

/// The signed action on a raw triple, without surface validation.  Used by
/// the axiom checker, which must act on possibly-invalid table entries.
pub fn signed_permute_triple<V: Value>(sigma: &Perm3, sign: Sign, triple: &[V; 3]) -> [V; 3] {
    let mut out = sigma.act_on_triple(triple);
    if sign.is_minus() {
        for c in &mut out {
            *c = c.recip();
        }
    }
    out
}
