//! Permutations of 4-tuples and of cross-ratio coordinates.
//!
//! A permutation `pi` acts on a tuple by `(pi . P)_j = P_{pi(j)}` — position
//! `j` of the result reads entry `pi(j)` of the input.  The homomorphism
//! [`Perm4::phi`] onto S3 tracks the three opposite edge-pairs of a
//! tetrahedron with ordered vertices: slot 0 is {01,23}, slot 1 is {02,13},
//! slot 2 is {03,12}, and `phi(pi)(k)` is the slot hit by the image of
//! slot `k`.  Both conventions are frozen by the equivariance tests in the
//! cross-ratio module; changing either breaks those tests immediately.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("not a permutation of 0..{expected}: {images:?}")]
    NotAPermutation { expected: usize, images: Vec<usize> },
    #[error("cannot parse permutation from {text:?}")]
    Parse { text: String },
}

/// Sign of a permutation, also the multiplicative sign of a signed
/// coordinate action.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn combine(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+1"),
            Sign::Minus => write!(f, "-1"),
        }
    }
}

fn parity(images: &[usize]) -> Sign {
    let mut inversions = 0;
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            if images[i] > images[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// The slot (0, 1 or 2) of the opposite edge-pair containing the unordered
/// edge `{a, b}` of the tetrahedron on vertices 0..4.
pub(crate) fn pair_slot(a: usize, b: usize) -> usize {
    match (a.min(b), a.max(b)) {
        (0, 1) | (2, 3) => 0,
        (0, 2) | (1, 3) => 1,
        (0, 3) | (1, 2) => 2,
        other => panic!("not a tetrahedron edge: {other:?}"),
    }
}

macro_rules! perm_impl {
    ($name:ident, $n:expr) => {
        impl $name {
            pub fn new(images: [usize; $n]) -> Result<Self, PermError> {
                let mut seen = [false; $n];
                for &i in &images {
                    if i >= $n || seen[i] {
                        return Err(PermError::NotAPermutation {
                            expected: $n,
                            images: images.to_vec(),
                        });
                    }
                    seen[i] = true;
                }
                Ok(Self { images })
            }

            pub fn identity() -> Self {
                let mut images = [0; $n];
                for (j, v) in images.iter_mut().enumerate() {
                    *v = j;
                }
                Self { images }
            }

            pub fn apply(&self, j: usize) -> usize {
                self.images[j]
            }

            pub fn images(&self) -> &[usize; $n] {
                &self.images
            }

            /// Function composition left to right: `(p.then(q))(j) = q(p(j))`.
            /// The tuple action reads positions through the permutation, so
            /// it composes contravariantly: acting by `p` and then by `q` on
            /// a tuple equals acting once by `q.then(p)`.
            pub fn then(&self, next: &Self) -> Self {
                let mut images = [0; $n];
                for j in 0..$n {
                    images[j] = next.images[self.images[j]];
                }
                Self { images }
            }

            pub fn inverse(&self) -> Self {
                let mut images = [0; $n];
                for j in 0..$n {
                    images[self.images[j]] = j;
                }
                Self { images }
            }

            pub fn sign(&self) -> Sign {
                parity(&self.images)
            }
        }

        impl fmt::Display for $name {
            /// One-based digit string, e.g. `2143`.
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                for &i in &self.images {
                    write!(f, "{}", i + 1)?;
                }
                Ok(())
            }
        }

        impl FromStr for $name {
            type Err = PermError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                let digits: Vec<usize> = s
                    .chars()
                    .map(|c| c.to_digit(10).map(|d| d as usize))
                    .collect::<Option<_>>()
                    .ok_or_else(|| PermError::Parse { text: s.to_string() })?;
                if digits.len() != $n || digits.iter().any(|&d| d == 0) {
                    return Err(PermError::Parse { text: s.to_string() });
                }
                let mut images = [0; $n];
                for (j, d) in digits.into_iter().enumerate() {
                    images[j] = d - 1;
                }
                Self::new(images).map_err(|_| PermError::Parse { text: s.to_string() })
            }
        }
    };
}

/// A permutation of four tuple positions, stored by its images.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm4 {
    images: [usize; 4],
}

perm_impl!(Perm4, 4);

/// A permutation of the three cross-ratio coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm3 {
    images: [usize; 3],
}

perm_impl!(Perm3, 3);

impl Perm4 {
    /// All 24 permutations in lexicographic order of their digit strings.
    pub fn all() -> &'static [Perm4] {
        static ALL: OnceLock<Vec<Perm4>> = OnceLock::new();
        ALL.get_or_init(|| {
            let mut out = Vec::with_capacity(24);
            for a in 0..4 {
                for b in 0..4 {
                    for c in 0..4 {
                        for d in 0..4 {
                            if let Ok(p) = Perm4::new([a, b, c, d]) {
                                out.push(p);
                            }
                        }
                    }
                }
            }
            out
        })
    }

    /// `(pi . P)_j = P_{pi(j)}`.
    pub fn act_on_tuple<T: Clone>(&self, tuple: &[T; 4]) -> [T; 4] {
        [
            tuple[self.images[0]].clone(),
            tuple[self.images[1]].clone(),
            tuple[self.images[2]].clone(),
            tuple[self.images[3]].clone(),
        ]
    }

    /// The induced permutation of the three opposite edge-pairs.
    pub fn phi(&self) -> Perm3 {
        let mut images = [0; 3];
        for (slot, edges) in [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]]
            .iter()
            .enumerate()
        {
            let (a, b) = edges[0];
            let target = pair_slot(self.images[a], self.images[b]);
            let (c, d) = edges[1];
            debug_assert_eq!(target, pair_slot(self.images[c], self.images[d]));
            images[slot] = target;
        }
        Perm3 { images }
    }

    /// The kernel of [`Perm4::phi`]: the Klein four-group of double
    /// transpositions together with the identity.
    pub fn kernel() -> [Perm4; 4] {
        [
            "1234".parse().unwrap(),
            "2143".parse().unwrap(),
            "3412".parse().unwrap(),
            "4321".parse().unwrap(),
        ]
    }
}

impl Perm3 {
    /// All 6 permutations in lexicographic order of their digit strings.
    pub fn all() -> &'static [Perm3] {
        static ALL: OnceLock<Vec<Perm3>> = OnceLock::new();
        ALL.get_or_init(|| {
            let mut out = Vec::with_capacity(6);
            for a in 0..3 {
                for b in 0..3 {
                    for c in 0..3 {
                        if let Ok(p) = Perm3::new([a, b, c]) {
                            out.push(p);
                        }
                    }
                }
            }
            out
        })
    }

    /// `(sigma . v)_j = v_{sigma(j)}`.
    pub fn act_on_triple<T: Clone>(&self, triple: &[T; 3]) -> [T; 3] {
        [
            triple[self.images[0]].clone(),
            triple[self.images[1]].clone(),
            triple[self.images[2]].clone(),
        ]
    }
}

/// Sign of a 4-permutation, by one-line notation.
pub fn sign_of(pi: &Perm4) -> Sign {
    pi.sign()
}

/// The edge-pair homomorphism onto S3.
pub fn phi(pi: &Perm4) -> Perm3 {
    pi.phi()
}
