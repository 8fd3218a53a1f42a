//! Tuples of point indices: admissibility and degeneracy.
//!
//! A 4-tuple is admissible when no entry occurs three or four times.  An
//! n-tuple with n > 4 is admissible when every deletion of one entry is
//! admissible — the recurrent rule; [`is_admissible`] implements it
//! literally and the tests check it against the closed form "no entry occurs
//! more than twice".

use crate::l4::Degenerate;
use crate::symmetry::{pair_slot, Perm4};

/// Index of a point within its space's label list.
pub type Point = usize;

/// An ordered 4-tuple of point indices (repetitions allowed).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Tuple4(pub [Point; 4]);

impl Tuple4 {
    pub fn entries(&self) -> &[Point; 4] {
        &self.0
    }

    /// No entry occurs three or four times.
    pub fn is_admissible(&self) -> bool {
        let t = &self.0;
        (0..4).all(|i| t.iter().filter(|&&x| x == t[i]).count() <= 2)
    }

    /// The degenerate point forced by repeated entries, or `None` for a
    /// tuple of four distinct points.  All repeated pairs of an admissible
    /// tuple sit in a single opposite edge-pair slot, which determines the
    /// pattern.
    pub fn degeneracy(&self) -> Option<Degenerate> {
        debug_assert!(self.is_admissible());
        let t = &self.0;
        let mut found = None;
        for i in 0..4 {
            for j in i + 1..4 {
                if t[i] == t[j] {
                    let slot = pair_slot(i, j);
                    debug_assert!(found.is_none() || found == Some(slot));
                    found = Some(slot);
                }
            }
        }
        found.map(Degenerate::from_slot)
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.is_admissible() && self.degeneracy().is_none()
    }

    pub fn sorted(&self) -> [Point; 4] {
        let mut s = self.0;
        s.sort_unstable();
        s
    }

    /// For a tuple of distinct entries: the unique permutation carrying the
    /// sorted representative onto this tuple under the action
    /// `(pi . rep)_j = rep_{pi(j)}`.
    pub fn perm_from_sorted(&self) -> Perm4 {
        debug_assert!(self.is_nondegenerate());
        let rep = self.sorted();
        let mut images = [0usize; 4];
        for j in 0..4 {
            images[j] = rep.iter().position(|&r| r == self.0[j]).unwrap();
        }
        Perm4::new(images).expect("distinct entries yield a permutation")
    }

    pub fn apply(&self, pi: &Perm4) -> Tuple4 {
        Tuple4(pi.act_on_tuple(&self.0))
    }
}

/// The recurrent admissibility rule for tuples of any length >= 4.
pub fn is_admissible(entries: &[Point]) -> bool {
    match entries.len() {
        0..=3 => false,
        4 => Tuple4([entries[0], entries[1], entries[2], entries[3]]).is_admissible(),
        _ => (0..entries.len()).all(|k| {
            let mut deletion = entries.to_vec();
            deletion.remove(k);
            is_admissible(&deletion)
        }),
    }
}

/// All ordered admissible 4-tuples over `0..n`, in lexicographic order.
pub fn admissible_tuples(n: usize) -> Vec<Tuple4> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let t = Tuple4([a, b, c, d]);
                    if t.is_admissible() {
                        out.push(t);
                    }
                }
            }
        }
    }
    out
}

/// All ordered nondegenerate 4-tuples over `0..n`, in lexicographic order.
pub fn nondegenerate_tuples(n: usize) -> Vec<Tuple4> {
    admissible_tuples(n)
        .into_iter()
        .filter(|t| t.degeneracy().is_none())
        .collect()
}

/// All strictly increasing 4-element index combinations over `0..n`: the
/// representative tuples under the permutation action.
pub fn sorted_representatives(n: usize) -> Vec<[Point; 4]> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubles_are_admissible_triples_are_not() {
        assert!(Tuple4([0, 0, 1, 2]).is_admissible());
        assert!(Tuple4([0, 1, 0, 1]).is_admissible());
        assert!(!Tuple4([0, 0, 0, 1]).is_admissible());
        assert!(!Tuple4([2, 2, 2, 2]).is_admissible());
    }

    #[test]
    fn recurrent_rule_examples() {
        // (x, x, alpha, beta, omega) with distinct scale points.
        assert!(is_admissible(&[5, 5, 0, 1, 2]));
        // (alpha, alpha, alpha, beta, omega).
        assert!(!is_admissible(&[0, 0, 0, 1, 2]));
        assert!(is_admissible(&[0, 1, 0, 1, 2]));
        assert!(!is_admissible(&[7, 7, 7, 7, 1, 2]));
    }

    #[test]
    fn recurrent_rule_matches_multiplicity_bound() {
        // Closed-form oracle: admissible iff every entry occurs at most twice.
        fn oracle(entries: &[Point]) -> bool {
            entries
                .iter()
                .all(|x| entries.iter().filter(|&y| y == x).count() <= 2)
        }
        for n in [5usize, 6] {
            let mut stack = vec![Vec::new()];
            while let Some(prefix) = stack.pop() {
                if prefix.len() == n {
                    assert_eq!(is_admissible(&prefix), oracle(&prefix), "{prefix:?}");
                    continue;
                }
                for v in 0..3usize {
                    let mut next = prefix.clone();
                    next.push(v);
                    stack.push(next);
                }
            }
        }
    }

    #[test]
    fn degeneracy_classification() {
        use Degenerate::*;
        assert_eq!(Tuple4([0, 0, 1, 2]).degeneracy(), Some(A));
        assert_eq!(Tuple4([0, 1, 2, 2]).degeneracy(), Some(A));
        assert_eq!(Tuple4([0, 1, 0, 2]).degeneracy(), Some(B));
        assert_eq!(Tuple4([0, 1, 2, 1]).degeneracy(), Some(B));
        assert_eq!(Tuple4([0, 1, 2, 0]).degeneracy(), Some(C));
        assert_eq!(Tuple4([0, 1, 1, 2]).degeneracy(), Some(C));
        // Double pairs sit in a single slot as well.
        assert_eq!(Tuple4([0, 0, 1, 1]).degeneracy(), Some(A));
        assert_eq!(Tuple4([0, 1, 0, 1]).degeneracy(), Some(B));
        assert_eq!(Tuple4([0, 1, 1, 0]).degeneracy(), Some(C));
        assert_eq!(Tuple4([0, 1, 2, 3]).degeneracy(), None);
    }

    #[test]
    fn perm_from_sorted_recovers_tuple() {
        for t in nondegenerate_tuples(5) {
            let pi = t.perm_from_sorted();
            let rep = Tuple4(t.sorted());
            assert_eq!(rep.apply(&pi), t);
        }
    }

    #[test]
    fn enumeration_counts() {
        // 5^4 = 625 tuples minus the 85 with an entry three or four times.
        assert_eq!(admissible_tuples(5).len(), 540);
        assert_eq!(nondegenerate_tuples(5).len(), 120);
        assert_eq!(sorted_representatives(5).len(), 5);
        assert_eq!(sorted_representatives(8).len(), 70);
    }
}
