//! Pairs of odd characteristics and the published table of Jacobi's formula.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::chars::{Char2, CharSet, ODD};

/// Unordered pair `{n_i, n_j}` of odd characteristics, stored zero-based with `i < j`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct OddPair {
    pub i: u8,
    pub j: u8,
}

/// Row order of the sum-vector table; also the coordinate order of the gradients map.
const PAIR_ORDER: [(u8, u8); 15] = [
    (0, 1),
    (0, 2),
    (1, 2),
    (0, 3),
    (1, 3),
    (0, 4),
    (1, 4),
    (0, 5),
    (1, 5),
    (2, 3),
    (2, 4),
    (2, 5),
    (3, 4),
    (3, 5),
    (4, 5),
];

impl OddPair {
    pub fn new(a: usize, b: usize) -> OddPair {
        assert!(a < 6 && b < 6 && a != b, "odd pair needs two distinct indices below 6");
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        OddPair { i: i as u8, j: j as u8 }
    }

    /// All 15 pairs in lexicographic order `12, 13, …, 56`.
    pub fn lex() -> impl Iterator<Item = OddPair> {
        (0..6).flat_map(|i| (i + 1..6).map(move |j| OddPair::new(i, j)))
    }

    /// All 15 pairs in the row order of the sum-vector table.
    pub fn ordered() -> impl Iterator<Item = OddPair> {
        PAIR_ORDER.iter().map(|&(i, j)| OddPair { i, j })
    }

    pub fn lex_index(self) -> usize {
        let (i, j) = (self.i as usize, self.j as usize);
        i * (11 - i) / 2 + (j - i - 1)
    }

    pub fn order_index(self) -> usize {
        PAIR_ORDER.iter().position(|&(i, j)| i == self.i && j == self.j).expect("valid pair")
    }

    pub fn from_lex_index(k: usize) -> OddPair {
        OddPair::lex().nth(k).expect("index below 15")
    }

    pub fn chars(self) -> (Char2, Char2) {
        (ODD[self.i as usize], ODD[self.j as usize])
    }

    pub fn contains(self, k: usize) -> bool {
        self.i as usize == k || self.j as usize == k
    }

    /// `S(N) = n_i + n_j`.
    pub fn s_vector(self) -> Char2 {
        let (a, b) = self.chars();
        a + b
    }

    /// The Jacobi quadruple of even characteristics for this pair.
    pub fn quad(self) -> CharSet {
        JACOBI_TABLE[self.lex_index()].quad()
    }
}

impl fmt::Display for OddPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D{}{}", self.i + 1, self.j + 1)
    }
}

impl Serialize for OddPair {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct JacobiEntry {
    /// One-based odd labels.
    pub pair: (usize, usize),
    pub sign: i8,
    /// One-based even labels.
    pub thetas: [usize; 4],
}

impl JacobiEntry {
    pub fn odd_pair(&self) -> OddPair {
        OddPair::new(self.pair.0 - 1, self.pair.1 - 1)
    }
    pub fn quad(&self) -> CharSet {
        CharSet::from_labels(&self.thetas).expect("labels in range")
    }
}

const fn je(a: usize, b: usize, sign: i8, thetas: [usize; 4]) -> JacobiEntry {
    JacobiEntry { pair: (a, b), sign, thetas }
}

/// The published identities `D(n_i, n_j) = ±θθθθ`, in lexicographic pair order.
pub const JACOBI_TABLE: [JacobiEntry; 15] = [
    je(1, 2, 1, [2, 3, 5, 6]),
    je(1, 3, -1, [6, 7, 9, 10]),
    je(1, 4, 1, [1, 4, 5, 9]),
    je(1, 5, -1, [3, 4, 8, 10]),
    je(1, 6, 1, [1, 2, 7, 8]),
    je(2, 3, -1, [1, 4, 6, 8]),
    je(2, 4, -1, [5, 7, 8, 10]),
    je(2, 5, -1, [1, 3, 7, 9]),
    je(2, 6, 1, [2, 4, 9, 10]),
    je(3, 4, 1, [2, 3, 8, 9]),
    je(3, 5, -1, [1, 2, 5, 10]),
    je(3, 6, 1, [3, 4, 5, 7]),
    je(4, 5, -1, [2, 4, 6, 7]),
    je(4, 6, 1, [1, 3, 6, 10]),
    je(5, 6, 1, [5, 6, 8, 9]),
];

/// The pair whose Jacobi quadruple is `q`, if any.
pub fn pair_of_quad(q: CharSet) -> Option<OddPair> {
    JACOBI_TABLE.iter().find(|e| e.quad() == q).map(JacobiEntry::odd_pair)
}

/// Pairs whose published sign disagrees with the evaluated determinant.
pub const JACOBI_ERRATA: [(usize, usize); 1] = [(1, 3)];

/// The sign `s` with `D(N) = s·θθθθ` as evaluated; equal to the published sign except on the errata.
pub fn verified_sign(p: OddPair) -> i8 {
    let e = &JACOBI_TABLE[p.lex_index()];
    if JACOBI_ERRATA.contains(&e.pair) {
        -e.sign
    } else {
        e.sign
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chars::{classify_set, OrbitClass};

    #[test]
    fn indexing_roundtrips() {
        for (k, p) in OddPair::lex().enumerate() {
            assert_eq!(p.lex_index(), k);
            assert_eq!(OddPair::from_lex_index(k), p);
        }
        let t2: Vec<_> = OddPair::ordered().collect();
        assert_eq!(t2.len(), 15);
        for (k, p) in t2.iter().enumerate() {
            assert_eq!(p.order_index(), k);
        }
        assert_eq!(OddPair::new(3, 1), OddPair::new(1, 3));
        assert_eq!(JACOBI_TABLE.iter().map(|e| e.odd_pair()).collect::<Vec<_>>(), OddPair::lex().collect::<Vec<_>>());
    }

    #[test]
    fn sum_vectors_match_published_table() {
        let published: [[u8; 4]; 15] = [
            [1, 1, 1, 1],
            [0, 0, 1, 0],
            [1, 1, 0, 1],
            [1, 1, 1, 0],
            [0, 0, 0, 1],
            [1, 0, 0, 0],
            [0, 1, 1, 1],
            [1, 0, 1, 1],
            [0, 1, 0, 0],
            [1, 1, 0, 0],
            [1, 0, 1, 0],
            [1, 0, 0, 1],
            [0, 1, 1, 0],
            [0, 1, 0, 1],
            [0, 0, 1, 1],
        ];
        for (p, row) in OddPair::ordered().zip(published) {
            let s = p.s_vector();
            assert_eq!([s.mprime()[0], s.mprime()[1], s.mdprime()[0], s.mdprime()[1]], row, "{p}");
            assert_ne!(s, Char2::ZERO);
            let (a, b) = p.chars();
            assert_eq!(b + a, s);
        }
    }

    #[test]
    fn quadruples_are_distinct_minus_quadruples() {
        let mut seen = std::collections::BTreeSet::new();
        for e in &JACOBI_TABLE {
            assert_eq!(classify_set(e.quad()), OrbitClass::C4_MINUS);
            seen.insert(e.quad());
        }
        assert_eq!(seen.len(), 15);
        assert_eq!(OddPair::new(4, 5).quad(), CharSet::from_labels(&[5, 6, 8, 9]).unwrap());
        assert_eq!(pair_of_quad(CharSet::from_labels(&[2, 3, 5, 6]).unwrap()), Some(OddPair::new(0, 1)));
    }
}
