use std::sync::OnceLock;

use serde::Serialize;

use super::{in_gamma2, in_gamma24, in_pm_gamma48, SpMatrix};
use crate::chars::{lifted_action, Char2, EVEN, ODD};
use crate::error::{Error, Result};
use crate::jacobi::OddPair;
use crate::linalg::{gf2_rank, gf2_solve};

pub const A11: SpMatrix =
    SpMatrix::from_trusted([[-1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, 1]]);
pub const A12: SpMatrix =
    SpMatrix::from_trusted([[1, 2, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, -2, 1]]);
pub const A21: SpMatrix =
    SpMatrix::from_trusted([[1, 0, 0, 0], [2, 1, 0, 0], [0, 0, 1, -2], [0, 0, 0, 1]]);
pub const B12: SpMatrix =
    SpMatrix::from_trusted([[1, 0, 0, 2], [0, 1, 2, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);
pub const B11_SQ: SpMatrix =
    SpMatrix::from_trusted([[1, 0, 4, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);
pub const B22_SQ: SpMatrix =
    SpMatrix::from_trusted([[1, 0, 0, 0], [0, 1, 0, 4], [0, 0, 1, 0], [0, 0, 0, 1]]);
pub const C12: SpMatrix =
    SpMatrix::from_trusted([[1, 0, 0, 0], [0, 1, 0, 0], [0, 2, 1, 0], [2, 0, 0, 1]]);
pub const C11_SQ: SpMatrix =
    SpMatrix::from_trusted([[1, 0, 0, 0], [0, 1, 0, 0], [4, 0, 1, 0], [0, 0, 0, 1]]);
pub const C22_SQ: SpMatrix =
    SpMatrix::from_trusted([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 4, 0, 1]]);

/// Basis of `G = Γ(2,4)/±Γ(4,8)` in the column order of the character table.
pub const G_BASIS: [SpMatrix; 9] = [A11, A12, A21, B12, B11_SQ, B22_SQ, C12, C11_SQ, C22_SQ];
pub const G_BASIS_NAMES: [&str; 9] =
    ["A11", "A12", "A21", "B12", "B11^2", "B22^2", "C12", "C11^2", "C22^2"];

/// Coordinates of a class of `G` relative to [`G_BASIS`], bit `i` for basis element `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct GVector(u16);

impl GVector {
    pub fn from_bits(bits: u16) -> Option<GVector> {
        (bits < 512).then_some(GVector(bits))
    }
    pub fn from_coords(c: [u8; 9]) -> GVector {
        GVector(c.iter().enumerate().fold(0, |acc, (i, &b)| acc | (u16::from(b & 1) << i)))
    }
    pub fn bits(self) -> u16 {
        self.0
    }
    pub fn coords(self) -> [u8; 9] {
        std::array::from_fn(|i| ((self.0 >> i) & 1) as u8)
    }
    pub fn all() -> impl Iterator<Item = GVector> {
        (0..512).map(GVector)
    }
    /// The product of basis elements selected by the coordinates, in basis order.
    pub fn representative(self) -> SpMatrix {
        (0..9)
            .filter(|i| self.0 >> i & 1 == 1)
            .fold(SpMatrix::identity(), |acc, i| acc * G_BASIS[i])
    }
}

impl std::ops::Add for GVector {
    type Output = GVector;
    fn add(self, o: GVector) -> GVector {
        GVector(self.0 ^ o.0)
    }
}

impl Serialize for GVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords().serialize(s)
    }
}

fn representatives() -> &'static [(GVector, SpMatrix)] {
    static REPS: OnceLock<Vec<(GVector, SpMatrix)>> = OnceLock::new();
    REPS.get_or_init(|| {
        GVector::all().map(|v| (v, v.representative().inverse())).collect()
    })
}

/// The unique class vector `ε` with `γ·(∏ basis^ε)⁻¹ ∈ ±Γ(4,8)`.
pub fn g_coordinates(gamma: &SpMatrix) -> Result<GVector> {
    if !in_gamma24(gamma) {
        return Err(Error::NotInLevel("Gamma(2,4)"));
    }
    representatives()
        .iter()
        .find(|(_, inv)| in_pm_gamma48(&(*gamma * *inv)))
        .map(|(v, _)| *v)
        .ok_or_else(|| Error::Internal(format!("no G-coordinates for {gamma}")))
}

/// `κ²(γ) = i^{Tr(a - 1)}` on `Γ(2)`, returned as the exponent of `i` mod 4.
pub fn kappa_squared_exponent(gamma: &SpMatrix) -> Result<u8> {
    if !in_gamma2(gamma) {
        return Err(Error::NotInLevel("Gamma(2)"));
    }
    let (a, ..) = gamma.blocks();
    Ok((a[0][0] + a[1][1] - 2).rem_euclid(4) as u8)
}

/// `κ²` on `Γ(2,4)`, where it is real.
pub fn kappa_squared(gamma: &SpMatrix) -> Result<i8> {
    if !in_gamma24(gamma) {
        return Err(Error::NotInLevel("Gamma(2,4)"));
    }
    match kappa_squared_exponent(gamma)? {
        0 => Ok(1),
        2 => Ok(-1),
        k => Err(Error::Internal(format!("kappa^2 = i^{k} on Gamma(2,4)"))),
    }
}

fn bilinear(x: [i64; 2], m: &super::Mat2, y: [i64; 2]) -> i64 {
    (0..2).map(|i| (0..2).map(|j| x[i] * m[i][j] * y[j]).sum::<i64>()).sum()
}

fn mat_tmul(x: &super::Mat2, y: &super::Mat2) -> super::Mat2 {
    // xᵀ y
    let mut out = [[0i64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = x[0][i] * y[0][j] + x[1][i] * y[1][j];
        }
    }
    out
}

/// `8·φ_m(γ)` plus four times the sign exponent from reducing the lifted characteristic.
fn chi_eighths(gamma: &SpMatrix, m: Char2) -> i64 {
    let (a, b, c, d) = gamma.blocks();
    let p = m.mprime().map(i64::from);
    let q = m.mdprime().map(i64::from);
    let btd = mat_tmul(&b, &d);
    let atc = mat_tmul(&a, &c);
    let btc = mat_tmul(&b, &c);
    let quad = bilinear(p, &btd, p) + bilinear(q, &atc, q) - 2 * bilinear(p, &btc, q);
    let diag_ab = [a[0][0] * b[0][0] + a[0][1] * b[0][1], a[1][0] * b[1][0] + a[1][1] * b[1][1]];
    let shift: i64 = (0..2)
        .map(|i| diag_ab[i] * (d[i][0] * p[0] + d[i][1] * p[1] - c[i][0] * q[0] - c[i][1] * q[1]))
        .sum();
    let phi8 = -quad - 2 * shift;
    // θ_{m+2n} = (-1)^{m'·n''} θ_m
    let lifted = lifted_action(gamma, m);
    let n2 = [(lifted[2] - q[0]).div_euclid(2), (lifted[3] - q[1]).div_euclid(2)];
    let reduction = p[0] * n2[0] + p[1] * n2[1];
    phi8 + 4 * reduction
}

/// The sign `χ_m(γ)` on `Γ(2,4)`, in exact eighths.
pub fn chi_m(gamma: &SpMatrix, m: Char2) -> Result<i8> {
    if !in_gamma24(gamma) {
        return Err(Error::NotInLevel("Gamma(2,4)"));
    }
    let e = chi_eighths(gamma, m);
    match e.rem_euclid(8) {
        0 => Ok(1),
        4 => Ok(-1),
        _ => Err(Error::NotHalfInteger(e)),
    }
}

pub fn chi_pair(gamma: &SpMatrix, pair: OddPair) -> Result<i8> {
    let (x, y) = pair.chars();
    Ok(chi_m(gamma, x)? * chi_m(gamma, y)?)
}

/// Table of `χ_N` on the basis: rows are odd pairs in lexicographic order, columns basis order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterTable {
    pub rows: Vec<[i8; 9]>,
}

/// The published table, transcribed row by row.
pub const PUBLISHED_TABLE: [[i8; 9]; 15] = [
    [-1, 1, 1, 1, -1, -1, 1, -1, -1],
    [1, 1, -1, 1, 1, 1, -1, -1, 1],
    [-1, -1, 1, 1, -1, -1, -1, -1, 1],
    [1, -1, 1, -1, -1, 1, 1, 1, 1],
    [-1, 1, -1, -1, -1, 1, 1, -1, -1],
    [-1, 1, -1, 1, -1, -1, -1, 1, -1],
    [1, -1, 1, 1, 1, 1, -1, 1, -1],
    [-1, -1, 1, -1, 1, -1, 1, -1, -1],
    [1, 1, -1, -1, 1, -1, 1, 1, 1],
    [-1, -1, -1, 1, -1, -1, 1, 1, 1],
    [1, -1, -1, -1, -1, 1, -1, -1, 1],
    [-1, 1, 1, -1, -1, 1, -1, 1, -1],
    [-1, 1, 1, -1, 1, -1, -1, -1, 1],
    [1, -1, -1, -1, 1, -1, -1, 1, -1],
    [-1, -1, -1, 1, 1, 1, 1, -1, -1],
];

pub fn character_table() -> CharacterTable {
    let rows = OddPair::lex()
        .map(|p| std::array::from_fn(|j| chi_pair(&G_BASIS[j], p).expect("basis lies in Gamma(2,4)")))
        .collect();
    CharacterTable { rows }
}

impl CharacterTable {
    /// Entries differing from the published table, as `(row, column)`.
    pub fn mismatches(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            for j in 0..9 {
                if row[j] != PUBLISHED_TABLE[i][j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn gf2_rank(&self) -> usize {
        gf2_rank(&self.bit_rows())
    }

    fn bit_rows(&self) -> Vec<u64> {
        self.rows
            .iter()
            .map(|r| r.iter().enumerate().fold(0u64, |a, (j, &s)| a | (u64::from(s < 0) << j)))
            .collect()
    }

    /// CSV text with the table's own row and column labels.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("pair");
        for n in G_BASIS_NAMES {
            s.push(',');
            s.push_str(n);
        }
        s.push('\n');
        for (p, row) in OddPair::lex().zip(&self.rows) {
            s.push_str(&format!("chi{}{}", p.i + 1, p.j + 1));
            for v in row {
                s.push_str(&format!(",{v}"));
            }
            s.push('\n');
        }
        s
    }
}

/// A character of `G` as the 9-bit vector of its values on the basis (bit set means -1).
pub fn character_bits<F: Fn(&SpMatrix) -> i8>(f: F) -> u16 {
    G_BASIS.iter().enumerate().fold(0, |a, (j, g)| a | (u16::from(f(g) < 0) << j))
}

#[derive(Clone, Debug, Serialize)]
pub struct KappaWitness {
    /// Zero-based even indices whose `χ_m` multiply to `κ²` on `G`.
    pub even_indices: Vec<usize>,
    /// Whether `∏_{odd n} χ_n` also equals `κ²` on the basis.
    pub odd_product_matches: bool,
}

/// Expresses `κ²` as a product of even `χ_m` by a GF(2) solve on the basis values.
pub fn kappa_witness() -> Option<KappaWitness> {
    let target = character_bits(|g| kappa_squared(g).expect("basis lies in Gamma(2,4)"));
    let rows: Vec<u64> = EVEN
        .iter()
        .map(|&m| u64::from(character_bits(|g| chi_m(g, m).expect("basis lies in Gamma(2,4)"))))
        .collect();
    let comb = gf2_solve(&rows, u64::from(target))?;
    let odd = ODD.iter().fold(0u16, |a, &n| {
        a ^ character_bits(|g| chi_m(g, n).expect("basis lies in Gamma(2,4)"))
    });
    Some(KappaWitness {
        even_indices: (0..10).filter(|i| comb >> i & 1 == 1).collect(),
        odd_product_matches: odd == target,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chars::Char2;
    use crate::sympl::congruence_level;

    #[test]
    fn basis_lies_in_gamma24_but_not_pm_gamma48() {
        for g in G_BASIS {
            assert!(super::super::is_symplectic(g.entries()));
            assert!(congruence_level(&g, 2).unwrap().theta);
            assert!(!in_pm_gamma48(&g));
        }
    }

    #[test]
    fn coordinates_of_examples() {
        assert_eq!(g_coordinates(&SpMatrix::identity()).unwrap(), GVector::default());
        assert_eq!(g_coordinates(&A11).unwrap().coords(), [1, 0, 0, 0, 0, 0, 0, 0, 0]);
        let first = A12 * B11_SQ * C22_SQ;
        assert_eq!(g_coordinates(&first).unwrap().coords(), [0, 1, 0, 0, 1, 0, 0, 0, 1]);
        assert!(g_coordinates(&SpMatrix::j()).is_err());
    }

    #[test]
    fn every_class_decodes_to_itself() {
        for v in GVector::all() {
            assert_eq!(g_coordinates(&v.representative()).unwrap(), v);
        }
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa_squared(&SpMatrix::identity()).unwrap(), 1);
        assert_eq!(kappa_squared(&A11).unwrap(), -1);
        assert_eq!(kappa_squared(&B11_SQ).unwrap(), 1);
        assert_eq!(kappa_squared(&SpMatrix::minus_identity()).unwrap(), 1);
        assert!(kappa_squared_exponent(&SpMatrix::j()).is_err());
    }

    #[test]
    fn chi_examples() {
        for m in Char2::all() {
            assert_eq!(chi_m(&SpMatrix::identity(), m).unwrap(), 1);
            let e = if m.mprime()[0] == 1 { -1 } else { 1 };
            assert_eq!(chi_m(&B11_SQ, m).unwrap(), e);
            let expected = if m.is_even() { 1 } else { -1 };
            assert_eq!(chi_m(&SpMatrix::minus_identity(), m).unwrap(), expected);
        }
        let n12 = OddPair::new(0, 1);
        assert_eq!(chi_pair(&A11, n12).unwrap(), -1);
        assert_eq!(chi_pair(&C12, n12).unwrap(), 1);
        assert!(chi_m(&SpMatrix::j(), EVEN[0]).is_err());
    }

    #[test]
    fn chi_matches_basis_value_formulas() {
        // Sign formulas on basis elements, the C_ij one read as m_i'' m_j''.
        for m in Char2::all() {
            let p = m.mprime();
            let q = m.mdprime();
            let s = |e: u8| if e % 2 == 0 { 1 } else { -1 };
            assert_eq!(chi_m(&A11, m).unwrap(), s(p[0] * q[0]));
            assert_eq!(chi_m(&A12, m).unwrap(), s(p[0] * q[1]));
            assert_eq!(chi_m(&A21, m).unwrap(), s(p[1] * q[0]));
            assert_eq!(chi_m(&B12, m).unwrap(), s(p[0] * p[1]));
            assert_eq!(chi_m(&B22_SQ, m).unwrap(), s(p[1]));
            assert_eq!(chi_m(&C12, m).unwrap(), s(q[0] * q[1]));
            assert_eq!(chi_m(&C11_SQ, m).unwrap(), s(q[0]));
            assert_eq!(chi_m(&C22_SQ, m).unwrap(), s(q[1]));
        }
    }

    #[test]
    fn table_equals_published() {
        let t = character_table();
        assert!(t.mismatches().is_empty(), "{:?}", t.mismatches());
        assert_eq!(t.rows[14], [-1, -1, -1, 1, 1, 1, 1, -1, -1]);
        assert_eq!(t.rows[6], [1, -1, 1, 1, 1, 1, -1, 1, -1]);
        // Independent oracle: the span has 2^rank elements.
        let rows = t.bit_rows();
        let mut span = std::collections::BTreeSet::new();
        for pick in 0u32..(1 << 15) {
            span.insert((0..15).filter(|i| pick >> i & 1 == 1).fold(0u64, |a, i| a ^ rows[i]));
        }
        assert_eq!(span.len(), 1 << t.gf2_rank());
        assert!(t.to_csv().starts_with("pair,A11,A12"));
    }

    #[test]
    fn kappa_lies_in_span_of_characters() {
        let w = kappa_witness().expect("kappa^2 is a product of chi_m");
        assert!(w.odd_product_matches);
        let prod = w.even_indices.iter().fold(0u16, |a, &i| {
            a ^ character_bits(|g| chi_m(g, EVEN[i]).unwrap())
        });
        assert_eq!(prod, character_bits(|g| kappa_squared(g).unwrap()));
    }
}
