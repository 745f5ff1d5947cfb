//! Integer symplectic 4x4 matrices and the level structures built from them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

mod characters;
mod group;
pub mod random;

pub use characters::*;
pub use group::*;

pub type Mat2 = [[i64; 2]; 2];
pub type Mat4 = [[i64; 4]; 4];

const J4: Mat4 = [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]];

fn mul4(x: &Mat4, y: &Mat4) -> Mat4 {
    let mut out = [[0i64; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| x[i][k] * y[k][j]).sum();
        }
    }
    out
}

fn transpose4(x: &Mat4) -> Mat4 {
    let mut out = [[0i64; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = x[j][i];
        }
    }
    out
}

/// True iff `Mᵀ J M = J` exactly.
pub fn is_symplectic(m: &Mat4) -> bool {
    mul4(&transpose4(m), &mul4(&J4, m)) == J4
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpMatrix(Mat4);

impl SpMatrix {
    pub fn new(entries: Mat4) -> Result<SpMatrix> {
        if is_symplectic(&entries) {
            Ok(SpMatrix(entries))
        } else {
            Err(Error::NotSymplectic)
        }
    }

    pub(crate) const fn from_trusted(entries: Mat4) -> SpMatrix {
        SpMatrix(entries)
    }

    pub const fn identity() -> SpMatrix {
        SpMatrix([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    }

    pub const fn j() -> SpMatrix {
        SpMatrix(J4)
    }

    pub fn minus_identity() -> SpMatrix {
        -SpMatrix::identity()
    }

    /// `[[1, s], [0, 1]]` for a symmetric integer `s`.
    pub fn translation(s: Mat2) -> SpMatrix {
        assert_eq!(s[0][1], s[1][0], "translation needs a symmetric block");
        SpMatrix::from_blocks(IDENTITY2, s, ZERO2, IDENTITY2)
    }

    /// `diag(u, u^-T)` for `u` in GL(2, Z).
    pub fn gl_embedding(u: Mat2) -> SpMatrix {
        let det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
        assert!(det == 1 || det == -1, "embedding needs a unimodular block");
        // (u^-1)^T = adj(u)^T / det
        let inv_t = [[u[1][1] * det, -u[1][0] * det], [-u[0][1] * det, u[0][0] * det]];
        SpMatrix::from_blocks(u, ZERO2, ZERO2, inv_t)
    }

    pub fn from_blocks(a: Mat2, b: Mat2, c: Mat2, d: Mat2) -> SpMatrix {
        let mut m = [[0i64; 4]; 4];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = a[i][j];
                m[i][j + 2] = b[i][j];
                m[i + 2][j] = c[i][j];
                m[i + 2][j + 2] = d[i][j];
            }
        }
        SpMatrix(m)
    }

    pub fn entries(&self) -> &Mat4 {
        &self.0
    }

    pub fn blocks(&self) -> (Mat2, Mat2, Mat2, Mat2) {
        let m = &self.0;
        let blk = |r: usize, c: usize| [[m[r][c], m[r][c + 1]], [m[r + 1][c], m[r + 1][c + 1]]];
        (blk(0, 0), blk(0, 2), blk(2, 0), blk(2, 2))
    }

    /// Inverse via `M⁻¹ = -J Mᵀ J`.
    pub fn inverse(&self) -> SpMatrix {
        let t = mul4(&J4, &mul4(&transpose4(&self.0), &J4));
        SpMatrix(t.map(|r| r.map(|x| -x)))
    }

    pub fn transpose(&self) -> SpMatrix {
        SpMatrix(transpose4(&self.0))
    }

    pub fn pow(&self, n: u32) -> SpMatrix {
        (0..n).fold(SpMatrix::identity(), |acc, _| acc * *self)
    }

    pub fn is_identity(&self) -> bool {
        *self == SpMatrix::identity()
    }

    pub fn max_abs_entry(&self) -> i64 {
        self.0.iter().flatten().map(|x| x.abs()).max().unwrap_or(0)
    }
}

pub(crate) const IDENTITY2: Mat2 = [[1, 0], [0, 1]];
pub(crate) const ZERO2: Mat2 = [[0, 0], [0, 0]];

impl std::ops::Mul for SpMatrix {
    type Output = SpMatrix;
    fn mul(self, rhs: SpMatrix) -> SpMatrix {
        SpMatrix(mul4(&self.0, &rhs.0))
    }
}

impl std::ops::Neg for SpMatrix {
    type Output = SpMatrix;
    fn neg(self) -> SpMatrix {
        SpMatrix(self.0.map(|r| r.map(|x| -x)))
    }
}

impl fmt::Debug for SpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SpMatrix({self})")
    }
}

impl fmt::Display for SpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().flatten().map(|x| x.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Parses 16 integers, row-major, separated by whitespace or commas.
impl FromStr for SpMatrix {
    type Err = Error;
    fn from_str(s: &str) -> Result<SpMatrix> {
        let vals: Vec<i64> = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<i64>().map_err(|_| Error::Parse(format!("bad integer {t:?}"))))
            .collect::<Result<_>>()?;
        if vals.len() != 16 {
            return Err(Error::Parse(format!("expected 16 integers, got {}", vals.len())));
        }
        let mut m = [[0i64; 4]; 4];
        for (k, v) in vals.into_iter().enumerate() {
            m[k / 4][k % 4] = v;
        }
        SpMatrix::new(m)
    }
}

impl Serialize for SpMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SpMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<SpMatrix, D::Error> {
        let m = Mat4::deserialize(d)?;
        SpMatrix::new(m).map_err(serde::de::Error::custom)
    }
}

/// Membership flags for the three level groups attached to `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Levels {
    /// `Γ(n)`
    pub principal: bool,
    /// `Γ(n, 2n)`
    pub theta: bool,
    /// `Γ(n, 2n, 4n)`
    pub igusa: bool,
}

fn congruent_identity(m: &SpMatrix, n: i64) -> bool {
    let id = SpMatrix::identity();
    (0..4).all(|i| (0..4).all(|j| (m.0[i][j] - id.0[i][j]).rem_euclid(n) == 0))
}

fn diagonals_vanish(m: &SpMatrix, modulus: i64) -> bool {
    let (a, b, c, d) = m.blocks();
    (0..2).all(|i| {
        let ab = a[i][0] * b[i][0] + a[i][1] * b[i][1];
        let cd = c[i][0] * d[i][0] + c[i][1] * d[i][1];
        ab.rem_euclid(modulus) == 0 && cd.rem_euclid(modulus) == 0
    })
}

fn in_theta_level(m: &SpMatrix, n: i64) -> bool {
    congruent_identity(m, n) && diagonals_vanish(m, 2 * n)
}

/// Exact congruence predicates for `Γ(n)`, `Γ(n,2n)` and `Γ(n,2n,4n)`.
///
/// The last is `{γ ∈ Γ(2n,4n) | Tr a ≡ 2 mod n}`.
pub fn congruence_level(m: &SpMatrix, n: i64) -> Result<Levels> {
    if n <= 0 {
        return Err(Error::InvalidArgument(format!("level must be positive, got {n}")));
    }
    let (a, ..) = m.blocks();
    let igusa = in_theta_level(m, 2 * n) && (a[0][0] + a[1][1] - 2).rem_euclid(n) == 0;
    Ok(Levels { principal: congruent_identity(m, n), theta: in_theta_level(m, n), igusa })
}

pub fn in_gamma2(m: &SpMatrix) -> bool {
    congruent_identity(m, 2)
}

pub fn in_gamma24(m: &SpMatrix) -> bool {
    in_theta_level(m, 2)
}

pub fn in_gamma48(m: &SpMatrix) -> bool {
    in_theta_level(m, 4)
}

/// `γ ∈ ±Γ(4,8)`.
pub fn in_pm_gamma48(m: &SpMatrix) -> bool {
    in_gamma48(m) || in_gamma48(&-*m)
}
