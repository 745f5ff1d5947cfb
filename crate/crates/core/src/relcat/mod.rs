//! Relations among theta constants and Jacobian determinants, and their certification.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jacobi::OddPair;
use crate::theta::{ApproxValue, SiegelPoint, ThetaEvaluator, ThetaSnapshot, F64_ROUND};

pub mod cusp;
pub mod families;
pub mod remarkable;

pub use families::{rb_catalog, rc_catalog, RbReport};
pub use remarkable::{
    classify_nonreducible, factor_as_theta_monomial, is_modular, is_remarkable,
    is_remarkable_even, NonReducible, ThetaFactor,
};

/// `coeff · ∏ θ_i^{theta_exp[i]} · ∏ D_k^{det_exp[k]}`, determinants in lexicographic pair order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Monomial {
    pub coeff: i64,
    pub theta_exp: [u8; 10],
    pub det_exp: [u8; 15],
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial { coeff: 1, theta_exp: [0; 10], det_exp: [0; 15] }
    }

    /// `∏ θ_i^{e_i}` from zero-based even indices with repetition.
    pub fn thetas(idx: &[usize]) -> Monomial {
        let mut m = Monomial::one();
        for &i in idx {
            m.theta_exp[i] += 1;
        }
        m
    }

    pub fn dets(pairs: &[OddPair]) -> Monomial {
        let mut m = Monomial::one();
        for p in pairs {
            m.det_exp[p.lex_index()] += 1;
        }
        m
    }

    pub fn with_coeff(mut self, c: i64) -> Monomial {
        self.coeff = c;
        self
    }

    pub fn times(&self, o: &Monomial) -> Monomial {
        Monomial {
            coeff: self.coeff * o.coeff,
            theta_exp: std::array::from_fn(|i| self.theta_exp[i] + o.theta_exp[i]),
            det_exp: std::array::from_fn(|i| self.det_exp[i] + o.det_exp[i]),
        }
    }

    pub fn pow(&self, k: u8) -> Monomial {
        (0..k).fold(Monomial::one(), |acc, _| acc.times(self))
    }

    /// Weight in units of one half.
    pub fn weight_halves(&self) -> u32 {
        self.theta_exp.iter().map(|&e| u32::from(e)).sum::<u32>()
            + 4 * self.det_exp.iter().map(|&e| u32::from(e)).sum::<u32>()
    }

    pub fn weight(&self) -> f64 {
        f64::from(self.weight_halves()) / 2.0
    }

    pub fn same_variables(&self, o: &Monomial) -> bool {
        self.theta_exp == o.theta_exp && self.det_exp == o.det_exp
    }

    /// Value at a snapshot including the coefficient.
    pub fn evaluate(&self, s: &ThetaSnapshot) -> ApproxValue {
        let mut acc = ApproxValue::one();
        for (i, &e) in self.theta_exp.iter().enumerate() {
            if e > 0 {
                acc = acc.mul(&s.even(i).pow(u32::from(e)));
            }
        }
        for (k, &e) in self.det_exp.iter().enumerate() {
            if e > 0 {
                acc = acc.mul(&s.det[k].pow(u32::from(e)));
            }
        }
        acc.scale(num_complex::Complex64::new(self.coeff as f64, 0.0))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &e) in self.theta_exp.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("th{}", i + 1)),
                _ => parts.push(format!("th{}^{}", i + 1, e)),
            }
        }
        for (k, &e) in self.det_exp.iter().enumerate() {
            let p = OddPair::from_lex_index(k);
            match e {
                0 => {}
                1 => parts.push(format!("{p}")),
                _ => parts.push(format!("{p}^{e}")),
            }
        }
        let body = if parts.is_empty() { "1".to_string() } else { parts.join("*") };
        match self.coeff {
            1 => write!(f, "{body}"),
            -1 => write!(f, "-{body}"),
            c => write!(f, "{c}*{body}"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Family {
    R2,
    R4,
    Rb(u8),
    Rc(u8),
}

impl Family {
    pub fn all() -> Vec<Family> {
        let mut v = vec![Family::R2, Family::R4];
        v.extend((1..=8).map(Family::Rb));
        v.extend((1..=5).map(Family::Rc));
        v
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::R2 => write!(f, "R2"),
            Family::R4 => write!(f, "R4"),
            Family::Rb(k) => write!(f, "rb{k}"),
            Family::Rc(k) => write!(f, "rc{k}"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Family> {
        let lower = s.to_ascii_lowercase();
        let bad = || Error::InvalidArgument(format!("unknown family tag {s:?}"));
        match lower.as_str() {
            "r2" => Ok(Family::R2),
            "r4" => Ok(Family::R4),
            _ => {
                let (tag, num) = lower.split_at(lower.len().min(2));
                let k: u8 = num.parse().map_err(|_| bad())?;
                match tag {
                    "rb" if (1..=8).contains(&k) => Ok(Family::Rb(k)),
                    "rc" if (1..=5).contains(&k) => Ok(Family::Rc(k)),
                    _ => Err(bad()),
                }
            }
        }
    }
}

impl Serialize for Family {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Family {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Family, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// `Σ terms = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Relation {
    pub family: Family,
    pub key: String,
    pub terms: Vec<Monomial>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Residual {
    pub residual: f64,
    pub budget: f64,
    /// Largest term magnitude.
    pub scale: f64,
}

impl Residual {
    pub fn within_budget(&self) -> bool {
        self.residual <= self.budget
    }
}

/// `|Σ v_i|` with a budget from the propagated errors plus the rounding of the sum.
pub fn residual_of(values: &[ApproxValue]) -> Residual {
    let mut sum = num_complex::Complex64::new(0.0, 0.0);
    let (mut err, mut mag, mut scale) = (0.0, 0.0, 0.0f64);
    for v in values {
        sum += v.value;
        err += v.abs_error;
        mag += v.norm();
        scale = scale.max(v.norm());
    }
    let budget = err + F64_ROUND * (values.len() as f64 + 2.0) * mag;
    Residual { residual: sum.norm(), budget, scale }
}

impl Relation {
    pub fn new(family: Family, key: impl Into<String>, terms: Vec<Monomial>) -> Relation {
        Relation { family, key: key.into(), terms, note: None }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Relation {
        self.note = Some(note.into());
        self
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.windows(2).all(|w| w[0].weight_halves() == w[1].weight_halves())
    }

    pub fn residual(&self, s: &ThetaSnapshot) -> Residual {
        let vals: Vec<ApproxValue> = self.terms.iter().map(|m| m.evaluate(s)).collect();
        residual_of(&vals)
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        for (k, t) in self.terms.iter().enumerate() {
            let text = t.to_string();
            if k > 0 {
                if let Some(rest) = text.strip_prefix('-') {
                    s.push_str(" - ");
                    s.push_str(rest);
                    continue;
                }
                s.push_str(" + ");
            }
            s.push_str(&text);
        }
        write!(f, "{} [{}]: {} = 0", self.family, self.key, s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertRow {
    pub family: Family,
    pub key: String,
    pub max_residual: f64,
    pub budget: f64,
    pub pass: bool,
}

/// Evaluates every relation at every snapshot; a row passes when each residual is within its budget.
pub fn certify(relations: &[Relation], snapshots: &[ThetaSnapshot]) -> Vec<CertRow> {
    relations
        .par_iter()
        .map(|r| {
            let (mut max_res, mut max_budget, mut pass) = (0.0f64, 0.0f64, true);
            for s in snapshots {
                let res = r.residual(s);
                max_res = max_res.max(res.residual);
                max_budget = max_budget.max(res.budget);
                pass &= res.within_budget();
            }
            CertRow { family: r.family, key: r.key.clone(), max_residual: max_res, budget: max_budget, pass }
        })
        .collect()
}

/// All sign vectors (first sign fixed to +1) making `Σ ±terms` vanish within budget at every snapshot.
pub fn sign_solutions(terms: &[Monomial], snapshots: &[ThetaSnapshot]) -> Vec<Vec<i64>> {
    let k = terms.len();
    if k == 0 {
        return Vec::new();
    }
    let vals: Vec<Vec<ApproxValue>> =
        snapshots.iter().map(|s| terms.iter().map(|t| t.evaluate(s)).collect()).collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << (k - 1)) {
        let signs: Vec<i64> = (0..k).map(|i| if i > 0 && mask >> (i - 1) & 1 == 1 { -1 } else { 1 }).collect();
        let ok = vals.iter().all(|row| {
            let signed: Vec<ApproxValue> =
                row.iter().zip(&signs).map(|(v, &s)| if s < 0 { v.neg() } else { *v }).collect();
            residual_of(&signed).within_budget()
        });
        if ok {
            out.push(signs);
        }
    }
    out
}

/// Applies the unique sign solution, or fails.
pub fn resolve_signs(family: Family, key: String, terms: Vec<Monomial>, snapshots: &[ThetaSnapshot]) -> Result<Relation> {
    let sols = sign_solutions(&terms, snapshots);
    match sols.as_slice() {
        [signs] => Ok(Relation::new(
            family,
            key,
            terms.iter().zip(signs).map(|(t, &s)| t.with_coeff(t.coeff * s)).collect(),
        )),
        _ => Err(Error::SignSearchFailed(format!("{family} {key}: {} sign solutions", sols.len()))),
    }
}

/// Seeded random points `X + iY` with `Y ≥ shift`, evaluated in parallel.
pub fn sample_snapshots(ev: &ThetaEvaluator, seed: u64, count: usize, shift: f64) -> Result<Vec<ThetaSnapshot>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<SiegelPoint> = (0..count).map(|_| SiegelPoint::random(&mut rng, shift)).collect();
    points.par_iter().map(|t| ev.snapshot(t)).collect()
}

/// Every relation of one family; determinant families resolve their signs at `snaps`.
pub fn catalog(family: Family, snaps: &[ThetaSnapshot]) -> Result<Vec<Relation>> {
    match family {
        Family::R2 => Ok(crate::riemann::r2_catalog()),
        Family::R4 => Ok(crate::riemann::r4_catalog()),
        Family::Rb(k) => rb_catalog(k, snaps),
        Family::Rc(k) => rc_catalog(k),
    }
}
