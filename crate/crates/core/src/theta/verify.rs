//! Numerical certification of the Jacobi identities, Riemann relations, transformation laws and Siegel limits.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ApproxValue, SiegelPoint, ThetaEvaluator, ThetaSnapshot, F64_ROUND};
use crate::chars::{CharSet, EVEN};
use crate::error::{Error, Result};
use crate::jacobi::{verified_sign, JacobiEntry, OddPair, JACOBI_TABLE};
use crate::relcat::{residual_of, Monomial, Relation};
use crate::riemann::{printed_r2_relations, r4_catalog};
use crate::sympl::{chi_m, chi_pair, kappa_squared};
use crate::sympl::SpMatrix;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResidualRow {
    pub relation_id: String,
    pub residual: f64,
    pub budget: f64,
    pub pass: bool,
}

impl ResidualRow {
    fn new(relation_id: String, values: &[ApproxValue]) -> ResidualRow {
        let r = residual_of(values);
        ResidualRow { relation_id, residual: r.residual, budget: r.budget, pass: r.within_budget() }
    }

    /// Keeps the largest residual and budget of two rows for the same relation.
    pub fn merge(&self, o: &ResidualRow) -> ResidualRow {
        ResidualRow {
            relation_id: self.relation_id.clone(),
            residual: self.residual.max(o.residual),
            budget: self.budget.max(o.budget),
            pass: self.pass && o.pass,
        }
    }
}

/// Folds per-point reports into per-relation maxima.
pub fn merge_reports(reports: &[Vec<ResidualRow>]) -> Vec<ResidualRow> {
    let mut out: Vec<ResidualRow> = Vec::new();
    for rep in reports {
        for (k, row) in rep.iter().enumerate() {
            match out.get_mut(k) {
                Some(acc) => *acc = acc.merge(row),
                None => out.push(row.clone()),
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JacobiRow {
    pub pair: OddPair,
    pub quad: CharSet,
    pub sign: i8,
    /// `|D(N) − sign·θθθθ|`.
    pub residual: f64,
    /// Same with the opposite sign.
    pub opposite_residual: f64,
    pub budget: f64,
    pub pass: bool,
}

/// The fifteen identities `D(N) = ±θθθθ` at one point with the published signs.
pub fn verify_jacobi_table(s: &ThetaSnapshot) -> Vec<JacobiRow> {
    jacobi_rows(s, |e| e.sign)
}

/// Same with the published signs corrected on the errata.
pub fn verify_jacobi_verified(s: &ThetaSnapshot) -> Vec<JacobiRow> {
    jacobi_rows(s, |e| verified_sign(e.odd_pair()))
}

fn jacobi_rows(s: &ThetaSnapshot, sign_of: impl Fn(&JacobiEntry) -> i8) -> Vec<JacobiRow> {
    JACOBI_TABLE
        .iter()
        .map(|e| {
            let sign = sign_of(e);
            let p = e.odd_pair();
            let idx: Vec<usize> = e.thetas.iter().map(|t| t - 1).collect();
            let prod = Monomial::thetas(&idx).evaluate(s);
            let d = s.det(p);
            let signed = if sign < 0 { prod.neg() } else { prod };
            let r = residual_of(&[d, signed.neg()]);
            let o = residual_of(&[d, signed]);
            JacobiRow {
                pair: p,
                quad: e.quad(),
                sign,
                residual: r.residual,
                opposite_residual: o.residual,
                budget: r.budget,
                pass: r.within_budget(),
            }
        })
        .collect()
}

/// The printed 15 biquadratic and 5 quartic relations at one point, ids `R2-k` and `R4-k`.
pub fn verify_riemann(s: &ThetaSnapshot) -> Vec<ResidualRow> {
    riemann_rows(&printed_r2_relations(), &r4_catalog(), s)
}

pub fn riemann_rows(r2: &[Relation], r4: &[Relation], s: &ThetaSnapshot) -> Vec<ResidualRow> {
    let tagged = r2.iter().enumerate().map(|(k, r)| (format!("R2-{}", k + 1), r));
    let tagged = tagged.chain(r4.iter().enumerate().map(|(k, r)| (format!("R4-{}", k + 1), r)));
    tagged
        .map(|(id, r)| {
            let vals: Vec<ApproxValue> = r.terms.iter().map(|t| t.evaluate(s)).collect();
            ResidualRow::new(id, &vals)
        })
        .collect()
}

/// An integral-weight object whose transformation under `Γ₂(2,4)` is checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransformObject {
    /// `θ_mθ_n` for zero-based even indices, weight 1.
    ThetaPair(usize, usize),
    /// `D(N)`, weight 2.
    Det(OddPair),
}

impl TransformObject {
    pub fn weight(self) -> i32 {
        match self {
            TransformObject::ThetaPair(..) => 1,
            TransformObject::Det(_) => 2,
        }
    }

    fn value(self, s: &ThetaSnapshot) -> ApproxValue {
        match self {
            TransformObject::ThetaPair(i, j) => s.even(i).mul(&s.even(j)),
            TransformObject::Det(p) => s.det(p),
        }
    }

    /// `κ²(γ)·χ(γ)`.
    pub fn multiplier(self, gamma: &SpMatrix) -> Result<i8> {
        let k2 = kappa_squared(gamma)?;
        let chi = match self {
            TransformObject::ThetaPair(i, j) => chi_m(gamma, EVEN[i])? * chi_m(gamma, EVEN[j])?,
            TransformObject::Det(p) => chi_pair(gamma, p)?,
        };
        Ok(k2 * chi)
    }

    pub fn label(self) -> String {
        match self {
            TransformObject::ThetaPair(i, j) => format!("th{}*th{}", i + 1, j + 1),
            TransformObject::Det(p) => p.to_string(),
        }
    }
}

impl std::str::FromStr for TransformObject {
    type Err = Error;
    /// `D12` or `th1*th3`.
    fn from_str(s: &str) -> Result<TransformObject> {
        let bad = || Error::Parse(format!("expected D<i><j> or th<i>*th<j>, got {s:?}"));
        if let Some(rest) = s.strip_prefix('D') {
            let d: Vec<usize> = rest.chars().map(|c| c.to_digit(10).map(|x| x as usize)).collect::<Option<_>>().ok_or_else(bad)?;
            match d.as_slice() {
                &[a, b] if (1..=6).contains(&a) && (1..=6).contains(&b) && a != b => Ok(TransformObject::Det(OddPair::new(a - 1, b - 1))),
                _ => Err(bad()),
            }
        } else {
            let parts: Vec<&str> = s.split('*').collect();
            let idx: Vec<usize> = parts
                .iter()
                .map(|p| p.strip_prefix("th").and_then(|n| n.parse::<usize>().ok()))
                .collect::<Option<_>>()
                .ok_or_else(bad)?;
            match idx.as_slice() {
                &[a, b] if (1..=10).contains(&a) && (1..=10).contains(&b) => Ok(TransformObject::ThetaPair(a - 1, b - 1)),
                _ => Err(bad()),
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransformRow {
    pub object: String,
    pub multiplier: i8,
    pub residual: f64,
    pub budget: f64,
    pub pass: bool,
}

/// `|f(γτ) − κ²χ(γ)·det(cτ+d)^w·f(τ)|` for `γ ∈ Γ₂(2,4)`.
///
/// The budget adds a heuristic allowance for the `f64` rounding of `γτ` itself.
pub fn verify_transformation(
    ev: &ThetaEvaluator,
    gamma: &SpMatrix,
    objects: &[TransformObject],
    tau: &SiegelPoint,
) -> Result<Vec<TransformRow>> {
    let image = tau.act(gamma)?;
    let here = ev.snapshot(tau)?;
    let there = ev.snapshot(&image)?;
    let det = tau.det_ctd(gamma);
    let g = gamma.max_abs_entry() as f64;
    let point_slack = 64.0 * F64_ROUND * (1.0 + g).powi(2) * (1.0 + tau.max_abs_entry()).powi(2) * there.radius.powi(2);
    objects
        .iter()
        .map(|&obj| {
            let mult = obj.multiplier(gamma)?;
            let factor = det.powi(obj.weight()) * f64::from(mult);
            let lhs = obj.value(&there);
            let rhs = obj.value(&here).scale(factor).neg();
            let r = residual_of(&[lhs, rhs]);
            let budget = r.budget + point_slack * (lhs.norm() + rhs.norm());
            Ok(TransformRow { object: obj.label(), multiplier: mult, residual: r.residual, budget, pass: r.residual <= budget })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitRow {
    pub lambda: f64,
    pub magnitude: f64,
    pub abs_error: f64,
    /// `|θ₁|^{2w}` at the same point.
    pub reference: f64,
    pub relative: f64,
}

/// Off-diagonal entry used by the Siegel limit; `θ_{[11;11]}` vanishes identically on diagonal points.
pub const DEFAULT_LIMIT_OFFDIAG: Complex64 = Complex64::new(0.05, 0.05);

/// Evaluates `form` at `[[τ₁, w], [w, iλ]]` for each `λ`.
pub fn siegel_limit(
    ev: &ThetaEvaluator,
    form: &Monomial,
    tau1: Complex64,
    offdiag: Complex64,
    lambdas: &[f64],
) -> Result<Vec<LimitRow>> {
    let w2 = form.weight_halves();
    lambdas
        .iter()
        .map(|&lambda| {
            let tau = SiegelPoint::new(tau1, offdiag, Complex64::new(0.0, lambda))?;
            let s = ev.snapshot(&tau)?;
            let v = form.evaluate(&s);
            let reference = s.even(0).norm().powi(w2 as i32);
            Ok(LimitRow { lambda, magnitude: v.norm(), abs_error: v.abs_error, reference, relative: v.norm() / reference })
        })
        .collect()
}
