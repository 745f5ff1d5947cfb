//! Generators of the even-weight cusp ideal.

use num_complex::Complex64;
use serde::Serialize;

use super::Monomial;
use crate::chars::{orbit_members, CharSet, OrbitClass};
use crate::error::Result;
use crate::jacobi::OddPair;
use crate::theta::verify::{siegel_limit, LimitRow, DEFAULT_LIMIT_OFFDIAG};
use crate::theta::ThetaEvaluator;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CuspGenerator {
    /// `D12` for determinants, otherwise the quintuple and the fourth-power slot.
    pub source: String,
    pub monomial: Monomial,
}

/// `θ_q⁴ ∏_{m ∈ S∖q} θ_m²`.
fn quintuple_monomial(set: CharSet, slot: usize) -> Monomial {
    let mut m = Monomial::one();
    for k in set.iter() {
        m.theta_exp[k] = if k == slot { 4 } else { 2 };
    }
    m
}

/// The 15 determinants followed by one monomial per `C5*` quintuple and member.
pub fn cusp_generators() -> Vec<CuspGenerator> {
    let dets = OddPair::lex().map(|p| CuspGenerator { source: p.to_string(), monomial: Monomial::dets(&[p]) });
    let quintuples = orbit_members(OrbitClass::C5_STAR).into_iter().flat_map(|set| {
        set.iter().map(move |slot| CuspGenerator {
            source: format!("{set}/m{}", slot + 1),
            monomial: quintuple_monomial(set, slot),
        })
    });
    dets.chain(quintuples).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CuspCheck {
    pub source: String,
    pub rows: Vec<LimitRow>,
    /// Relative magnitude at the last `λ` over the first.
    pub decay: f64,
    /// `|θ₁|^{2w}` at the last `λ` over the first.
    pub reference_ratio: f64,
}

/// Runs the boundary limit for one generator.
pub fn check_generator(ev: &ThetaEvaluator, g: &CuspGenerator, tau1: Complex64, lambdas: &[f64]) -> Result<CuspCheck> {
    let rows = siegel_limit(ev, &g.monomial, tau1, DEFAULT_LIMIT_OFFDIAG, lambdas)?;
    let (first, last) = (&rows[0], &rows[rows.len() - 1]);
    Ok(CuspCheck {
        source: g.source.clone(),
        decay: last.relative / first.relative,
        reference_ratio: last.reference / first.reference,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Precision;

    #[test]
    fn generator_count() {
        assert_eq!(orbit_members(OrbitClass::C5_STAR).len(), 72);
        let gens = cusp_generators();
        assert_eq!(gens.len(), 15 + 5 * 72);
        assert!(gens[15..].iter().all(|g| g.monomial.weight_halves() == 12));
        assert!(gens[..15].iter().all(|g| g.monomial.weight_halves() == 4));
        let distinct: std::collections::BTreeSet<_> = gens.iter().map(|g| g.monomial).collect();
        assert_eq!(distinct.len(), 375);
    }

    #[test]
    fn generators_vanish_at_the_boundary() {
        let ev = ThetaEvaluator::new(1e-13, Precision::DoubleDouble).unwrap();
        let tau1 = Complex64::new(0.1, 1.1);
        for g in cusp_generators().iter().step_by(19) {
            let c = check_generator(&ev, g, tau1, &[5.0, 40.0]).unwrap();
            assert!(c.decay < 1e-6, "{}: {}", c.source, c.decay);
            assert!(c.reference_ratio > 0.1);
        }
    }
}
