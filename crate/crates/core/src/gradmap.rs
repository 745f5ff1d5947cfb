//! The map `τ ↦ [D(N₁)(τ) : … : D(N₁₅)(τ)]` into projective 14-space and its sign patterns over `G`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jacobi::OddPair;
use crate::sympl::random::random_gamma_member;
use crate::sympl::{chi_pair, in_gamma, kappa_squared, GVector, SpMatrix, G_BASIS, G_BASIS_NAMES};
use crate::theta::{SiegelPoint, ThetaEvaluator, F64_ROUND};

/// Image count claimed from choosing signs of the six odd gradients.
pub const CLAIMED_IMAGE_COUNT: usize = 64;

/// Sampled pairs whose image `γτ` has `Im` below this eigenvalue are redrawn; lattice sums there are out of reach.
pub const MIN_IMAGE_EIGENVALUE: f64 = 0.02;

const MAX_DRAWS: usize = 10_000;

/// Coordinates below this fraction of the largest one count as zero when comparing signs.
const SIGN_FLOOR: f64 = 1e-6;

/// Fifteen determinant values in sum-vector table order, scaled so the largest has modulus one.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjPoint15 {
    pub coords: [Complex64; 15],
    /// Absolute error of each scaled coordinate.
    pub errors: [f64; 15],
    /// Index of the coordinate divided out.
    pub norm_index: usize,
}

impl ProjPoint15 {
    pub fn from_values(values: [Complex64; 15], errors: [f64; 15]) -> Result<ProjPoint15> {
        let (norm_index, top) = values
            .iter()
            .enumerate()
            .map(|(k, v)| (k, v.norm()))
            .fold((0, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        let floor = errors.iter().sum::<f64>().max(f64::MIN_POSITIVE);
        if top <= floor {
            return Err(Error::VanishingPoint { floor });
        }
        let pivot = values[norm_index];
        Ok(ProjPoint15 {
            coords: values.map(|v| v / pivot),
            errors: errors.map(|e| e / top),
            norm_index,
        })
    }

    /// Sum of scaled coordinate errors; a bound for the distance noise of one point.
    pub fn error(&self) -> f64 {
        self.errors.iter().sum()
    }

    pub fn with_signs(&self, p: &SignPattern) -> ProjPoint15 {
        ProjPoint15 {
            coords: std::array::from_fn(|k| self.coords[k] * f64::from(p.signs[k])),
            ..self.clone()
        }
    }
}

pub fn pgr_th2(ev: &ThetaEvaluator, tau: &SiegelPoint) -> Result<ProjPoint15> {
    let s = ev.snapshot(tau)?;
    let pairs: Vec<OddPair> = OddPair::ordered().collect();
    ProjPoint15::from_values(
        std::array::from_fn(|k| s.det(pairs[k]).value),
        std::array::from_fn(|k| s.det(pairs[k]).abs_error),
    )
}

/// Sine of the angle between the lines through `a` and `b`.
///
/// Uses the wedge norm `Σ_{i<j} |a_i b_j − a_j b_i|²`; the form `1 − |⟨a,b⟩|²` cancels catastrophically near zero.
pub fn projective_distance(a: &ProjPoint15, b: &ProjPoint15) -> f64 {
    let norm = |v: &[Complex64; 15]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut wedge = 0.0;
    for i in 0..15 {
        for j in i + 1..15 {
            wedge += (a.coords[i] * b.coords[j] - a.coords[j] * b.coords[i]).norm_sqr();
        }
    }
    (wedge.sqrt() / (norm(&a.coords) * norm(&b.coords))).min(1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SignPattern {
    /// `κ²(γ)χ_N(γ)` in sum-vector table order.
    pub signs: [i8; 15],
}

impl SignPattern {
    pub fn trivial() -> SignPattern {
        SignPattern { signs: [1; 15] }
    }

    pub fn is_trivial(&self) -> bool {
        self.signs.iter().all(|&s| s == 1)
    }

    pub fn times(&self, o: &SignPattern) -> SignPattern {
        SignPattern { signs: std::array::from_fn(|k| self.signs[k] * o.signs[k]) }
    }

    /// Bit `k` set when coordinate `k` flips.
    pub fn bits(&self) -> u16 {
        self.signs.iter().enumerate().fold(0, |m, (k, &s)| if s < 0 { m | 1 << k } else { m })
    }
}

impl std::fmt::Display for SignPattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for s in self.signs {
            f.write_str(if s < 0 { "-" } else { "+" })?;
        }
        Ok(())
    }
}

pub fn sign_pattern(gamma: &SpMatrix) -> Result<SignPattern> {
    let k2 = kappa_squared(gamma)?;
    let pairs: Vec<OddPair> = OddPair::ordered().collect();
    let mut signs = [0i8; 15];
    for (k, p) in pairs.into_iter().enumerate() {
        signs[k] = k2 * chi_pair(gamma, p)?;
    }
    Ok(SignPattern { signs })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PatternWitness {
    pub g: GVector,
    pub pattern: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PatternCensus {
    pub count: usize,
    pub kernel_size: usize,
    pub kernel_dim: u32,
    /// `count · kernel_size = 512`.
    pub homomorphism_consistent: bool,
    /// The kernel consists exactly of the classes of level-group members.
    pub kernel_matches_gamma: bool,
    pub claimed_count: usize,
    pub agrees_with_claim: bool,
    /// The smallest class vector producing each pattern.
    pub witness_patterns: Vec<PatternWitness>,
}

pub fn pattern_census() -> Result<PatternCensus> {
    let rows: Vec<(GVector, SpMatrix, SignPattern)> = GVector::all()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|g| {
            let rep = g.representative();
            sign_pattern(&rep).map(|p| (g, rep, p))
        })
        .collect::<Result<_>>()?;
    let mut first: BTreeMap<SignPattern, GVector> = BTreeMap::new();
    for (g, _, p) in &rows {
        first.entry(*p).or_insert(*g);
    }
    let kernel_size = rows.iter().filter(|(_, _, p)| p.is_trivial()).count();
    let kernel_matches_gamma = rows.iter().all(|(_, rep, p)| p.is_trivial() == in_gamma(rep));
    let mut witness_patterns: Vec<PatternWitness> =
        first.iter().map(|(p, g)| PatternWitness { g: *g, pattern: p.to_string() }).collect();
    witness_patterns.sort_by_key(|w| w.g);
    let count = first.len();
    Ok(PatternCensus {
        count,
        kernel_size,
        kernel_dim: kernel_size.trailing_zeros(),
        homomorphism_consistent: count * kernel_size == 512 && kernel_size.is_power_of_two(),
        kernel_matches_gamma,
        claimed_count: CLAIMED_IMAGE_COUNT,
        agrees_with_claim: count == CLAIMED_IMAGE_COUNT,
        witness_patterns,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvarianceRow {
    pub tau: SiegelPoint,
    pub gamma: SpMatrix,
    pub distance: f64,
    pub noise: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlipRow {
    pub basis: &'static str,
    pub in_gamma: bool,
    pub pattern: String,
    /// Distance from the image at `γτ` to the pattern applied to the image at `τ`.
    pub predicted_distance: f64,
    /// Distance from the image at `γτ` to the unchanged image at `τ`.
    pub unchanged_distance: f64,
    /// Per-coordinate signs of the aligned ratio agree with the pattern.
    pub flips_match: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub tolerance: f64,
    pub rows: Vec<InvarianceRow>,
    /// Draws discarded because `γτ` came too close to the boundary.
    pub rejected: usize,
    pub flips: Vec<FlipRow>,
    pub max_distance: f64,
    pub pass: bool,
}

/// Whether `b_k/a_k` relative to the ratio at the largest coordinate has the sign `p_k·p_pivot`.
///
/// A pattern acts on projective points only up to a global sign, hence the pivot.
fn flips_match(a: &ProjPoint15, b: &ProjPoint15, p: &SignPattern) -> bool {
    let pivot = (0..15).max_by(|&i, &j| (a.coords[i].norm() * b.coords[i].norm()).total_cmp(&(a.coords[j].norm() * b.coords[j].norm()))).expect("15 coordinates");
    let base = b.coords[pivot] / a.coords[pivot];
    (0..15).filter(|&k| a.coords[k].norm() > SIGN_FLOOR && b.coords[k].norm() > SIGN_FLOOR).all(|k| {
        let observed = if (b.coords[k] / (a.coords[k] * base)).re < 0.0 { -1 } else { 1 };
        observed == p.signs[k] * p.signs[pivot]
    })
}

/// Random `(τ, γ)` with `γ` a level-group word times a `Γ(4,8)` element, plus every basis matrix of `G`.
///
/// Pairs are redrawn until `γτ` keeps `Im` above [`MIN_IMAGE_EIGENVALUE`].
pub fn gamma_invariance_suite<R: Rng>(
    ev: &ThetaEvaluator,
    samples: usize,
    word_len: usize,
    tolerance: f64,
    rng: &mut R,
) -> Result<InvarianceReport> {
    let mut draws: Vec<(SiegelPoint, SpMatrix)> = Vec::with_capacity(samples);
    let mut rejected = 0;
    while draws.len() < samples {
        if rejected >= MAX_DRAWS {
            return Err(Error::InvalidArgument(format!("word length {word_len} keeps leaving the sampling region")));
        }
        let (tau, gamma) = (SiegelPoint::random(rng, 0.5), random_gamma_member(rng, word_len));
        if tau.act(&gamma)?.im_min_eigenvalue() >= MIN_IMAGE_EIGENVALUE {
            draws.push((tau, gamma));
        } else {
            rejected += 1;
        }
    }
    let rows: Vec<InvarianceRow> = draws
        .into_par_iter()
        .map(|(tau, gamma)| {
            let a = pgr_th2(ev, &tau)?;
            let b = pgr_th2(ev, &tau.act(&gamma)?)?;
            Ok(InvarianceRow { tau, gamma, distance: projective_distance(&a, &b), noise: a.error() + b.error() })
        })
        .collect::<Result<_>>()?;
    let tau = SiegelPoint::random(rng, 0.5);
    let here = pgr_th2(ev, &tau)?;
    let flips: Vec<FlipRow> = G_BASIS
        .iter()
        .zip(G_BASIS_NAMES)
        .map(|(gamma, name)| {
            let pattern = sign_pattern(gamma)?;
            let there = pgr_th2(ev, &tau.act(gamma)?)?;
            Ok(FlipRow {
                basis: name,
                in_gamma: in_gamma(gamma),
                pattern: pattern.to_string(),
                predicted_distance: projective_distance(&here.with_signs(&pattern), &there),
                unchanged_distance: projective_distance(&here, &there),
                flips_match: flips_match(&here, &there, &pattern),
            })
        })
        .collect::<Result<_>>()?;
    let max_distance = rows.iter().map(|r| r.distance).fold(0.0, f64::max);
    let pass = max_distance < tolerance
        && flips.iter().all(|f| f.flips_match && f.predicted_distance < tolerance && (f.in_gamma || f.unchanged_distance > tolerance));
    Ok(InvarianceReport { tolerance, rows, rejected, flips, max_distance, pass })
}

/// Noise floor of `projective_distance` for two exactly equal lines computed in `f64`.
pub fn distance_floor() -> f64 {
    64.0 * F64_ROUND
}
