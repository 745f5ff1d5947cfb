//! The printed biquadratic and quartic Riemann relations among the even theta constants.

use crate::chars::CharSet;
use crate::relcat::{Family, Monomial, Relation};

/// `θ_a²θ_b² = θ_c²θ_d² + sign·θ_e²θ_f²`, one-based even labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Biquadratic {
    pub lhs: (usize, usize),
    pub first: (usize, usize),
    pub sign: i64,
    pub second: (usize, usize),
}

const fn bq(lhs: (usize, usize), first: (usize, usize), sign: i64, second: (usize, usize)) -> Biquadratic {
    Biquadratic { lhs, first, sign, second }
}

/// As printed.
pub const PRINTED_R2: [Biquadratic; 15] = [
    bq((2, 3), (1, 4), -1, (7, 10)),
    bq((2, 5), (7, 9), 1, (4, 8)),
    bq((3, 5), (9, 10), 1, (1, 8)),
    bq((2, 6), (1, 9), 1, (8, 10)),
    bq((3, 6), (4, 9), 1, (7, 8)),
    bq((6, 5), (1, 7), -1, (4, 10)),
    bq((6, 7), (3, 8), -1, (1, 5)),
    bq((6, 10), (4, 5), -1, (2, 8)),
    bq((6, 9), (1, 2), -1, (3, 4)),
    bq((5, 9), (2, 7), -1, (3, 10)),
    bq((4, 6), (5, 10), 1, (3, 9)),
    bq((1, 6), (5, 7), -1, (2, 9)),
    bq((6, 8), (3, 7), -1, (2, 10)),
    bq((5, 8), (1, 3), -1, (2, 4)),
    bq((8, 9), (4, 7), -1, (1, 10)),
];

/// One-based positions in [`PRINTED_R2`] whose printed sign pattern does not vanish.
pub const R2_ERRATA: [usize; 2] = [7, 12];

/// Signed one-based labels of the printed quartic relations `Σ ±θ_k⁴ = 0`.
pub const PRINTED_R4: [[i64; 4]; 5] = [
    [1, -4, -5, -9],
    [2, -3, 5, -6],
    [2, -3, 8, -9],
    [1, -3, -6, -10],
    [1, -2, -7, -8],
];

fn square_pair(coeff: i64, p: (usize, usize)) -> Monomial {
    Monomial::thetas(&[p.0 - 1, p.0 - 1, p.1 - 1, p.1 - 1]).with_coeff(coeff)
}

impl Biquadratic {
    pub fn support(&self) -> CharSet {
        let (a, b, c) = (self.lhs, self.first, self.second);
        CharSet::from_labels(&[a.0, a.1, b.0, b.1, c.0, c.1]).expect("labels in range")
    }

    /// `θ_a²θ_b² − θ_c²θ_d² − sign·θ_e²θ_f²`.
    pub fn terms(&self) -> Vec<Monomial> {
        vec![square_pair(1, self.lhs), square_pair(-1, self.first), square_pair(-self.sign, self.second)]
    }

    /// The three label pairs in printed order.
    pub fn pairs(&self) -> [(usize, usize); 3] {
        [self.lhs, self.first, self.second]
    }
}

/// The biquadratic relations keyed by their support in `C6plus`; errata rows use the vanishing sign pattern.
pub fn verified_r2() -> Vec<Biquadratic> {
    PRINTED_R2
        .iter()
        .enumerate()
        .map(|(k, r)| match k + 1 {
            7 => bq(r.lhs, r.second, -1, r.first),
            12 => bq(r.lhs, r.first, 1, r.second),
            _ => *r,
        })
        .collect()
}

pub fn r2_catalog() -> Vec<Relation> {
    let printed = PRINTED_R2;
    verified_r2()
        .into_iter()
        .enumerate()
        .map(|(k, r)| {
            let rel = Relation::new(Family::R2, r.support().to_string(), r.terms());
            if R2_ERRATA.contains(&(k + 1)) {
                let p = printed[k];
                rel.with_note(format!(
                    "printed as th{}^2 th{}^2 = th{}^2 th{}^2 {} th{}^2 th{}^2",
                    p.lhs.0,
                    p.lhs.1,
                    p.first.0,
                    p.first.1,
                    if p.sign < 0 { "-" } else { "+" },
                    p.second.0,
                    p.second.1
                ))
            } else {
                rel
            }
        })
        .collect()
}

/// The printed biquadratic relations without corrections.
pub fn printed_r2_relations() -> Vec<Relation> {
    PRINTED_R2
        .iter()
        .map(|r| Relation::new(Family::R2, r.support().to_string(), r.terms()))
        .collect()
}

pub fn quartic_terms(signed: &[i64; 4]) -> Vec<Monomial> {
    signed
        .iter()
        .map(|&x| {
            let k = x.unsigned_abs() as usize - 1;
            Monomial::thetas(&[k, k, k, k]).with_coeff(x.signum())
        })
        .collect()
}

pub fn quartic_support(signed: &[i64; 4]) -> CharSet {
    CharSet::from_indices(signed.iter().map(|x| x.unsigned_abs() as usize - 1))
}

pub fn r4_catalog() -> Vec<Relation> {
    PRINTED_R4
        .iter()
        .map(|r| Relation::new(Family::R4, quartic_support(r).to_string(), quartic_terms(r)))
        .collect()
}

/// Coefficient vector over the ten `θ⁴` of a quartic relation.
fn quartic_vector(signed: &[i64; 4]) -> [i64; 10] {
    let mut v = [0; 10];
    for &x in signed {
        v[x.unsigned_abs() as usize - 1] = x.signum();
    }
    v
}

/// Small integer combination (coefficients in `[-2, 2]`) of the printed quartics supported exactly on `quad`
/// with coefficients of equal magnitude, normalized so the lowest-index coefficient is `+1`.
pub fn derived_quartic(quad: CharSet) -> Option<([i64; 5], [i64; 10])> {
    let rows: Vec<[i64; 10]> = PRINTED_R4.iter().map(quartic_vector).collect();
    let mut best: Option<([i64; 5], [i64; 10])> = None;
    let mut co = [-2i64; 5];
    loop {
        let mut v = [0i64; 10];
        for (c, r) in co.iter().zip(&rows) {
            for k in 0..10 {
                v[k] += c * r[k];
            }
        }
        let supp = CharSet::from_indices((0..10).filter(|&k| v[k] != 0));
        if supp == quad && !supp.is_empty() {
            let mag = v[supp.iter().next().expect("nonempty")];
            if supp.iter().all(|k| v[k].abs() == mag.abs()) {
                let norm = v.map(|x| x / mag);
                let better = match &best {
                    None => true,
                    Some((b, _)) => co.iter().map(|c| c.abs()).sum::<i64>() < b.iter().map(|c| c.abs()).sum::<i64>(),
                };
                if better {
                    best = Some((co, norm));
                }
            }
        }
        let mut k = 0;
        while k < 5 && co[k] == 2 {
            co[k] = -2;
            k += 1;
        }
        if k == 5 {
            break;
        }
        co[k] += 1;
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chars::{classify_set, OrbitClass};

    #[test]
    fn first_rows_as_printed() {
        let r = &r2_catalog()[0];
        assert_eq!(r.terms[0].to_string(), "th2^2*th3^2");
        assert_eq!(r.terms[1].to_string(), "-th1^2*th4^2");
        assert_eq!(r.terms[2].to_string(), "th7^2*th10^2");
        let q = &r4_catalog()[0];
        assert_eq!(q.terms.iter().map(|t| t.to_string()).collect::<Vec<_>>(), ["th1^4", "-th4^4", "-th5^4", "-th9^4"]);
    }

    #[test]
    fn supports_are_plus_sextuples_and_minus_quadruples() {
        let mut seen = std::collections::BTreeSet::new();
        for r in PRINTED_R2 {
            assert_eq!(classify_set(r.support()), OrbitClass::C6_PLUS);
            seen.insert(r.support());
        }
        assert_eq!(seen.len(), 15);
        for r in PRINTED_R4 {
            assert_eq!(classify_set(quartic_support(&r)), OrbitClass::C4_MINUS);
        }
    }

    #[test]
    fn quartic_derivation_reproduces_printed_rows() {
        for r in PRINTED_R4 {
            let (_, v) = derived_quartic(quartic_support(&r)).expect("printed row is its own combination");
            let printed = quartic_vector(&r);
            assert!(v == printed || v == printed.map(|x| -x));
        }
    }
}
