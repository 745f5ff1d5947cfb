use rand::Rng;
use serde::Serialize;

use super::random::random_sp4;
use super::{
    chi_pair, congruence_level, g_coordinates, in_gamma24, kappa_squared, GVector, Levels,
    SpMatrix,
};
use crate::jacobi::OddPair;

/// Generators of the level group, besides `Γ(4,8)`.
pub fn gamma_generators() -> [SpMatrix; 4] {
    let first = SpMatrix::from_trusted([[1, 2, 4, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 4, -2, 1]]);
    let third = SpMatrix::from_trusted([[1, 0, 4, 2], [0, 1, 2, 4], [0, 0, 1, 0], [0, 0, 0, 1]]);
    [first, first.transpose(), third, third.transpose()]
}

/// `γ ∈ Γ(2,4)` with every `χ_N(γ) = 1`.
pub fn in_gamma(gamma: &SpMatrix) -> bool {
    in_gamma24(gamma) && OddPair::lex().all(|p| chi_pair(gamma, p) == Ok(1))
}

#[derive(Clone, Debug, Serialize)]
pub struct Membership {
    pub matrix: SpMatrix,
    pub level1: Levels,
    pub level2: Levels,
    pub level4: Levels,
    pub in_gamma: bool,
    pub kappa_squared: Option<i8>,
    pub g_coordinates: Option<GVector>,
    /// `χ_N(γ)` in lexicographic pair order, when defined.
    pub chi_pairs: Option<Vec<i8>>,
}

pub fn membership(gamma: &SpMatrix) -> Membership {
    let in24 = in_gamma24(gamma);
    Membership {
        matrix: *gamma,
        level1: congruence_level(gamma, 1).expect("positive level"),
        level2: congruence_level(gamma, 2).expect("positive level"),
        level4: congruence_level(gamma, 4).expect("positive level"),
        in_gamma: in_gamma(gamma),
        kappa_squared: kappa_squared(gamma).ok(),
        g_coordinates: g_coordinates(gamma).ok(),
        chi_pairs: in24.then(|| OddPair::lex().map(|p| chi_pair(gamma, p).unwrap_or(0)).collect()),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalityReport {
    pub conjugators: usize,
    pub checks: usize,
    pub failures: usize,
}

/// Conjugates every generator by `samples` random words and rechecks membership.
pub fn verify_normality<R: Rng>(samples: usize, word_len: usize, rng: &mut R) -> NormalityReport {
    let mut conj = vec![SpMatrix::identity(), SpMatrix::j()];
    conj.extend((0..samples).map(|_| random_sp4(rng, word_len)));
    let mut report = NormalityReport { conjugators: conj.len(), checks: 0, failures: 0 };
    for g in &conj {
        for eta in gamma_generators() {
            report.checks += 1;
            if !in_gamma(&(g.inverse() * eta * *g)) {
                report.failures += 1;
            }
        }
    }
    report
}

/// Order of `γ` if at most `bound`.
pub fn order_check(gamma: &SpMatrix, bound: u32) -> Option<u32> {
    let mut p = *gamma;
    for k in 1..=bound {
        if p.is_identity() {
            return Some(k);
        }
        p = p * *gamma;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::super::random::{random_gamma48, random_gamma_member};
    use super::super::*;
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_are_members_with_trivial_kappa() {
        for g in gamma_generators() {
            assert!(is_symplectic(g.entries()));
            assert!(in_gamma(&g));
            assert_eq!(kappa_squared(&g).unwrap(), 1);
        }
        let first = gamma_generators()[0];
        assert_eq!(first, A12 * B11_SQ * C22_SQ);
        assert_eq!(gamma_generators()[1], A21 * B22_SQ * C11_SQ);
        assert_eq!(gamma_generators()[2], B12 * B11_SQ * B22_SQ);
        assert_eq!(gamma_generators()[3], C12 * C11_SQ * C22_SQ);
    }

    #[test]
    fn membership_examples() {
        for g in G_BASIS {
            assert!(!in_gamma(&g));
        }
        assert!(in_gamma(&SpMatrix::minus_identity()));
        assert!(!in_gamma(&SpMatrix::j()));
        let m = membership(&gamma_generators()[0]);
        assert!(m.in_gamma && m.level2.theta && !m.level4.principal);
    }

    #[test]
    fn normality_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let r = verify_normality(100, 4, &mut rng);
        assert_eq!(r.failures, 0);
        assert_eq!(r.checks, 102 * 4);
    }

    #[test]
    fn orders() {
        for g in gamma_generators() {
            assert_eq!(order_check(&g, 12), None);
        }
        assert_eq!(order_check(&SpMatrix::identity(), 12), Some(1));
        assert_eq!(order_check(&SpMatrix::minus_identity(), 12), Some(2));
        assert_eq!(order_check(&SpMatrix::j(), 12), Some(4));
    }

    #[test]
    fn characters_are_multiplicative_and_trivial_on_level_48() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let g = GVector::from_bits(rng.gen_range(0..512)).unwrap().representative()
                * random_gamma48(&mut rng);
            let h = GVector::from_bits(rng.gen_range(0..512)).unwrap().representative()
                * random_gamma48(&mut rng);
            for m in crate::chars::Char2::all() {
                assert_eq!(chi_m(&(g * h), m).unwrap(), chi_m(&g, m).unwrap() * chi_m(&h, m).unwrap());
            }
            assert_eq!(kappa_squared(&(g * h)).unwrap(), kappa_squared(&g).unwrap() * kappa_squared(&h).unwrap());
            assert_eq!(g_coordinates(&(g * h)).unwrap(), g_coordinates(&g).unwrap() + g_coordinates(&h).unwrap());
        }
        for _ in 0..50 {
            let g = random_gamma48(&mut rng);
            assert!(congruence_level(&g, 4).unwrap().theta);
            for m in crate::chars::Char2::all() {
                assert_eq!(chi_m(&g, m).unwrap(), 1);
            }
        }
    }

    #[test]
    fn membership_closed_under_products_and_inverses() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let g = random_gamma_member(&mut rng, 3);
            let h = random_gamma_member(&mut rng, 3);
            assert!(in_gamma(&g) && in_gamma(&h));
            assert!(in_gamma(&(g * h)));
            assert!(in_gamma(&g.inverse()));
        }
    }

    #[test]
    fn action_preserves_parity() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let g = random_sp4(&mut rng, 6);
            for m in crate::chars::Char2::all() {
                assert_eq!(crate::chars::char_action(&g, m).parity(), m.parity());
            }
        }
    }

    #[test]
    fn gamma2_acts_trivially_on_characteristics() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..50 {
            let g = GVector::from_bits(rng.gen_range(0..512)).unwrap().representative()
                * random_gamma48(&mut rng);
            for m in crate::chars::Char2::all() {
                assert_eq!(crate::chars::char_action(&g, m), m);
            }
        }
    }
}
