//! Seeded sampling of symplectic matrices as short words in standard generators.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{gamma_generators, in_gamma48, SpMatrix, G_BASIS};

fn standard_generators() -> Vec<SpMatrix> {
    let mut gens = vec![SpMatrix::j()];
    for s in [[[1, 0], [0, 0]], [[0, 0], [0, 1]], [[0, 1], [1, 0]]] {
        gens.push(SpMatrix::translation(s));
    }
    for u in [[[1, 1], [0, 1]], [[1, 0], [1, 1]], [[0, 1], [1, 0]], [[-1, 0], [0, 1]]] {
        gens.push(SpMatrix::gl_embedding(u));
    }
    let inverses: Vec<SpMatrix> = gens.iter().map(SpMatrix::inverse).collect();
    gens.extend(inverses);
    gens
}

/// A word of length `len` in `J`, elementary symmetric translations and `GL(2,Z)` embeddings.
pub fn random_sp4<R: Rng>(rng: &mut R, len: usize) -> SpMatrix {
    let gens = standard_generators();
    (0..len).fold(SpMatrix::identity(), |acc, _| acc * *gens.choose(rng).expect("nonempty"))
}

/// A product of one to three conjugates `g⁻¹ b^{±2} g` of squared basis elements; lies in `Γ(4,8)`.
pub fn random_gamma48<R: Rng>(rng: &mut R) -> SpMatrix {
    let k = rng.gen_range(1..=3);
    let mut out = SpMatrix::identity();
    for _ in 0..k {
        let len = rng.gen_range(0..=2);
        let g = random_sp4(rng, len);
        let b = G_BASIS[rng.gen_range(0..9)];
        let sq = if rng.gen_bool(0.5) { b * b } else { (b * b).inverse() };
        out = out * g.inverse() * sq * g;
    }
    debug_assert!(in_gamma48(&out));
    out
}

/// A word of length `len` in the four level-group generators and their inverses.
pub fn random_gamma_word<R: Rng>(rng: &mut R, len: usize) -> SpMatrix {
    let gens = gamma_generators();
    (0..len).fold(SpMatrix::identity(), |acc, _| {
        let g = gens[rng.gen_range(0..4)];
        acc * if rng.gen_bool(0.5) { g } else { g.inverse() }
    })
}

/// A level-group word times a `Γ(4,8)` element.
pub fn random_gamma_member<R: Rng>(rng: &mut R, len: usize) -> SpMatrix {
    random_gamma_word(rng, len) * random_gamma48(rng)
}
