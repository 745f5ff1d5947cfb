//! Products of distinct Jacobian determinants: remarkable factors, their theta-monomial form and modularity.

use std::fmt;

use serde::{Serialize, Serializer};

use super::Monomial;
use crate::chars::{Char2, CharSet, EVEN};
use crate::error::{Error, Result};
use crate::jacobi::{verified_sign, OddPair};
use crate::sympl::{chi_pair, kappa_squared, G_BASIS};

/// A set of distinct determinants, bit `k` standing for the pair with lexicographic index `k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct DetSet(u16);

impl DetSet {
    pub const ALL: DetSet = DetSet(0x7fff);

    pub fn from_mask(mask: u16) -> Option<DetSet> {
        (mask <= 0x7fff).then_some(DetSet(mask))
    }

    pub fn from_pairs(pairs: &[OddPair]) -> DetSet {
        DetSet(pairs.iter().fold(0, |m, p| m | 1 << p.lex_index()))
    }

    pub fn mask(self) -> u16 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn pairs(self) -> impl Iterator<Item = OddPair> {
        (0..15).filter(move |k| self.0 >> k & 1 == 1).map(OddPair::from_lex_index)
    }

    pub fn union(self, o: DetSet) -> DetSet {
        DetSet(self.0 | o.0)
    }

    pub fn is_subset(self, o: DetSet) -> bool {
        self.0 & !o.0 == 0
    }

    /// Nonempty proper subsets.
    pub fn proper_subsets(self) -> impl Iterator<Item = DetSet> {
        let full = self.0;
        let mut sub = full;
        std::iter::from_fn(move || {
            if sub == 0 {
                return None;
            }
            sub = (sub - 1) & full;
            (sub != 0).then_some(DetSet(sub))
        })
    }

    pub fn all_of_size(k: usize) -> impl Iterator<Item = DetSet> {
        (0u16..0x8000).filter(move |m| m.count_ones() as usize == k).map(DetSet)
    }

    /// `∏ D(N)`.
    pub fn monomial(self) -> Monomial {
        Monomial::dets(&self.pairs().collect::<Vec<_>>())
    }

    /// How often each odd characteristic occurs among the pairs.
    pub fn odd_degrees(self) -> [u8; 6] {
        let mut d = [0; 6];
        for p in self.pairs() {
            d[p.i as usize] += 1;
            d[p.j as usize] += 1;
        }
        d
    }

    /// How often each even characteristic occurs among the Jacobi quadruples.
    pub fn even_multiplicities(self) -> [u8; 10] {
        let mut m = [0; 10];
        for p in self.pairs() {
            for k in p.quad().iter() {
                m[k] += 1;
            }
        }
        m
    }
}

impl fmt::Display for DetSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs().map(|p| p.to_string()).collect();
        write!(f, "{}", if parts.is_empty() { "1".to_string() } else { parts.join("*") })
    }
}

impl Serialize for DetSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `Σ S(N)` over the set.
pub fn s_sum(p: DetSet) -> Char2 {
    p.pairs().fold(Char2::ZERO, |acc, n| acc + n.s_vector())
}

/// Remarkable by the odd criterion `Σ S(N_i) = 0`.
pub fn is_remarkable(p: DetSet) -> bool {
    !p.is_empty() && s_sum(p) == Char2::ZERO
}

/// Remarkable by the even criterion: the multiset of quadruple members sums to zero.
pub fn is_remarkable_even(p: DetSet) -> bool {
    let m = p.even_multiplicities();
    let sum = (0..10).filter(|&k| m[k] % 2 == 1).fold(Char2::ZERO, |acc, k| acc + EVEN[k]);
    !p.is_empty() && sum == Char2::ZERO
}

/// `N·ᵗN ≡ h·[[0,1₂],[1₂,0]] (mod 2)` for the `4 × 2h` matrix of odd characteristics, `h = |P|`.
pub fn is_modular(p: DetSet) -> bool {
    let mut gram = [[0u8; 4]; 4];
    for pair in p.pairs() {
        let (a, b) = pair.chars();
        for n in [a, b] {
            let v = [n.mprime()[0], n.mprime()[1], n.mdprime()[0], n.mdprime()[1]];
            for r in 0..4 {
                for c in 0..4 {
                    gram[r][c] ^= v[r] & v[c];
                }
            }
        }
    }
    let h = (p.len() % 2) as u8;
    (0..4).all(|r| (0..4).all(|c| gram[r][c] == if (r + 2) % 4 == c { h } else { 0 }))
}

/// Modularity for `Γ₂(2,4)` through the characters: `κ^{2h}·∏χ_N` is trivial on the basis of `G`.
pub fn is_modular_by_characters(p: DetSet) -> bool {
    G_BASIS.iter().all(|g| {
        let k2 = kappa_squared(g).expect("basis lies in level (2,4)");
        let mut v = if p.len() % 2 == 1 { k2 } else { 1 };
        for pair in p.pairs() {
            v *= chi_pair(g, pair).expect("basis lies in level (2,4)");
        }
        v == 1
    })
}

/// `∏ D(N) = sign·χ₅^h·∏ θ_m^{2·squares[m]}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ThetaFactor {
    pub chi5_power: u8,
    pub squares: [u8; 10],
    pub sign: i8,
}

impl ThetaFactor {
    pub fn monomial(&self) -> Monomial {
        let mut m = Monomial::one().with_coeff(i64::from(self.sign));
        for k in 0..10 {
            m.theta_exp[k] = 2 * self.squares[k] + self.chi5_power;
        }
        m
    }
}

/// Reduces `∏ F(M_i)` by `F(A)F(B) = F(A△B)·∏_{A∩B} θ²`; the residue must be `∅` or all ten characteristics.
pub fn factor_as_theta_monomial(p: DetSet) -> Result<ThetaFactor> {
    let mut rest = CharSet::EMPTY;
    let mut squares = [0u8; 10];
    let mut sign = 1i8;
    for pair in p.pairs() {
        let q = pair.quad();
        for k in rest.intersection(q).iter() {
            squares[k] += 1;
        }
        rest = rest.sym_diff(q);
        sign *= verified_sign(pair);
    }
    let chi5_power = if rest == CharSet::EMPTY {
        0
    } else if rest == CharSet::FULL {
        1
    } else {
        return Err(Error::InvalidArgument(format!("{p} is not a remarkable factor (residue {rest})")));
    };
    Ok(ThetaFactor { chi5_power, squares, sign })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NonReducible {
    Type(u8),
    Reducible,
    NotRemarkable,
    /// Non-reducible but outside the six listed shapes.
    Unmatched,
}

/// Shape of the graph on the six odd characteristics whose edges are the pairs.
fn shape(p: DetSet) -> Option<u8> {
    let deg = p.odd_degrees();
    let vertices = deg.iter().filter(|&&d| d > 0).count();
    let mut sorted = deg;
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let pairs: Vec<OddPair> = p.pairs().collect();
    match (pairs.len(), vertices) {
        (3, 3) => Some(1),
        (3, 6) => Some(2),
        (4, 4) if sorted[..4] == [2, 2, 2, 2] => Some(3),
        (4, 6) if sorted == [3, 1, 1, 1, 1, 1] => Some(4),
        (5, 5) if sorted[..5] == [2, 2, 2, 2, 2] => Some(5),
        (5, _) => {
            // three edges at one centre, the other two sharing a vertex
            let star_plus_star = (0..6).any(|n| {
                let at: Vec<usize> = (0..5).filter(|&k| pairs[k].contains(n)).collect();
                at.len() >= 3
                    && combinations3(&at).any(|tri| {
                        let rest: Vec<OddPair> = (0..5).filter(|k| !tri.contains(k)).map(|k| pairs[k]).collect();
                        (0..6).any(|m| rest[0].contains(m) && rest[1].contains(m))
                    })
            });
            star_plus_star.then_some(6)
        }
        _ => None,
    }
}

fn combinations3(v: &[usize]) -> impl Iterator<Item = [usize; 3]> + '_ {
    let n = v.len();
    (0..n).flat_map(move |a| (a + 1..n).flat_map(move |b| (b + 1..n).map(move |c| [v[a], v[b], v[c]])))
}

pub fn classify_nonreducible(p: DetSet) -> NonReducible {
    if !is_remarkable(p) {
        return NonReducible::NotRemarkable;
    }
    if p.proper_subsets().any(is_remarkable) {
        return NonReducible::Reducible;
    }
    shape(p).map_or(NonReducible::Unmatched, NonReducible::Type)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds(pairs: &[(usize, usize)]) -> DetSet {
        DetSet::from_pairs(&pairs.iter().map(|&(a, b)| OddPair::new(a - 1, b - 1)).collect::<Vec<_>>())
    }

    #[test]
    fn examples() {
        assert!(is_remarkable(ds(&[(1, 2), (2, 3), (1, 3)])));
        assert!(!is_remarkable(ds(&[(1, 2)])));
        assert_eq!(classify_nonreducible(ds(&[(1, 2), (2, 3), (3, 1)])), NonReducible::Type(1));
        assert_eq!(classify_nonreducible(ds(&[(1, 2), (3, 4), (5, 6)])), NonReducible::Type(2));
        assert_eq!(classify_nonreducible(ds(&[(1, 2), (2, 3), (3, 4), (4, 1)])), NonReducible::Type(3));
        assert_eq!(classify_nonreducible(ds(&[(1, 2), (1, 3), (1, 4), (5, 6)])), NonReducible::Type(4));
        assert_eq!(classify_nonreducible(ds(&[(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)])), NonReducible::Type(5));
        assert_eq!(classify_nonreducible(ds(&[(1, 2), (1, 3), (1, 4), (2, 5), (2, 6)])), NonReducible::Type(6));
        assert_eq!(ds(&[(1, 2), (3, 4)]).to_string(), "D12*D34");
    }

    #[test]
    fn triangle_is_chi5_times_one_square() {
        for (a, b, c) in [(1, 2, 3), (2, 4, 6), (1, 5, 6)] {
            let f = factor_as_theta_monomial(ds(&[(a, b), (b, c), (a, c)])).unwrap();
            assert_eq!(f.chi5_power, 1);
            assert_eq!(f.squares.iter().map(|&x| x as u32).sum::<u32>(), 1);
        }
        let f = factor_as_theta_monomial(ds(&[(1, 2), (3, 4), (5, 6)])).unwrap();
        assert_eq!((f.chi5_power, f.squares.iter().filter(|&&x| x == 1).count()), (0, 6));
        let f = factor_as_theta_monomial(ds(&[(1, 2), (2, 3), (3, 4), (1, 4)])).unwrap();
        assert_eq!((f.chi5_power, f.squares.iter().filter(|&&x| x == 1).count()), (0, 8));
        assert!(factor_as_theta_monomial(ds(&[(1, 2)])).is_err());
    }

    #[test]
    fn criteria_agree_on_small_subsets() {
        for k in 1..=6 {
            for p in DetSet::all_of_size(k) {
                assert_eq!(is_remarkable(p), is_remarkable_even(p), "{p}");
                if is_remarkable(p) {
                    let f = factor_as_theta_monomial(p).unwrap();
                    assert!(f.chi5_power <= 1);
                    let m = p.even_multiplicities();
                    // odd multiplicities occur exactly where chi5 contributes
                    assert!(m.iter().all(|&x| x % 2 == f.chi5_power));
                }
                assert_eq!(is_modular(p), is_modular_by_characters(p), "{p}");
            }
        }
    }

    #[test]
    fn nonreducible_census_matches_graph_counts() {
        let mut counts = [0usize; 7];
        let mut size5 = 0;
        for k in 1..=6 {
            for p in DetSet::all_of_size(k) {
                // S-vector oracle independent of graph shapes
                let bare = is_remarkable(p) && !p.proper_subsets().any(is_remarkable);
                if bare && k == 5 {
                    size5 += 1;
                }
                assert!(!(bare && k == 6));
                match classify_nonreducible(p) {
                    NonReducible::Type(t) => {
                        assert!(k <= 5);
                        counts[t as usize] += 1;
                    }
                    NonReducible::Unmatched => panic!("{p} unmatched"),
                    _ => {}
                }
            }
        }
        // triangles C(6,3); matchings 6!/(2³3!); 4-cycles C(6,4)·3; star+pair 6·C(5,3);
        // 5-cycles 6·4!/2; the rest of size five is star-of-3 plus star-of-2
        let binom = |n: usize, k: usize| (0..k).fold(1, |a, i| a * (n - i) / (i + 1));
        assert_eq!(counts[1], binom(6, 3));
        assert_eq!(counts[2], 720 / (8 * 6));
        assert_eq!(counts[3], binom(6, 4) * 3);
        assert_eq!(counts[4], 6 * binom(5, 3));
        assert_eq!(counts[5], 6 * 24 / 2);
        assert_eq!(counts[6], size5 - counts[5]);
        assert_eq!(counts[6], 96);
    }
}
