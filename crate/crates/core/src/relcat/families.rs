//! Generators for the determinant relation families `rb1`–`rb8` and the mixed families `rc1`–`rc5`.

use std::collections::BTreeMap;

use serde::Serialize;

use super::remarkable::{classify_nonreducible, factor_as_theta_monomial, is_modular, is_remarkable, DetSet, NonReducible};
use super::{resolve_signs, sign_solutions, Family, Monomial, Relation};
use crate::chars::{classify_set, CharSet, OrbitClass};
use crate::error::{Error, Result};
use crate::jacobi::{pair_of_quad, OddPair};
use crate::linalg::{gf2_rank, rational_rank};
use crate::riemann::{derived_quartic, verified_r2};
use crate::theta::ThetaSnapshot;

fn minus_quads() -> Vec<CharSet> {
    OddPair::lex().map(OddPair::quad).collect()
}

fn det_of(q: CharSet) -> OddPair {
    pair_of_quad(q).expect("quadruple from the Jacobi table")
}

/// `∏ D(Q)^{e}` for quadruples with exponents.
fn det_monomial(factors: &[(CharSet, u8)]) -> Monomial {
    let mut m = Monomial::one();
    for &(q, e) in factors {
        m.det_exp[det_of(q).lex_index()] += e;
    }
    m
}

fn label(k: usize) -> String {
    format!("m{}", k + 1)
}

/// The two `C4minus` quadruples through a pair of even characteristics.
fn quads_through(a: usize, b: usize) -> Vec<CharSet> {
    minus_quads().into_iter().filter(|q| q.contains(a) && q.contains(b)).collect()
}

/// For `m_i ∈ M ∈ C4minus`, the unique pair of other quadruples through `m_i` with `P △ Q = Mᶜ`, ordered by pair index.
fn complement_pairs(m: CharSet) -> Result<Vec<(usize, CharSet, CharSet)>> {
    let quads = minus_quads();
    m.iter()
        .map(|mi| {
            let through: Vec<CharSet> = quads.iter().copied().filter(|q| q.contains(mi) && *q != m).collect();
            let mut found = Vec::new();
            for (x, p) in through.iter().enumerate() {
                for q in &through[x + 1..] {
                    if p.sym_diff(*q) == m.complement() {
                        found.push((*p, *q));
                    }
                }
            }
            match found.as_slice() {
                [(p, q)] => Ok((mi, *p, *q)),
                _ => Err(Error::Internal(format!("{} complementary pairs through {} in {m}", found.len(), label(mi)))),
            }
        })
        .collect()
}

pub fn rb1(snaps: &[ThetaSnapshot]) -> Result<Vec<Relation>> {
    (0..10)
        .map(|m| {
            let through: Vec<CharSet> = minus_quads().into_iter().filter(|q| q.contains(m)).collect();
            let meets_in_m = |t: &[CharSet]| {
                t.iter().enumerate().all(|(x, a)| t[x + 1..].iter().all(|b| a.intersection(*b) == CharSet::from_indices([m])))
            };
            let split = (1..6)
                .flat_map(|a| (a + 1..6).map(move |b| [0, a, b]))
                .map(|idx| {
                    let first: Vec<CharSet> = idx.iter().map(|&k| through[k]).collect();
                    let second: Vec<CharSet> = (0..6).filter(|k| !idx.contains(k)).map(|k| through[k]).collect();
                    (first, second)
                })
                .find(|(f, s)| meets_in_m(f) && meets_in_m(s))
                .ok_or_else(|| Error::Internal(format!("no triple split at {}", label(m))))?;
            let terms = vec![
                det_monomial(&split.0.iter().map(|q| (*q, 1)).collect::<Vec<_>>()),
                det_monomial(&split.1.iter().map(|q| (*q, 1)).collect::<Vec<_>>()),
            ];
            resolve_signs(Family::Rb(1), label(m), terms, snaps)
        })
        .collect()
}

fn plus_sextuples() -> Vec<CharSet> {
    CharSet::all_of_size(6).filter(|s| classify_set(*s) == OrbitClass::C6_PLUS).collect()
}

pub fn rb2(snaps: &[ThetaSnapshot]) -> Result<Vec<Relation>> {
    plus_sextuples()
        .into_iter()
        .map(|big| {
            let touching: Vec<CharSet> = minus_quads().into_iter().filter(|q| q.intersection(big).len() == 3).collect();
            if touching.len() != 8 {
                return Err(Error::Internal(format!("{big}: {} quadruples meet it in a triple", touching.len())));
            }
            let mult = |qs: &[CharSet]| {
                let mut v = [0u8; 10];
                for q in qs {
                    for k in q.iter() {
                        v[k] += 1;
                    }
                }
                v
            };
            let mut splits = Vec::new();
            for mask in 0u8..=255 {
                if mask.count_ones() != 4 || mask & 1 == 0 {
                    continue;
                }
                let a: Vec<CharSet> = (0..8).filter(|k| mask >> k & 1 == 1).map(|k| touching[k]).collect();
                let b: Vec<CharSet> = (0..8).filter(|k| mask >> k & 1 == 0).map(|k| touching[k]).collect();
                if mult(&a) == mult(&b) {
                    splits.push((a, b));
                }
            }
            let (a, b) = match splits.as_slice() {
                [one] => one.clone(),
                _ => return Err(Error::Internal(format!("{big}: {} balanced splits", splits.len()))),
            };
            let terms = vec![
                det_monomial(&a.iter().map(|q| (*q, 1)).collect::<Vec<_>>()),
                det_monomial(&b.iter().map(|q| (*q, 1)).collect::<Vec<_>>()),
            ];
            resolve_signs(Family::Rb(2), big.to_string(), terms, snaps)
        })
        .collect()
}

pub fn rb3(snaps: &[ThetaSnapshot]) -> Result<Vec<Relation>> {
    verified_r2()
        .into_iter()
        .map(|r| {
            let terms = r
                .pairs()
                .iter()
                .map(|&(a, b)| det_monomial(&quads_through(a - 1, b - 1).iter().map(|q| (*q, 1)).collect::<Vec<_>>()))
                .collect();
            resolve_signs(Family::Rb(3), r.support().to_string(), terms, snaps)
        })
        .collect()
}

fn multiplicity(qs: &[CharSet]) -> [i32; 10] {
    let mut v = [0i32; 10];
    for q in qs {
        for k in q.iter() {
            v[k] += 1;
        }
    }
    v
}

pub fn rb4(snaps: &[ThetaSnapshot]) -> Result<Vec<Relation>> {
    let quads = minus_quads();
    let mut out = Vec::new();
    for r in verified_r2() {
        let big = r.support();
        let pairs: Vec<(usize, usize)> = r.pairs().iter().map(|&(a, b)| (a - 1, b - 1)).collect();
        let options: Vec<Vec<CharSet>> = pairs.iter().map(|&(a, b)| quads_through(a, b)).collect();
        for x in big.complement().iter() {
            let others: Vec<usize> = big.complement().iter().filter(|&y| y != x).collect();
            let mut found: Vec<Vec<Monomial>> = Vec::new();
            for pick in 0..8usize {
                let choice: Vec<CharSet> = (0..3).map(|t| options[t][pick >> t & 1]).collect();
                if choice.iter().any(|q| q.contains(x)) {
                    continue;
                }
                let missing: Vec<usize> = choice
                    .iter()
                    .map(|q| others.iter().copied().find(|&y| !q.contains(y)).expect("a triple cannot fit in two slots"))
                    .collect();
                // pairs of further quadruples whose product is θ_missing² times a common factor
                let cands: Vec<BTreeMap<[i32; 10], Vec<(CharSet, CharSet)>>> = (0..3)
                    .map(|t| {
                        let mut map: BTreeMap<[i32; 10], Vec<(CharSet, CharSet)>> = BTreeMap::new();
                        for (i, p) in quads.iter().enumerate() {
                            for q in &quads[i + 1..] {
                                if *p == choice[t] || *q == choice[t] {
                                    continue;
                                }
                                let mut key = multiplicity(&[*p, *q]);
                                key[missing[t]] -= 2;
                                if key.iter().all(|&v| v >= 0) {
                                    map.entry(key).or_default().push((*p, *q));
                                }
                            }
                        }
                        map
                    })
                    .collect();
                for (key, first) in &cands[0] {
                    let (Some(second), Some(third)) = (cands[1].get(key), cands[2].get(key)) else { continue };
                    for p0 in first {
                        for p1 in second {
                            for p2 in third {
                                let all: std::collections::BTreeSet<CharSet> = [p0.0, p0.1, p1.0, p1.1, p2.0, p2.1].into();
                                if all.len() < 6 {
                                    continue;
                                }
                                found.push(
                                    [p0, p1, p2]
                                        .iter()
                                        .zip(&choice)
                                        .map(|(p, q)| det_monomial(&[(p.0, 1), (p.1, 1), (*q, 2)]))
                                        .collect(),
                                );
                            }
                        }
                    }
                }
            }
            let key = format!("{big}/{}", label(x));
            match found.as_slice() {
                [terms] => out.push(resolve_signs(Family::Rb(4), key, terms.clone(), snaps)?),
                _ => return Err(Error::Internal(format!("rb4 {key}: {} candidate triplets", found.len()))),
            }
        }
    }
    Ok(out)
}

pub fn rb5(snaps: &[ThetaSnapshot]) -> Result<Vec<Relation>> {
    minus_quads()
        .into_iter()
        .map(|m| {
            let terms = complement_pairs(m)?.iter().map(|&(_, p, q)| det_monomial(&[(p, 2), (q, 2)])).collect();
            let rel = resolve_signs(Family::Rb(5), m.to_string(), terms, snaps)?;
            Ok(match derived_quartic(m) {
                Some((co, _)) => rel.with_note(format!("quartic from printed rows with coefficients {co:?}")),
                None => rel.with_note("no small combination of the printed quartics is supported here"),
            })
        })
        .collect()
}

/// Of the two vanishing exponent labelings, `rb6` keeps the lower-index quadruple of the first pair linear and `rb7` cubes it.
fn rb67(snaps: &[ThetaSnapshot], family: u8) -> Result<Vec<Relation>> {
    minus_quads()
        .into_iter()
        .map(|m| {
            let pairs = complement_pairs(m)?;
            let mut working: Vec<(u8, Relation)> = Vec::new();
            for lab in 0u8..16 {
                let terms: Vec<Monomial> = pairs
                    .iter()
                    .enumerate()
                    .map(|(k, &(_, p, q))| {
                        let (a, b) = if lab >> k & 1 == 0 { (p, q) } else { (q, p) };
                        det_monomial(&[(a, 1), (b, 3)])
                    })
                    .collect();
                let sols = sign_solutions(&terms, snaps);
                if let [signs] = sols.as_slice() {
                    let rel = Relation::new(
                        Family::Rb(family),
                        m.to_string(),
                        terms.iter().zip(signs).map(|(t, &s)| t.with_coeff(s)).collect(),
                    );
                    working.push((lab, rel));
                }
            }
            if working.len() != 2 || working[0].0 ^ working[1].0 != 15 {
                return Err(Error::SignSearchFailed(format!("rb6/rb7 {m}: {} labelings vanish", working.len())));
            }
            // pairs are ordered by pair index, so bit 0 clear means the lower-index quadruple of the first pair is linear
            let pick = if family == 6 { 0 } else { 1 };
            let (_, rel) = working.into_iter().find(|(lab, _)| lab & 1 == pick).expect("complementary labelings");
            Ok(rel)
        })
        .collect()
}

pub fn rb6(snaps: &[ThetaSnapshot]) -> Result<Vec<Relation>> {
    rb67(snaps, 6)
}

pub fn rb7(snaps: &[ThetaSnapshot]) -> Result<Vec<Relation>> {
    rb67(snaps, 7)
}

pub fn rb8(snaps: &[ThetaSnapshot]) -> Result<Vec<Relation>> {
    (0..10)
        .map(|m| {
            let terms = minus_quads().into_iter().filter(|q| q.contains(m)).map(|q| det_monomial(&[(q, 4)])).collect();
            resolve_signs(Family::Rb(8), label(m), terms, snaps)
        })
        .collect()
}

/// Determinant relations of family `k ∈ 1..=8`, signs resolved at `snaps`.
pub fn rb_catalog(k: u8, snaps: &[ThetaSnapshot]) -> Result<Vec<Relation>> {
    match k {
        1 => rb1(snaps),
        2 => rb2(snaps),
        3 => rb3(snaps),
        4 => rb4(snaps),
        5 => rb5(snaps),
        6 => rb6(snaps),
        7 => rb7(snaps),
        8 => rb8(snaps),
        _ => Err(Error::InvalidArgument(format!("no determinant family rb{k}"))),
    }
}

/// `∏D − sign·χ₅^h·∏θ²` for a remarkable product.
fn factored_relation(family: Family, p: DetSet) -> Result<Relation> {
    let f = factor_as_theta_monomial(p)?;
    let rhs = f.monomial();
    Ok(Relation::new(family, p.to_string(), vec![p.monomial(), rhs.with_coeff(-rhs.coeff)]))
}

fn edge(a: usize, b: usize) -> OddPair {
    OddPair::new(a, b)
}

/// Unions of two edge-disjoint triangles on the odd characteristics sharing exactly one vertex.
fn triangle_pairs() -> Vec<DetSet> {
    let tri: Vec<[usize; 3]> = (0..6).flat_map(|a| (a + 1..6).flat_map(move |b| (b + 1..6).map(move |c| [a, b, c]))).collect();
    let mut out = Vec::new();
    for (x, s) in tri.iter().enumerate() {
        for t in &tri[x + 1..] {
            let shared = s.iter().filter(|v| t.contains(v)).count();
            if shared == 1 {
                let e = |v: &[usize; 3]| [edge(v[0], v[1]), edge(v[1], v[2]), edge(v[0], v[2])];
                out.push(DetSet::from_pairs(&[e(s), e(t)].concat()));
            }
        }
    }
    out
}

/// Mixed relations of family `k ∈ 1..=5`.
pub fn rc_catalog(k: u8) -> Result<Vec<Relation>> {
    let family = Family::Rc(k);
    let by_type = |t: u8| -> Vec<DetSet> {
        (1..=5)
            .flat_map(DetSet::all_of_size)
            .filter(|p| classify_nonreducible(*p) == NonReducible::Type(t))
            .collect()
    };
    let products: Vec<DetSet> = match k {
        1 => OddPair::lex().map(|p| DetSet::from_pairs(&[p])).collect(),
        2 => by_type(2),
        3 => by_type(3),
        4 => by_type(6),
        5 => triangle_pairs(),
        _ => return Err(Error::InvalidArgument(format!("no mixed family rc{k}"))),
    };
    products
        .into_iter()
        .map(|p| {
            if k == 1 {
                let pair = p.pairs().next().expect("one pair");
                let q: Vec<usize> = pair.quad().iter().flat_map(|x| [x, x]).collect();
                let lhs = Monomial::dets(&[pair, pair]);
                return Ok(Relation::new(family, pair.to_string(), vec![lhs, Monomial::thetas(&q).with_coeff(-1)]));
            }
            if !is_remarkable(p) || !is_modular(p) {
                return Err(Error::Internal(format!("{family} candidate {p} is not a modular remarkable product")));
            }
            factored_relation(family, p)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RbReport {
    pub family: Family,
    pub count: usize,
    pub rational_rank: usize,
    /// Only computed when the monomial basis has at most 64 elements.
    pub gf2_rank: Option<usize>,
}

/// Ranks of the coefficient matrix of `relations` in the basis of all monomials they use.
pub fn rank_report(family: Family, relations: &[Relation]) -> RbReport {
    let mut basis: Vec<Monomial> = Vec::new();
    for r in relations {
        for t in &r.terms {
            if !basis.iter().any(|b| b.same_variables(t)) {
                basis.push(t.with_coeff(1));
            }
        }
    }
    let rows: Vec<Vec<i64>> = relations
        .iter()
        .map(|r| {
            basis
                .iter()
                .map(|b| r.terms.iter().filter(|t| t.same_variables(b)).map(|t| t.coeff).sum())
                .collect()
        })
        .collect();
    let gf2 = (basis.len() <= 64).then(|| {
        let bits: Vec<u64> = rows
            .iter()
            .map(|row| row.iter().enumerate().fold(0u64, |m, (k, &c)| if c.rem_euclid(2) == 1 { m | 1 << k } else { m }))
            .collect();
        gf2_rank(&bits)
    });
    RbReport { family, count: relations.len(), rational_rank: rational_rank(&rows), gf2_rank: gf2 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi::{verified_sign, JACOBI_TABLE};
    use crate::numeric::Precision;
    use crate::relcat::{certify, sample_snapshots};
    use crate::theta::ThetaEvaluator;
    use std::sync::OnceLock;

    fn snaps() -> &'static (Vec<ThetaSnapshot>, Vec<ThetaSnapshot>) {
        static S: OnceLock<(Vec<ThetaSnapshot>, Vec<ThetaSnapshot>)> = OnceLock::new();
        S.get_or_init(|| {
            let ev = ThetaEvaluator::new(1e-14, Precision::DoubleDouble).unwrap();
            (sample_snapshots(&ev, 11, 5, 0.3).unwrap(), sample_snapshots(&ev, 12, 10, 0.3).unwrap())
        })
    }

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    /// Replaces each `D(N)` by its evaluated Jacobi monomial `s·θθθθ`.
    fn substitute_jacobi(m: &Monomial) -> Monomial {
        let mut out = Monomial::thetas(&[]).with_coeff(m.coeff);
        for (k, &e) in m.det_exp.iter().enumerate() {
            let pair = OddPair::from_lex_index(k);
            let idx: Vec<usize> = JACOBI_TABLE[k].thetas.iter().map(|t| t - 1).collect();
            let sign = i64::from(verified_sign(pair)).pow(u32::from(e));
            out = out.times(&Monomial::thetas(&idx).pow(e).with_coeff(sign));
        }
        for (i, &e) in m.theta_exp.iter().enumerate() {
            out.theta_exp[i] += e;
        }
        out
    }

    #[test]
    fn determinant_family_counts() {
        let (fit, _) = snaps();
        let plus6 = plus_sextuples().len();
        assert_eq!(plus6, 15);
        let expected = [10, plus6, plus6, plus6 * 4, 15, 15, 15, 10];
        for k in 1..=8u8 {
            assert_eq!(rb_catalog(k, fit).unwrap().len(), expected[usize::from(k) - 1], "rb{k}");
        }
        assert!(rb_catalog(9, fit).is_err());
    }

    #[test]
    fn mixed_family_counts_match_graph_counts() {
        // perfect matchings of K6, 4-cycles of K6, triangle pairs with one shared vertex
        let matchings = 5 * 3;
        let four_cycles = binomial(6, 4) * 3;
        let bowties = 6 * binomial(5, 2) * binomial(3, 2) / 2;
        let star_types = (1..=5)
            .flat_map(DetSet::all_of_size)
            .filter(|p| classify_nonreducible(*p) == NonReducible::Type(6))
            .count();
        let expected = [15, matchings, four_cycles, star_types, bowties];
        for k in 1..=5u8 {
            assert_eq!(rc_catalog(k).unwrap().len(), expected[usize::from(k) - 1], "rc{k}");
        }
        assert_eq!(star_types, 96);
        assert!(rc_catalog(6).is_err());
    }

    #[test]
    fn every_family_is_homogeneous_and_certifies() {
        let (fit, check) = snaps();
        for family in Family::all() {
            let rels = crate::relcat::catalog(family, fit).unwrap();
            assert!(rels.iter().all(Relation::is_homogeneous), "{family}");
            for row in certify(&rels, check) {
                assert!(row.pass, "{row:?}");
            }
        }
    }

    #[test]
    fn jacobi_substitution_preserves_vanishing() {
        let (fit, check) = snaps();
        for k in 1..=8 {
            for r in rb_catalog(k, fit).unwrap() {
                let thetas = Relation::new(r.family, r.key.clone(), r.terms.iter().map(substitute_jacobi).collect());
                assert!(thetas.terms.iter().all(|t| t.det_exp == [0; 15]));
                for s in &check[..3] {
                    assert!(thetas.residual(s).within_budget(), "{thetas}");
                }
            }
        }
    }

    #[test]
    fn rb1_triples_factor_through_one_square() {
        for r in rb1(&snaps().0).unwrap() {
            let m: usize = r.key[1..].parse::<usize>().unwrap() - 1;
            for t in &r.terms {
                let f = factor_as_theta_monomial(DetSet::from_pairs(&det_pairs(t))).unwrap();
                assert_eq!(f.chi5_power, 1);
                let mut want = [0u8; 10];
                want[m] = 1;
                assert_eq!(f.squares, want);
            }
        }
    }

    fn det_pairs(t: &Monomial) -> Vec<OddPair> {
        (0..15).filter(|&k| t.det_exp[k] > 0).map(OddPair::from_lex_index).collect()
    }

    #[test]
    fn rb8_has_rank_five() {
        let rels = rb8(&snaps().0).unwrap();
        let rep = rank_report(Family::Rb(8), &rels);
        assert_eq!((rep.count, rep.rational_rank, rep.gf2_rank), (10, 5, Some(5)));
    }

    #[test]
    fn rb5_quartics_are_traced() {
        let rels = rb5(&snaps().0).unwrap();
        assert!(rels.iter().all(|r| r.note.is_some()));
        assert!(rels.iter().all(|r| r.terms.iter().all(|t| t.det_exp.iter().filter(|&&e| e == 2).count() == 2)));
    }

    #[test]
    fn mixed_left_sides_are_modular() {
        for k in 2..=5 {
            for r in rc_catalog(k).unwrap() {
                assert!(is_modular(DetSet::from_pairs(&det_pairs(&r.terms[0]))), "{r}");
            }
        }
    }

    #[test]
    fn bowtie_right_sides() {
        for r in rc_catalog(5).unwrap() {
            let rhs = &r.terms[1];
            let mut exps = rhs.theta_exp;
            exps.sort_unstable();
            assert_eq!(exps, [2, 2, 2, 2, 2, 2, 2, 2, 4, 4], "{r}");
            assert_eq!(rhs.det_exp, [0; 15]);
        }
    }

    #[test]
    fn factor_output_is_normal_form() {
        for k in 2..=5 {
            for r in rc_catalog(k).unwrap() {
                let f = factor_as_theta_monomial(DetSet::from_pairs(&det_pairs(&r.terms[0]))).unwrap();
                assert!(f.chi5_power <= 1);
                let m = f.monomial();
                assert!((0..10).all(|i| m.theta_exp[i] == 2 * f.squares[i] + f.chi5_power));
            }
        }
    }
}
