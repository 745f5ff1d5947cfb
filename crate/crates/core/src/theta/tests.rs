use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::chars::{Char2, EVEN, ODD};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ev(eps: f64) -> ThetaEvaluator {
    ThetaEvaluator::new(eps, Precision::DoubleDouble).unwrap()
}

/// Genus-1 `Σ exp(πi(x²τ + x·b))`, `x = n + a/2`, summed directly.
fn genus1(a: u8, b: u8, tau: Complex64) -> Complex64 {
    (-40i64..=40)
        .map(|n| {
            let x = n as f64 + f64::from(a) * 0.5;
            (Complex64::i() * PI * (tau * x * x + x * f64::from(b))).exp()
        })
        .sum()
}

/// Genus-1 `∂/∂z` at `z = 0`: `Σ 2πi x exp(πi(x²τ + x·b))`.
fn genus1_deriv(a: u8, b: u8, tau: Complex64) -> Complex64 {
    (-40i64..=40)
        .map(|n| {
            let x = n as f64 + f64::from(a) * 0.5;
            Complex64::i() * 2.0 * PI * x * (Complex64::i() * PI * (tau * x * x + x * f64::from(b))).exp()
        })
        .sum()
}

fn close(a: &ApproxValue, b: Complex64, slack: f64) -> bool {
    (a.value - b).norm() <= a.abs_error + slack
}

fn samples(n: usize, seed: u64) -> Vec<SiegelPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| SiegelPoint::random(&mut rng, 0.3)).collect()
}

#[test]
fn siegel_point_validation_and_parsing() {
    assert!(SiegelPoint::diagonal(c(0.0, -1.0), c(0.0, 1.0)).is_err());
    assert!(SiegelPoint::new(c(0.0, 1.0), c(0.0, 2.0), c(0.0, 1.0)).is_err());
    let t: SiegelPoint = "0.1,1.2,0.3,0.2,-0.5,0.9".parse().unwrap();
    assert_eq!(t.to_reals(), [0.1, 1.2, 0.3, 0.2, -0.5, 0.9]);
    assert_eq!(t.to_string().parse::<SiegelPoint>().unwrap(), t);
    assert!("1,2,3".parse::<SiegelPoint>().is_err());
    let j = serde_json::to_string(&t).unwrap();
    assert_eq!(serde_json::from_str::<SiegelPoint>(&j).unwrap(), t);
    assert!((SiegelPoint::i_identity().im_min_eigenvalue() - 1.0).abs() < 1e-15);
}

#[test]
fn odd_constants_vanish() {
    let e = ev(1e-14);
    for tau in samples(3, 1) {
        for n in ODD {
            let v = e.theta_constant(n, &tau).unwrap();
            assert!(v.contains_zero() || v.norm() < 1e-14, "{n} {v:?}");
        }
    }
}

#[test]
fn identity_point_is_square_of_genus1_nullwert() {
    let e = ev(1e-14);
    let tau = SiegelPoint::i_identity();
    let v = e.theta_constant(EVEN[0], &tau).unwrap();
    let g = genus1(0, 0, Complex64::i());
    assert!(close(&v, g * g, 1e-14), "{v:?} vs {}", g * g);
    assert!(v.abs_error <= 1e-14);
    // θ₀₀(i) = π^{1/4}/Γ(3/4)
    let known = PI.powf(0.25) / 1.225_416_702_465_177_6;
    assert!((g.re - known).abs() < 1e-14);
}

#[test]
fn diagonal_points_factorize() {
    let e = ev(1e-14);
    let (t1, t2) = (c(0.3, 0.9), c(-0.4, 1.3));
    let tau = SiegelPoint::diagonal(t1, t2).unwrap();
    let s = e.snapshot(&tau).unwrap();
    for m in Char2::all() {
        let (p, q) = (m.mprime(), m.mdprime());
        let expect = genus1(p[0], q[0], t1) * genus1(p[1], q[1], t2);
        assert!(close(&s.theta[m.bits() as usize], expect, 1e-14), "{m}");
        let g = s.grad[m.bits() as usize];
        let d1 = genus1_deriv(p[0], q[0], t1) * genus1(p[1], q[1], t2);
        let d2 = genus1(p[0], q[0], t1) * genus1_deriv(p[1], q[1], t2);
        assert!(close(&g.g1, d1, 1e-13) && close(&g.g2, d2, 1e-13), "{m}");
    }
    // n1 = [01;01]: the first factor is even, the second an odd derivative
    let g = e.theta_gradient(ODD[0], &tau).unwrap();
    assert!(g.g1.contains_zero());
    assert!(g.g2.norm() > 1e-3);
}

#[test]
fn gradient_rejects_even_input() {
    let e = ev(1e-12);
    assert_eq!(e.theta_gradient(EVEN[0], &SiegelPoint::i_identity()), Err(Error::EvenCharacteristic(EVEN[0])));
    assert!(e.jacobian_det(EVEN[1], ODD[0], &SiegelPoint::i_identity()).is_err());
}

#[test]
fn even_gradients_vanish() {
    let e = ev(1e-14);
    let s = e.snapshot(&samples(1, 4)[0]).unwrap();
    for m in EVEN {
        let g = s.grad[m.bits() as usize];
        assert!(g.g1.norm() <= g.g1.abs_error + 1e-14 && g.g2.norm() <= g.g2.abs_error + 1e-14);
    }
}

#[test]
fn even_lattice_shift_of_tau_is_a_period_for_integral_mprime() {
    let e = ev(1e-14);
    let tau = samples(1, 2)[0];
    for shift in [[2.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 2.0]] {
        let r = tau.to_reals();
        let moved = SiegelPoint::from_reals([r[0] + shift[0], r[1], r[2] + shift[1], r[3], r[4] + shift[2], r[5]]).unwrap();
        for m in EVEN.iter().filter(|m| m.mprime() == [0, 0]) {
            let a = e.theta_constant(*m, &tau).unwrap();
            let b = e.theta_constant(*m, &moved).unwrap();
            assert!((a.value - b.value).norm() <= a.abs_error + b.abs_error + 1e-14, "{m}");
        }
    }
}

#[test]
fn reduction_of_integer_characteristics() {
    let e = ev(1e-14);
    let tau = samples(1, 3)[0];
    let zero = [c(0.0, 0.0); 2];
    for m in Char2::all() {
        let base = e.theta_constant(m, &tau).unwrap();
        let (p, q) = (m.mprime(), m.mdprime());
        for n in [[1i64, 0, 0, 1], [0, 1, 1, 1], [1, 1, 1, 0], [-1, 2, 0, -1]] {
            let chr = [p[0] as i64 + 2 * n[0], p[1] as i64 + 2 * n[1], q[0] as i64 + 2 * n[2], q[1] as i64 + 2 * n[3]];
            let shifted = e.theta_series(chr, &tau, zero).unwrap();
            let dot = p[0] as i64 * n[2] + p[1] as i64 * n[3];
            let sign = if dot.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            assert!((shifted.value - base.value * sign).norm() <= shifted.abs_error + base.abs_error + 1e-14, "{m} {n:?}");
        }
    }
}

#[test]
fn gradients_match_central_differences() {
    let e = ev(1e-14);
    let h = 1e-6;
    for tau in samples(10, 5) {
        let s = e.snapshot(&tau).unwrap();
        for n in ODD {
            let (p, q) = (n.mprime(), n.mdprime());
            let chr = [p[0] as i64, p[1] as i64, q[0] as i64, q[1] as i64];
            let g = s.grad[n.bits() as usize];
            for (axis, comp) in [(0usize, g.g1), (1, g.g2)] {
                let mut zp = [c(0.0, 0.0); 2];
                let mut zm = zp;
                zp[axis] = c(h, 0.0);
                zm[axis] = c(-h, 0.0);
                let fd = (e.theta_series(chr, &tau, zp).unwrap().value - e.theta_series(chr, &tau, zm).unwrap().value) / (2.0 * h);
                assert!((fd - comp.value).norm() < 1e-6, "{n} axis {axis}: {fd} vs {}", comp.value);
            }
        }
    }
}

#[test]
fn doubling_the_radius_stays_within_claimed_error() {
    let e = ev(1e-14);
    let wide = e.with_radius_scale(2.0);
    for tau in samples(3, 6) {
        let a = e.snapshot(&tau).unwrap();
        let b = wide.snapshot(&tau).unwrap();
        assert!(b.radius >= 2.0 * a.radius - 1e-9);
        for k in 0..16 {
            assert!((a.theta[k].value - b.theta[k].value).norm() <= a.theta[k].abs_error);
            assert!((a.grad[k].g1.value - b.grad[k].g1.value).norm() <= a.grad[k].g1.abs_error);
            assert!((a.grad[k].g2.value - b.grad[k].g2.value).norm() <= a.grad[k].g2.abs_error);
        }
        for k in 0..15 {
            assert!((a.det[k].value - b.det[k].value).norm() <= a.det[k].abs_error);
        }
    }
}

#[test]
fn determinant_is_antisymmetric() {
    let e = ev(1e-12);
    let tau = samples(1, 7)[0];
    for a in ODD {
        assert_eq!(e.jacobian_det(a, a, &tau).unwrap(), ApproxValue::zero());
        for b in ODD.iter().filter(|b| **b != a) {
            let x = e.jacobian_det(a, *b, &tau).unwrap();
            let y = e.jacobian_det(*b, a, &tau).unwrap();
            assert_eq!(x.value, -y.value);
        }
    }
}

#[test]
fn f64_backend_reports_its_floor() {
    let tau = SiegelPoint::i_identity();
    let tight = ThetaEvaluator::new(1e-14, Precision::Double).unwrap();
    assert!(matches!(tight.snapshot(&tau), Err(Error::PrecisionExhausted { .. })));
    let loose = ThetaEvaluator::new(1e-10, Precision::Double).unwrap();
    let a = loose.snapshot(&tau).unwrap();
    let b = ev(1e-14).snapshot(&tau).unwrap();
    for k in 0..16 {
        assert!((a.theta[k].value - b.theta[k].value).norm() <= a.theta[k].abs_error + b.theta[k].abs_error);
    }
    assert!(ThetaEvaluator::new(0.0, Precision::Double).is_err());
}

#[test]
fn jacobi_identities_hold_with_one_published_sign_flipped() {
    let e = ev(1e-14);
    // on the diagonal the (1,3) determinant vanishes and both signs fit
    for tau in samples(3, 8) {
        let s = e.snapshot(&tau).unwrap();
        for row in verify::verify_jacobi_table(&s) {
            let flipped = crate::jacobi::JACOBI_ERRATA.contains(&(row.pair.i as usize + 1, row.pair.j as usize + 1));
            if flipped {
                assert!(!row.pass && row.opposite_residual < 1e-10, "{row:?}");
            } else {
                assert!(row.pass && row.residual < 1e-10, "{row:?}");
            }
        }
    }
}

#[test]
fn printed_riemann_relations_except_errata() {
    let e = ev(1e-14);
    for tau in samples(4, 9) {
        let s = e.snapshot(&tau).unwrap();
        for (k, row) in verify::verify_riemann(&s).iter().enumerate() {
            let erratum = k < 15 && crate::riemann::R2_ERRATA.contains(&(k + 1));
            assert_eq!(row.pass, !erratum, "{row:?}");
        }
        let fixed = verify::riemann_rows(&crate::riemann::r2_catalog(), &crate::riemann::r4_catalog(), &s);
        assert!(fixed.iter().all(|r| r.pass && r.residual < 1e-10));
    }
}

#[test]
fn transformation_laws_on_the_basis() {
    use crate::sympl::G_BASIS;
    use verify::TransformObject;
    let e = ev(1e-14);
    let objects: Vec<TransformObject> = (0..10)
        .flat_map(|i| (i..10).map(move |j| TransformObject::ThetaPair(i, j)))
        .chain(OddPair::lex().map(TransformObject::Det))
        .collect();
    for tau in samples(2, 10) {
        for g in G_BASIS {
            for row in verify::verify_transformation(&e, &g, &objects, &tau).unwrap() {
                assert!(row.pass && row.residual < 1e-9, "{g}: {row:?}");
            }
        }
        let id = verify::verify_transformation(&e, &SpMatrix::identity(), &objects, &tau).unwrap();
        assert!(id.iter().all(|r| r.residual == 0.0));
    }
}

#[test]
fn transform_object_parsing() {
    use verify::TransformObject;
    assert_eq!("D12".parse::<TransformObject>().unwrap(), TransformObject::Det(OddPair::new(0, 1)));
    assert_eq!("th1*th10".parse::<TransformObject>().unwrap(), TransformObject::ThetaPair(0, 9));
    assert!("D11".parse::<TransformObject>().is_err());
    assert!("th0*th1".parse::<TransformObject>().is_err());
}

#[test]
fn determinants_are_cusp_forms_and_theta_one_is_not() {
    use crate::relcat::Monomial;
    let e = ev(1e-14);
    let lambdas = [5.0, 10.0, 20.0, 40.0];
    let d = Monomial::dets(&[OddPair::new(0, 1)]);
    let rows = verify::siegel_limit(&e, &d, c(0.1, 1.1), verify::DEFAULT_LIMIT_OFFDIAG, &lambdas).unwrap();
    for w in rows.windows(2) {
        assert!(w[1].relative < w[0].relative);
    }
    let t = Monomial::thetas(&[0, 0]);
    let rows = verify::siegel_limit(&e, &t, c(0.1, 1.1), verify::DEFAULT_LIMIT_OFFDIAG, &lambdas).unwrap();
    assert!(rows.iter().all(|r| r.magnitude > 0.1 * rows[0].magnitude));
    for lambda in lambdas {
        let tau = SiegelPoint::new(c(0.1, 1.1), verify::DEFAULT_LIMIT_OFFDIAG, c(0.0, lambda)).unwrap();
        assert!(ODD.iter().all(|n| e.theta_constant(*n, &tau).unwrap().contains_zero()));
    }
}

proptest::proptest! {
    #![proptest_config(proptest::test_runner::Config::with_cases(16))]
    #[test]
    fn snapshot_matches_single_evaluations(seed in 0u64..1000) {
        let e = ev(1e-13);
        let tau = samples(1, seed)[0];
        let s = e.snapshot(&tau).unwrap();
        for m in Char2::all() {
            let v = e.theta_constant(m, &tau).unwrap();
            let w = s.theta[m.bits() as usize];
            proptest::prop_assert!((v.value - w.value).norm() <= v.abs_error + w.abs_error);
        }
    }
}
