use std::f64::consts::PI;

use gencluster::dilog::{
    kernel_integral, li2, neg_li2_higher, pcirc_transform, rogers_dilog, rogers_dilog_higher,
    rogers_dilog_higher_euler, rogers_dilog_infinity, rogers_dilog_infinity_cutoff, DilogConfig, PolyP,
};
use gencluster::quad::QuadratureConfig;
use gencluster::Sign;
use proptest::prelude::*;

fn series_li2(t: f64) -> f64 {
    (1..400).map(|k| t.powi(k) / (k * k) as f64).sum()
}

fn poly_strategy() -> impl Strategy<Value = PolyP> {
    prop::collection::vec(0.0f64..3.0, 0..4).prop_map(|inner| {
        let mut c = vec![1.0];
        c.extend(inner);
        c.push(1.0);
        PolyP::new(c).unwrap()
    })
}

#[test]
fn li2_against_power_series_and_special_values() {
    for i in -50..=50 {
        let t = i as f64 / 100.0;
        assert!((li2(t) - series_li2(t)).abs() < 1e-14, "t = {t}");
    }
    let ln2 = 2f64.ln();
    assert!((li2(-1.0) + PI * PI / 12.0).abs() < 1e-14);
    assert!((li2(0.5) - (PI * PI / 12.0 - ln2 * ln2 / 2.0)).abs() < 1e-14);
    assert!((li2(1.0) - PI * PI / 6.0).abs() < 1e-15);
    assert!(li2(1.5).is_nan());
}

#[test]
fn rogers_special_values() {
    assert!((rogers_dilog(1.0).unwrap() - PI * PI / 12.0).abs() < 1e-14);
    assert_eq!(rogers_dilog(0.0).unwrap(), 0.0);
    assert!(rogers_dilog(-1.0).is_err());
    let x = 3.0;
    assert!((rogers_dilog(x).unwrap() + rogers_dilog(1.0 / x).unwrap() - PI * PI / 6.0).abs() < 1e-11);
}

#[test]
fn degree_one_matches_rogers() {
    let cfg = DilogConfig::default();
    let p = PolyP::binomial(1);
    for x in [0.01, 0.3, 1.0, 1.7, 4.0, 250.0] {
        let a = rogers_dilog_higher(&p, x, &cfg).unwrap();
        assert!((a - rogers_dilog(x).unwrap()).abs() < 1e-10, "x = {x}");
    }
}

#[test]
fn product_of_linear_factors() {
    // (1 + a x)(1 + x / a): L̃ splits into two classical terms plus a log correction
    let cfg = DilogConfig::default();
    for a in [0.5f64, 2.0, 3.5] {
        let p = PolyP::new(vec![1.0, a + 1.0 / a, 1.0]).unwrap();
        for x in [0.2, 1.0, 2.5, 9.0] {
            let expected = rogers_dilog(a * x).unwrap() + rogers_dilog(x / a).unwrap()
                + 0.5 * a.ln() * ((a * x).ln_1p() - (x / a).ln_1p());
            let got = rogers_dilog_higher(&p, x, &cfg).unwrap();
            assert!((got - expected).abs() < 1e-10, "a = {a}, x = {x}: {got} vs {expected}");
        }
    }
}

#[test]
fn binomial_reduction_grid() {
    let cfg = DilogConfig::default();
    for d in [1usize, 2, 3, 5] {
        for x in [0.3f64, 1.0, 1.7, 4.0] {
            let lhs = rogers_dilog_higher(&PolyP::binomial(d), x, &cfg).unwrap();
            let rhs = rogers_dilog(x.powi(d as i32)).unwrap() / d as f64;
            assert!((lhs - rhs).abs() < 1e-9, "d = {d}, x = {x}");
        }
    }
}

#[test]
fn infinity_values() {
    let cfg = DilogConfig::default();
    let v = rogers_dilog_infinity(&PolyP::binomial(2), &cfg).unwrap();
    assert!((v - PI * PI / 12.0).abs() < 1e-10);
    let p = PolyP::new(vec![1.0, 2.0, 5.0, 1.0]).unwrap();
    let exact = rogers_dilog_infinity(&p, &cfg).unwrap();
    let cut = rogers_dilog_infinity_cutoff(&p, 1e6, &cfg).unwrap();
    assert!((exact - cut).abs() < 1e-7);
}

#[test]
fn pcirc_is_reversal_for_minus() {
    let p = PolyP::new(vec![1.0, 2.0, 5.0, 1.0]).unwrap();
    assert_eq!(pcirc_transform(&p, Sign::Plus), p);
    assert_eq!(pcirc_transform(&p, Sign::Minus).coeffs(), &[1.0, 5.0, 2.0, 1.0]);
    assert!(PolyP::new(vec![2.0, 1.0]).is_err());
    assert!(PolyP::new(vec![1.0, -1.0, 1.0]).is_err());
}

#[test]
fn kernel_closed_forms() {
    let q = QuadratureConfig::default();
    let p2 = PolyP::binomial(2);
    let x: f64 = 2.5;
    let v = kernel_integral(&p2, 1, Sign::Plus, 0.0, x, &q).unwrap();
    assert!((v - x.atan()).abs() < 1e-12);
    // u^{-2} / (1 + u^{-2}) = 1 / (1 + u^2)
    let v = kernel_integral(&p2, 1, Sign::Minus, 0.5, f64::INFINITY, &q).unwrap();
    assert!((v - (PI / 2.0 - 0.5f64.atan())).abs() < 1e-12);
    let p3 = PolyP::binomial(3);
    let full = 2.0 * PI / (3.0 * 3f64.sqrt());
    for m in [1, 2] {
        let v = kernel_integral(&p3, m, Sign::Plus, 0.0, f64::INFINITY, &q).unwrap();
        assert!((v - full).abs() < 1e-11, "m = {m}");
    }
    // orientation
    let a = kernel_integral(&p3, 1, Sign::Plus, 0.2, 3.0, &q).unwrap();
    let b = kernel_integral(&p3, 1, Sign::Plus, 3.0, 0.2, &q).unwrap();
    assert!((a + b).abs() < 1e-14);
    assert!(kernel_integral(&p3, 3, Sign::Plus, 0.0, 1.0, &q).is_err());
    assert!(kernel_integral(&p3, 1, Sign::Plus, -1.0, 1.0, &q).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn reversal_identity(p in poly_strategy(), lx in -3.0f64..3.0) {
        let cfg = DilogConfig::default();
        let x = lx.exp();
        let lhs = rogers_dilog_higher(&p, x, &cfg).unwrap() + rogers_dilog_higher(&p.reversed(), 1.0 / x, &cfg).unwrap();
        let rhs = rogers_dilog_infinity(&p, &cfg).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-9, "{lhs} vs {rhs}");
    }

    #[test]
    fn euler_form_agrees(p in poly_strategy(), lx in -3.0f64..4.0) {
        let cfg = DilogConfig::default();
        let x = lx.exp();
        let a = rogers_dilog_higher(&p, x, &cfg).unwrap();
        let b = rogers_dilog_higher_euler(&p, x, &cfg).unwrap();
        let c = neg_li2_higher(&p, x, &cfg).unwrap() - 0.5 * x.ln() * p.ln_eval(x);
        prop_assert!((a - b).abs() < 1e-9);
        prop_assert!((a - c).abs() < 1e-8 * (1.0 + a.abs()));
    }

    #[test]
    fn additive_in_the_polynomial(p in poly_strategy(), q in poly_strategy(), lx in -2.0f64..2.0) {
        let cfg = DilogConfig::default();
        let x = lx.exp();
        let (pc, qc) = (p.coeffs(), q.coeffs());
        let mut prod = vec![0.0; pc.len() + qc.len() - 1];
        for (i, a) in pc.iter().enumerate() {
            for (j, b) in qc.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        let pq = PolyP::new(prod).unwrap();
        let lhs = rogers_dilog_higher(&pq, x, &cfg).unwrap();
        let rhs = rogers_dilog_higher(&p, x, &cfg).unwrap() + rogers_dilog_higher(&q, x, &cfg).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-9);
    }
}
