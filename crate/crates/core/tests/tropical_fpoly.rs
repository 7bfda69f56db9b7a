mod common;

use common::*;
use gencluster::exchange::{seeds_along, Seed, Sign};
use gencluster::fpoly::FPattern;
use gencluster::tropical::{tropical_sign_sequence, CPattern};
use gencluster::{DegreeTable, ExchangeData, IntMatrix};
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn exchange_strategy(max_n: usize, max_m: i64, max_d: usize) -> impl Strategy<Value = ExchangeData> {
    symmetrizable_strategy(max_n, 3, max_m, max_d)
}

fn symmetrizable_strategy(max_n: usize, max_r: i64, max_m: i64, max_d: usize) -> impl Strategy<Value = ExchangeData> {
    (2..=max_n).prop_flat_map(move |n| {
        (
            prop::collection::vec(1i64..=max_r, n),
            prop::collection::vec(-max_m..=max_m, n * (n - 1) / 2),
            prop::collection::vec(1usize..=max_d, n),
        )
            .prop_map(|(r, m, d)| exchange_from_parts(&r, &m, &d))
    })
}

fn word_strategy(n: usize, max_len: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..n, 0..=max_len).prop_map(|mut w| {
        w.dedup();
        w
    })
}

fn with_word(max_n: usize, max_m: i64, max_d: usize, max_len: usize) -> impl Strategy<Value = (ExchangeData, Vec<usize>)> {
    exchange_strategy(max_n, max_m, max_d).prop_flat_map(move |ex| {
        let n = ex.rank();
        (Just(ex), word_strategy(n, max_len))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn c_matrices_match_tropical_evaluation((ex, word) in with_word(4, 1, 2, 8)) {
        let pattern = CPattern::along(&ex, &word).unwrap();
        let trop = tropical_oracle(&ex, &word);
        for (t, g) in trop.iter().enumerate() {
            for j in 0..ex.rank() {
                prop_assert_eq!(pattern.c(t).column(j), g[j].clone());
            }
        }
        for (l, &k) in word.iter().enumerate() {
            let expected = if trop[l][k].iter().all(|&e| e >= 0) { Sign::Plus } else { Sign::Minus };
            prop_assert_eq!(pattern.signs()[l], expected);
        }
    }

    #[test]
    fn matrix_mutation_matches_oracle((ex, word) in with_word(4, 1, 3, 8)) {
        let pattern = CPattern::along(&ex, &word).unwrap();
        let mut b = ex.b().rows();
        for (t, &k) in word.iter().enumerate() {
            b = oracle_mutate_b(&b, k, ex.d()[k] as i64);
            prop_assert_eq!(pattern.b(t + 1).rows(), b.clone());
        }
    }

    #[test]
    fn mutation_is_an_involution((ex, k) in exchange_strategy(4, 2, 3).prop_flat_map(|ex| { let n = ex.rank(); (Just(ex), 0..n) }),
                                 seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let start = gencluster::search::random_seed(&ex, &mut rng).unwrap();
        for eps in [Sign::Plus, Sign::Minus] {
            let back = start.mutate(k, eps).unwrap().mutate(k, eps.flip()).unwrap();
            prop_assert_eq!(back.b(), start.b());
            prop_assert!(back.max_rel_deviation(&start) < 1e-12);
        }
    }

    #[test]
    fn seed_mutation_independent_of_sign((ex, word) in with_word(3, 1, 3, 6), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let start = gencluster::search::random_seed(&ex, &mut rng).unwrap();
        let plus = seeds_along(&start, &word, &vec![Sign::Plus; word.len()]);
        let minus = seeds_along(&start, &word, &vec![Sign::Minus; word.len()]);
        // far from the finite types the values can leave the f64 range
        prop_assume!(plus.is_ok() && minus.is_ok());
        let (plus, minus) = (plus.unwrap(), minus.unwrap());
        for (a, b) in plus.iter().zip(&minus) {
            prop_assert_eq!(a.b(), b.b());
            prop_assert!(a.max_rel_deviation(b) < 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn separation_of_additions_exact((ex, word) in prop::sample::select(finite_type_family()).prop_flat_map(|ex| {
                                         let n = ex.rank();
                                         (Just(ex), word_strategy(n, 8))
                                     }),
                                     ys in prop::collection::vec(1i64..=5, 3),
                                     zs in prop::collection::vec(0i64..=4, 3)) {
        let n = ex.rank();
        let f = FPattern::along(&ex, &word).unwrap();
        let y0: Vec<BigRational> = (0..n).map(|i| rat(ys[i]) / rat(i as i64 + 2)).collect();
        let z0: Vec<Vec<BigRational>> = (0..n)
            .map(|i| (1..ex.d()[i]).map(|s| rat(zs[i] + s as i64)).collect())
            .collect();
        let layout = f.layout();
        let mut point = y0.clone();
        for row in &z0 {
            point.extend(row.iter().cloned());
        }
        prop_assert_eq!(point.len(), layout.nvars());
        let exact = rational_y_along(&ex, &y0, &z0, &word);
        for t in 0..f.vertices() {
            let (c, b) = (f.pattern().c(t), f.pattern().b(t));
            let values: Vec<BigRational> = f.at(t).iter().map(|p| rational_eval(p, &point)).collect();
            for j in 0..n {
                let mut v = rat(1);
                for i in 0..n {
                    v = v * rat_pow(&y0[i], c[(i, j)]) * rat_pow(&values[i], b[(i, j)]);
                }
                prop_assert_eq!(&v, &exact[t][j]);
            }
            for p in f.at(t) {
                prop_assert!(p.at_zero_y(n).is_one(), "constant term of {:?}", p);
            }
        }
    }
}

#[test]
fn first_generalized_f_polynomial() {
    let ex = ExchangeData::skew_symmetric(IntMatrix::from_rows(&[vec![0, 1], vec![-1, 0]]).unwrap(), vec![2, 1]).unwrap();
    let f = FPattern::along(&ex, &[0, 1]).unwrap();
    let names = f.layout().names();
    assert_eq!(f.at(1)[0].display_with(&names).to_string(), "1 + y1^2 + y1*z[1,1]");
    // after (1) the c-vector of direction 2 is (2, 1) and b_12 = -1, so
    // F_2 = (F_1 + y1^2 y2) / 1
    assert_eq!(f.at(2)[1].display_with(&names).to_string(), "1 + y1^2 + y1*z[1,1] + y1^2*y2");
}

#[test]
fn catalog_f_polynomials_have_nonnegative_coefficients() {
    for e in gencluster::catalog::catalog() {
        let f = FPattern::along(&e.exchange, e.sequence.directions()).unwrap();
        for t in 0..f.vertices() {
            for p in f.at(t) {
                assert!(p.has_nonnegative_coefficients(), "{}: {:?}", e.name, p);
            }
        }
    }
}

#[test]
fn tropical_signs_from_oracle_on_catalog() {
    for e in gencluster::catalog::catalog() {
        let word = e.sequence.directions();
        let trop = tropical_oracle(&e.exchange, word);
        let signs = tropical_sign_sequence(&e.exchange, word).unwrap();
        for (l, &k) in word.iter().enumerate() {
            let plus = trop[l][k].iter().all(|&x| x >= 0);
            assert_eq!(signs[l] == Sign::Plus, plus, "{} step {l}", e.name);
        }
        // the final tropical y-variables are the permuted initial ones
        let last = trop.last().unwrap();
        for i in 0..e.exchange.rank() {
            let target = e.sequence.sigma().apply(i);
            let unit: Vec<i64> = (0..e.exchange.rank()).map(|c| (c == i) as i64).collect();
            assert_eq!(last[target], unit, "{}", e.name);
        }
    }
}

#[test]
fn a2_signs_and_periodicity_at_spec_point() {
    let e = gencluster::catalog::lookup("a2").unwrap();
    let start = Seed::new(e.exchange.clone(), vec![2.0, 3.0], DegreeTable::zeros(&[1, 1])).unwrap();
    let signs = tropical_sign_sequence(&e.exchange, e.sequence.directions()).unwrap();
    let rep = gencluster::exchange::check_sigma_periodicity(&start, &e.sequence, &signs, 1e-12).unwrap();
    assert!(rep.periodic && rep.max_y_deviation < 1e-12);
}
