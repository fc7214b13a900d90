//! Cross-module checks over the five reference quartics, one per Galois group.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quartic_els::arith::{is_squarefree, primes_up_to, PrimeTable};
use quartic_els::counting::{count_l, CountContext};
use quartic_els::criterion::{is_els_criterion, CriterionBundle};
use quartic_els::quartic::{
    factorization_type_mod_p, group_elements, has_root_mod_p, FactorizationType, GaloisType, Quartic, RootTable,
};
use quartic_els::series::{f_coefficients, rho_coefficients, FrobenianRho};
use quartic_els::{is_els_direct, Error};

fn corpus() -> Vec<(Quartic, GaloisType)> {
    [
        ((0, 0, -1, 1), GaloisType::S4),
        ((0, 0, 8, 12), GaloisType::A4),
        ((0, 0, 0, -2), GaloisType::D4),
        ((1, 1, 1, 1), GaloisType::C4),
        ((0, 0, 0, 1), GaloisType::V4),
    ]
    .into_iter()
    .map(|((a3, a2, a1, a0), g)| (Quartic::new(a3, a2, a1, a0).unwrap(), g))
    .collect()
}

/// Determinant by fraction-free elimination.
fn bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Resultant of f and f' from the Sylvester matrix; for a monic quartic
/// this is the discriminant.
fn resultant_discriminant(f: &Quartic) -> BigInt {
    let [a3, a2, a1, a0] = f.coefficients();
    let p = [1, a3, a2, a1, a0];
    let dp = [4, 3 * a3, 2 * a2, a1];
    let mut rows = Vec::new();
    for shift in 0..3 {
        let mut row = vec![BigInt::zero(); 7];
        for (i, c) in p.iter().enumerate() {
            row[shift + i] = BigInt::from(*c);
        }
        rows.push(row);
    }
    for shift in 0..4 {
        let mut row = vec![BigInt::zero(); 7];
        for (i, c) in dp.iter().enumerate() {
            row[shift + i] = BigInt::from(*c);
        }
        rows.push(row);
    }
    bareiss(rows)
}

#[test]
fn discriminant_matches_resultant_for_random_quartics() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 100 {
        let c: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-20..=20));
        let f = match Quartic::new(c[0], c[1], c[2], c[3]) {
            Ok(f) => f,
            Err(Error::Reducible(_)) => continue,
            Err(e) => panic!("{c:?}: {e}"),
        };
        assert_eq!(BigInt::from(f.discriminant()), resultant_discriminant(&f), "{}", f.pretty());
        checked += 1;
    }
    for (f, _) in corpus() {
        assert_eq!(BigInt::from(f.discriminant()), resultant_discriminant(&f));
    }
}

#[test]
fn roots_and_types_agree() {
    for (f, g) in corpus() {
        let group = group_elements(g);
        let table = RootTable::build(&f, 10_000);
        for p in primes_up_to(10_000) {
            if f.discriminant() % p as i64 == 0 {
                continue;
            }
            let t = factorization_type_mod_p(&f, p).unwrap();
            assert!(group.has_cycle_type(t), "{} p = {p}: {t} not in {g}", f.pretty());
            let root = has_root_mod_p(&f, p);
            assert_eq!(root, t.has_linear_factor(), "{} p = {p}", f.pretty());
            assert_eq!(table.get(p), Some(root));
        }
    }
}

#[test]
fn factorization_types_follow_class_densities() {
    const B: u64 = 1_000_000;
    let primes = primes_up_to(B);
    for (f, g) in corpus() {
        let group = group_elements(g);
        let mut seen: BTreeMap<FactorizationType, u64> = BTreeMap::new();
        let mut total = 0;
        for &p in &primes {
            if f.discriminant() % p as i64 == 0 {
                continue;
            }
            *seen.entry(factorization_type_mod_p(&f, p).unwrap()).or_default() += 1;
            total += 1;
        }
        for t in FactorizationType::ALL {
            let expected = group.cycle_type_counts().get(&t).copied().unwrap_or(0) as f64 / group.order() as f64;
            let observed = seen.get(&t).copied().unwrap_or(0) as f64 / total as f64;
            assert!(
                (observed - expected).abs() <= 0.01,
                "{} {t}: observed {observed:.4}, expected {expected:.4}",
                f.pretty()
            );
        }
    }
}

#[test]
fn f_coefficients_are_the_els_indicator() {
    const N: usize = 100_000;
    for (f, _) in corpus() {
        let bundle = CriterionBundle::new(&f).unwrap();
        let rho = FrobenianRho::new(&f, N as u64);
        let coeffs = f_coefficients(&bundle, &rho, N).unwrap();
        let roots = RootTable::build(&f, N as u64);
        for n in 1..=N {
            let els = is_squarefree(n as u64) && is_els_criterion(&bundle, n as u64, &roots).unwrap();
            let want = if els { Ratio::one() } else { Ratio::zero() };
            assert_eq!(coeffs.get(n), want, "{} n = {n}", f.pretty());
        }
    }
}

#[test]
fn rho_support_is_closed_under_coprime_products() {
    const N: usize = 3000;
    for (f, _) in corpus() {
        let rho = FrobenianRho::new(&f, N as u64);
        let a = rho_coefficients(&rho, N).unwrap();
        let support: Vec<usize> = (1..=N).filter(|&n| a.get(n) == Ratio::one()).collect();
        for (i, &m) in support.iter().enumerate() {
            for &n in &support[i..] {
                if m * n > N {
                    break;
                }
                if num_integer::gcd(m, n) == 1 {
                    assert_eq!(a.get(m * n), Ratio::one(), "{} m = {m}, n = {n}", f.pretty());
                }
            }
        }
    }
}

#[test]
fn counts_match_direct_filter() {
    let spf = PrimeTable::new(2000).unwrap();
    for (f, _) in corpus() {
        let bundle = CriterionBundle::new(&f).unwrap();
        let roots = RootTable::build(&f, 2000);
        let ctx = CountContext {
            bundle: &bundle,
            spf: &spf,
            roots: &roots,
        };
        let got = count_l(&ctx, &[100, 1000, 2000]).unwrap();
        for cp in got {
            let direct = (1..=cp.x)
                .filter(|&q| is_squarefree(q) && is_els_direct(&f, q).unwrap())
                .count() as u64;
            assert_eq!(cp.lx, direct, "{} x = {}", f.pretty(), cp.x);
        }
    }
}

#[test]
fn counts_are_positive_at_1e5() {
    let spf = PrimeTable::new(100_000).unwrap();
    for (f, _) in corpus() {
        let bundle = CriterionBundle::new(&f).unwrap();
        let roots = RootTable::build(&f, 100_000);
        let ctx = CountContext {
            bundle: &bundle,
            spf: &spf,
            roots: &roots,
        };
        assert!(count_l(&ctx, &[100_000]).unwrap()[0].lx > 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_form_round_trips(a3 in -30i64..=30, a2 in -30i64..=30, a1 in -30i64..=30, a0 in -30i64..=30) {
        if let Ok(f) = Quartic::new(a3, a2, a1, a0) {
            prop_assert_eq!(Quartic::parse(&f.canonical()).unwrap(), f);
            prop_assert_eq!(Quartic::parse(&f.pretty()).unwrap(), f);
            prop_assert_eq!(Quartic::parse(&format!("{a3} {a2} {a1} {a0}")).unwrap(), f);
        }
    }

    #[test]
    fn criterion_agrees_with_direct_search_off_corpus(a1 in -6i64..=6, a0 in -6i64..=6, q in 1u64..400) {
        prop_assume!(is_squarefree(q));
        if let Ok(f) = Quartic::new(0, 1, a1, a0) {
            let bundle = CriterionBundle::new(&f).unwrap();
            let roots = RootTable::build(&f, 400);
            prop_assert_eq!(
                is_els_criterion(&bundle, q, &roots).unwrap(),
                is_els_direct(&f, q).unwrap()
            );
        }
    }
}
