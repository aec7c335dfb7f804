use std::collections::BTreeSet;

use proptest::prelude::*;
use sumsq_core::arith::{factor, integer_nth_root, is_prime, primes_in_ap};
use sumsq_core::families::{generate, witness, Family, FamilyTarget};
use sumsq_core::local::{is_locally_solvable_at, local_report, LocalStatus, LocalVerdict};
use sumsq_core::search::{find_representations, verify_none};
use sumsq_core::two_squares::is_sum_of_two_squares;
use sumsq_core::{ResidueClass, SearchSpec};

fn trial_division_is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

/// Whether `x^2 + y^2 + z^k = n` has a solution mod `modulus` with `z` in `class`.
fn solvable_mod(n: u128, k: u32, class: ResidueClass, modulus: u64) -> bool {
    let squares: BTreeSet<u64> = (0..modulus).map(|x| x * x % modulus).collect();
    let mut sums = vec![false; modulus as usize];
    for a in &squares {
        for b in &squares {
            sums[((a + b) % modulus) as usize] = true;
        }
    }
    let n = (n % modulus as u128) as u64;
    (0..modulus * class.m())
        .filter(|&z| class.contains(z as i128))
        .any(|z| {
            let zk = (0..k).fold(1u64, |acc, _| acc * (z % modulus) % modulus);
            sums[((n + modulus - zk) % modulus) as usize]
        })
}

fn class_strategy() -> impl Strategy<Value = ResidueClass> {
    (1u64..=12).prop_flat_map(|m| (0..m).prop_map(move |r| ResidueClass::new(r, m).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn factor_recombines(n in 1u64..=1_000_000) {
        let f = factor(n as u128).unwrap();
        let product: u128 = f.factors().iter().map(|&(q, e)| q.pow(e)).product();
        prop_assert_eq!(product, n as u128);
        for q in f.primes() {
            prop_assert!(trial_division_is_prime(q as u64));
        }
    }

    #[test]
    fn nth_root_round_trip(k in 1u32..=12, seed in any::<u64>()) {
        let cap = integer_nth_root((1u128 << 100) - 1, k);
        let r = 1 + (seed as u128) % cap;
        let rk = r.pow(k);
        prop_assert_eq!(integer_nth_root(rk, k), r);
        prop_assert_eq!(integer_nth_root(rk - 1, k), r - 1);
    }

    #[test]
    fn primes_in_ap_filters_full_stream(limit in 0u64..20_000, m in 1u64..60, r in 0u64..60) {
        let r = r % m;
        prop_assume!(sumsq_core::arith::gcd(r as u128, m as u128) == 1);
        let got: Vec<u64> = primes_in_ap(limit, r, m).unwrap().collect();
        let expected: Vec<u64> = primes_in_ap(limit, 0, 1)
            .unwrap()
            .filter(|p| p % m == r)
            .collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn local_verdicts_match_residue_tables(
        n in 1u128..5_000,
        k in 2u32..=8,
        class in class_strategy(),
        q in prop::sample::select(vec![2u128, 3, 5, 7]),
    ) {
        let verdict = is_locally_solvable_at(n, k, class, q, 12).unwrap();
        match verdict.status {
            LocalStatus::Solvable => {
                let mut modulus = q as u64;
                while modulus <= 1024 {
                    prop_assert!(solvable_mod(n, k, class, modulus), "no solution mod {}", modulus);
                    modulus *= q as u64;
                }
            }
            LocalStatus::Obstructed => {
                let modulus = (q as u64).pow(verdict.level);
                prop_assume!(modulus <= 4096);
                prop_assert!(!solvable_mod(n, k, class, modulus));
            }
            LocalStatus::Undecided => {}
        }
    }

    #[test]
    fn global_implies_local(n in 1u128..3_000, k in 2u32..=6, class in class_strategy()) {
        let hi = integer_nth_root(n, k) as i128 + 1;
        let spec = SearchSpec::new(n, k, class, -hi, hi, false).unwrap();
        prop_assume!(!find_representations(&spec).unwrap().is_empty());
        let bound = 100u64.max(class.m()).max(k as u64 + 1);
        let report = local_report(n, k, class, bound, 12).unwrap();
        prop_assert_eq!(report.verdict, LocalVerdict::NoObstructionFound);
        for v in &report.verdicts {
            prop_assert_eq!(v.status, LocalStatus::Solvable, "q = {}", v.q);
        }
    }

    #[test]
    fn is_prime_matches_trial_division(n in 0u64..=1_000_000) {
        prop_assert_eq!(is_prime(n as u128).unwrap(), trial_division_is_prime(n));
    }
}

fn square_family_targets() -> Vec<FamilyTarget> {
    let mut all = Vec::new();
    for (family, k) in [
        (Family::Thm2, 4),
        (Family::Thm2, 8),
        (Family::Thm3, 6),
        (Family::Thm3, 10),
    ] {
        all.extend(generate(family, k, 100_000_000).unwrap());
    }
    all
}

#[test]
fn parity_lemma() {
    for t in square_family_targets() {
        let np = t.np() as i128;
        let half = t.k / 2;
        for z in t.window_z() {
            let d = (np - z.pow(half)).rem_euclid(8);
            if z % 2 == 0 {
                assert!(d == 3 || d == 7, "target {} z {z}: {d}", t.target);
            } else {
                assert_eq!(d, 6, "target {} z {z}", t.target);
            }
        }
    }
}

#[test]
fn thm1_class_arithmetic() {
    for k in [3u32, 5, 7] {
        assert_eq!((2 * k + 1) % 4, 3);
        for t in generate(Family::Thm1, k, 10_000_000_000).unwrap() {
            for z in t.window_z() {
                assert_eq!(
                    (t.p as i128 - z).rem_euclid(4 * k as i128),
                    (2 * k + 1) as i128
                );
            }
        }
    }
}

#[test]
fn witnesses_agree_with_search() {
    let mut targets = generate(Family::Thm1, 3, 1_000_000_000).unwrap();
    targets.extend(square_family_targets());
    for t in targets {
        let none = verify_none(&t.search_spec().unwrap()).unwrap();
        let all_witnessed = t.window_z().all(|z| witness(&t, z).is_ok());
        assert_eq!(none.found.is_none(), all_witnessed, "target {}", t.target);
        assert!(all_witnessed);
        if t.family == Family::Thm1 {
            for z in t.window_z() {
                let rest = if z < 0 {
                    t.target + z.unsigned_abs().pow(t.k)
                } else {
                    t.target - (z as u128).pow(t.k)
                };
                assert!(!is_sum_of_two_squares(rest).unwrap());
            }
        }
    }
}

#[test]
fn positive_window_clamp_loses_nothing() {
    for k in [3u32, 4, 5] {
        for n in 3u128..3_000 {
            let wide = SearchSpec::new(
                n,
                k,
                ResidueClass::ANY,
                1,
                integer_nth_root(n, k).max(1) as i128,
                true,
            )
            .unwrap();
            let clamp = integer_nth_root(n - 2, k).max(1) as i128;
            let tight = SearchSpec::new(n, k, ResidueClass::ANY, 1, clamp, true).unwrap();
            assert_eq!(
                find_representations(&wide).unwrap(),
                find_representations(&tight).unwrap()
            );
        }
    }
}
