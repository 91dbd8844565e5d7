//! Statistical checks of the exact sampler against brute-force weights and
//! exact finite-n distributions.

use std::collections::HashMap;

use catpaths::brute::{battery_jump_sets, enumerate, Endpoint};
use catpaths::kernel::{analyze, Config, Regime};
use catpaths::limits::{law_catastrophes, LawParam};
use catpaths::model::{format_steps, rational_to_f64, validate_path};
use catpaths::sampler::{build_sampler, empirical_law, rng, Kind};
use catpaths::series::{counting_table, parameter_series, Param};
use catpaths::JumpSet;
use proptest::prelude::*;

/// 0.999 quantiles of the chi-square distribution, df = 1..=15.
const CHI2_999: [f64; 15] = [
    10.828, 13.816, 16.266, 18.467, 20.515, 22.458, 24.322, 26.124, 27.877, 29.588, 31.264, 32.909, 34.528, 36.123,
    37.697,
];

/// Chi-square statistic of sampled path frequencies against exact weights.
fn chi_square(js: &JumpSet, n: usize, kind: Kind, trials: usize, seed: u64) -> (f64, usize) {
    let endpoint = if kind == Kind::Excursion { Endpoint::Excursion } else { Endpoint::Meander };
    let paths = enumerate(js, n, endpoint).unwrap();
    let total: f64 = paths.iter().map(|p| rational_to_f64(p.weight())).sum();
    let tables = build_sampler(js, n, kind);
    let mut r = rng(seed);
    let mut counts: HashMap<String, u64> = HashMap::new();
    for _ in 0..trials {
        *counts.entry(format_steps(tables.sample(&mut r).unwrap().steps())).or_default() += 1;
    }
    assert_eq!(counts.len(), paths.len());
    let stat = paths
        .iter()
        .map(|p| {
            let expected = trials as f64 * rational_to_f64(p.weight()) / total;
            let seen = counts[&format_steps(p.steps())] as f64;
            (seen - expected).powi(2) / expected
        })
        .sum();
    (stat, paths.len() - 1)
}

#[test]
fn dyck_length_six_is_uniform() {
    let (stat, df) = chi_square(&JumpSet::dyck(), 6, Kind::Excursion, 120_000, 11);
    assert_eq!(df, 11);
    assert!(stat < CHI2_999[df - 1], "chi-square {stat}");
}

#[test]
fn weighted_frequencies_follow_path_weights() {
    let js: JumpSet = "-1:1,1:2,q=1".parse().unwrap();
    for kind in [Kind::Excursion, Kind::Meander] {
        let (stat, df) = chi_square(&js, 4, kind, 60_000, 5);
        assert!(df <= CHI2_999.len());
        assert!(stat < CHI2_999[df - 1], "{kind:?}: chi-square {stat} on {df} df");
    }
}

fn mean(dist: &[f64]) -> f64 {
    dist.iter().enumerate().map(|(k, p)| k as f64 * p).sum()
}

#[test]
fn sampled_means_match_exact_finite_n_means() {
    let js = JumpSet::dyck();
    let n = 120;
    for (law, param) in [
        (LawParam::Catastrophes, Param::Catastrophes),
        (LawParam::Returns, Param::Returns),
        (LawParam::Cumulative, Param::Cumulative),
    ] {
        let exact = mean(&parameter_series(&js, n, param).row_distribution(n));
        let e = empirical_law(&js, n, 20_000, law, 99).unwrap();
        let z = (e.mean - exact) / e.std_error;
        assert!(z.abs() < 4.0, "{law}: sampled {} exact {exact} ({z:+.2} SE)", e.mean);
    }
}

#[test]
fn final_altitude_matches_the_exact_meander_law() {
    let js = JumpSet::dyck();
    let n = 60;
    let exact = counting_table(&js, n, true).row_distribution(n);
    let e = empirical_law(&js, n, 20_000, LawParam::FinalAltitude, 3).unwrap();
    let seen = e.pmf(n);
    let tv: f64 = 0.5 * exact.iter().zip(&seen).map(|(a, b)| (a - b).abs()).sum::<f64>();
    assert!(tv < 0.02, "TV {tv}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_sample_is_a_valid_path(set in 0usize..24, n in 0usize..30, seed in any::<u64>(), meander in any::<bool>()) {
        let js = &battery_jump_sets()[set];
        let kind = if meander { Kind::Meander } else { Kind::Excursion };
        let tables = build_sampler(js, n, kind);
        let mut r = rng(seed);
        for _ in 0..5 {
            match tables.sample(&mut r) {
                Ok(p) => {
                    prop_assert_eq!(p.len(), n);
                    prop_assert!(validate_path(js, p.steps()).is_ok());
                    if !meander {
                        prop_assert!(p.is_excursion());
                    }
                }
                Err(e) => prop_assert_eq!(e, catpaths::Error::EmptySupport),
            }
        }
    }
}

#[test]
fn critical_catastrophe_count_grows_like_the_rayleigh_mean() {
    let js: JumpSet = "-1:4,1:1,q=4".parse().unwrap();
    let an = analyze(&js, &Config::default().allowing_periodic()).unwrap();
    assert_eq!(an.regime(), Regime::CriticalRoot);
    let n = 2000;
    let limit = law_catastrophes(&an).unwrap().law.mean(n as u64);
    let e = empirical_law(&js, n, 2000, LawParam::Catastrophes, 17).unwrap();
    println!("sampled {} +- {}, Rayleigh mean {limit}", e.mean, e.std_error);
    assert!((e.mean / limit - 1.0).abs() < 0.05, "sampled {} vs {limit}", e.mean);
}
