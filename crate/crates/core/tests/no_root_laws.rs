//! Discrete limit laws of the no-root regime against finite-n distributions
//! from a floating-point transfer matrix, with weights rescaled by `rho` per
//! step to stay in range.

use catpaths::kernel::{analyze, Analysis, Config, Regime};
use catpaths::limits::{law, LawParam, LimitLaw};
use catpaths::JumpSet;

#[derive(Clone, Copy, PartialEq)]
enum Stat {
    Catastrophes,
    Returns,
    Cumulative,
    Waiting,
    /// 0: no catastrophe yet, 1: catastrophes but none marked, 2 + h: a
    /// marked catastrophe of size h.
    Marked,
}

fn distribution(js: &JumpSet, rho: f64, n: usize, stat: Stat, cap: usize) -> Vec<f64> {
    let c = js.c() as i64;
    let jumps: Vec<(i64, f64)> =
        js.weights_f64().iter().enumerate().filter(|(_, w)| **w > 0.0).map(|(i, w)| (i as i64 - c, w * rho)).collect();
    let q = js.q_f64() * rho;
    let width = cap + 1;
    let idx = |a: usize, x: usize| a * width + x.min(cap);
    let mut cur = vec![0.0; (n + 1) * width];
    cur[idx(0, 0)] = 1.0;
    for step in 1..=n {
        let mut next = vec![0.0; (n + 1) * width];
        // Altitudes above the remaining length cannot return to zero by
        // ordinary steps, but catastrophes can, so all are kept.
        for a in 0..=n.min(step * js.d()) {
            for x in 0..width {
                let w = cur[idx(a, x)];
                if w == 0.0 {
                    continue;
                }
                for &(j, p) in &jumps {
                    let b = a as i64 + j;
                    if b < 0 || b as usize > n {
                        continue;
                    }
                    let b = b as usize;
                    let y = match stat {
                        Stat::Returns if b == 0 => x + 1,
                        _ => x,
                    };
                    next[idx(b, y)] += w * p;
                }
                if js.permits_catastrophe_at(a) {
                    let targets: Vec<usize> = match stat {
                        Stat::Catastrophes | Stat::Returns => vec![x + 1],
                        Stat::Cumulative => vec![x + a],
                        Stat::Waiting => vec![if x == 0 { step } else { x }],
                        Stat::Marked if x <= 1 => vec![1, 2 + a],
                        Stat::Marked => vec![x],
                    };
                    for y in targets {
                        next[idx(0, y)] += w * q;
                    }
                }
            }
        }
        cur = next;
    }
    let mut out: Vec<f64> = (0..width).map(|x| cur[idx(0, x)]).collect();
    if stat == Stat::Marked {
        // Shift to sizes; paths with catastrophes but no mark drop out.
        let mut sizes = vec![0.0; width];
        sizes[0] = out[0];
        for (x, w) in out.iter().enumerate().skip(2) {
            sizes[x - 2] += w;
        }
        out = sizes;
    }
    let total: f64 = out.iter().sum();
    out.iter().map(|w| w / total).collect()
}

/// Law of the final altitude of meanders.
fn altitude_distribution(js: &JumpSet, rho: f64, n: usize) -> Vec<f64> {
    let c = js.c() as i64;
    let weights = js.weights_f64();
    let q = js.q_f64() * rho;
    let mut cur = vec![0.0; n * js.d() + 1];
    cur[0] = 1.0;
    for _ in 0..n {
        let mut next = vec![0.0; cur.len()];
        for (a, w) in cur.iter().enumerate().filter(|(_, w)| **w > 0.0) {
            for (i, p) in weights.iter().enumerate().filter(|(_, p)| **p > 0.0) {
                let b = a as i64 + i as i64 - c;
                if b >= 0 {
                    next[b as usize] += w * p * rho;
                }
            }
            if js.permits_catastrophe_at(a) {
                next[0] += w * q;
            }
        }
        cur = next;
    }
    let total: f64 = cur.iter().sum();
    cur.iter().map(|w| w / total).collect()
}

fn total_variation(a: &[f64], b: &[f64]) -> f64 {
    let at = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
    0.5 * (0..a.len().max(b.len())).map(|i| (at(a, i) - at(b, i)).abs()).sum::<f64>()
}

fn no_root() -> Analysis {
    let an = analyze(&"-1:4,0:1,1:1,q=1".parse().unwrap(), &Config::default()).unwrap();
    assert_eq!(an.regime(), Regime::NoRoot);
    an
}

const CAP: usize = 150;

fn check(an: &Analysis, param: LawParam, exact: impl Fn(usize) -> Vec<f64>) {
    let limit = law(an, param, CAP).unwrap().law.pmf_values(CAP).unwrap();
    let (a, b) = (total_variation(&exact(300), &limit), total_variation(&exact(600), &limit));
    println!("{param}: TV {a:.4} at n = 300, {b:.4} at n = 600");
    assert!(b < 0.04, "{param}: {b}");
    assert!(b < 0.65 * a, "{param}: {a} {b}");
}

#[test]
fn counts_and_sizes_converge_to_their_no_root_laws() {
    let an = no_root();
    let js = an.kernel.jump_set().clone();
    let rho = an.kernel.rho();
    for (param, stat) in [
        (LawParam::Catastrophes, Stat::Catastrophes),
        (LawParam::Returns, Stat::Returns),
        (LawParam::Cumulative, Stat::Cumulative),
        (LawParam::AvgCat, Stat::Marked),
    ] {
        check(&an, param, |n| distribution(&js, rho, n, stat, CAP));
    }
}

#[test]
fn final_altitude_converges_to_its_no_root_law() {
    let an = no_root();
    let js = an.kernel.jump_set().clone();
    let rho = an.kernel.rho();
    check(&an, LawParam::FinalAltitude, |n| altitude_distribution(&js, rho, n));
}

#[test]
fn waiting_time_keeps_mass_for_long_first_blocks() {
    let an = no_root();
    let js = an.kernel.jump_set().clone();
    let rho = an.kernel.rho();
    let r = law(&an, LawParam::Waiting, 400).unwrap();
    let LimitLaw::DiscretePmf { values, defect, .. } = &r.law else { panic!() };
    let half = distribution(&js, rho, 300, Stat::Waiting, 300);
    let exact = distribution(&js, rho, 600, Stat::Waiting, 600);
    for k in (0..8).filter(|k| values[*k] > 0.0) {
        let (a, b) = (half[k] / values[k] - 1.0, exact[k] / values[k] - 1.0);
        assert!(b.abs() < 0.06 && b.abs() < 0.6 * a.abs(), "{k}: {a} {b}");
    }
    // Beyond k = 60 the exact law holds the tail of Q(rho) plus the
    // defect, which sits at waiting times of order n.
    let q_rho = an.kernel.q(an.kernel.rho()).unwrap();
    let late: f64 = exact[60..].iter().sum();
    let expected = defect + q_rho - values[1..60].iter().sum::<f64>();
    assert!((late / expected - 1.0).abs() < 0.05, "{late} {expected}");
    assert!(late > 1.5 * (q_rho - values[1..60].iter().sum::<f64>()));
    assert!((exact[0] - (1.0 - q_rho)).abs() > 0.3);
}
