//! Limit laws of the six path parameters in each regime.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{inverse_product_series, Analysis, Regime};
use crate::series::q_series;

/// Tail mass a truncated law must stay below before it is reported.
pub const TAIL_TARGET: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LawParam {
    Catastrophes,
    Returns,
    FinalAltitude,
    Cumulative,
    AvgCat,
    Waiting,
}

impl LawParam {
    pub const ALL: [LawParam; 6] = [
        LawParam::Catastrophes,
        LawParam::Returns,
        LawParam::FinalAltitude,
        LawParam::Cumulative,
        LawParam::AvgCat,
        LawParam::Waiting,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LawParam::Catastrophes => "catastrophes",
            LawParam::Returns => "returns",
            LawParam::FinalAltitude => "final-altitude",
            LawParam::Cumulative => "cumulative",
            LawParam::AvgCat => "avg-cat",
            LawParam::Waiting => "waiting",
        }
    }

    /// Truncation used when none is given.
    pub fn default_truncation(self) -> usize {
        match self {
            LawParam::Waiting => 400,
            _ => 60,
        }
    }
}

impl fmt::Display for LawParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LawParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LawParam::ALL.into_iter().find(|p| p.name() == s.trim()).ok_or_else(|| Error::UnknownParam(s.to_string()))
    }
}

/// One `NegBinom(r, lambda)` component, shifted by `shift`:
/// `P(k) = C(k - shift + r - 1, r - 1) lambda^(k - shift) (1 - lambda)^r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NegBinomComponent {
    pub weight: f64,
    pub r: u32,
    pub shift: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "variant")]
pub enum LimitLaw {
    /// `(X_n - mu n) / sqrt(sigma2 n)` tends to a standard Gaussian.
    Gaussian {
        mu: f64,
        sigma2: f64,
    },
    /// `X_n / sqrt(n)` tends to `theta` times a standard Rayleigh variable.
    Rayleigh {
        theta: f64,
    },
    /// `P(k) = (1 - lambda) lambda^(k - shift)` for `k >= shift`.
    GeometricShifted {
        lambda: f64,
        shift: u32,
    },
    /// `values[k]` for `k <= truncation`. `defect` is mass that escapes to
    /// infinity with `n`, so `sum + tail + defect = 1`.
    DiscretePmf {
        values: Vec<f64>,
        truncation: usize,
        tail_bound: f64,
        defect: f64,
    },
    NegBinomMixture {
        lambda: f64,
        components: Vec<NegBinomComponent>,
    },
}

fn binomial_f64(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl LimitLaw {
    pub fn geometric(lambda: f64, shift: u32) -> LimitLaw {
        LimitLaw::GeometricShifted { lambda, shift }
    }

    /// `P(X = k)` for discrete laws.
    pub fn pmf(&self, k: usize) -> Option<f64> {
        match self {
            LimitLaw::Gaussian { .. } | LimitLaw::Rayleigh { .. } => None,
            LimitLaw::GeometricShifted { lambda, shift } => {
                Some(if k < *shift as usize { 0.0 } else { (1.0 - lambda) * lambda.powi((k - *shift as usize) as i32) })
            }
            LimitLaw::DiscretePmf { values, .. } => Some(values.get(k).copied().unwrap_or(0.0)),
            LimitLaw::NegBinomMixture { lambda, components } => Some(
                components
                    .iter()
                    .filter(|c| k >= c.shift as usize)
                    .map(|c| {
                        let j = (k - c.shift as usize) as u64;
                        let r = c.r as u64;
                        c.weight
                            * binomial_f64(j + r - 1, r - 1)
                            * lambda.powi(j as i32)
                            * (1.0 - lambda).powi(c.r as i32)
                    })
                    .sum(),
            ),
        }
    }

    /// `P(X = k)` for `k <= kmax`.
    pub fn pmf_values(&self, kmax: usize) -> Option<Vec<f64>> {
        (0..=kmax).map(|k| self.pmf(k)).collect()
    }

    /// Mean of `X_n` at length `n`, to leading order.
    pub fn mean(&self, n: u64) -> f64 {
        match self {
            LimitLaw::Gaussian { mu, .. } => mu * n as f64,
            LimitLaw::Rayleigh { theta } => theta * (PI * n as f64 / 2.0).sqrt(),
            LimitLaw::GeometricShifted { lambda, shift } => *shift as f64 + lambda / (1.0 - lambda),
            LimitLaw::DiscretePmf { values, .. } => values.iter().enumerate().map(|(k, p)| k as f64 * p).sum(),
            LimitLaw::NegBinomMixture { lambda, components } => {
                components.iter().map(|c| c.weight * (c.shift as f64 + c.r as f64 * lambda / (1.0 - lambda))).sum()
            }
        }
    }
}

/// A law with the regime and constants it was computed from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LawReport {
    pub param: LawParam,
    pub regime: Regime,
    pub z: f64,
    pub law: LimitLaw,
    pub constants: BTreeMap<String, f64>,
    pub warnings: Vec<String>,
}

struct Builder<'a> {
    an: &'a Analysis,
    param: LawParam,
    constants: BTreeMap<String, f64>,
    warnings: Vec<String>,
}

impl<'a> Builder<'a> {
    fn new(an: &'a Analysis, param: LawParam) -> Self {
        Builder { an, param, constants: BTreeMap::new(), warnings: an.report.warnings.clone() }
    }

    fn set(&mut self, key: &str, value: f64) -> f64 {
        self.constants.insert(key.to_string(), value);
        value
    }

    /// `C/tau`, `D(rho)` and `eta` of the no-root regime.
    fn no_root_constants(&mut self) -> Result<(f64, f64, f64)> {
        let k = &self.an.kernel;
        let eta = self.an.eta()?;
        let q_rho = k.q(k.rho())?;
        self.set("eta", eta);
        self.set("Q(rho)", q_rho);
        self.set("tau", k.tau());
        self.set("C", k.c_const());
        let d = self.set("D(rho)", 1.0 / (1.0 - q_rho));
        Ok((k.c_const() / k.tau(), d, eta))
    }

    fn finish(self, law: LimitLaw) -> Result<LawReport> {
        match &law {
            LimitLaw::Gaussian { sigma2, .. } if !(*sigma2 > 0.0) => {
                return Err(Error::DegenerateVariance { value: *sigma2 });
            }
            LimitLaw::Rayleigh { theta } if !(*theta > 0.0) => {
                return Err(Error::DegenerateVariance { value: *theta });
            }
            _ => {}
        }
        Ok(LawReport {
            param: self.param,
            regime: self.an.regime(),
            z: self.an.z_star(),
            law,
            constants: self.constants,
            warnings: self.warnings,
        })
    }
}

/// Mean and variance constants of `[v^n] 1/(1 - v F(z))` from `F`, `F'`,
/// `F''` at its unit crossing `z0`.
fn sequence_gaussian(z0: f64, f1: f64, f2: f64) -> (f64, f64) {
    let mu = 1.0 / (z0 * f1);
    let sigma2 = (z0 * f2 + f1 - z0 * f1 * f1) / (z0 * z0 * f1.powi(3));
    (mu, sigma2)
}

fn tail_of(values: &[f64], defect: f64) -> f64 {
    let sum: f64 = values.iter().sum();
    (1.0 - sum - defect).abs() + f64::EPSILON * (values.len() as f64 + 1.0)
}

fn discrete(values: Vec<f64>, defect: f64) -> LimitLaw {
    let tail_bound = tail_of(&values, defect);
    LimitLaw::DiscretePmf { truncation: values.len() - 1, values, tail_bound, defect }
}

fn check_tail(law: &LimitLaw) -> Result<()> {
    if let LimitLaw::DiscretePmf { tail_bound, .. } = law {
        if *tail_bound > TAIL_TARGET {
            return Err(Error::TailBoundExceeded { tail: *tail_bound, target: TAIL_TARGET });
        }
    }
    Ok(())
}

fn series_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().min(b.len());
    (0..n).map(|k| (0..=k).map(|i| a[i] * b[k - i]).sum()).collect()
}

/// `1 / (1 - a)` as a power series, assuming `a[0] < 1`.
fn series_sequence(a: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len()];
    let inv = 1.0 / (1.0 - a[0]);
    for k in 0..a.len() {
        let head = if k == 0 { 1.0 } else { 0.0 };
        let acc: f64 = (1..=k).map(|i| a[i] * out[k - i]).sum();
        out[k] = (head + acc) * inv;
    }
    out
}

pub fn law_catastrophes(an: &Analysis) -> Result<LawReport> {
    let mut b = Builder::new(an, LawParam::Catastrophes);
    let k = &an.kernel;
    let z = an.z_star();
    let law = match an.regime() {
        Regime::SubcriticalPole => {
            let d = k.q_derivatives(z)?;
            b.set("rho0", z);
            b.set("Q'(rho0)", d[1]);
            b.set("Q''(rho0)", d[2]);
            let (mu, sigma2) = sequence_gaussian(z, d[1], d[2]);
            LimitLaw::Gaussian { mu, sigma2 }
        }
        Regime::CriticalRoot => {
            let eta = b.set("eta", an.eta()?);
            LimitLaw::Rayleigh { theta: 2f64.sqrt() / eta }
        }
        Regime::NoRoot => {
            let (c_tau, d, eta) = b.no_root_constants()?;
            let total = eta * d * d + c_tau * d;
            LimitLaw::NegBinomMixture {
                lambda: k.q(k.rho())?,
                components: vec![
                    NegBinomComponent { weight: eta * d * d / total, r: 2, shift: 1 },
                    NegBinomComponent { weight: c_tau * d / total, r: 1, shift: 0 },
                ],
            }
        }
    };
    b.finish(law)
}

pub fn law_returns(an: &Analysis) -> Result<LawReport> {
    let mut b = Builder::new(an, LawParam::Returns);
    let k = &an.kernel;
    let z = an.z_star();
    let law = match an.regime() {
        Regime::SubcriticalPole => {
            let a = k.arch_derivatives(z)?;
            b.set("rho0", z);
            b.set("A(rho0)", a[0]);
            b.set("A'(rho0)", a[1]);
            b.set("A''(rho0)", a[2]);
            let (mu, sigma2) = sequence_gaussian(z, a[1], a[2]);
            LimitLaw::Gaussian { mu, sigma2 }
        }
        Regime::CriticalRoot => {
            let eta = b.set("eta", an.eta()?);
            let e = b.set("E(rho)", k.e(z)?);
            LimitLaw::Rayleigh { theta: 2f64.sqrt() * e / eta }
        }
        Regime::NoRoot => {
            let (_, d, _) = b.no_root_constants()?;
            let f0 = b.set("F0(rho)", d * k.e(z)?);
            LimitLaw::NegBinomMixture {
                lambda: 1.0 - 1.0 / f0,
                components: vec![NegBinomComponent { weight: 1.0, r: 2, shift: 1 }],
            }
        }
    };
    b.finish(law)
}

pub fn law_final_altitude(an: &Analysis, kmax: usize) -> Result<LawReport> {
    let mut b = Builder::new(an, LawParam::FinalAltitude);
    let k = &an.kernel;
    let z = an.z_star();
    let roots = k.roots(Complex64::new(z, 0.0))?;
    let scale: Complex64 = roots.large.iter().map(|v| v - 1.0).product();
    let mut values: Vec<f64> = inverse_product_series(&roots.large, kmax).iter().map(|c| (c * scale).re).collect();
    b.set("v1", roots.v1().re);
    if an.regime() == Regime::NoRoot {
        let (_, d, eta) = b.no_root_constants()?;
        let (tau, c) = (k.tau(), k.c_const());
        // (eta D + C/(tau - u)) / (eta D + C/(tau - 1)).
        let factor: Vec<f64> = (0..=kmax)
            .map(|i| {
                let head = if i == 0 { eta * d } else { 0.0 };
                (head + c / tau.powi(i as i32 + 1)) / (eta * d + c / (tau - 1.0))
            })
            .collect();
        values = series_mul(&values, &factor);
    }
    b.finish(discrete(values, 0.0))
}

pub fn law_cumulative(an: &Analysis, kmax: usize) -> Result<LawReport> {
    let mut b = Builder::new(an, LawParam::Cumulative);
    let k = &an.kernel;
    let z = an.z_star();
    let law = match an.regime() {
        Regime::SubcriticalPole => {
            let p = k.q_partials(z)?;
            b.set("rho0", z);
            b.set("Q_z", p.qz);
            b.set("Q_u", p.qu);
            b.set("Q_zz", p.qzz);
            b.set("Q_zu", p.qzu);
            b.set("Q_uu", p.quu);
            let mu = p.qu / (z * p.qz);
            let sigma2 = mu + mu * mu + (z * z * mu * mu * p.qzz - 2.0 * z * mu * p.qzu + p.quu) / (z * p.qz);
            LimitLaw::Gaussian { mu, sigma2 }
        }
        Regime::CriticalRoot => {
            let eta = b.set("eta", an.eta()?);
            let qu = b.set("Q_u(rho,1)", k.q_u_at_one(z)?);
            LimitLaw::Rayleigh { theta: 2f64.sqrt() * qu / eta }
        }
        Regime::NoRoot => {
            let (c_tau, d, eta) = b.no_root_constants()?;
            let du = series_sequence(&k.q_u_coeffs(z, kmax)?);
            let etas = k.eta_coeffs(kmax);
            let total = eta * d * d + c_tau * d;
            let values: Vec<f64> = series_mul(&etas, &series_mul(&du, &du))
                .iter()
                .zip(&du)
                .map(|(a, b)| (a + c_tau * b) / total)
                .collect();
            discrete(values, 0.0)
        }
    };
    b.finish(law)
}

pub fn law_avg_catastrophe(an: &Analysis, kmax: usize) -> Result<LawReport> {
    let mut b = Builder::new(an, LawParam::AvgCat);
    let k = &an.kernel;
    let z = an.z_star();
    let q = k.q_u_coeffs(z, kmax)?;
    let law = match an.regime() {
        Regime::SubcriticalPole | Regime::CriticalRoot => discrete(q, 0.0),
        Regime::NoRoot => {
            // Implemented as printed, including its constant term.
            let (c_tau, d, eta) = b.no_root_constants()?;
            let etas = k.eta_coeffs(kmax);
            let q_rho = k.q(z)?;
            let mid = c_tau * d * d + 2.0 * eta * d.powi(3);
            let total = c_tau + mid * q_rho + an.eta()? * d * d;
            let values = (0..=kmax)
                .map(|i| {
                    let head = if i == 0 { c_tau } else { 0.0 };
                    (head + mid * q[i] + etas[i] * d * d) / total
                })
                .collect();
            discrete(values, 0.0)
        }
    };
    check_tail(&law)?;
    b.finish(law)
}

pub fn law_waiting_time(an: &Analysis, kmax: usize) -> Result<LawReport> {
    let mut b = Builder::new(an, LawParam::Waiting);
    let k = &an.kernel;
    let z = an.z_star();
    let qs = q_series(k.jump_set(), kmax);
    let ln_z = z.ln();
    let mut values: Vec<f64> = (0..=kmax).map(|i| (qs.ln_abs_coeff(i) + i as f64 * ln_z).exp()).collect();
    let mut defect = 0.0;
    if an.regime() == Regime::NoRoot {
        // Paths without a catastrophe in their first O(1) steps split into
        // catastrophe-free excursions and paths whose first block is long.
        let (c_tau, d, eta) = b.no_root_constants()?;
        values[0] = b.set("P(0)", c_tau / (d * (c_tau + eta * d)));
        defect = b.set("defect", eta / (c_tau + eta * d));
    }
    let law = discrete(values, defect);
    if an.regime() == Regime::SubcriticalPole {
        check_tail(&law)?;
    } else {
        // At z = rho the terms decay like k^(-3/2): no practical truncation
        // meets the target, so the tail is reported instead.
        b.warnings.push("tail decays polynomially; see tail_bound".into());
    }
    b.finish(law)
}

/// Law of `param`, with `kmax` used by the discrete laws.
pub fn law(an: &Analysis, param: LawParam, kmax: usize) -> Result<LawReport> {
    match param {
        LawParam::Catastrophes => law_catastrophes(an),
        LawParam::Returns => law_returns(an),
        LawParam::FinalAltitude => law_final_altitude(an, kmax),
        LawParam::Cumulative => law_cumulative(an, kmax),
        LawParam::AvgCat => law_avg_catastrophe(an, kmax),
        LawParam::Waiting => law_waiting_time(an, kmax),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{analyze, Config};
    use crate::model::JumpSet;
    use crate::series::{parameter_series, Param};

    fn dyck() -> Analysis {
        analyze(&JumpSet::dyck(), &Config::default()).unwrap()
    }

    fn gaussian(r: &LawReport) -> (f64, f64) {
        match r.law {
            LimitLaw::Gaussian { mu, sigma2 } => (mu, sigma2),
            ref other => panic!("not Gaussian: {other:?}"),
        }
    }

    fn values(r: &LawReport) -> &[f64] {
        match &r.law {
            LimitLaw::DiscretePmf { values, .. } => values,
            other => panic!("not a PMF: {other:?}"),
        }
    }

    fn cubic(a: [f64; 4], x: f64) -> f64 {
        a[0] * x.powi(3) + a[1] * x * x + a[2] * x + a[3]
    }

    /// The real root in (0, 1) of `x^3 + x - 1`.
    fn dyck_lambda() -> f64 {
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid.powi(3) + mid - 1.0 < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    #[test]
    fn dyck_gaussian_constants() {
        let an = dyck();
        let (mu, s2) = gaussian(&law_catastrophes(&an).unwrap());
        assert!(cubic([31.0, 31.0, 40.0, -3.0], mu).abs() < 1e-8);
        assert!((29791.0 * s2.powi(3) - 59582.0 * s2 * s2 + 60579.0 * s2 - 2927.0).abs() < 1e-8 * 29791.0);
        assert!((mu - 0.0708358118).abs() < 1e-9);
        let (mu, s2) = gaussian(&law_returns(&an).unwrap());
        assert!(cubic([31.0, -62.0, 35.0, -3.0], mu).abs() < 1e-8);
        assert!((29791.0 * s2.powi(3) + 231.0 * s2 - 79.0).abs() < 1e-8 * 29791.0);
        assert!((mu - 0.1038149281).abs() < 1e-9);
        let (mu, s2) = gaussian(&law_cumulative(&an, 10).unwrap());
        assert!(cubic([31.0, 62.0, 71.0, -27.0], mu).abs() < 1e-8);
        assert!((s2 - 0.580969422933953).abs() < 1e-8);
    }

    #[test]
    fn dyck_discrete_laws_share_lambda() {
        let an = dyck();
        let lambda = dyck_lambda();
        let fa = law_final_altitude(&an, 30).unwrap();
        let reference = LimitLaw::geometric(lambda, 0);
        for (k, p) in values(&fa).iter().enumerate() {
            assert!((p - reference.pmf(k).unwrap()).abs() < 1e-12, "{k}");
        }
        let avg = law_avg_catastrophe(&an, 80).unwrap();
        let reference = LimitLaw::geometric(lambda, 2);
        for (k, p) in values(&avg).iter().enumerate() {
            assert!((p - reference.pmf(k).unwrap()).abs() < 1e-12, "{k}");
        }
        let ratio = crate::asymptotics::ratio_limit(&an).unwrap();
        assert!((values(&fa)[0] - ratio).abs() < 1e-12);
    }

    #[test]
    fn mean_size_links_cumulative_and_count() {
        let an = dyck();
        let (count, _) = gaussian(&law_catastrophes(&an).unwrap());
        let (total, _) = gaussian(&law_cumulative(&an, 10).unwrap());
        let size = law_avg_catastrophe(&an, 80).unwrap().law.mean(0);
        assert!((total / count - size).abs() < 1e-6);
        assert!((size - (2.0 + dyck_lambda() / (1.0 - dyck_lambda()))).abs() < 1e-9);
    }

    #[test]
    fn dyck_waiting_time() {
        let an = dyck();
        let r = law_waiting_time(&an, 400).unwrap();
        let v = values(&r);
        assert!((v[3] - an.z_star().powi(3)).abs() < 1e-15);
        assert!(v[6] > v[4]);
        assert!(matches!(law_waiting_time(&an, 40), Err(Error::TailBoundExceeded { .. })));
    }

    fn mean_of(dist: &[f64]) -> f64 {
        dist.iter().enumerate().map(|(k, p)| k as f64 * p).sum()
    }

    #[test]
    fn exact_means_approach_the_limit_with_a_constant_offset() {
        // E X_n = mu n + c + o(1): the relative error halves when n doubles.
        // At n = 60 it is 14% for catastrophes and 19% for returns.
        let an = dyck();
        let js = JumpSet::dyck();
        for (param, law) in [
            (Param::Catastrophes, law_catastrophes(&an).unwrap()),
            (Param::Returns, law_returns(&an).unwrap()),
            (Param::Cumulative, law_cumulative(&an, 10).unwrap()),
        ] {
            let offset =
                |n: usize| mean_of(&parameter_series(&js, n, param).row_distribution(n)) - law.law.mean(n as u64);
            let (a, b) = (offset(60), offset(120));
            assert!((a - b).abs() < 0.01, "{param}: {a} {b}");
            assert!(b.abs() / law.law.mean(120) < 0.1, "{param}");
        }
        let n = 60;
        let fa = mean_of(&crate::series::counting_table(&js, n, true).row_distribution(n));
        let predicted = law_final_altitude(&an, 60).unwrap().law.mean(0);
        assert!((fa / predicted - 1.0).abs() < 0.1, "{fa} {predicted}");
    }

    #[test]
    fn regimes_pick_their_law_family() {
        let config = Config::default().allowing_periodic();
        let critical: JumpSet = "-1:4,1:1,q=4".parse().unwrap();
        let an = analyze(&critical, &config).unwrap();
        assert_eq!(an.regime(), Regime::CriticalRoot);
        assert!(matches!(law_catastrophes(&an).unwrap().law, LimitLaw::Rayleigh { .. }));
        assert!(matches!(law_returns(&an).unwrap().law, LimitLaw::Rayleigh { .. }));
        assert!(matches!(law_cumulative(&an, 10).unwrap().law, LimitLaw::Rayleigh { .. }));
        let an = analyze(&"-1:4,1:1,q=2".parse().unwrap(), &config).unwrap();
        assert_eq!(an.regime(), Regime::NoRoot);
        assert!(matches!(law_catastrophes(&an).unwrap().law, LimitLaw::NegBinomMixture { .. }));
    }

    fn aperiodic_no_root() -> Analysis {
        let an = analyze(&"-1:4,0:1,1:1,q=1".parse().unwrap(), &Config::default()).unwrap();
        assert_eq!(an.regime(), Regime::NoRoot);
        an
    }

    #[test]
    fn no_root_laws_are_normalized() {
        let an = aperiodic_no_root();
        for param in LawParam::ALL.into_iter().filter(|p| *p != LawParam::Waiting) {
            let r = law(&an, param, 200).unwrap();
            let sum: f64 = r.law.pmf_values(200).unwrap().iter().sum();
            assert!((sum - 1.0).abs() < 1e-8, "{param}: {sum}");
        }
    }

    #[test]
    fn no_root_waiting_tail_matches_the_singular_term() {
        let an = aperiodic_no_root();
        let kmax = 400;
        let r = law_waiting_time(&an, kmax).unwrap();
        let LimitLaw::DiscretePmf { values, defect, tail_bound, .. } = &r.law else { panic!("{r:?}") };
        let q_rho = an.kernel.q(an.kernel.rho()).unwrap();
        let head: f64 = values[1..].iter().sum();
        // sum_{k > K} q_k rho^k ~ eta / sqrt(pi K).
        let expected = an.eta().unwrap() / (PI * kmax as f64).sqrt();
        assert!(((q_rho - head) / expected - 1.0).abs() < 0.05);
        assert!((values[0] + head + defect + tail_bound - 1.0).abs() < 1e-12);
        assert!(!r.warnings.is_empty());
    }
}
