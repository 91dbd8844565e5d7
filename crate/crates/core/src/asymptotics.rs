//! Leading-order asymptotics of `d_n`, `e_n` and `m_n` in the three regimes.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{analyze, Analysis, Config, Regime};
use crate::model::JumpSet;
use crate::series::{d_series, f0_series, f_series, Series};

/// Which coefficient sequence is estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Excursions ending with a catastrophe, `[z^n] D(z)`.
    D,
    /// Excursions with catastrophes, `[z^n] F_0(z)`.
    E,
    /// Meanders with catastrophes, `[z^n] F(z, 1)`.
    M,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::D, Family::E, Family::M];

    /// Exact series of the family to order `n`.
    pub fn series(self, js: &JumpSet, n: usize) -> Series {
        match self {
            Family::D => d_series(js, n),
            Family::E => f0_series(js, n),
            Family::M => f_series(js, n),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::D => "d",
            Family::E => "e",
            Family::M => "m",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "d" => Ok(Family::D),
            "e" => Ok(Family::E),
            "m" => Ok(Family::M),
            other => Err(Error::InvalidArgument(format!("unknown family `{other}` (d, e or m)"))),
        }
    }
}

/// `value = constant * growth^n * n^alpha`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticEstimate {
    pub family: Family,
    pub n: u64,
    pub value: f64,
    /// `ln value`, finite even when `value` overflows.
    pub ln_value: f64,
    pub regime: Regime,
    pub constant: f64,
    pub growth: f64,
    pub alpha: f64,
    pub warnings: Vec<String>,
}

/// Leading constant and exponent of a family in the regime of `an`.
pub fn leading_term(an: &Analysis, family: Family) -> Result<(f64, f64, Vec<String>)> {
    let k = &an.kernel;
    let z = an.z_star();
    let mut warnings = an.report.warnings.clone();
    let sqrt_pi = PI.sqrt();
    let (constant, alpha) = match an.regime() {
        Regime::SubcriticalPole => {
            let qp = k.q_derivatives(z)?[1];
            let base = 1.0 / (z * qp);
            let factor = match family {
                Family::D => 1.0,
                Family::E => k.e(z)?,
                Family::M => k.m(z)?,
            };
            (factor * base, 0.0)
        }
        Regime::CriticalRoot => {
            let eta = an.eta()?;
            let factor = match family {
                Family::D => 1.0,
                Family::E => k.e(z)?,
                Family::M => k.m(z)?,
            };
            (factor / (eta * sqrt_pi), -0.5)
        }
        Regime::NoRoot => {
            let eta = an.eta()?;
            let tau = k.tau();
            let c = k.c_const();
            let d = 1.0 / (1.0 - k.q(z)?);
            let constant = match family {
                Family::D => d * d * eta / (2.0 * sqrt_pi),
                Family::E => d * k.e(z)? * (c / tau + eta * d) / (2.0 * sqrt_pi),
                Family::M => d * k.m(z)? * (c / (tau - 1.0) + eta * d) / (2.0 * sqrt_pi),
            };
            (constant, -1.5)
        }
    };
    if !(constant > 0.0) {
        warnings.push(format!("leading constant {constant} is not positive"));
    }
    Ok((constant, alpha, warnings))
}

pub fn estimate(an: &Analysis, family: Family, n: u64) -> Result<AsymptoticEstimate> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let (constant, alpha, warnings) = leading_term(an, family)?;
    let growth = 1.0 / an.z_star();
    let nf = n as f64;
    let ln_value = constant.ln() + nf * growth.ln() + alpha * nf.ln();
    Ok(AsymptoticEstimate {
        family,
        n,
        value: ln_value.exp(),
        ln_value,
        regime: an.regime(),
        constant,
        growth,
        alpha,
        warnings,
    })
}

/// Estimate of the `n`-th coefficient of `family` for `js`.
pub fn asym_coeff(js: &JumpSet, family: Family, n: u64) -> Result<AsymptoticEstimate> {
    estimate(&analyze(js, &Config::from_env())?, family, n)
}

/// Estimate next to the exact coefficient.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub estimate: AsymptoticEstimate,
    pub exact: f64,
    pub ln_exact: f64,
    /// `estimate / exact`, computed in logarithms.
    pub ratio: f64,
}

pub fn compare(an: &Analysis, family: Family, n: u64) -> Result<Comparison> {
    let estimate = estimate(an, family, n)?;
    let series = family.series(an.kernel.jump_set(), n as usize);
    let ln_exact = series.ln_abs_coeff(n as usize);
    Ok(Comparison { ratio: (estimate.ln_value - ln_exact).exp(), exact: ln_exact.exp(), ln_exact, estimate })
}

/// Limit of `e_n / m_n`.
pub fn ratio_limit(an: &Analysis) -> Result<f64> {
    let k = &an.kernel;
    let z = an.z_star();
    let plain = k.e(z)? / k.m(z)?;
    match an.regime() {
        Regime::SubcriticalPole | Regime::CriticalRoot => Ok(plain),
        Regime::NoRoot => {
            let eta = an.eta()?;
            let (tau, c) = (k.tau(), k.c_const());
            let d = 1.0 / (1.0 - k.q(z)?);
            Ok(plain * (c / tau + eta * d) / (c / (tau - 1.0) + eta * d))
        }
    }
}

pub fn excursion_ratio(js: &JumpSet) -> Result<f64> {
    ratio_limit(&analyze(js, &Config::from_env())?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DyckConstants {
    pub rho0: f64,
    /// `(116 + 12 sqrt 93)^(1/3)/6 + (2/3)(116 + 12 sqrt 93)^(-1/3) - 2/3`.
    pub rho0_closed_form: f64,
    pub c_e: f64,
    pub c_m: f64,
    pub rho0_residual: f64,
    pub c_e_residual: f64,
    pub c_m_residual: f64,
}

pub fn dyck_constants() -> Result<DyckConstants> {
    let an = analyze(&JumpSet::dyck(), &Config::from_env())?;
    let rho0 = an.z_star();
    let s = (116.0 + 12.0 * 93f64.sqrt()).cbrt();
    let c_e = leading_term(&an, Family::E)?.0;
    let c_m = leading_term(&an, Family::M)?.0;
    Ok(DyckConstants {
        rho0,
        rho0_closed_form: s / 6.0 + 2.0 / (3.0 * s) - 2.0 / 3.0,
        c_e,
        c_m,
        rho0_residual: (rho0.powi(3) + 2.0 * rho0 * rho0 + rho0 - 1.0).abs(),
        c_e_residual: (31.0 * c_e.powi(3) - 62.0 * c_e * c_e + 35.0 * c_e - 3.0).abs(),
        c_m_residual: (31.0 * c_m.powi(3) - 31.0 * c_m * c_m + 16.0 * c_m - 3.0).abs(),
    })
}
