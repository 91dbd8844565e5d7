//! Kernel roots, structural constants, the dominant singularity of
//! `D(z) = 1/(1 - Q(z))` and the regime trichotomy.
//!
//! With `K(u) = u^c (1 - z P(u)) = -z p_d prod (u - u_i) prod (u - v_j)`,
//! the meander generating function is
//! `M(z, u) = (-1)^(d+1) / (z p_d prod_j (v_j - u))`, so everything here is
//! evaluated from the `d` large roots.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{format_rational, rational_to_f64, JumpSet};
use crate::roots::{deflate, polynomial_roots};

type C64 = Complex64;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Numerical tolerances; each can be overridden through the environment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Relative residual accepted for kernel roots (`CATPATHS_TOL_ROOT`).
    pub root_residual: f64,
    /// Relative width of the final bisection interval (`CATPATHS_TOL_BISECTION`).
    pub bisection: f64,
    /// Accepted disagreement of the two Puiseux estimates (`CATPATHS_TOL_ETA`).
    pub eta: f64,
    /// `|Q(rho) - 1|` below which the root is declared critical
    /// (`CATPATHS_TOL_CRITICAL`).
    pub critical_window: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { root_residual: 1e-12, bisection: 1e-12, eta: 1e-7, critical_window: 1e-8 }
    }
}

impl Tolerances {
    pub fn from_env() -> Self {
        let read = |key: &str, fallback: f64| {
            std::env::var(key).ok().and_then(|v| v.trim().parse::<f64>().ok()).filter(|v| *v > 0.0).unwrap_or(fallback)
        };
        let d = Tolerances::default();
        Tolerances {
            root_residual: read("CATPATHS_TOL_ROOT", d.root_residual),
            bisection: read("CATPATHS_TOL_BISECTION", d.bisection),
            eta: read("CATPATHS_TOL_ETA", d.eta),
            critical_window: read("CATPATHS_TOL_CRITICAL", d.critical_window),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Config {
    pub tolerances: Tolerances,
    /// Carry on with critical and no-root analysis for periodic supports,
    /// where the leading term ignores the other singularities on `|z| = rho`
    /// and so only describes a subsequence.
    pub allow_periodic: bool,
}

impl Config {
    pub fn from_env() -> Self {
        Config { tolerances: Tolerances::from_env(), allow_periodic: false }
    }

    pub fn allowing_periodic(mut self) -> Self {
        self.allow_periodic = true;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Regime {
    /// `rho0 < rho`: `D` has a simple pole.
    SubcriticalPole,
    /// `Q(rho) = 1`: the pole merges with the square-root singularity.
    CriticalRoot,
    /// `Q(rho) < 1`: `Q = 1` has no solution up to `rho`.
    NoRoot,
}

/// The `c` small and `d` large roots of the kernel, each sorted by modulus.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelRoots {
    pub small: Vec<C64>,
    pub large: Vec<C64>,
}

impl KernelRoots {
    /// The principal small root: real, positive and of maximal modulus.
    pub fn u1(&self) -> C64 {
        *self.small.iter().max_by(|a, b| a.re.total_cmp(&b.re)).expect("c >= 1")
    }

    /// The principal large root: real, positive and of minimal modulus.
    pub fn v1(&self) -> C64 {
        let min = self.large[0].norm();
        *self
            .large
            .iter()
            .filter(|v| v.norm() <= min * (1.0 + 1e-9))
            .max_by(|a, b| a.re.total_cmp(&b.re))
            .expect("d >= 1")
    }
}

/// Constants of the jump polynomial alone.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructuralConstants {
    pub tau: f64,
    pub rho: f64,
    pub rho1: f64,
    #[serde(rename = "C")]
    pub c_const: f64,
    /// Exact drift `P'(1)`.
    pub delta: String,
    pub delta_f64: f64,
    pub period: u64,
    /// `|tau P'(tau)|` relative to its terms.
    pub tau_residual: f64,
}

/// Value and error estimate of the Puiseux coefficient `eta(u)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EtaEstimate {
    pub u: f64,
    pub value: f64,
    /// Richardson-extrapolated difference quotient, computed independently.
    pub extrapolated: f64,
    pub error: f64,
}

/// Partial derivatives of `Q(z, u)` at `(z0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QPartials {
    pub q: f64,
    pub qz: f64,
    pub qu: f64,
    pub qzz: f64,
    pub qzu: f64,
    pub quu: f64,
}

/// Floating-point evaluator of the kernel and of every generating function
/// expressed through its roots.
#[derive(Debug, Clone)]
pub struct Kernel {
    js: JumpSet,
    /// `weights[j + c]` is `p_j`.
    weights: Vec<f64>,
    q: f64,
    c: usize,
    d: usize,
    excluded: Vec<usize>,
    delta: BigRational,
    constants: StructuralConstants,
    tol: Tolerances,
    /// Roots at `z = rho` other than the double root `tau`.
    rho_small: Vec<C64>,
    rho_large: Vec<C64>,
}

/// `1 / prod (v - u)`.
fn inverse_product(vs: &[C64], u: C64) -> C64 {
    vs.iter().fold(re(1.0), |acc, v| acc / (v - u))
}

/// Coefficients `[u^k] 1 / prod (v - u)` for `k <= kmax`.
pub fn inverse_product_series(vs: &[C64], kmax: usize) -> Vec<C64> {
    let mut out = vec![re(0.0); kmax + 1];
    out[0] = re(1.0);
    for v in vs {
        // b (v - u) = a  gives  b_k = (a_k + b_{k-1}) / v.
        let mut prev = re(0.0);
        for x in out.iter_mut() {
            prev = (*x + prev) / v;
            *x = prev;
        }
    }
    out
}

/// `f^(m)(z0)` for `m <= order` by the trapezoidal rule on `|z - z0| = r`.
fn contour_derivatives<F>(f: F, z0: f64, r: f64, points: usize, order: usize) -> Result<Vec<f64>>
where
    F: Fn(C64) -> Result<C64>,
{
    let mut acc = vec![re(0.0); order + 1];
    for k in 0..points {
        let w = C64::from_polar(1.0, TAU * k as f64 / points as f64);
        let value = f(re(z0) + w * r)?;
        let mut wm = re(1.0);
        for a in acc.iter_mut() {
            *a += value * wm.conj();
            wm *= w;
        }
    }
    let mut factorial = 1.0;
    Ok(acc
        .iter()
        .enumerate()
        .map(|(m, a)| {
            if m > 0 {
                factorial *= m as f64;
            }
            factorial * a.re / (points as f64 * r.powi(m as i32))
        })
        .collect())
}

const CONTOUR_POINTS: usize = 64;

fn check_agreement(a: &[f64], b: &[f64], what: &str) -> Result<()> {
    for (m, (x, y)) in a.iter().zip(b).enumerate() {
        if (x - y).abs() > 1e-8 * x.abs().max(1.0) {
            return Err(Error::DerivativeUnstable(format!(
                "{what}: order-{m} derivative changes from {x} to {y} when the contour shrinks"
            )));
        }
    }
    Ok(())
}

impl Kernel {
    pub fn new(js: &JumpSet, tol: Tolerances) -> Result<Self> {
        let weights = js.weights_f64();
        let c = js.c();
        let d = js.d();
        let delta = js.drift();
        let mut kernel = Kernel {
            js: js.clone(),
            weights,
            q: js.q_f64(),
            c,
            d,
            excluded: js.excluded_altitudes().iter().copied().collect(),
            delta: delta.clone(),
            constants: StructuralConstants {
                tau: 0.0,
                rho: 0.0,
                rho1: 1.0 / rational_to_f64(&js.total_weight()),
                c_const: 0.0,
                delta: format_rational(&delta),
                delta_f64: rational_to_f64(&delta),
                period: js.period(),
                tau_residual: 0.0,
            },
            tol,
            rho_small: Vec::new(),
            rho_large: Vec::new(),
        };
        let tau = kernel.solve_tau()?;
        let p_tau = kernel.p(tau);
        let rho = 1.0 / p_tau;
        kernel.constants.tau = tau;
        kernel.constants.rho = rho;
        kernel.constants.c_const = (2.0 * p_tau / kernel.p2(tau)).sqrt();
        kernel.constants.tau_residual = kernel.u_p1(tau).abs() / kernel.u_p1_scale(tau);

        // At z = rho, tau is a double root; the rest come from the
        // deflated kernel.
        let coeffs = kernel.kernel_coeffs(re(rho));
        let rest = deflate(&deflate(&coeffs, re(tau)), re(tau));
        let others = polynomial_roots(&rest, tol.root_residual.max(1e-10))?;
        let (mut small, mut large): (Vec<C64>, Vec<C64>) = others.into_iter().partition(|w| w.norm() < tau);
        if small.len() != c - 1 || large.len() != d - 1 {
            return Err(Error::ClassificationAmbiguous { z: rho });
        }
        small.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
        large.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
        kernel.rho_small = small;
        kernel.rho_large = large;
        Ok(kernel)
    }

    pub fn jump_set(&self) -> &JumpSet {
        &self.js
    }

    pub fn constants(&self) -> &StructuralConstants {
        &self.constants
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tol
    }

    pub fn tau(&self) -> f64 {
        self.constants.tau
    }

    pub fn rho(&self) -> f64 {
        self.constants.rho
    }

    pub fn rho1(&self) -> f64 {
        self.constants.rho1
    }

    pub fn c_const(&self) -> f64 {
        self.constants.c_const
    }

    /// Sign of the exact drift.
    pub fn drift_sign(&self) -> i8 {
        if self.delta.is_positive() {
            1
        } else if self.delta.is_zero() {
            0
        } else {
            -1
        }
    }

    fn jumps(&self) -> impl Iterator<Item = (i32, f64)> + '_ {
        self.weights.iter().enumerate().filter(|(_, w)| **w > 0.0).map(|(i, w)| (i as i32 - self.c as i32, *w))
    }

    pub fn p(&self, u: f64) -> f64 {
        self.jumps().map(|(j, w)| w * u.powi(j)).sum()
    }

    fn u_p1(&self, u: f64) -> f64 {
        self.jumps().map(|(j, w)| j as f64 * w * u.powi(j)).sum()
    }

    fn u_p1_scale(&self, u: f64) -> f64 {
        self.jumps().map(|(j, w)| (j as f64 * w * u.powi(j)).abs()).sum()
    }

    /// `P''(u)`.
    pub fn p2(&self, u: f64) -> f64 {
        self.jumps().map(|(j, w)| (j * (j - 1)) as f64 * w * u.powi(j - 2)).sum()
    }

    /// The unique positive zero of `u P'(u)`, which is increasing in `u`.
    fn solve_tau(&self) -> Result<f64> {
        let (mut lo, mut hi) = (1.0, 1.0);
        while self.u_p1(lo) > 0.0 {
            lo /= 2.0;
            if lo < 1e-300 {
                return Err(Error::RootFindFailure("no sign change of P' near 0".into()));
            }
        }
        while self.u_p1(hi) < 0.0 {
            hi *= 2.0;
            if hi > 1e300 {
                return Err(Error::RootFindFailure("no sign change of P' at infinity".into()));
            }
        }
        for _ in 0..2000 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.u_p1(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let tau = 0.5 * (lo + hi);
        if self.u_p1(tau).abs() > 1e-10 * self.u_p1_scale(tau) {
            return Err(Error::RootFindFailure(format!("P'(tau) does not vanish at tau = {tau}")));
        }
        Ok(tau)
    }

    /// Coefficients of `u^c (1 - z P(u))`, ascending in `u`.
    fn kernel_coeffs(&self, z: C64) -> Vec<C64> {
        let mut coeffs: Vec<C64> = self.weights.iter().map(|w| -z * w).collect();
        coeffs[self.c] += re(1.0);
        coeffs
    }

    fn is_rho(&self, z: C64) -> bool {
        z.im == 0.0 && z.re == self.constants.rho
    }

    /// All kernel roots at `z`, `0 < |z| <= rho`. At exactly `z = rho` the
    /// double root `tau` is reported once among the small and once among the
    /// large roots.
    pub fn roots(&self, z: C64) -> Result<KernelRoots> {
        let tau = self.constants.tau;
        if self.is_rho(z) {
            let mut small = self.rho_small.clone();
            small.push(re(tau));
            let mut large = vec![re(tau)];
            large.extend(self.rho_large.iter().copied());
            return Ok(KernelRoots { small, large });
        }
        if z.norm() == 0.0 || z.norm() >= self.constants.rho {
            return Err(Error::ClassificationAmbiguous { z: z.norm() });
        }
        let all = polynomial_roots(&self.kernel_coeffs(z), self.tol.root_residual)?;
        let gap = all.iter().map(|w| (w.norm() - tau).abs()).fold(f64::INFINITY, f64::min);
        if gap <= 1e-12 * tau {
            return Err(Error::ClassificationAmbiguous { z: z.norm() });
        }
        let (mut small, mut large): (Vec<C64>, Vec<C64>) = all.into_iter().partition(|w| w.norm() < tau);
        if small.len() != self.c {
            return Err(Error::ClassificationAmbiguous { z: z.norm() });
        }
        small.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
        large.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
        Ok(KernelRoots { small, large })
    }

    fn meander_factor(&self, z: C64) -> C64 {
        let sign = if self.d % 2 == 1 { 1.0 } else { -1.0 };
        re(sign) / (z * self.weights[self.c + self.d])
    }

    /// `M(z, u)` from precomputed roots.
    pub fn meander_from(&self, roots: &KernelRoots, z: C64, u: C64) -> C64 {
        self.meander_factor(z) * inverse_product(&roots.large, u)
    }

    /// `[u^k] M(z, u)` for `k <= kmax`.
    pub fn meander_coeffs_from(&self, roots: &KernelRoots, z: C64, kmax: usize) -> Vec<C64> {
        let f = self.meander_factor(z);
        inverse_product_series(&roots.large, kmax).into_iter().map(|x| x * f).collect()
    }

    pub fn meander(&self, z: C64, u: C64) -> Result<C64> {
        Ok(self.meander_from(&self.roots(z)?, z, u))
    }

    fn max_excluded(&self) -> usize {
        self.excluded.last().copied().unwrap_or(0)
    }

    /// `Q(z, u) = z q (M(z, u) - sum_{a excluded} u^a M_a(z))`.
    pub fn q_from(&self, roots: &KernelRoots, z: C64, u: C64) -> C64 {
        let full = self.meander_from(roots, z, u);
        let coeffs = self.meander_coeffs_from(roots, z, self.max_excluded());
        let removed: C64 = self.excluded.iter().map(|a| coeffs[*a] * u.powi(*a as i32)).sum();
        z * self.q * (full - removed)
    }

    pub fn q_zu(&self, z: C64, u: C64) -> Result<C64> {
        Ok(self.q_from(&self.roots(z)?, z, u))
    }

    /// `Q(z)` at real `z`.
    pub fn q(&self, z: f64) -> Result<f64> {
        Ok(self.q_zu(re(z), re(1.0))?.re)
    }

    /// `E(z) = M_0(z)`.
    pub fn e(&self, z: f64) -> Result<f64> {
        let roots = self.roots(re(z))?;
        Ok(self.meander_coeffs_from(&roots, re(z), 0)[0].re)
    }

    /// `M(z) = M(z, 1)`.
    pub fn m(&self, z: f64) -> Result<f64> {
        Ok(self.meander(re(z), re(1.0))?.re)
    }

    /// `E(z)` via the small roots: `(-1)^(c-1)/(p_{-c} z) prod u_i`.
    pub fn e_from_small_roots(&self, z: f64) -> Result<f64> {
        let roots = self.roots(re(z))?;
        let sign = if (self.c - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
        let prod = roots.small.iter().fold(re(1.0), |acc, u| acc * u);
        Ok((prod * sign / (self.weights[0] * z)).re)
    }

    /// `M(z)` via the small roots: `prod (1 - u_i) / (1 - z P(1))`.
    pub fn m_from_small_roots(&self, z: f64) -> Result<f64> {
        let roots = self.roots(re(z))?;
        let prod = roots.small.iter().fold(re(1.0), |acc, u| acc * (re(1.0) - u));
        Ok(prod.re / (1.0 - z * self.p(1.0)))
    }

    /// Upper end of the disk around the positive axis on which `Q(z)` is
    /// analytic: the meander pole `rho1` for non-negative drift, else `rho`.
    fn analytic_bound(&self) -> f64 {
        if self.drift_sign() >= 0 {
            self.constants.rho1
        } else {
            self.constants.rho
        }
    }

    fn z_radius(&self, z0: f64) -> Result<f64> {
        let r = 0.5 * (self.analytic_bound() - z0).min(z0);
        if r <= 0.0 || !r.is_finite() {
            return Err(Error::DerivativeUnstable(format!("no disk of analyticity around z = {z0}")));
        }
        Ok(r)
    }

    /// Derivatives of order `0..=order` at real `z0` of a function analytic
    /// on the same disk as `Q`; checked against a contour of half the
    /// radius.
    pub fn z_derivatives<F>(&self, z0: f64, order: usize, f: F) -> Result<Vec<f64>>
    where
        F: Fn(C64) -> Result<C64>,
    {
        let r = self.z_radius(z0)?;
        let a = contour_derivatives(&f, z0, r, CONTOUR_POINTS, order)?;
        let b = contour_derivatives(&f, z0, 0.5 * r, CONTOUR_POINTS, order)?;
        check_agreement(&a, &b, "z-derivative")?;
        Ok(a)
    }

    /// `[Q, Q', Q'']` at `z0`.
    pub fn q_derivatives(&self, z0: f64) -> Result<Vec<f64>> {
        self.z_derivatives(z0, 2, |z| self.q_zu(z, re(1.0)))
    }

    /// `[A, A', A'']` at `z0` with `A = 1 - 1/F_0 = 1 - (1 - Q)/E`.
    pub fn arch_derivatives(&self, z0: f64) -> Result<Vec<f64>> {
        self.z_derivatives(z0, 2, |z| {
            let roots = self.roots(z)?;
            let q = self.q_from(&roots, z, re(1.0));
            let e = self.meander_coeffs_from(&roots, z, 0)[0];
            Ok(re(1.0) - (re(1.0) - q) / e)
        })
    }

    fn partials_with(&self, z0: f64, rz: f64, ru: f64) -> Result<QPartials> {
        let n = CONTOUR_POINTS;
        let ws: Vec<C64> = (0..n).map(|k| C64::from_polar(1.0, TAU * k as f64 / n as f64)).collect();
        // a[j][k] = [ (z-z0)^j (u-1)^k ] Q, for j + k <= 2.
        let mut a = [[re(0.0); 3]; 3];
        for wz in &ws {
            let z = re(z0) + wz * rz;
            let roots = self.roots(z)?;
            for wu in &ws {
                let value = self.q_from(&roots, z, re(1.0) + wu * ru);
                for (j, row) in a.iter_mut().enumerate() {
                    for (k, cell) in row.iter_mut().enumerate().take(3 - j) {
                        *cell += value * (wz.powi(j as i32) * wu.powi(k as i32)).conj();
                    }
                }
            }
        }
        let coef = |j: usize, k: usize| a[j][k].re / ((n * n) as f64 * rz.powi(j as i32) * ru.powi(k as i32));
        Ok(QPartials {
            q: coef(0, 0),
            qz: coef(1, 0),
            qu: coef(0, 1),
            qzz: 2.0 * coef(2, 0),
            qzu: coef(1, 1),
            quu: 2.0 * coef(0, 2),
        })
    }

    /// First and second partial derivatives of `Q(z, u)` at `(z0, 1)`.
    pub fn q_partials(&self, z0: f64) -> Result<QPartials> {
        let rz = self.z_radius(z0)?;
        let v1 = self.roots(re(z0 + rz))?.v1().re;
        let ru = 0.5 * (v1 - 1.0);
        if ru <= 0.0 {
            return Err(Error::DerivativeUnstable("meander pole at u <= 1".into()));
        }
        let a = self.partials_with(z0, rz, ru)?;
        let b = self.partials_with(z0, 0.5 * rz, 0.5 * ru)?;
        check_agreement(
            &[a.q, a.qz, a.qu, a.qzz, a.qzu, a.quu],
            &[b.q, b.qz, b.qu, b.qzz, b.qzu, b.quu],
            "partial derivative of Q(z,u)",
        )?;
        Ok(a)
    }

    /// `Q(rho, u)`; needs negative drift, otherwise `M(rho, 1)` is infinite.
    pub fn q_at_rho(&self, u: f64) -> Result<f64> {
        if self.drift_sign() >= 0 && u >= self.constants.tau {
            return Err(Error::RegimeUnavailable("Q(rho) is infinite for non-negative drift".into()));
        }
        Ok(self.q_zu(re(self.constants.rho), re(u))?.re)
    }

    /// `eta(u)` from its closed form
    /// `rho q C [G(u) - sum_{a excluded} u^a [w^a] G(w)]`,
    /// `G(w) = M(rho, w)/(tau - w)`, cross-checked by Richardson
    /// extrapolation of `(Q(rho,u) - Q(rho(1-h),u))/sqrt(h)`.
    pub fn eta(&self, u: f64) -> Result<EtaEstimate> {
        if self.drift_sign() >= 0 && u >= self.constants.tau {
            return Err(Error::RegimeUnavailable("eta is only defined when Q(rho, u) is finite".into()));
        }
        let StructuralConstants { tau, rho, c_const, .. } = self.constants;
        let mut vs = vec![re(tau), re(tau)];
        vs.extend(self.rho_large.iter().copied());
        let f = self.meander_factor(re(rho));
        let g_u = f * inverse_product(&vs, re(u));
        let g_coeffs = inverse_product_series(&vs, self.max_excluded());
        let removed: C64 = self.excluded.iter().map(|a| f * g_coeffs[*a] * u.powi(*a as i32)).sum();
        let value = rho * self.q * c_const * (g_u - removed).re;

        let q_rho = self.q_at_rho(u)?;
        let levels = 8;
        let mut table: Vec<Vec<f64>> = Vec::with_capacity(levels);
        for k in 0..levels {
            let h = 1e-2 / 4f64.powi(k as i32);
            let z = rho * (1.0 - h);
            let diff = (q_rho - self.q_zu(re(z), re(u))?.re) / h.sqrt();
            let mut row = vec![diff];
            for j in 1..=k {
                let factor = 2f64.powi(j as i32);
                let prev: &Vec<f64> = &table[k - 1];
                row.push((factor * row[j - 1] - prev[j - 1]) / (factor - 1.0));
            }
            table.push(row);
        }
        let extrapolated = table[levels - 1][levels - 1];
        let spread = (extrapolated - table[levels - 2][levels - 2]).abs();
        let error = (value - extrapolated).abs().max(spread);
        if error > self.tol.eta * value.abs().max(1.0) {
            return Err(Error::ExtrapolationUnstable(format!(
                "eta({u}) = {value} but the extrapolated difference quotient gives {extrapolated}"
            )));
        }
        Ok(EtaEstimate { u, value, extrapolated, error })
    }

    /// `[u^k] Q(z, u)` for `k <= kmax` at real `z`, `0 < z <= rho`.
    pub fn q_u_coeffs(&self, z: f64, kmax: usize) -> Result<Vec<f64>> {
        let roots = self.roots(re(z))?;
        let m = self.meander_coeffs_from(&roots, re(z), kmax);
        Ok(m.iter()
            .enumerate()
            .map(|(k, x)| if self.excluded.contains(&k) { 0.0 } else { z * self.q * x.re })
            .collect())
    }

    /// `d/du Q(z, u)` at `u = 1`, from the logarithmic derivative of the
    /// root product.
    pub fn q_u_at_one(&self, z: f64) -> Result<f64> {
        let zc = re(z);
        let roots = self.roots(zc)?;
        let m = self.meander_from(&roots, zc, re(1.0));
        let log_derivative: C64 = roots.large.iter().map(|v| (v - re(1.0)).inv()).sum();
        let coeffs = self.meander_coeffs_from(&roots, zc, self.max_excluded());
        let removed: C64 = self.excluded.iter().map(|a| coeffs[*a] * *a as f64).sum();
        Ok((zc * self.q * (m * log_derivative - removed)).re)
    }

    /// `[u^k] eta(u)` for `k <= kmax`.
    pub fn eta_coeffs(&self, kmax: usize) -> Vec<f64> {
        let StructuralConstants { tau, rho, c_const, .. } = self.constants;
        let mut vs = vec![re(tau), re(tau)];
        vs.extend(self.rho_large.iter().copied());
        let f = self.meander_factor(re(rho));
        inverse_product_series(&vs, kmax)
            .iter()
            .enumerate()
            .map(|(k, g)| if self.excluded.contains(&k) { 0.0 } else { rho * self.q * c_const * (f * g).re })
            .collect()
    }

    /// Smallest positive root of `Q(z) = 1` on `(0, hi)`, assuming
    /// `Q(z) - 1` changes sign there. Returns the root and the final
    /// bracket width.
    fn bisect_q_equals_one(&self, hi: f64) -> Result<(f64, f64)> {
        let (mut lo, mut hi) = (0.0, hi);
        for _ in 0..2000 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= self.tol.bisection * hi * 1e-3 {
                break;
            }
            if self.q(mid)? < 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let width = hi - lo;
        if width > self.tol.bisection * hi {
            return Err(Error::RootFindFailure(format!("bisection for rho0 stopped at width {width:e}")));
        }
        Ok((0.5 * (lo + hi), width))
    }
}

/// Output of the full kernel analysis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelReport {
    pub jumps: String,
    pub policy: String,
    #[serde(flatten)]
    pub constants: StructuralConstants,
    /// `None` when `Q(rho)` is infinite (non-negative drift).
    pub q_at_rho: Option<f64>,
    pub rho0: Option<f64>,
    pub rho0_error: Option<f64>,
    pub eta: Option<f64>,
    pub eta_error: Option<f64>,
    pub regime: Regime,
    pub warnings: Vec<String>,
}

/// A classified jump set together with its evaluator.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub kernel: Kernel,
    pub report: KernelReport,
    pub config: Config,
}

impl Analysis {
    pub fn regime(&self) -> Regime {
        self.report.regime
    }

    /// `rho0`, or `rho` in the no-root regime: the point where every law is
    /// evaluated.
    pub fn z_star(&self) -> f64 {
        self.report.rho0.unwrap_or(self.kernel.rho())
    }

    pub fn eta(&self) -> Result<f64> {
        self.report.eta.ok_or_else(|| Error::RegimeUnavailable("eta is not defined in this regime".into()))
    }

    /// `eta(u)`, subject to the same periodicity restriction as `eta`.
    pub fn eta_at(&self, u: f64) -> Result<EtaEstimate> {
        self.periodic_guard()?;
        self.kernel.eta(u)
    }

    fn periodic_guard(&self) -> Result<()> {
        let period = self.kernel.constants().period;
        if period > 1 && !self.config.allow_periodic {
            return Err(Error::PeriodicUnsupported { period });
        }
        Ok(())
    }
}

pub fn analyze(js: &JumpSet, config: &Config) -> Result<Analysis> {
    let kernel = Kernel::new(js, config.tolerances)?;
    let tol = config.tolerances;
    let mut warnings = Vec::new();
    let (regime, q_at_rho, rho0, rho0_error) = if kernel.drift_sign() >= 0 {
        let (r0, err) = kernel.bisect_q_equals_one(kernel.rho1())?;
        (Regime::SubcriticalPole, None, Some(r0), Some(err))
    } else {
        let qr = kernel.q_at_rho(1.0)?;
        if (qr - 1.0).abs() <= tol.critical_window {
            warnings.push(format!("Q(rho) = {qr} is within {:e} of 1; classified as critical", tol.critical_window));
            (Regime::CriticalRoot, Some(qr), Some(kernel.rho()), Some((qr - 1.0).abs()))
        } else if qr > 1.0 {
            let (r0, err) = kernel.bisect_q_equals_one(kernel.rho())?;
            (Regime::SubcriticalPole, Some(qr), Some(r0), Some(err))
        } else {
            (Regime::NoRoot, Some(qr), None, None)
        }
    };
    let period = kernel.constants().period;
    let mut report = KernelReport {
        jumps: js.to_string(),
        policy: js.policy().to_string(),
        constants: kernel.constants().clone(),
        q_at_rho,
        rho0,
        rho0_error,
        eta: None,
        eta_error: None,
        regime,
        warnings,
    };
    if regime != Regime::SubcriticalPole {
        if period > 1 && !config.allow_periodic {
            return Err(Error::PeriodicUnsupported { period });
        }
        if period > 1 {
            report.warnings.push(format!(
                "support has period {period}; leading terms describe the subsequence along which \
                 the singularity at rho dominates"
            ));
        }
        let eta = kernel.eta(1.0)?;
        report.eta = Some(eta.value);
        report.eta_error = Some(eta.error);
    }
    Ok(Analysis { kernel, report, config: *config })
}

/// Full report with the regime, using tolerances from the environment.
pub fn classify_regime(js: &JumpSet) -> Result<KernelReport> {
    Ok(analyze(js, &Config::from_env())?.report)
}

pub fn structural_constants(js: &JumpSet) -> Result<StructuralConstants> {
    Ok(Kernel::new(js, Tolerances::from_env())?.constants().clone())
}

/// Kernel roots at real `z` in `(0, rho)`.
pub fn kernel_roots(js: &JumpSet, z: f64) -> Result<KernelRoots> {
    let kernel = Kernel::new(js, Tolerances::from_env())?;
    if !(z > 0.0 && z < kernel.rho()) {
        return Err(Error::InvalidArgument(format!("z = {z} outside (0, rho)")));
    }
    kernel.roots(re(z))
}

/// Generating functions at a real point, from the kernel roots.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GfValues {
    pub z: f64,
    pub e: f64,
    pub m: f64,
    pub q: f64,
    /// `M_k(z)` for `k` up to the largest excluded altitude (at least `c`).
    pub m_k: BTreeMap<usize, f64>,
}

pub fn evaluate_gfs(js: &JumpSet, z: f64) -> Result<GfValues> {
    let kernel = Kernel::new(js, Tolerances::from_env())?;
    if !(z > 0.0 && z <= kernel.rho()) {
        return Err(Error::InvalidArgument(format!("z = {z} outside (0, rho]")));
    }
    if kernel.drift_sign() >= 0 && z >= kernel.rho1() {
        return Err(Error::PoleAtZ { z: kernel.rho1() });
    }
    let zc = re(z);
    let roots = kernel.roots(zc)?;
    let kmax = kernel.max_excluded().max(kernel.c);
    let coeffs = kernel.meander_coeffs_from(&roots, zc, kmax);
    Ok(GfValues {
        z,
        e: coeffs[0].re,
        m: kernel.meander_from(&roots, zc, re(1.0)).re,
        q: kernel.q_from(&roots, zc, re(1.0)).re,
        m_k: coeffs.iter().enumerate().map(|(k, x)| (k, x.re)).collect(),
    })
}

pub fn find_rho0(js: &JumpSet) -> Result<Option<f64>> {
    let config = Config::from_env().allowing_periodic();
    Ok(analyze(js, &config)?.report.rho0)
}

/// `eta(u)` with the periodicity restriction of the singular analysis.
pub fn puiseux_eta(js: &JumpSet, u: f64) -> Result<EtaEstimate> {
    let kernel = Kernel::new(js, Tolerances::from_env())?;
    let period = kernel.constants().period;
    if period > 1 {
        return Err(Error::PeriodicUnsupported { period });
    }
    kernel.eta(u)
}
