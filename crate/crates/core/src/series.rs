//! Exact truncated power series.
//!
//! Coefficients are stored graded: the coefficient of `z^n` (and `u^k`) is
//! `nums[n][k] / (den * base^n)` with integer `nums`, so products and
//! sequence constructions are integer convolutions. For a jump set, `base`
//! is the common denominator of its weights and `den` stays 1 through all
//! the constructions below.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::model::{format_rational, ln_abs_bigint, JumpSet};

#[derive(Debug, Clone)]
struct Graded {
    base: BigInt,
    den: BigInt,
    /// `rows[n]` holds the coefficients in the second variable; univariate
    /// series keep rows of length at most one.
    rows: Vec<Vec<BigInt>>,
}

fn trim(row: &mut Vec<BigInt>) {
    while row.last().is_some_and(Zero::is_zero) {
        row.pop();
    }
}

fn add_rows(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] += x;
    }
    trim(&mut out);
    out
}

fn mul_rows_into(out: &mut Vec<BigInt>, a: &[BigInt], b: &[BigInt]) {
    if a.is_empty() || b.is_empty() {
        return;
    }
    let need = a.len() + b.len() - 1;
    if out.len() < need {
        out.resize(need, BigInt::zero());
    }
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
}

/// Equality of the represented series, whatever the grading.
impl PartialEq for Graded {
    fn eq(&self, other: &Self) -> bool {
        if self.order() != other.order() {
            return false;
        }
        let (a, b) = Graded::align(self, other);
        a.rows
            .iter()
            .zip(&b.rows)
            .all(|(ra, rb)| ra.len() == rb.len() && ra.iter().zip(rb).all(|(x, y)| x * &b.den == y * &a.den))
    }
}

impl Eq for Graded {}

impl Graded {
    fn new(base: BigInt, den: BigInt, mut rows: Vec<Vec<BigInt>>) -> Self {
        rows.iter_mut().for_each(trim);
        let mut g = Graded { base, den, rows };
        g.normalize();
        g
    }

    fn order(&self) -> usize {
        self.rows.len() - 1
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -std::mem::take(&mut self.den);
            for x in self.rows.iter_mut().flatten() {
                *x = -std::mem::take(x);
            }
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for x in self.rows.iter().flatten() {
            g = g.gcd(x);
            if g.is_one() {
                return;
            }
        }
        self.den /= &g;
        for x in self.rows.iter_mut().flatten() {
            *x /= &g;
        }
    }

    fn coeff(&self, n: usize, k: usize) -> BigRational {
        match self.rows.get(n).and_then(|r| r.get(k)) {
            Some(x) => BigRational::new(x.clone(), &self.den * self.base.pow(n as u32)),
            None => BigRational::zero(),
        }
    }

    fn coeff_f64(&self, n: usize, k: usize) -> f64 {
        match self.rows.get(n).and_then(|r| r.get(k)) {
            Some(x) if !x.is_zero() => {
                let ln = ln_abs_bigint(x) - ln_abs_bigint(&self.den) - n as f64 * ln_abs_bigint(&self.base);
                let sign = if x.is_negative() { -1.0 } else { 1.0 };
                sign * ln.exp()
            }
            _ => 0.0,
        }
    }

    fn truncate(&self, order: usize) -> Self {
        let mut rows = self.rows.clone();
        rows.truncate(order + 1);
        Graded { base: self.base.clone(), den: self.den.clone(), rows }
    }

    /// Same series written over `base * t`.
    fn rebase(&self, t: &BigInt) -> Self {
        if t.is_one() {
            return self.clone();
        }
        let mut power = BigInt::one();
        let mut rows = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            rows.push(row.iter().map(|x| x * &power).collect());
            power *= t;
        }
        Graded { base: &self.base * t, den: self.den.clone(), rows }
    }

    fn align(a: &Self, b: &Self) -> (Self, Self) {
        let base = a.base.lcm(&b.base);
        let a = a.rebase(&(&base / &a.base));
        let b = b.rebase(&(&base / &b.base));
        let order = a.order().min(b.order());
        (a.truncate(order), b.truncate(order))
    }

    fn add(&self, other: &Self) -> Self {
        let (a, b) = Self::align(self, other);
        let g = a.den.gcd(&b.den);
        let fa = &b.den / &g;
        let fb = &a.den / &g;
        let rows = a
            .rows
            .iter()
            .zip(&b.rows)
            .map(|(ra, rb)| {
                let sa: Vec<BigInt> = ra.iter().map(|x| x * &fa).collect();
                let sb: Vec<BigInt> = rb.iter().map(|x| x * &fb).collect();
                add_rows(&sa, &sb)
            })
            .collect();
        Graded::new(a.base, &a.den * &fa, rows)
    }

    fn neg(&self) -> Self {
        let rows = self.rows.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        Graded { base: self.base.clone(), den: self.den.clone(), rows }
    }

    fn mul(&self, other: &Self) -> Self {
        let (a, b) = Self::align(self, other);
        let order = a.order();
        let mut rows = vec![Vec::new(); order + 1];
        for (i, ra) in a.rows.iter().enumerate() {
            if ra.is_empty() {
                continue;
            }
            for (j, rb) in b.rows.iter().enumerate().take(order + 1 - i) {
                mul_rows_into(&mut rows[i + j], ra, rb);
            }
        }
        Graded::new(a.base, &a.den * &b.den, rows)
    }

    fn scale(&self, r: &BigRational) -> Self {
        let rows = self.rows.iter().map(|row| row.iter().map(|x| x * r.numer()).collect()).collect();
        Graded::new(self.base.clone(), &self.den * r.denom(), rows)
    }

    /// Multiplies by `z^s`, keeping the order.
    fn shift_z(&self, s: usize) -> Self {
        let order = self.order();
        let factor = self.base.pow(s as u32);
        let mut rows = vec![Vec::new(); order + 1];
        for (n, row) in self.rows.iter().enumerate().take((order + 1).saturating_sub(s)) {
            rows[n + s] = row.iter().map(|x| x * &factor).collect();
        }
        Graded { base: self.base.clone(), den: self.den.clone(), rows }
    }

    /// `1 / (1 - self)`; requires a vanishing `z^0` row.
    fn sequence(&self) -> Result<Self> {
        if !self.rows[0].is_empty() {
            return Err(Error::NonInvertible);
        }
        // Over base*den the numerators nums[n]*den^(n-1) are integral for
        // n >= 1, which removes the denominator.
        let mut x = self.clone();
        if !x.den.is_one() {
            let den = x.den.clone();
            let mut power = BigInt::one();
            for row in x.rows.iter_mut().skip(1) {
                for v in row.iter_mut() {
                    *v *= &power;
                }
                power *= &den;
            }
            x.base *= &den;
            x.den = BigInt::one();
        }
        let order = x.order();
        let mut out: Vec<Vec<BigInt>> = Vec::with_capacity(order + 1);
        out.push(vec![BigInt::one()]);
        for n in 1..=order {
            let mut row = Vec::new();
            for m in 1..=n {
                mul_rows_into(&mut row, &x.rows[m], &out[n - m]);
            }
            trim(&mut row);
            out.push(row);
        }
        Ok(Graded { base: x.base, den: BigInt::one(), rows: out })
    }

    fn reciprocal(&self) -> Result<Self> {
        let head = &self.rows[0];
        if head.len() != 1 {
            return Err(Error::NonInvertible);
        }
        let c0 = BigRational::new(head[0].clone(), self.den.clone());
        let inv = c0.recip();
        let one = Graded::constant(&BigRational::one(), self.order());
        let x = one.add(&self.scale(&inv).neg());
        Ok(x.sequence()?.scale(&inv))
    }

    fn constant(c: &BigRational, order: usize) -> Self {
        let mut rows = vec![Vec::new(); order + 1];
        rows[0] = vec![c.numer().clone()];
        Graded::new(BigInt::one(), c.denom().clone(), rows)
    }
}

/// Truncated univariate power series with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series(Graded);

impl Series {
    pub fn from_rationals(coeffs: &[BigRational]) -> Self {
        assert!(!coeffs.is_empty(), "a series has order >= 0");
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let rows = coeffs.iter().map(|c| vec![(c * BigRational::from_integer(den.clone())).to_integer()]).collect();
        Series(Graded::new(BigInt::one(), den, rows))
    }

    pub fn from_integers<I: IntoIterator<Item = BigInt>>(coeffs: I) -> Self {
        let rows: Vec<Vec<BigInt>> = coeffs.into_iter().map(|c| vec![c]).collect();
        assert!(!rows.is_empty(), "a series has order >= 0");
        Series(Graded::new(BigInt::one(), BigInt::one(), rows))
    }

    /// Coefficient `n` is `nums[n] / (den * base^n)`.
    pub fn from_graded(base: BigInt, den: BigInt, nums: Vec<BigInt>) -> Self {
        Series(Graded::new(base, den, nums.into_iter().map(|x| vec![x]).collect()))
    }

    pub fn constant(c: &BigRational, order: usize) -> Self {
        Series(Graded::constant(c, order))
    }

    /// The series `z` truncated at `order`.
    pub fn z(order: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); order + 1];
        if order >= 1 {
            coeffs[1] = BigInt::one();
        }
        Series::from_integers(coeffs)
    }

    pub fn order(&self) -> usize {
        self.0.order()
    }

    pub fn coeff(&self, n: usize) -> BigRational {
        self.0.coeff(n, 0)
    }

    pub fn coeffs(&self) -> Vec<BigRational> {
        (0..=self.order()).map(|n| self.coeff(n)).collect()
    }

    /// Coefficient as a float; safe for coefficients far outside the `f64`
    /// range of numerator and denominator.
    pub fn coeff_f64(&self, n: usize) -> f64 {
        self.0.coeff_f64(n, 0)
    }

    /// `ln |c_n|`, or `-inf` for a zero coefficient.
    pub fn ln_abs_coeff(&self, n: usize) -> f64 {
        match self.0.rows.get(n).and_then(|r| r.first()) {
            Some(x) if !x.is_zero() => {
                ln_abs_bigint(x) - ln_abs_bigint(&self.0.den) - n as f64 * ln_abs_bigint(&self.0.base)
            }
            _ => f64::NEG_INFINITY,
        }
    }

    pub fn coeffs_f64(&self) -> Vec<f64> {
        (0..=self.order()).map(|n| self.coeff_f64(n)).collect()
    }

    /// Evaluates the truncated polynomial at a real point.
    pub fn eval(&self, z: f64) -> f64 {
        self.coeffs_f64().iter().enumerate().map(|(n, c)| if *c == 0.0 { 0.0 } else { c * z.powi(n as i32) }).sum()
    }

    pub fn truncate(&self, order: usize) -> Self {
        Series(self.0.truncate(order.min(self.order())))
    }

    pub fn add(&self, other: &Series) -> Series {
        Series(self.0.add(&other.0))
    }

    pub fn sub(&self, other: &Series) -> Series {
        Series(self.0.add(&other.0.neg()))
    }

    pub fn mul(&self, other: &Series) -> Series {
        Series(self.0.mul(&other.0))
    }

    pub fn scale(&self, r: &BigRational) -> Series {
        Series(self.0.scale(r))
    }

    pub fn shift(&self, s: usize) -> Series {
        Series(self.0.shift_z(s))
    }

    /// `1/self`; fails with [`Error::NonInvertible`] when `c_0 = 0`.
    pub fn reciprocal(&self) -> Result<Series> {
        Ok(Series(self.0.reciprocal()?))
    }

    pub fn div(&self, other: &Series) -> Result<Series> {
        Ok(self.mul(&other.reciprocal()?))
    }

    /// `1/(1 - self)` for a series with zero constant term.
    pub fn sequence(&self) -> Result<Series> {
        Ok(Series(self.0.sequence()?))
    }

    /// `S(z u)` as a bivariate series.
    pub fn compose_zu(&self) -> BivariateSeries {
        let rows = self
            .0
            .rows
            .iter()
            .enumerate()
            .map(|(n, row)| match row.first() {
                Some(x) => {
                    let mut r = vec![BigInt::zero(); n + 1];
                    r[n] = x.clone();
                    r
                }
                None => Vec::new(),
            })
            .collect();
        BivariateSeries(Graded::new(self.0.base.clone(), self.0.den.clone(), rows))
    }

    pub fn to_bivariate(&self) -> BivariateSeries {
        BivariateSeries(self.0.clone())
    }

    pub fn to_json(&self) -> Value {
        let coeffs: Vec<String> = self.coeffs().iter().map(format_rational).collect();
        json!({ "N": self.order(), "coeffs": coeffs })
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs: Vec<String> = self.coeffs().iter().map(format_rational).collect();
        f.write_str(&coeffs.join(","))
    }
}

/// Truncated power series in `z` whose coefficients are polynomials in a
/// second variable (`u` or `v`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariateSeries(Graded);

impl BivariateSeries {
    pub fn order(&self) -> usize {
        self.0.order()
    }

    pub fn coeff(&self, n: usize, k: usize) -> BigRational {
        self.0.coeff(n, k)
    }

    pub fn coeff_f64(&self, n: usize, k: usize) -> f64 {
        self.0.coeff_f64(n, k)
    }

    /// Exact coefficients of `z^n`, trailing zeros trimmed.
    pub fn row(&self, n: usize) -> Vec<BigRational> {
        let len = self.0.rows.get(n).map_or(0, Vec::len);
        (0..len).map(|k| self.coeff(n, k)).collect()
    }

    pub fn row_f64(&self, n: usize) -> Vec<f64> {
        let len = self.0.rows.get(n).map_or(0, Vec::len);
        (0..len).map(|k| self.coeff_f64(n, k)).collect()
    }

    /// Row `n` divided by its sum, without leaving the `f64` range.
    pub fn row_distribution(&self, n: usize) -> Vec<f64> {
        let Some(row) = self.0.rows.get(n) else { return Vec::new() };
        let total: BigInt = row.iter().sum();
        if total.is_zero() {
            return vec![0.0; row.len()];
        }
        let ln_total = ln_abs_bigint(&total);
        row.iter()
            .map(|x| {
                if x.is_zero() {
                    0.0
                } else {
                    let sign = if x.is_negative() == total.is_negative() { 1.0 } else { -1.0 };
                    sign * (ln_abs_bigint(x) - ln_total).exp()
                }
            })
            .collect()
    }

    /// Coefficients of `u^k` as a series in `z`.
    pub fn slice(&self, k: usize) -> Series {
        let g = &self.0;
        let rows = g.rows.iter().map(|r| r.get(k).cloned().into_iter().collect()).collect();
        Series(Graded::new(g.base.clone(), g.den.clone(), rows))
    }

    /// Evaluation at `u = 1`.
    pub fn marginal(&self) -> Series {
        let g = &self.0;
        let rows = g.rows.iter().map(|r| vec![r.iter().fold(BigInt::zero(), |acc, x| acc + x)]).collect();
        Series(Graded::new(g.base.clone(), g.den.clone(), rows))
    }

    pub fn add(&self, other: &BivariateSeries) -> BivariateSeries {
        BivariateSeries(self.0.add(&other.0))
    }

    pub fn mul(&self, other: &BivariateSeries) -> BivariateSeries {
        BivariateSeries(self.0.mul(&other.0))
    }

    pub fn mul_series(&self, other: &Series) -> BivariateSeries {
        BivariateSeries(self.0.mul(&other.0))
    }

    pub fn scale(&self, r: &BigRational) -> BivariateSeries {
        BivariateSeries(self.0.scale(r))
    }

    /// Multiplies by `v`, the second variable.
    pub fn shift_u(&self, s: usize) -> BivariateSeries {
        let g = &self.0;
        let rows = g
            .rows
            .iter()
            .map(|r| {
                if r.is_empty() {
                    Vec::new()
                } else {
                    let mut out = vec![BigInt::zero(); s];
                    out.extend(r.iter().cloned());
                    out
                }
            })
            .collect();
        BivariateSeries(Graded { base: g.base.clone(), den: g.den.clone(), rows })
    }

    /// `1/(1 - self)`; the `z^0` row must vanish.
    pub fn sequence(&self) -> Result<BivariateSeries> {
        Ok(BivariateSeries(self.0.sequence()?))
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Vec<String>> =
            (0..=self.order()).map(|n| self.row(n).iter().map(format_rational).collect()).collect();
        json!({ "N": self.order(), "coeffs": rows })
    }
}

/// Weighted meanders by length and final altitude, with or without
/// catastrophes.
pub fn counting_table(js: &JumpSet, order: usize, with_catastrophes: bool) -> BivariateSeries {
    let (w, wq) = js.scaled_weights();
    let c = js.c() as i64;
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(order + 1);
    rows.push(vec![BigInt::one()]);
    for n in 0..order {
        let prev = &rows[n];
        let mut next = vec![BigInt::zero(); prev.len() + js.d()];
        for (h, x) in prev.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (idx, wj) in w.iter().enumerate() {
                if wj.is_zero() {
                    continue;
                }
                let k = h as i64 + idx as i64 - c;
                if k >= 0 {
                    next[k as usize] += x * wj;
                }
            }
        }
        if with_catastrophes {
            let mass = prev
                .iter()
                .enumerate()
                .filter(|(h, _)| js.permits_catastrophe_at(*h))
                .fold(BigInt::zero(), |acc, (_, x)| acc + x);
            next[0] += mass * &wq;
        }
        rows.push(next);
    }
    BivariateSeries(Graded::new(js.common_denominator(), BigInt::one(), rows))
}

/// Catastrophe-free excursions `E(z)`.
pub fn e_series(js: &JumpSet, order: usize) -> Series {
    counting_table(js, order, false).slice(0)
}

/// Catastrophe-free meanders `M(z) = M(z, 1)`.
pub fn m_series(js: &JumpSet, order: usize) -> Series {
    counting_table(js, order, false).marginal()
}

/// Excursions with catastrophes `F_0(z)`.
pub fn f0_series(js: &JumpSet, order: usize) -> Series {
    counting_table(js, order, true).slice(0)
}

/// Meanders with catastrophes `F(z, 1)`.
pub fn f_series(js: &JumpSet, order: usize) -> Series {
    counting_table(js, order, true).marginal()
}

/// `Q(z, u)`: excursions whose only catastrophe is their last step, with
/// `u` marking the size of that catastrophe.
pub fn q_bivariate(js: &JumpSet, order: usize) -> BivariateSeries {
    let table = counting_table(js, order, false);
    let g = &table.0;
    let rows = g
        .rows
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(h, x)| if js.permits_catastrophe_at(h) { x.clone() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let masked = BivariateSeries(Graded::new(g.base.clone(), g.den.clone(), rows));
    BivariateSeries(masked.0.shift_z(1)).scale(js.q())
}

pub fn q_series(js: &JumpSet, order: usize) -> Series {
    q_bivariate(js, order).marginal()
}

/// `D(z) = 1/(1 - Q(z))`.
pub fn d_series(js: &JumpSet, order: usize) -> Series {
    q_series(js, order).sequence().expect("Q(0) = 0")
}

/// Tracked statistic of a bivariate parameter series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Param {
    Catastrophes,
    Returns,
    Cumulative,
    AvgCat,
    Waiting,
}

impl Param {
    pub const ALL: [Param; 5] = [Param::Catastrophes, Param::Returns, Param::Cumulative, Param::AvgCat, Param::Waiting];

    pub fn name(self) -> &'static str {
        match self {
            Param::Catastrophes => "catastrophes",
            Param::Returns => "returns",
            Param::Cumulative => "cumulative",
            Param::AvgCat => "avg-cat",
            Param::Waiting => "waiting",
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().replace('_', "-").as_str() {
            "catastrophes" => Ok(Param::Catastrophes),
            "returns" => Ok(Param::Returns),
            "cumulative" => Ok(Param::Cumulative),
            "avg-cat" | "avg-catastrophe" => Ok(Param::AvgCat),
            "waiting" => Ok(Param::Waiting),
            _ => Err(Error::UnknownParam(s.to_string())),
        }
    }
}

/// Excursions with catastrophes, with the second variable marking the
/// requested statistic.
///
/// `AvgCat` is the exception: `[z^n u^k]` is the total weight of pairs
/// (excursion, catastrophe of size `k` in it), plus the catastrophe-free
/// excursions at `k = 0`.
pub fn parameter_series(js: &JumpSet, order: usize, param: Param) -> BivariateSeries {
    let e = e_series(js, order);
    let q = q_series(js, order);
    let seq = |b: &BivariateSeries| b.sequence().expect("vanishing z^0 row");
    match param {
        Param::Catastrophes => seq(&q.to_bivariate().shift_u(1)).mul_series(&e),
        Param::Returns => {
            let f0 = f0_series(js, order);
            let one = Series::constant(&BigRational::one(), order);
            let a = one.sub(&f0.reciprocal().expect("F0(0) = 1"));
            seq(&a.to_bivariate().shift_u(1))
        }
        Param::Cumulative => seq(&q_bivariate(js, order)).mul_series(&e),
        Param::AvgCat => {
            let d = q.sequence().expect("Q(0) = 0");
            let tail = d.mul(&d).mul(&e);
            e.to_bivariate().add(&q_bivariate(js, order).mul_series(&tail))
        }
        Param::Waiting => {
            let d = q.sequence().expect("Q(0) = 0");
            e.to_bivariate().add(&q.compose_zu().mul_series(&d.mul(&e)))
        }
    }
}

/// Arch generating functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arches {
    pub all: Series,
    pub cat: Series,
    pub nocat: Series,
}

pub fn arch_series(js: &JumpSet, order: usize) -> Arches {
    let one = Series::constant(&BigRational::one(), order);
    let all = one.sub(&f0_series(js, order).reciprocal().expect("F0(0) = 1"));
    let cat = q_series(js, order).div(&e_series(js, order)).expect("E(0) = 1");
    let nocat = all.sub(&cat);
    debug_assert!(nocat.coeffs().iter().all(|c| !c.is_negative()));
    Arches { all, cat, nocat }
}

/// `binom(n-2, floor((n-3)/2))` for `n >= 3`, else 0.
pub fn dyck_arch_closed_form(n: u64) -> BigInt {
    if n < 3 {
        return BigInt::zero();
    }
    binomial(n - 2, (n - 3) / 2)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `H(z) = 1/(1 - z^2/(1 - z - z^2 C(z)))` with `C(z) = 1/(1 - z^2 C(z))`,
/// the generating function of 1-horizontal Dyck paths.
pub fn continued_fraction_h(order: usize) -> Series {
    // C(z) has the Catalan numbers at even powers.
    let catalan = (0..=order).map(|n| {
        if n % 2 == 1 {
            BigInt::zero()
        } else {
            let m = (n / 2) as u64;
            binomial(2 * m, m) / BigInt::from(m + 1)
        }
    });
    let c = Series::from_integers(catalan);
    let inner = Series::z(order).add(&c.shift(2)).sequence().expect("no constant term");
    inner.shift(2).sequence().expect("no constant term")
}
