//! Exhaustive enumeration of short paths; the ground truth every other
//! module is checked against.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{format_rational, validate_path, CatastrophePolicy, JumpSet, ParamVector, Path, Step};
use crate::series::{counting_table, parameter_series, Param};

/// Largest length the enumerator accepts unless told otherwise.
pub const DEFAULT_BOUND: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Endpoint {
    Excursion,
    Meander,
}

/// Legal steps from altitude `h`, in a fixed order: jumps ascending, then
/// the catastrophe.
fn choices(js: &JumpSet, h: usize) -> Vec<Step> {
    let mut out: Vec<Step> = js.support().into_iter().filter(|j| h as i64 + j >= 0).map(Step::Jump).collect();
    if js.permits_catastrophe_at(h) {
        out.push(Step::Catastrophe(h));
    }
    out
}

fn land(h: usize, step: Step) -> usize {
    match step {
        Step::Jump(j) => (h as i64 + j) as usize,
        Step::Catastrophe(_) => 0,
    }
}

/// Every legal path of length `n` with the given endpoint, exactly once.
pub fn enumerate(js: &JumpSet, n: usize, endpoint: Endpoint) -> Result<Vec<Path>> {
    enumerate_bounded(js, n, endpoint, DEFAULT_BOUND)
}

pub fn enumerate_bounded(js: &JumpSet, n: usize, endpoint: Endpoint, bound: usize) -> Result<Vec<Path>> {
    if n > bound {
        return Err(Error::BoundExceeded { n, bound });
    }
    fn go(js: &JumpSet, n: usize, h: usize, steps: &mut Vec<Step>, endpoint: Endpoint, out: &mut Vec<Path>) {
        if steps.len() == n {
            if endpoint == Endpoint::Meander || h == 0 {
                out.push(validate_path(js, steps).expect("enumerated paths are legal"));
            }
            return;
        }
        for step in choices(js, h) {
            steps.push(step);
            go(js, n, land(h, step), steps, endpoint, out);
            steps.pop();
        }
    }
    let mut out = Vec::new();
    go(js, n, 0, &mut Vec::with_capacity(n), endpoint, &mut out);
    Ok(out)
}

/// Weighted statistics of all paths of one length and endpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleTally {
    pub n: usize,
    pub endpoint: Endpoint,
    pub by_params: BTreeMap<ParamVector, BigRational>,
    /// Total weight of (path, catastrophe of size `k` in it) pairs.
    pub cat_sizes: BTreeMap<usize, BigRational>,
    pub total: BigRational,
    pub count: u64,
}

impl OracleTally {
    /// Weighted histogram of one derived statistic.
    pub fn histogram<F: Fn(&ParamVector) -> usize>(&self, key: F) -> Vec<BigRational> {
        let mut out: Vec<BigRational> = Vec::new();
        for (pv, w) in &self.by_params {
            let k = key(pv);
            if out.len() <= k {
                out.resize(k + 1, BigRational::zero());
            }
            out[k] += w;
        }
        while out.last().is_some_and(Zero::is_zero) {
            out.pop();
        }
        out
    }

    /// The coefficient row `[z^n]` of `parameter_series` this tally predicts
    /// (meaningful for excursion tallies).
    pub fn param_row(&self, param: Param) -> Vec<BigRational> {
        match param {
            Param::Catastrophes => self.histogram(|p| p.n_catastrophes),
            Param::Returns => self.histogram(|p| p.n_returns_to_zero),
            Param::Cumulative => self.histogram(|p| p.cumulative_cat_size),
            Param::Waiting => self.histogram(|p| p.waiting_time_first_cat),
            Param::AvgCat => {
                let len = self.cat_sizes.keys().next_back().map_or(1, |k| k + 1);
                let mut out = vec![BigRational::zero(); len];
                for (k, w) in &self.cat_sizes {
                    out[*k] += w;
                }
                for (pv, w) in &self.by_params {
                    if pv.n_catastrophes == 0 {
                        out[0] += w;
                    }
                }
                while out.last().is_some_and(Zero::is_zero) {
                    out.pop();
                }
                out
            }
        }
    }
}

#[derive(Default)]
struct Acc {
    by_params: BTreeMap<ParamVector, u128>,
    cat_sizes: BTreeMap<usize, u128>,
    total: u128,
    count: u64,
}

impl Acc {
    fn finish(self, n: usize, endpoint: Endpoint, scale: &BigInt) -> OracleTally {
        let r = |x: u128| BigRational::new(BigInt::from(x), scale.clone());
        OracleTally {
            n,
            endpoint,
            by_params: self.by_params.into_iter().map(|(k, w)| (k, r(w))).collect(),
            cat_sizes: self.cat_sizes.into_iter().map(|(k, w)| (k, r(w))).collect(),
            total: r(self.total),
            count: self.count,
        }
    }
}

struct Walker<'a> {
    js: &'a JumpSet,
    max_n: usize,
    /// Integer weights `p_j * L` and `q * L`.
    w: BTreeMap<i64, u128>,
    wq: u128,
    sizes: Vec<usize>,
    exc: Vec<Acc>,
    mea: Vec<Acc>,
    overflow: bool,
}

impl Walker<'_> {
    fn record(&mut self, len: usize, h: usize, pv: ParamVector, weight: u128) {
        fn add(acc: &mut Acc, sizes: &[usize], pv: ParamVector, weight: u128) {
            *acc.by_params.entry(pv).or_insert(0) += weight;
            for s in sizes {
                *acc.cat_sizes.entry(*s).or_insert(0) += weight;
            }
            acc.total += weight;
            acc.count += 1;
        }
        if h == 0 {
            add(&mut self.exc[len], &self.sizes, pv, weight);
        }
        add(&mut self.mea[len], &self.sizes, pv, weight);
    }

    fn go(&mut self, len: usize, h: usize, pv: ParamVector, weight: u128) {
        let mut pv = pv;
        pv.final_altitude = h;
        self.record(len, h, pv, weight);
        if len == self.max_n {
            return;
        }
        for step in choices(self.js, h) {
            let factor = match step {
                Step::Jump(j) => self.w[&j],
                Step::Catastrophe(_) => self.wq,
            };
            let Some(next_weight) = weight.checked_mul(factor) else {
                self.overflow = true;
                return;
            };
            let next_h = land(h, step);
            let mut next = pv;
            if next_h == 0 {
                next.n_returns_to_zero += 1;
            }
            if let Step::Catastrophe(size) = step {
                if next.n_catastrophes == 0 {
                    next.waiting_time_first_cat = len + 1;
                    next.first_cat_size = size;
                }
                next.n_catastrophes += 1;
                next.cumulative_cat_size += size;
                self.sizes.push(size);
            }
            self.go(len + 1, next_h, next, next_weight);
            if matches!(step, Step::Catastrophe(_)) {
                self.sizes.pop();
            }
        }
    }
}

/// Excursion and meander tallies for every length `0..=max_n`, from a
/// single depth-first walk.
pub fn tallies_up_to(js: &JumpSet, max_n: usize) -> Result<Vec<(OracleTally, OracleTally)>> {
    if max_n > DEFAULT_BOUND {
        return Err(Error::BoundExceeded { n: max_n, bound: DEFAULT_BOUND });
    }
    let (scaled, wq) = js.scaled_weights();
    let to_u128 =
        |x: &BigInt| x.to_u128().ok_or_else(|| Error::InvalidArgument("weights too large for the oracle".into()));
    let mut w = BTreeMap::new();
    for j in js.support() {
        w.insert(j, to_u128(&scaled[(j + js.c() as i64) as usize])?);
    }
    let mut walker = Walker {
        js,
        max_n,
        w,
        wq: to_u128(&wq)?,
        sizes: Vec::new(),
        exc: (0..=max_n).map(|_| Acc::default()).collect(),
        mea: (0..=max_n).map(|_| Acc::default()).collect(),
        overflow: false,
    };
    walker.go(0, 0, ParamVector::default(), 1);
    if walker.overflow {
        return Err(Error::InvalidArgument("weights too large for the oracle".into()));
    }
    let base = js.common_denominator();
    let exc = std::mem::take(&mut walker.exc);
    let mea = std::mem::take(&mut walker.mea);
    Ok(exc
        .into_iter()
        .zip(mea)
        .enumerate()
        .map(|(n, (e, m))| {
            let scale = base.pow(n as u32);
            (e.finish(n, Endpoint::Excursion, &scale), m.finish(n, Endpoint::Meander, &scale))
        })
        .collect())
}

pub fn oracle_tally(js: &JumpSet, n: usize, endpoint: Endpoint) -> Result<OracleTally> {
    let mut all = tallies_up_to(js, n)?;
    let (e, m) = all.pop().expect("n + 1 tallies");
    Ok(match endpoint {
        Endpoint::Excursion => e,
        Endpoint::Meander => m,
    })
}

/// First disagreement between a series coefficient and the oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub jumps: String,
    pub policy: String,
    pub series: String,
    pub n: usize,
    pub k: usize,
    pub expected: String,
    pub got: String,
}

/// The jump sets of the equivalence battery: four supports, unit and
/// rational weights, three policies each.
pub fn battery_jump_sets() -> Vec<JumpSet> {
    let shapes = [
        ("-1:1,1:1,q=1", "-1:1/2,1:1/3,q=1/5"),
        ("-1:1,0:1,1:1,q=1", "-1:1/3,0:1/4,1:1/2,q=2/3"),
        ("-2:1,1:1,q=1", "-2:1/2,1:3/2,q=1/3"),
        ("-1:1,2:1,q=1", "-1:2/3,2:1/4,q=3/2"),
    ];
    let policies = [
        CatastrophePolicy::Default,
        CatastrophePolicy::FromAnywhere,
        CatastrophePolicy::ExcludedAltitudes([0, 2].into()),
    ];
    let mut out = Vec::new();
    for (unit, weighted) in shapes {
        for text in [unit, weighted] {
            let js: JumpSet = text.parse().expect("static jump set");
            for p in &policies {
                out.push(js.with_policy(p.clone()).expect("valid policy"));
            }
        }
    }
    out
}

fn compare(
    js: &JumpSet,
    name: &str,
    n: usize,
    expected: &[BigRational],
    got: &[BigRational],
) -> std::result::Result<usize, Mismatch> {
    let len = expected.len().max(got.len());
    let zero = BigRational::zero();
    for k in 0..len {
        let e = expected.get(k).unwrap_or(&zero);
        let g = got.get(k).unwrap_or(&zero);
        if e != g {
            return Err(Mismatch {
                jumps: js.to_string(),
                policy: js.policy().to_string(),
                series: name.to_string(),
                n,
                k,
                expected: format_rational(e),
                got: format_rational(g),
            });
        }
    }
    Ok(len)
}

/// Compares `F_0`, `F(z,u)` (hence `F(z,1)`) and the five parameter series
/// of one jump set against the oracle for all lengths up to `max_n`;
/// returns the number of coefficients checked.
pub fn check_jump_set(js: &JumpSet, max_n: usize) -> std::result::Result<usize, Mismatch> {
    let tallies = tallies_up_to(js, max_n).map_err(|e| Mismatch {
        jumps: js.to_string(),
        policy: js.policy().to_string(),
        series: "oracle".into(),
        n: max_n,
        k: 0,
        expected: String::new(),
        got: e.to_string(),
    })?;
    let table = counting_table(js, max_n, true);
    let marginal = table.marginal();
    let params: Vec<(Param, _)> = Param::ALL.iter().map(|p| (*p, parameter_series(js, max_n, *p))).collect();
    let mut checked = 0;
    for (n, (exc, mea)) in tallies.iter().enumerate() {
        checked += compare(js, "F0", n, std::slice::from_ref(&exc.total), &[table.coeff(n, 0)])?;
        checked += compare(js, "F(z,1)", n, std::slice::from_ref(&mea.total), &[marginal.coeff(n)])?;
        checked += compare(js, "F(z,u)", n, &mea.histogram(|p| p.final_altitude), &table.row(n))?;
        for (p, series) in &params {
            checked += compare(js, p.name(), n, &exc.param_row(*p), &series.row(n))?;
        }
    }
    Ok(checked)
}

#[derive(Debug, Clone, Serialize)]
pub struct BatteryReport {
    pub jump_sets: usize,
    pub max_n: usize,
    pub coefficients: usize,
}

pub fn run_battery(max_n: usize) -> std::result::Result<BatteryReport, Mismatch> {
    let sets = battery_jump_sets();
    let mut coefficients = 0;
    for js in &sets {
        coefficients += check_jump_set(js, max_n)?;
    }
    Ok(BatteryReport { jump_sets: sets.len(), max_n, coefficients })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{parse_steps, path_statistics};
    use num_traits::One;

    #[test]
    fn dyck_enumeration_counts() {
        let js = JumpSet::dyck();
        let two = enumerate(&js, 2, Endpoint::Excursion).unwrap();
        assert_eq!(two.len(), 1);
        assert_eq!(two[0].steps(), parse_steps("1 -1").unwrap().as_slice());
        assert_eq!(enumerate(&js, 4, Endpoint::Excursion).unwrap().len(), 3);
        assert_eq!(enumerate(&js, 5, Endpoint::Meander).unwrap().len(), 17);
        assert_eq!(enumerate(&js, 17, Endpoint::Meander), Err(Error::BoundExceeded { n: 17, bound: 16 }));
    }

    #[test]
    fn length_three_excursion_is_the_catastrophe_path() {
        let js = JumpSet::dyck();
        let paths = enumerate(&js, 3, Endpoint::Excursion).unwrap();
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].steps(), parse_steps("1 1 C2").unwrap().as_slice());
        let t = oracle_tally(&js, 3, Endpoint::Excursion).unwrap();
        let (pv, w) = t.by_params.iter().next().unwrap();
        assert_eq!(w, &BigRational::one());
        assert_eq!((pv.n_catastrophes, pv.cumulative_cat_size, pv.waiting_time_first_cat), (1, 2, 3));
    }

    #[test]
    fn returns_histogram_at_four() {
        let t = oracle_tally(&JumpSet::dyck(), 4, Endpoint::Excursion).unwrap();
        let h = t.histogram(|p| p.n_returns_to_zero);
        assert_eq!(h, vec![BigRational::zero(), BigRational::from_integer(2.into()), BigRational::one()]);
    }

    #[test]
    fn weighted_totals_match_series() {
        let js: JumpSet = "-1:1/2,1:1/3,q=1/5".parse().unwrap();
        let t = oracle_tally(&js, 3, Endpoint::Excursion).unwrap();
        // The only length-3 excursion is `1 1 C2`.
        assert_eq!(t.total, BigRational::new(1.into(), 45.into()));
        assert_eq!(t.total, crate::series::f0_series(&js, 3).coeff(3));
    }

    #[test]
    fn tallies_agree_with_path_statistics() {
        for js in battery_jump_sets().iter().step_by(5) {
            for n in 0..=8 {
                let paths = enumerate(js, n, Endpoint::Meander).unwrap();
                let mut by_params: BTreeMap<ParamVector, BigRational> = BTreeMap::new();
                for p in &paths {
                    *by_params.entry(path_statistics(p)).or_insert_with(BigRational::zero) += p.weight();
                }
                let t = oracle_tally(js, n, Endpoint::Meander).unwrap();
                assert_eq!(t.by_params, by_params, "{js} n={n}");
                assert_eq!(t.count as usize, paths.len());
            }
        }
    }

    #[test]
    fn battery_passes_to_moderate_length() {
        let report = run_battery(8).unwrap();
        assert_eq!(report.jump_sets, 24);
        assert!(report.coefficients > 1000);
    }

    #[test]
    fn mismatches_are_reported() {
        let js = JumpSet::dyck();
        let one = [BigRational::one()];
        let two = [BigRational::from_integer(2.into())];
        let err = compare(&js, "F0", 4, &one, &two).unwrap_err();
        assert_eq!((err.n, err.k, err.expected.as_str(), err.got.as_str()), (4, 0, "1", "2"));
    }

    #[test]
    fn aperiodic_sets_have_eventually_positive_excursions() {
        for js in battery_jump_sets().iter().filter(|js| js.period() == 1) {
            let e = crate::series::e_series(js, 40);
            assert!((20..=40).all(|n| e.coeff(n) > BigRational::zero()), "{js}");
        }
    }
}
