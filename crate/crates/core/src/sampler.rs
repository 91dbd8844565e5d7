//! Exact weighted random generation of paths of a fixed length from suffix
//! tables, one step at a time.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits::LawParam;
use crate::model::{path_statistics, validate_path, JumpSet, Path, Step};

/// The generator behind every seeded run.
pub const RNG_NAME: &str = "ChaCha8Rng (rand_chacha 0.3) seeded with seed_from_u64";

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Excursion,
    /// Any final altitude.
    Meander,
    /// Meanders conditioned to end at the given altitude.
    EndingAt(usize),
}

/// `table[m][k]` is the total weight of legal suffixes of length `m` from
/// altitude `k`, times `base^m`, so every entry is an integer.
#[derive(Debug, Clone)]
pub struct SamplerTables {
    js: JumpSet,
    n: usize,
    kind: Kind,
    base: BigInt,
    /// `(j, p_j * base)` for the jumps in the support.
    jumps: Vec<(i64, BigUint)>,
    q: BigUint,
    table: Vec<Vec<BigUint>>,
}

fn to_unsigned(x: &BigInt) -> BigUint {
    x.to_biguint().expect("weights are non-negative")
}

pub fn build_sampler(js: &JumpSet, n: usize, kind: Kind) -> SamplerTables {
    let (scaled, q) = js.scaled_weights();
    let c = js.c() as i64;
    let jumps: Vec<(i64, BigUint)> =
        scaled.iter().enumerate().filter(|(_, w)| !w.is_zero()).map(|(i, w)| (i as i64 - c, to_unsigned(w))).collect();
    let q = to_unsigned(&q);
    let d = js.d();
    // With m steps left the walk has made n - m steps, so its altitude is
    // at most (n - m) d.
    let reach = |m: usize| (n - m) * d;
    let mut table: Vec<Vec<BigUint>> = Vec::with_capacity(n + 1);
    table.push(
        (0..=reach(0))
            .map(|k| {
                let ok = match kind {
                    Kind::Excursion => k == 0,
                    Kind::Meander => true,
                    Kind::EndingAt(i) => k == i,
                };
                if ok {
                    BigUint::from(1u32)
                } else {
                    BigUint::zero()
                }
            })
            .collect(),
    );
    for m in 1..=n {
        let prev = &table[m - 1];
        let row: Vec<BigUint> = (0..=reach(m))
            .map(|k| {
                let mut acc = BigUint::zero();
                for (j, w) in &jumps {
                    let target = k as i64 + j;
                    if target >= 0 {
                        if let Some(t) = prev.get(target as usize) {
                            acc += w * t;
                        }
                    }
                }
                if js.permits_catastrophe_at(k) {
                    acc += &q * &prev[0];
                }
                acc
            })
            .collect();
        table.push(row);
    }
    SamplerTables { js: js.clone(), n, kind, base: js.common_denominator(), jumps, q, table }
}

/// Uniform integer in `[0, bound)` by rejection on whole 64-bit words.
fn uniform_below<R: RngCore>(rng: &mut R, bound: &BigUint) -> BigUint {
    let bits = bound.bits();
    let words = bits.div_ceil(64) as usize;
    let excess = words as u64 * 64 - bits;
    loop {
        let mut digits: Vec<u64> = (0..words).map(|_| rng.next_u64()).collect();
        if let Some(top) = digits.last_mut() {
            *top >>= excess;
        }
        let mut x = BigUint::zero();
        for d in digits.iter().rev() {
            x <<= 64;
            x += *d;
        }
        if &x < bound {
            return x;
        }
    }
}

impl SamplerTables {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn jump_set(&self) -> &JumpSet {
        &self.js
    }

    /// Scaled entry `T[m][k] base^m`; zero outside the table.
    pub fn entry(&self, m: usize, k: usize) -> BigUint {
        self.table.get(m).and_then(|r| r.get(k)).cloned().unwrap_or_default()
    }

    /// Total weight of the paths being sampled.
    pub fn total(&self) -> BigRational {
        BigRational::new(BigInt::from(self.entry(self.n, 0)), self.base.pow(self.n as u32))
    }

    /// Scaled weight of taking `step` from altitude `k` with `m` steps left.
    fn move_weight(&self, m: usize, k: usize, step: Step) -> BigUint {
        match step {
            Step::Jump(j) => {
                let target = k as i64 + j;
                match self.jumps.iter().find(|(jj, _)| *jj == j) {
                    Some((_, w)) if target >= 0 => w * self.entry(m - 1, target as usize),
                    _ => BigUint::zero(),
                }
            }
            Step::Catastrophe(h) if h == k && self.js.permits_catastrophe_at(k) => &self.q * self.entry(m - 1, 0),
            Step::Catastrophe(_) => BigUint::zero(),
        }
    }

    fn moves(&self, k: usize) -> impl Iterator<Item = Step> + '_ {
        self.jumps.iter().map(|(j, _)| Step::Jump(*j)).chain(std::iter::once(Step::Catastrophe(k)))
    }

    /// Exact probability of `step` from altitude `k` with `m` steps left.
    pub fn transition_probability(&self, m: usize, k: usize, step: Step) -> BigRational {
        let total = self.entry(m, k);
        if total.is_zero() {
            return BigRational::zero();
        }
        BigRational::new(self.move_weight(m, k, step).into(), total.into())
    }

    /// Product of the transition probabilities along `p`.
    pub fn path_probability(&self, p: &Path) -> BigRational {
        let mut prob = BigRational::from_integer(1.into());
        for (i, step) in p.steps().iter().enumerate() {
            prob *= self.transition_probability(self.n - i, p.altitudes()[i], *step);
        }
        prob
    }

    pub fn sample<R: RngCore>(&self, rng: &mut R) -> Result<Path> {
        if self.entry(self.n, 0).is_zero() {
            return Err(Error::EmptySupport);
        }
        let mut steps = Vec::with_capacity(self.n);
        let mut k = 0usize;
        for m in (1..=self.n).rev() {
            let mut r = uniform_below(rng, &self.entry(m, k));
            let step = self
                .moves(k)
                .find(|s| {
                    let w = self.move_weight(m, k, *s);
                    if r < w {
                        true
                    } else {
                        r -= w;
                        false
                    }
                })
                .expect("row total is the sum of its moves");
            k = match step {
                Step::Jump(j) => (k as i64 + j) as usize,
                Step::Catastrophe(_) => 0,
            };
            steps.push(step);
        }
        validate_path(&self.js, &steps)
    }
}

/// Histogram of a parameter over sampled paths.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalLaw {
    pub param: LawParam,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub rng: &'static str,
    /// Number of observations; `avg-cat` records every catastrophe of a
    /// path, or a single 0 for a path without one.
    pub observations: u64,
    pub histogram: BTreeMap<usize, u64>,
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
}

impl EmpiricalLaw {
    pub fn pmf(&self, kmax: usize) -> Vec<f64> {
        (0..=kmax).map(|k| *self.histogram.get(&k).unwrap_or(&0) as f64 / self.observations as f64).collect()
    }
}

/// Values of `param` read off one path.
pub fn observe(param: LawParam, p: &Path) -> Vec<usize> {
    let s = path_statistics(p);
    match param {
        LawParam::Catastrophes => vec![s.n_catastrophes],
        LawParam::Returns => vec![s.n_returns_to_zero],
        LawParam::FinalAltitude => vec![s.final_altitude],
        LawParam::Cumulative => vec![s.cumulative_cat_size],
        LawParam::Waiting => vec![s.waiting_time_first_cat],
        LawParam::AvgCat => {
            let sizes = p.catastrophe_sizes();
            if sizes.is_empty() {
                vec![0]
            } else {
                sizes
            }
        }
    }
}

/// Kind of path a parameter is measured on.
pub fn kind_for(param: LawParam) -> Kind {
    match param {
        LawParam::FinalAltitude => Kind::Meander,
        _ => Kind::Excursion,
    }
}

pub fn empirical_law(js: &JumpSet, n: usize, trials: usize, param: LawParam, seed: u64) -> Result<EmpiricalLaw> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let tables = build_sampler(js, n, kind_for(param));
    let mut rng = rng(seed);
    let mut histogram = BTreeMap::new();
    let (mut count, mut sum, mut sum_sq) = (0u64, 0.0, 0.0);
    for _ in 0..trials {
        for x in observe(param, &tables.sample(&mut rng)?) {
            *histogram.entry(x).or_insert(0u64) += 1;
            count += 1;
            sum += x as f64;
            sum_sq += (x * x) as f64;
        }
    }
    let mean = sum / count as f64;
    let variance = if count > 1 { (sum_sq - count as f64 * mean * mean) / (count - 1) as f64 } else { 0.0 };
    Ok(EmpiricalLaw {
        param,
        n,
        trials,
        seed,
        rng: RNG_NAME,
        observations: count,
        histogram,
        mean,
        variance,
        std_error: (variance / count as f64).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brute::{enumerate, Endpoint};
    use crate::model::format_steps;
    use num_traits::ToPrimitive;

    #[test]
    fn table_totals() {
        let dyck = JumpSet::dyck();
        assert_eq!(build_sampler(&dyck, 4, Kind::Excursion).entry(4, 0), BigUint::from(3u32));
        assert_eq!(build_sampler(&dyck, 5, Kind::Meander).entry(5, 0), BigUint::from(17u32));
        assert_eq!(build_sampler(&dyck, 0, Kind::Excursion).entry(0, 0), BigUint::from(1u32));
    }

    #[test]
    fn unique_path_of_length_two() {
        let t = build_sampler(&JumpSet::dyck(), 2, Kind::Excursion);
        let mut r = rng(7);
        for _ in 0..20 {
            assert_eq!(format_steps(t.sample(&mut r).unwrap().steps()), "1 -1");
        }
    }

    #[test]
    fn induced_law_is_exact() {
        let sets = ["-1:1,1:1,q=1", "-1:1,1:2,q=1", "-2:1/2,1:1,q=1/3", "-1:1,0:1,1:1,q=2,policy=anywhere"];
        for text in sets {
            let js: JumpSet = text.parse().unwrap();
            for kind in [Kind::Excursion, Kind::Meander] {
                let endpoint = if kind == Kind::Excursion { Endpoint::Excursion } else { Endpoint::Meander };
                for n in [1, 4, 7] {
                    let t = build_sampler(&js, n, kind);
                    let total = t.total();
                    for p in enumerate(&js, n, endpoint).unwrap() {
                        assert_eq!(t.path_probability(&p), p.weight() / &total, "{text} {p:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn seeded_runs_repeat() {
        let t = build_sampler(&JumpSet::dyck(), 40, Kind::Meander);
        let draw = |seed| {
            let mut r = rng(seed);
            (0..5).map(|_| format_steps(t.sample(&mut r).unwrap().steps())).collect::<Vec<_>>()
        };
        assert_eq!(draw(3), draw(3));
        assert_ne!(draw(3), draw(4));
    }

    #[test]
    fn uniform_below_is_in_range_and_uses_every_value() {
        let mut r = rng(1);
        let bound = BigUint::from(5u32);
        let mut seen = [0u32; 5];
        for _ in 0..500 {
            let x = uniform_below(&mut r, &bound).to_usize().unwrap();
            seen[x] += 1;
        }
        assert!(seen.iter().all(|c| *c > 60));
    }
}
