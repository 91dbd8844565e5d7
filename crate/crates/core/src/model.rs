//! Jump sets, catastrophe policies, paths and per-path statistics.
//!
//! A [`JumpSet`] is the single input object of the library: the weighted
//! jump polynomial `P(u) = sum_j p_j u^j` over `j in -c..=d`, the
//! catastrophe weight `q`, and the policy deciding from which altitudes a
//! catastrophe (a direct reset to altitude 0) may start.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parses `7`, `-3/4` or `0.125` into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    let bad = || Error::Parse(format!("not a rational number: `{s}`"));
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.trim_start().starts_with('-');
        let int_part: BigInt = match int.trim() {
            "" | "-" | "+" => BigInt::zero(),
            t => t.parse().map_err(|_| bad())?,
        };
        if frac.is_empty() || !frac.chars().all(|ch| ch.is_ascii_digit()) {
            return Err(bad());
        }
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part: BigInt = frac.parse().map_err(|_| bad())?;
        let magnitude = int_part.abs() * &scale + frac_part;
        let num = if negative { -magnitude } else { magnitude };
        return Ok(BigRational::new(num, scale));
    }
    let num: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(num))
}

/// Canonical text form of a rational: `a` or `a/b`.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// From which altitudes a catastrophe may start.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CatastrophePolicy {
    /// Catastrophes from every altitude `h > 0` that no negative jump can
    /// bring back to 0, i.e. altitudes `{0} ∪ {|j| : j < 0, p_j > 0}` are
    /// excluded.
    Default,
    /// Catastrophes from every altitude, including a size-0 reset at 0.
    FromAnywhere,
    /// Catastrophes from every altitude except the listed ones.
    ExcludedAltitudes(BTreeSet<usize>),
}

impl fmt::Display for CatastrophePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatastrophePolicy::Default => write!(f, "default"),
            CatastrophePolicy::FromAnywhere => write!(f, "anywhere"),
            CatastrophePolicy::ExcludedAltitudes(set) => {
                let items: Vec<String> = set.iter().map(|h| h.to_string()).collect();
                write!(f, "exclude={}", items.join(";"))
            }
        }
    }
}

impl FromStr for CatastrophePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "default" => return Ok(CatastrophePolicy::Default),
            "anywhere" => return Ok(CatastrophePolicy::FromAnywhere),
            _ => {}
        }
        let list = s.strip_prefix("exclude=").ok_or_else(|| Error::Parse(format!("unknown policy `{s}`")))?;
        let mut set = BTreeSet::new();
        for item in list.split([';', ',']).map(str::trim).filter(|t| !t.is_empty()) {
            let h: usize = item.parse().map_err(|_| Error::Parse(format!("bad altitude `{item}` in policy")))?;
            set.insert(h);
        }
        Ok(CatastrophePolicy::ExcludedAltitudes(set))
    }
}

/// A finite weighted jump set with catastrophes.
///
/// Immutable after construction; `c` and `d` are tight, weights and `q`
/// are exact rationals, and the policy's excluded altitudes are resolved
/// once here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JumpSet {
    c: usize,
    d: usize,
    /// `weights[j + c]` is `p_j`.
    weights: Vec<BigRational>,
    q: BigRational,
    policy: CatastrophePolicy,
    /// Altitudes from which no catastrophe may start.
    excluded: BTreeSet<usize>,
}

impl JumpSet {
    pub fn new(weights: &BTreeMap<i64, BigRational>, q: BigRational, policy: CatastrophePolicy) -> Result<Self> {
        if let Some((j, _)) = weights.iter().find(|(_, w)| w.is_negative()) {
            return Err(Error::InvalidJumpSet(format!("negative weight for jump {j}")));
        }
        if !q.is_positive() {
            return Err(Error::InvalidJumpSet("catastrophe weight q must be positive".into()));
        }
        let support: Vec<i64> = weights.iter().filter(|(_, w)| w.is_positive()).map(|(j, _)| *j).collect();
        let (lo, hi) = match (support.first(), support.last()) {
            (Some(lo), Some(hi)) => (*lo, *hi),
            _ => return Err(Error::EmptySupport),
        };
        if lo >= 0 || hi <= 0 {
            return Err(Error::InvalidJumpSet("need at least one negative and one positive jump".into()));
        }
        let c = (-lo) as usize;
        let d = hi as usize;
        let mut dense = vec![BigRational::zero(); c + d + 1];
        for (j, w) in weights {
            if *j >= lo && *j <= hi {
                dense[(*j - lo) as usize] = w.clone();
            }
        }
        let excluded = match &policy {
            CatastrophePolicy::Default => {
                let mut set: BTreeSet<usize> = BTreeSet::from([0]);
                set.extend(support.iter().filter(|j| **j < 0).map(|j| (-*j) as usize));
                set
            }
            CatastrophePolicy::FromAnywhere => BTreeSet::new(),
            CatastrophePolicy::ExcludedAltitudes(set) => set.clone(),
        };
        Ok(JumpSet { c, d, weights: dense, q, policy, excluded })
    }

    /// Unit-weight Dyck steps `{-1, +1}` with `q = 1` and the default policy.
    pub fn dyck() -> Self {
        "-1:1,1:1,q=1".parse().expect("static jump set")
    }

    pub fn with_q(&self, q: BigRational) -> Result<Self> {
        Self::new(&self.weight_map(), q, self.policy.clone())
    }

    pub fn with_policy(&self, policy: CatastrophePolicy) -> Result<Self> {
        Self::new(&self.weight_map(), self.q.clone(), policy)
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn q(&self) -> &BigRational {
        &self.q
    }

    pub fn policy(&self) -> &CatastrophePolicy {
        &self.policy
    }

    /// `p_j`, zero outside `-c..=d`.
    pub fn weight(&self, j: i64) -> BigRational {
        let idx = j + self.c as i64;
        if idx < 0 || idx as usize >= self.weights.len() {
            BigRational::zero()
        } else {
            self.weights[idx as usize].clone()
        }
    }

    /// Jumps with positive weight, ascending.
    pub fn support(&self) -> Vec<i64> {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| w.is_positive())
            .map(|(i, _)| i as i64 - self.c as i64)
            .collect()
    }

    pub fn weight_map(&self) -> BTreeMap<i64, BigRational> {
        self.support().into_iter().map(|j| (j, self.weight(j))).collect()
    }

    /// Excluded catastrophe source altitudes (empty for `FromAnywhere`).
    pub fn excluded_altitudes(&self) -> &BTreeSet<usize> {
        &self.excluded
    }

    /// Whether a catastrophe may start at altitude `h`.
    pub fn permits_catastrophe_at(&self, h: usize) -> bool {
        !self.excluded.contains(&h)
    }

    /// Drift `P'(1) = sum_j j p_j`, exact.
    pub fn drift(&self) -> BigRational {
        self.support()
            .into_iter()
            .map(|j| self.weight(j) * BigRational::from_integer(j.into()))
            .fold(BigRational::zero(), |acc, x| acc + x)
    }

    /// `P(1) = sum_j p_j`, exact.
    pub fn total_weight(&self) -> BigRational {
        self.weights.iter().fold(BigRational::zero(), |acc, w| acc + w)
    }

    /// Weights as floats, indexed by `j + c`.
    pub fn weights_f64(&self) -> Vec<f64> {
        self.weights.iter().map(rational_to_f64).collect()
    }

    pub fn q_f64(&self) -> f64 {
        rational_to_f64(&self.q)
    }

    /// Least common multiple of the denominators of all `p_j` and `q`.
    ///
    /// Every coefficient of `z^n` in every generating function of this jump
    /// set has a denominator dividing `base^n`.
    pub fn common_denominator(&self) -> BigInt {
        self.weights.iter().chain(std::iter::once(&self.q)).fold(BigInt::one(), |acc, w| acc.lcm(w.denom()))
    }

    /// `p_j * base` for `j in -c..=d` (integers) and `q * base`.
    pub fn scaled_weights(&self) -> (Vec<BigInt>, BigInt) {
        let base = BigRational::from_integer(self.common_denominator());
        let scaled = self.weights.iter().map(|w| (w * &base).to_integer()).collect();
        (scaled, (&self.q * &base).to_integer())
    }

    /// Period of the support: the gcd of all pairwise differences.
    pub fn period(&self) -> u64 {
        detect_period(&self.support()).expect("validated jump sets have a support")
    }
}

/// The largest `p` such that all differences of the support are multiples
/// of `p`; `p = 1` means aperiodic.
pub fn detect_period(support: &[i64]) -> Result<u64> {
    let first = *support.first().ok_or(Error::EmptySupport)?;
    let g = support.iter().fold(0u64, |g, j| g.gcd(&((j - first).unsigned_abs())));
    Ok(g.max(1))
}

impl fmt::Display for JumpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.support().into_iter().map(|j| format!("{}:{}", j, format_rational(&self.weight(j)))).collect();
        write!(f, "{},q={}", parts.join(","), format_rational(&self.q))?;
        if self.policy != CatastrophePolicy::Default {
            write!(f, ",policy={}", self.policy)?;
        }
        Ok(())
    }
}

impl FromStr for JumpSet {
    type Err = Error;

    /// Parses `-1:1,1:1,q=1`; an optional `policy=...` item selects the
    /// catastrophe policy (see [`CatastrophePolicy`]'s text form).
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|ch| !ch.is_whitespace()).collect();
        let mut weights = BTreeMap::new();
        let mut q = None;
        let mut policy = CatastrophePolicy::Default;
        // `exclude=0;1` uses `;` so that it survives the comma split.
        for item in compact.split(',').filter(|t| !t.is_empty()) {
            if let Some(v) = item.strip_prefix("q=") {
                q = Some(parse_rational(v)?);
            } else if let Some(v) = item.strip_prefix("policy=") {
                policy = v.parse()?;
            } else {
                let (j, w) =
                    item.split_once(':').ok_or_else(|| Error::Parse(format!("expected `j:weight`, got `{item}`")))?;
                let j: i64 = j.parse().map_err(|_| Error::Parse(format!("bad jump `{j}`")))?;
                if weights.insert(j, parse_rational(w)?).is_some() {
                    return Err(Error::Parse(format!("jump {j} listed twice")));
                }
            }
        }
        let q = q.ok_or_else(|| Error::Parse("missing `q=`".into()))?;
        JumpSet::new(&weights, q, policy)
    }
}

/// One step of a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Step {
    Jump(i64),
    /// A reset from altitude `h` to 0; the size is stored explicitly.
    Catastrophe(usize),
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Jump(j) => write!(f, "{j}"),
            Step::Catastrophe(h) => write!(f, "C{h}"),
        }
    }
}

impl FromStr for Step {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(h) = s.strip_prefix('C') {
            let h = h.parse().map_err(|_| Error::Parse(format!("bad catastrophe token `{s}`")))?;
            Ok(Step::Catastrophe(h))
        } else {
            let j = s.parse().map_err(|_| Error::Parse(format!("bad step token `{s}`")))?;
            Ok(Step::Jump(j))
        }
    }
}

/// Parses a whitespace-separated step line such as `1 1 C2 1 -1`.
pub fn parse_steps(line: &str) -> Result<Vec<Step>> {
    line.split_whitespace().map(str::parse).collect()
}

pub fn format_steps(steps: &[Step]) -> String {
    let tokens: Vec<String> = steps.iter().map(Step::to_string).collect();
    tokens.join(" ")
}

/// A validated non-negative path (meander) with catastrophes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    steps: Vec<Step>,
    altitudes: Vec<usize>,
    weight: BigRational,
}

impl Path {
    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Altitude profile; `altitudes()[i]` is the altitude after `i` steps.
    pub fn altitudes(&self) -> &[usize] {
        &self.altitudes
    }

    pub fn weight(&self) -> &BigRational {
        &self.weight
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn final_altitude(&self) -> usize {
        *self.altitudes.last().expect("profile starts at 0")
    }

    pub fn is_excursion(&self) -> bool {
        self.final_altitude() == 0
    }

    /// Sizes of the catastrophes, in order.
    pub fn catastrophe_sizes(&self) -> Vec<usize> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                Step::Catastrophe(h) => Some(*h),
                Step::Jump(_) => None,
            })
            .collect()
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_steps(&self.steps))
    }
}

/// Checks the meander constraint and catastrophe legality, computing the
/// altitude profile and the exact weight.
pub fn validate_path(js: &JumpSet, steps: &[Step]) -> Result<Path> {
    let mut altitudes = Vec::with_capacity(steps.len() + 1);
    altitudes.push(0usize);
    let mut weight = BigRational::one();
    let mut alt = 0usize;
    for (index, step) in steps.iter().enumerate() {
        match *step {
            Step::Jump(j) => {
                let w = js.weight(j);
                if !w.is_positive() {
                    return Err(Error::UnknownJump { index });
                }
                let next = alt as i64 + j;
                if next < 0 {
                    return Err(Error::NegativeAltitude { index });
                }
                alt = next as usize;
                weight *= w;
            }
            Step::Catastrophe(h) => {
                if h != alt || !js.permits_catastrophe_at(alt) {
                    return Err(Error::IllegalCatastrophe { index, altitude: alt });
                }
                alt = 0;
                weight *= js.q();
            }
        }
        altitudes.push(alt);
    }
    Ok(Path { steps: steps.to_vec(), altitudes, weight })
}

/// The six statistics tracked by the limit laws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct ParamVector {
    pub final_altitude: usize,
    pub n_catastrophes: usize,
    /// Steps landing at altitude 0 (jumps and catastrophes alike).
    pub n_returns_to_zero: usize,
    pub cumulative_cat_size: usize,
    /// 1-based index of the first catastrophe step, 0 if none.
    pub waiting_time_first_cat: usize,
    pub first_cat_size: usize,
}

pub fn path_statistics(path: &Path) -> ParamVector {
    let mut stats = ParamVector { final_altitude: path.final_altitude(), ..Default::default() };
    for (i, step) in path.steps.iter().enumerate() {
        if path.altitudes[i + 1] == 0 {
            stats.n_returns_to_zero += 1;
        }
        if let Step::Catastrophe(h) = *step {
            if stats.n_catastrophes == 0 {
                stats.waiting_time_first_cat = i + 1;
                stats.first_cat_size = h;
            }
            stats.n_catastrophes += 1;
            stats.cumulative_cat_size += h;
        }
    }
    stats
}

/// Lossy conversion that survives numerators and denominators beyond the
/// `f64` range as long as the quotient is representable.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let ln = ln_abs_rational(r);
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    sign * ln.exp()
}

/// `ln |r|` for a non-zero rational of any size; `-inf` for zero.
pub fn ln_abs_rational(r: &BigRational) -> f64 {
    if r.is_zero() {
        return f64::NEG_INFINITY;
    }
    ln_abs_bigint(r.numer()) - ln_abs_bigint(r.denom())
}

pub fn ln_abs_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.abs().to_f64().map_or(f64::INFINITY, f64::ln);
    }
    let shift = bits - 64;
    let top = (x.abs() >> shift).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Best rational approximation of `x` with `|x - p/q| <= tol`, via the
/// continued-fraction convergents of `x`.
pub fn rational_approximation(x: f64, tol: f64) -> BigRational {
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        let a_int = BigInt::from(a as i64);
        let h2 = &a_int * &h1 + &h0;
        let k2 = &a_int * &k1 + &k0;
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let approx = BigRational::new(h1.clone(), k1.clone());
        if (rational_to_f64(&approx) - x).abs() <= tol || rest == a {
            return approx;
        }
        rest = 1.0 / (rest - a);
        if !rest.is_finite() {
            break;
        }
    }
    BigRational::new(h1, k1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(rat("3"), BigRational::from_integer(3.into()));
        assert_eq!(rat("-3/4"), BigRational::new((-3).into(), 4.into()));
        assert_eq!(rat("0.125"), BigRational::new(1.into(), 8.into()));
        assert_eq!(rat("-1.5"), BigRational::new((-3).into(), 2.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn jumpset_text_form_round_trips() {
        let js: JumpSet = " -1 : 1/2 , 1:1/3 , q = 1/5 ".parse().unwrap();
        assert_eq!(js.to_string(), "-1:1/2,1:1/3,q=1/5");
        let again: JumpSet = js.to_string().parse().unwrap();
        assert_eq!(js, again);
        assert_eq!(js.common_denominator(), BigInt::from(30));
        for text in ["-2:1,1:1,q=1,policy=anywhere", "-1:1,0:2,1:1,q=3/2,policy=exclude=0;2"] {
            let js: JumpSet = text.parse().unwrap();
            assert_eq!(js.to_string(), text);
            assert_eq!(js.to_string().parse::<JumpSet>().unwrap(), js);
        }
    }

    #[test]
    fn jumpset_rejects_bad_input() {
        assert!("1:1,q=1".parse::<JumpSet>().is_err());
        assert!("-1:1,1:1".parse::<JumpSet>().is_err());
        assert!("-1:1,1:1,q=0".parse::<JumpSet>().is_err());
        assert!("-1:-1,1:1,q=1".parse::<JumpSet>().is_err());
        assert!(matches!("-1:0,1:0,q=1".parse::<JumpSet>(), Err(Error::EmptySupport)));
    }

    #[test]
    fn zero_weight_extremes_are_trimmed() {
        let js: JumpSet = "-3:0,-1:1,0:0,2:1,5:0,q=1".parse().unwrap();
        assert_eq!((js.c(), js.d()), (1, 2));
        assert_eq!(js.support(), vec![-1, 2]);
    }

    #[test]
    fn default_policy_equals_explicit_exclusion() {
        let js: JumpSet = "-2:1,-1:0,1:1,q=1".parse().unwrap();
        assert_eq!(js.excluded_altitudes(), &BTreeSet::from([0, 2]));
        let explicit = js.with_policy(CatastrophePolicy::ExcludedAltitudes(BTreeSet::from([0, 2]))).unwrap();
        for h in 0..10 {
            assert_eq!(js.permits_catastrophe_at(h), explicit.permits_catastrophe_at(h));
        }
        let anywhere = js.with_policy(CatastrophePolicy::FromAnywhere).unwrap();
        assert!(anywhere.permits_catastrophe_at(0));
    }

    #[test]
    fn policy_text_form() {
        for text in ["default", "anywhere", "exclude=0;1;3", "exclude="] {
            let p: CatastrophePolicy = text.parse().unwrap();
            assert_eq!(p.to_string(), text);
        }
        let js: JumpSet = "-1:1,1:1,q=1,policy=exclude=0;1;4".parse().unwrap();
        assert!(!js.permits_catastrophe_at(4));
        assert!(js.permits_catastrophe_at(3));
    }

    #[test]
    fn validate_shortest_excursion() {
        let js = JumpSet::dyck();
        let p = validate_path(&js, &parse_steps("1 -1").unwrap()).unwrap();
        assert!(p.is_excursion());
        assert_eq!(p.weight(), &BigRational::one());
    }

    #[test]
    fn validate_catastrophe_path() {
        let js = JumpSet::dyck();
        let p = validate_path(&js, &parse_steps("1 1 C2").unwrap()).unwrap();
        assert!(p.is_excursion());
        assert_eq!(p.altitudes(), &[0, 1, 2, 0]);
        assert_eq!(p.weight(), &BigRational::one());
    }

    #[test]
    fn validate_reports_first_offence() {
        let js = JumpSet::dyck();
        let err = validate_path(&js, &parse_steps("1 C1").unwrap()).unwrap_err();
        assert_eq!(err, Error::IllegalCatastrophe { index: 1, altitude: 1 });
        let err = validate_path(&js, &parse_steps("1 -1 -1").unwrap()).unwrap_err();
        assert_eq!(err, Error::NegativeAltitude { index: 2 });
        let err = validate_path(&js, &parse_steps("1 2").unwrap()).unwrap_err();
        assert_eq!(err, Error::UnknownJump { index: 1 });
        let err = validate_path(&js, &parse_steps("1 1 C3").unwrap()).unwrap_err();
        assert_eq!(err, Error::IllegalCatastrophe { index: 2, altitude: 2 });
    }

    #[test]
    fn weights_multiply() {
        let js: JumpSet = "-1:1/2,1:1/3,q=1/5".parse().unwrap();
        let p = validate_path(&js, &parse_steps("1 1 C2 1 -1").unwrap()).unwrap();
        assert_eq!(p.weight(), &rat("1/270"));
    }

    #[test]
    fn statistics_of_small_paths() {
        let js = JumpSet::dyck();
        let p = validate_path(&js, &parse_steps("1 -1").unwrap()).unwrap();
        assert_eq!(path_statistics(&p), ParamVector { n_returns_to_zero: 1, ..Default::default() });
        let p = validate_path(&js, &parse_steps("1 1 C2 1 -1").unwrap()).unwrap();
        assert_eq!(
            path_statistics(&p),
            ParamVector {
                final_altitude: 0,
                n_catastrophes: 1,
                n_returns_to_zero: 2,
                cumulative_cat_size: 2,
                waiting_time_first_cat: 3,
                first_cat_size: 2,
            }
        );
    }

    /// First catastrophe at step 15 of size 6, then sizes 7 and 4, five
    /// returns.
    #[test]
    fn statistics_of_a_three_catastrophe_path() {
        let mut tokens = vec!["1"; 6];
        tokens.extend(["1", "-1"].repeat(4));
        tokens.push("C6");
        tokens.extend(["1", "-1"]);
        tokens.extend(["1"; 7]);
        tokens.push("C7");
        tokens.extend(["1", "-1"]);
        tokens.extend(["1"; 4]);
        tokens.push("C4");
        let js = JumpSet::dyck();
        let p = validate_path(&js, &parse_steps(&tokens.join(" ")).unwrap()).unwrap();
        let s = path_statistics(&p);
        assert_eq!(s.waiting_time_first_cat, 15);
        assert_eq!(s.first_cat_size, 6);
        assert_eq!(s.n_returns_to_zero, 5);
        assert_eq!(s.n_catastrophes, 3);
        assert_eq!(s.cumulative_cat_size, 17);
    }

    #[test]
    fn periods() {
        assert_eq!(detect_period(&[-1, 1]).unwrap(), 2);
        assert_eq!(detect_period(&[-1, 0, 1]).unwrap(), 1);
        assert_eq!(detect_period(&[-2, 2]).unwrap(), 4);
        assert_eq!(detect_period(&[-2, 1]).unwrap(), 3);
        assert_eq!(detect_period(&[]), Err(Error::EmptySupport));
        assert_eq!(JumpSet::dyck().period(), 2);
    }

    #[test]
    fn step_tokens() {
        let steps = parse_steps("1 1 C2 1 -1").unwrap();
        assert_eq!(steps[2], Step::Catastrophe(2));
        assert_eq!(format_steps(&steps), "1 1 C2 1 -1");
        assert!(parse_steps("1 C").is_err());
    }

    #[test]
    fn huge_rationals_convert() {
        let big = BigRational::new(BigInt::from(3) << 2000u32, BigInt::from(2) << 1990u32);
        assert!((rational_to_f64(&big) - 1536.0).abs() < 1e-9);
        assert!((ln_abs_rational(&big) - 1536f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn rational_approximations() {
        let r = rational_approximation(std::f64::consts::PI, 1e-6);
        assert_eq!(r, BigRational::new(355.into(), 113.into()));
        assert_eq!(rational_approximation(4.0, 1e-12), BigRational::from_integer(4.into()));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn revalidation_is_idempotent_and_weight_is_product(
                choices in proptest::collection::vec(0u8..3, 0..24)
            ) {
                let js: JumpSet = "-1:2,1:3,q=5".parse().unwrap();
                let mut steps = Vec::new();
                let mut alt = 0usize;
                for ch in choices {
                    let step = match ch {
                        0 if alt > 0 => Step::Jump(-1),
                        2 if js.permits_catastrophe_at(alt) => Step::Catastrophe(alt),
                        _ => Step::Jump(1),
                    };
                    alt = match step {
                        Step::Jump(j) => (alt as i64 + j) as usize,
                        Step::Catastrophe(_) => 0,
                    };
                    steps.push(step);
                }
                let p = validate_path(&js, &steps).unwrap();
                let again = validate_path(&js, p.steps()).unwrap();
                prop_assert_eq!(&p, &again);
                let ups = steps.iter().filter(|s| **s == Step::Jump(1)).count() as u32;
                let downs = steps.iter().filter(|s| **s == Step::Jump(-1)).count() as u32;
                let cats = p.catastrophe_sizes().len() as u32;
                let expected = BigRational::from_integer(
                    BigInt::from(3).pow(ups) * BigInt::from(2).pow(downs) * BigInt::from(5).pow(cats),
                );
                prop_assert_eq!(p.weight(), &expected);
                let stats = path_statistics(&p);
                prop_assert!(stats.cumulative_cat_size >= 2 * stats.n_catastrophes);
                prop_assert!(stats.waiting_time_first_cat <= p.len());
            }
        }
    }
}
