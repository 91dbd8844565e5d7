//! Dyck paths with catastrophes in bijection with 1-horizontal Dyck paths,
//! which may also take a horizontal step `H` at altitude 1.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{validate_path, JumpSet, Path, Step};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HStep {
    Up,
    Down,
    Horizontal,
}

impl HStep {
    fn delta(self) -> i64 {
        match self {
            HStep::Up => 1,
            HStep::Down => -1,
            HStep::Horizontal => 0,
        }
    }
}

impl fmt::Display for HStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HStep::Up => "1",
            HStep::Down => "-1",
            HStep::Horizontal => "0h",
        })
    }
}

impl FromStr for HStep {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" | "+1" => Ok(HStep::Up),
            "-1" => Ok(HStep::Down),
            "0h" => Ok(HStep::Horizontal),
            other => Err(Error::Parse(format!("`{other}` is not a step of a 1-horizontal path"))),
        }
    }
}

/// A 1-horizontal Dyck path: non-negative, with `H` only at altitude 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HPath {
    steps: Vec<HStep>,
    altitudes: Vec<usize>,
}

impl HPath {
    pub fn new(steps: Vec<HStep>) -> Result<Self> {
        let mut altitudes = vec![0usize];
        let mut h: i64 = 0;
        for (index, s) in steps.iter().enumerate() {
            if *s == HStep::Horizontal && h != 1 {
                return Err(Error::InvalidHPath { index });
            }
            h += s.delta();
            if h < 0 {
                return Err(Error::InvalidHPath { index });
            }
            altitudes.push(h as usize);
        }
        Ok(HPath { steps, altitudes })
    }

    pub fn steps(&self) -> &[HStep] {
        &self.steps
    }

    pub fn altitudes(&self) -> &[usize] {
        &self.altitudes
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_excursion(&self) -> bool {
        self.altitudes.last() == Some(&0)
    }
}

impl fmt::Display for HPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tokens: Vec<String> = self.steps.iter().map(HStep::to_string).collect();
        f.write_str(&tokens.join(" "))
    }
}

impl FromStr for HPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        HPath::new(s.split_whitespace().map(str::parse).collect::<Result<_>>()?)
    }
}

/// An excursion touching 0 only at its end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arch {
    pub steps: Vec<Step>,
    pub catastrophe: bool,
}

/// Splits an excursion at its returns to 0.
pub fn arch_decompose(p: &Path) -> Result<Vec<Arch>> {
    if !p.is_excursion() {
        return Err(Error::NotAnExcursion);
    }
    let mut arches = Vec::new();
    let mut start = 0;
    for i in 0..p.len() {
        if p.altitudes()[i + 1] == 0 {
            arches.push(Arch {
                steps: p.steps()[start..=i].to_vec(),
                catastrophe: matches!(p.steps()[i], Step::Catastrophe(_)),
            });
            start = i + 1;
        }
    }
    Ok(arches)
}

fn check_dyck(p: &Path) -> Result<()> {
    for s in p.steps() {
        match s {
            Step::Jump(1) | Step::Jump(-1) => {}
            Step::Catastrophe(h) if *h >= 2 => {}
            other => {
                return Err(Error::UnsupportedJumpSet(format!(
                    "step `{other}` is not a Dyck step or a catastrophe of size at least 2"
                )))
            }
        }
    }
    Ok(())
}

/// Image of a Dyck excursion with catastrophes. In an arch ending with a
/// catastrophe of size `h`, the last up-steps through levels `2..=h` become
/// `H` and the catastrophe becomes a down-step.
pub fn to_horizontal(p: &Path) -> Result<HPath> {
    check_dyck(p)?;
    let mut out = Vec::with_capacity(p.len());
    let mut offset = 0;
    for arch in arch_decompose(p)? {
        let alt = &p.altitudes()[offset..=offset + arch.steps.len()];
        let mut image: Vec<HStep> = arch
            .steps
            .iter()
            .map(|s| match s {
                Step::Jump(1) => HStep::Up,
                _ => HStep::Down,
            })
            .collect();
        if let Some(Step::Catastrophe(h)) = arch.steps.last() {
            let end = arch.steps.len() - 1;
            for level in 2..=*h {
                let i = (0..end)
                    .rev()
                    .find(|&i| alt[i] + 1 == level && alt[i + 1] == level)
                    .expect("a catastrophe from altitude h crosses every level below it");
                image[i] = HStep::Horizontal;
            }
        }
        out.extend(image);
        offset += arch.steps.len();
    }
    HPath::new(out)
}

/// Inverse of [`to_horizontal`]: inside each arch, `H` steps turn back into
/// up-steps and an arch containing `k` of them ends with a catastrophe of
/// size `k + 1`.
pub fn from_horizontal(hp: &HPath) -> Result<Path> {
    if !hp.is_excursion() {
        return Err(Error::NotAnExcursion);
    }
    let mut steps = Vec::with_capacity(hp.len());
    let mut start = 0;
    for i in 0..hp.len() {
        if hp.altitudes()[i + 1] != 0 {
            continue;
        }
        let arch = &hp.steps()[start..=i];
        let flats = arch.iter().filter(|s| **s == HStep::Horizontal).count();
        for s in &arch[..arch.len() - 1] {
            steps.push(Step::Jump(if *s == HStep::Down { -1 } else { 1 }));
        }
        steps.push(if flats > 0 { Step::Catastrophe(flats + 1) } else { Step::Jump(-1) });
        start = i + 1;
    }
    validate_path(&JumpSet::dyck(), &steps).map_err(|_| Error::InvalidHPath { index: start })
}

/// All 1-horizontal excursions of length `n`, in lexicographic step order.
pub fn enumerate_hpaths(n: usize) -> Vec<HPath> {
    fn go(n: usize, h: usize, steps: &mut Vec<HStep>, out: &mut Vec<HPath>) {
        let left = n - steps.len();
        if left == 0 {
            if h == 0 {
                out.push(HPath::new(steps.clone()).expect("built legally"));
            }
            return;
        }
        if h > left {
            return;
        }
        let mut options = vec![HStep::Up];
        if h > 0 {
            options.push(HStep::Down);
        }
        if h == 1 {
            options.push(HStep::Horizontal);
        }
        for s in options {
            steps.push(s);
            go(n, (h as i64 + s.delta()) as usize, steps, out);
            steps.pop();
        }
    }
    let mut out = Vec::new();
    go(n, 0, &mut Vec::with_capacity(n), &mut out);
    out
}
