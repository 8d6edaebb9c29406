//! Hierarchy parameter sets: parsing, printing and validation.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::sequences::{e_bounds, level_product, time_budget};
use super::HierarchyError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// The asymptotic constraint set `C >= 40, N > 100 e^C, R > 50 N`.
    Canonical,
    /// The exact per-level inequalities the evasion argument uses.
    Relaxed,
}

impl FromStr for Mode {
    type Err = HierarchyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "canonical" => Ok(Mode::Canonical),
            "relaxed" => Ok(Mode::Relaxed),
            other => Err(HierarchyError::Parse(format!("unknown mode `{other}`"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Canonical => "canonical",
            Mode::Relaxed => "relaxed",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HierarchyParams {
    pub c: u64,
    /// Side of a 0-cell in squares.
    pub n: BigUint,
    /// Robber speed.
    pub r: BigUint,
    pub k_max: u32,
    pub mode: Mode,
}

/// One failed inequality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<u32>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.level {
            Some(j) => write!(f, "{} (level {j})", self.rule),
            None => f.write_str(&self.rule),
        }
    }
}

/// Parses a nonnegative integer, accepting exact power notation such as
/// `1e20`, `2.5e3` or `10^25`.
pub fn parse_exact_uint(s: &str) -> Result<BigUint, HierarchyError> {
    let s = s.trim().replace('_', "");
    let bad = || HierarchyError::Parse(format!("not an exact integer: `{s}`"));
    if let Some((base, exp)) = s.split_once('^') {
        let base: BigUint = base.trim().parse().map_err(|_| bad())?;
        let exp: usize = exp.trim().parse().map_err(|_| bad())?;
        return Ok(num_traits::pow(base, exp));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].trim_start_matches('+').parse::<usize>().map_err(|_| bad())?),
        None => (s.as_str(), 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let frac_part = frac_part.trim_end_matches('0');
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|ch| ch.is_ascii_digit()) || frac_part.len() > exp {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let digits = if digits.is_empty() { "0".to_string() } else { digits };
    let value: BigUint = digits.parse().map_err(|_| bad())?;
    Ok(value * num_traits::pow(BigUint::from(10u32), exp - frac_part.len()))
}

impl HierarchyParams {
    pub fn new(c: u64, n: u64, r: u64, k_max: u32, mode: Mode) -> Self {
        HierarchyParams { c, n: n.into(), r: r.into(), k_max, mode }
    }

    /// `C = 40, N = 10^20, R = 10^25`.
    pub fn canonical(k_max: u32) -> Self {
        HierarchyParams {
            c: 40,
            n: num_traits::pow(BigUint::from(10u32), 20),
            r: num_traits::pow(BigUint::from(10u32), 25),
            k_max,
            mode: Mode::Canonical,
        }
    }

    /// Parses a flat `key = value` block with keys `C`, `N`, `R`, `k_max`
    /// (or `k`) and `mode`. Blank lines and `#` comments are ignored.
    pub fn parse_block(text: &str) -> Result<Self, HierarchyError> {
        let mut c = None;
        let mut n = None;
        let mut r = None;
        let mut k_max = None;
        let mut mode = None;
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .or_else(|| line.split_once(':'))
                .ok_or_else(|| HierarchyError::Parse(format!("expected `key = value`, got `{line}`")))?;
            let value = value.trim();
            match key.trim() {
                "C" | "c" => {
                    c = Some(parse_exact_uint(value)?.to_u64().ok_or_else(|| HierarchyError::Parse("C too large".into()))?)
                }
                "N" | "n" => n = Some(parse_exact_uint(value)?),
                "R" | "r" => r = Some(parse_exact_uint(value)?),
                "k_max" | "k" => {
                    k_max = Some(value.parse::<u32>().map_err(|_| HierarchyError::Parse(format!("bad k_max `{value}`")))?)
                }
                "mode" => mode = Some(value.parse()?),
                other => return Err(HierarchyError::Parse(format!("unknown key `{other}`"))),
            }
        }
        let missing = |k: &str| HierarchyError::Parse(format!("missing key `{k}`"));
        Ok(HierarchyParams {
            c: c.ok_or_else(|| missing("C"))?,
            n: n.ok_or_else(|| missing("N"))?,
            r: r.ok_or_else(|| missing("R"))?,
            k_max: k_max.ok_or_else(|| missing("k_max"))?,
            mode: mode.unwrap_or(Mode::Relaxed),
        })
    }

    pub fn to_block(&self) -> String {
        format!("C = {}\nN = {}\nR = {}\nk_max = {}\nmode = {}\n", self.c, self.n, self.r, self.k_max, self.mode)
    }

    /// Every violated inequality; empty means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut fail = |rule: &str, level: Option<u32>| out.push(Violation { rule: rule.to_string(), level });
        let n = &self.n;
        let r = &self.r;
        if self.c < 40 {
            fail("C >= 40", None);
        }
        if *r <= n * 50u32 {
            fail("R > 50N", None);
        }
        match self.mode {
            Mode::Canonical => {
                if !n_exceeds_hundred_exp(n, self.c) {
                    fail("N > 100e^C", None);
                }
            }
            Mode::Relaxed => {
                if n * 36u32 > *r {
                    fail("36N <= R", None);
                }
                if *n <= BigUint::from(4u32) {
                    fail("N > 4", None);
                }
                for j in 1..=self.k_max {
                    let t = time_budget(j - 1, self.c);
                    let width = n * level_product(j - 1);
                    if (&t * 8u32 + 1u32) * 2u32 >= width {
                        fail("2(8T+1) < NL", Some(j));
                    }
                    if (&t * 2u32 + 1u32) * 2u32 >= width {
                        fail("2(2T+1) < NL", Some(j));
                    }
                    if &t * 100u32 >= width {
                        fail("100T < NL", Some(j));
                    }
                    if (&t * 14u32 + 1u32) * 2u32 >= width {
                        fail("2(14T+1) < NL", Some(j));
                    }
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }
}

/// Decides `n > 100 e^c` with rational brackets of e. An undecided
/// comparison (n inside the bracket gap) counts as not exceeding.
fn n_exceeds_hundred_exp(n: &BigUint, c: u64) -> bool {
    if n.is_zero() {
        return false;
    }
    let (_, hi) = e_bounds();
    let hi = hi.pow(c);
    n * hi.den > hi.num * 100u32
}
