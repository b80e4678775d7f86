//! Mining thresholds and output scenarios.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::measures::Bond;

/// Minimum conjunctive support, absolute or as a fraction of |T|.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinSupport {
    Absolute(u64),
    Relative(Ratio<u64>),
}

impl MinSupport {
    /// Absolute count for a database of `transactions` rows. Fractions round up.
    pub fn resolve(self, transactions: u64) -> Result<u64> {
        let abs = match self {
            MinSupport::Absolute(n) => n,
            MinSupport::Relative(frac) => {
                if *frac.numer() == 0 || frac > Ratio::from_integer(1) {
                    return Err(Error::InvalidConfig(format!(
                        "relative minsupp {frac} outside (0, 1]"
                    )));
                }
                let num = *frac.numer() as u128 * transactions as u128;
                num.div_ceil(*frac.denom() as u128) as u64
            }
        };
        if abs == 0 || abs > transactions {
            return Err(Error::InvalidConfig(format!(
                "minsupp {abs} outside [1, {transactions}]"
            )));
        }
        Ok(abs)
    }
}

impl FromStr for MinSupport {
    type Err = Error;

    /// `"4"` is an absolute count, `"35%"` or `"12.5%"` a percentage.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(pct) = s.strip_suffix('%') {
            let frac = parse_decimal(pct.trim())
                .ok_or_else(|| Error::InvalidConfig(format!("bad percentage {s:?}")))?;
            Ok(MinSupport::Relative(frac / Ratio::from_integer(100)))
        } else {
            s.parse::<u64>()
                .map(MinSupport::Absolute)
                .map_err(|_| Error::InvalidConfig(format!("bad minsupp {s:?}")))
        }
    }
}

impl fmt::Display for MinSupport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinSupport::Absolute(n) => write!(f, "{n}"),
            MinSupport::Relative(r) => write!(f, "{}/{} of |T|", r.numer(), r.denom()),
        }
    }
}

/// Parses a non-negative decimal such as `"0.15"` into an exact fraction.
fn parse_decimal(s: &str) -> Option<Ratio<u64>> {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || frac.len() > 18 {
        return None;
    }
    let digits = format!("{int}{frac}");
    let numer: u64 = digits.parse().ok()?;
    let denom = 10u64.checked_pow(frac.len() as u32)?;
    Some(Ratio::new(numer, denom))
}

/// Parses `"1/5"`, `"0.15"` or `"1"` into a bond threshold in (0, 1].
pub fn parse_minbond(s: &str) -> Result<Bond> {
    let s = s.trim();
    let bad = || Error::InvalidConfig(format!("bad minbond {s:?}"));
    let value = if let Some((n, d)) = s.split_once('/') {
        let n: u64 = n.trim().parse().map_err(|_| bad())?;
        let d: u64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        Ratio::new(n, d)
    } else {
        parse_decimal(s).ok_or_else(bad)?
    };
    validate_minbond(value)?;
    Ok(value)
}

pub fn validate_minbond(minbond: Bond) -> Result<()> {
    if *minbond.numer() == 0 || minbond > Ratio::from_integer(1) {
        return Err(Error::InvalidConfig(format!(
            "minbond {minbond} outside (0, 1]"
        )));
    }
    Ok(())
}

/// Which pattern set a mining run produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scenario {
    /// Frequent correlated patterns.
    Fcp,
    /// Frequent closed correlated patterns, with frequent minimal correlated generators.
    Rfccp,
    /// Rare correlated patterns.
    Rcp,
    /// Minimal and closed rare correlated patterns.
    Rcpr,
}

impl Scenario {
    pub const ALL: [Scenario; 4] = [Scenario::Fcp, Scenario::Rfccp, Scenario::Rcp, Scenario::Rcpr];

    /// Frequent scenarios keep `conj >= minsupp`, rare ones `conj < minsupp`.
    pub fn is_frequent(self) -> bool {
        matches!(self, Scenario::Fcp | Scenario::Rfccp)
    }

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Fcp => "fcp",
            Scenario::Rfccp => "rfccp",
            Scenario::Rcp => "rcp",
            Scenario::Rcpr => "rcpr",
        }
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fcp" => Ok(Scenario::Fcp),
            "rfccp" => Ok(Scenario::Rfccp),
            "rcp" => Ok(Scenario::Rcp),
            "rcpr" => Ok(Scenario::Rcpr),
            _ => Err(Error::InvalidConfig(format!("unknown scenario {s:?}"))),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Thresholds after resolving minsupp against a concrete database.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Thresholds {
    pub minsupp: u64,
    pub minbond: Bond,
}

impl Thresholds {
    pub fn new(minsupp: u64, minbond: Bond) -> Result<Self> {
        validate_minbond(minbond)?;
        if minsupp == 0 {
            return Err(Error::InvalidConfig("minsupp must be at least 1".into()));
        }
        Ok(Thresholds { minsupp, minbond })
    }

    pub fn is_frequent(&self, conj: u64) -> bool {
        conj >= self.minsupp
    }

    pub fn is_correlated(&self, conj: u64, disj: u64) -> bool {
        crate::measures::meets_minbond(conj, disj, self.minbond)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MiningConfig {
    pub minsupp: MinSupport,
    pub minbond: Bond,
    pub scenario: Scenario,
}

impl MiningConfig {
    pub fn new(minsupp: MinSupport, minbond: Bond, scenario: Scenario) -> Self {
        MiningConfig {
            minsupp,
            minbond,
            scenario,
        }
    }

    pub fn resolve(&self, transactions: u64) -> Result<Thresholds> {
        Thresholds::new(self.minsupp.resolve(transactions)?, self.minbond)
    }
}
