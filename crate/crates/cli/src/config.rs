//! Argument value parsing and defaults.

use num_bigint::BigInt;
use num_traits::{Pow, Zero};

/// Overrides the default search bound when set.
pub const BOUND_ENV: &str = "RN19_DEFAULT_BOUND";

pub const DEFAULT_BOUND: u64 = 1_000_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("invalid number `{0}`")]
    Number(String),
    #[error("invalid range or list `{0}`")]
    Range(String),
    #[error("{BOUND_ENV}: {0}")]
    Env(String),
}

/// Parses an exact nonnegative integer: `1000`, `1_000`, `1e12`, `2.5e3`,
/// `10^12`. Forms that do not denote an integer are rejected.
pub fn parse_bound(s: &str) -> Result<BigInt, ConfigError> {
    let bad = || ConfigError::Number(s.to_string());
    let t: String = s.trim().chars().filter(|&c| c != '_').collect();
    if t.is_empty() {
        return Err(bad());
    }
    let digits = |d: &str| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit());
    if let Some((b, e)) = t.split_once('^') {
        if !digits(b) || !digits(e) {
            return Err(bad());
        }
        let e: u32 = e.parse().map_err(|_| bad())?;
        return Ok(Pow::pow(b.parse::<BigInt>().map_err(|_| bad())?, e));
    }
    let (mant, exp) = match t.split_once(['e', 'E']) {
        Some((m, e)) => {
            if !digits(e) {
                return Err(bad());
            }
            (m, e.parse::<u32>().map_err(|_| bad())?)
        }
        None => (t.as_str(), 0),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if !(digits(int) && (frac.is_empty() || digits(frac))) {
        return Err(bad());
    }
    let frac = frac.trim_end_matches('0');
    let shift = u32::try_from(frac.len()).map_err(|_| bad())?;
    if shift > exp {
        return Err(bad());
    }
    let n: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    Ok(n * Pow::pow(BigInt::from(10), exp - shift))
}

/// The default bound, honouring [`BOUND_ENV`].
pub fn default_bound() -> Result<BigInt, ConfigError> {
    match std::env::var(BOUND_ENV) {
        Ok(v) => parse_bound(&v).map_err(|e| ConfigError::Env(e.to_string())),
        Err(_) => Ok(BigInt::from(DEFAULT_BOUND)),
    }
}

/// Parses `3`, `3..10` (inclusive), `3,5,7` or mixtures like `3..5,9`.
/// Returns the sorted, deduplicated values.
pub fn parse_set(s: &str) -> Result<Vec<u32>, ConfigError> {
    let bad = || ConfigError::Range(s.to_string());
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        match part.split_once("..") {
            Some((a, b)) => {
                let b = b.strip_prefix('=').unwrap_or(b);
                let a: u32 = a.trim().parse().map_err(|_| bad())?;
                let b: u32 = b.trim().parse().map_err(|_| bad())?;
                if a > b || b - a > 1_000_000 {
                    return Err(bad());
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Bound conversion for arguments that must fit a machine word.
pub fn bound_u64(n: &BigInt) -> Option<u64> {
    if n < &BigInt::zero() {
        return None;
    }
    u64::try_from(n).ok()
}
