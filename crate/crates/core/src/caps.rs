//! Enumeration caps.
//!
//! Searches that can blow up combinatorially refuse inputs above these
//! limits with [`Error::CapExceeded`] instead of truncating.

use crate::error::{Error, Result};

pub const ENV_VAR: &str = "REVPREF_MAX_ENUM";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest `T` for exhaustive order enumeration (Swaps, Varian oracle, robust Varian).
    pub max_order_obs: usize,
    /// Largest set size for inclusion–exclusion.
    pub max_union_sets: usize,
    /// Largest number of candidate removal sets examined.
    pub max_min_sets: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_order_obs: 8,
            max_union_sets: 20,
            max_min_sets: 1_000_000,
        }
    }
}

impl Caps {
    /// Defaults overridden by `REVPREF_MAX_ENUM`, if set.
    ///
    /// The variable holds either a bare integer (the order cap) or a comma
    /// separated list of `orders=N`, `union=N`, `minsets=N`.
    pub fn from_env() -> Result<Self> {
        match std::env::var(ENV_VAR) {
            Ok(v) => Self::parse(&v),
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn parse(spec: &str) -> Result<Self> {
        let mut caps = Self::default();
        let spec = spec.trim();
        if spec.is_empty() {
            return Ok(caps);
        }
        let bad = |msg: String| Error::Precondition(format!("{ENV_VAR}: {msg}"));
        let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad(format!("not a count: {s:?}")));
        if !spec.contains('=') {
            caps.max_order_obs = num(spec)?;
            return Ok(caps);
        }
        for part in spec.split(',') {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got {part:?}")))?;
            let value = num(value)?;
            match key.trim() {
                "orders" => caps.max_order_obs = value,
                "union" => caps.max_union_sets = value,
                "minsets" => caps.max_min_sets = value,
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }
        Ok(caps)
    }

    pub(crate) fn check_orders(&self, what: &'static str, requested: usize) -> Result<()> {
        check(what, self.max_order_obs, requested)
    }

    pub(crate) fn check_union(&self, requested: usize) -> Result<()> {
        check("inclusion-exclusion set size", self.max_union_sets, requested)
    }
}

fn check(what: &'static str, limit: usize, requested: usize) -> Result<()> {
    if requested > limit {
        Err(Error::CapExceeded {
            what,
            limit,
            requested,
        })
    } else {
        Ok(())
    }
}
