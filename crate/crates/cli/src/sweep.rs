//! Parameter sweeps over the family `T_{p₁…p_d}` comparing closed forms,
//! search and (optionally) the brute-force oracle.

use std::str::FromStr;
use std::time::Duration;

use latsize::family::{
    formula_ls_cube, formula_ls_delta, make_family_simplex, theorem_scope, witness_matrix,
    FamilyParams,
};
use latsize::geometry::is_full_dimensional;
use latsize::oracle::{oracle_ls_cube, oracle_ls_delta, OracleConfig, OracleError};
use latsize::search::{ls_cube, ls_delta, SearchConfig, SearchError, SearchResult};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SweepError {
    #[error("range `{0}` must look like LO:HI or N with 0 <= LO <= HI")]
    BadRange(String),
}

/// Inclusive range for one parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParamRange {
    pub lo: u64,
    pub hi: u64,
}

impl FromStr for ParamRange {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SweepError::BadRange(s.to_string());
        let (lo, hi) = match s.split_once(':') {
            Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
            None => {
                let n = s.trim().parse().map_err(|_| bad())?;
                (n, n)
            }
        };
        if lo > hi {
            return Err(bad());
        }
        Ok(Self { lo, hi })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepSpec {
    /// One range per parameter; `d` is the number of ranges.
    pub ranges: Vec<ParamRange>,
    pub in_scope_only: bool,
    pub coprime_only: bool,
}

impl SweepSpec {
    pub fn d(&self) -> usize {
        self.ranges.len()
    }

    /// Tuples in lexicographic order, after filtering. No ranges means an
    /// empty sweep.
    pub fn tuples(&self) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        if self.ranges.is_empty() {
            return out;
        }
        let mut cur: Vec<u64> = self.ranges.iter().map(|r| r.lo).collect();
        loop {
            if self.keep(&cur) {
                out.push(cur.clone());
            }
            let mut i = cur.len();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < self.ranges[i].hi {
                    cur[i] += 1;
                    break;
                }
                cur[i] = self.ranges[i].lo;
            }
        }
    }

    fn keep(&self, p: &[u64]) -> bool {
        if self.coprime_only && p.iter().fold(0u64, |g, &x| g.gcd(&x)) != 1 {
            return false;
        }
        if self.in_scope_only {
            let params = FamilyParams::from_u64(p).expect("nonempty");
            if !theorem_scope(&params).in_scope() {
                return false;
            }
        }
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleOptions {
    /// Fixed entry bound; by default one more than the search witness's
    /// largest entry.
    pub entry_bound: Option<u64>,
    pub time_budget: Duration,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    pub search: SearchConfig,
    pub oracle: Option<OracleOptions>,
}

/// Row status values.
pub mod status {
    pub const OK: &str = "ok";
    pub const MISMATCH: &str = "mismatch";
    pub const ORACLE_MISMATCH: &str = "oracle_mismatch";
    pub const OUT_OF_SCOPE: &str = "out_of_scope";
    pub const OUT_OF_SCOPE_MATCH: &str = "out_of_scope_match";
    pub const BUDGET_EXCEEDED: &str = "budget_exceeded";
    pub const ORACLE_TIMEOUT: &str = "oracle_timeout";
    pub const DEGENERATE: &str = "degenerate";
}

/// One line of the verify table. Field order is the column order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyRow {
    pub params: String,
    pub alpha: u64,
    pub k: Option<u64>,
    pub in_scope: bool,
    pub ls_delta_formula: Option<u64>,
    pub ls_delta_search: Option<u64>,
    pub ls_cube_formula: Option<u64>,
    pub ls_cube_search: Option<u64>,
    #[serde(rename = "match")]
    pub matches: Option<bool>,
    pub ls_delta_oracle: Option<u64>,
    pub ls_cube_oracle: Option<u64>,
    pub status: &'static str,
}

pub const COLUMNS: [&str; 12] = [
    "params",
    "alpha",
    "k",
    "in_scope",
    "ls_delta_formula",
    "ls_delta_search",
    "ls_cube_formula",
    "ls_cube_search",
    "match",
    "ls_delta_oracle",
    "ls_cube_oracle",
    "status",
];

impl VerifyRow {
    pub fn cells(&self) -> Vec<String> {
        fn opt<T: ToString>(x: &Option<T>) -> String {
            x.as_ref().map_or_else(String::new, T::to_string)
        }
        vec![
            self.params.clone(),
            self.alpha.to_string(),
            opt(&self.k),
            self.in_scope.to_string(),
            opt(&self.ls_delta_formula),
            opt(&self.ls_delta_search),
            opt(&self.ls_cube_formula),
            opt(&self.ls_cube_search),
            opt(&self.matches),
            opt(&self.ls_delta_oracle),
            opt(&self.ls_cube_oracle),
            self.status.to_string(),
        ]
    }
}

pub fn run_sweep(spec: &SweepSpec, opts: &VerifyOptions) -> Vec<VerifyRow> {
    spec.tuples().iter().map(|p| verify_tuple(p, opts)).collect()
}

/// 0 when every row is consistent, 2 on any mismatch, 3 if a budget ran out.
pub fn sweep_exit_code(rows: &[VerifyRow]) -> i32 {
    let any = |s: &str| rows.iter().any(|r| r.status == s);
    if any(status::MISMATCH) || any(status::ORACLE_MISMATCH) {
        2
    } else if any(status::BUDGET_EXCEEDED) || any(status::ORACLE_TIMEOUT) {
        3
    } else {
        0
    }
}

pub fn verify_tuple(p: &[u64], opts: &VerifyOptions) -> VerifyRow {
    let params = FamilyParams::from_u64(p).expect("sweeps have at least one parameter");
    let scope = theorem_scope(&params);
    let small = |x: BigInt| x.to_u64();
    let mut row = VerifyRow {
        params: p.iter().map(u64::to_string).collect::<Vec<_>>().join(" "),
        alpha: small(params.alpha()).unwrap_or(u64::MAX),
        k: params.k().and_then(small),
        in_scope: scope.in_scope(),
        ls_delta_formula: formula_ls_delta(&params).and_then(small),
        ls_delta_search: None,
        ls_cube_formula: formula_ls_cube(&params).and_then(small),
        ls_cube_search: None,
        matches: None,
        ls_delta_oracle: None,
        ls_cube_oracle: None,
        status: status::OK,
    };

    let t = make_family_simplex(&params);
    if !is_full_dimensional(&t).unwrap_or(false) {
        row.status = status::DEGENERATE;
        return row;
    }
    let cfg = SearchConfig {
        seed: witness_matrix(&params).ok(),
        ..opts.search.clone()
    };
    let delta = ls_delta(&t, &cfg);
    let cube = ls_cube(&t, &cfg);
    let (delta, cube) = match (certified(delta), certified(cube)) {
        (Some(a), Some(b)) => (a, b),
        (a, b) => {
            row.ls_delta_search = a.map(|r| r.value);
            row.ls_cube_search = b.map(|r| r.value);
            row.status = status::BUDGET_EXCEEDED;
            return row;
        }
    };
    row.ls_delta_search = Some(delta.value);
    row.ls_cube_search = Some(cube.value);
    if let (Some(fd), Some(fc)) = (row.ls_delta_formula, row.ls_cube_formula) {
        row.matches = Some(fd == delta.value && fc == cube.value);
    }
    row.status = match (row.in_scope, row.matches) {
        (true, Some(false)) => status::MISMATCH,
        (true, _) => status::OK,
        (false, Some(true)) => status::OUT_OF_SCOPE_MATCH,
        (false, _) => status::OUT_OF_SCOPE,
    };

    // the matrix oracle is only practicable up to three dimensions
    if let Some(oracle) = &opts.oracle {
        if t.dim() <= 3 {
            let run = |r: &SearchResult, cube: bool| -> Result<u64, OracleError> {
                let cfg = OracleConfig {
                    entry_bound: oracle.entry_bound.unwrap_or_else(|| max_entry(r) + 1),
                    time_budget: oracle.time_budget,
                };
                let rep = if cube {
                    oracle_ls_cube(&t, &cfg)?
                } else {
                    oracle_ls_delta(&t, &cfg)?
                };
                Ok(rep.value)
            };
            match (run(&delta, false), run(&cube, true)) {
                (Ok(od), Ok(oc)) => {
                    row.ls_delta_oracle = Some(od);
                    row.ls_cube_oracle = Some(oc);
                    if od != delta.value || oc != cube.value {
                        row.status = status::ORACLE_MISMATCH;
                    }
                }
                (od, oc) => {
                    row.ls_delta_oracle = od.ok();
                    row.ls_cube_oracle = oc.ok();
                    if row.status != status::MISMATCH {
                        row.status = status::ORACLE_TIMEOUT;
                    }
                }
            }
        }
    }
    row
}

fn certified(r: Result<SearchResult, SearchError>) -> Option<SearchResult> {
    r.ok().filter(|r| r.certified)
}

fn max_entry(r: &SearchResult) -> u64 {
    r.witness
        .matrix()
        .rows()
        .iter()
        .flatten()
        .filter_map(|x| x.abs().to_u64())
        .max()
        .unwrap_or(0)
}
