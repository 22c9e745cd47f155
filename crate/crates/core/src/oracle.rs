//! Naive brute force over bounded integer matrices, kept independent of the
//! search module so the two can check each other.
//!
//! Every integer matrix with entries in `[−M, M]` is visited in row-major
//! lexicographic order; the only filter is the determinant test. Values are
//! therefore minima within the entry bound, which equal the true lattice size
//! whenever some optimal witness has entries within `M`.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::{width_in_direction, Direction, LatticePolytope};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("entry bound must be at least 1")]
    InvalidEntryBound,
    #[error("oracle exceeded its time budget of {0:?}")]
    TimeBudgetExceeded(Duration),
    #[error("coordinates too large for the brute-force oracle")]
    Overflow,
    #[error("no matrix within the entry bound is unimodular")]
    NoUnimodularMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Entries range over `[−M, M]`.
    pub entry_bound: u64,
    pub time_budget: Duration,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            entry_bound: 2,
            time_budget: Duration::from_secs(120),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    /// Minimum over the enumerated matrices.
    pub value: u64,
    pub entry_bound: u64,
    pub unimodular_matrices: u64,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Score {
    L1,
    MaxWidth,
}

/// Minimum of `l₁(AP)` over unimodular `A` with entries in `[−M, M]`.
pub fn oracle_ls_delta(p: &LatticePolytope, cfg: &OracleConfig) -> Result<OracleReport, OracleError> {
    brute_force(p, cfg, Score::L1)
}

/// Minimum of the largest coordinate width of `AP` over the same matrices.
pub fn oracle_ls_cube(p: &LatticePolytope, cfg: &OracleConfig) -> Result<OracleReport, OracleError> {
    brute_force(p, cfg, Score::MaxWidth)
}

/// Minimum width over every nonzero `h` with entries in `[−bound, bound]`.
pub fn oracle_width(p: &LatticePolytope, bound: u64) -> BigInt {
    let n = p.dim();
    let b = bound as i64;
    let mut h = vec![-b; n];
    let mut best: Option<BigInt> = None;
    loop {
        if h.iter().any(|&x| x != 0) {
            let dir = Direction::from_i64(&h).expect("nonzero");
            let w = width_in_direction(p, &dir).expect("dimensions agree");
            if best.as_ref().is_none_or(|cur| w < *cur) {
                best = Some(w);
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                return best.unwrap_or_else(BigInt::zero);
            }
            i -= 1;
            if h[i] < b {
                h[i] += 1;
                break;
            }
            h[i] = -b;
        }
    }
}

fn brute_force(p: &LatticePolytope, cfg: &OracleConfig, score: Score) -> Result<OracleReport, OracleError> {
    if cfg.entry_bound == 0 {
        return Err(OracleError::InvalidEntryBound);
    }
    let m = i64::try_from(cfg.entry_bound).map_err(|_| OracleError::Overflow)?;
    let n = p.dim();
    let points: Vec<Vec<i64>> = p
        .points()
        .iter()
        .map(|x| x.coords().iter().map(ToPrimitive::to_i64).collect::<Option<Vec<_>>>())
        .collect::<Option<_>>()
        .ok_or(OracleError::Overflow)?;

    // every possible row with its values on the points
    let side = 2 * m + 1;
    let count = side.checked_pow(n as u32).ok_or(OracleError::Overflow)? as usize;
    let rows: Vec<Vec<i64>> = (0..count)
        .map(|mut code| {
            let mut r = vec![0i64; n];
            for slot in r.iter_mut().rev() {
                *slot = (code as i64 % side) - m;
                code /= side as usize;
            }
            r
        })
        .collect();
    let images: Vec<Vec<i64>> = rows
        .iter()
        .map(|r| {
            points
                .iter()
                .map(|x| r.iter().zip(x).map(|(a, b)| a * b).sum())
                .collect()
        })
        .collect();

    let start = Instant::now();
    let timed_out = AtomicBool::new(false);
    // in dimension one the single row is the last row
    let firsts = if n == 1 { 1 } else { count };
    let results: Vec<(Option<i64>, u64)> = (0..firsts)
        .into_par_iter()
        .map(|first| {
            let mut idx = vec![0usize; n];
            idx[0] = first;
            let mut best: Option<i64> = None;
            let mut found = 0u64;
            loop {
                if timed_out.load(Ordering::Relaxed) || start.elapsed() > cfg.time_budget {
                    timed_out.store(true, Ordering::Relaxed);
                    return (best, found);
                }
                // the determinant is linear in the last row
                let prefix: Vec<&[i64]> =
                    idx[..n - 1].iter().map(|&i| rows[i].as_slice()).collect();
                let full = (1u32 << n) - 1;
                let cof: Vec<i64> = (0..n)
                    .map(|c| {
                        let sign = if (n - 1 + c).is_multiple_of(2) { 1 } else { -1 };
                        sign * laplace_det(&prefix, 0, full & !(1 << c))
                    })
                    .collect();
                for (last, row) in rows.iter().enumerate() {
                    let d: i64 = row.iter().zip(&cof).map(|(a, b)| a * b).sum();
                    if d == 1 || d == -1 {
                        idx[n - 1] = last;
                        found += 1;
                        let s = evaluate(score, &idx, &images);
                        if best.is_none_or(|b| s < b) {
                            best = Some(s);
                        }
                    }
                }
                // odometer over rows 1..n-1
                let mut i = n - 1;
                loop {
                    if i <= 1 {
                        return (best, found);
                    }
                    i -= 1;
                    if idx[i] + 1 < count {
                        idx[i] += 1;
                        break;
                    }
                    idx[i] = 0;
                }
            }
        })
        .collect();

    if timed_out.load(Ordering::Relaxed) {
        return Err(OracleError::TimeBudgetExceeded(cfg.time_budget));
    }
    let unimodular_matrices = results.iter().map(|r| r.1).sum();
    let value = results
        .iter()
        .filter_map(|r| r.0)
        .min()
        .ok_or(OracleError::NoUnimodularMatrix)?;
    Ok(OracleReport {
        value: value as u64,
        entry_bound: cfg.entry_bound,
        unimodular_matrices,
    })
}

fn evaluate(score: Score, idx: &[usize], images: &[Vec<i64>]) -> i64 {
    let npts = images[0].len();
    match score {
        Score::L1 => {
            let max_sum = (0..npts)
                .map(|j| idx.iter().map(|&i| images[i][j]).sum::<i64>())
                .max()
                .unwrap_or(0);
            let mins: i64 = idx
                .iter()
                .map(|&i| images[i].iter().copied().min().unwrap_or(0))
                .sum();
            max_sum - mins
        }
        Score::MaxWidth => idx
            .iter()
            .map(|&i| {
                let v = &images[i];
                v.iter().max().unwrap_or(&0) - v.iter().min().unwrap_or(&0)
            })
            .max()
            .unwrap_or(0),
    }
}

/// Cofactor expansion along row `r` over the columns in `cols`.
fn laplace_det(m: &[&[i64]], r: usize, cols: u32) -> i64 {
    if r == m.len() {
        return 1;
    }
    let mut total = 0i64;
    let mut sign = 1i64;
    for c in 0..m[r].len() {
        if cols & (1 << c) == 0 {
            continue;
        }
        let a = m[r][c];
        if a != 0 {
            total += sign * a * laplace_det(m, r + 1, cols & !(1 << c));
        }
        sign = -sign;
    }
    total
}
