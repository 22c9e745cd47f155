//! Depth-first assembly of unimodular matrices from narrow rows, one bound
//! at a time.

use rayon::prelude::*;

use super::intmat::{det, extends_to_basis};
use super::{PruningRules, SizeKind};

/// A row candidate with its values on the generating points.
#[derive(Clone, Debug)]
pub(crate) struct Candidate {
    pub coords: Vec<i64>,
    /// `⟨h, xⱼ − x₀⟩` for every generating point `xⱼ`.
    pub values: Vec<i64>,
    /// `⟨h, xⱼ⟩ − min_x ⟨h, x⟩`.
    pub slack: Vec<i64>,
}

pub(crate) struct Level<'a> {
    pub kind: SizeKind,
    pub rules: PruningRules,
    pub dim: usize,
    pub bound: i64,
    pub candidates: &'a [Candidate],
}

pub(crate) enum LevelOutcome {
    Found { rows: Vec<usize>, nodes: u64 },
    Exhausted { nodes: u64 },
    BudgetExceeded,
}

struct BranchOutcome {
    nodes: u64,
    found: Option<Vec<usize>>,
    exceeded: bool,
}

struct BudgetHit;

struct Dfs<'a, 'b> {
    level: &'b Level<'a>,
    cap: u64,
    nodes: u64,
    rows: Vec<usize>,
    /// Sums of `values` over every subset of `rows`, indexed by bitmask.
    subset_sums: Vec<Vec<i64>>,
    /// Accumulated slack per depth; `slack[m]` covers the first `m` rows.
    slack: Vec<Vec<i64>>,
}

impl<'a> Level<'a> {
    /// Searches every first-row branch in canonical order and returns the
    /// first witness. Branches run in parallel chunks, but each one is a pure
    /// function of its first row and of a node cap no smaller than the serial
    /// run would grant, so node counts and witnesses do not depend on the
    /// thread count.
    pub(crate) fn run(&self, budget: u64) -> LevelOutcome {
        let threads = rayon::current_num_threads();
        let chunk = if threads <= 1 { 1 } else { threads * 2 };
        let firsts: Vec<usize> = (0..self.candidates.len()).collect();
        let mut used = 0u64;
        for block in firsts.chunks(chunk) {
            let remaining = budget - used;
            let outcomes: Vec<BranchOutcome> = if block.len() == 1 {
                vec![self.branch(block[0], remaining)]
            } else {
                block
                    .par_iter()
                    .map(|&first| self.branch(first, remaining))
                    .collect()
            };
            for outcome in outcomes {
                if outcome.exceeded || used + outcome.nodes > budget {
                    return LevelOutcome::BudgetExceeded;
                }
                used += outcome.nodes;
                if let Some(rows) = outcome.found {
                    return LevelOutcome::Found { rows, nodes: used };
                }
            }
        }
        LevelOutcome::Exhausted { nodes: used }
    }

    fn branch(&self, first: usize, cap: u64) -> BranchOutcome {
        let points = self.candidates.first().map_or(0, |c| c.values.len());
        let mut dfs = Dfs {
            level: self,
            cap,
            nodes: 0,
            rows: Vec::with_capacity(self.dim),
            subset_sums: vec![vec![0; points]],
            slack: vec![vec![0; points]],
        };
        match dfs.extend(first) {
            Ok(true) => BranchOutcome {
                nodes: dfs.nodes,
                found: Some(dfs.rows),
                exceeded: false,
            },
            Ok(false) => BranchOutcome {
                nodes: dfs.nodes,
                found: None,
                exceeded: false,
            },
            Err(BudgetHit) => BranchOutcome {
                nodes: dfs.nodes,
                found: None,
                exceeded: true,
            },
        }
    }
}

impl Dfs<'_, '_> {
    /// Tries to append candidate `idx`; on success recurses and returns
    /// whether a complete witness was found below. `self.rows` holds the
    /// witness when `Ok(true)` is returned.
    fn extend(&mut self, idx: usize) -> Result<bool, BudgetHit> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(BudgetHit);
        }
        let level = self.level;
        let rules = level.rules;
        let cand = &level.candidates[idx];
        let depth = self.rows.len();
        let bound = level.bound;
        let simplex = level.kind == SizeKind::Simplex;

        let old_sums = self.subset_sums.len();
        if simplex && rules.subset_sums {
            // only subsets containing the new row need checking
            for mask in 0..old_sums {
                let sum: Vec<i64> = self.subset_sums[mask]
                    .iter()
                    .zip(&cand.values)
                    .map(|(a, b)| a + b)
                    .collect();
                if spread(&sum) > bound {
                    self.subset_sums.truncate(old_sums);
                    return Ok(false);
                }
                self.subset_sums.push(sum);
            }
        }

        if simplex {
            let acc: Vec<i64> = self.slack[depth]
                .iter()
                .zip(&cand.slack)
                .map(|(a, b)| a + b)
                .collect();
            let complete = depth + 1 == level.dim;
            if (rules.partial_l1_bound || complete) && acc.iter().copied().max().unwrap_or(0) > bound
            {
                self.subset_sums.truncate(old_sums);
                return Ok(false);
            }
            self.slack.push(acc);
        }

        self.rows.push(idx);
        let found = self.accept_or_descend();
        if !matches!(found, Ok(true)) {
            self.rows.pop();
            if simplex {
                self.slack.pop();
            }
            self.subset_sums.truncate(old_sums);
        }
        found
    }

    fn accept_or_descend(&mut self) -> Result<bool, BudgetHit> {
        let level = self.level;
        let rules = level.rules;
        let n = level.dim;
        let coords: Vec<&[i64]> = self
            .rows
            .iter()
            .map(|&i| level.candidates[i].coords.as_slice())
            .collect();

        if self.rows.len() == n {
            let d = det(&coords);
            if d != 1.into() && d != (-1).into() {
                return Ok(false);
            }
            if level.kind == SizeKind::Simplex && rules.last_row_symmetry {
                // the omitted vector −Σh must be the largest of the n+1
                let omitted: Vec<i64> = (0..n)
                    .map(|j| -coords.iter().map(|r| r[j]).sum::<i64>())
                    .collect();
                if coords.iter().any(|r| omitted.as_slice() <= *r) {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
        if rules.basis_extension && !extends_to_basis(&coords, n) {
            return Ok(false);
        }

        let next_start = if rules.row_order {
            self.rows.last().map_or(0, |&i| i + 1)
        } else {
            0
        };
        for next in next_start..level.candidates.len() {
            if !rules.row_order && self.rows.contains(&next) {
                continue;
            }
            if self.extend(next)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn spread(v: &[i64]) -> i64 {
    let max = v.iter().copied().max().unwrap_or(0);
    let min = v.iter().copied().min().unwrap_or(0);
    max - min
}
