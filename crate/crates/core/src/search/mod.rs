//! Exact lattice size with respect to the standard simplex and the unit cube.
//!
//! For a bound `B` the search lists every primitive direction of width at
//! most `B` (complete, by the dual-box enumeration) and assembles candidate
//! rows into a unimodular matrix depth first. Bounds are tried in increasing
//! order starting from the lattice width, so the first feasible bound is the
//! exact value and every refuted bound is a certified lower bound.
//!
//! Rows of a matrix `A` with `l₁(AP) ≤ B` all have width at most `B`, and so
//! does every sum of a nonempty subset of rows. `l₁(AP)` does not change when
//! rows are permuted, nor when a row is replaced by minus the sum of all rows,
//! so the `n+1` vectors `h₁,…,hₙ, −Σhᵢ` can be assumed to appear with the
//! `n` smallest (lexicographically) as rows in increasing order. Finally, for
//! any point `x₀` of `P`,
//!
//! ```text
//! l₁(AP) = Σⱼ (⟨gⱼ, x₀⟩ − min_x ⟨gⱼ, x⟩),   g = (h₁,…,hₙ, −Σhᵢ),
//! ```
//!
//! a sum of nonnegative terms, so the partial sum over the rows chosen so far
//! bounds `l₁` from below and equals it once all rows are placed.

mod engine;
mod intmat;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::geometry::{
    apply_map, directions_within_width, is_full_dimensional, l1, lattice_width_with_budget,
    max_coordinate_width, AffineUnimodularMap, Direction, GeometryError, IntMatrix,
    LatticePolytope, DEFAULT_ENUMERATION_BUDGET,
};
use engine::{Candidate, Level, LevelOutcome};

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("lattice size is only defined here for full-dimensional polytopes")]
    Degenerate,
    #[error("node budget must be at least 1")]
    InvalidBudget,
    #[error("a value does not fit in 64-bit search arithmetic")]
    Overflow,
    #[error("no unimodular image fits within the requested upper bound {0}")]
    UpperBoundTooLow(u64),
    #[error("witness failed its containment re-check")]
    WitnessCheckFailed,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Which dilated body the image must fit in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SizeKind {
    /// `l·Δ`, scored by `l₁`.
    Simplex,
    /// `[0, l]ⁿ`, scored by the largest row width.
    Cube,
}

/// Toggles for every pruning rule. With all rules off the search is a plain
/// filter over ordered row tuples followed by the determinant test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PruningRules {
    /// Every subset sum of chosen rows has width at most `B` (simplex only).
    pub subset_sums: bool,
    /// Partial `l₁` lower bound from the slack of chosen rows (simplex only).
    pub partial_l1_bound: bool,
    /// Rows strictly increasing in the candidate order.
    pub row_order: bool,
    /// `−Σhᵢ` is larger than every row (simplex only).
    pub last_row_symmetry: bool,
    /// Partial row sets must extend to a basis of `ℤⁿ`.
    pub basis_extension: bool,
}

impl PruningRules {
    pub const fn all() -> Self {
        Self {
            subset_sums: true,
            partial_l1_bound: true,
            row_order: true,
            last_row_symmetry: true,
            basis_extension: true,
        }
    }

    pub const fn none() -> Self {
        Self {
            subset_sums: false,
            partial_l1_bound: false,
            row_order: false,
            last_row_symmetry: false,
            basis_extension: false,
        }
    }
}

impl Default for PruningRules {
    fn default() -> Self {
        Self::all()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Caller-supplied bound; levels above it are never searched.
    pub initial_upper_bound: Option<u64>,
    /// Total partial matrices assembled across all levels.
    pub node_budget: u64,
    pub report_witness: bool,
    pub enumeration_budget: u64,
    pub pruning: PruningRules,
    /// A known good linear map (for instance a family witness); used as an
    /// upper bound together with the identity.
    pub seed: Option<AffineUnimodularMap>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            initial_upper_bound: None,
            node_budget: DEFAULT_NODE_BUDGET,
            report_witness: true,
            enumeration_budget: DEFAULT_ENUMERATION_BUDGET,
            pruning: PruningRules::all(),
            seed: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub kind: SizeKind,
    /// Exact lattice size when `certified`, otherwise the best upper bound.
    pub value: u64,
    /// Maps `P` into `value·Δ` or `[0, value]ⁿ`.
    pub witness: AffineUnimodularMap,
    /// Largest bound proven infeasible, plus one.
    pub lower_bound: u64,
    pub certified: bool,
    pub nodes_explored: u64,
    pub candidates_considered: u64,
}

/// `ls_Δ(P)`: the least `l₁(AP)` over `A ∈ GL(n, ℤ)`.
pub fn ls_delta(p: &LatticePolytope, cfg: &SearchConfig) -> Result<SearchResult, SearchError> {
    lattice_size(p, cfg, SizeKind::Simplex)
}

/// `ls_□(P)`: the least `max_i w_{hᵢ}(P)` over `A ∈ GL(n, ℤ)` with rows `hᵢ`.
pub fn ls_cube(p: &LatticePolytope, cfg: &SearchConfig) -> Result<SearchResult, SearchError> {
    lattice_size(p, cfg, SizeKind::Cube)
}

/// Every primitive direction of width at most `bound`, sign-normalized and in
/// lexicographic order.
pub fn candidate_rows(p: &LatticePolytope, bound: u64) -> Result<Vec<Direction>, SearchError> {
    if !is_full_dimensional(p)? {
        return Err(SearchError::Degenerate);
    }
    Ok(directions_within_width(
        p,
        &BigInt::from(bound),
        DEFAULT_ENUMERATION_BUDGET,
    )?)
}

/// Score of a linear map: `l₁` or the largest coordinate width of the image.
pub fn score(kind: SizeKind, image: &LatticePolytope) -> BigInt {
    match kind {
        SizeKind::Simplex => l1(image),
        SizeKind::Cube => max_coordinate_width(image),
    }
}

/// Whether `image` lies in `value·Δ` or `[0, value]ⁿ`.
pub fn fits(kind: SizeKind, image: &LatticePolytope, value: u64) -> bool {
    let v = BigInt::from(value);
    match kind {
        SizeKind::Simplex => image.fits_in_simplex_dilate(&v),
        SizeKind::Cube => image.fits_in_cube(&v),
    }
}

fn lattice_size(
    p: &LatticePolytope,
    cfg: &SearchConfig,
    kind: SizeKind,
) -> Result<SearchResult, SearchError> {
    if cfg.node_budget == 0 {
        return Err(SearchError::InvalidBudget);
    }
    let p = p.canonicalize();
    if !is_full_dimensional(&p)? {
        return Err(SearchError::Degenerate);
    }
    let n = p.dim();

    let mut known = (
        to_u64(&score(kind, &p))?,
        AffineUnimodularMap::identity(n),
    );
    if let Some(seed) = &cfg.seed {
        let image = apply_map(seed, &p)?;
        let s = to_u64(&score(kind, &image))?;
        if s < known.0 {
            known = (s, seed.clone());
        }
    }
    let lower = to_u64(&lattice_width_with_budget(&p, cfg.enumeration_budget)?.0)?;
    // highest level to search; a caller bound below the known one must be
    // reached by the search itself
    let (top, must_find) = match cfg.initial_upper_bound {
        Some(cap) if cap < known.0 => (cap, true),
        _ => (known.0.saturating_sub(1), false),
    };

    let mut nodes = 0u64;
    let mut candidates_considered = 0u64;
    let mut bound = lower;
    while bound <= top {
        let candidates = prepare_candidates(&p, kind, bound, cfg.enumeration_budget)?;
        candidates_considered += candidates.len() as u64;
        let level = Level {
            kind,
            rules: cfg.pruning,
            dim: n,
            bound: i64::try_from(bound).map_err(|_| SearchError::Overflow)?,
            candidates: &candidates,
        };
        match level.run(cfg.node_budget - nodes) {
            LevelOutcome::Found { rows, nodes: used } => {
                nodes += used;
                let matrix = IntMatrix::new(
                    rows.iter()
                        .map(|&i| {
                            candidates[i]
                                .coords
                                .iter()
                                .map(|&x| BigInt::from(x))
                                .collect()
                        })
                        .collect(),
                )?;
                let witness = AffineUnimodularMap::linear(matrix)?;
                return finish(&p, kind, bound, witness, bound, true, nodes, candidates_considered);
            }
            LevelOutcome::Exhausted { nodes: used } => nodes += used,
            LevelOutcome::BudgetExceeded => {
                // nothing better than the known map is certified
                return finish(
                    &p,
                    kind,
                    known.0,
                    known.1,
                    bound,
                    false,
                    cfg.node_budget,
                    candidates_considered,
                );
            }
        }
        bound += 1;
    }
    if must_find {
        return Err(SearchError::UpperBoundTooLow(top));
    }
    let value = known.0;
    finish(
        &p,
        kind,
        value,
        known.1,
        value,
        true,
        nodes,
        candidates_considered,
    )
}

/// Attaches the translation that moves the image into the nonnegative orthant
/// with zero coordinate minima, then re-checks containment independently.
#[allow(clippy::too_many_arguments)]
fn finish(
    p: &LatticePolytope,
    kind: SizeKind,
    value: u64,
    linear: AffineUnimodularMap,
    lower_bound: u64,
    certified: bool,
    nodes_explored: u64,
    candidates_considered: u64,
) -> Result<SearchResult, SearchError> {
    let translation: Vec<BigInt> = linear
        .matrix()
        .rows()
        .iter()
        .map(|row| p.functional_range(row).map(|(min, _)| -min))
        .collect::<Result<_, _>>()?;
    let witness = linear.with_translation(translation)?;
    let image = apply_map(&witness, p)?;
    if !fits(kind, &image, value) {
        return Err(SearchError::WitnessCheckFailed);
    }
    Ok(SearchResult {
        kind,
        value,
        witness,
        lower_bound,
        certified,
        nodes_explored,
        candidates_considered,
    })
}

fn prepare_candidates(
    p: &LatticePolytope,
    kind: SizeKind,
    bound: u64,
    budget: u64,
) -> Result<Vec<Candidate>, SearchError> {
    let dirs = directions_within_width(p, &BigInt::from(bound), budget)?;
    let base = p.points()[0].coords().to_vec();
    let mut out = Vec::with_capacity(dirs.len() * 2);
    for h in dirs {
        let signed = match kind {
            SizeKind::Simplex => vec![h.neg(), h],
            SizeKind::Cube => vec![h],
        };
        for g in signed {
            out.push(candidate(p, &base, &g)?);
        }
    }
    out.sort_by(|a, b| a.coords.cmp(&b.coords));
    Ok(out)
}

fn candidate(p: &LatticePolytope, base: &[BigInt], h: &Direction) -> Result<Candidate, SearchError> {
    let coords = h
        .coords()
        .iter()
        .map(ToPrimitive::to_i64)
        .collect::<Option<Vec<_>>>()
        .ok_or(SearchError::Overflow)?;
    let raw = p.functional_values(h.coords())?;
    let at_base: BigInt = base.iter().zip(h.coords()).map(|(a, b)| a * b).sum();
    let min = raw.iter().min().cloned().unwrap_or_else(BigInt::zero);
    let values = raw
        .iter()
        .map(|v| (v - &at_base).to_i64())
        .collect::<Option<Vec<_>>>()
        .ok_or(SearchError::Overflow)?;
    let slack = raw
        .iter()
        .map(|v| (v - &min).to_i64())
        .collect::<Option<Vec<_>>>()
        .ok_or(SearchError::Overflow)?;
    Ok(Candidate {
        coords,
        values,
        slack,
    })
}

fn to_u64(x: &BigInt) -> Result<u64, SearchError> {
    x.to_u64().ok_or(SearchError::Overflow)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::LatticePoint;

    fn poly(points: &[&[i64]]) -> LatticePolytope {
        LatticePolytope::from_i64(points).unwrap()
    }

    fn t(p: &[i64]) -> LatticePolytope {
        let n = p.len() + 1;
        let mut pts: Vec<LatticePoint> =
            (0..n).map(|i| LatticePoint::unit(n, i).unwrap()).collect();
        let mut apex = p.to_vec();
        apex.push(1);
        pts.push(LatticePoint::from_i64(&apex).unwrap());
        LatticePolytope::new(pts).unwrap()
    }

    fn cfg() -> SearchConfig {
        SearchConfig::default()
    }

    #[test]
    fn simplex_and_cube_trivial() {
        let s = LatticePolytope::standard_simplex(3, 1).unwrap();
        let r = ls_delta(&s, &cfg()).unwrap();
        assert_eq!((r.value, r.certified), (1, true));
        let cube = LatticePolytope::unit_cube(3).unwrap();
        let r = ls_cube(&cube, &cfg()).unwrap();
        assert_eq!((r.value, r.certified), (1, true));
    }

    #[test]
    fn t13_values() {
        let r = ls_delta(&t(&[1, 3]), &cfg()).unwrap();
        assert_eq!(r.value, 3);
        assert!(r.certified);
        let image = apply_map(&r.witness, &t(&[1, 3])).unwrap();
        assert!(image.fits_in_simplex_dilate(&3.into()));
        assert_eq!(ls_cube(&t(&[1, 3]), &cfg()).unwrap().value, 2);
        assert_eq!(ls_cube(&t(&[2, 6]), &cfg()).unwrap().value, 3);
    }

    #[test]
    fn candidate_rows_examples() {
        let tri = LatticePolytope::standard_simplex(2, 1).unwrap();
        let rows = candidate_rows(&tri, 1).unwrap();
        let want: Vec<Direction> = [[0, 1], [1, 0], [1, 1]]
            .iter()
            .map(|c| Direction::from_i64(c).unwrap())
            .collect();
        assert_eq!(rows, want);
        let rows = candidate_rows(&t(&[1, 3]), 1).unwrap();
        assert!(rows.contains(&Direction::from_i64(&[0, 0, 1]).unwrap()));
        assert!(candidate_rows(&t(&[1, 3]), 0).unwrap().is_empty());
    }

    #[test]
    fn degenerate_rejected() {
        let seg = poly(&[&[0, 0], &[3, 1]]);
        assert!(matches!(ls_delta(&seg, &cfg()), Err(SearchError::Degenerate)));
        assert!(matches!(ls_cube(&seg, &cfg()), Err(SearchError::Degenerate)));
        assert!(matches!(candidate_rows(&seg, 2), Err(SearchError::Degenerate)));
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let c = SearchConfig {
            node_budget: 3,
            ..cfg()
        };
        let r = ls_delta(&t(&[2, 6]), &c).unwrap();
        assert!(!r.certified);
        assert_eq!(r.nodes_explored, 3);
        assert!(r.value >= 4);
        assert!(r.lower_bound <= 4);
    }

    #[test]
    fn caller_bound() {
        let c = SearchConfig {
            initial_upper_bound: Some(2),
            ..cfg()
        };
        assert_eq!(
            ls_delta(&t(&[1, 3]), &c),
            Err(SearchError::UpperBoundTooLow(2))
        );
        let c = SearchConfig {
            initial_upper_bound: Some(3),
            ..cfg()
        };
        assert_eq!(ls_delta(&t(&[1, 3]), &c).unwrap().value, 3);
    }

    #[test]
    fn zero_budget_rejected() {
        let c = SearchConfig {
            node_budget: 0,
            ..cfg()
        };
        assert_eq!(ls_delta(&t(&[1, 3]), &c), Err(SearchError::InvalidBudget));
    }
}
