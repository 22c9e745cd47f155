//! The simplices `T_{p₁…p_d} = conv{e₁,…,e_{d+1}, (p₁,…,p_d,1)} ⊂ ℝ^{d+1}`.
//!
//! With `α = p₁+⋯+p_{d−1}` and `k = ⌊(p_d−2)/(α+1)⌋`, the lattice sizes are
//! `ls_Δ = k+3` and `ls_□ = k+2` whenever `d ≥ 2`, every `pᵢ` is positive,
//! `p_d ≥ 2` and `p_d ≥ α²−α`. For `d = 2` these are the empty tetrahedra
//! `T_pq` of White's classification (when `gcd(p, q) = 1`).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::geometry::{
    directions_within_width, lattice_width_with_budget, width_in_direction, AffineUnimodularMap,
    Direction, GeometryError, IntMatrix, LatticePoint, LatticePolytope,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("the family needs at least one parameter")]
    NoParameters,
    #[error("parameter p{index} is negative")]
    NegativeParameter { index: usize },
    #[error("k is undefined: the last parameter must be at least 2")]
    UndefinedK,
    #[error("closed forms do not apply: {0}")]
    OutOfScope(TheoremScope),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// The parameters `(p₁,…,p_d)`; `α` and `k` are always recomputed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FamilyParams {
    p: Vec<BigInt>,
}

impl FamilyParams {
    pub fn new(p: Vec<BigInt>) -> Result<Self, FamilyError> {
        if p.is_empty() {
            return Err(FamilyError::NoParameters);
        }
        if let Some(i) = p.iter().position(Signed::is_negative) {
            return Err(FamilyError::NegativeParameter { index: i + 1 });
        }
        Ok(Self { p })
    }

    pub fn from_u64(p: &[u64]) -> Result<Self, FamilyError> {
        Self::new(p.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// Number of parameters; the simplex lives in `ℝ^{d+1}`.
    pub fn d(&self) -> usize {
        self.p.len()
    }

    pub fn p(&self) -> &[BigInt] {
        &self.p
    }

    pub fn last(&self) -> &BigInt {
        self.p.last().expect("nonempty by construction")
    }

    /// `α = p₁+⋯+p_{d−1}`.
    pub fn alpha(&self) -> BigInt {
        self.p[..self.d() - 1].iter().sum()
    }

    /// `k = ⌊(p_d−2)/(α+1)⌋`, defined only for `p_d ≥ 2`.
    pub fn k(&self) -> Option<BigInt> {
        let pd = self.last();
        if *pd < BigInt::from(2) {
            return None;
        }
        let shifted: BigInt = pd - 2;
        Some(shifted.div_floor(&(self.alpha() + 1)))
    }

    pub fn gcd(&self) -> BigInt {
        self.p.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
    }
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.p.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A violated hypothesis of the closed-form lattice sizes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ScopeViolation {
    /// `d = 1`: `T_p` is a triangle equivalent to `conv{0, p·e₁, e₂}`, whose
    /// `ls_Δ` is `p`, not `k+3 = p+1`.
    DimensionBelowTwo,
    /// `pᵢ ≤ 0` for some `i < d` (one-based index).
    NonPositive { index: usize },
    LastBelowTwo,
    BelowQuadraticBound,
}

impl fmt::Display for ScopeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DimensionBelowTwo => write!(f, "d < 2"),
            Self::NonPositive { index } => write!(f, "p{index} <= 0"),
            Self::LastBelowTwo => write!(f, "p_d < 2"),
            Self::BelowQuadraticBound => write!(f, "p_d < α²−α"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TheoremScope {
    in_scope: bool,
    reasons: Vec<ScopeViolation>,
}

impl TheoremScope {
    pub fn in_scope(&self) -> bool {
        self.in_scope
    }

    pub fn reasons(&self) -> &[ScopeViolation] {
        &self.reasons
    }
}

impl fmt::Display for TheoremScope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.in_scope {
            return write!(f, "in scope");
        }
        let parts: Vec<String> = self.reasons.iter().map(ToString::to_string).collect();
        write!(f, "out of scope ({})", parts.join("; "))
    }
}

/// `conv{e₁,…,e_{d+1}, (p₁,…,p_d,1)}` with the apex listed last.
pub fn make_family_simplex(params: &FamilyParams) -> LatticePolytope {
    let n = params.d() + 1;
    let mut points: Vec<LatticePoint> = (0..n)
        .map(|i| LatticePoint::unit(n, i).expect("index below dimension"))
        .collect();
    let mut apex = params.p().to_vec();
    apex.push(BigInt::one());
    points.push(LatticePoint::new(apex).expect("nonempty coordinates"));
    LatticePolytope::new(points).expect("points share a dimension")
}

/// The edge `[e_{d+1}, (p₁,…,p_d,1)]`, the only edge that can be
/// non-primitive; its lattice length is `gcd(p₁,…,p_d)`.
pub fn long_edge(params: &FamilyParams) -> (LatticePoint, LatticePoint) {
    let t = make_family_simplex(params);
    let pts = t.points();
    (pts[params.d()].clone(), pts[params.d() + 1].clone())
}

pub fn theorem_scope(params: &FamilyParams) -> TheoremScope {
    let mut reasons = Vec::new();
    if params.d() < 2 {
        reasons.push(ScopeViolation::DimensionBelowTwo);
    }
    for (i, p) in params.p()[..params.d() - 1].iter().enumerate() {
        if !p.is_positive() {
            reasons.push(ScopeViolation::NonPositive { index: i + 1 });
        }
    }
    let pd = params.last();
    if *pd < BigInt::from(2) {
        reasons.push(ScopeViolation::LastBelowTwo);
    }
    let alpha = params.alpha();
    if *pd < &alpha * &alpha - &alpha {
        reasons.push(ScopeViolation::BelowQuadraticBound);
    }
    TheoremScope {
        in_scope: reasons.is_empty(),
        reasons,
    }
}

/// `k+3` whenever `k` is defined, regardless of scope.
pub fn formula_ls_delta(params: &FamilyParams) -> Option<BigInt> {
    params.k().map(|k| k + 3)
}

/// `k+2` whenever `k` is defined, regardless of scope.
pub fn formula_ls_cube(params: &FamilyParams) -> Option<BigInt> {
    params.k().map(|k| k + 2)
}

/// `ls_Δ(T) = k+3`, for in-scope parameters only.
pub fn closed_form_ls_delta(params: &FamilyParams) -> Result<BigInt, FamilyError> {
    require_scope(params)?;
    formula_ls_delta(params).ok_or(FamilyError::UndefinedK)
}

/// `ls_□(T) = k+2`, for in-scope parameters only.
pub fn closed_form_ls_cube(params: &FamilyParams) -> Result<BigInt, FamilyError> {
    require_scope(params)?;
    formula_ls_cube(params).ok_or(FamilyError::UndefinedK)
}

fn require_scope(params: &FamilyParams) -> Result<(), FamilyError> {
    let scope = theorem_scope(params);
    if scope.in_scope() {
        Ok(())
    } else {
        Err(FamilyError::OutOfScope(scope))
    }
}

/// The unimodular matrix with rows `e₁,…,e_{d−1}`, `e_{d+1}` and
/// `(k+1,…,k+1, −1, p_d−α(k+1)−1)`, with zero translation.
///
/// In scope, it maps `T` into `(k+3)·Δ` after translating by the coordinate
/// minima, and into `[0,k+2]^{d+1}` after translating by `e_{d+1}`.
pub fn witness_matrix(params: &FamilyParams) -> Result<AffineUnimodularMap, FamilyError> {
    let k = params.k().ok_or(FamilyError::UndefinedK)?;
    let d = params.d();
    let n = d + 1;
    let unit = |i: usize| -> Vec<BigInt> {
        (0..n)
            .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
            .collect()
    };
    let mut rows: Vec<Vec<BigInt>> = (0..d - 1).map(unit).collect();
    rows.push(unit(d));
    let k1: BigInt = &k + 1;
    let mut last = vec![k1.clone(); d - 1];
    last.push(BigInt::from(-1));
    last.push(params.last() - params.alpha() * &k1 - 1);
    rows.push(last);
    Ok(AffineUnimodularMap::linear(IntMatrix::new(rows)?)?)
}

/// [`witness_matrix`] translated by `e_{d+1}`, which lands in `[0,k+2]^{d+1}`.
pub fn witness_cube_map(params: &FamilyParams) -> Result<AffineUnimodularMap, FamilyError> {
    let a = witness_matrix(params)?;
    let n = params.d() + 1;
    let mut t = vec![BigInt::zero(); n];
    t[n - 1] = BigInt::one();
    Ok(a.with_translation(t)?)
}

/// Outcome of a complete enumeration check of one of the direction lemmas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport {
    /// Width bound `k+2`.
    pub bound: BigInt,
    /// Zero-based index of the restricted coordinate `a_d`.
    pub coordinate: usize,
    /// Every direction the check examined, sign-normalized, in lexicographic
    /// order.
    pub directions: Vec<Direction>,
    pub violations: Vec<Direction>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn narrow_directions(
    params: &FamilyParams,
    budget: u64,
) -> Result<(BigInt, Vec<Direction>), FamilyError> {
    let bound = params.k().ok_or(FamilyError::UndefinedK)? + 2;
    let t = make_family_simplex(params);
    let dirs = directions_within_width(&t, &bound, budget)?;
    Ok((bound, dirs))
}

/// Every primitive `h` with `w_h(T) ≤ k+2` has `a_d ∈ {0, ±1}`.
pub fn check_lemma_ad_restriction(
    params: &FamilyParams,
    budget: u64,
) -> Result<LemmaReport, FamilyError> {
    let (bound, directions) = narrow_directions(params, budget)?;
    let coordinate = params.d() - 1;
    let violations = directions
        .iter()
        .filter(|h| h.coords()[coordinate].abs() > BigInt::one())
        .cloned()
        .collect();
    Ok(LemmaReport {
        bound,
        coordinate,
        directions,
        violations,
    })
}

/// Every primitive `h` with `a_d = ±1` and `w_h(T) ≤ k+2` has width exactly
/// `k+2`. The report lists only the directions with `a_d = ±1`.
pub fn check_lemma_forced_width(
    params: &FamilyParams,
    budget: u64,
) -> Result<LemmaReport, FamilyError> {
    let (bound, all) = narrow_directions(params, budget)?;
    let coordinate = params.d() - 1;
    let t = make_family_simplex(params);
    let directions: Vec<Direction> = all
        .into_iter()
        .filter(|h| h.coords()[coordinate].abs().is_one())
        .collect();
    let mut violations = Vec::new();
    for h in &directions {
        if width_in_direction(&t, h)? != bound {
            violations.push(h.clone());
        }
    }
    Ok(LemmaReport {
        bound,
        coordinate,
        directions,
        violations,
    })
}

/// Lattice width of `T`, computed rather than assumed.
pub fn family_width(params: &FamilyParams, budget: u64) -> Result<BigInt, FamilyError> {
    let t = make_family_simplex(params);
    Ok(lattice_width_with_budget(&t, budget)?.0)
}
