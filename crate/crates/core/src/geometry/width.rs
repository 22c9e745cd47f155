//! Complete enumeration of narrow directions.
//!
//! Pick `n` linearly independent difference vectors `u₁,…,uₙ` of points of
//! `P` and let `U` be the matrix with rows `uᵢ`. Every `h` with
//! `w_h(P) ≤ B` satisfies `|⟨h,uᵢ⟩| ≤ B`, so `h = U⁻¹z` for some integer
//! `z ∈ [−B,B]ⁿ`. Scanning that box and keeping the integral, primitive
//! solutions of width at most `B` lists every such direction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::hull::{Combinations, ConvexHull};
use super::point::gcd_all;
use super::{Direction, GeometryError, IntMatrix, LatticePolytope};

/// Default cap on dual-box cells scanned by one enumeration.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 100_000_000;

/// Above this many candidate bases, fall back to the first independent one.
const BASIS_SEARCH_LIMIT: usize = 20_000;

/// Inverse data of the chosen edge basis: `U⁻¹ = adj(U) / det(U)`.
struct DualBox {
    adj: IntMatrix,
    det: BigInt,
}

impl DualBox {
    fn new(p: &LatticePolytope) -> Result<Self, GeometryError> {
        let canon = p.canonicalize();
        let pts = canon.points();
        let n = p.dim();
        let mut diffs: Vec<Vec<BigInt>> = Vec::new();
        for (i, a) in pts.iter().enumerate() {
            for b in &pts[i + 1..] {
                diffs.push(b.sub(a)?);
            }
        }
        let mut best: Option<(BigInt, Vec<usize>)> = None;
        let exhaustive = binomial(diffs.len(), n) <= BASIS_SEARCH_LIMIT;
        for subset in Combinations::new(diffs.len(), n) {
            let rows: Vec<Vec<BigInt>> = subset.iter().map(|&i| diffs[i].clone()).collect();
            let det = IntMatrix::new(rows)?.determinant()?.abs();
            if det.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(d, _)| det < *d) {
                best = Some((det, subset));
            }
            if !exhaustive || best.as_ref().is_some_and(|(d, _)| d.is_one()) {
                break;
            }
        }
        let (_, subset) = best.ok_or(GeometryError::Degenerate)?;
        let u = IntMatrix::new(subset.iter().map(|&i| diffs[i].clone()).collect())?;
        Ok(Self {
            adj: u.adjugate()?,
            det: u.determinant()?,
        })
    }

    /// Calls `f` with every integral `h = U⁻¹z`, `z ∈ [−B,B]ⁿ ∖ {0}`, whose
    /// first nonzero coordinate is positive.
    fn for_each_solution(
        &self,
        bound: &BigInt,
        budget: u64,
        mut f: impl FnMut(Vec<BigInt>),
    ) -> Result<(), GeometryError> {
        let n = self.adj.ncols();
        let side: BigInt = bound * 2 + 1;
        let cells = num_traits::pow(side, n);
        if cells.to_u64().is_none_or(|c| c > budget) {
            return Err(GeometryError::BudgetExceeded {
                what: "dual-box enumeration",
                limit: budget,
            });
        }
        if let Some(small) = SmallBox::new(&self.adj, &self.det, bound) {
            small.for_each_solution(|h| f(h.iter().map(|&x| BigInt::from(x)).collect()));
            return Ok(());
        }
        let lo = -bound;
        let mut z = vec![lo.clone(); n];
        loop {
            let v = self.adj.mul_vec(&z)?;
            if v.iter().all(|x| x.is_multiple_of(&self.det)) {
                let h: Vec<BigInt> = v.iter().map(|x| x / &self.det).collect();
                if h.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_positive) {
                    f(h);
                }
            }
            let mut i = n;
            loop {
                if i == 0 {
                    return Ok(());
                }
                i -= 1;
                if z[i] < *bound {
                    z[i] += 1;
                    break;
                }
                z[i] = lo.clone();
            }
        }
    }
}

/// Machine-integer version of the box scan, used when no intermediate value
/// can leave `i64`.
struct SmallBox {
    adj: Vec<Vec<i64>>,
    det: i64,
    bound: i64,
}

impl SmallBox {
    fn new(adj: &IntMatrix, det: &BigInt, bound: &BigInt) -> Option<Self> {
        let n = adj.ncols() as i64;
        let bound = bound.to_i64()?;
        let det = det.to_i64()?;
        let adj: Vec<Vec<i64>> = adj
            .rows()
            .iter()
            .map(|r| r.iter().map(ToPrimitive::to_i64).collect::<Option<Vec<_>>>())
            .collect::<Option<_>>()?;
        let max_entry = adj.iter().flatten().map(|x| x.unsigned_abs()).max()?;
        let limit = (i64::MAX as u64) / 4;
        let worst = max_entry
            .checked_mul(bound.unsigned_abs())?
            .checked_mul(n.unsigned_abs())?;
        (worst < limit).then_some(Self { adj, det, bound })
    }

    fn for_each_solution(&self, mut f: impl FnMut(&[i64])) {
        let n = self.adj.len();
        let mut z = vec![-self.bound; n];
        let mut v = vec![0i64; n];
        let mut h = vec![0i64; n];
        loop {
            let mut integral = true;
            for (vi, row) in v.iter_mut().zip(&self.adj) {
                *vi = row.iter().zip(&z).map(|(a, b)| a * b).sum();
                if *vi % self.det != 0 {
                    integral = false;
                    break;
                }
            }
            if integral {
                for (hi, vi) in h.iter_mut().zip(&v) {
                    *hi = vi / self.det;
                }
                if h.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0) {
                    f(&h);
                }
            }
            let mut i = n;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                if z[i] < self.bound {
                    z[i] += 1;
                    break;
                }
                z[i] = -self.bound;
            }
        }
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Every primitive `h` with `w_h(P) ≤ bound`, normalized so that its first
/// nonzero coordinate is positive, in lexicographic order.
///
/// `P` must be full-dimensional.
pub fn directions_within_width(
    p: &LatticePolytope,
    bound: &BigInt,
    budget: u64,
) -> Result<Vec<Direction>, GeometryError> {
    if bound.is_negative() {
        return Ok(Vec::new());
    }
    let dual = DualBox::new(p)?;
    let mut out = Vec::new();
    dual.for_each_solution(bound, budget, |h| {
        if gcd_all(&h).is_one() {
            let (min, max) = p
                .functional_range(&h)
                .expect("direction has the polytope's dimension");
            if max - min <= *bound {
                out.push(Direction::new(h).expect("nonzero by construction"));
            }
        }
    })?;
    out.sort();
    Ok(out)
}

/// Minimal width and all primitive sign-normalized directions attaining it,
/// in lexicographic order. Degenerate polytopes have width zero, attained
/// by the primitive normals of their affine hull.
pub fn width_minimizers(
    p: &LatticePolytope,
    budget: u64,
) -> Result<(BigInt, Vec<Direction>), GeometryError> {
    let hull = ConvexHull::new(p.points())?;
    if !hull.is_full_dimensional() {
        let mut normals: Vec<Direction> = hull
            .affine_normals()
            .map(|a| Direction::new(a.to_vec()).map(|d| d.normalized()))
            .collect::<Result<_, _>>()?;
        normals.sort();
        normals.dedup();
        return Ok((BigInt::zero(), normals));
    }
    // the coordinate directions give an attained upper bound
    let start = (0..p.dim())
        .map(|i| {
            let e = Direction::unit(p.dim(), i)?;
            super::width_in_direction(p, &e)
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .min()
        .expect("dimension is positive");
    let candidates = directions_within_width(p, &start, budget)?;
    let widths: Vec<BigInt> = candidates
        .iter()
        .map(|h| super::width_in_direction(p, h))
        .collect::<Result<_, _>>()?;
    let best = widths.iter().min().cloned().unwrap_or(start);
    let minimizers = candidates
        .into_iter()
        .zip(widths)
        .filter(|(_, w)| *w == best)
        .map(|(h, _)| h)
        .collect();
    Ok((best, minimizers))
}

/// Lattice width of `P` with the lexicographically smallest sign-normalized
/// primitive direction attaining it.
pub fn lattice_width(p: &LatticePolytope) -> Result<(BigInt, Direction), GeometryError> {
    lattice_width_with_budget(p, DEFAULT_ENUMERATION_BUDGET)
}

pub fn lattice_width_with_budget(
    p: &LatticePolytope,
    budget: u64,
) -> Result<(BigInt, Direction), GeometryError> {
    let (w, dirs) = width_minimizers(p, budget)?;
    let first = dirs.into_iter().next().ok_or(GeometryError::Degenerate)?;
    Ok((w, first))
}
