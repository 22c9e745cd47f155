//! Exact membership in the convex hull of a small point set.
//!
//! The hull is described by the equations of its affine hull together with
//! the facet inequalities of the full-dimensional projection onto a set of
//! coordinates that is injective on the affine hull. Facets are found by
//! brute force: every hyperplane through `r` affinely independent points
//! that leaves all points on one side.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::matrix::bareiss_det;
use super::point::{check_dim, dot, gcd_all};
use super::{GeometryError, IntMatrix, LatticePoint, LatticePolytope};

/// Default cap on bounding-box cells scanned by [`lattice_points`].
pub const DEFAULT_BOX_BUDGET: u64 = 10_000_000;

/// `a · x ≤ b` over the projected coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Inequality {
    normal: Vec<BigInt>,
    offset: BigInt,
}

#[derive(Clone, Debug)]
pub struct ConvexHull {
    dim: usize,
    /// `a · x = b` for every `(a, b)`.
    equations: Vec<(Vec<BigInt>, BigInt)>,
    /// Coordinates the facet inequalities are expressed in.
    projection: Vec<usize>,
    inequalities: Vec<Inequality>,
}

impl ConvexHull {
    pub fn new(points: &[LatticePoint]) -> Result<Self, GeometryError> {
        let dim = points.first().ok_or(GeometryError::EmptyPointSet)?.dim();
        for p in points {
            check_dim(dim, p.dim())?;
        }
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup();
        let base = &pts[0];

        if pts.len() == 1 {
            let equations = (0..dim)
                .map(|i| {
                    let mut a = vec![BigInt::zero(); dim];
                    a[i] = BigInt::one();
                    (a, base.coords()[i].clone())
                })
                .collect();
            return Ok(Self {
                dim,
                equations,
                projection: Vec::new(),
                inequalities: Vec::new(),
            });
        }

        let diffs = IntMatrix::new(
            pts[1..]
                .iter()
                .map(|p| p.sub(base))
                .collect::<Result<_, _>>()?,
        )?;
        let equations = diffs
            .integer_kernel()
            .into_iter()
            .map(|a| {
                let b = dot(&a, base.coords());
                (a, b)
            })
            .collect();
        let projection = diffs.pivot_columns();
        let projected: Vec<Vec<BigInt>> = pts
            .iter()
            .map(|p| projection.iter().map(|&c| p.coords()[c].clone()).collect())
            .collect();
        let inequalities = facet_inequalities(&projected, projection.len());
        Ok(Self {
            dim,
            equations,
            projection,
            inequalities,
        })
    }

    /// Dimension of the affine hull.
    pub fn affine_dim(&self) -> usize {
        self.projection.len()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim() == self.dim
    }

    /// Integer normals of the affine hull (empty when full-dimensional).
    pub fn affine_normals(&self) -> impl Iterator<Item = &[BigInt]> {
        self.equations.iter().map(|(a, _)| a.as_slice())
    }

    pub fn facet_count(&self) -> usize {
        self.inequalities.len()
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        if x.len() != self.dim {
            return false;
        }
        if self.equations.iter().any(|(a, b)| dot(a, x) != *b) {
            return false;
        }
        let y: Vec<BigInt> = self.projection.iter().map(|&c| x[c].clone()).collect();
        self.inequalities
            .iter()
            .all(|ineq| dot(&ineq.normal, &y) <= ineq.offset)
    }
}

/// Supporting hyperplanes of a full-dimensional point set in `ℤʳ`.
fn facet_inequalities(points: &[Vec<BigInt>], r: usize) -> Vec<Inequality> {
    let mut out = Vec::new();
    if r == 0 {
        return out;
    }
    for subset in Combinations::new(points.len(), r) {
        let origin = &points[subset[0]];
        let edges: Vec<Vec<BigInt>> = subset[1..]
            .iter()
            .map(|&i| points[i].iter().zip(origin).map(|(a, b)| a - b).collect())
            .collect();
        let normal = cofactor_normal(&edges, r);
        if normal.iter().all(Zero::is_zero) {
            continue;
        }
        let offset = dot(&normal, origin);
        let mut above = false;
        let mut below = false;
        for p in points {
            let v = dot(&normal, p);
            above |= v > offset;
            below |= v < offset;
        }
        let ineq = match (above, below) {
            (false, _) => Inequality { normal, offset },
            (true, false) => Inequality {
                normal: normal.iter().map(|c| -c).collect(),
                offset: -offset,
            },
            (true, true) => continue,
        };
        out.push(reduce(ineq));
    }
    out.sort();
    out.dedup();
    out
}

fn reduce(ineq: Inequality) -> Inequality {
    let g = gcd_all(&ineq.normal);
    if g.is_one() {
        return ineq;
    }
    // offset is an integer combination of the normal, so g divides it
    Inequality {
        normal: ineq.normal.iter().map(|c| c / &g).collect(),
        offset: ineq.offset / g,
    }
}

/// Vector orthogonal to the `r − 1` rows of `edges` in `ℤʳ` (generalized
/// cross product); zero iff the rows are dependent.
pub(crate) fn cofactor_normal(edges: &[Vec<BigInt>], r: usize) -> Vec<BigInt> {
    (0..r)
        .map(|j| {
            let minor: Vec<Vec<BigInt>> = edges
                .iter()
                .map(|e| {
                    e.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let d = bareiss_det(minor);
            if j % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect()
}

/// Lexicographic `k`-subsets of `0..n`.
pub(crate) struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        Self {
            n,
            current: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

/// Number of lattice points on the segment `[a, b]` minus one.
pub fn lattice_length(a: &LatticePoint, b: &LatticePoint) -> Result<BigInt, GeometryError> {
    Ok(gcd_all(&b.sub(a)?))
}

/// All lattice points of `P`, in lexicographic order.
pub fn lattice_points(
    p: &LatticePolytope,
    box_budget: u64,
) -> Result<Vec<LatticePoint>, GeometryError> {
    let hull = ConvexHull::new(p.points())?;
    let (lo, hi) = p.bounding_box();
    let cells = lo
        .iter()
        .zip(&hi)
        .fold(BigInt::one(), |acc, (a, b)| acc * (b - a + 1));
    if cells.to_u64().is_none_or(|c| c > box_budget) {
        return Err(GeometryError::BudgetExceeded {
            what: "lattice point scan",
            limit: box_budget,
        });
    }
    let mut out = Vec::new();
    let mut x = lo.clone();
    loop {
        if hull.contains(&x) {
            out.push(LatticePoint::new(x.clone())?);
        }
        // odometer, last coordinate fastest
        let mut i = x.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if x[i] < hi[i] {
                x[i] += 1;
                break;
            }
            x[i] = lo[i].clone();
        }
    }
}

/// Generating points that are not in the hull of the remaining ones, sorted.
pub fn vertices(p: &LatticePolytope) -> Result<Vec<LatticePoint>, GeometryError> {
    let pts = p.canonicalize().points().to_vec();
    if pts.len() == 1 {
        return Ok(pts);
    }
    let mut out = Vec::new();
    for (i, v) in pts.iter().enumerate() {
        let others: Vec<LatticePoint> = pts
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, q)| q.clone())
            .collect();
        if !ConvexHull::new(&others)?.contains(v.coords()) {
            out.push(v.clone());
        }
    }
    Ok(out)
}

/// `true` iff the only lattice points of `P` are its vertices.
pub fn is_empty_polytope(p: &LatticePolytope, box_budget: u64) -> Result<bool, GeometryError> {
    let points = lattice_points(p, box_budget)?;
    let verts = vertices(p)?;
    Ok(points == verts)
}

/// Dimension of the affine hull of `P`.
pub fn affine_dimension(p: &LatticePolytope) -> Result<usize, GeometryError> {
    Ok(ConvexHull::new(p.points())?.affine_dim())
}

pub fn is_full_dimensional(p: &LatticePolytope) -> Result<bool, GeometryError> {
    Ok(affine_dimension(p)? == p.dim())
}
