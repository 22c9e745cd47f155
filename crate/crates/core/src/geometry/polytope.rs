use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::point::{check_dim, dot, LatticePoint};
use super::{Direction, GeometryError};

/// Convex hull of a nonempty finite set of lattice points.
///
/// The generating points need not be the vertex set: every quantity computed
/// here is an extremum of a linear functional, which is attained on any
/// generating set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticePolytope {
    points: Vec<LatticePoint>,
    dim: usize,
}

impl LatticePolytope {
    pub fn new(points: Vec<LatticePoint>) -> Result<Self, GeometryError> {
        let dim = points.first().ok_or(GeometryError::EmptyPointSet)?.dim();
        for p in &points {
            check_dim(dim, p.dim())?;
        }
        Ok(Self { points, dim })
    }

    pub fn from_i64(points: &[&[i64]]) -> Result<Self, GeometryError> {
        Self::new(
            points
                .iter()
                .map(|p| LatticePoint::from_i64(p))
                .collect::<Result<_, _>>()?,
        )
    }

    /// `conv{0, e₁, …, eₙ}` scaled by `factor`.
    pub fn standard_simplex(dim: usize, factor: i64) -> Result<Self, GeometryError> {
        let mut points = vec![LatticePoint::origin(dim)?];
        for i in 0..dim {
            let mut c = vec![BigInt::zero(); dim];
            c[i] = BigInt::from(factor);
            points.push(LatticePoint::new(c)?);
        }
        Self::new(points)
    }

    /// The `2ⁿ` vertices of `[0,1]ⁿ`.
    pub fn unit_cube(dim: usize) -> Result<Self, GeometryError> {
        if dim == 0 || dim >= usize::BITS as usize {
            return Err(GeometryError::ZeroDimension);
        }
        let points = (0..1usize << dim)
            .map(|mask| {
                LatticePoint::new((0..dim).map(|i| BigInt::from((mask >> i) & 1)).collect())
            })
            .collect::<Result<_, _>>()?;
        Self::new(points)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    /// Sorted copy with duplicate points removed.
    pub fn canonicalize(&self) -> Self {
        let mut points = self.points.clone();
        points.sort();
        points.dedup();
        Self {
            points,
            dim: self.dim,
        }
    }

    pub fn translate(&self, t: &[BigInt]) -> Result<Self, GeometryError> {
        Ok(Self {
            points: self
                .points
                .iter()
                .map(|p| p.translate(t))
                .collect::<Result<_, _>>()?,
            dim: self.dim,
        })
    }

    /// Values of `⟨h, x⟩` over the generating points, in order.
    pub fn functional_values(&self, h: &[BigInt]) -> Result<Vec<BigInt>, GeometryError> {
        check_dim(self.dim, h.len())?;
        Ok(self.points.iter().map(|p| dot(p.coords(), h)).collect())
    }

    /// `(min, max)` of `⟨h, x⟩` over the polytope.
    pub fn functional_range(&self, h: &[BigInt]) -> Result<(BigInt, BigInt), GeometryError> {
        let values = self.functional_values(h)?;
        let min = values.iter().min().cloned().unwrap_or_default();
        let max = values.iter().max().cloned().unwrap_or_default();
        Ok((min, max))
    }

    /// Per-coordinate minima and maxima.
    pub fn bounding_box(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        let mut lo = self.points[0].coords().to_vec();
        let mut hi = lo.clone();
        for p in &self.points[1..] {
            for (i, c) in p.coords().iter().enumerate() {
                if *c < lo[i] {
                    lo[i] = c.clone();
                }
                if *c > hi[i] {
                    hi[i] = c.clone();
                }
            }
        }
        (lo, hi)
    }

    /// Whether every point lies in `l·Δ = {x ≥ 0, x₁+⋯+xₙ ≤ l}`.
    pub fn fits_in_simplex_dilate(&self, l: &BigInt) -> bool {
        self.points.iter().all(|p| {
            p.coords().iter().all(|c| !c.is_negative())
                && p.coords().iter().sum::<BigInt>() <= *l
        })
    }

    /// Whether every point lies in `[0, l]ⁿ`.
    pub fn fits_in_cube(&self, l: &BigInt) -> bool {
        self.points
            .iter()
            .all(|p| p.coords().iter().all(|c| !c.is_negative() && c <= l))
    }
}

/// `w_h(P) = max ⟨h,x⟩ − min ⟨h,x⟩` over `x ∈ P`.
pub fn width_in_direction(p: &LatticePolytope, h: &Direction) -> Result<BigInt, GeometryError> {
    let (min, max) = p.functional_range(h.coords())?;
    Ok(max - min)
}

/// Smallest `l` with `P - m ⊆ l·Δ`, where `m` is the vector of coordinate
/// minima: the maximal coordinate sum minus the sum of the coordinate minima.
pub fn l1(p: &LatticePolytope) -> BigInt {
    let (lo, _) = p.bounding_box();
    let max_sum = p
        .points()
        .iter()
        .map(|x| x.coords().iter().sum::<BigInt>())
        .max()
        .unwrap_or_default();
    max_sum - lo.iter().sum::<BigInt>()
}

/// Largest coordinate width, i.e. the smallest `l` with `P - m ⊆ [0, l]ⁿ`.
pub fn max_coordinate_width(p: &LatticePolytope) -> BigInt {
    let (lo, hi) = p.bounding_box();
    lo.iter()
        .zip(&hi)
        .map(|(a, b)| b - a)
        .max()
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t13() -> LatticePolytope {
        LatticePolytope::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 3, 1]]).unwrap()
    }

    fn dir(c: &[i64]) -> Direction {
        Direction::from_i64(c).unwrap()
    }

    #[test]
    fn width_examples() {
        let simplex = LatticePolytope::standard_simplex(3, 1).unwrap();
        assert_eq!(width_in_direction(&simplex, &dir(&[1, 1, 1])).unwrap(), 1.into());
        assert_eq!(width_in_direction(&t13(), &dir(&[0, 0, 1])).unwrap(), 1.into());
        assert_eq!(width_in_direction(&t13(), &dir(&[1, -1, 1])).unwrap(), 2.into());
    }

    #[test]
    fn width_dimension_mismatch() {
        assert!(matches!(
            width_in_direction(&t13(), &dir(&[1, 1])),
            Err(GeometryError::DimensionMismatch { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn l1_examples() {
        assert_eq!(l1(&LatticePolytope::standard_simplex(3, 1).unwrap()), 1.into());
        assert_eq!(l1(&t13()), 5.into());
        assert_eq!(l1(&LatticePolytope::from_i64(&[&[7, -2]]).unwrap()), 0.into());
    }

    #[test]
    fn mixed_dimensions_rejected() {
        assert!(LatticePolytope::from_i64(&[&[1, 2], &[1, 2, 3]]).is_err());
        assert!(matches!(
            LatticePolytope::new(vec![]),
            Err(GeometryError::EmptyPointSet)
        ));
    }

    #[test]
    fn canonicalize_removes_duplicates() {
        let p = LatticePolytope::from_i64(&[&[1, 0], &[0, 0], &[1, 0]]).unwrap();
        let c = p.canonicalize();
        assert_eq!(c.points().len(), 2);
        assert_eq!(c.points()[0], LatticePoint::from_i64(&[0, 0]).unwrap());
    }

    #[test]
    fn containment_checks() {
        let s = LatticePolytope::standard_simplex(2, 3).unwrap();
        assert!(s.fits_in_simplex_dilate(&3.into()));
        assert!(!s.fits_in_simplex_dilate(&2.into()));
        assert!(s.fits_in_cube(&3.into()));
        assert_eq!(max_coordinate_width(&s), 3.into());
    }
}
