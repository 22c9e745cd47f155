use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::point::check_dim;
use super::{Direction, GeometryError, IntMatrix, LatticePoint, LatticePolytope};

/// `x ↦ A x + t` with `A ∈ GL(n, ℤ)` and `t ∈ ℤⁿ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineUnimodularMap {
    matrix: IntMatrix,
    translation: Vec<BigInt>,
}

impl AffineUnimodularMap {
    /// Fails unless `matrix` is square with determinant `±1`.
    pub fn new(matrix: IntMatrix, translation: Vec<BigInt>) -> Result<Self, GeometryError> {
        let det = matrix.determinant()?;
        check_dim(matrix.ncols(), translation.len())?;
        if det != BigInt::from(1) && det != BigInt::from(-1) {
            return Err(GeometryError::NotUnimodular { det });
        }
        Ok(Self {
            matrix,
            translation,
        })
    }

    pub fn linear(matrix: IntMatrix) -> Result<Self, GeometryError> {
        let n = matrix.ncols();
        Self::new(matrix, vec![BigInt::zero(); n])
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: IntMatrix::identity(dim),
            translation: vec![BigInt::zero(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn translation(&self) -> &[BigInt] {
        &self.translation
    }

    pub fn with_translation(&self, translation: Vec<BigInt>) -> Result<Self, GeometryError> {
        check_dim(self.dim(), translation.len())?;
        Ok(Self {
            matrix: self.matrix.clone(),
            translation,
        })
    }

    pub fn apply_point(&self, x: &LatticePoint) -> Result<LatticePoint, GeometryError> {
        let mut y = self.matrix.mul_vec(x.coords())?;
        for (a, b) in y.iter_mut().zip(&self.translation) {
            *a += b;
        }
        LatticePoint::new(y)
    }
}

impl fmt::Display for AffineUnimodularMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.matrix)?;
        let t: Vec<String> = self.translation.iter().map(ToString::to_string).collect();
        write!(f, "+ ({})", t.join(", "))
    }
}

/// Image of `P` under `L`, point by point.
pub fn apply_map(
    l: &AffineUnimodularMap,
    p: &LatticePolytope,
) -> Result<LatticePolytope, GeometryError> {
    check_dim(l.dim(), p.dim())?;
    LatticePolytope::new(
        p.points()
            .iter()
            .map(|x| l.apply_point(x))
            .collect::<Result<_, _>>()?,
    )
}

/// `Aᵀ h`, so that `w_h(A P) = w_{Aᵀh}(P)`.
///
/// The result is nonzero whenever `A` is nonsingular; a singular `A` may send
/// `h` to zero, which is reported as [`GeometryError::ZeroDirection`].
pub fn pullback_direction(a: &IntMatrix, h: &Direction) -> Result<Direction, GeometryError> {
    if !a.is_square() {
        return Err(GeometryError::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    Direction::new(a.transpose_mul_vec(h.coords())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::width_in_direction;

    fn a_t13() -> IntMatrix {
        IntMatrix::from_i64(&[&[1, 0, 0], &[0, 0, 1], &[1, -1, 1]]).unwrap()
    }

    fn t13() -> LatticePolytope {
        LatticePolytope::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 3, 1]]).unwrap()
    }

    #[test]
    fn identity_map() {
        assert_eq!(apply_map(&AffineUnimodularMap::identity(3), &t13()).unwrap(), t13());
    }

    #[test]
    fn image_of_t13() {
        let map = AffineUnimodularMap::linear(a_t13()).unwrap();
        let image = apply_map(&map, &t13()).unwrap();
        let want =
            LatticePolytope::from_i64(&[&[1, 0, 1], &[0, 0, -1], &[0, 1, 1], &[1, 1, -1]])
                .unwrap();
        assert_eq!(image, want);

        let shifted = map.with_translation(vec![0.into(), 0.into(), 1.into()]).unwrap();
        let image = apply_map(&shifted, &t13()).unwrap();
        assert!(image.fits_in_cube(&2.into()));
        assert!(!image.fits_in_cube(&1.into()));
    }

    #[test]
    fn singular_matrix_rejected() {
        let m = IntMatrix::from_i64(&[&[2, 0], &[0, 1]]).unwrap();
        assert!(matches!(
            AffineUnimodularMap::linear(m),
            Err(GeometryError::NotUnimodular { .. })
        ));
    }

    #[test]
    fn pullback_examples() {
        let h = Direction::from_i64(&[3, -1, 2]).unwrap();
        assert_eq!(pullback_direction(&IntMatrix::identity(3), &h).unwrap(), h);
        let e3 = Direction::from_i64(&[0, 0, 1]).unwrap();
        assert_eq!(
            pullback_direction(&a_t13(), &e3).unwrap(),
            Direction::from_i64(&[1, -1, 1]).unwrap()
        );
        let image = apply_map(&AffineUnimodularMap::linear(a_t13()).unwrap(), &t13()).unwrap();
        assert_eq!(
            width_in_direction(&image, &e3).unwrap(),
            width_in_direction(&t13(), &pullback_direction(&a_t13(), &e3).unwrap()).unwrap()
        );
    }
}
