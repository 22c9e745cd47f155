use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::GeometryError;

/// A point of the integer lattice `ℤⁿ`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePoint {
    coords: Vec<BigInt>,
}

impl LatticePoint {
    pub fn new(coords: Vec<BigInt>) -> Result<Self, GeometryError> {
        if coords.is_empty() {
            return Err(GeometryError::ZeroDimension);
        }
        Ok(Self { coords })
    }

    pub fn from_i64(coords: &[i64]) -> Result<Self, GeometryError> {
        Self::new(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The origin of `ℤⁿ`.
    pub fn origin(dim: usize) -> Result<Self, GeometryError> {
        Self::new(vec![BigInt::zero(); dim])
    }

    /// The `i`-th standard basis vector of `ℤⁿ` (zero-based).
    pub fn unit(dim: usize, i: usize) -> Result<Self, GeometryError> {
        let mut coords = vec![BigInt::zero(); dim];
        *coords.get_mut(i).ok_or(GeometryError::DimensionMismatch {
            expected: dim,
            found: i + 1,
        })? = BigInt::from(1);
        Self::new(coords)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.coords
    }

    pub fn dot(&self, h: &Direction) -> Result<BigInt, GeometryError> {
        check_dim(self.dim(), h.dim())?;
        Ok(dot(&self.coords, h.coords()))
    }

    pub fn translate(&self, t: &[BigInt]) -> Result<Self, GeometryError> {
        check_dim(self.dim(), t.len())?;
        Ok(Self {
            coords: self.coords.iter().zip(t).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Vec<BigInt>, GeometryError> {
        check_dim(self.dim(), other.dim())?;
        Ok(self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect())
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.coords)
    }
}

/// A nonzero integer vector, read as the linear functional `x ↦ ⟨h, x⟩`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Direction {
    coords: Vec<BigInt>,
}

impl Direction {
    pub fn new(coords: Vec<BigInt>) -> Result<Self, GeometryError> {
        if coords.is_empty() {
            return Err(GeometryError::ZeroDimension);
        }
        if coords.iter().all(Zero::is_zero) {
            return Err(GeometryError::ZeroDirection);
        }
        Ok(Self { coords })
    }

    pub fn from_i64(coords: &[i64]) -> Result<Self, GeometryError> {
        Self::new(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn unit(dim: usize, i: usize) -> Result<Self, GeometryError> {
        Self::new(LatticePoint::unit(dim, i)?.into_coords())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.coords
    }

    /// gcd of the absolute values of the coordinates; always positive.
    pub fn content(&self) -> BigInt {
        gcd_all(&self.coords)
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == BigInt::from(1)
    }

    /// Divides out the content and flips the sign so that the first nonzero
    /// coordinate is positive.
    pub fn normalized(&self) -> Self {
        let g = self.content();
        let flip = self
            .coords
            .iter()
            .find(|c| !c.is_zero())
            .is_some_and(Signed::is_negative);
        let coords = self
            .coords
            .iter()
            .map(|c| if flip { -(c / &g) } else { c / &g })
            .collect();
        Self { coords }
    }

    pub fn is_sign_normalized(&self) -> bool {
        self.coords
            .iter()
            .find(|c| !c.is_zero())
            .is_some_and(Signed::is_positive)
    }

    pub fn neg(&self) -> Self {
        Self {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.coords)
    }
}

/// `true` iff the gcd of the coordinates of `h` is one.
pub fn is_primitive(h: &Direction) -> bool {
    h.is_primitive()
}

pub(crate) fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn gcd_all(values: &[BigInt]) -> BigInt {
    values
        .iter()
        .fold(BigInt::zero(), |acc, v| acc.gcd(v))
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<(), GeometryError> {
    if expected == found {
        Ok(())
    } else {
        Err(GeometryError::DimensionMismatch { expected, found })
    }
}

fn write_tuple(f: &mut fmt::Formatter<'_>, coords: &[BigInt]) -> fmt::Result {
    write!(f, "(")?;
    for (i, c) in coords.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{c}")?;
    }
    write!(f, ")")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitivity() {
        assert!(is_primitive(&Direction::from_i64(&[1, 0, 0]).unwrap()));
        assert!(!is_primitive(&Direction::from_i64(&[2, 4, 6]).unwrap()));
        let p = 5;
        assert!(is_primitive(&Direction::from_i64(&[p - 1, -1, p - 1]).unwrap()));
        assert!(!is_primitive(&Direction::from_i64(&[0, -3]).unwrap()));
    }

    #[test]
    fn zero_direction_rejected() {
        assert!(matches!(
            Direction::from_i64(&[0, 0]),
            Err(GeometryError::ZeroDirection)
        ));
        assert!(matches!(
            LatticePoint::from_i64(&[]),
            Err(GeometryError::ZeroDimension)
        ));
    }

    #[test]
    fn normalization() {
        let h = Direction::from_i64(&[0, -4, 6]).unwrap().normalized();
        assert_eq!(h, Direction::from_i64(&[0, 2, -3]).unwrap());
        assert!(h.is_sign_normalized());
        assert!(!h.neg().is_sign_normalized());
    }
}
