//! Dense integer matrices with exact arithmetic.

#![allow(clippy::needless_range_loop)]

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::point::gcd_all;
use super::GeometryError;

/// Dense integer matrix stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: Vec<Vec<BigInt>>,
    cols: usize,
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self, GeometryError> {
        let cols = rows.first().map_or(0, Vec::len);
        for r in &rows {
            if r.len() != cols {
                return Err(GeometryError::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
        }
        Ok(Self { rows, cols })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self, GeometryError> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        Self { rows, cols: n }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.cols
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.rows[i]
    }

    pub fn into_rows(self) -> Vec<Vec<BigInt>> {
        self.rows
    }

    pub fn transpose(&self) -> Self {
        let rows = (0..self.cols)
            .map(|j| self.rows.iter().map(|r| r[j].clone()).collect())
            .collect();
        Self {
            rows,
            cols: self.nrows(),
        }
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>, GeometryError> {
        if v.len() != self.cols {
            return Err(GeometryError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(self
            .rows
            .iter()
            .map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `Aᵀ v`.
    pub fn transpose_mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>, GeometryError> {
        if v.len() != self.nrows() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.nrows(),
                found: v.len(),
            });
        }
        let mut out = vec![BigInt::zero(); self.cols];
        for (r, c) in self.rows.iter().zip(v) {
            for (o, a) in out.iter_mut().zip(r) {
                *o += a * c;
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, GeometryError> {
        if self.cols != other.nrows() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.cols,
                found: other.nrows(),
            });
        }
        let t = other.transpose();
        let rows = self
            .rows
            .iter()
            .map(|r| {
                t.rows
                    .iter()
                    .map(|c| r.iter().zip(c).map(|(a, b)| a * b).sum())
                    .collect()
            })
            .collect();
        Ok(Self {
            rows,
            cols: other.cols,
        })
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt, GeometryError> {
        if !self.is_square() {
            return Err(GeometryError::NotSquare {
                rows: self.nrows(),
                cols: self.cols,
            });
        }
        Ok(bareiss_det(self.rows.clone()))
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant()
            .map(|d| d.abs().is_one())
            .unwrap_or(false)
    }

    /// Classical adjoint, so that `A · adj(A) = det(A) · I`.
    pub fn adjugate(&self) -> Result<Self, GeometryError> {
        if !self.is_square() {
            return Err(GeometryError::NotSquare {
                rows: self.nrows(),
                cols: self.cols,
            });
        }
        let n = self.cols;
        if n == 1 {
            return Ok(Self::identity(1));
        }
        let mut adj = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let minor: Vec<Vec<BigInt>> = self
                    .rows
                    .iter()
                    .enumerate()
                    .filter(|&(r, _)| r != i)
                    .map(|(_, row)| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let cof = bareiss_det(minor);
                // adj is the transposed cofactor matrix
                adj[j][i] = if (i + j) % 2 == 0 { cof } else { -cof };
            }
        }
        Ok(Self { rows: adj, cols: n })
    }

    pub fn rank(&self) -> usize {
        rref(&self.rows, self.cols).1.len()
    }

    /// Primitive integer basis of `{x : A x = 0}`, one vector per free column.
    pub fn integer_kernel(&self) -> Vec<Vec<BigInt>> {
        let (reduced, pivots) = rref(&self.rows, self.cols);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![BigRational::zero(); self.cols];
                v[f] = BigRational::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -reduced[r][f].clone();
                }
                primitive_integer_multiple(&v)
            })
            .collect()
    }

    /// Indices of a maximal set of linearly independent columns, in increasing
    /// order.
    pub fn pivot_columns(&self) -> Vec<usize> {
        rref(&self.rows, self.cols).1
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = r.iter().map(ToString::to_string).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

pub(crate) fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Reduced row echelon form over ℚ; returns the nonzero rows and pivot columns.
fn rref(rows: &[Vec<BigInt>], cols: usize) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in 0..cols {
                    let delta = &factor * &m[row][c];
                    m[r][c] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    m.truncate(row);
    (m, pivots)
}

fn primitive_integer_multiple(v: &[BigRational]) -> Vec<BigInt> {
    let denom = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&denom / x.denom())).collect();
    let g = gcd_all(&ints);
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(rows).unwrap()
    }

    #[test]
    fn determinant_small() {
        assert_eq!(m(&[&[2]]).determinant().unwrap(), BigInt::from(2));
        assert_eq!(
            m(&[&[1, 0, 0], &[0, 0, 1], &[1, -1, 1]]).determinant().unwrap(),
            BigInt::from(1)
        );
        assert_eq!(
            m(&[&[0, 1], &[1, 0]]).determinant().unwrap(),
            BigInt::from(-1)
        );
        assert_eq!(
            m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]).determinant().unwrap(),
            BigInt::zero()
        );
        assert_eq!(
            m(&[&[0, 2, 1], &[3, 0, 0], &[1, 1, 5]]).determinant().unwrap(),
            BigInt::from(-27)
        );
    }

    #[test]
    fn adjugate_identity() {
        let a = m(&[&[0, 2, 1], &[3, 0, 0], &[1, 1, 5]]);
        let det = a.determinant().unwrap();
        let prod = a.mul(&a.adjugate().unwrap()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { det.clone() } else { BigInt::zero() };
                assert_eq!(prod.row(i)[j], want);
            }
        }
    }

    #[test]
    fn kernel_and_rank() {
        let a = m(&[&[1, 1, 0], &[2, 2, 0]]);
        assert_eq!(a.rank(), 1);
        let ker = a.integer_kernel();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(a.mul_vec(v).unwrap().iter().all(Zero::is_zero));
        }
        assert_eq!(a.pivot_columns(), vec![0]);
    }

    #[test]
    fn non_square_rejected() {
        assert!(matches!(
            m(&[&[1, 2]]).determinant(),
            Err(GeometryError::NotSquare { .. })
        ));
    }
}
