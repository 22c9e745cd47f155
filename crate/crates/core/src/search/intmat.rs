//! Machine-integer determinants for the small row sets the search assembles.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::geometry::Combinations;

/// Determinant of a square `i64` matrix; falls back to big integers if an
/// intermediate Bareiss value leaves `i128`.
pub(crate) fn det(rows: &[&[i64]]) -> BigInt {
    match det_i128(rows) {
        Some(d) => BigInt::from(d),
        None => det_big(rows),
    }
}

fn det_i128(rows: &[&[i64]]) -> Option<i128> {
    let n = rows.len();
    if n == 0 {
        return Some(1);
    }
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| i128::from(x)).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let r = (k + 1..n).find(|&r| m[r][k] != 0)?;
            m.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = m[i][j].checked_mul(m[k][k])?;
                let b = m[i][k].checked_mul(m[k][j])?;
                m[i][j] = a.checked_sub(b)? / prev;
            }
        }
        prev = m[k][k];
    }
    Some(sign * m[n - 1][n - 1])
}

fn det_big(rows: &[&[i64]]) -> BigInt {
    let n = rows.len();
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for k in 0..n.saturating_sub(1) {
        if m[k][k] == BigInt::from(0) {
            match (k + 1..n).find(|&r| m[r][k] != BigInt::from(0)) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::from(0),
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

/// Whether the rows extend to a basis of `ℤⁿ`, i.e. whether the gcd of
/// their maximal minors is one.
pub(crate) fn extends_to_basis(rows: &[&[i64]], n: usize) -> bool {
    let m = rows.len();
    if m == 0 {
        return true;
    }
    let mut g = BigInt::from(0);
    let mut sub: Vec<Vec<i64>> = vec![vec![0; m]; m];
    for cols in Combinations::new(n, m) {
        for (r, row) in rows.iter().enumerate() {
            for (c, &col) in cols.iter().enumerate() {
                sub[r][c] = row[col];
            }
        }
        let refs: Vec<&[i64]> = sub.iter().map(Vec::as_slice).collect();
        g = g.gcd(&det(&refs));
        if g.to_i64() == Some(1) {
            return true;
        }
    }
    false
}
