use latsize::geometry::{
    apply_map, l1, lattice_width, pullback_direction, width_in_direction, AffineUnimodularMap,
    Direction, IntMatrix, LatticePolytope,
};
use num_bigint::BigInt;
use proptest::prelude::*;

/// Unimodular matrix with entries in `[−5, 5]`, built from signed
/// permutations and elementary row additions that keep entries in range.
fn unimodular(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (
        Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
        prop::collection::vec(prop::bool::ANY, n),
        prop::collection::vec((0..n, 0..n, -2i64..=2), 0..12),
    )
        .prop_map(move |(perm, signs, ops)| {
            let mut m = vec![vec![0i64; n]; n];
            for (i, &j) in perm.iter().enumerate() {
                m[i][j] = if signs[i] { -1 } else { 1 };
            }
            for (dst, src, c) in ops {
                if dst == src {
                    continue;
                }
                let next: Vec<i64> = (0..n).map(|k| m[dst][k] + c * m[src][k]).collect();
                if next.iter().all(|x| x.abs() <= 5) {
                    m[dst] = next;
                }
            }
            m
        })
}

fn points(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-5i64..=5, n), 1..7)
}

fn direction(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-5i64..=5, n).prop_filter("nonzero", |h| h.iter().any(|&x| x != 0))
}

fn instance() -> impl Strategy<Value = (Vec<Vec<i64>>, Vec<Vec<i64>>, Vec<i64>)> {
    (2usize..=4).prop_flat_map(|n| (unimodular(n), points(n), direction(n)))
}

fn poly(pts: &[Vec<i64>]) -> LatticePolytope {
    let refs: Vec<&[i64]> = pts.iter().map(Vec::as_slice).collect();
    LatticePolytope::from_i64(&refs).unwrap()
}

fn matrix(rows: &[Vec<i64>]) -> IntMatrix {
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    IntMatrix::from_i64(&refs).unwrap()
}

fn dir(v: &[BigInt]) -> Option<Direction> {
    Direction::new(v.to_vec()).ok()
}

fn width(p: &LatticePolytope, v: &[BigInt]) -> BigInt {
    dir(v).map_or_else(|| BigInt::from(0), |h| width_in_direction(p, &h).unwrap())
}

fn image_l1(rows: &[Vec<BigInt>], p: &LatticePolytope) -> BigInt {
    let m = IntMatrix::new(rows.to_vec()).unwrap();
    l1(&apply_map(&AffineUnimodularMap::linear(m).unwrap(), p).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn width_pulls_back((a, pts, h) in instance()) {
        let a = matrix(&a);
        let p = poly(&pts);
        let h = Direction::from_i64(&h).unwrap();
        let image = apply_map(&AffineUnimodularMap::linear(a.clone()).unwrap(), &p).unwrap();
        prop_assert_eq!(
            width_in_direction(&image, &h).unwrap(),
            width_in_direction(&p, &pullback_direction(&a, &h).unwrap()).unwrap()
        );
    }

    #[test]
    fn zero_one_directions_bounded_by_l1((_a, pts, _h) in instance()) {
        let p = poly(&pts);
        let n = p.dim();
        let total = l1(&p);
        for mask in 1u32..(1 << n) {
            let e: Vec<BigInt> = (0..n).map(|i| BigInt::from((mask >> i) & 1)).collect();
            prop_assert!(width(&p, &e) <= total);
        }
    }

    #[test]
    fn row_subset_sums_bounded_by_l1((a, pts, _h) in instance()) {
        let p = poly(&pts);
        let a = matrix(&a);
        let n = p.dim();
        let total = image_l1(a.rows(), &p);
        for mask in 1u32..(1 << n) {
            let mut sum = vec![BigInt::from(0); n];
            for (i, row) in a.rows().iter().enumerate() {
                if (mask >> i) & 1 == 1 {
                    for (s, x) in sum.iter_mut().zip(row) {
                        *s += x;
                    }
                }
            }
            prop_assert!(width(&p, &sum) <= total);
        }
    }

    #[test]
    fn l1_from_rows((a, pts, _h) in instance()) {
        let p = poly(&pts);
        let a = matrix(&a);
        let n = p.dim();
        let sum: Vec<BigInt> = (0..n)
            .map(|j| a.rows().iter().map(|r| r[j].clone()).sum())
            .collect();
        let max_sum = p.functional_values(&sum).unwrap().into_iter().max().unwrap();
        let mins: BigInt = a
            .rows()
            .iter()
            .map(|r| p.functional_range(r).unwrap().0)
            .sum();
        prop_assert_eq!(image_l1(a.rows(), &p), max_sum - mins);
    }

    #[test]
    fn l1_ignores_row_order((a, pts, _h) in instance(), seed in any::<u64>()) {
        let p = poly(&pts);
        let a = matrix(&a);
        let mut rows = a.rows().to_vec();
        let len = rows.len();
        rows.rotate_left((seed as usize) % len);
        rows.swap(0, (seed as usize / 7) % len);
        prop_assert_eq!(image_l1(&rows, &p), image_l1(a.rows(), &p));
    }

    #[test]
    fn l1_survives_last_row_replacement((a, pts, _h) in instance()) {
        let p = poly(&pts);
        let a = matrix(&a);
        let n = p.dim();
        let mut rows = a.rows().to_vec();
        let neg_sum: Vec<BigInt> = (0..n)
            .map(|j| -rows.iter().map(|r| r[j].clone()).sum::<BigInt>())
            .collect();
        rows[n - 1] = neg_sum;
        prop_assert_eq!(image_l1(&rows, &p), image_l1(a.rows(), &p));
    }

    #[test]
    fn translation_invariance((_a, pts, h) in instance(), shift in prop::collection::vec(-9i64..=9, 4)) {
        let p = poly(&pts);
        let t: Vec<BigInt> = shift[..p.dim()].iter().map(|&x| BigInt::from(x)).collect();
        let moved = p.translate(&t).unwrap();
        let h = Direction::from_i64(&h).unwrap();
        prop_assert_eq!(width_in_direction(&moved, &h).unwrap(), width_in_direction(&p, &h).unwrap());
        prop_assert_eq!(l1(&moved), l1(&p));
    }

    #[test]
    fn lattice_width_is_minimal((_a, pts, h) in instance()) {
        let p = poly(&pts);
        let h = Direction::from_i64(&h).unwrap().normalized();
        let (w, witness) = lattice_width(&p).unwrap();
        prop_assert!(w <= width_in_direction(&p, &h).unwrap());
        prop_assert_eq!(width_in_direction(&p, &witness).unwrap(), w);
    }
}
