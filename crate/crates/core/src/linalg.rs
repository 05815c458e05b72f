//! Small exact linear algebra over ℤ and ℚ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in r + 1..m.len() {
            for j in c + 1..ncols {
                let v = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                m[i][j] = v.div_floor(&prev);
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// A precomputed solver for a square nonsingular integer system.
#[derive(Debug, Clone)]
pub struct SquareSolver {
    inverse: Vec<Vec<BigRational>>,
}

impl SquareSolver {
    /// Gauss–Jordan inversion; `None` if the matrix is singular.
    pub fn new(matrix: &[Vec<BigInt>]) -> Option<Self> {
        let n = matrix.len();
        let mut a: Vec<Vec<BigRational>> = matrix
            .iter()
            .enumerate()
            .map(|(i, row)| {
                assert_eq!(row.len(), n, "matrix must be square");
                let mut r: Vec<BigRational> = row.iter().map(|x| BigRational::from_integer(x.clone())).collect();
                r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
                r
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&i| !a[i][c].is_zero())?;
            a.swap(c, p);
            let inv = a[c][c].recip();
            for x in a[c].iter_mut() {
                *x *= &inv;
            }
            let pivot_row = a[c].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i == c || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        Some(Self { inverse: a.into_iter().map(|r| r[n..].to_vec()).collect() })
    }

    pub fn dim(&self) -> usize {
        self.inverse.len()
    }

    /// Solves `A x = b`; `None` if the solution is not integral.
    pub fn solve_integer(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(b.len(), self.dim());
        self.inverse
            .iter()
            .map(|row| {
                let mut acc = BigRational::zero();
                for (x, y) in row.iter().zip(b) {
                    if !x.is_zero() && !y.is_zero() {
                        acc += x * BigRational::from_integer(y.clone());
                    }
                }
                acc.is_integer().then(|| acc.to_integer())
            })
            .collect()
    }
}
