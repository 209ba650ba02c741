//! Small exact rational matrices.

use crate::rat::Rat;
use num_traits::{One, Zero};

pub type Mat = Vec<Vec<Rat>>;

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let mut out = vec![vec![Rat::zero(); m]; n];
    for i in 0..n {
        for j in 0..m {
            let mut acc = Rat::zero();
            for l in 0..k {
                acc += a[i][l].clone() * b[l][j].clone();
            }
            out[i][j] = acc;
        }
    }
    out
}

pub fn mat_vec(a: &Mat, v: &[Rat]) -> Vec<Rat> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v.iter())
                .fold(Rat::zero(), |acc, (c, x)| acc + c.clone() * x.clone())
        })
        .collect()
}

pub fn transpose(a: &Mat) -> Mat {
    let n = a.len();
    let m = a[0].len();
    (0..m).map(|j| (0..n).map(|i| a[i][j].clone()).collect()).collect()
}

pub fn scale(a: &Mat, c: &Rat) -> Mat {
    a.iter()
        .map(|row| row.iter().map(|x| x.clone() * c.clone()).collect())
        .collect()
}

pub fn det(a: &Mat) -> Rat {
    // Gaussian elimination with exact arithmetic.
    let n = a.len();
    let mut m: Mat = a.to_vec();
    let mut d = Rat::one();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero());
        let Some(pr) = pivot else {
            return Rat::zero();
        };
        if pr != col {
            m.swap(pr, col);
            d = -d;
        }
        let pv = m[col][col].clone();
        d *= pv.clone();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone() / pv.clone();
            for c in col..n {
                let t = factor.clone() * m[col][c].clone();
                m[r][c] -= t;
            }
        }
    }
    d
}

/// Inverse of a square matrix; None if singular.
pub fn inverse(a: &Mat) -> Option<Mat> {
    let n = a.len();
    let mut m: Mat = a.to_vec();
    let mut inv = identity(n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(pivot, col);
        inv.swap(pivot, col);
        let pv = m[col][col].clone();
        for c in 0..n {
            m[col][c] /= pv.clone();
            inv[col][c] /= pv.clone();
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in 0..n {
                let t1 = factor.clone() * m[col][c].clone();
                m[r][c] -= t1;
                let t2 = factor.clone() * inv[col][c].clone();
                inv[r][c] -= t2;
            }
        }
    }
    Some(inv)
}

/// Solve A x = b for square A; None if singular.
pub fn solve(a: &Mat, b: &[Rat]) -> Option<Vec<Rat>> {
    let inv = inverse(a)?;
    Some(mat_vec(&inv, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_i64;

    #[test]
    fn det_and_inverse() {
        let a = vec![
            vec![rat_i64(2), rat_i64(1)],
            vec![rat_i64(5), rat_i64(3)],
        ];
        assert_eq!(det(&a), rat_i64(1));
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(2));
    }

    #[test]
    fn singular_matrix() {
        let a = vec![
            vec![rat_i64(1), rat_i64(2)],
            vec![rat_i64(2), rat_i64(4)],
        ];
        assert_eq!(det(&a), rat_i64(0));
        assert!(inverse(&a).is_none());
    }
}
