//! Dense linear algebra over F_p for small fixed dimensions, and lifting
//! of SL_n(F_p) matrices to SL_n(Z) through transvection factorisations.

use crate::mat::{self, Mat};
use crate::rat::{mod_inverse, mulmod, rat_i64, submod, LocalContext};

pub type FpMat = Vec<Vec<u64>>;

pub fn fp_identity(n: usize, _p: u64) -> FpMat {
    (0..n)
        .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
        .collect()
}

pub fn fp_mul(a: &FpMat, b: &FpMat, p: u64) -> FpMat {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let mut out = vec![vec![0u64; m]; n];
    for i in 0..n {
        for j in 0..m {
            let mut acc = 0u64;
            for l in 0..k {
                acc = (acc + mulmod(a[i][l], b[l][j], p)) % p;
            }
            out[i][j] = acc;
        }
    }
    out
}

pub fn fp_mat_vec(a: &FpMat, v: &[u64], p: u64) -> Vec<u64> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(0u64, |acc, (&c, &x)| (acc + mulmod(c, x, p)) % p)
        })
        .collect()
}

/// Row echelon reduction in place; returns the rank.
fn echelon(m: &mut FpMat, p: u64) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut rank = 0;
    for col in 0..cols {
        let Some(pr) = (rank..rows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pr);
        let inv = mod_inverse(m[rank][col], p).unwrap();
        for c in 0..cols {
            m[rank][c] = mulmod(m[rank][c], inv, p);
        }
        for r in 0..rows {
            if r != rank && m[r][col] != 0 {
                let f = m[r][col];
                for c in 0..cols {
                    let t = mulmod(f, m[rank][c], p);
                    m[r][c] = submod(m[r][c], t, p);
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

pub fn fp_rank(a: &FpMat, p: u64) -> usize {
    let mut m = a.clone();
    echelon(&mut m, p)
}

/// Basis of the right kernel {v : Av = 0}.
pub fn fp_kernel(a: &FpMat, p: u64) -> Vec<Vec<u64>> {
    let cols = if a.is_empty() { 0 } else { a[0].len() };
    let mut m = a.clone();
    let rank = echelon(&mut m, p);
    // Identify pivot columns of the reduced matrix.
    let mut pivots = Vec::new();
    let mut col = 0;
    for r in 0..rank {
        while col < cols && m[r][col] == 0 {
            col += 1;
        }
        pivots.push(col);
        col += 1;
    }
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = submod(0, m[r][free], p);
        }
        basis.push(v);
    }
    basis
}

pub fn fp_det(a: &FpMat, p: u64) -> u64 {
    let n = a.len();
    let mut m = a.clone();
    let mut det = 1u64;
    for col in 0..n {
        let Some(pr) = (col..n).find(|&r| m[r][col] != 0) else {
            return 0;
        };
        if pr != col {
            m.swap(pr, col);
            det = submod(0, det, p);
        }
        let pv = m[col][col];
        det = mulmod(det, pv, p);
        let inv = mod_inverse(pv, p).unwrap();
        for r in col + 1..n {
            if m[r][col] != 0 {
                let f = mulmod(m[r][col], inv, p);
                for c in col..n {
                    let t = mulmod(f, m[col][c], p);
                    m[r][c] = submod(m[r][c], t, p);
                }
            }
        }
    }
    det
}

pub fn fp_inverse(a: &FpMat, p: u64) -> Option<FpMat> {
    let n = a.len();
    let mut m: FpMat = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| u64::from(i == j)));
            r
        })
        .collect();
    if echelon(&mut m, p) < n {
        return None;
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Decompose a determinant-1 matrix over F_p into transvections
/// (row_i += c * row_j) and lift the product to an integer matrix of
/// determinant exactly 1 that reduces to the input mod p.
pub fn sl_lift(a: &FpMat, p: u64) -> Mat {
    let n = a.len();
    debug_assert_eq!(fp_det(a, p), 1, "sl_lift requires determinant 1");
    let mut b = a.clone();
    // ops reduce b to the identity: (i, j, c) means row_i += c * row_j.
    let mut ops: Vec<(usize, usize, u64)> = Vec::new();
    let addrow = |b: &mut FpMat, ops: &mut Vec<(usize, usize, u64)>, i: usize, j: usize, c: u64| {
        if c == 0 {
            return;
        }
        for col in 0..n {
            let t = mulmod(c, b[j][col], p);
            b[i][col] = (b[i][col] + t) % p;
        }
        ops.push((i, j, c));
    };
    for j in 0..n {
        if b[j][j] == 0 {
            let i = (0..n)
                .find(|&i| i != j && b[i][j] != 0)
                .expect("invertible matrix has a nonzero entry in every column");
            addrow(&mut b, &mut ops, j, i, 1);
        }
        if b[j][j] != 1 && j + 1 < n {
            // Use a helper row below the pivot to steer the pivot to 1.
            let i = j + 1;
            if b[i][j] == 0 {
                addrow(&mut b, &mut ops, i, j, 1);
            }
            let c = mulmod(
                submod(1, b[j][j], p),
                mod_inverse(b[i][j], p).unwrap(),
                p,
            );
            addrow(&mut b, &mut ops, j, i, c);
        }
        // Transvections preserve the determinant, so the last pivot is
        // already 1 once the rest of the matrix is the identity.
        debug_assert_eq!(b[j][j], 1);
        for i in 0..n {
            if i != j && b[i][j] != 0 {
                let c = submod(0, b[i][j], p);
                addrow(&mut b, &mut ops, i, j, c);
            }
        }
    }
    // b = E_k ... E_1 a = I, so a = E_1^-1 ... E_k^-1; lift each inverse
    // transvection with the entry negated.
    let mut lift = mat::identity(n);
    for &(i, j, c) in ops.iter() {
        let mut e = mat::identity(n);
        e[i][j] = rat_i64(-(c as i64));
        lift = mat::mat_mul(&lift, &e);
    }
    lift
}

/// Reduce a p-integral matrix mod p.
pub fn reduce_mat(m: &Mat, p: u64) -> FpMat {
    let ctx = LocalContext::new(p).unwrap();
    m.iter()
        .map(|row| {
            row.iter()
                .map(|x| ctx.residue(x).expect("entry must be p-integral"))
                .collect()
        })
        .collect()
}

/// Scale one column of an F_p matrix so the determinant becomes 1;
/// which column is scaled is the caller's choice.
pub fn fix_det_by_column(a: &mut FpMat, col: usize, p: u64) {
    let d = fp_det(a, p);
    assert_ne!(d, 0);
    let inv = mod_inverse(d, p).unwrap();
    for row in a.iter_mut() {
        row[col] = mulmod(row[col], inv, p);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_i64;

    #[test]
    fn rank_and_kernel() {
        let p = 7;
        let a = vec![vec![1, 2, 3], vec![2, 4, 1], vec![0, 0, 0]];
        assert_eq!(fp_rank(&a, p), 2);
        let ker = fp_kernel(&a, p);
        assert_eq!(ker.len(), 1);
        let v = &ker[0];
        assert_eq!(fp_mat_vec(&a, v, p), vec![0, 0, 0]);
    }

    #[test]
    fn inverse_roundtrip() {
        let p = 7;
        let a = vec![vec![2, 1, 0], vec![5, 3, 1], vec![1, 0, 4]];
        let inv = fp_inverse(&a, p).unwrap();
        assert_eq!(fp_mul(&a, &inv, p), fp_identity(3, p));
    }

    #[test]
    fn sl_lift_reduces_back_and_has_det_one() {
        let p = 7;
        for a in [
            vec![vec![2, 1, 0], vec![5, 3, 1], vec![1, 0, 4]],
            vec![vec![0, 1, 0], vec![6, 0, 0], vec![0, 0, 1]],
            vec![vec![1, 5, 2], vec![0, 1, 3], vec![0, 0, 1]],
        ] {
            let mut a = a;
            fix_det_by_column(&mut a, 0, p);
            assert_eq!(fp_det(&a, p), 1);
            let l = sl_lift(&a, p);
            assert_eq!(mat::det(&l), rat_i64(1));
            assert_eq!(reduce_mat(&l, p), a);
        }
    }

    #[test]
    fn sl_lift_dimension_four() {
        let p = 5;
        let mut a = vec![
            vec![1, 2, 0, 4],
            vec![0, 1, 3, 0],
            vec![2, 0, 1, 1],
            vec![0, 4, 0, 1],
        ];
        assert_ne!(fp_det(&a, p), 0);
        fix_det_by_column(&mut a, 3, p);
        let l = sl_lift(&a, p);
        assert_eq!(mat::det(&l), rat_i64(1));
        assert_eq!(reduce_mat(&l, p), a);
    }
}
