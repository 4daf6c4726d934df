//! Exact dense linear algebra over a [`Field`], sized for the small systems
//! this crate needs (rank of coefficient matrices, 2-dimensional kernels,
//! determinants of Sylvester matrices).

use crate::scalar::{Field, Ring};

/// Row-reduces `rows` in place and returns the rank.
pub fn row_echelon<K: Field>(rows: &mut [Vec<K>]) -> usize {
    let nrows = rows.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = rows[0].len();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(pivot) = (rank..nrows).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = rows[rank][col].inv().expect("pivot is nonzero");
        for c in col..ncols {
            rows[rank][c] = rows[rank][c].clone() * inv.clone();
        }
        for r in 0..nrows {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in col..ncols {
                    let delta = f.clone() * rows[rank][c].clone();
                    rows[r][c] = rows[r][c].clone() - delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn rank<K: Field>(rows: &[Vec<K>]) -> usize {
    let mut m: Vec<Vec<K>> = rows.to_vec();
    row_echelon(&mut m)
}

/// Basis of the right kernel { x : rows * x = 0 }.
pub fn kernel<K: Field>(rows: &[Vec<K>]) -> Vec<Vec<K>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let mut m: Vec<Vec<K>> = rows.to_vec();
    let rank = row_echelon(&mut m);
    let mut pivot_cols = Vec::with_capacity(rank);
    for row in m.iter().take(rank) {
        let col = row.iter().position(|v| !v.is_zero()).expect("pivot row");
        pivot_cols.push(col);
    }
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![K::zero(); ncols];
        v[free] = K::one();
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -m[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solves `a x = b` for square `a`; `None` when singular.
pub fn solve<K: Field>(a: &[Vec<K>], b: &[K]) -> Option<Vec<K>> {
    let n = a.len();
    let mut m: Vec<Vec<K>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    if row_echelon(&mut m) != n {
        return None;
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Determinant over a plain [`Ring`] by cofactor expansion; intended for the
/// small Sylvester matrices (n <= 6) that arise over polynomial coefficient
/// rings, where no division is available.
pub fn det_ring<K: Ring>(m: &[Vec<K>]) -> K {
    let n = m.len();
    match n {
        0 => K::one(),
        1 => m[0][0].clone(),
        2 => m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone(),
        _ => {
            let mut acc = K::zero();
            for (j, entry) in m[0].iter().enumerate() {
                if entry.is_zero() {
                    continue;
                }
                let minor: Vec<Vec<K>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let term = entry.clone() * det_ring(&minor);
                acc = if j % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
    }
}

/// Determinant over a [`Field`] by Gaussian elimination.
pub fn det<K: Field>(m: &[Vec<K>]) -> K {
    let n = m.len();
    let mut a: Vec<Vec<K>> = m.to_vec();
    let mut result = K::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return K::zero();
        };
        if p != col {
            a.swap(p, col);
            result = -result;
        }
        result = result * a[col][col].clone();
        let inv = a[col][col].inv().expect("pivot nonzero");
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone() * inv.clone();
            for c in col..n {
                let delta = f.clone() * a[col][c].clone();
                a[r][c] = a[r][c].clone() - delta;
            }
        }
    }
    result
}

/// Inverse of a square matrix; `None` when singular.
pub fn inverse<K: Field>(m: &[Vec<K>]) -> Option<Vec<Vec<K>>> {
    let n = m.len();
    let mut aug: Vec<Vec<K>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j { K::one() } else { K::zero() });
            }
            r
        })
        .collect();
    if row_echelon(&mut aug) != n {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn mat_mul<K: Ring>(a: &[Vec<K>], b: &[Vec<K>]) -> Vec<Vec<K>> {
    let n = a.len();
    let p = b[0].len();
    let m = b.len();
    let mut out = vec![vec![K::zero(); p]; n];
    for i in 0..n {
        for (k, bk) in b.iter().enumerate().take(m) {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..p {
                let delta = a[i][k].clone() * bk[j].clone();
                out[i][j] = out[i][j].clone() + delta;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat_int, Rat};
    use num_traits::Zero;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| rat_int(v)).collect())
            .collect()
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(rank(&a), 2);
        let ker = kernel(&a);
        assert_eq!(ker.len(), 1);
        for row in &a {
            let dot = row
                .iter()
                .zip(&ker[0])
                .fold(Rat::zero(), |acc, (x, y)| acc + x * y);
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn determinants_agree() {
        let a = m(&[&[2, 1, 0, 3], &[0, -1, 4, 1], &[5, 2, 2, 2], &[1, 0, 0, 7]]);
        assert_eq!(det(&a), det_ring(&a));
        let singular = m(&[&[1, 2], &[2, 4]]);
        assert!(det(&singular).is_zero());
    }

    #[test]
    fn solve_and_inverse() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let b = vec![rat_int(5), rat_int(10)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(x, vec![rat_int(1), rat_int(3)]);
        let inv = inverse(&a).unwrap();
        let prod = mat_mul(&a, &inv);
        assert_eq!(prod[0][0], rat_int(1));
        assert_eq!(prod[0][1], rat_int(0));
        assert_eq!(prod[1][1], rat_int(1));
    }
}
