//! Dense linear algebra over the prime field `F_p`.

use alloc::vec::Vec;

/// `a^-1 mod p` for `a != 0`.
pub fn inv_mod(a: u32, p: u32) -> u32 {
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, (a % p) as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "not invertible");
    t.rem_euclid(p as i64) as u32
}

/// Reduced row echelon form in place; returns the pivot column of each
/// nonzero row. Zero rows are removed.
pub fn rref(rows: &mut Vec<Vec<u32>>, p: u32) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(found) = (rank..rows.len()).find(|&r| !rows[r][col].is_multiple_of(p)) else {
            continue;
        };
        rows.swap(rank, found);
        let scale = inv_mod(rows[rank][col], p);
        for x in rows[rank].iter_mut() {
            *x = (*x as u64 * scale as u64 % p as u64) as u32;
        }
        for r in 0..rows.len() {
            if r == rank {
                continue;
            }
            let f = rows[r][col] % p;
            if f == 0 {
                continue;
            }
            let pivot_row = rows[rank].clone();
            for (x, &y) in rows[r].iter_mut().zip(&pivot_row) {
                let sub = (f as u64 * y as u64 % p as u64) as u32;
                *x = (*x + p - sub) % p;
            }
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    pivots
}

pub fn rank(rows: &[Vec<u32>], p: u32) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, p).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn inverses() {
        for p in [2, 3, 5, 7, 11] {
            for a in 1..p {
                assert_eq!(a * inv_mod(a, p) % p, 1);
            }
        }
    }

    #[test]
    fn echelon() {
        let mut m = vec![vec![1, 1, 0], vec![1, 1, 0], vec![0, 1, 1]];
        assert_eq!(rref(&mut m, 2), vec![0, 1]);
        assert_eq!(m, vec![vec![1, 0, 1], vec![0, 1, 1]]);
        assert_eq!(rank(&[vec![2, 4], vec![1, 2]], 3), 1);
        assert_eq!(rank(&[vec![2, 4], vec![1, 2]], 2), 1);
        assert_eq!(rank(&[vec![0, 0]], 5), 0);
    }
}
