//! Exact dense linear algebra: rational rank by fraction-free (Bareiss)
//! elimination and determinants of small polynomial matrices.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::ring::{Coeff, Polynomial};

/// Rank over the rationals. Rows are scaled to integers first.
pub fn rank(rows: &[Vec<Coeff>]) -> usize {
    let int_rows: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let den = row
                .iter()
                .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            row.iter()
                .map(|c| c.numer() * (&den / c.denom()))
                .collect()
        })
        .collect();
    integer_rank(int_rows)
}

/// Rank of an integer matrix. Tries 128-bit arithmetic first and falls
/// back to big integers on overflow.
pub fn integer_rank(rows: Vec<Vec<BigInt>>) -> usize {
    if rows.is_empty() || rows[0].is_empty() {
        return 0;
    }
    let small: Option<Vec<Vec<i128>>> = rows
        .iter()
        .map(|r| r.iter().map(|x| x.to_i128()).collect())
        .collect();
    if let Some(small) = small {
        if let Some(r) = bareiss_rank_i128(small) {
            return r;
        }
    }
    bareiss_rank_big(rows)
}

fn bareiss_rank_i128(mut a: Vec<Vec<i128>>) -> Option<usize> {
    let nrows = a.len();
    let ncols = a[0].len();
    let mut prev: i128 = 1;
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, p);
        let pivot = a[r][c];
        for i in r + 1..nrows {
            let factor = a[i][c];
            for j in c..ncols {
                let v = pivot
                    .checked_mul(a[i][j])?
                    .checked_sub(factor.checked_mul(a[r][j])?)?;
                a[i][j] = v / prev;
            }
        }
        prev = pivot;
        r += 1;
    }
    Some(r)
}

fn bareiss_rank_big(mut a: Vec<Vec<BigInt>>) -> usize {
    let nrows = a.len();
    let ncols = a[0].len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pivot = a[r][c].clone();
        for i in r + 1..nrows {
            let factor = a[i][c].clone();
            for j in c..ncols {
                let v = &pivot * &a[i][j] - &factor * &a[r][j];
                a[i][j] = v / &prev;
            }
        }
        prev = pivot;
        r += 1;
    }
    r
}

/// Determinant of a square polynomial matrix by cofactor expansion along
/// rows, memoized on the set of remaining columns. Intended for n <= ~16.
pub fn det(m: &[Vec<Polynomial>], nvars: usize) -> Polynomial {
    let n = m.len();
    if n == 0 {
        return Polynomial::one(nvars);
    }
    assert!(n < 32 && m.iter().all(|r| r.len() == n));
    let mut memo: HashMap<u32, Polynomial> = HashMap::new();
    det_rec(m, 0, (1u32 << n) - 1, nvars, &mut memo)
}

fn det_rec(
    m: &[Vec<Polynomial>],
    row: usize,
    cols: u32,
    nvars: usize,
    memo: &mut HashMap<u32, Polynomial>,
) -> Polynomial {
    if row == m.len() {
        return Polynomial::one(nvars);
    }
    if let Some(v) = memo.get(&cols) {
        return v.clone();
    }
    let mut total = Polynomial::zero(nvars);
    let mut sign_neg = false;
    for c in 0..m.len() {
        if cols & (1 << c) == 0 {
            continue;
        }
        let entry = &m[row][c];
        if !entry.is_zero() {
            let minor = det_rec(m, row + 1, cols & !(1 << c), nvars, memo);
            let term = entry * &minor;
            if sign_neg {
                total = &total - &term;
            } else {
                total.add_assign_ref(&term);
            }
        }
        sign_neg = !sign_neg;
    }
    memo.insert(cols, total.clone());
    total
}
