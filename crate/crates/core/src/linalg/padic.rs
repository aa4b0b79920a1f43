//! 2-adic elementary divisors by elimination over `Z/2^64`, with a rank cross-check mod a prime.

use rayon::prelude::*;
use thiserror::Error;

/// Entries of dense integer matrices fed to the fast path.
pub type Entry = i128;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PadicError {
    #[error("2-adic elimination found {found} pivots but the rank mod p is {rank}")]
    PrecisionExceeded { found: usize, rank: usize },
}

const PRIME: u64 = (1u64 << 61) - 1;

fn odd_inverse(u: u64) -> u64 {
    debug_assert!(u & 1 == 1);
    // Newton iteration doubles the number of correct low bits.
    let mut x = u;
    for _ in 0..6 {
        x = x.wrapping_mul(2u64.wrapping_sub(u.wrapping_mul(x)));
    }
    x
}

/// Valuations of the nonzero 2-adic elementary divisors of `m`, ascending.
///
/// `m` is row-major with `rows * cols` entries. The count of returned valuations equals the rank
/// of `m` over Q unless some elementary divisor is divisible by `2^64`, which is reported as an
/// error after comparing with the rank modulo a 61-bit prime.
pub fn two_adic_divisors(rows: usize, cols: usize, m: &[Entry]) -> Result<Vec<u32>, PadicError> {
    assert_eq!(m.len(), rows * cols);
    let vals = eliminate_2adic(rows, cols, m.iter().map(|&x| x as u64).collect());
    let rank = rank_mod_prime(rows, cols, m);
    if rank != vals.len() {
        return Err(PadicError::PrecisionExceeded { found: vals.len(), rank });
    }
    Ok(vals)
}

fn eliminate_2adic(rows: usize, cols: usize, mut a: Vec<u64>) -> Vec<u32> {
    let mut alive_rows: Vec<usize> = (0..rows).collect();
    let mut alive_cols = vec![true; cols];
    let mut out = Vec::new();
    let mut level = 0u32;
    let mut start = 0usize;
    loop {
        if alive_rows.is_empty() || level >= 64 {
            break;
        }
        // Find an entry of valuation exactly `level`, rotating over rows.
        let mut found = None;
        for k in 0..alive_rows.len() {
            let ri = (start + k) % alive_rows.len();
            let r = alive_rows[ri];
            let row = &a[r * cols..(r + 1) * cols];
            if let Some(c) = (0..cols).find(|&c| alive_cols[c] && row[c] != 0 && row[c].trailing_zeros() == level) {
                found = Some((ri, c));
                break;
            }
        }
        let Some((ri, pc)) = found else {
            level += 1;
            continue;
        };
        start = ri;
        let pr = alive_rows.swap_remove(ri);
        alive_cols[pc] = false;
        out.push(level);
        let pivot_row: Vec<u64> = a[pr * cols..(pr + 1) * cols].to_vec();
        let support: Vec<usize> = (0..cols).filter(|&c| alive_cols[c] && pivot_row[c] != 0).collect();
        let inv = odd_inverse(pivot_row[pc] >> level);
        let alive: std::collections::HashSet<usize> = alive_rows.iter().copied().collect();
        a.par_chunks_mut(cols).enumerate().for_each(|(r, row)| {
            if !alive.contains(&r) || row[pc] == 0 {
                return;
            }
            let f = (row[pc] >> level).wrapping_mul(inv);
            for &c in &support {
                row[c] = row[c].wrapping_sub(f.wrapping_mul(pivot_row[c]));
            }
            row[pc] = 0;
        });
    }
    out
}

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn powmod(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b);
        }
        b = mulmod(b, b);
        e >>= 1;
    }
    r
}

/// Rank of `m` reduced modulo a 61-bit prime.
pub fn rank_mod_prime(rows: usize, cols: usize, m: &[Entry]) -> usize {
    let p = PRIME as i128;
    let mut a: Vec<u64> = m.iter().map(|&x| x.rem_euclid(p) as u64).collect();
    let mut alive_rows: Vec<usize> = (0..rows).collect();
    let mut rank = 0;
    for c in 0..cols {
        let Some(ri) = alive_rows.iter().position(|&r| a[r * cols + c] != 0) else { continue };
        let pr = alive_rows.swap_remove(ri);
        rank += 1;
        let pivot_row: Vec<u64> = a[pr * cols..(pr + 1) * cols].to_vec();
        let support: Vec<usize> = (c + 1..cols).filter(|&k| pivot_row[k] != 0).collect();
        let inv = powmod(pivot_row[c], PRIME - 2);
        let alive: std::collections::HashSet<usize> = alive_rows.iter().copied().collect();
        a.par_chunks_mut(cols).enumerate().for_each(|(r, row)| {
            if !alive.contains(&r) || row[c] == 0 {
                return;
            }
            let f = mulmod(row[c], inv);
            for &k in &support {
                row[k] = (row[k] + PRIME - mulmod(f, pivot_row[k])) % PRIME;
            }
            row[c] = 0;
        });
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int::{smith_normal_form, IntMatrix};
    use num_traits::Zero;
    use proptest::prelude::*;

    #[test]
    fn inverse() {
        for u in [1u64, 3, 5, 12345679, u64::MAX] {
            assert_eq!(u.wrapping_mul(odd_inverse(u)), 1);
        }
    }

    proptest! {
        #[test]
        fn agrees_with_exact_snf(rows in 1usize..7, cols in 1usize..7,
                                 entries in proptest::collection::vec(-12i64..13, 49)) {
            let e: Vec<i64> = entries[..rows * cols].iter().map(|x| x * (1 + (x % 3)) ).collect();
            let m: Vec<Entry> = e.iter().map(|&x| x as i128).collect();
            let fast = two_adic_divisors(rows, cols, &m).unwrap();
            let snf = smith_normal_form(&IntMatrix::from_i64(rows, cols, &e));
            let mut exact: Vec<u32> = snf.diagonal.iter().filter(|d| !d.is_zero())
                .map(|d| d.trailing_zeros().unwrap() as u32).collect();
            exact.sort();
            let mut got = fast.clone();
            got.sort();
            prop_assert_eq!(got, exact);
        }
    }
}
