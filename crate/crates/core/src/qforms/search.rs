use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{Signed, ToPrimitive, Zero};

use super::DiagonalForm;
use crate::error::{Error, Result};

const FAST_BOUND: u64 = 1_000_000;

/// Exhaustive search for a nonzero `x` with `f(x) = 0` and `max|xᵢ| ≤ bound`.
///
/// The first `n-1` coordinates run over `0..=bound` in lexicographic order
/// and the last one is solved for exactly, so the cost is `(bound+1)^(n-1)`
/// square-root tests. Returned vectors have nonnegative entries.
pub fn isotropy_search(f: &DiagonalForm, bound: u64) -> Result<Option<Vec<BigInt>>> {
    if bound == 0 {
        return Err(Error::Domain("search bound must be at least 1".into()));
    }
    if f.rank() == 1 {
        return Ok(None);
    }
    let small: Option<Vec<i64>> = f.coeffs().iter().map(ToPrimitive::to_i64).collect();
    match small {
        Some(c) if bound <= FAST_BOUND => Ok(search_small(&c, bound)
            .map(|x| x.into_iter().map(BigInt::from).collect())),
        _ => Ok(search_big(f.coeffs(), bound)),
    }
}

fn search_small(c: &[i64], bound: u64) -> Option<Vec<u64>> {
    let n = c.len();
    let last = c[n - 1] as i128;
    let mut x = vec![0u64; n];
    let mut partial = vec![0i128; n];
    loop {
        // Advance the odometer over the first n-1 coordinates.
        let mut k = n - 1;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            if x[k] < bound {
                x[k] += 1;
                break;
            }
            x[k] = 0;
        }
        for i in k..n - 1 {
            let prev = if i == 0 { 0 } else { partial[i - 1] };
            let xi = x[i] as i128;
            partial[i] = prev + c[i] as i128 * xi * xi;
        }
        let rest = -partial[n - 2];
        if rest % last != 0 {
            continue;
        }
        let sq = rest / last;
        if sq < 0 {
            continue;
        }
        let r = (sq as u128).sqrt();
        if r * r == sq as u128 && r <= bound as u128 {
            x[n - 1] = r as u64;
            return Some(x);
        }
    }
}

fn search_big(c: &[BigInt], bound: u64) -> Option<Vec<BigInt>> {
    let n = c.len();
    let bound_big = BigInt::from(bound);
    let mut x = vec![BigInt::zero(); n];
    loop {
        let mut k = n - 1;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            if x[k] < bound_big {
                x[k] += 1;
                break;
            }
            x[k] = BigInt::zero();
        }
        let partial: BigInt = (0..n - 1).map(|i| &c[i] * &x[i] * &x[i]).sum();
        let (sq, rem) = (-partial).div_rem(&c[n - 1]);
        if !rem.is_zero() || sq.is_negative() {
            continue;
        }
        let r = sq.sqrt();
        if &r * &r == sq && r <= bound_big {
            x[n - 1] = r;
            return Some(x);
        }
    }
}
