//! Deterministic primality, factorization and a few integer helpers.
//!
//! Primality is certified with Miller-Rabin over the first thirteen prime
//! bases, which is deterministic for every n below
//! 3 317 044 064 679 887 385 961 981. Larger inputs are refused with
//! [`Error::PrimalityLimit`] instead of being answered probabilistically.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Exclusive upper bound of the deterministic Miller-Rabin range.
pub const MR_LIMIT: &str = "3317044064679887385961981";

const TRIAL_LIMIT: u64 = 1 << 16;

fn mr_limit() -> BigUint {
    MR_LIMIT.parse().expect("constant parses")
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality for machine-sized integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn is_prime_biguint(n: &BigUint) -> Result<bool> {
    if let Some(small) = n.to_u64() {
        return Ok(is_prime_u64(small));
    }
    for &p in &MR_BASES {
        if (n % p).is_zero() {
            return Ok(false);
        }
    }
    if n >= &mr_limit() {
        return Err(Error::PrimalityLimit(BigInt::from(n.clone())));
    }
    let one = BigUint::one();
    let n_minus_one = n - &one;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    'bases: for &a in &MR_BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'bases;
            }
        }
        return Ok(false);
    }
    Ok(true)
}

/// Certified primality test. Negative numbers, 0 and 1 are not prime.
pub fn is_prime(n: &BigInt) -> Result<bool> {
    match n.sign() {
        Sign::Plus => is_prime_biguint(n.magnitude()),
        _ => Ok(false),
    }
}

/// Returns `Ok(())` if `p` is prime, `Err(NotPrime)` otherwise.
pub fn require_prime(p: &BigInt) -> Result<()> {
    if is_prime(p)? {
        Ok(())
    } else {
        Err(Error::NotPrime(p.clone()))
    }
}

fn rho_u64(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| ((mul_mod(x, x, n) as u128 + c as u128) % n as u128) as u64;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn rho_big(n: &BigUint) -> BigUint {
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut d = BigUint::one();
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            d = diff.gcd(n);
        }
        if &d != n {
            return d;
        }
        c += 1u32;
    }
}

fn split_into(n: BigUint, out: &mut Vec<BigUint>) -> Result<()> {
    if n.is_one() {
        return Ok(());
    }
    if is_prime_biguint(&n)? {
        out.push(n);
        return Ok(());
    }
    let d = match n.to_u64() {
        Some(small) => BigUint::from(rho_u64(small)),
        None => rho_big(&n),
    };
    let rest = &n / &d;
    split_into(d, out)?;
    split_into(rest, out)
}

/// Prime factorization of `|n|` as (prime, multiplicity) pairs in increasing
/// order. `n` must be nonzero.
pub fn factorize(n: &BigInt) -> Result<Vec<(BigInt, u32)>> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut m = n.magnitude().clone();
    let mut primes: Vec<BigUint> = Vec::new();
    let mut p = 2u64;
    while p < TRIAL_LIMIT {
        let bp = BigUint::from(p);
        if &bp * &bp > m {
            break;
        }
        while (&m % p).is_zero() {
            m /= p;
            primes.push(bp.clone());
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !m.is_one() {
        split_into(m, &mut primes)?;
    }
    primes.sort();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    for q in primes {
        let q = BigInt::from(q);
        match out.last_mut() {
            Some((last, mult)) if *last == q => *mult += 1,
            _ => out.push((q, 1)),
        }
    }
    Ok(out)
}

/// Distinct odd primes dividing `n`, ascending.
pub fn odd_prime_divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let two = BigInt::from(2);
    Ok(factorize(n)?
        .into_iter()
        .map(|(p, _)| p)
        .filter(|p| *p != two)
        .collect())
}

/// Squarefree part of `n`, keeping the sign.
pub fn squarefree_part(n: &BigInt) -> Result<BigInt> {
    let mut out = if n.sign() == Sign::Minus {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    for (p, e) in factorize(n)? {
        if e % 2 == 1 {
            out *= p;
        }
    }
    Ok(out)
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.sign() == Sign::Minus {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Sequential scan for the next prime strictly greater than `n`.
pub fn next_prime(n: &BigInt) -> Result<BigInt> {
    let mut q = n + 1;
    loop {
        if is_prime(&q)? {
            return Ok(q);
        }
        q += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division_is_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn small_primes_match_trial_division() {
        for n in 0..5000u64 {
            assert_eq!(is_prime_u64(n), trial_division_is_prime(n), "n = {n}");
        }
    }

    #[test]
    fn strong_pseudoprimes_rejected() {
        // Strong pseudoprimes to several small bases.
        for n in [2047u64, 1373653, 25326001, 3215031751, 2152302898747, 3474749660383] {
            assert!(!is_prime_u64(n), "{n}");
        }
        assert!(is_prime_u64(1_000_000_007));
        assert!(is_prime_u64(18446744073709551557));
    }

    #[test]
    fn big_range_and_limit() {
        let p: BigInt = "170141183460469231731687303715884105727".parse().unwrap();
        assert!(matches!(is_prime(&p), Err(Error::PrimalityLimit(_))));
        let q: BigInt = "100000000000000000039".parse().unwrap();
        assert!(is_prime(&q).unwrap());
        assert!(!is_prime(&(&q * BigInt::from(3))).unwrap());
    }

    #[test]
    fn factorization_roundtrip() {
        for n in [-24i64, 2405, 1, 97, 1001, 600851475143, -65] {
            let f = factorize(&BigInt::from(n)).unwrap();
            let prod: BigInt = f.iter().map(|(p, e)| p.pow(*e)).product();
            assert_eq!(prod, BigInt::from(n.abs()));
            assert!(f.iter().all(|(p, _)| is_prime(p).unwrap()));
        }
        let n = BigInt::from(1_000_000_007u64) * BigInt::from(998_244_353u64);
        let f = factorize(&n).unwrap();
        assert_eq!(f.len(), 2);
        assert!(factorize(&BigInt::zero()).is_err());
    }

    #[test]
    fn squarefree_parts() {
        assert_eq!(squarefree_part(&BigInt::from(-72)).unwrap(), BigInt::from(-2));
        assert_eq!(squarefree_part(&BigInt::from(49)).unwrap(), BigInt::from(1));
        assert!(is_perfect_square(&BigInt::from(49)));
        assert!(!is_perfect_square(&BigInt::from(-49)));
    }
}
