//! Places of Q, p-adic valuations, square classes, Legendre and Hilbert
//! symbols.

use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::primes::{is_prime, require_prime};

/// A value in {+1, -1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(odd: bool) -> Sign {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn to_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn is_plus(self) -> bool {
        self == Sign::Plus
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_parity(self != rhs)
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl std::iter::Product for Sign {
    fn product<I: Iterator<Item = Sign>>(iter: I) -> Sign {
        iter.fold(Sign::Plus, Mul::mul)
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_i8())
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.to_i8())
    }
}

/// An odd prime, checked on construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OddPrime(BigInt);

impl OddPrime {
    pub fn new(p: impl Into<BigInt>) -> Result<OddPrime> {
        let p = p.into();
        if p.is_odd() && is_prime(&p)? {
            Ok(OddPrime(p))
        } else {
            Err(Error::NotOddPrime(p))
        }
    }

    pub fn get(&self) -> &BigInt {
        &self.0
    }
}

/// A completion of Q: the reals, the 2-adics, or Q_p for an odd prime p.
///
/// The real place is written `-1` in text and JSON.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Real,
    Two,
    Odd(OddPrime),
}

impl Place {
    /// The place attached to a prime `p`.
    pub fn prime(p: impl Into<BigInt>) -> Result<Place> {
        let p = p.into();
        if p == BigInt::from(2) {
            Ok(Place::Two)
        } else {
            OddPrime::new(p).map(Place::Odd)
        }
    }

    pub fn odd(p: impl Into<BigInt>) -> Result<Place> {
        OddPrime::new(p).map(Place::Odd)
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, Place::Real)
    }

    /// The residue characteristic, or `None` at the real place.
    pub fn characteristic(&self) -> Option<BigInt> {
        match self {
            Place::Real => None,
            Place::Two => Some(BigInt::from(2)),
            Place::Odd(p) => Some(p.get().clone()),
        }
    }

    /// Integer encoding: -1 for the real place, otherwise the prime.
    pub fn code(&self) -> BigInt {
        self.characteristic().unwrap_or_else(|| BigInt::from(-1))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

impl FromStr for Place {
    type Err = Error;

    fn from_str(s: &str) -> Result<Place> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "-1" | "real" | "inf" | "infinity" => return Ok(Place::Real),
            _ => {}
        }
        let p: BigInt = t.parse().map_err(|_| Error::InvalidPlace(s.to_string()))?;
        Place::prime(p).map_err(|_| Error::InvalidPlace(s.to_string()))
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let code = self.code();
        match code.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.collect_str(&code),
        }
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Place, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        let text = match Raw::deserialize(d)? {
            Raw::Int(v) => v.to_string(),
            Raw::Text(s) => s,
        };
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// `n = p^exponent * unit` with `p` not dividing `unit`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValuationDecomposition {
    pub exponent: u32,
    pub unit: BigInt,
}

/// Splits off the largest power of `p` dividing `n`; `p` is trusted to be
/// prime.
pub(crate) fn split_valuation(n: &BigInt, p: &BigInt) -> ValuationDecomposition {
    let mut unit = n.clone();
    let mut exponent = 0;
    loop {
        let (q, r) = unit.div_rem(p);
        if !r.is_zero() {
            break;
        }
        unit = q;
        exponent += 1;
    }
    ValuationDecomposition { exponent, unit }
}

pub fn valuation(n: &BigInt, p: &BigInt) -> Result<ValuationDecomposition> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    require_prime(p)?;
    Ok(split_valuation(n, p))
}

/// Euler's criterion; `p` is trusted to be an odd prime not dividing `u`.
pub(crate) fn legendre_unchecked(u: &BigInt, p: &BigInt) -> Sign {
    let r = u.mod_floor(p);
    let e = (p - 1u32) >> 1;
    let x = r.modpow(&e, p);
    Sign::from_parity(!x.is_one())
}

/// The Legendre symbol (u/p) for an odd prime `p` not dividing `u`.
pub fn legendre(u: &BigInt, p: &BigInt) -> Result<Sign> {
    OddPrime::new(p.clone())?;
    if (u % p).is_zero() {
        return Err(Error::DivisibleByPrime {
            n: u.clone(),
            p: p.clone(),
        });
    }
    Ok(legendre_unchecked(u, p))
}

/// Whether `n` is a square in the completion of Q at `place`.
pub fn is_square_local(n: &BigInt, place: &Place) -> Result<bool> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(match place {
        Place::Real => n.is_positive(),
        Place::Two => {
            let d = split_valuation(n, &BigInt::from(2));
            d.exponent % 2 == 0 && d.unit.mod_floor(&BigInt::from(8)).is_one()
        }
        Place::Odd(p) => {
            let d = split_valuation(n, p.get());
            d.exponent % 2 == 0 && legendre_unchecked(&d.unit, p.get()).is_plus()
        }
    })
}

/// `(ε(u), ω(u))`: the classes mod 2 of `(u-1)/2` and `(u²-1)/8`.
pub fn eps_omega(u: &BigInt) -> Result<(u8, u8)> {
    if u.is_even() {
        return Err(Error::EvenInput(u.clone()));
    }
    let two = BigInt::from(2);
    let eps: BigInt = (u - BigInt::one()) / &two;
    let omega: BigInt = (u * u - BigInt::one()) / BigInt::from(8);
    let (eps, omega) = (eps.mod_floor(&two), omega.mod_floor(&two));
    Ok((eps.to_u8().unwrap_or(0), omega.to_u8().unwrap_or(0)))
}

fn eps_omega_bits(u: &BigInt) -> (u32, u32) {
    // u odd: both bits are read off u mod 8.
    let r = u.mod_floor(&BigInt::from(8)).to_u32().unwrap_or(1);
    let eps = u32::from(r % 4 == 3);
    let omega = u32::from(r == 3 || r == 5);
    (eps, omega)
}

/// The Hilbert symbol `(a, b)` at `place`, from the closed formulas.
pub fn hilbert(a: &BigInt, b: &BigInt, place: &Place) -> Result<Sign> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(match place {
        Place::Real => Sign::from_parity(a.is_negative() && b.is_negative()),
        Place::Two => {
            let two = BigInt::from(2);
            let da = split_valuation(a, &two);
            let db = split_valuation(b, &two);
            let (eu, wu) = eps_omega_bits(&da.unit);
            let (ev, wv) = eps_omega_bits(&db.unit);
            let exponent = eu * ev + (da.exponent % 2) * wv + (db.exponent % 2) * wu;
            Sign::from_parity(exponent % 2 == 1)
        }
        Place::Odd(p) => {
            let p = p.get();
            let da = split_valuation(a, p);
            let db = split_valuation(b, p);
            let (alpha, beta) = (da.exponent % 2, db.exponent % 2);
            let eps_p = u32::from(p.mod_floor(&BigInt::from(4)) == BigInt::from(3));
            let mut s = Sign::from_parity(alpha * beta * eps_p == 1);
            if beta == 1 {
                s = s * legendre_unchecked(&da.unit, p);
            }
            if alpha == 1 {
                s = s * legendre_unchecked(&db.unit, p);
            }
            s
        }
    })
}

/// The `(skip+1)`-th prime `q ≡ a (mod m)`, scanning upward from the least
/// positive residue with certified primality.
pub fn dirichlet_prime(a: &BigInt, m: &BigInt, skip: u64) -> Result<BigInt> {
    if !a.is_positive() || !m.is_positive() {
        return Err(Error::InvalidParameters(format!(
            "dirichlet_prime needs positive a and m, got a={a}, m={m}"
        )));
    }
    if !a.gcd(m).is_one() {
        return Err(Error::NotCoprime {
            a: a.clone(),
            m: m.clone(),
        });
    }
    let mut q = a.mod_floor(m);
    let mut remaining = skip;
    loop {
        if is_prime(&q)? {
            if remaining == 0 {
                return Ok(q);
            }
            remaining -= 1;
        }
        q += m;
    }
}

/// Writes a prime `q ≡ 1 (mod 4)` as `α² + β²` with `α ≥ β ≥ 0`.
///
/// Uses Cornacchia's reduction from a square root of -1 mod q; the
/// representation is unique up to order and signs.
pub fn two_squares(q: &BigInt) -> Result<(BigInt, BigInt)> {
    require_prime(q)?;
    let four = BigInt::from(4);
    if q.mod_floor(&four) != BigInt::one() {
        return Err(Error::WrongResidue {
            value: q.clone(),
            residue: 1,
            modulus: 4,
        });
    }
    // A non-residue c gives c^((q-1)/4) as a square root of -1.
    let mut c = BigInt::from(2);
    while legendre_unchecked(&c, q).is_plus() {
        c += 1;
    }
    let root = c.modpow(&((q - 1) / &four), q);
    let (mut r0, mut r1) = (q.clone(), root);
    while &r1 * &r1 > *q {
        let r2 = &r0 % &r1;
        r0 = r1;
        r1 = r2;
    }
    let rest = q - &r1 * &r1;
    let other = num_integer::Roots::sqrt(&rest);
    debug_assert_eq!(&other * &other, rest);
    Ok(if r1 >= other { (r1, other) } else { (other, r1) })
}
