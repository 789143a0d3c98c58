//! Brute-force local isotropy oracle.
//!
//! Decides whether a diagonal form has a nontrivial zero over Q_p by
//! exhaustive search for primitive residue vectors modulo `p^k`, accepting
//! a residue vector only when Hensel's lemma guarantees it lifts. It shares
//! no code with the symbol formulas in [`crate::padic`] and exists to check
//! them.
//!
//! # Depth rule
//!
//! Coefficients are first normalized by changes of variable that do not
//! affect isotropy: even powers of `p` are stripped from each coefficient,
//! and if more coefficients carry a single `p` than not, the whole form is
//! scaled by `p` and stripped again. Afterwards every coefficient has
//! valuation 0 or 1 and the units are at least as numerous as the others.
//!
//! Let `x` be a primitive zero and `δ = min_i v(2·a_i·x_i)`, the valuation
//! of the gradient. If a unit coefficient meets a unit coordinate then
//! `δ = v(2)`; otherwise all unit-coefficient coordinates are divisible by
//! `p` and `δ ≤ v(2) + 1`, and this can only happen when at least two
//! coefficients are divisible by `p` (a lone one leaves the form with
//! valuation exactly 1). So every zero has `δ ≤ δmax` with
//!
//! ```text
//! δmax = v(2)        if at most one coefficient is divisible by p
//! δmax = v(2) + 1    otherwise
//! ```
//!
//! and a residue vector mod `p^k` with `Q ≡ 0` lifts whenever
//! `2δ + 1 ≤ k`. The search is decisive from depth `k0 = 2·δmax + 1`,
//! which never exceeds `v_p(a) + v_p(b) + 3` (or 6 at p = 2) for the
//! ternary forms behind Hilbert symbols. A caller-supplied depth of at
//! least `k0` is answered by searching at exactly `k0`; a smaller depth
//! can still certify a zero but otherwise yields `Indeterminate`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::{split_valuation, Place, Sign};

/// Largest modulus `p^k` the oracle is willing to enumerate.
const MAX_MODULUS: u64 = 1 << 24;
/// Largest number of residue vectors visited per chart.
const MAX_WORK: u64 = 1 << 30;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum LocalZero {
    /// A liftable zero, given by residues modulo `modulus`, in normalized
    /// coordinates.
    Isotropic { witness: Vec<u64>, modulus: u64 },
    Anisotropic,
    Indeterminate,
}

impl LocalZero {
    pub fn is_isotropic(&self) -> bool {
        matches!(self, LocalZero::Isotropic { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleVerdict {
    Plus,
    Minus,
    Indeterminate,
}

impl OracleVerdict {
    pub fn sign(self) -> Option<Sign> {
        match self {
            OracleVerdict::Plus => Some(Sign::Plus),
            OracleVerdict::Minus => Some(Sign::Minus),
            OracleVerdict::Indeterminate => None,
        }
    }
}

/// The decisive search depth for a form at the prime `p`.
pub fn decisive_depth(coeffs: &[BigInt], p: u64) -> Result<u32> {
    let normalized = normalize(coeffs, p)?;
    Ok(normalized.decisive_depth)
}

struct Normalized {
    coeffs: Vec<BigInt>,
    decisive_depth: u32,
}

fn normalize(coeffs: &[BigInt], p: u64) -> Result<Normalized> {
    if coeffs.iter().any(Zero::is_zero) {
        return Err(Error::ZeroCoefficient);
    }
    let bp = BigInt::from(p);
    let strip = |c: &BigInt| {
        let d = split_valuation(c, &bp);
        if d.exponent % 2 == 1 {
            d.unit * &bp
        } else {
            d.unit
        }
    };
    let mut out: Vec<BigInt> = coeffs.iter().map(strip).collect();
    let divisible = |v: &[BigInt]| v.iter().filter(|c| (*c % &bp).is_zero()).count();
    if 2 * divisible(&out) > out.len() {
        out = out.iter().map(|c| strip(&(c * &bp))).collect();
    }
    let base = u32::from(p == 2);
    let delta_max = if divisible(&out) >= 2 { base + 1 } else { base };
    Ok(Normalized {
        coeffs: out,
        decisive_depth: 2 * delta_max + 1,
    })
}

fn residue(c: &BigInt, modulus: u64) -> u64 {
    c.mod_floor(&BigInt::from(modulus))
        .to_u64()
        .expect("residue below modulus")
}

fn valuation_u64(x: u64, p: u64, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut x = x;
    let mut v = 0;
    while x % p == 0 && v < cap {
        x /= p;
        v += 1;
    }
    v
}

/// Searches for a nontrivial zero of the diagonal form `coeffs` at `place`.
pub fn local_zero_oracle(coeffs: &[BigInt], place: &Place, depth: u32) -> Result<LocalZero> {
    if coeffs.is_empty() {
        return Err(Error::InvalidParameters("empty form".into()));
    }
    if coeffs.iter().any(Zero::is_zero) {
        return Err(Error::ZeroCoefficient);
    }
    let p = match place {
        Place::Real => {
            let pos = coeffs.iter().any(Signed::is_positive);
            let neg = coeffs.iter().any(Signed::is_negative);
            return Ok(if pos && neg {
                LocalZero::Isotropic {
                    witness: Vec::new(),
                    modulus: 0,
                }
            } else {
                LocalZero::Anisotropic
            });
        }
        other => other
            .characteristic()
            .and_then(|c| c.to_u64())
            .ok_or_else(|| Error::OracleTooLarge(format!("prime {other} exceeds u64")))?,
    };
    if depth == 0 {
        return Ok(LocalZero::Indeterminate);
    }
    let normalized = normalize(coeffs, p)?;
    let decisive = depth >= normalized.decisive_depth;
    let k = if decisive {
        normalized.decisive_depth
    } else {
        depth
    };
    let modulus = checked_power(p, k)?;
    match search(&normalized.coeffs, p, k, modulus)? {
        Some(witness) => Ok(LocalZero::Isotropic { witness, modulus }),
        None if decisive => Ok(LocalZero::Anisotropic),
        None => Ok(LocalZero::Indeterminate),
    }
}

fn checked_power(p: u64, k: u32) -> Result<u64> {
    p.checked_pow(k)
        .filter(|m| *m <= MAX_MODULUS)
        .ok_or_else(|| Error::OracleTooLarge(format!("modulus {p}^{k}")))
}

/// Primitive vectors are normalized so that the first unit coordinate is 1
/// (scaling by a unit multiplies the form by a unit square and preserves
/// gradient valuations). The last coordinate is solved by table lookup.
fn search(coeffs: &[BigInt], p: u64, k: u32, modulus: u64) -> Result<Option<Vec<u64>>> {
    let n = coeffs.len();
    let m = modulus as u128;
    let a: Vec<u64> = coeffs.iter().map(|c| residue(c, modulus)).collect();
    let val_a: Vec<u32> = a.iter().map(|&c| valuation_u64(c, p, k)).collect();
    let base = u32::from(p == 2);

    let accepts = |x: &[u64]| -> bool {
        let delta = (0..n)
            .map(|i| base + val_a[i] + valuation_u64(x[i], p, k))
            .min()
            .unwrap_or(k);
        2 * delta + 1 <= k
    };

    if n == 1 {
        let x = [1u64];
        return Ok((a[0] % modulus == 0 && accepts(&x)).then(|| x.to_vec()));
    }

    // residue of a_{n-1} x^2 -> all x producing it
    let last = n - 1;
    let mut table: HashMap<u64, Vec<u64>> = HashMap::new();
    for x in 0..modulus {
        let v = ((a[last] as u128 * x as u128 % m) * x as u128 % m) as u64;
        table.entry(v).or_default().push(x);
    }

    let step_of = |i: usize, chart: usize| -> u64 { if i < chart { p } else { 1 } };
    for chart in 0..n {
        // coordinates other than `chart` and `last` are enumerated
        let free: Vec<usize> = (0..last).filter(|&i| i != chart).collect();
        let mut work: u64 = 1;
        for &i in &free {
            work = work.saturating_mul(modulus / step_of(i, chart));
        }
        if work > MAX_WORK {
            return Err(Error::OracleTooLarge(format!(
                "{work} residue vectors modulo {modulus}"
            )));
        }
        let mut x = vec![0u64; n];
        x[chart] = 1;
        loop {
            let partial: u128 = (0..last)
                .map(|i| a[i] as u128 * (x[i] as u128 * x[i] as u128 % m) % m)
                .sum::<u128>()
                % m;
            let target = ((m - partial) % m) as u64;
            if chart == last {
                let v = a[last] % modulus;
                if v == target && accepts(&x) {
                    return Ok(Some(x));
                }
            } else if let Some(cands) = table.get(&target) {
                for &c in cands {
                    x[last] = c;
                    if accepts(&x) {
                        return Ok(Some(x));
                    }
                }
                x[last] = 0;
            }
            // odometer over the free coordinates
            let mut carried = true;
            for &i in &free {
                let step = step_of(i, chart);
                x[i] += step;
                if x[i] < modulus {
                    carried = false;
                    break;
                }
                x[i] = 0;
            }
            if carried {
                break;
            }
        }
    }
    Ok(None)
}

/// Decides the Hilbert symbol `(a, b)` at `place` by searching for a zero of
/// `a·x² + b·y² - z²`. Never returns a sign the search has not established.
pub fn hilbert_oracle(a: &BigInt, b: &BigInt, place: &Place, depth: u32) -> Result<OracleVerdict> {
    let coeffs = [a.clone(), b.clone(), BigInt::from(-1)];
    Ok(match local_zero_oracle(&coeffs, place, depth)? {
        LocalZero::Isotropic { .. } => OracleVerdict::Plus,
        LocalZero::Anisotropic => OracleVerdict::Minus,
        LocalZero::Indeterminate => OracleVerdict::Indeterminate,
    })
}

/// Whether `n` is a local square, decided by a zero of `n·x² - z²`.
pub fn square_oracle(n: &BigInt, place: &Place, depth: u32) -> Result<Option<bool>> {
    let coeffs = [n.clone(), BigInt::from(-1)];
    Ok(match local_zero_oracle(&coeffs, place, depth)? {
        LocalZero::Isotropic { .. } => Some(true),
        LocalZero::Anisotropic => Some(false),
        LocalZero::Indeterminate => None,
    })
}
