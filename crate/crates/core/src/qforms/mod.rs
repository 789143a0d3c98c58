//! Diagonal quadratic forms over Q and their local and global invariants.

mod diagonalize;
mod search;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::padic::{hilbert, is_square_local, Place, Sign};
use crate::primes::{is_perfect_square, odd_prime_divisors};

pub use diagonalize::{diagonalize, Diagonalization, SymmetricRationalMatrix};
pub use search::isotropy_search;

/// `a₁x₁² + … + aₙxₙ²` with nonzero integer coefficients.
///
/// Text form is `<a1,a2,...,an>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiagonalForm {
    coeffs: Vec<BigInt>,
}

impl DiagonalForm {
    pub fn new(coeffs: Vec<BigInt>) -> Result<DiagonalForm> {
        if coeffs.is_empty() {
            return Err(Error::FormSyntax("a form needs at least one coefficient".into()));
        }
        if coeffs.iter().any(Zero::is_zero) {
            return Err(Error::ZeroCoefficient);
        }
        Ok(DiagonalForm { coeffs })
    }

    pub fn from_i64s(coeffs: &[i64]) -> Result<DiagonalForm> {
        DiagonalForm::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn determinant(&self) -> BigInt {
        self.coeffs.iter().product()
    }

    pub fn signature(&self) -> Signature {
        let positives = self.coeffs.iter().filter(|c| c.is_positive()).count();
        Signature {
            positives,
            negatives: self.rank() - positives,
        }
    }

    pub fn is_definite(&self) -> bool {
        let sig = self.signature();
        sig.positives == 0 || sig.negatives == 0
    }

    /// `λ·f`; `λ` must be nonzero.
    pub fn scaled(&self, lambda: &BigInt) -> Result<DiagonalForm> {
        DiagonalForm::new(self.coeffs.iter().map(|c| c * lambda).collect())
    }

    /// `f(x)`. Panics if `x` has the wrong length.
    pub fn evaluate(&self, x: &[BigInt]) -> BigInt {
        self.bilinear(x, x)
    }

    /// The associated bilinear form `Σ aᵢxᵢyᵢ`. Panics on length mismatch.
    pub fn bilinear(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        assert_eq!(x.len(), self.rank(), "vector length must match the rank");
        assert_eq!(y.len(), self.rank(), "vector length must match the rank");
        self.coeffs
            .iter()
            .zip(x.iter().zip(y))
            .map(|(a, (u, v))| a * u * v)
            .sum()
    }

    /// The orthogonal sum `self ⊥ other`.
    pub fn direct_sum(&self, other: &DiagonalForm) -> DiagonalForm {
        let mut coeffs = self.coeffs.clone();
        coeffs.extend(other.coeffs.iter().cloned());
        DiagonalForm { coeffs }
    }
}

impl fmt::Display for DiagonalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ">")
    }
}

impl FromStr for DiagonalForm {
    type Err = Error;

    /// Accepts `<1,1,1,-7>`; brackets and spaces are optional.
    fn from_str(s: &str) -> Result<DiagonalForm> {
        let t = s.trim();
        let t = t.strip_prefix('<').unwrap_or(t);
        let t = t.strip_suffix('>').unwrap_or(t);
        let coeffs = t
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::FormSyntax(format!("bad coefficient {part:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        DiagonalForm::new(coeffs)
    }
}

impl Serialize for DiagonalForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::json::bigint_vec(&self.coeffs, s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Signature {
    pub positives: usize,
    pub negatives: usize,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.positives, self.negatives)
    }
}

/// Hasse invariant and determinant square class at one place.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalInvariant {
    pub place: Place,
    pub hasse: Sign,
    pub det_is_square: bool,
}

pub fn signature(f: &DiagonalForm) -> Signature {
    f.signature()
}

/// `c_v(f) = ∏_{i<j} (aᵢ, aⱼ)_v`.
pub fn hasse_invariant(f: &DiagonalForm, place: &Place) -> Result<Sign> {
    let a = f.coeffs();
    let mut acc = Sign::Plus;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            acc = acc * hilbert(&a[i], &a[j], place)?;
        }
    }
    Ok(acc)
}

pub fn local_invariant(f: &DiagonalForm, place: &Place) -> Result<LocalInvariant> {
    Ok(LocalInvariant {
        place: place.clone(),
        hasse: hasse_invariant(f, place)?,
        det_is_square: is_square_local(&f.determinant(), place)?,
    })
}

/// Local anisotropy at any place and any rank.
///
/// Finite places use the classical criteria: rank 1 is anisotropic; rank 2
/// iff `-d` is not a square; rank 3 iff `(-1,-d) ≠ c`; rank 4 iff `d` is a
/// square and `c = -(-1,-1)`; rank ≥ 5 never. At the real place a form is
/// anisotropic iff it is definite.
pub fn local_anisotropic(f: &DiagonalForm, place: &Place) -> Result<bool> {
    if !place.is_finite() {
        return Ok(f.is_definite());
    }
    let d = f.determinant();
    Ok(match f.rank() {
        1 => true,
        2 => !is_square_local(&-d, place)?,
        3 => hilbert(&BigInt::from(-1), &-d, place)? != hasse_invariant(f, place)?,
        4 => is_square_local(&d, place)? && anisotropic_rank4_hasse(f, place)?,
        _ => false,
    })
}

fn anisotropic_rank4_hasse(f: &DiagonalForm, place: &Place) -> Result<bool> {
    let minus_one = BigInt::from(-1);
    Ok(hasse_invariant(f, place)? == -hilbert(&minus_one, &minus_one, place)?)
}

/// Anisotropy of a quaternary form over a finite completion: the
/// determinant is a local square and `c_v(f) = -(-1,-1)_v`.
pub fn local_anisotropic_rank4(f: &DiagonalForm, place: &Place) -> Result<bool> {
    if f.rank() != 4 {
        return Err(Error::WrongRank {
            expected: 4,
            found: f.rank(),
        });
    }
    if !place.is_finite() {
        return Err(Error::RealPlaceNotAllowed);
    }
    Ok(is_square_local(&f.determinant(), place)? && anisotropic_rank4_hasse(f, place)?)
}

/// Whether the ternary form `g` represents `s` over the completion at
/// `place`.
///
/// At a finite place `g` represents `s` unless `s ≡ -d(g)` modulo squares
/// and `(-1, -d(g)) ≠ c(g)`. At the real place it is a sign condition.
pub fn ternary_represents(g: &DiagonalForm, s: &BigInt, place: &Place) -> Result<bool> {
    if g.rank() != 3 {
        return Err(Error::WrongRank {
            expected: 3,
            found: g.rank(),
        });
    }
    if s.is_zero() {
        return Err(Error::ZeroInput);
    }
    if !place.is_finite() {
        return Ok(g.coeffs().iter().any(|c| c.is_positive() == s.is_positive()));
    }
    let minus_d = -g.determinant();
    let same_class = is_square_local(&(s * &minus_d), place)?;
    if !same_class {
        return Ok(true);
    }
    Ok(hilbert(&BigInt::from(-1), &minus_d, place)? == hasse_invariant(g, place)?)
}

/// Result of a global anisotropy decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnisotropyDecision {
    pub anisotropic: bool,
    pub witness: Option<Place>,
}

/// The 2-adic place followed by the odd primes dividing some coefficient.
pub fn candidate_places(f: &DiagonalForm) -> Result<Vec<Place>> {
    let mut places = vec![Place::Two];
    let mut primes: Vec<BigInt> = Vec::new();
    for c in f.coeffs() {
        primes.extend(odd_prime_divisors(c)?);
    }
    primes.sort();
    primes.dedup();
    for p in primes {
        places.push(Place::odd(p)?);
    }
    Ok(places)
}

/// Anisotropy over Q with a witnessing place.
///
/// Definite forms are anisotropic at the real place. Indefinite forms of
/// rank ≥ 5 are isotropic. Otherwise the form is anisotropic iff it is so
/// at some finite place, and only the candidate places can witness it: at
/// an odd prime dividing no coefficient a diagonal form of rank ≥ 3 has
/// unit determinant and is isotropic, and in rank 2 a non-square `-d` has
/// odd valuation at some prime dividing `d`.
pub fn global_anisotropic(f: &DiagonalForm) -> Result<AnisotropyDecision> {
    if f.is_definite() {
        return Ok(AnisotropyDecision {
            anisotropic: true,
            witness: Some(Place::Real),
        });
    }
    if f.rank() >= 5 {
        return Ok(AnisotropyDecision {
            anisotropic: false,
            witness: None,
        });
    }
    for place in candidate_places(f)? {
        if local_anisotropic(f, &place)? {
            return Ok(AnisotropyDecision {
                anisotropic: true,
                witness: Some(place),
            });
        }
    }
    Ok(AnisotropyDecision {
        anisotropic: false,
        witness: None,
    })
}

fn require_same_rank(f: &DiagonalForm, g: &DiagonalForm) -> Result<()> {
    if f.rank() != g.rank() {
        return Err(Error::RankMismatch {
            left: f.rank(),
            right: g.rank(),
        });
    }
    Ok(())
}

/// Places where Hasse invariants of `f` and `g` must be compared.
fn comparison_places(f: &DiagonalForm, g: &DiagonalForm) -> Result<Vec<Place>> {
    let mut places = vec![Place::Real, Place::Two];
    let dd = f.determinant() * g.determinant();
    for p in odd_prime_divisors(&dd)? {
        places.push(Place::odd(p)?);
    }
    Ok(places)
}

/// Rational equivalence by the complete invariants: rank, signature,
/// determinant square class and Hasse invariants at every place where
/// they can differ.
pub fn equivalent_over_q(f: &DiagonalForm, g: &DiagonalForm) -> Result<bool> {
    require_same_rank(f, g)?;
    if f.signature() != g.signature() {
        return Ok(false);
    }
    if !is_perfect_square(&(f.determinant() * g.determinant())) {
        return Ok(false);
    }
    for place in comparison_places(f, g)? {
        if hasse_invariant(f, &place)? != hasse_invariant(g, &place)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Squarefree products of subsets of `{-1, 2} ∪ primes`, ordered by
/// absolute value, positive before negative.
fn squarefree_scalars(primes: &[BigInt]) -> Vec<BigInt> {
    let mut support = vec![BigInt::from(2)];
    support.extend(primes.iter().cloned());
    let mut positive: Vec<BigInt> = vec![BigInt::one()];
    for p in &support {
        let more: Vec<BigInt> = positive.iter().map(|x| x * p).collect();
        positive.extend(more);
    }
    positive.sort();
    positive
        .into_iter()
        .flat_map(|x| [x.clone(), -x])
        .collect()
}

/// Projective equivalence: the first squarefree `λ`, supported on
/// `{-1, 2}` and the odd primes dividing `d(f)·d(g)`, with `λ·f ≅ g`.
pub fn projectively_equivalent(f: &DiagonalForm, g: &DiagonalForm) -> Result<Option<BigInt>> {
    require_same_rank(f, g)?;
    let dd = f.determinant() * g.determinant();
    let primes = odd_prime_divisors(&dd)?;
    for lambda in squarefree_scalars(&primes) {
        if equivalent_over_q(&f.scaled(&lambda)?, g)? {
            return Ok(Some(lambda));
        }
    }
    Ok(None)
}
