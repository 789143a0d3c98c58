//! Certified anisotropic subforms of signature (3,1) inside the rank-5
//! forms `⟨-1,1,1,aS,a⟩` (S ≡ 1 mod 4) and `⟨1,1,1,aS,-a⟩` (S ≡ 3 mod 4).
//!
//! Each constructor returns a [`SubformCertificate`]: an orthogonal basis in
//! ambient coordinates, the diagonal subform it spans, and a finite place
//! where that subform is anisotropic. [`verify_certificate`] re-derives all
//! of it from scratch.

use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::json;
use crate::oracle::{decisive_depth, local_zero_oracle, LocalZero};
use crate::padic::{dirichlet_prime, legendre, two_squares, Place, Sign};
use crate::primes::{factorize, is_prime, odd_prime_divisors};
use crate::qforms::{
    isotropy_search, local_anisotropic_rank4, projectively_equivalent, ternary_represents,
    DiagonalForm, Signature,
};

/// Search bound used by [`generate_family`] for the ternary solver.
pub const DEFAULT_TERNARY_BOUND: u64 = 256;
/// Exhaustive integer search bound applied by [`verify_certificate`].
pub const DEFAULT_SEARCH_BOUND: u64 = 100;

/// The four constructions, by `S mod 4` and the parity of `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityCase {
    /// S ≡ 1 mod 4, s even.
    Case1Even,
    /// S ≡ 1 mod 4, s odd.
    Case1Odd,
    /// S ≡ 3 mod 4, s even.
    Case2Even,
    /// S ≡ 3 mod 4, s odd.
    Case2Odd,
}

impl fmt::Display for ParityCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParityCase::Case1Even => "case1_even",
            ParityCase::Case1Odd => "case1_odd",
            ParityCase::Case2Even => "case2_even",
            ParityCase::Case2Odd => "case2_odd",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonsonParameters {
    #[serde(rename = "S", serialize_with = "json::bigint")]
    pub s_value: BigInt,
    /// Number of prime factors of S.
    #[serde(rename = "s")]
    pub prime_count: usize,
    #[serde(serialize_with = "json::bigint")]
    pub a: BigInt,
    #[serde(serialize_with = "json::bigint_vec")]
    pub primes: Vec<BigInt>,
}

impl MonsonParameters {
    pub fn parity_case(&self) -> ParityCase {
        let one_mod_four = self.s_value.mod_floor(&BigInt::from(4)).is_one();
        match (one_mod_four, self.prime_count % 2 == 0) {
            (true, true) => ParityCase::Case1Even,
            (true, false) => ParityCase::Case1Odd,
            (false, true) => ParityCase::Case2Even,
            (false, false) => ParityCase::Case2Odd,
        }
    }
}

/// The primes of a squarefree odd `S > 1`, ascending.
fn squarefree_odd_primes(s: &BigInt) -> Result<Vec<BigInt>> {
    if s <= &BigInt::one() || s.is_even() {
        return Err(Error::InvalidParameters(format!(
            "S must be an odd integer greater than 1, got {s}"
        )));
    }
    let factors = factorize(s)?;
    if factors.iter().any(|(_, e)| *e > 1) {
        return Err(Error::InvalidParameters(format!("S = {s} is not squarefree")));
    }
    Ok(factors.into_iter().map(|(p, _)| p).collect())
}

/// Whether `a` satisfies the parity and Legendre conditions for `S`.
fn admissible_a(a: &BigInt, s: &BigInt, primes: &[BigInt]) -> Result<bool> {
    let four = BigInt::from(4);
    if !is_prime(a)? || a.is_even() || (s % a).is_zero() {
        return Ok(false);
    }
    let s_is_one = s.mod_floor(&four).is_one();
    let exponent = if s_is_one { primes.len() } else { primes.len() + 1 };
    let wanted = if exponent % 2 == 0 { BigInt::one() } else { BigInt::from(3) };
    if a.mod_floor(&four) != wanted {
        return Ok(false);
    }
    for p in primes {
        if legendre(&-a, p)? != Sign::Minus {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The `(skip+1)`-th admissible odd prime `a` for `S`, in increasing order.
///
/// The scan is unbounded: Dirichlet's theorem guarantees the admissible
/// set is infinite.
pub fn monson_parameters(s: &BigInt, skip: u64) -> Result<MonsonParameters> {
    let primes = squarefree_odd_primes(s)?;
    let mut a = BigInt::from(3);
    let mut remaining = skip;
    loop {
        if admissible_a(&a, s, &primes)? {
            if remaining == 0 {
                return Ok(MonsonParameters {
                    s_value: s.clone(),
                    prime_count: primes.len(),
                    a,
                    primes,
                });
            }
            remaining -= 1;
        }
        a += 2;
    }
}

/// Checks user-supplied `(S, a)` against the admissibility conditions.
pub fn monson_parameters_with_a(s: &BigInt, a: &BigInt) -> Result<MonsonParameters> {
    let primes = squarefree_odd_primes(s)?;
    if !admissible_a(a, s, &primes)? {
        return Err(Error::InvalidParameters(format!("a = {a} is not admissible for S = {s}")));
    }
    Ok(MonsonParameters {
        s_value: s.clone(),
        prime_count: primes.len(),
        a: a.clone(),
        primes,
    })
}

/// The rank-5 form attached to admissible parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AmbientForm {
    pub form: DiagonalForm,
    pub basis_labels: [&'static str; 5],
}

pub fn ambient_form(params: &MonsonParameters) -> AmbientForm {
    let a = &params.a;
    let a_s = a * &params.s_value;
    let one = BigInt::one();
    let coeffs = match params.parity_case() {
        ParityCase::Case1Even | ParityCase::Case1Odd => vec![-&one, one.clone(), one, a_s, a.clone()],
        ParityCase::Case2Even | ParityCase::Case2Odd => vec![one.clone(), one.clone(), one, a_s, -a],
    };
    AmbientForm {
        form: DiagonalForm::new(coeffs).expect("coefficients are nonzero"),
        basis_labels: ["e0", "e1", "e2", "e3", "e4"],
    }
}

/// The scalars each construction was built from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum Construction {
    Case1Even {
        #[serde(serialize_with = "json::bigint")]
        q: BigInt,
    },
    Case1Odd {
        #[serde(serialize_with = "json::bigint")]
        p: BigInt,
        #[serde(serialize_with = "json::bigint")]
        m: BigInt,
    },
    Case2Even {
        #[serde(serialize_with = "json::bigint")]
        alpha: BigInt,
        #[serde(serialize_with = "json::bigint")]
        beta: BigInt,
        #[serde(serialize_with = "json::bigint")]
        m: BigInt,
    },
    Case2Odd {
        #[serde(serialize_with = "json::bigint")]
        p: BigInt,
        #[serde(serialize_with = "json::bigint")]
        q: BigInt,
        #[serde(serialize_with = "json::bigint")]
        alpha: BigInt,
        #[serde(serialize_with = "json::bigint")]
        beta: BigInt,
        #[serde(serialize_with = "json::bigint")]
        x: BigInt,
        #[serde(serialize_with = "json::bigint")]
        y: BigInt,
        #[serde(serialize_with = "json::bigint")]
        z: BigInt,
        #[serde(serialize_with = "json::bigint")]
        m: BigInt,
        #[serde(rename = "S_prime", serialize_with = "json::bigint")]
        s_prime: BigInt,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubformCertificate {
    #[serde(serialize_with = "json::bigint_matrix")]
    pub basis: Vec<Vec<BigInt>>,
    pub subform: DiagonalForm,
    pub witness_place: Place,
    pub construction: Construction,
}

fn require_case(params: &MonsonParameters, expected: ParityCase) -> Result<()> {
    let found = params.parity_case();
    if found != expected {
        return Err(Error::ParityMismatch(format!(
            "S = {} with s = {} is {found}, not {expected}",
            params.s_value, params.prime_count
        )));
    }
    Ok(())
}

fn unit_vector(i: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); 5];
    v[i] = BigInt::one();
    v
}

fn certificate(
    ambient: &AmbientForm,
    basis: Vec<Vec<BigInt>>,
    witness_place: Place,
    construction: Construction,
) -> Result<SubformCertificate> {
    let coeffs = basis.iter().map(|v| ambient.form.evaluate(v)).collect();
    let subform = DiagonalForm::new(coeffs)?;
    Ok(SubformCertificate {
        basis,
        subform,
        witness_place,
        construction,
    })
}

/// S ≡ 1 mod 4, s even: `u = ((q+1)/2)e₀ + ((q-1)/2)e₁` with `q` the
/// `(q_index+1)`-th prime `≡ -S mod 8`, giving `⟨-q,1,aS,a⟩` on
/// `{u,e₂,e₃,e₄}`, anisotropic at 2.
pub fn case1_even(params: &MonsonParameters, q_index: u64) -> Result<SubformCertificate> {
    require_case(params, ParityCase::Case1Even)?;
    let eight = BigInt::from(8);
    let q = dirichlet_prime(&(-&params.s_value).mod_floor(&eight), &eight, q_index)?;
    let two = BigInt::from(2);
    let mut u = vec![BigInt::zero(); 5];
    u[0] = (&q + 1) / &two;
    u[1] = (&q - 1) / &two;
    let ambient = ambient_form(params);
    let basis = vec![u, unit_vector(2), unit_vector(3), unit_vector(4)];
    certificate(&ambient, basis, Place::Two, Construction::Case1Even { q })
}

/// The smallest prime divisor of S in the given class mod 4.
fn smallest_prime_divisor(params: &MonsonParameters, residue: u32) -> Result<BigInt> {
    let four = BigInt::from(4);
    params
        .primes
        .iter()
        .find(|p| p.mod_floor(&four) == BigInt::from(residue))
        .cloned()
        .ok_or_else(|| {
            Error::InvalidParameters(format!(
                "S = {} has no prime divisor congruent to {residue} mod 4",
                params.s_value
            ))
        })
}

/// S ≡ 1 mod 4, s odd: with `p` the smallest prime divisor of S that is
/// `≡ 1 mod 4` and `p ∤ m`, the vectors `u = ((S+1)/2)e₀ + ((S-1)/2)e₁` and
/// `v = ((S-1)/2)e₀ + ((S+1)/2)e₁ + m·e₂` give `⟨-S, S+m², aS, a⟩` on
/// `{u,v,e₃,e₄}`, anisotropic at `p`.
pub fn case1_odd(params: &MonsonParameters, m: &BigInt) -> Result<SubformCertificate> {
    require_case(params, ParityCase::Case1Odd)?;
    if !m.is_positive() {
        return Err(Error::InvalidParameters(format!("m must be positive, got {m}")));
    }
    let p = smallest_prime_divisor(params, 1)?;
    if (m % &p).is_zero() {
        return Err(Error::DivisibleByPrime { n: m.clone(), p });
    }
    let s = &params.s_value;
    let two = BigInt::from(2);
    let plus: BigInt = (s + 1) / &two;
    let minus: BigInt = (s - 1) / &two;
    let mut u = vec![BigInt::zero(); 5];
    u[0] = plus.clone();
    u[1] = minus.clone();
    let mut v = vec![BigInt::zero(); 5];
    v[0] = minus;
    v[1] = plus;
    v[2] = m.clone();
    let ambient = ambient_form(params);
    let basis = vec![u, v, unit_vector(3), unit_vector(4)];
    let place = Place::odd(p.clone())?;
    certificate(&ambient, basis, place, Construction::Case1Odd { p, m: m.clone() })
}

/// The seed `(α, β)` for case 2 with s even, by `a` and `S` mod 8.
///
/// For `a ≡ 3`, `S ≡ 7 (mod 8)` the pair `(2, 0)` would give
/// `m = 4aS²`, which is even; `(2, 1)` is the smallest pair with
/// `m ≡ 7 (mod 8)` in that case.
pub fn case2_even_seed(params: &MonsonParameters) -> Result<(u64, u64)> {
    let eight = BigInt::from(8);
    let a8 = params.a.mod_floor(&eight).to_u64().expect("residue mod 8");
    let s8 = params.s_value.mod_floor(&eight).to_u64().expect("residue mod 8");
    match (a8, s8) {
        (7, _) => Ok((1, 0)),
        (3, 7) => Ok((2, 1)),
        (3, 3) => Ok((3, 2)),
        _ => Err(Error::ParityMismatch(format!(
            "a = {} and S = {} do not fit case2_even",
            params.a, params.s_value
        ))),
    }
}

/// The `(index+1)`-th pair `α > β ≥ 0` in the seed's classes mod 4,
/// ordered by `α` then `β`.
fn case2_even_pair(seed: (u64, u64), index: u64) -> (u64, u64) {
    let (a0, b0) = seed;
    let mut remaining = index;
    let mut alpha = a0;
    loop {
        let mut beta = b0;
        while beta < alpha {
            if remaining == 0 {
                return (alpha, beta);
            }
            remaining -= 1;
            beta += 4;
        }
        alpha += 4;
    }
}

/// S ≡ 3 mod 4, s even: `u = β·e₃ + αS·e₄` has `f(u) = -m` with
/// `m = aS(α²S - β²) ≡ 7 mod 8`, so `⟨1,1,1,-m⟩` on `{e₀,e₁,e₂,u}` is
/// anisotropic at 2. `(α, β)` is the `choice_index`-th pair congruent to
/// the seed mod 4.
pub fn case2_even(params: &MonsonParameters, choice_index: u64) -> Result<SubformCertificate> {
    require_case(params, ParityCase::Case2Even)?;
    let seed = case2_even_seed(params)?;
    let (alpha, beta) = case2_even_pair(seed, choice_index);
    let (alpha, beta) = (BigInt::from(alpha), BigInt::from(beta));
    let s = &params.s_value;
    let mut u = vec![BigInt::zero(); 5];
    u[3] = beta.clone();
    u[4] = &alpha * s;
    let ambient = ambient_form(params);
    let m = -ambient.form.evaluate(&u);
    if !m.is_positive() || m.mod_floor(&BigInt::from(8)) != BigInt::from(7) {
        return Err(Error::ConstructionFailed(format!(
            "m = {m} for (alpha, beta) = ({alpha}, {beta}) is not positive and 7 mod 8"
        )));
    }
    let basis = vec![unit_vector(0), unit_vector(1), unit_vector(2), u];
    certificate(&ambient, basis, Place::Two, Construction::Case2Even { alpha, beta, m })
}

/// An integral point on `x² + q·y² - p²·z² = S·m²`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TernarySolution {
    #[serde(serialize_with = "json::bigint")]
    pub x: BigInt,
    #[serde(serialize_with = "json::bigint")]
    pub y: BigInt,
    #[serde(serialize_with = "json::bigint")]
    pub z: BigInt,
    #[serde(serialize_with = "json::bigint")]
    pub m: BigInt,
}

/// Solves `x² + q·y² - p²·z² = S·m²` with `m ≥ 1`.
///
/// Local representability of S by `⟨1, q, -p²⟩` is checked first at the
/// real place, at 2, and at the odd primes dividing `q·p·S`; elsewhere the
/// form is unimodular and represents everything. The box search then runs
/// with bounds 4, 8, 16, ... up to `search_bound`, scanning `m` outermost
/// and `(x, y)` lexicographically with `z` solved exactly. Exhausting the
/// bound is reported as [`Error::NotFound`], never as nonexistence.
pub fn solve_ternary(q: &BigInt, p: &BigInt, s: &BigInt, search_bound: u64) -> Result<TernarySolution> {
    solve_ternary_where(q, p, s, search_bound, |_| true)
}

fn small(n: &BigInt, what: &str) -> Result<i128> {
    n.to_i64()
        .map(i128::from)
        .ok_or_else(|| Error::Domain(format!("{what} = {n} is too large for the box search")))
}

fn solve_ternary_where(
    q: &BigInt,
    p: &BigInt,
    s: &BigInt,
    search_bound: u64,
    accept: impl Fn(&TernarySolution) -> bool,
) -> Result<TernarySolution> {
    for n in [q, p] {
        if !is_prime(n)? {
            return Err(Error::NotPrime(n.clone()));
        }
    }
    if !s.is_positive() {
        return Err(Error::InvalidParameters(format!("S must be positive, got {s}")));
    }
    let g = DiagonalForm::new(vec![BigInt::one(), q.clone(), -(p * p)])?;
    let mut places = vec![Place::Real, Place::Two];
    for r in odd_prime_divisors(&(q * p * s))? {
        places.push(Place::odd(r)?);
    }
    for place in &places {
        if !ternary_represents(&g, s, place)? {
            return Err(Error::InvalidParameters(format!(
                "{g} does not represent {s} at {place}, so no solution exists"
            )));
        }
    }
    let (qi, pi, si) = (small(q, "q")?, small(p, "p")?, small(s, "S")?);
    let p2 = pi * pi;
    let mut bound: u64 = 4.min(search_bound.max(1));
    loop {
        let b = bound as i128;
        for m in 1..=b {
            let target = si * m * m;
            for x in 0..=b {
                for y in 0..=b {
                    let rest = x * x + qi * y * y - target;
                    if rest < 0 || rest % p2 != 0 {
                        continue;
                    }
                    let z2 = (rest / p2) as u128;
                    let z = z2.sqrt();
                    if z * z != z2 || z > bound as u128 {
                        continue;
                    }
                    let sol = TernarySolution {
                        x: BigInt::from(x),
                        y: BigInt::from(y),
                        z: BigInt::from(z),
                        m: BigInt::from(m),
                    };
                    if accept(&sol) {
                        return Ok(sol);
                    }
                }
            }
        }
        if bound >= search_bound {
            return Err(Error::NotFound(format!(
                "no solution of x^2 + {q}y^2 - {p}^2 z^2 = {s}m^2 with coordinates up to {search_bound}"
            )));
        }
        bound = (bound * 2).min(search_bound);
    }
}

/// The `(q_index+1)`-th prime `q ≡ 1 mod 4` with `(q/p) = -1` and `q ∤ S`.
fn case2_odd_prime(p: &BigInt, s: &BigInt, q_index: u64) -> Result<BigInt> {
    let mut q = BigInt::from(5);
    let mut remaining = q_index;
    loop {
        if is_prime(&q)? && !(s % &q).is_zero() && legendre(&q, p)? == Sign::Minus {
            if remaining == 0 {
                return Ok(q);
            }
            remaining -= 1;
        }
        q += 4;
    }
}

/// S ≡ 3 mod 4, s odd: with `p` the smallest prime divisor of S that is
/// `≡ 3 mod 4`, `q = α² + β²` the `q_index`-th suitable prime and
/// `x² + q·y² - p²·z² = S·m²`, the vectors `w₁ = α·e₁ + β·e₂` and
/// `w₂ = x·e₀ + βy·e₁ - αy·e₂` give `⟨q, Sm²+p²z², aS, -a⟩` on
/// `{w₁,w₂,e₃,e₄}`, anisotropic at `p`.
///
/// Solutions with `p | m` are skipped: for them `Sm² + p²z²` loses the
/// single factor of `p` the anisotropy argument relies on.
pub fn case2_odd(params: &MonsonParameters, q_index: u64, search_bound: u64) -> Result<SubformCertificate> {
    require_case(params, ParityCase::Case2Odd)?;
    let p = smallest_prime_divisor(params, 3)?;
    let s = &params.s_value;
    let q = case2_odd_prime(&p, s, q_index)?;
    let (alpha, beta) = two_squares(&q)?;
    let sol = solve_ternary_where(&q, &p, s, search_bound, |t| !(&t.m % &p).is_zero())?;
    let mut w1 = vec![BigInt::zero(); 5];
    w1[1] = alpha.clone();
    w1[2] = beta.clone();
    let mut w2 = vec![BigInt::zero(); 5];
    w2[0] = sol.x.clone();
    w2[1] = &beta * &sol.y;
    w2[2] = -(&alpha * &sol.y);
    let ambient = ambient_form(params);
    let basis = vec![w1, w2, unit_vector(3), unit_vector(4)];
    let place = Place::odd(p.clone())?;
    let s_prime = s / &p;
    let construction = Construction::Case2Odd {
        p,
        q,
        alpha,
        beta,
        x: sol.x,
        y: sol.y,
        z: sol.z,
        m: sol.m,
        s_prime,
    };
    certificate(&ambient, basis, place, construction)
}

/// The certificate for the `index`-th candidate of the parameters' case.
///
/// Indices map to `q` for the two `q`-driven cases, to the `index`-th
/// positive `m` prime to `p` for case1_odd, and to the `(α, β)` choice for
/// case2_even.
pub fn candidate(params: &MonsonParameters, index: u64, search_bound: u64) -> Result<SubformCertificate> {
    match params.parity_case() {
        ParityCase::Case1Even => case1_even(params, index),
        ParityCase::Case1Odd => {
            let p = smallest_prime_divisor(params, 1)?;
            let p = p.to_u64().ok_or_else(|| Error::Domain(format!("p = {p} too large")))?;
            // index-th positive integer not divisible by p
            let m = index + 1 + index / (p - 1);
            case1_odd(params, &BigInt::from(m))
        }
        ParityCase::Case2Even => case2_even(params, index),
        ParityCase::Case2Odd => case2_odd(params, index, search_bound),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The check could not run, for instance an oracle over its workload limit.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub ok: bool,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Bound for the exhaustive integer search; `None` skips it.
    pub search_bound: Option<u64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            search_bound: Some(DEFAULT_SEARCH_BOUND),
        }
    }
}

fn check(name: &'static str, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name,
        status: if passed { CheckStatus::Pass } else { CheckStatus::Fail },
        detail: detail.into(),
    }
}

/// Re-derives a certificate with default options.
pub fn verify_certificate(ambient: &AmbientForm, cert: &SubformCertificate) -> VerificationReport {
    verify_certificate_with(ambient, cert, VerifyOptions::default())
}

/// Recomputes the Gram matrix of the basis, the signature, the anisotropy
/// criterion at the witness place, the brute-force local oracle at that
/// place and, optionally, an exhaustive integer search. Nothing stored in
/// the certificate beyond the basis, subform and place is trusted.
pub fn verify_certificate_with(
    ambient: &AmbientForm,
    cert: &SubformCertificate,
    options: VerifyOptions,
) -> VerificationReport {
    let mut checks = Vec::new();
    let f = &ambient.form;
    let n = f.rank();
    let shapes_ok = cert.basis.len() == 4 && cert.basis.iter().all(|v| v.len() == n) && cert.subform.rank() == 4;
    checks.push(check(
        "shape",
        shapes_ok,
        format!("{} basis vectors in an ambient form of rank {n}", cert.basis.len()),
    ));
    if !shapes_ok {
        return VerificationReport { ok: false, checks };
    }

    let mut gram_ok = true;
    let mut detail = String::from("basis Gram matrix equals diag(subform)");
    'outer: for i in 0..4 {
        for j in 0..4 {
            let value = f.bilinear(&cert.basis[i], &cert.basis[j]);
            let expected = if i == j { cert.subform.coeffs()[i].clone() } else { BigInt::zero() };
            if value != expected {
                gram_ok = false;
                detail = format!("entry ({i},{j}) is {value}, expected {expected}");
                break 'outer;
            }
        }
    }
    checks.push(check("gram", gram_ok, detail));

    let sig = cert.subform.signature();
    checks.push(check(
        "signature",
        sig == Signature { positives: 3, negatives: 1 },
        format!("signature {sig}"),
    ));

    let place = &cert.witness_place;
    checks.push(match local_anisotropic_rank4(&cert.subform, place) {
        Ok(aniso) => check("local_criterion", aniso, format!("determinant and Hasse criterion at {place}")),
        Err(e) => check("local_criterion", false, e.to_string()),
    });

    checks.push(oracle_check(&cert.subform, place));

    if let Some(bound) = options.search_bound {
        checks.push(match isotropy_search(&cert.subform, bound) {
            Ok(None) => check("integer_search", true, format!("no zero with entries up to {bound}")),
            Ok(Some(x)) => check("integer_search", false, format!("zero found at {x:?}")),
            Err(e) => check("integer_search", false, e.to_string()),
        });
    }

    let ok = checks.iter().all(|c| c.status != CheckStatus::Fail);
    VerificationReport { ok, checks }
}

fn oracle_check(subform: &DiagonalForm, place: &Place) -> Check {
    let name = "local_oracle";
    let Some(p) = place.characteristic().and_then(|c| c.to_u64()) else {
        return check(name, false, format!("{place} is not a finite place"));
    };
    let run = decisive_depth(subform.coeffs(), p)
        .and_then(|depth| local_zero_oracle(subform.coeffs(), place, depth));
    match run {
        Ok(LocalZero::Anisotropic) => check(name, true, format!("no liftable zero at {place}")),
        Ok(LocalZero::Isotropic { witness, modulus }) => check(
            name,
            false,
            format!("liftable zero {witness:?} modulo {modulus} at {place}"),
        ),
        Ok(LocalZero::Indeterminate) => check(name, false, "search was not decisive"),
        Err(Error::OracleTooLarge(msg)) => Check {
            name,
            status: CheckStatus::Skipped,
            detail: msg,
        },
        Err(e) => check(name, false, e.to_string()),
    }
}

/// A candidate left out of a family because an earlier member is
/// projectively equivalent to it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Collision {
    pub candidate_index: u64,
    pub subform: DiagonalForm,
    /// Position in the family of the member it matches.
    pub equivalent_to: usize,
    #[serde(serialize_with = "json::bigint")]
    pub scalar: BigInt,
}

/// A candidate whose construction or verification failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rejection {
    pub candidate_index: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Family {
    pub params: MonsonParameters,
    pub parity_case: ParityCase,
    pub ambient: AmbientForm,
    pub certificates: Vec<SubformCertificate>,
    pub collisions: Vec<Collision>,
    pub rejections: Vec<Rejection>,
}

/// `count` verified, pairwise projectively inequivalent certificates for
/// `S`, using the smallest admissible `a`.
pub fn generate_family(s: &BigInt, count: usize) -> Result<Family> {
    let params = monson_parameters(s, 0)?;
    generate_family_with(&params, count, DEFAULT_TERNARY_BOUND, VerifyOptions::default())
}

/// Walks the candidates of the parameters' case in order, keeping each one
/// that verifies and is projectively inequivalent to every member kept so
/// far. Skipped candidates are recorded, never dropped silently.
pub fn generate_family_with(
    params: &MonsonParameters,
    count: usize,
    search_bound: u64,
    options: VerifyOptions,
) -> Result<Family> {
    let ambient = ambient_form(params);
    let mut family = Family {
        params: params.clone(),
        parity_case: params.parity_case(),
        ambient: ambient.clone(),
        certificates: Vec::new(),
        collisions: Vec::new(),
        rejections: Vec::new(),
    };
    let max_candidates = 10 * count as u64 + 20;
    let mut index = 0u64;
    while family.certificates.len() < count {
        if index >= max_candidates {
            return Err(Error::NotFound(format!(
                "only {} of {count} inequivalent certificates among {max_candidates} candidates",
                family.certificates.len()
            )));
        }
        let cert = match candidate(params, index, search_bound) {
            Ok(cert) => cert,
            Err(e @ (Error::NotFound(_) | Error::ConstructionFailed(_))) => {
                family.rejections.push(Rejection {
                    candidate_index: index,
                    reason: e.to_string(),
                });
                index += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let report = verify_certificate_with(&ambient, &cert, options);
        if !report.ok {
            let reason = report
                .failures()
                .map(|c| format!("{}: {}", c.name, c.detail))
                .collect::<Vec<_>>()
                .join("; ");
            family.rejections.push(Rejection {
                candidate_index: index,
                reason,
            });
            index += 1;
            continue;
        }
        let mut collision = None;
        for (k, kept) in family.certificates.iter().enumerate() {
            if let Some(scalar) = projectively_equivalent(&kept.subform, &cert.subform)? {
                collision = Some((k, scalar));
                break;
            }
        }
        match collision {
            Some((k, scalar)) => family.collisions.push(Collision {
                candidate_index: index,
                subform: cert.subform,
                equivalent_to: k,
                scalar,
            }),
            None => family.certificates.push(cert),
        }
        index += 1;
    }
    Ok(family)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn parameters_for_sample_s() {
        assert_eq!(monson_parameters(&b(65), 0).unwrap().a, b(37));
        assert_eq!(monson_parameters(&b(5), 0).unwrap().a, b(3));
        assert_eq!(monson_parameters(&b(3), 0).unwrap().a, b(13));
        assert_eq!(monson_parameters(&b(15), 0).unwrap().a, b(7));
        assert!(monson_parameters(&b(9), 0).is_err());
        assert!(monson_parameters(&b(1), 0).is_err());
        assert!(monson_parameters(&b(10), 0).is_err());
    }

    #[test]
    fn parity_cases() {
        let case = |s: i64| monson_parameters(&b(s), 0).unwrap().parity_case();
        assert_eq!(case(65), ParityCase::Case1Even);
        assert_eq!(case(5), ParityCase::Case1Odd);
        assert_eq!(case(15), ParityCase::Case2Even);
        assert_eq!(case(3), ParityCase::Case2Odd);
    }

    #[test]
    fn wrong_case_rejected() {
        let params = monson_parameters(&b(5), 0).unwrap();
        assert!(matches!(case1_even(&params, 0), Err(Error::ParityMismatch(_))));
        assert!(matches!(case2_even(&params, 0), Err(Error::ParityMismatch(_))));
        assert!(matches!(case1_odd(&params, &b(5)), Err(Error::DivisibleByPrime { .. })));
    }

    #[test]
    fn pair_enumeration() {
        let pairs: Vec<_> = (0..6).map(|i| case2_even_pair((1, 0), i)).collect();
        assert_eq!(pairs, vec![(1, 0), (5, 0), (5, 4), (9, 0), (9, 4), (9, 8)]);
        assert_eq!(case2_even_pair((3, 2), 0), (3, 2));
        assert_eq!(case2_even_pair((2, 1), 1), (6, 1));
    }

    #[test]
    fn ternary_box_search() {
        let sol = solve_ternary(&b(5), &b(3), &b(7), 64).unwrap();
        let lhs = &sol.x * &sol.x + b(5) * &sol.y * &sol.y - b(9) * &sol.z * &sol.z;
        assert_eq!(lhs, b(7) * &sol.m * &sol.m);
        assert!(matches!(solve_ternary(&b(5), &b(1), &b(7), 10), Err(Error::NotPrime(_))));
    }
}
