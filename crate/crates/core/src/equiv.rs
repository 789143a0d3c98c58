//! Explicit integral congruences between `⟨1,1,1,-p,p⟩` and
//! `J = ⟨1,1,1,1,-1⟩` for primes `p ≡ -1 (mod 8)`.
//!
//! With `p = 8k - 1` the matrix `A = [[4k, 4k-1], [4k-1, 4k]]` satisfies
//! `A·diag(1,-1)·Aᵗ = diag(p,-p)` and `det A = p`. Extending `Aᵗ` by the
//! identity on the first three coordinates and then swapping the last two
//! gives an integral `T` with `Tᵗ·J·T = ⟨1,1,1,-p,p⟩`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::json;
use crate::matrix::Matrix;
use crate::primes::require_prime;
use crate::qforms::{equivalent_over_q, DiagonalForm};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceWitness {
    #[serde(serialize_with = "json::bigint")]
    pub p: BigInt,
    #[serde(serialize_with = "json::bigint")]
    pub k: BigInt,
    #[serde(serialize_with = "serialize_matrix")]
    pub a: Matrix<BigInt>,
    #[serde(serialize_with = "json::bigint")]
    pub det_a: BigInt,
    /// Integral, so in particular rational; columns are images of the
    /// target basis in the coordinates of `J`.
    #[serde(serialize_with = "serialize_matrix")]
    pub t: Matrix<BigInt>,
}

fn serialize_matrix<S: serde::Serializer>(m: &Matrix<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    json::bigint_matrix(&m.to_rows(), s)
}

fn int_diag(entries: &[BigInt]) -> Matrix<BigInt> {
    Matrix::diagonal(entries)
}

fn small_diag(entries: &[i64]) -> Matrix<BigInt> {
    int_diag(&entries.iter().map(|&e| BigInt::from(e)).collect::<Vec<_>>())
}

/// `J = ⟨1,1,1,1,-1⟩`.
pub fn ambient_j() -> DiagonalForm {
    DiagonalForm::from_i64s(&[1, 1, 1, 1, -1]).expect("nonzero coefficients")
}

/// `⟨1,1,1,-p,p⟩`, the fixed ordering of `⟨1,1,1,-p⟩ ⊥ ⟨p⟩`.
pub fn target_form(p: &BigInt) -> DiagonalForm {
    let one = BigInt::one();
    DiagonalForm::new(vec![one.clone(), one.clone(), one, -p, p.clone()]).expect("p is nonzero")
}

fn require_minus_one_mod_eight(p: &BigInt) -> Result<()> {
    if p.mod_floor(&BigInt::from(8)) != BigInt::from(7) {
        return Err(Error::WrongResidue {
            value: p.clone(),
            residue: -1,
            modulus: 8,
        });
    }
    Ok(())
}

/// `A = [[4k, 4k-1], [4k-1, 4k]]` for `p = 8k - 1`, without primality checks.
pub fn a_matrix(p: &BigInt) -> Result<(BigInt, Matrix<BigInt>)> {
    require_minus_one_mod_eight(p)?;
    let k: BigInt = (p + 1) / 8;
    let four_k: BigInt = &k * 4;
    let off: BigInt = &four_k - 1;
    let a = Matrix::from_rows(vec![vec![four_k.clone(), off.clone()], vec![off, four_k]]);
    Ok((k, a))
}

/// Whether `A·diag(1,-1)·Aᵗ = diag(p,-p)` holds exactly.
pub fn a_identity_holds(p: &BigInt) -> Result<bool> {
    let (_, a) = a_matrix(p)?;
    let lhs = a.mul(&small_diag(&[1, -1])).mul(&a.transpose());
    Ok(lhs == int_diag(&[p.clone(), -p]))
}

/// Builds and checks the witness for a prime `p ≡ -1 (mod 8)`.
pub fn build_witness(p: &BigInt) -> Result<EquivalenceWitness> {
    require_minus_one_mod_eight(p)?;
    require_prime(p)?;
    let (k, a) = a_matrix(p)?;
    let det_a = a.determinant();

    let mut block: Matrix<BigInt> = Matrix::identity(5);
    let at = a.transpose();
    for i in 0..2 {
        for j in 0..2 {
            block[(3 + i, 3 + j)] = at[(i, j)].clone();
        }
    }
    let mut swap: Matrix<BigInt> = Matrix::identity(5);
    swap.swap_cols(3, 4);
    let t = block.mul(&swap);

    let witness = EquivalenceWitness { p: p.clone(), k, a, det_a, t };
    let failures = witness_failures(&witness);
    if !failures.is_empty() {
        return Err(Error::ConstructionFailed(failures.join("; ")));
    }
    Ok(witness)
}

/// Every invariant of a witness that does not hold.
pub fn witness_failures(w: &EquivalenceWitness) -> Vec<String> {
    let mut out = Vec::new();
    let p = &w.p;
    if &w.k * 8 - 1 != *p {
        out.push(format!("p = {p} is not 8k - 1 for k = {}", w.k));
    }
    let d = small_diag(&[1, -1]);
    if w.a.mul(&d).mul(&w.a.transpose()) != int_diag(&[p.clone(), -p]) {
        out.push("A·D·Aᵗ differs from diag(p,-p)".into());
    }
    if w.a.determinant() != *p || w.det_a != *p {
        out.push(format!("det A is {}, expected {p}", w.a.determinant()));
    }
    let j = int_diag(ambient_j().coeffs());
    let target = int_diag(target_form(p).coeffs());
    if w.t.congruence(&j) != target {
        out.push("Tᵗ·J·T differs from ⟨1,1,1,-p,p⟩".into());
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormEquivalenceCheck {
    #[serde(serialize_with = "json::bigint")]
    pub p: BigInt,
    /// Decision from rank, signature, determinant class and Hasse invariants.
    pub invariants_agree: bool,
    /// `Tᵗ·J·T = ⟨1,1,1,-p,p⟩` for the explicit witness.
    pub congruence_holds: bool,
}

impl FormEquivalenceCheck {
    pub fn holds(&self) -> bool {
        self.invariants_agree && self.congruence_holds
    }
}

/// Runs the invariant comparison and the explicit congruence side by side.
pub fn verify_form_equivalence(p: &BigInt) -> Result<FormEquivalenceCheck> {
    let witness = build_witness(p)?;
    let invariants_agree = equivalent_over_q(&target_form(p), &ambient_j())?;
    let congruence_holds = witness_failures(&witness).is_empty();
    Ok(FormEquivalenceCheck {
        p: p.clone(),
        invariants_agree,
        congruence_holds,
    })
}
