use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Gram matrix of a rational quadratic form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricRationalMatrix(Matrix<BigRational>);

impl SymmetricRationalMatrix {
    pub fn new(m: Matrix<BigRational>) -> Result<SymmetricRationalMatrix> {
        if m.rows() == 0 || !m.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(SymmetricRationalMatrix(m))
    }

    pub fn from_integer_rows(rows: Vec<Vec<BigInt>>) -> Result<SymmetricRationalMatrix> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSymmetric);
        }
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(BigRational::from_integer).collect())
            .collect();
        SymmetricRationalMatrix::new(Matrix::from_rows(rows))
    }

    pub fn matrix(&self) -> &Matrix<BigRational> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }
}

/// `Tᵗ·M·T = diag(d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagonalization {
    pub transform: Matrix<BigRational>,
    pub diagonal: Vec<BigRational>,
}

/// Symmetric Gaussian elimination over Q.
///
/// Column operations are mirrored on rows so the working matrix stays
/// congruent to `M`. A zero pivot is replaced by swapping in a later
/// nonzero diagonal entry, or failing that by adding a basis vector `e_j`
/// with `M[i][j] ≠ 0`, which makes the pivot `2·M[i][j] + M[j][j] ≠ 0`
/// once all later diagonal entries vanish.
pub fn diagonalize(m: &SymmetricRationalMatrix) -> Result<Diagonalization> {
    let n = m.dim();
    let mut a = m.matrix().clone();
    let mut t: Matrix<BigRational> = Matrix::identity(n);

    for i in 0..n {
        if a[(i, i)].is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !a[(j, j)].is_zero()) {
                a.swap_rows(i, j);
                a.swap_cols(i, j);
                t.swap_cols(i, j);
            } else if let Some(j) = (i + 1..n).find(|&j| !a[(i, j)].is_zero()) {
                add_multiple(&mut a, &mut t, i, j, &BigRational::one());
            } else {
                return Err(Error::SingularMatrix);
            }
        }
        let pivot = a[(i, i)].clone();
        for j in i + 1..n {
            if a[(i, j)].is_zero() {
                continue;
            }
            let factor = -(&a[(i, j)] / &pivot);
            add_multiple(&mut a, &mut t, j, i, &factor);
        }
    }
    debug_assert!(a.is_diagonal());
    Ok(Diagonalization {
        transform: t,
        diagonal: a.diagonal_entries(),
    })
}

/// Replace basis vector `e_target` by `e_target + c·e_source`.
fn add_multiple(
    a: &mut Matrix<BigRational>,
    t: &mut Matrix<BigRational>,
    target: usize,
    source: usize,
    c: &BigRational,
) {
    let n = a.rows();
    for k in 0..n {
        let v = &a[(k, target)] + &(c * &a[(k, source)]);
        a[(k, target)] = v;
    }
    for k in 0..n {
        let v = &a[(target, k)] + &(c * &a[(source, k)]);
        a[(target, k)] = v;
    }
    for k in 0..n {
        let v = &t[(k, target)] + &(c * &t[(k, source)]);
        t[(k, target)] = v;
    }
}
