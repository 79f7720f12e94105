//! Integer-valued positive-definite quadratic forms.
//!
//! A form is stored through the integer matrix `G = 2B`, so that
//! `Q(x) = <Gx, x> / 2`. The form takes integer values on `Z^d` exactly when
//! `G` is integral, symmetric and has an even diagonal, which is what
//! [`make_form`] enforces. Positive definiteness is certified by the leading
//! principal minors of `G`, computed exactly by fraction-free elimination.

mod charpoly;
mod parse;
mod rational;

pub use charpoly::CharPoly;
pub use parse::{parse_diagonal, parse_twice_gram};
pub use rational::{integer_square_root, RationalScalar};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("matrix is not square: row {row} has {len} entries, expected {dim}")]
    NotSquare { dim: usize, row: usize, len: usize },
    #[error("matrix is empty")]
    Empty,
    #[error("matrix is not symmetric: entry ({row},{col}) differs from ({col},{row})")]
    NotSymmetric { row: usize, col: usize },
    #[error("diagonal entry {index} of 2B is odd ({value}); the form is not integer-valued")]
    OddDiagonal { index: usize, value: i64 },
    #[error("form is not positive definite: leading principal minor of order {order} is {minor}")]
    NotPositiveDefinite { order: usize, minor: BigInt },
    #[error("vector has length {found}, form has dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cannot extend a form of dimension {dim} to dimension {target}")]
    InvalidTarget { dim: usize, target: usize },
    #[error("no built-in form for dimension {0}; dimensions 3 and above are supported")]
    UnsupportedDimension(usize),
    #[error("integer overflow while evaluating the form")]
    Overflow,
    #[error("cannot parse form: {0}")]
    Parse(String),
}

/// A validated integer-valued positive-definite quadratic form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FormRepr", into = "FormRepr")]
pub struct QuadForm {
    dim: usize,
    // row-major G = 2B
    twice_gram: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct FormRepr {
    dim: usize,
    twice_gram: Vec<Vec<i64>>,
}

impl TryFrom<FormRepr> for QuadForm {
    type Error = FormError;

    fn try_from(repr: FormRepr) -> Result<Self, FormError> {
        let form = make_form(repr.twice_gram)?;
        if form.dim != repr.dim {
            return Err(FormError::DimensionMismatch {
                expected: repr.dim,
                found: form.dim,
            });
        }
        Ok(form)
    }
}

impl From<QuadForm> for FormRepr {
    fn from(form: QuadForm) -> Self {
        FormRepr {
            dim: form.dim,
            twice_gram: form.rows(),
        }
    }
}

/// Validates `G = 2B` and builds the form.
pub fn make_form(twice_gram: Vec<Vec<i64>>) -> Result<QuadForm, FormError> {
    let dim = twice_gram.len();
    if dim == 0 {
        return Err(FormError::Empty);
    }
    for (row, r) in twice_gram.iter().enumerate() {
        if r.len() != dim {
            return Err(FormError::NotSquare { dim, row, len: r.len() });
        }
    }
    for i in 0..dim {
        for j in (i + 1)..dim {
            if twice_gram[i][j] != twice_gram[j][i] {
                return Err(FormError::NotSymmetric { row: i, col: j });
            }
        }
    }
    for (index, r) in twice_gram.iter().enumerate() {
        if r[index] % 2 != 0 {
            return Err(FormError::OddDiagonal { index, value: r[index] });
        }
    }
    let pivots = bareiss_leading_minors(&to_big(&twice_gram));
    if let Some((order, minor)) = pivots
        .iter()
        .enumerate()
        .find(|(_, m)| !m.is_positive())
    {
        return Err(FormError::NotPositiveDefinite {
            order: order + 1,
            minor: minor.clone(),
        });
    }
    Ok(QuadForm {
        dim,
        twice_gram: twice_gram.into_iter().flatten().collect(),
    })
}

/// Diagonal form `sum b_i x_i^2` from its B-diagonal.
pub fn diagonal_form(b_diagonal: &[i64]) -> Result<QuadForm, FormError> {
    let dim = b_diagonal.len();
    let mut rows = vec![vec![0i64; dim]; dim];
    for (i, &b) in b_diagonal.iter().enumerate() {
        rows[i][i] = b.checked_mul(2).ok_or(FormError::Overflow)?;
    }
    make_form(rows)
}

pub fn identity_form(dim: usize) -> QuadForm {
    diagonal_form(&vec![1; dim]).expect("identity is positive definite")
}

/// The 4x4 form with 1 on the diagonal of B and 1/2 elsewhere, i.e.
/// `sum x_i^2 + sum_{i<j} x_i x_j`.
pub fn half_off_diagonal_form() -> QuadForm {
    let rows = (0..4)
        .map(|i| (0..4).map(|j| if i == j { 2 } else { 1 }).collect())
        .collect();
    make_form(rows).expect("B4 is positive definite")
}

/// `d = 3`: `2x^2 + 11y^2 + 6z^2`; `d = 4`: the half-off-diagonal form;
/// `d > 4`: the latter padded with the identity.
pub fn builtin_form(d: usize) -> Result<QuadForm, FormError> {
    match d {
        3 => diagonal_form(&[2, 11, 6]),
        4 => Ok(half_off_diagonal_form()),
        d if d > 4 => extend_with_identity(&half_off_diagonal_form(), d),
        d => Err(FormError::UnsupportedDimension(d)),
    }
}

/// Block form with `form` in the upper-left corner and the identity elsewhere.
pub fn extend_with_identity(form: &QuadForm, target: usize) -> Result<QuadForm, FormError> {
    if target < form.dim {
        return Err(FormError::InvalidTarget {
            dim: form.dim,
            target,
        });
    }
    let mut rows = vec![vec![0i64; target]; target];
    for (i, row) in rows.iter_mut().enumerate() {
        if i < form.dim {
            row[..form.dim].copy_from_slice(&form.twice_gram[i * form.dim..(i + 1) * form.dim]);
        } else {
            row[i] = 2;
        }
    }
    make_form(rows)
}

impl QuadForm {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry `(i, j)` of `G = 2B`.
    pub fn twice_gram(&self, i: usize, j: usize) -> i64 {
        self.twice_gram[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.twice_gram.chunks(self.dim).map(<[i64]>::to_vec).collect()
    }

    /// `B = G / 2` entry `(i, j)`, exact.
    pub fn gram(&self, i: usize, j: usize) -> RationalScalar {
        RationalScalar::new(self.twice_gram(i, j), 2)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| i == j || self.twice_gram(i, j) == 0))
    }

    /// Diagonal of `B` (integers, since the diagonal of `G` is even).
    pub fn b_diagonal(&self) -> Vec<i64> {
        (0..self.dim).map(|i| self.twice_gram(i, i) / 2).collect()
    }

    /// `Q(x) = <Gx, x> / 2`.
    pub fn evaluate(&self, x: &[i64]) -> Result<u64, FormError> {
        if x.len() != self.dim {
            return Err(FormError::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        self.evaluate_unchecked_len(x).ok_or(FormError::Overflow)
    }

    // Caller guarantees x.len() == dim. Computes the diagonal terms with B_ii
    // and the off-diagonal terms once with G_ij, so no halving is needed.
    pub(crate) fn evaluate_unchecked_len(&self, x: &[i64]) -> Option<u64> {
        let d = self.dim;
        let mut acc: i128 = 0;
        for i in 0..d {
            let xi = i128::from(x[i]);
            if xi == 0 {
                continue;
            }
            let row = &self.twice_gram[i * d..(i + 1) * d];
            let diag = i128::from(row[i] / 2).checked_mul(xi)?.checked_mul(xi)?;
            acc = acc.checked_add(diag)?;
            for j in (i + 1)..d {
                let term = i128::from(row[j])
                    .checked_mul(xi)?
                    .checked_mul(i128::from(x[j]))?;
                acc = acc.checked_add(term)?;
            }
        }
        u64::try_from(acc).ok()
    }

    /// `det B = det G / 2^d`, exact.
    pub fn determinant(&self) -> RationalScalar {
        let minors = bareiss_leading_minors(&to_big(&self.rows()));
        let det_g = minors.last().cloned().unwrap_or_else(|| BigInt::from(1));
        RationalScalar::new(det_g, BigInt::from(1) << self.dim)
    }

    /// `det(λI - B)` with exact rational coefficients.
    pub fn characteristic_polynomial(&self) -> CharPoly {
        let g = charpoly::faddeev_leverrier(&to_big(&self.rows()));
        let d = self.dim;
        // det(λI - G/2) = 2^-d * det(2λI - G)
        let coefficients = g
            .into_iter()
            .enumerate()
            .map(|(power, c)| RationalScalar::new(c << power, BigInt::from(1) << d))
            .collect();
        CharPoly { coefficients }
    }
}

pub fn determinant(form: &QuadForm) -> RationalScalar {
    form.determinant()
}

pub fn characteristic_polynomial(form: &QuadForm) -> CharPoly {
    form.characteristic_polynomial()
}

fn to_big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect()
}

/// Fraction-free Gaussian elimination without pivoting. The `k`-th returned
/// pivot is the leading principal minor of order `k + 1`; elimination stops
/// after the first zero pivot, so a short result means a vanishing minor.
pub(crate) fn bareiss_leading_minors(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = m.len();
    let mut a = m.to_vec();
    let mut minors = Vec::with_capacity(n);
    let mut prev = BigInt::from(1);
    for k in 0..n {
        let pivot = a[k][k].clone();
        minors.push(pivot.clone());
        if pivot.is_zero() {
            break;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = (&a[i][j] * &pivot - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = pivot;
    }
    minors
}
