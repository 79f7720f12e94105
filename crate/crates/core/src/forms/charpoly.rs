use super::rational::RationalScalar;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Monic characteristic polynomial `det(λI - B)`, coefficients stored by
/// ascending power of `λ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharPoly {
    pub coefficients: Vec<RationalScalar>,
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    /// Horner evaluation in exact arithmetic.
    pub fn evaluate(&self, x: &RationalScalar) -> RationalScalar {
        self.coefficients
            .iter()
            .rev()
            .fold(RationalScalar::zero(), |acc, c| &(&acc * x) + c)
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (power, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.numerator().sign() == num_bigint::Sign::Minus;
            let magnitude = if negative { -c.clone() } else { c.clone() };
            match (first, negative) {
                (true, true) => f.write_str("-")?,
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
                (true, false) => {}
            }
            first = false;
            let unit = magnitude == RationalScalar::one();
            match power {
                0 => write!(f, "{magnitude}")?,
                1 if unit => f.write_str("λ")?,
                1 => write!(f, "{magnitude}λ")?,
                _ if unit => write!(f, "λ^{power}")?,
                _ => write!(f, "{magnitude}λ^{power}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Faddeev-LeVerrier on an integer matrix. Returns the integer coefficients
/// of `det(λI - M)` by ascending power; every division by `k` is exact.
pub(crate) fn faddeev_leverrier(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = m.len();
    let mut coeffs = vec![BigInt::from(0); n + 1];
    coeffs[n] = BigInt::from(1);
    // aux = M * M_{k-1}, where M_0 = 0 and M_k = aux + c_{n-k+1} I
    let mut mk: Vec<Vec<BigInt>> = vec![vec![BigInt::from(0); n]; n];
    for k in 1..=n {
        for (i, row) in mk.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        let product = mat_mul(m, &mk);
        let trace: BigInt = (0..n).map(|i| &product[i][i]).sum();
        let c = -(trace / BigInt::from(k));
        coeffs[n - k] = c;
        mk = product;
    }
    coeffs
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    #[test]
    fn two_by_two() {
        // det(λI - [[1,2],[3,4]]) = λ^2 - 5λ - 2
        let c = faddeev_leverrier(&ints(&[&[1, 2], &[3, 4]]));
        assert_eq!(c, vec![BigInt::from(-2), BigInt::from(-5), BigInt::from(1)]);
    }

    #[test]
    fn display() {
        let p = CharPoly {
            coefficients: vec![
                RationalScalar::new(5, 16),
                RationalScalar::from_integer(-2),
                RationalScalar::new(9, 2),
                RationalScalar::from_integer(-4),
                RationalScalar::one(),
            ],
        };
        assert_eq!(p.to_string(), "λ^4 - 4λ^3 + 9/2λ^2 - 2λ + 5/16");
        assert_eq!(p.degree(), 4);
    }
}
