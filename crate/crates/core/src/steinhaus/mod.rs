//! Qualification of forms for the tiling obstruction, and the verification
//! suites for the ternary form `2x^2 + 11y^2 + 6z^2`.
//!
//! A form *qualifies* when all of its values on `Z^d` are sums of `d` integer
//! squares while `det B` is not the square of an integer. A lattice whose Gram
//! matrix is such a `B` lies inside the union of spheres through points of
//! `Z^d`, and a unit-volume set tiling along its dual would tile at the
//! non-integral level `sqrt(det B)`.
//!
//! Value checks are exhaustive over a finite box, so a `Qualifies` verdict for
//! a form without a known proof only certifies the box that was scanned.

mod basis;
mod residue;
mod scan;

pub use basis::{cholesky_basis, BasisError};
pub use residue::{verify_residue_claims, ResidueClaim};
pub use scan::half_box_size;

use crate::forms::{
    builtin_form, extend_with_identity, half_off_diagonal_form, integer_square_root, FormError,
    QuadForm, RationalScalar,
};
use crate::sos::{four_power_obstruction, is_sum_of_d_squares, FourPowerObstruction};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Upper bound on counterexamples kept in a [`VerificationReport`]; the
/// total is always counted.
pub const MAX_REPORTED_COUNTEREXAMPLES: usize = 100;

/// How the "every value is a sum of `d` squares" half of the criterion was
/// settled.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum ValueCheck {
    /// Every vector of the half-box was evaluated.
    Exhaustive { checked_count: u64 },
    /// `d >= 4`: every non-negative integer is a sum of four squares, so no
    /// value can fail and nothing is enumerated.
    FourSquareTheorem,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FormVerdict {
    Qualifies {
        box_radius: u64,
        determinant: RationalScalar,
        value_check: ValueCheck,
    },
    ValueCounterexample {
        x: Vec<i64>,
        value: u64,
        obstruction: Option<FourPowerObstruction>,
    },
    SquareDeterminant {
        #[serde(with = "crate::json")]
        root: BigInt,
    },
}

impl FormVerdict {
    pub fn qualifies(&self) -> bool {
        matches!(self, FormVerdict::Qualifies { .. })
    }
}

/// `det B` and, when it is a perfect square `m^2`, the integral tiling level
/// `m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingLevel {
    pub det_b: RationalScalar,
    #[serde(with = "crate::json::option")]
    pub integer_level: Option<BigInt>,
}

pub fn tiling_level(form: &QuadForm) -> TilingLevel {
    let det_b = form.determinant();
    let integer_level = integer_square_root(&det_b);
    TilingLevel { det_b, integer_level }
}

/// True for the forms whose qualification is a theorem rather than a finite
/// scan: any coordinate permutation of `diag(2, 11, 6)`, and the
/// half-off-diagonal 4x4 form padded with the identity to any `d >= 4`.
pub fn is_proven_form(form: &QuadForm) -> bool {
    if form.dim() == 3 && form.is_diagonal() {
        let mut diag = form.b_diagonal();
        diag.sort_unstable();
        return diag == [2, 6, 11];
    }
    form.dim() >= 4
        && extend_with_identity(&half_off_diagonal_form(), form.dim()).as_ref() == Ok(form)
}

/// Single-threaded [`check_form_range_with_jobs`].
pub fn check_form_range(form: &QuadForm, box_radius: u64) -> Result<FormVerdict, FormError> {
    check_form_range_with_jobs(form, box_radius, 1)
}

/// Checks the qualification criterion with values restricted to the
/// half-box of radius `box_radius`.
///
/// The determinant test runs first: a square determinant is reported even if
/// a value counterexample also exists. Otherwise the first failing vector in
/// scan order is returned. The result is identical for every `jobs`.
/// Fails only if a form value overflows `u64`.
pub fn check_form_range_with_jobs(
    form: &QuadForm,
    box_radius: u64,
    jobs: usize,
) -> Result<FormVerdict, FormError> {
    let determinant = form.determinant();
    if let Some(root) = integer_square_root(&determinant) {
        return Ok(FormVerdict::SquareDeterminant { root });
    }
    let d = form.dim();
    if d >= 4 {
        return Ok(FormVerdict::Qualifies {
            box_radius,
            determinant,
            value_check: ValueCheck::FourSquareTheorem,
        });
    }
    let out = scan::scan(form, box_radius, jobs, 1, true, |v| !is_sum_of_d_squares(v, d))?;
    Ok(match out.failures.into_iter().next() {
        Some(f) => FormVerdict::ValueCounterexample {
            obstruction: if d == 3 { four_power_obstruction(f.value) } else { None },
            x: f.x,
            value: f.value,
        },
        None => FormVerdict::Qualifies {
            box_radius,
            determinant,
            value_check: ValueCheck::Exhaustive {
                checked_count: out.checked,
            },
        },
    })
}

/// Re-evaluates a verdict's claims from scratch: the counterexample value
/// and its failure, or the square root of the determinant.
pub fn reverify(form: &QuadForm, verdict: &FormVerdict) -> bool {
    match verdict {
        FormVerdict::Qualifies { determinant, .. } => {
            *determinant == form.determinant() && integer_square_root(determinant).is_none()
        }
        FormVerdict::ValueCounterexample { x, value, obstruction } => {
            let recomputed = form.evaluate(x).ok() == Some(*value);
            let fails = !is_sum_of_d_squares(*value, form.dim());
            let obstruction_ok = match obstruction {
                Some(o) => o.value() == Some(*value),
                None => form.dim() != 3,
            };
            recomputed && fails && obstruction_ok
        }
        FormVerdict::SquareDeterminant { root } => {
            form.determinant() == RationalScalar::from_integer(root * root)
        }
    }
}

/// One entry in a [`VerificationReport`]'s counterexample list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Finding {
    FormValue {
        x: Vec<i64>,
        value: u64,
        obstruction: Option<FourPowerObstruction>,
    },
    Residue {
        claim_id: String,
        residues: Option<Vec<u64>>,
    },
    Mismatch {
        detail: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub parameters: BTreeMap<String, String>,
    pub checked_count: u64,
    pub counterexamples: Vec<Finding>,
    /// Total failures, which may exceed the length of `counterexamples`.
    pub counterexample_total: u64,
    pub passed: bool,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>) -> Self {
        VerificationReport {
            name: name.into(),
            parameters: BTreeMap::new(),
            checked_count: 0,
            counterexamples: Vec::new(),
            counterexample_total: 0,
            passed: true,
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn check(&mut self, ok: bool, finding: impl FnOnce() -> Finding) {
        self.checked_count += 1;
        if !ok {
            self.fail(finding());
        }
    }

    pub fn fail(&mut self, finding: Finding) {
        self.counterexample_total += 1;
        if self.counterexamples.len() < MAX_REPORTED_COUNTEREXAMPLES {
            self.counterexamples.push(finding);
        }
        self.passed = false;
    }
}

/// Evaluates the ternary form `form` on the whole half-box and records every
/// value of the shape `4^nu (8k + 7)`. Unlike [`check_form_range`] this never
/// stops early, so `checked_count` is the full half-box size.
pub fn verify_ternary_values(
    form: &QuadForm,
    box_radius: u64,
    jobs: usize,
) -> Result<VerificationReport, FormError> {
    if form.dim() != 3 {
        return Err(FormError::DimensionMismatch {
            expected: 3,
            found: form.dim(),
        });
    }
    let out = scan::scan(
        form,
        box_radius,
        jobs,
        MAX_REPORTED_COUNTEREXAMPLES,
        false,
        |v| four_power_obstruction(v).is_some(),
    )?;
    let diag = form.rows();
    Ok(VerificationReport {
        name: "ternary-values".into(),
        parameters: BTreeMap::from([
            ("box_radius".to_string(), box_radius.to_string()),
            ("twice_gram".to_string(), format!("{diag:?}")),
        ]),
        checked_count: out.checked,
        counterexamples: out
            .failures
            .into_iter()
            .map(|f| Finding::FormValue {
                obstruction: four_power_obstruction(f.value),
                x: f.x,
                value: f.value,
            })
            .collect(),
        counterexample_total: out.failure_total,
        passed: out.failure_total == 0,
    })
}

/// Exhaustive check that `2x^2 + 11y^2 + 6z^2` is a sum of three squares on
/// the half-box of radius `box_radius`.
pub fn verify_ternary_theorem(box_radius: u64, jobs: usize) -> VerificationReport {
    let form = builtin_form(3).expect("built-in ternary form");
    let mut report = verify_ternary_values(&form, box_radius, jobs)
        .expect("values of the ternary form fit in u64 for any u32-sized radius");
    report.name = "ternary-theorem".into();
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{diagonal_form, identity_form, make_form};

    #[test]
    fn ternary_form_qualifies() {
        let f = builtin_form(3).unwrap();
        let v = check_form_range(&f, 40).unwrap();
        let FormVerdict::Qualifies { determinant, value_check, .. } = &v else {
            panic!("{v:?}");
        };
        assert_eq!(*determinant, RationalScalar::from_integer(132));
        assert_eq!(
            *value_check,
            ValueCheck::Exhaustive {
                checked_count: half_box_size(3, 40).unwrap()
            }
        );
        assert!(reverify(&f, &v));
    }

    #[test]
    fn obstructed_form_fails_at_documented_vector() {
        let f = diagonal_form(&[1, 1, 3]).unwrap();
        let v = check_form_range(&f, 5).unwrap();
        assert_eq!(
            v,
            FormVerdict::ValueCounterexample {
                x: vec![0, 1, 3],
                value: 28,
                obstruction: Some(FourPowerObstruction { nu: 1, k: 0 }),
            }
        );
        assert!(reverify(&f, &v));
        for jobs in [2, 4, 8] {
            assert_eq!(check_form_range_with_jobs(&f, 5, jobs).unwrap(), v);
        }
    }

    #[test]
    fn identity_has_square_determinant() {
        let v = check_form_range(&identity_form(3), 10).unwrap();
        assert_eq!(v, FormVerdict::SquareDeterminant { root: BigInt::from(1) });
        assert!(reverify(&identity_form(3), &v));
    }

    #[test]
    fn determinant_check_takes_priority() {
        // det 49 is a square, and Q(1,0,0) = 7 is also obstructed
        let f = diagonal_form(&[7, 7, 1]).unwrap();
        assert_eq!(f.evaluate(&[1, 0, 0]), Ok(7));
        assert_eq!(
            check_form_range(&f, 3).unwrap(),
            FormVerdict::SquareDeterminant { root: BigInt::from(7) }
        );
    }

    #[test]
    fn higher_dimensions_use_four_square_theorem() {
        for d in 4..=8 {
            let f = builtin_form(d).unwrap();
            let v = check_form_range(&f, 20).unwrap();
            assert!(matches!(
                v,
                FormVerdict::Qualifies { value_check: ValueCheck::FourSquareTheorem, .. }
            ));
            assert!(is_proven_form(&f));
        }
    }

    #[test]
    fn binary_forms_scan_with_two_squares() {
        // x^2 + 2y^2: det 2, Q(1,1) = 3 is not a sum of two squares
        let f = diagonal_form(&[1, 2]).unwrap();
        let v = check_form_range(&f, 3).unwrap();
        assert_eq!(
            v,
            FormVerdict::ValueCounterexample { x: vec![1, 1], value: 3, obstruction: None }
        );
        assert!(reverify(&f, &v));
    }

    #[test]
    fn tiling_levels() {
        let t = tiling_level(&half_off_diagonal_form());
        assert_eq!(t.det_b, RationalScalar::new(5, 16));
        assert_eq!(t.integer_level, None);
        let t = tiling_level(&identity_form(4));
        assert_eq!(t.integer_level, Some(BigInt::from(1)));
        let t = tiling_level(&make_form(vec![vec![8]]).unwrap());
        assert_eq!(t.det_b, RationalScalar::from_integer(4));
        assert_eq!(t.integer_level, Some(BigInt::from(2)));
    }

    #[test]
    fn proven_forms() {
        assert!(is_proven_form(&diagonal_form(&[6, 2, 11]).unwrap()));
        assert!(!is_proven_form(&diagonal_form(&[2, 6, 10]).unwrap()));
        assert!(is_proven_form(&half_off_diagonal_form()));
        assert!(!is_proven_form(&identity_form(4)));
    }

    #[test]
    fn ternary_theorem_reports() {
        let r = verify_ternary_theorem(0, 1);
        assert!(r.passed);
        assert_eq!(r.checked_count, 1);
        let r = verify_ternary_theorem(15, 3);
        assert!(r.passed);
        assert_eq!(r.checked_count, half_box_size(3, 15).unwrap());

        let bad = verify_ternary_values(&diagonal_form(&[1, 1, 3]).unwrap(), 5, 1).unwrap();
        assert!(!bad.passed);
        assert_eq!(
            bad.counterexamples[0],
            Finding::FormValue {
                x: vec![0, 1, 3],
                value: 28,
                obstruction: Some(FourPowerObstruction { nu: 1, k: 0 })
            }
        );
        let par = verify_ternary_values(&diagonal_form(&[1, 1, 3]).unwrap(), 5, 4).unwrap();
        assert_eq!(par, bad);
    }
}
