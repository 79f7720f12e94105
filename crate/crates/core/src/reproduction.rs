//! One-shot reproduction of every finite computation the non-existence
//! argument rests on, as a list of [`VerificationReport`]s.

use crate::forms::{builtin_form, half_off_diagonal_form, integer_square_root, RationalScalar};
use crate::formsearch::search_diagonal_ternary;
use crate::planar::{det_identity_fuzz, sos_form_suite};
use crate::sos::exact_sqrt;
use crate::steinhaus::{
    check_form_range_with_jobs, verify_residue_claims, verify_ternary_theorem, Finding,
    VerificationReport,
};

pub const PLANAR_FUZZ_CASES: u64 = 1000;
pub const PLANAR_FORM_CASES: u64 = 200;
pub const PLANAR_SEED: u64 = 0x5eed_2000;
pub const SEARCH_MAX_COEFF: u64 = 12;
pub const SEARCH_RADIUS: u64 = 20;
pub const PADDED_DIMS: std::ops::RangeInclusive<usize> = 5..=8;

fn mismatch(detail: String) -> impl FnOnce() -> Finding {
    move || Finding::Mismatch { detail }
}

fn residue_suite() -> VerificationReport {
    let mut report = VerificationReport::new("residue-claims");
    for claim in verify_residue_claims() {
        report.check(claim.holds, || Finding::Residue {
            claim_id: claim.claim_id.clone(),
            residues: claim.counterexample.clone(),
        });
    }
    report
}

fn b4_constants() -> Vec<VerificationReport> {
    let b4 = half_off_diagonal_form();

    let mut det = VerificationReport::new("b4-determinant").param("expected", "5/16");
    let got = b4.determinant();
    det.check(got == RationalScalar::new(5, 16), mismatch(format!("det B4 = {got}")));
    det.check(
        integer_square_root(&got).is_none(),
        mismatch("det B4 is a square".into()),
    );

    // (λ - 1/2)^3 (λ - 5/2), expanded from its roots
    let mut expected = vec![RationalScalar::one()];
    for root in [(1, 2), (1, 2), (1, 2), (5, 2)] {
        let r = RationalScalar::new(root.0, root.1);
        let mut next = vec![RationalScalar::zero(); expected.len() + 1];
        for (i, c) in expected.iter().enumerate() {
            next[i + 1] = &next[i + 1] + c;
            next[i] = &next[i] - &(c * &r);
        }
        expected = next;
    }
    let mut poly = VerificationReport::new("b4-characteristic-polynomial")
        .param("eigenvalues", "1/2, 1/2, 1/2, 5/2");
    let got = b4.characteristic_polynomial();
    poly.check(
        got.coefficients == expected,
        mismatch(format!("characteristic polynomial {got}")),
    );
    vec![det, poly]
}

fn ternary_determinant() -> VerificationReport {
    let form = builtin_form(3).expect("built-in ternary form");
    let mut report = VerificationReport::new("ternary-determinant").param("expected", "132");
    let det = form.determinant();
    report.check(
        det == RationalScalar::from_integer(132),
        mismatch(format!("det = {det}")),
    );
    report.check(
        integer_square_root(&det).is_none(),
        mismatch("132 reported as a square".into()),
    );
    report
}

fn padded_forms(radius: u64, jobs: usize) -> VerificationReport {
    let mut report = VerificationReport::new("padded-forms")
        .param("dims", format!("{}..={}", PADDED_DIMS.start(), PADDED_DIMS.end()))
        .param("box_radius", radius);
    for d in PADDED_DIMS {
        let form = builtin_form(d).expect("built-in padded form");
        let outcome = check_form_range_with_jobs(&form, radius, jobs);
        let ok = matches!(&outcome, Ok(v) if v.qualifies());
        report.check(ok, mismatch(format!("d={d}: {outcome:?}")));
    }
    report
}

fn search_reproduction(jobs: usize) -> VerificationReport {
    let found = search_diagonal_ternary(SEARCH_MAX_COEFF, SEARCH_RADIUS, jobs);
    let mut report = VerificationReport::new("search-reproduction")
        .param("max_coeff", SEARCH_MAX_COEFF)
        .param("box_radius", SEARCH_RADIUS)
        .param("candidates", found.len());
    let ternary = found.iter().find(|r| r.coefficients == [2, 6, 11]);
    report.check(
        ternary.is_some_and(|r| r.proven),
        mismatch("(2,6,11) missing or not flagged proven".into()),
    );
    report.check(
        !found.iter().any(|r| r.coefficients == [1, 1, 3]),
        mismatch("(1,1,3) emitted".into()),
    );
    for r in &found {
        let [a, b, c] = r.coefficients;
        report.check(
            exact_sqrt(a * b * c).is_none(),
            mismatch(format!("square product {:?}", r.coefficients)),
        );
        report.check(
            r.proven == (r.coefficients == [2, 6, 11]),
            mismatch(format!("proven flag on {:?}", r.coefficients)),
        );
    }
    report
}

/// Runs every suite. `radius` is the half-box radius for the ternary theorem
/// and the padded forms.
pub fn reproduce(radius: u64, jobs: usize) -> Vec<VerificationReport> {
    let mut suites = vec![verify_ternary_theorem(radius, jobs), residue_suite()];
    suites.extend(b4_constants());
    suites.push(ternary_determinant());
    suites.push(padded_forms(radius, jobs));
    suites.push(det_identity_fuzz(PLANAR_FUZZ_CASES, PLANAR_SEED));
    suites.push(sos_form_suite(PLANAR_FORM_CASES, PLANAR_SEED));
    suites.push(search_reproduction(jobs));
    suites
}
