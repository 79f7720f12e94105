//! Search for diagonal ternary forms `ax^2 + by^2 + cz^2` satisfying the
//! qualification criterion on a finite box.
//!
//! Only `(2, 6, 11)` is backed by a proof; any other qualifying triple is
//! reported with `proven = false` and holds only up to the scanned radius.

use crate::forms::diagonal_form;
use crate::sos::exact_sqrt;
use crate::steinhaus::{check_form_range, is_proven_form, FormVerdict};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Radius of the cheap pre-scan that discards most non-qualifying triples.
pub const QUICK_REJECT_RADIUS: u64 = 5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateRecord {
    /// `a <= b <= c`.
    pub coefficients: [u64; 3],
    pub verdict: FormVerdict,
    pub box_radius: u64,
    pub proven: bool,
}

fn triples(max_coeff: u64) -> Vec<[u64; 3]> {
    let mut out = Vec::new();
    for a in 1..=max_coeff {
        for b in a..=max_coeff {
            for c in b..=max_coeff {
                let square = a
                    .checked_mul(b)
                    .and_then(|ab| ab.checked_mul(c))
                    .is_some_and(|p| exact_sqrt(p).is_some());
                if !square {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

fn examine(coeffs: [u64; 3], box_radius: u64) -> Option<CandidateRecord> {
    let b: Vec<i64> = coeffs.iter().map(|&v| i64::try_from(v).ok()).collect::<Option<_>>()?;
    let form = diagonal_form(&b).ok()?;
    let quick = check_form_range(&form, QUICK_REJECT_RADIUS.min(box_radius)).ok()?;
    if !quick.qualifies() {
        return None;
    }
    let verdict = check_form_range(&form, box_radius).ok()?;
    verdict.qualifies().then(|| CandidateRecord {
        coefficients: coeffs,
        proven: is_proven_form(&form),
        verdict,
        box_radius,
    })
}

/// All `1 <= a <= b <= c <= max_coeff` with `abc` not a perfect square whose
/// diagonal form qualifies on the half-box of radius `box_radius`, sorted.
/// Candidates are examined independently across `jobs` workers; the output
/// does not depend on `jobs`.
pub fn search_diagonal_ternary(max_coeff: u64, box_radius: u64, jobs: usize) -> Vec<CandidateRecord> {
    let space = triples(max_coeff);
    let run = |t: &[u64; 3]| examine(*t, box_radius);
    let mut found: Vec<CandidateRecord> = if jobs <= 1 {
        space.iter().filter_map(run).collect()
    } else {
        match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(|| space.par_iter().filter_map(run).collect()),
            Err(_) => space.iter().filter_map(run).collect(),
        }
    };
    found.sort_by_key(|r| r.coefficients);
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_range_is_empty() {
        assert!(search_diagonal_ternary(1, 10, 1).is_empty());
        assert_eq!(triples(1), Vec::<[u64; 3]>::new());
    }

    #[test]
    fn square_products_are_excluded_from_the_space() {
        let t = triples(6);
        assert!(!t.contains(&[1, 1, 1]));
        assert!(!t.contains(&[1, 2, 2]));
        assert!(!t.contains(&[2, 3, 6]));
        assert!(t.contains(&[1, 1, 2]));
    }

    #[test]
    fn reproduces_the_ternary_example() {
        let found = search_diagonal_ternary(11, 10, 2);
        let hit = found.iter().find(|r| r.coefficients == [2, 6, 11]).unwrap();
        assert!(hit.proven);
        assert!(!found.iter().any(|r| r.coefficients == [1, 1, 3]));
        assert!(found.iter().all(|r| r.proven == (r.coefficients == [2, 6, 11])));
        assert!(found.windows(2).all(|w| w[0].coefficients < w[1].coefficients));
    }
}
