//! Finite modular facts behind the descent argument for
//! `Q3 = 2x^2 + 11y^2 + 6z^2`, each decided by exhausting its residue tuples.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueClaim {
    pub claim_id: String,
    pub modulus: u64,
    pub description: String,
    /// Number of residue tuples enumerated.
    pub cases: u64,
    /// Every residue the expression reached, sorted.
    pub attained: Vec<u64>,
    pub holds: bool,
    /// The first offending tuple, in enumeration order. For claims that pin
    /// the attained set exactly, a missing residue is reported as a 1-tuple.
    pub counterexample: Option<Vec<u64>>,
}

struct ClaimDef {
    id: &'static str,
    modulus: u64,
    description: &'static str,
    domains: Vec<Vec<u64>>,
    expr: fn(&[u64]) -> u64,
    ok: fn(&[u64], u64) -> bool,
    exact_attained: Option<&'static [u64]>,
}

fn full(m: u64) -> Vec<u64> {
    (0..m).collect()
}

fn q3(t: &[u64]) -> u64 {
    2 * t[0] * t[0] + 11 * t[1] * t[1] + 6 * t[2] * t[2]
}

fn claim_defs() -> Vec<ClaimDef> {
    vec![
        ClaimDef {
            id: "squares-mod-8",
            modulus: 8,
            description: "the squares modulo 8 are exactly {0, 1, 4}",
            domains: vec![full(8)],
            expr: |t| t[0] * t[0] % 8,
            ok: |_, v| matches!(v, 0 | 1 | 4),
            exact_attained: Some(&[0, 1, 4]),
        },
        ClaimDef {
            id: "q3-never-7-mod-8",
            modulus: 8,
            description: "2x^2 + 11y^2 + 6z^2 is never 7 mod 8",
            domains: vec![full(8), full(8), full(8)],
            expr: |t| q3(t) % 8,
            ok: |_, v| v != 7,
            exact_attained: None,
        },
        ClaimDef {
            id: "pronic-mod-8",
            modulus: 8,
            description: "xi^2 + xi is 0, 2, 4 or 6 mod 8",
            domains: vec![full(8)],
            expr: |t| (t[0] * t[0] + t[0]) % 8,
            ok: |_, v| v % 2 == 0,
            exact_attained: None,
        },
        ClaimDef {
            id: "case-2-never-5-mod-8",
            modulus: 8,
            description: "2a + 11b + 6c is never 5 mod 8 for a, c in {0,2,4,6} and b in {0,1,4}",
            domains: vec![vec![0, 2, 4, 6], vec![0, 1, 4], vec![0, 2, 4, 6]],
            expr: |t| (2 * t[0] + 11 * t[1] + 6 * t[2]) % 8,
            ok: |_, v| v != 5,
            exact_attained: None,
        },
        ClaimDef {
            id: "case-3-lhs-odd",
            modulus: 2,
            description: "x(x+1) + 22y^2 + 3z(z+1) + 1 is odd",
            domains: vec![full(2), full(2), full(2)],
            expr: |t| (t[0] * (t[0] + 1) + 22 * t[1] * t[1] + 3 * t[2] * (t[2] + 1) + 1) % 2,
            ok: |_, v| v == 1,
            exact_attained: None,
        },
        ClaimDef {
            id: "q3-parity-is-y",
            modulus: 2,
            description: "2x^2 + 11y^2 + 6z^2 has the parity of y",
            domains: vec![full(2), full(2), full(2)],
            expr: |t| q3(t) % 2,
            ok: |t, v| v == t[1],
            exact_attained: None,
        },
    ]
}

fn evaluate(def: &ClaimDef) -> ResidueClaim {
    let mut cases = 0u64;
    let mut attained = BTreeSet::new();
    let mut counterexample = None;
    let mut idx = vec![0usize; def.domains.len()];
    let mut tuple: Vec<u64> = def.domains.iter().map(|d| d[0]).collect();
    'outer: loop {
        let v = (def.expr)(&tuple);
        cases += 1;
        attained.insert(v);
        if counterexample.is_none() && !(def.ok)(&tuple, v) {
            counterexample = Some(tuple.clone());
        }
        let mut pos = idx.len();
        loop {
            if pos == 0 {
                break 'outer;
            }
            pos -= 1;
            if idx[pos] + 1 < def.domains[pos].len() {
                idx[pos] += 1;
                tuple[pos] = def.domains[pos][idx[pos]];
                break;
            }
            idx[pos] = 0;
            tuple[pos] = def.domains[pos][0];
        }
    }
    if counterexample.is_none() {
        if let Some(expected) = def.exact_attained {
            counterexample = expected
                .iter()
                .find(|r| !attained.contains(r))
                .map(|&r| vec![r]);
        }
    }
    ResidueClaim {
        claim_id: def.id.to_string(),
        modulus: def.modulus,
        description: def.description.to_string(),
        cases,
        attained: attained.into_iter().collect(),
        holds: counterexample.is_none(),
        counterexample,
    }
}

/// Evaluates all six claims in a fixed order.
pub fn verify_residue_claims() -> Vec<ResidueClaim> {
    claim_defs().iter().map(evaluate).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_claims_hold() {
        let claims = verify_residue_claims();
        assert_eq!(claims.len(), 6);
        for c in &claims {
            assert!(c.holds, "{} failed: {:?}", c.claim_id, c.counterexample);
            assert!(c.cases <= 512);
        }
    }

    #[test]
    fn attained_sets() {
        let claims = verify_residue_claims();
        assert_eq!(claims[0].attained, vec![0, 1, 4]);
        assert_eq!(claims[1].cases, 512);
        assert_eq!(claims[1].attained, vec![0, 1, 2, 3, 4, 5, 6]);
        assert_eq!(claims[2].attained, vec![0, 2, 4, 6]);
        assert_eq!(claims[3].cases, 48);
        assert_eq!(claims[3].attained, vec![0, 3, 4, 7]);
        assert_eq!(claims[4].attained, vec![1]);
        assert_eq!(claims[5].attained, vec![0, 1]);
    }

    #[test]
    fn detects_a_false_claim() {
        // x^2 + 3y^2 does reach 7 mod 8
        let def = ClaimDef {
            id: "never-7",
            modulus: 8,
            description: "",
            domains: vec![full(8), full(8)],
            expr: |t| (t[0] * t[0] + 3 * t[1] * t[1]) % 8,
            ok: |_, v| v != 7,
            exact_attained: None,
        };
        let c = evaluate(&def);
        assert!(!c.holds);
        assert_eq!(c.counterexample, Some(vec![2, 1]));
    }
}
