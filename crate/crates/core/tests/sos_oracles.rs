use proptest::prelude::*;
use steinhaus_core::sos::{
    decompose, decompose_four_squares, decompose_three_squares, decompose_two_squares,
    four_power_obstruction, is_sum_of_d_squares,
};

const LIMIT: usize = 100_000;

// Marks every n <= LIMIT reachable as a^2 + b^2 + c^2 by direct enumeration.
fn three_square_sieve() -> Vec<bool> {
    let mut hit = vec![false; LIMIT + 1];
    let mut a = 0;
    while a * a <= LIMIT {
        let mut b = a;
        while a * a + b * b <= LIMIT {
            let mut c = b;
            while a * a + b * b + c * c <= LIMIT {
                hit[a * a + b * b + c * c] = true;
                c += 1;
            }
            b += 1;
        }
        a += 1;
    }
    hit
}

fn two_square_sieve() -> Vec<bool> {
    let mut hit = vec![false; LIMIT + 1];
    let mut a = 0;
    while a * a <= LIMIT {
        let mut b = a;
        while a * a + b * b <= LIMIT {
            hit[a * a + b * b] = true;
            b += 1;
        }
        a += 1;
    }
    hit
}

#[test]
fn legendre_agrees_with_enumeration_up_to_1e5() {
    let sieve = three_square_sieve();
    for (n, &representable) in sieve.iter().enumerate() {
        let n = n as u64;
        assert_eq!(four_power_obstruction(n).is_none(), representable, "n={n}");
        let w = decompose_three_squares(n);
        assert_eq!(w.is_some(), representable, "n={n}");
        if let Some(w) = w {
            assert!(w.is_valid(), "n={n}: {w:?}");
        }
    }
}

#[test]
fn two_square_witnesses_up_to_1e5() {
    let sieve = two_square_sieve();
    for (n, &representable) in sieve.iter().enumerate() {
        let w = decompose_two_squares(n as u64);
        assert_eq!(w.is_some(), representable, "n={n}");
        if let Some(w) = w {
            assert!(w.is_valid());
        }
    }
}

#[test]
fn four_squares_total_up_to_1e5() {
    for n in 0..=LIMIT as u64 {
        let w = decompose_four_squares(n);
        assert_eq!(w.terms.len(), 4);
        assert!(w.is_valid(), "n={n}: {w:?}");
    }
}

#[test]
fn obstruction_reconstructs_input() {
    for n in 0..=LIMIT as u64 {
        if let Some(o) = four_power_obstruction(n) {
            assert_eq!(o.value(), Some(n));
        }
    }
}

proptest! {
    #[test]
    fn membership_is_monotone_in_d(n in 0u64..2_000_000, d in 1usize..6) {
        if is_sum_of_d_squares(n, d) {
            prop_assert!(is_sum_of_d_squares(n, d + 1));
        }
    }

    #[test]
    fn witnesses_are_canonical(n in 0u64..5_000_000, d in 1usize..7) {
        match decompose(n, d) {
            Some(w) => {
                prop_assert!(w.is_valid());
                prop_assert_eq!(w.terms.len(), d);
                prop_assert!(is_sum_of_d_squares(n, d));
            }
            None => prop_assert!(!is_sum_of_d_squares(n, d)),
        }
    }

    #[test]
    fn scaling_by_four_preserves_representability(n in 0u64..1_000_000) {
        prop_assert_eq!(
            four_power_obstruction(n).is_some(),
            four_power_obstruction(4 * n).is_some()
        );
    }
}
