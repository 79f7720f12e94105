//! Exhaustive scans over the canonical half-box.
//!
//! The half-box of radius `N` in dimension `d` is every integer vector with
//! `|x_i| <= N` whose first nonzero coordinate is positive, plus the zero
//! vector. Each coordinate runs through `0, 1, -1, 2, -2, ..., N, -N` and
//! vectors are visited lexicographically in that coordinate order, last
//! coordinate fastest. This order defines "first counterexample".
//!
//! Work is sharded by the first coordinate (`0..=N`, visited in increasing
//! order). Shards share nothing but an atomic lower bound on the index of the
//! earliest failing shard; results are merged in shard order, so the outcome
//! does not depend on the worker count.

use crate::forms::{FormError, QuadForm};
use rayon::prelude::*;
use std::sync::atomic::{AtomicU64, Ordering};

/// Maps a position in the coordinate order to its value: 0, 1, -1, 2, -2, ...
pub(crate) fn zigzag(k: u64) -> i64 {
    let half = k.div_ceil(2) as i64;
    if k % 2 == 1 {
        half
    } else {
        -half
    }
}

/// Number of vectors in the half-box, zero vector included.
pub fn half_box_size(dim: usize, radius: u64) -> Option<u64> {
    let side = radius.checked_mul(2)?.checked_add(1)?;
    let full = side.checked_pow(u32::try_from(dim).ok()?)?;
    Some((full - 1) / 2 + 1)
}

pub(crate) struct Failure {
    pub x: Vec<i64>,
    pub value: u64,
}

pub(crate) struct ScanOutcome {
    pub checked: u64,
    pub failures: Vec<Failure>,
    pub failure_total: u64,
}

struct Shard {
    checked: u64,
    failures: Vec<Failure>,
    failure_total: u64,
    aborted: bool,
}

/// Scans the half-box, recording up to `keep` failures in scan order.
/// With `stop_at_first`, shards after the earliest failing one are abandoned
/// and `checked` is no longer meaningful.
pub(crate) fn scan<P>(
    form: &QuadForm,
    radius: u64,
    jobs: usize,
    keep: usize,
    stop_at_first: bool,
    fails: P,
) -> Result<ScanOutcome, FormError>
where
    P: Fn(u64) -> bool + Sync,
{
    let earliest = AtomicU64::new(u64::MAX);
    let run = |first: u64| scan_shard(form, radius, first, keep, stop_at_first, &earliest, &fails);

    let shards: Vec<Result<Shard, FormError>> = if jobs <= 1 {
        (0..=radius).map(run).collect()
    } else {
        match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(|| (0..=radius).into_par_iter().map(run).collect()),
            Err(_) => (0..=radius).map(run).collect(),
        }
    };

    let mut out = ScanOutcome {
        checked: 0,
        failures: Vec::new(),
        failure_total: 0,
    };
    for shard in shards {
        let shard = shard?;
        if shard.aborted {
            continue;
        }
        out.checked += shard.checked;
        out.failure_total += shard.failure_total;
        let room = keep.saturating_sub(out.failures.len());
        out.failures.extend(shard.failures.into_iter().take(room));
        if stop_at_first && out.failure_total > 0 {
            break;
        }
    }
    Ok(out)
}

fn scan_shard<P>(
    form: &QuadForm,
    radius: u64,
    first: u64,
    keep: usize,
    stop_at_first: bool,
    earliest: &AtomicU64,
    fails: &P,
) -> Result<Shard, FormError>
where
    P: Fn(u64) -> bool,
{
    let dim = form.dim();
    let mut shard = Shard {
        checked: 0,
        failures: Vec::new(),
        failure_total: 0,
        aborted: false,
    };
    if stop_at_first && earliest.load(Ordering::Relaxed) < first {
        shard.aborted = true;
        return Ok(shard);
    }
    let top = 2 * radius;
    let mut idx = vec![0u64; dim];
    let mut x = vec![0i64; dim];
    x[0] = first as i64;
    loop {
        // first == 0 restricts the tail to vectors whose first nonzero entry is positive
        let canonical = first > 0 || x[1..].iter().find(|&&v| v != 0).is_none_or(|&v| v > 0);
        if canonical {
            let value = form.evaluate_unchecked_len(&x).ok_or(FormError::Overflow)?;
            shard.checked += 1;
            if fails(value) {
                shard.failure_total += 1;
                if shard.failures.len() < keep {
                    shard.failures.push(Failure { x: x.clone(), value });
                }
                if stop_at_first {
                    earliest.fetch_min(first, Ordering::Relaxed);
                    return Ok(shard);
                }
            }
            if stop_at_first
                && shard.checked.is_multiple_of(4096)
                && earliest.load(Ordering::Relaxed) < first
            {
                shard.aborted = true;
                return Ok(shard);
            }
        }
        // odometer over coordinates 1..dim, last one fastest
        let mut pos = dim;
        loop {
            if pos == 1 {
                return Ok(shard);
            }
            pos -= 1;
            if idx[pos] < top {
                idx[pos] += 1;
                x[pos] = zigzag(idx[pos]);
                break;
            }
            idx[pos] = 0;
            x[pos] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{diagonal_form, identity_form};

    #[test]
    fn zigzag_order() {
        let v: Vec<i64> = (0..7).map(zigzag).collect();
        assert_eq!(v, vec![0, 1, -1, 2, -2, 3, -3]);
    }

    #[test]
    fn sizes() {
        assert_eq!(half_box_size(3, 0), Some(1));
        assert_eq!(half_box_size(3, 1), Some(14));
        assert_eq!(half_box_size(3, 60), Some((121u64.pow(3) - 1) / 2 + 1));
        assert_eq!(half_box_size(1, 5), Some(6));
    }

    fn visited(dim: usize, radius: u64) -> Vec<Vec<i64>> {
        let form = identity_form(dim);
        let seen = std::sync::Mutex::new(Vec::new());
        // record everything by declaring every value a failure
        let out = scan(&form, radius, 1, usize::MAX, false, |_| true).unwrap();
        for f in out.failures {
            seen.lock().unwrap().push(f.x);
        }
        seen.into_inner().unwrap()
    }

    #[test]
    fn half_box_is_a_sign_transversal() {
        for dim in 1..=4 {
            for radius in 0..=3u64 {
                let v = visited(dim, radius);
                assert_eq!(v.len() as u64, half_box_size(dim, radius).unwrap());
                let mut set = std::collections::HashSet::new();
                for x in &v {
                    assert!(x.iter().all(|c| c.unsigned_abs() <= radius));
                    let neg: Vec<i64> = x.iter().map(|c| -c).collect();
                    assert!(set.insert(x.clone()));
                    if x.iter().any(|&c| c != 0) {
                        assert!(!set.contains(&neg), "{x:?} and its negation both visited");
                    }
                }
            }
        }
    }

    #[test]
    fn visit_order_starts_as_documented() {
        let v = visited(2, 1);
        assert_eq!(v, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1], vec![1, -1]]);
    }

    #[test]
    fn parallel_matches_sequential() {
        let form = diagonal_form(&[1, 1, 3]).unwrap();
        let fails = |v: u64| crate::sos::four_power_obstruction(v).is_some();
        let seq = scan(&form, 6, 1, 10, false, fails).unwrap();
        for jobs in [2, 3, 8] {
            let par = scan(&form, 6, jobs, 10, false, fails).unwrap();
            assert_eq!(par.checked, seq.checked);
            assert_eq!(par.failure_total, seq.failure_total);
            let a: Vec<_> = par.failures.iter().map(|f| (f.x.clone(), f.value)).collect();
            let b: Vec<_> = seq.failures.iter().map(|f| (f.x.clone(), f.value)).collect();
            assert_eq!(a, b);
        }
    }
}
