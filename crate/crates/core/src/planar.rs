//! The dimension-2 obstruction: a positive-definite binary form whose values
//! are all sums of two squares has a square determinant.
//!
//! For `A = (a c; b d)` the form `Q(x, y) = |A (x, y)ᵀ|²` has Gram matrix
//! `AᵀA`. If another integral `A'` has the same Gram matrix then
//! `(det A)² = det AᵀA = (det A')²`. The binary case of the two-square
//! polynomial theorem says that whenever `Q(t, 1)` is always a sum of two
//! squares it is the sum of squares of two integral linear polynomials, which
//! provides such an `A'`. That theorem is consumed, not proved: here it is
//! turned into a finite search over linear decompositions.
//!
//! Matrices are always listed in `(a, b, c, d)` order, i.e. column by column.

use crate::forms::{integer_square_root, FormError, QuadForm, RationalScalar};
use crate::sos::{is_sum_of_d_squares, two_square_representations};
use crate::steinhaus::{Finding, VerificationReport};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// `A = (a c; b d)`: columns `(a, b)` and `(c, d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix2 {
    pub a: i32,
    pub b: i32,
    pub c: i32,
    pub d: i32,
}

impl IntMatrix2 {
    pub const IDENTITY: IntMatrix2 = IntMatrix2 { a: 1, b: 0, c: 0, d: 1 };

    pub fn new(a: i32, b: i32, c: i32, d: i32) -> Self {
        IntMatrix2 { a, b, c, d }
    }

    pub fn det(&self) -> i128 {
        i128::from(self.a) * i128::from(self.d) - i128::from(self.b) * i128::from(self.c)
    }

    pub fn scaled(&self, k: i32) -> Option<IntMatrix2> {
        Some(IntMatrix2 {
            a: self.a.checked_mul(k)?,
            b: self.b.checked_mul(k)?,
            c: self.c.checked_mul(k)?,
            d: self.d.checked_mul(k)?,
        })
    }

    /// The linear polynomials `(a t + c, b t + d)`, i.e. the rows of
    /// `A (t, 1)ᵀ`.
    pub fn as_linear_pair(&self) -> LinearSosPair {
        LinearSosPair {
            alpha: self.a.into(),
            beta: self.b.into(),
            gamma: self.c.into(),
            delta: self.d.into(),
        }
    }
}

/// Symmetric `2x2` Gram matrix `[[g11, g12], [g12, g22]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gram2 {
    pub g11: i128,
    pub g12: i128,
    pub g22: i128,
}

impl Gram2 {
    pub fn det(&self) -> i128 {
        self.g11 * self.g22 - self.g12 * self.g12
    }
}

pub fn gram_of(m: &IntMatrix2) -> Gram2 {
    let (a, b, c, d) = (
        i128::from(m.a),
        i128::from(m.b),
        i128::from(m.c),
        i128::from(m.d),
    );
    Gram2 {
        g11: a * a + b * b,
        g12: a * c + b * d,
        g22: c * c + d * d,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GramIdentity {
    /// `a² + b² = α² + β²`
    FirstColumnNorm,
    /// `ac + bd = αγ + βδ`
    CrossTerm,
    /// `c² + d² = γ² + δ²`
    SecondColumnNorm,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanarError {
    #[error("Gram matrices differ: {0:?} fails")]
    PremiseViolated(GramIdentity),
    #[error(transparent)]
    Form(#[from] FormError),
}

/// Given `AᵀA = A'ᵀA'`, checks `(det A)² = (det A')²`, and separately that
/// each side equals the Gram determinant. `Ok(false)` can only mean an
/// arithmetic defect.
pub fn verify_det_identity(m1: &IntMatrix2, m2: &IntMatrix2) -> Result<bool, PlanarError> {
    let g1 = gram_of(m1);
    let g2 = gram_of(m2);
    if g1.g11 != g2.g11 {
        return Err(PlanarError::PremiseViolated(GramIdentity::FirstColumnNorm));
    }
    if g1.g12 != g2.g12 {
        return Err(PlanarError::PremiseViolated(GramIdentity::CrossTerm));
    }
    if g1.g22 != g2.g22 {
        return Err(PlanarError::PremiseViolated(GramIdentity::SecondColumnNorm));
    }
    let lhs = m1.det() * m1.det();
    let rhs = m2.det() * m2.det();
    Ok(lhs == rhs && g1.det() == lhs && g2.det() == rhs)
}

/// A Pythagorean triple `p² + q² = r²` with `r > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PythagoreanTriple {
    pub p: i64,
    pub q: i64,
    pub r: i64,
}

impl PythagoreanTriple {
    pub fn is_valid(&self) -> bool {
        let (p, q, r) = (i128::from(self.p), i128::from(self.q), i128::from(self.r));
        r > 0 && p * p + q * q == r * r
    }

    /// Euclid's parametrization `(m² - n², 2mn, m² + n²)`.
    pub fn euclid(m: i64, n: i64) -> Self {
        PythagoreanTriple {
            p: m * m - n * n,
            q: 2 * m * n,
            r: m * m + n * n,
        }
    }
}

/// Row operations applied after the rotation: an optional row swap, then
/// optional sign flips of each row.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedPermutation {
    pub swap_rows: bool,
    pub negate_first: bool,
    pub negate_second: bool,
}

/// `P · R · m` with `R = (p/r, -q/r; q/r, p/r)` and `P` the signed
/// permutation, when every entry is an integer. Left multiplication by an
/// orthogonal matrix leaves `mᵀm` unchanged. Returns `None` for an invalid
/// triple as well.
pub fn gram_equivalent(
    m: &IntMatrix2,
    rotation: PythagoreanTriple,
    perm: SignedPermutation,
) -> Option<IntMatrix2> {
    if !rotation.is_valid() {
        return None;
    }
    let (p, q, r) = (
        i128::from(rotation.p),
        i128::from(rotation.q),
        i128::from(rotation.r),
    );
    let rotate = |top: i32, bottom: i32| -> Option<(i32, i32)> {
        let (top, bottom) = (i128::from(top), i128::from(bottom));
        let u = p * top - q * bottom;
        let v = q * top + p * bottom;
        if u % r != 0 || v % r != 0 {
            return None;
        }
        Some((i32::try_from(u / r).ok()?, i32::try_from(v / r).ok()?))
    };
    let (mut a, mut b) = rotate(m.a, m.b)?;
    let (mut c, mut d) = rotate(m.c, m.d)?;
    if perm.swap_rows {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut c, &mut d);
    }
    if perm.negate_first {
        a = a.checked_neg()?;
        c = c.checked_neg()?;
    }
    if perm.negate_second {
        b = b.checked_neg()?;
        d = d.checked_neg()?;
    }
    Some(IntMatrix2 { a, b, c, d })
}

/// `f(t) = c2 t² + c1 t + c0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadPoly {
    pub c2: i64,
    pub c1: i64,
    pub c0: i64,
}

impl QuadPoly {
    /// `f(t) = Q(t, 1)`.
    pub fn from_form(form: &QuadForm) -> Result<Self, FormError> {
        if form.dim() != 2 {
            return Err(FormError::DimensionMismatch {
                expected: 2,
                found: form.dim(),
            });
        }
        Ok(QuadPoly {
            c2: form.twice_gram(0, 0) / 2,
            c1: form.twice_gram(0, 1),
            c0: form.twice_gram(1, 1) / 2,
        })
    }
}

/// `x(t) = αt + γ`, `y(t) = βt + δ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LinearSosPair {
    pub alpha: i64,
    pub beta: i64,
    pub gamma: i64,
    pub delta: i64,
}

impl LinearSosPair {
    fn key(&self) -> (i64, i64, i64, i64) {
        (self.alpha, self.beta, self.gamma, self.delta)
    }

    /// Coefficients `(c2, c1, c0)` of `x(t)² + y(t)²`.
    pub fn expand(&self) -> (i128, i128, i128) {
        let (a, b, g, d) = (
            i128::from(self.alpha),
            i128::from(self.beta),
            i128::from(self.gamma),
            i128::from(self.delta),
        );
        (a * a + b * b, 2 * (a * g + b * d), g * g + d * d)
    }

    /// The eight pairs obtained by negating either linear polynomial and
    /// swapping the two.
    pub fn orbit(&self) -> [LinearSosPair; 8] {
        let mut out = [*self; 8];
        let mut i = 0;
        for swap in [false, true] {
            let (x, y) = if swap {
                ((self.beta, self.delta), (self.alpha, self.gamma))
            } else {
                ((self.alpha, self.gamma), (self.beta, self.delta))
            };
            for sx in [1, -1] {
                for sy in [1, -1] {
                    out[i] = LinearSosPair {
                        alpha: sx * x.0,
                        gamma: sx * x.1,
                        beta: sy * y.0,
                        delta: sy * y.1,
                    };
                    i += 1;
                }
            }
        }
        out
    }

    /// Lexicographically smallest member of the orbit, comparing
    /// `(α, β, γ, δ)`.
    pub fn canonical(&self) -> LinearSosPair {
        self.orbit()
            .into_iter()
            .min_by_key(LinearSosPair::key)
            .expect("orbit is non-empty")
    }
}

// All signed, ordered (u, v) with u² + v² = n.
fn signed_two_square_reps(n: u64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for (s, t) in two_square_representations(n) {
        let (s, t) = (s as i64, t as i64);
        for (u, v) in [(s, t), (t, s)] {
            for su in [1, -1] {
                for sv in [1, -1] {
                    out.push((su * u, sv * v));
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Every way of writing `f` as `(αt + γ)² + (βt + δ)²` with integer
/// coefficients, one canonical representative per symmetry orbit, sorted.
pub fn find_linear_sos(f: &QuadPoly) -> Vec<LinearSosPair> {
    let (Ok(c2), Ok(c0)) = (u64::try_from(f.c2), u64::try_from(f.c0)) else {
        return Vec::new();
    };
    let leading = signed_two_square_reps(c2);
    let constant = signed_two_square_reps(c0);
    let mut out: Vec<LinearSosPair> = leading
        .iter()
        .flat_map(|&(alpha, beta)| {
            constant.iter().filter_map(move |&(gamma, delta)| {
                let cross = 2 * (i128::from(alpha) * i128::from(gamma)
                    + i128::from(beta) * i128::from(delta));
                (cross == i128::from(f.c1)).then_some(LinearSosPair {
                    alpha,
                    beta,
                    gamma,
                    delta,
                })
            })
        })
        .map(|p| p.canonical())
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PremiseFailure {
    pub x: [i64; 2],
    pub value: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryFormReport {
    pub t_bound: u64,
    /// Number of values `Q(t, 1)` and `Q(1, t)` examined.
    pub values_checked: u64,
    /// Whether every examined value is a sum of two squares.
    pub premise_holds: bool,
    pub premise_failure: Option<PremiseFailure>,
    pub determinant: RationalScalar,
    #[serde(with = "crate::json::option")]
    pub determinant_root: Option<BigInt>,
    pub polynomial: QuadPoly,
    pub decompositions: Vec<LinearSosPair>,
}

/// Reports the sampled premise (`Q(t, 1)` and `Q(1, t)` are sums of two
/// squares for `|t| <= t_bound`, visited as `0, 1, -1, 2, -2, ...`), whether
/// `det B` is a square, and the linear decompositions of `Q(t, 1)`. Nothing
/// is asserted; callers compare the three.
pub fn check_binary_form(form: &QuadForm, t_bound: u64) -> Result<BinaryFormReport, FormError> {
    let polynomial = QuadPoly::from_form(form)?;
    let bound = i64::try_from(t_bound).map_err(|_| FormError::Overflow)?;
    let mut values_checked = 0;
    let mut premise_failure = None;
    'scan: for k in 0..=2 * bound {
        let t = if k % 2 == 1 { (k + 1) / 2 } else { -(k / 2) };
        for x in [[t, 1], [1, t]] {
            let value = form.evaluate(&x)?;
            values_checked += 1;
            if !is_sum_of_d_squares(value, 2) {
                premise_failure = Some(PremiseFailure { x, value });
                break 'scan;
            }
        }
    }
    let determinant = form.determinant();
    Ok(BinaryFormReport {
        t_bound,
        values_checked,
        premise_holds: premise_failure.is_none(),
        premise_failure,
        determinant_root: integer_square_root(&determinant),
        determinant,
        polynomial,
        decompositions: find_linear_sos(&polynomial),
    })
}

/// The binary form `|A v|²`, i.e. `G = 2 AᵀA`. Fails for singular `A`.
pub fn form_from_matrix(m: &IntMatrix2) -> Result<QuadForm, FormError> {
    let g = gram_of(m);
    let conv = |v: i128| i64::try_from(2 * v).map_err(|_| FormError::Overflow);
    crate::forms::make_form(vec![
        vec![conv(g.g11)?, conv(g.g12)?],
        vec![conv(g.g12)?, conv(g.g22)?],
    ])
}

fn random_matrix(rng: &mut ChaCha8Rng, bound: i32) -> IntMatrix2 {
    IntMatrix2 {
        a: rng.random_range(-bound..=bound),
        b: rng.random_range(-bound..=bound),
        c: rng.random_range(-bound..=bound),
        d: rng.random_range(-bound..=bound),
    }
}

fn random_perm(rng: &mut ChaCha8Rng) -> SignedPermutation {
    SignedPermutation {
        swap_rows: rng.random(),
        negate_first: rng.random(),
        negate_second: rng.random(),
    }
}

/// Builds `cases` Gram-equivalent pairs and checks the determinant identity
/// on each. Even cases use a signed permutation alone; odd cases rotate by a
/// random Euclid triple after scaling the base matrix by the hypotenuse so
/// the rotation stays integral.
pub fn det_identity_fuzz(cases: u64, seed: u64) -> VerificationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerificationReport::new("planar-det-identity")
        .param("cases", cases)
        .param("seed", seed);
    for i in 0..cases {
        let base = random_matrix(&mut rng, 20);
        let perm = random_perm(&mut rng);
        let (m1, triple) = if i % 2 == 0 {
            (base, PythagoreanTriple { p: 1, q: 0, r: 1 })
        } else {
            let n = rng.random_range(1..=6);
            let m = rng.random_range(n + 1..=8);
            let mut t = PythagoreanTriple::euclid(m, n);
            if rng.random() {
                std::mem::swap(&mut t.p, &mut t.q);
            }
            (base.scaled(t.r as i32).expect("small entries"), t)
        };
        let outcome = gram_equivalent(&m1, triple, perm)
            .ok_or_else(|| format!("no integral image of {m1:?} under {triple:?}"))
            .and_then(|m2| {
                let ok = verify_det_identity(&m1, &m2).map_err(|e| e.to_string())?;
                ok.then_some(()).ok_or(format!("identity fails for {m1:?}, {m2:?}"))
            });
        report.check(outcome.is_ok(), || Finding::Mismatch {
            detail: outcome.unwrap_err(),
        });
    }
    report
}

/// For `cases` random nonsingular `A` (entries in `[-20, 20]`), builds
/// `Q = |Av|²` and checks that the decomposition search recovers `A` up to
/// symmetry and that `det B` is the square of `|det A|`.
pub fn sos_form_suite(cases: u64, seed: u64) -> VerificationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerificationReport::new("planar-sos-forms")
        .param("cases", cases)
        .param("seed", seed);
    let mut done = 0;
    while done < cases {
        let m = random_matrix(&mut rng, 20);
        if m.det() == 0 {
            continue;
        }
        done += 1;
        let outcome = check_sos_form(&m);
        report.check(outcome.is_ok(), || Finding::Mismatch {
            detail: outcome.unwrap_err(),
        });
    }
    report
}

fn check_sos_form(m: &IntMatrix2) -> Result<(), String> {
    let form = form_from_matrix(m).map_err(|e| e.to_string())?;
    let report = check_binary_form(&form, 0).map_err(|e| e.to_string())?;
    let wanted = m.as_linear_pair().canonical();
    if !report.decompositions.contains(&wanted) {
        return Err(format!("{m:?}: {wanted:?} missing from decompositions"));
    }
    let root = BigInt::from(m.det().abs());
    if report.determinant_root != Some(root) {
        return Err(format!("{m:?}: determinant {} is not det(A)^2", report.determinant));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{diagonal_form, identity_form};

    #[test]
    fn gram_examples() {
        assert_eq!(gram_of(&IntMatrix2::IDENTITY), Gram2 { g11: 1, g12: 0, g22: 1 });
        assert_eq!(gram_of(&IntMatrix2::new(1, 2, 2, 1)), Gram2 { g11: 5, g12: 4, g22: 5 });
        assert_eq!(gram_of(&IntMatrix2::new(3, -4, 4, 3)), Gram2 { g11: 25, g12: 0, g22: 25 });
    }

    #[test]
    fn det_identity_examples() {
        let m1 = IntMatrix2::new(1, 2, 2, 1);
        let m2 = IntMatrix2::new(2, 1, 1, 2);
        assert_eq!((m1.det(), m2.det()), (-3, 3));
        assert_eq!(verify_det_identity(&m1, &m2), Ok(true));
        assert_eq!(verify_det_identity(&m1, &m1), Ok(true));
        let five = IntMatrix2::new(5, 0, 0, 5);
        let rot = IntMatrix2::new(3, 4, -4, 3);
        assert_eq!(verify_det_identity(&five, &rot), Ok(true));
    }

    #[test]
    fn det_identity_premise_errors() {
        let id = IntMatrix2::IDENTITY;
        assert_eq!(
            verify_det_identity(&id, &IntMatrix2::new(2, 0, 0, 1)),
            Err(PlanarError::PremiseViolated(GramIdentity::FirstColumnNorm))
        );
        assert_eq!(
            verify_det_identity(&id, &IntMatrix2::new(1, 0, 1, 0)),
            Err(PlanarError::PremiseViolated(GramIdentity::CrossTerm))
        );
        assert_eq!(
            verify_det_identity(&id, &IntMatrix2::new(1, 0, 0, 2)),
            Err(PlanarError::PremiseViolated(GramIdentity::SecondColumnNorm))
        );
    }

    #[test]
    fn gram_equivalent_examples() {
        let t = PythagoreanTriple { p: 3, q: 4, r: 5 };
        let five = IntMatrix2::new(5, 0, 0, 5);
        assert_eq!(
            gram_equivalent(&five, t, SignedPermutation::default()),
            Some(IntMatrix2::new(3, 4, -4, 3))
        );
        assert_eq!(gram_equivalent(&IntMatrix2::IDENTITY, t, SignedPermutation::default()), None);
        let m = IntMatrix2::new(1, 2, 2, 1);
        let swap = SignedPermutation { swap_rows: true, ..Default::default() };
        let trivial = PythagoreanTriple { p: 1, q: 0, r: 1 };
        assert_eq!(gram_equivalent(&m, trivial, swap), Some(IntMatrix2::new(2, 1, 1, 2)));
        assert_eq!(
            gram_equivalent(&m, PythagoreanTriple { p: 1, q: 1, r: 1 }, swap),
            None
        );
    }

    #[test]
    fn canonical_orbit() {
        let p = LinearSosPair { alpha: 1, beta: 0, gamma: 0, delta: 1 };
        let q = LinearSosPair { alpha: 0, beta: 1, gamma: 1, delta: 0 };
        assert_eq!(p.canonical(), q.canonical());
        assert_eq!(p.canonical(), LinearSosPair { alpha: -1, beta: 0, gamma: 0, delta: -1 });
        for member in p.orbit() {
            assert_eq!(member.expand(), p.expand());
        }
    }

    #[test]
    fn linear_sos_examples() {
        let f = QuadPoly { c2: 1, c1: 0, c0: 1 };
        let found = find_linear_sos(&f);
        let p = LinearSosPair { alpha: 1, beta: 0, gamma: 0, delta: 1 };
        let q = LinearSosPair { alpha: 0, beta: 1, gamma: 1, delta: 0 };
        assert!(found.contains(&p.canonical()));
        assert!(found.contains(&q.canonical()));
        assert_eq!(found.len(), 1);

        let f = QuadPoly { c2: 2, c1: 2, c0: 1 };
        let want = LinearSosPair { alpha: 1, beta: 1, gamma: 1, delta: 0 };
        assert!(find_linear_sos(&f).contains(&want.canonical()));

        assert!(find_linear_sos(&QuadPoly { c2: 3, c1: 0, c0: 0 }).is_empty());
        assert!(find_linear_sos(&QuadPoly { c2: -1, c1: 0, c0: 1 }).is_empty());
    }

    #[test]
    fn decompositions_expand_back() {
        for c2 in 0..30 {
            for c0 in 0..30 {
                for c1 in -25..=25 {
                    let f = QuadPoly { c2, c1, c0 };
                    for p in find_linear_sos(&f) {
                        assert_eq!(p.expand(), (c2.into(), c1.into(), c0.into()));
                        assert_eq!(p, p.canonical());
                    }
                }
            }
        }
    }

    #[test]
    fn binary_form_examples() {
        let r = check_binary_form(&identity_form(2), 50).unwrap();
        assert!(r.premise_holds);
        assert_eq!(r.values_checked, 202);
        assert_eq!(r.determinant_root, Some(BigInt::from(1)));
        assert!(!r.decompositions.is_empty());

        let r = check_binary_form(&diagonal_form(&[1, 2]).unwrap(), 1).unwrap();
        assert!(!r.premise_holds);
        assert_eq!(r.premise_failure, Some(PremiseFailure { x: [1, 1], value: 3 }));
        assert_eq!(r.determinant, RationalScalar::from_integer(2));
        assert_eq!(r.determinant_root, None);

        let form = form_from_matrix(&IntMatrix2::new(1, 2, 2, 1)).unwrap();
        let r = check_binary_form(&form, 30).unwrap();
        assert!(r.premise_holds);
        assert_eq!(r.determinant_root, Some(BigInt::from(3)));

        assert!(matches!(
            check_binary_form(&identity_form(3), 1),
            Err(FormError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn suites_pass() {
        let r = det_identity_fuzz(200, 7);
        assert!(r.passed, "{:?}", r.counterexamples);
        assert_eq!(r.checked_count, 200);
        let r = sos_form_suite(50, 7);
        assert!(r.passed, "{:?}", r.counterexamples);
    }
}
