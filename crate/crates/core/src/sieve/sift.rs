//! Exact sifting: `S(E, z)` counts `n ∈ E` with no prime factor below `z`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::primes::{integer_sqrt, is_prime, primes_up_to};
use crate::rational::ParamSchedule;

/// Largest element accepted by [`sift`].
pub const MAX_ELEMENT: u64 = 1_000_000_000;
/// Above this maximum element the least-prime-factor table is replaced by
/// trial division.
const LPF_TABLE_CAP: u64 = 1 << 25;

/// A finite set of positive integers, kept sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SiftSet {
    elements: Vec<u64>,
}

impl SiftSet {
    pub fn new(mut elements: Vec<u64>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        if elements.first() == Some(&0) {
            return Err(Error::domain("sift sets hold positive integers"));
        }
        if elements.last().is_some_and(|&m| m > MAX_ELEMENT) {
            return Err(Error::domain(format!("elements must be <= {MAX_ELEMENT}")));
        }
        Ok(Self { elements })
    }

    /// The integers in `(lo, hi]`.
    pub fn interval(lo: u64, hi: u64) -> Result<Self> {
        Self::new((lo + 1..=hi).collect())
    }

    /// `B = (N/2, N]`.
    pub fn b_set(n: u64) -> Result<Self> {
        Self::interval(n / 2, n)
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn max(&self) -> u64 {
        self.elements.last().copied().unwrap_or(0)
    }

    pub fn contains(&self, n: u64) -> bool {
        self.elements.binary_search(&n).is_ok()
    }

    /// `E_d = {n : dn ∈ E}`.
    pub fn quotient(&self, d: u64) -> Self {
        assert!(d >= 1);
        let (lo, hi) = match (self.elements.first(), self.elements.last()) {
            (Some(&lo), Some(&hi)) => (lo, hi),
            _ => return self.clone(),
        };
        let multiples = hi / d - (lo - 1) / d;
        let elements = if (multiples as usize) < self.elements.len() / 8 {
            ((lo - 1) / d + 1..=hi / d)
                .filter(|&m| self.contains(m * d))
                .collect()
        } else {
            self.elements
                .iter()
                .filter(|&&n| n % d == 0)
                .map(|&n| n / d)
                .collect()
        };
        Self { elements }
    }

    pub fn count_primes(&self) -> u64 {
        self.elements.iter().filter(|&&n| is_prime(n)).count() as u64
    }
}

/// Least-prime-factor oracle for integers up to a fixed bound.
pub struct Sifter {
    limit: u64,
    /// `lpf[n]`, or 0 for `n < 2`; empty when trial division is used.
    lpf: Vec<u32>,
    /// Primes up to `sqrt(limit)` for trial division.
    small: Vec<u64>,
}

impl Sifter {
    pub fn new(limit: u64) -> Self {
        if limit <= LPF_TABLE_CAP {
            let n = limit as usize;
            let mut lpf = vec![0u32; n + 1];
            for i in 2..=n {
                if lpf[i] == 0 {
                    let mut j = i;
                    while j <= n {
                        if lpf[j] == 0 {
                            lpf[j] = i as u32;
                        }
                        j += i;
                    }
                }
            }
            Self { limit, lpf, small: Vec::new() }
        } else {
            Self {
                limit,
                lpf: Vec::new(),
                small: primes_up_to(integer_sqrt(limit) + 1),
            }
        }
    }

    /// Whether `n` has no prime factor `< z`.
    pub fn is_rough(&self, n: u64, z: f64) -> bool {
        if n < 2 {
            return true;
        }
        debug_assert!(n <= self.limit);
        if !self.lpf.is_empty() {
            return self.lpf[n as usize] as f64 >= z;
        }
        let r = integer_sqrt(n);
        for &p in &self.small {
            if p as f64 >= z || p > r {
                break;
            }
            if n % p == 0 {
                return false;
            }
        }
        // no factor below min(z, sqrt n + 1): either all factors are >= z,
        // or n itself is a prime below z
        !(is_prime(n) && (n as f64) < z)
    }

    /// `S(E, z)`.
    pub fn sift(&self, e: &SiftSet, z: f64) -> u64 {
        e.elements.iter().filter(|&&n| self.is_rough(n, z)).count() as u64
    }
}

/// `S(E, z)`: number of `n ∈ E` with no prime factor `< z`.
pub fn sift(e: &SiftSet, z: f64) -> u64 {
    Sifter::new(e.max()).sift(e, z)
}

/// Both sides of `S(E, z2) = S(E, z1) - Σ_{z1 <= p < z2} S(E_p, p)`.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub lhs: i64,
    pub rhs: i64,
    pub equal: bool,
}

pub fn buchstab_identity_check(e: &SiftSet, z1: f64, z2: f64) -> Result<IdentityCheck> {
    if !(2.0 <= z1 && z1 <= z2 && z2.is_finite()) {
        return Err(Error::domain("need 2 <= z1 <= z2"));
    }
    let s = Sifter::new(e.max());
    let lhs = s.sift(e, z2) as i64;
    let mut rhs = s.sift(e, z1) as i64;
    for p in primes_up_to(z2.ceil() as u64) {
        let pf = p as f64;
        if pf >= z1 && pf < z2 {
            rhs -= s.sift(&e.quotient(p), pf) as i64;
        }
    }
    Ok(IdentityCheck {
        lhs,
        rhs,
        equal: lhs == rhs,
    })
}

/// The four sums of the prime-detecting decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub s1: i64,
    pub s2: i64,
    pub s3: i64,
    pub s4: i64,
    pub primes: i64,
    /// `s1 - s2 - s3 + s4 == primes`
    pub identity_holds: bool,
}

/// Decompose the prime count of `E ⊆ (N/2, N]` with sifting level
/// `N^alpha` and switch point `N^(alpha + beta)`:
///
/// * `S1 = S(E, N^α)`
/// * `S2 = Σ_{N^α <= p <= N^(α+β)} S(E_p, p)`
/// * `S3 = Σ_{N^(α+β) < p <= sqrt(2N)} (S(E_p, N^α) - Σ_{N^α <= q < N^(α+β)} S(E_pq, q))`
/// * `S4 = Σ_{N^(α+β) < p <= sqrt(2N)} Σ_{N^(α+β) <= q < p} S(E_pq, q)`
pub fn decompose_s1_s4(e: &SiftSet, n: u64, alpha: f64, beta: f64) -> Result<Decomposition> {
    if !(alpha > 0.0 && beta > 0.0 && alpha + beta <= 0.5) {
        return Err(Error::domain("need 0 < alpha < alpha + beta <= 1/2"));
    }
    if n < 9 {
        return Err(Error::domain("need N >= 9 so that sqrt(2N) < N/2"));
    }
    if e.elements.first().is_some_and(|&m| m <= n / 2) || e.max() > n {
        return Err(Error::domain("E must lie in (N/2, N]"));
    }
    let nf = n as f64;
    let za = nf.powf(alpha);
    let zab = nf.powf(alpha + beta);
    let top = (2.0 * nf).sqrt();
    let s = Sifter::new(n);
    let ps: Vec<u64> = primes_up_to(top.floor() as u64 + 1)
        .into_iter()
        .filter(|&p| p as f64 <= top)
        .collect();

    let s1 = s.sift(e, za) as i64;
    let mut s2 = 0i64;
    let mut s3 = 0i64;
    let mut s4 = 0i64;
    for &p in &ps {
        let pf = p as f64;
        if pf < za {
            continue;
        }
        let ep = e.quotient(p);
        if pf <= zab {
            s2 += s.sift(&ep, pf) as i64;
            continue;
        }
        s3 += s.sift(&ep, za) as i64;
        for &q in ps.iter().take_while(|&&q| q < p) {
            let qf = q as f64;
            if qf < za {
                continue;
            }
            let v = s.sift(&ep.quotient(q), qf) as i64;
            if qf < zab {
                s3 -= v;
            } else {
                s4 += v;
            }
        }
    }
    let primes = e.count_primes() as i64;
    Ok(Decomposition {
        s1,
        s2,
        s3,
        s4,
        primes,
        identity_holds: s1 - s2 - s3 + s4 == primes,
    })
}

/// One line of the A-versus-B comparison.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonLine {
    pub name: &'static str,
    pub a_value: i64,
    pub b_scaled: f64,
    pub difference: f64,
    /// `δ N^(1 - η/2)`
    pub scale: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub n: u64,
    pub delta: f64,
    pub a_size: usize,
    pub b_size: usize,
    pub a: Decomposition,
    pub b: Decomposition,
    pub lines: Vec<ComparisonLine>,
    /// `#{p ∈ A} / (2δ #{p ∈ B})`
    pub prime_ratio: f64,
}

/// Compare every sum for `A` against `2δ` times the same sum for
/// `B = (N/2, N]`, using the sieve exponents of `sched`.
pub fn compare_ab(a: &SiftSet, sched: &ParamSchedule) -> Result<ComparisonReport> {
    let n = sched.n;
    let b = SiftSet::b_set(n)?;
    let alpha = sched.sieve_alpha;
    let beta = sched.sieve_alpha_beta - sched.sieve_alpha;
    let da = decompose_s1_s4(a, n, alpha, beta)?;
    let db = decompose_s1_s4(&b, n, alpha, beta)?;
    let two_delta = 2.0 * sched.delta;
    let scale = sched.delta * (n as f64).powf(1.0 - sched.eta / 2.0);
    let line = |name, x: i64, y: i64| ComparisonLine {
        name,
        a_value: x,
        b_scaled: two_delta * y as f64,
        difference: x as f64 - two_delta * y as f64,
        scale,
    };
    let lines = vec![
        line("S1", da.s1, db.s1),
        line("S2", da.s2, db.s2),
        line("S3", da.s3, db.s3),
        line("S4", da.s4, db.s4),
        line("primes", da.primes, db.primes),
    ];
    Ok(ComparisonReport {
        n,
        delta: sched.delta,
        a_size: a.len(),
        b_size: b.len(),
        prime_ratio: da.primes as f64 / (two_delta * db.primes as f64),
        a: da,
        b: db,
        lines,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::primes_in_segment;
    use proptest::prelude::*;

    fn brute(e: &[u64], z: f64) -> u64 {
        e.iter()
            .filter(|&&n| (2..n.max(2)).chain([n]).all(|d| d as f64 >= z || n % d != 0 || !is_prime(d)))
            .count() as u64
    }

    #[test]
    fn small_examples() {
        let e = SiftSet::new((2..=30).collect()).unwrap();
        assert_eq!(sift(&e, 2.0), 29);
        assert_eq!(sift(&e, 5.0), 9);
        let r = buchstab_identity_check(&e, 2.0, 5.0).unwrap();
        assert_eq!((r.lhs, r.rhs, r.equal), (9, 9, true));
        // 29 - S(E_2, 2) - S(E_3, 3) = 29 - 15 - 5
        assert_eq!(sift(&e.quotient(2), 2.0), 15);
        assert_eq!(sift(&e.quotient(3), 3.0), 5);
        assert!(buchstab_identity_check(&e, 7.0, 7.0).unwrap().equal);
    }

    #[test]
    fn b_set_top_level_counts_primes() {
        let n = 10_000u64;
        let b = SiftSet::b_set(n).unwrap();
        let base = primes_up_to(100);
        let oracle = primes_in_segment(n / 2 + 1, n, &base).len() as u64;
        assert_eq!(oracle, 560);
        assert_eq!(sift(&b, (2.0 * n as f64).sqrt()), 560);
    }

    #[test]
    fn trial_division_path_agrees() {
        let hi = LPF_TABLE_CAP + 2000;
        let e = SiftSet::interval(LPF_TABLE_CAP - 2000, hi).unwrap();
        let table = Sifter::new(LPF_TABLE_CAP);
        let trial = Sifter::new(hi);
        for z in [2.0, 3.5, 30.0, 1000.0, 6000.0, 1e9] {
            let inside = SiftSet::interval(LPF_TABLE_CAP - 2000, LPF_TABLE_CAP).unwrap();
            assert_eq!(table.sift(&inside, z), trial.sift(&inside, z), "z={z}");
        }
        assert!(trial.sift(&e, 2.0) == e.len() as u64);
    }

    #[test]
    fn decomposition_identity_on_b() {
        let n = 10_000;
        let b = SiftSet::b_set(n).unwrap();
        let d = decompose_s1_s4(&b, n, 4.0 / 13.0, 1.0 / 13.0).unwrap();
        assert!(d.identity_holds, "{d:?}");
        assert_eq!(d.primes, 560);
        let composites = SiftSet::new((5001..=10_000).filter(|&m| !is_prime(m)).collect()).unwrap();
        let d = decompose_s1_s4(&composites, n, 0.2, 0.1).unwrap();
        assert_eq!(d.primes, 0);
        assert!(d.identity_holds);
    }

    #[test]
    fn compare_with_full_set() {
        let sched = crate::rational::schedule(10_000, 2, true, 0.01, 0.001).unwrap().with_l1(1.0);
        let b = SiftSet::b_set(10_000).unwrap();
        let r = compare_ab(&b, &sched).unwrap();
        assert_eq!(r.delta, 1.0);
        assert_eq!(r.prime_ratio, 0.5);
        for l in &r.lines {
            assert_eq!(l.difference, -(l.a_value as f64));
        }
    }

    #[test]
    fn brute_oracle() {
        let e: Vec<u64> = (1..200).collect();
        let s = SiftSet::new(e.clone()).unwrap();
        for z in [2.0, 2.5, 3.0, 7.0, 11.5, 50.0, 300.0] {
            assert_eq!(sift(&s, z), brute(&e, z), "z={z}");
        }
    }

    proptest! {
        #[test]
        fn sift_monotone_and_additive(
            xs in proptest::collection::btree_set(1u64..100_000, 0..200),
            z1 in 2.0f64..320.0,
            dz in 0.0f64..100.0,
        ) {
            let v: Vec<u64> = xs.iter().copied().collect();
            let (left, right) = v.split_at(v.len() / 2);
            let all = SiftSet::new(v.clone()).unwrap();
            let l = SiftSet::new(left.to_vec()).unwrap();
            let r = SiftSet::new(right.to_vec()).unwrap();
            prop_assert!(sift(&all, z1 + dz) <= sift(&all, z1));
            prop_assert_eq!(sift(&all, z1), sift(&l, z1) + sift(&r, z1));
        }

        #[test]
        fn identity_on_random_sets(
            xs in proptest::collection::btree_set(2u64..100_000, 1..300),
            z1 in 2.0f64..320.0,
            dz in 0.0f64..320.0,
        ) {
            let z2 = (z1 + dz).min(320.0);
            let e = SiftSet::new(xs.into_iter().collect()).unwrap();
            prop_assert!(buchstab_identity_check(&e, z1, z2).unwrap().equal);
        }
    }
}
