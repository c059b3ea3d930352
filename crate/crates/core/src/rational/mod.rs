//! Continued fractions and the parameter bookkeeping that ties `N`, the
//! degree `k` and the convergent denominator `q` together.

mod alpha;
mod convergents;
mod inequalities;
mod schedule;

pub use alpha::{AlphaSpec, DEFAULT_DECIMAL_BITS};
pub use convergents::{
    approximation_error, cf_convergents, exact_sign, within_reciprocal_bound, Convergent,
};
pub use inequalities::{verify_rho_inequalities, InequalityCheck, InequalityReport};
pub use schedule::{
    schedule, schedule_strict, select_modulus, select_modulus_for_n, ModulusChoice, ParamSchedule,
    SelectOptions,
};

use std::fmt;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// The integer `J(f)` governing the admissible exponent for degree `k`.
///
/// Monomials `αx^k + β` use `2^(k-1)` up to `k = 5` and `k(k-1)` beyond;
/// other polynomials use `2^(k-1)` up to `k = 7` and `2k(k-1)` beyond.
pub fn j_invariant(k: u32, monomial: bool) -> Result<u64> {
    if k < 2 {
        return Err(Error::domain(format!("degree k = {k} must be at least 2")));
    }
    let k64 = k as u64;
    let j = match (monomial, k) {
        (true, 2..=5) | (false, 2..=7) => 1u64
            .checked_shl(k - 1)
            .ok_or_else(|| Error::domain("k too large"))?,
        (true, _) => k64 * (k64 - 1),
        (false, _) => 2 * k64 * (k64 - 1),
    };
    Ok(j)
}

/// Exact rational exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rho(pub Ratio<i64>);

impl Rho {
    pub fn to_f64(self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }

    pub fn ratio(self) -> Ratio<i64> {
        self.0
    }
}

impl fmt::Display for Rho {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl Serialize for Rho {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Rho", 3)?;
        st.serialize_field("num", self.0.numer())?;
        st.serialize_field("den", self.0.denom())?;
        st.serialize_field("value", &self.to_f64())?;
        st.end()
    }
}

/// Exponent `ρ`: `2/13` for `k = 2`, `1/10` for `k = 3`, `0.4079 / J` for
/// `k >= 4`, held exactly.
pub fn rho(k: u32, j: u64) -> Result<Rho> {
    let valid = [j_invariant(k, true)?, j_invariant(k, false)?];
    if !valid.contains(&j) {
        return Err(Error::domain(format!(
            "J = {j} is not a valid invariant for k = {k} (expected one of {valid:?})"
        )));
    }
    let r = match k {
        2 => Ratio::new(2, 13),
        3 => Ratio::new(1, 10),
        _ => {
            let den = i64::try_from(j)
                .ok()
                .and_then(|j| j.checked_mul(10_000))
                .ok_or_else(|| Error::domain("J too large"))?;
            Ratio::new(4079, den)
        }
    };
    Ok(Rho(r))
}

/// Sieve exponents `(α, α + β)` used by the Buchstab decomposition:
/// `(4/13, 5/13)` for `k = 2` and `(ρ, 1 - 2Jρ)` for `k >= 3`.
pub fn sieve_exponents(k: u32, j: u64, rho: Rho) -> (Ratio<i64>, Ratio<i64>) {
    if k == 2 {
        (Ratio::new(4, 13), Ratio::new(5, 13))
    } else {
        let r = rho.0;
        (r, Ratio::from_integer(1) - Ratio::from_integer(2 * j as i64) * r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j_table() {
        assert_eq!(j_invariant(2, true).unwrap(), 2);
        assert_eq!(j_invariant(5, true).unwrap(), 16);
        assert_eq!(j_invariant(6, true).unwrap(), 30);
        assert_eq!(j_invariant(7, false).unwrap(), 64);
        assert_eq!(j_invariant(8, false).unwrap(), 112);
        assert!(j_invariant(1, true).is_err());
    }

    #[test]
    fn rho_values() {
        assert_eq!(rho(2, 2).unwrap().0, Ratio::new(2, 13));
        assert_eq!(rho(3, 4).unwrap().0, Ratio::new(1, 10));
        let r4 = rho(4, 8).unwrap();
        assert_eq!(r4.0, Ratio::new(509_875, 10_000_000));
        assert_eq!(r4.to_string(), "4079/80000");
        assert!(rho(4, 9).is_err());
    }

    #[test]
    fn sieve_exponent_pairs() {
        let (a, ab) = sieve_exponents(3, 4, rho(3, 4).unwrap());
        assert_eq!((a, ab), (Ratio::new(1, 10), Ratio::new(1, 5)));
        let (_, ab4) = sieve_exponents(4, 8, rho(4, 8).unwrap());
        assert_eq!(ab4, Ratio::new(1842, 10_000));
        let (a2, ab2) = sieve_exponents(2, 2, rho(2, 2).unwrap());
        assert_eq!((a2, ab2), (Ratio::new(4, 13), Ratio::new(5, 13)));
    }
}
