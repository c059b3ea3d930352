//! Buchstab's function, the sieve region integral and exact sifting.

mod buchstab;
mod integral;
mod sift;

pub use buchstab::{buchstab_omega, omega_table, BuchstabTable, OMEGA_LIMIT};
pub use integral::{
    critical_constant, sieve_integral, sieve_integral_with, CriticalConstant, SieveIntegral,
    CRITICAL_BRACKET, DEFAULT_BUDGET,
};
pub use sift::{
    buchstab_identity_check, compare_ab, decompose_s1_s4, sift, ComparisonLine, ComparisonReport,
    Decomposition, IdentityCheck, SiftSet, Sifter, MAX_ELEMENT,
};
