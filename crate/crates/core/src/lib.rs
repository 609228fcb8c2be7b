//! Mean values of completely multiplicative functions built from the
//! multiplicative orders `f_q(p)` of a fixed prime `q`, together with the
//! machinery around them: prime tables, exact root-of-unity arithmetic, an
//! explicit mean-value bound, truncated Euler products and Dirichlet series,
//! Delange prime-sum diagnostics, Artin-density counts, and censuses.

pub mod bound;
pub mod census;
pub mod chi;
pub mod cli;
pub mod error;
pub mod mean;
pub mod order;
pub mod rotation;
pub mod series;
pub mod sieve;
pub mod summation;
pub mod table;

pub use bound::{
    order_primes, theorem1_bound, verify_bound, BoundReport, OrderedPrimeList, QConvention,
};
pub use census::{
    cyclotomic_coset_count, iq_count, large_order_census, sk_census, Census, CensusRow,
};
pub use chi::{ChiFunction, ChiKind};
pub use error::{Error, LoadError, Result};
pub use mean::{mean_series, naive_mean, MeanSeries, Schedule};
pub use order::multiplicative_order;
pub use rotation::{rot_mul, rot_pow, UnitRotation};
pub use series::{
    artin_constant, artin_density, delange_diag, dirichlet_sum, eq2_identity_check, euler_product,
    residue_probe,
};
pub use sieve::sieve_primes;
pub use table::{build_prime_table, load_table, save_table, PrimeRecord, PrimeTable};
