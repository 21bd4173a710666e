//! Low-rank approximation of binary matrices over GF(2) and the Boolean semiring.
//!
//! Given a `d x n` binary matrix `A` and a small rank `k`, the problem is to
//! pick binary `U` (`d x k`) and `V` (`k x n`) minimizing the number of entries
//! where `A` and the product `UV` differ, with the product taken either over
//! GF(2) (XOR accumulation) or over the Boolean semiring (OR accumulation).
//!
//! Everything here is exact and deterministic:
//!
//! * [`bitmat`] — the bit-packed matrix type and its GF(2)/Boolean kernels.
//! * [`css_gf2`] — exhaustive column subset selection over GF(2), the exact
//!   ratio bound `k/2 + 1 + k/(2(2^k-1))`, and the induced
//!   nearest-neighbor-basis check behind it.
//! * [`gcss_bool`] — generalized column subset selection over the Boolean
//!   semiring, where basis columns are set-formula combinations of selected
//!   columns, with its `2^k` ratio bound.
//! * [`oracle`] — brute-force globally optimal rank-`k` solvers, the ground
//!   truth every ratio is measured against.
//! * [`instances`] — generators for the structured matrix families the ratio
//!   bounds are tight on, plus seeded random instances.
//! * [`hardness`] — sign-matrix gadgets (Kronecker blow-up, Sylvester
//!   Hadamard replacement) and brute-force biclique/max-cut solvers used to
//!   check the rank-1 hardness reduction at desk scale.
//! * [`checks`] — the seeded verification suites wired into the CLI and the
//!   acceptance tests.
//!
//! Error counts are `u64`; ratios are exact integer fractions ([`Ratio`]),
//! never floats, so every bound comparison is exact.

pub mod bitmat;
pub mod budget;
pub mod checks;
pub mod css_gf2;
pub mod error;
pub mod gcss_bool;
pub mod hardness;
pub mod instances;
pub mod oracle;
pub mod ratio;
pub mod rng;

pub use bitmat::{BitColumn, BitMatrix};
pub use error::{Error, Result};
pub use ratio::Ratio;
