//! Exact computation of the cohomology `H^k(P_Σ, Ω^l(X))` of toric varieties
//! with logarithmic poles along a semiample torus-invariant divisor X.
//!
//! Three independent routes produce the same integer table:
//! Chow groups of the fibers of the canonical contraction
//! ([`Route::Chow`]), a closed formula in cone counts ([`Route::Count`]) and
//! the Ishida-type complex of every graded piece ([`Route::Direct`]).
//! [`cocycle`] turns a basis into explicit Čech cocycles.
//!
//! ```
//! use toricoh::{builtin, full_table, Divisor, Route};
//!
//! let fan = builtin("P2").unwrap();
//! let table = full_table(&fan, &Divisor::trivial(3), Route::All).unwrap();
//! assert_eq!(table.get(1, 1), 1);
//! assert_eq!(table.get(0, 1), 0);
//! ```

pub mod builtin;
pub mod chow;
pub mod cocycle;
pub mod divisor;
pub mod engine;
pub mod error;
pub mod exterior;
pub mod ishida;
pub mod lattice;
pub mod linalg;
pub mod polytope;

pub use builtin::{builtin, builtin_names};
pub use divisor::{classify, contraction, Classification, ContractionData, Divisor};
pub use engine::{full_table, vanishing_audit, AuditReport, HodgeTable, Route};
pub use error::{Error, Result};
pub use lattice::{fan_validate, load_fan, Fan, LatticeVector};
