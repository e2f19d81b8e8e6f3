//! # valdist-core
//!
//! Distances between probabilistic states and between predicates, all
//! expressed through the validity pairing `state ⊨ predicate`, together
//! with the optimal witnesses that certify each distance:
//!
//! - **Total variation distance** on finite discrete distributions, with
//!   the sharp subset witness that attains it.
//! - **Kantorovich distance** on distributions over finite 1-bounded
//!   metric spaces, certified by an exact transportation-simplex coupling
//!   and a non-expansive dual witness.
//! - **Trace distance** on density matrices, with the support projection
//!   of the positive part as sharp witness, and the **validity distance**
//!   on matrix-algebra states.
//! - The **Archimedean metric** on effect modules (fuzzy predicates,
//!   matrix effects, scalars), computed generically from order tests and
//!   checked against the supremum metric and the operator norm.
//! - Finite **state-and-effect round-trips**: reconstructing
//!   distributions, predicates, Kleisli maps and effects from black-box
//!   homomorphisms, with residual reports.
//!
//! Every value is immutable after construction and every operation is
//! pure, so all types are safe to share across threads.
//!
//! ```rust
//! use valdist_core::dist::{Dist, tvd};
//!
//! let a = Dist::from_pairs(&[("heads", 0.75), ("tails", 0.25)]).unwrap();
//! let b = Dist::from_pairs(&[("heads", 0.25), ("tails", 0.75)]).unwrap();
//! assert!((tvd(&a, &b) - 0.5).abs() < 1e-12);
//! ```

#![forbid(unsafe_code)]

pub mod dist;
pub mod effect;
pub mod io;
pub mod metric;
pub mod quantum;
pub mod sample;
pub mod tol;
pub mod transport;
pub mod triangle;
pub mod verify;
