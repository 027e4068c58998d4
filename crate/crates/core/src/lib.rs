//! Combinatorial intersection cohomology of polyhedral fans.
//!
//! The crate works over exact ordered fields (the rationals and real
//! quadratic fields) and computes generalized h-vectors, quasi-convexity,
//! minimal extension sheaves, and the duality and Lefschetz checks that
//! come with them.
//!
//! ```
//! use fanic::exactmath::FieldScalar;
//! use fanic::fan::{build_fan, FanPoset, Subfan};
//! use fanic::hvector::{global_poincare, Mode};
//! use fanic::mes::{construct_mes, reduced_dims};
//!
//! let v = |xs: &[i64]| xs.iter().map(|&x| FieldScalar::from_int(x)).collect::<Vec<_>>();
//! let rays = vec![v(&[1, 1, 1]), v(&[-1, 1, 1]), v(&[-1, -1, 1]), v(&[1, -1, 1])];
//! let fan = build_fan(3, rays, vec![vec![0, 1, 2, 3]])?;
//!
//! // Poincaré polynomial from the face lattice: 1 + t².
//! let p = global_poincare(&FanPoset::from_fan(&fan), Mode::Absolute)?;
//! assert_eq!(p.coeffs(), &[1, 1]);
//!
//! // The same numbers from the minimal extension sheaf.
//! let model = construct_mes(&fan)?;
//! let dims = reduced_dims(&model, &Subfan::full(&fan), &Subfan::empty(), 6)?;
//! assert_eq!(dims.trimmed(), vec![1, 1]);
//! # Ok::<(), fanic::Error>(())
//! ```

pub mod error;
pub mod exactmath;
pub mod fan;
pub mod fansheaf;
pub mod hvector;
pub mod mes;

pub use error::{Error, Result};
