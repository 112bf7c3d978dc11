//! Normalisers in the symmetric group of subdirect products of cyclic groups
//! of prime order (and of dihedral groups of order `2p`), computed through the
//! monomial automorphism group of an associated linear code over F_p.
//!
//! ```
//! use cpnorm::{encode::code_to_group, gfp::{FpMatrix, PrimeField}, search::{normalizer, Config}};
//!
//! let f = PrimeField::new(2).unwrap();
//! let m = FpMatrix::from_rows(f, &[[1, 0, 1], [0, 1, 1]]).unwrap();
//! let h = code_to_group(&m).unwrap();
//! let n = normalizer(&h, 2, &Config::default()).unwrap();
//! assert_eq!(n.order.to_string(), "48");
//! ```

pub mod canon;
pub mod cli;
pub mod dihedral;
pub mod encode;
pub mod error;
pub mod gfp;
pub mod oracle;
pub mod perm;
pub mod search;

pub use error::{Error, Result};
