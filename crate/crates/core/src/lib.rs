//! Fat-point linear systems on generic K3 surfaces: exact lattice arithmetic
//! on the blow-up, a conjecture-conditional classifier, and bounded exhaustive
//! verification of the numerical facts the classification rests on.
//!
//! ```
//! use k3sys::classifier::{decompose, normalize, MemberKind};
//!
//! let spec = normalize(2, 4, &[4, 3]).unwrap();
//! let dec = decompose(&spec).unwrap();
//! assert_eq!(dec.dimension, 1);
//! assert_eq!(dec.member_kind, MemberKind::FixedPlusPencil);
//! ```

pub mod classifier;
pub mod lattice;
pub mod verifier;

pub use classifier::{decompose, normalize, Decomposition, LinearSystemSpec, MemberKind};
pub use lattice::{DivisorClass, LatticeError, SurfaceParams};
