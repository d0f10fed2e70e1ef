//! Local list recovery for tensor codes over GF(2^s).
//!
//! The crate builds, bottom-up:
//!
//! * [`algebra`]: GF(2^s) arithmetic, matrices, linear codes (Reed-Solomon,
//!   random linear), systematization and exact distance.
//! * [`listrec`]: list tuples, the distance-to-lists metric, the brute-force
//!   list-recovery oracle and a seeded list channel.
//! * [`tensor`]: tensor products and powers, index flattening, row/column views.
//! * [`allr`]: approximate local list recovery of `C ⊗ C'` and of `C^{⊗t}`,
//!   with its parameter schedule.
//! * [`ldc`]: locally decodable pre-codes (identity and Hadamard).
//! * [`compose`]: true local list recovery from the tensor recoverer plus an
//!   LDC, and majority-vote globalization.
//! * [`concat`]: concatenated codes, random concatenation, entropy utilities
//!   and unique decoding via list decoding.
//!
//! Exhaustive routines are bounded by an enumeration guard (2^24 items by
//! default, `TLR_GUARD_MAX` overrides).

pub mod algebra;
pub mod allr;
pub mod compose;
pub mod concat;
pub mod error;
pub mod format;
pub mod guard;
pub mod ldc;
pub mod listrec;
pub mod oracle;
pub mod seed;
pub mod tensor;

pub use algebra::{Field, LinearCode, Matrix, Symbol};
pub use error::{Error, Result};
pub use listrec::{ListTuple, Radius};
