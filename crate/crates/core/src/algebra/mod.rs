//! Finite fields GF(2^s), matrices over them, and linear codes.

mod code;
mod field;
mod matrix;

pub use code::{
    identity_code, random_linear_code, random_linear_map, repetition_code, rs_code, LinearCode,
};
pub use field::{field_make, gf_inv, gf_mul, Field, Symbol, CANONICAL_POLYS};
pub use matrix::Matrix;
