//! Locally decodable codes used as pre-codes for the composed recoverer.
//!
//! Decoding is split into a query plan (positions chosen from the caller's
//! randomness, no oracle access) and a decision from the values read there,
//! so a composed algorithm can fetch those values from somewhere else.

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, RngCore};

use crate::algebra::{Field, LinearCode, Symbol};
use crate::error::{Error, Result};
use crate::guard;
use crate::listrec::Radius;
use crate::oracle::WordOracle;

pub trait Ldc: fmt::Debug + Send + Sync {
    fn field(&self) -> &Field;

    fn message_len(&self) -> usize;

    fn block_len(&self) -> usize;

    fn query_bound(&self) -> usize;

    /// Fraction of corrupted positions the decoder is built for.
    fn radius(&self) -> Radius;

    fn encode(&self, msg: &[Symbol]) -> Result<Vec<Symbol>>;

    /// Positions the decoder for message coordinate `i` reads, in read order.
    fn plan(&self, i: usize, rng: &mut dyn RngCore) -> Result<Vec<usize>>;

    /// Decision from the values at `plan(i, ..)`.
    fn decode_from(&self, i: usize, values: &[Symbol]) -> Symbol;

    fn local_decode(&self, i: usize, w: &dyn WordOracle, rng: &mut dyn RngCore) -> Result<Symbol> {
        if w.len() != self.block_len() {
            return Err(Error::LengthMismatch {
                expected: self.block_len(),
                got: w.len(),
            });
        }
        let plan = self.plan(i, rng)?;
        let values: Vec<Symbol> = plan.iter().map(|&p| w.read(p)).collect();
        Ok(self.decode_from(i, &values))
    }

    /// Explicit generator of the (linear) encoding map.
    fn to_linear_code(&self) -> Result<LinearCode> {
        LinearCode::from_linear_map(
            self.field().clone(),
            self.message_len(),
            self.block_len(),
            |m| self.encode(m),
        )
    }
}

fn check_index(i: usize, k: usize) -> Result<()> {
    if i >= k {
        return Err(Error::OutOfRange { index: i, len: k });
    }
    Ok(())
}

fn check_message(f: &Field, msg: &[Symbol], k: usize) -> Result<()> {
    if msg.len() != k {
        return Err(Error::LengthMismatch {
            expected: k,
            got: msg.len(),
        });
    }
    for &v in msg {
        f.check(v as u32)?;
    }
    Ok(())
}

/// Rate-1 scheme: the codeword is the message and coordinate `i` is read
/// directly. Tolerates no corruption.
#[derive(Debug, Clone)]
pub struct IdentityLdc {
    field: Field,
    k: usize,
}

pub fn identity_ldc(field: &Field, kh: usize) -> Result<IdentityLdc> {
    if kh == 0 {
        return Err(Error::param("kh", "must be at least 1"));
    }
    Ok(IdentityLdc {
        field: field.clone(),
        k: kh,
    })
}

impl Ldc for IdentityLdc {
    fn field(&self) -> &Field {
        &self.field
    }

    fn message_len(&self) -> usize {
        self.k
    }

    fn block_len(&self) -> usize {
        self.k
    }

    fn query_bound(&self) -> usize {
        1
    }

    fn radius(&self) -> Radius {
        Radius::ZERO
    }

    fn encode(&self, msg: &[Symbol]) -> Result<Vec<Symbol>> {
        check_message(&self.field, msg, self.k)?;
        Ok(msg.to_vec())
    }

    fn plan(&self, i: usize, _rng: &mut dyn RngCore) -> Result<Vec<usize>> {
        check_index(i, self.k)?;
        Ok(vec![i])
    }

    fn decode_from(&self, _i: usize, values: &[Symbol]) -> Symbol {
        values[0]
    }
}

pub const DEFAULT_REPETITIONS: usize = 5;

/// Hadamard code over `F_q`: position `a` (digits of `a` in base q, most
/// significant first, read as a vector of `F_q^kh`) holds `<x, a>`.
/// Coordinate `i` is decoded from `w(a + e_i) - w(a)` for random `a`,
/// repeated and settled by plurality (ties to the smaller value).
#[derive(Debug, Clone)]
pub struct HadamardLdc {
    field: Field,
    k: usize,
    n: usize,
    repetitions: usize,
}

pub fn hadamard_ldc(field: &Field, kh: usize) -> Result<HadamardLdc> {
    HadamardLdc::new(field, kh, DEFAULT_REPETITIONS)
}

impl HadamardLdc {
    pub fn new(field: &Field, kh: usize, repetitions: usize) -> Result<Self> {
        if kh == 0 {
            return Err(Error::param("kh", "must be at least 1"));
        }
        if repetitions == 0 {
            return Err(Error::param("repetitions", "must be at least 1"));
        }
        let n = guard::saturating_pow(field.order() as u128, kh as u32);
        guard::check(n)?;
        Ok(HadamardLdc {
            field: field.clone(),
            k: kh,
            n: n as usize,
            repetitions,
        })
    }

    pub fn repetitions(&self) -> usize {
        self.repetitions
    }

    /// Place value of digit `i` in a position index.
    fn weight(&self, i: usize) -> usize {
        self.field.order().pow((self.k - 1 - i) as u32)
    }

    fn shift(&self, a: usize, i: usize) -> usize {
        let w = self.weight(i);
        let d = (a / w) % self.field.order();
        a - d * w + ((d ^ 1) * w)
    }
}

impl Ldc for HadamardLdc {
    fn field(&self) -> &Field {
        &self.field
    }

    fn message_len(&self) -> usize {
        self.k
    }

    fn block_len(&self) -> usize {
        self.n
    }

    fn query_bound(&self) -> usize {
        2 * self.repetitions
    }

    fn radius(&self) -> Radius {
        Radius::new(1, 6).expect("valid")
    }

    fn encode(&self, msg: &[Symbol]) -> Result<Vec<Symbol>> {
        check_message(&self.field, msg, self.k)?;
        let q = self.field.order();
        Ok((0..self.n)
            .map(|a| {
                let mut rest = a;
                let mut acc = 0;
                for j in (0..self.k).rev() {
                    acc ^= self.field.mul(msg[j], (rest % q) as Symbol);
                    rest /= q;
                }
                acc
            })
            .collect())
    }

    fn plan(&self, i: usize, rng: &mut dyn RngCore) -> Result<Vec<usize>> {
        check_index(i, self.k)?;
        Ok((0..self.repetitions)
            .flat_map(|_| {
                let a = rng.gen_range(0..self.n);
                [a, self.shift(a, i)]
            })
            .collect())
    }

    fn decode_from(&self, _i: usize, values: &[Symbol]) -> Symbol {
        let mut votes: HashMap<Symbol, usize> = HashMap::new();
        for pair in values.chunks_exact(2) {
            *votes.entry(pair[0] ^ pair[1]).or_default() += 1;
        }
        votes
            .into_iter()
            .max_by(|(va, ca), (vb, cb)| ca.cmp(cb).then(vb.cmp(va)))
            .map_or(0, |(v, _)| v)
    }
}
