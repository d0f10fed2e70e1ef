//! Tensor products and powers of linear codes.
//!
//! Coordinates of `C^{⊗t}` are multi-indices `(i_1, ..., i_t)` flattened
//! row-major: `flat = Σ i_j · n^{t-j}`. The first axis belongs to `C` and the
//! remaining ones to `C^{⊗(t-1)}`, so a `C^{⊗t}` codeword read as an
//! `n x n^{t-1}` matrix has columns in `C` and rows in `C^{⊗(t-1)}`.

use num_rational::Ratio;

use crate::algebra::{Field, LinearCode, Matrix, Symbol};
use crate::error::{Error, Result};
use crate::guard;

/// `C1 ⊗ C2` applied to a `k1 x k2` message matrix: `G1 · M · G2^T`.
pub fn tensor2_encode(c1: &LinearCode, c2: &LinearCode, m: &Matrix) -> Result<Matrix> {
    if c1.field() != c2.field() {
        return Err(Error::param("c2", "codes are over different fields"));
    }
    if m.rows() != c1.k() || m.cols() != c2.k() {
        return Err(Error::param(
            "message",
            format!(
                "expected {}x{} message matrix, got {}x{}",
                c1.k(),
                c2.k(),
                m.rows(),
                m.cols()
            ),
        ));
    }
    let f = c1.field();
    c1.generator()
        .mul(f, m)?
        .mul(f, &c2.generator().transpose())
}

/// Multiplies `data` (shape `dims`, row-major) by `g` along `axis`.
fn mode_product(f: &Field, g: &Matrix, data: &[Symbol], dims: &mut [usize], axis: usize) -> Vec<Symbol> {
    let outer: usize = dims[..axis].iter().product();
    let inner: usize = dims[axis + 1..].iter().product();
    let (n, k) = (g.rows(), g.cols());
    debug_assert_eq!(dims[axis], k);
    let mut out = vec![0; outer * n * inner];
    for o in 0..outer {
        for r in 0..n {
            let dst = &mut out[(o * n + r) * inner..(o * n + r + 1) * inner];
            for (c, &coef) in g.row(r).iter().enumerate() {
                if coef == 0 {
                    continue;
                }
                let src = &data[(o * k + c) * inner..(o * k + c + 1) * inner];
                for (d, &s) in dst.iter_mut().zip(src) {
                    *d ^= f.mul(coef, s);
                }
            }
        }
    }
    dims[axis] = n;
    out
}

/// `C^{⊗t}` for a base code `C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorCode {
    base: LinearCode,
    t: usize,
}

pub fn tensor_power(base: &LinearCode, t: usize) -> Result<TensorCode> {
    TensorCode::new(base.clone(), t)
}

impl TensorCode {
    pub fn new(base: LinearCode, t: usize) -> Result<Self> {
        if t == 0 {
            return Err(Error::param("t", "must be at least 1"));
        }
        guard::check(guard::saturating_pow(base.n() as u128, t as u32))?;
        Ok(TensorCode { base, t })
    }

    pub fn base(&self) -> &LinearCode {
        &self.base
    }

    pub fn field(&self) -> &Field {
        self.base.field()
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn n_total(&self) -> usize {
        self.base.n().pow(self.t as u32)
    }

    pub fn k_total(&self) -> usize {
        self.base.k().pow(self.t as u32)
    }

    pub fn rate(&self) -> Ratio<usize> {
        Ratio::new(self.k_total(), self.n_total())
    }

    pub fn is_systematic(&self) -> bool {
        self.base.is_systematic()
    }

    /// Encodes a row-major `[k]^t` message array into a row-major `[n]^t` word.
    pub fn encode(&self, msg: &[Symbol]) -> Result<Vec<Symbol>> {
        if msg.len() != self.k_total() {
            return Err(Error::LengthMismatch {
                expected: self.k_total(),
                got: msg.len(),
            });
        }
        let f = self.field();
        for &v in msg {
            f.check(v as u32)?;
        }
        let mut dims = vec![self.base.k(); self.t];
        let mut data = msg.to_vec();
        for axis in 0..self.t {
            data = mode_product(f, self.base.generator(), &data, &mut dims, axis);
        }
        Ok(data)
    }

    /// Flat coordinate holding message entry `p` (row-major over `[k]^t`).
    /// Only meaningful for a systematic base.
    pub fn message_position(&self, p: usize) -> Result<usize> {
        let multi = multi_of(p, self.base.k(), self.t)?;
        flat_of(&multi, self.base.n())
    }

    /// All message positions in message order.
    pub fn message_positions(&self) -> Vec<usize> {
        (0..self.k_total())
            .map(|p| self.message_position(p).expect("in range"))
            .collect()
    }

    /// True when every component of the multi-index of `flat` is below `k`.
    pub fn is_message_coordinate(&self, flat: usize) -> Result<bool> {
        let k = self.base.k();
        Ok(multi_of(flat, self.base.n(), self.t)?.iter().all(|&i| i < k))
    }

    /// Explicit `n^t x k^t` generator, built by encoding unit messages.
    pub fn to_linear_code(&self) -> Result<LinearCode> {
        let (n, k) = (self.n_total(), self.k_total());
        guard::check(n as u128 * k as u128)?;
        LinearCode::from_linear_map(self.field().clone(), k, n, |m| self.encode(m))
    }
}

/// Row-major flattening of a multi-index over `[n]^t`.
pub fn flat_of(multi: &[usize], n: usize) -> Result<usize> {
    let mut flat = 0usize;
    for &i in multi {
        if i >= n {
            return Err(Error::OutOfRange { index: i, len: n });
        }
        flat = flat * n + i;
    }
    Ok(flat)
}

pub fn multi_of(flat: usize, n: usize, t: usize) -> Result<Vec<usize>> {
    let total = n.checked_pow(t as u32).unwrap_or(usize::MAX);
    if flat >= total {
        return Err(Error::OutOfRange {
            index: flat,
            len: total,
        });
    }
    let mut out = vec![0; t];
    let mut rest = flat;
    for slot in out.iter_mut().rev() {
        *slot = rest % n;
        rest /= n;
    }
    Ok(out)
}
