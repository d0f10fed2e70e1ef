//! Concatenated codes: an outer code over GF(2^s) whose symbols are expanded
//! to s bits in the coefficient basis and re-encoded by binary inner codes.

pub mod entropy;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::algebra::{random_linear_map, Field, LinearCode, Symbol};
use crate::error::{Error, Result};
use crate::listrec::{brute_force_list_recover, violations, GlobalRecoverer, ListTuple, Radius};
use crate::seed;

pub use entropy::{gv_feasibility, h2, h2_inv, hq, theta, theta_inv, Feasibility};

/// Identification of GF(2^s) with GF(2)^s. Only the coefficient basis
/// `{1, x, ..., x^(s-1)}` is supported.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    #[default]
    Coefficient,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcatCode {
    outer: LinearCode,
    inners: Vec<LinearCode>,
    basis: Basis,
}

impl ConcatCode {
    /// Every inner code must be binary with message length `s` and a common
    /// block length; there is one inner per outer coordinate.
    pub fn new(outer: LinearCode, inners: Vec<LinearCode>) -> Result<Self> {
        if inners.len() != outer.n() {
            return Err(Error::LengthMismatch {
                expected: outer.n(),
                got: inners.len(),
            });
        }
        let s = outer.field().exponent() as usize;
        let n_in = inners[0].n();
        for (i, inner) in inners.iter().enumerate() {
            if inner.field().order() != 2 {
                return Err(Error::param("inners", format!("inner {i} is not binary")));
            }
            if inner.k() != s {
                return Err(Error::param(
                    "inners",
                    format!("inner {i} has message length {}, expected s={s}", inner.k()),
                ));
            }
            if inner.n() != n_in {
                return Err(Error::param(
                    "inners",
                    format!("inner {i} has length {}, expected {n_in}", inner.n()),
                ));
            }
        }
        Ok(ConcatCode {
            outer,
            inners,
            basis: Basis::Coefficient,
        })
    }

    pub fn outer(&self) -> &LinearCode {
        &self.outer
    }

    pub fn inners(&self) -> &[LinearCode] {
        &self.inners
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn s(&self) -> usize {
        self.outer.field().exponent() as usize
    }

    pub fn n_out(&self) -> usize {
        self.outer.n()
    }

    pub fn n_in(&self) -> usize {
        self.inners[0].n()
    }

    /// Binary block length `n_out * n_in`.
    pub fn n(&self) -> usize {
        self.n_out() * self.n_in()
    }

    /// Binary message length `k_out * s`.
    pub fn k(&self) -> usize {
        self.outer.k() * self.s()
    }

    pub fn rate(&self) -> Ratio<usize> {
        Ratio::new(self.k(), self.n())
    }

    pub fn inner_field(&self) -> &Field {
        self.inners[0].field()
    }

    /// Coordinate range of block `i` in the binary word.
    pub fn block(&self, i: usize) -> std::ops::Range<usize> {
        i * self.n_in()..(i + 1) * self.n_in()
    }

    /// Encodes an outer message.
    pub fn encode(&self, msg: &[Symbol]) -> Result<Vec<Symbol>> {
        let outer = self.outer.encode(msg)?;
        let mut word = Vec::with_capacity(self.n());
        for (sym, inner) in outer.iter().zip(&self.inners) {
            word.extend(inner.encode(&self.outer.field().to_bits(*sym))?);
        }
        Ok(word)
    }

    /// Encodes a binary message of length `k`, read as `k_out` groups of `s`
    /// coefficient bits.
    pub fn encode_bits(&self, bits: &[Symbol]) -> Result<Vec<Symbol>> {
        self.encode(&self.message_from_bits(bits)?)
    }

    pub fn message_bits(&self, msg: &[Symbol]) -> Vec<Symbol> {
        msg.iter().flat_map(|&m| self.outer.field().to_bits(m)).collect()
    }

    pub fn message_from_bits(&self, bits: &[Symbol]) -> Result<Vec<Symbol>> {
        if bits.len() != self.k() {
            return Err(Error::LengthMismatch {
                expected: self.k(),
                got: bits.len(),
            });
        }
        bits.chunks(self.s())
            .map(|c| self.outer.field().from_bits(c))
            .collect()
    }

    /// The concatenation as a binary linear code on `k` message bits. It may
    /// be non-injective when some inner map is.
    pub fn to_linear_code(&self) -> Result<LinearCode> {
        LinearCode::from_linear_map_unrestricted(self.inner_field().clone(), self.k(), self.n(), |b| {
            self.encode_bits(b)
        })
    }
}

pub fn concat_encode(cc: &ConcatCode, msg: &[Symbol]) -> Result<Vec<Symbol>> {
    cc.encode(msg)
}

/// Concatenates `outer` with independent uniformly random binary inner maps
/// `GF(2)^s -> GF(2)^(s / rho_in)`, one per outer coordinate.
pub fn thommesen_sample(outer: &LinearCode, rho_in: Ratio<usize>, seed: u64) -> Result<ConcatCode> {
    let s = outer.field().exponent() as usize;
    if *rho_in.numer() == 0 || rho_in > Ratio::from_integer(1) {
        return Err(Error::param("rho_in", format!("{rho_in} is not in (0, 1]")));
    }
    let n_in = Ratio::from_integer(s) / rho_in;
    if !n_in.is_integer() {
        return Err(Error::param(
            "rho_in",
            format!("inner length s / rho_in = {n_in} is not an integer"),
        ));
    }
    let gf2 = Field::canonical(1)?;
    let inners = (0..outer.n())
        .map(|i| random_linear_map(&gf2, n_in.to_integer(), s, seed::derive(seed, &[seed::stage::CODE, i as u64])))
        .collect::<Result<Vec<_>>>()?;
    ConcatCode::new(outer.clone(), inners)
}

/// List recovery of the outer code, pluggable so the concatenation can sit on
/// top of any recoverer.
pub trait OuterRecover {
    /// Every outer message within `alpha` of `s` (possibly more).
    fn recover_outer(&self, s: &ListTuple, alpha: Radius) -> Result<Vec<Vec<Symbol>>>;
}

impl OuterRecover for LinearCode {
    fn recover_outer(&self, s: &ListTuple, alpha: Radius) -> Result<Vec<Vec<Symbol>>> {
        brute_force_list_recover(self, s, alpha)
    }
}

impl OuterRecover for GlobalRecoverer {
    fn recover_outer(&self, s: &ListTuple, alpha: Radius) -> Result<Vec<Vec<Symbol>>> {
        let mut out: Vec<_> = self
            .recover_at(s.sets(), alpha)
            .into_iter()
            .map(|i| self.message(i).to_vec())
            .collect();
        out.sort_unstable();
        Ok(out)
    }
}

/// Radii for [`concat_list_recover`]. Messages within
/// `(alpha_out - eps) * alpha_in` of the input are guaranteed to be returned.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcatRadii {
    pub alpha_in: Radius,
    pub alpha_out: Radius,
    pub eps: Radius,
    /// Largest inner list the outer recoverer accepts per coordinate.
    pub ell_out: usize,
}

impl ConcatRadii {
    pub fn guaranteed(&self) -> Radius {
        self.alpha_out.saturating_sub(&self.eps).mul(&self.alpha_in)
    }
}

/// Inner list recovery of every block: the outer symbols whose inner
/// encodings are within `alpha_in` of the block's lists.
pub fn inner_lists(cc: &ConcatCode, s_fine: &ListTuple, alpha_in: Radius, ell_out: usize) -> Result<ListTuple> {
    if s_fine.n() != cc.n() {
        return Err(Error::LengthMismatch {
            expected: cc.n(),
            got: s_fine.n(),
        });
    }
    let field = cc.outer().field();
    let sets = cc
        .inners()
        .iter()
        .enumerate()
        .map(|(i, inner)| {
            let block = ListTuple::new_allow_empty(s_fine.ell(), s_fine.sets()[cc.block(i)].to_vec())?;
            let list = brute_force_list_recover(inner, &block, alpha_in)?
                .iter()
                .map(|bits| field.from_bits(bits))
                .collect::<Result<Vec<_>>>()?;
            if list.len() > ell_out {
                return Err(Error::InnerListOverflow {
                    block: i,
                    size: list.len(),
                    limit: ell_out,
                });
            }
            Ok(list)
        })
        .collect::<Result<Vec<_>>>()?;
    ListTuple::new_allow_empty(ell_out, sets)
}

/// Inner recovery per block at `alpha_in`, then outer recovery at `alpha_out`.
/// Returns sorted outer messages.
pub fn concat_list_recover(
    cc: &ConcatCode,
    s_fine: &ListTuple,
    radii: &ConcatRadii,
    outer: &dyn OuterRecover,
) -> Result<Vec<Vec<Symbol>>> {
    let coarse = inner_lists(cc, s_fine, radii.alpha_in, radii.ell_out)?;
    let mut out = outer.recover_outer(&coarse, radii.alpha_out)?;
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Number of blocks on which `word` violates more than an `alpha_in` fraction
/// of the lists. When `word` is within `(alpha_out - eps) * alpha_in` overall,
/// averaging caps this at `(alpha_out - eps) * n_out`.
pub fn bad_blocks(cc: &ConcatCode, word: &[Symbol], s_fine: &ListTuple, alpha_in: Radius) -> usize {
    (0..cc.n_out())
        .filter(|&i| {
            let r = cc.block(i);
            !alpha_in.admits(violations(&word[r.clone()], &s_fine.sets()[r]), cc.n_in())
        })
        .count()
}

/// Radii for [`gv_unique_decode`]'s list-decoding stage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GvDecodeParams {
    pub alpha_in: Radius,
    pub alpha_out: Radius,
    pub eps: Radius,
}

impl Default for GvDecodeParams {
    fn default() -> Self {
        let half = Radius::new(1, 2).expect("valid");
        GvDecodeParams {
            alpha_in: half,
            alpha_out: half,
            eps: Radius::ZERO,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GvDecoded {
    pub message: Vec<Symbol>,
    pub distance: usize,
    /// Size of the list the nearest candidate was picked from.
    pub candidates: usize,
}

/// Unique decoding up to half the distance `d`: list decode `received` with
/// the outer code brute-forced, re-encode the candidates and return the one
/// within `(d - 1) / 2` errors. `None` if there is no such candidate.
pub fn gv_unique_decode(
    cc: &ConcatCode,
    received: &[Symbol],
    d: usize,
    params: &GvDecodeParams,
) -> Result<Option<GvDecoded>> {
    if received.len() != cc.n() {
        return Err(Error::LengthMismatch {
            expected: cc.n(),
            got: received.len(),
        });
    }
    for &v in received {
        cc.inner_field().check(v as u32)?;
    }
    let radii = ConcatRadii {
        alpha_in: params.alpha_in,
        alpha_out: params.alpha_out,
        eps: params.eps,
        ell_out: cc.outer().field().order(),
    };
    let list = concat_list_recover(cc, &ListTuple::singletons(received), &radii, cc.outer())?;
    let budget = d.saturating_sub(1) / 2;
    let mut best: Option<GvDecoded> = None;
    for msg in &list {
        let cw = cc.encode(msg)?;
        let dist = cw.iter().zip(received).filter(|(a, b)| a != b).count();
        if dist > budget {
            continue;
        }
        if let Some(b) = &best {
            // two codewords within (d-1)/2 of one word would be closer than d
            assert!(b.distance != dist || cc.encode(&b.message)? == cw, "ambiguous decoding within (d-1)/2");
            if b.distance <= dist {
                continue;
            }
        }
        best = Some(GvDecoded {
            message: msg.clone(),
            distance: dist,
            candidates: list.len(),
        });
    }
    Ok(best)
}
