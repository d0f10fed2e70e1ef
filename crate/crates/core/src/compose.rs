//! Local list recovery for `C^{⊗t} ∘ LDC` and its globalization.
//!
//! The LDC codeword is placed on the message coordinates of a systematic
//! `C^{⊗t}` (LDC position `p` goes to the tensor coordinate whose multi-index
//! is `p` written in base `k`), trailing message coordinates padded with
//! zeros. To decode message symbol `i`, the LDC decoder's query plan is
//! answered by the tensor decoders at the bridged coordinates.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_rational::Ratio;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::algebra::{LinearCode, Symbol};
use crate::allr::{allr_tensor, ApproxLocal, Overrides, TensorAllr};
use crate::error::{Error, Result};
use crate::ldc::Ldc;
use crate::listrec::{violations, ListTuple, Radius};
use crate::oracle::ListOracle;
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ComposeParams {
    /// Accuracy of the tensor recoverer; defaults to `α̂ · ρ^t`.
    pub eps_tilde: Option<f64>,
    pub overrides: Overrides,
}

/// Composed recoverer description; [`ComposedLlr::preprocess`] yields the
/// randomized local algorithms.
#[derive(Debug, Clone)]
pub struct ComposedLlr {
    tensor: TensorAllr,
    ldc: Arc<dyn Ldc>,
    bridge: Arc<Vec<usize>>,
    code: LinearCode,
}

pub fn compose_llr(
    base: &LinearCode,
    t: usize,
    alpha: Radius,
    list_bound: usize,
    ldc: Arc<dyn Ldc>,
    params: ComposeParams,
) -> Result<ComposedLlr> {
    if !base.is_systematic() {
        return Err(Error::NotSystematic);
    }
    if ldc.field() != base.field() {
        return Err(Error::param("ldc", "LDC and base code use different fields"));
    }
    let k_total = base.k().pow(t as u32);
    if ldc.block_len() > k_total {
        return Err(Error::param(
            "ldc",
            format!(
                "LDC block length {} exceeds the {} tensor message coordinates",
                ldc.block_len(),
                k_total
            ),
        ));
    }
    let eps_tilde = match params.eps_tilde {
        Some(e) => e,
        None => {
            let rho = base.k() as f64 / base.n() as f64;
            let e = ldc.radius().to_f64() * rho.powi(t as i32);
            if e <= 0.0 {
                return Err(Error::param(
                    "eps_tilde",
                    "the default α̂·ρ^t is zero for this LDC; set it explicitly",
                ));
            }
            e
        }
    };
    let tensor = allr_tensor(base, t, alpha, list_bound, eps_tilde, params.overrides)?;
    let tc = tensor.code();
    let bridge: Vec<usize> = (0..ldc.block_len())
        .map(|p| tc.message_position(p))
        .collect::<Result<_>>()?;
    let code = LinearCode::from_linear_map(
        base.field().clone(),
        ldc.message_len(),
        tc.n_total(),
        |x| {
            let mut padded = ldc.encode(x)?;
            padded.resize(k_total, 0);
            tc.encode(&padded)
        },
    )?;
    Ok(ComposedLlr {
        tensor,
        ldc,
        bridge: Arc::new(bridge),
        code,
    })
}

impl ComposedLlr {
    pub fn tensor(&self) -> &TensorAllr {
        &self.tensor
    }

    pub fn ldc(&self) -> &Arc<dyn Ldc> {
        &self.ldc
    }

    /// The composite code `x ↦ C^{⊗t}(pad(LDC(x)))`.
    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    /// Tensor coordinate holding LDC position `p`.
    pub fn bridge(&self) -> &[usize] {
        &self.bridge
    }

    pub fn alpha_tilde(&self) -> Result<Radius> {
        self.tensor.alpha_tilde()
    }

    pub fn query_bound(&self) -> usize {
        self.ldc.query_bound() * self.tensor.preprocessor().query_bound()
    }

    pub fn list_size(&self) -> u64 {
        self.tensor.preprocessor().list_size()
    }

    pub fn encode(&self, msg: &[Symbol]) -> Result<Vec<Symbol>> {
        self.code.encode(msg)
    }

    pub fn preprocess(&self, seed: u64) -> Result<ComposedInstance> {
        Ok(ComposedInstance {
            inner: self.tensor.preprocess(seed)?,
            ldc: self.ldc.clone(),
            bridge: self.bridge.clone(),
        })
    }
}

/// Output of one composed decoding call.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalDecoded {
    pub value: Symbol,
    pub queries: usize,
}

/// The `L` randomized local algorithms from one preprocessing run.
#[derive(Debug, Clone)]
pub struct ComposedInstance {
    inner: Arc<dyn ApproxLocal>,
    ldc: Arc<dyn Ldc>,
    bridge: Arc<Vec<usize>>,
}

impl ComposedInstance {
    pub fn list_size(&self) -> u64 {
        self.inner.list_size()
    }

    pub fn message_len(&self) -> usize {
        self.ldc.message_len()
    }

    pub fn query_bound(&self) -> usize {
        self.ldc.query_bound() * self.inner.query_bound()
    }

    pub fn inner(&self) -> &Arc<dyn ApproxLocal> {
        &self.inner
    }

    /// Algorithm `j` on message coordinate `i`.
    pub fn decode(
        &self,
        j: u64,
        i: usize,
        s: &dyn ListOracle,
        rng: &mut dyn RngCore,
    ) -> Result<LocalDecoded> {
        let plan = self.ldc.plan(i, rng)?;
        let mut queries = 0;
        let values: Vec<Symbol> = plan
            .iter()
            .map(|&p| {
                let d = self.inner.decode(j, self.bridge[p], s);
                queries += d.queries();
                d.value
            })
            .collect();
        Ok(LocalDecoded {
            value: self.ldc.decode_from(i, &values),
            queries,
        })
    }

    /// Same as [`ComposedInstance::decode`] with the tensor decoder's outputs
    /// already tabulated in `inner_word`.
    pub fn decode_from_table(&self, i: usize, inner_word: &[Symbol], rng: &mut dyn RngCore) -> Result<Symbol> {
        let plan = self.ldc.plan(i, rng)?;
        let values: Vec<Symbol> = plan.iter().map(|&p| inner_word[self.bridge[p]]).collect();
        Ok(self.ldc.decode_from(i, &values))
    }

    /// Visits `(j, inner_word)` for every algorithm, where `inner_word` holds
    /// tensor decoder `j`'s output at every coordinate.
    pub fn for_each_table(
        &self,
        s: &dyn ListOracle,
        visit: &mut dyn FnMut(u64, &[Symbol]) -> bool,
    ) -> Result<()> {
        self.inner.for_each_output(s, &mut |j, w, _| visit(j, w))
    }
}

/// Plurality of `reps` values, ties to the smallest.
fn plurality(values: &mut [Symbol]) -> Symbol {
    values.sort_unstable();
    let mut best = (0, values[0]);
    let mut run = 0;
    for (idx, &v) in values.iter().enumerate() {
        run = if idx > 0 && values[idx - 1] == v { run + 1 } else { 1 };
        if run > best.0 {
            best = (run, v);
        }
    }
    best.1
}

/// `(reps_list, reps_coord)` defaults: `ceil(log2 L)` (at least 1) and
/// `ceil(log2(n · L))` rounded up to odd.
pub fn default_reps(list_size: u64, block_len: usize) -> (usize, usize) {
    let lg = |x: f64| x.log2().ceil().max(1.0) as usize;
    let reps_list = lg(list_size as f64);
    let coord = lg(block_len as f64 * list_size as f64);
    (reps_list, coord | 1)
}

/// Runs preprocessing `reps_list` times and decodes every coordinate of every
/// algorithm by a `reps_coord`-fold plurality; returns the distinct messages
/// in canonical order.
pub fn globalize(
    llr: &ComposedLlr,
    s: &ListTuple,
    reps_list: usize,
    reps_coord: usize,
    seed: u64,
) -> Result<Vec<Vec<Symbol>>> {
    if reps_list == 0 || reps_coord == 0 {
        return Err(Error::param("reps", "repetition counts must be at least 1"));
    }
    if reps_coord.is_multiple_of(2) {
        return Err(Error::param("reps_coord", "must be odd"));
    }
    if s.n() != llr.code().n() {
        return Err(Error::LengthMismatch {
            expected: llr.code().n(),
            got: s.n(),
        });
    }
    let oracle = crate::oracle::QueryOracle::new(s);
    let mut out = BTreeSet::new();
    for rep in 0..reps_list {
        let inst = llr.preprocess(seed::derive(seed, &[seed::stage::PREPROCESS, rep as u64]))?;
        let mut failure = None;
        inst.for_each_table(&oracle, &mut |j, word| {
            let mut msg = Vec::with_capacity(inst.message_len());
            for i in 0..inst.message_len() {
                let mut rng = seed::rng(seed, &[seed::stage::DECODE, rep as u64, j, i as u64]);
                let votes: Result<Vec<Symbol>> = (0..reps_coord)
                    .map(|_| inst.decode_from_table(i, word, &mut rng))
                    .collect();
                match votes {
                    Ok(mut v) => msg.push(plurality(&mut v)),
                    Err(e) => {
                        failure = Some(e);
                        return false;
                    }
                }
            }
            out.insert(msg);
            true
        })?;
        if let Some(e) = failure {
            return Err(e);
        }
    }
    Ok(out.into_iter().collect())
}

/// Keeps the messages whose encodings are within `alpha` of `s`.
pub fn filter_by_radius(
    messages: &[Vec<Symbol>],
    code: &LinearCode,
    s: &ListTuple,
    alpha: Radius,
) -> Result<Vec<Vec<Symbol>>> {
    let mut kept = Vec::new();
    for m in messages {
        let w = code.encode(m)?;
        if w.len() != s.n() {
            return Err(Error::LengthMismatch {
                expected: s.n(),
                got: w.len(),
            });
        }
        if alpha.admits(violations(&w, s.sets()), w.len()) {
            kept.push(m.clone());
        }
    }
    Ok(kept)
}

/// Per-coordinate success frequencies of the best algorithm in `inst` for
/// recovering `msg`: for each `j`, every coordinate is decoded `trials` times
/// with fresh randomness, and the `j` maximizing the worst coordinate wins
/// (smallest `j` on ties).
pub fn best_success_frequencies(
    inst: &ComposedInstance,
    s: &ListTuple,
    msg: &[Symbol],
    trials: usize,
    seed: u64,
) -> Result<(u64, Vec<Ratio<usize>>)> {
    if msg.len() != inst.message_len() {
        return Err(Error::LengthMismatch {
            expected: inst.message_len(),
            got: msg.len(),
        });
    }
    if trials == 0 {
        return Err(Error::param("trials", "must be at least 1"));
    }
    let oracle = crate::oracle::QueryOracle::new(s);
    let mut best: Option<(u64, Vec<usize>)> = None;
    let mut failure = None;
    inst.for_each_table(&oracle, &mut |j, word| {
        let mut wins = vec![0; msg.len()];
        for (i, w) in wins.iter_mut().enumerate() {
            let mut rng = seed::rng(seed, &[seed::stage::DECODE, j, i as u64]);
            for _ in 0..trials {
                match inst.decode_from_table(i, word, &mut rng) {
                    Ok(v) => *w += (v == msg[i]) as usize,
                    Err(e) => {
                        failure = Some(e);
                        return false;
                    }
                }
            }
        }
        let worst = *wins.iter().min().expect("message is nonempty");
        if best.as_ref().is_none_or(|(_, b)| worst > *b.iter().min().unwrap()) {
            best = Some((j, wins));
        }
        worst < trials
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    let (j, wins) = best.expect("at least one algorithm");
    Ok((j, wins.into_iter().map(|w| Ratio::new(w, trials)).collect()))
}
