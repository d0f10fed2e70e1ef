//! Approximate local list recovery of tensor codes.
//!
//! A preprocessing run turns a [`Preprocess`] description into an
//! [`ApproxLocal`] instance: a list of deterministic local decoders indexed by
//! `j`. For `C^{⊗t}` the instance is built recursively: level 1 is the global
//! recoverer for `C`, and level `i` wraps [`allr_pair_preprocess`] around level
//! `i - 1` with `C` on the column axis.

mod pair;
mod schedule;

use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;
use rand::Rng;
use serde::{Deserialize, Serialize};

pub use pair::{allr_pair_preprocess, PairRecoverer};
pub use schedule::{schedule, LevelParams, Overrides, Schedule};

use crate::algebra::{LinearCode, Symbol};
use crate::error::{Error, Result};
use crate::guard;
use crate::listrec::{GlobalRecoverer, ListTuple, Radius};
use crate::oracle::{ListOracle, QueryOracle};
use crate::seed;
use crate::tensor::TensorCode;

/// Output of one decoder invocation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decoded {
    pub value: Symbol,
    /// Set when the decoder had nothing to return and answered zero.
    pub flagged: bool,
    pub row_queries: usize,
    pub column_queries: usize,
}

impl Decoded {
    pub fn queries(&self) -> usize {
        self.row_queries + self.column_queries
    }
}

/// Receives `(j, outputs, flags)` for each decoder; return false to stop.
pub type OutputVisitor<'a> = &'a mut dyn FnMut(u64, &[Symbol], &[bool]) -> bool;

/// A preprocessed list of deterministic local decoders.
pub trait ApproxLocal: fmt::Debug + Send + Sync {
    fn block_len(&self) -> usize;

    /// Number of decoders.
    fn list_size(&self) -> u64;

    fn query_bound(&self) -> usize;

    /// Decoder `j` evaluated at coordinate `pos`.
    fn decode(&self, j: u64, pos: usize, s: &dyn ListOracle) -> Decoded;

    /// Every decoder's output at every coordinate, in decoder order. Must
    /// agree with [`ApproxLocal::decode`].
    fn for_each_output(&self, s: &dyn ListOracle, visit: OutputVisitor<'_>) -> Result<()>;

    /// All outputs materialized, one word per decoder.
    fn tabulate(&self, s: &dyn ListOracle) -> Result<Vec<Vec<Symbol>>> {
        guard::check(self.list_size() as u128 * self.block_len() as u128)?;
        let mut out = Vec::with_capacity(self.list_size() as usize);
        self.for_each_output(s, &mut |_, w, _| {
            out.push(w.to_vec());
            true
        })?;
        Ok(out)
    }
}

/// Something that can be preprocessed into an [`ApproxLocal`] instance.
pub trait Preprocess: fmt::Debug + Send + Sync {
    fn block_len(&self) -> usize;

    fn list_size(&self) -> u64;

    fn query_bound(&self) -> usize;

    fn preprocess(&self, seed: u64) -> Result<Arc<dyn ApproxLocal>>;
}

/// Level 1: each decoder reads the whole word, recovers globally, and answers
/// from the `j`-th recovered codeword in message order. Past the end of the
/// list it answers a flagged zero.
#[derive(Debug, Clone)]
pub struct BaseRecoverer(pub Arc<GlobalRecoverer>);

impl ApproxLocal for BaseRecoverer {
    fn block_len(&self) -> usize {
        self.0.n()
    }

    fn list_size(&self) -> u64 {
        self.0.list_bound() as u64
    }

    fn query_bound(&self) -> usize {
        self.0.n()
    }

    fn decode(&self, j: u64, pos: usize, s: &dyn ListOracle) -> Decoded {
        let sets: Vec<&[Symbol]> = (0..self.0.n()).map(|i| s.query(i)).collect();
        let list = self.0.recover(&sets);
        let (value, flagged) = match list.get(j as usize) {
            Some(&c) => (self.0.codeword(c)[pos], false),
            None => (0, true),
        };
        Decoded {
            value,
            flagged,
            row_queries: 0,
            column_queries: sets.len(),
        }
    }

    fn for_each_output(&self, s: &dyn ListOracle, visit: OutputVisitor<'_>) -> Result<()> {
        let n = self.0.n();
        let sets: Vec<&[Symbol]> = (0..n).map(|i| s.query(i)).collect();
        let list = self.0.recover(&sets);
        let (zero, raised) = (vec![0; n], vec![true; n]);
        let clear = vec![false; n];
        for j in 0..ApproxLocal::list_size(self) {
            let keep = match list.get(j as usize) {
                Some(&c) => visit(j, self.0.codeword(c), &clear),
                None => visit(j, &zero, &raised),
            };
            if !keep {
                break;
            }
        }
        Ok(())
    }
}

impl Preprocess for BaseRecoverer {
    fn block_len(&self) -> usize {
        self.0.n()
    }

    fn list_size(&self) -> u64 {
        self.0.list_bound() as u64
    }

    fn query_bound(&self) -> usize {
        self.0.n()
    }

    fn preprocess(&self, _seed: u64) -> Result<Arc<dyn ApproxLocal>> {
        Ok(Arc::new(self.clone()))
    }
}

/// Level `i > 1`: `C` on the columns, the previous level on the rows.
#[derive(Debug, Clone)]
pub struct LevelPreprocess {
    column: Arc<GlobalRecoverer>,
    row: Arc<dyn Preprocess>,
    m: usize,
}

impl LevelPreprocess {
    pub fn new(column: Arc<GlobalRecoverer>, row: Arc<dyn Preprocess>, m: usize) -> Self {
        LevelPreprocess { column, row, m }
    }
}

impl Preprocess for LevelPreprocess {
    fn block_len(&self) -> usize {
        self.column.n() * self.row.block_len()
    }

    fn list_size(&self) -> u64 {
        guard::saturating_pow(self.row.list_size() as u128, self.m as u32).min(u64::MAX as u128)
            as u64
    }

    fn query_bound(&self) -> usize {
        self.m * self.row.query_bound() + self.column.n()
    }

    fn preprocess(&self, seed: u64) -> Result<Arc<dyn ApproxLocal>> {
        Ok(Arc::new(allr_pair_preprocess(
            self.column.clone(),
            self.row.as_ref(),
            self.m,
            seed,
        )?))
    }
}

/// Recoverer description for `C^{⊗t}` together with its schedule.
#[derive(Debug, Clone)]
pub struct TensorAllr {
    code: TensorCode,
    schedule: Schedule,
    top: Arc<dyn Preprocess>,
}

/// Builds the recursion for `C^{⊗t}` where `C` is `(alpha, ell, list_bound)`
/// globally list recoverable by brute force.
pub fn allr_tensor(
    base: &LinearCode,
    t: usize,
    alpha: Radius,
    list_bound: usize,
    eps_tilde: f64,
    overrides: Overrides,
) -> Result<TensorAllr> {
    let code = TensorCode::new(base.clone(), t)?;
    let rd = base.relative_distance()?;
    let delta = *rd.numer() as f64 / *rd.denom() as f64;
    let schedule = schedule(
        t,
        delta,
        alpha.to_f64(),
        list_bound,
        eps_tilde,
        base.n(),
        overrides,
    )?;
    let global = Arc::new(GlobalRecoverer::new(base.clone(), alpha, list_bound)?);
    let mut top: Arc<dyn Preprocess> = Arc::new(BaseRecoverer(global.clone()));
    for level in &schedule.levels[1..] {
        top = Arc::new(LevelPreprocess::new(global.clone(), top, level.m));
    }
    Ok(TensorAllr {
        code,
        schedule,
        top,
    })
}

impl TensorAllr {
    pub fn code(&self) -> &TensorCode {
        &self.code
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    /// Radius the recursion is built for, as an exact fraction.
    pub fn alpha_tilde(&self) -> Result<Radius> {
        Radius::from_f64(self.schedule.alpha_tilde())
    }

    pub fn eps_tilde(&self) -> f64 {
        self.schedule.eps_tilde
    }

    pub fn preprocessor(&self) -> &Arc<dyn Preprocess> {
        &self.top
    }

    pub fn preprocess(&self, seed: u64) -> Result<Arc<dyn ApproxLocal>> {
        self.top.preprocess(seed)
    }
}

/// Fraction of coordinates where decoder `j` outputs the planted symbol.
/// Flagged outputs count as disagreements.
pub fn empirical_agreement(
    rec: &dyn ApproxLocal,
    j: u64,
    planted: &[Symbol],
    s: &ListTuple,
) -> Result<Ratio<usize>> {
    check_lengths(rec, planted, s)?;
    let agree = (0..planted.len())
        .filter(|&pos| {
            let d = rec.decode(j, pos, &QueryOracle::new(s));
            !d.flagged && d.value == planted[pos]
        })
        .count();
    Ok(Ratio::new(agree, planted.len()))
}

fn check_lengths(rec: &dyn ApproxLocal, planted: &[Symbol], s: &ListTuple) -> Result<()> {
    for got in [planted.len(), s.n()] {
        if got != rec.block_len() {
            return Err(Error::LengthMismatch {
                expected: rec.block_len(),
                got,
            });
        }
    }
    Ok(())
}

fn agreement(word: &[Symbol], flags: &[bool], planted: &[Symbol]) -> usize {
    word.iter()
        .zip(flags)
        .zip(planted)
        .filter(|((w, f), p)| !**f && w == p)
        .count()
}

/// Best decoder found by a sweep over the output list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BestAdvice {
    pub j: u64,
    pub agreement: Ratio<usize>,
    pub decoders_scanned: u64,
}

/// Maximum agreement over every decoder, scanning in decoder order and
/// stopping at the first perfect one.
pub fn best_advice(rec: &dyn ApproxLocal, planted: &[Symbol], s: &ListTuple) -> Result<BestAdvice> {
    check_lengths(rec, planted, s)?;
    let n = planted.len();
    let mut best = (0u64, 0usize);
    let mut scanned = 0;
    rec.for_each_output(&QueryOracle::new(s), &mut |j, w, flags| {
        scanned += 1;
        let a = agreement(w, flags, planted);
        if a > best.1 || scanned == 1 {
            best = (j, a);
        }
        a < n
    })?;
    Ok(BestAdvice {
        j: best.0,
        agreement: Ratio::new(best.1, n),
        decoders_scanned: scanned,
    })
}

/// Profiling variant: evaluates `samples` random decoders by direct
/// invocation instead of sweeping the whole list.
pub fn sampled_best_advice(
    rec: &dyn ApproxLocal,
    planted: &[Symbol],
    s: &ListTuple,
    samples: usize,
    seed: u64,
) -> Result<BestAdvice> {
    check_lengths(rec, planted, s)?;
    let mut rng = seed::rng(seed, &[seed::stage::DECODE]);
    let mut best: Option<(u64, Ratio<usize>)> = None;
    for _ in 0..samples {
        let j = rng.gen_range(0..rec.list_size());
        let a = empirical_agreement(rec, j, planted, s)?;
        if best.is_none_or(|(_, b)| a > b) {
            best = Some((j, a));
        }
    }
    let (j, agreement) = best.unwrap_or((0, Ratio::from_integer(0)));
    Ok(BestAdvice {
        j,
        agreement,
        decoders_scanned: samples as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rs_code, Field};
    use crate::listrec::{corrupt_to_lists, ChannelMode};
    use crate::tensor::tensor_power;

    fn gf4() -> Field {
        Field::new(2, 0b111).unwrap()
    }

    fn r(a: u64, b: u64) -> Radius {
        Radius::new(a, b).unwrap()
    }

    fn global(alpha: Radius, l: usize) -> Arc<GlobalRecoverer> {
        Arc::new(GlobalRecoverer::new(rs_code(&gf4(), 4, 2).unwrap(), alpha, l).unwrap())
    }

    fn planted(t: usize, seed: u64) -> (TensorCode, Vec<Symbol>) {
        let tc = tensor_power(&rs_code(&gf4(), 4, 2).unwrap(), t).unwrap();
        let mut rng = seed::rng(seed, &[seed::stage::MESSAGE]);
        let msg: Vec<Symbol> = (0..tc.k_total()).map(|_| rng.gen_range(0..4)).collect();
        let w = tc.encode(&msg).unwrap();
        (tc, w)
    }

    #[test]
    fn base_decoders_are_constant_codewords() {
        let base = BaseRecoverer(global(r(1, 4), 8));
        let (_, w) = planted(1, 1);
        let s = ListTuple::singletons(&w);
        let o = QueryOracle::new(&s);
        let d = base.decode(0, 2, &o);
        assert_eq!((d.value, d.flagged, d.queries()), (w[2], false, 4));
        assert_eq!(o.queries(), 4);
        assert!(base.decode(1, 0, &o).flagged);
    }

    #[test]
    fn pair_list_size_is_row_list_to_the_m() {
        let g = global(r(1, 4), 3);
        let base = BaseRecoverer(g.clone());
        for m in 0..=4 {
            let p = allr_pair_preprocess(g.clone(), &base, m, 9).unwrap();
            assert_eq!(p.list_size(), 3u64.pow(m as u32));
            assert_eq!(p.query_bound(), m * 4 + 4);
        }
        let a = allr_pair_preprocess(g.clone(), &base, 2, 9).unwrap();
        let b = allr_pair_preprocess(g.clone(), &base, 2, 9).unwrap();
        assert_eq!(a.rows(), b.rows());
        assert_eq!(a.rows().len(), 2);
        assert!(allr_pair_preprocess(g, &base, 5, 9).is_err());
    }

    #[test]
    fn single_row_list_gives_one_decoder() {
        let g = global(r(1, 4), 1);
        let p = allr_pair_preprocess(g.clone(), &BaseRecoverer(g), 3, 1).unwrap();
        assert_eq!(p.list_size(), 1);
    }

    #[test]
    fn empty_advice_picks_lexicographically_first_candidate() {
        let g = global(Radius::ONE, 16);
        let p = allr_pair_preprocess(g.clone(), &BaseRecoverer(g.clone()), 0, 1).unwrap();
        let s = ListTuple::singletons(&[1; 16]);
        // every column codeword is a candidate at radius 1; the smallest is zero
        let o = QueryOracle::new(&s);
        for pos in 0..16 {
            let d = p.decode(0, pos, &o);
            assert_eq!((d.value, d.queries()), (0, 4));
        }
    }

    #[test]
    fn empty_column_list_is_flagged() {
        let g = global(Radius::ZERO, 2);
        let p = allr_pair_preprocess(g.clone(), &BaseRecoverer(g), 1, 1).unwrap();
        // column 0 reads (1, 0, 0, 0), which no RS[4,2] codeword matches exactly
        let mut w = vec![0; 16];
        w[0] = 1;
        let s = ListTuple::singletons(&w);
        let d = p.decode(0, 0, &QueryOracle::new(&s));
        assert!(d.flagged);
        assert_eq!(d.value, 0);
    }

    #[test]
    fn uncorrupted_planted_codeword_is_reproduced() {
        for t in 1..=3 {
            let ov = Overrides {
                m: Some(if t == 3 { 1 } else { 4 }),
                ..Overrides::default()
            };
            let rec = allr_tensor(&rs_code(&gf4(), 4, 2).unwrap(), t, r(1, 4), 8, 0.5, ov).unwrap();
            let (_, w) = planted(t, t as u64);
            let s = ListTuple::singletons(&w);
            let inst = rec.preprocess(5).unwrap();
            let best = best_advice(inst.as_ref(), &w, &s).unwrap();
            assert_eq!(best.agreement, Ratio::from_integer(1), "t={t}");
        }
    }

    #[test]
    fn query_counts_respect_the_bound() {
        let ov = Overrides { m: Some(2), ..Overrides::default() };
        let rec = allr_tensor(&rs_code(&gf4(), 4, 2).unwrap(), 2, r(1, 4), 8, 0.5, ov).unwrap();
        let (_, w) = planted(2, 3);
        let s = corrupt_to_lists(&w, &gf4(), r(1, 8), 2, 3, ChannelMode::Filled).unwrap();
        let inst = rec.preprocess(2).unwrap();
        assert_eq!(inst.query_bound(), 12);
        for j in (0..inst.list_size()).step_by(7) {
            for pos in 0..16 {
                let o = QueryOracle::new(&s);
                let d = inst.decode(j, pos, &o);
                assert_eq!(d.queries(), o.queries());
                assert!(o.queries() <= 12);
            }
        }
    }

    #[test]
    fn sweep_matches_direct_invocation() {
        for (t, m) in [(2, 2), (2, 3), (3, 1)] {
            let ov = Overrides { m: Some(m), ..Overrides::default() };
            let rec = allr_tensor(&rs_code(&gf4(), 4, 2).unwrap(), t, r(1, 4), 3, 0.5, ov).unwrap();
            let (_, w) = planted(t, 11);
            let s = corrupt_to_lists(&w, &gf4(), r(1, 4), 2, 4, ChannelMode::Filled).unwrap();
            let inst = rec.preprocess(8).unwrap();
            let o = QueryOracle::new(&s);
            let mut seen = 0;
            inst.for_each_output(&o, &mut |j, word, flags| {
                for pos in 0..word.len() {
                    let d = inst.decode(j, pos, &QueryOracle::new(&s));
                    assert_eq!((d.value, d.flagged), (word[pos], flags[pos]), "t={t} j={j} pos={pos}");
                }
                seen += 1;
                true
            })
            .unwrap();
            assert_eq!(seen, inst.list_size());
        }
    }

    #[test]
    fn decoders_are_deterministic() {
        let ov = Overrides { m: Some(2), ..Overrides::default() };
        let rec = allr_tensor(&rs_code(&gf4(), 4, 2).unwrap(), 2, r(1, 4), 8, 0.5, ov).unwrap();
        let (_, w) = planted(2, 21);
        let s = corrupt_to_lists(&w, &gf4(), r(1, 4), 2, 21, ChannelMode::Filled).unwrap();
        let (a, b) = (rec.preprocess(1).unwrap(), rec.preprocess(1).unwrap());
        for pos in 0..16 {
            for j in [0, 5, 63] {
                let o = QueryOracle::new(&s);
                assert_eq!(a.decode(j, pos, &o), b.decode(j, pos, &o));
            }
        }
    }

    #[test]
    fn agreement_extremes() {
        let ov = Overrides { m: Some(1), ..Overrides::default() };
        let rec = allr_tensor(&rs_code(&gf4(), 4, 2).unwrap(), 2, r(1, 4), 1, 0.5, ov).unwrap();
        let (_, w) = planted(2, 4);
        let s = ListTuple::singletons(&w);
        let inst = rec.preprocess(0).unwrap();
        assert_eq!(
            empirical_agreement(inst.as_ref(), 0, &w, &s).unwrap(),
            Ratio::from_integer(1)
        );
        let shifted: Vec<Symbol> = w.iter().map(|v| v ^ 1).collect();
        assert_eq!(
            empirical_agreement(inst.as_ref(), 0, &shifted, &s).unwrap(),
            Ratio::from_integer(0)
        );
        let sampled = sampled_best_advice(inst.as_ref(), &w, &s, 3, 1).unwrap();
        assert_eq!(sampled.agreement, Ratio::from_integer(1));
    }

    #[test]
    fn list_size_guard_is_enforced() {
        let ov = Overrides { m: Some(4), ..Overrides::default() };
        let rec = allr_tensor(&rs_code(&gf4(), 4, 2).unwrap(), 3, r(1, 4), 8, 0.5, ov).unwrap();
        assert!(rec.preprocess(0).unwrap_err().is_guard());
    }
}
