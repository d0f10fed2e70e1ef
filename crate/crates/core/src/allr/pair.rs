//! Approximate local list recovery of `C ⊗ C'` from a global recoverer for
//! the column code `C` and an approximate local recoverer for the row code.

use std::sync::Arc;

use rand::seq::index;

use super::{ApproxLocal, Decoded, OutputVisitor, Preprocess};
use crate::algebra::Symbol;
use crate::error::{Error, Result};
use crate::guard;
use crate::listrec::GlobalRecoverer;
use crate::oracle::{col_slice, row_slice, ListOracle};
use crate::seed;

/// The `(L')^m` decoders produced by one preprocessing run, one per advice
/// string `J`. Decoder `j` reads `J` as the base-`L'` digits of `j`, most
/// significant digit first, one digit per sampled row.
#[derive(Debug)]
pub struct PairRecoverer {
    column: Arc<GlobalRecoverer>,
    rows: Vec<usize>,
    row_recs: Vec<Arc<dyn ApproxLocal>>,
    row_len: usize,
    row_list: u64,
    list_size: u64,
    query_bound: usize,
}

/// Samples `m` rows and preprocesses an independent row recoverer for each.
pub fn allr_pair_preprocess(
    column: Arc<GlobalRecoverer>,
    row: &dyn Preprocess,
    m: usize,
    seed: u64,
) -> Result<PairRecoverer> {
    let n = column.n();
    if m > n {
        return Err(Error::param("m", format!("{m} rows requested from {n}")));
    }
    let row_list = row.list_size();
    let list_size = guard::saturating_pow(row_list as u128, m as u32);
    guard::check(list_size)?;
    let mut rng = seed::rng(seed, &[seed::stage::PREPROCESS]);
    let mut rows = index::sample(&mut rng, n, m).into_vec();
    rows.sort_unstable();
    let row_recs = rows
        .iter()
        .map(|&r| row.preprocess(seed::derive(seed, &[seed::stage::ROW, r as u64])))
        .collect::<Result<Vec<_>>>()?;
    Ok(PairRecoverer {
        query_bound: m * row.query_bound() + n,
        row_len: row.block_len(),
        column,
        rows,
        row_recs,
        row_list,
        list_size: list_size as u64,
    })
}

impl PairRecoverer {
    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    /// Advice digits `(j_r)` for decoder `j`.
    pub fn advice(&self, j: u64) -> Vec<u64> {
        let mut digits = vec![0; self.m()];
        let mut rest = j;
        for d in digits.iter_mut().rev() {
            *d = rest % self.row_list;
            rest /= self.row_list;
        }
        digits
    }

    /// Candidate in `list` whose restriction to the sampled rows is closest to
    /// `guess`; ties go to the lexicographically smallest codeword.
    fn select(&self, list: &[usize], guess: &[Symbol]) -> Option<usize> {
        list.iter().copied().min_by(|&a, &b| {
            let (ca, cb) = (self.column.codeword(a), self.column.codeword(b));
            self.disagreement(ca, guess)
                .cmp(&self.disagreement(cb, guess))
                .then_with(|| ca.cmp(cb))
        })
    }

    fn disagreement(&self, codeword: &[Symbol], guess: &[Symbol]) -> usize {
        self.rows
            .iter()
            .zip(guess)
            .filter(|(&r, &g)| codeword[r] != g)
            .count()
    }
}

impl ApproxLocal for PairRecoverer {
    fn block_len(&self) -> usize {
        self.column.n() * self.row_len
    }

    fn list_size(&self) -> u64 {
        self.list_size
    }

    fn query_bound(&self) -> usize {
        self.query_bound
    }

    fn decode(&self, j: u64, pos: usize, s: &dyn ListOracle) -> Decoded {
        assert!(j < self.list_size, "decoder {j} out of range");
        let (i, col) = (pos / self.row_len, pos % self.row_len);
        let mut row_queries = 0;
        let guess: Vec<Symbol> = self
            .rows
            .iter()
            .zip(&self.row_recs)
            .zip(self.advice(j))
            .map(|((&r, rec), jr)| {
                let view = row_slice(s, self.row_len, r).expect("row in range");
                let d = rec.decode(jr, col, &view);
                row_queries += d.queries();
                d.value
            })
            .collect();
        let column = col_slice(s, self.row_len, col).expect("column in range");
        let sets: Vec<&[Symbol]> = (0..column.len()).map(|r| column.query(r)).collect();
        let list = self.column.recover(&sets);
        let (value, flagged) = match self.select(&list, &guess) {
            Some(c) => (self.column.codeword(c)[i], false),
            None => (0, true),
        };
        Decoded {
            value,
            flagged,
            row_queries,
            column_queries: sets.len(),
        }
    }

    /// Tabulates every row decoder on its row and every column list once,
    /// then assembles each decoder's full output from the tables.
    fn for_each_output(&self, s: &dyn ListOracle, visit: OutputVisitor<'_>) -> Result<()> {
        let (n, n_row) = (self.column.n(), self.row_len);
        let tables = self
            .rows
            .iter()
            .zip(&self.row_recs)
            .map(|(&r, rec)| rec.tabulate(&row_slice(s, n_row, r)?))
            .collect::<Result<Vec<_>>>()?;
        let lists: Vec<Vec<usize>> = (0..n_row)
            .map(|c| {
                let column = col_slice(s, n_row, c).expect("column in range");
                let sets: Vec<&[Symbol]> = (0..n).map(|r| column.query(r)).collect();
                self.column.recover(&sets)
            })
            .collect();
        let mut word = vec![0; n * n_row];
        let mut flags = vec![false; n * n_row];
        let mut digits = vec![0u64; self.m()];
        let mut guess = vec![0; self.m()];
        for j in 0..self.list_size {
            for (c, list) in lists.iter().enumerate() {
                for (g, (table, &d)) in guess.iter_mut().zip(tables.iter().zip(&digits)) {
                    *g = table[d as usize][c];
                }
                let pick = self.select(list, &guess);
                for i in 0..n {
                    let (v, f) = match pick {
                        Some(idx) => (self.column.codeword(idx)[i], false),
                        None => (0, true),
                    };
                    word[i * n_row + c] = v;
                    flags[i * n_row + c] = f;
                }
            }
            if !visit(j, &word, &flags) {
                break;
            }
            // advance the mixed-radix counter, last digit fastest
            for d in digits.iter_mut().rev() {
                *d += 1;
                if *d < self.row_list {
                    break;
                }
                *d = 0;
            }
        }
        Ok(())
    }
}
