//! Query-counted oracle access to list tuples and words.
//!
//! Local algorithms never see a [`ListTuple`] directly; they read coordinates
//! through a [`ListOracle`]. Row and column views of a two-axis oracle are
//! strided [`Slice`]s that forward every query (and therefore every count) to
//! their parent. Counters use `Cell`, so an oracle is confined to one thread.

use std::cell::Cell;

use crate::algebra::Symbol;
use crate::error::{Error, Result};
use crate::listrec::ListTuple;

pub trait ListOracle {
    fn len(&self) -> usize;

    /// Reads set `i`; every call counts as one query.
    fn query(&self, i: usize) -> &[Symbol];

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Root oracle over a list tuple, with a query counter.
#[derive(Debug)]
pub struct QueryOracle<'a> {
    sets: &'a [Vec<Symbol>],
    count: Cell<usize>,
}

impl<'a> QueryOracle<'a> {
    pub fn new(target: &'a ListTuple) -> Self {
        Self::from_sets(target.sets())
    }

    pub fn from_sets(sets: &'a [Vec<Symbol>]) -> Self {
        QueryOracle {
            sets,
            count: Cell::new(0),
        }
    }

    pub fn queries(&self) -> usize {
        self.count.get()
    }

    pub fn reset(&self) {
        self.count.set(0);
    }
}

impl ListOracle for QueryOracle<'_> {
    fn len(&self) -> usize {
        self.sets.len()
    }

    fn query(&self, i: usize) -> &[Symbol] {
        self.count.set(self.count.get() + 1);
        &self.sets[i]
    }
}

/// Positions `offset + j * stride` for `j < len` of a parent oracle.
#[derive(Clone, Copy)]
pub struct Slice<'a> {
    parent: &'a dyn ListOracle,
    offset: usize,
    stride: usize,
    len: usize,
}

impl<'a> Slice<'a> {
    pub fn new(parent: &'a dyn ListOracle, offset: usize, stride: usize, len: usize) -> Result<Self> {
        if len > 0 && offset + (len - 1) * stride >= parent.len() {
            return Err(Error::OutOfRange {
                index: offset + (len - 1) * stride,
                len: parent.len(),
            });
        }
        Ok(Slice {
            parent,
            offset,
            stride,
            len,
        })
    }

    /// Parent coordinate addressed by local coordinate `j`.
    pub fn parent_index(&self, j: usize) -> usize {
        self.offset + j * self.stride
    }
}

impl ListOracle for Slice<'_> {
    fn len(&self) -> usize {
        self.len
    }

    fn query(&self, i: usize) -> &[Symbol] {
        assert!(i < self.len, "slice index {i} out of range 0..{}", self.len);
        self.parent.query(self.offset + i * self.stride)
    }
}

/// Row `r` of an oracle laid out row-major as `rows x cols`.
pub fn row_slice(parent: &dyn ListOracle, cols: usize, r: usize) -> Result<Slice<'_>> {
    check_grid(parent, cols)?;
    let rows = parent.len() / cols;
    if r >= rows {
        return Err(Error::OutOfRange { index: r, len: rows });
    }
    Slice::new(parent, r * cols, 1, cols)
}

/// Column `c` of an oracle laid out row-major as `rows x cols`.
pub fn col_slice(parent: &dyn ListOracle, cols: usize, c: usize) -> Result<Slice<'_>> {
    check_grid(parent, cols)?;
    if c >= cols {
        return Err(Error::OutOfRange { index: c, len: cols });
    }
    Slice::new(parent, c, cols, parent.len() / cols)
}

fn check_grid(parent: &dyn ListOracle, cols: usize) -> Result<()> {
    if cols == 0 || !parent.len().is_multiple_of(cols) {
        return Err(Error::param(
            "cols",
            format!("{cols} does not divide oracle length {}", parent.len()),
        ));
    }
    Ok(())
}

/// Symbol-valued oracle, as seen by an LDC decoder.
pub trait WordOracle {
    fn len(&self) -> usize;

    fn read(&self, i: usize) -> Symbol;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Word oracle with a read counter.
#[derive(Debug)]
pub struct CountedWord<'a> {
    word: &'a [Symbol],
    count: Cell<usize>,
}

impl<'a> CountedWord<'a> {
    pub fn new(word: &'a [Symbol]) -> Self {
        CountedWord {
            word,
            count: Cell::new(0),
        }
    }

    pub fn reads(&self) -> usize {
        self.count.get()
    }
}

impl WordOracle for CountedWord<'_> {
    fn len(&self) -> usize {
        self.word.len()
    }

    fn read(&self, i: usize) -> Symbol {
        self.count.set(self.count.get() + 1);
        self.word[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(rows: usize, cols: usize) -> ListTuple {
        let sets = (0..rows * cols).map(|i| vec![i as Symbol]).collect();
        ListTuple::new(1, sets).unwrap()
    }

    #[test]
    fn row_and_column_address_the_same_cell() {
        let s = grid(3, 4);
        let o = QueryOracle::new(&s);
        for r in 0..3 {
            for c in 0..4 {
                let row = row_slice(&o, 4, r).unwrap();
                let col = col_slice(&o, 4, c).unwrap();
                assert_eq!(row.query(c), col.query(r));
                assert_eq!(row.query(c), &[(r * 4 + c) as Symbol]);
            }
        }
        assert_eq!(o.queries(), 3 * 4 * 3);
    }

    #[test]
    fn nested_slices_forward_counts() {
        let s = grid(4, 4);
        let o = QueryOracle::new(&s);
        let row = row_slice(&o, 4, 2).unwrap();
        let inner = col_slice(&row, 2, 1).unwrap();
        assert_eq!(inner.len(), 2);
        assert_eq!(inner.query(0), &[9]);
        assert_eq!(inner.query(1), &[11]);
        assert_eq!(o.queries(), 2);
    }

    #[test]
    fn slicing_zero_word_gives_zero_oracle() {
        let s = ListTuple::singletons(&[0; 6]);
        let o = QueryOracle::new(&s);
        let col = col_slice(&o, 3, 2).unwrap();
        assert!((0..col.len()).all(|i| col.query(i) == [0]));
    }

    #[test]
    fn out_of_range_slices_are_rejected() {
        let s = grid(2, 3);
        let o = QueryOracle::new(&s);
        assert!(row_slice(&o, 3, 2).is_err());
        assert!(col_slice(&o, 3, 3).is_err());
        assert!(row_slice(&o, 4, 0).is_err());
        assert!(Slice::new(&o, 5, 1, 2).is_err());
    }

    #[test]
    fn counted_word_counts_reads() {
        let w = [3, 1, 4];
        let o = CountedWord::new(&w);
        assert_eq!(o.read(2), 4);
        assert_eq!(o.read(2), 4);
        assert_eq!(o.reads(), 2);
    }
}
