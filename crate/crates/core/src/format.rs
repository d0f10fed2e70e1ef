//! JSON files for codes, concatenated codes, list tuples and words.
//!
//! A code file looks like
//!
//! ```json
//! {"field": {"s": 2, "poly": 7}, "n": 4, "k": 2, "systematic": false,
//!  "permutation": null, "generator": [[1, 0], [1, 1], [1, 2], [1, 3]]}
//! ```
//!
//! with the n x k generator row-major. A concatenated code adds
//! `"inners": [code, ...]` and `"basis": "coefficient"`. Words are plain
//! arrays of field elements.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::algebra::{Field, LinearCode, Matrix, Symbol};
use crate::concat::{Basis, ConcatCode};
use crate::error::{Error, Result};
use crate::listrec::ListTuple;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldFile {
    pub s: u32,
    pub poly: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeFile {
    pub field: FieldFile,
    pub n: usize,
    pub k: usize,
    pub systematic: bool,
    pub permutation: Option<Vec<usize>>,
    pub generator: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConcatFile {
    pub field: FieldFile,
    pub n: usize,
    pub k: usize,
    pub systematic: bool,
    pub permutation: Option<Vec<usize>>,
    pub generator: Vec<Vec<u32>>,
    pub inners: Vec<CodeFile>,
    pub basis: Basis,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ListTupleFile {
    pub n: usize,
    pub ell: usize,
    pub sets: Vec<Vec<u32>>,
}

/// Either kind of code file, told apart by the presence of `inners`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyCode {
    Linear(LinearCode),
    Concat(ConcatCode),
}

impl From<&LinearCode> for CodeFile {
    fn from(c: &LinearCode) -> Self {
        CodeFile {
            field: FieldFile {
                s: c.field().exponent(),
                poly: c.field().poly(),
            },
            n: c.n(),
            k: c.k(),
            systematic: c.is_systematic(),
            permutation: c.permutation().map(<[usize]>::to_vec),
            generator: c
                .generator()
                .to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(u32::from).collect())
                .collect(),
        }
    }
}

impl CodeFile {
    /// Rebuilds the code, checking shape, entries, rank and the recorded
    /// systematic flag.
    pub fn to_code(&self) -> Result<LinearCode> {
        self.build(true)
    }

    fn build(&self, full_rank: bool) -> Result<LinearCode> {
        let field = Field::new(self.field.s, self.field.poly)?;
        if self.generator.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: self.generator.len(),
            });
        }
        let mut rows = Vec::with_capacity(self.n);
        for row in &self.generator {
            if row.len() != self.k {
                return Err(Error::LengthMismatch {
                    expected: self.k,
                    got: row.len(),
                });
            }
            rows.push(row.iter().map(|&v| field.check(v)).collect::<Result<Vec<_>>>()?);
        }
        let g = Matrix::from_rows(&rows)?;
        let code = if full_rank {
            LinearCode::new(field, g)?
        } else {
            LinearCode::new_unrestricted(field, g)?
        };
        if code.is_systematic() != self.systematic {
            return Err(Error::Malformed(format!(
                "file says systematic={} but the generator says {}",
                self.systematic,
                code.is_systematic()
            )));
        }
        code.with_permutation(self.permutation.clone())
    }
}

impl From<&ConcatCode> for ConcatFile {
    fn from(cc: &ConcatCode) -> Self {
        let outer = CodeFile::from(cc.outer());
        ConcatFile {
            field: outer.field,
            n: outer.n,
            k: outer.k,
            systematic: outer.systematic,
            permutation: outer.permutation,
            generator: outer.generator,
            inners: cc.inners().iter().map(CodeFile::from).collect(),
            basis: cc.basis(),
        }
    }
}

impl ConcatFile {
    pub fn to_concat(&self) -> Result<ConcatCode> {
        let outer = CodeFile {
            field: self.field.clone(),
            n: self.n,
            k: self.k,
            systematic: self.systematic,
            permutation: self.permutation.clone(),
            generator: self.generator.clone(),
        }
        .to_code()?;
        // random inner maps are sampled without a rank condition
        let inners = self
            .inners
            .iter()
            .map(|c| c.build(false))
            .collect::<Result<Vec<_>>>()?;
        ConcatCode::new(outer, inners)
    }
}

impl From<&ListTuple> for ListTupleFile {
    fn from(s: &ListTuple) -> Self {
        ListTupleFile {
            n: s.n(),
            ell: s.ell(),
            sets: s
                .sets()
                .iter()
                .map(|set| set.iter().map(|&v| u32::from(v)).collect())
                .collect(),
        }
    }
}

impl ListTupleFile {
    pub fn to_list_tuple(&self) -> Result<ListTuple> {
        if self.sets.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: self.sets.len(),
            });
        }
        let sets = self
            .sets
            .iter()
            .map(|set| set.iter().map(|&v| to_symbol(v)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        ListTuple::new_allow_empty(self.ell, sets)
    }
}

fn to_symbol(v: u32) -> Result<Symbol> {
    Symbol::try_from(v).map_err(|_| Error::Malformed(format!("{v} is too large for a field element")))
}

fn malformed(e: impl std::fmt::Display) -> Error {
    Error::Malformed(e.to_string())
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| malformed(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| malformed(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(malformed)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| malformed(format!("{}: {e}", path.display())))
}

pub fn code_to_json(c: &LinearCode) -> String {
    serde_json::to_string(&CodeFile::from(c)).expect("plain data")
}

pub fn code_from_json(text: &str) -> Result<LinearCode> {
    serde_json::from_str::<CodeFile>(text).map_err(malformed)?.to_code()
}

pub fn save_code(path: impl AsRef<Path>, c: &LinearCode) -> Result<()> {
    write_json(path.as_ref(), &CodeFile::from(c))
}

pub fn save_concat(path: impl AsRef<Path>, cc: &ConcatCode) -> Result<()> {
    write_json(path.as_ref(), &ConcatFile::from(cc))
}

pub fn save_any(path: impl AsRef<Path>, code: &AnyCode) -> Result<()> {
    match code {
        AnyCode::Linear(c) => save_code(path, c),
        AnyCode::Concat(cc) => save_concat(path, cc),
    }
}

pub fn load_code(path: impl AsRef<Path>) -> Result<AnyCode> {
    let value: serde_json::Value = read_json(path.as_ref())?;
    if value.get("inners").is_some() {
        let f: ConcatFile = serde_json::from_value(value).map_err(malformed)?;
        Ok(AnyCode::Concat(f.to_concat()?))
    } else {
        let f: CodeFile = serde_json::from_value(value).map_err(malformed)?;
        Ok(AnyCode::Linear(f.to_code()?))
    }
}

/// Loads a file that must hold a plain linear code.
pub fn load_linear(path: impl AsRef<Path>) -> Result<LinearCode> {
    match load_code(path)? {
        AnyCode::Linear(c) => Ok(c),
        AnyCode::Concat(_) => Err(malformed("expected a linear code, found a concatenated code")),
    }
}

pub fn load_concat(path: impl AsRef<Path>) -> Result<ConcatCode> {
    match load_code(path)? {
        AnyCode::Concat(c) => Ok(c),
        AnyCode::Linear(_) => Err(malformed("expected a concatenated code")),
    }
}

pub fn save_list_tuple(path: impl AsRef<Path>, s: &ListTuple) -> Result<()> {
    write_json(path.as_ref(), &ListTupleFile::from(s))
}

pub fn load_list_tuple(path: impl AsRef<Path>) -> Result<ListTuple> {
    read_json::<ListTupleFile>(path.as_ref())?.to_list_tuple()
}

pub fn save_word(path: impl AsRef<Path>, word: &[Symbol]) -> Result<()> {
    write_json(path.as_ref(), &word)
}

pub fn load_word(path: impl AsRef<Path>) -> Result<Vec<Symbol>> {
    read_json::<Vec<u32>>(path.as_ref())?
        .into_iter()
        .map(to_symbol)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{random_linear_code, rs_code};
    use crate::concat::thommesen_sample;
    use num_rational::Ratio;

    fn gf4() -> Field {
        Field::new(2, 0b111).unwrap()
    }

    #[test]
    fn code_round_trip() {
        let rs = rs_code(&gf4(), 4, 2).unwrap();
        let text = code_to_json(&rs);
        assert_eq!(
            text,
            r#"{"field":{"s":2,"poly":7},"n":4,"k":2,"systematic":false,"permutation":null,"generator":[[1,0],[1,1],[1,2],[1,3]]}"#
        );
        assert_eq!(code_from_json(&text).unwrap(), rs);
        let sys = rs.systematize().unwrap();
        assert_eq!(code_from_json(&code_to_json(&sys)).unwrap(), sys);
        let r = random_linear_code(&Field::canonical(4).unwrap(), 9, 3, 5).unwrap();
        assert_eq!(code_from_json(&code_to_json(&r)).unwrap(), r);
    }

    #[test]
    fn invalid_code_files_are_rejected() {
        let low_rank = r#"{"field":{"s":2,"poly":7},"n":3,"k":2,"systematic":false,"permutation":null,"generator":[[1,1],[2,2],[3,3]]}"#;
        assert!(matches!(code_from_json(low_rank), Err(Error::RankDeficient { rank: 1, k: 2 })));
        let short_row = r#"{"field":{"s":2,"poly":7},"n":2,"k":2,"systematic":true,"permutation":null,"generator":[[1,0],[0]]}"#;
        assert!(code_from_json(short_row).is_err());
        let bad_entry = r#"{"field":{"s":2,"poly":7},"n":2,"k":1,"systematic":false,"permutation":null,"generator":[[4],[1]]}"#;
        assert!(code_from_json(bad_entry).is_err());
        let wrong_flag = r#"{"field":{"s":2,"poly":7},"n":2,"k":1,"systematic":false,"permutation":null,"generator":[[1],[1]]}"#;
        assert!(code_from_json(wrong_flag).is_err());
        let extra = r#"{"field":{"s":2,"poly":7},"n":2,"k":1,"systematic":true,"permutation":null,"generator":[[1],[1]],"x":1}"#;
        assert!(code_from_json(extra).is_err());
        let reducible = r#"{"field":{"s":2,"poly":5},"n":2,"k":1,"systematic":true,"permutation":null,"generator":[[1],[1]]}"#;
        assert!(code_from_json(reducible).is_err());
    }

    #[test]
    fn concat_and_list_files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cc = thommesen_sample(&rs_code(&gf4(), 4, 2).unwrap(), Ratio::new(1, 2), 3).unwrap();
        let p = dir.path().join("cc.json");
        save_concat(&p, &cc).unwrap();
        let text = fs::read_to_string(&p).unwrap();
        assert!(text.contains("\"basis\": \"coefficient\""));
        assert_eq!(load_code(&p).unwrap(), AnyCode::Concat(cc.clone()));
        assert!(load_linear(&p).is_err());

        let s = ListTuple::new_allow_empty(2, vec![vec![1, 0], vec![], vec![3]]).unwrap();
        let p = dir.path().join("s.json");
        save_list_tuple(&p, &s).unwrap();
        assert_eq!(load_list_tuple(&p).unwrap(), s);

        let p = dir.path().join("w.json");
        save_word(&p, &[0, 3, 1]).unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap().split_whitespace().collect::<String>(), "[0,3,1]");
        assert_eq!(load_word(&p).unwrap(), vec![0, 3, 1]);
        assert!(load_word(dir.path().join("missing.json")).is_err());
    }
}
