//! List tuples, distance to lists, and the brute-force list-recovery oracle.
//!
//! Every radius comparison is done in exact integer arithmetic:
//! `dist(x, S) <= alpha` iff `violations * den <= num * n`.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{Field, LinearCode, Symbol};
use crate::error::{Error, Result};
use crate::guard;
use crate::seed;

/// A fraction in [0, 1], kept exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Radius(Ratio<u64>);

impl Radius {
    pub const ZERO: Radius = Radius(Ratio::new_raw(0, 1));
    pub const ONE: Radius = Radius(Ratio::new_raw(1, 1));

    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num > den {
            return Err(Error::param("alpha", format!("{num}/{den} is not in [0, 1]")));
        }
        Ok(Radius(Ratio::new(num, den)))
    }

    /// Closest fraction to `x` with a bounded denominator (continued fractions).
    pub fn from_f64(x: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::param("alpha", format!("{x} is not in [0, 1]")));
        }
        let r = Ratio::<i64>::approximate_float(x)
            .ok_or_else(|| Error::param("alpha", format!("cannot represent {x}")))?;
        Self::new(*r.numer() as u64, *r.denom() as u64)
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn ratio(&self) -> Ratio<u64> {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    /// Largest violation count v with v / n <= self, i.e. floor(self * n).
    pub fn max_violations(&self, n: usize) -> usize {
        ((self.numer() as u128 * n as u128) / self.denom() as u128) as usize
    }

    pub fn admits(&self, violations: usize, n: usize) -> bool {
        violations as u128 * self.denom() as u128 <= self.numer() as u128 * n as u128
    }

    pub fn mul(&self, other: &Radius) -> Radius {
        Radius(self.0 * other.0)
    }

    /// `self - other`, clamped at zero.
    pub fn saturating_sub(&self, other: &Radius) -> Radius {
        if other.0 >= self.0 {
            Radius::ZERO
        } else {
            Radius(self.0 - other.0)
        }
    }
}

impl fmt::Display for Radius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.denom() {
            1 => write!(f, "{}", self.numer()),
            d => write!(f, "{}/{d}", self.numer()),
        }
    }
}

impl FromStr for Radius {
    type Err = Error;

    /// Accepts `a/b` or a decimal.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::param("alpha", format!("cannot parse `{s}`"));
        match s.split_once('/') {
            Some((a, b)) => Radius::new(
                a.trim().parse().map_err(|_| bad())?,
                b.trim().parse().map_err(|_| bad())?,
            ),
            None => Radius::from_f64(s.parse().map_err(|_| bad())?),
        }
    }
}

impl Serialize for Radius {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Radius {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Text(String),
        }
        let r = match Repr::deserialize(d)? {
            Repr::Num(x) => Radius::from_f64(x),
            Repr::Text(s) => s.parse(),
        };
        r.map_err(serde::de::Error::custom)
    }
}

/// Per-coordinate candidate sets, each sorted ascending with at most `ell`
/// elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ListTuple {
    ell: usize,
    sets: Vec<Vec<Symbol>>,
}

impl ListTuple {
    /// Canonicalizes (sorts, dedups) the sets; every set must be nonempty
    /// and hold at most `ell` elements.
    pub fn new(ell: usize, sets: Vec<Vec<Symbol>>) -> Result<Self> {
        let t = Self::new_allow_empty(ell, sets)?;
        if let Some(i) = t.sets.iter().position(Vec::is_empty) {
            return Err(Error::param("sets", format!("set {i} is empty")));
        }
        Ok(t)
    }

    /// Like [`ListTuple::new`] but empty sets are allowed. Inner list recovery
    /// of a concatenated code can legitimately produce them; an empty set is
    /// violated by every symbol.
    pub fn new_allow_empty(ell: usize, mut sets: Vec<Vec<Symbol>>) -> Result<Self> {
        if ell == 0 {
            return Err(Error::param("ell", "must be at least 1"));
        }
        for (i, s) in sets.iter_mut().enumerate() {
            s.sort_unstable();
            s.dedup();
            if s.len() > ell {
                return Err(Error::param(
                    "sets",
                    format!("set {i} has {} elements, above ell={ell}", s.len()),
                ));
            }
        }
        Ok(ListTuple { ell, sets })
    }

    /// Singleton sets {w_i}: list recovery with these is list decoding of w.
    pub fn singletons(word: &[Symbol]) -> Self {
        ListTuple {
            ell: 1,
            sets: word.iter().map(|&v| vec![v]).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.sets.len()
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn sets(&self) -> &[Vec<Symbol>] {
        &self.sets
    }

    pub fn set(&self, i: usize) -> &[Symbol] {
        &self.sets[i]
    }

    pub fn contains(&self, i: usize, v: Symbol) -> bool {
        self.sets[i].binary_search(&v).is_ok()
    }

    /// Checks every element is in the field.
    pub fn validate(&self, f: &Field) -> Result<()> {
        for s in &self.sets {
            for &v in s {
                f.check(v as u32)?;
            }
        }
        Ok(())
    }

    /// True when each set of `self` is a subset of the matching set of `other`.
    pub fn is_pointwise_subset(&self, other: &ListTuple) -> bool {
        self.n() == other.n()
            && self
                .sets
                .iter()
                .zip(&other.sets)
                .all(|(a, b)| a.iter().all(|v| b.binary_search(v).is_ok()))
    }
}

/// Number of coordinates with `x_i` outside `S_i`.
pub fn violations<S: AsRef<[Symbol]>>(x: &[Symbol], sets: &[S]) -> usize {
    x.iter()
        .zip(sets)
        .filter(|(v, s)| s.as_ref().binary_search(v).is_err())
        .count()
}

/// `|{i : x_i not in S_i}| / n`, exact.
pub fn dist_to_lists(x: &[Symbol], s: &ListTuple) -> Result<Ratio<usize>> {
    if x.len() != s.n() {
        return Err(Error::LengthMismatch {
            expected: s.n(),
            got: x.len(),
        });
    }
    if x.is_empty() {
        return Ok(Ratio::from_integer(0));
    }
    Ok(Ratio::new(violations(x, s.sets()), x.len()))
}

/// Fraction of nonzero coordinates.
pub fn relative_weight(word: &[Symbol]) -> Ratio<usize> {
    if word.is_empty() {
        return Ratio::from_integer(0);
    }
    Ratio::new(word.iter().filter(|&&v| v != 0).count(), word.len())
}

/// Every message x with `dist(C(x), S) <= alpha`, sorted. This is the ground
/// truth every local algorithm is measured against.
pub fn brute_force_list_recover(
    code: &LinearCode,
    s: &ListTuple,
    alpha: Radius,
) -> Result<Vec<Vec<Symbol>>> {
    if s.n() != code.n() {
        return Err(Error::LengthMismatch {
            expected: code.n(),
            got: s.n(),
        });
    }
    s.validate(code.field())?;
    let budget = alpha.max_violations(code.n());
    let mut out = Vec::new();
    code.for_each_codeword(|m, c| {
        let mut bad = 0;
        for (v, set) in c.iter().zip(s.sets()) {
            if set.binary_search(v).is_err() {
                bad += 1;
                if bad > budget {
                    return;
                }
            }
        }
        out.push(m.to_vec());
    })?;
    out.sort_unstable();
    Ok(out)
}

/// Global list recoverer for a fixed code and radius with a precomputed
/// codebook. Used as the base of the tensor recursion, for columns, and for
/// inner codes of concatenations.
#[derive(Debug, Clone)]
pub struct GlobalRecoverer {
    code: LinearCode,
    radius: Radius,
    list_bound: usize,
    messages: Vec<Vec<Symbol>>,
    codewords: Vec<Symbol>,
}

impl GlobalRecoverer {
    /// `list_bound` is the L in (alpha, ell, L): the number of decoders the
    /// base level of the tensor recursion emits.
    pub fn new(code: LinearCode, radius: Radius, list_bound: usize) -> Result<Self> {
        if list_bound == 0 {
            return Err(Error::param("list_bound", "must be at least 1"));
        }
        let book = code.codebook()?;
        let n = code.n();
        let mut messages = Vec::with_capacity(book.len());
        let mut codewords = Vec::with_capacity(book.len() * n);
        for (m, c) in book {
            messages.push(m);
            codewords.extend(c);
        }
        Ok(GlobalRecoverer {
            code,
            radius,
            list_bound,
            messages,
            codewords,
        })
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    pub fn radius(&self) -> Radius {
        self.radius
    }

    pub fn list_bound(&self) -> usize {
        self.list_bound
    }

    pub fn n(&self) -> usize {
        self.code.n()
    }

    pub fn message(&self, idx: usize) -> &[Symbol] {
        &self.messages[idx]
    }

    pub fn codeword(&self, idx: usize) -> &[Symbol] {
        let n = self.n();
        &self.codewords[idx * n..(idx + 1) * n]
    }

    /// Codebook indices (ascending, i.e. message order) within this
    /// recoverer's radius of `sets`.
    pub fn recover<S: AsRef<[Symbol]>>(&self, sets: &[S]) -> Vec<usize> {
        self.recover_at(sets, self.radius)
    }

    pub fn recover_at<S: AsRef<[Symbol]>>(&self, sets: &[S], radius: Radius) -> Vec<usize> {
        let n = self.n();
        assert_eq!(sets.len(), n, "list tuple length");
        let budget = radius.max_violations(n);
        (0..self.messages.len())
            .filter(|&idx| {
                let mut bad = 0;
                for (v, s) in self.codeword(idx).iter().zip(sets) {
                    if s.as_ref().binary_search(v).is_err() {
                        bad += 1;
                        if bad > budget {
                            return false;
                        }
                    }
                }
                true
            })
            .collect()
    }

    pub fn recover_messages(&self, s: &ListTuple) -> Result<Vec<Vec<Symbol>>> {
        if s.n() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                got: s.n(),
            });
        }
        Ok(self
            .recover(s.sets())
            .into_iter()
            .map(|i| self.messages[i].clone())
            .collect())
    }
}

/// How uncorrupted coordinates are filled by [`corrupt_to_lists`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ChannelMode {
    /// True symbol plus `ell - 1` decoys.
    #[default]
    Filled,
    /// True symbol alone.
    Sparse,
}

impl FromStr for ChannelMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "filled" => Ok(ChannelMode::Filled),
            "sparse" => Ok(ChannelMode::Sparse),
            other => Err(Error::param("mode", format!("unknown channel mode `{other}`"))),
        }
    }
}

/// `count` distinct field elements other than `avoid`.
fn decoys<R: Rng>(rng: &mut R, q: usize, avoid: Symbol, count: usize) -> Vec<Symbol> {
    index::sample(rng, q - 1, count)
        .into_iter()
        .map(|i| {
            let v = i as Symbol;
            if v >= avoid {
                v + 1
            } else {
                v
            }
        })
        .collect()
}

/// Seeded list channel. Exactly `floor(alpha * n)` coordinates exclude the
/// codeword symbol and carry `ell` decoys; the rest carry the symbol plus
/// `ell - 1` decoys (filled) or the symbol alone (sparse).
pub fn corrupt_to_lists(
    codeword: &[Symbol],
    field: &Field,
    alpha: Radius,
    ell: usize,
    seed: u64,
    mode: ChannelMode,
) -> Result<ListTuple> {
    let q = field.order();
    let n = codeword.len();
    let bad = alpha.max_violations(n);
    if ell == 0 || ell > q {
        return Err(Error::param("ell", format!("need 1 <= ell <= q={q}, got {ell}")));
    }
    if ell == q && bad > 0 {
        return Err(Error::param(
            "ell",
            format!("ell = q = {q} leaves no room to exclude the true symbol"),
        ));
    }
    for &v in codeword {
        field.check(v as u32)?;
    }
    let mut rng = seed::rng(seed, &[seed::stage::CHANNEL]);
    let mut corrupted = vec![false; n];
    for i in index::sample(&mut rng, n, bad) {
        corrupted[i] = true;
    }
    let sets = codeword
        .iter()
        .zip(&corrupted)
        .map(|(&c, &is_bad)| {
            if is_bad {
                decoys(&mut rng, q, c, ell)
            } else {
                let extra = match mode {
                    ChannelMode::Filled => ell - 1,
                    ChannelMode::Sparse => 0,
                };
                let mut s = decoys(&mut rng, q, c, extra);
                s.push(c);
                s
            }
        })
        .collect();
    ListTuple::new(ell, sets)
}

/// Uniformly random list tuple with sets of size exactly `ell`.
pub fn random_list_tuple<R: Rng>(rng: &mut R, q: usize, n: usize, ell: usize) -> Result<ListTuple> {
    if ell == 0 || ell > q {
        return Err(Error::param("ell", format!("need 1 <= ell <= q={q}, got {ell}")));
    }
    let sets = (0..n)
        .map(|_| index::sample(rng, q, ell).into_iter().map(|v| v as Symbol).collect())
        .collect();
    ListTuple::new(ell, sets)
}

/// Largest output list over `trials` seeded uniformly random list tuples.
pub fn estimate_list_size(
    code: &LinearCode,
    alpha: Radius,
    ell: usize,
    trials: usize,
    seed: u64,
) -> Result<usize> {
    let rec = GlobalRecoverer::new(code.clone(), alpha, 1)?;
    let q = code.field().order();
    let mut worst = 0;
    for trial in 0..trials {
        let mut rng = seed::rng(seed, &[seed::stage::CHANNEL, trial as u64]);
        let s = random_list_tuple(&mut rng, q, code.n(), ell)?;
        worst = worst.max(rec.recover(s.sets()).len());
    }
    Ok(worst)
}

/// Exact worst-case list size over every tuple of `ell`-subsets, when the
/// number of such tuples fits the enumeration guard.
pub fn worst_case_list_size(code: &LinearCode, alpha: Radius, ell: usize) -> Result<usize> {
    let q = code.field().order();
    if ell == 0 || ell > q {
        return Err(Error::param("ell", format!("need 1 <= ell <= q={q}, got {ell}")));
    }
    let subsets = ell_subsets(q, ell);
    let tuples = guard::saturating_pow(subsets.len() as u128, code.n() as u32);
    guard::check(tuples.saturating_mul(code.message_count()))?;
    let rec = GlobalRecoverer::new(code.clone(), alpha, 1)?;
    let n = code.n();
    let mut choice = vec![0usize; n];
    let mut worst = 0;
    loop {
        let sets: Vec<&[Symbol]> = choice.iter().map(|&c| subsets[c].as_slice()).collect();
        worst = worst.max(rec.recover(&sets).len());
        // odometer
        let mut i = 0;
        loop {
            if i == n {
                return Ok(worst);
            }
            choice[i] += 1;
            if choice[i] < subsets.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

fn ell_subsets(q: usize, ell: usize) -> Vec<Vec<Symbol>> {
    (0u32..1 << q)
        .filter(|m| m.count_ones() as usize == ell)
        .map(|m| (0..q).filter(|&b| m >> b & 1 == 1).map(|b| b as Symbol).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{random_linear_code, repetition_code, rs_code};
    use proptest::prelude::*;
    use rand::Rng;

    fn gf4() -> Field {
        Field::new(2, 0b111).unwrap()
    }

    fn r(a: u64, b: u64) -> Radius {
        Radius::new(a, b).unwrap()
    }

    #[test]
    fn radius_parsing_and_floor() {
        assert_eq!("1/4".parse::<Radius>().unwrap(), r(1, 4));
        assert_eq!("0.25".parse::<Radius>().unwrap(), r(1, 4));
        assert_eq!(Radius::from_f64(0.0125).unwrap(), r(1, 80));
        assert!("5/4".parse::<Radius>().is_err());
        assert!(Radius::from_f64(-0.1).is_err());
        assert_eq!(r(1, 3).max_violations(3), 1);
        assert_eq!(r(1, 3).max_violations(5), 1);
        assert!(r(1, 3).admits(1, 3));
        assert!(!r(1, 3).admits(2, 5));
        assert_eq!(r(1, 2).saturating_sub(&r(3, 4)), Radius::ZERO);
    }

    #[test]
    fn radius_serde_accepts_numbers_and_fractions() {
        let a: Radius = serde_json::from_str("\"1/3\"").unwrap();
        let b: Radius = serde_json::from_str("0.5").unwrap();
        assert_eq!((a, b), (r(1, 3), r(1, 2)));
        assert_eq!(serde_json::to_string(&a).unwrap(), "\"1/3\"");
    }

    #[test]
    fn dist_to_lists_examples() {
        let s = ListTuple::new(2, vec![vec![1, 2], vec![0], vec![1], vec![2, 3]]).unwrap();
        assert_eq!(dist_to_lists(&[1, 0, 3, 2], &s).unwrap(), Ratio::new(1, 4));
        assert_eq!(dist_to_lists(&[1, 0, 1, 2], &s).unwrap(), Ratio::from_integer(0));
        let single = ListTuple::singletons(&[0, 0, 0]);
        assert_eq!(dist_to_lists(&[1, 2, 3], &single).unwrap(), Ratio::from_integer(1));
        assert!(dist_to_lists(&[1, 2], &single).is_err());
    }

    #[test]
    fn list_tuple_validation() {
        assert!(ListTuple::new(1, vec![vec![1, 2]]).is_err());
        assert!(ListTuple::new(2, vec![vec![]]).is_err());
        assert!(ListTuple::new_allow_empty(2, vec![vec![]]).is_ok());
        assert!(ListTuple::new(0, vec![vec![1]]).is_err());
        let t = ListTuple::new(3, vec![vec![3, 1, 1]]).unwrap();
        assert_eq!(t.set(0), &[1, 3]);
        assert!(t.validate(&gf4()).is_ok());
        assert!(ListTuple::new(1, vec![vec![9]]).unwrap().validate(&gf4()).is_err());
    }

    #[test]
    fn repetition_recovery_example() {
        let gf2 = Field::canonical(1).unwrap();
        let c = repetition_code(&gf2, 3).unwrap();
        let s = ListTuple::new(1, vec![vec![0], vec![0], vec![1]]).unwrap();
        assert_eq!(brute_force_list_recover(&c, &s, r(1, 3)).unwrap(), vec![vec![0]]);
        assert_eq!(
            brute_force_list_recover(&c, &s, Radius::ONE).unwrap(),
            vec![vec![0], vec![1]]
        );
    }

    #[test]
    fn exact_singletons_recover_the_message() {
        let c = rs_code(&gf4(), 4, 2).unwrap();
        let x = vec![2, 3];
        let s = ListTuple::singletons(&c.encode(&x).unwrap());
        assert_eq!(brute_force_list_recover(&c, &s, Radius::ZERO).unwrap(), vec![x]);
        assert_eq!(brute_force_list_recover(&c, &s, Radius::ONE).unwrap().len(), 16);
    }

    #[test]
    fn channel_examples() {
        let f = gf4();
        let c = rs_code(&f, 4, 2).unwrap();
        let w = c.encode(&[1, 1]).unwrap();
        let s = corrupt_to_lists(&w, &f, Radius::ZERO, 1, 5, ChannelMode::Sparse).unwrap();
        assert_eq!(s, ListTuple::singletons(&w));
        let s = corrupt_to_lists(&w, &f, r(1, 4), 2, 5, ChannelMode::Filled).unwrap();
        assert_eq!(dist_to_lists(&w, &s).unwrap(), Ratio::new(1, 4));
        assert!(s.sets().iter().all(|x| x.len() == 2));
        let again = corrupt_to_lists(&w, &f, r(1, 4), 2, 5, ChannelMode::Filled).unwrap();
        assert_eq!(s, again);
        assert!(corrupt_to_lists(&w, &f, r(1, 4), 5, 5, ChannelMode::Filled).is_err());
        assert!(corrupt_to_lists(&w, &f, r(1, 4), 4, 5, ChannelMode::Filled).is_err());
        // ell = q is fine when nothing is corrupted
        assert!(corrupt_to_lists(&w, &f, Radius::ZERO, 4, 5, ChannelMode::Filled).is_ok());
    }

    #[test]
    fn list_size_estimates() {
        let c = rs_code(&gf4(), 4, 2).unwrap();
        assert!(estimate_list_size(&c, Radius::ZERO, 1, 50, 1).unwrap() <= 1);
        assert_eq!(estimate_list_size(&c, Radius::ONE, 2, 5, 1).unwrap(), 16);
        let a = estimate_list_size(&c, r(1, 4), 2, 100, 3).unwrap();
        let b = estimate_list_size(&c, r(1, 4), 2, 100, 3).unwrap();
        assert_eq!(a, b);
        let worst = worst_case_list_size(&c, r(1, 4), 2).unwrap();
        assert!(a <= worst);
        // matches the independent enumeration in scripts/calibrate.py
        assert_eq!(worst, 8);
        assert_eq!(worst_case_list_size(&c, Radius::ZERO, 2).unwrap(), 2);
        assert_eq!(worst_case_list_size(&c, r(1, 4), 1).unwrap(), 1);
    }

    /// Independent membership oracle: counts violations directly from the
    /// definition, without the early exit.
    fn is_close(code: &LinearCode, x: &[Symbol], s: &ListTuple, alpha: Radius) -> bool {
        let w = code.encode(x).unwrap();
        let bad = (0..w.len()).filter(|&i| !s.set(i).contains(&w[i])).count();
        bad as f64 / w.len() as f64 <= alpha.to_f64() + 1e-12
    }

    proptest! {
        #[test]
        fn oracle_is_sound_and_complete(seed in any::<u64>(), num in 0u64..=4, ell in 1usize..=3) {
            let f = gf4();
            let c = random_linear_code(&f, 5, 2, seed).unwrap();
            let mut rng = seed::rng(seed, &[99]);
            let s = random_list_tuple(&mut rng, 4, 5, ell).unwrap();
            let alpha = r(num, 5);
            let out = brute_force_list_recover(&c, &s, alpha).unwrap();
            for (m, _) in c.codebook().unwrap() {
                prop_assert_eq!(out.binary_search(&m).is_ok(), is_close(&c, &m, &s, alpha));
            }
        }

        #[test]
        fn recovery_is_monotone(seed in any::<u64>(), a in 0u64..=5, b in 0u64..=5) {
            let f = gf4();
            let c = random_linear_code(&f, 5, 2, seed).unwrap();
            let mut rng = seed::rng(seed, &[7]);
            let small = random_list_tuple(&mut rng, 4, 5, 1).unwrap();
            // grow each set by one extra symbol
            let big = ListTuple::new(2, small.sets().iter().map(|s| {
                let mut t = s.clone();
                t.push((s[0] + 1) % 4);
                t
            }).collect()).unwrap();
            prop_assert!(small.is_pointwise_subset(&big));
            let (lo, hi) = (r(a.min(b), 5), r(a.max(b), 5));
            let out_lo = brute_force_list_recover(&c, &small, lo).unwrap();
            let out_hi = brute_force_list_recover(&c, &small, hi).unwrap();
            prop_assert!(out_lo.iter().all(|m| out_hi.contains(m)));
            let out_big = brute_force_list_recover(&c, &big, lo).unwrap();
            prop_assert!(out_lo.iter().all(|m| out_big.contains(m)));
        }

        #[test]
        fn channel_distance_is_exact(seed in any::<u64>(), num in 0u64..=7, ell in 1usize..=3, sparse in any::<bool>()) {
            let f = gf4();
            let c = rs_code(&f, 4, 2).unwrap();
            let w = c.encode(&[(seed % 4) as Symbol, (seed / 4 % 4) as Symbol]).unwrap();
            let alpha = r(num, 7);
            let mode = if sparse { ChannelMode::Sparse } else { ChannelMode::Filled };
            let s = corrupt_to_lists(&w, &f, alpha, ell, seed, mode).unwrap();
            prop_assert_eq!(dist_to_lists(&w, &s).unwrap(), Ratio::new(alpha.max_violations(4), 4));
        }

        #[test]
        fn singleton_recovery_is_list_decoding(seed in any::<u64>(), num in 0u64..=5) {
            let f = gf4();
            let c = random_linear_code(&f, 5, 2, seed).unwrap();
            let mut rng = seed::rng(seed, &[3]);
            let word: Vec<Symbol> = (0..5).map(|_| rng.gen_range(0..4)).collect();
            let alpha = r(num, 5);
            let out = brute_force_list_recover(&c, &ListTuple::singletons(&word), alpha).unwrap();
            // Hamming-ball decoding, computed independently
            let mut ball: Vec<Vec<Symbol>> = c.codebook().unwrap().into_iter()
                .filter(|(_, cw)| cw.iter().zip(&word).filter(|(a, b)| a != b).count() as u64 * 5 <= num * 5)
                .map(|(m, _)| m)
                .collect();
            ball.sort();
            prop_assert_eq!(out, ball);
        }
    }
}
