use num_rational::Ratio;
use rand::Rng;

use super::field::{Field, Symbol};
use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::guard;
use crate::seed;

/// Attempts allowed when resampling a random generator up to full rank.
const MAX_RESAMPLES: usize = 100;

/// A linear code F^k -> F^n given by an n x k generator, `C(x) = G x`.
///
/// When systematization had to reorder coordinates, `permutation[j]` is the
/// coordinate of the original code that coordinate `j` of this code came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    field: Field,
    generator: Matrix,
    systematic: bool,
    permutation: Option<Vec<usize>>,
}

fn top_is_identity(g: &Matrix) -> bool {
    let k = g.cols();
    g.rows() >= k && (0..k).all(|r| (0..k).all(|c| g.get(r, c) == Symbol::from(r == c)))
}

fn generator_of<F>(k: usize, n: usize, map: F) -> Result<Matrix>
where
    F: Fn(&[Symbol]) -> Result<Vec<Symbol>>,
{
    let mut g = Matrix::zeros(n, k);
    let mut unit = vec![0; k];
    for j in 0..k {
        unit[j] = 1;
        let col = map(&unit)?;
        if col.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: col.len(),
            });
        }
        for (i, v) in col.into_iter().enumerate() {
            g.set(i, j, v);
        }
        unit[j] = 0;
    }
    Ok(g)
}

impl LinearCode {
    /// Code with generator `g` (n x k). The generator must have rank k.
    pub fn new(field: Field, generator: Matrix) -> Result<Self> {
        let code = Self::new_unrestricted(field, generator)?;
        let rank = code.generator.rank(&code.field);
        if rank != code.k() {
            return Err(Error::RankDeficient { rank, k: code.k() });
        }
        Ok(code)
    }

    /// Same as [`LinearCode::new`] without the rank check. Used for the inner
    /// maps of random concatenation, which are sampled unrestricted and may be
    /// non-injective.
    pub fn new_unrestricted(field: Field, generator: Matrix) -> Result<Self> {
        let (n, k) = (generator.rows(), generator.cols());
        if k == 0 || k > n {
            return Err(Error::param("k", format!("need 1 <= k <= n, got k={k}, n={n}")));
        }
        if let Some(&bad) = generator.entries().iter().find(|&&v| !field.contains(v as u32)) {
            return Err(Error::NotAnElement {
                value: bad as u32,
                q: field.order() as u32,
            });
        }
        let systematic = top_is_identity(&generator);
        Ok(LinearCode {
            field,
            generator,
            systematic,
            permutation: None,
        })
    }

    /// Attaches a coordinate permutation (see the type docs).
    pub fn with_permutation(mut self, permutation: Option<Vec<usize>>) -> Result<Self> {
        if let Some(p) = &permutation {
            let n = self.n();
            let mut seen = vec![false; n];
            if p.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: p.len(),
                });
            }
            for &i in p {
                if i >= n || std::mem::replace(&mut seen[i], true) {
                    return Err(Error::Malformed(format!("{p:?} is not a permutation of 0..{n}")));
                }
            }
        }
        self.permutation = permutation.filter(|p| p.iter().enumerate().any(|(j, &i)| i != j));
        Ok(self)
    }

    /// Builds the generator of a linear map by encoding unit vectors.
    pub fn from_linear_map<F>(field: Field, k: usize, n: usize, map: F) -> Result<Self>
    where
        F: Fn(&[Symbol]) -> Result<Vec<Symbol>>,
    {
        Self::new(field, generator_of(k, n, map)?)
    }

    /// [`LinearCode::from_linear_map`] without the rank check.
    pub fn from_linear_map_unrestricted<F>(field: Field, k: usize, n: usize, map: F) -> Result<Self>
    where
        F: Fn(&[Symbol]) -> Result<Vec<Symbol>>,
    {
        Self::new_unrestricted(field, generator_of(k, n, map)?)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn n(&self) -> usize {
        self.generator.rows()
    }

    pub fn k(&self) -> usize {
        self.generator.cols()
    }

    pub fn is_systematic(&self) -> bool {
        self.systematic
    }

    pub fn permutation(&self) -> Option<&[usize]> {
        self.permutation.as_deref()
    }

    pub fn rate(&self) -> Ratio<usize> {
        Ratio::new(self.k(), self.n())
    }

    /// Number of messages q^k, saturating.
    pub fn message_count(&self) -> u128 {
        let bits = self.field.exponent() as usize * self.k();
        if bits >= 128 {
            u128::MAX
        } else {
            1u128 << bits
        }
    }

    pub fn encode(&self, msg: &[Symbol]) -> Result<Vec<Symbol>> {
        self.generator.mul_vec(&self.field, msg)
    }

    /// Maps a word in this code's coordinate order back to the order of the
    /// code it was systematized from.
    pub fn to_original_order(&self, word: &[Symbol]) -> Vec<Symbol> {
        match &self.permutation {
            None => word.to_vec(),
            Some(p) => {
                let mut out = vec![0; word.len()];
                for (j, &i) in p.iter().enumerate() {
                    out[i] = word[j];
                }
                out
            }
        }
    }

    /// Equivalent code whose generator starts with the k x k identity.
    ///
    /// Pivot rows are the first k linearly independent rows of the generator;
    /// when they are not rows 0..k the coordinates are reordered (pivots
    /// first, then the rest in order) and the reordering is recorded.
    pub fn systematize(&self) -> Result<LinearCode> {
        let f = &self.field;
        let k = self.k();
        let pivots = self.generator.transpose().row_reduce(f);
        if pivots.len() < k {
            return Err(Error::RankDeficient {
                rank: pivots.len(),
                k,
            });
        }
        let basis = self.generator.select_rows(&pivots);
        let change = basis.inverse(f)?;
        let reduced = self.generator.mul(f, &change)?;

        let mut order = pivots.clone();
        order.extend((0..self.n()).filter(|i| !pivots.contains(i)));
        let generator = reduced.select_rows(&order);

        let composed: Vec<usize> = match &self.permutation {
            None => order,
            Some(old) => order.iter().map(|&j| old[j]).collect(),
        };
        let mut out = LinearCode::new(f.clone(), generator)?.with_permutation(Some(composed))?;
        debug_assert!(out.systematic);
        out.systematic = true;
        Ok(out)
    }

    /// Visits every (message, codeword) pair once, in Gray-code order over the
    /// F_2-basis of F_q^k. Each step costs one n-symbol XOR.
    pub fn for_each_codeword<F>(&self, mut visit: F) -> Result<()>
    where
        F: FnMut(&[Symbol], &[Symbol]),
    {
        guard::check(self.message_count())?;
        let s = self.field.exponent() as usize;
        let (n, k) = (self.n(), self.k());
        // deltas[b] = G * (2^(b % s) e_(b / s))
        let deltas: Vec<Vec<Symbol>> = (0..s * k)
            .map(|b| {
                let scale = 1 << (b % s);
                (0..n)
                    .map(|i| self.field.mul(self.generator.get(i, b / s), scale))
                    .collect()
            })
            .collect();
        let mut msg = vec![0 as Symbol; k];
        let mut cw = vec![0 as Symbol; n];
        visit(&msg, &cw);
        let total = self.message_count();
        for step in 1..total {
            let b = step.trailing_zeros() as usize;
            msg[b / s] ^= 1 << (b % s);
            for (c, d) in cw.iter_mut().zip(&deltas[b]) {
                *c ^= d;
            }
            visit(&msg, &cw);
        }
        Ok(())
    }

    /// All (message, codeword) pairs, sorted by message.
    pub fn codebook(&self) -> Result<Vec<(Vec<Symbol>, Vec<Symbol>)>> {
        let mut book = Vec::with_capacity(self.message_count().min(1 << 20) as usize);
        self.for_each_codeword(|m, c| book.push((m.to_vec(), c.to_vec())))?;
        book.sort_unstable();
        Ok(book)
    }

    /// Exact minimum Hamming weight over nonzero codewords by enumeration.
    pub fn min_distance(&self) -> Result<usize> {
        let mut best = self.n();
        let mut first = true;
        self.for_each_codeword(|_, cw| {
            if std::mem::take(&mut first) {
                return;
            }
            let w = cw.iter().filter(|&&v| v != 0).count();
            best = best.min(w);
        })?;
        Ok(best)
    }

    pub fn relative_distance(&self) -> Result<Ratio<usize>> {
        Ok(Ratio::new(self.min_distance()?, self.n()))
    }
}

/// Random linear code with uniform generator entries, resampled until the
/// generator has rank k. Deterministic in `seed`.
pub fn random_linear_code(f: &Field, n: usize, k: usize, seed: u64) -> Result<LinearCode> {
    if k == 0 || k > n {
        return Err(Error::param("k", format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    let mut rng = seed::rng(seed, &[seed::stage::CODE]);
    let q = f.order() as u32;
    for _ in 0..MAX_RESAMPLES {
        let entries = (0..n * k).map(|_| rng.gen_range(0..q) as Symbol).collect();
        let g = Matrix::from_entries(n, k, entries)?;
        if g.rank(f) == k {
            return LinearCode::new(f.clone(), g);
        }
    }
    Err(Error::ResamplingExhausted(MAX_RESAMPLES))
}

/// Random n x k generator with no rank condition.
pub fn random_linear_map(f: &Field, n: usize, k: usize, seed: u64) -> Result<LinearCode> {
    let mut rng = seed::rng(seed, &[seed::stage::CODE]);
    let q = f.order() as u32;
    let entries = (0..n * k).map(|_| rng.gen_range(0..q) as Symbol).collect();
    LinearCode::new_unrestricted(f.clone(), Matrix::from_entries(n, k, entries)?)
}

/// Reed-Solomon code: evaluations of polynomials of degree < k at the first
/// n field elements in value order. Row i of the generator is (a_i^0, ..., a_i^(k-1)).
pub fn rs_code(f: &Field, n: usize, k: usize) -> Result<LinearCode> {
    if n > f.order() {
        return Err(Error::param(
            "n",
            format!("Reed-Solomon length {n} exceeds field size {}", f.order()),
        ));
    }
    let mut g = Matrix::zeros(n, k);
    for (i, a) in f.elements().take(n).enumerate() {
        for j in 0..k {
            g.set(i, j, f.pow(a, j as u64));
        }
    }
    LinearCode::new(f.clone(), g)
}

pub fn identity_code(f: &Field, n: usize) -> Result<LinearCode> {
    LinearCode::new(f.clone(), Matrix::identity(n))
}

pub fn repetition_code(f: &Field, n: usize) -> Result<LinearCode> {
    LinearCode::new(f.clone(), Matrix::from_entries(n, 1, vec![1; n])?)
}
