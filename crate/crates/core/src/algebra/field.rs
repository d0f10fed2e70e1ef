//! GF(2^s) arithmetic backed by discrete log / antilog tables.
//!
//! An element is stored as the integer whose bits are the coefficients of a
//! polynomial over GF(2) in the basis {1, x, ..., x^(s-1)}; bit `b` is the
//! coefficient of x^b. Addition is XOR.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A field element, `0 <= value < q`.
pub type Symbol = u16;

/// Irreducible (primitive) polynomials used when the caller does not pick one.
/// Index `s - 1` holds the polynomial for GF(2^s), x^s term included.
pub const CANONICAL_POLYS: [u32; 16] = [
    0b11,     // x + 1
    0x7,      // x^2 + x + 1
    0xB,      // x^3 + x + 1
    0x13,     // x^4 + x + 1
    0x25,     // x^5 + x^2 + 1
    0x43,     // x^6 + x + 1
    0x89,     // x^7 + x^3 + 1
    0x11D,    // x^8 + x^4 + x^3 + x^2 + 1
    0x211,    // x^9 + x^4 + 1
    0x409,    // x^10 + x^3 + 1
    0x805,    // x^11 + x^2 + 1
    0x1053,   // x^12 + x^6 + x^4 + x + 1
    0x201B,   // x^13 + x^4 + x^3 + x + 1
    0x4443,   // x^14 + x^10 + x^6 + x + 1
    0x8003,   // x^15 + x + 1
    0x1100B,  // x^16 + x^12 + x^3 + x + 1
];

fn degree(p: u32) -> Option<u32> {
    (p != 0).then(|| 31 - p.leading_zeros())
}

/// Remainder of carry-less division `a mod b` over GF(2)[x].
fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = degree(b).expect("division by the zero polynomial");
    while let Some(da) = degree(a) {
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

/// Smallest nontrivial factor of `p` over GF(2), if any.
fn find_factor(p: u32) -> Option<u32> {
    let d = degree(p)?;
    // Every polynomial of degree 1..=d/2 (leading bit set) is a candidate.
    (1..=d / 2)
        .flat_map(|fd| (1u32 << fd)..(1u32 << (fd + 1)))
        .find(|&f| poly_rem(p, f) == 0)
}

/// Carry-less multiply of two reduced elements followed by reduction.
fn slow_mul(a: u32, b: u32, poly: u32, s: u32) -> u32 {
    let mut acc = 0u32;
    let mut a = a;
    let mut b = b;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> s & 1 == 1 {
            a ^= poly;
        }
    }
    acc
}

struct Tables {
    s: u32,
    poly: u32,
    /// log[a] for a in 1..q; log[0] unused.
    log: Vec<u32>,
    /// antilog[e] = g^e for e in 0..q-1.
    antilog: Vec<Symbol>,
}

/// GF(2^s) for 1 <= s <= 16. Cheap to clone; tables are shared.
#[derive(Clone)]
pub struct Field(Arc<Tables>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}; {:#x})", self.0.s, self.0.poly)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.s == other.0.s && self.0.poly == other.0.poly
    }
}

impl Eq for Field {}

impl Field {
    /// Builds GF(2^s) modulo `poly`, which must be irreducible of degree `s`.
    pub fn new(s: u32, poly: u32) -> Result<Self> {
        if !(1..=16).contains(&s) {
            return Err(Error::FieldExponent(s));
        }
        if degree(poly) != Some(s) {
            return Err(Error::PolynomialDegree { poly, s });
        }
        if let Some(factor) = find_factor(poly) {
            return Err(Error::Reducible { poly, factor });
        }
        let q = 1u32 << s;
        let order = (q - 1) as usize;

        // Irreducible is not necessarily primitive: search for a generator.
        let multiplicative_order = |g: u32| {
            let mut x = g;
            let mut steps = 1usize;
            while x != 1 {
                x = slow_mul(x, g, poly, s);
                steps += 1;
            }
            steps
        };
        let generator = (1..q)
            .find(|&g| multiplicative_order(g) == order)
            .expect("the multiplicative group of a finite field is cyclic");
        let mut antilog = vec![0 as Symbol; order];
        let mut x = 1u32;
        for slot in antilog.iter_mut() {
            *slot = x as Symbol;
            x = slow_mul(x, generator, poly, s);
        }
        let mut log = vec![0u32; q as usize];
        for (e, &a) in antilog.iter().enumerate() {
            log[a as usize] = e as u32;
        }
        Ok(Field(Arc::new(Tables {
            s,
            poly,
            log,
            antilog,
        })))
    }

    /// GF(2^s) with the shipped canonical polynomial.
    pub fn canonical(s: u32) -> Result<Self> {
        if !(1..=16).contains(&s) {
            return Err(Error::FieldExponent(s));
        }
        Self::new(s, CANONICAL_POLYS[s as usize - 1])
    }

    /// GF(q) for q a power of two, canonical polynomial.
    pub fn with_order(q: u32) -> Result<Self> {
        if !q.is_power_of_two() || q < 2 {
            return Err(Error::param("q", format!("{q} is not a power of two >= 2")));
        }
        Self::canonical(q.trailing_zeros())
    }

    pub fn exponent(&self) -> u32 {
        self.0.s
    }

    pub fn poly(&self) -> u32 {
        self.0.poly
    }

    /// Field size q = 2^s.
    pub fn order(&self) -> usize {
        1usize << self.0.s
    }

    pub fn contains(&self, a: u32) -> bool {
        (a as usize) < self.order()
    }

    pub fn check(&self, a: u32) -> Result<Symbol> {
        if self.contains(a) {
            Ok(a as Symbol)
        } else {
            Err(Error::NotAnElement {
                value: a,
                q: self.order() as u32,
            })
        }
    }

    /// All elements in value order.
    pub fn elements(&self) -> impl Iterator<Item = Symbol> {
        (0..self.order()).map(|v| v as Symbol)
    }

    #[inline]
    pub fn add(&self, a: Symbol, b: Symbol) -> Symbol {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: Symbol, b: Symbol) -> Symbol {
        if a == 0 || b == 0 {
            return 0;
        }
        let t = &*self.0;
        let e = t.log[a as usize] + t.log[b as usize];
        let order = t.antilog.len() as u32;
        t.antilog[(if e >= order { e - order } else { e }) as usize]
    }

    pub fn inv(&self, a: Symbol) -> Result<Symbol> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        let t = &*self.0;
        let order = t.antilog.len() as u32;
        let e = t.log[a as usize];
        Ok(t.antilog[((order - e) % order) as usize])
    }

    pub fn div(&self, a: Symbol, b: Symbol) -> Result<Symbol> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Symbol, e: u64) -> Symbol {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let t = &*self.0;
        let order = t.antilog.len() as u64;
        let idx = (t.log[a as usize] as u64 * (e % order)) % order;
        t.antilog[idx as usize]
    }

    /// Coefficient-basis expansion: bit `b` of `a` for b in 0..s.
    pub fn to_bits(&self, a: Symbol) -> Vec<Symbol> {
        (0..self.0.s).map(|b| (a >> b) & 1).collect()
    }

    pub fn from_bits(&self, bits: &[Symbol]) -> Result<Symbol> {
        if bits.len() != self.0.s as usize {
            return Err(Error::LengthMismatch {
                expected: self.0.s as usize,
                got: bits.len(),
            });
        }
        Ok(bits
            .iter()
            .enumerate()
            .fold(0, |acc, (b, &bit)| acc | ((bit & 1) << b)))
    }
}

pub fn field_make(s: u32, irreducible: u32) -> Result<Field> {
    Field::new(s, irreducible)
}

pub fn gf_mul(a: Symbol, b: Symbol, f: &Field) -> Symbol {
    f.mul(a, b)
}

pub fn gf_inv(a: Symbol, f: &Field) -> Result<Symbol> {
    f.inv(a)
}
