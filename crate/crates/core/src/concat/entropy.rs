//! Entropy functions and their inverses.

use serde::Serialize;

use crate::error::{Error, Result};

/// Target accuracy of the bisection inverses, measured in the image.
pub const INVERSE_TOLERANCE: f64 = 1e-12;

fn in_unit(name: &'static str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::param(name, format!("{x} is outside [0, 1]")))
    }
}

/// `x log(1/x)` in base 2 with the `0 log(1/0) = 0` convention.
fn plogp(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Binary entropy.
pub fn h2(x: f64) -> Result<f64> {
    in_unit("x", x)?;
    Ok(plogp(x) + plogp(1.0 - x))
}

/// q-ary entropy `x log_q(q-1) + x log_q(1/x) + (1-x) log_q(1/(1-x))`.
pub fn hq(x: f64, q: usize) -> Result<f64> {
    in_unit("x", x)?;
    if q < 2 {
        return Err(Error::param("q", format!("alphabet size {q} is below 2")));
    }
    let lq = (q as f64).log2();
    Ok((x * ((q - 1) as f64).log2() + plogp(x) + plogp(1.0 - x)) / lq)
}

/// Bisection for an increasing `f` on `[lo, hi]`, stopping once `f(mid)` is
/// within [`INVERSE_TOLERANCE`] of `y` or the interval stops shrinking.
fn bisect(f: impl Fn(f64) -> f64, y: f64, mut lo: f64, mut hi: f64) -> f64 {
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return mid;
        }
        let v = f(mid);
        if (v - y).abs() <= INVERSE_TOLERANCE {
            return mid;
        }
        if v < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Inverse of `h2` restricted to `[0, 1/2]`.
pub fn h2_inv(y: f64) -> Result<f64> {
    in_unit("y", y)?;
    if y == 0.0 {
        return Ok(0.0);
    }
    if y == 1.0 {
        return Ok(0.5);
    }
    Ok(bisect(|x| plogp(x) + plogp(1.0 - x), y, 0.0, 0.5))
}

/// `θ(x) = 1 - H2(1 - 2^(x-1))`, increasing from θ(0) = 0 to θ(1) = 1.
pub fn theta(x: f64) -> Result<f64> {
    in_unit("x", x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    Ok(theta_raw(x))
}

fn theta_raw(x: f64) -> f64 {
    let p = 1.0 - (x - 1.0).exp2();
    1.0 - (plogp(p) + plogp(1.0 - p))
}

pub fn theta_inv(y: f64) -> Result<f64> {
    in_unit("y", y)?;
    if y == 0.0 || y == 1.0 {
        return Ok(y);
    }
    Ok(bisect(theta_raw, y, 0.0, 1.0))
}

/// Numeric check of the condition under which list decoding a random
/// concatenation reaches half its distance:
///
/// `(1 - ρ_out - 2ε²/c) · H2⁻¹(1 - ρ_in - ε) >= (H2⁻¹(1 - ρ) - ε) / 2`
///
/// with `ρ_in = θ⁻¹(ρ + ε/2)` and `ρ_out = ρ / ρ_in`. The constant `c` is
/// left to the caller.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Feasibility {
    pub rho: f64,
    pub eps: f64,
    pub c: f64,
    pub rho_in: f64,
    pub rho_out: f64,
    /// `None` when `1 - ρ_in - ε` leaves the domain of `H2⁻¹`.
    pub lhs: Option<f64>,
    pub rhs: f64,
    /// Smallest inner message length the block sampling bound asks for.
    pub s_min: f64,
    pub feasible: bool,
}

pub fn gv_feasibility(rho: f64, eps: f64, c: f64) -> Result<Feasibility> {
    in_unit("rho", rho)?;
    if !(eps > 0.0) {
        return Err(Error::param("eps", format!("{eps} is not positive")));
    }
    if !(c > 0.0) {
        return Err(Error::param("c", format!("{c} is not positive")));
    }
    if rho == 0.0 {
        return Err(Error::param("rho", "must be positive"));
    }
    let rho_in = theta_inv(rho + eps / 2.0)
        .map_err(|_| Error::param("eps", format!("rho + eps/2 = {} exceeds 1", rho + eps / 2.0)))?;
    let rho_out = rho / rho_in;
    let inner = 1.0 - rho_in - eps;
    let lhs = (inner >= 0.0).then(|| (1.0 - rho_out - 2.0 * eps * eps / c) * h2_inv(inner).expect("in domain"));
    let rhs = (h2_inv(1.0 - rho)? - eps) / 2.0;
    let s_min = c * rho_in / (eps * eps * (1.0 - rho_out));
    Ok(Feasibility {
        rho,
        eps,
        c,
        rho_in,
        rho_out,
        lhs,
        rhs,
        s_min,
        feasible: rho_out <= 1.0 && lhs.is_some_and(|l| l >= rhs),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_values() {
        assert_eq!(h2(0.0).unwrap(), 0.0);
        assert_eq!(h2(1.0).unwrap(), 0.0);
        assert_eq!(h2(0.5).unwrap(), 1.0);
        assert!((h2(0.11).unwrap() - 0.4999).abs() < 1e-4);
        assert!((hq(0.5, 2).unwrap() - 1.0).abs() < 1e-15);
        // H_q peaks at 1 - 1/q with value 1
        assert!((hq(0.75, 4).unwrap() - 1.0).abs() < 1e-12);
        assert!(h2(-0.1).is_err() && h2(1.1).is_err() && hq(0.5, 1).is_err());
    }

    #[test]
    fn hq_is_monotone_below_one_minus_inverse_q() {
        for q in [2, 3, 4, 16] {
            let top = 1.0 - 1.0 / q as f64;
            let mut prev = hq(0.0, q).unwrap();
            for i in 1..=200 {
                let v = hq(top * i as f64 / 200.0, q).unwrap();
                assert!(v > prev);
                prev = v;
            }
        }
    }

    #[test]
    fn inverse_entropy() {
        assert_eq!(h2_inv(0.0).unwrap(), 0.0);
        assert_eq!(h2_inv(1.0).unwrap(), 0.5);
        assert!((h2_inv(0.75).unwrap() - 0.2145).abs() < 1e-3);
        for i in 1..1000 {
            let y = i as f64 / 1000.0;
            assert!((h2(h2_inv(y).unwrap()).unwrap() - y).abs() <= 1e-9);
        }
    }

    #[test]
    fn theta_values() {
        assert_eq!(theta(0.0).unwrap(), 0.0);
        assert_eq!(theta(1.0).unwrap(), 1.0);
        assert!((theta(0.5).unwrap() - 0.1276).abs() < 1e-3);
        for i in 1..100 {
            let x = i as f64 / 100.0;
            assert!((theta(theta_inv(x).unwrap()).unwrap() - x).abs() < 1e-9);
        }
        assert!(theta(2.0).is_err());
    }

    #[test]
    fn feasibility_is_consistent() {
        let f = gv_feasibility(0.02, 0.001, 1.0).unwrap();
        assert!((f.rho_in * f.rho_out - 0.02).abs() < 1e-12);
        assert!((theta(f.rho_in).unwrap() - 0.0205).abs() < 1e-9);
        assert!(f.s_min > 0.0);
        assert_eq!(f.feasible, f.lhs.unwrap() >= f.rhs);
        assert!(gv_feasibility(0.99, 0.1, 1.0).is_err());
        assert!(gv_feasibility(0.02, 0.0, 1.0).is_err());
    }
}
