use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Knobs for the constants the recursion leaves implicit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Overrides {
    /// Multiplier on the row-sample size m.
    pub c_m: f64,
    /// Denominator in the per-level accuracy ratio `(δ / c_eps)`.
    pub c_eps: f64,
    /// Fixed m at every level, bypassing the formula (still clamped to [1, n]).
    pub m: Option<usize>,
}

impl Default for Overrides {
    fn default() -> Self {
        Overrides {
            c_m: 1.0,
            c_eps: 100.0,
            m: None,
        }
    }
}

/// Parameters of one level of the recursion; level 1 is the base code.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelParams {
    pub eps: f64,
    pub alpha: f64,
    /// Rows sampled at this level (0 at level 1, which samples nothing).
    pub m: usize,
    pub list_size: u128,
    pub query_bound: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub t: usize,
    pub delta: f64,
    pub alpha: f64,
    pub list_bound: usize,
    pub eps_tilde: f64,
    pub n: usize,
    pub overrides: Overrides,
    pub levels: Vec<LevelParams>,
}

impl Schedule {
    pub fn level(&self, i: usize) -> &LevelParams {
        &self.levels[i - 1]
    }

    pub fn top(&self) -> &LevelParams {
        self.levels.last().expect("t >= 1")
    }

    /// Radius the whole recursion tolerates.
    pub fn alpha_tilde(&self) -> f64 {
        self.top().alpha
    }
}

fn unit_interval(name: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x <= 1.0 {
        Ok(())
    } else {
        Err(Error::param(name, format!("{x} is not in (0, 1]")))
    }
}

/// Per-level parameters for recovering `C^{⊗t}` from an `(alpha, ell, L)`
/// globally list-recoverable `C` of length `n` and relative distance `delta`:
///
/// * `eps_i = (delta / c_eps)^(t-i) * eps_tilde`
/// * `alpha_1 = alpha`, `alpha_i = min(alpha_{i-1} * delta, alpha * eps_i) / 10`
/// * `m_i = ceil(c_m * ln(L / eps_i) / (delta * alpha_{i-1} * eps_i)^2)`, clamped to [1, n]
/// * `Q_1 = n`, `Q_i = m_i * Q_{i-1} + n`
/// * `L_1 = L`, `L_i = L_{i-1}^{m_i}` (saturating)
pub fn schedule(
    t: usize,
    delta: f64,
    alpha: f64,
    list_bound: usize,
    eps_tilde: f64,
    n: usize,
    overrides: Overrides,
) -> Result<Schedule> {
    if t == 0 {
        return Err(Error::param("t", "must be at least 1"));
    }
    unit_interval("delta", delta)?;
    unit_interval("alpha", alpha)?;
    unit_interval("eps_tilde", eps_tilde)?;
    if list_bound == 0 {
        return Err(Error::param("list_bound", "must be at least 1"));
    }
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    if !(overrides.c_m > 0.0) || !(overrides.c_eps > 0.0) {
        return Err(Error::param("overrides", "c_m and c_eps must be positive"));
    }
    if overrides.m == Some(0) {
        return Err(Error::param("m", "must be at least 1"));
    }

    let ratio = delta / overrides.c_eps;
    let eps = |i: usize| ratio.powi((t - i) as i32) * eps_tilde;
    let mut levels = vec![LevelParams {
        eps: eps(1),
        alpha,
        m: 0,
        list_size: list_bound as u128,
        query_bound: n as u128,
    }];
    for i in 2..=t {
        let prev = &levels[i - 2];
        let e = eps(i);
        let a = (prev.alpha * delta).min(alpha * e) / 10.0;
        if !(a > f64::EPSILON) {
            return Err(Error::VacuousRadius { level: i, alpha: a });
        }
        let m = match overrides.m {
            Some(m) => m,
            None => {
                let raw = overrides.c_m * (list_bound as f64 / e).ln()
                    / (delta * prev.alpha * e).powi(2);
                raw.ceil().max(1.0).min(n as f64) as usize
            }
        }
        .clamp(1, n);
        let list_size = prev.list_size.saturating_pow(m as u32);
        let query_bound = (m as u128)
            .saturating_mul(prev.query_bound)
            .saturating_add(n as u128);
        levels.push(LevelParams {
            eps: e,
            alpha: a,
            m,
            list_size,
            query_bound,
        });
    }
    Ok(Schedule {
        t,
        delta,
        alpha,
        list_bound,
        eps_tilde,
        n,
        overrides,
        levels,
    })
}
