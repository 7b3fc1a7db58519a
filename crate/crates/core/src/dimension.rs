//! Bowen's equation `P(-s phi) = 0` by bisection, on the full shift and on
//! avoidance levels.

use rayon::prelude::*;

use crate::avoidance::{avoidance_subshift, is_transitive_point};
use crate::error::{Error, Result};
use crate::potential::Potential;
use crate::pressure::LocalSystem;
use crate::symbolic::{EventuallyPeriodicPoint, Sft};

/// Bracket width at which bisection stops.
pub const ROOT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DimensionResult {
    pub s_star: f64,
    pub lo: f64,
    pub hi: f64,
    /// `|P(-s_star phi)|`.
    pub residual: f64,
    pub iterations: usize,
    /// The subshift is empty and `s_star` is 0 by convention.
    pub empty: bool,
}

fn positive_min(sft: &Sft, phi: &Potential) -> Result<f64> {
    let m = phi.min_value(sft)?;
    if m > 0.0 {
        Ok(m)
    } else {
        Err(Error::NonPositivePotential(m))
    }
}

/// `P(-s phi)`; requires `phi > 0`.
pub fn pressure_scaled(sft: &Sft, phi: &Potential, s: f64) -> Result<f64> {
    positive_min(sft, phi)?;
    Ok(LocalSystem::new(sft, phi)?.pressure(-s).value)
}

/// The unique zero of `s -> P(-s phi)`.
pub fn bowen_root(sft: &Sft, phi: &Potential) -> Result<DimensionResult> {
    let min = positive_min(sft, phi)?;
    root_of(&LocalSystem::new(sft, phi)?, min)
}

fn root_of(sys: &LocalSystem, min: f64) -> Result<DimensionResult> {
    if sys.is_empty() {
        return Ok(DimensionResult {
            s_star: 0.0,
            lo: 0.0,
            hi: 0.0,
            residual: 0.0,
            iterations: 0,
            empty: true,
        });
    }
    let h = sys.pressure(0.0).value;
    let mut lo = 0.0f64;
    let mut hi = (h / min).max(0.0);
    let mut iterations = 0;
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        if sys.pressure(-mid).value > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let s_star = 0.5 * (lo + hi);
    Ok(DimensionResult {
        s_star,
        lo,
        hi,
        residual: sys.pressure(-s_star).value.abs(),
        iterations,
        empty: false,
    })
}

/// Bowen roots of the avoidance levels `1..=n_max` of `z0`.
pub fn dimension_sweep(
    sft: &Sft,
    phi: &Potential,
    z0: &EventuallyPeriodicPoint,
    n_max: usize,
) -> Result<Vec<(usize, DimensionResult)>> {
    let min = positive_min(sft, phi)?;
    if is_transitive_point(sft, z0)? {
        return Err(Error::TransitivePoint(format!(
            "the orbit of {z0} is dense in {}",
            sft.label()
        )));
    }
    (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let level = avoidance_subshift(sft, z0, n)?;
            let lifted = phi.lift(sft, level.presentation())?;
            let sys = LocalSystem::new(level.sft(), &lifted)?;
            Ok((n, root_of(&sys, min)?))
        })
        .collect()
}

/// Largest level root: a lower bound for the dimension of the avoidance set.
pub fn sweep_lower_bound(levels: &[(usize, DimensionResult)]) -> f64 {
    levels.iter().map(|(_, d)| d.s_star).fold(0.0, f64::max)
}

pub fn dimension_csv(rows: &[(usize, DimensionResult)]) -> String {
    let mut out = String::from("n,s_star,lo,hi,residual\n");
    for (n, d) in rows {
        out.push_str(&format!("{},{},{},{},{}\n", n, d.s_star, d.lo, d.hi, d.residual));
    }
    out
}
