//! Exhaustion of the non-dense orbit set `E(z0)` by avoidance subshifts.
//!
//! Level `n` is the subshift of sequences that never see the `n`-cylinder of
//! `z0`. Levels are nested, so their pressures increase to the pressure of
//! `E(z0)`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph;
use crate::potential::Potential;
use crate::pressure::{pressure, PressureResult};
use crate::symbolic::{EventuallyPeriodicPoint, ForbiddenShift, Sft, Symbol, Word};

/// Largest block alphabet an avoidance level may be presented on.
pub const MAX_LEVEL_BLOCKS: u128 = 1 << 22;

/// The first `n` symbols of `z0`.
pub fn cylinder_word(z0: &EventuallyPeriodicPoint, n: usize) -> Word {
    z0.prefix(n)
}

/// Sequences of `sft` in which `cylinder_word(z0, n)` never occurs.
pub fn avoidance_subshift(sft: &Sft, z0: &EventuallyPeriodicPoint, n: usize) -> Result<ForbiddenShift> {
    if n == 0 {
        return Err(Error::InvalidParams("avoidance level must be at least 1".into()));
    }
    let blocks = sft.count_words(n);
    if blocks > MAX_LEVEL_BLOCKS {
        return Err(Error::TooLarge {
            what: format!("admissible {n}-blocks of {}", sft.label()),
            count: blocks,
            limit: MAX_LEVEL_BLOCKS,
        });
    }
    sft.forbid_word(&cylinder_word(z0, n))
}

/// Whether the orbit of `z0` is dense in `sft`, i.e. the subshift is the finite orbit itself.
pub fn is_transitive_point(sft: &Sft, z0: &EventuallyPeriodicPoint) -> Result<bool> {
    z0.check_admissible_in(sft)?;
    let l = z0.orbit_len();
    Ok(essential_word_count(sft, l) == z0.orbit_windows(l).len() as u128
        && essential_word_count(sft, l + 1) == z0.orbit_windows(l + 1).len() as u128)
}

// words of length n that extend to infinite sequences
fn essential_word_count(sft: &Sft, n: usize) -> u128 {
    let succ = sft.successor_graph();
    let alive = graph::essential_states(&succ);
    let mut counts: Vec<u128> = alive.iter().map(|&a| u128::from(a)).collect();
    for _ in 1..n {
        let mut next = vec![0u128; counts.len()];
        for (u, list) in succ.iter().enumerate() {
            if !alive[u] || counts[u] == 0 {
                continue;
            }
            for &v in list {
                if alive[v] {
                    next[v] = next[v].saturating_add(counts[u]);
                }
            }
        }
        counts = next;
    }
    counts.iter().fold(0u128, |a, &c| a.saturating_add(c))
}

/// Pressure of `phi` restricted to an avoidance level.
pub fn level_pressure(base: &Sft, level: &ForbiddenShift, phi: &Potential) -> Result<PressureResult> {
    let lifted = phi.lift(base, level.presentation())?;
    pressure(level.sft(), &lifted)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AvoidanceLevel {
    pub n: usize,
    pub pressure: PressureResult,
    /// `full_pressure - pressure`; `inf` for an empty level.
    pub gap_to_full: f64,
    pub empty: bool,
}

#[derive(Clone, Debug)]
pub struct AvoidanceSweep {
    pub z0: EventuallyPeriodicPoint,
    pub base: Sft,
    pub phi: Potential,
    pub levels: Vec<AvoidanceLevel>,
    pub full_pressure: f64,
}

impl AvoidanceSweep {
    /// Every computed level is empty.
    pub fn is_empty(&self) -> bool {
        self.levels.iter().all(|l| l.empty)
    }

    /// The largest level pressure, a lower bound for the pressure of `E(z0)`.
    pub fn best_pressure(&self) -> f64 {
        self.levels
            .iter()
            .map(|l| l.pressure.value)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,pressure,error_bound,gap_to_full,empty_flag\n");
        for l in &self.levels {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                l.n,
                l.pressure.value,
                l.pressure.error_bound,
                l.gap_to_full,
                u8::from(l.empty)
            ));
        }
        out
    }
}

/// Pressures of levels `1..=n_max` against the full pressure.
pub fn avoidance_pressure_sweep(
    sft: &Sft,
    phi: &Potential,
    z0: &EventuallyPeriodicPoint,
    n_max: usize,
) -> Result<AvoidanceSweep> {
    if is_transitive_point(sft, z0)? {
        return Err(Error::TransitivePoint(format!(
            "the orbit of {z0} is dense in {}: its closure is the whole space, so there is nothing to avoid",
            sft.label()
        )));
    }
    let full = pressure(sft, phi)?.value;
    let levels = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let level = avoidance_subshift(sft, z0, n)?;
            let p = level_pressure(sft, &level, phi)?;
            Ok(AvoidanceLevel {
                n,
                gap_to_full: full - p.value,
                empty: p.is_empty(),
                pressure: p,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AvoidanceSweep {
        z0: z0.clone(),
        base: sft.clone(),
        phi: phi.clone(),
        levels,
        full_pressure: full,
    })
}

/// Words of length `len` admissible in `sft` that avoid `w`; the count behind
/// brute-force level pressures.
pub fn count_avoiding_words(sft: &Sft, w: &[Symbol], len: usize) -> u128 {
    let mut count = 0u128;
    sft.visit_words(len, |x| {
        if !x.windows(w.len()).any(|win| win == w) {
            count += 1;
        }
    });
    count
}
