//! Exhaustive checks of the construction on built levels.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::potential::Potential;
use crate::symbolic::{Sft, Symbol};

use super::family::SeparatedFamily;
use super::points::{point_count, unpack_into, PointSet, SortedPoints};
use super::report::{CheckLine, Status};
use super::schedule::MoranSchedule;
use super::{neumaier_sum, MoranParams};

const CHUNK: usize = 1 << 14;
/// Relative tolerance of the mass identities and the log-domain ball bounds.
pub const MASS_TOL: f64 = 1e-9;
const MAX_LISTED: usize = 5;

/// `#P_k = prod (#S_i)^{N_i}`.
pub fn check_cardinality(points: &PointSet, families: &[SeparatedFamily], schedule: &MoranSchedule) -> CheckLine {
    let expect = point_count(families, schedule, points.k);
    let formula = (0..points.k)
        .map(|i| format!("{}^{}", families[i].len(), schedule.big_n[i]))
        .collect::<Vec<_>>()
        .join(" * ");
    CheckLine::new(
        format!("cardinality k={}", points.k),
        Status::from(points.len() as u128 == expect),
        format!("#P_{} = {} = {formula} = {expect}", points.k, points.len()),
    )
}

/// Words of distinct tuples differ on `[0, t_k)`.
pub fn check_separation(points: &SortedPoints) -> CheckLine {
    let n = points.points.len();
    let violations: Vec<usize> = (1..n)
        .filter(|&i| {
            points.common_prefix(points.points[i - 1].0, points.points[i].0) >= points.prefix_len
        })
        .collect();
    let pairs = (n as u128) * (n as u128).saturating_sub(1) / 2;
    let mut detail = format!(
        "{pairs} pairs of P_{} (t_{} = {}), {} coincide on [0, t_{})",
        points.k,
        points.k,
        points.prefix_len,
        violations.len(),
        points.k
    );
    for &i in violations.iter().take(MAX_LISTED) {
        detail.push_str(&format!("; {} = {}", points.word(i - 1), points.word(i)));
    }
    CheckLine::new(
        format!("separation k={}", points.k),
        Status::from(violations.is_empty()),
        detail,
    )
}

fn failure_table(pattern: &[Symbol]) -> Vec<usize> {
    let mut fail = vec![0usize; pattern.len()];
    let mut k = 0;
    for i in 1..pattern.len() {
        while k > 0 && pattern[i] != pattern[k] {
            k = fail[k - 1];
        }
        if pattern[i] == pattern[k] {
            k += 1;
        }
        fail[i] = k;
    }
    fail
}

fn first_occurrence(text: &[Symbol], pattern: &[Symbol], fail: &[usize]) -> Option<usize> {
    let mut k = 0;
    for (i, &s) in text.iter().enumerate() {
        while k > 0 && s != pattern[k] {
            k = fail[k - 1];
        }
        if s == pattern[k] {
            k += 1;
        }
        if k == pattern.len() {
            return Some(i + 1 - k);
        }
    }
    None
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct ScanTally {
    scanned: usize,
    inadmissible: Vec<usize>,
    hits: Vec<(usize, usize)>,
}

impl ScanTally {
    fn merge(mut self, other: ScanTally) -> ScanTally {
        self.scanned += other.scanned;
        self.inadmissible.extend(other.inadmissible);
        self.hits.extend(other.hits);
        self
    }
}

/// No word contains the `(M + 2m + e)`-prefix of `z0` inside `[0, t_k)`;
/// every word is admissible. `injected` words are scanned after the points.
pub fn check_avoidance(
    sft: &Sft,
    points: &PointSet,
    params: &MoranParams,
    injected: &[Vec<Symbol>],
) -> CheckLine {
    let window = params.big_m + 2 * params.m + params.e as usize;
    let pattern = params.z0.prefix(window).into_inner();
    let fail = failure_table(&pattern);
    let t = points.prefix_len;
    let tally = points
        .keys
        .par_chunks(CHUNK)
        .enumerate()
        .map(|(c, chunk)| {
            let mut buf = vec![0 as Symbol; points.len];
            let mut tally = ScanTally::default();
            for (off, &key) in chunk.iter().enumerate() {
                unpack_into(key, points.len, points.bits, &mut buf);
                let idx = c * CHUNK + off;
                tally.scanned += 1;
                if !sft.is_admissible(&buf) {
                    tally.inadmissible.push(idx);
                }
                if let Some(pos) = first_occurrence(&buf[..t], &pattern, &fail) {
                    tally.hits.push((idx, pos));
                }
            }
            tally
        })
        .reduce(ScanTally::default, ScanTally::merge);
    let mut tally = tally;
    for (j, w) in injected.iter().enumerate() {
        tally.scanned += 1;
        let end = t.min(w.len());
        if let Some(pos) = first_occurrence(&w[..end], &pattern, &fail) {
            tally.hits.push((points.len() + j, pos));
        }
    }
    let mut detail = format!(
        "{} words of P_{} scanned on [0, {t}) for the {window}-prefix of z0; {} occurrences, {} inadmissible",
        tally.scanned,
        points.k,
        tally.hits.len(),
        tally.inadmissible.len()
    );
    if !injected.is_empty() {
        detail.push_str(&format!("; {} adversarial word(s) injected", injected.len()));
    }
    for &(idx, pos) in tally.hits.iter().take(MAX_LISTED) {
        let origin = if idx >= points.len() { "injected" } else { "point" };
        detail.push_str(&format!("; {origin} #{idx} at position {pos}"));
    }
    CheckLine::new(
        format!("avoidance k={}", points.k),
        Status::from(tally.hits.is_empty() && tally.inadmissible.is_empty()),
        detail,
    )
}

/// Every point of `P_{k+1}` extends exactly one point of `P_k` on `[0, t_k)`,
/// namely the one indexed by its leading digits; `mu_{k+1}(F_k) = 1`.
pub fn check_prefix_consistency(lower: &PointSet, upper: &PointSet) -> CheckLine {
    let ratio = upper.len() / lower.len().max(1);
    let t = lower.prefix_len;
    let up_shift = upper.bits as usize * (upper.len - t);
    let low_shift = lower.bits as usize * (lower.len - t);
    let per_chunk: Vec<(usize, f64)> = upper
        .keys
        .par_chunks(CHUNK)
        .zip(upper.weights.par_chunks(CHUNK))
        .enumerate()
        .map(|(c, (kc, wc))| {
            let mut bad = 0usize;
            let mut mass = Vec::with_capacity(kc.len());
            for (off, (&key, &w)) in kc.iter().zip(wc).enumerate() {
                let i = c * CHUNK + off;
                let parent = lower.keys[i / ratio] >> low_shift;
                if key >> up_shift == parent {
                    mass.push(w);
                } else {
                    bad += 1;
                }
            }
            (bad, neumaier_sum(&mass))
        })
        .collect();
    let mismatches: usize = per_chunk.iter().map(|c| c.0).sum();
    let matched: Vec<f64> = per_chunk.iter().map(|c| c.1).collect();
    let matched_mass = neumaier_sum(&matched);
    let total = chunked_sum(&upper.weights);
    let frac = matched_mass / total;
    CheckLine::new(
        format!("prefix consistency k={}->{}", lower.k, upper.k),
        Status::from(mismatches == 0 && upper.len() == ratio * lower.len()),
        format!(
            "{} points of P_{} projected to P_{} on [0, {t}); {mismatches} mismatches; mu_{}(F_{}) = {frac}",
            upper.len(),
            upper.k,
            lower.k,
            upper.k,
            lower.k
        ),
    )
}

/// Deterministic compensated sum over fixed chunks.
pub(crate) fn chunked_sum(values: &[f64]) -> f64 {
    let partial: Vec<f64> = values.par_chunks(CHUNK).map(neumaier_sum).collect();
    neumaier_sum(&partial)
}

/// `mu_k`: weights `L_k`, normalizer `kappa_k` by summation and by product.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomicMeasure {
    pub k: usize,
    pub support: usize,
    pub log_kappa: f64,
    pub log_kappa_product: f64,
}

impl AtomicMeasure {
    /// `|kappa_sum / kappa_product - 1|`.
    pub fn relative_error(&self) -> f64 {
        (self.log_kappa - self.log_kappa_product).exp_m1().abs()
    }
}

/// Sums the weights of `P_k` and compares with `prod M_i^{N_i}`.
pub fn build_measure(points: &PointSet, families: &[SeparatedFamily], schedule: &MoranSchedule) -> Result<AtomicMeasure> {
    let log_kappa = points.log_scale + chunked_sum(&points.weights).ln();
    let log_kappa_product: f64 = (0..points.k)
        .map(|i| schedule.big_n[i] as f64 * families[i].log_mass)
        .sum();
    let m = AtomicMeasure {
        k: points.k,
        support: points.len(),
        log_kappa,
        log_kappa_product,
    };
    let err = m.relative_error();
    if err.is_nan() || err > MASS_TOL {
        return Err(Error::Consistency(format!(
            "kappa_{} by summation exp({log_kappa}) differs from prod M_i^N_i = exp({log_kappa_product})",
            points.k
        )));
    }
    Ok(m)
}

pub fn measure_line(m: &AtomicMeasure) -> CheckLine {
    CheckLine::new(
        format!("kappa product k={}", m.k),
        Status::from(m.relative_error() <= MASS_TOL),
        format!(
            "log kappa_{} = {} by summation over {} points, {} by product; relative error {:e}",
            m.k,
            m.log_kappa,
            m.support,
            m.log_kappa_product,
            m.relative_error()
        ),
    )
}

/// Outcome of the ball-bound scan for one pair `(k, k + p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BallBoundReport {
    pub k: usize,
    pub measure_level: usize,
    pub n_range: (usize, usize),
    pub balls: u64,
    pub bound_violations: u64,
    /// Largest `log mu(B) - log bound` over all balls.
    pub bound_worst: f64,
    pub derived_checked: u64,
    pub derived_violations: u64,
    pub derived_worst: f64,
    /// `n` values where the derived bound's hypothesis `(||phi|| + C) b_n <= n eta` holds.
    pub derived_ns: Vec<usize>,
}

/// For every `t_k <= n < t_{k+1}` and every support-centered ball
/// `B_n(q, eps)` (the cylinder of length `n + e`), compares `mu_{k+p}(B)` with
/// `exp(S_n phi(q) + 2n Var + ||phi|| b_n) / (kappa_k M_{k+1}^j)` and, where its
/// hypothesis holds, with `exp(-n(C - 2 eta) + S_n phi(q) + 2n Var)`.
#[allow(clippy::too_many_arguments)]
pub fn check_ball_bound(
    sft: &Sft,
    phi: &Potential,
    params: &MoranParams,
    schedule: &MoranSchedule,
    families: &[SeparatedFamily],
    measures: &[AtomicMeasure],
    points: &SortedPoints,
    k: usize,
) -> Result<BallBoundReport> {
    if phi.depth() != 1 {
        return Err(Error::InvalidPotential("ball bound needs a depth-1 potential".into()));
    }
    let level = points.k;
    if k == 0 || k >= level {
        return Err(Error::InvalidParams(format!(
            "ball bound at k = {k} needs a measure of a later level, got {level}"
        )));
    }
    let e = params.e as usize;
    let lo = schedule.t_len(k);
    let hi = schedule.t_len(k + 1);
    let rows = hi - lo;
    let var = phi.variation(sft, params.e.saturating_sub(1))?;
    let norm = phi.sup_norm();
    let vals: Vec<f64> = (0..sft.size() as Symbol)
        .map(|s| phi.value(&[s]).unwrap_or(0.0))
        .collect();
    let log_kappa_k = measures[k - 1].log_kappa;
    let log_mass_next = families[k].log_mass;
    let log_kappa_level = measures[level - 1].log_kappa;

    // per-n constants
    let bound_const: Vec<f64> = (lo..hi)
        .map(|n| {
            let j = schedule.complete_segments(k, n) as f64;
            -log_kappa_k - j * log_mass_next
                + 2.0 * n as f64 * var
                + norm * schedule.b(k, n) as f64
        })
        .collect();
    let derived_ok: Vec<bool> = (lo..hi)
        .map(|n| (norm + params.c) * schedule.b(k, n) as f64 <= n as f64 * params.eta)
        .collect();

    let mut report = BallBoundReport {
        k,
        measure_level: level,
        n_range: (lo, hi),
        balls: 0,
        bound_violations: 0,
        bound_worst: f64::NEG_INFINITY,
        derived_checked: 0,
        derived_violations: 0,
        derived_worst: f64::NEG_INFINITY,
        derived_ns: (lo..hi).filter(|&n| derived_ok[n - lo]).collect(),
    };
    let close = |r: usize, mass: f64, s: f64, report: &mut BallBoundReport| {
        let n = lo + r;
        let log_mu = mass.ln() + points.log_scale - log_kappa_level;
        let bound = bound_const[r] + s;
        let excess = log_mu - bound;
        report.balls += 1;
        report.bound_worst = report.bound_worst.max(excess);
        if excess > MASS_TOL * bound.abs().max(1.0) {
            report.bound_violations += 1;
        }
        if derived_ok[r] {
            let nf = n as f64;
            let derived = -nf * (params.c - 2.0 * params.eta) + s + 2.0 * nf * var;
            let excess = log_mu - derived;
            report.derived_checked += 1;
            report.derived_worst = report.derived_worst.max(excess);
            if excess > MASS_TOL * derived.abs().max(1.0) {
                report.derived_violations += 1;
            }
        }
    };

    let mut mass = vec![0.0f64; rows];
    let mut sums = vec![0.0f64; rows];
    let mut open = false;
    let mut buf = vec![0 as Symbol; points.len];
    let mut prefix = vec![0.0f64; hi + 1];
    let mut prev: Option<u128> = None;
    for &(key, w) in &points.points {
        let lcp = prev.map_or(0, |p| points.common_prefix(p, key));
        prev = Some(key);
        // rows whose cylinder (length n + e) changes at this point
        let first_new = if lcp + 1 > lo + e { lcp + 1 - e - lo } else { 0 };
        if first_new < rows {
            unpack_into(key, points.len, points.bits, &mut buf);
            for i in 0..hi {
                prefix[i + 1] = prefix[i] + vals[buf[i] as usize];
            }
        }
        for r in 0..rows {
            if r >= first_new {
                if open {
                    close(r, mass[r], sums[r], &mut report);
                }
                mass[r] = w;
                sums[r] = prefix[lo + r];
            } else {
                mass[r] += w;
            }
        }
        open = true;
    }
    if open {
        for r in 0..rows {
            close(r, mass[r], sums[r], &mut report);
        }
    }
    Ok(report)
}

pub fn ball_bound_lines(r: &BallBoundReport) -> Vec<CheckLine> {
    let mut lines = vec![CheckLine::new(
        format!("ball bound k={} p={}", r.k, r.measure_level - r.k),
        Status::from(r.bound_violations == 0),
        format!(
            "{} balls B_n(q, eps) with {} <= n < {} under mu_{}; {} violations; max log(mu/bound) = {}",
            r.balls,
            r.n_range.0,
            r.n_range.1,
            r.measure_level,
            r.bound_violations,
            r.bound_worst
        ),
    )];
    let status = if r.derived_checked == 0 {
        Status::NotApplicable
    } else {
        Status::from(r.derived_violations == 0)
    };
    let detail = if r.derived_checked == 0 {
        "hypothesis (||phi|| + C) b_n <= n eta holds for no n in range".to_string()
    } else {
        format!(
            "{} balls for n in {:?}; {} violations; max log(mu/bound) = {}",
            r.derived_checked, r.derived_ns, r.derived_violations, r.derived_worst
        )
    };
    lines.push(CheckLine::new(
        format!("derived ball bound k={} p={}", r.k, r.measure_level - r.k),
        status,
        detail,
    ));
    lines
}
