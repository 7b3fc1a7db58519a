//! Topological pressure, Perron-Frobenius data, and Gibbs-Markov measures.
//!
//! For an SFT with a locally constant potential, `P_top(phi) = log rho(B)`
//! where `B[u][v] = A[u][v] * exp(phi(v))` on the depth-recoded subshift.
//! Roots are found by power iteration per strongly connected component and
//! certified by the Collatz-Wielandt bracket
//! `min_i (Bx)_i / x_i <= rho <= max_i (Bx)_i / x_i`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph;
use crate::potential::Potential;
use crate::symbolic::{BlockPresentation, Sft, Symbol, Word};

/// Relative bracket width at which power iteration stops.
const BRACKET_TOL: f64 = 1e-14;
const MAX_ITERATIONS: usize = 200_000;
/// Largest number of words `pressure_by_words` will enumerate.
pub const MAX_ENUMERATED_WORDS: u128 = 10_000_000;

/// Nonnegative matrix stored by rows as `(column, weight)` pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedMatrix {
    size: usize,
    rows: Vec<Vec<(usize, f64)>>,
}

impl WeightedMatrix {
    pub fn from_dense(dense: &[Vec<f64>]) -> Self {
        let rows = dense
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &w)| w != 0.0)
                    .map(|(j, &w)| (j, w))
                    .collect()
            })
            .collect();
        WeightedMatrix {
            size: dense.len(),
            rows,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, u: usize, v: usize) -> f64 {
        self.rows[u]
            .iter()
            .find(|(j, _)| *j == v)
            .map_or(0.0, |&(_, w)| w)
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.size]; self.size];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, w) in row {
                d[i][j] = w;
            }
        }
        d
    }

    fn transpose(&self) -> WeightedMatrix {
        let mut rows = vec![Vec::new(); self.size];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, w) in row {
                rows[j].push((i, w));
            }
        }
        WeightedMatrix {
            size: self.size,
            rows,
        }
    }

    fn support(&self) -> Vec<Vec<usize>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&(j, _)| j).collect())
            .collect()
    }
}

/// Perron root with its certified bracket.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralBracket {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
    /// No cycle in the support: the root is 0.
    pub empty: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PressureMethod {
    Spectral,
    WordSum,
}

impl PressureMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            PressureMethod::Spectral => "spectral",
            PressureMethod::WordSum => "word_sum",
        }
    }
}

/// A pressure value. `value` is `-inf` for an empty subshift.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PressureResult {
    pub value: f64,
    pub method: PressureMethod,
    pub error_bound: f64,
    pub iterations: usize,
}

impl PressureResult {
    pub fn is_empty(&self) -> bool {
        self.value == f64::NEG_INFINITY
    }
}

/// Cyclic strongly connected components with their periods.
#[derive(Clone, Debug)]
struct Components {
    comps: Vec<(Vec<usize>, usize)>,
}

impl Components {
    fn of(support: &[Vec<usize>]) -> Self {
        let mut member = vec![false; support.len()];
        let comps = graph::strongly_connected_components(support)
            .into_iter()
            .filter(|c| graph::has_cycle(support, c))
            .map(|c| {
                for &u in &c {
                    member[u] = true;
                }
                let p = graph::component_period(support, &c, &member);
                for &u in &c {
                    member[u] = false;
                }
                (c, p)
            })
            .collect();
        Components { comps }
    }
}

struct Perron {
    lower: f64,
    upper: f64,
    iterations: usize,
    // indexed like the component
    vector: Vec<f64>,
}

fn perron_on_component(b: &WeightedMatrix, comp: &[usize], period: usize) -> Perron {
    let mut local = vec![usize::MAX; b.size];
    for (i, &u) in comp.iter().enumerate() {
        local[u] = i;
    }
    let rows: Vec<Vec<(usize, f64)>> = comp
        .iter()
        .map(|&u| {
            b.rows[u]
                .iter()
                .filter(|(j, _)| local[*j] != usize::MAX)
                .map(|&(j, w)| (local[j], w))
                .collect()
        })
        .collect();
    let n = comp.len();
    // periodic components iterate on B + I, which keeps the eigenvector
    let shift = if period > 1 { 1.0 } else { 0.0 };
    let mut x = vec![1.0f64; n];
    let mut y = vec![0.0f64; n];
    let mut lower = 0.0f64;
    let mut upper = f64::INFINITY;
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for (i, row) in rows.iter().enumerate() {
            let s: f64 = row.iter().map(|&(j, w)| w * x[j]).sum();
            y[i] = s;
            let r = s / x[i];
            lo = lo.min(r);
            hi = hi.max(r);
        }
        lower = lower.max(lo);
        upper = upper.min(hi);
        let mut norm = 0.0f64;
        for i in 0..n {
            y[i] += shift * x[i];
            norm = norm.max(y[i]);
        }
        for i in 0..n {
            x[i] = y[i] / norm;
        }
        if upper - lower <= BRACKET_TOL * upper {
            break;
        }
    }
    Perron {
        lower,
        upper,
        iterations,
        vector: x,
    }
}

fn radius_over(b: &WeightedMatrix, comps: &Components) -> SpectralBracket {
    let mut best: Option<SpectralBracket> = None;
    let mut iterations = 0;
    for (comp, period) in &comps.comps {
        let p = perron_on_component(b, comp, *period);
        iterations += p.iterations;
        let candidate = SpectralBracket {
            value: 0.5 * (p.lower + p.upper),
            lower: p.lower,
            upper: p.upper,
            iterations: 0,
            empty: false,
        };
        if best.is_none_or(|b| candidate.value > b.value) {
            best = Some(candidate);
        }
    }
    match best {
        Some(mut b) => {
            b.iterations = iterations;
            b
        }
        None => SpectralBracket {
            value: 0.0,
            lower: 0.0,
            upper: 0.0,
            iterations: 0,
            empty: true,
        },
    }
}

/// Perron root of a nonnegative matrix; reducible matrices take the maximum
/// over strongly connected components.
pub fn spectral_radius(b: &WeightedMatrix) -> SpectralBracket {
    let comps = Components::of(&b.support());
    radius_over(b, &comps)
}

/// An SFT recoded to depth 1 together with the per-state potential values.
#[derive(Clone, Debug)]
pub(crate) struct LocalSystem {
    sft: Sft,
    values: Vec<f64>,
    presentation: Option<BlockPresentation>,
    comps: Components,
}

impl LocalSystem {
    pub(crate) fn new(sft: &Sft, phi: &Potential) -> Result<Self> {
        if phi.alphabet() != sft.size() {
            return Err(Error::InvalidPotential(format!(
                "potential defined on {} symbols, subshift has {}",
                phi.alphabet(),
                sft.size()
            )));
        }
        let (recoded, lifted, presentation) = if phi.depth() > 1 {
            let pres = sft.higher_block(phi.depth());
            let lifted = phi.lift(sft, &pres)?;
            (pres.sft().clone(), lifted, Some(pres))
        } else {
            (sft.clone(), phi.clone(), None)
        };
        let values: Vec<f64> = (0..recoded.size() as Symbol)
            .map(|s| {
                lifted.value(&[s]).ok_or_else(|| {
                    Error::InvalidPotential(format!("no value on symbol {s}"))
                })
            })
            .collect::<Result<_>>()?;
        let comps = Components::of(&recoded.successor_graph());
        Ok(LocalSystem {
            sft: recoded,
            values,
            presentation,
            comps,
        })
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.comps.comps.is_empty()
    }

    /// `exp(scale * phi(v)) / exp(offset)` on every transition `u -> v`.
    fn matrix(&self, scale: f64, offset: f64) -> WeightedMatrix {
        let rows = (0..self.sft.size())
            .map(|u| {
                self.sft
                    .successors(u as Symbol)
                    .iter()
                    .map(|&v| (v as usize, (scale * self.values[v as usize] - offset).exp()))
                    .collect()
            })
            .collect();
        WeightedMatrix {
            size: self.sft.size(),
            rows,
        }
    }

    /// `P(scale * phi)` with its log-bracket.
    pub(crate) fn pressure(&self, scale: f64) -> PressureResult {
        if self.is_empty() {
            return PressureResult {
                value: f64::NEG_INFINITY,
                method: PressureMethod::Spectral,
                error_bound: 0.0,
                iterations: 0,
            };
        }
        let offset = self
            .values
            .iter()
            .map(|v| scale * v)
            .fold(f64::NEG_INFINITY, f64::max);
        let b = self.matrix(scale, offset);
        let r = radius_over(&b, &self.comps);
        PressureResult {
            value: offset + r.value.ln(),
            method: PressureMethod::Spectral,
            error_bound: r.upper.ln() - r.lower.ln(),
            iterations: r.iterations,
        }
    }
}

/// Weighted transfer matrix `B[u][v] = A[u][v] exp(phi(v))` on the depth-recoded SFT.
pub fn transfer_matrix(sft: &Sft, phi: &Potential) -> Result<WeightedMatrix> {
    Ok(LocalSystem::new(sft, phi)?.matrix(1.0, 0.0))
}

/// `P_top(phi) = log rho(B)`; `-inf` for an empty subshift.
pub fn pressure(sft: &Sft, phi: &Potential) -> Result<PressureResult> {
    Ok(LocalSystem::new(sft, phi)?.pressure(1.0))
}

/// `(1/n) log sum exp(S_n phi)` over admissible `(n + depth - 1)`-words: the
/// separated-set sum with every cylinder represented once.
///
/// `error_bound` covers floating-point summation only; the finite-`n` bias is
/// not bounded.
pub fn pressure_by_words(sft: &Sft, phi: &Potential, n: usize) -> Result<PressureResult> {
    if phi.alphabet() != sft.size() {
        return Err(Error::InvalidPotential("alphabet mismatch".into()));
    }
    if n == 0 {
        return Err(Error::InvalidParams("n must be positive".into()));
    }
    let depth = phi.depth();
    let len = n + depth - 1;
    let count = sft.count_words(len);
    if count > MAX_ENUMERATED_WORDS {
        return Err(Error::TooLarge {
            what: format!("admissible words of length {len}"),
            count,
            limit: MAX_ENUMERATED_WORDS,
        });
    }
    if count == 0 {
        return Ok(PressureResult {
            value: f64::NEG_INFINITY,
            method: PressureMethod::WordSum,
            error_bound: 0.0,
            iterations: 0,
        });
    }
    let top = phi
        .entries()
        .iter()
        .map(|(_, v)| *v)
        .fold(f64::NEG_INFINITY, f64::max);
    let offset = n as f64 * top;
    let mut total = 0.0f64;
    let mut err = None;
    sft.visit_words(len, |w| match phi.birkhoff_sum(sft, w) {
        Ok(s) => total += (s - offset).exp(),
        Err(e) => {
            if err.is_none() {
                err = Some(e);
            }
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(PressureResult {
        value: (offset + total.ln()) / n as f64,
        method: PressureMethod::WordSum,
        error_bound: f64::EPSILON * count as f64 / n as f64,
        iterations: count as usize,
    })
}

/// Stationary Markov chain on the depth-recoded states.
#[derive(Clone, Debug)]
pub struct MarkovMeasure {
    states: Vec<Word>,
    transitions: Vec<Vec<(usize, f64)>>,
    stationary: Vec<f64>,
}

impl MarkovMeasure {
    /// State labels as words over the original alphabet.
    pub fn states(&self) -> &[Word] {
        &self.states
    }

    pub fn stationary(&self) -> &[f64] {
        &self.stationary
    }

    pub fn transition(&self, u: usize, v: usize) -> f64 {
        self.transitions[u]
            .iter()
            .find(|(j, _)| *j == v)
            .map_or(0.0, |&(_, p)| p)
    }

    pub fn transition_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.states.len();
        let mut m = vec![vec![0.0; n]; n];
        for (u, row) in self.transitions.iter().enumerate() {
            for &(v, p) in row {
                m[u][v] = p;
            }
        }
        m
    }

    /// `max_v |(pi P)_v - pi_v|`.
    pub fn stationarity_residual(&self) -> f64 {
        let mut next = vec![0.0; self.states.len()];
        for (u, row) in self.transitions.iter().enumerate() {
            for &(v, p) in row {
                next[v] += self.stationary[u] * p;
            }
        }
        next.iter()
            .zip(&self.stationary)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// `max_u |sum_v P_uv - 1|`.
    pub fn row_sum_residual(&self) -> f64 {
        self.transitions
            .iter()
            .map(|row| (row.iter().map(|&(_, p)| p).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// The equilibrium state of a locally constant potential on a mixing SFT:
/// `P[u][v] = B[u][v] r[v] / (rho r[u])`, `pi ~ l * r`.
pub fn gibbs_markov_measure(sft: &Sft, phi: &Potential) -> Result<MarkovMeasure> {
    let sys = LocalSystem::new(sft, phi)?;
    if sys.comps.comps.len() != 1 || sys.comps.comps[0].0.len() != sys.sft.size() {
        return Err(Error::NotMixing(format!(
            "{} is not irreducible after recoding",
            sft.label()
        )));
    }
    if sys.comps.comps[0].1 != 1 {
        return Err(Error::NotMixing(format!(
            "{} has period {}",
            sft.label(),
            sys.comps.comps[0].1
        )));
    }
    let offset = sys.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let b = sys.matrix(1.0, offset);
    let all: Vec<usize> = (0..b.size).collect();
    let right = perron_on_component(&b, &all, 1).vector;
    let left = perron_on_component(&b.transpose(), &all, 1).vector;

    let transitions: Vec<Vec<(usize, f64)>> = b
        .rows
        .iter()
        .map(|row| {
            let z: f64 = row.iter().map(|&(v, w)| w * right[v]).sum();
            row.iter().map(|&(v, w)| (v, w * right[v] / z)).collect()
        })
        .collect();
    let mut stationary: Vec<f64> = left.iter().zip(&right).map(|(l, r)| l * r).collect();
    let total: f64 = stationary.iter().sum();
    stationary.iter_mut().for_each(|p| *p /= total);

    let states = match &sys.presentation {
        Some(pres) => pres.blocks().to_vec(),
        None => (0..sft.size() as Symbol).map(|s| Word::new(vec![s])).collect(),
    };
    Ok(MarkovMeasure {
        states,
        transitions,
        stationary,
    })
}

/// `(h_mu, integral of phi d mu)` for a Markov measure on the recoded states of `(sft, phi)`.
pub fn entropy_and_integral(mu: &MarkovMeasure, sft: &Sft, phi: &Potential) -> Result<(f64, f64)> {
    let sys = LocalSystem::new(sft, phi)?;
    if sys.sft.size() != mu.states.len() {
        return Err(Error::InvalidPotential(format!(
            "measure has {} states, potential recodes to {}",
            mu.states.len(),
            sys.sft.size()
        )));
    }
    let mut h = 0.0;
    let mut integral = 0.0;
    for (u, row) in mu.transitions.iter().enumerate() {
        let pu = mu.stationary[u];
        for &(v, p) in row {
            if !sys.sft.allows(u as Symbol, v as Symbol) {
                return Err(Error::Consistency(format!(
                    "measure charges the forbidden transition {u} -> {v}"
                )));
            }
            if p > 0.0 {
                h -= pu * p * p.ln();
            }
            integral += pu * p * sys.values[v];
        }
    }
    Ok((h, integral))
}

/// `|P_top(phi) - (h_mu + integral phi d mu)|` for the Gibbs-Markov measure.
pub fn variational_defect(sft: &Sft, phi: &Potential) -> Result<f64> {
    let p = pressure(sft, phi)?;
    let mu = gibbs_markov_measure(sft, phi)?;
    let (h, i) = entropy_and_integral(&mu, sft, phi)?;
    Ok((p.value - (h + i)).abs())
}
