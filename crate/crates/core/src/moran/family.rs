//! Separated families `S_k` and their insertion of `y`-visits.

use crate::error::{Error, Result};
use crate::potential::Potential;
use crate::pressure::MAX_ENUMERATED_WORDS;
use crate::symbolic::{Sft, Symbol, Word};

use super::{neumaier_log_sum_exp, MoranParams};

/// All admissible `n`-words with their Birkhoff sums.
#[derive(Clone, Debug)]
pub struct SeparatedFamily {
    pub n: usize,
    pub words: Vec<Word>,
    /// `S_n phi(w)` per word.
    pub log_weights: Vec<f64>,
    /// `log M_k = log sum exp S_n phi`.
    pub log_mass: f64,
}

impl SeparatedFamily {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn mass(&self) -> f64 {
        self.log_mass.exp()
    }

    pub fn max_log_weight(&self) -> f64 {
        self.log_weights
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `S_k` = every admissible `n`-word: at `eps < 1/9` distinct words are maximally separated.
pub fn build_family(sft: &Sft, phi: &Potential, n: usize) -> Result<SeparatedFamily> {
    if n < phi.depth() {
        return Err(Error::WordTooShort {
            len: n,
            depth: phi.depth(),
        });
    }
    let count = sft.count_words(n);
    if count > MAX_ENUMERATED_WORDS {
        return Err(Error::TooLarge {
            what: format!("#S = admissible {n}-words of {}", sft.label()),
            count,
            limit: MAX_ENUMERATED_WORDS,
        });
    }
    let words = sft.words(n);
    let log_weights = words
        .iter()
        .map(|w| phi.birkhoff_sum(sft, w))
        .collect::<Result<Vec<_>>>()?;
    let log_mass = neumaier_log_sum_exp(&log_weights);
    Ok(SeparatedFamily {
        n,
        words,
        log_weights,
        log_mass,
    })
}

/// `log sum_{|w| = n} exp S_n phi(w)` for a depth-1 potential, by transfer iteration.
pub fn family_log_mass(sft: &Sft, phi: &Potential, n: usize) -> Result<f64> {
    if phi.depth() != 1 {
        return Err(Error::InvalidPotential("depth-1 potential required".into()));
    }
    if n == 0 {
        return Ok(0.0);
    }
    let k = sft.size();
    let val: Vec<f64> = (0..k as Symbol)
        .map(|s| phi.value(&[s]).unwrap_or(f64::NEG_INFINITY))
        .collect();
    let mut v: Vec<f64> = val.iter().map(|x| x.exp()).collect();
    let mut log_scale = 0.0;
    for _ in 1..n {
        let mut next = vec![0.0; k];
        for (a, &va) in v.iter().enumerate() {
            if va == 0.0 {
                continue;
            }
            for &b in sft.successors(a as Symbol) {
                next[b as usize] += va * val[b as usize].exp();
            }
        }
        let top = next.iter().copied().fold(0.0, f64::max);
        if top == 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        next.iter_mut().for_each(|x| *x /= top);
        log_scale += top.ln();
        v = next;
    }
    Ok(log_scale + v.iter().sum::<f64>().ln())
}

/// Lexicographically smallest connecting words of length `m` for every symbol pair.
#[derive(Clone, Debug)]
pub struct Connectors {
    m: usize,
    size: usize,
    table: Vec<Option<Word>>,
}

impl Connectors {
    pub fn new(sft: &Sft, m: usize) -> Self {
        let size = sft.size();
        let mut table = Vec::with_capacity(size * size);
        for a in 0..size as Symbol {
            for b in 0..size as Symbol {
                table.push(sft.connecting_word(&[a], &[b], m).ok());
            }
        }
        Connectors { m, size, table }
    }

    pub fn gap(&self) -> usize {
        self.m
    }

    pub fn get(&self, a: Symbol, b: Symbol) -> Result<&Word> {
        self.table[a as usize * self.size + b as usize]
            .as_ref()
            .ok_or_else(|| Error::NoConnector {
                left: a.to_string(),
                right: b.to_string(),
                gap: self.m,
            })
    }
}

/// Splits `x` into blocks of `M` and joins consecutive blocks by
/// `connector(m) y_0 connector(m)`, where `y_0` is the first symbol of `y`.
pub fn interleave_with_y(sft: &Sft, params: &MoranParams, x: &[Symbol]) -> Result<Word> {
    let conn = Connectors::new(sft, params.m);
    interleave_with(&conn, params.big_m, params.y.symbol_at(0), sft, x)
}

pub(crate) fn interleave_with(
    conn: &Connectors,
    big_m: usize,
    y0: Symbol,
    sft: &Sft,
    x: &[Symbol],
) -> Result<Word> {
    sft.check_admissible(x)?;
    let mut out = Word::empty();
    for (b, block) in x.chunks(big_m).enumerate() {
        if b > 0 {
            let last = *out.last().expect("previous block is nonempty");
            out.extend_from_slice(conn.get(last, y0)?);
            out.push(y0);
            out.extend_from_slice(conn.get(y0, block[0])?);
        }
        out.extend_from_slice(block);
    }
    Ok(out)
}
