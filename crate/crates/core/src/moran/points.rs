//! The point sets `P_k`, stored as packed words with normalized weights.
//!
//! A point is indexed by its tuple of family words in mixed radix, the first
//! segment being the most significant digit. Its word holds `t_k` constructed
//! symbols followed by `e` symbols of the lexicographically smallest
//! continuation, packed most significant symbol first so that integer order
//! is lexicographic order.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::symbolic::{Sft, Symbol, Word};

use super::family::{interleave_with, Connectors, SeparatedFamily};
use super::schedule::MoranSchedule;
use super::MoranParams;

/// Largest `#P_k` that will be enumerated.
pub const MAX_POINTS: u128 = 1 << 24;
const CHUNK: usize = 1 << 14;

/// Bits needed per symbol of an alphabet of `size` letters.
pub fn bits_per_symbol(size: usize) -> u32 {
    size.next_power_of_two().trailing_zeros().max(1)
}

#[derive(Clone, Copy, Debug)]
struct Packed {
    value: u128,
    len: usize,
    first: Symbol,
    last: Symbol,
}

fn pack(w: &[Symbol], bits: u32) -> Packed {
    let value = w
        .iter()
        .fold(0u128, |acc, &s| (acc << bits) | u128::from(s));
    Packed {
        value,
        len: w.len(),
        first: w[0],
        last: *w.last().expect("nonempty"),
    }
}

#[inline]
fn append(key: u128, p: &Packed, bits: u32) -> u128 {
    let shift = bits as usize * p.len;
    if shift >= 128 {
        p.value
    } else {
        (key << shift) | p.value
    }
}

/// `P_k` in tuple order.
#[derive(Clone, Debug)]
pub struct PointSet {
    pub k: usize,
    /// `t_k`.
    pub prefix_len: usize,
    /// `t_k + e`.
    pub len: usize,
    pub bits: u32,
    pub keys: Vec<u128>,
    /// `exp(log L_k - log_scale)` per point.
    pub weights: Vec<f64>,
    pub log_scale: f64,
    /// Family index of every segment, in time order.
    pub radices: Vec<usize>,
}

impl PointSet {
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn word(&self, i: usize) -> Word {
        unpack(self.keys[i], self.len, self.bits)
    }

    /// Consumes the set into lexicographic order; ties keep tuple order.
    pub fn into_sorted(self) -> SortedPoints {
        let mut pairs: Vec<(u128, f64)> = self.keys.into_iter().zip(self.weights).collect();
        pairs.par_sort_by_key(|p| p.0);
        SortedPoints {
            k: self.k,
            prefix_len: self.prefix_len,
            len: self.len,
            bits: self.bits,
            points: pairs,
            log_scale: self.log_scale,
        }
    }
}

/// `P_k` in lexicographic order of words.
#[derive(Clone, Debug)]
pub struct SortedPoints {
    pub k: usize,
    pub prefix_len: usize,
    pub len: usize,
    pub bits: u32,
    pub points: Vec<(u128, f64)>,
    pub log_scale: f64,
}

impl SortedPoints {
    pub fn word(&self, i: usize) -> Word {
        unpack(self.points[i].0, self.len, self.bits)
    }

    /// Length of the common prefix of two packed words, in symbols.
    pub fn common_prefix(&self, a: u128, b: u128) -> usize {
        common_prefix(a, b, self.len, self.bits)
    }
}

pub(crate) fn common_prefix(a: u128, b: u128, len: usize, bits: u32) -> usize {
    let x = a ^ b;
    if x == 0 {
        return len;
    }
    let unused = 128 - bits as usize * len;
    (x.leading_zeros() as usize - unused) / bits as usize
}

pub(crate) fn unpack(key: u128, len: usize, bits: u32) -> Word {
    let mask = (1u128 << bits) - 1;
    (0..len)
        .map(|i| ((key >> (bits as usize * (len - 1 - i))) & mask) as Symbol)
        .collect()
}

/// Writes the symbols of a packed word into `out`.
pub(crate) fn unpack_into(key: u128, len: usize, bits: u32, out: &mut [Symbol]) {
    let mask = (1u128 << bits) - 1;
    for (i, slot) in out.iter_mut().enumerate().take(len) {
        *slot = ((key >> (bits as usize * (len - 1 - i))) & mask) as Symbol;
    }
}

/// `prod_{i <= k} (#S_i)^{N_i}`, saturating.
pub fn point_count(families: &[SeparatedFamily], schedule: &MoranSchedule, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| {
        let base = families[i].len() as u128;
        (0..schedule.big_n[i]).fold(acc, |a, _| a.saturating_mul(base))
    })
}

/// Builds `P_k` from the families `S_1..S_k`.
pub fn build_points(
    sft: &Sft,
    params: &MoranParams,
    schedule: &MoranSchedule,
    families: &[SeparatedFamily],
    k: usize,
) -> Result<PointSet> {
    if k == 0 || k > schedule.levels() || families.len() < k {
        return Err(Error::InvalidParams(format!("level {k} is not scheduled")));
    }
    let count = point_count(families, schedule, k);
    if count > MAX_POINTS {
        let formula = (0..k)
            .map(|i| format!("{}^{}", families[i].len(), schedule.big_n[i]))
            .collect::<Vec<_>>()
            .join(" * ");
        return Err(Error::TooLarge {
            what: format!("#P_{k} = {formula}"),
            count,
            limit: MAX_POINTS,
        });
    }
    let bits = bits_per_symbol(sft.size());
    let prefix_len = schedule.t_len(k);
    let len = prefix_len + params.e as usize;
    if bits as usize * len > 128 {
        return Err(Error::TooLarge {
            what: format!("bits per level-{k} word = {bits} * ({prefix_len} + {})", params.e),
            count: (bits as usize * len) as u128,
            limit: 128,
        });
    }

    let conn = Connectors::new(sft, params.m);
    let y0 = params.y.symbol_at(0);
    let interleaved: Vec<Vec<Packed>> = families[..k]
        .iter()
        .map(|f| {
            f.words
                .iter()
                .map(|w| interleave_with(&conn, params.big_m, y0, sft, w).map(|x| pack(&x, bits)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let size = sft.size();
    let mut joins = Vec::with_capacity(size * size);
    for a in 0..size as Symbol {
        for b in 0..size as Symbol {
            joins.push(conn.get(a, b).ok().map(|w| pack(w, bits)));
        }
    }
    let tails: Vec<Option<Packed>> = (0..size as Symbol)
        .map(|a| {
            if params.e == 0 {
                return None;
            }
            sft.connecting_word(&[a], &[], params.e as usize)
                .ok()
                .map(|w| pack(&w, bits))
        })
        .collect();

    let radices: Vec<usize> = (0..k)
        .flat_map(|i| std::iter::repeat_n(i, schedule.big_n[i]))
        .collect();
    let log_scale: f64 = (0..k)
        .map(|i| schedule.big_n[i] as f64 * families[i].max_log_weight())
        .sum();

    let count = count as usize;
    let mut keys = vec![0u128; count];
    let mut weights = vec![0f64; count];
    let failure = keys
        .par_chunks_mut(CHUNK)
        .zip(weights.par_chunks_mut(CHUNK))
        .enumerate()
        .map(|(c, (kc, wc))| {
            let mut digits = vec![0usize; radices.len()];
            for (off, (key_slot, w_slot)) in kc.iter_mut().zip(wc.iter_mut()).enumerate() {
                let mut idx = c * CHUNK + off;
                for (d, &lvl) in digits.iter_mut().zip(&radices).rev() {
                    let base = families[lvl].len();
                    *d = idx % base;
                    idx /= base;
                }
                let mut key = 0u128;
                let mut logw = 0.0;
                let mut last: Option<Symbol> = None;
                for (&d, &lvl) in digits.iter().zip(&radices) {
                    let seg = &interleaved[lvl][d];
                    if let Some(a) = last {
                        match &joins[a as usize * size + seg.first as usize] {
                            Some(j) => key = append(key, j, bits),
                            None => return Some((a, seg.first)),
                        }
                    }
                    key = append(key, seg, bits);
                    logw += families[lvl].log_weights[d];
                    last = Some(seg.last);
                }
                if params.e > 0 {
                    let a = last.expect("at least one segment");
                    match &tails[a as usize] {
                        Some(t) => key = append(key, t, bits),
                        None => return Some((a, a)),
                    }
                }
                *key_slot = key;
                *w_slot = (logw - log_scale).exp();
            }
            None
        })
        .find_first(|r| r.is_some())
        .flatten();
    if let Some((a, b)) = failure {
        return Err(Error::NoConnector {
            left: a.to_string(),
            right: b.to_string(),
            gap: params.m,
        });
    }
    Ok(PointSet {
        k,
        prefix_len,
        len,
        bits,
        keys,
        weights,
        log_scale,
        radices,
    })
}
