//! Locally constant potentials.
//!
//! A potential of depth `r` assigns a real number to every admissible
//! `r`-word; on a point it reads the first `r` coordinates. Birkhoff sums on
//! a cylinder `[w]` are therefore exact: `S_n phi` over the `n = |w| - r + 1`
//! sliding windows of `w`.

use crate::error::{Error, Result};
use crate::symbolic::{BlockPresentation, Sft, Symbol, Word};

/// Largest dense table a potential may allocate.
const MAX_TABLE: usize = 1 << 24;

#[derive(Clone, Debug, PartialEq)]
pub struct Potential {
    depth: usize,
    alphabet: usize,
    // dense over alphabet^depth, NaN where undefined
    values: Vec<f64>,
    label: String,
}

impl Potential {
    /// `phi == c`, depth 1.
    pub fn constant(sft: &Sft, c: f64) -> Self {
        Potential {
            depth: 1,
            alphabet: sft.size(),
            values: vec![c; sft.size()],
            label: format!("const {c}"),
        }
    }

    pub fn zero(sft: &Sft) -> Self {
        Self::constant(sft, 0.0)
    }

    /// Depth-1 potential from one value per symbol.
    pub fn from_symbol_values(sft: &Sft, values: &[f64]) -> Result<Self> {
        if values.len() != sft.size() {
            return Err(Error::InvalidPotential(format!(
                "{} symbol values given for an alphabet of size {}",
                values.len(),
                sft.size()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidPotential(format!("non-finite value {v}")));
        }
        Ok(Potential {
            depth: 1,
            alphabet: sft.size(),
            values: values.to_vec(),
            label: String::new(),
        })
    }

    /// Depth-`depth` potential from a word table. Every admissible word of
    /// that length must be assigned a finite value.
    pub fn from_words<I>(sft: &Sft, depth: usize, table: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, f64)>,
    {
        if depth == 0 {
            return Err(Error::InvalidPotential("depth must be positive".into()));
        }
        let size = table_size(sft.size(), depth)?;
        let mut values = vec![f64::NAN; size];
        for (w, v) in table {
            if w.len() != depth {
                return Err(Error::InvalidPotential(format!(
                    "word {w} has length {}, expected {depth}",
                    w.len()
                )));
            }
            sft.check_admissible(&w)?;
            if !v.is_finite() {
                return Err(Error::InvalidPotential(format!("value of {w} is {v}")));
            }
            values[encode(sft.size(), &w)] = v;
        }
        let mut missing = None;
        sft.visit_words(depth, |w| {
            if missing.is_none() && values[encode(sft.size(), w)].is_nan() {
                missing = Some(Word::from(w));
            }
        });
        if let Some(w) = missing {
            return Err(Error::InvalidPotential(format!(
                "admissible word {w} has no value"
            )));
        }
        Ok(Potential {
            depth,
            alphabet: sft.size(),
            values,
            label: String::new(),
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    /// Value on a `depth`-word, if defined.
    pub fn value(&self, w: &[Symbol]) -> Option<f64> {
        if w.len() != self.depth || w.iter().any(|&s| s as usize >= self.alphabet) {
            return None;
        }
        let v = self.values[encode(self.alphabet, w)];
        (!v.is_nan()).then_some(v)
    }

    /// Defined `(word, value)` entries in lexicographic order.
    pub fn entries(&self) -> Vec<(Word, f64)> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_nan())
            .map(|(i, &v)| (decode(self.alphabet, self.depth, i), v))
            .collect()
    }

    /// `c * phi`.
    pub fn scaled(&self, c: f64) -> Potential {
        Potential {
            values: self.values.iter().map(|v| v * c).collect(),
            label: format!("{c} * ({})", self.label),
            ..self.clone()
        }
    }

    /// `phi + c`.
    pub fn shifted(&self, c: f64) -> Potential {
        Potential {
            values: self.values.iter().map(|v| v + c).collect(),
            label: format!("({}) + {c}", self.label),
            ..self.clone()
        }
    }

    fn check_alphabet(&self, sft: &Sft) -> Result<()> {
        if sft.size() != self.alphabet {
            return Err(Error::InvalidPotential(format!(
                "potential defined on {} symbols, subshift has {}",
                self.alphabet,
                sft.size()
            )));
        }
        Ok(())
    }

    /// Exact `S_n phi` on the cylinder `[w]`, `n = |w| - depth + 1`.
    pub fn birkhoff_sum(&self, sft: &Sft, w: &[Symbol]) -> Result<f64> {
        self.check_alphabet(sft)?;
        if w.len() < self.depth {
            return Err(Error::WordTooShort {
                len: w.len(),
                depth: self.depth,
            });
        }
        sft.check_admissible(w)?;
        w.windows(self.depth)
            .map(|win| {
                self.value(win).ok_or_else(|| {
                    Error::InvalidPotential(format!("no value on {}", Word::from(win)))
                })
            })
            .sum()
    }

    /// `Var(phi, 2^-e)`: largest gap between values on admissible
    /// depth-words agreeing on coordinates `0..=min(e, depth-1)`.
    pub fn variation(&self, sft: &Sft, e: u32) -> Result<f64> {
        self.check_alphabet(sft)?;
        let keep = (e as usize + 1).min(self.depth);
        if keep >= self.depth {
            return Ok(0.0);
        }
        // words are visited in lexicographic order, so equal prefixes are contiguous
        let mut best = 0.0f64;
        let mut current: Option<(Vec<Symbol>, f64, f64)> = None;
        sft.visit_words(self.depth, |w| {
            let v = self.values[encode(self.alphabet, w)];
            match &mut current {
                Some((prefix, lo, hi)) if prefix.as_slice() == &w[..keep] => {
                    *lo = lo.min(v);
                    *hi = hi.max(v);
                }
                _ => {
                    if let Some((_, lo, hi)) = current.take() {
                        best = best.max(hi - lo);
                    }
                    current = Some((w[..keep].to_vec(), v, v));
                }
            }
        });
        if let Some((_, lo, hi)) = current {
            best = best.max(hi - lo);
        }
        Ok(best)
    }

    /// `||phi||` over the defined values.
    pub fn sup_norm(&self) -> f64 {
        self.values
            .iter()
            .filter(|v| !v.is_nan())
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Minimum over admissible depth-words.
    pub fn min_value(&self, sft: &Sft) -> Result<f64> {
        self.check_alphabet(sft)?;
        let mut m = f64::INFINITY;
        sft.visit_words(self.depth, |w| {
            m = m.min(self.values[encode(self.alphabet, w)]);
        });
        Ok(m)
    }

    /// Transports the potential to a block presentation of `base`. The
    /// result has depth `max(1, depth - block_len + 1)` over block symbols.
    pub fn lift(&self, base: &Sft, pres: &BlockPresentation) -> Result<Potential> {
        self.check_alphabet(base)?;
        let l = pres.block_len();
        if l == 1 && pres.sft().size() == base.size() {
            return Ok(self.clone());
        }
        let depth = if self.depth > l { self.depth - l + 1 } else { 1 };
        let alphabet = pres.sft().size();
        let mut values = vec![f64::NAN; table_size(alphabet, depth)?];
        let mut err = None;
        pres.sft().visit_words(depth, |bw| {
            let orig = pres.decode(bw);
            match self.value(&orig[..self.depth]) {
                Some(v) => values[encode(alphabet, bw)] = v,
                None => {
                    if err.is_none() {
                        err = Some(Word::from(&orig[..self.depth]));
                    }
                }
            }
        });
        if let Some(w) = err {
            return Err(Error::InvalidPotential(format!("no value on {w}")));
        }
        Ok(Potential {
            depth,
            alphabet,
            values,
            label: self.label.clone(),
        })
    }
}

fn table_size(alphabet: usize, depth: usize) -> Result<usize> {
    u32::try_from(depth)
        .ok()
        .and_then(|d| alphabet.checked_pow(d))
        .filter(|&n| n <= MAX_TABLE)
        .ok_or_else(|| Error::TooLarge {
            what: format!("potential table {alphabet}^{depth}"),
            count: (alphabet as u128).saturating_pow(depth as u32),
            limit: MAX_TABLE as u128,
        })
}

fn encode(alphabet: usize, w: &[Symbol]) -> usize {
    w.iter().fold(0usize, |acc, &s| acc * alphabet + s as usize)
}

fn decode(alphabet: usize, depth: usize, mut code: usize) -> Word {
    let mut v = vec![0 as Symbol; depth];
    for slot in v.iter_mut().rev() {
        *slot = (code % alphabet) as Symbol;
        code /= alphabet;
    }
    Word::new(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::from_digits(s)
    }

    #[test]
    fn birkhoff_examples() {
        let full = Sft::full_shift(2);
        let zero = Potential::zero(&full);
        assert_eq!(zero.birkhoff_sum(&full, &w("01101")).unwrap(), 0.0);

        let (a, b) = (0.3, -1.7);
        let phi = Potential::from_symbol_values(&full, &[a, b]).unwrap();
        let s = phi.birkhoff_sum(&full, &w("0101")).unwrap();
        assert!((s - (2.0 * a + 2.0 * b)).abs() < 1e-15);

        let gm = Sft::golden_mean();
        let phi = Potential::from_words(
            &gm,
            2,
            [(w("00"), 0.0), (w("01"), 1.0), (w("10"), 0.0)],
        )
        .unwrap();
        assert_eq!(phi.birkhoff_sum(&gm, &w("01010")).unwrap(), 2.0);
    }

    #[test]
    fn birkhoff_errors() {
        let gm = Sft::golden_mean();
        let phi = Potential::from_words(&gm, 2, [(w("00"), 0.0), (w("01"), 1.0), (w("10"), 0.0)])
            .unwrap();
        assert!(matches!(
            phi.birkhoff_sum(&gm, &w("0")),
            Err(Error::WordTooShort { len: 1, depth: 2 })
        ));
        assert!(matches!(
            phi.birkhoff_sum(&gm, &w("011")),
            Err(Error::Inadmissible(_))
        ));
    }

    #[test]
    fn missing_table_entry_is_rejected() {
        let gm = Sft::golden_mean();
        let err = Potential::from_words(&gm, 2, [(w("00"), 0.0), (w("01"), 1.0)]).unwrap_err();
        assert!(matches!(err, Error::InvalidPotential(ref m) if m.contains("10")));
    }

    #[test]
    fn variation_examples() {
        let full = Sft::full_shift(2);
        let phi1 = Potential::from_symbol_values(&full, &[0.0, 3.0]).unwrap();
        assert_eq!(phi1.variation(&full, 0).unwrap(), 0.0);

        let phi2 = Potential::from_words(
            &full,
            2,
            [(w("00"), 0.0), (w("01"), 5.0), (w("10"), 1.0), (w("11"), 1.0)],
        )
        .unwrap();
        assert_eq!(phi2.variation(&full, 0).unwrap(), 5.0);
        assert_eq!(phi2.variation(&full, 1).unwrap(), 0.0);
        assert_eq!(phi2.variation(&full, 7).unwrap(), 0.0);
    }

    #[test]
    fn sup_norm_examples() {
        let full = Sft::full_shift(2);
        assert_eq!(Potential::zero(&full).sup_norm(), 0.0);
        let phi = Potential::from_symbol_values(&full, &[-3.0, 2.0]).unwrap();
        assert_eq!(phi.sup_norm(), 3.0);
        let gm = Sft::golden_mean();
        let phi = Potential::from_words(&gm, 2, [(w("00"), 1.0), (w("01"), -4.0), (w("10"), 2.0)])
            .unwrap();
        assert_eq!(phi.sup_norm(), 4.0);
    }

    #[test]
    fn lift_preserves_birkhoff_sums() {
        let gm = Sft::golden_mean();
        let phi = Potential::from_words(&gm, 2, [(w("00"), 0.5), (w("01"), -1.0), (w("10"), 2.0)])
            .unwrap();
        for l in 1..=4 {
            let pres = gm.higher_block(l);
            let lifted = phi.lift(&gm, &pres).unwrap();
            for word in gm.words(7) {
                let bw = pres.lift_word(&word).unwrap();
                if bw.len() < lifted.depth() {
                    continue;
                }
                // lifted windows start at the same coordinates as the original ones
                let n_lift = bw.len() - lifted.depth() + 1;
                let orig: f64 = word.windows(2).take(n_lift).map(|x| phi.value(x).unwrap()).sum();
                let got = lifted.birkhoff_sum(pres.sft(), &bw).unwrap();
                assert!((orig - got).abs() < 1e-12, "l = {l}, word {word}");
            }
        }
    }
}
