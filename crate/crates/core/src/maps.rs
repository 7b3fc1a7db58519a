//! Piecewise-linear expanding Markov maps of `[0, 1]` and their symbolic coding.
//!
//! Geometry is exact (`BigRational`). A branch is an affine map on a closed
//! domain interval; the domains are the partition elements. Gaps between the
//! domains are allowed, in which case the coded system is a repeller.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::potential::Potential;
use crate::symbolic::{Sft, Symbol, Word};

pub type Rational = BigRational;

pub fn rational(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"` or an integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let r: Rational = t
        .parse()
        .map_err(|_| Error::InvalidMap(format!("not a rational number: {t:?}")))?;
    Ok(r)
}

/// `x -> left_value + slope * (x - a)` on `[a, b]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub domain: (Rational, Rational),
    pub slope: Rational,
    pub left_value: Rational,
}

impl Branch {
    pub fn new(a: Rational, b: Rational, slope: Rational, left_value: Rational) -> Self {
        Branch {
            domain: (a, b),
            slope,
            left_value,
        }
    }

    pub fn apply(&self, x: &Rational) -> Rational {
        &self.left_value + &self.slope * (x - &self.domain.0)
    }

    /// The image interval, ordered.
    pub fn image(&self) -> (Rational, Rational) {
        let fa = self.left_value.clone();
        let fb = self.apply(&self.domain.1);
        if fa <= fb {
            (fa, fb)
        } else {
            (fb, fa)
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.domain.0 <= x && x <= &self.domain.1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseLinearMarkovMap {
    branches: Vec<Branch>,
    transitions: Vec<Vec<u8>>,
    label: String,
}

impl PiecewiseLinearMarkovMap {
    /// Validates expansion and the Markov property and derives the transition matrix:
    /// `i -> j` when the image of branch `i` covers domain `j`.
    pub fn new(branches: Vec<Branch>, label: impl Into<String>) -> Result<Self> {
        if branches.is_empty() {
            return Err(Error::InvalidMap("no branches".into()));
        }
        let zero = Rational::zero();
        let one = Rational::one();
        for (i, br) in branches.iter().enumerate() {
            let (a, b) = &br.domain;
            if a >= b {
                return Err(Error::InvalidMap(format!("branch {i}: empty domain [{a}, {b}]")));
            }
            if a < &zero || b > &one {
                return Err(Error::InvalidMap(format!("branch {i}: domain [{a}, {b}] leaves [0, 1]")));
            }
            if br.slope.abs() <= one {
                return Err(Error::InvalidMap(format!(
                    "branch {i}: slope {} is not expanding",
                    br.slope
                )));
            }
            let (lo, hi) = br.image();
            if lo < zero || hi > one {
                return Err(Error::InvalidMap(format!("branch {i}: image [{lo}, {hi}] leaves [0, 1]")));
            }
        }
        for (i, w) in branches.windows(2).enumerate() {
            if w[0].domain.1 > w[1].domain.0 {
                return Err(Error::InvalidMap(format!(
                    "domains of branches {i} and {} overlap or are out of order",
                    i + 1
                )));
            }
        }
        let endpoints: Vec<&Rational> = branches
            .iter()
            .flat_map(|b| [&b.domain.0, &b.domain.1])
            .collect();
        let mut transitions = vec![vec![0u8; branches.len()]; branches.len()];
        for (i, br) in branches.iter().enumerate() {
            let (lo, hi) = br.image();
            for end in [&lo, &hi] {
                if !endpoints.contains(&end) {
                    return Err(Error::InvalidMap(format!(
                        "not Markov: image endpoint {end} of branch {i} is not a partition endpoint"
                    )));
                }
            }
            for (j, other) in branches.iter().enumerate() {
                let (a, b) = &other.domain;
                if &lo <= a && b <= &hi {
                    transitions[i][j] = 1;
                } else if a < &hi && &lo < b {
                    return Err(Error::InvalidMap(format!(
                        "not Markov: image of branch {i} partially covers domain {j}"
                    )));
                }
            }
        }
        Ok(PiecewiseLinearMarkovMap {
            branches,
            transitions,
            label: label.into(),
        })
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    pub fn transitions(&self) -> &[Vec<u8>] {
        &self.transitions
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn min_slope(&self) -> Rational {
        self.branches
            .iter()
            .map(|b| b.slope.abs())
            .min()
            .expect("at least one branch")
    }
}

/// `x -> k x mod 1` with `k` full branches of slope `k`.
pub fn times_k(k: usize) -> PiecewiseLinearMarkovMap {
    assert!(k >= 2, "times_k needs k >= 2");
    let kk = k as i64;
    let branches = (0..kk)
        .map(|i| {
            Branch::new(
                rational(i, kk),
                rational(i + 1, kk),
                rational(kk, 1),
                Rational::zero(),
            )
        })
        .collect();
    PiecewiseLinearMarkovMap::new(branches, format!("times-{k}")).expect("times_k is Markov")
}

/// Slope 2 on `[0, 1/2]` onto `[0, 1]`, slope 4 on `[7/8, 1]` onto `[0, 1/2]`:
/// a golden-mean coded repeller.
pub fn slopes_2_4() -> PiecewiseLinearMarkovMap {
    PiecewiseLinearMarkovMap::new(
        vec![
            Branch::new(rational(0, 1), rational(1, 2), rational(2, 1), Rational::zero()),
            Branch::new(rational(7, 8), rational(1, 1), rational(4, 1), Rational::zero()),
        ],
        "slopes-2-4",
    )
    .expect("slopes_2_4 is Markov")
}

/// The induced SFT and the potential `log |slope|` per branch.
pub fn code_map(map: &PiecewiseLinearMarkovMap) -> Result<(Sft, Potential)> {
    let sft = Sft::new(map.branch_count(), &map.transitions)?.with_label(map.label());
    let values: Vec<f64> = map
        .branches
        .iter()
        .map(|b| {
            b.slope
                .abs()
                .to_f64()
                .map(f64::ln)
                .ok_or_else(|| Error::InvalidMap(format!("slope {} not representable", b.slope)))
        })
        .collect::<Result<_>>()?;
    let phi = Potential::from_symbol_values(&sft, &values)?.with_label("log-slope");
    Ok((sft, phi))
}

/// The first `n` symbols of the itinerary of `x`.
pub fn point_to_symbols(map: &PiecewiseLinearMarkovMap, x: &Rational, n: usize) -> Result<Word> {
    let mut out = Vec::with_capacity(n);
    let mut cur = x.clone();
    for step in 0..n {
        let hits: Vec<usize> = (0..map.branch_count())
            .filter(|&i| map.branches[i].contains(&cur))
            .collect();
        let i = match hits.as_slice() {
            [i] => *i,
            [] => {
                return Err(Error::Itinerary {
                    x: x.to_string(),
                    step,
                    reason: format!("the orbit point {cur} lies in no partition element"),
                })
            }
            _ => {
                return Err(Error::Itinerary {
                    x: x.to_string(),
                    step,
                    reason: format!("the orbit point {cur} is a shared partition endpoint"),
                })
            }
        };
        out.push(i as Symbol);
        cur = map.branches[i].apply(&cur);
    }
    Ok(Word::new(out))
}
