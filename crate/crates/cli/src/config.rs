//! JSON system specifications and construction parameters.
//!
//! A system file names a subshift (directly, or as the coding of a
//! piecewise-linear Markov map), a potential, and any number of eventually
//! periodic points. Words are written as strings of one-character symbol
//! names, `"0"`, `"1"`, ... unless `names` says otherwise.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use nondense::maps::{code_map, parse_rational, Branch, PiecewiseLinearMarkovMap};
use nondense::moran::MoranParams;
use nondense::{EventuallyPeriodicPoint, Potential, Sft, Symbol, Word};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Sft,
    Map,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SftBlock {
    pub alphabet: usize,
    pub matrix: Vec<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchSpec {
    /// `[a, b]` as exact rationals.
    pub domain: [String; 2],
    pub slope: String,
    pub left_value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapBlock {
    pub branches: Vec<BranchSpec>,
}

/// A number, or `"ln(x)"` / `"log(x)"` with `x` rational.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Number(f64),
    Expr(String),
}

impl Value {
    pub fn eval(&self) -> Result<f64> {
        match self {
            Value::Number(x) => Ok(*x),
            Value::Expr(s) => eval_expr(s),
        }
    }
}

fn eval_expr(s: &str) -> Result<f64> {
    let t = s.trim();
    for f in ["ln(", "log("] {
        if let Some(inner) = t.strip_prefix(f).and_then(|r| r.strip_suffix(')')) {
            let x = rational_f64(inner)?;
            if x <= 0.0 {
                bail!("{t:?}: logarithm of a nonpositive number");
            }
            return Ok(x.ln());
        }
    }
    rational_f64(t).with_context(|| format!("cannot evaluate {t:?}"))
}

fn rational_f64(s: &str) -> Result<f64> {
    use num_traits::ToPrimitive;
    parse_rational(s)?
        .to_f64()
        .ok_or_else(|| anyhow!("{s:?} is not representable"))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PotentialSpec {
    Zero,
    Constant { value: Value },
    Table { depth: usize, values: BTreeMap<String, Value> },
    LogSlope,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    #[serde(default)]
    pub preperiod: String,
    pub period: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sft: Option<SftBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<MapBlock>,
    pub potential: PotentialSpec,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub points: BTreeMap<String, PointSpec>,
}

/// A spec resolved into library values.
#[derive(Clone, Debug)]
pub struct System {
    pub sft: Sft,
    pub phi: Potential,
    pub names: Vec<char>,
    pub points: BTreeMap<String, EventuallyPeriodicPoint>,
}

impl System {
    pub fn point(&self, name: &str) -> Result<&EventuallyPeriodicPoint> {
        self.points.get(name).ok_or_else(|| {
            let known: Vec<&str> = self.points.keys().map(String::as_str).collect();
            anyhow!("no point named {name:?}; defined points: {known:?}")
        })
    }

    pub fn show(&self, w: &[Symbol]) -> String {
        w.iter().map(|&s| self.names[s as usize]).collect()
    }
}

impl SystemSpec {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("specs serialize")
    }

    pub fn resolve(&self) -> Result<System> {
        let (sft, map, names) = match self.kind {
            Kind::Sft => {
                if self.map.is_some() {
                    bail!("kind \"sft\" does not take a map block");
                }
                let b = self.sft.as_ref().ok_or_else(|| anyhow!("kind \"sft\" needs an sft block"))?;
                let sft = Sft::new(b.alphabet, &b.matrix).context("sft.matrix")?;
                let names = symbol_names(b.alphabet, b.names.as_deref())?;
                (sft, None, names)
            }
            Kind::Map => {
                if self.sft.is_some() {
                    bail!("kind \"map\" does not take an sft block");
                }
                let b = self.map.as_ref().ok_or_else(|| anyhow!("kind \"map\" needs a map block"))?;
                let branches = b
                    .branches
                    .iter()
                    .enumerate()
                    .map(|(i, br)| {
                        let r = |s: &str| parse_rational(s).with_context(|| format!("map.branches[{i}]"));
                        Ok(Branch::new(r(&br.domain[0])?, r(&br.domain[1])?, r(&br.slope)?, r(&br.left_value)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let map = PiecewiseLinearMarkovMap::new(branches, self.label.clone()).context("map")?;
                let (sft, _) = code_map(&map)?;
                let names = symbol_names(sft.size(), None)?;
                (sft, Some(map), names)
            }
        };
        let sft = sft.with_label(if self.label.is_empty() { "unnamed" } else { &self.label });
        let word = |s: &str| parse_word(s, &names);

        let phi = match &self.potential {
            PotentialSpec::Zero => Potential::zero(&sft).with_label("zero"),
            PotentialSpec::Constant { value } => {
                let c = value.eval().context("potential.value")?;
                Potential::constant(&sft, c)
            }
            PotentialSpec::Table { depth, values } => {
                let table = values
                    .iter()
                    .map(|(k, v)| {
                        let w = word(k).with_context(|| format!("potential.values key {k:?}"))?;
                        let x = v.eval().with_context(|| format!("potential.values[{k:?}]"))?;
                        Ok((w, x))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Potential::from_words(&sft, *depth, table)
                    .context("potential")?
                    .with_label(self.potential_label())
            }
            PotentialSpec::LogSlope => match &map {
                Some(m) => code_map(m)?.1,
                None => bail!("potential \"log-slope\" needs kind \"map\""),
            },
        };

        let mut points = BTreeMap::new();
        for (name, p) in &self.points {
            let pt = EventuallyPeriodicPoint::new(word(&p.preperiod)?, word(&p.period)?)
                .with_context(|| format!("points.{name}"))?;
            pt.check_admissible_in(&sft).with_context(|| format!("points.{name}"))?;
            points.insert(name.clone(), pt);
        }
        Ok(System {
            sft,
            phi,
            names,
            points,
        })
    }

    fn potential_label(&self) -> String {
        match &self.potential {
            PotentialSpec::Table { depth, .. } => format!("table depth {depth}"),
            _ => String::new(),
        }
    }
}

fn symbol_names(alphabet: usize, names: Option<&[String]>) -> Result<Vec<char>> {
    match names {
        None => {
            if alphabet > 36 {
                bail!("alphabets above 36 symbols need explicit names");
            }
            Ok((0..alphabet as u32)
                .map(|i| std::char::from_digit(i, 36).expect("below 36"))
                .collect())
        }
        Some(list) => {
            if list.len() != alphabet {
                bail!("sft.names has {} entries for an alphabet of {alphabet}", list.len());
            }
            let mut out = Vec::with_capacity(alphabet);
            for n in list {
                let mut chars = n.chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) if !out.contains(&c) => out.push(c),
                    _ => bail!("sft.names: {n:?} must be a single character, distinct from the others"),
                }
            }
            Ok(out)
        }
    }
}

fn parse_word(s: &str, names: &[char]) -> Result<Word> {
    s.chars()
        .map(|c| {
            names
                .iter()
                .position(|&n| n == c)
                .map(|i| i as Symbol)
                .ok_or_else(|| anyhow!("{c:?} in {s:?} is not a symbol name"))
        })
        .collect::<Result<Vec<_>>>()
        .map(Word::new)
}

/// A point given by name or inline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointRef {
    Name(String),
    Inline(PointSpec),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoranSpec {
    pub e: u32,
    pub e0: u32,
    pub eta: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "M")]
    pub big_m: usize,
    pub m: usize,
    pub n_seq: Vec<usize>,
    #[serde(rename = "N_seq")]
    pub big_n_seq: Vec<usize>,
    pub y: PointRef,
    pub z0: PointRef,
    #[serde(default)]
    pub inject_adversarial: bool,
}

impl MoranSpec {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn resolve(&self, sys: &System) -> Result<MoranParams> {
        let point = |r: &PointRef, field: &str| -> Result<EventuallyPeriodicPoint> {
            match r {
                PointRef::Name(n) => sys.point(n).cloned().with_context(|| field.to_string()),
                PointRef::Inline(p) => {
                    let pt = EventuallyPeriodicPoint::new(parse_word(&p.preperiod, &sys.names)?, parse_word(&p.period, &sys.names)?)
                        .with_context(|| field.to_string())?;
                    Ok(pt)
                }
            }
        };
        Ok(MoranParams {
            e: self.e,
            e0: self.e0,
            eta: self.eta,
            c: self.c,
            big_m: self.big_m,
            m: self.m,
            n_seq: self.n_seq.clone(),
            big_n_seq: self.big_n_seq.clone(),
            y: point(&self.y, "y")?,
            z0: point(&self.z0, "z0")?,
        })
    }
}
