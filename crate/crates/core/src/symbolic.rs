//! Subshifts of finite type, words, and the symbolic metric.
//!
//! A one-sided SFT over `{0, .., k-1}` is stored as sorted successor lists.
//! Points are infinite admissible sequences; the metric is
//! `d(x, y) = 2^-(first index where x and y differ)`, so the Bowen ball
//! `B_n(q, 2^-e)` is the cylinder fixed by `q` on coordinates `0..n-1+e`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::Deref;

use crate::error::{Error, Result};
use crate::graph;

pub type Symbol = u32;

/// A finite sequence of symbols. Admissibility is always relative to an [`Sft`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Parses a word written with one decimal digit per symbol, e.g. `"0110"`.
    pub fn from_digits(s: &str) -> Self {
        Word(
            s.chars()
                .map(|c| c.to_digit(10).expect("digit word expects 0-9 symbols"))
                .collect(),
        )
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Symbol> {
        self.0
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s);
    }

    pub fn extend_from_slice(&mut self, s: &[Symbol]) {
        self.0.extend_from_slice(s);
    }

    pub fn concat(&self, other: &[Symbol]) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(other);
        Word(v)
    }

    /// Whether `needle` occurs as a factor of this word.
    pub fn contains_factor(&self, needle: &[Symbol]) -> bool {
        needle.is_empty() || self.0.windows(needle.len()).any(|w| w == needle)
    }
}

impl std::borrow::Borrow<[Symbol]> for Word {
    fn borrow(&self) -> &[Symbol] {
        &self.0
    }
}

impl Deref for Word {
    type Target = [Symbol];
    fn deref(&self) -> &[Symbol] {
        &self.0
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Word(v)
    }
}

impl From<&[Symbol]> for Word {
    fn from(v: &[Symbol]) -> Self {
        Word(v.to_vec())
    }
}

impl FromIterator<Symbol> for Word {
    fn from_iter<I: IntoIterator<Item = Symbol>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&s| s < 10) {
            for s in &self.0 {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// Shape of the strongly connected structure of an SFT.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    /// No cycle: the subshift has no points.
    Empty,
    /// Several components, or transient states; carries the largest component that has a cycle.
    Reducible {
        largest_component: Vec<Symbol>,
        cyclic_components: usize,
    },
    /// One component covering every state, with period > 1.
    Periodic { period: usize },
    /// Primitive transition matrix; `gap` is the least `N` with `A^N > 0`.
    Mixing { gap: usize },
}

/// A one-sided subshift of finite type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sft {
    size: usize,
    succ: Vec<Vec<Symbol>>,
    label: String,
}

impl Sft {
    /// Builds an SFT from a row-major 0/1 transition matrix.
    pub fn new(size: usize, matrix: &[Vec<u8>]) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidMatrix("alphabet size must be positive".into()));
        }
        if matrix.len() != size {
            return Err(Error::InvalidMatrix(format!(
                "expected {size} rows, found {}",
                matrix.len()
            )));
        }
        let mut succ = Vec::with_capacity(size);
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != size {
                return Err(Error::InvalidMatrix(format!(
                    "row {i} has {} entries, expected {size}",
                    row.len()
                )));
            }
            let mut list = Vec::new();
            for (j, &e) in row.iter().enumerate() {
                match e {
                    0 => {}
                    1 => list.push(j as Symbol),
                    other => {
                        return Err(Error::InvalidMatrix(format!(
                            "entry ({i},{j}) is {other}, expected 0 or 1"
                        )))
                    }
                }
            }
            succ.push(list);
        }
        Ok(Sft {
            size,
            succ,
            label: String::new(),
        })
    }

    /// Builds an SFT from successor lists (deduplicated and sorted).
    pub fn from_successors(size: usize, mut succ: Vec<Vec<Symbol>>) -> Result<Self> {
        if succ.len() != size {
            return Err(Error::InvalidMatrix(format!(
                "expected {size} successor lists, found {}",
                succ.len()
            )));
        }
        for list in &mut succ {
            list.sort_unstable();
            list.dedup();
            if let Some(&s) = list.iter().find(|&&s| s as usize >= size) {
                return Err(Error::SymbolOutOfRange { symbol: s, size });
            }
        }
        Ok(Sft {
            size,
            succ,
            label: String::new(),
        })
    }

    pub fn full_shift(k: usize) -> Self {
        let all: Vec<Symbol> = (0..k as Symbol).collect();
        Sft {
            size: k,
            succ: vec![all; k],
            label: format!("full-{k}-shift"),
        }
    }

    /// The shift on `{0,1}` forbidding the word `11`.
    pub fn golden_mean() -> Self {
        Sft {
            size: 2,
            succ: vec![vec![0, 1], vec![0]],
            label: "golden-mean".into(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn successors(&self, a: Symbol) -> &[Symbol] {
        &self.succ[a as usize]
    }

    pub fn allows(&self, a: Symbol, b: Symbol) -> bool {
        self.succ[a as usize].binary_search(&b).is_ok()
    }

    pub fn transition_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    /// Dense 0/1 matrix, row-major.
    pub fn matrix(&self) -> Vec<Vec<u8>> {
        let mut m = vec![vec![0u8; self.size]; self.size];
        for (i, list) in self.succ.iter().enumerate() {
            for &j in list {
                m[i][j as usize] = 1;
            }
        }
        m
    }

    pub(crate) fn successor_graph(&self) -> Vec<Vec<usize>> {
        self.succ
            .iter()
            .map(|l| l.iter().map(|&s| s as usize).collect())
            .collect()
    }

    /// Copy with a single transition removed.
    pub fn without_transition(&self, a: Symbol, b: Symbol) -> Sft {
        let mut succ = self.succ.clone();
        succ[a as usize].retain(|&s| s != b);
        Sft {
            size: self.size,
            succ,
            label: format!("{} minus {a}->{b}", self.label),
        }
    }

    /// True iff every symbol is in range and every adjacent pair is a transition.
    pub fn is_admissible(&self, w: &[Symbol]) -> bool {
        w.iter().all(|&s| (s as usize) < self.size) && w.windows(2).all(|p| self.allows(p[0], p[1]))
    }

    pub(crate) fn check_admissible(&self, w: &[Symbol]) -> Result<()> {
        if let Some(&s) = w.iter().find(|&&s| s as usize >= self.size) {
            return Err(Error::SymbolOutOfRange {
                symbol: s,
                size: self.size,
            });
        }
        if self.is_admissible(w) {
            Ok(())
        } else {
            Err(Error::Inadmissible(Word::from(w).to_string()))
        }
    }

    /// Number of admissible words of length `n` (sum of the entries of `A^(n-1)`).
    /// Saturates at `u128::MAX`.
    pub fn count_words(&self, n: usize) -> u128 {
        if n == 0 {
            return 1;
        }
        let mut counts = vec![1u128; self.size];
        for _ in 1..n {
            let mut next = vec![0u128; self.size];
            for (a, list) in self.succ.iter().enumerate() {
                let c = counts[a];
                if c == 0 {
                    continue;
                }
                for &b in list {
                    next[b as usize] = next[b as usize].saturating_add(c);
                }
            }
            counts = next;
        }
        counts.iter().fold(0u128, |acc, &c| acc.saturating_add(c))
    }

    /// Calls `f` on every admissible word of length `n`, in lexicographic order.
    pub fn visit_words<F: FnMut(&[Symbol])>(&self, n: usize, mut f: F) {
        if n == 0 {
            f(&[]);
            return;
        }
        let mut buf: Vec<Symbol> = Vec::with_capacity(n);
        // pos[i] = index into the candidate list at depth i
        let mut pos: Vec<usize> = vec![0; n];
        let all: Vec<Symbol> = (0..self.size as Symbol).collect();
        let mut depth = 0usize;
        loop {
            let candidates: &[Symbol] = if depth == 0 {
                &all
            } else {
                &self.succ[buf[depth - 1] as usize]
            };
            if pos[depth] < candidates.len() {
                let s = candidates[pos[depth]];
                pos[depth] += 1;
                buf.truncate(depth);
                buf.push(s);
                if depth + 1 == n {
                    f(&buf);
                } else {
                    depth += 1;
                    pos[depth] = 0;
                }
            } else {
                if depth == 0 {
                    break;
                }
                depth -= 1;
            }
        }
    }

    /// All admissible words of length `n`, lexicographically ordered.
    pub fn words(&self, n: usize) -> Vec<Word> {
        let mut out = Vec::new();
        self.visit_words(n, |w| out.push(Word::from(w)));
        out
    }

    /// Strongly connected structure: empty, reducible, periodic, or mixing.
    pub fn classify(&self) -> Classification {
        let succ = self.successor_graph();
        let comps = graph::strongly_connected_components(&succ);
        let cyclic: Vec<&Vec<usize>> = comps
            .iter()
            .filter(|c| graph::has_cycle(&succ, c))
            .collect();
        if cyclic.is_empty() {
            return Classification::Empty;
        }
        if comps.len() > 1 {
            let largest = cyclic
                .iter()
                .max_by(|a, b| a.len().cmp(&b.len()).then_with(|| b.cmp(a)))
                .expect("nonempty");
            return Classification::Reducible {
                largest_component: largest.iter().map(|&s| s as Symbol).collect(),
                cyclic_components: cyclic.len(),
            };
        }
        let member = vec![true; self.size];
        let period = graph::component_period(&succ, &comps[0], &member);
        if period > 1 {
            return Classification::Periodic { period };
        }
        Classification::Mixing {
            gap: self.gap_of_primitive(),
        }
    }

    pub fn is_mixing(&self) -> bool {
        matches!(self.classify(), Classification::Mixing { .. })
    }

    /// Least `N` with `A^N` entrywise positive; for SFTs this realizes the
    /// specification gap uniformly in the scale.
    pub fn primitivity_gap(&self) -> Result<usize> {
        match self.classify() {
            Classification::Mixing { gap } => Ok(gap),
            Classification::Empty => Err(Error::NotMixing(
                "no cycles: every entry of A^N vanishes for N >= alphabet size".into(),
            )),
            Classification::Periodic { period } => Err(Error::NotMixing(format!(
                "irreducible with period {period}: entry (0,0) of A^N is zero unless {period} divides N"
            ))),
            Classification::Reducible { .. } => {
                let succ = self.successor_graph();
                let (i, j) = unreachable_pair(&succ).unwrap_or((0, 0));
                Err(Error::NotMixing(format!(
                    "reducible: entry ({i},{j}) of A^N is zero for every N"
                )))
            }
        }
    }

    fn gap_of_primitive(&self) -> usize {
        let k = self.size;
        let mut worst = 0usize;
        let mut cur = vec![false; k];
        let mut next = vec![false; k];
        for start in 0..k {
            cur.iter_mut().for_each(|c| *c = false);
            for &b in &self.succ[start] {
                cur[b as usize] = true;
            }
            let mut t = 1usize;
            while !cur.iter().all(|&c| c) {
                next.iter_mut().for_each(|c| *c = false);
                for (a, &on) in cur.iter().enumerate() {
                    if on {
                        for &b in &self.succ[a] {
                            next[b as usize] = true;
                        }
                    }
                }
                std::mem::swap(&mut cur, &mut next);
                t += 1;
            }
            worst = worst.max(t);
        }
        worst
    }

    /// Lexicographically smallest `w` of length `gap` with `u·w·v` admissible.
    /// Empty `u` or `v` leaves that side unconstrained.
    pub fn connecting_word(&self, u: &[Symbol], v: &[Symbol], gap: usize) -> Result<Word> {
        self.check_admissible(u)?;
        self.check_admissible(v)?;
        let no_connector = || Error::NoConnector {
            left: Word::from(u).to_string(),
            right: Word::from(v).to_string(),
            gap,
        };
        let end_ok = |s: Symbol| v.first().is_none_or(|&v0| self.allows(s, v0));
        if gap == 0 {
            return match (u.last(), v.first()) {
                (Some(&a), Some(&b)) if !self.allows(a, b) => Err(no_connector()),
                _ => Ok(Word::empty()),
            };
        }
        // reach[t][s]: a path of t symbols starting at s can end compatibly with v
        let k = self.size;
        let mut reach = vec![vec![false; k]; gap + 1];
        for (s, r) in reach[1].iter_mut().enumerate() {
            *r = end_ok(s as Symbol);
        }
        for t in 2..=gap {
            for s in 0..k {
                reach[t][s] = self.succ[s].iter().any(|&b| reach[t - 1][b as usize]);
            }
        }
        let all: Vec<Symbol> = (0..k as Symbol).collect();
        let mut out = Vec::with_capacity(gap);
        let mut candidates: &[Symbol] = match u.last() {
            Some(&a) => &self.succ[a as usize],
            None => &all,
        };
        for remaining in (1..=gap).rev() {
            let s = *candidates
                .iter()
                .find(|&&s| reach[remaining][s as usize])
                .ok_or_else(no_connector)?;
            out.push(s);
            candidates = &self.succ[s as usize];
        }
        Ok(Word(out))
    }

    /// The `n`-block presentation: symbols are admissible `n`-words, with a
    /// transition `a -> b` when they overlap in `n-1` symbols.
    pub fn higher_block(&self, n: usize) -> BlockPresentation {
        assert!(n >= 1, "block length must be positive");
        let blocks = self.words(n);
        let index: HashMap<Word, usize> = blocks
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        let mut succ = Vec::with_capacity(blocks.len());
        let mut tail: Vec<Symbol> = Vec::with_capacity(n);
        for a in &blocks {
            let last = *a.last().expect("block length >= 1");
            let mut list = Vec::new();
            for &s in &self.succ[last as usize] {
                tail.clear();
                tail.extend_from_slice(&a[1..]);
                tail.push(s);
                if let Some(&b) = index.get(tail.as_slice()) {
                    list.push(b as Symbol);
                }
            }
            list.sort_unstable();
            succ.push(list);
        }
        let sft = Sft {
            size: blocks.len(),
            succ,
            label: if n == 1 {
                self.label.clone()
            } else {
                format!("{}[{n}-block]", self.label)
            },
        };
        BlockPresentation {
            sft,
            blocks,
            block_len: n,
            index,
        }
    }

    /// The subshift of sequences with no occurrence of `w`, presented on the
    /// `|w|`-block alphabet with the state `w` isolated.
    pub fn forbid_word(&self, w: &[Symbol]) -> Result<ForbiddenShift> {
        if w.is_empty() {
            return Err(Error::Inadmissible("empty forbidden word".into()));
        }
        self.check_admissible(w)?;
        let mut presentation = self.higher_block(w.len());
        let state = *presentation
            .index
            .get(w)
            .ok_or_else(|| Error::Inadmissible(Word::from(w).to_string()))?;
        let st = state as Symbol;
        presentation.sft.succ[state].clear();
        for list in &mut presentation.sft.succ {
            list.retain(|&s| s != st);
        }
        presentation.sft.label = format!("{} avoiding {}", self.label, Word::from(w));
        let empty = presentation.sft.classify() == Classification::Empty;
        Ok(ForbiddenShift {
            base: self.clone(),
            presentation,
            forbidden_state: state,
            forbidden: Word::from(w),
            empty,
        })
    }
}

fn unreachable_pair(succ: &[Vec<usize>]) -> Option<(usize, usize)> {
    let n = succ.len();
    for i in 0..n {
        let mut seen = vec![false; n];
        let mut stack: Vec<usize> = succ[i].clone();
        while let Some(u) = stack.pop() {
            if !seen[u] {
                seen[u] = true;
                stack.extend(succ[u].iter().copied());
            }
        }
        if let Some(j) = seen.iter().position(|&s| !s) {
            return Some((i, j));
        }
    }
    None
}

/// An SFT recoded on its admissible `n`-words, with the coding dictionary.
#[derive(Clone, Debug)]
pub struct BlockPresentation {
    sft: Sft,
    blocks: Vec<Word>,
    block_len: usize,
    index: HashMap<Word, usize>,
}

impl BlockPresentation {
    pub fn sft(&self) -> &Sft {
        &self.sft
    }

    pub fn blocks(&self) -> &[Word] {
        &self.blocks
    }

    pub fn block(&self, s: Symbol) -> &Word {
        &self.blocks[s as usize]
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn state_of(&self, w: &[Symbol]) -> Option<Symbol> {
        self.index.get(w).map(|&i| i as Symbol)
    }

    /// Recodes an original word of length `>= block_len` into block symbols.
    pub fn lift_word(&self, w: &[Symbol]) -> Option<Word> {
        if w.len() < self.block_len {
            return None;
        }
        w.windows(self.block_len)
            .map(|win| self.state_of(win))
            .collect::<Option<Vec<_>>>()
            .map(Word)
    }

    /// Decodes a block word back to the original alphabet.
    pub fn decode(&self, w: &[Symbol]) -> Word {
        let mut out = Word::empty();
        if let Some((&first, rest)) = w.split_first() {
            out.extend_from_slice(self.block(first));
            for &s in rest {
                out.push(*self.block(s).last().expect("nonempty block"));
            }
        }
        out
    }
}

/// Result of [`Sft::forbid_word`]. The `empty` flag is a value, not an error.
#[derive(Clone, Debug)]
pub struct ForbiddenShift {
    base: Sft,
    presentation: BlockPresentation,
    forbidden_state: usize,
    forbidden: Word,
    empty: bool,
}

impl ForbiddenShift {
    pub fn sft(&self) -> &Sft {
        &self.presentation.sft
    }

    pub fn presentation(&self) -> &BlockPresentation {
        &self.presentation
    }

    pub fn base(&self) -> &Sft {
        &self.base
    }

    pub fn forbidden(&self) -> &Word {
        &self.forbidden
    }

    pub fn forbidden_state(&self) -> Symbol {
        self.forbidden_state as Symbol
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    pub fn classify(&self) -> Classification {
        self.presentation.sft.classify()
    }

    /// Admissibility of a word over the original alphabet: admissible in the
    /// base shift and free of the forbidden word.
    pub fn admits(&self, w: &[Symbol]) -> bool {
        let l = self.presentation.block_len;
        if w.len() < l {
            return self.base.is_admissible(w);
        }
        match self.presentation.lift_word(w) {
            Some(blocks) => {
                !blocks.contains(&(self.forbidden_state as Symbol))
                    && self.presentation.sft.is_admissible(&blocks)
            }
            None => false,
        }
    }

    /// Number of admissible words of length `n`, measured in original symbols.
    pub fn count_words(&self, n: usize) -> u128 {
        let l = self.presentation.block_len;
        if n < l {
            return self.base.count_words(n);
        }
        let c = self.presentation.sft.count_words(n - l + 1);
        // the isolated forbidden state still counts once as a length-1 path
        if n == l {
            c - 1
        } else {
            c
        }
    }
}

/// A point `z = p · q q q ...` given by a preperiod `p` and a primitive period `q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EventuallyPeriodicPoint {
    preperiod: Word,
    period: Word,
}

impl EventuallyPeriodicPoint {
    /// Normalizes to a primitive period and the shortest preperiod.
    pub fn new(preperiod: Word, period: Word) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidPoint("period must be nonempty".into()));
        }
        let p = period.len();
        let root = (1..=p)
            .find(|&d| p.is_multiple_of(d) && (0..p).all(|i| period[i] == period[i % d]))
            .expect("d = p always works");
        let mut period: Vec<Symbol> = period[..root].to_vec();
        let mut pre = preperiod.into_inner();
        while let (Some(&a), Some(&b)) = (pre.last(), period.last()) {
            if a != b {
                break;
            }
            pre.pop();
            period.rotate_right(1);
        }
        Ok(EventuallyPeriodicPoint {
            preperiod: Word(pre),
            period: Word(period),
        })
    }

    pub fn periodic(period: Word) -> Result<Self> {
        Self::new(Word::empty(), period)
    }

    /// The fixed point `s s s ...`.
    pub fn fixed(s: Symbol) -> Self {
        EventuallyPeriodicPoint {
            preperiod: Word::empty(),
            period: Word(vec![s]),
        }
    }

    pub fn preperiod(&self) -> &Word {
        &self.preperiod
    }

    pub fn period(&self) -> &Word {
        &self.period
    }

    pub fn symbol_at(&self, i: usize) -> Symbol {
        let pre = self.preperiod.len();
        if i < pre {
            self.preperiod[i]
        } else {
            self.period[(i - pre) % self.period.len()]
        }
    }

    /// The first `n` symbols.
    pub fn prefix(&self, n: usize) -> Word {
        (0..n).map(|i| self.symbol_at(i)).collect()
    }

    /// Number of distinct points in the forward orbit.
    pub fn orbit_len(&self) -> usize {
        self.preperiod.len() + self.period.len()
    }

    /// `sigma^i` of this point.
    pub fn shift(&self, i: usize) -> Self {
        let pre = self.preperiod.len();
        if i < pre {
            EventuallyPeriodicPoint {
                preperiod: Word(self.preperiod[i..].to_vec()),
                period: self.period.clone(),
            }
        } else {
            let mut period = self.period.0.clone();
            period.rotate_left((i - pre) % self.period.len());
            EventuallyPeriodicPoint {
                preperiod: Word::empty(),
                period: Word(period),
            }
        }
    }

    /// Distinct length-`l` windows along the orbit.
    pub fn orbit_windows(&self, l: usize) -> BTreeSet<Word> {
        (0..self.orbit_len())
            .map(|i| self.shift(i).prefix(l))
            .collect()
    }

    /// Whether the infinite sequence is a point of `sft`.
    pub fn is_admissible_in(&self, sft: &Sft) -> bool {
        let l = self.preperiod.len() + 2 * self.period.len();
        sft.is_admissible(&self.prefix(l))
    }

    pub fn check_admissible_in(&self, sft: &Sft) -> Result<()> {
        if self.is_admissible_in(sft) {
            Ok(())
        } else {
            Err(Error::InvalidPoint(format!(
                "{self} is not a point of {}",
                sft.label()
            )))
        }
    }
}

impl fmt::Display for EventuallyPeriodicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})^inf", self.preperiod, self.period)
    }
}

/// The metric `d(x, y) = 2^-min{i : x_i != y_i}` and its Bowen version.
#[derive(Clone, Copy, Debug, Default)]
pub struct SymbolicMetric;

impl SymbolicMetric {
    pub fn first_disagreement(a: &[Symbol], b: &[Symbol]) -> Option<usize> {
        a.iter().zip(b).position(|(x, y)| x != y)
    }

    /// `2^-e` for a scale exponent `e`.
    pub fn radius(e: u32) -> f64 {
        (-(e as f64)).exp2()
    }

    /// Exact distance between two eventually periodic points.
    pub fn distance(x: &EventuallyPeriodicPoint, y: &EventuallyPeriodicPoint) -> f64 {
        let pre = x.preperiod.len().max(y.preperiod.len());
        let p = x.period.len();
        let q = y.period.len();
        let span = pre + p / graph::gcd(p, q) * q;
        match (0..span).find(|&i| x.symbol_at(i) != y.symbol_at(i)) {
            Some(i) => (-(i as f64)).exp2(),
            None => 0.0,
        }
    }

    /// `d(y, closure of the orbit of z)`, which for eventually periodic `z` is
    /// a minimum over finitely many orbit points.
    pub fn orbit_distance(y: &EventuallyPeriodicPoint, z: &EventuallyPeriodicPoint) -> f64 {
        (0..z.orbit_len())
            .map(|i| Self::distance(y, &z.shift(i)))
            .fold(f64::INFINITY, f64::min)
    }

    /// `d_n(x, y) = max_{i<n} d(sigma^i x, sigma^i y)` for sequences known on
    /// enough coordinates; `None` when they agree on everything supplied.
    pub fn bowen_distance(a: &[Symbol], b: &[Symbol], n: usize) -> Option<f64> {
        let f = Self::first_disagreement(a, b)?;
        let shift = f.min(n.saturating_sub(1));
        Some((-((f - shift) as f64)).exp2())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::from_digits(s)
    }

    #[test]
    fn admissibility_examples() {
        assert!(Sft::full_shift(2).is_admissible(&w("0110")));
        assert!(!Sft::golden_mean().is_admissible(&w("0110")));
        assert!(Sft::golden_mean().is_admissible(&w("0101")));
        assert!(!Sft::full_shift(2).is_admissible(&w("0120")));
    }

    #[test]
    fn count_words_examples() {
        assert_eq!(Sft::full_shift(2).count_words(3), 8);
        assert_eq!(Sft::golden_mean().count_words(4), 8);
        assert_eq!(Sft::full_shift(3).count_words(2), 9);
    }

    #[test]
    fn count_words_matches_enumeration() {
        let gm = Sft::golden_mean();
        for n in 1..=10 {
            let brute = (0u32..1 << n)
                .filter(|x| x & (x >> 1) == 0)
                .count() as u128;
            assert_eq!(gm.count_words(n), brute, "n = {n}");
        }
    }

    #[test]
    fn primitivity_gap_examples() {
        assert_eq!(Sft::full_shift(2).primitivity_gap(), Ok(1));
        assert_eq!(Sft::golden_mean().primitivity_gap(), Ok(2));
        let identity = Sft::new(2, &[vec![1, 0], vec![0, 1]]).unwrap();
        let err = identity.primitivity_gap().unwrap_err();
        assert!(matches!(err, Error::NotMixing(ref m) if m.contains("entry")));
        let swap = Sft::new(2, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(matches!(swap.primitivity_gap(), Err(Error::NotMixing(_))));
    }

    #[test]
    fn connecting_word_examples() {
        let full = Sft::full_shift(2);
        assert_eq!(full.connecting_word(&w("1"), &w("1"), 1).unwrap(), w("0"));
        let gm = Sft::golden_mean();
        assert_eq!(gm.connecting_word(&w("01"), &w("10"), 2).unwrap(), w("00"));
        assert_eq!(gm.connecting_word(&w("1"), &w("1"), 1).unwrap(), w("0"));
        assert!(matches!(
            gm.connecting_word(&w("1"), &w("1"), 0),
            Err(Error::NoConnector { .. })
        ));
        assert_eq!(gm.connecting_word(&w("0"), &w("1"), 0).unwrap(), Word::empty());
    }

    #[test]
    fn connector_with_open_ends() {
        let gm = Sft::golden_mean();
        assert_eq!(gm.connecting_word(&w("1"), &[], 3).unwrap(), w("000"));
        assert_eq!(gm.connecting_word(&[], &w("1"), 2).unwrap(), w("00"));
    }

    #[test]
    fn higher_block_examples() {
        let hb = Sft::full_shift(2).higher_block(2);
        assert_eq!(hb.sft().size(), 4);
        assert_eq!(hb.sft().transition_count(), 8);
        let gm = Sft::golden_mean().higher_block(2);
        assert_eq!(gm.blocks(), &[w("00"), w("01"), w("10")]);
        let id = Sft::golden_mean().higher_block(1);
        assert_eq!(id.sft().matrix(), Sft::golden_mean().matrix());
    }

    #[test]
    fn block_decode_roundtrip() {
        let hb = Sft::golden_mean().higher_block(3);
        let word = w("0100101");
        let lifted = hb.lift_word(&word).unwrap();
        assert!(hb.sft().is_admissible(&lifted));
        assert_eq!(hb.decode(&lifted), word);
    }

    #[test]
    fn forbid_word_examples() {
        let f = Sft::full_shift(2).forbid_word(&w("11")).unwrap();
        assert_eq!(f.count_words(4), 8);
        assert!(!f.is_empty());

        let f = Sft::full_shift(2).forbid_word(&w("0")).unwrap();
        assert_eq!(f.count_words(5), 1);
        assert!(f.admits(&w("11111")));
        assert_eq!(
            f.classify(),
            Classification::Reducible {
                largest_component: vec![1],
                cyclic_components: 1
            }
        );

        let f = Sft::full_shift(3).forbid_word(&w("0")).unwrap();
        for n in 1..6 {
            assert_eq!(f.count_words(n), 1 << n);
        }
        assert!(f.admits(&w("1221")));
        assert!(!f.admits(&w("1021")));
    }

    #[test]
    fn classification_examples() {
        assert_eq!(Sft::full_shift(2).classify(), Classification::Mixing { gap: 1 });
        let zero = Sft::new(1, &[vec![0]]).unwrap();
        assert_eq!(zero.classify(), Classification::Empty);
        let two_loops = Sft::new(2, &[vec![1, 1], vec![0, 1]]).unwrap();
        assert!(matches!(two_loops.classify(), Classification::Reducible { cyclic_components: 2, .. }));
        let swap = Sft::new(2, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(swap.classify(), Classification::Periodic { period: 2 });
    }

    #[test]
    fn invalid_matrices_are_rejected() {
        assert!(Sft::new(2, &[vec![1, 2], vec![0, 1]]).is_err());
        assert!(Sft::new(2, &[vec![1, 1]]).is_err());
        assert!(Sft::new(0, &[]).is_err());
    }

    #[test]
    fn point_normalization() {
        // 1 (0101)^inf = (10)^inf
        let p = EventuallyPeriodicPoint::new(w("1"), w("0101")).unwrap();
        assert!(p.preperiod().is_empty());
        assert_eq!(p.period(), &w("10"));
        let q = EventuallyPeriodicPoint::new(w("1"), w("0")).unwrap();
        assert_eq!(q.prefix(3), w("100"));
        assert_eq!(q.orbit_len(), 2);
    }

    #[test]
    fn metric_on_points() {
        let zero = EventuallyPeriodicPoint::fixed(0);
        let one = EventuallyPeriodicPoint::fixed(1);
        assert_eq!(SymbolicMetric::distance(&zero, &one), 1.0);
        let x = EventuallyPeriodicPoint::new(w("000"), w("1")).unwrap();
        assert_eq!(SymbolicMetric::distance(&zero, &x), 0.125);
        assert_eq!(SymbolicMetric::distance(&x, &x), 0.0);
        // orbit of 000(1)^inf contains 1^inf
        assert_eq!(SymbolicMetric::orbit_distance(&one, &x), 0.0);
        assert_eq!(SymbolicMetric::bowen_distance(&w("0001"), &w("0000"), 2), Some(0.25));
        assert_eq!(SymbolicMetric::bowen_distance(&w("0001"), &w("0000"), 4), Some(1.0));
    }
}
