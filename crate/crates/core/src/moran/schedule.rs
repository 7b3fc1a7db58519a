//! Time bookkeeping of the construction: segment lengths, the times `t_k`,
//! and the role of every coordinate.

use crate::error::{Error, Result};

use super::MoranParams;

/// What a coordinate of a level-`k` word is made of. Levels and segments are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockKind {
    /// Inside block `block` of the interleaved word of segment `segment` at `level`.
    Shadow {
        level: usize,
        segment: usize,
        block: usize,
    },
    Connector,
    YVisit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoranSchedule {
    pub big_m: usize,
    pub m: usize,
    pub n: Vec<usize>,
    pub big_n: Vec<usize>,
    /// `c_k = ceil(n_k / M)`.
    pub c: Vec<usize>,
    /// `n_k + (c_k - 1)(2m + 1)`.
    pub n_hat: Vec<usize>,
    /// `t_0 = -m, t_k = t_{k-1} + N_k (n_hat_k + m)`; index `k` holds `t_k`.
    pub t: Vec<i64>,
}

impl MoranSchedule {
    pub fn new(params: &MoranParams) -> Result<Self> {
        let levels = params.n_seq.len();
        if levels == 0 || levels != params.big_n_seq.len() {
            return Err(Error::InvalidParams(
                "n_seq and N_seq must be nonempty and of equal length".into(),
            ));
        }
        if params.big_m == 0 || params.m == 0 {
            return Err(Error::InvalidParams("M and m must be positive".into()));
        }
        if params.n_seq.contains(&0) || params.big_n_seq.contains(&0) {
            return Err(Error::InvalidParams("n_k and N_k must be positive".into()));
        }
        let (big_m, m) = (params.big_m, params.m);
        let c: Vec<usize> = params.n_seq.iter().map(|&n| n.div_ceil(big_m)).collect();
        let n_hat: Vec<usize> = params
            .n_seq
            .iter()
            .zip(&c)
            .map(|(&n, &c)| n + (c - 1) * (2 * m + 1))
            .collect();
        let mut t = vec![-(m as i64)];
        for k in 0..levels {
            let prev = t[k];
            t.push(prev + (params.big_n_seq[k] * (n_hat[k] + m)) as i64);
        }
        Ok(MoranSchedule {
            big_m,
            m,
            n: params.n_seq.clone(),
            big_n: params.big_n_seq.clone(),
            c,
            n_hat,
            t,
        })
    }

    pub fn levels(&self) -> usize {
        self.n.len()
    }

    /// `t_k` as a length, for `k >= 1`.
    pub fn t_len(&self, k: usize) -> usize {
        assert!(k >= 1 && k <= self.levels(), "level {k} out of range");
        self.t[k] as usize
    }

    /// First coordinate of segment `j` (0-based) of level `i` (1-based).
    pub fn segment_start(&self, i: usize, j: usize) -> usize {
        (self.t[i - 1] + (self.m + j * (self.n_hat[i - 1] + self.m)) as i64) as usize
    }

    /// The role of each coordinate in `[0, t_k)`.
    pub fn block_map(&self, k: usize) -> Vec<BlockKind> {
        let mut map = Vec::with_capacity(self.t_len(k));
        for i in 1..=k {
            for j in 0..self.big_n[i - 1] {
                if i > 1 || j > 0 {
                    map.extend(std::iter::repeat_n(BlockKind::Connector, self.m));
                }
                let n = self.n[i - 1];
                let c = self.c[i - 1];
                for b in 0..c {
                    if b > 0 {
                        map.extend(std::iter::repeat_n(BlockKind::Connector, self.m));
                        map.push(BlockKind::YVisit);
                        map.extend(std::iter::repeat_n(BlockKind::Connector, self.m));
                    }
                    let len = if b + 1 < c { self.big_m } else { n - (c - 1) * self.big_m };
                    let kind = BlockKind::Shadow {
                        level: i,
                        segment: j + 1,
                        block: b + 1,
                    };
                    map.extend(std::iter::repeat_n(kind, len));
                }
            }
        }
        map
    }

    /// Number of level-`k+1` segments lying entirely in `[0, n)`, for `t_k <= n < t_{k+1}`.
    pub fn complete_segments(&self, k: usize, n: usize) -> usize {
        let tk = self.t_len(k);
        assert!(n >= tk, "n = {n} is below t_{k} = {tk}");
        let span = self.n_hat[k] + self.m;
        ((n - tk) / span).min(self.big_n[k])
    }

    /// Shadowing times before `n` counted by complete segments:
    /// `sum_{l <= k} N_l n_l + j n_{k+1}`.
    pub fn n_rel(&self, k: usize, n: usize) -> usize {
        let done: usize = (0..k).map(|l| self.big_n[l] * self.n[l]).sum();
        done + self.complete_segments(k, n) * self.n[k]
    }

    /// `b_n = n - n_rel`.
    pub fn b(&self, k: usize, n: usize) -> usize {
        n - self.n_rel(k, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{EventuallyPeriodicPoint, Word};

    fn params(big_m: usize, m: usize, n: Vec<usize>, big_n: Vec<usize>) -> MoranParams {
        MoranParams {
            e: 5,
            e0: 3,
            eta: 0.2,
            c: 0.5,
            big_m,
            m,
            n_seq: n,
            big_n_seq: big_n,
            y: EventuallyPeriodicPoint::periodic(Word::from_digits("1")).unwrap(),
            z0: EventuallyPeriodicPoint::periodic(Word::from_digits("0")).unwrap(),
        }
    }

    #[test]
    fn acceptance_schedule() {
        let s = MoranSchedule::new(&params(6, 1, vec![7, 8], vec![1, 2])).unwrap();
        assert_eq!(s.c, vec![2, 2]);
        assert_eq!(s.n_hat, vec![10, 11]);
        assert_eq!(s.t, vec![-1, 10, 34]);
        assert_eq!(s.segment_start(1, 0), 0);
        assert_eq!(s.segment_start(2, 0), 11);
        assert_eq!(s.segment_start(2, 1), 23);
    }

    #[test]
    fn block_map_partitions_and_counts_shadow() {
        let s = MoranSchedule::new(&params(4, 2, vec![5, 9, 3], vec![2, 3, 4])).unwrap();
        for k in 1..=3 {
            let map = s.block_map(k);
            assert_eq!(map.len(), s.t_len(k));
            let shadow = map
                .iter()
                .filter(|b| matches!(b, BlockKind::Shadow { .. }))
                .count();
            let expect: usize = (0..k).map(|i| s.big_n[i] * s.n[i]).sum();
            assert_eq!(shadow, expect);
            for i in 1..=k {
                for j in 0..s.big_n[i - 1] {
                    assert!(matches!(
                        map[s.segment_start(i, j)],
                        BlockKind::Shadow { level, segment, block: 1 } if level == i && segment == j + 1
                    ));
                }
            }
        }
    }

    #[test]
    fn b_n_examples() {
        let s = MoranSchedule::new(&params(6, 1, vec![7, 8], vec![1, 2])).unwrap();
        // n = t_1: nothing of level 2 yet, b = t_1 - n_1
        assert_eq!(s.complete_segments(1, 10), 0);
        assert_eq!(s.b(1, 10), 3);
        // first level-2 segment [11, 22) is complete at n = 22
        assert_eq!(s.complete_segments(1, 21), 0);
        assert_eq!(s.complete_segments(1, 22), 1);
        assert_eq!(s.b(1, 22), 22 - 15);
        assert_eq!(s.complete_segments(1, 33), 1);
    }
}
