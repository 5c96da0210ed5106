// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Exact minimum SWAP count for executing every edge of a problem graph on
//! a line, by exhaustive search over initial placements and SWAP strings.
//!
//! A SWAP string is a word over the digits `0..N-1` (digit `d` exchanges
//! line positions `d` and `d + 1`) with no digit repeated immediately. An
//! edge counts as executed once its endpoints have been adjacent at some
//! point. Strings are explored depth first in lexicographic order; a prefix
//! is abandoned together with every string extending it as soon as the
//! remaining swaps cannot cover the uncovered edges, since one swap
//! creates at most two new adjacencies.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qaoa::MaxCutInstance;

#[derive(Clone, Debug, PartialEq)]
pub struct ExhaustiveConfig {
    pub max_swaps: usize,
    /// When false only the identity placement is tried.
    pub enumerate_maps: bool,
    pub time_budget: Option<Duration>,
}

impl ExhaustiveConfig {
    pub fn new(max_swaps: usize) -> Self {
        ExhaustiveConfig {
            max_swaps,
            enumerate_maps: true,
            time_budget: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExhaustiveSolution {
    pub swaps: usize,
    /// Logical node at each line position before the first swap.
    pub layout: Vec<usize>,
    /// Left positions of the SWAPs, in order.
    pub sequence: Vec<usize>,
}

/// Minimum SWAP count up to `config.max_swaps`, with a witness; `None` if
/// no string of that length suffices.
pub fn exhaustive_min_swaps(instance: &MaxCutInstance, config: &ExhaustiveConfig) -> Result<Option<ExhaustiveSolution>> {
    let n = instance.num_nodes();
    if instance.edges().len() > 64 {
        return Err(Error::InvalidParams("exhaustive search supports at most 64 edges".into()));
    }
    let started = Instant::now();
    let search = Search::new(instance, config.time_budget.map(|b| (started, b)));
    for s in 0..=config.max_swaps {
        let found = if config.enumerate_maps {
            // blocks in lexicographic order; the first hit is independent of the worker count
            layout_blocks(n)
                .par_iter()
                .map(|&(a, b)| {
                    Block::new(n, a, b)
                        .filter(|l| is_canonical(l))
                        .find_map(|l| search.solve(&l, s).map(|r| r.map(|seq| (l, seq))).transpose())
                })
                .find_map_first(|r| r)
        } else {
            let identity: Vec<usize> = (0..n).collect();
            search.solve(&identity, s).map(|r| r.map(|seq| (identity, seq))).transpose()
        };
        match found {
            Some(Ok((layout, sequence))) => return Ok(Some(ExhaustiveSolution { swaps: s, layout, sequence })),
            Some(Err(e)) => return Err(e),
            None => {}
        }
    }
    Ok(None)
}

fn is_canonical(perm: &[usize]) -> bool {
    perm.len() < 2 || perm.iter().lt(perm.iter().rev())
}

/// Leading pairs `(p[0], p[1])` of canonical layouts, in lexicographic order.
fn layout_blocks(n: usize) -> Vec<(usize, usize)> {
    if n < 2 {
        return vec![(0, usize::MAX)];
    }
    (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .filter(|&(a, b)| n > 2 || a < b)
        .collect()
}

/// Permutations of `0..n` whose first two entries are fixed, in
/// lexicographic order. `b == usize::MAX` marks the single-node case.
struct Block {
    perm: Vec<usize>,
    fixed: usize,
    done: bool,
}

impl Block {
    fn new(n: usize, a: usize, b: usize) -> Self {
        if b == usize::MAX {
            return Block { perm: (0..n).collect(), fixed: n, done: false };
        }
        let mut perm = vec![a, b];
        perm.extend((0..n).filter(|&q| q != a && q != b));
        Block { perm, fixed: 2, done: false }
    }
}

impl Iterator for Block {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.perm.clone();
        let fixed = self.fixed.min(self.perm.len());
        self.done = !next_permutation(&mut self.perm[fixed..]);
        Some(out)
    }
}

/// All permutations of `0..n` that precede their own reversal, i.e. one
/// representative per mirror pair, in lexicographic order.
pub fn canonical_layouts(n: usize) -> impl Iterator<Item = Vec<usize>> {
    layout_blocks(n)
        .into_iter()
        .flat_map(move |(a, b)| Block::new(n, a, b))
        .filter(|l| is_canonical(l))
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Number of SWAP strings of length `len` over `n - 1` digits with no
/// immediate repeat, counted by running the enumerator without pruning.
pub fn count_swap_strings(n: usize, len: usize) -> u64 {
    fn walk(n: usize, left: usize, last: Option<usize>) -> u64 {
        if left == 0 {
            return 1;
        }
        (0..n - 1)
            .filter(|&d| Some(d) != last)
            .map(|d| walk(n, left - 1, Some(d)))
            .sum()
    }
    if n < 2 {
        return u64::from(len == 0);
    }
    walk(n, len, None)
}

struct Search {
    n: usize,
    /// `edge_bit[a * n + b]`: bit of edge `{a, b}`, or 0.
    edge_bit: Vec<u64>,
    all: u64,
    budget: Option<(Instant, Duration)>,
}

struct Frame<'a> {
    search: &'a Search,
    layout: Vec<usize>,
    sequence: Vec<usize>,
    target: usize,
    nodes: u64,
}

impl Search {
    fn new(instance: &MaxCutInstance, budget: Option<(Instant, Duration)>) -> Self {
        let n = instance.num_nodes();
        let mut edge_bit = vec![0u64; n * n];
        for (i, &(a, b)) in instance.edges().iter().enumerate() {
            edge_bit[a * n + b] = 1 << i;
            edge_bit[b * n + a] = 1 << i;
        }
        let m = instance.edges().len();
        Search {
            n,
            edge_bit,
            all: if m == 64 { u64::MAX } else { (1u64 << m) - 1 },
            budget,
        }
    }

    fn check_budget(&self) -> Result<()> {
        match self.budget {
            Some((start, budget)) if start.elapsed() > budget => {
                Err(Error::BudgetExhausted(start.elapsed().as_secs_f64()))
            }
            _ => Ok(()),
        }
    }

    fn adjacent_bits(&self, layout: &[usize], pos: usize) -> u64 {
        self.edge_bit[layout[pos] * self.n + layout[pos + 1]]
    }

    /// A covering string of at most `target` swaps from `layout`, if any.
    fn solve(&self, layout: &[usize], target: usize) -> Result<Option<Vec<usize>>> {
        self.check_budget()?;
        let covered = (0..self.n.saturating_sub(1)).fold(0, |acc, p| acc | self.adjacent_bits(layout, p));
        let mut frame = Frame {
            search: self,
            layout: layout.to_vec(),
            sequence: Vec::with_capacity(target),
            target,
            nodes: 0,
        };
        if frame.dfs(covered, None)? {
            Ok(Some(frame.sequence))
        } else {
            Ok(None)
        }
    }
}

impl Frame<'_> {
    fn dfs(&mut self, covered: u64, last: Option<usize>) -> Result<bool> {
        let s = self.search;
        let uncovered = (s.all & !covered).count_ones() as usize;
        let left = self.target - self.sequence.len();
        if uncovered == 0 {
            return Ok(true);
        }
        if uncovered > 2 * left {
            return Ok(false);
        }
        self.nodes += 1;
        if self.nodes.is_multiple_of(4096) {
            s.check_budget()?;
        }
        let n = s.n;
        for d in 0..n - 1 {
            if Some(d) == last {
                continue;
            }
            self.layout.swap(d, d + 1);
            let mut next = covered;
            if d > 0 {
                next |= s.adjacent_bits(&self.layout, d - 1);
            }
            if d + 2 < n {
                next |= s.adjacent_bits(&self.layout, d + 1);
            }
            self.sequence.push(d);
            let done = self.dfs(next, Some(d))?;
            if done {
                self.layout.swap(d, d + 1);
                return Ok(true);
            }
            self.sequence.pop();
            self.layout.swap(d, d + 1);
        }
        Ok(false)
    }
}
