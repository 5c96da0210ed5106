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

//! Color pairing: moving same-colored physical qubits next to each other with
//! as few exchanges as possible.
//!
//! A node coloring marks the two physical qubits of every pending two-qubit
//! gate with a shared color. The color-pair distance `D` sums, over all
//! pairs, the hop distance minus one; a single exchange changes `D` by at
//! most two, so `ceil(D / 2)` exchanges are always needed. On the open line
//! the left-accumulation sweep is optimal.

use std::collections::HashMap;

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::topology::{ConnectivityGraph, DistanceMatrix};

pub type Color = u32;

/// Per-physical-qubit optional colors, each color used on at most two qubits.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NodeColoring {
    colors: Vec<Option<Color>>,
}

impl NodeColoring {
    /// Colors used on a single node are dropped.
    pub fn new(colors: Vec<Option<Color>>) -> Result<Self> {
        let mut count: HashMap<Color, usize> = HashMap::new();
        for c in colors.iter().flatten() {
            *count.entry(*c).or_default() += 1;
        }
        if let Some((c, n)) = count.iter().find(|(_, &n)| n > 2) {
            return Err(Error::InvalidColoring(format!("color {c} used on {n} nodes")));
        }
        let colors = colors
            .into_iter()
            .map(|c| c.filter(|c| count[c] == 2))
            .collect();
        Ok(NodeColoring { colors })
    }

    /// Pair `i` receives color `i`.
    pub fn from_pairs(num_nodes: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut colors = vec![None; num_nodes];
        for (i, &(a, b)) in pairs.iter().enumerate() {
            for v in [a, b] {
                if v >= num_nodes {
                    return Err(Error::InvalidColoring(format!("node {v} out of range")));
                }
                if colors[v].is_some() || a == b {
                    return Err(Error::InvalidColoring(format!("node {v} in two pairs")));
                }
                colors[v] = Some(i as Color);
            }
        }
        Ok(NodeColoring { colors })
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn get(&self, node: usize) -> Option<Color> {
        self.colors[node]
    }

    pub fn as_slice(&self) -> &[Option<Color>] {
        &self.colors
    }

    /// `(color, lower node, higher node)` sorted by lower node.
    pub fn pairs(&self) -> Vec<(Color, usize, usize)> {
        let mut first: HashMap<Color, usize> = HashMap::new();
        let mut out = Vec::new();
        for (v, c) in self.colors.iter().enumerate() {
            if let Some(c) = c {
                if let Some(u) = first.remove(c) {
                    out.push((*c, u, v));
                } else {
                    first.insert(*c, v);
                }
            }
        }
        out.sort_by_key(|&(_, u, _)| u);
        out
    }

    pub fn partner(&self, node: usize) -> Option<usize> {
        let c = self.colors[node]?;
        (0..self.colors.len()).find(|&v| v != node && self.colors[v] == Some(c))
    }

    /// Exchanges the colors of two nodes.
    pub fn swap(&mut self, a: usize, b: usize) {
        self.colors.swap(a, b);
    }

    pub fn is_compatible(&self, graph: &ConnectivityGraph) -> bool {
        self.pairs().iter().all(|&(_, a, b)| graph.is_adjacent(a, b))
    }
}

/// Exchanges between adjacent physical qubits, in application order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SwapSequence(pub Vec<(usize, usize)>);

impl SwapSequence {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, usize)> {
        self.0.iter()
    }

    /// Replays the sequence on a copy of `coloring`.
    pub fn apply(&self, coloring: &NodeColoring) -> NodeColoring {
        let mut c = coloring.clone();
        for &(a, b) in &self.0 {
            c.swap(a, b);
        }
        c
    }

    pub fn all_adjacent(&self, graph: &ConnectivityGraph) -> bool {
        self.0.iter().all(|&(a, b)| graph.is_adjacent(a, b))
    }
}

fn check_len(coloring: &NodeColoring, graph: &ConnectivityGraph) -> Result<()> {
    if coloring.len() != graph.num_physical() {
        return Err(Error::InvalidColoring(format!(
            "coloring covers {} nodes, graph has {}",
            coloring.len(),
            graph.num_physical()
        )));
    }
    Ok(())
}

/// Sum over color pairs of (shortest-path length - 1).
pub fn color_pair_distance(coloring: &NodeColoring, graph: &ConnectivityGraph) -> Result<usize> {
    check_len(coloring, graph)?;
    let line = graph.is_line();
    let mut total = 0;
    for (color, a, b) in coloring.pairs() {
        let d = if line {
            b - a
        } else {
            graph.bfs(a)[b].ok_or(Error::DisconnectedPair { color, a, b })?
        };
        total += d - 1;
    }
    Ok(total)
}

pub fn swap_lower_bound(distance: usize) -> usize {
    distance.div_ceil(2)
}

/// Left-accumulation sweep on the open line: walking from the left, every
/// colored node pulls its partner leftward until the two touch.
pub fn left_accumulation(coloring: &NodeColoring, graph: &ConnectivityGraph) -> Result<SwapSequence> {
    check_len(coloring, graph)?;
    if !graph.is_line() {
        return Err(Error::NotALine);
    }
    Ok(left_accumulation_on_line(coloring.as_slice()))
}

/// Mirror image of [`left_accumulation`]; same swap count, different final pattern.
pub fn right_accumulation(coloring: &NodeColoring, graph: &ConnectivityGraph) -> Result<SwapSequence> {
    check_len(coloring, graph)?;
    if !graph.is_line() {
        return Err(Error::NotALine);
    }
    let n = coloring.len();
    let mirrored: Vec<_> = coloring.as_slice().iter().rev().copied().collect();
    let seq = left_accumulation_on_line(&mirrored);
    Ok(SwapSequence(
        seq.0.into_iter().map(|(k, _)| (n - 2 - k, n - 1 - k)).collect(),
    ))
}

pub(crate) fn left_accumulation_on_line(colors: &[Option<Color>]) -> SwapSequence {
    let mut c = colors.to_vec();
    let n_nodes = c.len();
    let mut swaps = Vec::new();
    let mut n = 0;
    while n < n_nodes {
        let Some(color) = c[n] else {
            n += 1;
            continue;
        };
        let Some(m) = (n + 1..n_nodes).find(|&m| c[m] == Some(color)) else {
            // unique color: treated as colorless
            n += 1;
            continue;
        };
        for k in (n + 1..m).rev() {
            c.swap(k, k + 1);
            swaps.push((k, k + 1));
        }
        n += 2;
    }
    SwapSequence(swaps)
}

/// Outcome of one exchange on the line, by its effect on the color pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MoveType {
    /// One colored node steps toward its partner (`D - 1`).
    Approach = 1,
    /// One colored node steps away from its partner (`D + 1`).
    Retreat = 2,
    /// Both nodes carry the same color (no change).
    SameColor = 3,
    /// Two pairs both get closer (`D - 2`).
    BothCloser = 4,
    /// One pair closer, the other farther (no change).
    Balanced = 5,
    /// Two pairs both get farther (`D + 2`).
    BothFarther = 6,
    /// Neither node is colored.
    Idle = 0,
}

impl MoveType {
    pub fn delta(self) -> i32 {
        match self {
            MoveType::Approach => -1,
            MoveType::Retreat => 1,
            MoveType::BothCloser => -2,
            MoveType::BothFarther => 2,
            _ => 0,
        }
    }
}

/// Classifies the exchange of nodes `a` and `a + 1` on the line.
pub fn classify_move(coloring: &NodeColoring, a: usize, b: usize) -> MoveType {
    let (ca, cb) = (coloring.get(a), coloring.get(b));
    if ca.is_some() && ca == cb {
        return MoveType::SameColor;
    }
    let step = |node: usize, to: usize| -> Option<bool> {
        let p = coloring.partner(node)?;
        Some(p.abs_diff(to) < p.abs_diff(node))
    };
    match (step(a, b), step(b, a)) {
        (None, None) => MoveType::Idle,
        (Some(closer), None) | (None, Some(closer)) => {
            if closer {
                MoveType::Approach
            } else {
                MoveType::Retreat
            }
        }
        (Some(x), Some(y)) => match (x, y) {
            (true, true) => MoveType::BothCloser,
            (false, false) => MoveType::BothFarther,
            _ => MoveType::Balanced,
        },
    }
}

/// Step cap of the general heuristic for an `n`-node graph.
pub fn greedy_cap(num_nodes: usize) -> usize {
    4 * num_nodes * num_nodes
}

/// Distance-driven heuristic for arbitrary connected graphs: take any swap
/// lowering `D` by two, else by one, else a neutral swap that brings some
/// pair closer. Ties are broken with the seeded generator.
pub fn greedy_color_pairing(
    coloring: &NodeColoring,
    graph: &ConnectivityGraph,
    seed: u64,
) -> Result<SwapSequence> {
    check_len(coloring, graph)?;
    let dist = graph.distance_matrix();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    greedy_color_pairing_with(coloring, graph, &dist, &mut rng)
}

pub(crate) fn greedy_color_pairing_with(
    coloring: &NodeColoring,
    graph: &ConnectivityGraph,
    dist: &DistanceMatrix,
    rng: &mut ChaCha8Rng,
) -> Result<SwapSequence> {
    let n = coloring.len();
    let mut colors = coloring.as_slice().to_vec();
    let mut partner = vec![usize::MAX; n];
    let mut remaining = 0usize;
    for (color, a, b) in coloring.pairs() {
        let d = dist.get(a, b).ok_or(Error::DisconnectedPair { color, a, b })?;
        partner[a] = b;
        partner[b] = a;
        remaining += d - 1;
    }
    let d = |x: usize, y: usize| dist.get(x, y).unwrap() as i64;
    let cap = greedy_cap(n);
    let mut swaps = Vec::new();
    let mut tiers: [Vec<(usize, usize)>; 3] = Default::default();
    while remaining > 0 {
        if swaps.len() >= cap {
            return Err(Error::ColorPairingCap { cap, remaining });
        }
        tiers.iter_mut().for_each(Vec::clear);
        for &(a, b) in graph.edges() {
            if colors[a].is_none() && colors[b].is_none() || colors[a] == colors[b] {
                continue;
            }
            let mut delta = 0i64;
            let mut improves = false;
            for (from, to) in [(a, b), (b, a)] {
                if colors[from].is_some() {
                    let p = partner[from];
                    let change = d(to, p) - d(from, p);
                    delta += change;
                    improves |= change < 0;
                }
            }
            match delta {
                -2 => tiers[0].push((a, b)),
                -1 => tiers[1].push((a, b)),
                0 if improves => tiers[2].push((a, b)),
                _ => {}
            }
        }
        let Some(&(a, b)) = tiers.iter().find(|t| !t.is_empty()).and_then(|t| t.choose(rng)) else {
            return Err(Error::ColorPairingCap { cap, remaining });
        };
        let mut delta = 0i64;
        for (from, to) in [(a, b), (b, a)] {
            if colors[from].is_some() {
                delta += d(to, partner[from]) - d(from, partner[from]);
            }
        }
        colors.swap(a, b);
        partner.swap(a, b);
        for v in [a, b] {
            if colors[v].is_some() {
                let p = partner[v];
                partner[p] = v;
            }
        }
        remaining = (remaining as i64 + delta) as usize;
        swaps.push((a, b));
    }
    Ok(SwapSequence(swaps))
}

#[cfg(test)]
mod tests {
    use super::*;

    const B: Option<Color> = Some(0);
    const R: Option<Color> = Some(1);
    const E: Option<Color> = None;

    fn col(v: &[Option<Color>]) -> NodeColoring {
        NodeColoring::new(v.to_vec()).unwrap()
    }

    #[test]
    fn distance_examples() {
        let line = ConnectivityGraph::line(4);
        assert_eq!(color_pair_distance(&col(&[B, E, E, B]), &line).unwrap(), 2);
        assert_eq!(color_pair_distance(&col(&[B, R, R, B]), &line).unwrap(), 2);
        assert_eq!(color_pair_distance(&col(&[B, B, R, R]), &line).unwrap(), 0);
    }

    #[test]
    fn distance_on_general_graph_matches_bfs() {
        let g = ConnectivityGraph::grid(2, 3);
        let c = NodeColoring::from_pairs(6, &[(0, 5), (1, 4)]).unwrap();
        // 0 -> 5 is three hops, 1 -> 4 is one hop
        assert_eq!(color_pair_distance(&c, &g).unwrap(), 2);
    }

    #[test]
    fn disconnected_pair_is_an_error() {
        let g = ConnectivityGraph::new(4, &[(0, 1), (2, 3)], None).unwrap();
        let c = NodeColoring::from_pairs(4, &[(0, 3)]).unwrap();
        assert!(matches!(color_pair_distance(&c, &g), Err(Error::DisconnectedPair { .. })));
    }

    #[test]
    fn lower_bound_is_ceiling() {
        assert_eq!(swap_lower_bound(0), 0);
        assert_eq!(swap_lower_bound(2), 1);
        assert_eq!(swap_lower_bound(5), 3);
    }

    #[test]
    fn coloring_normalizes_singletons_and_rejects_triples() {
        let c = col(&[B, R, E, B]);
        assert_eq!(c.get(1), None);
        assert!(NodeColoring::new(vec![B, B, B]).is_err());
    }

    #[test]
    fn left_accumulation_examples() {
        let line = ConnectivityGraph::line(4);
        let s = left_accumulation(&col(&[B, E, E, B]), &line).unwrap();
        assert_eq!(s.0, vec![(2, 3), (1, 2)]);
        let start = col(&[B, R, R, B]);
        let s = left_accumulation(&start, &line).unwrap();
        assert_eq!(s.0, vec![(2, 3), (1, 2)]);
        assert_eq!(s.apply(&start), col(&[B, B, R, R]));
        assert!(left_accumulation(&col(&[B, B, E, R, R]), &ConnectivityGraph::line(5))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn left_accumulation_moves_are_balanced_then_best() {
        let start = col(&[B, R, R, B]);
        assert_eq!(classify_move(&start, 2, 3), MoveType::Balanced);
        let mut mid = start.clone();
        mid.swap(2, 3);
        assert_eq!(classify_move(&mid, 1, 2), MoveType::BothCloser);
    }

    #[test]
    fn left_accumulation_requires_line() {
        let ring = ConnectivityGraph::ring(4);
        assert!(matches!(left_accumulation(&col(&[B, E, E, B]), &ring), Err(Error::NotALine)));
    }

    #[test]
    fn right_accumulation_mirrors() {
        let line = ConnectivityGraph::line(4);
        let start = col(&[B, E, E, B]);
        let s = right_accumulation(&start, &line).unwrap();
        assert_eq!(s.0, vec![(0, 1), (1, 2)]);
        assert_eq!(s.apply(&start), col(&[E, E, B, B]));
    }

    #[test]
    fn greedy_handles_zero_distance_and_single_pair() {
        let g = ConnectivityGraph::grid(3, 3);
        let c = NodeColoring::from_pairs(9, &[(0, 1)]).unwrap();
        assert!(greedy_color_pairing(&c, &g, 3).unwrap().is_empty());
        let c = NodeColoring::from_pairs(9, &[(0, 8)]).unwrap();
        let s = greedy_color_pairing(&c, &g, 3).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.apply(&c).is_compatible(&g));
    }

    #[test]
    fn greedy_on_star_pairs_through_the_hub() {
        let star = ConnectivityGraph::star(5);
        let c = NodeColoring::from_pairs(5, &[(1, 2)]).unwrap();
        let s = greedy_color_pairing(&c, &star, 0).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s.apply(&c).is_compatible(&star));
    }

    #[test]
    fn greedy_reports_failure_instead_of_looping() {
        // two disjoint pairs can never be adjacent at once on a star
        let star = ConnectivityGraph::star(5);
        let c = NodeColoring::from_pairs(5, &[(1, 2), (3, 4)]).unwrap();
        assert!(matches!(
            greedy_color_pairing(&c, &star, 0),
            Err(Error::ColorPairingCap { .. })
        ));
    }

    #[test]
    fn greedy_is_seed_deterministic() {
        let g = ConnectivityGraph::grid(3, 4);
        let c = NodeColoring::from_pairs(12, &[(0, 11), (3, 8), (5, 6)]).unwrap();
        let a = greedy_color_pairing(&c, &g, 42).unwrap();
        assert_eq!(a, greedy_color_pairing(&c, &g, 42).unwrap());
        assert!(a.apply(&c).is_compatible(&g));
        assert!(a.len() >= swap_lower_bound(color_pair_distance(&c, &g).unwrap()));
    }
}
