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

//! Hardware connectivity, per-priority interaction graphs and the
//! logical-to-physical qubit map.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::circuit::Gate;
use crate::error::{Error, Result};

/// Undirected coupling graph of the physical qubits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectivityGraph {
    num_physical: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    single_qubit: Vec<bool>,
}

impl ConnectivityGraph {
    /// `self_loops = None` means every qubit supports one-qubit gates.
    pub fn new(
        num_physical: usize,
        edges: &[(usize, usize)],
        self_loops: Option<&[usize]>,
    ) -> Result<Self> {
        if num_physical == 0 {
            return Err(Error::InvalidTopology("no physical qubits".into()));
        }
        let mut set = BTreeSet::new();
        for &(a, b) in edges {
            if a >= num_physical || b >= num_physical {
                return Err(Error::InvalidTopology(format!("edge ({a}, {b}) out of range")));
            }
            if a == b {
                return Err(Error::InvalidTopology(format!(
                    "edge ({a}, {b}) is a loop; list it under self_loops"
                )));
            }
            set.insert((a.min(b), a.max(b)));
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut adjacency = vec![Vec::new(); num_physical];
        for &(a, b) in &edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        adjacency.iter_mut().for_each(|v| v.sort_unstable());
        let single_qubit = match self_loops {
            None => vec![true; num_physical],
            Some(loops) => {
                let mut s = vec![false; num_physical];
                for &q in loops {
                    if q >= num_physical {
                        return Err(Error::InvalidTopology(format!("self loop {q} out of range")));
                    }
                    s[q] = true;
                }
                s
            }
        };
        Ok(ConnectivityGraph {
            num_physical,
            edges,
            adjacency,
            single_qubit,
        })
    }

    /// Open-boundary path 0-1-...-(n-1).
    pub fn line(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::new(n, &edges, None).expect("line is valid")
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        Self::new(n, &edges, None).expect("complete graph is valid")
    }

    pub fn ring(n: usize) -> Self {
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        if n > 2 {
            edges.push((0, n - 1));
        }
        Self::new(n, &edges, None).expect("ring is valid")
    }

    /// Node 0 is the hub.
    pub fn star(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
        Self::new(n, &edges, None).expect("star is valid")
    }

    pub fn grid(rows: usize, cols: usize) -> Self {
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    edges.push((v, v + 1));
                }
                if r + 1 < rows {
                    edges.push((v, v + cols));
                }
            }
        }
        Self::new(rows * cols, &edges, None).expect("grid is valid")
    }

    pub fn num_physical(&self) -> usize {
        self.num_physical
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.adjacency[q]
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        a < self.num_physical && self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn supports_single_qubit(&self, q: usize) -> bool {
        self.single_qubit[q]
    }

    pub fn self_loops(&self) -> Vec<usize> {
        (0..self.num_physical).filter(|&q| self.single_qubit[q]).collect()
    }

    pub fn is_line(&self) -> bool {
        self.edges.len() + 1 == self.num_physical
            && self.edges.iter().all(|&(a, b)| b == a + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.bfs(0).iter().all(|d| d.is_some())
    }

    /// Hop counts from `src`; `None` for unreachable qubits.
    pub fn bfs(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.num_physical];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            for &w in &self.adjacency[v] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn distance_matrix(&self) -> DistanceMatrix {
        DistanceMatrix {
            rows: (0..self.num_physical).map(|s| self.bfs(s)).collect(),
        }
    }

    /// Accepts `line:N`, `ring:N`, `complete:N`, `star:N`, `grid:RxC`, or a
    /// topology document.
    pub fn from_spec(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let parse_n = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::InvalidTopology(format!("bad size '{s}'")))
        };
        if let Some((name, arg)) = spec.split_once(':') {
            if !name.contains('{') {
                let g = match name {
                    "line" => Self::line(parse_n(arg)?),
                    "ring" => Self::ring(parse_n(arg)?),
                    "complete" => Self::complete(parse_n(arg)?),
                    "star" => Self::star(parse_n(arg)?),
                    "grid" => {
                        let (r, c) = arg
                            .split_once('x')
                            .ok_or_else(|| Error::InvalidTopology(format!("bad grid '{arg}'")))?;
                        Self::grid(parse_n(r)?, parse_n(c)?)
                    }
                    _ => return Err(Error::InvalidTopology(format!("unknown shorthand '{name}'"))),
                };
                if g.num_physical == 0 {
                    return Err(Error::InvalidTopology("no physical qubits".into()));
                }
                return Ok(g);
            }
        }
        let doc: TopologyDocument =
            serde_json::from_str(spec).map_err(|e| Error::Malformed(e.to_string()))?;
        doc.into_graph()
    }

    pub fn to_document(&self) -> TopologyDocument {
        TopologyDocument {
            num_physical: self.num_physical,
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
            self_loops: Some(self.self_loops()),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologyDocument {
    pub num_physical: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub self_loops: Option<Vec<usize>>,
}

impl TopologyDocument {
    pub fn into_graph(self) -> Result<ConnectivityGraph> {
        let edges: Vec<_> = self.edges.iter().map(|e| (e[0], e[1])).collect();
        ConnectivityGraph::new(self.num_physical, &edges, self.self_loops.as_deref())
    }
}

/// All-pairs hop distances.
#[derive(Clone, Debug)]
pub struct DistanceMatrix {
    rows: Vec<Vec<Option<usize>>>,
}

impl DistanceMatrix {
    pub fn get(&self, a: usize, b: usize) -> Option<usize> {
        self.rows[a][b]
    }
}

/// One two-qubit gate of an interaction graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InteractionEdge {
    pub a: usize,
    pub b: usize,
    pub gate: usize,
}

/// Logical-qubit graph of the gates sharing one priority value: an edge per
/// two-qubit gate and a self loop per one-qubit gate, each tagged with its
/// gate id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InteractionGraph {
    pub num_logical: usize,
    pub edges: Vec<InteractionEdge>,
    pub self_loops: Vec<(usize, usize)>,
}

impl InteractionGraph {
    pub fn from_gates<'a>(num_logical: usize, gates: impl IntoIterator<Item = &'a Gate>) -> Self {
        let mut edges = Vec::new();
        let mut self_loops = Vec::new();
        for g in gates {
            match g.qubits[..] {
                [q] => self_loops.push((q, g.id)),
                [a, b] => edges.push(InteractionEdge { a, b, gate: g.id }),
                _ => unreachable!("gates have arity 1 or 2"),
            }
        }
        InteractionGraph {
            num_logical,
            edges,
            self_loops,
        }
    }

    /// Plain graph with edge `i` tagged as gate `i`.
    pub fn from_edges(num_logical: usize, edges: &[(usize, usize)]) -> Self {
        InteractionGraph {
            num_logical,
            edges: edges
                .iter()
                .enumerate()
                .map(|(i, &(a, b))| InteractionEdge { a, b, gate: i })
                .collect(),
            self_loops: Vec::new(),
        }
    }

    /// Edges plus self loops incident to each node.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.num_logical];
        for e in &self.edges {
            d[e.a] += 1;
            d[e.b] += 1;
        }
        for &(q, _) in &self.self_loops {
            d[q] += 1;
        }
        d
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.edges
            .iter()
            .all(|e| e.a != e.b && seen.insert((e.a.min(e.b), e.a.max(e.b))))
    }

    /// Neighbor lists over the two-qubit edges, as (neighbor, edge index).
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.num_logical];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.a].push((e.b, i));
            adj[e.b].push((e.a, i));
        }
        adj
    }
}

pub fn interaction_graph<'a>(num_logical: usize, gates: impl IntoIterator<Item = &'a Gate>) -> InteractionGraph {
    InteractionGraph::from_gates(num_logical, gates)
}

/// Injective assignment of logical qubits to physical qubits.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LtpMap {
    forward: Vec<usize>,
    reverse: Vec<Option<usize>>,
}

impl LtpMap {
    pub fn identity(num_logical: usize, num_physical: usize) -> Result<Self> {
        Self::from_forward((0..num_logical).collect(), num_physical)
    }

    /// `forward[l]` is the physical qubit hosting logical qubit `l`.
    pub fn from_forward(forward: Vec<usize>, num_physical: usize) -> Result<Self> {
        if forward.len() > num_physical {
            return Err(Error::WidthExceedsTopology {
                logical: forward.len(),
                physical: num_physical,
            });
        }
        let mut reverse = vec![None; num_physical];
        for (l, &p) in forward.iter().enumerate() {
            if p >= num_physical {
                return Err(Error::Malformed(format!("logical {l} mapped to missing physical {p}")));
            }
            if reverse[p].replace(l).is_some() {
                return Err(Error::Malformed(format!("physical {p} hosts two logical qubits")));
            }
        }
        Ok(LtpMap { forward, reverse })
    }

    /// Logical qubits listed in physical order, with idle physical qubits
    /// taking the remaining slots.
    pub fn from_physical_order(order: &[usize], num_physical: usize) -> Result<Self> {
        let mut forward = vec![usize::MAX; order.len()];
        for (p, &l) in order.iter().enumerate() {
            if l >= order.len() || forward[l] != usize::MAX {
                return Err(Error::Malformed("physical order is not a permutation".into()));
            }
            forward[l] = p;
        }
        Self::from_forward(forward, num_physical)
    }

    pub fn num_logical(&self) -> usize {
        self.forward.len()
    }

    pub fn num_physical(&self) -> usize {
        self.reverse.len()
    }

    pub fn physical(&self, logical: usize) -> usize {
        self.forward[logical]
    }

    pub fn logical(&self, physical: usize) -> Option<usize> {
        self.reverse[physical]
    }

    pub fn forward(&self) -> &[usize] {
        &self.forward
    }

    pub fn reverse(&self) -> &[Option<usize>] {
        &self.reverse
    }

    /// Exchanges the occupants of two connected physical qubits.
    pub fn apply_swap(&self, graph: &ConnectivityGraph, a: usize, b: usize) -> Result<LtpMap> {
        if !graph.is_adjacent(a, b) {
            return Err(Error::NotAdjacent(a, b));
        }
        let mut next = self.clone();
        next.swap_in_place(a, b);
        Ok(next)
    }

    /// In-place exchange without the adjacency check.
    pub fn swap_in_place(&mut self, a: usize, b: usize) {
        self.reverse.swap(a, b);
        for p in [a, b] {
            if let Some(l) = self.reverse[p] {
                self.forward[l] = p;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn swap_on_identity_line_map() {
        let g = ConnectivityGraph::line(3);
        let m = LtpMap::identity(3, 3).unwrap();
        let s = m.apply_swap(&g, 0, 1).unwrap();
        assert_eq!(s.physical(0), 1);
        assert_eq!(s.physical(1), 0);
        assert_eq!(s.logical(0), Some(1));
        assert_eq!(s.apply_swap(&g, 0, 1).unwrap(), m);
    }

    #[test]
    fn swap_into_idle_qubit_moves_logical() {
        let g = ConnectivityGraph::line(3);
        // logical 0 at physical 0, logical 1 at physical 2, physical 1 idle
        let m = LtpMap::from_forward(vec![0, 2], 3).unwrap();
        let s = m.apply_swap(&g, 0, 1).unwrap();
        // oracle: compose the permutation (0 1) with the occupancy vector
        let mut occupancy: Vec<Option<usize>> = m.reverse().to_vec();
        occupancy.swap(0, 1);
        assert_eq!(s.reverse(), &occupancy[..]);
        assert_eq!(s.logical(0), None);
        assert_eq!(s.physical(0), 1);
    }

    #[test]
    fn swap_requires_adjacency() {
        let g = ConnectivityGraph::line(4);
        let m = LtpMap::identity(4, 4).unwrap();
        assert!(matches!(m.apply_swap(&g, 0, 2), Err(Error::NotAdjacent(0, 2))));
    }

    #[test]
    fn map_rejects_collisions() {
        assert!(LtpMap::from_forward(vec![1, 1], 3).is_err());
        assert!(LtpMap::from_forward(vec![0, 1, 2], 2).is_err());
    }

    #[test]
    fn line_detection() {
        assert!(ConnectivityGraph::line(5).is_line());
        assert!(ConnectivityGraph::line(1).is_line());
        assert!(!ConnectivityGraph::ring(5).is_line());
        let shuffled = ConnectivityGraph::new(3, &[(0, 2), (2, 1)], None).unwrap();
        assert!(!shuffled.is_line());
    }

    #[test]
    fn topology_document_and_shorthand() {
        let g = ConnectivityGraph::from_spec("line:4").unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2), (2, 3)]);
        let doc = r#"{"num_physical": 3, "edges": [[0, 1], [1, 2], [1, 0]], "self_loops": [0, 2]}"#;
        let g = ConnectivityGraph::from_spec(doc).unwrap();
        assert_eq!(g.edges().len(), 2);
        assert!(!g.supports_single_qubit(1));
        assert!(ConnectivityGraph::from_spec(r#"{"num_physical": 2, "edges": [[0, 2]]}"#).is_err());
        assert_eq!(ConnectivityGraph::from_spec("grid:2x3").unwrap().edges().len(), 7);
    }

    #[test]
    fn interaction_graph_tags_gates() {
        let mut b = crate::circuit::Circuit::builder(3);
        b.gate("zz", &[0, 1], &[], None).unwrap();
        b.gate("rx", &[2], &[], None).unwrap();
        let c = b.build().unwrap();
        let ig = interaction_graph(3, c.gates());
        assert_eq!(ig.edges, vec![InteractionEdge { a: 0, b: 1, gate: 0 }]);
        assert_eq!(ig.self_loops, vec![(2, 1)]);
        assert_eq!(ig.degrees(), vec![1, 1, 1]);
        let empty = interaction_graph(3, []);
        assert!(empty.edges.is_empty() && empty.self_loops.is_empty());
    }
}
