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

//! Filling the precedence table round by round.
//!
//! Gates are taken in descending priority. When a round contains gates
//! that share a qubit, its interaction graph is edge colored and the color
//! classes run one after another. Before each class the router brings the
//! operands of every two-qubit gate next to each other. All operations are
//! packed as early as their dependencies and qubit occupancy allow.

pub mod pdpt;
pub mod verify;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::color_pairing::{greedy_color_pairing_with, left_accumulation_on_line, Color, NodeColoring};
use crate::edge_coloring::{edge_color_baseline, edge_color_greedy_with, long_path_coloring_with};
use crate::error::{Error, Result};
use crate::ldpg::Ldpg;
use crate::seed;
use crate::topology::{ConnectivityGraph, DistanceMatrix, InteractionGraph, LtpMap};

pub use pdpt::{Operation, Pdpt, PdptDocument, PdptEntry, PdptTotals, Role};
pub use verify::{verify_document, verify_schedule, Verdict, Violation};

/// Tie-breaking rule for equal-priority gates that share qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum StrategyKind {
    /// Deterministic Vizing coloring.
    Baseline,
    /// First-fit coloring over a random edge order.
    Greedy,
    /// Two-colored long path first, laid along the line.
    LongPath,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 3] = [StrategyKind::Baseline, StrategyKind::Greedy, StrategyKind::LongPath];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Baseline => "baseline",
            StrategyKind::Greedy => "greedy",
            StrategyKind::LongPath => "long-path",
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "baseline" => Ok(StrategyKind::Baseline),
            "greedy" => Ok(StrategyKind::Greedy),
            "long-path" | "longpath" => Ok(StrategyKind::LongPath),
            other => Err(Error::InvalidParams(format!("unknown strategy `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Strategy {
    pub kind: StrategyKind,
    /// Seeded runs tried by [`strategy_best_of`].
    pub repetitions: usize,
    pub seed: u64,
    pub swap_latency: u32,
}

impl Strategy {
    pub fn new(kind: StrategyKind, repetitions: usize, seed: u64) -> Self {
        Strategy {
            kind,
            repetitions,
            seed,
            swap_latency: 1,
        }
    }

    pub fn baseline() -> Self {
        Self::new(StrategyKind::Baseline, 1, 0)
    }

    pub fn with_swap_latency(mut self, latency: u32) -> Self {
        self.swap_latency = latency;
        self
    }
}

/// A circuit with its precedence graph and priority rounds, reusable
/// across many scheduling runs.
#[derive(Clone, Debug)]
pub struct PreparedCircuit<'a> {
    circuit: &'a Circuit,
    ldpg: Ldpg,
    /// Gate ids per priority value, highest priority first.
    rounds: Vec<Vec<usize>>,
}

impl<'a> PreparedCircuit<'a> {
    pub fn new(circuit: &'a Circuit) -> Result<Self> {
        let mut ldpg = Ldpg::build(circuit);
        ldpg.assign_priorities(circuit)?;
        let prio = ldpg.priorities().expect("priorities assigned");
        let mut by_prio: Vec<usize> = (0..circuit.len()).collect();
        by_prio.sort_by_key(|&g| (std::cmp::Reverse(prio[g]), g));
        let mut rounds: Vec<Vec<usize>> = Vec::new();
        for g in by_prio {
            match rounds.last_mut() {
                Some(r) if prio[r[0]] == prio[g] => r.push(g),
                _ => rounds.push(vec![g]),
            }
        }
        Ok(PreparedCircuit { circuit, ldpg, rounds })
    }

    pub fn circuit(&self) -> &Circuit {
        self.circuit
    }

    pub fn ldpg(&self) -> &Ldpg {
        &self.ldpg
    }

    pub fn rounds(&self) -> &[Vec<usize>] {
        &self.rounds
    }
}

/// One run of `strategy.kind` seeded with `strategy.seed`.
pub fn schedule(circuit: &Circuit, topology: &ConnectivityGraph, strategy: &Strategy) -> Result<Pdpt> {
    let prepared = PreparedCircuit::new(circuit)?;
    schedule_prepared(&prepared, topology, strategy.kind, strategy.seed, strategy.swap_latency)
}

pub fn schedule_prepared(
    prepared: &PreparedCircuit<'_>,
    topology: &ConnectivityGraph,
    kind: StrategyKind,
    seed: u64,
    swap_latency: u32,
) -> Result<Pdpt> {
    Run::new(prepared, topology, kind, seed, swap_latency)?.execute()
}

/// Baseline once plus `strategy.repetitions` seeded runs of the strategy.
/// Keeps the fewest gates, then the smallest depth, then the earliest run.
pub fn strategy_best_of(circuit: &Circuit, topology: &ConnectivityGraph, strategy: &Strategy) -> Result<Pdpt> {
    let prepared = PreparedCircuit::new(circuit)?;
    best_of_prepared(&prepared, topology, strategy)
}

pub fn best_of_prepared(
    prepared: &PreparedCircuit<'_>,
    topology: &ConnectivityGraph,
    strategy: &Strategy,
) -> Result<Pdpt> {
    if strategy.repetitions == 0 {
        return Err(Error::InvalidParams("repetitions must be at least 1".into()));
    }
    let mut best = schedule_prepared(prepared, topology, StrategyKind::Baseline, strategy.seed, strategy.swap_latency)?;
    if strategy.kind == StrategyKind::Baseline {
        return Ok(best);
    }
    for rep in 0..strategy.repetitions {
        let seed = run_seed(strategy.seed, rep);
        let run = schedule_prepared(prepared, topology, strategy.kind, seed, strategy.swap_latency)?;
        if (run.gate_count(), run.depth()) < (best.gate_count(), best.depth()) {
            best = run;
        }
    }
    Ok(best)
}

/// Seed of repetition `rep` under a strategy seed.
pub fn run_seed(strategy_seed: u64, rep: usize) -> u64 {
    seed::derive(&[strategy_seed, rep as u64])
}

/// Logical pairs of a class; a one-qubit gate appears as `(q, q)`.
type ClassPairs = Vec<(usize, usize)>;

struct Run<'p, 'c> {
    prepared: &'p PreparedCircuit<'c>,
    topology: &'p ConnectivityGraph,
    kind: StrategyKind,
    rng: ChaCha8Rng,
    swap_latency: u32,
    line: bool,
    dist: Option<DistanceMatrix>,
    map: LtpMap,
    busy: Vec<u64>,
    gate_end: Vec<u64>,
    ops: Vec<Operation>,
    swaps: usize,
    /// Class order last used for each tied interaction graph.
    repeats: HashMap<ClassPairs, Vec<ClassPairs>>,
}

impl<'p, 'c> Run<'p, 'c> {
    fn new(
        prepared: &'p PreparedCircuit<'c>,
        topology: &'p ConnectivityGraph,
        kind: StrategyKind,
        seed: u64,
        swap_latency: u32,
    ) -> Result<Self> {
        let circuit = prepared.circuit;
        if circuit.num_qubits() > topology.num_physical() {
            return Err(Error::WidthExceedsTopology {
                logical: circuit.num_qubits(),
                physical: topology.num_physical(),
            });
        }
        if swap_latency == 0 {
            return Err(Error::InvalidParams("SWAP latency must be at least 1".into()));
        }
        if topology.num_physical() > 0 && !topology.is_connected() {
            return Err(Error::InvalidTopology("hardware graph is disconnected".into()));
        }
        let line = topology.is_line();
        Ok(Run {
            prepared,
            topology,
            kind,
            rng: ChaCha8Rng::seed_from_u64(seed),
            swap_latency,
            line,
            dist: (!line).then(|| topology.distance_matrix()),
            map: LtpMap::identity(circuit.num_qubits(), topology.num_physical())?,
            busy: vec![0; topology.num_physical()],
            gate_end: vec![0; circuit.len()],
            ops: Vec::with_capacity(circuit.len()),
            swaps: 0,
            repeats: HashMap::new(),
        })
    }

    fn execute(mut self) -> Result<Pdpt> {
        let rounds = &self.prepared.rounds;
        let mut planned: Vec<Option<Vec<Vec<usize>>>> = vec![None; rounds.len()];
        if self.line {
            if let Some(first) = rounds.iter().position(|r| self.has_two_qubit(r)) {
                let (classes, path) = self.classes(&rounds[first]);
                self.map = self.initial_map(&classes, path)?;
                planned[first] = Some(classes);
            }
        }
        let initial_map = self.map.clone();
        for (round, plan) in rounds.iter().zip(planned) {
            if self.needs_list_order(round) {
                self.place_list(round)?;
                continue;
            }
            let classes = match plan {
                Some(c) => c,
                None => self.classes(round).0,
            };
            for class in &classes {
                self.place_class(class)?;
            }
        }
        let depth = self.busy.iter().copied().max().unwrap_or(0);
        Ok(Pdpt {
            num_physical: self.topology.num_physical(),
            num_gates: self.prepared.circuit.len(),
            initial_map,
            final_map: self.map,
            ops: self.ops,
            swap_latency: self.swap_latency,
            swaps: self.swaps,
            depth,
        })
    }

    /// True for rounds whose gates share qubits but are all executable
    /// under the current map; those skip the class split.
    fn needs_list_order(&self, round: &[usize]) -> bool {
        let circuit = self.prepared.circuit;
        let mut seen = vec![false; circuit.num_qubits()];
        let mut shared = false;
        for &g in round {
            let gate = circuit.gate(g);
            for &q in &gate.qubits {
                shared |= std::mem::replace(&mut seen[q], true);
            }
            if gate.arity() == 2
                && !self.topology.is_adjacent(self.map.physical(gate.qubits[0]), self.map.physical(gate.qubits[1]))
            {
                return false;
            }
        }
        shared
    }

    /// List scheduling: repeatedly places the gate that can start first.
    fn place_list(&mut self, round: &[usize]) -> Result<()> {
        let mut left = round.to_vec();
        while !left.is_empty() {
            let (i, _) = left
                .iter()
                .enumerate()
                .map(|(i, &g)| (i, (self.ready_time(g), g)))
                .min_by_key(|&(_, key)| key)
                .unwrap();
            let g = left.remove(i);
            self.place_gate(g)?;
        }
        Ok(())
    }

    fn ready_time(&self, g: usize) -> u64 {
        let gate = self.prepared.circuit.gate(g);
        self.prepared
            .ldpg
            .parents(g)
            .iter()
            .map(|&p| self.gate_end[p])
            .chain(gate.qubits.iter().map(|&l| self.busy[self.map.physical(l)]))
            .max()
            .unwrap_or(0)
    }

    fn has_two_qubit(&self, gates: &[usize]) -> bool {
        gates.iter().any(|&g| self.prepared.circuit.gate(g).arity() == 2)
    }

    /// Splits a round into qubit-disjoint classes. Also returns the long
    /// path when one was computed.
    fn classes(&mut self, round: &[usize]) -> (Vec<Vec<usize>>, Option<Vec<usize>>) {
        let circuit = self.prepared.circuit;
        let graph = InteractionGraph::from_gates(circuit.num_qubits(), round.iter().map(|&g| circuit.gate(g)));
        if graph.max_degree() <= 1 {
            let path = (self.kind == StrategyKind::LongPath).then(|| {
                graph.edges.first().map(|e| vec![e.a, e.b]).unwrap_or_default()
            });
            return (vec![round.to_vec()], path);
        }
        let key = pair_key(&graph);
        if let Some(previous) = self.repeats.get_mut(&key) {
            previous.reverse();
            let order = previous.clone();
            return (classes_from_pairs(&graph, &order), None);
        }
        let (coloring, path) = match self.kind {
            StrategyKind::Baseline => (edge_color_baseline(&graph), None),
            StrategyKind::Greedy => (edge_color_greedy_with(&graph, &mut self.rng), None),
            StrategyKind::LongPath => {
                let (path, c) = long_path_coloring_with(&graph, &mut self.rng);
                (c, Some(path))
            }
        };
        let classes = coloring.classes(&graph);
        let order: Vec<ClassPairs> = classes
            .iter()
            .map(|class| class.iter().map(|&g| logical_pair(circuit, g)).collect())
            .collect();
        self.repeats.insert(key, order);
        (classes, path)
    }

    /// On a line: the long path laid left to right, or the pairs of the
    /// first class with two-qubit gates placed side by side. Remaining
    /// logical qubits follow in index order.
    fn initial_map(&self, classes: &[Vec<usize>], path: Option<Vec<usize>>) -> Result<LtpMap> {
        let circuit = self.prepared.circuit;
        let n = circuit.num_qubits();
        let mut order = match path {
            Some(p) if !p.is_empty() => p,
            _ => {
                let first = classes
                    .iter()
                    .find(|c| self.has_two_qubit(c))
                    .expect("round has a two-qubit gate");
                first
                    .iter()
                    .map(|&g| circuit.gate(g))
                    .filter(|g| g.arity() == 2)
                    .flat_map(|g| g.qubits.iter().copied())
                    .collect()
            }
        };
        let mut placed = vec![false; n];
        order.iter().for_each(|&l| placed[l] = true);
        order.extend((0..n).filter(|&l| !placed[l]));
        LtpMap::from_physical_order(&order, self.topology.num_physical())
    }

    fn place_class(&mut self, class: &[usize]) -> Result<()> {
        let circuit = self.prepared.circuit;
        let pairs: Vec<(usize, usize)> = class
            .iter()
            .map(|&g| circuit.gate(g))
            .filter(|g| g.arity() == 2)
            .map(|g| (self.map.physical(g.qubits[0]), self.map.physical(g.qubits[1])))
            .collect();
        if pairs.iter().any(|&(a, b)| !self.topology.is_adjacent(a, b)) {
            let mut colors: Vec<Option<Color>> = vec![None; self.topology.num_physical()];
            for (i, &(a, b)) in pairs.iter().enumerate() {
                colors[a] = Some(i as Color);
                colors[b] = Some(i as Color);
            }
            let swaps = if self.line {
                left_accumulation_on_line(&colors)
            } else {
                let coloring = NodeColoring::new(colors)?;
                let dist = self.dist.as_ref().expect("distances for general graphs");
                match greedy_color_pairing_with(&coloring, self.topology, dist, &mut self.rng) {
                    Ok(s) => s,
                    Err(Error::ColorPairingCap { .. }) if class.len() > 1 => {
                        let (left, right) = class.split_at(class.len() / 2);
                        self.place_class(left)?;
                        return self.place_class(right);
                    }
                    Err(e) => return Err(e),
                }
            };
            for &(a, b) in swaps.iter() {
                self.emit_swap(a, b);
            }
        }
        for &g in class {
            self.place_gate(g)?;
        }
        Ok(())
    }

    fn emit_swap(&mut self, a: usize, b: usize) {
        let start = self.busy[a].max(self.busy[b]);
        let op = Operation::swap(self.swaps, a, b, start, self.swap_latency);
        self.busy[a] = op.end();
        self.busy[b] = op.end();
        self.ops.push(op);
        self.swaps += 1;
        self.map.swap_in_place(a, b);
    }

    fn place_gate(&mut self, g: usize) -> Result<()> {
        let gate = self.prepared.circuit.gate(g);
        let mut physical = [0usize; 2];
        for (slot, &l) in physical.iter_mut().zip(&gate.qubits) {
            *slot = self.map.physical(l);
        }
        let physical = &physical[..gate.arity()];
        if let [p] = physical {
            if !self.topology.supports_single_qubit(*p) {
                return Err(Error::NoSingleQubitSupport { gate: g, physical: *p });
            }
        }
        debug_assert!(physical.len() == 1 || self.topology.is_adjacent(physical[0], physical[1]));
        let ready = self.ready_time(g);
        let op = Operation::gate(g, physical, ready, gate.latency);
        for &p in physical {
            self.busy[p] = op.end();
        }
        self.gate_end[g] = op.end();
        self.ops.push(op);
        Ok(())
    }
}

fn logical_pair(circuit: &Circuit, g: usize) -> (usize, usize) {
    let q = &circuit.gate(g).qubits;
    let (a, b) = (q[0], *q.last().unwrap());
    (a.min(b), a.max(b))
}

fn pair_key(graph: &InteractionGraph) -> ClassPairs {
    let mut key: ClassPairs = graph
        .edges
        .iter()
        .map(|e| (e.a.min(e.b), e.a.max(e.b)))
        .chain(graph.self_loops.iter().map(|&(q, _)| (q, q)))
        .collect();
    key.sort_unstable();
    key
}

/// Maps a stored class order back onto the gates of a round with the same
/// interaction graph.
fn classes_from_pairs(graph: &InteractionGraph, order: &[ClassPairs]) -> Vec<Vec<usize>> {
    let mut pool: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for e in &graph.edges {
        pool.entry((e.a.min(e.b), e.a.max(e.b))).or_default().push(e.gate);
    }
    for &(q, g) in &graph.self_loops {
        pool.entry((q, q)).or_default().push(g);
    }
    pool.values_mut().for_each(|v| v.reverse());
    order
        .iter()
        .map(|class| {
            let mut gates: Vec<usize> = class
                .iter()
                .map(|p| pool.get_mut(p).and_then(Vec::pop).expect("same interaction graph"))
                .collect();
            gates.sort_unstable();
            gates
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::nine_gate_circuit;

    fn zz_circuit(n: usize, edges: &[(usize, usize)]) -> Circuit {
        let mut b = Circuit::builder(n);
        for &(x, y) in edges {
            b.gate("zz", &[x, y], &[0.5], None).unwrap();
        }
        b.build().unwrap()
    }

    #[test]
    fn nine_gate_circuit_on_complete_graph() {
        let c = nine_gate_circuit(1);
        let topo = ConnectivityGraph::complete(4);
        for kind in StrategyKind::ALL {
            let p = schedule(&c, &topo, &Strategy::new(kind, 1, 3)).unwrap();
            assert_eq!(p.swap_count(), 0);
            assert_eq!(p.depth(), 4);
            assert!(verify_schedule(&p, &c, &topo).is_ok());
        }
    }

    #[test]
    fn sub_line_needs_no_routing() {
        let c = zz_circuit(4, &[(0, 1), (1, 2), (2, 3)]);
        let topo = ConnectivityGraph::line(4);
        for kind in StrategyKind::ALL {
            let p = schedule(&c, &topo, &Strategy::new(kind, 1, 9)).unwrap();
            assert_eq!(p.swap_count(), 0, "{kind}");
            assert!(verify_schedule(&p, &c, &topo).is_ok());
        }
    }

    #[test]
    fn complete_four_on_line_needs_three_swaps() {
        let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let c = zz_circuit(4, &edges);
        let topo = ConnectivityGraph::line(4);
        for kind in StrategyKind::ALL {
            for seed in 0..20 {
                let p = strategy_best_of(&c, &topo, &Strategy::new(kind, 4, seed)).unwrap();
                assert_eq!(p.swap_count(), 3, "{kind} seed {seed}");
                assert!(verify_schedule(&p, &c, &topo).is_ok());
            }
        }
    }

    #[test]
    fn routing_on_a_grid() {
        let edges = [(0, 8), (2, 6), (1, 7), (3, 5), (0, 4), (4, 8)];
        let c = zz_circuit(9, &edges);
        let topo = ConnectivityGraph::grid(3, 3);
        for kind in StrategyKind::ALL {
            let p = schedule(&c, &topo, &Strategy::new(kind, 1, 1)).unwrap();
            let verdict = verify_schedule(&p, &c, &topo);
            assert!(verdict.is_ok(), "{:?}", verdict.violations);
            assert!(p.swap_count() > 0);
        }
    }

    #[test]
    fn determinism() {
        let edges = [(0, 3), (1, 4), (2, 5), (0, 5), (1, 2), (3, 4), (0, 1), (2, 3), (4, 5)];
        let c = zz_circuit(6, &edges);
        let topo = ConnectivityGraph::line(6);
        let s = Strategy::new(StrategyKind::Greedy, 5, 42);
        assert_eq!(strategy_best_of(&c, &topo, &s).unwrap(), strategy_best_of(&c, &topo, &s).unwrap());
    }

    #[test]
    fn rejects_bad_inputs() {
        let c = zz_circuit(4, &[(0, 1)]);
        assert!(matches!(
            schedule(&c, &ConnectivityGraph::line(3), &Strategy::baseline()),
            Err(Error::WidthExceedsTopology { .. })
        ));
        let split = ConnectivityGraph::new(4, &[(0, 1), (2, 3)], None).unwrap();
        assert!(matches!(schedule(&c, &split, &Strategy::baseline()), Err(Error::InvalidTopology(_))));
        let s = Strategy::new(StrategyKind::Greedy, 0, 0);
        assert!(strategy_best_of(&c, &ConnectivityGraph::line(4), &s).is_err());
        let mut b = Circuit::builder(2);
        b.gate("rx", &[1], &[0.1], None).unwrap();
        let c = b.build().unwrap();
        let no_loops = ConnectivityGraph::new(2, &[(0, 1)], Some(&[0])).unwrap();
        assert!(matches!(
            schedule(&c, &no_loops, &Strategy::baseline()),
            Err(Error::NoSingleQubitSupport { .. })
        ));
    }

    #[test]
    fn strategy_names_round_trip() {
        for kind in StrategyKind::ALL {
            assert_eq!(kind.name().parse::<StrategyKind>().unwrap(), kind);
        }
        assert!("fastest".parse::<StrategyKind>().is_err());
    }
}
