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

//! Logical data precedence graph: explicit dependencies between consecutive
//! non-commuting gates, annotated with latency-weighted depth priorities.

use std::collections::VecDeque;
use std::fmt::Write;

use crate::circuit::{Circuit, KindId};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ldpg {
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
    priorities: Option<Vec<u64>>,
}

/// Pairwise commutation of kinds acting on a common qubit.
struct KindTable {
    commute: Vec<Vec<bool>>,
    used: Vec<KindId>,
}

impl KindTable {
    fn new(circuit: &Circuit) -> Self {
        let n = circuit.kinds().len();
        let mut seen = vec![false; n];
        for g in circuit.gates() {
            seen[g.kind.0] = true;
        }
        let used: Vec<KindId> = (0..n).filter(|&k| seen[k]).map(KindId).collect();
        let commute = (0..n)
            .map(|a| (0..n).map(|b| circuit.kinds_commute(KindId(a), KindId(b))).collect())
            .collect();
        KindTable { commute, used }
    }

    fn commutes(&self, a: KindId, b: KindId) -> bool {
        self.commute[a.0][b.0]
    }
}

impl Ldpg {
    /// Builds the graph one qubit line at a time. A gate `g` earlier on the
    /// line of qubit `q` is a parent of `c` when the two do not commute and
    /// no gate between them on that line is linked to both by a chain of
    /// non-commuting pairs, i.e. commuting reorderings on the line can
    /// bring `g` directly in front of `c`.
    pub fn build(circuit: &Circuit) -> Ldpg {
        let n = circuit.len();
        let table = KindTable::new(circuit);
        let mut lines: Vec<Vec<usize>> = vec![Vec::new(); circuit.num_qubits()];
        let mut parents: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut frontier: Vec<KindId> = Vec::new();

        for c in circuit.gates() {
            for &q in &c.qubits {
                frontier.clear();
                for &gid in lines[q].iter().rev() {
                    let g = circuit.gate(gid);
                    let blocks_c = !table.commutes(g.kind, c.kind);
                    let chained = frontier.iter().any(|&f| !table.commutes(g.kind, f));
                    if blocks_c && !chained && !parents[c.id].contains(&gid) {
                        parents[c.id].push(gid);
                    }
                    if (blocks_c || chained) && !frontier.contains(&g.kind) {
                        frontier.push(g.kind);
                        // Every remaining gate is chained through the frontier.
                        if table
                            .used
                            .iter()
                            .all(|&k| frontier.iter().any(|&f| !table.commutes(k, f)))
                        {
                            break;
                        }
                    }
                }
                lines[q].push(c.id);
            }
        }
        for p in &mut parents {
            p.sort_unstable();
        }
        let mut children = vec![Vec::new(); n];
        for (c, ps) in parents.iter().enumerate() {
            for &p in ps {
                children[p].push(c);
            }
        }
        Ldpg {
            parents,
            children,
            priorities: None,
        }
    }

    /// Graph from an explicit edge list; used for debugging and tests.
    pub fn from_edges(num_nodes: usize, edges: &[(usize, usize)]) -> Ldpg {
        let mut parents = vec![Vec::new(); num_nodes];
        let mut children = vec![Vec::new(); num_nodes];
        for &(a, b) in edges {
            if !children[a].contains(&b) {
                children[a].push(b);
                parents[b].push(a);
            }
        }
        parents.iter_mut().for_each(|v| v.sort_unstable());
        children.iter_mut().for_each(|v| v.sort_unstable());
        Ldpg {
            parents,
            children,
            priorities: None,
        }
    }

    pub fn len(&self) -> usize {
        self.parents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parents.is_empty()
    }

    pub fn parents(&self, gate: usize) -> &[usize] {
        &self.parents[gate]
    }

    pub fn children(&self, gate: usize) -> &[usize] {
        &self.children[gate]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = self
            .children
            .iter()
            .enumerate()
            .flat_map(|(p, cs)| cs.iter().map(move |&c| (p, c)))
            .collect();
        e.sort_unstable();
        e
    }

    pub fn has_edge(&self, parent: usize, child: usize) -> bool {
        self.children[parent].contains(&child)
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| self.children[i].is_empty())
    }

    /// Kahn order; fails on a cycle.
    pub fn topological_order(&self) -> Result<Vec<usize>> {
        let n = self.len();
        let mut indeg: Vec<usize> = self.parents.iter().map(Vec::len).collect();
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &c in &self.children[v] {
                indeg[c] -= 1;
                if indeg[c] == 0 {
                    queue.push_back(c);
                }
            }
        }
        if order.len() != n {
            return Err(Error::Cycle);
        }
        Ok(order)
    }

    /// Latency-weighted depth: a leaf gets its own latency, every other gate
    /// its latency plus the largest priority among its children.
    pub fn assign_priorities(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.len() != self.len() {
            return Err(Error::Malformed(format!(
                "graph has {} nodes, circuit has {} gates",
                self.len(),
                circuit.len()
            )));
        }
        let order = self.topological_order()?;
        let mut prio = vec![0u64; self.len()];
        for &v in order.iter().rev() {
            let below = self.children[v].iter().map(|&c| prio[c]).max().unwrap_or(0);
            prio[v] = circuit.gate(v).latency as u64 + below;
        }
        self.priorities = Some(prio);
        Ok(())
    }

    pub fn priorities(&self) -> Option<&[u64]> {
        self.priorities.as_deref()
    }

    pub fn priority(&self, gate: usize) -> Option<u64> {
        self.priorities.as_ref().map(|p| p[gate])
    }

    pub fn max_priority(&self) -> u64 {
        self.priorities
            .as_ref()
            .and_then(|p| p.iter().copied().max())
            .unwrap_or(0)
    }

    /// Whether `to` depends (transitively) on `from`.
    pub fn reaches(&self, from: usize, to: usize) -> bool {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![from];
        while let Some(v) = stack.pop() {
            if v == to {
                return true;
            }
            for &c in &self.children[v] {
                if !seen[c] {
                    seen[c] = true;
                    stack.push(c);
                }
            }
        }
        false
    }

    /// `parent child` lines followed by a `# priorities` table of `gate priority` lines.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (p, c) in self.edges() {
            writeln!(out, "{p} {c}").unwrap();
        }
        if let Some(prio) = &self.priorities {
            out.push_str("# priorities\n");
            for (g, p) in prio.iter().enumerate() {
                writeln!(out, "{g} {p}").unwrap();
            }
        }
        out
    }
}

pub fn build_ldpg(circuit: &Circuit) -> Ldpg {
    Ldpg::build(circuit)
}

pub fn assign_priorities(mut ldpg: Ldpg, circuit: &Circuit) -> Result<Ldpg> {
    ldpg.assign_priorities(circuit)?;
    Ok(ldpg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::commutes;
    use crate::fixtures::nine_gate_circuit;

    fn build(c: &Circuit) -> Ldpg {
        let mut g = Ldpg::build(c);
        g.assign_priorities(c).unwrap();
        g
    }

    #[test]
    fn nine_gate_priorities_unit_latency() {
        let c = nine_gate_circuit(1);
        let g = build(&c);
        assert_eq!(g.priorities().unwrap(), &[4, 3, 3, 2, 3, 2, 2, 1, 1]);
    }

    #[test]
    fn nine_gate_priorities_two_qubit_latency_two() {
        let c = nine_gate_circuit(2);
        let g = build(&c);
        assert_eq!(g.priorities().unwrap(), &[7, 5, 5, 4, 5, 4, 4, 2, 2]);
    }

    #[test]
    fn nine_gate_relationships() {
        // gate ids are label - 1
        let g = build(&nine_gate_circuit(1));
        assert_eq!(g.children(0), &[3, 4, 5, 7]);
        assert_eq!(g.parents(3), &[0, 1]);
        assert_eq!(g.children(3), &[8]);
        assert!(g.has_edge(0, 7));
        assert!(!g.has_edge(0, 6));
        assert_eq!(g.parents(8), &[3, 5, 6]);
    }

    #[test]
    fn single_gate_has_no_edges() {
        let mut b = Circuit::builder(2);
        b.gate("cx", &[0, 1], &[], None).unwrap();
        let c = b.build().unwrap();
        let g = build(&c);
        assert!(g.edges().is_empty());
        assert_eq!(g.priorities().unwrap(), &[1]);
    }

    #[test]
    fn chain_priorities_count_down() {
        let mut b = Circuit::builder(1);
        for _ in 0..5 {
            b.gate("h", &[0], &[], None).unwrap();
        }
        let c = b.build().unwrap();
        let g = build(&c);
        assert_eq!(g.priorities().unwrap(), &[5, 4, 3, 2, 1]);
        assert_eq!(g.edges(), vec![(0, 1), (1, 2), (2, 3), (3, 4)]);
    }

    #[test]
    fn no_commuting_pairs_bounds_fan_in_and_out() {
        let mut b = Circuit::builder(4);
        for (a, c) in [(0, 1), (2, 3), (1, 2), (0, 3), (0, 2), (1, 3), (0, 1)] {
            b.gate("cx", &[a, c], &[], None).unwrap();
        }
        let c = b.build().unwrap();
        let g = Ldpg::build(&c);
        for i in 0..c.len() {
            assert!(g.parents(i).len() <= 2);
            assert!(g.children(i).len() <= 2);
        }
    }

    #[test]
    fn cycle_is_reported() {
        let mut b = Circuit::builder(1);
        b.gate("h", &[0], &[], None).unwrap();
        b.gate("h", &[0], &[], None).unwrap();
        let c = b.build().unwrap();
        let mut g = Ldpg::from_edges(2, &[(0, 1), (1, 0)]);
        assert!(matches!(g.assign_priorities(&c), Err(Error::Cycle)));
    }

    #[test]
    fn edges_never_join_commuting_gates() {
        let c = nine_gate_circuit(1);
        let g = build(&c);
        for (p, ch) in g.edges() {
            assert!(!commutes(c.gate(p), c.gate(ch)));
            assert!(g.priority(p) > g.priority(ch));
        }
    }

    #[test]
    fn edge_list_export() {
        let g = build(&nine_gate_circuit(1));
        let text = g.to_edge_list();
        assert!(text.starts_with("0 3\n"));
        assert!(text.contains("# priorities\n0 4\n"));
    }
}
