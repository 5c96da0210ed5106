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

//! Independent replay check of a filled table against the circuit and the
//! hardware graph.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::circuit::Circuit;
use crate::ldpg::Ldpg;
use crate::scheduler::pdpt::{replay, Operation, Pdpt, PdptDocument, Role};
use crate::topology::{ConnectivityGraph, LtpMap};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// The table's shape or maps are unusable.
    Malformed { detail: String },
    DoubleBooked { column: usize, qubit: usize },
    /// An operation's cells do not form one contiguous block.
    Fragmented { role: Role, op: usize },
    MissingGate { gate: usize },
    UnknownGate { gate: usize },
    WrongLatency { role: Role, op: usize, expected: u64, got: u64 },
    WrongArity { gate: usize, expected: usize, got: usize },
    NotAdjacent { role: Role, op: usize, a: usize, b: usize },
    WrongMapping { gate: usize, physical: usize, found: Option<usize> },
    StaleLogical { role: Role, op: usize, physical: usize },
    Dependency { parent: usize, child: usize, parent_end: u64, child_start: u64 },
    FinalMap,
    Totals { detail: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Malformed { detail } => write!(f, "malformed table: {detail}"),
            Violation::DoubleBooked { column, qubit } => {
                write!(f, "physical qubit {qubit} used twice in column {column}")
            }
            Violation::Fragmented { role, op } => write!(f, "{role:?} {op} is not one contiguous block"),
            Violation::MissingGate { gate } => write!(f, "gate {gate} never scheduled"),
            Violation::UnknownGate { gate } => write!(f, "gate {gate} is not in the circuit"),
            Violation::WrongLatency { role, op, expected, got } => {
                write!(f, "{role:?} {op} lasts {got} columns, expected {expected}")
            }
            Violation::WrongArity { gate, expected, got } => {
                write!(f, "gate {gate} occupies {got} qubits, expected {expected}")
            }
            Violation::NotAdjacent { role, op, a, b } => {
                write!(f, "{role:?} {op} on non-adjacent physical qubits {a} and {b}")
            }
            Violation::WrongMapping { gate, physical, found } => write!(
                f,
                "gate {gate} runs on physical {physical}, which holds logical {found:?}"
            ),
            Violation::StaleLogical { role, op, physical } => {
                write!(f, "{role:?} {op} records the wrong logical qubit on physical {physical}")
            }
            Violation::Dependency { parent, child, parent_end, child_start } => write!(
                f,
                "gate {child} starts at {child_start} before parent {parent} ends at {parent_end}"
            ),
            Violation::FinalMap => write!(f, "final map differs from the replayed map"),
            Violation::Totals { detail } => write!(f, "totals mismatch: {detail}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub violations: Vec<Violation>,
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify_schedule(pdpt: &Pdpt, circuit: &Circuit, topology: &ConnectivityGraph) -> Verdict {
    verify_document(&pdpt.to_document(), circuit, topology)
}

pub fn verify_document(doc: &PdptDocument, circuit: &Circuit, topology: &ConnectivityGraph) -> Verdict {
    let mut v = Vec::new();
    let n = topology.num_physical();
    let malformed = |detail: String| Violation::Malformed { detail };
    if doc.num_physical != n {
        v.push(malformed(format!("table has {} rows, hardware has {n}", doc.num_physical)));
        return Verdict { violations: v };
    }
    let maps = (
        LtpMap::from_forward(doc.initial_map.clone(), n),
        LtpMap::from_forward(doc.final_map.clone(), n),
    );
    let (Ok(initial), Ok(final_map)) = maps else {
        v.push(malformed("initial or final map is not injective or out of range".into()));
        return Verdict { violations: v };
    };
    if initial.num_logical() != circuit.num_qubits() || final_map.num_logical() != circuit.num_qubits() {
        v.push(malformed("map width differs from circuit width".into()));
        return Verdict { violations: v };
    }

    // Collect each operation's cells: column -> qubits, plus recorded logicals.
    type Cells = BTreeMap<usize, BTreeSet<usize>>;
    type Holders = BTreeMap<usize, Option<usize>>;
    let mut groups: BTreeMap<(Role, usize), (Cells, Holders)> = BTreeMap::new();
    for (t, column) in doc.columns.iter().enumerate() {
        let mut seen = BTreeSet::new();
        for e in column {
            if e.qubit >= n {
                v.push(malformed(format!("qubit {} out of range in column {t}", e.qubit)));
                continue;
            }
            if !seen.insert(e.qubit) {
                v.push(Violation::DoubleBooked { column: t, qubit: e.qubit });
            }
            let g = groups.entry((e.role, e.op)).or_default();
            g.0.entry(t).or_default().insert(e.qubit);
            g.1.entry(e.qubit).or_insert(e.logical);
        }
    }

    let mut ops = Vec::new();
    let mut recorded = Vec::new();
    for ((role, id), (cells, logicals)) in &groups {
        let first = *cells.keys().next().unwrap();
        let last = *cells.keys().last().unwrap();
        let qubits = cells.values().next().unwrap();
        let contiguous = last - first + 1 == cells.len() && cells.values().all(|q| q == qubits);
        if !contiguous || qubits.len() > 2 {
            v.push(Violation::Fragmented { role: *role, op: *id });
            continue;
        }
        let physical: Vec<usize> = qubits.iter().copied().collect();
        let duration = (last - first + 1) as u64;
        let expected = match role {
            Role::LogicalGate => {
                if *id >= circuit.len() {
                    v.push(Violation::UnknownGate { gate: *id });
                    continue;
                }
                let gate = circuit.gate(*id);
                if gate.arity() != physical.len() {
                    v.push(Violation::WrongArity { gate: *id, expected: gate.arity(), got: physical.len() });
                    continue;
                }
                u64::from(gate.latency)
            }
            Role::Swap => {
                if physical.len() != 2 {
                    v.push(Violation::Fragmented { role: *role, op: *id });
                    continue;
                }
                u64::from(doc.swap_latency)
            }
        };
        if duration != expected {
            v.push(Violation::WrongLatency { role: *role, op: *id, expected, got: duration });
        }
        if physical.len() == 2 && !topology.is_adjacent(physical[0], physical[1]) {
            v.push(Violation::NotAdjacent { role: *role, op: *id, a: physical[0], b: physical[1] });
        }
        let op = match role {
            Role::LogicalGate => Operation::gate(*id, &physical, first as u64, duration as u32),
            Role::Swap => Operation::swap(*id, physical[0], physical[1], first as u64, duration as u32),
        };
        ops.push(op);
        recorded.push(logicals.clone());
    }

    let mut start = vec![None; circuit.len()];
    for op in ops.iter().filter(|op| op.role == Role::LogicalGate) {
        start[op.id] = Some((op.start, op.end()));
    }
    for (gate, s) in start.iter().enumerate() {
        if s.is_none() {
            v.push(Violation::MissingGate { gate });
        }
    }

    // Thread the map and check operands at each operation's start.
    let index: BTreeMap<(Role, usize), usize> =
        ops.iter().enumerate().map(|(i, op)| ((op.role, op.id), i)).collect();
    let mut map = initial;
    replay(&ops, &mut map, |op, map| {
        let logicals = &recorded[index[&(op.role, op.id)]];
        for &p in op.physical() {
            if logicals.get(&p).copied().flatten() != map.logical(p) {
                v.push(Violation::StaleLogical { role: op.role, op: op.id, physical: p });
            }
        }
        if op.role == Role::LogicalGate {
            let gate = circuit.gate(op.id);
            for &p in op.physical() {
                let found = map.logical(p);
                if !found.is_some_and(|l| gate.acts_on(l)) {
                    v.push(Violation::WrongMapping { gate: op.id, physical: p, found });
                }
            }
        }
    });
    if map != final_map {
        v.push(Violation::FinalMap);
    }

    let ldpg = Ldpg::build(circuit);
    for (parent, child) in ldpg.edges() {
        if let (Some((_, parent_end)), Some((child_start, _))) = (start[parent], start[child]) {
            if child_start < parent_end {
                v.push(Violation::Dependency { parent, child, parent_end, child_start });
            }
        }
    }

    let swaps = ops.iter().filter(|op| op.role == Role::Swap).count();
    let t = &doc.totals;
    if t.swaps != swaps || t.gates != circuit.len() + swaps || t.depth != doc.columns.len() as u64 {
        v.push(Violation::Totals {
            detail: format!(
                "recorded gates {} swaps {} depth {}, table has gates {} swaps {swaps} depth {}",
                t.gates,
                t.swaps,
                t.depth,
                circuit.len() + swaps,
                doc.columns.len()
            ),
        });
    }
    Verdict { violations: v }
}
