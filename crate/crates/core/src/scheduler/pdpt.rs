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

//! Physical data precedence table: the output of the scheduler.
//!
//! Internally a schedule is a list of timed operations. The table view
//! (one column per clock cycle, one entry per active physical qubit) is
//! materialized on demand and is the exchange format.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::topology::LtpMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Role {
    LogicalGate,
    Swap,
}

/// One gate or SWAP occupying `duration` consecutive columns from `start`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Operation {
    pub role: Role,
    /// Gate id for logical gates, running serial for SWAPs.
    pub id: usize,
    qubits: [usize; 2],
    width: u8,
    pub start: u64,
    pub duration: u32,
}

impl Operation {
    pub fn gate(id: usize, physical: &[usize], start: u64, duration: u32) -> Self {
        let mut qubits = [usize::MAX; 2];
        qubits[..physical.len()].copy_from_slice(physical);
        Operation {
            role: Role::LogicalGate,
            id,
            qubits,
            width: physical.len() as u8,
            start,
            duration,
        }
    }

    pub fn swap(serial: usize, a: usize, b: usize, start: u64, duration: u32) -> Self {
        Operation {
            role: Role::Swap,
            id: serial,
            qubits: [a, b],
            width: 2,
            start,
            duration,
        }
    }

    pub fn physical(&self) -> &[usize] {
        &self.qubits[..self.width as usize]
    }

    pub fn end(&self) -> u64 {
        self.start + u64::from(self.duration)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pdpt {
    pub(crate) num_physical: usize,
    pub(crate) num_gates: usize,
    pub(crate) initial_map: LtpMap,
    pub(crate) final_map: LtpMap,
    pub(crate) ops: Vec<Operation>,
    pub(crate) swap_latency: u32,
    pub(crate) swaps: usize,
    pub(crate) depth: u64,
}

impl Pdpt {
    pub fn num_physical(&self) -> usize {
        self.num_physical
    }

    pub fn initial_map(&self) -> &LtpMap {
        &self.initial_map
    }

    pub fn final_map(&self) -> &LtpMap {
        &self.final_map
    }

    /// Operations in placement order.
    pub fn operations(&self) -> &[Operation] {
        &self.ops
    }

    pub fn swap_latency(&self) -> u32 {
        self.swap_latency
    }

    pub fn swap_count(&self) -> usize {
        self.swaps
    }

    /// Circuit gates plus SWAPs.
    pub fn gate_count(&self) -> usize {
        self.num_gates + self.swaps
    }

    /// Operations acting on two physical qubits, SWAPs included.
    pub fn two_qubit_count(&self) -> usize {
        self.ops.iter().filter(|op| op.width == 2).count()
    }

    /// Number of clock-cycle columns.
    pub fn depth(&self) -> u64 {
        self.depth
    }

    /// Finish time of the last two-qubit operation.
    pub fn two_qubit_depth(&self) -> u64 {
        self.ops
            .iter()
            .filter(|op| op.width == 2)
            .map(Operation::end)
            .max()
            .unwrap_or(0)
    }

    pub fn to_document(&self) -> PdptDocument {
        let mut columns: Vec<Vec<PdptEntry>> = vec![Vec::new(); self.depth as usize];
        let mut map = self.initial_map.clone();
        replay(&self.ops, &mut map, |op, map| {
            for &q in op.physical() {
                for col in op.start..op.end() {
                    columns[col as usize].push(PdptEntry {
                        qubit: q,
                        logical: map.logical(q),
                        op: op.id,
                        role: op.role,
                    });
                }
            }
        });
        for col in &mut columns {
            col.sort_by_key(|e| e.qubit);
        }
        PdptDocument {
            num_physical: self.num_physical,
            swap_latency: self.swap_latency,
            initial_map: self.initial_map.forward().to_vec(),
            final_map: self.final_map.forward().to_vec(),
            columns,
            totals: PdptTotals {
                gates: self.gate_count(),
                swaps: self.swaps,
                depth: self.depth,
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("table serializes")
    }
}

/// Visits operations by start time while threading the map through SWAPs,
/// each SWAP taking effect when it completes. `visit` sees the map as it
/// stands when the operation begins.
pub(crate) fn replay(ops: &[Operation], map: &mut LtpMap, mut visit: impl FnMut(&Operation, &LtpMap)) {
    let mut order: Vec<usize> = (0..ops.len()).collect();
    order.sort_by_key(|&i| (ops[i].start, i));
    let mut pending: BinaryHeap<Reverse<(u64, usize)>> = BinaryHeap::new();
    for i in order {
        let op = &ops[i];
        while let Some(&Reverse((end, j))) = pending.peek() {
            if end > op.start {
                break;
            }
            pending.pop();
            let q = ops[j].physical();
            map.swap_in_place(q[0], q[1]);
        }
        visit(op, map);
        if op.role == Role::Swap {
            pending.push(Reverse((op.end(), i)));
        }
    }
    while let Some(Reverse((_, j))) = pending.pop() {
        let q = ops[j].physical();
        map.swap_in_place(q[0], q[1]);
    }
}

/// One active physical qubit in one column. `logical` is the logical
/// qubit held when the operation began.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdptEntry {
    pub qubit: usize,
    pub logical: Option<usize>,
    pub op: usize,
    pub role: Role,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdptTotals {
    pub gates: usize,
    pub swaps: usize,
    pub depth: u64,
}

/// Serialized table. Idle cells are omitted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdptDocument {
    pub num_physical: usize,
    #[serde(default = "one")]
    pub swap_latency: u32,
    pub initial_map: Vec<usize>,
    pub final_map: Vec<usize>,
    pub columns: Vec<Vec<PdptEntry>>,
    pub totals: PdptTotals,
}

fn one() -> u32 {
    1
}

impl PdptDocument {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }
}
