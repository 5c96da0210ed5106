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

//! The verifier must reject hand-corrupted tables.

use qsched::fixtures::nine_gate_circuit;
use qsched::scheduler::{verify_document, PdptDocument, Role, Violation};
use qsched::{schedule, ConnectivityGraph, Strategy};

fn nine_gate_table() -> (qsched::Circuit, ConnectivityGraph, PdptDocument) {
    let circuit = nine_gate_circuit(1);
    let topo = ConnectivityGraph::complete(4);
    let pdpt = schedule(&circuit, &topo, &Strategy::baseline()).unwrap();
    (circuit, topo, pdpt.to_document())
}

#[test]
fn untouched_table_passes() {
    let (c, t, doc) = nine_gate_table();
    assert!(verify_document(&doc, &c, &t).is_ok());
}

#[test]
fn detects_double_booked_qubit() {
    let (c, t, mut doc) = nine_gate_table();
    let extra = doc.columns[1][0].clone();
    let mut clash = doc.columns[1]
        .iter()
        .find(|e| e.op != extra.op)
        .cloned()
        .expect("a second operation in column 1");
    clash.qubit = extra.qubit;
    doc.columns[1].push(clash);
    let verdict = verify_document(&doc, &c, &t);
    assert!(verdict
        .violations
        .iter()
        .any(|v| matches!(v, Violation::DoubleBooked { column: 1, .. })));
}

#[test]
fn detects_child_before_parent() {
    let (c, t, mut doc) = nine_gate_table();
    // Gate 0 (cx on 0,1) is a parent of gate 3; move it to the last column.
    let cells: Vec<_> = doc
        .columns
        .iter_mut()
        .flat_map(|col| {
            let (moved, kept): (Vec<_>, Vec<_>) =
                col.drain(..).partition(|e| e.role == Role::LogicalGate && e.op == 0);
            *col = kept;
            moved
        })
        .collect();
    assert_eq!(cells.len(), 2);
    doc.columns.push(cells);
    doc.totals.depth += 1;
    let verdict = verify_document(&doc, &c, &t);
    assert!(
        verdict
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Dependency { parent: 0, .. })),
        "{:?}",
        verdict.violations
    );
}

#[test]
fn detects_missing_gate_and_bad_totals() {
    let (c, t, mut doc) = nine_gate_table();
    for col in &mut doc.columns {
        col.retain(|e| e.op != 8 || e.role != Role::LogicalGate);
    }
    let verdict = verify_document(&doc, &c, &t);
    assert!(verdict.violations.contains(&Violation::MissingGate { gate: 8 }));

    let (c, t, mut doc) = nine_gate_table();
    doc.totals.swaps += 1;
    let verdict = verify_document(&doc, &c, &t);
    assert!(verdict.violations.iter().any(|v| matches!(v, Violation::Totals { .. })));
}

#[test]
fn detects_non_adjacent_gate_on_a_line() {
    let circuit = nine_gate_circuit(1);
    let line = ConnectivityGraph::line(4);
    let complete = ConnectivityGraph::complete(4);
    let doc = schedule(&circuit, &complete, &Strategy::baseline()).unwrap().to_document();
    // The complete-graph table uses pairs that a line lacks.
    let verdict = verify_document(&doc, &circuit, &line);
    assert!(verdict.violations.iter().any(|v| matches!(v, Violation::NotAdjacent { .. })));
}
