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

//! Small reference circuits shared by tests, the CLI and the bindings.

use crate::circuit::Circuit;

/// Nine-gate, four-qubit circuit with three groups of pairwise commuting
/// gates. Gate `i` here is the `(i + 1)`-th gate in program order; the four
/// ZZ rotations commute among themselves and the second CX depends on all
/// of the ZZ rotations that touch qubits 2 and 3.
pub const NINE_GATE_CIRCUIT_JSON: &str = include_str!("../data/nine_gate_circuit.json");

/// The nine-gate circuit with one-qubit gates at latency 1 and two-qubit
/// gates at `two_qubit_latency`.
pub fn nine_gate_circuit(two_qubit_latency: u32) -> Circuit {
    let mut doc: crate::circuit::CircuitDocument =
        serde_json::from_str(NINE_GATE_CIRCUIT_JSON).expect("fixture parses");
    for k in &mut doc.gate_kinds {
        if k.arity == 2 {
            k.default_latency = two_qubit_latency;
        }
    }
    doc.into_circuit().expect("fixture is valid")
}
