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

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid gate kind '{name}': {reason}")]
    InvalidGateKind { name: String, reason: String },
    #[error("unknown gate kind '{0}'")]
    UnknownGateKind(String),
    #[error("gate kind '{0}' is reserved for routing and cannot appear in input circuits")]
    ReservedSwap(String),
    #[error("gate {gate}: qubit {qubit} out of range for {width} qubits")]
    QubitOutOfRange { gate: usize, qubit: usize, width: usize },
    #[error("gate {gate}: qubit {qubit} appears more than once")]
    DuplicateQubit { gate: usize, qubit: usize },
    #[error("gate {gate}: expected {expected} qubits, got {got}")]
    ArityMismatch { gate: usize, expected: usize, got: usize },
    #[error("gate {gate}: latency must be at least 1")]
    ZeroLatency { gate: usize },
    #[error("precedence graph contains a cycle")]
    Cycle,
    #[error("physical qubits {0} and {1} are not connected")]
    NotAdjacent(usize, usize),
    #[error("invalid topology: {0}")]
    InvalidTopology(String),
    #[error("operation requires the open-boundary line topology")]
    NotALine,
    #[error("invalid node coloring: {0}")]
    InvalidColoring(String),
    #[error("color {color} pairs nodes {a} and {b} in disconnected components")]
    DisconnectedPair { color: u32, a: usize, b: usize },
    #[error("color pairing did not converge within {cap} swaps (remaining distance {remaining})")]
    ColorPairingCap { cap: usize, remaining: usize },
    #[error("search exceeded its state cap of {0}")]
    StateCap(usize),
    #[error("circuit uses {logical} qubits but the topology has only {physical}")]
    WidthExceedsTopology { logical: usize, physical: usize },
    #[error("physical qubit {physical} does not support single-qubit gates (gate {gate})")]
    NoSingleQubitSupport { gate: usize, physical: usize },
    #[error("no {k}-regular graph on {n} nodes: {reason}")]
    InfeasibleRegular { n: usize, k: usize, reason: String },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("time budget exhausted after {0:.1} s")]
    BudgetExhausted(f64),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}
