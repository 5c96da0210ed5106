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

//! Priority-driven scheduling of quantum circuits onto restricted qubit
//! connectivity.
//!
//! A circuit is turned into a layered dependency graph whose nodes carry
//! priorities. Gates are then placed round by round, highest priority
//! first, inserting SWAPs so that every two-qubit gate acts on adjacent
//! physical qubits.

pub mod bench;
pub mod circuit;
pub mod color_pairing;
pub mod edge_coloring;
pub mod error;
pub mod fixtures;
pub mod ldpg;
pub mod oracles;
pub mod qaoa;
pub mod scheduler;
pub mod seed;
pub mod topology;

pub use circuit::{Circuit, CircuitBuilder, CommutationClass, Gate, GateKind, KindId};
pub use error::{Error, Result};
pub use ldpg::Ldpg;
pub use scheduler::{schedule, strategy_best_of, verify_schedule, Pdpt, Strategy, StrategyKind};
pub use topology::{ConnectivityGraph, InteractionGraph, LtpMap};
