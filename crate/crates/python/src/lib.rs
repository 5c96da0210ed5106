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

//! Python bindings: circuits, hardware graphs, scheduling, verification,
//! QAOA instances and the reference oracles.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use qsched::oracles::{exhaustive_min_swaps, heuristic_lower_bound, ExhaustiveConfig};
use qsched::qaoa::{self, MaxCutInstance, QaoaParams};
use qsched::scheduler::{self, PdptDocument, Strategy, StrategyKind};

fn err(e: qsched::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Circuit", frozen)]
struct PyCircuit(qsched::Circuit);

#[pymethods]
impl PyCircuit {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        qsched::Circuit::parse(text).map(PyCircuit).map_err(err)
    }

    /// The nine-gate example circuit.
    #[staticmethod]
    #[pyo3(signature = (two_qubit_latency = 1))]
    fn example(two_qubit_latency: u32) -> Self {
        PyCircuit(qsched::fixtures::nine_gate_circuit(two_qubit_latency))
    }

    #[getter]
    fn num_qubits(&self) -> usize {
        self.0.num_qubits()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    /// Latency-weighted priorities, one per gate.
    fn priorities(&self) -> PyResult<Vec<u64>> {
        let mut l = qsched::Ldpg::build(&self.0);
        l.assign_priorities(&self.0).map_err(err)?;
        Ok(l.priorities().unwrap_or_default().to_vec())
    }

    /// Parent -> child edges of the precedence graph.
    fn dependencies(&self) -> Vec<(usize, usize)> {
        qsched::Ldpg::build(&self.0).edges()
    }
}

#[pyclass(name = "Topology", frozen)]
struct PyTopology(qsched::ConnectivityGraph);

#[pymethods]
impl PyTopology {
    /// `line:N`, `ring:N`, `complete:N`, `star:N`, `grid:RxC` or a JSON document.
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        qsched::ConnectivityGraph::from_spec(spec).map(PyTopology).map_err(err)
    }

    #[getter]
    fn num_physical(&self) -> usize {
        self.0.num_physical()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.0.edges().to_vec()
    }
}

#[pyclass(name = "Schedule", frozen)]
struct PySchedule(qsched::Pdpt);

#[pymethods]
impl PySchedule {
    #[getter]
    fn swaps(&self) -> usize {
        self.0.swap_count()
    }

    #[getter]
    fn gates(&self) -> usize {
        self.0.gate_count()
    }

    #[getter]
    fn depth(&self) -> u64 {
        self.0.depth()
    }

    #[getter]
    fn initial_map(&self) -> Vec<usize> {
        self.0.initial_map().forward().to_vec()
    }

    #[getter]
    fn final_map(&self) -> Vec<usize> {
        self.0.final_map().forward().to_vec()
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }
}

#[pyclass(name = "Instance", frozen)]
struct PyInstance(MaxCutInstance);

#[pymethods]
impl PyInstance {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        MaxCutInstance::parse(text).map(PyInstance).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.num_nodes()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.0.edges().to_vec()
    }

    fn is_connected(&self) -> bool {
        self.0.is_connected()
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }
}

fn strategy(name: &str) -> PyResult<StrategyKind> {
    name.parse().map_err(err)
}

/// Best of one baseline run and `reps` seeded runs of `strategy`.
#[pyfunction]
#[pyo3(signature = (circuit, topology, strategy = "baseline", reps = 1, seed = 0, swap_latency = 1))]
fn schedule(
    circuit: &PyCircuit,
    topology: &PyTopology,
    strategy: &str,
    reps: usize,
    seed: u64,
    swap_latency: u32,
) -> PyResult<PySchedule> {
    let s = Strategy::new(self::strategy(strategy)?, reps, seed).with_swap_latency(swap_latency);
    scheduler::strategy_best_of(&circuit.0, &topology.0, &s)
        .map(PySchedule)
        .map_err(err)
}

/// Violation messages; empty when the table is valid.
#[pyfunction]
fn verify(table_json: &str, circuit: &PyCircuit, topology: &PyTopology) -> PyResult<Vec<String>> {
    let doc = PdptDocument::parse(table_json).map_err(err)?;
    let verdict = scheduler::verify_document(&doc, &circuit.0, &topology.0);
    Ok(verdict.violations.iter().map(ToString::to_string).collect())
}

#[pyfunction]
#[pyo3(signature = (n, k = 3, seed = 0))]
fn random_regular_graph(n: usize, k: usize, seed: u64) -> PyResult<PyInstance> {
    qaoa::random_regular_graph(n, k, seed).map(PyInstance).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (instance, depth = 1, t_x = 1, t_zz = 1))]
fn qaoa_circuit(instance: &PyInstance, depth: usize, t_x: u32, t_zz: u32) -> PyResult<PyCircuit> {
    let params = QaoaParams::new(depth).with_latencies(t_x, t_zz, 1);
    qaoa::qaoa_circuit(&instance.0, &params).map(PyCircuit).map_err(err)
}

/// Exact minimum SWAP count on a line, or `None` beyond `max_swaps`.
#[pyfunction]
#[pyo3(signature = (instance, max_swaps, budget_seconds = None))]
fn exhaustive_swaps(py: Python<'_>, instance: &PyInstance, max_swaps: usize, budget_seconds: Option<f64>) -> PyResult<Option<usize>> {
    let config = ExhaustiveConfig {
        time_budget: budget_seconds.map(std::time::Duration::from_secs_f64),
        ..ExhaustiveConfig::new(max_swaps)
    };
    let result = py.detach(|| exhaustive_min_swaps(&instance.0, &config));
    Ok(result.map_err(err)?.map(|s| s.swaps))
}

/// Profile-based estimate of SWAPs and total gates for one ZZ layer.
#[pyfunction]
fn lower_bound(instance: &PyInstance) -> PyResult<(f64, f64)> {
    let r = heuristic_lower_bound(&instance.0).map_err(err)?;
    Ok((r.swap_bound_f64(), r.total_gate_bound_f64()))
}

#[pymodule]
fn pyqsched(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCircuit>()?;
    m.add_class::<PyTopology>()?;
    m.add_class::<PySchedule>()?;
    m.add_class::<PyInstance>()?;
    m.add_function(wrap_pyfunction!(schedule, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(random_regular_graph, m)?)?;
    m.add_function(wrap_pyfunction!(qaoa_circuit, m)?)?;
    m.add_function(wrap_pyfunction!(exhaustive_swaps, m)?)?;
    m.add_function(wrap_pyfunction!(lower_bound, m)?)?;
    Ok(())
}
