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

//! QAOA circuits for MaxCut on random regular graphs.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::topology::InteractionGraph;

/// A MaxCut problem graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxCutInstance {
    num_nodes: usize,
    k: usize,
    seed: u64,
    /// Normalized `(lo, hi)` and sorted.
    edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub n: usize,
    pub k: usize,
    #[serde(default)]
    pub seed: u64,
    pub edges: Vec<[usize; 2]>,
}

impl MaxCutInstance {
    /// Any simple graph; `k` is recorded as the maximum degree.
    pub fn from_edges(num_nodes: usize, edges: &[(usize, usize)], seed: u64) -> Result<Self> {
        let mut norm = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= num_nodes || b >= num_nodes {
                return Err(Error::Malformed(format!("edge ({a}, {b}) outside {num_nodes} nodes")));
            }
            if a == b {
                return Err(Error::Malformed(format!("self loop at node {a}")));
            }
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        if norm.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Malformed("repeated edge".into()));
        }
        let mut inst = MaxCutInstance {
            num_nodes,
            k: 0,
            seed,
            edges: norm,
        };
        inst.k = inst.degrees().into_iter().max().unwrap_or(0);
        Ok(inst)
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.num_nodes];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    pub fn is_regular(&self) -> bool {
        self.degrees().iter().all(|&d| d == self.k)
    }

    pub fn is_connected(&self) -> bool {
        if self.num_nodes == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.num_nodes];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; self.num_nodes];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !std::mem::replace(&mut seen[w], true) {
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn interaction_graph(&self) -> InteractionGraph {
        InteractionGraph::from_edges(self.num_nodes, &self.edges)
    }

    pub fn to_document(&self) -> InstanceDocument {
        InstanceDocument {
            n: self.num_nodes,
            k: self.k,
            seed: self.seed,
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("instance serializes")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let doc: InstanceDocument = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        let edges: Vec<_> = doc.edges.iter().map(|e| (e[0], e[1])).collect();
        let mut inst = Self::from_edges(doc.n, &edges, doc.seed)?;
        if inst.k > doc.k {
            return Err(Error::Malformed(format!("declared degree {} below actual {}", doc.k, inst.k)));
        }
        inst.k = doc.k;
        Ok(inst)
    }
}

/// Configuration model: pair up `n * k` stubs uniformly at random and
/// start over whenever a self loop or repeated edge appears.
pub fn random_regular_graph(n: usize, k: usize, seed: u64) -> Result<MaxCutInstance> {
    let infeasible = |reason: &str| Error::InfeasibleRegular {
        n,
        k,
        reason: reason.to_string(),
    };
    if (n * k) % 2 == 1 {
        return Err(infeasible("n * k is odd"));
    }
    if n <= k {
        return Err(infeasible("need more nodes than the degree"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, k)).collect();
    let mut seen = vec![false; n * n];
    'attempt: loop {
        stubs.shuffle(&mut rng);
        seen.iter_mut().for_each(|s| *s = false);
        let mut edges = Vec::with_capacity(n * k / 2);
        for pair in stubs.chunks_exact(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a == b || std::mem::replace(&mut seen[a * n + b], true) {
                continue 'attempt;
            }
            edges.push((a, b));
        }
        edges.sort_unstable();
        return Ok(MaxCutInstance {
            num_nodes: n,
            k,
            seed,
            edges,
        });
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QaoaParams {
    pub depth: usize,
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
    pub t_x: u32,
    pub t_zz: u32,
    pub t_swap: u32,
}

impl QaoaParams {
    /// Unit latencies and placeholder angles of 0.5.
    pub fn new(depth: usize) -> Self {
        QaoaParams {
            depth,
            gammas: vec![0.5; depth],
            betas: vec![0.5; depth],
            t_x: 1,
            t_zz: 1,
            t_swap: 1,
        }
    }

    pub fn with_latencies(mut self, t_x: u32, t_zz: u32, t_swap: u32) -> Self {
        self.t_x = t_x;
        self.t_zz = t_zz;
        self.t_swap = t_swap;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.depth == 0 {
            return Err(Error::InvalidParams("QAOA depth must be at least 1".into()));
        }
        if self.gammas.len() != self.depth || self.betas.len() != self.depth {
            return Err(Error::InvalidParams("one gamma and one beta per layer".into()));
        }
        if self.t_x == 0 || self.t_zz == 0 || self.t_swap == 0 {
            return Err(Error::InvalidParams("latencies must be positive".into()));
        }
        Ok(())
    }
}

/// Per layer: a ZZ rotation on every edge, then an X rotation on every qubit.
pub fn qaoa_circuit(instance: &MaxCutInstance, params: &QaoaParams) -> Result<Circuit> {
    params.validate()?;
    let mut b = Circuit::builder(instance.num_nodes());
    for layer in 0..params.depth {
        for &(x, y) in instance.edges() {
            b.gate("zz", &[x, y], &[params.gammas[layer]], Some(params.t_zz))?;
        }
        for q in 0..instance.num_nodes() {
            b.gate("rx", &[q], &[params.betas[layer]], Some(params.t_x))?;
        }
    }
    b.build()
}
