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

//! Reverse Cuthill-McKee ordering and the profile-based SWAP estimate.

use std::collections::VecDeque;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qaoa::MaxCutInstance;

fn adjacency(instance: &MaxCutInstance) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); instance.num_nodes()];
    for &(a, b) in instance.edges() {
        adj[a].push(b);
        adj[b].push(a);
    }
    adj
}

/// BFS levels from `src` restricted to unvisited nodes: returns (farthest
/// level, nodes of that level).
fn eccentricity(adj: &[Vec<usize>], src: usize) -> (usize, Vec<usize>) {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[src] = 0;
    let mut queue = VecDeque::from([src]);
    let mut far = 0;
    while let Some(v) = queue.pop_front() {
        far = far.max(dist[v]);
        for &w in &adj[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    let last = (0..adj.len()).filter(|&v| dist[v] == far).collect();
    (far, last)
}

/// Start node of a component: repeatedly jump to a minimum-degree node of
/// the last BFS level while the eccentricity grows.
fn pseudo_peripheral(adj: &[Vec<usize>], seed: usize) -> usize {
    let mut v = seed;
    let (mut ecc, mut last) = eccentricity(adj, v);
    loop {
        let u = *last.iter().min_by_key(|&&u| (adj[u].len(), u)).unwrap();
        let (e, l) = eccentricity(adj, u);
        if e <= ecc {
            return v;
        }
        v = u;
        ecc = e;
        last = l;
    }
}

/// Node order (position -> node) produced by reverse Cuthill-McKee:
/// breadth first from a pseudo-peripheral node, neighbors by ascending
/// degree, the whole sequence reversed. Components are handled in turn.
pub fn rcm_order(instance: &MaxCutInstance) -> Vec<usize> {
    let adj = adjacency(instance);
    let n = adj.len();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let seed = (0..n)
            .filter(|&v| !visited[v])
            .min_by_key(|&v| (adj[v].len(), v))
            .unwrap();
        let start = pseudo_peripheral(&adj, seed);
        visited[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next: Vec<usize> = adj[v].iter().copied().filter(|&w| !visited[w]).collect();
            next.sort_by_key(|&w| (adj[w].len(), w));
            for w in next {
                visited[w] = true;
                queue.push_back(w);
            }
        }
    }
    order.reverse();
    order
}

/// Sum over nodes of the farthest neighbor distance under `order`
/// (position -> node).
pub fn profile(instance: &MaxCutInstance, order: &[usize]) -> usize {
    let mut pos = vec![0; order.len()];
    for (p, &v) in order.iter().enumerate() {
        pos[v] = p;
    }
    let mut far = vec![0; order.len()];
    for &(a, b) in instance.edges() {
        let d = pos[a].abs_diff(pos[b]);
        far[a] = far[a].max(d);
        far[b] = far[b].max(d);
    }
    far.iter().sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBoundReport {
    pub w: usize,
    pub profile_minus_n: i64,
    pub swap_bound: Ratio<i64>,
    pub total_gate_bound: Ratio<i64>,
    pub permutation: Vec<usize>,
}

#[derive(Serialize)]
struct ReportDocument<'a> {
    w: usize,
    profile_minus_n: i64,
    swap_bound: String,
    swap_bound_value: f64,
    total_gate_bound: String,
    total_gate_bound_value: f64,
    permutation: &'a [usize],
}

fn as_f64(r: &Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

impl LowerBoundReport {
    pub fn swap_bound_f64(&self) -> f64 {
        as_f64(&self.swap_bound)
    }

    pub fn total_gate_bound_f64(&self) -> f64 {
        as_f64(&self.total_gate_bound)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ReportDocument {
            w: self.w,
            profile_minus_n: self.profile_minus_n,
            swap_bound: self.swap_bound.to_string(),
            swap_bound_value: self.swap_bound_f64(),
            total_gate_bound: self.total_gate_bound.to_string(),
            total_gate_bound_value: self.total_gate_bound_f64(),
            permutation: &self.permutation,
        })
        .expect("report serializes")
    }
}

/// Estimate of the gates needed for one ZZ layer on a line: `(W - N) / 4k`
/// SWAPs plus one gate per edge, with `W` the profile under RCM. This is a
/// heuristic figure, not a proven bound.
pub fn heuristic_lower_bound(instance: &MaxCutInstance) -> Result<LowerBoundReport> {
    let k = instance.k();
    if k == 0 {
        return Err(Error::InvalidParams("graph has no edges".into()));
    }
    let permutation = rcm_order(instance);
    let w = profile(instance, &permutation);
    let profile_minus_n = w as i64 - instance.num_nodes() as i64;
    let swap_bound = Ratio::new(profile_minus_n, 4 * k as i64);
    let total_gate_bound = swap_bound + Ratio::from_integer(instance.edges().len() as i64);
    Ok(LowerBoundReport {
        w,
        profile_minus_n,
        swap_bound,
        total_gate_bound,
        permutation,
    })
}
