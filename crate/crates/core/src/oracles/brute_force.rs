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

//! Exact color pairing by breadth-first search over colorings.

use std::collections::{HashSet, VecDeque};

use crate::color_pairing::{Color, NodeColoring};
use crate::error::{Error, Result};
use crate::topology::ConnectivityGraph;

fn compatible(colors: &[Option<Color>], graph: &ConnectivityGraph) -> bool {
    let mut first: Vec<(Color, usize)> = Vec::new();
    for (v, c) in colors.iter().enumerate() {
        if let Some(c) = *c {
            match first.iter().find(|(fc, _)| *fc == c) {
                Some(&(_, u)) if !graph.is_adjacent(u, v) => return false,
                Some(_) => {}
                None => first.push((c, v)),
            }
        }
    }
    true
}

/// Fewest exchanges along hardware edges that make every color pair
/// adjacent. Fails once more than `cap` distinct colorings were visited.
pub fn brute_force_color_pairing(coloring: &NodeColoring, graph: &ConnectivityGraph, cap: usize) -> Result<usize> {
    let start: Vec<Option<Color>> = coloring.as_slice().to_vec();
    if start.len() != graph.num_physical() {
        return Err(Error::InvalidColoring(format!(
            "coloring has {} nodes, graph has {}",
            start.len(),
            graph.num_physical()
        )));
    }
    if compatible(&start, graph) {
        return Ok(0);
    }
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((state, depth)) = queue.pop_front() {
        for &(a, b) in graph.edges() {
            if state[a] == state[b] {
                continue;
            }
            let mut next = state.clone();
            next.swap(a, b);
            if seen.contains(&next) {
                continue;
            }
            if compatible(&next, graph) {
                return Ok(depth + 1);
            }
            if seen.len() >= cap {
                return Err(Error::StateCap(cap));
            }
            seen.insert(next.clone());
            queue.push_back((next, depth + 1));
        }
    }
    Err(Error::InvalidColoring("no compatible arrangement is reachable".into()))
}
