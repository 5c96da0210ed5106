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

//! Splitting equal-priority gates into qubit-disjoint groups.
//!
//! Edges of an interaction graph are colored so that no two edges of one
//! color share a node; a self loop (one-qubit gate) conflicts with every
//! edge at its node. Each color class can then run in a single round.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::topology::InteractionGraph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeColoring {
    /// Parallel to `InteractionGraph::edges`.
    pub edge_colors: Vec<usize>,
    /// Parallel to `InteractionGraph::self_loops`.
    pub loop_colors: Vec<usize>,
    pub num_colors: usize,
}

impl EdgeColoring {
    fn from_parts(edge_colors: Vec<usize>, loop_colors: Vec<usize>) -> Self {
        let num_colors = edge_colors
            .iter()
            .chain(&loop_colors)
            .map(|c| c + 1)
            .max()
            .unwrap_or(0);
        EdgeColoring {
            edge_colors,
            loop_colors,
            num_colors,
        }
    }

    /// Gate ids grouped by color, ascending color, empty classes dropped.
    pub fn classes(&self, graph: &InteractionGraph) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.num_colors];
        for (e, &c) in graph.edges.iter().zip(&self.edge_colors) {
            classes[c].push(e.gate);
        }
        for (&(_, gate), &c) in graph.self_loops.iter().zip(&self.loop_colors) {
            classes[c].push(gate);
        }
        classes
            .into_iter()
            .filter(|c| !c.is_empty())
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect()
    }

    pub fn color_of_gate(&self, graph: &InteractionGraph, gate: usize) -> Option<usize> {
        graph
            .edges
            .iter()
            .position(|e| e.gate == gate)
            .map(|i| self.edge_colors[i])
            .or_else(|| {
                graph
                    .self_loops
                    .iter()
                    .position(|&(_, g)| g == gate)
                    .map(|i| self.loop_colors[i])
            })
    }

    pub fn is_proper(&self, graph: &InteractionGraph) -> bool {
        is_proper_edge_coloring(graph, self)
    }
}

/// For every node, the colors of its incident edges and loops are pairwise distinct.
pub fn is_proper_edge_coloring(graph: &InteractionGraph, coloring: &EdgeColoring) -> bool {
    if coloring.edge_colors.len() != graph.edges.len()
        || coloring.loop_colors.len() != graph.self_loops.len()
    {
        return false;
    }
    let mut seen: Vec<Vec<usize>> = vec![Vec::new(); graph.num_logical];
    let mut add = |v: usize, c: usize| {
        if seen[v].contains(&c) {
            false
        } else {
            seen[v].push(c);
            true
        }
    };
    for (e, &c) in graph.edges.iter().zip(&coloring.edge_colors) {
        if e.a == e.b || !add(e.a, c) || !add(e.b, c) {
            return false;
        }
    }
    for (&(q, _), &c) in graph.self_loops.iter().zip(&coloring.loop_colors) {
        if !add(q, c) {
            return false;
        }
    }
    true
}

/// Smallest color not in `used`, starting from `from`.
fn first_free(used: &[usize], from: usize) -> usize {
    (from..).find(|c| !used.contains(c)).unwrap()
}

/// Visits items (edges first, then loops, in `order`) and gives each the
/// smallest admissible color `>= floor`, respecting colors already present.
fn greedy_fill(
    graph: &InteractionGraph,
    edge_colors: &mut [Option<usize>],
    loop_colors: &mut [Option<usize>],
    order: &[Item],
    floor: usize,
) {
    let mut used: Vec<Vec<usize>> = vec![Vec::new(); graph.num_logical];
    for (e, c) in graph.edges.iter().zip(edge_colors.iter()) {
        if let Some(c) = c {
            used[e.a].push(*c);
            used[e.b].push(*c);
        }
    }
    for (&(q, _), c) in graph.self_loops.iter().zip(loop_colors.iter()) {
        if let Some(c) = c {
            used[q].push(*c);
        }
    }
    for item in order {
        match *item {
            Item::Edge(i) if edge_colors[i].is_none() => {
                let e = graph.edges[i];
                let c = (floor..)
                    .find(|c| !used[e.a].contains(c) && !used[e.b].contains(c))
                    .unwrap();
                edge_colors[i] = Some(c);
                used[e.a].push(c);
                used[e.b].push(c);
            }
            Item::Loop(i) if loop_colors[i].is_none() => {
                let q = graph.self_loops[i].0;
                let c = first_free(&used[q], floor);
                loop_colors[i] = Some(c);
                used[q].push(c);
            }
            _ => {}
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Item {
    Edge(usize),
    Loop(usize),
}

fn all_items(graph: &InteractionGraph) -> Vec<Item> {
    (0..graph.edges.len())
        .map(Item::Edge)
        .chain((0..graph.self_loops.len()).map(Item::Loop))
        .collect()
}

fn unwrap_all(v: Vec<Option<usize>>) -> Vec<usize> {
    v.into_iter().map(|c| c.expect("every item colored")).collect()
}

/// Deterministic coloring with at most `max_degree + 1` colors
/// (Misra-Gries fan rotation). Self loops are colored afterwards with
/// the smallest free color at their node. Multigraphs fall back to a
/// first-fit pass in edge order.
pub fn edge_color_baseline(graph: &InteractionGraph) -> EdgeColoring {
    let mut edge_colors = if graph.is_simple() {
        let mut colors = MisraGries::new(graph).run();
        drop_top_colors(graph, &mut colors);
        colors
    } else {
        let mut ec = vec![None; graph.edges.len()];
        let order: Vec<_> = (0..graph.edges.len()).map(Item::Edge).collect();
        greedy_fill(graph, &mut ec, &mut [], &order, 0);
        ec
    };
    let mut loop_colors = vec![None; graph.self_loops.len()];
    let order: Vec<_> = (0..graph.self_loops.len()).map(Item::Loop).collect();
    greedy_fill(graph, &mut edge_colors, &mut loop_colors, &order, 0);
    EdgeColoring::from_parts(unwrap_all(edge_colors), unwrap_all(loop_colors))
}

/// First-fit coloring over a seeded random order of the edges and loops.
pub fn edge_color_greedy(graph: &InteractionGraph, seed: u64) -> EdgeColoring {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    edge_color_greedy_with(graph, &mut rng)
}

pub(crate) fn edge_color_greedy_with(graph: &InteractionGraph, rng: &mut ChaCha8Rng) -> EdgeColoring {
    let mut order = all_items(graph);
    order.shuffle(rng);
    let mut ec = vec![None; graph.edges.len()];
    let mut lc = vec![None; graph.self_loops.len()];
    greedy_fill(graph, &mut ec, &mut lc, &order, 0);
    EdgeColoring::from_parts(unwrap_all(ec), unwrap_all(lc))
}

/// Grows a simple path greedily and colors its edges alternately 0 and 1;
/// every other edge and loop gets a first-fit color `>= 2` in seeded
/// random order. Laying the path along a line makes both path colors
/// executable without routing.
pub fn long_path_coloring(graph: &InteractionGraph, seed: u64) -> (Vec<usize>, EdgeColoring) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    long_path_coloring_with(graph, &mut rng)
}

pub(crate) fn long_path_coloring_with(
    graph: &InteractionGraph,
    rng: &mut ChaCha8Rng,
) -> (Vec<usize>, EdgeColoring) {
    let path = long_path(graph, rng);
    let adj = graph.adjacency();
    let mut ec = vec![None; graph.edges.len()];
    for (i, w) in path.windows(2).enumerate() {
        let e = adj[w[0]]
            .iter()
            .find(|&&(n, e)| n == w[1] && ec[e].is_none())
            .map(|&(_, e)| e)
            .expect("path follows graph edges");
        ec[e] = Some(i % 2);
    }
    let mut lc = vec![None; graph.self_loops.len()];
    let mut order = all_items(graph);
    order.shuffle(rng);
    greedy_fill(graph, &mut ec, &mut lc, &order, 2);
    (path, EdgeColoring::from_parts(unwrap_all(ec), unwrap_all(lc)))
}

/// Starts at a random maximum-degree node and repeatedly steps to the
/// unvisited neighbor with the most unvisited neighbors of its own. When
/// the walk is stuck it resumes from the start node in the other direction.
fn long_path(graph: &InteractionGraph, rng: &mut ChaCha8Rng) -> Vec<usize> {
    if graph.edges.is_empty() {
        return Vec::new();
    }
    let n = graph.num_logical;
    let nbrs: Vec<Vec<usize>> = graph
        .adjacency()
        .iter()
        .map(|l| {
            let mut v: Vec<usize> = l.iter().map(|&(w, _)| w).collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();
    let max_deg = nbrs.iter().map(Vec::len).max().unwrap_or(0);
    let starts: Vec<usize> = (0..n).filter(|&v| nbrs[v].len() == max_deg).collect();
    let start = *starts.choose(rng).unwrap();
    let mut visited = vec![false; n];
    visited[start] = true;
    let mut path = vec![start];
    let mut walk = |from: usize, visited: &mut Vec<bool>, out: &mut Vec<usize>| {
        let mut current = from;
        let mut best = Vec::new();
        loop {
            best.clear();
            let mut best_score = None;
            for &w in &nbrs[current] {
                if visited[w] {
                    continue;
                }
                let score = nbrs[w].iter().filter(|&&x| !visited[x]).count();
                match best_score {
                    Some(s) if score < s => {}
                    Some(s) if score == s => best.push(w),
                    _ => {
                        best_score = Some(score);
                        best.clear();
                        best.push(w);
                    }
                }
            }
            let Some(&next) = best.choose(rng) else { break };
            visited[next] = true;
            out.push(next);
            current = next;
        }
    };
    walk(start, &mut visited, &mut path);
    let mut back = Vec::new();
    walk(start, &mut visited, &mut back);
    back.reverse();
    back.extend(path);
    back
}

/// Tries to empty the highest color class by moving each of its edges to
/// a lower color, inverting a two-color chain when needed. Repeats while a
/// whole class disappears.
fn drop_top_colors(graph: &InteractionGraph, colors: &mut [Option<usize>]) {
    let n = graph.num_logical;
    let max_deg = graph.adjacency().iter().map(Vec::len).max().unwrap_or(0);
    loop {
        let Some(top) = colors.iter().flatten().copied().max() else { return };
        if top < max_deg {
            return;
        }
        let mut at = vec![vec![None; top + 1]; n];
        for (e, c) in colors.iter().enumerate() {
            let c = c.unwrap();
            at[graph.edges[e].a][c] = Some(e);
            at[graph.edges[e].b][c] = Some(e);
        }
        let mut cleared = true;
        for e in 0..colors.len() {
            if colors[e] != Some(top) {
                continue;
            }
            let (u, v) = (graph.edges[e].a, graph.edges[e].b);
            let free = |at: &Vec<Vec<Option<usize>>>, x: usize| (0..top).find(|&c| at[x][c].is_none()).unwrap();
            let (alpha, beta) = (free(&at, u), free(&at, v));
            let target = if at[v][alpha].is_none() {
                Some(alpha)
            } else if at[u][beta].is_none() {
                Some(beta)
            } else if kempe_invert(graph, colors, &mut at, v, u, alpha, beta) {
                Some(alpha)
            } else if kempe_invert(graph, colors, &mut at, u, v, beta, alpha) {
                Some(beta)
            } else {
                None
            };
            match target {
                Some(c) => {
                    at[u][top] = None;
                    at[v][top] = None;
                    at[u][c] = Some(e);
                    at[v][c] = Some(e);
                    colors[e] = Some(c);
                }
                None => cleared = false,
            }
        }
        if !cleared {
            return;
        }
    }
}

/// Inverts the chain from `from` that starts with its `first`-colored edge
/// and alternates with `second`, unless the chain reaches `avoid`.
fn kempe_invert(
    graph: &InteractionGraph,
    colors: &mut [Option<usize>],
    at: &mut [Vec<Option<usize>>],
    from: usize,
    avoid: usize,
    first: usize,
    second: usize,
) -> bool {
    let mut chain = Vec::new();
    let (mut x, mut want) = (from, first);
    while let Some(e) = at[x][want] {
        if chain.last() == Some(&e) {
            break;
        }
        chain.push(e);
        let edge = graph.edges[e];
        x = if edge.a == x { edge.b } else { edge.a };
        if x == avoid {
            return false;
        }
        want = if want == first { second } else { first };
    }
    for &e in &chain {
        let edge = graph.edges[e];
        at[edge.a][colors[e].unwrap()] = None;
        at[edge.b][colors[e].unwrap()] = None;
    }
    for &e in &chain {
        let c = if colors[e] == Some(first) { second } else { first };
        colors[e] = Some(c);
        let edge = graph.edges[e];
        at[edge.a][c] = Some(e);
        at[edge.b][c] = Some(e);
    }
    true
}

/// Misra-Gries constructive Vizing coloring on a simple graph.
struct MisraGries<'a> {
    graph: &'a InteractionGraph,
    adj: Vec<Vec<(usize, usize)>>,
    colors: Vec<Option<usize>>,
    /// `at[v][c]` is the edge of color `c` at node `v`.
    at: Vec<Vec<Option<usize>>>,
    palette: usize,
}

impl<'a> MisraGries<'a> {
    fn new(graph: &'a InteractionGraph) -> Self {
        let adj = graph.adjacency();
        let max_deg = adj.iter().map(Vec::len).max().unwrap_or(0);
        MisraGries {
            graph,
            palette: max_deg + 1,
            at: vec![vec![None; max_deg + 1]; graph.num_logical],
            colors: vec![None; graph.edges.len()],
            adj,
        }
    }

    fn other(&self, e: usize, v: usize) -> usize {
        let edge = self.graph.edges[e];
        if edge.a == v {
            edge.b
        } else {
            edge.a
        }
    }

    fn is_free(&self, v: usize, c: usize) -> bool {
        self.at[v][c].is_none()
    }

    fn free_color(&self, v: usize) -> usize {
        (0..self.palette).find(|&c| self.is_free(v, c)).expect("palette has a free color")
    }

    fn set(&mut self, e: usize, c: Option<usize>) {
        let edge = self.graph.edges[e];
        if let Some(old) = self.colors[e] {
            self.at[edge.a][old] = None;
            self.at[edge.b][old] = None;
        }
        self.colors[e] = c;
        if let Some(c) = c {
            self.at[edge.a][c] = Some(e);
            self.at[edge.b][c] = Some(e);
        }
    }

    /// Fan at `u` starting with the uncolored edge `e0`: each next edge's
    /// color is free on the previous fan node.
    fn fan(&self, u: usize, e0: usize) -> Vec<usize> {
        let mut fan = vec![e0];
        let mut in_fan = vec![false; self.graph.num_logical];
        in_fan[self.other(e0, u)] = true;
        loop {
            let last = self.other(*fan.last().unwrap(), u);
            let next = self.adj[u].iter().find(|&&(w, e)| {
                !in_fan[w] && self.colors[e].is_some_and(|c| self.is_free(last, c))
            });
            match next {
                Some(&(w, e)) => {
                    in_fan[w] = true;
                    fan.push(e);
                }
                None => return fan,
            }
        }
    }

    /// Swaps colors `c` and `d` along the maximal path from `u` that starts
    /// with a `d` edge and alternates `d`, `c`, `d`, ...
    fn invert_path(&mut self, u: usize, c: usize, d: usize) {
        let mut path = Vec::new();
        let mut v = u;
        let mut want = d;
        let mut prev = None;
        while let Some(e) = self.at[v][want] {
            if Some(e) == prev {
                break;
            }
            path.push(e);
            v = self.other(e, v);
            want = if want == d { c } else { d };
            prev = Some(e);
        }
        let flipped: Vec<_> = path
            .iter()
            .map(|&e| (e, if self.colors[e] == Some(c) { d } else { c }))
            .collect();
        for &(e, _) in &flipped {
            self.set(e, None);
        }
        for (e, col) in flipped {
            self.set(e, Some(col));
        }
    }

    fn run(mut self) -> Vec<Option<usize>> {
        for e0 in 0..self.graph.edges.len() {
            let u = self.graph.edges[e0].a;
            let fan = self.fan(u, e0);
            let c = self.free_color(u);
            let d = self.free_color(self.other(*fan.last().unwrap(), u));
            if c != d {
                self.invert_path(u, c, d);
            }
            // first fan node with d free, keeping the prefix a fan
            let mut w = None;
            for i in 0..fan.len() {
                if i > 0 {
                    let prev = self.other(fan[i - 1], u);
                    match self.colors[fan[i]] {
                        Some(col) if self.is_free(prev, col) => {}
                        _ => break,
                    }
                }
                if self.is_free(self.other(fan[i], u), d) {
                    w = Some(i);
                    break;
                }
            }
            let w = w.expect("Misra-Gries invariant: some fan node has d free");
            for i in 0..w {
                let next = self.colors[fan[i + 1]];
                self.set(fan[i + 1], None);
                self.set(fan[i], next);
            }
            self.set(fan[w], Some(d));
        }
        self.colors
    }
}
