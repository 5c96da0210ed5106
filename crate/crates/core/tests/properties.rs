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

//! Property tests over randomly generated circuits, colorings and maps.

use proptest::prelude::*;

use qsched::color_pairing::{
    classify_move, color_pair_distance, greedy_color_pairing, left_accumulation, NodeColoring,
};
use qsched::ldpg::{assign_priorities, build_ldpg};
use qsched::oracles::brute_force_color_pairing;
use qsched::scheduler::verify_schedule;
use qsched::{schedule, Circuit, ConnectivityGraph, LtpMap, Strategy as Plan, StrategyKind};

const KINDS: [&str; 6] = ["rx", "rz", "h", "zz", "cz", "cx"];

/// Gates as (kind index, qubit a, qubit b); one-qubit kinds ignore `b`.
fn raw_gates(n: usize, max_len: usize) -> impl Strategy<Value = Vec<(usize, usize, usize)>> {
    prop::collection::vec((0..KINDS.len(), 0..n, 0..n), 1..max_len)
}

fn build(n: usize, raw: &[(usize, usize, usize)]) -> Circuit {
    let mut b = Circuit::builder(n);
    for &(k, a, c) in raw {
        let kind = KINDS[k];
        if matches!(kind, "rx" | "rz" | "h") {
            b.gate(kind, &[a], &[], None).unwrap();
        } else if a != c {
            b.gate(kind, &[a, c], &[], None).unwrap();
        }
    }
    b.build().unwrap()
}

fn pairing(n: usize) -> impl Strategy<Value = NodeColoring> {
    (Just(n), prop::collection::vec(any::<u32>(), n), 0..=n / 2).prop_map(|(n, keys, pairs)| {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (keys[i], i));
        let pairs: Vec<(usize, usize)> = (0..pairs).map(|c| (order[2 * c], order[2 * c + 1])).collect();
        NodeColoring::from_pairs(n, &pairs).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn commutation_is_symmetric(raw in raw_gates(4, 12)) {
        let c = build(4, &raw);
        for a in c.gates() {
            for b in c.gates() {
                prop_assert_eq!(c.commutes(a, b), c.commutes(b, a));
            }
        }
    }

    #[test]
    fn ldpg_edges_point_forward_and_never_commute(raw in raw_gates(5, 20)) {
        let c = build(5, &raw);
        let g = build_ldpg(&c);
        for (p, ch) in g.edges() {
            prop_assert!(p < ch);
            prop_assert!(!c.commutes(c.gate(p), c.gate(ch)));
        }
        // Every non-commuting, qubit-sharing pair is ordered by a path.
        for (i, a) in c.gates().iter().enumerate() {
            for (j, b) in c.gates().iter().enumerate().skip(i + 1) {
                if a.shares_qubit(b) && !c.commutes(a, b) {
                    prop_assert!(g.reaches(i, j), "{i} -> {j} missing");
                }
            }
        }
    }

    #[test]
    fn ldpg_ignores_order_of_adjacent_commuting_gates(raw in raw_gates(4, 14), at in any::<prop::sample::Index>()) {
        let c = build(4, &raw);
        prop_assume!(c.len() >= 2);
        let i = at.index(c.len() - 1);
        prop_assume!(c.commutes(c.gate(i), c.gate(i + 1)));
        let doc = c.to_document();
        let mut swapped = doc.clone();
        swapped.gates.swap(i, i + 1);
        let d = swapped.into_circuit().unwrap();
        let relabel = |x: usize| if x == i { i + 1 } else if x == i + 1 { i } else { x };
        let mut original: Vec<_> = build_ldpg(&c).edges();
        let mut moved: Vec<_> = build_ldpg(&d).edges().into_iter().map(|(p, q)| (relabel(p), relabel(q))).collect();
        original.sort_unstable();
        moved.sort_unstable();
        prop_assert_eq!(original, moved);
    }

    #[test]
    fn priorities_bound_the_depth(raw in raw_gates(5, 20), kind in 0..3usize, seed in any::<u64>()) {
        let c = build(5, &raw);
        let ldpg = assign_priorities(build_ldpg(&c), &c).unwrap();
        let topo = ConnectivityGraph::complete(5);
        let pdpt = schedule(&c, &topo, &Plan::new(StrategyKind::ALL[kind], 1, seed)).unwrap();
        prop_assert_eq!(pdpt.swap_count(), 0);
        prop_assert!(ldpg.max_priority() <= pdpt.depth());
        prop_assert!(pdpt.depth() <= c.total_latency());
    }

    #[test]
    fn schedules_verify_and_are_deterministic(raw in raw_gates(6, 24), kind in 0..3usize, seed in any::<u64>(), topo in 0..3usize) {
        let c = build(6, &raw);
        let topo = match topo {
            0 => ConnectivityGraph::line(6),
            1 => ConnectivityGraph::ring(6),
            _ => ConnectivityGraph::grid(2, 3),
        };
        let strategy = Plan::new(StrategyKind::ALL[kind], 1, seed).with_swap_latency(2);
        let first = schedule(&c, &topo, &strategy).unwrap();
        let verdict = verify_schedule(&first, &c, &topo);
        prop_assert!(verdict.is_ok(), "{:?}", verdict.violations);
        let again = schedule(&c, &topo, &strategy).unwrap();
        prop_assert_eq!(first.to_json(), again.to_json());
    }

    #[test]
    fn swaps_keep_maps_injective(forward_keys in prop::collection::vec(any::<u32>(), 6), swaps in prop::collection::vec(0..7usize, 0..30)) {
        let line = ConnectivityGraph::line(8);
        let mut order: Vec<usize> = (0..8).collect();
        order.sort_by_key(|&i| (forward_keys.get(i).copied().unwrap_or(u32::MAX), i));
        let mut map = LtpMap::from_forward(order[..6].to_vec(), 8).unwrap();
        for s in swaps {
            map = map.apply_swap(&line, s, s + 1).unwrap();
            let mut seen = [false; 8];
            for l in 0..6 {
                let p = map.physical(l);
                prop_assert!(!seen[p]);
                seen[p] = true;
                prop_assert_eq!(map.logical(p), Some(l));
            }
        }
        prop_assert!(map.apply_swap(&line, 0, 2).is_err());
    }

    #[test]
    fn one_swap_changes_distance_by_at_most_two(c in pairing(9), at in 0..8usize) {
        let line = ConnectivityGraph::line(9);
        let before = color_pair_distance(&c, &line).unwrap() as i64;
        let mut moved = c.clone();
        moved.swap(at, at + 1);
        let after = color_pair_distance(&moved, &line).unwrap() as i64;
        prop_assert!((after - before).abs() <= 2);
        prop_assert_eq!(after - before, i64::from(classify_move(&c, at, at + 1).delta()));
    }

    #[test]
    fn line_solvers_never_beat_bfs(c in pairing(7), seed in any::<u64>()) {
        let line = ConnectivityGraph::line(7);
        let optimum = brute_force_color_pairing(&c, &line, 1 << 22).unwrap();
        let left = left_accumulation(&c, &line).unwrap();
        let greedy = greedy_color_pairing(&c, &line, seed).unwrap();
        prop_assert!(left.len() >= optimum);
        prop_assert!(greedy.len() >= optimum);
        prop_assert!(left.apply(&c).is_compatible(&line));
        prop_assert!(greedy.apply(&c).is_compatible(&line));
    }
}
