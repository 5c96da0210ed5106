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

//! Reference computations used to judge the scheduler.

pub mod brute_force;
pub mod exhaustive;
pub mod lower_bound;

pub use brute_force::brute_force_color_pairing;
pub use exhaustive::{canonical_layouts, count_swap_strings, exhaustive_min_swaps, ExhaustiveConfig, ExhaustiveSolution};
pub use lower_bound::{heuristic_lower_bound, profile, rcm_order, LowerBoundReport};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::color_pairing::NodeColoring;
    use crate::qaoa::{random_regular_graph, MaxCutInstance};
    use crate::topology::ConnectivityGraph;
    use num_rational::Ratio;

    fn k4() -> MaxCutInstance {
        random_regular_graph(4, 3, 0).unwrap()
    }

    #[test]
    fn exhaustive_complete_four() {
        let sol = exhaustive_min_swaps(&k4(), &ExhaustiveConfig::new(6)).unwrap().unwrap();
        assert_eq!(sol.swaps, 3);
        assert_eq!(sol.sequence.len(), 3);
    }

    #[test]
    fn exhaustive_path_needs_nothing() {
        let path = MaxCutInstance::from_edges(5, &[(3, 0), (0, 4), (4, 1), (1, 2)], 0).unwrap();
        let sol = exhaustive_min_swaps(&path, &ExhaustiveConfig::new(3)).unwrap().unwrap();
        assert_eq!(sol.swaps, 0);
        let fixed = ExhaustiveConfig {
            enumerate_maps: false,
            ..ExhaustiveConfig::new(6)
        };
        let sol = exhaustive_min_swaps(&path, &fixed).unwrap().unwrap();
        assert!(sol.swaps > 0);
    }

    #[test]
    fn exhaustive_reports_missing_solution_and_budget() {
        assert_eq!(exhaustive_min_swaps(&k4(), &ExhaustiveConfig::new(2)).unwrap(), None);
        let g = random_regular_graph(8, 3, 1).unwrap();
        let tight = ExhaustiveConfig {
            time_budget: Some(std::time::Duration::ZERO),
            ..ExhaustiveConfig::new(9)
        };
        assert!(matches!(exhaustive_min_swaps(&g, &tight), Err(crate::Error::BudgetExhausted(_))));

        // layouts are enumerated lazily, so a large instance stops on time
        let big = random_regular_graph(14, 3, 1).unwrap();
        let short = ExhaustiveConfig {
            time_budget: Some(std::time::Duration::from_millis(200)),
            ..ExhaustiveConfig::new(30)
        };
        let started = std::time::Instant::now();
        assert!(matches!(exhaustive_min_swaps(&big, &short), Err(crate::Error::BudgetExhausted(_))));
        assert!(started.elapsed() < std::time::Duration::from_secs(5));
    }

    #[test]
    fn witness_replays() {
        let g = random_regular_graph(6, 3, 3).unwrap();
        let sol = exhaustive_min_swaps(&g, &ExhaustiveConfig::new(8)).unwrap().unwrap();
        let mut layout = sol.layout.clone();
        let mut covered = std::collections::BTreeSet::new();
        let mut mark = |l: &[usize]| {
            for w in l.windows(2) {
                covered.insert((w[0].min(w[1]), w[0].max(w[1])));
            }
        };
        mark(&layout);
        for &d in &sol.sequence {
            layout.swap(d, d + 1);
            mark(&layout);
        }
        assert!(g.edges().iter().all(|e| covered.contains(e)));
    }

    #[test]
    fn search_space_accounting() {
        for n in 3..7 {
            for s in 1..5 {
                let expected = (n as u64 - 1) * (n as u64 - 2).pow(s as u32 - 1);
                assert_eq!(count_swap_strings(n, s), expected);
            }
        }
        let fact: usize = (1..=6).product();
        assert_eq!(canonical_layouts(6).count(), fact / 2);
        let five: Vec<_> = canonical_layouts(5).collect();
        assert_eq!(five.len(), 60);
        assert!(five.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(canonical_layouts(2).collect::<Vec<_>>(), vec![vec![0, 1]]);
        assert_eq!(canonical_layouts(1).count(), 1);
    }

    #[test]
    fn rcm_on_shuffled_path() {
        let path = MaxCutInstance::from_edges(6, &[(4, 1), (1, 5), (5, 0), (0, 3), (3, 2)], 0).unwrap();
        let order = rcm_order(&path);
        assert!(order == vec![4, 1, 5, 0, 3, 2] || order == vec![2, 3, 0, 5, 1, 4]);
        assert_eq!(profile(&path, &order), 6);
        assert_eq!(heuristic_lower_bound(&path).unwrap().swap_bound, Ratio::from_integer(0));
    }

    #[test]
    fn rcm_never_worse_than_identity_here() {
        for seed in 0..30 {
            let g = random_regular_graph(10, 3, seed).unwrap();
            let order = rcm_order(&g);
            let mut sorted = order.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, (0..10).collect::<Vec<_>>());
            let identity: Vec<usize> = (0..10).collect();
            assert!(profile(&g, &order) <= profile(&g, &identity), "seed {seed}");
        }
    }

    #[test]
    fn lower_bound_complete_four() {
        let r = heuristic_lower_bound(&k4()).unwrap();
        assert_eq!(r.w, 10);
        assert_eq!(r.swap_bound, Ratio::new(1, 2));
        assert_eq!(r.total_gate_bound, Ratio::new(13, 2));
        assert!(r.to_json().contains("\"13/2\""));
    }

    #[test]
    fn brute_force_examples() {
        let line = ConnectivityGraph::line(4);
        let c = NodeColoring::new(vec![Some(0), None, None, Some(0)]).unwrap();
        assert_eq!(brute_force_color_pairing(&c, &line, 1 << 16).unwrap(), 2);
        let c = NodeColoring::new(vec![Some(0), Some(1), Some(1), Some(0)]).unwrap();
        assert_eq!(brute_force_color_pairing(&c, &line, 1 << 16).unwrap(), 2);
        let c = NodeColoring::new(vec![Some(0), Some(0), None, None]).unwrap();
        assert_eq!(brute_force_color_pairing(&c, &line, 1 << 16).unwrap(), 0);
        let c = NodeColoring::new(vec![Some(0), Some(1), Some(2), Some(0), Some(1), Some(2)]).unwrap();
        assert!(brute_force_color_pairing(&c, &ConnectivityGraph::line(6), 3).is_err());
    }
}
