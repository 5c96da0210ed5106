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

//! Command-line front end.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};

use qsched::bench::{emit_report, run_benchmark, write_plot, BenchConfig, ReportFormat};
use qsched::oracles::{exhaustive_min_swaps, heuristic_lower_bound, ExhaustiveConfig};
use qsched::qaoa::{qaoa_circuit, random_regular_graph, MaxCutInstance, QaoaParams};
use qsched::scheduler::{strategy_best_of, verify_document, PdptDocument, Strategy, StrategyKind};
use qsched::{Circuit, ConnectivityGraph, Error, Ldpg, Result};

#[derive(Parser)]
#[command(name = "qsched", version, about = "Priority scheduling and SWAP routing for quantum circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Schedule a circuit onto a hardware graph and write the table.
    Schedule {
        #[arg(long)]
        circuit: PathBuf,
        /// Shorthand such as `line:8` or a topology file.
        #[arg(long)]
        topology: String,
        #[arg(long, default_value = "baseline")]
        strategy: StrategyKind,
        #[arg(long, default_value_t = 1)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        swap_latency: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a table against a circuit and hardware graph.
    Verify {
        #[arg(long)]
        pdpt: PathBuf,
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        topology: String,
    },
    /// Run the QAOA MaxCut benchmark on line hardware.
    QaoaBench {
        #[arg(long, value_delimiter = ',', default_values_t = [10, 20, 30, 40, 60, 80, 100])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        instances: usize,
        #[arg(long, value_delimiter = ',', default_values_t = StrategyKind::ALL)]
        strategies: Vec<StrategyKind>,
        /// Seeded runs per strategy [default: 4N].
        #[arg(long)]
        reps: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `tX,tZZ,tSWAP`
        #[arg(long, value_delimiter = ',', default_values_t = [1, 1, 1])]
        latencies: Vec<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: ReportFormat,
        #[arg(long)]
        plot_out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Sample a random regular MaxCut instance.
    GenInstance {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the QAOA circuit for the instance.
        #[arg(long)]
        circuit_out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [1, 1, 1])]
        latencies: Vec<u32>,
    },
    /// Exact minimum SWAP count on a line.
    Exhaustive {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        max_swaps: usize,
        /// Wall-clock limit in seconds.
        #[arg(long)]
        budget: Option<f64>,
        /// Only try the identity placement.
        #[arg(long)]
        fixed_map: bool,
    },
    /// Profile-based SWAP estimate.
    LowerBound {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Print the precedence graph and priorities.
    Ldpg {
        #[arg(long)]
        circuit: PathBuf,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn topology(spec: &str) -> Result<ConnectivityGraph> {
    let path = Path::new(spec);
    if !spec.contains(':') || path.exists() {
        ConnectivityGraph::from_spec(&read(path)?)
    } else {
        ConnectivityGraph::from_spec(spec)
    }
}

fn write_out(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn latencies(v: &[u32]) -> Result<(u32, u32, u32)> {
    match v {
        [x, zz, swap] => Ok((*x, *zz, *swap)),
        _ => Err(Error::InvalidParams("latencies take three values: tX,tZZ,tSWAP".into())),
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Schedule {
            circuit,
            topology: topo,
            strategy,
            reps,
            seed,
            swap_latency,
            out,
        } => {
            let circuit = Circuit::parse(&read(&circuit)?)?;
            let topo = topology(&topo)?;
            let s = Strategy::new(strategy, reps, seed).with_swap_latency(swap_latency);
            let pdpt = strategy_best_of(&circuit, &topo, &s)?;
            eprintln!(
                "gates {} swaps {} depth {}",
                pdpt.gate_count(),
                pdpt.swap_count(),
                pdpt.depth()
            );
            write_out(out.as_deref(), (pdpt.to_json() + "\n").as_bytes())?;
        }
        Command::Verify {
            pdpt,
            circuit,
            topology: topo,
        } => {
            let doc = PdptDocument::parse(&read(&pdpt)?)?;
            let circuit = Circuit::parse(&read(&circuit)?)?;
            let verdict = verify_document(&doc, &circuit, &topology(&topo)?);
            if verdict.is_ok() {
                println!("ok");
            } else {
                for v in &verdict.violations {
                    println!("violation: {v}");
                }
                println!("{} violation(s)", verdict.violations.len());
                return Ok(ExitCode::from(1));
            }
        }
        Command::QaoaBench {
            sizes,
            instances,
            strategies,
            reps,
            seed,
            latencies: lat,
            out,
            format,
            plot_out,
            threads,
        } => {
            let (t_x, t_zz, t_swap) = latencies(&lat)?;
            let config = BenchConfig {
                sizes,
                instances,
                strategies,
                repetitions: reps,
                t_x,
                t_zz,
                t_swap,
                master_seed: seed,
                threads,
                ..BenchConfig::default()
            };
            let report = run_benchmark(&config)?;
            write_out(out.as_deref(), &emit_report(&report, format)?)?;
            if let Some(p) = plot_out {
                write_plot(&report, fs::File::create(p)?)?;
            }
            let failed = report.rows.iter().filter(|r| r.error.is_some()).count();
            if failed > 0 {
                eprintln!("{failed} row(s) failed");
                return Ok(ExitCode::from(1));
            }
        }
        Command::GenInstance {
            n,
            k,
            seed,
            out,
            circuit_out,
            depth,
            latencies: lat,
        } => {
            let inst = random_regular_graph(n, k, seed)?;
            write_out(out.as_deref(), (inst.to_json() + "\n").as_bytes())?;
            if let Some(p) = circuit_out {
                let (t_x, t_zz, t_swap) = latencies(&lat)?;
                let params = QaoaParams::new(depth).with_latencies(t_x, t_zz, t_swap);
                fs::write(p, qaoa_circuit(&inst, &params)?.to_json() + "\n")?;
            }
        }
        Command::Exhaustive {
            instance,
            max_swaps,
            budget,
            fixed_map,
        } => {
            let inst = MaxCutInstance::parse(&read(&instance)?)?;
            let config = ExhaustiveConfig {
                max_swaps,
                enumerate_maps: !fixed_map,
                time_budget: budget.map(Duration::from_secs_f64),
            };
            let result = exhaustive_min_swaps(&inst, &config)?;
            println!("{}", serde_json::to_string_pretty(&result)?);
        }
        Command::LowerBound { instance } => {
            let inst = MaxCutInstance::parse(&read(&instance)?)?;
            println!("{}", heuristic_lower_bound(&inst)?.to_json());
        }
        Command::Ldpg { circuit } => {
            let circuit = Circuit::parse(&read(&circuit)?)?;
            let mut ldpg = Ldpg::build(&circuit);
            ldpg.assign_priorities(&circuit)?;
            print!("{}", ldpg.to_edge_list());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
