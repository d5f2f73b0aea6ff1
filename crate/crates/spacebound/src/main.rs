//! Command-line entry point: generators, processor runs, protocol
//! simulations, verification suites, benchmarks, and bound evaluation.
//!
//! Exit codes: 0 success, 1 verification or referee failure, 2 usage or
//! input error.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use spacebound::bench::{run_bench, BenchProblem, CSV_HEADER};
use spacebound::bounds;
use spacebound::problems::{
    eval_intersect, eval_pointer_chase, gen_index, gen_intersect, gen_pc, IndexInstance,
};
use spacebound::processors::Algorithm;
use spacebound::reductions::{
    build_index_negcycle, build_intersect_graph, build_pc_tree, processor_factory,
    simulate_index_protocol, simulate_intersect_protocol, simulate_pc_protocol, variant_algorithm,
    ComputationGraph, IntersectVariant, ProtocolRun,
};
use spacebound::stream::{read_stream, run_stream, write_stream, GraphStream};
use spacebound::suites::{self, SuiteReport};
use spacebound::{Error, Result};

#[derive(Parser)]
#[command(
    name = "spacebound",
    about = "Memory-metered graph streaming testbed",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a constructed stream (plus a decode sidecar where applicable).
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Run one streaming processor over a stream file.
    Run {
        /// tree-depth | st-distance | st-mincut | neg-cycle | scc-same
        #[arg(long)]
        algo: String,
        /// Stream file path.
        stream: PathBuf,
    },
    /// Simulate a communication protocol around a streaming processor and
    /// check it against the exact referee.
    Simulate {
        #[command(subcommand)]
        problem: SimulateProblem,
    },
    /// Run a verification suite at full scale.
    Verify {
        /// lemma1 | decode | index | intersect | fork-replay | cut-fork |
        /// oracles | bounds
        suite: String,
    },
    /// Sweep a problem over instance sizes and emit CSV.
    Bench {
        /// tree-depth | pc | intersect-cut | intersect-negcycle |
        /// intersect-scc | index
        #[arg(long)]
        problem: String,
        /// Instance sizes (node count, or domain size for chasing
        /// problems); repeatable.
        #[arg(long = "n", required = true)]
        sizes: Vec<u64>,
        #[arg(long, default_value_t = 1)]
        p: u32,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate one bound formula.
    Bound {
        /// pc-cc | depth-pass | intersect-cc | stirling |
        /// depth-count-lower | depth-profiles
        name: String,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long)]
        k: Option<u64>,
        /// Use the claim-form p^19 denominator for intersect-cc.
        #[arg(long)]
        claim: bool,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// Pointer-chasing computation tree for a seeded instance.
    PcTree {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Intersection gadget, undirected cut variant.
    IntersectCut {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Intersection gadget, weighted negative-cycle variant.
    IntersectNegcycle {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Intersection gadget, strongly-connected-component variant.
    IntersectScc {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// INDEX-to-negative-cycle stream for an explicit bit array.
    IndexNegcycle {
        /// Node count of the encoded graph; the bit array covers its
        /// n(n-1)/2 upper-triangle pairs.
        #[arg(long)]
        n: usize,
        /// Queried pair index.
        #[arg(long)]
        i: usize,
        /// Bit array as a 0/1 string.
        #[arg(long)]
        bits: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random rooted tree stream.
    RandomTree {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random connected unweighted graph stream.
    RandomGraph {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SimulateProblem {
    /// Pointer chasing through the depth protocol with p+1 players.
    Pc {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        p: u32,
        #[arg(long, default_value = "tree-depth")]
        algo: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// One-way INDEX through negative-cycle detection.
    Index {
        /// Node count of the encoded graph.
        #[arg(long)]
        n: usize,
        /// Run every bit array and index for this n (capped at n = 6).
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Set-chasing intersection through min s-t cut.
    IntersectCut {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Set-chasing intersection through negative-cycle detection.
    IntersectNegcycle {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Set-chasing intersection through SCC co-membership.
    IntersectScc {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Gen { kind } => cmd_gen(kind).map(|()| 0),
        Command::Run { algo, stream } => cmd_run(&algo, &stream).map(|()| 0),
        Command::Simulate { problem } => cmd_simulate(problem),
        Command::Verify { suite } => cmd_verify(&suite),
        Command::Bench {
            problem,
            sizes,
            p,
            density,
            seed,
            out,
        } => cmd_bench(&problem, &sizes, p, density, seed, out.as_deref()).map(|()| 0),
        Command::Bound { name, n, p, k, claim } => cmd_bound(&name, n, p, k, claim).map(|()| 0),
    }
}

fn write_out(stream: &GraphStream, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            let mut sink = BufWriter::new(File::create(path)?);
            write_stream(stream, &mut sink)?;
            sink.flush()?;
        }
        None => {
            write_stream(stream, &mut std::io::stdout().lock())?;
        }
    }
    Ok(())
}

fn write_sidecar(graph: &ComputationGraph, out: Option<&Path>) -> Result<()> {
    let Some(path) = out else { return Ok(()) };
    let mut sidecar = String::from("terminals");
    if let Some(root) = graph.terminals.root {
        sidecar.push_str(&format!(" N {root}"));
    }
    if let Some(n1) = graph.terminals.n1 {
        sidecar.push_str(&format!(" n1 {n1}"));
    }
    if let Some(n1p) = graph.terminals.n1_prime {
        sidecar.push_str(&format!(" n1p {n1p}"));
    }
    sidecar.push('\n');
    for &(answer, element) in &graph.decode {
        sidecar.push_str(&format!("decode {answer} {element}\n"));
    }
    let mut sidecar_path = path.as_os_str().to_owned();
    sidecar_path.push(".decode");
    std::fs::write(sidecar_path, sidecar)?;
    Ok(())
}

fn cmd_gen(kind: GenKind) -> Result<()> {
    match kind {
        GenKind::PcTree { m, q, seed, out } => {
            let graph = build_pc_tree(&gen_pc(m, q, seed)?);
            write_out(&graph.stream, out.as_deref())?;
            write_sidecar(&graph, out.as_deref())
        }
        GenKind::IntersectCut { m, q, density, seed, out } => {
            gen_intersect_files(m, q, density, seed, out, IntersectVariant::Cut)
        }
        GenKind::IntersectNegcycle { m, q, density, seed, out } => {
            gen_intersect_files(m, q, density, seed, out, IntersectVariant::NegCycle)
        }
        GenKind::IntersectScc { m, q, density, seed, out } => {
            gen_intersect_files(m, q, density, seed, out, IntersectVariant::Scc)
        }
        GenKind::IndexNegcycle { n, i, bits, out } => {
            let expected = n * n.saturating_sub(1) / 2;
            if bits.len() != expected {
                return Err(Error::InvalidArgument(format!(
                    "bit string has {} bits, n={n} needs {expected}",
                    bits.len()
                )));
            }
            let bits = bits
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => Err(Error::InvalidArgument(format!("bad bit `{other}`"))),
                })
                .collect::<Result<Vec<bool>>>()?;
            let inst = IndexInstance::new(bits, i)?;
            let streams = build_index_negcycle(&inst)?;
            let stream = GraphStream {
                n: streams.n_total,
                directed: true,
                weighted: true,
                passes: 1,
                root: None,
                tokens: streams.alice.into_iter().chain(streams.bob).collect(),
            };
            write_out(&stream, out.as_deref())
        }
        GenKind::RandomTree { n, seed, out } => {
            require_nodes(n)?;
            write_out(&spacebound::stream::random_tree_stream(n, seed), out.as_deref())
        }
        GenKind::RandomGraph { n, density, seed, out } => {
            require_nodes(n)?;
            if !(0.0..=1.0).contains(&density) {
                return Err(Error::InvalidArgument(format!("density {density} outside [0, 1]")));
            }
            write_out(
                &spacebound::stream::random_connected_graph_stream(n, density, seed),
                out.as_deref(),
            )
        }
    }
}

fn require_nodes(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument("need at least two nodes".into()));
    }
    Ok(())
}

fn gen_intersect_files(
    m: usize,
    q: usize,
    density: f64,
    seed: u64,
    out: Option<PathBuf>,
    variant: IntersectVariant,
) -> Result<()> {
    let graph = build_intersect_graph(&gen_intersect(m, q, density, seed)?, variant);
    write_out(&graph.stream, out.as_deref())?;
    write_sidecar(&graph, out.as_deref())
}

fn cmd_run(algo: &str, path: &Path) -> Result<()> {
    let algo = Algorithm::from_name(algo)?;
    let stream = read_stream(&mut BufReader::new(File::open(path)?))?;
    let out = run_stream(&mut algo.processor(), &stream)?;
    println!("answer={} bits={}", out.answer, out.peak_state_bits);
    Ok(())
}

fn report_run(run: &ProtocolRun, referee: i64) -> i32 {
    println!(
        "answer={} referee={referee} handoffs={} comm_bits={}",
        run.answer, run.handoffs, run.comm_bits
    );
    if run.answer == referee {
        println!("verdict=match");
        0
    } else {
        println!("verdict=mismatch");
        1
    }
}

fn cmd_simulate(problem: SimulateProblem) -> Result<i32> {
    match problem {
        SimulateProblem::Pc { m, p, algo, seed } => {
            let algo = Algorithm::from_name(&algo)?;
            if algo != Algorithm::TreeDepth {
                return Err(Error::InvalidArgument(
                    "the pointer-chasing protocol wraps the tree-depth processor".into(),
                ));
            }
            let inst = gen_pc(m, p as usize + 1, seed)?;
            let run = simulate_pc_protocol(&inst, processor_factory(algo), p)?;
            Ok(report_run(&run, eval_pointer_chase(&inst) as i64))
        }
        SimulateProblem::Index {
            n,
            exhaustive,
            density,
            seed,
        } => {
            if exhaustive {
                if n > 6 {
                    return Err(Error::InvalidArgument(
                        "exhaustive INDEX is capped at n = 6 (2^15 arrays)".into(),
                    ));
                }
                let report = suites::index_suite(n);
                println!("cases={} mismatches={}", report.checks, report.failures.len());
                for failure in report.failures.iter().take(10) {
                    eprintln!("mismatch: {failure}");
                }
                return Ok(i32::from(!report.passed()));
            }
            let inst = gen_index(n, density, seed)?;
            let run = simulate_index_protocol(&inst, processor_factory(Algorithm::NegCycle))?;
            Ok(report_run(&run, i64::from(inst.queried_bit())))
        }
        SimulateProblem::IntersectCut { m, p, density, seed } => {
            simulate_intersect_cli(m, p, density, seed, IntersectVariant::Cut)
        }
        SimulateProblem::IntersectNegcycle { m, p, density, seed } => {
            simulate_intersect_cli(m, p, density, seed, IntersectVariant::NegCycle)
        }
        SimulateProblem::IntersectScc { m, p, density, seed } => {
            simulate_intersect_cli(m, p, density, seed, IntersectVariant::Scc)
        }
    }
}

fn simulate_intersect_cli(
    m: usize,
    p: u32,
    density: f64,
    seed: u64,
    variant: IntersectVariant,
) -> Result<i32> {
    let inst = gen_intersect(m, p as usize + 1, density, seed)?;
    let run = simulate_intersect_protocol(
        &inst,
        processor_factory(variant_algorithm(variant)),
        variant,
        p,
    )?;
    Ok(report_run(&run, i64::from(eval_intersect(&inst))))
}

fn cmd_verify(suite: &str) -> Result<i32> {
    let report: SuiteReport = match suite {
        "lemma1" => suites::lemma1_suite(3, 3, 1000, 8, 4, 0x5ea1),
        "decode" => suites::decode_suite(3, 3, 1000, 8, 4, 0x5ea2),
        "index" => suites::index_suite(5),
        "intersect" => suites::intersect_suite(1000, 6, 2, &[0.2, 0.5, 0.9], 0x5ea3),
        "fork-replay" => suites::fork_replay_suite(500, 200, 0x5ea4),
        "cut-fork" => suites::cut_fork_suite(200, 30, 0x5ea5),
        "oracles" => suites::oracle_suite(0x5ea6),
        "bounds" => suites::bounds_suite(),
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown suite `{other}` (lemma1 | decode | index | intersect | fork-replay | cut-fork | oracles | bounds)"
            )))
        }
    };
    println!(
        "suite={} checks={} failures={}",
        report.name,
        report.checks,
        report.failures.len()
    );
    for failure in report.failures.iter().take(10) {
        eprintln!("failure: {failure}");
    }
    Ok(i32::from(!report.passed()))
}

fn cmd_bench(
    problem: &str,
    sizes: &[u64],
    p: u32,
    density: f64,
    seed: u64,
    out: Option<&Path>,
) -> Result<()> {
    let problem = BenchProblem::from_name(problem)?;
    let rows = run_bench(problem, sizes, p, density, seed)?;
    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for row in &rows {
        csv.push_str(&row.to_csv());
        csv.push('\n');
    }
    match out {
        Some(path) => std::fs::write(path, csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| Error::InvalidArgument(format!("missing --{flag}")))
}

fn cmd_bound(name: &str, n: Option<u64>, p: Option<u32>, k: Option<u64>, claim: bool) -> Result<()> {
    match name {
        "pc-cc" => {
            let (n, p) = (require(n, "n")?, require(p, "p")?);
            println!("{}", bounds::pc_cc_bound(n as f64, f64::from(p)));
        }
        "depth-pass" => {
            let (n, p) = (require(n, "n")?, require(p, "p")?);
            println!("{}", bounds::depth_pass_bound(n as f64, f64::from(p)));
        }
        "intersect-cc" => {
            let (n, p) = (require(n, "n")?, require(p, "p")?);
            println!("{}", bounds::intersect_cc_bound(n as f64, f64::from(p), claim));
        }
        "stirling" => {
            let (n, k) = (require(n, "n")?, require(k, "k")?);
            println!("{}", bounds::stirling2(n as usize, k as usize)?);
        }
        "depth-count-lower" => {
            let n = require(n, "n")?;
            let (value, log2) = bounds::depth_count_lower(n as usize)?;
            println!("{value} log2={log2:.3}");
        }
        "depth-profiles" => {
            let n = require(n, "n")?;
            println!("{}", bounds::realizable_depth_profiles(n as usize)?);
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown bound `{other}` (pc-cc | depth-pass | intersect-cc | stirling | depth-count-lower | depth-profiles)"
            )))
        }
    }
    Ok(())
}
