//! Benchmark rows: one seeded run per instance, with the matching bound
//! formula evaluated alongside the measured bits. CSV output keeps the
//! desk-scale data diff-friendly.

use std::time::Instant;

use crate::bounds;
use crate::problems::{gen_index, gen_intersect, gen_pc};
use crate::processors::Algorithm;
use crate::reductions::{
    processor_factory, simulate_index_protocol, simulate_intersect_protocol, simulate_pc_protocol,
    variant_algorithm, IntersectVariant,
};
use crate::stream::{random_tree_stream, run_stream};
use crate::{Error, Result};

pub const CSV_HEADER: &str =
    "problem,algorithm,n,p,peak_state_bits,comm_bits,handoffs,formula_bits,ratio,seed,wall_ms";

/// One benchmark measurement. `n` is the streamed graph's node count; the
/// formula column is the matching bound evaluated at the communication
/// problem's own parameters with all constants at 1.
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub problem: &'static str,
    pub algorithm: &'static str,
    pub n: u64,
    pub p: u32,
    pub peak_state_bits: u64,
    pub comm_bits: u64,
    pub handoffs: u64,
    pub formula_bits: f64,
    pub seed: u64,
    pub wall_ms: f64,
}

impl BenchRow {
    /// Measured bits over formula bits: communication when the run handed
    /// transcripts around, peak state otherwise. Zero when the formula
    /// clamps to zero.
    pub fn ratio(&self) -> f64 {
        let measured = if self.handoffs > 0 {
            self.comm_bits as f64
        } else {
            self.peak_state_bits as f64
        };
        if self.formula_bits > 0.0 {
            measured / self.formula_bits
        } else {
            0.0
        }
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{:.3},{:.6},{},{:.3}",
            self.problem,
            self.algorithm,
            self.n,
            self.p,
            self.peak_state_bits,
            self.comm_bits,
            self.handoffs,
            self.formula_bits,
            self.ratio(),
            self.seed,
            self.wall_ms
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchProblem {
    /// Stream a random tree through the depth processor; `sizes` are node
    /// counts.
    TreeDepth,
    /// Pointer-chasing protocol; `sizes` are domain sizes `m`, with
    /// `p + 1` players.
    Pc,
    /// Intersection protocols; `sizes` are domain sizes `m`, with `p + 1`
    /// players per side.
    IntersectCut,
    IntersectNegcycle,
    IntersectScc,
    /// One-way INDEX protocol; `sizes` are encoded-graph node counts.
    Index,
}

impl BenchProblem {
    pub const ALL: [BenchProblem; 6] = [
        BenchProblem::TreeDepth,
        BenchProblem::Pc,
        BenchProblem::IntersectCut,
        BenchProblem::IntersectNegcycle,
        BenchProblem::IntersectScc,
        BenchProblem::Index,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BenchProblem::TreeDepth => "tree-depth",
            BenchProblem::Pc => "pc",
            BenchProblem::IntersectCut => "intersect-cut",
            BenchProblem::IntersectNegcycle => "intersect-negcycle",
            BenchProblem::IntersectScc => "intersect-scc",
            BenchProblem::Index => "index",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == name)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown bench problem `{name}`")))
    }

    fn variant(self) -> Option<IntersectVariant> {
        match self {
            BenchProblem::IntersectCut => Some(IntersectVariant::Cut),
            BenchProblem::IntersectNegcycle => Some(IntersectVariant::NegCycle),
            BenchProblem::IntersectScc => Some(IntersectVariant::Scc),
            _ => None,
        }
    }
}

/// Runs one problem over a size sweep, one row per size, deterministically
/// derived from `seed`.
pub fn run_bench(
    problem: BenchProblem,
    sizes: &[u64],
    p: u32,
    density: f64,
    seed: u64,
) -> Result<Vec<BenchRow>> {
    if p == 0 {
        return Err(Error::InvalidArgument("p must be >= 1".into()));
    }
    let mut rows = Vec::with_capacity(sizes.len());
    for (i, &size) in sizes.iter().enumerate() {
        let case_seed = seed.wrapping_add(i as u64);
        let start = Instant::now();
        let row = match problem {
            BenchProblem::TreeDepth => {
                let n = u32::try_from(size)
                    .map_err(|_| Error::InvalidArgument(format!("size {size} too large")))?;
                if n < 2 {
                    return Err(Error::InvalidArgument("tree sizes start at 2 nodes".into()));
                }
                let mut stream = random_tree_stream(n, case_seed);
                stream.passes = p;
                let out = run_stream(&mut Algorithm::TreeDepth.processor(), &stream)?;
                BenchRow {
                    problem: problem.name(),
                    algorithm: Algorithm::TreeDepth.name(),
                    n: u64::from(n),
                    p,
                    peak_state_bits: out.peak_state_bits,
                    comm_bits: 0,
                    handoffs: 0,
                    formula_bits: bounds::depth_pass_bound(f64::from(n), f64::from(p)),
                    seed: case_seed,
                    wall_ms: 0.0,
                }
            }
            BenchProblem::Pc => {
                let m = size as usize;
                let q = p as usize + 1;
                let inst = gen_pc(m, q, case_seed)?;
                let run =
                    simulate_pc_protocol(&inst, processor_factory(Algorithm::TreeDepth), p)?;
                BenchRow {
                    problem: problem.name(),
                    algorithm: Algorithm::TreeDepth.name(),
                    n: ((q + 2) * m + 1) as u64,
                    p,
                    peak_state_bits: 0,
                    comm_bits: run.comm_bits,
                    handoffs: run.handoffs,
                    formula_bits: bounds::pc_cc_bound(m as f64, q as f64),
                    seed: case_seed,
                    wall_ms: 0.0,
                }
            }
            BenchProblem::IntersectCut
            | BenchProblem::IntersectNegcycle
            | BenchProblem::IntersectScc => {
                let variant = problem.variant().expect("intersect problems carry a variant");
                let m = size as usize;
                let q = p as usize + 1;
                let inst = gen_intersect(m, q, density, case_seed)?;
                let algo = variant_algorithm(variant);
                let run =
                    simulate_intersect_protocol(&inst, processor_factory(algo), variant, p)?;
                BenchRow {
                    problem: problem.name(),
                    algorithm: algo.name(),
                    n: ((2 * q + 1) * m) as u64,
                    p,
                    peak_state_bits: 0,
                    comm_bits: run.comm_bits,
                    handoffs: run.handoffs,
                    formula_bits: bounds::intersect_cc_bound(m as f64, q as f64, false),
                    seed: case_seed,
                    wall_ms: 0.0,
                }
            }
            BenchProblem::Index => {
                let n_nodes = size as usize;
                let inst = gen_index(n_nodes, density, case_seed)?;
                let run = simulate_index_protocol(&inst, processor_factory(Algorithm::NegCycle))?;
                BenchRow {
                    problem: problem.name(),
                    algorithm: Algorithm::NegCycle.name(),
                    n: n_nodes as u64 + 1,
                    p: 1,
                    peak_state_bits: 0,
                    comm_bits: run.comm_bits,
                    handoffs: run.handoffs,
                    formula_bits: (n_nodes * (n_nodes - 1) / 2) as f64,
                    seed: case_seed,
                    wall_ms: 0.0,
                }
            }
        };
        let wall_ms = start.elapsed().as_secs_f64() * 1e3;
        rows.push(BenchRow { wall_ms, ..row });
    }
    Ok(rows)
}
