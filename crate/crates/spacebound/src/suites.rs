//! Verification suites: parameterized property sweeps over exhaustive and
//! seeded instance sets. The CLI `verify` command and the acceptance tests
//! run the same code with their own parameters.

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds;
use crate::oracles::{self, StaticGraph};
use crate::problems::{
    eval_intersect, eval_pointer_chase, gen_intersect, FunctionTable, IndexInstance, PcInstance,
};
use crate::processors::{materialize_stream, Algorithm};
use crate::reductions::{
    build_index_negcycle, build_intersect_graph, build_pc_tree, decode_pc_depth,
    fork_replay_depth_extraction, global_mincut_via_st_forking, processor_factory,
    simulate_index_protocol, simulate_intersect_protocol, simulate_pc_protocol, span_snapshot_bits,
    variant_algorithm, IntersectVariant,
};
use crate::stream::{
    random_connected_graph_stream, Edge, GraphStream, Query, StreamMeta, Token,
};
use crate::Result;

/// Outcome of one suite run.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: u64,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport {
            name,
            checks: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, context: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(context());
        }
    }

    fn check_result<T>(&mut self, result: Result<T>, context: impl FnOnce() -> String) -> Option<T> {
        self.checks += 1;
        match result {
            Ok(value) => Some(value),
            Err(e) => {
                self.failures.push(format!("{}: {e}", context()));
                None
            }
        }
    }

    fn merge(&mut self, other: SuiteReport) {
        self.checks += other.checks;
        self.failures.extend(other.failures);
    }
}

/// The `code`-th function table over `[m]`, mixed-radix decoded.
fn nth_table(m: usize, code: u64) -> FunctionTable {
    let mut img = Vec::with_capacity(m);
    let mut c = code;
    for _ in 0..m {
        img.push((c % m as u64) as usize + 1);
        c /= m as u64;
    }
    FunctionTable::new(m, img).expect("entries are in range by construction")
}

/// Every pointer-chasing instance with `m <= max_m` and `q <= max_q`.
fn for_each_pc_instance(max_m: usize, max_q: usize, mut visit: impl FnMut(&PcInstance)) {
    for m in 1..=max_m {
        let table_count = (m as u64).pow(m as u32);
        for q in 1..=max_q {
            let total = table_count.pow(q as u32);
            for code in 0..total {
                let mut c = code;
                let tables = (0..q)
                    .map(|_| {
                        let t = nth_table(m, c % table_count);
                        c /= table_count;
                        t
                    })
                    .collect();
                visit(&PcInstance::new(tables).expect("valid by construction"));
            }
        }
    }
}

fn seeded_pc_instances(
    count: u64,
    max_m: usize,
    max_q: usize,
    seed: u64,
) -> impl Iterator<Item = PcInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(move |_| {
        let m = rng.random_range(1..=max_m);
        let q = rng.random_range(1..=max_q);
        crate::problems::gen_pc(m, q, rng.random()).expect("valid parameters")
    })
}

fn stream_is_tree(stream: &GraphStream) -> bool {
    let n = stream.n as usize;
    let edges: Vec<_> = stream.edge_tokens().collect();
    if edges.len() != n - 1 {
        return false;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        if parent[x] != x {
            let root = find(parent, parent[x]);
            parent[x] = root;
        }
        parent[x]
    }
    for e in edges {
        let (ru, rv) = (find(&mut parent, e.u as usize), find(&mut parent, e.v as usize));
        if ru != rv {
            parent[ru] = rv;
        }
    }
    let root = find(&mut parent, 0);
    (1..n).all(|v| find(&mut parent, v) == root)
}

/// Tree property of the pointer-chasing computation graph: connected with
/// exactly `nodes - 1` edges, for every instance visited.
pub fn lemma1_suite(
    exh_m: usize,
    exh_q: usize,
    random_count: u64,
    rand_m: usize,
    rand_q: usize,
    seed: u64,
) -> SuiteReport {
    let mut report = SuiteReport::new("lemma1");
    let mut run = |inst: &PcInstance| {
        let graph = build_pc_tree(inst);
        report.check(stream_is_tree(&graph.stream), || {
            format!("m={} q={}: computation graph is not a tree", inst.m(), inst.q())
        });
    };
    for_each_pc_instance(exh_m, exh_q, &mut run);
    for inst in seeded_pc_instances(random_count, rand_m, rand_q, seed) {
        run(&inst);
    }
    report
}

/// Reduction soundness for the depth protocol: the decoded depth of `n1`
/// equals the pointer-chasing referee, both through a direct BFS on the
/// built graph and through the full transcript-passing simulation, with
/// the handoff count the schedule predicts.
pub fn decode_suite(
    exh_m: usize,
    exh_q: usize,
    random_count: u64,
    rand_m: usize,
    rand_q: usize,
    seed: u64,
) -> SuiteReport {
    let mut report = SuiteReport::new("decode");
    let mut run = |inst: &PcInstance| {
        let expected = eval_pointer_chase(inst);
        let graph = build_pc_tree(inst);
        let ctx = || format!("m={} q={}", inst.m(), inst.q());

        let bfs = materialize_stream(&graph.stream)
            .and_then(|g| oracles::bfs_depths(&g, graph.terminals.root.unwrap() as usize));
        if let Some(depths) = report.check_result(bfs, ctx) {
            let d_n1 = depths[graph.terminals.n1.unwrap() as usize] as i64;
            let decoded = decode_pc_depth(d_n1, inst.q());
            report.check(decoded.as_ref().ok() == Some(&expected), || {
                format!("{}: decode({d_n1}) = {decoded:?}, referee {expected}", ctx())
            });
        }

        let passes = inst.q().saturating_sub(1).max(1) as u32;
        let sim = simulate_pc_protocol(inst, processor_factory(Algorithm::TreeDepth), passes);
        if let Some(run) = report.check_result(sim, ctx) {
            report.check(run.answer == expected as i64, || {
                format!("{}: protocol answered {}, referee {expected}", ctx(), run.answer)
            });
            let scheduled = inst.q() as u64 * u64::from(passes) - 1;
            report.check(run.handoffs == scheduled, || {
                format!("{}: {} handoffs, schedule says {scheduled}", ctx(), run.handoffs)
            });
        }
    };
    for_each_pc_instance(exh_m, exh_q, &mut run);
    for inst in seeded_pc_instances(random_count, rand_m, rand_q, seed) {
        run(&inst);
    }
    report
}

/// Exhaustive INDEX reduction check: for every bit array and index up to
/// `max_n` graph nodes, the simulated one-way protocol recovers the
/// queried bit, with exactly one handoff whose size is the snapshot after
/// Alice's span.
pub fn index_suite(max_n: usize) -> SuiteReport {
    assert!(max_n <= 6, "exhaustive INDEX space is 2^(n(n-1)/2)");
    let mut report = SuiteReport::new("index");
    let factory = processor_factory(Algorithm::NegCycle);
    for n in 2..=max_n {
        let big_n = n * (n - 1) / 2;
        for mask in 0u64..(1 << big_n) {
            let bits: Vec<bool> = (0..big_n).map(|k| mask & (1 << k) != 0).collect();
            let inst0 = IndexInstance::new(bits.clone(), 0).expect("valid");
            let expected_bits = build_index_negcycle(&inst0).ok().and_then(|streams| {
                let meta = StreamMeta {
                    n: streams.n_total,
                    passes: 1,
                    directed: true,
                    weighted: true,
                    query: None,
                    root: None,
                };
                span_snapshot_bits(&meta, &streams.alice, &factory).ok()
            });
            for index in 0..big_n {
                let inst = IndexInstance::new(bits.clone(), index).expect("valid");
                let ctx = || format!("n={n} bits={mask:b} i={index}");
                if let Some(run) = report.check_result(simulate_index_protocol(&inst, &factory), ctx)
                {
                    report.check(run.answer == i64::from(inst.queried_bit()), || {
                        format!("{}: answered {}, bit is {}", ctx(), run.answer, inst.queried_bit())
                    });
                    report.check(run.handoffs == 1, || {
                        format!("{}: {} handoffs", ctx(), run.handoffs)
                    });
                    report.check(Some(run.comm_bits) == expected_bits, || {
                        format!(
                            "{}: comm_bits {} != alice snapshot {expected_bits:?}",
                            ctx(),
                            run.comm_bits
                        )
                    });
                }
            }
        }
    }
    report
}

/// Intersection reductions: all three variants agree with the referee on
/// seeded instances; the negative-cycle witness, when present, weighs -1;
/// the directed builds minus the blue edge are acyclic.
pub fn intersect_suite(
    count: u64,
    max_m: usize,
    max_p: usize,
    densities: &[f64],
    seed: u64,
) -> SuiteReport {
    let mut report = SuiteReport::new("intersect");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..count {
        let m = rng.random_range(1..=max_m);
        let p = rng.random_range(1..=max_p) as u32;
        let density = densities[case as usize % densities.len()];
        let inst = match gen_intersect(m, p as usize + 1, density, rng.random()) {
            Ok(inst) => inst,
            Err(e) => {
                report.check(false, || format!("case {case}: generator failed: {e}"));
                continue;
            }
        };
        let expected = eval_intersect(&inst);
        let ctx = |variant: IntersectVariant| {
            format!("case {case} m={m} p={p} density={density} variant={}", variant.name())
        };

        for variant in IntersectVariant::ALL {
            let sim = simulate_intersect_protocol(
                &inst,
                processor_factory(variant_algorithm(variant)),
                variant,
                p,
            );
            if let Some(run) = report.check_result(sim, || ctx(variant)) {
                report.check(run.answer == i64::from(expected), || {
                    format!("{}: answered {}, referee {expected}", ctx(variant), run.answer)
                });
                let scheduled = 2 * (u64::from(p) + 1) * u64::from(p) - 1;
                report.check(run.handoffs == scheduled, || {
                    format!("{}: {} handoffs, schedule says {scheduled}", ctx(variant), run.handoffs)
                });
            }
        }

        for variant in [IntersectVariant::NegCycle, IntersectVariant::Scc] {
            let graph = build_intersect_graph(&inst, variant);
            let mut stream = graph.stream.clone();
            stream.tokens.pop(); // the blue edge is the last token
            match materialize_stream(&stream) {
                Ok(g) => {
                    report.check(oracles::is_acyclic_directed(&g), || {
                        format!("{}: graph minus blue edge has a directed cycle", ctx(variant))
                    });
                    if variant == IntersectVariant::NegCycle && expected {
                        // Every n1 -> n1' path crosses exactly 2q unit edges,
                        // so the witness cycle through the blue edge weighs
                        // 2q - (2q+1) = -1.
                        let hops = directed_hop_distance(
                            &g,
                            graph.terminals.n1.unwrap() as usize,
                            graph.terminals.n1_prime.unwrap() as usize,
                        );
                        report.check(hops == Some(2 * (p as usize + 1)), || {
                            format!("{}: witness path hops {hops:?}, expected {}", ctx(variant), 2 * (p + 1))
                        });
                    }
                }
                Err(e) => report.check(false, || format!("{}: {e}", ctx(variant))),
            }
        }
    }
    report
}

fn directed_hop_distance(g: &StaticGraph, s: usize, t: usize) -> Option<usize> {
    let mut adj = vec![Vec::new(); g.n];
    for &(u, v, _) in &g.arcs {
        adj[u].push(v);
    }
    let mut dist = vec![usize::MAX; g.n];
    dist[s] = 0;
    let mut queue = std::collections::VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    (dist[t] != usize::MAX).then_some(dist[t])
}

/// A random rooted tree stream on `n` nodes with the last node's edge
/// withheld; the withheld node is the query. Returns the stream, the
/// withheld node, and the full parent table for oracle checks.
pub fn withheld_leaf_tree(n: u32, seed: u64) -> (GraphStream, u32, Vec<u32>) {
    assert!(n >= 3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let parents: Vec<u32> = (1..n).map(|v| rng.random_range(0..v)).collect();
    let v = n - 1; // later nodes never attach below it, so it is a leaf
    let mut edges: Vec<Edge> = parents
        .iter()
        .enumerate()
        .filter(|&(k, _)| (k + 1) as u32 != v)
        .map(|(k, &p)| Edge::unweighted(p, (k + 1) as u32))
        .collect();
    crate::stream::shuffle(&mut edges, &mut rng);
    let tokens = std::iter::once(Token::Query(Query::Node(v)))
        .chain(edges.into_iter().map(Token::Edge))
        .collect();
    (
        GraphStream {
            n,
            directed: false,
            weighted: false,
            passes: 1,
            root: Some(0),
            tokens,
        },
        v,
        parents,
    )
}

/// Transcript-fork depth extraction recovers exact BFS depths on random
/// trees.
pub fn fork_replay_suite(trees: u64, max_n: u32, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("fork-replay");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..trees {
        let n = rng.random_range(3..=max_n);
        let (stream, v, parents) = withheld_leaf_tree(n, rng.random());
        let extraction =
            fork_replay_depth_extraction(&stream, v, processor_factory(Algorithm::TreeDepth));
        let Some(depths) = report.check_result(extraction, || format!("case {case} n={n}"))
        else {
            continue;
        };
        let full: Vec<(usize, usize, i64)> = parents
            .iter()
            .enumerate()
            .map(|(k, &p)| (p as usize, k + 1, 1))
            .collect();
        let oracle = oracles::bfs_depths(&StaticGraph::new(n as usize, false, full), 0)
            .expect("parent table is a tree");
        report.check(depths.len() == n as usize - 1, || {
            format!("case {case} n={n}: {} depths extracted", depths.len())
        });
        for (&u, &d) in &depths {
            report.check(d == oracle[u as usize], || {
                format!("case {case} n={n} node {u}: extracted {d}, oracle {}", oracle[u as usize])
            });
        }
    }
    report
}

/// Min-cut forking equals the max-flow global-min-cut oracle on random
/// connected graphs, and no forked cut value ever reaches `2n`.
pub fn cut_fork_suite(graphs: u64, max_n: u32, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("cut-fork");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..graphs {
        let n = rng.random_range(2..=max_n);
        let density = rng.random_range(0.05..0.6);
        let stream = random_connected_graph_stream(n, density, rng.random());
        let x = rng.random_range(0..n);
        let fork =
            global_mincut_via_st_forking(&stream, x, processor_factory(Algorithm::StMinCut));
        let Some(fork) = report.check_result(fork, || format!("case {case} n={n}")) else {
            continue;
        };
        let oracle = materialize_stream(&stream).and_then(|g| oracles::global_min_cut(&g));
        if let Some(oracle) = report.check_result(oracle, || format!("case {case} n={n}")) {
            report.check(fork.value == oracle, || {
                format!("case {case} n={n}: forked {}, oracle {oracle}", fork.value)
            });
        }
        for &(y, cut) in &fork.per_target {
            report.check(cut < 2 * i64::from(n), || {
                format!("case {case} n={n} target {y}: cut {cut} >= 2n")
            });
        }
    }
    report
}

fn random_static_graph(
    n: usize,
    density: f64,
    directed: bool,
    weights: std::ops::RangeInclusive<i64>,
    rng: &mut ChaCha8Rng,
) -> StaticGraph {
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u == v || (!directed && v < u) {
                continue;
            }
            if rng.random_bool(density) {
                arcs.push((u, v, rng.random_range(weights.clone())));
            }
        }
    }
    StaticGraph::new(n, directed, arcs)
}

/// Cross-validation of every efficient oracle against its exhaustive
/// counterpart.
pub fn oracle_suite(seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("oracles");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for case in 0..80 {
        let n = rng.random_range(2..=12usize);
        let g = random_static_graph(n, 0.4, false, 1..=4, &mut rng);
        let t = rng.random_range(1..n);
        let flow = oracles::max_flow_min_cut(&g, 0, t);
        if let Some(flow) = report.check_result(flow, || format!("maxflow case {case}")) {
            report.check(flow == oracles::exhaustive_st_min_cut(&g, 0, t), || {
                format!("maxflow case {case} n={n}: flow {flow} != exhaustive cut")
            });
        }
    }

    for case in 0..120 {
        let n = rng.random_range(2..=8usize);
        let g = random_static_graph(n, 0.35, true, -2..=3, &mut rng);
        report.check(
            oracles::bellman_ford_negcycle(&g) == oracles::exhaustive_negcycle(&g),
            || format!("negcycle case {case} n={n}: relaxation disagrees with cycle enumeration"),
        );
    }

    for case in 0..120 {
        let n = rng.random_range(2..=8usize);
        let g = random_static_graph(n, 0.3, true, 1..=1, &mut rng);
        let s = rng.random_range(0..n);
        let t = rng.random_range(0..n);
        report.check(
            oracles::scc_same(&g, s, t) == oracles::exhaustive_scc_same(&g, s, t),
            || format!("scc case {case} n={n}: tarjan disagrees with transitive closure"),
        );
    }

    report
}

/// Depth-metering band: the tree-depth processor's peak state over random
/// trees stays within `[0.5, 16]` times `n log2 n`, and the constant is
/// stable (max/min ratio spread at most 2x) across the sweep.
pub fn metering_suite(sizes: &[u32], seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("metering");
    let mut ratios = Vec::with_capacity(sizes.len());
    for (i, &n) in sizes.iter().enumerate() {
        let stream = crate::stream::random_tree_stream(n, seed + i as u64);
        let out = crate::stream::run_stream(&mut Algorithm::TreeDepth.processor(), &stream);
        let Some(out) = report.check_result(out, || format!("n={n}")) else {
            continue;
        };
        let ratio = out.peak_state_bits as f64 / (f64::from(n) * f64::from(n).log2());
        report.check((0.5..=16.0).contains(&ratio), || {
            format!("n={n}: peak {} bits is {ratio:.3}x n log2 n", out.peak_state_bits)
        });
        ratios.push(ratio);
    }
    if let (Some(max), Some(min)) = (
        ratios.iter().copied().reduce(f64::max),
        ratios.iter().copied().reduce(f64::min),
    ) {
        report.check(max / min <= 2.0, || {
            format!("ratio band unstable across sweep: min {min:.3}, max {max:.3}")
        });
    }
    report
}

/// Exhaustive set-partition count with exactly `k` blocks (restricted
/// growth strings); the independent oracle for the Stirling recurrence.
pub fn partitions_by_blocks(n: usize, k: usize) -> u64 {
    fn recurse(pos: usize, n: usize, used: usize, k: usize) -> u64 {
        if pos == n {
            return u64::from(used == k);
        }
        let mut total = 0;
        for block in 0..=used.min(k.saturating_sub(1)) {
            let next_used = used.max(block + 1);
            total += recurse(pos + 1, n, next_used, k);
        }
        total
    }
    if n == 0 {
        return u64::from(k == 0);
    }
    recurse(0, n, 0, k)
}

/// Counting-side checks: Stirling numbers against partition enumeration,
/// plus the pinned values of the depth-count chain and the realizable
/// profile count.
pub fn bounds_counting_suite() -> SuiteReport {
    let mut report = SuiteReport::new("bounds-counting");
    for n in 0..=8usize {
        for k in 0..=n {
            match bounds::stirling2(n, k) {
                Ok(value) => report.check(value == BigUint::from(partitions_by_blocks(n, k)), || {
                    format!("S({n},{k}) disagrees with partition enumeration")
                }),
                Err(e) => report.check(false, || format!("S({n},{k}): {e}")),
            }
        }
    }
    report.check(
        bounds::depth_count_lower(4).map(|(v, _)| v).ok() == Some(BigUint::from(16u32)),
        || "depth_count_lower(4) != 16".into(),
    );
    report.check(
        bounds::depth_count_lower(3).map(|(v, _)| v).ok() == Some(BigUint::from(3u32)),
        || "depth_count_lower(3) != 3".into(),
    );
    report.check(
        bounds::realizable_depth_profiles(3).ok() == Some(BigUint::from(3u32)),
        || "realizable_depth_profiles(3) != 3".into(),
    );
    report.check(
        bounds::realizable_depth_profiles(2).ok() == Some(BigUint::one()),
        || "realizable_depth_profiles(2) != 1".into(),
    );
    report
}

/// Formula-side checks: pinned evaluator values and the high-precision
/// re-evaluation grid for the intersection bound.
pub fn bounds_formula_suite() -> SuiteReport {
    let mut report = SuiteReport::new("bounds-formula");
    report.check(
        bounds::pc_cc_bound((1u64 << 20) as f64, 1.0) == 1_048_556.0,
        || "pc_cc_bound(2^20, 1) != 1048556".into(),
    );
    report.check(
        bounds::depth_pass_bound((1u64 << 14) as f64, 2.0) == 115.0,
        || "depth_pass_bound(2^14, 2) != 115".into(),
    );
    for &n in &[64.0f64, 1024.0, 65536.0, 1048576.0] {
        for &p in &[1.0f64, 2.0, 3.0, 5.0, 8.0] {
            let direct = bounds::intersect_cc_bound(n, p, false);
            let log_val = (1.0 + 1.0 / (2.0 * (p + 1.0))) * n.ln()
                - 16.0 * p.ln()
                - 1.5 * (n.ln() / std::f64::consts::LN_2).ln();
            let indirect = log_val.exp();
            report.check((direct - indirect).abs() <= 1e-9 * direct, || {
                format!("intersect_cc_bound({n}, {p}) drifts from log-domain evaluation")
            });
        }
    }
    report
}

/// Combined bounds suite, as run by `verify bounds`.
pub fn bounds_suite() -> SuiteReport {
    let mut report = SuiteReport::new("bounds");
    report.merge(bounds_counting_suite());
    report.merge(bounds_formula_suite());
    report
}
