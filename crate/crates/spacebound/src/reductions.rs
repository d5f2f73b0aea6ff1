//! Computation-graph constructions and protocol simulations.
//!
//! The builders turn chasing instances into deterministic node-labeled
//! graph streams whose answers (depth, cut, cycle, component) decode the
//! chasing answers. The simulators wrap a streaming processor into a
//! multi-player protocol: players feed their owned token spans in speaking
//! order and hand the memory transcript to the next player, so the summed
//! transcript bits are the protocol's communication cost. The forking
//! procedures snapshot one transcript and replay many alternative suffixes
//! to extract many answers from a single pass.

use std::collections::BTreeMap;
use std::ops::Range;

use crate::problems::{pair_of_index, IndexInstance, IntersectInstance, PcInstance};
use crate::stream::{Edge, GraphStream, NodeId, Processor, Query, StreamMeta, Token};
use crate::{Error, Result};

/// Distinguished nodes of a computation graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Terminals {
    pub root: Option<NodeId>,
    pub n1: Option<NodeId>,
    pub n1_prime: Option<NodeId>,
}

/// A deterministic gadget graph realizing a chasing instance.
///
/// Node labeling: layer `j` element `k` (1-based `k`) has id `j*m + (k-1)`;
/// gadget nodes (spine, root) occupy ids after all layer nodes. The spans
/// partition the edge tokens by owning player, in speaking order.
#[derive(Debug, Clone)]
pub struct ComputationGraph {
    pub stream: GraphStream,
    pub terminals: Terminals,
    /// Answer-to-element decode table (for pointer chasing: depth of `n1`
    /// maps to the chased element `k`). Empty when the answer is boolean.
    pub decode: Vec<(i64, usize)>,
    /// Token index ranges owned by players `1..=players`, in order.
    pub player_spans: Vec<Range<usize>>,
}

impl ComputationGraph {
    pub fn spans(&self) -> Vec<&[Token]> {
        self.player_spans
            .iter()
            .map(|r| &self.stream.tokens[r.clone()])
            .collect()
    }
}

/// Result record of a simulated protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProtocolRun {
    pub answer: i64,
    /// Inter-player transcript transfers, recorded exactly as executed.
    pub handoffs: u64,
    /// Sum of transcript bit lengths over all handoffs.
    pub comm_bits: u64,
    /// Rounds executed.
    pub passes: u32,
}

/// Drives the handoff schedule: players feed their spans in order each
/// round, passing the transcript into a fresh instance between speakers.
/// The last speaker of each non-final round also feeds the pass mark,
/// completing the tape replay. Returns `(answer, handoffs, comm_bits)`.
fn run_protocol<F>(
    meta: &StreamMeta,
    spans: &[&[Token]],
    passes: u32,
    factory: &F,
) -> Result<(i64, u64, u64)>
where
    F: Fn() -> Box<dyn Processor>,
{
    assert!(passes >= 1 && !spans.is_empty());
    let mut proc = factory();
    proc.init(meta)?;
    let mut handoffs = 0u64;
    let mut comm_bits = 0u64;
    for round in 1..=passes {
        for (idx, span) in spans.iter().enumerate() {
            if !(round == 1 && idx == 0) {
                let transcript = proc.snapshot();
                handoffs += 1;
                comm_bits += transcript.bit_len();
                proc = factory();
                proc.restore(&transcript)?;
            }
            for token in *span {
                proc.feed(token)?;
            }
            if idx == spans.len() - 1 && round < passes {
                proc.feed(&Token::PassMark { pass: round })?;
            }
        }
    }
    let answer = proc.finish()?;
    Ok((answer, handoffs, comm_bits))
}

fn layer_node(m: usize, layer: usize, element: usize) -> NodeId {
    (layer * m + (element - 1)) as NodeId
}

/// Builds the pointer-chasing computation tree.
///
/// Layers `0..=q` of `m` nodes each realize the function tables
/// innermost-first, so a walk from `n1` (layer 0, element 1) toward layer
/// `q` computes the composition. The blue gadget is a spine path
/// `root -> s_1 -> ... -> s_m` with rightmost-layer element `k` attached
/// to `s_k`, which places it at depth `k + 1` and makes every rightmost
/// node's depth distinct. Edge order is the protocol speaking order, with
/// the gadget owned by the last player.
pub fn build_pc_tree(inst: &PcInstance) -> ComputationGraph {
    let m = inst.m();
    let q = inst.q();
    let spine_base = (q + 1) * m;
    let root = ((q + 2) * m) as NodeId;
    let n_total = ((q + 2) * m + 1) as u32;
    let n1: NodeId = layer_node(m, 0, 1);

    let mut tokens = vec![Token::Query(Query::Node(n1))];
    let mut spans = Vec::with_capacity(q);
    for player in 1..=q {
        let start = tokens.len();
        let layer = q - player;
        let table = &inst.tables[player - 1];
        for a in 1..=m {
            let from = layer_node(m, layer, a);
            let to = layer_node(m, layer + 1, table.apply(a));
            tokens.push(Token::Edge(Edge::unweighted(from, to)));
        }
        if player == q {
            let spine = |k: usize| (spine_base + (k - 1)) as NodeId;
            tokens.push(Token::Edge(Edge::unweighted(root, spine(1))));
            for k in 2..=m {
                tokens.push(Token::Edge(Edge::unweighted(spine(k - 1), spine(k))));
            }
            for k in 1..=m {
                tokens.push(Token::Edge(Edge::unweighted(spine(k), layer_node(m, q, k))));
            }
        }
        spans.push(start..tokens.len());
    }

    ComputationGraph {
        stream: GraphStream {
            n: n_total,
            directed: false,
            weighted: false,
            passes: 1,
            root: Some(root),
            tokens,
        },
        terminals: Terminals {
            root: Some(root),
            n1: Some(n1),
            n1_prime: None,
        },
        decode: (1..=m).map(|k| ((q + 1 + k) as i64, k)).collect(),
        player_spans: spans,
    }
}

/// Recovers the chased element from the depth of `n1`: with the spine
/// gadget, element `k` sits at depth `k + 1` below the root and the walk
/// from `n1` adds `q` more hops, so `k = d(n1) - q - 1`.
pub fn decode_pc_depth(d_n1: i64, q: usize) -> Result<usize> {
    let k = d_n1 - q as i64 - 1;
    if k < 1 {
        return Err(Error::Decode(format!(
            "depth {d_n1} is below the decodable range for {q} players"
        )));
    }
    Ok(k as usize)
}

/// Simulates the depth-based pointer-chasing protocol: `q` players speak
/// in order for `passes` rounds, feeding their bipartite-graph edges into
/// the wrapped depth processor and handing the transcript onward; the last
/// player finishes and the depth of `n1` is decoded into the chased
/// element.
pub fn simulate_pc_protocol<F>(inst: &PcInstance, factory: F, passes: u32) -> Result<ProtocolRun>
where
    F: Fn() -> Box<dyn Processor>,
{
    if passes == 0 {
        return Err(Error::InvalidArgument("protocol needs at least one round".into()));
    }
    let graph = build_pc_tree(inst);
    let mut meta = graph.stream.meta();
    meta.passes = passes;
    let (d_n1, handoffs, comm_bits) = run_protocol(&meta, &graph.spans(), passes, &factory)?;
    let k = decode_pc_depth(d_n1, inst.q())?;
    if k > inst.m() {
        return Err(Error::ReductionFailure(format!(
            "decoded element {k} exceeds domain size {}",
            inst.m()
        )));
    }
    Ok(ProtocolRun {
        answer: k as i64,
        handoffs,
        comm_bits,
        passes,
    })
}

/// Alice's and Bob's token spans for the INDEX-to-negative-cycle
/// reduction.
///
/// Alice doubles every present pair `(a, b)` into arcs `a -> b` and
/// `b -> a` of weight +1; Bob inserts `a -> v` and `v -> b` of weight -1
/// for his queried pair, with `v` a single extra vertex. A cycle
/// `a -> v -> b -> a` of weight -1 then exists exactly when the queried
/// bit is set; otherwise any cycle through both -1 arcs needs at least two
/// +1 arcs to return from `b` to `a` and weighs >= 0.
#[derive(Debug, Clone)]
pub struct IndexStreams {
    pub alice: Vec<Token>,
    pub bob: Vec<Token>,
    pub n_total: u32,
}

pub fn build_index_negcycle(inst: &IndexInstance) -> Result<IndexStreams> {
    let n = inst.graph_nodes()?;
    let v = n as NodeId;
    let mut alice = Vec::new();
    for (k, &bit) in inst.bits.iter().enumerate() {
        if bit {
            let (a, b) = pair_of_index(n, k);
            alice.push(Token::Edge(Edge::weighted(a as NodeId, b as NodeId, 1)));
            alice.push(Token::Edge(Edge::weighted(b as NodeId, a as NodeId, 1)));
        }
    }
    let (a, b) = pair_of_index(n, inst.index);
    let bob = vec![
        Token::Edge(Edge::weighted(a as NodeId, v, -1)),
        Token::Edge(Edge::weighted(v, b as NodeId, -1)),
    ];
    Ok(IndexStreams {
        alice,
        bob,
        n_total: n as u32 + 1,
    })
}

/// One-way INDEX protocol: Alice feeds her span into the wrapped
/// negative-cycle processor, sends the transcript (the single handoff),
/// Bob resumes and finishes. The answer recovers `A_i` as
/// "negative cycle present".
pub fn simulate_index_protocol<F>(inst: &IndexInstance, factory: F) -> Result<ProtocolRun>
where
    F: Fn() -> Box<dyn Processor>,
{
    let streams = build_index_negcycle(inst)?;
    let meta = StreamMeta {
        n: streams.n_total,
        passes: 1,
        directed: true,
        weighted: true,
        query: None,
        root: None,
    };
    let spans: [&[Token]; 2] = [&streams.alice, &streams.bob];
    let (answer, handoffs, comm_bits) = run_protocol(&meta, &spans, 1, &factory)?;
    Ok(ProtocolRun {
        answer,
        handoffs,
        comm_bits,
        passes: 1,
    })
}

/// Graph realization chosen for a set-chasing intersection instance.
///
/// All three variants are directed: orientation is what makes a path from
/// `n1` to `n1'` represent exactly one element of the output intersection.
/// An undirected realization would also connect the terminals through
/// down-and-up excursions into set-valued preimages, breaking the
/// zero-test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntersectVariant {
    /// Unweighted; intersection iff min `n1`-`n1'` cut > 0.
    Cut,
    /// Directed, all function edges weight +1, blue edge `n1' -> n1` of
    /// weight `-(2q+1)`; intersection iff a negative cycle exists.
    NegCycle,
    /// Directed, unweighted, blue edge `n1' -> n1`; intersection iff `n1`
    /// and `n1'` share a strongly connected component.
    Scc,
}

impl IntersectVariant {
    pub const ALL: [IntersectVariant; 3] = [
        IntersectVariant::Cut,
        IntersectVariant::NegCycle,
        IntersectVariant::Scc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IntersectVariant::Cut => "cut",
            IntersectVariant::NegCycle => "negcycle",
            IntersectVariant::Scc => "scc",
        }
    }
}

/// Builds the shared-layer intersection gadget.
///
/// Side A walks from `n1` through layers `0..q` into the shared layer
/// `q`, realizing its set tables innermost-first; side B mirrors the same
/// shape from `n1'`, adjacent to the same shared layer. A shared element
/// reachable from both terminals is exactly an element of the output
/// intersection, so every `n1`-to-`n1'` path has `2q` edges. Side A points
/// toward the shared layer and side B away from it; in the cycle and
/// component variants the last player appends the blue edge each round.
pub fn build_intersect_graph(
    inst: &IntersectInstance,
    variant: IntersectVariant,
) -> ComputationGraph {
    let m = inst.m();
    let q = inst.q();
    let n_total = ((2 * q + 1) * m) as u32;
    let n1: NodeId = 0;
    let n1_prime = ((q + 1) * m) as NodeId;
    // Side positions indexed by distance-to-terminal; position q is the
    // shared layer for both sides.
    let node_a = |j: usize, k: usize| layer_node(m, j, k);
    let node_b = |j: usize, k: usize| {
        if j == q {
            layer_node(m, q, k)
        } else {
            layer_node(m, q + 1 + j, k)
        }
    };
    let weighted = variant == IntersectVariant::NegCycle;
    let edge_w = if weighted { Some(1) } else { None };

    let mut tokens = Vec::new();
    if variant != IntersectVariant::NegCycle {
        tokens.push(Token::Query(Query::Pair(n1, n1_prime)));
    }
    let mut spans = Vec::with_capacity(2 * q);
    for player in 1..=q {
        let start = tokens.len();
        let j = q - player;
        let table = &inst.side_a[player - 1];
        for a in 1..=m {
            for &b in table.apply(a) {
                tokens.push(Token::Edge(Edge {
                    u: node_a(j, a),
                    v: node_a(j + 1, b),
                    w: edge_w,
                }));
            }
        }
        spans.push(start..tokens.len());
    }
    for player in 1..=q {
        let start = tokens.len();
        let j = q - player;
        let table = &inst.side_b[player - 1];
        for a in 1..=m {
            for &b in table.apply(a) {
                tokens.push(Token::Edge(Edge {
                    u: node_b(j + 1, b),
                    v: node_b(j, a),
                    w: edge_w,
                }));
            }
        }
        if player == q && variant != IntersectVariant::Cut {
            let w = if weighted {
                Some(-(2 * q as i64 + 1))
            } else {
                None
            };
            tokens.push(Token::Edge(Edge {
                u: n1_prime,
                v: n1,
                w,
            }));
        }
        spans.push(start..tokens.len());
    }

    ComputationGraph {
        stream: GraphStream {
            n: n_total,
            directed: true,
            weighted,
            passes: 1,
            root: None,
            tokens,
        },
        terminals: Terminals {
            root: None,
            n1: Some(n1),
            n1_prime: Some(n1_prime),
        },
        decode: Vec::new(),
        player_spans: spans,
    }
}

/// Simulates the intersection protocol: `2q` players speak in order for
/// `passes` rounds, the wrapped processor answers the variant's graph
/// question, and the answer is reduced to the boolean "outputs intersect".
pub fn simulate_intersect_protocol<F>(
    inst: &IntersectInstance,
    factory: F,
    variant: IntersectVariant,
    passes: u32,
) -> Result<ProtocolRun>
where
    F: Fn() -> Box<dyn Processor>,
{
    if passes == 0 {
        return Err(Error::InvalidArgument("protocol needs at least one round".into()));
    }
    let graph = build_intersect_graph(inst, variant);
    let mut meta = graph.stream.meta();
    meta.passes = passes;
    let (raw, handoffs, comm_bits) = run_protocol(&meta, &graph.spans(), passes, &factory)?;
    let answer = match variant {
        IntersectVariant::Cut => i64::from(raw > 0),
        IntersectVariant::NegCycle | IntersectVariant::Scc => {
            if raw != 0 && raw != 1 {
                return Err(Error::ReductionFailure(format!(
                    "expected boolean answer, got {raw}"
                )));
            }
            raw
        }
    };
    Ok(ProtocolRun {
        answer,
        handoffs,
        comm_bits,
        passes,
    })
}

/// Extracts the depths of every node except `v` from a single snapshot.
///
/// The stream must be a rooted tree with `v`'s edge withheld and `v`
/// announced as the query node. After one pass over the given tokens, the
/// transcript is snapshotted once; each fork restores it into a fresh
/// instance, attaches `v` under a candidate node `u`, and finishes. The
/// answer is `v`'s depth, which is one more than `u`'s, so `n - 1` depths
/// come out of one stored transcript plus a single live instance at a
/// time.
pub fn fork_replay_depth_extraction<F>(
    stream: &GraphStream,
    v: NodeId,
    factory: F,
) -> Result<BTreeMap<NodeId, u32>>
where
    F: Fn() -> Box<dyn Processor>,
{
    stream.validate()?;
    if stream.passes != 1 {
        return Err(Error::Extraction("fork replay needs a single-pass stream".into()));
    }
    if v >= stream.n {
        return Err(Error::Extraction(format!("node {v} out of range")));
    }
    if stream.query() != Some(Query::Node(v)) {
        return Err(Error::Extraction(format!(
            "stream must query the withheld node {v}"
        )));
    }
    if stream.root.is_none() {
        return Err(Error::Extraction("stream announces no root".into()));
    }
    if stream.edge_tokens().any(|e| e.u == v || e.v == v) {
        return Err(Error::Extraction(format!(
            "edge touching {v} must be withheld from the stream"
        )));
    }

    let mut proc = factory();
    proc.init(&stream.meta())?;
    for token in &stream.tokens {
        proc.feed(token)?;
    }
    let transcript = proc.snapshot();
    drop(proc);

    let mut depths = BTreeMap::new();
    for u in 0..stream.n {
        if u == v {
            continue;
        }
        let mut fork = factory();
        fork.restore(&transcript)?;
        fork.feed(&Token::Edge(Edge::unweighted(v, u)))
            .map_err(|e| Error::Extraction(format!("fork at node {u}: {e}")))?;
        let depth_v = fork
            .finish()
            .map_err(|e| Error::Extraction(format!("fork at node {u}: {e}")))?;
        if depth_v < 1 {
            return Err(Error::Extraction(format!(
                "fork at node {u} reported depth {depth_v} for the attached leaf"
            )));
        }
        depths.insert(u, depth_v as u32 - 1);
    }
    Ok(depths)
}

/// Outcome of the min-cut forking procedure: the global min cut plus every
/// forked s-t cut value that fed the minimum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinCutFork {
    pub value: i64,
    pub per_target: Vec<(NodeId, i64)>,
}

/// Computes the global min cut of an unweighted graph through a weighted
/// min s-t cut processor and one transcript.
///
/// The augmented graph adds terminals `u_aux, v_aux`; the anchor edge
/// `(u_aux, x)` and each fork's `(v_aux, y)` carry weight `n`, heavy
/// enough that neither is ever cut, so the min `u_aux`-`v_aux` cut equals
/// the min `x`-`y` cut of the original graph. One snapshot after the
/// anchor edge serves all `n - 1` forks; the minimum over targets is the
/// global min cut. Disconnected inputs yield 0 through some zero-valued
/// fork.
pub fn global_mincut_via_st_forking<F>(
    g: &GraphStream,
    x: NodeId,
    factory: F,
) -> Result<MinCutFork>
where
    F: Fn() -> Box<dyn Processor>,
{
    g.validate()?;
    if g.directed || g.weighted {
        return Err(Error::InvalidArgument(
            "cut forking takes an undirected unweighted stream".into(),
        ));
    }
    if g.passes != 1 {
        return Err(Error::InvalidArgument("cut forking is single-pass".into()));
    }
    if g.n < 2 {
        return Err(Error::InvalidArgument("need at least two nodes".into()));
    }
    if x >= g.n {
        return Err(Error::InvalidArgument(format!("node {x} out of range")));
    }
    let u_aux = g.n;
    let v_aux = g.n + 1;
    let heavy = i64::from(g.n);
    let meta = StreamMeta {
        n: g.n + 2,
        passes: 1,
        directed: false,
        weighted: true,
        query: Some(Query::Pair(u_aux, v_aux)),
        root: None,
    };

    let mut proc = factory();
    proc.init(&meta)?;
    for e in g.edge_tokens() {
        proc.feed(&Token::Edge(Edge::weighted(e.u, e.v, 1)))?;
    }
    proc.feed(&Token::Edge(Edge::weighted(u_aux, x, heavy)))?;
    let transcript = proc.snapshot();
    drop(proc);

    let mut per_target = Vec::with_capacity(g.n as usize - 1);
    for y in 0..g.n {
        if y == x {
            continue;
        }
        let mut fork = factory();
        fork.restore(&transcript)?;
        fork.feed(&Token::Edge(Edge::weighted(v_aux, y, heavy)))?;
        per_target.push((y, fork.finish()?));
    }
    let value = per_target.iter().map(|&(_, c)| c).min().expect("n >= 2");
    Ok(MinCutFork { value, per_target })
}

/// Reusable factory for boxed reference processors.
pub fn processor_factory(
    algo: crate::processors::Algorithm,
) -> impl Fn() -> Box<dyn Processor> {
    move || algo.boxed()
}

/// The reference algorithm matching each intersect variant.
pub fn variant_algorithm(variant: IntersectVariant) -> crate::processors::Algorithm {
    match variant {
        IntersectVariant::Cut => crate::processors::Algorithm::StMinCut,
        IntersectVariant::NegCycle => crate::processors::Algorithm::NegCycle,
        IntersectVariant::Scc => crate::processors::Algorithm::SccSame,
    }
}

/// A transcript-sized view useful in tests: feeds a span into a fresh
/// processor and reports the snapshot bits it would hand off.
pub fn span_snapshot_bits(
    meta: &StreamMeta,
    span: &[Token],
    factory: &dyn Fn() -> Box<dyn Processor>,
) -> Result<u64> {
    let mut proc = factory();
    proc.init(meta)?;
    for token in span {
        proc.feed(token)?;
    }
    Ok(proc.snapshot().bit_len())
}
