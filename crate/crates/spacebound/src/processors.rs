//! Reference streaming processors.
//!
//! Every processor here is deliberately store-and-solve: it accumulates
//! the streamed edges in a canonical (sorted, deduplicated) structure and
//! solves at `finish()` time by materializing the graph and calling the
//! corresponding ground-truth solver. Naive storage is the honest matching
//! upper bound for these problems, and it keeps the protocol simulations
//! about the reductions rather than about algorithmic cleverness.
//!
//! Snapshots are fixed-width, big-endian, and sorted, so two permutations
//! of the same edge multiset serialize identically and `state_bits()` is
//! computable in O(1).

use std::collections::BTreeSet;

use crate::oracles::{self, StaticGraph};
use crate::stream::{GraphStream, NodeId, Processor, Query, StreamMeta, Token, Transcript};
use crate::{Error, Result};

/// The reference processors, by problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    TreeDepth,
    StDistance,
    StMinCut,
    NegCycle,
    SccSame,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::TreeDepth,
        Algorithm::StDistance,
        Algorithm::StMinCut,
        Algorithm::NegCycle,
        Algorithm::SccSame,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::TreeDepth => "tree-depth",
            Algorithm::StDistance => "st-distance",
            Algorithm::StMinCut => "st-mincut",
            Algorithm::NegCycle => "neg-cycle",
            Algorithm::SccSame => "scc-same",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == name)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown algorithm `{name}`")))
    }

    pub fn processor(self) -> ReferenceProcessor {
        ReferenceProcessor::new(self)
    }

    pub fn boxed(self) -> Box<dyn Processor> {
        Box::new(self.processor())
    }
}

pub fn tree_depth_processor() -> ReferenceProcessor {
    Algorithm::TreeDepth.processor()
}

pub fn st_distance_processor() -> ReferenceProcessor {
    Algorithm::StDistance.processor()
}

pub fn weighted_st_mincut_processor() -> ReferenceProcessor {
    Algorithm::StMinCut.processor()
}

pub fn negcycle_processor() -> ReferenceProcessor {
    Algorithm::NegCycle.processor()
}

pub fn scc_same_processor() -> ReferenceProcessor {
    Algorithm::SccSame.processor()
}

mod flag {
    pub const DIRECTED: u8 = 1 << 0;
    pub const WEIGHTED: u8 = 1 << 1;
    pub const HAS_QUERY: u8 = 1 << 2;
    pub const QUERY_PAIR: u8 = 1 << 3;
    pub const HAS_ROOT: u8 = 1 << 4;
}

/// The accumulated stream state: header metadata, pass progress, and the
/// canonically stored edge set. Undirected edges are normalized to
/// `(min, max)`; identical tokens are absorbed, which is what makes extra
/// passes over the same tape observationally neutral.
#[derive(Debug, Clone, PartialEq, Eq)]
struct StoredGraphState {
    n: u32,
    passes: u32,
    directed: bool,
    weighted: bool,
    query: Option<Query>,
    root: Option<NodeId>,
    pass_marks: u32,
    edges: BTreeSet<(u32, u32, i64)>,
}

impl StoredGraphState {
    fn new(meta: &StreamMeta) -> Self {
        StoredGraphState {
            n: meta.n,
            passes: meta.passes,
            directed: meta.directed,
            weighted: meta.weighted,
            query: meta.query,
            root: meta.root,
            pass_marks: 0,
            edges: BTreeSet::new(),
        }
    }

    fn store_edge(&mut self, e: &crate::stream::Edge) {
        let (u, v) = if self.directed || e.u <= e.v {
            (e.u, e.v)
        } else {
            (e.v, e.u)
        };
        self.edges.insert((u, v, e.w.unwrap_or(1)));
    }

    fn encoded_len(&self) -> usize {
        let query_len = match self.query {
            None => 0,
            Some(Query::Node(_)) => 4,
            Some(Query::Pair(..)) => 8,
        };
        let root_len = if self.root.is_some() { 4 } else { 0 };
        let edge_len = if self.weighted { 16 } else { 8 };
        17 + query_len + root_len + self.edges.len() * edge_len
    }

    fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.encoded_len());
        out.extend(self.n.to_be_bytes());
        out.extend(self.passes.to_be_bytes());
        let mut flags = 0u8;
        if self.directed {
            flags |= flag::DIRECTED;
        }
        if self.weighted {
            flags |= flag::WEIGHTED;
        }
        match self.query {
            Some(Query::Node(_)) => flags |= flag::HAS_QUERY,
            Some(Query::Pair(..)) => flags |= flag::HAS_QUERY | flag::QUERY_PAIR,
            None => {}
        }
        if self.root.is_some() {
            flags |= flag::HAS_ROOT;
        }
        out.push(flags);
        match self.query {
            Some(Query::Node(u)) => out.extend(u.to_be_bytes()),
            Some(Query::Pair(u, t)) => {
                out.extend(u.to_be_bytes());
                out.extend(t.to_be_bytes());
            }
            None => {}
        }
        if let Some(r) = self.root {
            out.extend(r.to_be_bytes());
        }
        out.extend(self.pass_marks.to_be_bytes());
        out.extend((self.edges.len() as u32).to_be_bytes());
        for &(u, v, w) in &self.edges {
            out.extend(u.to_be_bytes());
            out.extend(v.to_be_bytes());
            if self.weighted {
                out.extend(w.to_be_bytes());
            }
        }
        debug_assert_eq!(out.len(), self.encoded_len());
        out
    }

    fn decode(bytes: &[u8]) -> Result<Self> {
        let mut cursor = Cursor { bytes, pos: 0 };
        let n = cursor.u32()?;
        let passes = cursor.u32()?;
        let flags = cursor.u8()?;
        let query = if flags & flag::HAS_QUERY != 0 {
            if flags & flag::QUERY_PAIR != 0 {
                Some(Query::Pair(cursor.u32()?, cursor.u32()?))
            } else {
                Some(Query::Node(cursor.u32()?))
            }
        } else {
            None
        };
        let root = if flags & flag::HAS_ROOT != 0 {
            Some(cursor.u32()?)
        } else {
            None
        };
        let pass_marks = cursor.u32()?;
        let count = cursor.u32()? as usize;
        let weighted = flags & flag::WEIGHTED != 0;
        let mut edges = BTreeSet::new();
        for _ in 0..count {
            let u = cursor.u32()?;
            let v = cursor.u32()?;
            let w = if weighted { cursor.i64()? } else { 1 };
            edges.insert((u, v, w));
        }
        if cursor.pos != bytes.len() {
            return Err(Error::Transcript("trailing bytes".into()));
        }
        Ok(StoredGraphState {
            n,
            passes,
            directed: flags & flag::DIRECTED != 0,
            weighted,
            query,
            root,
            pass_marks,
            edges,
        })
    }

    fn materialize(&self) -> StaticGraph {
        StaticGraph::new(
            self.n as usize,
            self.directed,
            self.edges
                .iter()
                .map(|&(u, v, w)| (u as usize, v as usize, w))
                .collect(),
        )
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn take(&mut self, len: usize) -> Result<&[u8]> {
        if self.pos + len > self.bytes.len() {
            return Err(Error::Transcript("truncated".into()));
        }
        let slice = &self.bytes[self.pos..self.pos + len];
        self.pos += len;
        Ok(slice)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_be_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn i64(&mut self) -> Result<i64> {
        Ok(i64::from_be_bytes(self.take(8)?.try_into().unwrap()))
    }
}

/// A store-and-solve processor for one of the reference [`Algorithm`]s.
#[derive(Debug, Clone)]
pub struct ReferenceProcessor {
    algo: Algorithm,
    state: Option<StoredGraphState>,
}

impl ReferenceProcessor {
    pub fn new(algo: Algorithm) -> Self {
        ReferenceProcessor { algo, state: None }
    }

    pub fn algorithm(&self) -> Algorithm {
        self.algo
    }

    fn state(&self) -> Result<&StoredGraphState> {
        self.state
            .as_ref()
            .ok_or_else(|| Error::Protocol("processor not initialized".into()))
    }

    fn state_mut(&mut self) -> Result<&mut StoredGraphState> {
        self.state
            .as_mut()
            .ok_or_else(|| Error::Protocol("processor not initialized".into()))
    }

    fn require_pair(&self) -> Result<(usize, usize)> {
        match self.state()?.query {
            Some(Query::Pair(s, t)) => Ok((s as usize, t as usize)),
            other => Err(Error::InvalidInput(format!(
                "{} needs a two-node query, got {other:?}",
                self.algo.name()
            ))),
        }
    }

    fn solve(&self) -> Result<i64> {
        let state = self.state()?;
        let graph = state.materialize();
        match self.algo {
            Algorithm::TreeDepth => {
                let root = state.root.ok_or_else(|| {
                    Error::InvalidInput("tree-depth needs a root announcement".into())
                })?;
                let u = match state.query {
                    Some(Query::Node(u)) => u,
                    other => {
                        return Err(Error::InvalidInput(format!(
                            "tree-depth needs a single-node query, got {other:?}"
                        )))
                    }
                };
                let depths = oracles::bfs_depths(&graph, root as usize)?;
                Ok(depths[u as usize] as i64)
            }
            Algorithm::StDistance => {
                let (s, t) = self.require_pair()?;
                Ok(bfs_distance(&graph, s, t))
            }
            Algorithm::StMinCut => {
                let (s, t) = self.require_pair()?;
                oracles::max_flow_min_cut(&graph, s, t)
            }
            Algorithm::NegCycle => Ok(i64::from(oracles::bellman_ford_negcycle(&graph))),
            Algorithm::SccSame => {
                let (s, t) = self.require_pair()?;
                Ok(i64::from(oracles::scc_same(&graph, s, t)))
            }
        }
    }
}

impl Processor for ReferenceProcessor {
    fn init(&mut self, meta: &StreamMeta) -> Result<()> {
        self.state = Some(StoredGraphState::new(meta));
        Ok(())
    }

    fn feed(&mut self, token: &Token) -> Result<()> {
        let min_cut = self.algo == Algorithm::StMinCut;
        let state = self.state_mut()?;
        match token {
            Token::Query(q) => match state.query {
                None => state.query = Some(*q),
                Some(existing) if existing == *q => {}
                Some(existing) => {
                    return Err(Error::Protocol(format!(
                        "conflicting queries {existing:?} and {q:?}"
                    )))
                }
            },
            Token::Edge(e) => {
                if e.u >= state.n || e.v >= state.n {
                    return Err(Error::InvalidInput(format!(
                        "edge ({}, {}) out of range for n={}",
                        e.u, e.v, state.n
                    )));
                }
                if min_cut {
                    if let Some(w) = e.w {
                        if w <= 0 {
                            return Err(Error::InvalidInput(format!(
                                "min-cut capacity must be positive, got {w}"
                            )));
                        }
                    }
                }
                state.store_edge(e);
            }
            Token::PassMark { pass } => {
                if *pass != state.pass_marks + 1 || *pass >= state.passes {
                    return Err(Error::Protocol(format!(
                        "pass mark {pass} out of order ({} seen, {} passes)",
                        state.pass_marks, state.passes
                    )));
                }
                state.pass_marks = *pass;
            }
        }
        Ok(())
    }

    fn snapshot(&self) -> Transcript {
        match &self.state {
            Some(state) => Transcript::from_bytes(state.encode()),
            None => Transcript::from_bytes(Vec::new()),
        }
    }

    fn restore(&mut self, transcript: &Transcript) -> Result<()> {
        if transcript.bytes().is_empty() {
            self.state = None;
            return Ok(());
        }
        self.state = Some(StoredGraphState::decode(transcript.bytes())?);
        Ok(())
    }

    fn finish(&mut self) -> Result<i64> {
        let state = self.state()?;
        if state.pass_marks + 1 != state.passes {
            return Err(Error::Protocol(format!(
                "finish after {} of {} passes",
                state.pass_marks + 1,
                state.passes
            )));
        }
        self.solve()
    }

    fn state_bits(&self) -> u64 {
        match &self.state {
            Some(state) => state.encoded_len() as u64 * 8,
            None => 0,
        }
    }
}

fn bfs_distance(g: &StaticGraph, s: usize, t: usize) -> i64 {
    let mut adj = vec![Vec::new(); g.n];
    for &(u, v, _) in &g.arcs {
        adj[u].push(v);
        if !g.directed {
            adj[v].push(u);
        }
    }
    let mut dist = vec![i64::MAX; g.n];
    dist[s] = 0;
    let mut queue = std::collections::VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        if u == t {
            return dist[t];
        }
        for &v in &adj[u] {
            if dist[v] == i64::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    -1
}

/// Materializes a stream into a [`StaticGraph`] through the same canonical
/// storage a reference processor uses (normalization and deduplication
/// included).
pub fn materialize_stream(stream: &GraphStream) -> Result<StaticGraph> {
    stream.validate()?;
    let mut state = StoredGraphState::new(&stream.meta());
    for e in stream.edge_tokens() {
        state.store_edge(e);
    }
    Ok(state.materialize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::{run_stream, Edge, GraphStream};

    fn tree_stream(n: u32, edges: &[(u32, u32)], root: u32, u: u32) -> GraphStream {
        GraphStream {
            n,
            directed: false,
            weighted: false,
            passes: 1,
            root: Some(root),
            tokens: std::iter::once(Token::Query(Query::Node(u)))
                .chain(edges.iter().map(|&(a, b)| Token::Edge(Edge::unweighted(a, b))))
                .collect(),
        }
    }

    #[test]
    fn k2_depth_is_one() {
        let s = tree_stream(2, &[(0, 1)], 0, 1);
        let out = run_stream(&mut tree_depth_processor(), &s).unwrap();
        assert_eq!(out.answer, 1);
        assert!(out.peak_state_bits > 0);
    }

    #[test]
    fn path_depth_query() {
        let s = tree_stream(3, &[(0, 1), (1, 2)], 0, 2);
        assert_eq!(run_stream(&mut tree_depth_processor(), &s).unwrap().answer, 2);
    }

    #[test]
    fn non_tree_input_errors_at_finish() {
        let mut s = tree_stream(3, &[(0, 1), (1, 2)], 0, 2);
        s.tokens.push(Token::Edge(Edge::unweighted(2, 0)));
        assert!(matches!(
            run_stream(&mut tree_depth_processor(), &s),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn st_distance_cases() {
        let path = GraphStream {
            n: 4,
            directed: false,
            weighted: false,
            passes: 1,
            root: None,
            tokens: vec![
                Token::Query(Query::Pair(0, 3)),
                Token::Edge(Edge::unweighted(0, 1)),
                Token::Edge(Edge::unweighted(1, 2)),
                Token::Edge(Edge::unweighted(2, 3)),
            ],
        };
        assert_eq!(run_stream(&mut st_distance_processor(), &path).unwrap().answer, 3);

        let mut same = path.clone();
        same.tokens[0] = Token::Query(Query::Pair(2, 2));
        assert_eq!(run_stream(&mut st_distance_processor(), &same).unwrap().answer, 0);

        let disconnected = GraphStream {
            n: 3,
            directed: false,
            weighted: false,
            passes: 1,
            root: None,
            tokens: vec![
                Token::Query(Query::Pair(0, 2)),
                Token::Edge(Edge::unweighted(0, 1)),
            ],
        };
        assert_eq!(
            run_stream(&mut st_distance_processor(), &disconnected).unwrap().answer,
            -1
        );
    }

    #[test]
    fn st_distance_matches_independent_bfs_on_random_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for round in 0..30 {
            let n: u32 = rng.random_range(2..=100);
            let mut tokens = vec![Token::Query(Query::Pair(0, n - 1))];
            let mut adj = vec![Vec::new(); n as usize];
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.random_bool(0.12) {
                        tokens.push(Token::Edge(Edge::unweighted(u, v)));
                        adj[u as usize].push(v as usize);
                        adj[v as usize].push(u as usize);
                    }
                }
            }
            let s = GraphStream {
                n,
                directed: false,
                weighted: false,
                passes: 1,
                root: None,
                tokens,
            };
            // Plain queue BFS, written out separately from the processor path.
            let mut dist = vec![-1i64; n as usize];
            dist[0] = 0;
            let mut queue = std::collections::VecDeque::from([0usize]);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if dist[v] < 0 {
                        dist[v] = dist[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            let got = run_stream(&mut st_distance_processor(), &s).unwrap().answer;
            assert_eq!(got, dist[n as usize - 1], "round {round}");
        }
    }

    #[test]
    fn min_cut_k2_and_triangle() {
        let k2 = GraphStream {
            n: 2,
            directed: false,
            weighted: true,
            passes: 1,
            root: None,
            tokens: vec![
                Token::Query(Query::Pair(0, 1)),
                Token::Edge(Edge::weighted(0, 1, 1)),
            ],
        };
        assert_eq!(run_stream(&mut weighted_st_mincut_processor(), &k2).unwrap().answer, 1);

        let tri = GraphStream {
            n: 3,
            directed: false,
            weighted: true,
            passes: 1,
            root: None,
            tokens: vec![
                Token::Query(Query::Pair(0, 2)),
                Token::Edge(Edge::weighted(0, 1, 1)),
                Token::Edge(Edge::weighted(1, 2, 1)),
                Token::Edge(Edge::weighted(0, 2, 1)),
            ],
        };
        assert_eq!(run_stream(&mut weighted_st_mincut_processor(), &tri).unwrap().answer, 2);
    }

    #[test]
    fn min_cut_rejects_nonpositive_weight() {
        let mut proc = weighted_st_mincut_processor();
        proc.init(&StreamMeta {
            n: 2,
            passes: 1,
            directed: false,
            weighted: true,
            query: Some(Query::Pair(0, 1)),
            root: None,
        })
        .unwrap();
        let err = proc.feed(&Token::Edge(Edge::weighted(0, 1, 0))).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn negcycle_detects_two_cycle() {
        let make = |w: i64| GraphStream {
            n: 2,
            directed: true,
            weighted: true,
            passes: 1,
            root: None,
            tokens: vec![
                Token::Edge(Edge::weighted(0, 1, 1)),
                Token::Edge(Edge::weighted(1, 0, w)),
            ],
        };
        assert_eq!(run_stream(&mut negcycle_processor(), &make(-2)).unwrap().answer, 1);
        assert_eq!(run_stream(&mut negcycle_processor(), &make(-1)).unwrap().answer, 0);
    }

    #[test]
    fn negcycle_positive_triangle_is_clean() {
        let tri = GraphStream {
            n: 3,
            directed: true,
            weighted: true,
            passes: 1,
            root: None,
            tokens: vec![
                Token::Edge(Edge::weighted(0, 1, 2)),
                Token::Edge(Edge::weighted(1, 2, 2)),
                Token::Edge(Edge::weighted(2, 0, 2)),
            ],
        };
        assert_eq!(run_stream(&mut negcycle_processor(), &tri).unwrap().answer, 0);
    }

    #[test]
    fn scc_same_cases() {
        let two_cycle = GraphStream {
            n: 2,
            directed: true,
            weighted: false,
            passes: 1,
            root: None,
            tokens: vec![
                Token::Query(Query::Pair(0, 1)),
                Token::Edge(Edge::unweighted(0, 1)),
                Token::Edge(Edge::unweighted(1, 0)),
            ],
        };
        assert_eq!(run_stream(&mut scc_same_processor(), &two_cycle).unwrap().answer, 1);

        let mut dag = two_cycle.clone();
        dag.tokens.pop();
        assert_eq!(run_stream(&mut scc_same_processor(), &dag).unwrap().answer, 0);

        let mut self_query = dag.clone();
        self_query.tokens[0] = Token::Query(Query::Pair(1, 1));
        assert_eq!(run_stream(&mut scc_same_processor(), &self_query).unwrap().answer, 1);
    }

    #[test]
    fn snapshot_is_canonical_under_stream_permutation() {
        use crate::stream::shuffle;
        use rand::SeedableRng;
        let base = crate::stream::random_tree_stream(40, 9);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let mut permuted = base.clone();
        // Reorder the edge tokens only (query token stays first).
        shuffle(&mut permuted.tokens[1..], &mut rng);
        assert_ne!(base.tokens, permuted.tokens);

        let run = |s: &GraphStream| {
            let mut proc = tree_depth_processor();
            let out = run_stream(&mut proc, s).unwrap();
            (out.answer, proc.snapshot())
        };
        let (a1, snap1) = run(&base);
        let (a2, snap2) = run(&permuted);
        assert_eq!(a1, a2);
        assert_eq!(snap1, snap2);
    }

    #[test]
    fn extra_passes_are_neutral() {
        for algo in Algorithm::ALL {
            let mut s = match algo {
                Algorithm::TreeDepth => crate::stream::random_tree_stream(25, 5),
                Algorithm::StDistance | Algorithm::StMinCut | Algorithm::SccSame => {
                    let mut g = crate::stream::random_connected_graph_stream(12, 0.3, 5);
                    g.tokens.insert(0, Token::Query(Query::Pair(0, 11)));
                    if algo == Algorithm::SccSame {
                        g.directed = true;
                    }
                    g
                }
                Algorithm::NegCycle => GraphStream {
                    n: 3,
                    directed: true,
                    weighted: true,
                    passes: 1,
                    root: None,
                    tokens: vec![
                        Token::Edge(Edge::weighted(0, 1, 1)),
                        Token::Edge(Edge::weighted(1, 2, 1)),
                        Token::Edge(Edge::weighted(2, 0, -3)),
                    ],
                },
            };
            let single = run_stream(&mut algo.processor(), &s).unwrap();
            s.passes = 2;
            let double = run_stream(&mut algo.processor(), &s).unwrap();
            assert_eq!(single.answer, double.answer, "{}", algo.name());
        }
    }

    #[test]
    fn state_bits_equals_snapshot_length_throughout() {
        let s = crate::stream::random_tree_stream(30, 2);
        let mut proc = tree_depth_processor();
        proc.init(&s.meta()).unwrap();
        assert_eq!(proc.state_bits(), proc.snapshot().bit_len());
        for tok in &s.tokens {
            proc.feed(tok).unwrap();
            assert_eq!(proc.state_bits(), proc.snapshot().bit_len());
        }
    }

    #[test]
    fn fork_consistency_mid_stream() {
        let s = crate::stream::random_tree_stream(50, 13);
        let full = run_stream(&mut tree_depth_processor(), &s).unwrap();
        for cut in [1usize, 10, 25, 49] {
            let mut first = tree_depth_processor();
            first.init(&s.meta()).unwrap();
            for tok in &s.tokens[..cut] {
                first.feed(tok).unwrap();
            }
            let snap = first.snapshot();
            let mut second = tree_depth_processor();
            second.restore(&snap).unwrap();
            for tok in &s.tokens[cut..] {
                second.feed(tok).unwrap();
            }
            assert_eq!(second.finish().unwrap(), full.answer, "cut at {cut}");
            assert_eq!(second.snapshot(), {
                let mut uninterrupted = tree_depth_processor();
                uninterrupted.init(&s.meta()).unwrap();
                for tok in &s.tokens {
                    uninterrupted.feed(tok).unwrap();
                }
                uninterrupted.snapshot()
            });
        }
    }

    #[test]
    fn finish_before_passes_consumed_is_protocol_violation() {
        let mut s = crate::stream::random_tree_stream(5, 1);
        s.passes = 2;
        let mut proc = tree_depth_processor();
        proc.init(&s.meta()).unwrap();
        for tok in &s.tokens {
            proc.feed(tok).unwrap();
        }
        assert!(matches!(proc.finish(), Err(Error::Protocol(_))));
    }

    #[test]
    fn depth_metering_stays_in_band_at_small_scale() {
        let n = 256u32;
        let s = crate::stream::random_tree_stream(n, 77);
        let out = run_stream(&mut tree_depth_processor(), &s).unwrap();
        let ratio = out.peak_state_bits as f64 / (f64::from(n) * f64::from(n).log2());
        assert!((0.5..=16.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn algorithm_names_round_trip() {
        for algo in Algorithm::ALL {
            assert_eq!(Algorithm::from_name(algo.name()).unwrap(), algo);
        }
        assert!(Algorithm::from_name("dijkstra").is_err());
    }
}
