//! The streaming computation model: tokens, streams, passes, the
//! processor contract with snapshot/restore, and bit-exact transcript
//! accounting.
//!
//! Space is measured as the serialized snapshot length in bits. That is
//! exactly the quantity handed from player to player in the protocol
//! simulations, so the space meter and the communication cost share a unit.

use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Dense node identifier in `[0, n)`.
pub type NodeId = u32;

/// The query announced at the head of a stream: a single node (rooted
/// depth problems) or an ordered pair (s-t problems).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Query {
    Node(NodeId),
    Pair(NodeId, NodeId),
}

/// A weighted or unweighted edge token. `w` is `None` on unweighted
/// streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub w: Option<i64>,
}

impl Edge {
    pub fn unweighted(u: NodeId, v: NodeId) -> Self {
        Edge { u, v, w: None }
    }

    pub fn weighted(u: NodeId, v: NodeId, w: i64) -> Self {
        Edge { u, v, w: Some(w) }
    }
}

/// One element of the input tape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Token {
    /// Query announcement; at most one per stream, before all edges.
    Query(Query),
    /// An edge of the streamed graph.
    Edge(Edge),
    /// Separator between passes of a multi-pass tape, carrying the
    /// 1-based ordinal of the pass that just completed. Never stored in a
    /// `GraphStream`; it is produced by the tape replay in [`run_stream`]
    /// and by protocol schedulers.
    PassMark { pass: u32 },
}

/// An ordered graph stream: header metadata plus the token tape.
///
/// Replaying `tokens` `passes` times with `PassMark` separators is the
/// canonical multi-pass tape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphStream {
    pub n: u32,
    pub directed: bool,
    pub weighted: bool,
    pub passes: u32,
    /// Distinguished root for rooted-depth streams, announced in the
    /// header rather than encoded by any node-id convention.
    pub root: Option<NodeId>,
    pub tokens: Vec<Token>,
}

impl GraphStream {
    /// The query token's content, if any.
    pub fn query(&self) -> Option<Query> {
        self.tokens.iter().find_map(|t| match t {
            Token::Query(q) => Some(*q),
            _ => None,
        })
    }

    /// Header metadata handed to a processor at init time.
    pub fn meta(&self) -> StreamMeta {
        StreamMeta {
            n: self.n,
            passes: self.passes,
            directed: self.directed,
            weighted: self.weighted,
            query: self.query(),
            root: self.root,
        }
    }

    pub fn edge_tokens(&self) -> impl Iterator<Item = &Edge> {
        self.tokens.iter().filter_map(|t| match t {
            Token::Edge(e) => Some(e),
            _ => None,
        })
    }

    /// Checks the structural invariants: ids in range, at most one query
    /// and it precedes all edges, weight presence matching the `weighted`
    /// flag, no pass marks on the stored tape.
    pub fn validate(&self) -> Result<()> {
        if self.passes == 0 {
            return Err(Error::InvalidStream("passes must be >= 1".into()));
        }
        let check_id = |id: NodeId, what: &str| -> Result<()> {
            if id >= self.n {
                return Err(Error::InvalidStream(format!(
                    "{what} id {id} out of range for n={}",
                    self.n
                )));
            }
            Ok(())
        };
        if let Some(r) = self.root {
            check_id(r, "root")?;
        }
        let mut queries = 0usize;
        let mut edges_seen = false;
        for tok in &self.tokens {
            match tok {
                Token::Query(q) => {
                    queries += 1;
                    if queries > 1 {
                        return Err(Error::InvalidStream("more than one query token".into()));
                    }
                    if edges_seen {
                        return Err(Error::InvalidStream(
                            "query token must precede all edge tokens".into(),
                        ));
                    }
                    match q {
                        Query::Node(u) => check_id(*u, "query")?,
                        Query::Pair(u, t) => {
                            check_id(*u, "query")?;
                            check_id(*t, "query")?;
                        }
                    }
                }
                Token::Edge(e) => {
                    edges_seen = true;
                    check_id(e.u, "edge endpoint")?;
                    check_id(e.v, "edge endpoint")?;
                    if !self.weighted && e.w.is_some() {
                        return Err(Error::InvalidStream(
                            "weighted edge token on unweighted stream".into(),
                        ));
                    }
                }
                Token::PassMark { .. } => {
                    return Err(Error::InvalidStream(
                        "pass marks are generated by replay, not stored".into(),
                    ));
                }
            }
        }
        if self.root.is_some() && queries == 0 {
            return Err(Error::InvalidStream(
                "rooted stream announces no query node".into(),
            ));
        }
        Ok(())
    }
}

/// Stream header metadata: everything a processor learns at init time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamMeta {
    pub n: u32,
    pub passes: u32,
    pub directed: bool,
    pub weighted: bool,
    pub query: Option<Query>,
    pub root: Option<NodeId>,
}

/// Opaque serialized processor memory. Its bit length is both the space
/// metric and the unit of communication cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    bytes: Vec<u8>,
}

impl Transcript {
    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        Transcript { bytes }
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn bit_len(&self) -> u64 {
        self.bytes.len() as u64 * 8
    }
}

/// The streaming-processor contract.
///
/// Determinism contract: `restore(snapshot(S))` followed by an identical
/// token suffix produces an identical final answer and identical
/// subsequent snapshots. A processor that uses randomness must embed its
/// seed in the snapshot so the contract holds.
pub trait Processor {
    /// Prepare a fresh instance for a stream with the given header.
    fn init(&mut self, meta: &StreamMeta) -> Result<()>;
    /// Consume one token of the tape.
    fn feed(&mut self, token: &Token) -> Result<()>;
    /// Serialize the full internal state.
    fn snapshot(&self) -> Transcript;
    /// Reconstitute state from a transcript. Works on a fresh instance
    /// without a prior `init`.
    fn restore(&mut self, transcript: &Transcript) -> Result<()>;
    /// Produce the answer. Only valid once all passes are consumed.
    fn finish(&mut self) -> Result<i64>;
    /// Current state size in bits; equals `snapshot().bit_len()` at the
    /// same point.
    fn state_bits(&self) -> u64;
}

/// Outcome of driving a processor over a full multi-pass tape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOutcome {
    pub answer: i64,
    pub peak_state_bits: u64,
}

/// Feeds the whole tape into `proc`, replaying the token list
/// `stream.passes` times with pass marks between passes, and returns the
/// answer together with the maximum `state_bits()` observed after any
/// token.
pub fn run_stream(proc: &mut dyn Processor, stream: &GraphStream) -> Result<RunOutcome> {
    stream.validate()?;
    proc.init(&stream.meta())?;
    let mut peak = proc.state_bits();
    for pass in 1..=stream.passes {
        for tok in &stream.tokens {
            proc.feed(tok)?;
            peak = peak.max(proc.state_bits());
        }
        if pass < stream.passes {
            proc.feed(&Token::PassMark { pass })?;
            peak = peak.max(proc.state_bits());
        }
    }
    let answer = proc.finish()?;
    Ok(RunOutcome {
        answer,
        peak_state_bits: peak,
    })
}

/// Writes the line-oriented text format. Returns the byte count emitted.
///
/// Format, one token per line:
///
/// ```text
/// n <int>
/// passes <int>
/// flags <directed|undirected> <weighted|unweighted>
/// Q <u> [<t>]         (optional)
/// root <r>            (optional)
/// E <u> <v> [<w>]     (stream order)
/// ```
///
/// Comments start with `#`.
pub fn write_stream(stream: &GraphStream, sink: &mut dyn Write) -> Result<u64> {
    stream.validate()?;
    let mut buf = String::new();
    buf.push_str(&format!("n {}\n", stream.n));
    buf.push_str(&format!("passes {}\n", stream.passes));
    buf.push_str(&format!(
        "flags {} {}\n",
        if stream.directed { "directed" } else { "undirected" },
        if stream.weighted { "weighted" } else { "unweighted" },
    ));
    if let Some(q) = stream.query() {
        match q {
            Query::Node(u) => buf.push_str(&format!("Q {u}\n")),
            Query::Pair(u, t) => buf.push_str(&format!("Q {u} {t}\n")),
        }
    }
    if let Some(r) = stream.root {
        buf.push_str(&format!("root {r}\n"));
    }
    for e in stream.edge_tokens() {
        match e.w {
            Some(w) => buf.push_str(&format!("E {} {} {}\n", e.u, e.v, w)),
            None => buf.push_str(&format!("E {} {}\n", e.u, e.v)),
        }
    }
    sink.write_all(buf.as_bytes())?;
    Ok(buf.len() as u64)
}

/// Parses the text format back into a stream; inverse of [`write_stream`].
pub fn read_stream(source: &mut dyn BufRead) -> Result<GraphStream> {
    let mut n: Option<u32> = None;
    let mut passes: Option<u32> = None;
    let mut flags: Option<(bool, bool)> = None;
    let mut query: Option<Query> = None;
    let mut root: Option<NodeId> = None;
    let mut edges: Vec<Edge> = Vec::new();

    let parse_u32 = |line: usize, what: &str, s: &str| -> Result<u32> {
        s.parse::<u32>().map_err(|_| Error::Parse {
            line,
            msg: format!("expected a nonnegative integer {what}, got `{s}`"),
        })
    };
    let parse_i64 = |line: usize, what: &str, s: &str| -> Result<i64> {
        s.parse::<i64>().map_err(|_| Error::Parse {
            line,
            msg: format!("expected an integer {what}, got `{s}`"),
        })
    };

    for (idx, line) in source.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let body = match line.find('#') {
            Some(pos) => &line[..pos],
            None => &line[..],
        };
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: lineno, msg };
        match fields[0] {
            "n" => {
                if fields.len() != 2 {
                    return Err(err("`n` takes one value".into()));
                }
                n = Some(parse_u32(lineno, "node count", fields[1])?);
            }
            "passes" => {
                if fields.len() != 2 {
                    return Err(err("`passes` takes one value".into()));
                }
                passes = Some(parse_u32(lineno, "pass count", fields[1])?);
            }
            "flags" => {
                if fields.len() != 3 {
                    return Err(err("`flags` takes two values".into()));
                }
                let directed = match fields[1] {
                    "directed" => true,
                    "undirected" => false,
                    other => return Err(err(format!("unknown direction flag `{other}`"))),
                };
                let weighted = match fields[2] {
                    "weighted" => true,
                    "unweighted" => false,
                    other => return Err(err(format!("unknown weight flag `{other}`"))),
                };
                flags = Some((directed, weighted));
            }
            "Q" => {
                if !edges.is_empty() {
                    return Err(err("query line after edge lines".into()));
                }
                query = Some(match fields.len() {
                    2 => Query::Node(parse_u32(lineno, "query node", fields[1])?),
                    3 => Query::Pair(
                        parse_u32(lineno, "query node", fields[1])?,
                        parse_u32(lineno, "query node", fields[2])?,
                    ),
                    _ => return Err(err("`Q` takes one or two node ids".into())),
                });
            }
            "root" => {
                if fields.len() != 2 {
                    return Err(err("`root` takes one value".into()));
                }
                root = Some(parse_u32(lineno, "root", fields[1])?);
            }
            "E" => {
                let e = match fields.len() {
                    3 => Edge::unweighted(
                        parse_u32(lineno, "endpoint", fields[1])?,
                        parse_u32(lineno, "endpoint", fields[2])?,
                    ),
                    4 => Edge::weighted(
                        parse_u32(lineno, "endpoint", fields[1])?,
                        parse_u32(lineno, "endpoint", fields[2])?,
                        parse_i64(lineno, "weight", fields[3])?,
                    ),
                    _ => return Err(err("`E` takes two node ids and an optional weight".into())),
                };
                edges.push(e);
            }
            other => return Err(err(format!("unknown directive `{other}`"))),
        }
    }

    let n = n.ok_or(Error::Parse {
        line: 0,
        msg: "missing `n` header".into(),
    })?;
    let passes = passes.ok_or(Error::Parse {
        line: 0,
        msg: "missing `passes` header".into(),
    })?;
    let (directed, weighted) = flags.ok_or(Error::Parse {
        line: 0,
        msg: "missing `flags` header".into(),
    })?;

    let mut tokens = Vec::with_capacity(edges.len() + 1);
    if let Some(q) = query {
        tokens.push(Token::Query(q));
    }
    tokens.extend(edges.into_iter().map(Token::Edge));
    let stream = GraphStream {
        n,
        directed,
        weighted,
        passes,
        root,
        tokens,
    };
    stream.validate()?;
    Ok(stream)
}

/// Random rooted tree stream: node 0 is the root, each later node picks an
/// earlier parent, edge order shuffled. The query node is drawn from the
/// non-root nodes.
pub fn random_tree_stream(n: u32, seed: u64) -> GraphStream {
    assert!(n >= 2, "a rooted tree stream needs at least two nodes");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<Edge> = (1..n)
        .map(|v| {
            let parent = rng.random_range(0..v);
            Edge::unweighted(parent, v)
        })
        .collect();
    shuffle(&mut edges, &mut rng);
    let query = rng.random_range(1..n);
    let mut tokens = vec![Token::Query(Query::Node(query))];
    tokens.extend(edges.into_iter().map(Token::Edge));
    GraphStream {
        n,
        directed: false,
        weighted: false,
        passes: 1,
        root: Some(0),
        tokens,
    }
}

/// Random connected undirected unweighted graph: a random spanning tree
/// plus extra edges, each non-tree pair kept with probability `density`.
pub fn random_connected_graph_stream(n: u32, density: f64, seed: u64) -> GraphStream {
    assert!(n >= 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut present = std::collections::BTreeSet::new();
    let mut edges: Vec<Edge> = Vec::new();
    for v in 1..n {
        let parent = rng.random_range(0..v);
        present.insert((parent.min(v), parent.max(v)));
    }
    for u in 0..n {
        for v in (u + 1)..n {
            if !present.contains(&(u, v)) && rng.random_bool(density.clamp(0.0, 1.0)) {
                present.insert((u, v));
            }
        }
    }
    edges.extend(present.iter().map(|&(u, v)| Edge::unweighted(u, v)));
    shuffle(&mut edges, &mut rng);
    GraphStream {
        n,
        directed: false,
        weighted: false,
        passes: 1,
        root: None,
        tokens: edges.into_iter().map(Token::Edge).collect(),
    }
}

/// Fisher-Yates; kept local so stream files are reproducible from the seed
/// alone, independent of `rand`'s shuffle implementation details.
pub(crate) fn shuffle<T>(items: &mut [T], rng: &mut ChaCha8Rng) {
    for i in (1..items.len()).rev() {
        let j = rng.random_range(0..=i);
        items.swap(i, j);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k2_stream() -> GraphStream {
        GraphStream {
            n: 2,
            directed: false,
            weighted: false,
            passes: 1,
            root: None,
            tokens: vec![
                Token::Query(Query::Pair(0, 1)),
                Token::Edge(Edge::unweighted(0, 1)),
            ],
        }
    }

    fn round_trip(s: &GraphStream) -> GraphStream {
        let mut buf = Vec::new();
        write_stream(s, &mut buf).unwrap();
        read_stream(&mut buf.as_slice()).unwrap()
    }

    #[test]
    fn write_empty_graph_emits_header_only() {
        let s = GraphStream {
            n: 1,
            directed: false,
            weighted: false,
            passes: 1,
            root: None,
            tokens: vec![],
        };
        let mut buf = Vec::new();
        write_stream(&s, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "n 1\npasses 1\nflags undirected unweighted\n");
        assert!(!text.contains("E "));
    }

    #[test]
    fn write_k2_lines() {
        let mut buf = Vec::new();
        write_stream(&k2_stream(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("Q 0 1\n"));
        assert!(text.contains("E 0 1\n"));
    }

    #[test]
    fn weighted_triangle_round_trips() {
        let s = GraphStream {
            n: 3,
            directed: false,
            weighted: true,
            passes: 2,
            root: None,
            tokens: vec![
                Token::Edge(Edge::weighted(0, 1, -1)),
                Token::Edge(Edge::weighted(1, 2, -1)),
                Token::Edge(Edge::weighted(2, 0, -1)),
            ],
        };
        let mut buf = Vec::new();
        write_stream(&s, &mut buf).unwrap();
        assert!(String::from_utf8_lossy(&buf).contains("E 2 0 -1"));
        assert_eq!(round_trip(&s), s);
    }

    #[test]
    fn out_of_range_endpoint_rejected() {
        let text = "n 3\npasses 1\nflags undirected unweighted\nE 5 0\n";
        let err = read_stream(&mut text.as_bytes()).unwrap_err();
        assert!(matches!(err, Error::InvalidStream(_)), "{err}");
    }

    #[test]
    fn weight_on_unweighted_stream_rejected() {
        let text = "n 3\npasses 1\nflags undirected unweighted\nE 0 1 5\n";
        let err = read_stream(&mut text.as_bytes()).unwrap_err();
        assert!(matches!(err, Error::InvalidStream(_)), "{err}");
    }

    #[test]
    fn rooted_stream_without_query_rejected() {
        let text = "n 3\npasses 1\nflags undirected unweighted\nroot 0\nE 0 1\nE 1 2\n";
        let err = read_stream(&mut text.as_bytes()).unwrap_err();
        assert!(matches!(err, Error::InvalidStream(_)), "{err}");
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let text = "n 3\npasses 1\nflags undirected unweighted\nE zero 1\n";
        match read_stream(&mut text.as_bytes()).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 4),
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn negative_node_ids_are_parse_errors() {
        let text = "n 3\npasses 1\nflags undirected unweighted\nE -1 0\n";
        assert!(matches!(
            read_stream(&mut text.as_bytes()),
            Err(Error::Parse { line: 4, .. })
        ));
        let negative_weight = "n 3\npasses 1\nflags directed weighted\nE 1 0 -7\n";
        assert!(read_stream(&mut negative_weight.as_bytes()).is_ok());
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let text = "# a stream\nn 2\n\npasses 1\nflags undirected unweighted # trailing\nE 0 1\n";
        let s = read_stream(&mut text.as_bytes()).unwrap();
        assert_eq!(s.n, 2);
        assert_eq!(s.edge_tokens().count(), 1);
    }

    #[test]
    fn query_after_edges_rejected() {
        let text = "n 2\npasses 1\nflags undirected unweighted\nE 0 1\nQ 0\n";
        assert!(read_stream(&mut text.as_bytes()).is_err());
    }

    #[test]
    fn random_tree_stream_is_deterministic_and_valid() {
        let a = random_tree_stream(40, 7);
        let b = random_tree_stream(40, 7);
        assert_eq!(a, b);
        a.validate().unwrap();
        assert_eq!(a.edge_tokens().count(), 39);
        assert_ne!(a, random_tree_stream(40, 8));
    }

    // Minimal processor that just counts edge observations; used to pin
    // the replay semantics of multi-pass tapes.
    #[derive(Default)]
    struct CountingProcessor {
        edges_seen: u64,
        marks_seen: u32,
        passes: u32,
    }

    impl Processor for CountingProcessor {
        fn init(&mut self, meta: &StreamMeta) -> Result<()> {
            self.passes = meta.passes;
            Ok(())
        }
        fn feed(&mut self, token: &Token) -> Result<()> {
            match token {
                Token::Edge(_) => self.edges_seen += 1,
                Token::PassMark { .. } => self.marks_seen += 1,
                Token::Query(_) => {}
            }
            Ok(())
        }
        fn snapshot(&self) -> Transcript {
            let mut bytes = self.edges_seen.to_be_bytes().to_vec();
            bytes.extend(self.marks_seen.to_be_bytes());
            bytes.extend(self.passes.to_be_bytes());
            Transcript::from_bytes(bytes)
        }
        fn restore(&mut self, t: &Transcript) -> Result<()> {
            let b = t.bytes();
            self.edges_seen = u64::from_be_bytes(b[0..8].try_into().unwrap());
            self.marks_seen = u32::from_be_bytes(b[8..12].try_into().unwrap());
            self.passes = u32::from_be_bytes(b[12..16].try_into().unwrap());
            Ok(())
        }
        fn finish(&mut self) -> Result<i64> {
            Ok(self.edges_seen as i64)
        }
        fn state_bits(&self) -> u64 {
            self.snapshot().bit_len()
        }
    }

    #[test]
    fn two_passes_feed_every_edge_twice() {
        let mut s = random_tree_stream(12, 3);
        s.passes = 2;
        let mut proc = CountingProcessor::default();
        let out = run_stream(&mut proc, &s).unwrap();
        assert_eq!(out.answer, 2 * 11);
        assert_eq!(proc.marks_seen, 1);
    }

    #[test]
    fn peak_meter_is_monotone_upper_envelope() {
        let s = random_tree_stream(12, 3);
        let mut proc = CountingProcessor::default();
        let out = run_stream(&mut proc, &s).unwrap();
        assert!(out.peak_state_bits >= proc.state_bits());
        assert_eq!(out.peak_state_bits, 16 * 8);
    }
}
