//! Independent, non-streaming ground-truth solvers.
//!
//! Each polynomial solver is paired with an exhaustive counterpart
//! (partition enumeration, simple-cycle enumeration, transitive closure)
//! so that reduction tests never validate an implementation against
//! itself. Everything here runs at desk scale only.

use std::collections::VecDeque;

use crate::{Error, Result};

/// A fully materialized graph, mirroring stream content.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaticGraph {
    pub n: usize,
    pub directed: bool,
    /// `(u, v, w)` arcs; undirected graphs store one entry per edge.
    pub arcs: Vec<(usize, usize, i64)>,
}

impl StaticGraph {
    pub fn new(n: usize, directed: bool, arcs: Vec<(usize, usize, i64)>) -> Self {
        StaticGraph { n, directed, arcs }
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v, _) in &self.arcs {
            adj[u].push(v);
            if !self.directed {
                adj[v].push(u);
            }
        }
        adj
    }

    /// Arcs with undirected edges doubled into both orientations.
    fn directed_arcs(&self) -> Vec<(usize, usize, i64)> {
        if self.directed {
            return self.arcs.clone();
        }
        let mut arcs = Vec::with_capacity(self.arcs.len() * 2);
        for &(u, v, w) in &self.arcs {
            arcs.push((u, v, w));
            arcs.push((v, u, w));
        }
        arcs
    }
}

/// Exact depths of every node of a rooted tree.
pub fn bfs_depths(g: &StaticGraph, root: usize) -> Result<Vec<u32>> {
    if root >= g.n {
        return Err(Error::InvalidInput(format!("root {root} out of range")));
    }
    if g.arcs.len() != g.n.saturating_sub(1) {
        return Err(Error::InvalidInput(format!(
            "not a tree: {} edges on {} nodes",
            g.arcs.len(),
            g.n
        )));
    }
    let adj = g.adjacency();
    let mut depth = vec![u32::MAX; g.n];
    let mut queue = VecDeque::from([root]);
    depth[root] = 0;
    let mut reached = 1usize;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if depth[v] == u32::MAX {
                depth[v] = depth[u] + 1;
                reached += 1;
                queue.push_back(v);
            }
        }
    }
    if reached != g.n {
        return Err(Error::InvalidInput("not a tree: disconnected".into()));
    }
    Ok(depth)
}

#[derive(Debug, Clone)]
struct FlowEdge {
    to: usize,
    cap: i64,
    rev: usize,
}

/// Dinic's algorithm on integer capacities.
struct Dinic {
    graph: Vec<Vec<FlowEdge>>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Dinic {
            graph: vec![Vec::new(); n],
        }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: i64, rev_cap: i64) {
        let from_len = self.graph[from].len();
        let to_len = self.graph[to].len();
        self.graph[from].push(FlowEdge {
            to,
            cap,
            rev: to_len,
        });
        self.graph[to].push(FlowEdge {
            to: from,
            cap: rev_cap,
            rev: from_len,
        });
    }

    fn bfs(&self, s: usize, t: usize, level: &mut [i32]) -> bool {
        level.fill(-1);
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for e in &self.graph[u] {
                if e.cap > 0 && level[e.to] == -1 {
                    level[e.to] = level[u] + 1;
                    queue.push_back(e.to);
                }
            }
        }
        level[t] != -1
    }

    fn dfs(&mut self, u: usize, t: usize, flow: i64, level: &[i32], iter: &mut [usize]) -> i64 {
        if u == t {
            return flow;
        }
        while iter[u] < self.graph[u].len() {
            let i = iter[u];
            let (to, cap, rev) = {
                let e = &self.graph[u][i];
                (e.to, e.cap, e.rev)
            };
            if cap > 0 && level[to] == level[u] + 1 {
                let pushed = self.dfs(to, t, flow.min(cap), level, iter);
                if pushed > 0 {
                    self.graph[u][i].cap -= pushed;
                    self.graph[to][rev].cap += pushed;
                    return pushed;
                }
            }
            iter[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let n = self.graph.len();
        let mut flow = 0;
        let mut level = vec![-1i32; n];
        while self.bfs(s, t, &mut level) {
            let mut iter = vec![0usize; n];
            loop {
                let pushed = self.dfs(s, t, i64::MAX, &level, &mut iter);
                if pushed == 0 {
                    break;
                }
                flow += pushed;
            }
        }
        flow
    }
}

/// Max-flow value from `s` to `t`, which equals the min s-t cut.
/// Undirected edges become arc pairs with capacity `w` both ways.
pub fn max_flow_min_cut(g: &StaticGraph, s: usize, t: usize) -> Result<i64> {
    if s == t {
        return Err(Error::InvalidInput("s and t must differ".into()));
    }
    if s >= g.n || t >= g.n {
        return Err(Error::InvalidInput("query node out of range".into()));
    }
    let mut dinic = Dinic::new(g.n);
    for &(u, v, w) in &g.arcs {
        if w <= 0 {
            return Err(Error::InvalidInput(format!(
                "nonpositive capacity {w} on ({u}, {v})"
            )));
        }
        if g.directed {
            dinic.add_edge(u, v, w, 0);
        } else {
            dinic.add_edge(u, v, w, w);
        }
    }
    Ok(dinic.max_flow(s, t))
}

/// Global min cut of an undirected graph: the min over all `y != s` of the
/// min s-y cut, for a fixed `s`. Disconnected graphs yield 0.
pub fn global_min_cut(g: &StaticGraph) -> Result<i64> {
    if g.n <= 1 {
        return Ok(0);
    }
    let mut best = i64::MAX;
    for y in 1..g.n {
        best = best.min(max_flow_min_cut(g, 0, y)?);
        if best == 0 {
            break;
        }
    }
    Ok(best)
}

/// Whether the directed graph contains a negative-weight cycle, detected by
/// Bellman-Ford relaxation from a virtual source connected to every node
/// with weight zero (realized as an all-zero initial distance vector).
pub fn bellman_ford_negcycle(g: &StaticGraph) -> bool {
    let arcs = g.directed_arcs();
    let mut dist = vec![0i64; g.n];
    for round in 0..g.n {
        let mut relaxed = false;
        for &(u, v, w) in &arcs {
            if dist[u] + w < dist[v] {
                dist[v] = dist[u] + w;
                relaxed = true;
            }
        }
        if !relaxed {
            return false;
        }
        if round == g.n.saturating_sub(1) {
            return true;
        }
    }
    g.n == 0
}

/// Tarjan SCC decomposition; returns the component id of every node.
pub fn scc_components(g: &StaticGraph) -> Vec<usize> {
    struct State<'a> {
        adj: &'a [Vec<usize>],
        index: Vec<usize>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        next_index: usize,
        comp: Vec<usize>,
        next_comp: usize,
    }

    const UNVISITED: usize = usize::MAX;

    fn visit(s: &mut State, v: usize) {
        s.index[v] = s.next_index;
        s.low[v] = s.next_index;
        s.next_index += 1;
        s.stack.push(v);
        s.on_stack[v] = true;
        for i in 0..s.adj[v].len() {
            let w = s.adj[v][i];
            if s.index[w] == UNVISITED {
                visit(s, w);
                s.low[v] = s.low[v].min(s.low[w]);
            } else if s.on_stack[w] {
                s.low[v] = s.low[v].min(s.index[w]);
            }
        }
        if s.low[v] == s.index[v] {
            loop {
                let w = s.stack.pop().unwrap();
                s.on_stack[w] = false;
                s.comp[w] = s.next_comp;
                if w == v {
                    break;
                }
            }
            s.next_comp += 1;
        }
    }

    let mut adj = vec![Vec::new(); g.n];
    for &(u, v, _) in &g.arcs {
        adj[u].push(v);
        if !g.directed {
            adj[v].push(u);
        }
    }
    let mut state = State {
        adj: &adj,
        index: vec![UNVISITED; g.n],
        low: vec![0; g.n],
        on_stack: vec![false; g.n],
        stack: Vec::new(),
        next_index: 0,
        comp: vec![0; g.n],
        next_comp: 0,
    };
    for v in 0..g.n {
        if state.index[v] == UNVISITED {
            visit(&mut state, v);
        }
    }
    state.comp
}

/// Whether `s` and `t` share a strongly connected component.
pub fn scc_same(g: &StaticGraph, s: usize, t: usize) -> bool {
    if s == t {
        return true;
    }
    let comp = scc_components(g);
    comp[s] == comp[t]
}

/// Whether a directed graph is acyclic (no self loops, all SCCs trivial).
pub fn is_acyclic_directed(g: &StaticGraph) -> bool {
    if g.arcs.iter().any(|&(u, v, _)| u == v) {
        return false;
    }
    let comp = scc_components(g);
    let mut seen = vec![0usize; g.n];
    for &c in &comp {
        seen[c] += 1;
        if seen[c] > 1 {
            return false;
        }
    }
    true
}

const EXHAUSTIVE_NODE_CAP: usize = 20;

/// Min s-t cut by enumerating every bipartition with `s` on one side and
/// `t` on the other.
pub fn exhaustive_st_min_cut(g: &StaticGraph, s: usize, t: usize) -> i64 {
    assert!(g.n <= EXHAUSTIVE_NODE_CAP, "exhaustive cut is 2^n");
    assert!(s != t);
    let mut best = i64::MAX;
    for mask in 0..(1u64 << g.n) {
        if mask & (1 << s) == 0 || mask & (1 << t) != 0 {
            continue;
        }
        let mut crossing = 0i64;
        for &(u, v, w) in &g.arcs {
            let u_in = mask & (1 << u) != 0;
            let v_in = mask & (1 << v) != 0;
            let crosses = if g.directed {
                u_in && !v_in
            } else {
                u_in != v_in
            };
            if crosses {
                crossing += w;
            }
        }
        best = best.min(crossing);
    }
    best
}

/// Global min cut by enumerating every bipartition with node 0 pinned to
/// one side.
pub fn exhaustive_global_min_cut(g: &StaticGraph) -> i64 {
    assert!(g.n <= EXHAUSTIVE_NODE_CAP);
    if g.n <= 1 {
        return 0;
    }
    let mut best = i64::MAX;
    for mask in 0..((1u64 << (g.n - 1)) - 1) {
        let side = (mask << 1) | 1; // node 0 always in S, complement nonempty
        let mut crossing = 0i64;
        for &(u, v, w) in &g.arcs {
            if (side & (1 << u) != 0) != (side & (1 << v) != 0) {
                crossing += w;
            }
        }
        best = best.min(crossing);
    }
    best
}

/// Negative-cycle detection by enumerating all simple directed cycles
/// (anchored at their minimum node to avoid duplicates), costing each hop
/// at the cheapest parallel arc.
pub fn exhaustive_negcycle(g: &StaticGraph) -> bool {
    assert!(g.n <= 12, "cycle enumeration is factorial");
    let mut w = vec![vec![i64::MAX; g.n]; g.n];
    for &(u, v, weight) in &g.directed_arcs() {
        if u == v {
            if weight < 0 {
                return true;
            }
            continue;
        }
        w[u][v] = w[u][v].min(weight);
    }

    fn dfs(
        w: &[Vec<i64>],
        anchor: usize,
        u: usize,
        cost: i64,
        visited: &mut Vec<bool>,
    ) -> bool {
        for v in anchor..w.len() {
            if w[u][v] == i64::MAX {
                continue;
            }
            if v == anchor {
                if cost + w[u][v] < 0 {
                    return true;
                }
                continue;
            }
            if !visited[v] {
                visited[v] = true;
                if dfs(w, anchor, v, cost + w[u][v], visited) {
                    return true;
                }
                visited[v] = false;
            }
        }
        false
    }

    for anchor in 0..g.n {
        let mut visited = vec![false; g.n];
        visited[anchor] = true;
        if dfs(&w, anchor, anchor, 0, &mut visited) {
            return true;
        }
    }
    false
}

/// SCC co-membership via boolean transitive closure: reachability in both
/// directions.
pub fn exhaustive_scc_same(g: &StaticGraph, s: usize, t: usize) -> bool {
    assert!(g.n <= EXHAUSTIVE_NODE_CAP);
    let mut reach = vec![vec![false; g.n]; g.n];
    for (v, row) in reach.iter_mut().enumerate() {
        row[v] = true;
    }
    for &(u, v, _) in &g.directed_arcs() {
        reach[u][v] = true;
    }
    for k in 0..g.n {
        let row_k = reach[k].clone();
        for row in reach.iter_mut() {
            if row[k] {
                for (j, &via_k) in row_k.iter().enumerate() {
                    if via_k {
                        row[j] = true;
                    }
                }
            }
        }
    }
    reach[s][t] && reach[t][s]
}
