use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::CounterRng;

/// Connectivity retries for [`watts_strogatz`].
pub const MAX_GENERATION_ATTEMPTS: u64 = 100;

/// How a generated graph was built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphRecord {
    pub generator: String,
    pub k: usize,
    pub p: f64,
    pub seed: u64,
    /// 1-based index of the attempt that produced a connected graph.
    pub attempt: u64,
}

/// A simple undirected graph with a lexicographically sorted edge list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    record: Option<GraphRecord>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    record: Option<GraphRecord>,
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<Self> {
        let mut g = Graph::new(j.n, j.edges.iter().map(|e| (e[0], e[1])))?;
        g.record = j.record;
        Ok(g)
    }
}

impl From<Graph> for GraphJson {
    fn from(g: Graph) -> Self {
        Self {
            n: g.n,
            edges: g.edges.iter().map(|&(u, v)| [u, v]).collect(),
            seed: g.record.as_ref().map(|r| r.seed),
            record: g.record,
        }
    }
}

impl Graph {
    /// Normalizes edges to `u < v` and rejects loops, duplicates and
    /// out-of-range endpoints.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Structure(format!("edge ({u}, {v}) out of range for {n} vertices")));
            }
            if u == v {
                return Err(Error::Structure(format!("self-loop at vertex {u}")));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(Error::Structure(format!("duplicate edge ({u}, {v})")));
            }
        }
        Ok(Self {
            n,
            edges: set.into_iter().collect(),
            record: None,
        })
    }

    pub fn cycle(n: usize) -> Result<Self> {
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn complete(n: usize) -> Result<Self> {
        Self::new(n, (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))))
    }

    /// The Petersen graph: outer 5-cycle, inner pentagram, spokes.
    pub fn petersen() -> Self {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        Self::new(10, outer.chain(inner).chain(spokes)).expect("Petersen graph is simple")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn record(&self) -> Option<&GraphRecord> {
        self.record.as_ref()
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    pub fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj.iter_mut().for_each(|a| a.sort_unstable());
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.neighbours().iter().map(Vec::len).collect()
    }

    /// Number of connected components.
    pub fn component_count(&self) -> usize {
        let adj = self.neighbours();
        let mut seen = vec![false; self.n];
        let mut count = 0;
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            count += 1;
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.component_count() == 1
    }

    /// Triangles `(a, b, c)` with `a < b < c`, in lexicographic order.
    pub fn triangles(&self) -> Vec<(usize, usize, usize)> {
        let adj = self.neighbours();
        let mut out = Vec::new();
        for &(a, b) in &self.edges {
            for &c in &adj[b] {
                if c > b && adj[a].binary_search(&c).is_ok() {
                    out.push((a, b, c));
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Watts–Strogatz small-world graph, retried until connected.
///
/// Ring lattice on `n` vertices joined to their `k/2` nearest neighbours on
/// each side; then for each offset `j = 1..k/2` and each vertex `u`, the edge
/// `(u, u + j)` is rewired with probability `p` to a uniform `w` avoiding
/// loops and duplicates. Attempt `a` uses substream `a` of the seed.
pub fn watts_strogatz(n: usize, k: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(k >= 2 && k % 2 == 0 && n > k) {
        return Err(Error::Argument(format!("need n > k >= 2 with k even, got n={n}, k={k}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Argument(format!("rewiring probability must lie in [0, 1], got {p}")));
    }
    let base = CounterRng::new(seed, 0x5753);
    for attempt in 1..=MAX_GENERATION_ATTEMPTS {
        let mut cur = base.substream(attempt).cursor();
        let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for u in 0..n {
            for j in 1..=k / 2 {
                let v = (u + j) % n;
                adj[u].insert(v);
                adj[v].insert(u);
            }
        }
        for j in 1..=k / 2 {
            for u in 0..n {
                let v = (u + j) % n;
                if !cur.bernoulli(p) {
                    continue;
                }
                if adj[u].len() >= n - 1 {
                    // u is joined to everything; no admissible target remains
                    continue;
                }
                let mut w = cur.below(n as u64) as usize;
                while w == u || adj[u].contains(&w) {
                    w = cur.below(n as u64) as usize;
                }
                if !adj[u].contains(&v) {
                    continue;
                }
                adj[u].remove(&v);
                adj[v].remove(&u);
                adj[u].insert(w);
                adj[w].insert(u);
            }
        }
        let edges = (0..n).flat_map(|u| adj[u].iter().filter(move |&&v| v > u).map(move |&v| (u, v)));
        let mut g = Graph::new(n, edges.collect::<Vec<_>>())?;
        if g.is_connected() {
            g.record = Some(GraphRecord {
                generator: "watts-strogatz".into(),
                k,
                p,
                seed,
                attempt,
            });
            return Ok(g);
        }
    }
    Err(Error::Generation(format!(
        "no connected Watts-Strogatz graph after {MAX_GENERATION_ATTEMPTS} attempts"
    )))
}
