//! Finite simple commutation graphs: distances, orthogonal complements and
//! the closure operator `cl(Y) = Y^⊥⊥`.
//!
//! Vertices are identified by their position in the input order. All set
//! operations work on [`VertexSet`] bitmasks, which caps graphs at 64
//! vertices.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;

pub const MAX_VERTICES: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Graph {
    names: Vec<String>,
    adj: Vec<u64>,
}

/// On-disk form: `{"vertices": ["a","b","c"], "edges": [["a","b"],["b","c"]]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
}

impl Graph {
    /// Builds a graph from vertex names and index pairs. Rejects loops,
    /// repeated edges, duplicate names and out-of-range indices.
    pub fn new(names: Vec<String>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = names.len();
        if n > MAX_VERTICES {
            return Err(Error::InvalidGraph(format!(
                "{n} vertices exceeds the limit of {MAX_VERTICES}"
            )));
        }
        let mut seen = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() || name.contains(char::is_whitespace) || name.contains('^') {
                return Err(Error::InvalidGraph(format!("bad vertex name `{name}`")));
            }
            if seen.insert(name.as_str(), i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex `{name}`")));
            }
        }
        let mut adj = vec![0u64; n];
        for &(x, y) in edges {
            if x >= n || y >= n {
                return Err(Error::InvalidGraph(format!("edge ({x},{y}) out of range")));
            }
            if x == y {
                return Err(Error::InvalidGraph(format!("self-loop at `{}`", names[x])));
            }
            if adj[x] >> y & 1 == 1 {
                return Err(Error::InvalidGraph(format!(
                    "repeated edge {}-{}",
                    names[x], names[y]
                )));
            }
            adj[x] |= 1 << y;
            adj[y] |= 1 << x;
        }
        Ok(Graph { names, adj })
    }

    pub fn from_named(vertices: &[&str], edges: &[(&str, &str)]) -> Result<Self> {
        let names: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
        let lookup: HashMap<&str, usize> = vertices.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let idx = |s: &str| {
            lookup
                .get(s)
                .copied()
                .ok_or_else(|| Error::UnknownVertex(s.to_string()))
        };
        let pairs = edges
            .iter()
            .map(|(a, b)| Ok((idx(a)?, idx(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Graph::new(names, &pairs)
    }

    /// Graph on `0..n` named `v0, v1, …` whose edges are given by adjacency
    /// bitmasks. Used by the graph enumerators.
    pub fn from_adjacency(adj: Vec<u64>) -> Result<Self> {
        let n = adj.len();
        let names = (0..n).map(|i| format!("v{i}")).collect();
        let mut edges = Vec::new();
        for x in 0..n {
            for y in (x + 1)..n {
                let xy = adj[x] >> y & 1 == 1;
                if xy != (adj[y] >> x & 1 == 1) {
                    return Err(Error::InvalidGraph("asymmetric adjacency".into()));
                }
                if xy {
                    edges.push((x, y));
                }
            }
            if adj[x] >> x & 1 == 1 {
                return Err(Error::InvalidGraph("self-loop".into()));
            }
        }
        Graph::new(names, &edges)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let g: GraphJson = serde_json::from_str(s)?;
        Graph::try_from(g)
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.names.clone(),
            edges: self
                .edges()
                .into_iter()
                .map(|(x, y)| [self.names[x].clone(), self.names[y].clone()])
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn set_of(&self, names: &[&str]) -> Result<VertexSet> {
        names.iter().map(|n| self.index_of(n)).collect()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.len())
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(format!("#{v}")))
        }
    }

    pub fn check_set(&self, y: VertexSet) -> Result<()> {
        if y.is_subset(self.vertices()) {
            Ok(())
        } else {
            Err(Error::UnknownVertex(format!("in {y}")))
        }
    }

    /// Whether `x` and `y` are distinct and joined by an edge, i.e. the
    /// generators commute non-trivially.
    pub fn adjacent(&self, x: usize, y: usize) -> bool {
        self.adj[x] >> y & 1 == 1
    }

    pub fn neighbours(&self, x: usize) -> VertexSet {
        VertexSet::from_bits(self.adj[x])
    }

    pub(crate) fn adjacency_bits(&self) -> &[u64] {
        &self.adj
    }

    /// `{x} ∪ neighbours(x)`, which is `x^⊥`.
    pub fn ball(&self, x: usize) -> VertexSet {
        VertexSet::from_bits(self.adj[x] | 1 << x)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.len() {
            for y in self.neighbours(x).iter().filter(|&y| y > x) {
                out.push((x, y));
            }
        }
        out
    }

    /// Breadth-first distance; `None` when `x` and `y` lie in different
    /// components.
    pub fn distance(&self, x: usize, y: usize) -> Result<Option<usize>> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        let mut dist = vec![usize::MAX; self.len()];
        let mut queue = VecDeque::from([x]);
        dist[x] = 0;
        while let Some(u) = queue.pop_front() {
            if u == y {
                return Ok(Some(dist[u]));
            }
            for w in self.neighbours(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        Ok(None)
    }

    /// `Y^⊥ = {u : d(u, y) ≤ 1 for all y ∈ Y}`, with `∅^⊥ = X`.
    pub fn orth(&self, y: VertexSet) -> VertexSet {
        y.iter().fold(self.vertices(), |acc, v| acc & self.ball(v))
    }

    pub fn closure(&self, y: VertexSet) -> VertexSet {
        self.orth(self.orth(y))
    }

    pub fn is_closed(&self, y: VertexSet) -> bool {
        self.closure(y) == y
    }

    pub fn is_simplex(&self, y: VertexSet) -> bool {
        y.iter().all(|v| (y - self.ball(v)).is_empty())
    }

    /// Induced subgraph on `y`, vertices renumbered in increasing index
    /// order and keeping their names.
    pub fn full_subgraph(&self, y: VertexSet) -> Graph {
        let keep: Vec<usize> = y.iter().collect();
        let names = keep.iter().map(|&v| self.names[v].clone()).collect();
        let mut edges = Vec::new();
        for (i, &a) in keep.iter().enumerate() {
            for (j, &b) in keep.iter().enumerate().skip(i + 1) {
                if self.adjacent(a, b) {
                    edges.push((i, j));
                }
            }
        }
        Graph::new(names, &edges).expect("subgraph of a valid graph")
    }

    /// The dual graph Δ: same vertices, an edge exactly where Γ has none.
    pub fn non_commutation_graph(&self) -> Graph {
        let n = self.len();
        let full = VertexSet::full(n).bits();
        let adj = (0..n).map(|x| full & !self.adj[x] & !(1u64 << x)).collect();
        Graph {
            names: self.names.clone(),
            adj,
        }
    }

    /// Connected components of the full subgraph on `within`, each listed
    /// once, ordered by least member.
    pub fn components_within(&self, within: VertexSet) -> Vec<VertexSet> {
        let mut remaining = within;
        let mut out = Vec::new();
        while let Some(start) = remaining.first() {
            let mut comp = VertexSet::singleton(start);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let mut next = VertexSet::EMPTY;
                for v in frontier {
                    next = next | (self.neighbours(v) & within);
                }
                frontier = next - comp;
                comp = comp | next;
            }
            remaining = remaining - comp;
            out.push(comp);
        }
        out
    }

    /// Components of `Γ \ S`.
    pub fn components_minus(&self, s: VertexSet) -> Vec<VertexSet> {
        self.components_within(self.vertices() - s)
    }

    pub fn format_set(&self, y: VertexSet) -> String {
        let names: Vec<&str> = y.iter().map(|v| self.name(v)).collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn set_names(&self, y: VertexSet) -> Vec<String> {
        y.iter().map(|v| self.names[v].clone()).collect()
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "graph {} {{", dot_id(name));
        for v in &self.names {
            let _ = writeln!(s, "  {};", dot_id(v));
        }
        for (x, y) in self.edges() {
            let _ = writeln!(s, "  {} -- {};", dot_id(&self.names[x]), dot_id(&self.names[y]));
        }
        s.push_str("}\n");
        s
    }
}

pub(crate) fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(g: GraphJson) -> Result<Self> {
        let lookup: HashMap<&str, usize> = g
            .vertices
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let mut pairs = Vec::with_capacity(g.edges.len());
        for [a, b] in &g.edges {
            let x = *lookup
                .get(a.as_str())
                .ok_or_else(|| Error::UnknownVertex(a.clone()))?;
            let y = *lookup
                .get(b.as_str())
                .ok_or_else(|| Error::UnknownVertex(b.clone()))?;
            pairs.push((x, y));
        }
        Graph::new(g.vertices, &pairs)
    }
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let g = GraphJson::deserialize(d)?;
        Graph::try_from(g).map_err(serde::de::Error::custom)
    }
}

/// Common small graphs used in tests and examples.
pub mod named {
    use super::Graph;

    /// The path `a – b – c`.
    pub fn p3() -> Graph {
        Graph::from_named(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap()
    }

    pub fn complete(names: &[&str]) -> Graph {
        let mut edges = Vec::new();
        for (i, a) in names.iter().enumerate() {
            for b in &names[i + 1..] {
                edges.push((*a, *b));
            }
        }
        Graph::from_named(names, &edges).unwrap()
    }

    pub fn edgeless(names: &[&str]) -> Graph {
        Graph::from_named(names, &[]).unwrap()
    }

    /// `K3` on `a, b, c`.
    pub fn k3() -> Graph {
        complete(&["a", "b", "c"])
    }
}

#[cfg(test)]
mod tests {
    use super::named::*;
    use super::*;

    fn set(g: &Graph, names: &[&str]) -> VertexSet {
        g.set_of(names).unwrap()
    }

    #[test]
    fn distances() {
        let g = p3();
        assert_eq!(g.distance(0, 2).unwrap(), Some(2));
        assert_eq!(g.distance(1, 1).unwrap(), Some(0));
        let e = edgeless(&["a", "b"]);
        assert_eq!(e.distance(0, 1).unwrap(), None);
        assert!(matches!(g.distance(0, 7), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn orth_examples() {
        let g = p3();
        assert_eq!(g.orth(set(&g, &["a"])), set(&g, &["a", "b"]));
        assert_eq!(g.orth(VertexSet::EMPTY), g.vertices());
        let k = k3();
        assert_eq!(k.orth(set(&k, &["a"])), k.vertices());
    }

    #[test]
    fn closure_examples() {
        let g = p3();
        assert_eq!(g.closure(set(&g, &["a"])), set(&g, &["a", "b"]));
        assert_eq!(g.closure(set(&g, &["b"])), set(&g, &["b"]));
        let k = k3();
        assert_eq!(k.closure(set(&k, &["a"])), k.vertices());
        // cl(∅) = X^⊥
        assert_eq!(g.closure(VertexSet::EMPTY), set(&g, &["b"]));
        let e = edgeless(&["a", "b", "c"]);
        assert_eq!(e.closure(VertexSet::EMPTY), VertexSet::EMPTY);
    }

    #[test]
    fn simplex_examples() {
        let g = p3();
        assert!(g.is_simplex(set(&g, &["a", "b"])));
        assert!(!g.is_simplex(set(&g, &["a", "c"])));
        assert!(g.is_simplex(VertexSet::EMPTY));
    }

    #[test]
    fn subgraph_examples() {
        let g = p3();
        let s = g.full_subgraph(set(&g, &["a", "c"]));
        assert_eq!(s.len(), 2);
        assert!(s.edges().is_empty());
        assert_eq!(g.full_subgraph(g.vertices()), g);
        let k = k3();
        let e = k.full_subgraph(set(&k, &["a", "b"]));
        assert_eq!(e.edges(), vec![(0, 1)]);
    }

    #[test]
    fn dual_examples() {
        assert!(k3().non_commutation_graph().edges().is_empty());
        let d = p3().non_commutation_graph();
        assert_eq!(d.edges(), vec![(0, 2)]);
        assert_eq!(d.non_commutation_graph(), p3());
    }

    #[test]
    fn component_examples() {
        let g = p3();
        let a_perp = g.orth(set(&g, &["a"]));
        assert_eq!(g.components_minus(a_perp), vec![set(&g, &["c"])]);
        assert_eq!(g.components_minus(VertexSet::EMPTY), vec![g.vertices()]);
        assert_eq!(
            g.components_minus(set(&g, &["b"])),
            vec![set(&g, &["a"]), set(&g, &["c"])]
        );
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Graph::from_named(&["a", "a"], &[]).is_err());
        assert!(Graph::from_named(&["a"], &[("a", "a")]).is_err());
        assert!(Graph::from_named(&["a", "b"], &[("a", "b"), ("b", "a")]).is_err());
        assert!(matches!(
            Graph::from_named(&["a"], &[("a", "z")]),
            Err(Error::UnknownVertex(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let g = p3();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"vertices":["a","b","c"],"edges":[["a","b"],["b","c"]]}"#);
        assert_eq!(Graph::from_json_str(&s).unwrap(), g);
    }
}
