//! Finite directed graphs and their finite paths.
//!
//! A graph `E = (E^0, E^1, r, s)` has a finite vertex set, a finite edge set
//! and range/source maps `r, s : E^1 -> E^0`. Paths of length k are edge
//! sequences `e_1 e_2 ... e_k` with `r(e_{i+1}) = s(e_i)`; length-0 paths are
//! identified with vertices, so an empty path carries its base vertex. All
//! higher layers (actions, semigroups, germs) speak in the interned ids
//! defined here.

use std::fmt;
use thiserror::Error;

/// Interned vertex identifier. Stable small integer assigned in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

/// Interned edge identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("vertex `{0}` has no edge with range `{0}` (source vertex)")]
    SourceVertex(String),
    #[error("edge `{edge}` references unknown vertex `{vertex}`")]
    DanglingEdge { edge: String, vertex: String },
    #[error("duplicate vertex name `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge name `{0}`")]
    DuplicateEdge(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("paths are not composable: source `{left_source}` != range `{right_range}`")]
    NotComposable {
        left_source: String,
        right_range: String,
    },
}

/// A finite directed graph with interned vertices and edges.
///
/// Immutable after construction; all queries are pure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_names: Vec<String>,
    edge_names: Vec<String>,
    edge_range: Vec<VertexId>,
    edge_source: Vec<VertexId>,
    /// `vE^1` per vertex: edges `e` with `r(e) = v`, sorted by id.
    range_fibers: Vec<Vec<EdgeId>>,
}

impl Graph {
    /// Builds a graph from names. Edges are `(name, range, source)` triples.
    ///
    /// Rejects duplicate names and edges referencing unknown vertices. The
    /// no-sources invariant is checked separately by [`Graph::validate`].
    pub fn new(
        vertices: &[&str],
        edges: &[(&str, &str, &str)],
    ) -> Result<Graph, GraphError> {
        let mut vertex_names = Vec::with_capacity(vertices.len());
        for v in vertices {
            if vertex_names.iter().any(|n| n == v) {
                return Err(GraphError::DuplicateVertex(v.to_string()));
            }
            vertex_names.push(v.to_string());
        }
        let lookup = |name: &str, edge: &str| -> Result<VertexId, GraphError> {
            vertex_names
                .iter()
                .position(|n| n == name)
                .map(|i| VertexId(i as u32))
                .ok_or_else(|| GraphError::DanglingEdge {
                    edge: edge.to_string(),
                    vertex: name.to_string(),
                })
        };
        let mut edge_names = Vec::with_capacity(edges.len());
        let mut edge_range = Vec::with_capacity(edges.len());
        let mut edge_source = Vec::with_capacity(edges.len());
        for (name, r, s) in edges {
            if edge_names.iter().any(|n| n == name) {
                return Err(GraphError::DuplicateEdge(name.to_string()));
            }
            edge_range.push(lookup(r, name)?);
            edge_source.push(lookup(s, name)?);
            edge_names.push(name.to_string());
        }
        let mut range_fibers = vec![Vec::new(); vertex_names.len()];
        for (i, r) in edge_range.iter().enumerate() {
            range_fibers[r.index()].push(EdgeId(i as u32));
        }
        Ok(Graph {
            vertex_names,
            edge_names,
            edge_range,
            edge_source,
            range_fibers,
        })
    }

    /// Checks the standing invariants: nonempty vertex set and no sources
    /// (every vertex `v` has some edge `e` with `r(e) = v`). Fails with the
    /// first issue; [`Graph::issues`] lists them all.
    pub fn validate(&self) -> Result<(), GraphError> {
        match self.issues().into_iter().next() {
            Some(issue) => Err(issue),
            None => Ok(()),
        }
    }

    /// Every invariant violation, one entry per offending vertex.
    pub fn issues(&self) -> Vec<GraphError> {
        if self.vertex_names.is_empty() {
            return vec![GraphError::EmptyGraph];
        }
        self.range_fibers
            .iter()
            .enumerate()
            .filter(|(_, fiber)| fiber.is_empty())
            .map(|(i, _)| GraphError::SourceVertex(self.vertex_names[i].clone()))
            .collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_names.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_names.len() as u32).map(VertexId)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edge_names.len() as u32).map(EdgeId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.index()]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edge_names[e.index()]
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertex_names
            .iter()
            .position(|n| n == name)
            .map(|i| VertexId(i as u32))
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edge_names
            .iter()
            .position(|n| n == name)
            .map(|i| EdgeId(i as u32))
    }

    /// `r(e)`.
    pub fn range(&self, e: EdgeId) -> VertexId {
        self.edge_range[e.index()]
    }

    /// `s(e)`.
    pub fn source(&self, e: EdgeId) -> VertexId {
        self.edge_source[e.index()]
    }

    /// `vE^1`: the edges with range `v`, in id order.
    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.range_fibers[v.index()]
    }

    fn check_vertex(&self, v: VertexId) -> Result<(), GraphError> {
        if v.index() < self.vertex_names.len() {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(format!("#{}", v.0)))
        }
    }

    /// `vE^k`: all paths of length `k` with range `v`, in lexicographic edge
    /// order. `k = 0` yields the empty path at `v`.
    pub fn paths_of_length(&self, v: VertexId, k: usize) -> Result<Vec<Path>, GraphError> {
        self.check_vertex(v)?;
        let mut level = vec![Path::empty(v)];
        for _ in 0..k {
            let mut next = Vec::new();
            for p in &level {
                for &e in self.out_edges(p.source()) {
                    let mut edges = p.edges().to_vec();
                    edges.push(e);
                    next.push(Path {
                        range: p.range(),
                        source: self.source(e),
                        edges,
                    });
                }
            }
            level = next;
        }
        Ok(level)
    }

    /// All length-`k` paths of the graph, grouped vertex by vertex.
    pub fn all_paths_of_length(&self, k: usize) -> Result<Vec<Path>, GraphError> {
        let mut all = Vec::new();
        for v in self.vertices() {
            all.extend(self.paths_of_length(v, k)?);
        }
        Ok(all)
    }

    /// Renders a path as space-separated edge names, or the base vertex name
    /// for empty paths.
    pub fn path_string(&self, p: &Path) -> String {
        if p.is_empty() {
            self.vertex_name(p.range()).to_string()
        } else {
            p.edges()
                .iter()
                .map(|&e| self.edge_name(e))
                .collect::<Vec<_>>()
                .join(" ")
        }
    }
}

/// A finite path. Empty paths at distinct vertices are distinct values, so the
/// base vertex is stored explicitly; nonempty paths cache both endpoints.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    range: VertexId,
    source: VertexId,
    edges: Vec<EdgeId>,
}

impl Path {
    /// The empty path at `v`, with `r = s = v`.
    pub fn empty(v: VertexId) -> Path {
        Path {
            range: v,
            source: v,
            edges: Vec::new(),
        }
    }

    /// Builds a path from a nonempty edge sequence, checking composability
    /// `r(e_{i+1}) = s(e_i)`.
    pub fn from_edges(graph: &Graph, edges: &[EdgeId]) -> Result<Path, GraphError> {
        match edges.split_first() {
            None => Err(GraphError::UnknownEdge("<empty>".into())),
            Some((&first, rest)) => {
                let mut source = graph.source(first);
                for &e in rest {
                    if graph.range(e) != source {
                        return Err(GraphError::NotComposable {
                            left_source: graph.vertex_name(source).to_string(),
                            right_range: graph.vertex_name(graph.range(e)).to_string(),
                        });
                    }
                    source = graph.source(e);
                }
                Ok(Path {
                    range: graph.range(first),
                    source,
                    edges: edges.to_vec(),
                })
            }
        }
    }

    /// Single-edge path.
    pub fn from_edge(graph: &Graph, e: EdgeId) -> Path {
        Path {
            range: graph.range(e),
            source: graph.source(e),
            edges: vec![e],
        }
    }

    /// `r` of the path (range of the first edge, or the base vertex).
    pub fn range(&self) -> VertexId {
        self.range
    }

    /// `s` of the path (source of the last edge, or the base vertex).
    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    /// Concatenation `self . other`, defined when `s(self) = r(other)`.
    pub fn concat(&self, other: &Path) -> Result<Path, GraphError> {
        if self.source != other.range {
            return Err(GraphError::NotComposable {
                left_source: format!("#{}", self.source.0),
                right_range: format!("#{}", other.range.0),
            });
        }
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Ok(Path {
            range: if self.is_empty() {
                other.range
            } else {
                self.range
            },
            source: if other.is_empty() {
                self.source
            } else {
                other.source
            },
            edges,
        })
    }

    /// If `prefix` is a prefix of `self`, returns the tail `lambda` with
    /// `self = prefix . lambda`; otherwise `None`. Total, never errors.
    pub fn strip_prefix(&self, prefix: &Path) -> Option<Path> {
        if prefix.len() > self.len() {
            return None;
        }
        if prefix.is_empty() {
            if prefix.range == self.range {
                return Some(self.clone());
            }
            return None;
        }
        if self.edges[..prefix.len()] != prefix.edges[..] {
            return None;
        }
        let tail = &self.edges[prefix.len()..];
        Some(Path {
            range: prefix.source,
            source: self.source,
            edges: tail.to_vec(),
        })
    }

    /// Leading subpath of length `n`, with endpoint lookup through the graph.
    pub fn prefix_with(&self, graph: &Graph, n: usize) -> Path {
        assert!(n <= self.len());
        if n == 0 {
            return Path::empty(self.range);
        }
        let edges = self.edges[..n].to_vec();
        let source = graph.source(*edges.last().unwrap());
        Path {
            range: self.range,
            source,
            edges,
        }
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "(v{})", self.range.0)
        } else {
            let names: Vec<String> = self.edges.iter().map(|e| format!("e{}", e.0)).collect();
            write!(f, "{}", names.join(" "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The three-vertex, six-edge graph used as the running example: a loop
    /// e1 at u, a u-v cycle e2/e3 and a v-w multi-cycle e4, e5, e6.
    pub fn example_graph() -> Graph {
        Graph::new(
            &["u", "v", "w"],
            &[
                ("e1", "u", "u"),
                ("e2", "v", "u"),
                ("e3", "u", "v"),
                ("e4", "w", "v"),
                ("e5", "w", "v"),
                ("e6", "v", "w"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn validates_example_graph() {
        let g = example_graph();
        assert!(g.validate().is_ok());
    }

    #[test]
    fn rejects_vertex_without_incoming_range() {
        let g = Graph::new(&["v"], &[]).unwrap();
        assert_eq!(g.validate(), Err(GraphError::SourceVertex("v".into())));
    }

    #[test]
    fn single_loop_is_valid() {
        let g = Graph::new(&["v"], &[("e", "v", "v")]).unwrap();
        assert!(g.validate().is_ok());
    }

    #[test]
    fn empty_graph_is_rejected() {
        let g = Graph::new(&[], &[]).unwrap();
        assert_eq!(g.validate(), Err(GraphError::EmptyGraph));
    }

    #[test]
    fn dangling_edge_is_rejected() {
        let err = Graph::new(&["v"], &[("e", "v", "x")]).unwrap_err();
        assert_eq!(
            err,
            GraphError::DanglingEdge {
                edge: "e".into(),
                vertex: "x".into()
            }
        );
    }

    #[test]
    fn level_one_paths_at_u() {
        let g = example_graph();
        let u = g.vertex_by_name("u").unwrap();
        let paths = g.paths_of_length(u, 1).unwrap();
        let names: Vec<String> = paths.iter().map(|p| g.path_string(p)).collect();
        assert_eq!(names, vec!["e1", "e3"]);
    }

    #[test]
    fn level_zero_is_the_empty_path() {
        let g = example_graph();
        let v = g.vertex_by_name("v").unwrap();
        let paths = g.paths_of_length(v, 0).unwrap();
        assert_eq!(paths, vec![Path::empty(v)]);
    }

    #[test]
    fn level_two_paths_at_u() {
        let g = example_graph();
        let u = g.vertex_by_name("u").unwrap();
        let paths = g.paths_of_length(u, 2).unwrap();
        let names: Vec<String> = paths.iter().map(|p| g.path_string(p)).collect();
        assert_eq!(names, vec!["e1 e1", "e1 e3", "e3 e2", "e3 e6"]);
    }

    #[test]
    fn concat_follows_endpoints() {
        let g = example_graph();
        let e3 = Path::from_edge(&g, g.edge_by_name("e3").unwrap());
        let e2 = Path::from_edge(&g, g.edge_by_name("e2").unwrap());
        let p = e3.concat(&e2).unwrap();
        assert_eq!(g.path_string(&p), "e3 e2");
        assert_eq!(p.range(), g.vertex_by_name("u").unwrap());
        assert_eq!(p.source(), g.vertex_by_name("u").unwrap());

        let e1 = Path::from_edge(&g, g.edge_by_name("e1").unwrap());
        assert!(e1.concat(&e2).is_err());

        let empty_u = Path::empty(g.vertex_by_name("u").unwrap());
        assert_eq!(empty_u.concat(&e1).unwrap(), e1);
    }

    #[test]
    fn strip_prefix_cases() {
        let g = example_graph();
        let u = g.vertex_by_name("u").unwrap();
        let e1 = g.edge_by_name("e1").unwrap();
        let e3 = g.edge_by_name("e3").unwrap();
        let e1e3 = Path::from_edges(&g, &[e1, e3]).unwrap();
        let p_e1 = Path::from_edge(&g, e1);
        let p_e3 = Path::from_edge(&g, e3);

        assert_eq!(e1e3.strip_prefix(&p_e1).unwrap(), p_e3);
        assert_eq!(
            e1e3.strip_prefix(&e1e3).unwrap(),
            Path::empty(e1e3.source())
        );
        assert_eq!(e1e3.strip_prefix(&p_e3), None);
        assert_eq!(p_e1.strip_prefix(&Path::empty(u)).unwrap(), p_e1);
    }

    #[test]
    fn path_count_recursion_holds_up_to_six() {
        // |vE^{k+1}| = sum over x in vE^1 of |s(x)E^k|
        let g = example_graph();
        for v in g.vertices() {
            for k in 0..=6 {
                let lhs = g.paths_of_length(v, k + 1).unwrap().len();
                let rhs: usize = g
                    .out_edges(v)
                    .iter()
                    .map(|&x| g.paths_of_length(g.source(x), k).unwrap().len())
                    .sum();
                assert_eq!(lhs, rhs, "recursion failed at v={:?} k={}", v, k);
            }
        }
    }

    #[test]
    fn strip_prefix_inverts_concat() {
        let g = example_graph();
        for v in g.vertices() {
            for beta in g.paths_of_length(v, 2).unwrap() {
                for lambda in g.paths_of_length(beta.source(), 2).unwrap() {
                    let joined = beta.concat(&lambda).unwrap();
                    assert_eq!(joined.strip_prefix(&beta).unwrap(), lambda);
                }
            }
        }
    }
}
