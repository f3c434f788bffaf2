use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};

/// Finite connected weighted graph `(V, E, μ, ω)`.
///
/// Vertex labels are opaque strings mapped to dense indices `0..|V|` in
/// order of first appearance. Every edge is stored once, as an unordered
/// pair, so weight symmetry holds by construction.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    mu: Vec<f64>,
    edges: Vec<(usize, usize, f64)>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

/// Builds a graph from labelled edges. Vertices without an entry in
/// `measures` get `μ = 1`.
pub fn build_graph<S: AsRef<str>>(
    edges: &[(S, S, f64)],
    measures: Option<&HashMap<String, f64>>,
) -> Result<WeightedGraph> {
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut intern = |label: &str| -> usize {
        if let Some(&i) = index.get(label) {
            return i;
        }
        let i = labels.len();
        labels.push(label.to_string());
        index.insert(label.to_string(), i);
        i
    };

    let mut indexed = Vec::with_capacity(edges.len());
    for (a, b, w) in edges {
        let (a, b) = (a.as_ref(), b.as_ref());
        let ia = intern(a);
        let ib = intern(b);
        indexed.push((ia, ib, *w));
    }

    let mut mu = vec![1.0; labels.len()];
    if let Some(measures) = measures {
        // Sorted so that error reporting does not depend on hash order.
        let mut entries: Vec<_> = measures.iter().collect();
        entries.sort_by(|a, b| a.0.cmp(b.0));
        for (label, &value) in entries {
            let i = *index.get(label).ok_or_else(|| Error::UnknownVertex {
                vertex: label.clone(),
            })?;
            mu[i] = value;
        }
    }

    WeightedGraph::assemble(labels, index, mu, &indexed)
}

impl WeightedGraph {
    /// Graph on vertices `0..n` labelled by their decimal index.
    pub fn from_indexed(n: usize, edges: &[(usize, usize, f64)], mu: Option<&[f64]>) -> Result<Self> {
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        for &(a, b, _) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(Error::UnknownVertex {
                        vertex: v.to_string(),
                    });
                }
            }
        }
        let mu = match mu {
            Some(m) if m.len() != n => {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: m.len(),
                })
            }
            Some(m) => m.to_vec(),
            None => vec![1.0; n],
        };
        Self::assemble(labels, index, mu, edges)
    }

    fn assemble(
        labels: Vec<String>,
        index: HashMap<String, usize>,
        mu: Vec<f64>,
        edges: &[(usize, usize, f64)],
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        for (i, &m) in mu.iter().enumerate() {
            if !(m > 0.0 && m.is_finite()) {
                return Err(Error::NonpositiveMeasure {
                    vertex: labels[i].clone(),
                    value: m,
                });
            }
        }

        let mut seen = HashSet::new();
        let mut stored = Vec::with_capacity(edges.len());
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b, w) in edges {
            if a == b {
                return Err(Error::SelfLoop {
                    vertex: labels[a].clone(),
                });
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::NonpositiveWeight {
                    a: labels[a].clone(),
                    b: labels[b].clone(),
                    weight: w,
                });
            }
            let key = (a.min(b), a.max(b));
            if !seen.insert(key) {
                return Err(Error::DuplicateEdge {
                    a: labels[a].clone(),
                    b: labels[b].clone(),
                });
            }
            stored.push((key.0, key.1, w));
            adjacency[a].push((b, w));
            adjacency[b].push((a, w));
        }

        let components = count_components(&adjacency);
        if components != 1 {
            return Err(Error::DisconnectedGraph { components });
        }

        Ok(WeightedGraph {
            labels,
            index,
            mu,
            edges: stored,
            adjacency,
        })
    }

    /// Unit-weight path `0 – 1 – … – (n-1)` with `μ ≡ 1`.
    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i, 1.0)).collect();
        Self::from_indexed(n, &edges, None).expect("a path with n >= 2 vertices is a valid graph")
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownVertex {
                vertex: label.to_string(),
            })
    }

    pub fn measures(&self) -> &[f64] {
        &self.mu
    }

    pub fn measure(&self, i: usize) -> f64 {
        self.mu[i]
    }

    /// Edges as `(a, b, ω_ab)` with `a < b`.
    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.adjacency[i]
    }

    /// `Σ_{y∼x} ω_xy`
    pub fn weighted_degree(&self, i: usize) -> f64 {
        self.adjacency[i].iter().map(|&(_, w)| w).sum()
    }

    /// Edge weight between `a` and `b`, if adjacent.
    pub fn weight(&self, a: usize, b: usize) -> Option<f64> {
        self.adjacency[a]
            .iter()
            .find(|&&(y, _)| y == b)
            .map(|&(_, w)| w)
    }
}

fn count_components(adjacency: &[Vec<(usize, f64)>]) -> usize {
    let n = adjacency.len();
    let mut visited = vec![false; n];
    let mut components = 0;
    let mut queue = VecDeque::new();
    for start in 0..n {
        if visited[start] {
            continue;
        }
        components += 1;
        visited[start] = true;
        queue.push_back(start);
        while let Some(x) = queue.pop_front() {
            for &(y, _) in &adjacency[x] {
                if !visited[y] {
                    visited[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    components
}
