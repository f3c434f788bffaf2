#![allow(dead_code)]

use gwave::forcing::ForcingSpec;
use gwave::graph::{DomainDecomposition, VertexField, WeightedGraph};
use gwave::rothe::{ProblemSpec, StepState};
use rand::seq::SliceRandom;
use rand::Rng;

/// Connected graph on `n` vertices: a random spanning tree plus extra edges,
/// weights in `[0.1, 10]`, measures in `[0.5, 2]`.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize) -> WeightedGraph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for k in 1..n {
        let a = order[k];
        let b = order[rng.gen_range(0..k)];
        seen.insert((a.min(b), a.max(b)));
        edges.push((a, b, rng.gen_range(0.1..10.0)));
    }
    for _ in 0..rng.gen_range(0..=n) {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b && seen.insert((a.min(b), a.max(b))) {
            edges.push((a, b, rng.gen_range(0.1..10.0)));
        }
    }
    let mu: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
    WeightedGraph::from_indexed(n, &edges, Some(&mu)).expect("random graph is valid")
}

/// Random domain with nonempty boundary and interior.
pub fn random_domain<R: Rng>(rng: &mut R, graph: &WeightedGraph) -> DomainDecomposition {
    let n = graph.vertex_count();
    loop {
        let omega: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.75)).collect();
        if omega.is_empty() {
            continue;
        }
        if let Ok(d) = DomainDecomposition::from_indices(graph, &omega) {
            return d;
        }
    }
}

pub fn random_instance<R: Rng>(rng: &mut R, min: usize, max: usize) -> (WeightedGraph, DomainDecomposition) {
    let n = rng.gen_range(min..=max);
    let g = random_graph(rng, n);
    let d = random_domain(rng, &g);
    (g, d)
}

/// Dirichlet field with interior values uniform in `[−a, a]`.
pub fn random_field<R: Rng>(rng: &mut R, dom: &DomainDecomposition, a: f64) -> VertexField {
    let local: Vec<f64> = dom.interior().iter().map(|_| rng.gen_range(-a..a)).collect();
    dom.extend(&local)
}

/// Step state with random history and forcing.
pub fn random_state<R: Rng>(rng: &mut R, dom: &DomainDecomposition, delta: f64) -> StepState {
    let u_prev = random_field(rng, dom, 1.0);
    let u_prev2 = random_field(rng, dom, 1.0);
    let forcing = random_field(rng, dom, 1.0);
    let w_prev = u_prev.combine(1.0 / delta, &u_prev2, -1.0 / delta);
    StepState::from_history(3, delta, u_prev2, u_prev, w_prev, forcing)
}

pub fn spike(n: usize, at: usize, value: f64) -> VertexField {
    let mut v = VertexField::zeros(n);
    v[at] = value;
    v
}

/// P5 with Ω = {1, 2, 3} (interior {2}).
pub fn p5() -> (WeightedGraph, DomainDecomposition) {
    let g = WeightedGraph::path(5);
    let d = DomainDecomposition::from_indices(&g, &[1, 2, 3]).unwrap();
    (g, d)
}

/// P6 with Ω = {1, 2, 3, 4} (interior {2, 3}).
pub fn p6() -> (WeightedGraph, DomainDecomposition) {
    let g = WeightedGraph::path(6);
    let d = DomainDecomposition::from_indices(&g, &[1, 2, 3, 4]).unwrap();
    (g, d)
}

/// Unit spike at vertex 2 released from rest, `p = 2`, no forcing.
pub fn scalar_problem(horizon: f64) -> (WeightedGraph, DomainDecomposition, ProblemSpec) {
    let (g, d) = p5();
    let spec = ProblemSpec::new(&d, 2.0, spike(5, 2, 1.0), VertexField::zeros(5), ForcingSpec::Zero, horizon).unwrap();
    (g, d, spec)
}

/// Root of `f` on `[lo, hi]` by bisection, `f(lo) < 0 < f(hi)`.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    assert!(f(lo) < 0.0 && f(hi) > 0.0, "bracket does not change sign");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
