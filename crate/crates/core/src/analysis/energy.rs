use crate::error::Result;
use crate::graph::{dirichlet_energy, interior_inner, DomainDecomposition, VertexField, WeightedGraph};
use crate::rothe::{run_with, ProblemSpec, RotheSequence, SolverConfig, Strategy, TimeGrid};

/// `G = ∫_Ω |∇φ|² dμ + ∫_{Ω°} |φ_t|² dμ`
pub fn energy(
    graph: &WeightedGraph,
    dom: &DomainDecomposition,
    phi: &VertexField,
    phi_t: &VertexField,
) -> Result<f64> {
    dom.check_dirichlet(phi)?;
    dom.check_dirichlet(phi_t)?;
    Ok(dirichlet_energy(graph, dom, phi) + interior_inner(graph, dom, phi_t, phi_t))
}

/// Energy of the difference of two Rothe sequences on the same grid,
/// `G(t_i)` for `φ = u_A − u_B`, `φ_t = w_A − w_B`.
pub fn difference_energy(
    graph: &WeightedGraph,
    dom: &DomainDecomposition,
    a: &RotheSequence,
    b: &RotheSequence,
) -> Result<Vec<f64>> {
    debug_assert_eq!(a.grid(), b.grid());
    (0..=a.steps())
        .map(|i| energy(graph, dom, &a.u(i).sub(b.u(i)), &a.w(i).sub(b.w(i))))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct UniquenessProbe {
    /// `G(t_i)`, `i = 0..=n`
    pub energies: Vec<f64>,
    pub max: f64,
}

/// Runs the problem once with Newton only and once with minimization of
/// `J_i` only, and records the energy of the difference.
pub fn energy_monotonicity_probe(
    graph: &WeightedGraph,
    dom: &DomainDecomposition,
    spec: &ProblemSpec,
    grid: &TimeGrid,
    tol: f64,
) -> Result<UniquenessProbe> {
    let newton = run_with(
        graph,
        dom,
        spec,
        grid,
        &SolverConfig::with_tol(tol).with_strategy(Strategy::NewtonOnly),
    )?;
    let descent = run_with(
        graph,
        dom,
        spec,
        grid,
        &SolverConfig::with_tol(tol).with_strategy(Strategy::MinimizationOnly),
    )?;
    let energies = difference_energy(graph, dom, &newton, &descent)?;
    let max = energies.iter().copied().fold(0.0, f64::max);
    Ok(UniquenessProbe { energies, max })
}
