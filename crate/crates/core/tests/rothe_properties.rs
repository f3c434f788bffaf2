mod common;

use gwave::forcing::ForcingSpec;
use gwave::graph::{DirichletOperator, VertexField};
use gwave::rothe::{
    apriori_check, damping, evaluate_functional, functional_gradient, make_grid, run, sampled_step_gap, solve_step,
    solve_step_with, step_gap, step_residual, ProblemSpec, SolveMethod, SolverConfig, StepState, Strategy,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

fn zero_spec(d: &gwave::DomainDecomposition, n: usize, p: f64) -> ProblemSpec {
    let z = VertexField::zeros(n);
    ProblemSpec::new(d, p, z.clone(), z, ForcingSpec::Zero, 1.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn damping_is_monotone(a in -50.0..50.0f64, b in -50.0..50.0f64, p in 1.01..4.0f64) {
        prop_assert!((a - b) * (damping(a, p) - damping(b, p)) >= 0.0);
    }

    #[test]
    fn gradient_is_twice_residual(seed in any::<u64>(), p in prop::sample::select(vec![1.5, 2.0, 3.0]), delta in 0.01..0.9f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, d) = random_instance(&mut rng, 5, 25);
        let spec = zero_spec(&d, g.vertex_count(), p);
        let state = random_state(&mut rng, &d, delta);
        let u = random_field(&mut rng, &d, 1.0);
        let grad = functional_gradient(&g, &d, &spec, &state, &u).unwrap();
        let res = step_residual(&g, &d, &spec, &state, &u).unwrap();
        prop_assert!(grad.max_abs_diff(&res.scaled(2.0)) <= 1e-13 * res.max_abs().max(1.0));
    }

    #[test]
    fn finite_difference_gradient(seed in any::<u64>(), p in prop::sample::select(vec![1.5, 2.0, 3.0]), delta in 0.05..0.5f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, d) = random_instance(&mut rng, 5, 15);
        let spec = zero_spec(&d, g.vertex_count(), p);
        let state = random_state(&mut rng, &d, delta);
        let u = random_field(&mut rng, &d, 1.0);
        let grad = functional_gradient(&g, &d, &spec, &state, &u).unwrap();
        let scale = d.interior().iter().map(|&x| (g.measure(x) * grad[x]).abs()).fold(0.0, f64::max);
        let eta = 1e-6;
        for &x in d.interior() {
            let (mut up, mut down) = (u.clone(), u.clone());
            up[x] += eta;
            down[x] -= eta;
            let fd = (evaluate_functional(&g, &d, &spec, &state, &up).unwrap()
                - evaluate_functional(&g, &d, &spec, &state, &down).unwrap()) / (2.0 * eta);
            prop_assert!((fd - g.measure(x) * grad[x]).abs() <= 1e-5 * scale);
        }
    }

    #[test]
    fn solver_meets_tolerance_and_paths_agree(seed in any::<u64>(), p in prop::sample::select(vec![1.5, 2.0, 3.0]), delta in 0.02..0.5f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, d) = random_instance(&mut rng, 5, 30);
        let spec = zero_spec(&d, g.vertex_count(), p);
        let state = random_state(&mut rng, &d, delta);
        let u = solve_step(&g, &d, &spec, &state, 1e-10).unwrap();
        let r = step_residual(&g, &d, &spec, &state, &u).unwrap();
        let norm = gwave::graph::interior_inner(&g, &d, &r, &r).sqrt();
        // u-form evaluation carries ε|u|/δ² rounding on top of the solver tolerance
        prop_assert!(norm <= 1e-10 + 1e-13 / (delta * delta), "{norm}");

        let op = DirichletOperator::new(&g, &d);
        let a = solve_step_with(&op, &d, &spec, &state, &SolverConfig::with_tol(1e-10).with_strategy(Strategy::NewtonOnly)).unwrap();
        let b = solve_step_with(&op, &d, &spec, &state, &SolverConfig::with_tol(1e-10).with_strategy(Strategy::MinimizationOnly)).unwrap();
        prop_assert_eq!(a.method, SolveMethod::Newton);
        prop_assert_eq!(b.method, SolveMethod::Minimization);
        prop_assert!(a.u.max_abs_diff(&b.u) <= 1e-8);
    }

    #[test]
    fn solution_minimizes_functional(seed in any::<u64>(), p in prop::sample::select(vec![1.5, 2.0, 3.0])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, d) = random_instance(&mut rng, 5, 20);
        let spec = zero_spec(&d, g.vertex_count(), p);
        let state = random_state(&mut rng, &d, 0.2);
        let u = solve_step(&g, &d, &spec, &state, 1e-10).unwrap();
        let j = evaluate_functional(&g, &d, &spec, &state, &u).unwrap();
        for _ in 0..5 {
            let other = u.add(&random_field(&mut rng, &d, 0.1));
            prop_assert!(evaluate_functional(&g, &d, &spec, &state, &other).unwrap() >= j - 1e-9 * j.abs().max(1.0));
        }
    }

    #[test]
    fn apriori_holds_on_random_runs(seed in any::<u64>(), p in prop::sample::select(vec![1.5, 2.0, 3.0]), kind in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, d) = random_instance(&mut rng, 5, 15);
        let amplitude = random_field(&mut rng, &d, 1.0);
        let forcing = match kind {
            0 => ForcingSpec::Zero,
            1 => ForcingSpec::Constant { amplitude },
            _ => ForcingSpec::Sinusoid { amplitude, angular_frequency: 5.0 },
        };
        let spec = ProblemSpec::new(&d, p, random_field(&mut rng, &d, 1.0), random_field(&mut rng, &d, 1.0), forcing, 1.0).unwrap();
        let seq = run(&g, &d, &spec, &make_grid(1.0, 20).unwrap(), 1e-10).unwrap();
        let rep = apriori_check(&g, &d, &seq).unwrap();
        prop_assert!(rep.steps_pass(), "{}", rep.min_slack());
        prop_assert!(rep.discrete_bound_holds());
        for i in 1..=20 {
            prop_assert!(seq.residual(i) <= 1e-10);
        }
    }
}

#[test]
fn scalar_first_step_matches_bisection() {
    let (g, d, spec) = scalar_problem(1.0);
    let state = StepState::initial(&d, &spec, &make_grid(1.0, 2).unwrap());
    let u = solve_step(&g, &d, &spec, &state, 1e-10).unwrap();
    let oracle = bisect(
        |u| {
            let w = (u - 1.0) / 0.5;
            (u - 1.0) / 0.25 + 2.0 * u + w.abs() * w
        },
        0.0,
        1.0,
    );
    assert!((u[2] - oracle).abs() <= 1e-9);
    assert!((u[2] - (1.0 + (3.0 - 17f64.sqrt()) / 4.0)).abs() <= 1e-9);
}

#[test]
fn coercivity_sweep() {
    let (g, d, spec) = scalar_problem(1.0);
    let state = StepState::initial(&d, &spec, &make_grid(1.0, 2).unwrap());
    let dir = spike(5, 2, 1.0);
    let values: Vec<f64> = [10.0, 100.0, 1000.0]
        .iter()
        .map(|&c| evaluate_functional(&g, &d, &spec, &state, &dir.scaled(c)).unwrap())
        .collect();
    assert!(values[0] < values[1] && values[1] < values[2]);
    assert!(values[2] > 1e6);
}

#[test]
fn gap_shrinks_linearly() {
    let (g, d, spec) = scalar_problem(1.0);
    let gaps: Vec<f64> = [16usize, 32, 64, 128]
        .iter()
        .map(|&n| {
            let seq = run(&g, &d, &spec, &make_grid(1.0, n).unwrap(), 1e-10).unwrap();
            let times: Vec<f64> = (0..=1000).map(|k| k as f64 / 1000.0).collect();
            assert!(sampled_step_gap(&g, &d, &seq, &times).unwrap() <= step_gap(&g, &d, &seq) * (1.0 + 1e-12));
            step_gap(&g, &d, &seq)
        })
        .collect();
    for w in gaps.windows(2) {
        assert!((0.4..=0.6).contains(&(w[1] / w[0])));
    }
}
