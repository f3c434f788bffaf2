mod common;

use gwave::analysis::{
    convergence_study, difference_energy, energy, holder_estimate, oracle_error, uniform_samples, HolderSpec,
};
use gwave::forcing::ForcingSpec;
use gwave::graph::{lp_norm, VertexField};
use gwave::oracle::{energy_decay_check, mol_integrate};
use gwave::rothe::{make_grid, run, ProblemSpec};
use gwave::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

fn interior_norm(g: &gwave::WeightedGraph, d: &gwave::DomainDecomposition, v: &VertexField) -> f64 {
    lp_norm(g, v, 2.0, d.omega()).unwrap()
}

#[test]
fn sqrt_forcing_exponent() {
    let (g, d) = p6();
    let forcing = ForcingSpec::SqrtTime { amplitude: d.extend(&[1.0, -2.0]) };
    let mut times = vec![0.0];
    times.extend((0..10).map(|k| 4f64.powi(-k)));
    let est = holder_estimate(&forcing, &g, &d, &times, Some(&forcing.holder_spec(&g, &d))).unwrap();
    assert!((est.gamma - 0.5).abs() <= 0.05, "gamma = {}", est.gamma);
    assert_eq!(est.passes, Some(true));
    assert_eq!(est.violations, 0);
}

#[test]
fn sinusoid_constant_within_declared() {
    let (g, d) = p6();
    let amplitude = d.extend(&[0.5, 1.5]);
    let omega = 3.0;
    let forcing = ForcingSpec::Sinusoid { amplitude: amplitude.clone(), angular_frequency: omega };
    let declared = forcing.holder_spec(&g, &d);
    let bound = omega * interior_norm(&g, &d, &amplitude);
    assert!((declared.c - bound).abs() <= 1e-12 * bound);
    let est = holder_estimate(&forcing, &g, &d, &uniform_samples(2.0, 200), Some(&declared)).unwrap();
    assert_eq!(est.passes, Some(true));
    assert!(est.worst.unwrap().implied_constant <= bound * (1.0 + 1e-9));
}

#[test]
fn holder_rejects_violations_and_short_samples() {
    let (g, d) = p6();
    let forcing = ForcingSpec::SqrtTime { amplitude: d.extend(&[1.0, 1.0]) };
    let too_tight = HolderSpec::new(1e-3, 0.5, 0.0).unwrap();
    let est = holder_estimate(&forcing, &g, &d, &uniform_samples(1.0, 50), Some(&too_tight)).unwrap();
    assert_eq!(est.passes, Some(false));
    assert!(est.violations > 0);
    assert!(matches!(
        holder_estimate(&forcing, &g, &d, &[0.0, 0.5, 0.5], None),
        Err(Error::InsufficientSamples { .. })
    ));
}

#[test]
fn oracle_is_fourth_order() {
    let (g, d, spec) = scalar_problem(1.0);
    let at_end = |dt: f64| mol_integrate(&g, &d, &spec, dt, &[]).unwrap().at(1.0).unwrap().0[2];
    let (a, b, c) = (at_end(0.02), at_end(0.01), at_end(0.005));
    let ratio = (a - b).abs() / (b - c).abs();
    assert!((8.0..=32.0).contains(&ratio), "ratio = {ratio}");
}

#[test]
fn oracle_step_halving_is_converged() {
    let (g, d, spec) = scalar_problem(1.0);
    let a = mol_integrate(&g, &d, &spec, 1e-4, &[]).unwrap().at(1.0).unwrap().0;
    let b = mol_integrate(&g, &d, &spec, 5e-5, &[]).unwrap().at(1.0).unwrap().0;
    assert!(a.max_abs_diff(&b) <= 1e-10);
}

#[test]
fn oracle_rejects_bad_steps() {
    let (g, d, spec) = scalar_problem(1.0);
    assert!(matches!(mol_integrate(&g, &d, &spec, 2.0, &[]), Err(Error::NonpositiveStep { .. })));
    assert!(matches!(mol_integrate(&g, &d, &spec, 0.0, &[]), Err(Error::NonpositiveStep { .. })));
    assert!(matches!(mol_integrate(&g, &d, &spec, 0.9, &[]), Err(Error::UnstableIntegration { .. })));
    assert!(matches!(mol_integrate(&g, &d, &spec, 1e-3, &[1.5]), Err(Error::TimeRangeMismatch { .. })));
}

#[test]
fn unforced_energy_decays_on_random_problems() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let (g, d) = random_instance(&mut rng, 5, 10);
        let spec = ProblemSpec::new(
            &d,
            2.5,
            random_field(&mut rng, &d, 1.0),
            random_field(&mut rng, &d, 1.0),
            ForcingSpec::Zero,
            1.0,
        )
        .unwrap();
        let traj = mol_integrate(&g, &d, &spec, 1e-3, &[]).unwrap();
        let series = energy_decay_check(&traj, &g, &d).unwrap();
        assert!(series.is_nonincreasing(1e-10));
        let e0 = series.energies[0];
        assert!(*series.energies.last().unwrap() <= e0 * (1.0 + 1e-10));
    }
}

#[test]
fn energy_check_refuses_forcing() {
    let (g, d) = p5();
    let spec = ProblemSpec::new(
        &d,
        2.0,
        VertexField::zeros(5),
        VertexField::zeros(5),
        ForcingSpec::Constant { amplitude: spike(5, 2, 1.0) },
        1.0,
    )
    .unwrap();
    let traj = mol_integrate(&g, &d, &spec, 1e-3, &[]).unwrap();
    assert!(matches!(energy_decay_check(&traj, &g, &d), Err(Error::ForcingNotZero)));
}

#[test]
fn scalar_envelope_decreases() {
    let (g, d, spec) = scalar_problem(10.0);
    let traj = mol_integrate(&g, &d, &spec, 1e-3, &[]).unwrap();
    let values: Vec<f64> = (0..=10_000).map(|k| traj.at(k as f64 * 1e-3).unwrap().0[2].abs()).collect();
    let peaks: Vec<f64> = values
        .windows(3)
        .filter(|w| w[1] >= w[0] && w[1] >= w[2] && w[1] > 1e-8)
        .map(|w| w[1])
        .collect();
    assert!(peaks.len() >= 2);
    for p in peaks.windows(2) {
        assert!(p[1] <= p[0] * (1.0 + 1e-9));
    }
}

#[test]
fn perturbed_data_stays_close() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (g, d) = random_instance(&mut rng, 6, 12);
    let g0 = random_field(&mut rng, &d, 1.0);
    let h0 = random_field(&mut rng, &d, 1.0);
    let forcing = ForcingSpec::Sinusoid { amplitude: random_field(&mut rng, &d, 1.0), angular_frequency: 2.0 };
    let a = ProblemSpec::new(&d, 3.0, g0.clone(), h0.clone(), forcing.clone(), 1.0).unwrap();
    let b = ProblemSpec::new(
        &d,
        3.0,
        g0.add(&random_field(&mut rng, &d, 1e-3)),
        h0.add(&random_field(&mut rng, &d, 1e-3)),
        forcing,
        1.0,
    )
    .unwrap();
    let n = 50;
    let grid = make_grid(1.0, n).unwrap();
    let sa = run(&g, &d, &a, &grid, 1e-12).unwrap();
    let sb = run(&g, &d, &b, &grid, 1e-12).unwrap();
    let series = difference_energy(&g, &d, &sa, &sb).unwrap();
    let delta = 1.0 / n as f64;
    for &e in &series {
        assert!(e <= series[0] * (1.0 + 10.0 * delta));
    }
    assert_eq!(series[0], energy(&g, &d, &sa.u(0).sub(sb.u(0)), &sa.w(0).sub(sb.w(0))).unwrap());
}

#[test]
fn refined_grid_is_closer_to_reference() {
    let (g, d, spec) = scalar_problem(1.0);
    let times = uniform_samples(1.0, 100);
    let traj = mol_integrate(&g, &d, &spec, 1e-4, &times).unwrap();
    let err = |n: usize| {
        let seq = run(&g, &d, &spec, &make_grid(1.0, n).unwrap(), 1e-12).unwrap();
        oracle_error(&g, &d, &seq, &traj, &times).unwrap()
    };
    let (coarse, fine) = (err(512), err(1024));
    assert!(fine.u < coarse.u);
    assert!(fine.w < coarse.w);
}

#[test]
fn zero_problem_has_zero_error() {
    let (g, d) = p6();
    let spec =
        ProblemSpec::new(&d, 2.0, VertexField::zeros(6), VertexField::zeros(6), ForcingSpec::Zero, 1.0).unwrap();
    let times = uniform_samples(1.0, 20);
    let traj = mol_integrate(&g, &d, &spec, 1e-3, &times).unwrap();
    let seq = run(&g, &d, &spec, &make_grid(1.0, 8).unwrap(), 1e-10).unwrap();
    let e = oracle_error(&g, &d, &seq, &traj, &times).unwrap();
    assert_eq!((e.u, e.w), (0.0, 0.0));
}

#[test]
fn convergence_distances_shrink() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..3 {
        let (g, d) = random_instance(&mut rng, 6, 12);
        let spec = ProblemSpec::new(
            &d,
            2.0,
            random_field(&mut rng, &d, 1.0),
            random_field(&mut rng, &d, 1.0),
            ForcingSpec::Zero,
            1.0,
        )
        .unwrap();
        let rep = convergence_study(&g, &d, &spec, &[16, 32, 64, 128], 100, 1e-10).unwrap();
        assert_eq!(rep.distances.len(), 4);
        for w in rep.distances.windows(2) {
            assert!(w[1] <= 1.05 * w[0]);
        }
    }
}

#[test]
fn convergence_rejects_unnested_levels() {
    let (g, d, spec) = scalar_problem(1.0);
    assert!(convergence_study(&g, &d, &spec, &[16, 24], 50, 1e-10).is_err());
    assert!(convergence_study(&g, &d, &spec, &[16, 32], 1, 1e-10).is_err());
}
