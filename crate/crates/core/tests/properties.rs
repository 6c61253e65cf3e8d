use std::f64::consts::PI;

use proptest::prelude::*;
use qsum::ansatz::{build_lvqe, build_qaoa, build_xy_qaoa, lvqe_param_count, AnsatzParams, MixerTopology};
use qsum::optimize::{pareto_frontier, select_qaoa_params, GridPoint};
use qsum::textprep::cosine_similarity;
use qsum::{bits, Gate, ProblemInstance, Statevector};

fn gate_strategy(n: usize) -> impl Strategy<Value = Gate> {
    let q = 0..n;
    let pair = (0..n, 1..n).prop_map(move |(a, d)| (a, (a + d) % n));
    let theta = -4.0..4.0f64;
    prop_oneof![
        (q.clone(), theta.clone()).prop_map(|(qubit, theta)| Gate::Rx { qubit, theta }),
        (q.clone(), theta.clone()).prop_map(|(qubit, theta)| Gate::Ry { qubit, theta }),
        (q.clone(), theta.clone()).prop_map(|(qubit, theta)| Gate::Rz { qubit, theta }),
        q.prop_map(|qubit| Gate::H { qubit }),
        pair.clone().prop_map(|(control, target)| Gate::Cnot { control, target }),
        (pair.clone(), theta.clone()).prop_map(|((a, b), theta)| Gate::Rzz { a, b, theta }),
        (pair, theta).prop_map(|((a, b), theta)| Gate::RxxPlusYy { a, b, theta }),
    ]
}

fn weight_sector(state: &Statevector, m: u32) -> f64 {
    state.probabilities().iter().enumerate().filter(|(x, _)| (*x as u64).count_ones() == m).map(|(_, p)| p).sum()
}

fn grid_points() -> impl Strategy<Value = Vec<GridPoint>> {
    prop::collection::vec((0..20u32, 0..20u32, 0.0..3.0f64, 0.0..3.0f64), 1..40).prop_map(|v| {
        v.into_iter()
            .map(|(ar, icp, gamma, beta)| GridPoint {
                gamma,
                beta,
                approx_ratio: Some(ar as f64 / 20.0),
                in_constraint_prob: icp as f64 / 20.0,
                penalized_expectation: 0.0,
            })
            .collect()
    })
}

fn dominates(a: &GridPoint, b: &GridPoint) -> bool {
    let (ara, arb) = (a.approx_ratio.unwrap(), b.approx_ratio.unwrap());
    ara >= arb && a.in_constraint_prob >= b.in_constraint_prob && (ara > arb || a.in_constraint_prob > b.in_constraint_prob)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gates_preserve_norm(gates in prop::collection::vec(gate_strategy(5), 1..40)) {
        let mut s = Statevector::zero(5).unwrap();
        for g in &gates {
            s.apply(g).unwrap();
        }
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn xy_mixer_and_phases_conserve_weight(
        m in 1usize..5,
        ops in prop::collection::vec((0usize..5, 0usize..4, -4.0..4.0f64), 1..30),
    ) {
        // start from a basis state of weight m, apply only RXXplusYY, RZ, RZZ
        let mut s = Statevector::zero(5).unwrap();
        for q in 0..m {
            s.apply(&Gate::Ry { qubit: q, theta: PI }).unwrap();
        }
        for (a, kind, theta) in ops {
            let b = (a + 1) % 5;
            let g = match kind {
                0 | 1 => Gate::RxxPlusYy { a, b, theta },
                2 => Gate::Rz { qubit: a, theta },
                _ => Gate::Rzz { a, b, theta },
            };
            s.apply(&g).unwrap();
        }
        prop_assert!((weight_sector(&s, m as u32) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn phase_leaves_probabilities(seed in 0u64..1000, gamma in -5.0..5.0f64) {
        let inst = ProblemInstance::random(5, 2, 0.075, seed).unwrap();
        let mut s = Statevector::zero(5).unwrap();
        for q in 0..5 {
            s.apply(&Gate::Ry { qubit: q, theta: 0.3 + q as f64 }).unwrap();
        }
        let before = s.probabilities();
        s.apply_phase(&inst.penalized_form().diagonal(), gamma).unwrap();
        for (a, b) in before.iter().zip(s.probabilities()) {
            prop_assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn cosine_is_symmetric_and_bounded(
        u in prop::collection::vec(-10.0..10.0f64, 6),
        v in prop::collection::vec(-10.0..10.0f64, 6),
    ) {
        prop_assume!(u.iter().any(|&x| x != 0.0) && v.iter().any(|&x| x != 0.0));
        let a = cosine_similarity(&u, &v).unwrap();
        prop_assert_eq!(a, cosine_similarity(&v, &u).unwrap());
        prop_assert!((-1.0..=1.0).contains(&a));
    }

    #[test]
    fn penalized_coefficients_reproduce_objective(seed in 0u64..1000, n in 3usize..8, x in 0u64..256) {
        let inst = ProblemInstance::random(n, n / 2, 0.075, seed).unwrap();
        let x = x & ((1 << n) - 1);
        let coeffs = inst.penalized_coefficients();
        let dropped = inst.gamma() * (n / 2) as f64 * (n / 2) as f64;
        prop_assert!((coeffs.evaluate(x) - (inst.penalized_value(x) + dropped)).abs() < 1e-9);
        let wt = bits::weight(x) as f64;
        let expected = inst.raw_value(x) - inst.gamma() * (wt - (n / 2) as f64).powi(2);
        prop_assert!((inst.penalized_value(x) - expected).abs() < 1e-9);
    }

    #[test]
    fn gamma_rule_separates_feasible_strings(seed in 0u64..10_000, n in 3usize..10) {
        let inst = ProblemInstance::random(n, 1 + seed as usize % (n - 1), 0.075, seed).unwrap();
        let (mut min_in, mut max_out) = (f64::INFINITY, f64::NEG_INFINITY);
        for x in 0..1u64 << n {
            let v = inst.penalized_value(x);
            if inst.is_feasible(x) { min_in = min_in.min(v) } else { max_out = max_out.max(v) }
        }
        prop_assert!(min_in >= max_out);
    }

    #[test]
    fn raw_objective_is_permutation_invariant(seed in 0u64..1000, x in 0u64..64, perm in Just((0..6).collect::<Vec<usize>>()).prop_shuffle()) {
        let inst = ProblemInstance::random(6, 3, 0.075, seed).unwrap();
        let mu: Vec<f64> = perm.iter().map(|&i| inst.mu()[i]).collect();
        let beta: Vec<Vec<f64>> = perm.iter().map(|&i| perm.iter().map(|&j| inst.beta()[i][j]).collect()).collect();
        let permuted = ProblemInstance::new(mu, beta, inst.lambda(), 3).unwrap();
        // bit k of y is bit perm[k] of x
        let y = (0..6).filter(|&k| bits::bit(x, perm[k])).fold(0u64, |acc, k| acc | 1 << k);
        prop_assert!((inst.raw_value(x) - permuted.raw_value(y)).abs() < 1e-12);
    }

    #[test]
    fn frontier_is_an_antichain_covering_the_grid(points in grid_points()) {
        let frontier = pareto_frontier(&points).unwrap();
        for a in &frontier {
            for b in &frontier {
                prop_assert!(!dominates(a, b));
            }
        }
        for w in frontier.windows(2) {
            prop_assert!(w[0].in_constraint_prob <= w[1].in_constraint_prob);
            prop_assert!(w[0].approx_ratio >= w[1].approx_ratio);
        }
        for p in &points {
            prop_assert!(frontier.contains(p) || frontier.iter().any(|f| dominates(f, p)));
        }
    }

    #[test]
    fn selection_lies_on_filtered_frontier(points in grid_points(), threshold in 0.0..0.8f64) {
        let filtered: Vec<GridPoint> = points.iter().filter(|p| p.in_constraint_prob > threshold).copied().collect();
        match select_qaoa_params(&points, threshold) {
            Ok(sel) => prop_assert!(pareto_frontier(&filtered).unwrap().contains(&sel)),
            Err(_) => prop_assert!(filtered.is_empty()),
        }
    }

    #[test]
    fn qaoa_beta_has_period_pi(seed in 0u64..500, gamma in 0.0..3.0f64, beta in 0.0..3.0f64) {
        let inst = ProblemInstance::random(5, 2, 0.075, seed).unwrap();
        let a = build_qaoa(&inst, &AnsatzParams::qaoa(vec![gamma], vec![beta])).unwrap().simulate().unwrap();
        let b = build_qaoa(&inst, &AnsatzParams::qaoa(vec![gamma], vec![beta + PI])).unwrap().simulate().unwrap();
        for (p, q) in a.probabilities().iter().zip(b.probabilities()) {
            prop_assert!((p - q).abs() < 1e-12);
        }
    }

    #[test]
    fn lvqe_pi_rotations_prepare_basis_state(x in 0u64..128, p in 1usize..3) {
        let n = 7;
        let mut thetas = vec![0.0; lvqe_param_count(n, p)];
        for q in 0..n {
            if bits::bit(x, q) {
                thetas[q] = PI;
            }
        }
        let s = build_lvqe(n, p, &thetas).unwrap().simulate().unwrap();
        prop_assert!((s.probabilities()[x as usize] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn xy_qaoa_stays_in_constraint(seed in 0u64..500, p in 1usize..4, ring in any::<bool>(),
        angles in prop::collection::vec(-PI..PI, 6)) {
        let inst = ProblemInstance::random(6, 1 + seed as usize % 5, 0.075, seed).unwrap();
        let params = AnsatzParams::xy_qaoa(angles[..p].to_vec(), angles[3..3 + p].to_vec());
        let topology = if ring { MixerTopology::Ring } else { MixerTopology::Path };
        let s = build_xy_qaoa(&inst, &params, topology).unwrap().simulate().unwrap();
        prop_assert!(weight_sector(&s, inst.m() as u32) >= 1.0 - 1e-9);
    }
}
