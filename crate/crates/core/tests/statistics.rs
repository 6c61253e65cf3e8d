use qsum::ansatz::{build_dicke, build_xy_qaoa, AnsatzParams, MixerTopology};
use qsum::metrics::{hamming_distance_distribution, in_constraint_probability};
use qsum::optimize::{grid_search_qaoa, GridEvaluation};
use qsum::simulator::{run_noisy, sample};
use qsum::{bits, NoiseModel, ProblemInstance};

#[test]
fn sampled_grid_agrees_with_exact() {
    let inst = ProblemInstance::random(8, 3, 0.075, 17).unwrap();
    let (g, b) = ([0.05, 0.4], [0.3, 1.9]);
    let exact = grid_search_qaoa(&inst, &g, &b, GridEvaluation::Exact).unwrap();
    let shots = 1_000_000;
    let sampled = grid_search_qaoa(&inst, &g, &b, GridEvaluation::Sampled { shots, seed: 5 }).unwrap();
    for (e, s) in exact.iter().zip(&sampled) {
        let p = e.in_constraint_prob;
        let sigma = (p * (1.0 - p) / shots as f64).sqrt();
        assert!((s.in_constraint_prob - p).abs() <= 3.0 * sigma, "{} vs {p}", s.in_constraint_prob);
        let (ea, sa) = (e.approx_ratio.unwrap(), s.approx_ratio.unwrap());
        assert!((ea - sa).abs() < 5e-3, "{ea} vs {sa}");
    }
}

#[test]
fn sample_frequencies_match_probabilities() {
    let inst = ProblemInstance::random(6, 2, 0.075, 3).unwrap();
    let state = build_xy_qaoa(&inst, &AnsatzParams::xy_qaoa(vec![1.1], vec![0.6]), MixerTopology::Path)
        .unwrap()
        .simulate()
        .unwrap();
    let shots = 1_000_000u64;
    let set = sample(&state, shots, 42).unwrap();
    for (x, p) in state.probabilities().iter().enumerate() {
        let sigma = (p * (1.0 - p) / shots as f64).sqrt();
        let f = set.count(x as u64) as f64 / shots as f64;
        assert!((f - p).abs() <= 4.0 * sigma + 1e-12, "x={x}: {f} vs {p}");
    }
}

#[test]
fn dicke_fourteen_eight_is_exact() {
    let s = build_dicke(14, 8).unwrap().simulate().unwrap();
    let amp = 1.0 / (bits::binomial(14, 8) as f64).sqrt();
    let mut outside = 0.0;
    for (x, a) in s.amplitudes().iter().enumerate() {
        if bits::weight(x as u64) == 8 {
            assert!((a.norm() - amp).abs() < 1e-12);
        } else {
            outside += a.norm_sqr();
        }
    }
    assert!(outside < 1e-9);
}

#[test]
fn noisy_dicke_leaks_out_of_constraint() {
    // Dicke(6,3): default noise pushes ICP below 1 but keeps it far above uniform
    let c = build_dicke(6, 3).unwrap();
    let shots = 20_000;
    let set = run_noisy(&c, &NoiseModel::h1(), shots, 8).unwrap();
    let icp = in_constraint_probability(&set, 3);
    let uniform = 20.0 / 64.0;
    let sigma = (icp * (1.0 - icp) / shots as f64).sqrt();
    assert!(icp < 1.0 - 3.0 * sigma && icp > uniform + 0.5, "{icp}");
    let hist = hamming_distance_distribution(&set, 3);
    assert!(hist[&1] > hist[&2] && hist[&2] >= hist[&3], "{hist:?} {icp}");
}
