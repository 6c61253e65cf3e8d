//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::Parser;
use qsum::ansatz::{
    build_dicke, build_lvqe, build_qaoa, build_xy_qaoa, gate_stats, lvqe_param_count, xy_qaoa_layers, AnsatzKind,
    AnsatzParams, GateConvention, MixerTopology,
};
use qsum::metrics::{approximation_ratio, hamming_distance_distribution, in_constraint_probability};
use qsum::optimize::{
    grid_search_qaoa, max_penalized_expectation, optimize_ansatz, pareto_frontier, select_qaoa_params, GridAxis,
    GridEvaluation, GridPoint, SearchConfig, DEFAULT_ICP_THRESHOLD,
};
use qsum::rouge::{rouge_l, rouge_n};
use qsum::simulator::{run_noisy, DiagonalCost};
use qsum::textprep::{cosine_similarity, IdfMode, SentenceCorpus};
use qsum::{bits, NoiseModel, ProblemInstance};
use qsum_cli::Cli;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(a: f64, b: f64, tol: f64, what: &str) -> Result<(), String> {
    ensure((a - b).abs() <= tol, || format!("{what}: {a} vs {b}"))
}

fn dicke_exactness() -> Check {
    let start = Instant::now();
    let mut cases = 0;
    for n in 2..=14 {
        for m in 1..n {
            let s = build_dicke(n, m).map_err(|e| e.to_string())?.simulate().map_err(|e| e.to_string())?;
            let amp = 1.0 / (bits::binomial(n as u64, m as u64) as f64).sqrt();
            let mut outside = 0.0;
            for (x, a) in s.amplitudes().iter().enumerate() {
                if bits::weight(x as u64) as usize == m {
                    close(a.norm(), amp, 1e-9, &format!("|amplitude| n={n} m={m} x={x}"))?;
                } else {
                    outside += a.norm_sqr();
                }
            }
            ensure(outside < 1e-9, || format!("n={n} m={m}: {outside} outside the weight-m subspace"))?;
            cases += 1;
        }
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(60), || format!("took {t:?}"))?;
    Ok(format!("{cases} (n, m) pairs exact in {:.2}s", t.as_secs_f64()))
}

fn constraint_preservation() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 1.0;
    for draw in 0..100 {
        let n = rng.gen_range(2..=14);
        let m = rng.gen_range(1..n);
        let p = rng.gen_range(1..=3);
        let inst = ProblemInstance::random(n, m, 0.075, draw).map_err(|e| e.to_string())?;
        let angles: Vec<f64> = (0..2 * p).map(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI)).collect();
        let params = AnsatzParams::xy_qaoa(angles[..p].to_vec(), angles[p..].to_vec());
        let topology = if draw % 2 == 0 { MixerTopology::Path } else { MixerTopology::Ring };
        let s = build_xy_qaoa(&inst, &params, topology).map_err(|e| e.to_string())?.simulate().map_err(|e| e.to_string())?;
        let inside: f64 = s
            .probabilities()
            .iter()
            .enumerate()
            .filter(|(x, _)| bits::weight(*x as u64) as usize == m)
            .map(|(_, p)| p)
            .sum();
        ensure(inside >= 1.0 - 1e-9, || format!("draw {draw} (n={n}, m={m}, p={p}): in-constraint mass {inside}"))?;
        worst = worst.min(inside);
    }
    Ok(format!("100 draws, minimum in-constraint mass 1 - {:.1e}", 1.0 - worst))
}

fn gate_counts() -> Check {
    let conv = GateConvention::CnotDecomposed;
    let mut found = Vec::new();
    for (n, qaoa_want, xy_want) in [(14, 182, 208), (20, 380, 418)] {
        let inst = ProblemInstance::random(n, n / 2 - 1, 0.075, 1).map_err(|e| e.to_string())?;
        let qaoa = build_qaoa(&inst, &AnsatzParams::qaoa(vec![0.3], vec![0.4])).map_err(|e| e.to_string())?;
        let q = gate_stats(&qaoa, conv).two_qubit_count;
        ensure(q == qaoa_want, || format!("QAOA n={n}: {q} two-qubit gates, want {qaoa_want}"))?;
        let cost = std::sync::Arc::new(DiagonalCost::new(inst.raw_form()).map_err(|e| e.to_string())?);
        let layers = xy_qaoa_layers(&cost, &AnsatzParams::xy_qaoa(vec![0.3], vec![0.4]), MixerTopology::Path)
            .map_err(|e| e.to_string())?;
        let x = gate_stats(&layers, conv).two_qubit_count;
        ensure(x == xy_want, || format!("XY-QAOA layers n={n}: {x}, want {xy_want}"))?;
        found.push(format!("QAOA {q}, XY layer {x} (n={n})"));
    }
    for (n, p, want) in [(14, 1, 26), (20, 2, 76)] {
        let c = build_lvqe(n, p, &vec![0.1; lvqe_param_count(n, p)]).map_err(|e| e.to_string())?;
        let s = gate_stats(&c, conv);
        ensure(s.two_qubit_count == want && s.two_qubit_depth == 4 * p, || {
            format!("L-VQE n={n} p={p}: {} gates depth {}, want {want} depth {}", s.two_qubit_count, s.two_qubit_depth, 4 * p)
        })?;
        found.push(format!("L-VQE {want}/depth {} (n={n})", 4 * p));
    }
    Ok(found.join("; "))
}

fn oracle_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for i in 0..20u64 {
        let n = rng.gen_range(3..=10);
        let m = rng.gen_range(1..n);
        let inst = ProblemInstance::random(n, m, 0.075, 100 + i).map_err(|e| e.to_string())?;
        let pen = DiagonalCost::new(inst.penalized_form()).map_err(|e| e.to_string())?;
        let raw = DiagonalCost::new(inst.raw_form()).map_err(|e| e.to_string())?;
        let mut angle = || rng.gen_range(0.0..std::f64::consts::TAU);
        let circuits = [
            build_qaoa(&inst, &AnsatzParams::qaoa(vec![angle(), angle()], vec![angle(), angle()])),
            build_xy_qaoa(&inst, &AnsatzParams::xy_qaoa(vec![angle()], vec![angle()]), MixerTopology::Path),
            build_lvqe(n, 1, &(0..lvqe_param_count(n, 1)).map(|_| angle()).collect::<Vec<_>>()),
        ];
        for c in circuits {
            let s = c.map_err(|e| e.to_string())?.simulate().map_err(|e| e.to_string())?;
            for (values, penalized) in [(pen.values(), true), (raw.values(), false)] {
                let sim = s.expectation_diagonal(values).map_err(|e| e.to_string())?;
                let mut direct = 0.0;
                for (x, a) in s.amplitudes().iter().enumerate() {
                    let b = bits::to_bools(x as u64, n);
                    let f = if penalized { inst.objective_penalized(&b) } else { inst.objective_raw(&b) };
                    direct += (a.re * a.re + a.im * a.im) * f.map_err(|e| e.to_string())?;
                }
                worst = worst.max((sim - direct).abs());
                close(sim, direct, 1e-9, &format!("instance {i} expectation"))?;
            }
        }
    }
    Ok(format!("60 states x 2 objectives, max deviation {worst:.1e}"))
}

fn gamma_separation() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut tightest = f64::INFINITY;
    for i in 0..50u64 {
        let n = rng.gen_range(2..=12);
        let m = rng.gen_range(1..n);
        let inst = ProblemInstance::random(n, m, 0.075, 500 + i).map_err(|e| e.to_string())?;
        let (mut min_in, mut max_out) = (f64::INFINITY, f64::NEG_INFINITY);
        for x in 0..1u64 << n {
            let v = inst.penalized_value(x);
            if inst.is_feasible(x) {
                min_in = min_in.min(v);
            } else {
                max_out = max_out.max(v);
            }
        }
        ensure(min_in >= max_out, || format!("instance {i} (n={n}, m={m}): {min_in} < {max_out}"))?;
        tightest = tightest.min(min_in - max_out);
    }
    Ok(format!("50 instances, smallest gap {tightest:.3}"))
}

struct Study {
    instances: Vec<ProblemInstance>,
    grids: Vec<Vec<GridPoint>>,
    elapsed_grid: Duration,
}

fn study() -> Result<Study, String> {
    let start = Instant::now();
    let axis = GridAxis::default_qaoa().values();
    let mut instances = Vec::new();
    let mut grids = Vec::new();
    for seed in 0..10 {
        let inst = ProblemInstance::random(10, 4, 0.075, 1000 + seed).map_err(|e| e.to_string())?;
        grids.push(grid_search_qaoa(&inst, &axis, &axis, GridEvaluation::Exact).map_err(|e| e.to_string())?);
        instances.push(inst);
    }
    Ok(Study { instances, grids, elapsed_grid: start.elapsed() })
}

fn random_ar(inst: &ProblemInstance) -> Result<f64, String> {
    let o = inst.brute_force().map_err(|e| e.to_string())?;
    approximation_ratio(o.mean_feasible, o.f_min, o.f_max).map_err(|e| e.to_string())
}

fn beat_random(study: &Study) -> Check {
    let start = Instant::now();
    let mut wins = [0usize; 3];
    let mut margins = [f64::INFINITY; 3];
    for (k, (inst, grid)) in study.instances.iter().zip(&study.grids).enumerate() {
        let base = random_ar(inst)?;
        let qaoa = select_qaoa_params(grid, DEFAULT_ICP_THRESHOLD).map_err(|e| e.to_string())?;
        let mut ars = vec![qaoa.approx_ratio.unwrap_or(f64::NEG_INFINITY)];
        for kind in [AnsatzKind::XyQaoa, AnsatzKind::Lvqe] {
            let cfg = SearchConfig::new(kind, 10, 77 + k as u64);
            let out = optimize_ansatz(inst, kind, 1, &cfg).map_err(|e| e.to_string())?;
            ars.push(out.score.approx_ratio.unwrap_or(f64::NEG_INFINITY));
        }
        for (j, ar) in ars.iter().enumerate() {
            if *ar > base {
                wins[j] += 1;
            }
            margins[j] = margins[j].min(ar - base);
        }
    }
    let t = start.elapsed() + study.elapsed_grid;
    ensure(t < Duration::from_secs(600), || format!("took {t:?}"))?;
    ensure(wins.iter().all(|&w| w >= 9), || format!("wins out of 10 (QAOA, XY-QAOA, L-VQE): {wins:?}"))?;
    Ok(format!(
        "wins QAOA {}/10, XY-QAOA {}/10, L-VQE {}/10; smallest margins {:.3}/{:.3}/{:.3}; {:.1}s",
        wins[0], wins[1], wins[2], margins[0], margins[1], margins[2], t.as_secs_f64()
    ))
}

fn pareto_tradeoff(study: &Study) -> Check {
    let mut best_gap = f64::NEG_INFINITY;
    for (k, grid) in study.grids.iter().enumerate() {
        let frontier = pareto_frontier(grid).map_err(|e| e.to_string())?;
        for w in frontier.windows(2) {
            ensure(w[0].in_constraint_prob <= w[1].in_constraint_prob && w[0].approx_ratio >= w[1].approx_ratio, || {
                format!("instance {k}: frontier out of order")
            })?;
        }
        for a in &frontier {
            for b in &frontier {
                let (x, y) = (a.approx_ratio.unwrap(), b.approx_ratio.unwrap());
                let dominated = x >= y
                    && a.in_constraint_prob >= b.in_constraint_prob
                    && (x > y || a.in_constraint_prob > b.in_constraint_prob);
                ensure(!dominated, || format!("instance {k}: frontier is not an antichain"))?;
            }
        }
        let top = frontier.iter().filter_map(|p| p.approx_ratio).fold(f64::NEG_INFINITY, f64::max);
        let pen = max_penalized_expectation(grid).and_then(|p| p.approx_ratio).unwrap_or(f64::NEG_INFINITY);
        best_gap = best_gap.max(top - pen);
    }
    ensure(best_gap >= 0.15, || format!("largest gap between frontier max AR and penalized-expectation argmax AR is {best_gap:.3}"))?;
    Ok(format!("frontier invariants hold on 10 instances; largest AR gap {best_gap:.3}"))
}

fn noise_degradation() -> Check {
    const Z99: f64 = 2.5758;
    let shots = 10_000u64;
    let inst = ProblemInstance::random(8, 3, 0.075, 8).map_err(|e| e.to_string())?;
    let cfg = SearchConfig::new(AnsatzKind::XyQaoa, 8, 8);
    let params = optimize_ansatz(&inst, AnsatzKind::XyQaoa, 1, &cfg).map_err(|e| e.to_string())?.params;
    let circuit = build_xy_qaoa(&inst, &params, MixerTopology::Path).map_err(|e| e.to_string())?;
    let ci = |p: f64| Z99 * (p * (1.0 - p) / shots as f64).sqrt();

    let set = run_noisy(&circuit, &NoiseModel::h1(), shots, 1).map_err(|e| e.to_string())?;
    let icp = in_constraint_probability(&set, 3);
    let uniform = 56.0 / 256.0;
    ensure(icp - ci(icp) > uniform && icp + ci(icp) < 1.0, || format!("ICP {icp} ± {} vs ({uniform}, 1)", ci(icp)))?;

    let mut d0 = Vec::new();
    for p2 in [0.0, 3e-3, 3e-2] {
        let noise = NoiseModel::new(5e-5, p2, 3e-3).map_err(|e| e.to_string())?;
        let set = run_noisy(&circuit, &noise, shots, 2).map_err(|e| e.to_string())?;
        d0.push(hamming_distance_distribution(&set, 3)[&0]);
    }
    for w in d0.windows(2) {
        ensure(w[0] - ci(w[0]) > w[1] + ci(w[1]), || format!("d=0 mass not CI-separated: {d0:?}"))?;
    }
    Ok(format!("H1 ICP {icp:.4} ± {:.4}; d=0 mass {:.4} > {:.4} > {:.4}", ci(icp), d0[0], d0[1], d0[2]))
}

fn metric_fixtures() -> Check {
    let tol = 1e-12;
    let ln2 = std::f64::consts::LN_2;
    close(approximation_ratio(6.0, -2.0, 6.0).unwrap(), 1.0, tol, "AR at f_max")?;
    close(approximation_ratio(-2.0, -2.0, 6.0).unwrap(), 0.0, tol, "AR at f_min")?;
    close(approximation_ratio(4.0, -2.0, 6.0).unwrap(), 0.75, tol, "AR midpoint")?;

    close(rouge_n(&["the", "cat", "sat"], &["the", "cat", "sat"], 1).unwrap(), 1.0, tol, "ROUGE-1 identity")?;
    close(rouge_n(&["the", "cat", "sat"], &["the", "cat"], 1).unwrap(), 0.8, tol, "ROUGE-1")?;
    close(rouge_n(&["a", "b"], &["c", "d"], 1).unwrap(), 0.0, tol, "ROUGE-1 disjoint")?;
    close(rouge_l(&["a", "b", "c"], &["a", "c"]).unwrap(), 0.8, tol, "ROUGE-L")?;
    close(rouge_l(&["c", "b", "a"], &["a", "b", "c"]).unwrap(), 1.0 / 3.0, tol, "ROUGE-L reversed")?;

    let ab_ac = SentenceCorpus::from_tokens(&[vec!["a", "b"], vec!["a", "c"]]).unwrap();
    let s = IdfMode::Sentences;
    close(ab_ac.tf_idf_word("b", 0, s).unwrap(), 0.5 * ln2, tol, "tf-idf")?;
    close(ab_ac.tf_idf_word("a", 0, s).unwrap(), 0.0, tol, "tf-idf of shared word")?;
    close(ab_ac.sentence_centrality(0, s).unwrap(), 0.25 * ln2, tol, "centrality")?;
    let single = SentenceCorpus::from_tokens(&[vec!["x"], vec!["y", "z"]]).unwrap();
    close(single.sentence_centrality(0, s).unwrap(), ln2, tol, "single-token centrality")?;

    close(cosine_similarity(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 1.0, tol, "cosine identity")?;
    close(cosine_similarity(&[1.0, 0.0], &[0.0, 3.0]).unwrap(), 0.0, tol, "cosine orthogonal")?;
    close(cosine_similarity(&[1.0, 0.0], &[1.0, 1.0]).unwrap(), 1.0 / 2f64.sqrt(), tol, "cosine 45 degrees")?;
    Ok("approximation ratio, ROUGE-1/L, tf-idf, centrality and cosine fixtures exact to 1e-12".into())
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let problem = dir.path().join("problem.json");
    let inst = ProblemInstance::random(8, 3, 0.075, 21).map_err(|e| e.to_string())?;
    std::fs::write(&problem, inst.to_file().to_json()).map_err(|e| e.to_string())?;
    let p = problem.to_str().unwrap();
    let invocations: [&[&str]; 3] = [
        &["solve", p, "--algorithm", "qaoa", "--grid-gamma", "0:3:12", "--grid-beta", "0:3:12", "--grid-shots", "300", "--noise", "h1"],
        &["solve", p, "--algorithm", "xy-qaoa", "--starts", "4", "--budget", "120", "--noise", "h1", "--shots", "3000"],
        &["solve", p, "--algorithm", "lvqe", "--starts", "4", "--budget", "150", "--noise", "custom", "--p2", "0.01"],
    ];
    let mut bytes = 0;
    for args in invocations {
        let mut outputs = Vec::new();
        for threads in ["1", "4", "8"] {
            let mut argv = vec!["qsum", "--threads", threads];
            argv.extend_from_slice(args);
            argv.extend(["--seed", "13"]);
            let cli = Cli::try_parse_from(argv).map_err(|e| e.to_string())?;
            outputs.push(qsum_cli::run(&cli).map_err(|e| e.to_string())?);
        }
        ensure(outputs.windows(2).all(|w| w[0] == w[1]), || format!("{} reports differ across thread counts", args[3]))?;
        bytes += outputs[0].len();
    }
    Ok(format!("3 solve invocations byte-identical under 1/4/8 threads ({bytes} bytes each set)"))
}

fn main() -> ExitCode {
    let mut study_cache: Option<Result<Study, String>> = None;
    let mut with_study = |f: fn(&Study) -> Check| -> Check {
        match study_cache.get_or_insert_with(study) {
            Ok(s) => f(s),
            Err(e) => Err(e.clone()),
        }
    };
    let mut results: Vec<(u32, &str, Check)> = Vec::new();
    let run = |f: &mut dyn FnMut() -> Check| -> Check {
        catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or(e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        })
    };
    results.push((1, "Dicke exactness", run(&mut dicke_exactness)));
    results.push((2, "constraint preservation", run(&mut constraint_preservation)));
    results.push((3, "gate-count reproduction", run(&mut gate_counts)));
    results.push((4, "oracle equivalence", run(&mut oracle_equivalence)));
    results.push((5, "Gamma separation", run(&mut gamma_separation)));
    results.push((6, "beat random", run(&mut || with_study(beat_random))));
    results.push((7, "Pareto trade-off", run(&mut || with_study(pareto_tradeoff))));
    results.push((8, "noise degradation", run(&mut noise_degradation)));
    results.push((9, "metric fixtures", run(&mut metric_fixtures)));
    results.push((10, "determinism", run(&mut determinism)));

    let mut failed = 0;
    for (id, name, r) in &results {
        match r {
            Ok(detail) => println!("PASS criterion {id:>2} {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {id:>2} {name}: {why}");
            }
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
