use std::path::Path;

use qsum::ansatz::{gate_stats, AnsatzKind, AnsatzParams, GateConvention};
use qsum::metrics::MetricReport;
use qsum::optimize::{
    self, grid_csv, grid_search_qaoa, max_penalized_expectation, pareto_frontier, select_qaoa_params, AnsatzBuilder,
    GridAxis, GridEvaluation, SearchConfig, SearchObjective,
};
use qsum::problem::{ProblemFile, Provenance};
use qsum::rouge::{self, RougeError};
use qsum::simulator::{run_noisy, Outcomes};
use qsum::textprep::{self, SentenceCorpus};
use qsum::{NoiseModel, ProblemInstance, SampleSet};
use serde::Deserialize;

use crate::args::{Cli, Command, GridArgs, IngestArgs, NoiseChoice, ObjectiveChoice, ParetoArgs, RougeArgs, SolveArgs, SweepArgs, TextArgs};
use crate::error::{read_file, write_file, CliError};
use crate::report::{
    to_json, DistributionRecord, OracleSummary, ParameterSource, ParetoReport, RougeReport, SolveReport, SCHEMA_VERSION,
};

/// Runs one command. The main output goes to its `--out` file when given
/// (and an empty string is returned), otherwise it is returned for stdout.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Ingest(a) => emit(&ingest(a)?, a.out.as_deref()),
        Command::Solve(a) => emit(&to_json(&solve(a)?), a.out.as_deref()),
        Command::Pareto(a) => emit(&pareto(a)?, a.out.as_deref()),
        Command::Rouge(a) => emit(&rouge_cmd(a)?, a.out.as_deref()),
        Command::SweepLambda(a) => emit(&sweep_lambda(a)?, a.out.as_deref()),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<String, CliError> {
    match out {
        Some(path) => write_file(path, text).map(|_| String::new()),
        None => Ok(text.to_string()),
    }
}

/// Article, centralities and similarities turned into a problem file.
pub fn build_problem(article: &Path, text: &TextArgs, lambda: f64) -> Result<(ProblemFile, SentenceCorpus), CliError> {
    let corpus = textprep::split_sentences(&read_file(article)?).map_err(|e| CliError::text(article, e))?;
    if text.m == 0 || text.m >= corpus.len() {
        return Err(qsum::problem::ProblemError::InfeasibleConstraint { m: text.m, n: corpus.len() }.into());
    }
    let mode = text.idf_mode;
    let (embeddings, source, tf_substituted) = match &text.embeddings {
        Some(path) => {
            let e = textprep::load_embeddings(path).map_err(|e| CliError::text(path, e))?;
            e.check_count(&corpus).map_err(|e| CliError::text(path, e))?;
            (e, "file", Vec::new())
        }
        None => {
            let fb = textprep::fallback_embedding(&corpus, mode);
            (fb.embeddings, "tfidf-fallback", fb.tf_substituted)
        }
    };
    let beta = textprep::similarity_matrix(&embeddings).map_err(|e| CliError::text(article, e))?;
    let instance = ProblemInstance::new(corpus.centralities(mode), beta, lambda, text.m)?;
    let mut file = instance.to_file();
    file.provenance = Some(Provenance {
        article: article.display().to_string(),
        sentences: corpus.raw_sentences().to_vec(),
        idf_mode: mode,
        embeddings: source.to_string(),
        tf_substituted,
    });
    Ok((file, corpus))
}

fn ingest(a: &IngestArgs) -> Result<String, CliError> {
    let (file, _) = build_problem(&a.article, &a.text, a.lambda)?;
    Ok(file.to_json() + "\n")
}

fn load_problem(path: &Path) -> Result<ProblemInstance, CliError> {
    Ok(ProblemFile::from_json(&read_file(path)?)?.into_instance()?)
}

fn noise_model(a: &SolveArgs) -> Result<Option<NoiseModel>, CliError> {
    let overrides = a.p1.is_some() || a.p2.is_some() || a.pspam.is_some();
    let base = match a.noise {
        NoiseChoice::None if overrides => {
            return Err(CliError::Usage("--p1/--p2/--pspam need --noise h1 or --noise custom".into()))
        }
        NoiseChoice::None => return Ok(None),
        NoiseChoice::H1 => NoiseModel::h1(),
        NoiseChoice::Custom => NoiseModel::noiseless(),
    };
    let model = NoiseModel::new(a.p1.unwrap_or(base.p1), a.p2.unwrap_or(base.p2), a.pspam.unwrap_or(base.p_spam))?;
    Ok(Some(model))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ParamsFile {
    Bare(AnsatzParams),
    Report { params: AnsatzParams },
}

fn load_params(path: &Path) -> Result<AnsatzParams, CliError> {
    let parsed: ParamsFile = serde_json::from_str(&read_file(path)?).map_err(|e| CliError::Report {
        context: path.display().to_string(),
        message: format!("expected ansatz parameters or a solve report: {e}"),
    })?;
    Ok(match parsed {
        ParamsFile::Bare(p) | ParamsFile::Report { params: p } => p,
    })
}

fn grid_axes(g: &GridArgs) -> (GridAxis, GridAxis) {
    (g.grid_gamma.unwrap_or_else(GridAxis::default_qaoa), g.grid_beta.unwrap_or_else(GridAxis::default_qaoa))
}

fn grid_evaluation(g: &GridArgs, seed: u64) -> Result<GridEvaluation, CliError> {
    match g.grid_shots {
        None => Ok(GridEvaluation::Exact),
        Some(0) => Err(CliError::Usage("--grid-shots must be positive".into())),
        Some(shots) => Ok(GridEvaluation::Sampled { shots, seed }),
    }
}

fn reference_tokens(path: &Path) -> Result<Vec<String>, CliError> {
    let tokens = textprep::tokenize(&read_file(path)?);
    if tokens.is_empty() {
        return Err(RougeError::EmptyReference.into());
    }
    Ok(tokens)
}

fn article_corpus(path: &Path, n: usize) -> Result<SentenceCorpus, CliError> {
    let corpus = textprep::split_sentences(&read_file(path)?).map_err(|e| CliError::text(path, e))?;
    if corpus.len() != n {
        return Err(CliError::Report {
            context: path.display().to_string(),
            message: format!("article has {} sentences, problem has {n}", corpus.len()),
        });
    }
    Ok(corpus)
}

/// Keeps search starts and measurement shots on unrelated streams.
fn search_seed(seed: u64) -> u64 {
    seed.rotate_left(32) ^ 0x9E37_79B9_7F4A_7C15
}

pub fn solve(a: &SolveArgs) -> Result<SolveReport, CliError> {
    let instance = load_problem(&a.problem)?;
    let (n, m, kind) = (instance.n(), instance.m(), a.algorithm);
    let noise = noise_model(a)?;
    if a.exact && noise.is_some() {
        return Err(CliError::Usage("--exact evaluates the noiseless state; drop --noise".into()));
    }
    if !a.exact && a.shots == 0 {
        return Err(CliError::Usage("--shots must be positive".into()));
    }
    let file_params = a.params.as_deref().map(load_params).transpose()?;
    let p = file_params.as_ref().map_or(a.p, |fp| fp.p);
    let builder = AnsatzBuilder::new(&instance, kind, p, a.mixer_topology)?;
    if let Some(fp) = &file_params {
        fp.validate(kind, n)?;
    }
    let text_inputs = match (&a.article, &a.reference) {
        (Some(article), Some(reference)) => Some((article_corpus(article, n)?, reference_tokens(reference)?)),
        _ => None,
    };
    let oracle = instance.brute_force()?;

    let (params, parameter_source) = match file_params {
        Some(fp) => (fp, ParameterSource::File { path: a.params.as_ref().expect("params path").display().to_string() }),
        None if kind == AnsatzKind::Qaoa && p == 1 => {
            let (gamma, beta) = grid_axes(&a.grid);
            let evaluation = grid_evaluation(&a.grid, search_seed(a.seed))?;
            let points = grid_search_qaoa(&instance, &gamma.values(), &beta.values(), evaluation)?;
            let selected = select_qaoa_params(&points, a.grid.icp_threshold)?;
            (
                AnsatzParams::qaoa(vec![selected.gamma], vec![selected.beta]),
                ParameterSource::Grid { gamma, beta, evaluation, icp_threshold: a.grid.icp_threshold, selected },
            )
        }
        None => {
            let mut config = SearchConfig::new(kind, n, search_seed(a.seed));
            config.topology = a.mixer_topology;
            config.budget_per_start = a.budget;
            if let Some(s) = a.starts {
                config.n_starts = s;
            }
            config.objective = match a.objective {
                None => SearchObjective::default_for(kind),
                Some(ObjectiveChoice::Penalized) => SearchObjective::Penalized,
                Some(ObjectiveChoice::Raw) => SearchObjective::Raw,
                Some(ObjectiveChoice::ApproxRatio) => SearchObjective::ApproxRatio { icp_floor: a.grid.icp_threshold },
            };
            let found = optimize::optimize_ansatz(&instance, kind, p, &config)?;
            let source = ParameterSource::Multistart {
                objective: config.objective,
                starts: config.n_starts,
                budget_per_start: config.budget_per_start,
                evaluations: found.run.evaluations,
                best_value: found.run.best_value,
            };
            (found.params, source)
        }
    };

    let circuit = builder.circuit(&params)?;
    if let Some(path) = &a.dump_circuit {
        write_file(path, &circuit.dump())?;
    }
    let stats = gate_stats(&circuit, GateConvention::CnotDecomposed);

    let (samples, distribution, outcomes): (Option<SampleSet>, Option<DistributionRecord>, Box<dyn Outcomes>) =
        if a.exact {
            let dist = circuit.simulate()?.distribution();
            (None, Some(DistributionRecord::from_exact(&dist)), Box::new(dist))
        } else {
            let set = run_noisy(&circuit, &noise.unwrap_or_else(NoiseModel::noiseless), a.shots, a.seed)?;
            (Some(set.clone()), None, Box::new(set))
        };
    let metrics = MetricReport::evaluate(outcomes.as_ref(), &instance, &oracle);
    let rouge = text_inputs
        .map(|(corpus, reference)| rouge::weighted_rouge(outcomes.as_ref(), &corpus, m, &reference))
        .transpose()?;

    Ok(SolveReport {
        schema_version: SCHEMA_VERSION,
        algorithm: kind,
        n,
        m,
        p,
        params,
        parameter_source,
        mixer_topology: (kind == AnsatzKind::XyQaoa).then_some(a.mixer_topology),
        shots: (!a.exact).then_some(a.shots),
        seed: a.seed,
        noise,
        metrics,
        gate_stats: stats,
        oracle: OracleSummary::new(&oracle, n),
        rouge,
        samples,
        distribution,
    })
}

fn pareto(a: &ParetoArgs) -> Result<String, CliError> {
    let instance = load_problem(&a.problem)?;
    let (gamma, beta) = grid_axes(&a.grid);
    let evaluation = grid_evaluation(&a.grid, a.seed)?;
    let points = grid_search_qaoa(&instance, &gamma.values(), &beta.values(), evaluation)?;
    if let Some(path) = &a.csv {
        write_file(path, &grid_csv(&points))?;
    }
    let report = ParetoReport {
        schema_version: SCHEMA_VERSION,
        n: instance.n(),
        m: instance.m(),
        gamma,
        beta,
        evaluation,
        points: points.len(),
        icp_threshold: a.grid.icp_threshold,
        frontier: pareto_frontier(&points)?,
        selected: select_qaoa_params(&points, a.grid.icp_threshold).ok(),
        max_penalized_expectation: max_penalized_expectation(&points),
    };
    Ok(to_json(&report))
}

#[derive(Deserialize)]
struct DistributionSource {
    n: usize,
    m: usize,
    #[serde(default)]
    samples: Option<SampleSet>,
    #[serde(default)]
    distribution: Option<DistributionRecord>,
}

fn rouge_cmd(a: &RougeArgs) -> Result<String, CliError> {
    let bad = |message: String| CliError::Report { context: a.report.display().to_string(), message };
    let src: DistributionSource = serde_json::from_str(&read_file(&a.report)?).map_err(|e| bad(e.to_string()))?;
    let corpus = article_corpus(&a.article, src.n)?;
    let reference = reference_tokens(&a.reference)?;
    let scores = match (&src.samples, &src.distribution) {
        (Some(set), _) => rouge::weighted_rouge(set, &corpus, src.m, &reference)?,
        (None, Some(dist)) => rouge::weighted_rouge(&dist.to_outcomes().map_err(bad)?, &corpus, src.m, &reference)?,
        (None, None) => return Err(bad("report has neither samples nor distribution".into())),
    };
    Ok(to_json(&RougeReport { schema_version: SCHEMA_VERSION, m: src.m, scores }))
}

fn sweep_lambda(a: &SweepArgs) -> Result<String, CliError> {
    let (file, corpus) = build_problem(&a.article, &a.text, qsum::DEFAULT_LAMBDA)?;
    let reference = reference_tokens(&a.reference)?;
    let instance = file.into_instance()?;
    let points = rouge::lambda_sweep(&instance, &corpus, &reference, &a.lambda_grid.values())?;
    let mut out = String::from("lambda,rouge1_f,rouge2_f,rougeL_f\n");
    for p in points {
        out.push_str(&format!("{:?},{:?},{:?},{:?}\n", p.lambda, p.scores.rouge1_f, p.scores.rouge2_f, p.scores.rouge_l_f));
    }
    Ok(out)
}
