//! ROUGE-1/2/L F-scores and distribution-weighted summary evaluation.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits;
use crate::problem::{ProblemError, ProblemInstance};
use crate::simulator::Outcomes;
use crate::textprep::SentenceCorpus;

#[derive(Debug, Error, PartialEq)]
pub enum RougeError {
    #[error("reference summary is empty")]
    EmptyReference,
    #[error("distribution has no in-constraint mass")]
    NoInConstraintMass,
    #[error("bitstring selects sentence {0}, corpus has fewer sentences")]
    SelectionOutOfRange(usize),
    #[error(transparent)]
    Problem(#[from] ProblemError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RougeScores {
    pub rouge1_f: f64,
    pub rouge2_f: f64,
    #[serde(rename = "rougeL_f")]
    pub rouge_l_f: f64,
}

fn f1(overlap: usize, pred: usize, reference: usize) -> f64 {
    if overlap == 0 {
        return 0.0;
    }
    let p = overlap as f64 / pred as f64;
    let r = overlap as f64 / reference as f64;
    2.0 * p * r / (p + r)
}

fn ngram_counts<S: AsRef<str>>(tokens: &[S], order: usize) -> HashMap<Vec<&str>, usize> {
    let mut m = HashMap::new();
    if tokens.len() >= order {
        for w in tokens.windows(order) {
            *m.entry(w.iter().map(AsRef::as_ref).collect()).or_insert(0) += 1;
        }
    }
    m
}

/// N-gram F1 with clipped multiset overlap. When neither side has an n-gram
/// (both shorter than `order`) the score is 1 for identical inputs, else 0.
pub fn rouge_n<S: AsRef<str>>(pred: &[S], reference: &[S], order: usize) -> Result<f64, RougeError> {
    assert!(order >= 1, "n-gram order starts at 1");
    if reference.is_empty() {
        return Err(RougeError::EmptyReference);
    }
    let p = ngram_counts(pred, order);
    let r = ngram_counts(reference, order);
    let (np, nr): (usize, usize) = (p.values().sum(), r.values().sum());
    if nr == 0 || np == 0 {
        let same = np == nr && pred.iter().map(AsRef::as_ref).eq(reference.iter().map(AsRef::as_ref));
        return Ok(if same { 1.0 } else { 0.0 });
    }
    let overlap = r.iter().map(|(g, &c)| c.min(p.get(g).copied().unwrap_or(0))).sum();
    Ok(f1(overlap, np, nr))
}

fn lcs_len<S: AsRef<str>>(a: &[S], b: &[S]) -> usize {
    let mut row = vec![0usize; b.len() + 1];
    for x in a {
        let mut diag = 0;
        for (j, y) in b.iter().enumerate() {
            let up = row[j + 1];
            row[j + 1] = if x.as_ref() == y.as_ref() { diag + 1 } else { up.max(row[j]) };
            diag = up;
        }
    }
    row[b.len()]
}

/// Longest-common-subsequence F1.
pub fn rouge_l<S: AsRef<str>>(pred: &[S], reference: &[S]) -> Result<f64, RougeError> {
    if reference.is_empty() {
        return Err(RougeError::EmptyReference);
    }
    Ok(f1(lcs_len(pred, reference), pred.len(), reference.len()))
}

pub fn score<S: AsRef<str>>(pred: &[S], reference: &[S]) -> Result<RougeScores, RougeError> {
    Ok(RougeScores {
        rouge1_f: rouge_n(pred, reference, 1)?,
        rouge2_f: rouge_n(pred, reference, 2)?,
        rouge_l_f: rouge_l(pred, reference)?,
    })
}

/// Tokens of the selected sentences, in document order.
pub fn summary_tokens(corpus: &SentenceCorpus, selection: u64) -> Result<Vec<&str>, RougeError> {
    let n = corpus.len();
    if n < 64 && selection >> n != 0 {
        return Err(RougeError::SelectionOutOfRange(63 - selection.leading_zeros() as usize));
    }
    Ok((0..n)
        .filter(|&i| bits::bit(selection, i))
        .flat_map(|i| corpus.sentences()[i].iter().map(String::as_str))
        .collect())
}

/// Probability-weighted mean of the scores of every in-constraint summary,
/// normalized by the in-constraint mass.
pub fn weighted_rouge<S: AsRef<str>>(
    outcomes: &dyn Outcomes,
    corpus: &SentenceCorpus,
    m: usize,
    reference: &[S],
) -> Result<RougeScores, RougeError> {
    if reference.is_empty() {
        return Err(RougeError::EmptyReference);
    }
    let mut selected = Vec::new();
    outcomes.for_each_outcome(&mut |x, w| {
        if bits::weight(x) as usize == m {
            selected.push((x, w));
        }
    });
    let mass: f64 = selected.iter().map(|(_, w)| w).sum();
    if mass <= 0.0 {
        return Err(RougeError::NoInConstraintMass);
    }
    let reference: Vec<&str> = reference.iter().map(AsRef::as_ref).collect();
    let mut acc = RougeScores { rouge1_f: 0.0, rouge2_f: 0.0, rouge_l_f: 0.0 };
    for (x, w) in selected {
        let s = score(&summary_tokens(corpus, x)?, &reference)?;
        acc.rouge1_f += w * s.rouge1_f;
        acc.rouge2_f += w * s.rouge2_f;
        acc.rouge_l_f += w * s.rouge_l_f;
    }
    Ok(RougeScores {
        rouge1_f: acc.rouge1_f / mass,
        rouge2_f: acc.rouge2_f / mass,
        rouge_l_f: acc.rouge_l_f / mass,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub lambda: f64,
    /// Optimal feasible selection at this `λ`.
    pub selection: u64,
    pub scores: RougeScores,
}

/// For each `λ`, re-solves the instance exactly and scores the optimal
/// summary.
pub fn lambda_sweep<S: AsRef<str>>(
    instance: &ProblemInstance,
    corpus: &SentenceCorpus,
    reference: &[S],
    lambdas: &[f64],
) -> Result<Vec<SweepPoint>, RougeError> {
    let reference: Vec<&str> = reference.iter().map(AsRef::as_ref).collect();
    lambdas
        .iter()
        .map(|&lambda| {
            let oracle = instance.with_lambda(lambda)?.brute_force()?;
            let scores = score(&summary_tokens(corpus, oracle.argmax)?, &reference)?;
            Ok(SweepPoint { lambda, selection: oracle.argmax, scores })
        })
        .collect()
}
