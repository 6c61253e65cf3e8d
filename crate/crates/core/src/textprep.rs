//! Sentence splitting, tf-idf centralities and cosine similarities.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TextError {
    #[error("document must contain at least 2 non-empty sentences, found {0}")]
    EmptyDocument(usize),
    #[error("word {word:?} does not occur in sentence {sentence}")]
    WordNotInSentence { word: String, sentence: usize },
    #[error("sentence index {0} out of range")]
    SentenceOutOfRange(usize),
    #[error("vector dimensions differ ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{found} embeddings supplied for {expected} sentences")]
    CountMismatch { expected: usize, found: usize },
    #[error("{0}")]
    Io(String),
}

/// What `N` means in the idf numerator `log(N / df)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IdfMode {
    /// Number of distinct tokens in the document.
    #[default]
    Words,
    /// Number of sentences (textbook tf-idf).
    Sentences,
}

impl std::str::FromStr for IdfMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "words" => Ok(Self::Words),
            "sentences" => Ok(Self::Sentences),
            other => Err(format!("unknown idf mode {other:?} (expected words|sentences)")),
        }
    }
}

/// Lowercased maximal alphanumeric runs.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// An article broken into tokenized sentences, in document order.
#[derive(Debug, Clone, PartialEq)]
pub struct SentenceCorpus {
    sentences: Vec<Vec<String>>,
    raw_sentences: Vec<String>,
    doc_freq: BTreeMap<String, usize>,
}

impl SentenceCorpus {
    pub fn from_parts(
        sentences: Vec<Vec<String>>,
        raw_sentences: Vec<String>,
    ) -> Result<Self, TextError> {
        assert_eq!(sentences.len(), raw_sentences.len());
        let kept: Vec<(Vec<String>, String)> = sentences
            .into_iter()
            .zip(raw_sentences)
            .filter(|(t, _)| !t.is_empty())
            .collect();
        if kept.len() < 2 {
            return Err(TextError::EmptyDocument(kept.len()));
        }
        let (sentences, raw_sentences): (Vec<_>, Vec<_>) = kept.into_iter().unzip();
        let mut doc_freq = BTreeMap::new();
        for s in &sentences {
            for w in s.iter().collect::<BTreeSet<_>>() {
                *doc_freq.entry(w.clone()).or_insert(0) += 1;
            }
        }
        Ok(Self { sentences, raw_sentences, doc_freq })
    }

    /// Builds a corpus straight from token lists; raw text is the tokens
    /// joined by spaces.
    pub fn from_tokens<S: AsRef<str>>(sentences: &[Vec<S>]) -> Result<Self, TextError> {
        let toks: Vec<Vec<String>> = sentences
            .iter()
            .map(|s| s.iter().map(|t| t.as_ref().to_string()).collect())
            .collect();
        let raw = toks.iter().map(|t| t.join(" ")).collect();
        Self::from_parts(toks, raw)
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn sentences(&self) -> &[Vec<String>] {
        &self.sentences
    }

    pub fn raw_sentences(&self) -> &[String] {
        &self.raw_sentences
    }

    /// Sorted distinct tokens.
    pub fn vocabulary(&self) -> impl Iterator<Item = &str> {
        self.doc_freq.keys().map(String::as_str)
    }

    pub fn vocabulary_size(&self) -> usize {
        self.doc_freq.len()
    }

    /// Number of sentences containing `w`.
    pub fn document_frequency(&self, w: &str) -> usize {
        self.doc_freq.get(w).copied().unwrap_or(0)
    }

    fn idf_numerator(&self, mode: IdfMode) -> f64 {
        match mode {
            IdfMode::Words => self.vocabulary_size() as f64,
            IdfMode::Sentences => self.len() as f64,
        }
    }

    /// `ln(N / df(w))`; `w` must occur somewhere in the corpus.
    pub fn idf(&self, w: &str, mode: IdfMode) -> f64 {
        let df = self.document_frequency(w);
        debug_assert!(df > 0);
        (self.idf_numerator(mode) / df as f64).ln()
    }

    fn sentence(&self, s: usize) -> Result<&[String], TextError> {
        self.sentences
            .get(s)
            .map(Vec::as_slice)
            .ok_or(TextError::SentenceOutOfRange(s))
    }

    /// Share of sentence `s`'s tokens equal to `w`.
    pub fn term_frequency(&self, w: &str, s: usize) -> Result<f64, TextError> {
        let toks = self.sentence(s)?;
        let f = toks.iter().filter(|t| *t == w).count();
        if f == 0 {
            return Err(TextError::WordNotInSentence { word: w.to_string(), sentence: s });
        }
        Ok(f as f64 / toks.len() as f64)
    }

    pub fn tf_idf_word(&self, w: &str, s: usize, mode: IdfMode) -> Result<f64, TextError> {
        Ok(self.term_frequency(w, s)? * self.idf(w, mode))
    }

    /// Mean tf-idf over the token occurrences of sentence `s`.
    pub fn sentence_centrality(&self, s: usize, mode: IdfMode) -> Result<f64, TextError> {
        let toks = self.sentence(s)?;
        let mut total = 0.0;
        for w in toks {
            total += self.tf_idf_word(w, s, mode)?;
        }
        Ok(total / toks.len() as f64)
    }

    pub fn centralities(&self, mode: IdfMode) -> Vec<f64> {
        (0..self.len())
            .map(|s| self.sentence_centrality(s, mode).expect("index in range"))
            .collect()
    }
}

/// Splits on `.`, `!` or `?` followed by whitespace (or the end of the text).
pub fn split_sentences(text: &str) -> Result<SentenceCorpus, TextError> {
    let mut raw = Vec::new();
    let mut start = 0;
    let mut chars = text.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        if matches!(c, '.' | '!' | '?') {
            let at_boundary = match chars.peek() {
                None => true,
                Some((_, next)) => next.is_whitespace(),
            };
            if at_boundary {
                let end = i + c.len_utf8();
                raw.push(text[start..end].trim().to_string());
                start = end;
            }
        }
    }
    if start < text.len() {
        raw.push(text[start..].trim().to_string());
    }
    let tokens = raw.iter().map(|s| tokenize(s)).collect();
    SentenceCorpus::from_parts(tokens, raw)
}

pub fn cosine_similarity(u: &[f64], v: &[f64]) -> Result<f64, TextError> {
    if u.len() != v.len() {
        return Err(TextError::DimensionMismatch(u.len(), v.len()));
    }
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let nu = u.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nv = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    if nu == 0.0 || nv == 0.0 {
        return Err(TextError::ZeroVector);
    }
    Ok((dot / (nu * nv)).clamp(-1.0, 1.0))
}

/// One vector per sentence, shared dimension, none all-zero.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingSet {
    vectors: Vec<Vec<f64>>,
}

impl EmbeddingSet {
    pub fn new(vectors: Vec<Vec<f64>>) -> Result<Self, TextError> {
        let dim = vectors.first().map_or(0, Vec::len);
        if dim == 0 {
            return Err(TextError::Parse { line: 1, message: "empty embedding".into() });
        }
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(TextError::Parse {
                    line: i + 1,
                    message: format!("expected {dim} components, found {}", v.len()),
                });
            }
            if v.iter().all(|&a| a == 0.0) {
                return Err(TextError::ZeroVector);
            }
        }
        Ok(Self { vectors })
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn check_count(&self, corpus: &SentenceCorpus) -> Result<(), TextError> {
        if self.len() != corpus.len() {
            return Err(TextError::CountMismatch { expected: corpus.len(), found: self.len() });
        }
        Ok(())
    }
}

/// One embedding per non-blank line, comma-separated decimals.
pub fn parse_embeddings(text: &str) -> Result<EmbeddingSet, TextError> {
    let mut vectors = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let v = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| TextError::Parse { line: lineno + 1, message: e.to_string() })?;
        if let Some(bad) = v.iter().find(|a| !a.is_finite()) {
            return Err(TextError::Parse {
                line: lineno + 1,
                message: format!("non-finite component {bad}"),
            });
        }
        vectors.push(v);
    }
    EmbeddingSet::new(vectors)
}

pub fn load_embeddings(path: impl AsRef<Path>) -> Result<EmbeddingSet, TextError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| TextError::Io(format!("{}: {e}", path.display())))?;
    parse_embeddings(&text)
}

/// Symmetric cosine-similarity matrix with a zero diagonal.
pub fn similarity_matrix(emb: &EmbeddingSet) -> Result<Vec<Vec<f64>>, TextError> {
    let n = emb.len();
    let mut beta = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let s = cosine_similarity(&emb.vectors[i], &emb.vectors[j])?;
            beta[i][j] = s;
            beta[j][i] = s;
        }
    }
    Ok(beta)
}

/// Bag-of-words embedding used when no external embeddings are given.
#[derive(Debug, Clone, PartialEq)]
pub struct FallbackEmbedding {
    pub embeddings: EmbeddingSet,
    /// Sentences whose tf-idf vector vanished and were given raw term
    /// frequencies instead.
    pub tf_substituted: Vec<usize>,
}

pub fn fallback_embedding(corpus: &SentenceCorpus, mode: IdfMode) -> FallbackEmbedding {
    let vocab: Vec<&str> = corpus.vocabulary().collect();
    let mut tf_substituted = Vec::new();
    let vectors = (0..corpus.len())
        .map(|s| {
            let tfidf: Vec<f64> = vocab
                .iter()
                .map(|w| corpus.tf_idf_word(w, s, mode).unwrap_or(0.0))
                .collect();
            if tfidf.iter().any(|&a| a != 0.0) {
                tfidf
            } else {
                tf_substituted.push(s);
                vocab
                    .iter()
                    .map(|w| corpus.term_frequency(w, s).unwrap_or(0.0))
                    .collect()
            }
        })
        .collect();
    FallbackEmbedding {
        embeddings: EmbeddingSet::new(vectors).expect("tf vectors are never zero"),
        tf_substituted,
    }
}
