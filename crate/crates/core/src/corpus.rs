//! Plain-text corpus, query and relevance-judgment formats.
//!
//! Corpora and query sets are JSONL (`{"doc_id": .., "text": ..}` and
//! `{"query_id": .., "text": ..}`) or two-column TSV (`id<TAB>text`).
//! Relevance judgments are whitespace separated `query_id doc_id relevance`
//! rows; the four-column TREC layout (`query_id iter doc_id relevance`) is
//! accepted as well.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TextFormat {
    #[default]
    Jsonl,
    Tsv,
}

impl TextFormat {
    /// Picks TSV for `.tsv`/`.tab` extensions and JSONL otherwise.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("tsv") | Some("tab") => TextFormat::Tsv,
            _ => TextFormat::Jsonl,
        }
    }
}

impl FromStr for TextFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "jsonl" | "json" => Ok(TextFormat::Jsonl),
            "tsv" => Ok(TextFormat::Tsv),
            other => Err(Error::Invalid(format!("unknown text format `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub doc_id: String,
    pub text: String,
}

/// Ordered document collection. Position in `docs` is the dense document index.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    docs: Vec<Document>,
    index_of: HashMap<String, usize>,
}

impl Corpus {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a corpus from documents, rejecting duplicate ids.
    pub fn from_documents(docs: impl IntoIterator<Item = Document>) -> Result<Self> {
        let mut corpus = Corpus::new();
        for (i, doc) in docs.into_iter().enumerate() {
            corpus.push_at_line(doc, i + 1)?;
        }
        Ok(corpus)
    }

    /// Convenience constructor from `(id, text)` pairs.
    pub fn from_pairs<I, S, T>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, T)>,
        S: Into<String>,
        T: Into<String>,
    {
        Self::from_documents(pairs.into_iter().map(|(id, text)| Document {
            doc_id: id.into(),
            text: text.into(),
        }))
    }

    pub fn push(&mut self, doc: Document) -> Result<usize> {
        let line = self.docs.len() + 1;
        self.push_at_line(doc, line)
    }

    fn push_at_line(&mut self, doc: Document, line: usize) -> Result<usize> {
        if doc.doc_id.is_empty() {
            return Err(Error::parse(line, "empty doc_id"));
        }
        if let Some(&first) = self.index_of.get(&doc.doc_id) {
            return Err(Error::DuplicateId {
                id: doc.doc_id,
                line,
                first_line: first + 1,
            });
        }
        let idx = self.docs.len();
        self.index_of.insert(doc.doc_id.clone(), idx);
        self.docs.push(doc);
        Ok(idx)
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn docs(&self) -> &[Document] {
        &self.docs
    }

    pub fn get(&self, idx: usize) -> Option<&Document> {
        self.docs.get(idx)
    }

    pub fn index_of(&self, doc_id: &str) -> Option<usize> {
        self.index_of.get(doc_id).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Document> {
        self.docs.iter()
    }

    pub fn write(&self, path: &Path, format: TextFormat) -> Result<()> {
        let rows = self.docs.iter().map(|d| (d.doc_id.as_str(), d.text.as_str()));
        write_records(path, format, "doc_id", rows)
    }
}

/// Loads a corpus. Record order in the file defines document indices.
pub fn load_corpus(path: &Path, format: TextFormat) -> Result<Corpus> {
    let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut corpus = Corpus::new();
    for (line_no, id, text) in parse_records(&content, format, "doc_id")? {
        corpus.push_at_line(Document { doc_id: id, text }, line_no)?;
    }
    Ok(corpus)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Query {
    pub query_id: String,
    pub text: String,
}

#[derive(Debug, Clone, Default)]
pub struct QuerySet {
    entries: Vec<Query>,
}

impl QuerySet {
    pub fn from_pairs<I, S, T>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, T)>,
        S: Into<String>,
        T: Into<String>,
    {
        let mut seen: HashMap<String, usize> = HashMap::new();
        let mut entries = Vec::new();
        for (i, (id, text)) in pairs.into_iter().enumerate() {
            let query = Query {
                query_id: id.into(),
                text: text.into(),
            };
            if let Some(&first) = seen.get(&query.query_id) {
                return Err(Error::DuplicateId {
                    id: query.query_id,
                    line: i + 1,
                    first_line: first,
                });
            }
            seen.insert(query.query_id.clone(), i + 1);
            entries.push(query);
        }
        Ok(Self { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Query> {
        self.entries.iter()
    }

    pub fn entries(&self) -> &[Query] {
        &self.entries
    }

    /// Keeps the first `n` queries.
    pub fn truncate(&mut self, n: usize) {
        self.entries.truncate(n);
    }

    pub fn write(&self, path: &Path, format: TextFormat) -> Result<()> {
        let rows = self
            .entries
            .iter()
            .map(|q| (q.query_id.as_str(), q.text.as_str()));
        write_records(path, format, "query_id", rows)
    }
}

pub fn load_queries(path: &Path, format: TextFormat) -> Result<QuerySet> {
    let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut entries = Vec::new();
    for (line_no, id, text) in parse_records(&content, format, "query_id")? {
        if let Some(&first) = seen.get(&id) {
            return Err(Error::DuplicateId {
                id,
                line: line_no,
                first_line: first,
            });
        }
        seen.insert(id.clone(), line_no);
        entries.push(Query { query_id: id, text });
    }
    Ok(QuerySet { entries })
}

/// Graded relevance judgments, `query_id -> doc_id -> relevance`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QrelSet {
    judgments: BTreeMap<String, BTreeMap<String, u32>>,
    /// Rows that overwrote an earlier judgment for the same pair.
    pub duplicate_rows: usize,
}

impl QrelSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts a judgment; a repeated pair keeps the new value and bumps
    /// `duplicate_rows`.
    pub fn insert(&mut self, query_id: &str, doc_id: &str, relevance: u32) {
        let prev = self
            .judgments
            .entry(query_id.to_string())
            .or_default()
            .insert(doc_id.to_string(), relevance);
        if prev.is_some() {
            self.duplicate_rows += 1;
        }
    }

    pub fn get(&self, query_id: &str) -> Option<&BTreeMap<String, u32>> {
        self.judgments.get(query_id)
    }

    pub fn relevance(&self, query_id: &str, doc_id: &str) -> u32 {
        self.judgments
            .get(query_id)
            .and_then(|m| m.get(doc_id))
            .copied()
            .unwrap_or(0)
    }

    /// Number of judged documents with relevance > 0.
    pub fn num_relevant(&self, query_id: &str) -> usize {
        self.judgments
            .get(query_id)
            .map(|m| m.values().filter(|&&r| r > 0).count())
            .unwrap_or(0)
    }

    pub fn query_ids(&self) -> impl Iterator<Item = &str> {
        self.judgments.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.judgments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.judgments.is_empty()
    }

    /// Errors if a judged query is missing from `queries`.
    pub fn check_against(&self, queries: &QuerySet) -> Result<()> {
        let known: std::collections::HashSet<&str> =
            queries.iter().map(|q| q.query_id.as_str()).collect();
        match self.query_ids().find(|id| !known.contains(id)) {
            Some(id) => Err(Error::Invalid(format!(
                "qrels reference query `{id}` which is not in the query set"
            ))),
            None => Ok(()),
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        for (q, docs) in &self.judgments {
            for (d, rel) in docs {
                writeln!(w, "{q}\t{d}\t{rel}").map_err(|e| Error::io(path, e))?;
            }
        }
        w.flush().map_err(|e| Error::io(path, e))
    }
}

pub fn load_qrels(path: &Path) -> Result<QrelSet> {
    let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_qrels(&content)
}

pub fn parse_qrels(content: &str) -> Result<QrelSet> {
    let mut qrels = QrelSet::new();
    for (i, raw) in content.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let (qid, did, rel) = match fields.as_slice() {
            [q, d, r] => (*q, *d, *r),
            [q, _iter, d, r] => (*q, *d, *r),
            _ => {
                return Err(Error::parse(
                    line_no,
                    format!("expected 3 columns, found {}", fields.len()),
                ))
            }
        };
        let rel: u32 = rel.parse().map_err(|_| {
            Error::parse(
                line_no,
                format!("relevance `{rel}` is not a non-negative integer"),
            )
        })?;
        qrels.insert(qid, did, rel);
    }
    Ok(qrels)
}

#[derive(Deserialize)]
struct JsonRecord {
    #[serde(alias = "doc_id", alias = "query_id", alias = "_id", alias = "id")]
    id: String,
    #[serde(default)]
    text: String,
}

fn parse_records(content: &str, format: TextFormat, id_field: &str) -> Result<Vec<(usize, String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in content.lines().enumerate() {
        let line_no = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        match format {
            TextFormat::Jsonl => {
                let rec: JsonRecord = serde_json::from_str(raw).map_err(|e| {
                    Error::parse(line_no, format!("malformed record (need `{id_field}`, `text`): {e}"))
                })?;
                out.push((line_no, rec.id, rec.text));
            }
            TextFormat::Tsv => {
                let (id, text) = raw
                    .split_once('\t')
                    .ok_or_else(|| Error::parse(line_no, "expected `id<TAB>text`"))?;
                out.push((line_no, id.to_string(), text.to_string()));
            }
        }
    }
    Ok(out)
}

fn write_records<'a>(
    path: &Path,
    format: TextFormat,
    id_field: &str,
    rows: impl Iterator<Item = (&'a str, &'a str)>,
) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for (id, text) in rows {
        match format {
            TextFormat::Jsonl => {
                let mut obj = serde_json::Map::new();
                obj.insert(id_field.to_string(), id.into());
                obj.insert("text".to_string(), text.into());
                serde_json::to_writer(&mut w, &obj)
                    .map_err(|e| Error::io(path, std::io::Error::other(e)))?;
                writeln!(w).map_err(|e| Error::io(path, e))?;
            }
            TextFormat::Tsv => {
                if text.contains(['\t', '\n']) {
                    return Err(Error::Invalid(format!(
                        "record `{id}` contains a tab or newline and cannot be written as TSV"
                    )));
                }
                writeln!(w, "{id}\t{text}").map_err(|e| Error::io(path, e))?;
            }
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_tmp(content: &str, name: &str) -> (tempfile::TempDir, std::path::PathBuf) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(name);
        fs::write(&path, content).unwrap();
        (dir, path)
    }

    #[test]
    fn corpus_order_follows_file() {
        let (_d, p) = write_tmp(
            "{\"doc_id\":\"a\",\"text\":\"x\"}\n{\"doc_id\":\"b\",\"text\":\"y\"}\n{\"doc_id\":\"c\",\"text\":\"\"}\n",
            "c.jsonl",
        );
        let c = load_corpus(&p, TextFormat::Jsonl).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.index_of("a"), Some(0));
        assert_eq!(c.index_of("b"), Some(1));
        assert_eq!(c.index_of("c"), Some(2));
    }

    #[test]
    fn duplicate_id_cites_second_line() {
        let rows = ["x", "y", "z", "w", "x"]
            .iter()
            .map(|id| format!("{{\"doc_id\":\"{id}\",\"text\":\"t\"}}"))
            .collect::<Vec<_>>()
            .join("\n");
        let (_d, p) = write_tmp(&rows, "c.jsonl");
        match load_corpus(&p, TextFormat::Jsonl) {
            Err(Error::DuplicateId { id, line, first_line }) => {
                assert_eq!(id, "x");
                assert_eq!(line, 5);
                assert_eq!(first_line, 1);
            }
            other => panic!("expected duplicate id error, got {other:?}"),
        }
    }

    #[test]
    fn empty_file_is_empty_corpus() {
        let (_d, p) = write_tmp("", "c.jsonl");
        assert!(load_corpus(&p, TextFormat::Jsonl).unwrap().is_empty());
    }

    #[test]
    fn malformed_record_reports_line() {
        let (_d, p) = write_tmp("{\"doc_id\":\"a\",\"text\":\"x\"}\n{\"text\":\"y\"}\n", "c.jsonl");
        match load_corpus(&p, TextFormat::Jsonl) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tsv_corpus() {
        let (_d, p) = write_tmp("d1\tfoo bar\nd2\tbaz\n", "c.tsv");
        let c = load_corpus(&p, TextFormat::from_path(&p)).unwrap();
        assert_eq!(c.get(1).unwrap().text, "baz");
    }

    #[test]
    fn qrels_basic() {
        let q = parse_qrels("q1\td1\t1\nq1 d2 0\n").unwrap();
        assert_eq!(q.relevance("q1", "d1"), 1);
        assert_eq!(q.get("q1").unwrap().len(), 2);
        assert_eq!(q.num_relevant("q1"), 1);
        assert_eq!(q.duplicate_rows, 0);
    }

    #[test]
    fn qrels_negative_is_error() {
        match parse_qrels("q1\td1\t1\nq1\td2\t-1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn qrels_last_wins() {
        let q = parse_qrels("q1\td1\t1\nq1\td1\t0\n").unwrap();
        assert_eq!(q.relevance("q1", "d1"), 0);
        assert_eq!(q.duplicate_rows, 1);
    }

    #[test]
    fn qrels_trec_four_columns() {
        let q = parse_qrels("q1 0 d1 2\n").unwrap();
        assert_eq!(q.relevance("q1", "d1"), 2);
    }

    #[test]
    fn corpus_roundtrip_is_idempotent() {
        let c = Corpus::from_pairs([("a", "x \"quoted\""), ("b", ""), ("c", "tab\there")]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p1 = dir.path().join("1.jsonl");
        c.write(&p1, TextFormat::Jsonl).unwrap();
        let c2 = load_corpus(&p1, TextFormat::Jsonl).unwrap();
        assert_eq!(c.docs(), c2.docs());
        let p2 = dir.path().join("2.jsonl");
        c2.write(&p2, TextFormat::Jsonl).unwrap();
        assert_eq!(fs::read(&p1).unwrap(), fs::read(&p2).unwrap());
    }

    #[test]
    fn qrels_must_reference_known_queries() {
        let qs = QuerySet::from_pairs([("q1", "x")]).unwrap();
        let q = parse_qrels("q2\td1\t1\n").unwrap();
        assert!(q.check_against(&qs).is_err());
    }
}
