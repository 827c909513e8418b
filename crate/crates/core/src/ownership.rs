//! Authoring code ownership (ACO) and review-specific ownership (RSO).
//!
//! Both ratios are evaluated at the timestamp of the review comment being
//! annotated: only commits and closed pull requests strictly earlier than the
//! comment count. A scope with no prior activity yields ownership 0.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::evaluation::stats::{mean_std, FieldSummary};
use crate::granularity::{key_of, GranularityKey, Level};
use crate::history::{EventKind, HistoryCatalog, HistoryIndex, LevelIndices, ReviewComment, Selector, Timestamp};

/// Ownership ratios of one reviewer at one point in time.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct OwnershipVector {
    pub aco_repo: f64,
    pub rso_repo: f64,
    pub aco_sys: f64,
    pub rso_sys: f64,
    pub aco_pkg: f64,
    pub rso_pkg: f64,
}

impl OwnershipVector {
    /// Field names in serialization order.
    pub const FIELDS: [&'static str; 6] = ["aco_repo", "rso_repo", "aco_sys", "rso_sys", "aco_pkg", "rso_pkg"];

    pub fn aco(&self, level: Level) -> f64 {
        match level {
            Level::Repository => self.aco_repo,
            Level::Subsystem => self.aco_sys,
            Level::Package => self.aco_pkg,
        }
    }

    pub fn rso(&self, level: Level) -> f64 {
        match level {
            Level::Repository => self.rso_repo,
            Level::Subsystem => self.rso_sys,
            Level::Package => self.rso_pkg,
        }
    }

    pub fn values(&self) -> [f64; 6] {
        [self.aco_repo, self.rso_repo, self.aco_sys, self.rso_sys, self.aco_pkg, self.rso_pkg]
    }

    pub fn from_values(v: [f64; 6]) -> Self {
        Self { aco_repo: v[0], rso_repo: v[1], aco_sys: v[2], rso_sys: v[3], aco_pkg: v[4], rso_pkg: v[5] }
    }

    pub fn field(&self, name: &str) -> Option<f64> {
        Self::FIELDS.iter().position(|f| *f == name).map(|i| self.values()[i])
    }

    /// Every field lies in `[0, 1]`.
    pub fn validate(&self) -> Result<()> {
        for (name, value) in Self::FIELDS.iter().zip(self.values()) {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::invalid(format!("{name} = {value} is outside [0, 1]")));
            }
        }
        Ok(())
    }

    /// Reads the six fields from a JSON object.
    pub fn from_object(object: &Map<String, Value>) -> Result<Self> {
        let mut values = [0.0; 6];
        for (slot, name) in values.iter_mut().zip(Self::FIELDS) {
            *slot = object
                .get(name)
                .and_then(Value::as_f64)
                .ok_or_else(|| Error::invalid(format!("missing or non-numeric ownership field {name}")))?;
        }
        let v = Self::from_values(values);
        v.validate()?;
        Ok(v)
    }

    /// Writes the six fields into `object`, replacing existing values in place.
    pub fn write_into(&self, object: &mut Map<String, Value>) {
        for (name, value) in Self::FIELDS.iter().zip(self.values()) {
            object.insert(name.to_string(), Value::from(value));
        }
    }
}

fn ratio(part: usize, whole: usize) -> f64 {
    if whole == 0 {
        0.0
    } else {
        part as f64 / whole as f64
    }
}

/// Share of commits under `key` before `t` that were authored by `developer`.
pub fn aco(developer: &str, key: &GranularityKey, t: Timestamp, index: &HistoryIndex) -> f64 {
    let total = index.count_before(key, t, Selector::Total, EventKind::Commits);
    let mine = index.count_before(key, t, Selector::Developer(developer), EventKind::Commits);
    ratio(mine, total)
}

/// Share of pull requests under `key` closed before `t` in which `developer`
/// commented at least once.
pub fn rso(developer: &str, key: &GranularityKey, t: Timestamp, index: &HistoryIndex) -> f64 {
    let total = index.count_before(key, t, Selector::Total, EventKind::Pulls);
    let mine = index.count_before(key, t, Selector::Developer(developer), EventKind::Pulls);
    ratio(mine, total)
}

/// All six ratios for the reviewer of `comment`, keyed by its file path.
pub fn ownership_vector(comment: &ReviewComment, indices: &LevelIndices) -> Result<OwnershipVector> {
    let reviewer = comment
        .traceable_reviewer()
        .ok_or_else(|| Error::Precondition("comment has no reviewer; run filtering first".into()))?;
    let mut values = [0.0; 6];
    for level in Level::ALL {
        let index = indices.at(level);
        let key = key_of(&comment.file_path, level, indices.repo())?;
        values[2 * level.slot()] = aco(reviewer, &key, comment.timestamp, index);
        values[2 * level.slot() + 1] = rso(reviewer, &key, comment.timestamp, index);
    }
    Ok(OwnershipVector::from_values(values))
}

/// A review comment together with its ownership annotation.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnotatedComment {
    pub comment: ReviewComment,
    pub ownership: OwnershipVector,
}

impl AnnotatedComment {
    /// The comment object with the six ownership fields appended.
    pub fn to_object(&self) -> Map<String, Value> {
        let mut object = self.comment.to_object();
        self.ownership.write_into(&mut object);
        object
    }

    pub fn from_object(object: &Map<String, Value>, line: usize) -> Result<Self> {
        let ownership =
            OwnershipVector::from_object(object).map_err(|e| Error::Schema { line, message: e.to_string() })?;
        let mut comment = ReviewComment::from_line(&crate::jsonl::Line { number: line, object: object.clone() })?;
        for field in OwnershipVector::FIELDS {
            comment.extra.shift_remove(field);
        }
        Ok(Self { comment, ownership })
    }
}

/// Per-field mean and standard deviation over an annotated dataset.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OwnershipSummary {
    pub fields: Vec<FieldSummary>,
}

impl OwnershipSummary {
    pub fn of(vectors: &[OwnershipVector]) -> Self {
        if vectors.is_empty() {
            return Self::default();
        }
        let fields = OwnershipVector::FIELDS
            .iter()
            .enumerate()
            .map(|(i, name)| {
                let column: Vec<f64> = vectors.iter().map(|v| v.values()[i]).collect();
                let (mean, std) = mean_std(&column).expect("non-empty column");
                FieldSummary { field: name.to_string(), mean, std }
            })
            .collect();
        Self { fields }
    }

    /// `field,mean,stddev` CSV with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("field,mean,stddev\n");
        for f in &self.fields {
            out.push_str(&format!("{},{},{}\n", f.field, f.mean, f.std));
        }
        out
    }
}

/// Annotates every comment, preserving order. Comments from a repository
/// without history are an error naming the comment.
pub fn annotate_dataset(
    comments: &[ReviewComment],
    catalog: &HistoryCatalog,
) -> Result<(Vec<AnnotatedComment>, OwnershipSummary)> {
    let annotated: Vec<AnnotatedComment> = comments
        .par_iter()
        .map(|comment| {
            let wrap = |source: Error| Error::Comment { id: comment.id.clone(), source: Box::new(source) };
            let indices = catalog
                .for_repo(&comment.repo)
                .ok_or_else(|| wrap(Error::Precondition(format!("no history for repository {:?}", comment.repo))))?;
            let ownership = ownership_vector(comment, indices).map_err(wrap)?;
            Ok(AnnotatedComment { comment: comment.clone(), ownership })
        })
        .collect::<Result<_>>()?;
    let vectors: Vec<OwnershipVector> = annotated.iter().map(|a| a.ownership).collect();
    let summary = OwnershipSummary::of(&vectors);
    Ok((annotated, summary))
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::history::{Commit, PullRequest};

    fn commit(author: &str, ts: i64, file: &str) -> Commit {
        Commit {
            sha: format!("{author}-{ts}-{file}"),
            author: author.into(),
            timestamp: ts,
            files: vec![file.into()],
            is_merge: false,
            repo: None,
        }
    }

    fn pull(number: u64, ts: i64, file: &str, reviewers: &[&str]) -> PullRequest {
        PullRequest {
            number,
            closed_at: ts,
            files: vec![file.into()],
            reviewers: reviewers.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>(),
            repo: None,
        }
    }

    fn comment(reviewer: Option<&str>, ts: i64, path: &str) -> ReviewComment {
        ReviewComment {
            id: format!("c{ts}"),
            repo: "r".into(),
            pr_number: 1,
            reviewer: reviewer.map(str::to_string),
            timestamp: ts,
            file_path: path.into(),
            code_hunk: String::new(),
            comment_text: "looks off".into(),
            extra: Map::new(),
        }
    }

    fn pkg(k: &str) -> GranularityKey {
        GranularityKey { level: Level::Package, key: k.into() }
    }

    #[test]
    fn aco_example() {
        let commits = [commit("A", 1, "p/x"), commit("B", 2, "p/x"), commit("A", 3, "p/y"), commit("C", 5, "p/x")];
        let index = HistoryIndex::build("r", Level::Package, &commits, &[]);
        assert_eq!(aco("A", &pkg("p"), 4, &index), 2.0 / 3.0);
        assert_eq!(aco("A", &pkg("p"), 0, &index), 0.0);

        let solo: Vec<Commit> = (1..=5).map(|t| commit("A", t, "p/x")).collect();
        let index = HistoryIndex::build("r", Level::Package, &solo, &[]);
        assert_eq!(aco("A", &pkg("p"), 10, &index), 1.0);
    }

    #[test]
    fn rso_example() {
        let pulls = [pull(1, 1, "p/x", &["A", "B"]), pull(2, 2, "p/x", &["B"]), pull(3, 3, "p/x", &["A"])];
        let index = HistoryIndex::build("r", Level::Package, &[], &pulls);
        assert_eq!(rso("A", &pkg("p"), 4, &index), 2.0 / 3.0);
        assert_eq!(rso("A", &pkg("p"), 1, &index), 0.0);

        // commenting five times in one PR still contributes a single review
        let raw = r#"{"number":1,"closed_at":1,"files":["p/x"],"reviewers":["A","A","A","A","A"]}
{"number":2,"closed_at":2,"files":["p/x"],"reviewers":["B"]}"#;
        let pulls = crate::history::load_pull_requests(raw.as_bytes()).unwrap();
        let index = HistoryIndex::build("r", Level::Package, &[], &pulls);
        assert_eq!(rso("A", &pkg("p"), 3, &index), 0.5);
    }

    #[test]
    fn vector_full_and_zero_ownership() {
        let commits = [commit("D", 1, "a/b/c.rs"), commit("D", 2, "a/b/d.rs")];
        let pulls = [pull(1, 1, "a/b/c.rs", &["D"])];
        let indices = LevelIndices::build("r", &commits, &pulls);
        let full = ownership_vector(&comment(Some("D"), 10, "a/b/e.rs"), &indices).unwrap();
        assert_eq!(full.values(), [1.0; 6]);
        let none = ownership_vector(&comment(Some("E"), 10, "a/b/e.rs"), &indices).unwrap();
        assert_eq!(none.values(), [0.0; 6]);
        let err = ownership_vector(&comment(None, 10, "a/b/e.rs"), &indices).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn annotate_preserves_order_and_summarizes() {
        let commits = [commit("A", 1, "a/x"), commit("B", 2, "b/x")];
        let catalog = HistoryCatalog::build(&commits, &[], "r");
        let comments = [comment(Some("A"), 5, "a/y"), comment(Some("B"), 6, "b/y"), comment(Some("Z"), 7, "c/y")];
        let (annotated, summary) = annotate_dataset(&comments, &catalog).unwrap();
        assert_eq!(annotated.len(), 3);
        assert_eq!(annotated[0].comment.id, "c5");
        assert_eq!(annotated[0].ownership.aco_repo, 0.5);
        assert_eq!(annotated[0].ownership.aco_sys, 1.0);
        assert_eq!(annotated[2].ownership.values(), [0.0; 6]);
        assert_eq!(summary.fields.len(), 6);
        assert!(summary.to_csv().starts_with("field,mean,stddev\naco_repo,"));

        let (empty, summary) = annotate_dataset(&[], &catalog).unwrap();
        assert!(empty.is_empty());
        assert!(summary.fields.is_empty());
    }

    #[test]
    fn annotate_reports_comment_id() {
        let catalog = HistoryCatalog::build(&[], &[], "r");
        let err = annotate_dataset(&[comment(None, 1, "a")], &catalog).unwrap_err();
        assert!(err.to_string().starts_with("comment c1"), "{err}");
    }

    #[test]
    fn object_round_trip() {
        let a = AnnotatedComment {
            comment: comment(Some("A"), 3, "a/b"),
            ownership: OwnershipVector::from_values([0.1, 0.2, 0.3, 0.4, 0.5, 2.0 / 3.0]),
        };
        let object = a.to_object();
        let keys: Vec<&str> = object.keys().map(String::as_str).collect();
        assert_eq!(&keys[keys.len() - 6..], OwnershipVector::FIELDS);
        let back = AnnotatedComment::from_object(&object, 1).unwrap();
        assert_eq!(back.ownership, a.ownership);
        assert_eq!(back.to_object(), object);
    }

    #[test]
    fn out_of_range_vector_rejected() {
        let mut object = Map::new();
        OwnershipVector::from_values([0.0, 0.0, 1.5, 0.0, 0.0, 0.0]).write_into(&mut object);
        assert!(OwnershipVector::from_object(&object).is_err());
    }
}
