//! Offline history dumps and the timestamp-scoped prefix-count index.
//!
//! Commits and closed pull requests are loaded from JSONL dumps, then
//! bucketed per granularity key into time-sorted event lists. A query for
//! "events under key K strictly before t" is a binary search over the list.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::BufRead;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::granularity::{keys_of_files, normalize_path, GranularityKey, Level};
use crate::jsonl::{decode, read_objects, Line};

/// Unix seconds, UTC.
pub type Timestamp = i64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Commit {
    pub sha: String,
    pub author: String,
    pub timestamp: Timestamp,
    pub files: Vec<String>,
    pub is_merge: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub repo: Option<String>,
}

/// A closed pull request; the reviewer set holds everyone who commented.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PullRequest {
    pub number: u64,
    pub closed_at: Timestamp,
    pub files: Vec<String>,
    pub reviewers: BTreeSet<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub repo: Option<String>,
}

/// One review comment. Fields not named here survive in `extra`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReviewComment {
    pub id: String,
    pub repo: String,
    pub pr_number: u64,
    pub reviewer: Option<String>,
    pub timestamp: Timestamp,
    pub file_path: String,
    pub code_hunk: String,
    pub comment_text: String,
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

impl ReviewComment {
    /// Reviewer id when the comment is traceable to an account.
    pub fn traceable_reviewer(&self) -> Option<&str> {
        self.reviewer.as_deref().filter(|r| !r.trim().is_empty())
    }

    /// Decodes a comment from a JSON object, checking field invariants.
    pub fn from_line(line: &Line) -> Result<Self> {
        let comment: ReviewComment = decode(line)?;
        check_timestamp(comment.timestamp, line.number)?;
        if normalize_path(&comment.file_path).is_empty() {
            return Err(Error::Parse { line: line.number, message: "file_path is empty".into() });
        }
        Ok(comment)
    }

    /// JSON object form, preserving field order for pass-through fields.
    pub fn to_object(&self) -> Map<String, Value> {
        match serde_json::to_value(self).expect("review comment serializes") {
            Value::Object(map) => map,
            _ => unreachable!("review comment serializes to an object"),
        }
    }
}

fn check_timestamp(ts: Timestamp, line: usize) -> Result<()> {
    if ts < 0 {
        return Err(Error::Parse { line, message: format!("timestamp {ts} is negative") });
    }
    Ok(())
}

fn normalize_files(files: &[String], line: usize) -> Result<Vec<String>> {
    files
        .iter()
        .map(|f| {
            let n = normalize_path(f);
            if n.is_empty() {
                Err(Error::Parse { line, message: format!("empty file path {f:?}") })
            } else {
                Ok(n)
            }
        })
        .collect()
}

/// Loads a commit dump. Merge commits and non-merge commits without any
/// changed file are dropped; input order is preserved.
pub fn load_commits<R: BufRead>(reader: R) -> Result<Vec<Commit>> {
    let mut seen: HashSet<(Option<String>, String)> = HashSet::new();
    let mut out = Vec::new();
    for line in read_objects(reader)? {
        let mut commit: Commit = decode(&line)?;
        check_timestamp(commit.timestamp, line.number)?;
        if !seen.insert((commit.repo.clone(), commit.sha.clone())) {
            return Err(Error::DuplicateKey { what: "commit sha", key: commit.sha });
        }
        if commit.is_merge {
            continue;
        }
        commit.files = normalize_files(&commit.files, line.number)?;
        if commit.files.is_empty() {
            continue;
        }
        out.push(commit);
    }
    Ok(out)
}

#[derive(Deserialize)]
struct RawPullRequest {
    number: u64,
    closed_at: Option<Timestamp>,
    files: Vec<String>,
    reviewers: Vec<String>,
    #[serde(default)]
    repo: Option<String>,
}

/// Loads a closed pull request dump, deduplicating reviewer lists.
pub fn load_pull_requests<R: BufRead>(reader: R) -> Result<Vec<PullRequest>> {
    let mut seen: HashSet<(Option<String>, u64)> = HashSet::new();
    let mut out = Vec::new();
    for line in read_objects(reader)? {
        let raw: RawPullRequest = decode(&line)?;
        let closed_at = raw.closed_at.ok_or_else(|| Error::Schema {
            line: line.number,
            message: format!("pull request {} has no closed_at; only closed pull requests are accepted", raw.number),
        })?;
        check_timestamp(closed_at, line.number)?;
        if !seen.insert((raw.repo.clone(), raw.number)) {
            return Err(Error::DuplicateKey { what: "pull request number", key: raw.number.to_string() });
        }
        out.push(PullRequest {
            number: raw.number,
            closed_at,
            files: normalize_files(&raw.files, line.number)?,
            reviewers: raw.reviewers.into_iter().filter(|r| !r.is_empty()).collect(),
            repo: raw.repo,
        });
    }
    Ok(out)
}

pub fn load_comments<R: BufRead>(reader: R) -> Result<Vec<ReviewComment>> {
    read_objects(reader)?.iter().map(ReviewComment::from_line).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    Commits,
    Pulls,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selector<'a> {
    Total,
    Developer(&'a str),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct KeyEvents {
    total: Vec<Timestamp>,
    by_developer: BTreeMap<String, Vec<Timestamp>>,
}

impl KeyEvents {
    fn push<'a>(&mut self, ts: Timestamp, developers: impl IntoIterator<Item = &'a str>) {
        self.total.push(ts);
        for dev in developers {
            match self.by_developer.get_mut(dev) {
                Some(list) => list.push(ts),
                None => {
                    self.by_developer.insert(dev.to_string(), vec![ts]);
                }
            }
        }
    }

    fn seal(&mut self) {
        self.total.sort_unstable();
        for list in self.by_developer.values_mut() {
            list.sort_unstable();
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct EventTable(BTreeMap<String, KeyEvents>);

impl EventTable {
    fn bucket(&mut self, key: &str) -> &mut KeyEvents {
        if !self.0.contains_key(key) {
            self.0.insert(key.to_string(), KeyEvents::default());
        }
        self.0.get_mut(key).expect("bucket just inserted")
    }

    fn seal(&mut self) {
        self.0.values_mut().for_each(KeyEvents::seal);
    }
}

/// Immutable per-level index of commit and closed pull request events.
///
/// A commit touching several files under one key is recorded once for that
/// key. Event lists are sorted by timestamp once the index is built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HistoryIndex {
    level: Level,
    repo: String,
    commits: EventTable,
    pulls: EventTable,
}

impl HistoryIndex {
    pub fn build<'a>(
        repo: &str,
        level: Level,
        commits: impl IntoIterator<Item = &'a Commit>,
        pulls: impl IntoIterator<Item = &'a PullRequest>,
    ) -> Self {
        let mut commit_table = EventTable::default();
        for commit in commits {
            for key in keys_of_files(&commit.files, level, repo) {
                commit_table.bucket(&key.key).push(commit.timestamp, [commit.author.as_str()]);
            }
        }
        let mut pull_table = EventTable::default();
        for pr in pulls {
            for key in keys_of_files(&pr.files, level, repo) {
                pull_table.bucket(&key.key).push(pr.closed_at, pr.reviewers.iter().map(String::as_str));
            }
        }
        commit_table.seal();
        pull_table.seal();
        Self { level, repo: repo.to_string(), commits: commit_table, pulls: pull_table }
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn repo(&self) -> &str {
        &self.repo
    }

    /// Number of distinct keys with at least one event of either kind.
    pub fn key_count(&self) -> usize {
        self.commits.0.keys().chain(self.pulls.0.keys()).collect::<BTreeSet<_>>().len()
    }

    /// Number of events under `key` with timestamp strictly before `t`.
    ///
    /// Keys from another level, or absent from history, count 0.
    pub fn count_before(&self, key: &GranularityKey, t: Timestamp, selector: Selector<'_>, kind: EventKind) -> usize {
        debug_assert_eq!(key.level, self.level, "index queried with a key of another level");
        if key.level != self.level {
            return 0;
        }
        let table = match kind {
            EventKind::Commits => &self.commits,
            EventKind::Pulls => &self.pulls,
        };
        let Some(events) = table.0.get(&key.key) else {
            return 0;
        };
        let list = match selector {
            Selector::Total => &events.total,
            Selector::Developer(dev) => match events.by_developer.get(dev) {
                Some(list) => list,
                None => return 0,
            },
        };
        list.partition_point(|&ts| ts < t)
    }
}

/// The three per-level indices of one repository.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelIndices {
    repo: String,
    levels: [HistoryIndex; 3],
}

impl LevelIndices {
    pub fn build<'a>(
        repo: &str,
        commits: impl IntoIterator<Item = &'a Commit> + Clone + Sync,
        pulls: impl IntoIterator<Item = &'a PullRequest> + Clone + Sync,
    ) -> Self {
        let build = |level| HistoryIndex::build(repo, level, commits.clone(), pulls.clone());
        let (repo_index, (sys_index, pkg_index)) = rayon::join(
            || build(Level::Repository),
            || rayon::join(|| build(Level::Subsystem), || build(Level::Package)),
        );
        Self { repo: repo.to_string(), levels: [repo_index, sys_index, pkg_index] }
    }

    pub fn repo(&self) -> &str {
        &self.repo
    }

    pub fn at(&self, level: Level) -> &HistoryIndex {
        &self.levels[level.slot()]
    }
}

/// Per-repository indices for a multi-repository dump.
///
/// Records carrying a `repo` field are grouped by it. Records without one
/// form a default history, which also serves comments from repositories
/// that have no dedicated history.
#[derive(Debug, Clone, Default)]
pub struct HistoryCatalog {
    repos: BTreeMap<String, LevelIndices>,
    fallback: Option<String>,
}

impl HistoryCatalog {
    pub fn build(commits: &[Commit], pulls: &[PullRequest], default_repo: &str) -> Self {
        let mut names: BTreeSet<String> = BTreeSet::new();
        let mut unlabeled = false;
        for repo in commits.iter().map(|c| &c.repo).chain(pulls.iter().map(|p| &p.repo)) {
            match repo {
                Some(name) => {
                    names.insert(name.clone());
                }
                None => unlabeled = true,
            }
        }
        if unlabeled {
            names.insert(default_repo.to_string());
        }
        let repo_of = |r: &Option<String>| r.as_deref().unwrap_or(default_repo).to_string();
        let repos = names
            .into_iter()
            .map(|name| {
                let c: Vec<&Commit> = commits.iter().filter(|c| repo_of(&c.repo) == name).collect();
                let p: Vec<&PullRequest> = pulls.iter().filter(|p| repo_of(&p.repo) == name).collect();
                let indices = LevelIndices::build(&name, c.iter().copied(), p.iter().copied());
                (name, indices)
            })
            .collect();
        Self { repos, fallback: unlabeled.then(|| default_repo.to_string()) }
    }

    /// Indices answering ownership queries for comments from `repo`.
    pub fn for_repo(&self, repo: &str) -> Option<&LevelIndices> {
        self.repos.get(repo).or_else(|| self.fallback.as_ref().and_then(|f| self.repos.get(f)))
    }

    pub fn repos(&self) -> impl Iterator<Item = &str> {
        self.repos.keys().map(String::as_str)
    }
}
