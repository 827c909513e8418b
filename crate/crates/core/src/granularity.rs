//! Mapping of repository-relative file paths onto ownership scopes.
//!
//! A subsystem is the top-level directory of a path and a package is the
//! directory that immediately contains the file. Files that live at the
//! repository root map to [`ROOT_KEY`] at both levels.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Key used for files located directly at the repository root.
pub const ROOT_KEY: &str = "<root>";

/// Scope at which commits and reviews are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Level {
    #[serde(rename = "repo")]
    Repository,
    #[serde(rename = "sys")]
    Subsystem,
    #[serde(rename = "pkg")]
    Package,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::Repository, Level::Subsystem, Level::Package];

    /// Short name used in file schemas and CLI flags.
    pub fn as_str(self) -> &'static str {
        match self {
            Level::Repository => "repo",
            Level::Subsystem => "sys",
            Level::Package => "pkg",
        }
    }

    pub fn slot(self) -> usize {
        match self {
            Level::Repository => 0,
            Level::Subsystem => 1,
            Level::Package => 2,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "repo" | "repository" => Ok(Level::Repository),
            "sys" | "subsystem" => Ok(Level::Subsystem),
            "pkg" | "package" => Ok(Level::Package),
            other => Err(Error::invalid(format!("unknown granularity level {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GranularityKey {
    pub level: Level,
    pub key: String,
}

impl GranularityKey {
    pub fn repository(repo: impl Into<String>) -> Self {
        Self { level: Level::Repository, key: repo.into() }
    }
}

impl fmt::Display for GranularityKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.level, self.key)
    }
}

/// Normalizes a path from mixed tooling: backslashes become `/`, repeated
/// separators collapse, and leading `./` or `/` segments are dropped.
///
/// Case is preserved.
pub fn normalize_path(path: &str) -> String {
    let replaced = path.replace('\\', "/");
    let mut out = String::with_capacity(replaced.len());
    for segment in replaced.split('/') {
        if segment.is_empty() || (segment == "." && out.is_empty()) {
            continue;
        }
        if !out.is_empty() {
            out.push('/');
        }
        out.push_str(segment);
    }
    out
}

fn checked(path: &str) -> Result<String> {
    let normalized = normalize_path(path);
    if normalized.is_empty() {
        return Err(Error::invalid(format!("empty file path {path:?}")));
    }
    Ok(normalized)
}

/// Top-level directory of `path`.
pub fn subsystem_of(path: &str) -> Result<GranularityKey> {
    let path = checked(path)?;
    let key = match path.split_once('/') {
        Some((first, _)) => first.to_string(),
        None => ROOT_KEY.to_string(),
    };
    Ok(GranularityKey { level: Level::Subsystem, key })
}

/// Directory that immediately contains the file at `path`.
pub fn package_of(path: &str) -> Result<GranularityKey> {
    let path = checked(path)?;
    let key = match path.rsplit_once('/') {
        Some((dir, _)) => dir.to_string(),
        None => ROOT_KEY.to_string(),
    };
    Ok(GranularityKey { level: Level::Package, key })
}

/// Key of a single file at `level`; the repository level ignores the path.
pub fn key_of(path: &str, level: Level, repo: &str) -> Result<GranularityKey> {
    match level {
        Level::Repository => Ok(GranularityKey::repository(repo)),
        Level::Subsystem => subsystem_of(path),
        Level::Package => package_of(path),
    }
}

/// Distinct keys touched by a set of changed files.
///
/// Files with an empty path are skipped.
pub fn keys_of_files<S: AsRef<str>>(files: &[S], level: Level, repo: &str) -> BTreeSet<GranularityKey> {
    if level == Level::Repository {
        return BTreeSet::from([GranularityKey::repository(repo)]);
    }
    files.iter().filter_map(|f| key_of(f.as_ref(), level, repo).ok()).collect()
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn key(level: Level, k: &str) -> GranularityKey {
        GranularityKey { level, key: k.to_string() }
    }

    #[test]
    fn subsystem_examples() {
        assert_eq!(subsystem_of("arch/arm64/kernel/module.c").unwrap().key, "arch");
        assert_eq!(subsystem_of("README.md").unwrap().key, ROOT_KEY);
        assert_eq!(subsystem_of("src/main.c").unwrap().key, "src");
        assert!(subsystem_of("").is_err());
    }

    #[test]
    fn package_examples() {
        assert_eq!(package_of("arch/arm64/kernel/module.c").unwrap().key, "arch/arm64/kernel");
        assert_eq!(package_of("Makefile").unwrap().key, ROOT_KEY);
        assert_eq!(package_of("a/b.c").unwrap().key, "a");
        assert!(package_of("").is_err());
        assert!(package_of("//").is_err());
    }

    #[test]
    fn hidden_directories_are_ordinary() {
        assert_eq!(subsystem_of(".github/workflows/x.yml").unwrap().key, ".github");
        assert_eq!(package_of(".github/workflows/x.yml").unwrap().key, ".github/workflows");
    }

    #[test]
    fn normalization() {
        assert_eq!(normalize_path("./src//lib\\mod.rs"), "src/lib/mod.rs");
        assert_eq!(normalize_path("/a/b"), "a/b");
        assert_eq!(normalize_path("Src/Main.C"), "Src/Main.C");
        assert_eq!(package_of(".\\a\\\\b\\c.rs").unwrap().key, "a/b");
    }

    #[test]
    fn keys_of_files_examples() {
        let sys = keys_of_files(&["a/x.c", "a/y.c"], Level::Subsystem, "r");
        assert_eq!(sys, BTreeSet::from([key(Level::Subsystem, "a")]));
        let pkg = keys_of_files(&["a/x.c", "b/y.c"], Level::Package, "r");
        assert_eq!(pkg, BTreeSet::from([key(Level::Package, "a"), key(Level::Package, "b")]));
        let none: [&str; 0] = [];
        assert!(keys_of_files(&none, Level::Package, "r").is_empty());
        assert_eq!(
            keys_of_files(&["a/x.c", "b/y.c"], Level::Repository, "r"),
            BTreeSet::from([GranularityKey::repository("r")])
        );
    }

    #[test]
    fn level_round_trip() {
        for level in Level::ALL {
            assert_eq!(level.as_str().parse::<Level>().unwrap(), level);
        }
        assert!("module".parse::<Level>().is_err());
    }

    proptest! {
        #[test]
        fn subsystem_is_first_segment_of_package(segs in prop::collection::vec("[a-z._-]{1,6}", 2..6)) {
            let path = segs.join("/");
            prop_assume!(segs.iter().all(|s| s != "."));
            let sys = subsystem_of(&path).unwrap().key;
            let pkg = package_of(&path).unwrap().key;
            let prefix = format!("{}/", sys);
            prop_assert!(pkg == sys || pkg.starts_with(&prefix));
            prop_assert_ne!(pkg, normalize_path(&path));
        }

        #[test]
        fn normalization_is_idempotent(raw in "[a-z/\\\\.]{0,20}") {
            let once = normalize_path(&raw);
            prop_assert_eq!(normalize_path(&once), once.clone());
        }
    }
}
