//! Dataset filtering: untraceable reviewers, bot accounts and comments that
//! consist only of a GitHub ```` ```suggestion ```` block.
//!
//! Rules run in a fixed order so that every removed comment has exactly one
//! cause in the [`FilterReport`].

use std::collections::BTreeSet;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::history::ReviewComment;

/// Case-folded account names, one per line in the source file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NameList(BTreeSet<String>);

impl NameList {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Self(names.into_iter().map(|n| n.as_ref().trim().to_lowercase()).filter(|n| !n.is_empty()).collect())
    }

    /// Reads a newline-delimited list; blank lines and `#` comments are skipped.
    pub fn read<R: BufRead>(reader: R) -> Result<Self> {
        let mut names = Vec::new();
        for line in reader.lines() {
            let line = line?;
            let trimmed = line.trim();
            if !trimmed.is_empty() && !trimmed.starts_with('#') {
                names.push(trimmed.to_string());
            }
        }
        Ok(Self::new(names))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.contains(&name.trim().to_lowercase())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Flags an account whose name ends in "bot" (any case) or that appears on
/// the bot list, unless it is allowlisted.
pub fn detect_bot(username: &str, botlist: &NameList, allowlist: &NameList) -> bool {
    let flagged = username.to_lowercase().ends_with("bot") || botlist.contains(username);
    flagged && !allowlist.contains(username)
}

fn opens_suggestion(line: &str) -> bool {
    line.trim_start().starts_with("```suggestion")
}

fn closes_fence(line: &str) -> bool {
    let t = line.trim();
    t.len() >= 3 && t.chars().all(|c| c == '`')
}

/// Removes every ```` ```suggestion ```` fenced block, including its fence
/// lines. An unterminated block runs to the end of the text.
pub fn strip_suggestion_blocks(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut inside = false;
    for line in text.split_inclusive('\n') {
        if inside {
            if closes_fence(line) {
                inside = false;
            }
        } else if opens_suggestion(line) {
            inside = true;
        } else {
            out.push_str(line);
        }
    }
    out
}

/// True when nothing but whitespace remains after removing suggestion blocks.
pub fn is_code_only(text: &str) -> bool {
    strip_suggestion_blocks(text).trim().is_empty()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterReport {
    pub input_count: usize,
    pub removed_untraceable: usize,
    pub removed_bot: usize,
    pub removed_code_only: usize,
    pub output_count: usize,
}

impl FilterReport {
    pub fn removed(&self) -> usize {
        self.removed_untraceable + self.removed_bot + self.removed_code_only
    }

    pub fn reconciles(&self) -> bool {
        self.input_count == self.output_count + self.removed()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Removal {
    Untraceable,
    Bot,
    CodeOnly,
}

/// First rule that removes `comment`, if any.
pub fn removal_reason(comment: &ReviewComment, botlist: &NameList, allowlist: &NameList) -> Option<Removal> {
    let Some(reviewer) = comment.traceable_reviewer() else {
        return Some(Removal::Untraceable);
    };
    if detect_bot(reviewer, botlist, allowlist) {
        return Some(Removal::Bot);
    }
    if is_code_only(&comment.comment_text) {
        return Some(Removal::CodeOnly);
    }
    None
}

/// Applies the three rules in order and returns the kept comments together
/// with a reconciled report.
pub fn filter_dataset(
    comments: &[ReviewComment],
    botlist: &NameList,
    allowlist: &NameList,
) -> (Vec<ReviewComment>, FilterReport) {
    let mut report = FilterReport { input_count: comments.len(), ..FilterReport::default() };
    let mut kept = Vec::with_capacity(comments.len());
    for comment in comments {
        match removal_reason(comment, botlist, allowlist) {
            Some(Removal::Untraceable) => report.removed_untraceable += 1,
            Some(Removal::Bot) => report.removed_bot += 1,
            Some(Removal::CodeOnly) => report.removed_code_only += 1,
            None => kept.push(comment.clone()),
        }
    }
    report.output_count = kept.len();
    (kept, report)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;
    use serde_json::Map;

    use super::*;

    fn empty() -> NameList {
        NameList::default()
    }

    fn comment(id: &str, reviewer: Option<&str>, text: &str) -> ReviewComment {
        ReviewComment {
            id: id.into(),
            repo: "r".into(),
            pr_number: 1,
            reviewer: reviewer.map(str::to_string),
            timestamp: 1,
            file_path: "a/b.c".into(),
            code_hunk: "@@ -1 +1 @@".into(),
            comment_text: text.into(),
            extra: Map::new(),
        }
    }

    #[test]
    fn bot_detection() {
        assert!(detect_bot("dependabot", &empty(), &empty()));
        assert!(detect_bot("Renovate-BOT", &empty(), &empty()));
        assert!(!detect_bot("alice", &empty(), &empty()));
        assert!(!detect_bot("talbot", &empty(), &NameList::new(["talbot"])));
        assert!(detect_bot("codecov-io", &NameList::new(["codecov-io"]), &empty()));
    }

    #[test]
    fn name_list_file_format() {
        let list = NameList::read("# bots\nCodecov-IO\n\n  travis-ci  \n".as_bytes()).unwrap();
        assert_eq!(list.len(), 2);
        assert!(list.contains("codecov-io"));
        assert!(list.contains("Travis-CI"));
    }

    #[test]
    fn suggestion_stripping() {
        assert_eq!(strip_suggestion_blocks("```suggestion\nfoo()\n```"), "");
        assert_eq!(strip_suggestion_blocks("fix this:\n```suggestion\nx=1\n```"), "fix this:\n");
        assert_eq!(strip_suggestion_blocks("see ```code``` here"), "see ```code``` here");
        assert_eq!(strip_suggestion_blocks("a\n```rust\nlet x;\n```\nb"), "a\n```rust\nlet x;\n```\nb");
        assert_eq!(strip_suggestion_blocks("keep\n```suggestion\nnever closed\nstill"), "keep\n");
        assert_eq!(strip_suggestion_blocks("x\n```suggestion\ny\n```\nafter\n"), "x\nafter\n");
    }

    #[test]
    fn code_only() {
        assert!(is_code_only("```suggestion\nreturn 0;\n```"));
        assert!(is_code_only(""));
        assert!(is_code_only("  \n```suggestion\nreturn 0;\n```\n  "));
        assert!(!is_code_only("nit: rename this\n```suggestion\nfooBar\n```"));
        assert!(!is_code_only("plain remark"));
    }

    #[test]
    fn five_comment_fixture() {
        let comments = [
            comment("1", None, "why?"),
            comment("2", Some("ci-bot"), "build failed"),
            comment("3", Some("carol"), "```suggestion\nx = 1\n```"),
            comment("4", Some("dave"), "please add a test"),
            comment("5", Some("erin"), "typo"),
        ];
        let (kept, report) = filter_dataset(&comments, &empty(), &empty());
        assert_eq!(
            report,
            FilterReport {
                input_count: 5,
                removed_untraceable: 1,
                removed_bot: 1,
                removed_code_only: 1,
                output_count: 2
            }
        );
        assert_eq!(kept.iter().map(|c| c.id.as_str()).collect::<Vec<_>>(), ["4", "5"]);
    }

    #[test]
    fn one_cause_per_removal() {
        // untraceable wins over code-only, bot wins over code-only
        let comments = [comment("1", None, ""), comment("2", Some("xbot"), "")];
        let (_, report) = filter_dataset(&comments, &empty(), &empty());
        assert_eq!((report.removed_untraceable, report.removed_bot, report.removed_code_only), (1, 1, 0));
        let blank = [comment("3", Some(""), "text")];
        assert_eq!(filter_dataset(&blank, &empty(), &empty()).1.removed_untraceable, 1);
    }

    #[test]
    fn clean_input_is_identity() {
        let comments = [comment("1", Some("a"), "x"), comment("2", Some("b"), "y")];
        let (kept, report) = filter_dataset(&comments, &empty(), &empty());
        assert_eq!(kept, comments);
        assert_eq!(report.removed(), 0);
    }

    proptest! {
        #[test]
        fn suffix_rule_is_total(prefix in "[A-Za-z0-9_-]{0,12}") {
            let name = format!("{prefix}bot");
            prop_assert!(detect_bot(&name, &empty(), &empty()));
        }
    }
}
