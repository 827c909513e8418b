use std::path::Path;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Map, Value};

use revexp_core::evaluation::bleu::{corpus_bleu4_report, BleuConfig, StopWords};
use revexp_core::evaluation::stats::{
    correlation_csv, extreme_groups, histogram, histogram_csv, mean_std, two_proportion_z, Direction,
    ExtremeThresholds, ProportionTest,
};
use revexp_core::filtering::{filter_dataset, NameList};
use revexp_core::granularity::package_of;
use revexp_core::history::{load_comments, load_commits, load_pull_requests};
use revexp_core::jsonl::{read_objects, Line};
use revexp_core::ownership::{annotate_dataset, OwnershipSummary};
use revexp_core::sampling::{oversample as oversample_dataset, MajorGroup, OversampleConfig};
use revexp_core::toy::{steering_experiment, ToyCorpus, TrainConfig, CONFLICT_CORPUS_SEED};
use revexp_core::weighting::annotate_weights;
use revexp_core::{
    AnnotatedComment, Error, HistoryCatalog, Level, OwnershipVector, WeightKind, WeightStrategy, WeightedExample,
};

use crate::error::{AtPath, CliError};
use crate::io::{open, read_to_string, Stage};

fn flag<T: FromStr<Err = Error>>(name: &str, value: &str) -> Result<T, CliError> {
    value.parse().map_err(|e: Error| CliError::usage(format!("--{name}: {e}")))
}

fn objects<T: Serialize>(records: &[T]) -> Vec<Map<String, Value>> {
    records
        .iter()
        .map(|r| match serde_json::to_value(r).expect("record serializes") {
            Value::Object(map) => map,
            _ => unreachable!("records serialize to objects"),
        })
        .collect()
}

fn read_lines(path: &Path) -> Result<Vec<Line>, CliError> {
    read_objects(open(path)?).at(path)
}

fn read_vectors(path: &Path) -> Result<Vec<(Line, OwnershipVector)>, CliError> {
    read_lines(path)?
        .into_iter()
        .map(|line| {
            let v = OwnershipVector::from_object(&line.object)
                .map_err(|e| Error::Schema { line: line.number, message: e.to_string() })
                .at(path)?;
            Ok((line, v))
        })
        .collect()
}

pub fn ingest(commits: &Path, pulls: &Path, comments: &Path, out: &Path) -> Result<(), CliError> {
    let mut stage = Stage::new("ingest", out, 0)?;
    let commit_records = load_commits(open(stage.input(commits)?)?).at(commits)?;
    let pull_records = load_pull_requests(open(stage.input(pulls)?)?).at(pulls)?;
    let comment_records = load_comments(open(stage.input(comments)?)?).at(comments)?;
    stage.write_jsonl("commits.jsonl", objects(&commit_records))?;
    stage.write_jsonl("pulls.jsonl", objects(&pull_records))?;
    stage.write_jsonl("comments.jsonl", comment_records.iter().map(|c| c.to_object()))?;
    println!(
        "{}",
        json!({ "commits": commit_records.len(), "pulls": pull_records.len(), "comments": comment_records.len() })
    );
    Ok(())
}

fn name_list(stage: &mut Stage, path: Option<&Path>) -> Result<NameList, CliError> {
    match path {
        Some(path) => NameList::read(open(stage.input(path)?)?).at(path),
        None => Ok(NameList::default()),
    }
}

pub fn filter(comments: &Path, botlist: Option<&Path>, allowlist: Option<&Path>, out: &Path) -> Result<(), CliError> {
    let mut stage = Stage::new("filter", out, 0)?;
    let records = load_comments(open(stage.input(comments)?)?).at(comments)?;
    let bots = name_list(&mut stage, botlist)?;
    let allowed = name_list(&mut stage, allowlist)?;
    stage.config("botlist_entries", bots.len()).config("allowlist_entries", allowed.len());
    let (kept, report) = filter_dataset(&records, &bots, &allowed);
    let report_json = serde_json::to_string(&report).expect("report serializes");
    stage.write_jsonl("filtered.jsonl", kept.iter().map(|c| c.to_object()))?;
    stage.write("filtered.report.json", format!("{report_json}\n").as_bytes())?;
    println!("{report_json}");
    Ok(())
}

pub fn ownership(
    commits: &Path,
    pulls: &Path,
    comments: &Path,
    repo: Option<&str>,
    out: &Path,
) -> Result<(), CliError> {
    let mut stage = Stage::new("ownership", out, 0)?;
    let commit_records = load_commits(open(stage.input(commits)?)?).at(commits)?;
    let pull_records = load_pull_requests(open(stage.input(pulls)?)?).at(pulls)?;
    let comment_records = load_comments(open(stage.input(comments)?)?).at(comments)?;
    let default_repo = repo
        .map(str::to_string)
        .or_else(|| comment_records.first().map(|c| c.repo.clone()))
        .unwrap_or_else(|| "default".to_string());
    stage.config("default_repo", default_repo.as_str());
    let catalog = HistoryCatalog::build(&commit_records, &pull_records, &default_repo);
    let (annotated, summary) = annotate_dataset(&comment_records, &catalog).at(comments)?;
    stage.write_jsonl("annotated.jsonl", annotated.iter().map(AnnotatedComment::to_object))?;
    stage.write("ownership_summary.csv", summary.to_csv().as_bytes())?;
    Ok(())
}

pub fn weight(annotated: &Path, strategy: &str, level: &str, out: &Path) -> Result<(), CliError> {
    let kind: WeightKind = flag("strategy", strategy)?;
    let level: Level = flag("level", level)?;
    let strategy = WeightStrategy::new(kind, level);
    let mut stage = Stage::new("weight", out, 0)?;
    stage.config("strategy", kind.as_str()).config("level", level.as_str());
    let lines = read_lines(stage.input(annotated)?)?;
    let dataset: Vec<AnnotatedComment> = lines
        .iter()
        .map(|l| AnnotatedComment::from_object(&l.object, l.number).at(annotated))
        .collect::<Result<_, _>>()?;
    let weighted = annotate_weights(&dataset, strategy).at(annotated)?;
    stage.write_jsonl("weighted.jsonl", weighted.iter().map(WeightedExample::to_object))?;
    Ok(())
}

pub fn oversample(
    input: &Path,
    group: &str,
    rate: u32,
    threshold: f64,
    level: &str,
    seed: u64,
    out: &Path,
) -> Result<(), CliError> {
    let config = OversampleConfig {
        group: flag::<MajorGroup>("group", group)?,
        level: flag("level", level)?,
        threshold,
        rate,
        seed,
    };
    config.validate().map_err(|e| CliError::usage(e.to_string()))?;
    let mut stage = Stage::new("oversample", out, seed)?;
    stage
        .config("group", config.group.as_str())
        .config("level", config.level.as_str())
        .config("rate", rate)
        .config("threshold", threshold);
    let records = read_vectors(stage.input(input)?)?;
    let sampled = oversample_dataset(&records, |r| r.1, &config)?;
    stage.write_jsonl("oversampled.jsonl", sampled.into_iter().map(|(line, _)| line.object))?;
    Ok(())
}

fn text_lines(path: &Path) -> Result<Vec<String>, CliError> {
    Ok(read_to_string(path)?.lines().map(str::to_string).collect())
}

pub fn bleu(
    candidates: &Path,
    references: &Path,
    stopwords: Option<&Path>,
    smoothing: bool,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let cands = text_lines(candidates)?;
    let refs = text_lines(references)?;
    if cands.len() != refs.len() {
        return Err(CliError::from(Error::InvalidArgument(format!(
            "{} candidates but {} references",
            cands.len(),
            refs.len()
        ))));
    }
    let list = match stopwords {
        Some(path) => StopWords::read(open(path)?).at(path)?,
        None => StopWords::bundled(),
    };
    let config = BleuConfig { smoothing, case_fold: true, stopwords: Some(list) };
    let pairs: Vec<(String, String)> = cands.into_iter().zip(refs).collect();
    let report = corpus_bleu4_report(&pairs, &config).at(candidates)?;
    println!("{} {}", report.stopwords_removed, report.stopwords_kept);
    if let Some(out) = out {
        let mut stage = Stage::new("bleu", out, 0)?;
        stage.input(candidates)?;
        stage.input(references)?;
        if let Some(path) = stopwords {
            stage.input(path)?;
        }
        stage.config("smoothing", smoothing);
        let body = json!({
            "pairs": pairs.len(),
            "bleu4_stopwords_removed": report.stopwords_removed,
            "bleu4_stopwords_kept": report.stopwords_kept,
        });
        stage.write("bleu.json", format!("{body}\n").as_bytes())?;
    }
    Ok(())
}

fn proportion(name: &str, value: &str) -> Result<(u64, u64), CliError> {
    let parsed = value.split_once('/').and_then(|(s, n)| Some((s.trim().parse().ok()?, n.trim().parse().ok()?)));
    parsed.ok_or_else(|| CliError::usage(format!("--{name}: expected SUCCESSES/TRIALS, got {value:?}")))
}

pub fn ztest(a: &str, b: &str, direction: &str, out: Option<&Path>) -> Result<(), CliError> {
    let (successes_a, n_a) = proportion("a", a)?;
    let (successes_b, n_b) = proportion("b", b)?;
    let direction: Direction = flag("direction", direction)?;
    let test = ProportionTest { successes_a, n_a, successes_b, n_b, direction };
    let result = two_proportion_z(&test)?;
    println!("{} {}", result.z, result.p);
    if let Some(out) = out {
        let mut stage = Stage::new("ztest", out, 0)?;
        stage.config("a", a).config("b", b).config("direction", direction.to_string());
        let body = json!({ "z": result.z, "p": result.p });
        stage.write("ztest.json", format!("{body}\n").as_bytes())?;
    }
    Ok(())
}

pub fn stats(input: &Path, field: &str, bins: usize, out: &Path) -> Result<(), CliError> {
    if !OwnershipVector::FIELDS.contains(&field) {
        return Err(CliError::usage(format!("--field: unknown ownership field {field:?}")));
    }
    if bins == 0 {
        return Err(CliError::usage("--hist: at least one bin is required"));
    }
    let mut stage = Stage::new("stats", out, 0)?;
    stage.config("field", field).config("hist", bins);
    let records = read_vectors(stage.input(input)?)?;
    let vectors: Vec<OwnershipVector> = records.iter().map(|r| r.1).collect();
    let column: Vec<f64> = vectors.iter().map(|v| v.field(field).expect("known field")).collect();
    let (mean, std) = mean_std(&column).ok_or_else(|| Error::Degenerate("no records to summarize".into())).at(input)?;
    println!("{mean} {std}");

    stage.write(&format!("{field}.hist.csv"), histogram_csv(&histogram(&column, bins)?).as_bytes())?;
    stage.write("correlation.csv", correlation_csv(&vectors).as_bytes())?;
    stage.write("summary.csv", OwnershipSummary::of(&vectors).to_csv().as_bytes())?;

    let thresholds = ExtremeThresholds::default();
    let pools = extreme_groups(&records, |r| r.1, &thresholds);
    let ids = |pool: &[&(Line, OwnershipVector)]| -> Vec<Value> {
        pool.iter().map(|(line, _)| line.object.get("id").cloned().unwrap_or(Value::Null)).collect()
    };
    let body = json!({
        "thresholds": thresholds.upper,
        "inexperienced": ids(&pools.inexperienced),
        "experienced": ids(&pools.experienced),
    });
    stage.write("extreme_groups.json", format!("{body}\n").as_bytes())?;
    Ok(())
}

fn weighted_corpus(path: &Path, max_len: usize) -> Result<ToyCorpus, CliError> {
    let tokenizer = BleuConfig::keep_stopwords();
    let mut records = Vec::new();
    for line in read_lines(path)? {
        let example = WeightedExample::from_object(&line.object, line.number).at(path)?;
        let comment = &example.annotated.comment;
        let context = package_of(&comment.file_path).at(path)?.key;
        records.push((context, tokenizer.tokenize(&comment.comment_text), example.weight));
    }
    ToyCorpus::from_sequences(&records, max_len).at(path)
}

pub fn train_toy(
    weighted: Option<&Path>,
    config: &TrainConfig,
    max_len: usize,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let corpus = match weighted {
        Some(path) => weighted_corpus(path, max_len)?,
        None => ToyCorpus::conflict(CONFLICT_CORPUS_SEED),
    };
    let report = steering_experiment(&corpus, config)?;
    let source = match weighted {
        Some(path) => json!({ "weighted": path.display().to_string() }),
        None => json!({ "conflict_corpus_seed": CONFLICT_CORPUS_SEED }),
    };
    let body = json!({
        "corpus": source,
        "lr": config.lr,
        "epochs": config.epochs,
        "batch": config.batch_size,
        "seed": config.seed,
        "max_len": corpus.max_len,
        "examples": report.examples,
        "contexts": report.contexts,
        "probes": report.probes,
        "elf_alignment": report.weighted_alignment,
        "uniform_alignment": report.uniform_alignment,
        "steered": report.steered,
    });
    println!("{body}");
    if let Some(out) = out {
        let mut stage = Stage::new("train-toy", out, config.seed)?;
        if let Some(path) = weighted {
            stage.input(path)?;
        }
        stage.config("lr", config.lr).config("epochs", config.epochs).config("batch", config.batch_size);
        stage.write("train_toy.json", format!("{body}\n").as_bytes())?;
    }
    Ok(())
}
