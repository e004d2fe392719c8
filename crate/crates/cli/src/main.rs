//! `dialectid` command-line tool.

mod config;

use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use dialectid::arff::{parse_arff, write_arff, Dataset};
use dialectid::classifiers::{Algorithm, ClassifierSpec};
use dialectid::corpus::{build_dataset, corpus_stats, LabelSource, PrepConfig};
use dialectid::demo::{demo_dataset, demo_raw_sources, DemoConfig};
use dialectid::eval::{cross_validate, evaluate_holdout, evaluate_resubstitution, percentage_split, EvaluationReport};
use dialectid::features::TokenizerSpec;
use dialectid::persist::ModelFile;
use dialectid::pipeline::Pipeline;

use config::{classifier_name, parse_feature, ClassifierArgs, FeatureArgs};

#[derive(Debug, Parser)]
#[command(name = "dialectid", version, about = "French dialect identification with n-gram features and classical classifiers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Clean raw concordance files into a labelled ARFF corpus.
    Prepare(PrepareArgs),
    /// Run a grid of classifiers and feature sets under one or more protocols.
    Experiment(ExperimentArgs),
    /// Train on an ARFF corpus and save the model.
    Train(TrainArgs),
    /// Evaluate a saved model on a labelled test ARFF.
    Evaluate(EvaluateArgs),
    /// Classify text lines with a saved model.
    Predict(PredictArgs),
    /// Write the synthetic five-dialect demo corpus.
    Demo(DemoArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProtocolKind {
    /// Train and test on all data.
    Resub,
    /// Stratified k-fold cross-validation.
    Cv,
    /// Seeded percentage split.
    Split,
}

#[derive(Debug, Args)]
struct PrepareArgs {
    /// A label and its raw file; repeat once per label.
    #[arg(long = "label", num_args = 2, value_names = ["LABEL", "FILE"], required = true)]
    labels: Vec<String>,
    /// Sentences with fewer tokens are dropped.
    #[arg(long, default_value_t = 3)]
    min_tokens: usize,
    /// Output ARFF path.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["data", "demo"])))]
struct ExperimentArgs {
    /// Labelled ARFF corpus with one string attribute.
    data: Option<PathBuf>,
    /// Use the bundled synthetic corpus instead of a file.
    #[arg(long)]
    demo: bool,
    /// Classifier to include, repeatable; `all` (the default) runs every one.
    #[arg(long = "classifier", value_parser = classifier_or_all)]
    classifiers: Vec<String>,
    /// Feature cell, repeatable: word, word-ngram:MIN:MAX or char:MIN:MAX.
    /// Without it the single --tokenizer/--min/--max setting is used.
    #[arg(long = "feature")]
    features: Vec<String>,
    #[command(flatten)]
    feature_args: FeatureArgs,
    /// Evaluation protocol, repeatable.
    #[arg(long = "protocol", value_enum, default_values_t = [ProtocolKind::Cv])]
    protocols: Vec<ProtocolKind>,
    #[command(flatten)]
    protocol: ProtocolArgs,
    /// Fit each fold's vocabulary on all documents (leaks held-out tokens).
    #[arg(long)]
    leaky_vectorize: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct ProtocolArgs {
    /// Number of cross-validation folds.
    #[arg(long, default_value_t = 10)]
    folds: usize,
    /// Training percentage of the split protocol.
    #[arg(long = "split", default_value_t = 60.0)]
    train_percent: f64,
    /// Seed for shuffling and every classifier.
    #[arg(long, env = "DIALECTID_SEED", default_value_t = 1)]
    seed: u64,
}

#[derive(Debug, Args)]
struct TrainArgs {
    /// Labelled ARFF corpus.
    data: PathBuf,
    #[command(flatten)]
    features: FeatureArgs,
    #[command(flatten)]
    classifier: ClassifierArgs,
    /// Model output path.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    /// Model saved by `train`.
    model: PathBuf,
    /// Labelled test ARFF.
    test: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct PredictArgs {
    /// Model saved by `train`.
    model: PathBuf,
    /// Text file with one document per line; standard input when absent or `-`.
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("target").required(true).multiple(true).args(["output", "raw_dir"])))]
struct DemoArgs {
    /// Write the cleaned corpus as ARFF here.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Write one raw, noisy file per label (`LABEL.txt`) into this directory.
    #[arg(long)]
    raw_dir: Option<PathBuf>,
    /// Sentences per label.
    #[arg(long, default_value_t = 400)]
    sentences: usize,
    #[arg(long, env = "DIALECTID_SEED", default_value_t = 1)]
    seed: u64,
}

fn classifier_or_all(name: &str) -> Result<String, String> {
    if name == "all" {
        Ok(name.to_string())
    } else {
        classifier_name(name)
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn load_arff(path: &Path) -> Result<Dataset> {
    parse_arff(&read_text(path)?).with_context(|| format!("invalid ARFF in {}", path.display()))
}

fn load_model(path: &Path) -> Result<ModelFile> {
    ModelFile::load(path).with_context(|| format!("cannot load model {}", path.display()))
}

fn prepare(args: &PrepareArgs) -> Result<()> {
    let mut sources = Vec::new();
    for pair in args.labels.chunks(2) {
        let [label, file] = pair else { bail!("--label needs a LABEL and a FILE") };
        let text = read_text(Path::new(file))?;
        sources.push(LabelSource {
            config: PrepConfig::new(label.as_str()).with_min_tokens(args.min_tokens),
            lines: text.lines().map(str::to_string).collect(),
        });
    }
    let data = build_dataset(&sources)?;
    write_text(&args.output, &write_arff(&data, false))?;
    let stats = corpus_stats(&data)?;
    println!("Wrote {} sentences to {}", stats.total, args.output.display());
    for (label, count) in &stats.per_label {
        println!("  {label:<8} {count:>8}");
    }
    println!("Tokens per sentence: max {}, mean {:.2}, stddev {:.2}", stats.max_tokens, stats.mean_tokens, stats.stddev_tokens);
    Ok(())
}

struct Cell {
    classifier: usize,
    feature: usize,
    protocol: usize,
}

fn run_protocol(kind: ProtocolKind, args: &ProtocolArgs, pipeline: &Pipeline, data: &Dataset) -> Result<EvaluationReport> {
    Ok(match kind {
        ProtocolKind::Resub => evaluate_resubstitution(pipeline, data)?,
        ProtocolKind::Cv => cross_validate(pipeline, data, args.folds, args.seed)?.report,
        ProtocolKind::Split => percentage_split(pipeline, data, args.train_percent, args.seed)?,
    })
}

fn experiment(args: &ExperimentArgs) -> Result<()> {
    let data = match &args.data {
        Some(path) => load_arff(path)?,
        None => demo_dataset(&DemoConfig::default()),
    };
    let names: Vec<String> = if args.classifiers.is_empty() || args.classifiers.iter().any(|c| c == "all") {
        Algorithm::NAMES.iter().map(|s| s.to_string()).collect()
    } else {
        args.classifiers.clone()
    };
    let specs: Vec<ClassifierSpec> = names
        .iter()
        .map(|n| Algorithm::from_name(n).map(|a| ClassifierSpec::new(a).with_seed(args.protocol.seed)))
        .collect::<Option<_>>()
        .context("unknown classifier")?;
    let tokenizers: Vec<TokenizerSpec> = if args.features.is_empty() {
        vec![args.feature_args.tokenizer()?]
    } else {
        args.features.iter().map(|f| parse_feature(f)).collect::<Result<_>>()?
    };
    let options = args.feature_args.options();
    let mut protocols = args.protocols.clone();
    protocols.dedup();

    let (n_specs, n_features) = (specs.len(), tokenizers.len());
    let cells: Vec<Cell> = (0..protocols.len())
        .flat_map(|p| {
            (0..n_specs).flat_map(move |c| (0..n_features).map(move |f| Cell { classifier: c, feature: f, protocol: p }))
        })
        .collect();
    // Cells run concurrently; results keep the declared grid order.
    let reports: Vec<EvaluationReport> = cells
        .par_iter()
        .map(|cell| {
            let pipeline = Pipeline::new(specs[cell.classifier].clone(), tokenizers[cell.feature].clone(), options.clone())
                .with_leaky_vectorize(args.leaky_vectorize);
            run_protocol(protocols[cell.protocol], &args.protocol, &pipeline, &data).with_context(|| {
                format!("{} with {}", specs[cell.classifier].algorithm.display_name(), tokenizers[cell.feature].describe())
            })
        })
        .collect::<Result<_>>()?;

    match args.format {
        Format::Json => {
            let rows: Vec<serde_json::Value> = cells
                .iter()
                .zip(&reports)
                .map(|(cell, report)| {
                    json!({
                        "classifier": specs[cell.classifier].algorithm.name(),
                        "features": tokenizers[cell.feature].describe(),
                        "protocol": report.protocol,
                        "accuracy": report.accuracy,
                        "report": report,
                    })
                })
                .collect();
            let doc = json!({ "relation": data.relation, "instances": data.len(), "options": options, "cells": rows });
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
        Format::Text => {
            let headers: Vec<String> = tokenizers.iter().map(TokenizerSpec::describe).collect();
            let width = headers.iter().map(String::len).max().unwrap_or(0).max(8);
            let per_protocol = specs.len() * tokenizers.len();
            println!(
                "Relation {} ({} instances), TF={}, IDF={}",
                data.relation,
                data.len(),
                options.tf_transform,
                options.idf_transform
            );
            for chunk in reports.chunks(per_protocol) {
                println!();
                println!("Accuracy (%), {}", chunk[0].protocol.describe());
                print!("{:<24}", "Classifier");
                for h in &headers {
                    print!(" {h:>width$}");
                }
                println!();
                for (c, row) in chunk.chunks(tokenizers.len()).enumerate() {
                    print!("{:<24}", specs[c].algorithm.display_name());
                    for report in row {
                        print!(" {:>width$.2}", 100.0 * report.accuracy);
                    }
                    println!();
                }
            }
        }
    }
    Ok(())
}

fn train(args: &TrainArgs) -> Result<()> {
    let pipeline = config::pipeline(&args.classifier, &args.features, false)?;
    let data = load_arff(&args.data)?;
    let trained = pipeline.fit(&data)?;
    let file = ModelFile::new(trained, data.relation.clone(), data.len());
    file.save(&args.output).with_context(|| format!("cannot save model to {}", args.output.display()))?;
    println!(
        "Trained {} on {} instances of '{}' ({} classes, {} features from {}), seed {}",
        file.trained.model.spec.algorithm.display_name(),
        data.len(),
        data.relation,
        file.trained.class_labels().len(),
        file.trained.vocabulary.len(),
        file.trained.vocabulary.tokenizer.describe(),
        file.trained.model.spec.seed
    );
    println!("Model saved to {}", args.output.display());
    Ok(())
}

fn evaluate(args: &EvaluateArgs) -> Result<()> {
    let file = load_model(&args.model)?;
    let test = load_arff(&args.test)?;
    let report = evaluate_holdout(&file.trained, &test)
        .with_context(|| format!("cannot evaluate {} on {}", args.model.display(), args.test.display()))?;
    match args.format {
        Format::Json => println!("{}", report.to_json()),
        Format::Text => print!("{}", report.to_text()),
    }
    Ok(())
}

fn predict(args: &PredictArgs) -> Result<()> {
    let file = load_model(&args.model)?;
    let lines: Vec<String> = match &args.input {
        Some(path) if path.as_os_str() != "-" => read_text(path)?.lines().map(str::to_string).collect(),
        _ => io::stdin().lock().lines().collect::<io::Result<_>>().context("cannot read standard input")?,
    };
    let labels = file.trained.class_labels();
    let mut out = io::stdout().lock();
    for line in &lines {
        let dist = file.trained.predict_text(line);
        let label = &labels[dist.argmax()];
        match args.format {
            Format::Json => {
                let record = json!({ "text": line, "label": label, "labels": labels, "distribution": dist.0 });
                writeln!(out, "{record}")?;
            }
            Format::Text => {
                let probs: Vec<String> = labels.iter().zip(&dist.0).map(|(l, p)| format!("{l}={p:.4}")).collect();
                writeln!(out, "{label}\t{}", probs.join(" "))?;
            }
        }
    }
    Ok(())
}

fn demo(args: &DemoArgs) -> Result<()> {
    let cfg = DemoConfig { sentences_per_label: args.sentences, seed: args.seed, ..DemoConfig::default() };
    if let Some(dir) = &args.raw_dir {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        for (label, lines) in demo_raw_sources(&cfg) {
            let mut text = lines.join("\n");
            text.push('\n');
            write_text(&dir.join(format!("{label}.txt")), &text)?;
        }
        println!("Wrote raw files for {} labels to {}", cfg.labels.len(), dir.display());
    }
    if let Some(path) = &args.output {
        let data = demo_dataset(&cfg);
        write_text(path, &write_arff(&data, false))?;
        println!("Wrote {} sentences to {}", data.len(), path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Prepare(a) => prepare(a),
        Command::Experiment(a) => experiment(a),
        Command::Train(a) => train(a),
        Command::Evaluate(a) => evaluate(a),
        Command::Predict(a) => predict(a),
        Command::Demo(a) => demo(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
