use std::path::PathBuf;

use anyhow::anyhow;
use clap::Args as ClapArgs;
use secondlang::bench::{self, build_anti_gold, parse_grouping, try_evaluate, GoldSet, Grouping};
use secondlang::config::Mode;
use secondlang::decision::LanguagePredictor;
use secondlang::{EvalReport, LanguageCode};
use serde::Serialize;

use crate::common::{parse_code, parse_mode, read_text, CliError, CliResult, EngineArgs};

#[derive(Debug, ClapArgs)]
pub struct Args {
    /// Gold-standard files (`label<TAB>sentence`); together they form one batch.
    #[arg(long, required = true, num_args = 1..)]
    gold: Vec<PathBuf>,
    /// Targeted language passed to the identifier for every sentence.
    #[arg(long, value_parser = parse_code)]
    target: LanguageCode,
    #[arg(long, value_parser = parse_mode)]
    mode: Option<Mode>,
    /// Label grouping applied before scoring, e.g. `hr=hbs,sr=hbs,bs=hbs`.
    #[arg(long)]
    group: Option<String>,
    /// Also score the batch minus the target's own sentences.
    #[arg(long)]
    anti_gold: bool,
    /// Emit one JSON document instead of TSV blocks.
    #[arg(long)]
    json: bool,
    /// Comma-separated error thresholds; one report per threshold.
    #[arg(long, value_delimiter = ',')]
    sweep: Option<Vec<f64>>,
    /// Score the n-gram classifier alone, without spell checking.
    #[arg(long)]
    primary_only: bool,
    #[command(flatten)]
    engine: EngineArgs,
}

#[derive(Serialize)]
struct Entry {
    set: String,
    threshold: Option<f64>,
    report: EvalReport,
}

pub fn run(args: Args) -> CliResult {
    let mut batch = Vec::new();
    for path in &args.gold {
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        batch.push(GoldSet::from_tsv(name, &read_text(path)?).map_err(CliError::config)?);
    }
    let grouping: Option<Grouping> = args
        .group
        .as_deref()
        .map(parse_grouping)
        .transpose()
        .map_err(CliError::config)?;
    if let Some(t) = args
        .sweep
        .iter()
        .flatten()
        .find(|t| !(0.0..=1.0).contains(*t))
    {
        return Err(CliError::config(anyhow!(
            "sweep threshold {t} is outside [0, 1]"
        )));
    }

    let mut sets = vec![GoldSet::concat("gold", &batch).map_err(CliError::config)?];
    if args.anti_gold {
        sets.push(build_anti_gold(&batch, &args.target).map_err(CliError::config)?);
    }

    let (config, engine) = args.engine.load_engine(&args.target)?;
    let mode = args.mode.unwrap_or(config.settings.mode);
    let mut entries = Vec::new();
    for set in &sets {
        if args.primary_only {
            let model = engine.predictor();
            let report = bench::evaluate(
                |s| model.predict_language(&s.to_lowercase()),
                set,
                grouping.as_ref(),
            );
            entries.push(Entry {
                set: set.name.clone(),
                threshold: None,
                report,
            });
            continue;
        }
        let thresholds = args
            .sweep
            .clone()
            .unwrap_or_else(|| vec![engine.settings().error_threshold]);
        for t in thresholds {
            let engine = engine.with_error_threshold(t);
            let report = try_evaluate(
                |s| {
                    engine
                        .get_language(&args.target, s, mode)
                        .map(|v| v.language)
                },
                set,
                grouping.as_ref(),
            )
            .map_err(CliError::resource)?;
            entries.push(Entry {
                set: set.name.clone(),
                threshold: Some(t),
                report,
            });
        }
    }

    if args.json {
        let doc = serde_json::json!({
            "target": args.target,
            "mode": mode,
            "reports": entries,
        });
        println!(
            "{}",
            serde_json::to_string_pretty(&doc).map_err(|e| CliError::config(anyhow!(e)))?
        );
    } else {
        for (i, entry) in entries.iter().enumerate() {
            if i > 0 {
                println!();
            }
            if let Some(t) = entry.threshold {
                println!("# set={} threshold={t}", entry.set);
            } else {
                println!("# set={} primary-only", entry.set);
            }
            print!("{}", entry.report.to_tsv());
        }
    }
    Ok(())
}
