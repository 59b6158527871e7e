use std::path::PathBuf;

use anyhow::anyhow;
use clap::Args as ClapArgs;
use secondlang::ngram::{self, parse_labelled_tsv, TrainParams};

use crate::common::{read_text, CliError, CliResult};

#[derive(Debug, ClapArgs)]
pub struct Args {
    /// Training corpus, one `label<TAB>text` pair per line.
    #[arg(long)]
    corpus: PathBuf,
    /// Where to write the model.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    n_min: usize,
    #[arg(long, default_value_t = 4)]
    n_max: usize,
    /// Hash buckets (rows of the n-gram embedding table).
    #[arg(long, default_value_t = 1 << 18)]
    buckets: u32,
    /// Embedding width.
    #[arg(long, default_value_t = 16)]
    dim: usize,
    /// Initial learning rate; decays linearly to zero.
    #[arg(long, default_value_t = 0.1)]
    lr: f64,
    #[arg(long, default_value_t = 5)]
    epochs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

pub fn run(args: Args) -> CliResult {
    let text = read_text(&args.corpus)?;
    // the decision step always queries the model with lowercased text
    let corpus: Vec<_> = parse_labelled_tsv(&text)
        .map_err(|e| CliError::config(anyhow!("{}: {e}", args.corpus.display())))?
        .into_iter()
        .map(|(text, label)| (text.to_lowercase(), label))
        .collect();
    let params = TrainParams {
        n_min: args.n_min,
        n_max: args.n_max,
        buckets: args.buckets,
        dim: args.dim,
        lr: args.lr,
        epochs: args.epochs,
        seed: args.seed,
    };
    let report = ngram::train_with_report(&corpus, &params).map_err(CliError::config)?;
    report.model.save(&args.out).map_err(CliError::resource)?;
    let labels: Vec<&str> = report.model.labels().iter().map(|l| l.as_str()).collect();
    println!("examples\t{}", corpus.len());
    println!("labels\t{}", labels.join(","));
    if let Some(loss) = report.epoch_losses.last() {
        println!("loss\t{loss:.6}");
    }
    println!("accuracy\t{:.4}", report.accuracy);
    Ok(())
}
