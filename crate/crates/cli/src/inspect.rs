use std::path::PathBuf;

use clap::Args as ClapArgs;
use secondlang::{LanguageCode, NgramModel};

use crate::common::{parse_code, CliError, CliResult, EngineArgs};

#[derive(Debug, ClapArgs)]
pub struct Args {
    /// Only show the languages spell-checked for this target.
    #[arg(long, value_parser = parse_code)]
    lang: Option<LanguageCode>,
    /// Describe a model file instead of the configuration.
    #[arg(long = "model-file")]
    model_file: Option<PathBuf>,
    #[command(flatten)]
    engine: EngineArgs,
}

pub fn run(args: Args) -> CliResult {
    if let Some(path) = &args.model_file {
        let model = NgramModel::load(path).map_err(CliError::resource)?;
        let (n_min, n_max) = model.ngram_range();
        let labels: Vec<&str> = model.labels().iter().map(|l| l.as_str()).collect();
        println!("labels\t{}", labels.join(","));
        println!("ngrams\t{n_min}..={n_max}");
        println!("buckets\t{}", model.buckets());
        println!("dim\t{}", model.dim());
        println!("hash_seed\t{}", model.hash_seed());
        return Ok(());
    }

    let config = args.engine.load_config()?;
    if let Some(lang) = &args.lang {
        let langs = config.similar.similar_languages(lang);
        let joined: Vec<&str> = langs.iter().map(|l| l.as_str()).collect();
        println!("{lang}\t{}", joined.join(","));
        return Ok(());
    }
    println!("config\t{}", config.dir.display());
    println!("error_threshold\t{}", config.settings.error_threshold);
    println!("mode\t{}", config.settings.mode);
    println!("unknown_code\t{}", config.settings.unknown_code);
    for (target, list) in config.similar.iter() {
        let joined: Vec<&str> = list.iter().map(|l| l.as_str()).collect();
        println!("similar\t{target}\t{}", joined.join(","));
    }
    for lang in config.similar.languages() {
        let base = config.registry.base_path(&lang).unwrap_or_default();
        println!("dictionary\t{lang}\t{}", base.display());
    }
    Ok(())
}
