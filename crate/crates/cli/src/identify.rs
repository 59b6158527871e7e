use std::io::{self, BufRead, BufWriter, Write};

use anyhow::anyhow;
use clap::Args as ClapArgs;
use rayon::prelude::*;
use secondlang::config::Mode;
use secondlang::decision::Verdict;
use secondlang::{Engine, LanguageCode};

use crate::common::{parse_code, parse_mode, CliError, CliResult, EngineArgs};

/// Lines handed to the worker pool at a time per job.
const CHUNK_PER_JOB: usize = 256;

#[derive(Debug, ClapArgs)]
pub struct Args {
    /// Language a previous identifier assigned to the input.
    #[arg(long, value_parser = parse_code)]
    lang: LanguageCode,
    /// aggr (always answer) or cons (may answer with the unknown code).
    #[arg(long, value_parser = parse_mode)]
    mode: Option<Mode>,
    /// Append the classifier's prediction and per-language error rates.
    #[arg(long)]
    explain: bool,
    /// Worker threads; output order always follows input order.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[command(flatten)]
    engine: EngineArgs,
}

struct Identifier<'a> {
    engine: &'a Engine,
    target: &'a LanguageCode,
    mode: Mode,
    explain: bool,
}

impl Identifier<'_> {
    /// Output line (without newline) for one raw input line.
    fn line(&self, lineno: usize, raw: &[u8]) -> CliResult<String> {
        let unknown = &self.engine.settings().unknown_code;
        let Ok(sentence) = std::str::from_utf8(raw) else {
            log::warn!("line {lineno}: invalid UTF-8, emitting `{unknown}`");
            return Ok(if self.explain {
                format!("{unknown}\t-\t-")
            } else {
                unknown.to_string()
            });
        };
        let verdict = self
            .engine
            .get_language(self.target, sentence, self.mode)
            .map_err(CliError::resource)?;
        Ok(if self.explain {
            format!(
                "{}\t{}\t{}",
                verdict.language,
                verdict.primary_prediction,
                rates(&verdict)
            )
        } else {
            verdict.language.to_string()
        })
    }
}

fn rates(verdict: &Verdict) -> String {
    if !verdict.refined {
        return "-".into();
    }
    verdict
        .error_rates
        .iter()
        .map(|(l, r)| format!("{l}={r:.4}"))
        .collect::<Vec<_>>()
        .join(",")
}

fn trim_eol(mut line: &[u8]) -> &[u8] {
    if let Some(rest) = line.strip_suffix(b"\n") {
        line = rest;
    }
    line.strip_suffix(b"\r").unwrap_or(line)
}

pub fn run(args: Args) -> CliResult {
    if args.jobs == 0 {
        return Err(CliError::config(anyhow!("--jobs must be at least 1")));
    }
    let (config, engine) = args.engine.load_engine(&args.lang)?;
    let ident = Identifier {
        engine: &engine,
        target: &args.lang,
        mode: args.mode.unwrap_or(config.settings.mode),
        explain: args.explain,
    };

    let stdin = io::stdin();
    let mut input = stdin.lock();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());

    if args.jobs == 1 {
        let mut buf = Vec::new();
        let mut lineno = 0;
        while input.read_until(b'\n', &mut buf)? > 0 {
            lineno += 1;
            writeln!(out, "{}", ident.line(lineno, trim_eol(&buf))?)?;
            buf.clear();
        }
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(args.jobs)
            .build()
            .map_err(|e| CliError::config(anyhow!(e)))?;
        let chunk_len = CHUNK_PER_JOB * args.jobs;
        let mut lineno = 0;
        loop {
            let mut chunk = Vec::with_capacity(chunk_len);
            for _ in 0..chunk_len {
                let mut buf = Vec::new();
                if input.read_until(b'\n', &mut buf)? == 0 {
                    break;
                }
                chunk.push(buf);
            }
            if chunk.is_empty() {
                break;
            }
            let first = lineno + 1;
            lineno += chunk.len();
            let lines: Vec<CliResult<String>> = pool.install(|| {
                chunk
                    .par_iter()
                    .enumerate()
                    .map(|(i, raw)| ident.line(first + i, trim_eol(raw)))
                    .collect()
            });
            for line in lines {
                writeln!(out, "{}", line?)?;
            }
        }
    }
    out.flush()?;
    Ok(())
}
