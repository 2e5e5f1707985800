use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use debm::harness::{
    cmd_compare, cmd_run, cmd_trace, compare_table, summary_line, CompareConfig, Input, RunConfig, TraceConfig,
};
use debm::io::synth::DEFAULT_SMOOTHNESS;
use debm::io::{SequenceFormat, SequenceSource, SynthKind, SynthParams};
use debm::{Error, Result};
use debm_core::{Algorithm, SearchConfig};

/// Block-matching motion estimation benchmark.
#[derive(Parser)]
#[command(name = "debm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one algorithm over a sequence and score its predictions.
    Run {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "debm")]
        algo: Algorithm,
        /// Report file; `.csv` writes per-frame rows, anything else JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        /// CSV of every block's motion vector.
        #[arg(long)]
        mv_dump: Option<PathBuf>,
    },
    /// Compare algorithms against the full search.
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_value = "fsa,debm,tss,ds")]
        algos: Vec<Algorithm>,
        /// Stored full-search JSON report, used when `fsa` is not listed.
        #[arg(long)]
        reference: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dump the search pattern of one block.
    Trace {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "debm")]
        algo: Algorithm,
        /// Top-left corner of the block, `x,y`.
        #[arg(long, value_parser = parse_pair::<usize>)]
        trace_block: (usize, usize),
        /// Predicted frame; matched against the one before it.
        #[arg(long, default_value_t = 1)]
        frame: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// Sequence file or PGM locator; for `--format synth` the sequence kind
    /// (static, translate, random-texture).
    #[arg(long)]
    input: String,
    /// y4m, raw, pgm or synth.
    #[arg(long, default_value = "y4m")]
    format: String,
    /// Frame width (raw and synth).
    #[arg(long)]
    width: Option<usize>,
    /// Frame height (raw and synth).
    #[arg(long)]
    height: Option<usize>,
    /// Maximum number of frames to read or generate.
    #[arg(long)]
    frames: Option<usize>,
    #[arg(long, default_value_t = 16)]
    block_size: usize,
    #[arg(long, default_value_t = 7)]
    search_range: i32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Per-frame motion of a synthetic sequence, `u,v`.
    #[arg(long, value_parser = parse_pair::<i32>, default_value = "0,0", allow_hyphen_values = true)]
    motion: (i32, i32),
    /// Blur radius of the random texture.
    #[arg(long, default_value_t = DEFAULT_SMOOTHNESS)]
    smoothness: usize,
    /// Search blocks on one thread.
    #[arg(long)]
    serial: bool,
}

impl Common {
    fn input(&self) -> Result<Input> {
        if self.format.eq_ignore_ascii_case("synth") {
            let d = SynthParams::default();
            return Ok(Input::Synth(SynthParams {
                kind: self.input.parse::<SynthKind>()?,
                width: self.width.unwrap_or(d.width),
                height: self.height.unwrap_or(d.height),
                frames: self.frames.unwrap_or(d.frames),
                du: self.motion.0,
                dv: self.motion.1,
                max_motion: self.search_range,
                smoothness: self.smoothness,
                seed: self.seed,
            }));
        }
        let format: SequenceFormat = self.format.parse()?;
        if format != SequenceFormat::RawYuv420 && (self.width.is_some() || self.height.is_some()) {
            return Err(Error::Config("--width/--height apply to raw and synth input only".into()));
        }
        Ok(Input::File(SequenceSource {
            format,
            path: self.input.clone().into(),
            width: self.width,
            height: self.height,
            frame_limit: self.frames,
        }))
    }

    fn search(&self) -> SearchConfig {
        SearchConfig { w: self.search_range, n: self.block_size, ..SearchConfig::default() }
    }
}

fn parse_pair<T: std::str::FromStr>(s: &str) -> std::result::Result<(T, T), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `a,b`, got `{s}`"))?;
    let parse = |t: &str| t.trim().parse::<T>().map_err(|_| format!("invalid number `{t}` in `{s}`"));
    Ok((parse(a)?, parse(b)?))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { common, algo, out, mv_dump } => {
            let config = RunConfig {
                input: common.input()?,
                algorithm: algo,
                search: common.search(),
                seed: common.seed,
                out,
                mv_dump,
                parallel: !common.serial,
            };
            println!("{}", summary_line(&cmd_run(&config)?));
        }
        Command::Compare { common, algos, reference, out } => {
            let rows = cmd_compare(&CompareConfig {
                input: common.input()?,
                algorithms: algos,
                search: common.search(),
                seed: common.seed,
                reference,
                out,
                parallel: !common.serial,
            })?;
            print!("{}", compare_table(&rows));
        }
        Command::Trace { common, algo, trace_block, frame, out } => {
            let doc = cmd_trace(&TraceConfig {
                input: common.input()?,
                algorithm: algo,
                search: common.search(),
                seed: common.seed,
                block: trace_block,
                frame,
                out,
            })?;
            println!(
                "{} block ({}, {}) frame {}: mv ({}, {}) sad {} evaluations {} estimations {}",
                doc.algorithm,
                doc.block.x,
                doc.block.y,
                doc.frame,
                doc.mv.u,
                doc.mv.v,
                doc.sad,
                doc.evaluations,
                doc.estimations
            );
            for row in &doc.rows {
                println!("{row}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
