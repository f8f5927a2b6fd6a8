use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use minatar_agents::AgentKind;
use minatar_core::{EnvConfig, GameId, DEFAULT_STICKY_PROB};
use minatar_harness::output::{load_records, save_records, write_summary_csv};
use minatar_harness::{
    bench_agent, bench_env, load_replay, parse_alpha_range, record_replay, run, select_alpha,
    summarize_final100, ExperimentSpec, RecordPolicy, RunRecord, Seeds, Summary,
};

#[derive(Parser)]
#[command(
    name = "minatar",
    version,
    about = "MinAtar experiments, benchmarks and replays"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train one agent configuration over a set of seeds.
    Run(ExperimentArgs),
    /// Train over a step-size range and pick the step size.
    Sweep(ExperimentArgs),
    /// Summarize an episode log written by `run` or `sweep`.
    Summarize {
        /// JSONL episode log.
        input: PathBuf,
        /// Write the summary CSV here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-frame latency of the environment (and optionally an agent).
    Bench {
        /// Game to time; all games when omitted.
        #[arg(long)]
        game: Option<GameId>,
        #[arg(long, default_value_t = 1_000_000)]
        frames: u64,
        /// Also time a full training step with this agent.
        #[arg(long)]
        agent: Option<AgentKind>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Record or verify replay files
    #[command(subcommand)]
    Replay(ReplayCommand),
}

#[derive(Subcommand)]
enum ReplayCommand {
    /// Record one episode to a JSONL replay file.
    Record {
        #[arg(long)]
        game: GameId,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_STICKY_PROB)]
        sticky: f64,
        #[arg(long)]
        no_ramping: bool,
        /// random, noop or fire.
        #[arg(long, default_value = "random")]
        policy: RecordPolicy,
        #[arg(long, default_value_t = 10_000)]
        max_frames: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-simulate a replay file and check every logged frame.
    Verify { path: PathBuf },
}

#[derive(Args)]
struct ExperimentArgs {
    /// JSON experiment file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    game: Option<GameId>,
    /// random, qlin, qlin-noreplay, qlin-notarget, ac-lambda or ac0.
    #[arg(long)]
    agent: Option<AgentKind>,
    #[arg(long)]
    frames: Option<u64>,
    /// Seed count, or a comma-separated list of seeds.
    #[arg(long)]
    seeds: Option<String>,
    /// Step-size exponents: `lo..hi` (inclusive) or a single value.
    #[arg(long, allow_hyphen_values = true)]
    alpha_exp: Option<String>,
    #[arg(long)]
    no_ramping: bool,
    #[arg(long)]
    sticky: Option<f64>,
    /// Output directory for episodes.jsonl and summary.csv.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_seeds(s: &str) -> Result<Seeds> {
    if s.contains(',') {
        let seeds = s
            .split(',')
            .map(|x| x.trim().parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .with_context(|| format!("bad seed list `{s}`"))?;
        Ok(Seeds::List(seeds))
    } else {
        Ok(Seeds::Count(
            s.trim()
                .parse()
                .with_context(|| format!("bad seed count `{s}`"))?,
        ))
    }
}

impl ExperimentArgs {
    fn into_spec(self) -> Result<ExperimentSpec> {
        let mut spec = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                serde_json::from_str::<ExperimentSpec>(&text)
                    .with_context(|| format!("parsing {}", path.display()))?
            }
            None => {
                let (Some(game), Some(agent), Some(frames)) = (self.game, self.agent, self.frames)
                else {
                    bail!("--game, --agent and --frames are required without --config");
                };
                ExperimentSpec::new(game, agent, frames)
            }
        };
        if let Some(g) = self.game {
            spec.game = g;
        }
        if let Some(a) = self.agent {
            spec.agent = a;
        }
        if let Some(f) = self.frames {
            spec.frames = f;
        }
        if let Some(s) = &self.seeds {
            spec.seeds = parse_seeds(s)?;
        }
        if let Some(a) = &self.alpha_exp {
            spec.alpha_exps = parse_alpha_range(a)?;
        }
        if self.no_ramping {
            spec.ramping = false;
        }
        if let Some(s) = self.sticky {
            spec.sticky = s;
        }
        if let Some(dir) = &self.out {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            spec.out.episodes = Some(dir.join("episodes.jsonl"));
            spec.out.summary = Some(dir.join("summary.csv"));
        }
        spec.validate()?;
        Ok(spec)
    }
}

fn print_summary(summary: &Summary) {
    for w in &summary.warnings {
        eprintln!("warning: {w}");
    }
    println!(
        "{:>9} {:>12} {:>12} {:>6}",
        "log2(a)", "final100", "stderr", "seeds"
    );
    for r in &summary.rows {
        println!(
            "{:>9} {:>12.4} {:>12.4} {:>6}",
            r.alpha_exp, r.mean, r.stderr, r.seeds
        );
    }
}

fn write_summary(path: &Path, records: &[RunRecord], summary: &Summary) -> Result<()> {
    let Some(first) = records.first() else {
        return Ok(());
    };
    let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    write_summary_csv(file, first.key.game, first.key.agent, &summary.rows)?;
    Ok(())
}

fn experiment(args: ExperimentArgs, sweep: bool) -> Result<()> {
    let spec = args.into_spec()?;
    let records = run(&spec)?;
    for r in &records {
        let k = &r.key;
        eprintln!(
            "{} {} alpha=2^{} seed {}: {} episodes in {} frames, {:.0} ns/frame{}",
            k.game,
            k.agent,
            k.alpha_exp,
            k.seed,
            r.episodes.len(),
            r.frames,
            r.timing.ns_per_frame,
            if r.failed() { " (FAILED)" } else { "" }
        );
    }
    let summary = summarize_final100(&records);
    print_summary(&summary);
    if sweep {
        match select_alpha(&summary.rows) {
            Some(best) => println!("selected alpha = 2^{} ({})", best.alpha_exp, best.alpha),
            None => println!("no step size could be selected"),
        }
    }
    if let Some(path) = &spec.out.episodes {
        save_records(path, &records).with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = &spec.out.summary {
        write_summary(path, &records, &summary)?;
    }
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run(args) => experiment(args, false),
        Command::Sweep(args) => experiment(args, true),
        Command::Summarize { input, out } => {
            let records =
                load_records(&input).with_context(|| format!("reading {}", input.display()))?;
            let summary = summarize_final100(&records);
            print_summary(&summary);
            if let Some(best) = select_alpha(&summary.rows) {
                println!("selected alpha = 2^{} ({})", best.alpha_exp, best.alpha);
            }
            match out {
                Some(path) => write_summary(&path, &records, &summary),
                None => Ok(()),
            }
        }
        Command::Bench {
            game,
            frames,
            agent,
            seed,
        } => {
            if frames < minatar_harness::bench::MIN_BENCH_FRAMES {
                bail!(
                    "bench needs at least {} frames",
                    minatar_harness::bench::MIN_BENCH_FRAMES
                );
            }
            let games = game
                .map(|g| vec![g])
                .unwrap_or_else(|| GameId::ALL.to_vec());
            println!(
                "{:<15} {:<10} {:>11} {:>11} {:>10} {:>10}",
                "game", "mode", "median_ns", "p99_ns", "median_ms", "p99_ms"
            );
            for g in games {
                let mut rows = vec![("env", bench_env(g, frames, seed))];
                if let Some(kind) = agent {
                    rows.push((kind.name(), bench_agent(g, kind, frames, seed)));
                }
                for (mode, s) in rows {
                    println!(
                        "{:<15} {:<10} {:>11.0} {:>11.0} {:>10.5} {:>10.5}",
                        g.name(),
                        mode,
                        s.median_ns,
                        s.p99_ns,
                        s.median_ms(),
                        s.p99_ms()
                    );
                }
            }
            Ok(())
        }
        Command::Replay(ReplayCommand::Record {
            game,
            seed,
            sticky,
            no_ramping,
            policy,
            max_frames,
            out,
        }) => {
            let config = EnvConfig::new(game, seed)
                .with_sticky(sticky)
                .with_ramping(!no_ramping);
            config.validate()?;
            let replay = record_replay(&config, policy, max_frames, Some(&out))?;
            println!(
                "recorded {} frames, return {}, to {}",
                replay.frames.len(),
                replay.total_reward(),
                out.display()
            );
            Ok(())
        }
        Command::Replay(ReplayCommand::Verify { path }) => match load_replay(&path) {
            Ok(replay) => {
                println!(
                    "ok: {} frames, return {}",
                    replay.frames.len(),
                    replay.total_reward()
                );
                Ok(())
            }
            Err(e) => {
                eprintln!("corrupt replay: {e}");
                Err(io::Error::new(io::ErrorKind::InvalidData, e.to_string()).into())
            }
        },
    }
}
