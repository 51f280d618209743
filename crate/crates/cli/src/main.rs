use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use levelzero::explorer::bfs;
use levelzero::ls::{validate_ls, LsPath};
use levelzero::verify::campaign::{bundled, run_campaign, CampaignConfig};
use levelzero::weyl::orbit_order;
use levelzero::{AffineData, AlgebraSpec, Error, ExploreLimits, Path, RootOperators};

/// Exit code for exploration caps and window truncation.
const TRUNCATED: u8 = 3;

#[derive(Parser)]
#[command(name = "levelzero", version, about = "Exact path crystals for level-zero weights of affine algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print marks, comarks, δ, level-zero fundamental weights and the Gram matrix.
    Algebra {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Explore the crystal of the straight path to ϖ_i as a colored graph.
    Crystal {
        #[arg(long)]
        algebra: PathBuf,
        /// Index i of the level-zero fundamental weight.
        #[arg(long)]
        shape: usize,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
        #[arg(long, default_value_t = levelzero::explorer::DEFAULT_NODE_CAP)]
        node_cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the chain condition of an LS path of shape ϖ_i.
    Ls {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        shape: usize,
        /// JSON file with {"directions": [...], "cuts": [...]}.
        #[arg(long)]
        path: PathBuf,
        /// Coordinate bound of the orbit window.
        #[arg(long, default_value_t = 3)]
        bound: i64,
    },
    /// Run a verification campaign: a config file or a bundled name (a1-smoke).
    Verify {
        #[arg(long)]
        config: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read_algebra(path: &FsPath) -> anyhow::Result<AffineData> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text).context("algebra file is not JSON")?;
    // A bare matrix is accepted as well as {"cartan": ..., "special_vertex": ...}.
    let spec: AlgebraSpec = if value.is_array() {
        AlgebraSpec { cartan: serde_json::from_value(value)?, special_vertex: 0 }
    } else {
        serde_json::from_value(value)?
    };
    Ok(spec.build()?)
}

fn emit(text: &str, out: Option<&FsPath>) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Algebra { algebra, out } => {
            let data = read_algebra(&algebra)?;
            let text = serde_json::to_string_pretty(&data.summary()?)? + "\n";
            emit(&text, out.as_deref())?;
            Ok(0)
        }
        Command::Crystal { algebra, shape, depth, format, node_cap, out } => {
            let data = read_algebra(&algebra)?;
            if !data.nonspecial().contains(&shape) {
                bail!("shape index {shape} is not a non-special vertex");
            }
            let ops = RootOperators::new(&data);
            let start = Path::straight(data.fundamental_level_zero(shape)?);
            let graph = match bfs(&ops, &start, &data.all_indices(), ExploreLimits { depth, node_cap }) {
                Ok(g) => g,
                Err(e @ Error::CapExceeded(_)) => {
                    eprintln!("levelzero: {e}");
                    return Ok(TRUNCATED);
                }
                Err(e) => return Err(e.into()),
            };
            let text = match format {
                Format::Dot => graph.to_dot(),
                Format::Json => serde_json::to_string_pretty(&graph.to_json())? + "\n",
            };
            emit(&text, out.as_deref())?;
            Ok(0)
        }
        Command::Ls { algebra, shape, path, bound } => {
            let data = read_algebra(&algebra)?;
            let text = fs::read_to_string(&path).with_context(|| format!("cannot read {}", path.display()))?;
            let candidate: LsPath = serde_json::from_str(&text).context("bad LS path")?;
            let order = orbit_order(&data, &data.fundamental_level_zero(shape)?, &data.all_indices(), bound)?;
            let v = validate_ls(&candidate, &order);
            println!("{}", serde_json::to_string_pretty(&v)?);
            Ok(match (v.valid, v.truncated) {
                (true, _) => 0,
                (false, true) => TRUNCATED,
                (false, false) => 2,
            })
        }
        Command::Verify { config, out } => {
            let cfg = match bundled(&config) {
                Some(text) => CampaignConfig::parse(text)?,
                None => CampaignConfig::load(FsPath::new(&config))?,
            };
            let outcome = run_campaign(&cfg)?;
            let dir = out.or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("reports"));
            outcome.write(&dir).with_context(|| format!("cannot write reports to {}", dir.display()))?;
            for (tag, r) in &outcome.reports {
                eprintln!("{tag}: {}", serde_json::to_value(r.verdict)?.as_str().unwrap_or("?"));
            }
            Ok(outcome.exit_code() as u8)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("levelzero: {e:#}");
            ExitCode::from(1)
        }
    }
}
