use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use dbmapper::density::DensityProfile;
use dbmapper::io::{read_csv_path, write_csv, write_values_csv};
use dbmapper::persistence::{graph_diagram, reeb_oracle};
use dbmapper::synthgen::{gen_circle, gen_genus1, gen_genus1_checked, gen_three_component, SynthSpec};
use dbmapper::{ClustererSpec, WidthScaler};
use dbmapper_cli::config::PipelineOptions;
use dbmapper_cli::error::{CliError, CliResult};
use dbmapper_cli::pipeline::{execute, load_input, run_pipeline};
use dbmapper_cli::sweep::sweep_grid;
use dbmapper_cli::verify::verify_bound;

#[derive(Parser)]
#[command(name = "dbmapper", version, about = "Density-based Mapper graphs and their verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a Mapper graph and write exports plus a run manifest.
    Run {
        /// TOML file with the same keys as the flags
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        options: PipelineOptions,
    },
    /// Sweep a grid of (N, g) in standard and density-based mode.
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        options: PipelineOptions,
        #[arg(long, value_delimiter = ',', default_value = "10,15,20,25,30")]
        n_values: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0.2,0.35,0.5,0.65,0.8")]
        g_values: Vec<f64>,
        /// Expected Betti numbers b0,b1
        #[arg(long, value_delimiter = ',', required = true)]
        expected: Vec<usize>,
    },
    /// Generate a synthetic dataset as CSV.
    Synth {
        #[arg(value_enum)]
        kind: SynthKind,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// JSON spec overriding the built-in component layout
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Circle point count
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value_t = 0.01)]
        noise: f64,
        /// Reseed genus-1 data until the Rips Reeb graph at this scale has b = (2, 1)
        #[arg(long)]
        check_delta: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-point inverse density, smoothed value and width multiplier as CSV.
    Density {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        lens_column: Option<String>,
        #[arg(long, default_value_t = 15)]
        k: usize,
        #[arg(long, default_value_t = 3.0)]
        c_max: f64,
        #[arg(long, default_value_t = 1.0)]
        rate_sensitivity: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check d_B(Mapper, Reeb) <= r + 2 omega(delta) and diagram inclusion.
    Verify {
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        options: PipelineOptions,
        /// Dense reference sample for the Hausdorff hypothesis
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Rips scale; defaults to --delta
        #[arg(long)]
        rips_delta: Option<f64>,
    },
    /// Emit the extended persistence diagram of the Mapper graph as JSON lines.
    Diagram {
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        options: PipelineOptions,
        /// Emit the Reeb oracle diagram at this Rips scale instead
        #[arg(long)]
        reeb: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SynthKind {
    ThreeComponent,
    Genus1,
    Circle,
}

fn output(path: Option<&PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Run { config, options } => {
            let cfg = options.resolve(config.as_deref())?;
            let (_, manifest, path) = run_pipeline(&cfg)?;
            println!(
                "V={} E={} betti=({}, {}) manifest={}",
                manifest.vertex_count,
                manifest.edge_count,
                manifest.betti.0,
                manifest.betti.1,
                path.display()
            );
        }
        Command::Sweep {
            config,
            options,
            n_values,
            g_values,
            expected,
        } => {
            let [b0, b1] = expected[..] else {
                return Err(CliError::Validation("--expected takes two values, b0,b1".into()));
            };
            let cfg = options.resolve(config.as_deref())?;
            let (cloud, lens) = load_input(&cfg)?;
            let sweep = sweep_grid(&cfg, &cloud, &lens, &n_values, &g_values, (b0, b1))?;
            std::fs::create_dir_all(&cfg.out_dir)?;
            std::fs::write(cfg.out_dir.join("sweep.json"), serde_json::to_string_pretty(&sweep.report)? + "\n")?;
            std::fs::write(cfg.out_dir.join("sweep.svg"), sweep.to_svg(&cloud))?;
            print!("{}", sweep.report.table());
        }
        Command::Synth {
            kind,
            seed,
            spec,
            n,
            radius,
            noise,
            check_delta,
            out,
        } => {
            let spec = match spec {
                Some(p) => {
                    let mut s: SynthSpec = serde_json::from_reader(File::open(p)?)?;
                    s.seed = seed;
                    Some(s)
                }
                None => None,
            };
            let (cloud, lens) = match kind {
                SynthKind::ThreeComponent => {
                    gen_three_component(&spec.unwrap_or_else(|| SynthSpec::three_component(seed)))?
                }
                SynthKind::Genus1 => {
                    let spec = spec.unwrap_or_else(|| SynthSpec::genus1(seed));
                    match check_delta {
                        Some(d) => gen_genus1_checked(&spec, d, 10)?,
                        None => gen_genus1(&spec)?,
                    }
                }
                SynthKind::Circle => gen_circle(n, radius, noise, seed)?,
            };
            write_csv(output(out.as_ref())?, &cloud, &lens)?;
        }
        Command::Density {
            input,
            lens_column,
            k,
            c_max,
            rate_sensitivity,
            out,
        } => {
            let (cloud, lens) = read_csv_path(&input, lens_column.as_deref())?;
            let scaler = WidthScaler::new(c_max, rate_sensitivity)?;
            let profile = DensityProfile::compute(&cloud, &lens, k)?;
            let c = profile.multipliers(&scaler);
            log::info!("mu={} sigma={}", profile.mean_mu, profile.std_sigma);
            write_values_csv(
                output(out.as_ref())?,
                &[("raw", &profile.raw), ("beta", &profile.smoothed), ("multiplier", &c)],
            )?;
        }
        Command::Verify {
            config,
            options,
            reference,
            rips_delta,
        } => {
            let cfg = options.clone().resolve(config.as_deref())?;
            let delta = rips_delta
                .or(options.delta)
                .or(match cfg.clusterer {
                    ClustererSpec::SingleLinkage { delta } => Some(delta),
                    _ => None,
                })
                .ok_or_else(|| CliError::Validation("verify needs --rips-delta or --delta".into()))?;
            let (cloud, lens) = load_input(&cfg)?;
            let reference = match reference {
                Some(p) => Some(read_csv_path(&p, cfg.lens_column.as_deref())?.0),
                None => None,
            };
            let cover = cfg.build_cover(&lens, cfg.n_checkpoints, cfg.overlap)?;
            let report = verify_bound(&cloud, &lens, reference.as_ref(), &cover, &cfg.mapper_params()?, delta)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            println!("{}", report.summary());
            if !report.pass {
                return Err(CliError::Verification(report.summary()));
            }
        }
        Command::Diagram {
            config,
            options,
            reeb,
            out,
        } => {
            let cfg = options.resolve(config.as_deref())?;
            let (cloud, lens) = load_input(&cfg)?;
            let diagram = match reeb {
                Some(delta) => graph_diagram(&reeb_oracle(&cloud, &lens, delta)?),
                None => graph_diagram(&execute(&cfg, &cloud, &lens)?.0.graph),
            };
            diagram.write_jsonl(output(out.as_ref())?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are validation errors, not verification failures
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
