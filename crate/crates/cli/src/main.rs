use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use asymde::config::{ExperimentConfig, ProtocolKind};
use asymde::io::{read_bits, read_sketch, read_subsets, write_bits, write_sketch};
use asymde::record::{read_jsonl, write_jsonl};
use asymde::report::{render_text, summarize, write_csv};
use asymde::runner::{require_protocol, run_experiment, THREADS_ENV};
use asymde_core::edit::{alice_edit_sketch, bob_edit_recover};
use asymde_core::hamming::protocol::{
    alice_general, alice_grouped, alice_one_set, alice_special, bob_general, bob_grouped, bob_one_set, bob_special,
};
use asymde_core::hamming::ProtocolId;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "asymde", version, about = "Document exchange with asymmetric information: experiments and sketch tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hamming-distance protocols.
    Hamming {
        #[command(subcommand)]
        op: HammingOp,
    },
    /// Edit-distance protocol.
    Edit {
        #[command(subcommand)]
        op: EditOp,
    },
    /// Stochastic error-correcting code.
    Ecc {
        #[command(subcommand)]
        op: EccOp,
    },
    /// Expander graph checks.
    Expander {
        #[command(subcommand)]
        op: ExpanderOp,
    },
    /// Aggregate JSON-lines trial records into a per-cell table.
    Report {
        /// Records file; `-` reads stdin.
        #[arg(long, default_value = "-")]
        input: String,
        /// Also write the table as CSV here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum HammingOp {
    /// Run trials from a config file.
    Run(RunArgs),
    /// Alice: sketch a bit file.
    Sketch {
        #[arg(long, value_enum)]
        protocol: HammingProtocol,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        bounds: Vec<usize>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        consts: ConstArgs,
    },
    /// Bob: recover Alice's string from his bit file, subsets and a sketch.
    Recover {
        #[arg(long)]
        input: PathBuf,
        /// JSON file with n, sizes, bounds and subsets.
        #[arg(long)]
        subsets: PathBuf,
        #[arg(long)]
        sketch: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        consts: ConstArgs,
    },
}

#[derive(Subcommand)]
enum EditOp {
    Run(RunArgs),
    Sketch {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        consts: ConstArgs,
    },
    Recover {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        sketch: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        consts: ConstArgs,
    },
}

#[derive(Subcommand)]
enum EccOp {
    Run(RunArgs),
}

#[derive(Subcommand)]
enum ExpanderOp {
    /// Empirical expansion-failure rates of planned graphs.
    Verify(RunArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum HammingProtocol {
    OneSet,
    General,
    Grouped,
    Special,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    master_seed: Option<u64>,
    /// Records file; defaults to the config's `output`, else stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, env = THREADS_ENV)]
    threads: Option<usize>,
    /// Leave wall time out of the records.
    #[arg(long)]
    no_timing: bool,
    #[command(flatten)]
    consts: ConstArgs,
}

#[derive(Args, Default)]
struct ConstArgs {
    #[arg(long)]
    c_d: Option<f64>,
    #[arg(long)]
    c_m: Option<f64>,
    #[arg(long)]
    c_s: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    conservative: bool,
    #[arg(long)]
    chi_base: Option<u32>,
    #[arg(long)]
    hash_bits: Option<u32>,
    #[arg(long)]
    c_prime: Option<f64>,
    /// Edit recovery: fill unmatched blocks from neighbouring offsets.
    #[arg(long)]
    fill_gaps: bool,
    /// Edit recovery: retry failed hash bit planes using the others.
    #[arg(long)]
    joint_planes: bool,
}

impl ConstArgs {
    fn apply(&self, cfg: &mut ExperimentConfig) {
        if let Some(v) = self.c_d {
            cfg.c_d = v;
        }
        if let Some(v) = self.c_m {
            cfg.c_m = v;
        }
        if let Some(v) = self.c_s {
            cfg.c_s = v;
        }
        if let Some(v) = self.delta {
            cfg.delta = v;
        }
        if self.conservative {
            cfg.conservative = true;
        }
        if let Some(v) = self.chi_base {
            cfg.chi_base = v;
        }
        if let Some(v) = self.hash_bits {
            cfg.hash_bits = v;
        }
        if let Some(v) = self.c_prime {
            cfg.c_prime = v;
        }
        if self.fill_gaps {
            cfg.fill_gaps = true;
        }
        if self.joint_planes {
            cfg.joint_planes = true;
        }
    }

    fn config(&self) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::default();
        self.apply(&mut cfg);
        cfg
    }
}

fn run(args: &RunArgs, expected: &[ProtocolKind]) -> Result<()> {
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if let Some(t) = args.trials {
        cfg.trials = t;
    }
    if let Some(s) = args.master_seed {
        cfg.master_seed = s;
    }
    if args.out.is_some() {
        cfg.output = args.out.clone();
    }
    if args.threads.is_some() {
        cfg.threads = args.threads;
    }
    if args.no_timing {
        cfg.timing = false;
    }
    args.consts.apply(&mut cfg);
    require_protocol(&cfg, expected)?;
    let records = run_experiment(&cfg)?;
    match &cfg.output {
        Some(path) => {
            let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_jsonl(BufWriter::new(f), &records)?;
        }
        None => write_jsonl(io::stdout().lock(), &records)?,
    }
    eprint!("{}", render_text(&summarize(&records)));
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Hamming { op } => match op {
            HammingOp::Run(a) => run(
                &a,
                &[ProtocolKind::OneSet, ProtocolKind::General, ProtocolKind::Grouped, ProtocolKind::Special],
            ),
            HammingOp::Sketch {
                protocol,
                input,
                sizes,
                bounds,
                seed,
                out,
                consts,
            } => {
                let cfg = consts.config();
                let hc = cfg.hamming_config();
                let x = read_bits(&input)?;
                let sk = match protocol {
                    HammingProtocol::OneSet => {
                        if sizes.len() != 1 || bounds.len() != 1 {
                            bail!("one-set takes a single size and bound");
                        }
                        alice_one_set(&x, sizes[0], bounds[0], seed, &hc)?
                    }
                    HammingProtocol::General => alice_general(&x, &sizes, &bounds, seed, &hc)?,
                    HammingProtocol::Grouped => alice_grouped(&x, &sizes, &bounds, cfg.chi_base, seed, &hc)?,
                    HammingProtocol::Special => alice_special(&x, &sizes, &bounds, None, seed, &hc)?,
                };
                write_sketch(&out, &sk)?;
                eprintln!("{} payload bits, {} bits on the wire", sk.payload_bits(), sk.size_bits());
                Ok(())
            }
            HammingOp::Recover {
                input,
                subsets,
                sketch,
                seed,
                out,
                consts,
            } => {
                let cfg = consts.config();
                let hc = cfg.hamming_config();
                let y = read_bits(&input)?;
                let spec = read_subsets(&subsets)?;
                let sk = read_sketch(&sketch)?;
                let x = match sk.protocol {
                    // A grouped sketch with one group uses the one-set format.
                    ProtocolId::OneSet if spec.t() == 1 => {
                        let s = &spec.subsets().expect("subset file has subsets")[0];
                        bob_one_set(&y, s, spec.bounds()[0], &sk, seed, &hc)?
                    }
                    ProtocolId::OneSet | ProtocolId::Grouped => bob_grouped(&y, &spec, cfg.chi_base, &sk, seed, &hc)?,
                    ProtocolId::General => bob_general(&y, &spec, &sk, seed, &hc)?,
                    ProtocolId::Special => bob_special(&y, &spec, None, &sk, seed, &hc)?,
                    ProtocolId::Edit => bail!("this is an edit sketch; use `edit recover`"),
                };
                write_bits(&out, &x)
            }
        },
        Command::Edit { op } => match op {
            EditOp::Run(a) => run(&a, &[ProtocolKind::Edit]),
            EditOp::Sketch {
                input,
                k,
                seed,
                out,
                consts,
            } => {
                let x = read_bits(&input)?;
                let sk = alice_edit_sketch(&x, k, seed, &consts.config().edit_config())?;
                write_sketch(&out, &sk)?;
                eprintln!("{} payload bits, {} bits on the wire", sk.payload_bits(), sk.size_bits());
                Ok(())
            }
            EditOp::Recover {
                input,
                k,
                sketch,
                seed,
                out,
                consts,
            } => {
                let y = read_bits(&input)?;
                let sk = read_sketch(&sketch)?;
                let x = bob_edit_recover(&y, k, &sk, seed, &consts.config().edit_config())?;
                write_bits(&out, &x)
            }
        },
        Command::Ecc { op: EccOp::Run(a) } => run(&a, &[ProtocolKind::Ecc]),
        Command::Expander {
            op: ExpanderOp::Verify(a),
        } => run(&a, &[ProtocolKind::Expander]),
        Command::Report { input, csv } => {
            let records = if input == "-" {
                read_jsonl(io::stdin().lock())?
            } else {
                let f = File::open(&input).with_context(|| format!("opening {input}"))?;
                read_jsonl(BufReader::new(f))?
            };
            let summaries = summarize(&records);
            if let Some(path) = csv {
                let f = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                write_csv(BufWriter::new(f), &summaries)?;
            }
            let mut out = io::stdout().lock();
            out.write_all(render_text(&summaries).as_bytes())?;
            Ok(())
        }
    }
}
