use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use lrm_core::defect::{consistency, jump_total, ostrowski, ExtensionData, FamilyDecomposition};
use lrm_core::document::{load_oracle, ArcDocument, MonomialDocument, TransformDoc, TruncDoc};
use lrm_core::oracle::ValuationOracle;
use lrm_core::perron::{build_a6_divide, monomialize, DEFAULT_PERRON_STEPS};
use lrm_core::reduce::{reduce_document, DEFAULT_TRANSLATIONS};
use lrm_core::{Bounds, Error, Polynomial, ReductionStatus, Trace};

/// Reduction of multiplicity along a valuation, with Perron transforms.
#[derive(Parser)]
#[command(name = "lrm", version)]
struct Cli {
    /// Print progress details to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Value of a polynomial under an oracle document (arc, monomial or chain).
    Valuate {
        #[arg(long)]
        oracle: PathBuf,
        #[arg(long)]
        poly: String,
        /// Override the arc truncation order.
        #[arg(long)]
        trunc: Option<String>,
    },
    /// Reduce the multiplicity of the curve in an arc document.
    Reduce(ReduceArgs),
    /// Re-run a trace document and check every intermediate equation.
    Replay { trace: PathBuf },
    #[command(subcommand)]
    Perron(PerronCommand),
    /// Defect from degree data, optionally checked against a family decomposition.
    Defect(DefectArgs),
    #[command(subcommand)]
    Chain(ChainCommand),
}

#[derive(Args)]
struct ReduceArgs {
    document: PathBuf,
    /// Write the trace document here.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long)]
    trunc: Option<String>,
    #[arg(long, default_value_t = DEFAULT_TRANSLATIONS as u64, value_parser = clap::value_parser!(u64).range(1..))]
    max_translations: u64,
    #[arg(long, default_value_t = DEFAULT_PERRON_STEPS as u64, value_parser = clap::value_parser!(u64).range(1..))]
    max_perron_steps: u64,
    /// Try the case-2 substitution when the approximation ladder stays in the base group.
    #[arg(long)]
    case2_on_ladder: bool,
}

#[derive(Subcommand)]
enum PerronCommand {
    /// Transform after which monomial `m1` divides monomial `m2`.
    Divide {
        #[arg(long)]
        weights: PathBuf,
        #[arg(long)]
        m1: String,
        #[arg(long)]
        m2: String,
        #[arg(long, default_value_t = DEFAULT_PERRON_STEPS as u64, value_parser = clap::value_parser!(u64).range(1..))]
        max_perron_steps: u64,
    },
    /// Transforms making a polynomial a monomial times a unit.
    Monomialize {
        #[arg(long)]
        weights: PathBuf,
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = DEFAULT_PERRON_STEPS as u64, value_parser = clap::value_parser!(u64).range(1..))]
        max_perron_steps: u64,
    },
}

#[derive(Args)]
struct DefectArgs {
    #[arg(long)]
    degree: u64,
    /// Ramification index; computed from `--oracle` when omitted.
    #[arg(long)]
    e: Option<u64>,
    #[arg(long, default_value_t = 1)]
    f: u64,
    /// Residue characteristic, 1 for characteristic 0; taken from `--oracle` when omitted.
    #[arg(long)]
    p: Option<u64>,
    /// Arc document whose realized value groups give `e`.
    #[arg(long)]
    oracle: Option<PathBuf>,
    #[arg(long)]
    decomposition: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ChainCommand {
    /// Value of a polynomial under an augmented chain document.
    Value {
        #[arg(long)]
        chain: PathBuf,
        #[arg(long)]
        poly: String,
    },
}

const EXIT_INPUT: u8 = 2;
const EXIT_DEFECT: u8 = 3;
const EXIT_BOUND: u8 = 4;

enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn trunc(t: &Option<String>) -> Result<Option<lrm_core::Exponent>, Failure> {
    Ok(match t {
        Some(s) => Some(TruncDoc::Text(s.clone()).exponent()?),
        None => None,
    })
}

fn valuate(oracle: &Path, poly: &str, t: &Option<String>) -> Outcome {
    let mut o = load_oracle(&read(oracle)?)?;
    if let (Some(t), ValuationOracle::Arc(a)) = (trunc(t)?, &o) {
        o = ValuationOracle::Arc(a.truncated(t));
    }
    let g = Polynomial::parse(o.ring(), poly)?;
    println!("{}", o.value(&g)?);
    Ok(0)
}

fn reduce(args: &ReduceArgs, verbose: bool) -> Outcome {
    let doc = ArcDocument::parse(&read(&args.document)?)?;
    let bounds = Bounds {
        max_translations: args.max_translations as usize,
        max_perron_steps: args.max_perron_steps as usize,
        case2_on_ladder: args.case2_on_ladder,
    };
    let red = reduce_document(&doc, trunc(&args.trunc)?, &bounds)?;
    if verbose {
        for s in &red.trace.steps {
            eprintln!("{:<20} {}", s.kind.to_string(), s.f);
        }
    }
    println!("status={}", red.status);
    if let Some(r) = red.trace.r {
        println!("r={r}");
    }
    println!("f={}", red.state.f());
    let certs = &red.trace.certificates;
    if !certs.ladder.is_empty() {
        println!("ladder={}", certs.ladder.join(","));
    }
    if let Some(d) = &certs.diagnostic {
        println!("diagnostic={d}");
    }
    if let Some(out) = &args.output {
        fs::write(out, red.trace.to_json() + "\n")
            .map_err(|e| Failure::Io(format!("{}: {e}", out.display())))?;
    }
    Ok(match red.status {
        ReductionStatus::ReducedToSmooth | ReductionStatus::MultiplicityDropped(_) => 0,
        ReductionStatus::DefectSuspected => EXIT_DEFECT,
        ReductionStatus::BoundExhausted => EXIT_BOUND,
    })
}

fn replay(path: &Path) -> Outcome {
    let t = Trace::from_json(&read(path)?)?;
    let f = t.replay()?;
    println!("steps={}", t.steps.len());
    println!("f={f}");
    Ok(0)
}

fn single_monomial(p: &Polynomial, what: &str) -> Result<Vec<u32>, Failure> {
    match p.terms().collect::<Vec<_>>().as_slice() {
        [(m, c)] if c.is_one() => Ok(m.exponents().to_vec()),
        _ => Err(Error::Parse(format!("{what} must be a monic monomial, got `{p}`")).into()),
    }
}

fn perron(cmd: &PerronCommand) -> Outcome {
    match cmd {
        PerronCommand::Divide {
            weights,
            m1,
            m2,
            max_perron_steps,
        } => {
            let w = MonomialDocument::parse(&read(weights)?)?;
            let ring = w.ring.ring()?;
            let e1 = single_monomial(&Polynomial::parse(ring, m1)?, "--m1")?;
            let e2 = single_monomial(&Polynomial::parse(ring, m2)?, "--m2")?;
            let t = build_a6_divide(&e1, &e2, &w.values()?, *max_perron_steps as usize)?;
            println!(
                "{}",
                serde_json::to_string(&TransformDoc::from(&t)).expect("json")
            );
            Ok(0)
        }
        PerronCommand::Monomialize {
            weights,
            poly,
            max_perron_steps,
        } => {
            let o = MonomialDocument::parse(&read(weights)?)?.oracle()?;
            let g = Polynomial::parse(o.ring(), poly)?;
            let res = monomialize(&g, &o, o.ring().m, *max_perron_steps as usize)?;
            let transforms: Vec<TransformDoc> =
                res.transforms.iter().map(TransformDoc::from).collect();
            let out = json!({
                "version": 1,
                "kind": "monomialization",
                "transforms": transforms,
                "exponents": res.exponents,
                "unit": res.unit.to_string(),
                "weights": res.weights.iter().map(ToString::to_string).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string(&out).expect("json"));
            Ok(0)
        }
    }
}

fn defect(args: &DefectArgs) -> Outcome {
    let x = match &args.oracle {
        Some(path) => {
            let o = ArcDocument::parse(&read(path)?)?.oracle()?;
            let from = ExtensionData::from_arc(&o, args.degree)?;
            ExtensionData::new(
                args.degree,
                args.e.unwrap_or(from.e),
                args.f,
                args.p.unwrap_or(from.p),
            )?
        }
        None => {
            let e = args
                .e
                .ok_or_else(|| Error::Precondition("give --e or --oracle".into()))?;
            let p = args
                .p
                .ok_or_else(|| Error::Precondition("give --p or --oracle".into()))?;
            ExtensionData::new(args.degree, e, args.f, p)?
        }
    };
    let delta = ostrowski(&x)?;
    println!("e={}", x.e);
    println!("delta={delta}");
    if let Some(path) = &args.decomposition {
        let d = FamilyDecomposition::parse(&read(path)?)?;
        println!("jump_total={}", jump_total(&d)?);
        println!("consistent={}", consistency(&x, &d)?);
    }
    Ok(0)
}

fn chain(cmd: &ChainCommand) -> Outcome {
    match cmd {
        ChainCommand::Value { chain, poly } => {
            let o = load_oracle(&read(chain)?)?;
            if !matches!(o, ValuationOracle::Chain(_)) {
                return Err(Error::Parse("expected a chain document".into()).into());
            }
            let g = Polynomial::parse(o.ring(), poly)?;
            println!("{}", o.value(&g)?);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Valuate {
            oracle,
            poly,
            trunc,
        } => valuate(oracle, poly, trunc),
        Command::Reduce(args) => reduce(args, cli.verbose),
        Command::Replay { trace } => replay(trace),
        Command::Perron(cmd) => perron(cmd),
        Command::Defect(args) => defect(args),
        Command::Chain(cmd) => chain(cmd),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if matches!(e, Error::Internal(_)) {
                1
            } else {
                EXIT_INPUT
            })
        }
    }
}
