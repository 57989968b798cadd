use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use loopspace::selftest::{run_selftest, Fault, SelftestConfig};
use loopspace::spheres::{homotopy_of_manifold, resolve_table};
use loopspace::{Error, FiniteAbelianGroup, ManifoldModel};

use loopspace_cli::report;

const EXIT_FAILURE: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_TABLE: u8 = 3;

#[derive(Parser)]
#[command(name = "loopspace", version, about = "Loop-space homology and homotopy of highly connected odd-dimensional manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Homology, loop homology, sphere multiplicities and the loop-space splitting.
    Report(ReportArgs),
    /// pi_k(M) with the torsion primes inverted.
    Homotopy(HomotopyArgs),
    /// Run the cross-oracle suites.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct ManifoldArgs {
    /// Connectivity: M is (n-1)-connected of dimension 2n+1.
    #[arg(long)]
    n: i64,
    /// Free rank of H_n(M).
    #[arg(long)]
    r: i64,
    /// Comma-separated cyclic orders of the torsion of H_n, or "-".
    #[arg(long, default_value = "-")]
    torsion: String,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    manifold: ManifoldArgs,
    /// Highest degree computed.
    #[arg(long, default_value_t = 20)]
    cap: i64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct HomotopyArgs {
    #[command(flatten)]
    manifold: ManifoldArgs,
    /// Homotopy degree.
    #[arg(long)]
    k: i64,
    /// Sphere table (TSV); defaults to $LOOPSPACE_SPHERE_TABLE, then the bundled table.
    #[arg(long)]
    table: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    SummandOffByOne,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = 12)]
    cap: u32,
    #[arg(long, default_value_t = 10_000)]
    fuzz_cases: usize,
    #[arg(long)]
    json: bool,
    #[arg(long, hide = true)]
    inject_fault: Option<FaultArg>,
}

struct Failure {
    code: u8,
    message: String,
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INVALID, message: message.into() }
}

fn from_error(e: Error) -> Failure {
    let code = match e {
        Error::TableGap { .. } | Error::TableParse { .. } => EXIT_TABLE,
        Error::InvalidGroup(_) | Error::InvalidManifold(_) => EXIT_INVALID,
        _ => EXIT_FAILURE,
    };
    Failure { code, message: e.to_string() }
}

fn model(args: &ManifoldArgs) -> Result<ManifoldModel, Failure> {
    if args.n < 2 {
        return Err(invalid("n must be ≥ 2"));
    }
    if args.r < 0 {
        return Err(invalid("r must be ≥ 0"));
    }
    let n = u32::try_from(args.n).map_err(|_| invalid("n is too large"))?;
    let r = u32::try_from(args.r).map_err(|_| invalid("r is too large"))?;
    let torsion = FiniteAbelianGroup::parse(&args.torsion).map_err(|e| invalid(format!("torsion: {e}")))?;
    ManifoldModel::new(n, r, torsion).map_err(from_error)
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report documents serialize")
}

fn report(args: &ReportArgs) -> Result<String, Failure> {
    let m = model(&args.manifold)?;
    if args.cap < 1 {
        return Err(invalid("cap must be ≥ 1"));
    }
    let cap = u32::try_from(args.cap).map_err(|_| invalid("cap is too large"))?;
    let doc = report::build(&m, cap).map_err(from_error)?;
    Ok(if args.json { to_json(&doc) + "\n" } else { report::render_text(&doc) })
}

fn homotopy(args: &HomotopyArgs) -> Result<String, Failure> {
    let m = model(&args.manifold)?;
    if args.k < 0 {
        return Err(invalid("k must be ≥ 0"));
    }
    let k = u32::try_from(args.k).map_err(|_| invalid("k is too large"))?;
    let table = resolve_table(args.table.as_deref()).map_err(from_error)?;
    let answer = homotopy_of_manifold(&m, k, &table).map_err(from_error)?;
    if args.json {
        return Ok(to_json(&answer) + "\n");
    }
    let mut out = format!("{}\ntotal: {}\n", answer.render(), answer.total);
    let inverted: Vec<String> = answer.inverted_primes.iter().map(u64::to_string).collect();
    out.push_str(&format!("inverted primes: {{{}}}\n", inverted.join(",")));
    for s in &answer.summands {
        out.push_str(&format!("  S^{} x{}: {}\n", s.m, s.mult, s.group));
    }
    Ok(out)
}

fn selftest(args: &SelftestArgs) -> Result<String, Failure> {
    let cfg = SelftestConfig {
        seed: args.seed,
        cap: args.cap,
        fuzz_cases: args.fuzz_cases,
        fault: args.inject_fault.map(|f| match f {
            FaultArg::SummandOffByOne => Fault::SummandOffByOne,
        }),
        ..SelftestConfig::default()
    };
    let results = run_selftest(&cfg);
    let out = if args.json {
        to_json(&results) + "\n"
    } else {
        results.iter().map(|r| format!("{r}\n")).collect()
    };
    match results.iter().find(|r| !r.passed()) {
        None => Ok(out),
        Some(bad) => {
            let f = bad.failure.as_ref().expect("failed suite");
            let degree = f.degree.map_or("-".to_string(), |d| d.to_string());
            print!("{out}");
            Err(Failure {
                code: EXIT_FAILURE,
                message: format!("suite failed: {} (n={}, r={}, degree={})", bad.name, f.n, f.r, degree),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Report(a) => report(a),
        Command::Homotopy(a) => homotopy(a),
        Command::Selftest(a) => selftest(a),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
