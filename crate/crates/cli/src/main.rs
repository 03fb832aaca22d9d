use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use effseq_core::chart::{chart_data, emit_svg, to_text, ChartSpec};
use effseq_core::homotopy::Assembler;
use effseq_core::objects::Catalog;
use effseq_core::ss::{dump_pages, SpectralSequence, Window};
use effseq_core::verify::{run_all, run_suite, suite_names};
use effseq_core::EngineError;

const OUT_DIR_VAR: &str = "EFFSEQ_OUT_DIR";

#[derive(Parser)]
#[command(name = "effseq", version, about = "Effective slice spectral sequences for Hermitian K-theory and its fiber")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a spectral sequence and print its pages.
    Compute(ComputeArgs),
    /// Write an SVG chart and its chart-data sidecar.
    Chart(ChartArgs),
    /// Print the assembled homotopy group in one stem and weight.
    Query(QueryArgs),
    /// Run the acceptance suite.
    Verify(VerifyArgs),
    /// Print a shipped presentation in normalized form.
    DumpPresentation(DumpArgs),
}

/// An inclusive integer range written `a..b`; `inf` is allowed as the upper end.
#[derive(Clone, Copy, Debug)]
struct Range {
    lo: i64,
    hi: Option<i64>,
}

impl FromStr for Range {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let (a, b) = text.split_once("..").ok_or_else(|| format!("expected a..b, got {text:?}"))?;
        let lo = a.trim().parse().map_err(|_| format!("bad lower bound {a:?}"))?;
        let hi = match b.trim() {
            "inf" | "infinity" => None,
            b => Some(b.parse().map_err(|_| format!("bad upper bound {b:?}"))?),
        };
        if hi.is_some_and(|h| h < lo) {
            return Err(format!("empty range {text:?}"));
        }
        Ok(Range { lo, hi })
    }
}

impl Range {
    fn bounded(self, what: &str) -> Result<(i64, i64), EngineError> {
        self.hi
            .map(|hi| (self.lo, hi))
            .ok_or_else(|| EngineError::Usage(format!("{what} needs a finite upper bound")))
    }
}

#[derive(Clone, Copy, Debug)]
enum PageArg {
    Finite(u32),
    Infinity,
}

impl FromStr for PageArg {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        match text {
            "inf" | "infinity" => Ok(PageArg::Infinity),
            n => match n.parse::<u32>() {
                Ok(r) if r > 0 => Ok(PageArg::Finite(r)),
                _ => Err(format!("expected a positive page number or inf, got {text:?}")),
            },
        }
    }
}

impl fmt::Display for PageArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PageArg::Finite(r) => write!(f, "{r}"),
            PageArg::Infinity => write!(f, "inf"),
        }
    }
}

#[derive(Args)]
struct ComputeArgs {
    #[arg(long)]
    object: String,
    /// Pages to print, e.g. `1..inf` or `2..3`.
    #[arg(long, default_value = "1..inf")]
    pages: Range,
    #[arg(long, allow_hyphen_values = true)]
    stems: Range,
    #[arg(long, default_value_t = 24)]
    max_filtration: i64,
    /// Coweight range; defaults to the stem range shifted to start at the
    /// most negative coweight of the object.
    #[arg(long, allow_hyphen_values = true)]
    coweights: Option<Range>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "coweights")]
    weights: Option<Range>,
}

#[derive(Args)]
struct ChartArgs {
    #[arg(long)]
    object: String,
    #[arg(long, default_value = "inf")]
    page: PageArg,
    #[arg(long, allow_hyphen_values = true)]
    stems: Range,
    #[arg(long, default_value_t = 16)]
    max_filtration: i64,
    #[arg(long, allow_hyphen_values = true)]
    coweights: Range,
    #[arg(long, default_value_t = 0)]
    residue: i64,
    #[arg(long, default_value_t = 1)]
    modulus: i64,
    /// Period of the arrows; derived from the object when absent.
    #[arg(long)]
    period: Option<u32>,
    #[arg(long)]
    no_differentials: bool,
    #[arg(long)]
    no_hidden: bool,
    #[arg(long)]
    no_products: bool,
    /// Output directory; falls back to $EFFSEQ_OUT_DIR, then the current directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// File stem of the outputs; built from the chart options when absent.
    #[arg(long)]
    name: Option<String>,
}

#[derive(Args)]
struct QueryArgs {
    #[arg(long)]
    object: String,
    #[arg(long, allow_hyphen_values = true)]
    stem: i64,
    #[arg(long, allow_hyphen_values = true)]
    weight: i64,
    /// Starting filtration cap; raised until the column fits.
    #[arg(long, default_value_t = 16)]
    max_filtration: i64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name or criterion number; all suites when absent.
    #[arg(long)]
    suite: Option<String>,
    /// List the suite names and exit.
    #[arg(long)]
    list: bool,
}

#[derive(Args)]
struct DumpArgs {
    #[arg(long)]
    object: String,
}

enum Failure {
    Engine(EngineError),
    Verification,
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        Failure::Engine(e)
    }
}

fn compute(args: ComputeArgs) -> Result<(), EngineError> {
    let object = Catalog::global().object(&args.object)?;
    let stems = args.stems.bounded("--stems")?;
    let mut window = Window::new(stems, (0, args.max_filtration));
    window = match (args.coweights, args.weights) {
        (Some(c), _) => {
            let (lo, hi) = c.bounded("--coweights")?;
            window.with_coweights(lo, hi)
        }
        (None, Some(w)) => {
            let (lo, hi) = w.bounded("--weights")?;
            window.with_weights(lo, hi)
        }
        (None, None) => {
            let lo = object.base().most_negative_coweight()?;
            window.with_coweights(lo, lo + stems.1 - stems.0.min(0))
        }
    };
    let first = u32::try_from(args.pages.lo.max(1)).unwrap_or(1);
    let last = args.pages.hi.map(|h| u32::try_from(h).unwrap_or(u32::MAX));
    let ss = SpectralSequence::run(object, window, last)?;
    print!("{}", dump_pages(&ss, first, last.unwrap_or(u32::MAX)));
    if last.is_none() {
        println!("# E_infinity = E_{}", ss.pages.len());
    }
    Ok(())
}

fn chart(args: ChartArgs) -> Result<(), EngineError> {
    let page = match args.page {
        PageArg::Finite(r) => Some(r),
        PageArg::Infinity => None,
    };
    let mut spec = ChartSpec::new(
        &args.object,
        page,
        args.stems.bounded("--stems")?,
        args.max_filtration,
        args.coweights.bounded("--coweights")?,
    )
    .with_residue(args.residue, args.modulus);
    spec.period = args.period;
    spec.differentials = !args.no_differentials;
    spec.hidden = !args.no_hidden;
    spec.products = !args.no_products;
    spec.validate()?;

    let object = Catalog::global().object(&spec.object)?;
    let ss = SpectralSequence::run(object.clone(), spec.window(&object), spec.page)?;
    let assembler = Assembler::with_shipped_ledger(&ss)?;
    let data = chart_data(&ss, &spec, Some(assembler.ledger()))?;

    let dir = args
        .out
        .or_else(|| std::env::var_os(OUT_DIR_VAR).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)?;
    let name = args.name.unwrap_or_else(|| {
        format!("{}-E{}-{}mod{}", spec.object, args.page, spec.residue, spec.modulus)
    });
    let svg = dir.join(format!("{name}.svg"));
    let tsv = dir.join(format!("{name}.tsv"));
    std::fs::write(&svg, emit_svg(&data, &spec))?;
    std::fs::write(&tsv, to_text(&data))?;
    println!("{} data; wrote {} and {}", data.len(), svg.display(), tsv.display());
    Ok(())
}

fn query(args: QueryArgs) -> Result<(), EngineError> {
    let object = Catalog::global().object(&args.object)?;
    let (s, w) = (args.stem, args.weight);
    let mut fmax = args.max_filtration.max(2);
    loop {
        let window = Window::new((s - 1, s + 1), (0, fmax)).with_weights(w - 1, w + 1);
        let ss = SpectralSequence::run(object.clone(), window, None)?;
        let assembler = Assembler::with_shipped_ledger(&ss)?;
        match assembler.assemble(s, w) {
            Err(EngineError::Usage(reason)) if reason.contains("filtration bound") && fmax < 256 => fmax *= 2,
            Err(e) => return Err(e),
            Ok(group) => {
                print!("{group}");
                return Ok(());
            }
        }
    }
}

fn verify(args: VerifyArgs) -> Result<(), Failure> {
    if args.list {
        for (i, name) in suite_names().enumerate() {
            println!("{} {name}", i + 1);
        }
        return Ok(());
    }
    let reports = match args.suite {
        Some(name) => vec![run_suite(&name)?],
        None => run_all(),
    };
    for r in &reports {
        println!("{r}");
    }
    if reports.iter().all(|r| r.passed) {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Compute(a) => compute(a)?,
        Command::Chart(a) => chart(a)?,
        Command::Query(a) => query(a)?,
        Command::Verify(a) => verify(a)?,
        Command::DumpPresentation(a) => println!("{}", Catalog::global().dump(&a.object)?),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Engine(e @ EngineError::Usage(_))) => {
            eprintln!("effseq: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Engine(e)) => {
            eprintln!("effseq: {e}");
            ExitCode::from(1)
        }
    }
}
