//! Command-line driver for `weil-core`.
//!
//! Exit codes: 0 on success, 1 when a verification suite finds a violation,
//! 2 for usage and input errors.

pub mod io;
mod verify;

use std::ffi::OsString;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use weil_core::bench::bench_point;
use weil_core::oscillator::{dot_naive, reconstruct, test_vector_family, DotCoefficients, FastOscillator, TestVector};
use weil_core::spectral::{
    canonical_basis, closed_form_m, closed_form_n, decompose, dft_eigenbasis, multiplicities_from_dims,
    printed_table_m, FourthRoot,
};
use weil_core::symplectic::{torus_diagonal, torus_fourier, torus_nonsplit, Torus};
use weil_core::PrimeContext;

use crate::io::{emit, read_json, to_json, BasisFile, CoefficientFile, SignalFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "weil",
    version,
    about = "Weil representation, DFT eigenbasis and oscillator transforms over F_p"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TorusChoice {
    /// Centralizer of the Weyl element; the DFT symmetry group.
    Tw,
    /// Diagonal matrices.
    Diag,
    /// Norm-one elements of the quadratic extension.
    Nonsplit,
}

impl TorusChoice {
    fn build(self, ctx: &PrimeContext) -> Torus {
        match self {
            TorusChoice::Tw => torus_fourier(ctx),
            TorusChoice::Diag => torus_diagonal(ctx),
            TorusChoice::Nonsplit => torus_nonsplit(ctx),
        }
    }

    fn name(self) -> &'static str {
        match self {
            TorusChoice::Tw => "tw",
            TorusChoice::Diag => "diag",
            TorusChoice::Nonsplit => "nonsplit",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        <Self as ValueEnum>::from_str(s, true).map_err(|_| anyhow!("unknown torus {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TestVectorChoice {
    Canonical,
    RhoSInvDelta1,
}

impl From<TestVectorChoice> for TestVector {
    fn from(t: TestVectorChoice) -> Self {
        match t {
            TestVectorChoice::Canonical => TestVector::Canonical,
            TestVectorChoice::RhoSInvDelta1 => TestVector::RhoSInverseDelta1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Egorov,
    Homomorphism,
    Dims,
    Mult,
    DftId,
    Fot,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Export the canonical DFT eigenbasis.
    Eigenbasis {
        #[arg(short)]
        p: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Oscillator transform of a signal, or reconstruction with --inverse.
    Dot {
        #[arg(short)]
        p: u64,
        /// Signal file, or coefficient file with --inverse.
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Fast split-torus algorithm (p = 1 mod 4, torus tw).
        #[arg(long)]
        fast: bool,
        #[arg(long)]
        inverse: bool,
        #[arg(long, value_enum, default_value = "tw")]
        torus: TorusChoice,
        /// Defaults to canonical, or rho-s-inv-delta1 with --fast.
        #[arg(long, value_enum)]
        test_vector: Option<TestVectorChoice>,
    },
    /// Run invariant suites over a range of primes.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// Smallest prime; alone, the only prime checked.
        #[arg(short)]
        p: Option<u64>,
        #[arg(long)]
        pmax: Option<u64>,
        /// Override every suite's threshold.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// JSON summary destination; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Eigenvalue multiplicities of rho(w) and of the DFT.
    MultTable {
        #[arg(short)]
        p: Option<u64>,
        #[arg(long)]
        pmax: Option<u64>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Naive versus fast oscillator transform timings as CSV.
    Bench {
        /// Primes, each 1 mod 4.
        #[arg(short, value_delimiter = ',', default_values_t = [1009u64, 2017, 4001, 10009])]
        p: Vec<u64>,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn context(p: u64) -> Result<PrimeContext> {
    PrimeContext::new(p).map_err(|e| anyhow!(e))
}

/// Primes in `[lo, hi]`, validating both ends.
fn prime_range(p: Option<u64>, pmax: Option<u64>, default: (u64, u64)) -> Result<Vec<u64>> {
    let (lo, hi) = match (p, pmax) {
        (Some(a), Some(b)) => (a, b),
        (Some(a), None) => (a, a),
        (None, Some(b)) => (default.0, b),
        (None, None) => default,
    };
    context(lo)?;
    if hi < lo {
        bail!("--pmax {hi} is below -p {lo}");
    }
    let ps: Vec<u64> = (lo..=hi).filter(|&q| weil_core::modp::is_prime(q)).collect();
    Ok(ps)
}

fn cmd_eigenbasis(p: u64, output: Option<PathBuf>, format: Format) -> Result<i32> {
    let ctx = context(p)?;
    let basis = dft_eigenbasis(&ctx)?;
    let file = BasisFile::new(p, &basis);
    let text = match format {
        Format::Json => to_json(&file)?,
        Format::Csv => file.to_csv(),
    };
    emit(output.as_deref(), &text)?;
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn cmd_dot(
    p: u64,
    input: PathBuf,
    output: Option<PathBuf>,
    fast: bool,
    inverse: bool,
    torus: TorusChoice,
    test_vector: Option<TestVectorChoice>,
) -> Result<i32> {
    let ctx = context(p)?;
    if inverse {
        if fast {
            bail!("--fast and --inverse cannot be combined");
        }
        let file: CoefficientFile = read_json(&input)?;
        if file.p != p {
            bail!("coefficient file is for p = {}, not {p}", file.p);
        }
        if file.test_vector != TestVector::Canonical.to_string() {
            bail!("reconstruction needs canonical coefficients, got {}", file.test_vector);
        }
        let torus = TorusChoice::parse(&file.torus)?;
        let basis = canonical_basis(&ctx, &decompose(&ctx, &torus.build(&ctx))?);
        let coeffs = DotCoefficients {
            kind: basis.kind,
            order: basis.torus_order,
            test_vector: TestVector::Canonical,
            entries: file.entries(),
        };
        let signal = reconstruct(&basis, &coeffs)?;
        emit(output.as_deref(), &to_json(&SignalFile::new(p, &signal))?)?;
        return Ok(EXIT_OK);
    }

    let signal: SignalFile = read_json(&input)?;
    if signal.p != p {
        bail!("signal file is for p = {}, not {p}", signal.p);
    }
    let f = signal.samples()?;
    let tv: TestVector = test_vector.map(Into::into).unwrap_or(if fast {
        TestVector::RhoSInverseDelta1
    } else {
        TestVector::Canonical
    });
    let coeffs = if fast {
        if torus != TorusChoice::Tw {
            bail!("--fast is only available for the tw torus");
        }
        if tv != TestVector::RhoSInverseDelta1 {
            bail!("--fast uses the rho-s-inv-delta1 test vector");
        }
        FastOscillator::new(&ctx)?.fot(&ctx, &f)?
    } else {
        match tv {
            TestVector::Canonical => {
                let basis = canonical_basis(&ctx, &decompose(&ctx, &torus.build(&ctx))?);
                dot_naive(&basis, &f)?
            }
            TestVector::RhoSInverseDelta1 => {
                if torus != TorusChoice::Tw {
                    bail!("the rho-s-inv-delta1 test vector is defined for the tw torus");
                }
                dot_naive(&test_vector_family(&ctx)?, &f)?
            }
        }
    };
    emit(
        output.as_deref(),
        &to_json(&CoefficientFile::new(p, torus.name(), &coeffs))?,
    )?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct MultRow {
    p: u64,
    m: [usize; 4],
    n: [usize; 4],
    closed_form_m: bool,
    closed_form_n: bool,
    printed_table_m: bool,
}

fn mult_rows(ps: &[u64]) -> Result<Vec<MultRow>> {
    ps.iter()
        .map(|&p| {
            let ctx = context(p)?;
            let torus = torus_fourier(&ctx);
            let dec = decompose(&ctx, &torus)?;
            let mult = multiplicities_from_dims(&ctx, &torus, &dec.dims());
            Ok(MultRow {
                p,
                m: mult.m,
                n: mult.n,
                closed_form_m: mult.m == closed_form_m(p),
                closed_form_n: mult.n == closed_form_n(p),
                printed_table_m: mult.m == printed_table_m(p),
            })
        })
        .collect()
}

fn cmd_mult_table(p: Option<u64>, pmax: Option<u64>, format: Format, output: Option<PathBuf>) -> Result<i32> {
    let ps = prime_range(p, pmax, (5, 101))?;
    let rows = mult_rows(&ps)?;
    let text = match format {
        Format::Json => to_json(&rows)?,
        Format::Csv => {
            let labels: Vec<&str> = FourthRoot::ALL.iter().map(|r| r.label()).collect();
            let mut s = String::from("p");
            for l in &labels {
                s.push_str(&format!(",m{l}"));
            }
            for l in &labels {
                s.push_str(&format!(",n{l}"));
            }
            s.push_str(",closed_form_m,closed_form_n,printed_table_m\n");
            for r in &rows {
                s.push_str(&r.p.to_string());
                for v in r.m.iter().chain(&r.n) {
                    s.push_str(&format!(",{v}"));
                }
                s.push_str(&format!(
                    ",{},{},{}\n",
                    r.closed_form_m, r.closed_form_n, r.printed_table_m
                ));
            }
            s
        }
    };
    emit(output.as_deref(), &text)?;
    Ok(if rows.iter().all(|r| r.closed_form_m && r.closed_form_n) {
        EXIT_OK
    } else {
        EXIT_VERIFY
    })
}

fn cmd_bench(ps: Vec<u64>, reps: usize, seed: u64, output: Option<PathBuf>) -> Result<i32> {
    if reps == 0 {
        bail!("--reps must be at least 1");
    }
    let mut contexts = Vec::with_capacity(ps.len());
    for &p in &ps {
        let ctx = context(p)?;
        if p % 4 != 1 {
            bail!("unsupported: open problem (p = {p} is 3 mod 4; no fast transform for the non-split torus)");
        }
        contexts.push(ctx);
    }
    let mut text = String::from("p,t_naive,t_fast,ratio\n");
    for ctx in &contexts {
        let row = bench_point(ctx, reps, seed)?;
        text.push_str(&format!("{},{},{},{}\n", row.p, row.t_naive, row.t_fast, row.ratio()));
    }
    emit(output.as_deref(), &text)?;
    Ok(EXIT_OK)
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("WEIL_NUM_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| anyhow!("WEIL_NUM_THREADS must be a positive integer, got {v:?}"))?;
        if n == 0 {
            bail!("WEIL_NUM_THREADS must be a positive integer");
        }
        // A second initialization (e.g. repeated calls in one process) is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

pub fn execute(cli: Cli) -> Result<i32> {
    configure_threads()?;
    match cli.command {
        Command::Eigenbasis { p, output, format } => cmd_eigenbasis(p, output, format),
        Command::Dot {
            p,
            input,
            output,
            fast,
            inverse,
            torus,
            test_vector,
        } => cmd_dot(p, input, output, fast, inverse, torus, test_vector),
        Command::Verify {
            suite,
            p,
            pmax,
            tol,
            seed,
            output,
        } => {
            let ps = prime_range(p, pmax, (5, 31))?;
            verify::run(suite, &ps, tol, seed, output.as_deref())
        }
        Command::MultTable {
            p,
            pmax,
            format,
            output,
        } => cmd_mult_table(p, pmax, format, output),
        Command::Bench { p, reps, seed, output } => cmd_bench(p, reps, seed, output),
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
    }
}
