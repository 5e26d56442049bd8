//! `hanoi`: command-line front end over the solver library.
//!
//! Exit codes: 0 success, 1 check mismatch (a potential counterexample;
//! a MISMATCH banner goes to stderr), 2 usage or argument errors, 3 memory
//! budget exceeded. Identical invocations produce byte-identical output;
//! wall-clock times are confined to fields and columns named `ms`.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use hanoi_core::analysis::{analyze_instance, InstanceReport};
use hanoi_core::constructor::{build_solution, solution_moves, validate_move_stream, validate_solution};
use hanoi_core::numerics::{find_r, k_closed, k_delta, k_dp};
use hanoi_core::oracle::{distance_table, m_number, write_distance_table, SearchBudget};
use hanoi_core::{BigUint, Error, Problem, State};

#[derive(Parser)]
#[command(name = "hanoi", version, about = "Multi-peg Tower of Hanoi: counts, solutions, and exhaustive checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Presumed-optimal move count: closed form, recurrence, and increment
    K {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: u32,
    },
    /// Construct a provably valid solution and report its length
    Solve {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: u32,
        /// Source peg
        #[arg(long, default_value_t = 1)]
        from: u32,
        /// Target peg
        #[arg(long, default_value_t = 2)]
        to: u32,
        #[arg(long, value_enum, default_value_t = SolveFormat::Text)]
        format: SolveFormat,
        /// Write here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact minimum move count by exhaustive search
    Oracle {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: u32,
        /// Memory budget in GiB (default 2, or HANOI_MEMORY_GIB)
        #[arg(long)]
        memory_gib: Option<f64>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        /// Also write the full distance table (binary) to this file
        #[arg(long)]
        dump_distances: Option<PathBuf>,
    },
    /// Sweep instances: search vs formula plus structural checks
    Verify {
        #[arg(long)]
        n_max: u32,
        #[arg(long, default_value_t = 4)]
        p_max: u32,
        /// Optimal solutions sampled per instance
        #[arg(long, default_value_t = 16)]
        samples: usize,
        /// Memory budget in GiB per cell (default 2, or HANOI_MEMORY_GIB)
        #[arg(long)]
        memory_gib: Option<f64>,
        /// Concurrent cells
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
        jobs: u16,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        /// Write here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full structural report for one instance, as JSON
    Analyze {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 16)]
        samples: usize,
        /// Memory budget in GiB (default 2, or HANOI_MEMORY_GIB)
        #[arg(long)]
        memory_gib: Option<f64>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolveFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

enum Failure {
    Domain(Error),
    Io(io::Error),
    Usage(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Domain(Error::BudgetExceeded { .. }) => 3,
            Failure::Domain(_) | Failure::Usage(_) => 2,
            Failure::Io(_) => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Domain(e) => e.to_string(),
            Failure::Io(e) => e.to_string(),
            Failure::Usage(m) => m.clone(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Domain(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        // a consumer that closed the pipe early (e.g. `| head`) got all it
        // wanted; anything that must outrank this exits before writing
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.exit_code())
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Failure> {
    match command {
        Command::K { n, p } => cmd_k(n, p),
        Command::Solve {
            n,
            p,
            from,
            to,
            format,
            out,
        } => cmd_solve(n, p, from, to, format, out.as_deref()),
        Command::Oracle {
            n,
            p,
            memory_gib,
            format,
            dump_distances,
        } => cmd_oracle(n, p, budget(memory_gib)?, format, dump_distances.as_deref()),
        Command::Verify {
            n_max,
            p_max,
            samples,
            memory_gib,
            jobs,
            format,
            out,
        } => cmd_verify(
            n_max,
            p_max,
            samples,
            budget(memory_gib)?,
            jobs as usize,
            format,
            out.as_deref(),
        ),
        Command::Analyze {
            n,
            p,
            samples,
            memory_gib,
        } => cmd_analyze(n, p, samples, budget(memory_gib)?),
    }
}

/// Flag beats environment beats the built-in 2 GiB default.
fn budget(flag: Option<f64>) -> Result<SearchBudget, Failure> {
    let gib = match flag {
        Some(v) => v,
        None => match std::env::var("HANOI_MEMORY_GIB") {
            Ok(raw) => raw.parse().map_err(|_| {
                Failure::Usage(format!("HANOI_MEMORY_GIB is not a number: {raw:?}"))
            })?,
            Err(_) => return Ok(SearchBudget::default()),
        },
    };
    if !gib.is_finite() || gib <= 0.0 {
        return Err(Failure::Usage(format!("memory budget must be positive, got {gib}")));
    }
    Ok(SearchBudget::from_gib(gib))
}

fn writer(out: Option<&FsPath>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn mismatch(banner: &str) -> ExitCode {
    eprintln!("MISMATCH: {banner}");
    ExitCode::from(1)
}

fn cmd_k(n: u32, p: u32) -> Result<ExitCode, Failure> {
    let r = find_r(n, p)?;
    let closed = k_closed(n, p)?;
    let dp = k_dp(n, p)?;
    let delta = if n >= 2 {
        k_delta(n, p)?
    } else {
        BigUint::from(1u32) // K(1) - K(0), reading K(0) = 0
    };
    let written = writeln!(
        io::stdout().lock(),
        "n={n} p={p} r={r} K={closed} K_dp={dp} delta={delta}"
    );
    if closed != dp {
        return Ok(mismatch(&format!(
            "closed form gives {closed}, recurrence gives {dp} for n={n} p={p}"
        )));
    }
    written?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_solve(
    n: u32,
    p: u32,
    from: u32,
    to: u32,
    format: SolveFormat,
    out: Option<&FsPath>,
) -> Result<ExitCode, Failure> {
    let problem = Problem::new(n, p)?;
    let mut w = writer(out)?;
    // a failed validation must exit 1 even if the output pipe broke, so
    // write errors are carried, not propagated, until `ok` is known
    let (ok, written) = match format {
        SolveFormat::Text => {
            // stream the moves; the validator replays the same iterator
            let mut io_failure: Option<io::Error> = None;
            let stream = solution_moves(problem, from, to)?.inspect(|mv| {
                if io_failure.is_none() {
                    if let Err(e) = writeln!(w, "{mv}") {
                        io_failure = Some(e);
                    }
                }
            });
            let report = validate_move_stream(problem, from, to, stream)?;
            let written = match io_failure {
                Some(e) => Err(e),
                None => writeln!(w, "length={} valid={}", report.moves, report.ok()),
            };
            (report.ok(), written)
        }
        SolveFormat::Json => {
            let path = build_solution(problem, from, to)?;
            let report = validate_solution(&path, problem, from, to)?;
            let doc = serde_json::json!({
                "n": n,
                "p": p,
                "from": from,
                "to": to,
                "length": report.moves,
                "valid": report.ok(),
                "path": path,
            });
            let written = writeln!(w, "{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            (report.ok(), written)
        }
    };
    if !ok {
        return Ok(mismatch(&format!(
            "constructed solution for n={n} p={p} {from}->{to} failed replay validation"
        )));
    }
    written?;
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle(
    n: u32,
    p: u32,
    budget: SearchBudget,
    format: ReportFormat,
    dump: Option<&FsPath>,
) -> Result<ExitCode, Failure> {
    let problem = Problem::new(n, p)?;
    let started = Instant::now();
    let result = m_number(problem, &budget)?;
    let ms = started.elapsed().as_millis() as u64;
    let dumped = match dump {
        Some(path) => {
            let table = distance_table(problem, &State::constant(problem, 1)?, &budget)?;
            let mut file = BufWriter::new(File::create(path)?);
            write_distance_table(&mut file, problem, &table)?;
            file.flush()?;
            Some((path.display().to_string(), table.len() as u64))
        }
        None => None,
    };
    let mut stdout = io::stdout().lock();
    match format {
        ReportFormat::Text => {
            writeln!(stdout, "M={}", result.distance)?;
            writeln!(stdout, "states_expanded={}", result.states_expanded)?;
            writeln!(stdout, "peak_frontier={}", result.peak_frontier)?;
            writeln!(stdout, "ms={ms}")?;
            if let Some((path, entries)) = dumped {
                writeln!(stdout, "distances_file={path} entries={entries}")?;
            }
        }
        ReportFormat::Json => {
            let mut doc = serde_json::json!({
                "n": n,
                "p": p,
                "M": result.distance,
                "states_expanded": result.states_expanded,
                "peak_frontier": result.peak_frontier,
                "ms": ms,
            });
            if let Some((path, entries)) = dumped {
                doc["distances_file"] = path.into();
                doc["entries"] = entries.into();
            }
            writeln!(stdout, "{}", serde_json::to_string_pretty(&doc).expect("serializable"))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

struct Row {
    report: InstanceReport,
    ms: u64,
}

fn cmd_verify(
    n_max: u32,
    p_max: u32,
    samples: usize,
    budget: SearchBudget,
    jobs: usize,
    format: TableFormat,
    out: Option<&FsPath>,
) -> Result<ExitCode, Failure> {
    if p_max < 3 {
        return Err(Failure::Usage(format!("p-max must be at least 3, got {p_max}")));
    }
    if n_max < 1 {
        return Err(Failure::Usage("n-max must be at least 1".into()));
    }
    let cells: Vec<(u32, u32)> = (1..=n_max)
        .flat_map(|n| (3..=p_max).map(move |p| (n, p)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Failure::Usage(format!("cannot start {jobs} worker threads: {e}")))?;
    let rows: Result<Vec<Row>, Error> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(n, p)| verify_cell(n, p, samples, &budget))
            .collect()
    });
    let rows = rows?;

    let mut w = writer(out)?;
    // a row with a failed check must exit 1 even if the pipe broke mid-table
    let written = emit_table(&mut w, format, &rows);

    let bad: Vec<String> = rows
        .iter()
        .filter(|row| {
            let r = &row.report;
            r.agreement == Some(false)
                || r.theorem31_ok == Some(false)
                || r.theorem32_ok == Some(false)
                || r.theorem41_ok == Some(false)
        })
        .map(|row| format!("(n={}, p={})", row.report.n, row.report.p))
        .collect();
    if !bad.is_empty() {
        return Ok(mismatch(&format!(
            "checks failed on {}; inspect the table above",
            bad.join(", ")
        )));
    }
    written?;
    Ok(ExitCode::SUCCESS)
}

fn emit_table(w: &mut dyn Write, format: TableFormat, rows: &[Row]) -> io::Result<()> {
    match format {
        TableFormat::Csv => {
            writeln!(w, "n,p,r,K,M,match,demolish_len,t31,t32,t41,states_expanded,ms")?;
            for row in rows {
                writeln!(w, "{}", csv_row(row))?;
            }
        }
        TableFormat::Json => {
            let reports: Vec<&InstanceReport> = rows.iter().map(|r| &r.report).collect();
            writeln!(w, "{}", serde_json::to_string_pretty(&reports).expect("serializable"))?;
        }
    }
    w.flush()
}

fn verify_cell(n: u32, p: u32, samples: usize, budget: &SearchBudget) -> Result<Row, Error> {
    let problem = Problem::new(n, p)?;
    let started = Instant::now();
    let report = match analyze_instance(problem, samples, budget) {
        Ok(report) => report,
        Err(Error::BudgetExceeded { .. }) => InstanceReport::skipped(problem)?,
        Err(other) => return Err(other),
    };
    Ok(Row {
        report,
        ms: started.elapsed().as_millis() as u64,
    })
}

fn csv_row(row: &Row) -> String {
    let r = &row.report;
    let opt_num = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
    let opt_bool = |v: Option<bool>| v.map(|x| x.to_string()).unwrap_or_default();
    let m = r
        .exact
        .value()
        .map(|x| x.to_string())
        .unwrap_or_else(|| "skipped".into());
    let agreement = r
        .agreement
        .map(|x| x.to_string())
        .unwrap_or_else(|| "skipped".into());
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{}",
        r.n,
        r.p,
        r.r,
        r.presumed,
        m,
        agreement,
        opt_num(r.demolish_len),
        opt_bool(r.theorem31_ok),
        opt_bool(r.theorem32_ok),
        opt_bool(r.theorem41_ok),
        r.states_expanded,
        row.ms
    )
}

fn cmd_analyze(n: u32, p: u32, samples: usize, budget: SearchBudget) -> Result<ExitCode, Failure> {
    let problem = Problem::new(n, p)?;
    let report = analyze_instance(problem, samples, &budget)?;
    let written = writeln!(
        io::stdout().lock(),
        "{}",
        serde_json::to_string_pretty(&report).expect("serializable")
    );
    let clean = report.agreement != Some(false)
        && report.theorem31_ok != Some(false)
        && report.theorem32_ok != Some(false)
        && report.theorem41_ok != Some(false);
    if !clean {
        return Ok(mismatch(&format!("checks failed on (n={n}, p={p})")));
    }
    written?;
    Ok(ExitCode::SUCCESS)
}
