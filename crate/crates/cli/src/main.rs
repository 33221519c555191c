//! `hg`: validate, analyze, quotient, enumerate and verify finite hypergroups.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use hypergroups::enumerate::{enumerate_filtered, read_catalog, write_catalog};
use hypergroups::verify::{search_counterexample, verify_catalog, SearchStatus};
use hypergroups::{
    analyze, hgt, quotient, series, Budget, Check, ElementSet, Error, Hypergroup, PValencedReading, Question,
};

#[derive(Parser)]
#[command(name = "hg", version, about = "Computational algebra for finite hypergroups")]
struct Cli {
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// How "h*^U h^U in O_theta(H//U)" is read when deciding p-valencedness.
    #[arg(long, global = true, value_enum, default_value_t = Reading::Subset)]
    p_valenced_reading: Reading,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Reading {
    Subset,
    Singleton,
}

impl From<Reading> for PValencedReading {
    fn from(r: Reading) -> Self {
        match r {
            Reading::Subset => PValencedReading::Subset,
            Reading::Singleton => PValencedReading::Singleton,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Filter {
    Thin,
    Commutative,
    WeaklyNilpotent,
    Rt,
    Solvable,
}

#[derive(Subcommand)]
enum Command {
    /// Check an HGT file against the hypergroup axioms.
    Validate { path: PathBuf },
    /// Report every decided property of a hypergroup.
    Analyze {
        path: PathBuf,
        #[arg(long)]
        json: bool,
        /// Comma-separated primes (default: primes up to the valency).
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
    },
    /// Print H//F in HGT format.
    Quotient {
        path: PathBuf,
        /// Comma-separated members of the closed subset F.
        #[arg(long, value_delimiter = ',', required = true)]
        by: Vec<usize>,
    },
    /// Enumerate all hypergroups of one order up to isomorphism.
    Enumerate {
        #[arg(long)]
        order: usize,
        /// Write a catalog (HGT files plus index.txt) here instead of listing.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Wall-clock budget in seconds.
        #[arg(long, env = "HG_BUDGET_SECS")]
        budget: Option<f64>,
        #[arg(long, value_enum)]
        filter: Option<Filter>,
    },
    /// Run statement checks over a catalog directory.
    Verify {
        #[arg(long)]
        catalog: PathBuf,
        /// A check id, or `all`.
        #[arg(long, default_value = "all")]
        theorem: String,
        #[arg(long)]
        json: bool,
    },
    /// Search small orders for a hypergroup answering an open question.
    Search {
        /// q56, q57 or sylow-no-pvalenced.
        #[arg(long)]
        question: String,
        #[arg(long)]
        max_order: usize,
        /// Directory for the outcome JSON and any finding.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, env = "HG_BUDGET_SECS")]
        budget: Option<f64>,
    },
}

fn budget(secs: Option<f64>) -> Budget {
    secs.map_or_else(Budget::unlimited, Budget::seconds)
}

fn load(path: &Path) -> Result<Hypergroup> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(hgt::parse(&text)?)
}

fn flags(h: &Hypergroup) -> String {
    let mut out = Vec::new();
    if h.is_commutative() {
        out.push("commutative");
    }
    if h.is_thin() {
        out.push("thin");
    }
    if hypergroups::arith::is_rt(h) {
        out.push("rt");
    }
    if series::is_weakly_nilpotent(h).is_ok_and(|w| w.0) {
        out.push("weakly-nilpotent");
    }
    if out.is_empty() {
        "-".into()
    } else {
        out.join(",")
    }
}

fn keep(filter: Filter, h: &Hypergroup) -> bool {
    match filter {
        Filter::Thin => h.is_thin(),
        Filter::Commutative => h.is_commutative(),
        Filter::WeaklyNilpotent => series::is_weakly_nilpotent(h).is_ok_and(|w| w.0),
        Filter::Rt => hypergroups::arith::is_rt(h),
        Filter::Solvable => hypergroups::arith::is_solvable(h).0,
    }
}

fn validate(path: &Path) -> Result<()> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let raw = hgt::parse_raw(&text)?;
    match raw.into_hypergroup() {
        Ok(h) => {
            println!("ok: hypergroup of order {}, star {:?}", h.order(), h.star());
            Ok(())
        }
        Err(Error::Validation(v)) => {
            for violation in &v.violations {
                eprintln!("violation: {violation:?}: {violation}");
            }
            Err(Error::Validation(v).into())
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_quotient(path: &Path, by: &[usize]) -> Result<()> {
    let h = load(path)?;
    if let Some(&x) = by.iter().find(|&&x| x >= h.order()) {
        bail!("element {x} out of range for order {}", h.order());
    }
    let f: ElementSet = by.iter().copied().collect();
    let q = quotient(&h, f)?;
    println!("# {} // {}", path.display(), f);
    for (i, c) in q.classes.iter().enumerate() {
        println!("# class {i}: {c}");
    }
    print!("{}", hgt::to_string(&q.quotient));
    Ok(())
}

fn cmd_enumerate(order: usize, out: Option<&Path>, budget: &Budget, filter: Option<Filter>) -> Result<()> {
    let members = enumerate_filtered(order, budget, |h| filter.is_none_or(|f| keep(f, h)))?;
    match out {
        Some(dir) => {
            let paths = write_catalog(dir, &members, flags)
                .with_context(|| format!("cannot write catalog to {}", dir.display()))?;
            println!("order {order}: {} classes written to {}", paths.len(), dir.display());
        }
        None => {
            for h in &members {
                println!("{} {} {}", hypergroups::enumerate::canonical_hash(h), h.order(), flags(h));
            }
            println!("# order {order}: {} classes", members.len());
        }
    }
    Ok(())
}

fn cmd_verify(catalog: &Path, theorem: &str, json: bool, reading: PValencedReading) -> Result<bool> {
    let checks: Vec<Check> = if theorem == "all" { Check::ALL.to_vec() } else { vec![theorem.parse()?] };
    let members = read_catalog(catalog)?;
    if members.is_empty() {
        bail!("no .hgt files in {}", catalog.display());
    }
    let v = verify_catalog(&members, &checks, reading);
    let ok = v.failures().next().is_none();
    if json {
        println!("{}", serde_json::to_string_pretty(&v)?);
        return Ok(ok);
    }
    println!("{} hypergroups, {} checks", v.members, checks.len());
    println!("{:40} {:>6} {:>9} {:>8} {:>6}", "check", "holds", "vacuous", "n/a", "fails");
    for c in &v.coverage {
        println!(
            "{:40} {:>6} {:>9} {:>8} {:>6}",
            c.check.map_or("", |c| c.id()),
            c.holds,
            c.holds_vacuously,
            c.not_applicable,
            c.fails
        );
    }
    for f in v.failures() {
        println!("FAIL {} on {}: {}", f.check, f.hypergroup, f.counterexample.as_deref().unwrap_or(""));
    }
    Ok(ok)
}

fn cmd_search(question: &str, max_order: usize, out: &Path, budget: &Budget, reading: PValencedReading) -> Result<()> {
    let question: Question = question.parse()?;
    let outcome = search_counterexample(question, max_order, reading, budget)?;
    fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;
    let json_path = out.join(format!("{question}.json"));
    fs::write(&json_path, serde_json::to_string_pretty(&outcome)? + "\n")?;
    match (&outcome.status, &outcome.finding) {
        (SearchStatus::Finding, Some(f)) => {
            let hgt_path = out.join(format!("{question}-finding.hgt"));
            fs::write(&hgt_path, &f.hgt)?;
            println!("{question}: finding at order {} ({}), oracle confirmed", f.order, f.hash);
            for line in &f.explanation {
                println!("  {line}");
            }
            println!("wrote {} and {}", json_path.display(), hgt_path.display());
        }
        _ => {
            println!("{question}: exhausted({max_order})");
            println!("wrote {}", json_path.display());
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global()?;
    }
    let reading = cli.p_valenced_reading.into();
    match cli.command {
        Command::Validate { path } => validate(&path)?,
        Command::Analyze { path, json, primes } => {
            let h = load(&path)?;
            let report = analyze(&h, &path.display().to_string(), primes.as_deref(), reading)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{}", report.to_text());
            }
        }
        Command::Quotient { path, by } => cmd_quotient(&path, &by)?,
        Command::Enumerate { order, out, budget: secs, filter } => {
            cmd_enumerate(order, out.as_deref(), &budget(secs), filter)?
        }
        Command::Verify { catalog, theorem, json } => {
            if !cmd_verify(&catalog, &theorem, json, reading)? {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Search { question, max_order, out, budget: secs } => {
            cmd_search(&question, max_order, &out, &budget(secs), reading)?
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Validation(_) | Error::Parse { .. }) => 2,
        Some(
            Error::NotClosed(_) | Error::EmptySubset | Error::UndefinedForNonRT | Error::HypothesisViolation(_),
        ) => 3,
        Some(Error::BudgetExceeded) => 4,
        _ => 1,
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

