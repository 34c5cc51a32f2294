use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use mlcop::dist::{are, local_power_mean, normal_quantile, TheoreticalMargin};
use mlcop::power::{run_power_study, ModelSpec, PowerStudyConfig};
use mlcop::simulate::MarginSpec;
use mlcop::stats::{
    dependogram, permutation_pvalue_independence, permutation_pvalue_randomness, Correction,
};
use mlcop::{test_independence, test_randomness, Error, Result, ScoreFamily};

#[derive(Parser)]
#[command(
    name = "mlcop",
    version,
    about = "Copula-based tests of independence and randomness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test a CSV file for independence of its columns or randomness of a series.
    Test(TestArgs),
    /// Run the Monte Carlo power study and print a CSV table.
    Power(PowerArgs),
    /// Asymptotic relative efficiency of two score families under a margin.
    Are(AreArgs),
}

#[derive(Args)]
struct TestArgs {
    file: PathBuf,
    /// Treat the single column as a time series.
    #[arg(long, conflicts_with = "nonserial")]
    serial: bool,
    /// Treat each column as a variable (default for more than one column).
    #[arg(long)]
    nonserial: bool,
    /// Number of lags in the serial case.
    #[arg(long, default_value_t = 5)]
    d: usize,
    /// Largest subset size (defaults to the dimension).
    #[arg(long)]
    pmax: Option<usize>,
    /// Score families, comma separated: one for all columns or one per column.
    #[arg(long, default_value = "spearman", value_delimiter = ',')]
    score: Vec<String>,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Also compute a permutation p-value from this many permutations.
    #[arg(long)]
    perm: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Include per-subset statistics against Bonferroni critical values.
    #[arg(long)]
    dependogram: bool,
}

#[derive(Args)]
struct PowerArgs {
    /// TOML configuration; the bundled desk-scale grid is used otherwise.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    replications: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    models: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    margins: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    families: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    pmax: Option<Vec<usize>>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct AreArgs {
    #[arg(long)]
    k: String,
    #[arg(long)]
    g: String,
    /// `continuous`, `bernoulli:p` or one of f1..f7.
    #[arg(long)]
    margin: String,
    #[arg(long, default_value_t = 2)]
    card: u32,
}

pub fn run() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        return fail(&e);
    }
    let result = match cli.command {
        Command::Test(args) => cmd_test(&args),
        Command::Power(args) => cmd_power(&args),
        Command::Are(args) => cmd_are(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("mlcop: {e}");
    let code = match e {
        Error::Degenerate { .. } | Error::ZeroVariance(_) => 3,
        Error::Input(_) | Error::Argument(_) | Error::Domain(_) | Error::Config(_) => 2,
        Error::Numerical(_) | Error::Study { .. } => 1,
    };
    ExitCode::from(code)
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("MLCOP_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
        Error::Input(format!(
            "MLCOP_THREADS must be a positive integer, got '{raw}'"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Input(format!("cannot configure thread pool: {e}")))
}

/// Reads numeric columns; a first row with any non-numeric field is a header.
fn read_columns(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        let parsed: Vec<Option<f64>> = record.iter().map(|f| f.parse::<f64>().ok()).collect();
        if line == 0 && parsed.iter().any(Option::is_none) {
            continue;
        }
        if columns.is_empty() {
            columns = vec![Vec::new(); parsed.len()];
        }
        for (j, value) in parsed.into_iter().enumerate() {
            match value {
                Some(v) if v.is_finite() => columns[j].push(v),
                _ => {
                    return Err(Error::Input(format!(
                        "row {}, column {}: '{}' is not a finite number",
                        line + 1,
                        j + 1,
                        &record[j]
                    )))
                }
            }
        }
    }
    if columns.is_empty() || columns[0].is_empty() {
        return Err(Error::Input(format!("{}: no data rows", path.display())));
    }
    Ok(columns)
}

fn parse_families(tokens: &[String]) -> Result<Vec<ScoreFamily>> {
    tokens.iter().map(|t| t.parse()).collect()
}

// A closed stdout (e.g. piped into `head`) is not an error worth reporting.
fn emit(text: &str) {
    let _ = std::io::stdout().write_all(text.as_bytes());
}

fn print_json(value: &Value) {
    emit(&format!(
        "{}\n",
        serde_json::to_string_pretty(value).expect("json serializes")
    ));
}

fn cmd_test(args: &TestArgs) -> Result<()> {
    if !(args.alpha > 0.0 && args.alpha < 1.0) {
        return Err(Error::Input(format!(
            "alpha must be in (0,1), got {}",
            args.alpha
        )));
    }
    let columns = read_columns(&args.file)?;
    let families = parse_families(&args.score)?;
    let serial = args.serial || (!args.nonserial && columns.len() == 1);
    let (report, perm) = if serial {
        if columns.len() != 1 {
            return Err(Error::Input(format!(
                "serial mode needs a single column, found {}",
                columns.len()
            )));
        }
        let [family] = families[..] else {
            return Err(Error::Input(
                "serial mode takes exactly one score family".into(),
            ));
        };
        let pmax = args.pmax.unwrap_or(args.d);
        let report = test_randomness(&columns[0], args.d, family, pmax)?;
        let perm = match args.perm {
            Some(b) => Some(permutation_pvalue_randomness(
                &columns[0],
                args.d,
                family,
                pmax,
                b,
                args.seed,
            )?),
            None => None,
        };
        (report, perm)
    } else {
        let pmax = args.pmax.unwrap_or(columns.len());
        let report = test_independence(&columns, &families, pmax)?;
        let perm = match args.perm {
            Some(b) => Some(permutation_pvalue_independence(
                &columns, &families, pmax, b, args.seed,
            )?),
            None => None,
        };
        (report, perm)
    };
    let mut out = report.to_json();
    out["alpha"] = json!(args.alpha);
    out["reject"] = json!(report.pvalue() < args.alpha);
    if let Some(p) = perm {
        out["permutation"] = json!({ "replicates": args.perm, "seed": args.seed, "pvalue": p });
    }
    if args.dependogram {
        out["dependogram"] =
            serde_json::to_value(dependogram(&report, args.alpha, Correction::Bonferroni)?)
                .expect("json serializes");
    }
    print_json(&out);
    Ok(())
}

fn cmd_power(args: &PowerArgs) -> Result<()> {
    let mut cfg = match &args.config {
        Some(path) => PowerStudyConfig::from_file(path)?,
        None => PowerStudyConfig::desk(),
    };
    let config_err = |e: Error| Error::Config(e.to_string());
    if let Some(r) = args.replications {
        cfg.replications = r;
    }
    if let Some(n) = &args.n {
        cfg.n_values = n.clone();
    }
    if let Some(models) = &args.models {
        cfg.models = models
            .iter()
            .map(|m| ModelSpec::parse(m))
            .collect::<Result<_>>()
            .map_err(config_err)?;
    }
    if let Some(margins) = &args.margins {
        cfg.margins = margins
            .iter()
            .map(|m| MarginSpec::parse(m))
            .collect::<Result<_>>()
            .map_err(config_err)?;
    }
    if let Some(f) = &args.families {
        cfg.families = parse_families(f).map_err(config_err)?;
    }
    if let Some(d) = args.d {
        cfg.d = d;
        if args.pmax.is_none() {
            cfg.pmax = vec![2, d];
        }
    }
    if let Some(p) = &args.pmax {
        cfg.pmax = p.clone();
    }
    if let Some(a) = args.alpha {
        cfg.alpha = a;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    let table = run_power_study(&cfg)?;
    emit(&table.to_csv());
    Ok(())
}

fn parse_margin(spec: &str) -> Result<TheoreticalMargin> {
    let spec = spec.trim().to_ascii_lowercase();
    if spec == "continuous" || spec == "normal" {
        return Ok(TheoreticalMargin::continuous(|u| {
            normal_quantile(u).unwrap_or(f64::NAN)
        }));
    }
    if let Some(p) = spec.strip_prefix("bernoulli:") {
        let p: f64 = p
            .trim_start_matches("p=")
            .parse()
            .map_err(|_| Error::Input(format!("bad Bernoulli probability in '{spec}'")))?;
        return TheoreticalMargin::bernoulli(p).map_err(|e| Error::Input(e.to_string()));
    }
    MarginSpec::parse(&spec)
        .map_err(|_| {
            Error::Input(format!(
                "unknown margin '{spec}' (expected continuous, bernoulli:p or f1..f7)"
            ))
        })?
        .to_theoretical()
}

fn cmd_are(args: &AreArgs) -> Result<()> {
    let k: ScoreFamily = args.k.parse()?;
    let g: ScoreFamily = args.g.parse()?;
    let margin = parse_margin(&args.margin)?;
    let value = are(k, g, &margin, args.card)?;
    print_json(&json!({
        "k": k,
        "g": g,
        "margin": args.margin,
        "card": args.card,
        "are": value,
        "cov": local_power_mean(k, &margin, g)?,
        "var_k": local_power_mean(k, &margin, k)?,
        "var_g": local_power_mean(g, &margin, g)?,
    }));
    Ok(())
}
