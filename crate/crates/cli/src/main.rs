//! `hardy-spectra`: experiment runner for Hardy kernel spectra.

mod config;
mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hardy_spectra::factorization::dn_report;
use hardy_spectra::operators::{build_k, default_m_nodes};
use hardy_spectra::symbols::{default_r_cut, Family, Symbol, CATALOG};
use hardy_spectra::szego::{
    counting_limit, counting_ratio, density_report, eigen13_deviation, moment_gap,
    moment_gap_from_spectrum, trace_identity, SpectrumCache, TestFunction,
};
use hardy_spectra::verify::{self, CheckResult};
use hardy_spectra::HardyError;
use serde::Serialize;

use config::{ExperimentConfig, Flags, Format};
use table::{Cell, Table};

const TOOL: &str = "hardy-spectra";
const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration or arguments (exit 2).
    Config(String),
    /// Dimension cap exceeded (exit 3).
    Resource(String),
    /// Numerical or I/O failure (exit 1).
    Runtime(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Runtime(_) => 1,
            CliError::Config(_) => 2,
            CliError::Resource(_) => 3,
        }
    }
}

impl From<HardyError> for CliError {
    fn from(e: HardyError) -> Self {
        match e {
            HardyError::Resource { .. } => CliError::Resource(e.to_string()),
            HardyError::UnknownSymbol(_)
            | HardyError::ParameterDomain { .. }
            | HardyError::Dimension(_)
            | HardyError::InvalidArgument(_)
            | HardyError::DomainTruncation { .. } => CliError::Config(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "hardy-spectra",
    version,
    about = "Spectra of Hardy kernel matrices K_N(φ) and their Wiener-Hopf analogues"
)]
struct Cli {
    /// JSON file with experiment settings; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Symbol catalog metadata.
    Catalog(Flags),
    /// Write the binary dump of K_N(φ) to --output.
    Build(Flags),
    /// (log N)^{-1} Tr g(K_N) over a sweep of N, with the predicted limit.
    Density(Flags),
    /// Eigenvalue counts above each λ, per log N.
    Counting(Flags),
    /// Tr K_N against φ̂(0)·H_N.
    Trace(Flags),
    /// Tr K_N^m − Tr T_N^m.
    Moments(Flags),
    /// Trace norm of the Gram difference D_N and both Gram operator norms.
    Dn(Flags),
    /// Deviation of the top eigenvalues of K_N(φ_α) from φ̂(0)/j.
    Thm3(Flags),
    /// Acceptance suite as a JSON pass/fail report.
    Verify {
        #[command(flatten)]
        flags: Flags,
        /// Run the fast subset only.
        #[arg(long)]
        quick: bool,
    },
}

impl Command {
    fn split(self) -> (&'static str, Flags, bool) {
        match self {
            Command::Catalog(f) => ("catalog", f, false),
            Command::Build(f) => ("build", f, false),
            Command::Density(f) => ("density", f, false),
            Command::Counting(f) => ("counting", f, false),
            Command::Trace(f) => ("trace", f, false),
            Command::Moments(f) => ("moments", f, false),
            Command::Dn(f) => ("dn", f, false),
            Command::Thm3(f) => ("thm3", f, false),
            Command::Verify { flags, quick } => ("verify", flags, quick),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let msg = match &e {
                CliError::Config(m) => format!("invalid configuration: {m}"),
                CliError::Resource(m) => format!("resource limit: {m}"),
                CliError::Runtime(m) => format!("error: {m}"),
            };
            eprintln!("{TOOL}: {msg}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let base = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    let (name, flags, quick) = cli.command.split();
    let cfg = base.overlay(name, flags, quick)?;
    if name == "build" {
        return build(&cfg).map(|_| 0);
    }
    if name == "verify" {
        return verify_report(&cfg);
    }
    let table = match name {
        "catalog" => catalog()?,
        "density" => density(&cfg)?,
        "counting" => counting(&cfg)?,
        "trace" => trace(&cfg)?,
        "moments" => moments(&cfg)?,
        "dn" => dn(&cfg)?,
        "thm3" => thm3(&cfg)?,
        _ => unreachable!("every subcommand is dispatched"),
    };
    emit(&cfg, |w| match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => table.write_csv(w, &header_line(&cfg)?),
        Format::Json => table.write_json(w, &cfg, TOOL, VERSION),
    })?;
    Ok(0)
}

fn header_line(cfg: &ExperimentConfig) -> io::Result<String> {
    Ok(format!(
        "# {TOOL} {VERSION} config={}",
        serde_json::to_string(cfg)?
    ))
}

fn emit<F>(cfg: &ExperimentConfig, f: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    match &cfg.output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            f(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            f(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn symbol(cfg: &ExperimentConfig) -> Result<Symbol, CliError> {
    let name = cfg
        .symbol
        .as_deref()
        .ok_or_else(|| CliError::Config("--symbol is required".into()))?;
    let family: Family = name.parse()?;
    Ok(Symbol::new(
        family,
        cfg.alpha.unwrap_or(family.default_alpha()),
    )?)
}

fn sizes(cfg: &ExperimentConfig, default: &[usize]) -> Vec<usize> {
    cfg.n.clone().unwrap_or_else(|| default.to_vec())
}

fn id_cells(s: &Symbol) -> [Cell; 2] {
    [Cell::from(s.name()), Cell::from(s.alpha())]
}

fn catalog() -> Result<Table, CliError> {
    let mut t = Table::new(&[
        "name",
        "alpha_domain",
        "default_alpha",
        "kernel",
        "phi",
        "phi_hat",
        "hat_zero",
        "sup_norm",
        "default_r_cut",
        "notes",
    ]);
    for (entry, family) in CATALOG.iter().zip(Family::ALL) {
        let s = Symbol::new(family, family.default_alpha())?;
        t.push(vec![
            entry.name.into(),
            entry.alpha_domain.into(),
            family.default_alpha().into(),
            entry.kernel.into(),
            entry.phi.into(),
            entry.phi_hat.into(),
            s.hat_zero().into(),
            s.sup_norm().into(),
            default_r_cut(&s)?.into(),
            entry.notes.into(),
        ]);
    }
    Ok(t)
}

fn build(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let s = symbol(cfg)?;
    let n = match cfg.n.as_deref() {
        Some([n]) => *n,
        _ => return Err(CliError::Config("build needs exactly one --N value".into())),
    };
    let path = cfg
        .output
        .as_ref()
        .ok_or_else(|| CliError::Config("build needs --output for the matrix dump".into()))?;
    let k = build_k(&s, n)?;
    let mut w = BufWriter::new(File::create(path)?);
    k.write_dump(&mut w)?;
    w.flush()?;
    eprintln!(
        "{TOOL}: wrote {}x{} matrix for {} to {}",
        n,
        n,
        s.id(),
        path.display()
    );
    Ok(())
}

fn density(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let s = symbol(cfg)?;
    let g: TestFunction = cfg.g.as_deref().unwrap_or("lambda").parse()?;
    let ns = sizes(cfg, &[256, 1024, 4096]);
    let cache = SpectrumCache::new();
    let r = density_report(&s, &g, &ns, cfg.tol.unwrap_or(1e-10), &cache)?;
    let mut t = Table::new(&[
        "symbol",
        "alpha",
        "g",
        "N",
        "M_N",
        "predicted_limit",
        "extrapolated_limit",
        "abs_err",
    ]);
    for row in &r.rows {
        let [a, b] = id_cells(&s);
        t.push(vec![
            a,
            b,
            r.g.as_str().into(),
            row.n.into(),
            row.m_n.into(),
            r.predicted_limit.into(),
            r.extrapolated_limit.into(),
            (row.m_n - r.predicted_limit).abs().into(),
        ]);
    }
    Ok(t)
}

fn counting(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let s = symbol(cfg)?;
    let ns = sizes(cfg, &[256, 1024, 4096]);
    let lambdas = cfg
        .lambda
        .clone()
        .unwrap_or_else(|| vec![0.5 * s.sup_norm()]);
    let cache = SpectrumCache::new();
    let mut t = Table::new(&[
        "symbol",
        "alpha",
        "lambda",
        "N",
        "count",
        "count_over_logN",
        "predicted",
    ]);
    for &n in &ns {
        let spec = cache.kernel(&s, n)?;
        for &lambda in &lambdas {
            let limit = counting_limit(&s, lambda)?;
            if limit.ambiguous {
                eprintln!("{TOOL}: warning: lambda = {lambda} is a plateau value of the symbol");
            }
            let [a, b] = id_cells(&s);
            t.push(vec![
                a,
                b,
                lambda.into(),
                n.into(),
                spec.count_above(lambda).into(),
                counting_ratio(&spec, lambda, n)?.into(),
                limit.value.into(),
            ]);
        }
    }
    Ok(t)
}

fn trace(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let s = symbol(cfg)?;
    let mut t = Table::new(&["symbol", "alpha", "N", "trace", "hat0_harmonic", "rel_diff"]);
    for n in sizes(cfg, &[1000]) {
        let (tr, predicted) = trace_identity(&s, n)?;
        let [a, b] = id_cells(&s);
        t.push(vec![
            a,
            b,
            n.into(),
            tr.into(),
            predicted.into(),
            ((tr - predicted).abs() / predicted).into(),
        ]);
    }
    Ok(t)
}

fn moments(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let s = symbol(cfg)?;
    let orders = cfg.moments.clone().unwrap_or_else(|| vec![1, 2]);
    let cache = SpectrumCache::new();
    let mut t = Table::new(&["symbol", "alpha", "m", "N", "m_nodes", "moment_gap"]);
    for &m in &orders {
        for n in sizes(cfg, &[256, 1024, 4096]) {
            let nodes = cfg.m_nodes.unwrap_or_else(|| default_m_nodes(n as f64));
            let gap = if m == 1 {
                moment_gap(&s, 1, n, nodes)?
            } else {
                moment_gap_from_spectrum(&s, &*cache.kernel(&s, n)?, m, n, nodes)?
            };
            let [a, b] = id_cells(&s);
            t.push(vec![a, b, m.into(), n.into(), nodes.into(), gap.into()]);
        }
    }
    Ok(t)
}

fn dn(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let s = symbol(cfg)?;
    let mut t = Table::new(&[
        "symbol",
        "alpha",
        "N",
        "m_nodes",
        "R",
        "dn_trace_norm",
        "zeta_norm",
        "eta_norm",
        "trace_dn",
    ]);
    for n in sizes(cfg, &[16, 64, 256, 1024]) {
        let r = dn_report(&s, n, cfg.r_cut, cfg.m_nodes.unwrap_or(512))?;
        let [a, b] = id_cells(&s);
        t.push(vec![
            a,
            b,
            n.into(),
            r.m_nodes.into(),
            r.r_cut.into(),
            r.dn_trace_norm.into(),
            r.zeta_norm.into(),
            r.eta_norm.into(),
            r.trace_dn.into(),
        ]);
    }
    Ok(t)
}

fn thm3(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let s = symbol(cfg)?;
    let scales = cfg.scales.clone().unwrap_or_else(|| vec![20.0, 40.0]);
    let j_max = cfg.j_max.unwrap_or(5);
    let mut t = Table::new(&["symbol", "alpha", "N", "scale", "j_max", "deviation"]);
    for n in sizes(cfg, &[2000]) {
        for &c in &scales {
            let d = eigen13_deviation(&s, c, n, j_max)?;
            let [a, b] = id_cells(&s);
            t.push(vec![a, b, n.into(), c.into(), j_max.into(), d.into()]);
        }
    }
    Ok(t)
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    tool: &'a str,
    version: &'a str,
    config: &'a ExperimentConfig,
    results: &'a [CheckResult],
    passed: bool,
}

fn verify_report(cfg: &ExperimentConfig) -> Result<u8, CliError> {
    let results = if cfg.quick.unwrap_or(false) {
        verify::run_quick()
    } else {
        verify::run_all()
    };
    for r in &results {
        eprintln!("{r}");
    }
    let passed = results.iter().all(|r| r.pass);
    match cfg.format.unwrap_or(Format::Json) {
        Format::Json => {
            let report = VerifyReport {
                tool: TOOL,
                version: VERSION,
                config: cfg,
                results: &results,
                passed,
            };
            emit(cfg, |w| {
                serde_json::to_writer_pretty(&mut *w, &report)?;
                writeln!(w)
            })?;
        }
        Format::Csv => {
            let mut t = Table::new(&[
                "criterion",
                "check",
                "value",
                "expected",
                "tol",
                "relation",
                "pass",
            ]);
            for r in &results {
                let relation = serde_json::to_value(r.relation)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_owned))
                    .unwrap_or_default();
                t.push(vec![
                    r.criterion.into(),
                    r.check.as_str().into(),
                    r.value.into(),
                    r.expected.into(),
                    r.tol.into(),
                    relation.as_str().into(),
                    r.pass.into(),
                ]);
            }
            emit(cfg, |w| t.write_csv(w, &header_line(cfg)?))?;
        }
    }
    Ok(if passed { 0 } else { 1 })
}
