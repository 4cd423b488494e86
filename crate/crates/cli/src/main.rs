use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use etaid::eta::NamedSeriesId;
use etaid::macdonald::{verify_identity_with, Identity, VerificationReport, VerifyOptions};
use etaid::virasoro::{character, CharacterForm, MinimalModel};
use etaid::QExponent;
use rayon::prelude::*;

mod manifest;
mod output;

use manifest::{Manifest, DEFAULT_MANIFEST};

const DEFAULT_ORDER: &str = "20";

#[derive(Parser)]
#[command(name = "etaid", version, about = "Exact q-series identities for eta powers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a named series truncated at O(q^ORDER).
    Series {
        /// eta, eta^M, g2, weber-f, weber-f1, weber-f2, pentagonal or jacobi-cube
        name: String,
        #[arg(long, default_value = DEFAULT_ORDER, value_parser = parse_order)]
        order: QExponent,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print the character of the (m, n) module of the (s, t) minimal model.
    Char {
        #[arg(long)]
        s: i64,
        #[arg(long)]
        t: i64,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        n: i64,
        #[arg(long, default_value = DEFAULT_ORDER, value_parser = parse_order)]
        order: QExponent,
        #[arg(long, default_value = "double", value_parser = parse_form)]
        form: CharacterForm,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Verify an identity, or the whole suite with `verify suite`.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// euler, jacobi, weber, macdonald, denominator, wronskian_raw,
    /// wronskian_normalized or suite; `macdonald(3)` style is accepted too
    identity: String,
    /// Positional parameters: K for macdonald, S T for the model families.
    params: Vec<i64>,
    #[arg(long)]
    k: Option<i64>,
    #[arg(long)]
    s: Option<i64>,
    #[arg(long)]
    t: Option<i64>,
    /// Relative order: coefficients below q^(m/24 + ORDER) are compared.
    #[arg(long, value_parser = parse_order)]
    order: Option<QExponent>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Recompute lattice sums over a doubled window and require agreement.
    #[arg(long)]
    window_audit: bool,
    /// Suite manifest (TOML); the built-in suite-v1 is used otherwise.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Largest s * t for the model grid of a suite run.
    #[arg(long)]
    max_st: Option<i64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

pub(crate) fn parse_order(s: &str) -> std::result::Result<QExponent, String> {
    let q: QExponent = s
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a rational number such as 20 or 97/24"))?;
    if q <= QExponent::from_integer(0) {
        return Err(format!("order must be positive, got {s}"));
    }
    Ok(q)
}

fn parse_form(s: &str) -> std::result::Result<CharacterForm, String> {
    s.parse().map_err(|e: etaid::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` means some report did not match.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Series { name, order, output } => {
            let id: NamedSeriesId = name.parse()?;
            let series = id.build(order)?;
            let file = format!("{}.txt", name.replace('^', "_"));
            output::emit(&series.to_text(), output.as_deref(), &file)?;
            Ok(true)
        }
        Command::Char { s, t, m, n, order, form, output } => {
            let model = MinimalModel::new(s, t)?;
            let label = model.label(m, n)?;
            let series = character(&model, &label, order, form)?;
            let file = format!("char_{}_{}_{m}_{n}.txt", model.s(), model.t());
            output::emit(&series.to_text(), output.as_deref(), &file)?;
            Ok(true)
        }
        Command::Verify(args) if args.identity == "suite" => run_suite(args),
        Command::Verify(args) => run_single(args),
    }
}

fn single_identity(args: &VerifyArgs) -> Result<Identity> {
    if args.manifest.is_some() || args.max_st.is_some() {
        bail!("--manifest and --max-st apply only to `verify suite`");
    }
    if args.identity.contains('(') {
        if !args.params.is_empty() || args.k.is_some() || args.s.is_some() || args.t.is_some() {
            bail!("parameters given twice for `{}`", args.identity);
        }
        return Ok(args.identity.parse()?);
    }
    let mut params = args.params.clone();
    params.extend(args.k);
    params.extend(args.s);
    params.extend(args.t);
    if args.k.is_some() && (args.s.is_some() || args.t.is_some()) {
        bail!("--k cannot be combined with --s/--t");
    }
    Ok(Identity::from_parts(&args.identity, &params)?)
}

fn options(args: &VerifyArgs) -> VerifyOptions {
    VerifyOptions { window_audit: args.window_audit, ..VerifyOptions::default() }
}

fn run_single(args: VerifyArgs) -> Result<bool> {
    let identity = single_identity(&args)?;
    let order = args.order.unwrap_or(QExponent::from_integer(20));
    let start = Instant::now();
    let report = verify_identity_with(identity, order, options(&args))
        .with_context(|| format!("verifying {identity}"))?;
    let reports = [report];
    let name = reports[0].label().replace(['(', ')', ','], "_");
    finish(None, &reports, start, &args, &name)
}

fn run_suite(args: VerifyArgs) -> Result<bool> {
    if !args.params.is_empty() || args.k.is_some() || args.s.is_some() || args.t.is_some() {
        bail!("`verify suite` takes no identity parameters");
    }
    let text = match &args.manifest {
        Some(path) => std::fs::read_to_string(path)
            .with_context(|| format!("reading manifest {}", path.display()))?,
        None => DEFAULT_MANIFEST.to_string(),
    };
    let manifest = Manifest::parse(&text)?;
    let order = match args.order {
        Some(o) => o,
        None => manifest.order()?,
    };
    let identities = manifest.expand(args.max_st.unwrap_or(manifest.max_st))?;
    let opts = options(&args);
    let start = Instant::now();
    // indexed parallel collect keeps manifest order
    let reports = identities
        .par_iter()
        .map(|&id| verify_identity_with(id, order, opts).with_context(|| format!("verifying {id}")))
        .collect::<Result<Vec<_>>>()?;
    finish(Some(&manifest.version), &reports, start, &args, &manifest.version)
}

fn finish(
    manifest: Option<&str>,
    reports: &[VerificationReport],
    start: Instant,
    args: &VerifyArgs,
    stem: &str,
) -> Result<bool> {
    let runtime = start.elapsed().as_secs_f64();
    let (text, ext) = match args.format {
        Format::Text => (output::text_document(manifest, reports), "txt"),
        Format::Json => (output::json_document(manifest, reports, runtime)?, "json"),
    };
    output::emit(&text, args.output.as_deref(), &format!("{stem}.{ext}"))?;
    if args.format == Format::Text {
        eprintln!("runtime {runtime:.3}s");
    }
    match reports.iter().find(|r| !r.matched) {
        Some(r) => {
            eprintln!("first failing report: {}", r.text_line());
            Ok(false)
        }
        None => Ok(true),
    }
}
