mod args;
mod table;

use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use skyselect_api::{ApiQuery, AppState, Endpoint, Envelope, QueryError};
use skyselect_core::catalog::{load_catalog_with, Catalog, CatalogError, LoadOptions};
use skyselect_core::pricing::{load_rates, RateTable};
use skyselect_core::{offer_count, select, SelectionError};

use args::{flag_for, CatalogArgs, Cli, Command, Format, OfferCountArgs, SelectArgs, ServeArgs};

/// A failed command and its exit status: 1 for invalid input data, 2 for
/// IO and usage problems.
#[derive(Debug)]
enum Failure {
    Invalid(String),
    Io(String),
    Usage(Vec<String>),
}

impl Failure {
    fn report(self) -> ExitCode {
        match self {
            Failure::Invalid(msg) => {
                eprintln!("{msg}");
                ExitCode::from(1)
            }
            Failure::Io(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
            Failure::Usage(lines) => {
                for line in lines {
                    eprintln!("error: {line}");
                }
                ExitCode::from(2)
            }
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))
}

fn load_catalog(args: &CatalogArgs) -> Result<Catalog, Failure> {
    let text = read(&args.catalog)?;
    load_catalog_with(&text, LoadOptions { merge_regions: args.merge_regions }).map_err(|e| match e {
        CatalogError::Invalid(violations) => Failure::Invalid(
            std::iter::once(format!("{}: {} violation(s)", args.catalog.display(), violations.len()))
                .chain(violations.iter().map(|v| format!("  {v}")))
                .collect::<Vec<_>>()
                .join("\n"),
        ),
        other => Failure::Invalid(format!("{}: {other}", args.catalog.display())),
    })
}

fn load_rate_table(path: Option<&Path>) -> Result<RateTable, Failure> {
    match path {
        Some(p) => load_rates(&read(p)?).map_err(|e| Failure::Invalid(format!("{}: {e}", p.display()))),
        None => Ok(load_rates(r#"{"effective_date":"1970-01-01","rates":{"USD":1}}"#).expect("identity table")),
    }
}

fn cmd_validate(args: CatalogArgs) -> Result<(), Failure> {
    let catalog = load_catalog(&args)?;
    let regions: usize = catalog.providers.iter().map(|p| p.regions.len()).sum();
    println!("{}: ok, {} providers, {regions} regions", args.catalog.display(), catalog.providers.len());
    Ok(())
}

fn usage_problems(QueryError(problems): QueryError) -> Failure {
    Failure::Usage(
        problems
            .into_iter()
            .map(|p| match p.field {
                Some(field) => format!("{}: {}", flag_for(&field), p.message),
                None => p.message,
            })
            .collect(),
    )
}

fn cmd_select(args: SelectArgs) -> Result<(), Failure> {
    let endpoint: Endpoint = args.kind().into();
    let query = ApiQuery::from_pairs(endpoint, args.query_pairs()).map_err(usage_problems)?;
    let catalog = load_catalog(&args.catalog)?;
    let rates = load_rate_table(args.rates.as_deref())?;
    let started = Instant::now();
    let rows = select(&query.request, &catalog, &rates).map_err(|e| match e {
        SelectionError::Pricing(e) => Failure::Usage(vec![format!("--currency: {e}")]),
        other => Failure::Usage(vec![other.to_string()]),
    })?;
    let digits = (!query.precise).then_some(args.digits);
    let envelope = Envelope::new(&rows, query.request.currency.as_str(), digits, started.elapsed(), None);
    match args.format {
        Format::Json => print!("{}", envelope.to_json()),
        Format::Table => print!("{}", table::recommendations(endpoint, &envelope)),
    }
    Ok(())
}

fn cmd_offer_count(args: OfferCountArgs) -> Result<(), Failure> {
    let report = offer_count(&load_catalog(&args.catalog)?);
    match args.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).expect("report serializes")),
        Format::Table => print!("{}", table::offer_counts(&report)),
    }
    Ok(())
}

fn cmd_serve(args: ServeArgs) -> Result<(), Failure> {
    let catalog = load_catalog(&args.catalog)?;
    let rates = load_rate_table(args.rates.as_deref())?;
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::Io(e.to_string()))?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(args.bind)
            .await
            .map_err(|e| Failure::Io(format!("cannot bind {}: {e}", args.bind)))?;
        let addr = listener.local_addr().map_err(|e| Failure::Io(e.to_string()))?;
        eprintln!("listening on http://{addr}");
        let shutdown = async {
            let _ = tokio::signal::ctrl_c().await;
            tracing::info!("shutting down");
        };
        skyselect_api::serve(listener, AppState::new(catalog, rates), shutdown)
            .await
            .map_err(|e| Failure::Io(e.to_string()))
    })
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::from_default_env())
        .with_writer(std::io::stderr)
        .init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Validate(a) => cmd_validate(a),
        Command::Select(a) => cmd_select(*a),
        Command::Serve(a) => cmd_serve(a),
        Command::OfferCount(a) => cmd_offer_count(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.report(),
    }
}
