use std::net::SocketAddr;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use skyselect_api::Endpoint;

#[derive(Debug, Parser)]
#[command(name = "skyselect", version, about = "Cloud service selection: cost estimates and ranked bundles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a catalog file and list every invariant it breaks.
    Validate(CatalogArgs),
    /// Rank provider bundles for a usage estimate, offline.
    Select(Box<SelectArgs>),
    /// Serve the HTTP API.
    Serve(ServeArgs),
    /// Report the size of the selection space per provider.
    OfferCount(OfferCountArgs),
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    /// Catalog JSON file.
    #[arg(long, env = "SKYSELECT_CATALOG")]
    pub catalog: PathBuf,
    /// Merge regions whose offerings are priced identically.
    #[arg(long)]
    pub merge_regions: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Storage,
    Compute,
    Combined,
}

impl From<Kind> for Endpoint {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Storage => Endpoint::Storage,
            Kind::Compute => Endpoint::Compute,
            Kind::Combined => Endpoint::Combined,
        }
    }
}

/// Flags mirror the API query parameters, with `-` for `_`.
#[derive(Debug, Args)]
pub struct SelectArgs {
    #[command(flatten)]
    pub catalog: CatalogArgs,
    /// Exchange-rate JSON file; without one only USD is available.
    #[arg(long, env = "SKYSELECT_RATES")]
    pub rates: Option<PathBuf>,
    /// Query kind; inferred from the flags when omitted.
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
    /// Digits shown after the decimal point.
    #[arg(long, default_value_t = skyselect_api::DISPLAY_DIGITS)]
    pub digits: u32,
    /// Print exact amounts instead of rounding.
    #[arg(long)]
    pub precise: bool,

    /// Stored data, GB.
    #[arg(long)]
    pub storage: Option<String>,
    /// Usage period in days (default 31).
    #[arg(long)]
    pub duration: Option<String>,
    /// Inbound transfer, GB.
    #[arg(long, visible_alias = "in")]
    pub data_upload_size: Option<String>,
    /// Outbound transfer, GB.
    #[arg(long, visible_alias = "out")]
    pub data_download_size: Option<String>,
    #[arg(long)]
    pub copy: Option<String>,
    #[arg(long)]
    pub get: Option<String>,
    #[arg(long)]
    pub put: Option<String>,
    #[arg(long)]
    pub post: Option<String>,
    #[arg(long)]
    pub list: Option<String>,
    #[arg(long)]
    pub delete: Option<String>,
    #[arg(long)]
    pub search: Option<String>,
    #[arg(long)]
    pub head: Option<String>,

    /// RAM bounds in GB per instance slot, `low,high;low,high`.
    #[arg(long)]
    pub ram_range: Option<String>,
    /// Local storage bounds in GB per slot, `low,high;...`.
    #[arg(long)]
    pub storage_range: Option<String>,
    /// Hours per slot, comma separated.
    #[arg(long)]
    pub hour: Option<String>,
    /// Months per slot, comma separated (744 h each).
    #[arg(long)]
    pub month: Option<String>,
    /// Instance count per slot, comma separated.
    #[arg(long)]
    pub n: Option<String>,

    #[arg(long, default_value = "USD")]
    pub currency: String,
    /// Only these providers, comma separated.
    #[arg(long)]
    pub providers: Option<String>,
    /// Only regions serving this location.
    #[arg(long)]
    pub location: Option<String>,
    /// Keep the cheapest N rows.
    #[arg(long)]
    pub limit: Option<String>,
}

impl SelectArgs {
    fn compute_flags(&self) -> bool {
        [&self.ram_range, &self.storage_range, &self.hour, &self.month, &self.n].iter().any(|f| f.is_some())
    }

    pub fn kind(&self) -> Kind {
        self.kind.unwrap_or(match (self.compute_flags(), self.storage.is_some()) {
            (true, true) => Kind::Combined,
            (true, false) => Kind::Compute,
            (false, _) => Kind::Storage,
        })
    }

    /// The flags as API query parameters.
    pub fn query_pairs(&self) -> Vec<(&'static str, String)> {
        let mut pairs = vec![("currency", self.currency.clone())];
        if self.precise {
            pairs.push(("precise", "true".into()));
        }
        let optional = [
            ("storage", &self.storage),
            ("duration", &self.duration),
            ("data_upload_size", &self.data_upload_size),
            ("data_download_size", &self.data_download_size),
            ("copy", &self.copy),
            ("get", &self.get),
            ("put", &self.put),
            ("post", &self.post),
            ("list", &self.list),
            ("delete", &self.delete),
            ("search", &self.search),
            ("head", &self.head),
            ("ram_range", &self.ram_range),
            ("storage_range", &self.storage_range),
            ("hour", &self.hour),
            ("month", &self.month),
            ("n", &self.n),
            ("providers", &self.providers),
            ("location", &self.location),
            ("limit", &self.limit),
        ];
        pairs.extend(optional.into_iter().filter_map(|(k, v)| v.clone().map(|v| (k, v))));
        pairs
    }
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[command(flatten)]
    pub catalog: CatalogArgs,
    #[arg(long, env = "SKYSELECT_RATES")]
    pub rates: Option<PathBuf>,
    #[arg(long, env = "SKYSELECT_BIND", default_value = "127.0.0.1:8080")]
    pub bind: SocketAddr,
}

#[derive(Debug, Args)]
pub struct OfferCountArgs {
    #[command(flatten)]
    pub catalog: CatalogArgs,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
}

/// The CLI flag for an API parameter name.
pub fn flag_for(param: &str) -> String {
    format!("--{}", param.replace('_', "-"))
}
