//! Cloud infrastructure service selection.
//!
//! Heterogeneous provider price sheets are normalized into a [`catalog::Catalog`];
//! [`pricing`] turns usage estimates into costs; [`selection`] filters offerings
//! by user criteria, enumerates same-provider same-region bundles and ranks
//! them by total cost.

/// Decimal literal for tests, parsed from its source text.
#[cfg(test)]
#[macro_export]
macro_rules! dec {
    ($x:expr) => {
        <rust_decimal::Decimal as std::str::FromStr>::from_str(&stringify!($x).replace(' ', "")).unwrap()
    };
}

pub mod catalog;
pub mod pricing;
pub mod selection;

pub use rust_decimal::Decimal;

pub use catalog::{load_catalog, Catalog, CatalogError};
pub use pricing::{load_rates, CostBreakdown, CurrencyCode, PricingError, RateTable, UsageEstimate};
pub use selection::{offer_count, select, validate_request, Recommendation, SelectionError, SelectionRequest};
