//! Unified, normalized model of provider infrastructure services.
//!
//! A [`Catalog`] is an immutable snapshot: providers own regions, regions own
//! compute, storage and transfer offerings. All prices are in USD. Snapshots
//! are loaded from the JSON catalog format (see `fixtures/catalog.schema.json`)
//! and mutated only by producing a new snapshot.

mod io;
mod merge;
mod model;
mod normalize;
mod query;
mod shared;
mod validate;

use std::fmt;

use rust_decimal::Decimal;
use thiserror::Error;

pub use io::{load_catalog, load_catalog_with, to_json, LoadOptions};
pub use merge::{merge_all_regions, merge_equal_price_regions};
pub use model::*;
pub use normalize::{normalize_memory, MemoryUnit};
pub use query::{list_offerings, upsert_offering, OfferingRow};
pub use shared::SharedCatalog;
pub use validate::validate;

/// One broken invariant, located by `provider/region/type/offering` path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub location: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("parse error at line {line}, column {column} (at `{path}`): {message}")]
    Parse { line: usize, column: usize, path: String, message: String },
    #[error("{}", format_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("negative {field}: {value}")]
    NegativeQuantity { field: &'static str, value: Decimal },
    #[error("invalid name pattern: {0}")]
    Pattern(#[from] regex::Error),
}

impl CatalogError {
    pub fn violations(&self) -> &[Violation] {
        match self {
            CatalogError::Invalid(v) => v,
            _ => &[],
        }
    }
}

fn format_violations(v: &[Violation]) -> String {
    let mut out = format!("catalog has {} invariant violation(s)", v.len());
    for violation in v {
        out.push_str("\n  ");
        out.push_str(&violation.to_string());
    }
    out
}
