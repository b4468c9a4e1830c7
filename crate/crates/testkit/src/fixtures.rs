use std::path::PathBuf;

use skyselect_core::catalog::{load_catalog_with, Catalog, LoadOptions};
use skyselect_core::pricing::{load_rates, RateTable};

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture_path(name: &str) -> PathBuf {
    fixture_dir().join(name)
}

pub fn read_fixture(name: &str) -> String {
    let path = fixture_path(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("reading {}: {e}", path.display()))
}

/// The nine-provider catalog as shipped, one entry per physical region.
pub fn nine_providers() -> Catalog {
    load_catalog_with(&read_fixture("catalog-9-providers.json"), LoadOptions::default()).expect("fixture loads")
}

/// The nine-provider catalog with equally priced regions merged.
pub fn nine_providers_merged() -> Catalog {
    load_catalog_with(&read_fixture("catalog-9-providers.json"), LoadOptions { merge_regions: true })
        .expect("fixture loads")
}

/// Rates under which the fixture reproduces the published figures.
pub fn calibrated_rates() -> RateTable {
    load_rates(&read_fixture("rates-calibrated.json")).expect("rates load")
}

pub fn sample_rates() -> RateTable {
    load_rates(&read_fixture("rates-sample.json")).expect("rates load")
}

/// A table holding only the USD identity rate.
pub fn usd_rates() -> RateTable {
    load_rates(r#"{"effective_date":"2026-01-01","rates":{"USD":1}}"#).expect("rates load")
}
