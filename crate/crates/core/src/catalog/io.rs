use super::merge::merge_all_regions;
use super::model::Catalog;
use super::validate::validate;
use super::CatalogError;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadOptions {
    /// Combine regions of a provider whose offerings are priced identically.
    pub merge_regions: bool,
}

/// Parses and validates catalog file content.
pub fn load_catalog(text: &str) -> Result<Catalog, CatalogError> {
    load_catalog_with(text, LoadOptions::default())
}

pub fn load_catalog_with(text: &str, options: LoadOptions) -> Result<Catalog, CatalogError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let catalog: Catalog = serde_path_to_error::deserialize(&mut de).map_err(|err| {
        let path = err.path().to_string();
        let inner = err.into_inner();
        CatalogError::Parse { line: inner.line(), column: inner.column(), path, message: inner.to_string() }
    })?;
    let violations = validate(&catalog);
    if !violations.is_empty() {
        return Err(CatalogError::Invalid(violations));
    }
    Ok(if options.merge_regions { merge_all_regions(catalog) } else { catalog })
}

/// Serializes a catalog back to the file format.
pub fn to_json(catalog: &Catalog) -> String {
    serde_json::to_string_pretty(catalog).expect("catalog serialization is infallible")
}
