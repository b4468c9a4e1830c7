use std::sync::Arc;

use parking_lot::{Mutex, RwLock};

use super::model::Catalog;
use super::CatalogError;

/// Holder of the current catalog snapshot.
///
/// Readers take a cheap `Arc` to an immutable snapshot; writers are serialized
/// and publish a whole new snapshot.
#[derive(Debug)]
pub struct SharedCatalog {
    current: RwLock<Arc<Catalog>>,
    writer: Mutex<()>,
}

impl SharedCatalog {
    pub fn new(catalog: Catalog) -> Self {
        SharedCatalog { current: RwLock::new(Arc::new(catalog)), writer: Mutex::new(()) }
    }

    pub fn snapshot(&self) -> Arc<Catalog> {
        self.current.read().clone()
    }

    /// Applies `f` to the current snapshot and publishes the result.
    pub fn update<F>(&self, f: F) -> Result<Arc<Catalog>, CatalogError>
    where
        F: FnOnce(&Catalog) -> Result<Catalog, CatalogError>,
    {
        let _guard = self.writer.lock();
        let next = Arc::new(f(&self.snapshot())?);
        *self.current.write() = next.clone();
        Ok(next)
    }
}
