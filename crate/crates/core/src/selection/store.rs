use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use parking_lot::Mutex;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use uuid::Uuid;

pub const DEFAULT_RESULT_TTL: Duration = Duration::from_secs(30 * 60);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ResultId(Uuid);

impl fmt::Display for ResultId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for ResultId {
    type Err = StoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Uuid::parse_str(s).map(ResultId).map_err(|_| StoreError::NotFound(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StoreError {
    #[error("result `{0}` not found or expired")]
    NotFound(String),
    #[error("refusing to store an empty result")]
    Empty,
}

/// Results that implement this can report emptiness to the store.
pub trait StoredResult: Clone {
    fn is_empty_result(&self) -> bool;
}

impl<T: Clone> StoredResult for Vec<T> {
    fn is_empty_result(&self) -> bool {
        self.is_empty()
    }
}

/// In-memory result store whose entries expire after a TTL.
#[derive(Debug)]
pub struct ResultStore<T> {
    ttl: Duration,
    entries: Mutex<HashMap<ResultId, (Instant, T)>>,
}

impl<T: StoredResult> Default for ResultStore<T> {
    fn default() -> Self {
        Self::new(DEFAULT_RESULT_TTL)
    }
}

impl<T: StoredResult> ResultStore<T> {
    pub fn new(ttl: Duration) -> Self {
        ResultStore { ttl, entries: Mutex::new(HashMap::new()) }
    }

    pub fn ttl(&self) -> Duration {
        self.ttl
    }

    pub fn store(&self, result: T) -> Result<ResultId, StoreError> {
        self.store_at(result, Instant::now())
    }

    pub fn store_at(&self, result: T, now: Instant) -> Result<ResultId, StoreError> {
        if result.is_empty_result() {
            return Err(StoreError::Empty);
        }
        let id = ResultId(Uuid::new_v4());
        let mut entries = self.entries.lock();
        entries.retain(|_, (stored, _)| now.saturating_duration_since(*stored) < self.ttl);
        entries.insert(id, (now, result));
        Ok(id)
    }

    pub fn fetch(&self, id: &ResultId) -> Result<T, StoreError> {
        self.fetch_at(id, Instant::now())
    }

    pub fn fetch_at(&self, id: &ResultId, now: Instant) -> Result<T, StoreError> {
        let mut entries = self.entries.lock();
        match entries.get(id) {
            Some((stored, value)) if now.saturating_duration_since(*stored) < self.ttl => Ok(value.clone()),
            Some(_) => {
                entries.remove(id);
                Err(StoreError::NotFound(id.to_string()))
            }
            None => Err(StoreError::NotFound(id.to_string())),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.lock().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn read_your_write() {
        let store = ResultStore::default();
        let id = store.store(vec![1, 2, 3]).unwrap();
        assert_eq!(store.fetch(&id).unwrap(), vec![1, 2, 3]);
    }

    #[test]
    fn expiry() {
        let store = ResultStore::new(Duration::from_secs(60));
        let t0 = Instant::now();
        let id = store.store_at(vec!["x"], t0).unwrap();
        assert!(store.fetch_at(&id, t0 + Duration::from_secs(59)).is_ok());
        assert_eq!(store.fetch_at(&id, t0 + Duration::from_secs(60)), Err(StoreError::NotFound(id.to_string())));
        assert!(store.is_empty());
    }

    #[test]
    fn distinct_ids_and_empty_rejected() {
        let store = ResultStore::default();
        let a = store.store(vec![1]).unwrap();
        let b = store.store(vec![1]).unwrap();
        assert_ne!(a, b);
        assert_eq!(store.store(Vec::<i32>::new()), Err(StoreError::Empty));
    }

    #[test]
    fn malformed_id() {
        assert!(matches!("not-a-uuid".parse::<ResultId>(), Err(StoreError::NotFound(_))));
    }
}
