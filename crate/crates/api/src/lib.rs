//! REST service for cost estimation and service selection.
//!
//! `GET /api/cost/{storage,compute,combined}` take the usage and requirement
//! parameters as a query string and answer with ranked bundles in JSON or
//! XML; `GET /api/recommendation/{id}` returns the unrounded breakdowns of
//! an earlier answer.

pub mod query;
pub mod render;
pub mod server;

pub use query::{parse_range_list, ApiQuery, Endpoint, MediaType, Problem, QueryError};
pub use render::{Envelope, Meta, Row, DISPLAY_DIGITS};
pub use server::{router, serve, AppState, ErrorBody};
