//! Request validation, criteria filtering, bundle enumeration and cost ranking.

mod engine;
mod filter;
mod offers;
mod request;
mod store;

pub use engine::{cost_candidate, enumerate_candidates, select, Candidate, Recommendation, SelectionError};
pub use filter::{compute_matches, filter_compute, placed_compute, PlacedCompute};
pub use offers::{offer_count, OfferCountReport, ProviderOfferCount, TierCount};
pub use request::{
    requirements_from_lists, validate_request, Bound, ComputeDemand, ComputeRequirement, ComputeUsage, Criterion,
    CriterionValue, Parameter, Range, SelectionRequest, ValidationError,
};
pub use store::{ResultId, ResultStore, StoreError, StoredResult, DEFAULT_RESULT_TTL};
