use std::cmp::Ordering;

use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::filter::{compute_matches, provider_allowed};
use super::request::{validate_request, SelectionRequest, ValidationError};
use crate::catalog::{Catalog, ComputeOffering, Provider, Region, StorageOffering, TransferOffering};
use crate::pricing::{
    offering_compute_cost, offering_storage_cost, requests_cost, transfer_charges, CostBreakdown, PricingError,
    RateTable, TransferCharges,
};

#[derive(Debug, Error)]
pub enum SelectionError {
    #[error("invalid request: {}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<ValidationError>),
    #[error(transparent)]
    Pricing(#[from] PricingError),
}

/// One same-provider, same-region combination of offerings.
#[derive(Debug, Clone)]
pub struct Candidate<'a> {
    pub provider: &'a Provider,
    pub region: &'a Region,
    pub storage: Option<&'a StorageOffering>,
    /// One offering per compute requirement, in request order.
    pub compute: Vec<&'a ComputeOffering>,
    pub transfer: &'a TransferOffering,
}

/// A costed, ranked bundle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recommendation {
    pub rank: usize,
    pub provider_name: String,
    pub region_name: String,
    pub storage_offering: Option<String>,
    pub compute_offerings: Vec<String>,
    pub transfer_offering: String,
    pub breakdown: CostBreakdown,
}

impl Recommendation {
    /// Total order used for ranking: total, then provider, region and
    /// offering names.
    pub fn ranking_cmp(&self, other: &Self) -> Ordering {
        self.breakdown
            .total
            .cmp(&other.breakdown.total)
            .then_with(|| self.provider_name.cmp(&other.provider_name))
            .then_with(|| self.region_name.cmp(&other.region_name))
            .then_with(|| self.storage_offering.cmp(&other.storage_offering))
            .then_with(|| self.compute_offerings.cmp(&other.compute_offerings))
            .then_with(|| self.transfer_offering.cmp(&other.transfer_offering))
    }
}

struct Scope<'r> {
    request: &'r SelectionRequest,
}

impl<'r> Scope<'r> {
    fn region_ok(&self, provider: &Provider, region: &Region) -> bool {
        provider_allowed(self.request.provider_filter.as_deref(), provider)
            && self.request.criteria.iter().all(|c| c.accepts_placement(provider, region))
            && (!self.request.include_compute
                || self
                    .request
                    .compute_requirements
                    .iter()
                    .flat_map(|r| &r.extra_criteria)
                    .all(|c| c.accepts_placement(provider, region)))
    }

    fn storage_ok(&self, o: &StorageOffering) -> bool {
        let extra = self.request.compute_requirements.iter().flat_map(|r| &r.extra_criteria);
        self.request.criteria.iter().all(|c| c.accepts_storage(o))
            && (!self.request.include_compute || extra.clone().all(|c| c.accepts_storage(o)))
    }

    fn compute_slot<'a>(&self, slot: usize, region: &'a Region) -> Vec<&'a ComputeOffering> {
        let requirement = &self.request.compute_requirements[slot];
        region
            .compute
            .iter()
            .filter(|o| compute_matches(requirement, o))
            .filter(|o| self.request.criteria.iter().all(|c| c.accepts_compute(o)))
            .collect()
    }
}

/// Calls `f` with every index vector of the cartesian product of `sizes`.
fn for_each_combination(sizes: &[usize], mut f: impl FnMut(&[usize])) {
    if sizes.contains(&0) {
        return;
    }
    let mut idx = vec![0usize; sizes.len()];
    loop {
        f(&idx);
        let mut k = sizes.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < sizes[k] {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Every bundle satisfying the request's criteria: per provider and region,
/// one storage offering (when storage is requested) times one compute
/// offering per requirement (when compute is requested) times one mandatory
/// transfer offering. Bundles never span providers or regions.
pub fn enumerate_candidates<'a>(catalog: &'a Catalog, request: &SelectionRequest) -> Vec<Candidate<'a>> {
    let scope = Scope { request };
    let mut out = Vec::new();
    for provider in &catalog.providers {
        for region in &provider.regions {
            if !scope.region_ok(provider, region) {
                continue;
            }
            let storage: Vec<Option<&StorageOffering>> = if request.include_storage {
                region.storage.iter().filter(|o| scope.storage_ok(o)).map(Some).collect()
            } else {
                vec![None]
            };
            let slots: Vec<Vec<&ComputeOffering>> = if request.include_compute {
                (0..request.compute_requirements.len()).map(|i| scope.compute_slot(i, region)).collect()
            } else {
                Vec::new()
            };
            let mut sizes = vec![storage.len(), region.transfer.len()];
            sizes.extend(slots.iter().map(Vec::len));
            for_each_combination(&sizes, |idx| {
                out.push(Candidate {
                    provider,
                    region,
                    storage: storage[idx[0]],
                    compute: slots.iter().zip(&idx[2..]).map(|(slot, &i)| slot[i]).collect(),
                    transfer: &region.transfer[idx[1]],
                });
            });
        }
    }
    out
}

fn usage_amounts(request: &SelectionRequest) -> (Decimal, Decimal, Decimal) {
    let u = &request.usage;
    (u.storage_gb.unwrap_or_default(), u.transfer_in_gb.unwrap_or_default(), u.transfer_out_gb.unwrap_or_default())
}

/// Costs one candidate in USD; `None` when the usage does not fit the
/// offerings' capacity.
pub fn cost_candidate(candidate: &Candidate<'_>, request: &SelectionRequest) -> Option<CostBreakdown> {
    let (gb, in_gb, out_gb) = usage_amounts(request);
    let days = request.usage.duration_days;
    let (storage, requests) = match candidate.storage {
        Some(o) => (offering_storage_cost(o, gb, days).ok()?, requests_cost(o, &request.usage.request_counts)),
        None => (Decimal::ZERO, Decimal::ZERO),
    };
    let transfer = transfer_charges(candidate.transfer, in_gb, out_gb).ok()?;
    let compute = candidate
        .compute
        .iter()
        .zip(&request.compute_requirements)
        .map(|(o, r)| offering_compute_cost(o, r.hours(), r.instance_count, days))
        .collect();
    Some(CostBreakdown::from_components(storage, requests, transfer, compute))
}

/// Ranked recommendations for a request.
///
/// Each feasible bundle is costed (storage, requests, transfer and every
/// compute slot), converted into the request currency and sorted by
/// non-decreasing total with a deterministic tie-break. Component costs are
/// computed once per offering and region and reused across combinations.
pub fn select(
    request: &SelectionRequest,
    catalog: &Catalog,
    rates: &RateTable,
) -> Result<Vec<Recommendation>, SelectionError> {
    let errors = validate_request(request);
    if !errors.is_empty() {
        return Err(SelectionError::Invalid(errors));
    }
    let rate = rates.rate(&request.currency)?;
    let scope = Scope { request };
    let (gb, in_gb, out_gb) = usage_amounts(request);
    let days = request.usage.duration_days;

    let mut out = Vec::new();
    for provider in &catalog.providers {
        for region in &provider.regions {
            if !scope.region_ok(provider, region) {
                continue;
            }
            let transfers: Vec<(&TransferOffering, TransferCharges)> = region
                .transfer
                .iter()
                .filter_map(|t| transfer_charges(t, in_gb, out_gb).ok().map(|c| (t, c)))
                .collect();
            let storages: Vec<(Option<&StorageOffering>, Decimal, Decimal)> = if request.include_storage {
                region
                    .storage
                    .iter()
                    .filter(|o| scope.storage_ok(o))
                    .filter_map(|o| {
                        let cost = offering_storage_cost(o, gb, days).ok()?;
                        Some((Some(o), cost, requests_cost(o, &request.usage.request_counts)))
                    })
                    .collect()
            } else {
                vec![(None, Decimal::ZERO, Decimal::ZERO)]
            };
            let slots: Vec<Vec<(&ComputeOffering, Decimal)>> = if request.include_compute {
                request
                    .compute_requirements
                    .iter()
                    .enumerate()
                    .map(|(i, r)| {
                        scope
                            .compute_slot(i, region)
                            .into_iter()
                            .map(|o| (o, offering_compute_cost(o, r.hours(), r.instance_count, days)))
                            .collect()
                    })
                    .collect()
            } else {
                Vec::new()
            };

            let mut sizes = vec![storages.len(), transfers.len()];
            sizes.extend(slots.iter().map(Vec::len));
            for_each_combination(&sizes, |idx| {
                let (storage, storage_cost, req_cost) = storages[idx[0]];
                let (transfer, charges) = transfers[idx[1]];
                let picked: Vec<&(&ComputeOffering, Decimal)> =
                    slots.iter().zip(&idx[2..]).map(|(slot, &i)| &slot[i]).collect();
                let usd = CostBreakdown::from_components(
                    storage_cost,
                    req_cost,
                    charges,
                    picked.iter().map(|(_, c)| *c).collect(),
                );
                out.push(Recommendation {
                    rank: 0,
                    provider_name: provider.name.clone(),
                    region_name: region.name.clone(),
                    storage_offering: storage.map(|s| s.name.clone()),
                    compute_offerings: picked.iter().map(|(o, _)| o.name.clone()).collect(),
                    transfer_offering: transfer.name.clone(),
                    breakdown: usd,
                });
            });
        }
    }

    for rec in &mut out {
        rec.breakdown = rec.breakdown.scaled(&request.currency, rate);
    }
    out.sort_by(Recommendation::ranking_cmp);
    if let Some(limit) = request.limit {
        out.truncate(limit);
    }
    for (i, rec) in out.iter_mut().enumerate() {
        rec.rank = i + 1;
    }
    Ok(out)
}
