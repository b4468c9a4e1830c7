use rust_decimal::Decimal;
use std::str::FromStr;

use super::request::{Bound, ComputeRequirement, Criterion, CriterionValue, Parameter};
use crate::catalog::{ComputeOffering, Location, Provider, Region, StorageOffering};

/// A compute offering together with its provider and region.
#[derive(Debug, Clone, Copy)]
pub struct PlacedCompute<'a> {
    pub provider: &'a Provider,
    pub region: &'a Region,
    pub offering: &'a ComputeOffering,
}

fn numeric(bound: Bound, actual: Decimal, wanted: Decimal) -> bool {
    match bound {
        Bound::Min => actual >= wanted,
        Bound::Max => actual <= wanted,
        Bound::Equal => actual == wanted,
    }
}

impl Criterion {
    /// Location and provider criteria; other parameters pass.
    pub fn accepts_placement(&self, provider: &Provider, region: &Region) -> bool {
        match (&self.parameter, &self.value) {
            (Parameter::Location, CriterionValue::Text(t)) => Location::from_str(t).is_ok_and(|loc| region.serves(loc)),
            (Parameter::Provider, CriterionValue::Text(t)) => provider.name.eq_ignore_ascii_case(t),
            _ => true,
        }
    }

    /// Compute configuration criteria; other parameters pass.
    pub fn accepts_compute(&self, o: &ComputeOffering) -> bool {
        let CriterionValue::Number(wanted) = self.value else { return true };
        let actual = match self.parameter {
            Parameter::RamGb => o.ram_gb,
            Parameter::LocalStorageGb => o.local_storage_gb,
            Parameter::Cores => Decimal::from(o.cores),
            Parameter::SpeedGhz => o.speed_ghz,
            _ => return true,
        };
        numeric(self.bound, actual, wanted)
    }

    /// Network storage capacity criteria; other parameters pass.
    pub fn accepts_storage(&self, o: &StorageOffering) -> bool {
        match (self.parameter, &self.value) {
            (Parameter::StorageGb, CriterionValue::Number(v)) => match self.bound {
                Bound::Min => o.max_gb.is_none_or(|max| max >= *v),
                Bound::Max => o.min_gb <= *v,
                Bound::Equal => o.admits(*v),
            },
            _ => true,
        }
    }
}

pub(crate) fn provider_allowed(filter: Option<&[String]>, provider: &Provider) -> bool {
    filter.is_none_or(|names| names.iter().any(|n| n == &provider.name))
}

/// Whether a compute offering meets a requirement's ranges and its extra
/// compute criteria (placement criteria are checked per bundle).
pub fn compute_matches(requirement: &ComputeRequirement, o: &ComputeOffering) -> bool {
    requirement.ram_range.contains(o.ram_gb)
        && requirement.local_storage_range.contains(o.local_storage_gb)
        && requirement.extra_criteria.iter().all(|c| c.accepts_compute(o))
}

/// Keeps offerings within the requirement's RAM and local-storage ranges,
/// from the allowed providers (all when the filter is absent), and meeting
/// every extra criterion.
pub fn filter_compute<'a>(
    offerings: impl IntoIterator<Item = PlacedCompute<'a>>,
    requirement: &ComputeRequirement,
    provider_filter: Option<&[String]>,
) -> Vec<PlacedCompute<'a>> {
    offerings
        .into_iter()
        .filter(|p| provider_allowed(provider_filter, p.provider))
        .filter(|p| requirement.extra_criteria.iter().all(|c| c.accepts_placement(p.provider, p.region)))
        .filter(|p| compute_matches(requirement, p.offering))
        .collect()
}

/// Every compute offering of the catalog, placed.
pub fn placed_compute(catalog: &crate::catalog::Catalog) -> impl Iterator<Item = PlacedCompute<'_>> {
    catalog.providers.iter().flat_map(|provider| {
        provider.regions.iter().flat_map(move |region| {
            region.compute.iter().map(move |offering| PlacedCompute { provider, region, offering })
        })
    })
}
