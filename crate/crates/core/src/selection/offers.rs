use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::catalog::{Catalog, ComputeOffering, PlanType, Provider, StorageOffering, TransferOffering};

/// Number of price tiers an offering contributes to the offer count.
///
/// Compute: one per non-zero hourly rate component (instance, RAM-hour,
/// vCPU-hour); prepaid plans count their period fee and overage as two.
/// Storage: its GB-month tiers, or two for prepaid plans. Transfer: inbound
/// plus outbound tiers. Every offering counts at least one tier.
pub trait TierCount {
    fn tier_count(&self) -> u64;
}

impl TierCount for ComputeOffering {
    fn tier_count(&self) -> u64 {
        if self.plan.plan_type == PlanType::Period {
            return 2;
        }
        (self.billing.components().iter().filter(|c| !c.is_zero()).count() as u64).max(1)
    }
}

impl TierCount for StorageOffering {
    fn tier_count(&self) -> u64 {
        if self.plan.plan_type == PlanType::Period {
            return 2;
        }
        (self.gb_month_tiers.len() as u64).max(1)
    }
}

impl TierCount for TransferOffering {
    fn tier_count(&self) -> u64 {
        ((self.in_tiers.len() + self.out_tiers.len()) as u64).max(1)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProviderOfferCount {
    pub regions: u64,
    pub compute: u64,
    pub storage: u64,
    pub transfer: u64,
    pub simple_count: u64,
    pub detailed_count: u64,
}

/// Size of the selection space.
///
/// `simple_count` is the sum over providers of compute × storage × transfer
/// services; `detailed_count` weights each service by its price tiers and
/// multiplies by the provider's region count. Services are counted once per
/// provider by name, taking the largest tier count seen across regions.
/// `candidate_rows` and `candidate_columns` describe the candidate relation
/// actually enumerated by an unfiltered combined query with one compute slot.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OfferCountReport {
    pub simple_count: u64,
    pub detailed_count: u64,
    pub candidate_rows: u64,
    pub candidate_columns: u64,
    pub per_provider: BTreeMap<String, ProviderOfferCount>,
}

/// Columns of the candidate relation: provider, region, compute, storage, transfer.
const CANDIDATE_COLUMNS: u64 = 5;

fn distinct_tiers<'a, T: TierCount + 'a>(items: impl Iterator<Item = (&'a str, &'a T)>) -> BTreeMap<&'a str, u64> {
    let mut out: BTreeMap<&str, u64> = BTreeMap::new();
    for (name, item) in items {
        let t = item.tier_count();
        out.entry(name).and_modify(|v| *v = (*v).max(t)).or_insert(t);
    }
    out
}

fn provider_count(p: &Provider) -> ProviderOfferCount {
    let compute = distinct_tiers(p.regions.iter().flat_map(|r| r.compute.iter().map(|o| (o.name.as_str(), o))));
    let storage = distinct_tiers(p.regions.iter().flat_map(|r| r.storage.iter().map(|o| (o.name.as_str(), o))));
    let transfer = distinct_tiers(p.regions.iter().flat_map(|r| r.transfer.iter().map(|o| (o.name.as_str(), o))));
    let (cs, ss, ts) = (compute.len() as u64, storage.len() as u64, transfer.len() as u64);
    let regions = p.regions.len() as u64;
    let tiers = |m: &BTreeMap<&str, u64>| m.values().sum::<u64>();
    ProviderOfferCount {
        regions,
        compute: cs,
        storage: ss,
        transfer: ts,
        simple_count: cs * ss * ts,
        detailed_count: tiers(&compute) * tiers(&storage) * tiers(&transfer) * regions,
    }
}

pub fn offer_count(catalog: &Catalog) -> OfferCountReport {
    let mut report = OfferCountReport { candidate_columns: CANDIDATE_COLUMNS, ..Default::default() };
    for p in &catalog.providers {
        let c = provider_count(p);
        report.simple_count += c.simple_count;
        report.detailed_count += c.detailed_count;
        report.candidate_rows +=
            p.regions.iter().map(|r| (r.compute.len() * r.storage.len() * r.transfer.len()) as u64).sum::<u64>();
        report.per_provider.insert(p.name.clone(), c);
    }
    report
}
