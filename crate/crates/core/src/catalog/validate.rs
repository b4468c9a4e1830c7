use std::collections::{BTreeSet, HashSet};

use rust_decimal::Decimal;

use super::model::*;
use super::Violation;

fn negative(v: Decimal) -> bool {
    v < Decimal::ZERO
}

struct Sink {
    violations: Vec<Violation>,
}

impl Sink {
    fn push(&mut self, location: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation { location: location.into(), message: message.into() });
    }
}

/// Returns every invariant violation in the catalog; empty means valid.
pub fn validate(catalog: &Catalog) -> Vec<Violation> {
    let mut sink = Sink { violations: Vec::new() };
    if catalog.base_currency != BASE_CURRENCY {
        sink.push("catalog", format!("base_currency must be {BASE_CURRENCY}, found `{}`", catalog.base_currency));
    }
    let mut seen = HashSet::new();
    for provider in &catalog.providers {
        if !seen.insert(provider.name.as_str()) {
            sink.push(provider.name.clone(), "duplicate provider name");
        }
        check_provider(provider, &mut sink);
    }
    sink.violations
}

fn check_provider(provider: &Provider, sink: &mut Sink) {
    if provider.name.trim().is_empty() {
        sink.push("catalog", "provider with empty name");
    }
    if provider.regions.is_empty() {
        sink.push(provider.name.clone(), "provider has no regions");
    }
    let mut seen = HashSet::new();
    for region in &provider.regions {
        let at = format!("{}/{}", provider.name, region.name);
        if !seen.insert(region.name.as_str()) {
            sink.push(at.clone(), "duplicate region name");
        }
        check_unique(&at, "compute", region.compute.iter().map(|o| o.name.as_str()), sink);
        check_unique(&at, "storage", region.storage.iter().map(|o| o.name.as_str()), sink);
        check_unique(&at, "transfer", region.transfer.iter().map(|o| o.name.as_str()), sink);
        for o in &region.compute {
            for message in compute_problems(o) {
                sink.push(format!("{at}/compute/{}", o.name), message);
            }
        }
        for o in &region.storage {
            for message in storage_problems(o) {
                sink.push(format!("{at}/storage/{}", o.name), message);
            }
        }
        for o in &region.transfer {
            for message in transfer_problems(o) {
                sink.push(format!("{at}/transfer/{}", o.name), message);
            }
        }
    }
}

fn check_unique<'a>(at: &str, kind: &str, names: impl Iterator<Item = &'a str>, sink: &mut Sink) {
    let mut seen = HashSet::new();
    for name in names {
        if !seen.insert(name) {
            sink.push(format!("{at}/{kind}/{name}"), format!("duplicate {kind} offering name"));
        }
    }
}

/// Invariant problems of a single offering, independent of its placement.
pub(crate) fn offering_problems(offering: &Offering) -> Vec<String> {
    match offering {
        Offering::Compute(o) => compute_problems(o),
        Offering::Storage(o) => storage_problems(o),
        Offering::Transfer(o) => transfer_problems(o),
    }
}

fn compute_problems(o: &ComputeOffering) -> Vec<String> {
    let mut out = Vec::new();
    if o.name.trim().is_empty() {
        out.push("empty offering name".to_string());
    }
    if o.cores < 1 {
        out.push(format!("cores must be >= 1, found {}", o.cores));
    }
    if o.speed_ghz <= Decimal::ZERO {
        out.push(format!("speed_ghz must be > 0, found {}", o.speed_ghz));
    }
    if o.ram_gb <= Decimal::ZERO {
        out.push(format!("ram_gb must be > 0, found {}", o.ram_gb));
    }
    if negative(o.local_storage_gb) {
        out.push(format!("local_storage_gb must be >= 0, found {}", o.local_storage_gb));
    }
    let components = o.billing.components();
    if components.iter().copied().any(negative) {
        out.push("billing rates must be >= 0".to_string());
    }
    if o.plan.is_on_demand() && components.iter().all(|c| c.is_zero()) {
        out.push("on-demand offering needs at least one positive billing rate".to_string());
    }
    out.extend(plan_problems(&o.plan));
    out
}

fn storage_problems(o: &StorageOffering) -> Vec<String> {
    let mut out = Vec::new();
    if o.name.trim().is_empty() {
        out.push("empty offering name".to_string());
    }
    if negative(o.min_gb) {
        out.push(format!("min_gb must be >= 0, found {}", o.min_gb));
    }
    if let Some(max) = o.max_gb {
        if max < o.min_gb {
            out.push(format!("min_gb {} exceeds max_gb {max}", o.min_gb));
        }
    }
    if let Err(e) = o.gb_month_tiers.check() {
        out.push(format!("gb_month_tiers: {e}"));
    }
    let mut claimed: BTreeSet<Operation> = BTreeSet::new();
    for (i, entry) in o.requests.iter().enumerate() {
        if entry.ops.is_empty() {
            out.push(format!("requests[{i}]: empty operation set"));
        }
        if negative(entry.rate_per_10k) {
            out.push(format!("requests[{i}]: negative rate"));
        }
        if entry.charged != Charge::Charged && !entry.rate_per_10k.is_zero() {
            out.push(format!("requests[{i}]: {:?} entries must have rate 0", entry.charged));
        }
        for op in &entry.ops {
            if !claimed.insert(*op) {
                out.push(format!("requests[{i}]: operation {op} priced twice"));
            }
        }
    }
    out.extend(plan_problems(&o.plan));
    out
}

fn transfer_problems(o: &TransferOffering) -> Vec<String> {
    let mut out = Vec::new();
    if o.name.trim().is_empty() {
        out.push("empty offering name".to_string());
    }
    if let Err(e) = o.in_tiers.check() {
        out.push(format!("in_tiers: {e}"));
    }
    if let Err(e) = o.out_tiers.check() {
        out.push(format!("out_tiers: {e}"));
    }
    out
}

fn plan_problems(plan: &PlanPricing) -> Vec<String> {
    let mut out = Vec::new();
    if [plan.per_period_cost, plan.overage_rate, plan.included_units].into_iter().any(negative) {
        out.push("plan amounts must be >= 0".to_string());
    }
    match plan.plan_type {
        PlanType::OnDemand => {
            if !plan.per_period_cost.is_zero() {
                out.push("on-demand plan cannot carry a per-period cost".to_string());
            }
        }
        PlanType::Period => {
            if plan.period_length_days == 0 {
                out.push("period plan needs period_length_days > 0".to_string());
            }
        }
    }
    out
}
