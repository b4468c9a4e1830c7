//! Seeded random catalogs, tier schedules and selection requests.
//!
//! Every region of a provider carries the same offering names per service
//! type (prices may differ between regions), so per-provider service counts
//! are well defined.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use skyselect_core::catalog::*;
use skyselect_core::selection::{
    Bound, ComputeRequirement, ComputeUsage, Criterion, CriterionValue, Parameter, Range, SelectionRequest,
};
use skyselect_core::{Decimal, UsageEstimate};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A decimal `n · 10^-scale` with `n` drawn uniformly from `lo..=hi`.
pub fn scaled(rng: &mut TestRng, lo: i64, hi: i64, scale: u32) -> Decimal {
    Decimal::new(rng.gen_range(lo..=hi), scale)
}

/// Graduated schedule with 0 to 4 bands; bounds are multiples of 0.001 below
/// `max_bound`. The last band is unbounded unless `allow_bounded_last` and a
/// coin flip say otherwise.
pub fn schedule(rng: &mut TestRng, max_bound: i64, allow_bounded_last: bool) -> TierSchedule {
    let n = rng.gen_range(0..=4usize);
    if n == 0 {
        return TierSchedule::free();
    }
    let mut bounds: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=max_bound * 1000)).collect();
    bounds.sort_unstable();
    bounds.dedup();
    let bounded_last = allow_bounded_last && rng.gen_bool(0.3);
    let tiers = bounds
        .iter()
        .enumerate()
        .map(|(i, &b)| Tier {
            upto: if i + 1 == bounds.len() && !bounded_last { None } else { Some(Decimal::new(b, 3)) },
            rate: scaled(rng, 0, 500, 3),
        })
        .collect();
    TierSchedule::new(tiers)
}

fn period_plan(rng: &mut TestRng) -> PlanPricing {
    PlanPricing::period(
        scaled(rng, 1000, 20000, 2),
        *[7u32, 30, 31].choose(rng).unwrap(),
        scaled(rng, 0, 800, 0),
        scaled(rng, 0, 100, 3),
    )
}

fn compute_offering(rng: &mut TestRng, name: &str) -> ComputeOffering {
    let plan = if rng.gen_bool(0.15) { period_plan(rng) } else { PlanPricing::on_demand() };
    let mut billing = ComputeBilling::default();
    match rng.gen_range(0..4) {
        0 => billing.per_instance_hour = scaled(rng, 1, 2000, 3),
        1 => billing.per_ram_gb_hour = scaled(rng, 1, 200, 3),
        2 => {
            billing.per_ram_gb_hour = scaled(rng, 1, 100, 3);
            billing.per_vcpu_hour = scaled(rng, 1, 100, 3);
        }
        _ => {
            billing.per_instance_hour = scaled(rng, 1, 500, 3);
            billing.per_vcpu_hour = scaled(rng, 0, 50, 3);
        }
    }
    ComputeOffering {
        name: name.to_string(),
        cores: rng.gen_range(1..=8),
        speed_ghz: scaled(rng, 10, 32, 1),
        ram_gb: *[dec("0.5"), dec("0.768"), dec("1.7"), dec("2"), dec("7.5"), dec("17.1"), dec("68.4")]
            .choose(rng)
            .unwrap(),
        local_storage_gb: *[dec("0"), dec("20"), dec("160"), dec("850"), dec("2040"), dec("2048")].choose(rng).unwrap(),
        billing,
        plan,
    }
}

fn storage_offering(rng: &mut TestRng, name: &str) -> StorageOffering {
    let plan = if rng.gen_bool(0.1) { period_plan(rng) } else { PlanPricing::on_demand() };
    let min_gb = if rng.gen_bool(0.2) { scaled(rng, 1, 20, 0) } else { Decimal::ZERO };
    let max_gb = if rng.gen_bool(0.3) { Some(min_gb + scaled(rng, 10, 300, 0)) } else { None };
    let mut ops: Vec<Operation> = Operation::NAMED.to_vec();
    ops.push(Operation::Any);
    ops.shuffle(rng);
    let mut requests = Vec::new();
    let mut rest = &ops[..rng.gen_range(0..=ops.len())];
    while !rest.is_empty() {
        let take = rng.gen_range(1..=rest.len().min(3));
        let charged = *[Charge::Charged, Charge::Charged, Charge::Free, Charge::Unspecified].choose(rng).unwrap();
        requests.push(RequestPricing {
            ops: rest[..take].iter().copied().collect(),
            rate_per_10k: if charged == Charge::Charged { scaled(rng, 0, 200, 3) } else { Decimal::ZERO },
            charged,
        });
        rest = &rest[take..];
    }
    StorageOffering {
        name: name.to_string(),
        min_gb,
        max_gb,
        gb_month_tiers: schedule(rng, 300, false),
        requests,
        plan_type: if rng.gen_bool(0.2) { StoragePlanType::ReducedRedundancy } else { StoragePlanType::PayAsYouGo },
        plan,
    }
}

fn transfer_offering(rng: &mut TestRng, name: &str) -> TransferOffering {
    TransferOffering { name: name.to_string(), in_tiers: schedule(rng, 100, true), out_tiers: schedule(rng, 100, true) }
}

fn dec(text: &str) -> Decimal {
    crate::d(text)
}

/// Mostly 1 to 4, sometimes none.
fn offering_count(rng: &mut TestRng) -> usize {
    if rng.gen_bool(0.1) {
        0
    } else {
        rng.gen_range(1..=4)
    }
}

/// Random valid catalog: at most 5 providers, 3 regions per provider and 4
/// offerings per service type.
pub fn catalog(rng: &mut TestRng) -> Catalog {
    let provider_count = if rng.gen_bool(0.05) { 0 } else { rng.gen_range(1..=5) };
    let providers = (0..provider_count)
        .map(|p| {
            let (nc, ns, nt) = (offering_count(rng), offering_count(rng), offering_count(rng));
            let mut regions: Vec<Region> = Vec::new();
            for r in 0..rng.gen_range(1..=3) {
                let location =
                    if r == 0 && rng.gen_bool(0.2) { Location::Any } else { *Location::ALL.choose(rng).unwrap() };
                let mut region = Region::new(format!("R{r}"), location);
                // Later regions either copy the first region's prices or draw their own.
                match regions.first() {
                    Some(first) if rng.gen_bool(0.4) => {
                        region.compute = first.compute.clone();
                        region.storage = first.storage.clone();
                        region.transfer = first.transfer.clone();
                    }
                    _ => {
                        region.compute = (0..nc).map(|i| compute_offering(rng, &format!("c{i}"))).collect();
                        region.storage = (0..ns).map(|i| storage_offering(rng, &format!("s{i}"))).collect();
                        region.transfer = (0..nt).map(|i| transfer_offering(rng, &format!("t{i}"))).collect();
                    }
                }
                regions.push(region);
            }
            Provider { name: format!("P{p}"), regions }
        })
        .collect();
    Catalog { base_currency: BASE_CURRENCY.to_string(), version: "gen".to_string(), providers }
}

fn requirement(rng: &mut TestRng) -> ComputeRequirement {
    let ram_low = *[dec("0"), dec("0.5"), dec("1"), dec("2")].choose(rng).unwrap();
    let ram_high = *[dec("2"), dec("8"), dec("20"), dec("69"), Decimal::MAX].choose(rng).unwrap();
    let local_low = *[dec("0"), dec("20")].choose(rng).unwrap();
    let local_high = *[dec("500"), dec("2040"), Decimal::MAX].choose(rng).unwrap();
    let usage = if rng.gen_bool(0.7) {
        ComputeUsage::Hours(*[dec("1"), dec("24"), dec("100"), dec("300.5"), dec("744")].choose(rng).unwrap())
    } else {
        ComputeUsage::Months(*[dec("0.5"), dec("1"), dec("2")].choose(rng).unwrap())
    };
    let mut req = ComputeRequirement::new(
        Range::new(ram_low, ram_high),
        Range::new(local_low, local_high),
        usage,
        rng.gen_range(1..=3),
    );
    if rng.gen_bool(0.2) {
        req.extra_criteria.push(Criterion::min(Parameter::Cores, Decimal::from(rng.gen_range(1..=4))));
    }
    req
}

/// Random valid request against `catalog` in USD.
pub fn request(rng: &mut TestRng, catalog: &Catalog) -> SelectionRequest {
    let mut usage = UsageEstimate::transfer(scaled(rng, 0, 400, 2), scaled(rng, 0, 400, 2));
    usage.duration_days = *[dec("31"), dec("15.5"), dec("30"), dec("7"), dec("62")].choose(rng).unwrap();
    let kind = rng.gen_range(0..3);
    let with_storage = kind != 1;
    let with_compute = kind != 0;
    if with_storage {
        usage.storage_gb = Some(scaled(rng, 0, 400, 1));
        for op in Operation::NAMED.iter().chain([&Operation::Any]) {
            if rng.gen_bool(0.4) {
                usage.request_counts.insert(*op, rng.gen_range(0..=20_000));
            }
        }
    }
    let requirements: Vec<ComputeRequirement> =
        if with_compute { (0..rng.gen_range(1..=2)).map(|_| requirement(rng)).collect() } else { Vec::new() };
    let mut request = match (with_storage, with_compute) {
        (true, false) => SelectionRequest::storage(usage),
        (false, true) => SelectionRequest::compute(requirements, usage),
        _ => SelectionRequest::combined(requirements, usage),
    };
    if rng.gen_bool(0.25) {
        let mut names: Vec<String> =
            catalog.providers.iter().filter(|_| rng.gen_bool(0.5)).map(|p| p.name.clone()).collect();
        if rng.gen_bool(0.2) {
            names.push("Nobody".to_string());
        }
        request.provider_filter = Some(names);
    }
    if rng.gen_bool(0.3) {
        request.criteria.push(Criterion::location(*Location::ALL.choose(rng).unwrap()));
    }
    if rng.gen_bool(0.15) {
        request.criteria.push(Criterion::provider(&format!("p{}", rng.gen_range(0..5))));
    }
    if rng.gen_bool(0.2) {
        let bound = *[Bound::Min, Bound::Max, Bound::Equal].choose(rng).unwrap();
        request.criteria.push(Criterion {
            parameter: Parameter::StorageGb,
            bound,
            value: CriterionValue::Number(scaled(rng, 0, 300, 0)),
        });
    }
    if rng.gen_bool(0.2) {
        request.criteria.push(Criterion::min(Parameter::SpeedGhz, scaled(rng, 10, 32, 1)));
    }
    if rng.gen_bool(0.2) {
        request.limit = Some(rng.gen_range(1..=10));
    }
    request
}

/// A request with no filtering at all: one unbounded compute slot, storage
/// and transfer quantities of zero.
pub fn unfiltered_combined_request() -> SelectionRequest {
    let mut usage = UsageEstimate::transfer(Decimal::ZERO, Decimal::ZERO);
    usage.storage_gb = Some(Decimal::ZERO);
    SelectionRequest::combined(vec![ComputeRequirement::any()], usage)
}
