//! Reference implementations used to cross-check the engine. They share no
//! code with it beyond the catalog and request data types.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use skyselect_core::catalog::*;
use skyselect_core::selection::{Bound, Criterion, CriterionValue, Parameter, SelectionRequest};
use skyselect_core::Decimal;

/// Half-up rounding to 8 places; costs are never negative.
fn round8(v: Decimal) -> Decimal {
    let scale = Decimal::new(100_000_000, 0);
    let shifted = v * scale;
    let whole = shifted.trunc();
    let rounded = if (shifted - whole).abs() >= Decimal::new(5, 1) { whole + Decimal::ONE } else { whole };
    rounded / scale
}

/// Brute-force graduated pricing: walks the quantity in 0.001 steps, counts
/// the steps landing in each band, and prices each band's count. `None` when
/// some step lies beyond a bounded last band. Quantities and band bounds must
/// be multiples of 0.001.
pub fn brute_force_tiered(schedule: &TierSchedule, quantity: Decimal) -> Option<Decimal> {
    if schedule.tiers.is_empty() {
        return Some(Decimal::ZERO);
    }
    let milli = |v: Decimal| -> u64 {
        let m = v * Decimal::from(1000);
        assert!(m.fract().is_zero(), "{v} is not a multiple of 0.001");
        u64::try_from(m.trunc().mantissa() / 10i128.pow(m.trunc().scale())).unwrap()
    };
    let steps = milli(quantity);
    let bounds: Vec<Option<u64>> = schedule.tiers.iter().map(|t| t.upto.map(milli)).collect();
    let mut counts = vec![0u64; bounds.len()];
    let mut band = 0usize;
    for k in 1..=steps {
        while let Some(Some(b)) = bounds.get(band) {
            if k <= *b {
                break;
            }
            band += 1;
        }
        if band >= bounds.len() {
            return None;
        }
        counts[band] += 1;
    }
    Some(counts.iter().zip(&schedule.tiers).map(|(&n, t)| Decimal::from(n) * t.rate / Decimal::from(1000)).sum())
}

fn banded(schedule: &TierSchedule, q: Decimal) -> Option<Decimal> {
    let mut total = Decimal::ZERO;
    let mut floor = Decimal::ZERO;
    let mut covered = schedule.tiers.is_empty();
    for t in &schedule.tiers {
        let ceiling = t.upto.unwrap_or(Decimal::MAX);
        if q > floor {
            total += (q.min(ceiling) - floor) * t.rate;
        }
        if q <= ceiling {
            covered = true;
            break;
        }
        floor = ceiling;
    }
    (covered || q.is_zero()).then_some(total)
}

fn prepaid(plan: &PlanPricing, units: Decimal, days: Decimal) -> Decimal {
    let len = Decimal::from(plan.period_length_days);
    let mut periods = Decimal::ZERO;
    while periods * len < days {
        periods += Decimal::ONE;
    }
    let extra = units - plan.included_units * periods;
    periods * plan.per_period_cost + if extra > Decimal::ZERO { extra * plan.overage_rate } else { Decimal::ZERO }
}

fn storage_charge(o: &StorageOffering, gb: Decimal, days: Decimal) -> Option<Decimal> {
    if gb < o.min_gb || o.max_gb.is_some_and(|m| gb > m) {
        return None;
    }
    if o.plan.plan_type == PlanType::Period {
        return Some(prepaid(&o.plan, gb, days));
    }
    Some(banded(&o.gb_month_tiers, gb)? * days / Decimal::from(31))
}

fn request_charge(o: &StorageOffering, counts: &BTreeMap<Operation, u64>) -> Decimal {
    let mut total = Decimal::ZERO;
    for (op, &n) in counts {
        let own = if *op == Operation::Any { None } else { o.requests.iter().find(|e| e.ops.contains(op)) };
        let entry = own.or_else(|| o.requests.iter().find(|e| e.ops.contains(&Operation::Any)));
        if let Some(e) = entry {
            if e.charged == Charge::Charged {
                total += Decimal::from(n) * e.rate_per_10k / Decimal::from(10_000);
            }
        }
    }
    total
}

fn compute_charge(o: &ComputeOffering, hours: Decimal, count: u32, days: Decimal) -> Decimal {
    let n = Decimal::from(count);
    if o.plan.plan_type == PlanType::Period {
        return n * prepaid(&o.plan, hours, days);
    }
    let b = &o.billing;
    n * hours * b.per_instance_hour
        + n * hours * b.per_ram_gb_hour * o.ram_gb
        + n * hours * b.per_vcpu_hour * Decimal::from(o.cores)
}

fn serves(region: &Region, wanted: Location) -> bool {
    region.name == ANY_REGION
        || wanted == Location::Any
        || region.location == Location::Any
        || region.location == wanted
        || region.extra_locations.contains(&wanted)
}

fn number_ok(bound: Bound, actual: Decimal, wanted: Decimal) -> bool {
    match bound {
        Bound::Min => wanted <= actual,
        Bound::Max => wanted >= actual,
        Bound::Equal => wanted == actual,
    }
}

fn placement_ok(c: &Criterion, provider: &Provider, region: &Region) -> bool {
    match (c.parameter, &c.value) {
        (Parameter::Location, CriterionValue::Text(t)) => Location::from_str(t).is_ok_and(|l| serves(region, l)),
        (Parameter::Provider, CriterionValue::Text(t)) => provider.name.to_lowercase() == t.to_lowercase(),
        _ => true,
    }
}

fn compute_ok(c: &Criterion, o: &ComputeOffering) -> bool {
    let CriterionValue::Number(v) = c.value else { return true };
    match c.parameter {
        Parameter::RamGb => number_ok(c.bound, o.ram_gb, v),
        Parameter::LocalStorageGb => number_ok(c.bound, o.local_storage_gb, v),
        Parameter::Cores => number_ok(c.bound, Decimal::from(o.cores), v),
        Parameter::SpeedGhz => number_ok(c.bound, o.speed_ghz, v),
        _ => true,
    }
}

fn storage_ok(c: &Criterion, o: &StorageOffering) -> bool {
    let (Parameter::StorageGb, CriterionValue::Number(v)) = (c.parameter, &c.value) else { return true };
    let v = *v;
    let under_max = o.max_gb.is_none_or(|m| v <= m);
    match c.bound {
        Bound::Min => under_max,
        Bound::Max => o.min_gb <= v,
        Bound::Equal => o.min_gb <= v && under_max,
    }
}

/// One costed bundle as computed by [`naive_select`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleRow {
    pub provider: String,
    pub region: String,
    pub storage: Option<String>,
    pub compute: Vec<String>,
    pub transfer: String,
    pub storage_cost: Decimal,
    pub requests_cost: Decimal,
    pub data_in_cost: Decimal,
    pub data_out_cost: Decimal,
    pub compute_costs: Vec<Decimal>,
    pub total: Decimal,
}

fn compute_choices<'a>(
    region: &'a Region,
    request: &SelectionRequest,
    slot: usize,
    picked: &mut Vec<&'a ComputeOffering>,
    out: &mut Vec<Vec<&'a ComputeOffering>>,
) {
    if slot == request.compute_requirements.len() {
        out.push(picked.clone());
        return;
    }
    let req = &request.compute_requirements[slot];
    for o in &region.compute {
        let in_ranges = req.ram_range.low <= o.ram_gb
            && o.ram_gb <= req.ram_range.high
            && req.local_storage_range.low <= o.local_storage_gb
            && o.local_storage_gb <= req.local_storage_range.high;
        let criteria = req.extra_criteria.iter().chain(&request.criteria).all(|c| compute_ok(c, o));
        if in_ranges && criteria {
            picked.push(o);
            compute_choices(region, request, slot + 1, picked, out);
            picked.pop();
        }
    }
}

/// Enumerates every same-provider same-region bundle with nested loops,
/// drops bundles failing a criterion or a capacity limit, costs the rest,
/// multiplies every component by `rate`, and sorts by total then names.
pub fn naive_select(catalog: &Catalog, request: &SelectionRequest, rate: Decimal) -> Vec<OracleRow> {
    let usage = &request.usage;
    let gb = usage.storage_gb.unwrap_or_default();
    let days = usage.duration_days;
    let mut rows = Vec::new();
    for provider in &catalog.providers {
        if let Some(names) = &request.provider_filter {
            if !names.contains(&provider.name) {
                continue;
            }
        }
        for region in &provider.regions {
            let extra = request.compute_requirements.iter().flat_map(|r| &r.extra_criteria);
            let placement_criteria: Vec<&Criterion> = if request.include_compute {
                request.criteria.iter().chain(extra).collect()
            } else {
                request.criteria.iter().collect()
            };
            if !placement_criteria.iter().all(|c| placement_ok(c, provider, region)) {
                continue;
            }
            let storages: Vec<Option<&StorageOffering>> =
                if request.include_storage { region.storage.iter().map(Some).collect() } else { vec![None] };
            let mut computes = Vec::new();
            if request.include_compute {
                compute_choices(region, request, 0, &mut Vec::new(), &mut computes);
            } else {
                computes.push(Vec::new());
            }
            for s in &storages {
                if let Some(s) = s {
                    if !placement_criteria.iter().all(|c| storage_ok(c, s)) {
                        continue;
                    }
                }
                for t in &region.transfer {
                    for picked in &computes {
                        let (sc, rc) = match s {
                            Some(s) => match storage_charge(s, gb, days) {
                                Some(c) => (c, request_charge(s, &usage.request_counts)),
                                None => continue,
                            },
                            None => (Decimal::ZERO, Decimal::ZERO),
                        };
                        let Some(tin) = banded(&t.in_tiers, usage.transfer_in_gb.unwrap_or_default()) else { continue };
                        let Some(tout) = banded(&t.out_tiers, usage.transfer_out_gb.unwrap_or_default()) else {
                            continue;
                        };
                        let cc: Vec<Decimal> = picked
                            .iter()
                            .zip(&request.compute_requirements)
                            .map(|(o, r)| round8(compute_charge(o, r.hours(), r.instance_count, days)) * rate)
                            .collect();
                        let (sc, rc, tin, tout) =
                            (round8(sc) * rate, round8(rc) * rate, round8(tin) * rate, round8(tout) * rate);
                        rows.push(OracleRow {
                            provider: provider.name.clone(),
                            region: region.name.clone(),
                            storage: s.map(|s| s.name.clone()),
                            compute: picked.iter().map(|o| o.name.clone()).collect(),
                            transfer: t.name.clone(),
                            total: sc + rc + tin + tout + cc.iter().copied().sum::<Decimal>(),
                            storage_cost: sc,
                            requests_cost: rc,
                            data_in_cost: tin,
                            data_out_cost: tout,
                            compute_costs: cc,
                        });
                    }
                }
            }
        }
    }
    rows.sort_by(|a, b| {
        (a.total, &a.provider, &a.region, &a.storage, &a.compute, &a.transfer).cmp(&(
            b.total,
            &b.provider,
            &b.region,
            &b.storage,
            &b.compute,
            &b.transfer,
        ))
    });
    if let Some(limit) = request.limit {
        rows.truncate(limit);
    }
    rows
}

fn compute_tiers(o: &ComputeOffering) -> u64 {
    if o.plan.plan_type == PlanType::Period {
        return 2;
    }
    let b = &o.billing;
    let n = [b.per_instance_hour, b.per_ram_gb_hour, b.per_vcpu_hour].iter().filter(|r| !r.is_zero()).count();
    n.max(1) as u64
}

fn storage_tiers(o: &StorageOffering) -> u64 {
    if o.plan.plan_type == PlanType::Period {
        2
    } else {
        o.gb_month_tiers.tiers.len().max(1) as u64
    }
}

fn transfer_tiers(o: &TransferOffering) -> u64 {
    (o.in_tiers.tiers.len() + o.out_tiers.tiers.len()).max(1) as u64
}

fn tier_sum<T>(
    regions: &[Region],
    items: impl Fn(&Region) -> &[T],
    name: impl Fn(&T) -> &str,
    tiers: impl Fn(&T) -> u64,
) -> (u64, u64) {
    let mut best: BTreeMap<&str, u64> = BTreeMap::new();
    for r in regions {
        for o in items(r) {
            let slot = best.entry(name(o)).or_default();
            *slot = (*slot).max(tiers(o));
        }
    }
    (best.len() as u64, best.values().sum())
}

/// Direct evaluation of the two offer-count formulas: the simple count
/// `Σ cs·ss·ts` over providers, and the detailed count multiplying per
/// service type the summed tier counts, times the provider's regions.
pub fn offer_count_formulas(catalog: &Catalog) -> (u64, u64) {
    let mut simple = 0;
    let mut detailed = 0;
    for p in &catalog.providers {
        let (cs, ct) = tier_sum(&p.regions, |r| &r.compute, |o| &o.name, compute_tiers);
        let (ss, st) = tier_sum(&p.regions, |r| &r.storage, |o| &o.name, storage_tiers);
        let (ts, tt) = tier_sum(&p.regions, |r| &r.transfer, |o| &o.name, transfer_tiers);
        simple += cs * ss * ts;
        detailed += ct * st * tt * p.regions.len() as u64;
    }
    (simple, detailed)
}

/// `Σ r · cs · ss · ts` over providers, counting services by distinct name.
pub fn region_aware_simple_count(catalog: &Catalog) -> u64 {
    catalog
        .providers
        .iter()
        .map(|p| {
            let names = |f: &dyn Fn(&Region) -> Vec<String>| -> u64 {
                p.regions.iter().flat_map(f).collect::<BTreeSet<_>>().len() as u64
            };
            let cs = names(&|r| r.compute.iter().map(|o| o.name.clone()).collect());
            let ss = names(&|r| r.storage.iter().map(|o| o.name.clone()).collect());
            let ts = names(&|r| r.transfer.iter().map(|o| o.name.clone()).collect());
            p.regions.len() as u64 * cs * ss * ts
        })
        .sum()
}
