use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use super::normalize::{normalize_memory, MemoryUnit};

/// Every price stored in a catalog is expressed in this currency.
pub const BASE_CURRENCY: &str = "USD";

/// Region name used for providers that price every region identically.
pub const ANY_REGION: &str = "Any";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Catalog {
    pub base_currency: String,
    pub version: String,
    pub providers: Vec<Provider>,
}

impl Catalog {
    pub fn empty() -> Self {
        Catalog { base_currency: BASE_CURRENCY.to_string(), version: "empty".to_string(), providers: Vec::new() }
    }

    pub fn provider(&self, name: &str) -> Option<&Provider> {
        self.providers.iter().find(|p| p.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provider {
    pub name: String,
    pub regions: Vec<Region>,
}

impl Provider {
    pub fn region(&self, name: &str) -> Option<&Region> {
        self.regions.iter().find(|r| r.name == name)
    }
}

/// Physical location of a region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Location {
    #[serde(rename = "North America")]
    NorthAmerica,
    #[serde(rename = "South America")]
    SouthAmerica,
    Africa,
    Europe,
    Asia,
    Australia,
    Any,
}

impl Location {
    pub const ALL: [Location; 7] = [
        Location::NorthAmerica,
        Location::SouthAmerica,
        Location::Africa,
        Location::Europe,
        Location::Asia,
        Location::Australia,
        Location::Any,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Location::NorthAmerica => "North America",
            Location::SouthAmerica => "South America",
            Location::Africa => "Africa",
            Location::Europe => "Europe",
            Location::Asia => "Asia",
            Location::Australia => "Australia",
            Location::Any => "Any",
        }
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Location {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect();
        Location::ALL
            .into_iter()
            .find(|l| l.as_str().replace(' ', "").eq_ignore_ascii_case(&key))
            .ok_or_else(|| format!("unknown location `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Region {
    pub name: String,
    pub location: Location,
    /// Further locations covered by a region produced by merging equally priced regions.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra_locations: Vec<Location>,
    #[serde(default)]
    pub compute: Vec<ComputeOffering>,
    #[serde(default)]
    pub storage: Vec<StorageOffering>,
    #[serde(default)]
    pub transfer: Vec<TransferOffering>,
}

impl Region {
    pub fn new(name: impl Into<String>, location: Location) -> Self {
        Region {
            name: name.into(),
            location,
            extra_locations: Vec::new(),
            compute: Vec::new(),
            storage: Vec::new(),
            transfer: Vec::new(),
        }
    }

    /// `Any` regions match every location filter.
    pub fn serves(&self, location: Location) -> bool {
        self.name == ANY_REGION
            || self.location == Location::Any
            || location == Location::Any
            || self.location == location
            || self.extra_locations.contains(&location)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ComputeOfferingRepr")]
pub struct ComputeOffering {
    pub name: String,
    pub cores: u32,
    #[serde(with = "rust_decimal::serde::arbitrary_precision")]
    pub speed_ghz: Decimal,
    #[serde(with = "rust_decimal::serde::arbitrary_precision")]
    pub ram_gb: Decimal,
    #[serde(with = "rust_decimal::serde::arbitrary_precision")]
    pub local_storage_gb: Decimal,
    pub billing: ComputeBilling,
    #[serde(default, skip_serializing_if = "PlanPricing::is_on_demand")]
    pub plan: PlanPricing,
}

/// File form of a compute offering: memory may be given in GB or MB.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ComputeOfferingRepr {
    name: String,
    cores: u32,
    #[serde(with = "rust_decimal::serde::arbitrary_precision")]
    speed_ghz: Decimal,
    #[serde(default, with = "rust_decimal::serde::arbitrary_precision_option")]
    ram_gb: Option<Decimal>,
    #[serde(default, with = "rust_decimal::serde::arbitrary_precision_option")]
    ram_mb: Option<Decimal>,
    #[serde(default, with = "rust_decimal::serde::arbitrary_precision")]
    local_storage_gb: Decimal,
    billing: ComputeBilling,
    #[serde(default)]
    plan: PlanPricing,
}

impl TryFrom<ComputeOfferingRepr> for ComputeOffering {
    type Error = String;

    fn try_from(r: ComputeOfferingRepr) -> Result<Self, Self::Error> {
        let ram_gb = match (r.ram_gb, r.ram_mb) {
            (Some(gb), None) => normalize_memory(gb, MemoryUnit::Gb),
            (None, Some(mb)) => normalize_memory(mb, MemoryUnit::Mb),
            (Some(_), Some(_)) => {
                return Err(format!("compute offering `{}`: give ram_gb or ram_mb, not both", r.name))
            }
            (None, None) => return Err(format!("compute offering `{}`: missing ram_gb", r.name)),
        }
        .map_err(|e| format!("compute offering `{}`: {e}", r.name))?;
        Ok(ComputeOffering {
            name: r.name,
            cores: r.cores,
            speed_ghz: r.speed_ghz,
            ram_gb,
            local_storage_gb: r.local_storage_gb,
            billing: r.billing,
            plan: r.plan,
        })
    }
}

/// Hourly rate components; providers combine them freely.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComputeBilling {
    #[serde(default, with = "rust_decimal::serde::arbitrary_precision")]
    pub per_instance_hour: Decimal,
    #[serde(default, with = "rust_decimal::serde::arbitrary_precision")]
    pub per_ram_gb_hour: Decimal,
    #[serde(default, with = "rust_decimal::serde::arbitrary_precision")]
    pub per_vcpu_hour: Decimal,
}

impl ComputeBilling {
    pub fn per_instance(rate: Decimal) -> Self {
        ComputeBilling { per_instance_hour: rate, ..Default::default() }
    }

    pub fn per_ram_gb(rate: Decimal) -> Self {
        ComputeBilling { per_ram_gb_hour: rate, ..Default::default() }
    }

    pub fn components(&self) -> [Decimal; 3] {
        [self.per_instance_hour, self.per_ram_gb_hour, self.per_vcpu_hour]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StoragePlanType {
    #[default]
    PayAsYouGo,
    ReducedRedundancy,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StorageOffering {
    pub name: String,
    #[serde(default, with = "rust_decimal::serde::arbitrary_precision")]
    pub min_gb: Decimal,
    /// `None` means unbounded.
    #[serde(default, with = "rust_decimal::serde::arbitrary_precision_option")]
    pub max_gb: Option<Decimal>,
    pub gb_month_tiers: TierSchedule,
    #[serde(default)]
    pub requests: Vec<RequestPricing>,
    #[serde(default)]
    pub plan_type: StoragePlanType,
    #[serde(default, skip_serializing_if = "PlanPricing::is_on_demand")]
    pub plan: PlanPricing,
}

impl StorageOffering {
    pub fn admits(&self, gb: Decimal) -> bool {
        gb >= self.min_gb && self.max_gb.is_none_or(|max| gb <= max)
    }
}

/// Storage API operation categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Operation {
    Put,
    Copy,
    Post,
    List,
    Get,
    Delete,
    Search,
    Head,
    Any,
}

impl Operation {
    pub const NAMED: [Operation; 8] = [
        Operation::Put,
        Operation::Copy,
        Operation::Post,
        Operation::List,
        Operation::Get,
        Operation::Delete,
        Operation::Search,
        Operation::Head,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Operation::Put => "PUT",
            Operation::Copy => "COPY",
            Operation::Post => "POST",
            Operation::List => "LIST",
            Operation::Get => "GET",
            Operation::Delete => "DELETE",
            Operation::Search => "SEARCH",
            Operation::Head => "HEAD",
            Operation::Any => "ANY",
        }
    }

    /// Unknown operation names fall back to `Any`.
    pub fn parse_lenient(name: &str) -> Operation {
        name.parse().unwrap_or(Operation::Any)
    }
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Operation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Operation::NAMED
            .into_iter()
            .chain([Operation::Any])
            .find(|op| op.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown operation `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Charge {
    #[default]
    Charged,
    Free,
    Unspecified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RequestPricingRepr")]
pub struct RequestPricing {
    pub ops: BTreeSet<Operation>,
    #[serde(with = "rust_decimal::serde::arbitrary_precision")]
    pub rate_per_10k: Decimal,
    pub charged: Charge,
}

/// Providers quote request prices per 1, 1,000 or 10,000 requests; files may
/// carry `rate` with a `per` granularity which is normalized on load.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RequestPricingRepr {
    ops: BTreeSet<Operation>,
    #[serde(default, with = "rust_decimal::serde::arbitrary_precision_option")]
    rate_per_10k: Option<Decimal>,
    #[serde(default, with = "rust_decimal::serde::arbitrary_precision_option")]
    rate: Option<Decimal>,
    #[serde(default, with = "rust_decimal::serde::arbitrary_precision_option")]
    per: Option<Decimal>,
    #[serde(default)]
    charged: Charge,
}

impl TryFrom<RequestPricingRepr> for RequestPricing {
    type Error = String;

    fn try_from(r: RequestPricingRepr) -> Result<Self, Self::Error> {
        let rate_per_10k = match (r.rate_per_10k, r.rate, r.per) {
            (Some(v), None, None) => v,
            (None, Some(rate), Some(per)) if per > Decimal::ZERO => rate * Decimal::from(10_000) / per,
            (None, Some(_), _) => return Err("`rate` needs a positive `per` granularity".into()),
            (None, None, _) => Decimal::ZERO,
            _ => return Err("give either `rate_per_10k` or `rate`+`per`".into()),
        };
        Ok(RequestPricing { ops: r.ops, rate_per_10k: rate_per_10k.normalize(), charged: r.charged })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransferOffering {
    pub name: String,
    #[serde(default)]
    pub in_tiers: TierSchedule,
    #[serde(default)]
    pub out_tiers: TierSchedule,
}

/// One graduated band: `rate` applies to quantity up to `upto` (unbounded when `None`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tier {
    #[serde(with = "rust_decimal::serde::arbitrary_precision_option")]
    pub upto: Option<Decimal>,
    #[serde(with = "rust_decimal::serde::arbitrary_precision")]
    pub rate: Decimal,
}

/// Ordered graduated price tiers. An empty schedule is free.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TierSchedule {
    pub tiers: Vec<Tier>,
}

impl TierSchedule {
    pub fn free() -> Self {
        TierSchedule::default()
    }

    pub fn flat(rate: Decimal) -> Self {
        TierSchedule { tiers: vec![Tier { upto: None, rate }] }
    }

    pub fn new(tiers: Vec<Tier>) -> Self {
        TierSchedule { tiers }
    }

    pub fn len(&self) -> usize {
        self.tiers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiers.is_empty()
    }

    /// Checks ordering and rate invariants, returning a description of the first violation.
    pub fn check(&self) -> Result<(), String> {
        let mut previous = Decimal::ZERO;
        for (i, tier) in self.tiers.iter().enumerate() {
            if tier.rate.is_sign_negative() && !tier.rate.is_zero() {
                return Err(format!("tier {i}: negative rate {}", tier.rate));
            }
            match tier.upto {
                Some(upto) if upto <= previous => {
                    return Err(format!("tier {i}: bound {upto} is not above {previous}"));
                }
                Some(upto) => previous = upto,
                None if i + 1 != self.tiers.len() => {
                    return Err(format!("tier {i}: only the last tier may be unbounded"));
                }
                None => {}
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanType {
    #[default]
    OnDemand,
    Period,
}

/// Prepaid plan terms. On-demand offerings carry the default (all zero) value.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanPricing {
    #[serde(rename = "type", default)]
    pub plan_type: PlanType,
    #[serde(default, with = "rust_decimal::serde::arbitrary_precision")]
    pub per_period_cost: Decimal,
    #[serde(default)]
    pub period_length_days: u32,
    #[serde(default, with = "rust_decimal::serde::arbitrary_precision")]
    pub overage_rate: Decimal,
    #[serde(default, with = "rust_decimal::serde::arbitrary_precision")]
    pub included_units: Decimal,
}

impl PlanPricing {
    pub fn on_demand() -> Self {
        PlanPricing::default()
    }

    pub fn period(
        per_period_cost: Decimal,
        period_length_days: u32,
        included_units: Decimal,
        overage_rate: Decimal,
    ) -> Self {
        PlanPricing { plan_type: PlanType::Period, per_period_cost, period_length_days, overage_rate, included_units }
    }

    pub fn is_on_demand(&self) -> bool {
        self.plan_type == PlanType::OnDemand
    }
}

/// Service type discriminator used by listing and upsert.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ServiceType {
    Compute,
    Storage,
    Transfer,
}

impl FromStr for ServiceType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "compute" => Ok(ServiceType::Compute),
            "storage" => Ok(ServiceType::Storage),
            "transfer" | "network" => Ok(ServiceType::Transfer),
            _ => Err(format!("unknown service type `{s}`")),
        }
    }
}

/// An offering of any service type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "service_type", rename_all = "snake_case")]
pub enum Offering {
    Compute(ComputeOffering),
    Storage(StorageOffering),
    Transfer(TransferOffering),
}

impl Offering {
    pub fn name(&self) -> &str {
        match self {
            Offering::Compute(o) => &o.name,
            Offering::Storage(o) => &o.name,
            Offering::Transfer(o) => &o.name,
        }
    }

    pub fn service_type(&self) -> ServiceType {
        match self {
            Offering::Compute(_) => ServiceType::Compute,
            Offering::Storage(_) => ServiceType::Storage,
            Offering::Transfer(_) => ServiceType::Transfer,
        }
    }
}
