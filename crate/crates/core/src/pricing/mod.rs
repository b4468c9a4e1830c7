//! Pure cost calculus over catalog offerings.
//!
//! All functions here are pure; money is `rust_decimal::Decimal` in the
//! catalog base currency (USD) unless converted with [`convert_currency`].
//! A month is 31 days everywhere and storage is prorated linearly in days.

mod currency;

use std::collections::BTreeMap;

use rust_decimal::{Decimal, RoundingStrategy};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{
    Charge, ComputeBilling, ComputeOffering, Operation, PlanPricing, PlanType, StorageOffering, TierSchedule,
    TransferOffering,
};

pub use currency::{convert_currency, load_rates, CurrencyCode, RateTable, SUPPORTED_CURRENCIES};

pub const DAYS_PER_MONTH: Decimal = Decimal::from_parts(31, 0, 0, false, 0);
pub const HOURS_PER_MONTH: Decimal = Decimal::from_parts(744, 0, 0, false, 0);
/// Request prices are normalized to this many requests.
pub const REQUESTS_PER_RATE_UNIT: Decimal = Decimal::from_parts(10_000, 0, 0, false, 0);
/// Fractional digits kept for every cost component.
pub const INTERNAL_SCALE: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PricingError {
    #[error("quantity {quantity} exceeds the last bounded tier ({limit})")]
    CapacityExceeded { quantity: Decimal, limit: Decimal },
    #[error("{gb} GB is outside the offering capacity [{min}, {max}]")]
    OutOfCapacity { gb: Decimal, min: Decimal, max: String },
    #[error("negative quantity {0}")]
    NegativeQuantity(Decimal),
    #[error("unknown currency `{code}`; supported: {}", .supported.join(", "))]
    UnknownCurrency { code: String, supported: Vec<String> },
    #[error("invalid rates file: {0}")]
    InvalidRates(String),
}

/// Rounds a cost component to [`INTERNAL_SCALE`] digits.
pub fn round_internal(value: Decimal) -> Decimal {
    value.round_dp_with_strategy(INTERNAL_SCALE, RoundingStrategy::MidpointAwayFromZero)
}

/// Rounds for display, keeping exactly `digits` fractional digits.
pub fn round_display(value: Decimal, digits: u32) -> Decimal {
    let mut v = value.round_dp_with_strategy(digits, RoundingStrategy::MidpointAwayFromZero);
    v.rescale(digits);
    v
}

/// Graduated tier pricing: each band's rate applies only to the part of the
/// quantity falling inside that band.
pub fn tiered_cost(schedule: &TierSchedule, quantity: Decimal) -> Result<Decimal, PricingError> {
    if quantity < Decimal::ZERO {
        return Err(PricingError::NegativeQuantity(quantity));
    }
    let mut cost = Decimal::ZERO;
    let mut lower = Decimal::ZERO;
    for tier in &schedule.tiers {
        let upper = tier.upto.map_or(quantity, |upto| upto.min(quantity));
        if upper > lower {
            cost += (upper - lower) * tier.rate;
        }
        match tier.upto {
            Some(upto) if upto < quantity => lower = upto,
            _ => return Ok(cost),
        }
    }
    if schedule.tiers.is_empty() || quantity.is_zero() {
        return Ok(cost);
    }
    Err(PricingError::CapacityExceeded { quantity, limit: lower })
}

/// `count · hours · (instance rate + RAM-hour rate · GB + vCPU rate · cores)`.
pub fn compute_cost(billing: &ComputeBilling, ram_gb: Decimal, cores: u32, hours: Decimal, count: u32) -> Decimal {
    let hourly =
        billing.per_instance_hour + billing.per_ram_gb_hour * ram_gb + billing.per_vcpu_hour * Decimal::from(cores);
    Decimal::from(count) * hours * hourly
}

/// Cost of one compute offering for `count` instances over `hours`, routing
/// prepaid offerings through [`plan_cost`] with instance-hours as units.
pub fn offering_compute_cost(
    offering: &ComputeOffering,
    hours: Decimal,
    count: u32,
    duration_days: Decimal,
) -> Decimal {
    match offering.plan.plan_type {
        PlanType::OnDemand => compute_cost(&offering.billing, offering.ram_gb, offering.cores, hours, count),
        PlanType::Period => Decimal::from(count) * plan_cost(&offering.plan, hours, duration_days),
    }
}

fn check_capacity(offering: &StorageOffering, gb: Decimal) -> Result<(), PricingError> {
    if offering.admits(gb) {
        Ok(())
    } else {
        Err(PricingError::OutOfCapacity {
            gb,
            min: offering.min_gb,
            max: offering.max_gb.map_or_else(|| "unbounded".to_string(), |m| m.to_string()),
        })
    }
}

/// GB-month storage charge prorated linearly over a 31-day month.
pub fn storage_cost(offering: &StorageOffering, gb: Decimal, duration_days: Decimal) -> Result<Decimal, PricingError> {
    check_capacity(offering, gb)?;
    let monthly = tiered_cost(&offering.gb_month_tiers, gb)?;
    Ok(monthly * duration_days / DAYS_PER_MONTH)
}

/// Storage charge honoring the offering's plan: prepaid plans bill whole
/// periods plus overage per GB instead of the GB-month tiers.
pub fn offering_storage_cost(
    offering: &StorageOffering,
    gb: Decimal,
    duration_days: Decimal,
) -> Result<Decimal, PricingError> {
    match offering.plan.plan_type {
        PlanType::OnDemand => storage_cost(offering, gb, duration_days),
        PlanType::Period => {
            check_capacity(offering, gb)?;
            Ok(plan_cost(&offering.plan, gb, duration_days))
        }
    }
}

/// Per-request charges. Each operation is priced by the entry naming it,
/// else by the `ANY` entry, else free. Free and unspecified entries cost 0.
pub fn requests_cost(offering: &StorageOffering, counts: &BTreeMap<Operation, u64>) -> Decimal {
    counts
        .iter()
        .filter(|(_, &n)| n > 0)
        .map(|(op, &n)| {
            let entry = offering
                .requests
                .iter()
                .find(|e| *op != Operation::Any && e.ops.contains(op))
                .or_else(|| offering.requests.iter().find(|e| e.ops.contains(&Operation::Any)));
            match entry {
                Some(e) if e.charged == Charge::Charged => Decimal::from(n) * e.rate_per_10k / REQUESTS_PER_RATE_UNIT,
                _ => Decimal::ZERO,
            }
        })
        .sum()
}

/// Inbound and outbound transfer charges, kept separate for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransferCharges {
    pub inbound: Decimal,
    pub outbound: Decimal,
}

pub fn transfer_charges(
    offering: &TransferOffering,
    in_gb: Decimal,
    out_gb: Decimal,
) -> Result<TransferCharges, PricingError> {
    Ok(TransferCharges {
        inbound: tiered_cost(&offering.in_tiers, in_gb)?,
        outbound: tiered_cost(&offering.out_tiers, out_gb)?,
    })
}

pub fn transfer_cost(offering: &TransferOffering, in_gb: Decimal, out_gb: Decimal) -> Result<Decimal, PricingError> {
    let c = transfer_charges(offering, in_gb, out_gb)?;
    Ok(c.inbound + c.outbound)
}

/// Prepaid plan cost: whole periods (partial periods billed in full) plus
/// overage on units beyond the per-period allowance.
pub fn plan_cost(plan: &PlanPricing, used_units: Decimal, duration_days: Decimal) -> Decimal {
    if plan.period_length_days == 0 {
        return Decimal::ZERO;
    }
    let periods = (duration_days / Decimal::from(plan.period_length_days)).ceil().max(Decimal::ZERO);
    let overage = (used_units - plan.included_units * periods).max(Decimal::ZERO);
    periods * plan.per_period_cost + overage * plan.overage_rate
}

/// Estimated usage over the selection horizon.
///
/// Quantities are optional so requests can be validated for missing inputs;
/// transfer quantities are mandatory for every selection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UsageEstimate {
    pub storage_gb: Option<Decimal>,
    pub duration_days: Decimal,
    #[serde(default)]
    pub request_counts: BTreeMap<Operation, u64>,
    pub transfer_in_gb: Option<Decimal>,
    pub transfer_out_gb: Option<Decimal>,
}

impl Default for UsageEstimate {
    fn default() -> Self {
        UsageEstimate {
            storage_gb: None,
            duration_days: DAYS_PER_MONTH,
            request_counts: BTreeMap::new(),
            transfer_in_gb: None,
            transfer_out_gb: None,
        }
    }
}

impl UsageEstimate {
    pub fn transfer(in_gb: Decimal, out_gb: Decimal) -> Self {
        UsageEstimate { transfer_in_gb: Some(in_gb), transfer_out_gb: Some(out_gb), ..Default::default() }
    }

    /// Adds request counts, mapping unknown operation names to `ANY`.
    pub fn add_requests(&mut self, name: &str, count: u64) {
        *self.request_counts.entry(Operation::parse_lenient(name)).or_default() += count;
    }
}

/// Per-component costs of one bundle, all in `currency`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub currency: CurrencyCode,
    pub storage_cost: Decimal,
    pub requests_cost: Decimal,
    pub data_in_cost: Decimal,
    pub data_out_cost: Decimal,
    pub data_transfer_cost: Decimal,
    /// One entry per compute requirement, in request order.
    pub compute_costs: Vec<Decimal>,
    pub compute_total_cost: Decimal,
    pub total: Decimal,
}

impl CostBreakdown {
    /// Builds a USD breakdown, rounding each leaf component to the internal
    /// scale so that sums and later currency scaling stay exact.
    pub fn from_components(
        storage: Decimal,
        requests: Decimal,
        transfer: TransferCharges,
        compute: Vec<Decimal>,
    ) -> Self {
        let storage_cost = round_internal(storage);
        let requests_cost = round_internal(requests);
        let data_in_cost = round_internal(transfer.inbound);
        let data_out_cost = round_internal(transfer.outbound);
        let compute_costs: Vec<Decimal> = compute.into_iter().map(round_internal).collect();
        Self::assemble(CurrencyCode::usd(), storage_cost, requests_cost, data_in_cost, data_out_cost, compute_costs)
    }

    fn assemble(
        currency: CurrencyCode,
        storage_cost: Decimal,
        requests_cost: Decimal,
        data_in_cost: Decimal,
        data_out_cost: Decimal,
        compute_costs: Vec<Decimal>,
    ) -> Self {
        let data_transfer_cost = data_in_cost + data_out_cost;
        let compute_total_cost: Decimal = compute_costs.iter().copied().sum();
        CostBreakdown {
            currency,
            total: storage_cost + requests_cost + data_transfer_cost + compute_total_cost,
            storage_cost,
            requests_cost,
            data_in_cost,
            data_out_cost,
            data_transfer_cost,
            compute_costs,
            compute_total_cost,
        }
    }

    /// Converts every component; totals are recomputed from converted parts,
    /// which equals converting the total since conversion is a multiplication.
    pub fn convert(&self, target: &CurrencyCode, rates: &RateTable) -> Result<Self, PricingError> {
        Ok(self.scaled(target, rates.rate(target)?))
    }

    /// Multiplies every component by `rate`, relabelling the currency.
    pub fn scaled(&self, currency: &CurrencyCode, rate: Decimal) -> Self {
        Self::assemble(
            currency.clone(),
            self.storage_cost * rate,
            self.requests_cost * rate,
            self.data_in_cost * rate,
            self.data_out_cost * rate,
            self.compute_costs.iter().map(|c| c * rate).collect(),
        )
    }

    pub fn is_consistent(&self) -> bool {
        self.data_transfer_cost == self.data_in_cost + self.data_out_cost
            && self.compute_total_cost == self.compute_costs.iter().copied().sum::<Decimal>()
            && self.total == self.storage_cost + self.requests_cost + self.data_transfer_cost + self.compute_total_cost
    }
}
