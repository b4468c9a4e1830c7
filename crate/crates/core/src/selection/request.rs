use std::fmt;
use std::str::FromStr;

use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::Location;
use crate::pricing::{CurrencyCode, UsageEstimate, HOURS_PER_MONTH, SUPPORTED_CURRENCIES};

/// Configuration parameter a criterion constrains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Parameter {
    RamGb,
    LocalStorageGb,
    Cores,
    SpeedGhz,
    StorageGb,
    Location,
    Provider,
}

impl Parameter {
    pub fn is_numeric(self) -> bool {
        !matches!(self, Parameter::Location | Parameter::Provider)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    Min,
    Max,
    Equal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CriterionValue {
    Number(Decimal),
    Text(String),
}

/// A minimum, maximum or equality bound on one configuration parameter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Criterion {
    pub parameter: Parameter,
    pub bound: Bound,
    pub value: CriterionValue,
}

impl Criterion {
    pub fn min(parameter: Parameter, value: Decimal) -> Self {
        Criterion { parameter, bound: Bound::Min, value: CriterionValue::Number(value) }
    }

    pub fn max(parameter: Parameter, value: Decimal) -> Self {
        Criterion { parameter, bound: Bound::Max, value: CriterionValue::Number(value) }
    }

    pub fn location(location: Location) -> Self {
        Criterion {
            parameter: Parameter::Location,
            bound: Bound::Equal,
            value: CriterionValue::Text(location.as_str().to_string()),
        }
    }

    pub fn provider(name: &str) -> Self {
        Criterion { parameter: Parameter::Provider, bound: Bound::Equal, value: CriterionValue::Text(name.to_string()) }
    }

    pub(crate) fn problem(&self) -> Option<String> {
        match (&self.value, self.parameter.is_numeric()) {
            (CriterionValue::Number(_), true) => None,
            (CriterionValue::Text(_), true) => Some(format!("{:?} needs a numeric value", self.parameter)),
            (CriterionValue::Number(_), false) => Some(format!("{:?} needs a text value", self.parameter)),
            (CriterionValue::Text(t), false) => {
                if self.bound != Bound::Equal {
                    Some(format!("{:?} supports only the equal bound", self.parameter))
                } else if self.parameter == Parameter::Location {
                    Location::from_str(t).err()
                } else {
                    None
                }
            }
        }
    }
}

/// Inclusive numeric range; `high` may be `Decimal::MAX` for "unbounded".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Range {
    pub low: Decimal,
    pub high: Decimal,
}

impl Range {
    pub fn new(low: Decimal, high: Decimal) -> Self {
        Range { low, high }
    }

    pub fn unbounded() -> Self {
        Range { low: Decimal::ZERO, high: Decimal::MAX }
    }

    pub fn contains(&self, x: Decimal) -> bool {
        self.low <= x && x <= self.high
    }
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.low, self.high)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComputeUsage {
    Hours(Decimal),
    /// Converted at 744 hours per month.
    Months(Decimal),
}

impl ComputeUsage {
    pub fn hours(self) -> Decimal {
        match self {
            ComputeUsage::Hours(h) => h,
            ComputeUsage::Months(m) => m * HOURS_PER_MONTH,
        }
    }
}

/// One compute slot of a bundle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComputeRequirement {
    pub ram_range: Range,
    pub local_storage_range: Range,
    pub usage: ComputeUsage,
    pub instance_count: u32,
    #[serde(default)]
    pub extra_criteria: Vec<Criterion>,
}

impl ComputeRequirement {
    pub fn new(ram_range: Range, local_storage_range: Range, usage: ComputeUsage, instance_count: u32) -> Self {
        ComputeRequirement { ram_range, local_storage_range, usage, instance_count, extra_criteria: Vec::new() }
    }

    pub fn any() -> Self {
        Self::new(Range::unbounded(), Range::unbounded(), ComputeUsage::Hours(HOURS_PER_MONTH), 1)
    }

    pub fn hours(&self) -> Decimal {
        self.usage.hours()
    }
}

/// Hours and instance count of one compute requirement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComputeDemand {
    pub hours: Decimal,
    pub instance_count: u32,
}

/// A complete service selection query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectionRequest {
    pub include_compute: bool,
    pub include_storage: bool,
    #[serde(default)]
    pub compute_requirements: Vec<ComputeRequirement>,
    pub usage: UsageEstimate,
    #[serde(default)]
    pub provider_filter: Option<Vec<String>>,
    /// Bundle-wide criteria (location, provider, storage capacity, or
    /// compute parameters applied to every compute slot).
    #[serde(default)]
    pub criteria: Vec<Criterion>,
    pub currency: CurrencyCode,
    #[serde(default)]
    pub limit: Option<usize>,
}

impl SelectionRequest {
    pub fn storage(usage: UsageEstimate) -> Self {
        SelectionRequest {
            include_compute: false,
            include_storage: true,
            compute_requirements: Vec::new(),
            usage,
            provider_filter: None,
            criteria: Vec::new(),
            currency: CurrencyCode::usd(),
            limit: None,
        }
    }

    pub fn compute(requirements: Vec<ComputeRequirement>, usage: UsageEstimate) -> Self {
        SelectionRequest {
            include_compute: true,
            include_storage: false,
            compute_requirements: requirements,
            ..Self::storage(usage)
        }
    }

    pub fn combined(requirements: Vec<ComputeRequirement>, usage: UsageEstimate) -> Self {
        SelectionRequest { include_storage: true, ..Self::compute(requirements, usage) }
    }

    pub fn with_currency(mut self, code: &str) -> Self {
        self.currency = CurrencyCode::new(code);
        self
    }

    pub fn compute_demands(&self) -> Vec<ComputeDemand> {
        self.compute_requirements
            .iter()
            .map(|r| ComputeDemand { hours: r.hours(), instance_count: r.instance_count })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValidationError {
    #[error("select at least one of compute or storage")]
    NoServiceSelected,
    #[error("storage required")]
    StorageRequired,
    #[error("{field} required: data transfer parameters must always be set")]
    MissingTransfer { field: &'static str },
    #[error("{field} must be non-negative, found {value}")]
    Negative { field: String, value: Decimal },
    #[error("duration must be positive, found {value}")]
    NonPositiveDuration { value: Decimal },
    #[error("compute selection needs at least one requirement")]
    NoComputeRequirement,
    #[error("{field} has {found} value(s) but ram_range has {expected}; they should match with each other")]
    LengthMismatch { field: String, expected: usize, found: usize },
    #[error("{field}[{index}]: low {low} exceeds high {high}")]
    InvertedRange { field: String, index: usize, low: Decimal, high: Decimal },
    #[error("n[{index}]: instance count must be at least 1")]
    ZeroInstances { index: usize },
    #[error("give either hour or month values, not both")]
    HoursAndMonths,
    #[error("unknown currency `{code}`; supported: {}", .supported.join(", "))]
    UnknownCurrency { code: String, supported: Vec<String> },
    #[error("criterion {index}: {reason}")]
    InvalidCriterion { index: usize, reason: String },
    #[error("{field}: {reason}")]
    Malformed { field: String, reason: String },
}

impl ValidationError {
    /// Request parameter the error refers to, when there is one.
    pub fn field(&self) -> Option<&str> {
        match self {
            ValidationError::StorageRequired => Some("storage"),
            ValidationError::MissingTransfer { field } => Some(field),
            ValidationError::Negative { field, .. }
            | ValidationError::LengthMismatch { field, .. }
            | ValidationError::InvertedRange { field, .. }
            | ValidationError::Malformed { field, .. } => Some(field),
            ValidationError::NonPositiveDuration { .. } => Some("duration"),
            ValidationError::ZeroInstances { .. } => Some("n"),
            ValidationError::UnknownCurrency { .. } => Some("currency"),
            ValidationError::HoursAndMonths => Some("hour"),
            ValidationError::NoComputeRequirement => Some("ram_range"),
            _ => None,
        }
    }
}

fn check_non_negative(errors: &mut Vec<ValidationError>, field: &str, value: Decimal) {
    if value < Decimal::ZERO {
        errors.push(ValidationError::Negative { field: field.to_string(), value });
    }
}

fn check_range(errors: &mut Vec<ValidationError>, field: &str, index: usize, range: &Range) {
    if range.low > range.high {
        errors.push(ValidationError::InvertedRange {
            field: field.to_string(),
            index,
            low: range.low,
            high: range.high,
        });
    }
    check_non_negative(errors, field, range.low);
}

/// Basic validation of a selection request; an empty list means valid.
pub fn validate_request(request: &SelectionRequest) -> Vec<ValidationError> {
    let mut errors = Vec::new();
    let usage = &request.usage;
    if !request.include_compute && !request.include_storage {
        errors.push(ValidationError::NoServiceSelected);
    }
    if request.include_storage {
        match usage.storage_gb {
            None => errors.push(ValidationError::StorageRequired),
            Some(gb) => check_non_negative(&mut errors, "storage", gb),
        }
    }
    match usage.transfer_in_gb {
        None => errors.push(ValidationError::MissingTransfer { field: "data_upload_size" }),
        Some(v) => check_non_negative(&mut errors, "data_upload_size", v),
    }
    match usage.transfer_out_gb {
        None => errors.push(ValidationError::MissingTransfer { field: "data_download_size" }),
        Some(v) => check_non_negative(&mut errors, "data_download_size", v),
    }
    if usage.duration_days <= Decimal::ZERO {
        errors.push(ValidationError::NonPositiveDuration { value: usage.duration_days });
    }
    if request.include_compute {
        if request.compute_requirements.is_empty() {
            errors.push(ValidationError::NoComputeRequirement);
        }
        for (i, req) in request.compute_requirements.iter().enumerate() {
            check_range(&mut errors, "ram_range", i, &req.ram_range);
            check_range(&mut errors, "storage_range", i, &req.local_storage_range);
            match req.usage {
                ComputeUsage::Hours(h) => check_non_negative(&mut errors, "hour", h),
                ComputeUsage::Months(m) => check_non_negative(&mut errors, "month", m),
            }
            if req.instance_count == 0 {
                errors.push(ValidationError::ZeroInstances { index: i });
            }
            for (j, c) in req.extra_criteria.iter().enumerate() {
                if let Some(reason) = c.problem() {
                    errors.push(ValidationError::InvalidCriterion { index: j, reason });
                }
            }
        }
    }
    for (j, c) in request.criteria.iter().enumerate() {
        if let Some(reason) = c.problem() {
            errors.push(ValidationError::InvalidCriterion { index: j, reason });
        }
    }
    if !SUPPORTED_CURRENCIES.contains(&request.currency.as_str()) {
        errors.push(ValidationError::UnknownCurrency {
            code: request.currency.to_string(),
            supported: SUPPORTED_CURRENCIES.iter().map(|s| s.to_string()).collect(),
        });
    }
    errors
}

/// Builds compute requirements from parallel per-requirement value lists.
///
/// `ram_ranges` fixes the number of requirements; every other list that is
/// given must have the same length. Absent lists default to unbounded local
/// storage, 744 hours and one instance.
pub fn requirements_from_lists(
    ram_ranges: &[Range],
    storage_ranges: Option<&[Range]>,
    hours: Option<&[Decimal]>,
    months: Option<&[Decimal]>,
    counts: Option<&[u32]>,
) -> Result<Vec<ComputeRequirement>, Vec<ValidationError>> {
    let n = ram_ranges.len();
    let mut errors = Vec::new();
    let mut check_len = |field: &str, len: Option<usize>| {
        if let Some(found) = len {
            if found != n {
                errors.push(ValidationError::LengthMismatch { field: field.to_string(), expected: n, found });
            }
        }
    };
    check_len("storage_range", storage_ranges.map(<[_]>::len));
    check_len("hour", hours.map(<[_]>::len));
    check_len("month", months.map(<[_]>::len));
    check_len("n", counts.map(<[_]>::len));
    if hours.is_some() && months.is_some() {
        errors.push(ValidationError::HoursAndMonths);
    }
    if !errors.is_empty() {
        return Err(errors);
    }
    Ok((0..n)
        .map(|i| {
            let usage = match (hours, months) {
                (Some(h), _) => ComputeUsage::Hours(h[i]),
                (None, Some(m)) => ComputeUsage::Months(m[i]),
                (None, None) => ComputeUsage::Hours(HOURS_PER_MONTH),
            };
            ComputeRequirement::new(
                ram_ranges[i],
                storage_ranges.map_or_else(Range::unbounded, |s| s[i]),
                usage,
                counts.map_or(1, |c| c[i]),
            )
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn storage_request() -> SelectionRequest {
        let mut usage = UsageEstimate::transfer(dec!(50), dec!(10));
        usage.storage_gb = Some(dec!(50));
        usage.add_requests("copy", 1000);
        usage.add_requests("get", 5000);
        SelectionRequest::storage(usage).with_currency("AUD")
    }

    #[test]
    fn storage_query_is_valid() {
        assert_eq!(validate_request(&storage_request()), vec![]);
    }

    #[test]
    fn missing_storage() {
        let mut r = storage_request();
        r.usage.storage_gb = None;
        let errors = validate_request(&r);
        assert_eq!(errors, vec![ValidationError::StorageRequired]);
        assert_eq!(errors[0].to_string(), "storage required");
    }

    #[test]
    fn missing_transfer_and_negatives() {
        let mut r = storage_request();
        r.usage.transfer_in_gb = None;
        r.usage.transfer_out_gb = Some(dec!(-1));
        r.usage.duration_days = Decimal::ZERO;
        let errors = validate_request(&r);
        assert!(errors.contains(&ValidationError::MissingTransfer { field: "data_upload_size" }));
        assert!(errors
            .iter()
            .any(|e| matches!(e, ValidationError::Negative { field, .. } if field == "data_download_size")));
        assert!(errors.iter().any(|e| matches!(e, ValidationError::NonPositiveDuration { .. })));
    }

    #[test]
    fn length_mismatch() {
        let ram = [Range::new(dec!(0), dec!(69)), Range::new(dec!(1), dec!(4))];
        let errors = requirements_from_lists(&ram, None, Some(&[dec!(744)]), None, None).unwrap_err();
        assert_eq!(errors, vec![ValidationError::LengthMismatch { field: "hour".into(), expected: 2, found: 1 }]);
        assert!(errors[0].to_string().contains("match with each other"));
    }

    #[test]
    fn lists_default() {
        let reqs = requirements_from_lists(&[Range::new(dec!(0), dec!(69))], None, None, Some(&[dec!(2)]), Some(&[3]))
            .unwrap();
        assert_eq!(reqs[0].hours(), dec!(1488));
        assert_eq!(reqs[0].instance_count, 3);
        assert_eq!(reqs[0].local_storage_range, Range::unbounded());
    }

    #[test]
    fn inverted_range_and_zero_instances() {
        let mut req = ComputeRequirement::any();
        req.ram_range = Range::new(dec!(69), dec!(0));
        req.instance_count = 0;
        let mut r = SelectionRequest::compute(vec![req], UsageEstimate::transfer(dec!(1), dec!(1)));
        r.currency = CurrencyCode::new("XYZ");
        let errors = validate_request(&r);
        assert!(errors.iter().any(|e| matches!(e, ValidationError::InvertedRange { .. })));
        assert!(errors.contains(&ValidationError::ZeroInstances { index: 0 }));
        assert!(errors.iter().any(|e| matches!(e, ValidationError::UnknownCurrency { .. })));
    }

    #[test]
    fn criterion_shapes() {
        let mut r = storage_request();
        r.criteria = vec![
            Criterion { parameter: Parameter::Location, bound: Bound::Min, value: CriterionValue::Text("Asia".into()) },
            Criterion { parameter: Parameter::Cores, bound: Bound::Min, value: CriterionValue::Text("two".into()) },
            Criterion::location(Location::Europe),
        ];
        let errors = validate_request(&r);
        assert_eq!(errors.len(), 2, "{errors:?}");
    }
}
