use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use skyselect_core::catalog::{Location, Operation};
use skyselect_core::pricing::{CurrencyCode, UsageEstimate, DAYS_PER_MONTH};
use skyselect_core::selection::{
    requirements_from_lists, validate_request, ComputeRequirement, ComputeUsage, Criterion, CriterionValue, Parameter,
    Range, SelectionRequest, ValidationError,
};
use skyselect_core::Decimal;

/// Which services a cost query bundles with the mandatory transfer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Endpoint {
    Storage,
    Compute,
    Combined,
}

impl Endpoint {
    pub const ALL: [Endpoint; 3] = [Endpoint::Storage, Endpoint::Compute, Endpoint::Combined];

    pub fn as_str(self) -> &'static str {
        match self {
            Endpoint::Storage => "storage",
            Endpoint::Compute => "compute",
            Endpoint::Combined => "combined",
        }
    }

    pub fn path(self) -> &'static str {
        match self {
            Endpoint::Storage => "/api/cost/storage",
            Endpoint::Compute => "/api/cost/compute",
            Endpoint::Combined => "/api/cost/combined",
        }
    }

    pub fn includes_storage(self) -> bool {
        self != Endpoint::Compute
    }

    pub fn includes_compute(self) -> bool {
        self != Endpoint::Storage
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Endpoint {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Endpoint::ALL
            .into_iter()
            .find(|e| e.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown service kind `{s}`; expected storage, compute or combined"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MediaType {
    #[default]
    Json,
    Xml,
}

impl MediaType {
    pub fn as_str(self) -> &'static str {
        match self {
            MediaType::Json => "json",
            MediaType::Xml => "xml",
        }
    }

    pub fn content_type(self) -> &'static str {
        match self {
            MediaType::Json => "application/json",
            MediaType::Xml => "application/xml",
        }
    }
}

impl FromStr for MediaType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(MediaType::Json),
            "xml" => Ok(MediaType::Xml),
            _ => Err(format!("unsupported media type `{s}`; allowed values are json and xml")),
        }
    }
}

/// One rejected parameter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Problem {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub message: String,
}

impl Problem {
    fn at(field: &str, message: impl Into<String>) -> Self {
        Problem { field: Some(field.to_string()), message: message.into() }
    }
}

impl From<&ValidationError> for Problem {
    fn from(e: &ValidationError) -> Self {
        Problem { field: e.field().map(str::to_string), message: e.to_string() }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.field {
            Some(field) if !self.message.starts_with(field.as_str()) => write!(f, "{field}: {}", self.message),
            _ => f.write_str(&self.message),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}", .0.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("; "))]
pub struct QueryError(pub Vec<Problem>);

/// Parses `low,high;low,high` into ranges. Decimals are allowed; every
/// segment must hold exactly two numbers with `low <= high`.
pub fn parse_range_list(text: &str) -> Result<Vec<Range>, String> {
    if text.trim().is_empty() {
        return Err("empty range list".to_string());
    }
    text.split(';')
        .enumerate()
        .map(|(i, segment)| {
            let segment = segment.trim();
            if segment.is_empty() {
                return Err(format!("segment {} is empty", i + 1));
            }
            let bounds: Vec<&str> = segment.split(',').map(str::trim).collect();
            let [low, high] = bounds[..] else {
                return Err(format!("segment `{segment}` must be low,high"));
            };
            let low = number(low).map_err(|e| format!("segment `{segment}`: {e}"))?;
            let high = number(high).map_err(|e| format!("segment `{segment}`: {e}"))?;
            if low > high {
                return Err(format!("segment `{segment}`: low {low} exceeds high {high}"));
            }
            Ok(Range::new(low, high))
        })
        .collect()
}

fn number(text: &str) -> Result<Decimal, String> {
    let t = text.trim();
    if t.is_empty() {
        return Err("missing number".to_string());
    }
    Decimal::from_str(t).map_err(|_| format!("`{t}` is not a number"))
}

fn number_list(text: &str) -> Result<Vec<Decimal>, String> {
    text.split(',').map(number).collect()
}

fn count_list(text: &str) -> Result<Vec<u32>, String> {
    text.split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|_| format!("`{}` is not a whole number", t.trim())))
        .collect()
}

fn flag(text: &str) -> Result<bool, String> {
    match text.trim().to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" | "" => Ok(false),
        other => Err(format!("`{other}` is not a boolean")),
    }
}

/// Per-operation request-count parameters, in query order.
const OPERATION_PARAMS: [(&str, Operation); 8] = [
    ("copy", Operation::Copy),
    ("get", Operation::Get),
    ("put", Operation::Put),
    ("post", Operation::Post),
    ("list", Operation::List),
    ("delete", Operation::Delete),
    ("search", Operation::Search),
    ("head", Operation::Head),
];

/// A parsed cost query: the selection request plus presentation options.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiQuery {
    pub endpoint: Endpoint,
    pub media_type: MediaType,
    /// Raw decimals instead of display rounding.
    pub precise: bool,
    pub request: SelectionRequest,
}

#[derive(Default)]
struct Collector {
    problems: Vec<Problem>,
}

impl Collector {
    fn take<T>(&mut self, field: &str, parsed: Result<T, String>) -> Option<T> {
        parsed.map_err(|e| self.problems.push(Problem::at(field, e))).ok()
    }
}

impl ApiQuery {
    /// Parses a raw (percent-encoded) query string.
    pub fn parse(endpoint: Endpoint, raw: &str) -> Result<Self, QueryError> {
        let pairs: Vec<(String, String)> = form_urlencoded::parse(raw.as_bytes()).into_owned().collect();
        Self::from_pairs(endpoint, pairs)
    }

    /// Builds a query from decoded parameters. Unknown names are ignored; a
    /// repeated name keeps its last value. The result is fully validated.
    pub fn from_pairs<K: AsRef<str>, V: AsRef<str>>(
        endpoint: Endpoint,
        pairs: impl IntoIterator<Item = (K, V)>,
    ) -> Result<Self, QueryError> {
        let mut params: std::collections::HashMap<String, String> = std::collections::HashMap::new();
        for (k, v) in pairs {
            params.insert(k.as_ref().to_ascii_lowercase(), v.as_ref().to_string());
        }
        let get = |name: &str| params.get(name).map(String::as_str);
        let mut c = Collector::default();

        let media_type = get("media_type").and_then(|v| c.take("media_type", v.parse())).unwrap_or_default();
        let precise = get("precise").and_then(|v| c.take("precise", flag(v))).unwrap_or(false);

        let mut usage = UsageEstimate::default();
        if let Some(v) = get("duration") {
            usage.duration_days = c.take("duration", number(v)).unwrap_or(DAYS_PER_MONTH);
        }
        usage.transfer_in_gb = get("data_upload_size").and_then(|v| c.take("data_upload_size", number(v)));
        usage.transfer_out_gb = get("data_download_size").and_then(|v| c.take("data_download_size", number(v)));
        if endpoint.includes_storage() {
            usage.storage_gb = get("storage").and_then(|v| c.take("storage", number(v)));
            for (name, op) in OPERATION_PARAMS {
                if let Some(v) = get(name) {
                    let n = c.take(
                        name,
                        v.trim().parse::<u64>().map_err(|_| format!("`{}` is not a whole number", v.trim())),
                    );
                    if let Some(n) = n {
                        usage.request_counts.insert(op, n);
                    }
                }
            }
        }

        let mut requirements = Vec::new();
        if endpoint.includes_compute() {
            let ram = match get("ram_range") {
                Some(v) => c.take("ram_range", parse_range_list(v)),
                None => Some(vec![Range::unbounded()]),
            };
            let local = get("storage_range").and_then(|v| c.take("storage_range", parse_range_list(v)));
            let hours = get("hour").and_then(|v| c.take("hour", number_list(v)));
            let months = get("month").and_then(|v| c.take("month", number_list(v)));
            let counts = get("n").and_then(|v| c.take("n", count_list(v)));
            let local_given = get("storage_range").is_some();
            if let Some(ram) = ram {
                if local.is_some() || !local_given {
                    match requirements_from_lists(
                        &ram,
                        local.as_deref(),
                        hours.as_deref(),
                        months.as_deref(),
                        counts.as_deref(),
                    ) {
                        Ok(r) => requirements = r,
                        Err(errors) => c.problems.extend(errors.iter().map(Problem::from)),
                    }
                }
            }
        }

        let mut request = match endpoint {
            Endpoint::Storage => SelectionRequest::storage(usage),
            Endpoint::Compute => SelectionRequest::compute(requirements, usage),
            Endpoint::Combined => SelectionRequest::combined(requirements, usage),
        };
        if let Some(code) = get("currency") {
            request.currency = CurrencyCode::new(code.trim());
        }
        if let Some(v) = get("providers").or_else(|| get("provider")) {
            request.provider_filter =
                Some(v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect());
        }
        if let Some(v) = get("location") {
            if let Some(loc) = c.take("location", Location::from_str(v).map_err(|e| e.to_string())) {
                request.criteria.push(Criterion::location(loc));
            }
        }
        if let Some(v) = get("limit") {
            request.limit =
                c.take("limit", v.trim().parse::<usize>().map_err(|_| format!("`{v}` is not a whole number")));
        }

        if c.problems.is_empty() {
            c.problems.extend(validate_request(&request).iter().map(Problem::from));
        }
        if !c.problems.is_empty() {
            return Err(QueryError(c.problems));
        }
        Ok(ApiQuery { endpoint, media_type, precise, request })
    }

    /// Renders the query back into the parameter grammar; parsing the result
    /// yields an equal query.
    pub fn to_query_string(&self) -> String {
        let r = &self.request;
        let u = &r.usage;
        let mut out = form_urlencoded::Serializer::new(String::new());
        out.append_pair("media_type", self.media_type.as_str());
        out.append_pair("currency", r.currency.as_str());
        if self.precise {
            out.append_pair("precise", "true");
        }
        if let Some(gb) = u.storage_gb {
            out.append_pair("storage", &gb.to_string());
        }
        out.append_pair("duration", &u.duration_days.to_string());
        if let Some(v) = u.transfer_in_gb {
            out.append_pair("data_upload_size", &v.to_string());
        }
        if let Some(v) = u.transfer_out_gb {
            out.append_pair("data_download_size", &v.to_string());
        }
        for (name, op) in OPERATION_PARAMS {
            if let Some(n) = u.request_counts.get(&op) {
                out.append_pair(name, &n.to_string());
            }
        }
        if r.include_compute {
            let join = |f: &dyn Fn(&ComputeRequirement) -> String, sep: &str| {
                r.compute_requirements.iter().map(f).collect::<Vec<_>>().join(sep)
            };
            out.append_pair("ram_range", &join(&|q| q.ram_range.to_string(), ";"));
            out.append_pair("storage_range", &join(&|q| q.local_storage_range.to_string(), ";"));
            let in_months = r.compute_requirements.iter().all(|q| matches!(q.usage, ComputeUsage::Months(_)));
            if in_months {
                out.append_pair("month", &join(&|q| usage_value(q.usage).to_string(), ","));
            } else {
                out.append_pair("hour", &join(&|q| q.hours().to_string(), ","));
            }
            out.append_pair("n", &join(&|q| q.instance_count.to_string(), ","));
        }
        if let Some(names) = &r.provider_filter {
            out.append_pair("providers", &names.join(","));
        }
        for c in &r.criteria {
            if let (Parameter::Location, CriterionValue::Text(t)) = (c.parameter, &c.value) {
                out.append_pair("location", t);
            }
        }
        if let Some(limit) = r.limit {
            out.append_pair("limit", &limit.to_string());
        }
        out.finish()
    }
}

fn usage_value(usage: ComputeUsage) -> Decimal {
    match usage {
        ComputeUsage::Hours(v) | ComputeUsage::Months(v) => v,
    }
}
