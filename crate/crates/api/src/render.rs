use std::time::Duration;

use serde::{Deserialize, Serialize};

use skyselect_core::pricing::{round_display, CostBreakdown};
use skyselect_core::selection::Recommendation;
use skyselect_core::Decimal;

use crate::query::MediaType;

/// Digits kept in response bodies unless raw values are requested.
pub const DISPLAY_DIGITS: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub count: usize,
    pub duration_ms: Decimal,
    pub currency: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result_id: Option<String>,
}

/// One ranked bundle with its cost breakdown, in the response currency.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub rank: usize,
    pub provider_name: String,
    pub region_name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub storage_offering: Option<String>,
    #[serde(default)]
    pub compute_offerings: Vec<String>,
    pub transfer_offering: String,
    pub storage_cost: Decimal,
    pub requests_cost: Decimal,
    pub data_in_cost: Decimal,
    pub data_out_cost: Decimal,
    pub data_transfer_cost: Decimal,
    #[serde(default)]
    pub compute_costs: Vec<Decimal>,
    pub compute_total_cost: Decimal,
    pub total: Decimal,
}

impl Row {
    /// Renders a recommendation; `digits` rounds every amount for display,
    /// `None` keeps the exact values.
    pub fn new(r: &Recommendation, digits: Option<u32>) -> Self {
        let b: &CostBreakdown = &r.breakdown;
        let show = |v: Decimal| digits.map_or(v, |n| round_display(v, n));
        Row {
            rank: r.rank,
            provider_name: r.provider_name.clone(),
            region_name: r.region_name.clone(),
            storage_offering: r.storage_offering.clone(),
            compute_offerings: r.compute_offerings.clone(),
            transfer_offering: r.transfer_offering.clone(),
            storage_cost: show(b.storage_cost),
            requests_cost: show(b.requests_cost),
            data_in_cost: show(b.data_in_cost),
            data_out_cost: show(b.data_out_cost),
            data_transfer_cost: show(b.data_transfer_cost),
            compute_costs: b.compute_costs.iter().map(|&c| show(c)).collect(),
            compute_total_cost: show(b.compute_total_cost),
            total: show(b.total),
        }
    }

    /// Sum of the storage, requests, transfer and compute columns.
    pub fn component_sum(&self) -> Decimal {
        self.storage_cost + self.requests_cost + self.data_transfer_cost + self.compute_total_cost
    }
}

/// Response body: `{meta: {count, duration_ms, currency, result_id}, rows}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Envelope {
    pub meta: Meta,
    pub rows: Vec<Row>,
}

impl Envelope {
    pub fn new(
        recommendations: &[Recommendation],
        currency: &str,
        digits: Option<u32>,
        elapsed: Duration,
        result_id: Option<String>,
    ) -> Self {
        let millis = Decimal::from(elapsed.as_micros() as u64) / Decimal::from(1000);
        Envelope {
            meta: Meta {
                count: recommendations.len(),
                duration_ms: round_display(millis, 3),
                currency: currency.to_string(),
                result_id,
            },
            rows: recommendations.iter().map(|r| Row::new(r, digits)).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("envelope serializes");
        text.push('\n');
        text
    }

    pub fn to_xml(&self) -> String {
        let mut text = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let mut ser = quick_xml::se::Serializer::new(&mut text);
        ser.indent(' ', 2);
        XmlResponse::from(self).serialize(ser).expect("envelope serializes");
        text.push('\n');
        text
    }

    pub fn render(&self, media_type: MediaType) -> String {
        match media_type {
            MediaType::Json => self.to_json(),
            MediaType::Xml => self.to_xml(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    pub fn from_xml(text: &str) -> Result<Self, String> {
        quick_xml::de::from_str::<XmlResponse>(text).map_err(|e| e.to_string())?.try_into()
    }
}

// XML wraps every list in a container element (<rows><row>..</row></rows>)
// and carries amounts as element text.

#[derive(Serialize, Deserialize)]
#[serde(rename = "response")]
struct XmlResponse {
    meta: XmlMeta,
    rows: XmlRows,
}

#[derive(Serialize, Deserialize)]
struct XmlMeta {
    count: usize,
    duration_ms: String,
    currency: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    result_id: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct XmlRows {
    #[serde(default)]
    row: Vec<XmlRow>,
}

#[derive(Serialize, Deserialize)]
struct XmlNames {
    #[serde(default)]
    name: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct XmlAmounts {
    #[serde(default)]
    cost: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct XmlRow {
    rank: usize,
    provider_name: String,
    region_name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    storage_offering: Option<String>,
    compute_offerings: XmlNames,
    transfer_offering: String,
    storage_cost: String,
    requests_cost: String,
    data_in_cost: String,
    data_out_cost: String,
    data_transfer_cost: String,
    compute_costs: XmlAmounts,
    compute_total_cost: String,
    total: String,
}

fn amount(field: &str, text: &str) -> Result<Decimal, String> {
    text.trim().parse().map_err(|_| format!("{field}: `{text}` is not a decimal"))
}

impl From<&Envelope> for XmlResponse {
    fn from(e: &Envelope) -> Self {
        let m = &e.meta;
        XmlResponse {
            meta: XmlMeta {
                count: m.count,
                duration_ms: m.duration_ms.to_string(),
                currency: m.currency.clone(),
                result_id: m.result_id.clone(),
            },
            rows: XmlRows {
                row: e
                    .rows
                    .iter()
                    .map(|r| XmlRow {
                        rank: r.rank,
                        provider_name: r.provider_name.clone(),
                        region_name: r.region_name.clone(),
                        storage_offering: r.storage_offering.clone(),
                        compute_offerings: XmlNames { name: r.compute_offerings.clone() },
                        transfer_offering: r.transfer_offering.clone(),
                        storage_cost: r.storage_cost.to_string(),
                        requests_cost: r.requests_cost.to_string(),
                        data_in_cost: r.data_in_cost.to_string(),
                        data_out_cost: r.data_out_cost.to_string(),
                        data_transfer_cost: r.data_transfer_cost.to_string(),
                        compute_costs: XmlAmounts { cost: r.compute_costs.iter().map(Decimal::to_string).collect() },
                        compute_total_cost: r.compute_total_cost.to_string(),
                        total: r.total.to_string(),
                    })
                    .collect(),
            },
        }
    }
}

impl TryFrom<XmlResponse> for Envelope {
    type Error = String;

    fn try_from(x: XmlResponse) -> Result<Self, String> {
        let rows = x
            .rows
            .row
            .into_iter()
            .map(|r| {
                Ok(Row {
                    rank: r.rank,
                    provider_name: r.provider_name,
                    region_name: r.region_name,
                    storage_offering: r.storage_offering,
                    compute_offerings: r.compute_offerings.name,
                    transfer_offering: r.transfer_offering,
                    storage_cost: amount("storage_cost", &r.storage_cost)?,
                    requests_cost: amount("requests_cost", &r.requests_cost)?,
                    data_in_cost: amount("data_in_cost", &r.data_in_cost)?,
                    data_out_cost: amount("data_out_cost", &r.data_out_cost)?,
                    data_transfer_cost: amount("data_transfer_cost", &r.data_transfer_cost)?,
                    compute_costs: r
                        .compute_costs
                        .cost
                        .iter()
                        .map(|c| amount("compute_costs", c))
                        .collect::<Result<_, _>>()?,
                    compute_total_cost: amount("compute_total_cost", &r.compute_total_cost)?,
                    total: amount("total", &r.total)?,
                })
            })
            .collect::<Result<_, String>>()?;
        Ok(Envelope {
            meta: Meta {
                count: x.meta.count,
                duration_ms: amount("duration_ms", &x.meta.duration_ms)?,
                currency: x.meta.currency,
                result_id: x.meta.result_id,
            },
            rows,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use skyselect_core::pricing::TransferCharges;
    use std::str::FromStr;

    fn d(s: &str) -> Decimal {
        Decimal::from_str(s).unwrap()
    }

    fn sample() -> Vec<Recommendation> {
        let b = CostBreakdown::from_components(
            d("1.365"),
            d("0"),
            TransferCharges { inbound: d("0"), outbound: d("0.402") },
            vec![d("20.088")],
        );
        vec![
            Recommendation {
                rank: 1,
                provider_name: "Amazon".into(),
                region_name: "Asia Pacific(Tokyo)".into(),
                storage_offering: Some("S3 Standard".into()),
                compute_offerings: vec!["t1.micro".into()],
                transfer_offering: "Internet Data Transfer".into(),
                breakdown: b.clone(),
            },
            Recommendation {
                rank: 2,
                provider_name: "Amazon & Co <x>".into(),
                region_name: "Any".into(),
                storage_offering: None,
                compute_offerings: vec!["a".into(), "b".into()],
                transfer_offering: "t".into(),
                breakdown: CostBreakdown::from_components(
                    d("0.0004"),
                    d("0"),
                    TransferCharges { inbound: d("0"), outbound: d("0") },
                    vec![d("1.23456789"), d("2")],
                ),
            },
        ]
    }

    #[test]
    fn display_rounding_keeps_three_digits() {
        let e = Envelope::new(&sample(), "AUD", Some(3), Duration::from_micros(1234), Some("id".into()));
        assert_eq!(e.rows[0].total.to_string(), "21.855");
        assert_eq!(e.rows[0].requests_cost.to_string(), "0.000");
        assert_eq!(e.rows[1].storage_cost.to_string(), "0.000");
        assert_eq!(e.meta.duration_ms.to_string(), "1.234");
        let json = e.to_json();
        assert!(json.contains("\"total\": \"21.855\""), "{json}");
    }

    #[test]
    fn precise_keeps_exact_values() {
        let e = Envelope::new(&sample(), "USD", None, Duration::ZERO, None);
        assert_eq!(e.rows[1].compute_costs[0], d("1.23456789"));
        assert_eq!(e.rows[1].total, e.rows[1].component_sum());
    }

    #[test]
    fn json_and_xml_round_trip_to_the_same_envelope() {
        for digits in [Some(3), None] {
            let e = Envelope::new(&sample(), "AUD", digits, Duration::from_micros(17), Some("abc".into()));
            assert_eq!(Envelope::from_json(&e.to_json()).unwrap(), e);
            assert_eq!(Envelope::from_xml(&e.to_xml()).unwrap(), e, "{}", e.to_xml());
        }
    }

    #[test]
    fn empty_result_round_trips() {
        let e = Envelope::new(&[], "USD", Some(3), Duration::ZERO, None);
        assert_eq!(Envelope::from_xml(&e.to_xml()).unwrap(), e, "{}", e.to_xml());
        assert_eq!(Envelope::from_json(&e.to_json()).unwrap(), e);
    }
}
