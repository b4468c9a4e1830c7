use std::fmt::Write;

use skyselect_api::{Endpoint, Envelope, Row};
use skyselect_core::selection::OfferCountReport;

/// Left-aligns text columns and right-aligns the rest.
fn render(headers: &[&str], rows: &[Vec<String>], numeric_from: usize) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &[String]| {
        let mut text = String::new();
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i > 0 {
                text.push_str("  ");
            }
            if i >= numeric_from {
                let _ = write!(text, "{cell:>w$}");
            } else {
                let _ = write!(text, "{cell:<w$}");
            }
        }
        out.push_str(text.trim_end());
        out.push('\n');
    };
    line(&headers.iter().map(|h| h.to_string()).collect::<Vec<_>>());
    for row in rows {
        line(row);
    }
    out
}

type Cells = fn(&Row) -> Vec<String>;

fn names(row: &Row) -> String {
    row.compute_offerings.join(",")
}

/// Ranked rows with the cost columns of the query kind and a closing
/// record count.
pub fn recommendations(endpoint: Endpoint, e: &Envelope) -> String {
    let (headers, cells): (Vec<&str>, Cells) = match endpoint {
        Endpoint::Storage => (
            vec![
                "rank",
                "provider_name",
                "region_name",
                "storage_offering",
                "transfer_offering",
                "storage_cost",
                "requests_cost",
                "cost_data_in",
                "cost_data_out",
                "storage_dataTransfer_cost",
            ],
            |r| {
                vec![
                    r.storage_offering.clone().unwrap_or_default(),
                    r.transfer_offering.clone(),
                    r.storage_cost.to_string(),
                    r.requests_cost.to_string(),
                    r.data_in_cost.to_string(),
                    r.data_out_cost.to_string(),
                    r.total.to_string(),
                ]
            },
        ),
        Endpoint::Compute => (
            vec![
                "rank",
                "provider_name",
                "region_name",
                "compute_offerings",
                "transfer_offering",
                "cost_data_in",
                "cost_data_out",
                "choices_compute_total_cost",
                "compute_dataTransfer_cost",
            ],
            |r| {
                vec![
                    names(r),
                    r.transfer_offering.clone(),
                    r.data_in_cost.to_string(),
                    r.data_out_cost.to_string(),
                    r.compute_total_cost.to_string(),
                    r.total.to_string(),
                ]
            },
        ),
        Endpoint::Combined => (
            vec![
                "rank",
                "provider_name",
                "region_name",
                "storage_offering",
                "compute_offerings",
                "transfer_offering",
                "storage_cost",
                "requests_cost",
                "data_transfer_cost",
                "choices_compute_total_cost",
                "compute_storage_dataTransfer_cost",
            ],
            |r| {
                vec![
                    r.storage_offering.clone().unwrap_or_default(),
                    names(r),
                    r.transfer_offering.clone(),
                    r.storage_cost.to_string(),
                    r.requests_cost.to_string(),
                    r.data_transfer_cost.to_string(),
                    r.compute_total_cost.to_string(),
                    r.total.to_string(),
                ]
            },
        ),
    };
    let text_columns = if endpoint == Endpoint::Combined { 6 } else { 5 };
    let rows: Vec<Vec<String>> = e
        .rows
        .iter()
        .map(|r| {
            let mut row = vec![r.rank.to_string(), r.provider_name.clone(), r.region_name.clone()];
            row.extend(cells(r));
            row
        })
        .collect();
    let mut out = render(&headers, &rows, text_columns);
    let _ =
        writeln!(out, "Fetched {} records in {}. Duration: {} ms", e.meta.count, e.meta.currency, e.meta.duration_ms);
    out
}

pub fn offer_counts(report: &OfferCountReport) -> String {
    let headers = ["provider", "regions", "compute", "storage", "transfer", "simple_count", "detailed_count"];
    let mut rows: Vec<Vec<String>> = report
        .per_provider
        .iter()
        .map(|(name, c)| {
            vec![
                name.clone(),
                c.regions.to_string(),
                c.compute.to_string(),
                c.storage.to_string(),
                c.transfer.to_string(),
                c.simple_count.to_string(),
                c.detailed_count.to_string(),
            ]
        })
        .collect();
    let blank = String::new;
    rows.push(vec![
        "total".into(),
        blank(),
        blank(),
        blank(),
        blank(),
        report.simple_count.to_string(),
        report.detailed_count.to_string(),
    ]);
    let mut out = render(&headers, &rows, 1);
    let _ = writeln!(out, "Candidate relation: {} rows x {} columns", report.candidate_rows, report.candidate_columns);
    out
}
