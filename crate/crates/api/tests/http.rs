use std::time::Duration;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use tower::ServiceExt;

use skyselect_api::{router, ApiQuery, AppState, Endpoint, Envelope, ErrorBody};
use skyselect_core::{select, Decimal};
use skyselect_testkit::fixtures::{calibrated_rates, nine_providers_merged};

const STORAGE_CALL: &str =
    "media_type=xml&currency=AUD&storage=50&duration=31&data_upload_size=50&data_download_size=10&copy=1000&get=5000";
const COMBINED_CALL: &str = "media_type=xml&currency=AUD&storage=10&duration=30&data_upload_size=1&data_download_size=1&ram_range=0%2C69&storage_range=0%2C2040&hour=720&n=1";

fn state() -> AppState {
    AppState::new(nine_providers_merged(), calibrated_rates())
}

struct Reply {
    status: StatusCode,
    content_type: String,
    body: String,
}

async fn call(state: &AppState, uri: &str) -> Reply {
    let response = router(state.clone()).oneshot(Request::get(uri).body(Body::empty()).unwrap()).await.unwrap();
    let status = response.status();
    let content_type =
        response.headers().get("content-type").map(|v| v.to_str().unwrap().to_string()).unwrap_or_default();
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    Reply { status, content_type, body: String::from_utf8(bytes.to_vec()).unwrap() }
}

fn envelope(reply: &Reply) -> Envelope {
    assert_eq!(reply.status, StatusCode::OK, "{}", reply.body);
    if reply.content_type.contains("xml") {
        Envelope::from_xml(&reply.body).unwrap()
    } else {
        Envelope::from_json(&reply.body).unwrap()
    }
}

fn problems(reply: &Reply) -> ErrorBody {
    serde_json::from_str(&reply.body).unwrap()
}

/// Drops the per-call fields so bodies of identical queries compare equal.
fn normalized(mut e: Envelope) -> Envelope {
    e.meta.duration_ms = Decimal::ZERO;
    e.meta.result_id = None;
    e
}

#[tokio::test]
async fn storage_call_ranks_softlayer_first() {
    let s = state();
    let reply = call(&s, &format!("/api/cost/storage?{STORAGE_CALL}")).await;
    assert_eq!(reply.content_type, "application/xml");
    let e = envelope(&reply);
    assert_eq!(e.meta.count, 12);
    assert_eq!(e.meta.currency, "AUD");
    assert_eq!(e.rows[0].provider_name, "SoftLayer");
    assert_eq!(e.rows[0].total.to_string(), "7.000");
    assert!(e.rows.windows(2).all(|w| w[0].total <= w[1].total));
    assert!(e.meta.result_id.is_some());
}

#[tokio::test]
async fn json_and_xml_bodies_agree() {
    let s = state();
    for call_text in [STORAGE_CALL, COMBINED_CALL] {
        let endpoint = if call_text == STORAGE_CALL { "storage" } else { "combined" };
        let xml = call(&s, &format!("/api/cost/{endpoint}?{call_text}")).await;
        let json =
            call(&s, &format!("/api/cost/{endpoint}?{}", call_text.replace("media_type=xml", "media_type=json"))).await;
        assert_eq!(json.content_type, "application/json");
        assert_eq!(normalized(envelope(&xml)), normalized(envelope(&json)));
    }
}

#[tokio::test]
async fn combined_call_totals_are_component_sums() {
    let s = state();
    let e = envelope(&call(&s, &format!("/api/cost/combined?{COMBINED_CALL}&precise=true")).await);
    assert!(!e.rows.is_empty());
    for row in &e.rows {
        assert_eq!(row.total, row.component_sum());
        assert_eq!(row.data_transfer_cost, row.data_in_cost + row.data_out_cost);
        assert_eq!(row.compute_total_cost, row.compute_costs.iter().copied().sum::<Decimal>());
    }
    assert!(e.rows.windows(2).all(|w| w[0].total <= w[1].total));
}

#[tokio::test]
async fn missing_storage_is_bad_request() {
    let s = state();
    let reply = call(&s, "/api/cost/storage?data_upload_size=1&data_download_size=1").await;
    assert_eq!(reply.status, StatusCode::BAD_REQUEST);
    let body = problems(&reply);
    assert_eq!(body.status, 400);
    assert_eq!(body.problems[0].field.as_deref(), Some("storage"));
    let reply = call(&s, "/api/cost/combined?storage=abc&data_upload_size=1&data_download_size=1").await;
    assert_eq!(reply.status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn mismatched_lists_are_bad_request() {
    let s = state();
    let reply =
        call(&s, "/api/cost/combined?storage=10&data_upload_size=1&data_download_size=1&ram_range=0,69;1,4&n=1").await;
    assert_eq!(reply.status, StatusCode::BAD_REQUEST);
    assert!(reply.body.contains("match with each other"), "{}", reply.body);
    let reply = call(&s, "/api/cost/compute?data_upload_size=1&data_download_size=1&ram_range=69,0").await;
    assert_eq!(reply.status, StatusCode::BAD_REQUEST);
    assert_eq!(problems(&reply).problems[0].field.as_deref(), Some("ram_range"));
}

#[tokio::test]
async fn compute_endpoint_matches_library_selection() {
    let s = state();
    let query = "data_upload_size=2&data_download_size=3&ram_range=0,8&hour=100&n=2&precise=true";
    let e = envelope(&call(&s, &format!("/api/cost/compute?{query}")).await);
    let parsed = ApiQuery::parse(Endpoint::Compute, query).unwrap();
    let expected = select(&parsed.request, &nine_providers_merged(), &calibrated_rates()).unwrap();
    assert_eq!(e.rows.len(), expected.len());
    for (row, rec) in e.rows.iter().zip(&expected) {
        assert!(row.storage_offering.is_none());
        assert_eq!((&row.provider_name, row.total), (&rec.provider_name, rec.breakdown.total));
    }
}

#[tokio::test]
async fn compute_needs_transfer_sizes() {
    let s = state();
    let reply = call(&s, "/api/cost/compute?ram_range=0,8").await;
    assert_eq!(reply.status, StatusCode::BAD_REQUEST);
    let fields: Vec<String> = problems(&reply).problems.into_iter().filter_map(|p| p.field).collect();
    assert_eq!(fields, ["data_upload_size", "data_download_size"]);
}

#[tokio::test]
async fn unknown_provider_gives_empty_result() {
    let s = state();
    let reply =
        call(&s, "/api/cost/compute?data_upload_size=1&data_download_size=1&providers=Nobody&media_type=json").await;
    let e = envelope(&reply);
    assert!(e.rows.is_empty());
    assert_eq!(e.meta.count, 0);
    assert!(e.meta.result_id.is_none());
}

#[tokio::test]
async fn zero_usage_ties_break_by_name() {
    let s = state();
    let e = envelope(&call(&s, "/api/cost/storage?storage=0&data_upload_size=0&data_download_size=0").await);
    assert!(e.rows.iter().all(|r| r.total.is_zero()));
    let keys: Vec<_> = e.rows.iter().map(|r| (r.provider_name.clone(), r.region_name.clone())).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[tokio::test]
async fn unknown_currency_is_bad_request() {
    let s = state();
    for code in ["EUR", "XYZ"] {
        let reply =
            call(&s, &format!("/api/cost/storage?storage=1&data_upload_size=0&data_download_size=0&currency={code}"))
                .await;
        assert_eq!(reply.status, StatusCode::BAD_REQUEST, "{code}");
        assert!(reply.body.contains(code));
    }
}

#[tokio::test]
async fn stored_result_returns_full_breakdowns() {
    let s = state();
    let e = envelope(&call(&s, &format!("/api/cost/storage?{STORAGE_CALL}")).await);
    let id = e.meta.result_id.unwrap();
    let detail = envelope(&call(&s, &format!("/api/recommendation/{id}?media_type=json")).await);
    let parsed = ApiQuery::parse(Endpoint::Storage, STORAGE_CALL).unwrap();
    let expected = select(&parsed.request, &nine_providers_merged(), &calibrated_rates()).unwrap();
    assert_eq!(detail.rows.len(), expected.len());
    assert_eq!(detail.meta.currency, "AUD");
    for (row, rec) in detail.rows.iter().zip(&expected) {
        assert_eq!(row.total, rec.breakdown.total);
        assert_eq!(row.requests_cost, rec.breakdown.requests_cost);
    }
    assert_eq!(detail.rows[2].requests_cost, "0.01515".parse::<Decimal>().unwrap());
}

#[tokio::test]
async fn missing_or_expired_results_are_not_found() {
    let s = state();
    for id in ["not-a-uuid", "7b0e4c1e-1f6e-4d64-9e0c-2b1f3f0a9d11"] {
        assert_eq!(call(&s, &format!("/api/recommendation/{id}")).await.status, StatusCode::NOT_FOUND);
    }
    let short = AppState::with_options(nine_providers_merged(), calibrated_rates(), Duration::ZERO, 3);
    let e = envelope(&call(&short, &format!("/api/cost/storage?{STORAGE_CALL}")).await);
    let id = e.meta.result_id.unwrap();
    assert_eq!(call(&short, &format!("/api/recommendation/{id}")).await.status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn identical_queries_give_identical_bodies() {
    let s = state();
    let a = envelope(&call(&s, &format!("/api/cost/combined?{COMBINED_CALL}")).await);
    let b = envelope(&call(&s, &format!("/api/cost/combined?{COMBINED_CALL}")).await);
    assert_ne!(a.meta.result_id, b.meta.result_id);
    assert_eq!(normalized(a), normalized(b));
}

#[tokio::test]
async fn concurrent_queries_read_consistent_snapshots() {
    let s = state();
    let tasks: Vec<_> = (0..16)
        .map(|i| {
            let s = s.clone();
            tokio::spawn(async move {
                if i % 4 == 0 {
                    s.catalog()
                        .update(|c| {
                            let mut next = c.clone();
                            next.version = format!("v{i}");
                            Ok(next)
                        })
                        .unwrap();
                }
                envelope(&call(&s, &format!("/api/cost/storage?{STORAGE_CALL}")).await)
            })
        })
        .collect();
    let mut bodies = Vec::new();
    for t in tasks {
        bodies.push(normalized(t.await.unwrap()));
    }
    assert!(bodies.windows(2).all(|w| w[0] == w[1]));
}

#[tokio::test]
async fn health_check() {
    let reply = call(&state(), "/api/health").await;
    assert_eq!((reply.status, reply.body.as_str()), (StatusCode::OK, "ok"));
}
