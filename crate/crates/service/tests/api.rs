use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use ndpolar_core::fixtures;
use ndpolar_service::{router, AppState, REVISION_HEADER};

struct Reply {
    status: StatusCode,
    revision: Option<u64>,
    content_type: Option<String>,
    body: Vec<u8>,
}

impl Reply {
    fn json(&self) -> Value {
        serde_json::from_slice(&self.body).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&self.body)))
    }
}

async fn call(app: &Router, method: Method, uri: &str, body: Option<String>) -> Reply {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .body(body.map(Body::from).unwrap_or_else(Body::empty))
        .unwrap();
    let res = app.clone().oneshot(req).await.unwrap();
    let status = res.status();
    let revision = res
        .headers()
        .get(REVISION_HEADER)
        .map(|v| v.to_str().unwrap().parse().unwrap());
    let content_type = res
        .headers()
        .get("content-type")
        .map(|v| v.to_str().unwrap().to_string());
    let body = res.into_body().collect().await.unwrap().to_bytes().to_vec();
    Reply { status, revision, content_type, body }
}

async fn get(app: &Router, uri: &str) -> Reply {
    call(app, Method::GET, uri, None).await
}

fn cooling_app() -> Router {
    router(AppState::new(fixtures::cooling()))
}

#[tokio::test]
async fn slice_of_the_recently_serviced_layer() {
    let app = cooling_app();
    let r = get(&app, "/api/slice?cooling=1&maintenance=0").await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.revision, Some(1));
    let v = r.json();
    // column probability=0, impact bottom to top
    assert_eq!(v["grid"][0], json!(["green", "green", "light-green", "light-green", "light-green"]));
    assert_eq!(v["grid"][4], json!(["light-green", "orange", "orange", "orange", "orange"]));
    assert_eq!(v["slice"][1]["label"], "recently serviced");

    // labels work too, and "+" must be percent-encoded
    let by_label = get(&app, "/api/slice?cooling=N%2B1&maintenance=recently%20serviced").await;
    assert_eq!(by_label.body, r.body);
}

#[tokio::test]
async fn violations_body_shape() {
    let app = cooling_app();
    let r = get(&app, "/api/violations?state=2,2,1,2").await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.json(), json!({ "v": [0, 0, 0, 1], "V": 1 }));
    assert!(r.revision.is_some());
}

#[tokio::test]
async fn aggregate_and_walk() {
    let app = cooling_app();
    let r = get(&app, "/api/aggregate?cooling=1&maintenance=due&risk=Medium,Medium").await;
    assert_eq!(r.status, StatusCode::OK);
    let v = r.json();
    assert_eq!(v["risk_grade"], "orange");
    assert_eq!(v["likelihood"][2], "orange");
    assert_eq!(v["impact"][2], "orange");

    let r = get(&app, "/api/walk?vary=maintenance&cooling=N%2B1&risk=2,2").await;
    assert_eq!(r.status, StatusCode::OK);
    let v = r.json();
    let grades: Vec<&str> = v["steps"].as_array().unwrap().iter().map(|s| s["risk_grade"].as_str().unwrap()).collect();
    assert_eq!(grades, ["light-green", "orange", "orange"]);
    let vs: Vec<u64> = v["steps"].as_array().unwrap().iter().map(|s| s["V"].as_u64().unwrap()).collect();
    assert_eq!(vs, [0, 0, 1]);
}

#[tokio::test]
async fn error_statuses() {
    let app = cooling_app();
    assert_eq!(get(&app, "/api/slice?humidity=1").await.status, StatusCode::NOT_FOUND);
    assert_eq!(get(&app, "/api/slice?maintenance=weekly").await.status, StatusCode::NOT_FOUND);
    assert_eq!(get(&app, "/api/slice?maintenance=7").await.status, StatusCode::NOT_FOUND);
    assert_eq!(get(&app, "/api/slice?probability=1").await.status, StatusCode::BAD_REQUEST);
    assert_eq!(get(&app, "/api/violations").await.status, StatusCode::BAD_REQUEST);
    assert_eq!(get(&app, "/api/violations?state=1,2").await.status, StatusCode::BAD_REQUEST);
    assert_eq!(get(&app, "/api/aggregate?risk=2").await.status, StatusCode::BAD_REQUEST);
    assert_eq!(get(&app, "/api/walk?cooling=1").await.status, StatusCode::BAD_REQUEST);
    assert_eq!(get(&app, "/api/walk?vary=impact").await.status, StatusCode::BAD_REQUEST);
    assert_eq!(get(&app, "/api/render/polar.svg?width=wide").await.status, StatusCode::BAD_REQUEST);
    assert_eq!(get(&app, "/api/render/pie.svg").await.status, StatusCode::NOT_FOUND);
    let r = get(&app, "/api/slice?humidity=1").await;
    assert_eq!(r.json()["error"]["code"], "E_UNKNOWN_AXIS");
    assert_eq!(r.revision, Some(1));
}

#[tokio::test]
async fn svg_endpoints() {
    let app = cooling_app();
    let r = get(&app, "/api/render/polar.svg?cooling=1&maintenance=0&risk=2,2").await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.content_type.as_deref(), Some("image/svg+xml"));
    let svg = String::from_utf8(r.body).unwrap();
    assert_eq!(svg.matches("class=\"segment\"").count(), 17);
    let r = get(&app, "/api/render/matrix.svg").await;
    let svg = String::from_utf8(r.body).unwrap();
    assert_eq!(svg.matches("class=\"cell\"").count(), 25);
}

#[tokio::test]
async fn layout_endpoint() {
    let app = cooling_app();
    let v = get(&app, "/api/layout").await.json();
    assert_eq!(v["layout"]["d"], 4);
    assert_eq!(v["layout"]["sectors"].as_array().unwrap().len(), 4);
    assert_eq!(v["axes"][3]["labels"][2], "overdue");
    let dt = v["layout"]["delta_theta"].as_f64().unwrap();
    assert!((dt - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
}

#[tokio::test]
async fn reads_are_idempotent() {
    let app = cooling_app();
    for uri in [
        "/api/slice?maintenance=2",
        "/api/aggregate",
        "/api/walk?vary=cooling",
        "/api/layout",
        "/api/render/polar.svg",
        "/api/model",
    ] {
        let a = get(&app, uri).await;
        let b = get(&app, uri).await;
        assert_eq!(a.status, StatusCode::OK, "{uri}");
        assert_eq!(a.body, b.body, "{uri}");
    }
}

#[tokio::test]
async fn put_replaces_and_bumps_revision() {
    let app = cooling_app();
    let r = call(&app, Method::PUT, "/api/model", Some(fixtures::CLASSIC_2D.to_string())).await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.json()["revision"], 2);
    assert_eq!(r.revision, Some(2));
    let m = get(&app, "/api/model").await;
    assert_eq!(m.revision, Some(2));
    assert_eq!(m.json()["document"]["name"], fixtures::classic_2d().name());
    let s = get(&app, "/api/slice").await.json();
    assert_eq!(s["grid"].as_array().unwrap().len(), 5);
    assert!(s["slice"].as_array().unwrap().is_empty());
}

#[tokio::test]
async fn invalid_put_keeps_the_prior_model() {
    let app = cooling_app();
    let before = get(&app, "/api/slice?maintenance=1").await;

    let mut doc: Value = serde_json::from_str(fixtures::CLASSIC_2D).unwrap();
    doc["assignment"]["entries"].as_array_mut().unwrap().truncate(20);
    let r = call(&app, Method::PUT, "/api/model", Some(doc.to_string())).await;
    assert_eq!(r.status, StatusCode::UNPROCESSABLE_ENTITY);
    let v = r.json();
    assert_eq!(v["error"]["code"], "E_NON_TOTAL");
    assert_eq!(v["error"]["uncovered"].as_array().unwrap().len(), 5);
    assert_eq!(v["revision"], 1);

    let r = call(&app, Method::PUT, "/api/model", Some("{not json".into())).await;
    assert_eq!(r.status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(r.json()["error"]["code"], "E_SCHEMA");

    let after = get(&app, "/api/slice?maintenance=1").await;
    assert_eq!(after.revision, Some(1));
    assert_eq!(after.body, before.body);
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn readers_see_whole_snapshots() {
    let state = AppState::new(fixtures::cooling());
    let app = router(state.clone());
    let writer = {
        let app = app.clone();
        tokio::spawn(async move {
            for k in 0..20 {
                let doc = if k % 2 == 0 { fixtures::CLASSIC_2D } else { fixtures::COOLING };
                let r = call(&app, Method::PUT, "/api/model", Some(doc.to_string())).await;
                assert_eq!(r.status, StatusCode::OK);
            }
        })
    };
    let mut readers = Vec::new();
    for _ in 0..4 {
        let app = app.clone();
        readers.push(tokio::spawn(async move {
            for _ in 0..40 {
                let r = get(&app, "/api/slice").await;
                assert_eq!(r.status, StatusCode::OK);
                let rev = r.revision.unwrap();
                let v = r.json();
                // revision 1 and every odd PUT serve cooling, even PUTs classic2d
                let ctx = v["slice"].as_array().unwrap().len();
                let expect_cooling = rev == 1 || rev % 2 == 1;
                assert_eq!(ctx == 2, expect_cooling, "revision {rev} served a mixed model");
            }
        }));
    }
    writer.await.unwrap();
    for r in readers {
        r.await.unwrap();
    }
    assert_eq!(state.snapshot().revision, 21);
}
