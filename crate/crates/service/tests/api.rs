use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use glyphometrics::io::{load_corpus, to_canonical_json, CorpusDocument};
use glyphometrics::metrics::MetricOptions;
use glyphometrics::pipeline::analyze_glyph;
use glyphometrics::{fixtures, Point};
use glyphometrics_service::{router, AppState};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

struct Fixture {
    app: Router,
    state: AppState,
    _dir: tempfile::TempDir,
}

fn fixture() -> Fixture {
    let dir = tempfile::tempdir().unwrap();
    let state = AppState::new(fixtures::fixture_document(), dir.path().join("corpus.json")).unwrap();
    Fixture {
        app: router(state.clone()),
        state,
        _dir: dir,
    }
}

async fn call(app: &Router, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => req
            .header("content-type", "application/json")
            .body(Body::from(b.to_string())),
        None => req.body(Body::empty()),
    }
    .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes).unwrap_or_else(|_| Value::String(String::from_utf8_lossy(&bytes).into()))
    };
    (status, value)
}

async fn get_ok(app: &Router, uri: &str) -> Value {
    let (status, body) = call(app, Method::GET, uri, None).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    body
}

fn doc(f: &Fixture) -> CorpusDocument {
    f.state.read().doc.clone()
}

fn worked_id() -> String {
    fixtures::worked_character().0.id
}

fn library_metrics(doc: &CorpusDocument, id: &str) -> Value {
    serde_json::to_value(analyze_glyph(doc, id, &MetricOptions::default()).unwrap().metrics).unwrap()
}

#[tokio::test]
async fn glyph_metrics_equal_a_fresh_library_computation() {
    let f = fixture();
    let d = doc(&f);
    for g in &d.corpus.glyphs {
        let body = get_ok(&f.app, &format!("/glyphs/{}", g.id)).await;
        assert_eq!(body["revision"], 0);
        assert_eq!(body["metrics"], library_metrics(&d, &g.id), "{}", g.id);
        assert!(body["analysis_error"].is_null());
    }
    let summary = get_ok(&f.app, "/corpus").await;
    assert_eq!(summary["glyphs"].as_array().unwrap().len(), d.corpus.glyphs.len());
    assert_eq!(summary["dirty"], false);
}

#[tokio::test]
async fn reconstruct_stores_candidates_and_bumps_revision() {
    let f = fixture();
    let id = worked_id();
    let uri = format!("/glyphs/{id}/reconstruct");
    let (status, body) = call(&f.app, Method::POST, &uri, Some(json!({ "expected_revision": 0 }))).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    assert_eq!(body["revision"], 1);
    let cands = body["candidates"].as_array().unwrap();
    assert!(!cands.is_empty() && cands.len() <= 5);
    let scores: Vec<f64> = cands.iter().map(|c| c["score"].as_f64().unwrap()).collect();
    assert!(scores.windows(2).all(|w| w[0] <= w[1]));
    assert!(cands[0]["score_breakdown"].is_object());

    let view = get_ok(&f.app, &format!("/glyphs/{id}")).await;
    assert_eq!(view["candidates"], body["candidates"]);
    assert_eq!(get_ok(&f.app, "/corpus").await["dirty"], true);

    let weights = json!({
        "expected_revision": 1,
        "max_candidates": 2,
        "weights": { "pen_up_cost": 1.0, "turn_cost_per_degree": 0.0, "retrace_cost_per_length": 1.0, "start_prior_cost": 0.0 }
    });
    let (status, body) = call(&f.app, Method::POST, &uri, Some(weights)).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    assert_eq!(body["candidates"].as_array().unwrap().len(), 2);
}

#[tokio::test]
async fn candidate_choice_changes_only_order_dependent_metrics() {
    let f = fixture();
    let id = worked_id();
    let (status, _) = call(
        &f.app,
        Method::POST,
        &format!("/glyphs/{id}/reconstruct"),
        Some(json!({ "expected_revision": 0 })),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    let uri = format!("/glyphs/{id}/trajectory");
    let (s0, first) = call(&f.app, Method::PUT, &uri, Some(json!({ "expected_revision": 1, "candidate_index": 0 }))).await;
    let (s1, second) = call(&f.app, Method::PUT, &uri, Some(json!({ "expected_revision": 2, "candidate_index": 1 }))).await;
    assert_eq!((s0, s1), (StatusCode::OK, StatusCode::OK), "{first} {second}");
    assert_eq!(second["revision"], 3);
    assert_ne!(first["trajectory"], second["trajectory"]);
    let (a, b) = (&first["metrics"], &second["metrics"]);
    assert_ne!(a, b);
    assert_eq!(a["size"], b["size"]);
    assert_eq!(a["crossings"], b["crossings"]);
    for shape_only in ["circularity", "rectangularity", "ascendancy_pct", "descendance_pct"] {
        let (x, y) = (a[shape_only]["value"].as_f64().unwrap(), b[shape_only]["value"].as_f64().unwrap());
        assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0), "{shape_only}: {x} vs {y}");
    }
    assert_eq!(second["metrics"], library_metrics(&doc(&f), &id));
}

#[tokio::test]
async fn explicit_trajectory_is_stored_as_manual() {
    let f = fixture();
    let id = worked_id();
    let mut t = serde_json::to_value(&fixtures::worked_character().1).unwrap();
    t["provenance"] = json!("recorded");
    let (status, body) = call(
        &f.app,
        Method::PUT,
        &format!("/glyphs/{id}/trajectory"),
        Some(json!({ "expected_revision": 0, "trajectory": t })),
    )
    .await;
    assert_eq!(status, StatusCode::OK, "{body}");
    assert_eq!(body["trajectory"]["provenance"], "manual");
}

#[tokio::test]
async fn landmark_add_then_remove_restores_metrics_exactly() {
    let f = fixture();
    let (g, _) = fixtures::straight();
    let view = get_ok(&f.app, &format!("/glyphs/{}", g.id)).await;
    let before = view["metrics"].clone();
    let mid = g.segments[0].eval(0.5);
    let uri = format!("/glyphs/{}/landmarks", g.id);

    let (status, added) = call(&f.app, Method::PATCH, &uri, Some(json!({ "expected_revision": 0, "add": [mid] }))).await;
    assert_eq!(status, StatusCode::OK, "{added}");
    assert_eq!(
        added["metrics"]["counts"]["primitive"].as_u64().unwrap(),
        before["counts"]["primitive"].as_u64().unwrap() + 1
    );
    let idx = added["landmarks"]
        .as_array()
        .unwrap()
        .iter()
        .position(|l| {
            let p: Point = serde_json::from_value(l["location"].clone()).unwrap();
            p.distance(mid) < 1e-9
        })
        .unwrap();
    assert_eq!(added["landmarks"][idx]["source"], "manual");

    let (status, removed) = call(&f.app, Method::PATCH, &uri, Some(json!({ "expected_revision": 1, "remove": [idx] }))).await;
    assert_eq!(status, StatusCode::OK, "{removed}");
    assert_eq!(removed["metrics"], before);
    assert_eq!(removed["revision"], 2);
}

#[tokio::test]
async fn stale_revision_is_a_conflict_without_state_change() {
    let f = fixture();
    let id = worked_id();
    let before = doc(&f);
    let view = get_ok(&f.app, &format!("/glyphs/{id}")).await;
    for (method, uri, body) in [
        (Method::PUT, format!("/glyphs/{id}/trajectory"), json!({ "expected_revision": 7, "candidate_index": 0 })),
        (Method::PATCH, format!("/glyphs/{id}/landmarks"), json!({ "expected_revision": 7, "remove": [0] })),
        (Method::POST, format!("/glyphs/{id}/reconstruct"), json!({ "expected_revision": 7 })),
        (
            Method::POST,
            format!("/glyphs/{id}/segments"),
            json!({ "expected_revision": 7, "polylines": [[[0.0, 0.0], [1.0, 1.0]]] }),
        ),
        (Method::POST, "/save".to_string(), json!({ "expected_revision": 7 })),
    ] {
        let (status, body) = call(&f.app, method, &uri, Some(body)).await;
        assert_eq!(status, StatusCode::CONFLICT, "{uri}: {body}");
        assert_eq!(body["revision"], 0);
    }
    assert_eq!(doc(&f), before);
    assert_eq!(get_ok(&f.app, &format!("/glyphs/{id}")).await, view);
    assert_eq!(get_ok(&f.app, "/corpus").await["dirty"], false);
}

#[tokio::test]
async fn unknown_and_invalid_requests() {
    let f = fixture();
    let id = worked_id();
    let (status, body) = call(&f.app, Method::GET, "/glyphs/nope", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["revision"], 0);
    assert!(body["error"].as_str().unwrap().contains("nope"));
    let (status, _) = call(
        &f.app,
        Method::PUT,
        "/glyphs/nope/trajectory",
        Some(json!({ "expected_revision": 0, "candidate_index": 0 })),
    )
    .await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    let before = doc(&f);
    let unprocessable = [
        (Method::PATCH, format!("/glyphs/{id}/landmarks"), json!({ "expected_revision": 0, "remove": [999] })),
        (Method::PATCH, format!("/glyphs/{id}/landmarks"), json!({ "expected_revision": 0, "add": [[100.0, 100.0]] })),
        (Method::PUT, format!("/glyphs/{id}/trajectory"), json!({ "expected_revision": 0, "candidate_index": 0 })),
        (Method::PUT, format!("/glyphs/{id}/trajectory"), json!({ "expected_revision": 0 })),
        (
            Method::POST,
            format!("/glyphs/{id}/reconstruct"),
            json!({ "expected_revision": 0, "max_candidates": 0 }),
        ),
        (Method::POST, "/glyphs/new/segments".to_string(), json!({ "expected_revision": 0, "polylines": [] })),
        (
            Method::POST,
            "/glyphs/new/segments".to_string(),
            json!({ "expected_revision": 0, "polylines": [[[0.0, 0.0], [1.0, 0.0]]], "max_error": -1.0 }),
        ),
    ];
    for (method, uri, body) in unprocessable {
        let (status, resp) = call(&f.app, method, &uri, Some(body.clone())).await;
        assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY, "{uri} {body}: {resp}");
        assert!(resp["error"].is_string());
        assert_eq!(resp["revision"], 0);
    }
    assert_eq!(doc(&f), before);
}

#[tokio::test]
async fn drawn_strokes_create_and_extend_a_glyph() {
    let f = fixture();
    let stem: Vec<[f64; 2]> = (0..=20).map(|i| [0.0, 1.0 - i as f64 / 20.0]).collect();
    let bowl: Vec<[f64; 2]> = (0..=30)
        .map(|i| {
            let a = std::f64::consts::PI * (0.5 - i as f64 / 30.0);
            [0.3 * a.cos(), 0.75 + 0.25 * a.sin()]
        })
        .collect();
    let uri = "/glyphs/drawn/segments";
    let (status, body) = call(
        &f.app,
        Method::POST,
        uri,
        Some(json!({ "expected_revision": 0, "polylines": [stem], "label": "P" })),
    )
    .await;
    assert_eq!(status, StatusCode::CREATED, "{body}");
    assert_eq!(body["revision"], 1);
    assert_eq!(body["glyph"]["segments"].as_array().unwrap().len(), 1);
    assert_eq!(body["glyph"]["label"], "P");
    assert!(body["trajectory"].is_object());
    assert!(body["metrics"].is_object(), "{body}");
    let ids: Vec<String> = get_ok(&f.app, "/corpus").await["glyphs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g["id"].as_str().unwrap().to_string())
        .collect();
    assert!(ids.iter().any(|i| i == "drawn"));

    let (status, body) = call(
        &f.app,
        Method::POST,
        uri,
        Some(json!({ "expected_revision": 1, "polylines": [bowl], "max_error": 0.001 })),
    )
    .await;
    assert_eq!(status, StatusCode::OK, "{body}");
    assert_eq!(body["glyph"]["segments"].as_array().unwrap().len(), 2);
    assert_eq!(body["metrics"], library_metrics(&doc(&f), "drawn"));
    let d = doc(&f);
    let g = d.glyph("drawn").unwrap();
    let end = g.segments[1].eval(0.5);
    let mid_bowl = [0.3, 0.75];
    assert!(end.distance(Point::new(mid_bowl[0], mid_bowl[1])) < 0.01);
    assert_eq!(d.candidates["drawn"].len(), body["candidates"].as_array().unwrap().len());
}

#[tokio::test]
async fn script_stats_cover_the_corpus() {
    let f = fixture();
    let body = get_ok(&f.app, "/script/stats?mode=static&resample=32").await;
    let n = doc(&f).corpus.glyphs.len();
    assert_eq!(body["revision"], 0);
    assert_eq!(body["metrics"]["per_glyph"].as_object().unwrap().len(), n);
    let values = body["similarity"]["values"].as_array().unwrap();
    assert_eq!(values.len(), n);
    for (i, row) in values.iter().enumerate() {
        assert_eq!(row[i], 0.0);
    }
    let (status, _) = call(&f.app, Method::GET, "/script/stats?resample=2", None).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
}

#[tokio::test]
async fn save_then_reload_reproduces_responses() {
    let f = fixture();
    let id = worked_id();
    call(&f.app, Method::POST, &format!("/glyphs/{id}/reconstruct"), Some(json!({ "expected_revision": 0 }))).await;
    let (status, _) = call(
        &f.app,
        Method::PUT,
        &format!("/glyphs/{id}/trajectory"),
        Some(json!({ "expected_revision": 1, "candidate_index": 1 })),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    let (g, _) = fixtures::straight();
    let (status, _) = call(
        &f.app,
        Method::PATCH,
        &format!("/glyphs/{}/landmarks", g.id),
        Some(json!({ "expected_revision": 2, "add": [g.segments[0].eval(0.25)] })),
    )
    .await;
    assert_eq!(status, StatusCode::OK);

    let (status, saved) = call(&f.app, Method::POST, "/save", None).await;
    assert_eq!(status, StatusCode::OK, "{saved}");
    assert_eq!(saved["revision"], 3);
    assert_eq!(get_ok(&f.app, "/corpus").await["dirty"], false);

    let path = f.state.read().path.clone();
    let reloaded = load_corpus(&path).unwrap();
    assert_eq!(to_canonical_json(&reloaded).unwrap(), to_canonical_json(&doc(&f)).unwrap());
    let fresh = router(AppState::new(reloaded, &path).unwrap());
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("revision");
        v
    };
    let mut uris = vec!["/corpus".to_string(), "/script/stats".to_string()];
    uris.extend(doc(&f).corpus.glyphs.iter().map(|g| format!("/glyphs/{}", g.id)));
    for uri in uris {
        assert_eq!(strip(get_ok(&f.app, &uri).await), strip(get_ok(&fresh, &uri).await), "{uri}");
    }
}
