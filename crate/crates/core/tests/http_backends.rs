//! Wire-level tests for the HTTP backends against a loopback server.

mod common;

use common::LoopbackServer;
use llmlab_core::model::{complete, GenerationParams, Message, ModelSpec};
use llmlab_core::rag::load_url_live;
use llmlab_core::tools::{api_tool_call, ApiMode, ApiToolSpec};

#[test]
fn http_chat_round_trip_and_wire_shape() {
    let response = r#"{"choices":[{"message":{"role":"assistant","content":"pong"}}],
                       "usage":{"prompt_tokens":7,"completion_tokens":2}}"#;
    let server = LoopbackServer::start(1, "HTTP/1.1 200 OK", response);

    let model = ModelSpec::http_chat("wire-model", server.base_url.clone());
    let mut params = GenerationParams::default();
    params.temperature = 0.25;
    params.max_tokens = 64;

    let completion = complete(&model, &[Message::user("ping")], &params).unwrap();
    assert_eq!(completion.text, "pong");
    assert_eq!(completion.usage.prompt_tokens, 7);
    assert_eq!(completion.usage.completion_tokens, 2);

    let request = server.next_request();
    assert!(request.head.starts_with("POST /v1/chat/completions HTTP/1.1"));
    let body: serde_json::Value = serde_json::from_str(&request.body).unwrap();
    assert_eq!(body["model"], "wire-model");
    assert_eq!(body["messages"][0]["role"], "user");
    assert_eq!(body["messages"][0]["content"], "ping");
    assert_eq!(body["temperature"], 0.25);
    assert_eq!(body["max_tokens"], 64);
    assert_eq!(body["stream"], false);
}

#[test]
fn http_chat_sends_bearer_token_from_env() {
    let response = r#"{"choices":[{"message":{"content":"ok"}}]}"#;
    let server = LoopbackServer::start(1, "HTTP/1.1 200 OK", response);

    let var = "LLMLAB_TEST_API_KEY";
    std::env::set_var(var, "sk-test-123");
    let mut model = ModelSpec::http_chat("auth-model", server.base_url.clone());
    model.api_key_env = Some(var.to_string());

    let completion = complete(
        &model,
        &[Message::user("hello")],
        &GenerationParams::default(),
    )
    .unwrap();
    // usage absent from the response: estimated instead
    assert_eq!(completion.usage.completion_tokens, 1);

    let request = server.next_request();
    assert!(request.head.contains("authorization: Bearer sk-test-123")
        || request.head.contains("Authorization: Bearer sk-test-123"));
}

#[test]
fn http_chat_missing_key_env_is_config_error() {
    let mut model = ModelSpec::http_chat("m", "http://127.0.0.1:9");
    model.api_key_env = Some("LLMLAB_SURELY_UNSET_VAR_12345".to_string());
    let err = complete(
        &model,
        &[Message::user("x")],
        &GenerationParams::default(),
    )
    .unwrap_err();
    assert!(matches!(err, llmlab_core::Error::Config(_)));
}

#[test]
fn http_chat_non_2xx_carries_status_and_excerpt() {
    let server = LoopbackServer::start(1, "HTTP/1.1 500 Internal Server Error", "backend on fire");
    let model = ModelSpec::http_chat("m", server.base_url.clone());
    let err = complete(
        &model,
        &[Message::user("x")],
        &GenerationParams::default(),
    )
    .unwrap_err();
    match err {
        llmlab_core::Error::Backend { status, excerpt } => {
            assert_eq!(status, 500);
            assert!(excerpt.contains("backend on fire"));
        }
        other => panic!("expected backend error, got {other}"),
    }
}

#[test]
fn http_chat_malformed_body_is_backend_error() {
    let server = LoopbackServer::start(1, "HTTP/1.1 200 OK", "not json at all");
    let model = ModelSpec::http_chat("m", server.base_url.clone());
    let err = complete(
        &model,
        &[Message::user("x")],
        &GenerationParams::default(),
    )
    .unwrap_err();
    assert!(matches!(err, llmlab_core::Error::Backend { status: 200, .. }));
}

#[test]
fn load_url_live_against_loopback() {
    let server = LoopbackServer::start(1, "HTTP/1.1 200 OK", "ok");
    let url = format!("{}/page", server.base_url);
    let doc = load_url_live(&url).unwrap();
    assert_eq!(doc.content, "ok");
    assert_eq!(doc.source, url);
}

#[test]
fn api_tool_live_matches_fixture_extraction() {
    let body = r#"{"reputation":"clean","score":0}"#;

    // live: serve the body from loopback
    let server = LoopbackServer::start(1, "HTTP/1.1 200 OK", body);
    let live_spec = ApiToolSpec {
        name: "ip_reputation".into(),
        url_template: format!("{}/ip/{{query}}", server.base_url),
        header_env: None,
        extract: vec!["reputation".into(), "score".into()],
        mode: ApiMode::Live,
    };
    let live_out = api_tool_call(&live_spec, "8.8.8.8").unwrap();

    // fixture: identical body keyed by the same query
    let dir = tempfile::tempdir().unwrap();
    let fixture_path = dir.path().join("f.json");
    std::fs::write(&fixture_path, format!(r#"{{"8.8.8.8": {body}}}"#)).unwrap();
    let fixture_spec = ApiToolSpec {
        mode: ApiMode::Fixture(fixture_path),
        ..live_spec
    };
    let fixture_out = api_tool_call(&fixture_spec, "8.8.8.8").unwrap();

    assert_eq!(live_out, fixture_out);
    assert_eq!(live_out, "reputation: clean\nscore: 0");
}

#[test]
fn api_tool_live_percent_encodes_query() {
    let server = LoopbackServer::start(1, "HTTP/1.1 200 OK", r#"{"ok":true}"#);
    let spec = ApiToolSpec {
        name: "dns_records".into(),
        url_template: format!("{}/resolve?name={{query}}", server.base_url),
        header_env: None,
        extract: vec!["ok".into()],
        mode: ApiMode::Live,
    };
    api_tool_call(&spec, "a b/c").unwrap();
    let request = server.next_request();
    assert!(request.head.contains("/resolve?name=a%20b%2Fc"));
}
