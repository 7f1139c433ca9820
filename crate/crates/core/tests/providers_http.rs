use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::sync::{Arc, Mutex};
use std::thread;

use hotkit_core::provider::http::{HttpChatModel, HttpEmbedder};
use hotkit_core::provider::{ChatMessage, ChatModel, Embedder, ProviderConfig};
use hotkit_core::{Error, ProviderError};
use serde_json::Value;

/// Serves canned `(status, body)` responses in order, one per connection,
/// recording each request body.
fn serve(responses: Vec<(u16, String)>) -> (String, Arc<Mutex<Vec<Value>>>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    let seen = Arc::new(Mutex::new(Vec::new()));
    let log = Arc::clone(&seen);
    thread::spawn(move || {
        for (status, body) in responses {
            let (stream, _) = listener.accept().unwrap();
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut len = 0;
            loop {
                let mut line = String::new();
                reader.read_line(&mut line).unwrap();
                if line == "\r\n" || line.is_empty() {
                    break;
                }
                let lower = line.to_ascii_lowercase();
                if let Some(v) = lower.strip_prefix("content-length:") {
                    len = v.trim().parse().unwrap();
                }
            }
            let mut buf = vec![0; len];
            reader.read_exact(&mut buf).unwrap();
            log.lock()
                .unwrap()
                .push(serde_json::from_slice(&buf).unwrap());
            let mut stream = stream;
            write!(
                stream,
                "HTTP/1.1 {status} X\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                body.len()
            )
            .unwrap();
        }
    });
    (format!("http://{addr}/v1/chat/completions"), seen)
}

fn config(endpoint: String) -> ProviderConfig {
    let mut c = ProviderConfig::new(endpoint, "test-model");
    c.timeout_secs = 5;
    c
}

#[test]
fn chat_reads_openai_shape_and_sends_messages() {
    let (url, seen) = serve(vec![(
        200,
        r#"{"choices":[{"message":{"role":"assistant","content":"[\"a\"]"}}]}"#.into(),
    )]);
    let chat = HttpChatModel::new(config(url)).unwrap();
    let out = chat.complete(&[ChatMessage::user("hi")]).unwrap();
    assert_eq!(out, r#"["a"]"#);
    let req = &seen.lock().unwrap()[0];
    assert_eq!(req["model"], "test-model");
    assert_eq!(req["messages"][0]["content"], "hi");
    assert_eq!(req["temperature"], 0.0);
}

#[test]
fn chat_retries_server_errors() {
    let (url, seen) = serve(vec![
        (503, "{}".into()),
        (200, r#"{"message":{"content":"ok"}}"#.into()),
    ]);
    let chat = HttpChatModel::new(config(url)).unwrap();
    assert_eq!(chat.complete(&[ChatMessage::user("x")]).unwrap(), "ok");
    assert_eq!(seen.lock().unwrap().len(), 2);
}

#[test]
fn client_errors_are_not_retried() {
    let (url, _) = serve(vec![(400, r#"{"error":"bad"}"#.into())]);
    let chat = HttpChatModel::new(config(url)).unwrap();
    let err = chat.complete(&[ChatMessage::user("x")]).unwrap_err();
    assert!(
        matches!(err, ProviderError::Transport(ref m) if m.contains("400")),
        "{err}"
    );
}

#[test]
fn embedder_checks_vector_count() {
    let (url, _) = serve(vec![
        (200, r#"{"vectors":[[1.0,0.0],[0.0,1.0]]}"#.into()),
        (200, r#"{"vectors":[[1.0,0.0]]}"#.into()),
    ]);
    let emb = HttpEmbedder::new(config(url)).unwrap();
    let inputs = vec!["a".to_owned(), "b".to_owned()];
    assert_eq!(emb.embed(&inputs).unwrap().len(), 2);
    assert!(matches!(
        emb.embed(&inputs),
        Err(ProviderError::Response(_))
    ));
}

#[test]
fn unreachable_endpoint_is_transport_error() {
    let port = TcpListener::bind("127.0.0.1:0")
        .unwrap()
        .local_addr()
        .unwrap()
        .port();
    let mut c = config(format!("http://127.0.0.1:{port}/x"));
    c.max_retries = 0;
    let chat = HttpChatModel::new(c).unwrap();
    assert!(matches!(
        chat.complete(&[ChatMessage::user("x")]),
        Err(ProviderError::Transport(_))
    ));
}

#[test]
fn missing_credential_is_reported() {
    let mut c = config("http://127.0.0.1:9/x".into());
    c.api_key_env = Some("HOTKIT_TEST_SURELY_UNSET_KEY".into());
    assert!(matches!(
        HttpChatModel::new(c),
        Err(Error::Provider {
            source: ProviderError::MissingCredential(_),
            ..
        })
    ));
}
