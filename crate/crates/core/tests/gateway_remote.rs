//! Remote subject against a scripted local HTTP server.

mod common;

use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::sync::{Arc, Mutex};
use std::thread;

use algoeval::gateway::{GatewayError, RemoteConfig, RemoteSubject, RetryPolicy, Subject, SubjectConfig};
use algoeval::prompting::{build_generation_prompt, build_solve_prompt};
use algoeval::runner;
use algoeval::{Error, Payload, ProblemInstance, Split, TaskId};

struct Reply {
    status: u16,
    headers: &'static str,
    body: String,
}

fn ok(content: &str) -> Reply {
    let body = serde_json::json!({
        "choices": [{"message": {"role": "assistant", "content": content}}],
        "usage": {"prompt_tokens": 12, "completion_tokens": 7}
    });
    Reply { status: 200, headers: "", body: body.to_string() }
}

fn status(code: u16) -> Reply {
    Reply { status: code, headers: "", body: "{}".into() }
}

/// Serves `replies` in order, one per connection, recording raw requests.
fn serve(replies: Vec<Reply>) -> (String, Arc<Mutex<Vec<String>>>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}/v1/chat/completions", listener.local_addr().unwrap());
    let seen = Arc::new(Mutex::new(Vec::new()));
    let log = Arc::clone(&seen);
    thread::spawn(move || {
        for reply in replies {
            let (stream, _) = listener.accept().unwrap();
            let mut reader = BufReader::new(stream);
            let mut head = String::new();
            let mut length = 0;
            loop {
                let mut line = String::new();
                reader.read_line(&mut line).unwrap();
                if let Some(v) = line.to_ascii_lowercase().strip_prefix("content-length:") {
                    length = v.trim().parse().unwrap();
                }
                head.push_str(&line);
                if line == "\r\n" || line.is_empty() {
                    break;
                }
            }
            let mut body = vec![0; length];
            reader.read_exact(&mut body).unwrap();
            log.lock().unwrap().push(head + &String::from_utf8(body).unwrap());
            let mut stream = reader.into_inner();
            let text = format!(
                "HTTP/1.1 {} X\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n{}\r\n{}",
                reply.status,
                reply.body.len(),
                reply.headers,
                reply.body
            );
            stream.write_all(text.as_bytes()).unwrap();
        }
    });
    (url, seen)
}

fn config(endpoint: &str) -> RemoteConfig {
    RemoteConfig {
        id: "mock".into(),
        endpoint: endpoint.into(),
        model: "mock-model".into(),
        api_key_env: None,
        solve_temperature: 0.0,
        generate_temperature: 1.0,
        max_tokens: 256,
        timeout_secs: 5,
        concurrency: 2,
        retry: RetryPolicy { max_attempts: 4, initial_backoff_ms: 1, multiplier: 2.0, max_backoff_ms: 10 },
    }
}

fn solve_prompt() -> algoeval::prompting::PromptRequest {
    let x = ProblemInstance::new(TaskId::FindMaximum, Split::Id, Payload::NumberList { list: vec![74, 29, 63, 40, 88] });
    build_solve_prompt(TaskId::FindMaximum.spec(), &x)
}

#[test]
fn retries_server_errors_then_succeeds() {
    let (url, seen) = serve(vec![status(503), status(503), ok("The answer is 88")]);
    let subject = RemoteSubject::new(config(&url)).unwrap();
    let rec = subject.complete(&solve_prompt()).unwrap();
    assert_eq!(rec.attempts, 3);
    assert_eq!(rec.response, "The answer is 88");
    assert_eq!(rec.usage.unwrap().completion_tokens, 7);
    let requests = seen.lock().unwrap();
    assert_eq!(requests.len(), 3);
    let body = requests[0].split("\r\n\r\n").nth(1).unwrap();
    let json: serde_json::Value = serde_json::from_str(body).unwrap();
    assert_eq!(json["model"], "mock-model");
    assert_eq!(json["temperature"], 0.0);
    assert_eq!(json["messages"][0]["role"], "user");
    assert!(json["messages"][0]["content"].as_str().unwrap().ends_with("Let's think step by step."));
}

#[test]
fn rate_limit_honors_retry_after() {
    let limited = Reply { status: 429, headers: "Retry-After: 0\r\n", body: "{}".into() };
    let (url, _) = serve(vec![limited, ok("The answer is 1")]);
    let subject = RemoteSubject::new(config(&url)).unwrap();
    let rec = subject.complete(&solve_prompt()).unwrap();
    assert_eq!(rec.attempts, 2);
}

#[test]
fn generation_prompts_use_sampling_temperature() {
    let (url, seen) = serve(vec![ok("[1, 2, 3]")]);
    let subject = RemoteSubject::new(config(&url)).unwrap();
    subject.complete(&build_generation_prompt(TaskId::SortNumbers.spec())).unwrap();
    let req = seen.lock().unwrap()[0].clone();
    let json: serde_json::Value = serde_json::from_str(req.split("\r\n\r\n").nth(1).unwrap()).unwrap();
    assert_eq!(json["temperature"], 1.0);
}

#[test]
fn client_errors_are_not_retried() {
    let (url, seen) = serve(vec![status(400)]);
    let subject = RemoteSubject::new(config(&url)).unwrap();
    let err = subject.complete(&solve_prompt()).unwrap_err();
    assert_eq!(err, GatewayError::Transport { attempts: 1, status: Some(400), message: "Bad Request".into() });
    assert_eq!(seen.lock().unwrap().len(), 1);
}

#[test]
fn malformed_payload_is_a_protocol_error() {
    let (url, _) = serve(vec![Reply { status: 200, headers: "", body: "{\"choices\": []}".into() }]);
    let subject = RemoteSubject::new(config(&url)).unwrap();
    assert!(matches!(subject.complete(&solve_prompt()), Err(GatewayError::Protocol(_))));
}

#[test]
fn exhausted_retries_report_last_status() {
    let (url, _) = serve((0..4).map(|_| status(502)).collect());
    let subject = RemoteSubject::new(config(&url)).unwrap();
    let err = subject.complete(&solve_prompt()).unwrap_err();
    assert!(matches!(err, GatewayError::Transport { attempts: 4, status: Some(502), .. }), "{err:?}");
}

#[test]
fn bearer_token_comes_from_the_environment() {
    let mut cfg = config("http://127.0.0.1:9/");
    cfg.api_key_env = Some("ALGOEVAL_TEST_KEY_UNSET".into());
    assert!(matches!(RemoteSubject::new(cfg.clone()), Err(GatewayError::Config(_))));

    let (url, seen) = serve(vec![ok("The answer is 88")]);
    cfg.endpoint = url;
    cfg.api_key_env = Some("ALGOEVAL_TEST_KEY".into());
    std::env::set_var("ALGOEVAL_TEST_KEY", "secret-token-123");
    let subject = RemoteSubject::new(cfg).unwrap();
    subject.complete(&solve_prompt()).unwrap();
    assert!(seen.lock().unwrap()[0].to_ascii_lowercase().contains("authorization: bearer secret-token-123"));
}

#[test]
fn unreachable_subject_fails_synthesis_without_splits() {
    // bind then drop to get a port with no listener
    let port = TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = common::synthetic_config(dir.path(), 1, vec![]);
    let mut remote = config(&format!("http://127.0.0.1:{port}/v1/chat/completions"));
    remote.retry.max_attempts = 2;
    cfg.subjects = vec![SubjectConfig::Remote(remote)];
    cfg.tasks = Some(vec![TaskId::FindMaximum]);
    let err = runner::cmd_synthesize(&cfg).unwrap_err();
    assert!(matches!(err, Error::Gateway(GatewayError::Transport { .. })), "{err}");
    assert_eq!(err.exit_code(), 3);
    assert!(!dir.path().join("mock/splits").exists());
    let manifest = std::fs::read_to_string(dir.path().join("manifest.json")).unwrap();
    assert!(manifest.contains("\"stage\": \"synthesize/mock\""));
}
