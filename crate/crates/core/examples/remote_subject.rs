//! Sends one solve prompt to an OpenAI-compatible endpoint.
//!
//! ALGOEVAL_ENDPOINT and ALGOEVAL_MODEL select the server; the bearer token
//! is read from ALGOEVAL_API_KEY when set.

use algoeval::gateway::{RemoteConfig, RemoteSubject, Subject};
use algoeval::prompting::{build_solve_prompt, extract_final_answer};
use algoeval::{Payload, ProblemInstance, Split, TaskId};

fn main() {
    let Ok(endpoint) = std::env::var("ALGOEVAL_ENDPOINT") else {
        eprintln!("set ALGOEVAL_ENDPOINT (and optionally ALGOEVAL_MODEL, ALGOEVAL_API_KEY)");
        return;
    };
    let mut cfg = RemoteConfig::new("remote", endpoint, std::env::var("ALGOEVAL_MODEL").unwrap_or("gpt-4o".into()));
    if std::env::var_os("ALGOEVAL_API_KEY").is_some() {
        cfg.api_key_env = Some("ALGOEVAL_API_KEY".into());
    }
    let subject = match RemoteSubject::new(cfg) {
        Ok(s) => s,
        Err(e) => return eprintln!("{e}"),
    };
    let x = ProblemInstance::new(TaskId::SortNumbers, Split::Id, Payload::NumberList { list: vec![9, 3, 7, 1] });
    match subject.complete(&build_solve_prompt(x.task.spec(), &x)) {
        Ok(rec) => {
            println!("{} attempts, {} ms", rec.attempts, rec.latency_ms);
            println!("{:?}", extract_final_answer(&rec.response, x.task.spec()).answer);
        }
        Err(e) => eprintln!("{e}"),
    }
}
