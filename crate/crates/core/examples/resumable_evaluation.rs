//! Evaluates in small installments, as if the process were interrupted, then
//! shows that rerunning picks up where it stopped.

use algoeval::gateway::{MemorizationProfile, SubjectConfig, SyntheticConfig};
use algoeval::runner::{cmd_evaluate, cmd_synthesize, report_all, EvaluateOptions, RunConfig};

fn main() -> algoeval::Result<()> {
    let dir = std::env::temp_dir().join("algoeval-resume-example");
    let _ = std::fs::remove_dir_all(&dir);
    let mut cfg = RunConfig::new(&dir, 2);
    cfg.desk_scale = true;
    cfg.subjects = vec![SubjectConfig::Synthetic(SyntheticConfig::new("s", MemorizationProfile::flat(0.7, 3)))];

    cmd_synthesize(&cfg)?;
    let opts = EvaluateOptions { max_new_records: Some(400) };
    loop {
        let n = cmd_evaluate(&cfg, opts)?;
        if n == 0 {
            break;
        }
        println!("appended {n} records");
    }
    // everything is already on disk, so this only scores
    let summary = report_all(&cfg)?;
    println!("critical complexity {}", summary.reports[0].critical);
    Ok(())
}
