//! Full run against a synthetic subject with a planted critical level, then
//! prints the per-level scores and the recovered critical complexity.

use algoeval::gateway::{MemorizationProfile, SubjectConfig, SyntheticConfig};
use algoeval::metrics::to_f64;
use algoeval::runner::{report_all, RunConfig};
use algoeval::ComplexityInterval;

fn main() -> algoeval::Result<()> {
    let dir = std::env::temp_dir().join("algoeval-valley-example");
    let _ = std::fs::remove_dir_all(&dir);
    let planted = ComplexityInterval::ANCHOR_LEVELS[3];
    let mut cfg = RunConfig::new(&dir, 5);
    cfg.desk_scale = true;
    cfg.subjects = vec![SubjectConfig::Synthetic(SyntheticConfig::new("valley", MemorizationProfile::valley(planted, 8)))];

    let summary = report_all(&cfg)?;
    let report = &summary.reports[0];
    for l in &report.levels {
        println!("{:<16} id {:.3}  ood {:.3}  gap {:.3}", l.level.to_string(), to_f64(l.a_id), to_f64(l.a_ood), to_f64(l.gap));
    }
    println!("planted {planted}, recovered {}", report.critical);
    println!("reports in {}", dir.join("reports").display());
    Ok(())
}
