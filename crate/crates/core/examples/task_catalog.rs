//! Lists the task catalog grouped by anchor level.

use algoeval::catalog::{list_tasks, tasks_for_level};
use algoeval::{ComplexityInterval, TaskRole};

fn main() -> algoeval::Result<()> {
    for level in ComplexityInterval::ANCHOR_LEVELS {
        println!("{level}");
        for spec in tasks_for_level(level)? {
            println!("  {:<32} {}", spec.id.as_str(), spec.title);
        }
    }
    println!("probes");
    for spec in list_tasks(Some(TaskRole::Probe)) {
        println!("  {:<32} {}", spec.id.as_str(), spec.complexity);
    }
    Ok(())
}
