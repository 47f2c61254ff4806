//! Harvests an ID corpus from a synthetic subject and builds disjoint ID and
//! OOD splits for one task.

use std::collections::BTreeSet;

use algoeval::gateway::{MemorizationProfile, SyntheticConfig, SyntheticSubject};
use algoeval::synthesis::{synthesize_task, SynthesisConfig};
use algoeval::TaskId;

fn main() -> algoeval::Result<()> {
    let subject = SyntheticSubject::new(SyntheticConfig::new("demo", MemorizationProfile::flat(0.9, 1)))?;
    let out = synthesize_task(&subject, TaskId::TwoSum.spec(), &SynthesisConfig::desk(7))?;
    let stats = &out.harvest.stats;
    println!("harvest: {} requests, {} parsed, {} skipped", stats.requests, stats.parsed, stats.skipped);

    let id_set = out.distribution.id_set();
    println!("ID element set: {} of {} distinct elements", id_set.len(), out.distribution.counts.len());
    let ood: BTreeSet<u64> = out.ood.instances.iter().flat_map(|x| x.elements()).collect();
    println!("OOD elements overlapping the ID set: {}", ood.intersection(&id_set).count());
    for x in out.id.instances.iter().take(2).chain(out.ood.instances.iter().take(2)) {
        println!("{:?} {:?}", x.split, x.payload);
    }
    Ok(())
}
