//! Preview the effect of reorganizing groups before committing it.
//!
//! Creates a Yankees group, moves Bob and Taylor out of PistonFans, and
//! prints every verdict on Nina's content that would change.

use pvn::lang;
use pvn::{apply_batch, diff_visibility, whatif};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let before = lang::load(include_str!("../fixtures/fig1.pvn"))?.snapshot;
    let doc = lang::parse(include_str!("../fixtures/reassign.pvn"))?;
    let mutations: Vec<_> = lang::mutations_from_document(&doc)?
        .into_iter()
        .map(|(_, m)| m)
        .collect();

    let preview = whatif(&before, &mutations, "Nina")?;
    println!(
        "version {} -> {}",
        preview.before_version, preview.after_version
    );
    for entry in &preview.entries {
        println!("  {entry}");
    }

    // Nothing changed yet; committing produces a new snapshot and leaves the
    // old one intact.
    let after = apply_batch(&before, &mutations)?;
    assert_eq!(diff_visibility(&before, &after, "Nina")?, preview);
    println!("committed version {}", after.version());
    println!("old snapshot still has {} members", before.member_count());

    // Batches are atomic: the bad join aborts the whole batch.
    let bad = lang::mutations_from_document(&lang::parse("create group X; join Nobody X;")?)?;
    let bad: Vec<_> = bad.into_iter().map(|(_, m)| m).collect();
    match apply_batch(&before, &bad) {
        Ok(_) => unreachable!(),
        Err(e) => println!("rejected: {e}"),
    }
    assert!(before.group_id("X").is_none());
    Ok(())
}
