//! Resolve visibility over a generated network of ten thousand members.
//!
//! ```text
//! cargo run --release --example large_network [SEED]
//! ```

use std::time::Instant;

use pvn::synth::{random_network, Shape};
use pvn::Resolver;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(42u64);
    let shape = Shape {
        members: 10_000,
        groups: 200,
        user_groups: 0,
        max_depth: 6,
        max_parents: 3,
        root_chance: 0.1,
        owners: 1,
        contents: 100,
        assignments: 1_000,
        max_memberships: 4,
        member_subject_chance: 0.1,
    };
    let t = Instant::now();
    let net = random_network(&shape, seed);
    println!(
        "built {} members, {} groups, {} assignments in {:?}",
        net.member_count(),
        net.group_count(),
        net.assignment_count(),
        t.elapsed()
    );

    let owner = net.member_by_name("M0")?;
    let t = Instant::now();
    let resolver = Resolver::new(&net, owner)?;
    let mut visible = 0;
    for viewer in net.members().take(1_000) {
        visible += resolver.visible_set(viewer)?.len();
    }
    println!(
        "visible sets for 1000 viewers: {visible} visible nodes in total, {:?}",
        t.elapsed()
    );
    Ok(())
}
