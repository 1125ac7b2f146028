//! Trace a verdict back to the derivation paths and assignments behind it.

use pvn::{explain, resolve, PathNode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let net = pvn::lang::load(include_str!("../fixtures/fig1.pvn"))?.snapshot;
    let nina = net.member_by_name("Nina")?;
    let phone = net.resolve_path(nina, "/Everything/PersonalInfo/Phone")?;

    for viewer in ["JJ", "Taylor", "Sue", "Nina"] {
        let v = net.member_by_name(viewer)?;
        let trace = explain(&net, v, nina, phone)?;
        println!("{viewer}:");
        for p in &trace.paths {
            let names: Vec<&str> = p
                .path
                .iter()
                .map(|&n| match n {
                    PathNode::Group(g) => net.group_name(g).unwrap(),
                    PathNode::Member(m) => net.member_name(m).unwrap(),
                })
                .collect();
            let by = p.winner.map_or(String::new(), |w| {
                format!(
                    " by {}:{} ({})",
                    net.subject_name(w.assignment.subject),
                    net.content_path(w.assignment.content).unwrap(),
                    w.protocol
                )
            });
            println!("  {} -> {}{by}", names.join(" > "), p.mode().as_str());
        }
        println!("  {} => {}", trace.combination.as_str(), trace.verdict);
        // the pruned resolver agrees without enumerating paths
        assert_eq!(resolve(&net, v, nina, phone)?.verdict, trace.verdict);
    }
    Ok(())
}
