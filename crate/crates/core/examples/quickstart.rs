//! Load a small network from policy text and ask who sees what.
//!
//! ```text
//! cargo run --example quickstart
//! ```

use pvn::lang::{self, Answer};
use pvn::{audience, visible_set};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let bound = lang::load(include_str!("../fixtures/fig1.pvn"))?;
    let net = &bound.snapshot;
    let nina = net.member_by_name("Nina")?;

    println!("What each member sees of Nina's content:");
    for viewer in net.members() {
        let seen = visible_set(net, viewer, nina)?;
        let paths: Vec<String> = seen.iter().filter_map(|&c| net.content_path(c)).collect();
        println!(
            "  {:7} {}",
            net.member_name(viewer).unwrap(),
            paths.join(" ")
        );
    }

    let phone = net.resolve_path(nina, "/Everything/PersonalInfo/Phone")?;
    let names: Vec<&str> = audience(net, nina, phone)?
        .into_iter()
        .filter_map(|m| net.member_name(m))
        .collect();
    println!("Audience of the phone number: {}", names.join(", "));

    // Queries can also be written in the policy language and run against
    // the loaded snapshot.
    let q = lang::load_onto(net, "can Sue see Nina:/Everything/Blog;")?;
    for query in &q.queries {
        if let Answer::Verdict(trace) = query.run()? {
            println!("Sue reads the blog: {}", trace.verdict);
        }
    }
    Ok(())
}
