//! The owner's conflict protocol decides what happens when one derivation
//! path grants and another denies.
//!
//! JJ belongs to both UMichStudents (granted everything) and PistonFans,
//! which inherits the Michiganders denial. Optimistic owners let the grant
//! win; pessimistic owners let the denial win.

use pvn::{visible_set, Protocol};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let optimistic = pvn::lang::load(include_str!("../fixtures/fig1.pvn"))?.snapshot;
    let nina = optimistic.member_by_name("Nina")?;
    let jj = optimistic.member_by_name("JJ")?;
    let pessimistic = optimistic.set_default_protocol(nina, Protocol::Pessimistic)?;

    for (label, snap) in [("optimistic", &optimistic), ("pessimistic", &pessimistic)] {
        let seen = visible_set(snap, jj, nina)?;
        println!("{label}:");
        for c in snap.contents_of(nina) {
            let mark = if seen.contains(&c) { "+" } else { "-" };
            println!("  {mark} {}", snap.content_path(c).unwrap());
        }
    }

    // A single rule can opt out of the owner default.
    let text = "policy Nina default pessimistic { allow UMichStudents:/Everything [optimistic]; }";
    let mixed = pvn::lang::load_onto(&optimistic, text)?.snapshot;
    let phone = mixed.resolve_path(nina, "/Everything/PersonalInfo/Phone")?;
    println!(
        "pessimistic owner, optimistic student rule: JJ sees phone = {}",
        pvn::resolve(&mixed, jj, nina, phone)?.verdict
    );
    Ok(())
}
