//! Members can keep their own group hierarchy. It only affects their own
//! content, and other owners' rules never see it.
//!
//! This example builds everything through the typed API instead of the
//! policy language.

use pvn::{visible_set, Assignment, Mode, NetworkSnapshot, Subject};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut d = NetworkSnapshot::new().edit();
    let ana = d.add_member("Ana")?;
    let ben = d.add_member("Ben")?;
    let cy = d.add_member("Cy")?;
    let family = d.add_group("Family", &[], Some(ana))?;
    let kids = d.add_group("Kids", &[family], Some(ana))?;
    d.set_membership(ben, family, true)?;
    d.set_membership(cy, kids, true)?;

    let root = d.root_of(ana).unwrap();
    let album = d.add_content(ana, root, "Album")?;
    let diary = d.add_content(ana, root, "Diary")?;
    d.set_assignment(Assignment::new(
        ana,
        Subject::Group(family),
        album,
        Mode::Visible,
    ))?;
    d.set_assignment(Assignment::new(
        ana,
        Subject::Group(kids),
        album,
        Mode::Invisible,
    ))?;
    d.set_assignment(Assignment::new(
        ana,
        Subject::Member(cy),
        diary,
        Mode::Visible,
    ))?;
    let net = d.commit();

    for (name, m) in [("Ben", ben), ("Cy", cy)] {
        let seen: Vec<String> = visible_set(&net, m, ana)?
            .into_iter()
            .filter_map(|c| net.content_path(c))
            .collect();
        println!("{name} sees {seen:?}");
    }

    // Ben cannot use Ana's circle in his own policy.
    let ben_root = net.root_of(ben).unwrap();
    let err = net
        .set_assignment(Assignment::new(
            ben,
            Subject::Group(family),
            ben_root,
            Mode::Visible,
        ))
        .unwrap_err();
    println!("Ben's rule rejected: {err}");
    Ok(())
}
