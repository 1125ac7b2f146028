//! Parse, print and re-parse policy documents, and show what syntax and
//! binding errors look like.

use pvn::lang::{self, LoadError};

const SRC: &str = "\
# two groups and a private circle
group Staff;
group Admins < Staff;
member Ana in Admins;
member Ben in Staff;
member Cy;
group Close owner Ana;
join Cy Close;
content Ana { Everything { Notes { Draft; } Photos; } }
policy Ana default pessimistic {
  allow Staff:/Everything/Notes;
  deny Admins:/Everything/Notes/Draft [optimistic];
  allow Close:/Everything/Photos;
}
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let doc = lang::parse(SRC)?;
    let printed = lang::print_document(&doc);
    assert_eq!(lang::parse(&printed)?, doc);
    println!("--- document, canonical form ---\n{printed}");

    let snap = lang::load(SRC)?.snapshot;
    println!(
        "--- snapshot, canonical form ---\n{}",
        lang::print_snapshot(&snap)
    );

    for bad in [
        "group Staff\nmember Ana;",
        "member Ana;\npolicy Ana { allow Ghosts:/Everything; }",
        "group A < B;",
    ] {
        match lang::load(bad) {
            Err(LoadError::Syntax(e)) => println!("syntax: {e}"),
            Err(LoadError::Bind(e)) => println!("bind:   {e}"),
            Ok(_) => println!("accepted: {bad}"),
        }
    }
    Ok(())
}
