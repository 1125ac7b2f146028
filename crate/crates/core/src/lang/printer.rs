use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use super::ast::*;
use crate::model::{GroupId, Hierarchy, MemberId, Network};
use crate::store::Protocol;

const INDENT: &str = "  ";

/// Formats a document statement by statement, keeping statement order.
pub fn print_document(doc: &Document) -> String {
    let mut out = String::new();
    for s in &doc.statements {
        print_statement(&mut out, &s.node);
    }
    out
}

pub fn print_statement(out: &mut String, stmt: &Statement) {
    match stmt {
        Statement::Group(g) => print_group(out, g),
        Statement::Member(m) => print_member(out, m),
        Statement::Content(c) => print_content(out, c),
        Statement::Policy(p) => print_policy(out, p),
        Statement::Query(q) => {
            print_query(out, q);
            out.push('\n');
        }
        Statement::WhatIf(w) => {
            out.push_str("whatif {\n");
            for m in &w.mutations {
                out.push_str(INDENT);
                print_mutation(out, &m.node);
                out.push_str(";\n");
            }
            let _ = writeln!(out, "}} diff {};", w.owner);
        }
        Statement::Mutation(m) => {
            print_mutation(out, m);
            out.push_str(";\n");
        }
    }
}

fn print_group(out: &mut String, g: &GroupDecl) {
    out.push_str("group ");
    out.push_str(&g.name);
    if !g.parents.is_empty() {
        let _ = write!(out, " < {}", g.parents.join(", "));
    }
    if let Some(o) = &g.owner {
        let _ = write!(out, " owner {o}");
    }
    out.push_str(";\n");
}

fn print_member(out: &mut String, m: &MemberDecl) {
    out.push_str("member ");
    out.push_str(&m.name);
    if !m.groups.is_empty() {
        let _ = write!(out, " in {}", m.groups.join(", "));
    }
    out.push_str(";\n");
}

fn print_tree(out: &mut String, node: &ContentNode, depth: usize) {
    for _ in 0..depth {
        out.push_str(INDENT);
    }
    out.push_str(&node.name);
    match &node.children {
        None => out.push_str(";\n"),
        Some(kids) if kids.is_empty() => out.push_str(" {}\n"),
        Some(kids) => {
            out.push_str(" {\n");
            for k in kids {
                print_tree(out, k, depth + 1);
            }
            for _ in 0..depth {
                out.push_str(INDENT);
            }
            out.push_str("}\n");
        }
    }
}

fn print_content(out: &mut String, c: &ContentDecl) {
    let _ = writeln!(out, "content {} {{", c.owner);
    print_tree(out, &c.root, 1);
    out.push_str("}\n");
}

fn print_policy(out: &mut String, p: &PolicyBlock) {
    let _ = write!(out, "policy {}", p.owner);
    if let Some(d) = p.default {
        let _ = write!(out, " default {}", d.as_str());
    }
    if p.rules.is_empty() {
        out.push_str(" {}\n");
        return;
    }
    out.push_str(" {\n");
    for r in &p.rules {
        let r = &r.node;
        let _ = write!(
            out,
            "{INDENT}{} {}:{}",
            r.effect.as_str(),
            r.subject,
            r.path
        );
        if let Some(p) = r.protocol {
            let _ = write!(out, " [{}]", p.as_str());
        }
        out.push_str(";\n");
    }
    out.push_str("}\n");
}

fn print_query(out: &mut String, q: &Query) {
    let _ = match q {
        Query::Can {
            viewer,
            owner,
            path,
        } => write!(out, "can {viewer} see {owner}:{path};"),
        Query::Show { viewer, owner } => write!(out, "show {viewer} for {owner};"),
        Query::Audience { owner, path } => write!(out, "audience {owner}:{path};"),
        Query::Explain {
            viewer,
            owner,
            path,
        } => write!(out, "explain {viewer} see {owner}:{path};"),
    };
}

pub fn print_mutation(out: &mut String, m: &MutationStmt) {
    let _ = match m {
        MutationStmt::AddMember { name } => write!(out, "add member {name}"),
        MutationStmt::CreateGroup { name, parent } => match parent {
            Some(p) => write!(out, "create group {name} < {p}"),
            None => write!(out, "create group {name}"),
        },
        MutationStmt::DeleteGroup { name } => write!(out, "delete group {name}"),
        MutationStmt::Join { member, group } => write!(out, "join {member} {group}"),
        MutationStmt::Leave { member, group } => write!(out, "leave {member} {group}"),
        MutationStmt::Move { member, to } => write!(out, "move {member} to {to}"),
        MutationStmt::AddContent { owner, path } => write!(out, "add content {owner}:{path}"),
        MutationStmt::RemoveContent { owner, path } => {
            write!(out, "remove content {owner}:{path}")
        }
    };
}

/// Groups of one hierarchy, parents before children, ties by name.
fn topo_groups(net: &Network, hierarchy: Hierarchy) -> Vec<GroupId> {
    let members: BTreeSet<GroupId> = net
        .groups()
        .filter(|&g| g != GroupId::ALL && net.group_hierarchy(g) == Some(hierarchy))
        .collect();
    let mut pending: BTreeMap<GroupId, usize> = members
        .iter()
        .map(|&g| {
            let n = net
                .declared_parents(g)
                .map_or(0, |ps| ps.iter().filter(|p| members.contains(p)).count());
            (g, n)
        })
        .collect();
    let children = net.group_children();
    let mut ready: BTreeSet<(String, GroupId)> = pending
        .iter()
        .filter(|(_, &n)| n == 0)
        .map(|(&g, _)| (net.group_name(g).unwrap().to_string(), g))
        .collect();
    let mut order = Vec::new();
    while let Some(first) = ready.pop_first() {
        let g = first.1;
        order.push(g);
        for &c in &children[g.index()] {
            if let Some(n) = pending.get_mut(&c) {
                if net.declared_parents(c).is_some_and(|ps| ps.contains(&g)) {
                    *n -= 1;
                    if *n == 0 {
                        ready.insert((net.group_name(c).unwrap().to_string(), c));
                    }
                }
            }
        }
    }
    order
}

fn sorted_names(net: &Network, groups: impl Iterator<Item = GroupId>) -> Vec<String> {
    let mut v: Vec<String> = groups
        .map(|g| net.group_name(g).unwrap().to_string())
        .collect();
    v.sort();
    v
}

fn tree_node(net: &Network, id: crate::model::ContentId) -> ContentNode {
    let kids: Vec<ContentNode> = net
        .content_children(id)
        .map(|c| tree_node(net, c))
        .collect();
    ContentNode {
        name: net.content_name(id).unwrap().to_string(),
        children: (!kids.is_empty()).then_some(kids),
    }
}

/// Canonical text of a snapshot: system groups, members, private groups
/// and their memberships, content trees, then policies. Reading it back
/// reproduces the same structure and assignments.
pub fn print_snapshot(net: &Network) -> String {
    let mut doc = Document::default();
    let mut push = |s: Statement| doc.statements.push(Spanned::new(s, Loc::default()));

    for g in topo_groups(net, Hierarchy::System) {
        push(Statement::Group(GroupDecl {
            name: net.group_name(g).unwrap().to_string(),
            parents: sorted_names(net, net.declared_parents(g).unwrap().iter().copied()),
            owner: None,
        }));
    }

    let mut members: Vec<(&str, MemberId)> = net
        .members()
        .map(|m| (net.member_name(m).unwrap(), m))
        .collect();
    members.sort();

    for &(name, m) in &members {
        let groups = net.member_groups(m).unwrap();
        push(Statement::Member(MemberDecl {
            name: name.to_string(),
            groups: sorted_names(
                net,
                groups
                    .iter()
                    .copied()
                    .filter(|&g| net.group_hierarchy(g) == Some(Hierarchy::System)),
            ),
        }));
    }

    for &(owner_name, owner) in &members {
        for g in topo_groups(net, Hierarchy::User(owner)) {
            push(Statement::Group(GroupDecl {
                name: net.group_name(g).unwrap().to_string(),
                parents: sorted_names(net, net.declared_parents(g).unwrap().iter().copied()),
                owner: Some(owner_name.to_string()),
            }));
        }
    }

    let mut private_joins = BTreeSet::new();
    for &(name, m) in &members {
        for &g in net.member_groups(m).unwrap() {
            if net.group_hierarchy(g) != Some(Hierarchy::System) {
                private_joins.insert((name.to_string(), net.group_name(g).unwrap().to_string()));
            }
        }
    }
    for (member, group) in private_joins {
        push(Statement::Mutation(MutationStmt::Join { member, group }));
    }

    for &(name, m) in &members {
        let root = net.root_of(m).unwrap();
        if net.content_children(root).next().is_some() {
            push(Statement::Content(ContentDecl {
                owner: name.to_string(),
                root: tree_node(net, root),
            }));
        }
    }

    for &(name, m) in &members {
        let mut rules: Vec<(String, String, Rule)> = net
            .assignments_of(m)
            .map(|a| {
                let path = net.content_path(a.content).unwrap();
                let subject = net.subject_name(a.subject);
                let rule = Rule {
                    effect: a.mode.into(),
                    subject: subject.clone(),
                    path: ContentPath::parse(&path).expect("valid path"),
                    protocol: a.protocol.map(ProtoKw::from),
                };
                (path, subject, rule)
            })
            .collect();
        rules.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
        let default = net.default_protocol(m).unwrap();
        if rules.is_empty() && default == Protocol::Pessimistic {
            continue;
        }
        push(Statement::Policy(PolicyBlock {
            owner: name.to_string(),
            default: (default == Protocol::Optimistic).then_some(ProtoKw::Optimistic),
            rules: rules
                .into_iter()
                .map(|(_, _, r)| Spanned::new(r, Loc::default()))
                .collect(),
        }));
    }

    print_document(&doc)
}
