//! Seeded random networks and mutation batches, for testing and
//! benchmarking.
//!
//! Generation is deterministic for a given [`Shape`] and seed.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::evolution::Mutation;
use crate::model::{ContentId, Draft, GroupId, MemberId, NetworkSnapshot};
use crate::store::{Assignment, Mode, Protocol, Subject};

/// Size and structure parameters.
#[derive(Debug, Clone)]
pub struct Shape {
    pub members: usize,
    /// System groups, not counting `all`.
    pub groups: usize,
    /// Private groups, spread over the owners.
    pub user_groups: usize,
    /// Longest chain of declared subgroup edges plus one.
    pub max_depth: usize,
    pub max_parents: usize,
    /// Chance that a system group is a root (hangs directly off `all`).
    pub root_chance: f64,
    /// Members that get content trees and policies: the first `owners`.
    pub owners: usize,
    /// Content nodes per owner, including `Everything`.
    pub contents: usize,
    /// Distinct assignments, in total. Fewer are made only when the
    /// (subject, content) space is too small.
    pub assignments: usize,
    pub max_memberships: usize,
    /// Chance that an assignment names a member rather than a group.
    pub member_subject_chance: f64,
}

impl Shape {
    /// Small instances for exhaustive-style comparison.
    pub fn small(members: usize, groups: usize, contents: usize, assignments: usize) -> Shape {
        Shape {
            members,
            groups,
            user_groups: groups.min(2),
            max_depth: groups.max(1),
            max_parents: 2,
            root_chance: 0.3,
            owners: members.min(2),
            contents,
            assignments,
            max_memberships: 3,
            member_subject_chance: 0.2,
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn pick_protocol(rng: &mut impl Rng) -> Protocol {
    if rng.gen_bool(0.5) {
        Protocol::Optimistic
    } else {
        Protocol::Pessimistic
    }
}

fn pick_mode(rng: &mut impl Rng) -> Mode {
    if rng.gen_bool(0.5) {
        Mode::Visible
    } else {
        Mode::Invisible
    }
}

/// Builds a network with the given shape.
pub fn random_network(shape: &Shape, seed: u64) -> NetworkSnapshot {
    let mut rng = rng(seed);
    let mut d = NetworkSnapshot::new().edit();
    populate(&mut d, shape, &mut rng);
    d.commit()
}

fn populate(d: &mut Draft, shape: &Shape, rng: &mut impl Rng) {
    let members: Vec<MemberId> = (0..shape.members)
        .map(|i| d.add_member(&format!("M{i}")).expect("fresh name"))
        .collect();
    let owners = &members[..shape.owners.min(members.len())];

    let mut system: Vec<(GroupId, usize)> = Vec::new();
    for i in 0..shape.groups {
        let candidates: Vec<(GroupId, usize)> = system
            .iter()
            .copied()
            .filter(|&(_, depth)| depth < shape.max_depth)
            .collect();
        let k = if candidates.is_empty() || rng.gen_bool(shape.root_chance) {
            0
        } else {
            rng.gen_range(1..=shape.max_parents.max(1))
        };
        let parents: Vec<(GroupId, usize)> = candidates.choose_multiple(rng, k).copied().collect();
        let depth = parents.iter().map(|&(_, d)| d).max().unwrap_or(0) + 1;
        let ids: Vec<GroupId> = parents.iter().map(|&(g, _)| g).collect();
        let g = d
            .add_group(&format!("G{i}"), &ids, None)
            .expect("valid group");
        system.push((g, depth));
    }

    let mut private: Vec<(GroupId, MemberId)> = Vec::new();
    if !owners.is_empty() {
        for i in 0..shape.user_groups {
            let owner = *owners.choose(rng).expect("non-empty");
            let same: Vec<GroupId> = private
                .iter()
                .filter(|&&(_, o)| o == owner)
                .map(|&(g, _)| g)
                .collect();
            let parents: Vec<GroupId> = if same.is_empty() || rng.gen_bool(0.4) {
                Vec::new()
            } else {
                same.choose_multiple(rng, 1).copied().collect()
            };
            let g = d
                .add_group(&format!("U{i}"), &parents, Some(owner))
                .expect("valid group");
            private.push((g, owner));
        }
    }

    let joinable: Vec<GroupId> = system
        .iter()
        .map(|&(g, _)| g)
        .chain(private.iter().map(|&(g, _)| g))
        .collect();
    for &m in &members {
        if joinable.is_empty() {
            break;
        }
        let n = rng.gen_range(0..=shape.max_memberships.min(joinable.len()));
        for &g in joinable.choose_multiple(rng, n) {
            d.set_membership(m, g, true).expect("valid membership");
        }
    }

    let mut trees: Vec<(MemberId, Vec<ContentId>)> = Vec::new();
    for &o in owners {
        let mut nodes = vec![d.root_of(o).expect("member has a root")];
        for i in 1..shape.contents {
            let parent = *nodes.choose(rng).expect("non-empty");
            nodes.push(d.add_content(o, parent, &format!("C{i}")).expect("fresh"));
        }
        d.set_default_protocol(o, pick_protocol(rng))
            .expect("owner");
        trees.push((o, nodes));
    }
    if trees.is_empty() {
        return;
    }
    let mut attempts = 0;
    while d.assignment_count() < shape.assignments && attempts < shape.assignments * 20 {
        attempts += 1;
        let (owner, nodes) = trees.choose(rng).expect("non-empty");
        let content = *nodes.choose(rng).expect("non-empty");
        let subject = if rng.gen_bool(shape.member_subject_chance) {
            Subject::Member(*members.choose(rng).expect("owner is a member"))
        } else {
            let mut pool: Vec<GroupId> = vec![GroupId::ALL];
            pool.extend(system.iter().map(|&(g, _)| g));
            pool.extend(
                private
                    .iter()
                    .filter(|&&(_, o)| o == *owner)
                    .map(|&(g, _)| g),
            );
            Subject::Group(*pool.choose(rng).expect("non-empty"))
        };
        let mut a = Assignment::new(*owner, subject, content, pick_mode(rng));
        if rng.gen_bool(0.3) {
            a = a.with_protocol(pick_protocol(rng));
        }
        d.set_assignment(a).expect("valid assignment");
    }
}

fn name_pool(snap: &NetworkSnapshot) -> (Vec<String>, Vec<String>) {
    let members = snap
        .members()
        .filter_map(|m| snap.member_name(m).map(str::to_string))
        .collect();
    let groups = snap
        .groups()
        .filter(|&g| g != GroupId::ALL)
        .filter_map(|g| snap.group_name(g).map(str::to_string))
        .collect();
    (members, groups)
}

fn random_mutation(
    snap: &NetworkSnapshot,
    rng: &mut impl Rng,
    fresh: &mut usize,
) -> Option<Mutation> {
    let (members, groups) = name_pool(snap);
    let member = members.choose(rng).cloned();
    let group = groups.choose(rng).cloned();
    let owner = member.clone()?;
    let owner_id = snap.member_id(&owner)?;
    let nodes: Vec<String> = snap
        .contents_of(owner_id)
        .into_iter()
        .filter_map(|c| snap.content_path(c))
        .collect();
    let path = nodes.choose(rng).cloned()?;
    let m = match rng.gen_range(0..12) {
        0 => {
            *fresh += 1;
            Mutation::AddMember {
                name: format!("N{fresh}"),
            }
        }
        1 => {
            *fresh += 1;
            Mutation::CreateGroup {
                name: format!("H{fresh}"),
                parents: group.into_iter().collect(),
                owner: None,
            }
        }
        2 => Mutation::DeleteGroup { name: group? },
        3 => Mutation::AddSubgroupEdge {
            child: group?,
            parent: groups.choose(rng).cloned()?,
        },
        4 => {
            let child = group?;
            let parent = snap
                .declared_parents(snap.group_id(&child)?)?
                .iter()
                .copied()
                .collect::<Vec<_>>()
                .choose(rng)
                .and_then(|&p| snap.group_name(p))?
                .to_string();
            Mutation::RemoveSubgroupEdge { child, parent }
        }
        5 => Mutation::Join {
            member: owner,
            group: group?,
        },
        6 => {
            let gs: Vec<GroupId> = snap.member_groups(owner_id)?.iter().copied().collect();
            let g = *gs.choose(rng)?;
            Mutation::Leave {
                member: owner,
                group: snap.group_name(g)?.to_string(),
            }
        }
        7 => Mutation::Move {
            member: owner,
            from: None,
            to: group?,
        },
        8 => {
            *fresh += 1;
            Mutation::AddContent {
                owner,
                path: format!("{path}/K{fresh}"),
            }
        }
        9 => Mutation::RemoveContent { owner, path },
        10 => {
            let subject = if rng.gen_bool(0.8) {
                group.unwrap_or_else(|| "all".to_string())
            } else {
                members.choose(rng)?.clone()
            };
            Mutation::SetAssignment {
                owner,
                subject,
                path,
                mode: pick_mode(rng),
                protocol: rng.gen_bool(0.3).then(|| pick_protocol(rng)),
            }
        }
        _ => {
            let a = snap.assignments_of(owner_id).copied().collect::<Vec<_>>();
            let a = a.choose(rng)?;
            Mutation::ClearAssignment {
                owner,
                subject: snap.subject_name(a.subject),
                path: snap.content_path(a.content)?,
            }
        }
    };
    Some(m)
}

/// Up to `n` mutations that apply cleanly, in order, to `snap`.
pub fn random_batch(snap: &NetworkSnapshot, n: usize, seed: u64) -> Vec<Mutation> {
    let mut rng = rng(seed);
    let mut cur = snap.clone();
    let mut out = Vec::new();
    let mut fresh = 0;
    for _ in 0..n * 8 {
        if out.len() == n {
            break;
        }
        let Some(m) = random_mutation(&cur, &mut rng, &mut fresh) else {
            continue;
        };
        if let Ok(next) = cur.derive(|d| d.apply(&m)) {
            cur = next;
            out.push(m);
        }
    }
    out
}
