//! Batched reorganization and visibility diffs.
//!
//! Mutations refer to members, groups and content by name so that a batch
//! can create something and use it in a later step. They are validated one
//! at a time against the evolving draft; the first failure aborts the whole
//! batch.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::error::ModelError;
use crate::model::{Draft, GroupId, Hierarchy, NetworkSnapshot};
use crate::resolve::Resolver;
use crate::store::{Assignment, Mode, Protocol};

/// One structural or assignment edit, as plain data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mutation {
    AddMember {
        name: String,
    },
    /// `owner` set makes a private group; otherwise a group created under a
    /// private parent joins that parent's hierarchy.
    CreateGroup {
        name: String,
        parents: Vec<String>,
        owner: Option<String>,
    },
    DeleteGroup {
        name: String,
    },
    AddSubgroupEdge {
        child: String,
        parent: String,
    },
    RemoveSubgroupEdge {
        child: String,
        parent: String,
    },
    Join {
        member: String,
        group: String,
    },
    Leave {
        member: String,
        group: String,
    },
    /// Leaves `from` (or, when absent, every group of the target's
    /// hierarchy) and joins `to`.
    Move {
        member: String,
        from: Option<String>,
        to: String,
    },
    AddContent {
        owner: String,
        path: String,
    },
    RemoveContent {
        owner: String,
        path: String,
    },
    SetAssignment {
        owner: String,
        subject: String,
        path: String,
        mode: Mode,
        protocol: Option<Protocol>,
    },
    ClearAssignment {
        owner: String,
        subject: String,
        path: String,
    },
    SetDefaultProtocol {
        owner: String,
        protocol: Protocol,
    },
}

impl Mutation {
    /// True for edits that only touch the assignment store.
    pub fn is_assignment_edit(&self) -> bool {
        matches!(
            self,
            Mutation::SetAssignment { .. }
                | Mutation::ClearAssignment { .. }
                | Mutation::SetDefaultProtocol { .. }
        )
    }
}

fn split_parent(path: &str) -> Option<(&str, &str)> {
    let (parent, name) = path.rsplit_once('/')?;
    (!parent.is_empty() && !name.is_empty()).then_some((parent, name))
}

impl Draft {
    pub fn apply(&mut self, m: &Mutation) -> Result<(), ModelError> {
        match m {
            Mutation::AddMember { name } => self.add_member(name).map(|_| ()),
            Mutation::CreateGroup {
                name,
                parents,
                owner,
            } => {
                let parents = parents
                    .iter()
                    .map(|p| self.group_by_name(p))
                    .collect::<Result<Vec<_>, _>>()?;
                let owner = match owner {
                    Some(o) => Some(self.member_by_name(o)?),
                    None => parents
                        .first()
                        .and_then(|&p| match self.group_hierarchy(p) {
                            Some(Hierarchy::User(o)) => Some(o),
                            _ => None,
                        }),
                };
                self.add_group(name, &parents, owner).map(|_| ())
            }
            Mutation::DeleteGroup { name } => {
                let g = self.group_by_name(name)?;
                self.delete_group(g)
            }
            Mutation::AddSubgroupEdge { child, parent } => {
                let (c, p) = (self.group_by_name(child)?, self.group_by_name(parent)?);
                self.add_subgroup_edge(c, p)
            }
            Mutation::RemoveSubgroupEdge { child, parent } => {
                let (c, p) = (self.group_by_name(child)?, self.group_by_name(parent)?);
                self.remove_subgroup_edge(c, p)
            }
            Mutation::Join { member, group } => {
                let (m, g) = (self.member_by_name(member)?, self.group_by_name(group)?);
                self.set_membership(m, g, true)
            }
            Mutation::Leave { member, group } => {
                let (m, g) = (self.member_by_name(member)?, self.group_by_name(group)?);
                if g != GroupId::ALL && !self.member_groups(m).is_some_and(|gs| gs.contains(&g)) {
                    return Err(ModelError::NotAMember {
                        member: member.clone(),
                        group: group.clone(),
                    });
                }
                self.set_membership(m, g, false)
            }
            Mutation::Move { member, from, to } => {
                let m = self.member_by_name(member)?;
                let target = self.group_by_name(to)?;
                if target == GroupId::ALL {
                    return Err(ModelError::CannotModifyAll);
                }
                let current = self.member_groups(m).cloned().unwrap_or_default();
                let leaving: Vec<GroupId> = match from {
                    Some(f) => {
                        let g = self.group_by_name(f)?;
                        if g == GroupId::ALL {
                            return Err(ModelError::CannotModifyAll);
                        }
                        if !current.contains(&g) {
                            return Err(ModelError::NotAMember {
                                member: member.clone(),
                                group: f.clone(),
                            });
                        }
                        vec![g]
                    }
                    None => {
                        let h = self.group_hierarchy(target);
                        current
                            .iter()
                            .copied()
                            .filter(|&g| self.group_hierarchy(g) == h)
                            .collect()
                    }
                };
                for g in leaving {
                    self.set_membership(m, g, false)?;
                }
                self.set_membership(m, target, true)
            }
            Mutation::AddContent { owner, path } => {
                let o = self.member_by_name(owner)?;
                let (parent, name) = split_parent(path).ok_or_else(|| ModelError::UnknownPath {
                    owner: owner.clone(),
                    path: path.clone(),
                })?;
                let parent = self.resolve_path(o, parent)?;
                self.add_content(o, parent, name).map(|_| ())
            }
            Mutation::RemoveContent { owner, path } => {
                let o = self.member_by_name(owner)?;
                let c = self.resolve_path(o, path)?;
                self.remove_content(o, c)
            }
            Mutation::SetAssignment {
                owner,
                subject,
                path,
                mode,
                protocol,
            } => {
                let o = self.member_by_name(owner)?;
                let s = self.subject_by_name(subject)?;
                let c = self.resolve_path(o, path)?;
                self.set_assignment(Assignment {
                    owner: o,
                    subject: s,
                    content: c,
                    mode: *mode,
                    protocol: *protocol,
                })
            }
            Mutation::ClearAssignment {
                owner,
                subject,
                path,
            } => {
                let o = self.member_by_name(owner)?;
                let s = self.subject_by_name(subject)?;
                let c = self.resolve_path(o, path)?;
                self.clear_assignment(o, s, c).map(|_| ())
            }
            Mutation::SetDefaultProtocol { owner, protocol } => {
                let o = self.member_by_name(owner)?;
                self.set_default_protocol(o, *protocol)
            }
        }
    }
}

/// First failing mutation of a batch. `index` is zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("mutation #{} failed: {error}", .index + 1)]
pub struct BatchError {
    pub index: usize,
    pub error: ModelError,
}

/// Applies every mutation or none. The result is one new version.
pub fn apply_batch(
    snap: &NetworkSnapshot,
    mutations: &[Mutation],
) -> Result<NetworkSnapshot, BatchError> {
    let mut draft = snap.edit();
    for (index, m) in mutations.iter().enumerate() {
        draft
            .apply(m)
            .map_err(|error| BatchError { index, error })?;
    }
    Ok(draft.commit())
}

/// One changed verdict. `None` means the viewer or the node does not exist
/// on that side; it compares as invisible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffEntry {
    pub viewer: String,
    pub path: String,
    pub old: Option<Mode>,
    pub new: Option<Mode>,
}

fn mode_label(m: Option<Mode>) -> &'static str {
    m.map_or("absent", Mode::as_str)
}

impl DiffEntry {
    pub fn old_label(&self) -> &'static str {
        mode_label(self.old)
    }

    pub fn new_label(&self) -> &'static str {
        mode_label(self.new)
    }
}

impl fmt::Display for DiffEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}  {}  {}→{}",
            self.viewer,
            self.path,
            self.old_label(),
            self.new_label()
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VisibilityDiff {
    pub owner: String,
    pub before_version: u64,
    pub after_version: u64,
    /// Ordered by viewer name, then content path.
    pub entries: Vec<DiffEntry>,
}

impl VisibilityDiff {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn verdict_table(
    snap: &NetworkSnapshot,
    owner: &str,
) -> Result<BTreeMap<(String, String), Mode>, ModelError> {
    let o = snap.member_by_name(owner)?;
    let resolver = Resolver::new(snap, o)?;
    let nodes: Vec<(String, _)> = snap
        .contents_of(o)
        .into_iter()
        .map(|c| (snap.content_path(c).expect("live node"), c))
        .collect();
    let mut table = BTreeMap::new();
    for v in snap.members() {
        let name = snap.member_name(v).expect("live member");
        for (path, c) in &nodes {
            table.insert((name.to_string(), path.clone()), resolver.verdict(v, *c)?);
        }
    }
    Ok(table)
}

/// Pointwise verdict changes for `owner`'s content between two snapshots.
/// Members are matched by name and content by path.
pub fn diff_visibility(
    before: &NetworkSnapshot,
    after: &NetworkSnapshot,
    owner: &str,
) -> Result<VisibilityDiff, ModelError> {
    let old = verdict_table(before, owner)?;
    let new = verdict_table(after, owner)?;
    let keys: BTreeSet<&(String, String)> = old.keys().chain(new.keys()).collect();
    let entries = keys
        .into_iter()
        .filter_map(|key| {
            let (o, n) = (old.get(key).copied(), new.get(key).copied());
            let effective = |m: Option<Mode>| m.unwrap_or(Mode::Invisible);
            (effective(o) != effective(n)).then(|| DiffEntry {
                viewer: key.0.clone(),
                path: key.1.clone(),
                old: o,
                new: n,
            })
        })
        .collect();
    Ok(VisibilityDiff {
        owner: owner.to_string(),
        before_version: before.version(),
        after_version: after.version(),
        entries,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WhatIfError {
    #[error(transparent)]
    Batch(#[from] BatchError),
    #[error(transparent)]
    Diff(#[from] ModelError),
}

/// The diff a batch would cause, without committing it anywhere.
pub fn whatif(
    snap: &NetworkSnapshot,
    mutations: &[Mutation],
    owner: &str,
) -> Result<VisibilityDiff, WhatIfError> {
    let after = apply_batch(snap, mutations)?;
    Ok(diff_visibility(snap, &after, owner)?)
}
