//! Network structure: members, the group DAG, memberships and content trees.
//!
//! A [`NetworkSnapshot`] is an immutable, cheaply clonable value. Every
//! mutation produces a new snapshot whose version is one greater than the
//! snapshot it was derived from; a rejected mutation produces nothing and
//! leaves the original untouched. Batches of edits go through a [`Draft`],
//! which is committed as a single new version.

mod content;
mod groups;
mod ids;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::Deref;
use std::sync::Arc;

pub use ids::{is_valid_name, ContentId, GroupId, Hierarchy, MemberId, ALL_GROUP, ROOT_CONTENT};

use crate::error::ModelError;
use crate::store::{Assignment, AssignmentKey, Protocol};

#[derive(Debug, Clone)]
pub(crate) struct GroupRec {
    pub name: String,
    pub hierarchy: Hierarchy,
    /// Declared parents only. A system group with none hangs off `all`.
    pub parents: BTreeSet<GroupId>,
}

#[derive(Debug, Clone)]
pub(crate) struct MemberRec {
    pub name: String,
    pub root: ContentId,
    /// Direct memberships; `all` is never stored here.
    pub groups: BTreeSet<GroupId>,
    pub default_protocol: Protocol,
}

#[derive(Debug, Clone)]
pub(crate) struct ContentRec {
    pub owner: MemberId,
    pub name: String,
    pub parent: Option<ContentId>,
    pub children: BTreeMap<String, ContentId>,
}

/// The full state of a network at one version.
///
/// Read-only queries live here; both [`NetworkSnapshot`] and [`Draft`]
/// dereference to it.
#[derive(Debug, Clone)]
pub struct Network {
    pub(crate) version: u64,
    next_member: u32,
    next_group: u32,
    next_content: u32,
    pub(crate) members: BTreeMap<MemberId, MemberRec>,
    pub(crate) groups: BTreeMap<GroupId, GroupRec>,
    pub(crate) contents: BTreeMap<ContentId, ContentRec>,
    member_names: HashMap<String, MemberId>,
    group_names: HashMap<String, GroupId>,
    pub(crate) assignments: BTreeMap<AssignmentKey, Assignment>,
}

impl Network {
    fn empty() -> Self {
        let mut groups = BTreeMap::new();
        groups.insert(
            GroupId::ALL,
            GroupRec {
                name: ALL_GROUP.to_string(),
                hierarchy: Hierarchy::System,
                parents: BTreeSet::new(),
            },
        );
        let mut group_names = HashMap::new();
        group_names.insert(ALL_GROUP.to_string(), GroupId::ALL);
        Network {
            version: 0,
            next_member: 0,
            next_group: 1,
            next_content: 0,
            members: BTreeMap::new(),
            groups,
            contents: BTreeMap::new(),
            member_names: HashMap::new(),
            group_names,
            assignments: BTreeMap::new(),
        }
    }

    pub fn version(&self) -> u64 {
        self.version
    }

    pub fn member_id(&self, name: &str) -> Option<MemberId> {
        self.member_names.get(name).copied()
    }

    pub fn group_id(&self, name: &str) -> Option<GroupId> {
        self.group_names.get(name).copied()
    }

    pub fn member_name(&self, id: MemberId) -> Option<&str> {
        self.members.get(&id).map(|m| m.name.as_str())
    }

    pub fn group_name(&self, id: GroupId) -> Option<&str> {
        self.groups.get(&id).map(|g| g.name.as_str())
    }

    pub fn members(&self) -> impl Iterator<Item = MemberId> + '_ {
        self.members.keys().copied()
    }

    /// Every group including `all`.
    pub fn groups(&self) -> impl Iterator<Item = GroupId> + '_ {
        self.groups.keys().copied()
    }

    pub fn member_count(&self) -> usize {
        self.members.len()
    }

    /// Number of groups, counting `all`.
    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    /// Upper bound (exclusive) on raw group indices, for dense side tables.
    pub fn group_index_bound(&self) -> usize {
        self.next_group as usize
    }

    pub fn member_index_bound(&self) -> usize {
        self.next_member as usize
    }

    pub fn group_hierarchy(&self, id: GroupId) -> Option<Hierarchy> {
        self.groups.get(&id).map(|g| g.hierarchy)
    }

    /// Parents as declared, without the implicit `all`.
    pub fn declared_parents(&self, id: GroupId) -> Option<&BTreeSet<GroupId>> {
        self.groups.get(&id).map(|g| &g.parents)
    }

    /// Parents including the implicit `all` of an unattached system group.
    pub fn group_parents(&self, id: GroupId) -> Vec<GroupId> {
        let Some(g) = self.groups.get(&id) else {
            return Vec::new();
        };
        if id != GroupId::ALL && g.hierarchy == Hierarchy::System && g.parents.is_empty() {
            vec![GroupId::ALL]
        } else {
            g.parents.iter().copied().collect()
        }
    }

    /// Direct memberships of a member, excluding the implicit `all`.
    pub fn member_groups(&self, id: MemberId) -> Option<&BTreeSet<GroupId>> {
        self.members.get(&id).map(|m| &m.groups)
    }

    pub(crate) fn require_member(&self, id: MemberId) -> Result<&str, ModelError> {
        self.member_name(id)
            .ok_or_else(|| ModelError::UnknownMember(id.to_string()))
    }

    pub(crate) fn require_group(&self, id: GroupId) -> Result<&str, ModelError> {
        self.group_name(id)
            .ok_or_else(|| ModelError::UnknownGroup(id.to_string()))
    }

    pub fn member_by_name(&self, name: &str) -> Result<MemberId, ModelError> {
        self.member_id(name)
            .ok_or_else(|| ModelError::UnknownMember(name.to_string()))
    }

    pub fn group_by_name(&self, name: &str) -> Result<GroupId, ModelError> {
        self.group_id(name)
            .ok_or_else(|| ModelError::UnknownGroup(name.to_string()))
    }

    fn check_fresh_name(&self, name: &str) -> Result<(), ModelError> {
        if !is_valid_name(name) {
            return Err(ModelError::InvalidName(name.to_string()));
        }
        if self.member_names.contains_key(name) || self.group_names.contains_key(name) {
            return Err(ModelError::DuplicateName(name.to_string()));
        }
        Ok(())
    }
}

/// Immutable view of a network at one version.
#[derive(Debug, Clone)]
pub struct NetworkSnapshot {
    net: Arc<Network>,
}

impl Default for NetworkSnapshot {
    fn default() -> Self {
        Self::new()
    }
}

impl NetworkSnapshot {
    /// A network holding nothing but the universal group, at version 0.
    pub fn new() -> Self {
        NetworkSnapshot {
            net: Arc::new(Network::empty()),
        }
    }

    /// Starts a set of edits that commit as one new version.
    pub fn edit(&self) -> Draft {
        Draft {
            net: (*self.net).clone(),
            base_version: self.net.version,
        }
    }

    /// Applies `f` to a draft and commits it if `f` succeeds.
    pub fn derive<E>(&self, f: impl FnOnce(&mut Draft) -> Result<(), E>) -> Result<Self, E> {
        let mut d = self.edit();
        f(&mut d)?;
        Ok(d.commit())
    }

    /// True if both handles share the same underlying state.
    pub fn ptr_eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.net, &other.net)
    }
}

impl Deref for NetworkSnapshot {
    type Target = Network;

    fn deref(&self) -> &Network {
        &self.net
    }
}

/// A mutable working copy of a snapshot.
///
/// Each operation validates fully before changing anything, so a failed
/// operation leaves the draft as it was.
#[derive(Debug, Clone)]
pub struct Draft {
    net: Network,
    base_version: u64,
}

impl Draft {
    pub fn commit(mut self) -> NetworkSnapshot {
        self.net.version = self.base_version + 1;
        NetworkSnapshot {
            net: Arc::new(self.net),
        }
    }

    /// A snapshot of the current draft state, without consuming the draft.
    pub fn snapshot(&self) -> NetworkSnapshot {
        self.clone().commit()
    }

    pub(crate) fn net_mut(&mut self) -> &mut Network {
        &mut self.net
    }

    pub fn add_member(&mut self, name: &str) -> Result<MemberId, ModelError> {
        self.net.check_fresh_name(name)?;
        let net = &mut self.net;
        let id = MemberId(net.next_member);
        net.next_member += 1;
        let root = ContentId(net.next_content);
        net.next_content += 1;
        net.contents.insert(
            root,
            ContentRec {
                owner: id,
                name: ROOT_CONTENT.to_string(),
                parent: None,
                children: BTreeMap::new(),
            },
        );
        net.members.insert(
            id,
            MemberRec {
                name: name.to_string(),
                root,
                groups: BTreeSet::new(),
                default_protocol: Protocol::Pessimistic,
            },
        );
        net.member_names.insert(name.to_string(), id);
        Ok(id)
    }
}

impl Deref for Draft {
    type Target = Network;

    fn deref(&self) -> &Network {
        &self.net
    }
}

impl NetworkSnapshot {
    pub fn add_member(&self, name: &str) -> Result<NetworkSnapshot, ModelError> {
        self.derive(|d| d.add_member(name).map(|_| ()))
    }
}
