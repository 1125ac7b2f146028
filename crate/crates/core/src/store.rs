//! Explicit visibility assignments.
//!
//! An assignment is authored by the owner of a content node and grants
//! (`Visible`) or revokes (`Invisible`) visibility of that node's subtree to
//! a subject: a group, or a single member. At most one assignment exists per
//! `(owner, subject, content)`; setting it again replaces mode and protocol.

use std::fmt;

use crate::error::ModelError;
use crate::model::{ContentId, Draft, GroupId, Hierarchy, MemberId, Network, NetworkSnapshot};

/// Binary visibility right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    Visible,
    Invisible,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Visible => "visible",
            Mode::Invisible => "invisible",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How conflicting path verdicts are combined for a grant.
///
/// A visible verdict carrying `Optimistic` survives conflicting invisible
/// verdicts; a `Pessimistic` one yields to them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Protocol {
    Optimistic,
    #[default]
    Pessimistic,
}

impl Protocol {
    pub fn as_str(self) -> &'static str {
        match self {
            Protocol::Optimistic => "optimistic",
            Protocol::Pessimistic => "pessimistic",
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Who an assignment is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Subject {
    Group(GroupId),
    Member(MemberId),
}

impl Subject {
    pub const ALL: Subject = Subject::Group(GroupId::ALL);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct AssignmentKey {
    pub owner: MemberId,
    pub subject: Subject,
    pub content: ContentId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Assignment {
    pub owner: MemberId,
    pub subject: Subject,
    pub content: ContentId,
    pub mode: Mode,
    /// Falls back to the owner's default protocol when absent.
    pub protocol: Option<Protocol>,
}

impl Assignment {
    pub fn new(owner: MemberId, subject: Subject, content: ContentId, mode: Mode) -> Self {
        Assignment {
            owner,
            subject,
            content,
            mode,
            protocol: None,
        }
    }

    pub fn with_protocol(mut self, protocol: Protocol) -> Self {
        self.protocol = Some(protocol);
        self
    }

    pub(crate) fn key(&self) -> AssignmentKey {
        AssignmentKey {
            owner: self.owner,
            subject: self.subject,
            content: self.content,
        }
    }
}

impl Network {
    /// All assignments, ordered by (owner, subject, content).
    pub fn assignments(&self) -> impl Iterator<Item = &Assignment> + '_ {
        self.assignments.values()
    }

    pub fn assignment_count(&self) -> usize {
        self.assignments.len()
    }

    pub fn assignments_of(&self, owner: MemberId) -> impl Iterator<Item = &Assignment> + '_ {
        self.assignments
            .iter()
            .filter(move |(k, _)| k.owner == owner)
            .map(|(_, a)| a)
    }

    pub fn assignment(
        &self,
        owner: MemberId,
        subject: Subject,
        content: ContentId,
    ) -> Option<&Assignment> {
        self.assignments.get(&AssignmentKey {
            owner,
            subject,
            content,
        })
    }

    pub fn default_protocol(&self, owner: MemberId) -> Option<Protocol> {
        self.members.get(&owner).map(|m| m.default_protocol)
    }

    /// The protocol an assignment resolves with: its own annotation, else
    /// its owner's default.
    pub fn effective_protocol(&self, a: &Assignment) -> Protocol {
        a.protocol
            .or_else(|| self.default_protocol(a.owner))
            .unwrap_or_default()
    }

    pub fn subject_name(&self, subject: Subject) -> String {
        match subject {
            Subject::Group(g) => self.group_name(g).unwrap_or("?").to_string(),
            Subject::Member(m) => self.member_name(m).unwrap_or("?").to_string(),
        }
    }

    /// Resolves a subject by name: `all`, a group, or a member.
    pub fn subject_by_name(&self, name: &str) -> Result<Subject, ModelError> {
        if let Some(g) = self.group_id(name) {
            Ok(Subject::Group(g))
        } else if let Some(m) = self.member_id(name) {
            Ok(Subject::Member(m))
        } else {
            Err(ModelError::UnknownName(name.to_string()))
        }
    }

    fn check_assignment(&self, a: &Assignment) -> Result<(), ModelError> {
        let owner_name = self.require_member(a.owner)?.to_string();
        let content_owner = self.content_owner(a.content)?;
        if content_owner != a.owner {
            return Err(ModelError::ForeignContent {
                owner: owner_name,
                path: self.content_path(a.content).unwrap_or_default(),
            });
        }
        match a.subject {
            Subject::Member(m) => {
                self.require_member(m)?;
            }
            Subject::Group(g) => {
                let name = self.require_group(g)?;
                if let Hierarchy::User(h) = self.group_hierarchy(g).expect("checked") {
                    if h != a.owner {
                        return Err(ModelError::ForeignSubjectHierarchy {
                            owner: owner_name,
                            group: name.to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

impl Draft {
    pub fn set_assignment(&mut self, a: Assignment) -> Result<(), ModelError> {
        self.check_assignment(&a)?;
        self.net_mut().assignments.insert(a.key(), a);
        Ok(())
    }

    pub fn clear_assignment(
        &mut self,
        owner: MemberId,
        subject: Subject,
        content: ContentId,
    ) -> Result<Assignment, ModelError> {
        let key = AssignmentKey {
            owner,
            subject,
            content,
        };
        match self.net_mut().assignments.remove(&key) {
            Some(a) => Ok(a),
            None => Err(ModelError::AssignmentNotFound {
                owner: self.member_name(owner).unwrap_or("?").to_string(),
                subject: self.subject_name(subject),
                path: self.content_path(content).unwrap_or_default(),
            }),
        }
    }

    pub fn set_default_protocol(
        &mut self,
        owner: MemberId,
        protocol: Protocol,
    ) -> Result<(), ModelError> {
        self.require_member(owner)?;
        self.net_mut()
            .members
            .get_mut(&owner)
            .expect("checked")
            .default_protocol = protocol;
        Ok(())
    }
}

impl NetworkSnapshot {
    pub fn set_assignment(&self, a: Assignment) -> Result<NetworkSnapshot, ModelError> {
        self.derive(|d| d.set_assignment(a))
    }

    pub fn clear_assignment(
        &self,
        owner: MemberId,
        subject: Subject,
        content: ContentId,
    ) -> Result<NetworkSnapshot, ModelError> {
        self.derive(|d| d.clear_assignment(owner, subject, content).map(|_| ()))
    }

    pub fn set_default_protocol(
        &self,
        owner: MemberId,
        protocol: Protocol,
    ) -> Result<NetworkSnapshot, ModelError> {
        self.derive(|d| d.set_default_protocol(owner, protocol))
    }
}
