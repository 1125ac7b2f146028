//! Effective visibility of one owner's content for one viewer.
//!
//! Visibility is inherited down derivation paths: chains that start at a
//! root group (`all`, or a root of the content owner's private hierarchy),
//! descend through subgroup edges and end with a membership edge into the
//! viewer. On each path the assignment whose subject sits closest to the
//! viewer wins, ties at one subject going to the deepest covering content
//! node. Path verdicts are then combined:
//!
//! * no defined verdict: invisible;
//! * no invisible verdict: visible;
//! * otherwise visible only if some visible verdict carries the optimistic
//!   protocol.
//!
//! A member's implicit edge from `all` is present only while the member has
//! no direct membership in a system group; otherwise `all` is reached
//! through those groups.
//!
//! Owners always see their own content.
//!
//! [`resolve_by_paths`] enumerates every path and is the reference;
//! [`resolve`] walks upward from the viewer and stops at the first assigned
//! subject on each branch.

mod engine;
mod paths;

use std::collections::BTreeSet;

pub use engine::{audience, resolve, visible_set, Resolver};
pub use paths::{derivation_paths, explain, resolve_by_paths};

use crate::error::ModelError;
use crate::model::{ContentId, GroupId, Hierarchy, MemberId, Network};
use crate::store::{Assignment, Mode, Protocol};

/// One node on a derivation path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PathNode {
    Group(GroupId),
    Member(MemberId),
}

/// Verdict of a single path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PathMode {
    Visible,
    Invisible,
    Undefined,
}

impl PathMode {
    pub fn as_str(self) -> &'static str {
        match self {
            PathMode::Visible => "visible",
            PathMode::Invisible => "invisible",
            PathMode::Undefined => "undefined",
        }
    }
}

/// The assignment that decided a path, with its effective protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Winner {
    pub assignment: Assignment,
    pub protocol: Protocol,
}

impl Winner {
    pub fn mode(&self) -> Mode {
        self.assignment.mode
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathVerdict {
    /// Root first, viewer last.
    pub path: Vec<PathNode>,
    pub winner: Option<Winner>,
}

impl PathVerdict {
    pub fn mode(&self) -> PathMode {
        match self.winner.map(|w| w.mode()) {
            Some(Mode::Visible) => PathMode::Visible,
            Some(Mode::Invisible) => PathMode::Invisible,
            None => PathMode::Undefined,
        }
    }
}

/// Which combination rule produced the final verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Combination {
    /// The viewer owns the content.
    OwnerBypass,
    /// No path had an applicable assignment.
    DefaultDeny,
    /// Every defined path agreed.
    Agreement,
    /// Paths conflicted and an optimistic grant won.
    OptimisticGrant,
    /// Paths conflicted and no optimistic grant was available.
    ConflictDenied,
}

impl Combination {
    pub fn as_str(self) -> &'static str {
        match self {
            Combination::OwnerBypass => "owner-bypass",
            Combination::DefaultDeny => "default-deny",
            Combination::Agreement => "agreement",
            Combination::OptimisticGrant => "optimistic-grant",
            Combination::ConflictDenied => "conflict-denied",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionTrace {
    pub viewer: MemberId,
    pub owner: MemberId,
    pub content: ContentId,
    /// Every derivation path, sorted by node names. Empty for the pruned
    /// resolver and for owner bypass.
    pub paths: Vec<PathVerdict>,
    /// Distinct deciding assignments, ordered.
    pub winners: Vec<Winner>,
    pub combination: Combination,
    pub verdict: Mode,
}

impl ResolutionTrace {
    pub fn owner_bypass(&self) -> bool {
        self.combination == Combination::OwnerBypass
    }

    pub fn is_visible(&self) -> bool {
        self.verdict == Mode::Visible
    }

    fn bypass(viewer: MemberId, content: ContentId) -> Self {
        ResolutionTrace {
            viewer,
            owner: viewer,
            content,
            paths: Vec::new(),
            winners: Vec::new(),
            combination: Combination::OwnerBypass,
            verdict: Mode::Visible,
        }
    }
}

/// Combines the defined verdicts of all paths. Only presence matters, so
/// duplicates and order are irrelevant.
pub fn combine<'a>(winners: impl IntoIterator<Item = &'a Winner>) -> (Combination, Mode) {
    let mut any_visible = false;
    let mut any_invisible = false;
    let mut optimistic_grant = false;
    for w in winners {
        match w.mode() {
            Mode::Visible => {
                any_visible = true;
                optimistic_grant |= w.protocol == Protocol::Optimistic;
            }
            Mode::Invisible => any_invisible = true,
        }
    }
    match (any_visible, any_invisible) {
        (false, false) => (Combination::DefaultDeny, Mode::Invisible),
        (true, false) => (Combination::Agreement, Mode::Visible),
        (false, true) => (Combination::Agreement, Mode::Invisible),
        (true, true) if optimistic_grant => (Combination::OptimisticGrant, Mode::Visible),
        (true, true) => (Combination::ConflictDenied, Mode::Invisible),
    }
}

/// Whether a group can appear on paths used to resolve `owner`'s content.
pub(crate) fn group_in_scope(net: &Network, group: GroupId, owner: MemberId) -> bool {
    match net.group_hierarchy(group) {
        Some(Hierarchy::System) => true,
        Some(Hierarchy::User(h)) => h == owner,
        None => false,
    }
}

/// The viewer's parents on derivation paths for `owner`'s content.
pub(crate) fn viewer_parents(net: &Network, viewer: MemberId, owner: MemberId) -> Vec<GroupId> {
    let Some(groups) = net.member_groups(viewer) else {
        return Vec::new();
    };
    let mut parents: BTreeSet<GroupId> = groups
        .iter()
        .copied()
        .filter(|&g| group_in_scope(net, g, owner))
        .collect();
    let in_system = groups
        .iter()
        .any(|&g| net.group_hierarchy(g) == Some(Hierarchy::System));
    if !in_system {
        parents.insert(GroupId::ALL);
    }
    parents.into_iter().collect()
}

/// Shared argument validation: both members exist and `content` is the
/// owner's.
pub(crate) fn check_query(
    net: &Network,
    viewer: MemberId,
    owner: MemberId,
    content: ContentId,
) -> Result<(), ModelError> {
    net.require_member(viewer)?;
    let owner_name = net.require_member(owner)?;
    if net.content_owner(content)? != owner {
        return Err(ModelError::ForeignContent {
            owner: owner_name.to_string(),
            path: net.content_path(content).unwrap_or_default(),
        });
    }
    Ok(())
}
