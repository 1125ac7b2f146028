use std::collections::{BTreeSet, HashMap};

use super::{check_query, combine, viewer_parents, Combination, ResolutionTrace, Winner};
use crate::error::ModelError;
use crate::model::{ContentId, GroupId, MemberId, Network};
use crate::store::{Mode, Protocol, Subject};

/// Resolver for one owner's content over one network state.
///
/// Building it indexes the owner's assignments and the group parent lists
/// once; each query then walks upward from the viewer and stops on every
/// branch at the first subject holding an assignment that covers the
/// queried node. Every path through that subject has it as its winner, so
/// the set of stopping points is exactly the set of defined path verdicts.
pub struct Resolver<'a> {
    net: &'a Network,
    owner: MemberId,
    rules: HashMap<(Subject, ContentId), Winner>,
    parents: Vec<Vec<GroupId>>,
}

struct Scratch {
    seen: Vec<u32>,
    stamp: u32,
    stack: Vec<GroupId>,
}

impl Scratch {
    fn new(groups: usize) -> Self {
        Scratch {
            seen: vec![0; groups],
            stamp: 0,
            stack: Vec::new(),
        }
    }
}

#[derive(Default)]
struct Tally {
    visible: bool,
    invisible: bool,
    optimistic_grant: bool,
}

impl Tally {
    fn add(&mut self, w: &Winner) {
        match w.mode() {
            Mode::Visible => {
                self.visible = true;
                self.optimistic_grant |= w.protocol == Protocol::Optimistic;
            }
            Mode::Invisible => self.invisible = true,
        }
    }

    fn verdict(&self) -> Mode {
        if self.visible && (!self.invisible || self.optimistic_grant) {
            Mode::Visible
        } else {
            Mode::Invisible
        }
    }
}

impl<'a> Resolver<'a> {
    pub fn new(net: &'a Network, owner: MemberId) -> Result<Self, ModelError> {
        net.require_member(owner)?;
        let rules = net
            .assignments_of(owner)
            .map(|a| {
                (
                    (a.subject, a.content),
                    Winner {
                        assignment: *a,
                        protocol: net.effective_protocol(a),
                    },
                )
            })
            .collect();
        let mut parents = vec![Vec::new(); net.group_index_bound()];
        for g in net.groups() {
            parents[g.index()] = net.group_parents(g);
        }
        Ok(Resolver {
            net,
            owner,
            rules,
            parents,
        })
    }

    pub fn owner(&self) -> MemberId {
        self.owner
    }

    /// Deepest assignment of `subject` covering the first node of `chain`.
    fn best(&self, subject: Subject, chain: &[ContentId]) -> Option<&Winner> {
        chain.iter().find_map(|&c| self.rules.get(&(subject, c)))
    }

    fn walk(
        &self,
        viewer: MemberId,
        chain: &[ContentId],
        scratch: &mut Scratch,
        mut emit: impl FnMut(&Winner),
    ) {
        if let Some(w) = self.best(Subject::Member(viewer), chain) {
            emit(w);
            return;
        }
        scratch.stamp += 1;
        let stamp = scratch.stamp;
        scratch.stack.clear();
        scratch
            .stack
            .extend(viewer_parents(self.net, viewer, self.owner));
        while let Some(g) = scratch.stack.pop() {
            if std::mem::replace(&mut scratch.seen[g.index()], stamp) == stamp {
                continue;
            }
            match self.best(Subject::Group(g), chain) {
                Some(w) => emit(w),
                None => scratch.stack.extend(&self.parents[g.index()]),
            }
        }
    }

    fn mode_with(&self, viewer: MemberId, content: ContentId, scratch: &mut Scratch) -> Mode {
        if viewer == self.owner {
            return Mode::Visible;
        }
        if self.rules.is_empty() {
            return Mode::Invisible;
        }
        let chain = self.net.content_ancestors(content);
        let mut tally = Tally::default();
        self.walk(viewer, &chain, scratch, |w| tally.add(w));
        tally.verdict()
    }

    pub fn verdict(&self, viewer: MemberId, content: ContentId) -> Result<Mode, ModelError> {
        check_query(self.net, viewer, self.owner, content)?;
        let mut scratch = Scratch::new(self.parents.len());
        Ok(self.mode_with(viewer, content, &mut scratch))
    }

    /// Trace listing the distinct deciding assignments (no full paths).
    pub fn trace(
        &self,
        viewer: MemberId,
        content: ContentId,
    ) -> Result<ResolutionTrace, ModelError> {
        check_query(self.net, viewer, self.owner, content)?;
        if viewer == self.owner {
            return Ok(ResolutionTrace::bypass(viewer, content));
        }
        let chain = self.net.content_ancestors(content);
        let mut scratch = Scratch::new(self.parents.len());
        let mut winners = Vec::new();
        self.walk(viewer, &chain, &mut scratch, |w| winners.push(*w));
        winners.sort_by_key(|w| w.assignment.key());
        winners.dedup();
        let (combination, verdict) = combine(&winners);
        debug_assert!(combination != Combination::OwnerBypass);
        Ok(ResolutionTrace {
            viewer,
            owner: self.owner,
            content,
            paths: Vec::new(),
            winners,
            combination,
            verdict,
        })
    }

    /// Every node of the owner's tree the viewer can see.
    pub fn visible_set(&self, viewer: MemberId) -> Result<BTreeSet<ContentId>, ModelError> {
        self.net.require_member(viewer)?;
        let mut scratch = Scratch::new(self.parents.len());
        Ok(self
            .net
            .contents_of(self.owner)
            .into_iter()
            .filter(|&c| self.mode_with(viewer, c, &mut scratch) == Mode::Visible)
            .collect())
    }

    /// Every member who can see `content`, the owner included.
    pub fn audience(&self, content: ContentId) -> Result<BTreeSet<MemberId>, ModelError> {
        check_query(self.net, self.owner, self.owner, content)?;
        let mut scratch = Scratch::new(self.parents.len());
        Ok(self
            .net
            .members()
            .filter(|&v| self.mode_with(v, content, &mut scratch) == Mode::Visible)
            .collect())
    }
}

/// Pruned resolver; agrees with [`super::resolve_by_paths`] on every verdict.
pub fn resolve(
    net: &Network,
    viewer: MemberId,
    owner: MemberId,
    content: ContentId,
) -> Result<ResolutionTrace, ModelError> {
    Resolver::new(net, owner)?.trace(viewer, content)
}

pub fn visible_set(
    net: &Network,
    viewer: MemberId,
    owner: MemberId,
) -> Result<BTreeSet<ContentId>, ModelError> {
    Resolver::new(net, owner)?.visible_set(viewer)
}

pub fn audience(
    net: &Network,
    owner: MemberId,
    content: ContentId,
) -> Result<BTreeSet<MemberId>, ModelError> {
    Resolver::new(net, owner)?.audience(content)
}
