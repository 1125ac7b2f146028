//! Replays a parsed document against a network.
//!
//! Declarations and mutation statements are lowered to [`Mutation`]s and
//! applied in document order; forward references are errors. Queries are
//! bound to the network state at the point where they appear.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use super::ast::*;
use crate::error::ModelError;
use crate::evolution::{whatif, Mutation, VisibilityDiff, WhatIfError};
use crate::model::{ContentId, Draft, MemberId, NetworkSnapshot, ROOT_CONTENT};
use crate::resolve::{self, ResolutionTrace, Resolver};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BindErrorKind {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("duplicate declaration: `{0}` already has a content block")]
    DuplicateContent(String),
    #[error("content root of `{owner}` must be named `{ROOT_CONTENT}`, found `{found}`")]
    ContentRoot { owner: String, found: String },
    #[error("{0} cannot appear in a mutation list")]
    NotAMutation(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{loc}: {kind}")]
pub struct BindError {
    pub loc: Loc,
    pub kind: BindErrorKind,
}

impl BindError {
    fn model(loc: Loc, e: ModelError) -> Self {
        BindError {
            loc,
            kind: BindErrorKind::Model(e),
        }
    }
}

fn path_string(p: &ContentPath) -> String {
    p.to_string()
}

/// Lowers a mutation statement.
pub fn lower_mutation(m: &MutationStmt) -> Mutation {
    match m {
        MutationStmt::AddMember { name } => Mutation::AddMember { name: name.clone() },
        MutationStmt::CreateGroup { name, parent } => Mutation::CreateGroup {
            name: name.clone(),
            parents: parent.iter().cloned().collect(),
            owner: None,
        },
        MutationStmt::DeleteGroup { name } => Mutation::DeleteGroup { name: name.clone() },
        MutationStmt::Join { member, group } => Mutation::Join {
            member: member.clone(),
            group: group.clone(),
        },
        MutationStmt::Leave { member, group } => Mutation::Leave {
            member: member.clone(),
            group: group.clone(),
        },
        MutationStmt::Move { member, to } => Mutation::Move {
            member: member.clone(),
            from: None,
            to: to.clone(),
        },
        MutationStmt::AddContent { owner, path } => Mutation::AddContent {
            owner: owner.clone(),
            path: path_string(path),
        },
        MutationStmt::RemoveContent { owner, path } => Mutation::RemoveContent {
            owner: owner.clone(),
            path: path_string(path),
        },
    }
}

fn lower_tree(
    owner: &str,
    prefix: &str,
    node: &ContentNode,
    loc: Loc,
    out: &mut Vec<(Loc, Mutation)>,
) {
    for child in node.children.iter().flatten() {
        let path = format!("{prefix}/{}", child.name);
        out.push((
            loc,
            Mutation::AddContent {
                owner: owner.to_string(),
                path: path.clone(),
            },
        ));
        lower_tree(owner, &path, child, loc, out);
    }
}

/// Lowers a declaration or mutation statement. Queries and what-if blocks
/// are rejected.
pub fn lower_statement(
    stmt: &Spanned<Statement>,
    seen_content: &mut HashSet<String>,
) -> Result<Vec<(Loc, Mutation)>, BindError> {
    let loc = stmt.loc;
    let mut out = Vec::new();
    match &stmt.node {
        Statement::Group(g) => out.push((
            loc,
            Mutation::CreateGroup {
                name: g.name.clone(),
                parents: g.parents.clone(),
                owner: g.owner.clone(),
            },
        )),
        Statement::Member(m) => {
            out.push((
                loc,
                Mutation::AddMember {
                    name: m.name.clone(),
                },
            ));
            for g in &m.groups {
                out.push((
                    loc,
                    Mutation::Join {
                        member: m.name.clone(),
                        group: g.clone(),
                    },
                ));
            }
        }
        Statement::Content(c) => {
            if !seen_content.insert(c.owner.clone()) {
                return Err(BindError {
                    loc,
                    kind: BindErrorKind::DuplicateContent(c.owner.clone()),
                });
            }
            if c.root.name != ROOT_CONTENT {
                return Err(BindError {
                    loc,
                    kind: BindErrorKind::ContentRoot {
                        owner: c.owner.clone(),
                        found: c.root.name.clone(),
                    },
                });
            }
            let prefix = format!("/{}", c.root.name);
            lower_tree(&c.owner, &prefix, &c.root, loc, &mut out);
        }
        Statement::Policy(p) => {
            if let Some(d) = p.default {
                out.push((
                    loc,
                    Mutation::SetDefaultProtocol {
                        owner: p.owner.clone(),
                        protocol: d.protocol(),
                    },
                ));
            }
            for r in &p.rules {
                out.push((
                    r.loc,
                    Mutation::SetAssignment {
                        owner: p.owner.clone(),
                        subject: r.node.subject.clone(),
                        path: path_string(&r.node.path),
                        mode: r.node.effect.mode(),
                        protocol: r.node.protocol.map(ProtoKw::protocol),
                    },
                ));
            }
        }
        Statement::Mutation(m) => out.push((loc, lower_mutation(m))),
        Statement::Query(_) => {
            return Err(BindError {
                loc,
                kind: BindErrorKind::NotAMutation("a query"),
            })
        }
        Statement::WhatIf(_) => {
            return Err(BindError {
                loc,
                kind: BindErrorKind::NotAMutation("a whatif block"),
            })
        }
    }
    Ok(out)
}

/// Reads a document as a plain list of mutations, e.g. for a what-if run.
pub fn mutations_from_document(doc: &Document) -> Result<Vec<(Loc, Mutation)>, BindError> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for s in &doc.statements {
        out.extend(lower_statement(s, &mut seen)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundQueryKind {
    Can {
        viewer: MemberId,
        owner: MemberId,
        content: ContentId,
    },
    Show {
        viewer: MemberId,
        owner: MemberId,
    },
    Audience {
        owner: MemberId,
        content: ContentId,
    },
    Explain {
        viewer: MemberId,
        owner: MemberId,
        content: ContentId,
    },
    WhatIf {
        mutations: Vec<(Loc, Mutation)>,
        owner: String,
    },
}

/// A query with its names resolved, tied to the network state it was
/// bound against.
#[derive(Debug, Clone)]
pub struct BoundQuery {
    pub loc: Loc,
    pub snapshot: NetworkSnapshot,
    pub kind: BoundQueryKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Answer {
    Verdict(ResolutionTrace),
    VisibleSet {
        viewer: MemberId,
        owner: MemberId,
        contents: BTreeSet<ContentId>,
    },
    Audience {
        owner: MemberId,
        content: ContentId,
        members: BTreeSet<MemberId>,
    },
    Explain(ResolutionTrace),
    Diff(VisibilityDiff),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{loc}: {kind}")]
pub struct QueryError {
    pub loc: Loc,
    pub kind: WhatIfError,
}

impl BoundQuery {
    pub fn run(&self) -> Result<Answer, QueryError> {
        let snap = &self.snapshot;
        let at = |loc: Loc| {
            move |e: ModelError| QueryError {
                loc,
                kind: WhatIfError::Diff(e),
            }
        };
        Ok(match &self.kind {
            BoundQueryKind::Can {
                viewer,
                owner,
                content,
            } => Answer::Verdict(
                resolve::resolve(snap, *viewer, *owner, *content).map_err(at(self.loc))?,
            ),
            BoundQueryKind::Show { viewer, owner } => Answer::VisibleSet {
                viewer: *viewer,
                owner: *owner,
                contents: Resolver::new(snap, *owner)
                    .and_then(|r| r.visible_set(*viewer))
                    .map_err(at(self.loc))?,
            },
            BoundQueryKind::Audience { owner, content } => Answer::Audience {
                owner: *owner,
                content: *content,
                members: resolve::audience(snap, *owner, *content).map_err(at(self.loc))?,
            },
            BoundQueryKind::Explain {
                viewer,
                owner,
                content,
            } => Answer::Explain(
                resolve::explain(snap, *viewer, *owner, *content).map_err(at(self.loc))?,
            ),
            BoundQueryKind::WhatIf { mutations, owner } => {
                let ms: Vec<Mutation> = mutations.iter().map(|(_, m)| m.clone()).collect();
                let diff = whatif(snap, &ms, owner).map_err(|kind| {
                    let loc = match &kind {
                        WhatIfError::Batch(b) => mutations[b.index].0,
                        WhatIfError::Diff(_) => self.loc,
                    };
                    QueryError { loc, kind }
                })?;
                Answer::Diff(diff)
            }
        })
    }
}

/// Incremental binder over a base snapshot.
pub struct Binder {
    draft: Draft,
    frozen: Option<NetworkSnapshot>,
    seen_content: HashSet<String>,
}

impl Binder {
    pub fn new(base: &NetworkSnapshot) -> Self {
        Binder {
            draft: base.edit(),
            frozen: Some(base.clone()),
            seen_content: HashSet::new(),
        }
    }

    fn current(&mut self) -> NetworkSnapshot {
        self.frozen
            .get_or_insert_with(|| self.draft.snapshot())
            .clone()
    }

    /// Applies one statement. Queries come back bound; everything else
    /// returns `None`.
    pub fn statement(
        &mut self,
        stmt: &Spanned<Statement>,
    ) -> Result<Option<BoundQuery>, BindError> {
        let loc = stmt.loc;
        match &stmt.node {
            Statement::Query(q) => {
                let snapshot = self.current();
                let kind = bind_query(&snapshot, q).map_err(|e| BindError::model(loc, e))?;
                Ok(Some(BoundQuery {
                    loc,
                    snapshot,
                    kind,
                }))
            }
            Statement::WhatIf(w) => {
                let snapshot = self.current();
                snapshot
                    .member_by_name(&w.owner)
                    .map_err(|e| BindError::model(loc, e))?;
                let mutations = w
                    .mutations
                    .iter()
                    .map(|m| (m.loc, lower_mutation(&m.node)))
                    .collect();
                Ok(Some(BoundQuery {
                    loc,
                    snapshot,
                    kind: BoundQueryKind::WhatIf {
                        mutations,
                        owner: w.owner.clone(),
                    },
                }))
            }
            _ => {
                let ms = lower_statement(stmt, &mut self.seen_content)?;
                if !ms.is_empty() {
                    self.frozen = None;
                }
                for (loc, m) in ms {
                    self.draft.apply(&m).map_err(|e| BindError::model(loc, e))?;
                }
                Ok(None)
            }
        }
    }

    pub fn finish(self) -> NetworkSnapshot {
        self.draft.commit()
    }
}

fn bind_query(snap: &NetworkSnapshot, q: &Query) -> Result<BoundQueryKind, ModelError> {
    let content = |owner: MemberId, path: &ContentPath| snap.resolve_path(owner, &path.to_string());
    Ok(match q {
        Query::Can {
            viewer,
            owner,
            path,
        } => {
            let (viewer, owner) = (snap.member_by_name(viewer)?, snap.member_by_name(owner)?);
            BoundQueryKind::Can {
                viewer,
                owner,
                content: content(owner, path)?,
            }
        }
        Query::Show { viewer, owner } => BoundQueryKind::Show {
            viewer: snap.member_by_name(viewer)?,
            owner: snap.member_by_name(owner)?,
        },
        Query::Audience { owner, path } => {
            let owner = snap.member_by_name(owner)?;
            BoundQueryKind::Audience {
                owner,
                content: content(owner, path)?,
            }
        }
        Query::Explain {
            viewer,
            owner,
            path,
        } => {
            let (viewer, owner) = (snap.member_by_name(viewer)?, snap.member_by_name(owner)?);
            BoundQueryKind::Explain {
                viewer,
                owner,
                content: content(owner, path)?,
            }
        }
    })
}

/// Result of binding a whole document.
#[derive(Debug, Clone)]
pub struct Bound {
    pub snapshot: NetworkSnapshot,
    pub queries: Vec<BoundQuery>,
}

/// Binds onto an existing snapshot; nothing is committed unless every
/// statement succeeds.
pub fn bind_onto(base: &NetworkSnapshot, doc: &Document) -> Result<Bound, BindError> {
    let mut binder = Binder::new(base);
    let mut queries = Vec::new();
    for s in &doc.statements {
        if let Some(q) = binder.statement(s)? {
            queries.push(q);
        }
    }
    Ok(Bound {
        snapshot: binder.finish(),
        queries,
    })
}

pub fn bind(doc: &Document) -> Result<Bound, BindError> {
    bind_onto(&NetworkSnapshot::new(), doc)
}
