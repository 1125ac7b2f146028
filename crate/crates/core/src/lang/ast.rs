use std::fmt;

use crate::store::{Mode, Protocol};

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Loc {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Loc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// A node with its source location. Equality ignores the location, so
/// documents compare structurally.
#[derive(Debug, Clone, Eq)]
pub struct Spanned<T> {
    pub node: T,
    pub loc: Loc,
}

impl<T> Spanned<T> {
    pub fn new(node: T, loc: Loc) -> Self {
        Spanned { node, loc }
    }
}

impl<T: PartialEq> PartialEq for Spanned<T> {
    fn eq(&self, other: &Self) -> bool {
        self.node == other.node
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Document {
    pub statements: Vec<Spanned<Statement>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Statement {
    Group(GroupDecl),
    Member(MemberDecl),
    Content(ContentDecl),
    Policy(PolicyBlock),
    Query(Query),
    WhatIf(WhatIfBlock),
    Mutation(MutationStmt),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupDecl {
    pub name: String,
    pub parents: Vec<String>,
    pub owner: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemberDecl {
    pub name: String,
    pub groups: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContentDecl {
    pub owner: String,
    pub root: ContentNode,
}

/// `children` is `None` for a leaf written `Name;` and `Some` for
/// `Name { ... }`, even when the braces are empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContentNode {
    pub name: String,
    pub children: Option<Vec<ContentNode>>,
}

/// Protocol keyword as written; `cautious` is kept distinct so printing
/// reproduces the source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProtoKw {
    Optimistic,
    Pessimistic,
    Cautious,
}

impl ProtoKw {
    pub fn protocol(self) -> Protocol {
        match self {
            ProtoKw::Optimistic => Protocol::Optimistic,
            ProtoKw::Pessimistic | ProtoKw::Cautious => Protocol::Pessimistic,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ProtoKw::Optimistic => "optimistic",
            ProtoKw::Pessimistic => "pessimistic",
            ProtoKw::Cautious => "cautious",
        }
    }
}

impl From<Protocol> for ProtoKw {
    fn from(p: Protocol) -> Self {
        match p {
            Protocol::Optimistic => ProtoKw::Optimistic,
            Protocol::Pessimistic => ProtoKw::Pessimistic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Effect {
    Allow,
    Deny,
}

impl Effect {
    pub fn mode(self) -> Mode {
        match self {
            Effect::Allow => Mode::Visible,
            Effect::Deny => Mode::Invisible,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Effect::Allow => "allow",
            Effect::Deny => "deny",
        }
    }
}

impl From<Mode> for Effect {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Visible => Effect::Allow,
            Mode::Invisible => Effect::Deny,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub effect: Effect,
    pub subject: String,
    pub path: ContentPath,
    pub protocol: Option<ProtoKw>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolicyBlock {
    pub owner: String,
    pub default: Option<ProtoKw>,
    pub rules: Vec<Spanned<Rule>>,
}

/// A `/A/B/C` path as a list of segments.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContentPath(pub Vec<String>);

impl ContentPath {
    pub fn parse(text: &str) -> Option<Self> {
        let rest = text.strip_prefix('/')?;
        let segs: Vec<String> = rest.split('/').map(str::to_string).collect();
        segs.iter()
            .all(|s| crate::model::is_valid_name(s))
            .then_some(ContentPath(segs))
    }
}

impl fmt::Display for ContentPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for seg in &self.0 {
            write!(f, "/{seg}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Query {
    /// `can V see O:/path;`
    Can {
        viewer: String,
        owner: String,
        path: ContentPath,
    },
    /// `show V for O;`
    Show { viewer: String, owner: String },
    /// `audience O:/path;`
    Audience { owner: String, path: ContentPath },
    /// `explain V see O:/path;`
    Explain {
        viewer: String,
        owner: String,
        path: ContentPath,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WhatIfBlock {
    pub mutations: Vec<Spanned<MutationStmt>>,
    pub owner: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MutationStmt {
    AddMember {
        name: String,
    },
    CreateGroup {
        name: String,
        parent: Option<String>,
    },
    DeleteGroup {
        name: String,
    },
    Join {
        member: String,
        group: String,
    },
    Leave {
        member: String,
        group: String,
    },
    Move {
        member: String,
        to: String,
    },
    AddContent {
        owner: String,
        path: ContentPath,
    },
    RemoveContent {
        owner: String,
        path: ContentPath,
    },
}
