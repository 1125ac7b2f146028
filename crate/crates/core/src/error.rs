use thiserror::Error;

/// Errors raised by structural and assignment operations on a network.
///
/// Variants carry names rather than raw ids so that messages are useful
/// without access to the snapshot that produced them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("name `{0}` is already in use")]
    DuplicateName(String),
    #[error("`{0}` is not a valid name (expected [A-Za-z_][A-Za-z0-9_]*)")]
    InvalidName(String),
    #[error("unknown member `{0}`")]
    UnknownMember(String),
    #[error("unknown group `{0}`")]
    UnknownGroup(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("unknown content path `{path}` for `{owner}`")]
    UnknownPath { owner: String, path: String },
    #[error("unknown content node #{0}")]
    UnknownContent(u32),
    #[error("cannot place `{child}` under `{parent}`: they belong to different hierarchies")]
    CrossHierarchy { child: String, parent: String },
    #[error("edge `{child}` < `{parent}` would create a cycle")]
    CycleDetected { child: String, parent: String },
    #[error("membership in `all` is implicit and cannot be changed")]
    CannotModifyAll,
    #[error("member `{member}` is not in group `{group}`")]
    NotAMember { member: String, group: String },
    #[error("`{parent}` already has a child named `{name}`")]
    DuplicateSiblingName { parent: String, name: String },
    #[error("cannot remove the root of `{0}`'s content tree")]
    CannotRemoveRoot(String),
    #[error("content `{path}` is not in `{owner}`'s tree")]
    ForeignContent { owner: String, path: String },
    #[error(
        "group `{group}` belongs to another member's hierarchy and cannot be used by `{owner}`"
    )]
    ForeignSubjectHierarchy { owner: String, group: String },
    #[error("no assignment by `{owner}` for `{subject}` on `{path}`")]
    AssignmentNotFound {
        owner: String,
        subject: String,
        path: String,
    },
}
