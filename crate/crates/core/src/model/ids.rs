use std::fmt;

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident, $prefix:literal) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub(crate) u32);

        impl $name {
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, concat!($prefix, "#{}"), self.0)
            }
        }
    };
}

id_type!(
    /// Identifies a member. Members are never deleted, so ids are stable
    /// across every snapshot derived from the same origin.
    MemberId,
    "member"
);
id_type!(
    /// Identifies a group. [`GroupId::ALL`] is the universal group.
    GroupId,
    "group"
);
id_type!(
    /// Identifies a node in some member's content tree.
    ContentId,
    "content"
);

impl GroupId {
    /// The universal group every member implicitly belongs to.
    pub const ALL: GroupId = GroupId(0);
}

/// Which hierarchy a group lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Hierarchy {
    System,
    User(MemberId),
}

/// Name of the universal group.
pub const ALL_GROUP: &str = "all";

/// Name given to the root of every content tree.
pub const ROOT_CONTENT: &str = "Everything";

/// Names follow the policy language's identifier syntax so that any
/// snapshot can be written out and read back.
pub fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
