//! Privacy policy engine for evolving social networks.
//!
//! Members belong to groups arranged in a DAG under the universal group
//! `all`, plus any private hierarchies members build for themselves. Each
//! member owns a tree of content. Owners attach visible/invisible
//! assignments to (subject, content node) pairs; those rights flow down the
//! group DAG and the content tree, are overridden by more specific
//! assignments, and are combined across alternate membership paths by an
//! optimistic or pessimistic protocol. Anything not granted is invisible.
//!
//! * [`model`]: network structure and immutable snapshots.
//! * [`store`]: the assignment store.
//! * [`synth`]: seeded random networks for tests and benchmarks.
//! * [`resolve`](mod@resolve): verdicts, traces, visible sets and audiences.
//! * [`evolution`]: atomic batches, visibility diffs and what-if runs.
//! * [`lang`]: the `.pvn` policy language (parser, binder, printer).
//! * [`cli`]: the `pvn` command-line front end.

pub mod cli;
pub mod error;
pub mod evolution;
pub mod lang;
pub mod model;
pub mod resolve;
pub mod store;
pub mod synth;

pub use error::ModelError;
pub use evolution::{apply_batch, diff_visibility, whatif, Mutation, VisibilityDiff};
pub use model::{ContentId, Draft, GroupId, MemberId, Network, NetworkSnapshot};
pub use resolve::{
    audience, explain, resolve, resolve_by_paths, visible_set, PathNode, ResolutionTrace, Resolver,
};
pub use store::{Assignment, Mode, Protocol, Subject};
