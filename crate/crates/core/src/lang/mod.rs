//! The `.pvn` policy language.
//!
//! ```text
//! group Michiganders;
//! group PistonFans < Michiganders;
//! member Bob in PistonFans;
//! member Nina;
//! content Nina { Everything { Blog; } }
//! policy Nina default optimistic {
//!   allow PistonFans:/Everything/Blog;
//! }
//! can Bob see Nina:/Everything/Blog;
//! ```
//!
//! The same text format doubles as the on-disk form of a snapshot, see
//! [`print_snapshot`].

pub mod ast;
mod binder;
mod lexer;
mod parser;
mod printer;

use thiserror::Error;

pub use ast::{Document, Loc};
pub use binder::{
    bind, bind_onto, lower_mutation, lower_statement, mutations_from_document, Answer, BindError,
    BindErrorKind, Binder, Bound, BoundQuery, BoundQueryKind, QueryError,
};
pub use parser::{parse, SyntaxError};
pub use printer::{print_document, print_snapshot};

use crate::model::NetworkSnapshot;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Bind(#[from] BindError),
}

/// Parses and binds a document onto an empty network.
pub fn load(src: &str) -> Result<Bound, LoadError> {
    Ok(bind(&parse(src)?)?)
}

/// Parses and binds a document onto `base`.
pub fn load_onto(base: &NetworkSnapshot, src: &str) -> Result<Bound, LoadError> {
    Ok(bind_onto(base, &parse(src)?)?)
}
