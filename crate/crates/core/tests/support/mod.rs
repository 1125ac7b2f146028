#![allow(dead_code)]

use proptest::collection::vec;
use proptest::option;
use proptest::prelude::*;

use pvn::lang::ast::{
    ContentDecl, ContentNode, ContentPath, Effect, GroupDecl, MemberDecl, MutationStmt,
    PolicyBlock, ProtoKw, Query, Rule, Spanned, Statement, WhatIfBlock,
};
use pvn::lang::{Document, Loc};
use pvn::NetworkSnapshot;

pub const FIG1: &str = include_str!("../../fixtures/fig1.pvn");
pub const REASSIGN: &str = include_str!("../../fixtures/reassign.pvn");

pub fn fig1() -> NetworkSnapshot {
    pvn::lang::load(FIG1).expect("fixture loads").snapshot
}

fn sp<T>(node: T) -> Spanned<T> {
    Spanned::new(node, Loc::default())
}

/// Capitalised identifiers, so they never collide with keywords.
pub fn name() -> impl Strategy<Value = String> {
    "[A-Z][a-zA-Z0-9_]{0,5}"
}

pub fn path() -> impl Strategy<Value = ContentPath> {
    vec(name(), 1..4).prop_map(ContentPath)
}

fn proto() -> impl Strategy<Value = ProtoKw> {
    prop_oneof![
        Just(ProtoKw::Optimistic),
        Just(ProtoKw::Pessimistic),
        Just(ProtoKw::Cautious)
    ]
}

fn content_node() -> impl Strategy<Value = ContentNode> {
    let leaf = name().prop_map(|name| ContentNode {
        name,
        children: None,
    });
    leaf.prop_recursive(3, 16, 4, |inner| {
        (name(), vec(inner, 0..4)).prop_map(|(name, kids)| ContentNode {
            name,
            children: Some(kids),
        })
    })
}

fn rule() -> impl Strategy<Value = Rule> {
    (
        prop_oneof![Just(Effect::Allow), Just(Effect::Deny)],
        prop_oneof![Just("all".to_string()), name()],
        path(),
        option::of(proto()),
    )
        .prop_map(|(effect, subject, path, protocol)| Rule {
            effect,
            subject,
            path,
            protocol,
        })
}

fn query() -> impl Strategy<Value = Query> {
    prop_oneof![
        (name(), name(), path()).prop_map(|(viewer, owner, path)| Query::Can {
            viewer,
            owner,
            path
        }),
        (name(), name()).prop_map(|(viewer, owner)| Query::Show { viewer, owner }),
        (name(), path()).prop_map(|(owner, path)| Query::Audience { owner, path }),
        (name(), name(), path()).prop_map(|(viewer, owner, path)| Query::Explain {
            viewer,
            owner,
            path
        }),
    ]
}

fn mutation() -> impl Strategy<Value = MutationStmt> {
    prop_oneof![
        name().prop_map(|name| MutationStmt::AddMember { name }),
        (name(), option::of(name()))
            .prop_map(|(name, parent)| MutationStmt::CreateGroup { name, parent }),
        name().prop_map(|name| MutationStmt::DeleteGroup { name }),
        (name(), name()).prop_map(|(member, group)| MutationStmt::Join { member, group }),
        (name(), name()).prop_map(|(member, group)| MutationStmt::Leave { member, group }),
        (name(), name()).prop_map(|(member, to)| MutationStmt::Move { member, to }),
        (name(), path()).prop_map(|(owner, path)| MutationStmt::AddContent { owner, path }),
        (name(), path()).prop_map(|(owner, path)| MutationStmt::RemoveContent { owner, path }),
    ]
}

pub fn statement() -> impl Strategy<Value = Statement> {
    prop_oneof![
        (name(), vec(name(), 0..3), option::of(name())).prop_map(|(name, parents, owner)| {
            Statement::Group(GroupDecl {
                name,
                parents,
                owner,
            })
        }),
        (name(), vec(name(), 0..3))
            .prop_map(|(name, groups)| Statement::Member(MemberDecl { name, groups })),
        (name(), content_node())
            .prop_map(|(owner, root)| Statement::Content(ContentDecl { owner, root })),
        (name(), option::of(proto()), vec(rule(), 0..4)).prop_map(|(owner, default, rules)| {
            Statement::Policy(PolicyBlock {
                owner,
                default,
                rules: rules.into_iter().map(sp).collect(),
            })
        }),
        query().prop_map(Statement::Query),
        (vec(mutation(), 0..4), name()).prop_map(|(ms, owner)| {
            Statement::WhatIf(WhatIfBlock {
                mutations: ms.into_iter().map(sp).collect(),
                owner,
            })
        }),
        mutation().prop_map(Statement::Mutation),
    ]
}

pub fn document() -> impl Strategy<Value = Document> {
    vec(statement(), 0..8).prop_map(|stmts| Document {
        statements: stmts.into_iter().map(sp).collect(),
    })
}
