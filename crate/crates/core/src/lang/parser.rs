use thiserror::Error;

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};

/// First syntax error in a document.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{loc}: syntax error: expected {}, found {found}", .expected.join(" or "))]
pub struct SyntaxError {
    pub loc: Loc,
    pub found: String,
    /// Every token that would have been accepted at `loc`.
    pub expected: Vec<String>,
}

const STATEMENT_KEYWORDS: &[&str] = &[
    "group", "member", "content", "policy", "can", "show", "audience", "explain", "whatif",
    "create", "delete", "join", "leave", "move", "add", "remove",
];

pub fn parse(src: &str) -> Result<Document, SyntaxError> {
    let toks = tokenize(src).map_err(|e| SyntaxError {
        loc: e.loc,
        found: format!("`{}`", e.found),
        expected: vec!["a name or punctuation".to_string()],
    })?;
    let mut p = Parser {
        toks,
        pos: 0,
        expected: Vec::new(),
    };
    let mut statements = Vec::new();
    while p.peek().tok != Tok::Eof {
        statements.push(p.statement()?);
    }
    Ok(Document { statements })
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    /// Alternatives already tried at the current position.
    expected: Vec<String>,
}

type PResult<T> = Result<T, SyntaxError>;

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn loc(&self) -> Loc {
        self.peek().loc
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        self.expected.clear();
        t
    }

    fn error(&mut self, what: impl Into<String>) -> SyntaxError {
        let mut expected = std::mem::take(&mut self.expected);
        let what = what.into();
        if !expected.contains(&what) {
            expected.push(what);
        }
        SyntaxError {
            loc: self.loc(),
            found: self.peek().tok.to_string(),
            expected,
        }
    }

    /// Consumes `tok` if present, otherwise records it as an alternative.
    fn eat(&mut self, tok: Tok) -> bool {
        if self.peek().tok == tok {
            self.bump();
            true
        } else {
            let s = tok.to_string();
            if !self.expected.contains(&s) {
                self.expected.push(s);
            }
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if self.eat(tok.clone()) {
            Ok(())
        } else {
            Err(self.error(tok.to_string()))
        }
    }

    fn at_kw(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Name(n) if n == kw)
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.at_kw(kw) {
            self.bump();
            true
        } else {
            let s = format!("`{kw}`");
            if !self.expected.contains(&s) {
                self.expected.push(s);
            }
            false
        }
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<()> {
        if self.eat_kw(kw) {
            Ok(())
        } else {
            Err(self.error(format!("`{kw}`")))
        }
    }

    fn name(&mut self, what: &str) -> PResult<String> {
        match &self.peek().tok {
            Tok::Name(n) => {
                let n = n.clone();
                self.bump();
                Ok(n)
            }
            _ => Err(self.error(what.to_string())),
        }
    }

    fn name_list(&mut self, what: &str) -> PResult<Vec<String>> {
        let mut names = vec![self.name(what)?];
        while self.eat(Tok::Comma) {
            names.push(self.name(what)?);
        }
        Ok(names)
    }

    fn path(&mut self) -> PResult<ContentPath> {
        self.expect(Tok::Slash)?;
        let mut segs = vec![self.name("content name")?];
        while self.eat(Tok::Slash) {
            segs.push(self.name("content name")?);
        }
        Ok(ContentPath(segs))
    }

    fn protocol(&mut self) -> PResult<ProtoKw> {
        for (kw, p) in [
            ("optimistic", ProtoKw::Optimistic),
            ("pessimistic", ProtoKw::Pessimistic),
            ("cautious", ProtoKw::Cautious),
        ] {
            if self.eat_kw(kw) {
                return Ok(p);
            }
        }
        Err(self.error("a protocol"))
    }

    fn statement(&mut self) -> PResult<Spanned<Statement>> {
        let loc = self.loc();
        let Tok::Name(kw) = self.peek().tok.clone() else {
            return Err(self.error("a statement"));
        };
        let stmt = match kw.as_str() {
            "group" => Statement::Group(self.group_decl()?),
            "member" => Statement::Member(self.member_decl()?),
            "content" => Statement::Content(self.content_decl()?),
            "policy" => Statement::Policy(self.policy_block()?),
            "can" | "show" | "audience" | "explain" => Statement::Query(self.query()?),
            "whatif" => Statement::WhatIf(self.whatif()?),
            k if STATEMENT_KEYWORDS.contains(&k) => {
                let m = self.mutation()?;
                self.expect(Tok::Semi)?;
                Statement::Mutation(m)
            }
            _ => {
                let expected = STATEMENT_KEYWORDS
                    .iter()
                    .map(|k| format!("`{k}`"))
                    .collect();
                return Err(SyntaxError {
                    loc,
                    found: self.peek().tok.to_string(),
                    expected,
                });
            }
        };
        Ok(Spanned::new(stmt, loc))
    }

    fn group_decl(&mut self) -> PResult<GroupDecl> {
        self.expect_kw("group")?;
        let name = self.name("group name")?;
        let parents = if self.eat(Tok::Lt) {
            self.name_list("group name")?
        } else {
            Vec::new()
        };
        let owner = if self.eat_kw("owner") {
            Some(self.name("member name")?)
        } else {
            None
        };
        self.expect(Tok::Semi)?;
        Ok(GroupDecl {
            name,
            parents,
            owner,
        })
    }

    fn member_decl(&mut self) -> PResult<MemberDecl> {
        self.expect_kw("member")?;
        let name = self.name("member name")?;
        let groups = if self.eat_kw("in") {
            self.name_list("group name")?
        } else {
            Vec::new()
        };
        self.expect(Tok::Semi)?;
        Ok(MemberDecl { name, groups })
    }

    fn content_decl(&mut self) -> PResult<ContentDecl> {
        self.expect_kw("content")?;
        let owner = self.name("member name")?;
        self.expect(Tok::LBrace)?;
        let root = self.tree()?;
        self.expect(Tok::RBrace)?;
        Ok(ContentDecl { owner, root })
    }

    fn tree(&mut self) -> PResult<ContentNode> {
        let name = self.name("content name")?;
        if self.eat(Tok::Semi) {
            return Ok(ContentNode {
                name,
                children: None,
            });
        }
        self.expect(Tok::LBrace)?;
        let mut children = Vec::new();
        while !self.eat(Tok::RBrace) {
            if !matches!(self.peek().tok, Tok::Name(_)) {
                return Err(self.error("content name"));
            }
            children.push(self.tree()?);
        }
        Ok(ContentNode {
            name,
            children: Some(children),
        })
    }

    fn policy_block(&mut self) -> PResult<PolicyBlock> {
        self.expect_kw("policy")?;
        let owner = self.name("member name")?;
        let default = if self.eat_kw("default") {
            Some(self.protocol()?)
        } else {
            None
        };
        self.expect(Tok::LBrace)?;
        let mut rules = Vec::new();
        loop {
            if self.eat(Tok::RBrace) {
                break;
            }
            let loc = self.loc();
            let effect = if self.eat_kw("allow") {
                Effect::Allow
            } else if self.eat_kw("deny") {
                Effect::Deny
            } else {
                return Err(self.error("a rule"));
            };
            let subject = self.name("subject")?;
            self.expect(Tok::Colon)?;
            let path = self.path()?;
            let protocol = if self.eat(Tok::LBracket) {
                let p = self.protocol()?;
                self.expect(Tok::RBracket)?;
                Some(p)
            } else {
                None
            };
            self.expect(Tok::Semi)?;
            rules.push(Spanned::new(
                Rule {
                    effect,
                    subject,
                    path,
                    protocol,
                },
                loc,
            ));
        }
        Ok(PolicyBlock {
            owner,
            default,
            rules,
        })
    }

    fn query(&mut self) -> PResult<Query> {
        let q = if self.eat_kw("can") {
            let viewer = self.name("member name")?;
            self.expect_kw("see")?;
            let owner = self.name("member name")?;
            self.expect(Tok::Colon)?;
            let path = self.path()?;
            Query::Can {
                viewer,
                owner,
                path,
            }
        } else if self.eat_kw("show") {
            let viewer = self.name("member name")?;
            self.expect_kw("for")?;
            let owner = self.name("member name")?;
            Query::Show { viewer, owner }
        } else if self.eat_kw("audience") {
            let owner = self.name("member name")?;
            self.expect(Tok::Colon)?;
            let path = self.path()?;
            Query::Audience { owner, path }
        } else {
            self.expect_kw("explain")?;
            let viewer = self.name("member name")?;
            self.expect_kw("see")?;
            let owner = self.name("member name")?;
            self.expect(Tok::Colon)?;
            let path = self.path()?;
            Query::Explain {
                viewer,
                owner,
                path,
            }
        };
        self.expect(Tok::Semi)?;
        Ok(q)
    }

    fn whatif(&mut self) -> PResult<WhatIfBlock> {
        self.expect_kw("whatif")?;
        self.expect(Tok::LBrace)?;
        let mut mutations = Vec::new();
        while !self.eat(Tok::RBrace) {
            let loc = self.loc();
            let m = self.mutation()?;
            self.expect(Tok::Semi)?;
            mutations.push(Spanned::new(m, loc));
        }
        self.expect_kw("diff")?;
        let owner = self.name("member name")?;
        self.expect(Tok::Semi)?;
        Ok(WhatIfBlock { mutations, owner })
    }

    fn mutation(&mut self) -> PResult<MutationStmt> {
        if self.eat_kw("create") {
            self.expect_kw("group")?;
            let name = self.name("group name")?;
            let parent = if self.eat(Tok::Lt) {
                Some(self.name("group name")?)
            } else {
                None
            };
            Ok(MutationStmt::CreateGroup { name, parent })
        } else if self.eat_kw("delete") {
            self.expect_kw("group")?;
            Ok(MutationStmt::DeleteGroup {
                name: self.name("group name")?,
            })
        } else if self.eat_kw("join") {
            let member = self.name("member name")?;
            let group = self.name("group name")?;
            Ok(MutationStmt::Join { member, group })
        } else if self.eat_kw("leave") {
            let member = self.name("member name")?;
            let group = self.name("group name")?;
            Ok(MutationStmt::Leave { member, group })
        } else if self.eat_kw("move") {
            let member = self.name("member name")?;
            self.expect_kw("to")?;
            let to = self.name("group name")?;
            Ok(MutationStmt::Move { member, to })
        } else if self.eat_kw("add") {
            if self.eat_kw("member") {
                return Ok(MutationStmt::AddMember {
                    name: self.name("member name")?,
                });
            }
            self.expect_kw("content")?;
            let owner = self.name("member name")?;
            self.expect(Tok::Colon)?;
            let path = self.path()?;
            Ok(MutationStmt::AddContent { owner, path })
        } else if self.eat_kw("remove") {
            self.expect_kw("content")?;
            let owner = self.name("member name")?;
            self.expect(Tok::Colon)?;
            let path = self.path()?;
            Ok(MutationStmt::RemoveContent { owner, path })
        } else {
            Err(self.error("a mutation"))
        }
    }
}
