//! Def-use analysis over MiniLang ASTs, used by the dataflow component of the
//! composite code metric.
//!
//! Scoping is lexical with shadowing: a `let` binds its name from the end of
//! its own statement to the end of the enclosing block; an `if` body is a
//! nested block whose bindings die at `}`. The right-hand side of a `let` is
//! analysed before the name is bound, so `let a = a + 1 ;` uses the previous
//! `a`.

use std::collections::{BTreeSet, HashMap};

use super::{AstNode, Token, TokenClass};

/// One def-use link. Occurrences are identified by leaf position in the
/// rendered token stream (0-based).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DefUsePair {
    pub name: String,
    pub def_pos: usize,
    pub use_pos: usize,
}

/// Pair every identifier use with the most recent in-scope `let` definition
/// of the same name. Uses with no definition are unpaired.
pub fn defuse_pairs(ast: &AstNode) -> BTreeSet<DefUsePair> {
    let mut pairs = BTreeSet::new();
    let mut scopes: Vec<HashMap<String, usize>> = vec![HashMap::new()];
    let mut pos = 0usize;
    walk(ast, &mut scopes, &mut pos, &mut pairs);
    pairs
}

fn lookup(scopes: &[HashMap<String, usize>], name: &str) -> Option<usize> {
    scopes.iter().rev().find_map(|s| s.get(name).copied())
}

fn walk(
    node: &AstNode,
    scopes: &mut Vec<HashMap<String, usize>>,
    pos: &mut usize,
    pairs: &mut BTreeSet<DefUsePair>,
) {
    match node {
        AstNode::Leaf(Token { lexeme, class }) => {
            if *class == TokenClass::Id {
                if let Some(def_pos) = lookup(scopes, lexeme) {
                    pairs.insert(DefUsePair { name: lexeme.clone(), def_pos, use_pos: *pos });
                }
            }
            *pos += 1;
        }
        AstNode::Internal { children, .. } => {
            match statement_kind(children) {
                Some(StmtKind::Let) => {
                    // children: 'let' ID assign Expr ';' — rhs first, then bind.
                    let (name, def_pos) = match &children[1] {
                        AstNode::Leaf(t) => (t.lexeme.clone(), *pos + 1),
                        _ => unreachable!("let binder is a leaf"),
                    };
                    *pos += 3; // let, ID, assign
                    walk(&children[3], scopes, pos, pairs);
                    *pos += 1; // ';'
                    scopes.last_mut().unwrap().insert(name, def_pos);
                }
                Some(StmtKind::If) => {
                    // children: 'if' '(' Expr ')' '{' Prog '}'
                    *pos += 2;
                    walk(&children[2], scopes, pos, pairs);
                    *pos += 2; // ')' '{'
                    scopes.push(HashMap::new());
                    walk(&children[5], scopes, pos, pairs);
                    scopes.pop();
                    *pos += 1; // '}'
                }
                None => {
                    for c in children {
                        walk(c, scopes, pos, pairs);
                    }
                }
            }
        }
    }
}

enum StmtKind {
    Let,
    If,
}

fn statement_kind(children: &[AstNode]) -> Option<StmtKind> {
    match children.first() {
        Some(AstNode::Leaf(t)) if t.lexeme == "let" && children.len() == 5 => Some(StmtKind::Let),
        Some(AstNode::Leaf(t)) if t.lexeme == "if" && children.len() == 7 => Some(StmtKind::If),
        _ => None,
    }
}
