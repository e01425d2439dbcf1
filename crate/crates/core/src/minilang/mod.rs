//! MiniLang: a small deterministic language that stands in for a "real"
//! programming language at desk scale.
//!
//! The grammar is LL(1) after left-factoring (alternatives may share a common
//! prefix; the decision is deferred to the first token after it). Ten
//! productions cover statements (`let`, `return`, `if`), right-nested `+`
//! expressions and parenthesised terms. Two surface dialects share the same
//! production inventory and differ only in the assignment token (`=` vs `:=`),
//! which gives a translation task without a second grammar.

mod analysis;
mod lexer;
mod parser;
mod text;

pub use analysis::{defuse_pairs, DefUsePair};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Classification of a surface token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TokenClass {
    /// A keyword or punctuation token with a single fixed spelling.
    Fixed,
    /// An identifier drawn from the closed ID inventory.
    Id,
    /// A numeric literal 0..=99.
    Num,
}

impl fmt::Display for TokenClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenClass::Fixed => write!(f, "fixed"),
            TokenClass::Id => write!(f, "ID"),
            TokenClass::Num => write!(f, "NUM"),
        }
    }
}

/// One surface token: a lexeme plus its class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Token {
    pub lexeme: String,
    pub class: TokenClass,
}

impl Token {
    pub fn fixed(lexeme: &str) -> Self {
        Token { lexeme: lexeme.to_string(), class: TokenClass::Fixed }
    }

    pub fn id(lexeme: &str) -> Self {
        Token { lexeme: lexeme.to_string(), class: TokenClass::Id }
    }

    pub fn num(lexeme: &str) -> Self {
        Token { lexeme: lexeme.to_string(), class: TokenClass::Num }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.lexeme)
    }
}

/// A grammar symbol: a nonterminal, a fixed terminal, or a terminal class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Symbol {
    Nonterminal(String),
    /// Fixed terminal; the name of the symbol is its lexeme.
    Fixed(String),
    Class(TokenClass),
}

impl Symbol {
    pub fn nt(name: &str) -> Self {
        Symbol::Nonterminal(name.to_string())
    }

    pub fn fixed(lexeme: &str) -> Self {
        Symbol::Fixed(lexeme.to_string())
    }

    /// Does `token` satisfy this (terminal) symbol?
    pub fn matches(&self, token: &Token) -> bool {
        match self {
            Symbol::Nonterminal(_) => false,
            Symbol::Fixed(lex) => token.class == TokenClass::Fixed && token.lexeme == *lex,
            Symbol::Class(c) => token.class == *c,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Nonterminal(n) => write!(f, "{n}"),
            Symbol::Fixed(l) => write!(f, "'{l}'"),
            Symbol::Class(c) => write!(f, "{c}"),
        }
    }
}

/// One grammar production `lhs -> rhs`, with a dense id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Production {
    pub id: usize,
    pub lhs: String,
    pub rhs: Vec<Symbol>,
}

impl fmt::Display for Production {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ->", self.lhs)?;
        for s in &self.rhs {
            write!(f, " {s}")?;
        }
        Ok(())
    }
}

/// Pattern definition for a terminal class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassDef {
    pub class: TokenClass,
    pub pattern: String,
}

/// Surface dialect. Dialect A writes assignment as `=`, dialect B as `:=`.
/// Everything else, including production ids, is identical.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dialect {
    A,
    B,
}

impl Dialect {
    pub fn assign_lexeme(self) -> &'static str {
        match self {
            Dialect::A => "=",
            Dialect::B => ":=",
        }
    }
}

/// Terminal lookahead key used in FIRST/FOLLOW sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum TermKey {
    Fixed(String),
    Class(TokenClass),
    /// End of input.
    End,
}

impl TermKey {
    fn matches(&self, token: Option<&Token>) -> bool {
        match (self, token) {
            (TermKey::End, None) => true,
            (TermKey::Fixed(l), Some(t)) => t.class == TokenClass::Fixed && t.lexeme == *l,
            (TermKey::Class(c), Some(t)) => t.class == *c,
            _ => false,
        }
    }
}

impl fmt::Display for TermKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermKey::Fixed(l) => write!(f, "'{l}'"),
            TermKey::Class(c) => write!(f, "{c}"),
            TermKey::End => write!(f, "<end>"),
        }
    }
}

/// Node of the per-nonterminal alternative trie that drives parsing. All
/// alternatives of a nonterminal are merged by common prefix; a production id
/// stored at an interior node means the shorter alternative ends there and the
/// choice is deferred to the next lookahead token.
#[derive(Debug, Clone)]
pub(crate) struct TrieNode {
    pub edges: Vec<(Symbol, usize)>,
    pub complete: Option<usize>,
}

#[derive(Debug, Error)]
pub enum LangError {
    #[error("unrecognized token {chunk:?} at byte offset {offset}")]
    Lex { offset: usize, chunk: String },
    #[error("parse error at token position {position}: found {found}, expected one of [{}]",
            expected.join(", "))]
    Parse { position: usize, found: String, expected: Vec<String> },
    #[error("invalid grammar: {0}")]
    Grammar(String),
    #[error("invalid grammar file: {0}")]
    GrammarFile(String),
}

/// A validated, parse-ready grammar.
///
/// Construction checks every structural invariant (dense production ids,
/// nonterminal left-hand sides, no undefined nonterminals) and the
/// determinism condition: at every branch point of each nonterminal's
/// alternative trie the one-token decision sets must be pairwise disjoint,
/// using FOLLOW for alternatives that end at the branch point. Grammars whose
/// overlapping first sets cannot be resolved that way are rejected.
#[derive(Debug, Clone)]
pub struct Grammar {
    productions: Vec<Production>,
    start: String,
    classes: Vec<ClassDef>,
    by_lhs: BTreeMap<String, Vec<usize>>,
    first: BTreeMap<String, BTreeSet<TermKey>>,
    follow: BTreeMap<String, BTreeSet<TermKey>>,
    tries: BTreeMap<String, Vec<TrieNode>>,
    fixed_lexemes: BTreeSet<String>,
    id_re: Regex,
    num_re: Regex,
}

pub const ID_PATTERN: &str = "[a-z][a-z0-9]*";
pub const NUM_PATTERN: &str = "0|[1-9][0-9]?";

impl Grammar {
    /// Build and validate a grammar. Production ids are assigned densely in
    /// the order given.
    pub fn new(
        rules: Vec<(&str, Vec<Symbol>)>,
        start: &str,
        classes: Vec<ClassDef>,
    ) -> Result<Grammar, LangError> {
        let productions: Vec<Production> = rules
            .into_iter()
            .enumerate()
            .map(|(id, (lhs, rhs))| Production { id, lhs: lhs.to_string(), rhs })
            .collect();
        Self::from_productions(productions, start, classes)
    }

    pub(crate) fn from_productions(
        productions: Vec<Production>,
        start: &str,
        classes: Vec<ClassDef>,
    ) -> Result<Grammar, LangError> {
        if productions.is_empty() {
            return Err(LangError::Grammar("no productions".into()));
        }
        for (i, p) in productions.iter().enumerate() {
            if p.id != i {
                return Err(LangError::Grammar(format!(
                    "production ids must be dense 0..R-1; found id {} at index {i}",
                    p.id
                )));
            }
            if p.rhs.is_empty() {
                return Err(LangError::Grammar(format!("empty rhs in production {i}")));
            }
        }

        let mut by_lhs: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for p in &productions {
            by_lhs.entry(p.lhs.clone()).or_default().push(p.id);
        }
        if !by_lhs.contains_key(start) {
            return Err(LangError::Grammar(format!("start symbol {start} has no productions")));
        }
        for p in &productions {
            for s in &p.rhs {
                if let Symbol::Nonterminal(n) = s {
                    if !by_lhs.contains_key(n) {
                        return Err(LangError::Grammar(format!(
                            "nonterminal {n} in \"{p}\" has no productions"
                        )));
                    }
                }
            }
        }

        let mut pattern_of = BTreeMap::new();
        for c in &classes {
            if pattern_of.insert(c.class, c.pattern.clone()).is_some() {
                return Err(LangError::Grammar(format!("duplicate class definition {}", c.class)));
            }
        }
        let id_pat = pattern_of.get(&TokenClass::Id).cloned().unwrap_or_else(|| ID_PATTERN.into());
        let num_pat =
            pattern_of.get(&TokenClass::Num).cloned().unwrap_or_else(|| NUM_PATTERN.into());
        let compile = |p: &str| {
            Regex::new(&format!("^(?:{p})$"))
                .map_err(|e| LangError::Grammar(format!("bad class pattern {p:?}: {e}")))
        };

        let fixed_lexemes = productions
            .iter()
            .flat_map(|p| p.rhs.iter())
            .filter_map(|s| match s {
                Symbol::Fixed(l) => Some(l.clone()),
                _ => None,
            })
            .collect();

        let mut g = Grammar {
            productions,
            start: start.to_string(),
            classes,
            by_lhs,
            first: BTreeMap::new(),
            follow: BTreeMap::new(),
            tries: BTreeMap::new(),
            fixed_lexemes,
            id_re: compile(&id_pat)?,
            num_re: compile(&num_pat)?,
        };
        g.compute_first();
        g.compute_follow();
        g.build_tries()?;
        Ok(g)
    }

    /// The fixed MiniLang grammar in the given dialect:
    ///
    /// ```text
    /// Prog -> Stmt | Stmt Prog
    /// Stmt -> 'let' ID '=' Expr ';' | 'return' Expr ';' | 'if' '(' Expr ')' '{' Prog '}'
    /// Expr -> Term | Term '+' Expr
    /// Term -> ID | NUM | '(' Expr ')'
    /// ```
    pub fn minilang(dialect: Dialect) -> Grammar {
        use Symbol::{Class, Fixed, Nonterminal as Nt};
        let assign = dialect.assign_lexeme();
        let rules = vec![
            ("Prog", vec![Nt("Stmt".into())]),
            ("Prog", vec![Nt("Stmt".into()), Nt("Prog".into())]),
            (
                "Stmt",
                vec![
                    Fixed("let".into()),
                    Class(TokenClass::Id),
                    Fixed(assign.into()),
                    Nt("Expr".into()),
                    Fixed(";".into()),
                ],
            ),
            ("Stmt", vec![Fixed("return".into()), Nt("Expr".into()), Fixed(";".into())]),
            (
                "Stmt",
                vec![
                    Fixed("if".into()),
                    Fixed("(".into()),
                    Nt("Expr".into()),
                    Fixed(")".into()),
                    Fixed("{".into()),
                    Nt("Prog".into()),
                    Fixed("}".into()),
                ],
            ),
            ("Expr", vec![Nt("Term".into())]),
            ("Expr", vec![Nt("Term".into()), Fixed("+".into()), Nt("Expr".into())]),
            ("Term", vec![Class(TokenClass::Id)]),
            ("Term", vec![Class(TokenClass::Num)]),
            ("Term", vec![Fixed("(".into()), Nt("Expr".into()), Fixed(")".into())]),
        ];
        let classes = vec![
            ClassDef { class: TokenClass::Id, pattern: ID_PATTERN.into() },
            ClassDef { class: TokenClass::Num, pattern: NUM_PATTERN.into() },
        ];
        Grammar::new(rules, "Prog", classes).expect("builtin grammar is valid")
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    pub fn production(&self, id: usize) -> Option<&Production> {
        self.productions.get(id)
    }

    pub fn rule_count(&self) -> usize {
        self.productions.len()
    }

    pub fn start(&self) -> &str {
        &self.start
    }

    pub fn classes(&self) -> &[ClassDef] {
        &self.classes
    }

    /// Production ids whose lhs is `nt`, in id order.
    pub fn alternatives(&self, nt: &str) -> &[usize] {
        self.by_lhs.get(nt).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn is_fixed_lexeme(&self, lexeme: &str) -> bool {
        self.fixed_lexemes.contains(lexeme)
    }

    pub fn class_matches(&self, class: TokenClass, lexeme: &str) -> bool {
        match class {
            TokenClass::Fixed => self.is_fixed_lexeme(lexeme),
            TokenClass::Id => self.id_re.is_match(lexeme) && !self.is_fixed_lexeme(lexeme),
            TokenClass::Num => self.num_re.is_match(lexeme),
        }
    }

    /// Classify one whitespace-delimited chunk. Fixed lexemes take precedence
    /// over the ID class so keywords never lex as identifiers.
    pub fn classify_chunk(&self, chunk: &str) -> Option<Token> {
        if self.is_fixed_lexeme(chunk) {
            Some(Token::fixed(chunk))
        } else if self.class_matches(TokenClass::Id, chunk) {
            Some(Token::id(chunk))
        } else if self.class_matches(TokenClass::Num, chunk) {
            Some(Token::num(chunk))
        } else {
            None
        }
    }

    fn first_of_symbol(&self, s: &Symbol) -> BTreeSet<TermKey> {
        match s {
            Symbol::Fixed(l) => [TermKey::Fixed(l.clone())].into(),
            Symbol::Class(c) => [TermKey::Class(*c)].into(),
            Symbol::Nonterminal(n) => self.first.get(n).cloned().unwrap_or_default(),
        }
    }

    fn compute_first(&mut self) {
        // No epsilon productions (rhs length >= 1), so FIRST(A -> X ...) is
        // FIRST(X) and the fixpoint is over nonterminal references only.
        for nt in self.by_lhs.keys() {
            self.first.insert(nt.clone(), BTreeSet::new());
        }
        loop {
            let mut changed = false;
            for p in &self.productions {
                let add: BTreeSet<TermKey> = match &p.rhs[0] {
                    Symbol::Fixed(l) => [TermKey::Fixed(l.clone())].into(),
                    Symbol::Class(c) => [TermKey::Class(*c)].into(),
                    Symbol::Nonterminal(n) => self.first[n].clone(),
                };
                let set = self.first.get_mut(&p.lhs).unwrap();
                for k in add {
                    changed |= set.insert(k);
                }
            }
            if !changed {
                break;
            }
        }
    }

    fn compute_follow(&mut self) {
        for nt in self.by_lhs.keys() {
            self.follow.insert(nt.clone(), BTreeSet::new());
        }
        self.follow.get_mut(&self.start).unwrap().insert(TermKey::End);
        loop {
            let mut changed = false;
            for p in &self.productions {
                for (i, s) in p.rhs.iter().enumerate() {
                    let Symbol::Nonterminal(n) = s else { continue };
                    let add: BTreeSet<TermKey> = if i + 1 < p.rhs.len() {
                        self.first_of_symbol(&p.rhs[i + 1])
                    } else {
                        self.follow[&p.lhs].clone()
                    };
                    let set = self.follow.get_mut(n).unwrap();
                    for k in add {
                        changed |= set.insert(k);
                    }
                }
            }
            if !changed {
                break;
            }
        }
    }

    /// Merge each nonterminal's alternatives into a trie and verify that
    /// every branch point is decidable with one lookahead token.
    fn build_tries(&mut self) -> Result<(), LangError> {
        let lhs_list: Vec<String> = self.by_lhs.keys().cloned().collect();
        for nt in lhs_list {
            let mut nodes = vec![TrieNode { edges: Vec::new(), complete: None }];
            for &pid in &self.by_lhs[&nt].clone() {
                let rhs = self.productions[pid].rhs.clone();
                let mut cur = 0usize;
                for sym in &rhs {
                    if let Some(&(_, next)) = nodes[cur].edges.iter().find(|(s, _)| s == sym) {
                        cur = next;
                    } else {
                        let next = nodes.len();
                        nodes.push(TrieNode { edges: Vec::new(), complete: None });
                        nodes[cur].edges.push((sym.clone(), next));
                        cur = next;
                    }
                }
                if nodes[cur].complete.is_some() {
                    return Err(LangError::Grammar(format!(
                        "duplicate alternatives for {nt}: \"{}\"",
                        self.productions[pid]
                    )));
                }
                nodes[cur].complete = Some(pid);
            }
            // Decision sets at each branch point must be pairwise disjoint.
            for node in &nodes {
                let mut sets: Vec<(String, BTreeSet<TermKey>)> = Vec::new();
                for (sym, _) in &node.edges {
                    sets.push((format!("{sym}"), self.first_of_symbol(sym)));
                }
                if node.complete.is_some() && !node.edges.is_empty() {
                    sets.push((format!("FOLLOW({nt})"), self.follow[&nt].clone()));
                }
                for a in 0..sets.len() {
                    for b in a + 1..sets.len() {
                        let overlap: Vec<&TermKey> = sets[a].1.intersection(&sets[b].1).collect();
                        if !overlap.is_empty() {
                            return Err(LangError::Grammar(format!(
                                "{nt} is not LL(1): {} and {} overlap on {}",
                                sets[a].0, sets[b].0, overlap[0]
                            )));
                        }
                    }
                }
            }
            self.tries.insert(nt, nodes);
        }
        Ok(())
    }

    pub(crate) fn trie(&self, nt: &str) -> &[TrieNode] {
        &self.tries[nt]
    }

    pub(crate) fn first_set(&self, s: &Symbol) -> BTreeSet<TermKey> {
        self.first_of_symbol(s)
    }

    pub(crate) fn follow_set(&self, nt: &str) -> &BTreeSet<TermKey> {
        &self.follow[nt]
    }
}

/// A MiniLang abstract syntax tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum AstNode {
    Internal { production: usize, children: Vec<AstNode> },
    Leaf(Token),
}

impl AstNode {
    pub fn leaf(token: Token) -> Self {
        AstNode::Leaf(token)
    }

    /// Check the node against the grammar: arity, symbol kinds, and leaf
    /// lexeme admissibility all the way down.
    pub fn validate(&self, grammar: &Grammar) -> Result<(), LangError> {
        match self {
            AstNode::Leaf(_) => Ok(()),
            AstNode::Internal { production, children } => {
                let p = grammar
                    .production(*production)
                    .ok_or_else(|| LangError::Grammar(format!("unknown production {production}")))?;
                if children.len() != p.rhs.len() {
                    return Err(LangError::Grammar(format!(
                        "arity mismatch under \"{p}\": {} children",
                        children.len()
                    )));
                }
                for (sym, child) in p.rhs.iter().zip(children) {
                    match (sym, child) {
                        (Symbol::Nonterminal(n), AstNode::Internal { production, .. }) => {
                            let cp = grammar.production(*production).ok_or_else(|| {
                                LangError::Grammar(format!("unknown production {production}"))
                            })?;
                            if cp.lhs != *n {
                                return Err(LangError::Grammar(format!(
                                    "expected {n} child, found \"{cp}\""
                                )));
                            }
                        }
                        (Symbol::Nonterminal(n), AstNode::Leaf(t)) => {
                            return Err(LangError::Grammar(format!(
                                "expected {n} child, found leaf {t}"
                            )));
                        }
                        (sym, AstNode::Leaf(t)) => {
                            if !sym.matches(t) || !grammar.class_matches(t.class, &t.lexeme) {
                                return Err(LangError::Grammar(format!(
                                    "leaf {t} does not satisfy {sym}"
                                )));
                            }
                        }
                        (sym, AstNode::Internal { .. }) => {
                            return Err(LangError::Grammar(format!(
                                "expected terminal {sym}, found internal node"
                            )));
                        }
                    }
                    child.validate(grammar)?;
                }
                Ok(())
            }
        }
    }
}

/// Left-to-right yield of the tree's leaves.
pub fn render(ast: &AstNode) -> Vec<Token> {
    let mut out = Vec::new();
    collect_leaves(ast, &mut out);
    out
}

fn collect_leaves(ast: &AstNode, out: &mut Vec<Token>) {
    match ast {
        AstNode::Leaf(t) => out.push(t.clone()),
        AstNode::Internal { children, .. } => {
            for c in children {
                collect_leaves(c, out);
            }
        }
    }
}

/// Join token lexemes with single spaces (the canonical program text).
pub fn render_text(ast: &AstNode) -> String {
    render(ast).iter().map(|t| t.lexeme.clone()).collect::<Vec<_>>().join(" ")
}
