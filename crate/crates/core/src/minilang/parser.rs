//! Trie-driven predictive parser. One token of lookahead decides every
//! branch; alternatives that share a prefix are resolved after the prefix,
//! completing on FOLLOW tokens. Grammar validation guarantees uniqueness, so
//! the returned derivation is the only one whose yield equals the input.

use std::collections::BTreeSet;

use super::{AstNode, Grammar, LangError, Symbol, TermKey, Token};

struct Cursor<'a> {
    tokens: &'a [Token],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn error(&self, expected: impl IntoIterator<Item = String>) -> LangError {
        let mut expected: Vec<String> = expected.into_iter().collect();
        expected.sort();
        expected.dedup();
        LangError::Parse {
            position: self.pos,
            found: self.peek().map(|t| t.lexeme.clone()).unwrap_or_else(|| "<end>".into()),
            expected,
        }
    }
}

impl Grammar {
    /// Parse `tokens` into the unique AST whose yield equals the input.
    /// Fails with the token position and the expected-symbol set on mismatch,
    /// and on trailing tokens after the start symbol completes.
    pub fn parse(&self, tokens: &[Token]) -> Result<AstNode, LangError> {
        let mut cur = Cursor { tokens, pos: 0 };
        let ast = self.parse_nonterminal(self.start(), &mut cur)?;
        if cur.pos < tokens.len() {
            return Err(cur.error(["<end>".to_string()]));
        }
        Ok(ast)
    }

    fn parse_nonterminal(&self, nt: &str, cur: &mut Cursor) -> Result<AstNode, LangError> {
        let trie = self.trie(nt);
        let mut node = 0usize;
        let mut children = Vec::new();
        loop {
            let entry = &trie[node];
            if entry.edges.is_empty() {
                // Sole way to proceed is to complete.
                return Ok(AstNode::Internal {
                    production: entry.complete.expect("trie leaf carries a production"),
                    children,
                });
            }
            let la = cur.peek();
            let mut chosen = None;
            for (sym, next) in &entry.edges {
                if self.first_set(sym).iter().any(|k| k.matches(la)) {
                    chosen = Some((sym.clone(), *next));
                    break;
                }
            }
            match chosen {
                Some((sym, next)) => {
                    children.push(self.parse_symbol(&sym, cur)?);
                    node = next;
                }
                None => {
                    if let Some(pid) = entry.complete {
                        if self.follow_set(nt).iter().any(|k| k.matches(la)) {
                            return Ok(AstNode::Internal { production: pid, children });
                        }
                    }
                    let mut expected: BTreeSet<String> = entry
                        .edges
                        .iter()
                        .flat_map(|(sym, _)| self.first_set(sym))
                        .map(|k| k.to_string())
                        .collect();
                    if entry.complete.is_some() {
                        expected.extend(self.follow_set(nt).iter().map(TermKey::to_string));
                    }
                    return Err(cur.error(expected));
                }
            }
        }
    }

    fn parse_symbol(&self, sym: &Symbol, cur: &mut Cursor) -> Result<AstNode, LangError> {
        match sym {
            Symbol::Nonterminal(n) => self.parse_nonterminal(n, cur),
            terminal => match cur.peek() {
                Some(t) if terminal.matches(t) => {
                    let leaf = AstNode::Leaf(t.clone());
                    cur.pos += 1;
                    Ok(leaf)
                }
                _ => Err(cur.error([terminal.to_string()])),
            },
        }
    }
}
