//! Versioned text serialization of grammars.
//!
//! ```text
//! minilang-grammar v1
//! start Prog
//! class ID [a-z][a-z0-9]*
//! class NUM 0|[1-9][0-9]?
//! 0 Prog -> Stmt
//! 2 Stmt -> 'let' ID '=' Expr ';'
//! ```
//!
//! Fixed terminals are single-quoted, class references are the class names,
//! everything else is a nonterminal. Blank lines and `#` comments are ignored.

use super::{ClassDef, Grammar, LangError, Production, Symbol, TokenClass};

pub const GRAMMAR_FORMAT_HEADER: &str = "minilang-grammar v1";

impl Grammar {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(GRAMMAR_FORMAT_HEADER);
        out.push('\n');
        out.push_str(&format!("start {}\n", self.start()));
        for c in self.classes() {
            out.push_str(&format!("class {} {}\n", c.class, c.pattern));
        }
        for p in self.productions() {
            out.push_str(&format!("{} {}\n", p.id, p));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Grammar, LangError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        match lines.next() {
            Some(GRAMMAR_FORMAT_HEADER) => {}
            Some(other) => {
                return Err(LangError::GrammarFile(format!(
                    "unsupported header {other:?}, expected {GRAMMAR_FORMAT_HEADER:?}"
                )))
            }
            None => return Err(LangError::GrammarFile("empty file".into())),
        }

        let mut start = None;
        let mut classes = Vec::new();
        let mut productions = Vec::new();
        for line in lines {
            let mut parts = line.split_whitespace();
            let head = parts.next().unwrap();
            match head {
                "start" => {
                    start = Some(
                        parts
                            .next()
                            .ok_or_else(|| LangError::GrammarFile("start needs a symbol".into()))?
                            .to_string(),
                    );
                }
                "class" => {
                    let name = parts
                        .next()
                        .ok_or_else(|| LangError::GrammarFile("class needs a name".into()))?;
                    let class = parse_class_name(name)?;
                    let pattern = parts.collect::<Vec<_>>().join(" ");
                    if pattern.is_empty() {
                        return Err(LangError::GrammarFile(format!("class {name} needs a pattern")));
                    }
                    classes.push(ClassDef { class, pattern });
                }
                id_text => {
                    let id: usize = id_text.parse().map_err(|_| {
                        LangError::GrammarFile(format!("expected production id, found {id_text:?}"))
                    })?;
                    let lhs = parts
                        .next()
                        .ok_or_else(|| LangError::GrammarFile(format!("production {id}: no lhs")))?
                        .to_string();
                    match parts.next() {
                        Some("->") => {}
                        other => {
                            return Err(LangError::GrammarFile(format!(
                                "production {id}: expected '->', found {other:?}"
                            )))
                        }
                    }
                    let rhs: Vec<Symbol> = parts.map(parse_symbol).collect::<Result<_, _>>()?;
                    productions.push(Production { id, lhs, rhs });
                }
            }
        }
        let start = start.ok_or_else(|| LangError::GrammarFile("missing start line".into()))?;
        productions.sort_by_key(|p| p.id);
        Grammar::from_productions(productions, &start, classes)
    }
}

fn parse_class_name(name: &str) -> Result<TokenClass, LangError> {
    match name {
        "ID" => Ok(TokenClass::Id),
        "NUM" => Ok(TokenClass::Num),
        other => Err(LangError::GrammarFile(format!("unknown class {other:?}"))),
    }
}

fn parse_symbol(text: &str) -> Result<Symbol, LangError> {
    if let Some(stripped) = text.strip_prefix('\'') {
        let lexeme = stripped
            .strip_suffix('\'')
            .ok_or_else(|| LangError::GrammarFile(format!("unterminated quote in {text:?}")))?;
        if lexeme.is_empty() {
            return Err(LangError::GrammarFile("empty fixed terminal".into()));
        }
        return Ok(Symbol::Fixed(lexeme.to_string()));
    }
    match text {
        "ID" => Ok(Symbol::Class(TokenClass::Id)),
        "NUM" => Ok(Symbol::Class(TokenClass::Num)),
        nt => Ok(Symbol::Nonterminal(nt.to_string())),
    }
}
