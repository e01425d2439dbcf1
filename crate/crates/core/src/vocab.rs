//! The unified action vocabulary: token entries first (ids `0..|V_t|`,
//! including padding and end-of-sequence), then `ApplyRule` entries as a
//! contiguous suffix block (`|V_t|..|V_t|+R`). Token ids mean the same thing
//! whether a position is interpreted in token space or action space.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::minilang::{Dialect, Grammar, Token, TokenClass};
use crate::transducer::Action;

/// One entry in the token block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum VocabEntry {
    Pad,
    Eos,
    /// A surface token the grammar machinery knows about.
    Token(Token),
    /// A source-side word (natural-language template vocabulary) that is not
    /// a code token; never admitted by grammar masks.
    Word(String),
}

impl VocabEntry {
    pub fn lexeme(&self) -> &str {
        match self {
            VocabEntry::Pad => "<pad>",
            VocabEntry::Eos => "</s>",
            VocabEntry::Token(t) => &t.lexeme,
            VocabEntry::Word(w) => w,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(from = "VocabData", into = "VocabData")]
pub struct UnifiedVocabulary {
    entries: Vec<VocabEntry>,
    rules: usize,
    by_lexeme: HashMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct VocabData {
    entries: Vec<VocabEntry>,
    rules: usize,
}

impl From<VocabData> for UnifiedVocabulary {
    fn from(d: VocabData) -> Self {
        UnifiedVocabulary::new(d.entries, d.rules)
    }
}

impl From<UnifiedVocabulary> for VocabData {
    fn from(v: UnifiedVocabulary) -> Self {
        VocabData { entries: v.entries, rules: v.rules }
    }
}

impl PartialEq for UnifiedVocabulary {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries && self.rules == other.rules
    }
}

impl UnifiedVocabulary {
    pub const PAD: usize = 0;
    pub const EOS: usize = 1;

    pub fn new(entries: Vec<VocabEntry>, rules: usize) -> Self {
        assert!(matches!(entries.first(), Some(VocabEntry::Pad)), "entry 0 must be padding");
        assert!(matches!(entries.get(1), Some(VocabEntry::Eos)), "entry 1 must be end-of-sequence");
        let mut by_lexeme = HashMap::new();
        for (i, e) in entries.iter().enumerate() {
            let prev = by_lexeme.insert(e.lexeme().to_string(), i);
            assert!(prev.is_none(), "duplicate lexeme {:?}", e.lexeme());
        }
        UnifiedVocabulary { entries, rules, by_lexeme }
    }

    /// |V_t|: size of the token block.
    pub fn token_count(&self) -> usize {
        self.entries.len()
    }

    /// R: number of rule entries.
    pub fn rule_count(&self) -> usize {
        self.rules
    }

    /// |V_a| = |V_t| + R.
    pub fn action_count(&self) -> usize {
        self.entries.len() + self.rules
    }

    pub fn entry(&self, id: usize) -> Option<&VocabEntry> {
        self.entries.get(id)
    }

    /// Token id for a lexeme (token block only).
    pub fn lexeme_id(&self, lexeme: &str) -> Option<usize> {
        self.by_lexeme.get(lexeme).copied()
    }

    /// Token id for a token, requiring the stored class to agree.
    pub fn token_id(&self, token: &Token) -> Option<usize> {
        let id = self.lexeme_id(&token.lexeme)?;
        match &self.entries[id] {
            VocabEntry::Token(t) if t.class == token.class => Some(id),
            _ => None,
        }
    }

    /// Action id of rule `r` (the suffix block).
    pub fn rule_action_id(&self, rule: usize) -> usize {
        debug_assert!(rule < self.rules);
        self.entries.len() + rule
    }

    pub fn action_id(&self, action: &Action) -> Option<usize> {
        match action {
            Action::ApplyRule(r) => (*r < self.rules).then(|| self.rule_action_id(*r)),
            Action::GenToken(t) => self.token_id(t),
        }
    }

    /// Interpret an action-vocabulary id. Pad/EOS/Word ids yield no action.
    pub fn action_of_id(&self, id: usize) -> Option<Action> {
        if id >= self.entries.len() {
            let r = id - self.entries.len();
            return (r < self.rules).then_some(Action::ApplyRule(r));
        }
        match &self.entries[id] {
            VocabEntry::Token(t) => Some(Action::GenToken(t.clone())),
            _ => None,
        }
    }

    pub fn token_ids_of_class(&self, class: TokenClass) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().enumerate().filter_map(move |(i, e)| match e {
            VocabEntry::Token(t) if t.class == class => Some(i),
            _ => None,
        })
    }

    /// Surface form of a token-block id.
    pub fn lexeme_of_id(&self, id: usize) -> Option<&str> {
        self.entries.get(id).map(VocabEntry::lexeme)
    }

    /// Map surface words to ids; `None` if any word is out of vocabulary.
    pub fn encode_words(&self, words: &[String]) -> Option<Vec<usize>> {
        words.iter().map(|w| self.lexeme_id(w)).collect()
    }
}

/// The closed identifier inventory: the 26 single letters plus `x0..x23`.
pub fn id_inventory() -> Vec<String> {
    let mut names: Vec<String> = ('a'..='z').map(|c| c.to_string()).collect();
    names.extend((0..24).map(|i| format!("x{i}")));
    names
}

/// The closed numeral inventory `0..=99`.
pub fn num_inventory() -> Vec<String> {
    (0..100).map(|n| n.to_string()).collect()
}

/// Source-side template words that are not code tokens.
pub const NL_WORDS: [&str; 13] =
    ["the", "variable", "number", "sum", "of", "and", "group", "end", "be", "when", "do", "done", "then"];

/// Build the vocabulary shared by both MiniLang dialects and both tasks:
/// specials, fixed terminals of dialect A then dialect B extras, the ID and
/// NUM inventories, then the template words.
pub fn minilang_vocabulary() -> UnifiedVocabulary {
    let a = Grammar::minilang(Dialect::A);
    let b = Grammar::minilang(Dialect::B);
    assert_eq!(a.rule_count(), b.rule_count());

    let mut entries = vec![VocabEntry::Pad, VocabEntry::Eos];
    let mut seen: Vec<String> = Vec::new();
    for grammar in [&a, &b] {
        for p in grammar.productions() {
            for s in &p.rhs {
                if let crate::minilang::Symbol::Fixed(lex) = s {
                    if !seen.contains(lex) {
                        seen.push(lex.clone());
                        entries.push(VocabEntry::Token(Token::fixed(lex)));
                    }
                }
            }
        }
    }
    for name in id_inventory() {
        entries.push(VocabEntry::Token(Token::id(&name)));
    }
    for num in num_inventory() {
        entries.push(VocabEntry::Token(Token::num(&num)));
    }
    for word in NL_WORDS {
        entries.push(VocabEntry::Word(word.to_string()));
    }
    UnifiedVocabulary::new(entries, a.rule_count())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_token_block_then_rule_suffix() {
        let v = minilang_vocabulary();
        assert_eq!(v.rule_count(), 10);
        assert_eq!(v.action_count(), v.token_count() + 10);
        assert_eq!(v.lexeme_id("<pad>"), Some(UnifiedVocabulary::PAD));
        assert_eq!(v.lexeme_id("</s>"), Some(UnifiedVocabulary::EOS));
        for r in 0..10 {
            assert_eq!(v.action_of_id(v.rule_action_id(r)), Some(Action::ApplyRule(r)));
        }
    }

    #[test]
    fn token_ids_agree_between_spaces() {
        let v = minilang_vocabulary();
        let t = Token::id("a");
        let id = v.token_id(&t).unwrap();
        assert_eq!(v.action_id(&Action::GenToken(t.clone())), Some(id));
        assert_eq!(v.action_of_id(id), Some(Action::GenToken(t)));
    }

    #[test]
    fn inventories_have_expected_sizes() {
        let v = minilang_vocabulary();
        assert_eq!(v.token_ids_of_class(TokenClass::Id).count(), 50);
        assert_eq!(v.token_ids_of_class(TokenClass::Num).count(), 100);
        assert_eq!(v.token_ids_of_class(TokenClass::Fixed).count(), 11);
        assert!(v.lexeme_id("=").is_some());
        assert!(v.lexeme_id(":=").is_some());
    }

    #[test]
    fn class_lookup_respects_entry_kind() {
        let v = minilang_vocabulary();
        // "the" is a template word, not an identifier token.
        assert!(v.lexeme_id("the").is_some());
        assert_eq!(v.token_id(&Token::id("the")), None);
        assert!(v.action_of_id(v.lexeme_id("the").unwrap()).is_none());
    }

    #[test]
    fn serde_round_trip() {
        let v = minilang_vocabulary();
        let json = serde_json::to_string(&v).unwrap();
        let back: UnifiedVocabulary = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
        assert_eq!(back.lexeme_id("a"), v.lexeme_id("a"));
    }

    #[test]
    fn determinism_across_builds() {
        let a = minilang_vocabulary();
        let b = minilang_vocabulary();
        assert_eq!(a, b);
    }
}
