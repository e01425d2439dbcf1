//! AST ⇄ action-sequence transduction.
//!
//! An AST maps to its pre-order action sequence: `ApplyRule` at each internal
//! node before its children, `GenToken` at each leaf — including keywords and
//! punctuation, so every target token has exactly one corresponding action
//! and the token↔action alignment is total. Replay is driven by a frontier
//! stack of not-yet-satisfied grammar symbols, which also yields the validity
//! mask used for grammar-constrained decoding.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::minilang::{AstNode, Grammar, LangError, Symbol, Token};
use crate::vocab::UnifiedVocabulary;

/// Default hard cap on decoded action sequences.
pub const DEFAULT_ACTION_CAP: usize = 512;

/// One decoding step of the tree paradigm.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Action {
    ApplyRule(usize),
    GenToken(Token),
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::ApplyRule(r) => write!(f, "R{r}"),
            Action::GenToken(t) => write!(f, "T{}", t.lexeme),
        }
    }
}

/// A complete action sequence `a_1..a_m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSequence {
    actions: Vec<Action>,
}

impl ActionSequence {
    pub fn new(actions: Vec<Action>) -> Self {
        ActionSequence { actions }
    }

    pub fn actions(&self) -> &[Action] {
        &self.actions
    }

    /// Sequence length m.
    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    /// Space-separated text form: `R<id>` for rules, `T<lexeme>` for tokens.
    pub fn to_text(&self) -> String {
        self.actions.iter().map(Action::to_string).collect::<Vec<_>>().join(" ")
    }

    /// Parse the text form, classifying `T` lexemes against `grammar`.
    pub fn from_text(text: &str, grammar: &Grammar) -> Result<Self, TransduceError> {
        let mut actions = Vec::new();
        for chunk in text.split_whitespace() {
            if let Some(id_text) = chunk.strip_prefix('R') {
                if let Ok(id) = usize::from_str(id_text) {
                    if id >= grammar.rule_count() {
                        return Err(TransduceError::Text(format!("rule id {id} out of range")));
                    }
                    actions.push(Action::ApplyRule(id));
                    continue;
                }
            }
            if let Some(lexeme) = chunk.strip_prefix('T') {
                if let Some(token) = grammar.classify_chunk(lexeme) {
                    actions.push(Action::GenToken(token));
                    continue;
                }
                return Err(TransduceError::Text(format!("unclassifiable token {lexeme:?}")));
            }
            return Err(TransduceError::Text(format!("bad action {chunk:?}")));
        }
        Ok(ActionSequence::new(actions))
    }
}

/// Total map from token position j (1..=n) to the action position i (1..=m)
/// of the `GenToken` that emits it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlignmentMap {
    action_pos: Vec<usize>,
}

impl AlignmentMap {
    /// Number of aligned token positions n.
    pub fn len(&self) -> usize {
        self.action_pos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.action_pos.is_empty()
    }

    /// 1-based action position for 1-based token position j.
    pub fn action_position(&self, j: usize) -> Option<usize> {
        self.action_pos.get(j.checked_sub(1)?).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.action_pos.iter().enumerate().map(|(j0, &i)| (j0 + 1, i))
    }

    /// Check the map against its action sequence: total on 1..=n for n
    /// `GenToken` actions, injective, strictly increasing, and every mapped
    /// action is a `GenToken`.
    pub fn validate(&self, actions: &ActionSequence) -> Result<(), TransduceError> {
        let gen_count = actions.actions().iter().filter(|a| matches!(a, Action::GenToken(_))).count();
        if self.action_pos.len() != gen_count {
            return Err(TransduceError::Alignment(format!(
                "map covers {} positions but sequence has {gen_count} GenToken actions",
                self.action_pos.len()
            )));
        }
        let mut prev = 0usize;
        for (j, &i) in self.action_pos.iter().enumerate() {
            if i <= prev {
                return Err(TransduceError::Alignment(format!(
                    "not strictly increasing at token position {}",
                    j + 1
                )));
            }
            prev = i;
            match actions.actions().get(i - 1) {
                Some(Action::GenToken(_)) => {}
                _ => {
                    return Err(TransduceError::Alignment(format!(
                        "token position {} maps to non-GenToken action {i}",
                        j + 1
                    )))
                }
            }
        }
        Ok(())
    }
}

/// Stack of expected grammar symbols during replay; the last element is the
/// next symbol to satisfy. Empty stack means the derivation is complete.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrontierState {
    stack: Vec<Symbol>,
}

impl FrontierState {
    /// Initial frontier: just the grammar's start symbol.
    pub fn initial(grammar: &Grammar) -> Self {
        FrontierState { stack: vec![Symbol::Nonterminal(grammar.start().to_string())] }
    }

    pub fn from_symbols(symbols: Vec<Symbol>) -> Self {
        let mut stack = symbols;
        stack.reverse();
        FrontierState { stack }
    }

    pub fn top(&self) -> Option<&Symbol> {
        self.stack.last()
    }

    pub fn is_complete(&self) -> bool {
        self.stack.is_empty()
    }

    pub fn depth(&self) -> usize {
        self.stack.len()
    }
}

#[derive(Debug, Error)]
pub enum TransduceError {
    #[error("invalid action {found} at position {position}: frontier expects {expected}")]
    InvalidAction { position: usize, expected: Symbol, found: Action },
    #[error("incomplete action sequence: frontier still expects {expected}")]
    Incomplete { expected: Symbol },
    #[error("trailing action at position {position} after the derivation completed")]
    TrailingActions { position: usize },
    #[error("invalid alignment: {0}")]
    Alignment(String),
    #[error("invalid action text: {0}")]
    Text(String),
    #[error(transparent)]
    Lang(#[from] LangError),
}

/// Pre-order emission: depth-first, left-to-right, `ApplyRule` at each
/// internal node before its children, `GenToken` at each leaf.
pub fn ast_to_actions(ast: &AstNode) -> ActionSequence {
    let mut actions = Vec::new();
    emit(ast, &mut actions);
    ActionSequence::new(actions)
}

fn emit(node: &AstNode, out: &mut Vec<Action>) {
    match node {
        AstNode::Leaf(t) => out.push(Action::GenToken(t.clone())),
        AstNode::Internal { production, children } => {
            out.push(Action::ApplyRule(*production));
            for c in children {
                emit(c, out);
            }
        }
    }
}

/// Replay an action sequence into the unique AST whose pre-order emission
/// equals the input. Positions in errors are 1-based.
pub fn actions_to_ast(
    actions: &ActionSequence,
    grammar: &Grammar,
) -> Result<AstNode, TransduceError> {
    let mut pos = 0usize;
    let start = Symbol::Nonterminal(grammar.start().to_string());
    let ast = build(actions.actions(), &mut pos, &start, grammar)?;
    if pos < actions.len() {
        return Err(TransduceError::TrailingActions { position: pos + 1 });
    }
    Ok(ast)
}

fn build(
    actions: &[Action],
    pos: &mut usize,
    expected: &Symbol,
    grammar: &Grammar,
) -> Result<AstNode, TransduceError> {
    let action = actions
        .get(*pos)
        .ok_or_else(|| TransduceError::Incomplete { expected: expected.clone() })?;
    let position = *pos + 1;
    match (expected, action) {
        (Symbol::Nonterminal(n), Action::ApplyRule(r)) => {
            let p = grammar.production(*r).filter(|p| p.lhs == *n).ok_or_else(|| {
                TransduceError::InvalidAction {
                    position,
                    expected: expected.clone(),
                    found: action.clone(),
                }
            })?;
            *pos += 1;
            let rhs = p.rhs.clone();
            let mut children = Vec::with_capacity(rhs.len());
            for sym in &rhs {
                children.push(build(actions, pos, sym, grammar)?);
            }
            Ok(AstNode::Internal { production: *r, children })
        }
        (terminal, Action::GenToken(t))
            if terminal.matches(t) && grammar.class_matches(t.class, &t.lexeme) =>
        {
            *pos += 1;
            Ok(AstNode::Leaf(t.clone()))
        }
        _ => Err(TransduceError::InvalidAction {
            position,
            expected: expected.clone(),
            found: action.clone(),
        }),
    }
}

/// Alignment of an action sequence: the j-th `GenToken` occurrence maps to
/// its 1-based action index.
pub fn align(actions: &ActionSequence) -> AlignmentMap {
    let action_pos = actions
        .actions()
        .iter()
        .enumerate()
        .filter(|(_, a)| matches!(a, Action::GenToken(_)))
        .map(|(i, _)| i + 1)
        .collect();
    AlignmentMap { action_pos }
}

/// Boolean mask over the unified action vocabulary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionMask {
    allowed: Vec<bool>,
}

impl ActionMask {
    pub fn allows(&self, action_id: usize) -> bool {
        self.allowed.get(action_id).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.allowed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.allowed.is_empty()
    }

    pub fn count_allowed(&self) -> usize {
        self.allowed.iter().filter(|&&b| b).count()
    }

    pub fn allowed_ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.allowed.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.allowed
    }
}

/// Validity mask for the next action given the frontier. A nonterminal on
/// top admits exactly its productions; a fixed terminal admits exactly its
/// one token; a terminal class admits every vocabulary token of that class;
/// an empty frontier admits only the end-of-sequence entry.
pub fn valid_actions(
    frontier: &FrontierState,
    grammar: &Grammar,
    vocab: &UnifiedVocabulary,
) -> ActionMask {
    let mut allowed = vec![false; vocab.action_count()];
    match frontier.top() {
        None => allowed[UnifiedVocabulary::EOS] = true,
        Some(Symbol::Nonterminal(n)) => {
            for &r in grammar.alternatives(n) {
                allowed[vocab.rule_action_id(r)] = true;
            }
        }
        Some(Symbol::Fixed(lexeme)) => {
            let id = vocab
                .lexeme_id(lexeme)
                .expect("fixed terminal lexemes are always in the vocabulary");
            allowed[id] = true;
        }
        Some(Symbol::Class(class)) => {
            for id in vocab.token_ids_of_class(*class) {
                allowed[id] = true;
            }
        }
    }
    ActionMask { allowed }
}

/// Apply one action to the frontier, returning the new state. `ApplyRule`
/// pops the nonterminal and pushes the rhs so its leftmost symbol is on top;
/// `GenToken` pops the matching terminal slot.
pub fn step(
    frontier: &FrontierState,
    action: &Action,
    grammar: &Grammar,
) -> Result<FrontierState, TransduceError> {
    let invalid = |expected: Symbol| TransduceError::InvalidAction {
        position: 1,
        expected,
        found: action.clone(),
    };
    let Some(top) = frontier.top() else {
        return Err(TransduceError::TrailingActions { position: 1 });
    };
    let mut stack = frontier.stack.clone();
    match (top, action) {
        (Symbol::Nonterminal(n), Action::ApplyRule(r)) => {
            match grammar.production(*r) {
                Some(p) if p.lhs == *n => {
                    stack.pop();
                    for sym in p.rhs.iter().rev() {
                        stack.push(sym.clone());
                    }
                }
                _ => return Err(invalid(top.clone())),
            }
        }
        (terminal, Action::GenToken(t))
            if terminal.matches(t) && grammar.class_matches(t.class, &t.lexeme) =>
        {
            stack.pop();
        }
        _ => return Err(invalid(top.clone())),
    }
    Ok(FrontierState { stack })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minilang::{Dialect, TokenClass};
    use crate::vocab::minilang_vocabulary;

    fn g() -> Grammar {
        Grammar::minilang(Dialect::A)
    }

    fn return_x_actions() -> ActionSequence {
        // Independent recursive-traversal oracle: walk the AST explicitly
        // rather than through ast_to_actions.
        fn walk(node: &AstNode, out: &mut Vec<Action>) {
            if let AstNode::Internal { production, children } = node {
                out.push(Action::ApplyRule(*production));
                for c in children {
                    walk(c, out);
                }
            } else if let AstNode::Leaf(t) = node {
                out.push(Action::GenToken(t.clone()));
            }
        }
        let grammar = g();
        let ast = grammar.parse(&grammar.lex("return x ;").unwrap()).unwrap();
        let mut out = Vec::new();
        walk(&ast, &mut out);
        ActionSequence::new(out)
    }

    #[test]
    fn preorder_emission_of_return_statement() {
        let grammar = g();
        let ast = grammar.parse(&grammar.lex("return x ;").unwrap()).unwrap();
        let actions = ast_to_actions(&ast);
        let expected = ActionSequence::new(vec![
            Action::ApplyRule(0), // Prog -> Stmt
            Action::ApplyRule(3), // Stmt -> return Expr ;
            Action::GenToken(Token::fixed("return")),
            Action::ApplyRule(5), // Expr -> Term
            Action::ApplyRule(7), // Term -> ID
            Action::GenToken(Token::id("x")),
            Action::GenToken(Token::fixed(";")),
        ]);
        assert_eq!(actions, expected);
        assert_eq!(actions, return_x_actions());
        assert_eq!(actions.len(), 7);
        let n = actions.actions().iter().filter(|a| matches!(a, Action::GenToken(_))).count();
        assert_eq!(n, 3);
    }

    #[test]
    fn single_leaf_term_emits_rule_then_token() {
        let ast = AstNode::Internal {
            production: 7,
            children: vec![AstNode::Leaf(Token::id("x"))],
        };
        let actions = ast_to_actions(&ast);
        assert_eq!(
            actions.actions(),
            &[Action::ApplyRule(7), Action::GenToken(Token::id("x"))]
        );
    }

    #[test]
    fn actions_replay_to_the_same_ast() {
        let grammar = g();
        let ast = grammar.parse(&grammar.lex("return x ;").unwrap()).unwrap();
        let back = actions_to_ast(&ast_to_actions(&ast), &grammar).unwrap();
        assert_eq!(back, ast);
    }

    #[test]
    fn gen_token_at_nonterminal_frontier_is_invalid() {
        let grammar = g();
        let seq = ActionSequence::new(vec![Action::GenToken(Token::id("x"))]);
        match actions_to_ast(&seq, &grammar) {
            Err(TransduceError::InvalidAction { position: 1, expected, .. }) => {
                assert_eq!(expected, Symbol::nt("Prog"));
            }
            other => panic!("expected InvalidAction, got {other:?}"),
        }
    }

    #[test]
    fn unexpanded_frontier_is_incomplete() {
        let grammar = g();
        let seq = ActionSequence::new(vec![Action::ApplyRule(0)]);
        match actions_to_ast(&seq, &grammar) {
            Err(TransduceError::Incomplete { expected }) => {
                assert_eq!(expected, Symbol::nt("Stmt"));
            }
            other => panic!("expected Incomplete, got {other:?}"),
        }
    }

    #[test]
    fn trailing_actions_are_rejected() {
        let grammar = g();
        let mut actions = ast_to_actions(
            &grammar.parse(&grammar.lex("return x ;").unwrap()).unwrap(),
        )
        .actions()
        .to_vec();
        let m = actions.len();
        actions.push(Action::ApplyRule(0));
        match actions_to_ast(&ActionSequence::new(actions), &grammar) {
            Err(TransduceError::TrailingActions { position }) => assert_eq!(position, m + 1),
            other => panic!("expected TrailingActions, got {other:?}"),
        }
    }

    #[test]
    fn alignment_of_return_statement() {
        let actions = return_x_actions();
        let map = align(&actions);
        assert_eq!(map.len(), 3);
        assert_eq!(map.action_position(1), Some(3));
        assert_eq!(map.action_position(2), Some(6));
        assert_eq!(map.action_position(3), Some(7));
        map.validate(&actions).unwrap();
    }

    #[test]
    fn alignment_of_rule_only_sequence_is_empty() {
        let actions = ActionSequence::new(vec![Action::ApplyRule(0)]);
        let map = align(&actions);
        assert!(map.is_empty());
        map.validate(&actions).unwrap();
    }

    #[test]
    fn alignment_is_strictly_increasing() {
        let grammar = g();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(3);
        for _ in 0..50 {
            let text = crate::corpus::sample_program_text(&mut rng, 2, Dialect::A);
            let ast = grammar.parse(&grammar.lex(&text).unwrap()).unwrap();
            let actions = ast_to_actions(&ast);
            let map = align(&actions);
            map.validate(&actions).unwrap();
            let mut prev = 0;
            for (_, i) in map.iter() {
                assert!(i > prev);
                prev = i;
            }
        }
    }

    #[test]
    fn mask_at_start_admits_exactly_progs_productions() {
        let grammar = g();
        let vocab = minilang_vocabulary();
        let mask = valid_actions(&FrontierState::initial(&grammar), &grammar, &vocab);
        assert_eq!(mask.count_allowed(), 2);
        assert!(mask.allows(vocab.rule_action_id(0)));
        assert!(mask.allows(vocab.rule_action_id(1)));
    }

    #[test]
    fn mask_at_fixed_terminal_admits_exactly_that_token() {
        let grammar = g();
        let vocab = minilang_vocabulary();
        let frontier = FrontierState::from_symbols(vec![Symbol::fixed(";")]);
        let mask = valid_actions(&frontier, &grammar, &vocab);
        assert_eq!(mask.count_allowed(), 1);
        assert!(mask.allows(vocab.lexeme_id(";").unwrap()));
    }

    #[test]
    fn mask_at_id_class_admits_the_id_inventory() {
        let grammar = g();
        let vocab = minilang_vocabulary();
        let frontier = FrontierState::from_symbols(vec![Symbol::Class(TokenClass::Id)]);
        let mask = valid_actions(&frontier, &grammar, &vocab);
        assert_eq!(mask.count_allowed(), 50);
    }

    #[test]
    fn mask_at_empty_frontier_admits_only_eos() {
        let grammar = g();
        let vocab = minilang_vocabulary();
        let frontier = FrontierState::from_symbols(vec![]);
        let mask = valid_actions(&frontier, &grammar, &vocab);
        assert_eq!(mask.count_allowed(), 1);
        assert!(mask.allows(UnifiedVocabulary::EOS));
    }

    #[test]
    fn step_expands_rule_with_leftmost_on_top() {
        let grammar = g();
        let f0 = FrontierState::initial(&grammar);
        let f1 = step(&f0, &Action::ApplyRule(0), &grammar).unwrap();
        assert_eq!(f1.top(), Some(&Symbol::nt("Stmt")));
        let f2 = step(&f1, &Action::ApplyRule(3), &grammar).unwrap();
        assert_eq!(f2.top(), Some(&Symbol::fixed("return")));
        assert_eq!(f2.depth(), 3); // return, Expr, ;
        let f3 = step(&f2, &Action::GenToken(Token::fixed("return")), &grammar).unwrap();
        assert_eq!(f3.top(), Some(&Symbol::nt("Expr")));
    }

    #[test]
    fn step_rejects_inadmissible_action() {
        let grammar = g();
        let f0 = FrontierState::initial(&grammar);
        assert!(step(&f0, &Action::GenToken(Token::id("x")), &grammar).is_err());
        assert!(step(&f0, &Action::ApplyRule(7), &grammar).is_err());
    }

    #[test]
    fn mask_soundness_and_completeness_along_gold_replays() {
        // An action replays without error iff the mask admits it.
        let grammar = g();
        let vocab = minilang_vocabulary();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(17);
        for _ in 0..30 {
            let text = crate::corpus::sample_program_text(&mut rng, 2, Dialect::A);
            let ast = grammar.parse(&grammar.lex(&text).unwrap()).unwrap();
            let actions = ast_to_actions(&ast);
            let mut frontier = FrontierState::initial(&grammar);
            for action in actions.actions() {
                let mask = valid_actions(&frontier, &grammar, &vocab);
                let id = vocab.action_id(action).unwrap();
                assert!(mask.allows(id), "gold action {action} rejected");
                // Every admitted alternative must also step without error.
                for other_id in mask.allowed_ids() {
                    let other = vocab.action_of_id(other_id).unwrap();
                    assert!(step(&frontier, &other, &grammar).is_ok(), "admitted {other} fails");
                }
                // And every rejected rule action must fail to step.
                for r in 0..grammar.rule_count() {
                    let candidate = Action::ApplyRule(r);
                    let cid = vocab.rule_action_id(r);
                    assert_eq!(
                        mask.allows(cid),
                        step(&frontier, &candidate, &grammar).is_ok(),
                        "mask and step disagree on {candidate}"
                    );
                }
                frontier = step(&frontier, action, &grammar).unwrap();
            }
            assert!(frontier.is_complete());
        }
    }

    #[test]
    fn yield_matches_gen_token_subsequence() {
        let grammar = g();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(29);
        for _ in 0..50 {
            let text = crate::corpus::sample_program_text(&mut rng, 2, Dialect::A);
            let ast = grammar.parse(&grammar.lex(&text).unwrap()).unwrap();
            let actions = ast_to_actions(&ast);
            let rebuilt = actions_to_ast(&actions, &grammar).unwrap();
            let yielded = crate::minilang::render(&rebuilt);
            let gen_tokens: Vec<Token> = actions
                .actions()
                .iter()
                .filter_map(|a| match a {
                    Action::GenToken(t) => Some(t.clone()),
                    _ => None,
                })
                .collect();
            assert_eq!(yielded, gen_tokens);
            assert!(actions.len() > gen_tokens.len(), "m > n must hold");
        }
    }

    #[test]
    fn action_text_round_trip() {
        let grammar = g();
        let actions = return_x_actions();
        let text = actions.to_text();
        assert_eq!(text, "R0 R3 Treturn R5 R7 Tx T;");
        assert_eq!(ActionSequence::from_text(&text, &grammar).unwrap(), actions);
        assert!(ActionSequence::from_text("R99", &grammar).is_err());
        assert!(ActionSequence::from_text("X1", &grammar).is_err());
    }
}
