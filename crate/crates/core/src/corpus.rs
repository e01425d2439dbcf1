//! Synthetic parallel corpora for the two tasks, plus JSON-lines dataset I/O.
//!
//! Every example stores the input word sequence, the gold target tokens, the
//! gold action sequence and the token↔action alignment, all validated eagerly
//! at construction. Targets that fail to parse are hard errors, never skipped
//! rows. Generation is deterministic given (task, size, seed, depth).

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::minilang::{render, AstNode, Dialect, Grammar, Token};
use crate::transducer::{align, ast_to_actions, ActionSequence, AlignmentMap};
use crate::vocab::{minilang_vocabulary, UnifiedVocabulary};

/// Which parallel task a dataset belongs to. Text-to-code targets dialect A;
/// translation maps dialect-A code to the same program in dialect B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Nl2code,
    Translation,
}

impl Task {
    pub fn target_dialect(self) -> Dialect {
        match self {
            Task::Nl2code => Dialect::A,
            Task::Translation => Dialect::B,
        }
    }

    /// JSON field names (source, target).
    pub fn field_names(self) -> (&'static str, &'static str) {
        match self {
            Task::Nl2code => ("nl", "code"),
            Task::Translation => ("src", "tgt"),
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Task::Nl2code => write!(f, "nl2code"),
            Task::Translation => write!(f, "translation"),
        }
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}:{line}: {message}")]
    Format { path: String, line: usize, message: String },
    #[error("invalid example {id}: {message}")]
    Invalid { id: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// One training instance: input word sequence X, target tokens s_1..s_n,
/// target actions a_1..a_m, and their alignment.
#[derive(Debug, Clone, PartialEq)]
pub struct ParallelExample {
    pub id: String,
    pub source: Vec<String>,
    pub target_tokens: Vec<Token>,
    pub target_actions: ActionSequence,
    pub alignment: AlignmentMap,
}

impl ParallelExample {
    /// Build and validate an example from surface strings. The target is
    /// lexed and parsed under `grammar`; actions and alignment are derived;
    /// all invariants (n >= 1, m > n, vocabulary membership, alignment
    /// totality) are checked here.
    pub fn from_surface(
        id: &str,
        source: Vec<String>,
        target_text: &str,
        grammar: &Grammar,
        vocab: &UnifiedVocabulary,
    ) -> Result<Self, CorpusError> {
        let fail = |message: String| CorpusError::Invalid { id: id.to_string(), message };
        let target_tokens = grammar.lex(target_text).map_err(|e| fail(e.to_string()))?;
        let ast = grammar.parse(&target_tokens).map_err(|e| fail(e.to_string()))?;
        let target_actions = ast_to_actions(&ast);
        let alignment = align(&target_actions);

        if target_tokens.is_empty() {
            return Err(fail("empty target".into()));
        }
        if target_actions.len() <= target_tokens.len() {
            return Err(fail("m > n violated".into()));
        }
        alignment.validate(&target_actions).map_err(|e| fail(e.to_string()))?;
        if alignment.len() != target_tokens.len() {
            return Err(fail("alignment is not total on the target tokens".into()));
        }
        for (j, i) in alignment.iter() {
            match &target_actions.actions()[i - 1] {
                crate::transducer::Action::GenToken(t) if *t == target_tokens[j - 1] => {}
                other => return Err(fail(format!("aligned action {other:?} != token {j}"))),
            }
        }
        if source.is_empty() {
            return Err(fail("empty source".into()));
        }
        for w in &source {
            if vocab.lexeme_id(w).is_none() {
                return Err(fail(format!("source word {w:?} not in vocabulary")));
            }
        }
        for t in &target_tokens {
            if vocab.token_id(t).is_none() {
                return Err(fail(format!("target token {:?} not in vocabulary", t.lexeme)));
            }
        }
        Ok(ParallelExample {
            id: id.to_string(),
            source,
            target_tokens,
            target_actions,
            alignment,
        })
    }

    /// Target token count n.
    pub fn n(&self) -> usize {
        self.target_tokens.len()
    }

    /// Action count m.
    pub fn m(&self) -> usize {
        self.target_actions.len()
    }

    pub fn target_text(&self) -> String {
        self.target_tokens.iter().map(|t| t.lexeme.clone()).collect::<Vec<_>>().join(" ")
    }

    pub fn source_text(&self) -> String {
        self.source.join(" ")
    }
}

/// Train/valid/test split, disjoint by id.
#[derive(Debug, Clone)]
pub struct DatasetSplit {
    pub train: Vec<ParallelExample>,
    pub valid: Vec<ParallelExample>,
    pub test: Vec<ParallelExample>,
    pub seed: u64,
}

impl DatasetSplit {
    pub fn len(&self) -> usize {
        self.train.len() + self.valid.len() + self.test.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Per-dataset metadata written alongside the JSONL files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub format_version: u32,
    pub task: Task,
    pub seed: u64,
    pub depth: usize,
    pub train: usize,
    pub valid: usize,
    pub test: usize,
}

// Resampling caps keep sequences comfortably inside the model's default
// position tables.
const MAX_SOURCE_WORDS: usize = 72;
const MAX_ACTIONS: usize = 96;

/// Deterministically generate a synthetic parallel dataset. The split is
/// 80/10/10 with at least one example per split; examples are deduplicated
/// on the (source, target) surface pair.
pub fn generate_synthetic(
    task: Task,
    size: usize,
    seed: u64,
    depth: usize,
) -> Result<DatasetSplit, CorpusError> {
    if size < 3 {
        return Err(CorpusError::Config(format!("size must be >= 3, got {size}")));
    }
    if depth < 1 {
        return Err(CorpusError::Config(format!("depth must be >= 1, got {depth}")));
    }
    let n_valid = (size / 10).max(1);
    let n_test = (size / 10).max(1);
    let n_train = size - n_valid - n_test;

    let vocab = minilang_vocabulary();
    let grammar = Grammar::minilang(task.target_dialect());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: HashSet<(String, String)> = HashSet::new();
    let mut examples = Vec::with_capacity(size);
    let mut attempts = 0usize;
    while examples.len() < size {
        attempts += 1;
        if attempts > size * 1000 {
            return Err(CorpusError::Config(format!(
                "could not generate {size} distinct examples at depth {depth}"
            )));
        }
        let ast = sample_program(&mut rng, depth, task.target_dialect());
        let target_tokens = render(&ast);
        if target_tokens.len() * 2 > MAX_ACTIONS {
            continue;
        }
        let target_text =
            target_tokens.iter().map(|t| t.lexeme.clone()).collect::<Vec<_>>().join(" ");
        let source: Vec<String> = match task {
            Task::Nl2code => describe_program(&ast),
            Task::Translation => target_tokens
                .iter()
                .map(|t| if t.lexeme == ":=" { "=".to_string() } else { t.lexeme.clone() })
                .collect(),
        };
        if source.len() > MAX_SOURCE_WORDS {
            continue;
        }
        if !seen.insert((source.join(" "), target_text.clone())) {
            continue;
        }
        let id = format!("{task}-{seed}-{:06}", examples.len());
        let example = ParallelExample::from_surface(&id, source, &target_text, &grammar, &vocab)?;
        if example.m() > MAX_ACTIONS {
            continue;
        }
        examples.push(example);
    }

    let test = examples.split_off(size - n_test);
    let valid = examples.split_off(n_train);
    Ok(DatasetSplit { train: examples, valid, test, seed })
}

// ---------------------------------------------------------------------------
// Program sampling and the description templates
// ---------------------------------------------------------------------------

/// Sample a random program as token text (used by property tests).
pub fn sample_program_text(rng: &mut ChaCha8Rng, depth: usize, dialect: Dialect) -> String {
    crate::minilang::render_text(&sample_program(rng, depth, dialect))
}

/// Sample a random program AST with `if` nesting bounded by `depth`.
pub fn sample_program(rng: &mut ChaCha8Rng, depth: usize, dialect: Dialect) -> AstNode {
    let grammar = Grammar::minilang(dialect);
    let ast = gen_prog(rng, depth, dialect);
    debug_assert!(ast.validate(&grammar).is_ok());
    ast
}

fn internal(production: usize, children: Vec<AstNode>) -> AstNode {
    AstNode::Internal { production, children }
}

fn gen_prog(rng: &mut ChaCha8Rng, depth: usize, dialect: Dialect) -> AstNode {
    let stmt = gen_stmt(rng, depth, dialect);
    if rng.gen_bool(0.35) {
        internal(1, vec![stmt, gen_prog(rng, depth, dialect)])
    } else {
        internal(0, vec![stmt])
    }
}

fn gen_stmt(rng: &mut ChaCha8Rng, depth: usize, dialect: Dialect) -> AstNode {
    let kind = if depth > 0 { rng.gen_range(0..8) } else { rng.gen_range(0..6) };
    match kind {
        0..=2 => internal(
            2,
            vec![
                AstNode::Leaf(Token::fixed("let")),
                AstNode::Leaf(Token::id(&random_id(rng))),
                AstNode::Leaf(Token::fixed(dialect.assign_lexeme())),
                gen_expr(rng, depth),
                AstNode::Leaf(Token::fixed(";")),
            ],
        ),
        3..=5 => internal(
            3,
            vec![
                AstNode::Leaf(Token::fixed("return")),
                gen_expr(rng, depth),
                AstNode::Leaf(Token::fixed(";")),
            ],
        ),
        _ => internal(
            4,
            vec![
                AstNode::Leaf(Token::fixed("if")),
                AstNode::Leaf(Token::fixed("(")),
                gen_expr(rng, depth - 1),
                AstNode::Leaf(Token::fixed(")")),
                AstNode::Leaf(Token::fixed("{")),
                gen_prog(rng, depth - 1, dialect),
                AstNode::Leaf(Token::fixed("}")),
            ],
        ),
    }
}

fn gen_expr(rng: &mut ChaCha8Rng, depth: usize) -> AstNode {
    let term = gen_term(rng, depth);
    if rng.gen_bool(0.3) {
        internal(6, vec![term, AstNode::Leaf(Token::fixed("+")), gen_expr(rng, depth)])
    } else {
        internal(5, vec![term])
    }
}

fn gen_term(rng: &mut ChaCha8Rng, depth: usize) -> AstNode {
    let kind = if depth > 0 { rng.gen_range(0..8) } else { rng.gen_range(0..7) };
    match kind {
        0..=3 => internal(7, vec![AstNode::Leaf(Token::id(&random_id(rng)))]),
        4..=6 => internal(8, vec![AstNode::Leaf(Token::num(&rng.gen_range(0..100).to_string()))]),
        _ => internal(
            9,
            vec![
                AstNode::Leaf(Token::fixed("(")),
                gen_expr(rng, depth - 1),
                AstNode::Leaf(Token::fixed(")")),
            ],
        ),
    }
}

fn random_id(rng: &mut ChaCha8Rng) -> String {
    let inventory = crate::vocab::id_inventory();
    inventory[rng.gen_range(0..inventory.len())].clone()
}

/// English-like description of a program; compositional and injective, so a
/// description uniquely determines its program. Statements are joined with
/// "then", `if` bodies are delimited by "do .. done" and parenthesised
/// expressions by "the group .. end".
pub fn describe_program(ast: &AstNode) -> Vec<String> {
    let mut words = Vec::new();
    describe(ast, &mut words);
    words
}

fn describe(node: &AstNode, out: &mut Vec<String>) {
    let AstNode::Internal { production, children } = node else {
        unreachable!("descriptions start at internal nodes");
    };
    let word = |s: &str| s.to_string();
    match production {
        0 => describe(&children[0], out),
        1 => {
            describe(&children[0], out);
            out.push(word("then"));
            describe(&children[1], out);
        }
        2 => {
            out.push(word("let"));
            out.push(leaf_lexeme(&children[1]));
            out.push(word("be"));
            describe(&children[3], out);
        }
        3 => {
            out.push(word("return"));
            describe(&children[1], out);
        }
        4 => {
            out.push(word("when"));
            describe(&children[2], out);
            out.push(word("do"));
            describe(&children[5], out);
            out.push(word("done"));
        }
        5 => describe(&children[0], out),
        6 => {
            out.push(word("the"));
            out.push(word("sum"));
            out.push(word("of"));
            describe(&children[0], out);
            out.push(word("and"));
            describe(&children[2], out);
        }
        7 => {
            out.push(word("the"));
            out.push(word("variable"));
            out.push(leaf_lexeme(&children[0]));
        }
        8 => {
            out.push(word("the"));
            out.push(word("number"));
            out.push(leaf_lexeme(&children[0]));
        }
        9 => {
            out.push(word("the"));
            out.push(word("group"));
            describe(&children[1], out);
            out.push(word("end"));
        }
        other => unreachable!("unknown production {other}"),
    }
}

fn leaf_lexeme(node: &AstNode) -> String {
    match node {
        AstNode::Leaf(t) => t.lexeme.clone(),
        _ => unreachable!("expected leaf"),
    }
}

// ---------------------------------------------------------------------------
// JSON-lines I/O
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct Row {
    #[serde(skip_serializing_if = "Option::is_none")]
    id: Option<String>,
    #[serde(flatten)]
    fields: serde_json::Map<String, serde_json::Value>,
}

/// Write examples as UTF-8 JSON lines with the task's field names.
pub fn save_jsonl(examples: &[ParallelExample], path: &Path, task: Task) -> Result<(), CorpusError> {
    let (src_field, tgt_field) = task.field_names();
    let mut file = fs::File::create(path)?;
    for ex in examples {
        let mut fields = serde_json::Map::new();
        fields.insert(src_field.to_string(), serde_json::Value::String(ex.source_text()));
        fields.insert(tgt_field.to_string(), serde_json::Value::String(ex.target_text()));
        let row = Row { id: Some(ex.id.clone()), fields };
        writeln!(file, "{}", serde_json::to_string(&row)?)?;
    }
    Ok(())
}

/// Load examples from JSON lines, re-deriving actions and alignment from the
/// target text. Malformed JSON or unparseable targets fail with the 1-based
/// line number.
pub fn load_jsonl(path: &Path, task: Task) -> Result<Vec<ParallelExample>, CorpusError> {
    let (src_field, tgt_field) = task.field_names();
    let vocab = minilang_vocabulary();
    let grammar = Grammar::minilang(task.target_dialect());
    let file = fs::File::open(path)?;
    let reader = BufReader::new(file);
    let path_text = path.display().to_string();
    let mut out = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let format_err = |message: String| CorpusError::Format {
            path: path_text.clone(),
            line: lineno,
            message,
        };
        let row: Row =
            serde_json::from_str(&line).map_err(|e| format_err(format!("bad JSON: {e}")))?;
        let get = |field: &str| -> Result<String, CorpusError> {
            row.fields
                .get(field)
                .and_then(|v| v.as_str())
                .map(str::to_string)
                .ok_or_else(|| format_err(format!("missing string field {field:?}")))
        };
        let source_text = get(src_field)?;
        let target_text = get(tgt_field)?;
        let id = row.id.clone().unwrap_or_else(|| format!("line-{lineno}"));
        let source: Vec<String> = source_text.split_whitespace().map(str::to_string).collect();
        let example = ParallelExample::from_surface(&id, source, &target_text, &grammar, &vocab)
            .map_err(|e| format_err(e.to_string()))?;
        out.push(example);
    }
    Ok(out)
}

pub const TRAIN_FILE: &str = "train.jsonl";
pub const VALID_FILE: &str = "valid.jsonl";
pub const TEST_FILE: &str = "test.jsonl";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const GRAMMAR_FILE: &str = "grammar.txt";

/// Write a full dataset directory: three JSONL splits, the manifest, and the
/// target-dialect grammar in its text format.
pub fn save_dataset(
    split: &DatasetSplit,
    dir: &Path,
    task: Task,
    depth: usize,
) -> Result<(), CorpusError> {
    fs::create_dir_all(dir)?;
    save_jsonl(&split.train, &dir.join(TRAIN_FILE), task)?;
    save_jsonl(&split.valid, &dir.join(VALID_FILE), task)?;
    save_jsonl(&split.test, &dir.join(TEST_FILE), task)?;
    let manifest = DatasetManifest {
        format_version: 1,
        task,
        seed: split.seed,
        depth,
        train: split.train.len(),
        valid: split.valid.len(),
        test: split.test.len(),
    };
    fs::write(dir.join(MANIFEST_FILE), serde_json::to_string_pretty(&manifest)?)?;
    fs::write(dir.join(GRAMMAR_FILE), Grammar::minilang(task.target_dialect()).to_text())?;
    Ok(())
}

pub fn load_manifest(dir: &Path) -> Result<DatasetManifest, CorpusError> {
    let text = fs::read_to_string(dir.join(MANIFEST_FILE))?;
    Ok(serde_json::from_str(&text)?)
}

/// Load a dataset directory written by [`save_dataset`].
pub fn load_dataset(dir: &Path) -> Result<(DatasetSplit, DatasetManifest), CorpusError> {
    let manifest = load_manifest(dir)?;
    let split = DatasetSplit {
        train: load_jsonl(&dir.join(TRAIN_FILE), manifest.task)?,
        valid: load_jsonl(&dir.join(VALID_FILE), manifest.task)?,
        test: load_jsonl(&dir.join(TEST_FILE), manifest.task)?,
        seed: manifest.seed,
    };
    Ok((split, manifest))
}

/// SHA-256 of a file, hex-encoded; recorded in training run manifests.
pub fn file_sha256(path: &Path) -> Result<String, CorpusError> {
    use sha2::{Digest, Sha256};
    let bytes = fs::read(path)?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    Ok(format!("{:x}", hasher.finalize()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        let a = generate_synthetic(Task::Nl2code, 10, 7, 2).unwrap();
        let b = generate_synthetic(Task::Nl2code, 10, 7, 2).unwrap();
        assert_eq!(a.train, b.train);
        assert_eq!(a.valid, b.valid);
        assert_eq!(a.test, b.test);
        assert_eq!(a.train.len(), 8);
        assert_eq!(a.valid.len(), 1);
        assert_eq!(a.test.len(), 1);
    }

    #[test]
    fn generation_rejects_bad_sizes() {
        assert!(matches!(
            generate_synthetic(Task::Nl2code, 2, 7, 2),
            Err(CorpusError::Config(_))
        ));
        assert!(matches!(
            generate_synthetic(Task::Nl2code, 0, 7, 2),
            Err(CorpusError::Config(_))
        ));
        assert!(matches!(
            generate_synthetic(Task::Nl2code, 10, 7, 0),
            Err(CorpusError::Config(_))
        ));
    }

    #[test]
    fn description_of_return_statement() {
        let grammar = Grammar::minilang(Dialect::A);
        let ast = grammar.parse(&grammar.lex("return x ;").unwrap()).unwrap();
        assert_eq!(describe_program(&ast), vec!["return", "the", "variable", "x"]);
        // And the description round-trips through an example.
        let vocab = minilang_vocabulary();
        let ex = ParallelExample::from_surface(
            "t",
            describe_program(&ast),
            "return x ;",
            &grammar,
            &vocab,
        )
        .unwrap();
        assert_eq!(ex.n(), 3);
        assert_eq!(ex.m(), 7);
    }

    #[test]
    fn descriptions_are_distinct_per_program() {
        let split = generate_synthetic(Task::Nl2code, 200, 3, 2).unwrap();
        let mut seen = HashSet::new();
        for ex in split.train.iter().chain(&split.valid).chain(&split.test) {
            assert!(seen.insert(ex.source_text()), "duplicate description {}", ex.source_text());
        }
    }

    #[test]
    fn translation_differs_only_at_assignments() {
        let split = generate_synthetic(Task::Translation, 30, 9, 2).unwrap();
        for ex in split.train.iter().chain(&split.valid).chain(&split.test) {
            assert_eq!(ex.source.len(), ex.n());
            for (s, t) in ex.source.iter().zip(&ex.target_tokens) {
                if s == &t.lexeme {
                    continue;
                }
                assert_eq!(s, "=");
                assert_eq!(t.lexeme, ":=");
            }
        }
    }

    #[test]
    fn splits_are_disjoint_by_id() {
        let split = generate_synthetic(Task::Nl2code, 50, 5, 2).unwrap();
        let mut ids = HashSet::new();
        for ex in split.train.iter().chain(&split.valid).chain(&split.test) {
            assert!(ids.insert(ex.id.clone()));
        }
        assert_eq!(ids.len(), 50);
    }

    #[test]
    fn examples_satisfy_invariants_eagerly() {
        let grammar = Grammar::minilang(Dialect::A);
        let vocab = minilang_vocabulary();
        // Unparseable target is a hard error.
        let err = ParallelExample::from_surface(
            "bad",
            vec!["return".into()],
            "return ;",
            &grammar,
            &vocab,
        );
        assert!(matches!(err, Err(CorpusError::Invalid { .. })));
        // Out-of-vocabulary source word is a hard error.
        let err = ParallelExample::from_surface(
            "oov",
            vec!["zebra9z".into()],
            "return x ;",
            &grammar,
            &vocab,
        );
        assert!(matches!(err, Err(CorpusError::Invalid { .. })));
    }

    #[test]
    fn jsonl_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let split = generate_synthetic(Task::Nl2code, 12, 4, 2).unwrap();
        let path = dir.path().join("train.jsonl");
        save_jsonl(&split.train, &path, Task::Nl2code).unwrap();
        let loaded = load_jsonl(&path, Task::Nl2code).unwrap();
        assert_eq!(loaded, split.train);
        // Byte-identical on re-save.
        let first = fs::read(&path).unwrap();
        save_jsonl(&loaded, &path, Task::Nl2code).unwrap();
        assert_eq!(fs::read(&path).unwrap(), first);
    }

    #[test]
    fn jsonl_example_line_shape() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("one.jsonl");
        fs::write(&path, "{\"nl\": \"return the variable x\", \"code\": \"return x ;\"}\n")
            .unwrap();
        let loaded = load_jsonl(&path, Task::Nl2code).unwrap();
        assert_eq!(loaded.len(), 1);
        assert_eq!(loaded[0].n(), 3);
        assert_eq!(loaded[0].m(), 7);
        assert_eq!(loaded[0].id, "line-1");
    }

    #[test]
    fn jsonl_empty_file_loads_empty() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.jsonl");
        fs::write(&path, "").unwrap();
        assert!(load_jsonl(&path, Task::Nl2code).unwrap().is_empty());
    }

    #[test]
    fn jsonl_reports_failing_line_number() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.jsonl");
        fs::write(
            &path,
            "{\"nl\": \"return the variable x\", \"code\": \"return x ;\"}\n\
             {\"nl\": \"broken\", \"code\": \"return ;\"}\n",
        )
        .unwrap();
        match load_jsonl(&path, Task::Nl2code) {
            Err(CorpusError::Format { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected Format error, got {other:?}"),
        }
        fs::write(&path, "not json\n").unwrap();
        match load_jsonl(&path, Task::Nl2code) {
            Err(CorpusError::Format { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected Format error, got {other:?}"),
        }
    }

    #[test]
    fn dataset_directory_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let split = generate_synthetic(Task::Translation, 15, 2, 2).unwrap();
        save_dataset(&split, dir.path(), Task::Translation, 2).unwrap();
        let (loaded, manifest) = load_dataset(dir.path()).unwrap();
        assert_eq!(loaded.train, split.train);
        assert_eq!(loaded.valid, split.valid);
        assert_eq!(loaded.test, split.test);
        assert_eq!(manifest.task, Task::Translation);
        assert_eq!(manifest.seed, 2);
        assert_eq!(manifest.train, split.train.len());
        let grammar_text = fs::read_to_string(dir.path().join(GRAMMAR_FILE)).unwrap();
        assert_eq!(Grammar::from_text(&grammar_text).unwrap().to_text(), grammar_text);
    }
}
