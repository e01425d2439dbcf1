//! Desk-scale dual-paradigm code generation.
//!
//! One encoder-decoder backbone generates a target program either as a token
//! sequence or as a grammar-action sequence, with a learned per-instance
//! selector choosing the paradigm. The crate covers the whole pipeline: the
//! MiniLang grammar machinery, AST↔action transduction, synthetic corpora,
//! the f64 transformer backbone, the two-stage training protocol
//! (multi-task + bidirectional distillation, then a frozen-backbone
//! max-margin selector), constrained decoding, and BLEU/CodeBLEU metrics.

pub mod corpus;
pub mod minilang;
pub mod transducer;
pub mod vocab;
