//! Whitespace-delimited lexer: each maximal non-whitespace chunk must be
//! exactly one token.

use super::{Grammar, LangError, Token};

impl Grammar {
    /// Tokenize `text`. Chunks are classified fixed-terminal first, then ID,
    /// then NUM; anything else is a lex error carrying the chunk's byte
    /// offset. Joining the lexemes with single spaces and re-lexing is
    /// idempotent.
    pub fn lex(&self, text: &str) -> Result<Vec<Token>, LangError> {
        let mut tokens = Vec::new();
        let mut chunk_start = None;
        let bytes_len = text.len();
        for (i, ch) in text.char_indices().chain(std::iter::once((bytes_len, ' '))) {
            if ch.is_whitespace() {
                if let Some(start) = chunk_start.take() {
                    let chunk = &text[start..i];
                    let token = self.classify_chunk(chunk).ok_or_else(|| LangError::Lex {
                        offset: start,
                        chunk: chunk.to_string(),
                    })?;
                    tokens.push(token);
                }
            } else if chunk_start.is_none() {
                chunk_start = Some(i);
            }
        }
        Ok(tokens)
    }
}
