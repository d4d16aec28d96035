use super::lexer::{Token, TokenKind};
use super::{ParseDiagnostic, SourceSpan};

pub(crate) type PResult<T> = Result<T, ParseDiagnostic>;

/// Tokens of one `;`-terminated statement.
pub(crate) struct Statement {
    pub tokens: Vec<Token>,
    /// Position of the terminating `;`, or of end of input when missing.
    pub end: SourceSpan,
    pub terminated: bool,
}

pub(crate) fn split_statements(tokens: Vec<Token>, eof: SourceSpan) -> Vec<Statement> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    for token in tokens {
        if token.kind == TokenKind::Semicolon {
            if current.is_empty() {
                continue;
            }
            out.push(Statement { tokens: std::mem::take(&mut current), end: token.span, terminated: true });
        } else {
            current.push(token);
        }
    }
    if !current.is_empty() {
        out.push(Statement { tokens: current, end: eof, terminated: false });
    }
    out
}

pub(crate) fn end_of(text: &str) -> SourceSpan {
    let mut span = SourceSpan::START;
    for c in text.chars() {
        if c == '\n' {
            span.line += 1;
            span.column = 1;
        } else {
            span.column += 1;
        }
    }
    span
}

pub(crate) struct Stream<'a> {
    tokens: &'a [Token],
    pos: usize,
    end: SourceSpan,
}

impl<'a> Stream<'a> {
    pub fn new(statement: &'a Statement) -> Self {
        Stream { tokens: &statement.tokens, pos: 0, end: statement.end }
    }

    pub fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    pub fn peek_kind(&self) -> Option<&'a TokenKind> {
        self.peek().map(|t| &t.kind)
    }

    pub fn next(&mut self) -> Option<&'a Token> {
        let t = self.tokens.get(self.pos)?;
        self.pos += 1;
        Some(t)
    }

    pub fn span(&self) -> SourceSpan {
        self.peek().map(|t| t.span).unwrap_or(self.end)
    }

    pub fn is_done(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    pub fn at_keyword(&self, keyword: &str) -> bool {
        matches!(self.peek_kind(), Some(TokenKind::Word(w)) if w.eq_ignore_ascii_case(keyword))
    }

    pub fn eat_keyword(&mut self, keyword: &str) -> bool {
        if self.at_keyword(keyword) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect_keyword(&mut self, keyword: &str) -> PResult<SourceSpan> {
        let span = self.span();
        if self.eat_keyword(keyword) {
            Ok(span)
        } else {
            Err(self.unexpected(&format!("`{}`", keyword.to_ascii_uppercase())))
        }
    }

    pub fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek_kind() == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, kind: &TokenKind, what: &str) -> PResult<SourceSpan> {
        let span = self.span();
        if self.eat(kind) {
            Ok(span)
        } else {
            Err(self.unexpected(what))
        }
    }

    /// Bare or double-quoted identifier.
    pub fn ident(&mut self) -> PResult<(String, SourceSpan)> {
        match self.peek() {
            Some(Token { kind: TokenKind::Word(w) | TokenKind::Quoted(w), span }) => {
                self.pos += 1;
                Ok((w.clone(), *span))
            }
            _ => Err(self.unexpected("identifier")),
        }
    }

    /// `( ident [, ident]* )`
    pub fn ident_list(&mut self) -> PResult<Vec<String>> {
        self.expect(&TokenKind::LParen, "`(`")?;
        let mut names = vec![self.ident()?.0];
        while self.eat(&TokenKind::Comma) {
            names.push(self.ident()?.0);
        }
        self.expect(&TokenKind::RParen, "`)`")?;
        Ok(names)
    }

    /// Skips a balanced parenthesized group if one starts here.
    pub fn skip_group(&mut self) -> PResult<()> {
        if !self.eat(&TokenKind::LParen) {
            return Ok(());
        }
        let open = self.span();
        let mut depth = 1;
        while depth > 0 {
            match self.next().map(|t| &t.kind) {
                Some(TokenKind::LParen) => depth += 1,
                Some(TokenKind::RParen) => depth -= 1,
                Some(_) => {}
                None => return Err(ParseDiagnostic::syntax("unbalanced parentheses", open)),
            }
        }
        Ok(())
    }

    pub fn unexpected(&self, expected: &str) -> ParseDiagnostic {
        match self.peek() {
            Some(t) => ParseDiagnostic::syntax(format!("expected {expected}, found {}", t.describe()), t.span),
            None => ParseDiagnostic::syntax(format!("expected {expected}, found end of statement"), self.end),
        }
    }

    pub fn finish(&self) -> PResult<()> {
        if self.is_done() {
            Ok(())
        } else {
            Err(self.unexpected("`;`"))
        }
    }
}
