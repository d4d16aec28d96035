use super::{ParseDiagnostic, SourceSpan};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum TokenKind {
    /// Bare identifier or keyword.
    Word(String),
    /// Double-quoted identifier, unescaped.
    Quoted(String),
    Number(String),
    /// Single-quoted string literal, unescaped.
    Str(String),
    LParen,
    RParen,
    Comma,
    Semicolon,
    Minus,
    Plus,
    Other(char),
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Token {
    pub kind: TokenKind,
    pub span: SourceSpan,
}

impl Token {
    pub fn describe(&self) -> String {
        match &self.kind {
            TokenKind::Word(w) => format!("`{w}`"),
            TokenKind::Quoted(q) => format!("\"{q}\""),
            TokenKind::Number(n) => format!("number {n}"),
            TokenKind::Str(_) => "string literal".into(),
            TokenKind::LParen => "`(`".into(),
            TokenKind::RParen => "`)`".into(),
            TokenKind::Comma => "`,`".into(),
            TokenKind::Semicolon => "`;`".into(),
            TokenKind::Minus => "`-`".into(),
            TokenKind::Plus => "`+`".into(),
            TokenKind::Other(c) => format!("`{c}`"),
        }
    }
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn span(&self) -> SourceSpan {
        SourceSpan { line: self.line, column: self.column }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '$' | '#')
}

/// Splits `text` into tokens, skipping whitespace and comments. Lexical errors
/// are reported as diagnostics and the offending input is skipped.
pub(crate) fn tokenize(text: &str, diagnostics: &mut Vec<ParseDiagnostic>) -> Vec<Token> {
    let mut cur = Cursor { chars: text.chars().peekable(), line: 1, column: 1 };
    let mut tokens = Vec::new();
    while let Some(c) = cur.peek() {
        let span = cur.span();
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        let kind = match c {
            '-' => {
                cur.bump();
                if cur.peek() == Some('-') {
                    while let Some(c) = cur.peek() {
                        if c == '\n' {
                            break;
                        }
                        cur.bump();
                    }
                    continue;
                }
                TokenKind::Minus
            }
            '/' => {
                cur.bump();
                if cur.peek() == Some('*') {
                    cur.bump();
                    let mut closed = false;
                    while let Some(c) = cur.bump() {
                        if c == '*' && cur.peek() == Some('/') {
                            cur.bump();
                            closed = true;
                            break;
                        }
                    }
                    if !closed {
                        diagnostics.push(ParseDiagnostic::syntax("unterminated block comment", span));
                    }
                    continue;
                }
                TokenKind::Other('/')
            }
            '\'' | '"' => {
                cur.bump();
                let mut body = String::new();
                let mut closed = false;
                while let Some(ch) = cur.bump() {
                    if ch == c {
                        if cur.peek() == Some(c) {
                            cur.bump();
                            body.push(c);
                        } else {
                            closed = true;
                            break;
                        }
                    } else {
                        body.push(ch);
                    }
                }
                if !closed {
                    let what = if c == '\'' { "string literal" } else { "quoted identifier" };
                    diagnostics.push(ParseDiagnostic::syntax(format!("unterminated {what}"), span));
                    continue;
                }
                if c == '\'' { TokenKind::Str(body) } else { TokenKind::Quoted(body) }
            }
            '(' => single(&mut cur, TokenKind::LParen),
            ')' => single(&mut cur, TokenKind::RParen),
            ',' => single(&mut cur, TokenKind::Comma),
            ';' => single(&mut cur, TokenKind::Semicolon),
            '+' => single(&mut cur, TokenKind::Plus),
            c if c.is_ascii_digit() || c == '.' => match number(&mut cur) {
                Some(n) => TokenKind::Number(n),
                None => TokenKind::Other('.'),
            },
            c if is_ident_start(c) => {
                let mut word = String::new();
                while let Some(c) = cur.peek() {
                    if !is_ident_continue(c) {
                        break;
                    }
                    word.push(c);
                    cur.bump();
                }
                TokenKind::Word(word)
            }
            other => single(&mut cur, TokenKind::Other(other)),
        };
        tokens.push(Token { kind, span });
    }
    tokens
}

fn single(cur: &mut Cursor<'_>, kind: TokenKind) -> TokenKind {
    cur.bump();
    kind
}

/// `digits [. digits] [e [+-] digits]`, or `. digits ...`. Returns `None`
/// for a lone `.` (consumed).
fn number(cur: &mut Cursor<'_>) -> Option<String> {
    let mut text = String::new();
    let mut digits = 0;
    while let Some(c) = cur.peek().filter(char::is_ascii_digit) {
        text.push(c);
        digits += 1;
        cur.bump();
    }
    if cur.peek() == Some('.') {
        text.push('.');
        cur.bump();
        while let Some(c) = cur.peek().filter(char::is_ascii_digit) {
            text.push(c);
            digits += 1;
            cur.bump();
        }
    }
    if digits == 0 {
        return None;
    }
    if matches!(cur.peek(), Some('e' | 'E')) {
        text.push('e');
        cur.bump();
        if let Some(sign @ ('+' | '-')) = cur.peek() {
            text.push(sign);
            cur.bump();
        }
        while let Some(c) = cur.peek().filter(char::is_ascii_digit) {
            text.push(c);
            cur.bump();
        }
    }
    Some(text)
}
