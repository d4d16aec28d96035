//! SQL DDL and INSERT ingestion.
//!
//! The accepted grammar is a deliberate subset: `CREATE TABLE` with column and
//! table constraints, and single-row `INSERT INTO ... VALUES (...)`. Every
//! statement ends with `;`. A statement that fails to parse is reported and
//! skipped; parsing resumes at the next statement.

mod create;
mod inserts;
mod lexer;
mod printer;
mod stream;

use std::fmt;

use crate::relational::SchemaError;

pub use create::{parse_ddl, parse_ddl_bytes, parse_ddl_document, DdlDocument, DdlParse};
pub use inserts::{parse_inserts, parse_inserts_ignoring, InsertParse};
pub use printer::{print_ddl, print_inserts};

/// 1-based position in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
}

impl SourceSpan {
    pub const START: SourceSpan = SourceSpan { line: 1, column: 1 };
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagnosticKind {
    Syntax,
    InvalidEncoding,
    UnknownType(String),
    Schema(SchemaError),
    UnknownTable(String),
    UnknownColumn { table: String, column: String },
    DuplicateColumn(String),
    ArityMismatch { expected: usize, found: usize },
    TypeMismatch(String),
    NullPrimaryKey { table: String, column: String },
    NotNullViolation(String),
    DuplicatePrimaryKey(String),
    /// Informational; carried by warnings.
    Ignored,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub severity: Severity,
    pub kind: DiagnosticKind,
    pub message: String,
    pub span: SourceSpan,
}

impl ParseDiagnostic {
    pub fn error(kind: DiagnosticKind, message: impl Into<String>, span: SourceSpan) -> Self {
        ParseDiagnostic { severity: Severity::Error, kind, message: message.into(), span }
    }

    pub fn warning(message: impl Into<String>, span: SourceSpan) -> Self {
        ParseDiagnostic { severity: Severity::Warning, kind: DiagnosticKind::Ignored, message: message.into(), span }
    }

    pub(crate) fn syntax(message: impl Into<String>, span: SourceSpan) -> Self {
        Self::error(DiagnosticKind::Syntax, message, span)
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// `file:line:col: severity: message`
    pub fn render(&self, file: &str) -> String {
        format!("{file}:{}: {}: {}", self.span, self.severity, self.message)
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.span, self.severity, self.message)
    }
}

pub fn has_errors(diagnostics: &[ParseDiagnostic]) -> bool {
    diagnostics.iter().any(ParseDiagnostic::is_error)
}
