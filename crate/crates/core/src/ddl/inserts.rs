use std::collections::{BTreeMap, HashSet};

use chrono::{NaiveDate, NaiveDateTime};

use super::lexer::{tokenize, TokenKind};
use super::stream::{end_of, split_statements, PResult, Statement, Stream};
use super::{DiagnosticKind, ParseDiagnostic, SourceSpan};
use crate::relational::{canonical_decimal, ident_eq, Column, RelationalSchema, SqlType, Table, Tuple, Value};

#[derive(Debug, Clone, Default)]
pub struct InsertParse {
    pub tuples: Vec<Tuple>,
    pub diagnostics: Vec<ParseDiagnostic>,
}

#[derive(Debug, Clone, PartialEq)]
enum Literal {
    Null,
    Number(String),
    Str(String),
    Bool(bool),
    Date(String),
    Timestamp(String),
}

impl Literal {
    fn describe(&self) -> &'static str {
        match self {
            Literal::Null => "NULL",
            Literal::Number(_) => "number",
            Literal::Str(_) => "string",
            Literal::Bool(_) => "boolean",
            Literal::Date(_) => "date",
            Literal::Timestamp(_) => "timestamp",
        }
    }
}

/// Parses `INSERT INTO` statements against a validated schema. Statements
/// with any error produce no tuple.
pub fn parse_inserts(text: &str, schema: &RelationalSchema) -> InsertParse {
    parse_inserts_ignoring(text, schema, &[])
}

/// Like [`parse_inserts`], skipping (with a warning) rows of the named tables.
pub fn parse_inserts_ignoring(text: &str, schema: &RelationalSchema, ignored: &[String]) -> InsertParse {
    let mut out = InsertParse::default();
    let tokens = tokenize(text, &mut out.diagnostics);
    let mut seen_keys: HashSet<(String, Vec<String>)> = HashSet::new();

    for statement in split_statements(tokens, end_of(text)) {
        if !statement.terminated {
            out.diagnostics.push(ParseDiagnostic::syntax("statement is missing its terminating `;`", statement.end));
            continue;
        }
        let parsed = match parse_insert(&statement) {
            Ok(p) => p,
            Err(d) => {
                out.diagnostics.push(d);
                continue;
            }
        };
        if ignored.iter().any(|t| ident_eq(t, &parsed.table)) {
            out.diagnostics
                .push(ParseDiagnostic::warning(format!("row for ignored table `{}` skipped", parsed.table), parsed.span));
            continue;
        }
        match bind(&parsed, schema) {
            Ok(tuple) => {
                let table = schema.table(&tuple.table).expect("bound table exists");
                if !table.primary_key.is_empty() {
                    let key: Vec<String> = table
                        .primary_key
                        .iter()
                        .map(|k| tuple.values[k].lexical().unwrap_or_default())
                        .collect();
                    if !seen_keys.insert((table.name.clone(), key.clone())) {
                        out.diagnostics.push(ParseDiagnostic::error(
                            DiagnosticKind::DuplicatePrimaryKey(table.name.clone()),
                            format!("duplicate primary key ({}) in `{}`", key.join(", "), table.name),
                            parsed.span,
                        ));
                        continue;
                    }
                }
                out.tuples.push(tuple);
            }
            Err(errs) => out.diagnostics.extend(errs),
        }
    }
    out
}

struct ParsedInsert {
    table: String,
    span: SourceSpan,
    columns: Option<Vec<(String, SourceSpan)>>,
    values: Vec<(Literal, SourceSpan)>,
}

fn parse_insert(statement: &Statement) -> PResult<ParsedInsert> {
    let mut s = Stream::new(statement);
    let span = s.span();
    if !s.at_keyword("INSERT") {
        return Err(s.unexpected("`INSERT INTO`"));
    }
    s.next();
    s.expect_keyword("INTO")?;
    let (table, _) = s.ident()?;
    let columns = if s.eat(&TokenKind::LParen) {
        let mut cols = vec![s.ident()?];
        while s.eat(&TokenKind::Comma) {
            cols.push(s.ident()?);
        }
        s.expect(&TokenKind::RParen, "`)`")?;
        Some(cols)
    } else {
        None
    };
    s.expect_keyword("VALUES")?;
    s.expect(&TokenKind::LParen, "`(`")?;
    let mut values = vec![literal(&mut s)?];
    while s.eat(&TokenKind::Comma) {
        values.push(literal(&mut s)?);
    }
    s.expect(&TokenKind::RParen, "`)`")?;
    s.finish()?;
    Ok(ParsedInsert { table, span, columns, values })
}

fn literal(s: &mut Stream<'_>) -> PResult<(Literal, SourceSpan)> {
    let span = s.span();
    let negative = if s.eat(&TokenKind::Minus) {
        true
    } else {
        s.eat(&TokenKind::Plus);
        false
    };
    let token = s.next().ok_or_else(|| s.unexpected("literal"))?;
    let lit = match &token.kind {
        TokenKind::Number(n) => Literal::Number(if negative { format!("-{n}") } else { n.clone() }),
        _ if negative => return Err(ParseDiagnostic::syntax("expected number after sign", token.span)),
        TokenKind::Str(v) => Literal::Str(v.clone()),
        TokenKind::Word(w) if w.eq_ignore_ascii_case("NULL") => Literal::Null,
        TokenKind::Word(w) if w.eq_ignore_ascii_case("TRUE") => Literal::Bool(true),
        TokenKind::Word(w) if w.eq_ignore_ascii_case("FALSE") => Literal::Bool(false),
        TokenKind::Word(w) if w.eq_ignore_ascii_case("DATE") || w.eq_ignore_ascii_case("TIMESTAMP") => {
            let is_date = w.eq_ignore_ascii_case("DATE");
            match s.next().map(|t| &t.kind) {
                Some(TokenKind::Str(v)) if is_date => Literal::Date(v.clone()),
                Some(TokenKind::Str(v)) => Literal::Timestamp(v.clone()),
                _ => return Err(ParseDiagnostic::syntax(format!("expected string after {w}"), token.span)),
            }
        }
        _ => return Err(ParseDiagnostic::syntax(format!("expected literal, found {}", token.describe()), token.span)),
    };
    Ok((lit, span))
}

fn bind(parsed: &ParsedInsert, schema: &RelationalSchema) -> Result<Tuple, Vec<ParseDiagnostic>> {
    let Some(table) = schema.table(&parsed.table) else {
        return Err(vec![ParseDiagnostic::error(
            DiagnosticKind::UnknownTable(parsed.table.clone()),
            format!("unknown table `{}`", parsed.table),
            parsed.span,
        )]);
    };
    let mut errors = Vec::new();

    let targets: Vec<(usize, SourceSpan)> = match &parsed.columns {
        None => (0..table.columns.len()).map(|i| (i, parsed.span)).collect(),
        Some(cols) => {
            let mut idx = Vec::new();
            for (name, span) in cols {
                match table.column_index(name) {
                    Some(i) if idx.iter().any(|(j, _)| *j == i) => errors.push(ParseDiagnostic::error(
                        DiagnosticKind::DuplicateColumn(name.clone()),
                        format!("column `{name}` listed twice"),
                        *span,
                    )),
                    Some(i) => idx.push((i, *span)),
                    None => errors.push(ParseDiagnostic::error(
                        DiagnosticKind::UnknownColumn { table: table.name.clone(), column: name.clone() },
                        format!("table `{}` has no column `{name}`", table.name),
                        *span,
                    )),
                }
            }
            idx
        }
    };
    if !errors.is_empty() {
        return Err(errors);
    }
    if targets.len() != parsed.values.len() {
        return Err(vec![ParseDiagnostic::error(
            DiagnosticKind::ArityMismatch { expected: targets.len(), found: parsed.values.len() },
            format!("expected {} values, found {}", targets.len(), parsed.values.len()),
            parsed.span,
        )]);
    }

    let mut values: BTreeMap<String, Value> =
        table.columns.iter().map(|c| (c.name.clone(), Value::Null)).collect();
    for ((col_idx, _), (lit, span)) in targets.iter().zip(&parsed.values) {
        let column = &table.columns[*col_idx];
        match coerce(lit, column.sql_type) {
            Ok(v) => {
                values.insert(column.name.clone(), v);
            }
            Err(reason) => errors.push(ParseDiagnostic::error(
                DiagnosticKind::TypeMismatch(column.name.clone()),
                format!("value for `{}.{}`: {reason}", table.name, column.name),
                *span,
            )),
        }
    }
    if !errors.is_empty() {
        return Err(errors);
    }
    check_nulls(table, &values, parsed.span)?;
    Ok(Tuple { table: table.name.clone(), values })
}

fn check_nulls(table: &Table, values: &BTreeMap<String, Value>, span: SourceSpan) -> Result<(), Vec<ParseDiagnostic>> {
    for key in &table.primary_key {
        if values[key].is_null() {
            return Err(vec![ParseDiagnostic::error(
                DiagnosticKind::NullPrimaryKey { table: table.name.clone(), column: key.clone() },
                format!("primary key column `{}.{key}` is NULL", table.name),
                span,
            )]);
        }
    }
    let violations: Vec<&Column> =
        table.columns.iter().filter(|c| !c.nullable && values[&c.name].is_null()).collect();
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations
            .into_iter()
            .map(|c| {
                ParseDiagnostic::error(
                    DiagnosticKind::NotNullViolation(c.name.clone()),
                    format!("NOT NULL column `{}.{}` is NULL", table.name, c.name),
                    span,
                )
            })
            .collect())
    }
}

fn coerce(lit: &Literal, ty: SqlType) -> Result<Value, String> {
    let mismatch = || format!("{} literal does not fit {ty}", lit.describe());
    match (lit, ty) {
        (Literal::Null, _) => Ok(Value::Null),
        (Literal::Number(n), SqlType::Int | SqlType::BigInt | SqlType::SmallInt) => {
            let v: i64 = n.parse().map_err(|_| mismatch())?;
            let (lo, hi) = match ty {
                SqlType::SmallInt => (i16::MIN as i64, i16::MAX as i64),
                SqlType::Int => (i32::MIN as i64, i32::MAX as i64),
                _ => (i64::MIN, i64::MAX),
            };
            if v < lo || v > hi {
                return Err(format!("{v} is out of range for {ty}"));
            }
            Ok(Value::Integer(v))
        }
        (Literal::Number(n), SqlType::Decimal { precision, scale }) => {
            let d = canonical_decimal(n).ok_or_else(mismatch)?;
            let unsigned = d.trim_start_matches('-');
            let (int_part, frac_part) = unsigned.split_once('.').unwrap_or((unsigned, ""));
            let int_digits = if int_part == "0" { 0 } else { int_part.len() as u32 };
            if frac_part.len() as u32 > scale || int_digits > precision - scale {
                return Err(format!("{n} exceeds {ty}"));
            }
            Ok(Value::Decimal(d))
        }
        (Literal::Number(n), SqlType::Float | SqlType::Double) => {
            let v: f64 = n.parse().map_err(|_| mismatch())?;
            if !v.is_finite() {
                return Err(format!("{n} is out of range for {ty}"));
            }
            Ok(Value::Float(v))
        }
        (Literal::Str(v), SqlType::Varchar(n) | SqlType::Char(n)) => {
            if v.chars().count() > n as usize {
                return Err(format!("string longer than {n} characters"));
            }
            Ok(Value::Text(v.clone()))
        }
        (Literal::Str(v), SqlType::Text) => Ok(Value::Text(v.clone())),
        (Literal::Date(v) | Literal::Str(v), SqlType::Date) => {
            NaiveDate::parse_from_str(v, "%Y-%m-%d").map(Value::Date).map_err(|_| format!("invalid date `{v}`"))
        }
        (Literal::Date(v), SqlType::Timestamp) => NaiveDate::parse_from_str(v, "%Y-%m-%d")
            .map(|d| Value::Timestamp(d.and_hms_opt(0, 0, 0).expect("midnight")))
            .map_err(|_| format!("invalid date `{v}`")),
        (Literal::Timestamp(v) | Literal::Str(v), SqlType::Timestamp) => parse_timestamp(v)
            .map(Value::Timestamp)
            .ok_or_else(|| format!("invalid timestamp `{v}`")),
        (Literal::Bool(b), SqlType::Boolean) => Ok(Value::Boolean(*b)),
        (Literal::Number(n), SqlType::Boolean) => match n.as_str() {
            "0" => Ok(Value::Boolean(false)),
            "1" => Ok(Value::Boolean(true)),
            _ => Err(mismatch()),
        },
        (Literal::Str(v), SqlType::Boolean) => match v.to_ascii_lowercase().as_str() {
            "true" => Ok(Value::Boolean(true)),
            "false" => Ok(Value::Boolean(false)),
            _ => Err(mismatch()),
        },
        _ => Err(mismatch()),
    }
}

fn parse_timestamp(v: &str) -> Option<NaiveDateTime> {
    ["%Y-%m-%d %H:%M:%S%.f", "%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M", "%Y-%m-%dT%H:%M"]
        .iter()
        .find_map(|f| NaiveDateTime::parse_from_str(v, f).ok())
}
