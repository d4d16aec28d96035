use super::lexer::{tokenize, TokenKind};
use super::stream::{end_of, split_statements, PResult, Statement, Stream};
use super::{DiagnosticKind, ParseDiagnostic, SourceSpan};
use crate::relational::{ident_eq, validate_schema, Column, ForeignKey, RelationalSchema, SqlType, Table};

/// Parsed but unvalidated DDL. Lets callers drop tables before validation.
#[derive(Debug, Clone)]
pub struct DdlDocument {
    pub schema: RelationalSchema,
    /// Position of each `CREATE TABLE`, in source order.
    pub table_spans: Vec<(String, SourceSpan)>,
    pub diagnostics: Vec<ParseDiagnostic>,
}

#[derive(Debug, Clone)]
pub struct DdlParse {
    /// `None` when any error diagnostic was produced.
    pub schema: Option<RelationalSchema>,
    pub diagnostics: Vec<ParseDiagnostic>,
}

impl DdlDocument {
    /// Removes a table (case-insensitive). Returns whether it existed.
    pub fn remove_table(&mut self, name: &str) -> bool {
        let before = self.schema.tables.len();
        self.schema.tables.retain(|t| !ident_eq(&t.name, name));
        before != self.schema.tables.len()
    }

    fn span_of(&self, table: &str) -> SourceSpan {
        self.table_spans
            .iter()
            .rev()
            .find(|(n, _)| ident_eq(n, table))
            .map(|(_, s)| *s)
            .unwrap_or(SourceSpan::START)
    }

    pub fn validate(self) -> DdlParse {
        let mut diagnostics = self.diagnostics.clone();
        if super::has_errors(&diagnostics) {
            return DdlParse { schema: None, diagnostics };
        }
        match validate_schema(self.schema.clone()) {
            Ok(schema) => DdlParse { schema: Some(schema), diagnostics },
            Err(errors) => {
                for e in errors {
                    let span = self.span_of(e.table());
                    let message = e.to_string();
                    diagnostics.push(ParseDiagnostic::error(DiagnosticKind::Schema(e), message, span));
                }
                DdlParse { schema: None, diagnostics }
            }
        }
    }
}

pub fn parse_ddl(text: &str) -> DdlParse {
    parse_ddl_document(text).validate()
}

/// Like [`parse_ddl`], for input that may not be valid UTF-8.
pub fn parse_ddl_bytes(bytes: &[u8]) -> DdlParse {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse_ddl(text),
        Err(e) => {
            let prefix = &bytes[..e.valid_up_to()];
            let span = end_of(&String::from_utf8_lossy(prefix));
            DdlParse {
                schema: None,
                diagnostics: vec![ParseDiagnostic::error(
                    DiagnosticKind::InvalidEncoding,
                    "input is not valid UTF-8",
                    span,
                )],
            }
        }
    }
}

pub fn parse_ddl_document(text: &str) -> DdlDocument {
    let mut diagnostics = Vec::new();
    let tokens = tokenize(text, &mut diagnostics);
    let mut schema = RelationalSchema::new("schema");
    let mut table_spans = Vec::new();

    for statement in split_statements(tokens, end_of(text)) {
        if !statement.terminated {
            diagnostics.push(ParseDiagnostic::syntax("statement is missing its terminating `;`", statement.end));
        }
        match parse_create_table(&statement, &mut diagnostics) {
            Ok((table, span)) => {
                table_spans.push((table.name.clone(), span));
                schema.tables.push(table);
            }
            Err(d) => diagnostics.push(d),
        }
    }

    // `REFERENCES t` without a column list means t's primary key.
    let keys: Vec<(String, Vec<String>)> =
        schema.tables.iter().map(|t| (t.name.clone(), t.primary_key.clone())).collect();
    for table in &mut schema.tables {
        for fk in &mut table.foreign_keys {
            if fk.target_columns.is_empty() {
                if let Some((_, pk)) = keys.iter().find(|(n, _)| ident_eq(n, &fk.target_table)) {
                    fk.target_columns = pk.clone();
                }
            }
        }
    }

    DdlDocument { schema, table_spans, diagnostics }
}

#[derive(Default)]
struct TableDraft {
    table: Option<Table>,
    column_pk: Vec<(String, SourceSpan)>,
    table_pk: Option<(Vec<String>, SourceSpan)>,
    uniques: Vec<Vec<String>>,
}

fn parse_create_table(
    statement: &Statement,
    diagnostics: &mut Vec<ParseDiagnostic>,
) -> PResult<(Table, SourceSpan)> {
    let mut s = Stream::new(statement);
    if !s.at_keyword("CREATE") {
        return Err(s.unexpected("`CREATE TABLE`"));
    }
    s.next();
    s.expect_keyword("TABLE")?;
    if s.eat_keyword("IF") {
        s.expect_keyword("NOT")?;
        s.expect_keyword("EXISTS")?;
    }
    let (name, name_span) = s.ident()?;
    let mut draft = TableDraft { table: Some(Table::new(name)), ..Default::default() };

    s.expect(&TokenKind::LParen, "`(`")?;
    loop {
        if s.at_keyword("CONSTRAINT")
            || s.at_keyword("PRIMARY")
            || s.at_keyword("UNIQUE")
            || s.at_keyword("FOREIGN")
            || s.at_keyword("CHECK")
        {
            table_constraint(&mut s, &mut draft, diagnostics)?;
        } else {
            column_def(&mut s, &mut draft, diagnostics)?;
        }
        if s.eat(&TokenKind::Comma) {
            continue;
        }
        s.expect(&TokenKind::RParen, "`,` or `)`")?;
        break;
    }
    s.finish()?;

    let mut table = draft.table.take().expect("draft table");
    match (draft.column_pk.as_slice(), draft.table_pk) {
        ([], None) => {}
        ([(col, _)], None) => table.primary_key = vec![col.clone()],
        ([], Some((cols, _))) => table.primary_key = cols,
        (cols, table_pk) => {
            let span = table_pk.map(|(_, s)| s).unwrap_or(cols[cols.len() - 1].1);
            return Err(ParseDiagnostic::syntax(
                format!("table `{}` declares more than one primary key", table.name),
                span,
            ));
        }
    }
    for fk in &mut table.foreign_keys {
        fk.unique_on_source = draft.uniques.iter().any(|u| same_set(u, &fk.source_columns));
    }
    Ok((table, name_span))
}

fn same_set(a: &[String], b: &[String]) -> bool {
    a.len() == b.len() && a.iter().all(|x| b.iter().any(|y| ident_eq(x, y)))
}

fn table_constraint(
    s: &mut Stream<'_>,
    draft: &mut TableDraft,
    diagnostics: &mut Vec<ParseDiagnostic>,
) -> PResult<()> {
    if s.eat_keyword("CONSTRAINT") {
        s.ident()?;
    }
    let span = s.span();
    let table = draft.table.as_mut().expect("draft table");
    if s.eat_keyword("PRIMARY") {
        s.expect_keyword("KEY")?;
        let cols = s.ident_list()?;
        if draft.table_pk.is_some() {
            return Err(ParseDiagnostic::syntax(
                format!("table `{}` declares more than one primary key", table.name),
                span,
            ));
        }
        draft.table_pk = Some((cols, span));
    } else if s.eat_keyword("UNIQUE") {
        let cols = s.ident_list()?;
        draft.uniques.push(cols);
    } else if s.eat_keyword("FOREIGN") {
        s.expect_keyword("KEY")?;
        let source = s.ident_list()?;
        let fk = references(s, source)?;
        table.foreign_keys.push(fk);
    } else if s.eat_keyword("CHECK") {
        s.skip_group()?;
        diagnostics.push(ParseDiagnostic::warning("CHECK constraint ignored", span));
    } else {
        return Err(s.unexpected("`PRIMARY KEY`, `UNIQUE` or `FOREIGN KEY`"));
    }
    Ok(())
}

/// `REFERENCES table [(cols)] [ON DELETE|UPDATE action]*`, `REFERENCES` already expected next.
fn references(s: &mut Stream<'_>, source: Vec<String>) -> PResult<ForeignKey> {
    s.expect_keyword("REFERENCES")?;
    let (target_table, _) = s.ident()?;
    let target_columns = if s.peek_kind() == Some(&TokenKind::LParen) { s.ident_list()? } else { Vec::new() };
    while s.eat_keyword("ON") {
        if !s.eat_keyword("DELETE") {
            s.expect_keyword("UPDATE")?;
        }
        if s.eat_keyword("SET") {
            if !s.eat_keyword("NULL") {
                s.expect_keyword("DEFAULT")?;
            }
        } else if s.eat_keyword("NO") {
            s.expect_keyword("ACTION")?;
        } else if !(s.eat_keyword("CASCADE") || s.eat_keyword("RESTRICT")) {
            return Err(s.unexpected("referential action"));
        }
    }
    Ok(ForeignKey { source_columns: source, target_table, target_columns, unique_on_source: false })
}

fn column_def(
    s: &mut Stream<'_>,
    draft: &mut TableDraft,
    diagnostics: &mut Vec<ParseDiagnostic>,
) -> PResult<()> {
    let (name, _) = s.ident()?;
    let sql_type = sql_type(s)?;
    let mut column = Column::new(name.clone(), sql_type);
    loop {
        let span = s.span();
        if s.eat_keyword("NOT") {
            s.expect_keyword("NULL")?;
            column.nullable = false;
        } else if s.eat_keyword("NULL") {
            column.nullable = true;
        } else if s.eat_keyword("PRIMARY") {
            s.expect_keyword("KEY")?;
            draft.column_pk.push((name.clone(), span));
        } else if s.eat_keyword("UNIQUE") {
            draft.uniques.push(vec![name.clone()]);
        } else if s.at_keyword("REFERENCES") {
            let fk = references(s, vec![name.clone()])?;
            draft.table.as_mut().expect("draft table").foreign_keys.push(fk);
        } else if s.eat_keyword("CONSTRAINT") {
            s.ident()?;
        } else if s.eat_keyword("DEFAULT") {
            default_value(s)?;
            diagnostics.push(ParseDiagnostic::warning(format!("DEFAULT on `{name}` ignored"), span));
        } else if s.eat_keyword("GENERATED") {
            // GENERATED {ALWAYS | BY DEFAULT [ON NULL]} AS IDENTITY [(options)]
            if !s.eat_keyword("ALWAYS") {
                s.expect_keyword("BY")?;
                s.expect_keyword("DEFAULT")?;
                if s.eat_keyword("ON") {
                    s.expect_keyword("NULL")?;
                }
            }
            s.expect_keyword("AS")?;
            s.expect_keyword("IDENTITY")?;
            s.skip_group()?;
        } else if s.eat_keyword("IDENTITY") {
            s.skip_group()?;
        } else if s.eat_keyword("AUTO_INCREMENT") || s.eat_keyword("AUTOINCREMENT") {
        } else {
            break;
        }
    }
    draft.table.as_mut().expect("draft table").columns.push(column);
    Ok(())
}

fn default_value(s: &mut Stream<'_>) -> PResult<()> {
    s.eat(&TokenKind::Minus);
    match s.next().map(|t| &t.kind) {
        Some(TokenKind::Number(_) | TokenKind::Str(_) | TokenKind::Word(_)) => {
            s.skip_group()?;
            Ok(())
        }
        _ => Err(ParseDiagnostic::syntax("expected default value", s.span())),
    }
}

fn type_params(s: &mut Stream<'_>) -> PResult<Vec<u32>> {
    let mut params = Vec::new();
    if !s.eat(&TokenKind::LParen) {
        return Ok(params);
    }
    loop {
        let span = s.span();
        match s.next().map(|t| &t.kind) {
            Some(TokenKind::Number(n)) => match n.parse::<u32>() {
                Ok(v) => params.push(v),
                Err(_) => return Err(ParseDiagnostic::syntax(format!("invalid type parameter `{n}`"), span)),
            },
            _ => return Err(ParseDiagnostic::syntax("expected type parameter", span)),
        }
        if s.eat(&TokenKind::Comma) {
            continue;
        }
        s.expect(&TokenKind::RParen, "`)`")?;
        return Ok(params);
    }
}

fn sql_type(s: &mut Stream<'_>) -> PResult<SqlType> {
    let span = s.span();
    let original = match s.peek_kind() {
        Some(TokenKind::Word(w)) => w.clone(),
        _ => return Err(s.unexpected("column type")),
    };
    let name = original.to_ascii_uppercase();
    s.next();
    if name == "DOUBLE" {
        s.eat_keyword("PRECISION");
    }
    let params = type_params(s)?;
    let bad_params = || ParseDiagnostic::syntax(format!("wrong number of parameters for {name}"), span);
    let ty = match name.as_str() {
        "INT" | "INTEGER" | "INT4" | "MEDIUMINT" => SqlType::Int,
        "BIGINT" | "INT8" => SqlType::BigInt,
        "SMALLINT" | "INT2" | "TINYINT" => SqlType::SmallInt,
        "DECIMAL" | "NUMERIC" | "DEC" => match params.as_slice() {
            [] => SqlType::Decimal { precision: 18, scale: 0 },
            [p] => SqlType::Decimal { precision: *p, scale: 0 },
            [p, s] => SqlType::Decimal { precision: *p, scale: *s },
            _ => return Err(bad_params()),
        },
        "NUMBER" => match params.as_slice() {
            [] => SqlType::Double,
            [p] | [p, 0] => integer_family(*p),
            [p, s] => SqlType::Decimal { precision: *p, scale: *s },
            _ => return Err(bad_params()),
        },
        "FLOAT" | "REAL" | "BINARY_FLOAT" => SqlType::Float,
        "DOUBLE" | "BINARY_DOUBLE" => SqlType::Double,
        "VARCHAR" | "VARCHAR2" | "NVARCHAR" | "NVARCHAR2" => match params.as_slice() {
            [n] => SqlType::Varchar(*n),
            _ => return Err(bad_params()),
        },
        "CHAR" | "CHARACTER" | "NCHAR" => match params.as_slice() {
            [] => SqlType::Char(1),
            [n] => SqlType::Char(*n),
            _ => return Err(bad_params()),
        },
        "TEXT" | "CLOB" | "NCLOB" => SqlType::Text,
        "DATE" => SqlType::Date,
        "TIMESTAMP" | "DATETIME" => SqlType::Timestamp,
        "BOOLEAN" | "BOOL" => SqlType::Boolean,
        _ => {
            return Err(ParseDiagnostic::error(
                DiagnosticKind::UnknownType(original.clone()),
                format!("unknown column type `{original}`"),
                span,
            ));
        }
    };
    Ok(ty)
}

fn integer_family(precision: u32) -> SqlType {
    match precision {
        0..=4 => SqlType::SmallInt,
        5..=9 => SqlType::Int,
        10..=18 => SqlType::BigInt,
        p => SqlType::Decimal { precision: p, scale: 0 },
    }
}
