//! Relational schema model: tables, columns, keys, foreign keys and rows.
//!
//! Identifiers compare case-insensitively and keep their declared spelling.
//! A [`RelationalSchema`] returned by [`validate_schema`] is canonical: tables
//! are sorted by case-insensitive name, and every foreign key refers to its
//! target with the target's declared spelling and primary-key column order.

mod classify;
mod value;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub use classify::{
    classify_relationship, classify_table, BridgeLink, ForeignKeyLink, RelationshipKind,
    SchemaAnalysis, TableClassification,
};
pub use value::{canonical_decimal, Tuple, Value};

/// Case-insensitive identifier equality.
pub fn ident_eq(a: &str, b: &str) -> bool {
    if a.is_ascii() && b.is_ascii() {
        a.eq_ignore_ascii_case(b)
    } else {
        a.to_lowercase() == b.to_lowercase()
    }
}

/// Sort/lookup key for an identifier.
pub fn ident_key(name: &str) -> String {
    name.to_lowercase()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SqlType {
    Int,
    BigInt,
    SmallInt,
    Decimal { precision: u32, scale: u32 },
    Float,
    Double,
    Varchar(u32),
    Char(u32),
    Text,
    Date,
    Timestamp,
    Boolean,
}

impl SqlType {
    fn check(&self) -> Result<(), String> {
        match *self {
            SqlType::Decimal { precision, scale } if scale > precision => {
                Err(format!("DECIMAL scale {scale} exceeds precision {precision}"))
            }
            SqlType::Decimal { precision: 0, .. } => Err("DECIMAL precision must be at least 1".into()),
            SqlType::Varchar(0) | SqlType::Char(0) => Err("string length must be at least 1".into()),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for SqlType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SqlType::Int => f.write_str("INT"),
            SqlType::BigInt => f.write_str("BIGINT"),
            SqlType::SmallInt => f.write_str("SMALLINT"),
            SqlType::Decimal { precision, scale } => write!(f, "DECIMAL({precision},{scale})"),
            SqlType::Float => f.write_str("FLOAT"),
            SqlType::Double => f.write_str("DOUBLE"),
            SqlType::Varchar(n) => write!(f, "VARCHAR({n})"),
            SqlType::Char(n) => write!(f, "CHAR({n})"),
            SqlType::Text => f.write_str("TEXT"),
            SqlType::Date => f.write_str("DATE"),
            SqlType::Timestamp => f.write_str("TIMESTAMP"),
            SqlType::Boolean => f.write_str("BOOLEAN"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub name: String,
    pub sql_type: SqlType,
    pub nullable: bool,
}

impl Column {
    pub fn new(name: impl Into<String>, sql_type: SqlType) -> Self {
        Column { name: name.into(), sql_type, nullable: true }
    }

    pub fn not_null(mut self) -> Self {
        self.nullable = false;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForeignKey {
    pub source_columns: Vec<String>,
    pub target_table: String,
    pub target_columns: Vec<String>,
    /// Source columns carry a UNIQUE constraint.
    pub unique_on_source: bool,
}

impl ForeignKey {
    pub fn new(source: &[&str], target_table: &str, target: &[&str]) -> Self {
        ForeignKey {
            source_columns: source.iter().map(|s| s.to_string()).collect(),
            target_table: target_table.to_string(),
            target_columns: target.iter().map(|s| s.to_string()).collect(),
            unique_on_source: false,
        }
    }

    pub fn unique(mut self) -> Self {
        self.unique_on_source = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<Column>,
    pub primary_key: Vec<String>,
    pub foreign_keys: Vec<ForeignKey>,
}

impl Table {
    pub fn new(name: impl Into<String>) -> Self {
        Table { name: name.into(), columns: Vec::new(), primary_key: Vec::new(), foreign_keys: Vec::new() }
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.columns.iter().find(|c| ident_eq(&c.name, name))
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| ident_eq(&c.name, name))
    }

    pub fn is_primary_key_column(&self, name: &str) -> bool {
        self.primary_key.iter().any(|k| ident_eq(k, name))
    }

    /// Lower-cased names of every column that belongs to some foreign key.
    pub fn foreign_key_members(&self) -> BTreeSet<String> {
        self.foreign_keys
            .iter()
            .flat_map(|fk| fk.source_columns.iter().map(|c| ident_key(c)))
            .collect()
    }

    pub fn is_foreign_key_member(&self, name: &str) -> bool {
        self.foreign_keys.iter().any(|fk| fk.source_columns.iter().any(|c| ident_eq(c, name)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RelationalSchema {
    pub name: String,
    pub tables: Vec<Table>,
}

impl RelationalSchema {
    pub fn new(name: impl Into<String>) -> Self {
        RelationalSchema { name: name.into(), tables: Vec::new() }
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| ident_eq(&t.name, name))
    }

    pub fn table_index(&self, name: &str) -> Option<usize> {
        self.tables.iter().position(|t| ident_eq(&t.name, name))
    }

    pub fn column_count(&self) -> usize {
        self.tables.iter().map(|t| t.columns.len()).sum()
    }

    pub fn foreign_key_count(&self) -> usize {
        self.tables.iter().map(|t| t.foreign_keys.len()).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("empty identifier in table `{0}`")]
    EmptyIdentifier(String),
    #[error("duplicate table `{0}`")]
    DuplicateTable(String),
    #[error("duplicate column `{column}` in table `{table}`")]
    DuplicateColumn { table: String, column: String },
    #[error("column `{column}` of table `{table}`: {reason}")]
    InvalidType { table: String, column: String, reason: String },
    #[error("primary key of `{table}` names unknown column `{column}`")]
    UnknownPkColumn { table: String, column: String },
    #[error("foreign key on `{table}` names unknown column `{column}`")]
    UnknownFkColumn { table: String, column: String },
    #[error("table `{table}` declares two foreign keys on ({columns})")]
    DuplicateForeignKey { table: String, columns: String },
    #[error("foreign key on `{0}` references unknown table `{1}`")]
    UnknownFkTarget(String, String),
    #[error("foreign key on `{0}` must reference the primary key of `{1}`")]
    FkTargetNotPrimaryKey(String, String),
    #[error("foreign key on `{0}` referencing `{1}` has mismatched column counts")]
    FkArityMismatch(String, String),
}

impl SchemaError {
    /// Table the violation was found on.
    pub fn table(&self) -> &str {
        match self {
            SchemaError::EmptyIdentifier(t)
            | SchemaError::DuplicateTable(t)
            | SchemaError::UnknownFkTarget(t, _)
            | SchemaError::FkTargetNotPrimaryKey(t, _)
            | SchemaError::FkArityMismatch(t, _) => t,
            SchemaError::DuplicateColumn { table, .. }
            | SchemaError::InvalidType { table, .. }
            | SchemaError::UnknownPkColumn { table, .. }
            | SchemaError::UnknownFkColumn { table, .. }
            | SchemaError::DuplicateForeignKey { table, .. } => table,
        }
    }
}

/// Checks every schema invariant and returns the canonical form, or the full
/// list of violations.
pub fn validate_schema(raw: RelationalSchema) -> Result<RelationalSchema, Vec<SchemaError>> {
    let mut errors = Vec::new();
    let mut schema = raw;

    schema.tables.sort_by_key(|t| (ident_key(&t.name), t.name.clone()));
    for pair in schema.tables.windows(2) {
        if ident_eq(&pair[0].name, &pair[1].name) {
            errors.push(SchemaError::DuplicateTable(pair[1].name.clone()));
        }
    }

    for table in &mut schema.tables {
        check_table_local(table, &mut errors);
    }

    // Foreign-key targets need the (locally canonical) primary keys of every table.
    let targets: Vec<(String, Vec<String>)> =
        schema.tables.iter().map(|t| (t.name.clone(), t.primary_key.clone())).collect();
    for table in &mut schema.tables {
        for fk in &mut table.foreign_keys {
            let Some((target_name, target_pk)) = targets.iter().find(|(n, _)| ident_eq(n, &fk.target_table))
            else {
                errors.push(SchemaError::UnknownFkTarget(table.name.clone(), fk.target_table.clone()));
                continue;
            };
            fk.target_table = target_name.clone();
            if fk.source_columns.is_empty() || fk.source_columns.len() != fk.target_columns.len() {
                errors.push(SchemaError::FkArityMismatch(table.name.clone(), target_name.clone()));
                continue;
            }
            // Target columns must be the target's primary key, in any order.
            let same_set = fk.target_columns.len() == target_pk.len()
                && target_pk.iter().all(|k| fk.target_columns.iter().filter(|c| ident_eq(c, k)).count() == 1);
            if !same_set {
                errors.push(SchemaError::FkTargetNotPrimaryKey(table.name.clone(), target_name.clone()));
                continue;
            }
            let mut source = Vec::with_capacity(target_pk.len());
            for key in target_pk {
                let pos = fk.target_columns.iter().position(|c| ident_eq(c, key)).expect("checked above");
                source.push(fk.source_columns[pos].clone());
            }
            fk.source_columns = source;
            fk.target_columns = target_pk.clone();
        }
    }

    // Reordering may make two keys identical.
    for table in &schema.tables {
        check_duplicate_fks(table, &mut errors);
    }

    if errors.is_empty() {
        Ok(schema)
    } else {
        errors.dedup();
        Err(errors)
    }
}

fn check_table_local(table: &mut Table, errors: &mut Vec<SchemaError>) {
    if table.name.is_empty() {
        errors.push(SchemaError::EmptyIdentifier(table.name.clone()));
    }
    let mut seen = BTreeSet::new();
    for column in &table.columns {
        if column.name.is_empty() {
            errors.push(SchemaError::EmptyIdentifier(table.name.clone()));
        }
        if !seen.insert(ident_key(&column.name)) {
            errors.push(SchemaError::DuplicateColumn { table: table.name.clone(), column: column.name.clone() });
        }
        if let Err(reason) = column.sql_type.check() {
            errors.push(SchemaError::InvalidType { table: table.name.clone(), column: column.name.clone(), reason });
        }
    }

    let mut pk = Vec::with_capacity(table.primary_key.len());
    for key in &table.primary_key {
        match table.column(key) {
            Some(c) => {
                if pk.iter().any(|k: &String| ident_eq(k, &c.name)) {
                    errors.push(SchemaError::DuplicateColumn { table: table.name.clone(), column: c.name.clone() });
                }
                pk.push(c.name.clone());
            }
            None => errors.push(SchemaError::UnknownPkColumn { table: table.name.clone(), column: key.clone() }),
        }
    }
    for column in &mut table.columns {
        if pk.iter().any(|k| ident_eq(k, &column.name)) {
            column.nullable = false;
        }
    }
    table.primary_key = pk;

    for i in 0..table.foreign_keys.len() {
        let mut canonical = Vec::new();
        for col in &table.foreign_keys[i].source_columns {
            match table.column(col) {
                Some(c) => canonical.push(c.name.clone()),
                None => {
                    errors.push(SchemaError::UnknownFkColumn { table: table.name.clone(), column: col.clone() });
                    canonical.push(col.clone());
                }
            }
        }
        table.foreign_keys[i].source_columns = canonical;
    }
}

fn check_duplicate_fks(table: &Table, errors: &mut Vec<SchemaError>) {
    for (i, a) in table.foreign_keys.iter().enumerate() {
        for b in &table.foreign_keys[..i] {
            let same = a.source_columns.len() == b.source_columns.len()
                && a.source_columns.iter().zip(&b.source_columns).all(|(x, y)| ident_eq(x, y));
            if same {
                errors.push(SchemaError::DuplicateForeignKey {
                    table: table.name.clone(),
                    columns: a.source_columns.join(", "),
                });
            }
        }
    }
}
