use std::fmt::Write;

use crate::relational::{RelationalSchema, Table, Tuple, Value};

fn quote(ident: &str) -> String {
    format!("\"{}\"", ident.replace('"', "\"\""))
}

fn quote_list(names: &[String]) -> String {
    names.iter().map(|n| quote(n)).collect::<Vec<_>>().join(", ")
}

/// Renders a schema as DDL that [`super::parse_ddl`] reads back to the same
/// schema. Identifiers are always quoted.
pub fn print_ddl(schema: &RelationalSchema) -> String {
    let mut out = String::new();
    for (i, table) in schema.tables.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        print_table(&mut out, table);
    }
    out
}

fn print_table(out: &mut String, table: &Table) {
    let mut items: Vec<String> = table
        .columns
        .iter()
        .map(|c| {
            let null = if c.nullable { "" } else { " NOT NULL" };
            format!("{} {}{null}", quote(&c.name), c.sql_type)
        })
        .collect();
    if !table.primary_key.is_empty() {
        items.push(format!("PRIMARY KEY ({})", quote_list(&table.primary_key)));
    }
    for fk in &table.foreign_keys {
        if fk.unique_on_source {
            items.push(format!("UNIQUE ({})", quote_list(&fk.source_columns)));
        }
        items.push(format!(
            "FOREIGN KEY ({}) REFERENCES {} ({})",
            quote_list(&fk.source_columns),
            quote(&fk.target_table),
            quote_list(&fk.target_columns)
        ));
    }
    let _ = writeln!(out, "CREATE TABLE {} (", quote(&table.name));
    for (i, item) in items.iter().enumerate() {
        let sep = if i + 1 < items.len() { "," } else { "" };
        let _ = writeln!(out, "  {item}{sep}");
    }
    out.push_str(");\n");
}

fn literal(value: &Value) -> String {
    match value {
        Value::Null => "NULL".into(),
        Value::Text(s) => format!("'{}'", s.replace('\'', "''")),
        Value::Date(d) => format!("DATE '{}'", d.format("%Y-%m-%d")),
        Value::Timestamp(t) => format!("TIMESTAMP '{}'", t.format("%Y-%m-%d %H:%M:%S%.f")),
        Value::Boolean(b) => if *b { "TRUE" } else { "FALSE" }.into(),
        other => other.lexical().unwrap_or_default(),
    }
}

/// Renders tuples as INSERT statements with explicit column lists in the
/// table's declaration order.
pub fn print_inserts(schema: &RelationalSchema, tuples: &[Tuple]) -> String {
    let mut out = String::new();
    for tuple in tuples {
        let Some(table) = schema.table(&tuple.table) else { continue };
        let names: Vec<String> = table.columns.iter().map(|c| c.name.clone()).collect();
        let values: Vec<String> =
            table.columns.iter().map(|c| literal(tuple.get(&c.name).unwrap_or(&Value::Null))).collect();
        let _ = writeln!(
            out,
            "INSERT INTO {} ({}) VALUES ({});",
            quote(&table.name),
            quote_list(&names),
            values.join(", ")
        );
    }
    out
}
