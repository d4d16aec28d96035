//! Bundled Municipality Information System schema and test rows.

use crate::ddl::{parse_ddl, parse_inserts};
use crate::relational::{RelationalSchema, Tuple};

pub const MUNICIPALITY_DDL: &str = include_str!("../fixtures/municipality.sql");
pub const MUNICIPALITY_ROWS: &str = include_str!("../fixtures/municipality_rows.sql");

/// The parsed Municipality schema and its ten rows.
pub fn municipality() -> (RelationalSchema, Vec<Tuple>) {
    let ddl = parse_ddl(MUNICIPALITY_DDL);
    let schema = ddl.schema.expect("bundled schema is valid");
    let rows = parse_inserts(MUNICIPALITY_ROWS, &schema);
    assert!(rows.diagnostics.is_empty(), "bundled rows are valid");
    (schema, rows.tuples)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_counts() {
        let (schema, rows) = municipality();
        assert_eq!(schema.tables.len(), 19);
        assert_eq!(schema.column_count(), 105);
        assert_eq!(schema.foreign_key_count(), 21);
        assert_eq!(rows.len(), 10);
        assert!(schema.table("Customer").unwrap().column("ID-RegistrationNo").is_some());
    }
}
