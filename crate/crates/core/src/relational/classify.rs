use std::collections::BTreeSet;

use super::{ident_eq, ident_key, ForeignKey, RelationalSchema, Table};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TableClassification {
    Regular,
    /// Resolves a many-to-many relationship between the targets of its two keys.
    Bridge { first: ForeignKey, second: ForeignKey },
}

impl TableClassification {
    pub fn is_bridge(&self) -> bool {
        matches!(self, TableClassification::Bridge { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelationshipKind {
    OneToOne,
    OneToMany,
    ManyToMany { via_table: String },
}

/// A table is a bridge when it has exactly two foreign keys to two distinct
/// tables, its primary key is exactly the union of their source columns, and
/// it has no other columns.
pub fn classify_table(_schema: &RelationalSchema, table: &Table) -> TableClassification {
    let [first, second] = table.foreign_keys.as_slice() else {
        return TableClassification::Regular;
    };
    if ident_eq(&first.target_table, &second.target_table) {
        return TableClassification::Regular;
    }
    let members: BTreeSet<String> =
        first.source_columns.iter().chain(&second.source_columns).map(|c| ident_key(c)).collect();
    let pk: BTreeSet<String> = table.primary_key.iter().map(|c| ident_key(c)).collect();
    let columns: BTreeSet<String> = table.columns.iter().map(|c| ident_key(&c.name)).collect();
    if members == pk && columns == members {
        TableClassification::Bridge { first: first.clone(), second: second.clone() }
    } else {
        TableClassification::Regular
    }
}

pub fn classify_relationship(schema: &RelationalSchema, fk: &ForeignKey, host: &Table) -> RelationshipKind {
    let source: BTreeSet<String> = fk.source_columns.iter().map(|c| ident_key(c)).collect();
    let pk: BTreeSet<String> = host.primary_key.iter().map(|c| ident_key(c)).collect();
    if fk.unique_on_source || (!pk.is_empty() && source == pk) {
        RelationshipKind::OneToOne
    } else if classify_table(schema, host).is_bridge() {
        RelationshipKind::ManyToMany { via_table: host.name.clone() }
    } else {
        RelationshipKind::OneToMany
    }
}

/// A foreign key between two Regular tables (indices into `schema.tables`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ForeignKeyLink {
    pub table: usize,
    pub fk: usize,
    pub target: usize,
}

impl ForeignKeyLink {
    pub fn is_self_reference(&self) -> bool {
        self.table == self.target
    }
}

/// A bridge table whose two targets are both Regular.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BridgeLink {
    pub table: usize,
    pub first: usize,
    pub second: usize,
}

/// Classification of every table of a validated schema, plus the links the
/// mapping rules act on.
#[derive(Debug, Clone)]
pub struct SchemaAnalysis {
    pub classifications: Vec<TableClassification>,
    pub fk_links: Vec<ForeignKeyLink>,
    pub bridge_links: Vec<BridgeLink>,
}

impl SchemaAnalysis {
    pub fn new(schema: &RelationalSchema) -> Self {
        let classifications: Vec<_> = schema.tables.iter().map(|t| classify_table(schema, t)).collect();
        let regular = |i: usize| !classifications[i].is_bridge();
        let mut fk_links = Vec::new();
        let mut bridge_links = Vec::new();
        for (ti, table) in schema.tables.iter().enumerate() {
            let targets: Vec<Option<usize>> =
                table.foreign_keys.iter().map(|fk| schema.table_index(&fk.target_table)).collect();
            if regular(ti) {
                for (fi, target) in targets.iter().enumerate() {
                    if let Some(target) = *target {
                        if regular(target) {
                            fk_links.push(ForeignKeyLink { table: ti, fk: fi, target });
                        }
                    }
                }
            } else if let [Some(a), Some(b)] = targets.as_slice() {
                if regular(*a) && regular(*b) {
                    bridge_links.push(BridgeLink { table: ti, first: *a, second: *b });
                }
            }
        }
        SchemaAnalysis { classifications, fk_links, bridge_links }
    }

    pub fn is_regular(&self, table: usize) -> bool {
        !self.classifications[table].is_bridge()
    }

    pub fn bridge_count(&self) -> usize {
        self.classifications.iter().filter(|c| c.is_bridge()).count()
    }

    /// Distinct (subclass, superclass) table pairs contributed by non-self links.
    pub fn subclass_pairs(&self) -> BTreeSet<(usize, usize)> {
        self.fk_links.iter().filter(|l| !l.is_self_reference()).map(|l| (l.table, l.target)).collect()
    }
}
