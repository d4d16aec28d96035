use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{expected_metrics, schema_metrics, OntologyMetrics};
use crate::fixtures::municipality;

/// Counts recorded for a third-party plug-in run over the Municipality schema.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PluginFixture {
    pub name: String,
    pub ontology_metrics: OntologyMetrics,
}

impl PluginFixture {
    pub fn data_master() -> Self {
        PluginFixture {
            name: "DataMaster".into(),
            ontology_metrics: OntologyMetrics {
                classes: 23,
                datatype_properties: 112,
                object_properties: 25,
                individuals: 10,
                restrictions: 0,
                subclass_edges: None,
            },
        }
    }

    pub fn onto_base() -> Self {
        PluginFixture {
            name: "OntoBase".into(),
            ontology_metrics: OntologyMetrics {
                classes: 20,
                datatype_properties: 62,
                object_properties: 68,
                individuals: 10,
                restrictions: 0,
                subclass_edges: None,
            },
        }
    }

    pub fn all() -> [PluginFixture; 2] {
        [Self::data_master(), Self::onto_base()]
    }

    pub fn by_name(name: &str) -> Option<PluginFixture> {
        Self::all().into_iter().find(|p| p.name.eq_ignore_ascii_case(name))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub component: String,
    pub database: usize,
    pub data_master: usize,
    pub onto_base: usize,
    pub rdb2owl: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub rows: Vec<ComparisonRow>,
}

const HEADER: [&str; 5] = ["component", "database", "DataMaster", "OntoBase", "rdb2owl"];

/// Database counts of the Municipality schema next to the ontology counts of
/// both plug-ins and of this tool's rules.
pub fn paper_comparison() -> ComparisonTable {
    let (schema, rows) = municipality();
    let db = schema_metrics(&schema, &rows);
    let ours = expected_metrics(&schema, &rows);
    let dm = PluginFixture::data_master().ontology_metrics;
    let ob = PluginFixture::onto_base().ontology_metrics;
    let row = |component: &str, database, data_master, onto_base, rdb2owl| ComparisonRow {
        component: component.into(),
        database,
        data_master,
        onto_base,
        rdb2owl,
    };
    ComparisonTable {
        rows: vec![
            row("tables / classes", db.tables, dm.classes, ob.classes, ours.classes),
            row("columns / datatype properties", db.columns, dm.datatype_properties, ob.datatype_properties, ours.datatype_properties),
            row("foreign keys / object properties", db.foreign_keys, dm.object_properties, ob.object_properties, ours.object_properties),
            row("rows / individuals", db.rows, dm.individuals, ob.individuals, ours.individuals),
        ],
    }
}

impl ComparisonTable {
    pub fn row(&self, component_prefix: &str) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.component.starts_with(component_prefix))
    }

    pub fn to_text(&self) -> String {
        let mut cells: Vec<[String; 5]> = vec![HEADER.map(String::from)];
        for r in &self.rows {
            cells.push([
                r.component.clone(),
                r.database.to_string(),
                r.data_master.to_string(),
                r.onto_base.to_string(),
                r.rdb2owl.to_string(),
            ]);
        }
        let widths: Vec<usize> = (0..5).map(|c| cells.iter().map(|r| r[c].len()).max().unwrap_or(0)).collect();
        let mut out = String::new();
        for r in &cells {
            let _ = write!(out, "{:<w$}", r[0], w = widths[0]);
            for c in 1..5 {
                let _ = write!(out, "  {:>w$}", r[c], w = widths[c]);
            }
            out.push('\n');
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = HEADER.join(",");
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{},{}", r.component, r.database, r.data_master, r.onto_base, r.rdb2owl);
        }
        out
    }
}
