use std::fmt::Write;

use super::{ConformanceReport, Measure};

const RULE_NAMES: [&str; 9] = [
    "tables to classes",
    "bridge tables",
    "subclass hierarchy",
    "non-FK columns",
    "domains and ranges",
    "object property pairs",
    "functional characteristics",
    "tuples to individuals",
    "cardinalities",
];

pub fn rule_name(rule: u8) -> &'static str {
    RULE_NAMES.get(usize::from(rule).wrapping_sub(1)).copied().unwrap_or("unknown rule")
}

fn table(out: &mut String, rows: &[Vec<String>]) {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    for row in rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c + 1 == row.len() {
                line.push_str(cell);
            } else {
                let _ = write!(line, "{cell:<w$}  ", w = widths[c]);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
}

impl ConformanceReport {
    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut out = serde_json::to_string_pretty(&value).expect("value serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let s = &self.schema_metrics;
        let o = &self.ontology_metrics;
        let e = &self.expected_metrics;
        let edges = o.subclass_edges.map(|n| n.to_string()).unwrap_or_else(|| "-".into());
        let mut out = String::new();
        out.push_str("Schema\n");
        table(
            &mut out,
            &[
                vec!["  tables".into(), s.tables.to_string()],
                vec!["  columns".into(), s.columns.to_string()],
                vec!["  foreign keys".into(), s.foreign_keys.to_string()],
                vec!["  rows".into(), s.rows.to_string()],
                vec!["  bridge tables".into(), s.bridge_tables.to_string()],
            ],
        );
        out.push_str("\nOntology\n");
        table(
            &mut out,
            &[
                vec!["".into(), "observed".into(), "expected".into()],
                vec!["  classes".into(), o.classes.to_string(), e.classes.to_string()],
                vec!["  datatype properties".into(), o.datatype_properties.to_string(), e.datatype_properties.to_string()],
                vec!["  object properties".into(), o.object_properties.to_string(), e.object_properties.to_string()],
                vec!["  individuals".into(), o.individuals.to_string(), e.individuals.to_string()],
                vec!["  restrictions".into(), o.restrictions.to_string(), e.restrictions.to_string()],
                vec!["  subclass edges".into(), edges, e.subclass_edges.to_string()],
            ],
        );
        out.push_str("\nVerdicts\n");
        let mut rows = vec![vec![
            "  rule".into(),
            "".into(),
            "status".into(),
            "observed".into(),
            "expected".into(),
            "note".into(),
        ]];
        for v in &self.verdicts {
            let status = if v.is_conformant_with_delta() { "Conformant (delta)".to_string() } else { v.status.to_string() };
            rows.push(vec![
                format!("  {}", v.rule_id),
                rule_name(v.rule_id).into(),
                status,
                v.observed.map(|m: Measure| m.to_string()).unwrap_or_else(|| "-".into()),
                v.expected.to_string(),
                v.note.clone(),
            ]);
        }
        table(&mut out, &rows);
        out
    }
}
