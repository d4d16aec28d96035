//! Count-based conformance auditing of ontologies against the mapping rules.

mod plugins;
mod report;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::mapping::{subclass_edge_count, OntologyModel};
use crate::relational::{RelationalSchema, SchemaAnalysis, Tuple};

pub use plugins::{paper_comparison, ComparisonRow, ComparisonTable, PluginFixture};
pub use report::rule_name;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemaMetrics {
    pub tables: usize,
    pub columns: usize,
    pub foreign_keys: usize,
    pub rows: usize,
    pub bridge_tables: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OntologyMetrics {
    pub classes: usize,
    pub datatype_properties: usize,
    pub object_properties: usize,
    pub individuals: usize,
    pub restrictions: usize,
    /// None when the ontology carries no hierarchy information.
    pub subclass_edges: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedMetrics {
    pub classes: usize,
    pub datatype_properties: usize,
    pub object_properties: usize,
    pub individuals: usize,
    pub restrictions: usize,
    pub subclass_edges: usize,
}

impl From<ExpectedMetrics> for OntologyMetrics {
    fn from(e: ExpectedMetrics) -> Self {
        OntologyMetrics {
            classes: e.classes,
            datatype_properties: e.datatype_properties,
            object_properties: e.object_properties,
            individuals: e.individuals,
            restrictions: e.restrictions,
            subclass_edges: Some(e.subclass_edges),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RuleStatus {
    Conformant,
    Deviation,
    NotAssessable,
}

impl fmt::Display for RuleStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleStatus::Conformant => "Conformant",
            RuleStatus::Deviation => "Deviation",
            RuleStatus::NotAssessable => "NotAssessable",
        })
    }
}

/// A count, or a presence flag for rules judged by presence only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Measure {
    Count(usize),
    Flag(bool),
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Measure::Count(n) => write!(f, "{n}"),
            Measure::Flag(b) => write!(f, "{}", if *b { "present" } else { "absent" }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleVerdict {
    pub rule_id: u8,
    pub status: RuleStatus,
    /// None when the observed ontology does not carry the information.
    pub observed: Option<Measure>,
    pub expected: Measure,
    pub note: String,
}

impl RuleVerdict {
    /// Conformant, but with counts that differ from the expected ones.
    pub fn is_conformant_with_delta(&self) -> bool {
        self.status == RuleStatus::Conformant && self.observed != Some(self.expected)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConformanceReport {
    pub schema_metrics: SchemaMetrics,
    pub ontology_metrics: OntologyMetrics,
    pub expected_metrics: ExpectedMetrics,
    pub verdicts: Vec<RuleVerdict>,
}

impl ConformanceReport {
    pub fn verdict(&self, rule: u8) -> Option<&RuleVerdict> {
        self.verdicts.iter().find(|v| v.rule_id == rule)
    }

    pub fn all_conformant(&self) -> bool {
        self.verdicts.iter().all(|v| v.status == RuleStatus::Conformant)
    }

    pub fn deviations(&self) -> Vec<u8> {
        self.verdicts.iter().filter(|v| v.status == RuleStatus::Deviation).map(|v| v.rule_id).collect()
    }
}

pub fn schema_metrics(schema: &RelationalSchema, tuples: &[Tuple]) -> SchemaMetrics {
    SchemaMetrics {
        tables: schema.tables.len(),
        columns: schema.column_count(),
        foreign_keys: schema.foreign_key_count(),
        rows: tuples.len(),
        bridge_tables: SchemaAnalysis::new(schema).bridge_count(),
    }
}

pub fn ontology_metrics(model: &OntologyModel) -> OntologyMetrics {
    OntologyMetrics {
        classes: model.classes.len(),
        datatype_properties: model.datatype_properties.len(),
        object_properties: model.object_properties.len(),
        individuals: model.individuals.len(),
        restrictions: model.restrictions.len(),
        subclass_edges: Some(subclass_edge_count(model)),
    }
}

/// Counts the mapping rules predict for `schema` under default options.
pub fn expected_metrics(schema: &RelationalSchema, tuples: &[Tuple]) -> ExpectedMetrics {
    let analysis = SchemaAnalysis::new(schema);
    let mut datatype_properties = 0;
    for (ti, table) in schema.tables.iter().enumerate() {
        if analysis.is_regular(ti) {
            datatype_properties += table.columns.iter().filter(|c| !table.is_foreign_key_member(&c.name)).count();
        }
    }
    let individuals = tuples
        .iter()
        .filter(|t| schema.table_index(&t.table).is_some_and(|ti| analysis.is_regular(ti)))
        .count();
    let fk_links = analysis.fk_links.len();
    ExpectedMetrics {
        classes: schema.tables.len() - analysis.bridge_count(),
        datatype_properties,
        object_properties: 2 * (fk_links + analysis.bridge_links.len()),
        individuals,
        restrictions: datatype_properties + fk_links,
        subclass_edges: analysis.subclass_pairs().len(),
    }
}

fn delta(observed: usize, expected: usize) -> String {
    let d = observed as i64 - expected as i64;
    format!("{d:+}")
}

fn count_verdict(rule: u8, observed: usize, expected: usize, what: &str) -> RuleVerdict {
    let (status, note) = if observed == expected {
        (RuleStatus::Conformant, String::new())
    } else {
        (RuleStatus::Deviation, format!("{} {what} ({})", observed, delta(observed, expected)))
    };
    RuleVerdict { rule_id: rule, status, observed: Some(Measure::Count(observed)), expected: Measure::Count(expected), note }
}

fn presence_verdict(rule: u8, observed: usize, expected: usize, what: &str) -> RuleVerdict {
    let (o, e) = (observed > 0, expected > 0);
    let (status, note) = match (o, e) {
        _ if o == e => (RuleStatus::Conformant, String::new()),
        (false, true) => (RuleStatus::Deviation, format!("no {what}")),
        _ => (RuleStatus::Deviation, format!("{what} present but none expected")),
    };
    RuleVerdict { rule_id: rule, status, observed: Some(Measure::Flag(o)), expected: Measure::Flag(e), note }
}

/// Scores `observed` against what the rules predict for `schema`.
pub fn audit(schema: &RelationalSchema, tuples: &[Tuple], observed: &OntologyMetrics) -> ConformanceReport {
    let sm = schema_metrics(schema, tuples);
    let em = expected_metrics(schema, tuples);
    let analysis = SchemaAnalysis::new(schema);
    let mut v = Vec::with_capacity(9);

    v.push(count_verdict(1, observed.classes, em.classes, "classes"));

    let bridges = sm.bridge_tables;
    let bridges_as_classes = bridges > 0 && observed.classes >= em.classes + bridges;
    v.push(RuleVerdict {
        rule_id: 2,
        status: if bridges_as_classes { RuleStatus::Deviation } else { RuleStatus::Conformant },
        observed: Some(Measure::Flag(bridges_as_classes)),
        expected: Measure::Flag(false),
        note: match (bridges, bridges_as_classes) {
            (0, _) => "no bridge tables".into(),
            (n, true) => format!("{n} bridge table(s) appear to be mapped to classes"),
            _ => String::new(),
        },
    });

    v.push(match observed.subclass_edges {
        None => RuleVerdict {
            rule_id: 3,
            status: RuleStatus::NotAssessable,
            observed: None,
            expected: Measure::Count(em.subclass_edges),
            note: "no hierarchy information".into(),
        },
        Some(n) => count_verdict(3, n, em.subclass_edges, "subclass edges"),
    });

    let regular_columns: usize = schema
        .tables
        .iter()
        .enumerate()
        .filter(|(ti, _)| analysis.is_regular(*ti))
        .map(|(_, t)| t.columns.len())
        .sum();
    let fk_members = regular_columns - em.datatype_properties;
    let dt = observed.datatype_properties;
    let (status, note) = if dt == em.datatype_properties {
        (RuleStatus::Conformant, String::new())
    } else if fk_members > 0 && dt < regular_columns {
        (RuleStatus::Conformant, format!("foreign key columns excluded ({})", delta(dt, em.datatype_properties)))
    } else {
        (RuleStatus::Deviation, format!("foreign key columns mapped to datatype properties ({})", delta(dt, em.datatype_properties)))
    };
    v.push(RuleVerdict {
        rule_id: 4,
        status,
        observed: Some(Measure::Count(dt)),
        expected: Measure::Count(em.datatype_properties),
        note,
    });

    v.push(presence_verdict(5, dt, em.datatype_properties, "datatype properties"));

    let obj = observed.object_properties;
    let links = em.object_properties / 2;
    let (status, note) = if obj == em.object_properties {
        (RuleStatus::Conformant, String::new())
    } else if obj > em.object_properties {
        (RuleStatus::Conformant, format!("inverses present ({})", delta(obj, em.object_properties)))
    } else if obj >= links {
        (RuleStatus::Deviation, format!("missing inverses ({})", delta(obj, em.object_properties)))
    } else {
        (RuleStatus::Deviation, format!("missing object properties ({})", delta(obj, em.object_properties)))
    };
    v.push(RuleVerdict {
        rule_id: 6,
        status,
        observed: Some(Measure::Count(obj)),
        expected: Measure::Count(em.object_properties),
        note,
    });

    v.push(presence_verdict(7, obj, em.object_properties, "object properties"));

    v.push(count_verdict(8, observed.individuals, em.individuals, "individuals"));

    let mut r9 = count_verdict(9, observed.restrictions, em.restrictions, "restrictions");
    if observed.restrictions == 0 && em.restrictions > 0 {
        r9.note = "no cardinalities".into();
    }
    v.push(r9);

    ConformanceReport { schema_metrics: sm, ontology_metrics: *observed, expected_metrics: em, verdicts: v }
}
