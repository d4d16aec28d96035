use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum XsdDatatype {
    #[serde(rename = "xsd:int")]
    Int,
    #[serde(rename = "xsd:long")]
    Long,
    #[serde(rename = "xsd:short")]
    Short,
    #[serde(rename = "xsd:decimal")]
    Decimal,
    #[serde(rename = "xsd:double")]
    Double,
    #[serde(rename = "xsd:string")]
    String,
    #[serde(rename = "xsd:date")]
    Date,
    #[serde(rename = "xsd:dateTime")]
    DateTime,
    #[serde(rename = "xsd:boolean")]
    Boolean,
}

impl XsdDatatype {
    pub fn local_name(self) -> &'static str {
        match self {
            XsdDatatype::Int => "int",
            XsdDatatype::Long => "long",
            XsdDatatype::Short => "short",
            XsdDatatype::Decimal => "decimal",
            XsdDatatype::Double => "double",
            XsdDatatype::String => "string",
            XsdDatatype::Date => "date",
            XsdDatatype::DateTime => "dateTime",
            XsdDatatype::Boolean => "boolean",
        }
    }

    pub fn iri(self) -> String {
        format!("{XSD}{}", self.local_name())
    }
}

impl fmt::Display for XsdDatatype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "xsd:{}", self.local_name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OwlClass {
    pub iri: String,
    pub label: String,
    /// Empty means a direct child of `owl:Thing`.
    pub superclasses: BTreeSet<String>,
    pub source_table: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColumnRef {
    pub table: String,
    pub column: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OwlDatatypeProperty {
    pub iri: String,
    pub label: String,
    pub domain: String,
    pub range: XsdDatatype,
    pub source: ColumnRef,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Characteristic {
    Functional,
    InverseFunctional,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PropertySource {
    /// The `index`-th foreign key of `table`.
    ForeignKey { table: String, index: usize },
    Bridge { table: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OwlObjectProperty {
    pub iri: String,
    pub label: String,
    pub domain: String,
    pub range: String,
    pub characteristic: Characteristic,
    pub inverse_of: Option<String>,
    pub source: PropertySource,
}

impl OwlObjectProperty {
    /// Forward direction of a foreign key (the functional side).
    pub fn is_forward_fk(&self) -> bool {
        matches!(self.source, PropertySource::ForeignKey { .. }) && self.characteristic == Characteristic::Functional
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypedLiteral {
    pub lexical: String,
    pub datatype: XsdDatatype,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OwlIndividual {
    pub iri: String,
    pub class_iri: String,
    pub datatype_assertions: BTreeMap<String, TypedLiteral>,
    pub object_assertions: BTreeMap<String, BTreeSet<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CardinalityRestriction {
    pub on_class: String,
    pub on_property: String,
    #[serde(rename = "min")]
    pub min_cardinality: u32,
    #[serde(rename = "max")]
    pub max_cardinality: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OntologyModel {
    pub base_iri: String,
    pub classes: Vec<OwlClass>,
    pub datatype_properties: Vec<OwlDatatypeProperty>,
    pub object_properties: Vec<OwlObjectProperty>,
    pub individuals: Vec<OwlIndividual>,
    pub restrictions: Vec<CardinalityRestriction>,
}

/// A broken model invariant, located by a JSON-style path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelViolation {
    pub path: String,
    pub message: String,
}

impl fmt::Display for ModelViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// Base IRIs must be absolute and end in `#` or `/`.
pub fn check_base_iri(iri: &str) -> Result<(), String> {
    if !(iri.ends_with('#') || iri.ends_with('/')) {
        return Err(format!("base IRI `{iri}` must end in `#` or `/`"));
    }
    if iri.chars().any(|c| c.is_whitespace() || c.is_control() || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '\\' | '^' | '`')) {
        return Err(format!("base IRI `{iri}` contains characters not allowed in an IRI"));
    }
    match url::Url::parse(iri) {
        Ok(u) if !u.cannot_be_a_base() || u.scheme() == "urn" => Ok(()),
        Ok(_) => Err(format!("base IRI `{iri}` cannot serve as a base")),
        Err(e) => Err(format!("base IRI `{iri}` is not absolute: {e}")),
    }
}

impl OntologyModel {
    pub fn new(base_iri: impl Into<String>) -> Self {
        OntologyModel { base_iri: base_iri.into(), ..Default::default() }
    }

    pub fn class(&self, iri: &str) -> Option<&OwlClass> {
        self.classes.iter().find(|c| c.iri == iri)
    }

    pub fn object_property(&self, iri: &str) -> Option<&OwlObjectProperty> {
        self.object_properties.iter().find(|p| p.iri == iri)
    }

    pub fn datatype_property(&self, iri: &str) -> Option<&OwlDatatypeProperty> {
        self.datatype_properties.iter().find(|p| p.iri == iri)
    }

    pub fn individual(&self, iri: &str) -> Option<&OwlIndividual> {
        self.individuals.iter().find(|i| i.iri == iri)
    }

    /// `class` itself and every class reachable through `superclasses`.
    pub fn ancestors_or_self(&self, class: &str) -> BTreeSet<String> {
        let by_iri: HashMap<&str, &OwlClass> = self.classes.iter().map(|c| (c.iri.as_str(), c)).collect();
        let mut seen = BTreeSet::new();
        let mut stack = vec![class.to_string()];
        while let Some(c) = stack.pop() {
            if !seen.insert(c.clone()) {
                continue;
            }
            if let Some(cls) = by_iri.get(c.as_str()) {
                stack.extend(cls.superclasses.iter().cloned());
            }
        }
        seen
    }

    /// Checks every model invariant; returns all violations.
    pub fn validate(&self) -> Result<(), Vec<ModelViolation>> {
        let mut v = Vec::new();
        let mut err = |path: String, message: String| v.push(ModelViolation { path, message });

        if let Err(m) = check_base_iri(&self.base_iri) {
            err("base_iri".into(), m);
        }

        let mut ids: HashMap<&str, String> = HashMap::new();
        let entries = self
            .classes
            .iter()
            .enumerate()
            .map(|(i, c)| (c.iri.as_str(), format!("classes[{i}].iri")))
            .chain(self.datatype_properties.iter().enumerate().map(|(i, p)| (p.iri.as_str(), format!("datatype_properties[{i}].iri"))))
            .chain(self.object_properties.iter().enumerate().map(|(i, p)| (p.iri.as_str(), format!("object_properties[{i}].iri"))))
            .chain(self.individuals.iter().enumerate().map(|(i, p)| (p.iri.as_str(), format!("individuals[{i}].iri"))));
        for (iri, path) in entries {
            if iri.is_empty() {
                err(path, "IRI is empty".into());
            } else if let Some(first) = ids.get(iri) {
                err(path, format!("IRI `{iri}` already used at {first}"));
            } else {
                ids.insert(iri, path);
            }
        }

        let classes: HashMap<&str, &OwlClass> = self.classes.iter().map(|c| (c.iri.as_str(), c)).collect();
        let dt: HashMap<&str, &OwlDatatypeProperty> =
            self.datatype_properties.iter().map(|p| (p.iri.as_str(), p)).collect();
        let obj: HashMap<&str, &OwlObjectProperty> =
            self.object_properties.iter().map(|p| (p.iri.as_str(), p)).collect();

        for (i, c) in self.classes.iter().enumerate() {
            for s in &c.superclasses {
                if s == &c.iri {
                    err(format!("classes[{i}].superclasses"), "class lists itself as superclass".into());
                } else if !classes.contains_key(s.as_str()) {
                    err(format!("classes[{i}].superclasses"), format!("unknown class `{s}`"));
                }
            }
        }
        for (i, p) in self.datatype_properties.iter().enumerate() {
            if !classes.contains_key(p.domain.as_str()) {
                err(format!("datatype_properties[{i}].domain"), format!("unknown class `{}`", p.domain));
            }
        }
        for (i, p) in self.object_properties.iter().enumerate() {
            if !classes.contains_key(p.domain.as_str()) {
                err(format!("object_properties[{i}].domain"), format!("unknown class `{}`", p.domain));
            }
            if !classes.contains_key(p.range.as_str()) {
                err(format!("object_properties[{i}].range"), format!("unknown class `{}`", p.range));
            }
            if let Some(inv) = &p.inverse_of {
                match obj.get(inv.as_str()) {
                    Some(q) if q.inverse_of.as_deref() == Some(p.iri.as_str()) => {}
                    Some(_) => err(format!("object_properties[{i}].inverse_of"), format!("`{inv}` does not point back")),
                    None => err(format!("object_properties[{i}].inverse_of"), format!("unknown property `{inv}`")),
                }
            }
        }
        for (i, ind) in self.individuals.iter().enumerate() {
            if !classes.contains_key(ind.class_iri.as_str()) {
                err(format!("individuals[{i}].class_iri"), format!("unknown class `{}`", ind.class_iri));
                continue;
            }
            let ancestors = self.ancestors_or_self(&ind.class_iri);
            for prop in ind.datatype_assertions.keys() {
                match dt.get(prop.as_str()) {
                    Some(p) if ancestors.contains(&p.domain) => {}
                    Some(_) => err(
                        format!("individuals[{i}].datatype_assertions.{prop}"),
                        "property domain is not the individual's class or an ancestor".into(),
                    ),
                    None => err(format!("individuals[{i}].datatype_assertions.{prop}"), "unknown datatype property".into()),
                }
            }
            for prop in ind.object_assertions.keys() {
                match obj.get(prop.as_str()) {
                    Some(p) if ancestors.contains(&p.domain) => {}
                    Some(_) => err(
                        format!("individuals[{i}].object_assertions.{prop}"),
                        "property domain is not the individual's class or an ancestor".into(),
                    ),
                    None => err(format!("individuals[{i}].object_assertions.{prop}"), "unknown object property".into()),
                }
            }
        }
        for (i, r) in self.restrictions.iter().enumerate() {
            if !classes.contains_key(r.on_class.as_str()) {
                err(format!("restrictions[{i}].on_class"), format!("unknown class `{}`", r.on_class));
            }
            if !dt.contains_key(r.on_property.as_str()) && !obj.contains_key(r.on_property.as_str()) {
                err(format!("restrictions[{i}].on_property"), format!("unknown property `{}`", r.on_property));
            }
            if r.min_cardinality > r.max_cardinality || r.min_cardinality > 1 {
                err(format!("restrictions[{i}].min"), format!("min {} must be 0 or 1 and at most max", r.min_cardinality));
            }
            if r.max_cardinality != 1 {
                err(format!("restrictions[{i}].max"), format!("max {} must be 1", r.max_cardinality));
            }
        }

        if v.is_empty() {
            Ok(())
        } else {
            Err(v)
        }
    }
}
