//! Serialization of [`OntologyModel`]s.

mod rdfxml;

use std::fmt;

use crate::mapping::OntologyModel;

pub use rdfxml::{write_rdf_xml, OWL, RDF, RDFS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmitFormat {
    RdfXml,
    ModelJson,
}

impl EmitFormat {
    pub fn extension(self) -> &'static str {
        match self {
            EmitFormat::RdfXml => "owl",
            EmitFormat::ModelJson => "ontmodel.json",
        }
    }
}

pub fn emit(model: &OntologyModel, fmt: EmitFormat) -> Vec<u8> {
    match fmt {
        EmitFormat::RdfXml => write_rdf_xml(model).into_bytes(),
        EmitFormat::ModelJson => write_model_json(model).into_bytes(),
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn write_model_json(model: &OntologyModel) -> String {
    let value = serde_json::to_value(model).expect("model serializes");
    let mut out = serde_json::to_string_pretty(&value).expect("value serializes");
    out.push('\n');
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReadModelError {
    #[error("malformed JSON: {0}")]
    MalformedJson(String),
    #[error("{path}: {message}")]
    SchemaViolation { path: String, message: String },
}

impl ReadModelError {
    pub fn path(&self) -> Option<&str> {
        match self {
            ReadModelError::SchemaViolation { path, .. } => Some(path),
            ReadModelError::MalformedJson(_) => None,
        }
    }
}

/// Reads a model written by [`emit`] with [`EmitFormat::ModelJson`] and checks
/// every model invariant.
pub fn read_model_json(bytes: &[u8]) -> Result<OntologyModel, ReadModelError> {
    let mut de = serde_json::Deserializer::from_slice(bytes);
    let model: OntologyModel = match serde_path_to_error::deserialize(&mut de) {
        Ok(m) => m,
        Err(e) => {
            let path = e.path().to_string();
            let inner = e.into_inner();
            return Err(match inner.classify() {
                serde_json::error::Category::Data => {
                    ReadModelError::SchemaViolation { path, message: inner.to_string() }
                }
                _ => ReadModelError::MalformedJson(inner.to_string()),
            });
        }
    };
    de.end().map_err(|e| ReadModelError::MalformedJson(e.to_string()))?;
    if let Err(violations) = model.validate() {
        let first = &violations[0];
        return Err(ReadModelError::SchemaViolation { path: first.path.clone(), message: first.message.clone() });
    }
    Ok(model)
}

impl fmt::Display for EmitFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EmitFormat::RdfXml => "rdfxml",
            EmitFormat::ModelJson => "json",
        })
    }
}
