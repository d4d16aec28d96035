//! Relational schema to OWL ontology mapping.

mod model;
mod naming;
mod rules;

use std::collections::HashSet;

pub use model::{
    check_base_iri, CardinalityRestriction, Characteristic, ColumnRef, ModelViolation, OntologyModel, OwlClass,
    OwlDatatypeProperty, OwlIndividual, OwlObjectProperty, PropertySource, TypedLiteral, XsdDatatype, XSD,
};
pub use naming::{is_ncname, local_name, NameAllocator};

use crate::relational::{RelationalSchema, SqlType, Tuple};
use rules::Mapper;

pub const DEFAULT_BASE_IRI: &str = "http://example.org/rdb2owl#";

/// How datatype properties are named.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Naming {
    /// `<Table>_<Column>`.
    #[default]
    Qualified,
    /// `<Column>`; on a clash the first table wins and later columns are dropped.
    Bare,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingOptions {
    pub base_iri: String,
    pub naming: Naming,
    pub emit_cardinalities: bool,
    pub emit_individuals: bool,
}

impl Default for MappingOptions {
    fn default() -> Self {
        MappingOptions {
            base_iri: DEFAULT_BASE_IRI.to_string(),
            naming: Naming::Qualified,
            emit_cardinalities: true,
            emit_individuals: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MappingError {
    #[error("{0}")]
    InvalidBaseIri(String),
    #[error("tuple refers to unknown table `{0}`")]
    UnknownTable(String),
    #[error("tuple for `{table}` has unknown column `{column}`")]
    UnknownColumn { table: String, column: String },
}

/// A mapped model plus the warnings raised while building it.
#[derive(Debug, Clone, PartialEq)]
pub struct Mapping {
    pub model: OntologyModel,
    pub warnings: Vec<String>,
}

pub fn sql_type_to_xsd(t: SqlType) -> XsdDatatype {
    match t {
        SqlType::Int => XsdDatatype::Int,
        SqlType::BigInt => XsdDatatype::Long,
        SqlType::SmallInt => XsdDatatype::Short,
        SqlType::Decimal { .. } => XsdDatatype::Decimal,
        SqlType::Float | SqlType::Double => XsdDatatype::Double,
        SqlType::Varchar(_) | SqlType::Char(_) | SqlType::Text => XsdDatatype::String,
        SqlType::Date => XsdDatatype::Date,
        SqlType::Timestamp => XsdDatatype::DateTime,
        SqlType::Boolean => XsdDatatype::Boolean,
    }
}

fn check_tuples(schema: &RelationalSchema, tuples: &[Tuple]) -> Result<(), MappingError> {
    for tuple in tuples {
        let table = schema.table(&tuple.table).ok_or_else(|| MappingError::UnknownTable(tuple.table.clone()))?;
        if let Some(column) = tuple.values.keys().find(|c| table.column(c).is_none()) {
            return Err(MappingError::UnknownColumn { table: table.name.clone(), column: column.clone() });
        }
    }
    Ok(())
}

/// Maps a validated schema and its rows to an ontology.
pub fn map_schema(schema: &RelationalSchema, tuples: &[Tuple], opts: &MappingOptions) -> Result<Mapping, MappingError> {
    check_base_iri(&opts.base_iri).map_err(MappingError::InvalidBaseIri)?;
    check_tuples(schema, tuples)?;
    let mut m = Mapper::new(schema, opts);
    let mut classes = m.tables_to_classes();
    m.build_hierarchy(&mut classes);
    let datatype_properties = m.columns_to_datatype_properties();
    let object_properties = m.fks_to_object_properties();
    let restrictions = if opts.emit_cardinalities { m.cardinalities() } else { Vec::new() };
    let mut individuals = if opts.emit_individuals { m.tuples_to_individuals(tuples) } else { Vec::new() };
    individuals.sort_by(|a, b| a.iri.cmp(&b.iri));
    let model = OntologyModel {
        base_iri: opts.base_iri.clone(),
        classes,
        datatype_properties,
        object_properties,
        individuals,
        restrictions,
    };
    Ok(Mapping { model, warnings: m.warnings })
}

pub fn map_tables_to_classes(schema: &RelationalSchema, opts: &MappingOptions) -> Vec<OwlClass> {
    Mapper::new(schema, opts).tables_to_classes()
}

/// Fills `superclasses` of classes built by [`map_tables_to_classes`] with the
/// same options. Returns the warnings (multiple inheritance, cycles).
pub fn build_hierarchy(schema: &RelationalSchema, classes: &mut [OwlClass], opts: &MappingOptions) -> Vec<String> {
    let mut m = Mapper::new(schema, opts);
    m.tables_to_classes();
    m.build_hierarchy(classes);
    m.warnings
}

pub fn map_columns_to_datatype_properties(schema: &RelationalSchema, opts: &MappingOptions) -> Vec<OwlDatatypeProperty> {
    let mut m = Mapper::new(schema, opts);
    m.tables_to_classes();
    m.columns_to_datatype_properties()
}

pub fn map_fks_to_object_properties(schema: &RelationalSchema, opts: &MappingOptions) -> Vec<OwlObjectProperty> {
    let mut m = Mapper::new(schema, opts);
    m.tables_to_classes();
    m.columns_to_datatype_properties();
    m.fks_to_object_properties()
}

/// Empty when `opts.emit_cardinalities` is false.
pub fn map_cardinalities(schema: &RelationalSchema, opts: &MappingOptions) -> Vec<CardinalityRestriction> {
    if !opts.emit_cardinalities {
        return Vec::new();
    }
    let mut m = Mapper::new(schema, opts);
    m.tables_to_classes();
    m.columns_to_datatype_properties();
    m.fks_to_object_properties();
    m.cardinalities()
}

/// Replaces the individuals of `model` (built from `schema` with `opts`) with
/// ones mapped from `tuples`.
pub fn map_tuples_to_individuals(
    schema: &RelationalSchema,
    tuples: &[Tuple],
    model: &mut OntologyModel,
    opts: &MappingOptions,
) -> Result<Vec<String>, MappingError> {
    check_tuples(schema, tuples)?;
    if !opts.emit_individuals {
        model.individuals.clear();
        return Ok(Vec::new());
    }
    let mut m = Mapper::new(schema, opts);
    m.tables_to_classes();
    m.columns_to_datatype_properties();
    m.fks_to_object_properties();
    let mut individuals = m.tuples_to_individuals(tuples);
    individuals.sort_by(|a, b| a.iri.cmp(&b.iri));
    model.individuals = individuals;
    Ok(m.warnings)
}

/// Distinct (subclass, superclass) edges in the model.
pub fn subclass_edge_count(model: &OntologyModel) -> usize {
    model.classes.iter().map(|c| c.superclasses.len()).sum()
}

/// IRIs of classes that appear in a superclass cycle.
pub fn classes_in_cycles(model: &OntologyModel) -> HashSet<String> {
    model
        .classes
        .iter()
        .filter(|c| c.superclasses.iter().any(|s| model.ancestors_or_self(s).contains(&c.iri)))
        .map(|c| c.iri.clone())
        .collect()
}
