use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::model::*;
use super::naming::{local_name, NameAllocator};
use super::{sql_type_to_xsd, MappingOptions, Naming};
use crate::relational::{RelationalSchema, SchemaAnalysis, Tuple};

/// Shared state for one mapping run. Rule steps must run in order: classes,
/// hierarchy, datatype properties, object properties, cardinalities,
/// individuals. Names are allocated in that order so results do not depend on
/// which subset of steps a caller runs.
pub(crate) struct Mapper<'a> {
    schema: &'a RelationalSchema,
    analysis: SchemaAnalysis,
    opts: &'a MappingOptions,
    names: NameAllocator,
    pub warnings: Vec<String>,
    /// Class IRI per table index (None for bridges).
    class_iri: Vec<Option<String>>,
    /// Class local name per table index.
    class_local: Vec<Option<String>>,
    /// Datatype property IRI per (table, column index).
    dt_iri: HashMap<(usize, usize), String>,
    /// Forward object property IRI per (table, fk index).
    fk_iri: HashMap<(usize, usize), String>,
    /// Forward property IRI per bridge table.
    bridge_iri: HashMap<usize, String>,
}

impl<'a> Mapper<'a> {
    pub fn new(schema: &'a RelationalSchema, opts: &'a MappingOptions) -> Self {
        let n = schema.tables.len();
        Mapper {
            schema,
            analysis: SchemaAnalysis::new(schema),
            opts,
            names: NameAllocator::default(),
            warnings: Vec::new(),
            class_iri: vec![None; n],
            class_local: vec![None; n],
            dt_iri: HashMap::new(),
            fk_iri: HashMap::new(),
            bridge_iri: HashMap::new(),
        }
    }

    fn iri(&self, local: &str) -> String {
        format!("{}{local}", self.opts.base_iri)
    }

    fn claim(&mut self, desired: &str, what: &str) -> String {
        let (name, renamed) = self.names.allocate(desired);
        if renamed {
            self.warnings.push(format!("{what} name `{desired}` already in use; renamed to `{name}`"));
        }
        name
    }

    fn class_of(&self, table: usize) -> &str {
        self.class_iri[table].as_deref().expect("regular table has a class")
    }

    /// One class per Regular table; bridges get none.
    pub fn tables_to_classes(&mut self) -> Vec<OwlClass> {
        let mut classes = Vec::new();
        for (ti, table) in self.schema.tables.iter().enumerate() {
            if !self.analysis.is_regular(ti) {
                continue;
            }
            let local = self.claim(&local_name(&table.name), "class");
            let iri = self.iri(&local);
            self.class_local[ti] = Some(local);
            self.class_iri[ti] = Some(iri.clone());
            classes.push(OwlClass {
                iri,
                label: table.name.clone(),
                superclasses: BTreeSet::new(),
                source_table: table.name.clone(),
            });
        }
        classes
    }

    /// A table with a foreign key becomes a subclass of the referenced table's class.
    pub fn build_hierarchy(&mut self, classes: &mut [OwlClass]) {
        let index: HashMap<String, usize> = classes.iter().enumerate().map(|(i, c)| (c.iri.clone(), i)).collect();
        for (sub, sup) in self.analysis.subclass_pairs() {
            let sub_iri = self.class_of(sub).to_string();
            let sup_iri = self.class_of(sup).to_string();
            if let Some(&i) = index.get(&sub_iri) {
                classes[i].superclasses.insert(sup_iri);
            }
        }
        for c in classes.iter() {
            if c.superclasses.len() > 1 {
                self.warnings.push(format!(
                    "class `{}` has {} superclasses (multiple inheritance from foreign keys)",
                    c.label,
                    c.superclasses.len()
                ));
            }
        }
        for cycle in subclass_cycles(classes) {
            self.warnings.push(format!("subclass cycle among classes: {}", cycle.join(", ")));
        }
    }

    /// Every non-foreign-key column of a Regular table becomes a datatype property.
    pub fn columns_to_datatype_properties(&mut self) -> Vec<OwlDatatypeProperty> {
        let mut props = Vec::new();
        let mut bare_seen: HashMap<String, String> = HashMap::new();
        for (ti, table) in self.schema.tables.iter().enumerate() {
            if !self.analysis.is_regular(ti) {
                continue;
            }
            let class_local = self.class_local[ti].clone().expect("class");
            for (ci, column) in table.columns.iter().enumerate() {
                if table.is_foreign_key_member(&column.name) {
                    continue;
                }
                let desired = match self.opts.naming {
                    Naming::Qualified => format!("{class_local}_{}", local_name(&column.name)),
                    Naming::Bare => {
                        let bare = local_name(&column.name);
                        if let Some(first) = bare_seen.get(&bare) {
                            self.warnings.push(format!(
                                "bare property name `{bare}` for `{}.{}` already taken by `{first}`; column dropped",
                                table.name, column.name
                            ));
                            continue;
                        }
                        bare_seen.insert(bare.clone(), format!("{}.{}", table.name, column.name));
                        bare
                    }
                };
                let local = self.claim(&desired, "datatype property");
                let iri = self.iri(&local);
                self.dt_iri.insert((ti, ci), iri.clone());
                props.push(OwlDatatypeProperty {
                    iri,
                    label: column.name.clone(),
                    domain: self.class_of(ti).to_string(),
                    range: sql_type_to_xsd(column.sql_type),
                    source: ColumnRef { table: table.name.clone(), column: column.name.clone() },
                });
            }
        }
        props
    }

    /// A forward/inverse pair per foreign key link, and per bridge table.
    pub fn fks_to_object_properties(&mut self) -> Vec<OwlObjectProperty> {
        let mut props = Vec::new();
        for link in self.analysis.fk_links.clone() {
            let table = &self.schema.tables[link.table];
            let fk = &table.foreign_keys[link.fk];
            let stem = format!(
                "{}_{}_ref",
                self.class_local[link.table].as_deref().expect("class"),
                local_name(&fk.source_columns[0])
            );
            let fwd_local = self.claim(&stem, "object property");
            let inv_local = self.claim(&format!("{stem}_inv"), "object property");
            let (fwd, inv) = (self.iri(&fwd_local), self.iri(&inv_local));
            let label = fk.source_columns.join("_");
            let source = PropertySource::ForeignKey { table: table.name.clone(), index: link.fk };
            let (domain, range) = (self.class_of(link.table).to_string(), self.class_of(link.target).to_string());
            self.fk_iri.insert((link.table, link.fk), fwd.clone());
            props.push(OwlObjectProperty {
                iri: fwd.clone(),
                label: label.clone(),
                domain: domain.clone(),
                range: range.clone(),
                characteristic: Characteristic::Functional,
                inverse_of: Some(inv.clone()),
                source: source.clone(),
            });
            props.push(OwlObjectProperty {
                iri: inv,
                label: format!("inverse of {label}"),
                domain: range,
                range: domain,
                characteristic: Characteristic::InverseFunctional,
                inverse_of: Some(fwd),
                source,
            });
        }
        for link in self.analysis.bridge_links.clone() {
            let table = &self.schema.tables[link.table];
            let stem = format!(
                "{}_{}_{}",
                self.class_local[link.first].as_deref().expect("class"),
                local_name(&table.name),
                self.class_local[link.second].as_deref().expect("class"),
            );
            let fwd_local = self.claim(&stem, "object property");
            let inv_local = self.claim(&format!("{stem}_inv"), "object property");
            let (fwd, inv) = (self.iri(&fwd_local), self.iri(&inv_local));
            let source = PropertySource::Bridge { table: table.name.clone() };
            let (a, b) = (self.class_of(link.first).to_string(), self.class_of(link.second).to_string());
            self.bridge_iri.insert(link.table, fwd.clone());
            props.push(OwlObjectProperty {
                iri: fwd.clone(),
                label: table.name.clone(),
                domain: a.clone(),
                range: b.clone(),
                characteristic: Characteristic::None,
                inverse_of: Some(inv.clone()),
                source: source.clone(),
            });
            props.push(OwlObjectProperty {
                iri: inv,
                label: format!("inverse of {}", table.name),
                domain: b,
                range: a,
                characteristic: Characteristic::None,
                inverse_of: Some(fwd),
                source,
            });
        }
        props
    }

    /// NOT NULL gives min 1, nullable min 0; max is always 1.
    pub fn cardinalities(&self) -> Vec<CardinalityRestriction> {
        let mut out = Vec::new();
        let mut dt: Vec<(&(usize, usize), &String)> = self.dt_iri.iter().collect();
        dt.sort();
        for (&(ti, ci), iri) in dt {
            let column = &self.schema.tables[ti].columns[ci];
            out.push(CardinalityRestriction {
                on_class: self.class_of(ti).to_string(),
                on_property: iri.clone(),
                min_cardinality: u32::from(!column.nullable),
                max_cardinality: 1,
            });
        }
        let mut fks: Vec<(&(usize, usize), &String)> = self.fk_iri.iter().collect();
        fks.sort();
        for (&(ti, fi), iri) in fks {
            let table = &self.schema.tables[ti];
            let required = table.foreign_keys[fi]
                .source_columns
                .iter()
                .all(|c| table.column(c).is_some_and(|col| !col.nullable));
            out.push(CardinalityRestriction {
                on_class: self.class_of(ti).to_string(),
                on_property: iri.clone(),
                min_cardinality: u32::from(required),
                max_cardinality: 1,
            });
        }
        out
    }

    fn key_values(&self, table: usize, tuple: &Tuple, columns: &[String]) -> Option<Vec<String>> {
        let _ = table;
        columns.iter().map(|c| tuple.get(c).and_then(|v| v.lexical())).collect()
    }

    fn individual_local(&self, table: usize, key: &[String]) -> String {
        let class_local = self.class_local[table].as_deref().expect("class");
        let key: Vec<String> = key.iter().map(|k| local_name(k).trim_start_matches('_').to_string()).collect();
        local_name(&format!("{class_local}Instance_{}", key.join("_")))
    }

    /// Each row of a Regular table becomes an individual; bridge rows become
    /// links between the individuals they reference.
    pub fn tuples_to_individuals(&mut self, tuples: &[Tuple]) -> Vec<OwlIndividual> {
        // Pass 1: names for every row of a Regular table.
        let mut by_key: HashMap<(usize, Vec<String>), String> = HashMap::new();
        let mut rows: Vec<(usize, &Tuple, String)> = Vec::new();
        let mut ordinal: HashMap<usize, usize> = HashMap::new();
        for tuple in tuples {
            let Some(ti) = self.schema.table_index(&tuple.table) else { continue };
            if !self.analysis.is_regular(ti) {
                continue;
            }
            let table = &self.schema.tables[ti];
            let n = ordinal.entry(ti).or_insert(0);
            *n += 1;
            let desired = if table.primary_key.is_empty() {
                let class_local = self.class_local[ti].as_deref().expect("class");
                format!("{class_local}Instance_row{n}")
            } else {
                match self.key_values(ti, tuple, &table.primary_key) {
                    Some(key) => {
                        let local = self.individual_local(ti, &key);
                        if by_key.contains_key(&(ti, key.clone())) {
                            self.warnings.push(format!("duplicate primary key ({}) in `{}`", key.join(", "), table.name));
                        }
                        let local = self.claim(&local, "individual");
                        let iri = self.iri(&local);
                        by_key.entry((ti, key)).or_insert_with(|| iri.clone());
                        rows.push((ti, tuple, iri));
                        continue;
                    }
                    None => {
                        self.warnings.push(format!("row of `{}` has a NULL primary key; numbered instead", table.name));
                        let class_local = self.class_local[ti].as_deref().expect("class");
                        format!("{class_local}Instance_row{n}")
                    }
                }
            };
            let local = self.claim(&desired, "individual");
            let iri = self.iri(&local);
            rows.push((ti, tuple, iri));
        }

        let target_iri = |this: &Self, warnings: &mut Vec<String>, target: usize, key: Vec<String>| -> String {
            match by_key.get(&(target, key.clone())) {
                Some(iri) => iri.clone(),
                None => {
                    warnings.push(format!(
                        "reference to `{}` ({}) has no matching row",
                        this.schema.tables[target].name,
                        key.join(", ")
                    ));
                    this.iri(&this.individual_local(target, &key))
                }
            }
        };

        // Pass 2: assertions.
        let mut individuals: Vec<OwlIndividual> = Vec::with_capacity(rows.len());
        let mut warnings = Vec::new();
        for (ti, tuple, iri) in &rows {
            let table = &self.schema.tables[*ti];
            let mut ind = OwlIndividual {
                iri: iri.clone(),
                class_iri: self.class_of(*ti).to_string(),
                datatype_assertions: BTreeMap::new(),
                object_assertions: BTreeMap::new(),
            };
            for (ci, column) in table.columns.iter().enumerate() {
                let Some(prop) = self.dt_iri.get(&(*ti, ci)) else { continue };
                if let Some(lexical) = tuple.get(&column.name).and_then(|v| v.lexical()) {
                    ind.datatype_assertions
                        .insert(prop.clone(), TypedLiteral { lexical, datatype: sql_type_to_xsd(column.sql_type) });
                }
            }
            for link in self.analysis.fk_links.iter().filter(|l| l.table == *ti) {
                let fk = &table.foreign_keys[link.fk];
                let Some(key) = self.key_values(*ti, tuple, &fk.source_columns) else { continue };
                let target = target_iri(self, &mut warnings, link.target, key);
                let prop = self.fk_iri[&(link.table, link.fk)].clone();
                ind.object_assertions.entry(prop).or_default().insert(target);
            }
            individuals.push(ind);
        }

        let position: HashMap<String, usize> =
            individuals.iter().enumerate().map(|(i, ind)| (ind.iri.clone(), i)).collect();
        for tuple in tuples {
            let Some(ti) = self.schema.table_index(&tuple.table) else { continue };
            if self.analysis.is_regular(ti) {
                continue;
            }
            let Some(link) = self.analysis.bridge_links.iter().find(|l| l.table == ti).copied() else {
                warnings.push(format!("row of bridge `{}` skipped: its targets have no classes", tuple.table));
                continue;
            };
            let table = &self.schema.tables[ti];
            let (fk_a, fk_b) = (&table.foreign_keys[0], &table.foreign_keys[1]);
            let (Some(key_a), Some(key_b)) =
                (self.key_values(ti, tuple, &fk_a.source_columns), self.key_values(ti, tuple, &fk_b.source_columns))
            else {
                continue;
            };
            let Some(subject) = by_key.get(&(link.first, key_a.clone())) else {
                warnings.push(format!(
                    "row of bridge `{}` skipped: no `{}` row ({})",
                    table.name,
                    self.schema.tables[link.first].name,
                    key_a.join(", ")
                ));
                continue;
            };
            let object = target_iri(self, &mut warnings, link.second, key_b);
            let prop = self.bridge_iri[&ti].clone();
            individuals[position[subject]].object_assertions.entry(prop).or_default().insert(object);
        }
        self.warnings.extend(warnings);
        individuals
    }
}

/// Strongly connected components with more than one class.
fn subclass_cycles(classes: &[OwlClass]) -> Vec<Vec<String>> {
    let index: HashMap<&str, usize> = classes.iter().enumerate().map(|(i, c)| (c.iri.as_str(), i)).collect();
    let edges: Vec<Vec<usize>> = classes
        .iter()
        .map(|c| c.superclasses.iter().filter_map(|s| index.get(s.as_str()).copied()).collect())
        .collect();

    struct Tarjan<'e> {
        edges: &'e [Vec<usize>],
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        out: Vec<Vec<usize>>,
    }
    impl Tarjan<'_> {
        fn visit(&mut self, v: usize) {
            self.index[v] = Some(self.next);
            self.low[v] = self.next;
            self.next += 1;
            self.stack.push(v);
            self.on_stack[v] = true;
            for &w in &self.edges[v] {
                match self.index[w] {
                    None => {
                        self.visit(w);
                        self.low[v] = self.low[v].min(self.low[w]);
                    }
                    Some(iw) if self.on_stack[w] => self.low[v] = self.low[v].min(iw),
                    Some(_) => {}
                }
            }
            if Some(self.low[v]) == self.index[v] {
                let mut component = Vec::new();
                loop {
                    let w = self.stack.pop().expect("non-empty stack");
                    self.on_stack[w] = false;
                    component.push(w);
                    if w == v {
                        break;
                    }
                }
                if component.len() > 1 {
                    self.out.push(component);
                }
            }
        }
    }

    let n = classes.len();
    let mut t = Tarjan {
        edges: &edges,
        index: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        next: 0,
        out: Vec::new(),
    };
    for v in 0..n {
        if t.index[v].is_none() {
            t.visit(v);
        }
    }
    let mut cycles: Vec<Vec<String>> = t
        .out
        .into_iter()
        .map(|c| {
            let mut labels: Vec<String> = c.into_iter().map(|i| classes[i].label.clone()).collect();
            labels.sort();
            labels
        })
        .collect();
    cycles.sort();
    cycles
}
