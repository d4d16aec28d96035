#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use chrono::NaiveDate;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rdb2owl::relational::{validate_schema, Column, ForeignKey, RelationalSchema, SqlType, Table, Tuple, Value};

pub struct Case {
    pub seed: u64,
    pub schema: RelationalSchema,
    pub tuples: Vec<Tuple>,
}

const NAMES: &[&str] = &[
    "Account", "Customer", "Order", "Item", "Manager", "Service", "Tariff", "Region", "Payment", "Query",
    "Order Line", "Café", "9Lives", "Status", "x",
];

const DATA_TYPES: &[SqlType] = &[
    SqlType::Int,
    SqlType::BigInt,
    SqlType::SmallInt,
    SqlType::Decimal { precision: 7, scale: 2 },
    SqlType::Float,
    SqlType::Double,
    SqlType::Varchar(12),
    SqlType::Char(3),
    SqlType::Text,
    SqlType::Date,
    SqlType::Timestamp,
    SqlType::Boolean,
];

const KEY_TYPES: &[SqlType] = &[SqlType::Int, SqlType::BigInt, SqlType::Varchar(10)];

struct Plan {
    name: String,
    pk: Vec<Column>,
    bridge: Option<(usize, usize)>,
}

/// A validated random schema of at most `max_tables` tables (each with at most
/// ten columns), with self references, composite keys, keyless tables and
/// occasional bridge tables, plus rows that satisfy every constraint.
pub fn random_case(seed: u64, max_tables: usize) -> Case {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(0..=max_tables);

    let mut names: Vec<String> = Vec::new();
    while names.len() < n {
        let base = NAMES.choose(&mut rng).unwrap().to_string();
        let name = if names.iter().any(|x| x.eq_ignore_ascii_case(&base)) { format!("{base}{}", names.len()) } else { base };
        names.push(name);
    }

    // Keys first so foreign keys may point at any table.
    let mut plans: Vec<Plan> = names
        .into_iter()
        .map(|name| {
            let pk = match rng.gen_range(0..10) {
                0 => vec![],
                1 | 2 => vec![
                    Column::new("k1", *KEY_TYPES.choose(&mut rng).unwrap()).not_null(),
                    Column::new("k2", SqlType::Int).not_null(),
                ],
                _ => vec![Column::new("id", *KEY_TYPES.choose(&mut rng).unwrap()).not_null()],
            };
            Plan { name, pk, bridge: None }
        })
        .collect();

    // Some tables become bridges between two other keyed, non-bridge tables.
    for i in 0..plans.len() {
        if plans.len() < 3 || !rng.gen_bool(0.2) {
            continue;
        }
        if plans.iter().any(|p| p.bridge.is_some_and(|(a, b)| a == i || b == i)) {
            continue;
        }
        let candidates: Vec<usize> =
            (0..plans.len()).filter(|&j| j != i && plans[j].pk.len() == 1 && plans[j].bridge.is_none()).collect();
        if candidates.len() < 2 {
            continue;
        }
        let picked: Vec<usize> = candidates.choose_multiple(&mut rng, 2).copied().collect();
        plans[i].bridge = Some((picked[0], picked[1]));
        plans[i].pk = vec![];
    }

    let mut tables = Vec::new();
    for (i, plan) in plans.iter().enumerate() {
        let mut t = Table::new(plan.name.clone());
        if let Some((a, b)) = plan.bridge {
            for (col, target) in [("left_id", a), ("right_id", b)] {
                t.columns.push(Column::new(col, plans[target].pk[0].sql_type).not_null());
                t.foreign_keys.push(ForeignKey::new(&[col], &plans[target].name, &[plans[target].pk[0].name.as_str()]));
            }
            t.primary_key = vec!["left_id".into(), "right_id".into()];
            tables.push(t);
            continue;
        }
        t.columns.extend(plan.pk.iter().cloned());
        t.primary_key = plan.pk.iter().map(|c| c.name.clone()).collect();
        let budget = rng.gen_range(t.columns.len().max(1)..=10);
        let mut fk_no = 0;
        while t.columns.len() < budget {
            let keyed: Vec<usize> = (0..plans.len()).filter(|&j| !plans[j].pk.is_empty() || plans[j].bridge.is_some()).collect();
            if !keyed.is_empty() && rng.gen_bool(0.3) {
                let target = *keyed.choose(&mut rng).unwrap();
                let target_cols: Vec<Column> = if let Some((a, b)) = plans[target].bridge {
                    vec![
                        Column::new("left_id", plans[a].pk[0].sql_type),
                        Column::new("right_id", plans[b].pk[0].sql_type),
                    ]
                } else {
                    plans[target].pk.clone()
                };
                if t.columns.len() + target_cols.len() > 10 {
                    break;
                }
                fk_no += 1;
                let nullable = rng.gen_bool(0.5) || target == i;
                let mut sources = Vec::new();
                for (j, tc) in target_cols.iter().enumerate() {
                    let name = if target_cols.len() == 1 { format!("fk{fk_no}") } else { format!("fk{fk_no}_{}", j + 1) };
                    let mut c = Column::new(name.clone(), tc.sql_type);
                    c.nullable = nullable;
                    t.columns.push(c);
                    sources.push(name);
                }
                let src: Vec<&str> = sources.iter().map(String::as_str).collect();
                let tgt: Vec<&str> = target_cols.iter().map(|c| c.name.as_str()).collect();
                let mut fk = ForeignKey::new(&src, &plans[target].name, &tgt);
                if rng.gen_bool(0.1) {
                    fk = fk.unique();
                }
                t.foreign_keys.push(fk);
            } else {
                let name = format!("c{}", t.columns.len());
                let mut c = Column::new(name, *DATA_TYPES.choose(&mut rng).unwrap());
                c.nullable = rng.gen_bool(0.6);
                t.columns.push(c);
            }
        }
        tables.push(t);
    }

    let mut raw = RelationalSchema::new(format!("random{seed}"));
    raw.tables = tables;
    let schema = validate_schema(raw).unwrap_or_else(|e| panic!("seed {seed}: generator produced invalid schema: {e:?}"));
    let tuples = random_rows(&mut rng, &schema);
    Case { seed, schema, tuples }
}

fn key_value(t: SqlType, n: i64) -> Value {
    match t {
        SqlType::Varchar(_) => Value::Text(format!("k{n}")),
        _ => Value::Integer(n),
    }
}

fn data_value(rng: &mut ChaCha8Rng, t: SqlType) -> Value {
    match t {
        SqlType::Int => Value::Integer(rng.gen_range(-100_000..100_000)),
        SqlType::BigInt => Value::Integer(rng.gen_range(-5_000_000_000..5_000_000_000)),
        SqlType::SmallInt => Value::Integer(rng.gen_range(-300..300)),
        SqlType::Decimal { .. } => {
            let cents: i64 = rng.gen_range(-99_999..99_999);
            let s = format!("{}{}.{:02}", if cents < 0 { "-" } else { "" }, cents.abs() / 100, cents.abs() % 100);
            Value::Decimal(rdb2owl::relational::canonical_decimal(&s).unwrap())
        }
        SqlType::Float | SqlType::Double => Value::Float(rng.gen_range(-4000..4000) as f64 / 4.0),
        SqlType::Varchar(n) | SqlType::Char(n) => {
            let pool = ['a', 'B', ' ', '\'', 'é', '&', '<', 'z', '"'];
            let len = rng.gen_range(0..=n as usize);
            Value::Text((0..len).map(|_| *pool.choose(rng).unwrap()).collect())
        }
        SqlType::Text => Value::Text(["Electricity", "Refuse Removal", "a & b", "<x>", ""].choose(rng).unwrap().to_string()),
        SqlType::Date => Value::Date(NaiveDate::from_ymd_opt(2000 + rng.gen_range(0..30), rng.gen_range(1..=12), rng.gen_range(1..=28)).unwrap()),
        SqlType::Timestamp => Value::Timestamp(
            NaiveDate::from_ymd_opt(2020, 2, rng.gen_range(1..=29)).unwrap().and_hms_opt(rng.gen_range(0..24), rng.gen_range(0..60), 7).unwrap(),
        ),
        SqlType::Boolean => Value::Boolean(rng.gen()),
    }
}

fn random_rows(rng: &mut ChaCha8Rng, schema: &RelationalSchema) -> Vec<Tuple> {
    // Primary key values per table, used to resolve foreign keys.
    let mut keys: BTreeMap<String, Vec<Vec<Value>>> = BTreeMap::new();
    let mut plan: Vec<(usize, usize)> = Vec::new();
    for (ti, t) in schema.tables.iter().enumerate() {
        let count = rng.gen_range(0..=4);
        plan.push((ti, count));
        let rows: Vec<Vec<Value>> = (1..=count as i64)
            .map(|n| t.primary_key.iter().map(|k| key_value(t.column(k).unwrap().sql_type, n)).collect())
            .collect();
        keys.insert(t.name.clone(), rows);
    }
    let mut out = Vec::new();
    for (ti, count) in plan {
        let t = &schema.tables[ti];
        let mut used_bridge_pairs = BTreeSet::new();
        for n in 0..count {
            let mut tuple = Tuple::new(t.name.clone());
            for c in &t.columns {
                if t.is_foreign_key_member(&c.name) {
                    continue;
                }
                let v = if t.is_primary_key_column(&c.name) {
                    let idx = t.primary_key.iter().position(|k| k == &c.name).unwrap();
                    keys[&t.name][n][idx].clone()
                } else if c.nullable && rng.gen_bool(0.3) {
                    Value::Null
                } else {
                    data_value(rng, c.sql_type)
                };
                tuple = tuple.with(&c.name, v);
            }
            for fk in &t.foreign_keys {
                let target_keys = &keys[&schema.table(&fk.target_table).unwrap().name];
                let nullable = fk.source_columns.iter().all(|s| t.column(s).unwrap().nullable);
                let values: Vec<Value> = if target_keys.is_empty() || (nullable && rng.gen_bool(0.25)) {
                    if nullable {
                        vec![Value::Null; fk.source_columns.len()]
                    } else {
                        // Dangling but well-typed reference.
                        let tt = schema.table(&fk.target_table).unwrap();
                        fk.target_columns.iter().map(|k| key_value(tt.column(k).unwrap().sql_type, 99)).collect()
                    }
                } else {
                    target_keys.choose(rng).unwrap().clone()
                };
                for (s, v) in fk.source_columns.iter().zip(values) {
                    if tuple.get(s).is_none() {
                        tuple = tuple.with(s, v);
                    }
                }
            }
            // Primary key columns that are also foreign key members.
            for k in &t.primary_key {
                if tuple.get(k).is_none() || tuple.get(k) == Some(&Value::Null) {
                    let idx = t.primary_key.iter().position(|x| x == k).unwrap();
                    tuple = tuple.with(k, keys[&t.name][n][idx].clone());
                }
            }
            if !t.primary_key.is_empty() {
                let pk: Vec<String> = t.primary_key.iter().map(|k| tuple.get(k).unwrap().to_string()).collect();
                if !used_bridge_pairs.insert(pk) {
                    continue;
                }
            }
            out.push(tuple);
        }
    }
    out
}

/// Count vector (classes, datatype properties, object properties,
/// individuals, restrictions, subclass edges).
pub type Counts = [usize; 6];

fn lower(s: &str) -> String {
    s.to_lowercase()
}

/// Rules 1-9 counted straight from the schema, without the library's analysis.
pub fn oracle_counts(schema: &RelationalSchema, tuples: &[Tuple]) -> Counts {
    let is_bridge = |t: &Table| {
        if t.foreign_keys.len() != 2 || lower(&t.foreign_keys[0].target_table) == lower(&t.foreign_keys[1].target_table) {
            return false;
        }
        let fk_cols: BTreeSet<String> = t.foreign_keys.iter().flat_map(|f| f.source_columns.iter().map(|c| lower(c))).collect();
        let pk: BTreeSet<String> = t.primary_key.iter().map(|c| lower(c)).collect();
        let all: BTreeSet<String> = t.columns.iter().map(|c| lower(&c.name)).collect();
        !pk.is_empty() && pk == fk_cols && all == fk_cols
    };
    let regular: BTreeSet<String> = schema.tables.iter().filter(|t| !is_bridge(t)).map(|t| lower(&t.name)).collect();

    let mut classes = 0;
    let mut dt = 0;
    let mut links = 0;
    let mut m2n = 0;
    let mut edges = BTreeSet::new();
    for t in &schema.tables {
        let name = lower(&t.name);
        if !regular.contains(&name) {
            let a = lower(&t.foreign_keys[0].target_table);
            let b = lower(&t.foreign_keys[1].target_table);
            if regular.contains(&a) && regular.contains(&b) {
                m2n += 1;
            }
            continue;
        }
        classes += 1;
        for c in &t.columns {
            let in_fk = t.foreign_keys.iter().any(|f| f.source_columns.iter().any(|s| lower(s) == lower(&c.name)));
            if !in_fk {
                dt += 1;
            }
        }
        for f in &t.foreign_keys {
            let target = lower(&f.target_table);
            if regular.contains(&target) {
                links += 1;
                if target != name {
                    edges.insert((name.clone(), target));
                }
            }
        }
    }
    let individuals = tuples.iter().filter(|t| regular.contains(&lower(&t.table))).count();
    [classes, dt, 2 * (links + m2n), individuals, dt + links, edges.len()]
}

pub fn model_counts(model: &rdb2owl::mapping::OntologyModel) -> Counts {
    [
        model.classes.len(),
        model.datatype_properties.len(),
        model.object_properties.len(),
        model.individuals.len(),
        model.restrictions.len(),
        model.classes.iter().map(|c| c.superclasses.len()).sum(),
    ]
}

/// Every object property has an inverse that points back, and the pairing is
/// one-to-one.
pub fn inverses_form_matching(model: &rdb2owl::mapping::OntologyModel) -> bool {
    let by_iri: BTreeMap<&str, &rdb2owl::mapping::OwlObjectProperty> =
        model.object_properties.iter().map(|p| (p.iri.as_str(), p)).collect();
    model.object_properties.iter().all(|p| {
        let Some(inv) = p.inverse_of.as_deref() else { return false };
        inv != p.iri && by_iri.get(inv).is_some_and(|q| q.inverse_of.as_deref() == Some(p.iri.as_str()))
    })
}
