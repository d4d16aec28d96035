mod common;

use proptest::prelude::*;
use rdb2owl::ddl::parse_ddl;
use rdb2owl::relational::*;

fn schema(ddl: &str) -> RelationalSchema {
    let p = parse_ddl(ddl);
    p.schema.unwrap_or_else(|| panic!("{:?}", p.diagnostics))
}

fn raw(tables: Vec<Table>) -> RelationalSchema {
    let mut s = RelationalSchema::new("raw");
    s.tables = tables;
    s
}

fn table(name: &str, cols: &[&str], pk: &[&str]) -> Table {
    let mut t = Table::new(name);
    t.columns = cols.iter().map(|c| Column::new(*c, SqlType::Int)).collect();
    t.primary_key = pk.iter().map(|c| c.to_string()).collect();
    t
}

#[test]
fn municipality_validates_with_19_tables() {
    let (s, _) = rdb2owl::fixtures::municipality();
    assert_eq!(s.tables.len(), 19);
}

#[test]
fn empty_schema_is_valid() {
    assert_eq!(validate_schema(RelationalSchema::new("e")).unwrap().tables.len(), 0);
}

#[test]
fn unknown_fk_target() {
    let mut q = table("Query", &["QueryID", "CustomerID"], &["QueryID"]);
    q.foreign_keys.push(ForeignKey::new(&["CustomerID"], "Client", &["ClientID"]));
    let errs = validate_schema(raw(vec![q])).unwrap_err();
    assert!(errs.contains(&SchemaError::UnknownFkTarget("Query".into(), "Client".into())), "{errs:?}");
}

#[test]
fn structural_errors() {
    let dup = validate_schema(raw(vec![table("a", &["x"], &[]), table("A", &["y"], &[])])).unwrap_err();
    assert!(matches!(dup[0], SchemaError::DuplicateTable(_)));

    let dup_col = validate_schema(raw(vec![table("a", &["x", "X"], &[])])).unwrap_err();
    assert!(matches!(dup_col[0], SchemaError::DuplicateColumn { .. }));

    let mut b = table("b", &["id", "a_x"], &["id"]);
    b.foreign_keys.push(ForeignKey::new(&["a_x"], "a", &["x"]));
    let not_pk = validate_schema(raw(vec![table("a", &["x", "y"], &["y"]), b.clone()])).unwrap_err();
    assert!(matches!(not_pk[0], SchemaError::FkTargetNotPrimaryKey(..)), "{not_pk:?}");

    b.foreign_keys[0] = ForeignKey::new(&["a_x"], "a", &["x", "y"]);
    let arity = validate_schema(raw(vec![table("a", &["x", "y"], &["x", "y"]), b])).unwrap_err();
    assert!(matches!(arity[0], SchemaError::FkArityMismatch(..)), "{arity:?}");
}

#[test]
fn canonical_form() {
    let s = schema(
        "CREATE TABLE zeta (ID INT PRIMARY KEY);
         CREATE TABLE Alpha (a INT, b INT, z INT REFERENCES ZETA(id), PRIMARY KEY (b, a));",
    );
    assert_eq!(s.tables[0].name, "Alpha");
    let fk = &s.tables[0].foreign_keys[0];
    assert_eq!((fk.target_table.as_str(), fk.target_columns[0].as_str()), ("zeta", "ID"));
    assert!(!s.tables[0].column("a").unwrap().nullable);
    assert_eq!(validate_schema(s.clone()).unwrap(), s);
}

const SAMPLE: &str = "
    CREATE TABLE Service (ServiceID INT PRIMARY KEY, Description VARCHAR(80), Type VARCHAR(40));
    CREATE TABLE PropertyType (PropertyTypeID INT PRIMARY KEY, Description VARCHAR(80));
    CREATE TABLE PropertyService (PropertyServiceID INT PRIMARY KEY,
        ServiceID INT REFERENCES Service, PropertyTypeID INT REFERENCES PropertyType);
    CREATE TABLE Student (StudentID INT PRIMARY KEY);
    CREATE TABLE Course (CourseID INT PRIMARY KEY);
    CREATE TABLE Enrolls (StudentID INT REFERENCES Student, CourseID INT REFERENCES Course,
        PRIMARY KEY (StudentID, CourseID));
    CREATE TABLE Customer (CustomerID INT PRIMARY KEY);
    CREATE TABLE Query (QueryID INT PRIMARY KEY, CustomerID INT REFERENCES Customer);
    CREATE TABLE Rebate (AccountID INT PRIMARY KEY REFERENCES Customer, Amount INT);";

#[test]
fn table_classification() {
    let s = schema(SAMPLE);
    let class = |n: &str| classify_table(&s, s.table(n).unwrap());
    assert_eq!(class("PropertyService"), TableClassification::Regular);
    assert!(class("Enrolls").is_bridge());
    assert_eq!(class("Service"), TableClassification::Regular);
}

#[test]
fn relationship_classification() {
    let s = schema(SAMPLE);
    let rel = |t: &str, i: usize| {
        let host = s.table(t).unwrap();
        classify_relationship(&s, &host.foreign_keys[i], host)
    };
    assert_eq!(rel("Query", 0), RelationshipKind::OneToMany);
    assert_eq!(rel("Rebate", 0), RelationshipKind::OneToOne);
    assert_eq!(rel("Enrolls", 0), RelationshipKind::ManyToMany { via_table: "Enrolls".into() });
}

#[test]
fn bridge_with_payload_is_regular() {
    let s = schema(
        "CREATE TABLE a (id INT PRIMARY KEY); CREATE TABLE b (id INT PRIMARY KEY);
         CREATE TABLE ab (a INT REFERENCES a, b INT REFERENCES b, since DATE, PRIMARY KEY (a, b));",
    );
    assert!(!classify_table(&s, s.table("ab").unwrap()).is_bridge());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn validation_is_idempotent(seed in any::<u64>()) {
        let case = common::random_case(seed, 8);
        prop_assert_eq!(validate_schema(case.schema.clone()).unwrap(), case.schema);
    }

    #[test]
    fn bridges_never_have_plain_key_columns(seed in any::<u64>()) {
        let case = common::random_case(seed, 8);
        let s = &case.schema;
        let two_fk = s.tables.iter().filter(|t| t.foreign_keys.len() == 2).count();
        let mut bridges = 0;
        for t in &s.tables {
            if classify_table(s, t).is_bridge() {
                bridges += 1;
                prop_assert!(t.primary_key.iter().all(|k| t.is_foreign_key_member(k)));
            }
            for fk in &t.foreign_keys {
                prop_assert_eq!(classify_relationship(s, fk, t), classify_relationship(s, fk, t));
            }
        }
        prop_assert!(bridges <= two_fk);
    }
}
