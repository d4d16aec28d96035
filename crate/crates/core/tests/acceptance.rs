mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use common::{inverses_form_matching, model_counts, oracle_counts, random_case};
use rdb2owl::audit::{audit, expected_metrics, ontology_metrics, ConformanceReport, RuleStatus};
use rdb2owl::ddl::{parse_ddl, parse_inserts, print_ddl, print_inserts};
use rdb2owl::emit::{emit, read_model_json, EmitFormat};
use rdb2owl::mapping::{map_schema, MappingOptions};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn rdb2owl(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_rdb2owl")).args(args).output().expect("binary runs")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn municipality_end_to_end() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let json = dir.path().join("m.ontmodel.json");
    let owl = dir.path().join("m.owl");
    let schema = fixture("municipality.sql");
    let rows = fixture("municipality_rows.sql");
    let (schema, rows) = (schema.to_str().unwrap(), rows.to_str().unwrap());

    let start = Instant::now();
    let out = rdb2owl(&["convert", schema, "--data", rows, "-o", json.to_str().unwrap(), "--format", "json"]);
    let elapsed = start.elapsed();
    ensure(out.status.code() == Some(0), || format!("convert exited {:?}", out.status.code()))?;
    let out = rdb2owl(&["convert", schema, "--data", rows, "-o", owl.to_str().unwrap(), "--format", "rdfxml"]);
    ensure(out.status.code() == Some(0), || format!("convert rdfxml exited {:?}", out.status.code()))?;
    let xml = std::fs::read_to_string(&owl).map_err(|e| e.to_string())?;
    roxmltree::Document::parse(&xml).map_err(|e| format!("RDF/XML not well-formed: {e}"))?;

    let model = read_model_json(&std::fs::read(&json).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let counts = model_counts(&model);
    // classes, datatype props, object props, individuals, restrictions, subclass edges
    ensure(counts == [19, 84, 42, 10, 105, 21], || format!("counts {counts:?}"))?;
    ensure(inverses_form_matching(&model), || "object properties are not inverse-linked pairs".into())?;

    let (s, t) = rdb2owl::fixtures::municipality();
    ensure(s.tables.len() == 19 && s.column_count() == 105 && s.foreign_key_count() == 21 && t.len() == 10, || {
        "source counts differ from 19/105/21/10".into()
    })?;
    let oracle = oracle_counts(&s, &t);
    ensure(oracle == counts, || format!("oracle {oracle:?} != {counts:?}"))?;
    ensure(elapsed < Duration::from_secs(1), || format!("convert took {elapsed:?}"))?;
    Ok(format!("counts {counts:?}, 21 inverse pairs, oracle agrees, convert {} ms", elapsed.as_millis()))
}

fn figure_reproduction() -> Outcome {
    let out = rdb2owl(&["compare-paper", "--csv"]);
    ensure(out.status.code() == Some(0), || format!("compare-paper exited {:?}", out.status.code()))?;
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    let rows: Vec<Vec<String>> = text.lines().skip(1).map(|l| l.split(',').map(String::from).collect()).collect();
    let expected = [(19, 23, 20), (105, 112, 62), (21, 25, 68), (10, 10, 10)];
    ensure(rows.len() == expected.len(), || format!("{} rows", rows.len()))?;
    for (row, want) in rows.iter().zip(expected) {
        let got: (usize, usize, usize) =
            (row[1].parse().unwrap_or(0), row[2].parse().unwrap_or(0), row[3].parse().unwrap_or(0));
        ensure(got == want, || format!("row `{}`: {got:?} != {want:?}", row[0]))?;
    }
    let plain = String::from_utf8_lossy(&rdb2owl(&["compare-paper"]).stdout).to_string();
    ensure(plain.lines().any(|l| l.starts_with("tables / classes") && l.split_whitespace().rev().take(4).collect::<Vec<_>>() == ["19", "20", "23", "19"]), || {
        "text table classes row is not 19/23/20/19".into()
    })?;
    Ok("rows (19,23,20) (105,112,62) (21,25,68) (10,10,10)".into())
}

fn audit_plugin(metrics: &str) -> Result<ConformanceReport, String> {
    let schema = fixture("municipality.sql");
    let rows = fixture("municipality_rows.sql");
    let out = rdb2owl(&[
        "audit",
        schema.to_str().unwrap(),
        "--data",
        rows.to_str().unwrap(),
        "--metrics",
        metrics,
        "--report",
        "json",
    ]);
    ensure(out.status.code() == Some(0), || format!("audit exited {:?}", out.status.code()))?;
    ConformanceReport::from_json(&String::from_utf8_lossy(&out.stdout)).map_err(|e| e.to_string())
}

fn deviation_narrative() -> Outcome {
    let dm = audit_plugin("23,112,25,10,0,-")?;
    ensure(dm.deviations() == vec![1, 4, 6, 9], || format!("DataMaster deviations {:?}", dm.deviations()))?;
    ensure(dm.verdict(8).map(|v| v.status) == Some(RuleStatus::Conformant), || "DataMaster Rule 8 not Conformant".into())?;

    let ob = audit_plugin("20,62,68,10,0,-")?;
    for rule in [4, 6] {
        let v = ob.verdict(rule).unwrap();
        ensure(v.is_conformant_with_delta(), || format!("OntoBase Rule {rule}: {:?} {:?}", v.status, v.note))?;
    }
    ensure(ob.verdict(9).map(|v| v.status) == Some(RuleStatus::Deviation), || "OntoBase Rule 9 not Deviation".into())?;
    ensure(dm.deviations().len() > ob.deviations().len(), || "DataMaster does not have more deviations".into())?;
    Ok(format!("DataMaster deviations {:?}, OntoBase deviations {:?}", dm.deviations(), ob.deviations()))
}

fn self_conformance() -> Outcome {
    let start = Instant::now();
    let n = 500;
    let mut bridges = 0;
    for seed in 0..n {
        let case = random_case(seed, 8);
        let opts = MappingOptions::default();
        let m = map_schema(&case.schema, &case.tuples, &opts).map_err(|e| format!("seed {seed}: {e}"))?;
        m.model.validate().map_err(|v| format!("seed {seed}: invariant violated: {}", v[0]))?;
        let report = audit(&case.schema, &case.tuples, &ontology_metrics(&m.model));
        ensure(report.all_conformant(), || format!("seed {seed}: deviations {:?}", report.deviations()))?;
        ensure(report.verdicts.len() == 9, || format!("seed {seed}: {} verdicts", report.verdicts.len()))?;
        let e = expected_metrics(&case.schema, &case.tuples);
        let counts = model_counts(&m.model);
        ensure(counts == [e.classes, e.datatype_properties, e.object_properties, e.individuals, e.restrictions, e.subclass_edges], || {
            format!("seed {seed}: counts {counts:?} vs expected {e:?}")
        })?;
        ensure(counts[2].is_multiple_of(2) && inverses_form_matching(&m.model), || format!("seed {seed}: inverse matching broken"))?;
        bridges += report.schema_metrics.bridge_tables;
    }
    let elapsed = start.elapsed();
    ensure(bridges > 0, || "generator produced no bridge tables".into())?;
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("{n} schemas ({bridges} bridge tables) all nine Conformant in {} ms", elapsed.as_millis()))
}

fn oracle_equivalence() -> Outcome {
    let n = 200;
    for seed in 10_000..10_000 + n {
        let case = random_case(seed, 6);
        let m = map_schema(&case.schema, &case.tuples, &MappingOptions::default()).map_err(|e| e.to_string())?;
        let (got, want) = (model_counts(&m.model), oracle_counts(&case.schema, &case.tuples));
        ensure(got == want, || format!("seed {seed}: map_schema {got:?} != oracle {want:?}"))?;
    }
    Ok(format!("{n} schemas agree with the naive oracle"))
}

fn determinism_and_round_trips() -> Outcome {
    let n = 300;
    for seed in 20_000..20_000 + n {
        let case = random_case(seed, 8);
        let opts = MappingOptions::default();
        let a = map_schema(&case.schema, &case.tuples, &opts).unwrap().model;
        let b = map_schema(&case.schema, &case.tuples, &opts).unwrap().model;
        for fmt in [EmitFormat::RdfXml, EmitFormat::ModelJson] {
            ensure(emit(&a, fmt) == emit(&b, fmt), || format!("seed {seed}: {fmt} output differs between runs"))?;
        }

        let ddl = print_ddl(&case.schema);
        let reparsed = parse_ddl(&ddl);
        ensure(reparsed.schema.as_ref().map(|s| &s.tables) == Some(&case.schema.tables), || format!("seed {seed}: DDL round trip: {:?}", reparsed.diagnostics))?;
        let inserts = print_inserts(&case.schema, &case.tuples);
        let rows = parse_inserts(&inserts, &case.schema);
        ensure(rows.tuples == case.tuples, || format!("seed {seed}: INSERT round trip: {:?}", rows.diagnostics))?;

        let json = emit(&a, EmitFormat::ModelJson);
        let back = read_model_json(&json).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(back == a, || format!("seed {seed}: ModelJson round trip differs"))?;

        let xml = String::from_utf8(emit(&a, EmitFormat::RdfXml)).unwrap();
        roxmltree::Document::parse(&xml).map_err(|e| format!("seed {seed}: RDF/XML: {e}"))?;
    }
    let out1 = rdb2owl(&["compare-paper"]).stdout;
    let out2 = rdb2owl(&["compare-paper"]).stdout;
    ensure(out1 == out2, || "compare-paper output differs between runs".into())?;
    Ok(format!("{n} schemas: byte-identical reruns, DDL/INSERT/ModelJson round trips, well-formed RDF/XML"))
}

fn main() {
    let criteria: [Criterion; 6] = [
        ("Municipality fixture end-to-end", municipality_end_to_end),
        ("component comparison reproduction", figure_reproduction),
        ("deviation narrative reproduction", deviation_narrative),
        ("self-conformance property suite", self_conformance),
        ("oracle equivalence", oracle_equivalence),
        ("determinism and round trips", determinism_and_round_trips),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
