use std::fs;
use std::path::Path;

use serde_json::json;
use twistbench_core::io::{
    elaborate, export_algebra, export_report, export_twist, import_document, parse_spec,
    render_spec, spec_from_algebra, to_canonical_string, Kind, SpecError,
};
use twistbench_core::{build_twist, check_suite, monadic_godel_corpus, CheckOptions, SuiteId};

fn sample(name: &str) -> String {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../algebras").join(name);
    fs::read_to_string(p).unwrap()
}

#[test]
fn every_sample_elaborates_or_reports_why() {
    for name in ["remark.alg", "two_chain.alg", "three_chain.alg", "three_chain_monadic.alg", "kleene3.alg"] {
        let spec = parse_spec(&sample(name)).unwrap();
        elaborate(&spec, false).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
    let e = elaborate(&parse_spec(&sample("m3.alg")).unwrap(), false).unwrap_err();
    assert!(e.to_string().contains("distributive"));
}

#[test]
fn dsl_round_trip_on_the_corpus() {
    for e in monadic_godel_corpus(5).unwrap() {
        let spec = spec_from_algebra(&e.name.replace('/', "_"), Kind::MonadicGodel, &e.algebra);
        let back = parse_spec(&render_spec(&spec)).unwrap();
        assert_eq!(back, spec);
        assert_eq!(elaborate(&back, false).unwrap().algebra, e.algebra);
    }
}

#[test]
fn twist_specs_round_trip_as_nelson() {
    for e in monadic_godel_corpus(4).unwrap() {
        let k = build_twist(&e.algebra).unwrap().result;
        let text = render_spec(&spec_from_algebra("k", Kind::MonadicNelson, &k));
        assert!(!text.contains("op forall"));
        let back = elaborate(&parse_spec(&text).unwrap(), false).unwrap();
        assert_eq!(back.algebra, k);
    }
}

#[test]
fn two_chain_json() {
    let a = elaborate(&parse_spec(&sample("two_chain.alg")).unwrap(), false).unwrap().algebra;
    let v = export_algebra(&a);
    assert_eq!(v["elements"], json!(["0", "1"]));
    assert_eq!(v["leq"], json!([[true, true], [false, true]]));
    assert_eq!(v["ops"]["himp"], json!([["1", "1"], ["0", "1"]]));
    // keys come out sorted
    let text = to_canonical_string(&v);
    let keys: Vec<usize> = ["\"consts\"", "\"elements\"", "\"leq\"", "\"ops\""]
        .iter()
        .map(|k| text.find(k).unwrap())
        .collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn failing_report_json() {
    let a = elaborate(&parse_spec(&sample("remark.alg")).unwrap(), false).unwrap().algebra;
    let r = check_suite(&a, SuiteId::MonadicGodel, CheckOptions::default()).unwrap();
    let v = export_report(&r);
    assert_eq!(v["verdict"], "fail");
    assert_eq!(v["clause"], "G");
    assert_eq!(v["witness"]["assignment"][0]["var"], "x");
}

#[test]
fn twist_documents_import_as_their_algebra() {
    let a = elaborate(&parse_spec(&sample("remark.alg")).unwrap(), false).unwrap().algebra;
    let k = build_twist(&a).unwrap();
    let text = to_canonical_string(&export_twist(&k));
    assert_eq!(import_document(&text).unwrap(), k.result);
    assert!(import_document("{\"elements\": [\"0\"]}").is_err());
}

#[test]
fn spec_errors_point_into_the_source() {
    let cases = [
        ("algebra t {\n  elements: a b\n  covers: a<c\n}", (3, 13)),
        ("algebra t {\n  elements: a\n  covers: a<a\n}", (3, 11)),
        ("algebra t {\n  elements: 0 1\n  covers: 0<1\n  op exists: 0->0\n}", (4, 6)),
        ("algebra t { elements: 0 1 covers: 0<1 kind: nelsonish }", (1, 45)),
    ];
    for (src, (line, col)) in cases {
        let e = parse_spec(src).unwrap_err();
        assert_eq!((e.loc().line, e.loc().col), (line, col), "{src}: {e}");
    }
    assert!(matches!(parse_spec("algebra { }"), Err(SpecError::Syntax(_))));
}
