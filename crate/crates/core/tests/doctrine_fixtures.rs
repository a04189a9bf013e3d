//! The doctrine files under fixtures/ are generated here. Set REGDIAG_BLESS=1
//! to rewrite them; otherwise the generated text must match the files.

use std::path::PathBuf;
use std::sync::Arc;

use regdiag::doctrine::{
    doctrine_from_file, export_doctrine, validate_doctrine, BaseCategory, Budget, DoctrineError, Obj, PowersetDoctrine,
};
use serde_json::Value;

fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn pow2_text() -> String {
    let base = Arc::new(BaseCategory::build(&[2], 1).unwrap());
    let (i, a) = (base.unit(), base.atom(0));
    let objects = [i.clone(), a.clone(), Obj::prod(&a, &a), Obj::prod(&a, &i), Obj::prod(&i, &a), Obj::prod(&i, &i)];
    export_doctrine(&PowersetDoctrine::new(base), "pow2", &objects).unwrap() + "\n"
}

fn edit(text: &str, name: &str, f: impl FnOnce(&mut Value)) -> String {
    let mut v: Value = serde_json::from_str(text).unwrap();
    v["name"] = name.into();
    f(&mut v);
    serde_json::to_string_pretty(&v).unwrap() + "\n"
}

fn generated() -> Vec<(&'static str, String)> {
    let pow2 = pow2_text();
    // ∃π2 on A×A sends {(0,0)} (element 1) to {0,1} (element 3) instead of {0}.
    let bad_exists = edit(&pow2, "pow2-bad-exists", |v| {
        let e = v["exists"]
            .as_array_mut()
            .unwrap()
            .iter_mut()
            .find(|e| e["product"] == "A×A" && e["side"] == "second")
            .unwrap();
        assert_eq!(e["table"][1], 1);
        e["table"][1] = 3.into();
    });
    let missing_delta = edit(&pow2, "pow2-missing-delta", |v| {
        v["delta"].as_object_mut().unwrap().remove("A");
    });
    // Reindexing along id_A sends the top element to the bottom one.
    let non_monotone = edit(&pow2, "pow2-non-monotone", |v| {
        let r = v["reindex"]
            .as_array_mut()
            .unwrap()
            .iter_mut()
            .find(|r| r["dom"] == "A" && r["cod"] == "A" && r["map"] == serde_json::json!([0, 1]))
            .unwrap();
        r["table"] = serde_json::json!([0, 1, 2, 0]);
    });
    vec![
        ("pow2.doctrine.json", pow2),
        ("pow2-bad-exists.doctrine.json", bad_exists),
        ("pow2-missing-delta.doctrine.json", missing_delta),
        ("pow2-non-monotone.doctrine.json", non_monotone),
    ]
}

#[test]
fn fixtures_are_up_to_date() {
    let bless = std::env::var_os("REGDIAG_BLESS").is_some();
    for (name, text) in generated() {
        let path = fixture_path(name);
        if bless {
            std::fs::write(&path, &text).unwrap();
        } else {
            let on_disk = std::fs::read_to_string(&path).unwrap_or_default();
            assert!(on_disk == text, "{name} is stale; rerun with REGDIAG_BLESS=1");
        }
    }
}

fn load(name: &str) -> Result<regdiag::doctrine::TableDoctrine, DoctrineError> {
    let text = generated().into_iter().find(|(n, _)| *n == name).unwrap().1;
    doctrine_from_file(&text)
}

#[test]
fn pow2_file_validates() {
    let d = load("pow2.doctrine.json").unwrap();
    let report = validate_doctrine(&d, &Budget { cap: 1 << 20, ..Budget::default() });
    assert!(report.passed(), "{}", report.to_text());
    assert!(report.checks.iter().all(|c| c.exhaustive()), "{}", report.to_text());
}

#[test]
fn altered_exists_breaks_adjointness() {
    let d = load("pow2-bad-exists.doctrine.json").unwrap();
    let report = validate_doctrine(&d, &Budget::default());
    let adj = report.check("exists.adjoint").unwrap();
    assert!(!adj.passed());
    assert!(adj.witness.as_deref().unwrap().contains("A×A"), "{}", report.to_text());
}

#[test]
fn broken_files_are_rejected_at_load() {
    assert!(matches!(load("pow2-missing-delta.doctrine.json"), Err(DoctrineError::MissingTable(_))));
    assert!(matches!(load("pow2-non-monotone.doctrine.json"), Err(DoctrineError::NonMonotoneReindexing(_))));
}
