use hodge_lattice::cli::{embedded_input, run_document, Overrides};
use hodge_lattice::corpus::{self, default_dir, Source};

#[test]
fn every_case_matches_its_expectation() {
    let summary = corpus::verify_all(&default_dir()).expect("corpus loads");
    println!("{summary}");
    assert!(summary.outcomes.len() >= 10);
    assert!(summary.all_passed(), "{summary}");
}

#[test]
fn oracle_cases_store_no_values() {
    for case in corpus::load_dir(&default_dir()).unwrap() {
        if case.provenance.source == Source::Oracle {
            assert!(case.expected.is_empty(), "{}", case.name);
        }
    }
}

#[test]
fn symbolic_reports_replay_byte_identically() {
    for case in corpus::load_dir(&default_dir()).unwrap() {
        let report = corpus::regenerate(&case).unwrap().report;
        let again = run_document(&embedded_input(&report).unwrap(), None, &Overrides::default()).unwrap();
        assert_eq!(report, again, "{}", case.name);
    }
}

#[test]
fn untagged_cases_are_rejected() {
    let dir = std::env::temp_dir().join(format!("hodge-corpus-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("untagged.toml");
    std::fs::write(
        &path,
        "name = \"x\"\ndescription = \"y\"\n[problem]\nversion = 1\n[expected]\ntame = true\n",
    )
    .unwrap();
    assert!(corpus::load_case(&path).is_err());
    std::fs::write(
        &path,
        "name = \"x\"\ndescription = \"y\"\n[provenance]\nsource = \"by-inspection\"\nreference = \"r\"\n[problem]\nversion = 1\n",
    )
    .unwrap();
    assert!(corpus::load_case(&path).is_err(), "a case without values is untagged");
    std::fs::write(
        &path,
        "name = \"x\"\ndescription = \"y\"\n[provenance]\nsource = \"oracle\"\nreference = \"r\"\noracle = \"nope\"\n[problem]\nversion = 1\n",
    )
    .unwrap();
    assert!(corpus::load_case(&path).is_err());
    std::fs::remove_dir_all(&dir).unwrap();
}
