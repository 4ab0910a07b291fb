//! The checked-in fuzz seeds must stay meaningful: document seeds parse
//! and print back byte for byte.

use std::fs;
use std::path::PathBuf;

use ainfty::category::AInftyCategory;
use ainfty::functor::AInftyFunctor;
use ainfty::hpt::SDRData;
use ainfty::io::{from_text, to_text, Complexes, Document, Manifest, Report, TwistedDocument};
use ainfty::report::FieldMode;
use ainfty::Scalar;

fn seeds(target: &str) -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fuzz/corpus")
        .join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .map(|p| {
            let text = fs::read_to_string(&p).unwrap();
            (p, text)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

fn documents<D: Document>(target: &str) {
    for (path, text) in seeds(target) {
        let d: D = from_text(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(to_text(&d), text, "{}", path.display());
    }
}

#[test]
fn document_seeds_round_trip() {
    documents::<AInftyCategory>("category");
    documents::<AInftyFunctor>("functor");
    documents::<SDRData>("sdr");
    documents::<Complexes>("complexes");
    documents::<TwistedDocument>("twisted");
    documents::<Manifest>("manifest");
    documents::<Report>("report");
}

#[test]
fn scalar_seeds_cover_both_outcomes() {
    let parsed: Vec<bool> = seeds("scalar")
        .iter()
        .map(|(_, s)| s.parse::<Scalar>().is_ok())
        .collect();
    assert!(parsed.contains(&true) && parsed.contains(&false));
}

#[test]
fn field_seeds_cover_both_outcomes() {
    let parsed: Vec<bool> = seeds("field_mode")
        .iter()
        .map(|(_, s)| FieldMode::parse(s).is_ok())
        .collect();
    assert!(parsed.contains(&true) && parsed.contains(&false));
}
