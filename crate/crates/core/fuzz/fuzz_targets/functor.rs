#![no_main]

use ainfty::functor::AInftyFunctor;
use ainfty::io::{from_text, to_text};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(doc) = from_text::<AInftyFunctor>(text) {
        let printed = to_text(&doc);
        let again: AInftyFunctor = from_text(&printed).expect("printed documents parse");
        assert_eq!(to_text(&again), printed);
    }
});
