#![no_main]

use ainfty::io::{from_text, to_text, Manifest};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(doc) = from_text::<Manifest>(text) {
        let printed = to_text(&doc);
        let again: Manifest = from_text(&printed).expect("printed documents parse");
        assert_eq!(to_text(&again), printed);
    }
});
