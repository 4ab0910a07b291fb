#![no_main]

use ainfty::Scalar;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(x) = s.parse::<Scalar>() {
            // the printed form must parse back to the same value
            assert_eq!(x.to_string().parse::<Scalar>().unwrap(), x);
        }
    }
});
