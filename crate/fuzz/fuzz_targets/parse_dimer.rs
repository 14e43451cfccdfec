#![no_main]

use libfuzzer_sys::fuzz_target;

use dimerkit::model::validate;
use dimerkit::DimerQuiver;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(q) = DimerQuiver::parse(text) {
        // validation reports failures as data and must not panic
        let _ = validate(&q);
    }
});
