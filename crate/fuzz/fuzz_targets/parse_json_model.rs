#![no_main]

use libfuzzer_sys::fuzz_target;

use dimerkit::model::validate;
use dimerkit::DimerQuiver;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(q) = DimerQuiver::from_json(text) {
        let _ = validate(&q);
    }
});
