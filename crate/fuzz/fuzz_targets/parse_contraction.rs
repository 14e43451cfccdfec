#![no_main]

use libfuzzer_sys::fuzz_target;

use dimerkit::contraction::{parse_contraction, Contraction};
use dimerkit::corpus;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(file) = parse_contraction(text) else { return };
    // any parsed file either applies cleanly or is rejected with an error
    let q = corpus::figure_one();
    let _ = Contraction::from_file(&q, &file);
});
