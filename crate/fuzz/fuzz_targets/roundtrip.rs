#![no_main]

use libfuzzer_sys::fuzz_target;

use dimerkit::DimerQuiver;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(q) = DimerQuiver::parse(text) else { return };
    let canonical = q.to_dimer_text();
    let back = DimerQuiver::parse(&canonical).expect("canonical text parses");
    assert_eq!(back.to_dimer_text(), canonical);
    let json = q.to_json();
    let from_json = DimerQuiver::from_json(&json).expect("canonical JSON parses");
    assert_eq!(from_json.to_dimer_text(), canonical);
});
