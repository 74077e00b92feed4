#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(family) = aspirrel::syntax::parse_instances(text) {
        assert_eq!(family.names().count(), family.len());
    }
});
