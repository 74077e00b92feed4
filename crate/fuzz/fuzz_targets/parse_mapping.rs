#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = aspirrel::abstraction::parse_mapping(text) {
        let printed = m.to_string();
        let again = aspirrel::abstraction::parse_mapping(&printed).expect("printed mapping parses");
        assert_eq!(again.to_string(), printed);
    }
});
