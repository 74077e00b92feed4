#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(program) = aspirrel::syntax::parse_program(text) {
        let printed = program.to_string();
        let again = aspirrel::syntax::parse_program(&printed).expect("printed program parses");
        assert_eq!(again.to_string(), printed);
    }
});
