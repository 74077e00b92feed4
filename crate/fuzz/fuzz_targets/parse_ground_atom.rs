#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(atom) = aspirrel::syntax::parse_ground_atom(text) {
        let printed = atom.to_string();
        assert_eq!(aspirrel::syntax::parse_ground_atom(&printed).expect("printed atom parses"), atom);
    }
});
