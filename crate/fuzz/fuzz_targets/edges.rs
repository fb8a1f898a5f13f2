#![no_main]

use libfuzzer_sys::fuzz_target;
use spinmediate_cli::parse;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok((a, b)) = parse::pair(s) {
        assert_ne!(a, b);
    }
    if let Ok(edges) = parse::edges(s) {
        assert!(edges.iter().all(|(a, b)| a != b));
    }
});
