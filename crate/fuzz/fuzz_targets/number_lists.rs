#![no_main]

use libfuzzer_sys::fuzz_target;
use spinmediate_cli::parse;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(v) = parse::floats(s) {
        assert_eq!(v.len(), s.split(',').count());
        assert!(v.iter().all(|x| x.is_finite()));
    }
    if let Ok(v) = parse::indices(s) {
        for (k, a) in v.iter().enumerate() {
            assert!(!v[k + 1..].contains(a));
        }
    }
});
