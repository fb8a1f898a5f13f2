#![no_main]

use libfuzzer_sys::fuzz_target;
use spinmediate_cli::parse;

// First byte picks the target count.
fuzz_target!(|data: &[u8]| {
    let Some((&n, rest)) = data.split_first() else { return };
    let Ok(s) = std::str::from_utf8(rest) else { return };
    let n = usize::from(n % 8);
    if let Ok(table) = parse::phases(s, n) {
        assert!(table.entries().iter().all(|(subset, _)| subset.iter().all(|&q| q < n)));
    }
});
