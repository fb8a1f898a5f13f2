#![no_main]

use libfuzzer_sys::fuzz_target;
use spinmediate_cli::parse;

fuzz_target!(|data: &[u8]| {
    let Some((&d, rest)) = data.split_first() else { return };
    let Ok(s) = std::str::from_utf8(rest) else { return };
    let _ = parse::region(s, usize::from(d % 3) + 1);
});
