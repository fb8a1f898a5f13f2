#![no_main]

use libfuzzer_sys::fuzz_target;
use spinmediate::noise::TableId;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(id) = s.parse::<TableId>() {
            assert_eq!(id.as_str().parse::<TableId>().unwrap(), id);
        }
    }
});
