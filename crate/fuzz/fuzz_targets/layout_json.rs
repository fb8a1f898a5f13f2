#![no_main]

use libfuzzer_sys::fuzz_target;
use spinmediate::geometry::Layout;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(layout) = Layout::from_json(s) {
        let again = Layout::from_json(&layout.to_json()).expect("serialized layouts parse");
        assert_eq!(again, layout);
        let _ = layout.coupling_matrix();
    }
});
