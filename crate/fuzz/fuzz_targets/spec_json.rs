#![no_main]

use libfuzzer_sys::fuzz_target;
use spinmediate::noise::{Estimator, PositionNoiseModel};
use spinmediate::pattern::RegionSpec;
use spinmediate::protocols::{PhaseTable, ProtocolSpec};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(p) = serde_json::from_str::<ProtocolSpec>(s) {
        let _ = p.name();
    }
    let _ = serde_json::from_str::<PhaseTable>(s);
    if let Ok(r) = serde_json::from_str::<RegionSpec>(s) {
        let _ = r.validate();
    }
    let _ = serde_json::from_str::<Estimator>(s);
    let _ = serde_json::from_str::<PositionNoiseModel>(s);
});
