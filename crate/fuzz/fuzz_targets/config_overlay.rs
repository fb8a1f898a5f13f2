#![no_main]

use libfuzzer_sys::fuzz_target;
use spinmediate_cli::args::*;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let _ = overlay(&SolveArgs::default(), "solve", s);
    let _ = overlay(&CompileFlipsArgs::default(), "compile-flips", s);
    let _ = overlay(&RunArgs::default(), "run", s);
    let _ = overlay(&NoiseArgs::default(), "noise", s);
    let _ = overlay(&ReproduceArgs::default(), "reproduce", s);
    let _ = overlay(&ListArgs::default(), "list-presets", s);
});
