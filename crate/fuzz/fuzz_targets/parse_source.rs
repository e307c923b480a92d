#![no_main]

use libfuzzer_sys::fuzz_target;
use pvakit::syntax::{parse_source, print_source};

// Accepted sources must survive a print/parse round trip.
fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(spec) = parse_source(s) else { return };
    let printed = print_source(&spec);
    let again = parse_source(&printed).expect("printed source reparses");
    assert_eq!(again, spec);
    assert_eq!(print_source(&again), printed);
});
