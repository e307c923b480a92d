#![no_main]

use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;
use pvakit::syntax::{parse_source, SourceSpec};

const SCOPE: &str = "params c, k;
generators u, v;
generators psi odd;
liealg { basis e, f, h; [e,f] = h; [h,e] = 2*e; [h,f] = -2*f; (e|f) = 1; (h|h) = 2; }
";

fn scope() -> &'static SourceSpec {
    static S: OnceLock<SourceSpec> = OnceLock::new();
    S.get_or_init(|| parse_source(SCOPE).unwrap())
}

// First byte picks the entry point, the rest is the expression.
fuzz_target!(|data: &[u8]| {
    let Some((&which, rest)) = data.split_first() else { return };
    let Ok(s) = std::str::from_utf8(rest) else { return };
    let sc = scope();
    match which % 4 {
        0 => drop(sc.parse_poly(s)),
        1 => drop(sc.parse_lambda(s)),
        2 => drop(sc.parse_va(s)),
        _ => drop(sc.parse_lie_elem(s)),
    }
});
