//! Replays the fuzz corpus seeds through the parser entry points.

use std::fs;
use std::path::PathBuf;

use pvakit::syntax::ast::{parse_expr, parse_file};
use pvakit::syntax::{parse_source, print_source};

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.display().to_string(), fs::read(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds in {}", dir.display());
    out
}

#[test]
fn expr_and_file_seeds() {
    for (_, d) in seeds("parse_expr") {
        let _ = parse_expr(std::str::from_utf8(&d).unwrap());
    }
    let ok = seeds("parse_file")
        .iter()
        .filter(|(_, d)| parse_file(std::str::from_utf8(d).unwrap()).is_ok())
        .count();
    assert!(ok > 0);
}

#[test]
fn source_seeds_round_trip() {
    let mut accepted = 0;
    for (name, d) in seeds("parse_source") {
        let Ok(spec) = parse_source(std::str::from_utf8(&d).unwrap()) else { continue };
        let printed = print_source(&spec);
        assert_eq!(parse_source(&printed).unwrap(), spec, "{name}");
        accepted += 1;
    }
    assert!(accepted >= 5);
}

#[test]
fn scoped_seeds() {
    let sc = parse_source(
        "params c, k;\ngenerators u, v;\ngenerators psi odd;\n\
         liealg { basis e, f, h; [e,f] = h; [h,e] = 2*e; [h,f] = -2*f; (e|f) = 1; (h|h) = 2; }\n",
    )
    .unwrap();
    let mut accepted = 0;
    for (_, d) in seeds("parse_scoped") {
        let (which, rest) = d.split_first().unwrap();
        let s = std::str::from_utf8(rest).unwrap();
        let ok = match which % 4 {
            0 => sc.parse_poly(s).is_ok(),
            1 => sc.parse_lambda(s).is_ok(),
            2 => sc.parse_va(s).is_ok(),
            _ => sc.parse_lie_elem(s).is_ok(),
        };
        accepted += ok as usize;
    }
    assert!(accepted >= 4);
}

mod random {
    use super::*;
    use proptest::prelude::*;

    const TOKENS: &[&str] = &[
        "u", "v", "l", "D", "T", "vac", "c", "k", "1", "2", "3/2", "0", "+", "-", "*", "/", "^", "'", "(", ")", ":", "{",
        "}", "[", "]", ",", ";", "=", "|", " ", "\n", "params", "generators", "bracket", "odd", "weight", "let", "liealg",
        "basis", "affine", "level", "#",
    ];

    fn soup() -> impl Strategy<Value = String> {
        prop::collection::vec(prop::sample::select(TOKENS), 0..40).prop_map(|t| t.concat())
    }

    proptest! {
        #[test]
        fn parsers_return_instead_of_panicking(s in soup()) {
            let _ = parse_expr(&s);
            let _ = parse_file(&s);
            if let Ok(spec) = parse_source(&s) {
                prop_assert_eq!(parse_source(&print_source(&spec)).unwrap(), spec);
            }
            if let Ok(sc) = parse_source("params c, k;\ngenerators u, v;") {
                let _ = sc.parse_poly(&s);
                let _ = sc.parse_lambda(&s);
                let _ = sc.parse_va(&s);
            }
        }

        #[test]
        fn arbitrary_text_is_rejected_cleanly(s in "\\PC{0,60}") {
            let _ = parse_expr(&s);
            let _ = parse_source(&s);
        }
    }
}
