//! Parse/print round trip on the shipped corpus against checked-in golden files.
//! `TWC_BLESS=1 cargo test --test golden` rewrites the golden files.

use std::path::PathBuf;

use twc_core::io;

const CORPUS: [(&str, &str); 5] = [
    ("e1", "data/e1.twc"),
    ("e2", "data/e2.twc"),
    ("e3", "data/e3.twc"),
    ("e2_maps", "../cli/tests/data/e2_maps.twc"),
    ("e3_unit_flip", "../cli/tests/data/e3_unit_flip.twc"),
];

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn corpus_prints_to_golden_and_golden_is_a_fixed_point() {
    let bless = std::env::var("TWC_BLESS").is_ok_and(|v| v == "1");
    for (name, src) in CORPUS {
        let text = std::fs::read_to_string(root().join(src)).unwrap();
        let printed = io::print(&io::parse_with(&text, None).unwrap());
        let golden = root().join("tests/golden").join(format!("{name}.twc"));
        if bless {
            std::fs::write(&golden, &printed).unwrap();
        }
        let expected = std::fs::read_to_string(&golden).unwrap();
        assert_eq!(printed, expected, "{name}: printed form differs from golden");
        let again = io::print(&io::parse_with(&expected, None).unwrap());
        assert_eq!(again, expected, "{name}: golden is not a fixed point");
    }
}
