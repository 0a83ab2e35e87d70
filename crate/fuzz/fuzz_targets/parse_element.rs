#![no_main]

use std::sync::{Arc, OnceLock};

use libfuzzer_sys::fuzz_target;
use periodic_kl::{AffineWeylGroup, Family, RootDatum};

fn groups() -> &'static [AffineWeylGroup] {
    static G: OnceLock<Vec<AffineWeylGroup>> = OnceLock::new();
    G.get_or_init(|| {
        [
            (Family::A, 1, 3),
            (Family::A, 3, 5),
            (Family::B, 2, 5),
            (Family::G, 2, 7),
        ]
        .into_iter()
        .map(|(f, r, l)| AffineWeylGroup::new(Arc::new(RootDatum::from_parts(f, r, l).unwrap())))
        .collect()
    })
}

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    for g in groups() {
        if let Ok(x) = g.parse_element(text) {
            let s = g.format_element(&x);
            assert_eq!(g.parse_element(&s).unwrap(), x, "{s}");
            if g.length(&x) <= 200 {
                assert_eq!(g.from_decomposition(&g.decompose(&x)), x);
            }
        }
    }
});
