#![no_main]

use std::sync::Arc;

use libfuzzer_sys::fuzz_target;
use periodic_kl::{AffineWeylGroup, RootDatum, Table};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(spec) = Table::peek_datum(text) else {
        return;
    };
    let Ok(rd) = RootDatum::from_parts(spec.family, spec.rank, spec.l) else {
        return;
    };
    let g = AffineWeylGroup::new(Arc::new(rd));
    if let Ok(t) = Table::from_json(&g, text) {
        let j = t.to_json(&g);
        assert_eq!(Table::from_json(&g, &j).unwrap(), t);
        assert_eq!(
            Table::entries_from_csv(&g, &t.to_csv(&g)).unwrap(),
            t.entries
        );
    }
});
