#![no_main]

use libfuzzer_sys::fuzz_target;
use periodic_kl::LaurentPoly;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = text.parse::<LaurentPoly>() {
        let s = p.to_string();
        assert_eq!(s.parse::<LaurentPoly>().unwrap(), p, "{s}");
        let j = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<LaurentPoly>(&j).unwrap(), p);
        assert_eq!(p.bar().bar(), p);
    }
    let _ = serde_json::from_str::<LaurentPoly>(text);
});
