use std::sync::Arc;

use periodic_kl::*;
use proptest::prelude::*;

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::btree_map(-6i32..6, -20i64..20, 0..5).prop_map(|m| {
        let mut p = LaurentPoly::zero();
        for (e, c) in m {
            p = p + LaurentPoly::monomial(Coeff::from(c), e);
        }
        p
    })
}

proptest! {
    #[test]
    fn laurent_text_and_json_roundtrip(p in poly()) {
        prop_assert_eq!(p.to_string().parse::<LaurentPoly>().unwrap(), p.clone());
        let j = serde_json::to_string(&p).unwrap();
        prop_assert_eq!(serde_json::from_str::<LaurentPoly>(&j).unwrap(), p);
    }

    #[test]
    fn laurent_ring_laws(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
    }

    #[test]
    fn elements_roundtrip(t in prop::collection::vec(-5i64..5, 2), w in 0usize..6) {
        let rd = RootDatum::from_parts(Family::A, 2, 5).unwrap();
        let g = AffineWeylGroup::new(Arc::new(rd));
        let fin = g.finite_group().elements().nth(w).unwrap();
        let x = ExtAffineElement::new(Weight::new(&t), fin);
        let s = g.format_element(&x);
        prop_assert_eq!(g.parse_element(&s).unwrap(), x);
        let d = g.decompose(&x);
        prop_assert_eq!(g.from_decomposition(&d), x);
        prop_assert_eq!(d.word.len() as u32, g.length(&x));
    }
}
