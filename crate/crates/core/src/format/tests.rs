use proptest::prelude::*;

use super::*;
use crate::corpus::{all_categories, morita_certificate, morita_target, shift_modules};
use crate::dgcat::delta1;
use crate::dgmod::verify_morita;
use crate::pretr::cone;
use crate::Verdict;

fn round_trip<T: Serialize + for<'de> Deserialize<'de> + PartialEq + std::fmt::Debug>(v: &T) -> String {
    let text = to_canonical_json(v);
    let back: T = serde_json::from_str(&text).unwrap();
    assert_eq!(&back, v);
    assert_eq!(to_canonical_json(&back), text);
    text
}

#[test]
fn corpus_categories_round_trip() {
    for (name, t) in all_categories() {
        let data = category_to_data(&t);
        round_trip(&data);
        let back = category_from_data(&name, &data).unwrap();
        assert_eq!(&back, t.as_ref(), "{name}");
    }
}

#[test]
fn delta1_text() {
    let text = to_canonical_json(&category_to_data(&delta1()));
    let expected = r#"{
  "comp": {
    "0|0|0": {
      "0,0": [
        [
          0,
          0,
          0,
          "1"
        ]
      ]
    },
    "0|0|1": {
      "0,0": [
        [
          0,
          0,
          0,
          "1"
        ]
      ]
    },
    "0|1|1": {
      "0,0": [
        [
          0,
          0,
          0,
          "1"
        ]
      ]
    },
    "1|1|1": {
      "0,0": [
        [
          0,
          0,
          0,
          "1"
        ]
      ]
    }
  },
  "homs": {
    "0|0": {
      "dims": {
        "0": 1
      }
    },
    "0|1": {
      "dims": {
        "0": 1
      }
    },
    "1|1": {
      "dims": {
        "0": 1
      }
    }
  },
  "objects": [
    "0",
    "1"
  ],
  "units": {
    "0": [
      "1"
    ],
    "1": [
      "1"
    ]
  }
}
"#;
    assert_eq!(text, expected);
}

#[test]
fn rejects_bad_files() {
    let mut data = category_to_data(&crate::dgcat::square_zero_algebra());
    data.units.insert("*".into(), vec![Scalar::one(), Scalar::one()]);
    let e = category_from_data("t", &data).unwrap_err();
    assert!(e.to_string().contains("unit not closed"), "{e}");

    let text = r#"{"objects": ["a"], "units": {"a": []}, "colour": 1}"#;
    let e = serde_json::from_str::<CategoryData>(text).unwrap_err();
    assert!(e.to_string().contains("colour"), "{e}");
    assert_eq!(e.line(), 1);

    let text = r#"{"objects": ["a"], "homs": {"a|b": {"dims": {"0": 1}}}, "units": {"a": []}}"#;
    let e = category_from_data("t", &serde_json::from_str(text).unwrap()).unwrap_err();
    assert_eq!(e.location, "t.homs.a|b");

    let text = r#"{"dims": {"0": 1, "1": 1}, "d": {"0": [["1", "2"]]}}"#;
    let e = complex_from_data("c", &serde_json::from_str(text).unwrap()).unwrap_err();
    assert_eq!(e.location, "c.d.0");
    assert!(serde_json::from_str::<ComplexData>(r#"{"dims": {}, "d": {"0": [["x"]]}}"#).is_err());
}

#[test]
fn twisted_and_module_round_trip() {
    let t = Arc::new(delta1());
    let e = |x| TwistedComplex::embed(t.clone(), x);
    let f = TwistedHom::new(e(0), e(1), 0, Entries::from([((0, 0), Element::new(0, vec![Scalar::one()]))])).unwrap();
    let c = cone(&f).unwrap();
    let data = twisted_to_data(&c, "delta1");
    round_trip(&data);
    assert_eq!(data.q.keys().collect::<Vec<_>>(), vec!["0->1"]);
    assert_eq!(twisted_from_data("k", &data, t.clone()).unwrap(), c);

    let inline = inline_morphism_to_data(&f, "delta1");
    round_trip(&inline);
    assert_eq!(inline_morphism_from_data("f", &inline, t.clone()).unwrap(), f);

    let m = crate::pretr::alpha(&c);
    let data = module_to_data(&m, "delta1");
    round_trip(&data);
    assert_eq!(module_from_data("m", &data, t.clone()).unwrap(), m);

    let g = crate::pretr::alpha_map(&f);
    let data = module_map_to_data(&g);
    let back = module_map_from_data("g", &data, g.source().clone(), g.target().clone()).unwrap();
    assert_eq!(back, g);
}

#[test]
fn morita_bundle_round_trip() {
    let mc = morita_target();
    let cert = morita_certificate(&mc, false);
    let fdata = functor_to_data(&cert.functor, "k", "T");
    round_trip(&fdata);
    let f = functor_from_data("F", &fdata, cert.functor.source().clone(), cert.functor.target().clone()).unwrap();
    assert_eq!(f, cert.functor);
    let data = morita_to_data(&cert, "F", "T");
    round_trip(&data);
    let back = morita_from_data("m", &data, f).unwrap();
    assert_eq!(back, cert);
    assert_eq!(verify_morita(&back).verdict(), Verdict::Pass);
}

#[test]
fn module_category_round_trip() {
    let t = shift_modules(1).category().clone();
    let data = category_to_data(&t);
    assert_eq!(&category_from_data("p", &data).unwrap(), t.as_ref());
}

fn complex_strategy() -> impl Strategy<Value = CochainComplex> {
    // k^a -> k^b with a random matrix, at a random degree
    (-3i32..=3, 0usize..=3, 0usize..=3, prop::collection::vec(-5i64..=5, 9), 1i64..=4).prop_map(|(n, a, b, v, den)| {
        let mut m = Matrix::zero(b, a);
        for i in 0..b {
            for j in 0..a {
                m.set(i, j, Scalar::from_frac(v[i * 3 + j], den));
            }
        }
        CochainComplex::new([(n, a), (n + 1, b)], [(n, m)]).unwrap()
    })
}

proptest! {
    #[test]
    fn complexes_round_trip(c in complex_strategy()) {
        let data = complex_to_data(&c);
        let text = to_canonical_json(&data);
        let parsed: ComplexData = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(to_canonical_json(&parsed), text);
        prop_assert_eq!(complex_from_data("c", &parsed).unwrap(), c);
    }
}
