use liecohom::cecomplex::Complex;
use liecohom::cli::fixtures::{fixture_basis, match_basis, verify_fixtures, FixtureError, FixtureSet, FixtureTerm};
use liecohom::liealg::{adjoint_module, nilpotent_part};
use liecohom::superbracket::Classes;

fn complex(fx: &FixtureSet) -> Complex {
    let n = nilpotent_part(&fx.root_system().unwrap());
    Complex::new(n.clone(), adjoint_module(&n)).unwrap()
}

#[test]
fn bundled_fixtures_replay() {
    for fx in [FixtureSet::sl3(), FixtureSet::g2()] {
        let r = verify_fixtures(&fx).unwrap();
        assert!(r.passed(), "{}: {:?}", fx.algebra, r.failed_entries().next());
        assert_eq!(r.signs.as_ref().unwrap().iter().filter(|&&s| s == -1).count(), 0);
    }
}

#[test]
fn quoted_entry_h3_4_h4_3() {
    let b = fixture_basis(&FixtureSet::g2()).unwrap();
    let p = &b.presentation;
    let v = &p.table[p.index_of("h3_4").unwrap()][p.index_of("h4_3").unwrap()];
    assert_eq!(p.format_vector(v), "-868 h6_1");
}

#[test]
fn identical_conventions_match_with_identity() {
    let fx = FixtureSet::sl3();
    let named = fx.named_cochains(&fx.root_system().unwrap()).unwrap();
    let m = match_basis(&complex(&fx), &named).unwrap();
    assert_eq!(m.tried, 0);
    assert_eq!(m.signs, vec![1; 3]);
}

#[test]
fn injected_flip_is_recovered() {
    let fx = FixtureSet::g2();
    let rs = fx.root_system().unwrap();
    let named = fx.named_cochains(&rs).unwrap();
    let mut flip = vec![1i64; 6];
    flip[2] = -1;
    let flipped: Vec<_> = named.iter().map(|(n, c)| (n.clone(), c.with_basis_signs(&flip, &flip))).collect();
    let cx = complex(&fx);
    assert!(flipped.iter().any(|(_, c)| !cx.is_cocycle(c)));
    let m = match_basis(&cx, &flipped).unwrap();
    // The recovered signs undo the flip up to a global sign.
    let prod: Vec<i64> = m.signs.iter().zip(&flip).map(|(a, b)| a * b).collect();
    assert!(prod.iter().all(|&s| s == prod[0]));
}

#[test]
fn wrong_root_is_named() {
    let mut fx = FixtureSet::g2();
    fx.cochains.get_mut("h1_3").unwrap()[0].e = vec![1, 1];
    let named = fx.named_cochains(&fx.root_system().unwrap()).unwrap();
    let err = match_basis(&complex(&fx), &named).unwrap_err();
    assert_eq!(err.failing, "h1_3");
    assert_eq!(err.best_cocycles, named.len() - 1);
    let mut fx = FixtureSet::g2();
    fx.cochains.get_mut("h2_2").unwrap()[0].coefficient = "-67".into();
    let named = fx.named_cochains(&fx.root_system().unwrap()).unwrap();
    assert_eq!(match_basis(&complex(&fx), &named).unwrap_err().failing, "h2_2");
}

#[test]
fn structural_errors() {
    let mut fx = FixtureSet::sl3();
    fx.cochains.get_mut("h1_1").unwrap()[0].e = vec![2, 1];
    assert!(matches!(fx.named_cochains(&fx.root_system().unwrap()), Err(FixtureError::NotARoot { .. })));
    let mut fx = FixtureSet::sl3();
    fx.cochains.get_mut("h2_1").unwrap()[0].f = vec![vec![1, 0], vec![1, 0]];
    assert!(matches!(fx.named_cochains(&fx.root_system().unwrap()), Err(FixtureError::RepeatedFactor { .. })));
    let mut fx = FixtureSet::sl3();
    fx.cochains.get_mut("h2_1").unwrap().push(FixtureTerm { coefficient: "1/0".into(), e: vec![1, 0], f: vec![vec![0, 1], vec![1, 1]] });
    assert!(matches!(fx.named_cochains(&fx.root_system().unwrap()), Err(FixtureError::Coefficient { .. })));
    assert!(FixtureSet::parse("{\"algebra\": 3}").is_err());
}

#[test]
fn a_non_basis_is_rejected() {
    let mut fx = FixtureSet::sl3();
    let copy = fx.cochains["h2_1"].clone();
    fx.cochains.insert("h2_2".into(), copy);
    let r = verify_fixtures(&fx).unwrap();
    assert!(r.spanning.is_err());
    assert!(!r.passed());
}

#[test]
fn round_trip_is_exact() {
    for fx in [FixtureSet::sl3(), FixtureSet::g2()] {
        let again = FixtureSet::parse(&fx.to_json()).unwrap();
        assert_eq!(again, fx);
        let rs = fx.root_system().unwrap();
        assert_eq!(again.named_cochains(&rs).unwrap(), fx.named_cochains(&rs).unwrap());
    }
}

#[test]
fn exported_canonical_basis_reingests() {
    let fx = FixtureSet::g2();
    let rs = fx.root_system().unwrap();
    let cx = complex(&fx);
    let classes = Classes::canonical(cx.cohomology());
    let named: Vec<_> = classes.labels().iter().map(|l| l.name.clone()).zip(classes.reps().iter().cloned()).collect();
    let out = FixtureSet::from_cochains("G2", &rs, &named);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g2.json");
    liecohom::cli::fixtures::write_fixtures(&path, &out).unwrap();
    let back = FixtureSet::load(&path).unwrap();
    assert_eq!(back.named_cochains(&rs).unwrap(), named);
    for (t, o) in back.cochains.values().flatten().zip(out.cochains.values().flatten()) {
        assert_eq!(t.coefficient, o.coefficient);
    }
}
