use liecohom::cli::fixtures::{fixture_basis, FixtureSet};
use liecohom::exactla::{q, QVector, Q};
use liecohom::homologic::{is_homologic, verify_family};
use liecohom::superbracket::Presentation;

fn vector(p: &Presentation, terms: &[(&str, Q)]) -> QVector {
    let mut v = QVector::zeros(p.dim());
    for (n, c) in terms {
        v.add_at(p.index_of(n).unwrap(), c);
    }
    v
}

const Y_A: [&str; 9] = ["h2_4", "h2_6", "h4_2", "h4_3", "h4_5", "h4_6", "h4_7", "h6_1", "h6_2"];

fn with_y(p: &Presentation, v: &[Q], from: usize, fixed: &[(&str, Q)]) -> QVector {
    let mut terms: Vec<(&str, Q)> = fixed.to_vec();
    for (k, n) in Y_A.iter().enumerate() {
        terms.push((n, v[from + k].clone()));
    }
    vector(p, &terms)
}

#[test]
fn g2_families_without_h0() {
    let b = fixture_basis(&FixtureSet::g2()).unwrap();
    let p = &b.presentation;
    // k2_1 h2_1 + k2_5 h2_5 + k4_1 h4_1 + k4_4 h4_4 with k2_1 k4_4 + k2_5 k4_1 = 0:
    // parametrised by (k2_1, k2_5, t) with k4_1 = t k2_1, k4_4 = -t k2_5.
    let r = verify_family(p, 3, Y_A.len(), 20, 7, |_| true, |v| {
        let (a, e, t) = (&v[0], &v[1], &v[2]);
        with_y(p, v, 3, &[("h2_1", a.clone()), ("h2_5", e.clone()), ("h4_1", t * a), ("h4_4", -(t * e))])
    })
    .unwrap();
    assert!(r.passed(), "{:?}", r.failures);
    let two: [[&str; 2]; 3] = [["h2_2", "h4_1"], ["h2_2", "h2_7"], ["h2_3", "h2_7"]];
    for [s, t] in two {
        let r = verify_family(p, 2, Y_A.len(), 20, 8, |_| true, |v| {
            with_y(p, v, 2, &[(s, v[0].clone()), (t, v[1].clone())])
        })
        .unwrap();
        assert!(r.passed(), "{s} {t}: {:?}", r.failures);
    }
    let three: [[&str; 3]; 2] = [["h2_1", "h2_3", "h4_1"], ["h2_5", "h2_7", "h4_4"]];
    for [s, t, u] in three {
        let r = verify_family(p, 3, Y_A.len(), 20, 9, |_| true, |v| {
            with_y(p, v, 3, &[(s, v[0].clone()), (t, v[1].clone()), (u, v[2].clone())])
        })
        .unwrap();
        assert!(r.passed(), "{s} {t} {u}: {:?}", r.failures);
    }
}

#[test]
fn g2_constraint_violation_is_detected() {
    let b = fixture_basis(&FixtureSet::g2()).unwrap();
    let p = &b.presentation;
    let x = vector(p, &[("h2_1", q(1)), ("h2_5", q(1)), ("h4_1", q(1)), ("h4_4", q(1))]);
    assert!(!is_homologic(&x, p).unwrap());
    let x = vector(p, &[("h2_1", q(1)), ("h2_5", q(1)), ("h4_1", q(1)), ("h4_4", q(-1))]);
    assert!(is_homologic(&x, p).unwrap());
}

#[test]
fn g2_first_family_with_h0() {
    let b = fixture_basis(&FixtureSet::g2()).unwrap();
    let p = &b.presentation;
    let x = vector(p, &[("h0_1", q(1)), ("h2_2", q(1)), ("h2_3", q(1)), ("h4_3", q(540))]);
    assert!(is_homologic(&x, p).unwrap());
    // h4_3 is not free once h0_1 is present.
    let x = vector(p, &[("h0_1", q(1)), ("h4_3", q(1))]);
    assert!(!is_homologic(&x, p).unwrap());
}

#[test]
fn sl3_mixed_h2() {
    let b = fixture_basis(&FixtureSet::sl3()).unwrap();
    let p = &b.presentation;
    // ae = bc and be = -cd: with b, c, e free and e != 0, a = bc/e, d = -be/c.
    let r = verify_family(p, 3, 0, 20, 11, |v| v[1] != q(0) && v[2] != q(0), |v| {
        let (bb, c, e) = (&v[0], &v[1], &v[2]);
        vector(p, &[("h2_1", bb * c / e), ("h2_2", bb.clone()), ("h2_3", c.clone()), ("h2_4", -(bb * e) / c), ("h2_5", e.clone())])
    })
    .unwrap();
    assert!(r.passed(), "{:?}", r.failures);
    for n in ["h2_1", "h2_2", "h2_3", "h2_4", "h2_5"] {
        assert!(is_homologic(&vector(p, &[(n, q(3))]), p).unwrap(), "{n}");
    }
}
