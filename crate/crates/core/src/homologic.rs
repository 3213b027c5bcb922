//! Odd elements `x` of `l` with `[x, x] = 0`.

use std::collections::BTreeMap;

use rand::{rngs::StdRng, Rng, SeedableRng};
use serde::Serialize;
use thiserror::Error;

use crate::exactla::{format_q, q, q_frac, Echelon, QVector, Q};
use crate::superbracket::Presentation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologicError {
    #[error("{0} is even; homologic elements are odd")]
    EvenSupport(String),
    #[error("vector of length {found} for a presentation of dimension {expected}")]
    Length { expected: usize, found: usize },
}

/// Checks the support of `x` lies in the odd part of `l`.
pub fn check_odd(x: &QVector, l: &Presentation) -> Result<(), HomologicError> {
    if x.len() != l.dim() {
        return Err(HomologicError::Length { expected: l.dim(), found: x.len() });
    }
    for (i, _) in x.iter() {
        if l.labels[i].parity() != 1 {
            return Err(HomologicError::EvenSupport(l.labels[i].name.clone()));
        }
    }
    Ok(())
}

pub fn self_bracket(x: &QVector, l: &Presentation) -> QVector {
    l.bracket(x, x)
}

pub fn is_homologic(x: &QVector, l: &Presentation) -> Result<bool, HomologicError> {
    check_odd(x, l)?;
    Ok(self_bracket(x, l).is_zero())
}

/// Quadratic form in the coefficients `k_i`: `Σ_{i<=j} c_ij k_i k_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadraticForm {
    /// Label of the component of `[x, x]` this form computes.
    pub component: usize,
    #[serde(serialize_with = "serialize_terms")]
    pub terms: BTreeMap<(usize, usize), Q>,
}

fn serialize_terms<S: serde::Serializer>(t: &BTreeMap<(usize, usize), Q>, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(t.len()))?;
    for ((i, j), c) in t {
        seq.serialize_element(&(i, j, format_q(c)))?;
    }
    seq.end()
}

impl QuadraticForm {
    pub fn evaluate(&self, k: &QVector) -> Q {
        self.terms.iter().map(|(&(i, j), c)| c * k.get(i) * k.get(j)).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn format(&self, l: &Presentation) -> String {
        let mut s = String::new();
        for ((i, j), c) in &self.terms {
            let neg = c < &q(0);
            let abs = if neg { -c.clone() } else { c.clone() };
            s.push_str(if s.is_empty() { if neg { "-" } else { "" } } else if neg { " - " } else { " + " });
            if abs != q(1) {
                s.push_str(&format_q(&abs));
                s.push(' ');
            }
            if i == j {
                s.push_str(&format!("k[{}]^2", l.labels[*i].name));
            } else {
                s.push_str(&format!("k[{}] k[{}]", l.labels[*i].name, l.labels[*j].name));
            }
        }
        s
    }
}

/// The components of `[x, x]` for `x = Σ_{i ∈ support} k_i l_i`, as
/// quadratic forms in the `k_i`; only nonzero forms are returned.
pub fn quadratic_constraints(l: &Presentation, support: &[usize]) -> Result<Vec<QuadraticForm>, HomologicError> {
    for &i in support {
        if l.labels[i].parity() != 1 {
            return Err(HomologicError::EvenSupport(l.labels[i].name.clone()));
        }
    }
    let mut forms: BTreeMap<usize, BTreeMap<(usize, usize), Q>> = BTreeMap::new();
    for (a, &i) in support.iter().enumerate() {
        for &j in &support[a..] {
            let (lo, hi) = (i.min(j), i.max(j));
            // Odd elements: [l_i, l_j] = [l_j, l_i].
            let factor = if i == j { q(1) } else { q(2) };
            for (t, c) in l.table[i][j].iter() {
                let e = forms.entry(t).or_default().entry((lo, hi)).or_insert_with(|| q(0));
                *e += c * &factor;
            }
        }
    }
    Ok(forms
        .into_iter()
        .map(|(component, mut terms)| {
            terms.retain(|_, c| c != &q(0));
            QuadraticForm { component, terms }
        })
        .filter(|f| !f.is_zero())
        .collect())
}

/// Whether two lists of quadratic forms span the same space of forms.
pub fn same_span(a: &[QuadraticForm], b: &[QuadraticForm]) -> bool {
    let mut keys: Vec<(usize, usize)> = a.iter().chain(b).flat_map(|f| f.terms.keys().copied()).collect();
    keys.sort();
    keys.dedup();
    let vec = |f: &QuadraticForm| QVector::from_entries(keys.len(), keys.iter().enumerate().map(|(t, k)| (t, f.terms.get(k).cloned().unwrap_or_else(|| q(0)))));
    let rank = |forms: &[&QuadraticForm]| {
        let mut e = Echelon::new(keys.len());
        for f in forms {
            e.insert(&vec(f)).unwrap();
        }
        e.rank()
    };
    let ra = rank(&a.iter().collect::<Vec<_>>());
    let rb = rank(&b.iter().collect::<Vec<_>>());
    let rab = rank(&a.iter().chain(b).collect::<Vec<_>>());
    ra == rb && ra == rab
}

/// Subsets `S` of `candidates` (given as positions into `candidates`) such
/// that every `x` supported on `S` is homologic, i.e. `[l_i, l_j] = 0` for
/// all `i, j ∈ S`.
pub fn admissible_supports(l: &Presentation, candidates: &[usize]) -> Vec<Vec<usize>> {
    let n = candidates.len();
    assert!(n < 24, "support enumeration is exponential");
    let commute = |a: usize, b: usize| l.table[candidates[a]][candidates[b]].is_zero();
    let mut out = Vec::new();
    for mask in 0u32..1 << n {
        let s: Vec<usize> = (0..n).filter(|&t| mask >> t & 1 == 1).collect();
        if s.iter().all(|&a| s.iter().all(|&b| commute(a, b))) {
            out.push(s);
        }
    }
    out
}

/// Which exact supports (sets of nonzero coefficients) admit homologic
/// elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportClassification {
    /// Supports on which every element is homologic.
    pub identically: Vec<Vec<usize>>,
    /// Supports on which no element is homologic: some component of
    /// `[x, x]` restricts to a single monomial.
    pub excluded: Vec<Vec<usize>>,
    /// Neither of the above; these need a finer look.
    pub undecided: Vec<Vec<usize>>,
}

/// Classifies every subset of `candidates` (as positions into it).
pub fn classify_supports(l: &Presentation, candidates: &[usize]) -> Result<SupportClassification, HomologicError> {
    let n = candidates.len();
    assert!(n < 24, "support enumeration is exponential");
    let mut out = SupportClassification { identically: Vec::new(), excluded: Vec::new(), undecided: Vec::new() };
    for mask in 0u32..1 << n {
        let s: Vec<usize> = (0..n).filter(|&t| mask >> t & 1 == 1).collect();
        let support: Vec<usize> = s.iter().map(|&t| candidates[t]).collect();
        let forms = quadratic_constraints(l, &support)?;
        if forms.is_empty() {
            out.identically.push(s);
        } else if forms.iter().any(|f| f.terms.len() == 1) {
            out.excluded.push(s);
        } else {
            out.undecided.push(s);
        }
    }
    Ok(out)
}

/// Sample grid used for every family parameter.
pub fn sample_grid() -> Vec<Q> {
    vec![q(-2), q(-1), q(1), q(2), q_frac(1, 2)]
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub points: usize,
    /// Parameter values at which the family is not homologic.
    pub failures: Vec<Vec<String>>,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Evaluates a parametrised family on the full grid of `grid_params`
/// parameters, with the remaining `free_params` drawn at random for each
/// grid point, plus `random` fully random points. `domain` filters out
/// points outside the family's parameter domain.
pub fn verify_family(
    l: &Presentation,
    grid_params: usize,
    free_params: usize,
    random: usize,
    seed: u64,
    domain: impl Fn(&[Q]) -> bool,
    family: impl Fn(&[Q]) -> QVector,
) -> Result<FamilyReport, HomologicError> {
    let grid = sample_grid();
    let mut rng = StdRng::seed_from_u64(seed);
    let rand_q = |rng: &mut StdRng| {
        let num: i64 = rng.gen_range(-9..=9);
        let den: i64 = rng.gen_range(1..=7);
        q_frac(num, den)
    };
    let mut points: Vec<Vec<Q>> = Vec::new();
    let total = grid.len().pow(grid_params as u32);
    for mut idx in 0..total {
        let mut p = Vec::with_capacity(grid_params + free_params);
        for _ in 0..grid_params {
            p.push(grid[idx % grid.len()].clone());
            idx /= grid.len();
        }
        for _ in 0..free_params {
            p.push(rand_q(&mut rng));
        }
        points.push(p);
    }
    for _ in 0..random {
        points.push((0..grid_params + free_params).map(|_| rand_q(&mut rng)).collect());
    }
    let mut checked = 0;
    let mut failures = Vec::new();
    for p in points {
        if !domain(&p) {
            continue;
        }
        checked += 1;
        if !is_homologic(&family(&p), l)? {
            failures.push(p.iter().map(format_q).collect());
        }
    }
    Ok(FamilyReport { points: checked, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cecomplex::Complex;
    use crate::liealg::{adjoint_module, nilpotent_part};
    use crate::rootsys::{CartanType, RootSystem};
    use crate::superbracket::{induced_bracket, BracketAlgebra, Classes};
    use proptest::prelude::*;
    use rand::Rng;

    fn setup(t: &str) -> (BracketAlgebra, Classes, Presentation) {
        let r = RootSystem::new(t.parse::<CartanType>().unwrap());
        let n = nilpotent_part(&r);
        let alg = BracketAlgebra::new(Complex::new(n.clone(), adjoint_module(&n)).unwrap()).unwrap();
        let classes = Classes::canonical(alg.complex().cohomology());
        let p = induced_bracket(&alg, &classes).unwrap();
        (alg, classes, p)
    }

    fn odd_labels(p: &Presentation) -> Vec<usize> {
        (0..p.dim()).filter(|&i| p.labels[i].parity() == 1).collect()
    }

    #[test]
    fn zero_is_homologic_and_even_is_rejected() {
        let (_, _, p) = setup("A2");
        assert_eq!(is_homologic(&QVector::zeros(p.dim()), &p), Ok(true));
        let even = (0..p.dim()).find(|&i| p.labels[i].parity() == 0).unwrap();
        assert!(matches!(is_homologic(&QVector::unit(p.dim(), even), &p), Err(HomologicError::EvenSupport(_))));
    }

    #[test]
    fn forms_evaluate_to_self_bracket() {
        let (_, _, p) = setup("G2");
        let odd = odd_labels(&p);
        let forms = quadratic_constraints(&p, &odd).unwrap();
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..10 {
            let x = QVector::from_entries(p.dim(), odd.iter().map(|&i| (i, q(rng.gen_range(-3..=3)))));
            let xx = self_bracket(&x, &p);
            for f in &forms {
                assert_eq!(f.evaluate(&x), xx.get(f.component));
            }
            let covered: Vec<usize> = forms.iter().map(|f| f.component).collect();
            assert!(xx.iter().all(|(t, _)| covered.contains(&t)));
        }
    }

    #[test]
    fn singletons_with_zero_square() {
        let (_, _, p) = setup("G2");
        for i in odd_labels(&p) {
            let forms = quadratic_constraints(&p, &[i]).unwrap();
            assert_eq!(forms.is_empty(), p.table[i][i].is_zero());
        }
    }

    #[test]
    fn same_span_detects_recombination() {
        let f = |terms: &[((usize, usize), i64)]| QuadraticForm { component: 0, terms: terms.iter().map(|&(k, c)| (k, q(c))).collect() };
        let a = vec![f(&[((0, 4), 1), ((1, 2), -1)]), f(&[((1, 4), 1), ((2, 3), 1)])];
        let b = vec![f(&[((0, 4), 2), ((1, 2), -2), ((1, 4), 1), ((2, 3), 1)]), f(&[((1, 4), -1), ((2, 3), -1)])];
        assert!(same_span(&a, &b));
        assert!(!same_span(&a, &b[..1]));
    }

    #[test]
    fn admissible_supports_are_commuting_sets() {
        let (_, _, p) = setup("A2");
        let h2: Vec<usize> = (0..p.dim()).filter(|&i| p.labels[i].degree == 2).collect();
        let sets = admissible_supports(&p, &h2);
        assert!(sets.contains(&vec![]));
        for s in &sets {
            let support: Vec<usize> = s.iter().map(|&t| h2[t]).collect();
            assert!(quadratic_constraints(&p, &support).unwrap().is_empty());
        }
        assert_eq!(classify_supports(&p, &h2).unwrap().identically, sets);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(30))]

        #[test]
        fn class_level_agrees_with_chain_level(seed in any::<u64>()) {
            let (alg, classes, p) = setup("A2");
            let mut rng = StdRng::seed_from_u64(seed);
            let odd = odd_labels(&p);
            let x = QVector::from_entries(p.dim(), odd.iter().map(|&i| (i, q(rng.gen_range(-2..=2)))));
            let mut rep = crate::superbracket::SuperElement::new();
            for (i, c) in x.iter() {
                rep.add(&classes.reps()[i].scaled(c));
            }
            let sq = rep.bracket(&rep);
            let chain_level = sq.components().all(|c| alg.complex().is_coboundary(c));
            prop_assert_eq!(is_homologic(&x, &p).unwrap(), chain_level);
        }

        #[test]
        fn scaling_invariance(seed in any::<u64>(), num in 1i64..5, den in 1i64..5) {
            let (_, _, p) = setup("A2");
            let mut rng = StdRng::seed_from_u64(seed);
            let odd = odd_labels(&p);
            let x = QVector::from_entries(p.dim(), odd.iter().map(|&i| (i, q(rng.gen_range(-1..=1)))));
            let y = x.scaled(&q_frac(-num, den));
            prop_assert_eq!(is_homologic(&x, &p).unwrap(), is_homologic(&y, &p).unwrap());
        }
    }
}
