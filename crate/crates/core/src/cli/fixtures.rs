//! Named cochains and multiplication tables stored as JSON.

use std::collections::BTreeMap;
use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cecomplex::{Cochain, Complex};
use crate::exactla::{format_q, parse_q, QVector, Q};
use crate::rootsys::{CartanType, RootSystem, Weight};
use crate::superbracket::{induced_bracket, BracketAlgebra, BracketError, Classes, Presentation};

pub const G2_FIXTURES: &str = include_str!("../../fixtures/g2.fixtures.json");
pub const SL3_FIXTURES: &str = include_str!("../../fixtures/sl3.fixtures.json");

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("cannot read fixture file: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed fixture file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown algebra {0}")]
    Algebra(String),
    #[error("{name}: {root:?} is not a positive root")]
    NotARoot { name: String, root: Vec<i64> },
    #[error("{name}: repeated factor {root:?}")]
    RepeatedFactor { name: String, root: Vec<i64> },
    #[error("{name}: bad coefficient {value:?}")]
    Coefficient { name: String, value: String },
    #[error("{name}: terms of different degree")]
    MixedDegree { name: String },
    #[error("table key {0:?} is not of the form \"left,right\"")]
    TableKey(String),
    #[error("unknown cochain {0} in table")]
    UnknownName(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureTerm {
    pub coefficient: String,
    pub e: Vec<i64>,
    pub f: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureSet {
    pub algebra: String,
    pub cochains: IndexMap<String, Vec<FixtureTerm>>,
    /// `"a,b" -> [a, b]` as a combination of names; `{}` is zero.
    #[serde(default)]
    pub tables: IndexMap<String, IndexMap<String, String>>,
    /// Names of diagonal degree-1 classes whose rows follow from weights.
    #[serde(default)]
    pub weight_action: Vec<String>,
}

impl FixtureSet {
    pub fn parse(text: &str) -> Result<Self, FixtureError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, FixtureError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn g2() -> Self {
        Self::parse(G2_FIXTURES).expect("bundled fixtures parse")
    }

    pub fn sl3() -> Self {
        Self::parse(SL3_FIXTURES).expect("bundled fixtures parse")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn root_system(&self) -> Result<RootSystem, FixtureError> {
        let t: CartanType = self.algebra.parse().map_err(|_| FixtureError::Algebra(self.algebra.clone()))?;
        Ok(RootSystem::new(t))
    }

    pub fn cochain(&self, rs: &RootSystem, name: &str) -> Result<Cochain, FixtureError> {
        let terms = self.cochains.get(name).ok_or_else(|| FixtureError::UnknownName(name.to_string()))?;
        let index = |r: &Vec<i64>| {
            rs.root_index(&Weight(r.clone()))
                .ok_or_else(|| FixtureError::NotARoot { name: name.to_string(), root: r.clone() })
        };
        let degree = terms.first().map_or(0, |t| t.f.len());
        let mut out = Cochain::zero(degree);
        for t in terms {
            if t.f.len() != degree {
                return Err(FixtureError::MixedDegree { name: name.to_string() });
            }
            let c = parse_q(&t.coefficient)
                .map_err(|_| FixtureError::Coefficient { name: name.to_string(), value: t.coefficient.clone() })?;
            let a = index(&t.e)?;
            let factors = t.f.iter().map(index).collect::<Result<Vec<_>, _>>()?;
            for (i, r) in t.f.iter().enumerate() {
                if t.f[..i].contains(r) {
                    return Err(FixtureError::RepeatedFactor { name: name.to_string(), root: r.clone() });
                }
            }
            out.add_scaled(&q1(), &Cochain::monomial(c, a, &factors));
        }
        Ok(out)
    }

    pub fn named_cochains(&self, rs: &RootSystem) -> Result<Vec<(String, Cochain)>, FixtureError> {
        self.cochains.keys().map(|n| Ok((n.clone(), self.cochain(rs, n)?))).collect()
    }

    /// Table entries as `(left, right, expected)` with names resolved.
    pub fn table_entries(&self) -> Result<Vec<(String, String, BTreeMap<String, Q>)>, FixtureError> {
        let mut out = Vec::new();
        for (key, value) in &self.tables {
            let (a, b) = key.split_once(',').ok_or_else(|| FixtureError::TableKey(key.clone()))?;
            let mut comb = BTreeMap::new();
            for (name, c) in value {
                if !self.cochains.contains_key(name) {
                    return Err(FixtureError::UnknownName(name.clone()));
                }
                let x = parse_q(c).map_err(|_| FixtureError::Coefficient { name: key.clone(), value: c.clone() })?;
                comb.insert(name.clone(), x);
            }
            for n in [a, b] {
                if !self.cochains.contains_key(n) {
                    return Err(FixtureError::UnknownName(n.to_string()));
                }
            }
            out.push((a.to_string(), b.to_string(), comb));
        }
        Ok(out)
    }

    /// Writes named cochains in the fixture format.
    pub fn from_cochains(algebra: &str, rs: &RootSystem, named: &[(String, Cochain)]) -> Self {
        let root = |i: usize| rs.positive_roots()[i].0.clone();
        let cochains = named
            .iter()
            .map(|(name, c)| {
                let terms = c
                    .terms()
                    .map(|(&(a, w), x)| FixtureTerm {
                        coefficient: format_q(x),
                        e: root(a),
                        f: w.indices().into_iter().map(root).collect(),
                    })
                    .collect();
                (name.clone(), terms)
            })
            .collect();
        FixtureSet { algebra: algebra.to_string(), cochains, tables: IndexMap::new(), weight_action: Vec::new() }
    }

    /// Fills `tables` with every nonzero-degree entry of a presentation.
    pub fn with_table(mut self, p: &Presentation) -> Self {
        for i in 0..p.dim() {
            for j in 0..p.dim() {
                let v = &p.table[i][j];
                let entry = v.iter().map(|(t, c)| (p.labels[t].name.clone(), format_q(c))).collect();
                self.tables.insert(format!("{},{}", p.labels[i].name, p.labels[j].name), entry);
            }
        }
        self
    }
}

fn q1() -> Q {
    crate::exactla::q(1)
}

/// Sign changes `e_β -> ε_β e_β` under which every fixture is a cocycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisMatch {
    pub signs: Vec<i64>,
    /// Position of the assignment in the search order; 0 is the identity.
    pub tried: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchFailure {
    /// First fixture that is not a cocycle under the best assignment.
    pub failing: String,
    /// Number of fixtures that are cocycles under the best assignment.
    pub best_cocycles: usize,
}

pub const MAX_SIGN_SEARCH: usize = 20;

/// Searches `ε ∈ {±1}^N` (with `ε` of the highest root fixed, since `-ε`
/// only rescales each cochain) for an assignment making every named cochain
/// a cocycle of `cx`. Assignments are tried in increasing binary order, so
/// the identity comes first.
pub fn match_basis(cx: &Complex, named: &[(String, Cochain)]) -> Result<BasisMatch, MatchFailure> {
    let n = cx.algebra().dim();
    assert!(n <= MAX_SIGN_SEARCH, "sign search over {n} basis vectors");
    let mut best: Option<(usize, String)> = None;
    let search = if n == 0 { 1 } else { 1usize << (n - 1) };
    for mask in 0..search {
        let signs: Vec<i64> = (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
        let mut ok = 0;
        let mut failing = None;
        for (name, c) in named {
            if cx.is_cocycle(&c.with_basis_signs(&signs, &signs)) {
                ok += 1;
            } else if failing.is_none() {
                failing = Some(name.clone());
            }
        }
        match failing {
            None => return Ok(BasisMatch { signs, tried: mask }),
            Some(f) => {
                if best.as_ref().map_or(true, |(b, _)| ok > *b) {
                    best = Some((ok, f));
                }
            }
        }
    }
    let (best_cocycles, failing) = best.unwrap_or((0, String::new()));
    Err(MatchFailure { failing, best_cocycles })
}

#[derive(Clone, Debug, Serialize)]
pub struct CochainCheck {
    pub name: String,
    pub cocycle: bool,
    pub coboundary: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryCheck {
    pub left: String,
    pub right: String,
    pub expected: String,
    pub computed: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FixtureReport {
    pub algebra: String,
    pub signs: Option<Vec<i64>>,
    pub match_failure: Option<MatchFailure>,
    pub cochains: Vec<CochainCheck>,
    /// `Err` holds the reason the fixtures do not form a basis.
    pub spanning: Result<(), String>,
    pub entries: Vec<EntryCheck>,
    pub weight_rows: Vec<EntryCheck>,
}

impl FixtureReport {
    pub fn cochains_pass(&self) -> bool {
        self.signs.is_some() && self.cochains.iter().all(|c| c.cocycle && !c.coboundary)
    }

    pub fn passed(&self) -> bool {
        self.cochains_pass()
            && self.spanning.is_ok()
            && self.entries.iter().all(|e| e.holds)
            && self.weight_rows.iter().all(|e| e.holds)
    }

    pub fn failed_entries(&self) -> impl Iterator<Item = &EntryCheck> + '_ {
        self.entries.iter().chain(&self.weight_rows).filter(|e| !e.holds)
    }
}

/// The fixture basis after sign matching, with the complex it lives in.
pub struct FixtureBasis {
    pub rs: RootSystem,
    pub algebra: BracketAlgebra,
    pub classes: Classes,
    pub presentation: Presentation,
    pub signs: Vec<i64>,
}

/// Builds the presentation of `l` in the fixture basis.
pub fn fixture_basis(fx: &FixtureSet) -> anyhow::Result<FixtureBasis> {
    let rs = fx.root_system()?;
    let n = crate::liealg::nilpotent_part(&rs);
    let cx = Complex::new(n.clone(), crate::liealg::adjoint_module(&n))?;
    let named = fx.named_cochains(&rs)?;
    let m = match_basis(&cx, &named).map_err(|f| anyhow::anyhow!("no sign assignment makes {} a cocycle", f.failing))?;
    let named: Vec<(String, Cochain)> =
        named.into_iter().map(|(k, c)| (k, c.with_basis_signs(&m.signs, &m.signs))).collect();
    let h = cx.cohomology();
    let alg = BracketAlgebra::new(cx)?;
    let classes = Classes::with_basis(alg.complex(), h, named)?;
    let presentation = induced_bracket(&alg, &classes)?;
    Ok(FixtureBasis { rs, algebra: alg, classes, presentation, signs: m.signs })
}

fn format_named(p: &Presentation, v: &QVector) -> String {
    p.format_vector(v)
}

fn expected_vector(p: &Presentation, comb: &BTreeMap<String, Q>) -> Result<QVector, FixtureError> {
    let mut v = QVector::zeros(p.dim());
    for (name, c) in comb {
        let i = p.index_of(name).ok_or_else(|| FixtureError::UnknownName(name.clone()))?;
        v.set(i, c.clone());
    }
    Ok(v)
}

/// Cocycle, non-coboundary and spanning checks for every fixture cochain,
/// then every table entry and the rows given by weights.
pub fn verify_fixtures(fx: &FixtureSet) -> anyhow::Result<FixtureReport> {
    let rs = fx.root_system()?;
    let n = crate::liealg::nilpotent_part(&rs);
    let cx = Complex::new(n.clone(), crate::liealg::adjoint_module(&n))?;
    let named = fx.named_cochains(&rs)?;
    let mut report = FixtureReport {
        algebra: fx.algebra.clone(),
        signs: None,
        match_failure: None,
        cochains: Vec::new(),
        spanning: Err("not checked".into()),
        entries: Vec::new(),
        weight_rows: Vec::new(),
    };
    let m = match match_basis(&cx, &named) {
        Ok(m) => m,
        Err(f) => {
            report.cochains = named
                .iter()
                .map(|(name, c)| CochainCheck { name: name.clone(), cocycle: cx.is_cocycle(c), coboundary: false })
                .collect();
            report.match_failure = Some(f);
            return Ok(report);
        }
    };
    let named: Vec<(String, Cochain)> =
        named.into_iter().map(|(k, c)| (k, c.with_basis_signs(&m.signs, &m.signs))).collect();
    report.signs = Some(m.signs.clone());
    report.cochains = named
        .iter()
        .map(|(name, c)| CochainCheck { name: name.clone(), cocycle: cx.is_cocycle(c), coboundary: cx.is_coboundary(c) })
        .collect();
    let h = cx.cohomology();
    let alg = BracketAlgebra::new(cx)?;
    let classes = match Classes::with_basis(alg.complex(), h, named) {
        Ok(c) => c,
        Err(e @ (BracketError::NotABasis { .. } | BracketError::BasisNotCocycle(_))) => {
            report.spanning = Err(e.to_string());
            return Ok(report);
        }
        Err(e) => return Err(e.into()),
    };
    report.spanning = Ok(());
    let p = induced_bracket(&alg, &classes)?;
    for (a, b, comb) in fx.table_entries()? {
        let (i, j) = (p.index_of(&a).unwrap(), p.index_of(&b).unwrap());
        let expected = expected_vector(&p, &comb)?;
        let got = &p.table[i][j];
        report.entries.push(EntryCheck {
            left: a,
            right: b,
            expected: format_named(&p, &expected),
            computed: format_named(&p, got),
            holds: got == &expected,
        });
    }
    for c in &fx.weight_action {
        let i = p.index_of(c).ok_or_else(|| FixtureError::UnknownName(c.clone()))?;
        let functional = diagonal_functional(&rs, &classes.reps()[i])
            .ok_or_else(|| anyhow::anyhow!("{c} is not a diagonal degree-1 cochain with additive coefficients"))?;
        for j in 0..p.dim() {
            let w = p.labels[j].weight.as_ref().ok_or_else(|| anyhow::anyhow!("{} has no weight", p.labels[j].name))?;
            let a: Q = w.0.iter().zip(&functional).map(|(x, y)| Q::from_integer((*x).into()) * y).sum();
            let expected = QVector::unit(p.dim(), j).scaled(&a);
            let got = &p.table[i][j];
            report.weight_rows.push(EntryCheck {
                left: c.clone(),
                right: p.labels[j].name.clone(),
                expected: format_named(&p, &expected),
                computed: format_named(&p, got),
                holds: got == &expected,
            });
        }
    }
    Ok(report)
}

/// For `c = Σ_β a(β) e_β ⊗ f^β` with `a` additive on roots, the values of `a`
/// on the simple roots.
pub fn diagonal_functional(rs: &RootSystem, c: &Cochain) -> Option<Vec<Q>> {
    if c.degree() != 1 {
        return None;
    }
    let mut a = vec![Q::from_integer(0.into()); rs.num_positive()];
    for (&(e, w), x) in c.terms() {
        if w.indices() != [e] {
            return None;
        }
        a[e] = x.clone();
    }
    let simple: Vec<Q> = (0..rs.rank()).map(|i| a[rs.root_index(&rs.simple_root(i)).unwrap()].clone()).collect();
    for (k, r) in rs.positive_roots().iter().enumerate() {
        let lin: Q = r.0.iter().zip(&simple).map(|(x, y)| Q::from_integer((*x).into()) * y).sum();
        if lin != a[k] {
            return None;
        }
    }
    Some(simple)
}

pub fn write_fixtures(path: &Path, fx: &FixtureSet) -> Result<(), FixtureError> {
    std::fs::write(path, fx.to_json())?;
    Ok(())
}
