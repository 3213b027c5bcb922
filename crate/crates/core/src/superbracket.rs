//! The superbracket on `L = Π(C^{·+1}(n; n))` and the induced bracket on
//! cohomology classes.
//!
//! `a·b` inserts the value of `b` into the last slot of `a` and wedges the
//! remaining forms of `b` on the right; `[a,b] = a·b - (-1)^{p(a)p(b)} b·a`
//! with `p(a) = deg a + 1 mod 2`. The structure cochain `μ = Σ c^k_{ij} e_k ⊗
//! f^i∧f^j` satisfies `dc = [μ, c]`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cecomplex::{degree_one_cocycles, CohomologySpace, Complex, ComplexError, Cochain, Wedge};
use crate::exactla::{format_q, q, Echelon, QVector, Q};
use crate::liealg::{GradedLieAlgebra, ModuleKind};
use crate::rootsys::{RootSystem, Weight};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BracketError {
    #[error("the superbracket is defined only on cochains with values in the adjoint module")]
    NotAdjoint,
    #[error("bracket of cocycles {0} and {1} is not a cocycle")]
    NotCocycle(String, String),
    #[error("{0} is not a cocycle")]
    BasisNotCocycle(String),
    #[error("supplied classes do not form a basis of H^{degree}: rank {rank}, expected {expected}")]
    NotABasis { degree: usize, rank: usize, expected: usize },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Parity in `Π(C)` of a cochain of the given degree.
pub fn parity(degree: usize) -> usize {
    (degree + 1) % 2
}

/// Degree in `l` (`l_j = Π(H^{j+1})`) of a cochain degree.
pub fn l_degree(degree: usize) -> i64 {
    degree as i64 - 1
}

pub fn dot(a: &Cochain, b: &Cochain) -> Cochain {
    let na = a.degree();
    if na == 0 {
        return Cochain::zero(b.degree().saturating_sub(1));
    }
    let mut out = Cochain::zero(na - 1 + b.degree());
    for (&(ea, wa), x) in a.terms() {
        for (&(eb, wb), y) in b.terms() {
            if !wa.contains(eb) {
                continue;
            }
            // f^{eb} sits at position k (1-based) of wa: sign (-1)^{na-k}.
            let k = wa.rank_below(eb) + 1;
            let s = if (na - k) % 2 == 0 { 1 } else { -1 };
            let Some((s2, w)) = wa.without(eb).wedge(wb) else { continue };
            out.add_term(ea, w, &(x * y * q(s * s2)));
        }
    }
    out
}

pub fn bracket(a: &Cochain, b: &Cochain) -> Cochain {
    let mut out = dot(a, b);
    let sign = if parity(a.degree()) * parity(b.degree()) == 1 { 1 } else { -1 };
    // a·b - (-1)^{p(a)p(b)} b·a
    let ba = dot(b, a);
    if !ba.is_zero() {
        if out.is_zero() && out.degree() != ba.degree() {
            out = Cochain::zero(ba.degree());
        }
        out.add_scaled(&q(sign), &ba);
    }
    out
}

/// `μ ∈ C^2(n; n)`, the bracket of `n` as a cochain.
pub fn structure_cochain(n: &GradedLieAlgebra) -> Cochain {
    let terms = n
        .structure_constants()
        .into_iter()
        .map(|(i, j, k, c)| ((k, Wedge(1u128 << i | 1u128 << j)), c));
    Cochain::from_terms(2, terms)
}

/// Element of `L`, possibly inhomogeneous; components keyed by cochain degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuperElement {
    components: BTreeMap<usize, Cochain>,
}

impl SuperElement {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn homogeneous(c: Cochain) -> Self {
        let mut out = Self::new();
        out.add(&c);
        out
    }

    pub fn add(&mut self, c: &Cochain) {
        if c.is_zero() {
            return;
        }
        let e = self.components.entry(c.degree()).or_insert_with(|| Cochain::zero(c.degree()));
        e.add_scaled(&q(1), c);
        if e.is_zero() {
            self.components.remove(&c.degree());
        }
    }

    pub fn component(&self, degree: usize) -> Option<&Cochain> {
        self.components.get(&degree)
    }

    pub fn components(&self) -> impl Iterator<Item = &Cochain> + '_ {
        self.components.values()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn bracket(&self, other: &SuperElement) -> SuperElement {
        let mut out = SuperElement::new();
        for a in self.components.values() {
            for b in other.components.values() {
                out.add(&bracket(a, b));
            }
        }
        out
    }
}

/// `C(n; n)` together with its superbracket.
#[derive(Clone, Debug)]
pub struct BracketAlgebra {
    cx: Complex,
    mu: Cochain,
}

impl BracketAlgebra {
    pub fn new(cx: Complex) -> Result<Self, BracketError> {
        if cx.module().kind() != ModuleKind::Adjoint {
            return Err(BracketError::NotAdjoint);
        }
        let mu = structure_cochain(cx.algebra());
        Ok(BracketAlgebra { cx, mu })
    }

    pub fn complex(&self) -> &Complex {
        &self.cx
    }

    pub fn mu(&self) -> &Cochain {
        &self.mu
    }

    pub fn dot(&self, a: &Cochain, b: &Cochain) -> Cochain {
        dot(a, b)
    }

    pub fn bracket(&self, a: &Cochain, b: &Cochain) -> Cochain {
        bracket(a, b)
    }
}

/// Basis element of `l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Label {
    pub name: String,
    /// Cochain degree; the `l`-degree is one less.
    pub degree: usize,
    pub weight: Option<Weight>,
}

impl Label {
    pub fn parity(&self) -> usize {
        parity(self.degree)
    }
}

/// Writes cocycles in a chosen basis of cohomology classes.
#[derive(Clone, Debug)]
pub struct Classes {
    h: CohomologySpace,
    /// (degree, weight) -> (degree index, block index, global offset)
    blocks: HashMap<(usize, Weight), (usize, usize, usize)>,
    canonical_dim: usize,
    labels: Vec<Label>,
    reps: Vec<Cochain>,
    /// Present when the basis is not the canonical one: canonical coordinates
    /// of the chosen basis, tracked.
    change: Option<Echelon>,
}

impl Classes {
    /// Our own representatives, named `h{k}_{j}` with `j` counted from 1.
    pub fn canonical(h: CohomologySpace) -> Self {
        let mut labels = Vec::new();
        let mut reps = Vec::new();
        for deg in &h.degrees {
            for (j, (w, r)) in deg.representatives().into_iter().enumerate() {
                labels.push(Label { name: format!("h{}_{}", deg.degree, j + 1), degree: deg.degree, weight: Some(w) });
                reps.push(r);
            }
        }
        let (blocks, canonical_dim) = index_blocks(&h);
        Classes { h, blocks, canonical_dim, labels, reps, change: None }
    }

    /// Classes of the supplied cocycles, which must form a basis of `H`.
    pub fn with_basis(cx: &Complex, h: CohomologySpace, basis: Vec<(String, Cochain)>) -> Result<Self, BracketError> {
        let (blocks, canonical_dim) = index_blocks(&h);
        let mut out = Classes { h, blocks, canonical_dim, labels: Vec::new(), reps: Vec::new(), change: None };
        let mut ech = Echelon::tracking(canonical_dim);
        for (name, c) in &basis {
            if !cx.is_cocycle(c) {
                return Err(BracketError::BasisNotCocycle(name.clone()));
            }
            let v = out.canonical_coords(cx, c).map_err(|_| BracketError::BasisNotCocycle(name.clone()))?;
            ech.insert(&v).expect("uniform lengths");
        }
        for (k, deg) in out.h.degrees.iter().enumerate() {
            let given = basis.iter().filter(|(_, c)| c.degree() == k).count();
            let rank = {
                let mut e = Echelon::new(canonical_dim);
                for (_, c) in basis.iter().filter(|(_, c)| c.degree() == k) {
                    e.insert(&out.canonical_coords(cx, c).unwrap()).unwrap();
                }
                e.rank()
            };
            if rank != deg.dim() || given != deg.dim() {
                return Err(BracketError::NotABasis { degree: k, rank, expected: deg.dim() });
            }
        }
        for (name, c) in basis {
            out.labels.push(Label { name, degree: c.degree(), weight: cx.weight_of(&c) });
            out.reps.push(c);
        }
        out.change = Some(ech);
        Ok(out)
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn reps(&self) -> &[Cochain] {
        &self.reps
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn cohomology(&self) -> &CohomologySpace {
        &self.h
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.labels.iter().position(|l| l.name == name)
    }

    fn canonical_coords(&self, cx: &Complex, c: &Cochain) -> Result<QVector, ComplexError> {
        let mut v = QVector::zeros(self.canonical_dim);
        for (w, part) in cx.split_by_weight(c) {
            let &(di, bi, off) = match self.blocks.get(&(c.degree(), w)) {
                Some(x) => x,
                None => return Err(ComplexError::NotCocycle),
            };
            let block = &self.h.degrees[di].blocks[bi];
            for (t, x) in block.classify(&part)?.into_iter().enumerate() {
                v.set(off + t, x);
            }
        }
        Ok(v)
    }

    /// Coordinates of the class of a cocycle over the chosen basis.
    pub fn coords(&self, cx: &Complex, c: &Cochain) -> Result<QVector, ComplexError> {
        let v = self.canonical_coords(cx, c)?;
        match &self.change {
            None => Ok(v),
            Some(e) => Ok(e.express(&v).expect("tracking").expect("basis spans")),
        }
    }
}

fn index_blocks(h: &CohomologySpace) -> (HashMap<(usize, Weight), (usize, usize, usize)>, usize) {
    let mut map = HashMap::new();
    let mut off = 0;
    for (di, deg) in h.degrees.iter().enumerate() {
        for (bi, b) in deg.blocks.iter().enumerate() {
            map.insert((deg.degree, b.weight.clone()), (di, bi, off));
            off += b.dim();
        }
    }
    (map, off)
}

/// Structure constants of `l` on a basis of classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub labels: Vec<Label>,
    /// `table[i][j] = [l_i, l_j]` over `labels`.
    pub table: Vec<Vec<QVector>>,
}

/// Brackets every pair of basis representatives and reads off the classes.
pub fn induced_bracket(alg: &BracketAlgebra, classes: &Classes) -> Result<Presentation, BracketError> {
    let cx = alg.complex();
    let n = classes.len();
    let top = cx.top_degree();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let entries: Result<Vec<QVector>, BracketError> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (a, b) = (&classes.reps()[i], &classes.reps()[j]);
            if a.degree() + b.degree() == 0 || a.degree() + b.degree() - 1 > top {
                return Ok(QVector::zeros(n));
            }
            let c = alg.bracket(a, b);
            if c.is_zero() {
                return Ok(QVector::zeros(n));
            }
            classes.coords(cx, &c).map_err(|_| {
                BracketError::NotCocycle(classes.labels()[i].name.clone(), classes.labels()[j].name.clone())
            })
        })
        .collect();
    let entries = entries?;
    let table = entries.chunks(n.max(1)).map(<[QVector]>::to_vec).collect();
    Ok(Presentation { labels: classes.labels().to_vec(), table: if n == 0 { Vec::new() } else { table } })
}

impl Presentation {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.labels.iter().position(|l| l.name == name)
    }

    pub fn bracket(&self, x: &QVector, y: &QVector) -> QVector {
        let mut out = QVector::zeros(self.dim());
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                out.add_scaled(&(a * b), &self.table[i][j]);
            }
        }
        out
    }

    /// `[a,b] = -(-1)^{p(a)p(b)} [b,a]` on basis pairs.
    pub fn is_super_antisymmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let s = if self.labels[i].parity() * self.labels[j].parity() == 1 { -1 } else { 1 };
                self.table[i][j] == self.table[j][i].scaled(&q(-s))
            })
        })
    }

    /// `[a,[b,c]] = [[a,b],c] + (-1)^{p(a)p(b)} [b,[a,c]]` on basis triples.
    pub fn super_jacobi_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim();
        let unit = |i| QVector::unit(n, i);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let lhs = self.bracket(&unit(i), &self.table[j][k]);
                    let mut rhs = self.bracket(&self.table[i][j], &unit(k));
                    let s = if self.labels[i].parity() * self.labels[j].parity() == 1 { -1 } else { 1 };
                    rhs.add_scaled(&q(s), &self.bracket(&unit(j), &self.table[i][k]));
                    if lhs != rhs {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    /// Brackets add `l`-degrees and weights.
    pub fn is_graded(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                self.table[i][j].iter().all(|(k, _)| {
                    let (a, b, c) = (&self.labels[i], &self.labels[j], &self.labels[k]);
                    let deg_ok = c.degree + 1 == a.degree + b.degree;
                    let w_ok = match (&a.weight, &b.weight, &c.weight) {
                        (Some(x), Some(y), Some(z)) => &(x + y) == z,
                        _ => true,
                    };
                    deg_ok && w_ok
                })
            })
        })
    }

    fn span_of_brackets(&self, left: &[QVector], right: &[QVector]) -> Vec<QVector> {
        let mut ech = Echelon::new(self.dim());
        for x in left {
            for y in right {
                let v = self.bracket(x, y);
                if !v.is_zero() {
                    ech.insert(&v).expect("uniform lengths");
                }
            }
        }
        ech.basis()
    }

    fn full_basis(&self) -> Vec<QVector> {
        (0..self.dim()).map(|i| QVector::unit(self.dim(), i)).collect()
    }

    /// `l_(0) = l`, `l_(i+1) = [l_(i), l_(i)]`, until the dimension repeats.
    pub fn derived_series(&self) -> Vec<Vec<QVector>> {
        self.series(|p, cur| p.span_of_brackets(cur, cur))
    }

    /// `l_(0) = l`, `l_(i+1) = [l, l_(i)]`, until the dimension repeats.
    pub fn lower_central_series(&self) -> Vec<Vec<QVector>> {
        let all = self.full_basis();
        self.series(move |p, cur| p.span_of_brackets(&all, cur))
    }

    fn series(&self, step: impl Fn(&Self, &[QVector]) -> Vec<QVector>) -> Vec<Vec<QVector>> {
        let mut out = vec![self.full_basis()];
        loop {
            let next = step(self, out.last().unwrap());
            if next.len() == out.last().unwrap().len() {
                return out;
            }
            let done = next.is_empty();
            out.push(next);
            if done {
                return out;
            }
        }
    }

    /// Rendering of one entry as a combination of names, e.g. `-5/18 h2_2 + h2_4`.
    pub fn format_vector(&self, v: &QVector) -> String {
        format_combination(v.iter().map(|(i, c)| (self.labels[i].name.as_str(), c)))
    }
}

pub fn format_combination<'a>(terms: impl Iterator<Item = (&'a str, &'a Q)>) -> String {
    let mut s = String::new();
    for (name, c) in terms {
        let neg = c < &q(0);
        let abs = if neg { -c.clone() } else { c.clone() };
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if abs != q(1) {
            s.push_str(&format_q(&abs));
            s.push(' ');
        }
        s.push_str(name);
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim() {
            for j in i..self.dim() {
                let v = &self.table[i][j];
                if !v.is_zero() {
                    writeln!(f, "[{}, {}] = {}", self.labels[i].name, self.labels[j].name, self.format_vector(v))?;
                }
            }
        }
        Ok(())
    }
}

/// Result of comparing class-level brackets with an expected value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub holds: bool,
}

fn class_of(classes: &Classes, cx: &Complex, c: &Cochain) -> QVector {
    if c.is_zero() {
        return QVector::zeros(classes.len());
    }
    classes.coords(cx, c).expect("bracket of cocycles is a cocycle")
}

/// `[c_i, c] = w_i(c) c` for every basis class `c`.
pub fn weight_action(rs: &RootSystem, alg: &BracketAlgebra, classes: &Classes) -> Vec<RelationCheck> {
    let cx = alg.complex();
    let t2 = degree_one_cocycles(rs, cx.algebra());
    let mut out = Vec::new();
    for (i, ci) in t2.c.iter().enumerate() {
        for (k, (label, rep)) in classes.labels().iter().zip(classes.reps()).enumerate() {
            let w = label.weight.as_ref().map(|w| w.0[i]).unwrap_or(0);
            let got = class_of(classes, cx, &alg.bracket(ci, rep));
            let expected = QVector::unit(classes.len(), k).scaled(&q(w));
            out.push(RelationCheck {
                relation: format!("[c{}, {}] = {} {}", i + 1, label.name, w, label.name),
                holds: label.weight.is_some() && got == expected,
            });
        }
    }
    out
}

/// `[c_i,c_j] = [b_i,b_j] = 0` and `[c_i,b_j] = w_i(b_j) b_j` in `H^1`.
pub fn degree_one_relations(rs: &RootSystem, alg: &BracketAlgebra, classes: &Classes) -> Vec<RelationCheck> {
    let cx = alg.complex();
    let t2 = degree_one_cocycles(rs, cx.algebra());
    let r = rs.rank();
    let mut out = Vec::new();
    let zero = QVector::zeros(classes.len());
    for i in 0..r {
        for j in 0..r {
            let cc = class_of(classes, cx, &alg.bracket(&t2.c[i], &t2.c[j]));
            out.push(RelationCheck { relation: format!("[c{}, c{}] = 0", i + 1, j + 1), holds: cc == zero });
            let bb = class_of(classes, cx, &alg.bracket(&t2.b[i], &t2.b[j]));
            out.push(RelationCheck { relation: format!("[b{}, b{}] = 0", i + 1, j + 1), holds: bb == zero });
            let wb = cx.weight_of(&t2.b[j]).expect("homogeneous").0[i];
            let cb = class_of(classes, cx, &alg.bracket(&t2.c[i], &t2.b[j]));
            let expected = class_of(classes, cx, &t2.b[j]).scaled(&q(wb));
            out.push(RelationCheck { relation: format!("[c{}, b{}] = {} b{}", i + 1, j + 1, wb, j + 1), holds: cb == expected });
        }
    }
    out
}

/// Structure of `l_0` and of the `l_0`-modules `l_j` for `sl(3)`.
#[derive(Clone, Debug, Serialize)]
pub struct Sl3Report {
    pub b1_b2: bool,
    pub gl2_relations: Vec<RelationCheck>,
    /// Per `l`-degree: list of (central value, sl(2)-highest weight, dim) of
    /// irreducible summands, or `None` when the space is not a sum of
    /// irreducibles with distinct central values.
    pub modules: BTreeMap<i64, Option<Vec<(i64, i64, usize)>>>,
}

/// For `sl(3)`: `[b_1, b_2] = c_2 - c_1`, the `gl(2)` relations, and the
/// decomposition of each `l_j` under `l_0`. The centre is `c_1 + c_2` and
/// `(b_1, c_2 - c_1, b_2)` is an `sl(2)`-triple.
pub fn sl3_report(rs: &RootSystem, alg: &BracketAlgebra, classes: &Classes) -> Sl3Report {
    let cx = alg.complex();
    let t2 = degree_one_cocycles(rs, cx.algebra());
    let (c1, c2, b1, b2) = (&t2.c[0], &t2.c[1], &t2.b[0], &t2.b[1]);
    let cls = |c: &Cochain| class_of(classes, cx, c);
    let b1_b2 = cls(&alg.bracket(b1, b2)) == cls(&(c2 - c1));
    let h = c2 - c1;
    let z = c1 + c2;
    let mut rel = Vec::new();
    let mut check = |name: &str, lhs: QVector, rhs: QVector| rel.push(RelationCheck { relation: name.to_string(), holds: lhs == rhs });
    check("[h, b1] = 2 b1", cls(&alg.bracket(&h, b1)), cls(b1).scaled(&q(2)));
    check("[h, b2] = -2 b2", cls(&alg.bracket(&h, b2)), cls(b2).scaled(&q(-2)));
    check("[z, b1] = 0", cls(&alg.bracket(&z, b1)), QVector::zeros(classes.len()));
    check("[z, b2] = 0", cls(&alg.bracket(&z, b2)), QVector::zeros(classes.len()));
    check("[b1, b2] = h", cls(&alg.bracket(b1, b2)), cls(&h));

    let mut modules = BTreeMap::new();
    for deg in &classes.cohomology().degrees {
        let k = deg.degree;
        let idx: Vec<usize> = (0..classes.len()).filter(|&i| classes.labels()[i].degree == k).collect();
        if idx.is_empty() {
            continue;
        }
        // Act by z, h and the raising element on the classes of this degree.
        let act = |x: &Cochain| -> Vec<QVector> {
            idx.iter().map(|&i| {
                let v = cls(&alg.bracket(x, &classes.reps()[i]));
                QVector::from_dense(idx.iter().map(|&t| v.get(t)).collect())
            }).collect()
        };
        modules.insert(l_degree(k), decompose_gl2(&act(&z), &act(&h), &act(b1), &act(b2)));
    }
    Sl3Report { b1_b2, gl2_relations: rel, modules }
}

/// Decomposes a `gl(2)`-module given by the images of basis vectors under the
/// centre `z`, Cartan `h` and root vectors `e`, `f`, assuming `z` and `h`
/// are diagonal in the basis.
fn decompose_gl2(z: &[QVector], h: &[QVector], e: &[QVector], f: &[QVector]) -> Option<Vec<(i64, i64, usize)>> {
    let n = z.len();
    let eig = |m: &[QVector], i: usize| -> Option<i64> {
        let v = &m[i];
        if v.iter().any(|(j, _)| j != i) {
            return None;
        }
        let x = v.get(i);
        x.is_integer().then(|| x.to_integer().try_into().ok()).flatten()
    };
    let mut by_z: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        by_z.entry(eig(z, i)?).or_default().push(i);
    }
    let mut out = Vec::new();
    for (zv, part) in by_z {
        let mut hs: Vec<i64> = part.iter().map(|&i| eig(h, i)).collect::<Option<_>>()?;
        hs.sort();
        let top = *hs.last().unwrap();
        let expected: Vec<i64> = (0..part.len() as i64).map(|t| -top + 2 * t).collect();
        if hs != expected {
            return None;
        }
        // Irreducible iff e and f are injective off the extreme weights.
        let rank = |m: &[QVector]| crate::exactla::rank_of(&part.iter().map(|&i| m[i].clone()).collect::<Vec<_>>());
        if rank(e) + 1 != part.len() || rank(f) + 1 != part.len() {
            return None;
        }
        out.push((zv, top, part.len()));
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{adjoint_module, nilpotent_part, trivial_module};
    use crate::rootsys::CartanType;
    use proptest::prelude::*;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    fn rs(t: &str) -> RootSystem {
        RootSystem::new(t.parse::<CartanType>().unwrap())
    }

    fn algebra(t: &str) -> BracketAlgebra {
        let n = nilpotent_part(&rs(t));
        let m = adjoint_module(&n);
        BracketAlgebra::new(Complex::new(n, m).unwrap()).unwrap()
    }

    fn random_cochain(cx: &Complex, k: usize, rng: &mut StdRng) -> Cochain {
        let monos = cx.monomials(k);
        let mut c = Cochain::zero(k);
        for _ in 0..5 {
            let (a, w) = monos[rng.gen_range(0..monos.len())];
            c.add_term(a, w, &q(rng.gen_range(-4..=4)));
        }
        c
    }

    fn sign(p: usize) -> Q {
        q(if p % 2 == 0 { 1 } else { -1 })
    }

    #[test]
    fn non_adjoint_is_rejected() {
        let n = nilpotent_part(&rs("A2"));
        let m = trivial_module(&n);
        assert_eq!(BracketAlgebra::new(Complex::new(n, m).unwrap()).unwrap_err(), BracketError::NotAdjoint);
    }

    #[test]
    fn degree_one_dot_is_operator_application() {
        // (e_g ⊗ f^a)·e_b = δ_ab e_g and rank-one composition.
        let a = Cochain::monomial(q(1), 2, &[0]);
        assert_eq!(dot(&a, &Cochain::monomial(q(3), 0, &[])), Cochain::monomial(q(3), 2, &[]));
        assert!(dot(&a, &Cochain::monomial(q(1), 1, &[])).is_zero());
        let b = Cochain::monomial(q(1), 0, &[1]);
        assert_eq!(dot(&a, &b), Cochain::monomial(q(1), 2, &[1]));
    }

    #[test]
    fn odd_self_bracket_is_twice_square() {
        let a = &Cochain::monomial(q(1), 2, &[0, 1]) + &Cochain::monomial(q(2), 0, &[1, 2]);
        assert_eq!(bracket(&a, &a), dot(&a, &a).scaled(&q(2)));
    }

    #[test]
    fn degree_one_closes_to_commutators() {
        // C^1(n; n) = gl(n): [A, B] = AB - BA on matrices.
        let mut rng = StdRng::seed_from_u64(7);
        let n = 3;
        for _ in 0..20 {
            let ma: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect()).collect();
            let mb: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect()).collect();
            let to_c = |m: &Vec<Vec<i64>>| {
                let mut c = Cochain::zero(1);
                for (i, row) in m.iter().enumerate() {
                    for (j, x) in row.iter().enumerate() {
                        c.add_term(i, Wedge(1 << j), &q(*x));
                    }
                }
                c
            };
            let mut comm = vec![vec![0i64; n]; n];
            for i in 0..n {
                for j in 0..n {
                    comm[i][j] = (0..n).map(|k| ma[i][k] * mb[k][j] - mb[i][k] * ma[k][j]).sum();
                }
            }
            assert_eq!(bracket(&to_c(&ma), &to_c(&mb)), to_c(&comm));
        }
    }

    #[test]
    fn differential_is_bracket_with_structure_cochain() {
        let mut rng = StdRng::seed_from_u64(3);
        for t in ["A2", "B2", "G2"] {
            let alg = algebra(t);
            let cx = alg.complex();
            for k in 0..cx.top_degree() {
                let c = random_cochain(cx, k, &mut rng);
                assert_eq!(cx.differential(&c), bracket(alg.mu(), &c), "{t} degree {k}");
            }
        }
    }

    #[test]
    fn g2_known_entries() {
        let r = rs("G2");
        let alg = algebra("G2");
        let cx = alg.complex();
        let classes = Classes::canonical(cx.cohomology());
        let p = induced_bracket(&alg, &classes).unwrap();
        assert_eq!(p.dim(), 34);
        assert!(p.is_super_antisymmetric());
        assert!(p.is_graded());
        let dims: Vec<usize> = p.derived_series().iter().map(Vec::len).collect();
        assert_eq!(dims, vec![34, 32, 22, 2, 0]);
        assert!(degree_one_relations(&r, &alg, &classes).iter().all(|c| c.holds));
        assert!(weight_action(&r, &alg, &classes).iter().all(|c| c.holds));
    }

    #[test]
    fn relations_for_small_types() {
        for t in ["A3", "B2"] {
            let r = rs(t);
            let alg = algebra(t);
            let cx = alg.complex();
            let classes = Classes::canonical(cx.cohomology());
            for c in degree_one_relations(&r, &alg, &classes) {
                assert!(c.holds, "{t}: {}", c.relation);
            }
        }
    }

    #[test]
    fn sl3_l0_is_gl2() {
        let r = rs("A2");
        let alg = algebra("A2");
        let cx = alg.complex();
        let classes = Classes::canonical(cx.cohomology());
        let rep = sl3_report(&r, &alg, &classes);
        assert!(rep.b1_b2);
        assert!(rep.gl2_relations.iter().all(|c| c.holds), "{:?}", rep.gl2_relations);
        assert_eq!(rep.modules[&-1], Some(vec![(2, 0, 1)]));
        assert_eq!(rep.modules[&1], Some(vec![(-2, 2, 3), (-1, 1, 2)]));
        assert_eq!(rep.modules[&2], Some(vec![(-3, 1, 2)]));
        let p = induced_bracket(&alg, &classes).unwrap();
        // Not solvable: the series stops at a nonzero ideal.
        assert_ne!(p.derived_series().last().unwrap().len(), 0);
    }

    #[test]
    fn abelian_presentation_series_is_constant() {
        let p = Presentation {
            labels: vec![Label { name: "x".into(), degree: 1, weight: None }],
            table: vec![vec![QVector::zeros(1)]],
        };
        assert_eq!(p.derived_series().len(), 2);
        assert_eq!(p.derived_series()[1].len(), 0);
    }

    fn super_jacobi_holds(a: &Cochain, b: &Cochain, c: &Cochain) -> bool {
        // [a,[b,c]] = [[a,b],c] + (-1)^{p(a)p(b)} [b,[a,c]]
        let lhs = SuperElement::homogeneous(bracket(a, &bracket(b, c)));
        let mut rhs = SuperElement::homogeneous(bracket(&bracket(a, b), c));
        rhs.add(&bracket(b, &bracket(a, c)).scaled(&sign(parity(a.degree()) * parity(b.degree()))));
        lhs == rhs
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn super_antisymmetry_and_jacobi(seed in any::<u64>(), t in prop::sample::select(vec!["A2", "B2", "G2"])) {
            let mut rng = StdRng::seed_from_u64(seed);
            let alg = algebra(t);
            let cx = alg.complex();
            let top = cx.top_degree();
            let ks: Vec<usize> = (0..3).map(|_| rng.gen_range(0..=top.min(4))).collect();
            let a = random_cochain(cx, ks[0], &mut rng);
            let b = random_cochain(cx, ks[1], &mut rng);
            let c = random_cochain(cx, ks[2], &mut rng);
            let ab = SuperElement::homogeneous(bracket(&a, &b));
            let ba = bracket(&b, &a).scaled(&-sign(parity(a.degree()) * parity(b.degree())));
            prop_assert_eq!(ab, SuperElement::homogeneous(ba));
            prop_assert!(super_jacobi_holds(&a, &b, &c));
        }

        #[test]
        fn leibniz(seed in any::<u64>(), t in prop::sample::select(vec!["A2", "B2", "G2"])) {
            let mut rng = StdRng::seed_from_u64(seed);
            let alg = algebra(t);
            let cx = alg.complex();
            let top = cx.top_degree();
            let a = random_cochain(cx, rng.gen_range(0..=top.min(3)), &mut rng);
            let b = random_cochain(cx, rng.gen_range(0..=top.min(3)), &mut rng);
            let lhs = SuperElement::homogeneous(cx.differential(&bracket(&a, &b)));
            let mut rhs = SuperElement::homogeneous(bracket(&cx.differential(&a), &b));
            rhs.add(&bracket(&a, &cx.differential(&b)).scaled(&sign(parity(a.degree()))));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
