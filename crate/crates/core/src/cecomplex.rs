//! The Chevalley–Eilenberg complex `C^k(n; M)`, its weight grading and
//! cohomology computed one weight block at a time.
//!
//! A cochain is stored as a sparse sum of monomials `m_a ⊗ f^{i_1}∧…∧f^{i_k}`
//! with `i_1 < … < i_k`. Evaluation uses the determinant convention
//! `(f^1∧…∧f^k)(x_1,…,x_k) = det(f^i(x_j))`, under which
//! `d(m ⊗ ω) = Σ_j (f^j ∧ ω) ⊗ e_j·m + m ⊗ dω` and
//! `df^l = -Σ_{p<q} c^l_{pq} f^p ∧ f^q`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::exactla::{format_q, kernel_basis, q, quotient_representatives, Echelon, QVector, RationalMatrix, Q};
use crate::liealg::{CoefficientModule, GradedLieAlgebra};
use crate::rootsys::{RootSystem, Weight};

pub const MAX_ALGEBRA_DIM: usize = 128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("cochain of degree {found} where degree {expected} was expected")]
    Degree { expected: usize, found: usize },
    #[error("cochain is not a cocycle")]
    NotCocycle,
    #[error("algebra of dimension {0} exceeds the supported maximum {MAX_ALGEBRA_DIM}")]
    TooLarge(usize),
    #[error("cochain shape ({0}, {1}) does not match the complex")]
    Shape(usize, usize),
}

/// Strictly increasing set of algebra indices, as a bit mask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Wedge(pub u128);

impl Wedge {
    pub const EMPTY: Wedge = Wedge(0);

    /// Sorts the factors, returning the permutation sign, or `None` on a
    /// repeated factor.
    pub fn from_indices(indices: &[usize]) -> Option<(i64, Wedge)> {
        let mut sign = 1;
        let mut mask = 0u128;
        for &i in indices {
            let bit = 1u128 << i;
            if mask & bit != 0 {
                return None;
            }
            // Moving f^i left past the larger factors already present.
            if (mask >> i).count_ones() % 2 == 1 {
                sign = -sign;
            }
            mask |= bit;
        }
        Some((sign, Wedge(mask)))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn indices(self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut m = self.0;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            out.push(i);
            m &= m - 1;
        }
        out
    }

    /// Number of factors strictly below `i`.
    pub fn rank_below(self, i: usize) -> usize {
        (self.0 & ((1u128 << i) - 1)).count_ones() as usize
    }

    pub fn without(self, i: usize) -> Wedge {
        Wedge(self.0 & !(1u128 << i))
    }

    /// `f^i ∧ self` in canonical order, with its sign.
    pub fn insert_front(self, i: usize) -> Option<(i64, Wedge)> {
        if self.contains(i) {
            return None;
        }
        let sign = if self.rank_below(i) % 2 == 0 { 1 } else { -1 };
        Some((sign, Wedge(self.0 | 1u128 << i)))
    }

    /// `self ∧ other` in canonical order, with its sign.
    pub fn wedge(self, other: Wedge) -> Option<(i64, Wedge)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut inversions = 0;
        for b in other.indices() {
            inversions += (self.0 >> b).count_ones();
        }
        let sign = if inversions % 2 == 0 { 1 } else { -1 };
        Some((sign, Wedge(self.0 | other.0)))
    }
}

/// All `k`-element subsets of `0..n` in increasing numeric mask order.
pub fn subsets(n: usize, k: usize) -> Vec<Wedge> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(Wedge(idx.iter().fold(0u128, |m, &i| m | 1u128 << i)));
        let mut t = k;
        loop {
            if t == 0 {
                out.sort();
                return out;
            }
            t -= 1;
            if idx[t] < n - k + t {
                idx[t] += 1;
                for s in t + 1..k {
                    idx[s] = idx[s - 1] + 1;
                }
                break;
            }
        }
    }
}

pub type Monomial = (usize, Wedge);

/// Element of `C^k(n; M)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cochain {
    degree: usize,
    terms: BTreeMap<Monomial, Q>,
}

impl Cochain {
    pub fn zero(degree: usize) -> Self {
        Cochain { degree, terms: BTreeMap::new() }
    }

    /// `c · m_a ⊗ f^{i_1}∧…∧f^{i_k}`; factors may come in any order.
    pub fn monomial(c: Q, a: usize, factors: &[usize]) -> Self {
        let mut out = Cochain::zero(factors.len());
        if let Some((s, w)) = Wedge::from_indices(factors) {
            out.add_term(a, w, &(c * q(s)));
        }
        out
    }

    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut out = Cochain::zero(degree);
        for ((a, w), c) in terms {
            assert_eq!(w.len(), degree, "monomial degree");
            out.add_term(a, w, &c);
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> + '_ {
        self.terms.iter()
    }

    pub fn coefficient(&self, a: usize, w: Wedge) -> Q {
        self.terms.get(&(a, w)).cloned().unwrap_or_else(|| q(0))
    }

    pub fn add_term(&mut self, a: usize, w: Wedge, c: &Q) {
        debug_assert_eq!(w.len(), self.degree);
        if c == &q(0) {
            return;
        }
        let e = self.terms.entry((a, w)).or_insert_with(|| q(0));
        *e += c;
        if *e == q(0) {
            self.terms.remove(&(a, w));
        }
    }

    pub fn add_scaled(&mut self, c: &Q, other: &Cochain) {
        if other.is_zero() {
            return;
        }
        assert_eq!(self.degree, other.degree, "adding cochains of different degree");
        for (&(a, w), x) in &other.terms {
            self.add_term(a, w, &(c * x));
        }
    }

    pub fn scaled(&self, c: &Q) -> Cochain {
        let mut out = Cochain::zero(self.degree);
        out.add_scaled(c, self);
        out
    }

    /// Applies `e_i -> s_i e_i` on the algebra and `m_a -> t_a m_a` on the module.
    pub fn with_basis_signs(&self, alg: &[i64], module: &[i64]) -> Cochain {
        let terms = self.terms.iter().map(|(&(a, w), c)| {
            let s: i64 = module[a] * w.indices().iter().map(|&i| alg[i]).product::<i64>();
            ((a, w), c * q(s))
        });
        Cochain::from_terms(self.degree, terms)
    }

    pub fn max_indices(&self) -> (usize, usize) {
        let mut a_max = 0;
        let mut w_max = 0;
        for &(a, w) in self.terms.keys() {
            a_max = a_max.max(a + 1);
            w_max = w_max.max(128 - w.0.leading_zeros() as usize);
        }
        (a_max, w_max)
    }
}

impl std::ops::Add<&Cochain> for &Cochain {
    type Output = Cochain;
    fn add(self, rhs: &Cochain) -> Cochain {
        let mut out = self.clone();
        out.add_scaled(&q(1), rhs);
        out
    }
}

impl std::ops::Sub<&Cochain> for &Cochain {
    type Output = Cochain;
    fn sub(self, rhs: &Cochain) -> Cochain {
        let mut out = self.clone();
        out.add_scaled(&q(-1), rhs);
        out
    }
}

impl fmt::Display for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, ((a, w), c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*m{}", format_q(c), a)?;
            for i in w.indices() {
                write!(f, "*f{i}")?;
            }
        }
        Ok(())
    }
}

/// `C^·(n; M)` together with the data needed to apply `d` quickly.
#[derive(Clone, Debug)]
pub struct Complex {
    algebra: GradedLieAlgebra,
    module: CoefficientModule,
    /// `df^l` as a list of `(p, q, coefficient)` with `p < q`.
    d_dual: Vec<Vec<(usize, usize, Q)>>,
}

impl Complex {
    pub fn new(algebra: GradedLieAlgebra, module: CoefficientModule) -> Result<Self, ComplexError> {
        let n = algebra.dim();
        if n > MAX_ALGEBRA_DIM {
            return Err(ComplexError::TooLarge(n));
        }
        let mut d_dual = vec![Vec::new(); n];
        for (p, q_, l, c) in algebra.structure_constants() {
            d_dual[l].push((p, q_, -c));
        }
        Ok(Complex { algebra, module, d_dual })
    }

    pub fn algebra(&self) -> &GradedLieAlgebra {
        &self.algebra
    }

    pub fn module(&self) -> &CoefficientModule {
        &self.module
    }

    pub fn top_degree(&self) -> usize {
        self.algebra.dim()
    }

    pub fn dim_cochains(&self, k: usize) -> usize {
        self.module.dim() * binomial(self.algebra.dim(), k)
    }

    pub fn monomial_weight(&self, a: usize, w: Wedge) -> Weight {
        let mut out = self.module.weight(a).clone();
        for i in w.indices() {
            out = &out - self.algebra.weight(i);
        }
        out
    }

    pub fn monomials(&self, k: usize) -> Vec<Monomial> {
        let subs = subsets(self.algebra.dim(), k);
        (0..self.module.dim()).flat_map(|a| subs.iter().map(move |&w| (a, w))).collect()
    }

    /// Monomial basis of `C^k` grouped by weight, blocks in weight order.
    pub fn weight_blocks(&self, k: usize) -> BTreeMap<Weight, Vec<Monomial>> {
        let mut out: BTreeMap<Weight, Vec<Monomial>> = BTreeMap::new();
        for (a, w) in self.monomials(k) {
            out.entry(self.monomial_weight(a, w)).or_default().push((a, w));
        }
        out
    }

    /// Weight components of a cochain.
    pub fn split_by_weight(&self, c: &Cochain) -> BTreeMap<Weight, Cochain> {
        let mut out: BTreeMap<Weight, Cochain> = BTreeMap::new();
        for (&(a, w), x) in c.terms() {
            out.entry(self.monomial_weight(a, w))
                .or_insert_with(|| Cochain::zero(c.degree()))
                .add_term(a, w, x);
        }
        out
    }

    /// The weight of a homogeneous cochain; `None` for zero or mixed cochains.
    pub fn weight_of(&self, c: &Cochain) -> Option<Weight> {
        let parts = self.split_by_weight(c);
        if parts.len() == 1 {
            parts.into_keys().next()
        } else {
            None
        }
    }

    fn check_shape(&self, c: &Cochain) -> Result<(), ComplexError> {
        let (a, w) = c.max_indices();
        if a > self.module.dim() || w > self.algebra.dim() {
            return Err(ComplexError::Shape(a, w));
        }
        Ok(())
    }

    pub fn differential(&self, c: &Cochain) -> Cochain {
        debug_assert!(self.check_shape(c).is_ok());
        let mut out = Cochain::zero(c.degree() + 1);
        for (&(a, w), x) in c.terms() {
            self.add_differential_of_monomial(a, w, x, &mut out);
        }
        out
    }

    fn add_differential_of_monomial(&self, a: usize, w: Wedge, x: &Q, out: &mut Cochain) {
        for j in 0..self.algebra.dim() {
            let Some((s, w2)) = w.insert_front(j) else { continue };
            for (b, y) in self.module.act_basis(j, a).iter() {
                out.add_term(b, w2, &(x * y * q(s)));
            }
        }
        // d(f^{i_1}∧…∧f^{i_k}) = Σ_t (-1)^t f^{i_1}∧…∧df^{i_t}∧…; the 2-form
        // moves to the front without a sign.
        for (t, l) in w.indices().into_iter().enumerate() {
            let rest = w.without(l);
            let st = if t % 2 == 0 { 1 } else { -1 };
            for (p, q_, c) in &self.d_dual[l] {
                if rest.contains(*p) || rest.contains(*q_) {
                    continue;
                }
                let (s1, r1) = rest.insert_front(*q_).unwrap();
                let (s2, r2) = r1.insert_front(*p).unwrap();
                out.add_term(a, r2, &(x * c * q(st * s1 * s2)));
            }
        }
    }

    pub fn is_cocycle(&self, c: &Cochain) -> bool {
        self.differential(c).is_zero()
    }

    /// Some `u` with `du = c`, if one exists.
    pub fn coboundary_witness(&self, c: &Cochain) -> Option<Cochain> {
        let k = c.degree();
        if c.is_zero() {
            return Some(Cochain::zero(k.saturating_sub(1)));
        }
        if k == 0 {
            return None;
        }
        let mut witness = Cochain::zero(k - 1);
        for (weight, part) in self.split_by_weight(c) {
            let source = self.block_monomials(k - 1, &weight);
            let target = self.block_monomials(k, &weight);
            let index = index_map(&target);
            let Some(v) = to_local(&part, &index) else { return None };
            let gens: Vec<QVector> = source
                .iter()
                .map(|&(a, w)| to_local(&self.differential(&Cochain::from_terms(k - 1, [((a, w), q(1))])), &index).unwrap())
                .collect();
            let coords = if gens.is_empty() {
                None
            } else {
                crate::exactla::image_membership(&v, &gens).expect("uniform lengths")
            }?;
            for (m, x) in source.iter().zip(coords) {
                witness.add_term(m.0, m.1, &x);
            }
        }
        Some(witness)
    }

    pub fn is_coboundary(&self, c: &Cochain) -> bool {
        self.coboundary_witness(c).is_some()
    }

    fn block_monomials(&self, k: usize, weight: &Weight) -> Vec<Monomial> {
        if k > self.algebra.dim() {
            return Vec::new();
        }
        self.monomials(k)
            .into_iter()
            .filter(|&(a, w)| &self.monomial_weight(a, w) == weight)
            .collect()
    }

    /// Matrix of `d: C^k_γ -> C^{k+1}_γ` in the given local bases.
    fn block_matrix(&self, k: usize, source: &[Monomial], target_index: &HashMap<Monomial, usize>) -> RationalMatrix {
        let columns: Vec<QVector> = source
            .iter()
            .map(|&m| {
                let dc = self.differential(&Cochain::from_terms(k, [(m, q(1))]));
                to_local(&dc, target_index).expect("d preserves weight")
            })
            .collect();
        RationalMatrix::from_columns(target_index.len(), &columns).expect("uniform lengths")
    }

    fn block_cohomology(&self, k: usize, weight: &Weight, basis: Vec<Monomial>, below: &[Monomial], above: &[Monomial]) -> Block {
        let index = index_map(&basis);
        let above_index = index_map(above);
        let z = if above.is_empty() {
            (0..basis.len()).map(|i| QVector::unit(basis.len(), i)).collect()
        } else {
            kernel_basis(&self.block_matrix(k, &basis, &above_index))
        };
        let b: Vec<QVector> = if k == 0 || below.is_empty() {
            Vec::new()
        } else {
            let dm = self.block_matrix(k - 1, below, &index).transpose();
            let mut ech = Echelon::new(basis.len());
            for row in dm.row_vectors() {
                ech.insert(row).expect("uniform lengths");
            }
            ech.basis()
        };
        let reps = quotient_representatives(&z, &b).expect("coboundaries are cocycles");
        let mut classifier = Echelon::tracking(basis.len());
        for v in reps.iter().chain(b.iter()) {
            let fresh = classifier.insert(v).expect("uniform lengths");
            debug_assert!(fresh);
        }
        Block {
            degree: k,
            weight: weight.clone(),
            z_dim: z.len(),
            b_dim: b.len(),
            reps: reps.iter().map(|v| from_local(k, &basis, v)).collect(),
            basis,
            index,
            classifier,
        }
    }

    /// Cohomology in degree `k`, weight block by weight block.
    pub fn cohomology_degree(&self, k: usize) -> DegreeCohomology {
        let top = self.algebra.dim();
        let blocks_k = self.weight_blocks(k);
        let mut below = if k > 0 { self.weight_blocks(k - 1) } else { BTreeMap::new() };
        let mut above = if k < top { self.weight_blocks(k + 1) } else { BTreeMap::new() };
        let jobs: Vec<_> = blocks_k
            .into_iter()
            .map(|(w, basis)| {
                let lo = below.remove(&w).unwrap_or_default();
                let hi = above.remove(&w).unwrap_or_default();
                (w, basis, lo, hi)
            })
            .collect();
        let blocks: Vec<Block> = jobs
            .into_par_iter()
            .map(|(w, basis, lo, hi)| self.block_cohomology(k, &w, basis, &lo, &hi))
            .collect();
        DegreeCohomology { degree: k, blocks }
    }

    /// Cohomology in every degree `0..=dim n`.
    pub fn cohomology(&self) -> CohomologySpace {
        let degrees = (0..=self.top_degree()).map(|k| self.cohomology_degree(k)).collect();
        CohomologySpace { degrees }
    }

    /// `dim H^k` from ranks of the unblocked differential; an oracle for the
    /// blockwise computation.
    pub fn unblocked_dims(&self) -> Vec<usize> {
        let top = self.top_degree();
        let ranks: Vec<usize> = (0..=top)
            .map(|k| {
                if k == top {
                    return 0;
                }
                let source = self.monomials(k);
                let target = index_map(&self.monomials(k + 1));
                crate::exactla::row_reduce(&self.block_matrix(k, &source, &target)).rank
            })
            .collect();
        (0..=top)
            .map(|k| self.dim_cochains(k) - ranks[k] - if k > 0 { ranks[k - 1] } else { 0 })
            .collect()
    }
}

fn index_map(basis: &[Monomial]) -> HashMap<Monomial, usize> {
    basis.iter().enumerate().map(|(i, &m)| (m, i)).collect()
}

fn to_local(c: &Cochain, index: &HashMap<Monomial, usize>) -> Option<QVector> {
    let mut v = QVector::zeros(index.len());
    for (m, x) in c.terms() {
        v.set(*index.get(m)?, x.clone());
    }
    Some(v)
}

fn from_local(k: usize, basis: &[Monomial], v: &QVector) -> Cochain {
    Cochain::from_terms(k, v.iter().map(|(i, x)| (basis[i], x.clone())))
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Cohomology of one `(degree, weight)` block with a classifier that writes
/// any cocycle of that block as representatives plus a coboundary.
#[derive(Clone, Debug)]
pub struct Block {
    pub degree: usize,
    pub weight: Weight,
    pub z_dim: usize,
    pub b_dim: usize,
    pub reps: Vec<Cochain>,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    classifier: Echelon,
}

impl Block {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates of the class of a cocycle over `reps`.
    pub fn classify(&self, c: &Cochain) -> Result<Vec<Q>, ComplexError> {
        let v = to_local(c, &self.index).ok_or(ComplexError::NotCocycle)?;
        let coords = self.classifier.express(&v).expect("tracking echelon").ok_or(ComplexError::NotCocycle)?;
        Ok((0..self.reps.len()).map(|i| coords.get(i)).collect())
    }

    pub fn cochain_dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Clone, Debug)]
pub struct DegreeCohomology {
    pub degree: usize,
    pub blocks: Vec<Block>,
}

impl DegreeCohomology {
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(Block::dim).sum()
    }

    /// Representatives with their weights, in (weight, block order).
    pub fn representatives(&self) -> Vec<(Weight, Cochain)> {
        self.blocks
            .iter()
            .flat_map(|b| b.reps.iter().map(move |r| (b.weight.clone(), r.clone())))
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct CohomologySpace {
    pub degrees: Vec<DegreeCohomology>,
}

impl CohomologySpace {
    pub fn dims(&self) -> Vec<usize> {
        self.degrees.iter().map(DegreeCohomology::dim).collect()
    }

    pub fn degree(&self, k: usize) -> &DegreeCohomology {
        &self.degrees[k]
    }
}

/// Euler characteristic `Σ (-1)^k dim C^k`.
pub fn euler_characteristic_cochains(cx: &Complex) -> i64 {
    (0..=cx.top_degree())
        .map(|k| if k % 2 == 0 { 1 } else { -1 } * cx.dim_cochains(k) as i64)
        .sum()
}

/// The degree-one cocycles `c_i = Σ A_i(α) e_α ⊗ f^α` and
/// `b_i = e_{γ_i} ⊗ f^{α_i}`, `γ_i = μ - m_i α_i`, in `C^1(n; n)`.
#[derive(Clone, Debug)]
pub struct DegreeOneCocycles {
    pub c: Vec<Cochain>,
    pub b: Vec<Cochain>,
}

pub fn degree_one_cocycles(rs: &RootSystem, n: &GradedLieAlgebra) -> DegreeOneCocycles {
    let index = |r: &Weight| n.weights().iter().position(|w| w == r).expect("root of n");
    let c = (0..rs.rank())
        .map(|i| {
            let terms = n
                .weights()
                .iter()
                .enumerate()
                .filter(|(_, a)| a.0[i] != 0)
                .map(|(k, a)| ((k, Wedge(1u128 << k)), q(a.0[i])));
            Cochain::from_terms(1, terms)
        })
        .collect();
    let b = (0..rs.rank())
        .map(|i| {
            let g = index(&rs.gamma(i));
            let a = index(&rs.simple_root(i));
            Cochain::monomial(q(1), g, &[a])
        })
        .collect();
    DegreeOneCocycles { c, b }
}
