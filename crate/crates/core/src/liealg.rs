//! Weight-graded Lie algebras built from root data, and the coefficient
//! modules cohomology is taken in.

use thiserror::Error;

use crate::exactla::{q, QVector, Q};
use crate::rootsys::{Root, RootSystem, Weight};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("the set of removed simple roots must be nonempty")]
    EmptyParabolic,
    #[error("simple root index {index} out of range for rank {rank}")]
    SimpleRootOutOfRange { index: usize, rank: usize },
    #[error("Jacobi identity fails on basis triple ({0}, {1}, {2})")]
    Jacobi(usize, usize, usize),
    #[error("representation property fails for algebra pair ({x}, {y}) on module vector {v}")]
    NotARepresentation { x: usize, y: usize, v: usize },
    #[error("sign vector has length {found}, expected {expected}")]
    SignLength { expected: usize, found: usize },
}

/// Finite-dimensional Lie algebra with a basis of weight vectors.
///
/// `bracket[i][j]` holds `[e_i, e_j]` as a sparse vector over the basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedLieAlgebra {
    weights: Vec<Weight>,
    bracket: Vec<Vec<QVector>>,
}

impl GradedLieAlgebra {
    /// Builds an algebra from `[e_i, e_j]` for `i < j`; the rest follows by
    /// antisymmetry.
    pub fn from_upper_brackets(
        weights: Vec<Weight>,
        upper: impl IntoIterator<Item = ((usize, usize), QVector)>,
    ) -> Self {
        let n = weights.len();
        let mut bracket = vec![vec![QVector::zeros(n); n]; n];
        for ((i, j), v) in upper {
            assert!(i < j && j < n, "upper bracket index ({i}, {j})");
            bracket[j][i] = v.scaled(&q(-1));
            bracket[i][j] = v;
        }
        GradedLieAlgebra { weights, bracket }
    }

    pub fn abelian(weights: Vec<Weight>) -> Self {
        Self::from_upper_brackets(weights, std::iter::empty())
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn rank(&self) -> usize {
        self.weights.first().map_or(0, Weight::rank)
    }

    pub fn weight(&self, i: usize) -> &Weight {
        &self.weights[i]
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &QVector {
        &self.bracket[i][j]
    }

    pub fn bracket(&self, x: &QVector, y: &QVector) -> QVector {
        let mut out = QVector::zeros(self.dim());
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                let c = a * b;
                out.add_scaled(&c, &self.bracket[i][j]);
            }
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.bracket.iter().flatten().all(QVector::is_zero)
    }

    /// Structure constants `c^k_{ij}` with `i < j`, as `(i, j, k, c)`.
    pub fn structure_constants(&self) -> Vec<(usize, usize, usize, Q)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for (k, c) in self.bracket[i][j].iter() {
                    out.push((i, j, k, c.clone()));
                }
            }
        }
        out
    }

    /// The same algebra in the basis `e'_i = s_i e_i` with `s_i = +-1`.
    pub fn with_basis_signs(&self, signs: &[i64]) -> Result<Self, LieError> {
        let n = self.dim();
        if signs.len() != n {
            return Err(LieError::SignLength { expected: n, found: signs.len() });
        }
        let mut bracket = self.bracket.clone();
        for i in 0..n {
            for j in 0..n {
                let v = &self.bracket[i][j];
                bracket[i][j] = QVector::from_entries(
                    n,
                    v.iter().map(|(k, c)| (k, c * q(signs[i] * signs[j] * signs[k]))),
                );
            }
        }
        Ok(GradedLieAlgebra { weights: self.weights.clone(), bracket })
    }

    /// Replaces a single structure constant `[e_i, e_j]` (and `[e_j, e_i]`).
    /// Mostly useful to build broken algebras in tests.
    pub fn with_bracket(&self, i: usize, j: usize, v: QVector) -> Self {
        let mut out = self.clone();
        out.bracket[j][i] = v.scaled(&q(-1));
        out.bracket[i][j] = v;
        out
    }

    /// Checks antisymmetry is built in and that Jacobi holds on every basis
    /// triple, returning the first violating triple.
    pub fn jacobi_check(&self) -> Result<(), LieError> {
        let n = self.dim();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let ei = QVector::unit(n, i);
                    let ej = QVector::unit(n, j);
                    let ek = QVector::unit(n, k);
                    let mut s = self.bracket(&ei, &self.bracket[j][k]);
                    s.add_scaled(&Q::from(q(1)), &self.bracket(&ej, &self.bracket[k][i]));
                    s.add_scaled(&Q::from(q(1)), &self.bracket(&ek, &self.bracket[i][j]));
                    if !s.is_zero() {
                        return Err(LieError::Jacobi(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    /// Every bracket lands in the weight space of the summed weights.
    pub fn is_weight_additive(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let w = &self.weights[i] + &self.weights[j];
                self.bracket[i][j].iter().all(|(k, _)| self.weights[k] == w)
            })
        })
    }
}

/// Maximal nilpotent subalgebra spanned by the positive root vectors.
pub fn nilpotent_part(rs: &RootSystem) -> GradedLieAlgebra {
    let all: Vec<usize> = (0..rs.num_positive()).collect();
    root_subalgebra(rs, &all)
}

/// Nilradical of the parabolic subalgebra obtained by removing the negative
/// simple roots in `removed` (zero-based): spanned by the positive roots
/// involving at least one removed simple root.
pub fn parabolic_nilradical(rs: &RootSystem, removed: &[usize]) -> Result<GradedLieAlgebra, LieError> {
    if removed.is_empty() {
        return Err(LieError::EmptyParabolic);
    }
    if let Some(&index) = removed.iter().find(|&&i| i >= rs.rank()) {
        return Err(LieError::SimpleRootOutOfRange { index, rank: rs.rank() });
    }
    let keep: Vec<usize> = rs
        .positive_roots()
        .iter()
        .enumerate()
        .filter(|(_, r)| removed.iter().any(|&i| r.0[i] > 0))
        .map(|(k, _)| k)
        .collect();
    Ok(root_subalgebra(rs, &keep))
}

/// Subalgebra spanned by the positive root vectors with the given indices
/// (which must be closed under addition of roots).
fn root_subalgebra(rs: &RootSystem, roots: &[usize]) -> GradedLieAlgebra {
    let weights: Vec<Root> = roots.iter().map(|&k| rs.positive_roots()[k].clone()).collect();
    let n = weights.len();
    let local = |r: &Root| weights.iter().position(|w| w == r);
    let mut upper = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let s = &weights[i] + &weights[j];
            let c = rs.n(&weights[i], &weights[j]);
            if c != 0 {
                let k = local(&s).expect("root subset closed under addition");
                upper.push(((i, j), QVector::from_entries(n, [(k, q(c))])));
            }
        }
    }
    GradedLieAlgebra::from_upper_brackets(weights, upper)
}

/// Basis layout of the full simple algebra built by [`full_algebra`].
#[derive(Clone, Debug)]
pub struct ChevalleyBasis {
    pub algebra: GradedLieAlgebra,
    /// Index of `e_a` for the `k`-th positive root.
    pub positive: Vec<usize>,
    /// Index of `h_i`.
    pub cartan: Vec<usize>,
    /// Index of `e_{-a}` for the `k`-th positive root.
    pub negative: Vec<usize>,
}

/// The whole simple Lie algebra in a Chevalley basis: positive root vectors,
/// then simple coroots, then negative root vectors.
///
/// `[e_a, e_-a] = h_a`, `[h_i, e_b] = <b, a_i^v> e_b`, `[e_a, e_b] = N(a,b) e_{a+b}`.
pub fn full_algebra(rs: &RootSystem) -> ChevalleyBasis {
    let np = rs.num_positive();
    let r = rs.rank();
    let dim = 2 * np + r;
    let positive: Vec<usize> = (0..np).collect();
    let cartan: Vec<usize> = (np..np + r).collect();
    let negative: Vec<usize> = (np + r..dim).collect();
    let mut weights = Vec::with_capacity(dim);
    weights.extend(rs.positive_roots().iter().cloned());
    weights.extend((0..r).map(|_| Weight::zero(r)));
    weights.extend(rs.positive_roots().iter().map(|a| -a));

    let root_of = |i: usize| -> Option<Root> {
        if i < np {
            Some(rs.positive_roots()[i].clone())
        } else if i >= np + r {
            Some(-&rs.positive_roots()[i - np - r])
        } else {
            None
        }
    };
    let index_of = |a: &Root| -> usize {
        if a.is_positive() {
            rs.root_index(a).unwrap()
        } else {
            np + r + rs.root_index(&-a).unwrap()
        }
    };

    let mut upper = Vec::new();
    for i in 0..dim {
        for j in i + 1..dim {
            let v = match (root_of(i), root_of(j)) {
                (Some(a), Some(b)) => {
                    let s = &a + &b;
                    if s.is_zero() {
                        // [e_a, e_-a] = h_a; h_{-a} = -h_a.
                        let sign = if a.is_positive() { 1 } else { -1 };
                        let pos = if a.is_positive() { a.clone() } else { -&a };
                        let coeffs = rs.coroot_coefficients(&pos);
                        QVector::from_entries(
                            dim,
                            coeffs.iter().enumerate().map(|(t, &c)| (np + t, q(sign * c))),
                        )
                    } else {
                        let c = rs.n(&a, &b);
                        if c == 0 {
                            continue;
                        }
                        QVector::from_entries(dim, [(index_of(&s), q(c))])
                    }
                }
                (None, Some(b)) => {
                    let c = rs.coroot_pairing(&b, i - np);
                    QVector::from_entries(dim, [(j, q(c))])
                }
                (Some(a), None) => {
                    let c = -rs.coroot_pairing(&a, j - np);
                    QVector::from_entries(dim, [(i, q(c))])
                }
                (None, None) => continue,
            };
            if !v.is_zero() {
                upper.push(((i, j), v));
            }
        }
    }
    ChevalleyBasis {
        algebra: GradedLieAlgebra::from_upper_brackets(weights, upper),
        positive,
        cartan,
        negative,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModuleKind {
    /// `n` acting on itself.
    Adjoint,
    /// The whole simple algebra `g` with `n` acting by restriction of `ad`.
    RestrictedAdjoint,
    Trivial,
    Other,
}

/// Finite-dimensional `n`-module with a weight basis.
///
/// `action[i][a]` is `e_i . m_a` as a sparse vector over the module basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientModule {
    kind: ModuleKind,
    weights: Vec<Weight>,
    action: Vec<Vec<QVector>>,
}

impl CoefficientModule {
    pub fn new(kind: ModuleKind, weights: Vec<Weight>, action: Vec<Vec<QVector>>) -> Self {
        CoefficientModule { kind, weights, action }
    }

    pub fn kind(&self) -> ModuleKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, a: usize) -> &Weight {
        &self.weights[a]
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn act_basis(&self, i: usize, a: usize) -> &QVector {
        &self.action[i][a]
    }

    pub fn act(&self, x: &QVector, v: &QVector) -> QVector {
        let mut out = QVector::zeros(self.dim());
        for (i, a) in x.iter() {
            for (j, b) in v.iter() {
                out.add_scaled(&(a * b), &self.action[i][j]);
            }
        }
        out
    }

    /// `rho([x,y]) = rho(x) rho(y) - rho(y) rho(x)` on all basis triples.
    pub fn representation_check(&self, n: &GradedLieAlgebra) -> Result<(), LieError> {
        let dn = n.dim();
        for x in 0..dn {
            for y in 0..dn {
                for v in 0..self.dim() {
                    let ev = QVector::unit(self.dim(), v);
                    let lhs = self.act(n.bracket_basis(x, y), &ev);
                    let xy = self.act(&QVector::unit(dn, x), &self.action[y][v]);
                    let yx = self.act(&QVector::unit(dn, y), &self.action[x][v]);
                    if lhs != &xy - &yx {
                        return Err(LieError::NotARepresentation { x, y, v });
                    }
                }
            }
        }
        Ok(())
    }

    /// Action moves weights additively.
    pub fn is_weight_compatible(&self, n: &GradedLieAlgebra) -> bool {
        (0..n.dim()).all(|i| {
            (0..self.dim()).all(|a| {
                let w = n.weight(i) + &self.weights[a];
                self.action[i][a].iter().all(|(b, _)| self.weights[b] == w)
            })
        })
    }
}

pub fn adjoint_module(n: &GradedLieAlgebra) -> CoefficientModule {
    let d = n.dim();
    let action = (0..d).map(|i| (0..d).map(|a| n.bracket_basis(i, a).clone()).collect()).collect();
    CoefficientModule::new(ModuleKind::Adjoint, n.weights().to_vec(), action)
}

/// All of `g`, with `n` (a subalgebra spanned by positive root vectors of `rs`)
/// acting by the adjoint action of `g`.
pub fn restricted_adjoint(rs: &RootSystem, n: &GradedLieAlgebra) -> CoefficientModule {
    let g = full_algebra(rs);
    let dim = g.algebra.dim();
    let action = (0..n.dim())
        .map(|i| {
            let gi = rs.root_index(n.weight(i)).expect("n spanned by positive root vectors");
            let x = g.positive[gi];
            (0..dim).map(|a| g.algebra.bracket_basis(x, a).clone()).collect()
        })
        .collect();
    CoefficientModule::new(ModuleKind::RestrictedAdjoint, g.algebra.weights().to_vec(), action)
}

/// One-dimensional module with zero action.
pub fn trivial_module(n: &GradedLieAlgebra) -> CoefficientModule {
    let action = (0..n.dim()).map(|_| vec![QVector::zeros(1)]).collect();
    CoefficientModule::new(ModuleKind::Trivial, vec![Weight::zero(n.rank())], action)
}
