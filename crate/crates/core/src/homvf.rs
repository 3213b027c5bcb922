//! Cochains as polynomial vector fields on a purely odd space.
//!
//! `C^{k}(n; n)` is identified with fields `Σ P_a(ξ) ∂_a` of polynomial degree
//! `k` through `e_a ⊗ f^I ↦ -ξ^I ∂_a`. Under this map the superbracket of
//! cochains becomes the supercommutator of derivations, and `d` becomes
//! `[Q, ·]` for `Q` the image of the structure cochain.

use std::collections::BTreeMap;
use std::fmt;

use rand::{rngs::StdRng, Rng, SeedableRng};
use serde::Serialize;
use thiserror::Error;

use crate::cecomplex::{binomial, Cochain, Complex, Wedge};
use crate::exactla::{format_q, q, Q};
use crate::liealg::{adjoint_module, GradedLieAlgebra};
use crate::superbracket::{bracket, structure_cochain};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("fields on {0} and {1} odd coordinates cannot be bracketed")]
    DimensionMismatch(usize, usize),
    #[error("algebra of dimension {0} is too large for the exhaustive comparison (at most {MAX_CORRESPONDENCE_DIM})")]
    TooLarge(usize),
}

pub const MAX_CORRESPONDENCE_DIM: usize = 8;

/// `Σ c ξ^I ∂_k` over odd coordinates `ξ_0 … ξ_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OddField {
    n_odd: usize,
    terms: BTreeMap<(usize, Wedge), Q>,
}

impl OddField {
    pub fn zero(n_odd: usize) -> Self {
        OddField { n_odd, terms: BTreeMap::new() }
    }

    /// `c ξ^{i_1}…ξ^{i_m} ∂_k`, factors in any order.
    pub fn monomial(n_odd: usize, c: Q, factors: &[usize], k: usize) -> Self {
        let mut out = OddField::zero(n_odd);
        if let Some((s, w)) = Wedge::from_indices(factors) {
            out.add_term(k, w, &(c * q(s)));
        }
        out
    }

    pub fn n_odd(&self) -> usize {
        self.n_odd
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, Wedge), &Q)> + '_ {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, k: usize, w: Wedge, c: &Q) {
        if c == &q(0) {
            return;
        }
        let e = self.terms.entry((k, w)).or_insert_with(|| q(0));
        *e += c;
        if *e == q(0) {
            self.terms.remove(&(k, w));
        }
    }

    pub fn add_scaled(&mut self, c: &Q, other: &OddField) {
        for (&(k, w), x) in &other.terms {
            self.add_term(k, w, &(c * x));
        }
    }

    /// Splits into components of fixed polynomial degree.
    pub fn homogeneous_parts(&self) -> BTreeMap<usize, OddField> {
        let mut out: BTreeMap<usize, OddField> = BTreeMap::new();
        for (&(k, w), x) in &self.terms {
            out.entry(w.len()).or_insert_with(|| OddField::zero(self.n_odd)).add_term(k, w, x);
        }
        out
    }

    /// Applies the derivation to `ξ^J`, returning `(sign, ξ^I ∂_k ξ^J)`
    /// terms. Derivatives act from the left.
    fn apply_to_monomial(i: Wedge, k: usize, j: Wedge) -> Option<(i64, Wedge)> {
        if !j.contains(k) {
            return None;
        }
        let s1 = if j.rank_below(k) % 2 == 0 { 1 } else { -1 };
        let (s2, w) = i.wedge(j.without(k))?;
        Some((s1 * s2, w))
    }

    /// Supercommutator of two fields.
    pub fn bracket(&self, other: &OddField) -> Result<OddField, FieldError> {
        if self.n_odd != other.n_odd {
            return Err(FieldError::DimensionMismatch(self.n_odd, other.n_odd));
        }
        let mut out = OddField::zero(self.n_odd);
        for (dx, x) in self.homogeneous_parts() {
            for (dy, y) in other.homogeneous_parts() {
                let px = (dx + 1) % 2;
                let py = (dy + 1) % 2;
                let sign = if px * py == 1 { q(1) } else { q(-1) };
                // [X, Y] = X(Y^l) ∂_l - (-1)^{p(X)p(Y)} Y(X^k) ∂_k
                out.add_scaled(&q(1), &x.compose_coefficients(&y));
                out.add_scaled(&sign, &y.compose_coefficients(&x));
            }
        }
        Ok(out)
    }

    /// `Σ_l self(other^l) ∂_l`.
    fn compose_coefficients(&self, other: &OddField) -> OddField {
        let mut out = OddField::zero(self.n_odd);
        for (&(k, i), x) in &self.terms {
            for (&(l, j), y) in &other.terms {
                if let Some((s, w)) = Self::apply_to_monomial(i, k, j) {
                    out.add_term(l, w, &(x * y * q(s)));
                }
            }
        }
        out
    }
}

impl fmt::Display for OddField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, ((k, w), c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", format_q(c))?;
            for i in w.indices() {
                write!(f, "*x{i}")?;
            }
            write!(f, "*d{k}")?;
        }
        Ok(())
    }
}

/// `e_a ⊗ f^I ↦ -ξ^I ∂_a`.
pub fn encode(c: &Cochain, n_odd: usize) -> OddField {
    let mut out = OddField::zero(n_odd);
    for (&(a, w), x) in c.terms() {
        out.add_term(a, w, &-x.clone());
    }
    out
}

/// Inverse of [`encode`].
pub fn decode(f: &OddField) -> Vec<Cochain> {
    f.homogeneous_parts()
        .into_iter()
        .map(|(deg, part)| Cochain::from_terms(deg, part.terms.into_iter().map(|((k, w), x)| ((k, w), -x))))
        .collect()
}

/// The homological field `Q` of `n`: the image of its bracket.
pub fn encode_differential(n: &GradedLieAlgebra) -> OddField {
    encode(&structure_cochain(n), n.dim())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorrespondenceReport {
    pub dim: usize,
    pub field_dims_ok: bool,
    pub bracket_pairs_checked: usize,
    pub bracket_mismatches: usize,
    pub differential_checked: usize,
    pub differential_mismatches: usize,
    pub exhaustive: bool,
}

impl CorrespondenceReport {
    pub fn agrees(&self) -> bool {
        self.field_dims_ok && self.bracket_mismatches == 0 && self.differential_mismatches == 0
    }
}

/// Above this many basis pairs the bracket comparison samples pairs.
const EXHAUSTIVE_PAIR_LIMIT: usize = 200_000;

/// Checks that `encode` turns the cochain bracket into the field bracket and
/// `d` into `[Q, ·]` on basis monomials.
pub fn chain_field_correspondence(n: &GradedLieAlgebra) -> Result<CorrespondenceReport, FieldError> {
    let dim = n.dim();
    if dim > MAX_CORRESPONDENCE_DIM {
        return Err(FieldError::TooLarge(dim));
    }
    let cx = Complex::new(n.clone(), adjoint_module(n)).expect("small algebra");
    let basis: Vec<Cochain> = (0..=dim)
        .flat_map(|k| cx.monomials(k).into_iter().map(move |m| Cochain::from_terms(k, [(m, q(1))])))
        .collect();
    let field_dims_ok = (0..=dim).all(|k| cx.monomials(k).len() == dim * binomial(dim, k));

    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let total = basis.len() * basis.len();
    let exhaustive = total <= EXHAUSTIVE_PAIR_LIMIT;
    if exhaustive {
        pairs.extend((0..basis.len()).flat_map(|i| (0..basis.len()).map(move |j| (i, j))));
    } else {
        let mut rng = StdRng::seed_from_u64(dim as u64);
        pairs.extend((0..EXHAUSTIVE_PAIR_LIMIT / 10).map(|_| (rng.gen_range(0..basis.len()), rng.gen_range(0..basis.len()))));
    }
    let mut bracket_mismatches = 0;
    for &(i, j) in &pairs {
        let lhs = encode(&bracket(&basis[i], &basis[j]), dim);
        let rhs = encode(&basis[i], dim).bracket(&encode(&basis[j], dim))?;
        if lhs != rhs {
            bracket_mismatches += 1;
        }
    }
    let q_field = encode_differential(n);
    let mut differential_mismatches = 0;
    for c in &basis {
        let lhs = encode(&cx.differential(c), dim);
        let rhs = q_field.bracket(&encode(c, dim))?;
        if lhs != rhs {
            differential_mismatches += 1;
        }
    }
    Ok(CorrespondenceReport {
        dim,
        field_dims_ok,
        bracket_pairs_checked: pairs.len(),
        bracket_mismatches,
        differential_checked: basis.len(),
        differential_mismatches,
        exhaustive,
    })
}
