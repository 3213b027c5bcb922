//! Exact linear algebra over the rationals.
//!
//! Everything here works with sparse vectors of [`BigRational`] entries. The
//! workhorse is [`Echelon`], an incrementally built echelon basis that can
//! optionally remember how each of its rows was obtained from the inserted
//! generators, which is what membership and coordinate queries need.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Exact rational scalar.
pub type Q = BigRational;

/// Builds the rational `n`.
pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Builds the rational `num / den`. Panics if `den == 0`.
pub fn q_frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p"` or `"p/q"`.
pub fn parse_q(s: &str) -> Result<Q, LinAlgError> {
    let s = s.trim();
    let bad = || LinAlgError::BadRational(s.to_string());
    match s.split_once('/') {
        None => s.parse::<BigInt>().map(Q::from_integer).map_err(|_| bad()),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
    }
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise (reduced, `q > 0`).
pub fn format_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vector {index} of the subspace does not lie in the ambient span")]
    NotContained { index: usize },
    #[error("cannot parse rational {0:?}")]
    BadRational(String),
}

/// Sparse rational vector of fixed length. Zero entries are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QVector {
    len: usize,
    entries: BTreeMap<usize, Q>,
}

impl QVector {
    pub fn zeros(len: usize) -> Self {
        QVector { len, entries: BTreeMap::new() }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, Q::one());
        v
    }

    pub fn from_dense(values: Vec<Q>) -> Self {
        let len = values.len();
        let entries = values
            .into_iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .collect();
        QVector { len, entries }
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Self::from_dense(values.iter().map(|&x| q(x)).collect())
    }

    pub fn from_entries(len: usize, entries: impl IntoIterator<Item = (usize, Q)>) -> Self {
        let mut v = Self::zeros(len);
        for (i, x) in entries {
            v.add_at(i, &x);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize) -> Q {
        self.entries.get(&i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn get_ref(&self, i: usize) -> Option<&Q> {
        self.entries.get(&i)
    }

    pub fn set(&mut self, i: usize, x: Q) {
        assert!(i < self.len, "index {i} out of bounds for length {}", self.len);
        if x.is_zero() {
            self.entries.remove(&i);
        } else {
            self.entries.insert(i, x);
        }
    }

    pub fn add_at(&mut self, i: usize, x: &Q) {
        assert!(i < self.len, "index {i} out of bounds for length {}", self.len);
        if x.is_zero() {
            return;
        }
        let slot = self.entries.entry(i).or_insert_with(Q::zero);
        *slot += x;
        if slot.is_zero() {
            self.entries.remove(&i);
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &Q, other: &QVector) {
        debug_assert_eq!(self.len, other.len);
        if c.is_zero() {
            return;
        }
        for (&i, x) in &other.entries {
            self.add_at(i, &(c * x));
        }
    }

    pub fn scale(&mut self, c: &Q) {
        if c.is_zero() {
            self.entries.clear();
        } else {
            for x in self.entries.values_mut() {
                *x *= c;
            }
        }
    }

    pub fn scaled(&self, c: &Q) -> QVector {
        let mut v = self.clone();
        v.scale(c);
        v
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Q)> + '_ {
        self.entries.iter().map(|(&i, x)| (i, x))
    }

    pub fn leading(&self) -> Option<(usize, &Q)> {
        self.entries.iter().next().map(|(&i, x)| (i, x))
    }

    pub fn dot(&self, other: &QVector) -> Q {
        let (small, big) = if self.nnz() <= other.nnz() { (self, other) } else { (other, self) };
        small
            .iter()
            .filter_map(|(i, x)| big.entries.get(&i).map(|y| x * y))
            .fold(Q::zero(), |acc, t| acc + t)
    }

    pub fn to_dense(&self) -> Vec<Q> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// Same entries, reinterpreted with a different length (entries must fit).
    pub fn with_len(mut self, len: usize) -> QVector {
        assert!(self.entries.keys().next_back().map_or(true, |&i| i < len));
        self.len = len;
        self
    }
}

impl std::ops::Add<&QVector> for &QVector {
    type Output = QVector;
    fn add(self, rhs: &QVector) -> QVector {
        let mut v = self.clone();
        v.add_scaled(&Q::one(), rhs);
        v
    }
}

impl std::ops::Sub<&QVector> for &QVector {
    type Output = QVector;
    fn sub(self, rhs: &QVector) -> QVector {
        let mut v = self.clone();
        v.add_scaled(&-Q::one(), rhs);
        v
    }
}

impl fmt::Display for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.len {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_q(&self.get(i)))?;
        }
        write!(f, "]")
    }
}

/// Sparse rational matrix stored by rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<QVector>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![QVector::zeros(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<QVector>) -> Result<Self, LinAlgError> {
        for r in &rows {
            if r.len() != cols {
                return Err(LinAlgError::DimensionMismatch { expected: cols, found: r.len() });
            }
        }
        Ok(RationalMatrix { rows: rows.len(), cols, data: rows })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[QVector]) -> Result<Self, LinAlgError> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(LinAlgError::DimensionMismatch { expected: rows, found: c.len() });
            }
            for (i, x) in c.iter() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows.iter().map(|r| QVector::from_ints(r)).collect();
        Self::from_rows(cols, data).expect("ragged integer matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, x: Q) {
        self.data[r].set(c, x);
    }

    pub fn row(&self, r: usize) -> &QVector {
        &self.data[r]
    }

    pub fn row_vectors(&self) -> &[QVector] {
        &self.data
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(QVector::nnz).sum()
    }

    pub fn mul_vec(&self, v: &QVector) -> Result<QVector, LinAlgError> {
        if v.len() != self.cols {
            return Err(LinAlgError::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok(QVector::from_dense(self.data.iter().map(|r| r.dot(v)).collect()))
    }

    pub fn transpose(&self) -> RationalMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for (i, r) in self.data.iter().enumerate() {
            for (j, x) in r.iter() {
                t.set(j, i, x.clone());
            }
        }
        t
    }
}

/// Result of [`row_reduce`].
#[derive(Clone, Debug)]
pub struct RowReduction {
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
    pub reduced: RationalMatrix,
}

/// Incrementally maintained echelon basis of a span.
///
/// Every stored row has a leading 1 at a distinct pivot column. With tracking
/// enabled, each row also carries its expression in terms of the inserted
/// generators, so [`Echelon::express`] can return coordinates.
#[derive(Clone, Debug)]
pub struct Echelon {
    len: usize,
    track: bool,
    pivots: BTreeMap<usize, usize>,
    rows: Vec<QVector>,
    combos: Vec<BTreeMap<usize, Q>>,
    inserted: usize,
}

impl Echelon {
    pub fn new(len: usize) -> Self {
        Echelon {
            len,
            track: false,
            pivots: BTreeMap::new(),
            rows: Vec::new(),
            combos: Vec::new(),
            inserted: 0,
        }
    }

    pub fn tracking(len: usize) -> Self {
        Echelon { track: true, ..Self::new(len) }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn generators(&self) -> usize {
        self.inserted
    }

    pub fn pivot_cols(&self) -> Vec<usize> {
        self.pivots.keys().copied().collect()
    }

    /// Rows of the echelon basis, ordered by pivot column.
    pub fn basis(&self) -> Vec<QVector> {
        self.pivots.values().map(|&r| self.rows[r].clone()).collect()
    }

    fn check(&self, v: &QVector) -> Result<(), LinAlgError> {
        if v.len() != self.len {
            return Err(LinAlgError::DimensionMismatch { expected: self.len, found: v.len() });
        }
        Ok(())
    }

    /// Returns `(r, c)` with `v = r + sum_p c_p * row_p`, where `r` has no
    /// entries in pivot columns; `c` is accumulated over generators.
    fn reduce(&self, mut v: QVector) -> (QVector, BTreeMap<usize, Q>) {
        let mut combo: BTreeMap<usize, Q> = BTreeMap::new();
        let mut cursor = 0usize;
        loop {
            let next = v
                .entries
                .range(cursor..)
                .find(|(c, _)| self.pivots.contains_key(c))
                .map(|(&c, x)| (c, x.clone()));
            let Some((col, x)) = next else { break };
            let r = self.pivots[&col];
            v.add_scaled(&-x.clone(), &self.rows[r]);
            if self.track {
                for (&g, y) in &self.combos[r] {
                    let slot = combo.entry(g).or_insert_with(Q::zero);
                    *slot += &x * y;
                }
            }
            cursor = col + 1;
        }
        combo.retain(|_, x| !x.is_zero());
        (v, combo)
    }

    /// Inserts a generator; returns whether it enlarged the span.
    pub fn insert(&mut self, v: &QVector) -> Result<bool, LinAlgError> {
        self.check(v)?;
        let gen = self.inserted;
        self.inserted += 1;
        let (mut rem, combo) = self.reduce(v.clone());
        let Some((col, lead)) = rem.leading().map(|(c, x)| (c, x.clone())) else {
            return Ok(false);
        };
        let inv = lead.recip();
        rem.scale(&inv);
        if self.track {
            let mut c: BTreeMap<usize, Q> = combo.into_iter().map(|(g, x)| (g, -x * &inv)).collect();
            c.insert(gen, inv);
            self.combos.push(c);
        } else {
            self.combos.push(BTreeMap::new());
        }
        self.pivots.insert(col, self.rows.len());
        self.rows.push(rem);
        Ok(true)
    }

    pub fn contains(&self, v: &QVector) -> Result<bool, LinAlgError> {
        self.check(v)?;
        Ok(self.reduce(v.clone()).0.is_zero())
    }

    /// Coordinates of `v` over the inserted generators, if `v` is in the span.
    /// Requires tracking.
    pub fn express(&self, v: &QVector) -> Result<Option<QVector>, LinAlgError> {
        assert!(self.track, "Echelon::express needs a tracking echelon");
        self.check(v)?;
        let (rem, combo) = self.reduce(v.clone());
        if !rem.is_zero() {
            return Ok(None);
        }
        Ok(Some(QVector::from_entries(self.inserted, combo)))
    }

    /// Component of `v` outside the span (zero iff `v` is in the span).
    pub fn remainder(&self, v: &QVector) -> Result<QVector, LinAlgError> {
        self.check(v)?;
        Ok(self.reduce(v.clone()).0)
    }
}

/// Reduced row-echelon form with leftmost pivots normalised to 1.
pub fn row_reduce(m: &RationalMatrix) -> RowReduction {
    let mut ech = Echelon::new(m.cols());
    for r in m.row_vectors() {
        ech.insert(r).expect("row length matches column count");
    }
    let pivot_cols = ech.pivot_cols();
    let mut rows = ech.basis();
    // Back substitution: clear entries above each pivot, last pivot first.
    for i in (0..rows.len()).rev() {
        let pc = pivot_cols[i];
        let (above, rest) = rows.split_at_mut(i);
        let pivot_row = &rest[0];
        for r in above.iter_mut() {
            if let Some(x) = r.get_ref(pc).cloned() {
                r.add_scaled(&-x, pivot_row);
            }
        }
    }
    let rank = rows.len();
    rows.resize(m.rows(), QVector::zeros(m.cols()));
    let reduced = RationalMatrix::from_rows(m.cols(), rows).expect("consistent widths");
    RowReduction { rank, pivot_cols, reduced }
}

/// Basis of the right kernel `{v : m v = 0}`, one vector per free column.
pub fn kernel_basis(m: &RationalMatrix) -> Vec<QVector> {
    let rr = row_reduce(m);
    let mut is_pivot = vec![false; m.cols()];
    for &c in &rr.pivot_cols {
        is_pivot[c] = true;
    }
    (0..m.cols())
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = QVector::zeros(m.cols());
            v.set(free, Q::one());
            for (i, &pc) in rr.pivot_cols.iter().enumerate() {
                let x = rr.reduced.get(i, free);
                v.set(pc, -x);
            }
            v
        })
        .collect()
}

/// Coordinates expressing `v` over `gens`, or `None` if `v` is outside their span.
pub fn image_membership(v: &QVector, gens: &[QVector]) -> Result<Option<Vec<Q>>, LinAlgError> {
    let mut ech = Echelon::tracking(v.len());
    for g in gens {
        ech.insert(g)?;
    }
    Ok(ech.express(v)?.map(|c| c.to_dense()))
}

/// Vectors of `space`, chosen greedily in input order, that extend a basis of
/// `span(sub)` to a basis of `span(space)`.
pub fn quotient_representatives(
    space: &[QVector],
    sub: &[QVector],
) -> Result<Vec<QVector>, LinAlgError> {
    let Some(len) = space.first().or(sub.first()).map(QVector::len) else {
        return Ok(Vec::new());
    };
    let mut ambient = Echelon::new(len);
    for v in space {
        ambient.insert(v)?;
    }
    let mut ech = Echelon::new(len);
    for (index, w) in sub.iter().enumerate() {
        if !ambient.contains(w)? {
            return Err(LinAlgError::NotContained { index });
        }
        ech.insert(w)?;
    }
    let mut reps = Vec::new();
    for v in space {
        if ech.insert(v)? {
            reps.push(v.clone());
        }
    }
    Ok(reps)
}

/// Rank of the span of a list of vectors.
pub fn rank_of(vectors: &[QVector]) -> usize {
    let Some(len) = vectors.first().map(QVector::len) else { return 0 };
    let mut ech = Echelon::new(len);
    for v in vectors {
        ech.insert(v).expect("uniform lengths");
    }
    ech.rank()
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_reduce_examples() {
        let id = RationalMatrix::identity(2);
        let rr = row_reduce(&id);
        assert_eq!((rr.rank, rr.pivot_cols.clone()), (2, vec![0, 1]));
        assert_eq!(rr.reduced, id);

        let z = RationalMatrix::zeros(3, 3);
        let rr = row_reduce(&z);
        assert_eq!(rr.rank, 0);
        assert!(rr.pivot_cols.is_empty());

        let m = RationalMatrix::from_ints(&[&[1, 2], &[2, 4]]);
        let rr = row_reduce(&m);
        assert_eq!((rr.rank, rr.pivot_cols), (1, vec![0]));
        assert_eq!(rr.reduced, RationalMatrix::from_ints(&[&[1, 2], &[0, 0]]));
    }

    #[test]
    fn rref_is_reduced() {
        let m = RationalMatrix::from_ints(&[&[0, 2, 4, 1], &[1, 1, 1, 1], &[1, 3, 5, 2]]);
        let rr = row_reduce(&m);
        assert_eq!(rr.rank, 2);
        assert_eq!(rr.pivot_cols, vec![0, 1]);
        for (i, &pc) in rr.pivot_cols.iter().enumerate() {
            for r in 0..rr.rank {
                let expect = if r == i { Q::one() } else { Q::zero() };
                assert_eq!(rr.reduced.get(r, pc), expect);
            }
        }
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&RationalMatrix::identity(2)).is_empty());
        assert_eq!(kernel_basis(&RationalMatrix::zeros(1, 3)).len(), 3);
        let m = RationalMatrix::from_ints(&[&[1, 1, 0]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).unwrap().is_zero());
        }
        assert_eq!(rank_of(&k), 2);
    }

    #[test]
    fn membership_examples() {
        let gens = vec![QVector::from_ints(&[1, 2, 0]), QVector::from_ints(&[0, 1, 1])];
        let c = image_membership(&gens[0], &gens).unwrap().unwrap();
        assert_eq!(c, vec![q(1), q(0)]);
        let c = image_membership(&QVector::zeros(3), &gens).unwrap().unwrap();
        assert_eq!(c, vec![q(0), q(0)]);
        let rank1 = vec![QVector::from_ints(&[1, 1, 1])];
        assert!(image_membership(&QVector::from_ints(&[1, 0, 0]), &rank1).unwrap().is_none());
        let err = image_membership(&QVector::from_ints(&[1, 0]), &gens).unwrap_err();
        assert!(matches!(err, LinAlgError::DimensionMismatch { .. }));
    }

    #[test]
    fn membership_coordinates_reconstruct() {
        let gens = vec![
            QVector::from_ints(&[1, 2, 0, 1]),
            QVector::from_ints(&[0, 1, 1, 0]),
            QVector::from_ints(&[1, 3, 1, 1]),
            QVector::from_ints(&[2, 0, 0, 5]),
        ];
        let target = &gens[3].scaled(&q_frac(3, 7)) - &gens[1].scaled(&q(2));
        let coords = image_membership(&target, &gens).unwrap().unwrap();
        let mut back = QVector::zeros(4);
        for (c, g) in coords.iter().zip(&gens) {
            back.add_scaled(c, g);
        }
        assert_eq!(back, target);
    }

    #[test]
    fn quotient_examples() {
        let a = QVector::from_ints(&[1, 0, 0]);
        let b = QVector::from_ints(&[0, 1, 0]);
        let c = QVector::from_ints(&[0, 0, 1]);
        let reps = quotient_representatives(&[a.clone(), b.clone()], &[a.clone()]).unwrap();
        assert_eq!(reps, vec![b.clone()]);
        assert!(quotient_representatives(&[a.clone(), b.clone()], &[a.clone(), b.clone()])
            .unwrap()
            .is_empty());
        let space = vec![&a + &b, b.clone(), c.clone()];
        let sub = vec![&b + &c];
        let reps = quotient_representatives(&space, &sub).unwrap();
        assert_eq!(reps.len(), 2);
        let mut all = reps.clone();
        all.extend(sub);
        assert_eq!(rank_of(&all), 3);
        let err = quotient_representatives(&[a.clone()], &[b]).unwrap_err();
        assert_eq!(err, LinAlgError::NotContained { index: 0 });
    }

    #[test]
    fn rational_text_round_trip() {
        for s in ["0", "-3", "5/103", "-140616/103"] {
            assert_eq!(format_q(&parse_q(s).unwrap()), s);
        }
        assert_eq!(format_q(&parse_q("4/2").unwrap()), "2");
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn matrix() -> impl Strategy<Value = RationalMatrix> {
            (1usize..6, 1usize..7).prop_flat_map(|(r, c)| {
                proptest::collection::vec(-3i64..=3, r * c).prop_map(move |xs| {
                    let rows: Vec<QVector> =
                        xs.chunks(c).map(QVector::from_ints).collect();
                    RationalMatrix::from_rows(c, rows).unwrap()
                })
            })
        }

        proptest! {
            #[test]
            fn rank_nullity(m in matrix()) {
                let rr = row_reduce(&m);
                let k = kernel_basis(&m);
                prop_assert_eq!(rr.rank + k.len(), m.cols());
                for v in &k {
                    prop_assert!(m.mul_vec(v).unwrap().is_zero());
                }
                prop_assert_eq!(rank_of(&k), k.len());
            }

            #[test]
            fn quotient_completes_basis(m in matrix(), take in 0usize..4) {
                let space: Vec<QVector> = m.row_vectors().to_vec();
                let sub: Vec<QVector> = space.iter().take(take).cloned().collect();
                let reps = quotient_representatives(&space, &sub).unwrap();
                let mut all = reps.clone();
                all.extend(sub.iter().cloned());
                prop_assert_eq!(rank_of(&all), rank_of(&space));
                prop_assert_eq!(reps.len(), rank_of(&space) - rank_of(&sub));
            }

            #[test]
            fn deterministic(m in matrix()) {
                let a = row_reduce(&m);
                let b = row_reduce(&m);
                prop_assert_eq!(a.reduced, b.reduced);
                prop_assert_eq!(a.pivot_cols, b.pivot_cols);
            }
        }
    }
}
