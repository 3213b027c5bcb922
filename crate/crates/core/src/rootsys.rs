//! Root systems of the simple Lie algebras, Chevalley structure constants and
//! Weyl group length statistics.
//!
//! Roots are stored by their coefficients over the simple roots. Positive
//! roots are ordered by `(level, coordinates)` lexicographically; this order
//! fixes basis indices everywhere else in the crate.
//!
//! Structure constants `N(a, b)` follow the extraspecial-pair construction:
//! every extraspecial pair gets the positive sign `N = p + 1`, the remaining
//! positive pairs are forced by the four-root relation, and pairs involving
//! negative roots come from `N(-a,-b) = -N(a,b)` and the three-root relation.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootSystemError {
    #[error("invalid Cartan type {0:?}")]
    InvalidType(String),
    #[error("Weyl group has more than {bound} elements")]
    WeylGroupTooLarge { bound: usize },
}

/// Integer vector over the simple roots; used for roots and for the weights
/// of basis vectors and cochains.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<i64>);

/// A root is a weight that happens to lie in the root system.
pub type Root = Weight;

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut w = vec![0; rank];
        w[i] = 1;
        Weight(w)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn level(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Nonzero with all coordinates nonnegative.
    pub fn is_positive(&self) -> bool {
        !self.is_zero() && self.0.iter().all(|&c| c >= 0)
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

impl Mul<&Weight> for i64 {
    type Output = Weight;
    fn mul(self, rhs: &Weight) -> Weight {
        Weight(rhs.0.iter().map(|a| self * a).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CartanType {
    pub series: Series,
    pub rank: usize,
}

impl CartanType {
    pub fn new(series: Series, rank: usize) -> Result<Self, RootSystemError> {
        let ok = match series {
            Series::A => rank >= 1,
            Series::B => rank >= 2,
            Series::C => rank >= 3,
            Series::D => rank >= 4,
            Series::E => (6..=8).contains(&rank),
            Series::F => rank == 4,
            Series::G => rank == 2,
        };
        if ok {
            Ok(CartanType { series, rank })
        } else {
            Err(RootSystemError::InvalidType(format!("{series:?}{rank}")))
        }
    }
}

impl FromStr for CartanType {
    type Err = RootSystemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || RootSystemError::InvalidType(s.to_string());
        let mut chars = t.chars();
        let series = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Series::A,
            Some('B') => Series::B,
            Some('C') => Series::C,
            Some('D') => Series::D,
            Some('E') => Series::E,
            Some('F') => Series::F,
            Some('G') => Series::G,
            _ => return Err(bad()),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
        CartanType::new(series, rank)
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.series, self.rank)
    }
}

/// Gram matrix `(a_i, a_j)` of the simple roots, scaled to integers.
///
/// Bourbaki numbering, except for G2 where the first simple root is the long
/// one, so that the positive roots read (1,0),(0,1),(1,1),(1,2),(1,3),(2,3).
fn gram_matrix(t: CartanType) -> Vec<Vec<i64>> {
    let n = t.rank;
    let mut g = vec![vec![0i64; n]; n];
    let link = |g: &mut Vec<Vec<i64>>, i: usize, j: usize, v: i64| {
        g[i][j] = v;
        g[j][i] = v;
    };
    match t.series {
        Series::A => {
            for i in 0..n {
                g[i][i] = 2;
            }
            for i in 0..n.saturating_sub(1) {
                link(&mut g, i, i + 1, -1);
            }
        }
        Series::B => {
            for i in 0..n {
                g[i][i] = 4;
            }
            g[n - 1][n - 1] = 2;
            for i in 0..n - 1 {
                link(&mut g, i, i + 1, -2);
            }
        }
        Series::C => {
            for i in 0..n {
                g[i][i] = 2;
            }
            g[n - 1][n - 1] = 4;
            for i in 0..n - 2 {
                link(&mut g, i, i + 1, -1);
            }
            link(&mut g, n - 2, n - 1, -2);
        }
        Series::D => {
            for i in 0..n {
                g[i][i] = 2;
            }
            for i in 0..n - 2 {
                link(&mut g, i, i + 1, -1);
            }
            link(&mut g, n - 3, n - 1, -1);
        }
        Series::E => {
            for i in 0..n {
                g[i][i] = 2;
            }
            // 1-3-4-5-6-7-8 with 2 attached to 4 (one-based).
            link(&mut g, 0, 2, -1);
            link(&mut g, 1, 3, -1);
            for i in 2..n - 1 {
                link(&mut g, i, i + 1, -1);
            }
        }
        Series::F => {
            g[0][0] = 4;
            g[1][1] = 4;
            g[2][2] = 2;
            g[3][3] = 2;
            link(&mut g, 0, 1, -2);
            link(&mut g, 1, 2, -2);
            link(&mut g, 2, 3, -1);
        }
        Series::G => {
            g[0][0] = 6;
            g[1][1] = 2;
            link(&mut g, 0, 1, -3);
        }
    }
    g
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    cartan_type: CartanType,
    gram: Vec<Vec<i64>>,
    positive: Vec<Root>,
    index: HashMap<Root, usize>,
    /// `N(a, b)` for positive `a`, `b` with `a + b` a root, keyed by indices.
    n_positive: HashMap<(usize, usize), i64>,
    max_root: usize,
    m: Vec<usize>,
}

/// Default guard for [`RootSystem::weyl_length_counts`].
pub const DEFAULT_WEYL_BOUND: usize = 1_000_000;

impl RootSystem {
    pub fn new(t: CartanType) -> Self {
        let gram = gram_matrix(t);
        let rank = t.rank;
        let mut rs = RootSystem {
            cartan_type: t,
            gram,
            positive: Vec::new(),
            index: HashMap::new(),
            n_positive: HashMap::new(),
            max_root: 0,
            m: Vec::new(),
        };
        rs.close_positive_roots(rank);
        rs.max_root = (0..rs.positive.len())
            .max_by_key(|&i| (rs.positive[i].level(), i))
            .expect("nonempty root system");
        rs.m = (0..rank).map(|i| rs.compute_m(i)).collect();
        rs.fill_structure_constants();
        rs
    }

    pub fn build(series: Series, rank: usize) -> Result<Self, RootSystemError> {
        Ok(Self::new(CartanType::new(series, rank)?))
    }

    fn close_positive_roots(&mut self, rank: usize) {
        let mut by_level: Vec<Vec<Root>> = vec![(0..rank).map(|i| Weight::unit(rank, i)).collect()];
        let mut known: HashMap<Root, ()> = by_level[0].iter().map(|r| (r.clone(), ())).collect();
        loop {
            let mut next: Vec<Root> = Vec::new();
            for beta in by_level.last().unwrap() {
                for i in 0..rank {
                    let ai = Weight::unit(rank, i);
                    // alpha_i-string through beta: beta - p a_i .. beta + q a_i, p - q = <beta, a_i^v>.
                    let mut p = 0i64;
                    loop {
                        let w = beta - &((p + 1) * &ai);
                        if known.contains_key(&w) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    let q = p - self.coroot_pairing(beta, i);
                    let up = beta + &ai;
                    if q > 0 && !known.contains_key(&up) && !next.contains(&up) {
                        next.push(up);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            for r in &next {
                known.insert(r.clone(), ());
            }
            by_level.push(next);
        }
        let mut all: Vec<Root> = by_level.into_iter().flatten().collect();
        all.sort_by(|a, b| (a.level(), &a.0).cmp(&(b.level(), &b.0)));
        self.index = all.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        self.positive = all;
    }

    fn compute_m(&self, i: usize) -> usize {
        let mu = self.max_root();
        let ai = self.simple_root(i);
        let mut m = 0usize;
        loop {
            let w = mu - &((m as i64 + 1) * &ai);
            if self.index.contains_key(&w) {
                m += 1;
            } else {
                return m;
            }
        }
    }

    fn fill_structure_constants(&mut self) {
        let npos = self.positive.len();
        for xi in 0..npos {
            let target = self.positive[xi].clone();
            // Pairs (a, b) with a < b in the root order and a + b = target.
            let pairs: Vec<(usize, usize)> = (0..npos)
                .filter_map(|a| {
                    let b = self.index.get(&(&target - &self.positive[a]))?;
                    (a < *b).then_some((a, *b))
                })
                .collect();
            let Some(&(a0, b0)) = pairs.first() else { continue };
            let (ra0, rb0) = (self.positive[a0].clone(), self.positive[b0].clone());
            let n0 = self.string_length(&ra0, &rb0) + 1;
            self.n_positive.insert((a0, b0), n0);
            self.n_positive.insert((b0, a0), -n0);
            let xi_norm = self.norm(&target);
            for &(a, b) in &pairs[1..] {
                let (ra, rb) = (self.positive[a].clone(), self.positive[b].clone());
                let mut acc = Ratio::new(0i64, 1);
                let d1 = &rb - &ra0;
                if self.is_root(&d1) {
                    let t = self.n(&rb, &-&ra0) * self.n(&ra, &-&rb0);
                    acc += Ratio::new(t, self.norm(&d1));
                }
                let d2 = &ra - &ra0;
                if self.is_root(&d2) {
                    let t = self.n(&-&ra0, &ra) * self.n(&rb, &-&rb0);
                    acc += Ratio::new(t, self.norm(&d2));
                }
                let val = acc * Ratio::from_integer(xi_norm) / Ratio::from_integer(n0);
                assert!(val.is_integer(), "non-integral structure constant for {ra} + {rb}");
                let val = val.to_integer();
                debug_assert_eq!(val.abs(), self.string_length(&ra, &rb) + 1);
                self.n_positive.insert((a, b), val);
                self.n_positive.insert((b, a), -val);
            }
        }
    }

    /// `p = max{k : b - k a is a root}` (roots of either sign).
    fn string_length(&self, a: &Root, b: &Root) -> i64 {
        let mut p = 0;
        loop {
            let w = b - &((p + 1) * a);
            if self.is_root(&w) {
                p += 1;
            } else {
                return p;
            }
        }
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn rank(&self) -> usize {
        self.cartan_type.rank
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    pub fn num_positive(&self) -> usize {
        self.positive.len()
    }

    pub fn root_index(&self, r: &Root) -> Option<usize> {
        self.index.get(r).copied()
    }

    pub fn simple_root(&self, i: usize) -> Root {
        Weight::unit(self.rank(), i)
    }

    pub fn is_root(&self, w: &Weight) -> bool {
        self.index.contains_key(w) || self.index.contains_key(&-w)
    }

    /// Symmetric form `(u, v)` in the integer normalisation of [`gram_matrix`].
    pub fn inner(&self, u: &Weight, v: &Weight) -> i64 {
        let r = self.rank();
        let mut s = 0;
        for i in 0..r {
            if u.0[i] == 0 {
                continue;
            }
            for j in 0..r {
                s += u.0[i] * self.gram[i][j] * v.0[j];
            }
        }
        s
    }

    pub fn norm(&self, u: &Weight) -> i64 {
        self.inner(u, u)
    }

    /// `<w, a_i^v> = 2 (w, a_i) / (a_i, a_i)`.
    pub fn coroot_pairing(&self, w: &Weight, i: usize) -> i64 {
        let num: i64 = (0..self.rank()).map(|j| w.0[j] * self.gram[j][i]).sum();
        2 * num / self.gram[i][i]
    }

    /// Cartan matrix `A[i][j] = <a_j, a_i^v>`.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let r = self.rank();
        (0..r)
            .map(|i| (0..r).map(|j| self.coroot_pairing(&self.simple_root(j), i)).collect())
            .collect()
    }

    /// Coefficients of the coroot `h_a` over the simple coroots `h_i`.
    pub fn coroot_coefficients(&self, a: &Root) -> Vec<i64> {
        let na = self.norm(a);
        (0..self.rank())
            .map(|i| {
                let num = a.0[i] * self.gram[i][i];
                debug_assert_eq!(num % na, 0);
                num / na
            })
            .collect()
    }

    /// Chevalley structure constant `N(a, b)` for arbitrary roots, zero when
    /// `a + b` is not a root.
    pub fn n(&self, a: &Root, b: &Root) -> i64 {
        let s = a + b;
        if s.is_zero() || !self.is_root(&s) {
            return 0;
        }
        match (a.is_positive(), b.is_positive()) {
            (true, true) => *self
                .n_positive
                .get(&(self.index[a], self.index[b]))
                .unwrap_or_else(|| panic!("structure constant N({a}, {b}) requested before it was set")),
            (false, false) => -self.n(&-a, &-b),
            (true, false) => {
                // a + b + c = 0, N(a,b)/(c,c) = N(b,c)/(a,a) = N(c,a)/(b,b).
                let c = -&s;
                let (num, den) = if c.is_positive() {
                    (self.norm(&c) * self.n(&c, a), self.norm(b))
                } else {
                    (self.norm(&c) * self.n(b, &c), self.norm(a))
                };
                debug_assert_eq!(num % den, 0);
                num / den
            }
            (false, true) => -self.n(b, a),
        }
    }

    /// `N(a, b)` for positive roots given by index; `None` if `a + b` is not a root.
    pub fn n_positive(&self, a: usize, b: usize) -> Option<i64> {
        self.n_positive.get(&(a, b)).copied()
    }

    pub fn max_root(&self) -> &Root {
        &self.positive[self.max_root]
    }

    pub fn level(&self, a: &Root) -> i64 {
        a.level()
    }

    /// `m_i = max{m : mu - k a_i is a positive root for k = 0..m}`.
    pub fn m_values(&self) -> &[usize] {
        &self.m
    }

    /// `gamma_i = mu - m_i a_i`.
    pub fn gamma(&self, i: usize) -> Root {
        self.max_root() - &((self.m[i] as i64) * &self.simple_root(i))
    }

    /// Number of Weyl group elements of each length, enumerated as the orbit
    /// of the regular weight rho (breadth-first in the simple reflections).
    pub fn weyl_length_counts(&self, bound: usize) -> Result<Vec<usize>, RootSystemError> {
        let r = self.rank();
        let cartan = self.cartan_matrix();
        // In fundamental-weight coordinates s_i(l) = l - l_i a_i and
        // a_i has coordinates <a_i, a_j^v> = cartan[j][i].
        let rho = vec![1i64; r];
        let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
        seen.insert(rho.clone(), 0);
        let mut queue = VecDeque::from([rho]);
        let mut counts = vec![1usize];
        while let Some(w) = queue.pop_front() {
            let len = seen[&w];
            for i in 0..r {
                let li = w[i];
                let next: Vec<i64> = (0..r).map(|j| w[j] - li * cartan[j][i]).collect();
                if seen.contains_key(&next) {
                    continue;
                }
                if seen.len() >= bound {
                    return Err(RootSystemError::WeylGroupTooLarge { bound });
                }
                seen.insert(next.clone(), len + 1);
                if counts.len() <= len + 1 {
                    counts.push(0);
                }
                counts[len + 1] += 1;
                queue.push_back(next);
            }
        }
        Ok(counts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(s: &str) -> RootSystem {
        RootSystem::new(s.parse().unwrap())
    }

    #[test]
    fn positive_root_counts() {
        let expected = [
            ("A1", 1),
            ("A2", 3),
            ("A3", 6),
            ("A4", 10),
            ("B2", 4),
            ("B3", 9),
            ("C3", 9),
            ("D4", 12),
            ("G2", 6),
            ("F4", 24),
            ("E6", 36),
            ("E7", 63),
            ("E8", 120),
        ];
        for (t, n) in expected {
            assert_eq!(rs(t).num_positive(), n, "{t}");
        }
        for n in 1..7 {
            assert_eq!(rs(&format!("A{n}")).num_positive(), n * (n + 1) / 2);
        }
    }

    #[test]
    fn low_rank_roots() {
        let a2: Vec<_> = rs("A2").positive_roots().iter().map(|r| r.0.clone()).collect();
        assert_eq!(a2, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
        let g2: Vec<_> = rs("G2").positive_roots().iter().map(|r| r.0.clone()).collect();
        assert_eq!(g2, vec![vec![0, 1], vec![1, 0], vec![1, 1], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(rs("A1").num_positive(), 1);
    }

    #[test]
    fn invalid_types() {
        for t in ["A0", "B1", "C2", "D3", "E5", "E9", "F3", "G3", "X2", "", "A"] {
            assert!(t.parse::<CartanType>().is_err(), "{t}");
        }
    }

    #[test]
    fn levels_and_max_roots() {
        assert_eq!(rs("A2").simple_root(0).level(), 1);
        assert_eq!(rs("G2").max_root().0, vec![2, 3]);
        assert_eq!(rs("G2").max_root().level(), 5);
        assert_eq!(rs("B2").max_root().level(), 3);
        // Level of mu below 5 exactly for A1..A4 and B2 among small types.
        for (t, small) in [("A1", true), ("A2", true), ("A3", true), ("A4", true), ("B2", true),
                           ("A5", false), ("B3", false), ("C3", false), ("D4", false), ("G2", false), ("F4", false)] {
            assert_eq!(rs(t).max_root().level() < 5, small, "{t}");
        }
    }

    #[test]
    fn m_values_examples() {
        let g2 = rs("G2");
        assert_eq!(g2.m_values(), &[1, 0]);
        assert_eq!(g2.gamma(0).0, vec![1, 3]);
        assert_eq!(g2.gamma(1).0, vec![2, 3]);
        assert_eq!(rs("A2").m_values(), &[1, 1]);
        for t in ["A1", "A3", "A4", "B2", "B3", "C3", "C4", "D4", "D5", "G2", "F4", "E6", "E7", "E8"] {
            let r = rs(t);
            for i in 0..r.rank() {
                let m = r.m_values()[i] as i64;
                assert!(m <= 3);
                let ai = r.simple_root(i);
                let last = r.max_root() - &(m * &ai);
                assert!(r.root_index(&last).is_some(), "{t}");
                assert!(r.root_index(&(r.max_root() - &((m + 1) * &ai))).is_none(), "{t}");
            }
        }
    }

    #[test]
    fn structure_constant_magnitudes_and_antisymmetry() {
        for t in ["A3", "B3", "C3", "D4", "G2", "F4", "E6"] {
            let r = rs(t);
            let all: Vec<Root> = r
                .positive_roots()
                .iter()
                .flat_map(|a| [a.clone(), -a])
                .collect();
            for a in &all {
                for b in &all {
                    let n = r.n(a, b);
                    assert_eq!(n, -r.n(b, a), "{t}");
                    let s = a + b;
                    if !s.is_zero() && r.is_root(&s) {
                        assert_eq!(n.abs(), r.string_length(a, b) + 1, "{t} {a} {b}");
                        assert_eq!(r.n(&-a, &-b), -n);
                    } else {
                        assert_eq!(n, 0);
                    }
                }
            }
        }
    }

    #[test]
    fn weyl_counts() {
        assert_eq!(rs("A1").weyl_length_counts(DEFAULT_WEYL_BOUND).unwrap(), vec![1, 1]);
        assert_eq!(rs("A2").weyl_length_counts(DEFAULT_WEYL_BOUND).unwrap(), vec![1, 2, 2, 1]);
        assert_eq!(rs("B2").weyl_length_counts(DEFAULT_WEYL_BOUND).unwrap(), vec![1, 2, 2, 2, 1]);
        assert_eq!(
            rs("G2").weyl_length_counts(DEFAULT_WEYL_BOUND).unwrap(),
            vec![1, 2, 2, 2, 2, 2, 1]
        );
        for (t, order) in [("A3", 24usize), ("B3", 48), ("D4", 192), ("F4", 1152), ("E6", 51840)] {
            let c = rs(t).weyl_length_counts(DEFAULT_WEYL_BOUND).unwrap();
            assert_eq!(c.iter().sum::<usize>(), order, "{t}");
            assert_eq!(c.len() - 1, rs(t).num_positive(), "{t}");
            let mut rev = c.clone();
            rev.reverse();
            assert_eq!(c, rev, "{t} palindromic");
        }
        assert!(matches!(
            rs("E6").weyl_length_counts(1000),
            Err(RootSystemError::WeylGroupTooLarge { bound: 1000 })
        ));
    }

    /// Independent oracle: enumerate S_3 as permutations and count inversions.
    #[test]
    fn weyl_a2_matches_inversion_count() {
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let mut counts = vec![0usize; 4];
        for p in perms {
            let inv = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            counts[inv] += 1;
        }
        assert_eq!(rs("A2").weyl_length_counts(DEFAULT_WEYL_BOUND).unwrap(), counts);
    }
}
