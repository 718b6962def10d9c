//! Crystallographic root systems built from tabulated Cartan data.
//!
//! Roots are integer vectors over the simple roots, coroots are integer
//! vectors over the simple coroots. The bilinear form is normalized so that
//! short roots have squared length 2, which makes the symmetrizer
//! `d_i = (α_i|α_i)/2` an integer in `{1, 2, 3}`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// Cartan–Killing family letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

/// A finite crystallographic type such as `B3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(CartanType { family, rank })
        } else {
            Err(Error::InvalidType(format!("{family:?}{rank}")))
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let letter = chars.next().ok_or_else(|| Error::InvalidType(s.to_string()))?;
        let family = match letter.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return Err(Error::InvalidType(s.to_string())),
        };
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::InvalidType(s.to_string()))?;
        CartanType::new(family, rank)
    }
}

/// A root, as coefficients over the simple roots.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root(Vec<i64>);

impl Root {
    pub fn new(coords: Vec<i64>) -> Self {
        Root(coords)
    }

    pub fn simple(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        Root(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// Positive iff the first nonzero coefficient is positive.
    pub fn is_positive(&self) -> bool {
        self.0.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
    }

    pub fn neg(&self) -> Root {
        Root(self.0.iter().map(|x| -x).collect())
    }

    /// The positive representative of `±self`.
    pub fn canonical(&self) -> Root {
        if self.is_positive() {
            self.clone()
        } else {
            self.neg()
        }
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_coords(f, &self.0)
    }
}

impl fmt::Debug for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Root({self})")
    }
}

impl FromStr for Root {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_coords(s).map(Root)
    }
}

impl Serialize for Root {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Root {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A vector over the simple coroots; coroots and coroot-lattice translations
/// both use this type.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CorootVector(Vec<i64>);

impl CorootVector {
    pub fn new(coords: Vec<i64>) -> Self {
        CorootVector(coords)
    }

    pub fn zero(rank: usize) -> Self {
        CorootVector(vec![0; rank])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &CorootVector) -> CorootVector {
        CorootVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &CorootVector) -> CorootVector {
        CorootVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> CorootVector {
        CorootVector(self.0.iter().map(|x| k * x).collect())
    }

    pub fn neg(&self) -> CorootVector {
        self.scale(-1)
    }
}

impl fmt::Display for CorootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_coords(f, &self.0)
    }
}

impl fmt::Debug for CorootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coroot({self})")
    }
}

fn write_coords(f: &mut fmt::Formatter<'_>, v: &[i64]) -> fmt::Result {
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

pub(crate) fn parse_coords(s: &str) -> Result<Vec<i64>> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty coordinate list".into()));
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad integer {t:?} in {s:?}")))
        })
        .collect()
}

/// A finite crystallographic root system.
///
/// Immutable after construction. Positive roots are kept in lexicographic
/// order of their coordinates; that order is the canonical root order used
/// for every enumeration in the crate.
#[derive(Clone, Debug)]
pub struct RootSystem {
    cartan_type: CartanType,
    cartan: Vec<Vec<i64>>,
    gram: Vec<Vec<i64>>,
    symmetrizer: Vec<i64>,
    roots: Vec<Root>,
    positive: Vec<Root>,
    positive_index: HashMap<Root, usize>,
    highest_root: Root,
    ratio_delta: i64,
    reflection_root_action: Vec<IntMatrix>,
    reflection_coroot_action: Vec<IntMatrix>,
    reflection_lookup: HashMap<IntMatrix, usize>,
}

impl RootSystem {
    /// Builds the root system of the given finite type.
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        Self::from_type(CartanType::new(family, rank)?)
    }

    pub fn from_type(cartan_type: CartanType) -> Result<Self> {
        let (gram, symmetrizer) = dynkin_data(cartan_type);
        let n = cartan_type.rank;
        let cartan: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| gram[i][j] / symmetrizer[i]).collect())
            .collect();
        let ratio_delta = *symmetrizer.iter().max().unwrap();

        let roots = close_roots(&cartan);
        let mut positive: Vec<Root> = roots.iter().filter(|r| r.is_positive()).cloned().collect();
        positive.sort();
        let mut all = positive.clone();
        all.extend(positive.iter().map(Root::neg));

        let root_set: HashSet<&Root> = all.iter().collect();
        let tops: Vec<&Root> = positive
            .iter()
            .filter(|h| {
                (0..n).all(|i| {
                    let mut v = h.coords().to_vec();
                    v[i] += 1;
                    !root_set.contains(&Root(v))
                })
            })
            .collect();
        if tops.len() != 1 {
            return Err(Error::Internal(format!(
                "{cartan_type}: expected a unique highest root, found {}",
                tops.len()
            )));
        }
        let highest_root = tops[0].clone();
        let positive_index = positive.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();

        let mut rs = RootSystem {
            cartan_type,
            cartan,
            gram,
            symmetrizer,
            roots: all,
            positive,
            positive_index,
            highest_root,
            ratio_delta,
            reflection_root_action: Vec::new(),
            reflection_coroot_action: Vec::new(),
            reflection_lookup: HashMap::new(),
        };
        let (ra, ca): (Vec<_>, Vec<_>) = rs
            .positive
            .iter()
            .map(|a| (rs.root_action_matrix(a), rs.coroot_action_matrix(a)))
            .unzip();
        rs.reflection_lookup = ra.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        rs.reflection_root_action = ra;
        rs.reflection_coroot_action = ca;
        Ok(rs)
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn rank(&self) -> usize {
        self.cartan_type.rank
    }

    /// Cartan matrix with `a_ij = <α_j, α_i∨>`.
    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// Gram matrix of the bilinear form in simple-root coordinates.
    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn symmetrizer(&self) -> &[i64] {
        &self.symmetrizer
    }

    /// All roots: positive roots in canonical order followed by their negatives.
    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    pub fn simple_roots(&self) -> Vec<Root> {
        (0..self.rank()).map(|i| Root::simple(self.rank(), i)).collect()
    }

    pub fn highest_root(&self) -> &Root {
        &self.highest_root
    }

    /// Squared-length ratio of long to short roots (1 when simply laced).
    pub fn ratio_delta(&self) -> i64 {
        self.ratio_delta
    }

    pub fn is_simply_laced(&self) -> bool {
        self.ratio_delta == 1
    }

    pub fn is_root(&self, coords: &[i64]) -> bool {
        coords.len() == self.rank() && {
            let r = Root(coords.to_vec());
            self.positive_index.contains_key(&r.canonical()) && r.coords().iter().any(|&x| x != 0)
        }
    }

    pub fn check_root(&self, alpha: &Root) -> Result<()> {
        if self.is_root(alpha.coords()) {
            Ok(())
        } else {
            Err(Error::NotARoot(alpha.coords().to_vec()))
        }
    }

    /// Index of `±alpha` in [`positive_roots`](Self::positive_roots).
    pub fn positive_index(&self, alpha: &Root) -> Option<usize> {
        self.positive_index.get(&alpha.canonical()).copied()
    }

    /// `(x|y)` for vectors in simple-root coordinates.
    pub fn inner(&self, x: &[i64], y: &[i64]) -> i64 {
        let n = self.rank();
        let mut s = 0;
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..n {
                s += x[i] * self.gram[i][j] * y[j];
            }
        }
        s
    }

    /// `(α|α)/2`, equal to 1 for short roots and to δ for long ones.
    pub fn half_norm(&self, alpha: &Root) -> i64 {
        self.inner(alpha.coords(), alpha.coords()) / 2
    }

    pub fn is_long(&self, alpha: &Root) -> bool {
        self.half_norm(alpha) == self.ratio_delta
    }

    pub fn is_short(&self, alpha: &Root) -> bool {
        self.half_norm(alpha) == 1 && !self.is_simply_laced()
    }

    /// `<β, α∨> = 2(β|α)/(α|α)`.
    pub fn cartan_integer(&self, beta: &Root, alpha: &Root) -> i64 {
        self.inner(beta.coords(), alpha.coords()) / self.half_norm(alpha)
    }

    /// `(λ|α)` for a coroot-lattice vector and a root.
    pub fn pairing(&self, lam: &CorootVector, alpha: &Root) -> Result<i64> {
        self.check_len(lam.coords().len())?;
        self.check_len(alpha.rank())?;
        Ok(self.pairing_raw(lam.coords(), alpha.coords()))
    }

    pub(crate) fn pairing_raw(&self, lam: &[i64], alpha: &[i64]) -> i64 {
        let n = self.rank();
        let mut s = 0;
        for i in 0..n {
            if lam[i] == 0 {
                continue;
            }
            for j in 0..n {
                s += lam[i] * self.cartan[i][j] * alpha[j];
            }
        }
        s
    }

    /// `s_α(β) = β - <β, α∨> α`.
    pub fn reflect(&self, alpha: &Root, beta: &Root) -> Result<Root> {
        self.check_root(alpha)?;
        self.check_root(beta)?;
        Ok(self.reflect_unchecked(alpha, beta))
    }

    pub(crate) fn reflect_unchecked(&self, alpha: &Root, beta: &Root) -> Root {
        let c = self.cartan_integer(beta, alpha);
        Root(beta.coords().iter().zip(alpha.coords()).map(|(b, a)| b - c * a).collect())
    }

    /// `α∨ = 2α/(α|α)` in simple-coroot coordinates.
    pub fn coroot(&self, alpha: &Root) -> Result<CorootVector> {
        self.check_root(alpha)?;
        Ok(self.coroot_unchecked(alpha))
    }

    pub(crate) fn coroot_unchecked(&self, alpha: &Root) -> CorootVector {
        let d = self.half_norm(alpha);
        CorootVector(
            alpha
                .coords()
                .iter()
                .zip(&self.symmetrizer)
                .map(|(c, di)| {
                    debug_assert_eq!((c * di) % d, 0);
                    c * di / d
                })
                .collect(),
        )
    }

    /// Inverse of [`coroot`](Self::coroot): the root whose coroot is `v`.
    pub fn root_of_coroot(&self, v: &CorootVector) -> Option<Root> {
        [1, self.ratio_delta].into_iter().find_map(|d| {
            let c: Option<Vec<i64>> = v
                .coords()
                .iter()
                .zip(&self.symmetrizer)
                .map(|(x, di)| ((x * d) % di == 0).then_some(x * d / di))
                .collect();
            let r = Root(c?);
            (self.is_root(r.coords()) && self.coroot_unchecked(&r) == *v).then_some(r)
        })
    }

    /// Converts a vector of `V` from simple-root to simple-coroot coordinates.
    pub fn root_coords_to_coroot_coords(&self, x: &[i64]) -> Vec<i64> {
        x.iter().zip(&self.symmetrizer).map(|(a, d)| a * d).collect()
    }

    /// Matrix of `s_α` acting on simple-root coordinates.
    pub(crate) fn root_action_matrix(&self, alpha: &Root) -> IntMatrix {
        let n = self.rank();
        let cols: Vec<Vec<i64>> = (0..n)
            .map(|j| self.reflect_unchecked(alpha, &Root::simple(n, j)).0)
            .collect();
        IntMatrix::from_columns(&cols)
    }

    /// Matrix of `s_α` acting on simple-coroot coordinates.
    pub(crate) fn coroot_action_matrix(&self, alpha: &Root) -> IntMatrix {
        let n = self.rank();
        let av = self.coroot_unchecked(alpha);
        let cols: Vec<Vec<i64>> = (0..n)
            .map(|j| {
                let mut e = vec![0; n];
                e[j] = 1;
                let p = self.pairing_raw(&e, alpha.coords());
                e.iter().zip(av.coords()).map(|(x, a)| x - p * a).collect()
            })
            .collect();
        IntMatrix::from_columns(&cols)
    }

    /// Cached reflection matrices `(root action, coroot action)` of `s_α`.
    pub(crate) fn reflection_matrices(&self, alpha: &Root) -> Option<(&IntMatrix, &IntMatrix)> {
        let i = self.positive_index(alpha)?;
        Some((&self.reflection_root_action[i], &self.reflection_coroot_action[i]))
    }

    /// The positive root `α` with `s_α` acting by the given matrix, if any.
    pub(crate) fn reflection_root(&self, m: &IntMatrix) -> Option<&Root> {
        self.reflection_lookup.get(m).map(|&i| &self.positive[i])
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len == self.rank() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.rank(), actual: len })
        }
    }

    /// Number of elements of the finite Weyl group, by the degree formula.
    pub fn weyl_group_order(&self) -> u64 {
        let degrees: Vec<u64> = match (self.cartan_type.family, self.rank() as u64) {
            (Family::A, n) => (2..=n + 1).collect(),
            (Family::B | Family::C, n) => (1..=n).map(|k| 2 * k).collect(),
            (Family::D, n) => (1..n).map(|k| 2 * k).chain([n]).collect(),
            (Family::E, 6) => vec![2, 5, 6, 8, 9, 12],
            (Family::E, 7) => vec![2, 6, 8, 10, 12, 14, 18],
            (Family::E, _) => vec![2, 8, 12, 14, 18, 20, 24, 30],
            (Family::F, _) => vec![2, 6, 8, 12],
            (Family::G, _) => vec![2, 6],
        };
        degrees.iter().product()
    }
}

/// Gram matrix and symmetrizer (Bourbaki numbering, 0-indexed).
fn dynkin_data(t: CartanType) -> (Vec<Vec<i64>>, Vec<i64>) {
    let n = t.rank;
    let chain: Vec<(usize, usize)> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    let (edges, d): (Vec<(usize, usize)>, Vec<i64>) = match t.family {
        Family::A => (chain, vec![1; n]),
        Family::B => (chain, (0..n).map(|i| if i + 1 < n { 2 } else { 1 }).collect()),
        Family::C => (chain, (0..n).map(|i| if i + 1 < n { 1 } else { 2 }).collect()),
        Family::D => {
            let mut e: Vec<_> = (0..n - 2).map(|i| (i, i + 1)).collect();
            e.push((n - 3, n - 1));
            (e, vec![1; n])
        }
        Family::E => {
            let e = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)]
                .into_iter()
                .filter(|&(a, b)| a < n && b < n)
                .collect();
            (e, vec![1; n])
        }
        Family::F => (chain, vec![2, 2, 1, 1]),
        Family::G => (chain, vec![1, 3]),
    };
    let mut gram = vec![vec![0; n]; n];
    for i in 0..n {
        gram[i][i] = 2 * d[i];
    }
    for (a, b) in edges {
        let v = -d[a].max(d[b]);
        gram[a][b] = v;
        gram[b][a] = v;
    }
    (gram, d)
}

/// Orbit of the simple roots under the simple reflections.
fn close_roots(cartan: &[Vec<i64>]) -> Vec<Root> {
    let n = cartan.len();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        if seen.insert(e.clone()) {
            queue.push_back(e);
        }
    }
    while let Some(beta) = queue.pop_front() {
        for (i, row) in cartan.iter().enumerate() {
            let c: i64 = row.iter().zip(&beta).map(|(a, b)| a * b).sum();
            if c == 0 {
                continue;
            }
            let mut next = beta.clone();
            next[i] -= c;
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen.into_iter().map(Root).collect()
}
