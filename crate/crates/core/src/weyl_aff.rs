//! Affine Weyl group elements in the normal form `w = w_0 · tr(λ)`.
//!
//! An element acts on `V` (in simple-coroot coordinates) by
//! `v ↦ w_0(v + λ)`. Products follow `(u, λ)(v, μ) = (uv, μ + v⁻¹λ)` and the
//! affine reflection `s_{α,k}` in the hyperplane `(v|α) = k` is `(s_α, -kα∨)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{rational, solve_rational};
use crate::rootsys::{parse_coords, CorootVector, Root, RootSystem};
use crate::weyl_fin::FiniteWeylElement;

/// The affine reflection `s_{α,k}`, stored with `α` positive.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineReflection {
    root: Root,
    level: i64,
}

impl AffineReflection {
    /// `s_{α,k}`; a negative root is flipped using `s_{α,k} = s_{-α,-k}`.
    pub fn new(root: Root, level: i64) -> Self {
        if root.is_positive() {
            AffineReflection { root, level }
        } else {
            AffineReflection { root: root.neg(), level: -level }
        }
    }

    /// The linear reflection `s_α = s_{α,0}`.
    pub fn linear(root: Root) -> Self {
        Self::new(root, 0)
    }

    pub fn root(&self) -> &Root {
        &self.root
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    pub fn with_level(&self, level: i64) -> Self {
        AffineReflection { root: self.root.clone(), level }
    }
}

impl fmt::Display for AffineReflection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.root, self.level)
    }
}

impl fmt::Debug for AffineReflection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s[{}]", self)
    }
}

impl FromStr for AffineReflection {
    type Err = Error;

    /// Parses `"c1,...,cn:k"`; a missing `:k` means level 0.
    fn from_str(s: &str) -> Result<Self> {
        let (root, level) = match s.split_once(':') {
            Some((r, k)) => {
                let k = k
                    .trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad level in {s:?}")))?;
                (r, k)
            }
            None => (s, 0),
        };
        let coords = parse_coords(root)?;
        if coords.iter().all(|&c| c == 0) {
            return Err(Error::Parse(format!("zero vector in {s:?}")));
        }
        Ok(AffineReflection::new(Root::new(coords), level))
    }
}

impl Serialize for AffineReflection {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for AffineReflection {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An element of the affine Weyl group.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AffineWeylElement {
    finite: FiniteWeylElement,
    translation: CorootVector,
}

impl fmt::Debug for AffineWeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, tr{:?})", self.finite, self.translation)
    }
}

impl Serialize for AffineWeylElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("AffineWeylElement", 2)?;
        st.serialize_field("finite_matrix", &self.finite.matrix().rows())?;
        st.serialize_field("translation", &self.translation)?;
        st.end()
    }
}

impl AffineWeylElement {
    pub fn identity(rank: usize) -> Self {
        AffineWeylElement {
            finite: FiniteWeylElement::identity(rank),
            translation: CorootVector::zero(rank),
        }
    }

    pub fn from_parts(finite: FiniteWeylElement, translation: CorootVector) -> Self {
        assert_eq!(finite.rank(), translation.coords().len());
        AffineWeylElement { finite, translation }
    }

    /// The pure translation `tr(λ)`.
    pub fn translation(lam: CorootVector) -> Self {
        AffineWeylElement { finite: FiniteWeylElement::identity(lam.coords().len()), translation: lam }
    }

    pub fn from_reflection(rs: &RootSystem, r: &AffineReflection) -> Result<Self> {
        rs.check_root(r.root())?;
        Ok(Self::from_reflection_unchecked(rs, r))
    }

    pub(crate) fn from_reflection_unchecked(rs: &RootSystem, r: &AffineReflection) -> Self {
        AffineWeylElement {
            finite: FiniteWeylElement::reflection_unchecked(rs, r.root()),
            translation: rs.coroot_unchecked(r.root()).scale(-r.level()),
        }
    }

    /// `s_{β_1,k_1} ⋯ s_{β_m,k_m}`.
    pub fn product(rs: &RootSystem, refs: &[AffineReflection]) -> Result<Self> {
        let mut w = Self::identity(rs.rank());
        for r in refs {
            w = w.mul(&Self::from_reflection(rs, r)?);
        }
        Ok(w)
    }

    pub fn finite_part(&self) -> &FiniteWeylElement {
        &self.finite
    }

    pub fn translation_part(&self) -> &CorootVector {
        &self.translation
    }

    pub fn rank(&self) -> usize {
        self.translation.coords().len()
    }

    pub fn is_identity(&self) -> bool {
        self.finite.is_identity() && self.translation.is_zero()
    }

    pub fn is_translation(&self) -> bool {
        self.finite.is_identity()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let moved = other.finite.coroot_matrix_inv().apply(self.translation.coords());
        AffineWeylElement {
            finite: self.finite.mul(&other.finite),
            translation: other.translation.add(&CorootVector::new(moved)),
        }
    }

    /// `(u, λ)⁻¹ = (u⁻¹, -uλ)`.
    pub fn inverse(&self) -> Self {
        let moved = self.finite.apply_coroot(self.translation.coords());
        AffineWeylElement {
            finite: self.finite.inverse(),
            translation: CorootVector::new(moved).neg(),
        }
    }

    /// `x y x⁻¹` with `x = self`.
    pub fn conjugate(&self, y: &Self) -> Self {
        self.mul(y).mul(&self.inverse())
    }

    /// Image of a point given in simple-coroot coordinates.
    pub fn apply_point(&self, v: &[BigRational]) -> Vec<BigRational> {
        let shifted: Vec<BigRational> = v
            .iter()
            .zip(self.translation.coords())
            .map(|(x, &t)| x + rational(t))
            .collect();
        let m = self.finite.coroot_matrix();
        (0..m.dim())
            .map(|i| (0..m.dim()).fold(BigRational::zero(), |acc, j| acc + rational(m.get(i, j)) * &shifted[j]))
            .collect()
    }
}

pub fn aff_multiply(x: &AffineWeylElement, y: &AffineWeylElement) -> AffineWeylElement {
    x.mul(y)
}

/// `p: W → W_0`, forgetting the translation.
pub fn project_p(x: &AffineWeylElement) -> FiniteWeylElement {
    x.finite.clone()
}

/// `s_{α,k} s_{β,l} s_{α,k} = s_{s_α(β), l - k<β,α∨>}`.
pub fn aff_conjugate_reflection(rs: &RootSystem, a: &AffineReflection, b: &AffineReflection) -> AffineReflection {
    let c = rs.cartan_integer(b.root(), a.root());
    let beta = rs.reflect_unchecked(a.root(), b.root());
    AffineReflection::new(beta, b.level() - a.level() * c)
}

/// Finite part and translation of `s_{β_1,k_1} ⋯ s_{β_m,k_m}` by the closed
/// form `λ = Σ -k_i s_{β_m} ⋯ s_{β_{i+1}}(β_i)∨`, checked against iterated
/// multiplication.
pub fn translation_part_of_product(
    rs: &RootSystem,
    refs: &[AffineReflection],
) -> Result<(FiniteWeylElement, CorootVector)> {
    let n = rs.rank();
    for r in refs {
        rs.check_root(r.root())?;
    }
    let roots: Vec<Root> = refs.iter().map(|r| r.root().clone()).collect();
    let finite = FiniteWeylElement::product_of_reflections(rs, &roots)?;
    let cols = crate::weyl_fin::transformed_coroots(rs, &roots);
    let mut lam = vec![0i64; n];
    for (r, c) in refs.iter().zip(&cols) {
        for (x, y) in lam.iter_mut().zip(c) {
            *x -= r.level() * y;
        }
    }
    let lam = CorootVector::new(lam);
    let direct = AffineWeylElement::product(rs, refs)?;
    if direct.finite != finite || direct.translation != lam {
        return Err(Error::Internal(format!(
            "closed-form translation {lam:?} disagrees with product {direct:?}"
        )));
    }
    Ok((finite, lam))
}

/// `(λ|α)` for a rational coweight in simple-coroot coordinates.
pub fn rational_pairing(rs: &RootSystem, lam: &[BigRational], alpha: &Root) -> BigRational {
    let n = rs.rank();
    let mut s = BigRational::zero();
    for i in 0..n {
        let ac: i64 = (0..n).map(|j| rs.cartan()[i][j] * alpha.coords()[j]).sum();
        s += &lam[i] * rational(ac);
    }
    s
}

/// Whether `λ` lies in `P(Φ∨)`; errors name a simple root with non-integral pairing.
pub fn check_coweight(rs: &RootSystem, lam: &[BigRational]) -> Result<()> {
    rs.check_len(lam.len())?;
    for a in rs.simple_roots() {
        if !rational_pairing(rs, lam, &a).is_integer() {
            return Err(Error::NotACoweight(a.coords().to_vec()));
        }
    }
    Ok(())
}

/// `tr(λ) s_{α,k} tr(-λ) = s_{α, k + (λ|α)}` for a coweight `λ`.
pub fn coweight_conjugate(rs: &RootSystem, lam: &[BigRational], r: &AffineReflection) -> Result<AffineReflection> {
    check_coweight(rs, lam)?;
    let p = rational_pairing(rs, lam, r.root()).to_integer();
    let shift = i64::try_from(p).map_err(|_| Error::Internal("coweight pairing overflow".into()))?;
    Ok(AffineReflection::new(r.root().clone(), r.level() + shift))
}

/// The affine reflection equal to `x`, if `x` is one.
pub fn recognize_reflection(rs: &RootSystem, x: &AffineWeylElement) -> Option<AffineReflection> {
    let alpha = x.finite.as_reflection(rs)?;
    let c = rs.coroot_unchecked(alpha);
    // translation must be -k α∨
    let (i, &ci) = c.coords().iter().enumerate().find(|(_, &v)| v != 0)?;
    let t = x.translation.coords()[i];
    if t % ci != 0 {
        return None;
    }
    let k = -t / ci;
    (c.scale(-k) == x.translation).then(|| AffineReflection::new(alpha.clone(), k))
}

/// Rational affine subspace `point + span(directions)` in simple-coroot coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSubspace {
    pub point: Vec<BigRational>,
    pub directions: Vec<Vec<BigRational>>,
}

impl AffineSubspace {
    pub fn dim(&self) -> usize {
        self.directions.len()
    }
}

/// Common fixed points of the given affine reflections, or `None` if the
/// hyperplanes `(v|α_i) = k_i` have empty intersection.
pub fn fixed_affine_subspace(rs: &RootSystem, gens: &[AffineReflection]) -> Option<AffineSubspace> {
    let n = rs.rank();
    let rows: Vec<Vec<BigRational>> = gens
        .iter()
        .map(|g| {
            (0..n)
                .map(|i| rational((0..n).map(|j| rs.cartan()[i][j] * g.root().coords()[j]).sum()))
                .collect()
        })
        .collect();
    let rhs: Vec<BigRational> = gens.iter().map(|g| rational(g.level())).collect();
    let sol = solve_rational(&rows, &rhs, n)?;
    Some(AffineSubspace { point: sol.point, directions: sol.directions })
}

/// All affine reflections fixing the given subspace pointwise.
///
/// These are `s_{α,(p|α)}` for positive `α` orthogonal to every direction and
/// with `(p|α)` integral.
pub fn fixer_reflections(rs: &RootSystem, space: &AffineSubspace) -> Vec<AffineReflection> {
    rs.positive_roots()
        .iter()
        .filter(|a| space.directions.iter().all(|d| rational_pairing(rs, d, a).is_zero()))
        .filter_map(|a| {
            let p = rational_pairing(rs, &space.point, a);
            p.is_integer()
                .then(|| AffineReflection::new(a.clone(), i64::try_from(p.to_integer()).unwrap_or(i64::MAX)))
        })
        .collect()
}

/// Rational coweight from integer numerators over a common denominator.
pub fn coweight_from_ratio(num: &[i64], den: i64) -> Vec<BigRational> {
    num.iter()
        .map(|&x| BigRational::new(BigInt::from(x), BigInt::from(den)))
        .collect()
}
