//! Finite Weyl group elements, absolute length and reflection factorizations.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::error::Result;
use crate::intlattice::{coroot_span, root_span, smallest_subsystem, IntegerLattice};
use crate::linalg::{rank_i64, IntMatrix};
use crate::rootsys::{Root, RootSystem};

/// Element of the finite Weyl group `W_0`.
///
/// Stored as its action on simple-root coordinates together with the action
/// on simple-coroot coordinates and both inverses, so products and affine
/// normal forms never need a matrix inversion. Equality and hashing use the
/// root action only.
#[derive(Clone)]
pub struct FiniteWeylElement {
    root_action: IntMatrix,
    root_action_inv: IntMatrix,
    coroot_action: IntMatrix,
    coroot_action_inv: IntMatrix,
}

impl PartialEq for FiniteWeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.root_action == other.root_action
    }
}

impl Eq for FiniteWeylElement {}

impl Hash for FiniteWeylElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.root_action.hash(state);
    }
}

impl PartialOrd for FiniteWeylElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FiniteWeylElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.root_action.cmp(&other.root_action)
    }
}

impl fmt::Debug for FiniteWeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W0{:?}", self.root_action)
    }
}

impl Serialize for FiniteWeylElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.root_action.rows().serialize(s)
    }
}

impl FiniteWeylElement {
    pub fn identity(rank: usize) -> Self {
        let i = IntMatrix::identity(rank);
        FiniteWeylElement {
            root_action: i.clone(),
            root_action_inv: i.clone(),
            coroot_action: i.clone(),
            coroot_action_inv: i,
        }
    }

    /// The reflection `s_α`; `s_α = s_{-α}`.
    pub fn reflection(rs: &RootSystem, alpha: &Root) -> Result<Self> {
        rs.check_root(alpha)?;
        Ok(Self::reflection_unchecked(rs, alpha))
    }

    pub(crate) fn reflection_unchecked(rs: &RootSystem, alpha: &Root) -> Self {
        let (m, c) = rs.reflection_matrices(alpha).expect("root of the system");
        FiniteWeylElement {
            root_action: m.clone(),
            root_action_inv: m.clone(),
            coroot_action: c.clone(),
            coroot_action_inv: c.clone(),
        }
    }

    /// `s_{β_1} ⋯ s_{β_m}`.
    pub fn product_of_reflections(rs: &RootSystem, roots: &[Root]) -> Result<Self> {
        let mut w = Self::identity(rs.rank());
        for r in roots {
            w = w.mul(&Self::reflection(rs, r)?);
        }
        Ok(w)
    }

    pub fn rank(&self) -> usize {
        self.root_action.dim()
    }

    pub fn mul(&self, other: &Self) -> Self {
        FiniteWeylElement {
            root_action: &self.root_action * &other.root_action,
            root_action_inv: &other.root_action_inv * &self.root_action_inv,
            coroot_action: &self.coroot_action * &other.coroot_action,
            coroot_action_inv: &other.coroot_action_inv * &self.coroot_action_inv,
        }
    }

    pub fn inverse(&self) -> Self {
        FiniteWeylElement {
            root_action: self.root_action_inv.clone(),
            root_action_inv: self.root_action.clone(),
            coroot_action: self.coroot_action_inv.clone(),
            coroot_action_inv: self.coroot_action.clone(),
        }
    }

    /// Matrix acting on simple-root coordinates.
    pub fn matrix(&self) -> &IntMatrix {
        &self.root_action
    }

    /// Matrix acting on simple-coroot coordinates.
    pub fn coroot_matrix(&self) -> &IntMatrix {
        &self.coroot_action
    }

    pub(crate) fn coroot_matrix_inv(&self) -> &IntMatrix {
        &self.coroot_action_inv
    }

    pub fn is_identity(&self) -> bool {
        self.root_action.is_identity()
    }

    pub fn det(&self) -> i64 {
        self.root_action.det()
    }

    pub fn apply_root(&self, alpha: &Root) -> Root {
        Root::new(self.root_action.apply(alpha.coords()))
    }

    /// Action on a vector in simple-coroot coordinates.
    pub fn apply_coroot(&self, v: &[i64]) -> Vec<i64> {
        self.coroot_action.apply(v)
    }

    /// The positive root `α` with `self = s_α`, if `self` is a reflection.
    pub fn as_reflection<'a>(&self, rs: &'a RootSystem) -> Option<&'a Root> {
        rs.reflection_root(&self.root_action)
    }

    /// Checks that the matrix permutes the roots of `rs`.
    pub fn permutes_roots(&self, rs: &RootSystem) -> bool {
        rs.roots().iter().all(|r| rs.is_root(&self.root_action.apply(r.coords())))
    }
}

/// Alias used in signatures that mirror the affine API.
pub fn reflection_element(rs: &RootSystem, alpha: &Root) -> Result<FiniteWeylElement> {
    FiniteWeylElement::reflection(rs, alpha)
}

/// `ℓ_T(w)`, the codimension of the fixed space of `w`.
pub fn absolute_length(w: &FiniteWeylElement) -> usize {
    w.root_action.minus_identity().rank()
}

/// `u ≤_T v` iff `ℓ_T(u) + ℓ_T(u⁻¹v) = ℓ_T(v)`.
pub fn leq_t(u: &FiniteWeylElement, v: &FiniteWeylElement) -> bool {
    absolute_length(u) + absolute_length(&u.inverse().mul(v)) == absolute_length(v)
}

/// Every element of `W_0`, sorted by matrix.
pub fn group_elements(rs: &RootSystem) -> Vec<FiniteWeylElement> {
    let gens: Vec<FiniteWeylElement> = rs
        .simple_roots()
        .iter()
        .map(|a| FiniteWeylElement::reflection_unchecked(rs, a))
        .collect();
    let id = FiniteWeylElement::identity(rs.rank());
    let mut seen: HashSet<FiniteWeylElement> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(w) = queue.pop_front() {
        for g in &gens {
            let x = w.mul(g);
            if seen.insert(x.clone()) {
                queue.push_back(x);
            }
        }
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort();
    out
}

/// All reduced reflection factorizations of `w`, as tuples of positive roots.
///
/// Depth-first: the first factor `t` ranges over reflections with
/// `ℓ_T(t w) = ℓ_T(w) - 1`, in canonical root order.
pub fn reduced_factorizations(rs: &RootSystem, w: &FiniteWeylElement) -> Vec<Vec<Root>> {
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    reduced_dfs(rs, w, absolute_length(w), &mut prefix, &mut out);
    out
}

fn reduced_dfs(
    rs: &RootSystem,
    w: &FiniteWeylElement,
    len: usize,
    prefix: &mut Vec<Root>,
    out: &mut Vec<Vec<Root>>,
) {
    if len == 0 {
        out.push(prefix.clone());
        return;
    }
    for t in rs.positive_roots() {
        let s = FiniteWeylElement::reflection_unchecked(rs, t);
        let rest = s.mul(w);
        if absolute_length(&rest) + 1 == len {
            prefix.push(t.clone());
            reduced_dfs(rs, &rest, len - 1, prefix, out);
            prefix.pop();
        }
    }
}

/// Whether `⟨s_β : β ∈ roots⟩ = W_0`, decided by comparing root and coroot lattices.
pub fn generates_w0(rs: &RootSystem, roots: &[Root]) -> Result<bool> {
    if roots.is_empty() {
        return Ok(false);
    }
    Ok(root_span(rs, roots)?.is_full() && coroot_span(rs, roots)?.is_full())
}

/// Whether `⟨s_β : β ∈ roots⟩` is a parabolic subgroup.
///
/// The fixer of the common fixed space `U = span(roots)^⊥` is generated by
/// the reflections in roots lying in `span_Q(roots)`; the subgroup is
/// parabolic iff its root subsystem is that whole set.
pub fn is_parabolic(rs: &RootSystem, roots: &[Root]) -> Result<bool> {
    if roots.is_empty() {
        return Ok(true);
    }
    let sub = smallest_subsystem(rs, roots)?;
    let gens: Vec<Vec<i64>> = roots.iter().map(|r| r.coords().to_vec()).collect();
    let r = rank_i64(&gens);
    let in_span = rs
        .roots()
        .iter()
        .filter(|a| {
            let mut m = gens.clone();
            m.push(a.coords().to_vec());
            rank_i64(&m) == r
        })
        .count();
    Ok(in_span == sub.len())
}

/// Whether some reduced factorization of `w` generates `W_0`.
pub fn is_quasi_coxeter_fin(rs: &RootSystem, w: &FiniteWeylElement) -> bool {
    absolute_length(w) == rs.rank()
        && reduced_factorizations(rs, w)
            .iter()
            .any(|f| generates_w0(rs, f).unwrap_or(false))
}

/// Whether some reduced factorization of `w` generates a parabolic subgroup.
pub fn is_parabolic_quasi_coxeter_fin(rs: &RootSystem, w: &FiniteWeylElement) -> bool {
    reduced_factorizations(rs, w)
        .iter()
        .any(|f| is_parabolic(rs, f).unwrap_or(false))
}

/// `Fac_{T_0,m}(w)`: all `m`-tuples of reflections with product `w` that
/// generate `W_0`, in lexicographic order of root coordinates.
pub fn fac_set(rs: &RootSystem, w: &FiniteWeylElement, m: usize) -> Vec<Vec<Root>> {
    let mut out = Vec::new();
    if m == 0 {
        return out;
    }
    if (absolute_length(w) + m) % 2 != 0 {
        return out;
    }
    let mut prefix = Vec::new();
    fac_dfs(rs, w, m, &mut prefix, &mut out);
    out
}

fn fac_dfs(rs: &RootSystem, rest: &FiniteWeylElement, m: usize, prefix: &mut Vec<Root>, out: &mut Vec<Vec<Root>>) {
    let left = m - prefix.len();
    if left == 1 {
        if let Some(t) = rest.as_reflection(rs) {
            prefix.push(t.clone());
            if generates_w0(rs, prefix).unwrap_or(false) {
                out.push(prefix.clone());
            }
            prefix.pop();
        }
        return;
    }
    for t in rs.positive_roots() {
        let s = FiniteWeylElement::reflection_unchecked(rs, t);
        let next = s.mul(rest);
        // the remaining left-1 reflections must be able to reach `next`
        if absolute_length(&next) > left - 1 {
            continue;
        }
        prefix.push(t.clone());
        fac_dfs(rs, &next, m, prefix, out);
        prefix.pop();
    }
}

/// `s_{β_n} ⋯ s_{β_{i+1}}(β_i)∨` for each `i`, in simple-coroot coordinates.
pub fn transformed_coroots(rs: &RootSystem, roots: &[Root]) -> Vec<Vec<i64>> {
    let m = roots.len();
    let mut out = vec![Vec::new(); m];
    let mut acc = FiniteWeylElement::identity(rs.rank());
    for i in (0..m).rev() {
        let c = rs.coroot_unchecked(&roots[i]);
        out[i] = acc.apply_coroot(c.coords());
        acc = acc.mul(&FiniteWeylElement::reflection_unchecked(rs, &roots[i]));
    }
    out
}

/// Whether the given coroot-coordinate vectors span `L(Φ∨) = Z^n`.
pub fn spans_coroot_lattice(vectors: &[Vec<i64>], n: usize) -> bool {
    IntegerLattice::span(vectors, n).map(|l| l.is_full()).unwrap_or(false)
}

/// Order of a finite Weyl group element.
pub fn order(w: &FiniteWeylElement) -> usize {
    let mut x = w.clone();
    let mut k = 1;
    while !x.is_identity() {
        x = x.mul(w);
        k += 1;
    }
    k
}

/// Number of elements of `W_0` as `usize`, used for closure checks.
pub(crate) fn group_order(rs: &RootSystem) -> usize {
    rs.weyl_group_order().to_usize().unwrap_or(usize::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::Family;

    fn a2() -> RootSystem {
        RootSystem::new(Family::A, 2).unwrap()
    }

    #[test]
    fn reflections_and_orders() {
        let rs = a2();
        let a = Root::simple(2, 0);
        let b = Root::simple(2, 1);
        let s = reflection_element(&rs, &a).unwrap();
        assert!(s.mul(&s).is_identity());
        assert_eq!(s, reflection_element(&rs, &a.neg()).unwrap());
        assert_eq!(s.det(), -1);
        let c = s.mul(&reflection_element(&rs, &b).unwrap());
        assert_eq!(order(&c), 3);
        assert!(c.mul(&c.inverse()).is_identity());
        assert!(c.permutes_roots(&rs));
        assert_eq!(s.as_reflection(&rs), Some(&a));
        assert_eq!(c.as_reflection(&rs), None);
    }

    #[test]
    fn absolute_length_examples() {
        let rs = a2();
        let s = reflection_element(&rs, &Root::simple(2, 0)).unwrap();
        let t = reflection_element(&rs, &Root::simple(2, 1)).unwrap();
        assert_eq!(absolute_length(&FiniteWeylElement::identity(2)), 0);
        assert_eq!(absolute_length(&s), 1);
        assert_eq!(absolute_length(&s.mul(&t)), 2);
        assert!(leq_t(&FiniteWeylElement::identity(2), &s));
        assert!(!leq_t(&s, &t));
    }

    #[test]
    fn reduced_factorization_counts() {
        let rs = a2();
        let c = FiniteWeylElement::product_of_reflections(&rs, &rs.simple_roots()).unwrap();
        assert_eq!(reduced_factorizations(&rs, &c).len(), 3);
        let b2 = RootSystem::new(Family::B, 2).unwrap();
        let c = FiniteWeylElement::product_of_reflections(&b2, &b2.simple_roots()).unwrap();
        assert_eq!(reduced_factorizations(&b2, &c).len(), 4);
        let s = reflection_element(&rs, &Root::simple(2, 0)).unwrap();
        assert_eq!(reduced_factorizations(&rs, &s), vec![vec![Root::simple(2, 0)]]);
    }

    #[test]
    fn generation_and_parabolicity() {
        let b2 = RootSystem::new(Family::B, 2).unwrap();
        assert!(generates_w0(&b2, &b2.simple_roots()).unwrap());
        let long: Vec<Root> = b2.positive_roots().iter().filter(|r| b2.is_long(r)).cloned().collect();
        let short: Vec<Root> = b2.positive_roots().iter().filter(|r| b2.is_short(r)).cloned().collect();
        assert!(!generates_w0(&b2, &long).unwrap());
        assert!(!is_parabolic(&b2, &short).unwrap());
        let a3 = RootSystem::new(Family::A, 3).unwrap();
        let odd = [Root::simple(3, 0), Root::simple(3, 2)];
        assert!(!generates_w0(&a3, &odd).unwrap());
        assert!(is_parabolic(&a3, &odd).unwrap());
        assert!(is_parabolic(&a3, &[Root::simple(3, 1)]).unwrap());
    }

    #[test]
    fn quasi_coxeter_detection() {
        let rs = a2();
        let c = FiniteWeylElement::product_of_reflections(&rs, &rs.simple_roots()).unwrap();
        assert!(is_quasi_coxeter_fin(&rs, &c));
        let b2 = RootSystem::new(Family::B, 2).unwrap();
        let short: Vec<Root> = b2.positive_roots().iter().filter(|r| b2.is_short(r)).cloned().collect();
        let rot = FiniteWeylElement::product_of_reflections(&b2, &short).unwrap();
        assert!(!is_quasi_coxeter_fin(&b2, &rot));
        assert!(!is_parabolic_quasi_coxeter_fin(&b2, &rot));
        for a in b2.positive_roots() {
            let s = reflection_element(&b2, a).unwrap();
            assert!(is_parabolic_quasi_coxeter_fin(&b2, &s));
        }
    }

    #[test]
    fn fac_set_examples() {
        let rs = a2();
        let s = reflection_element(&rs, &Root::simple(2, 0)).unwrap();
        let all = fac_set(&rs, &s, 3);
        // brute force over all 27 tuples
        let mut brute = Vec::new();
        for a in rs.positive_roots() {
            for b in rs.positive_roots() {
                for c in rs.positive_roots() {
                    let t = vec![a.clone(), b.clone(), c.clone()];
                    if FiniteWeylElement::product_of_reflections(&rs, &t).unwrap() == s
                        && generates_w0(&rs, &t).unwrap()
                    {
                        brute.push(t);
                    }
                }
            }
        }
        assert_eq!(all, brute);
        assert!(!all.is_empty());
        assert!(fac_set(&rs, &FiniteWeylElement::identity(2), 3).is_empty());
    }
}
