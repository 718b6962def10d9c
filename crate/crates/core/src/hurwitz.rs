//! Braid group action on tuples of group elements.
//!
//! `σ_i` sends `(…, g_i, g_{i+1}, …)` to `(…, g_i g_{i+1} g_i⁻¹, g_i, …)` and
//! `σ_i⁻¹` sends it to `(…, g_{i+1}, g_{i+1}⁻¹ g_i g_{i+1}, …)`. Braid words
//! are read left to right: the first letter acts first.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootsys::{Root, RootSystem};
use crate::weyl_aff::{aff_conjugate_reflection, AffineReflection, AffineWeylElement};
use crate::weyl_fin::FiniteWeylElement;

/// A group in which tuples can be braided.
pub trait HurwitzAction {
    type Elem: Clone + Eq + Hash + fmt::Debug;
    type Product: PartialEq + fmt::Debug;

    /// `a b a⁻¹`
    fn conjugate(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// `a⁻¹ b a`
    fn conjugate_inverse(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn product(&self, tuple: &[Self::Elem]) -> Self::Product;
}

/// Reflections of a finite Weyl group, each named by its positive root.
#[derive(Clone, Copy, Debug)]
pub struct FiniteReflections<'a>(pub &'a RootSystem);

impl HurwitzAction for FiniteReflections<'_> {
    type Elem = Root;
    type Product = FiniteWeylElement;

    fn conjugate(&self, a: &Root, b: &Root) -> Root {
        self.0.reflect_unchecked(a, b).canonical()
    }

    fn conjugate_inverse(&self, a: &Root, b: &Root) -> Root {
        self.conjugate(a, b)
    }

    fn product(&self, tuple: &[Root]) -> FiniteWeylElement {
        tuple.iter().fold(FiniteWeylElement::identity(self.0.rank()), |acc, r| {
            acc.mul(&FiniteWeylElement::reflection_unchecked(self.0, r))
        })
    }
}

/// Affine reflections `s_{α,k}` of an affine Weyl group.
#[derive(Clone, Copy, Debug)]
pub struct AffineReflections<'a>(pub &'a RootSystem);

impl HurwitzAction for AffineReflections<'_> {
    type Elem = AffineReflection;
    type Product = AffineWeylElement;

    fn conjugate(&self, a: &AffineReflection, b: &AffineReflection) -> AffineReflection {
        aff_conjugate_reflection(self.0, a, b)
    }

    fn conjugate_inverse(&self, a: &AffineReflection, b: &AffineReflection) -> AffineReflection {
        aff_conjugate_reflection(self.0, a, b)
    }

    fn product(&self, tuple: &[AffineReflection]) -> AffineWeylElement {
        tuple.iter().fold(AffineWeylElement::identity(self.0.rank()), |acc, r| {
            acc.mul(&AffineWeylElement::from_reflection_unchecked(self.0, r))
        })
    }
}

/// Arbitrary elements of a finite Weyl group of the given rank.
#[derive(Clone, Copy, Debug)]
pub struct FiniteElements(pub usize);

impl HurwitzAction for FiniteElements {
    type Elem = FiniteWeylElement;
    type Product = FiniteWeylElement;

    fn conjugate(&self, a: &FiniteWeylElement, b: &FiniteWeylElement) -> FiniteWeylElement {
        a.mul(b).mul(&a.inverse())
    }

    fn conjugate_inverse(&self, a: &FiniteWeylElement, b: &FiniteWeylElement) -> FiniteWeylElement {
        a.inverse().mul(b).mul(a)
    }

    fn product(&self, tuple: &[FiniteWeylElement]) -> FiniteWeylElement {
        tuple.iter().fold(FiniteWeylElement::identity(self.0), |acc, x| acc.mul(x))
    }
}

/// Arbitrary elements of an affine Weyl group of the given rank.
#[derive(Clone, Copy, Debug)]
pub struct AffineElements(pub usize);

impl HurwitzAction for AffineElements {
    type Elem = AffineWeylElement;
    type Product = AffineWeylElement;

    fn conjugate(&self, a: &AffineWeylElement, b: &AffineWeylElement) -> AffineWeylElement {
        a.conjugate(b)
    }

    fn conjugate_inverse(&self, a: &AffineWeylElement, b: &AffineWeylElement) -> AffineWeylElement {
        a.inverse().mul(b).mul(a)
    }

    fn product(&self, tuple: &[AffineWeylElement]) -> AffineWeylElement {
        tuple.iter().fold(AffineWeylElement::identity(self.0), |acc, x| acc.mul(x))
    }
}

/// A word in the braid generators: `+i` is `σ_i`, `-i` is `σ_i⁻¹` (1-indexed).
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BraidWord(Vec<i32>);

impl BraidWord {
    pub fn new(letters: Vec<i32>) -> Result<Self> {
        if let Some(&z) = letters.iter().find(|&&l| l == 0) {
            return Err(Error::BraidIndexOutOfRange { index: z, len: 0 });
        }
        Ok(BraidWord(letters))
    }

    pub fn empty() -> Self {
        BraidWord(Vec::new())
    }

    /// `σ_i^p` (negative `p` gives inverse letters).
    pub fn power(i: i32, p: i64) -> Self {
        let letter = if p >= 0 { i } else { -i };
        BraidWord(vec![letter; p.unsigned_abs() as usize])
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The word acting as the inverse: reversed with every letter inverted.
    pub fn inverse(&self) -> Self {
        BraidWord(self.0.iter().rev().map(|l| -l).collect())
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &BraidWord) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        BraidWord(v)
    }
}

impl fmt::Debug for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Applies `σ_i` (or its inverse) to a tuple; `i` is 1-indexed.
pub fn apply_move<A: HurwitzAction>(act: &A, tuple: &[A::Elem], i: usize, inverse: bool) -> Result<Vec<A::Elem>> {
    let mut t = tuple.to_vec();
    let letter = i32::try_from(i).map_err(|_| Error::BraidIndexOutOfRange { index: i32::MAX, len: t.len() })?;
    apply_letter(act, &mut t, if inverse { -letter } else { letter })?;
    Ok(t)
}

/// Applies one signed letter in place.
pub fn apply_letter<A: HurwitzAction>(act: &A, t: &mut [A::Elem], letter: i32) -> Result<()> {
    let i = letter.unsigned_abs() as usize;
    if letter == 0 || i >= t.len() {
        return Err(Error::BraidIndexOutOfRange { index: letter, len: t.len() });
    }
    let (a, b) = (i - 1, i);
    if letter > 0 {
        let x = act.conjugate(&t[a], &t[b]);
        t[b] = t[a].clone();
        t[a] = x;
    } else {
        let y = act.conjugate_inverse(&t[b], &t[a]);
        t[a] = t[b].clone();
        t[b] = y;
    }
    Ok(())
}

pub fn apply_braid<A: HurwitzAction>(act: &A, tuple: &[A::Elem], word: &BraidWord) -> Result<Vec<A::Elem>> {
    let mut t = tuple.to_vec();
    for &l in word.letters() {
        apply_letter(act, &mut t, l)?;
    }
    Ok(t)
}

/// Letters in search order: `σ_1, σ_1⁻¹, σ_2, σ_2⁻¹, …`.
fn letters(m: usize) -> Vec<i32> {
    (1..m as i32).flat_map(|i| [i, -i]).collect()
}

/// Caps on breadth-first searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchLimits {
    pub max_depth: usize,
    pub max_nodes: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_depth: 12, max_nodes: 1_000_000 }
    }
}

impl SearchLimits {
    pub fn new(max_depth: usize, max_nodes: usize) -> Self {
        SearchLimits { max_depth, max_nodes }
    }

    /// Replaces the node cap with `AFFHUR_NODE_LIMIT` when that is set to an integer.
    pub fn with_env_override(mut self) -> Self {
        if let Some(n) = std::env::var("AFFHUR_NODE_LIMIT").ok().and_then(|v| v.trim().parse().ok()) {
            self.max_nodes = n;
        }
        self
    }
}

/// Breadth-first Hurwitz orbit with a spanning tree back to the start.
#[derive(Clone, Debug)]
pub struct Orbit<E> {
    pub nodes: Vec<Vec<E>>,
    index: HashMap<Vec<E>, usize>,
    parent: Vec<Option<(usize, i32)>>,
    /// True iff the orbit closed before any limit was reached.
    pub exhausted: bool,
}

impl<E: Clone + Eq + Hash> Orbit<E> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn find(&self, tuple: &[E]) -> Option<usize> {
        self.index.get(tuple).copied()
    }

    pub fn contains(&self, tuple: &[E]) -> bool {
        self.index.contains_key(tuple)
    }

    /// Word sending the start tuple to node `idx`.
    pub fn word_to(&self, idx: usize) -> BraidWord {
        let mut letters = Vec::new();
        let mut cur = idx;
        while let Some((p, l)) = self.parent[cur] {
            letters.push(l);
            cur = p;
        }
        letters.reverse();
        BraidWord(letters)
    }
}

/// Enumerates the Hurwitz orbit of `tuple` breadth-first.
pub fn orbit<A: HurwitzAction>(act: &A, tuple: &[A::Elem], limits: SearchLimits) -> Orbit<A::Elem> {
    let mut nodes = vec![tuple.to_vec()];
    let mut index = HashMap::from([(tuple.to_vec(), 0)]);
    let mut parent = vec![None];
    let mut depth = vec![0usize];
    let mut queue = VecDeque::from([0usize]);
    let moves = letters(tuple.len());
    let mut exhausted = true;
    'outer: while let Some(cur) = queue.pop_front() {
        if depth[cur] >= limits.max_depth {
            exhausted = false;
            continue;
        }
        for &l in &moves {
            let mut t = nodes[cur].clone();
            apply_letter(act, &mut t, l).expect("letter in range");
            if index.contains_key(&t) {
                continue;
            }
            if nodes.len() >= limits.max_nodes {
                exhausted = false;
                break 'outer;
            }
            index.insert(t.clone(), nodes.len());
            nodes.push(t);
            parent.push(Some((cur, l)));
            depth.push(depth[cur] + 1);
            queue.push_back(nodes.len() - 1);
        }
    }
    // a depth cut-off only matters if the cut nodes had unseen neighbours
    if !exhausted && nodes.len() < limits.max_nodes {
        exhausted = nodes.iter().all(|t| {
            moves.iter().all(|&l| {
                let mut x = t.clone();
                apply_letter(act, &mut x, l).expect("letter in range");
                index.contains_key(&x)
            })
        });
    }
    Orbit { nodes, index, parent, exhausted }
}

/// Result of a connectivity search.
#[derive(Clone, Debug)]
pub struct ConnectOutcome {
    pub word: Option<BraidWord>,
    /// True when the absence of a word is conclusive (an orbit was closed or
    /// the products differ).
    pub exhausted: bool,
    pub nodes_explored: usize,
}

/// Bidirectional breadth-first search for a braid word sending `t1` to `t2`.
///
/// `None` means "not found within limits" unless products differ.
pub fn connect<A: HurwitzAction>(act: &A, t1: &[A::Elem], t2: &[A::Elem], limits: SearchLimits) -> Option<BraidWord> {
    connect_detailed(act, t1, t2, limits).ok().and_then(|o| o.word)
}

struct Side<E> {
    seen: HashMap<Vec<E>, (usize, i32)>,
    nodes: Vec<Vec<E>>,
    frontier: Vec<usize>,
    depth: usize,
}

impl<E: Clone + Eq + Hash> Side<E> {
    fn new(t: &[E]) -> Self {
        Side {
            seen: HashMap::from([(t.to_vec(), (usize::MAX, 0))]),
            nodes: vec![t.to_vec()],
            frontier: vec![0],
            depth: 0,
        }
    }

    /// Letters leading from the side's root to `t`.
    fn word(&self, t: &[E]) -> Vec<i32> {
        let mut out = Vec::new();
        let mut cur = self.seen.get(t).copied();
        while let Some((p, l)) = cur {
            if p == usize::MAX {
                break;
            }
            out.push(l);
            cur = self.seen.get(&self.nodes[p]).copied();
        }
        out.reverse();
        out
    }
}

pub fn connect_detailed<A: HurwitzAction>(
    act: &A,
    t1: &[A::Elem],
    t2: &[A::Elem],
    limits: SearchLimits,
) -> Result<ConnectOutcome> {
    if t1.len() != t2.len() || act.product(t1) != act.product(t2) {
        return Ok(ConnectOutcome { word: None, exhausted: true, nodes_explored: 0 });
    }
    if t1 == t2 {
        return Ok(ConnectOutcome { word: Some(BraidWord::empty()), exhausted: true, nodes_explored: 1 });
    }
    let moves = letters(t1.len());
    let mut fwd = Side::new(t1);
    let mut bwd = Side::new(t2);
    loop {
        if fwd.frontier.is_empty() || bwd.frontier.is_empty() {
            let explored = fwd.nodes.len() + bwd.nodes.len();
            return Ok(ConnectOutcome { word: None, exhausted: true, nodes_explored: explored });
        }
        if fwd.depth + bwd.depth >= limits.max_depth || fwd.nodes.len() + bwd.nodes.len() >= limits.max_nodes {
            let explored = fwd.nodes.len() + bwd.nodes.len();
            return Ok(ConnectOutcome { word: None, exhausted: false, nodes_explored: explored });
        }
        let forward = fwd.frontier.len() <= bwd.frontier.len();
        let (this, other) = if forward { (&mut fwd, &bwd) } else { (&mut bwd, &fwd) };
        let mut next = Vec::new();
        let mut meet = None;
        'expand: for &cur in &this.frontier {
            for &l in &moves {
                let mut t = this.nodes[cur].clone();
                apply_letter(act, &mut t, l)?;
                if this.seen.contains_key(&t) {
                    continue;
                }
                this.seen.insert(t.clone(), (cur, l));
                this.nodes.push(t.clone());
                next.push(this.nodes.len() - 1);
                if other.seen.contains_key(&t) {
                    meet = Some(t);
                    break 'expand;
                }
            }
        }
        this.frontier = next;
        this.depth += 1;
        if let Some(m) = meet {
            let mut word = BraidWord(fwd.word(&m));
            word = word.then(&BraidWord(bwd.word(&m)).inverse());
            let explored = fwd.nodes.len() + bwd.nodes.len();
            if apply_braid(act, t1, &word)? != t2 {
                return Err(Error::Internal(format!("braid word {word} failed verification")));
            }
            return Ok(ConnectOutcome { word: Some(word), exhausted: true, nodes_explored: explored });
        }
    }
}

/// Breadth-first search for a tuple in the orbit satisfying `pred`.
pub fn search_shape<A, F>(act: &A, tuple: &[A::Elem], limits: SearchLimits, pred: F) -> Option<(BraidWord, Vec<A::Elem>)>
where
    A: HurwitzAction,
    F: Fn(&[A::Elem]) -> bool,
{
    if pred(tuple) {
        return Some((BraidWord::empty(), tuple.to_vec()));
    }
    let mut nodes = vec![tuple.to_vec()];
    let mut seen: HashMap<Vec<A::Elem>, (usize, i32, usize)> = HashMap::from([(tuple.to_vec(), (usize::MAX, 0, 0))]);
    let mut queue = VecDeque::from([0usize]);
    let moves = letters(tuple.len());
    while let Some(cur) = queue.pop_front() {
        let d = seen[&nodes[cur]].2;
        if d >= limits.max_depth {
            continue;
        }
        for &l in &moves {
            let mut t = nodes[cur].clone();
            apply_letter(act, &mut t, l).expect("letter in range");
            if seen.contains_key(&t) {
                continue;
            }
            if nodes.len() >= limits.max_nodes {
                return None;
            }
            seen.insert(t.clone(), (cur, l, d + 1));
            nodes.push(t.clone());
            if pred(&t) {
                let mut letters = Vec::new();
                let mut at = &t;
                while let Some(&(p, l, _)) = seen.get(at) {
                    if p == usize::MAX {
                        break;
                    }
                    letters.push(l);
                    at = &nodes[p];
                }
                letters.reverse();
                return Some((BraidWord(letters), t));
            }
            queue.push_back(nodes.len() - 1);
        }
    }
    None
}

/// Whether `t` is a reduced prefix of length `prefix_len` followed by equal pairs.
pub fn has_lr_shape<E: PartialEq>(t: &[E], prefix_len: usize) -> bool {
    prefix_len <= t.len()
        && (t.len() - prefix_len) % 2 == 0
        && (prefix_len..t.len()).step_by(2).all(|j| t[j] == t[j + 1])
}

/// Braid word bringing a finite reflection tuple to the shape
/// `(t_1, …, t_ℓ, r_1, r_1, r_2, r_2, …)` with `ℓ = target_reduced_length`.
///
/// Returns `None` when no such tuple is found within limits.
pub fn lr_normalize(
    rs: &RootSystem,
    tuple: &[Root],
    target_reduced_length: usize,
    limits: SearchLimits,
) -> Option<BraidWord> {
    let act = FiniteReflections(rs);
    search_shape(&act, tuple, limits, |t| has_lr_shape(t, target_reduced_length)).map(|(w, _)| w)
}
