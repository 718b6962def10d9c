//! Integer lattices in `Z^n`, Hermite and Smith normal forms.
//!
//! A lattice is stored by its row-style Hermite normal form: rows in echelon
//! form with strictly increasing pivot columns, positive pivots, and every
//! entry above a pivot reduced into `[0, pivot)`. The form is unique, so two
//! lattices are equal exactly when their stored bases are.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rootsys::{Root, RootSystem};

/// A sublattice of `Z^n` (possibly of lower rank).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntegerLattice {
    ambient_rank: usize,
    basis: Vec<Vec<BigInt>>,
}

/// Index of one lattice in another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeIndex {
    Finite(BigInt),
    /// The sublattice has strictly smaller rank.
    Infinite,
}

impl IntegerLattice {
    pub fn zero(n: usize) -> Self {
        IntegerLattice { ambient_rank: n, basis: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        let basis = (0..n)
            .map(|i| (0..n).map(|j| BigInt::from(i64::from(i == j))).collect())
            .collect();
        IntegerLattice { ambient_rank: n, basis }
    }

    /// `Z`-span of integer vectors of length `n`.
    pub fn span<V: AsRef<[i64]>>(vectors: &[V], n: usize) -> Result<Self> {
        let rows = vectors
            .iter()
            .map(|v| {
                let v = v.as_ref();
                if v.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, actual: v.len() });
                }
                Ok(v.iter().map(|&x| BigInt::from(x)).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::span_big(rows, n))
    }

    /// `Z`-span of arbitrary-precision vectors; lengths must equal `n`.
    pub fn span_big(rows: Vec<Vec<BigInt>>, n: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == n));
        IntegerLattice { ambient_rank: n, basis: hermite_normal_form(rows) }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn is_full(&self) -> bool {
        *self == IntegerLattice::full(self.ambient_rank)
    }

    pub fn contains(&self, v: &[i64]) -> Result<bool> {
        if v.len() != self.ambient_rank {
            return Err(Error::DimensionMismatch { expected: self.ambient_rank, actual: v.len() });
        }
        let v: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        Ok(self.coordinates(&v).is_some())
    }

    /// Coefficients of `v` over the stored basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut r = v.to_vec();
        let mut coeffs = Vec::with_capacity(self.basis.len());
        for row in &self.basis {
            let p = pivot(row).expect("basis rows are nonzero");
            let (q, rem) = r[p].div_rem(&row[p]);
            if !rem.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (x, b) in r.iter_mut().zip(row) {
                    *x -= &q * b;
                }
            }
            coeffs.push(q);
        }
        r.iter().all(Zero::is_zero).then_some(coeffs)
    }

    pub fn is_sublattice_of(&self, sup: &IntegerLattice) -> bool {
        self.ambient_rank == sup.ambient_rank
            && self.basis.iter().all(|b| sup.coordinates(b).is_some())
    }

    /// `[sup : self]`; errors when `self` is not contained in `sup`.
    pub fn index_in(&self, sup: &IntegerLattice) -> Result<LatticeIndex> {
        if !self.is_sublattice_of(sup) {
            return Err(Error::NotASublattice);
        }
        if self.rank() < sup.rank() {
            return Ok(LatticeIndex::Infinite);
        }
        let m: Vec<Vec<BigInt>> = self
            .basis
            .iter()
            .map(|b| sup.coordinates(b).expect("checked above"))
            .collect();
        Ok(LatticeIndex::Finite(det_big(m).abs()))
    }

    /// Basis rows as `i64`, when every entry fits.
    pub fn basis_i64(&self) -> Option<Vec<Vec<i64>>> {
        self.basis
            .iter()
            .map(|r| r.iter().map(ToPrimitive::to_i64).collect())
            .collect()
    }
}

impl fmt::Debug for IntegerLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = self
            .basis
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect();
        write!(f, "Lattice{rows:?}")
    }
}

/// Serialized as a JSON array of integer rows.
impl Serialize for IntegerLattice {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.basis.len()))?;
        for row in &self.basis {
            let r: Vec<serde_json::Value> = row
                .iter()
                .map(|x| match x.to_i64() {
                    Some(v) => serde_json::Value::from(v),
                    None => serde_json::Value::from(x.to_string()),
                })
                .collect();
            seq.serialize_element(&r)?;
        }
        seq.end()
    }
}

pub fn lattice_equal(a: &IntegerLattice, b: &IntegerLattice) -> bool {
    a == b
}

pub fn index(sub: &IntegerLattice, sup: &IntegerLattice) -> Result<LatticeIndex> {
    sub.index_in(sup)
}

fn pivot(row: &[BigInt]) -> Option<usize> {
    row.iter().position(|x| !x.is_zero())
}

/// Row-style Hermite normal form; zero rows are dropped.
pub fn hermite_normal_form(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        loop {
            // smallest nonzero entry in column c among rows r..
            let best = (r..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&i, &j| rows[i][c].abs().cmp(&rows[j][c].abs()));
            let Some(b) = best else { break };
            rows.swap(r, b);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[r][c]);
                let (head, tail) = rows.split_at_mut(i);
                for (x, y) in tail[0].iter_mut().zip(&head[r]) {
                    *x -= &q * y;
                }
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < rows.len() && !rows[r][c].is_zero() {
            if rows[r][c].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = -&*x;
                }
            }
            for i in 0..r {
                let q = rows[i][c].div_floor(&rows[r][c]);
                if q.is_zero() {
                    continue;
                }
                let (head, tail) = rows.split_at_mut(r);
                for (x, y) in head[i].iter_mut().zip(&tail[0]) {
                    *x -= &q * y;
                }
            }
            r += 1;
        }
    }
    rows.truncate(r);
    rows
}

fn det_big(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Smith normal form `U A V = D` of an `m × n` integer matrix.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Nonzero invariant factors `d_1 | d_2 | …`, all positive.
    pub invariants: Vec<BigInt>,
    pub u: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
    pub rows: usize,
    pub cols: usize,
}

pub fn smith_normal_form(a: &[Vec<BigInt>], cols: usize) -> SmithForm {
    let m = a.len();
    let n = cols;
    let mut d: Vec<Vec<BigInt>> = a.to_vec();
    let mut u = identity_big(m);
    let mut v = identity_big(n);
    let mut t = 0;
    while t < m.min(n) {
        let best = (t..m)
            .flat_map(|i| (t..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !d[i][j].is_zero())
            .min_by(|&(i, j), &(k, l)| d[i][j].abs().cmp(&d[k][l].abs()));
        let Some((pi, pj)) = best else { break };
        d.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut d, t, pj);
        swap_cols(&mut v, t, pj);
        loop {
            let mut changed = false;
            for i in t + 1..m {
                if d[i][t].is_zero() {
                    continue;
                }
                let q = d[i][t].div_floor(&d[t][t]);
                row_axpy(&mut d, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                if !d[i][t].is_zero() {
                    d.swap(t, i);
                    u.swap(t, i);
                    changed = true;
                }
            }
            for j in t + 1..n {
                if d[t][j].is_zero() {
                    continue;
                }
                let q = d[t][j].div_floor(&d[t][t]);
                col_axpy(&mut d, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                if !d[t][j].is_zero() {
                    swap_cols(&mut d, t, j);
                    swap_cols(&mut v, t, j);
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // divisibility of the remaining block
            let bad = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !(&d[i][j] % &d[t][t]).is_zero());
            match bad {
                Some((i, _)) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut d, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
        t += 1;
    }
    let invariants = (0..t).map(|i| d[i][i].clone()).collect();
    SmithForm { invariants, u, v, rows: m, cols: n }
}

fn identity_big(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(i64::from(i == j))).collect())
        .collect()
}

/// `row_i -= q * row_j`
fn row_axpy(m: &mut [Vec<BigInt>], i: usize, j: usize, q: &BigInt) {
    let src = m[j].clone();
    for (x, y) in m[i].iter_mut().zip(&src) {
        *x -= q * y;
    }
}

/// `col_i -= q * col_j`
fn col_axpy(m: &mut [Vec<BigInt>], i: usize, j: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let y = row[j].clone();
        row[i] -= q * y;
    }
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    }
}

/// General integer solution `particular + Z·kernel` of `A x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerSolution {
    pub particular: Vec<BigInt>,
    pub kernel: Vec<Vec<BigInt>>,
}

/// Solves `A x = b` over the integers; `None` when no integer solution exists.
pub fn solve_integer_system(a: &[Vec<BigInt>], b: &[BigInt], cols: usize) -> Option<IntegerSolution> {
    assert_eq!(a.len(), b.len());
    let snf = smith_normal_form(a, cols);
    let ub: Vec<BigInt> = snf
        .u
        .iter()
        .map(|row| row.iter().zip(b).map(|(x, y)| x * y).sum())
        .collect();
    let r = snf.invariants.len();
    if ub[r..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut y = vec![BigInt::zero(); cols];
    for i in 0..r {
        let (q, rem) = ub[i].div_rem(&snf.invariants[i]);
        if !rem.is_zero() {
            return None;
        }
        y[i] = q;
    }
    let particular = (0..cols)
        .map(|i| snf.v[i].iter().zip(&y).map(|(x, z)| x * z).sum())
        .collect();
    let kernel = (r..cols).map(|j| (0..cols).map(|i| snf.v[i][j].clone()).collect()).collect();
    Some(IntegerSolution { particular, kernel })
}

/// `|P(Φ)/L(Φ)|`, the product of the Smith invariants of the Cartan matrix.
pub fn connection_index(rs: &RootSystem) -> BigInt {
    let a: Vec<Vec<BigInt>> = rs
        .cartan()
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    smith_normal_form(&a, rs.rank()).invariants.iter().product()
}

/// Root lattice `L(R)` in simple-root coordinates.
pub fn root_span(rs: &RootSystem, roots: &[Root]) -> Result<IntegerLattice> {
    let v: Vec<&[i64]> = roots.iter().map(Root::coords).collect();
    IntegerLattice::span(&v, rs.rank())
}

/// Coroot lattice `L(R∨)` in simple-coroot coordinates.
pub fn coroot_span(rs: &RootSystem, roots: &[Root]) -> Result<IntegerLattice> {
    let v = roots.iter().map(|r| rs.coroot(r).map(|c| c.coords().to_vec())).collect::<Result<Vec<_>>>()?;
    IntegerLattice::span(&v, rs.rank())
}

/// `W_R(R)`: closure of `R ∪ -R` under the reflections it contains.
///
/// Returned sorted, positive roots first in canonical order then negatives.
pub fn smallest_subsystem(rs: &RootSystem, generators: &[Root]) -> Result<Vec<Root>> {
    let mut seen: BTreeSet<Root> = BTreeSet::new();
    let mut queue = VecDeque::new();
    for g in generators {
        rs.check_root(g)?;
        for r in [g.clone(), g.neg()] {
            if seen.insert(r.clone()) {
                queue.push_back(r);
            }
        }
    }
    let gens: Vec<Root> = seen.iter().filter(|r| r.is_positive()).cloned().collect();
    while let Some(beta) = queue.pop_front() {
        for g in &gens {
            let img = rs.reflect_unchecked(g, &beta);
            if seen.insert(img.clone()) {
                queue.push_back(img);
            }
        }
    }
    let mut pos: Vec<Root> = seen.iter().filter(|r| r.is_positive()).cloned().collect();
    pos.sort();
    let mut out = pos.clone();
    out.extend(pos.iter().map(Root::neg));
    Ok(out)
}
