//! Test-side oracles built only from the Gram matrix of a root system.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use affhur::{AffineReflection, AffineWeylElement, Root, RootSystem};
use num_traits::ToPrimitive;

pub fn rs(name: &str) -> RootSystem {
    RootSystem::from_type(name.parse().unwrap()).unwrap()
}

pub fn refl(s: &str) -> AffineReflection {
    s.parse().unwrap()
}

/// `(α|β)` for root coordinates.
pub fn inner(rs: &RootSystem, a: &[i64], b: &[i64]) -> i64 {
    let g = rs.gram();
    let n = a.len();
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| a[i] * g[i][j] * b[j]).sum()
}

/// `α∨` in coroot coordinates, from `α∨ = 2α/(α|α)`.
pub fn coroot(rs: &RootSystem, a: &[i64]) -> Vec<i64> {
    let da = inner(rs, a, a) / 2;
    let g = rs.gram();
    a.iter()
        .enumerate()
        .map(|(i, &c)| {
            let di = g[i][i] / 2;
            assert_eq!((c * di) % da, 0);
            c * di / da
        })
        .collect()
}

/// `(v|α)` for `v` in coroot coordinates and `α` in root coordinates.
pub fn pair(rs: &RootSystem, v: &[i64], a: &[i64]) -> i64 {
    let g = rs.gram();
    let n = v.len();
    let mut s = 0;
    for i in 0..n {
        let di = g[i][i] / 2;
        for j in 0..n {
            // (α_i∨|α_j) = (α_i|α_j)/d_i
            assert_eq!(g[i][j] % di, 0);
            s += v[i] * (g[i][j] / di) * a[j];
        }
    }
    s
}

/// `s_{α,k}(v) = v − ((v|α) − k) α∨`.
pub fn reflect_point(rs: &RootSystem, a: &[i64], k: i64, v: &[i64]) -> Vec<i64> {
    let c = pair(rs, v, a) - k;
    let av = coroot(rs, a);
    v.iter().zip(&av).map(|(x, y)| x - c * y).collect()
}

/// `s_α(β)` in root coordinates.
pub fn reflect_root(rs: &RootSystem, a: &[i64], b: &[i64]) -> Vec<i64> {
    let c = 2 * inner(rs, a, b) / inner(rs, a, a);
    b.iter().zip(a).map(|(x, y)| x - c * y).collect()
}

/// An affine map on coroot coordinates, stored as the images of `0, e_1, …, e_n`.
pub type Map = Vec<Vec<i64>>;

pub fn points(n: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![0; n]];
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        out.push(e);
    }
    out
}

/// The map `v ↦ t_1(t_2(⋯ t_m(v)))`.
pub fn product_map(rs: &RootSystem, refs: &[(Vec<i64>, i64)]) -> Map {
    points(rs.rank())
        .into_iter()
        .map(|mut v| {
            for (a, k) in refs.iter().rev() {
                v = reflect_point(rs, a, *k, &v);
            }
            v
        })
        .collect()
}

pub fn as_pairs(t: &[AffineReflection]) -> Vec<(Vec<i64>, i64)> {
    t.iter().map(|r| (r.root().coords().to_vec(), r.level())).collect()
}

/// The library element evaluated on the same points.
pub fn element_map(w: &AffineWeylElement) -> Map {
    points(w.rank())
        .into_iter()
        .map(|v| {
            let q: Vec<_> = v.iter().map(|&x| num_rational::BigRational::from_integer(x.into())).collect();
            w.apply_point(&q).iter().map(|x| x.to_integer().to_i64().unwrap()).collect()
        })
        .collect()
}

/// Linear part of a map: images of `e_i` minus the image of `0`.
pub fn linear_part(m: &Map) -> Vec<Vec<i64>> {
    m[1..].iter().map(|x| x.iter().zip(&m[0]).map(|(a, b)| a - b).collect()).collect()
}

pub fn compose(a: &Map, b: &Map) -> Map {
    // a ∘ b, using affinity of a
    let la = linear_part(a);
    b.iter()
        .map(|v| {
            let mut out = a[0].clone();
            for (i, &c) in v.iter().enumerate() {
                for (o, x) in out.iter_mut().zip(&la[i]) {
                    *o += c * x;
                }
            }
            out
        })
        .collect()
}

/// Finite Weyl group as linear maps on coroot coordinates, by breadth-first closure.
pub fn finite_group(rs: &RootSystem) -> Vec<Map> {
    let n = rs.rank();
    let gens: Vec<Map> = rs.simple_roots().iter().map(|a| product_map(rs, &[(a.coords().to_vec(), 0)])).collect();
    let id = points(n);
    let mut seen: HashSet<Map> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = compose(&x, g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen.into_iter().collect()
}

pub fn finite_reflection(rs: &RootSystem, a: &Root) -> Map {
    product_map(rs, &[(a.coords().to_vec(), 0)])
}

pub fn finite_product(rs: &RootSystem, roots: &[Root]) -> Map {
    product_map(rs, &roots.iter().map(|r| (r.coords().to_vec(), 0)).collect::<Vec<_>>())
}

/// Subgroup of `W_0` generated by the reflections in the given roots.
pub fn generated_subgroup(rs: &RootSystem, roots: &[Root]) -> HashSet<Map> {
    let n = rs.rank();
    let gens: Vec<Map> = roots.iter().map(|r| finite_reflection(rs, r)).collect();
    let id = points(n);
    let mut seen: HashSet<Map> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = compose(&x, g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

/// All `m`-tuples of positive roots whose reflections multiply to `w`.
pub fn tuples_with_product(rs: &RootSystem, w: &Map, m: usize) -> BTreeSet<Vec<Root>> {
    let pos = rs.positive_roots();
    let mut out = BTreeSet::new();
    let mut idx = vec![0usize; m];
    if m == 0 {
        if *w == points(rs.rank()) {
            out.insert(Vec::new());
        }
        return out;
    }
    loop {
        let t: Vec<Root> = idx.iter().map(|&i| pos[i].clone()).collect();
        if finite_product(rs, &t) == *w {
            out.insert(t);
        }
        let mut k = 0;
        loop {
            if k == m {
                return out;
            }
            idx[k] += 1;
            if idx[k] < pos.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Absolute length by breadth-first search in the reflection Cayley graph.
pub fn finite_reflection_length(rs: &RootSystem, w: &Map) -> usize {
    let refs: Vec<Map> = rs.positive_roots().iter().map(|r| finite_reflection(rs, r)).collect();
    let id = points(rs.rank());
    let mut layer: HashSet<Map> = HashSet::from([id]);
    let mut seen = layer.clone();
    for d in 0.. {
        if layer.contains(w) {
            return d;
        }
        let mut next = HashSet::new();
        for x in &layer {
            for r in &refs {
                let y = compose(x, r);
                if seen.insert(y.clone()) {
                    next.insert(y);
                }
            }
        }
        layer = next;
    }
    unreachable!()
}

/// Integer row echelon form by repeated gcd steps; used as an independent
/// membership test.
pub fn echelon(mut rows: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    let n = rows.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for col in 0..n {
        loop {
            rows.retain(|r| r.iter().any(|&x| x != 0));
            let mut with: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][col] != 0).collect();
            if with.is_empty() {
                break;
            }
            with.sort_by_key(|&i| rows[i][col].abs());
            let p = with[0];
            if with.len() == 1 {
                out.push(rows.remove(p));
                break;
            }
            let pivot = rows[p].clone();
            for &i in &with[1..] {
                let q = rows[i][col] / pivot[col];
                for j in 0..n {
                    rows[i][j] -= q * pivot[j];
                }
            }
        }
    }
    out
}

pub fn in_span(gens: &[Vec<i64>], v: &[i64]) -> bool {
    let basis = echelon(gens.to_vec());
    let mut v = v.to_vec();
    for b in &basis {
        let col = b.iter().position(|&x| x != 0).unwrap();
        if v[col] % b[col] != 0 {
            return false;
        }
        let q = v[col] / b[col];
        for j in 0..v.len() {
            v[j] -= q * b[j];
        }
    }
    v.iter().all(|&x| x == 0)
}

pub fn same_span(a: &[Vec<i64>], b: &[Vec<i64>]) -> bool {
    a.iter().all(|v| in_span(b, v)) && b.iter().all(|v| in_span(a, v))
}

/// Determinant by cofactor expansion.
pub fn det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| *x).collect()).collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * det(&minor)
        })
        .sum()
}
