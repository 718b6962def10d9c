//! Generation, quasi-Coxeter detection and Hurwitz connectivity in affine
//! Weyl groups.
//!
//! A factorization `s_{β_1,k_1} ⋯ s_{β_m,k_m}` of `w = (w_0, λ)` is a root
//! sequence with `s_{β_1} ⋯ s_{β_m} = w_0` together with an integer solution
//! of `Σ -k_i v_i = λ`, where `v_i = s_{β_m} ⋯ s_{β_{i+1}}(β_i)∨`. Root
//! sequences are enumerated exhaustively; levels are found exactly through
//! the Smith normal form and listed inside a box `|k_i| ≤ K`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hurwitz::{
    apply_braid, connect_detailed, has_lr_shape, lr_normalize, AffineReflections, BraidWord, FiniteReflections,
    HurwitzAction, SearchLimits,
};
use crate::intlattice::{solve_integer_system, IntegerLattice, IntegerSolution};
use crate::linalg::{format_rational, rational, solve_rational};
use crate::rootsys::{CorootVector, Root, RootSystem};
use crate::weyl_aff::{
    aff_conjugate_reflection, coweight_conjugate, fixed_affine_subspace, fixer_reflections, AffineReflection,
    AffineWeylElement,
};
use crate::weyl_fin::{absolute_length, generates_w0, transformed_coroots, FiniteWeylElement};

/// Default bound on `|k_i|` when listing factorizations.
pub const DEFAULT_LEVEL_BOUND: i64 = 2;

/// Default search limits for the quasi-Coxeter pipelines.
pub fn default_limits() -> SearchLimits {
    SearchLimits::new(16, 1_000_000)
}

/// A request for the factorizations of `target` of a given length.
#[derive(Clone, Debug)]
pub struct FactorizationQuery {
    pub target: AffineWeylElement,
    pub length: usize,
    /// Bound `K` on the absolute value of every level.
    pub level_bound: i64,
}

/// Root sequences `(β_1, …, β_m)` of positive roots with `s_{β_1} ⋯ s_{β_m} = w0`.
///
/// Listed in lexicographic order of root coordinates.
pub fn root_sequences(rs: &RootSystem, w0: &FiniteWeylElement, m: usize) -> Vec<Vec<Root>> {
    if m == 0 {
        return if w0.is_identity() { vec![Vec::new()] } else { Vec::new() };
    }
    if (absolute_length(w0) + m) % 2 != 0 || absolute_length(w0) > m {
        return Vec::new();
    }
    rs.positive_roots()
        .par_iter()
        .map(|first| {
            let mut out = Vec::new();
            let s = FiniteWeylElement::reflection_unchecked(rs, first);
            let rest = s.mul(w0);
            if absolute_length(&rest) < m {
                let mut prefix = vec![first.clone()];
                seq_dfs(rs, &rest, m, &mut prefix, &mut out);
            }
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

fn seq_dfs(rs: &RootSystem, rest: &FiniteWeylElement, m: usize, prefix: &mut Vec<Root>, out: &mut Vec<Vec<Root>>) {
    let left = m - prefix.len();
    if left == 0 {
        if rest.is_identity() {
            out.push(prefix.clone());
        }
        return;
    }
    if left == 1 {
        if let Some(t) = rest.as_reflection(rs) {
            prefix.push(t.clone());
            out.push(prefix.clone());
            prefix.pop();
        }
        return;
    }
    for t in rs.positive_roots() {
        let next = FiniteWeylElement::reflection_unchecked(rs, t).mul(rest);
        if absolute_length(&next) > left - 1 {
            continue;
        }
        prefix.push(t.clone());
        seq_dfs(rs, &next, m, prefix, out);
        prefix.pop();
    }
}

/// Coefficient matrix of the level system: column `i` is `-v_i`.
fn level_matrix(rs: &RootSystem, roots: &[Root]) -> Vec<Vec<i64>> {
    let n = rs.rank();
    let cols = transformed_coroots(rs, roots);
    (0..n).map(|r| cols.iter().map(|c| -c[r]).collect()).collect()
}

/// All integer level vectors `k` with `Σ -k_i v_i = λ`, as particular solution plus kernel.
pub fn solve_levels(rs: &RootSystem, roots: &[Root], lam: &CorootVector) -> Option<IntegerSolution> {
    let a: Vec<Vec<BigInt>> = level_matrix(rs, roots)
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let b: Vec<BigInt> = lam.coords().iter().map(|&x| BigInt::from(x)).collect();
    solve_integer_system(&a, &b, roots.len())
}

/// Level vectors inside the box `[-K, K]^m` solving the system of `roots`.
pub fn levels_in_box(rs: &RootSystem, roots: &[Root], lam: &CorootVector, k: i64) -> Vec<Vec<i64>> {
    let m = roots.len();
    if m == 0 {
        return if lam.is_zero() { vec![Vec::new()] } else { Vec::new() };
    }
    let a: Vec<Vec<BigRational>> = level_matrix(rs, roots)
        .iter()
        .map(|r| r.iter().map(|&x| rational(x)).collect())
        .collect();
    let b: Vec<BigRational> = lam.coords().iter().map(|&x| rational(x)).collect();
    let Some(sol) = solve_rational(&a, &b, m) else {
        return Vec::new();
    };
    let free = sol.directions.len();
    let mut out = Vec::new();
    let mut t = vec![-k; free];
    loop {
        let mut v = sol.point.clone();
        for (d, &ti) in sol.directions.iter().zip(&t) {
            for (x, y) in v.iter_mut().zip(d) {
                *x += y * rational(ti);
            }
        }
        if v.iter().all(|x| x.is_integer()) {
            let ints: Vec<i64> = v.iter().filter_map(|x| x.to_integer().to_i64()).collect();
            if ints.len() == m && ints.iter().all(|x| x.abs() <= k) {
                out.push(ints);
            }
        }
        // odometer over the free coordinates
        let mut i = 0;
        loop {
            if i == free {
                out.sort();
                return out;
            }
            if t[i] < k {
                t[i] += 1;
                break;
            }
            t[i] = -k;
            i += 1;
        }
    }
}

fn attach(roots: &[Root], levels: &[i64]) -> Vec<AffineReflection> {
    roots
        .iter()
        .zip(levels)
        .map(|(r, &l)| AffineReflection::new(r.clone(), l))
        .collect()
}

/// All factorizations of the query target of the requested length with levels in `[-K, K]`.
///
/// Complete for the given `K`; sorted lexicographically by `(root, level)`.
pub fn enumerate_factorizations(rs: &RootSystem, q: &FactorizationQuery) -> Vec<Vec<AffineReflection>> {
    let w0 = q.target.finite_part();
    let lam = q.target.translation_part();
    let seqs = root_sequences(rs, w0, q.length);
    let mut out: Vec<Vec<AffineReflection>> = seqs
        .par_iter()
        .filter(|s| solve_levels(rs, s, lam).is_some())
        .flat_map_iter(|s| {
            levels_in_box(rs, s, lam, q.level_bound)
                .into_iter()
                .map(|l| attach(s, &l))
                .collect::<Vec<_>>()
        })
        .collect();
    out.sort();
    out
}

/// Default ceiling for [`absolute_length_affine`]: twice the finite rank.
pub fn default_length_ceiling(rs: &RootSystem) -> usize {
    2 * rs.rank()
}

/// `ℓ_T(w)` in the affine Weyl group.
///
/// The smallest `m` of the right parity for which some root sequence has a
/// solvable level system. Errors if none exists up to `ceiling`.
pub fn absolute_length_affine(rs: &RootSystem, w: &AffineWeylElement, ceiling: Option<usize>) -> Result<usize> {
    let ceiling = ceiling.unwrap_or_else(|| default_length_ceiling(rs));
    if w.is_identity() {
        return Ok(0);
    }
    let start = if w.finite_part().det() == 1 { 2 } else { 1 };
    let lam = w.translation_part();
    for m in (start..=ceiling).step_by(2) {
        if root_sequences(rs, w.finite_part(), m)
            .par_iter()
            .any(|s| solve_levels(rs, s, lam).is_some())
        {
            return Ok(m);
        }
    }
    Err(Error::LengthCeilingExceeded(ceiling))
}

/// Evidence for a generation verdict on an `(n+1)`-tuple.
#[derive(Clone, Debug, Serialize)]
pub struct GenerationCertificate {
    pub projected_generates: bool,
    /// Braid bringing the projected tuple to a repeated-root tail.
    pub normalizing_braid: Option<BraidWord>,
    /// The tuple after the braid.
    pub normalized_tuple: Option<Vec<AffineReflection>>,
    /// Coweight `λ` with `(λ|γ_i) = -l_i` for the first `n` entries, as rationals.
    pub conjugating_coweight: Option<Vec<String>>,
    pub repeated_root: Option<Root>,
    /// `l_n - l_{n+1}` of the normalized tuple.
    pub level_gap: Option<i64>,
    /// `Z`-span of the orbit of `(l_n - l_{n+1}) γ_n∨`, in simple-coroot coordinates.
    pub translation_lattice: Option<IntegerLattice>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GenerationResult {
    pub generates: bool,
    pub certificate: GenerationCertificate,
}

/// Decides whether `n+1` affine reflections generate the affine Weyl group.
pub fn generates_affine(rs: &RootSystem, tuple: &[AffineReflection], limits: SearchLimits) -> Result<GenerationResult> {
    let n = rs.rank();
    if tuple.len() != n + 1 {
        return Err(Error::WrongTupleLength { expected: n + 1, actual: tuple.len() });
    }
    for r in tuple {
        rs.check_root(r.root())?;
    }
    let roots: Vec<Root> = tuple.iter().map(|r| r.root().clone()).collect();
    let projected_generates = generates_w0(rs, &roots)?;
    let mut cert = GenerationCertificate {
        projected_generates,
        normalizing_braid: None,
        normalized_tuple: None,
        conjugating_coweight: None,
        repeated_root: None,
        level_gap: None,
        translation_lattice: None,
    };
    if !projected_generates {
        return Ok(GenerationResult { generates: false, certificate: cert });
    }

    let fin = FiniteReflections(rs);
    let len = absolute_length(&fin.product(&roots));
    let braid = lr_normalize(rs, &roots, len, limits)
        .ok_or_else(|| Error::Internal("no repeated-root tail in a generating finite orbit".into()))?;
    let aff = AffineReflections(rs);
    let u = apply_braid(&aff, tuple, &braid)?;
    let gamma = u[n].root().clone();
    if u[n - 1].root() != &gamma {
        return Err(Error::Internal("normalized tuple lacks a repeated tail".into()));
    }

    // (λ|γ_i) = -l_i for i < n; the γ_i span L(Φ), so λ is a coweight
    let rows: Vec<Vec<BigRational>> = u[..n]
        .iter()
        .map(|r| {
            (0..n)
                .map(|i| rational((0..n).map(|j| rs.cartan()[i][j] * r.root().coords()[j]).sum()))
                .collect()
        })
        .collect();
    let rhs: Vec<BigRational> = u[..n].iter().map(|r| rational(-r.level())).collect();
    let sol = solve_rational(&rows, &rhs, n)
        .filter(|s| s.directions.is_empty())
        .ok_or_else(|| Error::Internal("first n roots of the normalized tuple are dependent".into()))?;
    let lam = sol.point;
    let conj: Vec<AffineReflection> = u.iter().map(|r| coweight_conjugate(rs, &lam, r)).collect::<Result<_>>()?;
    if conj[..n].iter().any(|r| r.level() != 0) {
        return Err(Error::Internal("coweight conjugation left a nonzero level".into()));
    }

    let gap = u[n - 1].level() - u[n].level();
    let lattice = orbit_lattice(rs, &gamma, gap);
    let generates = lattice.is_full();
    if generates && (gap.abs() != 1 || !rs.is_long(&gamma)) {
        return Err(Error::Internal(format!(
            "generation with level gap {gap} on root {gamma} contradicts the long-root criterion"
        )));
    }
    cert.normalizing_braid = Some(braid);
    cert.normalized_tuple = Some(u);
    cert.conjugating_coweight = Some(lam.iter().map(format_rational).collect());
    cert.repeated_root = Some(gamma);
    cert.level_gap = Some(gap);
    cert.translation_lattice = Some(lattice);
    Ok(GenerationResult { generates, certificate: cert })
}

/// `Z`-span of the `W_0`-orbit of `gap · γ∨` in simple-coroot coordinates.
fn orbit_lattice(rs: &RootSystem, gamma: &Root, gap: i64) -> IntegerLattice {
    let n = rs.rank();
    let start = rs.coroot_unchecked(gamma).scale(gap);
    let gens: Vec<FiniteWeylElement> = rs
        .simple_roots()
        .iter()
        .map(|a| FiniteWeylElement::reflection_unchecked(rs, a))
        .collect();
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::from([start.coords().to_vec()]);
    let mut queue = VecDeque::from([start.coords().to_vec()]);
    while let Some(v) = queue.pop_front() {
        for g in &gens {
            let x = g.apply_coroot(&v);
            if seen.insert(x.clone()) {
                queue.push_back(x);
            }
        }
    }
    let vs: Vec<Vec<i64>> = seen.into_iter().collect();
    IntegerLattice::span(&vs, n).expect("rank-n vectors")
}

/// Outcome of the exact closure computation of a reflection subgroup.
#[derive(Clone, Debug, Serialize)]
pub struct ClosureResult {
    /// `|p(H)|`, the size of the finite image.
    pub finite_image_size: usize,
    /// `H ∩ tr(L(Φ∨))`, in simple-coroot coordinates.
    pub translation_lattice: IntegerLattice,
    pub generates: bool,
}

/// Generation test by multiplication closure, independent of the lattice criterion.
///
/// Walks the finite image `p(H)` keeping one lift per element; every
/// Schreier element `rep(u) · g · rep(q)⁻¹` is a translation and together
/// these translations generate `H ∩ tr(L(Φ∨))`. `H = W` iff `p(H) = W_0`
/// and the lattice is `L(Φ∨)`.
pub fn closure_oracle(rs: &RootSystem, gens: &[AffineReflection]) -> Result<ClosureResult> {
    let n = rs.rank();
    let gens: Vec<AffineWeylElement> = gens
        .iter()
        .map(|g| AffineWeylElement::from_reflection(rs, g))
        .collect::<Result<_>>()?;
    let id = AffineWeylElement::identity(n);
    let mut reps: HashMap<FiniteWeylElement, AffineWeylElement> = HashMap::from([(id.finite_part().clone(), id.clone())]);
    let mut queue = VecDeque::from([id]);
    let mut translations: Vec<Vec<i64>> = Vec::new();
    while let Some(u) = queue.pop_front() {
        for g in &gens {
            let x = u.mul(g);
            match reps.get(x.finite_part()) {
                Some(r) => {
                    let s = x.mul(&r.inverse());
                    debug_assert!(s.is_translation());
                    if !s.translation_part().is_zero() {
                        translations.push(s.translation_part().coords().to_vec());
                    }
                }
                None => {
                    reps.insert(x.finite_part().clone(), x.clone());
                    queue.push_back(x);
                }
            }
        }
    }
    let lattice = IntegerLattice::span(&translations, n)?;
    let generates = reps.len() == crate::weyl_fin::group_order(rs) && lattice.is_full();
    Ok(ClosureResult { finite_image_size: reps.len(), translation_lattice: lattice, generates })
}

/// Report of [`is_quasi_coxeter_affine`].
#[derive(Clone, Debug, Serialize)]
pub struct QuasiCoxeterReport {
    pub verdict: bool,
    /// A generating factorization of length `n+1`, if one exists.
    pub witness: Option<Vec<AffineReflection>>,
    pub certificate: Option<GenerationCertificate>,
    /// Whether the witness has all levels in `[-K, K]`.
    pub witness_within_bound: bool,
    /// The verdict covers every root sequence and every level vector, not just `|k_i| ≤ K`.
    pub conclusive: bool,
    pub level_bound: i64,
    pub root_sequences_checked: usize,
    pub note: Option<String>,
}

/// Whether `w` has a factorization into `n+1` reflections generating `W`.
///
/// Exact: for a fixed root sequence the level gap after normalization is
/// determined by `w`, so one solution per sequence decides it. A witness
/// inside the box `|k_i| ≤ K` is preferred when one exists.
pub fn is_quasi_coxeter_affine(
    rs: &RootSystem,
    w: &AffineWeylElement,
    level_bound: i64,
    limits: SearchLimits,
) -> Result<QuasiCoxeterReport> {
    let n = rs.rank();
    let mut report = QuasiCoxeterReport {
        verdict: false,
        witness: None,
        certificate: None,
        witness_within_bound: false,
        conclusive: true,
        level_bound,
        root_sequences_checked: 0,
        note: None,
    };
    let parity_ok = w.finite_part().det() == if (n + 1) % 2 == 0 { 1 } else { -1 };
    if parity_ok {
        let lam = w.translation_part();
        for seq in root_sequences(rs, w.finite_part(), n + 1) {
            if !generates_w0(rs, &seq)? {
                continue;
            }
            let Some(sol) = solve_levels(rs, &seq, lam) else { continue };
            report.root_sequences_checked += 1;
            let boxed = levels_in_box(rs, &seq, lam, level_bound);
            let (levels, within) = match boxed.first() {
                Some(l) => (l.clone(), true),
                None => {
                    let l: Option<Vec<i64>> = sol.particular.iter().map(ToPrimitive::to_i64).collect();
                    (l.ok_or_else(|| Error::Internal("level overflow".into()))?, false)
                }
            };
            let tuple = attach(&seq, &levels);
            let res = generates_affine(rs, &tuple, limits)?;
            if res.generates {
                report.verdict = true;
                report.witness = Some(tuple);
                report.certificate = Some(res.certificate);
                report.witness_within_bound = within;
                if within {
                    break;
                }
            }
        }
    }
    if !report.verdict {
        report.note = Some(match absolute_length_affine(rs, w, None) {
            Ok(l) if l > n + 1 => format!(
                "absolute length {l} exceeds n+1 = {}; only an extended quasi-Coxeter notion could apply",
                n + 1
            ),
            Ok(l) if !parity_ok => format!("absolute length {l} has the wrong parity for n+1 = {}", n + 1),
            Ok(l) => format!("absolute length {l}; no factorization of length {} generates", n + 1),
            Err(e) => e.to_string(),
        });
    }
    Ok(report)
}

/// Closure of a set of affine reflections under mutual conjugation.
///
/// Only used for sets with a common fixed point, where the result is finite.
fn conjugation_closure(rs: &RootSystem, gens: &[AffineReflection]) -> BTreeSet<AffineReflection> {
    let mut set: BTreeSet<AffineReflection> = gens.iter().cloned().collect();
    let mut queue: VecDeque<AffineReflection> = set.iter().cloned().collect();
    while let Some(x) = queue.pop_front() {
        let current: Vec<AffineReflection> = set.iter().cloned().collect();
        for y in current {
            for z in [aff_conjugate_reflection(rs, &x, &y), aff_conjugate_reflection(rs, &y, &x)] {
                if set.insert(z.clone()) {
                    queue.push_back(z);
                }
            }
        }
    }
    set
}

/// Whether the reflections generate a parabolic subgroup of finite type:
/// they have a common fixed point and contain every reflection fixing their
/// common fixed space.
pub fn generates_finite_parabolic(rs: &RootSystem, gens: &[AffineReflection]) -> bool {
    let Some(space) = fixed_affine_subspace(rs, gens) else {
        return false;
    };
    let fixer: BTreeSet<AffineReflection> = fixer_reflections(rs, &space).into_iter().collect();
    conjugation_closure(rs, gens) == fixer
}

/// Whether `w` is a parabolic quasi-Coxeter element.
///
/// For `ℓ_T(w) = n+1` this is the quasi-Coxeter test; for `ℓ_T(w) ≤ n` some
/// reduced factorization (levels in `[-K, K]` or the Smith-form particular
/// solution) must generate a finite parabolic subgroup.
pub fn is_parabolic_quasi_coxeter_affine(
    rs: &RootSystem,
    w: &AffineWeylElement,
    level_bound: i64,
    limits: SearchLimits,
) -> Result<bool> {
    let n = rs.rank();
    let len = absolute_length_affine(rs, w, None)?;
    if len == n + 1 {
        return Ok(is_quasi_coxeter_affine(rs, w, level_bound, limits)?.verdict);
    }
    if len > n + 1 {
        return Ok(false);
    }
    let lam = w.translation_part();
    for seq in root_sequences(rs, w.finite_part(), len) {
        let Some(sol) = solve_levels(rs, &seq, lam) else { continue };
        let mut candidates: Vec<Vec<i64>> = levels_in_box(rs, &seq, lam, level_bound);
        if let Some(p) = sol.particular.iter().map(ToPrimitive::to_i64).collect::<Option<Vec<i64>>>() {
            candidates.push(p);
        }
        if candidates.iter().any(|l| generates_finite_parabolic(rs, &attach(&seq, l))) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// One member of a fibre of the projection to `W_0`.
#[derive(Clone, Debug, Serialize)]
pub struct FiberMember {
    pub tuple: Vec<AffineReflection>,
    /// Common shift of the last two levels relative to the base.
    pub shift: i64,
    /// `σ_n^p` sending the base to this member, when the shift is a multiple of the level gap.
    pub braid: Option<BraidWord>,
}

/// Tuples over the same roots as `base` with the last two levels shifted by
/// `j ∈ [-K, K]`; every one multiplies to the same element.
pub fn fiber(rs: &RootSystem, base: &[AffineReflection], k: i64) -> Result<Vec<FiberMember>> {
    let m = base.len();
    if m < 2 || base[m - 1].root() != base[m - 2].root() {
        return Err(Error::MissingRepeatedTail);
    }
    for r in base {
        rs.check_root(r.root())?;
    }
    let aff = AffineReflections(rs);
    let w = aff.product(base);
    let gap = base[m - 2].level() - base[m - 1].level();
    let mut out = Vec::new();
    for j in -k..=k {
        let mut t = base.to_vec();
        t[m - 2] = base[m - 2].with_level(base[m - 2].level() + j);
        t[m - 1] = base[m - 1].with_level(base[m - 1].level() + j);
        if aff.product(&t) != w {
            return Err(Error::Internal("fibre member changed the product".into()));
        }
        let braid = if gap != 0 && j % gap == 0 {
            let word = BraidWord::power((m - 1) as i32, j / gap);
            if apply_braid(&aff, base, &word)? != t {
                return Err(Error::Internal(format!("σ power {word} does not reach shift {j}")));
            }
            Some(word)
        } else if j == 0 {
            Some(BraidWord::empty())
        } else {
            None
        };
        out.push(FiberMember { tuple: t, shift: j, braid });
    }
    Ok(out)
}

/// Diagnostics for one stage of [`connect_reduced`].
#[derive(Clone, Debug, Serialize)]
pub struct StageReport {
    pub stage: String,
    pub ok: bool,
    pub micros: u128,
    pub detail: String,
    /// For search stages: whether the explored orbit was closed.
    pub exhausted: Option<bool>,
}

/// Result of [`connect_reduced`].
#[derive(Clone, Debug, Serialize)]
pub struct ConnectReport {
    pub braid_word: Option<BraidWord>,
    /// `"pipeline"`, `"bfs"` or `"none"`.
    pub method: String,
    pub stages: Vec<StageReport>,
    pub limits_hit: bool,
}

fn stage(name: &str, start: Instant, ok: bool, detail: String, exhausted: Option<bool>) -> StageReport {
    StageReport { stage: name.to_string(), ok, micros: start.elapsed().as_micros(), detail, exhausted }
}

/// Braid word sending `t1` to `t2`, both factorizations of `w`.
///
/// For `(n+1)`-tuples: bring both projections to a repeated-root tail, align
/// projections inside the finite orbit, then shift levels along the fibre
/// with a power of `σ_n`. Falls back to bidirectional search if a stage
/// fails; other lengths use the search directly.
pub fn connect_reduced(
    rs: &RootSystem,
    w: &AffineWeylElement,
    t1: &[AffineReflection],
    t2: &[AffineReflection],
    limits: SearchLimits,
) -> Result<ConnectReport> {
    let n = rs.rank();
    let aff = AffineReflections(rs);
    for t in [t1, t2] {
        for r in t {
            rs.check_root(r.root())?;
        }
        if &aff.product(t) != w {
            return Err(Error::NotAFactorization);
        }
    }
    if t1.len() != t2.len() {
        return Err(Error::WrongTupleLength { expected: t1.len(), actual: t2.len() });
    }
    let mut stages = Vec::new();
    if t1 == t2 {
        return Ok(ConnectReport {
            braid_word: Some(BraidWord::empty()),
            method: "pipeline".into(),
            stages,
            limits_hit: false,
        });
    }
    if t1.len() == n + 1 {
        for t in [t1, t2] {
            let roots: Vec<Root> = t.iter().map(|r| r.root().clone()).collect();
            if !generates_w0(rs, &roots)? {
                return Err(Error::NotQuasiCoxeter(format!("projected roots {roots:?} do not generate W_0")));
            }
        }
        if let Some(word) = pipeline(rs, t1, t2, limits, &mut stages)? {
            return Ok(ConnectReport { braid_word: Some(word), method: "pipeline".into(), stages, limits_hit: false });
        }
    }
    let start = Instant::now();
    let out = connect_detailed(&aff, t1, t2, limits)?;
    stages.push(stage(
        "bfs",
        start,
        out.word.is_some(),
        format!("{} nodes explored", out.nodes_explored),
        Some(out.exhausted),
    ));
    let found = out.word.is_some();
    Ok(ConnectReport {
        braid_word: out.word,
        method: if found { "bfs".into() } else { "none".into() },
        stages,
        limits_hit: !found && !out.exhausted,
    })
}

fn pipeline(
    rs: &RootSystem,
    t1: &[AffineReflection],
    t2: &[AffineReflection],
    limits: SearchLimits,
    stages: &mut Vec<StageReport>,
) -> Result<Option<BraidWord>> {
    let m = t1.len();
    let aff = AffineReflections(rs);
    let fin = FiniteReflections(rs);
    let proj = |t: &[AffineReflection]| -> Vec<Root> { t.iter().map(|r| r.root().clone()).collect() };

    // stage 1: repeated-root tails
    let start = Instant::now();
    let p1 = proj(t1);
    let len = absolute_length(&fin.product(&p1));
    let b1 = lr_normalize(rs, &p1, len, limits);
    let b2 = lr_normalize(rs, &proj(t2), len, limits);
    let (Some(b1), Some(b2)) = (b1, b2) else {
        stages.push(stage("normalize", start, false, "no repeated-root tail found".into(), None));
        return Ok(None);
    };
    let u1 = apply_braid(&aff, t1, &b1)?;
    let u2 = apply_braid(&aff, t2, &b2)?;
    stages.push(stage("normalize", start, true, format!("words {b1} and {b2}"), None));

    // stage 2: align projections in the finite orbit
    let start = Instant::now();
    let (q1, q2) = (proj(&u1), proj(&u2));
    let out = connect_detailed(&fin, &q1, &q2, limits)?;
    let Some(beta) = out.word else {
        stages.push(stage("align", start, false, "projections not connected".into(), Some(out.exhausted)));
        return Ok(None);
    };
    let v1 = apply_braid(&aff, &u1, &beta)?;
    if proj(&v1) != q2 || !has_lr_shape(&q2, len) {
        stages.push(stage("align", start, false, "lifted braid changed the projection".into(), Some(out.exhausted)));
        return Ok(None);
    }
    stages.push(stage("align", start, true, format!("word {beta}"), Some(out.exhausted)));

    // stage 3: shift along the fibre
    let start = Instant::now();
    let gap = v1[m - 2].level() - v1[m - 1].level();
    let shift = u2[m - 2].level() - v1[m - 2].level();
    let same_prefix = v1[..m - 2] == u2[..m - 2];
    if !same_prefix || gap == 0 || shift % gap != 0 {
        stages.push(stage(
            "fibre",
            start,
            false,
            format!("gap {gap}, shift {shift}, prefixes equal: {same_prefix}"),
            None,
        ));
        return Ok(None);
    }
    let sigma = BraidWord::power((m - 1) as i32, shift / gap);
    stages.push(stage("fibre", start, true, format!("word {sigma}"), None));

    let word = b1.then(&beta).then(&sigma).then(&b2.inverse());
    let start = Instant::now();
    let ok = apply_braid(&aff, t1, &word)? == t2;
    stages.push(stage("verify", start, ok, format!("{} letters", word.len()), None));
    Ok(ok.then_some(word))
}

/// Generation test for tuples of any length: the lattice criterion for
/// `(n+1)`-tuples, the closure computation otherwise.
pub fn generates(rs: &RootSystem, tuple: &[AffineReflection], limits: SearchLimits) -> Result<bool> {
    if tuple.len() == rs.rank() + 1 {
        Ok(generates_affine(rs, tuple, limits)?.generates)
    } else {
        Ok(closure_oracle(rs, tuple)?.generates)
    }
}

/// The affine Coxeter element `s_{α_1} ⋯ s_{α_n} s_{α̃,1}`.
pub fn coxeter_element(rs: &RootSystem) -> AffineWeylElement {
    let mut refs: Vec<AffineReflection> = rs.simple_roots().into_iter().map(AffineReflection::linear).collect();
    refs.push(AffineReflection::new(rs.highest_root().clone(), 1));
    AffineReflections(rs).product(&refs)
}

/// The standard affine simple reflections.
pub fn affine_simple_reflections(rs: &RootSystem) -> Vec<AffineReflection> {
    let mut refs: Vec<AffineReflection> = rs.simple_roots().into_iter().map(AffineReflection::linear).collect();
    refs.push(AffineReflection::new(rs.highest_root().clone(), 1));
    refs
}
