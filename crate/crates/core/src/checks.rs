//! Named verification suites: closed formulas against generic computation,
//! generation criteria against closure, and the connectivity pipeline.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hurwitz::{apply_braid, connect, AffineReflections, BraidWord, FiniteReflections, HurwitzAction, SearchLimits};
use crate::intlattice::{IntegerLattice, LatticeIndex};
use crate::quasicox::{
    absolute_length_affine, closure_oracle, connect_reduced, coxeter_element, enumerate_factorizations,
    generates_affine, FactorizationQuery,
};
use crate::rootsys::{CartanType, CorootVector, Root, RootSystem};
use crate::weyl_aff::{
    aff_conjugate_reflection, coweight_conjugate, recognize_reflection, translation_part_of_product,
    AffineReflection, AffineWeylElement,
};
use crate::weyl_fin::{generates_w0, group_elements, transformed_coroots, FiniteWeylElement};

pub const SUITES: [&str; 4] = ["lemmas", "example-a2", "generation", "main-theorem"];

/// Outcome of one named check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub group: Option<String>,
    pub passed: bool,
    pub cases: usize,
    pub micros: u128,
    pub detail: String,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    pub level_bound: i64,
    pub limits: SearchLimits,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: 0x5eed, level_bound: 2, limits: crate::quasicox::default_limits() }
    }
}

struct Check {
    name: String,
    group: Option<String>,
    start: Instant,
    cases: usize,
    failure: Option<String>,
    detail: String,
}

impl Check {
    fn new(name: &str, group: Option<&RootSystem>) -> Self {
        Check {
            name: name.to_string(),
            group: group.map(|rs| rs.cartan_type().to_string()),
            start: Instant::now(),
            cases: 0,
            failure: None,
            detail: String::new(),
        }
    }

    /// Records one case; keeps the first counterexample.
    fn case(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            name: self.name,
            group: self.group,
            passed: self.failure.is_none(),
            cases: self.cases,
            micros: self.start.elapsed().as_micros(),
            detail: self.detail,
            counterexample: self.failure,
        }
    }
}

/// Runs a suite on the given groups (ignored by `example-a2`).
pub fn run_suite(name: &str, groups: &[CartanType], opts: &SuiteOptions) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    match name {
        "example-a2" => out.extend(example_a2(opts)?),
        "lemmas" | "generation" | "main-theorem" => {
            for &t in groups {
                let rs = RootSystem::from_type(t)?;
                match name {
                    "lemmas" => out.extend(lemmas(&rs, opts)?),
                    "generation" => out.extend(generation(&rs, opts)?),
                    _ => out.extend(main_theorem(&rs, opts)?),
                }
            }
        }
        other => return Err(Error::Parse(format!("unknown suite {other:?}; expected one of {SUITES:?}"))),
    }
    Ok(out)
}

fn all_reflections(rs: &RootSystem, lo: i64, hi: i64) -> Vec<AffineReflection> {
    rs.positive_roots()
        .iter()
        .flat_map(|r| (lo..=hi).map(move |k| AffineReflection::new(r.clone(), k)))
        .collect()
}

fn elem(rs: &RootSystem, r: &AffineReflection) -> AffineWeylElement {
    AffineWeylElement::from_reflection(rs, r).expect("root of the system")
}

/// Formula-level identities for one root system.
pub fn lemmas(rs: &RootSystem, opts: &SuiteOptions) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut out = Vec::new();
    let n = rs.rank();

    let mut c = Check::new("translations of reflection pairs", Some(rs));
    for a in rs.roots() {
        let av = rs.coroot(a)?;
        for k in -3..=3 {
            for l in -3..=3 {
                let p = elem(rs, &AffineReflection::new(a.clone(), k)).mul(&elem(rs, &AffineReflection::new(a.clone(), l)));
                c.case(p == AffineWeylElement::translation(av.scale(k - l)), || format!("{a}, k={k}, l={l}"));
            }
        }
    }
    out.push(c.finish());

    let mut c = Check::new("conjugation closed form", Some(rs));
    for a in rs.roots() {
        for b in rs.roots() {
            for k in -3..=3 {
                for l in -3..=3 {
                    let x = AffineReflection::new(a.clone(), k);
                    let y = AffineReflection::new(b.clone(), l);
                    let closed = aff_conjugate_reflection(rs, &x, &y);
                    let generic = elem(rs, &x).conjugate(&elem(rs, &y));
                    c.case(elem(rs, &closed) == generic, || format!("s[{x}] s[{y}] s[{x}]"));
                }
            }
        }
    }
    out.push(c.finish());

    let mut c = Check::new("translation part of products", Some(rs));
    let pool: Vec<AffineReflection> = (0..6)
        .map(|i| {
            let r = &rs.positive_roots()[i % rs.positive_roots().len()];
            AffineReflection::new(r.clone(), i as i64 - 2)
        })
        .collect();
    let mut seqs: Vec<Vec<AffineReflection>> = vec![Vec::new()];
    for _ in 0..4 {
        let next: Vec<Vec<AffineReflection>> = seqs
            .iter()
            .filter(|s| s.len() == seqs.last().map_or(0, Vec::len))
            .flat_map(|s| {
                pool.iter().map(move |p| {
                    let mut t = s.clone();
                    t.push(p.clone());
                    t
                })
            })
            .collect();
        for s in &next {
            c.case(translation_part_of_product(rs, s).is_ok(), || format!("{s:?}"));
        }
        seqs = next;
    }
    out.push(c.finish());

    let mut c = Check::new("normal form round trip", Some(rs));
    let simple: Vec<AffineWeylElement> = crate::quasicox::affine_simple_reflections(rs).iter().map(|r| elem(rs, r)).collect();
    let random_word = |rng: &mut ChaCha8Rng| -> AffineWeylElement {
        let len = rng.gen_range(0..10);
        (0..len).fold(AffineWeylElement::identity(n), |acc, _| acc.mul(simple.choose(rng).unwrap()))
    };
    for _ in 0..2000 {
        let (x, y, z) = (random_word(&mut rng), random_word(&mut rng), random_word(&mut rng));
        let ok = x.mul(&x.inverse()).is_identity() && x.mul(&y).mul(&z) == x.mul(&y.mul(&z));
        let rebuilt = AffineWeylElement::from_parts(x.finite_part().clone(), x.translation_part().clone());
        c.case(ok && rebuilt == x, || format!("{x:?}"));
    }
    out.push(c.finish());

    let mut c = Check::new("coweight conjugation", Some(rs));
    let rec = |x: &AffineWeylElement| recognize_reflection(rs, x);
    for a in rs.positive_roots() {
        for _ in 0..10 {
            let lam: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
            let k = rng.gen_range(-3..=3);
            let r = AffineReflection::new(a.clone(), k);
            let t = AffineWeylElement::translation(CorootVector::new(lam.clone()));
            let lam_q: Vec<_> = lam.iter().map(|&x| crate::linalg::rational(x)).collect();
            let formula = coweight_conjugate(rs, &lam_q, &r)?;
            c.case(rec(&t.conjugate(&elem(rs, &r))) == Some(formula.clone()), || format!("λ={lam:?}, {r}"));
        }
    }
    out.push(c.finish());

    let mut c = Check::new("translation covariance", Some(rs));
    let w0s = group_elements(rs);
    for w in w0s.iter().take(200) {
        let wa = AffineWeylElement::from_parts(w.clone(), CorootVector::zero(n));
        for a in rs.positive_roots() {
            let t = AffineWeylElement::translation(rs.coroot(a)?);
            let image = rs.coroot(&w.apply_root(a))?;
            c.case(wa.conjugate(&t) == AffineWeylElement::translation(image), || format!("{w:?}, {a}"));
        }
    }
    out.push(c.finish());

    let mut c = Check::new("pairings between root lengths", Some(rs));
    let d = rs.ratio_delta();
    for a in rs.roots() {
        for b in rs.roots() {
            if rs.is_long(a) == rs.is_long(b) || rs.inner(a.coords(), b.coords()) == 0 {
                continue;
            }
            let v = rs.cartan_integer(a, b);
            let expected = if rs.is_short(a) { 1 } else { d };
            c.case(v.abs() == expected, || format!("2({a}|{b})/({b}|{b}) = {v}"));
        }
    }
    out.push(c.finish());

    let mut c = Check::new("transformed coroots stay in the coroot span", Some(rs));
    for _ in 0..500 {
        let m = rng.gen_range(1..=n + 1);
        let seq: Vec<Root> = (0..m).map(|_| rs.roots().choose(&mut rng).unwrap().clone()).collect();
        let first = transformed_coroots(rs, &seq)[0].clone();
        let span = IntegerLattice::span(&seq.iter().map(|r| rs.coroot(r).map(|c| c.coords().to_vec())).collect::<Result<Vec<_>>>()?, n)?;
        c.case(span.contains(&first)?, || format!("{seq:?}"));
    }
    out.push(c.finish());

    let mut c = Check::new("dual root bases", Some(rs));
    for set in subsets(rs.positive_roots(), n) {
        if !generates_w0(rs, &set)? {
            continue;
        }
        for perm in permutations(&set) {
            let mut vs = transformed_coroots(rs, &perm[..n - 1]);
            vs.push(rs.coroot(&perm[n - 1])?.coords().to_vec());
            c.case(IntegerLattice::span(&vs, n)?.is_full(), || format!("{perm:?}"));
        }
    }
    out.push(c.finish());

    if !rs.is_simply_laced() {
        let mut c = Check::new("mixed sublattice misses short roots", Some(rs));
        let (primal, dual) = mixed_sublattices(rs)?;
        for a in rs.roots() {
            if rs.is_short(a) {
                c.case(!primal.contains(a.coords())?, || format!("short root {a} in the primal lattice"));
                c.case(dual.contains(rs.coroot(a)?.coords())?, || format!("coroot of short {a} missing"));
            } else {
                c.case(!dual.contains(rs.coroot(a)?.coords())?, || format!("coroot of long {a} in the dual lattice"));
            }
        }
        let idx = dual.index_in(&IntegerLattice::full(n))?;
        c.case(matches!(&idx, LatticeIndex::Finite(i) if *i > 1.into()), || format!("index {idx:?}"));
        c.detail = format!("index of the dual lattice: {idx:?}");
        out.push(c.finish());

        let mut c = Check::new("mixed sublattice is Weyl-stable", Some(rs));
        for a in rs.simple_roots() {
            let s = FiniteWeylElement::reflection(rs, &a)?;
            for b in dual.basis_i64().unwrap_or_default() {
                c.case(dual.contains(&s.apply_coroot(&b))?, || format!("s_{a} moves {b:?} out"));
            }
        }
        out.push(c.finish());
    }
    Ok(out)
}

/// `span({δα : α short} ∪ long)` in root coordinates and its dual
/// `span({δα∨ : α long} ∪ {α∨ : α short})` in coroot coordinates.
pub fn mixed_sublattices(rs: &RootSystem) -> Result<(IntegerLattice, IntegerLattice)> {
    let d = rs.ratio_delta();
    let n = rs.rank();
    let mut primal = Vec::new();
    let mut dual = Vec::new();
    for a in rs.roots() {
        let av = rs.coroot(a)?;
        if rs.is_long(a) {
            primal.push(a.coords().to_vec());
            dual.push(av.scale(d).coords().to_vec());
        } else {
            primal.push(a.coords().iter().map(|x| x * d).collect());
            dual.push(av.coords().to_vec());
        }
    }
    Ok((IntegerLattice::span(&primal, n)?, IntegerLattice::span(&dual, n)?))
}

pub(crate) fn subsets<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, x) in items.iter().enumerate() {
        for mut rest in subsets(&items[i + 1..], k - 1) {
            rest.insert(0, x.clone());
            out.push(rest);
        }
    }
    out
}

pub(crate) fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x.clone());
            out.push(p);
        }
    }
    out
}

fn refl(s: &str) -> AffineReflection {
    s.parse().expect("literal")
}

/// The worked `Ã_2` example: `w = (s_{α_1} s_{α_2} s_{α̃,1})²`.
pub fn example_a2(opts: &SuiteOptions) -> Result<Vec<CheckResult>> {
    let rs = RootSystem::from_type("A2".parse()?)?;
    let aff = AffineReflections(&rs);
    let fin = FiniteReflections(&rs);
    let c = aff.product(&[refl("1,0:0"), refl("0,1:0"), refl("1,1:1")]);
    let w = c.mul(&c);
    let mut out = Vec::new();

    let mut ch = Check::new("element is a translation", Some(&rs));
    let longest = group_elements(&rs)
        .into_iter()
        .find(|x| rs.simple_roots().iter().all(|a| !x.apply_root(a).is_positive()));
    let orbit_image = longest.map(|l| l.apply_coroot(&[1, 2]));
    ch.case(w.is_translation(), || format!("{w:?}"));
    ch.case(orbit_image.as_deref() == Some(w.translation_part().coords()), || {
        format!("translation {} is not the longest-element image of (1,2)", w.translation_part())
    });
    ch.detail = format!("translation {} in simple-coroot coordinates", w.translation_part());
    out.push(ch.finish());

    let mut ch = Check::new("absolute length is 4", Some(&rs));
    let len = absolute_length_affine(&rs, &w, None)?;
    ch.case(len == 4, || format!("got {len}"));
    ch.case(w.finite_part().det() == 1, || "odd parity".into());
    let q2 = FactorizationQuery { target: w.clone(), length: 2, level_bound: opts.level_bound };
    ch.case(enumerate_factorizations(&rs, &q2).is_empty(), || "length-2 factorization found".into());
    out.push(ch.finish());

    let mut ch = Check::new("displayed factorizations", Some(&rs));
    let t1 = vec![refl("1,1:0"), refl("0,1:1"), refl("0,1:0"), refl("1,1:1")];
    let t2 = vec![refl("1,1:1"), refl("1,1:0"), refl("0,1:1"), refl("0,1:0")];
    let q4 = FactorizationQuery { target: w.clone(), length: 4, level_bound: 2 };
    let facs = enumerate_factorizations(&rs, &q4);
    ch.case(facs.contains(&t1), || "first tuple missing from the K=2 enumeration".into());
    let w2 = aff.product(&t2);
    let q4b = FactorizationQuery { target: w2.clone(), length: 4, level_bound: 2 };
    ch.case(enumerate_factorizations(&rs, &q4b).contains(&t2), || "second tuple missing".into());
    ch.detail = format!(
        "{} factorizations at K=2; the second displayed tuple multiplies to translation {} rather than {}",
        facs.len(),
        w2.translation_part(),
        w.translation_part()
    );
    out.push(ch.finish());

    let mut ch = Check::new("displayed Hurwitz chains", Some(&rs));
    let a = Root::new(vec![1, 0]);
    let b = Root::new(vec![0, 1]);
    let h = Root::new(vec![1, 1]);
    let word = BraidWord::new(vec![2, 1, 3, 2])?;
    let chains: Vec<Vec<Vec<Root>>> = vec![
        vec![vec![a.clone(), a.clone(), b.clone(), b.clone()], vec![b.clone(), b.clone(), a.clone(), a.clone()]],
        vec![
            vec![a.clone(), a.clone(), b.clone(), b.clone()],
            vec![b.clone(), a.clone(), a.clone(), b.clone()],
            vec![b.clone(), b.clone(), h.clone(), h.clone()],
            vec![h.clone(), h.clone(), b.clone(), b.clone()],
        ],
        vec![
            vec![a.clone(), a.clone(), b.clone(), b.clone()],
            vec![a.clone(), b.clone(), b.clone(), a.clone()],
            vec![h.clone(), h.clone(), a.clone(), a.clone()],
            vec![a.clone(), a.clone(), h.clone(), h.clone()],
        ],
    ];
    for chain in &chains {
        for pair in chain.windows(2) {
            let last = pair[1] == *chain.last().unwrap();
            let found = if last { Some(word.clone()) } else { connect(&fin, &pair[0], &pair[1], opts.limits) };
            let ok = found
                .as_ref()
                .map(|wd| apply_braid(&fin, &pair[0], wd).map(|t| t == pair[1]).unwrap_or(false))
                .unwrap_or(false);
            ch.case(ok, || format!("{:?} -> {:?}", pair[0], pair[1]));
        }
    }
    out.push(ch.finish());

    let mut ch = Check::new("quasi-Coxeter test reports length 4", Some(&rs));
    let rep = crate::quasicox::is_quasi_coxeter_affine(&rs, &w, opts.level_bound, opts.limits)?;
    ch.case(!rep.verdict && rep.note.as_deref().is_some_and(|s| s.contains("length 4")), || format!("{:?}", rep.note));
    out.push(ch.finish());
    Ok(out)
}

/// All tuples `(s_{γ_1,l_1}, …, s_{γ_{n-1},l_{n-1}}, s_{γ_n,l_n}, s_{γ_n,l_{n+1}})` with
/// positive roots and levels in `[-b, b]`.
pub fn normalized_tuples(rs: &RootSystem, b: i64) -> Vec<Vec<AffineReflection>> {
    let n = rs.rank();
    let refs = all_reflections(rs, -b, b);
    let mut out: Vec<Vec<AffineReflection>> = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                refs.iter().map(move |r| {
                    let mut x = t.clone();
                    x.push(r.clone());
                    x
                })
            })
            .collect();
    }
    out.into_iter()
        .flat_map(|t| {
            let last = t[n - 1].clone();
            (-b..=b).map(move |l| {
                let mut x = t.clone();
                x.push(last.with_level(l));
                x
            })
        })
        .collect()
}

/// Generation criteria: long-root necessity and agreement with the closure computation.
pub fn generation(rs: &RootSystem, opts: &SuiteOptions) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let mut c = Check::new("generating tuples have a long repeated root and gap ±1", Some(rs));
    let tuples = normalized_tuples(rs, 2);
    let mut generating = 0;
    for t in &tuples {
        let res = generates_affine(rs, t, opts.limits)?;
        if res.generates {
            generating += 1;
            let cert = &res.certificate;
            let ok = cert.level_gap.is_some_and(|g| g.abs() == 1)
                && cert.repeated_root.as_ref().is_some_and(|r| rs.is_long(r));
            c.case(ok, || format!("{t:?}"));
        } else {
            c.cases += 1;
        }
    }
    c.detail = format!("{generating} of {} tuples generate", tuples.len());
    out.push(c.finish());

    let mut c = Check::new("lattice criterion agrees with closure", Some(rs));
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let refs = all_reflections(rs, -2, 2);
    let sample: Vec<Vec<AffineReflection>> = (0..200)
        .map(|_| (0..=rs.rank()).map(|_| refs.choose(&mut rng).unwrap().clone()).collect())
        .collect();
    for t in sample.iter().chain(tuples.iter().step_by(7)) {
        let a = generates_affine(rs, t, opts.limits)?.generates;
        let b = closure_oracle(rs, t)?.generates;
        c.case(a == b, || format!("{t:?}: lattice {a}, closure {b}"));
    }
    out.push(c.finish());
    Ok(out)
}

/// Pairwise connectivity of the sampled reduced factorizations of the Coxeter element.
pub fn main_theorem(rs: &RootSystem, opts: &SuiteOptions) -> Result<Vec<CheckResult>> {
    let w = coxeter_element(rs);
    let q = FactorizationQuery { target: w.clone(), length: rs.rank() + 1, level_bound: opts.level_bound };
    let facs = enumerate_factorizations(rs, &q);
    let mut c = Check::new("reduced factorizations are Hurwitz-connected", Some(rs));
    let aff = AffineReflections(rs);
    for (i, t1) in facs.iter().enumerate() {
        for t2 in &facs[i + 1..] {
            let rep = connect_reduced(rs, &w, t1, t2, opts.limits)?;
            let ok = rep
                .braid_word
                .as_ref()
                .is_some_and(|wd| apply_braid(&aff, t1, wd).map(|t| &t == t2).unwrap_or(false));
            c.case(ok, || format!("{t1:?} -> {t2:?}"));
        }
    }
    c.detail = format!("{} factorizations with levels in [-{k}, {k}]", facs.len(), k = opts.level_bound);
    Ok(vec![c.finish()])
}

/// Roots appearing in a set of tuples, for diagnostics.
pub fn roots_used(tuples: &[Vec<AffineReflection>]) -> BTreeSet<Root> {
    tuples.iter().flatten().map(|r| r.root().clone()).collect()
}
