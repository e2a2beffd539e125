//! One PASS/FAIL line per acceptance criterion. Sizes, seeds and time limits are fixed.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use stallings_core::case_engine::{fuzz_theorem_sizes, verify_tables};
use stallings_core::functor::{core_f_phi, f_phi_pointed};
use stallings_core::graph::{self, canonical_form, LabeledGraph, PointedGraph};
use stallings_core::parallel::{run_trials, Execution};
use stallings_core::random::{random_cyclic_word, random_graph, random_hom, random_subgroup, random_word};
use stallings_core::stallings::{contains, gamma, is_subgroup_of, onto_base, pi1_basis, Subgroup};
use stallings_core::whitehead::{
    is_fgr_morphism, is_stencil_space, whitehead_graph, FgrObject, RestrictionSet, WhiteheadEdge,
};
use stallings_core::words::{Alphabet, Letter, Word};

const SEED: u64 = 0x5eed_2024;

fn alphabet(n: usize) -> Alphabet {
    let names: Vec<String> = (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    Alphabet::new(&names).unwrap()
}

struct Outcome {
    passed: usize,
    total: usize,
    detail: String,
}

impl Outcome {
    fn of(results: &[Result<(), String>]) -> Self {
        let failures: Vec<&String> = results.iter().filter_map(|r| r.as_ref().err()).collect();
        let detail = failures.first().map(|s| format!("first failure: {s}")).unwrap_or_default();
        Outcome { passed: results.len() - failures.len(), total: results.len(), detail }
    }

    fn ok(&self) -> bool {
        self.passed == self.total
    }
}

/// Extends the partial permutations of a folded graph to a random permutation action on
/// its vertices plus a few extra points.
fn completion(g: &LabeledGraph, rng: &mut ChaCha8Rng) -> Vec<(Letter, Vec<usize>)> {
    let n = g.vertex_count() + 3;
    g.alphabet()
        .generators()
        .iter()
        .map(|x| {
            let letter = x.pos();
            let mut image = vec![usize::MAX; n];
            let mut hit = vec![false; n];
            for v in g.vertices() {
                if let Some(h) = g.find_out(v, &letter) {
                    image[v] = g.terminus(h);
                    hit[g.terminus(h)] = true;
                }
            }
            let mut free: Vec<usize> = (0..n).filter(|&w| !hit[w]).collect();
            free.shuffle(rng);
            for slot in image.iter_mut().filter(|t| **t == usize::MAX) {
                *slot = free.pop().expect("as many free targets as free sources");
            }
            (letter, image)
        })
        .collect()
}

fn act(perms: &[(Letter, Vec<usize>)], start: usize, w: &Word) -> usize {
    let mut v = start;
    for x in w.letters() {
        let (_, p) = perms.iter().find(|(l, _)| l.generator() == x.generator()).expect("letter in alphabet");
        v = if x.is_positive() { p[v] } else { p.iter().position(|&t| t == v).expect("permutation") };
    }
    v
}

fn criterion_1() -> Outcome {
    let results = run_trials(Execution::Parallel, SEED ^ 1, 500, |_, rng| {
        let x = alphabet(rng.gen_range(1..=4));
        let h = random_subgroup(rng, &x, 5, 10);
        let g = gamma(&h);
        let recovered = gamma(&Subgroup::new(&x, pi1_basis(&g)).unwrap());
        if recovered.canonical() != g.canonical() {
            return Err(format!("Γ(π₁(Γ(H))) ≠ Γ(H) for {:?}", h.generators()));
        }
        for w in h.generators() {
            if !contains(&h, w) {
                return Err(format!("generator {w} rejected"));
            }
        }
        for _ in 0..100 {
            let mut p = Word::identity();
            for _ in 0..rng.gen_range(1..=5) {
                let w = h.generators().choose(rng).unwrap();
                p = p.mul(&if rng.gen() { w.clone() } else { w.inverse() });
            }
            if !contains(&h, &p) {
                return Err(format!("product {p} rejected"));
            }
        }
        let mut certified = 0;
        let mut attempts = 0;
        while certified < 100 && attempts < 10_000 {
            attempts += 1;
            let w = random_word(rng, &x, 1, 12);
            let perms = completion(g.graph(), rng);
            if h.generators().iter().any(|s| act(&perms, g.base(), s) != g.base()) {
                return Err("completion does not fix the base under H".into());
            }
            if act(&perms, g.base(), &w) == g.base() {
                continue;
            }
            certified += 1;
            if contains(&h, &w) {
                return Err(format!("certified non-member {w} accepted"));
            }
        }
        if certified < 100 {
            // H of finite index with all short words inside: nothing to certify.
            if x.letters().all(|l| contains(&h, &Word::letter(l))) {
                return Ok(());
            }
            return Err(format!("only {certified} non-members certified for {:?} over {x}", h.generators()));
        }
        Ok(())
    });
    Outcome::of(&results)
}

fn criterion_2() -> Outcome {
    let results = run_trials(Execution::Parallel, SEED ^ 2, 1000, |_, rng| {
        let x = alphabet(rng.gen_range(1..=3));
        let vertices = rng.gen_range(1..=8);
        let extra = rng.gen_range(0..=8);
        let g = random_graph(rng, &x, vertices, extra);
        let (f1, q1) = graph::fold_all_with(&g, Some(&mut *rng));
        let (f2, q2) = graph::fold_all_with(&g, Some(&mut *rng));
        let c1 = canonical_form(&f1, q1.vertex_map()[0]);
        let c2 = canonical_form(&f2, q2.vertex_map()[0]);
        if c1 != c2 || !f1.is_folded() {
            return Err(format!("fold orders disagree:\n{c1}\nvs\n{c2}"));
        }
        Ok(())
    });
    Outcome::of(&results)
}

fn criterion_3() -> Outcome {
    let results = run_trials(Execution::Parallel, SEED ^ 3, 500, |_, rng| {
        let y = alphabet(rng.gen_range(1..=3));
        let x = alphabet(rng.gen_range(1..=3));
        let h = random_subgroup(rng, &y, 4, 6);
        let phi = random_hom(rng, &y, &x, 1, 4);
        let lhs = core_f_phi(&phi, &gamma(&h)).map_err(|e| e.to_string())?;
        let images = h.generators().iter().map(|w| phi.apply(w).unwrap()).collect();
        let rhs = gamma(&Subgroup::new(&x, images).unwrap());
        if lhs.canonical() != rhs.canonical() {
            return Err(format!("φ = {phi}, H = {:?}", h.generators()));
        }
        Ok(())
    });
    Outcome::of(&results)
}

fn criterion_4() -> (Outcome, usize) {
    let results = run_trials(Execution::Parallel, SEED ^ 4, 500, |_, rng| {
        let x = alphabet(rng.gen_range(1..=3));
        let k = random_subgroup(rng, &x, 3, 6);
        let basis = pi1_basis(&gamma(&k));
        if basis.is_empty() {
            return Ok(false);
        }
        let mut gens = Vec::new();
        while gens.is_empty() {
            for _ in 0..rng.gen_range(1..=3) {
                let mut p = Word::identity();
                for _ in 0..rng.gen_range(1..=3) {
                    let b = basis.choose(rng).unwrap();
                    p = p.mul(&if rng.gen() { b.clone() } else { b.inverse() });
                }
                if !p.is_identity() {
                    gens.push(p);
                }
            }
        }
        let h = Subgroup::new(&x, gens).unwrap();
        let r = onto_base(&h, &k).map_err(|e| e.to_string())?;
        let adjusted = k.conjugate(&r.pre);
        if !contains(&adjusted, &r.circuit) {
            return Err(format!("u = {} not in K", r.circuit));
        }
        let class = r.morphism.classify();
        if !class.surjective() {
            return Err(format!("not onto for H = {:?}, K = {:?}", h.generators(), k.generators()));
        }
        let strict = !is_subgroup_of(&k, &h);
        if strict && class.injective() {
            return Err(format!("H < K but injective: H = {:?}, K = {:?}", h.generators(), k.generators()));
        }
        Ok(strict)
    });
    let strict = results.iter().filter(|r| matches!(r, Ok(true))).count();
    let plain: Vec<Result<(), String>> = results.into_iter().map(|r| r.map(|_| ())).collect();
    (Outcome::of(&plain), strict)
}

fn criterion_5() -> Outcome {
    let report = fuzz_theorem_sizes(10_000, &[1, 2, 3], 6, SEED ^ 5, Execution::Parallel);
    let mut results: Vec<Result<(), String>> = vec![Ok(()); report.trials];
    for (slot, phi) in results.iter_mut().zip(report.counterexamples.iter()) {
        *slot = Err(format!("counterexample φ = {phi}"));
    }
    for (slot, e) in results.iter_mut().rev().zip(report.errors.iter()) {
        *slot = Err(e.clone());
    }
    Outcome::of(&results)
}

fn criterion_6() -> Outcome {
    match verify_tables(Execution::Parallel) {
        Ok(report) => {
            let listed: Vec<_> = report.listed().collect();
            let failed: Vec<&str> = report.failures().map(|r| r.id.as_str()).collect();
            Outcome {
                passed: listed.len() - failed.len(),
                total: listed.len(),
                detail: if failed.is_empty() { String::new() } else { format!("failing rows: {}", failed.join(" ")) },
            }
        }
        Err(e) => Outcome { passed: 0, total: 1, detail: e.to_string() },
    }
}

fn criterion_7() -> Outcome {
    let results = run_trials(Execution::Parallel, SEED ^ 7, 500, |_, rng| {
        // Objects admitting no valid φ into the drawn X are redrawn.
        let (obj, delta, phi) = loop {
            let u = alphabet(rng.gen_range(1..=3));
            let x = alphabet(rng.gen_range(2..=4));
            let delta = gamma(&random_subgroup(rng, &u, 3, 5));
            let mut n: RestrictionSet = whitehead_graph(delta.graph());
            let letters: Vec<Letter> = u.letters().collect();
            for _ in 0..rng.gen_range(0..=2) {
                let (a, b) = (letters.choose(rng).unwrap().clone(), letters.choose(rng).unwrap().clone());
                if let Ok(e) = WhiteheadEdge::new(a, b) {
                    n.insert(e);
                }
            }
            let obj = FgrObject::new(u.clone(), n).unwrap();
            let target = FgrObject::full(&x);
            let phi = (0..2_000)
                .map(|_| random_hom(rng, &u, &x, 1, 4))
                .find(|phi| is_fgr_morphism(&obj, &target, phi).is_ok_and(|r| r.is_valid()));
            if let Some(phi) = phi {
                break (obj, delta, phi);
            }
        };
        if !is_stencil_space(&obj, delta.graph()) {
            return Err("constructed object is not a stencil space".into());
        }
        let image: PointedGraph = f_phi_pointed(&phi, &delta).map_err(|e| e.to_string())?;
        if !image.is_folded() {
            return Err(format!("𝓕_φ(Δ) not folded for φ = {phi}"));
        }
        let core = core_f_phi(&phi, &delta).map_err(|e| e.to_string())?;
        if core.canonical() != image.canonical() {
            return Err(format!("Core changed 𝓕_φ(Δ) for φ = {phi}"));
        }
        Ok(())
    });
    Outcome::of(&results)
}

fn cyclic_oracle(w: &Word) -> RestrictionSet {
    let l = w.letters();
    let mut out = BTreeSet::new();
    for i in 0..l.len() {
        let next = &l[(i + 1) % l.len()];
        if let Ok(e) = WhiteheadEdge::new(l[i].clone(), next.inverse()) {
            out.insert(e);
        }
    }
    out
}

fn criterion_8() -> Outcome {
    let results = run_trials(Execution::Parallel, SEED ^ 8, 200, |_, rng| {
        let x = alphabet(rng.gen_range(1..=4));
        let len = rng.gen_range(1..=12);
        let w = random_cyclic_word(rng, &x, len);
        let g = gamma(&Subgroup::new(&x, vec![w.clone()]).unwrap());
        if whitehead_graph(g.graph()) != cyclic_oracle(&w) {
            return Err(format!("w = {w}"));
        }
        Ok(())
    });
    Outcome::of(&results)
}

fn line(n: usize, name: &str, outcome: &Outcome, elapsed: Duration, limit: Option<Duration>, extra: &str) -> bool {
    let in_time = limit.is_none_or(|l| elapsed <= l);
    let ok = outcome.ok() && in_time;
    let limit_text = limit.map(|l| format!(" (limit {}s)", l.as_secs())).unwrap_or_default();
    println!(
        "criterion {n} {}: {name}: {}/{} in {:.2}s{limit_text}{}{}",
        if ok { "PASS" } else { "FAIL" },
        outcome.passed,
        outcome.total,
        elapsed.as_secs_f64(),
        if extra.is_empty() { String::new() } else { format!("; {extra}") },
        if outcome.detail.is_empty() { String::new() } else { format!("; {}", outcome.detail) },
    );
    ok
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn main() -> ExitCode {
    let mut all = true;
    let (o, t) = timed(criterion_1);
    all &= line(1, "π₁ ∘ Γ correspondence, 500 subgroups", &o, t, Some(Duration::from_secs(30)), "");
    let (o, t) = timed(criterion_2);
    all &= line(2, "fold confluence, 1000 graphs", &o, t, None, "");
    let (o, t) = timed(criterion_3);
    all &= line(3, "Core ∘ 𝓕_φ = Γ ∘ φ, 500 pairs", &o, t, None, "");
    let ((o, strict), t) = timed(criterion_4);
    all &= line(4, "onto base by conjugation, 500 pairs", &o, t, None, &format!("{strict} strict"));
    let (o, t) = timed(criterion_5);
    all &= line(5, "injectivity up to conjugation, 10000 φ", &o, t, Some(Duration::from_secs(60)), "");
    let (o, t) = timed(criterion_6);
    all &= line(6, "case table replication", &o, t, None, "");
    let (o, t) = timed(criterion_7);
    all &= line(7, "stencil spaces need no trimming, 500 triples", &o, t, None, "");
    let (o, t) = timed(criterion_8);
    all &= line(8, "Whitehead graph vs cyclic pairs, 200 words", &o, t, None, "");
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
