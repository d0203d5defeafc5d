//! Acceptance run: one PASS/FAIL line per criterion, exact over finite rings.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use symnet_core::extraction::{decompose_one_row, long_parameter_is_row_length, shape_check};
use symnet_core::localization::{jacobson_corollary_check, patch_report, project_matrix};
use symnet_core::subgroups::{product_length_identity_check, word_rng, GeneratorSet};
use symnet_core::transporter::{
    check_t1, check_t2, check_t3, is_in_transporter, normalization_witness, replay_sandwich_failure,
    sandwich_check, NetMutation,
};
use symnet_core::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn zm(m: u64) -> ModRing {
    ModRing::new(m).unwrap()
}

fn iset(n: usize) -> IndexSet {
    IndexSet::new(n).unwrap()
}

fn rel(n: usize, classes: &[&[i32]]) -> EquivRel {
    let v: Vec<Vec<i32>> = classes.iter().map(|c| c.to_vec()).collect();
    EquivRel::new(iset(n), &v).unwrap()
}

fn blocks() -> EquivRel {
    rel(4, &[&[1, 2, -1, -2], &[3, 4, -3, -4]])
}

fn halves() -> EquivRel {
    rel(5, &[&[1, 2, 3, 4, 5], &[-1, -2, -3, -4, -5]])
}

fn seed_sigma(entries: &[(i32, i32, u64)], r: ModRing) -> LevelSeed {
    LevelSeed {
        sigma: entries.iter().map(|&(i, j, d)| (i, j, r.ideal_generated_by(d))).collect(),
        gamma: vec![],
    }
}

/// Block nets and seeded closure nets used by several criteria.
fn test_nets() -> Vec<(String, FormNet)> {
    let mut out = Vec::new();
    for m in [4u64, 8] {
        let r = zm(m);
        let plain = closure_from_levels(&blocks(), &LevelSeed::default(), r).unwrap();
        out.push((format!("block net Z/{m}"), plain));
        let seeded = closure_from_levels(&blocks(), &seed_sigma(&[(1, 3, 2)], r), r).unwrap();
        out.push((format!("cross-seeded closure Z/{m}"), seeded));
    }
    let r = zm(8);
    let mut seed = seed_sigma(&[(2, -4, 4)], r);
    seed.gamma.push((1, r.ideal(4).unwrap()));
    out.push(("cross and gamma seeded closure Z/8".into(), closure_from_levels(&blocks(), &seed, r).unwrap()));
    out
}

fn criterion_1() -> Outcome {
    let mut cases = 0usize;
    let mut bad = Vec::new();
    for m in [2u64, 3, 4] {
        let (r, s) = (zm(m), iset(4));
        for rel in Relation::exhaustive(s, r) {
            cases += 1;
            if !steinberg_check(&rel, r, s).unwrap() {
                bad.push(format!("{rel:?} over Z/{m}"));
            }
        }
    }
    let exhaustive = cases;
    let mut rng = word_rng(1);
    for m in [8u64, 9, 12] {
        let (r, s) = (zm(m), iset(5));
        for _ in 0..10_000 {
            let rel = Relation::random(&mut rng, s, r);
            cases += 1;
            if !steinberg_check(&rel, r, s).unwrap() {
                bad.push(format!("{rel:?} over Z/{m}"));
            }
        }
    }
    Outcome {
        pass: bad.is_empty(),
        detail: format!("{exhaustive} exhaustive + {} random relation instances, {} failures{}", cases - exhaustive, bad.len(), first(&bad)),
    }
}

fn criterion_2() -> Outcome {
    let (r, s) = (zm(2), iset(2));
    let mut all = vec![SympMatrix::identity(r, s)];
    for i in s.indices() {
        for j in s.indices().filter(|&j| j != i) {
            all.push(transvection(&TransvectionSpec::of(i, j, r.one()).unwrap(), s).unwrap());
        }
    }
    let mut checks = 0usize;
    let mut bad = 0usize;
    for a in &all {
        for b in &all {
            for i in s.indices() {
                checks += 1;
                bad += usize::from(!product_length_identity_check(a, b, i).unwrap());
            }
        }
    }
    let mut pairs = 0usize;
    for m in [4u64, 8, 9, 12] {
        let (r, s) = (zm(m), iset(4));
        let gens = GeneratorSet::from_net(&FormNet::full(r, s));
        for t in 0..10_000u64 {
            let (_, a) = gens.sample_bounded_word(12, m << 32 | t);
            let (_, b) = gens.sample_bounded_word(12, m << 32 | (t + 1_000_000));
            pairs += 1;
            for i in s.indices() {
                checks += 1;
                bad += usize::from(!product_length_identity_check(&a, &b, i).unwrap());
            }
        }
    }
    Outcome {
        pass: bad == 0,
        detail: format!("{} transvection pairs over Z/2 + {pairs} random word pairs, {checks} index checks, {bad} mismatches", all.len() * all.len()),
    }
}

fn criterion_3() -> Outcome {
    let mut bad = Vec::new();
    let mut words = 0usize;
    for (name, net) in test_nets() {
        for seed in 0..1000u64 {
            let (word, g) = sample_word(&net, 50, seed);
            words += 1;
            let inv = g.inverse();
            if !g.multiply(&inv).unwrap().is_identity() {
                bad.push(format!("{name}: mirror is not an inverse, seed {seed}"));
            }
            if !sp_membership(&g, &net) || !sp_membership(&inv, &net) {
                bad.push(format!("{name}: seed {} left Sp(sigma, Gamma)", word.seed));
            }
        }
    }
    Outcome { pass: bad.is_empty(), detail: format!("{words} words of length 50 over 5 nets, {} failures{}", bad.len(), first(&bad)) }
}

fn criterion_4() -> Outcome {
    let mut problems = Vec::new();
    let mut ep_checked = 0usize;
    let mut normalized = 0usize;
    for (name, net) in test_nets() {
        let r = net.ring();
        let s = net.index_set();
        let mut population = Vec::new();
        for seed in 0..200u64 {
            let (_, g) = sample_word(&net, 30, seed);
            ep_checked += 1;
            if !is_in_transporter(&g, &net).unwrap().0 {
                problems.push(format!("{name}: Ep word {seed} fails (T1)-(T3)"));
            }
            if seed < 10 {
                population.push(g);
            }
        }
        let any = GeneratorSet::from_net(&FormNet::full(r, s));
        for seed in 0..60u64 {
            population.push(any.sample_bounded_word(3, 7_000 + seed).1);
        }
        for (k, a) in population.iter().enumerate() {
            if is_in_transporter(a, &net).unwrap().0 {
                normalized += 1;
                if let Some(w) = normalization_witness(a, &net, 1000, k as u64, 30).unwrap() {
                    problems.push(format!("{name}: transporter element {k} does not normalize: {w:?}"));
                }
            }
        }
    }
    // constructed violations
    let r = zm(4);
    let s = iset(4);
    let block = closure_from_levels(&blocks(), &LevelSeed::default(), r).unwrap();
    let cross = transvection(&TransvectionSpec::short(1, 3, r.one()).unwrap(), s).unwrap();
    let t1 = check_t1(&cross, &block).unwrap();
    if t1.is_empty() {
        problems.push("T_13(1) not flagged by (T1)".into());
    }
    if normalization_witness(&cross, &block, 1000, 1, 30).unwrap().is_none() {
        problems.push("no conjugation witness for T_13(1)".into());
    }
    let r8 = zm(8);
    let mut strict = FormNet::full(r8, s);
    strict.set_gamma(1, r8.ideal(2).unwrap());
    let long = transvection(&TransvectionSpec::long(1, r8.one()).unwrap(), s).unwrap();
    if !check_t2(&long, &strict).unwrap().iter().any(|v| (v.i, v.j, v.k) == (1, 1, 1)) {
        problems.push("T_{1,-1}(1) not flagged by (T2)".into());
    }
    let mut jump = FormNet::full(r, s);
    jump.set_gamma(3, r.zero_ideal());
    let t31 = transvection(&TransvectionSpec::short(3, 1, r.one()).unwrap(), s).unwrap();
    if check_t3(&t31, &jump).unwrap().is_empty() {
        problems.push("Gamma jump not flagged by (T3)".into());
    }
    Outcome {
        pass: problems.is_empty(),
        detail: format!(
            "{ep_checked} Ep words, {normalized} transporter elements x 1000 conjugations, 4 constructed violations, {} problems{}",
            problems.len(),
            first(&problems)
        ),
    }
}

fn criterion_5() -> Outcome {
    let r4 = zm(4);
    let r8 = zm(8);
    let mut extra8 = seed_sigma(&[(1, -2, 2)], r8);
    extra8.gamma.push((3, r8.ideal(4).unwrap()));
    let configs = vec![
        ("single class Z/4", EquivRel::full(iset(4)), LevelSeed::default(), r4),
        ("single class Z/4 seeded", EquivRel::full(iset(4)), seed_sigma(&[(1, 2, 2)], r4), r4),
        ("halves Z/8", halves(), LevelSeed::default(), r8),
        ("halves Z/8 seeded", halves(), extra8, r8),
    ];
    let mut problems = Vec::new();
    let mut words = 0;
    let mut conjugates = 0;
    for (name, nu, extra, r) in &configs {
        let rep = sandwich_check(nu, extra, *r, 1000, 2024, 30, None).unwrap();
        words += rep.words_checked;
        conjugates += rep.conjugates_checked;
        if let Some(f) = rep.failure {
            problems.push(format!("{name}: {f:?}"));
        }
        let closure = closure_from_levels(nu, extra, *r).unwrap();
        let mu = NetMutation::default_for(nu, &closure).unwrap();
        let mutated = sandwich_check(nu, extra, *r, 1000, 2024, 30, Some(mu)).unwrap();
        match mutated.failure {
            None => problems.push(format!("{name}: mutation {mu:?} not detected")),
            Some(f) => {
                let shrunk = mu.apply(&closure).unwrap();
                if !replay_sandwich_failure(&f, &shrunk).unwrap() {
                    problems.push(format!("{name}: witness does not replay"));
                }
            }
        }
    }
    Outcome {
        pass: problems.is_empty(),
        detail: format!("{words} H-words, {conjugates} conjugated generators, 4 mutation runs, {} problems{}", problems.len(), first(&problems)),
    }
}

fn one_row_specs(p: i32, params: &[u64], r: ModRing, s: IndexSet) -> Vec<TransvectionSpec> {
    let mut specs = Vec::new();
    let mut it = params.iter();
    for j in s.positives().filter(|&j| j != p.abs()) {
        specs.push(TransvectionSpec::short(-p, j, r.elem(*it.next().unwrap() as i64)).unwrap());
        specs.push(TransvectionSpec::short(-p, -j, r.elem(*it.next().unwrap() as i64)).unwrap());
    }
    specs.push(TransvectionSpec::long(-p, r.elem(*it.next().unwrap() as i64)).unwrap());
    specs
}

#[derive(Default)]
struct ExtractionTally {
    cases: usize,
    round_trip_bad: usize,
    long_bad_pos: usize,
    long_bad_neg: usize,
    first_long_bad: Option<(u64, usize, i32)>,
}

impl ExtractionTally {
    fn check(&mut self, a: &SympMatrix, p: i32, r: ModRing, s: IndexSet) {
        self.cases += 1;
        assert!(shape_check(a, p).unwrap());
        let d = decompose_one_row(a, p).unwrap();
        if word_product(&d, r, s).unwrap() != *a {
            self.round_trip_bad += 1;
        }
        if !long_parameter_is_row_length(a, p) {
            if p > 0 {
                self.long_bad_pos += 1;
            } else {
                self.long_bad_neg += 1;
            }
            self.first_long_bad.get_or_insert((r.modulus(), s.n(), p));
        }
    }
}

fn criterion_6() -> Outcome {
    let mut t = ExtractionTally::default();
    // exhaustive family over Z/2, n = 3, built in reverse order
    let (r, s) = (zm(2), iset(3));
    for p in s.indices() {
        let slots = 2 * (s.n() - 1) + 1;
        let mut family = BTreeSet::new();
        for mask in 0..(1u64 << slots) {
            let params: Vec<u64> = (0..slots).map(|b| mask >> b & 1).collect();
            let mut specs = one_row_specs(p, &params, r, s);
            specs.reverse();
            let a = word_product(&specs, r, s).unwrap();
            family.insert(a.rows());
            t.check(&a, p, r, s);
        }
        assert_eq!(family.len(), 1 << slots);
    }
    let exhaustive = t.cases;
    let mut rng = word_rng(6);
    for m in [4u64, 8] {
        let r = zm(m);
        for _ in 0..5000 {
            let s = iset(rng.random_range(1..=5));
            let idx: Vec<i32> = s.indices().collect();
            let p = idx[rng.random_range(0..idx.len())];
            let params: Vec<u64> = (0..2 * s.n() - 1).map(|_| rng.random_range(0..m)).collect();
            let mut specs = one_row_specs(p, &params, r, s);
            specs.shuffle(&mut rng);
            let a = word_product(&specs, r, s).unwrap();
            t.check(&a, p, r, s);
        }
    }
    Outcome {
        pass: t.round_trip_bad == 0 && t.long_bad_pos + t.long_bad_neg == 0,
        detail: format!(
            "{exhaustive} exhaustive + {} random one-row elements; round-trip mismatches {}; \
             trailing parameter != row_length(a, -p): {} with p > 0, {} with p < 0 (first (m, n, p) = {:?})",
            t.cases - exhaustive,
            t.round_trip_bad,
            t.long_bad_pos,
            t.long_bad_neg,
            t.first_long_bad
        ),
    }
}

fn criterion_7() -> Outcome {
    let r4 = zm(4);
    let r8 = zm(8);
    let mut extra8 = seed_sigma(&[(1, -2, 2)], r8);
    extra8.gamma.push((3, r8.ideal(4).unwrap()));
    let configs = vec![
        ("block Z/4 seeded", blocks(), seed_sigma(&[(1, 3, 2)], r4), r4),
        ("single class Z/4", EquivRel::full(iset(4)), LevelSeed::default(), r4),
        ("block Z/8 seeded", blocks(), seed_sigma(&[(1, 3, 2)], r8), r8),
        ("halves Z/8 seeded", halves(), extra8, r8),
    ];
    let mut problems = Vec::new();
    let mut congruent = 0;
    let mut plain = 0;
    for (name, nu, extra, r) in &configs {
        let rep = jacobson_corollary_check(nu, extra, *r, 1000, 77, 30).unwrap();
        congruent += rep.congruent_checked();
        plain += rep.plain_congruent;
        if let Some(f) = rep.failure {
            problems.push(format!("{name}: {f:?}"));
        }
    }
    Outcome {
        pass: problems.is_empty(),
        detail: format!("{congruent} words in Sp(2n, R, J) checked ({plain} found by plain sampling), {} problems{}", problems.len(), first(&problems)),
    }
}

fn criterion_8() -> Outcome {
    let mut problems = Vec::new();
    let (mut members, mut outsiders) = (0usize, 0usize);
    for m in [12u64, 36] {
        let (r, s) = (zm(m), iset(4));
        let mut seed = seed_sigma(&[(1, 3, 6)], r);
        seed.gamma.push((-2, r.ideal_generated_by(2)));
        let net = closure_from_levels(&blocks(), &seed, r).unwrap();
        let inside = GeneratorSet::from_net(&net);
        let anywhere = GeneratorSet::from_net(&FormNet::full(r, s));
        for t in 0..10_000u64 {
            let gens = if t % 2 == 0 { &inside } else { &anywhere };
            let max_len = if t % 2 == 0 { 20 } else { 3 };
            let (word, b) = gens.sample_bounded_word(max_len, t);
            let rep = patch_report(&b, &net).unwrap();
            if !rep.agrees() {
                problems.push(format!("Z/{m} seed {}: {rep:?}", word.seed));
            }
            if rep.direct {
                members += 1;
            } else {
                outsiders += 1;
            }
            let (_, c) = anywhere.sample_bounded_word(6, t | 1 << 40);
            for f in r.crt_split().rings() {
                let lhs = project_matrix(&b.multiply(&c).unwrap(), f).unwrap();
                let rhs = project_matrix(&b, f).unwrap().multiply(&project_matrix(&c, f).unwrap()).unwrap();
                if lhs != rhs {
                    problems.push(format!("Z/{m} -> {f}: projection not multiplicative"));
                }
                let pb = project_matrix(&b, f).unwrap();
                for i in s.indices() {
                    if row_length(&b, i).value() % f.modulus() != row_length(&pb, i).value() {
                        problems.push(format!("Z/{m} -> {f}: row length {i} does not commute"));
                    }
                }
            }
        }
    }
    problems.truncate(3);
    Outcome {
        pass: problems.is_empty(),
        detail: format!("20000 words ({members} members, {outsiders} non-members), {} problems{}", problems.len(), first(&problems)),
    }
}

/// Set-level oracle for ideals of `Z/m`.
fn criterion_9() -> Outcome {
    fn span(m: u64, gens: &BTreeSet<u64>) -> BTreeSet<u64> {
        let mut set: BTreeSet<u64> = [0].into();
        loop {
            let next: BTreeSet<u64> = set
                .iter()
                .flat_map(|&a| gens.iter().map(move |&g| (a + g) % m))
                .chain(set.iter().copied())
                .collect();
            if next == set {
                return set;
            }
            set = next;
        }
    }
    let mut bad = Vec::new();
    let mut pairs = 0usize;
    for m in 2u64..=64 {
        let r = zm(m);
        // one representative generator per distinct ideal, found by enumeration
        let mut seen = BTreeSet::new();
        let mut ideals: Vec<(Ideal, BTreeSet<u64>)> = Vec::new();
        for x in 0..m {
            let set = span(m, &[x].into());
            if seen.insert(set.clone()) {
                ideals.push((r.ideal_generated_by(x), set));
            }
        }
        let as_set = |a: Ideal| -> BTreeSet<u64> { (0..m).filter(|&x| a.contains_value(x)).collect() };
        for (a, sa) in &ideals {
            for (b, sb) in &ideals {
                pairs += 1;
                let sum: BTreeSet<u64> = sa.iter().flat_map(|x| sb.iter().map(move |y| (x + y) % m)).collect();
                let prod = span(m, &sa.iter().flat_map(|x| sb.iter().map(move |y| x * y % m)).collect());
                let sq = span(m, &sa.iter().flat_map(|x| sb.iter().map(move |y| x * x % m * y % m)).collect());
                if as_set(a.sum(*b).unwrap()) != sum {
                    bad.push(format!("sum {a} {b}"));
                }
                if as_set(a.product(*b).unwrap()) != prod {
                    bad.push(format!("product {a} {b}"));
                }
                if as_set(a.square_scale_product(*b).unwrap()) != sq {
                    bad.push(format!("square scale {a} {b}"));
                }
                if a.le(*b) != sa.is_subset(sb) {
                    bad.push(format!("containment {a} {b}"));
                }
            }
            for x in 0..m {
                if a.contains(r.elem(x as i64)).unwrap() != sa.contains(&x) {
                    bad.push(format!("membership {x} in {a}"));
                }
            }
        }
    }
    Outcome { pass: bad.is_empty(), detail: format!("{pairs} ideal pairs for m <= 64, {} failures{}", bad.len(), first(&bad)) }
}

fn first(items: &[String]) -> String {
    items.first().map(|x| format!(", first: {x}")).unwrap_or_default()
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("Steinberg relations", criterion_1),
        ("row length identity", criterion_2),
        ("group closure", criterion_3),
        ("transporter theorem", criterion_4),
        ("sandwich", criterion_5),
        ("extraction round trip", criterion_6),
        ("Jacobson corollary", criterion_7),
        ("CRT patching", criterion_8),
        ("ideal oracle floor", criterion_9),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let verdict = if out.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!out.pass);
        println!(
            "criterion {} [{verdict}] {name} ({:.1}s): {}",
            k + 1,
            start.elapsed().as_secs_f64(),
            out.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
