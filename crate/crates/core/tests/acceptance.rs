//! Acceptance criteria, one report line each. Runs without the libtest
//! harness so the lines always reach the test log.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use ordgram::components::compute_components;
use ordgram::grammar::FormSet;
use ordgram::langops::{
    avoidance_threshold, eventually_avoids, left_quot_set, quot_geq_set, quot_less_set,
};
use ordgram::normalize::{check_shape, to_normal_form, Normalized};
use ordgram::oracle::{block_lengths, rank_check, ENUMERATION_BUDGET};
use ordgram::ordinal::Ordinal;
use ordgram::solver::{analyze, order_type_of_form, Limits};
use ordgram::{Grammar, Letter, SForm, Symbol, Word};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn corpus() -> Vec<(String, Grammar)> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "cfg"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let g = Grammar::parse(&std::fs::read_to_string(&p).unwrap()).unwrap();
            (p.file_name().unwrap().to_string_lossy().into_owned(), g)
        })
        .collect()
}

fn ordgram(args: &[&str]) -> (i32, String, String, Duration) {
    let t = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_ordgram"))
        .args(args)
        .current_dir(corpus_dir())
        .output()
        .expect("run ordgram");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).trim().to_string(),
        String::from_utf8_lossy(&out.stderr).trim().to_string(),
        t.elapsed(),
    )
}

fn start_form(g: &Grammar) -> SForm {
    SForm(vec![Symbol::N(g.start())])
}

fn enumerate(g: &Grammar, forms: &FormSet, k: usize) -> Vec<Word> {
    g.lex_enumerate(forms.iter(), k, ENUMERATION_BUDGET)
        .unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn w(n: u64) -> Ordinal {
    Ordinal::from(n)
}

fn omega_poly(coeffs: &[u64]) -> Ordinal {
    // coeffs[0]·ω^(k-1) + … + coeffs[k-1]
    let k = coeffs.len();
    let mut acc = Ordinal::zero();
    for (i, &c) in coeffs.iter().enumerate() {
        let term = Ordinal::omega()
            .pow_nat((k - 1 - i) as u64)
            .unwrap()
            .mul(&w(c))
            .unwrap();
        acc = acc.add(&term).unwrap();
    }
    acc
}

fn golden() -> Check {
    let cases = [
        ("omega.cfg", "w"),
        ("omega_plus_one.cfg", "w + 1"),
        ("w2a.cfg", "w^2"),
        ("w3.cfg", "w^3"),
        ("w_w.cfg", "w^(w)"),
        ("w_w_plus_1.cfg", "w^(w + 1)"),
        ("case2.cfg", "w"),
    ];
    let mut slowest = Duration::ZERO;
    for (file, expect) in cases {
        let (code, out, err, took) = ordgram(&["order-type", file]);
        ensure(code == 0 && out == expect, || {
            format!("{file}: got `{out}` exit {code} {err}")
        })?;
        ensure(took < Duration::from_secs(1), || {
            format!("{file}: took {took:?}")
        })?;
        slowest = slowest.max(took);
    }
    // rank oracles on block structure
    let load =
        |f: &str| Grammar::parse(&std::fs::read_to_string(corpus_dir().join(f)).unwrap()).unwrap();
    let w2 = load("w2a.cfg");
    let b = w2.alphabet().letter('b').unwrap();
    let blocks = move |x: &[Letter]| omega_poly(&block_lengths(x, b));
    ensure(
        rank_check(
            &w2,
            &Ordinal::parse_text("w^2").unwrap(),
            blocks,
            12,
            ENUMERATION_BUDGET,
        )
        .unwrap(),
        || "rank oracle rejects w^2".into(),
    )?;
    let w3 = load("w3.cfg");
    ensure(
        rank_check(
            &w3,
            &Ordinal::parse_text("w^3").unwrap(),
            blocks,
            12,
            ENUMERATION_BUDGET,
        )
        .unwrap(),
        || "rank oracle rejects w^3".into(),
    )?;
    let wp1 = load("omega_plus_one.cfg");
    let c = wp1.alphabet().letter('c').unwrap();
    let rank = |x: &[Letter]| {
        if x == [c] {
            Ordinal::omega()
        } else {
            w(x.len() as u64)
        }
    };
    ensure(
        rank_check(
            &wp1,
            &Ordinal::parse_text("w + 1").unwrap(),
            rank,
            12,
            ENUMERATION_BUDGET,
        )
        .unwrap(),
        || "rank oracle rejects w + 1".into(),
    )?;
    Ok(format!("7 grammars, slowest {slowest:?}"))
}

fn iso() -> Check {
    let (c1, _, e1, t1) = ordgram(&["iso", "w2a.cfg", "w2b.cfg"]);
    ensure(c1 == 0, || format!("w2a vs w2b exit {c1} {e1}"))?;
    let (c2, _, e2, t2) = ordgram(&["iso", "w2a.cfg", "w3.cfg"]);
    ensure(c2 == 1, || format!("w2a vs w3 exit {c2} {e2}"))?;
    ensure(t1.max(t2) < Duration::from_secs(1), || "too slow".into())?;
    Ok("exit 0 and 1".into())
}

fn random_ordinal(rng: &mut StdRng, depth: u32) -> Ordinal {
    let n = rng.gen_range(0..=3usize);
    let mut exps: Vec<Ordinal> = (0..n)
        .map(|_| {
            if depth == 0 {
                w(rng.gen_range(0..=4))
            } else {
                random_ordinal(rng, depth - 1)
            }
        })
        .collect();
    exps.sort();
    exps.dedup();
    exps.reverse();
    Ordinal::from_terms(
        exps.into_iter()
            .map(|e| (e, rng.gen_range(1..=9)))
            .collect(),
    )
    .unwrap()
}

fn ordinal_properties() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let start = Instant::now();
    let trials = 10_000;
    for i in 0..trials {
        let (a, b, c) = (
            random_ordinal(&mut rng, 2),
            random_ordinal(&mut rng, 2),
            random_ordinal(&mut rng, 2),
        );
        let fail = |what: &str| format!("trial {i}: {what} fails for a={a}, b={b}, c={c}");
        let add = |x: &Ordinal, y: &Ordinal| x.add(y).unwrap();
        let mul = |x: &Ordinal, y: &Ordinal| x.mul(y).unwrap();
        ensure(add(&add(&a, &b), &c) == add(&a, &add(&b, &c)), || {
            fail("additive associativity")
        })?;
        ensure(mul(&mul(&a, &b), &c) == mul(&a, &mul(&b, &c)), || {
            fail("multiplicative associativity")
        })?;
        ensure(
            mul(&a, &add(&b, &c)) == add(&mul(&a, &b), &mul(&a, &c)),
            || fail("left distributivity"),
        )?;
        if !a.is_zero() && !b.is_zero() {
            let (da, db) = (a.degree().unwrap(), b.degree().unwrap());
            ensure(
                add(&a, &b).degree().unwrap() == da.clone().max(db.clone()),
                || fail("degree of sum"),
            )?;
            ensure(mul(&a, &b).degree().unwrap() == add(&da, &db), || {
                fail("degree of product")
            })?;
            if da < db && b.terms().len() == 1 {
                ensure(add(&a, &b) == b, || fail("absorption"))?;
            }
        }
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(10), || format!("took {took:?}"))?;
    Ok(format!("{trials} triples, 0 failures, {took:?}"))
}

fn normalization() -> Check {
    let start = Instant::now();
    let mut n = 0;
    for (name, g) in corpus() {
        let norm = to_normal_form(&g, Limits::default().substitution_budget)
            .map_err(|e| format!("{name}: {e}"))?;
        let before = enumerate(&g, &FormSet::from([start_form(&g)]), 12);
        let h = norm.to_grammar(&g);
        let after = enumerate(&h, &FormSet::from([start_form(&h)]), 12);
        ensure(before == after, || format!("{name}: enumeration changed"))?;
        if let Normalized::Grammar(ng) = &norm {
            let t = compute_components(ng).map_err(|e| format!("{name}: {e}"))?;
            ensure(check_shape(ng, &t).is_empty(), || {
                format!("{name}: shape violations")
            })?;
            for (x, body) in ng.productions() {
                ensure(matches!(body.first(), Some(Symbol::T(_))), || {
                    format!(
                        "{name}: {} does not start with a terminal",
                        ng.render_production(x, body)
                    )
                })?;
            }
            for x in ng.nonterminals() {
                ensure(x == ng.start() || t.is_recursive(x), || {
                    format!("{name}: {} is nonrecursive", ng.name(x))
                })?;
            }
        }
        n += 1;
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(10), || format!("took {took:?}"))?;
    Ok(format!("{n} grammars, {took:?}"))
}

fn random_word(rng: &mut StdRng, letters: usize) -> Word {
    let len = rng.gen_range(0..=4);
    (0..len)
        .map(|_| Letter(rng.gen_range(0..letters) as u8))
        .collect()
}

fn quotients() -> Check {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(7);
    let k = 10;
    let mut checks = 0;
    for (name, g) in corpus() {
        let g = match to_normal_form(&g, Limits::default().substitution_budget).unwrap() {
            Normalized::Grammar(ng) => ng,
            other => other.to_grammar(&g),
        };
        let forms: FormSet = g.alternatives(g.start()).iter().cloned().collect();
        let all = enumerate(&g, &forms, k);
        let all_long = enumerate(&g, &forms, k + 4);
        for _ in 0..20 {
            let x = random_word(&mut rng, g.alphabet().len());
            let shown = g.alphabet().render(&x);
            let less: Vec<Word> = all.iter().filter(|y| **y < x).cloned().collect();
            ensure(
                enumerate(&g, &quot_less_set(&g, &forms, &x), k) == less,
                || format!("{name}: quot_less at `{shown}`"),
            )?;
            let geq: Vec<Word> = all.iter().filter(|y| **y >= x).cloned().collect();
            ensure(
                enumerate(&g, &quot_geq_set(&g, &forms, &x), k) == geq,
                || format!("{name}: quot_geq at `{shown}`"),
            )?;
            let rest: Vec<Word> = all_long
                .iter()
                .filter(|y| y.starts_with(&x) && y.len() - x.len() <= k)
                .map(|y| y[x.len()..].to_vec())
                .collect();
            ensure(
                enumerate(&g, &left_quot_set(&g, &forms, &x), k) == rest,
                || format!("{name}: left_quot at `{shown}`"),
            )?;
            checks += 3;
        }
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(30), || format!("took {took:?}"))?;
    Ok(format!("{checks} identities, {took:?}"))
}

/// Whether some enumerated word of `L(form)` starts with `u·v^n`.
fn meets(g: &Grammar, form: &SForm, u: &[Letter], v: &[Letter], n: usize, max_len: usize) -> bool {
    let mut p = u.to_vec();
    for _ in 0..n {
        p.extend_from_slice(v);
    }
    enumerate(g, &FormSet::from([form.clone()]), max_len)
        .iter()
        .any(|x| x.starts_with(&p))
}

fn transducer() -> Check {
    let start = Instant::now();
    let g = Grammar::parse("order: a < b\nstart: X\nX -> a X | b").unwrap();
    let word = |s: &str| g.alphabet().word(s).unwrap();
    let x = start_form(&g);
    let aab = g.parse_form("a a b").unwrap();
    let cases = [
        ("", "a", &x, false),
        ("", "a", &aab, true),
        ("b", "a", &x, true),
    ];
    for (u, v, form, expect) in cases {
        let (u, v) = (word(u), word(v));
        let got = eventually_avoids(&g, &u, &v, form);
        ensure(got == expect, || format!("u={u:?} v={v:?}: got {got}"))?;
        match avoidance_threshold(&g, &u, &v, form) {
            Some(n) => {
                for m in n..=n + 3 {
                    let bound = u.len() + v.len() * m + 2;
                    ensure(!meets(&g, form, &u, &v, m, bound), || {
                        format!("not avoided at N={m}")
                    })?;
                }
                ensure(n == 0 || meets(&g, form, &u, &v, n - 1, 16), || {
                    format!("threshold {n} not least")
                })?;
            }
            None => {
                for m in 0..=8 {
                    ensure(meets(&g, form, &u, &v, m, 12), || {
                        format!("no word at N={m}")
                    })?;
                }
            }
        }
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(5), || format!("took {took:?}"))?;
    Ok(format!(
        "3 decisions, thresholds verified through N+3, {took:?}"
    ))
}

fn monotonicity() -> Check {
    let mut pairs = 0;
    let mut productions = 0;
    let mut components = 0;
    for (name, g) in corpus() {
        let a = analyze(&g, Limits::default()).map_err(|e| format!("{name}: {e}"))?;
        let Some(s) = a.solved else { continue };
        let (ng, t, types) = (&s.grammar, &s.components, &s.types);
        let o = |x| types.get(Symbol::N(x)).unwrap();
        for x in ng.nonterminals() {
            for y in ng.nonterminals() {
                if !t.preceq(Symbol::N(y), Symbol::N(x)) {
                    continue;
                }
                pairs += 1;
                ensure(o(y) <= o(x), || {
                    format!("{name}: o({}) > o({})", ng.name(y), ng.name(x))
                })?;
                if t.same_component(Symbol::N(x), Symbol::N(y)) {
                    ensure(o(y) == o(x), || format!("{name}: component members differ"))?;
                }
            }
        }
        for (x, body) in ng.productions() {
            productions += 1;
            let ob = order_type_of_form(types, body).unwrap();
            ensure(ob <= o(x), || {
                format!("{name}: {} exceeds its head", ng.render_production(x, body))
            })?;
        }
        for c in 0..t.num_components() {
            if let Some(sol) = types.component(c) {
                components += 1;
                ensure(sol.routes_agree, || {
                    format!("{name}: case-1 conditions disagree")
                })?;
            }
        }
    }
    Ok(format!(
        "{pairs} pairs, {productions} productions, {components} components with agreeing case-1 tests"
    ))
}

fn structural_bound() -> Check {
    let mut seen = BTreeSet::new();
    for (name, g) in corpus() {
        let o = analyze(&g, Limits::default())
            .map_err(|e| format!("{name}: {e}"))?
            .order_type;
        ensure(o.below_omega_omega_omega(), || format!("{name}: {o}"))?;
        seen.insert(o.to_text());
    }
    let outside = Ordinal::parse_text("w^(w^(w))").unwrap();
    ensure(!outside.below_omega_omega_omega(), || {
        "bound check accepts w^(w^(w))".into()
    })?;
    Ok(format!("{} distinct order types", seen.len()))
}

fn diagnostics() -> Check {
    for (file, class) in [
        ("invalid/left_recursive.cfg", "LeftRecursionDetected"),
        ("invalid/prefix_violation.cfg", "NotAnOrdinalGrammar"),
        ("invalid/malformed.cfg", "ParseError"),
    ] {
        let (code, out, err, _) = ordgram(&["order-type", file]);
        ensure(code == 2 && out.is_empty() && err.contains(class), || {
            format!("{file}: exit {code}, stderr `{err}`")
        })?;
    }
    Ok("exit 2 with error class".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("corpus golden outputs", golden),
        ("isomorphism exit codes", iso),
        ("ordinal kernel properties", ordinal_properties),
        ("normalization preservation", normalization),
        ("quotient soundness", quotients),
        ("transducer decisions", transducer),
        ("monotonicity sweep", monotonicity),
        ("structural bound", structural_bound),
        ("diagnostics", diagnostics),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
