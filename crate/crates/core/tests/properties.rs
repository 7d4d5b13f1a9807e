use std::cmp::Ordering;
use std::path::Path;

use ordgram::components::compute_components;
use ordgram::langops::sup;
use ordgram::normalize::{to_normal_form, Normalized};
use ordgram::oracle::ENUMERATION_BUDGET;
use ordgram::ordinal::Ordinal;
use ordgram::solver::{analyze, Limits};
use ordgram::words::{lex_cmp, primitive_root, strictly_below};
use ordgram::{Grammar, Letter, SForm, Symbol, UpWord, Word};
use proptest::prelude::*;

fn ordinal(depth: u32) -> BoxedStrategy<Ordinal> {
    let exp = if depth == 0 {
        (0u64..5).prop_map(Ordinal::from).boxed()
    } else {
        ordinal(depth - 1)
    };
    prop::collection::vec((exp, 1u64..10), 0..4)
        .prop_map(|mut terms| {
            terms.sort_by(|a, b| b.0.cmp(&a.0));
            terms.dedup_by(|a, b| a.0 == b.0);
            Ordinal::from_terms(terms).unwrap()
        })
        .boxed()
}

fn word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0u8..3).prop_map(Letter), 0..max)
}

proptest! {
    #[test]
    fn text_round_trip(a in ordinal(2)) {
        prop_assert_eq!(Ordinal::parse_text(&a.to_text()).unwrap(), a);
    }

    #[test]
    fn order_is_compatible_with_addition(a in ordinal(1), b in ordinal(1), c in ordinal(1)) {
        // b ≤ c implies a + b ≤ a + c and b + a ≤ c + a
        let (lo, hi) = if b <= c { (b, c) } else { (c, b) };
        prop_assert!(a.add(&lo).unwrap() <= a.add(&hi).unwrap());
        prop_assert!(lo.add(&a).unwrap() <= hi.add(&a).unwrap());
    }

    #[test]
    fn omega_power_closure(a in ordinal(1)) {
        let p = a.pow_omega().unwrap();
        if a.as_finite().is_none_or(|n| n >= 2) {
            prop_assert!(p.is_omega_power());
            // ω-powers absorb smaller summands from the left
            if !a.is_zero() {
                prop_assert_eq!(a.add(&p).unwrap(), p.clone());
            }
        }
        prop_assert!(a <= p);
    }

    #[test]
    fn lex_order_matches_long_prefixes(
        p in word(4), v in word(3), q in word(4), r in word(3)
    ) {
        let x = UpWord::periodic(p, v);
        let y = UpWord::periodic(q, r);
        let (a, b) = (x.finite_prefix(64), y.finite_prefix(64));
        let expect = if x.is_finite() && y.is_finite() {
            a.cmp(&b)
        } else if a == b {
            Ordering::Equal
        } else {
            match a.iter().zip(&b).find(|(s, t)| s != t) {
                Some((s, t)) => s.cmp(t),
                None => a.len().cmp(&b.len()),
            }
        };
        prop_assert_eq!(lex_cmp(&x, &y), expect);
        prop_assert_eq!(lex_cmp(&y, &x), expect.reverse());
    }

    #[test]
    fn canonical_form_is_unique(p in word(4), v in word(3).prop_filter("nonempty", |v| !v.is_empty())) {
        let mut longer = p.clone();
        longer.extend_from_slice(&v);
        let mut doubled = v.clone();
        doubled.extend_from_slice(&v);
        prop_assert_eq!(UpWord::periodic(p.clone(), v.clone()), UpWord::periodic(longer, v.clone()));
        prop_assert_eq!(UpWord::periodic(p.clone(), v), UpWord::periodic(p, doubled));
    }

    #[test]
    fn primitive_roots(w in word(8).prop_filter("nonempty", |w| !w.is_empty())) {
        let r = primitive_root(&w).unwrap();
        prop_assert_eq!(w.len() % r.len(), 0);
        prop_assert_eq!(r.repeat(w.len() / r.len()), w.clone());
        prop_assert_eq!(primitive_root(&r).unwrap(), r);
    }

    #[test]
    fn strict_order_excludes_prefixes(a in word(6), p in word(3), v in word(3).prop_filter("nonempty", |v| !v.is_empty())) {
        let y = UpWord::periodic(p, v);
        if strictly_below(&a, &y) {
            prop_assert!(lex_cmp(&UpWord::finite(a.clone()), &y) == Ordering::Less);
            prop_assert!(a != y.finite_prefix(a.len()));
        }
    }
}

fn corpus() -> Vec<(String, Grammar)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let mut out: Vec<(String, Grammar)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "cfg"))
        .map(|p| {
            let g = Grammar::parse(&std::fs::read_to_string(&p).unwrap()).unwrap();
            (p.file_name().unwrap().to_string_lossy().into_owned(), g)
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

#[test]
fn sup_dominates_enumeration() {
    for (name, g) in corpus() {
        let Normalized::Grammar(ng) = to_normal_form(&g, 100_000).unwrap() else {
            continue;
        };
        let t = compute_components(&ng).unwrap();
        for x in ng.nonterminals() {
            let form = SForm(vec![Symbol::N(x)]);
            let s = sup(&ng, &t, &form).unwrap();
            let words = ng.lex_enumerate([&form], 12, ENUMERATION_BUDGET).unwrap();
            for w in &words {
                assert!(
                    UpWord::finite(w.clone()) <= s.value,
                    "{name}: word above sup of {}",
                    ng.name(x)
                );
            }
            if s.attained {
                let v = s.value.as_finite().unwrap().to_vec();
                assert!(
                    v.len() > 12 || words.contains(&v),
                    "{name}: attained sup missing"
                );
            }
        }
    }
}

#[test]
fn renormalizing_is_stable() {
    for (name, g) in corpus() {
        let once = to_normal_form(&g, 100_000).unwrap().to_grammar(&g);
        let twice = to_normal_form(&once, 100_000).unwrap().to_grammar(&once);
        assert_eq!(once, twice, "{name}");
        let limits = Limits::default();
        assert_eq!(
            analyze(&g, limits).unwrap().order_type,
            analyze(&twice, limits).unwrap().order_type,
            "{name}"
        );
    }
}
