//! Rewriting an ordinal grammar into the normal form the solver works on:
//! every nonterminal usable and infinite, every production starting with a
//! terminal, and every nonterminal except the start symbol recursive.

use std::collections::BTreeSet;

use crate::components::{
    component_structure, shape_error, ComponentTable, NONTERMINAL_BEFORE, TWO_COMPONENT_SYMBOLS,
};
use crate::error::{Error, Result};
use crate::grammar::{Grammar, Nt, SForm, Symbol};
use crate::ordinal::Ordinal;
use crate::words::Word;

/// Outcome of normalization. Empty and finite languages short-circuit the
/// pipeline since their order types are immediate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Normalized {
    Empty,
    Finite(BTreeSet<Word>),
    Grammar(Grammar),
}

impl Normalized {
    /// Order type when the language is empty or finite.
    pub fn early_order_type(&self) -> Option<Ordinal> {
        match self {
            Normalized::Empty => Some(Ordinal::zero()),
            Normalized::Finite(ws) => Some(Ordinal::from(ws.len() as u64)),
            Normalized::Grammar(_) => None,
        }
    }

    /// A grammar generating the same language, in every case.
    pub fn to_grammar(&self, original: &Grammar) -> Grammar {
        let start_name = original.name(original.start()).to_string();
        let alphabet = original.alphabet().clone();
        match self {
            Normalized::Grammar(g) => g.clone(),
            Normalized::Empty => Grammar::new(
                alphabet,
                vec![start_name],
                vec![vec![SForm(vec![Symbol::N(Nt(0))])]],
                Nt(0),
            ),
            Normalized::Finite(ws) => Grammar::new(
                alphabet,
                vec![start_name],
                vec![ws.iter().map(|w| SForm::terminals(w)).collect()],
                Nt(0),
            ),
        }
    }
}

/// Working copy with tombstoned nonterminals; ids stay stable until
/// [`Draft::finish`].
struct Draft {
    base: Grammar,
    rules: Vec<Vec<SForm>>,
    alive: Vec<bool>,
    budget: usize,
}

impl Draft {
    fn new(g: &Grammar, budget: usize) -> Self {
        Draft {
            base: g.clone(),
            rules: g.rules().to_vec(),
            alive: vec![true; g.num_nonterminals()],
            budget,
        }
    }

    fn snapshot(&self) -> Grammar {
        Grammar::new(
            self.base.alphabet().clone(),
            self.base.names().to_vec(),
            self.rules.clone(),
            self.base.start(),
        )
    }

    fn charge(&self) -> Result<()> {
        let total: usize = self.rules.iter().map(Vec::len).sum();
        if total > self.budget {
            return Err(Error::BudgetExceeded {
                what: "substitution",
                limit: self.budget,
            });
        }
        Ok(())
    }

    fn kill(&mut self, n: usize) {
        self.alive[n] = false;
        self.rules[n].clear();
    }

    /// Drops nonterminals that are unproductive or unreachable from the
    /// start symbol. Returns false if the start symbol itself is unproductive.
    fn remove_unusable(&mut self) -> bool {
        let prod = self.snapshot().productive();
        if !prod[self.base.start().index()] {
            return false;
        }
        for (n, alts) in self.rules.iter_mut().enumerate() {
            if !prod[n] {
                alts.clear();
            } else {
                alts.retain(|a| a.nonterminals().all(|m| prod[m.index()]));
            }
        }
        let reach = self.snapshot().reachable_from([self.base.start()]);
        for n in 0..self.rules.len() {
            if !(reach[n] && prod[n]) {
                self.kill(n);
            }
        }
        true
    }

    /// Compacts surviving nonterminals, keeping their relative order and
    /// names.
    fn finish(self) -> Grammar {
        let mut remap = vec![None; self.alive.len()];
        let mut names = Vec::new();
        for (i, &a) in self.alive.iter().enumerate() {
            if a {
                remap[i] = Some(Nt(names.len() as u32));
                names.push(self.base.names()[i].clone());
            }
        }
        let rules = self
            .rules
            .iter()
            .enumerate()
            .filter(|(i, _)| self.alive[*i])
            .map(|(_, alts)| {
                alts.iter()
                    .map(|a| {
                        SForm(
                            a.symbols()
                                .iter()
                                .map(|s| match s {
                                    Symbol::N(m) => Symbol::N(remap[m.index()].unwrap()),
                                    t => *t,
                                })
                                .collect(),
                        )
                    })
                    .collect()
            })
            .collect();
        let start = remap[self.base.start().index()].unwrap();
        Grammar::new(self.base.alphabet().clone(), names, rules, start)
    }
}

/// Replaces every occurrence of a nonterminal in `subst` by each of its
/// listed expansions, in all combinations.
fn expand(form: &SForm, subst: &dyn Fn(Nt) -> Option<Vec<SForm>>) -> Vec<SForm> {
    let mut acc = vec![Vec::new()];
    for &s in form.symbols() {
        let choices = match s {
            Symbol::N(m) => subst(m),
            Symbol::T(_) => None,
        };
        acc = match choices {
            None => acc
                .into_iter()
                .map(|mut v| {
                    v.push(s);
                    v
                })
                .collect(),
            Some(alts) => acc
                .iter()
                .flat_map(|v| {
                    alts.iter().map(move |a| {
                        let mut w = v.clone();
                        w.extend_from_slice(a.symbols());
                        w
                    })
                })
                .collect(),
        };
    }
    acc.into_iter().map(SForm).collect()
}

fn dedup(forms: Vec<SForm>) -> Vec<SForm> {
    let mut seen = BTreeSet::new();
    forms
        .into_iter()
        .filter(|f| seen.insert(f.clone()))
        .collect()
}

pub fn to_normal_form(g: &Grammar, substitution_budget: usize) -> Result<Normalized> {
    let mut d = Draft::new(g, substitution_budget);
    let start = g.start().index();

    // usable nonterminals only
    if !d.remove_unusable() {
        return Ok(Normalized::Empty);
    }

    // substitute finite languages; this also removes every ε-rule
    let snap = d.snapshot();
    let finite: Vec<Option<Vec<SForm>>> = snap
        .nonterminals()
        .map(|n| {
            (d.alive[n.index()] && snap.is_finite(n)).then(|| {
                snap.finite_words(n)
                    .unwrap()
                    .iter()
                    .map(|w| SForm::terminals(w))
                    .collect()
            })
        })
        .collect();
    if let Some(words) = &finite[start] {
        let words = words.iter().map(|f| f.as_word().unwrap()).collect();
        return Ok(Normalized::Finite(words));
    }
    for n in 0..d.rules.len() {
        if !d.alive[n] {
            continue;
        }
        if finite[n].is_some() {
            d.kill(n);
            continue;
        }
        let alts = std::mem::take(&mut d.rules[n]);
        let mut out = Vec::new();
        for a in &alts {
            out.extend(expand(a, &|m| finite[m.index()].clone()));
            if out.len() > d.budget {
                return Err(Error::BudgetExceeded {
                    what: "substitution",
                    limit: d.budget,
                });
            }
        }
        d.rules[n] = dedup(out);
    }
    for n in 0..d.rules.len() {
        if d.alive[n] && d.rules[n].iter().any(SForm::is_empty) {
            return Err(Error::NotAnOrdinalGrammar(format!(
                "L({}) contains the empty word and is infinite, so it is not prefix-free",
                g.name(Nt(n as u32))
            )));
        }
    }

    // chain rules
    let unit = |alt: &SForm| match alt.symbols() {
        [Symbol::N(m)] => Some(m.index()),
        _ => None,
    };
    let mut new_rules = d.rules.clone();
    for (n, slot) in new_rules.iter_mut().enumerate() {
        if !d.alive[n] {
            continue;
        }
        let mut order = vec![n];
        let mut i = 0;
        while i < order.len() {
            for alt in &d.rules[order[i]] {
                if let Some(m) = unit(alt) {
                    if !order.contains(&m) {
                        order.push(m);
                    }
                }
            }
            i += 1;
        }
        *slot = dedup(
            order
                .iter()
                .flat_map(|&m| d.rules[m].iter().filter(|a| unit(a).is_none()).cloned())
                .collect(),
        );
    }
    d.rules = new_rules;
    d.charge()?;
    d.remove_unusable();

    // left-corner substitution, leading nonterminals processed first
    let leading = |alt: &SForm| alt.first().and_then(Symbol::as_nonterminal).map(Nt::index);
    let n_all = d.rules.len();
    let mut state = vec![0u8; n_all]; // 0 new, 1 on stack, 2 done
    let mut order = Vec::new();
    fn visit(
        n: usize,
        rules: &[Vec<SForm>],
        leading: &dyn Fn(&SForm) -> Option<usize>,
        state: &mut [u8],
        order: &mut Vec<usize>,
        names: &[String],
    ) -> Result<()> {
        match state[n] {
            2 => return Ok(()),
            1 => return Err(Error::LeftRecursion(names[n].clone())),
            _ => {}
        }
        state[n] = 1;
        for alt in &rules[n] {
            if let Some(m) = leading(alt) {
                visit(m, rules, leading, state, order, names)?;
            }
        }
        state[n] = 2;
        order.push(n);
        Ok(())
    }
    for n in 0..n_all {
        if d.alive[n] {
            visit(n, &d.rules, &leading, &mut state, &mut order, g.names())?;
        }
    }
    for &n in &order {
        let alts = std::mem::take(&mut d.rules[n]);
        let mut out = Vec::new();
        for a in alts {
            match leading(&a) {
                Some(m) => {
                    let tail = a.tail();
                    out.extend(d.rules[m].iter().map(|b| b.concat(&tail)));
                }
                None => out.push(a),
            }
        }
        d.rules[n] = dedup(out);
        d.charge()?;
    }

    // eliminate nonrecursive nonterminals other than the start symbol,
    // lowest height first
    let snap = d.snapshot();
    let mut edges: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n_all];
    for (x, alt) in snap.productions() {
        for m in alt.nonterminals() {
            edges[x.index()].push((m.index(), true));
        }
    }
    let comp = crate::grammar::scc_ids(&edges);
    let recursive: Vec<bool> = (0..n_all)
        .map(|x| {
            edges[x].iter().any(|&(m, _)| m == x)
                || (0..n_all).any(|y| y != x && comp[y] == comp[x])
        })
        .collect();
    let mut heights = vec![None; n_all];
    fn height(
        x: usize,
        edges: &[Vec<(usize, bool)>],
        comp: &[usize],
        h: &mut [Option<usize>],
    ) -> usize {
        if let Some(v) = h[x] {
            return v;
        }
        h[x] = Some(0); // cycle guard; members of a cycle share a component
        let mut best = 0;
        for &(m, _) in &edges[x] {
            if comp[m] != comp[x] {
                best = best.max(height(m, edges, comp, h));
            }
        }
        h[x] = Some(best + 1);
        best + 1
    }
    let mut victims: Vec<usize> = (0..n_all)
        .filter(|&x| d.alive[x] && x != start && !recursive[x])
        .collect();
    victims.sort_by_key(|&x| (height(x, &edges, &comp, &mut heights), x));
    for x in victims {
        let alts = std::mem::take(&mut d.rules[x]);
        for n in 0..n_all {
            if n == x || !d.alive[n] {
                continue;
            }
            if d.rules[n]
                .iter()
                .any(|a| a.nonterminals().any(|m| m.index() == x))
            {
                let mut out = Vec::new();
                for a in &d.rules[n] {
                    out.extend(expand(a, &|m| (m.index() == x).then(|| alts.clone())));
                }
                d.rules[n] = dedup(out);
                d.charge()?;
            }
        }
        d.kill(x);
    }

    let out = d.finish();
    let table = component_structure(&out);
    if let Some(v) = check_shape(&out, &table).into_iter().next() {
        return Err(v.into_error(&out));
    }
    Ok(Normalized::Grammar(out))
}

/// One production that breaks the normal-form shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeViolation {
    pub head: Nt,
    pub body: SForm,
    pub reason: &'static str,
}

impl ShapeViolation {
    pub fn into_error(self, g: &Grammar) -> Error {
        shape_error(g, self.head, &self.body, self.reason)
    }
}

/// Every production must be escaping, or contain exactly one symbol from the
/// head's component with only terminals in front of it.
pub fn check_shape(g: &Grammar, t: &ComponentTable) -> Vec<ShapeViolation> {
    let mut out = Vec::new();
    for (x, alt) in g.productions() {
        let hits: Vec<usize> = alt
            .symbols()
            .iter()
            .enumerate()
            .filter(|(_, &s)| t.same_component(s, Symbol::N(x)))
            .map(|(i, _)| i)
            .collect();
        let reason = match hits.as_slice() {
            [] => continue,
            [i] => {
                if alt.symbols()[..*i]
                    .iter()
                    .all(|s| s.as_terminal().is_some())
                {
                    continue;
                }
                NONTERMINAL_BEFORE
            }
            _ => TWO_COMPONENT_SYMBOLS,
        };
        out.push(ShapeViolation {
            head: x,
            body: alt.clone(),
            reason,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::components::compute_components;

    fn norm(text: &str) -> Result<Normalized> {
        to_normal_form(&Grammar::parse(text).unwrap(), 100_000)
    }

    fn grammar(text: &str) -> Grammar {
        match norm(text).unwrap() {
            Normalized::Grammar(g) => g,
            other => panic!("early result {other:?}"),
        }
    }

    #[test]
    fn normal_grammar_is_unchanged() {
        let g = Grammar::parse("order: b < a\nstart: X\nX -> a X | b").unwrap();
        assert_eq!(grammar(&g.to_text()), g);
    }

    #[test]
    fn finite_language_short_circuits() {
        let n = norm("order: a < b\nstart: S\nS -> X b\nX -> a | a a").unwrap();
        assert_eq!(n.early_order_type(), Some(Ordinal::from(2)));
        let g = Grammar::parse("order: a < b\nstart: S\nS -> a b").unwrap();
        let Normalized::Finite(ws) = n else { panic!() };
        let expect: BTreeSet<Word> = ["ab", "aab"]
            .iter()
            .map(|w| g.alphabet().word(w).unwrap())
            .collect();
        assert_eq!(ws, expect);
    }

    #[test]
    fn empty_and_epsilon_languages() {
        let n = norm("order: a\nstart: S\nS -> a S").unwrap();
        assert_eq!(n, Normalized::Empty);
        assert_eq!(n.early_order_type(), Some(Ordinal::zero()));
        let n = norm("order: a\nstart: S\nS -> X\nX -> _eps").unwrap();
        assert_eq!(n.early_order_type(), Some(Ordinal::one()));
    }

    #[test]
    fn left_recursion_is_detected() {
        assert_eq!(
            norm("order: a < b\nstart: X\nX -> X a | b"),
            Err(Error::LeftRecursion("X".into()))
        );
        assert!(matches!(
            norm("order: a < b\nstart: X\nX -> Y a | b\nY -> X b | a Y"),
            Err(Error::LeftRecursion(_))
        ));
    }

    #[test]
    fn nullable_infinite_nonterminal_is_rejected() {
        assert!(matches!(
            norm("order: a < b\nstart: X\nX -> a X | _eps"),
            Err(Error::NotAnOrdinalGrammar(_))
        ));
    }

    #[test]
    fn chain_rules_and_leading_nonterminals_are_removed() {
        let g = grammar("order: b < a\nstart: S\nS -> T\nT -> X b\nX -> a X | b");
        for (_, alt) in g.productions() {
            assert!(matches!(alt.first(), Some(Symbol::T(_))));
        }
        // S -> a X b | b b, X recursive
        assert_eq!(g.num_nonterminals(), 2);
        let s = g.start();
        assert_eq!(g.render_form(&g.alternatives(s)[0]), "a X b");
        assert_eq!(g.render_form(&g.alternatives(s)[1]), "b b");
    }

    #[test]
    fn nonrecursive_nonterminals_are_inlined() {
        let g = grammar("order: b < a < c\nstart: S\nS -> c Y\nY -> a X | b X\nX -> a X | b");
        assert_eq!(g.names(), &["S".to_string(), "X".to_string()]);
        let bodies: Vec<String> = g
            .alternatives(g.start())
            .iter()
            .map(|a| g.render_form(a))
            .collect();
        assert_eq!(bodies, vec!["c a X", "c b X"]);
    }

    #[test]
    fn finite_nonterminals_are_expanded_in_place() {
        let g = grammar("order: b < a < c\nstart: X\nX -> a X | F\nF -> b | c b");
        let bodies: Vec<String> = g
            .alternatives(g.start())
            .iter()
            .map(|a| g.render_form(a))
            .collect();
        assert_eq!(bodies, vec!["a X", "b", "c b"]);
    }

    #[test]
    fn shape_checks() {
        let ok = Grammar::parse("order: a < b\nstart: X\nX -> a X b | a").unwrap();
        let t = compute_components(&ok).unwrap();
        assert!(check_shape(&ok, &t).is_empty());

        let two = Grammar::parse("order: a < b\nstart: X\nX -> a X X | b").unwrap();
        let t = compute_components(&two).unwrap();
        let v = check_shape(&two, &t);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].reason, TWO_COMPONENT_SYMBOLS);
        assert!(matches!(
            norm(&two.to_text()),
            Err(Error::ShapeViolation { .. })
        ));

        let before =
            Grammar::parse("order: a < b < c\nstart: X\nX -> a Y X b | c\nY -> a Y | b").unwrap();
        let t = component_structure(&before);
        let v = check_shape(&before, &t);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].reason, NONTERMINAL_BEFORE);
    }

    #[test]
    fn idempotent() {
        let text = "order: b < a < c\nstart: S\nS -> T | c\nT -> a T Y | b\nY -> a Y | b";
        let once = grammar(text);
        let twice = grammar(&once.to_text());
        assert_eq!(once, twice);
    }
}
