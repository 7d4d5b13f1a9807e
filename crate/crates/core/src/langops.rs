//! Suprema of sentential-form languages, the restriction and quotient
//! operators on forms, and the eventual-avoidance decision built on a
//! sequential transducer image.

use std::collections::HashMap;

use crate::components::ComponentTable;
use crate::error::{Error, Result};
use crate::grammar::{FormSet, Grammar, Nt, SForm, Symbol};
use crate::words::{Alphabet, Letter, UpWord, Word};

/// Least upper bound of a language in the lexicographic order, and whether
/// the language contains it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupInfo {
    pub value: UpWord,
    pub attained: bool,
}

impl SupInfo {
    fn max(self, other: SupInfo) -> SupInfo {
        match self.value.cmp(&other.value) {
            std::cmp::Ordering::Less => other,
            std::cmp::Ordering::Greater => self,
            std::cmp::Ordering::Equal => SupInfo {
                attained: self.attained || other.attained,
                value: self.value,
            },
        }
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        format!(
            "{} ({})",
            self.value.render(alphabet),
            if self.attained {
                "attained"
            } else {
                "not attained"
            }
        )
    }
}

/// `⋁L(form)`. Recursive nonterminals contribute `u_X^ω`; a nonrecursive
/// nonterminal takes the maximum over its alternatives.
pub fn sup(g: &Grammar, t: &ComponentTable, form: &SForm) -> Result<SupInfo> {
    let prod = g.productive();
    if let Some(m) = form.nonterminals().find(|m| !prod[m.index()]) {
        return Err(Error::Unproductive(g.name(m).to_string()));
    }
    sup_form(g, t, form.symbols())
}

fn sup_form(g: &Grammar, t: &ComponentTable, symbols: &[Symbol]) -> Result<SupInfo> {
    let mut prefix = Vec::new();
    for &s in symbols {
        let head = sup_symbol(g, t, s)?;
        match head.value.as_finite() {
            Some(w) => prefix.extend_from_slice(w),
            None => {
                return Ok(SupInfo {
                    value: head.value.prepend(&prefix),
                    attained: false,
                })
            }
        }
        if !head.attained {
            // A finite supremum of a prefix-free language is always attained.
            return Err(Error::NotAnOrdinalGrammar(
                "finite supremum that is not a member".into(),
            ));
        }
    }
    Ok(SupInfo {
        value: UpWord::finite(prefix),
        attained: true,
    })
}

fn sup_symbol(g: &Grammar, t: &ComponentTable, s: Symbol) -> Result<SupInfo> {
    match s {
        Symbol::T(l) => Ok(SupInfo {
            value: UpWord::finite(vec![l]),
            attained: true,
        }),
        Symbol::N(n) if t.is_recursive(n) => {
            let u = t.u(n).ok_or_else(|| {
                Error::NotAnOrdinalGrammar(format!("no periodic word for `{}`", g.name(n)))
            })?;
            Ok(SupInfo {
                value: UpWord::periodic(Vec::new(), u.clone()),
                attained: false,
            })
        }
        Symbol::N(n) => {
            let mut best: Option<SupInfo> = None;
            for alt in g.alternatives(n) {
                let s = sup_form(g, t, alt.symbols())?;
                best = Some(match best {
                    None => s,
                    Some(b) => b.max(s),
                });
            }
            best.ok_or_else(|| Error::Unproductive(g.name(n).to_string()))
        }
    }
}

/// Maximum supremum over a nonempty set of forms.
pub fn sup_of_set<'a>(
    g: &Grammar,
    t: &ComponentTable,
    forms: impl IntoIterator<Item = &'a SForm>,
) -> Result<Option<SupInfo>> {
    let mut best: Option<SupInfo> = None;
    for f in forms {
        let s = sup(g, t, f)?;
        best = Some(match best {
            None => s,
            Some(b) => b.max(s),
        });
    }
    Ok(best)
}

/// Forms whose leading nonterminal has been replaced by each of its
/// alternatives; forms starting with a terminal (or empty) are kept.
pub fn expand_leading(g: &Grammar, form: &SForm) -> Vec<SForm> {
    match form.first() {
        Some(Symbol::N(x)) => {
            let tail = form.tail();
            g.alternatives(x).iter().map(|d| d.concat(&tail)).collect()
        }
        _ => vec![form.clone()],
    }
}

fn leading_letter(g: &Grammar, form: &SForm, depth: usize) -> Vec<(Option<Letter>, SForm)> {
    match form.first() {
        None => vec![(None, form.clone())],
        Some(Symbol::T(a)) => vec![(Some(a), form.clone())],
        Some(Symbol::N(_)) if depth < 64 => expand_leading(g, form)
            .iter()
            .flat_map(|f| leading_letter(g, f, depth + 1))
            .collect(),
        Some(Symbol::N(_)) => Vec::new(),
    }
}

/// `b⁻¹α`: forms generating `{x : b·x ∈ L(α)}`.
pub fn letter_quot(g: &Grammar, form: &SForm, b: Letter) -> FormSet {
    let mut out = FormSet::new();
    for (a, f) in leading_letter(g, form, 0) {
        if a != Some(b) {
            continue;
        }
        let rest = f.tail();
        match rest.first() {
            Some(Symbol::N(_)) => out.extend(expand_leading(g, &rest)),
            _ => {
                out.insert(rest);
            }
        }
    }
    out
}

/// Forms generating `L(form) ∩ {x : x < w}`.
pub fn quot_less(g: &Grammar, form: &SForm, w: &[Letter]) -> FormSet {
    let mut out = FormSet::new();
    let Some((&b, rest)) = w.split_first() else {
        return out;
    };
    for (a, f) in leading_letter(g, form, 0) {
        if a.is_none_or(|a| a < b) {
            out.insert(f);
        }
    }
    for gamma in letter_quot(g, form, b) {
        out.extend(
            quot_less(g, &gamma, rest)
                .into_iter()
                .map(|f| f.prepend(&[b])),
        );
    }
    out
}

/// Forms generating `L(form) ∩ {x : x ≥ w}`.
pub fn quot_geq(g: &Grammar, form: &SForm, w: &[Letter]) -> FormSet {
    let Some((&b, rest)) = w.split_first() else {
        return FormSet::from([form.clone()]);
    };
    let mut out = FormSet::new();
    for gamma in letter_quot(g, form, b) {
        out.extend(
            quot_geq(g, &gamma, rest)
                .into_iter()
                .map(|f| f.prepend(&[b])),
        );
    }
    if let Some(c) = g.alphabet().successor(b) {
        for (a, f) in leading_letter(g, form, 0) {
            if a.is_some_and(|a| a >= c) {
                out.insert(f);
            }
        }
    }
    out
}

/// `u⁻¹α`: forms generating `{x : u·x ∈ L(α)}`.
pub fn left_quot(g: &Grammar, form: &SForm, u: &[Letter]) -> FormSet {
    let Some((&a, rest)) = u.split_first() else {
        return FormSet::from([form.clone()]);
    };
    letter_quot(g, form, a)
        .iter()
        .flat_map(|gamma| left_quot(g, gamma, rest))
        .collect()
}

pub fn quot_less_set<'a>(
    g: &Grammar,
    forms: impl IntoIterator<Item = &'a SForm>,
    w: &[Letter],
) -> FormSet {
    forms.into_iter().flat_map(|f| quot_less(g, f, w)).collect()
}

pub fn quot_geq_set<'a>(
    g: &Grammar,
    forms: impl IntoIterator<Item = &'a SForm>,
    w: &[Letter],
) -> FormSet {
    forms.into_iter().flat_map(|f| quot_geq(g, f, w)).collect()
}

pub fn left_quot_set<'a>(
    g: &Grammar,
    forms: impl IntoIterator<Item = &'a SForm>,
    u: &[Letter],
) -> FormSet {
    forms.into_iter().flat_map(|f| left_quot(g, f, u)).collect()
}

/// A deterministic, complete sequential transducer whose only output letter
/// is a mark: each transition emits either nothing or one mark.
#[derive(Debug, Clone)]
pub struct Transducer {
    start: usize,
    /// `delta[state][letter] = (next, emits)`
    delta: Vec<Vec<(usize, bool)>>,
    accepting: Vec<bool>,
}

impl Transducer {
    /// Maps `x` to one mark for having read `u` (when `u` is nonempty) plus
    /// one mark per complete copy of `v` read right after it; reading stops
    /// counting at the first mismatch.
    pub fn prefix_counter(alphabet: &Alphabet, u: &[Letter], v: &[Letter]) -> Self {
        assert!(!v.is_empty());
        // states: 0..|u| reading u, |u|..|u|+|v| reading v, then the sink
        let nu = u.len();
        let sink = nu + v.len();
        let mut delta = vec![vec![(sink, false); alphabet.len()]; sink + 1];
        for (i, &l) in u.iter().enumerate() {
            let done = i + 1 == nu;
            delta[i][l.0 as usize] = (i + 1, done);
        }
        for (j, &l) in v.iter().enumerate() {
            let done = j + 1 == v.len();
            delta[nu + j][l.0 as usize] = (if done { nu } else { nu + j + 1 }, done);
        }
        Transducer {
            start: 0,
            accepting: vec![true; sink + 1],
            delta,
        }
    }

    /// Recognizes the words that are not strictly below `u^ω`: proper and
    /// improper prefixes of it, and words exceeding it at the first
    /// difference. Emits nothing.
    pub fn not_strictly_below(alphabet: &Alphabet, u: &[Letter]) -> Self {
        assert!(!u.is_empty());
        let (less, greater) = (u.len(), u.len() + 1);
        let mut delta = vec![vec![(less, false); alphabet.len()]; u.len() + 2];
        for (j, &expect) in u.iter().enumerate() {
            for l in alphabet.letters() {
                let next = if l == expect {
                    (j + 1) % u.len()
                } else if l < expect {
                    less
                } else {
                    greater
                };
                delta[j][l.0 as usize] = (next, false);
            }
        }
        delta[greater] = vec![(greater, false); alphabet.len()];
        let mut accepting = vec![true; u.len() + 2];
        accepting[less] = false;
        Transducer {
            start: 0,
            delta,
            accepting,
        }
    }

    fn num_states(&self) -> usize {
        self.delta.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum ImageKey {
    Root,
    /// `(p, A, q)`: words of `L(A)` driving the transducer from `p` to `q`.
    Triple(usize, Nt, usize),
    /// First `i` symbols of production `k` driving `p` to `q`.
    Partial(usize, usize, usize, usize),
}

/// Grammar over the single letter `m` generating the transducer image of
/// `L(form)`, restricted to runs ending in an accepting state. The start
/// symbol is named `Root`.
pub fn image_grammar(g: &Grammar, form: &SForm, tr: &Transducer) -> Grammar {
    let prods: Vec<(Option<Nt>, &SForm)> = std::iter::once((None, form))
        .chain(g.productions().map(|(n, a)| (Some(n), a)))
        .collect();
    let mut by_head: HashMap<Nt, Vec<usize>> = HashMap::new();
    for (k, (h, _)) in prods.iter().enumerate() {
        if let Some(h) = h {
            by_head.entry(*h).or_default().push(k);
        }
    }
    let mark = Letter(0);
    let mut ids: HashMap<ImageKey, usize> = HashMap::new();
    let mut keys: Vec<ImageKey> = Vec::new();
    let mut rules: Vec<Vec<SForm>> = Vec::new();
    let mut intern = |key: ImageKey, keys: &mut Vec<ImageKey>, rules: &mut Vec<Vec<SForm>>| {
        *ids.entry(key).or_insert_with(|| {
            keys.push(key);
            rules.push(Vec::new());
            keys.len() - 1
        })
    };
    let nq = tr.num_states();
    intern(ImageKey::Root, &mut keys, &mut rules);
    let mut next = 0;
    while next < keys.len() {
        let key = keys[next];
        let mut alts = Vec::new();
        match key {
            ImageKey::Root => {
                for q in (0..nq).filter(|&q| tr.accepting[q]) {
                    let id = intern(
                        ImageKey::Partial(tr.start, 0, form.len(), q),
                        &mut keys,
                        &mut rules,
                    );
                    alts.push(SForm(vec![Symbol::N(Nt(id as u32))]));
                }
            }
            ImageKey::Triple(p, a, q) => {
                for &k in by_head.get(&a).map(Vec::as_slice).unwrap_or(&[]) {
                    let id = intern(
                        ImageKey::Partial(p, k, prods[k].1.len(), q),
                        &mut keys,
                        &mut rules,
                    );
                    alts.push(SForm(vec![Symbol::N(Nt(id as u32))]));
                }
            }
            ImageKey::Partial(p, _, 0, q) => {
                if p == q {
                    alts.push(SForm::empty());
                }
            }
            ImageKey::Partial(p, k, i, q) => {
                let sym = prods[k].1.symbols()[i - 1];
                for r in 0..nq {
                    let last = match sym {
                        Symbol::T(l) => {
                            let (to, emits) = tr.delta[r][l.0 as usize];
                            if to != q {
                                continue;
                            }
                            if emits {
                                vec![Symbol::T(mark)]
                            } else {
                                vec![]
                            }
                        }
                        Symbol::N(b) => {
                            let id = intern(ImageKey::Triple(r, b, q), &mut keys, &mut rules);
                            vec![Symbol::N(Nt(id as u32))]
                        }
                    };
                    let id = intern(ImageKey::Partial(p, k, i - 1, r), &mut keys, &mut rules);
                    let mut body = vec![Symbol::N(Nt(id as u32))];
                    body.extend(last);
                    alts.push(SForm(body));
                }
            }
        }
        rules[next] = alts;
        next += 1;
    }
    let names = keys
        .iter()
        .enumerate()
        .map(|(i, k)| match k {
            ImageKey::Root => "Root".to_string(),
            _ => format!("I{i}"),
        })
        .collect();
    let alphabet = Alphabet::new(vec!['m']).expect("one letter");
    Grammar::new(alphabet, names, rules, Nt(0))
}

/// Least `N` with `u·v^N·Σ* ∩ L(form) = ∅`, or `None` when no such `N`
/// exists. Once some `N` works every larger one does too.
pub fn avoidance_threshold(g: &Grammar, u: &[Letter], v: &[Letter], form: &SForm) -> Option<usize> {
    let tr = Transducer::prefix_counter(g.alphabet(), u, v);
    let image = image_grammar(g, form, &tr);
    let root = image.start();
    if image.is_empty([&SForm(vec![Symbol::N(root)])]) {
        return Some(0);
    }
    if !image.is_finite(root) {
        return None;
    }
    let longest = image
        .finite_words(root)
        .expect("finite image")
        .iter()
        .map(Vec::len)
        .max()
        .unwrap_or(0);
    Some(if u.is_empty() { longest + 1 } else { longest })
}

/// Whether `u·v^N·Σ* ∩ L(form)` is empty for some `N`.
pub fn eventually_avoids(g: &Grammar, u: &[Letter], v: &[Letter], form: &SForm) -> bool {
    avoidance_threshold(g, u, v, form).is_some()
}

/// Whether every word of `L(form)` is strictly below `u^ω` (neither a prefix
/// of it nor larger at the first difference).
pub fn strictly_below_period(g: &Grammar, form: &SForm, u: &[Letter]) -> bool {
    let tr = Transducer::not_strictly_below(g.alphabet(), u);
    let image = image_grammar(g, form, &tr);
    image.is_empty([&SForm(vec![Symbol::N(image.start())])])
}

/// Shortest prefix length `n` of `w` such that `L(α) < w[..n]` for every
/// form in `forms`, searching `n ≤ cap`.
pub fn separating_prefix(g: &Grammar, forms: &FormSet, w: &UpWord, cap: usize) -> Option<Word> {
    let mut last_len = None;
    for n in 0..=cap {
        let p = w.finite_prefix(n);
        if last_len == Some(p.len()) {
            // a finite w has no longer prefixes
            return None;
        }
        last_len = Some(p.len());
        if g.is_empty(quot_geq_set(g, forms, &p).iter()) {
            return Some(p);
        }
    }
    None
}
