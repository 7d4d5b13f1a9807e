//! Context-free grammars over an explicitly ordered terminal alphabet, the
//! text format they are read from, and the usual decision procedures
//! (emptiness, finiteness, bounded enumeration).

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::words::{Alphabet, Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Nt(pub u32);

impl Nt {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Terminals sort before nonterminals; only used to keep form sets canonical.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    T(Letter),
    N(Nt),
}

impl Symbol {
    pub fn as_terminal(self) -> Option<Letter> {
        match self {
            Symbol::T(l) => Some(l),
            Symbol::N(_) => None,
        }
    }

    pub fn as_nonterminal(self) -> Option<Nt> {
        match self {
            Symbol::N(n) => Some(n),
            Symbol::T(_) => None,
        }
    }
}

/// A sentential form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SForm(pub Vec<Symbol>);

impl SForm {
    pub fn empty() -> Self {
        SForm(Vec::new())
    }

    pub fn terminals(w: &[Letter]) -> Self {
        SForm(w.iter().map(|&l| Symbol::T(l)).collect())
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn first(&self) -> Option<Symbol> {
        self.0.first().copied()
    }

    pub fn tail(&self) -> SForm {
        SForm(self.0.get(1..).unwrap_or_default().to_vec())
    }

    /// `w · self`.
    pub fn prepend(&self, w: &[Letter]) -> SForm {
        let mut v: Vec<Symbol> = w.iter().map(|&l| Symbol::T(l)).collect();
        v.extend_from_slice(&self.0);
        SForm(v)
    }

    pub fn concat(&self, other: &SForm) -> SForm {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        SForm(v)
    }

    pub fn as_word(&self) -> Option<Word> {
        self.0.iter().map(|s| s.as_terminal()).collect()
    }

    pub fn nonterminals(&self) -> impl Iterator<Item = Nt> + '_ {
        self.0.iter().filter_map(|s| s.as_nonterminal())
    }
}

/// Set of sentential forms in canonical (sorted, deduplicated) order.
pub type FormSet = BTreeSet<SForm>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    alphabet: Alphabet,
    names: Vec<String>,
    rules: Vec<Vec<SForm>>,
    start: Nt,
}

impl Grammar {
    /// Assembles a grammar, dropping duplicate alternatives while keeping the
    /// first occurrence order.
    pub fn new(alphabet: Alphabet, names: Vec<String>, rules: Vec<Vec<SForm>>, start: Nt) -> Self {
        assert_eq!(names.len(), rules.len());
        assert!(start.index() < names.len());
        let rules = rules
            .into_iter()
            .map(|alts| {
                let mut seen = BTreeSet::new();
                alts.into_iter()
                    .filter(|a| seen.insert(a.clone()))
                    .collect()
            })
            .collect();
        Grammar {
            alphabet,
            names,
            rules,
            start,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_grammar(text)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn start(&self) -> Nt {
        self.start
    }

    pub fn num_nonterminals(&self) -> usize {
        self.names.len()
    }

    pub fn nonterminals(&self) -> impl Iterator<Item = Nt> {
        (0..self.names.len() as u32).map(Nt)
    }

    pub fn name(&self, n: Nt) -> &str {
        &self.names[n.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn lookup(&self, name: &str) -> Option<Nt> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| Nt(i as u32))
    }

    pub fn alternatives(&self, n: Nt) -> &[SForm] {
        &self.rules[n.index()]
    }

    pub fn rules(&self) -> &[Vec<SForm>] {
        &self.rules
    }

    pub fn productions(&self) -> impl Iterator<Item = (Nt, &SForm)> {
        self.rules
            .iter()
            .enumerate()
            .flat_map(|(i, alts)| alts.iter().map(move |a| (Nt(i as u32), a)))
    }

    pub fn num_productions(&self) -> usize {
        self.rules.iter().map(Vec::len).sum()
    }

    /// Total number of symbol occurrences in production bodies plus one per
    /// production.
    pub fn size(&self) -> usize {
        self.productions().map(|(_, a)| a.len() + 1).sum()
    }

    pub fn render_symbol(&self, s: Symbol) -> String {
        match s {
            Symbol::T(l) => self.alphabet.char_of(l).to_string(),
            Symbol::N(n) => self.name(n).to_string(),
        }
    }

    /// Space-separated symbols, `_eps` for the empty form.
    pub fn render_form(&self, f: &SForm) -> String {
        if f.is_empty() {
            return "_eps".into();
        }
        f.symbols()
            .iter()
            .map(|&s| self.render_symbol(s))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn render_production(&self, n: Nt, f: &SForm) -> String {
        format!("{} -> {}", self.name(n), self.render_form(f))
    }

    /// Parses a whitespace-separated form using this grammar's symbols.
    pub fn parse_form(&self, text: &str) -> Result<SForm> {
        let mut out = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "_eps" {
                continue;
            }
            out.push(self.parse_symbol(tok, 0)?);
        }
        Ok(SForm(out))
    }

    fn parse_symbol(&self, tok: &str, line: usize) -> Result<Symbol> {
        let undeclared = || Error::UndeclaredSymbol {
            line,
            symbol: tok.to_string(),
        };
        if is_terminal_token(tok) {
            let c = tok.chars().next().unwrap();
            self.alphabet
                .letter(c)
                .map(Symbol::T)
                .ok_or_else(undeclared)
        } else if is_nonterminal_token(tok) {
            self.lookup(tok).map(Symbol::N).ok_or_else(undeclared)
        } else {
            Err(Error::Syntax {
                line,
                message: format!("bad symbol `{tok}`"),
            })
        }
    }

    /// Nonterminals deriving at least one terminal word.
    pub fn productive(&self) -> Vec<bool> {
        let mut prod = vec![false; self.num_nonterminals()];
        let mut changed = true;
        while changed {
            changed = false;
            for (n, alt) in self.productions() {
                if !prod[n.index()] && self.form_productive(alt, &prod) {
                    prod[n.index()] = true;
                    changed = true;
                }
            }
        }
        prod
    }

    fn form_productive(&self, f: &SForm, prod: &[bool]) -> bool {
        f.nonterminals().all(|m| prod[m.index()])
    }

    /// Nonterminals reachable from `roots` through production bodies.
    pub fn reachable_from(&self, roots: impl IntoIterator<Item = Nt>) -> Vec<bool> {
        let mut seen = vec![false; self.num_nonterminals()];
        let mut stack: Vec<Nt> = roots.into_iter().collect();
        while let Some(n) = stack.pop() {
            if std::mem::replace(&mut seen[n.index()], true) {
                continue;
            }
            for alt in self.alternatives(n) {
                stack.extend(alt.nonterminals().filter(|m| !seen[m.index()]));
            }
        }
        seen
    }

    /// Nonterminals reachable from `x` through productive alternatives only.
    fn usable_from(&self, x: Nt, prod: &[bool]) -> Vec<bool> {
        let mut seen = vec![false; self.num_nonterminals()];
        let mut stack = vec![x];
        while let Some(n) = stack.pop() {
            if std::mem::replace(&mut seen[n.index()], true) {
                continue;
            }
            for alt in self.alternatives(n) {
                if self.form_productive(alt, prod) {
                    stack.extend(alt.nonterminals().filter(|m| !seen[m.index()]));
                }
            }
        }
        seen
    }

    /// True iff no form in `forms` derives a terminal word.
    pub fn is_empty<'a>(&self, forms: impl IntoIterator<Item = &'a SForm>) -> bool {
        let prod = self.productive();
        !forms.into_iter().any(|f| self.form_productive(f, &prod))
    }

    /// Whether `L(x)` is finite. An unproductive nonterminal has the (finite)
    /// empty language.
    pub fn is_finite(&self, x: Nt) -> bool {
        let prod = self.productive();
        if !prod[x.index()] {
            return true;
        }
        // Nonterminals able to derive a nonempty word.
        let mut solid = vec![false; self.num_nonterminals()];
        let mut changed = true;
        while changed {
            changed = false;
            for (n, alt) in self.productions() {
                if solid[n.index()] || !self.form_productive(alt, &prod) {
                    continue;
                }
                let grows = alt.symbols().iter().any(|s| match s {
                    Symbol::T(_) => true,
                    Symbol::N(m) => solid[m.index()],
                });
                if grows {
                    solid[n.index()] = true;
                    changed = true;
                }
            }
        }
        let reach = self.usable_from(x, &prod);
        // Edges n -> m for m occurring in a productive alternative of n, marked
        // as growing when the rest of the alternative can contribute a letter.
        let mut edges: Vec<Vec<(usize, bool)>> = vec![Vec::new(); self.num_nonterminals()];
        for (n, alt) in self.productions() {
            if !reach[n.index()] || !self.form_productive(alt, &prod) {
                continue;
            }
            for (i, s) in alt.symbols().iter().enumerate() {
                if let Symbol::N(m) = s {
                    let grows = alt.symbols().iter().enumerate().any(|(j, t)| {
                        j != i
                            && match t {
                                Symbol::T(_) => true,
                                Symbol::N(k) => solid[k.index()],
                            }
                    });
                    edges[n.index()].push((m.index(), grows));
                }
            }
        }
        let comp = scc_ids(&edges);
        !edges
            .iter()
            .enumerate()
            .any(|(n, out)| out.iter().any(|&(m, grows)| grows && comp[n] == comp[m]))
    }

    /// All words of `L(x)`; an error when the language is infinite.
    pub fn finite_words(&self, x: Nt) -> Result<BTreeSet<Word>> {
        if !self.is_finite(x) {
            return Err(Error::InfiniteLanguage(self.name(x).to_string()));
        }
        let reach = self.usable_from(x, &self.productive());
        let mut langs: Vec<BTreeSet<Word>> = vec![BTreeSet::new(); self.num_nonterminals()];
        let mut changed = true;
        while changed {
            changed = false;
            for (n, alt) in self.productions() {
                if !reach[n.index()] {
                    continue;
                }
                for w in concat_languages(alt, &langs, usize::MAX) {
                    if langs[n.index()].insert(w) {
                        changed = true;
                    }
                }
            }
        }
        Ok(std::mem::take(&mut langs[x.index()]))
    }

    /// Every word of length at most `max_len` derivable from some form in
    /// `forms`, sorted lexicographically. `budget` caps the number of words
    /// held in memory at once.
    pub fn lex_enumerate<'a>(
        &self,
        forms: impl IntoIterator<Item = &'a SForm>,
        max_len: usize,
        budget: usize,
    ) -> Result<Vec<Word>> {
        let langs = self.bounded_languages(max_len, budget)?;
        let mut out = BTreeSet::new();
        for f in forms {
            out.extend(concat_languages(f, &langs, max_len));
            if out.len() > budget {
                return Err(Error::BudgetExceeded {
                    what: "enumeration",
                    limit: budget,
                });
            }
        }
        Ok(out.into_iter().collect())
    }

    /// `L(X) ∩ Σ^{≤max_len}` for every nonterminal, by fixpoint iteration.
    pub fn bounded_languages(&self, max_len: usize, budget: usize) -> Result<Vec<BTreeSet<Word>>> {
        let mut langs: Vec<BTreeSet<Word>> = vec![BTreeSet::new(); self.num_nonterminals()];
        let mut total = 0usize;
        let mut changed = true;
        while changed {
            changed = false;
            for (n, alt) in self.productions() {
                for w in concat_languages(alt, &langs, max_len) {
                    if langs[n.index()].insert(w) {
                        changed = true;
                        total += 1;
                        if total > budget {
                            return Err(Error::BudgetExceeded {
                                what: "enumeration",
                                limit: budget,
                            });
                        }
                    }
                }
            }
        }
        Ok(langs)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

/// Words of `L(form)` no longer than `max_len`, given bounded languages for
/// each nonterminal.
fn concat_languages(form: &SForm, langs: &[BTreeSet<Word>], max_len: usize) -> BTreeSet<Word> {
    let mut acc: BTreeSet<Word> = BTreeSet::from([Vec::new()]);
    for s in form.symbols() {
        let mut next = BTreeSet::new();
        match s {
            Symbol::T(l) => {
                for mut w in acc {
                    if w.len() < max_len {
                        w.push(*l);
                        next.insert(w);
                    }
                }
            }
            Symbol::N(m) => {
                for w in &acc {
                    for v in &langs[m.index()] {
                        if w.len() + v.len() <= max_len {
                            let mut x = w.clone();
                            x.extend_from_slice(v);
                            next.insert(x);
                        }
                    }
                }
            }
        }
        if next.is_empty() {
            return next;
        }
        acc = next;
    }
    acc
}

/// Strongly connected component id per vertex (Tarjan).
pub(crate) fn scc_ids(edges: &[Vec<(usize, bool)>]) -> Vec<usize> {
    let mut g = petgraph::graph::DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..edges.len()).map(|_| g.add_node(())).collect();
    for (n, out) in edges.iter().enumerate() {
        for &(m, _) in out {
            g.add_edge(nodes[n], nodes[m], ());
        }
    }
    let mut comp = vec![0; edges.len()];
    for (i, scc) in petgraph::algo::tarjan_scc(&g).into_iter().enumerate() {
        for v in scc {
            comp[v.index()] = i;
        }
    }
    comp
}

fn is_terminal_token(tok: &str) -> bool {
    let mut cs = tok.chars();
    matches!((cs.next(), cs.next()), (Some(c), None) if c.is_ascii_lowercase())
}

fn is_nonterminal_token(tok: &str) -> bool {
    let mut cs = tok.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_uppercase())
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// Reads the grammar file format:
///
/// ```text
/// # comment
/// order: b < a
/// start: X
/// X -> a X | b
/// ```
pub fn parse_grammar(text: &str) -> Result<Grammar> {
    let mut order: Option<(usize, Vec<char>)> = None;
    let mut start: Option<(usize, String)> = None;
    let mut prods: Vec<(usize, String, Vec<Vec<String>>)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        let syntax = |message: String| Error::Syntax { line, message };
        if let Some(rest) = content.strip_prefix("order:") {
            if order.is_some() {
                return Err(syntax("duplicate `order:` header".into()));
            }
            let mut letters = Vec::new();
            for part in rest.split('<') {
                let tok = part.trim();
                if !is_terminal_token(tok) {
                    return Err(syntax(format!("`{tok}` is not a terminal letter")));
                }
                letters.push(tok.chars().next().unwrap());
            }
            order = Some((line, letters));
        } else if let Some(rest) = content.strip_prefix("start:") {
            if start.is_some() {
                return Err(syntax("duplicate `start:` header".into()));
            }
            let tok = rest.trim();
            if !is_nonterminal_token(tok) {
                return Err(syntax(format!("`{tok}` is not a nonterminal")));
            }
            start = Some((line, tok.to_string()));
        } else if let Some((lhs, rhs)) = content.split_once("->") {
            let lhs = lhs.trim();
            if !is_nonterminal_token(lhs) {
                return Err(syntax(format!("`{lhs}` is not a nonterminal")));
            }
            let mut bodies = Vec::new();
            for body in rhs.split('|') {
                let toks: Vec<String> = body.split_whitespace().map(str::to_string).collect();
                if toks.is_empty() {
                    return Err(syntax("empty alternative (write `_eps`)".into()));
                }
                if toks.iter().any(|t| t == "_eps") {
                    if toks.len() != 1 {
                        return Err(syntax("`_eps` must stand alone".into()));
                    }
                    bodies.push(Vec::new());
                } else {
                    bodies.push(toks);
                }
            }
            prods.push((line, lhs.to_string(), bodies));
        } else {
            return Err(syntax(format!("unrecognized line `{content}`")));
        }
    }

    let (order_line, letters) = order.ok_or(Error::MissingHeader("order"))?;
    let (start_line, start_name) = start.ok_or(Error::MissingHeader("start"))?;
    let alphabet = Alphabet::new(letters).map_err(|e| match e {
        Error::Syntax { message, .. } => Error::Syntax {
            line: order_line,
            message,
        },
        other => other,
    })?;

    let mut index: HashMap<String, Nt> = HashMap::new();
    let mut names = Vec::new();
    for (_, lhs, _) in &prods {
        if !index.contains_key(lhs) {
            index.insert(lhs.clone(), Nt(names.len() as u32));
            names.push(lhs.clone());
        }
    }
    let start = *index.get(&start_name).ok_or(Error::UndeclaredSymbol {
        line: start_line,
        symbol: start_name.clone(),
    })?;

    let mut rules = vec![Vec::new(); names.len()];
    let shell = Grammar {
        alphabet,
        names,
        rules: vec![Vec::new(); index.len()],
        start,
    };
    for (line, lhs, bodies) in prods {
        let n = index[&lhs];
        for body in bodies {
            let form = body
                .iter()
                .map(|t| shell.parse_symbol(t, line))
                .collect::<Result<Vec<_>>>()?;
            rules[n.index()].push(SForm(form));
        }
    }
    Ok(Grammar::new(shell.alphabet, shell.names, rules, start))
}

impl fmt::Display for Grammar {
    /// Writes the grammar back in the file format it was read from.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let order: Vec<String> = self.alphabet.chars().iter().map(char::to_string).collect();
        writeln!(f, "order: {}", order.join(" < "))?;
        writeln!(f, "start: {}", self.name(self.start))?;
        for n in self.nonterminals() {
            let alts = self.alternatives(n);
            if alts.is_empty() {
                continue;
            }
            let bodies: Vec<String> = alts.iter().map(|a| self.render_form(a)).collect();
            writeln!(f, "{} -> {}", self.name(n), bodies.join(" | "))?;
        }
        Ok(())
    }
}
